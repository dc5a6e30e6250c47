//! Small dense linear algebra over Q and Z: determinants, inverses and the
//! column Hermite normal form used to canonicalize lattices.

use crate::rational::{floor, qz, Q, Z};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Row-major rational matrix.
pub type Mat = Vec<Vec<Q>>;

pub fn zeros(r: usize, c: usize) -> Mat {
    vec![vec![Q::zero(); c]; r]
}

pub fn identity(n: usize) -> Mat {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Q::one();
    }
    m
}

pub fn transpose(m: &Mat) -> Mat {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len()).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut s = Q::zero();
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][j].is_zero() {
                            s += &row[k] * &b[k][j];
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &Mat, v: &[Q]) -> Vec<Q> {
    a.iter()
        .map(|row| {
            row.iter().zip(v).fold(Q::zero(), |acc, (x, y)| {
                if x.is_zero() || y.is_zero() {
                    acc
                } else {
                    acc + x * y
                }
            })
        })
        .collect()
}

pub fn det(m: &Mat) -> Q {
    let n = m.len();
    let mut a = m.clone();
    let mut d = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return Q::zero();
        };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        let pivot = a[c][c].clone();
        d *= &pivot;
        for r in c + 1..n {
            if a[r][c].is_zero() {
                continue;
            }
            let f = &a[r][c] / &pivot;
            for k in c..n {
                let t = &f * &a[c][k];
                a[r][k] -= t;
            }
        }
    }
    d
}

/// Inverse of a square rational matrix, `None` when singular.
pub fn inverse(m: &Mat) -> Option<Mat> {
    let n = m.len();
    let mut a: Mat = m.iter().cloned().zip(identity(n)).map(|(mut r, e)| {
        r.extend(e);
        r
    }).collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(p, c);
        let inv = a[c][c].recip();
        for k in 0..2 * n {
            a[c][k] *= &inv;
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                for k in 0..2 * n {
                    let t = &f * &a[c][k];
                    a[r][k] -= t;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Solves `m x = b` for square invertible `m`.
pub fn solve(m: &Mat, b: &[Q]) -> Option<Vec<Q>> {
    let inv = inverse(m)?;
    Some(mat_vec(&inv, b))
}

/// Column Hermite normal form of the lattice spanned by `gens` (integer
/// column vectors of length `n`).
///
/// The result is row-major, upper triangular, has a positive diagonal and
/// every entry right of the diagonal reduced into `[0, diagonal)`. Returns
/// `None` when the generators do not span a rank-`n` lattice.
pub fn hnf(n: usize, gens: &[Vec<Z>]) -> Option<Vec<Vec<Z>>> {
    let mut cols: Vec<Vec<Z>> =
        gens.iter().filter(|g| g.iter().any(|x| !x.is_zero())).cloned().collect();
    let mut pivots: Vec<Vec<Z>> = vec![Vec::new(); n];
    for i in (0..n).rev() {
        loop {
            let nz: Vec<usize> = (0..cols.len()).filter(|&k| !cols[k][i].is_zero()).collect();
            if nz.is_empty() {
                return None;
            }
            if nz.len() == 1 {
                break;
            }
            let m = *nz.iter().min_by(|&&a, &&b| cols[a][i].abs().cmp(&cols[b][i].abs())).unwrap();
            let piv = cols[m].clone();
            for &k in &nz {
                if k == m {
                    continue;
                }
                let qk = cols[k][i].div_floor(&piv[i]);
                if qk.is_zero() {
                    continue;
                }
                for r in 0..=i {
                    let t = &qk * &piv[r];
                    cols[k][r] -= t;
                }
            }
        }
        let idx = (0..cols.len()).find(|&k| !cols[k][i].is_zero()).unwrap();
        let mut p = cols.swap_remove(idx);
        if p[i].is_negative() {
            p.iter_mut().for_each(|x| *x = -x.clone());
        }
        pivots[i] = p;
        cols.retain(|c| c.iter().any(|x| !x.is_zero()));
    }
    let mut h: Vec<Vec<Z>> = (0..n).map(|r| (0..n).map(|c| pivots[c][r].clone()).collect()).collect();
    for j in 0..n {
        for i in (0..j).rev() {
            let qq = h[i][j].div_floor(&h[i][i]);
            if qq.is_zero() {
                continue;
            }
            for r in 0..=i {
                let t = &qq * &h[r][i];
                h[r][j] -= t;
            }
        }
    }
    Some(h)
}

pub fn hnf_det(h: &[Vec<Z>]) -> Z {
    (0..h.len()).fold(Z::one(), |acc, i| acc * &h[i][i])
}

/// Reduces `x` modulo the lattice with (upper-triangular) HNF `h`, landing
/// in the box `0 <= x_i < h_ii`.
pub fn reduce_mod_hnf(h: &[Vec<Z>], x: &[Q]) -> (Vec<Q>, Vec<Z>) {
    let n = h.len();
    let mut x = x.to_vec();
    let mut quot = vec![Z::zero(); n];
    for i in (0..n).rev() {
        let qq = floor(&(&x[i] / qz(h[i][i].clone())));
        if !qq.is_zero() {
            for r in 0..=i {
                x[r] -= qz(&qq * &h[r][i]);
            }
        }
        quot[i] = qq;
    }
    (x, quot)
}

/// Gram-Schmidt data `(mu, B)` of the basis whose Gram matrix is `g`, or
/// `None` when some `B_i` is not positive.
fn gram_schmidt(g: &Mat) -> Option<(Mat, Vec<Q>)> {
    let n = g.len();
    let mut mu = zeros(n, n);
    let mut b = vec![Q::zero(); n];
    for i in 0..n {
        for j in 0..i {
            let mut v = g[i][j].clone();
            for l in 0..j {
                v -= &mu[j][l] * &mu[i][l] * &b[l];
            }
            mu[i][j] = v / &b[j];
        }
        let mut v = g[i][i].clone();
        for l in 0..i {
            v -= &mu[i][l] * &mu[i][l] * &b[l];
        }
        if !v.is_positive() {
            return None;
        }
        b[i] = v;
    }
    Some((mu, b))
}

/// LLL reduction (`delta = 3/4`) of the basis with Gram matrix `g`.
///
/// Returns a unimodular `u` such that the rows `sum_j u_ij b_j` are reduced.
/// Stops early, still unimodular, if `g` turns out not to be positive definite.
pub fn lll_transform(g: &Mat) -> Vec<Vec<Z>> {
    let n = g.len();
    let mut u: Vec<Vec<Z>> = (0..n).map(|i| (0..n).map(|j| if i == j { Z::one() } else { Z::zero() }).collect()).collect();
    let delta = Q::new(Z::from(3), Z::from(4));
    let half = Q::new(Z::one(), Z::from(2));
    let gram = |u: &[Vec<Z>]| -> Mat {
        let uq: Mat = u.iter().map(|r| r.iter().map(|z| qz(z.clone())).collect()).collect();
        mat_mul(&mat_mul(&uq, g), &transpose(&uq))
    };
    let mut k = 1;
    let mut steps = 0;
    while k < n && steps < 10_000 {
        steps += 1;
        for j in (0..k).rev() {
            let Some((mu, _)) = gram_schmidt(&gram(&u)) else { return u };
            let r = floor(&(&mu[k][j] + &half));
            if !r.is_zero() {
                let row: Vec<Z> = u[j].iter().map(|z| z * &r).collect();
                for (a, b) in u[k].iter_mut().zip(row) {
                    *a -= b;
                }
            }
        }
        let Some((mu, b)) = gram_schmidt(&gram(&u)) else { return u };
        if b[k] < (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &b[k - 1] {
            u.swap(k, k - 1);
            k = if k > 1 { k - 1 } else { 1 };
        } else {
            k += 1;
        }
    }
    u
}

/// All integer vectors `c` with `0 <= c_i < bounds_i`, in lexicographic order.
pub fn box_vectors(bounds: &[Z]) -> Vec<Vec<Z>> {
    let mut out = vec![Vec::new()];
    for b in bounds {
        let mut next = Vec::new();
        for v in &out {
            let mut k = Z::zero();
            while &k < b {
                let mut w = v.clone();
                w.push(k.clone());
                next.push(w);
                k += 1;
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, qi};

    fn zv(v: &[i64]) -> Vec<Z> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn lll_shortens_a_skewed_basis() {
        // rows (1, 0) and (1000, 1) under the standard inner product
        let b: Mat = vec![vec![qi(1), qi(0)], vec![qi(1000), qi(1)]];
        let u = lll_transform(&mat_mul(&b, &transpose(&b)));
        let uq: Mat = u.iter().map(|r| r.iter().map(|z| qz(z.clone())).collect()).collect();
        assert_eq!(det(&uq).abs(), qi(1));
        let red = mat_mul(&uq, &b);
        for row in &red {
            assert_eq!(row.iter().map(|x| x * x).fold(Q::zero(), |a, x| a + x), qi(1));
        }
    }

    #[test]
    fn lll_stops_on_an_indefinite_form() {
        let g: Mat = vec![vec![qi(1), qi(0)], vec![qi(0), qi(-1)]];
        let u = lll_transform(&g);
        assert_eq!(u, vec![zv(&[1, 0]), zv(&[0, 1])]);
    }

    #[test]
    fn hnf_of_gaussian_prime_lattice() {
        // (1+i) in Z[i]: generated by 1+i and i(1+i) = -1+i
        let h = hnf(2, &[zv(&[1, 1]), zv(&[-1, 1])]).unwrap();
        assert_eq!(h, vec![zv(&[2, 1]), zv(&[0, 1])]);
    }

    #[test]
    fn hnf_is_generator_order_independent() {
        let a = hnf(3, &[zv(&[4, 1, 0]), zv(&[2, 6, 3]), zv(&[0, 0, 5]), zv(&[7, 7, 7])]).unwrap();
        let b = hnf(3, &[zv(&[7, 7, 7]), zv(&[0, 0, 5]), zv(&[2, 6, 3]), zv(&[4, 1, 0])]).unwrap();
        assert_eq!(a, b);
        assert!(hnf(2, &[zv(&[1, 2]), zv(&[2, 4])]).is_none());
    }

    #[test]
    fn inverse_and_det() {
        let m = vec![vec![qi(2), qi(1)], vec![qi(7), qi(4)]];
        assert_eq!(det(&m), qi(1));
        let inv = inverse(&m).unwrap();
        assert_eq!(mat_mul(&m, &inv), identity(2));
    }

    #[test]
    fn reduction_lands_in_box() {
        let h = vec![zv(&[2, 1]), zv(&[0, 3])];
        let (x, _) = reduce_mod_hnf(&h, &[qi(-5), qi(7)]);
        assert!(x[1] >= qi(0) && x[1] < qi(3) && x[0] >= qi(0) && x[0] < qi(2));
        assert_eq!(box_vectors(&zv(&[2, 3])).len(), 6);
    }
}
