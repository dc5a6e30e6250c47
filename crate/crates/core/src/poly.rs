//! Univariate polynomials over Q and F_p, and a small sparse multivariate
//! polynomial type used for norm forms.

use crate::interval::ComplexBox;
use crate::linalg::{det, Mat};
use crate::rational::{qi, Q, Z};
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;

/// Coefficients from the constant term upward.
pub type UPoly = Vec<Q>;

pub fn trim(p: &mut UPoly) {
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

pub fn degree(p: &UPoly) -> usize {
    let mut d = p.len().saturating_sub(1);
    while d > 0 && p[d].is_zero() {
        d -= 1;
    }
    d
}

pub fn eval(p: &UPoly, x: &Q) -> Q {
    p.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
}

pub fn eval_box(p: &UPoly, z: &ComplexBox) -> ComplexBox {
    let mut acc = ComplexBox::real(Q::zero());
    for c in p.iter().rev() {
        acc = acc.mul(z).add(&ComplexBox::real(c.clone()));
    }
    acc
}

pub fn derivative(p: &UPoly) -> UPoly {
    if p.len() <= 1 {
        return vec![Q::zero()];
    }
    p.iter().enumerate().skip(1).map(|(i, c)| c * qi(i as i64)).collect()
}

pub fn mul(a: &UPoly, b: &UPoly) -> UPoly {
    let mut out = vec![Q::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

/// Remainder of `a` modulo the monic polynomial `m`.
pub fn rem_monic(a: &UPoly, m: &UPoly) -> UPoly {
    let n = m.len() - 1;
    let mut r = a.clone();
    while r.len() > n {
        let lead = r.pop().unwrap();
        if lead.is_zero() {
            continue;
        }
        let off = r.len() - n;
        for i in 0..n {
            let t = &lead * &m[i];
            r[off + i] -= t;
        }
    }
    r.resize(n.max(1), Q::zero());
    r
}

/// Polynomial division with remainder over Q.
pub fn divrem(a: &UPoly, b: &UPoly) -> (UPoly, UPoly) {
    let db = degree(b);
    let lb = b[db].clone();
    let mut r = a.clone();
    trim(&mut r);
    if degree(&r) < db || (r.len() == 1 && r[0].is_zero()) {
        return (vec![Q::zero()], r);
    }
    let mut qt = vec![Q::zero(); degree(&r) - db + 1];
    while !(r.len() == 1 && r[0].is_zero()) && degree(&r) >= db {
        let dr = degree(&r);
        let c = &r[dr] / &lb;
        qt[dr - db] = c.clone();
        for i in 0..=db {
            let t = &c * &b[i];
            r[dr - db + i] -= t;
        }
        r.truncate(dr);
        if r.is_empty() {
            r.push(Q::zero());
        }
        trim(&mut r);
    }
    (qt, r)
}

/// Number of distinct real roots via a Sturm sequence (exact).
pub fn count_real_roots(p: &UPoly) -> usize {
    let mut seq = vec![p.clone(), derivative(p)];
    loop {
        let n = seq.len();
        let (_, r) = divrem(&seq[n - 2], &seq[n - 1]);
        if r.len() == 1 && r[0].is_zero() {
            break;
        }
        seq.push(r.into_iter().map(|c| -c).collect());
    }
    let signs_at = |pos: bool| -> usize {
        let signs: Vec<i32> = seq
            .iter()
            .filter_map(|s| {
                let d = degree(s);
                let lead = &s[d];
                if lead.is_zero() {
                    return None;
                }
                let sg = if lead.is_positive() { 1 } else { -1 };
                Some(if pos || d % 2 == 0 { sg } else { -sg })
            })
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    };
    signs_at(false) - signs_at(true)
}

/// Sylvester resultant of two nonconstant polynomials.
pub fn resultant(a: &UPoly, b: &UPoly) -> Q {
    let m = degree(a);
    let n = degree(b);
    let size = m + n;
    let mut s: Mat = vec![vec![Q::zero(); size]; size];
    for i in 0..n {
        for j in 0..=m {
            s[i][i + j] = a[m - j].clone();
        }
    }
    for i in 0..m {
        for j in 0..=n {
            s[n + i][i + j] = b[n - j].clone();
        }
    }
    det(&s)
}

/// Discriminant of a monic polynomial: `(-1)^(n(n-1)/2) Res(f, f')`.
pub fn discriminant(f: &UPoly) -> Q {
    let n = degree(f);
    if n == 1 {
        return Q::one();
    }
    let r = resultant(f, &derivative(f));
    if (n * (n - 1) / 2) % 2 == 1 {
        -r
    } else {
        r
    }
}

/// Characteristic polynomial `det(xI - m)` via Faddeev–LeVerrier.
pub fn charpoly(m: &Mat) -> UPoly {
    let n = m.len();
    let mut coeffs = vec![Q::zero(); n + 1];
    coeffs[n] = Q::one();
    let mut mk: Mat = vec![vec![Q::zero(); n]; n];
    for k in 1..=n {
        // M_k = m * (M_{k-1} + c_{n-k+1} I)
        let mut prev = mk.clone();
        for (i, row) in prev.iter_mut().enumerate() {
            row[i] += &coeffs[n - k + 1];
        }
        mk = crate::linalg::mat_mul(m, &prev);
        let tr = (0..n).fold(Q::zero(), |acc, i| acc + &mk[i][i]);
        coeffs[n - k] = -tr / qi(k as i64);
    }
    coeffs
}

// ---------------------------------------------------------------- F_p

fn fp_trim(p: &mut Vec<u64>) {
    while p.len() > 1 && *p.last().unwrap() == 0 {
        p.pop();
    }
}

fn fp_eval(p: &[u64], x: u64, m: u64) -> u64 {
    p.iter().rev().fold(0u128, |acc, &c| (acc * x as u128 + c as u128) % m as u128) as u64
}

fn fp_inv(a: u64, m: u64) -> u64 {
    let mut r = 1u128;
    let mut b = a as u128 % m as u128;
    let mut e = m - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m as u128;
        }
        b = b * b % m as u128;
        e >>= 1;
    }
    r as u64
}

/// Divides `a` by the monic `b` over F_m; returns (quotient, remainder).
fn fp_divrem(a: &[u64], b: &[u64], m: u64) -> (Vec<u64>, Vec<u64>) {
    let db = b.len() - 1;
    let mut r = a.to_vec();
    if r.len() <= db {
        return (vec![0], r);
    }
    let mut qt = vec![0u64; r.len() - db];
    for i in (db..r.len()).rev() {
        let c = r[i] % m;
        qt[i - db] = c;
        if c == 0 {
            continue;
        }
        for j in 0..=db {
            let t = (c as u128 * b[j] as u128 % m as u128) as u64;
            r[i - db + j] = (r[i - db + j] + m - t) % m;
        }
    }
    r.truncate(db.max(1));
    fp_trim(&mut r);
    fp_trim(&mut qt);
    (qt, r)
}

/// Largest prime for which the brute-force quadratic-factor search runs.
pub const FP_QUADRATIC_SEARCH_LIMIT: u64 = 3000;

/// Factors a monic integer polynomial of degree at most 4 modulo the prime
/// `p`. Factors are monic, returned with multiplicities, sorted by
/// (degree, coefficients). `None` when the search limits are exceeded.
pub fn factor_mod_p(f: &[Z], p: u64) -> Option<Vec<(Vec<u64>, u32)>> {
    let pz = Z::from(p);
    let mut g: Vec<u64> = f
        .iter()
        .map(|c| {
            let r = ((c % &pz) + &pz) % &pz;
            r.to_u64().unwrap()
        })
        .collect();
    fp_trim(&mut g);
    let lead = *g.last().unwrap();
    if lead != 1 {
        let inv = fp_inv(lead, p);
        g.iter_mut().for_each(|c| *c = (*c as u128 * inv as u128 % p as u128) as u64);
    }
    let mut out: Vec<(Vec<u64>, u32)> = Vec::new();
    if g.len() > 2 {
        if p > 2_000_000 {
            return None;
        }
        let mut r = 0u64;
        while r < p && g.len() > 1 {
            let mut mult = 0;
            while g.len() > 1 && fp_eval(&g, r, p) == 0 {
                let lin = vec![(p - r) % p, 1];
                g = fp_divrem(&g, &lin, p).0;
                mult += 1;
            }
            if mult > 0 {
                out.push((vec![(p - r) % p, 1], mult));
            }
            r += 1;
        }
    } else if g.len() == 2 {
        out.push((g.clone(), 1));
        g = vec![1];
    }
    match g.len() - 1 {
        0 => {}
        2 | 3 => out.push((g.clone(), 1)),
        4 => {
            if p > FP_QUADRATIC_SEARCH_LIMIT {
                return None;
            }
            let mut found = None;
            'search: for a in 0..p {
                for b in 0..p {
                    let qd = vec![b, a, 1];
                    let (qt, r) = fp_divrem(&g, &qd, p);
                    if r.iter().all(|&c| c == 0) {
                        found = Some((qd, qt));
                        break 'search;
                    }
                }
            }
            match found {
                Some((a, b)) if a == b => out.push((a, 2)),
                Some((a, b)) => {
                    out.push((a, 1));
                    out.push((b, 1));
                }
                None => out.push((g.clone(), 1)),
            }
        }
        _ => unreachable!("degree is at most 4"),
    }
    out.sort_by(|a, b| (a.0.len(), a.0.iter().rev().collect::<Vec<_>>()).cmp(&(b.0.len(), b.0.iter().rev().collect::<Vec<_>>())));
    Some(out)
}

// ---------------------------------------------------------------- multivariate

/// Sparse polynomial in `nvars` variables; keys are exponent vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MPoly {
    pub nvars: usize,
    pub terms: BTreeMap<Vec<u32>, Q>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        let mut p = MPoly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    /// `sum_i coeffs[i] * y_i`.
    pub fn linear(coeffs: &[Q]) -> Self {
        let n = coeffs.len();
        let mut p = MPoly::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                let mut e = vec![0; n];
                e[i] = 1;
                p.terms.insert(e, c.clone());
            }
        }
        p
    }

    pub fn add(&self, o: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            let v = out.terms.entry(e.clone()).or_insert_with(Q::zero);
            *v += c;
            if v.is_zero() {
                out.terms.remove(e);
            }
        }
        out
    }

    pub fn neg(&self) -> MPoly {
        MPoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }

    pub fn mul(&self, o: &MPoly) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let v = out.terms.entry(e.clone()).or_insert_with(Q::zero);
                *v += c1 * c2;
                if v.is_zero() {
                    out.terms.remove(&e);
                }
            }
        }
        out
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn eval(&self, y: &[Q]) -> Q {
        let mut s = Q::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (yi, &k) in y.iter().zip(e) {
                if k > 0 {
                    t *= num_traits::pow(yi.clone(), k as usize);
                }
            }
            s += t;
        }
        s
    }

    /// `(1/alpha!) d^alpha P`, the Taylor coefficient polynomial for `alpha`.
    pub fn taylor_coefficient(&self, alpha: &[u32]) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        'terms: for (e, c) in &self.terms {
            let mut coef = c.clone();
            let mut ne = e.clone();
            for i in 0..self.nvars {
                if e[i] < alpha[i] {
                    continue 'terms;
                }
                // binomial(e_i, alpha_i)
                let mut b = Z::one();
                for k in 0..alpha[i] {
                    b = b * Z::from(e[i] - k) / Z::from(k + 1);
                }
                coef *= Q::from_integer(b);
                ne[i] = e[i] - alpha[i];
            }
            let v = out.terms.entry(ne).or_insert_with(Q::zero);
            *v += coef;
        }
        out.terms.retain(|_, c| !c.is_zero());
        out
    }
}

/// Determinant of a square matrix of polynomials (Leibniz expansion; n <= 4).
pub fn mpoly_det(m: &[Vec<MPoly>]) -> MPoly {
    let n = m.len();
    let nvars = m[0][0].nvars;
    let mut total = MPoly::zero(nvars);
    for (perm, sign) in permutations(n) {
        let mut t = MPoly::constant(nvars, Q::one());
        for (i, &j) in perm.iter().enumerate() {
            t = t.mul(&m[i][j]);
            if t.terms.is_empty() {
                break;
            }
        }
        total = if sign > 0 { total.add(&t) } else { total.add(&t.neg()) };
    }
    total
}

pub fn permutations(n: usize) -> Vec<(Vec<usize>, i32)> {
    if n == 0 {
        return vec![(Vec::new(), 1)];
    }
    let mut out = Vec::new();
    for (p, s) in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            // inserting at `pos` creates (len - pos) inversions
            let sign = if (p.len() - pos) % 2 == 0 { s } else { -s };
            out.push((q, sign));
        }
    }
    out
}

/// Every exponent vector of total degree `1..=deg` in `n` variables.
pub fn monomials_up_to(n: usize, deg: u32) -> Vec<Vec<u32>> {
    fn rec(i: usize, n: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for k in 0..=left {
            cur.push(k);
            rec(i + 1, n, left - k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, deg, &mut Vec::new(), &mut out);
    out.retain(|e| e.iter().sum::<u32>() > 0);
    out
}
