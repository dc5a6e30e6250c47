//! Fractional ideals of the maximal order, stored as canonical Hermite
//! normal forms over the integral basis.

use crate::field::{FieldElement, FieldError, NumberField};
use crate::linalg::{self, Mat};
use crate::rational::{lcm_denoms, qz, Q, Z};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// The lattice `(1/den) * H * Z^n`, with `H` in column Hermite normal form
/// over the integral basis and `gcd(den, entries of H) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FractionalIdeal {
    #[serde(with = "z_matrix")]
    pub hnf: Vec<Vec<Z>>,
    #[serde(with = "z_scalar")]
    pub den: Z,
}

mod z_matrix {
    use super::Z;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &[Vec<Z>], s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<Vec<String>> = m.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Z>>, D::Error> {
        let v: Vec<Vec<String>> = Vec::deserialize(d)?;
        v.iter()
            .map(|r| r.iter().map(|x| x.parse().map_err(serde::de::Error::custom)).collect())
            .collect()
    }
}

mod z_scalar {
    use super::Z;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Z, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Z, D::Error> {
        let v = String::deserialize(d)?;
        v.parse().map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for FractionalIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .hnf
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
            .collect();
        write!(f, "(1/{})[{}]", self.den, rows.join("; "))
    }
}

impl FractionalIdeal {
    pub fn degree(&self) -> usize {
        self.hnf.len()
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    /// Z-basis of the lattice (columns of the HNF over the denominator).
    pub fn basis(&self) -> Vec<FieldElement> {
        let n = self.hnf.len();
        let d = qz(self.den.clone());
        (0..n)
            .map(|j| FieldElement::new((0..n).map(|i| qz(self.hnf[i][j].clone()) / &d).collect()))
            .collect()
    }

    /// Basis matrix with the basis vectors as columns, in integral coordinates.
    pub fn basis_matrix(&self) -> Mat {
        let d = qz(self.den.clone());
        self.hnf.iter().map(|r| r.iter().map(|x| qz(x.clone()) / &d).collect()).collect()
    }

    /// Coordinates of `x` on the ideal's Z-basis.
    pub fn lattice_coords(&self, x: &FieldElement) -> Vec<Q> {
        let n = self.hnf.len();
        let d = qz(self.den.clone());
        let mut y: Vec<Q> = x.coords.iter().map(|c| c * &d).collect();
        let mut out = vec![Q::zero(); n];
        for i in (0..n).rev() {
            let c = &y[i] / qz(self.hnf[i][i].clone());
            for (r, yr) in y.iter_mut().enumerate().take(i + 1) {
                if !self.hnf[r][i].is_zero() {
                    *yr -= &c * qz(self.hnf[r][i].clone());
                }
            }
            out[i] = c;
        }
        out
    }

    pub fn contains(&self, x: &FieldElement) -> bool {
        self.lattice_coords(x).iter().all(crate::rational::is_integer)
    }

    /// `ideal / den`-free integer part: the ideal scaled by `den`.
    pub fn numerator(&self) -> FractionalIdeal {
        FractionalIdeal { hnf: self.hnf.clone(), den: Z::one() }
    }

    pub fn scale(&self, c: &Q) -> FractionalIdeal {
        assert!(!c.is_zero(), "scaling an ideal by zero");
        let c = c.abs();
        let n = self.hnf.len();
        let gens: Vec<Vec<Q>> = (0..n)
            .map(|j| (0..n).map(|i| qz(self.hnf[i][j].clone()) * c.numer().clone()).collect())
            .collect();
        canonical(n, &gens, &(&self.den * c.denom())).expect("nonzero scaling keeps full rank")
    }

    /// Norm `[O : I]` extended multiplicatively.
    pub fn norm(&self) -> Q {
        let n = self.hnf.len() as u32;
        Q::new(linalg::hnf_det(&self.hnf), crate::rational::zpow(&self.den, n))
    }

    /// Reduces `x` into the half-open parallelepiped spanned by the HNF basis:
    /// returns the representative and the lattice element subtracted.
    pub fn reduce(&self, x: &FieldElement) -> (FieldElement, FieldElement) {
        let t = self.lattice_coords(x);
        let fl: Vec<Q> = t.iter().map(|c| qz(crate::rational::floor(c))).collect();
        let shift = self.combine(&fl);
        (x - &shift, shift)
    }

    /// The element with the given coordinates on the ideal's Z-basis.
    pub fn combine(&self, t: &[Q]) -> FieldElement {
        let n = self.hnf.len();
        let d = qz(self.den.clone());
        let coords = (0..n)
            .map(|i| {
                (i..n).fold(Q::zero(), |acc, j| {
                    if t[j].is_zero() || self.hnf[i][j].is_zero() {
                        acc
                    } else {
                        acc + &t[j] * qz(self.hnf[i][j].clone())
                    }
                }) / &d
            })
            .collect();
        FieldElement::new(coords)
    }
}

/// Canonical form of the lattice spanned by `gens / den` (rational coordinate
/// vectors). Returns `None` when the span has rank below `n`.
fn canonical(n: usize, gens: &[Vec<Q>], den: &Z) -> Option<FractionalIdeal> {
    let d0 = lcm_denoms(gens.iter().flatten());
    let zg: Vec<Vec<Z>> =
        gens.iter().map(|g| g.iter().map(|x| (x * qz(d0.clone())).to_integer()).collect()).collect();
    let h = linalg::hnf(n, &zg)?;
    let mut den = den * d0;
    let g = h.iter().flatten().fold(den.clone(), |acc, x| acc.gcd(x));
    let h = if g.is_one() {
        h
    } else {
        den /= &g;
        h.into_iter().map(|r| r.into_iter().map(|x| x / &g).collect()).collect()
    };
    Some(FractionalIdeal { hnf: h, den })
}

impl NumberField {
    /// The O-module generated by `gens`.
    pub fn ideal_from_gens(&self, gens: &[FieldElement]) -> Result<FractionalIdeal, FieldError> {
        let n = self.degree();
        let nz: Vec<&FieldElement> = gens.iter().filter(|g| !g.is_zero()).collect();
        if nz.is_empty() {
            return Err(FieldError::ZeroIdeal);
        }
        let mut all = Vec::with_capacity(nz.len() * n);
        for g in nz {
            for j in 0..n {
                all.push(self.mul(g, &self.basis_element(j)).coords);
            }
        }
        Ok(canonical(n, &all, &Z::one()).expect("nonzero generator spans full rank"))
    }

    /// Canonical lattice spanned over Z by elements already known to form an
    /// O-module of full rank.
    pub fn ideal_from_z_basis(&self, elems: &[FieldElement]) -> Result<FractionalIdeal, FieldError> {
        let g: Vec<Vec<Q>> = elems.iter().map(|e| e.coords.clone()).collect();
        canonical(self.degree(), &g, &Z::one()).ok_or(FieldError::ZeroIdeal)
    }

    pub fn unit_ideal(&self) -> FractionalIdeal {
        let n = self.degree();
        let hnf = (0..n).map(|i| (0..n).map(|j| if i == j { Z::one() } else { Z::zero() }).collect()).collect();
        FractionalIdeal { hnf, den: Z::one() }
    }

    pub fn principal(&self, x: &FieldElement) -> Result<FractionalIdeal, FieldError> {
        self.ideal_from_gens(std::slice::from_ref(x))
    }

    pub fn ideal_mul(&self, a: &FractionalIdeal, b: &FractionalIdeal) -> FractionalIdeal {
        let n = self.degree();
        let ba = a.basis();
        let bb = b.basis();
        let mut all = Vec::with_capacity(n * n);
        for x in &ba {
            for y in &bb {
                all.push(self.mul(x, y).coords);
            }
        }
        canonical(n, &all, &Z::one()).expect("product of nonzero ideals")
    }

    pub fn ideal_add(&self, a: &FractionalIdeal, b: &FractionalIdeal) -> FractionalIdeal {
        let all: Vec<Vec<Q>> = a.basis().into_iter().chain(b.basis()).map(|e| e.coords).collect();
        canonical(self.degree(), &all, &Z::one()).expect("sum of nonzero ideals")
    }

    /// Intersection, via `(A^-1 + B^-1)^-1`.
    pub fn ideal_intersect(&self, a: &FractionalIdeal, b: &FractionalIdeal) -> FractionalIdeal {
        let s = self.ideal_add(&self.ideal_invert(a), &self.ideal_invert(b));
        self.ideal_invert(&s)
    }

    pub fn ideal_norm(&self, a: &FractionalIdeal) -> Q {
        a.norm()
    }

    pub fn ideal_pow(&self, a: &FractionalIdeal, k: i64) -> FractionalIdeal {
        let base = if k < 0 { self.ideal_invert(a) } else { a.clone() };
        let mut r = self.unit_ideal();
        for _ in 0..k.unsigned_abs() {
            r = self.ideal_mul(&r, &base);
        }
        r
    }

    /// Trace dual `{x : Tr(x I) in Z}`.
    pub fn ideal_dual(&self, a: &FractionalIdeal) -> FractionalIdeal {
        let b = a.basis_matrix();
        let bt_t = linalg::mat_mul(&linalg::transpose(&b), self.trace_form());
        let inv = linalg::inverse(&bt_t).expect("trace form is nondegenerate");
        let cols = linalg::transpose(&inv);
        canonical(self.degree(), &cols, &Z::one()).expect("dual lattice has full rank")
    }

    /// Inverse different `D^-1`, the trace dual of O.
    pub fn inverse_different(&self) -> FractionalIdeal {
        self.ideal_dual(&self.unit_ideal())
    }

    pub fn different(&self) -> FractionalIdeal {
        self.ideal_invert(&self.inverse_different())
    }

    /// Galois conjugate ideal of a quadratic field.
    pub fn ideal_conjugate(&self, a: &FractionalIdeal) -> FractionalIdeal {
        let conj: Vec<FieldElement> = a.basis().iter().map(|x| self.conjugate(x)).collect();
        self.ideal_from_z_basis(&conj).expect("conjugation preserves rank")
    }

    /// Inverse ideal: `conj(I)/N(I)` in quadratic fields, `(I D^-1)^dual`
    /// otherwise.
    pub fn ideal_invert(&self, a: &FractionalIdeal) -> FractionalIdeal {
        match self.degree() {
            1 => {
                let v = Q::new(a.den.clone(), a.hnf[0][0].clone());
                self.unit_ideal().scale(&v)
            }
            2 => self.ideal_conjugate(a).scale(&a.norm().recip()),
            _ => self.ideal_dual(&self.ideal_mul(a, &self.inverse_different())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, q, qi};

    fn zm(rows: &[&[i64]]) -> Vec<Vec<Z>> {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn ideal_two_one_plus_i() {
        let k = NumberField::new(&[1, 0, 1]).unwrap();
        let a = k.ideal_from_gens(&[k.int(2), k.elem_i(&[1, 1])]).unwrap();
        assert_eq!(a.hnf, zm(&[&[2, 1], &[0, 1]]));
        assert_eq!(a.norm(), qi(2));
        assert_eq!(k.principal(&k.int(3)).unwrap().norm(), qi(9));
    }

    #[test]
    fn rational_half() {
        let k = NumberField::new(&[-1, 1]).unwrap();
        let a = k.principal(&k.rational(q(1, 2))).unwrap();
        assert_eq!(a.hnf, zm(&[&[1]]));
        assert_eq!(a.den, int(2));
        assert_eq!(k.ideal_invert(&a), k.principal(&k.int(2)).unwrap());
    }

    #[test]
    fn inverse_of_one_plus_i() {
        let k = NumberField::new(&[1, 0, 1]).unwrap();
        let a = k.principal(&k.elem_i(&[1, 1])).unwrap();
        let inv = k.ideal_invert(&a);
        assert_eq!(inv, k.principal(&k.elem(vec![q(1, 2), q(-1, 2)]).unwrap()).unwrap());
        assert_eq!(k.ideal_mul(&a, &inv), k.unit_ideal());
    }

    #[test]
    fn inverse_different_of_gaussian_integers() {
        let k = NumberField::new(&[1, 0, 1]).unwrap();
        assert_eq!(k.inverse_different(), k.principal(&k.rational(q(1, 2))).unwrap());
        assert_eq!(k.different(), k.principal(&k.int(2)).unwrap());
    }

    #[test]
    fn cubic_inverse_via_trace_dual() {
        let k = NumberField::new(&[-2, 0, 0, 1]).unwrap();
        let a = k.ideal_from_gens(&[k.int(5), k.elem_i(&[2, 1, 0])]).unwrap();
        let inv = k.ideal_invert(&a);
        assert_eq!(k.ideal_mul(&a, &inv), k.unit_ideal());
    }

    #[test]
    fn reduce_lands_in_box() {
        let k = NumberField::new(&[1, 0, 1]).unwrap();
        let a = k.ideal_from_gens(&[k.int(2), k.elem_i(&[1, 1])]).unwrap();
        let x = k.elem(vec![q(7, 3), q(-5, 2)]).unwrap();
        let (r, s) = a.reduce(&x);
        assert!(a.contains(&s));
        let t = a.lattice_coords(&r);
        assert!(t.iter().all(|c| *c >= qi(0) && *c < qi(1)));
    }
}
