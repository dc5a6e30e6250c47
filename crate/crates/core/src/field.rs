//! Number fields of degree at most four: construction (irreducibility,
//! signature, integral basis, discriminant), exact element arithmetic and
//! certified archimedean embeddings.

use crate::interval::{ComplexBox, Interval};
use crate::linalg::{self, Mat};
use crate::poly::{self, UPoly};
use crate::rational::{
    dyadic_floor, from_f64, is_integer, lcm_denoms, q, qi, qz, sqrt_upper, Q, Z,
};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("defining polynomial must be monic")]
    NonMonic,
    #[error("degree {0} is outside the supported range 1..=4")]
    UnsupportedDegree(usize),
    #[error("defining polynomial is reducible over Q")]
    ReduciblePolynomial,
    #[error("integral basis search at p = {0} exceeds the supported size")]
    IntegralBasisTooLarge(Z),
    #[error("the zero ideal has no canonical form")]
    ZeroIdeal,
    #[error("operation undefined for the zero element")]
    ZeroElement,
    #[error("embedding precision not reached within the refinement budget")]
    PrecisionUnreachable,
    #[error("element has {got} coordinates, field degree is {want}")]
    WrongLength { got: usize, want: usize },
}

/// Element of K, stored by its exact coordinates on the integral basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    pub coords: Vec<Q>,
}

impl FieldElement {
    pub fn new(coords: Vec<Q>) -> Self {
        FieldElement { coords }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn scale(&self, c: &Q) -> FieldElement {
        FieldElement { coords: self.coords.iter().map(|x| x * c).collect() }
    }

    /// Least positive integer `d` with `d * self` integral.
    pub fn denominator(&self) -> Z {
        lcm_denoms(&self.coords)
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(is_integer)
    }

    /// The value as a rational when it lies in Q (first basis element is 1).
    pub fn as_rational(&self) -> Option<Q> {
        self.coords[1..].iter().all(|c| c.is_zero()).then(|| self.coords[0].clone())
    }
}

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, o: &FieldElement) -> FieldElement {
        FieldElement { coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, o: &FieldElement) -> FieldElement {
        FieldElement { coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement { coords: self.coords.iter().map(|a| -a).collect() }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(crate::rational::fmt_q).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

impl Serialize for FieldElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<String> = self.coords.iter().map(crate::rational::fmt_q).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v: Vec<String> = Vec::deserialize(d)?;
        let coords = v
            .iter()
            .map(|s| {
                crate::rational::parse_q(s)
                    .ok_or_else(|| serde::de::Error::custom(format!("bad rational {s:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FieldElement { coords })
    }
}

/// Certified enclosures of every archimedean embedding of an element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddingBox {
    pub real: Vec<Interval>,
    pub complex: Vec<ComplexBox>,
    pub precision: Q,
}

impl EmbeddingBox {
    /// Enclosure of `|x|_v` in the product-formula normalization, one per
    /// archimedean place (real places first).
    pub fn abs_values(&self) -> Vec<Interval> {
        self.real.iter().map(|i| i.abs()).chain(self.complex.iter().map(|c| c.abs_sq())).collect()
    }
}

/// Sequence of nested certified enclosures of one root of the defining polynomial.
#[derive(Clone, Debug)]
struct RootTrack {
    real: bool,
    centers: Vec<(Q, Q)>,
    boxes: Vec<ComplexBox>,
}

const BASE_BITS: u32 = 40;
const CACHED_LEVELS: usize = 6;
const MAX_LEVELS: usize = 11;

struct FieldData {
    poly: Vec<Z>,
    poly_q: UPoly,
    n: usize,
    signature: (usize, usize),
    /// Row `i` holds the power-basis coordinates of basis element `b_i`.
    basis: Mat,
    /// Integral coordinates -> power coordinates.
    to_power: Mat,
    /// Power coordinates -> integral coordinates.
    from_power: Mat,
    /// `mult[i][j]` = integral coordinates of `b_i b_j`.
    mult: Vec<Vec<Vec<Q>>>,
    traces: Vec<Q>,
    trace_form: Mat,
    disc: Z,
    poly_disc: Z,
    roots: Vec<RootTrack>,
}

/// A number field K = Q[x]/(f) with its maximal order.
///
/// Cloning is cheap; all data is shared and immutable.
#[derive(Clone)]
pub struct NumberField {
    d: Arc<FieldData>,
}

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NumberField")
            .field("poly", &self.d.poly)
            .field("signature", &self.d.signature)
            .field("disc", &self.d.disc)
            .finish()
    }
}

impl PartialEq for NumberField {
    fn eq(&self, o: &Self) -> bool {
        self.d.poly == o.d.poly
    }
}

impl Eq for NumberField {}

fn power_mul(a: &UPoly, b: &UPoly, f: &UPoly) -> UPoly {
    poly::rem_monic(&poly::mul(a, b), f)
}

/// Multiplication matrix (columns = images of theta^k) in power coordinates.
fn power_mult_matrix(x: &UPoly, f: &UPoly, n: usize) -> Mat {
    let mut m = linalg::zeros(n, n);
    let mut cur = x.clone();
    cur.resize(n, Q::zero());
    let theta: UPoly = {
        let mut t = vec![Q::zero(); n.max(2)];
        t[1] = Q::one();
        t
    };
    for k in 0..n {
        for (r, row) in m.iter_mut().enumerate() {
            row[k] = cur.get(r).cloned().unwrap_or_else(Q::zero);
        }
        if n > 1 {
            cur = power_mul(&cur, &theta, f);
        }
    }
    m
}

fn divisors(n: &Z) -> Vec<Z> {
    let n = n.abs();
    let mut out = Vec::new();
    let mut d = Z::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            out.push(d.clone());
            out.push(&n / &d);
        }
        d += 1;
    }
    out
}

fn has_rational_root(f: &[Z]) -> bool {
    let c0 = &f[0];
    if c0.is_zero() {
        return true;
    }
    let fq: UPoly = f.iter().cloned().map(qz).collect();
    divisors(c0).into_iter().any(|d| {
        poly::eval(&fq, &qz(d.clone())).is_zero() || poly::eval(&fq, &qz(-d)).is_zero()
    })
}

/// Whether a monic integer quartic is a product of two integer quadratics.
fn has_quadratic_factor(f: &[Z]) -> bool {
    let (f0, f1, f2, f3) = (&f[0], &f[1], &f[2], &f[3]);
    for b in divisors(f0).into_iter().flat_map(|d| [d.clone(), -d]) {
        let d = f0 / &b;
        // (x^2 + a x + b)(x^2 + c x + d)
        if b != d {
            let num = f1 - &b * f3;
            let den = &d - &b;
            if !(&num % &den).is_zero() {
                continue;
            }
            let a = num / den;
            let c = f3 - &a;
            if &b + &d + &a * &c == *f2 {
                return true;
            }
        } else {
            if *f1 != &b * f3 {
                continue;
            }
            // a + c = f3, a c = f2 - 2b
            let disc = f3 * f3 - Z::from(4) * (f2 - Z::from(2) * &b);
            if !disc.is_negative() {
                let s = disc.sqrt();
                if &s * &s == disc && ((f3 + &s) % Z::from(2)).is_zero() {
                    return true;
                }
            }
        }
    }
    false
}

/// Durand–Kerner approximations of all complex roots.
fn approx_roots(f: &[Z]) -> Vec<(f64, f64)> {
    let n = f.len() - 1;
    let c: Vec<f64> = f.iter().map(|x| x.to_f64().unwrap_or(f64::MAX)).collect();
    let evalc = |z: (f64, f64)| -> (f64, f64) {
        let mut acc = (0.0, 0.0);
        for k in (0..=n).rev() {
            acc = (acc.0 * z.0 - acc.1 * z.1 + c[k], acc.0 * z.1 + acc.1 * z.0);
        }
        acc
    };
    let bound = 1.0 + c[..n].iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut z: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let a = 0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            (0.5 * bound * a.cos(), 0.5 * bound * a.sin())
        })
        .collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let num = evalc(z[i]);
            let mut den = (1.0, 0.0);
            for j in 0..n {
                if i != j {
                    let d = (z[i].0 - z[j].0, z[i].1 - z[j].1);
                    den = (den.0 * d.0 - den.1 * d.1, den.0 * d.1 + den.1 * d.0);
                }
            }
            let m2 = den.0 * den.0 + den.1 * den.1;
            if m2 == 0.0 {
                z[i].0 += 1e-3;
                continue;
            }
            let step = ((num.0 * den.0 + num.1 * den.1) / m2, (num.1 * den.0 - num.0 * den.1) / m2);
            z[i] = (z[i].0 - step.0, z[i].1 - step.1);
            delta = delta.max(step.0.abs() + step.1.abs());
        }
        if delta < 1e-15 * bound {
            break;
        }
    }
    z
}

fn cpoly_eval(p: &UPoly, re: &Q, im: &Q) -> (Q, Q) {
    let mut a = (Q::zero(), Q::zero());
    for c in p.iter().rev() {
        a = (&a.0 * re - &a.1 * im + c, &a.0 * im + &a.1 * re);
    }
    a
}

/// One rounded Newton step for a root approximation.
fn newton(f: &UPoly, df: &UPoly, z: &(Q, Q), real: bool, bits: u32) -> (Q, Q) {
    let (fr, fi) = cpoly_eval(f, &z.0, &z.1);
    let (dr, di) = cpoly_eval(df, &z.0, &z.1);
    let m2 = &dr * &dr + &di * &di;
    if m2.is_zero() {
        return z.clone();
    }
    let sr = (&fr * &dr + &fi * &di) / &m2;
    let si = (&fi * &dr - &fr * &di) / &m2;
    let re = dyadic_floor(&(&z.0 - sr), bits);
    let im = if real { Q::zero() } else { dyadic_floor(&(&z.1 - si), bits) };
    (re, im)
}

/// Radius `r` with a root of `f` inside the disk of radius `r` about `z`.
fn root_radius(f: &UPoly, df: &UPoly, z: &(Q, Q), n: usize) -> Option<Q> {
    let (fr, fi) = cpoly_eval(f, &z.0, &z.1);
    let f2 = &fr * &fr + &fi * &fi;
    if f2.is_zero() {
        return Some(Q::zero());
    }
    let (dr, di) = cpoly_eval(df, &z.0, &z.1);
    let d2 = &dr * &dr + &di * &di;
    if d2.is_zero() {
        return None;
    }
    let nn = qi((n * n) as i64);
    Some(sqrt_upper(&(nn * f2 / d2), 64 + 2 * BASE_BITS))
}

fn level_bits(k: usize) -> u32 {
    BASE_BITS << k.min(20)
}

/// Certifies disjoint root disks at one refinement level.
fn certify_level(f: &UPoly, df: &UPoly, n: usize, centers: &[(Q, Q)], real: &[bool]) -> Option<Vec<Q>> {
    let radii: Vec<Q> = centers.iter().map(|z| root_radius(f, df, z, n)).collect::<Option<_>>()?;
    // full disk list including conjugates of the complex roots
    let mut disks: Vec<(Q, Q, Q)> = Vec::new();
    for ((z, r), &re) in centers.iter().zip(&radii).zip(real) {
        disks.push((z.0.clone(), z.1.clone(), r.clone()));
        if !re {
            if z.1.abs() <= *r {
                return None;
            }
            disks.push((z.0.clone(), -z.1.clone(), r.clone()));
        }
    }
    if disks.len() != n {
        return None;
    }
    for i in 0..n {
        for j in i + 1..n {
            let dx = &disks[i].0 - &disks[j].0;
            let dy = &disks[i].1 - &disks[j].1;
            let s = &disks[i].2 + &disks[j].2;
            if &dx * &dx + &dy * &dy <= &s * &s {
                return None;
            }
        }
    }
    Some(radii)
}

fn build_roots(f: &[Z], fq: &UPoly) -> Vec<RootTrack> {
    let n = f.len() - 1;
    let df = poly::derivative(fq);
    if n == 1 {
        let r = -qz(f[0].clone());
        return vec![RootTrack {
            real: true,
            centers: vec![(r.clone(), Q::zero())],
            boxes: vec![ComplexBox::real(r)],
        }];
    }
    let approx = approx_roots(f);
    let scale = approx.iter().fold(1.0f64, |m, z| m.max(z.0.abs()).max(z.1.abs()));
    let mut picked: Vec<((f64, f64), bool)> = Vec::new();
    for z in &approx {
        if z.1.abs() < 1e-7 * scale {
            picked.push(((z.0, 0.0), true));
        } else if z.1 > 0.0 {
            picked.push((*z, false));
        }
    }
    picked.sort_by(|a, b| {
        (!a.1, a.0 .0, a.0 .1).partial_cmp(&(!b.1, b.0 .0, b.0 .1)).unwrap()
    });
    let real: Vec<bool> = picked.iter().map(|p| p.1).collect();
    let mut centers: Vec<(Q, Q)> = picked
        .iter()
        .map(|((re, im), r)| {
            let re = dyadic_floor(&from_f64(*re), 50);
            let im = if *r { Q::zero() } else { dyadic_floor(&from_f64(*im), 50) };
            (re, im)
        })
        .collect();
    let mut tracks: Vec<RootTrack> =
        real.iter().map(|&r| RootTrack { real: r, centers: Vec::new(), boxes: Vec::new() }).collect();
    for k in 0..CACHED_LEVELS {
        let bits = level_bits(k);
        let mut attempt = 0;
        let radii = loop {
            for _ in 0..3 {
                centers = centers.iter().zip(&real).map(|(z, &r)| newton(fq, &df, z, r, bits)).collect();
            }
            if let Some(r) = certify_level(fq, &df, n, &centers, &real) {
                break r;
            }
            attempt += 1;
            assert!(attempt < 20, "root certification failed for a squarefree polynomial");
        };
        for (j, t) in tracks.iter_mut().enumerate() {
            let z = &centers[j];
            let r = &radii[j];
            let bx = if t.real {
                ComplexBox { re: Interval::centered(&z.0, r), im: Interval::point(Q::zero()) }
            } else {
                ComplexBox { re: Interval::centered(&z.0, r), im: Interval::centered(&z.1, r) }
            };
            let bx = match t.boxes.last() {
                Some(prev) => prev.intersect(&bx).expect("nested root enclosures intersect"),
                None => bx,
            };
            t.centers.push(z.clone());
            t.boxes.push(bx);
        }
    }
    tracks
}

impl NumberField {
    /// Builds K from monic integer coefficients listed from the constant term up.
    pub fn new(coeffs: &[i64]) -> Result<NumberField, FieldError> {
        let z: Vec<Z> = coeffs.iter().map(|&c| Z::from(c)).collect();
        NumberField::from_big(&z)
    }

    pub fn from_big(coeffs: &[Z]) -> Result<NumberField, FieldError> {
        let mut f: Vec<Z> = coeffs.to_vec();
        while f.len() > 1 && f.last().is_some_and(|c| c.is_zero()) {
            f.pop();
        }
        if f.len() < 2 {
            return Err(FieldError::UnsupportedDegree(0));
        }
        let n = f.len() - 1;
        if !f[n].is_one() {
            return Err(FieldError::NonMonic);
        }
        if n > 4 {
            return Err(FieldError::UnsupportedDegree(n));
        }
        if n >= 2 && has_rational_root(&f) {
            return Err(FieldError::ReduciblePolynomial);
        }
        if n == 4 && has_quadratic_factor(&f) {
            return Err(FieldError::ReduciblePolynomial);
        }
        let fq: UPoly = f.iter().cloned().map(qz).collect();
        let poly_disc = poly::discriminant(&fq).to_integer();
        let roots = build_roots(&f, &fq);
        let r1 = roots.iter().filter(|r| r.real).count();
        let r2 = (n - r1) / 2;

        let basis = integral_basis(&fq, n, &poly_disc)?;
        let to_power = linalg::transpose(&basis);
        let from_power = linalg::inverse(&to_power).expect("integral basis is a basis");
        let mut mult = vec![vec![Vec::new(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let p = power_mul(&basis[i], &basis[j], &fq);
                let c = linalg::mat_vec(&from_power, &pad(&p, n));
                debug_assert!(c.iter().all(is_integer));
                mult[i][j] = c;
            }
        }
        let power_traces = newton_traces(&fq, n);
        let traces: Vec<Q> = basis
            .iter()
            .map(|b| b.iter().zip(&power_traces).fold(Q::zero(), |a, (x, t)| a + x * t))
            .collect();
        let mut trace_form = linalg::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                trace_form[i][j] =
                    mult[i][j].iter().zip(&traces).fold(Q::zero(), |a, (x, t)| a + x * t);
            }
        }
        let disc = linalg::det(&trace_form).to_integer();
        Ok(NumberField {
            d: Arc::new(FieldData {
                poly: f,
                poly_q: fq,
                n,
                signature: (r1, r2),
                basis,
                to_power,
                from_power,
                mult,
                traces,
                trace_form,
                disc,
                poly_disc,
                roots,
            }),
        })
    }

    pub fn degree(&self) -> usize {
        self.d.n
    }

    pub fn signature(&self) -> (usize, usize) {
        self.d.signature
    }

    pub fn discriminant(&self) -> &Z {
        &self.d.disc
    }

    pub fn poly_discriminant(&self) -> &Z {
        &self.d.poly_disc
    }

    /// `[O : Z[theta]]`.
    pub fn index(&self) -> Z {
        (&self.d.poly_disc / &self.d.disc).abs().sqrt()
    }

    pub fn poly(&self) -> &[Z] {
        &self.d.poly
    }

    /// Integral basis, each element given by power-basis coordinates.
    pub fn integral_basis(&self) -> &Mat {
        &self.d.basis
    }

    pub fn trace_form(&self) -> &Mat {
        &self.d.trace_form
    }

    pub fn archimedean_count(&self) -> usize {
        self.d.signature.0 + self.d.signature.1
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::new(vec![Q::zero(); self.d.n])
    }

    pub fn one(&self) -> FieldElement {
        self.rational(Q::one())
    }

    pub fn rational(&self, x: Q) -> FieldElement {
        let mut c = vec![Q::zero(); self.d.n];
        c[0] = x;
        FieldElement::new(c)
    }

    pub fn int(&self, x: i64) -> FieldElement {
        self.rational(qi(x))
    }

    /// Element from integral-basis coordinates.
    pub fn elem(&self, coords: Vec<Q>) -> Result<FieldElement, FieldError> {
        if coords.len() != self.d.n {
            return Err(FieldError::WrongLength { got: coords.len(), want: self.d.n });
        }
        Ok(FieldElement::new(coords))
    }

    /// Element from small integer coordinates (panics on a length mismatch).
    pub fn elem_i(&self, coords: &[i64]) -> FieldElement {
        self.elem(coords.iter().map(|&c| qi(c)).collect()).expect("coordinate count")
    }

    pub fn from_power(&self, p: &[Q]) -> FieldElement {
        FieldElement::new(linalg::mat_vec(&self.d.from_power, &pad(p, self.d.n)))
    }

    pub fn to_power(&self, x: &FieldElement) -> UPoly {
        linalg::mat_vec(&self.d.to_power, &x.coords)
    }

    /// The generator theta (root of the defining polynomial).
    pub fn theta(&self) -> FieldElement {
        let mut p = vec![Q::zero(); self.d.n];
        if self.d.n == 1 {
            return self.rational(-qz(self.d.poly[0].clone()));
        }
        p[1] = Q::one();
        self.from_power(&p)
    }

    pub fn basis_element(&self, i: usize) -> FieldElement {
        let mut c = vec![Q::zero(); self.d.n];
        c[i] = Q::one();
        FieldElement::new(c)
    }

    pub fn mul(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        let n = self.d.n;
        if n == 1 {
            return FieldElement::new(vec![&x.coords[0] * &y.coords[0]]);
        }
        let mut out = vec![Q::zero(); n];
        for i in 0..n {
            if x.coords[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if y.coords[j].is_zero() {
                    continue;
                }
                let c = &x.coords[i] * &y.coords[j];
                for (k, t) in self.d.mult[i][j].iter().enumerate() {
                    if !t.is_zero() {
                        out[k] += &c * t;
                    }
                }
            }
        }
        FieldElement::new(out)
    }

    /// Matrix of multiplication by `x` on integral coordinates (column j = x b_j).
    pub fn mult_matrix(&self, x: &FieldElement) -> Mat {
        let n = self.d.n;
        let mut m = linalg::zeros(n, n);
        for j in 0..n {
            let col = self.mul(x, &self.basis_element(j));
            for k in 0..n {
                m[k][j] = col.coords[k].clone();
            }
        }
        m
    }

    pub fn inv(&self, x: &FieldElement) -> Result<FieldElement, FieldError> {
        if x.is_zero() {
            return Err(FieldError::ZeroElement);
        }
        if self.d.n == 1 {
            return Ok(FieldElement::new(vec![x.coords[0].recip()]));
        }
        let m = self.mult_matrix(x);
        let one = self.one();
        Ok(FieldElement::new(linalg::solve(&m, &one.coords).expect("nonzero element is invertible")))
    }

    pub fn div(&self, x: &FieldElement, y: &FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.mul(x, &self.inv(y)?))
    }

    pub fn pow(&self, x: &FieldElement, e: i64) -> Result<FieldElement, FieldError> {
        let base = if e < 0 { self.inv(x)? } else { x.clone() };
        let mut r = self.one();
        let mut b = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                r = self.mul(&r, &b);
            }
            k >>= 1;
            if k > 0 {
                b = self.mul(&b, &b);
            }
        }
        Ok(r)
    }

    pub fn trace(&self, x: &FieldElement) -> Q {
        x.coords.iter().zip(&self.d.traces).fold(Q::zero(), |a, (c, t)| {
            if c.is_zero() {
                a
            } else {
                a + c * t
            }
        })
    }

    pub fn norm(&self, x: &FieldElement) -> Q {
        match self.d.n {
            1 => x.coords[0].clone(),
            _ => linalg::det(&self.mult_matrix(x)),
        }
    }

    pub fn norm_trace(&self, x: &FieldElement) -> (Q, Q) {
        (self.norm(x), self.trace(x))
    }

    pub fn charpoly(&self, x: &FieldElement) -> UPoly {
        poly::charpoly(&self.mult_matrix(x))
    }

    /// Galois conjugate in a quadratic field: `Tr(x) - x`.
    pub fn conjugate(&self, x: &FieldElement) -> FieldElement {
        assert_eq!(self.d.n, 2, "conjugation is only defined here for quadratic fields");
        &self.rational(self.trace(x)) - x
    }

    fn root_boxes(&self, level: usize) -> Vec<ComplexBox> {
        if level < CACHED_LEVELS {
            return self.d.roots.iter().map(|t| t.boxes[level].clone()).collect();
        }
        // continue the deterministic refinement beyond the cached levels
        let fq = &self.d.poly_q;
        let df = poly::derivative(fq);
        let n = self.d.n;
        let real: Vec<bool> = self.d.roots.iter().map(|t| t.real).collect();
        let mut centers: Vec<(Q, Q)> = self.d.roots.iter().map(|t| t.centers[CACHED_LEVELS - 1].clone()).collect();
        let mut boxes: Vec<ComplexBox> = self.d.roots.iter().map(|t| t.boxes[CACHED_LEVELS - 1].clone()).collect();
        for k in CACHED_LEVELS..=level {
            let bits = level_bits(k);
            let radii = loop {
                for _ in 0..3 {
                    centers = centers.iter().zip(&real).map(|(z, &r)| newton(fq, &df, z, r, bits)).collect();
                }
                if let Some(r) = certify_level(fq, &df, n, &centers, &real) {
                    break r;
                }
            };
            for j in 0..n.min(boxes.len()) {
                let (z, r) = (&centers[j], &radii[j]);
                let bx = if real[j] {
                    ComplexBox { re: Interval::centered(&z.0, r), im: Interval::point(Q::zero()) }
                } else {
                    ComplexBox { re: Interval::centered(&z.0, r), im: Interval::centered(&z.1, r) }
                };
                boxes[j] = boxes[j].intersect(&bx).expect("nested root enclosures intersect");
            }
        }
        boxes
    }

    /// Enclosures of all archimedean embeddings of `x` at refinement level `level`.
    pub fn embed_level(&self, x: &FieldElement, level: usize) -> EmbeddingBox {
        let p = self.to_power(x);
        let r1 = self.d.signature.0;
        if p[1..].iter().all(|c| c.is_zero()) {
            let c = p[0].clone();
            return EmbeddingBox {
                real: vec![Interval::point(c.clone()); r1],
                complex: vec![ComplexBox::real(c); self.d.signature.1],
                precision: Q::zero(),
            };
        }
        let boxes = self.root_boxes(level);
        let vals: Vec<ComplexBox> = boxes.iter().map(|b| poly::eval_box(&p, b)).collect();
        let prec = vals.iter().map(|v| v.width()).max().unwrap_or_else(Q::zero);
        EmbeddingBox {
            real: vals[..r1].iter().map(|v| v.re.clone()).collect(),
            complex: vals[r1..].to_vec(),
            precision: prec,
        }
    }

    /// Certified enclosures of every embedding of `x`, each of width at most
    /// `precision`. Smaller precisions yield nested boxes.
    pub fn embed(&self, x: &FieldElement, precision: &Q) -> Result<EmbeddingBox, FieldError> {
        assert!(precision.is_positive(), "precision must be positive");
        for level in 0..MAX_LEVELS {
            let mut e = self.embed_level(x, level);
            if e.precision <= *precision {
                e.precision = precision.clone();
                return Ok(e);
            }
        }
        Err(FieldError::PrecisionUnreachable)
    }

    /// Enclosures of `|x|_v` for every archimedean place (product-formula
    /// normalization), refined until each has relative width below `2^-bits`
    /// or the refinement budget runs out.
    pub fn archimedean_abs(&self, x: &FieldElement, bits: u32) -> Vec<Interval> {
        let tol = q(1, 1) / qz(Z::one() << bits);
        let mut last = Vec::new();
        for level in 0..MAX_LEVELS {
            let e = self.embed_level(x, level);
            last = e.abs_values();
            let ok = last.iter().all(|iv| {
                iv.lo.is_positive() && iv.width() <= &iv.lo * &tol || iv.width().is_zero()
            });
            if ok {
                break;
            }
        }
        last
    }

    /// An LLL-reduced basis of the lattice spanned by `basis`, with respect to
    /// an approximation of `T2(x) = sum |sigma(x)|^2`.
    ///
    /// The result spans the same lattice whatever the quality of the
    /// approximation; only its shortness depends on it.
    pub fn reduce_basis(&self, basis: &[FieldElement]) -> Vec<FieldElement> {
        let d = basis.iter().fold(Z::one(), |acc, b| num_integer::Integer::lcm(&acc, &b.denominator()));
        let dq = qz(d);
        // Integral multiples have T2 >= n, so a fixed absolute precision suffices.
        let tol = q(1, 1 << 24);
        let centre = |iv: &Interval| (&iv.lo + &iv.hi) / qi(2);
        let emb: Vec<(Vec<Q>, Vec<(Q, Q)>)> = basis
            .iter()
            .map(|b| {
                let e = self.embed(&b.scale(&dq), &tol).unwrap_or_else(|_| self.embed_level(&b.scale(&dq), 0));
                (e.real.iter().map(centre).collect(), e.complex.iter().map(|c| (centre(&c.re), centre(&c.im))).collect())
            })
            .collect();
        let g: Mat = emb
            .iter()
            .map(|(ri, ci)| {
                emb.iter()
                    .map(|(rj, cj)| {
                        let real = ri.iter().zip(rj).fold(Q::zero(), |a, (x, y)| a + x * y);
                        let cplx = ci.iter().zip(cj).fold(Q::zero(), |a, (x, y)| a + &x.0 * &y.0 + &x.1 * &y.1);
                        real + qi(2) * cplx
                    })
                    .collect()
            })
            .collect();
        linalg::lll_transform(&g)
            .iter()
            .map(|row| {
                row.iter().zip(basis).fold(self.zero(), |acc, (c, b)| if c.is_zero() { acc } else { &acc + &b.scale(&qz(c.clone())) })
            })
            .collect()
    }
}

fn pad(p: &[Q], n: usize) -> Vec<Q> {
    let mut v = p.to_vec();
    v.resize(n, Q::zero());
    v
}

/// Power sums `Tr(theta^k)` for `k < n` by Newton's identities.
fn newton_traces(f: &UPoly, n: usize) -> Vec<Q> {
    // f = x^n + a_{n-1} x^{n-1} + ... ; e_k = (-1)^k a_{n-k}
    let a = |k: usize| f[n - k].clone();
    let mut s = vec![Q::zero(); n.max(1)];
    s[0] = qi(n as i64);
    for k in 1..n {
        let mut v = -(qi(k as i64) * a(k));
        for i in 1..k {
            v -= a(i) * &s[k - i];
        }
        s[k] = v;
    }
    s
}

/// Maximal order by saturation at every prime whose square divides the
/// polynomial discriminant. Returns the HNF basis in power coordinates.
fn integral_basis(f: &UPoly, n: usize, poly_disc: &Z) -> Result<Mat, FieldError> {
    let mut cols: Vec<Vec<Q>> = (0..n)
        .map(|i| {
            let mut c = vec![Q::zero(); n];
            c[i] = Q::one();
            c
        })
        .collect();
    if n == 1 {
        return Ok(cols);
    }
    let power_traces = newton_traces(f, n);
    let trace = |x: &[Q]| x.iter().zip(&power_traces).fold(Q::zero(), |a, (c, t)| a + c * t);
    for (p, e) in crate::rational::factor(poly_disc) {
        if e < 2 {
            continue;
        }
        let count = p.to_f64().unwrap_or(f64::MAX).powi(n as i32);
        if count > 4.0e6 {
            return Err(FieldError::IntegralBasisTooLarge(p));
        }
        let pq = qz(p.clone());
        loop {
            let mut found = None;
            let bounds = vec![p.clone(); n];
            for c in linalg::box_vectors(&bounds).into_iter().skip(1) {
                let mut x = vec![Q::zero(); n];
                for (ci, col) in c.iter().zip(&cols) {
                    if !ci.is_zero() {
                        for k in 0..n {
                            x[k] += qz(ci.clone()) * &col[k];
                        }
                    }
                }
                x.iter_mut().for_each(|v| *v /= &pq);
                if !is_integer(&trace(&x)) {
                    continue;
                }
                let cp = poly::charpoly(&power_mult_matrix(&x, f, n));
                if cp.iter().all(is_integer) {
                    found = Some(x);
                    break;
                }
            }
            match found {
                Some(x) => {
                    cols.push(x);
                    cols = ring_closure(cols, f, n);
                }
                None => break,
            }
        }
    }
    Ok(lattice_hnf(&cols, n))
}

/// Canonical basis (HNF columns, common denominator divided back out) of the
/// lattice spanned by `cols`.
fn lattice_hnf(cols: &[Vec<Q>], n: usize) -> Mat {
    let d = lcm_denoms(cols.iter().flatten());
    let gens: Vec<Vec<Z>> =
        cols.iter().map(|c| c.iter().map(|x| (x * qz(d.clone())).to_integer()).collect()).collect();
    let h = linalg::hnf(n, &gens).expect("full-rank order");
    let dq = qz(d);
    (0..n).map(|c| (0..n).map(|r| qz(h[r][c].clone()) / &dq).collect()).collect()
}

fn ring_closure(mut cols: Vec<Vec<Q>>, f: &UPoly, n: usize) -> Vec<Vec<Q>> {
    loop {
        let before = lattice_hnf(&cols, n);
        let mut all = before.clone();
        for i in 0..n {
            for j in i..n {
                all.push(pad(&power_mul(&before[i], &before[j], f), n));
            }
        }
        let after = lattice_hnf(&all, n);
        if after == before {
            return after;
        }
        cols = after;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn gaussian_field() {
        let k = NumberField::new(&[1, 0, 1]).unwrap();
        assert_eq!(k.degree(), 2);
        assert_eq!(k.signature(), (0, 1));
        assert_eq!(k.discriminant(), &int(-4));
        let x = k.elem_i(&[1, 1]);
        assert_eq!(k.norm_trace(&x), (qi(2), qi(2)));
    }

    #[test]
    fn rational_field() {
        let k = NumberField::new(&[-1, 1]).unwrap();
        assert_eq!(k.signature(), (1, 0));
        assert_eq!(k.discriminant(), &int(1));
        assert_eq!(k.theta(), k.int(1));
    }

    #[test]
    fn rejects_bad_polynomials() {
        assert_eq!(NumberField::new(&[-4, 0, 1]).unwrap_err(), FieldError::ReduciblePolynomial);
        assert_eq!(NumberField::new(&[1, 0, 2]).unwrap_err(), FieldError::NonMonic);
        assert_eq!(NumberField::new(&[1, 0, 0, 0, 0, 1]).unwrap_err(), FieldError::UnsupportedDegree(5));
        // (x^2+1)(x^2+2) has no rational root but splits into quadratics
        assert_eq!(NumberField::new(&[2, 0, 3, 0, 1]).unwrap_err(), FieldError::ReduciblePolynomial);
        assert!(NumberField::new(&[1, 0, 0, 0, 1]).is_ok());
    }

    #[test]
    fn golden_ratio_order_is_maximal() {
        let k = NumberField::new(&[-5, 0, 1]).unwrap();
        assert_eq!(k.discriminant(), &int(5));
        assert_eq!(k.index(), int(2));
        // second basis element is (1 + sqrt5)/2
        assert_eq!(k.integral_basis()[1], vec![q(1, 2), q(1, 2)]);
        let k8 = NumberField::new(&[-8, 0, 1]).unwrap();
        assert_eq!(k8.discriminant(), &int(8));
    }

    #[test]
    fn cubic_with_index() {
        // x^3 - x^2 - 2x - 8 (Dedekind's example, index 2, disc -503)
        let k = NumberField::new(&[-8, -2, -1, 1]).unwrap();
        assert_eq!(k.discriminant(), &int(-503));
        assert_eq!(k.index(), int(2));
    }

    #[test]
    fn sqrt2_embedding_width() {
        let k = NumberField::new(&[-2, 0, 1]).unwrap();
        let prec = q(1, 1024);
        let e = k.embed(&k.theta(), &prec).unwrap();
        assert_eq!(e.real.len(), 2);
        let pos = &e.real[1];
        assert!(pos.width() <= prec);
        assert!(pos.contains(&q(14142, 10000)) || (pos.lo > q(14142, 10000) && pos.hi < q(14143, 10000)));
    }

    #[test]
    fn exact_embeddings_of_i_and_one() {
        let k = NumberField::new(&[1, 0, 1]).unwrap();
        let e = k.embed(&k.theta(), &q(1, 8)).unwrap();
        assert_eq!(e.complex[0], ComplexBox::point(qi(0), qi(1)));
        let one = k.embed(&k.one(), &q(1, 1 << 20)).unwrap();
        assert_eq!(one.complex[0], ComplexBox::real(qi(1)));
    }

    #[test]
    fn inverse_and_power() {
        let k = NumberField::new(&[-2, -1, 0, 1]).unwrap();
        let x = k.elem_i(&[1, 2, -1]);
        let y = k.inv(&x).unwrap();
        assert_eq!(k.mul(&x, &y), k.one());
        assert_eq!(k.pow(&x, -2).unwrap(), k.mul(&y, &y));
    }

    #[test]
    fn reduced_basis_of_a_large_gaussian_ideal() {
        let k = NumberField::new(&[1, 0, 1]).unwrap();
        let a = k.principal(&k.elem_i(&[39, -23])).unwrap();
        let red = k.reduce_basis(&a.basis());
        // same lattice: both vectors lie in it and span the same covolume
        assert!(red.iter().all(|x| a.contains(x)));
        let d = &red[0].coords[0] * &red[1].coords[1] - &red[0].coords[1] * &red[1].coords[0];
        assert_eq!(d.abs(), a.norm());
        // a principal ideal's reduced vectors are associates of its generator
        for x in &red {
            assert_eq!(k.norm(x), qi(2050));
        }
    }
}
