//! Binary quadratic forms, the forms attached to ideals of quadratic fields,
//! and inhomogeneous minima `m_f(P) = inf_{Q in Z^2} |f(P - Q)|`.

use crate::field::FieldError;
use crate::ideal::FractionalIdeal;
use crate::minima::{m_exact_in, MinError};
use crate::rational::{ceil, floor, q, qi, qz, serde_q, sqrt_upper, Q, Z};
use crate::sarith::{SConfig, SError};
use crate::torus::FundamentalDomain;
use crate::{FieldElement, NumberField};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Half-width of the box used by the direct cross-check for indefinite forms.
const DIRECT_RADIUS: i64 = 30;

#[derive(Debug, Error)]
pub enum FormError {
    #[error("the field is not quadratic")]
    NotQuadratic,
    #[error("the pair is not a Z-basis of the integral ideal")]
    NotABasis,
    #[error("discriminant {0} is not fundamental")]
    NonFundamental(Z),
    #[error("the form has discriminant 0 or a square discriminant")]
    DegenerateForm,
    #[error("indefinite form with non-fundamental discriminant {0}")]
    NonFundamentalIndefinite(Z),
    #[error("the form is definite")]
    Definite,
    #[error("the form is not primitive")]
    NotPrimitive,
    #[error(transparent)]
    Min(#[from] MinError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    S(#[from] SError),
}

/// `f(x, y) = a x^2 + b xy + c y^2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BinaryQuadraticForm {
    #[serde(with = "serde_q::int")]
    pub a: Z,
    #[serde(with = "serde_q::int")]
    pub b: Z,
    #[serde(with = "serde_q::int")]
    pub c: Z,
}

impl BinaryQuadraticForm {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        BinaryQuadraticForm { a: Z::from(a), b: Z::from(b), c: Z::from(c) }
    }

    /// `b^2 - 4ac`.
    pub fn discriminant(&self) -> Z {
        &self.b * &self.b - Z::from(4) * &self.a * &self.c
    }

    pub fn content(&self) -> Z {
        self.a.gcd(&self.b).gcd(&self.c)
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    pub fn eval(&self, x: &Q, y: &Q) -> Q {
        qz(self.a.clone()) * x * x + qz(self.b.clone()) * x * y + qz(self.c.clone()) * y * y
    }

    pub fn scale(&self, l: &Z) -> Self {
        BinaryQuadraticForm { a: &self.a * l, b: &self.b * l, c: &self.c * l }
    }
}

impl std::fmt::Display for BinaryQuadraticForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// Whether `d` is the discriminant of a quadratic field.
pub fn is_fundamental(d: &Z) -> bool {
    if d.is_zero() || d.is_one() {
        return false;
    }
    let four = Z::from(4);
    let r = d.mod_floor(&four);
    if r == Z::one() {
        squarefree(d)
    } else if r.is_zero() {
        let m = d / &four;
        let m4 = m.mod_floor(&four);
        (m4 == Z::from(2) || m4 == Z::from(3)) && squarefree(&m)
    } else {
        false
    }
}

fn squarefree(n: &Z) -> bool {
    crate::rational::factor(&n.abs()).iter().all(|(_, e)| *e == 1)
}

/// `(b^2 - 4ac, gcd(a, b, c) = 1)`.
pub fn form_disc_primitive(f: &BinaryQuadraticForm) -> (Z, bool) {
    (f.discriminant(), f.is_primitive())
}

/// The form `N(x a_1 + y a_2) / N(a)` of an integral ideal of a quadratic
/// field with Z-basis `(a_1, a_2)`.
pub fn form_from_ideal(k: &NumberField, a: &FractionalIdeal, basis: &[FieldElement; 2]) -> Result<BinaryQuadraticForm, FormError> {
    if k.degree() != 2 {
        return Err(FormError::NotQuadratic);
    }
    if !is_fundamental(k.discriminant()) {
        return Err(FormError::NonFundamental(k.discriminant().clone()));
    }
    if !a.is_integral() || k.ideal_from_z_basis(basis).ok().as_ref() != Some(a) {
        return Err(FormError::NotABasis);
    }
    let n = k.ideal_norm(a);
    let [x, y] = basis;
    let fa = k.norm(x) / &n;
    let fc = k.norm(y) / &n;
    let fb = k.trace(&k.mul(x, &k.conjugate(y))) / &n;
    let int = |v: Q| {
        debug_assert!(v.is_integer());
        v.to_integer()
    };
    Ok(BinaryQuadraticForm { a: int(fa), b: int(fb), c: int(fc) })
}

/// The quadratic field of discriminant `d`, an ideal and basis realizing the
/// primitive form `f` of that discriminant, with `f = sign N(.)/N(ideal)`.
pub struct FormIdeal {
    pub field: NumberField,
    pub ideal: FractionalIdeal,
    pub basis: [FieldElement; 2],
    /// Whether `x` and `y` were exchanged (when `a = 0`).
    pub swapped: bool,
    pub domain: FundamentalDomain,
}

/// Builds the ideal `Z a + Z (b + sqrt(d))/2` attached to a primitive form
/// of fundamental discriminant.
pub fn ideal_from_form(f: &BinaryQuadraticForm) -> Result<FormIdeal, FormError> {
    let d = f.discriminant();
    if !is_fundamental(&d) {
        return Err(FormError::NonFundamental(d));
    }
    if !f.is_primitive() {
        return Err(FormError::NotPrimitive);
    }
    let (g, swapped) = if f.a.is_zero() {
        (BinaryQuadraticForm { a: f.c.clone(), b: f.b.clone(), c: f.a.clone() }, true)
    } else {
        (f.clone(), false)
    };
    let four = Z::from(4);
    let (poly, omega_half): (Vec<Z>, bool) = if d.mod_floor(&four).is_zero() {
        (vec![-(&d / &four), Z::zero(), Z::one()], false)
    } else {
        (vec![(Z::one() - &d) / &four, -Z::one(), Z::one()], true)
    };
    let k = NumberField::from_big(&poly)?;
    // Both polynomials have discriminant d, so {1, theta} is the integral
    // basis and sqrt(d) is 2 theta or 2 theta - 1.
    let sqrt_d = if omega_half { k.elem(vec![qi(-1), qi(2)])? } else { k.elem(vec![Q::zero(), qi(2)])? };
    let a1 = k.rational(qz(g.a.clone()));
    let a2 = (&k.rational(qz(g.b.clone())) + &sqrt_d).scale(&q(1, 2));
    let ideal = k.ideal_from_z_basis(&[a1.clone(), a2.clone()])?;
    let s = SConfig::with_primes(&k, &[])?.with_builtin_units()?;
    let domain = FundamentalDomain::new(&s, &ideal);
    Ok(FormIdeal { field: k, ideal, basis: [a1, a2], swapped, domain })
}

/// `m_f(P)`: ellipse enumeration for definite forms, the ideal route for
/// indefinite ones.
pub fn m_form(f: &BinaryQuadraticForm, p: &(Q, Q)) -> Result<Q, FormError> {
    let d = f.discriminant();
    if d.is_zero() || (d.is_positive() && is_square(&d)) {
        return Err(FormError::DegenerateForm);
    }
    if p.0.is_integer() && p.1.is_integer() {
        return Ok(Q::zero());
    }
    if d.is_negative() {
        return Ok(m_form_definite(f, p));
    }
    let g = f.content();
    let prim = BinaryQuadraticForm { a: &f.a / &g, b: &f.b / &g, c: &f.c / &g };
    if !is_fundamental(&prim.discriminant()) {
        return Err(FormError::NonFundamentalIndefinite(d));
    }
    Ok(qz(g) * m_form_via_ideal(&prim, p)?)
}

fn is_square(n: &Z) -> bool {
    let r = crate::rational::isqrt(n);
    &(&r * &r) == n
}

/// Exact minimum of a definite form over `P + Z^2` by enumeration of the
/// ellipse `|f| <= best`.
pub fn m_form_definite(f: &BinaryQuadraticForm, p: &(Q, Q)) -> Q {
    let sign = if f.a.is_negative() { -Z::one() } else { Z::one() };
    let g = f.scale(&sign);
    let (a, dabs) = (qz(g.a.clone()), qz(-g.discriminant()));
    let fx = |x: &Q, y: &Q| g.eval(&(&p.0 - x), &(&p.1 - y));
    let mut best = fx(&qz(crate::rational::floor(&(&p.0 + q(1, 2)))), &qz(crate::rational::floor(&(&p.1 + q(1, 2)))));
    // f(u, v) = a (u + b v / 2a)^2 + (|d| / 4a) v^2
    let vmax = sqrt_upper(&(qi(4) * &a * &best / &dabs), 32);
    for y in floor(&(&p.1 - &vmax)).to_i64().unwrap()..=ceil(&(&p.1 + &vmax)).to_i64().unwrap() {
        let v = &p.1 - qi(y);
        let rest = &best - &dabs * &v * &v / (qi(4) * &a);
        if rest.is_negative() {
            continue;
        }
        let umax = sqrt_upper(&(rest / &a), 32);
        let centre = &p.0 + qz(g.b.clone()) * &v / (qi(2) * &a);
        for x in floor(&(&centre - &umax)).to_i64().unwrap()..=ceil(&(&centre + &umax)).to_i64().unwrap() {
            let val = fx(&qi(x), &qi(y));
            if val < best {
                best = val;
            }
        }
    }
    best
}

/// `m_f(P)` through the attached ideal: `m_I(P_x a_1 + P_y a_2)` for S the
/// archimedean places.
pub fn m_form_via_ideal(f: &BinaryQuadraticForm, p: &(Q, Q)) -> Result<Q, FormError> {
    let fi = ideal_from_form(f)?;
    m_form_in(&fi, p)
}

fn m_form_in(fi: &FormIdeal, p: &(Q, Q)) -> Result<Q, FormError> {
    let (px, py) = if fi.swapped { (&p.1, &p.0) } else { (&p.0, &p.1) };
    let xi = &fi.basis[0].scale(px) + &fi.basis[1].scale(py);
    Ok(m_exact_in(&fi.domain, &xi)?.value)
}

/// Minimum of `|f(P - Q)|` over `Q` within `radius` of `P` in each coordinate.
pub fn m_form_box(f: &BinaryQuadraticForm, p: &(Q, Q), radius: i64) -> Q {
    let cx = crate::rational::floor(&p.0).to_i64().unwrap();
    let cy = crate::rational::floor(&p.1).to_i64().unwrap();
    let mut best: Option<Q> = None;
    for x in cx - radius..=cx + radius {
        for y in cy - radius..=cy + radius {
            let v = f.eval(&(&p.0 - qi(x)), &(&p.1 - qi(y))).abs();
            if best.as_ref().map_or(true, |b| &v < b) {
                best = Some(v);
            }
        }
    }
    best.expect("nonempty box")
}

/// One sample point of the dictionary cross-check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConsistencyRow {
    #[serde(with = "serde_q::vec")]
    pub point: Vec<Q>,
    #[serde(with = "serde_q")]
    pub via_ideal: Q,
    #[serde(with = "serde_q")]
    pub direct: Q,
    pub agree: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BsdReport {
    pub form: BinaryQuadraticForm,
    #[serde(with = "serde_q")]
    pub lower: Q,
    #[serde(with = "serde_q::vec")]
    pub p0: Vec<Q>,
    pub rows: Vec<ConsistencyRow>,
}

/// Explores `M_f` for an indefinite form: the largest `m_f(P)` over points
/// with denominator at most `denom_bound`, and a table comparing the ideal
/// route with bounded direct enumeration at random points.
pub fn bsd_check(f: &BinaryQuadraticForm, denom_bound: u64, sample_count: usize, seed: u64) -> Result<BsdReport, FormError> {
    let d = f.discriminant();
    if !d.is_positive() {
        return Err(FormError::Definite);
    }
    if !f.is_primitive() {
        return Err(FormError::NotPrimitive);
    }
    if !is_fundamental(&d) {
        return Err(FormError::NonFundamentalIndefinite(d));
    }
    let fi = ideal_from_form(f)?;
    let mut lower = Q::zero();
    let mut p0 = vec![Q::zero(), Q::zero()];
    for m in 1..=denom_bound.max(1) as i64 {
        for i in 0..m {
            for j in 0..m {
                if i.gcd(&j).gcd(&m) != 1 {
                    continue;
                }
                let p = (q(i, m), q(j, m));
                let v = m_form_in(&fi, &p)?;
                if v > lower {
                    lower = v;
                    p0 = vec![p.0, p.1];
                }
            }
        }
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(sample_count);
    for _ in 0..sample_count {
        let den = rng.gen_range(1..=12i64);
        let p = (q(rng.gen_range(-den..2 * den), den), q(rng.gen_range(-den..2 * den), den));
        let via_ideal = m_form_in(&fi, &p)?;
        let direct = m_form_box(f, &p, DIRECT_RADIUS);
        rows.push(ConsistencyRow { point: vec![p.0, p.1], agree: via_ideal == direct, via_ideal, direct });
    }
    Ok(BsdReport { form: f.clone(), lower, p0, rows })
}
