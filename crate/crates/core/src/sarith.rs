//! Places, valuations, the S-norm and S-unit groups.

use crate::field::{FieldElement, FieldError, NumberField};
use crate::ideal::FractionalIdeal;
use crate::interval::Interval;
use crate::poly;
use crate::rational::{ord_p, qi, qz, strip_prime, zpow, Q, Z};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SError {
    #[error("{0} is not a prime")]
    NotPrime(Z),
    #[error("{0} divides the index [O : Z[theta]]; splitting is not supported there")]
    IndexDivisor(Z),
    #[error("factorization modulo {0} is outside the supported range")]
    PrimeTooLarge(Z),
    #[error("prime {0} listed twice in S")]
    DuplicatePrime(Z),
    #[error("place index {index} out of range for p = {p}")]
    PlaceIndex { p: Z, index: usize },
    #[error("valuation of zero")]
    ZeroElement,
    #[error("generator {0} is not an S-unit")]
    NotAnSUnit(usize),
    #[error("unit generators have rank {rank}, need {needed}")]
    RankDeficient { rank: usize, needed: usize },
    #[error("could not certify the rank of the unit log matrix")]
    RankUndetermined,
    #[error("no unit found within the exponent search bound")]
    SearchExhausted,
    #[error("S-unit generators must be supplied for this field")]
    NoBuiltinUnits,
    #[error("place is not in S")]
    PlaceNotInS,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A prime ideal of O, presented as `(p, gen)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitePlace {
    pub p: Z,
    pub gen: FieldElement,
    pub e: u32,
    pub f: u32,
    pub ideal: FractionalIdeal,
    /// Absolute norm `p^f`.
    pub norm: Z,
    /// Element of `P^-1` outside O; multiplying by it lowers the valuation at
    /// this place by one without touching any other place.
    anti: FieldElement,
}

impl fmt::Display for FinitePlace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.p, self.gen)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Place {
    /// Index into the real embeddings.
    Real(usize),
    /// Index into the complex embeddings (one per conjugate pair).
    Complex(usize),
    Finite(FinitePlace),
}

impl Place {
    pub fn is_finite(&self) -> bool {
        matches!(self, Place::Finite(_))
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Real(i) => write!(f, "real[{i}]"),
            Place::Complex(i) => write!(f, "complex[{i}]"),
            Place::Finite(p) => write!(f, "{p}"),
        }
    }
}

/// All primes of O above the rational prime `p`, sorted by generator coordinates.
pub fn places_above(k: &NumberField, p: &Z) -> Result<Vec<FinitePlace>, SError> {
    let pu = p.to_u64().filter(|&v| crate::rational::is_prime_u64(v)).ok_or_else(|| SError::NotPrime(p.clone()))?;
    if (k.index() % p).is_zero() {
        return Err(SError::IndexDivisor(p.clone()));
    }
    let n = k.degree();
    let factors = poly::factor_mod_p(k.poly(), pu).ok_or_else(|| SError::PrimeTooLarge(p.clone()))?;
    let pe = k.rational(qz(p.clone()));
    let mut out = Vec::new();
    for (g, e) in factors {
        let f = (g.len() - 1) as u32;
        let mut pc: Vec<Q> = vec![Q::zero(); n];
        if n == 1 {
            // the only prime above p in Q is (p)
            pc[0] = qz(p.clone());
        } else {
            for (i, c) in g.iter().enumerate() {
                if i < n {
                    pc[i] = qi(*c as i64);
                } else {
                    // x^n = -(f_0 + ... + f_{n-1} x^{n-1}); only reached when deg g = n
                    let red = k.poly();
                    for (j, r) in red[..n].iter().enumerate() {
                        pc[j] -= qz(r.clone()) * qi(*c as i64);
                    }
                }
            }
        }
        let gen = k.from_power(&pc);
        let ideal = k.ideal_from_gens(&[pe.clone(), gen.clone()])?;
        let norm = zpow(p, f);
        debug_assert_eq!(ideal.norm(), qz(norm.clone()));
        let inv = k.ideal_invert(&ideal);
        let anti = inv.basis().into_iter().find(|b| !b.is_integral()).expect("inverse of a prime is not integral");
        out.push(FinitePlace { p: p.clone(), gen, e, f, ideal, norm, anti });
    }
    out.sort_by(|a, b| a.gen.cmp(&b.gen));
    Ok(out)
}

/// Exact valuation of a nonzero element at a finite place.
pub fn valuation(k: &NumberField, x: &FieldElement, v: &FinitePlace) -> Result<i64, SError> {
    if x.is_zero() {
        return Err(SError::ZeroElement);
    }
    if v.e == 1 && v.f as usize == k.degree() {
        // P = pO: the valuation is the least p-order of the coordinates
        let m = x
            .coords
            .iter()
            .filter(|c| !c.is_zero())
            .map(|c| ord_p(c.numer(), &v.p) as i64 - ord_p(c.denom(), &v.p) as i64)
            .min()
            .expect("nonzero");
        return Ok(m);
    }
    let d = x.denominator();
    let mut y = x.scale(&qz(d.clone()));
    let mut val: i64 = 0;
    loop {
        let z = k.mul(&y, &v.anti);
        if !z.is_integral() {
            break;
        }
        y = z;
        val += 1;
    }
    Ok(val - v.e as i64 * ord_p(&d, &v.p) as i64)
}

/// Valuation of a nonzero fractional ideal at a finite place.
pub fn ideal_valuation(k: &NumberField, a: &FractionalIdeal, v: &FinitePlace) -> i64 {
    a.basis()
        .iter()
        .filter(|b| !b.is_zero())
        .map(|b| valuation(k, b, v).expect("basis elements are nonzero"))
        .min()
        .expect("nonempty basis")
}

/// `|x|_v = Np^{-v(x)}` at a finite place.
pub fn finite_abs(k: &NumberField, x: &FieldElement, v: &FinitePlace) -> Q {
    if x.is_zero() {
        return Q::zero();
    }
    let e = valuation(k, x, v).expect("nonzero");
    crate::rational::pow(&qz(v.norm.clone()), -e)
}

/// A set S of places containing the archimedean ones, with S-unit data.
#[derive(Clone, Debug)]
pub struct SConfig {
    pub field: NumberField,
    pub finite: Vec<FinitePlace>,
    pub units: Vec<FieldElement>,
    pub torsion: FieldElement,
    pub torsion_order: u32,
    /// True once `units` passed `verify_s_unit_basis`.
    pub verified: bool,
    /// True when `units` together with the torsion are known to generate the
    /// whole S-unit group rather than a subgroup of finite index.
    pub full_group: bool,
    /// Indices into `units` of an independent subset of size `#S - 1`.
    pub log_basis: Vec<usize>,
}

impl SConfig {
    /// S = archimedean places plus the chosen places above each listed prime
    /// (`None` selects every place above it).
    pub fn new(field: &NumberField, primes: &[(Z, Option<Vec<usize>>)]) -> Result<SConfig, SError> {
        let mut finite = Vec::new();
        let mut seen: Vec<&Z> = Vec::new();
        for (p, sel) in primes {
            if seen.contains(&p) {
                return Err(SError::DuplicatePrime(p.clone()));
            }
            seen.push(p);
            let ps = places_above(field, p)?;
            match sel {
                None => finite.extend(ps),
                Some(idx) => {
                    for &i in idx {
                        let pl = ps.get(i).ok_or_else(|| SError::PlaceIndex { p: p.clone(), index: i })?;
                        if !finite.contains(pl) {
                            finite.push(pl.clone());
                        }
                    }
                }
            }
        }
        let (torsion, torsion_order) = torsion_generator(field);
        Ok(SConfig {
            field: field.clone(),
            finite,
            units: Vec::new(),
            torsion,
            torsion_order,
            verified: false,
            full_group: false,
            log_basis: Vec::new(),
        })
    }

    /// S = archimedean places plus every place above each prime.
    pub fn with_primes(field: &NumberField, primes: &[i64]) -> Result<SConfig, SError> {
        let v: Vec<(Z, Option<Vec<usize>>)> = primes.iter().map(|&p| (Z::from(p), None)).collect();
        SConfig::new(field, &v)
    }

    pub fn arch_count(&self) -> usize {
        self.field.archimedean_count()
    }

    pub fn size(&self) -> usize {
        self.arch_count() + self.finite.len()
    }

    pub fn unit_rank(&self) -> usize {
        self.size() - 1
    }

    /// All places of S: real, then complex, then finite in configuration order.
    pub fn places(&self) -> Vec<Place> {
        let (r1, r2) = self.field.signature();
        (0..r1)
            .map(Place::Real)
            .chain((0..r2).map(Place::Complex))
            .chain(self.finite.iter().cloned().map(Place::Finite))
            .collect()
    }

    /// Whether every prime of O above `p` lies in S.
    pub fn contains_all_above(&self, p: &Z) -> bool {
        let cnt: u32 = self.finite.iter().filter(|v| &v.p == p).map(|v| v.e * v.f).sum();
        cnt as usize == self.field.degree()
    }

    /// Exact S-norm `prod_{v in S} |x|_v`.
    pub fn s_norm(&self, x: &FieldElement) -> Q {
        if x.is_zero() {
            return Q::zero();
        }
        let k = &self.field;
        let mut r = k.norm(x).abs();
        let mut done: Vec<&Z> = Vec::new();
        for v in &self.finite {
            if done.contains(&&v.p) {
                continue;
            }
            if self.contains_all_above(&v.p) {
                r = strip_prime(&r, &v.p);
                done.push(&v.p);
            } else {
                let e = valuation(k, x, v).expect("nonzero");
                r *= crate::rational::pow(&qz(v.norm.clone()), -e);
            }
        }
        r
    }

    /// Prime-to-S part `a * prod_{v in S0} P_v^{-v(a)}` of a fractional ideal:
    /// the O-lattice representing the O_S-ideal `a O_S`.
    pub fn prime_to_s(&self, a: &FractionalIdeal) -> FractionalIdeal {
        let k = &self.field;
        let mut r = a.clone();
        for v in &self.finite {
            let e = ideal_valuation(k, &r, v);
            if e != 0 {
                r = k.ideal_mul(&r, &k.ideal_pow(&v.ideal, -e));
            }
        }
        r
    }

    /// S-norm of the O_S-ideal generated by `a`.
    pub fn ideal_s_norm(&self, a: &FractionalIdeal) -> Q {
        self.prime_to_s(a).norm()
    }

    /// Whether `x` has valuation 0 at every finite place outside S.
    pub fn is_s_unit(&self, x: &FieldElement) -> bool {
        if x.is_zero() {
            return false;
        }
        let k = &self.field;
        let p = k.principal(x).expect("nonzero");
        self.prime_to_s(&p) == k.unit_ideal()
    }

    /// Enclosures of `|x|_v` for every place of S (archimedean first);
    /// finite places give exact point intervals.
    pub fn abs_values(&self, x: &FieldElement, bits: u32) -> Vec<Interval> {
        let k = &self.field;
        let mut out = k.archimedean_abs(x, bits);
        for v in &self.finite {
            out.push(Interval::point(finite_abs(k, x, v)));
        }
        out
    }

    /// Certified log vector (one entry per place of S) of a nonzero element.
    pub fn log_vector(&self, x: &FieldElement, bits: u32) -> Vec<Interval> {
        let k = &self.field;
        let mut out: Vec<Interval> = k.archimedean_abs(x, bits).iter().map(|iv| iv.ln(bits)).collect();
        for v in &self.finite {
            let e = valuation(k, x, v).expect("nonzero");
            let l = crate::interval::ln_enclosure(&qz(v.norm.clone()), bits);
            out.push(l.scale(&qi(-e)));
        }
        out
    }

    pub fn log_vector_f64(&self, x: &FieldElement) -> Vec<f64> {
        self.log_vector(x, 40).iter().map(|iv| crate::rational::to_f64(&iv.mid())).collect()
    }

    /// Verifies that `gens` are S-units of full log rank and attaches them.
    pub fn verify_s_unit_basis(&self, gens: &[FieldElement]) -> Result<SConfig, SError> {
        for (i, g) in gens.iter().enumerate() {
            if !self.is_s_unit(g) {
                return Err(SError::NotAnSUnit(i));
            }
        }
        let r = self.unit_rank();
        let mut out = self.clone();
        out.units = gens.to_vec();
        out.verified = true;
        if r == 0 {
            out.log_basis = Vec::new();
            return Ok(out);
        }
        if gens.len() < r {
            return Err(SError::RankDeficient { rank: gens.len(), needed: r });
        }
        // choose a candidate independent subset numerically, then certify
        let logs: Vec<Vec<f64>> = gens.iter().map(|g| self.log_vector_f64(g)).collect();
        let cand = independent_subset(&logs, r);
        let Some(cand) = cand else {
            return Err(match self.find_relation(gens, &logs) {
                true => SError::RankDeficient { rank: numeric_rank(&logs), needed: r },
                false => SError::RankUndetermined,
            });
        };
        for bits in [32u32, 64, 128, 256] {
            let rows: Vec<Vec<Interval>> =
                cand.iter().map(|&i| self.log_vector(&gens[i], bits)[..r].to_vec()).collect();
            let d = interval_det(&rows);
            if !d.contains_zero() {
                out.log_basis = cand;
                return Ok(out);
            }
        }
        Err(SError::RankUndetermined)
    }

    /// Looks for a small exact multiplicative relation among `gens` modulo
    /// torsion (confirming that the log rank is deficient).
    fn find_relation(&self, gens: &[FieldElement], logs: &[Vec<f64>]) -> bool {
        let k = &self.field;
        let m = gens.len();
        let bound = 6i64;
        let mut e = vec![-bound; m];
        loop {
            if e.iter().any(|&x| x != 0) {
                let approx: f64 = (0..logs[0].len())
                    .map(|j| (0..m).map(|i| e[i] as f64 * logs[i][j]).sum::<f64>().abs())
                    .sum();
                if approx < 1e-6 {
                    let mut x = k.one();
                    for (g, &ei) in gens.iter().zip(&e) {
                        x = k.mul(&x, &k.pow(g, ei).expect("unit"));
                    }
                    if k.pow(&x, 120).expect("unit") == k.one() {
                        return true;
                    }
                }
            }
            let mut i = 0;
            loop {
                if i == m {
                    return false;
                }
                e[i] += 1;
                if e[i] > bound {
                    e[i] = -bound;
                    i += 1;
                } else {
                    break;
                }
            }
        }
    }

    /// Built-in S-unit generators for Q and quadratic fields.
    pub fn with_builtin_units(&self) -> Result<SConfig, SError> {
        let k = &self.field;
        let mut gens = Vec::new();
        let mut full = true;
        match k.degree() {
            1 => {
                for v in &self.finite {
                    gens.push(k.rational(qz(v.p.clone())));
                }
            }
            2 => {
                if k.signature().0 == 2 {
                    gens.push(fundamental_unit(k));
                }
                for v in &self.finite {
                    let (g, h) = principal_power_generator(k, &v.ideal).ok_or(SError::SearchExhausted)?;
                    if h > 1 {
                        full = false;
                    }
                    gens.push(g);
                }
                if self.finite.len() > 1 && !full {
                    full = false;
                }
            }
            _ => return Err(SError::NoBuiltinUnits),
        }
        let mut out = self.verify_s_unit_basis(&gens)?;
        out.full_group = full;
        Ok(out)
    }

    /// An S-unit `e` with `|e|_v < 1` for every `v` in S other than place `w`
    /// (index into `places()`).
    pub fn shrinking_unit(&self, w: usize) -> Result<FieldElement, SError> {
        if w >= self.size() {
            return Err(SError::PlaceNotInS);
        }
        if !self.verified {
            return Err(SError::RankUndetermined);
        }
        if self.size() < 2 {
            return Err(SError::SearchExhausted);
        }
        let k = &self.field;
        let basis: Vec<&FieldElement> = self.log_basis.iter().map(|&i| &self.units[i]).collect();
        let logs: Vec<Vec<f64>> = basis.iter().map(|g| self.log_vector_f64(g)).collect();
        let r = basis.len();
        for bound in 1..=40i64 {
            let mut cands = exponent_shell(r, bound);
            cands.sort_by_key(|e| (e.iter().map(|x| x.abs()).sum::<i64>(), e.clone()));
            for e in cands {
                let lv: Vec<f64> = (0..self.size())
                    .map(|j| (0..r).map(|i| e[i] as f64 * logs[i][j]).sum())
                    .collect();
                if (0..self.size()).any(|j| j != w && lv[j] > -1e-9) {
                    continue;
                }
                let mut x = k.one();
                for (g, &ei) in basis.iter().zip(&e) {
                    x = k.mul(&x, &k.pow(g, ei)?);
                }
                if self.certify_shrinking(&x, w) {
                    return Ok(x);
                }
            }
        }
        Err(SError::SearchExhausted)
    }

    /// Certifies `|x|_v < 1` for all places `v != w` of S.
    pub fn certify_shrinking(&self, x: &FieldElement, w: usize) -> bool {
        for bits in [32u32, 96, 256] {
            let abs = self.abs_values(x, bits);
            if abs.iter().enumerate().all(|(j, iv)| j == w || iv.hi < Q::one()) {
                return true;
            }
        }
        false
    }
}

/// Exponent vectors of max-norm exactly `bound`.
fn exponent_shell(r: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut e = vec![-bound; r];
    loop {
        if e.iter().any(|x| x.abs() == bound) {
            out.push(e.clone());
        }
        let mut i = 0;
        loop {
            if i == r {
                return out;
            }
            e[i] += 1;
            if e[i] > bound {
                e[i] = -bound;
                i += 1;
            } else {
                break;
            }
        }
    }
}

fn numeric_rank(rows: &[Vec<f64>]) -> usize {
    let mut m: Vec<Vec<f64>> = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).max_by(|&a, &b| m[a][c].abs().partial_cmp(&m[b][c].abs()).unwrap()) else {
            break;
        };
        if m[p][c].abs() < 1e-7 {
            continue;
        }
        m.swap(rank, p);
        for i in 0..m.len() {
            if i != rank {
                let f = m[i][c] / m[rank][c];
                for j in 0..cols {
                    m[i][j] -= f * m[rank][j];
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Greedy choice of `r` rows whose first `r` coordinates look independent.
fn independent_subset(rows: &[Vec<f64>], r: usize) -> Option<Vec<usize>> {
    let mut chosen: Vec<usize> = Vec::new();
    for i in 0..rows.len() {
        let mut trial: Vec<Vec<f64>> = chosen.iter().map(|&j| rows[j][..r].to_vec()).collect();
        trial.push(rows[i][..r].to_vec());
        if numeric_rank(&trial) == trial.len() {
            chosen.push(i);
            if chosen.len() == r {
                return Some(chosen);
            }
        }
    }
    None
}

/// Leibniz determinant of an interval matrix.
pub fn interval_det(m: &[Vec<Interval>]) -> Interval {
    let n = m.len();
    let mut total = Interval::point(Q::zero());
    for (perm, sign) in poly::permutations(n) {
        let mut t = Interval::point(qi(sign as i64));
        for (i, &j) in perm.iter().enumerate() {
            t = &t * &m[i][j];
        }
        total = &total + &t;
    }
    total
}

/// Root of unity of maximal order in K.
fn torsion_generator(k: &NumberField) -> (FieldElement, u32) {
    let n = k.degree();
    let minus_one = k.int(-1);
    if k.signature().0 > 0 {
        return (minus_one, 2);
    }
    let mut best = (minus_one, 2u32);
    let bounds = vec![Z::from(5); n];
    for c in crate::linalg::box_vectors(&bounds) {
        let x = FieldElement::new(c.iter().map(|v| qz(v - Z::from(2))).collect());
        if x.is_zero() || k.norm(&x) != Q::one() {
            continue;
        }
        if k.pow(&x, 120).expect("nonzero") != k.one() {
            continue;
        }
        let mut ord = 1u32;
        let mut y = x.clone();
        while y != k.one() {
            y = k.mul(&y, &x);
            ord += 1;
        }
        if ord > best.1 {
            best = (x, ord);
        }
    }
    best
}

/// Integer solutions `a` of `a^2 + t b a + c b^2 = m`.
fn solve_norm_eq(t: &Z, c: &Z, b: &Z, m: &Z) -> Vec<Z> {
    // a = (-t b ± sqrt(t^2 b^2 - 4 (c b^2 - m))) / 2
    let disc = t * t * b * b - Z::from(4) * (c * b * b - m);
    if disc.is_negative() {
        return Vec::new();
    }
    let s = disc.sqrt();
    if &s * &s != disc {
        return Vec::new();
    }
    let mut out = Vec::new();
    for num in [-(t * b) + &s, -(t * b) - &s] {
        if num.is_even() {
            let a = num / 2;
            if !out.contains(&a) {
                out.push(a);
            }
        }
    }
    out
}

/// Coefficients `(t, c)` with `N(a + b w) = a^2 + t a b + c b^2` for the
/// second integral basis element `w` of a quadratic field.
fn quadratic_norm_form(k: &NumberField) -> (Z, Z) {
    let w = k.basis_element(1);
    (k.trace(&w).to_integer(), k.norm(&w).to_integer())
}

/// Fundamental unit of a real quadratic field, normalized to nonnegative
/// coordinates where possible.
pub fn fundamental_unit(k: &NumberField) -> FieldElement {
    assert_eq!(k.signature(), (2, 0));
    let (t, c) = quadratic_norm_form(k);
    let mut b = Z::one();
    loop {
        let mut cands = Vec::new();
        for m in [Z::one(), -Z::one()] {
            for a in solve_norm_eq(&t, &c, &b, &m) {
                cands.push(FieldElement::new(vec![qz(a), qz(b.clone())]));
            }
        }
        if !cands.is_empty() {
            // smallest unit above 1 among the candidates
            let size = |x: &FieldElement| {
                let e = k.embed_level(x, 0);
                e.real
                    .iter()
                    .map(|iv| crate::rational::to_f64(&iv.mid()).abs())
                    .fold(0.0f64, f64::max)
            };
            let u = cands
                .into_iter()
                .min_by(|x, y| size(x).partial_cmp(&size(y)).unwrap().then(x.cmp(y)))
                .unwrap();
            let variants = [u.clone(), -&u, k.conjugate(&u), -&k.conjugate(&u)];
            return variants
                .iter()
                .filter(|v| v.coords.iter().all(|x| !x.is_negative()))
                .min()
                .cloned()
                .unwrap_or_else(|| variants.iter().max().cloned().unwrap());
        }
        b += 1;
    }
}

/// Generator of the least principal power `P^h` (h <= 12) of an integral
/// ideal in a quadratic field.
pub fn principal_power_generator(k: &NumberField, p: &FractionalIdeal) -> Option<(FieldElement, u32)> {
    let (t, c) = quadratic_norm_form(k);
    let real = k.signature().0 == 2;
    for h in 1..=12u32 {
        let ph = k.ideal_pow(p, h as i64);
        let m = ph.norm().to_integer();
        let limit: i64 = if real { 20000 } else { i64::MAX };
        let mut b = 0i64;
        while b <= limit {
            let bz = Z::from(b);
            let mut any_real_solution = false;
            for sign in [Z::one(), -Z::one()] {
                let mm = &m * &sign;
                let disc = &t * &t * &bz * &bz - Z::from(4) * (&c * &bz * &bz - &mm);
                if !disc.is_negative() {
                    any_real_solution = true;
                }
                for a in solve_norm_eq(&t, &c, &bz, &mm) {
                    for bb in [bz.clone(), -bz.clone()] {
                        let x = FieldElement::new(vec![qz(a.clone()), qz(bb)]);
                        if ph.contains(&x) {
                            return Some((x, h));
                        }
                    }
                }
            }
            if !real && !any_real_solution {
                break;
            }
            b += 1;
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, q};

    #[test]
    fn places_above_five_in_gaussian_field() {
        let k = NumberField::new(&[1, 0, 1]).unwrap();
        let ps = places_above(&k, &int(5)).unwrap();
        assert_eq!(ps.len(), 2);
        assert!(ps.iter().all(|v| v.e == 1 && v.f == 1));
        let a = k.ideal_from_gens(&[k.int(5), k.elem_i(&[2, 1])]).unwrap();
        let b = k.ideal_from_gens(&[k.int(5), k.elem_i(&[2, -1])]).unwrap();
        assert!(ps.iter().any(|v| v.ideal == a) && ps.iter().any(|v| v.ideal == b));
        let three = places_above(&k, &int(3)).unwrap();
        assert_eq!((three.len(), three[0].e, three[0].f), (1, 1, 2));
        let two = places_above(&k, &int(2)).unwrap();
        assert_eq!((two.len(), two[0].e, two[0].f), (1, 2, 1));
    }

    #[test]
    fn place_errors() {
        let k = NumberField::new(&[-5, 0, 1]).unwrap();
        assert_eq!(places_above(&k, &int(2)).unwrap_err(), SError::IndexDivisor(int(2)));
        assert_eq!(places_above(&k, &int(9)).unwrap_err(), SError::NotPrime(int(9)));
    }

    #[test]
    fn valuations() {
        let k = NumberField::new(&[1, 0, 1]).unwrap();
        let two = &places_above(&k, &int(2)).unwrap()[0];
        assert_eq!(valuation(&k, &k.int(2), two).unwrap(), 2);
        assert_eq!(valuation(&k, &k.one(), two).unwrap(), 0);
        assert_eq!(valuation(&k, &k.rational(q(1, 4)), two).unwrap(), -4);
        let qf = NumberField::new(&[-1, 1]).unwrap();
        let five = &places_above(&qf, &int(5)).unwrap()[0];
        assert_eq!(valuation(&qf, &qf.rational(q(1, 5)), five).unwrap(), -1);
        assert_eq!(valuation(&qf, &qf.zero(), five).unwrap_err(), SError::ZeroElement);
    }

    #[test]
    fn s_norm_over_q() {
        let k = NumberField::new(&[-1, 1]).unwrap();
        let s = SConfig::with_primes(&k, &[2, 3]).unwrap();
        assert_eq!(s.s_norm(&k.int(6)), qi(1));
        assert_eq!(s.s_norm(&k.one()), qi(1));
        assert_eq!(s.s_norm(&k.rational(q(1, 5))), q(1, 5));
        assert_eq!(s.s_norm(&k.zero()), qi(0));
    }

    #[test]
    fn unit_verification() {
        let k = NumberField::new(&[-1, 1]).unwrap();
        let s = SConfig::with_primes(&k, &[2, 3]).unwrap();
        let v = s.verify_s_unit_basis(&[k.int(2), k.int(3)]).unwrap();
        assert_eq!(v.log_basis.len(), 2);
        assert!(matches!(
            s.verify_s_unit_basis(&[k.int(2), k.int(4)]),
            Err(SError::RankDeficient { .. })
        ));
        assert_eq!(s.verify_s_unit_basis(&[k.int(2), k.int(5)]).unwrap_err(), SError::NotAnSUnit(1));

        let k2 = NumberField::new(&[-2, 0, 1]).unwrap();
        let s2 = SConfig::with_primes(&k2, &[]).unwrap();
        assert!(s2.verify_s_unit_basis(&[k2.elem_i(&[1, 1])]).is_ok());
        assert_eq!(s2.verify_s_unit_basis(&[k2.int(2)]).unwrap_err(), SError::NotAnSUnit(0));
    }

    #[test]
    fn builtin_fundamental_units() {
        for (poly, unit) in [([-2, 0, 1], [1, 1]), ([-3, 0, 1], [2, 1]), ([-5, 0, 1], [0, 1])] {
            let k = NumberField::new(&poly).unwrap();
            assert_eq!(fundamental_unit(&k), k.elem_i(&unit));
        }
    }

    #[test]
    fn shrinking_units_over_q() {
        let k = NumberField::new(&[-1, 1]).unwrap();
        let s = SConfig::with_primes(&k, &[2, 3]).unwrap().with_builtin_units().unwrap();
        assert_eq!(s.shrinking_unit(0).unwrap(), k.int(6));
        assert_eq!(s.shrinking_unit(1).unwrap(), k.rational(q(3, 4)));
        assert_eq!(s.shrinking_unit(2).unwrap(), k.rational(q(2, 3)));
    }

    #[test]
    fn torsion_of_imaginary_quadratics() {
        let gi = NumberField::new(&[1, 0, 1]).unwrap();
        assert_eq!(SConfig::with_primes(&gi, &[]).unwrap().torsion_order, 4);
        let e = NumberField::new(&[1, -1, 1]).unwrap();
        assert_eq!(SConfig::with_primes(&e, &[]).unwrap().torsion_order, 6);
        let m5 = NumberField::new(&[5, 0, 1]).unwrap();
        assert_eq!(SConfig::with_primes(&m5, &[]).unwrap().torsion_order, 2);
    }

    #[test]
    fn finite_place_units_in_quadratic_field() {
        let k = NumberField::new(&[-2, 0, 1]).unwrap();
        let s = SConfig::with_primes(&k, &[7]).unwrap().with_builtin_units().unwrap();
        assert_eq!(s.units.len(), 3);
        assert!(s.units.iter().all(|u| s.s_norm(u) == qi(1)));
    }
}
