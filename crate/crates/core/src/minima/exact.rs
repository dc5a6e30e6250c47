//! Exact minima at points of K by orbit reduction and bounded enumeration.

use super::{centre_radius, finite_factor, MinError, NormForm};
use crate::ideal::FractionalIdeal;
use crate::linalg::{inverse, mat_mul, mat_vec, transpose, Mat};
use crate::rational::{floor, qi, qz, root_upper, serde_q, sqrt_upper, Q, Z};
use crate::sarith::SConfig;
use crate::torus::{FundamentalDomain, OrbitPoint};
use crate::FieldElement;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// Largest number of lattice points `m_exact` will enumerate.
const MAX_ENUMERATION: u128 = 5_000_000;

/// Precision used for archimedean enclosures of units and dual vectors.
const BITS: u32 = 64;

/// The region enumerated to certify a minimum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBox {
    /// Upper bound on `|eta|_v` for each place of S, archimedean first.
    #[serde(with = "serde_q::vec")]
    pub radii: Vec<Q>,
    /// Required valuation of `eta` at each finite place of S.
    pub levels: Vec<i64>,
    pub orbit_size: usize,
    /// Lattice points examined.
    pub candidates: u64,
}

/// `m_a^S(xi)` with a shift attaining it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimumValue {
    #[serde(with = "serde_q")]
    pub value: Q,
    pub attaining_shift: FieldElement,
    pub search_box: SearchBox,
}

/// A product region of `F x prod O_v`: archimedean intervals in coordinates
/// on the basis of `a_0`, and at each finite place of S a ball
/// `center + P^k` (or the single point `center` when `k` is `None`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdeleRegion {
    pub arch: Vec<(Q, Q)>,
    pub finite: Vec<(FieldElement, Option<u32>)>,
}

impl AdeleRegion {
    /// The point region at an element of K.
    pub fn point(dom: &FundamentalDomain, x: &FieldElement) -> AdeleRegion {
        let t = dom.t_coords(x);
        AdeleRegion {
            arch: t.into_iter().map(|c| (c.clone(), c)).collect(),
            finite: dom.s.finite.iter().map(|_| (x.clone(), None)).collect(),
        }
    }
}

/// `m_a^S(xi)` for the O_S-ideal generated by `a`.
pub fn m_exact(s: &SConfig, a: &FractionalIdeal, xi: &FieldElement) -> Result<MinimumValue, MinError> {
    let dom = FundamentalDomain::new(s, a);
    m_exact_in(&dom, xi)
}

/// `m_a^S(xi)` on a prepared fundamental domain.
pub fn m_exact_in(dom: &FundamentalDomain, xi: &FieldElement) -> Result<MinimumValue, MinError> {
    let s = &dom.s;
    if !s.verified {
        return Err(MinError::UnverifiedUnits);
    }
    let k = dom.field();
    let nsize = s.size();
    if dom.in_ideal(xi) {
        return Ok(MinimumValue {
            value: Q::zero(),
            attaining_shift: xi.clone(),
            search_box: SearchBox { radii: vec![Q::zero(); nsize], levels: vec![0; s.finite.len()], orbit_size: 1, candidates: 0 },
        });
    }
    // Discrete lower bound: xi - gamma lies in the O_S-ideal xi O_S + a.
    let b = s.prime_to_s(&k.ideal_add(&k.principal(xi)?, &dom.ideal));
    let floor_value = b.norm() / &dom.norm;
    let table = OrbitTable::new(dom, &b, xi);

    // Initial upper bound from the corners of the cells around the first few
    // orbit representatives.
    let short = Corners::new(k.reduce_basis(&dom.basis));
    let mut best: Option<(Q, usize, FieldElement)> = None;
    for (i, v) in table.order.iter().take(CORNER_POINTS).enumerate() {
        let rep = table.element(v);
        for g in short.around(&rep) {
            let eta = &rep - &g;
            let val = s.s_norm(&eta) / &dom.norm;
            if best.as_ref().map_or(true, |(b, _, _)| &val < b) {
                best = Some((val, i, eta));
            }
        }
    }
    let (mut best_val, best_i, mut best_eta) = best.expect("orbit is nonempty");
    let mut best_exps = table.exponents[&table.order[best_i]].clone();
    let mut search_box = SearchBox { radii: Vec::new(), levels: Vec::new(), orbit_size: table.order.len(), candidates: 0 };

    // Every eta with N_S(eta) <= t has a unit multiple with
    // |eta|_v <= (t N(a_0))^{1/s} C_v at every place of S. Targets grow from
    // the floor; once the best value found is within the target it is exact.
    let spread = unit_spread(s);
    let mut target = floor_value.clone();
    while best_val > floor_value {
        if target > best_val {
            target = best_val.clone();
        }
        let scale = root_upper(&(&target * &dom.norm), nsize as u32, BITS);
        let radii: Vec<Q> = spread.iter().map(|c| &scale * c).collect();
        let levels: Vec<i64> = s
            .finite
            .iter()
            .enumerate()
            .map(|(i, v)| min_level(&qz(v.norm.clone()), &radii[s.arch_count() + i]))
            .collect();
        let (lbasis, ranges) = search_ranges(dom, &b, &radii, &levels)?;
        // Classes in b_0 / a_0 are additive, so candidates are tested for
        // orbit membership on integer vectors before any norm is taken.
        let classes: Vec<Vec<Z>> = lbasis.iter().map(|e| table.class(e)).collect();
        let mut z: Vec<Z> = ranges.iter().map(|r| r.0.clone()).collect();
        loop {
            search_box.candidates += 1;
            let mut v = vec![Z::zero(); lbasis.len()];
            for (zi, c) in z.iter().zip(&classes) {
                if !zi.is_zero() {
                    for (vi, x) in v.iter_mut().zip(c) {
                        *vi += zi * x;
                    }
                }
            }
            // eta = u xi - gamma for a unit u exactly when its class is in the orbit
            if let Some(exps) = table.exponents.get(&table.reduce(v)) {
                let eta = z
                    .iter()
                    .zip(&lbasis)
                    .fold(k.zero(), |acc, (zi, b)| if zi.is_zero() { acc } else { &acc + &b.scale(&qz(zi.clone())) });
                let val = s.s_norm(&eta) / &dom.norm;
                if val < best_val {
                    best_val = val;
                    best_exps = exps.clone();
                    best_eta = eta;
                }
            }
            let mut i = 0;
            while i < z.len() {
                z[i] += 1;
                if z[i] > ranges[i].1 {
                    z[i] = ranges[i].0.clone();
                    i += 1;
                } else {
                    break;
                }
            }
            if i == z.len() {
                break;
            }
        }
        search_box.radii = radii;
        search_box.levels = levels;
        if best_val <= target {
            break;
        }
        target *= qi(4);
    }

    // u xi - eta lies in the ideal, so xi - gamma = u^{-1} eta for gamma in it.
    let unit = dom.orbit_unit(&OrbitPoint { rep: k.zero(), exponents: best_exps });
    let gamma = xi - &k.mul(&k.inv(&unit)?, &best_eta);
    let value = s.s_norm(&(xi - &gamma)) / &dom.norm;
    debug_assert_eq!(value, best_val);
    Ok(MinimumValue { value, attaining_shift: gamma, search_box })
}

/// Orbit representatives whose cells seed the upper bound.
const CORNER_POINTS: usize = 32;

/// A reduced basis of `b_0 prod P_v^{levels_v}` and the coordinate ranges
/// on it covering every element with `|eta|_v <= radii_v` at the
/// archimedean places.
fn search_ranges(
    dom: &FundamentalDomain,
    b: &FractionalIdeal,
    radii: &[Q],
    levels: &[i64],
) -> Result<(Vec<FieldElement>, Vec<(Z, Z)>), MinError> {
    let k = dom.field();
    let (r1, r2) = k.signature();
    let modulus: Vec<Q> =
        (0..r1 + r2).map(|i| if i < r1 { radii[i].clone() } else { sqrt_upper(&radii[i], BITS) }).collect();
    let mut lattice = b.clone();
    for (v, &e) in dom.s.finite.iter().zip(levels) {
        if e != 0 {
            lattice = k.ideal_mul(&lattice, &k.ideal_pow(&v.ideal, e));
        }
    }
    let lbasis = k.reduce_basis(&lattice.basis());
    let mut ranges = Vec::with_capacity(lbasis.len());
    let mut count: u128 = 1;
    for d in trace_dual_basis(k, &lbasis) {
        let abs = k.archimedean_abs(&d, BITS);
        let w = (0..r1 + r2)
            .map(|i| if i < r1 { &modulus[i] * &abs[i].hi } else { qi(2) * &modulus[i] * sqrt_upper(&abs[i].hi, BITS) })
            .fold(Q::zero(), |a, b| a + b);
        let hi = floor(&w);
        count = count.saturating_mul((&hi + &hi + 1u32).to_u128().unwrap_or(u128::MAX));
        ranges.push((-hi.clone(), hi));
    }
    if count > MAX_ENUMERATION {
        return Err(MinError::SearchTooLarge(count));
    }
    Ok((lbasis, ranges))
}

/// The unit orbit of `xi` inside the finite group `b_0 / a_0`, where `b_0`
/// is the prime-to-S part of `xi O_S + a`.
///
/// Classes are integer coordinate vectors on the basis of `b_0`, reduced
/// modulo the HNF of `a_0`; each unit acts by an integer matrix, so the
/// walk needs no field arithmetic.
struct OrbitTable<'a> {
    dom: &'a FundamentalDomain,
    b: FractionalIdeal,
    basis: Vec<FieldElement>,
    hnf: Vec<Vec<Z>>,
    /// Orbit classes in discovery order.
    order: Vec<Vec<Z>>,
    /// Unit exponents (torsion first) reaching each class from `xi`.
    exponents: HashMap<Vec<Z>, Vec<i64>>,
}

impl<'a> OrbitTable<'a> {
    fn new(dom: &'a FundamentalDomain, b: &FractionalIdeal, xi: &FieldElement) -> OrbitTable<'a> {
        let k = dom.field();
        let n = dom.degree();
        let basis = b.basis();
        let cols: Vec<Vec<Z>> = dom.basis.iter().map(|e| integer_coords(b, e)).collect();
        let hnf = crate::linalg::hnf(n, &cols).expect("a_0 has full rank in b_0");
        let mut table =
            OrbitTable { dom, b: b.clone(), basis, hnf, order: Vec::new(), exponents: HashMap::new() };

        // Generators with their exponent steps; free units in both directions.
        let m = dom.s.units.len();
        let mut gens: Vec<(FieldElement, usize, i64)> = vec![(dom.s.torsion.clone(), 0, 1)];
        for (j, u) in dom.s.units.iter().enumerate() {
            gens.push((u.clone(), j + 1, 1));
            gens.push((k.inv(u).expect("units are invertible"), j + 1, -1));
        }
        let actions: Vec<(Vec<Vec<Z>>, usize, i64)> = gens
            .iter()
            .map(|(g, j, d)| {
                let images: Vec<Vec<Z>> = table.basis.iter().map(|e| table.class(&k.mul(g, e))).collect();
                (images, *j, *d)
            })
            .collect();
        let torsion_order = i64::from(dom.s.torsion_order.max(1));

        let start = table.class(xi);
        table.exponents.insert(start.clone(), vec![0; 1 + m]);
        table.order.push(start);
        let mut head = 0;
        while head < table.order.len() {
            let v = table.order[head].clone();
            head += 1;
            for (images, j, d) in &actions {
                let mut w = vec![Z::zero(); n];
                for (c, img) in v.iter().zip(images) {
                    if !c.is_zero() {
                        for (wi, x) in w.iter_mut().zip(img) {
                            *wi += c * x;
                        }
                    }
                }
                let w = table.reduce(w);
                if !table.exponents.contains_key(&w) {
                    let mut e = table.exponents[&v].clone();
                    e[*j] += d;
                    if *j == 0 {
                        e[0] = e[0].rem_euclid(torsion_order);
                    }
                    table.exponents.insert(w.clone(), e);
                    table.order.push(w);
                }
            }
        }
        table
    }

    /// Canonical vector modulo the HNF of `a_0`.
    fn reduce(&self, mut x: Vec<Z>) -> Vec<Z> {
        for i in (0..x.len()).rev() {
            let q = num_integer::Integer::div_floor(&x[i], &self.hnf[i][i]);
            if !q.is_zero() {
                for r in 0..=i {
                    x[r] -= &q * &self.hnf[r][i];
                }
            }
        }
        x
    }

    /// The class of an element of `b_0 O_S`.
    fn class(&self, x: &FieldElement) -> Vec<Z> {
        let (rep, _) = self.dom.reduce(x);
        self.reduce(integer_coords(&self.b, &rep))
    }

    /// The fundamental-domain representative of a class.
    fn element(&self, v: &[Z]) -> FieldElement {
        let x = v.iter().zip(&self.basis).fold(self.dom.field().zero(), |acc, (c, e)| {
            if c.is_zero() {
                acc
            } else {
                &acc + &e.scale(&qz(c.clone()))
            }
        });
        self.dom.reduce(&x).0
    }
}

/// Coordinates of an element of the lattice `l` on its basis.
fn integer_coords(l: &FractionalIdeal, x: &FieldElement) -> Vec<Z> {
    l.lattice_coords(x)
        .into_iter()
        .map(|c| {
            debug_assert!(c.is_integer(), "element outside the lattice");
            c.to_integer()
        })
        .collect()
}

/// Lattice points at the corners of lattice cells.
struct Corners {
    basis: Vec<FieldElement>,
    /// Maps coordinates on the integral basis to coordinates on `basis`.
    inv: Mat,
}

impl Corners {
    fn new(basis: Vec<FieldElement>) -> Corners {
        let m = transpose(&basis.iter().map(|b| b.coords.clone()).collect::<Mat>());
        let inv = inverse(&m).expect("basis is independent");
        Corners { basis, inv }
    }

    /// The corners of the cell containing `x`.
    fn around(&self, x: &FieldElement) -> Vec<FieldElement> {
        let n = self.basis.len();
        let base: Vec<Z> = mat_vec(&self.inv, &x.coords).iter().map(floor).collect();
        let low = self.basis.iter().zip(&base).fold(FieldElement::new(vec![Q::zero(); n]), |acc, (b, c)| {
            if c.is_zero() {
                acc
            } else {
                &acc + &b.scale(&qz(c.clone()))
            }
        });
        (0..1u32 << n)
            .map(|mask| {
                (0..n).filter(|i| mask >> i & 1 == 1).fold(low.clone(), |acc, i| &acc + &self.basis[i])
            })
            .collect()
    }
}

/// `C_v = sqrt(prod_j max(|u_j|_v, |u_j|_v^{-1}))` over the log basis.
fn unit_spread(s: &SConfig) -> Vec<Q> {
    let mut sq = vec![Q::one(); s.size()];
    for &j in &s.log_basis {
        let abs = s.abs_values(&s.units[j], BITS);
        for (acc, iv) in sq.iter_mut().zip(&abs) {
            let up = if iv.hi > Q::one() { iv.hi.clone() } else { Q::one() / &iv.lo };
            *acc *= up;
        }
    }
    sq.iter().map(|c| sqrt_upper(c, BITS)).collect()
}

/// Least `k` with `np^{-k} <= r`.
fn min_level(np: &Q, r: &Q) -> i64 {
    let mut k = 0i64;
    let mut val = Q::one();
    if &val <= r {
        while &(&val * np) <= r {
            val *= np;
            k -= 1;
        }
    } else {
        while &val > r {
            val /= np;
            k += 1;
        }
    }
    k
}

/// Elements `l_i*` with `Tr(l_i* l_j) = delta_ij`.
fn trace_dual_basis(k: &crate::NumberField, basis: &[FieldElement]) -> Vec<FieldElement> {
    let b: Mat = basis.iter().map(|x| x.coords.clone()).collect();
    let tb = mat_mul(k.trace_form(), &transpose(&b));
    let c = inverse(&tb).expect("nondegenerate trace form");
    c.into_iter().map(FieldElement::new).collect()
}

/// Certified upper bound on `sup N_S(x - gamma) / N_S(a)` over the region,
/// minimized over the candidates; returns the bound and the best candidate.
pub fn m_upper_adele(
    dom: &FundamentalDomain,
    region: &AdeleRegion,
    candidates: &[FieldElement],
) -> Result<(Q, FieldElement), MinError> {
    if candidates.is_empty() {
        return Err(MinError::NoCandidates);
    }
    if region.arch.len() != dom.degree() || region.finite.len() != dom.s.finite.len() {
        return Err(MinError::RegionShape {
            got: region.arch.len(),
            got_finite: region.finite.len(),
            want: dom.degree(),
            want_finite: dom.s.finite.len(),
        });
    }
    let form = NormForm::new(dom);
    let (c, h) = centre_radius(&region.arch);
    let mut best: Option<(Q, FieldElement)> = None;
    for g in candidates {
        if !dom.in_ideal(g) {
            return Err(MinError::ShiftNotInIdeal(g.clone()));
        }
        let tg = dom.t_coords(g);
        let d: Vec<Q> = c.iter().zip(&tg).map(|(a, b)| a - b).collect();
        let mut bound = form.box_bound(&d, &h);
        for (i, (center, kk)) in region.finite.iter().enumerate() {
            if bound.is_zero() {
                break;
            }
            bound *= finite_factor(dom, i, center, *kk, g);
        }
        bound /= &dom.norm;
        if best.as_ref().map_or(true, |(b, _)| &bound < b) {
            best = Some((bound, g.clone()));
        }
    }
    Ok(best.expect("nonempty"))
}
