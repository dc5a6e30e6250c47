//! Branch-and-bound covering of `F x prod O_v` by boxes with assigned shifts,
//! the certificate it produces, and an independent replay verifier.

use super::{centre_radius, finite_factor, NormForm};
use crate::ideal::FractionalIdeal;
use crate::linalg::{inverse, Mat};
use crate::rational::{qi, qz, serde_q, to_f64, Q, Z};
use crate::sarith::valuation;
use crate::torus::FundamentalDomain;
use crate::FieldElement;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::sync::{Arc, RwLock};
use thiserror::Error;

/// Boxes split per round; fixed so that results do not depend on the pool size.
const BATCH: usize = 256;
const MAX_ARCH_LEVEL: u32 = 48;
const MAX_FINITE_LEVEL: u32 = 24;
/// Least valuation level from which candidate shifts are drawn.
const MIN_SHIFT_LEVEL: i64 = -2;
/// Candidates re-scored exactly after the floating-point ranking.
const EXACT_RESCORE: usize = 3;

#[derive(Clone, Debug)]
pub struct CoverParams {
    pub threshold: Q,
    /// Maximum number of box evaluations.
    pub budget: u64,
    pub workers: usize,
}

impl CoverParams {
    pub fn new(threshold: Q, budget: u64) -> CoverParams {
        CoverParams { threshold, budget, workers: 1 }
    }
}

/// A ball `center + P^k` at one finite place of S.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FiniteClass {
    pub place: usize,
    #[serde(with = "serde_q::int")]
    pub p: Z,
    pub k: u32,
    pub center: FieldElement,
}

/// One box of a covering with its shift and certified bound on
/// `N_S(x - gamma) / N_S(a)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertBox {
    /// Half-open intervals in coordinates on the basis of `a_0`.
    #[serde(with = "serde_q::pairs")]
    pub arch: Vec<(Q, Q)>,
    pub finite: Vec<FiniteClass>,
    pub gamma: FieldElement,
    #[serde(with = "serde_q")]
    pub bound: Q,
}

pub type SurvivingBox = CertBox;

/// A tiling of `F x prod O_v` by boxes each certified below the threshold.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoveringCertificate {
    #[serde(with = "serde_q")]
    pub threshold: Q,
    /// The prime-to-S lattice `a_0` whose basis defines the coordinates.
    pub ideal: FractionalIdeal,
    #[serde(with = "serde_q")]
    pub norm: Q,
    pub boxes: Vec<CertBox>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverStats {
    pub evaluations: u64,
    pub arch_splits: u64,
    pub finite_splits: u64,
    pub max_arch_level: u32,
    pub max_finite_level: u32,
}

#[derive(Clone, Debug)]
pub enum CoverOutcome {
    Certified(CoveringCertificate, CoverStats),
    /// Boxes not certified when the budget ran out (or that could not be
    /// refined further), worst bound first.
    Unresolved(Vec<SurvivingBox>, CoverStats),
}

impl CoverOutcome {
    pub fn certificate(&self) -> Option<&CoveringCertificate> {
        match self {
            CoverOutcome::Certified(c, _) => Some(c),
            CoverOutcome::Unresolved(..) => None,
        }
    }

    pub fn stats(&self) -> &CoverStats {
        match self {
            CoverOutcome::Certified(_, s) | CoverOutcome::Unresolved(_, s) => s,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("certificate lattice or norm differs from the domain")]
    WrongDomain,
    #[error("box {0} has the wrong shape")]
    Shape(usize),
    #[error("box {0}: shift is not in the ideal")]
    ShiftNotInIdeal(usize),
    #[error("box {0}: finite center is not integral")]
    CenterNotIntegral(usize),
    #[error("box {index}: stated bound {stated} but recomputed {actual}")]
    BoundMismatch { index: usize, stated: String, actual: String },
    #[error("box {0}: bound is not below the threshold")]
    AboveThreshold(usize),
    #[error("boxes leave part of the domain uncovered")]
    Gap,
    #[error("box {0} crosses a split of the tiling")]
    Straddle(usize),
    #[error("boxes overlap or do not form a guillotine tiling")]
    NotATiling,
    #[error("sample point is not covered by any box")]
    Uncovered,
    #[error("sample point violates its box's shift: value {0}")]
    SampleAboveThreshold(String),
}

#[derive(Clone, Debug)]
struct WBox {
    idx: Vec<u64>,
    lvl: Vec<u32>,
    k: Vec<u32>,
    g: FieldElement,
}

#[derive(Clone, Debug)]
struct Eval {
    bound: Q,
    gamma: FieldElement,
    centre_below: bool,
    axis_order: Vec<usize>,
}

struct Pending {
    bound: Q,
    seq: u64,
    b: WBox,
    e: Eval,
}

impl PartialEq for Pending {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for Pending {}
impl PartialOrd for Pending {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Pending {
    fn cmp(&self, o: &Self) -> Ordering {
        self.bound.cmp(&o.bound).then_with(|| o.seq.cmp(&self.seq))
    }
}

/// Basis data for the lattice `a_0 prod P_v^{j_v}` in coordinates on `a_0`.
struct LatData {
    rows: Mat,
    rows_f64: Vec<Vec<f64>>,
    inv_f64: Vec<Vec<f64>>,
    elems: Vec<FieldElement>,
    /// Upper bound on the finite factor for shifts in `g + lattice`.
    prior: Vec<i64>,
}

struct Engine<'a> {
    dom: &'a FundamentalDomain,
    form: NormForm,
    t: Q,
    log_np: Vec<f64>,
    lats: RwLock<HashMap<Vec<i64>, Arc<LatData>>>,
}

impl<'a> Engine<'a> {
    fn lat(&self, j: &[i64]) -> Arc<LatData> {
        if let Some(d) = self.lats.read().unwrap().get(j) {
            return d.clone();
        }
        let l = self.dom.lattice(j);
        let elems = l.basis();
        let rows: Mat = elems.iter().map(|e| self.dom.t_coords(e)).collect();
        let inv = inverse(&rows).expect("full rank");
        let f = |m: &Mat| m.iter().map(|r| r.iter().map(to_f64).collect()).collect();
        let d = Arc::new(LatData { rows_f64: f(&rows), inv_f64: f(&inv), rows, elems, prior: j.to_vec() });
        self.lats.write().unwrap().insert(j.to_vec(), d.clone());
        d
    }

    fn arch_box(b: &WBox) -> Vec<(Q, Q)> {
        b.idx
            .iter()
            .zip(&b.lvl)
            .map(|(&i, &l)| {
                let d = Z::one() << l;
                (Q::new(Z::from(i), d.clone()), Q::new(Z::from(i + 1), d))
            })
            .collect()
    }

    fn evaluate(&self, b: &WBox) -> Eval {
        let dom = self.dom;
        let n = dom.degree();
        let arch = Self::arch_box(b);
        let (c, h) = centre_radius(&arch);
        let cf: Vec<f64> = c.iter().map(to_f64).collect();
        let hf: Vec<f64> = h.iter().map(to_f64).collect();
        let tg = dom.t_coords(&b.g);
        let tgf: Vec<f64> = tg.iter().map(to_f64).collect();
        let m = b.k.len();

        // Rank candidate shifts g + sum z_i l_i by a floating-point estimate.
        let mut ranked: Vec<(f64, Arc<LatData>, Vec<i64>)> = Vec::new();
        let mut j: Vec<i64> = vec![MIN_SHIFT_LEVEL; m];
        loop {
            let lat = self.lat(&j);
            let prior: f64 = (0..m).map(|v| -(lat.prior[v].min(b.k[v] as i64) as f64) * self.log_np[v]).sum::<f64>().exp();
            let diff: Vec<f64> = (0..n).map(|i| cf[i] - tgf[i]).collect();
            let u: Vec<f64> = (0..n).map(|col| (0..n).map(|r| diff[r] * lat.inv_f64[r][col]).sum()).collect();
            let mut seen: Vec<Vec<i64>> = Vec::new();
            for mask in 0..1u32 << n {
                let z: Vec<i64> =
                    (0..n).map(|i| if mask >> i & 1 == 1 { u[i].ceil() as i64 } else { u[i].floor() as i64 }).collect();
                if seen.contains(&z) {
                    continue;
                }
                seen.push(z.clone());
                let d: Vec<f64> = (0..n)
                    .map(|col| diff[col] - (0..n).map(|r| z[r] as f64 * lat.rows_f64[r][col]).sum::<f64>())
                    .collect();
                let est = self.form.box_bound_f64(&d, &hf) * prior;
                ranked.push((est, lat.clone(), z));
            }
            let mut v = 0;
            while v < m {
                j[v] += 1;
                if j[v] > b.k[v] as i64 {
                    j[v] = MIN_SHIFT_LEVEL;
                    v += 1;
                } else {
                    break;
                }
            }
            if v == m {
                break;
            }
        }
        ranked.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal).then_with(|| a.2.cmp(&b.2)));

        let mut best: Option<(Q, FieldElement, Vec<Q>)> = None;
        for (_, lat, z) in ranked.iter().take(EXACT_RESCORE) {
            let mut gamma = b.g.clone();
            let mut d = c.iter().zip(&tg).map(|(a, b)| a - b).collect::<Vec<Q>>();
            for (r, zi) in z.iter().enumerate() {
                if *zi != 0 {
                    let zq = qi(*zi);
                    gamma = &gamma + &lat.elems[r].scale(&zq);
                    for col in 0..n {
                        d[col] -= &lat.rows[r][col] * &zq;
                    }
                }
            }
            let mut bound = self.form.box_bound(&d, &h);
            let mut fin = Q::one();
            for v in 0..m {
                fin *= finite_factor(dom, v, &b.g, Some(b.k[v]), &gamma);
            }
            bound = bound * &fin / &dom.norm;
            if best.as_ref().map_or(true, |(bb, _, _)| &bound < bb) {
                best = Some((bound, gamma, d));
            }
        }
        let (bound, gamma, d) = best.expect("at least one candidate");
        let mut fin = Q::one();
        for v in 0..m {
            fin *= finite_factor(dom, v, &b.g, Some(b.k[v]), &gamma);
        }
        let centre = self.form.value(&d) * fin / &dom.norm;
        let terms = self.form.axis_terms(&d, &h);
        let mut axis_order: Vec<usize> = (0..n).collect();
        axis_order.sort_by(|&a, &b| terms[b].cmp(&terms[a]).then(a.cmp(&b)));
        Eval { bound, gamma, centre_below: centre < self.t, axis_order }
    }

    /// Children of a box, or `None` when every axis is at its cap.
    fn split(&self, b: &WBox, e: &Eval, stats: &mut CoverStats) -> Option<Vec<WBox>> {
        let arch_axis = e.axis_order.iter().copied().find(|&i| b.lvl[i] < MAX_ARCH_LEVEL);
        let finite_place = (0..b.k.len())
            .filter(|&v| b.k[v] < MAX_FINITE_LEVEL)
            .min_by(|&x, &y| {
                let a = b.k[x] as f64 * self.log_np[x];
                let c = b.k[y] as f64 * self.log_np[y];
                a.partial_cmp(&c).unwrap_or(Ordering::Equal).then(x.cmp(&y))
            });
        let use_arch = match (arch_axis, finite_place) {
            (None, None) => return None,
            (Some(_), None) => true,
            (None, Some(_)) => false,
            (Some(_), Some(_)) => e.centre_below,
        };
        if use_arch {
            let i = arch_axis.unwrap();
            stats.arch_splits += 1;
            stats.max_arch_level = stats.max_arch_level.max(b.lvl[i] + 1);
            Some(
                (0..2)
                    .map(|half| {
                        let mut c = b.clone();
                        c.idx[i] = 2 * b.idx[i] + half;
                        c.lvl[i] += 1;
                        c
                    })
                    .collect(),
            )
        } else {
            let v = finite_place.unwrap();
            stats.finite_splits += 1;
            stats.max_finite_level = stats.max_finite_level.max(b.k[v] + 1);
            let exps: Vec<i64> = b.k.iter().map(|&x| x as i64).collect();
            let reps = self.dom.step_reps(&exps, v);
            let mut next = exps.clone();
            next[v] += 1;
            let fine = self.dom.lattice(&next);
            Some(
                reps.iter()
                    .map(|r| {
                        let mut c = b.clone();
                        c.k[v] += 1;
                        c.g = fine.reduce(&(&b.g + r)).0;
                        c
                    })
                    .collect(),
            )
        }
    }

    fn to_cert(&self, b: &WBox, e: &Eval) -> CertBox {
        CertBox {
            arch: Self::arch_box(b),
            finite: self
                .dom
                .s
                .finite
                .iter()
                .enumerate()
                .map(|(i, v)| FiniteClass { place: i, p: v.p.clone(), k: b.k[i], center: b.g.clone() })
                .collect(),
            gamma: e.gamma.clone(),
            bound: e.bound.clone(),
        }
    }
}

fn box_key(b: &CertBox) -> (Vec<(Q, Q)>, Vec<FiniteClass>) {
    (b.arch.clone(), b.finite.clone())
}

/// Attempts to prove `K_S = a + V_t` by covering `F x prod O_v` with boxes
/// whose certified bound on `N_S(x - gamma) / N_S(a)` is below `t`.
pub fn covering_verify(dom: &FundamentalDomain, params: &CoverParams) -> CoverOutcome {
    let n = dom.degree();
    let m = dom.s.finite.len();
    let engine = Engine {
        dom,
        form: NormForm::new(dom),
        t: params.threshold.clone(),
        log_np: dom.s.finite.iter().map(|v| to_f64(&qz(v.norm.clone())).ln()).collect(),
        lats: RwLock::new(HashMap::new()),
    };
    let pool = rayon::ThreadPoolBuilder::new().num_threads(params.workers.max(1)).build().expect("thread pool");
    let mut stats = CoverStats::default();
    let mut pending = vec![WBox { idx: vec![0; n], lvl: vec![0; n], k: vec![0; m], g: dom.field().zero() }];
    let mut heap: BinaryHeap<Pending> = BinaryHeap::new();
    let mut leaves: Vec<CertBox> = Vec::new();
    let mut stuck: Vec<CertBox> = Vec::new();
    let mut seq = 0u64;
    loop {
        let evals: Vec<Eval> = pool.install(|| pending.par_iter().map(|b| engine.evaluate(b)).collect());
        stats.evaluations += pending.len() as u64;
        for (b, e) in pending.drain(..).zip(evals) {
            if e.bound < params.threshold {
                leaves.push(engine.to_cert(&b, &e));
            } else {
                heap.push(Pending { bound: e.bound.clone(), seq, b, e });
                seq += 1;
            }
        }
        if heap.is_empty() {
            break;
        }
        if stats.evaluations >= params.budget {
            let mut rest: Vec<CertBox> = stuck;
            while let Some(p) = heap.pop() {
                rest.push(engine.to_cert(&p.b, &p.e));
            }
            rest.sort_by(|a, b| b.bound.cmp(&a.bound).then_with(|| box_key(a).cmp(&box_key(b))));
            return CoverOutcome::Unresolved(rest, stats);
        }
        for _ in 0..BATCH {
            let Some(p) = heap.pop() else { break };
            match engine.split(&p.b, &p.e, &mut stats) {
                Some(children) => pending.extend(children),
                None => stuck.push(engine.to_cert(&p.b, &p.e)),
            }
        }
    }
    if !stuck.is_empty() {
        stuck.sort_by(|a, b| b.bound.cmp(&a.bound).then_with(|| box_key(a).cmp(&box_key(b))));
        return CoverOutcome::Unresolved(stuck, stats);
    }
    leaves.sort_by_key(box_key);
    CoverOutcome::Certified(
        CoveringCertificate { threshold: params.threshold.clone(), ideal: dom.ideal.clone(), norm: dom.norm.clone(), boxes: leaves },
        stats,
    )
}

/// Recomputes the bound of a box from its edges, classes and shift.
pub fn replay_bound(dom: &FundamentalDomain, form: &NormForm, b: &CertBox) -> Q {
    let (c, h) = centre_radius(&b.arch);
    let tg = dom.t_coords(&b.gamma);
    let d: Vec<Q> = c.iter().zip(&tg).map(|(x, y)| x - y).collect();
    let mut bound = form.box_bound(&d, &h);
    for fc in &b.finite {
        bound *= finite_factor(dom, fc.place, &fc.center, Some(fc.k), &b.gamma);
    }
    bound / &dom.norm
}

/// Replays a certificate against the domain: every bound is recomputed
/// exactly and must be below `t`, and the boxes must tile `F x prod O_v`.
pub fn verify_certificate(dom: &FundamentalDomain, cert: &CoveringCertificate, t: &Q) -> Result<(), ReplayError> {
    if cert.ideal != dom.ideal || cert.norm != dom.norm {
        return Err(ReplayError::WrongDomain);
    }
    let n = dom.degree();
    let m = dom.s.finite.len();
    let k = dom.field();
    let form = NormForm::new(dom);
    let checks: Vec<Result<(), ReplayError>> = cert
        .boxes
        .par_iter()
        .enumerate()
        .map(|(i, b)| {
            let shape_ok = b.arch.len() == n
                && b.arch.iter().all(|(lo, hi)| lo < hi)
                && b.finite.len() == m
                && b.finite.iter().enumerate().all(|(j, fc)| fc.place == j && fc.p == dom.s.finite[j].p && fc.center.coords.len() == n);
            if !shape_ok {
                return Err(ReplayError::Shape(i));
            }
            for fc in &b.finite {
                if !fc.center.is_zero() && valuation(k, &fc.center, &dom.s.finite[fc.place]).map_or(true, |e| e < 0) {
                    return Err(ReplayError::CenterNotIntegral(i));
                }
            }
            if b.gamma.coords.len() != n || !dom.in_ideal(&b.gamma) {
                return Err(ReplayError::ShiftNotInIdeal(i));
            }
            let actual = replay_bound(dom, &form, b);
            if actual != b.bound {
                return Err(ReplayError::BoundMismatch {
                    index: i,
                    stated: crate::rational::fmt_q(&b.bound),
                    actual: crate::rational::fmt_q(&actual),
                });
            }
            if &actual >= t {
                return Err(ReplayError::AboveThreshold(i));
            }
            Ok(())
        })
        .collect();
    checks.into_iter().collect::<Result<(), _>>()?;
    let region = Region {
        arch: vec![(Q::zero(), Q::one()); n],
        finite: (0..m).map(|_| (k.zero(), 0u32)).collect(),
    };
    let all: Vec<usize> = (0..cert.boxes.len()).collect();
    check_tiling(dom, &cert.boxes, &region, all)
}

#[derive(Clone)]
struct Region {
    arch: Vec<(Q, Q)>,
    finite: Vec<(FieldElement, u32)>,
}

fn congruent(dom: &FundamentalDomain, place: usize, a: &FieldElement, b: &FieldElement, k: u32) -> bool {
    let d = a - b;
    d.is_zero() || valuation(dom.field(), &d, &dom.s.finite[place]).expect("nonzero") >= k as i64
}

/// Guillotine check: the boxes in `idx` must tile `region` exactly.
fn check_tiling(dom: &FundamentalDomain, boxes: &[CertBox], region: &Region, idx: Vec<usize>) -> Result<(), ReplayError> {
    if idx.is_empty() {
        return Err(ReplayError::Gap);
    }
    let width = |r: &(Q, Q)| &r.1 - &r.0;
    let n = region.arch.len();
    for axis in 0..n {
        let w = width(&region.arch[axis]);
        if !idx.iter().all(|&i| width(&boxes[i].arch[axis]) < w) {
            continue;
        }
        let (lo, hi) = region.arch[axis].clone();
        let mid = (&lo + &hi) / qi(2);
        let mut halves: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
        for &i in &idx {
            let (blo, bhi) = &boxes[i].arch[axis];
            if blo >= &lo && bhi <= &mid {
                halves[0].push(i);
            } else if blo >= &mid && bhi <= &hi {
                halves[1].push(i);
            } else {
                return Err(ReplayError::Straddle(i));
            }
        }
        let [low, high] = halves;
        let mut r0 = region.clone();
        r0.arch[axis] = (lo, mid.clone());
        let mut r1 = region.clone();
        r1.arch[axis] = (mid, hi);
        check_tiling(dom, boxes, &r0, low)?;
        return check_tiling(dom, boxes, &r1, high);
    }
    for place in 0..region.finite.len() {
        let (center, k) = &region.finite[place];
        if !idx.iter().all(|&i| boxes[i].finite[place].k > *k) {
            continue;
        }
        let mut groups: Vec<(FieldElement, Vec<usize>)> = Vec::new();
        for &i in &idx {
            let c = &boxes[i].finite[place].center;
            if !congruent(dom, place, c, center, *k) {
                return Err(ReplayError::Straddle(i));
            }
            match groups.iter_mut().find(|(g, _)| congruent(dom, place, c, g, k + 1)) {
                Some((_, members)) => members.push(i),
                None => groups.push((c.clone(), vec![i])),
            }
        }
        let np = dom.s.finite[place].norm.to_usize().unwrap_or(usize::MAX);
        if groups.len() != np {
            return Err(ReplayError::Gap);
        }
        for (g, members) in groups {
            let mut r = region.clone();
            r.finite[place] = (g, k + 1);
            check_tiling(dom, boxes, &r, members)?;
        }
        return Ok(());
    }
    if idx.len() != 1 {
        return Err(ReplayError::NotATiling);
    }
    let b = &boxes[idx[0]];
    let arch_equal = b.arch == region.arch;
    let finite_equal = b
        .finite
        .iter()
        .zip(&region.finite)
        .enumerate()
        .all(|(place, (fc, (c, k)))| fc.k == *k && congruent(dom, place, &fc.center, c, *k));
    if arch_equal && finite_equal {
        Ok(())
    } else {
        Err(ReplayError::Gap)
    }
}

/// Evaluates `N_S(x - gamma) / N_S(a)` exactly at `samples` random points
/// `x` of K in `F x prod O_v`, using the shift of the box containing `x`.
/// Returns the largest value observed.
pub fn spot_check(dom: &FundamentalDomain, cert: &CoveringCertificate, t: &Q, samples: usize, seed: u64) -> Result<Q, ReplayError> {
    let n = dom.degree();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let primes: Vec<i64> = (101i64..2000)
        .filter(|&q| crate::rational::is_prime_u64(q as u64))
        .filter(|&q| dom.s.finite.iter().all(|v| v.p != Z::from(q)))
        .collect();
    let arch_f64: Vec<Vec<(f64, f64)>> =
        cert.boxes.iter().map(|b| b.arch.iter().map(|(lo, hi)| (to_f64(lo), to_f64(hi))).collect()).collect();
    let mut worst = Q::zero();
    for _ in 0..samples {
        let t_coords: Vec<Q> = (0..n)
            .map(|_| {
                let q = primes[rng.gen_range(0..primes.len())];
                Q::new(Z::from(rng.gen_range(0..q)), Z::from(q))
            })
            .collect();
        let x = dom.from_t(&t_coords);
        let tf: Vec<f64> = t_coords.iter().map(to_f64).collect();
        let found = cert.boxes.iter().enumerate().find(|(i, b)| {
            let near = arch_f64[*i].iter().zip(&tf).all(|(&(lo, hi), &v)| v >= lo - 1e-9 && v <= hi + 1e-9);
            near && b.arch.iter().zip(&t_coords).all(|((lo, hi), v)| lo <= v && v < hi)
                && b.finite.iter().all(|fc| congruent(dom, fc.place, &x, &fc.center, fc.k))
        });
        let Some((_, b)) = found else {
            return Err(ReplayError::Uncovered);
        };
        let value = dom.s.s_norm(&(&x - &b.gamma)) / &dom.norm;
        if &value >= t {
            return Err(ReplayError::SampleAboveThreshold(crate::rational::fmt_q(&value)));
        }
        if value > worst {
            worst = value;
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use crate::{NumberField, SConfig};

    fn domain(poly: &[i64], primes: &[i64]) -> FundamentalDomain {
        let k = NumberField::new(poly).unwrap();
        let s = SConfig::with_primes(&k, primes).unwrap().with_builtin_units().unwrap();
        FundamentalDomain::new(&s, &k.unit_ideal())
    }

    #[test]
    fn rationals_cover_at_three_fifths() {
        let dom = domain(&[-1, 1], &[]);
        let out = covering_verify(&dom, &CoverParams::new(q(3, 5), 10_000));
        let cert = out.certificate().expect("certified");
        verify_certificate(&dom, cert, &q(3, 5)).unwrap();
        verify_certificate(&dom, cert, &q(2, 3)).unwrap();
        let worst = spot_check(&dom, cert, &q(3, 5), 200, 7).unwrap();
        assert!(worst <= q(1, 2));
    }

    #[test]
    fn rationals_unresolved_at_two_fifths() {
        let dom = domain(&[-1, 1], &[]);
        match covering_verify(&dom, &CoverParams::new(q(2, 5), 2_000)) {
            CoverOutcome::Unresolved(boxes, _) => {
                assert!(!boxes.is_empty());
                let half = q(1, 2);
                let worst = &boxes[0];
                assert!(worst.arch[0].0 <= half && half <= worst.arch[0].1);
                assert!(&worst.arch[0].1 - &worst.arch[0].0 < q(1, 100));
            }
            CoverOutcome::Certified(..) => panic!("covering below the true maximum"),
        }
    }

    #[test]
    fn gaussian_covers_at_one() {
        let dom = domain(&[1, 0, 1], &[]);
        let out = covering_verify(&dom, &CoverParams::new(q(1, 1), 100_000));
        let cert = out.certificate().expect("certified");
        verify_certificate(&dom, cert, &q(1, 1)).unwrap();
    }

    #[test]
    fn tampering_is_detected() {
        let dom = domain(&[-1, 1], &[2]);
        let out = covering_verify(&dom, &CoverParams::new(q(3, 5), 100_000));
        let cert = out.certificate().expect("certified").clone();
        verify_certificate(&dom, &cert, &q(3, 5)).unwrap();
        let mut bad = cert.clone();
        bad.boxes[0].bound = &bad.boxes[0].bound / qi(2);
        assert!(verify_certificate(&dom, &bad, &q(3, 5)).is_err());
        let mut bad = cert.clone();
        bad.boxes.pop();
        assert!(verify_certificate(&dom, &bad, &q(3, 5)).is_err());
        let mut bad = cert.clone();
        let dup = bad.boxes[0].clone();
        bad.boxes.push(dup);
        assert!(verify_certificate(&dom, &bad, &q(3, 5)).is_err());
    }
}
