//! Lower-bound search over rational points, bracketing of the inhomogeneous
//! minimum, and the norm-Euclidean decision procedure.

use super::cover::{covering_verify, CoverOutcome, CoverParams, CoveringCertificate, SurvivingBox};
use super::exact::{m_exact_in, MinimumValue};
use super::MinError;
use crate::rational::{qi, serde_q, Q};
use crate::sarith::valuation;
use crate::torus::FundamentalDomain;
use crate::FieldElement;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;

/// A point of K together with its exact minimum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub xi: FieldElement,
    pub minimum: MinimumValue,
}

impl Witness {
    /// Recomputes the minimum and checks it against the stored value and shift.
    pub fn replay(&self, dom: &FundamentalDomain) -> Result<bool, MinError> {
        let fresh = m_exact_in(dom, &self.xi)?;
        let shift_ok = dom.in_ideal(&self.minimum.attaining_shift)
            && dom.s.s_norm(&(&self.xi - &self.minimum.attaining_shift)) / &dom.norm == self.minimum.value;
        Ok(fresh.value == self.minimum.value && shift_ok)
    }
}

/// Orbit-pruned maximization of `m` over `(1/m) a / a` for a range of `m`.
struct LowerSearch {
    seen: HashSet<FieldElement>,
    best: Option<Witness>,
    next_denominator: u64,
}

impl LowerSearch {
    fn new() -> Self {
        LowerSearch { seen: HashSet::new(), best: None, next_denominator: 1 }
    }

    /// Searches denominators up to `bound`; returns the best witness found at
    /// the denominators examined in this call.
    fn extend(&mut self, dom: &FundamentalDomain, bound: u64, workers: usize) -> Result<Option<Witness>, MinError> {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(workers.max(1)).build().expect("thread pool");
        let mut round_best: Option<Witness> = None;
        while self.next_denominator <= bound {
            let m = self.next_denominator;
            self.next_denominator += 1;
            let mut fresh = Vec::new();
            for x in dom.torsion_reps(m) {
                let (rep, _) = dom.reduce(&x);
                if self.seen.contains(&rep) {
                    continue;
                }
                for o in dom.orbit(&rep) {
                    self.seen.insert(o);
                }
                fresh.push(rep);
            }
            let values: Vec<Result<MinimumValue, MinError>> = pool.install(|| fresh.par_iter().map(|x| m_exact_in(dom, x)).collect());
            for (x, v) in fresh.into_iter().zip(values) {
                let v = v?;
                if round_best.as_ref().map_or(true, |b| v.value > b.minimum.value) {
                    round_best = Some(Witness { xi: x, minimum: v });
                }
            }
        }
        if let Some(r) = &round_best {
            if self.best.as_ref().map_or(true, |b| r.minimum.value > b.minimum.value) {
                self.best = Some(r.clone());
            }
        }
        Ok(round_best)
    }
}

/// The maximum of `m_a^S` over the points of `(1/m) a / a`, `m <= denom_bound`,
/// evaluated once per unit orbit. Ties keep the first point found.
pub fn search_lower(dom: &FundamentalDomain, denom_bound: u64) -> Result<Witness, MinError> {
    let mut s = LowerSearch::new();
    s.extend(dom, denom_bound.max(1), 1)?;
    Ok(s.best.expect("denominator 1 gives the zero point"))
}

/// One covering attempt made while bracketing the minimum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverAttempt {
    #[serde(with = "serde_q")]
    pub threshold: Q,
    pub certified: bool,
    pub evaluations: u64,
}

/// Bracket `lower <= M <= upper` for the inhomogeneous minimum.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MReport {
    #[serde(with = "serde_q")]
    pub lower: Q,
    pub witness: Witness,
    pub witness_orbit_size: usize,
    #[serde(with = "serde_q::opt")]
    pub upper: Option<Q>,
    pub certificate: Option<CoveringCertificate>,
    /// Consistency flag: covering held at every tested threshold above
    /// `lower`, and a failed covering at `lower` left the witness orbit
    /// uncovered. Evidence, not a proof of `M = lower`.
    pub exact: bool,
    /// False when the budget ran out before `upper - lower <= gap`.
    pub complete: bool,
    pub denominator_searched: u64,
    pub attempts: Vec<CoverAttempt>,
}

/// Parameters for `compute_m`.
#[derive(Clone, Debug)]
pub struct BracketParams {
    pub gap: Q,
    pub denom_bound: u64,
    pub budget: u64,
    pub workers: usize,
}

/// Brackets `M_a^S`: rational lower bounds from exact minima at points of
/// small denominator, upper bounds from covering certificates at
/// `t = lower + g` with `g` halved down to `gap`.
pub fn compute_m(dom: &FundamentalDomain, p: &BracketParams) -> Result<MReport, MinError> {
    let mut search = LowerSearch::new();
    let mut denom = p.denom_bound.max(1);
    search.extend(dom, denom, p.workers)?;
    let mut used = 0u64;
    let mut attempts = Vec::new();
    let mut upper: Option<(Q, CoveringCertificate)> = None;
    // Start from a coarse gap and halve towards the requested one.
    let mut cur = Q::one();
    let mut complete = false;
    loop {
        let lower = search.best.as_ref().expect("nonempty").minimum.value.clone();
        let gap_now = if cur <= p.gap { p.gap.clone() } else { cur.clone() };
        let t = &lower + &gap_now;
        if let Some((_, cert)) = upper.as_mut().filter(|(u, _)| &*u < &t) {
            // Every bound is below upper < t, so the certificate holds at t as well.
            cert.threshold = t.clone();
            attempts.push(CoverAttempt { threshold: t.clone(), certified: true, evaluations: 0 });
        } else {
            let remaining = p.budget.saturating_sub(used);
            if remaining == 0 {
                break;
            }
            let out = covering_verify(dom, &CoverParams { threshold: t.clone(), budget: remaining, workers: p.workers });
            used += out.stats().evaluations;
            let certified = matches!(out, CoverOutcome::Certified(..));
            attempts.push(CoverAttempt { threshold: t.clone(), certified, evaluations: out.stats().evaluations });
            match out {
                CoverOutcome::Certified(cert, _) => {
                    let top = cert.boxes.iter().map(|b| b.bound.clone()).max().unwrap_or_else(Q::zero);
                    if upper.as_ref().map_or(true, |(u, _)| &top < u) {
                        upper = Some((top, cert));
                    }
                }
                CoverOutcome::Unresolved(..) => {
                    // Look for better witnesses before retrying.
                    denom *= 2;
                    search.extend(dom, denom, p.workers)?;
                    if used >= p.budget {
                        break;
                    }
                    continue;
                }
            }
        }
        if gap_now == p.gap {
            complete = true;
            break;
        }
        cur = &cur / qi(2);
    }
    let witness = search.best.clone().expect("nonempty");
    let lower = witness.minimum.value.clone();
    let witness_orbit_size = dom.orbit(&witness.xi).len();
    let all_held = attempts.iter().filter(|a| a.threshold > lower).all(|a| a.certified);
    let mut exact = false;
    if complete && all_held && !lower.is_zero() {
        let remaining = p.budget.saturating_sub(used).min(20_000);
        if remaining > 0 {
            let out = covering_verify(dom, &CoverParams { threshold: lower.clone(), budget: remaining, workers: p.workers });
            if let CoverOutcome::Unresolved(boxes, _) = &out {
                let orbit = dom.orbit(&witness.xi);
                exact = orbit.iter().any(|x| boxes.iter().any(|b| box_contains(dom, b, x)));
            }
        }
    }
    let (upper, certificate) = match upper {
        Some((u, c)) => (Some(u), Some(c)),
        None => (None, None),
    };
    Ok(MReport {
        lower,
        witness,
        witness_orbit_size,
        upper,
        certificate,
        exact,
        complete,
        denominator_searched: search.next_denominator - 1,
        attempts,
    })
}

/// Whether the closed archimedean box and finite classes contain `x`.
pub fn box_contains(dom: &FundamentalDomain, b: &SurvivingBox, x: &FieldElement) -> bool {
    let t = dom.t_coords(x);
    let arch = b.arch.iter().zip(&t).all(|((lo, hi), v)| lo <= v && v <= hi);
    arch && b.finite.iter().all(|fc| {
        let d = x - &fc.center;
        d.is_zero() || valuation(dom.field(), &d, &dom.s.finite[fc.place]).expect("nonzero") >= fc.k as i64
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    Euclidean,
    NotEuclidean,
    Undecided { budget: u64 },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecideEffort {
    pub rounds: u32,
    pub evaluations: u64,
    pub denominator_searched: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EuclideanVerdict {
    pub verdict: Verdict,
    pub certificate: Option<CoveringCertificate>,
    pub witness: Option<Witness>,
    pub effort: DecideEffort,
}

/// Decides whether the class of `a` is norm-Euclidean for S by alternating
/// a covering attempt at `t = 1` with a search for a point of minimum at
/// least 1, doubling the effort of both each round.
pub fn decide_norm_euclidean(dom: &FundamentalDomain, budget: u64, workers: usize) -> Result<EuclideanVerdict, MinError> {
    let mut effort = DecideEffort::default();
    let mut search = LowerSearch::new();
    let mut chunk = 2_000u64;
    let mut denom = 4u64;
    loop {
        effort.rounds += 1;
        let remaining = budget.saturating_sub(effort.evaluations);
        let out = covering_verify(dom, &CoverParams { threshold: Q::one(), budget: chunk.min(remaining).max(1), workers });
        effort.evaluations += out.stats().evaluations;
        if let CoverOutcome::Certified(cert, _) = out {
            return Ok(EuclideanVerdict { verdict: Verdict::Euclidean, certificate: Some(cert), witness: None, effort });
        }
        let round = search.extend(dom, denom, workers)?;
        effort.denominator_searched = denom;
        if let Some(w) = round.filter(|w| w.minimum.value >= Q::one()) {
            return Ok(EuclideanVerdict { verdict: Verdict::NotEuclidean, certificate: None, witness: Some(w), effort });
        }
        if effort.evaluations >= budget {
            return Ok(EuclideanVerdict { verdict: Verdict::Undecided { budget }, certificate: None, witness: None, effort });
        }
        chunk *= 2;
        denom *= 2;
    }
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
    fn search_examples() {
        let dom = domain(&[-1, 1], &[]);
        let w = search_lower(&dom, 4).unwrap();
        assert_eq!((w.xi.coords[0].clone(), w.minimum.value.clone()), (q(1, 2), q(1, 2)));
        let dom = domain(&[1, 0, 1], &[]);
        let w = search_lower(&dom, 2).unwrap();
        assert_eq!(w.xi, dom.field().elem(vec![q(1, 2), q(1, 2)]).unwrap());
        assert_eq!(w.minimum.value, q(1, 2));
        let dom = domain(&[-1, 1], &[2, 3]);
        let w = search_lower(&dom, 5).unwrap();
        assert_eq!(w.minimum.value, q(1, 5));
        assert!(w.replay(&dom).unwrap());
    }

    #[test]
    fn bracket_rationals() {
        let dom = domain(&[-1, 1], &[]);
        let r = compute_m(&dom, &BracketParams { gap: q(1, 100), denom_bound: 4, budget: 100_000, workers: 1 }).unwrap();
        assert_eq!(r.lower, q(1, 2));
        assert!(r.upper.clone().unwrap() <= q(51, 100));
        assert!(r.complete && r.exact);
    }

    #[test]
    fn decide_examples() {
        let dom = domain(&[1, 0, 1], &[]);
        assert_eq!(decide_norm_euclidean(&dom, 100_000, 1).unwrap().verdict, Verdict::Euclidean);
        let dom = domain(&[5, 0, 1], &[]);
        let v = decide_norm_euclidean(&dom, 100_000, 1).unwrap();
        assert_eq!(v.verdict, Verdict::NotEuclidean);
        let w = v.witness.unwrap();
        assert_eq!(w.xi, dom.field().elem(vec![q(1, 2), q(1, 2)]).unwrap());
        assert_eq!(w.minimum.value, q(3, 2));
    }
}
