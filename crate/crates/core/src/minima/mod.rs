//! Euclidean minima: exact values at points of K, certified coverings of the
//! adelic torus, and the search and decision procedures built on them.

mod cover;
mod exact;
mod search;

pub use cover::{
    covering_verify, replay_bound, spot_check, verify_certificate, CertBox, CoverOutcome, CoverParams, CoverStats,
    CoveringCertificate, FiniteClass, ReplayError, SurvivingBox,
};
pub use exact::{m_exact, m_exact_in, m_upper_adele, AdeleRegion, MinimumValue, SearchBox};
pub use search::{
    box_contains, compute_m, decide_norm_euclidean, search_lower, BracketParams, CoverAttempt, DecideEffort, EuclideanVerdict,
    MReport, Verdict, Witness,
};

use crate::field::FieldError;
use crate::poly::{monomials_up_to, mpoly_det, MPoly};
use crate::rational::{qi, qz, Q};
use crate::sarith::{valuation, SError};
use crate::torus::FundamentalDomain;
use crate::FieldElement;
use num_traits::{Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MinError {
    #[error("the S-unit rank has not been certified")]
    UnverifiedUnits,
    #[error("no candidate shifts supplied")]
    NoCandidates,
    #[error("candidate shift {0} is not in the ideal")]
    ShiftNotInIdeal(FieldElement),
    #[error("region has {got} archimedean and {got_finite} finite components, expected {want} and {want_finite}")]
    RegionShape { got: usize, got_finite: usize, want: usize, want_finite: usize },
    #[error("enumeration box holds {0} lattice points")]
    SearchTooLarge(u128),
    #[error(transparent)]
    S(#[from] SError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// The norm form `P(y) = N(sum_i y_i w_i)` on the basis `w_i` of `a_0`, with
/// its Taylor coefficient polynomials.
#[derive(Clone, Debug)]
pub struct NormForm {
    pub poly: MPoly,
    /// `(alpha, D_alpha)` for every exponent vector of total degree `0..=n`.
    pub taylor: Vec<(Vec<u32>, MPoly)>,
    taylor_f64: Vec<(Vec<u32>, Vec<(Vec<u32>, f64)>)>,
}

impl NormForm {
    pub fn new(dom: &FundamentalDomain) -> NormForm {
        let k = dom.field();
        let n = dom.degree();
        let mats: Vec<_> = dom.basis.iter().map(|w| k.mult_matrix(w)).collect();
        let m: Vec<Vec<MPoly>> = (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| {
                        let coeffs: Vec<Q> = mats.iter().map(|mm| mm[r][c].clone()).collect();
                        MPoly::linear(&coeffs)
                    })
                    .collect()
            })
            .collect();
        let poly = mpoly_det(&m);
        let mut alphas = vec![vec![0u32; n]];
        alphas.extend(monomials_up_to(n, n as u32));
        let taylor: Vec<(Vec<u32>, MPoly)> = alphas
            .into_iter()
            .map(|a| {
                let d = poly.taylor_coefficient(&a);
                (a, d)
            })
            .filter(|(_, d)| !d.terms.is_empty())
            .collect();
        let taylor_f64 = taylor
            .iter()
            .map(|(a, d)| {
                let terms = d.terms.iter().map(|(e, c)| (e.clone(), crate::rational::to_f64(c))).collect();
                (a.clone(), terms)
            })
            .collect();
        NormForm { poly, taylor, taylor_f64 }
    }

    /// `|P(y)|`.
    pub fn value(&self, y: &[Q]) -> Q {
        self.poly.eval(y).abs()
    }

    /// Certified `sup |P(c + d)|` over `|d_i| <= h_i`: the sum of
    /// `|D_alpha(c)| h^alpha` over all Taylor terms.
    pub fn box_bound(&self, c: &[Q], h: &[Q]) -> Q {
        let mut total = Q::zero();
        for (a, d) in &self.taylor {
            if a.iter().zip(h).any(|(&ai, hi)| ai > 0 && hi.is_zero()) {
                continue;
            }
            let mut t = d.eval(c).abs();
            if t.is_zero() {
                continue;
            }
            for (hi, &ai) in h.iter().zip(a) {
                if ai > 0 {
                    t *= num_traits::pow(hi.clone(), ai as usize);
                }
            }
            total += t;
        }
        total
    }

    /// Floating-point estimate of `box_bound`, used only to rank candidates.
    pub fn box_bound_f64(&self, c: &[f64], h: &[f64]) -> f64 {
        let mut total = 0.0;
        for (a, terms) in &self.taylor_f64 {
            let mut v = 0.0;
            for (e, coef) in terms {
                let mut t = *coef;
                for (ci, &k) in c.iter().zip(e) {
                    t *= ci.powi(k as i32);
                }
                v += t;
            }
            let mut t = v.abs();
            for (hi, &ai) in h.iter().zip(a) {
                t *= hi.powi(ai as i32);
            }
            total += t;
        }
        total
    }

    /// Per-axis share of the Taylor remainder: for each `i`, the sum of
    /// `|D_alpha(c)| h^alpha` over terms with `alpha_i > 0`.
    pub fn axis_terms(&self, c: &[Q], h: &[Q]) -> Vec<Q> {
        let n = c.len();
        let mut out = vec![Q::zero(); n];
        for (a, d) in &self.taylor {
            if a.iter().all(|&x| x == 0) {
                continue;
            }
            let mut t = d.eval(c).abs();
            for (hi, &ai) in h.iter().zip(a) {
                if ai > 0 {
                    t *= num_traits::pow(hi.clone(), ai as usize);
                }
            }
            for i in 0..n {
                if a[i] > 0 {
                    out[i] += &t;
                }
            }
        }
        out
    }
}

/// Upper bound on `|x - gamma|_v` over `x` in `center + P_v^k` (`k = None`
/// meaning the single point `center`).
pub(crate) fn finite_factor(dom: &FundamentalDomain, place: usize, center: &FieldElement, k: Option<u32>, gamma: &FieldElement) -> Q {
    let v = &dom.s.finite[place];
    let d = center - gamma;
    let e = if d.is_zero() {
        match k {
            Some(k) => k as i64,
            None => return Q::zero(),
        }
    } else {
        let val = valuation(dom.field(), &d, v).expect("nonzero");
        match k {
            Some(k) => val.min(k as i64),
            None => val,
        }
    };
    crate::rational::pow(&qz(v.norm.clone()), -e)
}

/// Centre and half-widths of a rational box.
pub(crate) fn centre_radius(arch: &[(Q, Q)]) -> (Vec<Q>, Vec<Q>) {
    let two = qi(2);
    arch.iter().map(|(lo, hi)| ((lo + hi) / &two, (hi - lo) / &two)).unzip()
}
