//! The compact quotient of the S-adic completion by an ideal: canonical
//! representatives, torsion points, unit orbits and the trace character.

use crate::field::{FieldElement, NumberField};
use crate::ideal::FractionalIdeal;
use crate::interval::ComplexBox;
use crate::rational::{frac, ord_p, qi, qz, zpow, Q, Z};
use crate::sarith::{valuation, FinitePlace, SConfig};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::{Arc, Mutex};

/// A rational modulo 1, stored as its representative in `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QmodZ(Q);

impl QmodZ {
    pub fn new(x: &Q) -> Self {
        QmodZ(frac(x))
    }

    pub fn zero() -> Self {
        QmodZ(Q::zero())
    }

    pub fn value(&self) -> &Q {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl Add for &QmodZ {
    type Output = QmodZ;
    fn add(self, o: &QmodZ) -> QmodZ {
        QmodZ::new(&(&self.0 + &o.0))
    }
}

impl Sub for &QmodZ {
    type Output = QmodZ;
    fn sub(self, o: &QmodZ) -> QmodZ {
        QmodZ::new(&(&self.0 - &o.0))
    }
}

impl Neg for &QmodZ {
    type Output = QmodZ;
    fn neg(self) -> QmodZ {
        QmodZ::new(&-&self.0)
    }
}

impl fmt::Display for QmodZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::rational::fmt_q(&self.0))
    }
}

/// A point of the S-adic completion with certified components: interval boxes
/// at the archimedean places and residues modulo `P^k` at the finite ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdelePoint {
    pub arch: Vec<ComplexBox>,
    pub finite: Vec<(FieldElement, u32)>,
    pub exact: Option<FieldElement>,
}

impl AdelePoint {
    /// Diagonal image of `x`, with archimedean boxes of width at most
    /// `precision` and finite components exact (`x` itself, precision 0
    /// meaning "no truncation").
    pub fn from_element(s: &SConfig, x: &FieldElement, precision: &Q) -> Result<AdelePoint, crate::FieldError> {
        let e = s.field.embed(x, precision)?;
        let arch = e.real.iter().map(|iv| ComplexBox { re: iv.clone(), im: crate::interval::Interval::point(Q::zero()) }).chain(e.complex).collect();
        Ok(AdelePoint { arch, finite: s.finite.iter().map(|_| (x.clone(), 0)).collect(), exact: Some(x.clone()) })
    }
}

/// One element of a unit orbit: `unit * xi - rep` lies in the ideal, where
/// `unit = torsion^e_0 * prod units_j^e_{j+1}` for `e = exponents`.
///
/// The unit is kept as exponents because its coefficients grow
/// exponentially along long orbits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitPoint {
    pub rep: FieldElement,
    pub exponents: Vec<i64>,
}

/// Breadth-first enumeration of a unit orbit; see [`FundamentalDomain::orbit_walk`].
pub struct OrbitWalk<'a> {
    dom: &'a FundamentalDomain,
    gens: Vec<FieldElement>,
    seen: HashSet<FieldElement>,
    queue: VecDeque<OrbitPoint>,
    pending: VecDeque<OrbitPoint>,
}

impl Iterator for OrbitWalk<'_> {
    type Item = OrbitPoint;

    fn next(&mut self) -> Option<OrbitPoint> {
        loop {
            if let Some(pt) = self.pending.pop_front() {
                self.queue.push_back(pt.clone());
                return Some(pt);
            }
            let pt = self.queue.pop_front()?;
            let k = self.dom.field();
            for (j, g) in self.gens.iter().enumerate() {
                let (rep, _) = self.dom.reduce(&k.mul(g, &pt.rep));
                if self.seen.insert(rep.clone()) {
                    let mut exponents = pt.exponents.clone();
                    exponents[j] += 1;
                    if j == 0 {
                        exponents[0] %= i64::from(self.dom.s.torsion_order.max(1));
                    }
                    self.pending.push_back(OrbitPoint { rep, exponents });
                }
            }
        }
    }
}

type StepKey = (Vec<i64>, usize);

/// The fundamental domain `F x prod O_v` for an O_S-ideal, with the data
/// needed to reduce elements into it.
#[derive(Clone)]
pub struct FundamentalDomain {
    pub s: SConfig,
    /// Prime-to-S O-lattice representing the O_S-ideal.
    pub ideal: FractionalIdeal,
    pub basis: Vec<FieldElement>,
    /// `N_S(a)`.
    pub norm: Q,
    lattices: Arc<Mutex<HashMap<Vec<i64>, FractionalIdeal>>>,
    steps: Arc<Mutex<HashMap<StepKey, Arc<Vec<FieldElement>>>>>,
}

impl fmt::Debug for FundamentalDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FundamentalDomain").field("ideal", &self.ideal).field("norm", &self.norm).finish()
    }
}

/// Representatives of `L1 / L2` for lattices `L2 <= L1`.
pub fn quotient_reps(l1: &FractionalIdeal, l2: &FractionalIdeal) -> Vec<FieldElement> {
    let b1 = l1.basis();
    let n = b1.len();
    let gens: Vec<Vec<Z>> = l2
        .basis()
        .iter()
        .map(|b| l1.lattice_coords(b).iter().map(|c| c.to_integer()).collect())
        .collect();
    let h = crate::linalg::hnf(n, &gens).expect("sublattice of full rank");
    let bounds: Vec<Z> = (0..n).map(|i| h[i][i].clone()).collect();
    crate::linalg::box_vectors(&bounds)
        .into_iter()
        .map(|c| {
            let t: Vec<Q> = c.into_iter().map(qz).collect();
            l1.combine(&t)
        })
        .collect()
}

impl FundamentalDomain {
    /// Domain for the O_S-ideal generated by the fractional O-ideal `a`.
    pub fn new(s: &SConfig, a: &FractionalIdeal) -> FundamentalDomain {
        let ideal = s.prime_to_s(a);
        let basis = ideal.basis();
        let norm = ideal.norm();
        FundamentalDomain {
            s: s.clone(),
            ideal,
            basis,
            norm,
            lattices: Arc::new(Mutex::new(HashMap::new())),
            steps: Arc::new(Mutex::new(HashMap::new())),
        }
    }

    pub fn field(&self) -> &NumberField {
        &self.s.field
    }

    pub fn degree(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates on the HNF basis of the O-lattice.
    pub fn t_coords(&self, x: &FieldElement) -> Vec<Q> {
        self.ideal.lattice_coords(x)
    }

    pub fn from_t(&self, t: &[Q]) -> FieldElement {
        self.ideal.combine(t)
    }

    /// Membership in the O_S-ideal.
    pub fn in_ideal(&self, g: &FieldElement) -> bool {
        if g.is_zero() {
            return true;
        }
        if self.ideal.contains(g) {
            return true;
        }
        let k = self.field();
        let sum = k.ideal_add(&k.principal(g).expect("nonzero"), &self.ideal);
        self.s.prime_to_s(&sum) == self.ideal
    }

    /// Whether `x` lies in `F x prod O_v`.
    pub fn contains(&self, x: &FieldElement) -> bool {
        let inside = self.t_coords(x).iter().all(|c| !c.is_negative() && c < &Q::one());
        inside && self.s.finite.iter().all(|v| x.is_zero() || valuation(self.field(), x, v).unwrap() >= 0)
    }

    /// The lattice `a_0 prod_v P_v^{exps_v}` over the finite places of S.
    pub fn lattice(&self, exps: &[i64]) -> FractionalIdeal {
        if let Some(l) = self.lattices.lock().unwrap().get(exps) {
            return l.clone();
        }
        let k = self.field();
        let mut l = self.ideal.clone();
        for (v, &e) in self.s.finite.iter().zip(exps) {
            if e != 0 {
                l = k.ideal_mul(&l, &k.ideal_pow(&v.ideal, e));
            }
        }
        self.lattices.lock().unwrap().insert(exps.to_vec(), l.clone());
        l
    }

    /// Representatives of `L / L P_v` for `L = lattice(exps)`.
    pub fn step_reps(&self, exps: &[i64], v: usize) -> Arc<Vec<FieldElement>> {
        let key = (exps.to_vec(), v);
        if let Some(r) = self.steps.lock().unwrap().get(&key) {
            return r.clone();
        }
        let l1 = self.lattice(exps);
        let mut next = exps.to_vec();
        next[v] += 1;
        let l2 = self.lattice(&next);
        let reps = Arc::new(quotient_reps(&l1, &l2));
        self.steps.lock().unwrap().insert(key, reps.clone());
        reps
    }

    /// An element `g` of `a_0` with `v(x - g) >= targets_v` at every finite
    /// place of S with a positive target; `x` must be integral at those places.
    pub fn approximate(&self, x: &FieldElement, targets: &[i64]) -> FieldElement {
        let k = self.field();
        let m = self.s.finite.len();
        let mut exps = vec![0i64; m];
        let mut cur = x.clone();
        let mut g = k.zero();
        for (i, v) in self.s.finite.iter().enumerate() {
            for j in 0..targets[i].max(0) {
                exps[i] = j;
                if !cur.is_zero() && valuation(k, &cur, v).unwrap() > j {
                    continue;
                }
                let reps = self.step_reps(&exps, i);
                let r = reps
                    .iter()
                    .find(|r| {
                        let d = &cur - r;
                        d.is_zero() || valuation(k, &d, v).unwrap() > j
                    })
                    .expect("residue classes cover O")
                    .clone();
                cur = &cur - &r;
                g = &g + &r;
            }
            exps[i] = targets[i].max(0);
        }
        g
    }

    /// An element `g` of the ideal with `v(x - g) >= 0` at every finite place of S.
    pub fn clear_polar(&self, x: &FieldElement) -> FieldElement {
        let k = self.field();
        let mut cur = x.clone();
        let mut total = k.zero();
        if cur.is_zero() {
            return total;
        }
        for (i, v) in self.s.finite.iter().enumerate() {
            loop {
                if cur.is_zero() {
                    return total;
                }
                let val = valuation(k, &cur, v).expect("nonzero");
                if val >= 0 {
                    break;
                }
                let mut exps = vec![0i64; self.s.finite.len()];
                exps[i] = val;
                let reps = self.step_reps(&exps, i);
                let g = reps
                    .iter()
                    .find(|r| {
                        let d = &cur - r;
                        d.is_zero() || valuation(k, &d, v).unwrap() > val
                    })
                    .expect("some digit clears the leading polar term")
                    .clone();
                cur = &cur - &g;
                total = &total + &g;
            }
        }
        total
    }

    /// Canonical representative: `x = rep + shift` with `shift` in the ideal
    /// and `rep` in the fundamental domain.
    pub fn reduce(&self, x: &FieldElement) -> (FieldElement, FieldElement) {
        let g1 = self.clear_polar(x);
        let y = x - &g1;
        let (rep, g2) = self.ideal.reduce(&y);
        (rep, &g1 + &g2)
    }

    /// The `m^n` representatives of `(1/m) a_0 / a_0`, reduced into `F`.
    pub fn torsion_reps(&self, m: u64) -> Vec<FieldElement> {
        let n = self.degree();
        let bounds = vec![Z::from(m); n];
        crate::linalg::box_vectors(&bounds)
            .into_iter()
            .map(|c| {
                let t: Vec<Q> = c.into_iter().map(|v| Q::new(v, Z::from(m))).collect();
                self.from_t(&t)
            })
            .collect()
    }

    /// Full orbit of the class of `xi` under the unit group generated by the
    /// torsion and the configured S-units, in discovery order.
    pub fn orbit_points(&self, xi: &FieldElement) -> Vec<OrbitPoint> {
        self.orbit_walk(xi).collect()
    }

    /// The orbit of `xi` as a lazy breadth-first walk, starting at its
    /// canonical representative.
    pub fn orbit_walk(&self, xi: &FieldElement) -> OrbitWalk<'_> {
        let (rep, _) = self.reduce(xi);
        let start = OrbitPoint { rep, exponents: vec![0; 1 + self.s.units.len()] };
        let mut gens: Vec<FieldElement> = vec![self.s.torsion.clone()];
        gens.extend(self.s.units.iter().cloned());
        OrbitWalk {
            dom: self,
            gens,
            seen: HashSet::from([start.rep.clone()]),
            queue: VecDeque::new(),
            pending: VecDeque::from([start]),
        }
    }

    /// The unit of an orbit point.
    pub fn orbit_unit(&self, pt: &OrbitPoint) -> FieldElement {
        let k = self.field();
        let gens = std::iter::once(&self.s.torsion).chain(&self.s.units);
        gens.zip(&pt.exponents).fold(k.one(), |acc, (g, &e)| {
            if e == 0 {
                acc
            } else {
                k.mul(&acc, &k.pow(g, e).expect("units are invertible"))
            }
        })
    }

    /// Sorted orbit representatives.
    pub fn orbit(&self, xi: &FieldElement) -> Vec<FieldElement> {
        let mut v: Vec<FieldElement> = self.orbit_points(xi).into_iter().map(|p| p.rep).collect();
        v.sort();
        v
    }

    /// The trace-dual of the O_S-ideal, as its prime-to-S O-lattice.
    pub fn s_trace_dual(&self) -> FractionalIdeal {
        s_trace_dual(&self.s, &self.ideal)
    }
}

/// `a^perp = a^-1 D^-1`, taken prime to S.
pub fn s_trace_dual(s: &SConfig, a: &FractionalIdeal) -> FractionalIdeal {
    let k = &s.field;
    let a0 = s.prime_to_s(a);
    s.prime_to_s(&k.ideal_mul(&k.ideal_invert(&a0), &k.inverse_different()))
}

/// The `p`-polar part of a rational: the unique `c / p^k` in `[0, 1)` with
/// `r - c/p^k` a `p`-adic integer.
pub fn polar_part(r: &Q, p: &Z) -> Q {
    let d = r.denom();
    let k = ord_p(d, p);
    if k == 0 {
        return Q::zero();
    }
    let pk = zpow(p, k);
    let rest = d / &pk;
    let inv = rest.extended_gcd(&pk).x.mod_floor(&pk);
    let c = (r.numer() * inv).mod_floor(&pk);
    Q::new(c, pk)
}

/// Element `e` of O with `v(1 - e) >= prec` at `places[idx]` and
/// `v(e) >= prec` at every other place in `places` (all above one prime).
pub fn local_idempotent(k: &NumberField, places: &[FinitePlace], idx: usize, prec: u32) -> FieldElement {
    if places.len() == 1 {
        return k.one();
    }
    let v = &places[idx];
    let mut others = k.unit_ideal();
    for (i, w) in places.iter().enumerate() {
        if i != idx {
            others = k.ideal_mul(&others, &w.ideal);
        }
    }
    let b0 = others
        .basis()
        .into_iter()
        .find(|b| valuation(k, b, v).unwrap() == 0)
        .expect("coprime ideals");
    let norm = v.norm.to_i64().expect("small residue field");
    let mut x = k.pow(&b0, norm - 1).unwrap();
    let modulus = zpow(&v.p, prec.max(1));
    let reduce = |y: &FieldElement| FieldElement::new(y.coords.iter().map(|c| qz(c.to_integer().mod_floor(&modulus))).collect());
    x = reduce(&x);
    let mut have = 1u32;
    while have < prec {
        let x2 = k.mul(&x, &x);
        let x3 = k.mul(&x2, &x);
        x = reduce(&(&x2.scale(&qi(3)) - &x3.scale(&qi(2))));
        have *= 2;
    }
    x
}

/// Phase in Q/Z of the trace character `phi_alpha(xi)`: the global trace of
/// `alpha xi` minus its local polar parts at the finite places of S.
pub fn char_pair(s: &SConfig, alpha: &FieldElement, xi: &FieldElement) -> QmodZ {
    let k = &s.field;
    let y = k.mul(alpha, xi);
    let tr = k.trace(&y);
    let mut phase = tr.clone();
    if y.is_zero() {
        return QmodZ::zero();
    }
    let mut primes: Vec<Z> = s.finite.iter().map(|v| v.p.clone()).collect();
    primes.dedup();
    for p in primes {
        if s.contains_all_above(&p) {
            phase -= polar_part(&tr, &p);
            continue;
        }
        let all = crate::sarith::places_above(k, &p).expect("place already constructed");
        let prec = all
            .iter()
            .map(|w| -valuation(k, &y, w).unwrap())
            .max()
            .unwrap_or(0)
            .max(0) as u32
            + 1;
        for v in s.finite.iter().filter(|v| v.p == p) {
            let idx = all.iter().position(|w| w == v).expect("place above p");
            let e = local_idempotent(k, &all, idx, prec);
            phase -= polar_part(&k.trace(&k.mul(&e, &y)), &p);
        }
    }
    QmodZ::new(&phase)
}
