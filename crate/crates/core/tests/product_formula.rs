use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use sminima::rational::{q, Q, Z};
use sminima::sarith::{finite_abs, places_above};
use sminima::{FieldElement, NumberField, SConfig};

const FIELDS: [&[i64]; 4] = [&[-1, 1], &[1, 0, 1], &[-2, 0, 1], &[5, 0, 1]];
const PRIME_SETS: [&[i64]; 4] = [&[], &[2], &[3, 5], &[2, 3]];

fn trial_primes(mut n: u64, out: &mut Vec<u64>) {
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
}

/// Rational primes below which `x` can have a nonzero valuation: those
/// dividing the common denominator `d` or the norm of the integral `d x`.
fn support(k: &NumberField, x: &FieldElement) -> Vec<Z> {
    let d = x.denominator();
    let y = x.scale(&Q::from_integer(d.clone()));
    let n = k.norm(&y).abs().to_integer();
    let mut ps = Vec::new();
    trial_primes(u64::try_from(d).unwrap(), &mut ps);
    trial_primes(u64::try_from(n).unwrap(), &mut ps);
    ps.sort_unstable();
    ps.dedup();
    ps.into_iter().map(Z::from).collect()
}

fn element(k: &NumberField, coords: &[i64], den: i64) -> FieldElement {
    k.elem(coords.iter().take(k.degree()).map(|&c| q(c, den)).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    /// The finite places alone give `1 / |N(x)|`, and the certified
    /// archimedean enclosures multiply to an interval containing `|N(x)|`.
    #[test]
    fn product_over_all_places_is_one(which in 0usize..4, c in proptest::collection::vec(-30i64..30, 2), den in 1i64..12) {
        let k = NumberField::new(FIELDS[which]).unwrap();
        let x = element(&k, &c, den);
        prop_assume!(!x.is_zero());
        let mut finite = Q::one();
        for p in support(&k, &x) {
            for v in places_above(&k, &p).unwrap() {
                finite *= finite_abs(&k, &x, &v);
            }
        }
        let inf = SConfig::with_primes(&k, &[]).unwrap();
        let arch = inf.abs_values(&x, 96);
        let lo = arch.iter().fold(Q::one(), |acc, iv| acc * &iv.lo);
        let hi = arch.iter().fold(Q::one(), |acc, iv| acc * &iv.hi);
        let target = finite.recip();
        prop_assert!(lo <= target && target <= hi, "{} not in [{}, {}]", target, lo, hi);
        prop_assert_eq!(k.norm(&x).abs() * finite, Q::one());
    }

    /// `N_S(x)` is the reciprocal of the product over finite places outside S,
    /// and it is multiplicative.
    #[test]
    fn s_norm_is_multiplicative_and_dual(
        which in 0usize..4,
        set in 0usize..4,
        a in proptest::collection::vec(-30i64..30, 2),
        b in proptest::collection::vec(-30i64..30, 2),
        da in 1i64..12,
        db in 1i64..12,
    ) {
        let k = NumberField::new(FIELDS[which]).unwrap();
        let s = SConfig::with_primes(&k, PRIME_SETS[set]).unwrap();
        let x = element(&k, &a, da);
        let y = element(&k, &b, db);
        prop_assume!(!x.is_zero() && !y.is_zero());
        let xy = k.mul(&x, &y);
        prop_assert_eq!(s.s_norm(&xy), s.s_norm(&x) * s.s_norm(&y));
        let mut outside = Q::one();
        for p in support(&k, &x) {
            for v in places_above(&k, &p).unwrap() {
                if !s.finite.iter().any(|w| w.ideal == v.ideal) {
                    outside *= finite_abs(&k, &x, &v);
                }
            }
        }
        prop_assert_eq!(s.s_norm(&x) * outside, Q::one());
        prop_assert!(s.s_norm(&x) > Q::zero());
    }
}
