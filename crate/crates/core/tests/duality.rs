use num_traits::{One, Signed};
use proptest::prelude::*;
use sminima::rational::Q;
use sminima::torus::{char_pair, s_trace_dual};
use sminima::{NumberField, SConfig};

fn random_ideal(k: &NumberField, g: &[i64]) -> sminima::FractionalIdeal {
    let a = k.elem_i(&g[0..2]);
    let b = k.elem_i(&g[2..4]);
    let den = k.rational(Q::from_integer(g[4].into()));
    let gens = [k.div(&a, &den).unwrap(), b];
    k.ideal_from_gens(&gens).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    /// `a a^perp = D^-1`, checked against the trace pairing directly: every
    /// pair of basis vectors has integral trace and the covolumes multiply to
    /// `1 / |disc|`, so the computed dual is the whole dual lattice.
    #[test]
    fn dual_times_ideal_is_inverse_different(
        which in 0usize..2,
        g in (-9i64..9, -9i64..9, -9i64..9, -9i64..9, 1i64..5),
    ) {
        let k = NumberField::new([&[1i64, 0, 1][..], &[-2, 0, 1][..]][which]).unwrap();
        let g = [g.0, g.1, g.2, g.3, g.4];
        prop_assume!(g[0] != 0 || g[1] != 0);
        let a = random_ideal(&k, &g);
        let s = SConfig::with_primes(&k, &[]).unwrap();
        let dual = s_trace_dual(&s, &a);
        prop_assert_eq!(k.ideal_mul(&a, &dual), k.inverse_different());
        for x in dual.basis() {
            for y in a.basis() {
                prop_assert!(k.trace(&k.mul(&x, &y)).is_integer());
            }
        }
        prop_assert_eq!(dual.norm() * a.norm() * Q::from_integer(k.discriminant().abs()), Q::one());
        for x in dual.basis() {
            for y in a.basis() {
                prop_assert!(char_pair(&s, &x, &y).is_zero());
            }
        }
        // a third of a dual basis vector leaves the dual, so some pairing moves
        let third = k.rational(Q::new(1.into(), 3.into()));
        for x in dual.basis() {
            let x3 = k.mul(&x, &third);
            prop_assert!(a.basis().iter().any(|y| !char_pair(&s, &x3, y).is_zero()));
        }
    }

    /// With finite places in S the pairing subtracts local polar parts, so it
    /// still vanishes on the S-dual, including after dividing by powers of a
    /// prime of S, where traces are no longer integral.
    #[test]
    fn character_vanishes_on_s_dual(
        which in 0usize..2,
        set in 0usize..3,
        g in (-9i64..9, -9i64..9, -9i64..9, -9i64..9, 1i64..5),
        e in 0i64..3,
    ) {
        let k = NumberField::new([&[1i64, 0, 1][..], &[-2, 0, 1][..]][which]).unwrap();
        let primes = [&[2i64][..], &[5][..], &[2, 3][..]][set];
        let g = [g.0, g.1, g.2, g.3, g.4];
        prop_assume!(g[0] != 0 || g[1] != 0);
        let a = random_ideal(&k, &g);
        let s = SConfig::with_primes(&k, primes).unwrap();
        let dual = s_trace_dual(&s, &a);
        let a0 = s.prime_to_s(&a);
        let scale = k.rational(Q::from_integer(sminima::rational::int(primes[0]).pow(e as u32)).recip());
        for x in dual.basis() {
            for y in a0.basis() {
                prop_assert!(char_pair(&s, &x, &y).is_zero());
                prop_assert!(char_pair(&s, &k.mul(&x, &scale), &y).is_zero());
                prop_assert!(char_pair(&s, &x, &k.mul(&y, &scale)).is_zero());
            }
        }
    }
}
