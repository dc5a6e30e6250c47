use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use proptest::prelude::*;
use sminima::minima::m_exact_in;
use sminima::rational::{q, Q, Z};
use sminima::{FieldElement, FractionalIdeal, FundamentalDomain, NumberField, SConfig};

fn domain(poly: &[i64], primes: &[i64], ideal: Option<&[&[i64]]>) -> FundamentalDomain {
    let k = NumberField::new(poly).unwrap();
    let s = SConfig::with_primes(&k, primes).unwrap().with_builtin_units().unwrap();
    let a = match ideal {
        None => k.unit_ideal(),
        Some(gens) => k.ideal_from_gens(&gens.iter().map(|g| k.elem_i(g)).collect::<Vec<_>>()).unwrap(),
    };
    FundamentalDomain::new(&s, &a)
}

/// `m(r)` for `a = Z[1/S]` over Q from residues alone: every `eta = r - gamma`
/// has S-norm `n / d0` with `d0` the prime-to-S denominator of `r` and
/// `n > 0` prime to S, and `eta` ranges over `+-prod p^e * c / d0` modulo
/// `Z[1/S]`.
fn rational_oracle(r: &Q, primes: &[i64]) -> Q {
    let mut d0 = r.denom().clone();
    let mut s_part = Z::one();
    for &p in primes {
        let p = Z::from(p);
        while d0.is_multiple_of(&p) {
            d0 /= &p;
            s_part *= &p;
        }
    }
    if d0.is_one() {
        return Q::zero();
    }
    let d = d0.to_i64().unwrap();
    let inv = s_part.mod_floor(&d0).extended_gcd(&d0).x.mod_floor(&d0).to_i64().unwrap();
    let c = (r.numer().mod_floor(&d0).to_i64().unwrap() * inv).rem_euclid(d);
    // residues reachable by multiplying with -1 and the primes of S
    let mut reach = vec![false; d as usize];
    let mut stack = vec![c];
    reach[c as usize] = true;
    while let Some(x) = stack.pop() {
        let mut gens = vec![d - 1];
        gens.extend(primes.iter().map(|p| p.rem_euclid(d)));
        for g in gens {
            let y = (x * g).rem_euclid(d);
            if !reach[y as usize] {
                reach[y as usize] = true;
                stack.push(y);
            }
        }
    }
    let coprime = |n: i64| primes.iter().all(|p| n % p != 0);
    let mut best: Option<i64> = None;
    for (rho, ok) in reach.iter().enumerate() {
        if !ok {
            continue;
        }
        let mut n = rho as i64;
        if n == 0 {
            n = d;
        }
        while !coprime(n) {
            n += d;
        }
        best = Some(best.map_or(n, |b| b.min(n)));
    }
    Q::new(Z::from(best.unwrap()), d0)
}

#[test]
fn rational_oracle_matches_known_values() {
    assert_eq!(rational_oracle(&q(1, 2), &[]), q(1, 2));
    assert_eq!(rational_oracle(&q(1, 3), &[2]), q(1, 3));
    assert_eq!(rational_oracle(&q(1, 5), &[2, 3]), q(1, 5));
    assert_eq!(rational_oracle(&q(2, 7), &[]), q(2, 7));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn rational_minimum_matches_residue_oracle(num in -200i64..200, den in 1i64..120, which in 0usize..3) {
        let primes: &[i64] = [&[][..], &[2][..], &[2, 3][..]][which];
        let dom = domain(&[-1, 1], primes, None);
        let r = q(num, den);
        let x = dom.field().rational(r.clone());
        let m = m_exact_in(&dom, &x).unwrap();
        prop_assert_eq!(m.value.clone(), rational_oracle(&r, primes));
        prop_assert_eq!(dom.s.s_norm(&(&x - &m.attaining_shift)) / &dom.norm, m.value);
    }

    #[test]
    fn unit_invariance(which in 0usize..4, c0 in -12i64..12, c1 in -12i64..12, den in 2i64..7, e in proptest::collection::vec(-2i64..=2, 3)) {
        let (poly, primes): (&[i64], &[i64]) = [
            (&[1, 0, 1][..], &[][..]),
            (&[-2, 0, 1][..], &[][..]),
            (&[5, 0, 1][..], &[][..]),
            (&[-2, 0, 1][..], &[7][..]),
        ][which];
        let dom = domain(poly, primes, None);
        let k = dom.field().clone();
        let xi = k.elem(vec![q(c0, den), q(c1, den)]).unwrap();
        let mut u = k.pow(&dom.s.torsion, e[0]).unwrap();
        for (g, &ei) in dom.s.units.iter().zip(&e[1..]) {
            u = k.mul(&u, &k.pow(g, ei).unwrap());
        }
        let a = m_exact_in(&dom, &xi).unwrap().value;
        let b = m_exact_in(&dom, &k.mul(&u, &xi)).unwrap().value;
        prop_assert_eq!(a, b);
    }

    #[test]
    fn class_invariance(c0 in -4i64..4, c1 in -4i64..4, g0 in -3i64..4, g1 in -3i64..4, den in 2i64..6) {
        prop_assume!(g0 != 0 || g1 != 0);
        let dom_b = domain(&[5, 0, 1], &[], Some(&[&[2, 0], &[1, 1]]));
        let k = dom_b.field().clone();
        let gamma = k.elem_i(&[g0, g1]);
        let a = k.ideal_mul(&k.principal(&gamma).unwrap(), &dom_b.ideal);
        let dom_a = FundamentalDomain::new(&dom_b.s, &a);
        let xi = k.elem(vec![q(c0, den), q(c1, den)]).unwrap();
        let ma = m_exact_in(&dom_a, &xi).unwrap().value;
        let mb = m_exact_in(&dom_b, &k.div(&xi, &gamma).unwrap()).unwrap().value;
        prop_assert_eq!(ma, mb);
    }

    #[test]
    fn values_are_discrete(which in 0usize..3, c0 in -20i64..20, c1 in -20i64..20, den in 1i64..10) {
        let (poly, primes): (&[i64], &[i64]) = [(&[1, 0, 1][..], &[5][..]), (&[-2, 0, 1][..], &[][..]), (&[-1, 1][..], &[2, 3][..])][which];
        let dom = domain(poly, primes, None);
        let k = dom.field().clone();
        let coords: Vec<Q> = [c0, c1].iter().take(k.degree()).map(|&c| q(c, den)).collect();
        let xi = FieldElement::new(coords);
        let d = k.rational(Q::from_integer(xi.denominator()));
        let m = m_exact_in(&dom, &xi).unwrap().value;
        let scaled = m * &dom.norm * dom.s.s_norm(&d);
        prop_assert!(scaled.is_integer());
    }
}

fn brute_force(dom: &FundamentalDomain, xi: &FieldElement, r: i64) -> Q {
    let k = dom.field();
    let basis = &dom.basis;
    let mut best: Option<Q> = None;
    for x in -r..=r {
        for y in -r..=r {
            let g = &basis[0].scale(&Q::from_integer(x.into())) + &basis[1].scale(&Q::from_integer(y.into()));
            let v = k.norm(&(xi - &g)).abs() / &dom.norm;
            if best.as_ref().map_or(true, |b| &v < b) {
                best = Some(v);
            }
        }
    }
    best.unwrap()
}

#[test]
fn imaginary_quadratic_minima_match_brute_force() {
    for (poly, ideal) in [(&[1i64, 0, 1][..], None), (&[5, 0, 1][..], None), (&[5, 0, 1][..], Some(&[&[2i64, 0][..], &[1, 1][..]][..]))] {
        let dom = domain(poly, &[], ideal);
        let k = dom.field().clone();
        for den in 2..6i64 {
            for a in 0..den {
                for b in 0..den {
                    let xi = k.elem(vec![q(a, den), q(b, den)]).unwrap();
                    assert_eq!(m_exact_in(&dom, &xi).unwrap().value, brute_force(&dom, &xi, 6), "{xi}");
                }
            }
        }
    }
}

#[test]
fn nonprincipal_class_of_minus_five_has_minimum_nine_tenths() {
    let dom = domain(&[5, 0, 1], &[], Some(&[&[2, 0], &[1, 1]]));
    let k = dom.field().clone();
    let deep_hole = k.elem(vec![q(1, 1), q(2, 5)]).unwrap();
    assert_eq!(m_exact_in(&dom, &deep_hole).unwrap().value, q(9, 10));
    assert_eq!(brute_force(&dom, &deep_hole, 6), q(9, 10));
}

#[test]
fn ideal_of_given_generators_is_canonical() {
    let k = NumberField::new(&[5, 0, 1]).unwrap();
    let a: FractionalIdeal = k.ideal_from_gens(&[k.int(2), k.elem_i(&[1, 1])]).unwrap();
    let b = k.ideal_from_gens(&[k.elem_i(&[1, -1]), k.int(2)]).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.norm(), q(2, 1));
}
