//! Exact rational helpers shared by every layer.
//!
//! All values are `BigRational` in lowest terms with a positive denominator,
//! which is the canonical form `num-rational` maintains.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Z = BigInt;
pub type Q = BigRational;

pub fn int(n: i64) -> Z {
    Z::from(n)
}

pub fn q(n: i64, d: i64) -> Q {
    Q::new(Z::from(n), Z::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(Z::from(n))
}

pub fn qz(n: Z) -> Q {
    Q::from_integer(n)
}

pub fn floor(x: &Q) -> Z {
    x.numer().div_floor(x.denom())
}

pub fn ceil(x: &Q) -> Z {
    -((-x.numer()).div_floor(x.denom()))
}

/// Fractional part in `[0, 1)`.
pub fn frac(x: &Q) -> Q {
    x - qz(floor(x))
}

pub fn is_integer(x: &Q) -> bool {
    x.denom().is_one()
}

/// `base^e` for any integer exponent; `base` must be nonzero when `e < 0`.
pub fn pow(base: &Q, e: i64) -> Q {
    let r = num_traits::pow(base.clone(), e.unsigned_abs() as usize);
    if e < 0 {
        r.recip()
    } else {
        r
    }
}

pub fn zpow(base: &Z, e: u32) -> Z {
    num_traits::pow(base.clone(), e as usize)
}

/// Multiplicity of the prime `p` in the nonzero integer `n`.
pub fn ord_p(n: &Z, p: &Z) -> u32 {
    debug_assert!(!n.is_zero());
    let mut n = n.abs();
    let mut k = 0;
    loop {
        let (d, r) = n.div_rem(p);
        if !r.is_zero() {
            return k;
        }
        n = d;
        k += 1;
    }
}

/// Removes every factor of `p` from a nonzero rational.
pub fn strip_prime(x: &Q, p: &Z) -> Q {
    let mut n = x.numer().clone();
    let mut d = x.denom().clone();
    while (&n % p).is_zero() {
        n /= p;
    }
    while (&d % p).is_zero() {
        d /= p;
    }
    Q::new(n, d)
}

/// Rational value of `x` rounded to the dyadic grid `2^-bits`, toward −∞.
pub fn dyadic_floor(x: &Q, bits: u32) -> Q {
    let scale = Z::one() << bits;
    Q::new(floor(&(x * qz(scale.clone()))), scale)
}

/// Rational value of `x` rounded to the dyadic grid `2^-bits`, toward +∞.
pub fn dyadic_ceil(x: &Q, bits: u32) -> Q {
    let scale = Z::one() << bits;
    Q::new(ceil(&(x * qz(scale.clone()))), scale)
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // huge numerator/denominator: scale through bit lengths
        let nb = x.numer().bits() as i64;
        let db = x.denom().bits() as i64;
        let shift = nb.max(db) - 60;
        let n = (x.numer() >> shift.max(0) as usize).to_f64().unwrap_or(0.0);
        let d = (x.denom() >> shift.max(0) as usize).to_f64().unwrap_or(1.0);
        n / d
    })
}

/// Exact rational from a finite double.
pub fn from_f64(x: f64) -> Q {
    Q::from_float(x).expect("finite double")
}

/// Integer square root (floor).
pub fn isqrt(n: &Z) -> Z {
    assert!(!n.is_negative(), "isqrt of negative");
    n.sqrt()
}

/// A rational `r >= sqrt(x)` with `r^2 - x` small (relative error about `2^-bits`).
pub fn sqrt_upper(x: &Q, bits: u32) -> Q {
    root_upper(x, 2, bits)
}

/// A rational `r <= sqrt(x)`.
pub fn sqrt_lower(x: &Q, bits: u32) -> Q {
    root_lower(x, 2, bits)
}

/// A rational `r >= x^(1/k)` for `x >= 0`.
pub fn root_upper(x: &Q, k: u32, bits: u32) -> Q {
    assert!(!x.is_negative() && k >= 1);
    if x.is_zero() || k == 1 {
        return x.clone();
    }
    let mut r = dyadic_ceil(&from_f64(to_f64(x).powf(1.0 / k as f64) * (1.0 + 1e-12)), bits);
    let step = Q::new(Z::one(), Z::one() << bits);
    if r.is_zero() {
        r = step.clone();
    }
    let mut grow = step;
    while pow(&r, k as i64) < *x {
        r += &grow;
        grow = &grow * qi(2);
    }
    r
}

/// A rational `r <= x^(1/k)` for `x >= 0`.
pub fn root_lower(x: &Q, k: u32, bits: u32) -> Q {
    assert!(!x.is_negative() && k >= 1);
    if x.is_zero() || k == 1 {
        return x.clone();
    }
    let mut r = dyadic_floor(&from_f64(to_f64(x).powf(1.0 / k as f64) * (1.0 - 1e-12)), bits);
    let mut shrink = Q::new(Z::one(), Z::one() << bits);
    while r.is_positive() && pow(&r, k as i64) > *x {
        r -= &shrink;
        shrink = &shrink * qi(2);
    }
    if r.is_negative() {
        Q::zero()
    } else {
        r
    }
}

/// Canonical text form `"p/q"`.
pub fn fmt_q(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parses `"p/q"`, `"p"` or `"-p/q"`; the result is reduced to lowest terms.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: Z = n.trim().parse().ok()?;
            let d: Z = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Q::new(n, d))
            }
        }
        None => s.parse::<Z>().ok().map(Q::from_integer),
    }
}

pub fn lcm_denoms<'a>(xs: impl IntoIterator<Item = &'a Q>) -> Z {
    xs.into_iter().fold(Z::one(), |acc, x| acc.lcm(x.denom()))
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Trial-division factorization of a nonzero integer's absolute value.
pub fn factor(n: &Z) -> Vec<(Z, u32)> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut d = Z::from(2);
    while &d * &d <= n {
        let mut k = 0;
        while (&n % &d).is_zero() {
            n /= &d;
            k += 1;
        }
        if k > 0 {
            out.push((d.clone(), k));
        }
        d += 1;
    }
    if n > Z::one() {
        out.push((n, 1));
    }
    out
}

/// Serde adapters writing rationals as `"p/q"` strings and integers as
/// decimal strings.
pub mod serde_q {
    use super::{fmt_q, parse_q, Q};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    fn de_one<'de, D: Deserializer<'de>>(s: &str) -> Result<Q, D::Error> {
        parse_q(s).ok_or_else(|| serde::de::Error::custom(format!("bad rational {s:?}")))
    }

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        fmt_q(x).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let v = String::deserialize(d)?;
        de_one::<D>(&v)
    }

    pub mod vec {
        use super::*;

        pub fn serialize<S: Serializer>(x: &[Q], s: S) -> Result<S::Ok, S::Error> {
            x.iter().map(fmt_q).collect::<Vec<_>>().serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Q>, D::Error> {
            let v = Vec::<String>::deserialize(d)?;
            v.iter().map(|s| de_one::<D>(s)).collect()
        }
    }

    pub mod pairs {
        use super::*;

        pub fn serialize<S: Serializer>(x: &[(Q, Q)], s: S) -> Result<S::Ok, S::Error> {
            x.iter().map(|(a, b)| [fmt_q(a), fmt_q(b)]).collect::<Vec<_>>().serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<(Q, Q)>, D::Error> {
            let v = Vec::<[String; 2]>::deserialize(d)?;
            v.iter().map(|[a, b]| Ok((de_one::<D>(a)?, de_one::<D>(b)?))).collect()
        }
    }

    pub mod opt {
        use super::*;

        pub fn serialize<S: Serializer>(x: &Option<Q>, s: S) -> Result<S::Ok, S::Error> {
            x.as_ref().map(fmt_q).serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Q>, D::Error> {
            match Option::<String>::deserialize(d)? {
                Some(v) => Ok(Some(de_one::<D>(&v)?)),
                None => Ok(None),
            }
        }
    }

    pub mod int {
        use super::super::Z;
        use serde::{Deserialize, Deserializer, Serialize, Serializer};

        pub fn serialize<S: Serializer>(x: &Z, s: S) -> Result<S::Ok, S::Error> {
            x.to_string().serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Z, D::Error> {
            String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floor_and_ceil_handle_negatives() {
        assert_eq!(floor(&q(-1, 5)), int(-1));
        assert_eq!(ceil(&q(-1, 5)), int(0));
        assert_eq!(frac(&q(-1, 5)), q(4, 5));
        assert_eq!(floor(&qi(3)), int(3));
    }

    #[test]
    fn roots_bracket() {
        let two = qi(2);
        let up = sqrt_upper(&two, 40);
        let lo = sqrt_lower(&two, 40);
        assert!(&up * &up >= two && &lo * &lo <= two);
        assert!(&up - &lo < q(1, 1 << 30));
        let c = root_upper(&q(1, 5), 3, 30);
        assert!(pow(&c, 3) >= q(1, 5));
    }

    #[test]
    fn text_round_trip() {
        assert_eq!(parse_q("6/4"), Some(q(3, 2)));
        assert_eq!(parse_q("-7"), Some(qi(-7)));
        assert_eq!(parse_q("1/0"), None);
        assert_eq!(fmt_q(&q(-2, 4)), "-1/2");
        assert_eq!(fmt_q(&qi(3)), "3/1");
    }

    #[test]
    fn factor_small() {
        assert_eq!(factor(&int(360)), vec![(int(2), 3), (int(3), 2), (int(5), 1)]);
        assert_eq!(ord_p(&int(-48), &int(2)), 4);
        assert_eq!(strip_prime(&q(12, 7), &int(2)), q(3, 7));
    }
}
