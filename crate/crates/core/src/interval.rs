//! Closed rational intervals and rectangular complex boxes.
//!
//! Endpoints are exact rationals, so every operation is inclusion-isotone
//! without any rounding-mode tricks. Outward rounding to a dyadic grid is
//! applied only where endpoint growth would otherwise get out of hand.

use crate::rational::{dyadic_ceil, dyadic_floor, qi, qz, sqrt_upper, Q, Z};
use num_traits::{One, Signed, Zero};
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Q,
    pub hi: Q,
}

impl Interval {
    pub fn new(lo: Q, hi: Q) -> Self {
        debug_assert!(lo <= hi, "empty interval");
        Interval { lo, hi }
    }

    pub fn point(x: Q) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn centered(c: &Q, r: &Q) -> Self {
        Interval { lo: c - r, hi: c + r }
    }

    pub fn width(&self) -> Q {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Q {
        (&self.lo + &self.hi) / qi(2)
    }

    pub fn contains(&self, x: &Q) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// Largest absolute value over the interval.
    pub fn mag(&self) -> Q {
        let a = self.lo.abs();
        let b = self.hi.abs();
        if a > b {
            a
        } else {
            b
        }
    }

    /// Smallest absolute value over the interval.
    pub fn mig(&self) -> Q {
        if self.contains_zero() {
            Q::zero()
        } else if self.lo.is_positive() {
            self.lo.clone()
        } else {
            -self.hi.clone()
        }
    }

    pub fn abs(&self) -> Interval {
        Interval::new(self.mig(), self.mag())
    }

    pub fn square(&self) -> Interval {
        let m = self.mig();
        let big = self.mag();
        Interval::new(&m * &m, &big * &big)
    }

    pub fn scale(&self, c: &Q) -> Interval {
        let a = &self.lo * c;
        let b = &self.hi * c;
        if a <= b {
            Interval::new(a, b)
        } else {
            Interval::new(b, a)
        }
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = if self.lo > other.lo { &self.lo } else { &other.lo };
        let hi = if self.hi < other.hi { &self.hi } else { &other.hi };
        (lo <= hi).then(|| Interval::new(lo.clone(), hi.clone()))
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        let lo = if self.lo < other.lo { &self.lo } else { &other.lo };
        let hi = if self.hi > other.hi { &self.hi } else { &other.hi };
        Interval::new(lo.clone(), hi.clone())
    }

    /// Reciprocal; the interval must not contain zero.
    pub fn recip(&self) -> Interval {
        assert!(!self.contains_zero(), "reciprocal of an interval containing 0");
        Interval::new(self.hi.recip(), self.lo.recip())
    }

    /// Widens the endpoints outward onto the grid `2^-bits`.
    pub fn round_out(&self, bits: u32) -> Interval {
        Interval::new(dyadic_floor(&self.lo, bits), dyadic_ceil(&self.hi, bits))
    }

    /// Certified natural logarithm; requires `lo > 0`.
    pub fn ln(&self, bits: u32) -> Interval {
        let a = ln_enclosure(&self.lo, bits);
        let b = ln_enclosure(&self.hi, bits);
        Interval::new(a.lo, b.hi)
    }
}

impl Add for &Interval {
    type Output = Interval;
    fn add(self, o: &Interval) -> Interval {
        Interval::new(&self.lo + &o.lo, &self.hi + &o.hi)
    }
}

impl Sub for &Interval {
    type Output = Interval;
    fn sub(self, o: &Interval) -> Interval {
        Interval::new(&self.lo - &o.hi, &self.hi - &o.lo)
    }
}

impl Neg for &Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval::new(-&self.hi, -&self.lo)
    }
}

impl Mul for &Interval {
    type Output = Interval;
    fn mul(self, o: &Interval) -> Interval {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let mut lo = c[0].clone();
        let mut hi = c[0].clone();
        for x in &c[1..] {
            if *x < lo {
                lo = x.clone();
            }
            if *x > hi {
                hi = x.clone();
            }
        }
        Interval::new(lo, hi)
    }
}

/// Rectangular enclosure of a complex number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexBox {
    pub re: Interval,
    pub im: Interval,
}

impl ComplexBox {
    pub fn point(re: Q, im: Q) -> Self {
        ComplexBox { re: Interval::point(re), im: Interval::point(im) }
    }

    pub fn real(x: Q) -> Self {
        ComplexBox::point(x, Q::zero())
    }

    pub fn width(&self) -> Q {
        let a = self.re.width();
        let b = self.im.width();
        if a > b {
            a
        } else {
            b
        }
    }

    pub fn add(&self, o: &ComplexBox) -> ComplexBox {
        ComplexBox { re: &self.re + &o.re, im: &self.im + &o.im }
    }

    pub fn mul(&self, o: &ComplexBox) -> ComplexBox {
        ComplexBox {
            re: &(&self.re * &o.re) - &(&self.im * &o.im),
            im: &(&self.re * &o.im) + &(&self.im * &o.re),
        }
    }

    pub fn scale(&self, c: &Q) -> ComplexBox {
        ComplexBox { re: self.re.scale(c), im: self.im.scale(c) }
    }

    /// Enclosure of the squared modulus.
    pub fn abs_sq(&self) -> Interval {
        &self.re.square() + &self.im.square()
    }

    /// Upper bound on the modulus.
    pub fn abs_upper(&self) -> Q {
        let s = self.abs_sq();
        sqrt_upper(&s.hi, 64)
    }

    pub fn intersect(&self, o: &ComplexBox) -> Option<ComplexBox> {
        Some(ComplexBox { re: self.re.intersect(&o.re)?, im: self.im.intersect(&o.im)? })
    }

    pub fn contains_box(&self, o: &ComplexBox) -> bool {
        self.re.contains_interval(&o.re) && self.im.contains_interval(&o.im)
    }
}

/// `2 * atanh(y)` enclosure for `|y| <= 1/3`, accurate to about `2^-bits`.
fn two_atanh(y: &Q, bits: u32) -> Interval {
    let y2 = y * y;
    let tol = Q::new(Z::one(), Z::one() << (bits + 2));
    let mut term = y.clone();
    let mut sum = Q::zero();
    let mut j: i64 = 0;
    loop {
        sum += &term / qi(2 * j + 1);
        term = &term * &y2;
        j += 1;
        // tail bound: |y|^(2j+1) / ((2j+1)(1-y^2))
        let tail = term.abs() / (qi(2 * j + 1) * (Q::one() - &y2));
        if tail < tol {
            let s = &sum * qi(2);
            let t = &tail * qi(2);
            return Interval::new(&s - &t, &s + &t).round_out(bits + 2);
        }
    }
}

/// Certified enclosure of `ln(x)` for a positive rational, width about `2^-bits`.
pub fn ln_enclosure(x: &Q, bits: u32) -> Interval {
    assert!(x.is_positive(), "logarithm of a nonpositive rational");
    if x.is_one() {
        return Interval::point(Q::zero());
    }
    let mut k: i64 = x.numer().bits() as i64 - x.denom().bits() as i64;
    let mut m = if k >= 0 {
        x / qz(Z::one() << k as usize)
    } else {
        x * qz(Z::one() << (-k) as usize)
    };
    let four_thirds = Q::new(Z::from(4), Z::from(3));
    let two_thirds = Q::new(Z::from(2), Z::from(3));
    while m > four_thirds {
        m /= qi(2);
        k += 1;
    }
    while m < two_thirds {
        m *= qi(2);
        k -= 1;
    }
    let extra = 64 - (k.unsigned_abs().max(1)).leading_zeros();
    let ln2 = two_atanh(&Q::new(Z::one(), Z::from(3)), bits + extra + 2);
    let y = (&m - Q::one()) / (&m + Q::one());
    let lm = two_atanh(&y, bits + 2);
    (&ln2.scale(&qi(k)) + &lm).round_out(bits + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, to_f64};

    #[test]
    fn arithmetic_encloses_point_values() {
        let a = Interval::new(q(-1, 2), q(3, 2));
        let b = Interval::new(q(2, 1), q(3, 1));
        let p = &a * &b;
        assert_eq!(p, Interval::new(q(-3, 2), q(9, 2)));
        assert_eq!(a.square(), Interval::new(q(0, 1), q(9, 4)));
        assert_eq!(a.mag(), q(3, 2));
    }

    #[test]
    fn ln_brackets_float_value() {
        for x in [q(1, 7), q(2, 1), q(10, 3), q(1000, 1), q(3, 4)] {
            let e = ln_enclosure(&x, 50);
            let f = to_f64(&x).ln();
            assert!(to_f64(&e.lo) <= f + 1e-12 && f - 1e-12 <= to_f64(&e.hi));
            assert!(e.width() < q(1, 1 << 40));
        }
        assert!(ln_enclosure(&q(1, 3), 30).hi.is_negative());
    }

    #[test]
    fn complex_box_product() {
        let i = ComplexBox::point(q(0, 1), q(1, 1));
        let sq = i.mul(&i);
        assert_eq!(sq, ComplexBox::point(q(-1, 1), q(0, 1)));
    }
}
