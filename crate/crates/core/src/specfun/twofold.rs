//! Minimal double-double arithmetic for the terminating series route.
//!
//! Only what the series needs: add, mul, div and conversion. Error-free
//! transformations follow Dekker/Knuth; products use a fused multiply-add.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Twofold {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Twofold {
    pub(crate) const ONE: Twofold = Twofold { hi: 1.0, lo: 0.0 };

    pub(crate) fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub(crate) fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }
}

impl From<f64> for Twofold {
    fn from(x: f64) -> Self {
        Twofold { hi: x, lo: 0.0 }
    }
}

impl Neg for Twofold {
    type Output = Twofold;
    fn neg(self) -> Twofold {
        Twofold { hi: -self.hi, lo: -self.lo }
    }
}

impl Add for Twofold {
    type Output = Twofold;
    fn add(self, rhs: Twofold) -> Twofold {
        let (s, e) = two_sum(self.hi, rhs.hi);
        let (t, f) = two_sum(self.lo, rhs.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Twofold { hi, lo }
    }
}

impl Sub for Twofold {
    type Output = Twofold;
    fn sub(self, rhs: Twofold) -> Twofold {
        self + (-rhs)
    }
}

impl Mul for Twofold {
    type Output = Twofold;
    fn mul(self, rhs: Twofold) -> Twofold {
        let (p, e) = two_prod(self.hi, rhs.hi);
        let e = e + (self.hi * rhs.lo + self.lo * rhs.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Twofold { hi, lo }
    }
}

impl Div for Twofold {
    type Output = Twofold;
    fn div(self, rhs: Twofold) -> Twofold {
        let q1 = self.hi / rhs.hi;
        let r = self - rhs * Twofold::from(q1);
        let q2 = r.hi / rhs.hi;
        let r = r - rhs * Twofold::from(q2);
        let q3 = r.hi / rhs.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Twofold { hi, lo } + Twofold::from(q3)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_bits_lost_in_plain_f64() {
        let big = Twofold::from(1e16);
        let sum = big + Twofold::ONE - big;
        assert_eq!(sum.to_f64(), 1.0);
        let third = Twofold::ONE / Twofold::from(3.0);
        let back = third * Twofold::from(3.0) - Twofold::ONE;
        assert!(back.to_f64().abs() < 1e-30);
    }
}
