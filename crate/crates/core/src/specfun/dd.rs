//! Double-double arithmetic (about 32 significant digits).
//!
//! The determinantal density formulas combine nearly dependent columns when
//! several `σ_B` values are close, and lose up to a dozen digits to
//! cancellation at `n ≈ 9`. Their entries and determinants are therefore
//! evaluated in this type and rounded to `f64` only at the end.
//!
//! [`Dd`] is an unevaluated sum `hi + lo` with `|lo| ≤ ulp(hi)/2`, built on
//! the usual error-free transformations. [`ScaledDd`] adds a binary exponent
//! so that values far outside the `f64` range stay representable.

use std::cmp::Ordering;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::logvalue::{ldexp, split};
use super::LogValue;

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

/// A double-double number `hi + lo`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Dd {
    hi: f64,
    lo: f64,
}

/// ln 2 to double-double accuracy.
const LN2: Dd = Dd { hi: std::f64::consts::LN_2, lo: 2.319_046_813_846_299_558e-17 };

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub fn new(hi: f64, lo: f64) -> Self {
        let (hi, lo) = two_sum(hi, lo);
        Dd { hi, lo }
    }

    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn lo(self) -> f64 {
        self.lo
    }

    /// Nearest `f64`.
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn is_zero(self) -> bool {
        self.hi == 0.0
    }

    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn mul_f64(self, b: f64) -> Self {
        let (p1, p2) = two_prod(self.hi, b);
        let (hi, lo) = quick_two_sum(p1, p2 + self.lo * b);
        Dd { hi, lo }
    }

    /// Exact scaling by `2^k` (barring overflow or underflow of a limb).
    pub fn mul_pow2(self, k: i64) -> Self {
        Dd { hi: ldexp(self.hi, k), lo: ldexp(self.lo, k) }
    }

    pub fn recip(self) -> Self {
        Dd::ONE / self
    }

    pub fn powi(self, k: i32) -> Self {
        let mut base = if k < 0 { self.recip() } else { self };
        let mut n = k.unsigned_abs();
        let mut acc = Dd::ONE;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            n >>= 1;
        }
        acc
    }

    /// `n!` (exact while it fits in 106 bits).
    pub fn factorial(n: u32) -> Self {
        (2..=n).fold(Dd::ONE, |acc, k| acc.mul_f64(f64::from(k)))
    }

    /// Rising factorial `(a)_k`.
    pub fn pochhammer(a: f64, k: u32) -> Self {
        (0..k).fold(Dd::ONE, |acc, i| acc * (Dd::from(a) + Dd::from(f64::from(i))))
    }
}

impl From<f64> for Dd {
    fn from(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, b: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Dd { hi, lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, b: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, b.hi);
        let (hi, lo) = quick_two_sum(p1, p2 + (self.hi * b.lo + self.lo * b.hi));
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo } + Dd::from(q3)
    }
}

impl PartialOrd for Dd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            ord => ord,
        }
    }
}

/// `m · 2^e` with a double-double mantissa, `|m.hi|` in `[1, 2)` or `m = 0`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ScaledDd {
    m: Dd,
    e: i64,
}

impl ScaledDd {
    pub const ZERO: ScaledDd = ScaledDd { m: Dd::ZERO, e: 0 };
    pub const ONE: ScaledDd = ScaledDd { m: Dd::ONE, e: 0 };

    pub fn from_dd(m: Dd) -> Self {
        Self::normalized(m, 0)
    }

    pub fn from_f64(x: f64) -> Self {
        Self::normalized(Dd::from(x), 0)
    }

    fn normalized(m: Dd, e: i64) -> Self {
        if m.hi == 0.0 || !m.hi.is_finite() {
            return ScaledDd { m, e: if m.hi == 0.0 { 0 } else { e } };
        }
        let (_, k) = split(m.hi);
        ScaledDd { m: m.mul_pow2(-k), e: e + k }
    }

    /// `e^x` for any finite `x`.
    pub fn exp(x: Dd) -> Self {
        let k = (x.hi / LN2.hi).round();
        let r = x - LN2.mul_f64(k);
        // |r| <= 0.35: 27 Taylor terms reach 1e-34
        let mut term = Dd::ONE;
        let mut sum = Dd::ONE;
        for i in 1..=30 {
            term = term * r / Dd::from(f64::from(i));
            sum = sum + term;
            if term.hi.abs() < 1e-35 {
                break;
            }
        }
        Self::normalized(sum, k as i64)
    }

    pub fn sign(self) -> i8 {
        if self.m.hi > 0.0 {
            1
        } else if self.m.hi < 0.0 {
            -1
        } else {
            0
        }
    }

    pub fn is_zero(self) -> bool {
        self.m.hi == 0.0
    }

    pub fn is_finite(self) -> bool {
        self.m.is_finite()
    }

    pub fn mantissa(self) -> Dd {
        self.m
    }

    /// Binary exponent (`None` for zero or non-finite values).
    pub fn exponent2(self) -> Option<i64> {
        if self.m.hi == 0.0 || !self.m.hi.is_finite() {
            None
        } else {
            Some(self.e)
        }
    }

    pub fn mul_pow2(self, k: i64) -> Self {
        if self.exponent2().is_none() {
            self
        } else {
            ScaledDd { m: self.m, e: self.e + k }
        }
    }

    /// The value times `2^-k` as a plain double-double.
    pub fn to_dd_scaled(self, k: i64) -> Dd {
        if self.m.hi == 0.0 {
            Dd::ZERO
        } else {
            self.m.mul_pow2(self.e - k)
        }
    }

    pub fn to_dd(self) -> Dd {
        self.to_dd_scaled(0)
    }

    pub fn to_f64(self) -> f64 {
        self.to_dd().to_f64()
    }

    pub fn to_log_value(self) -> LogValue {
        LogValue::from_f64(self.m.to_f64()).mul_pow2(self.e)
    }

    pub fn powi(self, k: i32) -> Self {
        let mut base = if k < 0 { ScaledDd::ONE / self } else { self };
        let mut n = k.unsigned_abs();
        let mut acc = ScaledDd::ONE;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            n >>= 1;
        }
        acc
    }

    pub fn add(self, other: Self) -> Self {
        if self.m.hi == 0.0 {
            return other;
        }
        if other.m.hi == 0.0 {
            return self;
        }
        let (big, small) = if self.e >= other.e { (self, other) } else { (other, self) };
        let shift = small.e - big.e;
        if shift < -120 {
            return big;
        }
        Self::normalized(big.m + small.m.mul_pow2(shift), big.e)
    }

    pub fn abs(self) -> Self {
        ScaledDd { m: self.m.abs(), e: self.e }
    }
}

impl From<Dd> for ScaledDd {
    fn from(m: Dd) -> Self {
        Self::from_dd(m)
    }
}

impl Mul for ScaledDd {
    type Output = ScaledDd;
    fn mul(self, b: ScaledDd) -> ScaledDd {
        ScaledDd::normalized(self.m * b.m, self.e + b.e)
    }
}

impl Mul<Dd> for ScaledDd {
    type Output = ScaledDd;
    fn mul(self, b: Dd) -> ScaledDd {
        ScaledDd::normalized(self.m * b, self.e)
    }
}

impl Div for ScaledDd {
    type Output = ScaledDd;
    fn div(self, b: ScaledDd) -> ScaledDd {
        if self.m.hi == 0.0 {
            return ScaledDd::ZERO;
        }
        ScaledDd::normalized(self.m / b.m, self.e - b.e)
    }
}

impl Neg for ScaledDd {
    type Output = ScaledDd;
    fn neg(self) -> ScaledDd {
        ScaledDd { m: -self.m, e: self.e }
    }
}

impl std::iter::Product for ScaledDd {
    fn product<I: Iterator<Item = ScaledDd>>(iter: I) -> ScaledDd {
        iter.fold(ScaledDd::ONE, |acc, x| acc * x)
    }
}
