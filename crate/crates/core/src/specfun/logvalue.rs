use std::cmp::Ordering;
use std::fmt;
use std::ops::{Div, Mul, Neg};

/// A real number stored as a sign and a log-magnitude.
///
/// Products of Gamma factors, powers of the variances and determinants of
/// badly scaled matrices overflow `f64` long before the densities built from
/// them do, so every such quantity travels through this type. Internally the
/// magnitude is kept as a mantissa in `[1, 2)` and a binary exponent, which
/// makes `f64 -> LogValue -> f64` exact.
#[derive(Clone, Copy, PartialEq)]
pub struct LogValue {
    // signed mantissa, |mant| in [1, 2), or 0
    mant: f64,
    exp2: i64,
}

pub(super) fn split(x: f64) -> (f64, i64) {
    debug_assert!(x != 0.0 && x.is_finite());
    let (x, bias) = if x.abs() < f64::MIN_POSITIVE { (x * 2f64.powi(64), -64) } else { (x, 0) };
    let bits = x.to_bits();
    let e = ((bits >> 52) & 0x7ff) as i64 - 1023;
    let m = f64::from_bits((bits & !(0x7ff << 52)) | (1023 << 52));
    (m, e + bias)
}

pub(super) fn ldexp(m: f64, e: i64) -> f64 {
    if e > 2000 {
        return m * f64::INFINITY;
    }
    if e < -2200 {
        return m * 0.0;
    }
    // two steps keep the intermediate power of two representable
    let e1 = (e / 2) as i32;
    let e2 = (e - e / 2) as i32;
    m * 2f64.powi(e1) * 2f64.powi(e2)
}

impl LogValue {
    pub const ZERO: LogValue = LogValue { mant: 0.0, exp2: 0 };
    pub const ONE: LogValue = LogValue { mant: 1.0, exp2: 0 };

    fn normalized(mant: f64, exp2: i64) -> Self {
        if mant == 0.0 {
            return Self::ZERO;
        }
        if !mant.is_finite() {
            return LogValue { mant, exp2: 0 };
        }
        let (m, e) = split(mant);
        LogValue { mant: m, exp2: exp2 + e }
    }

    /// Builds a value from its parts. A zero sign or `log_abs = -inf` gives zero.
    pub fn new(sign: i8, log_abs: f64) -> Self {
        if sign == 0 || log_abs == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        let s = f64::from(sign.signum());
        if !log_abs.is_finite() {
            return LogValue { mant: s * log_abs.abs(), exp2: 0 };
        }
        let e = (log_abs / std::f64::consts::LN_2).floor();
        let frac = log_abs - e * std::f64::consts::LN_2;
        Self::normalized(s * frac.exp(), e as i64)
    }

    /// Positive number `exp(log_abs)`.
    pub fn from_ln(log_abs: f64) -> Self {
        Self::new(1, log_abs)
    }

    pub fn from_f64(x: f64) -> Self {
        Self::normalized(x, 0)
    }

    pub fn to_f64(self) -> f64 {
        if self.mant == 0.0 || !self.mant.is_finite() {
            return self.mant;
        }
        ldexp(self.mant, self.exp2)
    }

    pub fn sign(self) -> i8 {
        if self.mant > 0.0 {
            1
        } else if self.mant < 0.0 {
            -1
        } else {
            0
        }
    }

    /// Natural log of the magnitude (`-inf` for zero).
    pub fn log_abs(self) -> f64 {
        if self.mant == 0.0 {
            return f64::NEG_INFINITY;
        }
        if !self.mant.is_finite() {
            return f64::INFINITY;
        }
        self.mant.abs().ln() + self.exp2 as f64 * std::f64::consts::LN_2
    }

    pub fn is_zero(self) -> bool {
        self.mant == 0.0
    }

    pub fn is_finite(self) -> bool {
        self.mant.is_finite()
    }

    pub fn abs(self) -> Self {
        LogValue { mant: self.mant.abs(), exp2: self.exp2 }
    }

    /// Multiplicative inverse; the inverse of zero is reported as `None`.
    pub fn recip(self) -> Option<Self> {
        if self.mant == 0.0 {
            None
        } else {
            Some(Self::normalized(1.0 / self.mant, -self.exp2))
        }
    }

    /// Integer power.
    pub fn powi(self, k: i32) -> Self {
        if k == 0 {
            return Self::ONE;
        }
        if self.mant == 0.0 {
            return Self::ZERO;
        }
        // repeated squaring keeps the rounding error at O(log k) ulps
        let mut base = if k < 0 { self.recip().unwrap() } else { self };
        let mut n = k.unsigned_abs();
        let mut acc = Self::ONE;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            n >>= 1;
        }
        acc
    }

    /// Sum of two values without leaving the scaled representation.
    pub fn add(self, other: Self) -> Self {
        if self.mant == 0.0 {
            return other;
        }
        if other.mant == 0.0 {
            return self;
        }
        let (big, small) = if self.exp2 >= other.exp2 { (self, other) } else { (other, self) };
        let shift = small.exp2 - big.exp2;
        Self::normalized(big.mant + ldexp(small.mant, shift), big.exp2)
    }

    pub fn sub(self, other: Self) -> Self {
        self.add(-other)
    }

    /// Binary exponent of the magnitude (`|x| = m·2^e` with `m` in `[1, 2)`).
    pub fn exponent2(self) -> Option<i64> {
        if self.mant == 0.0 || !self.mant.is_finite() {
            None
        } else {
            Some(self.exp2)
        }
    }

    /// Exact multiplication by `2^k`.
    pub fn mul_pow2(self, k: i64) -> Self {
        if self.mant == 0.0 || !self.mant.is_finite() {
            self
        } else {
            LogValue { mant: self.mant, exp2: self.exp2 + k }
        }
    }

    /// Compares magnitudes.
    pub fn cmp_abs(self, other: Self) -> Ordering {
        match (self.mant == 0.0, other.mant == 0.0) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            _ => self.exp2.cmp(&other.exp2).then(self.mant.abs().total_cmp(&other.mant.abs())),
        }
    }
}

impl Default for LogValue {
    fn default() -> Self {
        Self::ZERO
    }
}

impl fmt::Debug for LogValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign() {
            0 => write!(f, "LogValue(0)"),
            s => write!(f, "LogValue({}exp({}))", if s > 0 { "+" } else { "-" }, self.log_abs()),
        }
    }
}

impl From<f64> for LogValue {
    fn from(x: f64) -> Self {
        Self::from_f64(x)
    }
}

impl Mul for LogValue {
    type Output = LogValue;
    fn mul(self, rhs: LogValue) -> LogValue {
        LogValue::normalized(self.mant * rhs.mant, self.exp2 + rhs.exp2)
    }
}

impl Div for LogValue {
    type Output = LogValue;
    /// Division by zero yields a signed infinity in `log_abs`.
    fn div(self, rhs: LogValue) -> LogValue {
        if self.mant == 0.0 {
            return LogValue::ZERO;
        }
        if rhs.mant == 0.0 {
            return LogValue { mant: self.mant * f64::INFINITY, exp2: 0 };
        }
        LogValue::normalized(self.mant / rhs.mant, self.exp2 - rhs.exp2)
    }
}

impl Neg for LogValue {
    type Output = LogValue;
    fn neg(self) -> LogValue {
        LogValue { mant: -self.mant, exp2: self.exp2 }
    }
}

impl std::iter::Product for LogValue {
    fn product<I: Iterator<Item = LogValue>>(iter: I) -> LogValue {
        iter.fold(LogValue::ONE, |acc, x| acc * x)
    }
}
