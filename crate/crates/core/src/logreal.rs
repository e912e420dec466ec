use std::cmp::Ordering;
use std::f64::consts::LN_10;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::numeric::{ln_1m_exp, ln_add_exp};

/// A real number stored as a sign and the natural log of its magnitude.
///
/// Used for probabilities and counts that leave the `f64` range, such as
/// `m = (1-p)^{-αn}` or survival probabilities `(1 - q)^m`. The sign is zero
/// iff the value is exactly zero.
#[derive(Clone, Copy)]
pub struct LogReal {
    sign: i8,
    ln_mag: f64,
}

impl LogReal {
    pub const ZERO: LogReal = LogReal { sign: 0, ln_mag: f64::NEG_INFINITY };
    pub const ONE: LogReal = LogReal { sign: 1, ln_mag: 0.0 };

    /// `e^{ln}`; `ln = -∞` gives zero.
    pub fn from_ln(ln: f64) -> Self {
        debug_assert!(!ln.is_nan(), "NaN logarithm");
        if ln == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            LogReal { sign: 1, ln_mag: ln }
        }
    }

    pub fn from_f64(x: f64) -> Self {
        debug_assert!(!x.is_nan(), "NaN value");
        if x == 0.0 {
            Self::ZERO
        } else {
            LogReal { sign: if x > 0.0 { 1 } else { -1 }, ln_mag: x.abs().ln() }
        }
    }

    pub fn from_parts(sign: i8, ln_mag: f64) -> Self {
        if sign == 0 || ln_mag == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            LogReal { sign: sign.signum(), ln_mag }
        }
    }

    pub fn sign(self) -> i8 {
        self.sign
    }

    /// Natural log of `|x|` (`-∞` for zero).
    pub fn ln_magnitude(self) -> f64 {
        self.ln_mag
    }

    pub fn log10_magnitude(self) -> f64 {
        self.ln_mag / LN_10
    }

    /// Natural log of the value. Negative values have no logarithm and give NaN.
    pub fn ln(self) -> f64 {
        match self.sign {
            1 => self.ln_mag,
            0 => f64::NEG_INFINITY,
            _ => f64::NAN,
        }
    }

    pub fn to_f64(self) -> f64 {
        f64::from(self.sign) * self.ln_mag.exp()
    }

    pub fn is_zero(self) -> bool {
        self.sign == 0
    }

    pub fn is_positive(self) -> bool {
        self.sign > 0
    }

    pub fn abs(self) -> Self {
        LogReal { sign: self.sign.abs(), ln_mag: self.ln_mag }
    }

    /// `self^e` for a non-negative base.
    pub fn powf(self, e: f64) -> Self {
        debug_assert!(self.sign >= 0, "power of a negative LogReal");
        if self.sign == 0 {
            return if e == 0.0 { Self::ONE } else { Self::ZERO };
        }
        Self::from_ln(self.ln_mag * e)
    }

    pub fn sqrt(self) -> Self {
        self.powf(0.5)
    }

    /// `1 - self`, exact in the log domain when `0 <= self <= 1`.
    pub fn one_minus(self) -> Self {
        if self.sign == 1 && self.ln_mag <= 0.0 {
            Self::from_ln(ln_1m_exp(self.ln_mag))
        } else {
            Self::ONE - self
        }
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    /// `self <= other` up to a relative slack on the magnitude of `other`.
    pub fn le_within(self, other: Self, rel_slack: f64) -> bool {
        if self <= other {
            return true;
        }
        let gap = self - other;
        gap.ln() <= other.abs().max(self.abs()).ln_mag + rel_slack.ln()
    }
}

impl PartialEq for LogReal {
    fn eq(&self, other: &Self) -> bool {
        self.sign == other.sign && (self.sign == 0 || self.ln_mag == other.ln_mag)
    }
}

impl PartialOrd for LogReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.sign.cmp(&other.sign) {
            Ordering::Equal => match self.sign {
                0 => Some(Ordering::Equal),
                1 => self.ln_mag.partial_cmp(&other.ln_mag),
                _ => other.ln_mag.partial_cmp(&self.ln_mag),
            },
            ord => Some(ord),
        }
    }
}

impl Mul for LogReal {
    type Output = LogReal;
    fn mul(self, rhs: LogReal) -> LogReal {
        LogReal::from_parts(self.sign * rhs.sign, self.ln_mag + rhs.ln_mag)
    }
}

impl Div for LogReal {
    type Output = LogReal;
    fn div(self, rhs: LogReal) -> LogReal {
        assert!(rhs.sign != 0, "division of LogReal by zero");
        LogReal::from_parts(self.sign * rhs.sign, self.ln_mag - rhs.ln_mag)
    }
}

impl Neg for LogReal {
    type Output = LogReal;
    fn neg(self) -> LogReal {
        LogReal { sign: -self.sign, ln_mag: self.ln_mag }
    }
}

impl Add for LogReal {
    type Output = LogReal;
    fn add(self, rhs: LogReal) -> LogReal {
        if self.sign == 0 {
            return rhs;
        }
        if rhs.sign == 0 {
            return self;
        }
        if self.sign == rhs.sign {
            return LogReal { sign: self.sign, ln_mag: ln_add_exp(self.ln_mag, rhs.ln_mag) };
        }
        let (big, small) = if self.ln_mag >= rhs.ln_mag { (self, rhs) } else { (rhs, self) };
        if big.ln_mag == small.ln_mag {
            return LogReal::ZERO;
        }
        LogReal::from_parts(big.sign, big.ln_mag + ln_1m_exp(small.ln_mag - big.ln_mag))
    }
}

impl Sub for LogReal {
    type Output = LogReal;
    fn sub(self, rhs: LogReal) -> LogReal {
        self + (-rhs)
    }
}

impl From<f64> for LogReal {
    fn from(x: f64) -> Self {
        LogReal::from_f64(x)
    }
}

impl fmt::Debug for LogReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            0 => f.write_str("LogReal(0)"),
            s => write!(f, "LogReal({}e^{})", if s > 0 { "" } else { "-" }, self.ln_mag),
        }
    }
}

/// Plain decimal when representable, `±10^x` otherwise.
impl fmt::Display for LogReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.to_f64();
        if self.sign == 0 || (v.is_normal() && v.abs() < 1e15 && v.abs() > 1e-15) {
            write!(f, "{v}")
        } else {
            write!(f, "{}10^{:.6}", if self.sign < 0 { "-" } else { "" }, self.log10_magnitude())
        }
    }
}

/// Serialized as `{"sign": s, "log10_magnitude": x}`; zero carries `null`.
impl Serialize for LogReal {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("LogReal", 2)?;
        st.serialize_field("sign", &self.sign)?;
        let mag = if self.sign == 0 { None } else { Some(self.log10_magnitude()) };
        st.serialize_field("log10_magnitude", &mag)?;
        st.end()
    }
}
