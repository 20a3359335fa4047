//! Integers extended with `-inf` and `+inf`.
//!
//! Valuations of the zero polynomial are the distinguished infinities rather
//! than errors, because the metric formulas take max/min against 0 and the
//! callers branch on the sentinels directly.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtInt {
    NegInf,
    Fin(i64),
    PosInf,
}

impl ExtInt {
    pub fn finite(self) -> Option<i64> {
        match self {
            ExtInt::Fin(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtInt::Fin(_))
    }

    /// Finite value, panicking on an infinity. Use only after a zero check.
    pub fn unwrap_finite(self) -> i64 {
        self.finite().expect("expected finite valuation")
    }

    pub fn plus(self, d: i64) -> ExtInt {
        match self {
            ExtInt::Fin(v) => ExtInt::Fin(v + d),
            inf => inf,
        }
    }
}

impl From<i64> for ExtInt {
    fn from(v: i64) -> Self {
        ExtInt::Fin(v)
    }
}

impl fmt::Display for ExtInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtInt::NegInf => write!(f, "-inf"),
            ExtInt::Fin(v) => write!(f, "{v}"),
            ExtInt::PosInf => write!(f, "+inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering() {
        assert!(ExtInt::NegInf < ExtInt::Fin(i64::MIN));
        assert!(ExtInt::Fin(i64::MAX) < ExtInt::PosInf);
        assert!(ExtInt::Fin(-3) < ExtInt::Fin(2));
    }
}
