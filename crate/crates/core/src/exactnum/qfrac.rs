//! Elements of `Z[1/q]` in the canonical form `a * q^-k` with `q` not
//! dividing `a` (and `k = 0` when `a = 0`).
//!
//! Translation parts of `BS(1, q)` elements always live in `Z[1/q]`, never in
//! the full ring of `q`-adic numbers, so this type is exact and total for the
//! group arithmetic.  The valuation `v0` is the `q`-adic valuation, `-k` in
//! canonical form (`+inf` for zero).

use crate::exactnum::ExtInt;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QFraction {
    base: u64,
    numer: BigInt,
    /// Value is `numer * base^-exp`.
    exp: i64,
}

impl QFraction {
    /// Canonicalize `a * q^-k`.
    pub fn new(base: u64, numer: BigInt, exp: i64) -> Result<QFraction> {
        if base < 2 {
            return Err(Error::InvalidArgument(format!(
                "base must be at least 2, got {base}"
            )));
        }
        let mut f = QFraction { base, numer, exp };
        f.normalize();
        Ok(f)
    }

    pub fn zero(base: u64) -> QFraction {
        QFraction {
            base,
            numer: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn from_integer(base: u64, value: i64) -> Result<QFraction> {
        QFraction::new(base, BigInt::from(value), 0)
    }

    fn normalize(&mut self) {
        if self.numer.is_zero() {
            self.exp = 0;
            return;
        }
        let q = BigInt::from(self.base);
        loop {
            let (quot, rem) = self.numer.div_rem(&q);
            if rem.is_zero() {
                self.numer = quot;
                self.exp -= 1;
            } else {
                break;
            }
        }
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn numer(&self) -> &BigInt {
        &self.numer
    }

    pub fn exp(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.numer.is_zero()
    }

    fn check(&self, other: &QFraction) -> Result<()> {
        if self.base != other.base {
            return Err(Error::ModulusMismatch(self.base, other.base));
        }
        Ok(())
    }

    /// `q`-adic valuation; `+inf` for zero.  Canonical form makes this `-exp`.
    pub fn v0(&self) -> ExtInt {
        if self.is_zero() {
            ExtInt::PosInf
        } else {
            ExtInt::Fin(-self.exp)
        }
    }

    pub fn add(&self, other: &QFraction) -> Result<QFraction> {
        self.check(other)?;
        let q = BigInt::from(self.base);
        let k = self.exp.max(other.exp);
        let a = &self.numer * q.pow((k - self.exp) as u32);
        let b = &other.numer * q.pow((k - other.exp) as u32);
        QFraction::new(self.base, a + b, k)
    }

    pub fn neg(&self) -> QFraction {
        QFraction {
            base: self.base,
            numer: -self.numer.clone(),
            exp: self.exp,
        }
    }

    pub fn sub(&self, other: &QFraction) -> Result<QFraction> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &QFraction) -> Result<QFraction> {
        self.check(other)?;
        QFraction::new(self.base, &self.numer * &other.numer, self.exp + other.exp)
    }

    /// Multiply by `q^n`.
    pub fn scale_by_base_pow(&self, n: i64) -> QFraction {
        if self.is_zero() {
            return self.clone();
        }
        QFraction {
            base: self.base,
            numer: self.numer.clone(),
            exp: self.exp - n,
        }
    }

    /// Exact division by an integer `m` coprime to the base: `Some(x / m)`
    /// when `m` divides the numerator, `None` otherwise.
    pub fn exact_divide(&self, m: &BigInt) -> Result<Option<QFraction>> {
        if m.is_zero() {
            return Err(Error::InvalidArgument("division by zero".into()));
        }
        if !m.gcd(&BigInt::from(self.base)).is_one() {
            return Err(Error::InvalidArgument(format!(
                "divisor {m} shares a factor with the base {}",
                self.base
            )));
        }
        if self.is_zero() {
            return Ok(Some(self.clone()));
        }
        let (quot, rem) = self.numer.div_rem(m);
        if rem.is_zero() {
            Ok(Some(QFraction::new(self.base, quot, self.exp)?))
        } else {
            Ok(None)
        }
    }

    /// Exact value as a rational number.
    pub fn to_rational(&self) -> BigRational {
        let q = BigInt::from(self.base);
        if self.exp >= 0 {
            BigRational::new(self.numer.clone(), q.pow(self.exp as u32))
        } else {
            BigRational::from(self.numer.clone() * q.pow((-self.exp) as u32))
        }
    }

    /// Approximate value as `f64` (used only for metric estimates).
    pub fn to_f64(&self) -> f64 {
        let num = self.numer.to_f64().unwrap_or(f64::NAN);
        num * (self.base as f64).powi(-self.exp as i32)
    }

    /// Parse `a/q^k` or a bare integer.  The base in the string must match
    /// `base`.
    pub fn parse(s: &str, base: u64) -> Result<QFraction> {
        const GRAMMAR: &str = "q-fraction: `a/q^k` or a bare integer";
        let t = s.trim();
        if let Some((a, rest)) = t.split_once('/') {
            let numer: BigInt = a.trim().parse().map_err(|e| Error::Parse {
                grammar: GRAMMAR,
                message: format!("bad numerator `{a}`: {e}"),
            })?;
            let (b, k) = rest.split_once('^').ok_or_else(|| Error::Parse {
                grammar: GRAMMAR,
                message: format!("denominator `{rest}` lacks `^`"),
            })?;
            let b: u64 = b.trim().parse().map_err(|e| Error::Parse {
                grammar: GRAMMAR,
                message: format!("bad base `{b}`: {e}"),
            })?;
            if b != base {
                return Err(Error::Parse {
                    grammar: GRAMMAR,
                    message: format!("base {b} does not match expected {base}"),
                });
            }
            let k: i64 = k.trim().parse().map_err(|e| Error::Parse {
                grammar: GRAMMAR,
                message: format!("bad exponent `{k}`: {e}"),
            })?;
            QFraction::new(base, numer, k)
        } else {
            let numer: BigInt = t.parse().map_err(|e| Error::Parse {
                grammar: GRAMMAR,
                message: format!("bad integer `{t}`: {e}"),
            })?;
            QFraction::new(base, numer, 0)
        }
    }
}

impl fmt::Display for QFraction {
    /// Canonical form of the parse grammar: integers print bare, proper
    /// fractions as `a/q^k`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp <= 0 {
            let q = BigInt::from(self.base);
            write!(f, "{}", &self.numer * q.pow((-self.exp) as u32))
        } else {
            write!(f, "{}/{}^{}", self.numer, self.base, self.exp)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q2(s: &str) -> QFraction {
        QFraction::parse(s, 2).unwrap()
    }

    #[test]
    fn normalization() {
        // 4 / 2^2 = 1
        let f = QFraction::new(2, BigInt::from(4), 2).unwrap();
        assert_eq!(f, QFraction::from_integer(2, 1).unwrap());
        // 0 / 2^7 = 0 with exponent reset
        let z = QFraction::new(2, BigInt::zero(), 7).unwrap();
        assert_eq!(z.exp(), 0);
        // 6 / 2^1 = 3
        let g = QFraction::new(2, BigInt::from(6), 1).unwrap();
        assert_eq!(g, QFraction::from_integer(2, 3).unwrap());
    }

    #[test]
    fn valuation() {
        assert_eq!(q2("3/2^2").v0(), ExtInt::Fin(-2));
        assert_eq!(q2("0").v0(), ExtInt::PosInf);
        assert_eq!(q2("8").v0(), ExtInt::Fin(3));
    }

    #[test]
    fn exact_divide_cases() {
        let x = q2("21/2^1");
        assert_eq!(x.exact_divide(&BigInt::from(3)).unwrap(), Some(q2("7/2^1")));
        let y = q2("8");
        assert_eq!(y.exact_divide(&BigInt::from(7)).unwrap(), None);
        let z = QFraction::zero(2);
        assert_eq!(z.exact_divide(&BigInt::from(5)).unwrap(), Some(z.clone()));
        assert!(z.exact_divide(&BigInt::zero()).is_err());
        assert!(q2("1").exact_divide(&BigInt::from(4)).is_err());
    }

    #[test]
    fn display_round_trips() {
        for s in ["0", "2", "-6", "3/2^2", "-5/2^7"] {
            let f = q2(s);
            assert_eq!(QFraction::parse(&f.to_string(), 2).unwrap(), f);
        }
    }

    #[test]
    fn parse_rejects_base_mismatch() {
        assert!(QFraction::parse("3/3^2", 2).is_err());
    }
}
