//! Residues mod `q`, the coefficient ring of the lamplighter modules.

use crate::{Error, Result};
use std::fmt;

/// Element of `Z_q`, stored in the canonical range `[0, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Residue {
    value: u64,
    modulus: u64,
}

impl Residue {
    /// Reduce an arbitrary signed integer mod `q`.
    pub fn new(value: i64, modulus: u64) -> Result<Residue> {
        if modulus < 2 {
            return Err(Error::InvalidArgument(format!(
                "modulus must be at least 2, got {modulus}"
            )));
        }
        let m = modulus as i64;
        Ok(Residue {
            value: value.rem_euclid(m) as u64,
            modulus,
        })
    }

    pub fn zero(modulus: u64) -> Residue {
        Residue { value: 0, modulus }
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> u64 {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    fn check(self, other: Residue) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(self.modulus, other.modulus));
        }
        Ok(())
    }

    pub fn add(self, other: Residue) -> Result<Residue> {
        self.check(other)?;
        Ok(Residue {
            value: (self.value + other.value) % self.modulus,
            modulus: self.modulus,
        })
    }

    pub fn sub(self, other: Residue) -> Result<Residue> {
        self.check(other)?;
        Ok(Residue {
            value: (self.value + self.modulus - other.value) % self.modulus,
            modulus: self.modulus,
        })
    }

    pub fn neg(self) -> Residue {
        Residue {
            value: (self.modulus - self.value) % self.modulus,
            modulus: self.modulus,
        }
    }

    pub fn mul(self, other: Residue) -> Result<Residue> {
        self.check(other)?;
        let prod = (self.value as u128 * other.value as u128) % self.modulus as u128;
        Ok(Residue {
            value: prod as u64,
            modulus: self.modulus,
        })
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_and_arithmetic() {
        let a = Residue::new(-1, 3).unwrap();
        assert_eq!(a.value(), 2);
        let b = Residue::new(5, 3).unwrap();
        assert_eq!(a.add(b).unwrap().value(), 1);
        assert_eq!(a.mul(b).unwrap().value(), 1);
        assert_eq!(a.neg().value(), 1);
        assert_eq!(Residue::zero(3).neg().value(), 0);
    }

    #[test]
    fn modulus_mismatch_rejected() {
        let a = Residue::new(1, 2).unwrap();
        let b = Residue::new(1, 3).unwrap();
        assert!(matches!(a.add(b), Err(Error::ModulusMismatch(2, 3))));
    }

    #[test]
    fn tiny_modulus_rejected() {
        assert!(Residue::new(0, 1).is_err());
    }
}
