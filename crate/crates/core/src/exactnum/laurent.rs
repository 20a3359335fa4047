//! Finitely supported Laurent polynomials over `Z_q`.
//!
//! A value represents an element of `Z_q[t^-1, t]`: a finite map from
//! exponents to nonzero residues.  Two polynomials are equal exactly when the
//! maps are equal, so the type doubles as a canonical form for lamplighter
//! lamp configurations.
//!
//! The valuations `v0` (least exponent with nonzero coefficient) and
//! `v0_minus` (greatest such exponent) drive every metric formula downstream;
//! the zero polynomial reports `v0 = +inf`, `v0_minus = -inf`.

use crate::exactnum::{ExtInt, Residue};
use crate::{Error, Result};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPoly {
    modulus: u64,
    // exponent -> coefficient in [1, q)
    support: BTreeMap<i64, u64>,
}

impl LaurentPoly {
    pub fn zero(modulus: u64) -> LaurentPoly {
        LaurentPoly {
            modulus,
            support: BTreeMap::new(),
        }
    }

    /// Monomial `c * t^exp` (reduced; a vanishing coefficient gives zero).
    pub fn monomial(modulus: u64, exp: i64, coeff: i64) -> Result<LaurentPoly> {
        let c = Residue::new(coeff, modulus)?;
        let mut p = LaurentPoly::zero(modulus);
        if !c.is_zero() {
            p.support.insert(exp, c.value());
        }
        Ok(p)
    }

    /// Build from `(exponent, coefficient)` pairs, summing duplicates.
    pub fn from_terms(modulus: u64, terms: &[(i64, i64)]) -> Result<LaurentPoly> {
        let mut p = LaurentPoly::zero(modulus);
        for &(exp, coeff) in terms {
            p.add_term(exp, Residue::new(coeff, modulus)?)?;
        }
        Ok(p)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn coefficient(&self, exp: i64) -> Residue {
        match self.support.get(&exp) {
            Some(&c) => Residue::new(c as i64, self.modulus).expect("stored residue valid"),
            None => Residue::zero(self.modulus),
        }
    }

    /// Iterate `(exponent, coefficient)` in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, u64)> + '_ {
        self.support.iter().map(|(&e, &c)| (e, c))
    }

    pub fn support_len(&self) -> usize {
        self.support.len()
    }

    fn check(&self, other: &LaurentPoly) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(self.modulus, other.modulus));
        }
        Ok(())
    }

    fn add_term(&mut self, exp: i64, c: Residue) -> Result<()> {
        if c.modulus() != self.modulus {
            return Err(Error::ModulusMismatch(self.modulus, c.modulus()));
        }
        if c.is_zero() {
            return Ok(());
        }
        let entry = self.support.entry(exp).or_insert(0);
        *entry = (*entry + c.value()) % self.modulus;
        if *entry == 0 {
            self.support.remove(&exp);
        }
        Ok(())
    }

    pub fn add(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.check(other)?;
        let mut out = self.clone();
        for (exp, c) in other.terms() {
            out.add_term(exp, Residue::new(c as i64, self.modulus)?)?;
        }
        Ok(out)
    }

    pub fn neg(&self) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.modulus);
        for (exp, c) in self.terms() {
            out.support.insert(exp, self.modulus - c);
        }
        out
    }

    pub fn sub(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.add(&other.neg())
    }

    /// Multiply by the monomial `c * t^shift`.
    pub fn mul_monomial(&self, shift: i64, coeff: i64) -> Result<LaurentPoly> {
        let c = Residue::new(coeff, self.modulus)?;
        let mut out = LaurentPoly::zero(self.modulus);
        if c.is_zero() {
            return Ok(out);
        }
        for (exp, a) in self.terms() {
            let prod = Residue::new(a as i64, self.modulus)?.mul(c)?;
            if !prod.is_zero() {
                out.support.insert(exp + shift, prod.value());
            }
        }
        Ok(out)
    }

    /// Multiply by `t^shift`.
    pub fn shifted(&self, shift: i64) -> LaurentPoly {
        self.mul_monomial(shift, 1).expect("unit coefficient")
    }

    /// Full ring product (convolution of supports).
    pub fn mul(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.check(other)?;
        let mut out = LaurentPoly::zero(self.modulus);
        for (e1, c1) in self.terms() {
            for (e2, c2) in other.terms() {
                let prod = (c1 as u128 * c2 as u128 % self.modulus as u128) as i64;
                out.add_term(e1 + e2, Residue::new(prod, self.modulus)?)?;
            }
        }
        Ok(out)
    }

    /// Least exponent with nonzero coefficient; `+inf` for zero.
    pub fn v0(&self) -> ExtInt {
        match self.support.keys().next() {
            Some(&e) => ExtInt::Fin(e),
            None => ExtInt::PosInf,
        }
    }

    /// Greatest exponent with nonzero coefficient; `-inf` for zero.
    pub fn v0_minus(&self) -> ExtInt {
        match self.support.keys().next_back() {
            Some(&e) => ExtInt::Fin(e),
            None => ExtInt::NegInf,
        }
    }

    /// Both valuations in one call: `(v0, v0_minus)`.
    pub fn valuations(&self) -> (ExtInt, ExtInt) {
        (self.v0(), self.v0_minus())
    }

    /// Restriction to exponents strictly below `cut`.
    pub fn truncate_below(&self, cut: i64) -> LaurentPoly {
        LaurentPoly {
            modulus: self.modulus,
            support: self.support.range(..cut).map(|(&e, &c)| (e, c)).collect(),
        }
    }

    /// Restriction to exponents at or above `cut`.
    pub fn truncate_at_or_above(&self, cut: i64) -> LaurentPoly {
        LaurentPoly {
            modulus: self.modulus,
            support: self.support.range(cut..).map(|(&e, &c)| (e, c)).collect(),
        }
    }

    /// Parse the text grammar: comma-separated `coeff@exp` terms, empty
    /// string for zero.  Example: `1@0,1@2` is `1 + t^2`.
    pub fn parse(s: &str, modulus: u64) -> Result<LaurentPoly> {
        const GRAMMAR: &str = "laurent poly: comma-separated coeff@exp terms, empty for 0";
        let mut p = LaurentPoly::zero(modulus);
        let trimmed = s.trim();
        if trimmed.is_empty() {
            return Ok(p);
        }
        for term in trimmed.split(',') {
            let (coeff, exp) = term.trim().split_once('@').ok_or_else(|| Error::Parse {
                grammar: GRAMMAR,
                message: format!("term `{term}` lacks `@`"),
            })?;
            let coeff: i64 = coeff.trim().parse().map_err(|e| Error::Parse {
                grammar: GRAMMAR,
                message: format!("bad coefficient `{coeff}`: {e}"),
            })?;
            let exp: i64 = exp.trim().parse().map_err(|e| Error::Parse {
                grammar: GRAMMAR,
                message: format!("bad exponent `{exp}`: {e}"),
            })?;
            p.add_term(exp, Residue::new(coeff, modulus)?)?;
        }
        Ok(p)
    }
}

impl fmt::Display for LaurentPoly {
    /// Canonical form of the parse grammar (ascending exponents; zero is
    /// the empty string).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (exp, c) in self.terms() {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{c}@{exp}")?;
            first = false;
        }
        Ok(())
    }
}
