//! The solvable Baumslag-Solitar group `BS(1, q) = <a, b | a b a^-1 = b^q>`
//! as affine matrices `(q^n, f; 0, 1)` with `n` an integer and `f` in
//! `Z[1/q]`, multiplying as
//!
//! ```text
//! (n1, f1) * (n2, f2) = (n1 + n2, f1 + q^n1 * f2).
//! ```
//!
//! The group acts on treebolic space (horocyclic product of a `(q+1)`-valent
//! tree with the hyperbolic plane); [`length_bounds`] evaluates the standard
//! displacement estimates for the basepoint `(B(0, q^0), i)`, combining tree
//! valuations with hyperbolic distances.  [`conjugacy`] is exact: the only
//! arithmetic in the decision is divisibility in `Z[1/q]`.

use crate::exactnum::{ExtInt, QFraction};
use crate::group::Group;
use crate::outcome::{Certificate, ConjugacyOutcome, LengthStats, SearchStats};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::One;
use std::fmt;

/// Constant `2 / log sqrt(2)` of the reference linear conjugator bound.
/// Reported against, never asserted: only metric estimates are computable.
pub fn reference_bound_constant() -> f64 {
    2.0 / (0.5 * 2f64.ln())
}

/// Group element `(n, f)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BSElement {
    q: u64,
    shift: i64,
    trans: QFraction,
}

impl BSElement {
    pub fn new(q: u64, shift: i64, trans: QFraction) -> Result<BSElement> {
        if trans.base() != q {
            return Err(Error::ModulusMismatch(q, trans.base()));
        }
        Ok(BSElement { q, shift, trans })
    }

    pub fn identity(q: u64) -> BSElement {
        BSElement {
            q,
            shift: 0,
            trans: QFraction::zero(q),
        }
    }

    /// The generator `a = (1, 0)` of the presentation.
    pub fn gen_a(q: u64) -> BSElement {
        BSElement {
            q,
            shift: 1,
            trans: QFraction::zero(q),
        }
    }

    /// The generator `b = (0, 1)`.
    pub fn gen_b(q: u64) -> BSElement {
        BSElement {
            q,
            shift: 0,
            trans: QFraction::from_integer(q, 1).expect("base >= 2"),
        }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn translation(&self) -> &QFraction {
        &self.trans
    }

    pub fn is_identity(&self) -> bool {
        self.shift == 0 && self.trans.is_zero()
    }

    pub fn mul(&self, other: &BSElement) -> Result<BSElement> {
        if self.q != other.q {
            return Err(Error::ModulusMismatch(self.q, other.q));
        }
        Ok(BSElement {
            q: self.q,
            shift: self.shift + other.shift,
            trans: self.trans.add(&other.trans.scale_by_base_pow(self.shift))?,
        })
    }

    pub fn inv(&self) -> BSElement {
        BSElement {
            q: self.q,
            shift: -self.shift,
            trans: self.trans.neg().scale_by_base_pow(-self.shift),
        }
    }

    /// Image of `i` under the affine action `z -> q^n z + f`.
    pub fn act_on_i(&self) -> (f64, f64) {
        (self.trans.to_f64(), (self.q as f64).powi(self.shift as i32))
    }

    /// JSON encoding used by the CLI and the audit reports.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "group": "bs",
            "q": self.q,
            "n": self.shift,
            "f": self.trans.to_string(),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<BSElement> {
        let bad = |m: &str| Error::Parse {
            grammar: "bs element json",
            message: m.to_string(),
        };
        let q = v["q"].as_u64().ok_or_else(|| bad("missing q"))?;
        let n = v["n"].as_i64().ok_or_else(|| bad("missing n"))?;
        let f = v["f"].as_str().ok_or_else(|| bad("missing f"))?;
        BSElement::new(q, n, QFraction::parse(f, q)?)
    }
}

impl fmt::Display for BSElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; {})", self.shift, self.trans)
    }
}

/// Context for the [`Group`] trait.
#[derive(Debug, Clone, Copy)]
pub struct BsGroup {
    pub q: u64,
}

impl Group for BsGroup {
    type Elem = BSElement;

    fn identity(&self) -> BSElement {
        BSElement::identity(self.q)
    }

    fn mul(&self, a: &BSElement, b: &BSElement) -> BSElement {
        a.mul(b).expect("elements share the context base")
    }

    fn inv(&self, a: &BSElement) -> BSElement {
        a.inv()
    }
}

/// Hyperbolic distance in the upper half plane,
/// `arccosh(1 + (|dx|^2 + (y1 - y2)^2) / (2 y1 y2))`.
pub fn hyp_dist(p1: (f64, f64), p2: (f64, f64)) -> Result<f64> {
    if p1.1 <= 0.0 || p2.1 <= 0.0 {
        return Err(Error::InvalidArgument(
            "hyperbolic points need positive imaginary part".into(),
        ));
    }
    let dx = p1.0 - p2.0;
    let dy = p1.1 - p2.1;
    Ok((1.0 + (dx * dx + dy * dy) / (2.0 * p1.1 * p2.1)).acosh())
}

/// Rescaled variant dividing by `log q`, so the horospheres `y = q^r` sit at
/// unit spacing; the treebolic gluing uses this normalization, while the
/// displacement estimates below are stated for the raw distance.
pub fn hyp_dist_rescaled(p1: (f64, f64), p2: (f64, f64), q: u64) -> Result<f64> {
    Ok(hyp_dist(p1, p2)? / (q as f64).ln())
}

/// Displacement estimate for the treebolic basepoint `(B(0, q^0), i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LengthEstimate {
    pub lower: f64,
    pub upper: f64,
    /// Exact displacement when the translation part vanishes.
    pub exact: Option<u64>,
}

/// Constant `A = min((log q - log sqrt 2) / 2, 1)` of the zero-shift lower
/// bound `A |v0(f)|`.
pub fn valuation_constant(q: u64) -> f64 {
    (((q as f64).ln() - 0.5 * 2f64.ln()) / 2.0).min(1.0)
}

/// Evaluate the displacement bounds for `g = (n, f)`.
///
/// Lower bound: best of `|n|`, `max(-v0, 0)`, `d_hyp(i, g.i)`, the average
/// `(d_hyp(i, g.i) + max(-v0, 0)) / 2`, and `A |v0(f)|` when `n = 0` and
/// `f != 0`.  Upper bound: the two-leg path `|n| + d_hyp(i, i + f)
/// + 2 max(-v0, 0)` (drop down to the sheet of `f`, translate, climb back).
pub fn length_bounds(g: &BSElement) -> LengthEstimate {
    let n_abs = g.shift.unsigned_abs() as f64;
    let i = (0.0, 1.0);
    let d_orbit = hyp_dist(i, g.act_on_i()).expect("imaginary parts positive");
    let d_trans = hyp_dist(i, (g.trans.to_f64(), 1.0)).expect("imaginary parts positive");
    let v0 = g.trans.v0();
    let neg_v0 = match v0 {
        ExtInt::Fin(v) => (-v).max(0) as f64,
        _ => 0.0,
    };
    let mut lower = n_abs.max(neg_v0).max(d_orbit).max(0.5 * (d_orbit + neg_v0));
    if g.shift == 0 && !g.trans.is_zero() {
        let v = v0.unwrap_finite().unsigned_abs() as f64;
        lower = lower.max(valuation_constant(g.q) * v);
    }
    let upper = n_abs + d_trans + 2.0 * neg_v0;
    let exact = g.trans.is_zero().then(|| g.shift.unsigned_abs());
    LengthEstimate {
        lower,
        upper,
        exact,
    }
}

/// Upper estimate used for witnesses in ratio reports.
pub fn witness_upper(g: &BSElement) -> f64 {
    length_bounds(g).upper
}

/// Lower estimate used for inputs in ratio reports.
pub fn input_lower(g: &BSElement) -> f64 {
    length_bounds(g).lower
}

/// Constructive conjugacy in `BS(1, q)`, exact throughout.
///
/// Shifts must match.  For zero shift, `u = (0, P)` and `v = (0, Q)` are
/// conjugate iff `P = q^n Q` for some integer `n` (equal canonical
/// numerators, including sign), witness `(-n', 0)` read off the canonical
/// exponents.  For nonzero shift `s` (normalized positive via inverses), a
/// conjugator with shift `n` exists iff `q^s - 1` divides `q^n Q - P` in
/// `Z[1/q]`; each `n` in `[0, s)` is tested by exact division and the
/// smallest hit is returned as `(n, f)`.
pub fn conjugacy(u: &BSElement, v: &BSElement) -> Result<ConjugacyOutcome<BSElement>> {
    if u.q != v.q {
        return Err(Error::ModulusMismatch(u.q, v.q));
    }
    if u.shift != v.shift {
        return Ok(ConjugacyOutcome::not_conjugate(
            "shift components differ, so no conjugator can exist",
        ));
    }
    let q = u.q;
    let inverted = u.shift < 0;
    let (cu, cv) = if inverted {
        (u.inv(), v.inv())
    } else {
        (u.clone(), v.clone())
    };
    let s = cu.shift;
    let p = cu.trans.clone();
    let q_frac = cv.trans.clone();

    let mut cert = Certificate::default();
    let mut stats = SearchStats::default();
    let witness: Option<BSElement> = if s == 0 {
        if p.is_zero() && q_frac.is_zero() {
            Some(BSElement::identity(q))
        } else if p.is_zero() != q_frac.is_zero() {
            None
        } else if p.numer() == q_frac.numer() {
            // P = q^n Q with n read off the canonical exponents.
            let n = q_frac.exp() - p.exp();
            stats.candidates_tried = 1;
            cert.record("canonical numerators match", true);
            Some(BSElement::new(q, n, QFraction::zero(q))?)
        } else {
            None
        }
    } else {
        let modulus = BigInt::from(q).pow(s as u32) - BigInt::one();
        let mut found = None;
        for n in 0..s {
            stats.candidates_tried += 1;
            let rhs = q_frac.scale_by_base_pow(n).sub(&p)?;
            if let Some(f) = rhs.exact_divide(&modulus)? {
                // Divisibility identity f (q^s - 1) = q^n Q - P, exact.
                let ident = f.mul(&QFraction::new(q, modulus.clone(), 0)?)? == rhs;
                cert.record("f*(q^s-1) == q^n Q - P (exact)", ident);
                // Valuation inequality v0(f) >= min(v0 P, v0 Q + n).
                let vmin = p.v0().min(q_frac.v0().plus(n));
                cert.record("v0(f) >= min(v0 P, v0 Q + n)", f.v0() >= vmin);
                cert.record("witness shift in [0, s)", (0..s).contains(&n));
                found = Some(BSElement::new(q, n, f)?);
                break;
            }
        }
        found
    };

    let Some(witness) = witness else {
        let mut out = ConjugacyOutcome::not_conjugate(if s == 0 {
            "translation parts are not base-power multiples"
        } else {
            "q^s - 1 divides q^n Q - P for no shift class n"
        });
        out.stats = stats;
        return Ok(out);
    };

    let verified = cu.mul(&witness)? == witness.mul(&cv)? && u.mul(&witness)? == witness.mul(v)?;
    cert.record("u*w == w*v (exact)", verified);
    if inverted {
        cert.record("witness obtained from the inverted pair", true);
    }
    if !verified || !cert.all_hold() {
        return Err(Error::BoundViolation(format!(
            "bs witness failed an exact identity for u={u}, v={v}"
        )));
    }
    // Metric estimates only: upper bound for the witness, lower bounds for
    // the inputs; the linear bound constant is reported, not asserted.
    let ul = input_lower(u);
    let vl = input_lower(v);
    let wl = witness_upper(&witness);
    let mut lengths = LengthStats::with_witness(ul, vl, wl, None);
    lengths.bound_constant = Some(reference_bound_constant());
    Ok(ConjugacyOutcome {
        conjugate: true,
        witness: Some(witness),
        certificate: cert,
        lengths,
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(n: i64, f: &str) -> BSElement {
        BSElement::new(2, n, QFraction::parse(f, 2).unwrap()).unwrap()
    }

    #[test]
    fn multiplication_examples() {
        let g = el(2, "3/2^1");
        assert_eq!(BSElement::identity(2).mul(&g).unwrap(), g);
        // (1, 0)(0, 1) = (1, 2)
        assert_eq!(el(1, "0").mul(&el(0, "1")).unwrap(), el(1, "2"));
        assert!(g.mul(&g.inv()).unwrap().is_identity());
    }

    #[test]
    fn presentation_relation_holds() {
        // a b a^-1 = b^q
        let q = 3;
        let a = BSElement::gen_a(q);
        let b = BSElement::gen_b(q);
        let lhs = a.mul(&b).unwrap().mul(&a.inv()).unwrap();
        let mut bq = BSElement::identity(q);
        for _ in 0..q {
            bq = bq.mul(&b).unwrap();
        }
        assert_eq!(lhs, bq);
    }

    #[test]
    fn hyperbolic_distances() {
        assert!(hyp_dist((0.0, 1.0), (0.0, 1.0)).unwrap().abs() < 1e-15);
        // d(i, i + 2) = arccosh(3) ~ 1.7627
        let d = hyp_dist((0.0, 1.0), (2.0, 1.0)).unwrap();
        assert!((d - 3f64.acosh()).abs() < 1e-12);
        assert!((d - 1.762_747_174_039_086).abs() < 1e-9);
        // d(i, 2i) = log 2, cross-checked against arccosh(1.25)
        let d = hyp_dist((0.0, 1.0), (0.0, 2.0)).unwrap();
        assert!((d - 2f64.ln()).abs() < 1e-12);
        assert!((d - 1.25f64.acosh()).abs() < 1e-12);
        assert!(hyp_dist((0.0, 0.0), (0.0, 1.0)).is_err());
        // Rescaled: horosphere spacing becomes 1.
        let r = hyp_dist_rescaled((0.0, 1.0), (0.0, 2.0), 2).unwrap();
        assert!((r - 1.0).abs() < 1e-12);
    }

    #[test]
    fn length_bound_examples() {
        let e = length_bounds(&BSElement::identity(2));
        assert_eq!(e.exact, Some(0));
        assert!(e.lower.abs() < 1e-12 && e.upper.abs() < 1e-12);

        let e = length_bounds(&el(4, "0"));
        assert_eq!(e.exact, Some(4));

        // (0, 3/4): v0 = -2, lower includes 2, upper = d_hyp(i, i+3/4) + 4
        let e = length_bounds(&el(0, "3/2^2"));
        assert!(e.lower >= 2.0 - 1e-9);
        let expect = hyp_dist((0.0, 1.0), (0.75, 1.0)).unwrap() + 4.0;
        assert!((e.upper - expect).abs() < 1e-9);
        assert!(e.exact.is_none());
        assert!(e.lower <= e.upper);
    }

    #[test]
    fn conjugacy_examples() {
        // u = (1, 0), v = (1, 1): witness (0, 1)
        let out = conjugacy(&el(1, "0"), &el(1, "1")).unwrap();
        assert_eq!(out.witness.clone().unwrap(), el(0, "1"));
        // (1,0)(0,1) = (1,2) = (0,1)(1,1)
        assert_eq!(
            el(1, "0").mul(&el(0, "1")).unwrap(),
            el(0, "1").mul(&el(1, "1")).unwrap()
        );

        // u = (2, 0), v = (2, 1): 2^n/3 never lands in Z[1/2]
        let out = conjugacy(&el(2, "0"), &el(2, "1")).unwrap();
        assert!(!out.conjugate);

        // u = (0, 1), v = (0, 2): witness (-1, 0)
        let out = conjugacy(&el(0, "1"), &el(0, "2")).unwrap();
        let w = out.witness.unwrap();
        assert_eq!(w, el(-1, "0"));
        assert_eq!(el(0, "1").mul(&w).unwrap(), w.mul(&el(0, "2")).unwrap());
    }

    #[test]
    fn conjugacy_zero_shift_sign_matters() {
        // 1 and -1 have equal |numerator| but opposite sign: not conjugate.
        let out = conjugacy(&el(0, "1"), &el(0, "-1")).unwrap();
        assert!(!out.conjugate);
    }

    #[test]
    fn conjugacy_negative_shift_normalizes() {
        let u = el(-2, "3/2^1");
        let w = el(1, "5");
        let v = w.inv().mul(&u).unwrap().mul(&w).unwrap();
        let out = conjugacy(&u, &v).unwrap();
        assert!(out.conjugate);
        let found = out.witness.unwrap();
        assert_eq!(u.mul(&found).unwrap(), found.mul(&v).unwrap());
    }
}
