//! Conjugacy verdicts with witnesses, exactness certificates and search
//! statistics, shared by all three group families.

use serde::Serialize;

/// Result of a conjugacy query.
///
/// When `witness` is present the equation `u * witness = witness * v` has
/// been re-verified with exact arithmetic at construction time; the
/// certificate records that check and any family-specific identities.
#[derive(Debug, Clone)]
pub struct ConjugacyOutcome<E> {
    pub conjugate: bool,
    pub witness: Option<E>,
    pub certificate: Certificate,
    pub lengths: LengthStats,
    pub stats: SearchStats,
}

impl<E> ConjugacyOutcome<E> {
    pub fn not_conjugate(reason: &str) -> Self {
        ConjugacyOutcome {
            conjugate: false,
            witness: None,
            certificate: Certificate::refuted(reason),
            lengths: LengthStats::default(),
            stats: SearchStats::default(),
        }
    }
}

/// Named exact identities checked while producing the outcome.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Certificate {
    pub checks: Vec<CheckedIdentity>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckedIdentity {
    pub name: String,
    pub held: bool,
}

impl Certificate {
    pub fn refuted(reason: &str) -> Certificate {
        Certificate {
            checks: vec![CheckedIdentity {
                name: format!("refutation: {reason}"),
                held: true,
            }],
        }
    }

    pub fn record(&mut self, name: impl Into<String>, held: bool) {
        self.checks.push(CheckedIdentity {
            name: name.into(),
            held,
        });
    }

    /// True when every recorded identity held.
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.held)
    }
}

/// Word lengths (exact) or metric estimates (bounds) of the inputs and the
/// witness, for bound auditing.
#[derive(Debug, Clone, Default, Serialize)]
pub struct LengthStats {
    pub u_len: f64,
    pub v_len: f64,
    pub witness_len: Option<f64>,
    /// `witness_len / (u_len + v_len)`, `0` when the denominator vanishes.
    pub ratio: Option<f64>,
    /// Constant of the linear conjugator bound, when one is asserted.
    pub bound_constant: Option<f64>,
    pub within_bound: Option<bool>,
}

impl LengthStats {
    pub fn with_witness(u_len: f64, v_len: f64, witness_len: f64, constant: Option<f64>) -> Self {
        let denom = u_len + v_len;
        let ratio = if denom > 0.0 {
            witness_len / denom
        } else {
            0.0
        };
        let within = constant.map(|c| witness_len <= c * denom + 1e-12);
        LengthStats {
            u_len,
            v_len,
            witness_len: Some(witness_len),
            ratio: Some(ratio),
            bound_constant: constant,
            within_bound: within,
        }
    }
}

/// How much searching the decision took.
#[derive(Debug, Clone, Default, Serialize)]
pub struct SearchStats {
    pub candidates_tried: u64,
    /// Per-coordinate windows or box edges explored, family-specific.
    pub windows: Vec<i64>,
    /// Volume of the enumerated candidate box, when applicable.
    pub box_volume: Option<u128>,
}
