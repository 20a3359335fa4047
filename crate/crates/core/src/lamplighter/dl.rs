//! The Diestel-Leader graph `DL_2(q)` as the horocyclic product of two
//! `(q+1)`-regular trees, with the lamplighter action and the exact graph
//! metric.
//!
//! Vertices of each tree are identified with closed ultrametric balls of
//! Laurent series.  A ball of radius `q^-n` in `Z_q((t))` consists of all
//! series agreeing at exponents `< n`, so a first-tree vertex at horocycle
//! level `n` is determined by a finitely supported series truncated to
//! exponents `< n`.  The second tree reads series in `Z_q((t^-1))`; its
//! vertex at level `m` carries the exponents `>= -m`.  A point of the
//! horocyclic product is a pair of vertices whose levels sum to zero, and
//! the coefficient split `< n` / `>= n` consumes each lamp coefficient
//! exactly once.
//!
//! NOTE: the ball-faithful truncation (`< level` on the first tree) is the
//! convention under which the generator moves of the affine lamplighter
//! representation are graph edges; [`distance`] below is certified against
//! breadth-first search in the acceptance suite.

use crate::exactnum::{ExtInt, LaurentPoly};
use crate::{Error, Result};

use super::LLElement;

/// Which tree factor a vertex belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    First,
    Second,
}

/// Vertex of one tree factor: a horocycle level plus the ball data.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DLVertex {
    side: Side,
    level: i64,
    trunc: LaurentPoly,
}

impl DLVertex {
    /// First-tree vertex for the ball `B(f, q^-level)`; `f` is truncated to
    /// the exponents `< level` that determine the ball.
    pub fn first_from_ball(f: &LaurentPoly, level: i64) -> DLVertex {
        DLVertex {
            side: Side::First,
            level,
            trunc: f.truncate_below(level),
        }
    }

    /// Second-tree vertex at horocycle level `level` for the series `f`,
    /// truncated to the exponents `>= -level` that determine it.
    pub fn second_from_series(f: &LaurentPoly, level: i64) -> DLVertex {
        DLVertex {
            side: Side::Second,
            level,
            trunc: f.truncate_at_or_above(-level),
        }
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn level(&self) -> i64 {
        self.level
    }

    pub fn series(&self) -> &LaurentPoly {
        &self.trunc
    }

    pub fn q(&self) -> u64 {
        self.trunc.modulus()
    }

    /// Image under the affine element `g = (s, P)`: the ball map
    /// `B(f, q^-n) -> B(P + t^s f, q^-n-s)` on the first tree and its
    /// `Z_q((t^-1))` mirror on the second.
    pub fn acted_by(&self, g: &LLElement) -> Result<DLVertex> {
        if g.q() != self.q() {
            return Err(Error::ModulusMismatch(g.q(), self.q()));
        }
        let moved = g.lamps().add(&self.trunc.shifted(g.shift()))?;
        Ok(match self.side {
            Side::First => DLVertex {
                side: Side::First,
                level: self.level + g.shift(),
                trunc: moved.truncate_below(self.level + g.shift()),
            },
            Side::Second => DLVertex {
                side: Side::Second,
                level: self.level - g.shift(),
                trunc: moved.truncate_at_or_above(-(self.level - g.shift())),
            },
        })
    }

    /// Horocycle level of the greatest common ancestor with `other`.
    fn ancestor_level(&self, other: &DLVertex) -> Result<i64> {
        if self.side != other.side {
            return Err(Error::InvalidArgument(
                "vertices lie in different tree factors".into(),
            ));
        }
        if self.q() != other.q() {
            return Err(Error::ModulusMismatch(self.q(), other.q()));
        }
        let diff = self.trunc.sub(&other.trunc)?;
        let shared = self.level.min(other.level);
        Ok(match self.side {
            // Data at level j is the truncation below j; rays agree at j
            // exactly when the difference has valuation >= j.
            Side::First => match diff.v0() {
                ExtInt::PosInf => shared,
                ExtInt::Fin(v) => shared.min(v),
                ExtInt::NegInf => unreachable!("v0 is never -inf"),
            },
            // Mirrored: data at level j is the truncation at exponents
            // >= -j, so agreement needs v0_minus(diff) <= -j - 1.
            Side::Second => match diff.v0_minus() {
                ExtInt::NegInf => shared,
                ExtInt::Fin(w) => shared.min(-w - 1),
                ExtInt::PosInf => unreachable!("v0_minus is never +inf"),
            },
        })
    }

    /// Graph distance within this tree factor.
    pub fn tree_distance(&self, other: &DLVertex) -> Result<u64> {
        let a = self.ancestor_level(other)?;
        Ok(((self.level - a) + (other.level - a)) as u64)
    }
}

/// Point of `DL_2(q)`: one vertex in each tree, levels summing to zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DLPoint {
    first: DLVertex,
    second: DLVertex,
}

impl DLPoint {
    pub fn new(first: DLVertex, second: DLVertex) -> Result<DLPoint> {
        if first.side != Side::First || second.side != Side::Second {
            return Err(Error::InvalidArgument("vertex sides mixed up".into()));
        }
        if first.q() != second.q() {
            return Err(Error::ModulusMismatch(first.q(), second.q()));
        }
        if first.level + second.level != 0 {
            return Err(Error::InvalidArgument(format!(
                "horocycle levels must sum to zero, got {} + {}",
                first.level, second.level
            )));
        }
        Ok(DLPoint { first, second })
    }

    /// The base point `(B(0, q^0), B^-(0, q^-1))`.
    pub fn basepoint(q: u64) -> DLPoint {
        let zero = LaurentPoly::zero(q);
        DLPoint {
            first: DLVertex::first_from_ball(&zero, 0),
            second: DLVertex::second_from_series(&zero, 0),
        }
    }

    pub fn first(&self) -> &DLVertex {
        &self.first
    }

    pub fn second(&self) -> &DLVertex {
        &self.second
    }

    pub fn q(&self) -> u64 {
        self.first.q()
    }
}

/// Left action of the lamplighter on `DL_2(q)`.
pub fn action(g: &LLElement, p: &DLPoint) -> Result<DLPoint> {
    let first = p.first.acted_by(g)?;
    let second = p.second.acted_by(g)?;
    debug_assert_eq!(first.level + second.level, 0);
    Ok(DLPoint { first, second })
}

/// Graph distance in `DL_2(q)`.
///
/// Each edge moves one tree down a level and the other up, so a path
/// realizes a tree-path pair whose level profiles mirror each other; the
/// cheapest interleaving costs the two tree distances minus the shared net
/// level change.
pub fn distance(p1: &DLPoint, p2: &DLPoint) -> Result<u64> {
    if p1.q() != p2.q() {
        return Err(Error::ModulusMismatch(p1.q(), p2.q()));
    }
    let d1 = p1.first.tree_distance(&p2.first)?;
    let d2 = p1.second.tree_distance(&p2.second)?;
    let dlevel = (p2.first.level - p1.first.level).unsigned_abs();
    Ok(d1 + d2 - dlevel)
}
