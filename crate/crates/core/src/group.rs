//! Group operations behind a common trait, so the breadth-first oracles and
//! the axiom property tests can run over every family uniformly.

use std::hash::Hash;

/// A group given by a context value (the modulus `q`, or a validated
/// presentation) acting on canonical-form elements.
///
/// Elements compare by canonical form, so `Eq + Hash` give exact
/// deduplication in BFS.
pub trait Group {
    type Elem: Clone + Eq + Hash;

    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;

    fn conjugate(&self, g: &Self::Elem, by: &Self::Elem) -> Self::Elem {
        let gi = self.inv(by);
        self.mul(&self.mul(&gi, g), by)
    }
}
