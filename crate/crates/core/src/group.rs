//! Minimal interface shared by the concrete finite groups in this crate.

use std::collections::HashSet;
use std::hash::Hash;

/// A group whose elements are plain values.
pub trait Group {
    type Element: Clone + Eq + Hash;

    fn identity(&self) -> Self::Element;
    fn multiply(&self, x: &Self::Element, y: &Self::Element) -> Self::Element;
    fn inverse(&self, x: &Self::Element) -> Self::Element;

    fn is_identity(&self, x: &Self::Element) -> bool {
        *x == self.identity()
    }

    /// `x y x^-1 y^-1`.
    fn commutator(&self, x: &Self::Element, y: &Self::Element) -> Self::Element {
        let xy = self.multiply(x, y);
        let yx = self.multiply(y, x);
        self.multiply(&xy, &self.inverse(&yx))
    }

    fn power(&self, x: &Self::Element, k: i64) -> Self::Element {
        let base = if k < 0 { self.inverse(x) } else { x.clone() };
        let mut out = self.identity();
        for _ in 0..k.unsigned_abs() {
            out = self.multiply(&out, &base);
        }
        out
    }

    /// Order of `x`, or `None` if it exceeds `limit`.
    fn element_order(&self, x: &Self::Element, limit: u64) -> Option<u64> {
        let mut y = x.clone();
        for k in 1..=limit {
            if self.is_identity(&y) {
                return Some(k);
            }
            y = self.multiply(&y, x);
        }
        None
    }
}

/// Breadth-first closure of `generators` under right multiplication.
///
/// Stops early and returns `None` once more than `limit` elements are seen.
pub fn closure<G: Group>(
    group: &G,
    generators: &[G::Element],
    limit: usize,
) -> Option<HashSet<G::Element>> {
    let mut seen = HashSet::new();
    let id = group.identity();
    seen.insert(id.clone());
    let mut frontier = vec![id];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for x in &frontier {
            for g in generators {
                let y = group.multiply(x, g);
                if seen.insert(y.clone()) {
                    if seen.len() > limit {
                        return None;
                    }
                    next.push(y);
                }
            }
        }
        frontier = next;
    }
    Some(seen)
}
