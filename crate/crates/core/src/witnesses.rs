//! Exact affine representations that certify infinite groups.
//!
//! Two constructions: the group generated by two quaternion rotations of
//! `R^4` with different centres, and the group generated by two rotations of
//! order 3 of the Eisenstein lattice `Z[w]` about `0` and `1`.

use std::collections::HashSet;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::Rational64;
use serde::Serialize;

use crate::group::Group;
use crate::words::Word;

fn r(n: i64) -> Rational64 {
    Rational64::from_integer(n)
}

/// Affine map `x -> A x + t` over the rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineMap {
    pub linear: Vec<Vec<Rational64>>,
    pub translation: Vec<Rational64>,
}

impl AffineMap {
    pub fn identity(dim: usize) -> Self {
        AffineMap {
            linear: (0..dim)
                .map(|i| (0..dim).map(|j| r((i == j) as i64)).collect())
                .collect(),
            translation: vec![r(0); dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.translation.len()
    }

    /// `x -> A (x - c) + c`.
    pub fn rotation_about(linear: Vec<Vec<Rational64>>, centre: &[Rational64]) -> Self {
        let ac: Vec<Rational64> = linear
            .iter()
            .map(|row| row.iter().zip(centre).map(|(a, c)| a * c).sum())
            .collect();
        let translation = centre.iter().zip(&ac).map(|(c, x)| c - x).collect();
        AffineMap {
            linear,
            translation,
        }
    }

    pub fn apply(&self, x: &[Rational64]) -> Vec<Rational64> {
        self.linear
            .iter()
            .zip(&self.translation)
            .map(|(row, t)| row.iter().zip(x).map(|(a, b)| a * b).sum::<Rational64>() + t)
            .collect()
    }

    /// `self o other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        let d = self.dim();
        let linear = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| (0..d).map(|k| self.linear[i][k] * other.linear[k][j]).sum())
                    .collect()
            })
            .collect();
        AffineMap {
            linear,
            translation: self.apply(&other.translation),
        }
    }

    /// Inverse; panics if the linear part is singular.
    pub fn inverse(&self) -> Self {
        let d = self.dim();
        let mut a: Vec<Vec<Rational64>> = self
            .linear
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .copied()
                    .chain((0..d).map(|j| r((i == j) as i64)))
                    .collect()
            })
            .collect();
        for col in 0..d {
            let p = (col..d)
                .find(|&i| a[i][col] != r(0))
                .expect("singular linear part");
            a.swap(col, p);
            let pivot = a[col][col];
            for x in a[col].iter_mut() {
                *x /= pivot;
            }
            for i in 0..d {
                if i != col && a[i][col] != r(0) {
                    let f = a[i][col];
                    let src = a[col].clone();
                    for (x, y) in a[i].iter_mut().zip(src) {
                        *x -= f * y;
                    }
                }
            }
        }
        let linear: Vec<Vec<Rational64>> = a.into_iter().map(|row| row[d..].to_vec()).collect();
        let lt: Vec<Rational64> = linear
            .iter()
            .map(|row| row.iter().zip(&self.translation).map(|(p, q)| p * q).sum())
            .collect();
        AffineMap {
            linear,
            translation: lt.into_iter().map(|x| -x).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.dim())
    }

    /// Linear part equal to the identity.
    pub fn is_translation(&self) -> bool {
        self.linear == Self::identity(self.dim()).linear
    }

    /// Linear part equal to `+1` or `-1`.
    pub fn linear_is_scalar_unit(&self) -> bool {
        let id = Self::identity(self.dim()).linear;
        let neg: Vec<Vec<Rational64>> = id
            .iter()
            .map(|row| row.iter().map(|x| -x).collect())
            .collect();
        self.linear == id || self.linear == neg
    }
}

/// The affine group of `Q^dim`.
#[derive(Clone, Copy, Debug)]
pub struct AffineGroup {
    pub dim: usize,
}

impl Group for AffineGroup {
    type Element = AffineMap;

    fn identity(&self) -> AffineMap {
        AffineMap::identity(self.dim)
    }

    fn multiply(&self, x: &AffineMap, y: &AffineMap) -> AffineMap {
        x.compose(y)
    }

    fn inverse(&self, x: &AffineMap) -> AffineMap {
        x.inverse()
    }
}

/// Quaternion `w + x i + y j + z k` with rational coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Quaternion(pub [Rational64; 4]);

impl Quaternion {
    pub fn unit(k: usize) -> Self {
        let mut c = [r(0); 4];
        c[k] = r(1);
        Quaternion(c)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let [a1, b1, c1, d1] = self.0;
        let [a2, b2, c2, d2] = o.0;
        Quaternion([
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        ])
    }

    /// Matrix of `x -> self * x` in the basis `1, i, j, k`.
    pub fn left_matrix(&self) -> Vec<Vec<Rational64>> {
        let cols: Vec<[Rational64; 4]> = (0..4).map(|k| self.mul(&Quaternion::unit(k)).0).collect();
        (0..4)
            .map(|row| (0..4).map(|col| cols[col][row]).collect())
            .collect()
    }
}

/// `g1` = left multiplication by `i` about `0`, `g2` = left multiplication by `j` about `1`.
pub fn quaternion_witness_group() -> (AffineGroup, [AffineMap; 2]) {
    let origin = [r(0); 4];
    let one = [r(1), r(0), r(0), r(0)];
    let g1 = AffineMap::rotation_about(Quaternion::unit(1).left_matrix(), &origin);
    let g2 = AffineMap::rotation_about(Quaternion::unit(2).left_matrix(), &one);
    (AffineGroup { dim: 4 }, [g1, g2])
}

/// Element of the Eisenstein integers `x + y w` with `w^2 + w + 1 = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Eisenstein {
    pub x: i64,
    pub y: i64,
}

impl Eisenstein {
    pub const ZERO: Eisenstein = Eisenstein { x: 0, y: 0 };
    pub const ONE: Eisenstein = Eisenstein { x: 1, y: 0 };
    pub const OMEGA: Eisenstein = Eisenstein { x: 0, y: 1 };

    /// `x^2 - xy + y^2`.
    pub fn norm(self) -> i64 {
        self.x * self.x - self.x * self.y + self.y * self.y
    }

    /// Inverse of a unit; `None` otherwise.
    pub fn unit_inverse(self) -> Option<Self> {
        if self.norm() != 1 {
            return None;
        }
        // conjugate of x + y w is (x - y) - y w
        Some(Eisenstein {
            x: self.x - self.y,
            y: -self.y,
        })
    }
}

impl Add for Eisenstein {
    type Output = Eisenstein;

    fn add(self, o: Self) -> Self {
        Eisenstein {
            x: self.x + o.x,
            y: self.y + o.y,
        }
    }
}

impl Sub for Eisenstein {
    type Output = Eisenstein;

    fn sub(self, o: Self) -> Self {
        self + -o
    }
}

impl Neg for Eisenstein {
    type Output = Eisenstein;

    fn neg(self) -> Self {
        Eisenstein {
            x: -self.x,
            y: -self.y,
        }
    }
}

impl Mul for Eisenstein {
    type Output = Eisenstein;

    fn mul(self, o: Self) -> Self {
        Eisenstein {
            x: self.x * o.x - self.y * o.y,
            y: self.x * o.y + self.y * o.x - self.y * o.y,
        }
    }
}

impl fmt::Display for Eisenstein {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:+}w", self.x, self.y)
    }
}

/// `z -> u z + t` with `u` a unit of `Z[w]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct EisensteinAffine {
    pub linear: Eisenstein,
    pub translation: Eisenstein,
}

impl EisensteinAffine {
    pub const IDENTITY: EisensteinAffine = EisensteinAffine {
        linear: Eisenstein::ONE,
        translation: Eisenstein::ZERO,
    };

    /// `z -> u (z - c) + c`.
    pub fn rotation_about(u: Eisenstein, c: Eisenstein) -> Self {
        EisensteinAffine {
            linear: u,
            translation: c - u * c,
        }
    }

    pub fn apply(&self, z: Eisenstein) -> Eisenstein {
        self.linear * z + self.translation
    }

    pub fn compose(&self, o: &Self) -> Self {
        EisensteinAffine {
            linear: self.linear * o.linear,
            translation: self.apply(o.translation),
        }
    }

    pub fn inverse(&self) -> Self {
        let u = self.linear.unit_inverse().expect("linear part is a unit");
        EisensteinAffine {
            linear: u,
            translation: -(u * self.translation),
        }
    }

    pub fn is_translation(&self) -> bool {
        self.linear == Eisenstein::ONE
    }
}

#[derive(Clone, Copy, Debug)]
pub struct EisensteinGroup;

impl Group for EisensteinGroup {
    type Element = EisensteinAffine;

    fn identity(&self) -> EisensteinAffine {
        EisensteinAffine::IDENTITY
    }

    fn multiply(&self, x: &EisensteinAffine, y: &EisensteinAffine) -> EisensteinAffine {
        x.compose(y)
    }

    fn inverse(&self, x: &EisensteinAffine) -> EisensteinAffine {
        x.inverse()
    }
}

/// `a` = multiplication by `w` about `0`, `b` = multiplication by `w` about `1`.
pub fn eisenstein_witness_group() -> (EisensteinGroup, [EisensteinAffine; 2]) {
    let a = EisensteinAffine::rotation_about(Eisenstein::OMEGA, Eisenstein::ZERO);
    let b = EisensteinAffine::rotation_about(Eisenstein::OMEGA, Eisenstein::ONE);
    (EisensteinGroup, [a, b])
}

/// Value of a word with generator `i` sent to `gens[i]`.
pub fn evaluate<G: Group>(group: &G, gens: &[G::Element], w: &Word) -> G::Element {
    let inverses: Vec<G::Element> = gens.iter().map(|g| group.inverse(g)).collect();
    w.letters().fold(group.identity(), |acc, (g, e)| {
        group.multiply(&acc, if e > 0 { &gens[g] } else { &inverses[g] })
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum RelatorVerdict {
    Pass { checked: usize },
    Fail { index: usize },
}

/// Substitutes `gens` into each relator and compares with the identity exactly.
pub fn verify_relators<G: Group>(
    group: &G,
    gens: &[G::Element],
    relators: &[Word],
) -> RelatorVerdict {
    for (index, w) in relators.iter().enumerate() {
        if !group.is_identity(&evaluate(group, gens, w)) {
            return RelatorVerdict::Fail { index };
        }
    }
    RelatorVerdict::Pass {
        checked: relators.len(),
    }
}

/// Distinct elements of word length at most `radius`, each with a shortest
/// word, in breadth-first order (letters tried as `x_0, x_0^-1, x_1, ...`).
pub fn ball<G: Group>(group: &G, gens: &[G::Element], radius: usize) -> Vec<(G::Element, Word)> {
    let n = gens.len();
    let letters: Vec<(usize, i64, G::Element)> = (0..n)
        .flat_map(|i| [(i, 1, gens[i].clone()), (i, -1, group.inverse(&gens[i]))])
        .collect();
    let mut seen = HashSet::new();
    seen.insert(group.identity());
    let mut out = vec![(group.identity(), Word::identity(n))];
    let mut frontier = 0..1;
    for _ in 0..radius {
        let start = out.len();
        for k in frontier.clone() {
            for (g, e, x) in &letters {
                let y = group.multiply(&out[k].0, x);
                if seen.insert(y.clone()) {
                    let w = out[k].1.mul(&Word::from_letters(n, [(*g, *e)]).unwrap());
                    out.push((y, w));
                }
            }
        }
        frontier = start..out.len();
    }
    out
}

/// Summary of the order sweep over a ball of the quaternion group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderSweep {
    pub radius: usize,
    pub elements: usize,
    /// Elements whose linear part is not `+1` or `-1`.
    pub checked: usize,
    /// Words of those elements whose order is not exactly 4.
    pub violations: Vec<Word>,
}

pub fn quaternion_order_sweep(radius: usize) -> OrderSweep {
    let (group, gens) = quaternion_witness_group();
    let elements = ball(&group, &gens, radius);
    let mut checked = 0;
    let mut violations = Vec::new();
    for (x, w) in &elements {
        if x.linear_is_scalar_unit() {
            continue;
        }
        checked += 1;
        if group.element_order(x, 4) != Some(4) {
            violations.push(w.clone());
        }
    }
    OrderSweep {
        radius,
        elements: elements.len(),
        checked,
        violations,
    }
}

/// Shortest element of the ball that is a nonzero translation, hence of infinite order.
pub fn quaternion_translation_witness(radius: usize) -> Option<(AffineMap, Word)> {
    let (group, gens) = quaternion_witness_group();
    ball(&group, &gens, radius)
        .into_iter()
        .find(|(x, _)| x.is_translation() && !x.is_identity())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::closure;
    use crate::words::Alphabet;

    #[test]
    fn quaternion_units() {
        let i = Quaternion::unit(1);
        let j = Quaternion::unit(2);
        assert_eq!(i.mul(&j), Quaternion::unit(3));
        assert_eq!(j.mul(&i), Quaternion([r(0), r(0), r(0), r(-1)]));
        assert_eq!(i.mul(&i), Quaternion([r(-1), r(0), r(0), r(0)]));
    }

    #[test]
    fn quaternion_generators_have_order_four() {
        let (g, [g1, g2]) = quaternion_witness_group();
        assert_eq!(g.element_order(&g1, 10), Some(4));
        assert_eq!(g.element_order(&g2, 10), Some(4));
        assert_eq!(
            g2.apply(&[r(1), r(0), r(0), r(0)]),
            vec![r(1), r(0), r(0), r(0)]
        );
        let l = Alphabet::letters(2);
        let rels = [l.parse("a^4").unwrap(), l.parse("b^4").unwrap()];
        assert_eq!(
            verify_relators(&g, &[g1, g2], &rels),
            RelatorVerdict::Pass { checked: 2 }
        );
    }

    #[test]
    fn linear_parts_form_q8() {
        let (_, [g1, g2]) = quaternion_witness_group();
        let lin = |m: &AffineMap| AffineMap {
            linear: m.linear.clone(),
            translation: vec![r(0); 4],
        };
        let q8 = closure(&AffineGroup { dim: 4 }, &[lin(&g1), lin(&g2)], 100).unwrap();
        assert_eq!(q8.len(), 8);
    }

    #[test]
    fn product_of_generators_has_finite_order() {
        // linear part k has no eigenvalue 1, so g1 g2 fixes a point
        let (g, [g1, g2]) = quaternion_witness_group();
        let p = g.multiply(&g1, &g2);
        assert_eq!(g.element_order(&p, 10), Some(4));
    }

    #[test]
    fn translation_witness() {
        let (g, _) = quaternion_witness_group();
        let (x, w) = quaternion_translation_witness(6).unwrap();
        assert_eq!(w.len(), 4);
        assert!(x.is_translation());
        assert!(!g.is_identity(&g.power(&x, 1000)));
    }

    #[test]
    fn affine_inverse() {
        let (g, [g1, g2]) = quaternion_witness_group();
        let x = g.multiply(&g1, &g.multiply(&g2, &g2));
        assert!(g.multiply(&x, &x.inverse()).is_identity());
    }

    #[test]
    fn eisenstein_relators() {
        let (g, gens) = eisenstein_witness_group();
        let l = Alphabet::letters(2);
        let rels: Vec<Word> = ["a^3", "b^3", "(ab)^3"]
            .iter()
            .map(|s| l.parse(s).unwrap())
            .collect();
        assert_eq!(
            verify_relators(&g, &gens, &rels),
            RelatorVerdict::Pass { checked: 3 }
        );
        let extra = [l.parse("(ab^2)^3").unwrap()];
        assert_eq!(
            verify_relators(&g, &gens, &extra),
            RelatorVerdict::Fail { index: 0 }
        );
        let c = evaluate(&g, &gens, &l.parse("[a,b]").unwrap());
        assert!(c.is_translation());
        assert_ne!(c.translation, Eisenstein::ZERO);
        assert_eq!(
            Eisenstein::OMEGA * Eisenstein::OMEGA,
            Eisenstein { x: -1, y: -1 }
        );
    }
}
