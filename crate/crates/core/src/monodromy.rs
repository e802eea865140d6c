//! Homology monodromy of vanishing cycles and standard Dehn twists.
//!
//! Homology uses the basis `a_1, b_1, ..., a_g, b_g` with intersection pairing
//! `(a_i, b_i) = 1 = -(b_i, a_i)`. The transvection of a class `s` is
//! `D x = x - (x, s) s`; this fixes the orientation convention once for the
//! whole crate. The word-level twists below abelianize to exactly these
//! transvections.

use std::fmt;

use rand::Rng;
use serde::Serialize;

use crate::words::{surface_a, surface_b, surface_relator, Word};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct HomologyClass {
    pub g: usize,
    pub coords: Vec<i64>,
}

impl HomologyClass {
    pub fn zero(g: usize) -> Self {
        HomologyClass {
            g,
            coords: vec![0; 2 * g],
        }
    }

    pub fn new(coords: Vec<i64>) -> Result<Self> {
        if coords.is_empty() || !coords.len().is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "homology vector of length {}",
                coords.len()
            )));
        }
        Ok(HomologyClass {
            g: coords.len() / 2,
            coords,
        })
    }

    /// `a_i` or `b_i` (1-based), by name.
    pub fn standard(g: usize, name: &str) -> Result<Self> {
        let index = standard_curve_index(g, name)?;
        let mut h = Self::zero(g);
        h.coords[index] = 1;
        Ok(h)
    }

    /// The class of a word in the surface group of genus `g`.
    pub fn of_word(w: &Word) -> Result<Self> {
        Self::new(w.abelianize_vector())
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&x| x == 0)
    }
}

/// Generator index of the standard curve `a_i` / `b_i`.
fn standard_curve_index(g: usize, name: &str) -> Result<usize> {
    let unsupported = || Error::UnsupportedCurve(name.to_string());
    let (kind, num) = name.split_at(name.char_indices().nth(1).map_or(name.len(), |(i, _)| i));
    let i: usize = num.parse().map_err(|_| unsupported())?;
    if i == 0 || i > g {
        return Err(unsupported());
    }
    match kind {
        "a" => Ok(surface_a(i)),
        "b" => Ok(surface_b(i)),
        _ => Err(unsupported()),
    }
}

pub fn pairing(x: &HomologyClass, y: &HomologyClass) -> Result<i64> {
    if x.coords.len() != y.coords.len() {
        return Err(Error::RankMismatch {
            expected: x.coords.len(),
            found: y.coords.len(),
        });
    }
    Ok(x.coords
        .chunks(2)
        .zip(y.coords.chunks(2))
        .map(|(p, q)| p[0] * q[1] - p[1] * q[0])
        .sum())
}

/// Integer `2g x 2g` matrix acting on column vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct MonodromyMatrix {
    pub g: usize,
    pub m: Vec<Vec<i64>>,
}

impl MonodromyMatrix {
    pub fn identity(g: usize) -> Self {
        let d = 2 * g;
        MonodromyMatrix {
            g,
            m: (0..d)
                .map(|i| (0..d).map(|j| (i == j) as i64).collect())
                .collect(),
        }
    }

    /// The standard pairing matrix `J` with `x^T J y = (x, y)`.
    pub fn pairing_matrix(g: usize) -> Self {
        let mut j = Self::identity(g);
        for row in j.m.iter_mut() {
            row.fill(0);
        }
        for i in 0..g {
            j.m[2 * i][2 * i + 1] = 1;
            j.m[2 * i + 1][2 * i] = -1;
        }
        j
    }

    pub fn dim(&self) -> usize {
        2 * self.g
    }

    pub fn multiply(&self, other: &Self) -> Self {
        let d = self.dim();
        let m = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| (0..d).map(|k| self.m[i][k] * other.m[k][j]).sum())
                    .collect()
            })
            .collect();
        MonodromyMatrix { g: self.g, m }
    }

    pub fn power(&self, n: u32) -> Self {
        (0..n).fold(Self::identity(self.g), |acc, _| acc.multiply(self))
    }

    pub fn transpose(&self) -> Self {
        let d = self.dim();
        MonodromyMatrix {
            g: self.g,
            m: (0..d)
                .map(|i| (0..d).map(|j| self.m[j][i]).collect())
                .collect(),
        }
    }

    pub fn apply(&self, x: &HomologyClass) -> HomologyClass {
        let coords = self
            .m
            .iter()
            .map(|row| row.iter().zip(&x.coords).map(|(a, b)| a * b).sum())
            .collect();
        HomologyClass { g: self.g, coords }
    }

    /// `1 - self`.
    pub fn one_minus(&self) -> Self {
        let mut out = self.clone();
        for (i, row) in out.m.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = (i == j) as i64 - *x;
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.m.iter().flatten().all(|&x| x == 0)
    }

    /// `m^T J m = J`.
    pub fn is_symplectic(&self) -> bool {
        let j = Self::pairing_matrix(self.g);
        self.transpose().multiply(&j).multiply(self) == j
    }

    /// `(1 - m)^2 = 0`.
    pub fn is_unipotent_of_step_two(&self) -> bool {
        let n = self.one_minus();
        n.multiply(&n).is_zero()
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        let mut a: Vec<Vec<i128>> = self
            .m
            .iter()
            .map(|r| r.iter().map(|&x| x as i128).collect())
            .collect();
        let (rows, cols) = (a.len(), self.dim());
        let mut rank = 0;
        for col in 0..cols {
            let Some(p) = (rank..rows).find(|&i| a[i][col] != 0) else {
                continue;
            };
            a.swap(rank, p);
            for i in rank + 1..rows {
                let (f, pivot) = (a[i][col], a[rank][col]);
                if f != 0 {
                    for j in 0..cols {
                        a[i][j] = a[i][j] * pivot - a[rank][j] * f;
                    }
                }
            }
            rank += 1;
        }
        rank
    }
}

impl fmt::Display for MonodromyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.m {
            let cells: Vec<String> = row.iter().map(i64::to_string).collect();
            writeln!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

/// `D x = x - (x, s) s`.
pub fn transvection(s: &HomologyClass) -> MonodromyMatrix {
    let d = 2 * s.g;
    let mut out = MonodromyMatrix::identity(s.g);
    for k in 0..d {
        let mut e = HomologyClass::zero(s.g);
        e.coords[k] = 1;
        let c = pairing(&e, s).unwrap();
        for r in 0..d {
            out.m[r][k] -= c * s.coords[r];
        }
    }
    out
}

/// Product of the transvections of pairwise non-intersecting cycles.
///
/// Only the algebraic condition (all pairings zero) can be checked here;
/// geometric disjointness is up to the caller.
pub fn disjoint_product(cycles: &[HomologyClass]) -> Result<MonodromyMatrix> {
    let Some(first) = cycles.first() else {
        return Err(Error::InvalidArgument("no cycles".into()));
    };
    for (i, s) in cycles.iter().enumerate() {
        for (j, t) in cycles.iter().enumerate().skip(i + 1) {
            let p = pairing(s, t)?;
            if p != 0 {
                return Err(Error::NotDisjoint { i, j, pairing: p });
            }
        }
    }
    Ok(cycles
        .iter()
        .fold(MonodromyMatrix::identity(first.g), |acc, s| {
            acc.multiply(&transvection(s))
        }))
}

/// Entries reduced into `0..n`.
pub fn mod_n_action(t: &MonodromyMatrix, n: u64) -> Result<Vec<Vec<u64>>> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("modulus {n} < 2")));
    }
    Ok(t.m
        .iter()
        .map(|row| row.iter().map(|&x| x.rem_euclid(n as i64) as u64).collect())
        .collect())
}

pub fn is_identity_mod(rows: &[Vec<u64>]) -> bool {
    rows.iter()
        .enumerate()
        .all(|(i, row)| row.iter().enumerate().all(|(j, &x)| x == (i == j) as u64))
}

/// Random classes of pairwise disjoint curves: images of some of the `a_i`
/// (possibly repeated, as parallel copies) under a random symplectic matrix,
/// plus occasionally a zero class standing for a separating cycle.
pub fn random_disjoint_classes<R: Rng + ?Sized>(g: usize, rng: &mut R) -> Vec<HomologyClass> {
    let mut s = MonodromyMatrix::identity(g);
    for _ in 0..rng.gen_range(1..=g + 1) {
        let v = HomologyClass {
            g,
            coords: (0..2 * g).map(|_| rng.gen_range(-1..=1)).collect(),
        };
        s = s.multiply(&transvection(&v));
    }
    let mut out = Vec::new();
    for i in 1..=g {
        if rng.gen_bool(0.6) {
            let a = HomologyClass::standard(g, &format!("a{i}")).unwrap();
            let img = s.apply(&a);
            if rng.gen_bool(0.2) {
                out.push(img.clone());
            }
            out.push(img);
        }
    }
    if out.is_empty() || rng.gen_bool(0.2) {
        out.push(HomologyClass::zero(g));
    }
    out
}

/// Automorphism of the surface group given by generator images.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwistAutomorphism {
    pub g: usize,
    pub curve: String,
    pub images: Vec<Word>,
    pub inverse_images: Vec<Word>,
}

/// The standard Dehn twist along `a_i` or `b_i`.
///
/// Along `a_i`: `b_i -> b_i a_i`. Along `b_i`: `a_i -> a_i b_i^-1`. Both fix
/// the surface relator letter for letter and abelianize to [`transvection`]
/// of the curve's class.
pub fn twist_automorphism(g: usize, curve: &str) -> Result<TwistAutomorphism> {
    let k = standard_curve_index(g, curve)?;
    let rank = 2 * g;
    let gens: Vec<Word> = (0..rank)
        .map(|i| Word::generator(rank, i).unwrap())
        .collect();
    let mut images = gens.clone();
    let mut inverse_images = gens.clone();
    if k % 2 == 0 {
        let (a, b) = (k, k + 1);
        images[b] = gens[b].mul(&gens[a]);
        inverse_images[b] = gens[b].mul(&gens[a].inverse());
    } else {
        let (a, b) = (k - 1, k);
        images[a] = gens[a].mul(&gens[b].inverse());
        inverse_images[a] = gens[a].mul(&gens[b]);
    }
    Ok(TwistAutomorphism {
        g,
        curve: curve.to_string(),
        images,
        inverse_images,
    })
}

impl TwistAutomorphism {
    /// The same automorphism with images and inverse images swapped.
    pub fn inverse(&self) -> Self {
        TwistAutomorphism {
            g: self.g,
            curve: format!("{}^-1", self.curve),
            images: self.inverse_images.clone(),
            inverse_images: self.images.clone(),
        }
    }

    pub fn apply(&self, w: &Word) -> Result<Word> {
        w.apply_map(&self.images)
    }

    pub fn apply_inverse(&self, w: &Word) -> Result<Word> {
        w.apply_map(&self.inverse_images)
    }

    /// Matrix whose column `k` is the class of the image of generator `k`.
    pub fn abelianized_matrix(&self) -> MonodromyMatrix {
        let d = 2 * self.g;
        let cols: Vec<Vec<i64>> = self.images.iter().map(Word::abelianize_vector).collect();
        MonodromyMatrix {
            g: self.g,
            m: (0..d)
                .map(|r| (0..d).map(|c| cols[c][r]).collect())
                .collect(),
        }
    }

    /// The surface relator maps to a conjugate of itself.
    pub fn preserves_relator(&self) -> bool {
        let r = surface_relator(self.g).unwrap();
        self.apply(&r)
            .is_ok_and(|img| img.cyclic_normal_form(false) == r.cyclic_normal_form(false))
    }
}

/// All standard twists `a_1, b_1, ..., a_g, b_g`.
pub fn standard_twists(g: usize) -> Vec<TwistAutomorphism> {
    (1..=g)
        .flat_map(|i| [format!("a{i}"), format!("b{i}")])
        .map(|c| twist_automorphism(g, &c).unwrap())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::Alphabet;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn pairing_normalization() {
        let a = HomologyClass::standard(2, "a1").unwrap();
        let b = HomologyClass::standard(2, "b1").unwrap();
        assert_eq!(pairing(&a, &b).unwrap(), 1);
        assert_eq!(pairing(&b, &a).unwrap(), -1);
        assert_eq!(pairing(&a, &a).unwrap(), 0);
        assert!(pairing(&a, &HomologyClass::zero(1)).is_err());
        assert!(HomologyClass::standard(2, "a3").is_err());
        assert!(HomologyClass::standard(2, "c1").is_err());
    }

    #[test]
    fn transvection_examples() {
        assert_eq!(
            transvection(&HomologyClass::zero(2)),
            MonodromyMatrix::identity(2)
        );
        let a = HomologyClass::standard(1, "a1").unwrap();
        let b = HomologyClass::standard(1, "b1").unwrap();
        let d = transvection(&a);
        assert_eq!(d.apply(&b).coords, vec![1, 1]);
        assert_eq!(d.apply(&a), a);
        assert!(d.is_symplectic());
        assert_eq!(d.one_minus().rank(), 1);
    }

    #[test]
    fn disjoint_products() {
        let a1 = HomologyClass::standard(2, "a1").unwrap();
        let a2 = HomologyClass::standard(2, "a2").unwrap();
        let b1 = HomologyClass::standard(2, "b1").unwrap();
        let t = disjoint_product(&[a1.clone(), a2.clone()]).unwrap();
        assert_eq!(t, disjoint_product(&[a2, a1.clone()]).unwrap());
        let twice = disjoint_product(&[a1.clone(), a1.clone()]).unwrap();
        assert!(twice.is_unipotent_of_step_two());
        assert_eq!(twice.one_minus().apply(&b1).coords, vec![-2, 0, 0, 0]);
        assert!(matches!(
            disjoint_product(&[a1, b1]),
            Err(Error::NotDisjoint {
                i: 0,
                j: 1,
                pairing: 1
            })
        ));
    }

    #[test]
    fn mod_n_examples() {
        assert!(mod_n_action(&MonodromyMatrix::identity(1), 1).is_err());
        assert!(is_identity_mod(
            &mod_n_action(&MonodromyMatrix::identity(2), 3).unwrap()
        ));
        let d = transvection(&HomologyClass::new(vec![1, 1, 0, 1]).unwrap());
        assert!(is_identity_mod(&mod_n_action(&d.power(2), 2).unwrap()));
        assert!(!is_identity_mod(&mod_n_action(&d, 2).unwrap()));
    }

    #[test]
    fn twist_examples() {
        let l = Alphabet::surface(1);
        let t = twist_automorphism(1, "a1").unwrap();
        assert_eq!(
            t.apply(&l.parse("b1").unwrap()).unwrap(),
            l.parse("b1 a1").unwrap()
        );
        assert_eq!(
            t.abelianized_matrix(),
            transvection(&HomologyClass::standard(1, "a1").unwrap())
        );
        assert!(twist_automorphism(1, "a2").is_err());
        for g in 1..=3 {
            for t in standard_twists(g) {
                assert!(t.preserves_relator(), "{}", t.curve);
                assert!(t.inverse().preserves_relator());
            }
        }
    }

    #[test]
    fn twist_inverse_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for t in standard_twists(2) {
            for _ in 0..100 {
                let w = Word::random(4, 12, &mut rng);
                assert_eq!(t.apply_inverse(&t.apply(&w).unwrap()).unwrap(), w);
                assert_eq!(t.apply(&t.apply_inverse(&w).unwrap()).unwrap(), w);
            }
        }
    }

    #[test]
    fn random_classes_are_disjoint() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for g in 1..=4 {
            for _ in 0..50 {
                assert!(disjoint_product(&random_disjoint_classes(g, &mut rng)).is_ok());
            }
        }
    }
}
