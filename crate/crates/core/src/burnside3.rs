//! Normal forms in the free Burnside group `B(n, 3)`.
//!
//! `B(n, 3)` is metabelian of class at most 3. Every element is written
//! uniquely as
//!
//! ```text
//! x_1^l_1 ... x_n^l_n  *  prod_{i<j} c_ij^q_ij  *  prod_{i<j<k} d_ijk^t_ijk
//! ```
//!
//! with exponents in `{0, 1, 2}`, where `c_ij = [x_i, x_j]` and
//! `d_ijk = [c_ij, x_k]` (commutators are `[u, v] = u v u^-1 v^-1`). The `c`s
//! commute with each other, the `d`s are central, and `[c_ij, x_k]` is the
//! alternating function of `(i, j, k)`: `d` of the sorted triple raised to the
//! sign of the sorting permutation, and trivial on repeated indices.
//!
//! Collection uses two rules. Moving `x_k` left past `c^q` produces
//! `prod [c_ij, x_k]^q_ij`. Moving `x_k` left past `x_m^a` (`m > k`) gives
//! `x_k x_m^a c_km^-a`, and carrying those `c_km^-a` right past later
//! `x_m'^b` adds `d_km m'^-ab`.

use rand::seq::index::sample;
use rand::Rng;
use serde::Serialize;

use crate::group::Group;
use crate::words::{Alphabet, Word};
use crate::{Error, Result};

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// `n + C(n,2) + C(n,3)`, the base-3 logarithm of the order of `B(n, 3)`.
pub fn b3_log3_order(n: usize) -> usize {
    n + binom(n, 2) + binom(n, 3)
}

/// `3^(n + C(n,2) + C(n,3))`, saturating at `u128::MAX` from `n = 8` on.
pub fn b3_order(n: usize) -> u128 {
    3u128.saturating_pow(b3_log3_order(n) as u32)
}

/// Element of `B(n, 3)` in collected form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct B3Element {
    pub n: usize,
    pub lin: Vec<u8>,
    pub quad: Vec<u8>,
    pub cub: Vec<u8>,
}

impl B3Element {
    pub fn is_identity(&self) -> bool {
        self.lin
            .iter()
            .chain(&self.quad)
            .chain(&self.cub)
            .all(|&x| x == 0)
    }

    /// Coordinates of the derived subgroup part, `quad` followed by `cub`.
    fn derived_coords(&self) -> Vec<u8> {
        self.quad.iter().chain(&self.cub).copied().collect()
    }
}

/// Index tables and collection data for a fixed rank.
#[derive(Clone, Debug)]
pub struct B3Structure {
    n: usize,
    pairs: Vec<(usize, usize)>,
    triples: Vec<(usize, usize, usize)>,
    pair_index: Vec<usize>,
    triple_index: Vec<usize>,
    /// `[c_pair, x_k]` as `(triple, sign)`; `None` on repeated indices.
    commutator_table: Vec<Option<(usize, u8)>>,
}

impl B3Structure {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > 26 {
            return Err(Error::InvalidArgument(format!(
                "rank {n} out of range 1..=26"
            )));
        }
        let mut pairs = Vec::new();
        let mut pair_index = vec![usize::MAX; n * n];
        for i in 0..n {
            for j in i + 1..n {
                pair_index[i * n + j] = pairs.len();
                pairs.push((i, j));
            }
        }
        let mut triples = Vec::new();
        let mut triple_index = vec![usize::MAX; n * n * n];
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    triple_index[(i * n + j) * n + k] = triples.len();
                    triples.push((i, j, k));
                }
            }
        }
        let mut commutator_table = Vec::with_capacity(pairs.len() * n);
        for &(i, j) in &pairs {
            for k in 0..n {
                commutator_table.push(if k == i || k == j {
                    None
                } else {
                    // sign of the permutation sorting (i, j, k), with i < j
                    let (t, sign) = if k > j {
                        ((i, j, k), 1)
                    } else if k < i {
                        ((k, i, j), 1)
                    } else {
                        ((i, k, j), 2)
                    };
                    Some((triple_index[(t.0 * n + t.1) * n + t.2], sign))
                });
            }
        }
        Ok(B3Structure {
            n,
            pairs,
            triples,
            pair_index,
            triple_index,
            commutator_table,
        })
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> u128 {
        b3_order(self.n)
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn triples(&self) -> &[(usize, usize, usize)] {
        &self.triples
    }

    pub fn pair(&self, i: usize, j: usize) -> usize {
        self.pair_index[i * self.n + j]
    }

    pub fn triple(&self, i: usize, j: usize, k: usize) -> usize {
        self.triple_index[(i * self.n + j) * self.n + k]
    }

    pub fn identity_element(&self) -> B3Element {
        B3Element {
            n: self.n,
            lin: vec![0; self.n],
            quad: vec![0; self.pairs.len()],
            cub: vec![0; self.triples.len()],
        }
    }

    pub fn generator(&self, i: usize) -> B3Element {
        let mut e = self.identity_element();
        e.lin[i] = 1;
        e
    }

    /// `c_ij` for `i < j`.
    pub fn quad_basis(&self, i: usize, j: usize) -> B3Element {
        let mut e = self.identity_element();
        e.quad[self.pair(i, j)] = 1;
        e
    }

    /// `d_ijk` for `i < j < k`.
    pub fn cub_basis(&self, i: usize, j: usize, k: usize) -> B3Element {
        let mut e = self.identity_element();
        e.cub[self.triple(i, j, k)] = 1;
        e
    }

    /// Right multiplication by `x_k` in place.
    fn mul_gen(&self, e: &mut B3Element, k: usize) {
        let n = self.n;
        for (p, &q) in e.quad.iter().enumerate() {
            if q != 0 {
                if let Some((t, sign)) = self.commutator_table[p * n + k] {
                    e.cub[t] = (e.cub[t] + sign * q) % 3;
                }
            }
        }
        for m in k + 1..n {
            let a = e.lin[m];
            if a == 0 {
                continue;
            }
            let p = self.pair(k, m);
            e.quad[p] = (e.quad[p] + 3 - a) % 3;
            for m2 in m + 1..n {
                let b = e.lin[m2];
                if b != 0 {
                    let t = self.triple(k, m, m2);
                    e.cub[t] = (e.cub[t] + 9 - a * b) % 3;
                }
            }
        }
        e.lin[k] = (e.lin[k] + 1) % 3;
    }

    fn check(&self, e: &B3Element) -> Result<()> {
        if e.n != self.n {
            return Err(Error::RankMismatch {
                expected: self.n,
                found: e.n,
            });
        }
        Ok(())
    }

    pub fn b3_multiply(&self, u: &B3Element, v: &B3Element) -> Result<B3Element> {
        self.check(u)?;
        self.check(v)?;
        let mut out = u.clone();
        for (k, &a) in v.lin.iter().enumerate() {
            for _ in 0..a {
                self.mul_gen(&mut out, k);
            }
        }
        for (x, &y) in out.quad.iter_mut().zip(&v.quad) {
            *x = (*x + y) % 3;
        }
        for (x, &y) in out.cub.iter_mut().zip(&v.cub) {
            *x = (*x + y) % 3;
        }
        Ok(out)
    }

    /// Image of a word in the free group of rank `n`.
    pub fn b3_from_word(&self, w: &Word) -> Result<B3Element> {
        if w.rank() != self.n {
            return Err(Error::RankMismatch {
                expected: self.n,
                found: w.rank(),
            });
        }
        let mut e = self.identity_element();
        for s in w.syllables() {
            for _ in 0..s.exp.rem_euclid(3) {
                self.mul_gen(&mut e, s.gen);
            }
        }
        Ok(e)
    }

    /// A word whose image is `e`, following the collected form.
    pub fn normal_form_word(&self, e: &B3Element) -> Word {
        let n = self.n;
        let x = |i: usize| Word::generator(n, i).unwrap();
        let exp = |a: u8| if a == 2 { -1 } else { a as i64 };
        let mut w = Word::identity(n);
        for (i, &a) in e.lin.iter().enumerate() {
            w = w.mul(&x(i).pow(exp(a)));
        }
        for (p, &(i, j)) in self.pairs.iter().enumerate() {
            let c = x(i).commutator(&x(j)).unwrap();
            w = w.mul(&c.pow(exp(e.quad[p])));
        }
        for (t, &(i, j, k)) in self.triples.iter().enumerate() {
            let d = x(i).commutator(&x(j)).unwrap().commutator(&x(k)).unwrap();
            w = w.mul(&d.pow(exp(e.cub[t])));
        }
        w
    }

    /// Uniformly random element.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> B3Element {
        let mut e = self.identity_element();
        for x in e
            .lin
            .iter_mut()
            .chain(e.quad.iter_mut())
            .chain(e.cub.iter_mut())
        {
            *x = rng.gen_range(0..3);
        }
        e
    }

    /// Formats an element as `lin | quad | cub` digit strings.
    pub fn format(&self, e: &B3Element) -> String {
        let digits = |v: &[u8]| v.iter().map(|d| char::from(b'0' + d)).collect::<String>();
        format!("{}|{}|{}", digits(&e.lin), digits(&e.quad), digits(&e.cub))
    }

    pub fn alphabet(&self) -> Alphabet {
        Alphabet::letters(self.n)
    }
}

impl Group for B3Structure {
    type Element = B3Element;

    fn identity(&self) -> B3Element {
        self.identity_element()
    }

    fn multiply(&self, x: &B3Element, y: &B3Element) -> B3Element {
        self.b3_multiply(x, y).expect("rank mismatch")
    }

    /// Exponent 3: `x^-1 = x^2`.
    fn inverse(&self, x: &B3Element) -> B3Element {
        self.multiply(x, x)
    }
}

/// Quotient of `B(n, 3)` by the normal closure of elements of the derived subgroup.
///
/// The derived subgroup is elementary abelian with coordinates `(quad, cub)`,
/// and the normal closure of `z` is spanned by `z` and the central elements
/// `[z, x_k]`, so the quotient is handled by row reduction over `F_3`.
#[derive(Clone, Debug)]
pub struct B3Quotient {
    structure: B3Structure,
    /// Reduced basis of the kernel, each with its pivot column.
    basis: Vec<(usize, Vec<u8>)>,
}

impl B3Quotient {
    pub fn new(structure: B3Structure, normal_generators: &[B3Element]) -> Result<Self> {
        let mut q = B3Quotient {
            structure,
            basis: Vec::new(),
        };
        for z in normal_generators {
            q.structure.check(z)?;
            if z.lin.iter().any(|&x| x != 0) {
                return Err(Error::InvalidArgument(
                    "normal generator must lie in the derived subgroup".into(),
                ));
            }
            q.insert(z.derived_coords());
            for k in 0..q.structure.n {
                let x = q.structure.generator(k);
                let s = &q.structure;
                let comm = s.multiply(
                    &s.multiply(z, &x),
                    &s.multiply(&s.inverse(z), &s.inverse(&x)),
                );
                q.insert(comm.derived_coords());
            }
        }
        Ok(q)
    }

    /// The full group `B(n, 3)`.
    pub fn full(n: usize) -> Result<Self> {
        Self::new(B3Structure::new(n)?, &[])
    }

    /// `B(n, 3)` modulo its derived subgroup, i.e. `(Z/3)^n`.
    pub fn abelian(n: usize) -> Result<Self> {
        let s = B3Structure::new(n)?;
        let gens: Vec<B3Element> = s.pairs().iter().map(|&(i, j)| s.quad_basis(i, j)).collect();
        Self::new(s, &gens)
    }

    fn reduce_coords(&self, v: &mut [u8]) {
        for (pivot, row) in &self.basis {
            let f = v[*pivot];
            if f != 0 {
                for (x, &r) in v.iter_mut().zip(row) {
                    *x = (*x + 3 * 3 - f * r) % 3;
                }
            }
        }
    }

    fn insert(&mut self, mut v: Vec<u8>) {
        self.reduce_coords(&mut v);
        let Some(pivot) = v.iter().position(|&x| x != 0) else {
            return;
        };
        if v[pivot] == 2 {
            for x in v.iter_mut() {
                *x = (*x * 2) % 3;
            }
        }
        for (_, row) in self.basis.iter_mut() {
            let f = row[pivot];
            if f != 0 {
                for (x, &r) in row.iter_mut().zip(&v) {
                    *x = (*x + 9 - f * r) % 3;
                }
            }
        }
        self.basis.push((pivot, v));
    }

    pub fn structure(&self) -> &B3Structure {
        &self.structure
    }

    pub fn kernel_dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn order(&self) -> u128 {
        self.structure.order() / 3u128.pow(self.basis.len() as u32)
    }

    /// Canonical coset representative.
    pub fn reduce(&self, e: &B3Element) -> B3Element {
        let mut v = e.derived_coords();
        self.reduce_coords(&mut v);
        let nq = e.quad.len();
        B3Element {
            n: e.n,
            lin: e.lin.clone(),
            quad: v[..nq].to_vec(),
            cub: v[nq..].to_vec(),
        }
    }

    pub fn from_word(&self, w: &Word) -> Result<B3Element> {
        Ok(self.reduce(&self.structure.b3_from_word(w)?))
    }

    pub fn generator(&self, i: usize) -> B3Element {
        self.structure.generator(i)
    }
}

impl Group for B3Quotient {
    type Element = B3Element;

    fn identity(&self) -> B3Element {
        self.structure.identity_element()
    }

    fn multiply(&self, x: &B3Element, y: &B3Element) -> B3Element {
        self.reduce(&self.structure.multiply(x, y))
    }

    fn inverse(&self, x: &B3Element) -> B3Element {
        self.multiply(x, x)
    }
}

/// Result of [`four_subset_exponent_check`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ExponentVerdict {
    Pass {
        samples: usize,
    },
    /// `word` is over the generator list (generator `i` is letter `i`).
    Fail {
        subset: Vec<usize>,
        word: Word,
    },
}

/// Randomized test that every 4-generated subgroup has exponent 3.
///
/// Draws `samples` random subsets of at most four generators and a random
/// reduced product of length `1..=max_len` in each; reports the first product
/// whose cube is nontrivial.
pub fn four_subset_exponent_check<G: Group, R: Rng + ?Sized>(
    group: &G,
    generators: &[G::Element],
    samples: usize,
    max_len: usize,
    rng: &mut R,
) -> ExponentVerdict {
    let n = generators.len();
    if n == 0 {
        return ExponentVerdict::Pass { samples: 0 };
    }
    let inverses: Vec<G::Element> = generators.iter().map(|g| group.inverse(g)).collect();
    for _ in 0..samples {
        let mut subset = sample(rng, n, n.min(4)).into_vec();
        subset.sort_unstable();
        let len = rng.gen_range(1..=max_len.max(1));
        let local = Word::random(subset.len(), len, rng);
        let mut x = group.identity();
        for (g, e) in local.letters() {
            let h = if e > 0 {
                &generators[subset[g]]
            } else {
                &inverses[subset[g]]
            };
            x = group.multiply(&x, h);
        }
        let cube = group.multiply(&group.multiply(&x, &x), &x);
        if !group.is_identity(&cube) {
            let word = Word::from_letters(n, local.letters().map(|(g, e)| (subset[g], e))).unwrap();
            return ExponentVerdict::Fail { subset, word };
        }
    }
    ExponentVerdict::Pass { samples }
}
