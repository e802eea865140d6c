//! Finitely presented groups.
//!
//! Text format, one directive per line, `#` starts a comment:
//!
//! ```text
//! gens: a b
//! rels: a^3 b^3 (a b)^3
//! ```
//!
//! A `rels:` line holds relators separated by top-level commas, or by
//! top-level whitespace when there is no comma; several `rels:` lines
//! accumulate.

mod regular;
mod smith;
mod todd_coxeter;

use serde::Serialize;

pub use regular::CosetGroup;
pub use smith::smith_diagonal;
pub use todd_coxeter::{coset_enumerate, CosetTable, EnumerationStats, EnumerationStatus};

use crate::words::{Alphabet, CyclicWord, Word};
use crate::{Error, Result};

/// Default coset limit for enumerations.
pub const DEFAULT_MAX_COSETS: usize = 1_000_000;

#[derive(Clone, Debug)]
pub struct Presentation {
    alphabet: Alphabet,
    relators: Vec<CyclicWord>,
}

impl Presentation {
    /// Relators are cyclically reduced; trivial ones and duplicates (up to
    /// rotation and inversion) are dropped. An empty list presents a free group.
    pub fn new(alphabet: Alphabet, relators: impl IntoIterator<Item = Word>) -> Result<Self> {
        let rank = alphabet.rank();
        if rank == 0 {
            return Err(Error::InvalidArgument(
                "presentation needs at least one generator".into(),
            ));
        }
        let mut rels: Vec<CyclicWord> = Vec::new();
        for r in relators {
            if r.rank() != rank {
                return Err(Error::RankMismatch {
                    expected: rank,
                    found: r.rank(),
                });
            }
            let c = r.cyclic_normal_form(true);
            if !c.is_empty() && !rels.contains(&c) {
                rels.push(c);
            }
        }
        Ok(Presentation {
            alphabet,
            relators: rels,
        })
    }

    pub fn free(alphabet: Alphabet) -> Result<Self> {
        Self::new(alphabet, [])
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut alphabet = None;
        let mut rel_src = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (key, rest) = line.split_once(':').ok_or_else(|| Error::Parse {
                pos: lineno + 1,
                msg: format!("expected `key: value`, got {line:?}"),
            })?;
            match key.trim() {
                "gens" => {
                    let names: Vec<&str> = rest
                        .split(|c: char| c.is_whitespace() || c == ',')
                        .filter(|s| !s.is_empty())
                        .collect();
                    alphabet = Some(Alphabet::custom(&names)?);
                }
                "rels" => rel_src.push(rest.to_string()),
                other => {
                    return Err(Error::Parse {
                        pos: lineno + 1,
                        msg: format!("unknown directive {other:?}"),
                    });
                }
            }
        }
        let alphabet = alphabet.ok_or_else(|| Error::Parse {
            pos: 0,
            msg: "missing `gens:` line".into(),
        })?;
        let mut rels = Vec::new();
        for src in &rel_src {
            rels.extend(alphabet.parse_list(src)?);
        }
        Self::new(alphabet, rels)
    }

    pub fn rank(&self) -> usize {
        self.alphabet.rank()
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn relators(&self) -> &[CyclicWord] {
        &self.relators
    }

    pub fn is_free(&self) -> bool {
        self.relators.is_empty()
    }

    /// Same generators with extra relators appended.
    pub fn with_relators(&self, extra: impl IntoIterator<Item = Word>) -> Result<Self> {
        let all = self
            .relators
            .iter()
            .map(|r| r.representative().clone())
            .chain(extra);
        Self::new(self.alphabet.clone(), all)
    }

    pub fn to_text(&self) -> String {
        let rels: Vec<String> = self
            .relators
            .iter()
            .map(|r| r.representative().display(&self.alphabet))
            .collect();
        format!(
            "gens: {}\nrels: {}\n",
            self.alphabet.names().join(" "),
            rels.join(", ")
        )
    }

    /// Exponent-sum matrix, one row per relator.
    pub fn relation_matrix(&self) -> Vec<Vec<i64>> {
        self.relators
            .iter()
            .map(|r| r.representative().abelianize_vector())
            .collect()
    }
}

/// `Z^free_rank + Z/d_1 + ... + Z/d_k` with `d_1 | ... | d_k`, all `d_i > 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    pub torsion: Vec<u64>,
}

impl AbelianInvariants {
    /// Order of the abelianization when finite.
    pub fn order(&self) -> Option<u128> {
        (self.free_rank == 0).then(|| self.torsion.iter().map(|&d| d as u128).product())
    }
}

pub fn abelian_invariants(p: &Presentation) -> AbelianInvariants {
    let m = p.relation_matrix();
    let diag = if m.is_empty() {
        Vec::new()
    } else {
        smith_diagonal(&m)
    };
    let nonzero = diag.iter().filter(|&&d| d != 0).count();
    AbelianInvariants {
        free_rank: p.rank() - nonzero,
        torsion: diag.iter().filter(|&&d| d > 1).map(|&d| d as u64).collect(),
    }
}

/// Order of the group: enumeration over the trivial subgroup.
pub fn group_order(p: &Presentation, max_cosets: usize) -> EnumerationStatus {
    coset_enumerate(p, &[], max_cosets).status()
}

/// Curated families of primitive elements whose `m`-th powers are imposed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrimitiveFamily {
    /// The generators.
    Basic,
    /// Adds `x_i x_j` and `x_i x_j^-1` for `i < j`.
    Pairs,
    /// Adds, for `i < j < k`, both cyclic orders `x_i x_j x_k^{±1}` and
    /// `x_i x_k x_j^{±1}`. With `m = 3` and `n = 3` the single order alone
    /// presents a group of order `3^9`; both orders are needed to reach `B(3, 3)`.
    Triples,
}

impl std::str::FromStr for PrimitiveFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "basic" => Ok(PrimitiveFamily::Basic),
            "pairs" => Ok(PrimitiveFamily::Pairs),
            "triples" => Ok(PrimitiveFamily::Triples),
            other => Err(Error::UnknownFamily(other.to_string())),
        }
    }
}

/// The primitive words of `family` in the free group of rank `n`, in a fixed order.
pub fn primitive_family(n: usize, family: PrimitiveFamily) -> Vec<Word> {
    let gen = |i: usize, e: i64| (i, e);
    let mut out: Vec<Word> = (0..n)
        .map(|i| Word::from_letters(n, [gen(i, 1)]).unwrap())
        .collect();
    if matches!(family, PrimitiveFamily::Pairs | PrimitiveFamily::Triples) {
        for i in 0..n {
            for j in i + 1..n {
                for e in [1, -1] {
                    out.push(Word::from_letters(n, [gen(i, 1), gen(j, e)]).unwrap());
                }
            }
        }
    }
    if family == PrimitiveFamily::Triples {
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    for e in [1, -1] {
                        out.push(Word::from_letters(n, [gen(i, 1), gen(j, 1), gen(k, e)]).unwrap());
                    }
                    for e in [1, -1] {
                        out.push(Word::from_letters(n, [gen(i, 1), gen(k, 1), gen(j, e)]).unwrap());
                    }
                }
            }
        }
    }
    out
}

/// `x^m` for `x` in the selected primitive family, as cyclic words.
pub fn bt_relators(n: usize, m: i64, family: PrimitiveFamily) -> Result<Vec<CyclicWord>> {
    if n == 0 || m < 2 {
        return Err(Error::InvalidArgument(format!(
            "need n >= 1 and m >= 2, got n = {n}, m = {m}"
        )));
    }
    Ok(primitive_family(n, family)
        .iter()
        .map(|x| x.pow(m).cyclic_normal_form(true))
        .collect())
}

/// Presentation with the `bt_relators` family on letters `a, b, c, ...`.
pub fn bt_presentation(n: usize, m: i64, family: PrimitiveFamily) -> Result<Presentation> {
    let rels = bt_relators(n, m, family)?;
    Presentation::new(
        Alphabet::letters(n),
        rels.into_iter().map(|c| c.representative().clone()),
    )
}

/// `<a, b | a^3, b^3, (ab)^3>`, an infinite group.
pub fn g1_presentation() -> Presentation {
    Presentation::parse("gens: a b\nrels: a^3, b^3, (a b)^3").unwrap()
}

/// `<a, b | a^3, b^3, (ab)^3, (ab^2)^3>`, which is `B(2, 3)`.
pub fn g2_presentation() -> Presentation {
    Presentation::parse("gens: a b\nrels: a^3, b^3, (a b)^3, (a b^2)^3").unwrap()
}

/// Words `a^i b^j [a, b]^k` for the elements of `B(2, 3)` outside the
/// nontrivial centre, plus the identity; exponents are taken in `{0, 1, -1}`.
pub fn b23_noncentral_words() -> Vec<Word> {
    let alphabet = Alphabet::letters(2);
    let a = alphabet.parse("a").unwrap();
    let b = alphabet.parse("b").unwrap();
    let c = a.commutator(&b).unwrap();
    let mut out = Vec::new();
    for i in [0, 1, -1] {
        for j in [0, 1, -1] {
            for k in [0, 1, -1] {
                if i == 0 && j == 0 && k != 0 {
                    continue;
                }
                out.push(a.pow(i).mul(&b.pow(j)).mul(&c.pow(k)));
            }
        }
    }
    out
}

/// Exponent-3 quotient of the free group on `a, b, r` built from the
/// two-generator Burnside group on `a, b` by adjoining `r` with
/// `(w r)^3 = 1` for every word `w` of [`b23_noncentral_words`].
///
/// The subgroup `<a, b>` maps onto `B(2, 3)` and has index `|T|`, the order of
/// the normal closure of `r`.
pub fn pg33_presentation() -> Presentation {
    let alphabet = Alphabet::custom(&["a", "b", "r"]).unwrap();
    let mut rels: Vec<Word> = ["a^3", "b^3", "(a b)^3", "(a b^-1)^3"]
        .iter()
        .map(|s| alphabet.parse(s).unwrap())
        .collect();
    let r = alphabet.parse("r").unwrap();
    for w in b23_noncentral_words() {
        let w = w.embed(3).unwrap();
        rels.push(w.mul(&r).pow(3));
    }
    Presentation::new(alphabet, rels).unwrap()
}
