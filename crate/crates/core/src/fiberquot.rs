//! Fiber groups: surface groups modulo the monodromy orbits of powers of
//! vanishing cycles.
//!
//! Text format for [`FiberData`], one directive per line, `#` comments:
//!
//! ```text
//! genus: 2
//! punctured: false
//! monodromy: twist(a1), twist(b2)^-1
//! map: a1; b1 a1; a2; b2
//! cycle: a1 ^3 fiber=0
//! ```
//!
//! `map:` gives explicit generator images; such automorphisms are applied
//! without inverses during orbit closure. In `cycle:` the exponent must be a
//! separate `^N` token; `fiber=` defaults to 0.

use std::collections::{BTreeMap, HashSet};

use serde::Serialize;

use crate::burnside3::{B3Quotient, B3Structure};
use crate::fpgroup::{
    abelian_invariants, coset_enumerate, AbelianInvariants, EnumerationStatus, Presentation,
};
use crate::group::Group;
use crate::monodromy::{twist_automorphism, TwistAutomorphism};
use crate::nilpotent::UCGroup;
use crate::words::{surface_a, surface_b, surface_relator, Alphabet, CyclicWord, Word};
use crate::{Error, Result};

/// Automorphism of the surface group (or of the free group, for punctured fibers).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Automorphism {
    pub name: String,
    pub images: Vec<Word>,
    pub inverse_images: Option<Vec<Word>>,
}

impl From<TwistAutomorphism> for Automorphism {
    fn from(t: TwistAutomorphism) -> Self {
        Automorphism {
            name: format!("twist({})", t.curve),
            images: t.images,
            inverse_images: Some(t.inverse_images),
        }
    }
}

impl Automorphism {
    pub fn apply(&self, w: &Word) -> Result<Word> {
        w.apply_map(&self.images)
    }

    pub fn inverse(&self) -> Option<Automorphism> {
        let inv = self.inverse_images.clone()?;
        Some(Automorphism {
            name: format!("{}^-1", self.name),
            images: inv,
            inverse_images: Some(self.images.clone()),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VanishingCycle {
    pub word: Word,
    pub exponent: u64,
    pub fiber: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberData {
    pub genus: usize,
    pub monodromy: Vec<Automorphism>,
    pub cycles: Vec<VanishingCycle>,
    /// Work in the free group of rank `2g` (fiber minus a point) instead of `pi_g`.
    pub punctured: bool,
}

impl FiberData {
    pub fn new(
        genus: usize,
        monodromy: Vec<Automorphism>,
        cycles: Vec<VanishingCycle>,
        punctured: bool,
    ) -> Result<Self> {
        if genus == 0 {
            return Err(Error::InvalidArgument("genus must be positive".into()));
        }
        let rank = 2 * genus;
        let relator = surface_relator(genus)?;
        let target = relator.cyclic_normal_form(true);
        for m in &monodromy {
            if m.images.len() != rank || m.images.iter().any(|w| w.rank() != rank) {
                return Err(Error::RankMismatch {
                    expected: rank,
                    found: m.images.len(),
                });
            }
            if let Some(inv) = &m.inverse_images {
                let round_trip = (0..rank).all(|i| {
                    let x = Word::generator(rank, i).unwrap();
                    x.apply_map(&m.images)
                        .and_then(|y| y.apply_map(inv))
                        .is_ok_and(|y| y == x)
                });
                if !round_trip {
                    return Err(Error::InvalidArgument(format!(
                        "{}: inverse images do not invert",
                        m.name
                    )));
                }
            }
            if !punctured && m.apply(&relator)?.cyclic_normal_form(true) != target {
                return Err(Error::NotAdmissible {
                    name: m.name.clone(),
                });
            }
        }
        for c in &cycles {
            if c.word.rank() != rank {
                return Err(Error::RankMismatch {
                    expected: rank,
                    found: c.word.rank(),
                });
            }
            if c.word.is_identity() || c.exponent == 0 {
                return Err(Error::InvalidArgument(
                    "vanishing cycles must be nontrivial with positive exponent".into(),
                ));
            }
        }
        Ok(FiberData {
            genus,
            monodromy,
            cycles,
            punctured,
        })
    }

    pub fn rank(&self) -> usize {
        2 * self.genus
    }

    pub fn alphabet(&self) -> Alphabet {
        Alphabet::surface(self.genus)
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_with(text, |key, _| {
            Err(Error::Parse {
                pos: 0,
                msg: format!("unknown directive {key:?}"),
            })
        })
    }

    /// Parses the fiber directives and hands every other `key: value` line to `extra`.
    pub fn parse_with(text: &str, mut extra: impl FnMut(&str, &str) -> Result<()>) -> Result<Self> {
        let mut genus = None;
        let mut punctured = false;
        let mut monodromy_src = Vec::new();
        let mut maps = Vec::new();
        let mut cycle_src = Vec::new();
        for line in text.lines() {
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once(':').ok_or_else(|| Error::Parse {
                pos: 0,
                msg: format!("expected `key: value`, got {line:?}"),
            })?;
            let value = value.trim();
            match key.trim() {
                "genus" => {
                    genus = Some(
                        value
                            .parse::<usize>()
                            .map_err(|_| bad_value("genus", value))?,
                    );
                }
                "punctured" => {
                    punctured = value
                        .parse::<bool>()
                        .map_err(|_| bad_value("punctured", value))?
                }
                "monodromy" => monodromy_src.extend(value.split(',').map(|s| s.trim().to_string())),
                "map" => maps.push(value.to_string()),
                "cycle" => cycle_src.push(value.to_string()),
                other => extra(other, value)?,
            }
        }
        let genus = genus.ok_or_else(|| Error::Parse {
            pos: 0,
            msg: "missing `genus:`".into(),
        })?;
        let alphabet = Alphabet::surface(genus);
        let mut monodromy = Vec::new();
        for src in monodromy_src.iter().filter(|s| !s.is_empty()) {
            monodromy.push(parse_twist(genus, src)?);
        }
        for (k, src) in maps.iter().enumerate() {
            let images = src
                .split(';')
                .map(|w| alphabet.parse(w.trim()))
                .collect::<Result<Vec<_>>>()?;
            monodromy.push(Automorphism {
                name: format!("map{k}"),
                images,
                inverse_images: None,
            });
        }
        let cycles = cycle_src
            .iter()
            .map(|s| parse_cycle(&alphabet, s))
            .collect::<Result<Vec<_>>>()?;
        Self::new(genus, monodromy, cycles, punctured)
    }

    pub fn to_text(&self) -> String {
        let alphabet = self.alphabet();
        let mut out = format!("genus: {}\n", self.genus);
        if self.punctured {
            out.push_str("punctured: true\n");
        }
        for m in &self.monodromy {
            if m.name.starts_with("twist(") {
                out.push_str(&format!("monodromy: {}\n", m.name));
            } else {
                let images: Vec<String> = m.images.iter().map(|w| w.display(&alphabet)).collect();
                out.push_str(&format!("map: {}\n", images.join("; ")));
            }
        }
        for c in &self.cycles {
            out.push_str(&format!(
                "cycle: {} ^{} fiber={}\n",
                c.word.display(&alphabet),
                c.exponent,
                c.fiber
            ));
        }
        out
    }
}

fn bad_value(key: &str, value: &str) -> Error {
    Error::Parse {
        pos: 0,
        msg: format!("bad value for {key}: {value:?}"),
    }
}

/// `twist(a1)` or `twist(a1)^-1`.
fn parse_twist(genus: usize, src: &str) -> Result<Automorphism> {
    let (body, inverse) = match src.strip_suffix("^-1") {
        Some(b) => (b.trim(), true),
        None => (src, false),
    };
    let curve = body
        .strip_prefix("twist(")
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| bad_value("monodromy", src))?;
    let t: Automorphism = twist_automorphism(genus, curve.trim())?.into();
    Ok(if inverse { t.inverse().unwrap() } else { t })
}

fn parse_cycle(alphabet: &Alphabet, src: &str) -> Result<VanishingCycle> {
    let mut rest = src.trim();
    let mut fiber = 0;
    if let Some((head, tail)) = rest.rsplit_once(char::is_whitespace) {
        if let Some(id) = tail.strip_prefix("fiber=") {
            fiber = id.parse().map_err(|_| bad_value("fiber", id))?;
            rest = head.trim_end();
        }
    }
    let mut exponent = 1;
    if let Some((head, tail)) = rest.rsplit_once(char::is_whitespace) {
        if let Some(n) = tail.strip_prefix('^') {
            exponent = n.parse().map_err(|_| bad_value("cycle exponent", n))?;
            rest = head.trim_end();
        }
    }
    Ok(VanishingCycle {
        word: alphabet.parse(rest)?,
        exponent,
        fiber,
    })
}

/// `s^N` in cyclic normal form up to inversion.
pub fn local_relators(s: &Word, n: u64) -> CyclicWord {
    s.pow(n as i64).cyclic_normal_form(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitBounds {
    pub max_relators: usize,
    pub max_word_length: usize,
    pub max_depth: usize,
}

impl Default for OrbitBounds {
    fn default() -> Self {
        OrbitBounds {
            max_relators: 10_000,
            max_word_length: 512,
            max_depth: 32,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitClosure {
    /// Relators in discovery order.
    pub relators: Vec<CyclicWord>,
    /// A fixed point was reached within the bounds.
    pub exhausted: bool,
    pub depth: usize,
    pub bounds: OrbitBounds,
}

impl OrbitClosure {
    pub fn contains(&self, w: &Word) -> bool {
        let c = w.cyclic_normal_form(true);
        self.relators.contains(&c)
    }
}

/// Breadth-first closure of `{s_i^N_i}` under the monodromy generators and
/// their inverses, deduplicated by cyclic normal form up to inversion.
pub fn orbit_closure(data: &FiberData, bounds: OrbitBounds) -> OrbitClosure {
    let mut maps: Vec<Automorphism> = data.monodromy.clone();
    maps.extend(data.monodromy.iter().filter_map(Automorphism::inverse));
    let mut seen = HashSet::new();
    let mut relators = Vec::new();
    let mut truncated = false;
    for c in &data.cycles {
        let r = local_relators(&c.word, c.exponent);
        if seen.insert(r.clone()) {
            relators.push(r);
        }
    }
    let mut frontier = 0..relators.len();
    let mut depth = 0;
    while !frontier.is_empty() {
        if depth == bounds.max_depth {
            truncated = true;
            break;
        }
        depth += 1;
        let start = relators.len();
        'level: for k in frontier.clone() {
            for m in &maps {
                let img = m
                    .apply(relators[k].representative())
                    .expect("ranks checked on construction");
                let c = img.cyclic_normal_form(true);
                if seen.contains(&c) {
                    continue;
                }
                if c.len() > bounds.max_word_length {
                    truncated = true;
                    continue;
                }
                if relators.len() >= bounds.max_relators {
                    truncated = true;
                    break 'level;
                }
                seen.insert(c.clone());
                relators.push(c);
            }
        }
        frontier = start..relators.len();
        if truncated && relators.len() >= bounds.max_relators {
            break;
        }
    }
    OrbitClosure {
        relators,
        exhausted: !truncated,
        depth,
        bounds,
    }
}

/// The fiber group presentation: orbit relators, plus the surface relator unless punctured.
pub fn fiber_presentation(data: &FiberData, orbit: &OrbitClosure) -> Result<Presentation> {
    let mut rels: Vec<Word> = orbit
        .relators
        .iter()
        .map(|c| c.representative().clone())
        .collect();
    if !data.punctured {
        rels.push(surface_relator(data.genus)?);
    }
    Presentation::new(data.alphabet(), rels)
}

/// Multiplies the exponent of every cycle in fiber `f` by `multipliers[f]` (default 1).
pub fn base_change_rescale(
    data: &FiberData,
    multipliers: &BTreeMap<u32, u64>,
) -> Result<FiberData> {
    if let Some((f, _)) = multipliers.iter().find(|(_, &m)| m == 0) {
        return Err(Error::InvalidArgument(format!(
            "multiplier for fiber {f} must be positive"
        )));
    }
    let mut out = data.clone();
    for c in out.cycles.iter_mut() {
        c.exponent *= multipliers.get(&c.fiber).copied().unwrap_or(1);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HandleStabilization {
    pub genus: usize,
    pub new_genus: usize,
    pub crossings: usize,
    pub lifted: Vec<Word>,
    /// Standard generators `(a_j, b_j)` of each added handle, as words in `pi_h`.
    pub extra_cycles: Vec<(Word, Word)>,
}

/// Adds one handle per counted crossing so every relator word lifts to a word
/// that could be simple on a surface of higher genus.
///
/// The count is a deliberate over-estimate with no geometric minimization:
/// a syllable `x^e` contributes `|e| - 1` self-crossings, every repeated
/// syllable of the same generator within a word contributes one more, and each
/// pair of words contributes one mutual crossing per pair of syllables on
/// `a_t` and `b_t` (either order). The new handle letter `a_{g+c}` is inserted
/// at the position of crossing `c`, so killing the new generators recovers
/// the original words.
pub fn handle_stabilize(genus: usize, words: &[Word]) -> Result<HandleStabilization> {
    let rank = 2 * genus;
    if let Some(w) = words.iter().find(|w| w.rank() != rank) {
        return Err(Error::RankMismatch {
            expected: rank,
            found: w.rank(),
        });
    }
    if words.iter().any(Word::is_identity) {
        return Err(Error::InvalidArgument(
            "relator words must be nontrivial".into(),
        ));
    }
    // insertions[k][pos]: number of new handle letters before syllable `pos` of word k
    let mut insertions: Vec<Vec<usize>> =
        words.iter().map(|w| vec![0; w.syllables().len()]).collect();
    let mut inner: Vec<Vec<usize>> = insertions.clone();
    let mut crossings = 0;
    for (k, w) in words.iter().enumerate() {
        let mut seen = HashSet::new();
        for (pos, s) in w.syllables().iter().enumerate() {
            let extra = s.exp.unsigned_abs() as usize - 1;
            inner[k][pos] = extra;
            crossings += extra;
            if !seen.insert(s.gen) {
                insertions[k][pos] += 1;
                crossings += 1;
            }
        }
    }
    for i in 0..words.len() {
        for j in i + 1..words.len() {
            for s in words[i].syllables() {
                let partner = s.gen ^ 1;
                for (pos, t) in words[j].syllables().iter().enumerate() {
                    if t.gen == partner {
                        insertions[j][pos] += 1;
                        crossings += 1;
                    }
                }
            }
        }
    }
    let new_genus = genus + crossings;
    let new_rank = 2 * new_genus;
    let mut next = genus;
    let mut lifted = Vec::with_capacity(words.len());
    for (k, w) in words.iter().enumerate() {
        let mut letters = Vec::new();
        for (pos, s) in w.syllables().iter().enumerate() {
            for _ in 0..insertions[k][pos] {
                next += 1;
                letters.push((surface_a(next), 1));
            }
            let sign = s.exp.signum();
            letters.push((s.gen, sign));
            for _ in 0..inner[k][pos] {
                next += 1;
                letters.push((surface_a(next), 1));
                letters.push((s.gen, sign));
            }
        }
        lifted.push(Word::from_letters(new_rank, letters)?);
    }
    debug_assert_eq!(next, new_genus);
    let extra_cycles = (genus + 1..=new_genus)
        .map(|j| {
            (
                Word::generator(new_rank, surface_a(j)).unwrap(),
                Word::generator(new_rank, surface_b(j)).unwrap(),
            )
        })
        .collect();
    Ok(HandleStabilization {
        genus,
        new_genus,
        crossings,
        lifted,
        extra_cycles,
    })
}

/// Images for the retraction `pi_h -> pi_g` killing handles `g+1..=h`.
pub fn handle_retraction(genus: usize, new_genus: usize) -> Vec<Word> {
    let rank = 2 * genus;
    (0..2 * new_genus)
        .map(|i| {
            if i < rank {
                Word::generator(rank, i).unwrap()
            } else {
                Word::identity(rank)
            }
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Oracle {
    Abelian,
    Uc,
    Exp3,
    Enum,
}

impl std::str::FromStr for Oracle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "abelian" => Ok(Oracle::Abelian),
            "uc" => Ok(Oracle::Uc),
            "exp3" => Ok(Oracle::Exp3),
            "enum" => Ok(Oracle::Enum),
            other => Err(Error::InvalidArgument(format!("unknown oracle {other:?}"))),
        }
    }
}

/// A finite quotient of the fiber group and the orders of the cycle images in it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiniteQuotientReport {
    pub name: String,
    pub order: u128,
    pub cycle_image_orders: Vec<u64>,
    /// Every orbit relator maps to the identity, so the map factors through the fiber group.
    pub relators_trivial: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum QuotientVerdict {
    /// Coset enumeration completed; `order` bounds the fiber group from above.
    FiniteUpperEvidence {
        order: usize,
        orbit_exhausted: bool,
    },
    InfiniteWitness {
        description: String,
    },
    Unknown {
        bounds: OrbitBounds,
        max_cosets: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientAnalysis {
    pub orbit_size: usize,
    pub orbit_exhausted: bool,
    pub abelian: Option<AbelianInvariants>,
    pub quotients: Vec<FiniteQuotientReport>,
    /// Oracles that were requested but do not apply, with the reason.
    pub skipped: Vec<(Oracle, String)>,
    pub enumeration: Option<EnumerationStatus>,
    pub verdict: QuotientVerdict,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn quotient_report<G: Group>(
    name: String,
    group: &G,
    order: u128,
    image: impl Fn(&Word) -> G::Element,
    data: &FiberData,
    orbit: &OrbitClosure,
    limit: u64,
) -> FiniteQuotientReport {
    let cycle_image_orders = data
        .cycles
        .iter()
        .map(|c| group.element_order(&image(&c.word), limit).unwrap_or(0))
        .collect();
    let relators_trivial = orbit
        .relators
        .iter()
        .all(|r| group.is_identity(&image(r.representative())));
    FiniteQuotientReport {
        name,
        order,
        cycle_image_orders,
        relators_trivial,
    }
}

/// Runs the selected finite-quotient oracles on the orbit-closure presentation.
pub fn analyze_quotient(
    data: &FiberData,
    bounds: OrbitBounds,
    oracles: &[Oracle],
    max_cosets: usize,
) -> Result<QuotientAnalysis> {
    let orbit = orbit_closure(data, bounds);
    let presentation = fiber_presentation(data, &orbit)?;
    let mut abelian = None;
    let mut quotients = Vec::new();
    let mut skipped = Vec::new();
    let mut enumeration = None;
    for &oracle in oracles {
        match oracle {
            Oracle::Abelian => abelian = Some(abelian_invariants(&presentation)),
            Oracle::Uc => {
                let n = data.cycles.iter().fold(0, |acc, c| gcd(acc, c.exponent));
                match UCGroup::new(data.genus, n) {
                    Ok(g) => quotients.push(quotient_report(
                        format!("UC_{}^{}", data.genus, n),
                        &g,
                        g.order(),
                        |w| g.uc_from_word(w).unwrap(),
                        data,
                        &orbit,
                        n,
                    )),
                    Err(e) => skipped.push((oracle, e.to_string())),
                }
            }
            Oracle::Exp3 => {
                if data.cycles.iter().any(|c| c.exponent % 3 != 0) {
                    skipped.push((oracle, "some cycle exponent is not divisible by 3".into()));
                    continue;
                }
                let s = B3Structure::new(data.rank())?;
                let q = if data.punctured {
                    B3Quotient::new(s, &[])?
                } else {
                    let rel = s.b3_from_word(&surface_relator(data.genus)?)?;
                    B3Quotient::new(s, &[rel])?
                };
                let name = if data.punctured {
                    format!("B({},3)", data.rank())
                } else {
                    format!("B({},3)/<<surface relator>>", data.rank())
                };
                quotients.push(quotient_report(
                    name,
                    &q,
                    q.order(),
                    |w| q.from_word(w).unwrap(),
                    data,
                    &orbit,
                    3,
                ));
            }
            Oracle::Enum => {
                enumeration = Some(coset_enumerate(&presentation, &[], max_cosets).status())
            }
        }
    }
    let verdict = if let Some(EnumerationStatus::Complete { index }) = enumeration {
        QuotientVerdict::FiniteUpperEvidence {
            order: index,
            orbit_exhausted: orbit.exhausted,
        }
    } else if let Some(inv) = abelian
        .as_ref()
        .filter(|a| a.free_rank > 0 && orbit.exhausted)
    {
        QuotientVerdict::InfiniteWitness {
            description: format!("abelianization has free rank {}", inv.free_rank),
        }
    } else {
        QuotientVerdict::Unknown { bounds, max_cosets }
    };
    Ok(QuotientAnalysis {
        orbit_size: orbit.relators.len(),
        orbit_exhausted: orbit.exhausted,
        abelian,
        quotients,
        skipped,
        enumeration,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpgroup::DEFAULT_MAX_COSETS;

    fn torus_cycles(words: &[&str], n: u64) -> Vec<VanishingCycle> {
        let l = Alphabet::surface(1);
        words
            .iter()
            .map(|w| VanishingCycle {
                word: l.parse(w).unwrap(),
                exponent: n,
                fiber: 0,
            })
            .collect()
    }

    #[test]
    fn local_relator_examples() {
        let l = Alphabet::surface(2);
        let a = l.parse("a1").unwrap();
        assert_eq!(
            local_relators(&a, 3),
            l.parse("a1^3").unwrap().cyclic_normal_form(true)
        );
        let conj = a.conjugate_by(&l.parse("b2 a2").unwrap()).unwrap();
        assert_eq!(local_relators(&conj, 3), local_relators(&a, 3));
        let c = l.parse("[a1,b1]").unwrap();
        assert_eq!(local_relators(&c, 2), c.pow(2).cyclic_normal_form(true));
    }

    #[test]
    fn trivial_monodromy_orbit() {
        let data = FiberData::new(1, vec![], torus_cycles(&["a1", "b1"], 3), false).unwrap();
        let orbit = orbit_closure(&data, OrbitBounds::default());
        assert!(orbit.exhausted);
        assert_eq!(orbit.relators.len(), 2);
    }

    #[test]
    fn infinite_orbit_is_truncated() {
        let t = twist_automorphism(1, "a1").unwrap().into();
        let data = FiberData::new(1, vec![t], torus_cycles(&["b1"], 1), false).unwrap();
        for depth in [1, 5, 20] {
            let bounds = OrbitBounds {
                max_depth: depth,
                ..OrbitBounds::default()
            };
            let orbit = orbit_closure(&data, bounds);
            assert!(!orbit.exhausted);
            assert_eq!(orbit.relators.len(), 1 + 2 * depth);
        }
    }

    #[test]
    fn finite_orbit_is_exhausted() {
        // twist along a1 fixes a1
        let t = twist_automorphism(1, "a1").unwrap().into();
        let data = FiberData::new(1, vec![t], torus_cycles(&["a1"], 3), false).unwrap();
        let orbit = orbit_closure(&data, OrbitBounds::default());
        assert!(orbit.exhausted);
        assert_eq!(orbit.relators.len(), 1);
    }

    #[test]
    fn rejects_non_admissible_maps() {
        let l = Alphabet::surface(1);
        let bad = Automorphism {
            name: "swap".into(),
            images: vec![l.parse("a1").unwrap(), l.parse("a1").unwrap()],
            inverse_images: None,
        };
        assert!(matches!(
            FiberData::new(1, vec![bad.clone()], vec![], false),
            Err(Error::NotAdmissible { .. })
        ));
        assert!(FiberData::new(1, vec![bad], vec![], true).is_ok());
        assert!(FiberData::new(1, vec![], torus_cycles(&["1"], 3), false).is_err());
    }

    #[test]
    fn parse_round_trip() {
        let text = "genus: 2\nmonodromy: twist(a1), twist(b2)^-1\nmap: a1; b1; a2; b2\ncycle: a1 b1 ^3 fiber=1\ncycle: a2\n";
        let data = FiberData::parse(text).unwrap();
        assert_eq!(data.monodromy.len(), 3);
        assert_eq!(data.monodromy[1].name, "twist(b2)^-1");
        assert_eq!(data.cycles[0].exponent, 3);
        assert_eq!(data.cycles[0].fiber, 1);
        assert_eq!(data.cycles[1].exponent, 1);
        assert_eq!(FiberData::parse(&data.to_text()).unwrap(), data);
        assert!(FiberData::parse("genus: 1\nmonodromy: twist(c1)").is_err());
        assert!(FiberData::parse("cycle: a1").is_err());
        assert!(FiberData::parse("genus: 1\nfoo: bar").is_err());
    }

    #[test]
    fn rescale() {
        let mut cycles = torus_cycles(&["a1", "b1"], 3);
        cycles[1].fiber = 1;
        let data = FiberData::new(1, vec![], cycles, false).unwrap();
        assert_eq!(base_change_rescale(&data, &BTreeMap::new()).unwrap(), data);
        let r = base_change_rescale(&data, &BTreeMap::from([(0, 3)])).unwrap();
        assert_eq!((r.cycles[0].exponent, r.cycles[1].exponent), (9, 3));
        assert!(base_change_rescale(&data, &BTreeMap::from([(0, 0)])).is_err());
    }

    #[test]
    fn handle_stabilization_anchors() {
        let l = Alphabet::surface(1);
        let simple = handle_stabilize(1, &[l.parse("a1").unwrap()]).unwrap();
        assert_eq!((simple.new_genus, simple.extra_cycles.len()), (1, 0));
        assert_eq!(simple.lifted[0], l.parse("a1").unwrap());
        let k = l.parse("a1 b1 a1").unwrap();
        let st = handle_stabilize(1, std::slice::from_ref(&k)).unwrap();
        assert_eq!(st.new_genus, 2);
        assert_eq!(st.extra_cycles.len(), 1);
        let back = st.lifted[0]
            .apply_map(&handle_retraction(1, st.new_genus))
            .unwrap();
        assert_eq!(back, k);
        assert!(handle_stabilize(1, &[Word::identity(2)]).is_err());
    }

    #[test]
    fn analysis_examples() {
        let data = FiberData::new(1, vec![], torus_cycles(&["a1"], 3), false).unwrap();
        let a = analyze_quotient(&data, OrbitBounds::default(), &[Oracle::Uc], 1000).unwrap();
        assert_eq!(a.quotients[0].cycle_image_orders, vec![3]);
        assert!(a.quotients[0].relators_trivial);

        let data = FiberData::new(
            2,
            vec![],
            {
                let l = Alphabet::surface(2);
                ["a1", "b1", "a2", "b2"]
                    .iter()
                    .map(|w| VanishingCycle {
                        word: l.parse(w).unwrap(),
                        exponent: 5,
                        fiber: 0,
                    })
                    .collect()
            },
            false,
        )
        .unwrap();
        let a = analyze_quotient(&data, OrbitBounds::default(), &[Oracle::Abelian], 1000).unwrap();
        assert_eq!(a.abelian.unwrap().torsion, vec![5, 5, 5, 5]);

        // the surface relator is not redundant for the torus
        let cycles = torus_cycles(&["a1", "b1", "a1 b1", "a1 b1^2"], 3);
        let open = FiberData::new(1, vec![], cycles.clone(), true).unwrap();
        let closed = FiberData::new(1, vec![], cycles, false).unwrap();
        let oracles = [Oracle::Enum, Oracle::Exp3];
        let a =
            analyze_quotient(&open, OrbitBounds::default(), &oracles, DEFAULT_MAX_COSETS).unwrap();
        assert_eq!(
            a.verdict,
            QuotientVerdict::FiniteUpperEvidence {
                order: 27,
                orbit_exhausted: true
            }
        );
        assert_eq!(a.quotients[0].order, 27);
        let a = analyze_quotient(
            &closed,
            OrbitBounds::default(),
            &oracles,
            DEFAULT_MAX_COSETS,
        )
        .unwrap();
        assert_eq!(
            a.verdict,
            QuotientVerdict::FiniteUpperEvidence {
                order: 9,
                orbit_exhausted: true
            }
        );
        assert_eq!(a.quotients[0].order, 9);
    }

    #[test]
    fn infinite_abelianization_is_a_witness() {
        let data = FiberData::new(1, vec![], torus_cycles(&["a1"], 3), false).unwrap();
        let a = analyze_quotient(
            &data,
            OrbitBounds::default(),
            &[Oracle::Abelian, Oracle::Uc, Oracle::Exp3],
            10,
        )
        .unwrap();
        assert!(matches!(a.verdict, QuotientVerdict::InfiniteWitness { .. }));
        let data = FiberData::new(1, vec![], torus_cycles(&["a1"], 2), false).unwrap();
        let a = analyze_quotient(
            &data,
            OrbitBounds::default(),
            &[Oracle::Uc, Oracle::Exp3],
            10,
        )
        .unwrap();
        assert_eq!(a.skipped.len(), 2);
    }
}
