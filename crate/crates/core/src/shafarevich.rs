//! Dual graphs of singular fibers, free products of finite groups and the
//! chain-of-curves evidence scan.
//!
//! The scan looks for a connected set of fiber components `K = K1 + K2` such
//! that the images of the free groups of `K1` and `K2` in the fiber group are
//! finite while the image of `K` is infinite. Finiteness is evidenced by
//! exponent-3 relators in the orbit closure; infiniteness by a verified
//! surjection onto a free product of nontrivial finite groups. The verdicts
//! report evidence at a fixed quotient level and nothing more.
//!
//! Scan file format: the [`FiberData`] directives plus
//!
//! ```text
//! component: g=1 gens=a1, b1
//! edge: 0 1
//! external: 0
//! factor: B(2,3)
//! surject: a1 = 0:a
//! split: 0|1
//! ```
//!
//! `factor:` accepts `B(n,3)`, `B(n,3)ab` (its abelianization) and `Z(m)`.
//! Factor words use the letters `a, b, c, ...`.

use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

use crate::burnside3::{b3_order, B3Element, B3Quotient};
use crate::fiberquot::{fiber_presentation, orbit_closure, FiberData, OrbitBounds, OrbitClosure};
use crate::fpgroup::{coset_enumerate, primitive_family, EnumerationStatus, PrimitiveFamily};
use crate::group::{closure, Group};
use crate::words::{surface_relator, Alphabet, Word};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualGraph {
    pub genera: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
    /// Components carrying an edge to the rest of the fiber (one entry per edge).
    pub external: Vec<usize>,
}

impl DualGraph {
    pub fn new(
        genera: Vec<usize>,
        edges: Vec<(usize, usize)>,
        external: Vec<usize>,
    ) -> Result<Self> {
        let k = genera.len();
        if let Some(&(a, b)) = edges.iter().find(|&&(a, b)| a >= k || b >= k) {
            return Err(Error::BadSubgraph(format!("edge {a}-{b} out of range")));
        }
        if let Some(&c) = external.iter().find(|&&c| c >= k) {
            return Err(Error::BadSubgraph(format!(
                "external edge at missing component {c}"
            )));
        }
        Ok(DualGraph {
            genera,
            edges,
            external,
        })
    }

    pub fn len(&self) -> usize {
        self.genera.len()
    }

    pub fn is_empty(&self) -> bool {
        self.genera.is_empty()
    }

    /// Edge endpoints at component `i`, loops counted twice.
    pub fn degree(&self, i: usize) -> usize {
        let internal: usize = self
            .edges
            .iter()
            .map(|&(a, b)| (a == i) as usize + (b == i) as usize)
            .sum();
        internal + self.external.iter().filter(|&&c| c == i).count()
    }

    fn is_connected(&self, part: &BTreeSet<usize>) -> bool {
        let Some(&start) = part.iter().next() else {
            return false;
        };
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for &(a, b) in &self.edges {
                for (u, v) in [(a, b), (b, a)] {
                    if u == x && part.contains(&v) && seen.insert(v) {
                        stack.push(v);
                    }
                }
            }
        }
        seen.len() == part.len()
    }

    fn validate_part(&self, part: &[usize]) -> Result<BTreeSet<usize>> {
        let set: BTreeSet<usize> = part.iter().copied().collect();
        if set.is_empty() {
            return Err(Error::BadSubgraph("empty component set".into()));
        }
        if set.len() != part.len() {
            return Err(Error::BadSubgraph("repeated component".into()));
        }
        if let Some(&c) = set.iter().find(|&&c| c >= self.len()) {
            return Err(Error::BadSubgraph(format!("component {c} out of range")));
        }
        if !self.is_connected(&set) {
            return Err(Error::BadSubgraph(format!("{part:?} is not connected")));
        }
        Ok(set)
    }

    /// Edges with exactly one end in `part`, plus external edges on it.
    fn leaving_edges(&self, part: &BTreeSet<usize>) -> usize {
        let crossing = self
            .edges
            .iter()
            .filter(|&&(a, b)| part.contains(&a) != part.contains(&b))
            .count();
        crossing + self.external.iter().filter(|c| part.contains(c)).count()
    }
}

/// Rank `1 - chi` of the free fundamental group of the part of the smooth
/// fiber lying over the components `k`, where `chi = sum (2 - 2 g_i - d_i)`.
pub fn subgraph_rank(graph: &DualGraph, k: &[usize]) -> Result<usize> {
    let set = graph.validate_part(k)?;
    if graph.leaving_edges(&set) == 0 {
        return Err(Error::BadSubgraph(
            "no edge leaves the component set".into(),
        ));
    }
    let chi: i64 = set
        .iter()
        .map(|&i| 2 - 2 * graph.genera[i] as i64 - graph.degree(i) as i64)
        .sum();
    Ok((1 - chi) as usize)
}

/// A finite factor of a free product.
#[derive(Clone, Debug)]
pub enum Factor {
    Cyclic(u64),
    Burnside { name: String, group: B3Quotient },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(untagged)]
pub enum FactorElement {
    Cyclic(u64),
    Burnside(B3Element),
}

impl Factor {
    pub fn parse(src: &str) -> Result<Self> {
        let src = src.trim();
        let bad = || Error::Parse {
            pos: 0,
            msg: format!("unknown factor {src:?}"),
        };
        if let Some(m) = src.strip_prefix("Z(").and_then(|s| s.strip_suffix(')')) {
            let m: u64 = m.trim().parse().map_err(|_| bad())?;
            if m == 0 {
                return Err(bad());
            }
            return Ok(Factor::Cyclic(m));
        }
        let (body, abelian) = match src.strip_suffix("ab") {
            Some(b) => (b, true),
            None => (src, false),
        };
        let n = body
            .strip_prefix("B(")
            .and_then(|s| s.strip_suffix(",3)"))
            .and_then(|s| s.trim().parse::<usize>().ok())
            .ok_or_else(bad)?;
        let group = if abelian {
            B3Quotient::abelian(n)?
        } else {
            B3Quotient::full(n)?
        };
        Ok(Factor::Burnside {
            name: src.to_string(),
            group,
        })
    }

    pub fn name(&self) -> String {
        match self {
            Factor::Cyclic(m) => format!("Z({m})"),
            Factor::Burnside { name, .. } => name.clone(),
        }
    }

    pub fn order(&self) -> u128 {
        match self {
            Factor::Cyclic(m) => *m as u128,
            Factor::Burnside { group, .. } => group.order(),
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            Factor::Cyclic(_) => 1,
            Factor::Burnside { group, .. } => group.structure().rank(),
        }
    }

    pub fn identity(&self) -> FactorElement {
        match self {
            Factor::Cyclic(_) => FactorElement::Cyclic(0),
            Factor::Burnside { group, .. } => FactorElement::Burnside(group.identity()),
        }
    }

    pub fn generator(&self, i: usize) -> FactorElement {
        match self {
            Factor::Cyclic(m) => FactorElement::Cyclic(1 % m),
            Factor::Burnside { group, .. } => FactorElement::Burnside(group.generator(i)),
        }
    }

    pub fn from_word(&self, w: &Word) -> Result<FactorElement> {
        match self {
            Factor::Cyclic(m) => {
                let s: i64 = w.abelianize_vector().iter().sum();
                Ok(FactorElement::Cyclic(s.rem_euclid(*m as i64) as u64))
            }
            Factor::Burnside { group, .. } => Ok(FactorElement::Burnside(group.from_word(w)?)),
        }
    }

    pub fn multiply(&self, x: &FactorElement, y: &FactorElement) -> FactorElement {
        match (self, x, y) {
            (Factor::Cyclic(m), FactorElement::Cyclic(a), FactorElement::Cyclic(b)) => {
                FactorElement::Cyclic((a + b) % m)
            }
            (
                Factor::Burnside { group, .. },
                FactorElement::Burnside(a),
                FactorElement::Burnside(b),
            ) => FactorElement::Burnside(group.multiply(a, b)),
            _ => panic!("element does not belong to factor"),
        }
    }

    pub fn inverse(&self, x: &FactorElement) -> FactorElement {
        match (self, x) {
            (Factor::Cyclic(m), FactorElement::Cyclic(a)) => FactorElement::Cyclic((m - a) % m),
            (Factor::Burnside { group, .. }, FactorElement::Burnside(a)) => {
                FactorElement::Burnside(group.inverse(a))
            }
            _ => panic!("element does not belong to factor"),
        }
    }

    pub fn is_identity(&self, x: &FactorElement) -> bool {
        *x == self.identity()
    }
}

struct FactorGroup<'a>(&'a Factor);

impl Group for FactorGroup<'_> {
    type Element = FactorElement;

    fn identity(&self) -> FactorElement {
        self.0.identity()
    }

    fn multiply(&self, x: &FactorElement, y: &FactorElement) -> FactorElement {
        self.0.multiply(x, y)
    }

    fn inverse(&self, x: &FactorElement) -> FactorElement {
        self.0.inverse(x)
    }
}

/// Alternating sequence of nontrivial factor elements.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FreeProductElement {
    pub seq: Vec<(usize, FactorElement)>,
}

impl FreeProductElement {
    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct FreeProduct {
    pub factors: Vec<Factor>,
}

impl FreeProduct {
    pub fn new(factors: Vec<Factor>) -> Self {
        FreeProduct { factors }
    }

    /// The element `x` of factor `i`, as a free product element.
    pub fn embed(&self, i: usize, x: FactorElement) -> FreeProductElement {
        free_product_reduce(self, &FreeProductElement { seq: vec![(i, x)] })
    }

    /// Parses `0:a 1:b^-1` into a product of factor words.
    pub fn parse_element(&self, src: &str) -> Result<FreeProductElement> {
        let mut seq = Vec::new();
        for token in src.split_whitespace() {
            let (idx, word) = token.split_once(':').ok_or_else(|| Error::Parse {
                pos: 0,
                msg: format!("expected factor:word, got {token:?}"),
            })?;
            let i: usize = idx.parse().map_err(|_| Error::Parse {
                pos: 0,
                msg: format!("bad factor index {idx:?}"),
            })?;
            let factor = self
                .factors
                .get(i)
                .ok_or_else(|| Error::InvalidArgument(format!("factor {i} out of range")))?;
            let w = Alphabet::letters(factor.rank()).parse(word)?;
            seq.push((i, factor.from_word(&w)?));
        }
        Ok(free_product_reduce(self, &FreeProductElement { seq }))
    }
}

/// Merges adjacent entries from the same factor and drops identities.
pub fn free_product_reduce(fp: &FreeProduct, e: &FreeProductElement) -> FreeProductElement {
    let mut out: Vec<(usize, FactorElement)> = Vec::with_capacity(e.seq.len());
    for (i, x) in &e.seq {
        let factor = &fp.factors[*i];
        if factor.is_identity(x) {
            continue;
        }
        match out.last_mut() {
            Some((j, y)) if j == i => {
                let merged = factor.multiply(y, x);
                if factor.is_identity(&merged) {
                    out.pop();
                } else {
                    *y = merged;
                }
            }
            _ => out.push((*i, x.clone())),
        }
    }
    FreeProductElement { seq: out }
}

impl Group for FreeProduct {
    type Element = FreeProductElement;

    fn identity(&self) -> FreeProductElement {
        FreeProductElement { seq: Vec::new() }
    }

    fn multiply(&self, x: &FreeProductElement, y: &FreeProductElement) -> FreeProductElement {
        let seq = x.seq.iter().chain(&y.seq).cloned().collect();
        free_product_reduce(self, &FreeProductElement { seq })
    }

    fn inverse(&self, x: &FreeProductElement) -> FreeProductElement {
        let seq = x
            .seq
            .iter()
            .rev()
            .map(|(i, e)| (*i, self.factors[*i].inverse(e)))
            .collect();
        FreeProductElement { seq }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InfiniteOrderWitness {
    pub element: FreeProductElement,
    pub factors: (usize, usize),
    /// Powers checked to have reduced length exactly `2k`.
    pub checked_powers: usize,
}

/// `g h` with `g`, `h` generators of the first two nontrivial factors; its
/// `k`-th power is checked to be reduced of length `2k` for `k <= max_power`.
pub fn free_product_infinite_witness(
    fp: &FreeProduct,
    max_power: usize,
) -> Option<InfiniteOrderWitness> {
    let nontrivial: Vec<usize> = (0..fp.factors.len())
        .filter(|&i| fp.factors[i].order() > 1)
        .collect();
    let (&i, &j) = (nontrivial.first()?, nontrivial.get(1)?);
    let element = FreeProductElement {
        seq: vec![
            (i, fp.factors[i].generator(0)),
            (j, fp.factors[j].generator(0)),
        ],
    };
    let mut power = fp.identity();
    for k in 1..=max_power {
        power = fp.multiply(&power, &element);
        if power.len() != 2 * k {
            return None;
        }
    }
    Some(InfiniteOrderWitness {
        element,
        factors: (i, j),
        checked_powers: max_power,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ComponentVerdict {
    FiniteUpperEvidence {
        rank: usize,
        order_bound: u128,
    },
    Unknown {
        rank: usize,
        missing: Option<Word>,
        reason: String,
    },
}

impl ComponentVerdict {
    pub fn is_finite(&self) -> bool {
        matches!(self, ComponentVerdict::FiniteUpperEvidence { .. })
    }
}

/// Checks that the cube of every word in the primitive family over
/// `generators` (generators, pairs, triples for ranks 1, 2, 3) is an orbit
/// relator; then the image of the component group is a quotient of `B(rank, 3)`.
pub fn component_exponent3_criterion(
    orbit: &OrbitClosure,
    generators: &[Word],
) -> ComponentVerdict {
    let rank = generators.len();
    let family = match rank {
        0 => {
            return ComponentVerdict::FiniteUpperEvidence {
                rank,
                order_bound: 1,
            }
        }
        1 => PrimitiveFamily::Basic,
        2 => PrimitiveFamily::Pairs,
        3 => PrimitiveFamily::Triples,
        _ => {
            return ComponentVerdict::Unknown {
                rank,
                missing: None,
                reason: "no verified exponent-3 relator family above rank 3".into(),
            }
        }
    };
    let have: HashSet<_> = orbit.relators.iter().collect();
    for x in primitive_family(rank, family) {
        let w = x.apply_map(generators).expect("generators share a rank");
        let cube = w.pow(3);
        if !have.contains(&cube.cyclic_normal_form(true)) {
            return ComponentVerdict::Unknown {
                rank,
                missing: Some(cube),
                reason: "cube not in orbit".into(),
            };
        }
    }
    ComponentVerdict::FiniteUpperEvidence {
        rank,
        order_bound: b3_order(rank),
    }
}

/// Everything the scan needs besides the fiber data.
#[derive(Clone, Debug)]
pub struct ScanSetup {
    pub graph: DualGraph,
    /// Generating words of each component's free group.
    pub component_generators: Vec<Vec<Word>>,
    pub free_product: FreeProduct,
    /// Image of each surface generator.
    pub surjection: Vec<FreeProductElement>,
    pub split: Option<(Vec<usize>, Vec<usize>)>,
}

/// A [`FiberData`] file with the scan directives.
pub fn parse_scan_file(text: &str) -> Result<(FiberData, ScanSetup)> {
    let mut genera = Vec::new();
    let mut gen_src = Vec::new();
    let mut edges = Vec::new();
    let mut external = Vec::new();
    let mut factor_src = Vec::new();
    let mut surject_src = Vec::new();
    let mut split = None;
    let bad = |key: &str, value: &str| Error::Parse {
        pos: 0,
        msg: format!("bad {key}: {value:?}"),
    };
    let parse_list = |s: &str| -> Result<Vec<usize>> {
        s.split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse().map_err(|_| bad("component list", s)))
            .collect()
    };
    let data = FiberData::parse_with(text, |key, value| {
        match key {
            "component" => {
                let rest = value.strip_prefix("g=").ok_or_else(|| bad(key, value))?;
                let (g, gens) = match rest.split_once("gens=") {
                    Some((g, gens)) => (g.trim(), gens.trim()),
                    None => (rest.trim(), ""),
                };
                genera.push(g.parse().map_err(|_| bad(key, value))?);
                gen_src.push(gens.to_string());
            }
            "edge" => {
                let v = parse_list(value)?;
                if v.len() != 2 {
                    return Err(bad(key, value));
                }
                edges.push((v[0], v[1]));
            }
            "external" => external.extend(parse_list(value)?),
            "factor" => factor_src.push(value.to_string()),
            "surject" => {
                let (gen, img) = value.split_once('=').ok_or_else(|| bad(key, value))?;
                surject_src.push((gen.trim().to_string(), img.trim().to_string()));
            }
            "split" => {
                let (a, b) = value.split_once('|').ok_or_else(|| bad(key, value))?;
                split = Some((parse_list(a)?, parse_list(b)?));
            }
            other => {
                return Err(Error::Parse {
                    pos: 0,
                    msg: format!("unknown directive {other:?}"),
                })
            }
        }
        Ok(())
    })?;
    let alphabet = data.alphabet();
    let component_generators = gen_src
        .iter()
        .map(|s| {
            if s.is_empty() {
                Ok(Vec::new())
            } else {
                alphabet.parse_list(s)
            }
        })
        .collect::<Result<_>>()?;
    let factors = factor_src
        .iter()
        .map(|s| Factor::parse(s))
        .collect::<Result<Vec<_>>>()?;
    let free_product = FreeProduct::new(factors);
    let mut surjection: Vec<Option<FreeProductElement>> = vec![None; data.rank()];
    for (gen, img) in &surject_src {
        let i = alphabet
            .index(gen)
            .ok_or_else(|| bad("surject generator", gen))?;
        surjection[i] = Some(free_product.parse_element(img)?);
    }
    let surjection = if surject_src.is_empty() {
        Vec::new()
    } else {
        surjection
            .into_iter()
            .enumerate()
            .map(|(i, x)| {
                x.ok_or_else(|| Error::Parse {
                    pos: 0,
                    msg: format!("no image for {}", alphabet.name(i)),
                })
            })
            .collect::<Result<_>>()?
    };
    let graph = DualGraph::new(genera, edges, external)?;
    Ok((
        data,
        ScanSetup {
            graph,
            component_generators,
            free_product,
            surjection,
            split,
        },
    ))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurjectionCheck {
    pub orbit_relators_trivial: bool,
    pub surface_relator_trivial: bool,
    /// Each factor is generated by the single-factor generator images.
    pub factors_covered: Vec<bool>,
    /// First orbit relator (or the surface relator) with a nontrivial image.
    pub failing_relator: Option<Word>,
}

impl SurjectionCheck {
    pub fn ok(&self) -> bool {
        self.orbit_relators_trivial
            && self.surface_relator_trivial
            && self.factors_covered.iter().all(|&c| c)
    }
}

fn evaluate(fp: &FreeProduct, images: &[FreeProductElement], w: &Word) -> FreeProductElement {
    let inverses: Vec<_> = images.iter().map(|x| fp.inverse(x)).collect();
    w.letters().fold(fp.identity(), |acc, (g, e)| {
        fp.multiply(&acc, if e > 0 { &images[g] } else { &inverses[g] })
    })
}

pub fn check_surjection(
    data: &FiberData,
    orbit: &OrbitClosure,
    setup: &ScanSetup,
) -> Result<SurjectionCheck> {
    let fp = &setup.free_product;
    let images = &setup.surjection;
    if images.len() != data.rank() {
        return Err(Error::RankMismatch {
            expected: data.rank(),
            found: images.len(),
        });
    }
    let mut failing_relator = None;
    let bad_orbit = orbit
        .relators
        .iter()
        .find(|r| !fp.is_identity(&evaluate(fp, images, r.representative())));
    if let Some(r) = bad_orbit {
        failing_relator = Some(r.representative().clone());
    }
    let surface_relator_trivial = data.punctured || {
        let r = surface_relator(data.genus)?;
        let ok = fp.is_identity(&evaluate(fp, images, &r));
        if !ok && failing_relator.is_none() {
            failing_relator = Some(r);
        }
        ok
    };
    let factors_covered = fp
        .factors
        .iter()
        .enumerate()
        .map(|(j, factor)| {
            let gens: Vec<FactorElement> = images
                .iter()
                .filter(|x| x.len() == 1 && x.seq[0].0 == j)
                .map(|x| x.seq[0].1.clone())
                .collect();
            let limit = factor.order().min(1 << 22) as usize;
            closure(&FactorGroup(factor), &gens, limit)
                .is_some_and(|s| s.len() as u128 == factor.order())
        })
        .collect();
    Ok(SurjectionCheck {
        orbit_relators_trivial: bad_orbit.is_none(),
        surface_relator_trivial,
        factors_covered,
        failing_relator,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ScanVerdict {
    /// Finite evidence on both parts and an infinite image of the union, at this quotient level.
    CandidateCounterexample,
    Inconclusive {
        reason: String,
        failing_relator: Option<Word>,
    },
    /// Coset enumeration shows the whole fiber group is finite.
    RefutedAtThisLevel { order: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartEvidence {
    pub components: Vec<usize>,
    pub verdicts: Vec<ComponentVerdict>,
    pub finite: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    pub orbit_size: usize,
    pub orbit_exhausted: bool,
    pub parts: [PartEvidence; 2],
    pub surjection: Option<SurjectionCheck>,
    pub witness: Option<InfiniteOrderWitness>,
    pub enumeration: Option<EnumerationStatus>,
    pub verdict: ScanVerdict,
}

/// Evidence for the split `K = k1 + k2` at the quotient level given by `setup`.
pub fn split_scan(
    data: &FiberData,
    setup: &ScanSetup,
    k1: &[usize],
    k2: &[usize],
    bounds: OrbitBounds,
    max_cosets: usize,
) -> Result<ScanReport> {
    let graph = &setup.graph;
    let s1 = graph.validate_part(k1)?;
    let s2 = graph.validate_part(k2)?;
    if !s1.is_disjoint(&s2) {
        return Err(Error::BadSubgraph("parts overlap".into()));
    }
    let union: BTreeSet<usize> = s1.union(&s2).copied().collect();
    if !graph.is_connected(&union) {
        return Err(Error::BadSubgraph("union of parts is not connected".into()));
    }
    if setup.component_generators.len() != graph.len() {
        return Err(Error::BadSubgraph(
            "need generating words for every component".into(),
        ));
    }

    let orbit = orbit_closure(data, bounds);
    let evidence = |part: &BTreeSet<usize>| {
        let verdicts: Vec<ComponentVerdict> = part
            .iter()
            .map(|&c| component_exponent3_criterion(&orbit, &setup.component_generators[c]))
            .collect();
        let finite = verdicts.iter().all(ComponentVerdict::is_finite);
        PartEvidence {
            components: part.iter().copied().collect(),
            verdicts,
            finite,
        }
    };
    let parts = [evidence(&s1), evidence(&s2)];

    let surjection = if setup.surjection.is_empty() {
        None
    } else {
        Some(check_surjection(data, &orbit, setup)?)
    };
    let witness = free_product_infinite_witness(&setup.free_product, 100);
    let mut enumeration = None;

    let verdict = match (&surjection, &witness) {
        (Some(s), Some(_)) if s.ok() => {
            if parts.iter().all(|p| p.finite) {
                ScanVerdict::CandidateCounterexample
            } else {
                ScanVerdict::Inconclusive {
                    reason: "no finiteness evidence for one of the parts".into(),
                    failing_relator: None,
                }
            }
        }
        (Some(s), _) if !s.ok() => ScanVerdict::Inconclusive {
            reason: "surjection onto the free product does not verify".into(),
            failing_relator: s.failing_relator.clone(),
        },
        _ => {
            let p = fiber_presentation(data, &orbit)?;
            let status = coset_enumerate(&p, &[], max_cosets).status();
            enumeration = Some(status);
            match status {
                EnumerationStatus::Complete { index } => {
                    ScanVerdict::RefutedAtThisLevel { order: index }
                }
                EnumerationStatus::Overflow { .. } => ScanVerdict::Inconclusive {
                    reason: "no infiniteness witness".into(),
                    failing_relator: None,
                },
            }
        }
    };
    Ok(ScanReport {
        orbit_size: orbit.relators.len(),
        orbit_exhausted: orbit.exhausted,
        parts,
        surjection,
        witness,
        enumeration,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_examples() {
        let g = DualGraph::new(vec![1], vec![], vec![0]).unwrap();
        assert_eq!(subgraph_rank(&g, &[0]).unwrap(), 2);
        let g = DualGraph::new(vec![0], vec![], vec![0, 0, 0]).unwrap();
        assert_eq!(subgraph_rank(&g, &[0]).unwrap(), 2);
        let g = DualGraph::new(vec![1, 1], vec![(0, 1)], vec![0]).unwrap();
        assert_eq!(subgraph_rank(&g, &[0, 1]).unwrap(), 4);
        let closed = DualGraph::new(vec![1, 1], vec![(0, 1)], vec![]).unwrap();
        assert!(subgraph_rank(&closed, &[0, 1]).is_err());
        assert_eq!(subgraph_rank(&closed, &[0]).unwrap(), 2);
        let apart = DualGraph::new(vec![1, 1], vec![], vec![0, 1]).unwrap();
        assert!(matches!(
            subgraph_rank(&apart, &[0, 1]),
            Err(Error::BadSubgraph(_))
        ));
        assert!(subgraph_rank(&apart, &[]).is_err());
    }

    fn b23_pair() -> FreeProduct {
        FreeProduct::new(vec![
            Factor::parse("B(2,3)").unwrap(),
            Factor::parse("B(2,3)").unwrap(),
        ])
    }

    #[test]
    fn reduction() {
        let fp = b23_pair();
        let g = fp.factors[0].generator(0);
        let e = FreeProductElement {
            seq: vec![(0, g.clone()), (0, fp.factors[0].inverse(&g))],
        };
        assert!(free_product_reduce(&fp, &e).is_empty());
        let x = fp.parse_element("0:a 1:b 0:a^-1").unwrap();
        assert_eq!(x.len(), 3);
        assert_eq!(free_product_reduce(&fp, &x), x);
        assert!(fp.is_identity(&fp.multiply(&x, &fp.inverse(&x))));
    }

    #[test]
    fn witnesses() {
        let w = free_product_infinite_witness(&b23_pair(), 100).unwrap();
        assert_eq!(w.element.len(), 2);
        let trivial = FreeProduct::new(vec![Factor::Cyclic(1), Factor::parse("B(2,3)").unwrap()]);
        assert!(free_product_infinite_witness(&trivial, 10).is_none());
        let dihedral = FreeProduct::new(vec![Factor::Cyclic(2), Factor::Cyclic(2)]);
        assert!(free_product_infinite_witness(&dihedral, 100).is_some());
        assert!(Factor::parse("B(2,4)").is_err());
        assert_eq!(Factor::parse("B(2,3)ab").unwrap().order(), 9);
    }

    #[test]
    fn exponent3_criterion() {
        let data = FiberData::parse("genus: 1\npunctured: true\ncycle: a1 ^3\ncycle: b1 ^3\ncycle: a1 b1 ^3\ncycle: a1 b1^-1 ^3").unwrap();
        let orbit = orbit_closure(&data, OrbitBounds::default());
        let l = data.alphabet();
        let gens = vec![l.parse("a1").unwrap(), l.parse("b1").unwrap()];
        assert_eq!(
            component_exponent3_criterion(&orbit, &gens),
            ComponentVerdict::FiniteUpperEvidence {
                rank: 2,
                order_bound: 27
            }
        );
        let fewer = FiberData::parse(
            "genus: 1\npunctured: true\ncycle: a1 ^3\ncycle: b1 ^3\ncycle: a1 b1 ^3",
        )
        .unwrap();
        let orbit = orbit_closure(&fewer, OrbitBounds::default());
        assert!(matches!(
            component_exponent3_criterion(&orbit, &gens),
            ComponentVerdict::Unknown {
                missing: Some(_),
                ..
            }
        ));
        assert!(component_exponent3_criterion(&orbit, &[]).is_finite());
    }
}
