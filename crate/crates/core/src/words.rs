//! Words in free groups and surface groups.
//!
//! A [`Word`] is stored as run-length syllables `x_i^e` and is always freely
//! reduced. Surface groups use the generator order `a_1, b_1, ..., a_g, b_g`,
//! so `a_i` has index `2(i - 1)` and `b_i` has index `2(i - 1) + 1`.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A maximal run `x_gen^exp` inside a reduced word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Syllable {
    pub gen: usize,
    pub exp: i64,
}

impl Syllable {
    pub fn new(gen: usize, exp: i64) -> Self {
        Syllable { gen, exp }
    }
}

/// Freely reduced word in the free group of rank `rank`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word {
    rank: usize,
    syllables: Vec<Syllable>,
}

/// Sort key of a single letter: generator first, positive before negative.
fn letter_key(gen: usize, negative: bool) -> u32 {
    (2 * gen + negative as usize) as u32
}

fn key_letter(key: u32) -> (usize, i64) {
    (
        (key / 2) as usize,
        if key.is_multiple_of(2) { 1 } else { -1 },
    )
}

/// Pushes a syllable onto a reduced stack, merging and cancelling at the top.
fn push_reduced(stack: &mut Vec<Syllable>, s: Syllable) {
    if s.exp == 0 {
        return;
    }
    match stack.last_mut() {
        Some(top) if top.gen == s.gen => {
            top.exp += s.exp;
            if top.exp == 0 {
                stack.pop();
            }
        }
        _ => stack.push(s),
    }
}

impl Word {
    pub fn identity(rank: usize) -> Self {
        Word {
            rank,
            syllables: Vec::new(),
        }
    }

    pub fn generator(rank: usize, gen: usize) -> Result<Self> {
        Self::free_reduce(rank, [Syllable::new(gen, 1)])
    }

    /// Reduces an arbitrary syllable list. Zero exponents are allowed and dropped.
    pub fn free_reduce(rank: usize, syllables: impl IntoIterator<Item = Syllable>) -> Result<Self> {
        let mut stack = Vec::new();
        for s in syllables {
            if s.gen >= rank {
                return Err(Error::GeneratorOutOfRange { index: s.gen, rank });
            }
            push_reduced(&mut stack, s);
        }
        Ok(Word {
            rank,
            syllables: stack,
        })
    }

    /// Builds a word from signed letters `(gen, ±1)`.
    pub fn from_letters(
        rank: usize,
        letters: impl IntoIterator<Item = (usize, i64)>,
    ) -> Result<Self> {
        Self::free_reduce(rank, letters.into_iter().map(|(g, e)| Syllable::new(g, e)))
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Letter length.
    pub fn len(&self) -> usize {
        self.syllables
            .iter()
            .map(|s| s.exp.unsigned_abs() as usize)
            .sum()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Expanded letters as `(gen, ±1)`.
    pub fn letters(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.syllables.iter().flat_map(|s| {
            std::iter::repeat_n((s.gen, s.exp.signum()), s.exp.unsigned_abs() as usize)
        })
    }

    fn check_rank(&self, other: &Word) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                found: other.rank,
            });
        }
        Ok(())
    }

    pub fn multiply(&self, other: &Word) -> Result<Word> {
        self.check_rank(other)?;
        let mut stack = self.syllables.clone();
        for &s in &other.syllables {
            push_reduced(&mut stack, s);
        }
        Ok(Word {
            rank: self.rank,
            syllables: stack,
        })
    }

    /// Same as [`Word::multiply`] for callers that already know the ranks agree.
    pub fn mul(&self, other: &Word) -> Word {
        self.multiply(other).expect("rank mismatch")
    }

    pub fn inverse(&self) -> Word {
        Word {
            rank: self.rank,
            syllables: self
                .syllables
                .iter()
                .rev()
                .map(|s| Syllable::new(s.gen, -s.exp))
                .collect(),
        }
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity(self.rank);
        let mut sq = base;
        let mut k = n.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                out = out.mul(&sq);
            }
            k >>= 1;
            if k > 0 {
                sq = sq.mul(&sq);
            }
        }
        out
    }

    /// Commutator `[u, v] = u v u^-1 v^-1`.
    pub fn commutator(&self, other: &Word) -> Result<Word> {
        self.check_rank(other)?;
        Ok(self.mul(other).mul(&self.inverse()).mul(&other.inverse()))
    }

    /// `g w g^-1`.
    pub fn conjugate_by(&self, g: &Word) -> Result<Word> {
        self.check_rank(g)?;
        Ok(g.mul(self).mul(&g.inverse()))
    }

    /// Reinterprets the word in a free group of larger rank.
    pub fn embed(&self, rank: usize) -> Result<Word> {
        if rank < self.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                found: rank,
            });
        }
        Ok(Word {
            rank,
            syllables: self.syllables.clone(),
        })
    }

    /// Exponent-sum vector, the image in `Z^rank`.
    pub fn abelianize_vector(&self) -> Vec<i64> {
        let mut v = vec![0; self.rank];
        for s in &self.syllables {
            v[s.gen] += s.exp;
        }
        v
    }

    /// Substitutes `x_i -> images[i]`. All images must share one target rank.
    pub fn apply_map(&self, images: &[Word]) -> Result<Word> {
        if images.len() != self.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                found: images.len(),
            });
        }
        let target = images.first().map_or(0, Word::rank);
        if let Some(bad) = images.iter().find(|w| w.rank != target) {
            return Err(Error::RankMismatch {
                expected: target,
                found: bad.rank,
            });
        }
        let mut stack = Vec::new();
        for s in &self.syllables {
            let img = images[s.gen].pow(s.exp);
            for &t in &img.syllables {
                push_reduced(&mut stack, t);
            }
        }
        Ok(Word {
            rank: target,
            syllables: stack,
        })
    }

    /// Cyclically reduced conjugate (the word itself when already cyclically reduced).
    pub fn cyclically_reduce(&self) -> Word {
        let mut syl = self.syllables.clone();
        loop {
            if syl.len() < 2 {
                break;
            }
            let first = syl[0];
            let last = *syl.last().unwrap();
            if first.gen != last.gen {
                break;
            }
            syl.pop();
            let merged = first.exp + last.exp;
            if merged == 0 {
                syl.remove(0);
            } else {
                syl[0].exp = merged;
                break;
            }
        }
        Word {
            rank: self.rank,
            syllables: syl,
        }
    }

    pub fn cyclic_normal_form(&self, up_to_inverse: bool) -> CyclicWord {
        CyclicWord::new(self, up_to_inverse)
    }

    fn keys(&self) -> Vec<u32> {
        self.letters().map(|(g, e)| letter_key(g, e < 0)).collect()
    }

    fn from_keys(rank: usize, keys: &[u32]) -> Word {
        Word::from_letters(rank, keys.iter().map(|&k| key_letter(k))).expect("keys in range")
    }

    /// Uniformly random freely reduced word of the given letter length.
    pub fn random<R: Rng + ?Sized>(rank: usize, len: usize, rng: &mut R) -> Word {
        let mut letters: Vec<(usize, i64)> = Vec::with_capacity(len);
        while letters.len() < len {
            let g = rng.gen_range(0..rank);
            let e = if rng.gen_bool(0.5) { 1 } else { -1 };
            if let Some(&(pg, pe)) = letters.last() {
                if pg == g && pe == -e {
                    continue;
                }
            }
            letters.push((g, e));
        }
        Word::from_letters(rank, letters).expect("random generators in range")
    }

    pub fn display(&self, alphabet: &Alphabet) -> String {
        if self.syllables.is_empty() {
            return "1".to_string();
        }
        self.syllables
            .iter()
            .map(|s| {
                let name = alphabet.name(s.gen);
                if s.exp == 1 {
                    name
                } else {
                    format!("{name}^{}", s.exp)
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display(&Alphabet::letters(self.rank.max(1))))
    }
}

/// Index of the lexicographically least rotation.
fn least_rotation(s: &[u32]) -> usize {
    let n = s.len();
    let (mut i, mut j, mut k) = (0usize, 1usize, 0usize);
    while i < n && j < n && k < n {
        let a = s[(i + k) % n];
        let b = s[(j + k) % n];
        if a == b {
            k += 1;
            continue;
        }
        if a > b {
            i += k + 1;
        } else {
            j += k + 1;
        }
        if i == j {
            j += 1;
        }
        k = 0;
    }
    i.min(j)
}

fn rotated(s: &[u32]) -> Vec<u32> {
    if s.is_empty() {
        return Vec::new();
    }
    let r = least_rotation(s);
    s[r..].iter().chain(&s[..r]).copied().collect()
}

/// Conjugacy class of a word, optionally identified with its inverse.
///
/// Equality, hashing and ordering only look at `canonical`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CyclicWord {
    representative: Word,
    canonical: Word,
}

impl CyclicWord {
    pub fn new(w: &Word, up_to_inverse: bool) -> Self {
        let representative = w.cyclically_reduce();
        let keys = rotated(&representative.keys());
        let best = if up_to_inverse {
            let inv = rotated(&representative.inverse().keys());
            if inv < keys {
                inv
            } else {
                keys
            }
        } else {
            keys
        };
        let canonical = Word::from_keys(w.rank, &best);
        CyclicWord {
            representative,
            canonical,
        }
    }

    pub fn representative(&self) -> &Word {
        &self.representative
    }

    pub fn canonical(&self) -> &Word {
        &self.canonical
    }

    pub fn rank(&self) -> usize {
        self.canonical.rank
    }

    pub fn len(&self) -> usize {
        self.canonical.len()
    }

    pub fn is_empty(&self) -> bool {
        self.canonical.is_empty()
    }

    fn key_cmp(&self, other: &Self) -> Ordering {
        (self.canonical.rank, self.canonical.keys())
            .cmp(&(other.canonical.rank, other.canonical.keys()))
    }
}

impl PartialEq for CyclicWord {
    fn eq(&self, other: &Self) -> bool {
        self.canonical == other.canonical
    }
}

impl Eq for CyclicWord {}

impl Hash for CyclicWord {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.canonical.hash(state);
    }
}

impl PartialOrd for CyclicWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CyclicWord {
    /// Shortlex on expanded letter keys.
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.key_cmp(other))
    }
}

/// `[a_1, b_1] ... [a_g, b_g]` in the free group of rank `2g`.
pub fn surface_relator(genus: usize) -> Result<Word> {
    if genus == 0 {
        return Err(Error::InvalidArgument("genus must be at least 1".into()));
    }
    let rank = 2 * genus;
    let letters = (0..genus).flat_map(|i| {
        let (a, b) = (2 * i, 2 * i + 1);
        [(a, 1), (b, 1), (a, -1), (b, -1)]
    });
    Word::from_letters(rank, letters)
}

/// Index of `a_i` (1-based `i`) in the surface generator order.
pub fn surface_a(i: usize) -> usize {
    2 * (i - 1)
}

/// Index of `b_i` (1-based `i`) in the surface generator order.
pub fn surface_b(i: usize) -> usize {
    2 * (i - 1) + 1
}

/// Generator names used by the parser and printer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
}

impl Alphabet {
    /// `a, b, c, ...`; at most 26 generators.
    pub fn letters(rank: usize) -> Self {
        assert!(rank <= 26, "letter alphabet supports at most 26 generators");
        Alphabet {
            names: (0..rank)
                .map(|i| ((b'a' + i as u8) as char).to_string())
                .collect(),
        }
    }

    /// `a1, b1, ..., ag, bg`.
    pub fn surface(genus: usize) -> Self {
        Alphabet {
            names: (1..=genus)
                .flat_map(|i| [format!("a{i}"), format!("b{i}")])
                .collect(),
        }
    }

    /// Custom names; each must be a letter optionally followed by digits.
    pub fn custom<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let mut out = Vec::with_capacity(names.len());
        for n in names {
            let n = n.as_ref();
            let mut chars = n.chars();
            let ok = chars.next().is_some_and(|c| c.is_ascii_alphabetic())
                && chars.all(|c| c.is_ascii_digit());
            if !ok {
                return Err(Error::InvalidArgument(format!("bad generator name {n:?}")));
            }
            if out.iter().any(|m: &String| m == n) {
                return Err(Error::InvalidArgument(format!(
                    "duplicate generator name {n:?}"
                )));
            }
            out.push(n.to_string());
        }
        Ok(Alphabet { names: out })
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, gen: usize) -> String {
        self.names
            .get(gen)
            .cloned()
            .unwrap_or_else(|| format!("x{gen}"))
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Parses a word literal.
    ///
    /// Grammar: a word is a sequence of factors `-? atom (^ int)?`, where an
    /// atom is a generator name, `1`, a parenthesised word, or a commutator
    /// `(u, v)` / `[u, v]` meaning `u v u^-1 v^-1`. Whitespace is ignored.
    pub fn parse(&self, src: &str) -> Result<Word> {
        let mut p = Parser {
            src: src.as_bytes(),
            pos: 0,
            alphabet: self,
        };
        let w = p.word()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(w)
    }

    /// Splits a list of word literals on top-level commas, or on top-level
    /// whitespace when the list contains no top-level comma.
    pub fn parse_list(&self, src: &str) -> Result<Vec<Word>> {
        split_top_level(src)
            .into_iter()
            .filter(|s| !s.trim().is_empty())
            .map(|s| self.parse(s))
            .collect()
    }
}

/// Top-level split used by [`Alphabet::parse_list`].
pub fn split_top_level(src: &str) -> Vec<&str> {
    let mut depth = 0i32;
    let has_comma = {
        let mut d = 0i32;
        src.chars().any(|c| {
            match c {
                '(' | '[' => d += 1,
                ')' | ']' => d -= 1,
                _ => {}
            }
            c == ',' && d == 0
        })
    };
    let mut parts = Vec::new();
    let mut start = 0;
    let bytes = src.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ => {}
        }
        let sep = depth == 0
            && if has_comma {
                c == ','
            } else if c.is_whitespace() {
                // A caret may be separated from its base by spaces: keep `a ^3` together.
                let next = src[i..].trim_start().chars().next();
                let prev = src[..i].trim_end().chars().last();
                !(next == Some('^') || prev == Some('^') || prev == Some('-'))
            } else {
                false
            };
        if sep {
            parts.push(&src[start..i]);
            start = i + 1;
        }
        i += 1;
    }
    parts.push(&src[start..]);
    parts
        .into_iter()
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect()
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    alphabet: &'a Alphabet,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn word(&mut self) -> Result<Word> {
        let rank = self.alphabet.rank();
        let mut acc = Word::identity(rank);
        while let Some(c) = self.peek() {
            if c == b')' || c == b']' || c == b',' {
                break;
            }
            let f = self.factor()?;
            acc = acc.mul(&f);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Word> {
        let negate = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let mut w = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.int()?;
            w = w.pow(e);
        }
        Ok(if negate { w.inverse() } else { w })
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if self.src.get(self.pos) == Some(&b'-') || self.src.get(self.pos) == Some(&b'+') {
            self.pos += 1;
        }
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Parse {
                pos: start,
                msg: "expected integer exponent".into(),
            })
    }

    fn atom(&mut self) -> Result<Word> {
        let rank = self.alphabet.rank();
        match self.peek() {
            Some(open @ (b'(' | b'[')) => {
                let close = if open == b'(' { b')' } else { b']' };
                self.pos += 1;
                let u = self.word()?;
                let w = if self.peek() == Some(b',') {
                    self.pos += 1;
                    let v = self.word()?;
                    u.mul(&v).mul(&u.inverse()).mul(&v.inverse())
                } else if open == b'[' {
                    return Err(self.err("square brackets denote a commutator [u, v]"));
                } else {
                    u
                };
                if self.peek() != Some(close) {
                    return Err(self.err("unbalanced bracket"));
                }
                self.pos += 1;
                Ok(w)
            }
            Some(b'1') => {
                self.pos += 1;
                Ok(Word::identity(rank))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                self.pos += 1;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let idx = self.alphabet.index(name).ok_or_else(|| Error::Parse {
                    pos: start,
                    msg: format!("unknown generator {name:?}"),
                })?;
                Word::generator(rank, idx)
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}
