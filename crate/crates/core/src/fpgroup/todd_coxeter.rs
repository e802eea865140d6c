//! HLT coset enumeration with lookahead.
//!
//! Columns are `2 * gen` for `x_gen` and `2 * gen + 1` for its inverse, so the
//! inverse column of `c` is `c ^ 1`. Coincidences are processed with the
//! usual union-find queue; when the table fills up, a lookahead pass scans
//! every live coset without defining new ones and the table is compacted.

use std::time::Instant;

use serde::Serialize;

use super::Presentation;
use crate::words::Word;

const UNDEF: u32 = u32::MAX;

/// Outcome of an enumeration. `Overflow` carries no information about the index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum EnumerationStatus {
    Complete { index: usize },
    Overflow { max_cosets: usize },
}

impl EnumerationStatus {
    pub fn index(&self) -> Option<usize> {
        match *self {
            EnumerationStatus::Complete { index } => Some(index),
            EnumerationStatus::Overflow { .. } => None,
        }
    }

    pub fn is_complete(&self) -> bool {
        matches!(self, EnumerationStatus::Complete { .. })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct EnumerationStats {
    /// Total number of coset definitions made.
    pub total_defined: usize,
    /// Largest number of simultaneously live cosets.
    pub max_live: usize,
    pub lookaheads: usize,
}

/// Coset table of a subgroup. When complete, rows are numbered in
/// first-appearance order from coset 0 (the subgroup itself).
#[derive(Clone, Debug)]
pub struct CosetTable {
    rank: usize,
    subgroup_generators: Vec<Word>,
    rows: Vec<u32>,
    status: EnumerationStatus,
    stats: EnumerationStats,
    runtime_ms: u128,
}

impl CosetTable {
    pub fn status(&self) -> EnumerationStatus {
        self.status
    }

    pub fn index(&self) -> Option<usize> {
        self.status.index()
    }

    pub fn stats(&self) -> EnumerationStats {
        self.stats
    }

    pub fn runtime_ms(&self) -> u128 {
        self.runtime_ms
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn subgroup_generators(&self) -> &[Word] {
        &self.subgroup_generators
    }

    /// Image of `coset` under generator column `col`. Only for complete tables.
    pub fn entry(&self, coset: usize, col: usize) -> usize {
        self.rows[coset * 2 * self.rank + col] as usize
    }

    /// Right action of a word on a coset; `None` when the table is not complete.
    pub fn act(&self, coset: usize, w: &Word) -> Option<usize> {
        self.index()?;
        let mut c = coset;
        for (g, e) in w.letters() {
            c = self.entry(c, 2 * g + (e < 0) as usize);
        }
        Some(c)
    }

    /// Checks closure and that every coset is fixed by every relator and coset 0
    /// by every subgroup generator.
    pub fn verify(&self, p: &Presentation) -> bool {
        let Some(n) = self.index() else { return false };
        let width = 2 * self.rank;
        if self.rows.len() != n * width || self.rows.iter().any(|&x| x as usize >= n) {
            return false;
        }
        for c in 0..n {
            for col in 0..width {
                if self.entry(self.entry(c, col), col ^ 1) != c {
                    return false;
                }
            }
            for r in p.relators() {
                if self.act(c, r.representative()) != Some(c) {
                    return false;
                }
            }
        }
        self.subgroup_generators
            .iter()
            .all(|h| self.act(0, h) == Some(0))
    }
}

struct Full;

struct Enumerator {
    width: usize,
    max: usize,
    table: Vec<u32>,
    parent: Vec<u32>,
    live: usize,
    queue: Vec<u32>,
    stats: EnumerationStats,
}

impl Enumerator {
    fn new(rank: usize, max: usize) -> Self {
        let width = 2 * rank;
        Enumerator {
            width,
            max,
            table: vec![UNDEF; width],
            parent: vec![0],
            live: 1,
            queue: Vec::new(),
            stats: EnumerationStats {
                total_defined: 1,
                max_live: 1,
                lookaheads: 0,
            },
        }
    }

    fn n_alloc(&self) -> usize {
        self.parent.len()
    }

    #[inline]
    fn get(&self, c: u32, col: usize) -> u32 {
        self.table[c as usize * self.width + col]
    }

    #[inline]
    fn set(&mut self, c: u32, col: usize, v: u32) {
        self.table[c as usize * self.width + col] = v;
    }

    fn alive(&self, c: u32) -> bool {
        self.parent[c as usize] == c
    }

    fn define(&mut self, c: u32, col: usize) -> Result<u32, Full> {
        if self.n_alloc() >= self.max {
            return Err(Full);
        }
        let d = self.n_alloc() as u32;
        self.table.extend(std::iter::repeat_n(UNDEF, self.width));
        self.parent.push(d);
        self.live += 1;
        self.stats.total_defined += 1;
        self.stats.max_live = self.stats.max_live.max(self.live);
        self.set(c, col, d);
        self.set(d, col ^ 1, c);
        Ok(d)
    }

    fn rep(&mut self, c: u32) -> u32 {
        let mut r = c;
        while self.parent[r as usize] != r {
            r = self.parent[r as usize];
        }
        let mut x = c;
        while self.parent[x as usize] != r {
            let next = self.parent[x as usize];
            self.parent[x as usize] = r;
            x = next;
        }
        r
    }

    fn merge(&mut self, a: u32, b: u32) {
        let (p, q) = (self.rep(a), self.rep(b));
        if p != q {
            let (lo, hi) = if p < q { (p, q) } else { (q, p) };
            self.parent[hi as usize] = lo;
            self.queue.push(hi);
            self.live -= 1;
        }
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        self.queue.clear();
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let g = self.queue[i];
            i += 1;
            for col in 0..self.width {
                let d = self.get(g, col);
                if d == UNDEF {
                    continue;
                }
                self.set(d, col ^ 1, UNDEF);
                let mu = self.rep(g);
                let nu = self.rep(d);
                let mu_x = self.get(mu, col);
                if mu_x != UNDEF {
                    self.merge(nu, mu_x);
                } else {
                    let nu_y = self.get(nu, col ^ 1);
                    if nu_y != UNDEF {
                        self.merge(mu, nu_y);
                    } else {
                        self.set(mu, col, nu);
                        self.set(nu, col ^ 1, mu);
                    }
                }
            }
        }
    }

    /// Scans `alpha` under `word` (columns). With `fill`, gaps are closed by
    /// defining new cosets; without it only deductions and coincidences happen.
    fn scan(&mut self, alpha: u32, word: &[usize], fill: bool) -> Result<(), Full> {
        let n = word.len();
        if n == 0 {
            return Ok(());
        }
        loop {
            let mut f = alpha;
            let mut i = 0;
            while i < n {
                let next = self.get(f, word[i]);
                if next == UNDEF {
                    break;
                }
                f = next;
                i += 1;
            }
            if i == n {
                if f != alpha {
                    self.coincidence(f, alpha);
                }
                return Ok(());
            }
            let mut b = alpha;
            let mut j = n;
            while j > i {
                let prev = self.get(b, word[j - 1] ^ 1);
                if prev == UNDEF {
                    break;
                }
                b = prev;
                j -= 1;
            }
            if j == i {
                self.coincidence(f, b);
                return Ok(());
            }
            if j == i + 1 {
                self.set(f, word[i], b);
                self.set(b, word[i] ^ 1, f);
                return Ok(());
            }
            if !fill {
                return Ok(());
            }
            self.define(f, word[i])?;
        }
    }

    fn lookahead(&mut self, relators: &[Vec<usize>], subgroup: &[Vec<usize>]) {
        self.stats.lookaheads += 1;
        for h in subgroup {
            let _ = self.scan(0, h, false);
        }
        let mut c = 0;
        while (c as usize) < self.n_alloc() {
            for r in relators {
                if !self.alive(c) {
                    break;
                }
                let _ = self.scan(c, r, false);
            }
            c += 1;
        }
    }

    /// Renumbers live cosets in increasing order; returns the old-to-new map.
    fn compact(&mut self) -> Vec<u32> {
        let n = self.n_alloc();
        let mut map = vec![UNDEF; n];
        let mut next = 0u32;
        for c in 0..n {
            if self.parent[c] == c as u32 {
                map[c] = next;
                next += 1;
            }
        }
        let mut table = Vec::with_capacity(next as usize * self.width);
        for c in 0..n {
            if map[c] == UNDEF {
                continue;
            }
            for col in 0..self.width {
                let v = self.table[c * self.width + col];
                table.push(if v == UNDEF { UNDEF } else { map[v as usize] });
            }
        }
        self.table = table;
        self.parent = (0..next).collect();
        self.live = next as usize;
        map
    }

    /// Handles a full table. Returns the new position of `alpha`, or `None` on overflow.
    fn make_room(
        &mut self,
        alpha: u32,
        relators: &[Vec<usize>],
        subgroup: &[Vec<usize>],
    ) -> Option<u32> {
        self.lookahead(relators, subgroup);
        let map = self.compact();
        // Give up when lookahead frees less than 1/64 of the table, to avoid thrashing.
        if self.max - self.n_alloc() < (self.max / 64).max(1) {
            return None;
        }
        let pos = (alpha as usize..map.len())
            .find(|&c| map[c] != UNDEF)
            .map(|c| map[c]);
        Some(pos.unwrap_or(self.n_alloc() as u32))
    }

    /// Renumbers in breadth-first order from coset 0.
    fn standardize(&self) -> Vec<u32> {
        let n = self.n_alloc();
        let mut order = vec![UNDEF; n];
        let mut seq = vec![0u32];
        order[0] = 0;
        let mut k = 0;
        while k < seq.len() {
            let c = seq[k];
            k += 1;
            for col in 0..self.width {
                let d = self.get(c, col);
                if order[d as usize] == UNDEF {
                    order[d as usize] = seq.len() as u32;
                    seq.push(d);
                }
            }
        }
        let mut rows = Vec::with_capacity(seq.len() * self.width);
        for &c in &seq {
            for col in 0..self.width {
                rows.push(order[self.get(c, col) as usize]);
            }
        }
        rows
    }
}

fn columns(w: &Word) -> Vec<usize> {
    w.letters().map(|(g, e)| 2 * g + (e < 0) as usize).collect()
}

/// Enumerates the cosets of the subgroup generated by `subgroup` in the group
/// presented by `p`, using at most `max_cosets` simultaneous cosets.
pub fn coset_enumerate(p: &Presentation, subgroup: &[Word], max_cosets: usize) -> CosetTable {
    let start = Instant::now();
    let rank = p.rank();
    let max = max_cosets.max(1);
    let mut relators: Vec<Vec<usize>> = p
        .relators()
        .iter()
        .map(|r| columns(r.representative()))
        .collect();
    relators.sort_by_key(Vec::len);
    let sub: Vec<Vec<usize>> = subgroup.iter().map(columns).collect();

    let mut e = Enumerator::new(rank, max);
    let finish = |e: &Enumerator, status: EnumerationStatus, rows: Vec<u32>| CosetTable {
        rank,
        subgroup_generators: subgroup.to_vec(),
        rows,
        status,
        stats: e.stats,
        runtime_ms: start.elapsed().as_millis(),
    };
    let overflow = EnumerationStatus::Overflow { max_cosets: max };

    for h in &sub {
        loop {
            if !e.alive(0) {
                unreachable!("coset 0 is never merged away");
            }
            match e.scan(0, h, true) {
                Ok(()) => break,
                Err(Full) => {
                    if e.make_room(0, &relators, &sub).is_none() {
                        return finish(&e, overflow, Vec::new());
                    }
                }
            }
        }
    }

    let mut alpha: u32 = 0;
    'outer: while (alpha as usize) < e.n_alloc() {
        if e.alive(alpha) {
            let mut k = 0;
            while k < relators.len() {
                if !e.alive(alpha) {
                    break;
                }
                match e.scan(alpha, &relators[k], true) {
                    Ok(()) => k += 1,
                    Err(Full) => match e.make_room(alpha, &relators, &sub) {
                        None => return finish(&e, overflow, Vec::new()),
                        Some(pos) => {
                            alpha = pos;
                            continue 'outer;
                        }
                    },
                }
            }
            let mut col = 0;
            while col < e.width {
                if !e.alive(alpha) {
                    break;
                }
                if e.get(alpha, col) == UNDEF {
                    if let Err(Full) = e.define(alpha, col) {
                        match e.make_room(alpha, &relators, &sub) {
                            None => return finish(&e, overflow, Vec::new()),
                            Some(pos) => {
                                alpha = pos;
                                continue 'outer;
                            }
                        }
                    }
                }
                col += 1;
            }
        }
        alpha += 1;
    }

    e.compact();
    debug_assert!(e.table.iter().all(|&x| x != UNDEF));
    let index = e.n_alloc();
    let rows = e.standardize();
    finish(&e, EnumerationStatus::Complete { index }, rows)
}
