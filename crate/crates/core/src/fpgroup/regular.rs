//! The quotient group acting on its own cosets.

use std::collections::VecDeque;

use super::CosetTable;
use crate::group::Group;
use crate::words::Word;
use crate::{Error, Result};

/// `G / H` for a complete coset table of a normal subgroup `H`, with cosets as elements.
#[derive(Clone, Debug)]
pub struct CosetGroup {
    table: CosetTable,
    /// A word reaching each coset from coset 0.
    transversal: Vec<Word>,
}

impl CosetGroup {
    pub fn new(table: CosetTable) -> Result<Self> {
        let n = table
            .index()
            .ok_or_else(|| Error::InvalidArgument("coset table is not complete".into()))?;
        let rank = table.rank();
        let mut transversal: Vec<Option<Word>> = vec![None; n];
        transversal[0] = Some(Word::identity(rank));
        let mut queue = VecDeque::from([0usize]);
        while let Some(c) = queue.pop_front() {
            let w = transversal[c].clone().unwrap();
            for col in 0..2 * rank {
                let d = table.entry(c, col);
                if transversal[d].is_none() {
                    let e = if col % 2 == 0 { 1 } else { -1 };
                    transversal[d] = Some(w.mul(&Word::from_letters(rank, [(col / 2, e)])?));
                    queue.push_back(d);
                }
            }
        }
        let transversal: Vec<Word> = transversal.into_iter().map(Option::unwrap).collect();
        for w in &transversal {
            for h in table.subgroup_generators() {
                if table.act(0, &h.conjugate_by(w)?) != Some(0) {
                    return Err(Error::InvalidArgument("subgroup is not normal".into()));
                }
            }
        }
        Ok(CosetGroup { table, transversal })
    }

    pub fn order(&self) -> usize {
        self.transversal.len()
    }

    pub fn table(&self) -> &CosetTable {
        &self.table
    }

    pub fn word(&self, x: usize) -> &Word {
        &self.transversal[x]
    }

    pub fn element(&self, w: &Word) -> Result<usize> {
        if w.rank() != self.table.rank() {
            return Err(Error::RankMismatch {
                expected: self.table.rank(),
                found: w.rank(),
            });
        }
        Ok(self.table.act(0, w).unwrap())
    }

    pub fn generator(&self, i: usize) -> usize {
        self.table.entry(0, 2 * i)
    }
}

impl Group for CosetGroup {
    type Element = usize;

    fn identity(&self) -> usize {
        0
    }

    fn multiply(&self, x: &usize, y: &usize) -> usize {
        self.table.act(*x, &self.transversal[*y]).unwrap()
    }

    fn inverse(&self, x: &usize) -> usize {
        self.table.act(0, &self.transversal[*x].inverse()).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpgroup::{coset_enumerate, g2_presentation, DEFAULT_MAX_COSETS};
    use crate::words::Alphabet;

    #[test]
    fn g2_as_coset_group() {
        let p = g2_presentation();
        let g = CosetGroup::new(coset_enumerate(&p, &[], DEFAULT_MAX_COSETS)).unwrap();
        assert_eq!(g.order(), 27);
        for x in 0..27 {
            assert_eq!(g.power(&x, 3), 0);
            assert_eq!(g.multiply(&x, &g.inverse(&x)), 0);
        }
        let a = g.generator(0);
        let b = g.generator(1);
        assert_ne!(g.multiply(&a, &b), g.multiply(&b, &a));
    }

    #[test]
    fn rejects_non_normal_subgroup() {
        let p = g2_presentation();
        let a = Alphabet::letters(2).parse("a").unwrap();
        let t = coset_enumerate(&p, &[a], DEFAULT_MAX_COSETS);
        assert_eq!(t.index(), Some(9));
        assert!(CosetGroup::new(t).is_err());
    }
}
