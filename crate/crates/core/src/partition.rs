//! Partitions of `[0, n)`.
//!
//! A sub-σ-algebra of a finite space is determined by its atoms, so every
//! conditioning σ-algebra is handled through its atom partition. Blocks are
//! kept in canonical order (sorted by least element), which makes structural
//! equality the same as equality of the generated σ-algebras.
//!
//! Essential equality under a measure `ν` compares traces on `support(ν)`.
//! On a finite space a set `C` has `ν(C) = 1` exactly when `C ⊇ support(ν)`,
//! and traces only get coarser-or-equal as the carrier shrinks, so two
//! σ-algebras agree on some full-measure set iff they agree on the support.

use std::collections::HashMap;

use serde::{Serialize, Serializer};

use crate::error::{check_dim, Error, Result};
use crate::event::{EventSet, StateId};
use crate::measure::Measure;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    blocks: Vec<EventSet>,
    labels: Vec<usize>,
}

impl Partition {
    /// Builds from a block label per state; labels need not be canonical.
    pub fn from_labels(labels: &[usize]) -> Self {
        let n = labels.len();
        let mut renumber: HashMap<usize, usize> = HashMap::new();
        let mut canonical = Vec::with_capacity(n);
        for &l in labels {
            let next = renumber.len();
            canonical.push(*renumber.entry(l).or_insert(next));
        }
        let mut blocks = vec![EventSet::empty(n); renumber.len()];
        for (x, &b) in canonical.iter().enumerate() {
            blocks[b].insert(x).expect("state in range");
        }
        Partition { blocks, labels: canonical }
    }

    pub fn from_blocks(blocks: Vec<EventSet>, n: usize) -> Result<Self> {
        let mut labels = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            check_dim(n, block.n())?;
            if block.is_empty() {
                return Err(Error::EmptyBlock);
            }
            for x in block.iter() {
                if labels[x] != usize::MAX {
                    return Err(Error::OverlappingBlocks(x));
                }
                labels[x] = b;
            }
        }
        if let Some(x) = labels.iter().position(|&l| l == usize::MAX) {
            return Err(Error::UncoveredStates(x));
        }
        Ok(Partition::from_labels(&labels))
    }

    pub fn from_index_lists(lists: &[Vec<usize>], n: usize) -> Result<Self> {
        let blocks = lists
            .iter()
            .map(|l| EventSet::from_indices(l.iter().copied(), n))
            .collect::<Result<Vec<_>>>()?;
        Partition::from_blocks(blocks, n)
    }

    pub fn discrete(n: usize) -> Self {
        Partition::from_labels(&(0..n).collect::<Vec<_>>())
    }

    pub fn trivial(n: usize) -> Self {
        Partition::from_labels(&vec![0; n])
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn blocks(&self) -> &[EventSet] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Canonical label of each state: the index of its block.
    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label_of(&self, x: usize) -> usize {
        self.labels[x]
    }

    pub fn block_of(&self, x: StateId) -> Result<&EventSet> {
        let x = StateId::new(x.index(), self.n())?.index();
        Ok(&self.blocks[self.labels[x]])
    }

    pub fn same_block(&self, x: usize, y: usize) -> bool {
        self.labels[x] == self.labels[y]
    }

    pub fn to_index_lists(&self) -> Vec<Vec<usize>> {
        self.blocks.iter().map(EventSet::to_vec).collect()
    }

    pub fn refines(&self, q: &Partition) -> Result<bool> {
        check_dim(self.n(), q.n())?;
        Ok(self.blocks.iter().all(|b| {
            let mut it = b.iter().map(|x| q.labels[x]);
            let first = it.next();
            it.all(|l| Some(l) == first)
        }))
    }

    /// Coarsest common refinement.
    pub fn meet(&self, q: &Partition) -> Result<Partition> {
        check_dim(self.n(), q.n())?;
        let k = q.num_blocks();
        let labels: Vec<usize> =
            (0..self.n()).map(|x| self.labels[x] * k + q.labels[x]).collect();
        Ok(Partition::from_labels(&labels))
    }

    /// Finest common coarsening.
    pub fn join(&self, q: &Partition) -> Result<Partition> {
        check_dim(self.n(), q.n())?;
        let n = self.n();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for p in [self, q] {
            for block in &p.blocks {
                let mut members = block.iter();
                if let Some(first) = members.next() {
                    for y in members {
                        let (a, b) = (find(&mut parent, first), find(&mut parent, y));
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
        let labels: Vec<usize> = (0..n).map(|x| find(&mut parent, x)).collect();
        Ok(Partition::from_labels(&labels))
    }

    pub fn trace(&self, carrier: &EventSet) -> Result<TracePartition> {
        check_dim(self.n(), carrier.n())?;
        let mut blocks: Vec<EventSet> = self
            .blocks
            .iter()
            .map(|b| b.intersection(carrier).expect("same space"))
            .filter(|b| !b.is_empty())
            .collect();
        // canonical order, as for partitions: by least element
        blocks.sort_by_key(|b| b.min());
        Ok(TracePartition { carrier: carrier.clone(), blocks })
    }

    /// Equal traces on `support(nu)`.
    pub fn essentially_equal(&self, q: &Partition, nu: &Measure) -> Result<bool> {
        check_dim(self.n(), q.n())?;
        check_dim(self.n(), nu.n())?;
        let s = nu.support();
        Ok(self.trace(&s)? == q.trace(&s)?)
    }

    /// Atoms of the σ-algebra generated by `sets`: classes of equal membership signatures.
    pub fn generated_by(sets: &[EventSet], n: usize) -> Result<Partition> {
        for s in sets {
            check_dim(n, s.n())?;
        }
        let mut classes: HashMap<Vec<bool>, usize> = HashMap::new();
        let labels: Vec<usize> = (0..n)
            .map(|x| {
                let sig: Vec<bool> = sets.iter().map(|s| s.contains(x)).collect();
                let next = classes.len();
                *classes.entry(sig).or_insert(next)
            })
            .collect();
        Ok(Partition::from_labels(&labels))
    }
}

impl std::fmt::Debug for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.blocks.iter()).finish()
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.blocks.iter())
    }
}

/// A partition of a carrier set, the atoms of a trace σ-algebra `𝒢 ∩ C`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct TracePartition {
    carrier: EventSet,
    blocks: Vec<EventSet>,
}

impl TracePartition {
    pub fn carrier(&self) -> &EventSet {
        &self.carrier
    }

    pub fn blocks(&self) -> &[EventSet] {
        &self.blocks
    }

    /// The trace as a partition of the whole space when the carrier is everything.
    pub fn to_partition(&self) -> Option<Partition> {
        if self.carrier.len() != self.carrier.n() {
            return None;
        }
        Partition::from_blocks(self.blocks.clone(), self.carrier.n()).ok()
    }
}

pub fn from_blocks(blocks: Vec<EventSet>, n: usize) -> Result<Partition> {
    Partition::from_blocks(blocks, n)
}

pub fn generated_by(sets: &[EventSet], n: usize) -> Result<Partition> {
    Partition::generated_by(sets, n)
}

pub fn block_of(p: &Partition, x: StateId) -> Result<&EventSet> {
    p.block_of(x)
}

pub fn refines(p: &Partition, q: &Partition) -> Result<bool> {
    p.refines(q)
}

pub fn meet(p: &Partition, q: &Partition) -> Result<Partition> {
    p.meet(q)
}

pub fn join(p: &Partition, q: &Partition) -> Result<Partition> {
    p.join(q)
}

pub fn trace(p: &Partition, c: &EventSet) -> Result<TracePartition> {
    p.trace(c)
}

pub fn essentially_equal(p: &Partition, q: &Partition, nu: &Measure) -> Result<bool> {
    p.essentially_equal(q, nu)
}
