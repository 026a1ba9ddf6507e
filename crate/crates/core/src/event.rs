//! States and events of a finite state space `[0, n)`.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A state of the ambient space, `0 <= index < n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct StateId(usize);

impl StateId {
    pub fn new(index: usize, n: usize) -> Result<Self> {
        if index < n {
            Ok(StateId(index))
        } else {
            Err(Error::IndexOutOfRange { index, n })
        }
    }

    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

const WORD: usize = 64;

/// A subset of `[0, n)` stored as a bitset.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EventSet {
    n: usize,
    words: Vec<u64>,
}

impl EventSet {
    pub fn empty(n: usize) -> Self {
        EventSet { n, words: vec![0; n.div_ceil(WORD)] }
    }

    pub fn full(n: usize) -> Self {
        let mut s = Self::empty(n);
        for x in 0..n {
            s.insert_unchecked(x);
        }
        s
    }

    pub fn singleton(x: usize, n: usize) -> Result<Self> {
        let mut s = Self::empty(n);
        s.insert(x)?;
        Ok(s)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I, n: usize) -> Result<Self> {
        let mut s = Self::empty(n);
        for x in indices {
            s.insert(x)?;
        }
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn insert(&mut self, x: usize) -> Result<()> {
        if x >= self.n {
            return Err(Error::IndexOutOfRange { index: x, n: self.n });
        }
        self.insert_unchecked(x);
        Ok(())
    }

    fn insert_unchecked(&mut self, x: usize) {
        self.words[x / WORD] |= 1 << (x % WORD);
    }

    pub fn remove(&mut self, x: usize) {
        if x < self.n {
            self.words[x / WORD] &= !(1 << (x % WORD));
        }
    }

    pub fn contains(&self, x: usize) -> bool {
        x < self.n && self.words[x / WORD] & (1 << (x % WORD)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn min(&self) -> Option<usize> {
        self.iter().next()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&x| self.contains(x))
    }

    fn same_space(&self, other: &EventSet) -> Result<()> {
        crate::error::check_dim(self.n, other.n)
    }

    pub fn union(&self, other: &EventSet) -> Result<EventSet> {
        self.same_space(other)?;
        Ok(self.zip_with(other, |a, b| a | b))
    }

    pub fn intersection(&self, other: &EventSet) -> Result<EventSet> {
        self.same_space(other)?;
        Ok(self.zip_with(other, |a, b| a & b))
    }

    pub fn difference(&self, other: &EventSet) -> Result<EventSet> {
        self.same_space(other)?;
        Ok(self.zip_with(other, |a, b| a & !b))
    }

    pub fn complement(&self) -> EventSet {
        EventSet::full(self.n).zip_with(self, |a, b| a & !b)
    }

    pub fn is_subset(&self, other: &EventSet) -> bool {
        self.n == other.n && self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &EventSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    fn zip_with(&self, other: &EventSet, f: impl Fn(u64, u64) -> u64) -> EventSet {
        EventSet {
            n: self.n,
            words: self.words.iter().zip(&other.words).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for EventSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for EventSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_set_algebra() {
        let a = EventSet::from_indices([0, 2, 70], 80).unwrap();
        let b = EventSet::from_indices([2, 3], 80).unwrap();
        assert_eq!(a.union(&b).unwrap().to_vec(), vec![0, 2, 3, 70]);
        assert_eq!(a.intersection(&b).unwrap().to_vec(), vec![2]);
        assert_eq!(a.difference(&b).unwrap().to_vec(), vec![0, 70]);
        assert_eq!(a.complement().len(), 77);
        assert_eq!(a.min(), Some(0));
        assert!(EventSet::empty(3).is_empty());
        assert!(EventSet::from_indices([2], 3).unwrap().is_subset(&EventSet::full(3)));
    }

    #[test]
    fn out_of_range_is_rejected() {
        assert_eq!(
            EventSet::from_indices([3], 3),
            Err(Error::IndexOutOfRange { index: 3, n: 3 })
        );
        assert!(StateId::new(2, 2).is_err());
        assert!(EventSet::empty(2).union(&EventSet::empty(3)).is_err());
    }
}
