//! Regular conditional distributions on finite spaces.
//!
//! A kernel `R` is an r.c.d. for `ν` given some σ-algebra iff it is
//! stationary for `ν` and total on the atoms of σ(R), the partition of
//! states into classes of identical rows. In that case σ(R) is the
//! conditioning σ-algebra, unique up to its trace on `support(ν)`.
//!
//! [`oracle_is_rcd`] decides the same question from the definition alone by
//! scanning every partition, and never touches [`sigma_of_kernel`] or the
//! property checkers.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{check_dim, Error, Result};
use crate::event::EventSet;
use crate::instance::Mode;
use crate::measure::{Kernel, Measure};
use crate::partition::Partition;
use crate::props::{Checker, RestrictionScope, Witness};
use crate::rational::Rat;

/// Largest space the brute-force oracle will scan (Bell(10) = 115975 partitions).
pub const MAX_ORACLE_N: usize = 10;

/// σ(R): states grouped by identical rows.
pub fn sigma_of_kernel(r: &Kernel) -> Partition {
    let mut classes: HashMap<&[Rat], usize> = HashMap::new();
    let labels: Vec<usize> = r
        .rows()
        .iter()
        .map(|row| {
            let next = classes.len();
            *classes.entry(row.as_slice()).or_insert(next)
        })
        .collect();
    Partition::from_labels(&labels)
}

/// σ(R) under the given mode. In float mode rows within `epsilon` in max-norm
/// are clustered; a cluster containing two rows further apart than `epsilon`
/// is reported as [`Error::AmbiguousAtoms`].
pub fn sigma_of_kernel_in(r: &Kernel, mode: &Mode) -> Result<Partition> {
    let Mode::Float { epsilon } = mode else { return Ok(sigma_of_kernel(r)) };
    let n = r.n();
    let distance = |x: usize, y: usize| -> Rat {
        r.row(x).iter().zip(r.row(y)).map(|(a, b)| (a - b).abs()).max().unwrap_or_default()
    };
    let mut label: Vec<usize> = (0..n).collect();
    for x in 0..n {
        for y in x + 1..n {
            if distance(x, y) <= *epsilon && label[x] != label[y] {
                let (keep, drop) = (label[x].min(label[y]), label[x].max(label[y]));
                for l in label.iter_mut().filter(|l| **l == drop) {
                    *l = keep;
                }
            }
        }
    }
    for x in 0..n {
        for y in x + 1..n {
            if label[x] == label[y] && distance(x, y) > *epsilon {
                return Err(Error::AmbiguousAtoms { x, y });
            }
        }
    }
    Ok(Partition::from_labels(&label))
}

/// `ν(·|G)`: on a positive-mass block `B`, every row is `ν(·|B)`. On a null
/// block every row is the point mass at the block's least state, so rows stay
/// constant on blocks and the kernel is proper and total at every state.
pub fn make_rcd(nu: &Measure, g: &Partition) -> Result<Kernel> {
    check_dim(nu.n(), g.n())?;
    let n = nu.n();
    let per_block = g
        .blocks()
        .iter()
        .map(|b| match nu.conditional(b) {
            Ok(m) => Ok(m),
            Err(Error::ZeroMassEvent) => {
                let anchor = b.min().expect("blocks are nonempty");
                Measure::point_mass(crate::event::StateId::new(anchor, n)?, n)
            }
            Err(e) => Err(e),
        })
        .collect::<Result<Vec<_>>>()?;
    Kernel::from_measures((0..n).map(|x| per_block[g.label_of(x)].clone()).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    Stationarity,
    Totality,
    AbsContinuity,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RcdVerdict {
    pub is_rcd: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conditioning: Option<Partition>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failed_condition: Option<Condition>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub abs_continuous: Option<bool>,
}

impl RcdVerdict {
    fn failed(condition: Condition, witness: Option<Witness>) -> Self {
        RcdVerdict {
            is_rcd: false,
            conditioning: None,
            failed_condition: Some(condition),
            witness,
            abs_continuous: None,
        }
    }
}

/// Stationarity, then totality on σ(R), then (with `dominated`) `R_x ≪ ν`.
pub fn decide(r: &Kernel, nu: &Measure, mode: &Mode, dominated: bool) -> Result<RcdVerdict> {
    check_dim(r.n(), nu.n())?;
    let checker = Checker::for_mode(mode);
    let sigma = sigma_of_kernel_in(r, mode)?;
    let ac = if dominated { Some(checker.abs_continuous(r, nu)?) } else { None };
    let abs_continuous = ac.as_ref().map(|v| v.holds);
    let stationary = checker.stationary(r, nu, &RestrictionScope::unrestricted())?;
    let mut verdict = if !stationary.holds {
        RcdVerdict::failed(Condition::Stationarity, stationary.witness)
    } else {
        let total = checker.total(r, nu, &sigma)?;
        if !total.holds {
            RcdVerdict::failed(Condition::Totality, total.witness)
        } else if let Some(ac) = ac.filter(|v| !v.holds) {
            RcdVerdict::failed(Condition::AbsContinuity, ac.witness)
        } else {
            RcdVerdict {
                is_rcd: true,
                conditioning: Some(sigma),
                failed_condition: None,
                witness: None,
                abs_continuous: None,
            }
        }
    };
    verdict.abs_continuous = abs_continuous;
    Ok(verdict)
}

pub fn is_rcd(r: &Kernel, nu: &Measure) -> Result<RcdVerdict> {
    decide(r, nu, &Mode::Rational, false)
}

/// The variant for σ-algebras generated by a countable partition: also requires `R_x ≪ ν`.
pub fn is_rcd_gcp(r: &Kernel, nu: &Measure) -> Result<RcdVerdict> {
    decide(r, nu, &Mode::Rational, true)
}

/// `π = νR`. When `R` is total on σ(R) for `ν`, `R` is an r.c.d. for `π` given σ(R).
pub fn stationarize(r: &Kernel, nu: &Measure) -> Result<Measure> {
    r.propagate(nu)
}

/// Partitions of `[0, n)` in restricted-growth-string order.
#[derive(Debug, Clone)]
pub struct Partitions {
    rgs: Vec<usize>,
    done: bool,
}

impl Iterator for Partitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        if self.done {
            return None;
        }
        let current = Partition::from_labels(&self.rgs);
        // advance: bump the rightmost position that may grow, zero what follows
        let n = self.rgs.len();
        let mut advanced = false;
        for i in (1..n).rev() {
            let prefix_max = self.rgs[..i].iter().copied().max().unwrap_or(0);
            if self.rgs[i] <= prefix_max {
                self.rgs[i] += 1;
                self.rgs[i + 1..].iter_mut().for_each(|v| *v = 0);
                advanced = true;
                break;
            }
        }
        self.done = !advanced;
        Some(current)
    }
}

pub fn enumerate_partitions(n: usize) -> Result<Partitions> {
    if n > MAX_ORACLE_N {
        return Err(Error::TooLarge { n, max: MAX_ORACLE_N });
    }
    Ok(Partitions { rgs: vec![0; n], done: false })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleResult {
    pub accepted: Vec<Partition>,
    pub partitions_scanned: usize,
}

/// The defining conditions of `R = ν(·|G)`, checked directly: rows constant on
/// every block of `G`, and `Σ_{x∈A} ν(x) r_xy = ν(A ∩ {y})` for every block `A`
/// and state `y` (general events follow by additivity).
pub fn satisfies_rcd_definition(r: &Kernel, nu: &Measure, g: &Partition) -> bool {
    if r.n() != nu.n() || r.n() != g.n() {
        return false;
    }
    g.blocks().iter().all(|block| {
        let mut members = block.iter();
        let first = members.next().expect("blocks are nonempty");
        let measurable = members.all(|x| r.row(x) == r.row(first));
        measurable
            && (0..r.n()).all(|y| {
                let lhs: Rat = block.iter().map(|x| nu.weight(x) * r.entry(x, y)).sum();
                let rhs = if block.contains(y) { nu.weight(y).clone() } else { Rat::zero() };
                lhs == rhs
            })
    })
}

/// Every partition `G` for which `R` is exactly an r.c.d. for `ν` given `G`.
/// The scan is parallel; `accepted` keeps enumeration order.
pub fn oracle_is_rcd(r: &Kernel, nu: &Measure) -> Result<OracleResult> {
    check_dim(r.n(), nu.n())?;
    let all: Vec<Partition> = enumerate_partitions(r.n())?.collect();
    let partitions_scanned = all.len();
    let accepted = all.into_par_iter().filter(|g| satisfies_rcd_definition(r, nu, g)).collect();
    Ok(OracleResult { accepted, partitions_scanned })
}

/// Cross-check of the singleton reduction: `∫_A R_x(B) ν(dx) = ν(A ∩ B)` for
/// arbitrary events `A ∈ σ(G)` (given as a union of blocks) and `B`.
pub fn integral_identity_holds(r: &Kernel, nu: &Measure, a: &EventSet, b: &EventSet) -> Result<bool> {
    let lhs: Rat = a.iter().map(|x| nu.weight(x) * r.mass(x, b)).sum();
    Ok(lhs == nu.measure_of_set(&a.intersection(b)?)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::fixtures::{e3, e4, kernel, measure};
    use crate::props::{self, check_total};
    use proptest::prelude::*;

    fn part(lists: &[&[usize]], n: usize) -> Partition {
        let lists: Vec<Vec<usize>> = lists.iter().map(|l| l.to_vec()).collect();
        Partition::from_index_lists(&lists, n).unwrap()
    }

    /// Bell numbers by the triangle recurrence, independent of the enumerator.
    fn bell(n: usize) -> usize {
        let mut row = vec![1usize];
        for _ in 0..n {
            let mut next = vec![*row.last().unwrap()];
            for v in &row {
                let last = *next.last().unwrap();
                next.push(last + v);
            }
            row = next;
        }
        row[0]
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(sigma_of_kernel(&e4()), part(&[&[0], &[1], &[2, 3]], 4));
        assert_eq!(sigma_of_kernel(&e3()), part(&[&[0], &[1, 2]], 3));
        let k = Kernel::constant(&measure(&["1/2", "1/4", "1/4"]));
        assert_eq!(sigma_of_kernel(&k), Partition::trivial(3));
        assert_eq!(sigma_of_kernel(&Kernel::identity(4).unwrap()), Partition::discrete(4));
    }

    #[test]
    fn float_sigma_clusters_and_detects_ambiguity() {
        let mode = Mode::Float { epsilon: Rat::new(1, 100) };
        let k = kernel(&[
            &["1/2", "1/2", "0"],
            &["51/100", "49/100", "0"],
            &["0", "0", "1"],
        ]);
        assert_eq!(sigma_of_kernel_in(&k, &mode).unwrap(), part(&[&[0, 1], &[2]], 3));
        assert_eq!(sigma_of_kernel(&k), Partition::discrete(3));
        // a chain 0 ~ 1 ~ 2 with 0 and 2 too far apart
        let chain = kernel(&[
            &["50/100", "50/100", "0"],
            &["51/100", "49/100", "0"],
            &["52/100", "48/100", "0"],
        ]);
        assert_eq!(sigma_of_kernel_in(&chain, &mode), Err(Error::AmbiguousAtoms { x: 0, y: 2 }));
    }

    #[test]
    fn make_rcd_examples() {
        let nu = measure(&["1/2", "1/4", "1/4"]);
        assert_eq!(make_rcd(&nu, &part(&[&[0], &[1, 2]], 3)).unwrap(), e3());
        assert_eq!(make_rcd(&nu, &Partition::trivial(3)).unwrap(), Kernel::constant(&nu));
        let atom = measure(&["1", "0", "0"]);
        let r = make_rcd(&atom, &part(&[&[0], &[1, 2]], 3)).unwrap();
        // the null block {1,2} gets the point mass at its least state 1
        assert_eq!(r, kernel(&[&["1", "0", "0"], &["0", "1", "0"], &["0", "1", "0"]]));
        assert!(make_rcd(&nu, &Partition::trivial(2)).is_err());
    }

    #[test]
    fn is_rcd_examples() {
        let u4 = Measure::uniform(4).unwrap();
        let v = is_rcd(&e4(), &u4).unwrap();
        assert!(!v.is_rcd);
        assert_eq!(v.failed_condition, Some(Condition::Stationarity));
        assert!(v.witness.is_some() && v.conditioning.is_none());

        let pi = measure(&["0", "1/3", "1/3", "1/3"]);
        let v = is_rcd(&e4(), &pi).unwrap();
        assert!(v.is_rcd);
        assert_eq!(v.conditioning, Some(part(&[&[0], &[1], &[2, 3]], 4)));

        let v = is_rcd(&e3(), &measure(&["1/2", "1/4", "1/4"])).unwrap();
        assert!(v.is_rcd);
        assert_eq!(v.conditioning, Some(part(&[&[0], &[1, 2]], 3)));
    }

    #[test]
    fn totality_failure_is_reported() {
        // stationary for the uniform measure on {1,2} but row 0 leaves its atom
        let r = kernel(&[&["0", "1/2", "1/2"], &["0", "1/2", "1/2"], &["0", "1/2", "1/2"]]);
        let v = is_rcd(&r, &measure(&["0", "1/2", "1/2"])).unwrap();
        assert!(v.is_rcd, "trivial σ(R) has one block holding everything");
        let r = kernel(&[&["0", "1", "0"], &["0", "0", "1"], &["0", "1", "0"]]);
        let nu = measure(&["0", "1/2", "1/2"]);
        let v = is_rcd(&r, &nu).unwrap();
        assert_eq!(v.failed_condition, Some(Condition::Totality));
    }

    #[test]
    fn gcp_examples() {
        let pi = measure(&["0", "1/3", "1/3", "1/3"]);
        let v = is_rcd_gcp(&e4(), &pi).unwrap();
        assert!(v.is_rcd);
        assert_eq!(v.abs_continuous, Some(true));
        let v = is_rcd_gcp(&e4(), &Measure::uniform(4).unwrap()).unwrap();
        assert!(!v.is_rcd);
        assert_eq!(v.failed_condition, Some(Condition::Stationarity));
    }

    #[test]
    fn stationarize_examples() {
        let pi = stationarize(&e4(), &Measure::uniform(4).unwrap()).unwrap();
        assert_eq!(pi, measure(&["0", "1/3", "1/3", "1/3"]));
        assert!(is_rcd(&e4(), &pi).unwrap().is_rcd);
        let nu = measure(&["1/6", "1/3", "1/2"]);
        assert_eq!(stationarize(&Kernel::identity(3).unwrap(), &nu).unwrap(), nu);
        let mu = measure(&["1/5", "0", "4/5"]);
        assert_eq!(stationarize(&Kernel::constant(&mu), &nu).unwrap(), mu);
    }

    #[test]
    fn enumeration_counts_match_bell_numbers() {
        assert_eq!(bell(5), 52);
        for n in 0..=7 {
            let all: Vec<Partition> = enumerate_partitions(n).unwrap().collect();
            assert_eq!(all.len(), bell(n), "n = {n}");
            let distinct: std::collections::HashSet<_> = all.iter().cloned().collect();
            assert_eq!(distinct.len(), all.len());
        }
        assert_eq!(enumerate_partitions(1).unwrap().count(), 1);
        assert_eq!(enumerate_partitions(3).unwrap().count(), 5);
        assert_eq!(enumerate_partitions(11).err(), Some(Error::TooLarge { n: 11, max: 10 }));
        let first_two: Vec<_> = enumerate_partitions(3).unwrap().take(2).collect();
        assert_eq!(first_two, vec![Partition::trivial(3), part(&[&[0, 1], &[2]], 3)]);
    }

    #[test]
    fn oracle_examples() {
        let res = oracle_is_rcd(&e3(), &measure(&["1/2", "1/4", "1/4"])).unwrap();
        assert_eq!(res.partitions_scanned, 5);
        assert!(res.accepted.contains(&part(&[&[0], &[1, 2]], 3)));
        let res = oracle_is_rcd(&e4(), &Measure::uniform(4).unwrap()).unwrap();
        assert!(res.accepted.is_empty());
        assert_eq!(res.partitions_scanned, 15);
        let nu = measure(&["1/6", "1/3", "1/2"]);
        let res = oracle_is_rcd(&Kernel::identity(3).unwrap(), &nu).unwrap();
        assert!(res.accepted.contains(&Partition::discrete(3)));
    }

    #[test]
    fn oracle_accepts_coarser_partitions_off_support() {
        // the null atom {0} may merge with {1}: rows differ but the merged block
        // would not be measurable, so only σ(R) itself qualifies here
        let pi = measure(&["0", "1/3", "1/3", "1/3"]);
        let res = oracle_is_rcd(&e4(), &pi).unwrap();
        assert_eq!(res.accepted, vec![part(&[&[0], &[1], &[2, 3]], 4)]);
        // with identical rows on a null state, a coarser partition is accepted too
        let r = kernel(&[&["0", "1", "0"], &["0", "1", "0"], &["0", "0", "1"]]);
        let nu = measure(&["0", "1/2", "1/2"]);
        let res = oracle_is_rcd(&r, &nu).unwrap();
        assert!(res.accepted.contains(&part(&[&[0, 1], &[2]], 3)));
        assert!(res.accepted.contains(&part(&[&[0], &[1], &[2]], 3)));
        for g in &res.accepted {
            assert!(g.essentially_equal(&sigma_of_kernel(&r), &nu).unwrap());
        }
    }

    fn arb_instance() -> impl Strategy<Value = (Measure, Partition)> {
        (1usize..6).prop_flat_map(|n| {
            let nu = proptest::collection::vec(0u64..4, n)
                .prop_filter("positive", |w| w.iter().any(|&x| x > 0))
                .prop_map(|w| Measure::from_integer_weights(&w).unwrap());
            let g = proptest::collection::vec(0usize..n, n).prop_map(|l| Partition::from_labels(&l));
            (nu, g)
        })
    }

    proptest! {
        #[test]
        fn synthesized_kernels_are_rcds((nu, g) in arb_instance()) {
            let r = make_rcd(&nu, &g).unwrap();
            prop_assert!(satisfies_rcd_definition(&r, &nu, &g));
            prop_assert!(is_rcd(&r, &nu).unwrap().is_rcd);
            let gcp = is_rcd_gcp(&r, &nu).unwrap();
            prop_assert!(gcp.is_rcd);
            prop_assert_eq!(gcp.abs_continuous, Some(true));
            let s = nu.support();
            prop_assert_eq!(sigma_of_kernel(&r).trace(&s).unwrap(), g.trace(&s).unwrap());
            let sigma = sigma_of_kernel(&r);
            for x in 0..r.n() {
                let block = &sigma.blocks()[sigma.label_of(x)];
                for y in block.iter() {
                    prop_assert_eq!(r.row(x), r.row(y));
                    prop_assert_eq!(r.mass(x, block), r.mass(y, block));
                }
            }
            prop_assert!(check_total(&r, &nu, &g).unwrap().holds);
            prop_assert!(props::check_proper(&r, &nu, &g).unwrap().holds);
        }

        #[test]
        fn integral_identity_holds_on_all_events((nu, g) in arb_instance(), seed in any::<u64>()) {
            let r = make_rcd(&nu, &g).unwrap();
            let n = nu.n();
            // A: a union of blocks picked by seed bits, B: an arbitrary event
            let a = g.blocks().iter().enumerate()
                .filter(|(i, _)| seed >> i & 1 == 1)
                .fold(EventSet::empty(n), |acc, (_, b)| acc.union(b).unwrap());
            let b = EventSet::from_indices((0..n).filter(|x| seed >> (32 + x) & 1 == 1), n).unwrap();
            prop_assert!(integral_identity_holds(&r, &nu, &a, &b).unwrap());
        }
    }
}
