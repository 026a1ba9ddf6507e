//! Random measures, kernels and partitions with exact rational entries.

use rand::Rng;

use super::rng::{rng, stream_seed};
use crate::error::{check_dim, Result};
use crate::measure::{Kernel, Measure};
use crate::partition::Partition;
use crate::rational::Rat;
use crate::rcd::make_rcd;

/// Raw integer weights are drawn from `1..=MAX_WEIGHT` before normalizing.
pub const MAX_WEIGHT: u64 = 6;

/// Largest `n` for which [`gen_partition`] is exactly uniform (Bell numbers fit in u128).
pub const MAX_UNIFORM_PARTITION_N: usize = 40;

fn weights<R: Rng>(rng: &mut R, len: usize, allow_zeros: bool) -> Vec<u64> {
    let mut w: Vec<u64> = (0..len)
        .map(|_| {
            if allow_zeros && rng.random_ratio(1, 4) {
                0
            } else {
                rng.random_range(1..=MAX_WEIGHT)
            }
        })
        .collect();
    if w.iter().all(|&v| v == 0) {
        let i = rng.random_range(0..len);
        w[i] = rng.random_range(1..=MAX_WEIGHT);
    }
    w
}

/// Zeroes each coordinate with probability 1/4 when `allow_zeros`, always
/// keeping at least one positive weight.
pub fn gen_measure(n: usize, seed: u64, allow_zeros: bool) -> Measure {
    assert!(n >= 1, "measures need a nonempty space");
    let mut r = rng(seed);
    Measure::from_integer_weights(&weights(&mut r, n, allow_zeros)).expect("positive weights")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Structure {
    /// Independent random rows.
    Dense,
    /// Rows constant on each block and supported inside it.
    Block(Partition),
    /// Exactly `make_rcd(nu, g)`.
    Rcd(Measure, Partition),
    /// `make_rcd(nu, g)` with mass moved between two entries of one positive-block row.
    NearRcd(Measure, Partition),
}

pub fn gen_kernel(n: usize, seed: u64, structure: &Structure) -> Result<Kernel> {
    match structure {
        Structure::Dense => Kernel::from_measures(
            (0..n).map(|x| gen_measure(n, stream_seed(seed, x as u64), true)).collect(),
        ),
        Structure::Block(g) => {
            check_dim(n, g.n())?;
            let mut r = rng(seed);
            let per_block: Vec<Vec<Rat>> = g
                .blocks()
                .iter()
                .map(|b| {
                    let w = weights(&mut r, b.len(), true);
                    let total: u64 = w.iter().sum();
                    let mut row = vec![Rat::zero(); n];
                    for (y, wy) in b.iter().zip(&w) {
                        row[y] = Rat::new(*wy as i64, total as i64);
                    }
                    row
                })
                .collect();
            Kernel::new((0..n).map(|x| per_block[g.label_of(x)].clone()).collect())
        }
        Structure::Rcd(nu, g) => {
            check_dim(n, nu.n())?;
            make_rcd(nu, g)
        }
        Structure::NearRcd(nu, g) => {
            check_dim(n, nu.n())?;
            let base = make_rcd(nu, g)?;
            if n < 2 {
                return Ok(base);
            }
            let mut r = rng(seed);
            let candidates: Vec<usize> = (0..n)
                .filter(|&x| nu.measure_of_set(&g.blocks()[g.label_of(x)]).is_ok_and(|m| m.is_positive()))
                .collect();
            let x = candidates[r.random_range(0..candidates.len())];
            let mut row = base.row(x).to_vec();
            let donors: Vec<usize> = (0..n).filter(|&y| row[y].is_positive()).collect();
            let from = donors[r.random_range(0..donors.len())];
            let to = (from + r.random_range(1..n)) % n;
            let moved = &row[from] / &Rat::from_integer(2);
            row[from] = &row[from] - &moved;
            row[to] = &row[to] + &moved;
            let mut rows = base.rows().to_vec();
            rows[x] = row;
            Kernel::new(rows)
        }
    }
}

/// Number of ways to finish a restricted growth string with `remaining`
/// positions left when `blocks` labels are already in use.
fn completions(n: usize) -> Vec<Vec<u128>> {
    // table[k][m], m up to n
    let mut table = vec![vec![0u128; n + 2]; n + 1];
    table[0].fill(1);
    for k in 1..=n {
        for m in 0..=n {
            table[k][m] = (m as u128).saturating_mul(table[k - 1][m]).saturating_add(table[k - 1][m + 1]);
        }
    }
    table
}

/// Uniform over the `Bell(n)` partitions, drawn label by label.
pub fn gen_partition(n: usize, seed: u64) -> Partition {
    assert!(n >= 1, "partitions need a nonempty space");
    assert!(n <= MAX_UNIFORM_PARTITION_N, "uniform partition sampling supports n <= {MAX_UNIFORM_PARTITION_N}");
    let table = completions(n);
    let mut r = rng(seed);
    let mut labels = vec![0usize; n];
    let mut used = 1;
    for (i, label) in labels.iter_mut().enumerate().skip(1) {
        let remaining = n - i - 1;
        let existing = used as u128 * table[remaining][used];
        let fresh = table[remaining][used + 1];
        let pick = r.random_range(0..existing + fresh);
        if pick < existing {
            *label = (pick / table[remaining][used]) as usize;
        } else {
            *label = used;
            used += 1;
        }
    }
    Partition::from_labels(&labels)
}
