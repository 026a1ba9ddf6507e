//! Probability measures and row-stochastic kernels with exact entries.

use crate::error::{check_dim, Error, Result};
use crate::event::{EventSet, StateId};
use crate::rational::Rat;

/// A probability measure on `[0, n)`: nonnegative weights summing to exactly 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Measure {
    weights: Vec<Rat>,
}

impl Measure {
    pub fn new(weights: Vec<Rat>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::NotAProbability("measure on an empty space".into()));
        }
        if let Some((x, w)) = weights.iter().enumerate().find(|(_, w)| w.is_negative()) {
            return Err(Error::NotAProbability(format!("weight {w} at state {x} is negative")));
        }
        let total: Rat = weights.iter().sum();
        if !total.is_one() {
            return Err(Error::NotAProbability(format!("weights sum to {total}, not 1")));
        }
        Ok(Measure { weights })
    }

    /// Normalizes nonnegative integer weights, at least one of them positive.
    pub fn from_integer_weights(raw: &[u64]) -> Result<Self> {
        let total: u64 = raw.iter().sum();
        if total == 0 {
            return Err(Error::NotAProbability("all weights are zero".into()));
        }
        let total = total as i64;
        Measure::new(raw.iter().map(|&w| Rat::new(w as i64, total)).collect())
    }

    pub fn uniform(n: usize) -> Result<Self> {
        Measure::from_integer_weights(&vec![1; n])
    }

    pub fn point_mass(x: StateId, n: usize) -> Result<Self> {
        StateId::new(x.index(), n)?;
        let mut weights = vec![Rat::zero(); n];
        weights[x.index()] = Rat::one();
        Ok(Measure { weights })
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[Rat] {
        &self.weights
    }

    pub fn weight(&self, x: usize) -> &Rat {
        &self.weights[x]
    }

    pub fn measure_of_set(&self, a: &EventSet) -> Result<Rat> {
        check_dim(self.n(), a.n())?;
        Ok(a.iter().map(|x| &self.weights[x]).sum())
    }

    /// `A ↦ ν(A ∩ B) / ν(B)`.
    pub fn conditional(&self, b: &EventSet) -> Result<Measure> {
        let mass = self.measure_of_set(b)?;
        if mass.is_zero() {
            return Err(Error::ZeroMassEvent);
        }
        let weights = (0..self.n())
            .map(|x| if b.contains(x) { &self.weights[x] / &mass } else { Rat::zero() })
            .collect();
        let m = Measure { weights };
        debug_assert!(m.sums_to_one());
        Ok(m)
    }

    /// `{x : ν(x) > 0}`.
    pub fn support(&self) -> EventSet {
        let idx = (0..self.n()).filter(|&x| self.weights[x].is_positive());
        EventSet::from_indices(idx, self.n()).expect("indices in range")
    }

    fn sums_to_one(&self) -> bool {
        self.weights.iter().sum::<Rat>().is_one()
    }
}

/// A row-stochastic matrix: row `x` is the probability measure `R_x`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Kernel {
    rows: Vec<Vec<Rat>>,
}

impl Kernel {
    pub fn new(rows: Vec<Vec<Rat>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::NotAProbability("kernel on an empty space".into()));
        }
        for (x, row) in rows.iter().enumerate() {
            check_dim(n, row.len())?;
            if let Some((y, v)) = row.iter().enumerate().find(|(_, v)| v.is_negative()) {
                return Err(Error::NotAProbability(format!("entry ({x},{y}) = {v} is negative")));
            }
            let total: Rat = row.iter().sum();
            if !total.is_one() {
                return Err(Error::NotAProbability(format!("row {x} sums to {total}, not 1")));
            }
        }
        Ok(Kernel { rows })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Kernel::new(
            (0..n)
                .map(|x| (0..n).map(|y| if x == y { Rat::one() } else { Rat::zero() }).collect())
                .collect(),
        )
    }

    /// Every row equal to `mu`.
    pub fn constant(mu: &Measure) -> Self {
        Kernel { rows: vec![mu.weights().to_vec(); mu.n()] }
    }

    pub fn from_measures(rows: Vec<Measure>) -> Result<Self> {
        let n = rows.len();
        for m in &rows {
            check_dim(n, m.n())?;
        }
        Ok(Kernel { rows: rows.into_iter().map(|m| m.weights).collect() })
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Rat>] {
        &self.rows
    }

    pub fn row(&self, x: usize) -> &[Rat] {
        &self.rows[x]
    }

    pub fn entry(&self, x: usize, y: usize) -> &Rat {
        &self.rows[x][y]
    }

    pub fn row_measure(&self, x: usize) -> Measure {
        Measure { weights: self.rows[x].clone() }
    }

    /// `R_x(A)`.
    pub fn mass(&self, x: usize, a: &EventSet) -> Rat {
        a.iter().map(|y| &self.rows[x][y]).sum()
    }

    /// `y ↦ Σ_x ν(x) r_xy`.
    pub fn propagate(&self, nu: &Measure) -> Result<Measure> {
        check_dim(self.n(), nu.n())?;
        let n = self.n();
        let mut weights = vec![Rat::zero(); n];
        for (x, w) in nu.weights().iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            for (acc, r) in weights.iter_mut().zip(&self.rows[x]) {
                if !r.is_zero() {
                    *acc = &*acc + &(w * r);
                }
            }
        }
        let m = Measure { weights };
        debug_assert!(m.sums_to_one());
        Ok(m)
    }

    /// `(R ∘ Q)[x][z] = Σ_y r_xy q_yz`.
    pub fn compose(&self, q: &Kernel) -> Result<Kernel> {
        check_dim(self.n(), q.n())?;
        let rows = (0..self.n())
            .map(|x| q.propagate(&self.row_measure(x)).map(|m| m.weights))
            .collect::<Result<Vec<_>>>()?;
        Ok(Kernel { rows })
    }
}

pub fn point_mass(x: StateId, n: usize) -> Result<Measure> {
    Measure::point_mass(x, n)
}

pub fn measure_of_set(m: &Measure, a: &EventSet) -> Result<Rat> {
    m.measure_of_set(a)
}

pub fn conditional_measure(nu: &Measure, b: &EventSet) -> Result<Measure> {
    nu.conditional(b)
}

pub fn propagate(nu: &Measure, r: &Kernel) -> Result<Measure> {
    r.propagate(nu)
}

pub fn compose(r: &Kernel, q: &Kernel) -> Result<Kernel> {
    r.compose(q)
}

pub fn support(nu: &Measure) -> EventSet {
    nu.support()
}
