//! Randomized falsification of the theory: seeded generators, a registry of
//! laws, reproducible campaigns and greedy counterexample shrinking.
//!
//! ```
//! use rcdkit::falsifier::run_law;
//!
//! let report = run_law("L1", 50, 42, (2, 4)).unwrap();
//! assert!(report.counterexamples.is_empty());
//! ```

pub mod gen;
pub mod laws;
pub mod rng;
mod shrink;

use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::{Instance, Mode};
use crate::partition::Partition;

pub use gen::{gen_kernel, gen_measure, gen_partition, Structure};
pub use laws::{find_law, GeneratorHint, Law, LawInput, LAWS};
pub use rng::{stream_seed, GENERATOR_VERSION};
pub use shrink::shrink;

/// A stored violation: premise true, conclusion false.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub law: String,
    pub instance: Instance,
    #[serde(rename = "secondary_partition", skip_serializing_if = "Option::is_none")]
    pub secondary: Option<Partition>,
    pub witness: String,
}

impl Counterexample {
    fn from_input(law: &Law, input: &LawInput, witness: String) -> Self {
        let instance = Instance {
            nu: input.nu.clone(),
            kernel: Some(input.kernel.clone()),
            partition: Some(input.partition.clone()),
            mode: Mode::Rational,
        };
        Counterexample { law: law.id.to_string(), instance, secondary: input.secondary.clone(), witness }
    }

    pub fn input(&self) -> Result<LawInput> {
        Ok(LawInput {
            nu: self.instance.nu.clone(),
            kernel: self.instance.require_kernel()?.clone(),
            partition: self.instance.require_partition()?.clone(),
            secondary: self.secondary.clone(),
        })
    }

    pub fn n(&self) -> usize {
        self.instance.n()
    }

    /// Re-runs the law on the stored instance; true when the same violation reappears.
    pub fn revalidate(&self) -> Result<bool> {
        let law = find_law(&self.law).ok_or_else(|| Error::UnknownLaw(self.law.clone()))?;
        Ok(law.violation(&self.input()?)?.as_deref() == Some(self.witness.as_str()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LawReport {
    pub law: String,
    pub statement: String,
    pub expect_counterexample: bool,
    pub trials: usize,
    pub premise_hits: usize,
    pub premise_rate: f64,
    pub counterexamples: Vec<Counterexample>,
    /// The first counterexample after shrinking.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shrunk: Option<Counterexample>,
    pub seed: u64,
    pub n_range: [usize; 2],
    pub generator_version: String,
    pub mode: String,
    pub elapsed_ms: u64,
}

impl LawReport {
    /// A theorem passes with no counterexamples; a sanity law passes with at least one.
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty() != self.expect_counterexample
    }

    /// JSON without the timing field, byte-identical across reruns.
    pub fn to_json_without_timing(&self) -> String {
        let mut value = serde_json::to_value(self).expect("reports serialize");
        value.as_object_mut().expect("object").remove("elapsed_ms");
        value.to_string()
    }
}

/// Campaign settings. Only rational mode is accepted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Campaign {
    pub trials: usize,
    pub seed: u64,
    pub n_min: usize,
    pub n_max: usize,
    pub mode: Mode,
}

impl Default for Campaign {
    fn default() -> Self {
        Campaign { trials: 1000, seed: 42, n_min: 2, n_max: 5, mode: Mode::Rational }
    }
}

impl Campaign {
    pub fn run(&self, law_id: &str) -> Result<LawReport> {
        let law = find_law(law_id).ok_or_else(|| Error::UnknownLaw(law_id.to_string()))?;
        if self.mode.is_float() {
            return Err(Error::FloatModeRefused);
        }
        if self.n_min == 0 || self.n_min > self.n_max {
            return Err(Error::InvalidArgument(format!("empty n range [{}, {}]", self.n_min, self.n_max)));
        }
        let n_max = law.max_n.map_or(self.n_max, |cap| cap.min(self.n_max));
        if self.n_min > n_max {
            return Err(Error::TooLarge { n: self.n_min, max: n_max });
        }
        let start = Instant::now();
        let outcomes: Vec<(bool, Option<Counterexample>)> = (0..self.trials)
            .into_par_iter()
            .map(|t| {
                let input = draw(law, t as u64, self.seed, self.n_min, n_max)?;
                if !law.premise(&input)? {
                    return Ok((false, None));
                }
                let ce = law.conclusion(&input)?.map(|w| Counterexample::from_input(law, &input, w));
                Ok((true, ce))
            })
            .collect::<Result<_>>()?;
        let premise_hits = outcomes.iter().filter(|(hit, _)| *hit).count();
        let counterexamples: Vec<Counterexample> = outcomes.into_iter().filter_map(|(_, ce)| ce).collect();
        let shrunk = counterexamples.first().map(|ce| shrink(ce, law.id)).transpose()?;
        Ok(LawReport {
            law: law.id.to_string(),
            statement: law.statement.to_string(),
            expect_counterexample: law.expect_counterexample,
            trials: self.trials,
            premise_hits,
            premise_rate: if self.trials == 0 { 0.0 } else { premise_hits as f64 / self.trials as f64 },
            counterexamples,
            shrunk,
            seed: self.seed,
            n_range: [self.n_min, n_max],
            generator_version: GENERATOR_VERSION.to_string(),
            mode: self.mode.name().to_string(),
            elapsed_ms: start.elapsed().as_millis() as u64,
        })
    }
}

pub fn run_law(law_id: &str, trials: usize, seed: u64, n_range: (usize, usize)) -> Result<LawReport> {
    Campaign { trials, seed, n_min: n_range.0, n_max: n_range.1, mode: Mode::Rational }.run(law_id)
}

/// The instance for one trial, a pure function of `(law, trial, seed, n range)`.
pub fn draw(law: &Law, trial: u64, seed: u64, n_min: usize, n_max: usize) -> Result<LawInput> {
    if trial == 0 {
        if let Some(fixture) = laws::fixture_for(law.id) {
            if (n_min..=n_max).contains(&fixture.nu.n()) {
                return Ok(fixture);
            }
        }
    }
    let s = stream_seed(seed, trial);
    let mut r = rng::rng(s);
    let n = r.random_range(n_min..=n_max);
    let full_support = law.hint == GeneratorHint::MixedFullSupport;
    let nu = gen_measure(n, stream_seed(s, 1), !full_support);
    let g = gen_partition(n, stream_seed(s, 2));
    let structure = match trial % 4 {
        0 => Structure::Dense,
        1 => Structure::Block(g.clone()),
        2 => Structure::Rcd(nu.clone(), g.clone()),
        _ => Structure::NearRcd(nu.clone(), g.clone()),
    };
    let kernel = gen_kernel(n, stream_seed(s, 3), &structure)?;
    let secondary = match law.hint {
        GeneratorHint::EssentialPair => Some(if r.random_ratio(3, 4) {
            reassign_null_states(&g, &nu.support(), &mut r)
        } else {
            gen_partition(n, stream_seed(s, 4))
        }),
        _ => None,
    };
    Ok(LawInput { nu, kernel, partition: g, secondary })
}

/// `g` with every state outside `support` moved to a random block, possibly a new one.
fn reassign_null_states<R: Rng>(g: &Partition, support: &crate::event::EventSet, r: &mut R) -> Partition {
    let mut labels = g.labels().to_vec();
    let mut fresh = g.num_blocks();
    for (x, label) in labels.iter_mut().enumerate() {
        if !support.contains(x) {
            let pick = r.random_range(0..=fresh);
            if pick == fresh {
                fresh += 1;
            }
            *label = pick;
        }
    }
    Partition::from_labels(&labels)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_ids_are_unique_and_complete() {
        let ids: Vec<&str> = LAWS.iter().map(|l| l.id).collect();
        for i in 1..=18 {
            assert!(ids.contains(&format!("L{i}").as_str()));
        }
        assert!(find_law("sanity-1").unwrap().expect_counterexample);
        assert!(!find_law("L8").unwrap().expect_counterexample);
        let mut sorted = ids.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), ids.len());
    }

    #[test]
    fn theorem_laws_survive_a_short_campaign() {
        for law in LAWS.iter().filter(|l| !l.expect_counterexample) {
            let report = run_law(law.id, 80, 3, (2, 4)).unwrap();
            assert!(report.counterexamples.is_empty(), "{}: {:?}", law.id, report.counterexamples.first());
            assert!(report.premise_hits > 0, "{} never met its premise", law.id);
        }
    }

    #[test]
    fn sanity_laws_have_teeth() {
        for id in ["SANITY-1", "SANITY-2"] {
            let report = run_law(id, 40, 42, (3, 5)).unwrap();
            assert!(report.passed(), "{id}");
            for ce in &report.counterexamples {
                assert!(ce.revalidate().unwrap());
            }
        }
    }

    #[test]
    fn reports_are_reproducible() {
        let a = run_law("L5", 60, 9, (2, 5)).unwrap();
        let b = run_law("L5", 60, 9, (2, 5)).unwrap();
        assert_eq!(a.to_json_without_timing(), b.to_json_without_timing());
        assert!(!a.to_json_without_timing().contains("elapsed_ms"));
    }

    #[test]
    fn bad_arguments_are_refused() {
        assert_eq!(run_law("L99", 1, 0, (2, 3)).unwrap_err(), Error::UnknownLaw("L99".into()));
        let float = Campaign { mode: Mode::float_default(), ..Campaign::default() };
        assert_eq!(float.run("L1").unwrap_err(), Error::FloatModeRefused);
        assert!(matches!(run_law("L1", 1, 0, (4, 2)), Err(Error::InvalidArgument(_))));
        assert!(matches!(run_law("L8", 1, 0, (11, 12)), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn oracle_laws_clamp_the_range() {
        let report = run_law("L8", 4, 1, (2, 30)).unwrap();
        assert_eq!(report.n_range, [2, crate::rcd::MAX_ORACLE_N]);
    }

    #[test]
    fn essential_pairs_mostly_meet_the_premise() {
        let report = run_law("L17", 200, 5, (2, 5)).unwrap();
        assert!(report.premise_rate > 0.5, "{}", report.premise_rate);
    }
}
