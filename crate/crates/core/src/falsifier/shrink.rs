use super::laws::{find_law, Law, LawInput};
use super::Counterexample;
use crate::error::{Error, Result};
use crate::measure::{Kernel, Measure};
use crate::partition::Partition;
use crate::rational::Rat;

/// Greedy state deletion. State `x` is removable when no other row moves all
/// of its mass to `x` and `ν(x) < 1`; the remaining rows and `ν` are
/// renormalized and `x` is dropped from every partition. Deletions are kept
/// while the law stays violated, restarting from state 0 until a fixpoint.
pub fn shrink(ce: &Counterexample, law_id: &str) -> Result<Counterexample> {
    let law = find_law(law_id).ok_or_else(|| Error::UnknownLaw(law_id.to_string()))?;
    let mut input = ce.input()?;
    let mut witness = law.violation(&input)?.ok_or_else(|| Error::NotACounterexample(law.id.to_string()))?;
    'descent: loop {
        for x in 0..input.nu.n() {
            if let Some(smaller) = delete_state(&input, x)? {
                if let Some(w) = law.violation(&smaller)? {
                    input = smaller;
                    witness = w;
                    continue 'descent;
                }
            }
        }
        break;
    }
    Ok(counterexample(law, &input, witness))
}

fn counterexample(law: &Law, input: &LawInput, witness: String) -> Counterexample {
    Counterexample::from_input(law, input, witness)
}

fn delete_state(input: &LawInput, x: usize) -> Result<Option<LawInput>> {
    let n = input.nu.n();
    let k = &input.kernel;
    if n < 2 || input.nu.weight(x).is_one() || (0..n).any(|y| y != x && k.entry(y, x).is_one()) {
        return Ok(None);
    }
    let keep = |v: &[Rat], scale: &Rat| -> Vec<Rat> {
        let denom = Rat::one() - scale;
        (0..n).filter(|&z| z != x).map(|z| &v[z] / &denom).collect()
    };
    let rows = (0..n).filter(|&y| y != x).map(|y| keep(k.row(y), k.entry(y, x))).collect();
    let nu = Measure::new(keep(input.nu.weights(), input.nu.weight(x)))?;
    Ok(Some(LawInput {
        nu,
        kernel: Kernel::new(rows)?,
        partition: drop_state(&input.partition, x),
        secondary: input.secondary.as_ref().map(|h| drop_state(h, x)),
    }))
}

fn drop_state(p: &Partition, x: usize) -> Partition {
    let labels: Vec<usize> = p.labels().iter().enumerate().filter(|&(y, _)| y != x).map(|(_, &l)| l).collect();
    Partition::from_labels(&labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::falsifier::{laws::fixture_for, run_law};

    #[test]
    fn sanity_two_shrinks_below_five_states_and_is_idempotent() {
        let report = run_law("SANITY-2", 200, 42, (3, 5)).unwrap();
        for ce in report.counterexamples.iter().take(20) {
            let once = shrink(ce, "SANITY-2").unwrap();
            assert!(once.n() <= 4, "shrunk to {}", once.n());
            assert!(once.revalidate().unwrap());
            assert_eq!(shrink(&once, "SANITY-2").unwrap(), once);
        }
    }

    #[test]
    fn the_four_state_fixture_loses_at_least_one_state() {
        let fixture = fixture_for("SANITY-2").unwrap();
        let law = find_law("SANITY-2").unwrap();
        let w = law.violation(&fixture).unwrap().unwrap();
        let ce = Counterexample::from_input(law, &fixture, w);
        assert!(shrink(&ce, "SANITY-2").unwrap().n() <= 3);
    }

    #[test]
    fn non_violations_are_rejected() {
        let fixture = fixture_for("SANITY-2").unwrap();
        let law = find_law("SANITY-2").unwrap();
        let ce = Counterexample::from_input(law, &fixture, String::new());
        assert_eq!(shrink(&ce, "L1").unwrap_err(), Error::NotACounterexample("L1".into()));
        assert!(matches!(shrink(&ce, "nope"), Err(Error::UnknownLaw(_))));
    }
}
