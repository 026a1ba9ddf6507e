//! The law registry: each law is a premise and a conclusion over a random
//! instance. Theorem laws must never produce a counterexample; the `SANITY`
//! laws are deliberately false and must.

use crate::error::Result;
use crate::measure::{Kernel, Measure};
use crate::partition::Partition;
use crate::props::{self, RestrictionScope};
use crate::rational::Rat;
use crate::rcd::{self, make_rcd, sigma_of_kernel};

/// The data a law is evaluated on. `secondary` is a second partition, used by
/// laws comparing two conditioning σ-algebras.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawInput {
    pub nu: Measure,
    pub kernel: Kernel,
    pub partition: Partition,
    pub secondary: Option<Partition>,
}

/// How instances for a law are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorHint {
    /// Trials rotate through dense, block-structured, rcd and near-rcd kernels.
    Mixed,
    /// As `Mixed`, with full-support measures only.
    MixedFullSupport,
    /// As `Mixed`; the secondary partition agrees with the primary off null states.
    EssentialPair,
}

type Premise = fn(&LawInput) -> Result<bool>;
/// `Ok(None)` when the conclusion holds, otherwise a witness description.
type Conclusion = fn(&LawInput) -> Result<Option<String>>;

pub struct Law {
    pub id: &'static str,
    pub statement: &'static str,
    pub hint: GeneratorHint,
    /// Oracle-backed laws run on at most this many states.
    pub max_n: Option<usize>,
    /// Deliberately false; a campaign must find a counterexample.
    pub expect_counterexample: bool,
    premise: Premise,
    conclusion: Conclusion,
}

impl Law {
    pub fn premise(&self, input: &LawInput) -> Result<bool> {
        (self.premise)(input)
    }

    pub fn conclusion(&self, input: &LawInput) -> Result<Option<String>> {
        (self.conclusion)(input)
    }

    /// `Some(witness)` when the premise holds and the conclusion fails.
    pub fn violation(&self, input: &LawInput) -> Result<Option<String>> {
        if !self.premise(input)? {
            return Ok(None);
        }
        self.conclusion(input)
    }
}

impl std::fmt::Debug for Law {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Law").field("id", &self.id).finish_non_exhaustive()
    }
}

fn always(_: &LawInput) -> Result<bool> {
    Ok(true)
}

fn sigma(i: &LawInput) -> Partition {
    sigma_of_kernel(&i.kernel)
}

fn open() -> RestrictionScope {
    RestrictionScope::unrestricted()
}

fn reversible(i: &LawInput) -> Result<bool> {
    Ok(props::check_reversible(&i.kernel, &i.nu, &open())?.holds)
}

fn self_reversible(i: &LawInput) -> Result<bool> {
    Ok(props::check_self_reversible(&i.kernel, &i.nu)?.holds)
}

fn total_on_sigma(i: &LawInput) -> Result<bool> {
    Ok(props::check_total(&i.kernel, &i.nu, &sigma(i))?.holds)
}

fn fails(holds: bool, what: impl FnOnce() -> String) -> Option<String> {
    if holds {
        None
    } else {
        Some(what())
    }
}

fn verdict_witness(v: &props::PropertyVerdict) -> String {
    match &v.witness {
        Some(w) => format!("{} fails: {}", v.property, serde_json::to_string(w).unwrap_or_default()),
        None => format!("{} fails", v.property),
    }
}

fn l1_conclusion(i: &LawInput) -> Result<Option<String>> {
    let v = props::check_stationary(&i.kernel, &i.nu, &open())?;
    Ok(fails(v.holds, || verdict_witness(&v)))
}

fn l2_conclusion(i: &LawInput) -> Result<Option<String>> {
    let v = props::check_self_compatible(&i.kernel, &i.nu)?;
    Ok(fails(v.holds, || verdict_witness(&v)))
}

fn l3_conclusion(i: &LawInput) -> Result<Option<String>> {
    let t = props::check_total(&i.kernel, &i.nu, &i.partition)?.holds;
    let p = props::check_proper(&i.kernel, &i.nu, &i.partition)?.holds;
    Ok(fails(t == p, || format!("T = {t} but P = {p}")))
}

fn l4_conclusion(i: &LawInput) -> Result<Option<String>> {
    let r = make_rcd(&i.nu, &i.partition)?;
    let p = props::check_proper(&r, &i.nu, &i.partition)?;
    if !p.holds {
        return Ok(Some(verdict_witness(&p)));
    }
    let t = props::check_total(&r, &i.nu, &i.partition)?;
    Ok(fails(t.holds, || verdict_witness(&t)))
}

fn l5_premise(i: &LawInput) -> Result<bool> {
    let scope = RestrictionScope::restricted(sigma(i));
    Ok(self_reversible(i)? && props::check_stationary(&i.kernel, &i.nu, &scope)?.holds)
}

fn l5_conclusion(i: &LawInput) -> Result<Option<String>> {
    let v = props::check_total(&i.kernel, &i.nu, &sigma(i))?;
    Ok(fails(v.holds, || verdict_witness(&v)))
}

fn l6_conclusion(i: &LawInput) -> Result<Option<String>> {
    let sr = props::check_self_reversible(&i.kernel, &i.nu)?;
    if !sr.holds {
        return Ok(Some(verdict_witness(&sr)));
    }
    let scope = RestrictionScope::restricted(sigma(i));
    let rev = props::check_reversible(&i.kernel, &i.nu, &scope)?;
    Ok(fails(rev.holds, || verdict_witness(&rev)))
}

fn l7_premise(i: &LawInput) -> Result<bool> {
    Ok(i.nu.support().len() == i.nu.n() && self_reversible(i)?)
}

fn l7_conclusion(i: &LawInput) -> Result<Option<String>> {
    let v = props::check_trivial(&i.kernel, &i.nu, &sigma(i))?;
    Ok(fails(v.holds, || verdict_witness(&v)))
}

fn l8_conclusion(i: &LawInput) -> Result<Option<String>> {
    let decided = rcd::is_rcd(&i.kernel, &i.nu)?.is_rcd;
    let oracle = rcd::oracle_is_rcd(&i.kernel, &i.nu)?;
    let found = !oracle.accepted.is_empty();
    Ok(fails(decided == found, || {
        format!("is_rcd = {decided}, oracle accepted {} partitions", oracle.accepted.len())
    }))
}

fn l9_conclusion(i: &LawInput) -> Result<Option<String>> {
    let pi = rcd::stationarize(&i.kernel, &i.nu)?;
    let v = rcd::is_rcd(&i.kernel, &pi)?;
    Ok(fails(v.is_rcd, || {
        format!("not an rcd for pi = {:?}: {:?}", pi.weights(), v.failed_condition)
    }))
}

fn is_rcd_premise(i: &LawInput) -> Result<bool> {
    Ok(rcd::is_rcd(&i.kernel, &i.nu)?.is_rcd)
}

fn l10_conclusion(i: &LawInput) -> Result<Option<String>> {
    let checks = [
        props::check_stationary(&i.kernel, &i.nu, &open())?,
        props::check_reversible(&i.kernel, &i.nu, &open())?,
        props::check_self_compatible(&i.kernel, &i.nu)?,
        props::check_self_reversible(&i.kernel, &i.nu)?,
    ];
    Ok(checks.iter().find(|v| !v.holds).map(verdict_witness))
}

fn l11_premise(i: &LawInput) -> Result<bool> {
    // self-compatibility at every state, not just ν-a.e.
    let everywhere = Measure::uniform(i.kernel.n())?;
    Ok(props::check_self_compatible(&i.kernel, &everywhere)?.holds)
}

fn l11_conclusion(i: &LawInput) -> Result<Option<String>> {
    let r = &i.kernel;
    let s = sigma(i);
    for x in 0..r.n() {
        for y in x + 1..r.n() {
            let agree = s.blocks().iter().all(|a| r.mass(x, a) == r.mass(y, a));
            if agree && r.row(x) != r.row(y) {
                return Ok(Some(format!("states {x} and {y} agree on σ(R) but have different rows")));
            }
        }
    }
    Ok(None)
}

fn l12_conclusion(i: &LawInput) -> Result<Option<String>> {
    let r = &i.kernel;
    let s = sigma(i);
    for b in s.blocks() {
        let first = b.min().expect("nonempty");
        let value = r.mass(first, b);
        if let Some(x) = b.iter().find(|&x| r.mass(x, b) != value) {
            return Ok(Some(format!("R_x(atom) differs between states {first} and {x}")));
        }
    }
    Ok(None)
}

fn l13_conclusion(i: &LawInput) -> Result<Option<String>> {
    let r = &i.kernel;
    let inside = i.partition.refines(&sigma(i))?;
    let constant = i.partition.blocks().iter().all(|b| {
        let first = b.min().expect("nonempty");
        b.iter().all(|x| r.row(x) == r.row(first))
    });
    Ok(fails(inside == constant, || {
        format!("G-blocks inside σ(R)-blocks = {inside}, rows constant on G-blocks = {constant}")
    }))
}

fn l14_premise(i: &LawInput) -> Result<bool> {
    Ok(!rcd::oracle_is_rcd(&i.kernel, &i.nu)?.accepted.is_empty())
}

fn l14_conclusion(i: &LawInput) -> Result<Option<String>> {
    let s = sigma(i);
    for g in rcd::oracle_is_rcd(&i.kernel, &i.nu)?.accepted {
        if !g.essentially_equal(&s, &i.nu)? {
            return Ok(Some(format!("oracle accepted {g:?}, not essentially equal to σ(R) = {s:?}")));
        }
    }
    Ok(None)
}

fn l15_conclusion(i: &LawInput) -> Result<Option<String>> {
    let r = make_rcd(&i.nu, &i.partition)?;
    for b in i.partition.blocks() {
        let first = b.min().expect("nonempty");
        if let Some(x) = b.iter().find(|&x| r.row(x) != r.row(first)) {
            return Ok(Some(format!("rows {first} and {x} differ inside one G-block")));
        }
    }
    Ok(None)
}

fn l16_conclusion(i: &LawInput) -> Result<Option<String>> {
    let r = make_rcd(&i.nu, &i.partition)?;
    for b in i.partition.blocks() {
        if !i.nu.measure_of_set(b)?.is_positive() {
            continue;
        }
        let conditional = i.nu.conditional(b)?;
        if let Some(x) = b.iter().find(|&x| r.row(x) != conditional.weights()) {
            return Ok(Some(format!("row {x} is not ν(·|{b:?})")));
        }
    }
    Ok(None)
}

fn l17_premise(i: &LawInput) -> Result<bool> {
    match &i.secondary {
        Some(h) => i.partition.essentially_equal(h, &i.nu),
        None => Ok(false),
    }
}

fn l17_conclusion(i: &LawInput) -> Result<Option<String>> {
    let h = i.secondary.as_ref().expect("premise requires a secondary partition");
    let rg = make_rcd(&i.nu, &i.partition)?;
    let rh = make_rcd(&i.nu, h)?;
    Ok(i.nu.support().iter().find(|&x| rg.row(x) != rh.row(x)).map(|x| {
        format!("conditional rows differ at support state {x}")
    }))
}

fn l18_premise(i: &LawInput) -> Result<bool> {
    Ok(rcd::is_rcd_gcp(&i.kernel, &i.nu)?.is_rcd)
}

fn l18_conclusion(i: &LawInput) -> Result<Option<String>> {
    let v = props::check_abs_continuous(&i.kernel, &i.nu)?;
    Ok(fails(v.holds, || verdict_witness(&v)))
}

const fn law(
    id: &'static str,
    statement: &'static str,
    premise: Premise,
    conclusion: Conclusion,
) -> Law {
    Law {
        id,
        statement,
        hint: GeneratorHint::Mixed,
        max_n: None,
        expect_counterexample: false,
        premise,
        conclusion,
    }
}

pub static LAWS: [Law; 20] = [
    law("L1", "(R) implies (S)", reversible, l1_conclusion),
    law("L2", "(SR) implies (SC)", self_reversible, l2_conclusion),
    law("L3", "(T) iff (P) for any partition", always, l3_conclusion),
    law("L4", "make_rcd(nu, G) is proper and total w.r.t. G", always, l4_conclusion),
    law(
        "L5",
        "(SR) and (S) restricted to sigma(R) imply (T) w.r.t. sigma(R)",
        l5_premise,
        l5_conclusion,
    ),
    law(
        "L6",
        "(T) w.r.t. sigma(R) implies (SR) and (R) restricted to sigma(R)",
        total_on_sigma,
        l6_conclusion,
    ),
    Law {
        hint: GeneratorHint::MixedFullSupport,
        ..law(
            "L7",
            "full-support nu and (SR) imply trivial w.r.t. sigma(R)",
            l7_premise,
            l7_conclusion,
        )
    },
    Law {
        max_n: Some(rcd::MAX_ORACLE_N),
        ..law("L8", "is_rcd agrees with the brute-force oracle", always, l8_conclusion)
    },
    law(
        "L9",
        "(T) w.r.t. sigma(R) implies R is an rcd for pi = nu R",
        total_on_sigma,
        l9_conclusion,
    ),
    law(
        "L10",
        "an rcd satisfies (S), (R), (SC) and (SR)",
        is_rcd_premise,
        l10_conclusion,
    ),
    law(
        "L11",
        "(SC) everywhere: masses on sigma(R) determine rows",
        l11_premise,
        l11_conclusion,
    ),
    law("L12", "x -> R_x([x]) is constant on sigma(R) atoms", always, l12_conclusion),
    law(
        "L13",
        "G-blocks lie in sigma(R)-atoms iff rows are constant on G-blocks",
        always,
        l13_conclusion,
    ),
    Law {
        max_n: Some(rcd::MAX_ORACLE_N),
        ..law(
            "L14",
            "every oracle-accepted partition is essentially equal to sigma(R)",
            l14_premise,
            l14_conclusion,
        )
    },
    law(
        "L15",
        "make_rcd rows agree within each G-block",
        always,
        l15_conclusion,
    ),
    law(
        "L16",
        "on a positive-mass block B, make_rcd rows equal nu(.|B)",
        always,
        l16_conclusion,
    ),
    Law {
        hint: GeneratorHint::EssentialPair,
        ..law(
            "L17",
            "essentially equal partitions give a.e. equal conditional rows",
            l17_premise,
            l17_conclusion,
        )
    },
    law("L18", "is_rcd_gcp implies R_x << nu a.e.", l18_premise, l18_conclusion),
    Law {
        expect_counterexample: true,
        ..law("SANITY-1", "(T) w.r.t. sigma(R) implies (S)  [false]", total_on_sigma, sanity1_conclusion)
    },
    Law {
        expect_counterexample: true,
        ..law("SANITY-2", "(SR) implies (T) w.r.t. sigma(R)  [false]", self_reversible, l5_conclusion)
    },
];

fn sanity1_conclusion(i: &LawInput) -> Result<Option<String>> {
    l1_conclusion(i)
}

pub fn find_law(id: &str) -> Option<&'static Law> {
    LAWS.iter().find(|l| l.id.eq_ignore_ascii_case(id))
}

/// Fixed instances injected as trial 0 so the sanity laws always have teeth.
pub(crate) fn fixture_for(id: &str) -> Option<LawInput> {
    let r = |p: i64, q: i64| Rat::new(p, q);
    let (z, one) = (Rat::zero(), Rat::one());
    match id {
        "SANITY-1" => {
            let kernel = Kernel::new(vec![
                vec![one.clone(), z.clone(), z.clone()],
                vec![z.clone(), r(1, 2), r(1, 2)],
                vec![z.clone(), r(1, 2), r(1, 2)],
            ])
            .ok()?;
            let nu = Measure::new(vec![r(1, 3), r(1, 2), r(1, 6)]).ok()?;
            let partition = sigma_of_kernel(&kernel);
            Some(LawInput { nu, kernel, partition, secondary: None })
        }
        "SANITY-2" => {
            let third = r(1, 3);
            let half = r(1, 2);
            let kernel = Kernel::new(vec![
                vec![z.clone(), third.clone(), third.clone(), third],
                vec![z.clone(), one, z.clone(), z.clone()],
                vec![z.clone(), z.clone(), half.clone(), half.clone()],
                vec![z.clone(), z, half.clone(), half],
            ])
            .ok()?;
            let nu = Measure::uniform(4).ok()?;
            let partition = sigma_of_kernel(&kernel);
            Some(LawInput { nu, kernel, partition, secondary: None })
        }
        _ => None,
    }
}
