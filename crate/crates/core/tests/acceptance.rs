//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any fails.

use std::collections::BTreeSet;
use std::time::Instant;

use rcdkit::falsifier::{self, draw, find_law, gen_measure, gen_partition, run_law, shrink, LAWS};
use rcdkit::props::{self, RestrictionScope};
use rcdkit::{
    is_rcd, make_rcd, oracle_is_rcd, parse_instance, serialize_instance, sigma_of_kernel, stationarize, Condition,
    Kernel, Measure, Partition, Rat,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn kernel(rows: &[&[&str]]) -> Kernel {
    Kernel::new(rows.iter().map(|r| r.iter().map(|s| s.parse().unwrap()).collect()).collect()).unwrap()
}

fn e4() -> Kernel {
    kernel(&[
        &["0", "1/3", "1/3", "1/3"],
        &["0", "1", "0", "0"],
        &["0", "0", "1/2", "1/2"],
        &["0", "0", "1/2", "1/2"],
    ])
}

fn e3() -> Kernel {
    kernel(&[&["1", "0", "0"], &["0", "1/2", "1/2"], &["0", "1/2", "1/2"]])
}

fn lists(p: &Partition) -> Vec<Vec<usize>> {
    p.to_index_lists()
}

fn four_state_fixture() -> Outcome {
    let r = e4();
    let sigma = sigma_of_kernel(&r);
    ensure(lists(&sigma) == vec![vec![0], vec![1], vec![2, 3]], || format!("sigma = {:?}", lists(&sigma)))?;
    let u = Measure::uniform(4).unwrap();
    ensure(props::check_self_reversible(&r, &u).unwrap().holds, || "SR fails".into())?;
    ensure(props::check_trivial(&r, &u, &sigma).unwrap().holds, || "trivial fails".into())?;
    let t = props::check_total(&r, &u, &sigma).unwrap();
    let x0 = matches!(t.witness, Some(rcdkit::Witness::State { x: 0, .. }));
    ensure(!t.holds && x0, || format!("T verdict {t:?}"))?;
    let v = is_rcd(&r, &u).unwrap();
    ensure(!v.is_rcd && v.failed_condition == Some(Condition::Stationarity), || format!("{v:?}"))?;
    let nu = Measure::new(vec![Rat::zero(), Rat::new(1, 3), Rat::new(1, 3), Rat::new(1, 3)]).unwrap();
    let v = is_rcd(&r, &nu).unwrap();
    ensure(v.is_rcd && v.conditioning.as_ref() == Some(&sigma), || format!("{v:?}"))?;
    Ok("sigma {0}{1}{2,3}; uniform: SR, trivial, T fails at 0, not rcd (stationarity); nu(0)=0: rcd".into())
}

/// Every probability vector on three points whose entries have denominators at most 6.
fn small_denominator_measures() -> Vec<Measure> {
    let mut values: BTreeSet<Rat> = BTreeSet::new();
    for q in 1..=6 {
        for p in 0..=q {
            values.insert(Rat::new(p, q));
        }
    }
    let mut out = Vec::new();
    for a in &values {
        for b in &values {
            let c = Rat::one() - a - b;
            if values.contains(&c) {
                out.push(Measure::new(vec![a.clone(), b.clone(), c]).unwrap());
            }
        }
    }
    out
}

fn three_state_sweep() -> Outcome {
    let r = e3();
    let sigma = sigma_of_kernel(&r);
    ensure(lists(&sigma) == vec![vec![0], vec![1, 2]], || format!("sigma = {:?}", lists(&sigma)))?;
    let measures = small_denominator_measures();
    let mut positives = 0;
    for nu in &measures {
        ensure(props::check_total(&r, nu, &sigma).unwrap().holds, || format!("T fails for {nu:?}"))?;
        let expected = nu.weight(1) == nu.weight(2);
        let decided = is_rcd(&r, nu).unwrap().is_rcd;
        let oracle = !oracle_is_rcd(&r, nu).unwrap().accepted.is_empty();
        ensure(decided == expected && oracle == expected, || {
            format!("nu = {:?}: is_rcd {decided}, oracle {oracle}, expected {expected}", nu.weights())
        })?;
        positives += usize::from(expected);
    }
    Ok(format!("{} measures, {positives} rcd (exactly those with nu1 = nu2), oracle agrees", measures.len()))
}

fn stationarize_pipeline() -> Outcome {
    let pi = stationarize(&e4(), &Measure::uniform(4).unwrap()).unwrap();
    let expected = vec![Rat::zero(), Rat::new(1, 3), Rat::new(1, 3), Rat::new(1, 3)];
    ensure(pi.weights() == expected.as_slice(), || format!("pi = {:?}", pi.weights()))?;
    ensure(is_rcd(&e4(), &pi).unwrap().is_rcd, || "not an rcd for pi".into())?;
    Ok("pi = (0,1/3,1/3,1/3), R is an rcd for pi".into())
}

fn oracle_equivalence() -> Outcome {
    let law = find_law("L8").unwrap();
    let trials = 600;
    let mut accepted_total = 0;
    for t in 0..trials {
        let i = draw(law, t, 2024, 2, 5).unwrap();
        let decided = is_rcd(&i.kernel, &i.nu).unwrap();
        let oracle = oracle_is_rcd(&i.kernel, &i.nu).unwrap();
        ensure(decided.is_rcd == !oracle.accepted.is_empty(), || format!("trial {t}: disagreement"))?;
        let sigma = sigma_of_kernel(&i.kernel);
        for g in &oracle.accepted {
            ensure(g.essentially_equal(&sigma, &i.nu).unwrap(), || format!("trial {t}: {g:?} vs sigma"))?;
        }
        accepted_total += oracle.accepted.len();
    }
    Ok(format!("{trials} instances, 0 disagreements, {accepted_total} accepted partitions all essentially sigma(R)"))
}

fn law_campaign() -> Outcome {
    let mut lowest = (String::new(), 1.0f64);
    for law in LAWS.iter().filter(|l| !l.expect_counterexample) {
        let report = run_law(law.id, 1000, 42, (2, 5)).unwrap();
        ensure(report.counterexamples.is_empty(), || {
            format!("{}: {} counterexamples, first {:?}", law.id, report.counterexamples.len(), report.shrunk)
        })?;
        ensure(report.premise_rate >= 0.10, || format!("{}: premise rate {}", law.id, report.premise_rate))?;
        if report.premise_rate < lowest.1 {
            lowest = (law.id.to_string(), report.premise_rate);
        }
    }
    let mut found = Vec::new();
    for id in ["SANITY-1", "SANITY-2"] {
        let report = run_law(id, 1000, 42, (3, 5)).unwrap();
        ensure(!report.counterexamples.is_empty(), || format!("{id}: no counterexample"))?;
        for ce in &report.counterexamples {
            ensure(ce.revalidate().unwrap(), || format!("{id}: counterexample does not revalidate"))?;
        }
        found.push(report.counterexamples.len());
        if id == "SANITY-2" {
            let small = shrink(&report.counterexamples[0], id).unwrap();
            ensure(small.n() <= 4 && small.revalidate().unwrap(), || format!("shrunk to n = {}", small.n()))?;
        }
    }
    Ok(format!(
        "L1-L18 x1000: 0 counterexamples, lowest premise rate {} {:.1}%; sanity counterexamples {:?}; SANITY-2 shrinks to n<=4",
        lowest.0,
        100.0 * lowest.1,
        found
    ))
}

fn synthesis_round_trip() -> Outcome {
    let open = RestrictionScope::unrestricted();
    for s in 0..200u64 {
        let n = 1 + (s as usize % 6);
        let nu = gen_measure(n, falsifier::stream_seed(s, 0), true);
        let g = gen_partition(n, falsifier::stream_seed(s, 1));
        let r = make_rcd(&nu, &g).unwrap();
        let verdicts = [
            props::check_proper(&r, &nu, &g).unwrap(),
            props::check_total(&r, &nu, &g).unwrap(),
            props::check_stationary(&r, &nu, &open).unwrap(),
            props::check_reversible(&r, &nu, &open).unwrap(),
            props::check_self_compatible(&r, &nu).unwrap(),
            props::check_self_reversible(&r, &nu).unwrap(),
        ];
        if let Some(v) = verdicts.iter().find(|v| !v.holds) {
            return Err(format!("pair {s}: {} fails", v.property));
        }
        let support = nu.support();
        let same = sigma_of_kernel(&r).trace(&support).unwrap() == g.trace(&support).unwrap();
        ensure(same, || format!("pair {s}: sigma trace differs from G trace"))?;
    }
    Ok("200 pairs: P, T, S, R, SC, SR hold and sigma traces G on the support".into())
}

const FIXTURES: [&str; 7] = [
    "e4_uniform",
    "e4_null_origin",
    "e3_balanced",
    "e3_unbalanced",
    "point",
    "measure_partition",
    "e3_float",
];

fn determinism_and_exactness() -> Outcome {
    for id in ["L8", "L17", "SANITY-1"] {
        let a = run_law(id, 300, 7, (2, 5)).unwrap().to_json_without_timing();
        let b = run_law(id, 300, 7, (2, 5)).unwrap().to_json_without_timing();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let serial = pool.install(|| run_law(id, 300, 7, (2, 5)).unwrap().to_json_without_timing());
        ensure(a == b && a == serial, || format!("{id}: reports differ between runs"))?;
    }
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures");
    for name in FIXTURES {
        let text = std::fs::read_to_string(format!("{dir}/{name}.json")).unwrap();
        let inst = parse_instance(&text).unwrap();
        let out = serialize_instance(&inst);
        ensure(out == text.trim_end(), || format!("{name}: serialized as {out}"))?;
        ensure(parse_instance(&out).unwrap() == inst, || format!("{name}: parse mismatch"))?;
    }
    Ok(format!("3 laws x3 runs (one single-threaded) byte-identical; {} fixtures round-trip", FIXTURES.len()))
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("four-state fixture", four_state_fixture),
        ("three-state sweep vs oracle", three_state_sweep),
        ("stationarize pipeline", stationarize_pipeline),
        ("oracle equivalence", oracle_equivalence),
        ("law campaign", law_campaign),
        ("synthesis round trip", synthesis_round_trip),
        ("determinism and exactness", determinism_and_exactness),
    ];
    let start = Instant::now();
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let ms = t.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("PASS {} {name} ({ms} ms): {detail}", i + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL {} {name} ({ms} ms): {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed in {} ms", criteria.len() - failures, criteria.len(), start.elapsed().as_millis());
    if failures > 0 {
        std::process::exit(1);
    }
}
