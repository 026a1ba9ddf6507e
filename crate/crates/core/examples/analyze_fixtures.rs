//! Property profiles of the two standard small kernels: a 4-state kernel that
//! is self-reversible and trivial but not total, and a 3-state block kernel.

use rcdkit::props::profile;
use rcdkit::{Kernel, Measure, Rat};

fn kernel(rows: &[&[&str]]) -> Kernel {
    Kernel::new(rows.iter().map(|r| r.iter().map(|s| s.parse().unwrap()).collect()).collect()).unwrap()
}

fn show(name: &str, r: &Kernel, nu: &Measure) {
    let p = profile(r, nu, None).unwrap();
    println!("{name}  sigma(R) = {:?}", p.sigma.to_index_lists());
    for v in p.verdicts() {
        let witness = v.witness.as_ref().map(|w| serde_json::to_string(w).unwrap()).unwrap_or_default();
        println!("  {:<8}{:<6}{witness}", v.property.code(), v.holds);
    }
}

fn main() {
    let e4 = kernel(&[
        &["0", "1/3", "1/3", "1/3"],
        &["0", "1", "0", "0"],
        &["0", "0", "1/2", "1/2"],
        &["0", "0", "1/2", "1/2"],
    ]);
    show("E4, uniform", &e4, &Measure::uniform(4).unwrap());
    let nu = Measure::new(vec![Rat::zero(), Rat::new(1, 3), Rat::new(1, 3), Rat::new(1, 3)]).unwrap();
    show("E4, nu(0) = 0", &e4, &nu);

    let e3 = kernel(&[&["1", "0", "0"], &["0", "1/2", "1/2"], &["0", "1/2", "1/2"]]);
    for w in [[2, 1, 1], [2, 3, 1]] {
        let nu = Measure::from_integer_weights(&w).unwrap();
        show(&format!("E3, nu ~ {w:?}"), &e3, &nu);
    }
}
