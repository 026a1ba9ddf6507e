//! Decimal input in float mode: sums are checked within epsilon, the measure
//! and rows are rescaled exactly, and comparisons tolerate epsilon.

use rcdkit::{parse_instance, props::Checker, rcd};

fn main() {
    let doc = r#"{"n":3,"mode":"float","epsilon":"0.001",
        "nu":["0.5","0.2501","0.2499"],
        "R":[["1","0","0"],["0","0.5","0.5"],["0","0.5004","0.4996"]]}"#;
    let inst = parse_instance(doc).expect("valid float document");
    let r = inst.require_kernel().unwrap();
    let checker = Checker::for_mode(&inst.mode);
    let p = checker.profile(r, &inst.nu, None, &inst.mode).unwrap();
    println!("sigma(R) within epsilon = {:?}", p.sigma.to_index_lists());
    for v in p.verdicts() {
        println!("  {:<8}{}", v.property.code(), v.holds);
    }
    println!("is_rcd (float) = {}", rcd::decide(r, &inst.nu, &inst.mode, false).unwrap().is_rcd);
    println!("exact sigma(R) = {:?}", rcd::sigma_of_kernel(r).to_index_lists());
    println!("oracle refuses float: {}", inst.require_rational().unwrap_err());
}
