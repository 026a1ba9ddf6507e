//! Decides whether kernels are regular conditional distributions, including
//! the stationarize-then-decide pipeline.

use rcdkit::{is_rcd, is_rcd_gcp, stationarize, Kernel, Measure, Rat};

fn kernel(rows: &[&[&str]]) -> Kernel {
    Kernel::new(rows.iter().map(|r| r.iter().map(|s| s.parse().unwrap()).collect()).collect()).unwrap()
}

fn main() {
    let e4 = kernel(&[
        &["0", "1/3", "1/3", "1/3"],
        &["0", "1", "0", "0"],
        &["0", "0", "1/2", "1/2"],
        &["0", "0", "1/2", "1/2"],
    ]);
    let uniform = Measure::uniform(4).unwrap();
    println!("uniform: {}", serde_json::to_string(&is_rcd(&e4, &uniform).unwrap()).unwrap());

    let pi = stationarize(&e4, &uniform).unwrap();
    let w: Vec<String> = pi.weights().iter().map(Rat::to_string).collect();
    println!("pi = ({})", w.join(", "));
    println!("pi:      {}", serde_json::to_string(&is_rcd(&e4, &pi).unwrap()).unwrap());

    // mass sent to a null state breaks stationarity and domination together
    let third = "1/3";
    let leak = kernel(&[&[third, third, third], &[third, third, third], &[third, third, third]]);
    let nu = Measure::new(vec![Rat::new(1, 2), Rat::new(1, 2), Rat::zero()]).unwrap();
    println!("leak:     {}", serde_json::to_string(&is_rcd(&leak, &nu).unwrap()).unwrap());
    println!("leak gcp: {}", serde_json::to_string(&is_rcd_gcp(&leak, &nu).unwrap()).unwrap());
}
