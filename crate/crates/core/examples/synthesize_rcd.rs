//! Builds the conditional distribution of a measure given a partition and
//! checks it is proper, total and recovers the partition on the support.

use rcdkit::props::profile;
use rcdkit::{make_rcd, sigma_of_kernel, Measure, Partition};

fn main() {
    let nu = Measure::from_integer_weights(&[1, 0, 2, 3, 0, 2]).unwrap();
    let g = Partition::from_index_lists(&[vec![0, 2], vec![1, 4], vec![3, 5]], 6).unwrap();
    let r = make_rcd(&nu, &g).unwrap();
    for (x, row) in r.rows().iter().enumerate() {
        let row: Vec<String> = row.iter().map(ToString::to_string).collect();
        println!("R_{x} = ({})", row.join(", "));
    }
    let p = profile(&r, &nu, Some(&g)).unwrap();
    assert!(p.verdicts().iter().all(|v| v.holds));
    let sigma = sigma_of_kernel(&r);
    println!("sigma(R) = {:?}", sigma.to_index_lists());
    println!("essentially equal to G: {}", sigma.essentially_equal(&g, &nu).unwrap());
}
