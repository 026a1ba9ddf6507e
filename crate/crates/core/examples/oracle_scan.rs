//! Exhaustive scan over all partitions, compared with the direct decision.

use rcdkit::{enumerate_partitions, is_rcd, oracle_is_rcd, sigma_of_kernel, Kernel, Measure, Rat};

fn main() {
    for n in 0..=8 {
        println!("Bell({n}) = {}", enumerate_partitions(n).unwrap().count());
    }
    let (o, z, h) = (Rat::one(), Rat::zero(), Rat::new(1, 2));
    let r = Kernel::new(vec![
        vec![o, z.clone(), z.clone()],
        vec![z.clone(), h.clone(), h.clone()],
        vec![z, h.clone(), h],
    ])
    .unwrap();
    for w in [[2u64, 1, 1], [0, 1, 1], [1, 2, 1]] {
        let nu = Measure::from_integer_weights(&w).unwrap();
        let oracle = oracle_is_rcd(&r, &nu).unwrap();
        let accepted: Vec<_> = oracle.accepted.iter().map(|g| g.to_index_lists()).collect();
        println!(
            "nu ~ {w:?}: is_rcd = {}, oracle accepts {accepted:?} of {}, sigma(R) = {:?}",
            is_rcd(&r, &nu).unwrap().is_rcd,
            oracle.partitions_scanned,
            sigma_of_kernel(&r).to_index_lists()
        );
    }
}
