//! Meets, joins, refinement and traces on the partition lattice.

use rcdkit::{EventSet, Measure, Partition};

fn main() {
    let p = Partition::from_index_lists(&[vec![0, 1], vec![2], vec![3, 4]], 5).unwrap();
    let q = Partition::from_index_lists(&[vec![0], vec![1, 2], vec![3], vec![4]], 5).unwrap();
    println!("p      = {:?}", p.to_index_lists());
    println!("q      = {:?}", q.to_index_lists());
    println!("p ∧ q  = {:?}", p.meet(&q).unwrap().to_index_lists());
    println!("p ∨ q  = {:?}", p.join(&q).unwrap().to_index_lists());
    println!("p ≤ p∨q: {}", p.refines(&p.join(&q).unwrap()).unwrap());

    let carrier = EventSet::from_indices([0, 3, 4], 5).unwrap();
    let t = p.trace(&carrier).unwrap();
    println!("p on {:?} = {:?}", carrier.to_vec(), t.blocks().iter().map(EventSet::to_vec).collect::<Vec<_>>());

    let nu = Measure::from_integer_weights(&[1, 0, 1, 1, 0]).unwrap();
    let r = Partition::from_index_lists(&[vec![0, 4], vec![1, 2], vec![3]], 5).unwrap();
    println!("p and {:?} essentially equal under nu: {}", r.to_index_lists(), p.essentially_equal(&r, &nu).unwrap());
    let gen = Partition::generated_by(&[EventSet::from_indices([0, 1, 2], 5).unwrap()], 5).unwrap();
    println!("sigma({{0,1,2}}) atoms = {:?}", gen.to_index_lists());
}
