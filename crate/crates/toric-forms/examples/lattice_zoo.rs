//! Tate cohomology and structural classification for a few small
//! lattices with involution: the sign lattice, the regular lattice, and
//! their non-invertible rank-3 sum.

use toric_forms::glattice::{
    coflasque_resolution, is_coflasque, is_flasque, is_invertible, tate_h, GLattice,
};
use toric_forms::zmodule::IntMatrix;

fn involution_lattice(name: &str, rows: &[Vec<i64>]) -> (String, GLattice) {
    let gen = IntMatrix::from_rows(rows);
    let rank = rows.len();
    let lattice = GLattice::from_generator_matrices(rank, &[gen]).expect("finite order");
    (name.to_string(), lattice)
}

fn main() {
    let lattices = vec![
        involution_lattice("sign", &[vec![-1]]),
        involution_lattice("regular", &[vec![0, 1], vec![1, 0]]),
        involution_lattice(
            "sign + regular",
            &[vec![-1, 0, 0], vec![0, 0, 1], vec![0, 1, 0]],
        ),
    ];

    for (name, l) in &lattices {
        println!("== {} (rank {}) ==", name, l.rank());
        let everyone: Vec<usize> = (0..l.group().order()).collect();
        for degree in [-1, 0, 1] {
            println!("  H^{}: {}", degree, tate_h(degree, &everyone, l));
        }
        println!("  flasque: {}", is_flasque(l).holds);
        println!("  coflasque: {}", is_coflasque(l).holds);
        println!("  invertible: {}", is_invertible(l).is_proven());
        let res = coflasque_resolution(l);
        println!(
            "  resolution: 0 -> Q (rank {}) -> P (rank {}) -> M -> 0",
            res.p.rank() - l.rank(),
            res.p.rank()
        );
        println!();
    }
}
