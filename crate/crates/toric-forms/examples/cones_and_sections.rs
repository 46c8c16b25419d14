//! Enumerate Hilbert bases of plane cones, cut out the nef cone of a
//! Hirzebruch surface, and count divisor sections on the projective
//! plane and the degree six del Pezzo surface.

use num_bigint::BigInt;

use toric_forms::fan::{bundled_fan, TDivisor};
use toric_forms::polyhedral::{h0, hilbert_basis, nef_cone, RationalCone};

fn main() {
    // Hilbert bases of a few plane cones, including singular ones whose
    // bases need generators beyond the extreme rays.
    for (name, rays) in [
        ("smooth quadrant", vec![vec![1i64, 0], vec![0, 1]]),
        ("singular (1,0),(1,2)", vec![vec![1, 0], vec![1, 2]]),
        ("wide (1,0),(-2,5)", vec![vec![1, 0], vec![-2, 5]]),
    ] {
        let gens: Vec<Vec<BigInt>> = rays
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let cone = RationalCone::from_generators(2, &gens);
        let basis = hilbert_basis(&cone).expect("pointed cone");
        let rendered: Vec<String> = basis
            .iter()
            .map(|p| format!("({}, {})", p[0], p[1]))
            .collect();
        println!("{}: {}", name, rendered.join(" "));
    }

    // The nef cone of the Hirzebruch surface F2 in class coordinates.
    let fan = bundled_fan("hirzebruch_2").expect("bundled fan");
    let div = fan.class_group().expect("class group");
    let nef = nef_cone(&fan, &div).expect("smooth projective fan");
    println!("F2 nef cone:");
    for ray in nef.cone.extreme_rays() {
        let coords: Vec<String> = ray.iter().map(|x| x.to_string()).collect();
        println!("  extreme ray [{}]", coords.join(", "));
    }

    // Section counts: on P2 the divisor dH has (d+2 choose 2) sections.
    let p2 = bundled_fan("p2").expect("bundled fan");
    for d in 0i64..=4 {
        let divisor = TDivisor::new(vec![BigInt::from(d), BigInt::from(0), BigInt::from(0)]);
        println!("P2, h0({}H) = {}", d, h0(&p2, &divisor).expect("complete"));
    }

    // On the del Pezzo surface the anticanonical divisor has 7 sections.
    let dp6 = bundled_fan("dp6").expect("bundled fan");
    let anticanonical = TDivisor::new(vec![BigInt::from(1); 6]);
    println!(
        "dP6, h0(-K) = {}",
        h0(&dp6, &anticanonical).expect("complete")
    );
}
