//! Compute the canonical omega of the degree six del Pezzo surface,
//! then validate the classical five-class set {H, 2H-E1-E2-E3, H-E1,
//! H-E2, H-E3} and print the product-of-projective-spaces target and
//! the separable algebra both sets induce.

use num_bigint::BigInt;

use toric_forms::autgroup::{class_aut_group, fan_automorphisms};
use toric_forms::fan::bundled_fan;
use toric_forms::omega::{
    canonical_omega, omega_from_classes, target_shape, validate_omega, OmegaSet,
};

fn vadd(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn vsub(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn describe(label: &str, omega: &OmegaSet) {
    let (target, algebra) = target_shape(omega).expect("h0 values are positive");
    println!("{}: {} classes", label, omega.len());
    let dims: Vec<String> = target
        .factors
        .iter()
        .map(|(_, d)| format!("P{}", d))
        .collect();
    println!("  target: {}", dims.join(" x "));
    let factors: Vec<String> = algebra
        .factors
        .iter()
        .map(|(deg, orbit)| format!("M{} over an etale algebra of degree {}", deg, orbit))
        .collect();
    println!("  algebra: {}", factors.join(" x "));
}

fn main() {
    let fan = bundled_fan("dp6").expect("bundled fan");
    let div = fan.class_group().expect("class group");
    let w = fan_automorphisms(&fan).expect("finite symmetry group");
    let j = class_aut_group(&w, &div).expect("free class group");

    let omega = canonical_omega(&fan, &div, &j).expect("smooth fan");
    describe("canonical omega", &omega);

    // ray classes are E1, E2, E3, H-E2-E3, H-E1-E3, H-E1-E2 in this order
    let e1 = div.ray_class(0);
    let e2 = div.ray_class(1);
    let e3 = div.ray_class(2);
    let h = vadd(&vadd(&div.ray_class(3), &e2), &e3);
    let classes = vec![
        h.clone(),
        vsub(&vsub(&vsub(&vadd(&h, &h), &e1), &e2), &e3),
        vsub(&h, &e1),
        vsub(&h, &e2),
        vsub(&h, &e3),
    ];
    let validation = validate_omega(&classes, &fan, &div, &j).expect("nef cone");
    println!(
        "five-class set validates: {} (J-stable {}, nef {}, faithful {}, kernel coflasque {})",
        validation.all_pass(),
        validation.j_stable,
        validation.all_globally_generated,
        validation.faithful,
        validation.kernel_coflasque,
    );
    let five = omega_from_classes(&classes, &fan, &div, &j).expect("J-stable set");
    describe("five-class omega", &five);
}
