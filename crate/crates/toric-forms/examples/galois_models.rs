//! Compare H²(k, S → J) for the quadric surface P¹ x P¹ over three field
//! models: the real numbers, a cyclic cubic field, and an abstract C₂
//! model with a prescribed Brauer group, then print the real forms
//! classification with its Brauer fingerprints.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use toric_forms::autgroup::{class_aut_group, fan_automorphisms};
use toric_forms::descent::{classify_forms_real, h2_set, GaloisModel};
use toric_forms::fan::bundled_fan;
use toric_forms::glattice::FiniteMatrixGroup;
use toric_forms::zmodule::IntMatrix;

fn show(model: &GaloisModel, fan_name: &str) {
    let fan = bundled_fan(fan_name).expect("bundled fan");
    let div = fan.class_group().expect("class group");
    let w = fan_automorphisms(&fan).expect("finite symmetry group");
    let j = class_aut_group(&w, &div).expect("free class group");
    let h2 = h2_set(model, &j.class_lattice(), &j).expect("valid model");
    println!(
        "{} over {}: {} neutralization classes",
        fan_name,
        model.label(),
        h2.components.len()
    );
    for (i, comp) in h2.components.iter().enumerate() {
        println!(
            "  component {}: images {:?}, group {}, {} classes",
            i,
            comp.hom.images,
            comp.group,
            comp.size()
        );
    }
}

fn main() {
    show(&GaloisModel::Real, "p1xp1");
    show(&GaloisModel::Finite { order: 3 }, "p1xp1");

    // An abstract C₂ model acting by the regular representation. Subgroup
    // indices follow gamma.subgroups(): 0 is trivial (the big field, Brauer
    // group 0) and 1 is the full group (the base field, Brauer group ℤ/2).
    let swap = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]);
    let gamma = FiniteMatrixGroup::from_generators(2, &[swap]).expect("finite group");
    let mut brauer: BTreeMap<usize, Vec<BigInt>> = BTreeMap::new();
    brauer.insert(0, vec![]);
    brauer.insert(1, vec![BigInt::from(2)]);
    show(&GaloisModel::Abstract { gamma, brauer }, "p1xp1");

    // The full real classification groups torus classes into varieties
    // by fingerprint.
    let fan = bundled_fan("p1xp1").expect("bundled fan");
    let report = classify_forms_real(&fan).expect("smooth projective fan");
    println!(
        "real forms of p1xp1: {} torus classes in {} varieties",
        report.rows.len(),
        report.variety_class_count
    );
    for row in &report.rows {
        let torus = row
            .torus
            .map(|t| {
                format!(
                    "split {} circles {} Res {}",
                    t.split, t.circles, t.restrictions
                )
            })
            .unwrap_or_else(|| "-".to_string());
        println!(
            "  w-class {} fingerprint ({}, {:?}) neutral={} variety {} torus [{}]",
            row.w_class,
            row.fingerprint.component,
            row.fingerprint.coords,
            row.fingerprint.neutral,
            row.variety_class,
            torus
        );
    }
}
