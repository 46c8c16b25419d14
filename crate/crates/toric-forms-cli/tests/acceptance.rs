//! Acceptance suite: one test per criterion, each printing a single
//! pass/fail line (run with `--nocapture` to see them on success).

use std::collections::{BTreeMap, BTreeSet};
use std::panic;
use std::process::Command;
use std::time::Instant;

use num_bigint::BigInt;

use toric_forms::autgroup::{class_aut_group, fan_automorphisms};
use toric_forms::descent::{
    classify_forms_real, fingerprint_in_p_canonical, h2_set, hom_classes, GaloisModel,
};
use toric_forms::fan::{bundled_fan, bundled_fans, Fan, TDivisor};
use toric_forms::glattice::{
    coflasque_resolution, is_coflasque, is_flasque, is_invertible, tate_h, tate_minus1,
    FiniteMatrixGroup, GLattice, InvertibilityVerdict,
};
use toric_forms::omega::{canonical_omega, omega_from_classes, target_shape, validate_omega};
use toric_forms::polyhedral::{h0, hilbert_basis, RationalCone};
use toric_forms::report::analysis_report;
use toric_forms::zmodule::{IntMatrix, Subquotient};

fn check<F>(name: &str, body: F)
where
    F: FnOnce() -> String + panic::UnwindSafe,
{
    match panic::catch_unwind(body) {
        Ok(detail) => println!("{}: pass ({})", name, detail),
        Err(e) => {
            println!("{}: FAIL", name);
            panic::resume_unwind(e);
        }
    }
}

fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

fn bigvec(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| big(x)).collect()
}

fn vadd(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn vsub(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn element_order(g: &FiniteMatrixGroup, i: usize) -> usize {
    let mut x = i;
    let mut n = 1;
    while x != g.identity_index() {
        x = g.multiply(x, i);
        n += 1;
    }
    n
}

#[test]
fn criterion_1_del_pezzo6_pipeline() {
    check("criterion 1, del Pezzo 6 pipeline", || {
        let start = Instant::now();
        // ray matrix columns in the conventional hexagon order
        let fan = Fan::from_i64(
            2,
            &[
                vec![1, 0],
                vec![0, 1],
                vec![-1, -1],
                vec![-1, 0],
                vec![0, -1],
                vec![1, 1],
            ],
            &[
                vec![0, 5],
                vec![1, 5],
                vec![1, 3],
                vec![2, 3],
                vec![2, 4],
                vec![0, 4],
            ],
        );
        assert_eq!(fan.rays(), bundled_fan("dp6").unwrap().rays());
        let report = analysis_report(&fan).unwrap();
        assert_eq!(report.cl_group.free_rank(), 4);
        assert!(report.cl_group.torsion_factors().is_empty());
        assert_eq!(report.lambda.len(), 6);
        assert!(report.lambda.iter().all(|(_, n)| *n == 1));
        let sym = report.symmetry.as_ref().expect("symmetry section");
        assert_eq!(sym.w_order, 12);
        assert_eq!(sym.wo_order, 1);
        assert_eq!(sym.j_order, 12);

        // S3 x C2 is the unique order-12 group with element-order profile
        // {1:1, 2:7, 3:2, 6:2}; its center has order 2
        let w = fan_automorphisms(&fan).unwrap();
        let div = fan.class_group().unwrap();
        let j = class_aut_group(&w, &div).unwrap();
        let mut profile: BTreeMap<usize, usize> = BTreeMap::new();
        for g in 0..j.group().order() {
            *profile.entry(element_order(j.group(), g)).or_insert(0) += 1;
        }
        let expected: BTreeMap<usize, usize> = [(1, 1), (2, 7), (3, 2), (6, 2)].into();
        assert_eq!(profile, expected);
        let everyone: Vec<usize> = (0..j.group().order()).collect();
        assert_eq!(j.group().centralizer(&everyone).len(), 2);

        let pic = report.pic.as_ref().expect("class lattice section");
        assert!(pic.flasque);
        match &pic.invertible.verdict {
            InvertibilityVerdict::Proven { section } => {
                let res = coflasque_resolution(&j.class_lattice());
                assert_eq!(res.pi.mul(section), IntMatrix::identity(4));
            }
            InvertibilityVerdict::Disproven { reason } => {
                panic!("class lattice reported non-invertible: {}", reason)
            }
        }
        let elapsed = start.elapsed();
        assert!(elapsed.as_secs_f64() < 10.0, "pipeline took {:?}", elapsed);
        format!(
            "Cl = Z^4, six weights of multiplicity 1, |W| = 12, Wo trivial, \
             J has the S3 x C2 profile, Pic flasque and invertible with a \
             verified section, {:.2?}",
            elapsed
        )
    });
}

#[test]
fn criterion_2_five_class_set() {
    check("criterion 2, five-class set on del Pezzo 6", || {
        let fan = bundled_fan("dp6").unwrap();
        let div = fan.class_group().unwrap();
        let w = fan_automorphisms(&fan).unwrap();
        let j = class_aut_group(&w, &div).unwrap();

        // in this ray order the ray classes are E1, E2, E3, H-E2-E3,
        // H-E1-E3, H-E1-E2, so H is recoverable three independent ways
        let c: Vec<Vec<BigInt>> = (0..6).map(|r| div.ray_class(r)).collect();
        let (e1, e2, e3) = (c[0].clone(), c[1].clone(), c[2].clone());
        let h_a = vadd(&vadd(&c[3], &e2), &e3);
        let h_b = vadd(&vadd(&c[4], &e1), &e3);
        let h_c = vadd(&vadd(&c[5], &e1), &e2);
        assert_eq!(h_a, h_b);
        assert_eq!(h_a, h_c);
        let h = h_a;
        let two_h = vadd(&h, &h);
        let classes = vec![
            h.clone(),
            vsub(&vsub(&vsub(&two_h, &e1), &e2), &e3),
            vsub(&h, &e1),
            vsub(&h, &e2),
            vsub(&h, &e3),
        ];

        let validation = validate_omega(&classes, &fan, &div, &j).unwrap();
        assert!(validation.j_stable);
        assert!(validation.all_globally_generated);
        assert!(validation.faithful);
        assert!(validation.kernel_coflasque);
        assert!(validation.all_pass());

        let omega = omega_from_classes(&classes, &fan, &div, &j).unwrap();
        let (target, algebra) = target_shape(&omega).unwrap();
        let mut dims: Vec<i64> = target
            .factors
            .iter()
            .map(|(_, d)| i64::try_from(d).unwrap())
            .collect();
        dims.sort();
        assert_eq!(dims, vec![1, 1, 1, 2, 2]);
        let mut alg: Vec<(i64, usize)> = algebra
            .factors
            .iter()
            .map(|(deg, orbit)| (i64::try_from(deg).unwrap(), *orbit))
            .collect();
        alg.sort();
        assert_eq!(alg, vec![(2, 3), (3, 2)]);
        "H, 2H-E1-E2-E3, H-E1, H-E2, H-E3 validate; Y = (P2)^2 x (P1)^3; \
         B = degree 3 over etale 2 x degree 2 over etale 3"
            .to_string()
    });
}

#[test]
fn criterion_3_real_forms_of_p1xp1() {
    check("criterion 3, real forms of P1 x P1", || {
        let fan = bundled_fan("p1xp1").unwrap();
        let report = classify_forms_real(&fan).unwrap();
        assert_eq!(report.w_class_count, 4);
        assert_eq!(report.rows.len(), 7);
        assert_eq!(report.variety_class_count, 4);
        assert_eq!(report.components.len(), 2);

        let mut per_variety: BTreeMap<usize, Vec<(usize, usize, usize)>> = BTreeMap::new();
        for row in &report.rows {
            let t = row.torus.as_ref().expect("real rows carry a torus label");
            per_variety.entry(row.variety_class).or_default().push((
                t.split,
                t.circles,
                t.restrictions,
            ));
        }
        let mut counts: Vec<usize> = per_variety.values().map(|v| v.len()).collect();
        counts.sort_by(|a, b| b.cmp(a));
        assert_eq!(counts, vec![3, 2, 1, 1]);

        let mut torus_sets: Vec<Vec<(usize, usize, usize)>> = per_variety
            .values()
            .map(|v| {
                let mut v = v.clone();
                v.sort();
                v
            })
            .collect();
        torus_sets.sort();
        assert_eq!(
            torus_sets,
            vec![
                vec![(0, 0, 1)],                       // R_{C/R} Gm
                vec![(0, 2, 0)],                       // S1 x S1
                vec![(0, 2, 0), (1, 1, 0)],            // S1 x S1, Gm x S1
                vec![(0, 2, 0), (1, 1, 0), (2, 0, 0)], // plus Gm^2
            ]
        );
        "4 classes in H^1(R,W), 7 torus-model classes, 4 variety classes, \
         2 neutralization classes, per-variety torus counts 3/2/1/1"
            .to_string()
    });
}

#[test]
fn criterion_4_h2_component_sizes() {
    check("criterion 4, H^2 component sizes over R", || {
        let fan = bundled_fan("p1xp1").unwrap();
        let div = fan.class_group().unwrap();
        let w = fan_automorphisms(&fan).unwrap();
        let j = class_aut_group(&w, &div).unwrap();
        let h2 = h2_set(&GaloisModel::Real, &j.class_lattice(), &j).unwrap();
        let mut sizes: Vec<usize> = h2.components.iter().map(|c| c.size()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 3]);

        let fan = bundled_fan("p1xp3").unwrap();
        let div = fan.class_group().unwrap();
        let w = fan_automorphisms(&fan).unwrap();
        let j = class_aut_group(&w, &div).unwrap();
        let h2 = h2_set(&GaloisModel::Real, &j.class_lattice(), &j).unwrap();
        let sizes: Vec<usize> = h2.components.iter().map(|c| c.size()).collect();
        assert_eq!(sizes, vec![4]);
        "P1 x P1 has components of sizes 3 and 1; P1 x P3 one component of size 4".to_string()
    });
}

#[test]
fn criterion_5_neutral_fiber_exactness() {
    check("criterion 5, neutral fingerprint exactness", || {
        let gamma = GaloisModel::Real.gamma();
        let mut fans_checked = 0;
        for (name, fan) in bundled_fans() {
            if name == "cube_twist" {
                assert!(classify_forms_real(&fan).is_err());
                continue;
            }
            let report = classify_forms_real(&fan).unwrap();
            let div = fan.class_group().unwrap();
            let w = fan_automorphisms(&fan).unwrap();
            let j = class_aut_group(&w, &div).unwrap();
            let h1_j = hom_classes(&gamma, j.group()).len();

            let neutral_fingerprints: BTreeSet<(usize, Vec<BigInt>)> = report
                .rows
                .iter()
                .filter(|r| r.fingerprint.neutral)
                .map(|r| (r.fingerprint.component, r.fingerprint.coords.clone()))
                .collect();
            assert_eq!(neutral_fingerprints.len(), h1_j, "fan {}", name);
            assert_eq!(neutral_fingerprints.len(), report.components.len());

            // injectivity of H^1(R,W) into the torus-model classes lands
            // exactly on the neutral fibers: one neutral row per W-class
            let mut neutral_per_w: BTreeMap<usize, usize> = BTreeMap::new();
            for row in &report.rows {
                if row.fingerprint.neutral {
                    *neutral_per_w.entry(row.w_class).or_insert(0) += 1;
                }
            }
            assert_eq!(neutral_per_w.len(), report.w_class_count, "fan {}", name);
            assert!(neutral_per_w.values().all(|&n| n == 1), "fan {}", name);
            fans_checked += 1;
        }
        format!(
            "{} fans: distinct neutral fingerprints = |H^1(R,J)|, and every \
             W-class meets the neutral fiber in exactly one class",
            fans_checked
        )
    });
}

#[test]
fn criterion_6_fingerprint_injectivity_and_kernel_witness() {
    check(
        "criterion 6, fingerprint injectivity and kernel witness",
        || {
            // invertible class lattices: rendered fingerprints separate every
            // element of every component
            let mut components_checked = 0;
            for name in ["p1xp1", "p1xp3", "dp6"] {
                let fan = bundled_fan(name).unwrap();
                let div = fan.class_group().unwrap();
                let w = fan_automorphisms(&fan).unwrap();
                let j = class_aut_group(&w, &div).unwrap();
                assert!(is_invertible(&j.class_lattice()).is_proven());
                let omega = canonical_omega(&fan, &div, &j).unwrap();
                let h2 = h2_set(&GaloisModel::Real, &j.class_lattice(), &j).unwrap();
                for comp in &h2.components {
                    let mut seen = BTreeSet::new();
                    for e in &comp.elements {
                        let rendered = fingerprint_in_p_canonical(comp, e, &omega, &j).unwrap();
                        assert!(
                            seen.insert(rendered),
                            "fingerprint collision on {} in a component of size {}",
                            name,
                            comp.size()
                        );
                    }
                    components_checked += 1;
                }
            }

            // the non-invertible rank-3 lattice: the map induced by the dual of
            // its coflasque resolution kills a nonzero degree -1 class
            let gen = IntMatrix::from_rows(&[vec![-1, 0, 0], vec![0, 0, 1], vec![0, 1, 0]]);
            let m = GLattice::from_generator_matrices(3, &[gen]).unwrap();
            assert!(!is_invertible(&m).is_proven());
            let res = coflasque_resolution(&m);
            let m_dual = m.dual();
            let p_dual = res.p.dual();
            let to_p_dual = res.pi.transpose();
            let all: Vec<usize> = (0..m.group().order()).collect();
            let hm = tate_minus1(&all, &m_dual);
            let hp = tate_minus1(&all, &p_dual);
            assert!(!hm.group().is_trivial());
            assert!(hp.group().is_trivial());
            let nonzero = hm
                .group()
                .elements()
                .into_iter()
                .find(|e| !hm.group().is_zero_element(e))
                .expect("a nonzero class exists");
            let ambient = hm.lift(&nonzero);
            let image = to_p_dual.mul_vec(&ambient);
            let image_class = hp.class_of(&image);
            assert!(hp.group().is_zero_element(&image_class));
            println!(
                "criterion 6 witness: degree -1 class with representative {:?} in \
             the dual of the rank-3 lattice maps to {:?}, which is trivial in \
             the permutation side",
                ambient, image
            );
            format!(
                "{} components fingerprint-injective; non-invertible rank-3 \
             lattice yields a nontrivial kernel class (witness above)",
                components_checked
            )
        },
    );
}

struct BatteryEntry {
    name: &'static str,
    lattice: GLattice,
}

fn shift_matrix(k: usize) -> IntMatrix {
    let mut rows = vec![vec![0i64; k]; k];
    for i in 0..k {
        rows[(i + 1) % k][i] = 1;
    }
    IntMatrix::from_rows(&rows)
}

fn lattice(rank: usize, gens: &[Vec<Vec<i64>>]) -> GLattice {
    let mats: Vec<IntMatrix> = gens.iter().map(|g| IntMatrix::from_rows(g)).collect();
    GLattice::from_generator_matrices(rank, &mats).unwrap()
}

fn battery() -> Vec<BatteryEntry> {
    let dp6 = bundled_fan("dp6").unwrap();
    let div = dp6.class_group().unwrap();
    let w = fan_automorphisms(&dp6).unwrap();
    let j = class_aut_group(&w, &div).unwrap();
    vec![
        BatteryEntry {
            name: "trivial",
            lattice: lattice(1, &[vec![vec![1]]]),
        },
        BatteryEntry {
            name: "sign",
            lattice: lattice(1, &[vec![vec![-1]]]),
        },
        BatteryEntry {
            name: "c2 regular",
            lattice: lattice(2, &[vec![vec![0, 1], vec![1, 0]]]),
        },
        BatteryEntry {
            name: "sign + trivial",
            lattice: lattice(2, &[vec![vec![-1, 0], vec![0, 1]]]),
        },
        BatteryEntry {
            name: "double sign",
            lattice: lattice(2, &[vec![vec![-1, 0], vec![0, -1]]]),
        },
        BatteryEntry {
            name: "sign + swap (rank 3)",
            lattice: lattice(3, &[vec![vec![-1, 0, 0], vec![0, 0, 1], vec![0, 1, 0]]]),
        },
        BatteryEntry {
            name: "order-3 rotation",
            lattice: lattice(2, &[vec![vec![0, -1], vec![1, -1]]]),
        },
        BatteryEntry {
            name: "c3 regular",
            lattice: GLattice::from_generator_matrices(3, &[shift_matrix(3)]).unwrap(),
        },
        BatteryEntry {
            name: "order-4 rotation",
            lattice: lattice(2, &[vec![vec![0, -1], vec![1, 0]]]),
        },
        BatteryEntry {
            name: "c4 regular",
            lattice: GLattice::from_generator_matrices(4, &[shift_matrix(4)]).unwrap(),
        },
        BatteryEntry {
            name: "order-4 rotation + sign",
            lattice: lattice(3, &[vec![vec![0, -1, 0], vec![1, 0, 0], vec![0, 0, -1]]]),
        },
        BatteryEntry {
            name: "order-5 rotation",
            lattice: lattice(
                4,
                &[vec![
                    vec![0, 0, 0, -1],
                    vec![1, 0, 0, -1],
                    vec![0, 1, 0, -1],
                    vec![0, 0, 1, -1],
                ]],
            ),
        },
        BatteryEntry {
            name: "order-6 rotation",
            lattice: lattice(2, &[vec![vec![0, -1], vec![1, 1]]]),
        },
        BatteryEntry {
            name: "order-6 rotation + sign",
            lattice: lattice(3, &[vec![vec![0, -1, 0], vec![1, 1, 0], vec![0, 0, -1]]]),
        },
        BatteryEntry {
            name: "negated order-3 rotation",
            lattice: lattice(2, &[vec![vec![0, 1], vec![-1, 1]]]),
        },
        BatteryEntry {
            name: "del Pezzo 6 class lattice",
            lattice: j.class_lattice(),
        },
    ]
}

fn cyclic_generator(group: &FiniteMatrixGroup, subgroup: &[usize]) -> Option<usize> {
    subgroup
        .iter()
        .copied()
        .find(|&g| element_order(group, g) == subgroup.len())
}

fn cyclic_h1(l: &GLattice, subgroup: &[usize], generator: usize) -> Subquotient {
    let r = l.rank();
    let mut norm = IntMatrix::zero(r, r);
    for &h in subgroup {
        norm = norm.add(l.action(h));
    }
    let kernel = norm.kernel();
    let mut rel_cols: Vec<Vec<BigInt>> = Vec::new();
    let a = l.action(generator);
    for jcol in 0..r {
        let mut col = a.column(jcol);
        col[jcol] -= big(1);
        rel_cols.push(col);
    }
    let relations = IntMatrix::from_columns(&rel_cols, r);
    Subquotient::new(kernel, &relations)
}

#[test]
fn criterion_7_lattice_oracle_equivalence() {
    check("criterion 7, lattice oracle equivalence", || {
        let start = Instant::now();

        let mut cyclic_comparisons = 0;
        let mut invertible_checked = 0;
        for entry in battery() {
            let l = &entry.lattice;
            assert!(l.rank() <= 4, "{}", entry.name);
            for subgroup in l.group().subgroups() {
                if let Some(g) = cyclic_generator(l.group(), &subgroup) {
                    let bar = tate_h(1, &subgroup, l);
                    let formula = cyclic_h1(l, &subgroup, g).group().clone();
                    assert_eq!(
                        bar,
                        formula,
                        "bar vs kernel/image on {} over a subgroup of order {}",
                        entry.name,
                        subgroup.len()
                    );
                    cyclic_comparisons += 1;
                }
            }
            if is_invertible(l).is_proven() {
                assert!(is_flasque(l).holds, "{}", entry.name);
                assert!(is_coflasque(l).holds, "{}", entry.name);
                invertible_checked += 1;
            }
        }
        assert!(cyclic_comparisons >= 40);
        assert!(invertible_checked >= 5);

        // permutation lattices Z[C_m / C_d]: degree +-1 cohomology vanishes
        // for every subgroup (the faithful image computes the same Tate
        // groups: the norm of the full group is |ker| times the norm of the
        // image, so kernels agree, and generator images agree)
        let mut permutation_checked = 0;
        for m in 1..=6usize {
            for d in 1..=m {
                if m % d != 0 {
                    continue;
                }
                let k = m / d;
                let perm = GLattice::from_generator_matrices(k, &[shift_matrix(k)]).unwrap();
                assert!(is_flasque(&perm).holds, "Z[C_{} / C_{}]", m, d);
                assert!(is_coflasque(&perm).holds, "Z[C_{} / C_{}]", m, d);
                permutation_checked += 1;
            }
        }

        let elapsed = start.elapsed();
        assert!(
            elapsed.as_secs_f64() < 30.0,
            "oracle loop took {:?}",
            elapsed
        );
        format!(
            "{} bar-resolution vs kernel/image comparisons, {} permutation \
             modules with vanishing degree +-1 cohomology, {} proven-invertible \
             lattices flasque and coflasque, {:.2?}",
            cyclic_comparisons, permutation_checked, invertible_checked, elapsed
        )
    });
}

fn cross(a: (i64, i64), b: (i64, i64)) -> i64 {
    a.0 * b.1 - a.1 * b.0
}

fn primitive(v: (i64, i64)) -> (i64, i64) {
    let g = gcd(v.0.abs(), v.1.abs());
    (v.0 / g, v.1 / g)
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Irreducible nonzero points of cone(g1, g2), brute force: every
/// irreducible lies in the fundamental parallelogram, and reducibility
/// only needs summands from the parallelogram.
fn brute_hilbert(g1: (i64, i64), g2: (i64, i64)) -> BTreeSet<(i64, i64)> {
    let det = cross(g1, g2);
    assert!(det != 0);
    let in_parallelogram = |x: (i64, i64)| {
        let a = cross(x, g2) * det.signum();
        let b = cross(g1, x) * det.signum();
        a >= 0 && b >= 0 && a <= det.abs() && b <= det.abs()
    };
    let in_cone =
        |x: (i64, i64)| cross(x, g2) * det.signum() >= 0 && cross(g1, x) * det.signum() >= 0;
    let bx = g1.0.abs() + g2.0.abs();
    let by = g1.1.abs() + g2.1.abs();
    let mut points = Vec::new();
    for x in -bx..=bx {
        for y in -by..=by {
            if (x, y) != (0, 0) && in_parallelogram((x, y)) {
                points.push((x, y));
            }
        }
    }
    let mut basis = BTreeSet::new();
    for &p in &points {
        let reducible = points.iter().any(|&q| {
            let r = (p.0 - q.0, p.1 - q.1);
            q != p && r != (0, 0) && in_cone(r)
        });
        if !reducible {
            basis.insert(p);
        }
    }
    basis
}

fn brute_section_count(fan: &Fan, coefficients: &[BigInt], bound: i64) -> i64 {
    let rank = fan.rank();
    assert!(rank == 2, "brute counter covers surfaces");
    let rays: Vec<(i64, i64)> = fan
        .rays()
        .iter()
        .map(|r| (i64::try_from(&r[0]).unwrap(), i64::try_from(&r[1]).unwrap()))
        .collect();
    let a: Vec<i64> = coefficients
        .iter()
        .map(|c| i64::try_from(c).unwrap())
        .collect();
    let mut count = 0;
    for x in -bound..=bound {
        for y in -bound..=bound {
            if rays
                .iter()
                .zip(&a)
                .all(|(&(rx, ry), &av)| x * rx + y * ry >= -av)
            {
                count += 1;
            }
        }
    }
    count
}

#[test]
fn criterion_8_polyhedral_oracles() {
    check("criterion 8, polyhedral oracles", || {
        // Hilbert bases of all two-dimensional cones with generator
        // coordinates bounded by 5, against brute-force irreducibility
        let mut rays: Vec<(i64, i64)> = Vec::new();
        for x in -5i64..=5 {
            for y in -5i64..=5 {
                if (x, y) != (0, 0) && gcd(x.abs(), y.abs()) == 1 {
                    rays.push((x, y));
                }
            }
        }
        let mut cones: BTreeSet<((i64, i64), (i64, i64))> = BTreeSet::new();
        for &g1 in &rays {
            for &g2 in &rays {
                if cross(g1, g2) > 0 {
                    cones.insert((primitive(g1), primitive(g2)));
                }
            }
        }
        for &(g1, g2) in &cones {
            let cone =
                RationalCone::from_generators(2, &[bigvec(&[g1.0, g1.1]), bigvec(&[g2.0, g2.1])]);
            let computed: BTreeSet<(i64, i64)> = hilbert_basis(&cone)
                .unwrap()
                .into_iter()
                .map(|v| (i64::try_from(&v[0]).unwrap(), i64::try_from(&v[1]).unwrap()))
                .collect();
            let expected = brute_hilbert(g1, g2);
            assert_eq!(computed, expected, "cone {:?} {:?}", g1, g2);
        }

        // section counts against direct lattice-point enumeration
        let p2 = bundled_fan("p2").unwrap();
        let mut h0_checked = 0;
        for coeffs in [
            vec![0, 0, 0],
            vec![1, 0, 0],
            vec![2, 0, 0],
            vec![3, 0, 0],
            vec![1, 1, 1],
        ] {
            let d = TDivisor::from_i64(&coeffs);
            let direct = brute_section_count(&p2, d.coefficients(), 12);
            assert_eq!(h0(&p2, &d).unwrap(), BigInt::from(direct));
            h0_checked += 1;
        }
        assert_eq!(
            h0(&p2, &TDivisor::from_i64(&[1, 0, 0])).unwrap(),
            BigInt::from(3)
        );

        let p1xp1 = bundled_fan("p1xp1").unwrap();
        let div = p1xp1.class_group().unwrap();
        for class in [vec![1, 0], vec![2, 3], vec![0, 0], vec![1, 1]] {
            let d = TDivisor::new(div.lift_class(&bigvec(&class)));
            let direct = brute_section_count(&p1xp1, d.coefficients(), 12);
            assert_eq!(h0(&p1xp1, &d).unwrap(), BigInt::from(direct));
            h0_checked += 1;
        }

        let dp6 = bundled_fan("dp6").unwrap();
        let div = dp6.class_group().unwrap();
        let e1 = div.ray_class(0);
        let h = vadd(
            &vadd(&div.ray_class(3), &div.ray_class(1)),
            &div.ray_class(2),
        );
        let h_minus_e1 = TDivisor::new(div.lift_class(&vsub(&h, &e1)));
        assert_eq!(h0(&dp6, &h_minus_e1).unwrap(), BigInt::from(2));
        for d in [
            h_minus_e1,
            TDivisor::new(div.lift_class(&h)),
            TDivisor::anticanonical(&dp6),
        ] {
            let direct = brute_section_count(&dp6, d.coefficients(), 12);
            assert_eq!(h0(&dp6, &d).unwrap(), BigInt::from(direct));
            h0_checked += 1;
        }

        format!(
            "{} Hilbert bases match brute force; {} section counts match \
             direct enumeration, including h0(H) = 3 on P2 and h0(H-E1) = 2 \
             on del Pezzo 6",
            cones.len(),
            h0_checked
        )
    });
}

#[test]
fn criterion_9_byte_identical_runs() {
    check("criterion 9, byte-identical reruns", || {
        let exe = env!("CARGO_BIN_EXE_toric-forms");
        let mut invocations = 0;
        for (name, _) in bundled_fans() {
            let arg_sets: Vec<Vec<&str>> = vec![
                vec!["analyze", &name],
                vec!["analyze", &name, "--json"],
                vec!["forms", &name, "--field", "real"],
                vec!["forms", &name, "--field", "real", "--json"],
            ];
            for args in arg_sets {
                let first = Command::new(exe).args(&args).output().unwrap();
                let second = Command::new(exe).args(&args).output().unwrap();
                assert_eq!(first.stdout, second.stdout, "{:?}", args);
                assert_eq!(first.stderr, second.stderr, "{:?}", args);
                assert_eq!(first.status.code(), second.status.code(), "{:?}", args);
                invocations += 1;
            }
        }
        format!(
            "{} command invocations re-run byte-identically (stdout, stderr, \
             exit status)",
            invocations
        )
    });
}
