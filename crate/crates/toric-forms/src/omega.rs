//! Stable sets of globally generated divisor classes: the canonical
//! J-stable set ω built from Hilbert bases of fixed-point slices of the
//! nef cone, validation of user-supplied sets, the kernel lattice
//! Q̂ = ker(ℤ^ω → Pic), the product-of-projective-spaces target shape, and
//! the injectivity verdict for the fingerprint classification.

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

use crate::autgroup::ClassAutGroup;
use crate::error::{Error, Result};
use crate::fan::{DivisorTheory, Fan, TDivisor};
use crate::glattice::{is_coflasque, is_invertible, GLattice, InvertibilityVerdict};
use crate::polyhedral::{h0, hilbert_basis, nef_cone};
use crate::zmodule::IntMatrix;

/// A J-stable set of nef classes with their section-space dimensions and
/// the permutation action of every J element.
#[derive(Clone, Debug)]
pub struct OmegaSet {
    /// distinct class coordinate vectors, sorted lexicographically
    pub classes: Vec<Vec<BigInt>>,
    /// h⁰ of each class
    pub h0: Vec<BigInt>,
    /// for each J element index, the induced permutation of `classes`
    pub j_action: Vec<Vec<usize>>,
}

impl OmegaSet {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Orbits of the J action, each a sorted list of class indices,
    /// ordered by smallest member.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let n = self.classes.len();
        let mut seen = vec![false; n];
        let mut orbits = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut orbit = BTreeSet::new();
            orbit.insert(start);
            seen[start] = true;
            let mut stack = vec![start];
            while let Some(i) = stack.pop() {
                for pi in &self.j_action {
                    let t = pi[i];
                    if orbit.insert(t) {
                        seen[t] = true;
                        stack.push(t);
                    }
                }
            }
            orbits.push(orbit.into_iter().collect());
        }
        orbits
    }
}

fn permutation_of_classes(classes: &[Vec<BigInt>], matrix: &IntMatrix) -> Option<Vec<usize>> {
    classes
        .iter()
        .map(|c| {
            let image = matrix.mul_vec(c);
            classes.binary_search(&image).ok()
        })
        .collect()
}

/// Build the canonical J-stable set: for every subgroup G ≤ J, take the
/// Hilbert basis of the nef cone sliced to the sublattice Pic^G, and
/// union the results. Using all subgroups (not just conjugacy
/// representatives) makes the union J-stable by construction.
pub fn canonical_omega(fan: &Fan, div: &DivisorTheory, j: &ClassAutGroup) -> Result<OmegaSet> {
    if !fan.is_smooth() {
        return Err(Error::precondition("canonical omega requires a smooth fan"));
    }
    let nef = nef_cone(fan, div)?;
    let pic = j.class_lattice();
    let mut classes: BTreeSet<Vec<BigInt>> = BTreeSet::new();
    for subgroup in j.group().subgroups() {
        let basis = pic.fixed_sublattice(&subgroup);
        if basis.cols() == 0 {
            continue;
        }
        let sliced = nef.cone.restrict_to_sublattice(&basis);
        for point in hilbert_basis(&sliced)? {
            classes.insert(basis.mul_vec(&point));
        }
    }
    let classes: Vec<Vec<BigInt>> = classes.into_iter().collect();
    let h0s = classes
        .iter()
        .map(|c| h0(fan, &TDivisor::new(div.lift_class(c))))
        .collect::<Result<Vec<BigInt>>>()?;
    let j_action = (0..j.group().order())
        .map(|g| {
            permutation_of_classes(&classes, j.group().element(g)).ok_or_else(|| {
                Error::internal("canonical omega is not stable under a class automorphism")
            })
        })
        .collect::<Result<Vec<Vec<usize>>>>()?;
    Ok(OmegaSet {
        classes,
        h0: h0s,
        j_action,
    })
}

/// Attach h⁰ values and the J action to a user-supplied list of classes.
/// Fails if the set is not J-stable.
pub fn omega_from_classes(
    classes: &[Vec<BigInt>],
    fan: &Fan,
    div: &DivisorTheory,
    j: &ClassAutGroup,
) -> Result<OmegaSet> {
    let set: BTreeSet<Vec<BigInt>> = classes.iter().cloned().collect();
    let classes: Vec<Vec<BigInt>> = set.into_iter().collect();
    let j_action = (0..j.group().order())
        .map(|g| {
            permutation_of_classes(&classes, j.group().element(g))
                .ok_or_else(|| Error::precondition("class set is not stable under J"))
        })
        .collect::<Result<Vec<Vec<usize>>>>()?;
    let h0s = classes
        .iter()
        .map(|c| h0(fan, &TDivisor::new(div.lift_class(c))))
        .collect::<Result<Vec<BigInt>>>()?;
    Ok(OmegaSet {
        classes,
        h0: h0s,
        j_action,
    })
}

/// Validation flags for a class set. The canonical set passes all of
/// them; a user set may fail any. When the set is not J-stable, the
/// action-dependent fields are absent.
#[derive(Clone, Debug)]
pub struct OmegaValidation {
    pub j_stable: bool,
    pub all_globally_generated: bool,
    pub faithful: bool,
    pub generates_class_group: bool,
    pub kernel: Option<GLattice>,
    pub kernel_coflasque: bool,
    /// per subgroup of J: does (ℤ^ω)^H surject onto Pic^H?
    pub fixed_surjective: Vec<(Vec<usize>, bool)>,
}

impl OmegaValidation {
    pub fn all_pass(&self) -> bool {
        self.j_stable
            && self.all_globally_generated
            && self.faithful
            && self.generates_class_group
            && self.kernel_coflasque
            && self.fixed_surjective.iter().all(|(_, ok)| *ok)
    }
}

/// Check a class set against everything the product-of-projective-spaces
/// embedding needs: J-stability, global generation (nef on a smooth
/// complete fan), faithfulness of the J action, full generation of the
/// class group, coflasqueness of the kernel Q̂ = ker(ℤ^ω → Pic), and
/// fixed-point surjectivity for every subgroup.
pub fn validate_omega(
    classes: &[Vec<BigInt>],
    fan: &Fan,
    div: &DivisorTheory,
    j: &ClassAutGroup,
) -> Result<OmegaValidation> {
    let nef = nef_cone(fan, div)?;
    let set: BTreeSet<Vec<BigInt>> = classes.iter().cloned().collect();
    let classes: Vec<Vec<BigInt>> = set.into_iter().collect();
    let k = div.class_rank();

    let all_globally_generated = classes.iter().all(|c| nef.contains_class(c));

    let actions: Option<Vec<Vec<usize>>> = (0..j.group().order())
        .map(|g| permutation_of_classes(&classes, j.group().element(g)))
        .collect();
    let j_stable = actions.is_some();

    let omega_matrix = IntMatrix::from_columns(&classes, k);
    let generates_class_group = {
        let d = omega_matrix.smith().diagonal();
        d.len() == k && d.iter().all(|x| x.is_one())
    };

    let (faithful, kernel, kernel_coflasque, fixed_surjective) = match actions {
        None => (false, None, false, Vec::new()),
        Some(actions) => {
            let ident = j.group().identity_index();
            let faithful = actions
                .iter()
                .enumerate()
                .all(|(g, pi)| g == ident || pi.iter().enumerate().any(|(i, &t)| i != t));
            let perm_mats: Vec<IntMatrix> = actions
                .iter()
                .map(|pi| {
                    let mut m = IntMatrix::zero(classes.len(), classes.len());
                    for (src, &dst) in pi.iter().enumerate() {
                        m.set(dst, src, BigInt::one());
                    }
                    m
                })
                .collect();
            let ambient = GLattice::from_full_action(j.group().clone(), perm_mats)?;
            let inclusion = omega_matrix.kernel();
            let kernel_action: Vec<IntMatrix> = (0..j.group().order())
                .map(|g| {
                    let moved = ambient.action(g).mul(&inclusion);
                    inclusion
                        .solve_matrix(&moved)
                        .ok_or_else(|| Error::internal("kernel of the class map is not J-stable"))
                })
                .collect::<Result<_>>()?;
            let kernel_lattice = GLattice::from_full_action(j.group().clone(), kernel_action)?;
            let kernel_coflasque = is_coflasque(&kernel_lattice).holds;
            let pic = j.class_lattice();
            let fixed_surjective = j
                .group()
                .subgroups()
                .into_iter()
                .map(|h| {
                    let fixed_omega = ambient.fixed_sublattice(&h);
                    let image = omega_matrix.mul(&fixed_omega);
                    let fixed_pic = pic.fixed_sublattice(&h);
                    let ok = image.solve_matrix(&fixed_pic).is_some();
                    (h, ok)
                })
                .collect();
            (
                faithful,
                Some(kernel_lattice),
                kernel_coflasque,
                fixed_surjective,
            )
        }
    };

    Ok(OmegaValidation {
        j_stable,
        all_globally_generated,
        faithful,
        generates_class_group,
        kernel,
        kernel_coflasque,
        fixed_surjective,
    })
}

/// The product of projective spaces the classes map into: one factor of
/// dimension h⁰ − 1 per class.
#[derive(Clone, Debug)]
pub struct TargetShape {
    /// (class, projective dimension)
    pub factors: Vec<(Vec<BigInt>, BigInt)>,
}

/// One matrix-algebra-over-étale-center factor per J-orbit of classes.
#[derive(Clone, Debug)]
pub struct SeparableAlgebraShape {
    /// (matrix degree = h⁰, center degree = orbit length)
    pub factors: Vec<(BigInt, usize)>,
}

/// Read the discrete shape of the equivariant embedding off an ω set:
/// the target product and the separable algebra acting on it.
pub fn target_shape(omega: &OmegaSet) -> Result<(TargetShape, SeparableAlgebraShape)> {
    let factors = omega
        .classes
        .iter()
        .zip(omega.h0.iter())
        .map(|(c, h)| (c.clone(), h - BigInt::one()))
        .collect();
    let mut algebra = Vec::new();
    for orbit in omega.orbits() {
        let h = omega.h0[orbit[0]].clone();
        for &i in &orbit[1..] {
            if omega.h0[i] != h {
                return Err(Error::internal(
                    "classes in one orbit have different section dimensions",
                ));
            }
        }
        algebra.push((h, orbit.len()));
    }
    Ok((
        TargetShape { factors },
        SeparableAlgebraShape { factors: algebra },
    ))
}

/// Verdict on whether the Brauer fingerprint separates all twisted forms.
#[derive(Clone, Debug)]
pub struct InjectivityReport {
    pub verdict: InvertibilityVerdict,
    pub message: String,
}

/// Decide invertibility of the class lattice as a J-lattice. A proven
/// section means the fingerprint map on forms is injective; a disproof
/// means distinct forms can share a fingerprint and some neutral form
/// fails retract rationality.
pub fn injectivity_verdict(j: &ClassAutGroup) -> InjectivityReport {
    let pic = j.class_lattice();
    let verdict = is_invertible(&pic);
    let message = match &verdict {
        InvertibilityVerdict::Proven { .. } => {
            "fingerprint distinguishes all forms: the class lattice is a direct summand \
             of a permutation lattice"
                .to_string()
        }
        InvertibilityVerdict::Disproven { reason } => format!(
            "fingerprint map is not injective and some neutral form is not retract \
             rational: {}",
            reason
        ),
    };
    InjectivityReport { verdict, message }
}

#[derive(Serialize, Deserialize)]
struct OmegaJson {
    classes: Vec<Vec<i64>>,
}

/// Parse an ω set file: {"classes":[[…]]}.
pub fn classes_from_json_str(s: &str) -> Result<Vec<Vec<BigInt>>> {
    let parsed: OmegaJson = serde_json::from_str(s)?;
    Ok(parsed
        .classes
        .into_iter()
        .map(|c| c.into_iter().map(BigInt::from).collect())
        .collect())
}

pub fn classes_to_json_value(classes: &[Vec<BigInt>]) -> Result<serde_json::Value> {
    let rows: Vec<Vec<i64>> = classes
        .iter()
        .map(|c| {
            c.iter()
                .map(|x| {
                    i64::try_from(x).map_err(|_| {
                        Error::internal("class coordinate exceeds the JSON integer range")
                    })
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok(serde_json::json!({ "classes": rows }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::autgroup::{class_aut_group, fan_automorphisms};
    use crate::fan::{del_pezzo6, product, projective_space};
    use num_traits::Zero;

    fn setup(fan: &Fan) -> (DivisorTheory, ClassAutGroup) {
        let div = fan.class_group().unwrap();
        let w = fan_automorphisms(fan).unwrap();
        let j = class_aut_group(&w, &div).unwrap();
        (div, j)
    }

    fn add(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    fn sub(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    #[test]
    fn canonical_omega_of_projective_space() {
        for n in [1usize, 2, 3] {
            let fan = projective_space(n);
            let (div, j) = setup(&fan);
            let omega = canonical_omega(&fan, &div, &j).unwrap();
            assert_eq!(omega.classes, vec![div.ray_class(0)]);
            assert_eq!(omega.h0, vec![BigInt::from(n as i64 + 1)]);
        }
    }

    #[test]
    fn canonical_omega_of_p1xp1() {
        let fan = product(&projective_space(1), &projective_space(1));
        let (div, j) = setup(&fan);
        let omega = canonical_omega(&fan, &div, &j).unwrap();
        let a = div.ray_class(0);
        let b = div.ray_class(2);
        let mut expected = vec![a.clone(), b.clone(), add(&a, &b)];
        expected.sort();
        assert_eq!(omega.classes, expected);
        let mut h0s = omega.h0.clone();
        h0s.sort();
        assert_eq!(h0s, vec![BigInt::from(2), BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn canonical_omega_of_p1xp1_validates_with_rank_one_kernel() {
        let fan = product(&projective_space(1), &projective_space(1));
        let (div, j) = setup(&fan);
        let omega = canonical_omega(&fan, &div, &j).unwrap();
        let v = validate_omega(&omega.classes, &fan, &div, &j).unwrap();
        assert!(v.all_pass());
        let kernel = v.kernel.unwrap();
        assert_eq!(kernel.rank(), 1);
        for g in 0..j.group().order() {
            assert!(kernel.action(g).is_identity());
        }
    }

    fn dp6_named_classes(div: &DivisorTheory) -> (Vec<BigInt>, [Vec<BigInt>; 3]) {
        let e1 = div.ray_class(0);
        let e2 = div.ray_class(1);
        let e3 = div.ray_class(2);
        let h = {
            let mut coeff = vec![BigInt::zero(); 6];
            coeff[3] = BigInt::one();
            coeff[1] = BigInt::one();
            coeff[2] = BigInt::one();
            div.deg(&coeff)
        };
        (h, [e1, e2, e3])
    }

    #[test]
    fn canonical_omega_of_del_pezzo_contains_named_classes() {
        let fan = del_pezzo6();
        let (div, j) = setup(&fan);
        let omega = canonical_omega(&fan, &div, &j).unwrap();
        let (h, [e1, e2, e3]) = dp6_named_classes(&div);
        let anticanonical = sub(&sub(&sub(&add(&h, &add(&h, &h)), &e1), &e2), &e3);
        let expected_members = vec![
            h.clone(),
            sub(&add(&h, &h), &add(&e1, &add(&e2, &e3))),
            sub(&h, &e1),
            sub(&h, &e2),
            sub(&h, &e3),
            anticanonical,
        ];
        for m in expected_members {
            assert!(
                omega.classes.contains(&m),
                "canonical omega misses a named class"
            );
        }
        let v = validate_omega(&omega.classes, &fan, &div, &j).unwrap();
        assert!(v.all_pass());
    }

    #[test]
    fn canonical_omega_of_del_pezzo_golden() {
        let fan = del_pezzo6();
        let (div, j) = setup(&fan);
        let omega = canonical_omega(&fan, &div, &j).unwrap();
        let expected: Vec<Vec<BigInt>> = [
            vec![1, 0, 1, 0],
            vec![1, 1, 0, 0],
            vec![1, 1, 1, -1],
            vec![1, 1, 1, 0],
            vec![2, 1, 1, -1],
            vec![2, 1, 1, 0],
            vec![2, 1, 2, -1],
            vec![2, 2, 1, -1],
            vec![3, 2, 2, -1],
        ]
        .into_iter()
        .map(|v| v.into_iter().map(BigInt::from).collect())
        .collect();
        assert_eq!(omega.classes, expected);
        let h0s: Vec<BigInt> = [2, 2, 2, 3, 3, 4, 4, 4, 7]
            .into_iter()
            .map(BigInt::from)
            .collect();
        assert_eq!(omega.h0, h0s);
    }

    #[test]
    fn five_class_set_validates_on_del_pezzo() {
        let fan = del_pezzo6();
        let (div, j) = setup(&fan);
        let (h, [e1, e2, e3]) = dp6_named_classes(&div);
        let classes = vec![
            h.clone(),
            sub(&add(&h, &h), &add(&e1, &add(&e2, &e3))),
            sub(&h, &e1),
            sub(&h, &e2),
            sub(&h, &e3),
        ];
        let v = validate_omega(&classes, &fan, &div, &j).unwrap();
        assert!(v.all_pass());
        let omega = omega_from_classes(&classes, &fan, &div, &j).unwrap();
        let (target, algebra) = target_shape(&omega).unwrap();
        let mut dims: Vec<BigInt> = target.factors.iter().map(|(_, d)| d.clone()).collect();
        dims.sort();
        assert_eq!(
            dims,
            vec![1, 1, 1, 2, 2]
                .into_iter()
                .map(BigInt::from)
                .collect::<Vec<_>>()
        );
        let mut b: Vec<(BigInt, usize)> = algebra.factors.clone();
        b.sort();
        assert_eq!(b, vec![(BigInt::from(2), 3), (BigInt::from(3), 2)]);
    }

    #[test]
    fn unstable_singleton_fails_validation() {
        let fan = product(&projective_space(1), &projective_space(1));
        let (div, j) = setup(&fan);
        let classes = vec![div.ray_class(0)];
        let v = validate_omega(&classes, &fan, &div, &j).unwrap();
        assert!(!v.j_stable);
        assert!(!v.all_pass());
    }

    #[test]
    fn non_nef_class_fails_generation_check() {
        let fan = product(&projective_space(1), &projective_space(1));
        let (div, j) = setup(&fan);
        let a = div.ray_class(0);
        let b = div.ray_class(2);
        let classes = vec![sub(&a, &b), sub(&b, &a)];
        let v = validate_omega(&classes, &fan, &div, &j).unwrap();
        assert!(v.j_stable);
        assert!(!v.all_globally_generated);
        assert!(!v.all_pass());
    }

    #[test]
    fn target_shape_of_p1xp1() {
        let fan = product(&projective_space(1), &projective_space(1));
        let (div, j) = setup(&fan);
        let omega = canonical_omega(&fan, &div, &j).unwrap();
        let (target, algebra) = target_shape(&omega).unwrap();
        let mut dims: Vec<BigInt> = target.factors.iter().map(|(_, d)| d.clone()).collect();
        dims.sort();
        assert_eq!(dims, vec![BigInt::one(), BigInt::one(), BigInt::from(3)]);
        let mut b = algebra.factors.clone();
        b.sort();
        assert_eq!(b, vec![(BigInt::from(2), 2), (BigInt::from(4), 1)]);
    }

    #[test]
    fn target_shape_of_projective_space() {
        let fan = projective_space(2);
        let (div, j) = setup(&fan);
        let omega = canonical_omega(&fan, &div, &j).unwrap();
        let (target, algebra) = target_shape(&omega).unwrap();
        assert_eq!(target.factors.len(), 1);
        assert_eq!(target.factors[0].1, BigInt::from(2));
        assert_eq!(algebra.factors, vec![(BigInt::from(3), 1)]);
    }

    #[test]
    fn injectivity_proven_for_bundled_surfaces() {
        for fan in [
            projective_space(2),
            product(&projective_space(1), &projective_space(1)),
            del_pezzo6(),
            crate::fan::hirzebruch(2),
        ] {
            let (_, j) = setup(&fan);
            let report = injectivity_verdict(&j);
            assert!(report.verdict.is_proven());
            assert!(report.message.contains("distinguishes"));
        }
    }

    #[test]
    fn omega_json_round_trip() {
        let classes = vec![
            vec![BigInt::from(1), BigInt::from(0)],
            vec![BigInt::from(0), BigInt::from(1)],
        ];
        let v = classes_to_json_value(&classes).unwrap();
        let parsed = classes_from_json_str(&v.to_string()).unwrap();
        assert_eq!(parsed, classes);
    }
}
