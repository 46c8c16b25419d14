//! Fans of rational polyhedral cones: ingestion, validation, the smooth /
//! complete / projective / simplicial predicates, divisor class groups with
//! the Cox grading, and irrelevant ideal generators.
//!
//! A fan is stored combinatorially: the ambient lattice rank, the list of
//! primitive ray vectors, and the maximal cones as ray index sets. All
//! geometric questions are answered exactly through the machinery in
//! [`crate::polyhedral`] and [`crate::zmodule`].

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::polyhedral::{dot, exists_strictly_positive_combination, RationalCone};
use crate::zmodule::{cokernel, Cokernel, FGAbelianGroup, IntMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    rank: usize,
    rays: Vec<Vec<BigInt>>,
    max_cones: Vec<Vec<usize>>,
}

/// Torus-invariant divisor: one integer coefficient per ray.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TDivisor {
    coefficients: Vec<BigInt>,
}

impl TDivisor {
    pub fn new(coefficients: Vec<BigInt>) -> Self {
        TDivisor { coefficients }
    }

    pub fn from_i64(coefficients: &[i64]) -> Self {
        TDivisor {
            coefficients: coefficients.iter().map(|&c| BigInt::from(c)).collect(),
        }
    }

    /// The divisor of a single ray.
    pub fn ray_divisor(fan: &Fan, rho: usize) -> Self {
        let mut c = vec![BigInt::zero(); fan.rays().len()];
        c[rho] = BigInt::one();
        TDivisor { coefficients: c }
    }

    /// The anticanonical divisor: coefficient 1 on every ray.
    pub fn anticanonical(fan: &Fan) -> Self {
        TDivisor {
            coefficients: vec![BigInt::one(); fan.rays().len()],
        }
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }
}

/// The exact sequence M → ℤ^Σ(1) → Cl: the ray matrix, the class group in
/// invariant-factor form, and the grading projection.
#[derive(Clone, Debug)]
pub struct DivisorTheory {
    ray_matrix: IntMatrix,
    coker: Cokernel,
}

impl DivisorTheory {
    pub fn cl_group(&self) -> &FGAbelianGroup {
        &self.coker.group
    }

    /// Matrix of rays as rows: the map M → ℤ^Σ(1), m ↦ (⟨m, u_ρ⟩)_ρ.
    pub fn ray_matrix(&self) -> &IntMatrix {
        &self.ray_matrix
    }

    /// Degree (class) of a divisor given by coefficients, in canonical
    /// class group coordinates.
    pub fn deg(&self, coefficients: &[BigInt]) -> Vec<BigInt> {
        self.coker.project(coefficients)
    }

    pub fn deg_divisor(&self, d: &TDivisor) -> Vec<BigInt> {
        self.deg(d.coefficients())
    }

    pub fn ray_class(&self, rho: usize) -> Vec<BigInt> {
        let mut e = vec![BigInt::zero(); self.ray_matrix.rows()];
        e[rho] = BigInt::one();
        self.deg(&e)
    }

    /// A divisor representing a class (a right inverse of deg pointwise).
    pub fn lift_class(&self, class: &[BigInt]) -> Vec<BigInt> {
        self.coker.lift(class)
    }

    pub fn class_rank(&self) -> usize {
        self.cl_group().invariant_factors.len()
    }

    /// The grading as an integer matrix (class coordinates of each ray
    /// divisor as columns). A genuine linear map when Cl is free; with
    /// torsion it is a lift of the projection.
    pub fn degree_matrix(&self) -> IntMatrix {
        let cols: Vec<Vec<BigInt>> = (0..self.ray_matrix.rows())
            .map(|rho| self.ray_class(rho))
            .collect();
        IntMatrix::from_columns(&cols, self.class_rank())
    }
}

#[derive(Serialize, Deserialize)]
struct FanJson {
    rank: usize,
    rays: Vec<Vec<i64>>,
    max_cones: Vec<Vec<usize>>,
}

/// Outcome of structural validation; an empty violation list means valid.
#[derive(Clone, Debug, Default, Serialize)]
pub struct FanValidation {
    pub violations: Vec<String>,
}

impl FanValidation {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl Fan {
    /// Build a fan without validation; run [`Fan::validate`] before using
    /// any geometric operation. Cone index lists are sorted on ingestion.
    pub fn from_parts(rank: usize, rays: Vec<Vec<BigInt>>, max_cones: Vec<Vec<usize>>) -> Self {
        let max_cones = max_cones
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c
            })
            .collect();
        Fan {
            rank,
            rays,
            max_cones,
        }
    }

    pub fn from_i64(rank: usize, rays: &[Vec<i64>], max_cones: &[Vec<usize>]) -> Self {
        let rays = rays
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        Self::from_parts(rank, rays, max_cones.to_vec())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rays(&self) -> &[Vec<BigInt>] {
        &self.rays
    }

    pub fn ray(&self, rho: usize) -> &[BigInt] {
        &self.rays[rho]
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    pub fn from_json_str(s: &str) -> Result<Fan> {
        let j: FanJson = serde_json::from_str(s)?;
        let rays = j
            .rays
            .into_iter()
            .map(|r| r.into_iter().map(BigInt::from).collect())
            .collect();
        Ok(Fan::from_parts(j.rank, rays, j.max_cones))
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let j = FanJson {
            rank: self.rank,
            rays: self
                .rays
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|x| i64::try_from(x).expect("ray entry exceeds i64"))
                        .collect()
                })
                .collect(),
            max_cones: self.max_cones.clone(),
        };
        serde_json::to_value(j).expect("fan serialization cannot fail")
    }

    /// Check every structural invariant, reporting each violation with the
    /// indices involved.
    pub fn validate(&self) -> FanValidation {
        let mut v = FanValidation::default();
        if self.rank == 0 {
            v.violations.push("rank must be positive".to_string());
            return v;
        }
        for (i, r) in self.rays.iter().enumerate() {
            if r.len() != self.rank {
                v.violations.push(format!(
                    "ray {} has length {} but rank is {}",
                    i,
                    r.len(),
                    self.rank
                ));
            }
        }
        if !v.violations.is_empty() {
            return v;
        }
        for (i, r) in self.rays.iter().enumerate() {
            if r.iter().all(|x| x.is_zero()) {
                v.violations.push(format!("ray {} is zero", i));
                continue;
            }
            if crate::polyhedral::primitive(r) != *r {
                v.violations.push(format!("ray {} not primitive", i));
            }
        }
        for i in 0..self.rays.len() {
            for j in (i + 1)..self.rays.len() {
                if self.rays[i] == self.rays[j] {
                    v.violations.push(format!("rays {} and {} are equal", i, j));
                }
            }
        }
        for (ci, cone) in self.max_cones.iter().enumerate() {
            for &r in cone {
                if r >= self.rays.len() {
                    v.violations
                        .push(format!("max cone {} references missing ray {}", ci, r));
                }
            }
            let set: BTreeSet<usize> = cone.iter().cloned().collect();
            if set.len() != cone.len() {
                v.violations
                    .push(format!("max cone {} repeats a ray index", ci));
            }
        }
        if !v.violations.is_empty() {
            return v;
        }
        for (ci, cone) in self.max_cones.iter().enumerate() {
            for (cj, other) in self.max_cones.iter().enumerate().skip(ci + 1) {
                let a: BTreeSet<usize> = cone.iter().cloned().collect();
                let b: BTreeSet<usize> = other.iter().cloned().collect();
                if a.is_subset(&b) {
                    v.violations
                        .push(format!("max cone {} contained in max cone {}", ci, cj));
                } else if b.is_subset(&a) {
                    v.violations
                        .push(format!("max cone {} contained in max cone {}", cj, ci));
                }
            }
        }
        let cones: Vec<RationalCone> = self
            .max_cones
            .iter()
            .map(|c| self.cone_geometry(c))
            .collect();
        for (ci, cone) in cones.iter().enumerate() {
            if !cone.is_strongly_convex() {
                v.violations
                    .push(format!("max cone {} not strongly convex", ci));
            }
        }
        for ci in 0..cones.len() {
            for cj in (ci + 1)..cones.len() {
                let common = cones[ci].intersect(&cones[cj]);
                if !common.is_face_of(&cones[ci]) || !common.is_face_of(&cones[cj]) {
                    v.violations.push(format!(
                        "intersection of max cones {} and {} not a face",
                        ci, cj
                    ));
                }
            }
        }
        let mut covered = vec![false; self.rays.len()];
        for cone in &self.max_cones {
            for &r in cone {
                covered[r] = true;
            }
        }
        for (i, c) in covered.iter().enumerate() {
            if !c {
                v.violations
                    .push(format!("ray {} not contained in any max cone", i));
            }
        }
        v
    }

    fn cone_geometry(&self, cone: &[usize]) -> RationalCone {
        let gens: Vec<Vec<BigInt>> = cone.iter().map(|&r| self.rays[r].clone()).collect();
        RationalCone::from_generators(self.rank, &gens)
    }

    fn cone_matrix(&self, cone: &[usize]) -> IntMatrix {
        let cols: Vec<Vec<BigInt>> = cone.iter().map(|&r| self.rays[r].clone()).collect();
        IntMatrix::from_columns(&cols, self.rank)
    }

    pub fn is_simplicial(&self) -> bool {
        self.max_cones
            .iter()
            .all(|c| self.cone_matrix(c).rank() == c.len())
    }

    /// Every cone's rays extend to a ℤ-basis: all Smith invariant factors
    /// of every cone's ray matrix are 1.
    pub fn is_smooth(&self) -> bool {
        self.max_cones.iter().all(|c| {
            let m = self.cone_matrix(c);
            let s = m.smith();
            s.rank() == c.len() && s.diagonal().iter().all(|d| d.is_one())
        })
    }

    /// Facets of each maximal cone as sorted ray index sets.
    fn walls(&self) -> Vec<Vec<Vec<usize>>> {
        self.max_cones
            .iter()
            .map(|cone| {
                let geom = self.cone_geometry(cone);
                let mut facets: Vec<Vec<usize>> = geom
                    .inequalities()
                    .iter()
                    .map(|w| {
                        cone.iter()
                            .cloned()
                            .filter(|&r| dot(w, &self.rays[r]).is_zero())
                            .collect()
                    })
                    .collect();
                facets.sort();
                facets.dedup();
                facets
            })
            .collect()
    }

    /// Combinatorial completeness: all maximal cones full dimensional,
    /// every facet shared by exactly two of them, and the wall adjacency
    /// graph connected.
    pub fn is_complete(&self) -> bool {
        if self.max_cones.is_empty() {
            return false;
        }
        for cone in &self.max_cones {
            if self.cone_matrix(cone).rank() != self.rank {
                return false;
            }
        }
        let walls = self.walls();
        let mut owners: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for (ci, facets) in walls.iter().enumerate() {
            for f in facets {
                owners.entry(f.clone()).or_default().push(ci);
            }
        }
        if owners.values().any(|v| v.len() != 2) {
            return false;
        }
        let mut seen = vec![false; self.max_cones.len()];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(c) = stack.pop() {
            for f in &walls[c] {
                for &other in &owners[f] {
                    if !seen[other] {
                        seen[other] = true;
                        stack.push(other);
                    }
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    /// Projectivity: a strictly convex rational support function exists.
    /// One linear piece per maximal cone, agreement on shared rays, and a
    /// uniform strict gap maximized exactly over ℚ.
    pub fn is_projective(&self) -> bool {
        if !self.is_complete() {
            return false;
        }
        let n = self.rank;
        let k = self.max_cones.len();
        let nvars = k * n;
        let block = |ci: usize, u: &[BigInt], sign: i64, row: &mut Vec<BigInt>| {
            for (t, x) in u.iter().enumerate() {
                row[ci * n + t] += x * BigInt::from(sign);
            }
        };

        let mut eq_rows: Vec<Vec<BigInt>> = Vec::new();
        for ci in 0..k {
            for cj in (ci + 1)..k {
                let a: BTreeSet<usize> = self.max_cones[ci].iter().cloned().collect();
                for &r in self.max_cones[cj].iter().filter(|r| a.contains(r)) {
                    let mut row = vec![BigInt::zero(); nvars];
                    block(ci, &self.rays[r], 1, &mut row);
                    block(cj, &self.rays[r], -1, &mut row);
                    eq_rows.push(row);
                }
            }
        }
        let eq = if eq_rows.is_empty() {
            IntMatrix::zero(0, nvars)
        } else {
            IntMatrix::from_bigint_rows(eq_rows)
        };
        let kern = eq.kernel();

        let mut strict_rows: Vec<Vec<BigInt>> = Vec::new();
        for (ci, sigma) in self.max_cones.iter().enumerate() {
            for rho in 0..self.rays.len() {
                if sigma.contains(&rho) {
                    continue;
                }
                let owner = self
                    .max_cones
                    .iter()
                    .position(|c| c.contains(&rho))
                    .expect("complete fan covers every ray");
                let mut row = vec![BigInt::zero(); nvars];
                block(ci, &self.rays[rho], 1, &mut row);
                block(owner, &self.rays[rho], -1, &mut row);
                strict_rows.push(row);
            }
        }
        let strict = if strict_rows.is_empty() {
            IntMatrix::zero(0, nvars)
        } else {
            IntMatrix::from_bigint_rows(strict_rows)
        };
        exists_strictly_positive_combination(&strict.mul(&kern))
    }

    /// Divisor class group and grading from the exact sequence
    /// M → ℤ^Σ(1) → Cl. Requires the rays to span the ambient space.
    pub fn class_group(&self) -> Result<DivisorTheory> {
        let rows: Vec<Vec<BigInt>> = self.rays.clone();
        let ray_matrix = if rows.is_empty() {
            IntMatrix::zero(0, self.rank)
        } else {
            IntMatrix::from_bigint_rows(rows)
        };
        if ray_matrix.rank() != self.rank {
            return Err(Error::precondition("rays do not span the ambient lattice"));
        }
        let coker = cokernel(&ray_matrix);
        // exactness: the composite M → ℤ^Σ(1) → Cl must vanish
        for j in 0..self.rank {
            let col = ray_matrix.column(j);
            let cls = coker.project(&col);
            if !coker.group.is_zero_element(&cls) {
                return Err(Error::internal("degree of a principal divisor is nonzero"));
            }
        }
        Ok(DivisorTheory { ray_matrix, coker })
    }

    /// Generators of the irrelevant ideal: for each maximal cone, the
    /// complementary ray set; deduplicated and sorted.
    pub fn irrelevant_generators(&self) -> Vec<Vec<usize>> {
        let mut out: BTreeSet<Vec<usize>> = BTreeSet::new();
        for cone in &self.max_cones {
            let inside: BTreeSet<usize> = cone.iter().cloned().collect();
            out.insert(
                (0..self.rays.len())
                    .filter(|r| !inside.contains(r))
                    .collect(),
            );
        }
        out.into_iter().collect()
    }
}

/// The fan of projective n-space: rays e_1..e_n and −(e_1+…+e_n), maximal
/// cones all n-subsets.
pub fn projective_space(n: usize) -> Fan {
    assert!(n >= 1);
    let mut rays: Vec<Vec<i64>> = Vec::new();
    for i in 0..n {
        let mut e = vec![0i64; n];
        e[i] = 1;
        rays.push(e);
    }
    rays.push(vec![-1; n]);
    let cones: Vec<Vec<usize>> = (0..=n)
        .map(|skip| (0..=n).filter(|&r| r != skip).collect())
        .collect();
    Fan::from_i64(n, &rays, &cones)
}

/// Product fan: rays of the factors embedded in the direct sum, maximal
/// cones all pairs.
pub fn product(a: &Fan, b: &Fan) -> Fan {
    let rank = a.rank() + b.rank();
    let mut rays: Vec<Vec<BigInt>> = Vec::new();
    for r in a.rays() {
        let mut v = r.clone();
        v.extend(vec![BigInt::zero(); b.rank()]);
        rays.push(v);
    }
    for r in b.rays() {
        let mut v = vec![BigInt::zero(); a.rank()];
        v.extend(r.iter().cloned());
        rays.push(v);
    }
    let offset = a.rays().len();
    let mut cones = Vec::new();
    for ca in a.max_cones() {
        for cb in b.max_cones() {
            let mut c = ca.clone();
            c.extend(cb.iter().map(|&r| r + offset));
            cones.push(c);
        }
    }
    Fan::from_parts(rank, rays, cones)
}

/// Hirzebruch surface fan: rays (1,0), (0,1), (−1,a), (0,−1).
pub fn hirzebruch(a: i64) -> Fan {
    assert!(a >= 0);
    Fan::from_i64(
        2,
        &[vec![1, 0], vec![0, 1], vec![-1, a], vec![0, -1]],
        &[vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]],
    )
}

/// The hexagonal fan of the degree six del Pezzo surface: six rays at the
/// sixth roots of unity in the hexagonal lattice, six adjacent 2-cones.
pub fn del_pezzo6() -> Fan {
    Fan::from_i64(
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
    )
}

/// Complete rank 3 fan over the cube with face diagonals chosen in a
/// rotationally twisted pattern; complete but carries no strictly convex
/// support function, so it is not projective.
pub fn cube_twist() -> Fan {
    // vertices of the cube, indexed by sign pattern
    let rays: Vec<Vec<i64>> = vec![
        vec![1, 1, 1],    // 0
        vec![1, 1, -1],   // 1
        vec![1, -1, 1],   // 2
        vec![1, -1, -1],  // 3
        vec![-1, 1, 1],   // 4
        vec![-1, 1, -1],  // 5
        vec![-1, -1, 1],  // 6
        vec![-1, -1, -1], // 7
    ];
    // each face split along one diagonal; the diagonal choices below admit
    // no global convex lifting (checked by the projectivity test)
    let cones: Vec<Vec<usize>> = vec![
        vec![0, 1, 3],
        vec![0, 2, 3], // x = 1, diagonal 0-3
        vec![4, 5, 6],
        vec![5, 6, 7], // x = -1, diagonal 5-6
        vec![0, 1, 4],
        vec![1, 4, 5], // y = 1, diagonal 1-4
        vec![2, 3, 7],
        vec![2, 6, 7], // y = -1, diagonal 2-7
        vec![0, 4, 6],
        vec![0, 2, 6], // z = 1, diagonal 0-6
        vec![1, 3, 5],
        vec![3, 5, 7], // z = -1, diagonal 3-5
    ];
    Fan::from_i64(3, &rays, &cones)
}

/// Named fans shipped with the crate, in deterministic order.
pub fn bundled_fans() -> Vec<(String, Fan)> {
    let p1 = projective_space(1);
    vec![
        ("p1".to_string(), p1.clone()),
        ("p2".to_string(), projective_space(2)),
        ("p3".to_string(), projective_space(3)),
        ("p1xp1".to_string(), product(&p1, &p1)),
        ("p1xp1xp1".to_string(), product(&product(&p1, &p1), &p1)),
        ("p1xp3".to_string(), product(&p1, &projective_space(3))),
        ("hirzebruch_2".to_string(), hirzebruch(2)),
        ("dp6".to_string(), del_pezzo6()),
        ("cube_twist".to_string(), cube_twist()),
    ]
}

/// Look up a bundled fan by name; `hirzebruch_<a>` is accepted for any
/// non-negative a.
pub fn bundled_fan(name: &str) -> Option<Fan> {
    if let Some(rest) = name.strip_prefix("hirzebruch_") {
        if let Ok(a) = rest.parse::<i64>() {
            if a >= 0 {
                return Some(hirzebruch(a));
            }
        }
        return None;
    }
    bundled_fans()
        .into_iter()
        .find(|(n, _)| n == name)
        .map(|(_, f)| f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p1_is_valid() {
        let f = projective_space(1);
        assert!(f.validate().is_valid());
    }

    #[test]
    fn non_primitive_ray_rejected() {
        let f = Fan::from_i64(2, &[vec![2, 0], vec![0, 1], vec![-1, -1]], &[vec![0, 1]]);
        let v = f.validate();
        assert!(v.violations.iter().any(|m| m.contains("not primitive")));
    }

    #[test]
    fn overlapping_cones_rejected() {
        let f = Fan::from_i64(
            2,
            &[vec![1, 0], vec![0, 1], vec![1, 1], vec![1, -1]],
            &[vec![0, 1], vec![2, 3]],
        );
        let v = f.validate();
        assert!(v.violations.iter().any(|m| m.contains("not a face")));
    }

    #[test]
    fn all_bundled_fans_valid() {
        for (name, f) in bundled_fans() {
            assert!(f.validate().is_valid(), "{} failed validation", name);
        }
    }

    #[test]
    fn smoothness() {
        assert!(projective_space(2).is_smooth());
        assert!(del_pezzo6().is_smooth());
        assert!(hirzebruch(3).is_smooth());
        let singular = Fan::from_i64(2, &[vec![1, 0], vec![1, 2]], &[vec![0, 1]]);
        assert!(singular.validate().is_valid());
        assert!(!singular.is_smooth());
        assert!(!cube_twist().is_smooth());
    }

    #[test]
    fn completeness() {
        assert!(product(&projective_space(1), &projective_space(1)).is_complete());
        assert!(del_pezzo6().is_complete());
        assert!(cube_twist().is_complete());
        let quadrant = Fan::from_i64(2, &[vec![1, 0], vec![0, 1]], &[vec![0, 1]]);
        assert!(!quadrant.is_complete());
    }

    #[test]
    fn projectivity() {
        assert!(projective_space(1).is_projective());
        assert!(projective_space(2).is_projective());
        assert!(projective_space(3).is_projective());
        assert!(hirzebruch(2).is_projective());
        assert!(del_pezzo6().is_projective());
        let quadrant = Fan::from_i64(2, &[vec![1, 0], vec![0, 1]], &[vec![0, 1]]);
        assert!(!quadrant.is_projective());
    }

    #[test]
    fn cube_twist_complete_but_not_projective() {
        let f = cube_twist();
        assert!(f.validate().is_valid());
        assert!(f.is_complete());
        assert!(!f.is_projective());
    }

    #[test]
    fn class_group_projective_spaces() {
        for n in 1..=3 {
            let div = projective_space(n).class_group().unwrap();
            assert_eq!(div.cl_group().to_string(), "Z");
            for rho in 0..=n {
                let c = div.ray_class(rho);
                assert_eq!(c.len(), 1);
                assert_eq!(c[0].magnitude().to_string(), "1");
            }
        }
    }

    #[test]
    fn class_group_dp6() {
        let div = del_pezzo6().class_group().unwrap();
        assert_eq!(div.cl_group().to_string(), "Z x Z x Z x Z");
        let classes: Vec<_> = (0..6).map(|r| div.ray_class(r)).collect();
        for i in 0..6 {
            for j in (i + 1)..6 {
                assert_ne!(
                    classes[i], classes[j],
                    "ray classes {} and {} collide",
                    i, j
                );
            }
        }
    }

    #[test]
    fn class_group_p1xp1() {
        let f = product(&projective_space(1), &projective_space(1));
        let div = f.class_group().unwrap();
        assert_eq!(div.cl_group().to_string(), "Z x Z");
        assert_eq!(div.ray_class(0), div.ray_class(1));
        assert_eq!(div.ray_class(2), div.ray_class(3));
        assert_ne!(div.ray_class(0), div.ray_class(2));
    }

    #[test]
    fn class_group_needs_spanning_rays() {
        let f = Fan::from_i64(2, &[vec![1, 0], vec![-1, 0]], &[vec![0], vec![1]]);
        assert!(f.class_group().is_err());
    }

    #[test]
    fn exactness_rank_count() {
        for (name, f) in bundled_fans() {
            if !f.is_complete() {
                continue;
            }
            let div = f.class_group().unwrap();
            assert_eq!(
                f.rank() + div.cl_group().free_rank(),
                f.rays().len(),
                "rank count failed for {}",
                name
            );
            if f.is_smooth() {
                assert!(
                    div.cl_group().torsion_factors().is_empty(),
                    "smooth complete fan {} must have free class group",
                    name
                );
            }
        }
    }

    #[test]
    fn irrelevant_generators_shapes() {
        let p2 = projective_space(2);
        assert_eq!(p2.irrelevant_generators(), vec![vec![0], vec![1], vec![2]]);
        let p1 = projective_space(1);
        assert_eq!(p1.irrelevant_generators(), vec![vec![0], vec![1]]);
        let p1xp1 = product(&p1, &p1);
        let gens = p1xp1.irrelevant_generators();
        assert_eq!(gens.len(), 4);
        assert!(gens.iter().all(|g| g.len() == 2));
    }

    #[test]
    fn fan_json_round_trip() {
        let f = del_pezzo6();
        let s = serde_json::to_string(&f.to_json_value()).unwrap();
        let back = Fan::from_json_str(&s).unwrap();
        assert_eq!(f, back);
    }
}
