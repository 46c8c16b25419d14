//! Symmetries of a fan: the finite group W of lattice automorphisms taking
//! cones to cones, the weight decomposition of rays by divisor class, the
//! shape of the Cox endomorphism algebra, the induced group J of class
//! group automorphisms with its kernel W°, and a canonical splitting
//! J → W that maps rays order-preservingly within each weight class.

use num_bigint::BigInt;
use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::fan::{DivisorTheory, Fan};
use crate::glattice::{FiniteMatrixGroup, GLattice};
use crate::zmodule::IntMatrix;

/// A single fan symmetry: a unimodular matrix on the cocharacter lattice
/// together with the ray permutation it induces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanSymmetry {
    pub matrix: IntMatrix,
    pub ray_permutation: Vec<usize>,
}

/// The group of all fan symmetries, indexed compatibly with its faithful
/// permutation representation on rays.
#[derive(Clone, Debug)]
pub struct ToricWeylGroup {
    symmetries: Vec<FanSymmetry>,
    perm_group: FiniteMatrixGroup,
}

fn permutation_matrix(pi: &[usize]) -> IntMatrix {
    let n = pi.len();
    let mut m = IntMatrix::zero(n, n);
    for (src, &dst) in pi.iter().enumerate() {
        m.set(dst, src, BigInt::from(1));
    }
    m
}

impl ToricWeylGroup {
    pub fn order(&self) -> usize {
        self.symmetries.len()
    }

    pub fn symmetry(&self, i: usize) -> &FanSymmetry {
        &self.symmetries[i]
    }

    pub fn symmetries(&self) -> &[FanSymmetry] {
        &self.symmetries
    }

    /// The abstract group structure, carried by the permutation matrices
    /// on ray indices (faithful because the rays span).
    pub fn group(&self) -> &FiniteMatrixGroup {
        &self.perm_group
    }

    /// The ray coordinate lattice ℤ^Σ(1) with W permuting coordinates.
    pub fn ray_lattice(&self) -> GLattice {
        GLattice::tautological(self.perm_group.clone())
    }

    /// The cocharacter lattice N with W acting by the symmetry matrices.
    pub fn cocharacter_lattice(&self) -> GLattice {
        let action: Vec<IntMatrix> = self.symmetries.iter().map(|s| s.matrix.clone()).collect();
        GLattice::from_full_action(self.perm_group.clone(), action)
            .expect("fan symmetries act compatibly with composition")
    }
}

/// Rays grouped by their divisor class.
#[derive(Clone, Debug)]
pub struct WeightDecomposition {
    /// distinct ray classes, sorted lexicographically
    pub classes: Vec<Vec<BigInt>>,
    /// number of rays in each class
    pub multiplicities: Vec<usize>,
    /// ray index → class index
    pub assignment: Vec<usize>,
}

impl WeightDecomposition {
    /// Rays of one class, ascending by ray index.
    pub fn rays_of_class(&self, class_idx: usize) -> Vec<usize> {
        self.assignment
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == class_idx)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Group rays by equal image in the class group.
pub fn weight_decomposition(div: &DivisorTheory) -> WeightDecomposition {
    let n = div.ray_matrix().rows();
    let ray_classes: Vec<Vec<BigInt>> = (0..n).map(|r| div.ray_class(r)).collect();
    let classes: Vec<Vec<BigInt>> = ray_classes
        .iter()
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let index: BTreeMap<&Vec<BigInt>, usize> =
        classes.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let assignment: Vec<usize> = ray_classes.iter().map(|c| index[c]).collect();
    let mut multiplicities = vec![0usize; classes.len()];
    for &a in &assignment {
        multiplicities[a] += 1;
    }
    WeightDecomposition {
        classes,
        multiplicities,
        assignment,
    }
}

/// The split Cox endomorphism algebra: one matrix factor of size n_λ per
/// weight class λ.
#[derive(Clone, Debug)]
pub struct CoxAlgebraShape {
    pub factors: Vec<(Vec<BigInt>, usize)>,
}

impl CoxAlgebraShape {
    pub fn sizes(&self) -> Vec<usize> {
        self.factors.iter().map(|(_, n)| *n).collect()
    }

    /// Order of the Weyl group of the unit group of the algebra: ∏ n_λ!.
    pub fn weyl_order(&self) -> u128 {
        self.factors
            .iter()
            .map(|(_, n)| (1..=*n as u128).product::<u128>())
            .product()
    }
}

pub fn cox_algebra_shape(wd: &WeightDecomposition) -> CoxAlgebraShape {
    CoxAlgebraShape {
        factors: wd
            .classes
            .iter()
            .cloned()
            .zip(wd.multiplicities.iter().cloned())
            .collect(),
    }
}

/// Enumerate all fan symmetries: a symmetry is determined by where it
/// sends a spanning independent subset of rays, so candidate images are
/// enumerated (pruned by cone-incidence counts), the matrix is solved for
/// over ℤ, and the full permutation plus cone preservation is verified.
pub fn fan_automorphisms(fan: &Fan) -> Result<ToricWeylGroup> {
    let n = fan.rank();
    let rays = fan.rays();
    let ray_index: BTreeMap<&[BigInt], usize> = rays
        .iter()
        .enumerate()
        .map(|(i, r)| (r.as_slice(), i))
        .collect();

    // spanning independent subset, first in index order
    let mut basis: Vec<usize> = Vec::new();
    for i in 0..rays.len() {
        let mut test = basis.clone();
        test.push(i);
        let m = IntMatrix::from_bigint_rows(test.iter().map(|&r| rays[r].clone()).collect());
        if m.rank() == test.len() {
            basis = test;
        }
        if basis.len() == n {
            break;
        }
    }
    if basis.len() != n {
        return Err(Error::precondition(
            "rays do not span the ambient lattice; fan symmetries are not determined by ray permutations",
        ));
    }

    let incidence: Vec<usize> = (0..rays.len())
        .map(|r| fan.max_cones().iter().filter(|c| c.contains(&r)).count())
        .collect();
    let cone_set: BTreeSet<Vec<usize>> = fan.max_cones().iter().cloned().collect();

    // U has the basis rays as columns; images are solved from Uᵀ·gᵀ = Vᵀ.
    let u_t = IntMatrix::from_bigint_rows(basis.iter().map(|&r| rays[r].clone()).collect());

    let mut symmetries: Vec<FanSymmetry> = Vec::new();
    let mut images = vec![0usize; n];
    let mut used = vec![false; rays.len()];
    enumerate_images(
        fan,
        &ray_index,
        &incidence,
        &cone_set,
        &u_t,
        &basis,
        &mut images,
        &mut used,
        0,
        &mut symmetries,
    );

    symmetries.sort_by(|a, b| a.ray_permutation.cmp(&b.ray_permutation));
    let perm_mats: Vec<IntMatrix> = symmetries
        .iter()
        .map(|s| permutation_matrix(&s.ray_permutation))
        .collect();
    let perm_group = FiniteMatrixGroup::from_generators_bounded(
        rays.len(),
        &perm_mats,
        symmetries.len().max(crate::glattice::DEFAULT_GROUP_BOUND),
    )?;
    if perm_group.order() != symmetries.len() {
        return Err(Error::internal(
            "fan symmetries are not closed under composition",
        ));
    }
    // align symmetry storage with the group's element order
    let mut aligned = vec![None; symmetries.len()];
    for s in symmetries {
        let idx = perm_group
            .index_of(&permutation_matrix(&s.ray_permutation))
            .ok_or_else(|| Error::internal("symmetry missing from its own group"))?;
        aligned[idx] = Some(s);
    }
    let symmetries: Vec<FanSymmetry> = aligned
        .into_iter()
        .map(|s| s.ok_or_else(|| Error::internal("group element without symmetry")))
        .collect::<Result<_>>()?;
    Ok(ToricWeylGroup {
        symmetries,
        perm_group,
    })
}

#[allow(clippy::too_many_arguments)]
fn enumerate_images(
    fan: &Fan,
    ray_index: &BTreeMap<&[BigInt], usize>,
    incidence: &[usize],
    cone_set: &BTreeSet<Vec<usize>>,
    u_t: &IntMatrix,
    basis: &[usize],
    images: &mut [usize],
    used: &mut [bool],
    depth: usize,
    out: &mut Vec<FanSymmetry>,
) {
    let rays = fan.rays();
    if depth == basis.len() {
        // solve Uᵀ·gᵀ = Vᵀ for the matrix g
        let v_t = IntMatrix::from_bigint_rows(images.iter().map(|&r| rays[r].clone()).collect());
        let g_t = match u_t.solve_matrix(&v_t) {
            Some(m) => m,
            None => return,
        };
        let g = g_t.transpose();
        if !g.is_unimodular() {
            return;
        }
        let mut pi = vec![0usize; rays.len()];
        for (r, ray) in rays.iter().enumerate() {
            let image = g.mul_vec(ray);
            match ray_index.get(image.as_slice()) {
                Some(&idx) => pi[r] = idx,
                None => return,
            }
        }
        let mut seen = vec![false; rays.len()];
        for &p in &pi {
            if seen[p] {
                return;
            }
            seen[p] = true;
        }
        for cone in fan.max_cones() {
            let mut image: Vec<usize> = cone.iter().map(|&r| pi[r]).collect();
            image.sort_unstable();
            if !cone_set.contains(&image) {
                return;
            }
        }
        out.push(FanSymmetry {
            matrix: g,
            ray_permutation: pi,
        });
        return;
    }
    let src = basis[depth];
    for cand in 0..rays.len() {
        if used[cand] || incidence[cand] != incidence[src] {
            continue;
        }
        images[depth] = cand;
        used[cand] = true;
        enumerate_images(
            fan,
            ray_index,
            incidence,
            cone_set,
            u_t,
            basis,
            images,
            used,
            depth + 1,
            out,
        );
        used[cand] = false;
    }
}

/// The image J of W in the automorphisms of the class group, together
/// with the quotient map, its kernel W°, and a splitting section J → W.
#[derive(Clone, Debug)]
pub struct ClassAutGroup {
    j_group: FiniteMatrixGroup,
    /// W element index → J element index
    quotient: Vec<usize>,
    /// J element index → W element index
    section: Vec<usize>,
    /// W° as sorted W element indices
    kernel: Vec<usize>,
}

impl ClassAutGroup {
    /// J as matrices on the free class group coordinates.
    pub fn group(&self) -> &FiniteMatrixGroup {
        &self.j_group
    }

    pub fn order(&self) -> usize {
        self.j_group.order()
    }

    pub fn quotient_map(&self) -> &[usize] {
        &self.quotient
    }

    pub fn section_map(&self) -> &[usize] {
        &self.section
    }

    pub fn kernel_elements(&self) -> &[usize] {
        &self.kernel
    }

    pub fn kernel_order(&self) -> usize {
        self.kernel.len()
    }

    /// The class lattice Pic with J acting tautologically.
    pub fn class_lattice(&self) -> GLattice {
        GLattice::tautological(self.j_group.clone())
    }
}

/// Compute J = im(W → Aut Cl), W° = ker, and the order-preserving
/// splitting. Requires a torsion-free class group so that class
/// automorphisms are integer matrices.
pub fn class_aut_group(w: &ToricWeylGroup, div: &DivisorTheory) -> Result<ClassAutGroup> {
    if !div.cl_group().torsion_factors().is_empty() {
        return Err(Error::precondition(
            "class group has torsion; class automorphisms need a free class group",
        ));
    }
    let k = div.class_rank();
    let n = div.ray_matrix().rows();

    // induced matrix on class coordinates for each symmetry
    let induced: Vec<IntMatrix> = w
        .symmetries()
        .iter()
        .map(|s| {
            let cols: Vec<Vec<BigInt>> = (0..k)
                .map(|j| {
                    let mut e = vec![BigInt::from(0); k];
                    e[j] = BigInt::from(1);
                    let divisor = div.lift_class(&e);
                    let mut permuted = vec![BigInt::from(0); n];
                    for (r, val) in divisor.into_iter().enumerate() {
                        permuted[s.ray_permutation[r]] = val;
                    }
                    div.deg(&permuted)
                })
                .collect();
            IntMatrix::from_columns(&cols, k)
        })
        .collect();

    let distinct: Vec<IntMatrix> = induced
        .iter()
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let j_group = FiniteMatrixGroup::from_generators_bounded(
        k,
        &distinct,
        distinct.len().max(crate::glattice::DEFAULT_GROUP_BOUND),
    )?;
    if j_group.order() != distinct.len() {
        return Err(Error::internal(
            "induced class maps are not closed under composition",
        ));
    }
    let quotient: Vec<usize> = induced
        .iter()
        .map(|m| {
            j_group
                .index_of(m)
                .ok_or_else(|| Error::internal("induced map missing from J"))
        })
        .collect::<Result<_>>()?;
    for i in 0..w.order() {
        for j in 0..w.order() {
            let wij = w.group().multiply(i, j);
            if quotient[wij] != j_group.multiply(quotient[i], quotient[j]) {
                return Err(Error::internal("class quotient is not a homomorphism"));
            }
        }
    }
    let kernel: Vec<usize> = (0..w.order())
        .filter(|&i| quotient[i] == j_group.identity_index())
        .collect();

    // splitting: the unique preimage that maps rays order-preservingly
    // within each weight class
    let wd = weight_decomposition(div);
    let mut section = vec![usize::MAX; j_group.order()];
    for (wi, &ji) in quotient.iter().enumerate() {
        let pi = &w.symmetry(wi).ray_permutation;
        let order_preserving = (0..wd.classes.len()).all(|c| {
            let members = wd.rays_of_class(c);
            let images: Vec<usize> = members.iter().map(|&r| pi[r]).collect();
            let sorted = {
                let mut s = images.clone();
                s.sort_unstable();
                s
            };
            images == sorted
        });
        if order_preserving {
            if section[ji] != usize::MAX && section[ji] != wi {
                return Err(Error::internal(
                    "two order-preserving preimages for one class automorphism",
                ));
            }
            section[ji] = wi;
        }
    }
    if section.iter().any(|&s| s == usize::MAX) {
        return Err(Error::internal(
            "class automorphism without an order-preserving preimage",
        ));
    }
    for a in 0..j_group.order() {
        if quotient[section[a]] != a {
            return Err(Error::internal("section does not split the quotient"));
        }
        for b in 0..j_group.order() {
            let ab = j_group.multiply(a, b);
            if w.group().multiply(section[a], section[b]) != section[ab] {
                return Err(Error::internal("splitting section is not a homomorphism"));
            }
        }
    }

    Ok(ClassAutGroup {
        j_group,
        quotient,
        section,
        kernel,
    })
}
