//! Integral representations of finite groups: matrix groups with full
//! multiplication tables, subgroup enumeration, Tate cohomology in degrees
//! −1, 0, 1, flasque and coflasque predicates, coflasque resolutions, and
//! an exact decision procedure for invertibility (being a direct summand
//! of a permutation lattice).
//!
//! Everything is decided over ℤ through the Smith normal form machinery in
//! [`crate::zmodule`]; no verdict in this module is heuristic.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::zmodule::{FGAbelianGroup, IntMatrix, Subquotient};

/// Default cap on group order during closure generation.
pub const DEFAULT_GROUP_BOUND: usize = 64;

/// A finite group of unimodular integer matrices, stored with its full
/// element list (sorted, deterministic), multiplication table and inverses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteMatrixGroup {
    degree: usize,
    elements: Vec<IntMatrix>,
    generators: Vec<usize>,
    mult: Vec<Vec<usize>>,
    inv: Vec<usize>,
    identity: usize,
}

impl FiniteMatrixGroup {
    pub fn from_generators(degree: usize, gens: &[IntMatrix]) -> Result<Self> {
        Self::from_generators_bounded(degree, gens, DEFAULT_GROUP_BOUND)
    }

    pub fn from_generators_bounded(
        degree: usize,
        gens: &[IntMatrix],
        bound: usize,
    ) -> Result<Self> {
        for g in gens {
            if g.rows() != degree || g.cols() != degree {
                return Err(Error::precondition("generator has wrong degree"));
            }
            if !g.is_unimodular() {
                return Err(Error::precondition("generator is not unimodular"));
            }
        }
        let id = IntMatrix::identity(degree);
        let mut elements: BTreeSet<IntMatrix> = BTreeSet::new();
        elements.insert(id.clone());
        let mut frontier: Vec<IntMatrix> = vec![id.clone()];
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y = g.mul(&x);
                if elements.insert(y.clone()) {
                    if elements.len() > bound {
                        return Err(Error::precondition(format!(
                            "group order exceeds bound {}",
                            bound
                        )));
                    }
                    frontier.push(y);
                }
            }
        }
        let elements: Vec<IntMatrix> = elements.into_iter().collect();
        let index: BTreeMap<&IntMatrix, usize> =
            elements.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let n = elements.len();
        let mut mult = vec![vec![0usize; n]; n];
        for i in 0..n {
            for j in 0..n {
                let p = elements[i].mul(&elements[j]);
                mult[i][j] = *index
                    .get(&p)
                    .ok_or_else(|| Error::internal("closure is not closed under product"))?;
            }
        }
        let identity = *index.get(&id).expect("identity is an element");
        let mut inv = vec![usize::MAX; n];
        for i in 0..n {
            for j in 0..n {
                if mult[i][j] == identity {
                    inv[i] = j;
                }
            }
        }
        if inv.iter().any(|&x| x == usize::MAX) {
            return Err(Error::internal("element without inverse"));
        }
        let generators = gens
            .iter()
            .map(|g| *index.get(g).expect("generators are elements"))
            .collect();
        Ok(FiniteMatrixGroup {
            degree,
            elements,
            generators,
            mult,
            inv,
            identity,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[IntMatrix] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &IntMatrix {
        &self.elements[i]
    }

    pub fn identity_index(&self) -> usize {
        self.identity
    }

    pub fn generator_indices(&self) -> &[usize] {
        &self.generators
    }

    pub fn index_of(&self, m: &IntMatrix) -> Option<usize> {
        self.elements.binary_search(m).ok()
    }

    pub fn multiply(&self, i: usize, j: usize) -> usize {
        self.mult[i][j]
    }

    pub fn inverse(&self, i: usize) -> usize {
        self.inv[i]
    }

    pub fn element_order(&self, i: usize) -> usize {
        let mut ord = 1;
        let mut x = i;
        while x != self.identity {
            x = self.mult[x][i];
            ord += 1;
        }
        ord
    }

    /// Smallest subgroup containing the seed elements, as sorted indices.
    pub fn closure_of(&self, seed: &[usize]) -> Vec<usize> {
        let mut set: BTreeSet<usize> = BTreeSet::new();
        set.insert(self.identity);
        let mut frontier: Vec<usize> = vec![self.identity];
        let mut gens = seed.to_vec();
        gens.extend(seed.iter().map(|&s| self.inv[s]));
        while let Some(x) = frontier.pop() {
            for &g in &gens {
                let y = self.mult[g][x];
                if set.insert(y) {
                    frontier.push(y);
                }
            }
        }
        set.into_iter().collect()
    }

    /// Every subgroup, each as a sorted element index list, ordered by
    /// (order, elements). Found by closing cyclic subgroups under joins.
    pub fn subgroups(&self) -> Vec<Vec<usize>> {
        let mut subs: BTreeSet<Vec<usize>> = BTreeSet::new();
        subs.insert(vec![self.identity]);
        for i in 0..self.order() {
            subs.insert(self.closure_of(&[i]));
        }
        loop {
            let list: Vec<Vec<usize>> = subs.iter().cloned().collect();
            let mut grew = false;
            for i in 0..list.len() {
                for j in (i + 1)..list.len() {
                    let mut seed = list[i].clone();
                    seed.extend(list[j].iter().cloned());
                    let c = self.closure_of(&seed);
                    if subs.insert(c) {
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
        }
        let mut out: Vec<Vec<usize>> = subs.into_iter().collect();
        out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        out
    }

    pub fn conjugate_subgroup(&self, g: usize, subgroup: &[usize]) -> Vec<usize> {
        let gi = self.inv[g];
        let mut out: Vec<usize> = subgroup
            .iter()
            .map(|&h| self.mult[self.mult[g][h]][gi])
            .collect();
        out.sort_unstable();
        out
    }

    /// Conjugacy classes of subgroups; each class lists subgroups, the
    /// first entry being the representative (minimal in sort order).
    pub fn subgroup_conjugacy_classes(&self) -> Vec<Vec<Vec<usize>>> {
        let subs = self.subgroups();
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut classes = Vec::new();
        for s in &subs {
            if seen.contains(s) {
                continue;
            }
            let mut orbit: BTreeSet<Vec<usize>> = BTreeSet::new();
            for g in 0..self.order() {
                orbit.insert(self.conjugate_subgroup(g, s));
            }
            let class: Vec<Vec<usize>> = orbit.into_iter().collect();
            for member in &class {
                seen.insert(member.clone());
            }
            classes.push(class);
        }
        classes.sort_by(|a, b| (a[0].len(), &a[0]).cmp(&(b[0].len(), &b[0])));
        classes
    }

    /// Representatives of subgroup conjugacy classes.
    pub fn subgroup_representatives(&self) -> Vec<Vec<usize>> {
        self.subgroup_conjugacy_classes()
            .into_iter()
            .map(|c| c[0].clone())
            .collect()
    }

    pub fn centralizer(&self, elems: &[usize]) -> Vec<usize> {
        (0..self.order())
            .filter(|&g| elems.iter().all(|&x| self.mult[g][x] == self.mult[x][g]))
            .collect()
    }

    pub fn is_subgroup(&self, elems: &[usize]) -> bool {
        let set: BTreeSet<usize> = elems.iter().cloned().collect();
        set.contains(&self.identity)
            && elems
                .iter()
                .all(|&a| elems.iter().all(|&b| set.contains(&self.mult[a][b])))
    }
}

/// Cyclic group of order m as regular permutation matrices.
pub fn cyclic_group_regular(m: usize) -> FiniteMatrixGroup {
    assert!(m >= 1);
    let mut c = IntMatrix::zero(m, m);
    for i in 0..m {
        c.set((i + 1) % m, i, BigInt::one());
    }
    FiniteMatrixGroup::from_generators(m, &[c]).expect("cyclic group fits any bound")
}

/// A lattice with an action of a finite matrix group: one unimodular
/// matrix per group element, forming a homomorphism.
#[derive(Clone, Debug)]
pub struct GLattice {
    group: FiniteMatrixGroup,
    rank: usize,
    action: Vec<IntMatrix>,
}

impl GLattice {
    /// Build from a full action table. The homomorphism property is
    /// verified on (generator, element) pairs, which suffices because
    /// every element is a word in the generators.
    pub fn from_full_action(group: FiniteMatrixGroup, action: Vec<IntMatrix>) -> Result<Self> {
        if action.len() != group.order() {
            return Err(Error::precondition("action table has wrong length"));
        }
        let rank = action[group.identity_index()].rows();
        for a in &action {
            if a.rows() != rank || a.cols() != rank {
                return Err(Error::precondition("action matrix has wrong size"));
            }
            if !a.is_unimodular() {
                return Err(Error::precondition("action matrix is not unimodular"));
            }
        }
        if !action[group.identity_index()].is_identity() {
            return Err(Error::precondition(
                "identity must act as the identity matrix",
            ));
        }
        for &g in group.generator_indices() {
            for x in 0..group.order() {
                let gx = group.multiply(g, x);
                if action[g].mul(&action[x]) != action[gx] {
                    return Err(Error::precondition("action is not a homomorphism"));
                }
            }
        }
        Ok(GLattice {
            group,
            rank,
            action,
        })
    }

    /// Extend generator images to the whole group by breadth-first closure,
    /// verifying consistency along the way.
    pub fn from_generator_action(
        group: FiniteMatrixGroup,
        gen_images: &[IntMatrix],
    ) -> Result<Self> {
        if gen_images.len() != group.generator_indices().len() {
            return Err(Error::precondition(
                "one image per group generator required",
            ));
        }
        let rank = gen_images
            .first()
            .map(|m| m.rows())
            .unwrap_or(group.degree());
        let mut action: Vec<Option<IntMatrix>> = vec![None; group.order()];
        action[group.identity_index()] = Some(IntMatrix::identity(rank));
        let mut frontier = vec![group.identity_index()];
        while let Some(x) = frontier.pop() {
            let ax = action[x].clone().expect("frontier elements have actions");
            for (k, &g) in group.generator_indices().iter().enumerate() {
                let gx = group.multiply(g, x);
                let agx = gen_images[k].mul(&ax);
                match &action[gx] {
                    None => {
                        action[gx] = Some(agx);
                        frontier.push(gx);
                    }
                    Some(existing) => {
                        if *existing != agx {
                            return Err(Error::precondition(
                                "generator images do not extend to a homomorphism",
                            ));
                        }
                    }
                }
            }
        }
        let action: Vec<IntMatrix> = action
            .into_iter()
            .map(|a| a.ok_or_else(|| Error::internal("group not generated by its generators")))
            .collect::<Result<_>>()?;
        Self::from_full_action(group, action)
    }

    /// The group acting on its own matrix space: action = the matrices.
    pub fn tautological(group: FiniteMatrixGroup) -> Self {
        let action = group.elements().to_vec();
        let rank = group.degree();
        GLattice {
            group,
            rank,
            action,
        }
    }

    /// Parse-time constructor: the generator matrices both generate the
    /// group and define the action.
    pub fn from_generator_matrices(rank: usize, gens: &[IntMatrix]) -> Result<Self> {
        let group = FiniteMatrixGroup::from_generators(rank, gens)?;
        Ok(Self::tautological(group))
    }

    pub fn group(&self) -> &FiniteMatrixGroup {
        &self.group
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn action(&self, i: usize) -> &IntMatrix {
        &self.action[i]
    }

    /// Dual lattice: g acts by the inverse transpose.
    pub fn dual(&self) -> GLattice {
        let action = (0..self.group.order())
            .map(|i| self.action[self.group.inverse(i)].transpose())
            .collect();
        GLattice {
            group: self.group.clone(),
            rank: self.rank,
            action,
        }
    }

    pub fn direct_sum(&self, other: &GLattice) -> GLattice {
        assert_eq!(
            self.group.elements(),
            other.group.elements(),
            "direct sum requires the same acting group"
        );
        let rank = self.rank + other.rank;
        let action = (0..self.group.order())
            .map(|i| {
                let mut m = IntMatrix::zero(rank, rank);
                for r in 0..self.rank {
                    for c in 0..self.rank {
                        m.set(r, c, self.action[i].get(r, c).clone());
                    }
                }
                for r in 0..other.rank {
                    for c in 0..other.rank {
                        m.set(
                            self.rank + r,
                            self.rank + c,
                            other.action[i].get(r, c).clone(),
                        );
                    }
                }
                m
            })
            .collect();
        GLattice {
            group: self.group.clone(),
            rank,
            action,
        }
    }

    /// Basis of the fixed sublattice L^H (columns, Hermite canonical).
    pub fn fixed_sublattice(&self, subgroup: &[usize]) -> IntMatrix {
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        for &h in subgroup {
            if h == self.group.identity_index() {
                continue;
            }
            let a = &self.action[h];
            for r in 0..self.rank {
                let mut row = a.row(r);
                row[r] -= BigInt::one();
                rows.push(row);
            }
        }
        let m = if rows.is_empty() {
            IntMatrix::zero(0, self.rank)
        } else {
            IntMatrix::from_bigint_rows(rows)
        };
        m.kernel()
    }
}

/// A homomorphism from one finite matrix group to another, stored as the
/// image index of every source element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    pub source: FiniteMatrixGroup,
    pub images: Vec<usize>,
}

impl GroupHom {
    /// Verify the homomorphism property against a target group's table.
    pub fn verify(&self, target: &FiniteMatrixGroup) -> Result<()> {
        if self.images.len() != self.source.order() {
            return Err(Error::precondition("one image per source element required"));
        }
        if self.images.iter().any(|&i| i >= target.order()) {
            return Err(Error::precondition("image index out of range"));
        }
        for i in 0..self.source.order() {
            for j in 0..self.source.order() {
                let lhs = self.images[self.source.multiply(i, j)];
                let rhs = target.multiply(self.images[i], self.images[j]);
                if lhs != rhs {
                    return Err(Error::precondition("not a homomorphism"));
                }
            }
        }
        Ok(())
    }
}

/// Pull a lattice action back along a homomorphism: the source group acts
/// through its images.
pub fn compose_action(phi: &GroupHom, l: &GLattice) -> Result<GLattice> {
    phi.verify(l.group())?;
    let action: Vec<IntMatrix> = phi.images.iter().map(|&i| l.action[i].clone()).collect();
    GLattice::from_full_action(phi.source.clone(), action)
}

fn subgroup_positions(subgroup: &[usize]) -> BTreeMap<usize, usize> {
    subgroup.iter().enumerate().map(|(p, &e)| (e, p)).collect()
}

/// Tate cohomology in degree −1: ker(Norm) / span{h·x − x}.
pub fn tate_minus1(subgroup: &[usize], l: &GLattice) -> Subquotient {
    debug_assert!(l.group().is_subgroup(subgroup));
    let r = l.rank();
    let mut norm = IntMatrix::zero(r, r);
    for &h in subgroup {
        norm = norm.add(l.action(h));
    }
    let kernel = norm.kernel();
    let mut rel_cols: Vec<Vec<BigInt>> = Vec::new();
    for &h in subgroup {
        let a = l.action(h);
        for j in 0..r {
            let mut col = a.column(j);
            col[j] -= BigInt::one();
            rel_cols.push(col);
        }
    }
    let relations = IntMatrix::from_columns(&rel_cols, r);
    Subquotient::new(kernel, &relations)
}

/// Tate cohomology in degree 0: L^H / Norm(L).
pub fn tate_zero(subgroup: &[usize], l: &GLattice) -> Subquotient {
    debug_assert!(l.group().is_subgroup(subgroup));
    let r = l.rank();
    let fixed = l.fixed_sublattice(subgroup);
    let mut norm = IntMatrix::zero(r, r);
    for &h in subgroup {
        norm = norm.add(l.action(h));
    }
    Subquotient::new(fixed, &norm)
}

/// Tate cohomology in degree 1: degree-1 cocycles of the bar resolution
/// modulo coboundaries. Classes live in ℤ^(|H|·rank), one block of
/// coordinates per subgroup element in sorted order.
pub fn tate_plus1(subgroup: &[usize], l: &GLattice) -> Subquotient {
    debug_assert!(l.group().is_subgroup(subgroup));
    let r = l.rank();
    let m = subgroup.len();
    let pos = subgroup_positions(subgroup);
    // cocycle condition: f(h1·h2) − f(h1) − h1·f(h2) = 0 for all pairs
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for (i, &h1) in subgroup.iter().enumerate() {
        for (j, &h2) in subgroup.iter().enumerate() {
            let k = pos[&l.group().multiply(h1, h2)];
            let a1 = l.action(h1);
            for t in 0..r {
                let mut row = vec![BigInt::zero(); m * r];
                row[k * r + t] += BigInt::one();
                row[i * r + t] -= BigInt::one();
                for s in 0..r {
                    row[j * r + s] -= a1.get(t, s);
                }
                rows.push(row);
            }
        }
    }
    let system = IntMatrix::from_bigint_rows(rows);
    let cocycles = system.kernel();
    // coboundaries: x ↦ (h·x − x)_h
    let mut cob_cols: Vec<Vec<BigInt>> = Vec::new();
    for j in 0..r {
        let mut col = vec![BigInt::zero(); m * r];
        for (i, &h) in subgroup.iter().enumerate() {
            let a = l.action(h);
            for t in 0..r {
                col[i * r + t] = a.get(t, j).clone();
            }
            col[i * r + j] -= BigInt::one();
        }
        cob_cols.push(col);
    }
    let coboundaries = IntMatrix::from_columns(&cob_cols, m * r);
    Subquotient::new(cocycles, &coboundaries)
}

/// Tate cohomology group in degree i ∈ {−1, 0, 1}.
pub fn tate_h(i: i32, subgroup: &[usize], l: &GLattice) -> FGAbelianGroup {
    match i {
        -1 => tate_minus1(subgroup, l).group().clone(),
        0 => tate_zero(subgroup, l).group().clone(),
        1 => tate_plus1(subgroup, l).group().clone(),
        _ => panic!("tate_h supports degrees -1, 0, 1"),
    }
}

/// Outcome of a for-all-subgroups predicate, with a failing subgroup when
/// the answer is no.
#[derive(Clone, Debug)]
pub struct LatticePredicate {
    pub holds: bool,
    pub witness: Option<Vec<usize>>,
}

/// Flasque: Ĥ⁻¹(H, L) vanishes for every subgroup H. Conjugate subgroups
/// have isomorphic Tate groups, so class representatives suffice.
pub fn is_flasque(l: &GLattice) -> LatticePredicate {
    for h in l.group().subgroup_representatives() {
        if !tate_h(-1, &h, l).is_trivial() {
            return LatticePredicate {
                holds: false,
                witness: Some(h),
            };
        }
    }
    LatticePredicate {
        holds: true,
        witness: None,
    }
}

/// Coflasque: Ĥ¹(H, L) vanishes for every subgroup H.
pub fn is_coflasque(l: &GLattice) -> LatticePredicate {
    for h in l.group().subgroup_representatives() {
        if !tate_h(1, &h, l).is_trivial() {
            return LatticePredicate {
                holds: false,
                witness: Some(h),
            };
        }
    }
    LatticePredicate {
        holds: true,
        witness: None,
    }
}

/// One induced block ℤ[G/H] of a coflasque resolution.
#[derive(Clone, Debug)]
pub struct ResolutionBlock {
    /// subgroup as sorted element indices
    pub subgroup: Vec<usize>,
    /// the fixed vector of M^H this block maps onto
    pub generator: Vec<BigInt>,
    /// coset representatives (minimal element index per coset)
    pub coset_reps: Vec<usize>,
    /// map from group element to coset position
    elem_to_coset: Vec<usize>,
}

/// Exact sequence 0 → Q → P → M → 0 with P a permutation lattice and
/// P^H → M^H surjective for every subgroup H.
#[derive(Clone, Debug)]
pub struct CoflasqueResolution {
    pub p: GLattice,
    /// surjection matrix: rank(M) × rank(P)
    pub pi: IntMatrix,
    pub blocks: Vec<ResolutionBlock>,
}

fn left_cosets(group: &FiniteMatrixGroup, subgroup: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let mut elem_to_coset = vec![usize::MAX; group.order()];
    let mut reps = Vec::new();
    for g in 0..group.order() {
        if elem_to_coset[g] != usize::MAX {
            continue;
        }
        let c = reps.len();
        reps.push(g);
        for &h in subgroup {
            elem_to_coset[group.multiply(g, h)] = c;
        }
    }
    (reps, elem_to_coset)
}

/// Build the standard coflasque resolution: for each conjugacy class
/// representative H and each Hermite basis vector of M^H, one induced
/// block ℤ[G/H] mapping its identity coset onto that vector.
pub fn coflasque_resolution(m: &GLattice) -> CoflasqueResolution {
    let group = m.group().clone();
    let mut blocks: Vec<ResolutionBlock> = Vec::new();
    for h in group.subgroup_representatives() {
        let fixed = m.fixed_sublattice(&h);
        let (reps, elem_to_coset) = left_cosets(&group, &h);
        for j in 0..fixed.cols() {
            blocks.push(ResolutionBlock {
                subgroup: h.clone(),
                generator: fixed.column(j),
                coset_reps: reps.clone(),
                elem_to_coset: elem_to_coset.clone(),
            });
        }
    }
    let p_rank: usize = blocks.iter().map(|b| b.coset_reps.len()).sum();

    // Permutation action on the direct sum of the blocks.
    let mut action: Vec<IntMatrix> = Vec::with_capacity(group.order());
    for g in 0..group.order() {
        let mut a = IntMatrix::zero(p_rank, p_rank);
        let mut offset = 0;
        for b in &blocks {
            for (c, &rep) in b.coset_reps.iter().enumerate() {
                let target = b.elem_to_coset[group.multiply(g, rep)];
                a.set(offset + target, offset + c, BigInt::one());
            }
            offset += b.coset_reps.len();
        }
        action.push(a);
    }
    let p = GLattice::from_full_action(group.clone(), action)
        .expect("permutation action is a homomorphism");

    // π sends the coset gH of a block to g · (block generator).
    let mut pi_cols: Vec<Vec<BigInt>> = Vec::new();
    for b in &blocks {
        for &rep in &b.coset_reps {
            pi_cols.push(m.action(rep).mul_vec(&b.generator));
        }
    }
    let pi = IntMatrix::from_columns(&pi_cols, m.rank());

    // π must intertwine the actions.
    for &g in group.generator_indices() {
        assert_eq!(
            pi.mul(p.action(g)),
            m.action(g).mul(&pi),
            "projection fails equivariance"
        );
    }

    let res = CoflasqueResolution { p, pi, blocks };
    // Re-verify the defining property on every subgroup, not only the
    // representatives the construction used.
    for h in group.subgroups() {
        if !res.fixed_points_surject(m, &h) {
            panic!("resolution fails fixed-point surjectivity");
        }
    }
    res
}

impl CoflasqueResolution {
    /// Basis of P^H: orbit sums of the permuted basis 1 per H-orbit.
    fn fixed_basis_of_p(&self, subgroup: &[usize]) -> IntMatrix {
        let p_rank = self.pi.cols();
        let mut cols: Vec<Vec<BigInt>> = Vec::new();
        let mut offset = 0;
        for b in &self.blocks {
            let n = b.coset_reps.len();
            let mut seen = vec![false; n];
            for start in 0..n {
                if seen[start] {
                    continue;
                }
                // H-orbit of this coset
                let mut orbit = vec![start];
                seen[start] = true;
                let mut stack = vec![start];
                while let Some(c) = stack.pop() {
                    for &h in subgroup {
                        let group = self.p.group();
                        let t = b.elem_to_coset[group.multiply(h, b.coset_reps[c])];
                        if !seen[t] {
                            seen[t] = true;
                            orbit.push(t);
                            stack.push(t);
                        }
                    }
                }
                let mut col = vec![BigInt::zero(); p_rank];
                for c in orbit {
                    col[offset + c] = BigInt::one();
                }
                cols.push(col);
            }
            offset += n;
        }
        IntMatrix::from_columns(&cols, p_rank)
    }

    /// Does π restricted to P^H surject onto M^H?
    pub fn fixed_points_surject(&self, m: &GLattice, subgroup: &[usize]) -> bool {
        let fp = self.fixed_basis_of_p(subgroup);
        let image = self.pi.mul(&fp);
        let fm = m.fixed_sublattice(subgroup);
        image.solve_matrix(&fm).is_some()
    }

    /// The kernel Q as a lattice, with its inclusion matrix into P.
    pub fn kernel_lattice(&self) -> (GLattice, IntMatrix) {
        let inclusion = self.pi.kernel();
        let group = self.p.group().clone();
        let action: Vec<IntMatrix> = (0..group.order())
            .map(|g| {
                let moved = self.p.action(g).mul(&inclusion);
                inclusion
                    .solve_matrix(&moved)
                    .expect("kernel is preserved by the action")
            })
            .collect();
        let q =
            GLattice::from_full_action(group, action).expect("restricted action is a homomorphism");
        (q, inclusion)
    }
}

/// Verdict of the invertibility decision. Proven carries an equivariant
/// section of the coflasque resolution (re-verified before return);
/// Disproven explains which necessary condition failed, or that no
/// splitting exists.
#[derive(Clone, Debug)]
pub enum InvertibilityVerdict {
    Proven { section: IntMatrix },
    Disproven { reason: String },
}

impl InvertibilityVerdict {
    pub fn is_proven(&self) -> bool {
        matches!(self, InvertibilityVerdict::Proven { .. })
    }
}

/// Every equivariant map M → ℤ[G/H] is λ ↦ Σ_gH ⟨λ, g⁻¹x⟩·e_gH for a
/// unique H-invariant functional λ on M, so sections of π live in the
/// small space ⊕_blocks (M*)^H. Returns the assembled section matrix.
fn section_through_invariants(m: &GLattice, res: &CoflasqueResolution) -> Option<IntMatrix> {
    let r = m.rank();
    let dual = m.dual();
    // columns of the linear system: contribution of each λ basis vector to
    // the composite π∘s, flattened row-major; target is the identity.
    let mut sys_cols: Vec<Vec<BigInt>> = Vec::new();
    let mut lambda_bases: Vec<(usize, IntMatrix)> = Vec::new(); // (block, basis)
    for (bi, b) in res.blocks.iter().enumerate() {
        let basis = dual.fixed_sublattice(&b.subgroup);
        for j in 0..basis.cols() {
            let lambda = basis.column(j);
            let mut comp = IntMatrix::zero(r, r);
            for &rep in &b.coset_reps {
                let gv = m.action(rep).mul_vec(&b.generator);
                let lam_g = m
                    .action(m.group().inverse(rep))
                    .transpose()
                    .mul_vec(&lambda);
                for a in 0..r {
                    for c in 0..r {
                        let add = &gv[a] * &lam_g[c];
                        let cur = comp.get(a, c) + add;
                        comp.set(a, c, cur);
                    }
                }
            }
            let mut flat = Vec::with_capacity(r * r);
            for a in 0..r {
                for c in 0..r {
                    flat.push(comp.get(a, c).clone());
                }
            }
            sys_cols.push(flat);
        }
        lambda_bases.push((bi, basis));
    }
    let sys = IntMatrix::from_columns(&sys_cols, r * r);
    let mut target = Vec::with_capacity(r * r);
    for a in 0..r {
        for c in 0..r {
            target.push(if a == c {
                BigInt::one()
            } else {
                BigInt::zero()
            });
        }
    }
    let coeffs = sys.solve(&target)?;

    // Assemble the full section matrix s: P-rank × M-rank.
    let p_rank = res.pi.cols();
    let mut s = IntMatrix::zero(p_rank, r);
    let mut var = 0usize;
    let mut offset = 0usize;
    let mut block_offsets = Vec::with_capacity(res.blocks.len());
    for b in &res.blocks {
        block_offsets.push(offset);
        offset += b.coset_reps.len();
    }
    for (bi, basis) in &lambda_bases {
        let b = &res.blocks[*bi];
        for j in 0..basis.cols() {
            let coef = coeffs[var].clone();
            var += 1;
            if coef.is_zero() {
                continue;
            }
            let lambda = basis.column(j);
            for (ci, &rep) in b.coset_reps.iter().enumerate() {
                let lam_g = m
                    .action(m.group().inverse(rep))
                    .transpose()
                    .mul_vec(&lambda);
                for c in 0..r {
                    let add = &coef * &lam_g[c];
                    let row = block_offsets[*bi] + ci;
                    let cur = s.get(row, c) + add;
                    s.set(row, c, cur);
                }
            }
        }
    }
    // Re-verify the certificate.
    assert!(
        res.pi.mul(&s).is_identity(),
        "section fails to split the projection"
    );
    for &g in m.group().generator_indices() {
        assert_eq!(
            res.p.action(g).mul(&s),
            s.mul(m.action(g)),
            "section fails equivariance"
        );
    }
    Some(s)
}

/// Decide whether M is invertible (a direct summand of a permutation
/// lattice), exactly. A coflasque resolution 0 → Q → P → M → 0 splits iff
/// M is invertible: a splitting exhibits M as a summand of P, and
/// conversely Ext¹(M, Q) embeds in a sum of groups Ĥ¹(H, Q), which vanish
/// because Q is coflasque.
pub fn is_invertible(m: &GLattice) -> InvertibilityVerdict {
    let res = coflasque_resolution(m);
    if let Some(section) = section_through_invariants(m, &res) {
        return InvertibilityVerdict::Proven { section };
    }
    let fl = is_flasque(m);
    if !fl.holds {
        return InvertibilityVerdict::Disproven {
            reason: format!(
                "not flasque: degree -1 Tate cohomology is nonzero for subgroup {:?}",
                fl.witness.unwrap()
            ),
        };
    }
    let co = is_coflasque(m);
    if !co.holds {
        return InvertibilityVerdict::Disproven {
            reason: format!(
                "not coflasque: degree 1 Tate cohomology is nonzero for subgroup {:?}",
                co.witness.unwrap()
            ),
        };
    }
    InvertibilityVerdict::Disproven {
        reason: "no equivariant splitting of the coflasque resolution exists".to_string(),
    }
}
