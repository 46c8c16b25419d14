//! Exact rational cones and lattice polytopes: double description at desk
//! scale, Hilbert bases, nef cones of smooth projective fans, and lattice
//! point enumeration for global section counts.
//!
//! Cones are stored with both representations: extreme rays plus lineality
//! on one side, span equations plus facet inequalities on the other. All
//! conversions run through exhaustive subset enumeration, which is exact
//! and fast for the ambient ranks (≤ 4 or so) this crate targets.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::fan::{DivisorTheory, Fan, TDivisor};
use crate::zmodule::IntMatrix;

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

/// Divide out the gcd of the entries; the zero vector is returned as is.
pub fn primitive(v: &[BigInt]) -> Vec<BigInt> {
    let mut g = BigInt::zero();
    for x in v {
        g = g.gcd(x);
    }
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

/// All k-element index subsets of 0..n in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k > n {
        return vec![];
    }
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in (i + 1)..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

fn rows_matrix(rows: &[Vec<BigInt>], ambient: usize) -> IntMatrix {
    if rows.is_empty() {
        IntMatrix::zero(0, ambient)
    } else {
        IntMatrix::from_bigint_rows(rows.to_vec())
    }
}

/// Extreme rays and lineality basis of {x : eqs·x = 0, ineqs·x ≥ 0}.
fn vrep_from_hrep(
    ambient: usize,
    eqs: &[Vec<BigInt>],
    ineqs: &[Vec<BigInt>],
) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>) {
    let mut all_rows: Vec<Vec<BigInt>> = eqs.to_vec();
    all_rows.extend(ineqs.iter().cloned());
    let lin = rows_matrix(&all_rows, ambient).kernel();
    let lineality: Vec<Vec<BigInt>> = (0..lin.cols()).map(|j| lin.column(j)).collect();

    // Pointed part lives in the orthogonal complement of the lineality space.
    let mut eq_pt: Vec<Vec<BigInt>> = eqs.to_vec();
    eq_pt.extend(lineality.iter().cloned());
    let eq_mat = rows_matrix(&eq_pt, ambient);
    let d = eq_mat.kernel().cols();
    if d == 0 {
        return (vec![], lineality);
    }

    let mut rays: BTreeSet<Vec<BigInt>> = BTreeSet::new();
    for subset in combinations(ineqs.len(), d - 1) {
        let mut rows = eq_pt.clone();
        for &s in &subset {
            rows.push(ineqs[s].clone());
        }
        let k = rows_matrix(&rows, ambient).kernel();
        if k.cols() != 1 {
            continue;
        }
        let v = primitive(&k.column(0));
        let mut pos = true;
        let mut neg = true;
        for w in ineqs {
            let s = dot(w, &v);
            if s.is_negative() {
                pos = false;
            }
            if s.is_positive() {
                neg = false;
            }
            if !pos && !neg {
                break;
            }
        }
        if pos {
            rays.insert(v);
        } else if neg {
            rays.insert(v.iter().map(|x| -x).collect());
        }
    }
    (rays.into_iter().collect(), lineality)
}

/// Span equations and facet inequalities of cone(gens).
fn hrep_from_generators(
    ambient: usize,
    gens: &[Vec<BigInt>],
) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>) {
    let gens: Vec<Vec<BigInt>> = gens
        .iter()
        .filter(|g| g.iter().any(|x| !x.is_zero()))
        .cloned()
        .collect();
    let gen_rows = rows_matrix(&gens, ambient);
    let ann = gen_rows.kernel();
    let equations: Vec<Vec<BigInt>> = {
        let mut e: Vec<Vec<BigInt>> = (0..ann.cols()).map(|j| ann.column(j)).collect();
        e.sort();
        e
    };
    let r = ambient - equations.len();
    if r == 0 {
        return (equations, vec![]);
    }

    // Saturated basis of the linear span; generator coordinates within it.
    let basis = rows_matrix(&equations, ambient).kernel();
    let gen_cols = IntMatrix::from_columns(&gens, ambient);
    let coords = basis
        .solve_matrix(&gen_cols)
        .expect("generators must lie in the saturation of their span");

    let mut facets_span: BTreeSet<Vec<BigInt>> = BTreeSet::new();
    for subset in combinations(gens.len(), r - 1) {
        let rows: Vec<Vec<BigInt>> = subset.iter().map(|&s| coords.column(s)).collect();
        let k = rows_matrix(&rows, r).kernel();
        if k.cols() != 1 {
            continue;
        }
        let w = primitive(&k.column(0));
        let mut pos = true;
        let mut neg = true;
        for j in 0..coords.cols() {
            let s = dot(&w, &coords.column(j));
            if s.is_negative() {
                pos = false;
            }
            if s.is_positive() {
                neg = false;
            }
            if !pos && !neg {
                break;
            }
        }
        if pos {
            facets_span.insert(w);
        } else if neg {
            facets_span.insert(w.iter().map(|x| -x).collect());
        }
    }

    // Lift each in-span normal to an ambient covector.
    let basis_t = basis.transpose();
    let mut inequalities: BTreeSet<Vec<BigInt>> = BTreeSet::new();
    for w in facets_span {
        let a = basis_t
            .solve(&w)
            .expect("saturated span basis must lift covectors");
        inequalities.insert(primitive(&a));
    }
    (equations, inequalities.into_iter().collect())
}

/// A rational polyhedral cone with both descriptions maintained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalCone {
    ambient: usize,
    rays: Vec<Vec<BigInt>>,
    lineality: Vec<Vec<BigInt>>,
    equations: Vec<Vec<BigInt>>,
    inequalities: Vec<Vec<BigInt>>,
}

impl RationalCone {
    pub fn from_generators(ambient: usize, gens: &[Vec<BigInt>]) -> Self {
        for g in gens {
            assert_eq!(g.len(), ambient, "generator length mismatch");
        }
        let (equations, inequalities) = hrep_from_generators(ambient, gens);
        let (rays, lineality) = vrep_from_hrep(ambient, &equations, &inequalities);
        RationalCone {
            ambient,
            rays,
            lineality,
            equations,
            inequalities,
        }
    }

    pub fn from_inequalities(ambient: usize, ineqs: &[Vec<BigInt>]) -> Self {
        Self::from_hrep(ambient, &[], ineqs)
    }

    pub fn from_hrep(ambient: usize, eqs: &[Vec<BigInt>], ineqs: &[Vec<BigInt>]) -> Self {
        for row in eqs.iter().chain(ineqs.iter()) {
            assert_eq!(row.len(), ambient, "covector length mismatch");
        }
        let (rays, lineality) = vrep_from_hrep(ambient, eqs, ineqs);
        let mut gens = rays.clone();
        for l in &lineality {
            gens.push(l.clone());
            gens.push(l.iter().map(|x| -x).collect());
        }
        let (equations, inequalities) = hrep_from_generators(ambient, &gens);
        RationalCone {
            ambient,
            rays,
            lineality,
            equations,
            inequalities,
        }
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient
    }

    /// Minimal primitive generators of the pointed part, lexicographically
    /// sorted. For a strongly convex cone these generate the whole cone.
    pub fn extreme_rays(&self) -> &[Vec<BigInt>] {
        &self.rays
    }

    pub fn lineality_basis(&self) -> &[Vec<BigInt>] {
        &self.lineality
    }

    /// Generators of the cone as a set: extreme rays plus both signs of
    /// each lineality basis vector.
    pub fn generators(&self) -> Vec<Vec<BigInt>> {
        let mut g = self.rays.clone();
        for l in &self.lineality {
            g.push(l.clone());
            g.push(l.iter().map(|x| -x).collect());
        }
        g
    }

    pub fn equations(&self) -> &[Vec<BigInt>] {
        &self.equations
    }

    pub fn inequalities(&self) -> &[Vec<BigInt>] {
        &self.inequalities
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.equations.iter().all(|e| dot(e, v).is_zero())
            && self.inequalities.iter().all(|w| !dot(w, v).is_negative())
    }

    pub fn dim(&self) -> usize {
        self.ambient - self.equations.len()
    }

    pub fn is_strongly_convex(&self) -> bool {
        self.lineality.is_empty()
    }

    pub fn intersect(&self, other: &RationalCone) -> RationalCone {
        assert_eq!(self.ambient, other.ambient);
        let mut eqs = self.equations.clone();
        eqs.extend(other.equations.iter().cloned());
        let mut ineqs = self.inequalities.clone();
        ineqs.extend(other.inequalities.iter().cloned());
        RationalCone::from_hrep(self.ambient, &eqs, &ineqs)
    }

    /// True when self is a face of other (including the improper face and,
    /// for pointed cones, the zero face).
    pub fn is_face_of(&self, other: &RationalCone) -> bool {
        assert_eq!(self.ambient, other.ambient);
        let gens = self.generators();
        if !gens.iter().all(|g| other.contains(g)) {
            return false;
        }
        let tight: Vec<Vec<BigInt>> = other
            .inequalities
            .iter()
            .filter(|w| gens.iter().all(|g| dot(w, g).is_zero()))
            .cloned()
            .collect();
        let mut eqs = other.equations.clone();
        eqs.extend(tight);
        let face = RationalCone::from_hrep(self.ambient, &eqs, &other.inequalities);
        face.generators().iter().all(|g| self.contains(g))
    }

    /// Pull the cone back along an injective lattice map given by a basis
    /// matrix (columns), yielding a cone in the basis coordinates.
    pub fn restrict_to_sublattice(&self, basis: &IntMatrix) -> RationalCone {
        assert_eq!(basis.rows(), self.ambient);
        let bt = basis.transpose();
        let eqs: Vec<Vec<BigInt>> = self.equations.iter().map(|e| bt.mul_vec(e)).collect();
        let ineqs: Vec<Vec<BigInt>> = self.inequalities.iter().map(|w| bt.mul_vec(w)).collect();
        RationalCone::from_hrep(basis.cols(), &eqs, &ineqs)
    }
}

/// Triangulate a pointed cone given by extreme rays into simplicial
/// subcones: pyramids from the first ray over the facets avoiding it.
fn triangulate(ambient: usize, rays: &[Vec<BigInt>]) -> Vec<Vec<Vec<BigInt>>> {
    let rank = rows_matrix(rays, ambient).rank();
    if rays.len() == rank {
        return vec![rays.to_vec()];
    }
    let apex = &rays[0];
    let (_, facets) = hrep_from_generators(ambient, rays);
    let mut out = Vec::new();
    for w in &facets {
        if dot(w, apex).is_zero() {
            continue;
        }
        let face_rays: Vec<Vec<BigInt>> = rays
            .iter()
            .filter(|r| dot(w, r).is_zero())
            .cloned()
            .collect();
        for simplex in triangulate(ambient, &face_rays) {
            let mut s = simplex;
            s.push(apex.clone());
            out.push(s);
        }
    }
    out
}

/// Lattice points of the half-open fundamental parallelepiped of a
/// full-rank simplicial cone (columns of `rays`), excluding the origin.
fn parallelepiped_points(rays: &IntMatrix) -> Vec<Vec<BigInt>> {
    let r = rays.rows();
    assert_eq!(rays.cols(), r);
    let ck = crate::zmodule::cokernel(rays);
    let order = ck
        .group
        .order()
        .expect("simplicial cone matrix must be full rank");
    if order.is_one() {
        return vec![];
    }
    let mut scaled = IntMatrix::zero(r, r);
    for i in 0..r {
        scaled.set(i, i, order.clone());
    }
    let adj = rays
        .solve_matrix(&scaled)
        .expect("group order annihilates the cokernel");
    let mut out = Vec::new();
    for class in ck.group.elements() {
        if class.iter().all(|c| c.is_zero()) {
            continue;
        }
        let x = ck.lift(&class);
        let lam_num = adj.mul_vec(&x);
        let floors: Vec<BigInt> = lam_num.iter().map(|l| l.div_floor(&order)).collect();
        let shift = rays.mul_vec(&floors);
        let reduced: Vec<BigInt> = x.iter().zip(shift.iter()).map(|(a, b)| a - b).collect();
        out.push(reduced);
    }
    out
}

/// Minimal generating set of cone ∩ lattice for a strongly convex cone.
///
/// Triangulates the cone, collects extreme rays plus the fundamental
/// parallelepiped points of every simplex, removes every candidate that
/// splits as a sum of two nonzero monoid elements, and re-verifies that the
/// survivors still reach every candidate.
pub fn hilbert_basis(cone: &RationalCone) -> Result<Vec<Vec<BigInt>>> {
    if !cone.is_strongly_convex() {
        return Err(Error::precondition("not strongly convex"));
    }
    if cone.rays.is_empty() {
        return Ok(vec![]);
    }
    // Work in coordinates on the saturated span so the cone is full rank.
    let basis = rows_matrix(&cone.equations, cone.ambient).kernel();
    let r = basis.cols();
    let ray_cols = IntMatrix::from_columns(&cone.rays, cone.ambient);
    let coords = basis
        .solve_matrix(&ray_cols)
        .expect("extreme rays lie in the saturated span");
    let span_rays: Vec<Vec<BigInt>> = (0..coords.cols()).map(|j| coords.column(j)).collect();
    let span_cone = RationalCone::from_generators(r, &span_rays);
    let facets = span_cone.inequalities().to_vec();
    let in_cone = |v: &[BigInt]| facets.iter().all(|w| !dot(w, v).is_negative());

    let mut candidates: BTreeSet<Vec<BigInt>> = span_cone.extreme_rays().iter().cloned().collect();
    for simplex in triangulate(r, span_cone.extreme_rays()) {
        let m = IntMatrix::from_columns(&simplex, r);
        for p in parallelepiped_points(&m) {
            candidates.insert(p);
        }
    }
    let candidates: Vec<Vec<BigInt>> = candidates.into_iter().collect();

    let mut minimal: Vec<Vec<BigInt>> = Vec::new();
    for h in &candidates {
        let reducible = candidates.iter().any(|c| {
            if c == h {
                return false;
            }
            let diff: Vec<BigInt> = h.iter().zip(c.iter()).map(|(a, b)| a - b).collect();
            in_cone(&diff)
        });
        if !reducible {
            minimal.push(h.clone());
        }
    }

    // Every candidate must decompose over the minimal set.
    let minimal_set: BTreeSet<Vec<BigInt>> = minimal.iter().cloned().collect();
    let mut reachable: BTreeSet<Vec<BigInt>> = minimal_set.clone();
    for c in &candidates {
        if !reach(c, &minimal, &in_cone, &mut reachable) {
            return Err(Error::internal(
                "lattice point generation check failed in hilbert_basis",
            ));
        }
    }

    let mut out: Vec<Vec<BigInt>> = minimal.iter().map(|h| basis.mul_vec(h)).collect();
    out.sort();
    Ok(out)
}

fn reach(
    target: &[BigInt],
    basis: &[Vec<BigInt>],
    in_cone: &impl Fn(&[BigInt]) -> bool,
    known: &mut BTreeSet<Vec<BigInt>>,
) -> bool {
    if target.iter().all(|x| x.is_zero()) || known.contains(target) {
        return true;
    }
    for b in basis {
        let diff: Vec<BigInt> = target.iter().zip(b.iter()).map(|(a, c)| a - c).collect();
        if diff.iter().all(|x| x.is_zero())
            || (in_cone(&diff) && reach(&diff, basis, in_cone, known))
        {
            known.insert(target.to_vec());
            return true;
        }
    }
    false
}

/// Enumerate {x ∈ ℤ^d : a·x ≥ rhs} for a bounded system, in lexicographic
/// order. Errors when the recession cone is nonzero.
pub fn lattice_points(a: &IntMatrix, rhs: &[BigInt]) -> Result<Vec<Vec<BigInt>>> {
    assert_eq!(a.rows(), rhs.len());
    let d = a.cols();
    let recession: Vec<Vec<BigInt>> = (0..a.rows()).map(|i| a.row(i)).collect();
    let rec_cone = RationalCone::from_inequalities(d, &recession);
    if rec_cone.dim() != 0 {
        return Err(Error::precondition("unbounded polytope"));
    }
    let rows: Vec<(Vec<BigInt>, BigInt)> =
        (0..a.rows()).map(|i| (a.row(i), rhs[i].clone())).collect();
    Ok(enumerate_slices(&rows, d))
}

fn enumerate_slices(rows: &[(Vec<BigInt>, BigInt)], d: usize) -> Vec<Vec<BigInt>> {
    if d == 0 {
        let feasible = rows.iter().all(|(_, b)| !b.is_positive());
        return if feasible { vec![vec![]] } else { vec![] };
    }
    let last = d - 1;
    // Project out the last variable with integer-multiplier combinations,
    // tightening right-hand sides by integrality as we go.
    let mut projected: BTreeSet<(Vec<BigInt>, BigInt)> = BTreeSet::new();
    let lower: Vec<&(Vec<BigInt>, BigInt)> =
        rows.iter().filter(|(c, _)| c[last].is_positive()).collect();
    let upper: Vec<&(Vec<BigInt>, BigInt)> =
        rows.iter().filter(|(c, _)| c[last].is_negative()).collect();
    for (c, b) in rows.iter().filter(|(c, _)| c[last].is_zero()) {
        let red = tighten(&c[..last], b);
        projected.insert(red);
    }
    for (cl, bl) in &lower {
        for (cu, bu) in &upper {
            let p = &cl[last];
            let q = &cu[last];
            // (-q)·lower + p·upper eliminates the last variable.
            let coeffs: Vec<BigInt> = (0..last).map(|i| -q * &cl[i] + p * &cu[i]).collect();
            let b = -q * bl + p * bu;
            projected.insert(tighten(&coeffs, &b));
        }
    }
    let projected: Vec<(Vec<BigInt>, BigInt)> = projected.into_iter().collect();
    let prefixes = enumerate_slices(&projected, last);

    let mut out = Vec::new();
    for prefix in prefixes {
        let mut lo: Option<BigInt> = None;
        let mut hi: Option<BigInt> = None;
        let mut feasible = true;
        for (c, b) in rows {
            let partial: BigInt = (0..last).map(|i| &c[i] * &prefix[i]).sum();
            let beta = b - partial;
            if c[last].is_positive() {
                let bound = ceil_div(&beta, &c[last]);
                lo = Some(match lo {
                    None => bound,
                    Some(x) => x.max(bound),
                });
            } else if c[last].is_negative() {
                let bound = beta.div_floor(&c[last]);
                hi = Some(match hi {
                    None => bound,
                    Some(x) => x.min(bound),
                });
            } else if beta.is_positive() {
                feasible = false;
                break;
            }
        }
        if !feasible {
            continue;
        }
        let (lo, hi) = match (lo, hi) {
            (Some(l), Some(h)) => (l, h),
            // boundedness was certified up front
            _ => unreachable!("missing bound despite zero recession cone"),
        };
        let mut v = lo;
        while v <= hi {
            let mut point = prefix.clone();
            point.push(v.clone());
            out.push(point);
            v += 1;
        }
    }
    out
}

/// Divide the coefficient row by its gcd, rounding the right-hand side up;
/// this is valid for integer points and keeps coefficients small.
fn tighten(coeffs: &[BigInt], b: &BigInt) -> (Vec<BigInt>, BigInt) {
    let mut g = BigInt::zero();
    for c in coeffs {
        g = g.gcd(c);
    }
    if g.is_zero() || g.is_one() {
        return (coeffs.to_vec(), b.clone());
    }
    let reduced: Vec<BigInt> = coeffs.iter().map(|c| c / &g).collect();
    (reduced, ceil_div(b, &g))
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -(-a).div_floor(b)
}

/// Nef cone of a smooth projective fan, expressed in the canonical
/// coordinates of the (free) class group together with the divisor-lifting
/// section used to derive it.
#[derive(Clone, Debug)]
pub struct NefData {
    /// section of deg: class coordinates → divisor coefficients
    pub section: IntMatrix,
    /// the nef cone in class coordinates
    pub cone: RationalCone,
}

impl NefData {
    pub fn contains_class(&self, class: &[BigInt]) -> bool {
        self.cone.contains(class)
    }
}

/// Deterministic integer section of the degree map: class coordinates to
/// divisor coefficients, built from the Hermite pivot columns.
pub fn degree_section(div: &DivisorTheory) -> Result<IntMatrix> {
    if !div.cl_group().torsion_factors().is_empty() {
        return Err(Error::precondition("class group has torsion"));
    }
    let d = div.degree_matrix();
    let r = d.rows();
    let (h, v, pivots) = d.hermite_columns();
    if pivots.len() != r {
        return Err(Error::internal("degree map is not surjective"));
    }
    let h1 = h.submatrix(&(0..r).collect::<Vec<_>>(), &(0..r).collect::<Vec<_>>());
    let v1 = v.submatrix(
        &(0..v.rows()).collect::<Vec<_>>(),
        &(0..r).collect::<Vec<_>>(),
    );
    let section = v1.mul(&h1.inverse_unimodular());
    if !d.mul(&section).is_identity() {
        return Err(Error::internal("degree section verification failed"));
    }
    Ok(section)
}

/// Support function values on a maximal cone: the unique m with
/// ⟨m, u_ρ⟩ = −a_ρ for the cone's rays (smooth case).
fn cone_support_point(fan: &Fan, cone_idx: usize, coeffs: &[BigInt]) -> Vec<BigInt> {
    let sigma = &fan.max_cones()[cone_idx];
    let cols: Vec<Vec<BigInt>> = sigma.iter().map(|&r| fan.ray(r).to_vec()).collect();
    let u = IntMatrix::from_columns(&cols, fan.rank());
    let ut_inv = u.transpose().inverse_unimodular();
    let neg_a: Vec<BigInt> = sigma.iter().map(|&r| -&coeffs[r]).collect();
    ut_inv.mul_vec(&neg_a)
}

/// Nef test for a torus-invariant divisor on a smooth complete fan, by
/// support function convexity across every maximal cone.
pub fn is_nef(fan: &Fan, d: &TDivisor) -> Result<bool> {
    if !fan.is_smooth() {
        return Err(Error::precondition("fan is not smooth"));
    }
    if !fan.is_complete() {
        return Err(Error::precondition("fan is not complete"));
    }
    let coeffs = d.coefficients();
    assert_eq!(coeffs.len(), fan.rays().len());
    for (ci, sigma) in fan.max_cones().iter().enumerate() {
        let m = cone_support_point(fan, ci, coeffs);
        for (rho, u) in fan.rays().iter().enumerate() {
            if sigma.contains(&rho) {
                continue;
            }
            if (dot(&m, u) + &coeffs[rho]).is_negative() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Nef cone of a smooth projective fan, with redundant inequalities pruned.
pub fn nef_cone(fan: &Fan, div: &DivisorTheory) -> Result<NefData> {
    if !fan.is_smooth() {
        return Err(Error::precondition("fan is not smooth"));
    }
    if !fan.is_complete() {
        return Err(Error::precondition("fan is not complete"));
    }
    if !fan.is_projective() {
        return Err(Error::precondition("fan is not projective"));
    }
    let section = degree_section(div)?;
    let cl_rank = section.cols();
    let nrays = fan.rays().len();

    let mut covectors: BTreeSet<Vec<BigInt>> = BTreeSet::new();
    for sigma in fan.max_cones().iter() {
        // m_σ depends linearly on the divisor: build the covector of
        // a ↦ ⟨m_σ(a), u_ρ⟩ + a_ρ for each ρ outside σ, then restrict to
        // class coordinates through the section.
        let cols: Vec<Vec<BigInt>> = sigma.iter().map(|&r| fan.ray(r).to_vec()).collect();
        let u = IntMatrix::from_columns(&cols, fan.rank());
        let ut_inv = u.transpose().inverse_unimodular();
        for (rho, u_rho) in fan.rays().iter().enumerate() {
            if sigma.contains(&rho) {
                continue;
            }
            let m_row = ut_inv.transpose().mul_vec(u_rho);
            let mut w = vec![BigInt::zero(); nrays];
            w[rho] = BigInt::one();
            for (k, &r) in sigma.iter().enumerate() {
                w[r] -= &m_row[k];
            }
            let on_classes = section.transpose().mul_vec(&w);
            covectors.insert(on_classes);
        }
    }
    let rows: Vec<Vec<BigInt>> = covectors.into_iter().collect();
    let cone = RationalCone::from_inequalities(cl_rank, &rows);
    if cone.dim() != cl_rank {
        return Err(Error::internal(
            "nef cone of a projective fan must be full dimensional",
        ));
    }
    Ok(NefData { section, cone })
}

/// Number of global sections of the line bundle attached to a divisor:
/// lattice points of {m : ⟨m, u_ρ⟩ ≥ −a_ρ}.
pub fn h0(fan: &Fan, d: &TDivisor) -> Result<BigInt> {
    let coeffs = d.coefficients();
    assert_eq!(coeffs.len(), fan.rays().len());
    let rows: Vec<Vec<BigInt>> = fan.rays().to_vec();
    let a = rows_matrix(&rows, fan.rank());
    let rhs: Vec<BigInt> = coeffs.iter().map(|c| -c).collect();
    let pts = lattice_points(&a, &rhs)?;
    Ok(BigInt::from(pts.len()))
}

/// Exact simplex (Bland's rule) for max c·x subject to A·x ≤ b, x ≥ 0,
/// with b ≥ 0 so the slack basis is feasible. Returns None when unbounded.
fn simplex_max(
    a: &[Vec<BigRational>],
    b: &[BigRational],
    c: &[BigRational],
) -> Option<BigRational> {
    let m = a.len();
    let n = c.len();
    let width = n + m + 1;
    let mut tab: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = vec![BigRational::zero(); width];
        row[..n].clone_from_slice(&a[i]);
        row[n + i] = BigRational::one();
        row[width - 1] = b[i].clone();
        tab.push(row);
    }
    let mut obj = vec![BigRational::zero(); width];
    for j in 0..n {
        obj[j] = -c[j].clone();
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    loop {
        let Some(enter) = (0..width - 1).find(|&j| obj[j].is_negative()) else {
            return Some(obj[width - 1].clone());
        };
        let mut leave: Option<usize> = None;
        let mut best: Option<BigRational> = None;
        for i in 0..m {
            if !tab[i][enter].is_positive() {
                continue;
            }
            let ratio = &tab[i][width - 1] / &tab[i][enter];
            let better = match &best {
                None => true,
                Some(r) => ratio < *r || (ratio == *r && basis[i] < basis[leave.unwrap()]),
            };
            if better {
                best = Some(ratio);
                leave = Some(i);
            }
        }
        let Some(li) = leave else {
            return None;
        };
        let piv = tab[li][enter].clone();
        for x in tab[li].iter_mut() {
            *x /= &piv;
        }
        for i in 0..m {
            if i == li || tab[i][enter].is_zero() {
                continue;
            }
            let f = tab[i][enter].clone();
            for j in 0..width {
                let delta = &f * &tab[li][j];
                tab[i][j] -= delta;
            }
        }
        if !obj[enter].is_zero() {
            let f = obj[enter].clone();
            for j in 0..width {
                let delta = &f * &tab[li][j];
                obj[j] -= delta;
            }
        }
        basis[li] = enter;
    }
}

/// Does a vector w exist with M·w strictly positive in every coordinate?
/// Decided exactly by maximizing a slack variable bounded by 1; by
/// homogeneity the optimum is either 0 or 1.
pub fn exists_strictly_positive_combination(m: &IntMatrix) -> bool {
    let rows = m.rows();
    if rows == 0 {
        return true;
    }
    let k = m.cols();
    let nvars = 2 * k + 1;
    let mut a: Vec<Vec<BigRational>> = Vec::with_capacity(rows + 1);
    let mut b: Vec<BigRational> = Vec::with_capacity(rows + 1);
    for i in 0..rows {
        let mut row = vec![BigRational::zero(); nvars];
        for j in 0..k {
            let x = BigRational::from_integer(m.get(i, j).clone());
            row[j] = -x.clone();
            row[k + j] = x;
        }
        row[2 * k] = BigRational::one();
        a.push(row);
        b.push(BigRational::zero());
    }
    let mut cap = vec![BigRational::zero(); nvars];
    cap[2 * k] = BigRational::one();
    a.push(cap);
    b.push(BigRational::one());
    let mut c = vec![BigRational::zero(); nvars];
    c[2 * k] = BigRational::one();
    let opt = simplex_max(&a, &b, &c).expect("slack objective is bounded by construction");
    opt.is_positive()
}

/// Group a list of vectors by value, preserving deterministic order.
pub fn sorted_unique(vs: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let set: BTreeSet<Vec<BigInt>> = vs.iter().cloned().collect();
    set.into_iter().collect()
}

/// Map from vector to multiplicity, for weight decompositions.
pub fn multiplicities(vs: &[Vec<BigInt>]) -> BTreeMap<Vec<BigInt>, usize> {
    let mut m = BTreeMap::new();
    for v in vs {
        *m.entry(v.clone()).or_insert(0) += 1;
    }
    m
}
