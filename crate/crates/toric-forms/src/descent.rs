//! Classification of twisted forms over desk-scale field models: cocycle
//! classes as homomorphisms up to conjugacy, twisted centers and canonical
//! tori, the component-indexed set H²(k, S → J) with its neutral elements,
//! the torus-side classification over the real model, and Brauer
//! fingerprints rendered through a stable class set ω.
//!
//! Over the real model, torus cohomology is computed on cocharacter
//! lattices through the identifications H¹(ℝ, T) ≅ Ĥ⁻¹(C₂, X_*T) and
//! H²(ℝ, T) ≅ Ĥ⁰(C₂, X_*T). The connecting map of the dualized divisor
//! sequence 0 → Cl* → ℤ^Σ(1)* → N → 0 is normalized as lift, then norm,
//! then read off Cl*-coordinates.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Deserialize;
use std::collections::{BTreeMap, BTreeSet};

use crate::autgroup::{
    class_aut_group, fan_automorphisms, weight_decomposition, ClassAutGroup, ToricWeylGroup,
    WeightDecomposition,
};
use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::glattice::{
    compose_action, cyclic_group_regular, tate_minus1, tate_zero, FiniteMatrixGroup, GLattice,
    GroupHom,
};
use crate::omega::OmegaSet;
use crate::zmodule::{FGAbelianGroup, IntMatrix, Subquotient};

/// A desk-scale stand-in for a field: its small Galois quotient together
/// with enough Brauer data to evaluate cohomological fingerprints.
#[derive(Clone, Debug)]
pub enum GaloisModel {
    /// Γ = C₂, Brauer group ℤ/2 over the fixed field and 0 over its
    /// quadratic closure.
    Real,
    /// Γ cyclic of the given order with all Brauer groups zero and
    /// vanishing H¹ for connected groups.
    Finite { order: usize },
    /// An explicit finite group with a finite abelian Brauer group
    /// assigned to every subgroup (indexed into `gamma.subgroups()`).
    Abstract {
        gamma: FiniteMatrixGroup,
        brauer: BTreeMap<usize, Vec<BigInt>>,
    },
}

impl GaloisModel {
    pub fn gamma(&self) -> FiniteMatrixGroup {
        match self {
            GaloisModel::Real => cyclic_group_regular(2),
            GaloisModel::Finite { order } => cyclic_group_regular(*order),
            GaloisModel::Abstract { gamma, .. } => gamma.clone(),
        }
    }

    pub fn label(&self) -> String {
        match self {
            GaloisModel::Real => "real".to_string(),
            GaloisModel::Finite { order } => format!("finite(C{})", order),
            GaloisModel::Abstract { .. } => "abstract".to_string(),
        }
    }

    /// Parse {"group":{"rank":…,"generators":[[[…]]]},"brauer":{"0":[…]}}.
    pub fn from_json_str(s: &str) -> Result<GaloisModel> {
        #[derive(Deserialize)]
        struct GroupJson {
            rank: usize,
            generators: Vec<Vec<Vec<i64>>>,
        }
        #[derive(Deserialize)]
        struct ModelJson {
            group: GroupJson,
            brauer: BTreeMap<String, Vec<i64>>,
        }
        let parsed: ModelJson = serde_json::from_str(s)?;
        let gens: Vec<IntMatrix> = parsed
            .group
            .generators
            .iter()
            .map(|rows| IntMatrix::from_rows(rows))
            .collect();
        let gamma = FiniteMatrixGroup::from_generators(parsed.group.rank, &gens)?;
        let subgroup_count = gamma.subgroups().len();
        let mut brauer = BTreeMap::new();
        for (key, factors) in parsed.brauer {
            let idx: usize = key
                .parse()
                .map_err(|_| Error::input("brauer keys must be subgroup indices"))?;
            if idx >= subgroup_count {
                return Err(Error::input("brauer key exceeds the subgroup count"));
            }
            brauer.insert(idx, factors.into_iter().map(BigInt::from).collect());
        }
        for idx in 0..subgroup_count {
            if !brauer.contains_key(&idx) {
                return Err(Error::input(format!(
                    "brauer group missing for subgroup {}",
                    idx
                )));
            }
        }
        Ok(GaloisModel::Abstract { gamma, brauer })
    }
}

fn extend_hom(
    gamma: &FiniteMatrixGroup,
    target: &FiniteMatrixGroup,
    gen_images: &[usize],
) -> Option<Vec<usize>> {
    let mut images = vec![usize::MAX; gamma.order()];
    images[gamma.identity_index()] = target.identity_index();
    let mut frontier = vec![gamma.identity_index()];
    while let Some(x) = frontier.pop() {
        for (k, &g) in gamma.generator_indices().iter().enumerate() {
            let gx = gamma.multiply(g, x);
            let img = target.multiply(gen_images[k], images[x]);
            if images[gx] == usize::MAX {
                images[gx] = img;
                frontier.push(gx);
            } else if images[gx] != img {
                return None;
            }
        }
    }
    if images.iter().any(|&i| i == usize::MAX) {
        return None;
    }
    Some(images)
}

fn conjugated_images(target: &FiniteMatrixGroup, t: usize, images: &[usize]) -> Vec<usize> {
    let ti = target.inverse(t);
    images
        .iter()
        .map(|&x| target.multiply(target.multiply(t, x), ti))
        .collect()
}

/// All homomorphisms Γ → target up to target-conjugacy, each represented
/// by the lexicographically least image tuple of its class, sorted.
pub fn hom_classes(gamma: &FiniteMatrixGroup, target: &FiniteMatrixGroup) -> Vec<GroupHom> {
    let gens = gamma.generator_indices().len();
    let mut all: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut tuple = vec![0usize; gens];
    loop {
        if let Some(images) = extend_hom(gamma, target, &tuple) {
            all.insert(images);
        }
        // advance the mixed-radix counter
        let mut pos = 0;
        loop {
            if pos == gens {
                break;
            }
            tuple[pos] += 1;
            if tuple[pos] < target.order() {
                break;
            }
            tuple[pos] = 0;
            pos += 1;
        }
        if pos == gens {
            break;
        }
        if gens == 0 {
            break;
        }
    }
    if gens == 0 {
        // trivial source group: only the trivial homomorphism
        all.insert(vec![target.identity_index(); gamma.order()]);
    }
    let mut reps: BTreeSet<Vec<usize>> = BTreeSet::new();
    for images in &all {
        let canon = (0..target.order())
            .map(|t| conjugated_images(target, t, images))
            .min()
            .expect("target group is nonempty");
        reps.insert(canon);
    }
    reps.into_iter()
        .map(|images| GroupHom {
            source: gamma.clone(),
            images,
        })
        .collect()
}

/// Γ-orbits on the weight classes Λ through a homomorphism into J; each
/// orbit is one factor of the twisted center, a field of degree equal to
/// the orbit size.
pub fn twisted_center(
    c: &GroupHom,
    j: &ClassAutGroup,
    wd: &WeightDecomposition,
) -> Result<Vec<Vec<usize>>> {
    c.verify(j.group())?;
    // permutation of Λ induced by each J element in the image
    let perm_of = |jelt: usize| -> Result<Vec<usize>> {
        let m = j.group().element(jelt);
        wd.classes
            .iter()
            .map(|cl| {
                let image = m.mul_vec(cl);
                wd.classes
                    .binary_search(&image)
                    .map_err(|_| Error::internal("class automorphism does not permute the weights"))
            })
            .collect()
    };
    let perms: Vec<Vec<usize>> = c
        .images
        .iter()
        .map(|&ji| perm_of(ji))
        .collect::<Result<_>>()?;
    let n = wd.classes.len();
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
        while let Some(x) = stack.pop() {
            for p in &perms {
                if orbit.insert(p[x]) {
                    seen[p[x]] = true;
                    stack.push(p[x]);
                }
            }
        }
        orbits.push(orbit.into_iter().collect());
    }
    Ok(orbits)
}

/// Shape of the étale algebra of the canonical maximal torus: one factor
/// per Γ-orbit of Λ, of degree the orbit size, with multiplicity n_λ.
pub fn canonical_torus_shape(
    c: &GroupHom,
    j: &ClassAutGroup,
    wd: &WeightDecomposition,
) -> Result<Vec<(usize, usize)>> {
    let orbits = twisted_center(c, j, wd)?;
    orbits
        .into_iter()
        .map(|orbit| {
            let n = wd.multiplicities[orbit[0]];
            for &cl in &orbit[1..] {
                if wd.multiplicities[cl] != n {
                    return Err(Error::internal(
                        "weight multiplicities differ along one orbit",
                    ));
                }
            }
            Ok((orbit.len(), n))
        })
        .collect()
}

/// One component of H²(k, S → J): the abelian group attached to a
/// neutralization class, its elements reduced modulo the centralizer of
/// the image of c in J.
#[derive(Clone, Debug)]
pub struct H2Component {
    /// representative c: Γ → J
    pub hom: GroupHom,
    /// component group before the centralizer quotient
    pub group: FGAbelianGroup,
    /// canonical orbit representatives, sorted; contains the neutral zero
    pub elements: Vec<Vec<BigInt>>,
    canon: BTreeMap<Vec<BigInt>, Vec<BigInt>>,
    sq: Option<Subquotient>,
    /// per Γ-orbit of the character basis: (orbit, stabilizer subgroup
    /// index into gamma.subgroups()), for permutation models only
    orbit_fields: Option<Vec<(Vec<usize>, usize)>>,
}

impl H2Component {
    pub fn size(&self) -> usize {
        self.elements.len()
    }

    /// Orbit/field data of a permutation-model component: each Γ-orbit of
    /// the character basis with the subgroup index of its stabilizer.
    pub fn orbit_fields(&self) -> Option<&[(Vec<usize>, usize)]> {
        self.orbit_fields.as_deref()
    }

    pub fn neutral(&self) -> Vec<BigInt> {
        self.group.zero_element()
    }

    pub fn is_neutral(&self, coords: &[BigInt]) -> bool {
        self.group.is_zero_element(&self.canonical(coords))
    }

    /// Reduce coordinates to the lexicographically least member of their
    /// centralizer orbit.
    pub fn canonical(&self, coords: &[BigInt]) -> Vec<BigInt> {
        let reduced = self.group.reduce(coords);
        self.canon
            .get(&reduced)
            .cloned()
            .expect("coordinates lie in the component group")
    }

    /// Order of the class in the component group.
    pub fn period(&self, coords: &[BigInt]) -> BigInt {
        self.group
            .element_order(&self.group.reduce(coords))
            .expect("component groups are finite")
    }

    /// Class of a Γ-fixed cocharacter vector (real model components).
    pub fn class_of_fixed_vector(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        match &self.sq {
            Some(sq) => Ok(sq.class_of(v)),
            None => Err(Error::precondition(
                "component has no cocharacter realization",
            )),
        }
    }

    /// A Γ-fixed cocharacter vector representing a class (real model).
    pub fn fixed_vector_of_class(&self, coords: &[BigInt]) -> Result<Vec<BigInt>> {
        match &self.sq {
            Some(sq) => Ok(sq.lift(&self.group.reduce(coords))),
            None => Err(Error::precondition(
                "component has no cocharacter realization",
            )),
        }
    }
}

/// The set H²(k, S → J): one component per homomorphism class Γ → J.
#[derive(Clone, Debug)]
pub struct H2Set {
    pub components: Vec<H2Component>,
}

impl H2Set {
    /// Index of the component whose representative is conjugate to the
    /// given homomorphism, together with a conjugator t such that
    /// rep(γ) = t·c(γ)·t⁻¹.
    pub fn component_of(
        &self,
        c: &GroupHom,
        j_group: &FiniteMatrixGroup,
    ) -> Result<(usize, usize)> {
        for (k, comp) in self.components.iter().enumerate() {
            for t in 0..j_group.order() {
                if conjugated_images(j_group, t, &c.images) == comp.hom.images {
                    return Ok((k, t));
                }
            }
        }
        Err(Error::internal("homomorphism has no component"))
    }
}

fn orbit_canonicalize(
    elements: &[Vec<BigInt>],
    act: impl Fn(&[BigInt]) -> Vec<Vec<BigInt>>,
) -> (Vec<Vec<BigInt>>, BTreeMap<Vec<BigInt>, Vec<BigInt>>) {
    let mut canon: BTreeMap<Vec<BigInt>, Vec<BigInt>> = BTreeMap::new();
    let mut reps: BTreeSet<Vec<BigInt>> = BTreeSet::new();
    for e in elements {
        if canon.contains_key(e) {
            continue;
        }
        let mut orbit: BTreeSet<Vec<BigInt>> = BTreeSet::new();
        orbit.insert(e.clone());
        let mut stack = vec![e.clone()];
        while let Some(x) = stack.pop() {
            for y in act(&x) {
                if orbit.insert(y.clone()) {
                    stack.push(y);
                }
            }
        }
        let rep = orbit.iter().next().cloned().expect("orbit is nonempty");
        for member in orbit {
            canon.insert(member, rep.clone());
        }
        reps.insert(rep);
    }
    (reps.into_iter().collect(), canon)
}

fn permutation_of_matrix(m: &IntMatrix) -> Option<Vec<usize>> {
    let n = m.rows();
    if m.cols() != n {
        return None;
    }
    let mut pi = vec![usize::MAX; n];
    for j in 0..n {
        let mut hit = None;
        for i in 0..n {
            let v = m.get(i, j);
            if v.is_zero() {
                continue;
            }
            if *v != BigInt::from(1) || hit.is_some() {
                return None;
            }
            hit = Some(i);
        }
        let i = hit?;
        if pi[j] != usize::MAX {
            return None;
        }
        pi[j] = i;
    }
    let mut seen = vec![false; n];
    for &i in &pi {
        if seen[i] {
            return None;
        }
        seen[i] = true;
    }
    Some(pi)
}

/// Compute H²(k, S → J) component by component. The character lattice of
/// S is given as a J-lattice; over the real model components are
/// Ĥ⁰(C₂, twisted cocharacters), over a finite model they are trivial,
/// and over an abstract model the lattice must be a permutation lattice,
/// each component being the product of the Brauer groups of the orbit
/// fields.
pub fn h2_set(model: &GaloisModel, s_lattice: &GLattice, j: &ClassAutGroup) -> Result<H2Set> {
    if s_lattice.group().elements() != j.group().elements() {
        return Err(Error::precondition(
            "character lattice must carry the class automorphism action",
        ));
    }
    let gamma = model.gamma();
    let classes = hom_classes(&gamma, j.group());
    let gamma_all: Vec<usize> = (0..gamma.order()).collect();
    let dual = s_lattice.dual();

    let mut components = Vec::new();
    for hom in classes {
        let centralizer = {
            let image: Vec<usize> = hom.images.clone();
            j.group().centralizer(&image)
        };
        let component = match model {
            GaloisModel::Real => {
                let twisted = compose_action(&hom, &dual)?;
                let sq = tate_zero(&gamma_all, &twisted);
                let group = sq.group().clone();
                let elements = group.elements();
                let (reps, canon) = orbit_canonicalize(&elements, |x| {
                    centralizer
                        .iter()
                        .map(|&z| sq.class_of(&dual.action(z).mul_vec(&sq.lift(x))))
                        .collect()
                });
                H2Component {
                    hom,
                    group,
                    elements: reps,
                    canon,
                    sq: Some(sq),
                    orbit_fields: None,
                }
            }
            GaloisModel::Finite { .. } => {
                let group = FGAbelianGroup::trivial();
                let zero = group.zero_element();
                let mut canon = BTreeMap::new();
                canon.insert(zero.clone(), zero.clone());
                H2Component {
                    hom,
                    group,
                    elements: vec![zero],
                    canon,
                    sq: None,
                    orbit_fields: None,
                }
            }
            GaloisModel::Abstract { gamma, brauer } => {
                let perms: Vec<Vec<usize>> = hom
                    .images
                    .iter()
                    .map(|&ji| permutation_of_matrix(s_lattice.action(ji)))
                    .collect::<Option<_>>()
                    .ok_or_else(|| {
                        Error::precondition(
                            "abstract model needs a permutation character lattice; \
                             represent the class via fingerprint_in_P",
                        )
                    })?;
                let subgroups = gamma.subgroups();
                let rank = s_lattice.rank();
                let mut seen = vec![false; rank];
                let mut orbit_fields: Vec<(Vec<usize>, usize)> = Vec::new();
                let mut factors: Vec<BigInt> = Vec::new();
                let mut offsets: Vec<usize> = Vec::new();
                for start in 0..rank {
                    if seen[start] {
                        continue;
                    }
                    let mut orbit = BTreeSet::new();
                    orbit.insert(start);
                    seen[start] = true;
                    let mut stack = vec![start];
                    while let Some(x) = stack.pop() {
                        for p in perms.iter() {
                            if orbit.insert(p[x]) {
                                seen[p[x]] = true;
                                stack.push(p[x]);
                            }
                        }
                    }
                    let orbit: Vec<usize> = orbit.into_iter().collect();
                    let stab: Vec<usize> = (0..gamma.order())
                        .filter(|&g| perms[g][orbit[0]] == orbit[0])
                        .collect();
                    let idx = subgroups
                        .iter()
                        .position(|s| *s == stab)
                        .ok_or_else(|| Error::internal("stabilizer is not a subgroup"))?;
                    let assigned = brauer.get(&idx).ok_or_else(|| {
                        Error::input(format!("brauer group missing for subgroup {}", idx))
                    })?;
                    if assigned.iter().any(|f| f <= &BigInt::zero()) {
                        return Err(Error::input("brauer groups must be finite"));
                    }
                    offsets.push(factors.len());
                    factors.extend(assigned.iter().cloned());
                    orbit_fields.push((orbit, idx));
                }
                // keep the factor list aligned with the orbit offsets
                let group = FGAbelianGroup {
                    invariant_factors: factors,
                };
                let elements = group.elements();
                // centralizer elements permute the character basis and
                // hence the orbits; transport coordinates blockwise
                let cent_perms: Vec<Vec<usize>> = centralizer
                    .iter()
                    .map(|&z| {
                        permutation_of_matrix(s_lattice.action(z)).ok_or_else(|| {
                            Error::precondition(
                                "abstract model needs a permutation character lattice; \
                                 represent the class via fingerprint_in_P",
                            )
                        })
                    })
                    .collect::<Result<_>>()?;
                let orbit_lens: Vec<usize> = orbit_fields
                    .iter()
                    .map(|(_, idx)| brauer[idx].len())
                    .collect();
                let orbit_of_point: BTreeMap<usize, usize> = orbit_fields
                    .iter()
                    .enumerate()
                    .flat_map(|(oi, (orbit, _))| orbit.iter().map(move |&p| (p, oi)))
                    .collect();
                let (reps, canon) = orbit_canonicalize(&elements, |x| {
                    cent_perms
                        .iter()
                        .map(|perm| {
                            let mut out = x.to_vec();
                            for (oi, (orbit, _)) in orbit_fields.iter().enumerate() {
                                let target_orbit = orbit_of_point[&perm[orbit[0]]];
                                if orbit_lens[oi] != orbit_lens[target_orbit] {
                                    continue;
                                }
                                for t in 0..orbit_lens[oi] {
                                    out[offsets[target_orbit] + t] = x[offsets[oi] + t].clone();
                                }
                            }
                            out
                        })
                        .collect()
                });
                H2Component {
                    hom,
                    group,
                    elements: reps,
                    canon,
                    sq: None,
                    orbit_fields: Some(orbit_fields),
                }
            }
        };
        components.push(component);
    }
    Ok(H2Set { components })
}

/// A fingerprint: a component index plus canonical coordinates in the
/// component group.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Fingerprint {
    pub component: usize,
    pub coords: Vec<BigInt>,
    pub neutral: bool,
}

/// Rank decomposition of a real torus: split, circle, and Weil
/// restriction factors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TorusLabel {
    pub split: usize,
    pub circles: usize,
    pub restrictions: usize,
}

/// One torus-side class in the classification.
#[derive(Clone, Debug)]
pub struct NClassRow {
    /// index into the W homomorphism classes
    pub w_class: usize,
    pub torus: Option<TorusLabel>,
    pub fingerprint: Fingerprint,
    /// index of the variety class this row belongs to
    pub variety_class: usize,
}

/// Per-component summary: the underlying neutralization class with its
/// twisted center and canonical torus shapes.
#[derive(Clone, Debug)]
pub struct ComponentSummary {
    /// image of each Γ element under the representative c: Γ → J
    pub hom_images: Vec<usize>,
    pub group: FGAbelianGroup,
    /// number of classes after the centralizer quotient
    pub size: usize,
    /// orbit sizes of Γ on the weight classes
    pub center_orbit_sizes: Vec<usize>,
    /// (field degree, multiplicity) factors of the canonical torus algebra
    pub canonical_torus: Vec<(usize, usize)>,
}

/// Full classification output for one fan over one field model.
#[derive(Clone, Debug)]
pub struct FormsReport {
    pub model: String,
    pub w_class_count: usize,
    pub components: Vec<ComponentSummary>,
    pub rows: Vec<NClassRow>,
    pub variety_class_count: usize,
}

struct RealDescentData {
    w: ToricWeylGroup,
    j: ClassAutGroup,
    wd: WeightDecomposition,
    h2: H2Set,
    gamma: FiniteMatrixGroup,
}

fn real_setup(fan: &Fan) -> Result<RealDescentData> {
    if !fan.is_smooth() {
        return Err(Error::precondition("classification requires a smooth fan"));
    }
    if !fan.is_projective() {
        return Err(Error::precondition(
            "classification requires a projective fan",
        ));
    }
    let div = fan.class_group()?;
    let w = fan_automorphisms(fan)?;
    let j = class_aut_group(&w, &div)?;
    let wd = weight_decomposition(&div);
    let pic = j.class_lattice();
    let h2 = h2_set(&GaloisModel::Real, &pic, &j)?;
    let gamma = cyclic_group_regular(2);
    Ok(RealDescentData {
        w,
        j,
        wd,
        h2,
        gamma,
    })
}

fn component_summaries(
    h2: &H2Set,
    j: &ClassAutGroup,
    wd: &WeightDecomposition,
) -> Result<Vec<ComponentSummary>> {
    h2.components
        .iter()
        .map(|comp| {
            let orbits = twisted_center(&comp.hom, j, wd)?;
            let canonical_torus = canonical_torus_shape(&comp.hom, j, wd)?;
            Ok(ComponentSummary {
                hom_images: comp.hom.images.clone(),
                group: comp.group.clone(),
                size: comp.size(),
                center_orbit_sizes: orbits.iter().map(|o| o.len()).collect(),
                canonical_torus,
            })
        })
        .collect()
}

fn assign_variety_classes(rows: &mut [NClassRow]) -> usize {
    let mut keys: Vec<(usize, Vec<BigInt>)> = rows
        .iter()
        .map(|r| (r.fingerprint.component, r.fingerprint.coords.clone()))
        .collect();
    keys.sort();
    keys.dedup();
    for row in rows.iter_mut() {
        let key = (row.fingerprint.component, row.fingerprint.coords.clone());
        row.variety_class = keys.binary_search(&key).expect("key present");
    }
    keys.len()
}

/// Classify the real forms of the toric variety of a smooth projective
/// fan: one row per torus class (a centralizer orbit in Ĥ⁻¹ of the
/// twisted cocharacter lattice, for each homomorphism class C₂ → W),
/// fingerprinted through the connecting map into Ĥ⁰ of the twisted dual
/// class lattice, and grouped into variety classes by fingerprint.
pub fn classify_forms_real(fan: &Fan) -> Result<FormsReport> {
    let data = real_setup(fan)?;
    let RealDescentData {
        w,
        j,
        wd,
        h2,
        gamma,
    } = data;
    let div = fan.class_group()?;
    let gamma_all: Vec<usize> = (0..gamma.order()).collect();
    let gamma_gen = (0..gamma.order())
        .find(|&i| i != gamma.identity_index())
        .expect("C2 has a non-identity element");

    let w_classes = hom_classes(&gamma, w.group());
    let cochar = w.cocharacter_lattice();
    let rays_cols = IntMatrix::from_columns(fan.rays(), fan.rank());
    let dt = div.degree_matrix().transpose();
    if !rays_cols.mul(&dt).is_zero() {
        return Err(Error::internal("divisor sequence fails exactness"));
    }
    let dual_pic = j.class_lattice().dual();

    let mut rows: Vec<NClassRow> = Vec::new();
    for (wi, cw) in w_classes.iter().enumerate() {
        let twisted_n = compose_action(cw, &cochar)?;
        let hminus = tate_minus1(&gamma_all, &twisted_n);
        let hzero_group = tate_zero(&gamma_all, &twisted_n).group().clone();
        let t = hzero_group.torsion_factors().len();
        let s = hminus.group().torsion_factors().len();
        let n = cochar.rank();
        if (n - t - s) % 2 != 0 {
            return Err(Error::internal(
                "torus decomposition ranks are inconsistent",
            ));
        }
        let torus = TorusLabel {
            split: t,
            circles: s,
            restrictions: (n - t - s) / 2,
        };

        let iw = cw.images[gamma_gen];
        let centralizer = w.group().centralizer(&[iw]);
        let elements = hminus.group().elements();
        let (reps, _) = orbit_canonicalize(&elements, |x| {
            centralizer
                .iter()
                .map(|&z| hminus.class_of(&cochar.action(z).mul_vec(&hminus.lift(x))))
                .collect()
        });

        let cj = GroupHom {
            source: gamma.clone(),
            images: cw.images.iter().map(|&x| j.quotient_map()[x]).collect(),
        };
        let (comp_idx, conj) = h2.component_of(&cj, j.group())?;
        let comp = &h2.components[comp_idx];
        let perm_w = w.group().element(iw);

        for x in reps {
            // connecting map: lift to the ray coordinate lattice, apply
            // the twisted norm, read off dual class coordinates
            let xv = hminus.lift(&x);
            let y = rays_cols
                .solve(&xv)
                .ok_or_else(|| Error::internal("rays fail to span"))?;
            let py = perm_w.mul_vec(&y);
            let z: Vec<BigInt> = y.iter().zip(py.iter()).map(|(a, b)| a + b).collect();
            let v = dt
                .solve(&z)
                .ok_or_else(|| Error::internal("norm fails to land in the dual class lattice"))?;
            let transported = dual_pic.action(conj).mul_vec(&v);
            let coords = comp.canonical(&comp.class_of_fixed_vector(&transported)?);
            let neutral = comp.group.is_zero_element(&coords);
            rows.push(NClassRow {
                w_class: wi,
                torus: Some(torus),
                fingerprint: Fingerprint {
                    component: comp_idx,
                    coords,
                    neutral,
                },
                variety_class: 0,
            });
        }
    }
    let variety_class_count = assign_variety_classes(&mut rows);
    let components = component_summaries(&h2, &j, &wd)?;
    Ok(FormsReport {
        model: "real".to_string(),
        w_class_count: w_classes.len(),
        components,
        rows,
        variety_class_count,
    })
}

/// Classify forms over a finite-field model with Γ cyclic of the given
/// order: torus cohomology vanishes, so the torus classes are exactly the
/// homomorphism classes into W and every fingerprint is neutral; variety
/// classes correspond to homomorphism classes into J.
pub fn classify_forms_finite(fan: &Fan, order: usize) -> Result<FormsReport> {
    if order == 0 {
        return Err(Error::input("finite model order must be positive"));
    }
    let data = {
        if !fan.is_smooth() {
            return Err(Error::precondition("classification requires a smooth fan"));
        }
        if !fan.is_projective() {
            return Err(Error::precondition(
                "classification requires a projective fan",
            ));
        }
        let div = fan.class_group()?;
        let w = fan_automorphisms(fan)?;
        let j = class_aut_group(&w, &div)?;
        let wd = weight_decomposition(&div);
        let pic = j.class_lattice();
        let model = GaloisModel::Finite { order };
        let gamma = model.gamma();
        let h2 = h2_set(&model, &pic, &j)?;
        (w, j, wd, h2, gamma)
    };
    let (w, j, wd, h2, gamma) = data;
    let w_classes = hom_classes(&gamma, w.group());
    let mut rows: Vec<NClassRow> = Vec::new();
    for (wi, cw) in w_classes.iter().enumerate() {
        let cj = GroupHom {
            source: gamma.clone(),
            images: cw.images.iter().map(|&x| j.quotient_map()[x]).collect(),
        };
        let (comp_idx, _) = h2.component_of(&cj, j.group())?;
        let comp = &h2.components[comp_idx];
        rows.push(NClassRow {
            w_class: wi,
            torus: None,
            fingerprint: Fingerprint {
                component: comp_idx,
                coords: comp.neutral(),
                neutral: true,
            },
            variety_class: 0,
        });
    }
    let variety_class_count = assign_variety_classes(&mut rows);
    if variety_class_count != h2.components.len() {
        return Err(Error::internal(
            "finite model must realize every neutralization class",
        ));
    }
    let components = component_summaries(&h2, &j, &wd)?;
    Ok(FormsReport {
        model: format!("finite(C{})", order),
        w_class_count: w_classes.len(),
        components,
        rows,
        variety_class_count,
    })
}

/// A Brauer fingerprint rendered through ω: one factor per Γ-orbit of
/// classes, carrying the orbit, its field degree, and the Brauer class of
/// that field (ℤ/2 rendering over the real model: degree-1 orbits carry
/// the coordinate mod 2, larger orbits the zero group).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrauerFingerprint {
    pub factors: Vec<(Vec<usize>, usize, BigInt)>,
}

impl BrauerFingerprint {
    /// Order-insensitive rendering: sorted (degree, class) pairs.
    pub fn multiset(&self) -> Vec<(usize, BigInt)> {
        let mut out: Vec<(usize, BigInt)> = self
            .factors
            .iter()
            .map(|(_, d, c)| (*d, c.clone()))
            .collect();
        out.sort();
        out
    }
}

/// Push a real-model fingerprint through the map induced by ω: lift the
/// class to a fixed cocharacter vector, pair against the ω classes, and
/// read Brauer classes off the Γ-orbits of ω.
pub fn fingerprint_in_p(
    comp: &H2Component,
    coords: &[BigInt],
    omega: &OmegaSet,
) -> Result<BrauerFingerprint> {
    let gamma = comp.hom.source.clone();
    let v = comp.fixed_vector_of_class(coords)?;
    let k = v.len();
    let omega_t = IntMatrix::from_columns(&omega.classes, k).transpose();
    let image = omega_t.mul_vec(&v);

    // Γ-orbits of the ω classes through c
    let perms: Vec<&Vec<usize>> = comp
        .hom
        .images
        .iter()
        .map(|&ji| &omega.j_action[ji])
        .collect();
    let m = omega.classes.len();
    let mut seen = vec![false; m];
    let mut factors = Vec::new();
    for start in 0..m {
        if seen[start] {
            continue;
        }
        let mut orbit = BTreeSet::new();
        orbit.insert(start);
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for p in &perms {
                if orbit.insert(p[x]) {
                    seen[p[x]] = true;
                    stack.push(p[x]);
                }
            }
        }
        let orbit: Vec<usize> = orbit.into_iter().collect();
        let degree = orbit.len();
        let two = BigInt::from(2);
        let class = if degree == 1 && gamma.order() == 2 {
            ((&image[orbit[0]] % &two) + &two) % &two
        } else {
            BigInt::zero()
        };
        factors.push((orbit, degree, class));
    }
    Ok(BrauerFingerprint { factors })
}

/// ω-labeled rendering of a fingerprint image, canonicalized modulo the
/// centralizer of the component's image permuting ω: the least relabeling
/// of the per-class Brauer value vector. Distinct classes of one
/// component stay distinct here whenever the class lattice is invertible.
pub fn fingerprint_in_p_canonical(
    comp: &H2Component,
    coords: &[BigInt],
    omega: &OmegaSet,
    j: &ClassAutGroup,
) -> Result<Vec<BigInt>> {
    let base = fingerprint_in_p(comp, coords, omega)?;
    let mut value = vec![BigInt::zero(); omega.classes.len()];
    for (orbit, _, class) in &base.factors {
        for &i in orbit {
            value[i] = class.clone();
        }
    }
    let centralizer = j.group().centralizer(&comp.hom.images);
    centralizer
        .iter()
        .map(|&z| {
            let p = &omega.j_action[z];
            let mut out = vec![BigInt::zero(); value.len()];
            for (i, v) in value.iter().enumerate() {
                out[p[i]] = v.clone();
            }
            out
        })
        .min()
        .ok_or_else(|| Error::internal("centralizer contains the identity"))
}
