//! Combinatorial invariants of spherical homogeneous spaces: spherical
//! systems of wonderful varieties, general Luna–Vust data, and weight
//! monoids of affine spaces, together with the action of a diagram
//! automorphism on each of them.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::sync::Arc;

use itertools::Itertools;
use serde_json::{json, Value};

use crate::automorphism::DiagramAutomorphism;
use crate::error::{Error, Result};
use crate::linalg;
use crate::real_form::Sign;
use crate::root_system::{RootSystem, RootVector, Weight};
use crate::{fmt_nodes, NodeSet};

/// Largest rank accepted by [`orbit_closures`].
pub const MAX_ORBIT_RANK: usize = 20;

/// An element of `A`: its pairings with the spherical roots (in the order of
/// the system's `sigma` list) and the simple spherical roots whose
/// `A(α)` contains it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AElement {
    pub pairings: Vec<i64>,
    pub owners: NodeSet,
}

/// `(S^p, Σ, A)` plus the flags the criteria need.
#[derive(Debug, Clone)]
pub struct SphericalSystem {
    pub root_system: Arc<RootSystem>,
    pub sp: NodeSet,
    pub sigma: Vec<RootVector>,
    pub a: Vec<AElement>,
    pub spherically_closed: bool,
    /// Every point has a self-normalizing stabilizer.
    pub strict: bool,
    /// Explicit `ω_X`, overriding the sum of color weights.
    pub omega_x: Option<Weight>,
    /// Diagram automorphism from this system's labeling to the catalog's
    /// labeling, for data transcribed in a twisted D4 labeling.
    pub relabel: Option<DiagramAutomorphism>,
}

impl SphericalSystem {
    pub fn new(
        root_system: Arc<RootSystem>,
        sp: NodeSet,
        sigma: Vec<RootVector>,
        a: Vec<AElement>,
    ) -> Self {
        Self {
            root_system,
            sp,
            sigma,
            a,
            spherically_closed: false,
            strict: false,
            omega_x: None,
            relabel: None,
        }
    }

    pub fn rank(&self) -> usize {
        self.sigma.len()
    }

    /// Simple roots that are spherical roots, as nodes.
    pub fn simple_spherical_roots(&self) -> NodeSet {
        let n = self.root_system.rank();
        (0..n)
            .filter(|&i| self.sigma.contains(&RootVector::unit(n, i)))
            .collect()
    }

    fn canonical_a(&self) -> Vec<(NodeSet, Vec<(RootVector, i64)>)> {
        self.a
            .iter()
            .map(|e| canonical_a_element(&self.sigma, e))
            .sorted()
            .collect()
    }

    /// Equality as data: same `S^p`, same set `Σ`, same multiset `A`.
    pub fn same_data(&self, other: &SphericalSystem) -> bool {
        self.root_system.cartan_type() == other.root_system.cartan_type()
            && self.sp == other.sp
            && self.sigma.iter().collect::<BTreeSet<_>>() == other.sigma.iter().collect()
            && self.canonical_a() == other.canonical_a()
    }
}

fn canonical_a_element(sigma: &[RootVector], e: &AElement) -> (NodeSet, Vec<(RootVector, i64)>) {
    let pairs = sigma
        .iter()
        .cloned()
        .zip(e.pairings.iter().copied())
        .sorted()
        .collect();
    (e.owners.clone(), pairs)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Length { what: String, expected: usize, found: usize },
    NodeOutOfRange(usize),
    ZeroRoot(usize),
    NegativeCoordinate(RootVector),
    NotLinearlyIndependent,
    EmptyOwners(usize),
    OwnerNotSimpleSphericalRoot { element: usize, node: usize },
    UnownedSimpleRoot(usize),
    AWithoutSimpleRoots,
    BadRelabel,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Length {
                what,
                expected,
                found,
            } => write!(f, "{what} has length {found}, expected {expected}"),
            Violation::NodeOutOfRange(i) => write!(f, "node {} out of range", i + 1),
            Violation::ZeroRoot(i) => write!(f, "spherical root #{} is zero", i + 1),
            Violation::NegativeCoordinate(r) => {
                write!(f, "spherical root {r} has a negative coordinate")
            }
            Violation::NotLinearlyIndependent => {
                write!(f, "spherical roots are not linearly independent")
            }
            Violation::EmptyOwners(k) => write!(f, "A-element #{} has no owner", k + 1),
            Violation::OwnerNotSimpleSphericalRoot { element, node } => write!(
                f,
                "A-element #{} is owned by α{}, which is not a simple spherical root",
                element + 1,
                node + 1
            ),
            Violation::UnownedSimpleRoot(i) => {
                write!(f, "simple spherical root α{} owns no A-element", i + 1)
            }
            Violation::AWithoutSimpleRoots => {
                write!(f, "A is nonempty but no spherical root is simple")
            }
            Violation::BadRelabel => write!(f, "relabeling is not a diagram automorphism"),
        }
    }
}

/// Checks the structural invariants of a spherical system and returns every
/// violation found (empty when the system is well formed). Luna's axioms
/// beyond these are not checked.
pub fn validate_system(sys: &SphericalSystem) -> Vec<Violation> {
    let n = sys.root_system.rank();
    let mut out = Vec::new();
    out.extend(sys.sp.iter().filter(|&&i| i >= n).map(|&i| Violation::NodeOutOfRange(i)));
    let mut lengths_ok = true;
    for (k, g) in sys.sigma.iter().enumerate() {
        if g.len() != n {
            lengths_ok = false;
            out.push(Violation::Length {
                what: format!("spherical root #{}", k + 1),
                expected: n,
                found: g.len(),
            });
        } else if g.is_zero() {
            out.push(Violation::ZeroRoot(k));
        } else if g.0.iter().any(|&c| c < 0) {
            out.push(Violation::NegativeCoordinate(g.clone()));
        }
    }
    if lengths_ok {
        let rows: Vec<Vec<i64>> = sys.sigma.iter().map(|g| g.0.clone()).collect();
        if !linalg::linearly_independent(&rows) {
            out.push(Violation::NotLinearlyIndependent);
        }
    }
    let simple = sys.simple_spherical_roots();
    if simple.is_empty() && !sys.a.is_empty() {
        out.push(Violation::AWithoutSimpleRoots);
    }
    for (k, e) in sys.a.iter().enumerate() {
        if e.pairings.len() != sys.sigma.len() {
            out.push(Violation::Length {
                what: format!("pairings of A-element #{}", k + 1),
                expected: sys.sigma.len(),
                found: e.pairings.len(),
            });
        }
        if e.owners.is_empty() {
            out.push(Violation::EmptyOwners(k));
        }
        for &o in &e.owners {
            if !simple.contains(&o) {
                out.push(Violation::OwnerNotSimpleSphericalRoot {
                    element: k,
                    node: o,
                });
            }
        }
    }
    for &alpha in &simple {
        if !sys.a.iter().any(|e| e.owners.contains(&alpha)) {
            out.push(Violation::UnownedSimpleRoot(alpha));
        }
    }
    if let Some(r) = &sys.relabel {
        if !r.is_cartan_automorphism(&sys.root_system) {
            out.push(Violation::BadRelabel);
        }
    }
    out
}

pub fn ensure_valid(sys: &SphericalSystem) -> Result<()> {
    let v = validate_system(sys);
    if v.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidSystem(v))
    }
}

/// Evidence that some piece of data is not carried to itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    ParabolicNode { node: usize, image: usize },
    SphericalRoot { root: RootVector, image: RootVector },
    AElement { owners: NodeSet, image_owners: NodeSet, pairings: Vec<(RootVector, i64)> },
    LatticeVector { vector: Weight, image: Weight },
    ValuationGenerator { generator: Vec<i64>, image: Vec<i64> },
    Color { rho: Vec<i64>, moved: NodeSet, image_moved: NodeSet },
    MonoidGenerator { generator: Weight, image: Weight },
    BlackNode { node: usize },
    CartanIndex { weight: Weight, sign: Sign },
}

fn nodes_json(s: &NodeSet) -> Value {
    json!(s.iter().map(|i| i + 1).collect::<Vec<_>>())
}

impl Witness {
    pub fn kind(&self) -> &'static str {
        match self {
            Witness::ParabolicNode { .. } => "parabolic_node",
            Witness::SphericalRoot { .. } => "spherical_root",
            Witness::AElement { .. } => "a_element",
            Witness::LatticeVector { .. } => "lattice_vector",
            Witness::ValuationGenerator { .. } => "valuation_generator",
            Witness::Color { .. } => "color",
            Witness::MonoidGenerator { .. } => "monoid_generator",
            Witness::BlackNode { .. } => "black_node",
            Witness::CartanIndex { .. } => "cartan_index",
        }
    }

    /// Machine form; node indices 1-based, vectors as coordinate arrays,
    /// plus the human-readable text.
    pub fn to_json(&self) -> Value {
        let mut v = match self {
            Witness::ParabolicNode { node, image } => json!({"node": node + 1, "image": image + 1}),
            Witness::SphericalRoot { root, image } => json!({"root": root.0, "image": image.0}),
            Witness::AElement {
                owners,
                image_owners,
                pairings,
            } => json!({
                "owners": nodes_json(owners),
                "image_owners": nodes_json(image_owners),
                "pairings": pairings.iter().map(|(g, p)| json!({"root": g.0, "value": p})).collect::<Vec<_>>(),
            }),
            Witness::LatticeVector { vector, image } => json!({"vector": vector.0, "image": image.0}),
            Witness::ValuationGenerator { generator, image } => {
                json!({"generator": generator, "image": image})
            }
            Witness::Color {
                rho,
                moved,
                image_moved,
            } => json!({"rho": rho, "moved": nodes_json(moved), "image_moved": nodes_json(image_moved)}),
            Witness::MonoidGenerator { generator, image } => {
                json!({"generator": generator.0, "image": image.0})
            }
            Witness::BlackNode { node } => json!({"node": node + 1}),
            Witness::CartanIndex { weight, sign } => json!({"weight": weight.0, "sign": sign.value()}),
        };
        v["kind"] = json!(self.kind());
        v["text"] = json!(self.to_string());
        v
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::ParabolicNode { node, image } => write!(
                f,
                "parabolic root α{} ↦ α{}, which is not in S^p",
                node + 1,
                image + 1
            ),
            Witness::SphericalRoot { root, image } => {
                write!(f, "spherical root {root} ↦ {image}, which is not a spherical root")
            }
            Witness::AElement {
                owners,
                image_owners,
                pairings,
            } => {
                let p = pairings.iter().map(|(g, v)| format!("<·,{g}>={v}")).join(" ");
                write!(
                    f,
                    "A-element of {} [{p}] ↦ element of {} with no counterpart in A",
                    fmt_nodes(owners),
                    fmt_nodes(image_owners)
                )
            }
            Witness::LatticeVector { vector, image } => {
                write!(f, "lattice vector {vector} ↦ {image}, which leaves the lattice")
            }
            Witness::ValuationGenerator { generator, image } => write!(
                f,
                "valuation generator {generator:?} ↦ {image:?}, not a ray of the valuation cone"
            ),
            Witness::Color {
                rho,
                moved,
                image_moved,
            } => write!(
                f,
                "color moved by {} with ρ={rho:?} ↦ moved by {} with no matching color",
                fmt_nodes(moved),
                fmt_nodes(image_moved)
            ),
            Witness::MonoidGenerator { generator, image } => {
                write!(f, "monoid generator {generator} ↦ {image}, which is not a generator")
            }
            Witness::BlackNode { node } => write!(f, "black node α{} is not in S^p", node + 1),
            Witness::CartanIndex { weight, sign } => {
                write!(f, "Cartan index of the simple module of highest weight {weight} is {sign}")
            }
        }
    }
}

/// Outcome of a stability test. `Unstable` lists every unmatched element;
/// the first one is the primary witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Stability {
    Stable,
    Unstable(Vec<Witness>),
}

impl Stability {
    fn from_witnesses(w: Vec<Witness>) -> Self {
        if w.is_empty() {
            Stability::Stable
        } else {
            Stability::Unstable(w)
        }
    }

    pub fn is_stable(&self) -> bool {
        matches!(self, Stability::Stable)
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Stability::Stable => None,
            Stability::Unstable(w) => w.first(),
        }
    }

    pub fn witnesses(&self) -> &[Witness] {
        match self {
            Stability::Stable => &[],
            Stability::Unstable(w) => w,
        }
    }
}

fn check_eps(eps: &DiagramAutomorphism, rs: &RootSystem) -> Result<()> {
    rs.check_len(eps.rank())
}

/// `(ε(S^p), ε(Σ), ε(A))`. Σ keeps its order, so each A-element keeps its
/// pairing vector: `<ε(ρ), ε(γ_i)> = <ρ, γ_i>`.
pub fn apply_epsilon(eps: &DiagramAutomorphism, sys: &SphericalSystem) -> Result<SphericalSystem> {
    check_eps(eps, &sys.root_system)?;
    let sigma = sys
        .sigma
        .iter()
        .map(|g| eps.apply_root(g))
        .collect::<Result<Vec<_>>>()?;
    let a = sys
        .a
        .iter()
        .map(|e| AElement {
            pairings: e.pairings.clone(),
            owners: eps.apply_nodes(&e.owners),
        })
        .collect();
    Ok(SphericalSystem {
        sp: eps.apply_nodes(&sys.sp),
        sigma,
        a,
        ..sys.clone()
    })
}

/// Whether `S^p`, `Σ` and `A` (as a multiset) are each carried to
/// themselves by ε.
pub fn is_epsilon_stable(eps: &DiagramAutomorphism, sys: &SphericalSystem) -> Result<Stability> {
    let image = apply_epsilon(eps, sys)?;
    let mut witnesses = Vec::new();
    for &i in &sys.sp {
        let j = eps.image(i);
        if !sys.sp.contains(&j) {
            witnesses.push(Witness::ParabolicNode { node: i, image: j });
        }
    }
    for (g, eg) in sys.sigma.iter().zip(&image.sigma) {
        if !sys.sigma.contains(eg) {
            witnesses.push(Witness::SphericalRoot {
                root: g.clone(),
                image: eg.clone(),
            });
        }
    }
    let mut pool = sys.canonical_a();
    for (e, ee) in sys.a.iter().zip(&image.a) {
        let c = canonical_a_element(&image.sigma, ee);
        if let Some(pos) = pool.iter().position(|p| *p == c) {
            pool.swap_remove(pos);
        } else {
            witnesses.push(Witness::AElement {
                owners: e.owners.clone(),
                image_owners: ee.owners.clone(),
                pairings: sys.sigma.iter().cloned().zip(e.pairings.iter().copied()).collect(),
            });
        }
    }
    Ok(Stability::from_witnesses(witnesses))
}

/// Union of the supports of the given root-lattice vectors.
pub fn support(vs: &[RootVector]) -> NodeSet {
    vs.iter().flat_map(RootVector::support).collect()
}

/// The closure `X_I` of the G-orbit indexed by `I ⊆ {0..r-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitDescriptor {
    pub index_set: BTreeSet<usize>,
    /// `Σ_I = {γ_i : i ∉ I}`
    pub sigma_sub: Vec<RootVector>,
    /// `S_I = S^p ∪ Supp Σ_I`
    pub s_sub: NodeSet,
}

impl OrbitDescriptor {
    pub fn is_open_orbit(&self) -> bool {
        self.index_set.is_empty()
    }
}

/// One descriptor per subset of the spherical roots, ordered by the bitmask
/// of `I` (so `I = ∅` comes first and `I = everything` last).
pub fn orbit_closures(sys: &SphericalSystem) -> Result<Vec<OrbitDescriptor>> {
    let r = sys.rank();
    if r > MAX_ORBIT_RANK {
        return Err(Error::RankTooLarge(r));
    }
    Ok((0u32..(1 << r))
        .map(|mask| {
            let index_set: BTreeSet<usize> = (0..r).filter(|i| mask & (1 << i) != 0).collect();
            let sigma_sub: Vec<RootVector> = (0..r)
                .filter(|i| !index_set.contains(i))
                .map(|i| sys.sigma[i].clone())
                .collect();
            let s_sub = sys.sp.union(&support(&sigma_sub)).copied().collect();
            OrbitDescriptor {
                index_set,
                sigma_sub,
                s_sub,
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColorKind {
    /// From `A`, moved by its owners.
    A,
    /// `2α ∈ Σ`.
    TwoA,
    /// Every other simple root outside `S^p`.
    B,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemColor {
    pub kind: ColorKind,
    pub moved: NodeSet,
}

/// Colors of the wonderful variety read off its spherical system. Type-b
/// colors of orthogonal roots `α, β` coincide when `α + β ∈ Σ`.
pub fn colors(sys: &SphericalSystem) -> Vec<SystemColor> {
    let rs = &sys.root_system;
    let n = rs.rank();
    let mut out: Vec<SystemColor> = sys
        .a
        .iter()
        .map(|e| SystemColor {
            kind: ColorKind::A,
            moved: e.owners.clone(),
        })
        .collect();
    let simple = sys.simple_spherical_roots();
    let doubled: NodeSet = (0..n)
        .filter(|&i| sys.sigma.contains(&RootVector::unit(n, i).scaled(2)))
        .collect();
    out.extend(
        doubled
            .iter()
            .filter(|i| !sys.sp.contains(i))
            .map(|&i| SystemColor {
                kind: ColorKind::TwoA,
                moved: [i].into(),
            }),
    );
    let b_roots: Vec<usize> = (0..n)
        .filter(|i| !sys.sp.contains(i) && !simple.contains(i) && !doubled.contains(i))
        .collect();
    let mut taken = HashSet::new();
    for &i in &b_roots {
        if !taken.insert(i) {
            continue;
        }
        let mut moved: NodeSet = [i].into();
        for &j in &b_roots {
            if j > i && rs.orthogonal(i, j) && !taken.contains(&j) {
                let sum = &RootVector::unit(n, i) + &RootVector::unit(n, j);
                if sys.sigma.contains(&sum) {
                    moved.insert(j);
                    taken.insert(j);
                    break;
                }
            }
        }
        out.push(SystemColor {
            kind: ColorKind::B,
            moved,
        });
    }
    out
}

/// `ω_X`: the explicit override if present, otherwise the sum over colors of
/// the fundamental weights of the roots moving them.
pub fn color_weight_sum(sys: &SphericalSystem) -> Weight {
    if let Some(w) = &sys.omega_x {
        return w.clone();
    }
    let mut w = Weight::zero(sys.root_system.rank());
    for c in colors(sys) {
        for &i in &c.moved {
            w.0[i] += 1;
        }
    }
    w
}

/// A color of a general spherical homogeneous space: `ρ_D` evaluated on the
/// lattice basis, and the simple roots whose minimal parabolics move `D`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColorDatum {
    pub rho: Vec<i64>,
    pub moved: NodeSet,
}

/// Luna–Vust invariants `(X, V, D)`. Valuation generators and color
/// functionals are coordinates against the lattice basis.
#[derive(Debug, Clone)]
pub struct LunaVustDatum {
    pub root_system: Arc<RootSystem>,
    pub lattice_basis: Vec<Weight>,
    pub valuation_generators: Vec<Vec<i64>>,
    pub colors: Vec<ColorDatum>,
}

impl LunaVustDatum {
    pub fn dim(&self) -> usize {
        self.lattice_basis.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.root_system.rank();
        let bad = |m: String| Err(Error::InvalidDatum(m));
        for b in &self.lattice_basis {
            if b.len() != n {
                return bad(format!("lattice vector {b:?} has length {}, expected {n}", b.len()));
            }
        }
        if !linalg::linearly_independent(&self.basis_rows()) {
            return bad("lattice basis is not linearly independent".into());
        }
        for v in &self.valuation_generators {
            if v.len() != self.dim() {
                return bad(format!("valuation generator {v:?} has wrong length"));
            }
            if v.iter().all(|&c| c == 0) {
                return bad("valuation generators must be nonzero".into());
            }
        }
        for c in &self.colors {
            if c.rho.len() != self.dim() {
                return bad(format!("color functional {:?} has wrong length", c.rho));
            }
            if c.moved.is_empty() {
                return bad("every color is moved by some simple root".into());
            }
            if let Some(&i) = c.moved.iter().find(|&&i| i >= n) {
                return bad(format!("node {} out of range", i + 1));
            }
        }
        Ok(())
    }

    fn basis_rows(&self) -> Vec<Vec<i64>> {
        self.lattice_basis.iter().map(|w| w.0.clone()).collect()
    }
}

/// The datum of `G/B⁻`: trivial lattice and cone, one color per simple root.
pub fn borel_datum(rs: Arc<RootSystem>) -> LunaVustDatum {
    let colors = (0..rs.rank())
        .map(|i| ColorDatum {
            rho: Vec::new(),
            moved: [i].into(),
        })
        .collect();
    LunaVustDatum {
        root_system: rs,
        lattice_basis: Vec::new(),
        valuation_generators: Vec::new(),
        colors,
    }
}

/// Luna–Vust datum of the open orbit of a wonderful variety: lattice `ZΣ`,
/// valuation cone spanned by the negatives of the dual basis, and colors
/// evaluated on Σ.
pub fn luna_vust_of(sys: &SphericalSystem) -> LunaVustDatum {
    let rs = &sys.root_system;
    let r = sys.rank();
    let colors = colors(sys)
        .into_iter()
        .enumerate()
        .map(|(k, c)| {
            let alpha = *c.moved.first().expect("colors are moved by some root");
            let rho = match c.kind {
                ColorKind::A => sys.a[k].pairings.clone(),
                ColorKind::TwoA => sys.sigma.iter().map(|g| rs.coroot_pairing(alpha, g) / 2).collect(),
                ColorKind::B => sys.sigma.iter().map(|g| rs.coroot_pairing(alpha, g)).collect(),
            };
            ColorDatum { rho, moved: c.moved }
        })
        .collect();
    LunaVustDatum {
        root_system: rs.clone(),
        lattice_basis: sys.sigma.iter().map(|g| rs.root_to_weight(g)).collect(),
        valuation_generators: (0..r)
            .map(|i| (0..r).map(|j| if i == j { -1 } else { 0 }).collect())
            .collect(),
        colors,
    }
}

/// ε applied to a Luna–Vust datum. The lattice basis is transported;
/// functionals keep their coordinates, now read against the transported
/// basis.
pub fn apply_epsilon_lv(eps: &DiagramAutomorphism, d: &LunaVustDatum) -> Result<LunaVustDatum> {
    check_eps(eps, &d.root_system)?;
    Ok(LunaVustDatum {
        lattice_basis: d
            .lattice_basis
            .iter()
            .map(|b| eps.apply_weight(b))
            .collect::<Result<_>>()?,
        colors: d
            .colors
            .iter()
            .map(|c| ColorDatum {
                rho: c.rho.clone(),
                moved: eps.apply_nodes(&c.moved),
            })
            .collect(),
        ..d.clone()
    })
}

/// Stability of `(X, V, D)` under ε: same lattice, same cone (generators
/// matched up to positive scaling), and a bijection of colors matching `ρ`
/// and the moved roots.
pub fn is_epsilon_stable_lv(eps: &DiagramAutomorphism, d: &LunaVustDatum) -> Result<Stability> {
    d.validate()?;
    let image = apply_epsilon_lv(eps, d)?;
    let basis = d.basis_rows();
    let image_basis = image.basis_rows();

    let mut witnesses = Vec::new();
    for (b, eb) in d.lattice_basis.iter().zip(&image.lattice_basis) {
        if linalg::lattice_coordinates(&basis, &eb.0).is_none() {
            witnesses.push(Witness::LatticeVector {
                vector: b.clone(),
                image: eb.clone(),
            });
        }
    }
    if witnesses.is_empty() {
        for b in &d.lattice_basis {
            if linalg::lattice_coordinates(&image_basis, &b.0).is_none() {
                let pre = eps.inverse().apply_weight(b)?;
                witnesses.push(Witness::LatticeVector {
                    vector: pre,
                    image: b.clone(),
                });
            }
        }
    }
    if !witnesses.is_empty() {
        return Ok(Stability::Unstable(witnesses));
    }

    // b_j = sum_i n[j][i] ε(b_i), so a functional with ε-basis coordinates c'
    // takes the value sum_i n[j][i] c'_i on b_j.
    let n: Vec<Vec<i64>> = basis
        .iter()
        .map(|b| linalg::lattice_coordinates(&image_basis, b).expect("lattices agree"))
        .collect();
    let to_original =
        |c: &[i64]| -> Vec<i64> { n.iter().map(|row| row.iter().zip(c).map(|(a, b)| a * b).sum()).collect() };

    for (v, ev) in d.valuation_generators.iter().zip(&image.valuation_generators) {
        let ev = to_original(ev);
        if !d.valuation_generators.iter().any(|u| linalg::positive_multiple(&ev, u)) {
            witnesses.push(Witness::ValuationGenerator {
                generator: v.clone(),
                image: ev,
            });
        }
    }
    let image_gens: Vec<Vec<i64>> = image.valuation_generators.iter().map(|v| to_original(v)).collect();
    for u in &d.valuation_generators {
        if !image_gens.iter().any(|ev| linalg::positive_multiple(u, ev)) {
            witnesses.push(Witness::ValuationGenerator {
                generator: u.clone(),
                image: u.clone(),
            });
        }
    }

    let mut pool: Vec<ColorDatum> = d.colors.clone();
    for (c, ec) in d.colors.iter().zip(&image.colors) {
        let target = ColorDatum {
            rho: to_original(&ec.rho),
            moved: ec.moved.clone(),
        };
        if let Some(pos) = pool.iter().position(|p| *p == target) {
            pool.swap_remove(pos);
        } else {
            witnesses.push(Witness::Color {
                rho: c.rho.clone(),
                moved: c.moved.clone(),
                image_moved: ec.moved.clone(),
            });
        }
    }
    Ok(Stability::from_witnesses(witnesses))
}

/// Weight monoid of an affine spherical space, given by its minimal
/// generators.
#[derive(Debug, Clone)]
pub struct WeightMonoid {
    pub root_system: Arc<RootSystem>,
    pub generators: Vec<Weight>,
}

impl WeightMonoid {
    pub fn new(root_system: Arc<RootSystem>, generators: Vec<Weight>) -> Self {
        Self {
            root_system,
            generators,
        }
    }

    /// Generators must be nonzero, dominant, of the right length and
    /// minimal: none is a nonnegative integer combination of the others.
    pub fn validate(&self) -> Result<()> {
        let n = self.root_system.rank();
        for g in &self.generators {
            if g.len() != n {
                return Err(Error::InvalidMonoid(format!("{g:?} has length {}, expected {n}", g.len())));
            }
            if !g.is_dominant() {
                return Err(Error::InvalidMonoid(format!("{g} is not dominant")));
            }
            if g.is_zero() {
                return Err(Error::InvalidMonoid("0 cannot be a generator".into()));
            }
        }
        for (i, g) in self.generators.iter().enumerate() {
            let others: Vec<&Weight> = self
                .generators
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, w)| w)
                .collect();
            if representable(&g.0, &others, 0, &mut HashSet::new()) {
                return Err(Error::InvalidMonoid(format!(
                    "generators are not minimal: {g} is a combination of the others"
                )));
            }
        }
        Ok(())
    }
}

/// Bounded search for `target = sum c_j gens[j]` with `c_j >= 0` using
/// generators from index `from` on. Every generator has coordinate sum at
/// least 1, so the depth is bounded by the coordinate sum of `target`.
fn representable(target: &[i64], gens: &[&Weight], from: usize, dead: &mut HashSet<(Vec<i64>, usize)>) -> bool {
    if target.iter().all(|&c| c == 0) {
        return true;
    }
    if dead.contains(&(target.to_vec(), from)) {
        return false;
    }
    for (k, g) in gens.iter().enumerate().skip(from) {
        let rest: Vec<i64> = target.iter().zip(&g.0).map(|(t, c)| t - c).collect();
        if rest.iter().all(|&c| c >= 0) && representable(&rest, gens, k, dead) {
            return true;
        }
    }
    dead.insert((target.to_vec(), from));
    false
}

/// Whether ε permutes the (minimal) generators of Γ.
pub fn is_epsilon_stable_monoid(eps: &DiagramAutomorphism, monoid: &WeightMonoid) -> Result<Stability> {
    monoid.validate()?;
    check_eps(eps, &monoid.root_system)?;
    let mut witnesses = Vec::new();
    for g in &monoid.generators {
        let image = eps.apply_weight(g)?;
        if !monoid.generators.contains(&image) {
            witnesses.push(Witness::MonoidGenerator {
                generator: g.clone(),
                image,
            });
        }
    }
    Ok(Stability::from_witnesses(witnesses))
}

/// Per-node multiplicities of the color moved sets, keyed by node.
pub fn moved_histogram(colors: &[SystemColor]) -> BTreeMap<usize, usize> {
    let mut h = BTreeMap::new();
    for c in colors {
        for &i in &c.moved {
            *h.entry(i).or_insert(0) += 1;
        }
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real_form::Catalog;

    fn rs(s: &str) -> Arc<RootSystem> {
        Arc::new(RootSystem::new(s.parse().unwrap()))
    }

    fn rv(v: &[i64]) -> RootVector {
        RootVector(v.to_vec())
    }

    fn swap(n: usize, a: usize, b: usize) -> DiagramAutomorphism {
        DiagramAutomorphism::from_swaps(n, &[(a, b)]).unwrap()
    }

    fn a3_product() -> SphericalSystem {
        SphericalSystem::new(
            rs("A3"),
            NodeSet::new(),
            vec![rv(&[1, 0, 0]), rv(&[0, 1, 1])],
            vec![
                AElement { pairings: vec![1, 0], owners: [0].into() },
                AElement { pairings: vec![1, -1], owners: [0].into() },
            ],
        )
    }

    fn e6() -> SphericalSystem {
        SphericalSystem::new(
            rs("E6"),
            NodeSet::new(),
            vec![rv(&[1, 0, 0, 0, 0, 1]), rv(&[0, 0, 1, 0, 1, 0]), rv(&[0, 1, 0, 1, 0, 0])],
            vec![],
        )
    }

    #[test]
    fn validation() {
        let g_b = SphericalSystem::new(rs("A2"), NodeSet::new(), vec![], vec![]);
        assert!(validate_system(&g_b).is_empty());
        assert!(validate_system(&e6()).is_empty());
        assert!(validate_system(&a3_product()).is_empty());

        let repeated = SphericalSystem::new(rs("A2"), NodeSet::new(), vec![rv(&[1, 1]), rv(&[1, 1])], vec![]);
        let v = validate_system(&repeated);
        assert_eq!(v, vec![Violation::NotLinearlyIndependent]);
        assert!(v[0].to_string().contains("not linearly independent"));

        let mut unowned = a3_product();
        unowned.a.clear();
        assert_eq!(validate_system(&unowned), vec![Violation::UnownedSimpleRoot(0)]);

        let mut stray = e6();
        stray.a.push(AElement { pairings: vec![1, 0, 0], owners: [0].into() });
        let v = validate_system(&stray);
        assert!(v.contains(&Violation::AWithoutSimpleRoots));
        assert!(v.contains(&Violation::OwnerNotSimpleSphericalRoot { element: 0, node: 0 }));

        let short = SphericalSystem::new(rs("A2"), [5].into(), vec![rv(&[1])], vec![]);
        assert_eq!(validate_system(&short).len(), 2);
    }

    #[test]
    fn apply_epsilon_examples() {
        let sys = a3_product();
        let id = DiagramAutomorphism::identity(3);
        assert!(apply_epsilon(&id, &sys).unwrap().same_data(&sys));

        let e = swap(3, 0, 2);
        let image = apply_epsilon(&e, &sys).unwrap();
        assert_eq!(image.sigma, vec![rv(&[0, 0, 1]), rv(&[1, 1, 0])]);

        let d6 = SphericalSystem::new(
            rs("D6"),
            [0, 2, 4].into(),
            vec![rv(&[1, 2, 1, 0, 0, 0]), rv(&[0, 0, 1, 2, 1, 0]), rv(&[0, 0, 0, 0, 0, 2])],
            vec![],
        );
        let image = apply_epsilon(&swap(6, 4, 5), &d6).unwrap();
        assert_eq!(
            image.sigma,
            vec![rv(&[1, 2, 1, 0, 0, 0]), rv(&[0, 0, 1, 2, 0, 1]), rv(&[0, 0, 0, 0, 2, 0])]
        );
    }

    #[test]
    fn stability_examples() {
        let sys = a3_product();
        assert!(is_epsilon_stable(&DiagramAutomorphism::identity(3), &sys).unwrap().is_stable());
        let s = is_epsilon_stable(&swap(3, 0, 2), &sys).unwrap();
        assert_eq!(
            s.witness(),
            Some(&Witness::SphericalRoot { root: rv(&[1, 0, 0]), image: rv(&[0, 0, 1]) })
        );
        assert!(s.witness().unwrap().to_string().contains("α1 ↦ α3"));

        for sd in Catalog::shipped().forms("E6".parse().unwrap()).unwrap() {
            assert!(is_epsilon_stable(sd.epsilon(), &e6()).unwrap().is_stable(), "{sd}");
        }
    }

    #[test]
    fn a_elements_compared_as_multiset() {
        // same Σ and owners, but the pairings of the two elements differ
        let mut sys = a3_product();
        sys.sigma = vec![rv(&[1, 0, 0]), rv(&[0, 0, 1])];
        sys.a = vec![
            AElement { pairings: vec![1, 0], owners: [0].into() },
            AElement { pairings: vec![1, -1], owners: [0].into() },
            AElement { pairings: vec![0, 1], owners: [2].into() },
            AElement { pairings: vec![-1, 1], owners: [2].into() },
        ];
        let s = is_epsilon_stable(&swap(3, 0, 2), &sys).unwrap();
        assert!(s.is_stable());
        sys.a[3].pairings = vec![0, 1];
        let s = is_epsilon_stable(&swap(3, 0, 2), &sys).unwrap();
        assert!(matches!(s.witness(), Some(Witness::AElement { .. })));
    }

    #[test]
    fn supports() {
        assert!(support(&[]).is_empty());
        assert_eq!(support(&e6().sigma), (0..6).collect());
        assert_eq!(support(&[rv(&[0, 0, 0, 0, 0, 2])]), [5].into());
    }

    #[test]
    fn orbit_enumeration() {
        let g_b = SphericalSystem::new(rs("A2"), NodeSet::new(), vec![], vec![]);
        let o = orbit_closures(&g_b).unwrap();
        assert_eq!(o.len(), 1);
        assert!(o[0].is_open_orbit());

        let o = orbit_closures(&e6()).unwrap();
        assert_eq!(o.len(), 8);
        assert_eq!(o[0].s_sub, (0..6).collect());
        assert!(o[7].s_sub.is_empty() && o[7].sigma_sub.is_empty());

        let big = SphericalSystem::new(
            rs("A8"),
            NodeSet::new(),
            (0..21).map(|_| rv(&[1; 8])).collect(),
            vec![],
        );
        assert!(matches!(orbit_closures(&big), Err(Error::RankTooLarge(21))));
    }

    #[test]
    fn color_rules() {
        // α1 ⊥ α6 and α3 ⊥ α5 share colors; α2, α4 are adjacent and do not
        let c = colors(&e6());
        assert_eq!(c.len(), 4);
        assert!(c.iter().any(|c| c.moved == NodeSet::from([0, 5])));
        assert!(c.iter().any(|c| c.moved == NodeSet::from([2, 4])));
        assert_eq!(color_weight_sum(&e6()), Weight(vec![1; 6]));

        let sys = a3_product();
        let c = colors(&sys);
        assert_eq!(c.iter().filter(|c| c.kind == ColorKind::A).count(), 2);
        assert_eq!(color_weight_sum(&sys), Weight(vec![2, 1, 1]));
        assert_eq!(moved_histogram(&c)[&0], 2);
    }

    #[test]
    fn luna_vust_examples() {
        let a3 = rs("A3");
        let gb = borel_datum(a3.clone());
        let su22 = swap(3, 0, 2);
        assert!(is_epsilon_stable_lv(&su22, &gb).unwrap().is_stable());
        assert!(is_epsilon_stable_lv(&DiagramAutomorphism::identity(3), &gb).unwrap().is_stable());

        let single = LunaVustDatum {
            root_system: a3.clone(),
            lattice_basis: vec![],
            valuation_generators: vec![],
            colors: vec![ColorDatum { rho: vec![], moved: [0].into() }],
        };
        let s = is_epsilon_stable_lv(&su22, &single).unwrap();
        assert!(matches!(s.witness(), Some(Witness::Color { .. })));

        // lattice spanned by ω1: ε sends it outside
        let line = LunaVustDatum {
            root_system: a3.clone(),
            lattice_basis: vec![Weight(vec![1, 0, 0])],
            valuation_generators: vec![vec![-1]],
            colors: vec![],
        };
        let s = is_epsilon_stable_lv(&su22, &line).unwrap();
        assert!(matches!(s.witness(), Some(Witness::LatticeVector { .. })));

        // lattice spanned by ω1 and ω3 with swapped basis: functionals follow
        let plane = LunaVustDatum {
            root_system: a3.clone(),
            lattice_basis: vec![Weight(vec![1, 0, 0]), Weight(vec![0, 0, 1])],
            valuation_generators: vec![vec![-1, 0], vec![0, -2]],
            colors: vec![
                ColorDatum { rho: vec![1, 0], moved: [0].into() },
                ColorDatum { rho: vec![0, 1], moved: [2].into() },
            ],
        };
        assert!(is_epsilon_stable_lv(&su22, &plane).unwrap().is_stable());
        let mut skew = plane.clone();
        skew.colors[1].rho = vec![1, 1];
        assert!(!is_epsilon_stable_lv(&su22, &skew).unwrap().is_stable());
        let mut cone = plane.clone();
        cone.valuation_generators = vec![vec![-1, 0], vec![-1, -1]];
        let s = is_epsilon_stable_lv(&su22, &cone).unwrap();
        assert!(matches!(s.witness(), Some(Witness::ValuationGenerator { .. })));
    }

    #[test]
    fn monoid_examples() {
        let a2 = rs("A2");
        let compact = swap(2, 0, 1);
        let gamma = WeightMonoid::new(a2.clone(), vec![Weight(vec![1, 1]), Weight(vec![0, 1])]);
        let s = is_epsilon_stable_monoid(&compact, &gamma).unwrap();
        assert_eq!(
            s.witness(),
            Some(&Witness::MonoidGenerator { generator: Weight(vec![0, 1]), image: Weight(vec![1, 0]) })
        );
        assert!(is_epsilon_stable_monoid(&DiagramAutomorphism::identity(2), &gamma).unwrap().is_stable());
        let free = WeightMonoid::new(a2.clone(), vec![Weight(vec![1, 0]), Weight(vec![0, 1])]);
        assert!(is_epsilon_stable_monoid(&compact, &free).unwrap().is_stable());

        let redundant = WeightMonoid::new(
            a2.clone(),
            vec![Weight(vec![1, 0]), Weight(vec![0, 1]), Weight(vec![2, 1])],
        );
        assert!(matches!(is_epsilon_stable_monoid(&compact, &redundant), Err(Error::InvalidMonoid(_))));
        let not_dominant = WeightMonoid::new(a2.clone(), vec![Weight(vec![1, -1])]);
        assert!(not_dominant.validate().is_err());
        let dup = WeightMonoid::new(a2, vec![Weight(vec![1, 0]), Weight(vec![1, 0])]);
        assert!(dup.validate().is_err());
    }
}
