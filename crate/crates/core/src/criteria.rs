//! Verdicts: conjugacy of `H` and `σ(H)`, existence and uniqueness of
//! σ-equivariant real structures, localization of real points on orbits and
//! flag varieties, and the Cartan-index obstruction.

use std::fmt;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fixtures::{self, CONTROL_FIXTURES};
use crate::linalg;
use crate::real_form::{cartan_index, Catalog, SatakeDiagram, Sign};
use crate::spherical::{
    apply_epsilon_lv, color_weight_sum, ensure_valid, is_epsilon_stable, is_epsilon_stable_lv,
    is_epsilon_stable_monoid, orbit_closures, LunaVustDatum, OrbitDescriptor, SphericalSystem,
    Stability, WeightMonoid, Witness,
};
use crate::automorphism::DiagramAutomorphism;
use crate::{fmt_nodes, NodeSet};

pub const UNIQUENESS_NOTE: &str = "the σ-equivariant real structure is unique";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Answer {
    Yes,
    No,
    Undetermined,
}

impl Answer {
    pub fn is_yes(self) -> bool {
        self == Answer::Yes
    }

    pub fn is_no(self) -> bool {
        self == Answer::No
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Answer::Yes => "yes",
            Answer::No => "no",
            Answer::Undetermined => "undetermined",
        }
    }
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.as_str().to_uppercase())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reason {
    pub criterion: &'static str,
    pub rule: String,
    pub witness: Option<Witness>,
}

impl Reason {
    fn new(criterion: &'static str, rule: impl Into<String>) -> Self {
        Self {
            criterion,
            rule: rule.into(),
            witness: None,
        }
    }

    fn with(mut self, w: Witness) -> Self {
        self.witness = Some(w);
        self
    }

    pub fn to_json(&self) -> Value {
        json!({
            "criterion": self.criterion,
            "rule": self.rule,
            "witness": self.witness.as_ref().map(Witness::to_json),
        })
    }
}

/// `No` always carries at least one witnessed reason; `Undetermined` only
/// comes from necessary-condition queries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub answer: Answer,
    pub reasons: Vec<Reason>,
    pub uniqueness_note: Option<String>,
}

impl Verdict {
    fn yes(reason: Reason) -> Self {
        Self {
            answer: Answer::Yes,
            reasons: vec![reason],
            uniqueness_note: None,
        }
    }

    fn undetermined(reason: Reason) -> Self {
        Self {
            answer: Answer::Undetermined,
            reasons: vec![reason],
            uniqueness_note: None,
        }
    }

    /// `Yes` when stable, otherwise `No` with one reason per witness.
    fn from_stability(criterion: &'static str, rule: &str, s: Stability) -> Self {
        match s {
            Stability::Stable => Self::yes(Reason::new(criterion, rule)),
            Stability::Unstable(ws) => Self {
                answer: Answer::No,
                reasons: ws
                    .into_iter()
                    .map(|w| Reason::new(criterion, rule).with(w))
                    .collect(),
                uniqueness_note: None,
            },
        }
    }

    pub fn witnesses(&self) -> impl Iterator<Item = &Witness> {
        self.reasons.iter().filter_map(|r| r.witness.as_ref())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "answer": self.answer.as_str(),
            "reasons": self.reasons.iter().map(Reason::to_json).collect::<Vec<_>>(),
            "uniqueness_note": self.uniqueness_note,
        })
    }
}

fn check_types(data: crate::CartanType, sd: &SatakeDiagram) -> Result<()> {
    if data == sd.cartan_type() {
        Ok(())
    } else {
        Err(Error::TypeMismatch {
            data: data.to_string(),
            form: sd.cartan_type().to_string(),
        })
    }
}

/// Whether `H` and `σ(H)` are conjugate, for any spherical subgroup given by
/// its Luna–Vust invariants. Exact.
pub fn conjugate_general(d: &LunaVustDatum, sd: &SatakeDiagram) -> Result<Verdict> {
    check_types(d.root_system.cartan_type(), sd)?;
    let s = is_epsilon_stable_lv(sd.epsilon(), d)?;
    Ok(Verdict::from_stability(
        "conjugate_general",
        "H and σ(H) are conjugate iff lattice, valuation cone and colors are ε_σ-stable",
        s,
    ))
}

/// Whether `H` and `σ(H)` are conjugate, for an affine spherical space
/// given by its weight monoid. Exact.
pub fn conjugate_affine(monoid: &WeightMonoid, sd: &SatakeDiagram) -> Result<Verdict> {
    check_types(monoid.root_system.cartan_type(), sd)?;
    let s = is_epsilon_stable_monoid(sd.epsilon(), monoid)?;
    Ok(Verdict::from_stability(
        "conjugate_affine",
        "H and σ(H) are conjugate iff the weight monoid is ε_σ-stable",
        s,
    ))
}

/// The valuation generators form a basis of the ambient space (so the cone
/// is simplicial and strictly convex). Rank 0 counts as wonderful.
pub fn has_wonderful_cone(d: &LunaVustDatum) -> bool {
    let gens = &d.valuation_generators;
    gens.len() == d.dim() && linalg::linearly_independent(gens)
}

/// Wonderfulness of `G/H` and of `G/σ(H)` agree: the cone test is run on the
/// datum and, independently, on its ε-transform with functionals rewritten
/// in the transported lattice basis.
pub fn wonderfulness_preserved(d: &LunaVustDatum, eps: &DiagramAutomorphism) -> Result<bool> {
    d.validate()?;
    let image = apply_epsilon_lv(eps, d)?;
    let rows: Vec<Vec<i64>> = image.lattice_basis.iter().map(|w| w.0.clone()).collect();
    // functionals of the image, as vectors in the weight space dual
    let ambient: Vec<Vec<linalg::Q>> = image
        .valuation_generators
        .iter()
        .map(|v| linalg::dual_functional(&rows, v))
        .collect();
    let image_wonderful = ambient.len() == image.dim() && linalg::rank_q(&ambient) == image.dim();
    Ok(has_wonderful_cone(d) == image_wonderful)
}

/// The Satake diagram written in the system's own labeling.
pub fn effective_diagram(sys: &SphericalSystem, sd: &SatakeDiagram) -> Result<SatakeDiagram> {
    check_types(sys.root_system.cartan_type(), sd)?;
    match &sys.relabel {
        Some(r) => sd.relabeled(r),
        None => Ok(sd.clone()),
    }
}

/// Existence of a σ-equivariant real structure on a spherically closed
/// wonderful variety; unique when it exists.
pub fn real_structure_exists(sys: &SphericalSystem, sd: &SatakeDiagram) -> Result<Verdict> {
    ensure_valid(sys)?;
    if !sys.spherically_closed {
        return Err(Error::Inapplicable(
            "the system is not spherically closed, so ε_σ-stability is only necessary".into(),
        ));
    }
    let sd = effective_diagram(sys, sd)?;
    let s = is_epsilon_stable(sd.epsilon(), sys)?;
    let mut v = Verdict::from_stability(
        "real_structure",
        "a σ-equivariant real structure exists iff the spherical system is ε_σ-stable",
        s,
    );
    if v.answer.is_yes() {
        v.uniqueness_note = Some(UNIQUENESS_NOTE.into());
    }
    Ok(v)
}

fn require_real_structure(sys: &SphericalSystem, sd: &SatakeDiagram) -> Result<SatakeDiagram> {
    let v = real_structure_exists(sys, sd)?;
    if !v.answer.is_yes() {
        let w = v.witnesses().next().map(|w| format!(": {w}")).unwrap_or_default();
        return Err(Error::Inapplicable(format!(
            "no σ-equivariant real structure for {sd}{w}"
        )));
    }
    effective_diagram(sys, sd)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlagOutcome {
    /// The base point of `G/P⁻_J` is real.
    RealPoint,
    /// `S_0 ⊄ J`: no real point.
    NoRealPoint,
    /// `ε(J) ≠ J`: the standard structure does not preserve `P⁻_J`.
    StructureUndefined,
}

impl FlagOutcome {
    pub fn is_real_point(self) -> bool {
        self == FlagOutcome::RealPoint
    }
}

/// Real points on the flag variety `G/P⁻_J`.
pub fn flag_real_point(j: &NodeSet, sd: &SatakeDiagram) -> Result<FlagOutcome> {
    let rs = sd.root_system();
    for &i in j {
        rs.check_node(i)?;
    }
    Ok(if &sd.epsilon().apply_nodes(j) != j {
        FlagOutcome::StructureUndefined
    } else if sd.black_nodes().is_subset(j) {
        FlagOutcome::RealPoint
    } else {
        FlagOutcome::NoRealPoint
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitRow {
    pub orbit: OrbitDescriptor,
    /// `Σ_I` is ε-stable.
    pub sigma_stable: bool,
    /// `S_0 ⊆ S_I`.
    pub contains_black: bool,
}

impl OrbitRow {
    pub fn passes(&self) -> bool {
        self.sigma_stable && self.contains_black
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitFilter {
    pub rows: Vec<OrbitRow>,
    pub verdict: Verdict,
}

impl OrbitFilter {
    /// Orbits that may contain real points. The others contain none.
    pub fn candidates(&self) -> impl Iterator<Item = &OrbitDescriptor> {
        self.rows.iter().filter(|r| r.passes()).map(|r| &r.orbit)
    }
}

/// Necessary conditions for `G·x_I` to contain real points, evaluated on all
/// `2^r` orbits.
pub fn real_point_orbit_filter(sys: &SphericalSystem, sd: &SatakeDiagram) -> Result<OrbitFilter> {
    let sd = require_real_structure(sys, sd)?;
    let eps = sd.epsilon();
    let rows: Vec<OrbitRow> = orbit_closures(sys)?
        .into_iter()
        .map(|orbit| {
            let sigma_stable = orbit
                .sigma_sub
                .iter()
                .all(|g| eps.apply_root(g).is_ok_and(|e| orbit.sigma_sub.contains(&e)));
            let contains_black = sd.black_nodes().is_subset(&orbit.s_sub);
            OrbitRow {
                orbit,
                sigma_stable,
                contains_black,
            }
        })
        .collect();
    let n = rows.iter().filter(|r| r.passes()).count();
    let verdict = Verdict::undetermined(Reason::new(
        "orbit_filter",
        format!(
            "{n} of {} orbits satisfy Σ_I = ε(Σ_I) and S_0 ⊆ S_I; these conditions are \
             necessary only, a candidate orbit may still have no real point",
            rows.len()
        ),
    ));
    Ok(OrbitFilter { rows, verdict })
}

/// `S_0 ⊆ S^p` guarantees a real point on every μ-stable orbit.
pub fn guaranteed_real_points(sys: &SphericalSystem, sd: &SatakeDiagram) -> Result<Verdict> {
    let sd = require_real_structure(sys, sd)?;
    let missing: Vec<usize> = sd.black_nodes().difference(&sys.sp).copied().collect();
    let rule = "every μ-stable orbit has real points when S_0 ⊆ S^p";
    Ok(match missing.first() {
        None => Verdict::yes(Reason::new("guaranteed_real_points", rule)),
        Some(_) => Verdict {
            answer: Answer::No,
            reasons: missing
                .into_iter()
                .map(|node| {
                    Reason::new("guaranteed_real_points", format!("{rule}; here S_0 ⊄ S^p = {}", fmt_nodes(&sys.sp)))
                        .with(Witness::BlackNode { node })
                })
                .collect(),
            uniqueness_note: None,
        },
    })
}

/// Real points need a positive Cartan index of `V(ω_X)`. A negative index
/// rules them out; a positive one decides nothing.
pub fn cartan_index_obstruction(sys: &SphericalSystem, sd: &SatakeDiagram) -> Result<Verdict> {
    if !sys.strict {
        return Err(Error::Inapplicable(
            "the system is not marked strict (self-normalizing stabilizers)".into(),
        ));
    }
    let sd = require_real_structure(sys, sd)?;
    let omega_x = color_weight_sum(sys);
    let sign = cartan_index(&sd, &omega_x)?;
    let witness = Witness::CartanIndex {
        weight: omega_x,
        sign,
    };
    Ok(match sign {
        Sign::Minus => Verdict {
            answer: Answer::No,
            reasons: vec![Reason::new(
                "cartan_index",
                "no real points: the Cartan index of V(ω_X) is -1",
            )
            .with(witness)],
            uniqueness_note: None,
        },
        Sign::Plus => Verdict::undetermined(
            Reason::new(
                "cartan_index",
                "no obstruction: the Cartan index of V(ω_X) is +1, which is necessary only",
            )
            .with(witness),
        ),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanRow {
    pub fixture: String,
    pub form: String,
    pub stable: bool,
    pub expected_stable: bool,
    pub witnesses: Vec<Witness>,
    /// Computed through the stored D4 relabeling.
    pub relabeled: bool,
}

impl ScanRow {
    pub fn matches(&self) -> bool {
        self.stable == self.expected_stable
    }

    pub fn to_json(&self) -> Value {
        json!({
            "fixture": self.fixture,
            "form": self.form,
            "stable": self.stable,
            "expected_stable": self.expected_stable,
            "matches": self.matches(),
            "labeling_reconciled": self.relabeled,
            "witnesses": self.witnesses.iter().map(Witness::to_json).collect::<Vec<_>>(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanReport {
    pub n_max: usize,
    /// The D_{2n} families.
    pub rows: Vec<ScanRow>,
    /// Other primitive fixtures, expected stable under every form.
    pub controls: Vec<ScanRow>,
}

impl ScanReport {
    pub fn failures(&self) -> impl Iterator<Item = &ScanRow> {
        self.rows.iter().chain(&self.controls).filter(|r| !r.stable)
    }

    pub fn mismatches(&self) -> impl Iterator<Item = &ScanRow> {
        self.rows.iter().chain(&self.controls).filter(|r| !r.matches())
    }

    pub fn matches_expectation(&self) -> bool {
        self.mismatches().next().is_none()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n_max": self.n_max,
            "rows": self.rows.iter().map(ScanRow::to_json).collect::<Vec<_>>(),
            "controls": self.controls.iter().map(ScanRow::to_json).collect::<Vec<_>>(),
            "matches_expectation": self.matches_expectation(),
        })
    }
}

/// `so(p,q)` with `p` and `q` odd.
pub fn odd_signature(sd: &SatakeDiagram) -> bool {
    sd.name().starts_with("so(") && sd.signature().is_some_and(|(p, q)| p % 2 == 1 && q % 2 == 1)
}

/// Runs the real-structure test on the `D_{2n}` families for `n ≤ n_max`
/// against every form of the ambient type; instability is expected exactly
/// for `so(p,q)` with `p, q` odd. Control fixtures must be stable throughout.
pub fn scan(n_max: usize) -> Result<ScanReport> {
    scan_with(Catalog::shipped(), n_max)
}

pub fn scan_with(catalog: &Catalog, n_max: usize) -> Result<ScanReport> {
    if !(2..=4).contains(&n_max) {
        return Err(Error::Schema(format!("scan range must be 2..=4, got {n_max}")));
    }
    let run = |names: &[&str], family: bool| -> Result<Vec<ScanRow>> {
        let mut jobs = Vec::new();
        for name in names {
            let sys = fixtures::fixture(name)?.system().expect("scan fixtures are systems");
            for sd in catalog.forms(sys.root_system.cartan_type())? {
                jobs.push((name.to_string(), sys.clone(), sd.clone()));
            }
        }
        let mut rows = jobs
            .into_par_iter()
            .map(|(fixture, sys, sd)| {
                let v = real_structure_exists(&sys, &sd)?;
                Ok(ScanRow {
                    fixture,
                    form: sd.name().to_string(),
                    stable: v.answer.is_yes(),
                    expected_stable: !(family && odd_signature(&sd)),
                    witnesses: v.witnesses().cloned().collect(),
                    relabeled: sys.relabel.is_some(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.sort_by(|a, b| (&a.fixture, &a.form).cmp(&(&b.fixture, &b.form)));
        Ok(rows)
    };
    Ok(ScanReport {
        n_max,
        rows: run(&fixtures::scan_fixture_names(n_max), true)?,
        controls: run(&CONTROL_FIXTURES, false)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::fixture;
    use crate::root_system::{RootSystem, RootVector, Weight};
    use crate::spherical::{borel_datum, luna_vust_of};
    use std::sync::Arc;

    fn form(ty: &str, id: &str) -> SatakeDiagram {
        Catalog::shipped().find(ty.parse().unwrap(), id).unwrap().clone()
    }

    fn forms(ty: &str) -> Vec<SatakeDiagram> {
        Catalog::shipped().forms(ty.parse().unwrap()).unwrap().to_vec()
    }

    fn sys(name: &str) -> SphericalSystem {
        fixture(name).unwrap().system().unwrap()
    }

    #[test]
    fn a3_product_under_su22() {
        let v = real_structure_exists(&sys("A3-product"), &form("A3", "su(2,2)")).unwrap();
        assert!(v.answer.is_no());
        assert_eq!(
            v.witnesses().next(),
            Some(&Witness::SphericalRoot { root: RootVector(vec![1, 0, 0]), image: RootVector(vec![0, 0, 1]) })
        );
        let v = real_structure_exists(&sys("A3-product"), &form("A3", "split")).unwrap();
        assert!(v.answer.is_yes());
        assert_eq!(v.uniqueness_note.as_deref(), Some(UNIQUENESS_NOTE));
    }

    #[test]
    fn hypotheses_enforced() {
        let mut s = sys("A3-product");
        s.spherically_closed = false;
        assert!(real_structure_exists(&s, &form("A3", "split")).unwrap_err().is_inapplicable());
        let e6 = sys("E6-nilpotent");
        assert!(cartan_index_obstruction(&e6, &form("E6", "EI")).unwrap_err().is_inapplicable());
        assert!(matches!(
            real_structure_exists(&e6, &form("E7", "EV")),
            Err(Error::TypeMismatch { .. })
        ));
        let err = guaranteed_real_points(&sys("A3-product"), &form("A3", "su(2,2)")).unwrap_err();
        assert!(err.is_inapplicable());
        assert!(real_point_orbit_filter(&sys("A3-product"), &form("A3", "su(2,2)")).is_err());
    }

    #[test]
    fn e6_every_form() {
        let e6 = sys("E6-nilpotent");
        for sd in forms("E6") {
            assert!(real_structure_exists(&e6, &sd).unwrap().answer.is_yes(), "{sd}");
            let g = guaranteed_real_points(&e6, &sd).unwrap();
            assert_eq!(g.answer.is_yes(), sd.black_nodes().is_empty(), "{sd}");
        }
        let filter = real_point_orbit_filter(&e6, &form("E6", "EIII")).unwrap();
        assert!(filter.rows[0].passes());
        assert_eq!(filter.verdict.answer, Answer::Undetermined);
        assert!(filter.verdict.reasons[0].rule.contains("necessary only"));
    }

    #[test]
    fn e7_obstruction() {
        let e7 = sys("E7-EVI-nilpotent");
        let v = cartan_index_obstruction(&e7, &form("E7", "EVI")).unwrap();
        assert!(v.answer.is_no());
        assert_eq!(
            v.witnesses().next(),
            Some(&Witness::CartanIndex { weight: Weight(vec![1; 7]), sign: Sign::Minus })
        );
        let v = cartan_index_obstruction(&e7, &form("E7", "split")).unwrap();
        assert_eq!(v.answer, Answer::Undetermined);
    }

    #[test]
    fn e8_examples() {
        let e8 = sys("E8-00000010");
        for sd in forms("E8") {
            assert!(sd.epsilon().is_identity());
            assert!(real_structure_exists(&e8, &sd).unwrap().answer.is_yes());
            let v = cartan_index_obstruction(&e8, &sd).unwrap();
            assert!(matches!(v.witnesses().next(), Some(Witness::CartanIndex { sign: Sign::Plus, .. })));
        }
        for id in ["EVIII", "EIX"] {
            assert!(guaranteed_real_points(&e8, &form("E8", id)).unwrap().answer.is_yes());
        }
        assert!(guaranteed_real_points(&e8, &form("E8", "compact")).unwrap().answer.is_no());
    }

    #[test]
    fn flags() {
        let viii = form("E8", "EVIII");
        let all: NodeSet = (0..8).collect();
        assert_eq!(flag_real_point(&all, &viii).unwrap(), FlagOutcome::RealPoint);
        let ix = form("E8", "EIX");
        assert!(flag_real_point(&[1, 2, 3, 4].into(), &ix).unwrap().is_real_point());
        assert!(flag_real_point(&[1, 2, 3, 4].into(), &viii).unwrap().is_real_point());
        let compact = form("A2", "su(3)");
        assert_eq!(flag_real_point(&NodeSet::new(), &compact).unwrap(), FlagOutcome::NoRealPoint);
        let su21 = form("A2", "su(2,1)");
        assert_eq!(flag_real_point(&[0].into(), &su21).unwrap(), FlagOutcome::StructureUndefined);
        assert!(flag_real_point(&[9].into(), &su21).is_err());
    }

    #[test]
    fn compact_form_points_lie_on_open_orbit() {
        for f in crate::fixtures::fixture_catalog() {
            let Some(s) = f.system() else { continue };
            let ty = s.root_system.cartan_type();
            let compact = Catalog::shipped().forms(ty).unwrap().iter().find(|sd| sd.is_compact()).unwrap();
            let Ok(filter) = real_point_orbit_filter(&s, compact) else { continue };
            for c in filter.candidates() {
                assert_eq!(c.s_sub, s.root_system.nodes(), "{}", f.name);
            }
        }
    }

    #[test]
    fn conjugacy() {
        let a3 = Arc::new(RootSystem::new("A3".parse().unwrap()));
        for sd in forms("A3") {
            assert!(conjugate_general(&borel_datum(a3.clone()), &sd).unwrap().answer.is_yes());
        }
        let single = fixture("A3-single-color").unwrap().datum().unwrap();
        assert!(conjugate_general(&single, &form("A3", "su(2,2)")).unwrap().answer.is_no());
        assert!(conjugate_general(&single, &form("A3", "split")).unwrap().answer.is_yes());

        let gamma = fixture("A2-monoid").unwrap().monoid().unwrap();
        let v = conjugate_affine(&gamma, &form("A2", "su(3)")).unwrap();
        assert!(v.answer.is_no());
        assert_eq!(
            v.witnesses().next(),
            Some(&Witness::MonoidGenerator { generator: Weight(vec![0, 1]), image: Weight(vec![1, 0]) })
        );
        let free = fixture("A2-free-monoid").unwrap().monoid().unwrap();
        assert!(conjugate_affine(&free, &form("A2", "su(3)")).unwrap().answer.is_yes());
    }

    #[test]
    fn general_and_wonderful_criteria_agree() {
        for f in crate::fixtures::fixture_catalog() {
            let Some(s) = f.system() else { continue };
            let d = luna_vust_of(&s);
            for sd in Catalog::shipped().forms(s.root_system.cartan_type()).unwrap() {
                let eff = effective_diagram(&s, sd).unwrap();
                let a = is_epsilon_stable_lv(eff.epsilon(), &d).unwrap().is_stable();
                let b = real_structure_exists(&s, sd).unwrap().answer.is_yes();
                assert_eq!(a, b, "{} {}", f.name, sd);
            }
        }
    }

    #[test]
    fn wonderfulness() {
        let d6 = fixture("D6-37-lv").unwrap().datum().unwrap();
        assert!(has_wonderful_cone(&d6));
        for sd in forms("D6") {
            assert!(wonderfulness_preserved(&d6, sd.epsilon()).unwrap());
        }
        let gb = fixture("GB-A3").unwrap().datum().unwrap();
        assert!(has_wonderful_cone(&gb));
        assert!(wonderfulness_preserved(&gb, form("A3", "su(2,2)").epsilon()).unwrap());
    }

    #[test]
    fn scan_small() {
        let r = scan(3).unwrap();
        assert!(r.matches_expectation(), "{:#?}", r.mismatches().collect::<Vec<_>>());
        let failing: Vec<_> = r.failures().map(|r| (r.fixture.as_str(), r.form.as_str())).collect();
        assert!(failing.contains(&("D6-37", "so(5,7)")));
        let so57 = r.rows.iter().find(|r| r.fixture == "D6-37" && r.form == "so(5,7)").unwrap();
        assert!(so57.witnesses.contains(&Witness::SphericalRoot {
            root: RootVector(vec![0, 0, 0, 0, 0, 2]),
            image: RootVector(vec![0, 0, 0, 0, 2, 0]),
        }));
        assert!(scan(5).is_err());
    }
}
