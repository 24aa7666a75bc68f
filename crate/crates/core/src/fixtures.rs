//! Named spherical systems, Luna–Vust data and weight monoids used as
//! worked examples and test anchors. Each entry carries a provenance string
//! saying which fields are transcribed and which were completed.

use std::sync::Arc;

use crate::automorphism::DiagramAutomorphism;
use crate::error::{Error, Result};
use crate::root_system::{CartanType, RootSystem, RootVector, Weight};
use crate::spherical::{
    borel_datum, luna_vust_of, AElement, ColorDatum, LunaVustDatum, SphericalSystem, WeightMonoid,
};
use crate::NodeSet;

#[derive(Debug, Clone)]
pub enum FixtureData {
    System(SphericalSystem),
    LunaVust(LunaVustDatum),
    Monoid(WeightMonoid),
}

#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub summary: &'static str,
    pub provenance: &'static str,
    pub data: FixtureData,
}

impl Fixture {
    pub fn kind(&self) -> &'static str {
        match self.data {
            FixtureData::System(_) => "spherical_system",
            FixtureData::LunaVust(_) => "luna_vust",
            FixtureData::Monoid(_) => "weight_monoid",
        }
    }

    pub fn cartan_type(&self) -> CartanType {
        match &self.data {
            FixtureData::System(s) => s.root_system.cartan_type(),
            FixtureData::LunaVust(d) => d.root_system.cartan_type(),
            FixtureData::Monoid(m) => m.root_system.cartan_type(),
        }
    }

    pub fn system(&self) -> Option<SphericalSystem> {
        match &self.data {
            FixtureData::System(s) => Some(s.clone()),
            _ => None,
        }
    }

    pub fn datum(&self) -> Option<LunaVustDatum> {
        match &self.data {
            FixtureData::LunaVust(d) => Some(d.clone()),
            _ => None,
        }
    }

    pub fn monoid(&self) -> Option<WeightMonoid> {
        match &self.data {
            FixtureData::Monoid(m) => Some(m.clone()),
            _ => None,
        }
    }
}

fn rs(ty: &str) -> Arc<RootSystem> {
    Arc::new(RootSystem::new(ty.parse().expect("fixture type")))
}

/// Parses `α1+2α2+α3` (or with `a` for `α`) into a root-lattice vector.
pub fn parse_root(s: &str, rank: usize) -> Result<RootVector> {
    let bad = || Error::Schema(format!("cannot parse `{s}` as a combination of simple roots"));
    let mut v = RootVector::zero(rank);
    for term in s.split('+').map(str::trim) {
        let (coeff, idx) = term
            .split_once('α')
            .or_else(|| term.split_once('a'))
            .ok_or_else(bad)?;
        let c: i64 = if coeff.is_empty() { 1 } else { coeff.parse().map_err(|_| bad())? };
        let i: usize = idx.parse().map_err(|_| bad())?;
        if i == 0 || i > rank {
            return Err(Error::NodeOutOfRange { index: i, rank });
        }
        v.0[i - 1] += c;
    }
    Ok(v)
}

fn roots(rank: usize, list: &[&str]) -> Vec<RootVector> {
    list.iter().map(|s| parse_root(s, rank).expect("fixture root")).collect()
}

fn nodes(one_based: &[usize]) -> NodeSet {
    one_based.iter().map(|i| i - 1).collect()
}

fn closed(mut s: SphericalSystem) -> SphericalSystem {
    s.spherically_closed = true;
    s
}

/// Family `Σ = {α1+2α2+α3, α3+2α4+α5, …, α_{2n-3}+2α_{2n-2}+α_{2n-1}, 2α_{2n}}`
/// in `D_{2n}`, with `S^p` the odd nodes.
pub fn d_even_family(n: usize) -> SphericalSystem {
    assert!(n >= 2, "family starts at D4");
    let rank = 2 * n;
    let mut sigma: Vec<String> = (0..n - 1)
        .map(|k| format!("α{}+2α{}+α{}", 2 * k + 1, 2 * k + 2, 2 * k + 3))
        .collect();
    sigma.push(format!("2α{rank}"));
    let sigma: Vec<&str> = sigma.iter().map(String::as_str).collect();
    let sp = (1..rank).step_by(2).collect::<Vec<_>>();
    closed(SphericalSystem::new(
        rs(&format!("D{rank}")),
        nodes(&sp),
        roots(rank, &sigma),
        vec![],
    ))
}

fn d4_twisted(sigma: &[&str], sp: &[usize]) -> SphericalSystem {
    let mut s = closed(SphericalSystem::new(rs("D4"), nodes(sp), roots(4, sigma), vec![]));
    s.relabel = Some(DiagramAutomorphism::from_swaps(4, &[(0, 2)]).expect("D4 relabel"));
    s
}

pub fn fixture_catalog() -> Vec<Fixture> {
    let mut out = Vec::new();
    let mut push = |name, summary, provenance, data| {
        out.push(Fixture {
            name,
            summary,
            provenance,
            data,
        })
    };

    let a3 = closed(SphericalSystem::new(
        rs("A3"),
        NodeSet::new(),
        roots(3, &["α1", "α2+α3"]),
        vec![
            AElement { pairings: vec![1, 0], owners: nodes(&[1]) },
            AElement { pairings: vec![1, -1], owners: nodes(&[1]) },
        ],
    ));
    push(
        "A3-product",
        "SL4-variety (∅, {α1, α2+α3}, A); not stable under su(2,2)",
        "S^p and Σ as published; the published A is empty, which leaves the simple spherical \
         root α1 without colors, so A was completed with the two elements owned by α1 \
         (pairings (1,0) and (1,-1))",
        FixtureData::System(a3),
    );
    push(
        "A3-induced",
        "(∅, {α1+α2}, ∅) in A3",
        "constructed: parabolic induction of the SL3/GL2 system",
        FixtureData::System(closed(SphericalSystem::new(
            rs("A3"),
            NodeSet::new(),
            roots(3, &["α1+α2"]),
            vec![],
        ))),
    );
    let mut full_flag = closed(SphericalSystem::new(rs("A2"), NodeSet::new(), vec![], vec![]));
    full_flag.strict = true;
    push(
        "A2-full-flag",
        "rank-0 system of the flag variety SL3/B",
        "constructed",
        FixtureData::System(full_flag),
    );

    push(
        "D4-34",
        "(34) in D4: Σ = {2α1, 2α2, α3+α4}",
        "Σ as published; S^p = ∅ and A = ∅ completed from the classification of primitive \
         systems; relabeled α1↔α3 into the vector labeling",
        FixtureData::System(d4_twisted(&["2α1", "2α2", "α3+α4"], &[])),
    );
    push(
        "D4-36",
        "(36) in D4: Σ = {2α1+2α2+α3+α4}",
        "Σ as published; S^p = {α2, α3, α4} and A = ∅ completed from the classification of \
         primitive systems; relabeled α1↔α3 into the vector labeling",
        FixtureData::System(d4_twisted(&["2α1+2α2+α3+α4"], &[2, 3, 4])),
    );
    for (name, n, summary) in [
        ("D4-37", 2, "(37) in D4: Σ = {α1+2α2+α3, 2α4}"),
        ("D6-37", 3, "(37) in D6: Σ = {α1+2α2+α3, α3+2α4+α5, 2α6}"),
        ("D8-37", 4, "(37) in D8: Σ = {α1+2α2+α3, α3+2α4+α5, α5+2α6+α7, 2α8}"),
    ] {
        push(
            name,
            summary,
            "Σ follows the published pattern; S^p = odd nodes (the compact roots of so*(4n)) \
             and A = ∅ completed from the classification of primitive systems",
            FixtureData::System(d_even_family(n)),
        );
    }
    push(
        "D6-37-lv",
        "Luna–Vust datum of D6-37",
        "derived from D6-37: lattice ZΣ, cone dual to -Σ, one functional per color",
        FixtureData::LunaVust(luna_vust_of(&d_even_family(3))),
    );

    push(
        "E6-nilpotent",
        "(∅, {α1+α6, α3+α5, α2+α4}, ∅) in E6, stable under every real form",
        "S^p, Σ and A as published",
        FixtureData::System(closed(SphericalSystem::new(
            rs("E6"),
            NodeSet::new(),
            roots(6, &["α1+α6", "α3+α5", "α2+α4"]),
            vec![],
        ))),
    );
    let mut e7 = closed(SphericalSystem::new(
        rs("E7"),
        NodeSet::new(),
        roots(7, &["2α1", "2α3", "α2+α4", "2α5", "2α6", "2α7"]),
        vec![],
    ));
    e7.strict = true;
    push(
        "E7-EVI-nilpotent",
        "E7 nilpotent-orbit variety whose colors are the fundamental weights",
        "S^p = ∅ and the identification of colors with fundamental weights as published; Σ \
         reconstructed (not published) so that the colors are one per simple root",
        FixtureData::System(e7),
    );
    let mut e8 = closed(SphericalSystem::new(
        rs("E8"),
        nodes(&[2, 3, 4, 5]),
        roots(8, &["2α1+α2+2α3+2α4+α5", "α2+α3+2α4+2α5+2α6", "α7+α8"]),
        vec![],
    ));
    e8.strict = true;
    push(
        "E8-00000010",
        "E8 nilpotent-orbit variety with S_X = {α2, α3, α4, α5}",
        "S^p = S_X as published; Σ reconstructed (not published) as a rank-3 system \
         compatible with that S^p",
        FixtureData::System(e8),
    );

    push(
        "GB-A3",
        "Luna–Vust datum of SL4/B⁻",
        "constructed: trivial lattice and cone, one color per simple root",
        FixtureData::LunaVust(borel_datum(rs("A3"))),
    );
    let a3rs = rs("A3");
    push(
        "A3-single-color",
        "rank-0 Luna–Vust datum of A3 with one color moved by α1",
        "constructed",
        FixtureData::LunaVust(LunaVustDatum {
            root_system: a3rs,
            lattice_basis: vec![],
            valuation_generators: vec![],
            colors: vec![ColorDatum { rho: vec![], moved: nodes(&[1]) }],
        }),
    );

    push(
        "A2-monoid",
        "weight monoid ⟨ω1+ω2, ω2⟩ of an affine SL3-space",
        "generators as published",
        FixtureData::Monoid(WeightMonoid::new(
            rs("A2"),
            vec![Weight(vec![1, 1]), Weight(vec![0, 1])],
        )),
    );
    push(
        "A2-free-monoid",
        "weight monoid ⟨ω1, ω2⟩ of SL3/U",
        "constructed",
        FixtureData::Monoid(WeightMonoid::new(
            rs("A2"),
            vec![Weight(vec![1, 0]), Weight(vec![0, 1])],
        )),
    );
    out
}

/// Looks a fixture up by name, ignoring case.
pub fn fixture(name: &str) -> Result<Fixture> {
    fixture_catalog()
        .into_iter()
        .find(|f| f.name.eq_ignore_ascii_case(name.trim()))
        .ok_or_else(|| Error::UnknownFixture(name.to_string()))
}

/// The fixtures of the D_{2n} families scanned by [`crate::criteria::scan`],
/// for `n = 2..=n_max`.
pub fn scan_fixture_names(n_max: usize) -> Vec<&'static str> {
    let mut names = vec!["D4-34", "D4-36", "D4-37"];
    names.extend(["D6-37", "D8-37"].into_iter().take(n_max.saturating_sub(2)));
    names
}

/// Other primitive fixtures, expected stable under every form.
pub const CONTROL_FIXTURES: [&str; 3] = ["E6-nilpotent", "E7-EVI-nilpotent", "E8-00000010"];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spherical::{color_weight_sum, colors, validate_system};

    #[test]
    fn parse_roots() {
        assert_eq!(parse_root("α1+2α2+α3", 4).unwrap(), RootVector(vec![1, 2, 1, 0]));
        assert_eq!(parse_root("2a4", 4).unwrap(), RootVector(vec![0, 0, 0, 2]));
        assert!(parse_root("α5", 4).is_err());
        assert!(parse_root("β1", 4).is_err());
    }

    #[test]
    fn every_system_fixture_is_valid() {
        for f in fixture_catalog() {
            match &f.data {
                FixtureData::System(s) => assert!(validate_system(s).is_empty(), "{}", f.name),
                FixtureData::LunaVust(d) => d.validate().unwrap(),
                FixtureData::Monoid(m) => m.validate().unwrap(),
            }
        }
    }

    #[test]
    fn names_are_unique() {
        let cat = fixture_catalog();
        let mut names: Vec<_> = cat.iter().map(|f| f.name.to_lowercase()).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), cat.len());
        assert!(matches!(fixture("nope"), Err(Error::UnknownFixture(_))));
    }

    #[test]
    fn published_data() {
        let d6 = fixture("D6-37").unwrap().system().unwrap();
        assert_eq!(d6.sigma, roots(6, &["α1+2α2+α3", "α3+2α4+α5", "2α6"]));
        assert_eq!(d6.sp, nodes(&[1, 3, 5]));

        let e8 = fixture("e8-00000010").unwrap().system().unwrap();
        assert_eq!(e8.sp, nodes(&[2, 3, 4, 5]));

        let e7 = fixture("E7-EVI-nilpotent").unwrap().system().unwrap();
        assert_eq!(color_weight_sum(&e7), Weight(vec![1; 7]));
        assert_eq!(colors(&e7).len(), 7);
    }

    #[test]
    fn scan_families() {
        assert_eq!(scan_fixture_names(2), ["D4-34", "D4-36", "D4-37"]);
        assert_eq!(scan_fixture_names(4).len(), 5);
        assert_eq!(d_even_family(4).sigma.len(), 4);
    }
}
