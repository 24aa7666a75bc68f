//! JSON data files for spherical systems, Luna–Vust data and weight
//! monoids. Node indices in files are 1-based.
//!
//! ```json
//! {"kind": "spherical_system", "type": "A3", "sp": [], "sigma": [[1,0,0],[0,1,1]],
//!  "a": [{"pairings": [1,0], "owners": [1]}], "spherically_closed": true}
//! ```
//!
//! `type` is either `"A3"` or `"A"` together with `"rank": 3`. Without a
//! `kind` field the kind is read off the keys: `sigma`, `lattice` or
//! `generators`.

use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::automorphism::DiagramAutomorphism;
use crate::error::{Error, Result};
use crate::fixtures::FixtureData;
use crate::root_system::{CartanType, RootSystem, RootVector, Weight};
use crate::spherical::{AElement, ColorDatum, LunaVustDatum, SphericalSystem, WeightMonoid};
use crate::NodeSet;

pub const KIND_SYSTEM: &str = "spherical_system";
pub const KIND_LUNA_VUST: &str = "luna_vust";
pub const KIND_MONOID: &str = "weight_monoid";

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AElementFile {
    pub pairings: Vec<i64>,
    pub owners: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemFile {
    #[serde(default)]
    pub kind: Option<String>,
    #[serde(rename = "type")]
    pub ty: String,
    #[serde(default)]
    pub rank: Option<usize>,
    #[serde(default)]
    pub sp: Vec<usize>,
    pub sigma: Vec<Vec<i64>>,
    #[serde(default)]
    pub a: Vec<AElementFile>,
    #[serde(default)]
    pub spherically_closed: bool,
    #[serde(default)]
    pub strict: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_x: Option<Vec<i64>>,
    /// Permutation (1-based) sending a node of the file's labeling to the
    /// catalog's.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relabel: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ColorFile {
    pub rho: Vec<i64>,
    pub moved: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LunaVustFile {
    #[serde(default)]
    pub kind: Option<String>,
    #[serde(rename = "type")]
    pub ty: String,
    #[serde(default)]
    pub rank: Option<usize>,
    pub lattice: Vec<Vec<i64>>,
    #[serde(default)]
    pub valuation_cone: Vec<Vec<i64>>,
    #[serde(default)]
    pub colors: Vec<ColorFile>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonoidFile {
    #[serde(default)]
    pub kind: Option<String>,
    #[serde(rename = "type")]
    pub ty: String,
    #[serde(default)]
    pub rank: Option<usize>,
    pub generators: Vec<Vec<i64>>,
}

fn root_system(ty: &str, rank: Option<usize>) -> Result<Arc<RootSystem>> {
    let ty = ty.trim();
    let parsed: CartanType = if ty.len() == 1 {
        let rank = rank.ok_or_else(|| Error::Schema(format!("field `rank` is required with type `{ty}`")))?;
        format!("{ty}{rank}").parse()?
    } else {
        let t: CartanType = ty.parse()?;
        if let Some(r) = rank.filter(|&r| r != t.rank()) {
            return Err(Error::RankMismatch {
                expected: t.rank(),
                found: r,
            });
        }
        t
    };
    Ok(Arc::new(RootSystem::new(parsed)))
}

fn node(i: usize, rank: usize) -> Result<usize> {
    if i == 0 || i > rank {
        return Err(Error::NodeOutOfRange { index: i, rank });
    }
    Ok(i - 1)
}

fn node_set(v: &[usize], rank: usize) -> Result<NodeSet> {
    v.iter().map(|&i| node(i, rank)).collect()
}

fn one_based(s: &NodeSet) -> Vec<usize> {
    s.iter().map(|i| i + 1).collect()
}

fn check_len(what: &str, v: &[i64], rank: usize) -> Result<()> {
    if v.len() == rank {
        Ok(())
    } else {
        Err(Error::Schema(format!(
            "field `{what}`: vector {v:?} has length {}, expected {rank}",
            v.len()
        )))
    }
}

impl SystemFile {
    pub fn into_system(self) -> Result<SphericalSystem> {
        let rs = root_system(&self.ty, self.rank)?;
        let n = rs.rank();
        for g in &self.sigma {
            check_len("sigma", g, n)?;
        }
        let a = self
            .a
            .into_iter()
            .map(|e| {
                Ok(AElement {
                    pairings: e.pairings,
                    owners: node_set(&e.owners, n)?,
                })
            })
            .collect::<Result<_>>()?;
        let relabel = self
            .relabel
            .map(|p| {
                if p.len() != n {
                    return Err(Error::Schema(format!("field `relabel` must list {n} nodes")));
                }
                DiagramAutomorphism::from_perm(p.iter().map(|&i| node(i, n)).collect::<Result<_>>()?)
            })
            .transpose()?;
        if let Some(w) = &self.omega_x {
            check_len("omega_x", w, n)?;
        }
        let mut sys = SphericalSystem::new(
            rs,
            node_set(&self.sp, n)?,
            self.sigma.into_iter().map(RootVector).collect(),
            a,
        );
        sys.spherically_closed = self.spherically_closed;
        sys.strict = self.strict;
        sys.omega_x = self.omega_x.map(Weight);
        sys.relabel = relabel;
        Ok(sys)
    }

    pub fn from_system(sys: &SphericalSystem) -> Self {
        Self {
            kind: Some(KIND_SYSTEM.into()),
            ty: sys.root_system.cartan_type().to_string(),
            rank: None,
            sp: one_based(&sys.sp),
            sigma: sys.sigma.iter().map(|g| g.0.clone()).collect(),
            a: sys
                .a
                .iter()
                .map(|e| AElementFile {
                    pairings: e.pairings.clone(),
                    owners: one_based(&e.owners),
                })
                .collect(),
            spherically_closed: sys.spherically_closed,
            strict: sys.strict,
            omega_x: sys.omega_x.as_ref().map(|w| w.0.clone()),
            relabel: sys.relabel.as_ref().map(|r| r.perm().iter().map(|i| i + 1).collect()),
        }
    }
}

impl LunaVustFile {
    pub fn into_datum(self) -> Result<LunaVustDatum> {
        let rs = root_system(&self.ty, self.rank)?;
        let n = rs.rank();
        for b in &self.lattice {
            check_len("lattice", b, n)?;
        }
        let colors = self
            .colors
            .into_iter()
            .map(|c| {
                Ok(ColorDatum {
                    rho: c.rho,
                    moved: node_set(&c.moved, n)?,
                })
            })
            .collect::<Result<_>>()?;
        let d = LunaVustDatum {
            root_system: rs,
            lattice_basis: self.lattice.into_iter().map(Weight).collect(),
            valuation_generators: self.valuation_cone,
            colors,
        };
        d.validate()?;
        Ok(d)
    }

    pub fn from_datum(d: &LunaVustDatum) -> Self {
        Self {
            kind: Some(KIND_LUNA_VUST.into()),
            ty: d.root_system.cartan_type().to_string(),
            rank: None,
            lattice: d.lattice_basis.iter().map(|w| w.0.clone()).collect(),
            valuation_cone: d.valuation_generators.clone(),
            colors: d
                .colors
                .iter()
                .map(|c| ColorFile {
                    rho: c.rho.clone(),
                    moved: one_based(&c.moved),
                })
                .collect(),
        }
    }
}

impl MonoidFile {
    pub fn into_monoid(self) -> Result<WeightMonoid> {
        let rs = root_system(&self.ty, self.rank)?;
        for g in &self.generators {
            check_len("generators", g, rs.rank())?;
        }
        let m = WeightMonoid::new(rs, self.generators.into_iter().map(Weight).collect());
        m.validate()?;
        Ok(m)
    }

    pub fn from_monoid(m: &WeightMonoid) -> Self {
        Self {
            kind: Some(KIND_MONOID.into()),
            ty: m.root_system.cartan_type().to_string(),
            rank: None,
            generators: m.generators.iter().map(|w| w.0.clone()).collect(),
        }
    }
}

fn schema_err(e: serde_json::Error) -> Error {
    Error::Schema(format!("{e}"))
}

fn parse_as<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(schema_err)
}

/// Reads any of the three file kinds.
pub fn parse_data(text: &str) -> Result<FixtureData> {
    let v: Value = serde_json::from_str(text).map_err(schema_err)?;
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Schema("top level must be a JSON object".into()))?;
    let kind = match obj.get("kind") {
        Some(Value::String(k)) => k.clone(),
        Some(_) => return Err(Error::Schema("field `kind` must be a string".into())),
        None if obj.contains_key("sigma") => KIND_SYSTEM.into(),
        None if obj.contains_key("lattice") => KIND_LUNA_VUST.into(),
        None if obj.contains_key("generators") => KIND_MONOID.into(),
        None => {
            return Err(Error::Schema(
                "cannot tell the file kind: expected `kind`, `sigma`, `lattice` or `generators`".into(),
            ))
        }
    };
    match kind.as_str() {
        KIND_SYSTEM => Ok(FixtureData::System(parse_as::<SystemFile>(text)?.into_system()?)),
        KIND_LUNA_VUST => Ok(FixtureData::LunaVust(parse_as::<LunaVustFile>(text)?.into_datum()?)),
        KIND_MONOID => Ok(FixtureData::Monoid(parse_as::<MonoidFile>(text)?.into_monoid()?)),
        other => Err(Error::Schema(format!("unknown kind `{other}`"))),
    }
}

pub fn to_json(data: &FixtureData) -> Value {
    let v = match data {
        FixtureData::System(s) => serde_json::to_value(SystemFile::from_system(s)),
        FixtureData::LunaVust(d) => serde_json::to_value(LunaVustFile::from_datum(d)),
        FixtureData::Monoid(m) => serde_json::to_value(MonoidFile::from_monoid(m)),
    };
    v.expect("file structs serialize")
}
