//! Existence of real structures on spherical homogeneous spaces and
//! wonderful varieties, decided combinatorially from the Satake diagram of a
//! real form and the combinatorial invariants of the variety.
//!
//! ```
//! use real_spherical::{fixtures, real_structure_exists, Catalog};
//!
//! let sys = fixtures::fixture("A3-product").unwrap().system().unwrap();
//! let su22 = Catalog::shipped().find("A3".parse().unwrap(), "su(2,2)").unwrap();
//! let v = real_structure_exists(&sys, su22).unwrap();
//! assert!(v.answer.is_no());
//! ```

use std::collections::BTreeSet;

pub mod automorphism;
pub mod cli;
pub mod criteria;
pub mod error;
pub mod fixtures;
pub mod io;
pub mod linalg;
pub mod real_form;
pub mod root_system;
pub mod spherical;

pub use automorphism::DiagramAutomorphism;
pub use criteria::{
    cartan_index_obstruction, conjugate_affine, conjugate_general, flag_real_point,
    guaranteed_real_points, real_point_orbit_filter, real_structure_exists, scan,
    wonderfulness_preserved, Answer, FlagOutcome, Reason, Verdict,
};
pub use error::{Error, Result};
pub use real_form::{cartan_index, epsilon_sigma, Catalog, SatakeDiagram, Sign};
pub use root_system::{CartanType, RootSystem, RootVector, TypeLetter, Weight};
pub use spherical::{
    LunaVustDatum, OrbitDescriptor, SphericalSystem, Stability, WeightMonoid, Witness,
};

/// A set of simple-root indices (0-based).
pub type NodeSet = BTreeSet<usize>;

/// Every valid simple type of rank at most `max_rank`, in the order
/// A, B, C, D, E, F, G and by rank.
pub fn all_types(max_rank: usize) -> Vec<CartanType> {
    let letters = [
        TypeLetter::A,
        TypeLetter::B,
        TypeLetter::C,
        TypeLetter::D,
        TypeLetter::E,
        TypeLetter::F,
        TypeLetter::G,
    ];
    letters
        .iter()
        .flat_map(|&l| {
            (1..=max_rank).filter_map(move |n| {
                let ty = CartanType::new(l, n).ok()?;
                (ty.letter() == l && ty.rank() == n).then_some(ty)
            })
        })
        .collect()
}

/// `{α1,α3}`, or `∅`
pub fn fmt_nodes(nodes: &NodeSet) -> String {
    if nodes.is_empty() {
        return "∅".into();
    }
    let inner: Vec<String> = nodes.iter().map(|i| format!("α{}", i + 1)).collect();
    format!("{{{}}}", inner.join(","))
}
