use std::fmt;

use crate::error::{Error, Result};
use crate::root_system::{RootSystem, RootVector, Weight};
use crate::NodeSet;

/// A permutation of the simple roots, extended linearly to the root and
/// weight lattices. `perm[i] = j` means `α_i ↦ α_j` and `ω_i ↦ ω_j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DiagramAutomorphism {
    perm: Vec<usize>,
}

impl DiagramAutomorphism {
    pub fn identity(rank: usize) -> Self {
        Self {
            perm: (0..rank).collect(),
        }
    }

    /// Accepts any permutation of `0..perm.len()`; whether it respects a
    /// Cartan matrix is a separate check.
    pub fn from_perm(perm: Vec<usize>) -> Result<Self> {
        let n = perm.len();
        let mut hit = vec![false; n];
        for &p in &perm {
            if p >= n || hit[p] {
                return Err(Error::Schema(format!("{perm:?} is not a permutation")));
            }
            hit[p] = true;
        }
        Ok(Self { perm })
    }

    /// Product of disjoint transpositions on `0..rank`.
    pub fn from_swaps(rank: usize, swaps: &[(usize, usize)]) -> Result<Self> {
        let mut perm: Vec<usize> = (0..rank).collect();
        for &(a, b) in swaps {
            if a >= rank || b >= rank {
                return Err(Error::NodeOutOfRange {
                    index: a.max(b),
                    rank,
                });
            }
            perm.swap(a, b);
        }
        Self::from_perm(perm)
    }

    pub fn rank(&self) -> usize {
        self.perm.len()
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn image(&self, i: usize) -> usize {
        self.perm[i]
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }

    pub fn is_involution(&self) -> bool {
        self.perm.iter().all(|&p| self.perm[p] < self.perm.len()) && self.then(self).is_identity()
    }

    /// `a_{ij} = a_{ε(i)ε(j)}` for all nodes.
    pub fn is_cartan_automorphism(&self, rs: &RootSystem) -> bool {
        let n = rs.rank();
        self.rank() == n
            && (0..n).all(|i| {
                (0..n).all(|j| rs.cartan().get(i, j) == rs.cartan().get(self.perm[i], self.perm[j]))
            })
    }

    /// `self` after `first`: `i ↦ self(first(i))`.
    pub fn after(&self, first: &Self) -> Self {
        Self {
            perm: first.perm.iter().map(|&i| self.perm[i]).collect(),
        }
    }

    /// `other` after `self`.
    pub fn then(&self, other: &Self) -> Self {
        other.after(self)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.perm.len()];
        for (i, &p) in self.perm.iter().enumerate() {
            inv[p] = i;
        }
        Self { perm: inv }
    }

    /// The automorphism expressed in relabeled coordinates: if `relabel`
    /// sends a node of the new labeling to the old one, the result is
    /// `relabel⁻¹ ∘ self ∘ relabel`.
    pub fn conjugated_by(&self, relabel: &Self) -> Self {
        relabel.inverse().after(&self.after(relabel))
    }

    fn check(&self, len: usize) -> Result<()> {
        if len == self.rank() {
            Ok(())
        } else {
            Err(Error::RankMismatch {
                expected: self.rank(),
                found: len,
            })
        }
    }

    fn permute(&self, coords: &[i64]) -> Vec<i64> {
        let mut out = vec![0; coords.len()];
        for (i, &c) in coords.iter().enumerate() {
            out[self.perm[i]] = c;
        }
        out
    }

    pub fn apply_root(&self, v: &RootVector) -> Result<RootVector> {
        self.check(v.len())?;
        Ok(RootVector(self.permute(&v.0)))
    }

    pub fn apply_weight(&self, w: &Weight) -> Result<Weight> {
        self.check(w.len())?;
        Ok(Weight(self.permute(&w.0)))
    }

    pub fn apply_nodes(&self, nodes: &NodeSet) -> NodeSet {
        nodes.iter().map(|&i| self.perm[i]).collect()
    }
}

impl fmt::Display for DiagramAutomorphism {
    /// Cycle notation on 1-based labels, `id` for the identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.perm.len()];
        let mut any = false;
        for start in 0..self.perm.len() {
            if seen[start] || self.perm[start] == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push(format!("α{}", i + 1));
                i = self.perm[i];
            }
            if cycle.len() == 2 {
                write!(f, "{}{}↔{}", if any { " " } else { "" }, cycle[0], cycle[1])?;
            } else {
                write!(f, "{}({})", if any { " " } else { "" }, cycle.join(" "))?;
            }
            any = true;
        }
        if !any {
            write!(f, "id")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutes_coordinates() {
        let e = DiagramAutomorphism::from_swaps(3, &[(0, 2)]).unwrap();
        assert_eq!(
            e.apply_root(&RootVector(vec![0, 1, 1])).unwrap(),
            RootVector(vec![1, 1, 0])
        );
        assert_eq!(e.apply_weight(&Weight(vec![1, 0, 1])).unwrap(), Weight(vec![1, 0, 1]));
        assert!(e.is_involution());
        assert_eq!(e.to_string(), "α1↔α3");
        assert_eq!(DiagramAutomorphism::identity(2).to_string(), "id");
        assert!(e.apply_root(&RootVector(vec![1])).is_err());
    }

    #[test]
    fn rejects_non_permutations() {
        assert!(DiagramAutomorphism::from_perm(vec![0, 0]).is_err());
        assert!(DiagramAutomorphism::from_perm(vec![2, 0]).is_err());
    }

    #[test]
    fn conjugation() {
        let swap34 = DiagramAutomorphism::from_swaps(4, &[(2, 3)]).unwrap();
        let tau = DiagramAutomorphism::from_swaps(4, &[(0, 2)]).unwrap();
        let c = swap34.conjugated_by(&tau);
        assert_eq!(c.perm(), &[3, 1, 2, 0]);
        let d4 = RootSystem::new("D4".parse().unwrap());
        assert!(c.is_cartan_automorphism(&d4));
        let a3 = RootSystem::new("A3".parse().unwrap());
        assert!(!DiagramAutomorphism::from_swaps(3, &[(0, 1)])
            .unwrap()
            .is_cartan_automorphism(&a3));
    }
}
