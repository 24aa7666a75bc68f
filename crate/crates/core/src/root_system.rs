//! Simple root systems in Bourbaki labeling.
//!
//! Roots are integer vectors in the basis of simple roots, weights are
//! integer vectors in the basis of fundamental weights. Node indices are
//! 0-based in this API; `α1` in the printed form is node `0`.
//!
//! The Cartan matrix is stored as `a[i][j] = <α_i^∨, α_j>`, so row `i`
//! computes the pairing of a root with the coroot `α_i^∨` and column `j` is
//! `α_j` written in fundamental weights.

use std::collections::HashSet;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::automorphism::DiagramAutomorphism;
use crate::error::{Error, Result};
use crate::NodeSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TypeLetter {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl TypeLetter {
    pub fn from_char(c: char) -> Option<Self> {
        Some(match c.to_ascii_uppercase() {
            'A' => Self::A,
            'B' => Self::B,
            'C' => Self::C,
            'D' => Self::D,
            'E' => Self::E,
            'F' => Self::F,
            'G' => Self::G,
            _ => return None,
        })
    }

    pub fn as_char(self) -> char {
        match self {
            Self::A => 'A',
            Self::B => 'B',
            Self::C => 'C',
            Self::D => 'D',
            Self::E => 'E',
            Self::F => 'F',
            Self::G => 'G',
        }
    }
}

/// A simple type such as `D4`. Construction validates the rank; `D3` is
/// normalized to `A3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CartanType {
    letter: TypeLetter,
    rank: usize,
}

impl CartanType {
    pub fn new(letter: TypeLetter, rank: usize) -> Result<Self> {
        let ok = match letter {
            TypeLetter::A => rank >= 1,
            TypeLetter::B | TypeLetter::C => rank >= 2,
            TypeLetter::D => rank >= 3,
            TypeLetter::E => (6..=8).contains(&rank),
            TypeLetter::F => rank == 4,
            TypeLetter::G => rank == 2,
        };
        if !ok {
            return Err(Error::InvalidType {
                letter: letter.as_char(),
                rank,
            });
        }
        if letter == TypeLetter::D && rank == 3 {
            return Ok(Self {
                letter: TypeLetter::A,
                rank: 3,
            });
        }
        Ok(Self { letter, rank })
    }

    pub fn letter(self) -> TypeLetter {
        self.letter
    }

    pub fn rank(self) -> usize {
        self.rank
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.letter.as_char(), self.rank)
    }
}

impl FromStr for CartanType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let letter = chars
            .next()
            .and_then(TypeLetter::from_char)
            .ok_or_else(|| Error::UnparsableType(s.to_string()))?;
        let rank: usize = chars
            .as_str()
            .trim_start_matches('_')
            .parse()
            .map_err(|_| Error::UnparsableType(s.to_string()))?;
        Self::new(letter, rank)
    }
}

fn fmt_combination(f: &mut fmt::Formatter<'_>, coords: &[i64], symbol: &str) -> fmt::Result {
    let mut first = true;
    for (i, &c) in coords.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let sign = if c < 0 { "-" } else if first { "" } else { "+" };
        let mag = c.unsigned_abs();
        if mag == 1 {
            write!(f, "{sign}{symbol}{}", i + 1)?;
        } else {
            write!(f, "{sign}{mag}{symbol}{}", i + 1)?;
        }
        first = false;
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

macro_rules! int_vector {
    ($name:ident, $symbol:literal) => {
        #[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(pub Vec<i64>);

        impl $name {
            pub fn zero(rank: usize) -> Self {
                Self(vec![0; rank])
            }

            pub fn unit(rank: usize, i: usize) -> Self {
                let mut v = vec![0; rank];
                v[i] = 1;
                Self(v)
            }

            pub fn len(&self) -> usize {
                self.0.len()
            }

            pub fn is_empty(&self) -> bool {
                self.0.is_empty()
            }

            pub fn is_zero(&self) -> bool {
                self.0.iter().all(|&c| c == 0)
            }

            pub fn coords(&self) -> &[i64] {
                &self.0
            }

            /// Nodes with a nonzero coefficient.
            pub fn support(&self) -> NodeSet {
                self.0
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .map(|(i, _)| i)
                    .collect()
            }

            pub fn scaled(&self, k: i64) -> Self {
                Self(self.0.iter().map(|c| c * k).collect())
            }
        }

        impl From<Vec<i64>> for $name {
            fn from(v: Vec<i64>) -> Self {
                Self(v)
            }
        }

        impl Add for &$name {
            type Output = $name;
            fn add(self, rhs: Self) -> $name {
                $name(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
            }
        }

        impl Sub for &$name {
            type Output = $name;
            fn sub(self, rhs: Self) -> $name {
                $name(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
            }
        }

        impl Neg for &$name {
            type Output = $name;
            fn neg(self) -> $name {
                $name(self.0.iter().map(|a| -a).collect())
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                fmt_combination(f, &self.0, $symbol)
            }
        }
    };
}

int_vector!(RootVector, "α");
int_vector!(Weight, "ω");

impl Weight {
    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }
}

/// Dense square integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    n: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![0; n * n];
        for i in 0..n {
            data[i * n + i] = 1;
        }
        Self { n, data }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        Self {
            n,
            data: rows.concat(),
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.n + j]
    }

    fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.n + j] = v;
    }

    pub fn transpose(&self) -> Self {
        let mut t = self.clone();
        for i in 0..self.n {
            for j in 0..self.n {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        let n = self.n;
        let mut out = IntMatrix {
            n,
            data: vec![0; n * n],
        };
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.get(k, j);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[i64]) -> Vec<i64> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.data.chunks(self.n.max(1)).map(<[i64]>::to_vec).collect()
    }
}

fn cartan_matrix(ty: CartanType) -> IntMatrix {
    let n = ty.rank();
    let mut a = vec![vec![0i64; n]; n];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    let mut bond = |i: usize, j: usize| {
        a[i - 1][j - 1] = -1;
        a[j - 1][i - 1] = -1;
    };
    match ty.letter() {
        TypeLetter::A => (1..n).for_each(|i| bond(i, i + 1)),
        TypeLetter::B | TypeLetter::C => (1..n - 1).for_each(|i| bond(i, i + 1)),
        TypeLetter::D => {
            (1..n - 1).for_each(|i| bond(i, i + 1));
            bond(n - 2, n);
        }
        TypeLetter::E => {
            bond(1, 3);
            bond(3, 4);
            bond(4, 5);
            bond(2, 4);
            (5..n).for_each(|i| bond(i, i + 1));
        }
        TypeLetter::F => {
            bond(1, 2);
            bond(3, 4);
        }
        TypeLetter::G => {}
    }
    match ty.letter() {
        // α_n short
        TypeLetter::B => {
            a[n - 1][n - 2] = -2;
            a[n - 2][n - 1] = -1;
        }
        // α_n long
        TypeLetter::C => {
            a[n - 1][n - 2] = -1;
            a[n - 2][n - 1] = -2;
        }
        // α1, α2 long; α3, α4 short
        TypeLetter::F => {
            a[2][1] = -2;
            a[1][2] = -1;
        }
        // α1 short, α2 long
        TypeLetter::G => {
            a[0][1] = -3;
            a[1][0] = -1;
        }
        _ => {}
    }
    IntMatrix::from_rows(&a)
}

/// Positive roots generated from the simple roots by root strings.
fn generate_positive_roots(cartan: &IntMatrix) -> Vec<RootVector> {
    let n = cartan.size();
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut layer: Vec<Vec<i64>> = (0..n).map(|i| RootVector::unit(n, i).0).collect();
    seen.extend(layer.iter().cloned());
    let mut all = layer.clone();
    while !layer.is_empty() {
        let mut next = Vec::new();
        for beta in &layer {
            for i in 0..n {
                // p = how far the α_i-string through β extends downwards
                let mut p = 0;
                let mut down = beta.clone();
                loop {
                    down[i] -= 1;
                    if seen.contains(&down) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                let pairing: i64 = (0..n).map(|j| cartan.get(i, j) * beta[j]).sum();
                if p - pairing > 0 {
                    let mut up = beta.clone();
                    up[i] += 1;
                    if seen.insert(up.clone()) {
                        next.push(up);
                    }
                }
            }
        }
        all.extend(next.iter().cloned());
        layer = next;
    }
    let mut roots: Vec<RootVector> = all.into_iter().map(RootVector).collect();
    roots.sort_by(|a, b| {
        let ha: i64 = a.0.iter().sum();
        let hb: i64 = b.0.iter().sum();
        ha.cmp(&hb).then_with(|| b.0.cmp(&a.0))
    });
    roots
}

/// Number of positive roots of a simple type.
pub fn classical_positive_root_count(ty: CartanType) -> usize {
    let n = ty.rank();
    match ty.letter() {
        TypeLetter::A => n * (n + 1) / 2,
        TypeLetter::B | TypeLetter::C => n * n,
        TypeLetter::D => n * (n - 1),
        TypeLetter::E => match n {
            6 => 36,
            7 => 63,
            _ => 120,
        },
        TypeLetter::F => 24,
        TypeLetter::G => 6,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSystem {
    cartan_type: CartanType,
    cartan: IntMatrix,
    positive_roots: Vec<RootVector>,
}

impl RootSystem {
    pub fn new(ty: CartanType) -> Self {
        let cartan = cartan_matrix(ty);
        let positive_roots = generate_positive_roots(&cartan);
        Self {
            cartan_type: ty,
            cartan,
            positive_roots,
        }
    }

    /// Parses a type such as `"E8"` and builds its root system.
    pub fn build(letter: char, rank: usize) -> Result<Self> {
        let letter = TypeLetter::from_char(letter).ok_or(Error::InvalidType { letter, rank })?;
        Ok(Self::new(CartanType::new(letter, rank)?))
    }

    pub fn cartan_type(&self) -> CartanType {
        self.cartan_type
    }

    pub fn rank(&self) -> usize {
        self.cartan_type.rank()
    }

    pub fn cartan(&self) -> &IntMatrix {
        &self.cartan
    }

    pub fn positive_roots(&self) -> &[RootVector] {
        &self.positive_roots
    }

    pub fn nodes(&self) -> NodeSet {
        (0..self.rank()).collect()
    }

    pub fn simple_root(&self, i: usize) -> RootVector {
        RootVector::unit(self.rank(), i)
    }

    pub fn check_node(&self, i: usize) -> Result<()> {
        if i < self.rank() {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange {
                index: i,
                rank: self.rank(),
            })
        }
    }

    pub fn check_len(&self, len: usize) -> Result<()> {
        if len == self.rank() {
            Ok(())
        } else {
            Err(Error::RankMismatch {
                expected: self.rank(),
                found: len,
            })
        }
    }

    pub fn is_positive_root(&self, v: &RootVector) -> bool {
        self.positive_roots.contains(v)
    }

    pub fn is_root(&self, v: &RootVector) -> bool {
        self.is_positive_root(v) || self.is_positive_root(&-v)
    }

    /// `<α_i^∨, v>`.
    pub fn coroot_pairing(&self, i: usize, v: &RootVector) -> i64 {
        (0..self.rank()).map(|j| self.cartan.get(i, j) * v.0[j]).sum()
    }

    pub fn orthogonal(&self, i: usize, j: usize) -> bool {
        i != j && self.cartan.get(i, j) == 0
    }

    /// Rewrites a root-lattice element in the fundamental-weight basis.
    pub fn root_to_weight(&self, v: &RootVector) -> Weight {
        Weight(self.cartan.mul_vec(&v.0))
    }

    /// Positive roots whose support lies inside `nodes`.
    pub fn positive_roots_in(&self, nodes: &NodeSet) -> Vec<RootVector> {
        self.positive_roots
            .iter()
            .filter(|r| r.support().is_subset(nodes))
            .cloned()
            .collect()
    }

    /// The dual root system: Cartan matrix transposed. Its positive roots are
    /// the positive coroots written in the simple-coroot basis.
    pub fn dual(&self) -> RootSystem {
        let cartan = self.cartan.transpose();
        let positive_roots = generate_positive_roots(&cartan);
        RootSystem {
            cartan_type: self.cartan_type,
            cartan,
            positive_roots,
        }
    }

    /// Sum of the positive coroots supported on `nodes`, in the
    /// simple-coroot basis.
    pub fn coroot_sum(&self, nodes: &NodeSet) -> Vec<i64> {
        let mut sum = vec![0; self.rank()];
        for r in self.dual().positive_roots_in(nodes) {
            for (s, c) in sum.iter_mut().zip(&r.0) {
                *s += c;
            }
        }
        sum
    }

    pub fn identity(&self) -> WeylElement {
        WeylElement {
            matrix: IntMatrix::identity(self.rank()),
            word: Vec::new(),
        }
    }

    fn reflection_matrix(&self, i: usize) -> IntMatrix {
        let n = self.rank();
        let mut m = IntMatrix::identity(n);
        for j in 0..n {
            m.set(i, j, m.get(i, j) - self.cartan.get(i, j));
        }
        m
    }

    pub fn simple_reflection(&self, i: usize) -> Result<WeylElement> {
        self.check_node(i)?;
        Ok(WeylElement {
            matrix: self.reflection_matrix(i),
            word: vec![i],
        })
    }

    /// The element with the given word (not required to be reduced); the
    /// stored word is recomputed as a reduced expression.
    pub fn element_from_word(&self, word: &[usize]) -> Result<WeylElement> {
        let mut m = IntMatrix::identity(self.rank());
        for &i in word {
            self.check_node(i)?;
            m = m.mul(&self.reflection_matrix(i));
        }
        Ok(self.element_from_matrix(m))
    }

    /// Recovers a reduced word from the matrix by peeling off right descents.
    pub fn element_from_matrix(&self, matrix: IntMatrix) -> WeylElement {
        let mut m = matrix.clone();
        let mut word = Vec::new();
        'outer: loop {
            for i in 0..self.rank() {
                let image = RootVector(m.mul_vec(&self.simple_root(i).0));
                if image.0.iter().any(|&c| c < 0) {
                    m = m.mul(&self.reflection_matrix(i));
                    word.push(i);
                    continue 'outer;
                }
            }
            break;
        }
        word.reverse();
        WeylElement { matrix, word }
    }

    pub fn compose(&self, a: &WeylElement, b: &WeylElement) -> WeylElement {
        self.element_from_matrix(a.matrix.mul(&b.matrix))
    }

    /// Longest element of the parabolic subgroup generated by `{s_j : j ∈ J}`.
    ///
    /// Greedy descent: start from the weight that pairs to 1 with every
    /// coroot in `J` and to 0 elsewhere, and reflect by the lowest-indexed
    /// `s_j` (`j ∈ J`) with positive pairing until none is left. Every step
    /// lengthens the element by one, and the final weight is `J`-antidominant.
    pub fn longest_element(&self, nodes: &NodeSet) -> Result<WeylElement> {
        for &j in nodes {
            self.check_node(j)?;
        }
        let n = self.rank();
        let mut v = vec![0i64; n];
        for &j in nodes {
            v[j] = 1;
        }
        let mut applied = Vec::new();
        while let Some(&j) = nodes.iter().find(|&&j| v[j] > 0) {
            let c = v[j];
            for (k, vk) in v.iter_mut().enumerate() {
                *vk -= c * self.cartan.get(k, j);
            }
            applied.push(j);
        }
        // element = s_{last} ... s_{first}
        applied.reverse();
        let mut matrix = IntMatrix::identity(n);
        for &j in &applied {
            matrix = matrix.mul(&self.reflection_matrix(j));
        }
        Ok(WeylElement {
            matrix,
            word: applied,
        })
    }

    pub fn act(&self, w: &WeylElement, v: &RootVector) -> Result<RootVector> {
        w.act(v)
    }

    pub fn act_weight(&self, w: &WeylElement, lambda: &Weight) -> Result<Weight> {
        self.check_len(lambda.len())?;
        let mut v = lambda.0.clone();
        for &j in w.word.iter().rev() {
            let c = v[j];
            for (k, vk) in v.iter_mut().enumerate() {
                *vk -= c * self.cartan.get(k, j);
            }
        }
        Ok(Weight(v))
    }

    /// `α ↦ -w_0(α)` on simple roots.
    pub fn opposition_involution(&self) -> DiagramAutomorphism {
        let w0 = self
            .longest_element(&self.nodes())
            .expect("all nodes are in range");
        minus_longest_on(self, &w0, &self.nodes())
            .expect("-w_0 permutes the simple roots of a simple root system")
    }
}

/// The permutation `α ↦ -w(α)` on the simple roots in `nodes` (fixing every
/// other node). Fails when some image is not a simple root inside `nodes`.
pub(crate) fn minus_longest_on(
    rs: &RootSystem,
    w: &WeylElement,
    nodes: &NodeSet,
) -> Option<DiagramAutomorphism> {
    let n = rs.rank();
    let mut perm: Vec<usize> = (0..n).collect();
    for &i in nodes {
        let image = -&w.act(&rs.simple_root(i)).ok()?;
        let j = (0..n).find(|&j| image == rs.simple_root(j))?;
        if !nodes.contains(&j) {
            return None;
        }
        perm[i] = j;
    }
    DiagramAutomorphism::from_perm(perm).ok()
}

/// Weyl group element acting on the root lattice (simple-root basis).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeylElement {
    matrix: IntMatrix,
    word: Vec<usize>,
}

impl WeylElement {
    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    /// Reduced word: the element equals `s_{word[0]} s_{word[1]} ...`.
    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn is_identity(&self) -> bool {
        self.matrix == IntMatrix::identity(self.matrix.size())
    }

    pub fn act(&self, v: &RootVector) -> Result<RootVector> {
        if v.len() != self.matrix.size() {
            return Err(Error::RankMismatch {
                expected: self.matrix.size(),
                found: v.len(),
            });
        }
        Ok(RootVector(self.matrix.mul_vec(&v.0)))
    }
}
