//! Real forms as Satake diagrams, the diagram automorphism they induce, and
//! the Cartan index of self-conjugate simple modules.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::automorphism::DiagramAutomorphism;
use crate::error::{Error, Result};
use crate::root_system::{minus_longest_on, CartanType, RootSystem, Weight};
use crate::NodeSet;

/// Satake catalog shipped with the crate.
pub const SHIPPED_CATALOG: &str = include_str!("../data/satake_catalog.json");

/// Sign of `c` in `ν² = c·Id`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+1")]
    Plus,
    #[serde(rename = "-1")]
    Minus,
}

impl Sign {
    pub fn value(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

/// A real form σ given by its Satake diagram: black nodes `S_0` and the
/// involution ω on the white nodes (stored as a full permutation fixing the
/// black nodes).
#[derive(Debug, Clone)]
pub struct SatakeDiagram {
    root_system: Arc<RootSystem>,
    name: String,
    aliases: Vec<String>,
    black: NodeSet,
    omega: DiagramAutomorphism,
    index_coweight: Option<Vec<i64>>,
    epsilon: DiagramAutomorphism,
}

impl SatakeDiagram {
    /// Validates the diagram and computes ε_σ.
    pub fn new(
        root_system: Arc<RootSystem>,
        name: impl Into<String>,
        black: NodeSet,
        omega_swaps: &[(usize, usize)],
        index_coweight: Option<Vec<i64>>,
    ) -> Result<Self> {
        let name = name.into();
        let corrupt = |reason: String| Error::CorruptSatake {
            form: name.clone(),
            reason,
        };
        let n = root_system.rank();
        if let Some(&i) = black.iter().find(|&&i| i >= n) {
            return Err(corrupt(format!("black node {} out of range", i + 1)));
        }
        let omega =
            DiagramAutomorphism::from_swaps(n, omega_swaps).map_err(|e| corrupt(e.to_string()))?;
        if !omega.is_involution() {
            return Err(corrupt("ω is not an involution".into()));
        }
        if let Some(&(a, b)) = omega_swaps
            .iter()
            .find(|(a, b)| black.contains(a) || black.contains(b))
        {
            return Err(corrupt(format!("ω touches black node in α{}↔α{}", a + 1, b + 1)));
        }
        if let Some(c) = &index_coweight {
            if c.len() != n {
                return Err(corrupt(format!("index coweight has length {}", c.len())));
            }
        }
        let epsilon = epsilon_from(&root_system, &black, &omega).map_err(corrupt)?;
        Ok(Self {
            root_system,
            name,
            aliases: Vec::new(),
            black,
            omega,
            index_coweight,
            epsilon,
        })
    }

    pub fn with_aliases(mut self, aliases: Vec<String>) -> Self {
        self.aliases = aliases;
        self
    }

    pub fn root_system(&self) -> &Arc<RootSystem> {
        &self.root_system
    }

    pub fn cartan_type(&self) -> CartanType {
        self.root_system.cartan_type()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn aliases(&self) -> &[String] {
        &self.aliases
    }

    /// `S_0`.
    pub fn black_nodes(&self) -> &NodeSet {
        &self.black
    }

    pub fn white_nodes(&self) -> NodeSet {
        self.root_system.nodes().difference(&self.black).copied().collect()
    }

    pub fn omega(&self) -> &DiagramAutomorphism {
        &self.omega
    }

    pub fn index_coweight(&self) -> Option<&[i64]> {
        self.index_coweight.as_deref()
    }

    /// ε_σ: ω on white nodes, `-w_•` on black nodes.
    pub fn epsilon(&self) -> &DiagramAutomorphism {
        &self.epsilon
    }

    pub fn is_compact(&self) -> bool {
        self.black.len() == self.root_system.rank()
    }

    pub fn is_split(&self) -> bool {
        self.black.is_empty() && self.omega.is_identity()
    }

    /// The same real form written in another labeling of the diagram:
    /// `relabel` sends a node of the new labeling to the node of this one.
    pub fn relabeled(&self, relabel: &DiagramAutomorphism) -> Result<Self> {
        if !relabel.is_cartan_automorphism(&self.root_system) {
            return Err(Error::CorruptSatake {
                form: self.name.clone(),
                reason: format!("relabeling {relabel} is not a diagram automorphism"),
            });
        }
        let inv = relabel.inverse();
        let black = inv.apply_nodes(&self.black);
        let omega = self.omega.conjugated_by(relabel);
        let swaps: Vec<(usize, usize)> = (0..omega.rank())
            .filter(|&i| omega.image(i) > i)
            .map(|i| (i, omega.image(i)))
            .collect();
        let coweight = self
            .index_coweight
            .as_ref()
            .map(|c| (0..c.len()).map(|i| c[relabel.image(i)]).collect());
        let mut sd = Self::new(
            self.root_system.clone(),
            self.name.clone(),
            black,
            &swaps,
            coweight,
        )?;
        sd.aliases = self.aliases.clone();
        Ok(sd)
    }

    /// Whether `id` names this form: the name or an alias, ignoring case and
    /// blanks; `xx(p,q)` also matches `xx(q,p)`.
    pub fn matches(&self, id: &str) -> bool {
        let id = normalize_form_id(id);
        std::iter::once(&self.name)
            .chain(&self.aliases)
            .map(|n| normalize_form_id(n))
            .any(|n| n == id || swap_signature(&n).is_some_and(|s| s == id))
    }

    /// Signature `(p, q)` when the form is named `xx(p,q)`.
    pub fn signature(&self) -> Option<(u32, u32)> {
        parse_signature(&normalize_form_id(&self.name)).map(|(_, p, q)| (p, q))
    }
}

impl fmt::Display for SatakeDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.name, self.cartan_type())
    }
}

fn epsilon_from(
    rs: &RootSystem,
    black: &NodeSet,
    omega: &DiagramAutomorphism,
) -> std::result::Result<DiagramAutomorphism, String> {
    let w_black = rs.longest_element(black).map_err(|e| e.to_string())?;
    let on_black = minus_longest_on(rs, &w_black, black)
        .ok_or_else(|| "-w_• does not permute the black simple roots".to_string())?;
    let perm: Vec<usize> = (0..rs.rank())
        .map(|i| {
            if black.contains(&i) {
                on_black.image(i)
            } else {
                omega.image(i)
            }
        })
        .collect();
    let eps = DiagramAutomorphism::from_perm(perm).map_err(|e| e.to_string())?;
    if !eps.is_cartan_automorphism(rs) {
        return Err(format!("ε = {eps} is not a diagram automorphism"));
    }
    if !eps.is_involution() {
        return Err(format!("ε = {eps} is not an involution"));
    }
    Ok(eps)
}

fn normalize_form_id(s: &str) -> String {
    s.chars()
        .filter(|c| !c.is_whitespace())
        .flat_map(char::to_lowercase)
        .collect()
}

fn parse_signature(s: &str) -> Option<(&str, u32, u32)> {
    let open = s.find('(')?;
    let inner = s[open + 1..].strip_suffix(')')?;
    let (p, q) = inner.split_once(',')?;
    Some((&s[..open], p.parse().ok()?, q.parse().ok()?))
}

fn swap_signature(s: &str) -> Option<String> {
    let (head, p, q) = parse_signature(s)?;
    Some(format!("{head}({q},{p})"))
}

pub fn epsilon_sigma(sd: &SatakeDiagram) -> DiagramAutomorphism {
    sd.epsilon().clone()
}

/// Extends ε linearly to the weight lattice.
pub fn extend_to_weights(eps: &DiagramAutomorphism, lambda: &Weight) -> Result<Weight> {
    eps.apply_weight(lambda)
}

/// Highest weight of the σ-twisted module `V(λ)^σ`.
pub fn twisted_highest_weight(sd: &SatakeDiagram, lambda: &Weight) -> Result<Weight> {
    sd.root_system().check_len(lambda.len())?;
    if !lambda.is_dominant() {
        return Err(Error::NotDominant(lambda.to_string()));
    }
    sd.epsilon().apply_weight(lambda)
}

/// Cartan index of the self-conjugate simple module `V(λ)`, computed as
/// `(-1)^<λ, c>` with `c` the form's index coweight.
pub fn cartan_index(sd: &SatakeDiagram, lambda: &Weight) -> Result<Sign> {
    let twisted = twisted_highest_weight(sd, lambda)?;
    if &twisted != lambda {
        return Err(Error::NotSelfConjugate(lambda.to_string()));
    }
    let c = sd
        .index_coweight()
        .ok_or_else(|| Error::IndexDataUnavailable(sd.to_string()))?;
    let pairing: i64 = lambda.0.iter().zip(c).map(|(l, c)| l * c).sum();
    Ok(if pairing.rem_euclid(2) == 0 {
        Sign::Plus
    } else {
        Sign::Minus
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct CatalogFile {
    schema: u32,
    #[serde(default)]
    labeling: Option<String>,
    forms: Vec<FormRecord>,
}

/// One record of the Satake catalog file. Node indices are 1-based.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FormRecord {
    #[serde(rename = "type")]
    pub type_letter: String,
    pub rank: usize,
    pub name: String,
    #[serde(default)]
    pub aliases: Vec<String>,
    pub black_nodes: Vec<usize>,
    pub omega: Vec<[usize; 2]>,
    #[serde(default)]
    pub index_coweight: Option<Vec<i64>>,
}

/// Real forms keyed by simple type, validated on load.
#[derive(Debug, Clone)]
pub struct Catalog {
    forms: HashMap<CartanType, Vec<SatakeDiagram>>,
}

impl Catalog {
    pub fn from_json(text: &str) -> Result<Self> {
        let file: CatalogFile = serde_json::from_str(text)
            .map_err(|e| Error::Schema(format!("Satake catalog: {e}")))?;
        if file.schema != 1 {
            return Err(Error::Schema(format!(
                "Satake catalog: unsupported schema version {}",
                file.schema
            )));
        }
        let mut systems: HashMap<CartanType, Arc<RootSystem>> = HashMap::new();
        let mut forms: HashMap<CartanType, Vec<SatakeDiagram>> = HashMap::new();
        for rec in file.forms {
            let letter = rec.type_letter.chars().next().unwrap_or('?');
            let ty: CartanType = format!("{}{}", rec.type_letter, rec.rank).parse().map_err(
                |_| Error::InvalidType {
                    letter,
                    rank: rec.rank,
                },
            )?;
            let rs = systems
                .entry(ty)
                .or_insert_with(|| Arc::new(RootSystem::new(ty)))
                .clone();
            let to0 = |i: usize| {
                i.checked_sub(1).filter(|&i| i < ty.rank()).ok_or_else(|| {
                    Error::CorruptSatake {
                        form: rec.name.clone(),
                        reason: format!("node {i} out of range"),
                    }
                })
            };
            let black = rec.black_nodes.iter().map(|&i| to0(i)).collect::<Result<NodeSet>>()?;
            let swaps = rec
                .omega
                .iter()
                .map(|&[a, b]| Ok((to0(a)?, to0(b)?)))
                .collect::<Result<Vec<_>>>()?;
            let sd = SatakeDiagram::new(rs, rec.name.clone(), black, &swaps, rec.index_coweight)?
                .with_aliases(rec.aliases);
            forms.entry(ty).or_default().push(sd);
        }
        Ok(Self { forms })
    }

    /// The catalog compiled into the crate.
    pub fn shipped() -> &'static Catalog {
        static CATALOG: OnceLock<Catalog> = OnceLock::new();
        CATALOG.get_or_init(|| Catalog::from_json(SHIPPED_CATALOG).expect("shipped catalog is valid"))
    }

    pub fn types(&self) -> Vec<CartanType> {
        let mut t: Vec<_> = self.forms.keys().copied().collect();
        t.sort();
        t
    }

    pub fn forms(&self, ty: CartanType) -> Result<&[SatakeDiagram]> {
        self.forms
            .get(&ty)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::UnsupportedCatalog(ty.to_string()))
    }

    pub fn find(&self, ty: CartanType, id: &str) -> Result<&SatakeDiagram> {
        self.forms(ty)?
            .iter()
            .find(|sd| sd.matches(id))
            .ok_or_else(|| Error::UnknownForm {
                form: id.to_string(),
                ty: ty.to_string(),
            })
    }

    pub fn all(&self) -> impl Iterator<Item = &SatakeDiagram> {
        self.types().into_iter().flat_map(move |t| self.forms[&t].iter())
    }
}

/// All real forms of a simple type of rank at most 8 from the shipped
/// catalog.
pub fn real_form_catalog(letter: char, rank: usize) -> Result<Vec<SatakeDiagram>> {
    let ty = RootSystem::build(letter, rank)?.cartan_type();
    Ok(Catalog::shipped().forms(ty)?.to_vec())
}
