use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebras::{end_galgebra, matrix_galgebra, tensor_presentation, AzumayaPresentation};
use crate::error::{Error, Result};
use crate::groups::{FiniteGroup, Subgroup, Transversal};
use crate::limits::Limits;
use crate::linalg::SparseMatrix;
use crate::modules::SemilinearModule;
use crate::rings::{ActionRule, Carrier, Elem, GRing, GRingHom};

use super::Suite;

/// A scenario file: what to build and which suites to run on it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub group: GroupSpec,
    /// Generators of `H`, as element indices of `G`. Empty means trivial.
    #[serde(default)]
    pub subgroup: Vec<usize>,
    /// Explicit coset representatives, identity first.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transversal: Option<Vec<usize>>,
    /// Second transversal for the independence suite.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alt_transversal: Option<Vec<usize>>,
    pub ring: RingSpec,
    pub algebra: AlgebraSpec,
    /// Module `P` for the endomorphism suite, over `G`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module: Option<ModuleSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extension: Option<ExtensionSpec>,
    pub suites: Vec<Suite>,
    #[serde(default)]
    pub limits: LimitSpec,
    /// Run the full `ε` isomorphism check in the rescores suite.
    #[serde(default = "yes")]
    pub full_epsilon: bool,
}

fn yes() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupSpec {
    Preset(String),
    Table(Vec<Vec<usize>>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingSpec {
    pub carrier: Carrier,
    #[serde(default = "trivial_action")]
    pub action: ActionRule,
}

fn trivial_action() -> ActionRule {
    ActionRule::Trivial
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum AlgebraSpec {
    Matrix(usize),
    End(ModuleSpec),
    Tensor(Box<AlgebraSpec>, Box<AlgebraSpec>),
    Opposite(Box<AlgebraSpec>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ModuleSpec {
    /// Free of the given rank with the coordinatewise action.
    Trivial(usize),
    /// Per group element, the basis permutation `b_i ↦ b_{p[i]}`.
    Permutation(Vec<Vec<usize>>),
    /// Per group element, the dense matrix `M_g` (row `i` is `b_i^g`).
    Matrices(Vec<Vec<Vec<Elem>>>),
}

/// A G-ring `S` with an equivariant map `R → S` and an R-basis of `S`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensionSpec {
    pub ring: RingSpec,
    pub map: Vec<Elem>,
    pub basis: Vec<Elem>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LimitSpec {
    #[serde(default = "default_max_rank")]
    pub max_rank: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_seconds: Option<f64>,
}

fn default_max_rank() -> usize {
    Limits::default().max_rank
}

impl Default for LimitSpec {
    fn default() -> Self {
        LimitSpec { max_rank: default_max_rank(), max_seconds: None }
    }
}

/// Parses scenario text, reporting the line and column of any error.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), column: e.column(), message: e.to_string() })
}

/// A scenario with every spec turned into concrete objects.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub scenario: Scenario,
    pub limits: Limits,
    pub group: Arc<FiniteGroup>,
    pub subgroup: Subgroup,
    pub transversal: Transversal,
    pub ring: Arc<GRing>,
    /// The algebra over the whole group.
    pub algebra: AzumayaPresentation,
}

/// Maps construction errors met while resolving into the harness classes.
pub fn classify(e: Error) -> Error {
    match e {
        Error::SizeLimit { construction, rank, limit } => {
            Error::LimitExceeded { construction, detail: format!("rank {rank} exceeds the limit {limit}") }
        }
        Error::GroupTooLarge { order, limit } => {
            Error::LimitExceeded { construction: "group".into(), detail: format!("order {order} exceeds {limit}") }
        }
        e @ (Error::Parse { .. } | Error::Resolve(_) | Error::LimitExceeded { .. }) => e,
        e => Error::Resolve(e.to_string()),
    }
}

impl Scenario {
    pub fn resolve(&self, max_rank: Option<usize>) -> Result<Resolved> {
        self.resolve_inner(max_rank).map_err(classify)
    }

    fn resolve_inner(&self, max_rank: Option<usize>) -> Result<Resolved> {
        if self.limits.max_rank == 0 || self.limits.max_seconds.is_some_and(|s| s.is_nan() || s <= 0.0) {
            return Err(Error::Resolve("limits must be positive".into()));
        }
        let limits = Limits { max_rank: max_rank.unwrap_or(self.limits.max_rank), ..Limits::default() };
        let group = Arc::new(match &self.group {
            GroupSpec::Preset(name) => FiniteGroup::preset(name)?,
            GroupSpec::Table(table) => FiniteGroup::from_table_with_limit(table, limits.max_group_order)?,
        });
        if let Some(&bad) = self.subgroup.iter().find(|&&g| g >= group.order()) {
            return Err(Error::Resolve(format!("subgroup generator {bad} is not an element of G")));
        }
        let subgroup = Subgroup::generated_by(group.clone(), &self.subgroup)?;
        let transversal = match &self.transversal {
            Some(reps) => Transversal::from_reps(&subgroup, reps)?,
            None => Transversal::decompose(&subgroup),
        };
        let ring = Arc::new(self.ring.build(group.clone())?);
        let algebra = self.algebra.build(&ring, &limits)?;
        Ok(Resolved { scenario: self.clone(), limits, group, subgroup, transversal, ring, algebra })
    }
}

impl RingSpec {
    pub fn build(&self, group: Arc<FiniteGroup>) -> Result<GRing> {
        GRing::new(self.carrier.clone(), group, &self.action)
    }
}

impl AlgebraSpec {
    pub fn build(&self, ring: &Arc<GRing>, limits: &Limits) -> Result<AzumayaPresentation> {
        match self {
            AlgebraSpec::Matrix(n) if *n == 0 => Err(Error::Resolve("matrix algebra of size 0".into())),
            AlgebraSpec::Matrix(n) => matrix_galgebra(ring, *n, limits),
            AlgebraSpec::End(p) => end_galgebra(&p.build(ring)?, limits),
            AlgebraSpec::Tensor(a, b) => tensor_presentation(&a.build(ring, limits)?, &b.build(ring, limits)?, limits),
            AlgebraSpec::Opposite(a) => Ok(a.build(ring, limits)?.opposite()),
        }
    }

    /// `P` with `A = End_R(P)`, when the algebra is given that way.
    pub fn splitting_module(&self) -> Option<ModuleSpec> {
        match self {
            AlgebraSpec::Matrix(n) => Some(ModuleSpec::Trivial(*n)),
            AlgebraSpec::End(p) => Some(p.clone()),
            _ => None,
        }
    }
}

impl ModuleSpec {
    pub fn build(&self, ring: &Arc<GRing>) -> Result<SemilinearModule> {
        let whole = Subgroup::whole(ring.group().clone());
        match self {
            ModuleSpec::Trivial(0) => Err(Error::Resolve("module of rank 0".into())),
            ModuleSpec::Trivial(m) => SemilinearModule::trivial(ring.clone(), whole, *m),
            ModuleSpec::Permutation(perms) => SemilinearModule::permutation(ring.clone(), whole, perms),
            ModuleSpec::Matrices(mats) => {
                let rank = mats.first().map_or(0, Vec::len);
                if rank == 0 {
                    return Err(Error::Resolve("module matrices are empty".into()));
                }
                let mats = mats.iter().map(|m| SparseMatrix::from_dense(m)).collect();
                SemilinearModule::new(ring.clone(), whole, rank, mats)
            }
        }
    }
}

impl ExtensionSpec {
    pub fn build(&self, source: &Arc<GRing>) -> Result<GRingHom> {
        let target = Arc::new(self.ring.build(source.group().clone())?);
        GRingHom::new(source.clone(), target, self.map.clone())
    }
}
