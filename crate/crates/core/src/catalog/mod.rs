//! Named groups, the group-spec language, the small-group catalog, and the
//! checks of the classification statements against it.

mod build;
mod cases;
mod enumerate;
mod harness;
mod spec;

pub use build::{
    build, build_group, build_in, cyclic, dihedral8, elementary_abelian, extraspecial_exponent_p2,
    heisenberg, parse_action, quaternion8, read_action_file, Built,
};
pub use cases::{
    classify_pair, pair_fingerprint, Classifier, ComplementPattern, NormalPattern, Scope, Shape,
    Status, Theorem, TheoremCase, Verdict, CAPABILITY_NOTE, CASES,
};
pub use enumerate::{
    abelian_groups, abelian_spec, catalog_closure, catalog_pairs, groups_of_order, max_exponent,
    nontrivial_actions, CatalogGroup, CatalogPair, PairLabel, SweepScope,
};
pub use harness::{
    default_budget, render_text, verify_theorem, verify_theorems, verify_with_sweep,
    BackwardSummary, ForwardResult, ForwardStatus, HarnessReport, PairFinding, Sweep, SweepEntry,
};
pub use spec::{parse_spec, GroupSpec};

use thiserror::Error;

use crate::group::GroupError;
use crate::pair::PairError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("parse error at offset {offset}: expected {expected}")]
    Parse { offset: usize, expected: String },
    #[error("invalid spec: {0}")]
    Semantic(String),
    #[error("cannot read {0}")]
    Io(String),
    #[error("malformed action file: {reason}")]
    ActionFile { reason: String },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("groups of order {p}^{k} are not catalogued")]
    UnsupportedOrder { p: u64, k: u32 },
    #[error("budget {budget} is too small: {}", blocked.join("; "))]
    BudgetExceeded { budget: usize, blocked: Vec<String> },
    #[error(
        "budget {budget} exceeds the homology cap {}",
        crate::homology::HOMOLOGY_HARD_CAP
    )]
    AboveHardCap { budget: usize },
    #[error("{pair}: {source}")]
    Pair { pair: String, source: PairError },
}

impl CatalogError {
    /// True for errors caused by a size limit rather than by the input.
    pub fn is_budget(&self) -> bool {
        match self {
            CatalogError::BudgetExceeded { .. } | CatalogError::AboveHardCap { .. } => true,
            CatalogError::Group(GroupError::BudgetExceeded { .. }) => true,
            CatalogError::Pair { source, .. } => source.is_budget(),
            _ => false,
        }
    }
}
