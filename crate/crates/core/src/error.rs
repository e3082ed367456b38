use thiserror::Error;

use crate::tenths::Tenths;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid decimal {0:?}: expected at most one fractional digit")]
    Decimal(String),

    #[error("schema violation at {path}: {message}")]
    Schema { path: String, message: String },

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("invalid id {0:?}")]
    InvalidId(String),

    #[error("duplicate id: {0}")]
    DuplicateId(String),

    #[error("empty alternative list: {0}")]
    EmptyAlternatives(String),

    #[error("composite node without children: {0}")]
    EmptyComposite(String),

    #[error("alternative {alternative} is not named after its leaf {leaf}")]
    ForeignAlternative { leaf: String, alternative: String },

    #[error("dangling composed_of: {alternative} references {target}, not a sibling alternative")]
    DanglingComposedOf { alternative: String, target: String },

    #[error("composed_of cycle through {0}")]
    ComposedOfCycle(String),

    #[error("invalid configuration {id}: {}", .findings.join("; "))]
    InvalidConfiguration { id: String, findings: Vec<String> },

    #[error("tree mismatch: expected {expected}, found {found}")]
    TreeMismatch { expected: String, found: String },

    #[error("invalid delta: {0}")]
    InvalidDelta(String),

    #[error("delta not applicable: leaf {leaf} holds {held}, expected {expected}")]
    DeltaNotApplicable {
        leaf: String,
        held: String,
        expected: String,
    },

    #[error("duplicate leaf target: {0}")]
    DuplicateLeafTarget(String),

    #[error("operation {op} not applicable: leaf {leaf} holds {held}, expected {expected}")]
    OperationNotApplicable {
        op: String,
        leaf: String,
        held: String,
        expected: String,
    },

    #[error("invalid stage {stage}: {}", .findings.join("; "))]
    InvalidStage { stage: String, findings: Vec<String> },

    #[error("duplicate group index: {0}")]
    DuplicateGroup(u32),

    #[error("group {expected} expected, found group {found} (indices must be consecutive from 1)")]
    GroupOrder { expected: u32, found: u32 },

    #[error("group {0} has no leading None operation")]
    MissingNoneMarker(u32),

    #[error("invalid group {group}: {message}")]
    InvalidGroup { group: u32, message: String },

    #[error("leaf {0} is targeted by more than one group in the same stage")]
    DuplicateStageLeaf(String),

    #[error("unknown operation id: {0}")]
    UnknownOperation(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("infeasible: no selection satisfies the budget constraint")]
    Infeasible,

    #[error("budget {0} exceeds the solver limit of 1000000.0")]
    BudgetTooLarge(Tenths),

    #[error("instance too large for enumeration: {0} candidate selections")]
    InstanceTooLarge(u128),
}
