//! Hierarchical morphological system models and multi-stage improvement
//! planning.
//!
//! A system is a tree of components whose leaves list design alternatives
//! ([`morphology`]). Improvements are grouped change operations with profit
//! and cost estimates ([`changeops`]); each stage picks at most one
//! operation per group under a budget by solving a multiple-choice knapsack
//! problem ([`mckp`]), and stages chain into a strategy ([`planner`],
//! [`report`]). The wireless generation catalog and its two-stage
//! improvement ship as built-in data ([`datasets`]).

pub mod changeops;
pub mod datasets;
pub mod error;
pub mod mckp;
pub mod morphology;
pub mod planner;
pub mod report;
pub mod tenths;

pub use changeops::{
    apply_operation, build_mckp_instance, validate_operation, ChangeOperation, ImpactClass, OperationGroup,
};
pub use error::{Error, Result};
pub use mckp::{
    solve, solve_dp, solve_exhaustive, solve_greedy, verify_solution, Comparator, Item, MckpInstance, MckpSolution,
    SolverKind,
};
pub use morphology::{
    apply_deltas, diff_configurations, parse_model, render_configuration, serialize_model, validate_configuration,
    ChangeDelta, ComponentTree, Configuration,
};
pub use planner::{plan_chain, plan_stage, StagePlan, StageResult, Strategy};
pub use report::{render_strategy, StrategyReport};
pub use tenths::Tenths;
