//! Multi-stage improvement planning.
//!
//! Each stage builds a knapsack instance from its operation groups, solves
//! it, and applies the chosen operations to the configuration handed over by
//! the previous stage. A chain stops at the first stage that fails.

use serde::{Deserialize, Serialize};

use crate::changeops::{
    apply_operation, build_mckp_instance, chosen_operations, resolve_operation_ids, validate_groups, ChangeOperation,
    OperationGroup,
};
use crate::error::{Error, Result};
use crate::mckp::{self, verify_selection, Comparator, GreedyStep, MckpInstance, MckpSolution, SolverKind};
use crate::morphology::{diff_configurations, ensure_valid, ComponentTree, Configuration};
use crate::tenths::Tenths;

/// A selection and/or resulting configuration to audit a stage against.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StageReference {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub selection: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub result: Option<Configuration>,
}

/// One stage: operation groups, budget and solver. Serialized as the
/// operation-set document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StagePlan {
    pub stage_id: String,
    pub budget: Tenths,
    #[serde(default)]
    pub comparator: Comparator,
    #[serde(default)]
    pub solver: SolverKind,
    /// Id given to the resulting configuration; defaults to `<input>+<stage>`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub result_id: Option<String>,
    pub groups: Vec<OperationGroup>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<StageReference>,
}

impl StagePlan {
    pub fn parse(document: &str) -> Result<Self> {
        Ok(serde_json::from_str(document)?)
    }

    pub fn to_json_pretty(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("stage plan serializes");
        text.push('\n');
        text
    }

    pub fn instance(&self) -> Result<MckpInstance> {
        build_mckp_instance(&self.groups, self.budget, self.comparator)
    }

    pub fn with_solver(mut self, solver: SolverKind) -> Self {
        self.solver = solver;
        self
    }

    pub fn with_budget(mut self, budget: Tenths) -> Self {
        self.budget = budget;
        self
    }
}

/// File-level description of a chain: model, initial configuration and stage
/// plans, all as paths relative to the chain document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
    pub initial: String,
    pub stages: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AnnotationKind {
    NothingSelected,
    ReferenceInfeasible,
    ReferenceFeasible,
    ReferenceReproducesResult,
    ResultMatchesReference,
    ResultDiffersFromReference,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Annotation {
    pub kind: AnnotationKind,
    pub message: String,
}

impl Annotation {
    fn new(kind: AnnotationKind, message: impl Into<String>) -> Self {
        Annotation {
            kind,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageResult {
    pub stage_id: String,
    pub plan: StagePlan,
    pub input: Configuration,
    pub instance: MckpInstance,
    pub solution: MckpSolution,
    /// Non-None chosen operations in group order.
    pub selected_operations: Vec<ChangeOperation>,
    pub resulting_configuration: Configuration,
    pub greedy_trace: Option<Vec<GreedyStep>>,
    pub annotations: Vec<Annotation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageFailure {
    pub stage_id: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Strategy {
    pub initial_configuration: Configuration,
    pub stages: Vec<StageResult>,
    pub final_configuration: Configuration,
    pub failure: Option<StageFailure>,
}

fn check_applicable(input: &Configuration, groups: &[OperationGroup]) -> Result<()> {
    for op in groups.iter().flat_map(|g| &g.operations) {
        if op.is_none_marker() {
            continue;
        }
        let held = input.get(&op.leaf).unwrap_or("nothing");
        if held != op.from_alt {
            return Err(Error::OperationNotApplicable {
                op: op.id.clone(),
                leaf: op.leaf.clone(),
                held: held.to_string(),
                expected: op.from_alt.clone(),
            });
        }
    }
    Ok(())
}

fn apply_all<'a>(input: &Configuration, ops: impl IntoIterator<Item = &'a ChangeOperation>) -> Result<Configuration> {
    ops.into_iter()
        .try_fold(input.clone(), |config, op| apply_operation(&config, op))
}

pub fn plan_stage(tree: &ComponentTree, input: &Configuration, plan: &StagePlan) -> Result<StageResult> {
    ensure_valid(tree, input)?;
    let findings = validate_groups(tree, &plan.groups);
    if !findings.is_empty() {
        return Err(Error::InvalidStage {
            stage: plan.stage_id.clone(),
            findings,
        });
    }
    check_applicable(input, &plan.groups)?;
    let instance = plan.instance()?;

    let (solution, greedy_trace) = match plan.solver {
        SolverKind::Greedy => {
            let (solution, trace) = mckp::solve_greedy_traced(&instance)?;
            (solution, Some(trace))
        }
        other => (mckp::solve(&instance, other)?, None),
    };

    let selected_operations: Vec<ChangeOperation> = chosen_operations(&plan.groups, &solution)
        .into_iter()
        .filter(|op| !op.is_none_marker())
        .cloned()
        .collect();
    let result_id = plan
        .result_id
        .clone()
        .unwrap_or_else(|| format!("{}+{}", input.id, plan.stage_id));
    let resulting_configuration = apply_all(input, &selected_operations)?.with_id(result_id);

    let mut annotations = Vec::new();
    if selected_operations.is_empty() {
        annotations.push(Annotation::new(
            AnnotationKind::NothingSelected,
            "zero selected operations",
        ));
    }
    if let Some(reference) = &plan.reference {
        audit_reference(
            tree,
            input,
            plan,
            &instance,
            &solution,
            &resulting_configuration,
            reference,
            &mut annotations,
        )?;
    }

    Ok(StageResult {
        stage_id: plan.stage_id.clone(),
        plan: plan.clone(),
        input: input.clone(),
        instance,
        solution,
        selected_operations,
        resulting_configuration,
        greedy_trace,
        annotations,
    })
}

#[allow(clippy::too_many_arguments)]
fn audit_reference(
    tree: &ComponentTree,
    input: &Configuration,
    plan: &StagePlan,
    instance: &MckpInstance,
    solution: &MckpSolution,
    result: &Configuration,
    reference: &StageReference,
    annotations: &mut Vec<Annotation>,
) -> Result<()> {
    if !reference.selection.is_empty() {
        let ids = reference.selection.join(", ");
        let picks = resolve_operation_ids(&plan.groups, &reference.selection)?;
        let (findings, profit, cost) = verify_selection(instance, &picks);
        if findings.is_empty() {
            let comparison = match profit.cmp(&solution.total_profit) {
                std::cmp::Ordering::Equal => "equal to".to_string(),
                std::cmp::Ordering::Less => "below".to_string(),
                std::cmp::Ordering::Greater => "above".to_string(),
            };
            annotations.push(Annotation::new(
                AnnotationKind::ReferenceFeasible,
                format!(
                    "reference selection {{{ids}}} is feasible: profit {profit}, cost {cost}, {comparison} the {} solution (profit {})",
                    solution.solver, solution.total_profit
                ),
            ));
        } else {
            let reasons: Vec<String> = findings.iter().map(ToString::to_string).collect();
            annotations.push(Annotation::new(
                AnnotationKind::ReferenceInfeasible,
                format!(
                    "reference selection {{{ids}}} fails verification: {}; the {} solution {{{}}} is reported instead (profit {}, cost {})",
                    reasons.join("; "),
                    solution.solver,
                    selected_ids(plan, solution).join(", "),
                    solution.total_profit,
                    solution.total_cost
                ),
            ));
        }
        if let Some(expected) = &reference.result {
            let ops = picks.iter().map(|&(g, j)| &plan.groups[g].operations[j]);
            if let Ok(applied) = apply_all(input, ops) {
                if applied.assignment == expected.assignment {
                    annotations.push(Annotation::new(
                        AnnotationKind::ReferenceReproducesResult,
                        format!(
                            "applying the reference selection to {} reproduces {}",
                            input.id, expected.id
                        ),
                    ));
                }
            }
        }
    }
    if let Some(expected) = &reference.result {
        let deltas = diff_configurations(tree, expected, result)?;
        if deltas.is_empty() {
            annotations.push(Annotation::new(
                AnnotationKind::ResultMatchesReference,
                format!("resulting configuration matches reference {}", expected.id),
            ));
        } else {
            let diffs: Vec<String> = deltas
                .iter()
                .map(|d| format!("{} holds {} (reference {})", d.leaf, d.to_alt, d.from_alt))
                .collect();
            annotations.push(Annotation::new(
                AnnotationKind::ResultDiffersFromReference,
                format!(
                    "resulting configuration differs from reference {}: {}",
                    expected.id,
                    diffs.join(", ")
                ),
            ));
        }
    }
    Ok(())
}

fn selected_ids(plan: &StagePlan, solution: &MckpSolution) -> Vec<String> {
    chosen_operations(&plan.groups, solution)
        .into_iter()
        .filter(|op| !op.is_none_marker())
        .map(|op| op.id.clone())
        .collect()
}

/// Runs the stages in order, feeding each result into the next stage.
/// Stops at the first failing stage and records the failure.
pub fn plan_chain(tree: &ComponentTree, initial: &Configuration, stages: &[StagePlan]) -> Result<Strategy> {
    ensure_valid(tree, initial)?;
    let mut current = initial.clone();
    let mut results = Vec::with_capacity(stages.len());
    let mut failure = None;
    for plan in stages {
        match plan_stage(tree, &current, plan) {
            Ok(result) => {
                current = result.resulting_configuration.clone();
                results.push(result);
            }
            Err(e) => {
                failure = Some(StageFailure {
                    stage_id: plan.stage_id.clone(),
                    message: e.to_string(),
                });
                break;
            }
        }
    }
    Ok(Strategy {
        initial_configuration: initial.clone(),
        stages: results,
        final_configuration: current,
        failure,
    })
}

impl Strategy {
    /// `S5G => S5G_adv1 => ...`
    pub fn chain_label(&self) -> String {
        std::iter::once(self.initial_configuration.id.as_str())
            .chain(self.stages.iter().map(|s| s.resulting_configuration.id.as_str()))
            .collect::<Vec<_>>()
            .join(" => ")
    }

    pub fn is_complete(&self) -> bool {
        self.failure.is_none()
    }
}
