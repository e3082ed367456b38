//! Strategy reports: a serializable summary of a planned chain plus an
//! aligned plain-text rendering of the same data.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::changeops::ImpactClass;
use crate::error::Result;
use crate::mckp::{verify_solution, Comparator, SolverKind};
use crate::morphology::{render_configuration, ComponentTree, Configuration};
use crate::planner::{Annotation, StageFailure, StageResult, Strategy};
use crate::tenths::Tenths;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigurationSummary {
    pub id: String,
    pub expression: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperationRow {
    pub group: u32,
    pub id: String,
    pub leaf: String,
    pub from: String,
    pub to: Option<String>,
    pub profit: Tenths,
    pub cost: Tenths,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub impact_class: Option<ImpactClass>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub activity_refs: Vec<String>,
    /// 1 if the solver picked this operation.
    pub x: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRow {
    pub rank: usize,
    pub id: String,
    pub ratio: String,
    pub profit: Tenths,
    pub cost: Tenths,
    pub decision: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageReport {
    pub stage_id: String,
    pub input: String,
    pub result: String,
    pub solver: SolverKind,
    pub budget: Tenths,
    pub comparator: Comparator,
    pub group_sizes: Vec<usize>,
    pub operations: Vec<OperationRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub greedy_trace: Option<Vec<TraceRow>>,
    pub indicators: Vec<Vec<u8>>,
    pub selected: Vec<String>,
    pub total_profit: Tenths,
    pub total_cost: Tenths,
    pub verification: Vec<String>,
    pub result_expression: String,
    pub annotations: Vec<Annotation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrategyReport {
    pub chain: String,
    pub initial: ConfigurationSummary,
    pub stages: Vec<StageReport>,
    #[serde(rename = "final")]
    pub final_configuration: ConfigurationSummary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<StageFailure>,
}

fn summarize(tree: &ComponentTree, config: &Configuration) -> Result<ConfigurationSummary> {
    Ok(ConfigurationSummary {
        id: config.id.clone(),
        expression: render_configuration(tree, config)?,
    })
}

fn stage_report(tree: &ComponentTree, stage: &StageResult) -> Result<StageReport> {
    let indicators = stage.solution.indicators(&stage.instance);
    let operations = stage
        .plan
        .groups
        .iter()
        .zip(&indicators)
        .flat_map(|(group, xs)| {
            group.operations.iter().zip(xs).map(move |(op, &x)| OperationRow {
                group: group.index,
                id: op.id.clone(),
                leaf: op.leaf.clone(),
                from: op.from_alt.clone(),
                to: op.to_alt.clone(),
                profit: op.profit,
                cost: op.cost,
                impact_class: op.impact_class,
                activity_refs: op.activity_refs.clone(),
                x,
            })
        })
        .collect();
    let greedy_trace = stage.greedy_trace.as_ref().map(|trace| {
        trace
            .iter()
            .enumerate()
            .map(|(rank, step)| TraceRow {
                rank: rank + 1,
                id: stage.plan.groups[step.group].operations[step.item].id.clone(),
                ratio: step.ratio_label(),
                profit: step.profit,
                cost: step.cost,
                decision: step.decision.to_string(),
            })
            .collect()
    });
    Ok(StageReport {
        stage_id: stage.stage_id.clone(),
        input: stage.input.id.clone(),
        result: stage.resulting_configuration.id.clone(),
        solver: stage.solution.solver,
        budget: stage.instance.budget(),
        comparator: stage.instance.comparator(),
        group_sizes: stage.instance.group_sizes(),
        operations,
        greedy_trace,
        indicators,
        selected: stage.selected_operations.iter().map(|op| op.id.clone()).collect(),
        total_profit: stage.solution.total_profit,
        total_cost: stage.solution.total_cost,
        verification: verify_solution(&stage.instance, &stage.solution)
            .iter()
            .map(ToString::to_string)
            .collect(),
        result_expression: render_configuration(tree, &stage.resulting_configuration)?,
        annotations: stage.annotations.clone(),
    })
}

pub fn render_strategy(tree: &ComponentTree, strategy: &Strategy) -> Result<StrategyReport> {
    Ok(StrategyReport {
        chain: strategy.chain_label(),
        initial: summarize(tree, &strategy.initial_configuration)?,
        stages: strategy
            .stages
            .iter()
            .map(|s| stage_report(tree, s))
            .collect::<Result<_>>()?,
        final_configuration: summarize(tree, &strategy.final_configuration)?,
        failure: strategy.failure.clone(),
    })
}

/// Text styling for terminal output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Style {
    #[default]
    Plain,
    Ansi,
}

impl Style {
    fn bold(self, text: &str) -> String {
        match self {
            Style::Plain => text.to_string(),
            Style::Ansi => format!("\x1b[1m{text}\x1b[0m"),
        }
    }
}

impl StrategyReport {
    pub fn parse(document: &str) -> Result<Self> {
        Ok(serde_json::from_str(document)?)
    }

    pub fn to_json_pretty(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }

    pub fn to_text(&self, style: Style) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", style.bold("strategy:"), self.chain);
        let _ = writeln!(out, "initial  {} = {}", self.initial.id, self.initial.expression);
        for stage in &self.stages {
            out.push('\n');
            write_stage(&mut out, stage, style);
        }
        out.push('\n');
        let _ = writeln!(
            out,
            "final    {} = {}",
            self.final_configuration.id, self.final_configuration.expression
        );
        if let Some(failure) = &self.failure {
            let _ = writeln!(
                out,
                "{} {}: {}",
                style.bold("halted at"),
                failure.stage_id,
                failure.message
            );
        }
        out
    }
}

fn write_stage(out: &mut String, stage: &StageReport, style: Style) {
    let op = match stage.comparator {
        Comparator::Inclusive => "<=",
        Comparator::Exclusive => "<",
    };
    let _ = writeln!(
        out,
        "{} {}: {} => {}  (solver {}, cost {} {})",
        style.bold("stage"),
        stage.stage_id,
        stage.input,
        stage.result,
        stage.solver,
        op,
        stage.budget
    );
    let sizes: Vec<String> = stage.group_sizes.iter().map(ToString::to_string).collect();
    let _ = writeln!(out, "  group sizes q = ({})", sizes.join(", "));

    let header = ["group", "op", "change", "profit", "cost", "x"];
    let rows: Vec<[String; 6]> = stage
        .operations
        .iter()
        .map(|row| {
            let change = match &row.to {
                Some(to) => format!("{} -> {}", row.from, to),
                None => "None".to_string(),
            };
            [
                row.group.to_string(),
                row.id.clone(),
                change,
                row.profit.to_string(),
                row.cost.to_string(),
                row.x.to_string(),
            ]
        })
        .collect();
    write_table(out, &header, &rows, &[false, false, false, true, true, true]);

    if let Some(trace) = &stage.greedy_trace {
        let _ = writeln!(out, "  greedy rank order:");
        let header = ["rank", "op", "ratio", "profit", "cost", "decision"];
        let rows: Vec<[String; 6]> = trace
            .iter()
            .map(|t| {
                [
                    t.rank.to_string(),
                    t.id.clone(),
                    t.ratio.clone(),
                    t.profit.to_string(),
                    t.cost.to_string(),
                    t.decision.clone(),
                ]
            })
            .collect();
        write_table(out, &header, &rows, &[true, false, true, true, true, false]);
    }

    let selected = if stage.selected.is_empty() {
        "none (zero selected operations)".to_string()
    } else {
        stage.selected.join(", ")
    };
    let _ = writeln!(out, "  selected: {selected}");
    let _ = writeln!(
        out,
        "  total profit {}, total cost {}",
        stage.total_profit, stage.total_cost
    );
    if stage.verification.is_empty() {
        let _ = writeln!(out, "  verification: ok");
    } else {
        let _ = writeln!(out, "  verification: {}", stage.verification.join("; "));
    }
    let _ = writeln!(out, "  result {} = {}", stage.result, stage.result_expression);
    for note in &stage.annotations {
        let _ = writeln!(out, "  note: {}", note.message);
    }
}

fn write_table<const N: usize>(out: &mut String, header: &[&str; N], rows: &[[String; N]], right: &[bool; N]) {
    let mut widths: [usize; N] = header.map(str::len);
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(widths.iter().zip(right))
            .map(|(cell, (&w, &r))| {
                if r {
                    format!("{cell:>w$}")
                } else {
                    format!("{cell:<w$}")
                }
            })
            .collect();
        format!("    {}", padded.join("  ").trim_end())
    };
    let _ = writeln!(out, "{}", line(header.to_vec()));
    for row in rows {
        let _ = writeln!(out, "{}", line(row.iter().map(String::as_str).collect()));
    }
}
