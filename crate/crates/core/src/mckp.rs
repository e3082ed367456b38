//! Multiple-choice knapsack: pick at most one item per group, maximize total
//! profit, keep total cost within the budget.
//!
//! Three solvers share one tie-break so their outputs are comparable:
//! maximum profit, then minimum cost, then the lexicographically earliest
//! selection vector where choosing item `j` in a group precedes choosing
//! item `j + 1`, and choosing any item precedes skipping the group.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tenths::Tenths;

/// Largest budget the DP table accepts, in tenths.
pub const MAX_DP_BUDGET: Tenths = Tenths(10_000_000);

/// Largest number of candidate selections the exhaustive solver enumerates.
pub const MAX_ENUMERATION: u128 = 1_000_000;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Comparator {
    /// Σ cost ≤ budget
    #[default]
    Inclusive,
    /// Σ cost < budget
    Exclusive,
}

impl Comparator {
    pub fn admits(self, cost: Tenths, budget: Tenths) -> bool {
        match self {
            Comparator::Inclusive => cost <= budget,
            Comparator::Exclusive => cost < budget,
        }
    }

    /// The equivalent inclusive budget; negative means nothing is feasible.
    pub fn inclusive_budget(self, budget: Tenths) -> Tenths {
        match self {
            Comparator::Inclusive => budget,
            Comparator::Exclusive => budget - Tenths(1),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Comparator::Inclusive => "inclusive",
            Comparator::Exclusive => "exclusive",
        }
    }
}

impl FromStr for Comparator {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "inclusive" => Ok(Comparator::Inclusive),
            "exclusive" => Ok(Comparator::Exclusive),
            other => Err(format!("unknown comparator {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverKind {
    Greedy,
    #[default]
    Dp,
    Exhaustive,
}

impl SolverKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SolverKind::Greedy => "greedy",
            SolverKind::Dp => "dp",
            SolverKind::Exhaustive => "exhaustive",
        }
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SolverKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "greedy" => Ok(SolverKind::Greedy),
            "dp" => Ok(SolverKind::Dp),
            "exhaustive" => Ok(SolverKind::Exhaustive),
            other => Err(format!("unknown solver {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Item {
    pub profit: Tenths,
    pub cost: Tenths,
}

impl Item {
    pub fn new(profit: impl Into<Tenths>, cost: impl Into<Tenths>) -> Self {
        Item {
            profit: profit.into(),
            cost: cost.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "InstanceDocument", into = "InstanceDocument")]
pub struct MckpInstance {
    groups: Vec<Vec<Item>>,
    budget: Tenths,
    comparator: Comparator,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDocument {
    budget: Tenths,
    #[serde(default)]
    comparator: Comparator,
    groups: Vec<Vec<Item>>,
}

impl TryFrom<InstanceDocument> for MckpInstance {
    type Error = Error;

    fn try_from(doc: InstanceDocument) -> Result<Self> {
        MckpInstance::new(doc.groups, doc.budget, doc.comparator)
    }
}

impl From<MckpInstance> for InstanceDocument {
    fn from(inst: MckpInstance) -> Self {
        InstanceDocument {
            budget: inst.budget,
            comparator: inst.comparator,
            groups: inst.groups,
        }
    }
}

impl MckpInstance {
    pub fn new(groups: Vec<Vec<Item>>, budget: Tenths, comparator: Comparator) -> Result<Self> {
        if budget.is_negative() {
            return Err(Error::InvalidInstance(format!("negative budget {budget}")));
        }
        for (g, group) in groups.iter().enumerate() {
            if group.is_empty() {
                return Err(Error::InvalidInstance(format!("group {} is empty", g + 1)));
            }
            for (j, item) in group.iter().enumerate() {
                if item.profit.is_negative() || item.cost.is_negative() {
                    return Err(Error::InvalidInstance(format!(
                        "item {} of group {} has a negative value",
                        j + 1,
                        g + 1
                    )));
                }
            }
        }
        Ok(MckpInstance {
            groups,
            budget,
            comparator,
        })
    }

    pub fn groups(&self) -> &[Vec<Item>] {
        &self.groups
    }

    pub fn budget(&self) -> Tenths {
        self.budget
    }

    pub fn comparator(&self) -> Comparator {
        self.comparator
    }

    /// `q_ι` for every group.
    pub fn group_sizes(&self) -> Vec<usize> {
        self.groups.iter().map(Vec::len).collect()
    }

    pub fn with_budget(&self, budget: Tenths) -> Result<Self> {
        MckpInstance::new(self.groups.clone(), budget, self.comparator)
    }

    pub fn with_comparator(&self, comparator: Comparator) -> Self {
        MckpInstance {
            comparator,
            ..self.clone()
        }
    }

    pub fn parse(document: &str) -> Result<Self> {
        Ok(serde_json::from_str(document)?)
    }

    pub fn to_json_pretty(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("instance serializes");
        text.push('\n');
        text
    }

    fn totals(&self, selection: &[Option<usize>]) -> (Tenths, Tenths) {
        selection
            .iter()
            .zip(&self.groups)
            .filter_map(|(pick, group)| pick.map(|j| group[j]))
            .fold((Tenths::ZERO, Tenths::ZERO), |(p, c), item| {
                (p + item.profit, c + item.cost)
            })
    }
}

/// Per group the chosen item index (0-based) or `None` for no selection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MckpSolution {
    pub selection: Vec<Option<usize>>,
    pub total_profit: Tenths,
    pub total_cost: Tenths,
    pub solver: SolverKind,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SolutionDocument {
    solver: SolverKind,
    profit: Tenths,
    cost: Tenths,
    /// 1-based item indices.
    selection: Vec<Option<usize>>,
}

impl Serialize for MckpSolution {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SolutionDocument {
            solver: self.solver,
            profit: self.total_profit,
            cost: self.total_cost,
            selection: self.selection.iter().map(|s| s.map(|j| j + 1)).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MckpSolution {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let doc = SolutionDocument::deserialize(deserializer)?;
        let selection = doc
            .selection
            .into_iter()
            .map(|s| match s {
                Some(0) => Err(serde::de::Error::custom("item indices are 1-based")),
                other => Ok(other.map(|j| j - 1)),
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(MckpSolution {
            selection,
            total_profit: doc.profit,
            total_cost: doc.cost,
            solver: doc.solver,
        })
    }
}

impl MckpSolution {
    fn from_selection(instance: &MckpInstance, selection: Vec<Option<usize>>, solver: SolverKind) -> Self {
        let (total_profit, total_cost) = instance.totals(&selection);
        MckpSolution {
            selection,
            total_profit,
            total_cost,
            solver,
        }
    }

    /// Selected `(group, item)` pairs, 0-based.
    pub fn picks(&self) -> Vec<(usize, usize)> {
        self.selection
            .iter()
            .enumerate()
            .filter_map(|(g, s)| s.map(|j| (g, j)))
            .collect()
    }

    /// 0/1 indicator per item, grouped.
    pub fn indicators(&self, instance: &MckpInstance) -> Vec<Vec<u8>> {
        instance
            .groups()
            .iter()
            .zip(&self.selection)
            .map(|(group, pick)| (0..group.len()).map(|j| u8::from(*pick == Some(j))).collect())
            .collect()
    }

    pub fn to_json_pretty(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("solution serializes");
        text.push('\n');
        text
    }
}

fn selection_rank(pick: Option<usize>) -> usize {
    pick.unwrap_or(usize::MAX)
}

/// Total order used by every solver; `Less` means `a` is preferred.
pub fn compare_candidates(a: (Tenths, Tenths, &[Option<usize>]), b: (Tenths, Tenths, &[Option<usize>])) -> Ordering {
    b.0.cmp(&a.0).then(a.1.cmp(&b.1)).then_with(|| {
        let ka = a.2.iter().copied().map(selection_rank);
        let kb = b.2.iter().copied().map(selection_rank);
        ka.cmp(kb)
    })
}

pub fn solve(instance: &MckpInstance, solver: SolverKind) -> Result<MckpSolution> {
    match solver {
        SolverKind::Greedy => solve_greedy(instance),
        SolverKind::Dp => solve_dp(instance),
        SolverKind::Exhaustive => solve_exhaustive(instance),
    }
}

fn ensure_something_feasible(instance: &MckpInstance) -> Result<()> {
    if instance.comparator.admits(Tenths::ZERO, instance.budget) {
        Ok(())
    } else {
        Err(Error::Infeasible)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GreedyDecision {
    Selected,
    GroupTaken,
    ExceedsBudget,
}

impl fmt::Display for GreedyDecision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GreedyDecision::Selected => "selected",
            GreedyDecision::GroupTaken => "skipped: group already filled",
            GreedyDecision::ExceedsBudget => "skipped: would exceed budget",
        })
    }
}

/// One ranked item in the greedy scan, 0-based indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyStep {
    pub group: usize,
    pub item: usize,
    pub profit: Tenths,
    pub cost: Tenths,
    pub decision: GreedyDecision,
}

impl GreedyStep {
    /// Profit/cost ratio rounded to three decimals, `"inf"` for free items.
    pub fn ratio_label(&self) -> String {
        if self.cost == Tenths::ZERO {
            "inf".to_string()
        } else {
            format!("{:.3}", self.profit.get() as f64 / self.cost.get() as f64)
        }
    }
}

/// Descending profit/cost ratio with free positive-profit items first, ties
/// on lower cost, then group, then item. Compared by cross-multiplication so
/// equal ratios tie exactly.
fn greedy_order(a: &(usize, usize, Item), b: &(usize, usize, Item)) -> Ordering {
    let (ga, ja, ia) = *a;
    let (gb, jb, ib) = *b;
    let free_a = ia.cost == Tenths::ZERO;
    let free_b = ib.cost == Tenths::ZERO;
    let by_ratio = match (free_a, free_b) {
        (true, true) => Ordering::Equal,
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        (false, false) => {
            let lhs = i128::from(ia.profit.get()) * i128::from(ib.cost.get());
            let rhs = i128::from(ib.profit.get()) * i128::from(ia.cost.get());
            rhs.cmp(&lhs)
        }
    };
    by_ratio.then(ia.cost.cmp(&ib.cost)).then(ga.cmp(&gb)).then(ja.cmp(&jb))
}

pub fn solve_greedy(instance: &MckpInstance) -> Result<MckpSolution> {
    solve_greedy_traced(instance).map(|(solution, _)| solution)
}

/// Series packing by profit/cost ratio. Items with zero profit are never
/// ranked; groups left untouched take no item.
pub fn solve_greedy_traced(instance: &MckpInstance) -> Result<(MckpSolution, Vec<GreedyStep>)> {
    ensure_something_feasible(instance)?;
    let mut ranked: Vec<(usize, usize, Item)> = instance
        .groups
        .iter()
        .enumerate()
        .flat_map(|(g, group)| group.iter().enumerate().map(move |(j, &item)| (g, j, item)))
        .filter(|(_, _, item)| item.profit > Tenths::ZERO)
        .collect();
    ranked.sort_by(greedy_order);

    let mut selection = vec![None; instance.groups.len()];
    let mut spent = Tenths::ZERO;
    let mut trace = Vec::with_capacity(ranked.len());
    for (g, j, item) in ranked {
        let decision = if selection[g].is_some() {
            GreedyDecision::GroupTaken
        } else if !instance.comparator.admits(spent + item.cost, instance.budget) {
            GreedyDecision::ExceedsBudget
        } else {
            selection[g] = Some(j);
            spent = spent + item.cost;
            GreedyDecision::Selected
        };
        trace.push(GreedyStep {
            group: g,
            item: j,
            profit: item.profit,
            cost: item.cost,
            decision,
        });
    }
    Ok((
        MckpSolution::from_selection(instance, selection, SolverKind::Greedy),
        trace,
    ))
}

#[derive(Clone, Copy, PartialEq, Eq)]
struct Cell {
    profit: i64,
    cost: i64,
}

impl Cell {
    fn better_than(self, other: Cell) -> bool {
        self.profit > other.profit || (self.profit == other.profit && self.cost < other.cost)
    }
}

/// Exact optimum by dynamic programming over integer tenths.
///
/// `best[g][w]` holds the best (max profit, then min cost) obtainable from
/// groups `g..` with total cost at most `w`. Reconstruction walks groups in
/// order and takes the first option (items ascending, then skip) that
/// attains the stored optimum, which yields the lexicographically earliest
/// optimal selection.
pub fn solve_dp(instance: &MckpInstance) -> Result<MckpSolution> {
    if instance.budget > MAX_DP_BUDGET {
        return Err(Error::BudgetTooLarge(instance.budget));
    }
    ensure_something_feasible(instance)?;
    let budget = instance.comparator.inclusive_budget(instance.budget).get();
    let reachable: i64 = instance
        .groups
        .iter()
        .map(|g| g.iter().map(|i| i.cost.get()).max().unwrap_or(0))
        .sum();
    let width = usize::try_from(budget.min(reachable)).expect("nonnegative") + 1;

    let n = instance.groups.len();
    let mut best = vec![vec![Cell { profit: 0, cost: 0 }; width]; n + 1];
    for g in (0..n).rev() {
        for w in 0..width {
            let mut cell = best[g + 1][w];
            for item in &instance.groups[g] {
                let b = item.cost.get() as usize;
                if b > w {
                    continue;
                }
                let rest = best[g + 1][w - b];
                let candidate = Cell {
                    profit: rest.profit + item.profit.get(),
                    cost: rest.cost + item.cost.get(),
                };
                if candidate.better_than(cell) {
                    cell = candidate;
                }
            }
            best[g][w] = cell;
        }
    }

    let mut selection = Vec::with_capacity(n);
    let mut w = width - 1;
    for g in 0..n {
        let target = best[g][w];
        let pick = instance.groups[g].iter().enumerate().find_map(|(j, item)| {
            let b = item.cost.get() as usize;
            if b > w {
                return None;
            }
            let rest = best[g + 1][w - b];
            let reached = Cell {
                profit: rest.profit + item.profit.get(),
                cost: rest.cost + item.cost.get(),
            };
            (reached == target).then_some((j, b))
        });
        match pick {
            Some((j, b)) => {
                selection.push(Some(j));
                w -= b;
            }
            None => {
                debug_assert!(best[g + 1][w] == target);
                selection.push(None);
            }
        }
    }
    Ok(MckpSolution::from_selection(instance, selection, SolverKind::Dp))
}

/// Enumerates every per-group choice including skipping. Independent of the
/// DP; used as its oracle.
pub fn solve_exhaustive(instance: &MckpInstance) -> Result<MckpSolution> {
    let candidates = instance
        .groups
        .iter()
        .map(|g| g.len() as u128 + 1)
        .try_fold(1u128, |acc, n| acc.checked_mul(n))
        .unwrap_or(u128::MAX);
    if candidates > MAX_ENUMERATION {
        return Err(Error::InstanceTooLarge(candidates));
    }

    // Odometer over options 0..=q per group where q encodes "skip".
    let sizes = instance.group_sizes();
    let mut counter = vec![0usize; sizes.len()];
    let mut best: Option<(Tenths, Tenths, Vec<Option<usize>>)> = None;
    loop {
        let selection: Vec<Option<usize>> = counter
            .iter()
            .zip(&sizes)
            .map(|(&c, &q)| (c < q).then_some(c))
            .collect();
        let (profit, cost) = instance.totals(&selection);
        if instance.comparator.admits(cost, instance.budget) {
            let replace = match &best {
                None => true,
                Some((bp, bc, bs)) => compare_candidates((profit, cost, &selection), (*bp, *bc, bs)) == Ordering::Less,
            };
            if replace {
                best = Some((profit, cost, selection));
            }
        }

        let mut pos = counter.len();
        loop {
            if pos == 0 {
                let (_, _, selection) = best.ok_or(Error::Infeasible)?;
                return Ok(MckpSolution::from_selection(
                    instance,
                    selection,
                    SolverKind::Exhaustive,
                ));
            }
            pos -= 1;
            counter[pos] += 1;
            if counter[pos] <= sizes[pos] {
                break;
            }
            counter[pos] = 0;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolutionFinding {
    GroupCountMismatch {
        expected: usize,
        found: usize,
    },
    UnknownGroup(usize),
    ItemOutOfRange {
        group: usize,
        item: usize,
    },
    MultipleSelections(usize),
    ProfitMismatch {
        claimed: Tenths,
        actual: Tenths,
    },
    CostMismatch {
        claimed: Tenths,
        actual: Tenths,
    },
    BudgetExceeded {
        cost: Tenths,
        budget: Tenths,
        comparator: Comparator,
    },
}

impl fmt::Display for SolutionFinding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolutionFinding::GroupCountMismatch { expected, found } => {
                write!(f, "selection covers {found} groups, instance has {expected}")
            }
            SolutionFinding::UnknownGroup(g) => write!(f, "unknown group {}", g + 1),
            SolutionFinding::ItemOutOfRange { group, item } => {
                write!(f, "item {} out of range in group {}", item + 1, group + 1)
            }
            SolutionFinding::MultipleSelections(g) => write!(f, "multiple selections in group {}", g + 1),
            SolutionFinding::ProfitMismatch { claimed, actual } => {
                write!(f, "profit mismatch: claimed {claimed}, actual {actual}")
            }
            SolutionFinding::CostMismatch { claimed, actual } => {
                write!(f, "cost mismatch: claimed {claimed}, actual {actual}")
            }
            SolutionFinding::BudgetExceeded {
                cost,
                budget,
                comparator,
            } => {
                let op = match comparator {
                    Comparator::Inclusive => ">",
                    Comparator::Exclusive => ">=",
                };
                write!(f, "budget exceeded: {cost} {op} {budget}")
            }
        }
    }
}

/// Checks a raw list of `(group, item)` picks, 0-based. Returns the findings
/// and the totals over the in-range picks.
pub fn verify_selection(instance: &MckpInstance, picks: &[(usize, usize)]) -> (Vec<SolutionFinding>, Tenths, Tenths) {
    let mut findings = Vec::new();
    let mut counts = vec![0usize; instance.groups.len()];
    let mut profit = Tenths::ZERO;
    let mut cost = Tenths::ZERO;
    for &(g, j) in picks {
        let Some(group) = instance.groups.get(g) else {
            findings.push(SolutionFinding::UnknownGroup(g));
            continue;
        };
        let Some(item) = group.get(j) else {
            findings.push(SolutionFinding::ItemOutOfRange { group: g, item: j });
            continue;
        };
        counts[g] += 1;
        if counts[g] == 2 {
            findings.push(SolutionFinding::MultipleSelections(g));
        }
        profit = profit + item.profit;
        cost = cost + item.cost;
    }
    if !instance.comparator.admits(cost, instance.budget) {
        findings.push(SolutionFinding::BudgetExceeded {
            cost,
            budget: instance.budget,
            comparator: instance.comparator,
        });
    }
    (findings, profit, cost)
}

/// Empty iff totals are the true sums, at most one item per group is
/// selected, and the budget holds under the comparator.
pub fn verify_solution(instance: &MckpInstance, solution: &MckpSolution) -> Vec<SolutionFinding> {
    let mut findings = Vec::new();
    if solution.selection.len() != instance.groups.len() {
        findings.push(SolutionFinding::GroupCountMismatch {
            expected: instance.groups.len(),
            found: solution.selection.len(),
        });
    }
    let (mut picked, profit, cost) = verify_selection(instance, &solution.picks());
    findings.append(&mut picked);
    if profit != solution.total_profit {
        findings.push(SolutionFinding::ProfitMismatch {
            claimed: solution.total_profit,
            actual: profit,
        });
    }
    if cost != solution.total_cost {
        findings.push(SolutionFinding::CostMismatch {
            claimed: solution.total_cost,
            actual: cost,
        });
    }
    findings
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(groups: &[&[(i64, i64)]], budget: i64, comparator: Comparator) -> MckpInstance {
        MckpInstance::new(
            groups
                .iter()
                .map(|g| g.iter().map(|&(p, c)| Item::new(p, c)).collect())
                .collect(),
            Tenths(budget),
            comparator,
        )
        .unwrap()
    }

    #[test]
    fn empty_instance() {
        let empty = inst(&[], 0, Comparator::Inclusive);
        for solver in [SolverKind::Greedy, SolverKind::Dp, SolverKind::Exhaustive] {
            let s = solve(&empty, solver).unwrap();
            assert!(s.selection.is_empty());
            assert_eq!((s.total_profit, s.total_cost), (Tenths(0), Tenths(0)));
        }
    }

    #[test]
    fn single_group() {
        let one = inst(&[&[(10, 10)]], 50, Comparator::Inclusive);
        let s = solve_exhaustive(&one).unwrap();
        assert_eq!(s.selection, vec![Some(0)]);
        assert_eq!(s.total_profit, Tenths(10));
    }

    #[test]
    fn exclusive_zero_budget_is_infeasible() {
        let i = inst(&[&[(0, 0), (5, 5)]], 0, Comparator::Exclusive);
        for solver in [SolverKind::Greedy, SolverKind::Dp, SolverKind::Exhaustive] {
            assert!(matches!(solve(&i, solver), Err(Error::Infeasible)));
        }
    }

    #[test]
    fn zero_cost_items_rank_first_in_greedy() {
        let i = inst(&[&[(50, 10)], &[(1, 0)]], 10, Comparator::Inclusive);
        let (s, trace) = solve_greedy_traced(&i).unwrap();
        assert_eq!((trace[0].group, trace[0].item), (1, 0));
        assert_eq!(trace[0].ratio_label(), "inf");
        assert_eq!(s.selection, vec![Some(0), Some(0)]);
    }

    #[test]
    fn tie_break_prefers_lower_cost_then_earlier_group() {
        let i = inst(&[&[(10, 10)], &[(10, 10)]], 10, Comparator::Inclusive);
        assert_eq!(solve_dp(&i).unwrap().selection, vec![Some(0), None]);
        assert_eq!(solve_exhaustive(&i).unwrap().selection, vec![Some(0), None]);

        let i = inst(&[&[(10, 8)], &[(10, 6)]], 10, Comparator::Inclusive);
        assert_eq!(solve_dp(&i).unwrap().selection, vec![None, Some(0)]);
    }

    #[test]
    fn free_null_item_is_chosen_over_skipping() {
        let i = inst(&[&[(0, 0), (5, 50)]], 10, Comparator::Inclusive);
        assert_eq!(solve_dp(&i).unwrap().selection, vec![Some(0)]);
        assert_eq!(solve_greedy(&i).unwrap().selection, vec![None]);
    }

    #[test]
    fn budget_guards() {
        let big = inst(&[&[(1, 1)]], 10_000_001, Comparator::Inclusive);
        assert!(matches!(solve_dp(&big), Err(Error::BudgetTooLarge(_))));
        let at_limit = inst(&[&[(1, 1)]], 10_000_000, Comparator::Inclusive);
        assert_eq!(solve_dp(&at_limit).unwrap().total_profit, Tenths(1));

        let wide: Vec<Vec<(i64, i64)>> = vec![vec![(1, 1); 9]; 7];
        let wide: Vec<&[(i64, i64)]> = wide.iter().map(Vec::as_slice).collect();
        let i = inst(&wide, 10, Comparator::Inclusive);
        assert!(matches!(solve_exhaustive(&i), Err(Error::InstanceTooLarge(10_000_000))));
    }

    #[test]
    fn instance_validation() {
        assert!(MckpInstance::new(vec![vec![]], Tenths(1), Comparator::Inclusive).is_err());
        assert!(MckpInstance::new(vec![vec![Item::new(-1, 0)]], Tenths(1), Comparator::Inclusive).is_err());
        assert!(MckpInstance::new(vec![], Tenths(-1), Comparator::Inclusive).is_err());
    }

    #[test]
    fn verify_findings() {
        let i = inst(&[&[(0, 0), (10, 10)], &[(0, 0), (20, 20)]], 25, Comparator::Inclusive);
        let (findings, _, _) = verify_selection(&i, &[(0, 0), (0, 1)]);
        assert_eq!(findings, vec![SolutionFinding::MultipleSelections(0)]);
        assert_eq!(findings[0].to_string(), "multiple selections in group 1");

        let (findings, profit, cost) = verify_selection(&i, &[(0, 1), (1, 1)]);
        assert_eq!((profit, cost), (Tenths(30), Tenths(30)));
        assert_eq!(findings[0].to_string(), "budget exceeded: 3.0 > 2.5");

        let (findings, _, _) = verify_selection(&i, &[(5, 0), (1, 9)]);
        assert_eq!(findings.len(), 2);

        let lying = MckpSolution {
            selection: vec![Some(1), None],
            total_profit: Tenths(11),
            total_cost: Tenths(10),
            solver: SolverKind::Dp,
        };
        assert_eq!(
            verify_solution(&i, &lying),
            vec![SolutionFinding::ProfitMismatch {
                claimed: Tenths(11),
                actual: Tenths(10)
            }]
        );

        let exclusive = i
            .with_comparator(Comparator::Exclusive)
            .with_budget(Tenths(20))
            .unwrap();
        let (findings, _, _) = verify_selection(&exclusive, &[(1, 1)]);
        assert_eq!(findings[0].to_string(), "budget exceeded: 2.0 >= 2.0");
    }

    #[test]
    fn documents_use_one_based_indices() {
        let i = inst(&[&[(0, 0), (10, 10)]], 25, Comparator::Inclusive);
        let s = solve_dp(&i).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(text, r#"{"solver":"dp","profit":"1.0","cost":"1.0","selection":[2]}"#);
        let back: MckpSolution = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        assert!(
            serde_json::from_str::<MckpSolution>(r#"{"solver":"dp","profit":"0.0","cost":"0.0","selection":[0]}"#)
                .is_err()
        );

        let parsed = MckpInstance::parse(
            r#"{"budget":"19.0","comparator":"inclusive","groups":[[{"profit":"2.0","cost":"3.0"}]]}"#,
        )
        .unwrap();
        assert_eq!(parsed.groups()[0][0], Item::new(20, 30));
        assert_eq!(MckpInstance::parse(&parsed.to_json_pretty()).unwrap(), parsed);
    }
}
