//! Change/improvement operations over a configuration and their assembly
//! into multiple-choice knapsack instances.
//!
//! Operations come in groups, one group per component leaf. The first member
//! of every group is the "do nothing" operation, so the solver's choice per
//! group maps back to exactly one operation.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mckp::{Comparator, Item, MckpInstance, MckpSolution};
use crate::morphology::{ComponentTree, Configuration};
use crate::tenths::Tenths;

/// Severity of a change, from minor node-level evolutions to radical ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ImpactClass {
    LocalNode,
    LocalArchitecture,
    Component,
    ArchNodeFunctions,
    ArchTopology,
    ArchExtension,
    Radical,
}

impl ImpactClass {
    pub const ALL: [ImpactClass; 7] = [
        ImpactClass::LocalNode,
        ImpactClass::LocalArchitecture,
        ImpactClass::Component,
        ImpactClass::ArchNodeFunctions,
        ImpactClass::ArchTopology,
        ImpactClass::ArchExtension,
        ImpactClass::Radical,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ImpactClass::LocalNode => "local-node",
            ImpactClass::LocalArchitecture => "local-architecture",
            ImpactClass::Component => "component",
            ImpactClass::ArchNodeFunctions => "arch-node-functions",
            ImpactClass::ArchTopology => "arch-topology",
            ImpactClass::ArchExtension => "arch-extension",
            ImpactClass::Radical => "radical",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            ImpactClass::LocalNode => "local evolution at the node level",
            ImpactClass::LocalArchitecture => "local evolution at the architectural level",
            ImpactClass::Component => "component change in a class of network nodes",
            ImpactClass::ArchNodeFunctions => "architectural change of nodes or node functions",
            ImpactClass::ArchTopology => "architectural change of system topology",
            ImpactClass::ArchExtension => "architectural extension with a new system part",
            ImpactClass::Radical => "radical change at both node and architecture levels",
        }
    }
}

impl fmt::Display for ImpactClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ImpactClass {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        ImpactClass::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown impact class {s:?}"))
    }
}

/// `leaf: from_alt -> to_alt` with an expected profit and cost. `to_alt` is
/// `None` for the "do nothing" operation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChangeOperation {
    pub id: String,
    pub group: u32,
    pub leaf: String,
    pub from_alt: String,
    pub to_alt: Option<String>,
    pub profit: Tenths,
    pub cost: Tenths,
    pub impact_class: Option<ImpactClass>,
    pub activity_refs: Vec<String>,
}

impl ChangeOperation {
    pub fn none_marker(
        id: impl Into<String>,
        group: u32,
        leaf: impl Into<String>,
        from_alt: impl Into<String>,
    ) -> Self {
        ChangeOperation {
            id: id.into(),
            group,
            leaf: leaf.into(),
            from_alt: from_alt.into(),
            to_alt: None,
            profit: Tenths::ZERO,
            cost: Tenths::ZERO,
            impact_class: None,
            activity_refs: Vec::new(),
        }
    }

    pub fn change(
        id: impl Into<String>,
        group: u32,
        leaf: impl Into<String>,
        from_alt: impl Into<String>,
        to_alt: impl Into<String>,
        profit: Tenths,
        cost: Tenths,
    ) -> Self {
        ChangeOperation {
            id: id.into(),
            group,
            leaf: leaf.into(),
            from_alt: from_alt.into(),
            to_alt: Some(to_alt.into()),
            profit,
            cost,
            impact_class: None,
            activity_refs: Vec::new(),
        }
    }

    pub fn with_impact(mut self, class: ImpactClass) -> Self {
        self.impact_class = Some(class);
        self
    }

    pub fn with_activities<I, S>(mut self, refs: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.activity_refs = refs.into_iter().map(Into::into).collect();
        self
    }

    pub fn is_none_marker(&self) -> bool {
        self.to_alt.is_none()
    }

    pub fn item(&self) -> Item {
        Item {
            profit: self.profit,
            cost: self.cost,
        }
    }
}

impl fmt::Display for ChangeOperation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.to_alt {
            None => write!(f, "{}: None", self.id),
            Some(to) => write!(f, "{}: {} -> {}", self.id, self.from_alt, to),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OperationFinding {
    UnknownLeaf(String),
    UnknownAlternative { leaf: String, alternative: String },
    SelfLoop,
    NoneWithProfit,
    NoneWithCost,
    NegativeProfit,
    NegativeCost,
}

impl fmt::Display for OperationFinding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OperationFinding::UnknownLeaf(l) => write!(f, "unknown leaf: {l}"),
            OperationFinding::UnknownAlternative { leaf, alternative } => {
                write!(f, "unknown alternative: {alternative} at leaf {leaf}")
            }
            OperationFinding::SelfLoop => f.write_str("self-loop change"),
            OperationFinding::NoneWithProfit => f.write_str("None operation must have zero profit"),
            OperationFinding::NoneWithCost => f.write_str("None operation must have zero cost"),
            OperationFinding::NegativeProfit => f.write_str("negative profit"),
            OperationFinding::NegativeCost => f.write_str("negative cost"),
        }
    }
}

pub fn validate_operation(tree: &ComponentTree, op: &ChangeOperation) -> Vec<OperationFinding> {
    let mut findings = Vec::new();
    match tree.leaf(&op.leaf) {
        None => findings.push(OperationFinding::UnknownLeaf(op.leaf.clone())),
        Some(leaf) => {
            let targets = std::iter::once(&op.from_alt).chain(op.to_alt.as_ref());
            for alt in targets {
                if !leaf.has_alternative(alt) {
                    findings.push(OperationFinding::UnknownAlternative {
                        leaf: op.leaf.clone(),
                        alternative: alt.clone(),
                    });
                }
            }
        }
    }
    match &op.to_alt {
        None => {
            if op.profit != Tenths::ZERO {
                findings.push(OperationFinding::NoneWithProfit);
            }
            if op.cost != Tenths::ZERO {
                findings.push(OperationFinding::NoneWithCost);
            }
        }
        Some(to) if *to == op.from_alt => findings.push(OperationFinding::SelfLoop),
        Some(_) => {}
    }
    if op.profit.is_negative() {
        findings.push(OperationFinding::NegativeProfit);
    }
    if op.cost.is_negative() {
        findings.push(OperationFinding::NegativeCost);
    }
    findings
}

/// The "do nothing" operation returns `config` unchanged; any other
/// operation requires `config` to hold `from_alt` at its leaf.
pub fn apply_operation(config: &Configuration, op: &ChangeOperation) -> Result<Configuration> {
    let Some(to) = &op.to_alt else {
        return Ok(config.clone());
    };
    let held = config.get(&op.leaf).ok_or_else(|| Error::OperationNotApplicable {
        op: op.id.clone(),
        leaf: op.leaf.clone(),
        held: "nothing".into(),
        expected: op.from_alt.clone(),
    })?;
    if held != op.from_alt {
        return Err(Error::OperationNotApplicable {
            op: op.id.clone(),
            leaf: op.leaf.clone(),
            held: held.to_string(),
            expected: op.from_alt.clone(),
        });
    }
    let mut next = config.clone();
    next.assignment.insert(op.leaf.clone(), to.clone());
    Ok(next)
}

/// All alternatives for one component leaf; the leading member is the
/// "do nothing" operation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperationGroup {
    pub index: u32,
    pub leaf: String,
    pub operations: Vec<ChangeOperation>,
}

impl OperationGroup {
    pub fn new(index: u32, leaf: impl Into<String>, operations: Vec<ChangeOperation>) -> Self {
        OperationGroup {
            index,
            leaf: leaf.into(),
            operations,
        }
    }

    fn check_shape(&self) -> Result<()> {
        let invalid = |message: String| Error::InvalidGroup {
            group: self.index,
            message,
        };
        match self.operations.first() {
            Some(first) if first.is_none_marker() => {}
            _ => return Err(Error::MissingNoneMarker(self.index)),
        }
        if self.operations.iter().filter(|op| op.is_none_marker()).count() > 1 {
            return Err(invalid("more than one None operation".into()));
        }
        for op in &self.operations {
            if op.leaf != self.leaf {
                return Err(invalid(format!(
                    "{} targets {}, group targets {}",
                    op.id, op.leaf, self.leaf
                )));
            }
            if op.group != self.index {
                return Err(invalid(format!("{} is labelled group {}", op.id, op.group)));
            }
            if op.profit.is_negative() || op.cost.is_negative() {
                return Err(invalid(format!("{} has a negative estimate", op.id)));
            }
            if op.is_none_marker() && (op.profit != Tenths::ZERO || op.cost != Tenths::ZERO) {
                return Err(invalid(format!(
                    "None operation {} must have zero profit and cost",
                    op.id
                )));
            }
        }
        Ok(())
    }
}

/// Group-level and operation-level findings against `tree`, as strings.
pub fn validate_groups(tree: &ComponentTree, groups: &[OperationGroup]) -> Vec<String> {
    let mut findings = Vec::new();
    if let Err(e) = check_group_set(groups) {
        findings.push(e.to_string());
    }
    for group in groups {
        for op in &group.operations {
            for finding in validate_operation(tree, op) {
                findings.push(format!("{}: {finding}", op.id));
            }
        }
    }
    findings
}

fn check_group_set(groups: &[OperationGroup]) -> Result<()> {
    let mut indices = HashSet::new();
    let mut leaves = HashSet::new();
    let mut op_ids = HashSet::new();
    for (position, group) in groups.iter().enumerate() {
        if !indices.insert(group.index) {
            return Err(Error::DuplicateGroup(group.index));
        }
        let expected = position as u32 + 1;
        if group.index != expected {
            return Err(Error::GroupOrder {
                expected,
                found: group.index,
            });
        }
        group.check_shape()?;
        if !leaves.insert(group.leaf.as_str()) {
            return Err(Error::DuplicateStageLeaf(group.leaf.clone()));
        }
        for op in &group.operations {
            if !op_ids.insert(op.id.as_str()) {
                return Err(Error::DuplicateId(op.id.clone()));
            }
        }
    }
    Ok(())
}

/// One MCKP group per operation group, one item per operation, in order, so
/// item `(g, j)` is `groups[g].operations[j]`.
pub fn build_mckp_instance(groups: &[OperationGroup], budget: Tenths, comparator: Comparator) -> Result<MckpInstance> {
    check_group_set(groups)?;
    let items = groups
        .iter()
        .map(|g| g.operations.iter().map(ChangeOperation::item).collect())
        .collect();
    MckpInstance::new(items, budget, comparator)
}

/// The operation chosen in every group that has a selection, including
/// "do nothing" picks.
pub fn chosen_operations<'a>(groups: &'a [OperationGroup], solution: &MckpSolution) -> Vec<&'a ChangeOperation> {
    solution
        .picks()
        .into_iter()
        .map(|(g, j)| &groups[g].operations[j])
        .collect()
}

/// Maps operation ids to `(group, item)` positions, 0-based.
pub fn resolve_operation_ids<S: AsRef<str>>(groups: &[OperationGroup], ids: &[S]) -> Result<Vec<(usize, usize)>> {
    ids.iter()
        .map(|id| {
            let id = id.as_ref();
            groups
                .iter()
                .enumerate()
                .find_map(|(g, group)| group.operations.iter().position(|op| op.id == id).map(|j| (g, j)))
                .ok_or_else(|| Error::UnknownOperation(id.to_string()))
        })
        .collect()
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OperationDocument {
    id: String,
    from: String,
    to: Option<String>,
    profit: Tenths,
    cost: Tenths,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    impact_class: Option<ImpactClass>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    activity_refs: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupDocument {
    group: u32,
    leaf: String,
    operations: Vec<OperationDocument>,
}

impl Serialize for OperationGroup {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        GroupDocument {
            group: self.index,
            leaf: self.leaf.clone(),
            operations: self
                .operations
                .iter()
                .map(|op| OperationDocument {
                    id: op.id.clone(),
                    from: op.from_alt.clone(),
                    to: op.to_alt.clone(),
                    profit: op.profit,
                    cost: op.cost,
                    impact_class: op.impact_class,
                    activity_refs: op.activity_refs.clone(),
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for OperationGroup {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let doc = GroupDocument::deserialize(deserializer)?;
        let operations = doc
            .operations
            .into_iter()
            .map(|op| ChangeOperation {
                id: op.id,
                group: doc.group,
                leaf: doc.leaf.clone(),
                from_alt: op.from,
                to_alt: op.to,
                profit: op.profit,
                cost: op.cost,
                impact_class: op.impact_class,
                activity_refs: op.activity_refs,
            })
            .collect();
        Ok(OperationGroup {
            index: doc.group,
            leaf: doc.leaf,
            operations,
        })
    }
}
