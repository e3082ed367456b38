//! Hierarchical morphological models and configurations over them.
//!
//! A [`ComponentTree`] is a ⋆-composition of composite nodes over leaf
//! components; every leaf lists its design alternatives. A [`Configuration`]
//! picks exactly one alternative per leaf. Differences between two
//! configurations are expressed as [`ChangeDelta`]s in depth-first leaf order.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};

/// Checks `[A-Za-z][A-Za-z0-9]*(_[0-9]+)?`.
pub fn is_valid_id(id: &str) -> bool {
    let (stem, suffix) = match id.split_once('_') {
        Some((stem, suffix)) => (stem, Some(suffix)),
        None => (id, None),
    };
    let mut chars = stem.chars();
    let head_ok = chars.next().is_some_and(|c| c.is_ascii_alphabetic());
    let stem_ok = head_ok && chars.all(|c| c.is_ascii_alphanumeric());
    let suffix_ok = suffix.is_none_or(|s| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()));
    stem_ok && suffix_ok
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alternative {
    pub id: String,
    pub label: String,
    /// Sibling alternatives this one combines (e.g. `B32_8 = B32_6 & B32_7`).
    /// Metadata only; never consulted by the solvers.
    pub composed_of: Vec<String>,
}

impl Alternative {
    pub fn new(id: impl Into<String>, label: impl Into<String>) -> Self {
        Alternative {
            id: id.into(),
            label: label.into(),
            composed_of: Vec::new(),
        }
    }

    pub fn composed_of<I, S>(mut self, parts: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.composed_of = parts.into_iter().map(Into::into).collect();
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeafComponent {
    pub id: String,
    pub label: String,
    pub alternatives: Vec<Alternative>,
}

impl LeafComponent {
    pub fn new(id: impl Into<String>, label: impl Into<String>, alternatives: Vec<Alternative>) -> Self {
        LeafComponent {
            id: id.into(),
            label: label.into(),
            alternatives,
        }
    }

    pub fn alternative(&self, id: &str) -> Option<&Alternative> {
        self.alternatives.iter().find(|a| a.id == id)
    }

    pub fn has_alternative(&self, id: &str) -> bool {
        self.alternative(id).is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositeNode {
    pub id: String,
    pub label: String,
    pub children: Vec<Node>,
}

impl CompositeNode {
    pub fn new(id: impl Into<String>, label: impl Into<String>, children: Vec<Node>) -> Self {
        CompositeNode {
            id: id.into(),
            label: label.into(),
            children,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Node {
    Composite(CompositeNode),
    Leaf(LeafComponent),
}

impl Node {
    pub fn id(&self) -> &str {
        match self {
            Node::Composite(c) => &c.id,
            Node::Leaf(l) => &l.id,
        }
    }

    fn depth(&self) -> usize {
        match self {
            Node::Leaf(_) => 1,
            Node::Composite(c) => 1 + c.children.iter().map(Node::depth).max().unwrap_or(0),
        }
    }
}

impl From<CompositeNode> for Node {
    fn from(c: CompositeNode) -> Self {
        Node::Composite(c)
    }
}

impl From<LeafComponent> for Node {
    fn from(l: LeafComponent) -> Self {
        Node::Leaf(l)
    }
}

/// A validated morphological hierarchy. The root is always a composite.
#[derive(Debug, Clone)]
pub struct ComponentTree {
    root: CompositeNode,
    leaves: Vec<LeafComponent>,
    leaf_index: HashMap<String, usize>,
}

impl PartialEq for ComponentTree {
    fn eq(&self, other: &Self) -> bool {
        self.root == other.root
    }
}

impl Eq for ComponentTree {}

impl ComponentTree {
    pub fn new(root: CompositeNode) -> Result<Self> {
        let mut seen = HashSet::new();
        check_composite(&root, &mut seen)?;
        let mut leaves = Vec::new();
        collect_leaves(&root, &mut leaves);
        let leaf_index = leaves.iter().enumerate().map(|(i, l)| (l.id.clone(), i)).collect();
        Ok(ComponentTree {
            root,
            leaves,
            leaf_index,
        })
    }

    pub fn id(&self) -> &str {
        &self.root.id
    }

    pub fn label(&self) -> &str {
        &self.root.label
    }

    pub fn root(&self) -> &CompositeNode {
        &self.root
    }

    /// Leaves in depth-first declaration order.
    pub fn leaves(&self) -> &[LeafComponent] {
        &self.leaves
    }

    pub fn leaf(&self, id: &str) -> Option<&LeafComponent> {
        self.leaf_index.get(id).map(|&i| &self.leaves[i])
    }

    pub fn leaf_position(&self, id: &str) -> Option<usize> {
        self.leaf_index.get(id).copied()
    }

    pub fn alternative_count(&self) -> usize {
        self.leaves.iter().map(|l| l.alternatives.len()).sum()
    }

    /// Depth counting the root as level 1.
    pub fn depth(&self) -> usize {
        1 + self.root.children.iter().map(Node::depth).max().unwrap_or(0)
    }

    pub fn find_node(&self, id: &str) -> Option<&Node> {
        fn walk<'a>(nodes: &'a [Node], id: &str) -> Option<&'a Node> {
            for node in nodes {
                if node.id() == id {
                    return Some(node);
                }
                if let Node::Composite(c) = node {
                    if let Some(found) = walk(&c.children, id) {
                        return Some(found);
                    }
                }
            }
            None
        }
        walk(&self.root.children, id)
    }

    pub fn from_json_value(value: &Value) -> Result<Self> {
        let obj = expect_object(value, "$")?;
        let id = expect_str(obj, "id", "$")?;
        let label = expect_str(obj, "label", "$")?;
        let nodes = expect_array(obj, "nodes", "$")?;
        let children = nodes
            .iter()
            .enumerate()
            .map(|(i, n)| parse_node(n, &format!("$.nodes[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        ComponentTree::new(CompositeNode::new(id, label, children))
    }

    pub fn to_json_value(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("id".into(), Value::String(self.root.id.clone()));
        obj.insert("label".into(), Value::String(self.root.label.clone()));
        obj.insert(
            "nodes".into(),
            Value::Array(self.root.children.iter().map(node_to_json).collect()),
        );
        Value::Object(obj)
    }
}

/// Parses and validates a model interchange document.
pub fn parse_model(document: &str) -> Result<ComponentTree> {
    let value: Value = serde_json::from_str(document)?;
    ComponentTree::from_json_value(&value)
}

/// Pretty-printed model interchange document, newline terminated.
pub fn serialize_model(tree: &ComponentTree) -> String {
    let mut text = serde_json::to_string_pretty(&tree.to_json_value()).expect("model serializes");
    text.push('\n');
    text
}

fn schema(path: &str, message: impl Into<String>) -> Error {
    Error::Schema {
        path: path.to_string(),
        message: message.into(),
    }
}

fn expect_object<'a>(value: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    value.as_object().ok_or_else(|| schema(path, "expected an object"))
}

fn expect_str(obj: &Map<String, Value>, key: &str, path: &str) -> Result<String> {
    match obj.get(key) {
        Some(Value::String(s)) => Ok(s.clone()),
        Some(_) => Err(schema(&format!("{path}.{key}"), "expected a string")),
        None => Err(schema(&format!("{path}.{key}"), "missing field")),
    }
}

fn expect_array<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Vec<Value>> {
    match obj.get(key) {
        Some(Value::Array(a)) => Ok(a),
        Some(_) => Err(schema(&format!("{path}.{key}"), "expected an array")),
        None => Err(schema(&format!("{path}.{key}"), "missing field")),
    }
}

fn reject_unknown_keys(obj: &Map<String, Value>, allowed: &[&str], path: &str) -> Result<()> {
    match obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(schema(&format!("{path}.{k}"), "unknown field")),
        None => Ok(()),
    }
}

fn parse_node(value: &Value, path: &str) -> Result<Node> {
    let obj = expect_object(value, path)?;
    let id = expect_str(obj, "id", path)?;
    let label = expect_str(obj, "label", path)?;
    match (obj.contains_key("children"), obj.contains_key("alternatives")) {
        (true, false) => {
            reject_unknown_keys(obj, &["id", "label", "children"], path)?;
            let children = expect_array(obj, "children", path)?
                .iter()
                .enumerate()
                .map(|(i, c)| parse_node(c, &format!("{path}.children[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            Ok(Node::Composite(CompositeNode::new(id, label, children)))
        }
        (false, true) => {
            reject_unknown_keys(obj, &["id", "label", "alternatives"], path)?;
            let alternatives = expect_array(obj, "alternatives", path)?
                .iter()
                .enumerate()
                .map(|(i, a)| parse_alternative(a, &format!("{path}.alternatives[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            Ok(Node::Leaf(LeafComponent::new(id, label, alternatives)))
        }
        (true, true) => Err(schema(path, "node has both children and alternatives")),
        (false, false) => Err(schema(path, "node needs either children or alternatives")),
    }
}

fn parse_alternative(value: &Value, path: &str) -> Result<Alternative> {
    let obj = expect_object(value, path)?;
    reject_unknown_keys(obj, &["id", "label", "composed_of"], path)?;
    let id = expect_str(obj, "id", path)?;
    let label = expect_str(obj, "label", path)?;
    let composed_of = match obj.get("composed_of") {
        None | Some(Value::Null) => Vec::new(),
        Some(Value::Array(items)) => items
            .iter()
            .enumerate()
            .map(|(i, v)| {
                v.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| schema(&format!("{path}.composed_of[{i}]"), "expected a string"))
            })
            .collect::<Result<Vec<_>>>()?,
        Some(_) => return Err(schema(&format!("{path}.composed_of"), "expected an array")),
    };
    Ok(Alternative { id, label, composed_of })
}

fn node_to_json(node: &Node) -> Value {
    let mut obj = Map::new();
    obj.insert("id".into(), Value::String(node.id().to_string()));
    match node {
        Node::Composite(c) => {
            obj.insert("label".into(), Value::String(c.label.clone()));
            obj.insert(
                "children".into(),
                Value::Array(c.children.iter().map(node_to_json).collect()),
            );
        }
        Node::Leaf(l) => {
            obj.insert("label".into(), Value::String(l.label.clone()));
            let alts = l
                .alternatives
                .iter()
                .map(|a| {
                    let mut alt = Map::new();
                    alt.insert("id".into(), Value::String(a.id.clone()));
                    alt.insert("label".into(), Value::String(a.label.clone()));
                    if !a.composed_of.is_empty() {
                        alt.insert(
                            "composed_of".into(),
                            Value::Array(a.composed_of.iter().cloned().map(Value::String).collect()),
                        );
                    }
                    Value::Object(alt)
                })
                .collect();
            obj.insert("alternatives".into(), Value::Array(alts));
        }
    }
    Value::Object(obj)
}

fn register_id(id: &str, seen: &mut HashSet<String>) -> Result<()> {
    if !is_valid_id(id) {
        return Err(Error::InvalidId(id.to_string()));
    }
    if !seen.insert(id.to_string()) {
        return Err(Error::DuplicateId(id.to_string()));
    }
    Ok(())
}

fn check_composite(node: &CompositeNode, seen: &mut HashSet<String>) -> Result<()> {
    register_id(&node.id, seen)?;
    if node.children.is_empty() {
        return Err(Error::EmptyComposite(node.id.clone()));
    }
    for child in &node.children {
        match child {
            Node::Composite(c) => check_composite(c, seen)?,
            Node::Leaf(l) => check_leaf(l, seen)?,
        }
    }
    Ok(())
}

fn check_leaf(leaf: &LeafComponent, seen: &mut HashSet<String>) -> Result<()> {
    register_id(&leaf.id, seen)?;
    if leaf.alternatives.is_empty() {
        return Err(Error::EmptyAlternatives(leaf.id.clone()));
    }
    for alt in &leaf.alternatives {
        register_id(&alt.id, seen)?;
        let suffix_ok = alt
            .id
            .strip_prefix(leaf.id.as_str())
            .and_then(|rest| rest.strip_prefix('_'))
            .is_some_and(|n| !n.is_empty() && n.bytes().all(|b| b.is_ascii_digit()));
        if !suffix_ok {
            return Err(Error::ForeignAlternative {
                leaf: leaf.id.clone(),
                alternative: alt.id.clone(),
            });
        }
    }
    for alt in &leaf.alternatives {
        for target in &alt.composed_of {
            if target == &alt.id || !leaf.has_alternative(target) {
                return Err(Error::DanglingComposedOf {
                    alternative: alt.id.clone(),
                    target: target.clone(),
                });
            }
        }
    }
    check_composition_acyclic(leaf)
}

fn check_composition_acyclic(leaf: &LeafComponent) -> Result<()> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Fresh,
        Active,
        Done,
    }
    fn visit(leaf: &LeafComponent, i: usize, marks: &mut [Mark]) -> Result<()> {
        match marks[i] {
            Mark::Done => return Ok(()),
            Mark::Active => return Err(Error::ComposedOfCycle(leaf.alternatives[i].id.clone())),
            Mark::Fresh => {}
        }
        marks[i] = Mark::Active;
        for target in &leaf.alternatives[i].composed_of {
            let j = leaf
                .alternatives
                .iter()
                .position(|a| &a.id == target)
                .expect("composed_of targets checked before cycle detection");
            visit(leaf, j, marks)?;
        }
        marks[i] = Mark::Done;
        Ok(())
    }
    let mut marks = vec![Mark::Fresh; leaf.alternatives.len()];
    (0..leaf.alternatives.len()).try_for_each(|i| visit(leaf, i, &mut marks))
}

fn collect_leaves(node: &CompositeNode, out: &mut Vec<LeafComponent>) {
    for child in &node.children {
        match child {
            Node::Composite(c) => collect_leaves(c, out),
            Node::Leaf(l) => out.push(l.clone()),
        }
    }
}

/// One alternative per leaf. Construction is unchecked so that broken
/// assignments can be represented and reported by [`validate_configuration`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Configuration {
    pub id: String,
    pub tree_id: String,
    pub assignment: BTreeMap<String, String>,
}

impl Configuration {
    pub fn new(id: impl Into<String>, tree_id: impl Into<String>) -> Self {
        Configuration {
            id: id.into(),
            tree_id: tree_id.into(),
            assignment: BTreeMap::new(),
        }
    }

    pub fn from_pairs<I, L, A>(id: impl Into<String>, tree_id: impl Into<String>, pairs: I) -> Self
    where
        I: IntoIterator<Item = (L, A)>,
        L: Into<String>,
        A: Into<String>,
    {
        Configuration {
            id: id.into(),
            tree_id: tree_id.into(),
            assignment: pairs.into_iter().map(|(l, a)| (l.into(), a.into())).collect(),
        }
    }

    pub fn get(&self, leaf: &str) -> Option<&str> {
        self.assignment.get(leaf).map(String::as_str)
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = id.into();
        self
    }

    pub fn parse(document: &str) -> Result<Self> {
        Ok(serde_json::from_str(document)?)
    }

    pub fn to_json_pretty(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("configuration serializes");
        text.push('\n');
        text
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConfigFinding {
    TreeMismatch { expected: String, found: String },
    UnassignedLeaf(String),
    UnknownLeaf(String),
    UnknownAlternative { leaf: String, alternative: String },
}

impl fmt::Display for ConfigFinding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigFinding::TreeMismatch { expected, found } => {
                write!(f, "tree mismatch: configuration targets {found}, model is {expected}")
            }
            ConfigFinding::UnassignedLeaf(leaf) => write!(f, "unassigned leaf: {leaf}"),
            ConfigFinding::UnknownLeaf(leaf) => write!(f, "unknown leaf: {leaf}"),
            ConfigFinding::UnknownAlternative { leaf, alternative } => {
                write!(f, "unknown alternative: {alternative} at leaf {leaf}")
            }
        }
    }
}

/// Empty iff `config` assigns exactly one existing alternative to every leaf
/// of `tree` and nothing else.
pub fn validate_configuration(tree: &ComponentTree, config: &Configuration) -> Vec<ConfigFinding> {
    let mut findings = Vec::new();
    if config.tree_id != tree.id() {
        findings.push(ConfigFinding::TreeMismatch {
            expected: tree.id().to_string(),
            found: config.tree_id.clone(),
        });
    }
    for leaf in tree.leaves() {
        match config.get(&leaf.id) {
            None => findings.push(ConfigFinding::UnassignedLeaf(leaf.id.clone())),
            Some(alt) if !leaf.has_alternative(alt) => findings.push(ConfigFinding::UnknownAlternative {
                leaf: leaf.id.clone(),
                alternative: alt.to_string(),
            }),
            Some(_) => {}
        }
    }
    for leaf in config.assignment.keys() {
        if tree.leaf(leaf).is_none() {
            findings.push(ConfigFinding::UnknownLeaf(leaf.clone()));
        }
    }
    findings
}

pub(crate) fn ensure_valid(tree: &ComponentTree, config: &Configuration) -> Result<()> {
    let findings = validate_configuration(tree, config);
    if findings.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidConfiguration {
            id: config.id.clone(),
            findings: findings.iter().map(ToString::to_string).collect(),
        })
    }
}

/// Canonical ⋆-expression with ASCII `*`, e.g.
/// `(B11_6 * B12_4) * (B21_8 * B22_2) * ...`.
pub fn render_configuration(tree: &ComponentTree, config: &Configuration) -> Result<String> {
    ensure_valid(tree, config)?;
    Ok(render_children(&tree.root().children, config))
}

fn render_children(children: &[Node], config: &Configuration) -> String {
    children
        .iter()
        .map(|child| match child {
            Node::Leaf(l) => config.get(&l.id).expect("validated").to_string(),
            Node::Composite(c) if c.children.len() == 1 => render_children(&c.children, config),
            Node::Composite(c) => format!("({})", render_children(&c.children, config)),
        })
        .collect::<Vec<_>>()
        .join(" * ")
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChangeDelta {
    pub leaf: String,
    #[serde(rename = "from")]
    pub from_alt: String,
    #[serde(rename = "to")]
    pub to_alt: String,
}

impl ChangeDelta {
    pub fn new(leaf: impl Into<String>, from_alt: impl Into<String>, to_alt: impl Into<String>) -> Self {
        ChangeDelta {
            leaf: leaf.into(),
            from_alt: from_alt.into(),
            to_alt: to_alt.into(),
        }
    }
}

impl fmt::Display for ChangeDelta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.from_alt, self.to_alt)
    }
}

/// One delta per differing leaf, in depth-first leaf declaration order.
pub fn diff_configurations(tree: &ComponentTree, from: &Configuration, to: &Configuration) -> Result<Vec<ChangeDelta>> {
    if from.tree_id != to.tree_id {
        return Err(Error::TreeMismatch {
            expected: from.tree_id.clone(),
            found: to.tree_id.clone(),
        });
    }
    ensure_valid(tree, from)?;
    ensure_valid(tree, to)?;
    Ok(tree
        .leaves()
        .iter()
        .filter_map(|leaf| {
            let a = from.get(&leaf.id)?;
            let b = to.get(&leaf.id)?;
            (a != b).then(|| ChangeDelta::new(&leaf.id, a, b))
        })
        .collect())
}

pub fn apply_deltas(tree: &ComponentTree, config: &Configuration, deltas: &[ChangeDelta]) -> Result<Configuration> {
    ensure_valid(tree, config)?;
    let mut targeted = HashSet::new();
    let mut next = config.clone();
    for delta in deltas {
        let leaf = tree
            .leaf(&delta.leaf)
            .ok_or_else(|| Error::InvalidDelta(format!("unknown leaf {}", delta.leaf)))?;
        if delta.from_alt == delta.to_alt {
            return Err(Error::InvalidDelta(format!("self-loop change at {}", delta.leaf)));
        }
        if !leaf.has_alternative(&delta.to_alt) {
            return Err(Error::InvalidDelta(format!(
                "{} is not an alternative of {}",
                delta.to_alt, delta.leaf
            )));
        }
        if !targeted.insert(delta.leaf.as_str()) {
            return Err(Error::DuplicateLeafTarget(delta.leaf.clone()));
        }
        let held = config.get(&delta.leaf).expect("validated");
        if held != delta.from_alt {
            return Err(Error::DeltaNotApplicable {
                leaf: delta.leaf.clone(),
                held: held.to_string(),
                expected: delta.from_alt.clone(),
            });
        }
        next.assignment.insert(delta.leaf.clone(), delta.to_alt.clone());
    }
    Ok(next)
}
