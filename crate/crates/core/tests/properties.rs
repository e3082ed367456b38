use std::collections::HashSet;

use proptest::prelude::*;

use morphplan::changeops::apply_operation;
use morphplan::datasets::{builtin_model, enterprise_model};
use morphplan::mckp::{solve_dp, solve_exhaustive, solve_greedy, verify_solution};
use morphplan::morphology::{
    apply_deltas, diff_configurations, parse_model, render_configuration, serialize_model, validate_configuration,
    Alternative, ComponentTree, CompositeNode, Configuration, LeafComponent, Node,
};
use morphplan::{ChangeOperation, Comparator, Error, Item, MckpInstance, Tenths};

/// Plain enumeration of every per-group choice, kept apart from the crate's
/// solvers. Returns the best (profit, cost) or `None` if nothing is feasible.
fn brute_force(groups: &[Vec<(i64, i64)>], budget: i64, strict: bool) -> Option<(i64, i64)> {
    fn rec(groups: &[Vec<(i64, i64)>], budget: i64, strict: bool, p: i64, c: i64, best: &mut Option<(i64, i64)>) {
        match groups.split_first() {
            None => {
                let ok = if strict { c < budget } else { c <= budget };
                if ok {
                    let better = match *best {
                        None => true,
                        Some((bp, bc)) => p > bp || (p == bp && c < bc),
                    };
                    if better {
                        *best = Some((p, c));
                    }
                }
            }
            Some((first, rest)) => {
                rec(rest, budget, strict, p, c, best);
                for &(ip, ic) in first {
                    rec(rest, budget, strict, p + ip, c + ic, best);
                }
            }
        }
    }
    let mut best = None;
    rec(groups, budget, strict, 0, 0, &mut best);
    best
}

fn instance_strategy() -> impl Strategy<Value = (Vec<Vec<(i64, i64)>>, i64, bool)> {
    (
        prop::collection::vec(prop::collection::vec((0i64..=300, 0i64..=300), 1..=6), 0..=6),
        0i64..=600,
        any::<bool>(),
    )
}

fn build(groups: &[Vec<(i64, i64)>], budget: i64, strict: bool) -> MckpInstance {
    MckpInstance::new(
        groups
            .iter()
            .map(|g| g.iter().map(|&(p, c)| Item::new(p, c)).collect())
            .collect(),
        Tenths(budget),
        if strict {
            Comparator::Exclusive
        } else {
            Comparator::Inclusive
        },
    )
    .unwrap()
}

proptest! {
    #[test]
    fn dp_matches_brute_force((groups, budget, strict) in instance_strategy()) {
        let inst = build(&groups, budget, strict);
        match brute_force(&groups, budget, strict) {
            None => {
                prop_assert!(matches!(solve_dp(&inst), Err(Error::Infeasible)));
                prop_assert!(matches!(solve_exhaustive(&inst), Err(Error::Infeasible)));
            }
            Some((p, c)) => {
                let dp = solve_dp(&inst).unwrap();
                let ex = solve_exhaustive(&inst).unwrap();
                prop_assert_eq!((dp.total_profit, dp.total_cost), (Tenths(p), Tenths(c)));
                prop_assert_eq!(&dp.selection, &ex.selection);
                prop_assert!(verify_solution(&inst, &dp).is_empty());
            }
        }
    }

    #[test]
    fn greedy_is_feasible_and_dominated((groups, budget, strict) in instance_strategy()) {
        let inst = build(&groups, budget, strict);
        if let Ok(g) = solve_greedy(&inst) {
            prop_assert!(verify_solution(&inst, &g).is_empty());
            prop_assert!(g.total_profit <= solve_dp(&inst).unwrap().total_profit);
        }
    }

    #[test]
    fn dp_profit_monotone_in_budget((groups, budget, _s) in instance_strategy(), extra in 0i64..100) {
        let low = solve_dp(&build(&groups, budget, false)).unwrap();
        let high = solve_dp(&build(&groups, budget + extra, false)).unwrap();
        prop_assert!(low.total_profit <= high.total_profit);
    }

    #[test]
    fn exclusive_equals_inclusive_minus_one((groups, budget, _s) in instance_strategy()) {
        prop_assume!(budget >= 1);
        let strict = solve_dp(&build(&groups, budget, true)).unwrap();
        let loose = solve_dp(&build(&groups, budget - 1, false)).unwrap();
        prop_assert_eq!(strict, loose);
    }

    #[test]
    fn zero_budget_selects_only_free_items((groups, _b, _s) in instance_strategy()) {
        let inst = build(&groups, 0, false);
        let s = solve_dp(&inst).unwrap();
        for (g, j) in s.picks() {
            prop_assert_eq!(inst.groups()[g][j].cost, Tenths(0));
        }
        let free: i64 = groups.iter().map(|g| g.iter().filter(|i| i.1 == 0).map(|i| i.0).max().unwrap_or(0)).sum();
        prop_assert_eq!(s.total_profit, Tenths(free));
    }
}

fn random_config(tree: &ComponentTree, picks: &[usize], id: &str) -> Configuration {
    Configuration::from_pairs(
        id,
        tree.id(),
        tree.leaves()
            .iter()
            .zip(picks.iter().cycle())
            .map(|(l, &k)| (l.id.clone(), l.alternatives[k % l.alternatives.len()].id.clone())),
    )
}

fn trees() -> Vec<ComponentTree> {
    vec![builtin_model(), enterprise_model()]
}

proptest! {
    #[test]
    fn diff_then_apply_round_trips(
        which in 0usize..2,
        a in prop::collection::vec(0usize..16, 11),
        b in prop::collection::vec(0usize..16, 11),
    ) {
        let tree = &trees()[which];
        let ca = random_config(tree, &a, "A");
        let cb = random_config(tree, &b, "B");
        let deltas = diff_configurations(tree, &ca, &cb).unwrap();
        let applied = apply_deltas(tree, &ca, &deltas).unwrap();
        prop_assert_eq!(&applied.assignment, &cb.assignment);
        prop_assert!(diff_configurations(tree, &ca, &ca).unwrap().is_empty());
        let changed: HashSet<_> = deltas.iter().map(|d| d.leaf.as_str()).collect();
        prop_assert_eq!(changed.len(), deltas.len());
    }

    #[test]
    fn render_is_injective(
        a in prop::collection::vec(0usize..16, 11),
        b in prop::collection::vec(0usize..16, 11),
    ) {
        let tree = builtin_model();
        let ca = random_config(&tree, &a, "A");
        let cb = random_config(&tree, &b, "B");
        let ra = render_configuration(&tree, &ca).unwrap();
        let rb = render_configuration(&tree, &cb).unwrap();
        prop_assert_eq!(ra == rb, ca.assignment == cb.assignment);
    }

    #[test]
    fn rendered_expression_reparses_to_tree_shape(
        which in 0usize..2,
        a in prop::collection::vec(0usize..16, 11),
    ) {
        let tree = &trees()[which];
        let config = random_config(tree, &a, "A");
        let text = render_configuration(tree, &config).unwrap();
        let parsed = parse_expression(&text);
        prop_assert_eq!(parsed, expected_shape(&tree.root().children, &config));
    }

    #[test]
    fn each_single_violation_is_reported(
        a in prop::collection::vec(0usize..16, 11),
        leaf_pick in 0usize..11,
        mutation in 0u8..4,
    ) {
        let tree = builtin_model();
        let mut config = random_config(&tree, &a, "A");
        prop_assert!(validate_configuration(&tree, &config).is_empty());
        let leaf = tree.leaves()[leaf_pick].id.clone();
        match mutation {
            0 => { config.assignment.remove(&leaf); }
            1 => { config.assignment.insert(leaf.clone(), format!("{leaf}_99")); }
            2 => { config.assignment.insert("Z9".into(), "Z9_1".into()); }
            _ => { config.tree_id = "Other".into(); }
        }
        prop_assert_eq!(validate_configuration(&tree, &config).len(), 1);
    }

    #[test]
    fn none_marker_composes(a in prop::collection::vec(0usize..16, 11), leaf_pick in 0usize..11, to in 0usize..16) {
        let tree = builtin_model();
        let config = random_config(&tree, &a, "A");
        let leaf = &tree.leaves()[leaf_pick];
        let from = config.get(&leaf.id).unwrap().to_string();
        let to_alt = leaf.alternatives[to % leaf.alternatives.len()].id.clone();
        prop_assume!(to_alt != from);
        let none = ChangeOperation::none_marker("N1_1", 1, &leaf.id, &from);
        let op = ChangeOperation::change("N1_2", 1, &leaf.id, &from, to_alt, Tenths(10), Tenths(10));
        let via_none = apply_operation(&apply_operation(&config, &none).unwrap(), &op).unwrap();
        prop_assert_eq!(via_none, apply_operation(&config, &op).unwrap());
    }

    #[test]
    fn model_documents_round_trip(shape in shape_strategy()) {
        let tree = build_tree(&shape);
        let text = serialize_model(&tree);
        let back = parse_model(&text).unwrap();
        prop_assert_eq!(&back, &tree);
        prop_assert_eq!(serialize_model(&back), text);
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Expr {
    Atom(String),
    Group(Vec<Expr>),
}

/// Parses `a * (b * c) * d` into nested groups; the top level is a group.
fn parse_expression(text: &str) -> Vec<Expr> {
    fn terms(tokens: &[String], pos: &mut usize) -> Vec<Expr> {
        let mut out = Vec::new();
        loop {
            let tok = tokens[*pos].clone();
            *pos += 1;
            if tok == "(" {
                let inner = terms(tokens, pos);
                assert_eq!(tokens[*pos], ")");
                *pos += 1;
                out.push(Expr::Group(inner));
            } else {
                out.push(Expr::Atom(tok));
            }
            if *pos < tokens.len() && tokens[*pos] == "*" {
                *pos += 1;
            } else {
                return out;
            }
        }
    }
    let spaced = text.replace('(', " ( ").replace(')', " ) ");
    let tokens: Vec<String> = spaced.split_whitespace().map(String::from).collect();
    let mut pos = 0;
    let out = terms(&tokens, &mut pos);
    assert_eq!(pos, tokens.len());
    out
}

fn expected_shape(children: &[Node], config: &Configuration) -> Vec<Expr> {
    let mut out = Vec::new();
    for child in children {
        match child {
            Node::Leaf(l) => out.push(Expr::Atom(config.get(&l.id).unwrap().to_string())),
            Node::Composite(c) if c.children.len() == 1 => out.extend(expected_shape(&c.children, config)),
            Node::Composite(c) => out.push(Expr::Group(expected_shape(&c.children, config))),
        }
    }
    out
}

#[derive(Debug, Clone)]
enum Shape {
    Leaf { alts: usize, compose: bool, label: String },
    Composite(Vec<Shape>),
}

fn shape_strategy() -> impl Strategy<Value = Vec<Shape>> {
    let leaf = (1usize..5, any::<bool>(), "[a-z &/-]{0,12}").prop_map(|(alts, compose, label)| Shape::Leaf {
        alts,
        compose,
        label,
    });
    let node = leaf.prop_recursive(3, 24, 4, |inner| {
        prop::collection::vec(inner, 1..4).prop_map(Shape::Composite)
    });
    prop::collection::vec(node, 1..4)
}

fn build_tree(shapes: &[Shape]) -> ComponentTree {
    fn to_node(shape: &Shape, counter: &mut usize) -> Node {
        *counter += 1;
        let n = *counter;
        match shape {
            Shape::Leaf { alts, compose, label } => {
                let id = format!("L{n}");
                let alternatives = (1..=*alts)
                    .map(|k| {
                        let alt = Alternative::new(format!("{id}_{k}"), label.clone());
                        if *compose && k > 2 {
                            alt.composed_of([format!("{id}_1"), format!("{id}_{}", k - 1)])
                        } else {
                            alt
                        }
                    })
                    .collect();
                Node::Leaf(LeafComponent::new(id, label.clone(), alternatives))
            }
            Shape::Composite(children) => {
                let kids = children.iter().map(|c| to_node(c, counter)).collect();
                Node::Composite(CompositeNode::new(format!("N{n}"), "composite", kids))
            }
        }
    }
    let mut counter = 0;
    let children = shapes.iter().map(|s| to_node(s, &mut counter)).collect();
    ComponentTree::new(CompositeNode::new("Root", "random model", children)).unwrap()
}
