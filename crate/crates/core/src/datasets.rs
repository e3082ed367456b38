//! Built-in worked data: the wireless mobile system hierarchy, its seven
//! generation configurations, the two improvement stages planned from 5G,
//! the three-layer enterprise network fixture, and the improvement activity
//! catalog.

use serde::{Deserialize, Serialize};

use crate::changeops::{ChangeOperation, ImpactClass, OperationGroup};
use crate::mckp::{Comparator, SolverKind};
use crate::morphology::{
    serialize_model, Alternative, ComponentTree, CompositeNode, Configuration, LeafComponent, Node,
};
use crate::planner::{ChainDocument, StagePlan, StageReference};
use crate::tenths::Tenths;

pub const WIRELESS_TREE_ID: &str = "S";

fn leaf(id: &str, label: &str, alternatives: &[(&str, &[&str])]) -> Node {
    let alternatives = alternatives
        .iter()
        .enumerate()
        .map(|(i, (label, parts))| {
            Alternative::new(format!("{id}_{}", i + 1), *label).composed_of(parts.iter().map(|p| format!("{id}_{p}")))
        })
        .collect();
    Node::Leaf(LeafComponent::new(id, label, alternatives))
}

fn composite(id: &str, label: &str, children: Vec<Node>) -> Node {
    Node::Composite(CompositeNode::new(id, label, children))
}

/// Wireless mobile system `S = B1 * B2 * B3 * B4`, 11 leaves, 55 alternatives.
pub fn builtin_model() -> ComponentTree {
    let root = CompositeNode::new(
        WIRELESS_TREE_ID,
        "Wireless mobile system",
        vec![
            composite(
                "B1",
                "Definition",
                vec![
                    leaf(
                        "B11",
                        "technology",
                        &[
                            ("analog cellular technology", &[]),
                            ("digital cellular technology (digital narrow band circuit data)", &[]),
                            ("packet data", &[]),
                            ("digital broadband packet data & IP technology", &[]),
                            ("all IP very high throughput", &[]),
                            ("flat IP network", &["4", "5"]),
                        ],
                    ),
                    leaf(
                        "B12",
                        "switching",
                        &[
                            ("circuit", &[]),
                            ("packet", &[]),
                            ("circuit & packet", &["1", "2"]),
                            ("all packet", &[]),
                        ],
                    ),
                ],
            ),
            composite(
                "B2",
                "Services",
                vec![
                    leaf(
                        "B21",
                        "service",
                        &[
                            ("mobile telephony (voice)", &[]),
                            ("digital voice", &[]),
                            ("SMS", &[]),
                            ("higher capacity packetized data", &[]),
                            (
                                "digital voice & SMS & higher capacity packetized data",
                                &["2", "3", "4"],
                            ),
                            ("integrated high quality audio, video and data", &[]),
                            ("dynamic information access, wearable devices", &[]),
                            ("AI capability", &[]),
                            (
                                "dynamic information access, wearable devices & AI capability",
                                &["7", "8"],
                            ),
                        ],
                    ),
                    leaf("B22", "cloud computing", &[("none", &[]), ("cloud computing", &[])]),
                ],
            ),
            composite(
                "B3",
                "Data transmission & access",
                vec![
                    leaf(
                        "B31",
                        "data bandwidth/throughput speed/data rates",
                        &[
                            ("2 kbps", &[]),
                            ("64 kbps", &[]),
                            ("400 kbps to 30 Mbps", &[]),
                            ("3-5 Mbps, 100 Mbps (WiFi)", &[]),
                            ("200 Mbps to 1 Gbps", &[]),
                            ("approx 20 Gbps", &[]),
                        ],
                    ),
                    leaf(
                        "B32",
                        "multiplexing/access technology",
                        &[
                            ("FDMA", &[]),
                            ("TDMA", &[]),
                            ("FDMA & TDMA", &["1", "2"]),
                            ("CDMA", &[]),
                            ("TDMA & CDMA", &["2", "4"]),
                            ("OFDMA", &[]),
                            ("LAS-CDMA", &[]),
                            ("OFDMA & LAS-CDMA", &["6", "7"]),
                        ],
                    ),
                ],
            ),
            composite(
                "B4",
                "Networking",
                vec![
                    leaf(
                        "B41",
                        "core network",
                        &[
                            ("PSTN", &[]),
                            ("GSM", &[]),
                            ("PSTN & GSM", &["1", "2"]),
                            ("packet N/W", &[]),
                            ("Internet", &[]),
                            ("packet N/W & Internet", &["4", "5"]),
                            ("satellite network", &[]),
                            ("packet N/W & Internet & satellite network", &["4", "5", "7"]),
                        ],
                    ),
                    leaf(
                        "B42",
                        "handoff",
                        &[
                            ("horizontal", &[]),
                            ("vertical", &[]),
                            ("horizontal & vertical", &["1", "2"]),
                        ],
                    ),
                    leaf(
                        "B43",
                        "heterogeneous networks (HetNets)",
                        &[("none", &[]), ("aggregation of different networks (HetNets)", &[])],
                    ),
                    composite(
                        "B44",
                        "space communication",
                        vec![
                            leaf(
                                "B441",
                                "satellite network",
                                &[
                                    ("none", &[]),
                                    ("telecommunication network", &[]),
                                    ("earth imaging", &[]),
                                    ("navigation", &[]),
                                    ("telecommunication & earth imaging & navigation", &["2", "3", "4"]),
                                ],
                            ),
                            leaf(
                                "B442",
                                "satellite functions",
                                &[("none", &[]), ("satellite roaming", &[])],
                            ),
                        ],
                    ),
                ],
            ),
        ],
    );
    ComponentTree::new(root).expect("built-in wireless model is valid")
}

const LEAF_ORDER: [&str; 11] = [
    "B11", "B12", "B21", "B22", "B31", "B32", "B41", "B42", "B43", "B441", "B442",
];

/// Alternative indices in leaf declaration order.
fn generation(id: &str, picks: [u8; 11]) -> Configuration {
    Configuration::from_pairs(
        id,
        WIRELESS_TREE_ID,
        LEAF_ORDER
            .iter()
            .zip(picks)
            .map(|(leaf, k)| (leaf.to_string(), format!("{leaf}_{k}"))),
    )
}

/// `S1G` through `S7G`.
pub fn builtin_generations() -> Vec<Configuration> {
    vec![
        generation("S1G", [1, 1, 1, 1, 1, 3, 1, 1, 1, 1, 1]),
        generation("S2G", [2, 3, 5, 1, 2, 4, 3, 1, 1, 1, 1]),
        generation("S3G", [4, 2, 6, 1, 3, 5, 4, 1, 1, 1, 1]),
        generation("S4G", [5, 4, 7, 1, 4, 5, 5, 3, 1, 1, 1]),
        generation("S5G", [6, 4, 8, 2, 5, 5, 5, 3, 2, 1, 1]),
        generation("S6G", [6, 4, 9, 2, 6, 8, 8, 3, 2, 5, 1]),
        generation("S7G", [6, 4, 9, 2, 6, 8, 8, 3, 2, 5, 2]),
    ]
}

/// The improved 5G systems after stage 1 and stage 2, as published with the
/// worked example.
pub fn builtin_reference_configurations() -> Vec<Configuration> {
    vec![
        generation("S5G_adv1", [6, 4, 9, 2, 6, 7, 7, 3, 2, 2, 1]),
        generation("S5G_adv2", [6, 4, 9, 2, 6, 8, 8, 3, 2, 3, 1]),
    ]
}

/// Looks up a generation or reference configuration by id.
pub fn builtin_configuration(id: &str) -> Option<Configuration> {
    builtin_generations()
        .into_iter()
        .chain(builtin_reference_configurations())
        .find(|c| c.id == id)
}

struct Row {
    to: u8,
    profit: i64,
    cost: i64,
    class: ImpactClass,
    activities: &'static [&'static str],
}

const fn row(to: u8, profit: i64, cost: i64, class: ImpactClass, activities: &'static [&'static str]) -> Row {
    Row {
        to,
        profit,
        cost,
        class,
        activities,
    }
}

fn stage_group(prefix: &str, index: u32, leaf: &str, from: u8, rows: &[Row]) -> OperationGroup {
    let from_alt = format!("{leaf}_{from}");
    let mut ops = vec![ChangeOperation::none_marker(
        format!("{prefix}{index}_1"),
        index,
        leaf,
        &from_alt,
    )];
    for (k, r) in rows.iter().enumerate() {
        ops.push(
            ChangeOperation::change(
                format!("{prefix}{index}_{}", k + 2),
                index,
                leaf,
                &from_alt,
                format!("{leaf}_{}", r.to),
                Tenths(r.profit),
                Tenths(r.cost),
            )
            .with_impact(r.class)
            .with_activities(r.activities.iter().copied()),
        );
    }
    OperationGroup::new(index, leaf, ops)
}

/// Stage 1 (5G to advanced 5G, budget 19.0) and stage 2 (budget 17.5).
/// Stage 2 operations start from the alternatives held after stage 1's
/// published selection.
pub fn builtin_stage_plans() -> (StagePlan, StagePlan) {
    use ImpactClass::*;
    let references = builtin_reference_configurations();

    let stage1 = StagePlan {
        stage_id: "stage1".into(),
        groups: vec![
            stage_group(
                "U",
                1,
                "B21",
                8,
                &[row(9, 20, 30, ArchNodeFunctions, &["O_10", "O_12"])],
            ),
            stage_group("U", 2, "B31", 5, &[row(6, 40, 50, LocalNode, &["O_3", "O_16"])]),
            stage_group(
                "U",
                3,
                "B32",
                5,
                &[
                    row(6, 10, 20, Component, &["O_4"]),
                    row(7, 36, 40, Component, &["O_4"]),
                    row(8, 36, 60, Component, &["O_4", "O_7"]),
                ],
            ),
            stage_group(
                "U",
                4,
                "B41",
                5,
                &[
                    row(6, 36, 60, ArchTopology, &["O_2", "O_14"]),
                    row(7, 70, 70, ArchTopology, &["O_11"]),
                    row(8, 90, 120, Radical, &["O_2", "O_11", "O_14"]),
                ],
            ),
            stage_group(
                "U",
                5,
                "B441",
                1,
                &[
                    row(2, 50, 50, ArchExtension, &["O_11"]),
                    row(3, 56, 70, ArchExtension, &["O_11"]),
                    row(4, 60, 80, ArchExtension, &["O_11"]),
                    row(5, 140, 200, ArchExtension, &["O_11", "O_13"]),
                ],
            ),
        ],
        budget: Tenths(190),
        comparator: Comparator::Inclusive,
        solver: SolverKind::Dp,
        result_id: Some("S5G_adv1".into()),
        reference: Some(StageReference {
            selection: ["U1_2", "U2_2", "U3_3", "U4_3", "U5_2"].map(String::from).to_vec(),
            result: Some(references[0].clone()),
        }),
    };

    let stage2 = StagePlan {
        stage_id: "stage2".into(),
        groups: vec![
            stage_group("V", 1, "B32", 7, &[row(8, 45, 40, Component, &["O_4", "O_7"])]),
            stage_group("V", 2, "B41", 7, &[row(8, 65, 70, ArchTopology, &["O_2", "O_14"])]),
            stage_group(
                "V",
                3,
                "B441",
                2,
                &[
                    row(3, 60, 65, ArchExtension, &["O_11"]),
                    row(4, 65, 75, ArchExtension, &["O_11"]),
                    row(5, 110, 180, ArchExtension, &["O_11", "O_13"]),
                ],
            ),
            stage_group("V", 4, "B442", 1, &[row(2, 120, 300, ArchExtension, &["O_17"])]),
        ],
        budget: Tenths(175),
        comparator: Comparator::Inclusive,
        solver: SolverKind::Dp,
        result_id: Some("S5G_adv2".into()),
        reference: Some(StageReference {
            selection: ["V1_2", "V2_2", "V3_2", "V4_1"].map(String::from).to_vec(),
            result: Some(references[1].clone()),
        }),
    };

    (stage1, stage2)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActivityCatalogEntry {
    pub id: String,
    pub description: String,
    /// Catalog row the activity comes from.
    pub source: String,
}

const ACTIVITIES: [(&str, &str, &str); 17] = [
    ("O_1", "Cloud radio-access networks (RAN) based on SDR and coordinated central controllers", "1.1 implementation of central architecture"),
    ("O_2", "Cloud basic networks (CN) based on SDN", "1.2 implementation of central architecture"),
    ("O_3", "Multidimensional antennas (MIMO)", "2"),
    ("O_4", "Flexible common usage of frequency resources", "3.1 flexibility, adaptivity, heterogeneity"),
    ("O_5", "Terminal and network heterogeneity (different types of access networks, e.g., WiMAX, WiFi, UMTS)", "3.2 flexibility, adaptivity, heterogeneity"),
    ("O_6", "Allocation and management of resources in heterogeneous networks", "3.3 flexibility, adaptivity, heterogeneity"),
    ("O_7", "Inter-network joint work for different radio-access technologies", "3.4 flexibility, adaptivity, heterogeneity"),
    ("O_8", "Self-adaptation and self-optimization networks", "3.5 flexibility, adaptivity, heterogeneity"),
    ("O_9", "Smart homes, smart cities, smart villages", "3.6 flexibility, adaptivity, heterogeneity"),
    ("O_10", "Device-centric architectures", "4"),
    ("O_11", "Very wide area coverage", "5"),
    ("O_12", "User personalization (high data transfer rates, access to large repository of data and services, flexibility)", "6"),
    ("O_13", "Interoperability (unified global standard, global mobility and service portability, i.e., different services from different service providers)", "7"),
    ("O_14", "Network convergence (convergence with both devices and services)", "8"),
    ("O_15", "Lower power consumption", "9"),
    ("O_16", "Ultra fast access of Internet", "10"),
    ("O_17", "Satellite to satellite communication", "11"),
];

pub fn activity_catalog() -> Vec<ActivityCatalogEntry> {
    ACTIVITIES
        .iter()
        .map(|(id, description, source)| ActivityCatalogEntry {
            id: id.to_string(),
            description: description.to_string(),
            source: source.to_string(),
        })
        .collect()
}

/// Three-layer enterprise network `S = A * D * C` with nested
/// `D = M * B`, `M = R * F * Q`. Leaves carry two placeholder alternatives.
pub fn enterprise_model() -> ComponentTree {
    let placeholder = |id: &str, label: &str| {
        leaf(
            id,
            label,
            &[("placeholder alternative 1", &[]), ("placeholder alternative 2", &[])],
        )
    };
    let root = CompositeNode::new(
        "S",
        "Enterprise network",
        vec![
            composite(
                "A",
                "Access layer",
                vec![placeholder("E", "client nodes"), placeholder("T", "connections")],
            ),
            composite(
                "D",
                "Distribution layer",
                vec![
                    composite(
                        "M",
                        "Management",
                        vec![
                            placeholder("R", "routing"),
                            placeholder("F", "filtering"),
                            placeholder("Q", "QoS policies"),
                        ],
                    ),
                    placeholder("B", "branch-office WAN connections"),
                ],
            ),
            composite(
                "C",
                "Core layer",
                vec![
                    placeholder("H", "highest-speed connections between distribution-layer devices"),
                    placeholder("K", "core network topology"),
                ],
            ),
        ],
    );
    ComponentTree::new(root).expect("built-in enterprise model is valid")
}

#[derive(Debug, Clone)]
pub struct Fixtures {
    pub enterprise: ComponentTree,
    pub activities: Vec<ActivityCatalogEntry>,
}

pub fn builtin_fixtures() -> Fixtures {
    Fixtures {
        enterprise: enterprise_model(),
        activities: activity_catalog(),
    }
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("dataset serializes");
    text.push('\n');
    text
}

/// Every built-in dataset as `(file name, contents)` in a fixed order.
pub fn builtin_documents() -> Vec<(String, String)> {
    let (stage1, stage2) = builtin_stage_plans();
    let mut docs = vec![
        ("wireless.json".to_string(), serialize_model(&builtin_model())),
        ("enterprise.json".to_string(), serialize_model(&enterprise_model())),
    ];
    for config in builtin_generations()
        .into_iter()
        .chain(builtin_reference_configurations())
    {
        docs.push((format!("{}.json", config.id), config.to_json_pretty()));
    }
    docs.push(("table8.json".into(), stage1.to_json_pretty()));
    docs.push(("table9.json".into(), stage2.to_json_pretty()));
    docs.push((
        "table8-instance.json".into(),
        stage1.instance().expect("stage 1 builds").to_json_pretty(),
    ));
    docs.push((
        "table9-instance.json".into(),
        stage2.instance().expect("stage 2 builds").to_json_pretty(),
    ));
    docs.push((
        "chain.json".into(),
        pretty(&ChainDocument {
            model: Some("wireless.json".into()),
            initial: "S5G.json".into(),
            stages: vec!["table8.json".into(), "table9.json".into()],
        }),
    ));
    docs.push(("activities.json".into(), pretty(&activity_catalog())));
    docs
}
