//! Canonical textual forms for comparing models.
//!
//! Two reductions of the same net may produce different ids and different
//! generated names depending on rule order. The encodings here erase both:
//!
//! * A statechart is rendered bottom-up with children sorted at every level.
//!   Basic state names and hyperedge names are part of the encoding; OR and
//!   AND state names are not, since the engine invents them.
//! * A net is summarized by iterative neighborhood refinement: nodes start
//!   colored by kind, degree and (for non-synthetic nodes) name, and colors
//!   are re-derived from neighbor colors until the partition stops splitting.
//!   No hashing is involved, so equal encodings cannot collide.
//!
//! Encodings are plain strings. Equal strings mean equivalent models; for
//! the net form the converse holds up to the refinement's ability to
//! distinguish non-isomorphic nets, which is exact on every net family the
//! engine produces and is backstopped by including full per-node signatures
//! in the output.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::net::PetriNet;
use crate::statechart::{StateId, StateKind, Statechart};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CanonError {
    #[error(
        "statechart containment is malformed: reached {encoded} of {total} states from the roots"
    )]
    MalformedContainment { encoded: usize, total: usize },
    #[error("net is inconsistent: {0}")]
    InvalidNet(String),
}

/// An id-free, name-normalized rendering of a model. Compare with `==`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm(String);

impl CanonicalForm {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl std::fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

/// Renders the containment forest and the hyperedges. Works for complete
/// statecharts and for the partial forests of a stuck reduction alike.
pub fn canonical_statechart(sc: &Statechart) -> Result<CanonicalForm, CanonError> {
    let mut encoded = 0usize;
    let mut roots: Vec<String> = sc
        .roots()
        .into_iter()
        .map(|r| encode_state(sc, r, &mut encoded, sc.state_count()))
        .collect();
    // Shared or cyclic containment keeps some states out of reach of the
    // root scan (or counts none at all); either way the forest is broken.
    if encoded != sc.state_count() {
        return Err(CanonError::MalformedContainment {
            encoded,
            total: sc.state_count(),
        });
    }
    roots.sort();

    let mut edges: Vec<String> = sc
        .hyperedges()
        .map(|e| {
            let mut sources: Vec<String> = e
                .sources()
                .iter()
                .map(|s| format!("{:?}", leaf_name(sc, *s)))
                .collect();
            sources.sort();
            let mut targets: Vec<String> = e
                .targets()
                .iter()
                .map(|s| format!("{:?}", leaf_name(sc, *s)))
                .collect();
            targets.sort();
            format!(
                "H({:?})[{}]->[{}]",
                e.name(),
                sources.join(","),
                targets.join(",")
            )
        })
        .collect();
    edges.sort();

    let mut text = String::from("sc{");
    text.push_str(&roots.join(";"));
    text.push_str("}edges{");
    text.push_str(&edges.join(";"));
    text.push('}');
    Ok(CanonicalForm(text))
}

fn leaf_name(sc: &Statechart, id: StateId) -> &str {
    sc.state(id).map(|s| s.name()).unwrap_or("<missing>")
}

fn encode_state(sc: &Statechart, id: StateId, encoded: &mut usize, limit: usize) -> String {
    *encoded += 1;
    // More visits than states means containment is not a forest; stop
    // descending (the caller's count check reports the error).
    if *encoded > limit {
        return String::from("<overflow>");
    }
    let state = match sc.state(id) {
        Some(s) => s,
        None => return String::from("<missing>"),
    };
    match state.kind() {
        StateKind::Basic => format!("B({:?})", state.name()),
        StateKind::Or | StateKind::And => {
            let mut children: Vec<String> = state
                .children()
                .iter()
                .map(|c| encode_state(sc, *c, encoded, limit))
                .collect();
            children.sort();
            let tag = if state.kind() == StateKind::Or {
                "O"
            } else {
                "A"
            };
            format!("{tag}[{}]", children.join(","))
        }
    }
}

/// True when the two statecharts have equal canonical forms.
pub fn statecharts_equivalent(a: &Statechart, b: &Statechart) -> Result<bool, CanonError> {
    Ok(canonical_statechart(a)? == canonical_statechart(b)?)
}

/// Renders a net up to node ids and synthetic place names.
///
/// Every node gets a refined color; the encoding lists one record per node
/// carrying its kind, its name when meaningful, its color and the colors of
/// its neighbors on each side. Renumbering ids or renaming synthetic places
/// cannot change the output.
pub fn canonical_net(net: &PetriNet) -> Result<CanonicalForm, CanonError> {
    if let Some(first) = net.validate().first() {
        return Err(CanonError::InvalidNet(first.to_string()));
    }

    // Node order is fixed once here; all later vectors index into it.
    #[derive(Clone)]
    struct Node {
        kind: char,
        name: Option<String>,
        preds: Vec<usize>,
        succs: Vec<usize>,
    }
    let mut index = BTreeMap::new();
    let mut nodes = Vec::new();
    for place in net.places() {
        index.insert(place.id(), nodes.len());
        nodes.push(Node {
            kind: 'P',
            name: (!place.is_synthetic()).then(|| place.name().to_string()),
            preds: Vec::new(),
            succs: Vec::new(),
        });
    }
    for trans in net.transitions() {
        index.insert(trans.id(), nodes.len());
        nodes.push(Node {
            kind: 'T',
            name: Some(trans.name().to_string()),
            preds: Vec::new(),
            succs: Vec::new(),
        });
    }
    for (from, to) in net.arcs() {
        let from = index[&from];
        let to = index[&to];
        nodes[from].succs.push(to);
        nodes[to].preds.push(from);
    }

    // Initial colors from local data only, then refine until stable.
    let mut colors = assign_colors(
        nodes
            .iter()
            .map(|n| {
                format!(
                    "{}|{:?}|{}|{}",
                    n.kind,
                    n.name,
                    n.preds.len(),
                    n.succs.len()
                )
            })
            .collect(),
    );
    loop {
        let signatures: Vec<String> = nodes
            .iter()
            .enumerate()
            .map(|(i, n)| signature(i, n.preds.as_slice(), n.succs.as_slice(), &colors))
            .collect();
        let next = assign_colors(signatures);
        let stable = count_distinct(&next) == count_distinct(&colors);
        colors = next;
        if stable {
            break;
        }
    }

    let mut records: Vec<String> = nodes
        .iter()
        .enumerate()
        .map(|(i, n)| {
            format!(
                "{}|{:?}|{}",
                n.kind,
                n.name,
                signature(i, &n.preds, &n.succs, &colors)
            )
        })
        .collect();
    records.sort();
    Ok(CanonicalForm(format!("net{{{}}}", records.join(";"))))
}

fn signature(node: usize, preds: &[usize], succs: &[usize], colors: &[usize]) -> String {
    let mut pred_colors: Vec<usize> = preds.iter().map(|p| colors[*p]).collect();
    pred_colors.sort_unstable();
    let mut succ_colors: Vec<usize> = succs.iter().map(|s| colors[*s]).collect();
    succ_colors.sort_unstable();
    format!("c{}<{:?}>{:?}", colors[node], pred_colors, succ_colors)
}

/// Maps each distinct key to its rank in the sorted key list.
fn assign_colors(keys: Vec<String>) -> Vec<usize> {
    let mut sorted: Vec<&String> = keys.iter().collect();
    sorted.sort();
    sorted.dedup();
    let rank: BTreeMap<&String, usize> = sorted
        .into_iter()
        .enumerate()
        .map(|(i, k)| (k, i))
        .collect();
    keys.iter().map(|k| rank[k]).collect()
}

fn count_distinct(colors: &[usize]) -> usize {
    let mut sorted = colors.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    sorted.len()
}

/// True when the two nets have equal canonical forms.
pub fn nets_equivalent(a: &PetriNet, b: &PetriNet) -> Result<bool, CanonError> {
    Ok(canonical_net(a)? == canonical_net(b)?)
}
