//! JSON serialization for nets and reduction results.
//!
//! Two document formats, both tagged with a `format` field:
//!
//! * `pn2sc-net/1` holds a net as flat lists of places, transitions and
//!   arcs. Places and transitions share one id space.
//! * `pn2sc-sc/1` holds a statechart as nested state records plus a list of
//!   hyperedges referring to basic states by id. A successful reduction sets
//!   `top`; a stuck one leaves `top` null and adds a `residual` section with
//!   the leftover net and the surviving place-to-OR pairs.
//!
//! Ids survive a round trip unchanged and writers emit sorted, pretty
//! printed JSON, so reading a document and writing it back reproduces the
//! bytes exactly.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

use crate::engine::ReductionOutcome;
use crate::net::{ModelError, NodeId, PetriNet};
use crate::statechart::{EdgeId, StateId, StateKind, Statechart};

pub const NET_FORMAT: &str = "pn2sc-net/1";
pub const SC_FORMAT: &str = "pn2sc-sc/1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReadError {
    #[error("JSON syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("document does not match the schema: {0}")]
    Schema(String),
    #[error("unsupported format tag {found:?}, expected {expected:?}")]
    Format { found: String, expected: String },
    #[error("duplicate id {0}")]
    DuplicateId(u32),
    #[error("arc {from} -> {to} is invalid: {reason}")]
    BadArc { from: u32, to: u32, reason: String },
    #[error("state {0} is referenced but never defined")]
    UnknownState(u32),
    #[error("hyperedge {edge} endpoint {state} is not a basic state")]
    EdgeEndpointNotBasic { edge: u32, state: u32 },
    #[error("top state {0} is missing or not a root")]
    BadTopState(u32),
    #[error("state kind {0:?} is not one of \"basic\", \"or\", \"and\"")]
    BadStateKind(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WriteError {
    #[error("refusing to serialize an empty statechart")]
    EmptyStatechart,
}

fn json_error(err: serde_json::Error) -> ReadError {
    if err.is_syntax() || err.is_eof() {
        ReadError::Syntax {
            line: err.line(),
            column: err.column(),
            message: err.to_string(),
        }
    } else {
        ReadError::Schema(err.to_string())
    }
}

// ---------------------------------------------------------------- net files

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NetDocument {
    pub format: String,
    pub places: Vec<PlaceRecord>,
    pub transitions: Vec<TransitionRecord>,
    pub arcs: Vec<ArcRecord>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlaceRecord {
    pub id: u32,
    pub name: String,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub synthetic: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TransitionRecord {
    pub id: u32,
    pub name: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ArcRecord {
    pub from: u32,
    pub to: u32,
}

fn net_to_document(net: &PetriNet) -> NetDocument {
    NetDocument {
        format: NET_FORMAT.to_string(),
        places: net
            .places()
            .map(|p| PlaceRecord {
                id: p.id().0,
                name: p.name().to_string(),
                synthetic: p.is_synthetic(),
            })
            .collect(),
        transitions: net
            .transitions()
            .map(|t| TransitionRecord {
                id: t.id().0,
                name: t.name().to_string(),
            })
            .collect(),
        arcs: net
            .arcs()
            .into_iter()
            .map(|(from, to)| ArcRecord {
                from: from.0,
                to: to.0,
            })
            .collect(),
    }
}

fn document_to_net(doc: &NetDocument) -> Result<PetriNet, ReadError> {
    if doc.format != NET_FORMAT {
        return Err(ReadError::Format {
            found: doc.format.clone(),
            expected: NET_FORMAT.to_string(),
        });
    }
    let mut net = PetriNet::new();
    for place in &doc.places {
        net.insert_place_with_id(NodeId(place.id), &place.name, place.synthetic)
            .map_err(|_| ReadError::DuplicateId(place.id))?;
    }
    for trans in &doc.transitions {
        net.insert_transition_with_id(NodeId(trans.id), &trans.name)
            .map_err(|_| ReadError::DuplicateId(trans.id))?;
    }
    for arc in &doc.arcs {
        net.add_arc(NodeId(arc.from), NodeId(arc.to))
            .map_err(|err| match err {
                ModelError::DuplicateArc { .. } => ReadError::BadArc {
                    from: arc.from,
                    to: arc.to,
                    reason: "duplicate arc".to_string(),
                },
                other => ReadError::BadArc {
                    from: arc.from,
                    to: arc.to,
                    reason: other.to_string(),
                },
            })?;
    }
    Ok(net)
}

/// Parses a `pn2sc-net/1` document.
pub fn read_net(bytes: &[u8]) -> Result<PetriNet, ReadError> {
    let doc: NetDocument = serde_json::from_slice(bytes).map_err(json_error)?;
    document_to_net(&doc)
}

/// Serializes a net, pretty printed with a trailing newline.
pub fn write_net(net: &PetriNet) -> String {
    let mut out = serde_json::to_string_pretty(&net_to_document(net)).expect("document serializes");
    out.push('\n');
    out
}

// ----------------------------------------------------- statechart documents

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScDocument {
    pub format: String,
    /// Id of the top AND state of a completed reduction, absent for partial
    /// forests.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub top: Option<u32>,
    pub roots: Vec<StateRecord>,
    pub hyperedges: Vec<HyperEdgeRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<ResidualSection>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateRecord {
    pub id: u32,
    pub kind: String,
    pub name: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<StateRecord>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HyperEdgeRecord {
    pub id: u32,
    pub name: String,
    pub sources: Vec<u32>,
    pub targets: Vec<u32>,
}

/// Leftovers of a stuck reduction: the unreduced net and the mapping from
/// its places to OR states in the forest.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResidualSection {
    pub net: NetDocument,
    pub equiv: Vec<EquivRecord>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EquivRecord {
    pub place: u32,
    pub state: u32,
}

/// A deserialized `pn2sc-sc/1` document in model form.
#[derive(Debug, Clone)]
pub struct ScModel {
    pub statechart: Statechart,
    pub residual: Option<ResidualModel>,
}

#[derive(Debug, Clone)]
pub struct ResidualModel {
    pub net: PetriNet,
    pub equiv: Vec<(NodeId, StateId)>,
}

fn state_to_record(sc: &Statechart, id: StateId) -> StateRecord {
    let state = sc.state(id).expect("traversal stays inside the chart");
    StateRecord {
        id: state.id().0,
        kind: state.kind().to_string(),
        name: state.name().to_string(),
        children: state
            .children()
            .iter()
            .map(|c| state_to_record(sc, *c))
            .collect(),
    }
}

fn statechart_to_document(sc: &Statechart) -> Result<ScDocument, WriteError> {
    if sc.state_count() == 0 {
        return Err(WriteError::EmptyStatechart);
    }
    Ok(ScDocument {
        format: SC_FORMAT.to_string(),
        top: sc.top_state().map(|s| s.0),
        roots: sc
            .roots()
            .into_iter()
            .map(|r| state_to_record(sc, r))
            .collect(),
        hyperedges: sc
            .hyperedges()
            .map(|e| HyperEdgeRecord {
                id: e.id().0,
                name: e.name().to_string(),
                sources: e.sources().iter().map(|s| s.0).collect(),
                targets: e.targets().iter().map(|s| s.0).collect(),
            })
            .collect(),
        residual: None,
    })
}

fn render(doc: &ScDocument) -> String {
    let mut out = serde_json::to_string_pretty(doc).expect("document serializes");
    out.push('\n');
    out
}

/// Serializes a statechart (complete or partial forest) without residual
/// information.
pub fn write_statechart(sc: &Statechart) -> Result<String, WriteError> {
    Ok(render(&statechart_to_document(sc)?))
}

/// Serializes a reduction outcome. Success produces a rooted document;
/// stuck produces a forest plus the residual net and equivalence pairs, so
/// the failure can be inspected or compared later.
pub fn write_outcome(outcome: &ReductionOutcome) -> Result<String, WriteError> {
    match outcome {
        ReductionOutcome::Success { statechart, .. } => write_statechart(statechart),
        ReductionOutcome::Stuck {
            net, forest, equiv, ..
        } => {
            let mut doc = statechart_to_document(forest)?;
            doc.residual = Some(ResidualSection {
                net: net_to_document(net),
                equiv: equiv
                    .iter()
                    .map(|(place, state)| EquivRecord {
                        place: place.0,
                        state: state.0,
                    })
                    .collect(),
            });
            Ok(render(&doc))
        }
    }
}

/// Serializes a previously loaded model, residual section included. The
/// output of a load/store round trip is byte-identical to its input.
pub fn write_model(model: &ScModel) -> Result<String, WriteError> {
    let mut doc = statechart_to_document(&model.statechart)?;
    if let Some(residual) = &model.residual {
        doc.residual = Some(ResidualSection {
            net: net_to_document(&residual.net),
            equiv: residual
                .equiv
                .iter()
                .map(|(place, state)| EquivRecord {
                    place: place.0,
                    state: state.0,
                })
                .collect(),
        });
    }
    Ok(render(&doc))
}

fn record_kind(kind: &str) -> Result<StateKind, ReadError> {
    match kind {
        "basic" => Ok(StateKind::Basic),
        "or" => Ok(StateKind::Or),
        "and" => Ok(StateKind::And),
        other => Err(ReadError::BadStateKind(other.to_string())),
    }
}

fn insert_record(sc: &mut Statechart, record: &StateRecord) -> Result<(), ReadError> {
    let kind = record_kind(&record.kind)?;
    let id = StateId(record.id);
    sc.insert_state_with_id(id, &record.name, kind)
        .map_err(|_| ReadError::DuplicateId(record.id))?;
    for child in &record.children {
        insert_record(sc, child)?;
        sc.attach(id, StateId(child.id)).map_err(|err| match err {
            crate::statechart::StatechartError::NotACompound(_) => {
                ReadError::Schema(format!("basic state {} has children", record.id))
            }
            other => ReadError::Schema(other.to_string()),
        })?;
    }
    Ok(())
}

/// Parses a `pn2sc-sc/1` document back into models.
pub fn read_statechart(bytes: &[u8]) -> Result<ScModel, ReadError> {
    let doc: ScDocument = serde_json::from_slice(bytes).map_err(json_error)?;
    if doc.format != SC_FORMAT {
        return Err(ReadError::Format {
            found: doc.format.clone(),
            expected: SC_FORMAT.to_string(),
        });
    }
    let mut sc = Statechart::new();
    for root in &doc.roots {
        insert_record(&mut sc, root)?;
    }
    for edge in &doc.hyperedges {
        let endpoints = |ids: &[u32]| -> Result<BTreeSet<StateId>, ReadError> {
            ids.iter()
                .map(|raw| {
                    let id = StateId(*raw);
                    match sc.state(id) {
                        None => Err(ReadError::UnknownState(*raw)),
                        Some(s) if s.kind() != StateKind::Basic => {
                            Err(ReadError::EdgeEndpointNotBasic {
                                edge: edge.id,
                                state: *raw,
                            })
                        }
                        Some(_) => Ok(id),
                    }
                })
                .collect()
        };
        let sources = endpoints(&edge.sources)?;
        let targets = endpoints(&edge.targets)?;
        sc.insert_hyperedge_with_id(EdgeId(edge.id), &edge.name, sources, targets)
            .map_err(|_| ReadError::DuplicateId(edge.id))?;
    }
    if let Some(top) = doc.top {
        sc.set_top_state(StateId(top))
            .map_err(|_| ReadError::BadTopState(top))?;
    }
    let residual = match &doc.residual {
        None => None,
        Some(section) => {
            let net = document_to_net(&section.net)?;
            let mut equiv = Vec::new();
            for pair in &section.equiv {
                if !net.has_place(NodeId(pair.place)) {
                    return Err(ReadError::Schema(format!(
                        "equiv entry refers to missing place {}",
                        pair.place
                    )));
                }
                let state = sc
                    .state(StateId(pair.state))
                    .ok_or(ReadError::UnknownState(pair.state))?;
                if state.kind() != StateKind::Or {
                    return Err(ReadError::Schema(format!(
                        "equiv entry maps place {} to non-OR state {}",
                        pair.place, pair.state
                    )));
                }
                equiv.push((NodeId(pair.place), StateId(pair.state)));
            }
            Some(ResidualModel { net, equiv })
        }
    };
    Ok(ScModel {
        statechart: sc,
        residual,
    })
}

/// Result-level equivalence: equal statechart canonical forms, and either
/// both documents carry no residual or their residual nets match
/// canonically.
pub fn models_equivalent(a: &ScModel, b: &ScModel) -> Result<bool, crate::canon::CanonError> {
    if !crate::canon::statecharts_equivalent(&a.statechart, &b.statechart)? {
        return Ok(false);
    }
    match (&a.residual, &b.residual) {
        (None, None) => Ok(true),
        (Some(ra), Some(rb)) => crate::canon::nets_equivalent(&ra.net, &rb.net),
        _ => Ok(false),
    }
}
