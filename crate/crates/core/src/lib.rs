//! Petri-net to statechart reduction.
//!
//! This crate turns flat place/transition nets into hierarchical statecharts
//! by exhaustively applying two local rewrite rules (an AND rule for groups
//! of places with identical surroundings, an OR rule for chain links), plus
//! the supporting cast: canonical forms for comparing results, a generator
//! for well-structured benchmark nets, JSON serialization and Graphviz
//! export.
//!
//! The usual entry point is [`engine::TransformState::initialize`] followed
//! by [`engine::TransformState::reduce`]:
//!
//! ```
//! use pn2sc_core::engine::{ReductionPolicy, TransformState};
//! use pn2sc_core::net::PetriNet;
//!
//! let mut net = PetriNet::new();
//! let p1 = net.add_place("idle");
//! let t = net.add_transition("go");
//! let p2 = net.add_place("busy");
//! net.add_arc(p1, t).unwrap();
//! net.add_arc(t, p2).unwrap();
//!
//! let outcome = TransformState::initialize(net)
//!     .unwrap()
//!     .reduce(ReductionPolicy::Deterministic);
//! assert!(outcome.is_success());
//! ```

pub mod canon;
pub mod dot;
pub mod engine;
pub mod equiv;
pub mod generator;
pub mod io;
pub mod net;
pub mod statechart;
pub mod suite;

pub use canon::{
    canonical_net, canonical_statechart, nets_equivalent, statecharts_equivalent, CanonError,
    CanonicalForm,
};
pub use engine::{
    AndMatch, AndSide, Applications, AppliedRule, EngineError, OrMatch, ReductionOutcome,
    ReductionPolicy, Snapshot, SnapshotModels, TraceMode, TransformState,
};
pub use equiv::{EquivError, EquivMap};
pub use generator::{generate, GeneratorError, GeneratorSpec, Template};
pub use io::{
    models_equivalent, read_net, read_statechart, write_model, write_net, write_outcome,
    write_statechart, ReadError, ScModel, WriteError,
};
pub use net::{ModelError, NodeId, PetriNet, Place, Transition, Violation};
pub use statechart::{
    EdgeId, HyperEdge, ScViolation, State, StateId, StateKind, Statechart, StatechartError,
};
