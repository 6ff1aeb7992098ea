//! Flat Petri-net model.
//!
//! A net is a bipartite graph of places and transitions. Every arc is stored
//! twice, once on each endpoint: a place knows the transitions feeding it
//! (`incoming`) and the transitions it feeds (`outgoing`), and a transition
//! knows its input and output places. The mutation methods on [`PetriNet`]
//! keep both directions in sync; [`PetriNet::validate`] can check the
//! invariant explicitly after deserialization or in tests.
//!
//! Places and transitions share a single id space drawn from a per-net
//! monotone counter, so a [`NodeId`] alone identifies a node and ids are
//! never reused, even after removals.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Identifier of a place or transition within one [`PetriNet`].
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default,
)]
#[serde(transparent)]
pub struct NodeId(pub u32);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

/// A place node together with the transitions on either side of it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Place {
    id: NodeId,
    name: String,
    /// True for places created by the reduction itself rather than the
    /// original model. Synthetic places have generated names that carry no
    /// meaning, and equivalence checks ignore them.
    synthetic: bool,
    incoming: BTreeSet<NodeId>,
    outgoing: BTreeSet<NodeId>,
}

impl Place {
    pub fn id(&self) -> NodeId {
        self.id
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_synthetic(&self) -> bool {
        self.synthetic
    }

    /// Transitions with an arc into this place.
    pub fn incoming(&self) -> &BTreeSet<NodeId> {
        &self.incoming
    }

    /// Transitions this place has an arc to.
    pub fn outgoing(&self) -> &BTreeSet<NodeId> {
        &self.outgoing
    }
}

/// A transition node together with its input and output places.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transition {
    id: NodeId,
    name: String,
    inputs: BTreeSet<NodeId>,
    outputs: BTreeSet<NodeId>,
}

impl Transition {
    pub fn id(&self) -> NodeId {
        self.id
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Places with an arc into this transition.
    pub fn inputs(&self) -> &BTreeSet<NodeId> {
        &self.inputs
    }

    /// Places this transition has an arc to.
    pub fn outputs(&self) -> &BTreeSet<NodeId> {
        &self.outputs
    }
}

/// Errors raised by the structural mutation methods of [`PetriNet`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("no node with id {0}")]
    MissingNode(NodeId),
    #[error("{0} is not a place")]
    NotAPlace(NodeId),
    #[error("{0} is not a transition")]
    NotATransition(NodeId),
    #[error("arc {from} -> {to} must connect a place and a transition")]
    NotBipartite { from: NodeId, to: NodeId },
    #[error("arc {from} -> {to} already exists")]
    DuplicateArc { from: NodeId, to: NodeId },
    #[error("id {0} is already taken")]
    IdTaken(NodeId),
}

/// One inconsistency found by [`PetriNet::validate`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("id {0} is used by both a place and a transition")]
    SharedId(NodeId),
    #[error("{from} refers to {to}, which does not exist")]
    DanglingReference { from: NodeId, to: NodeId },
    #[error("{from} records an arc with {to}, but {to} does not record it back")]
    MissingDual { from: NodeId, to: NodeId },
}

/// A Petri net with set-valued arcs (at most one arc per direction between a
/// given place and transition).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PetriNet {
    places: BTreeMap<NodeId, Place>,
    transitions: BTreeMap<NodeId, Transition>,
    next_id: u32,
}

impl PetriNet {
    pub fn new() -> Self {
        Self::default()
    }

    fn fresh_id(&mut self) -> NodeId {
        let id = NodeId(self.next_id);
        self.next_id += 1;
        id
    }

    /// Adds an ordinary (non-synthetic) place and returns its id.
    pub fn add_place(&mut self, name: impl Into<String>) -> NodeId {
        let id = self.fresh_id();
        self.places.insert(
            id,
            Place {
                id,
                name: name.into(),
                synthetic: false,
                incoming: BTreeSet::new(),
                outgoing: BTreeSet::new(),
            },
        );
        id
    }

    /// Adds a place flagged as synthetic. The reduction uses this for the
    /// merged places it creates.
    pub fn add_synthetic_place(&mut self, name: impl Into<String>) -> NodeId {
        let id = self.add_place(name);
        self.places.get_mut(&id).expect("just inserted").synthetic = true;
        id
    }

    pub fn add_transition(&mut self, name: impl Into<String>) -> NodeId {
        let id = self.fresh_id();
        self.transitions.insert(
            id,
            Transition {
                id,
                name: name.into(),
                inputs: BTreeSet::new(),
                outputs: BTreeSet::new(),
            },
        );
        id
    }

    /// Inserts a place under a caller-chosen id, used when reading a net back
    /// from a file so that ids survive a round trip.
    pub(crate) fn insert_place_with_id(
        &mut self,
        id: NodeId,
        name: impl Into<String>,
        synthetic: bool,
    ) -> Result<(), ModelError> {
        if self.places.contains_key(&id) || self.transitions.contains_key(&id) {
            return Err(ModelError::IdTaken(id));
        }
        self.places.insert(
            id,
            Place {
                id,
                name: name.into(),
                synthetic,
                incoming: BTreeSet::new(),
                outgoing: BTreeSet::new(),
            },
        );
        self.next_id = self.next_id.max(id.0 + 1);
        Ok(())
    }

    pub(crate) fn insert_transition_with_id(
        &mut self,
        id: NodeId,
        name: impl Into<String>,
    ) -> Result<(), ModelError> {
        if self.places.contains_key(&id) || self.transitions.contains_key(&id) {
            return Err(ModelError::IdTaken(id));
        }
        self.transitions.insert(
            id,
            Transition {
                id,
                name: name.into(),
                inputs: BTreeSet::new(),
                outputs: BTreeSet::new(),
            },
        );
        self.next_id = self.next_id.max(id.0 + 1);
        Ok(())
    }

    /// Adds the arc `from -> to`. Exactly one endpoint must be a place and
    /// the other a transition; the arc must not already exist.
    pub fn add_arc(&mut self, from: NodeId, to: NodeId) -> Result<(), ModelError> {
        let from_is_place = self.places.contains_key(&from);
        let from_is_trans = self.transitions.contains_key(&from);
        let to_is_place = self.places.contains_key(&to);
        let to_is_trans = self.transitions.contains_key(&to);
        if !from_is_place && !from_is_trans {
            return Err(ModelError::MissingNode(from));
        }
        if !to_is_place && !to_is_trans {
            return Err(ModelError::MissingNode(to));
        }
        if from_is_place && to_is_trans {
            let place = self.places.get_mut(&from).expect("checked");
            if !place.outgoing.insert(to) {
                return Err(ModelError::DuplicateArc { from, to });
            }
            self.transitions
                .get_mut(&to)
                .expect("checked")
                .inputs
                .insert(from);
            Ok(())
        } else if from_is_trans && to_is_place {
            let trans = self.transitions.get_mut(&from).expect("checked");
            if !trans.outputs.insert(to) {
                return Err(ModelError::DuplicateArc { from, to });
            }
            self.places
                .get_mut(&to)
                .expect("checked")
                .incoming
                .insert(from);
            Ok(())
        } else {
            Err(ModelError::NotBipartite { from, to })
        }
    }

    /// Removes a place and every arc touching it, returning the removed node.
    pub fn remove_place(&mut self, id: NodeId) -> Result<Place, ModelError> {
        let place = self.places.remove(&id).ok_or_else(|| {
            if self.transitions.contains_key(&id) {
                ModelError::NotAPlace(id)
            } else {
                ModelError::MissingNode(id)
            }
        })?;
        for t in &place.incoming {
            if let Some(trans) = self.transitions.get_mut(t) {
                trans.outputs.remove(&id);
            }
        }
        for t in &place.outgoing {
            if let Some(trans) = self.transitions.get_mut(t) {
                trans.inputs.remove(&id);
            }
        }
        Ok(place)
    }

    /// Removes a transition and every arc touching it, returning the removed
    /// node.
    pub fn remove_transition(&mut self, id: NodeId) -> Result<Transition, ModelError> {
        let trans = self.transitions.remove(&id).ok_or_else(|| {
            if self.places.contains_key(&id) {
                ModelError::NotATransition(id)
            } else {
                ModelError::MissingNode(id)
            }
        })?;
        for p in &trans.inputs {
            if let Some(place) = self.places.get_mut(p) {
                place.outgoing.remove(&id);
            }
        }
        for p in &trans.outputs {
            if let Some(place) = self.places.get_mut(p) {
                place.incoming.remove(&id);
            }
        }
        Ok(trans)
    }

    pub fn place(&self, id: NodeId) -> Option<&Place> {
        self.places.get(&id)
    }

    pub fn transition(&self, id: NodeId) -> Option<&Transition> {
        self.transitions.get(&id)
    }

    pub fn has_place(&self, id: NodeId) -> bool {
        self.places.contains_key(&id)
    }

    pub fn has_transition(&self, id: NodeId) -> bool {
        self.transitions.contains_key(&id)
    }

    /// Places in ascending id order.
    pub fn places(&self) -> impl Iterator<Item = &Place> {
        self.places.values()
    }

    /// Transitions in ascending id order.
    pub fn transitions(&self) -> impl Iterator<Item = &Transition> {
        self.transitions.values()
    }

    pub fn place_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.places.keys().copied()
    }

    pub fn transition_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.transitions.keys().copied()
    }

    pub fn place_count(&self) -> usize {
        self.places.len()
    }

    pub fn transition_count(&self) -> usize {
        self.transitions.len()
    }

    /// Total node count (places plus transitions), the size measure used by
    /// the generator and the benchmarks.
    pub fn element_count(&self) -> usize {
        self.places.len() + self.transitions.len()
    }

    /// Checks referential integrity of the doubly-stored arcs and the
    /// disjointness of the two id sets. Returns every violation found; an
    /// empty vector means the net is well formed.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for id in self.places.keys() {
            if self.transitions.contains_key(id) {
                out.push(Violation::SharedId(*id));
            }
        }
        for place in self.places.values() {
            for t in &place.incoming {
                match self.transitions.get(t) {
                    None => out.push(Violation::DanglingReference {
                        from: place.id,
                        to: *t,
                    }),
                    Some(trans) if !trans.outputs.contains(&place.id) => {
                        out.push(Violation::MissingDual {
                            from: place.id,
                            to: *t,
                        })
                    }
                    Some(_) => {}
                }
            }
            for t in &place.outgoing {
                match self.transitions.get(t) {
                    None => out.push(Violation::DanglingReference {
                        from: place.id,
                        to: *t,
                    }),
                    Some(trans) if !trans.inputs.contains(&place.id) => {
                        out.push(Violation::MissingDual {
                            from: place.id,
                            to: *t,
                        })
                    }
                    Some(_) => {}
                }
            }
        }
        for trans in self.transitions.values() {
            for p in &trans.inputs {
                match self.places.get(p) {
                    None => out.push(Violation::DanglingReference {
                        from: trans.id,
                        to: *p,
                    }),
                    Some(place) if !place.outgoing.contains(&trans.id) => {
                        out.push(Violation::MissingDual {
                            from: trans.id,
                            to: *p,
                        })
                    }
                    Some(_) => {}
                }
            }
            for p in &trans.outputs {
                match self.places.get(p) {
                    None => out.push(Violation::DanglingReference {
                        from: trans.id,
                        to: *p,
                    }),
                    Some(place) if !place.incoming.contains(&trans.id) => {
                        out.push(Violation::MissingDual {
                            from: trans.id,
                            to: *p,
                        })
                    }
                    Some(_) => {}
                }
            }
        }
        out
    }

    /// All arcs as `(from, to)` pairs, sorted. Place-to-transition arcs come
    /// from each place's `outgoing` set, transition-to-place arcs from each
    /// transition's `outputs` set.
    pub fn arcs(&self) -> Vec<(NodeId, NodeId)> {
        let mut out = Vec::new();
        for place in self.places.values() {
            for t in &place.outgoing {
                out.push((place.id, *t));
            }
        }
        for trans in self.transitions.values() {
            for p in &trans.outputs {
                out.push((trans.id, *p));
            }
        }
        out.sort_unstable();
        out
    }
}

#[cfg(test)]
impl PetriNet {
    /// Test-only access for deliberately corrupting a net.
    pub(crate) fn raw_place_mut(&mut self, id: NodeId) -> &mut Place {
        self.places.get_mut(&id).expect("place exists")
    }

    pub(crate) fn raw_transition_mut(&mut self, id: NodeId) -> &mut Transition {
        self.transitions.get_mut(&id).expect("transition exists")
    }
}

#[cfg(test)]
impl Place {
    pub(crate) fn raw_incoming_mut(&mut self) -> &mut BTreeSet<NodeId> {
        &mut self.incoming
    }
}

#[cfg(test)]
impl Transition {
    pub(crate) fn raw_inputs_mut(&mut self) -> &mut BTreeSet<NodeId> {
        &mut self.inputs
    }
}
