//! Hierarchical statechart model.
//!
//! States form a containment forest: Basic states are leaves, OR and AND
//! states are compounds holding child states. Hyperedges connect sets of
//! Basic states to sets of Basic states and never move once created; the
//! reduction only rearranges the hierarchy above the leaves.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Identifier of a state within one [`Statechart`].
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default,
)]
#[serde(transparent)]
pub struct StateId(pub u32);

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s{}", self.0)
    }
}

/// Identifier of a hyperedge within one [`Statechart`].
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default,
)]
#[serde(transparent)]
pub struct EdgeId(pub u32);

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StateKind {
    Basic,
    Or,
    And,
}

impl fmt::Display for StateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateKind::Basic => write!(f, "basic"),
            StateKind::Or => write!(f, "or"),
            StateKind::And => write!(f, "and"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct State {
    id: StateId,
    name: String,
    kind: StateKind,
    parent: Option<StateId>,
    children: BTreeSet<StateId>,
}

impl State {
    pub fn id(&self) -> StateId {
        self.id
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> StateKind {
        self.kind
    }

    pub fn parent(&self) -> Option<StateId> {
        self.parent
    }

    pub fn children(&self) -> &BTreeSet<StateId> {
        &self.children
    }

    pub fn is_root(&self) -> bool {
        self.parent.is_none()
    }
}

/// A hyperedge between two sets of Basic states. Both endpoint sets are
/// fixed at creation time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperEdge {
    id: EdgeId,
    name: String,
    sources: BTreeSet<StateId>,
    targets: BTreeSet<StateId>,
}

impl HyperEdge {
    pub fn id(&self) -> EdgeId {
        self.id
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn sources(&self) -> &BTreeSet<StateId> {
        &self.sources
    }

    pub fn targets(&self) -> &BTreeSet<StateId> {
        &self.targets
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StatechartError {
    #[error("no state with id {0}")]
    MissingState(StateId),
    #[error("{0} is not a compound state")]
    NotACompound(StateId),
    #[error("{0} is not a basic state")]
    NotABasic(StateId),
    #[error("{0} already has a parent")]
    NotARoot(StateId),
    #[error("attaching {child} under {parent} would close a containment cycle")]
    ContainmentCycle { parent: StateId, child: StateId },
    #[error("{0} still has children")]
    NotEmpty(StateId),
    #[error("id {0} is already taken")]
    IdTaken(StateId),
}

/// One inconsistency found by [`Statechart::validate`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScViolation {
    #[error("{parent} lists child {child}, but the child's parent link disagrees")]
    ParentChildMismatch { parent: StateId, child: StateId },
    #[error("{from} refers to state {to}, which does not exist")]
    DanglingReference { from: StateId, to: StateId },
    #[error("basic state {0} has children")]
    BasicWithChildren(StateId),
    #[error("hyperedge {edge} endpoint {state} is not a basic state")]
    EdgeEndpointNotBasic { edge: EdgeId, state: StateId },
    #[error("top state {0} is missing or not a root")]
    BadTopState(StateId),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Statechart {
    states: BTreeMap<StateId, State>,
    hyperedges: BTreeMap<EdgeId, HyperEdge>,
    top_state: Option<StateId>,
    next_state_id: u32,
    next_edge_id: u32,
}

impl Statechart {
    pub fn new() -> Self {
        Self::default()
    }

    fn fresh_state_id(&mut self) -> StateId {
        let id = StateId(self.next_state_id);
        self.next_state_id += 1;
        id
    }

    fn insert_state(&mut self, name: String, kind: StateKind) -> StateId {
        let id = self.fresh_state_id();
        self.states.insert(
            id,
            State {
                id,
                name,
                kind,
                parent: None,
                children: BTreeSet::new(),
            },
        );
        id
    }

    /// Adds a Basic state as a new root.
    pub fn add_basic(&mut self, name: impl Into<String>) -> StateId {
        self.insert_state(name.into(), StateKind::Basic)
    }

    /// Adds an empty OR state as a new root.
    pub fn add_or(&mut self, name: impl Into<String>) -> StateId {
        self.insert_state(name.into(), StateKind::Or)
    }

    /// Adds an empty AND state as a new root.
    pub fn add_and(&mut self, name: impl Into<String>) -> StateId {
        self.insert_state(name.into(), StateKind::And)
    }

    pub(crate) fn insert_state_with_id(
        &mut self,
        id: StateId,
        name: impl Into<String>,
        kind: StateKind,
    ) -> Result<(), StatechartError> {
        if self.states.contains_key(&id) {
            return Err(StatechartError::IdTaken(id));
        }
        self.states.insert(
            id,
            State {
                id,
                name: name.into(),
                kind,
                parent: None,
                children: BTreeSet::new(),
            },
        );
        self.next_state_id = self.next_state_id.max(id.0 + 1);
        Ok(())
    }

    /// The id the next created state will get. Useful for naming states after
    /// their own id.
    pub fn next_state_id(&self) -> StateId {
        StateId(self.next_state_id)
    }

    /// Puts `child` (currently a root) under the compound state `parent`.
    pub fn attach(&mut self, parent: StateId, child: StateId) -> Result<(), StatechartError> {
        let parent_state = self
            .states
            .get(&parent)
            .ok_or(StatechartError::MissingState(parent))?;
        if parent_state.kind == StateKind::Basic {
            return Err(StatechartError::NotACompound(parent));
        }
        let child_state = self
            .states
            .get(&child)
            .ok_or(StatechartError::MissingState(child))?;
        if child_state.parent.is_some() {
            return Err(StatechartError::NotARoot(child));
        }
        if parent == child {
            return Err(StatechartError::ContainmentCycle { parent, child });
        }
        // Since `child` is a root, a cycle can only close if `parent` already
        // sits somewhere inside `child`'s subtree.
        let mut cursor = parent;
        while let Some(next) = self.states[&cursor].parent {
            if next == child {
                return Err(StatechartError::ContainmentCycle { parent, child });
            }
            cursor = next;
        }
        if self.states[&parent].children.contains(&child) {
            // Unreachable through the public API (a listed child has a
            // parent), kept as a defensive answer.
            return Err(StatechartError::NotARoot(child));
        }
        self.states
            .get_mut(&parent)
            .expect("checked")
            .children
            .insert(child);
        self.states.get_mut(&child).expect("checked").parent = Some(parent);
        Ok(())
    }

    /// Detaches all children of a compound state and returns them, each now a
    /// root again, in ascending id order.
    pub fn detach_children(&mut self, id: StateId) -> Result<Vec<StateId>, StatechartError> {
        let state = self
            .states
            .get_mut(&id)
            .ok_or(StatechartError::MissingState(id))?;
        if state.kind == StateKind::Basic {
            return Err(StatechartError::NotACompound(id));
        }
        let children: Vec<StateId> = std::mem::take(&mut state.children).into_iter().collect();
        for child in &children {
            self.states.get_mut(child).expect("child exists").parent = None;
        }
        Ok(children)
    }

    /// Removes a compound state that has no children. If it was somebody's
    /// child, the parent's child set is updated.
    pub fn remove_empty_compound(&mut self, id: StateId) -> Result<(), StatechartError> {
        let state = self
            .states
            .get(&id)
            .ok_or(StatechartError::MissingState(id))?;
        if state.kind == StateKind::Basic {
            return Err(StatechartError::NotACompound(id));
        }
        if !state.children.is_empty() {
            return Err(StatechartError::NotEmpty(id));
        }
        let parent = state.parent;
        self.states.remove(&id);
        if let Some(parent) = parent {
            self.states
                .get_mut(&parent)
                .expect("parent exists")
                .children
                .remove(&id);
        }
        if self.top_state == Some(id) {
            self.top_state = None;
        }
        Ok(())
    }

    /// Adds a hyperedge. Every endpoint must be an existing Basic state.
    pub fn add_hyperedge(
        &mut self,
        name: impl Into<String>,
        sources: impl IntoIterator<Item = StateId>,
        targets: impl IntoIterator<Item = StateId>,
    ) -> Result<EdgeId, StatechartError> {
        let sources: BTreeSet<StateId> = sources.into_iter().collect();
        let targets: BTreeSet<StateId> = targets.into_iter().collect();
        for endpoint in sources.iter().chain(targets.iter()) {
            let state = self
                .states
                .get(endpoint)
                .ok_or(StatechartError::MissingState(*endpoint))?;
            if state.kind != StateKind::Basic {
                return Err(StatechartError::NotABasic(*endpoint));
            }
        }
        let id = EdgeId(self.next_edge_id);
        self.next_edge_id += 1;
        self.hyperedges.insert(
            id,
            HyperEdge {
                id,
                name: name.into(),
                sources,
                targets,
            },
        );
        Ok(id)
    }

    pub(crate) fn insert_hyperedge_with_id(
        &mut self,
        id: EdgeId,
        name: impl Into<String>,
        sources: BTreeSet<StateId>,
        targets: BTreeSet<StateId>,
    ) -> Result<(), StatechartError> {
        if self.hyperedges.contains_key(&id) {
            return Err(StatechartError::IdTaken(StateId(id.0)));
        }
        for endpoint in sources.iter().chain(targets.iter()) {
            let state = self
                .states
                .get(endpoint)
                .ok_or(StatechartError::MissingState(*endpoint))?;
            if state.kind != StateKind::Basic {
                return Err(StatechartError::NotABasic(*endpoint));
            }
        }
        self.hyperedges.insert(
            id,
            HyperEdge {
                id,
                name: name.into(),
                sources,
                targets,
            },
        );
        self.next_edge_id = self.next_edge_id.max(id.0 + 1);
        Ok(())
    }

    /// Replaces a state's name.
    pub fn rename_state(
        &mut self,
        id: StateId,
        name: impl Into<String>,
    ) -> Result<(), StatechartError> {
        let state = self
            .states
            .get_mut(&id)
            .ok_or(StatechartError::MissingState(id))?;
        state.name = name.into();
        Ok(())
    }

    /// Marks a root state as the top of the hierarchy.
    pub fn set_top_state(&mut self, id: StateId) -> Result<(), StatechartError> {
        let state = self
            .states
            .get(&id)
            .ok_or(StatechartError::MissingState(id))?;
        if !state.is_root() {
            return Err(StatechartError::NotARoot(id));
        }
        self.top_state = Some(id);
        Ok(())
    }

    pub fn top_state(&self) -> Option<StateId> {
        self.top_state
    }

    pub fn state(&self, id: StateId) -> Option<&State> {
        self.states.get(&id)
    }

    pub fn hyperedge(&self, id: EdgeId) -> Option<&HyperEdge> {
        self.hyperedges.get(&id)
    }

    /// States in ascending id order.
    pub fn states(&self) -> impl Iterator<Item = &State> {
        self.states.values()
    }

    /// Hyperedges in ascending id order.
    pub fn hyperedges(&self) -> impl Iterator<Item = &HyperEdge> {
        self.hyperedges.values()
    }

    /// Ids of all parentless states, ascending.
    pub fn roots(&self) -> Vec<StateId> {
        self.states
            .values()
            .filter(|s| s.is_root())
            .map(|s| s.id)
            .collect()
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn hyperedge_count(&self) -> usize {
        self.hyperedges.len()
    }

    pub fn basic_count(&self) -> usize {
        self.states
            .values()
            .filter(|s| s.kind == StateKind::Basic)
            .count()
    }

    /// Sorted multiset of Basic state names. The reduction never renames or
    /// removes leaves, so this is a cheap conservation check.
    pub fn basic_names(&self) -> Vec<String> {
        let mut names: Vec<String> = self
            .states
            .values()
            .filter(|s| s.kind == StateKind::Basic)
            .map(|s| s.name.clone())
            .collect();
        names.sort();
        names
    }

    /// Checks parent/child consistency, leaf discipline, hyperedge endpoints
    /// and the top-state mark. Empty result means well formed.
    pub fn validate(&self) -> Vec<ScViolation> {
        let mut out = Vec::new();
        for state in self.states.values() {
            if state.kind == StateKind::Basic && !state.children.is_empty() {
                out.push(ScViolation::BasicWithChildren(state.id));
            }
            for child in &state.children {
                match self.states.get(child) {
                    None => out.push(ScViolation::DanglingReference {
                        from: state.id,
                        to: *child,
                    }),
                    Some(c) if c.parent != Some(state.id) => {
                        out.push(ScViolation::ParentChildMismatch {
                            parent: state.id,
                            child: *child,
                        })
                    }
                    Some(_) => {}
                }
            }
            if let Some(parent) = state.parent {
                match self.states.get(&parent) {
                    None => out.push(ScViolation::DanglingReference {
                        from: state.id,
                        to: parent,
                    }),
                    Some(p) if !p.children.contains(&state.id) => {
                        out.push(ScViolation::ParentChildMismatch {
                            parent,
                            child: state.id,
                        })
                    }
                    Some(_) => {}
                }
            }
        }
        for edge in self.hyperedges.values() {
            for endpoint in edge.sources.iter().chain(edge.targets.iter()) {
                let is_basic = self
                    .states
                    .get(endpoint)
                    .is_some_and(|s| s.kind == StateKind::Basic);
                if !is_basic {
                    out.push(ScViolation::EdgeEndpointNotBasic {
                        edge: edge.id,
                        state: *endpoint,
                    });
                }
            }
        }
        if let Some(top) = self.top_state {
            if self.states.get(&top).is_none_or(|s| !s.is_root()) {
                out.push(ScViolation::BadTopState(top));
            }
        }
        out
    }
}

#[cfg(test)]
impl Statechart {
    /// Test-only: wires a parent/child link without any of the usual guards,
    /// so tests can build malformed hierarchies.
    pub(crate) fn force_link(&mut self, parent: StateId, child: StateId) {
        self.states.get_mut(&parent).unwrap().children.insert(child);
        self.states.get_mut(&child).unwrap().parent = Some(parent);
    }
}
