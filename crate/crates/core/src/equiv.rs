//! The place-to-OR correspondence maintained during a reduction.
//!
//! Every live place in the shrinking net is paired with exactly one OR state
//! in the growing statechart, and no OR state is claimed by two places. The
//! map enforces injectivity on insert, so a bookkeeping slip in the engine
//! surfaces immediately instead of corrupting the output.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::net::NodeId;
use crate::statechart::StateId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EquivError {
    #[error("place {0} is already mapped")]
    PlaceAlreadyMapped(NodeId),
    #[error("state {0} is already the image of another place")]
    StateAlreadyClaimed(StateId),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EquivMap {
    forward: BTreeMap<NodeId, StateId>,
    reverse: BTreeMap<StateId, NodeId>,
}

impl EquivMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// Pairs a place with an OR state. Both sides must be currently unmapped.
    pub fn insert(&mut self, place: NodeId, state: StateId) -> Result<(), EquivError> {
        if self.forward.contains_key(&place) {
            return Err(EquivError::PlaceAlreadyMapped(place));
        }
        if self.reverse.contains_key(&state) {
            return Err(EquivError::StateAlreadyClaimed(state));
        }
        self.forward.insert(place, state);
        self.reverse.insert(state, place);
        Ok(())
    }

    /// Drops the pairing for `place`, returning the state it pointed to.
    pub fn remove(&mut self, place: NodeId) -> Option<StateId> {
        let state = self.forward.remove(&place)?;
        self.reverse.remove(&state);
        Some(state)
    }

    pub fn get(&self, place: NodeId) -> Option<StateId> {
        self.forward.get(&place).copied()
    }

    pub fn place_of(&self, state: StateId) -> Option<NodeId> {
        self.reverse.get(&state).copied()
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    /// Pairs in ascending place-id order.
    pub fn iter(&self) -> impl Iterator<Item = (NodeId, StateId)> + '_ {
        self.forward.iter().map(|(p, s)| (*p, *s))
    }
}
