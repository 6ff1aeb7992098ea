//! The reduction engine.
//!
//! A reduction starts from a net, builds the seed statechart (one Basic state
//! wrapped in one OR state per place, one hyperedge per transition), and then
//! repeatedly rewrites the net while growing the statechart hierarchy:
//!
//! * the AND rule collapses a group of places that share identical incoming
//!   and outgoing transition sets into one place, recording the group as an
//!   AND state over their OR images;
//! * the OR rule removes a transition with exactly one input and one output
//!   place, fusing the two places into one and pouring both OR images into a
//!   single OR state. The rule is skipped when some transition uses both
//!   places on the same side, since fusing them would equate states that can
//!   be active together.
//!
//! Scheduling uses a worklist of transition ids. Applying a rule only changes
//! match conditions in the immediate neighborhood of the merged place, so the
//! neighbors are re-enqueued after each step; a final sweep over all
//! transitions backstops the fixpoint before the engine reports a verdict.
//! The net is consumed in the process: on success a single place remains and
//! the statechart gains its top AND state, otherwise the residual net and the
//! partial forest are handed back for inspection.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::equiv::EquivMap;
use crate::net::{NodeId, PetriNet};
use crate::statechart::{StateKind, Statechart};

/// How `reduce` picks the next worklist entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReductionPolicy {
    /// Always the smallest transition id.
    Deterministic,
    /// A uniformly random entry, driven by a seeded generator. Two runs with
    /// the same seed take identical steps.
    Seeded(u64),
}

/// How much history `reduce` keeps while it runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TraceMode {
    /// No snapshots at all.
    #[default]
    Off,
    /// One lightweight entry per applied rule (rule kind and element counts).
    Summary,
    /// Full model clones after every rule. Expensive; meant for small nets
    /// and diagram export.
    Full,
}

/// Which rule produced a snapshot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AppliedRule {
    /// The initial statechart seeding, before any rewriting.
    Init,
    /// AND rule matched on a transition's input places.
    AndInputs,
    /// AND rule matched on a transition's output places.
    AndOutputs,
    Or,
}

impl std::fmt::Display for AppliedRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AppliedRule::Init => write!(f, "init"),
            AppliedRule::AndInputs => write!(f, "and_inputs"),
            AppliedRule::AndOutputs => write!(f, "and_outputs"),
            AppliedRule::Or => write!(f, "or"),
        }
    }
}

/// Cloned models captured by [`TraceMode::Full`].
#[derive(Debug, Clone)]
pub struct SnapshotModels {
    pub net: PetriNet,
    pub statechart: Statechart,
}

/// One step of a traced reduction.
#[derive(Debug, Clone)]
pub struct Snapshot {
    pub step: usize,
    pub rule: AppliedRule,
    pub place_count: usize,
    pub transition_count: usize,
    /// Present only under [`TraceMode::Full`].
    pub models: Option<Box<SnapshotModels>>,
}

/// Which side of the transition an AND match collapses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AndSide {
    Inputs,
    Outputs,
}

/// A verified AND-rule opportunity: all places in `group` (the full input or
/// output set of `transition`) have pairwise identical surroundings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AndMatch {
    pub transition: NodeId,
    pub side: AndSide,
    pub group: BTreeSet<NodeId>,
}

/// A verified OR-rule opportunity: `transition` connects exactly `source` to
/// `target` and no other transition uses the two places on one side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrMatch {
    pub transition: NodeId,
    pub source: NodeId,
    pub target: NodeId,
}

/// Rule-application totals for one reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Applications {
    pub and_rules: usize,
    pub or_rules: usize,
}

impl Applications {
    pub fn total(&self) -> usize {
        self.and_rules + self.or_rules
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("input net is inconsistent ({count} violations; first: {first})")]
    InvalidInput { count: usize, first: String },
    #[error("input net has no places")]
    EmptyNet,
    #[error("no transition with id {0}")]
    MissingTransition(NodeId),
    #[error("the supplied match no longer applies")]
    StaleMatch,
    #[error("net is not fully reduced: {remaining} places remain")]
    NotReduced { remaining: usize },
}

/// Result of running a reduction to its fixpoint.
#[derive(Debug, Clone)]
pub enum ReductionOutcome {
    /// The net collapsed to a single place. The statechart is complete and
    /// carries a top AND state.
    Success {
        statechart: Statechart,
        applications: Applications,
        trace: Vec<Snapshot>,
    },
    /// No rule applies anywhere but more than one place remains. The residual
    /// net, the partial statechart forest and the surviving place-to-OR map
    /// are returned for diagnosis.
    Stuck {
        net: PetriNet,
        forest: Statechart,
        equiv: EquivMap,
        applications: Applications,
        trace: Vec<Snapshot>,
    },
}

impl ReductionOutcome {
    pub fn is_success(&self) -> bool {
        matches!(self, ReductionOutcome::Success { .. })
    }

    pub fn applications(&self) -> Applications {
        match self {
            ReductionOutcome::Success { applications, .. } => *applications,
            ReductionOutcome::Stuck { applications, .. } => *applications,
        }
    }

    pub fn trace(&self) -> &[Snapshot] {
        match self {
            ReductionOutcome::Success { trace, .. } => trace,
            ReductionOutcome::Stuck { trace, .. } => trace,
        }
    }

    /// The statechart in either verdict: the finished hierarchy on success,
    /// the partial forest when stuck.
    pub fn statechart(&self) -> &Statechart {
        match self {
            ReductionOutcome::Success { statechart, .. } => statechart,
            ReductionOutcome::Stuck { forest, .. } => forest,
        }
    }
}

/// An in-progress reduction: the shrinking net, the growing statechart, the
/// place-to-OR map and the scheduling worklist.
#[derive(Debug, Clone)]
pub struct TransformState {
    net: PetriNet,
    sc: Statechart,
    equiv: EquivMap,
    worklist: BTreeSet<NodeId>,
    trace_mode: TraceMode,
    trace: Vec<Snapshot>,
    counts: Applications,
    and_seq: u32,
    or_seq: u32,
    place_seq: u32,
}

impl TransformState {
    /// Builds the seed statechart for `net` without tracing.
    pub fn initialize(net: PetriNet) -> Result<Self, EngineError> {
        Self::initialize_traced(net, TraceMode::Off)
    }

    /// Builds the seed statechart: per place a Basic state inside an OR state
    /// (paired in the equivalence map), per transition a hyperedge from the
    /// Basic images of its input places to those of its output places. All
    /// transitions start on the worklist.
    pub fn initialize_traced(net: PetriNet, trace_mode: TraceMode) -> Result<Self, EngineError> {
        let violations = net.validate();
        if let Some(first) = violations.first() {
            return Err(EngineError::InvalidInput {
                count: violations.len(),
                first: first.to_string(),
            });
        }
        if net.place_count() == 0 {
            return Err(EngineError::EmptyNet);
        }
        let mut sc = Statechart::new();
        let mut equiv = EquivMap::new();
        let mut basic_of = std::collections::BTreeMap::new();
        let mut or_seq = 0u32;
        for place in net.places() {
            let basic = sc.add_basic(place.name());
            let or = sc.add_or(format!("OR_{or_seq}"));
            or_seq += 1;
            sc.attach(or, basic).expect("fresh basic is a root");
            equiv
                .insert(place.id(), or)
                .expect("one entry per place, one place per state");
            basic_of.insert(place.id(), basic);
        }
        for trans in net.transitions() {
            let sources = trans.inputs().iter().map(|p| basic_of[p]);
            let targets = trans.outputs().iter().map(|p| basic_of[p]);
            sc.add_hyperedge(trans.name(), sources, targets)
                .expect("endpoints are the basics just created");
        }
        let worklist = net.transition_ids().collect();
        let mut state = TransformState {
            net,
            sc,
            equiv,
            worklist,
            trace_mode,
            trace: Vec::new(),
            counts: Applications::default(),
            and_seq: 0,
            or_seq,
            place_seq: 0,
        };
        state.record(AppliedRule::Init);
        Ok(state)
    }

    pub fn net(&self) -> &PetriNet {
        &self.net
    }

    pub fn statechart(&self) -> &Statechart {
        &self.sc
    }

    pub fn equiv(&self) -> &EquivMap {
        &self.equiv
    }

    pub fn applications(&self) -> Applications {
        self.counts
    }

    pub fn trace(&self) -> &[Snapshot] {
        &self.trace
    }

    /// Pending worklist entries, ascending. Entries may refer to transitions
    /// that have since been removed; those are skipped on pop.
    pub fn worklist(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.worklist.iter().copied()
    }

    /// Tests whether the AND rule applies at transition `t`, preferring the
    /// input side. The rule wants a side with at least two places whose
    /// incoming and outgoing transition sets are pairwise identical.
    pub fn match_and(&self, t: NodeId) -> Result<Option<AndMatch>, EngineError> {
        let trans = self
            .net
            .transition(t)
            .ok_or(EngineError::MissingTransition(t))?;
        for (side, group) in [
            (AndSide::Inputs, trans.inputs()),
            (AndSide::Outputs, trans.outputs()),
        ] {
            if group.len() > 1 && self.uniform_surroundings(group) {
                return Ok(Some(AndMatch {
                    transition: t,
                    side,
                    group: group.clone(),
                }));
            }
        }
        Ok(None)
    }

    fn uniform_surroundings(&self, group: &BTreeSet<NodeId>) -> bool {
        let mut members = group.iter();
        let first = self
            .net
            .place(*members.next().expect("group is nonempty"))
            .expect("group members are live places");
        members.all(|p| {
            let place = self.net.place(*p).expect("group members are live places");
            place.incoming() == first.incoming() && place.outgoing() == first.outgoing()
        })
    }

    fn and_match_is_fresh(&self, m: &AndMatch) -> bool {
        let Some(trans) = self.net.transition(m.transition) else {
            return false;
        };
        let group = match m.side {
            AndSide::Inputs => trans.inputs(),
            AndSide::Outputs => trans.outputs(),
        };
        group == &m.group && group.len() > 1 && self.uniform_surroundings(group)
    }

    /// Collapses an AND match: the group's OR images move under a new AND
    /// state (itself wrapped in a new OR), and all group places except the
    /// smallest id are deleted from the net. The survivor keeps its arcs,
    /// which are identical to everyone else's by the match condition.
    pub fn apply_and(&mut self, m: &AndMatch) -> Result<(), EngineError> {
        if !self.and_match_is_fresh(m) {
            return Err(EngineError::StaleMatch);
        }
        let survivor = *m.group.first().expect("group is nonempty");

        let and_state = self.sc.add_and(format!("AND_{}", self.and_seq));
        self.and_seq += 1;
        for place in &m.group {
            let or = self
                .equiv
                .remove(*place)
                .expect("every live place is mapped");
            self.sc.attach(and_state, or).expect("or images are roots");
        }
        let wrapper = self.sc.add_or(format!("OR_{}", self.or_seq));
        self.or_seq += 1;
        self.sc
            .attach(wrapper, and_state)
            .expect("fresh and state is a root");

        for place in &m.group {
            if *place != survivor {
                self.net
                    .remove_place(*place)
                    .expect("group members are live");
            }
        }
        self.equiv
            .insert(survivor, wrapper)
            .expect("survivor was unmapped above, wrapper is fresh");

        let survivor_place = self.net.place(survivor).expect("survivor remains");
        let neighbors: Vec<NodeId> = survivor_place
            .incoming()
            .iter()
            .chain(survivor_place.outgoing())
            .copied()
            .collect();
        self.worklist.extend(neighbors);

        self.counts.and_rules += 1;
        self.record(match m.side {
            AndSide::Inputs => AppliedRule::AndInputs,
            AndSide::Outputs => AppliedRule::AndOutputs,
        });
        #[cfg(debug_assertions)]
        self.debug_check_place(survivor);
        Ok(())
    }

    /// Tests whether the OR rule applies at transition `t`.
    pub fn match_or(&self, t: NodeId) -> Result<Option<OrMatch>, EngineError> {
        let trans = self
            .net
            .transition(t)
            .ok_or(EngineError::MissingTransition(t))?;
        if trans.inputs().len() != 1 || trans.outputs().len() != 1 {
            return Ok(None);
        }
        let source = *trans.inputs().first().expect("len checked");
        let target = *trans.outputs().first().expect("len checked");
        if self.pair_is_blocked(source, target) {
            return Ok(None);
        }
        Ok(Some(OrMatch {
            transition: t,
            source,
            target,
        }))
    }

    /// True if any transition uses both places as inputs or both as outputs.
    /// Such a transition can mark both places at once, so fusing them would
    /// be unsound. A self-loop pair (`source == target`) is blocked by the
    /// looping transition itself.
    fn pair_is_blocked(&self, source: NodeId, target: NodeId) -> bool {
        if source == target {
            return true;
        }
        // Any blocker is adjacent to `source`, so scanning its two transition
        // sets is enough.
        let place = self.net.place(source).expect("source is live");
        for t in place.outgoing().iter().chain(place.incoming()) {
            let trans = self.net.transition(*t).expect("arc endpoints are live");
            if (trans.inputs().contains(&source) && trans.inputs().contains(&target))
                || (trans.outputs().contains(&source) && trans.outputs().contains(&target))
            {
                return true;
            }
        }
        false
    }

    fn or_match_is_fresh(&self, m: &OrMatch) -> bool {
        matches!(self.match_or(m.transition), Ok(Some(ref current)) if current == m)
    }

    /// Collapses an OR match: the transition and both places leave the net,
    /// replaced by one synthetic place inheriting the union of their arcs
    /// (minus the removed transition). Both OR images are emptied into a new
    /// OR state. The merged place may end up in self-loops; that is expected.
    pub fn apply_or(&mut self, m: &OrMatch) -> Result<(), EngineError> {
        if !self.or_match_is_fresh(m) {
            return Err(EngineError::StaleMatch);
        }
        let OrMatch {
            transition,
            source,
            target,
        } = *m;

        let src = self.net.place(source).expect("match is fresh");
        let tgt = self.net.place(target).expect("match is fresh");
        let mut incoming: BTreeSet<NodeId> =
            src.incoming().union(tgt.incoming()).copied().collect();
        let mut outgoing: BTreeSet<NodeId> =
            src.outgoing().union(tgt.outgoing()).copied().collect();
        incoming.remove(&transition);
        outgoing.remove(&transition);

        let source_or = self
            .equiv
            .remove(source)
            .expect("every live place is mapped");
        let target_or = self
            .equiv
            .remove(target)
            .expect("every live place is mapped");
        // Pour the smaller child set into the larger image and relabel it as
        // the merged state; absorbing small into large keeps the total work
        // over a whole reduction near-linear, where building a fresh state
        // per merge would re-move ever-growing child sets.
        let source_size = self.sc.state(source_or).expect("or image").children().len();
        let target_size = self.sc.state(target_or).expect("or image").children().len();
        let (merged, absorbed) = if source_size >= target_size {
            (source_or, target_or)
        } else {
            (target_or, source_or)
        };
        for child in self.sc.detach_children(absorbed).expect("or image") {
            self.sc
                .attach(merged, child)
                .expect("detached child is a root");
        }
        self.sc
            .remove_empty_compound(absorbed)
            .expect("emptied above");
        self.sc
            .rename_state(merged, format!("OR_{}", self.or_seq))
            .expect("merged image is live");
        self.or_seq += 1;

        self.net
            .remove_transition(transition)
            .expect("match is fresh");
        self.net.remove_place(source).expect("match is fresh");
        self.net.remove_place(target).expect("match is fresh");
        let merged_place = self
            .net
            .add_synthetic_place(format!("p_{}", self.place_seq));
        self.place_seq += 1;
        for t in &incoming {
            self.net
                .add_arc(*t, merged_place)
                .expect("fresh place, live transition");
        }
        for t in &outgoing {
            self.net
                .add_arc(merged_place, *t)
                .expect("fresh place, live transition");
        }
        self.equiv
            .insert(merged_place, merged)
            .expect("both sides are fresh");

        self.worklist.extend(incoming.iter().copied());
        self.worklist.extend(outgoing.iter().copied());

        self.counts.or_rules += 1;
        self.record(AppliedRule::Or);
        #[cfg(debug_assertions)]
        self.debug_check_place(merged_place);
        Ok(())
    }

    /// Runs rules until none applies anywhere, then reports the verdict.
    pub fn reduce(mut self, policy: ReductionPolicy) -> ReductionOutcome {
        let mut rng = match policy {
            ReductionPolicy::Deterministic => None,
            ReductionPolicy::Seeded(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        };
        loop {
            while let Some(t) = self.pop_worklist(&mut rng) {
                if !self.net.has_transition(t) {
                    continue;
                }
                self.try_rules_at(t);
            }
            // Neighbor re-enqueueing should have found everything; a last
            // sweep over all transitions makes the fixpoint airtight.
            if !self.sweep_all() {
                break;
            }
        }
        self.into_outcome()
    }

    fn pop_worklist(&mut self, rng: &mut Option<ChaCha8Rng>) -> Option<NodeId> {
        match rng {
            None => self.worklist.pop_first(),
            Some(rng) => {
                if self.worklist.is_empty() {
                    return None;
                }
                let index = rng.random_range(0..self.worklist.len());
                let t = *self.worklist.iter().nth(index).expect("index in range");
                self.worklist.remove(&t);
                Some(t)
            }
        }
    }

    /// Tries the AND rule, then the OR rule, at `t`. Returns whether a rule
    /// fired. `t` must be a live transition.
    fn try_rules_at(&mut self, t: NodeId) -> bool {
        if let Some(m) = self.match_and(t).expect("t is live") {
            self.apply_and(&m).expect("match is fresh");
            return true;
        }
        if let Some(m) = self.match_or(t).expect("t is live") {
            self.apply_or(&m).expect("match is fresh");
            return true;
        }
        false
    }

    fn sweep_all(&mut self) -> bool {
        let ids: Vec<NodeId> = self.net.transition_ids().collect();
        for t in ids {
            if self.try_rules_at(t) {
                return true;
            }
        }
        false
    }

    fn into_outcome(mut self) -> ReductionOutcome {
        if self.net.place_count() == 1 {
            self.crown_top();
            ReductionOutcome::Success {
                statechart: self.sc,
                applications: self.counts,
                trace: self.trace,
            }
        } else {
            ReductionOutcome::Stuck {
                net: self.net,
                forest: self.sc,
                equiv: self.equiv,
                applications: self.counts,
                trace: self.trace,
            }
        }
    }

    /// Wraps the OR image of the single remaining place in the top AND state.
    fn crown_top(&mut self) {
        let last = self.net.place_ids().next().expect("exactly one place");
        let or = self.equiv.get(last).expect("every live place is mapped");
        let top = self.sc.add_and(format!("AND_{}", self.and_seq));
        self.and_seq += 1;
        self.sc.attach(top, or).expect("or image is a root");
        self.sc.set_top_state(top).expect("fresh state is a root");
    }

    /// Finishes a reduction driven manually through `apply_and`/`apply_or`.
    /// Fails unless exactly one place remains.
    pub fn finalize_success(mut self) -> Result<Statechart, EngineError> {
        let remaining = self.net.place_count();
        if remaining != 1 {
            return Err(EngineError::NotReduced { remaining });
        }
        self.crown_top();
        Ok(self.sc)
    }

    fn record(&mut self, rule: AppliedRule) {
        let models = match self.trace_mode {
            TraceMode::Off => return,
            TraceMode::Summary => None,
            TraceMode::Full => Some(Box::new(SnapshotModels {
                net: self.net.clone(),
                statechart: self.sc.clone(),
            })),
        };
        self.trace.push(Snapshot {
            step: self.trace.len(),
            rule,
            place_count: self.net.place_count(),
            transition_count: self.net.transition_count(),
            models,
        });
    }

    #[cfg(debug_assertions)]
    fn debug_check_place(&self, place: NodeId) {
        let or = self.equiv.get(place).expect("place just gained a mapping");
        let state = self.sc.state(or).expect("mapped state exists");
        debug_assert_eq!(state.kind(), StateKind::Or);
        debug_assert!(state.is_root());
    }

    /// Exhaustive consistency check, intended for tests and debugging on
    /// small models: both models validate, the equivalence map is a bijection
    /// between live places and root OR states, and hyperedges only touch
    /// Basic states (already part of statechart validation).
    pub fn check_invariants(&self) -> Vec<String> {
        let mut out = Vec::new();
        for v in self.net.validate() {
            out.push(format!("net: {v}"));
        }
        for v in self.sc.validate() {
            out.push(format!("statechart: {v}"));
        }
        for place in self.net.place_ids() {
            if self.equiv.get(place).is_none() {
                out.push(format!("equiv: live place {place} is unmapped"));
            }
        }
        for (place, state_id) in self.equiv.iter() {
            if !self.net.has_place(place) {
                out.push(format!("equiv: mapped place {place} is not in the net"));
            }
            match self.sc.state(state_id) {
                None => out.push(format!("equiv: image {state_id} does not exist")),
                Some(state) => {
                    if state.kind() != StateKind::Or {
                        out.push(format!("equiv: image {state_id} is not an OR state"));
                    }
                    if !state.is_root() {
                        out.push(format!("equiv: image {state_id} is not a root"));
                    }
                }
            }
        }
        if self.equiv.len() != self.net.place_count() {
            out.push(format!(
                "equiv: {} entries for {} places",
                self.equiv.len(),
                self.net.place_count()
            ));
        }
        out
    }
}
