//! Graphviz export.
//!
//! Nets render places as circles and transitions as filled black boxes, the
//! usual Petri-net look. Statecharts render Basic states as yellow ovals and
//! compound states as clusters: solid borders for AND, dashed for OR.
//! Hyperedges appear as small black boxes wired from their source leaves to
//! their target leaves. A traced reduction can be dumped as one graph per
//! snapshot with the net and the statechart side by side.

use std::fmt::Write as _;

use crate::engine::Snapshot;
use crate::net::PetriNet;
use crate::statechart::{StateKind, Statechart};

fn escape(text: &str) -> String {
    text.replace('\\', "\\\\").replace('"', "\\\"")
}

fn net_body(net: &PetriNet, out: &mut String) {
    for place in net.places() {
        let style = if place.is_synthetic() {
            ", style=dashed"
        } else {
            ""
        };
        writeln!(
            out,
            "  n{} [shape=circle, label=\"{}\"{}];",
            place.id().0,
            escape(place.name()),
            style
        )
        .unwrap();
    }
    for trans in net.transitions() {
        writeln!(
            out,
            "  n{} [shape=box, style=filled, fillcolor=black, fontcolor=white, height=0.2, label=\"{}\"];",
            trans.id().0,
            escape(trans.name())
        )
        .unwrap();
    }
    for (from, to) in net.arcs() {
        writeln!(out, "  n{} -> n{};", from.0, to.0).unwrap();
    }
}

/// Renders a net as a standalone digraph.
pub fn net_to_dot(net: &PetriNet) -> String {
    let mut out = String::from("digraph net {\n  rankdir=LR;\n");
    net_body(net, &mut out);
    out.push_str("}\n");
    out
}

fn statechart_state(
    sc: &Statechart,
    id: crate::statechart::StateId,
    indent: usize,
    out: &mut String,
) {
    let state = sc.state(id).expect("traversal stays inside the chart");
    let pad = "  ".repeat(indent);
    match state.kind() {
        StateKind::Basic => {
            writeln!(
                out,
                "{pad}s{} [shape=ellipse, style=filled, fillcolor=yellow, label=\"{}\"];",
                id.0,
                escape(state.name())
            )
            .unwrap();
        }
        StateKind::Or | StateKind::And => {
            let style = if state.kind() == StateKind::Or {
                "dashed"
            } else {
                "solid"
            };
            writeln!(out, "{pad}subgraph cluster_s{} {{", id.0).unwrap();
            writeln!(out, "{pad}  label=\"{}\";", escape(state.name())).unwrap();
            writeln!(out, "{pad}  style={style};").unwrap();
            for child in state.children() {
                statechart_state(sc, *child, indent + 1, out);
            }
            if state.children().is_empty() {
                // Graphviz drops empty clusters; pin them with a point.
                writeln!(out, "{pad}  s{}_anchor [shape=point, style=invis];", id.0).unwrap();
            }
            writeln!(out, "{pad}}}").unwrap();
        }
    }
}

fn statechart_body(sc: &Statechart, out: &mut String) {
    for root in sc.roots() {
        statechart_state(sc, root, 1, out);
    }
    for edge in sc.hyperedges() {
        writeln!(
            out,
            "  h{} [shape=box, style=filled, fillcolor=black, fontcolor=white, height=0.2, label=\"{}\"];",
            edge.id().0,
            escape(edge.name())
        )
        .unwrap();
        for source in edge.sources() {
            writeln!(out, "  s{} -> h{};", source.0, edge.id().0).unwrap();
        }
        for target in edge.targets() {
            writeln!(out, "  h{} -> s{};", edge.id().0, target.0).unwrap();
        }
    }
}

/// Renders a statechart (or partial forest) as a standalone digraph.
pub fn statechart_to_dot(sc: &Statechart) -> String {
    let mut out = String::from("digraph statechart {\n  compound=true;\n");
    statechart_body(sc, &mut out);
    out.push_str("}\n");
    out
}

/// Renders a full-trace snapshot: the net and the statechart of one step in
/// a single graph. Returns `None` for snapshots without model clones.
pub fn snapshot_to_dot(snapshot: &Snapshot) -> Option<String> {
    let models = snapshot.models.as_ref()?;
    let mut out = String::new();
    writeln!(out, "digraph step_{} {{", snapshot.step).unwrap();
    writeln!(out, "  compound=true;").unwrap();
    writeln!(
        out,
        "  label=\"step {}: {}\";",
        snapshot.step, snapshot.rule
    )
    .unwrap();
    writeln!(out, "  subgraph cluster_net {{").unwrap();
    writeln!(out, "  label=\"net\";").unwrap();
    net_body(&models.net, &mut out);
    writeln!(out, "  }}").unwrap();
    writeln!(out, "  subgraph cluster_chart {{").unwrap();
    writeln!(out, "  label=\"statechart\";").unwrap();
    statechart_body(&models.statechart, &mut out);
    writeln!(out, "  }}").unwrap();
    writeln!(out, "}}").unwrap();
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{ReductionPolicy, TraceMode, TransformState};

    fn chain2() -> PetriNet {
        let mut net = PetriNet::new();
        let p1 = net.add_place("p1");
        let t1 = net.add_transition("fire \"now\"");
        let p2 = net.add_place("p2");
        net.add_arc(p1, t1).unwrap();
        net.add_arc(t1, p2).unwrap();
        net
    }

    #[test]
    fn net_dot_mentions_every_node_and_arc() {
        let dot = net_to_dot(&chain2());
        assert!(dot.starts_with("digraph net {"));
        assert!(dot.contains("n0 [shape=circle"));
        assert!(dot.contains("n1 [shape=box"));
        assert!(dot.contains("fire \\\"now\\\""));
        assert!(dot.contains("n0 -> n1;"));
        assert!(dot.contains("n1 -> n2;"));
    }

    #[test]
    fn statechart_dot_uses_cluster_styles() {
        let outcome = TransformState::initialize(chain2())
            .unwrap()
            .reduce(ReductionPolicy::Deterministic);
        let dot = statechart_to_dot(outcome.statechart());
        // Top AND solid, merged OR dashed, leaves yellow.
        assert!(dot.contains("style=solid;"));
        assert!(dot.contains("style=dashed;"));
        assert!(dot.contains("fillcolor=yellow"));
        // The hyperedge connects the two leaves through its box.
        assert!(dot.contains("s0 -> h0;"));
        assert!(dot.contains("h0 -> s2;"));
    }

    #[test]
    fn snapshot_dot_needs_full_trace() {
        let summary = TransformState::initialize_traced(chain2(), TraceMode::Summary)
            .unwrap()
            .reduce(ReductionPolicy::Deterministic);
        assert!(snapshot_to_dot(&summary.trace()[0]).is_none());

        let full = TransformState::initialize_traced(chain2(), TraceMode::Full)
            .unwrap()
            .reduce(ReductionPolicy::Deterministic);
        let dot = snapshot_to_dot(&full.trace()[1]).unwrap();
        assert!(dot.starts_with("digraph step_1 {"));
        assert!(dot.contains("cluster_net"));
        assert!(dot.contains("cluster_chart"));
        assert!(dot.contains("step 1: or"));
    }
}
