//! Bundled nets with known reduction behavior.
//!
//! [`demo_net`] is a small showcase whose deterministic reduction walks
//! through every rule flavor: one AND collapse of a seven-way parallel
//! section followed by four OR merges, ending in a single place with
//! leftover self-loops. The regression suite covers the interesting corners
//! on purpose-built nets of at most a dozen elements: choice diamonds,
//! nested parallelism, loops, and the various ways a net can refuse to
//! reduce. Verdicts are fixed by construction and locked in by tests.

use crate::net::PetriNet;

/// An 11-place, 10-transition net whose deterministic reduction applies
/// exactly one AND rule and four OR rules.
///
/// Shape: `p1` forks through `t2` into seven parallel places `p2..p8`,
/// rejoined by `t1` into `p9`; `p9` reaches `p10` through two competing
/// transitions `t3`/`t4` (one survives as a self-loop); `p10` reaches `p11`
/// through six competing transitions `t5..t10`.
pub fn demo_net() -> PetriNet {
    let mut net = PetriNet::new();
    // Transitions first: the worklist pops ascending ids, so the join comes
    // up first and the AND collapse is the opening move.
    let join = net.add_transition("t1");
    let fork = net.add_transition("t2");
    let go_a = net.add_transition("t3");
    let go_b = net.add_transition("t4");
    let finish: Vec<_> = (5..=10)
        .map(|i| net.add_transition(format!("t{i}")))
        .collect();

    let start = net.add_place("p1");
    let workers: Vec<_> = (2..=8).map(|i| net.add_place(format!("p{i}"))).collect();
    let collect = net.add_place("p9");
    let review = net.add_place("p10");
    let done = net.add_place("p11");

    net.add_arc(start, fork).unwrap();
    for w in &workers {
        net.add_arc(fork, *w).unwrap();
        net.add_arc(*w, join).unwrap();
    }
    net.add_arc(join, collect).unwrap();
    for t in [go_a, go_b] {
        net.add_arc(collect, t).unwrap();
        net.add_arc(t, review).unwrap();
    }
    for t in &finish {
        net.add_arc(review, *t).unwrap();
        net.add_arc(*t, done).unwrap();
    }
    net
}

/// A named regression input with its expected verdict.
pub struct RegressionNet {
    pub name: &'static str,
    /// True when reduction must reach a single place.
    pub reducible: bool,
    pub build: fn() -> PetriNet,
}

/// The fixed regression inputs, smallest-to-largest themes: plain structure,
/// choices, nesting, loops, then the blocked families.
pub fn regression_suite() -> Vec<RegressionNet> {
    vec![
        RegressionNet {
            name: "fork_join_sequences",
            reducible: true,
            build: fork_join_sequences,
        },
        RegressionNet {
            name: "claim_pipeline",
            reducible: true,
            build: claim_pipeline,
        },
        RegressionNet {
            name: "nested_parallel",
            reducible: true,
            build: nested_parallel,
        },
        RegressionNet {
            name: "hub_double_loop",
            reducible: true,
            build: hub_double_loop,
        },
        RegressionNet {
            name: "parallel_three_with_loop",
            reducible: true,
            build: parallel_three_with_loop,
        },
        RegressionNet {
            name: "double_parallel",
            reducible: true,
            build: double_parallel,
        },
        RegressionNet {
            name: "pipelines_blocked_join",
            reducible: false,
            build: pipelines_blocked_join,
        },
        RegressionNet {
            name: "blocked_pair",
            reducible: false,
            build: blocked_pair,
        },
        RegressionNet {
            name: "blocked_pair_dual",
            reducible: false,
            build: blocked_pair_dual,
        },
        RegressionNet {
            name: "fork_with_shortcut",
            reducible: false,
            build: fork_with_shortcut,
        },
        RegressionNet {
            name: "chain_blocked_kernel",
            reducible: false,
            build: chain_blocked_kernel,
        },
    ]
}

/// Two sequential two-step branches inside a fork/join.
fn fork_join_sequences() -> PetriNet {
    let mut net = PetriNet::new();
    let s = net.add_place("s");
    let f = net.add_transition("f");
    let a1 = net.add_place("a1");
    let a2 = net.add_place("a2");
    let b1 = net.add_place("b1");
    let b2 = net.add_place("b2");
    let ta = net.add_transition("ta");
    let tb = net.add_transition("tb");
    let j = net.add_transition("j");
    let e = net.add_place("e");
    net.add_arc(s, f).unwrap();
    net.add_arc(f, a1).unwrap();
    net.add_arc(f, b1).unwrap();
    net.add_arc(a1, ta).unwrap();
    net.add_arc(ta, a2).unwrap();
    net.add_arc(b1, tb).unwrap();
    net.add_arc(tb, b2).unwrap();
    net.add_arc(a2, j).unwrap();
    net.add_arc(b2, j).unwrap();
    net.add_arc(j, e).unwrap();
    net
}

/// A sequence into a two-way choice that rejoins, followed by a parallel
/// payout/archive section.
fn claim_pipeline() -> PetriNet {
    let mut net = PetriNet::new();
    let start = net.add_place("start");
    let submit = net.add_transition("submit");
    let claim = net.add_place("claim");
    let approve = net.add_transition("approve");
    let reject = net.add_transition("reject");
    let accepted = net.add_place("accepted");
    let rejected = net.add_place("rejected");
    let file_a = net.add_transition("file_a");
    let file_r = net.add_transition("file_r");
    let decided = net.add_place("decided");
    let split = net.add_transition("split");
    let payout = net.add_place("payout");
    let archive = net.add_place("archive");
    let close = net.add_transition("close");
    let finished = net.add_place("finished");
    net.add_arc(start, submit).unwrap();
    net.add_arc(submit, claim).unwrap();
    net.add_arc(claim, approve).unwrap();
    net.add_arc(approve, accepted).unwrap();
    net.add_arc(claim, reject).unwrap();
    net.add_arc(reject, rejected).unwrap();
    net.add_arc(accepted, file_a).unwrap();
    net.add_arc(file_a, decided).unwrap();
    net.add_arc(rejected, file_r).unwrap();
    net.add_arc(file_r, decided).unwrap();
    net.add_arc(decided, split).unwrap();
    net.add_arc(split, payout).unwrap();
    net.add_arc(split, archive).unwrap();
    net.add_arc(payout, close).unwrap();
    net.add_arc(archive, close).unwrap();
    net.add_arc(close, finished).unwrap();
    net
}

/// A parallel section one of whose branches is itself a parallel section.
fn nested_parallel() -> PetriNet {
    let mut net = PetriNet::new();
    let s = net.add_place("s");
    let f1 = net.add_transition("f1");
    let x = net.add_place("x");
    let e = net.add_place("e");
    let f2 = net.add_transition("f2");
    let c = net.add_place("c");
    let d = net.add_place("d");
    let j2 = net.add_transition("j2");
    let x2 = net.add_place("x2");
    let j1 = net.add_transition("j1");
    let z = net.add_place("z");
    net.add_arc(s, f1).unwrap();
    net.add_arc(f1, x).unwrap();
    net.add_arc(f1, e).unwrap();
    net.add_arc(x, f2).unwrap();
    net.add_arc(f2, c).unwrap();
    net.add_arc(f2, d).unwrap();
    net.add_arc(c, j2).unwrap();
    net.add_arc(d, j2).unwrap();
    net.add_arc(j2, x2).unwrap();
    net.add_arc(x2, j1).unwrap();
    net.add_arc(e, j1).unwrap();
    net.add_arc(j1, z).unwrap();
    net
}

/// A hub place with two return loops hanging off it.
fn hub_double_loop() -> PetriNet {
    let mut net = PetriNet::new();
    let s = net.add_place("s");
    let t1 = net.add_transition("t1");
    let h = net.add_place("h");
    let t2 = net.add_transition("t2");
    let x = net.add_place("x");
    let t3 = net.add_transition("t3");
    let t4 = net.add_transition("t4");
    let y = net.add_place("y");
    let t5 = net.add_transition("t5");
    net.add_arc(s, t1).unwrap();
    net.add_arc(t1, h).unwrap();
    net.add_arc(h, t2).unwrap();
    net.add_arc(t2, x).unwrap();
    net.add_arc(x, t3).unwrap();
    net.add_arc(t3, h).unwrap();
    net.add_arc(h, t4).unwrap();
    net.add_arc(t4, y).unwrap();
    net.add_arc(y, t5).unwrap();
    net.add_arc(t5, h).unwrap();
    net
}

/// A three-branch parallel section followed by a two-place cycle.
fn parallel_three_with_loop() -> PetriNet {
    let mut net = PetriNet::new();
    let s = net.add_place("s");
    let f = net.add_transition("f");
    let a = net.add_place("a");
    let b = net.add_place("b");
    let c = net.add_place("c");
    let j = net.add_transition("j");
    let e = net.add_place("e");
    let t1 = net.add_transition("t1");
    let g = net.add_place("g");
    let t2 = net.add_transition("t2");
    net.add_arc(s, f).unwrap();
    for p in [a, b, c] {
        net.add_arc(f, p).unwrap();
        net.add_arc(p, j).unwrap();
    }
    net.add_arc(j, e).unwrap();
    net.add_arc(e, t1).unwrap();
    net.add_arc(t1, g).unwrap();
    net.add_arc(g, t2).unwrap();
    net.add_arc(t2, e).unwrap();
    net
}

/// Two parallel sections in sequence.
fn double_parallel() -> PetriNet {
    let mut net = PetriNet::new();
    let s = net.add_place("s");
    let f1 = net.add_transition("f1");
    let a = net.add_place("a");
    let b = net.add_place("b");
    let j1 = net.add_transition("j1");
    let m = net.add_place("m");
    let f2 = net.add_transition("f2");
    let c = net.add_place("c");
    let d = net.add_place("d");
    let j2 = net.add_transition("j2");
    let e = net.add_place("e");
    net.add_arc(s, f1).unwrap();
    for p in [a, b] {
        net.add_arc(f1, p).unwrap();
        net.add_arc(p, j1).unwrap();
    }
    net.add_arc(j1, m).unwrap();
    net.add_arc(m, f2).unwrap();
    for p in [c, d] {
        net.add_arc(f2, p).unwrap();
        net.add_arc(p, j2).unwrap();
    }
    net.add_arc(j2, e).unwrap();
    net
}

/// Two three-place pipelines whose ends meet in a transition that reads
/// from both. The pipelines collapse, the kernel never does: reduction
/// always stops at two places.
fn pipelines_blocked_join() -> PetriNet {
    let mut net = PetriNet::new();
    let a1 = net.add_place("a1");
    let u1 = net.add_transition("u1");
    let a2 = net.add_place("a2");
    let u2 = net.add_transition("u2");
    let a3 = net.add_place("a3");
    let b1 = net.add_place("b1");
    let v1 = net.add_transition("v1");
    let b2 = net.add_place("b2");
    let v2 = net.add_transition("v2");
    let b3 = net.add_place("b3");
    let w = net.add_transition("w");
    let z = net.add_transition("z");
    net.add_arc(a1, u1).unwrap();
    net.add_arc(u1, a2).unwrap();
    net.add_arc(a2, u2).unwrap();
    net.add_arc(u2, a3).unwrap();
    net.add_arc(b1, v1).unwrap();
    net.add_arc(v1, b2).unwrap();
    net.add_arc(b2, v2).unwrap();
    net.add_arc(v2, b3).unwrap();
    net.add_arc(a3, w).unwrap();
    net.add_arc(w, b1).unwrap();
    net.add_arc(a3, z).unwrap();
    net.add_arc(b1, z).unwrap();
    net
}

/// The smallest blocked net: a chain link watched by a reader of both ends.
fn blocked_pair() -> PetriNet {
    let mut net = PetriNet::new();
    let p1 = net.add_place("p1");
    let t1 = net.add_transition("t1");
    let p2 = net.add_place("p2");
    let z = net.add_transition("z");
    net.add_arc(p1, t1).unwrap();
    net.add_arc(t1, p2).unwrap();
    net.add_arc(p1, z).unwrap();
    net.add_arc(p2, z).unwrap();
    net
}

/// The mirror image: a transition writing into both ends of a chain link.
fn blocked_pair_dual() -> PetriNet {
    let mut net = PetriNet::new();
    let p1 = net.add_place("p1");
    let t1 = net.add_transition("t1");
    let p2 = net.add_place("p2");
    let z = net.add_transition("z");
    net.add_arc(p1, t1).unwrap();
    net.add_arc(t1, p2).unwrap();
    net.add_arc(z, p1).unwrap();
    net.add_arc(z, p2).unwrap();
    net
}

/// A fork/join whose symmetry is broken by a shortcut around one branch.
/// The shortcut merges once, then nothing else ever applies.
fn fork_with_shortcut() -> PetriNet {
    let mut net = PetriNet::new();
    let s = net.add_place("s");
    let f = net.add_transition("f");
    let a = net.add_place("a");
    let b = net.add_place("b");
    let j = net.add_transition("j");
    let e = net.add_place("e");
    let k = net.add_transition("k");
    net.add_arc(s, f).unwrap();
    net.add_arc(f, a).unwrap();
    net.add_arc(f, b).unwrap();
    net.add_arc(a, j).unwrap();
    net.add_arc(b, j).unwrap();
    net.add_arc(j, e).unwrap();
    net.add_arc(a, k).unwrap();
    net.add_arc(k, e).unwrap();
    net
}

/// A short chain feeding a blocked kernel: one merge happens, then the
/// reader of both remaining places freezes everything.
fn chain_blocked_kernel() -> PetriNet {
    let mut net = PetriNet::new();
    let a1 = net.add_place("a1");
    let u1 = net.add_transition("u1");
    let a2 = net.add_place("a2");
    let w = net.add_transition("w");
    let b = net.add_place("b");
    let z = net.add_transition("z");
    net.add_arc(a1, u1).unwrap();
    net.add_arc(u1, a2).unwrap();
    net.add_arc(a2, w).unwrap();
    net.add_arc(w, b).unwrap();
    net.add_arc(a2, z).unwrap();
    net.add_arc(b, z).unwrap();
    net
}
