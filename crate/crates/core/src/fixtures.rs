//! Small named graphs used throughout the tests, the CLI examples and the
//! browser demo.

use crate::graph::{Graph, Multiplicity};

fn build(b: crate::graph::GraphBuilder) -> Graph {
    b.build().expect("fixture graphs are valid")
}

/// `v1 → v2 → … → vn` with edges `e1 … e(n-1)`.
pub fn line(n: usize) -> Graph {
    let mut b = Graph::builder();
    for i in 1..=n {
        b = b.vertex(format!("v{i}"));
    }
    for i in 1..n {
        b = b.edge(format!("e{i}"), format!("v{i}"), format!("v{}", i + 1));
    }
    build(b)
}

/// One vertex `v` with one loop `c`.
pub fn single_loop() -> Graph {
    build(Graph::builder().vertex("v").edge("c", "v", "v"))
}

/// Loop `c` at `v1` and an edge `e: v1 → v2`.
pub fn toeplitz() -> Graph {
    build(
        Graph::builder()
            .vertices(["v1", "v2"])
            .edge("c", "v1", "v1")
            .edge("e", "v1", "v2"),
    )
}

/// One vertex `v` with `k` loops named `g, h, i, …`.
pub fn rose(k: usize) -> Graph {
    let mut b = Graph::builder().vertex("v");
    for i in 0..k {
        let name = char::from(b'g' + i as u8).to_string();
        b = b.edge(name, "v", "v");
    }
    build(b)
}

/// `u` with edges `f1 … fn` to sinks `w1 … wn`.
pub fn clock(n: usize) -> Graph {
    let mut b = Graph::builder().vertex("u");
    for i in 1..=n {
        b = b
            .vertex(format!("w{i}"))
            .edge(format!("f{i}"), "u", format!("w{i}"));
    }
    build(b)
}

/// `u` with an ω-bundle `b: u → w`.
pub fn clock_omega() -> Graph {
    build(
        Graph::builder()
            .vertices(["u", "w"])
            .bundle("b", "u", "w", Multiplicity::Omega),
    )
}

/// [`clock_omega`] plus an edge `z0: u → z`, making `u` a breaking vertex
/// for `{w}`.
pub fn clock_omega_with_exit() -> Graph {
    build(
        Graph::builder()
            .vertices(["u", "w", "z"])
            .bundle("b", "u", "w", Multiplicity::Omega)
            .edge("z0", "u", "z"),
    )
}

/// [`clock_omega`] plus an edge `d: z → u` entering the infinite emitter.
pub fn clock_omega_with_entry() -> Graph {
    build(
        Graph::builder()
            .vertices(["u", "w", "z"])
            .bundle("b", "u", "w", Multiplicity::Omega)
            .edge("d", "z", "u"),
    )
}

/// Loops `c1 … cn` at `v1 … vn` with `e_i: v(i+1) → v_i`; a descending
/// chain of `n` cycles.
pub fn f_graph(n: usize) -> Graph {
    let mut b = Graph::builder();
    for i in 1..=n {
        b = b
            .vertex(format!("v{i}"))
            .edge(format!("c{i}"), format!("v{i}"), format!("v{i}"));
    }
    for i in 1..n {
        b = b.edge(format!("e{i}"), format!("v{}", i + 1), format!("v{i}"));
    }
    build(b)
}

/// [`f_graph`] plus a sink `w` and an edge `e: v1 → w`.
pub fn e_prime(n: usize) -> Graph {
    let mut b = Graph::builder();
    for i in 1..=n {
        b = b
            .vertex(format!("v{i}"))
            .edge(format!("c{i}"), format!("v{i}"), format!("v{i}"));
    }
    for i in 1..n {
        b = b.edge(format!("e{i}"), format!("v{}", i + 1), format!("v{i}"));
    }
    build(b.vertex("w").edge("e", "v1", "w"))
}

/// `u → a → b` (acyclic branch, `b` a sink) and `u → x` with a loop `c` at
/// `x` that has no exit.
pub fn acyclic_and_no_exit() -> Graph {
    build(
        Graph::builder()
            .vertices(["u", "a", "b", "x"])
            .edge("f", "u", "a")
            .edge("h", "a", "b")
            .edge("k", "u", "x")
            .edge("c", "x", "x"),
    )
}

/// The directed triangle `a → b → c → a`.
pub fn triangle() -> Graph {
    build(
        Graph::builder()
            .vertices(["a", "b", "c"])
            .edge("x", "a", "b")
            .edge("y", "b", "c")
            .edge("z", "c", "a"),
    )
}

/// Every named fixture, in a fixed order.
pub fn catalog() -> Vec<(&'static str, Graph)> {
    vec![
        ("line2", line(2)),
        ("line3", line(3)),
        ("line4", line(4)),
        ("loop", single_loop()),
        ("toeplitz", toeplitz()),
        ("rose2", rose(2)),
        ("clock3", clock(3)),
        ("clock_omega", clock_omega()),
        ("clock_omega_exit", clock_omega_with_exit()),
        ("clock_omega_entry", clock_omega_with_entry()),
        ("f2", f_graph(2)),
        ("f3", f_graph(3)),
        ("eprime2", e_prime(2)),
        ("eprime3", e_prime(3)),
        ("acyclic_no_exit", acyclic_and_no_exit()),
        ("triangle", triangle()),
    ]
}

pub fn by_name(name: &str) -> Option<Graph> {
    catalog().into_iter().find(|(n, _)| *n == name).map(|(_, g)| g)
}
