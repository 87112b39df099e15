#![allow(dead_code)]

use std::collections::BTreeSet;

use leavitt_core::graph::{EdgeRef, Graph};
use leavitt_core::modules::{ChenElement, ChenModule, ModuleVector};
use leavitt_core::{Algebra, AlgebraElement, Monomial, Multiplicity, Path, VertexSet};
use rand::Rng;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

/// Graph on `v0..v{n-1}` with one bundle `e{i}` per entry.
pub fn graph_from_edges(n: usize, edges: &[(usize, usize, Multiplicity)]) -> Graph {
    let mut b = Graph::builder().vertices((0..n).map(|i| format!("v{i}")));
    for (i, &(s, d, m)) in edges.iter().enumerate() {
        b = b.bundle(format!("e{i}"), format!("v{s}"), format!("v{d}"), m);
    }
    b.build().expect("generated graphs are valid")
}

/// A random finite graph with at most `max_v` vertices and `max_e` edges.
/// With `acyclic`, edges only run from lower to higher indices.
pub fn random_graph(rng: &mut impl Rng, max_v: usize, max_e: usize, acyclic: bool) -> Graph {
    let n = rng.gen_range(1..=max_v);
    let m = if acyclic && n < 2 { 0 } else { rng.gen_range(0..=max_e) };
    let mut edges = Vec::new();
    let mut total = 0;
    while total < m {
        let (mut s, mut d) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if acyclic {
            if s == d {
                continue;
            }
            if s > d {
                std::mem::swap(&mut s, &mut d);
            }
        }
        let mult: u32 = if total + 1 < m && rng.gen_bool(0.15) { 2 } else { 1 };
        total += mult as usize;
        edges.push((s, d, Multiplicity::Finite(mult)));
    }
    graph_from_edges(n, &edges)
}

/// Like `random_graph`, but may also add an ω-bundle.
pub fn random_graph_with_omega(rng: &mut impl Rng, max_v: usize, max_e: usize) -> Graph {
    let g = random_graph(rng, max_v, max_e, false);
    if !rng.gen_bool(0.3) {
        return g;
    }
    let n = g.vertex_count();
    let mut json = g.to_json();
    json.edges.push(leavitt_core::graph::EdgeJson {
        id: "w".into(),
        src: format!("v{}", rng.gen_range(0..n)),
        dst: format!("v{}", rng.gen_range(0..n)),
        mult: Multiplicity::Omega,
    });
    Graph::from_json(json).expect("valid")
}

/// Finite edges only, with ω-bundles sampled at a few slots.
fn edges_into(g: &Graph, w: usize) -> Vec<leavitt_core::graph::EdgeRef> {
    g.edges_into(w, 3)
}

/// A random path of length at most `max_len` ending at `w`.
pub fn random_path_into(rng: &mut impl Rng, g: &Graph, w: usize, max_len: usize) -> Path {
    let len = rng.gen_range(0..=max_len);
    let mut rev = Vec::new();
    let mut at = w;
    for _ in 0..len {
        let into = edges_into(g, at);
        if into.is_empty() {
            break;
        }
        let e = into[rng.gen_range(0..into.len())];
        rev.push(e);
        at = g.src(e);
    }
    rev.reverse();
    Path { source: at, edges: rev }
}

pub fn random_monomial(rng: &mut impl Rng, alg: &Algebra, max_len: usize) -> Monomial {
    let g = alg.graph();
    let w = rng.gen_range(0..g.vertex_count());
    let p = random_path_into(rng, g, w, max_len);
    let q = random_path_into(rng, g, w, max_len);
    alg.monomial(p, q).expect("paths share their range")
}

/// Number of simple cycles through each vertex, by brute-force walks over
/// concrete edges (ω-bundles are not expected here).
pub fn cycles_through(g: &Graph) -> Vec<usize> {
    let n = g.vertex_count();
    let mut seen: BTreeSet<Vec<String>> = BTreeSet::new();
    fn walk(
        g: &Graph,
        start: usize,
        at: usize,
        visited: &mut Vec<bool>,
        path: &mut Vec<String>,
        out: &mut BTreeSet<Vec<String>>,
    ) {
        for e in g.edges_from(at, 0) {
            let d = g.dst(e);
            path.push(g.edge_name(e));
            if d == start {
                // canonical rotation: smallest edge name first
                let k = (0..path.len()).min_by_key(|&i| &path[i]).unwrap();
                let mut c = path.clone();
                c.rotate_left(k);
                out.insert(c);
            } else if !visited[d] {
                visited[d] = true;
                walk(g, start, d, visited, path, out);
                visited[d] = false;
            }
            path.pop();
        }
    }
    for s in 0..n {
        let mut visited = vec![false; n];
        visited[s] = true;
        walk(g, s, s, &mut visited, &mut Vec::new(), &mut seen);
    }
    let mut counts = vec![0; n];
    for c in &seen {
        let vs: BTreeSet<usize> = c
            .iter()
            .map(|name| g.src(g.edge_ref(name).unwrap()))
            .collect();
        for v in vs {
            counts[v] += 1;
        }
    }
    counts
}

pub fn has_cycle(g: &Graph) -> bool {
    cycles_through(g).iter().any(|&k| k > 0)
}

/// Every simple module is finitely presented iff no vertex lies on two
/// distinct cycles (finite graphs).
pub fn finite_graph_fp_oracle(g: &Graph) -> bool {
    cycles_through(g).iter().all(|&k| k <= 1)
}

/// Vertices reachable from `v`, by repeated relaxation.
pub fn naive_reach(g: &Graph, v: usize) -> Vec<bool> {
    let n = g.vertex_count();
    let mut r = vec![false; n];
    r[v] = true;
    loop {
        let mut changed = false;
        for b in g.bundles() {
            if r[b.src] && !r[b.dst] {
                r[b.dst] = true;
                changed = true;
            }
        }
        if !changed {
            return r;
        }
    }
}

/// Line points from the definition: nothing reachable bifurcates or lies on
/// a cycle.
pub fn naive_line_points(g: &Graph) -> VertexSet {
    let n = g.vertex_count();
    let on_cycle: Vec<bool> = (0..n)
        .map(|v| g.successors(v).any(|w| naive_reach(g, w)[v]))
        .collect();
    (0..n)
        .filter(|&v| {
            let r = naive_reach(g, v);
            (0..n).all(|w| !r[w] || (!on_cycle[w] && g.out_degree(w).is_some_and(|d| d <= 1)))
        })
        .map(|v| g.vertex_name(v).to_string())
        .collect()
}

/// Smallest hereditary saturated superset, by iterating both rules.
pub fn naive_hs_closure(g: &Graph, seed: &VertexSet) -> VertexSet {
    let n = g.vertex_count();
    let mut inside: Vec<bool> = (0..n).map(|v| seed.contains(g.vertex_name(v))).collect();
    loop {
        let mut changed = false;
        for v in 0..n {
            if inside[v] {
                continue;
            }
            let pulled = (0..n).any(|u| inside[u] && naive_reach(g, u)[v]);
            let saturated = g.is_regular(v) && g.successors(v).all(|w| inside[w]);
            if pulled || saturated {
                inside[v] = true;
                changed = true;
            }
        }
        if !changed {
            return (0..n).filter(|&v| inside[v]).map(|v| g.vertex_name(v).to_string()).collect();
        }
    }
}

/// Fixtures whose algebra is exercised by randomized checks.
pub fn algebra_fixtures() -> Vec<(&'static str, Graph)> {
    leavitt_core::fixtures::catalog()
}

pub fn single(alg: &Algebra, m: Monomial) -> AlgebraElement {
    alg.from_monomial(m).unwrap()
}

/// Checks the defining relations term by term on one basis element.
pub fn chen_relations(alg: &Algebra, m: &ChenModule, q: &ChenElement) -> Result<(), String> {
    let g = alg.graph();
    let f = alg.field();
    let one = f.one();
    let minus = f.neg(&one);
    let x = ModuleVector::basis(q.clone(), one.clone());
    let act = |e: &AlgebraElement, v: &ModuleVector<ChenElement>| m.act(alg, e, v).unwrap();
    for w in 0..g.vertex_count() {
        if g.is_regular(w) {
            let vw = single(alg, alg.vertex_monomial(w));
            let mut sum = act(&vw, &x);
            for e in g.edges_from(w, 0) {
                let ee = act(&single(alg, alg.edge_monomial(e)), &act(&single(alg, alg.ghost_monomial(e)), &x));
                sum = sum.add_scaled(f, &minus, &ee);
            }
            ensure!(sum.is_zero(), "CK-2 fails at {}", g.vertex_name(w));
        }
    }
    let edges: Vec<EdgeRef> = (0..g.vertex_count()).flat_map(|v| g.edges_from(v, 3)).collect();
    for &e in &edges {
        let r = single(alg, alg.vertex_monomial(g.dst(e)));
        let ee = act(&single(alg, alg.ghost_monomial(e)), &act(&single(alg, alg.edge_monomial(e)), &x));
        ensure!(ee.add_scaled(f, &minus, &act(&r, &x)).is_zero(), "e*e = r(e) fails for {}", g.edge_name(e));
        for &h in &edges {
            if h != e {
                let ef = act(&single(alg, alg.ghost_monomial(e)), &act(&single(alg, alg.edge_monomial(h)), &x));
                ensure!(ef.is_zero(), "e*f = 0 fails for {}, {}", g.edge_name(e), g.edge_name(h));
            }
        }
    }
    Ok(())
}
