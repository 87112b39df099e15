//! Hereditary and saturated vertex sets, and the graphs built from them:
//! quotient graphs `E\(H,S)`, hedgehog graphs `Ē(H,S)` and the finite
//! edge-set graph `E_F`.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{EdgeRef, Graph, GraphBuilder, Multiplicity, VertexSet};

pub const DEFAULT_MAX_VERTICES_HS: usize = 20;

/// A hereditary saturated vertex set together with the seed it was
/// generated from.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct HsSet {
    pub vertices: VertexSet,
    pub generated_from: VertexSet,
}

impl HsSet {
    /// Checks that `vertices` is hereditary and saturated in `g`.
    pub fn new(g: &Graph, vertices: VertexSet) -> Result<HsSet> {
        let flags = g.flags(&vertices)?;
        if !is_hereditary(g, &flags) {
            return Err(Error::Precondition(format!(
                "{vertices:?} is not hereditary"
            )));
        }
        if !is_saturated(g, &flags) {
            return Err(Error::Precondition(format!(
                "{vertices:?} is not saturated"
            )));
        }
        Ok(HsSet {
            generated_from: vertices.clone(),
            vertices,
        })
    }

    pub fn contains(&self, v: &str) -> bool {
        self.vertices.contains(v)
    }
}

pub(crate) fn is_hereditary(g: &Graph, flags: &[bool]) -> bool {
    g.bundles().iter().all(|b| !flags[b.src] || flags[b.dst])
}

pub(crate) fn is_saturated(g: &Graph, flags: &[bool]) -> bool {
    (0..g.vertex_count()).all(|v| {
        flags[v] || !g.is_regular(v) || !g.successors(v).all(|w| flags[w])
    })
}

pub fn hereditary_closure(g: &Graph, seed: &VertexSet) -> Result<VertexSet> {
    let ids = g.ids(seed)?;
    Ok(g.names(&g.reach_from(ids)))
}

pub(crate) fn saturate_flags(g: &Graph, seed: &[usize]) -> Vec<bool> {
    let mut flags = g.reach_from(seed.iter().copied());
    loop {
        let mut changed = false;
        for v in 0..g.vertex_count() {
            if !flags[v] && g.is_regular(v) && g.successors(v).all(|w| flags[w]) {
                flags[v] = true;
                changed = true;
            }
        }
        if !changed {
            return flags;
        }
    }
}

/// Smallest hereditary saturated superset of `seed`.
pub fn saturated_closure(g: &Graph, seed: &VertexSet) -> Result<HsSet> {
    let ids = g.ids(seed)?;
    Ok(HsSet {
        vertices: g.names(&saturate_flags(g, &ids)),
        generated_from: seed.clone(),
    })
}

pub fn enumerate_hs_sets(g: &Graph) -> Result<Vec<HsSet>> {
    enumerate_hs_sets_capped(g, DEFAULT_MAX_VERTICES_HS)
}

/// Every hereditary saturated subset, by brute force over all subsets.
/// Ordered by size, then lexicographically.
pub fn enumerate_hs_sets_capped(g: &Graph, max_vertices: usize) -> Result<Vec<HsSet>> {
    let n = g.vertex_count();
    if n > max_vertices || n > 30 {
        return Err(Error::ResourceCap {
            what: "vertex count for hereditary saturated set enumeration",
            limit: max_vertices.min(30),
        });
    }
    let succ: Vec<u32> = (0..n)
        .map(|v| g.successors(v).fold(0u32, |m, w| m | (1 << w)))
        .collect();
    let regular: Vec<bool> = (0..n).map(|v| g.is_regular(v)).collect();
    let mut found = Vec::new();
    for mask in 0u32..(1u32 << n) {
        let ok = (0..n).all(|v| {
            let inside = mask & (1 << v) != 0;
            if inside {
                succ[v] & !mask == 0
            } else {
                !(regular[v] && succ[v] & !mask == 0)
            }
        });
        if ok {
            let vertices: VertexSet = (0..n)
                .filter(|v| mask & (1 << v) != 0)
                .map(|v| g.vertex_name(v).to_string())
                .collect();
            found.push(HsSet {
                generated_from: vertices.clone(),
                vertices,
            });
        }
    }
    found.sort_by(|a, b| {
        a.vertices
            .len()
            .cmp(&b.vertices.len())
            .then_with(|| a.vertices.cmp(&b.vertices))
    });
    Ok(found)
}

/// Infinite emitters with finitely many, but at least one, edges leaving `H`.
pub fn breaking_vertices(g: &Graph, h: &HsSet) -> Result<VertexSet> {
    let inside = g.flags(&h.vertices)?;
    Ok(breaking_flags(g, &inside)
        .into_iter()
        .enumerate()
        .filter(|(_, b)| *b)
        .map(|(v, _)| g.vertex_name(v).to_string())
        .collect())
}

fn breaking_flags(g: &Graph, inside: &[bool]) -> Vec<bool> {
    (0..g.vertex_count())
        .map(|v| {
            if !g.is_infinite_emitter(v) {
                return false;
            }
            let mut leaving = 0u64;
            for &b in g.out_bundles(v) {
                let bundle = &g.bundles()[b];
                if inside[bundle.dst] {
                    continue;
                }
                match bundle.mult {
                    Multiplicity::Omega => return false,
                    Multiplicity::Finite(k) => leaving += k as u64,
                }
            }
            leaving > 0
        })
        .collect()
}

/// A pair `(H, S)` with `S ⊆ B_H`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientSpec {
    pub h: HsSet,
    pub s: VertexSet,
}

impl QuotientSpec {
    pub fn new(g: &Graph, h: HsSet, s: VertexSet) -> Result<QuotientSpec> {
        let breaking = breaking_vertices(g, &h)?;
        if let Some(bad) = s.iter().find(|v| !breaking.contains(*v)) {
            return Err(Error::Precondition(format!(
                "`{bad}` is not a breaking vertex for H"
            )));
        }
        Ok(QuotientSpec { h, s })
    }

    pub fn plain(h: HsSet) -> QuotientSpec {
        QuotientSpec {
            h,
            s: VertexSet::new(),
        }
    }
}

/// Appends primes until `name` is unused.
fn fresh(taken: &mut HashSet<String>, name: String) -> String {
    let mut name = name;
    while taken.contains(&name) {
        name.push('\'');
    }
    taken.insert(name.clone());
    name
}

fn taken_names(g: &Graph) -> HashSet<String> {
    g.vertex_names()
        .iter()
        .cloned()
        .chain(g.bundles().iter().map(|b| b.id.clone()))
        .collect()
}

/// The quotient graph `E\(H,S)`: vertices outside `H` plus a primed sink
/// `u'` for each `u ∈ B_H \ S`; edges not ending in `H` plus a primed copy
/// `e'` of each edge ending in `B_H \ S`.
pub fn quotient(g: &Graph, spec: &QuotientSpec) -> Result<Graph> {
    let inside = g.flags(&spec.h.vertices)?;
    let breaking = breaking_flags(g, &inside);
    let s_flags = g.flags(&spec.s)?;
    let primed: Vec<bool> = (0..g.vertex_count())
        .map(|v| breaking[v] && !s_flags[v])
        .collect();

    let mut taken = taken_names(g);
    let mut prime_name = BTreeMap::new();
    for v in (0..g.vertex_count()).filter(|&v| primed[v]) {
        prime_name.insert(v, fresh(&mut taken, format!("{}'", g.vertex_name(v))));
    }

    let mut b = GraphBuilder::default();
    for v in (0..g.vertex_count()).filter(|&v| !inside[v]) {
        b = b.vertex(g.vertex_name(v));
    }
    for name in prime_name.values() {
        b = b.vertex(name.clone());
    }
    for bundle in g.bundles() {
        if !inside[bundle.dst] {
            b = b.bundle(
                bundle.id.clone(),
                g.vertex_name(bundle.src),
                g.vertex_name(bundle.dst),
                bundle.mult,
            );
        }
    }
    for bundle in g.bundles() {
        if primed[bundle.dst] {
            let id = fresh(&mut taken, format!("{}'", bundle.id));
            b = b.bundle(
                id,
                g.vertex_name(bundle.src),
                prime_name[&bundle.dst].clone(),
                bundle.mult,
            );
        }
    }
    b.build()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct HedgehogMetadata {
    pub complete: bool,
    pub depth_bound: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HedgehogResult {
    pub graph: Graph,
    pub complete: bool,
    pub depth_bound: usize,
}

impl HedgehogResult {
    pub fn to_json(&self) -> crate::graph::GraphJson {
        let mut json = self.graph.to_json();
        json.metadata = Some(
            serde_json::to_value(HedgehogMetadata {
                complete: self.complete,
                depth_bound: self.depth_bound,
            })
            .expect("metadata serializes"),
        );
        json
    }
}

/// Paths of length `1..=depth` ending at a vertex in `targets` whose edge
/// sources all satisfy `source_ok`. ω-bundles are sampled at slots
/// `0..depth`.
fn paths_into(
    g: &Graph,
    targets: &[bool],
    source_ok: &dyn Fn(usize) -> bool,
    depth: usize,
) -> Vec<Vec<EdgeRef>> {
    let slots = depth as u32;
    let mut out = Vec::new();
    // paths are grown backwards and stored last-edge-first
    let mut frontier: Vec<Vec<EdgeRef>> = (0..g.vertex_count())
        .filter(|&t| targets[t])
        .flat_map(|t| g.edges_into(t, slots))
        .map(|e| vec![e])
        .collect();
    for len in 1..=depth {
        let mut next = Vec::new();
        for rev in frontier {
            let head = g.src(*rev.last().expect("nonempty"));
            if !source_ok(head) {
                continue;
            }
            if len < depth {
                for e in g.edges_into(head, slots) {
                    let mut longer = rev.clone();
                    longer.push(e);
                    next.push(longer);
                }
            }
            out.push(rev.into_iter().rev().collect());
        }
        frontier = next;
    }
    out.sort();
    out
}

/// Whether infinitely many paths end in `targets`: some vertex on a closed
/// path, or the range of an ω-bundle, reaches them.
fn feeds_infinitely(g: &Graph, targets: &[bool]) -> bool {
    let feeders = g.reach_to((0..g.vertex_count()).filter(|&v| targets[v]));
    let cyclic = g.on_closed_path();
    (0..g.vertex_count()).any(|v| feeders[v] && cyclic[v])
        || g.omega_bundles().any(|b| feeders[b.dst])
}

/// The hedgehog graph `Ē(H,S)` (the graph `_H E` when `S = ∅`).
///
/// `H` only needs to be hereditary. Vertices are `H ∪ S` plus one vertex
/// `(α)` per path `α` in `F₁ = {paths leaving E⁰\H into H}` and
/// `F₂ = {paths ending in S}`, with an edge `bar(α): (α) → r(α)`. When a
/// closed path or an ω-bundle feeds these path sets they are infinite;
/// then only paths of length at most `depth_bound` are materialized and
/// `complete` is false.
pub fn hedgehog(g: &Graph, h: &VertexSet, s: &VertexSet, depth_bound: usize) -> Result<HedgehogResult> {
    if depth_bound == 0 {
        return Err(Error::Precondition("depth bound must be at least 1".into()));
    }
    let inside = g.flags(h)?;
    if !is_hereditary(g, &inside) {
        return Err(Error::Precondition(format!("{h:?} is not hereditary")));
    }
    let s_flags = g.flags(s)?;
    let breaking = breaking_flags(g, &inside);
    if let Some(bad) = (0..g.vertex_count()).find(|&v| s_flags[v] && (inside[v] || !breaking[v])) {
        return Err(Error::Precondition(format!(
            "`{}` is not a breaking vertex for H",
            g.vertex_name(bad)
        )));
    }

    let complete = !(feeds_infinitely(g, &inside) || feeds_infinitely(g, &s_flags));
    // without cycles or ω-bundles feeding in, no path is longer than |E⁰|
    let depth = if complete { g.vertex_count().max(1) } else { depth_bound };
    let outside = |v: usize| !inside[v];
    let f1 = paths_into(g, &inside, &outside, depth);
    let f2 = paths_into(g, &s_flags, &|_| true, depth);

    let mut taken = taken_names(g);
    let mut b = GraphBuilder::default();
    for v in (0..g.vertex_count()).filter(|&v| inside[v] || s_flags[v]) {
        b = b.vertex(g.vertex_name(v));
    }
    for bundle in g.bundles() {
        let keep = inside[bundle.src] || (s_flags[bundle.src] && inside[bundle.dst]);
        if keep {
            b = b.bundle(
                bundle.id.clone(),
                g.vertex_name(bundle.src),
                g.vertex_name(bundle.dst),
                bundle.mult,
            );
        }
    }
    for alpha in f1.iter().chain(f2.iter()) {
        let label = g.edges_name(alpha);
        let vertex = fresh(&mut taken, format!("({label})"));
        let edge = fresh(&mut taken, format!("bar({label})"));
        let range = g.vertex_name(g.dst(*alpha.last().expect("paths are nonempty")));
        b = b.vertex(vertex.clone()).edge(edge, vertex, range);
    }
    Ok(HedgehogResult {
        graph: b.build()?,
        complete,
        depth_bound,
    })
}

/// The graph `E_F` of a finite edge set `F`: vertices are the edges of `F`,
/// the vertices in `r(F) ∩ s(F) ∩ s(E¹\F)` and those in `r(F) \ s(F)`;
/// there is an edge `(e,x)` whenever `r(e) = s(x)`, reading `s(u) = u` for
/// a vertex `u`.
pub fn subalgebra_graph(g: &Graph, f: &[EdgeRef]) -> Result<Graph> {
    let edges: BTreeSet<EdgeRef> = f.iter().copied().collect();
    for &e in &edges {
        if !g.is_valid_edge(e) {
            return Err(Error::UnknownEdge(format!("{e:?}")));
        }
    }
    let n = g.vertex_count();
    let mut in_r = vec![false; n];
    let mut in_s = vec![false; n];
    for &e in &edges {
        in_r[g.dst(e)] = true;
        in_s[g.src(e)] = true;
    }
    // s(E¹ \ F): does v emit an edge outside F?
    let emits_other = |v: usize| -> bool {
        g.out_bundles(v).iter().any(|&b| match g.bundles()[b].mult {
            Multiplicity::Omega => true,
            Multiplicity::Finite(k) => {
                (0..k).any(|slot| !edges.contains(&EdgeRef { bundle: b, slot }))
            }
        })
    };
    let extra: Vec<usize> = (0..n)
        .filter(|&v| (in_r[v] && in_s[v] && emits_other(v)) || (in_r[v] && !in_s[v]))
        .collect();

    let mut taken = HashSet::new();
    let mut b = GraphBuilder::default();
    let mut edge_vertex = BTreeMap::new();
    for &e in &edges {
        let name = fresh(&mut taken, g.edge_name(e));
        edge_vertex.insert(e, name.clone());
        b = b.vertex(name);
    }
    let mut plain_vertex = BTreeMap::new();
    for &v in &extra {
        let name = fresh(&mut taken, g.vertex_name(v).to_string());
        plain_vertex.insert(v, name.clone());
        b = b.vertex(name);
    }
    let mut arrows = Vec::new();
    for &e in &edges {
        for &x in &edges {
            if g.dst(e) == g.src(x) {
                arrows.push((edge_vertex[&e].clone(), edge_vertex[&x].clone()));
            }
        }
        if let Some(name) = plain_vertex.get(&g.dst(e)) {
            arrows.push((edge_vertex[&e].clone(), name.clone()));
        }
    }
    for (s, t) in arrows {
        let id = fresh(&mut taken, format!("({s},{t})"));
        b = b.edge(id, s, t);
    }
    b.build()
}

pub fn subalgebra_graph_by_names(g: &Graph, f: &[String]) -> Result<Graph> {
    let refs = f
        .iter()
        .map(|a| g.edge_ref(a))
        .collect::<Result<Vec<_>>>()?;
    subalgebra_graph(g, &refs)
}
