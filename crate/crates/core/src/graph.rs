//! Directed graphs with edge multiplicities, paths, cycles and vertex
//! classification.
//!
//! Vertices and edge bundles are stored in sorted order so that every
//! derived value (cycle lists, reports, serialized graphs) is independent
//! of the order in which the input listed them.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::de::{self, Deserializer, Visitor};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type VertexSet = BTreeSet<String>;

pub const DEFAULT_MAX_CYCLES: usize = 100_000;

/// Number of parallel edges in a bundle. `Omega` is a countably infinite
/// bundle whose members are addressed as `id[0]`, `id[1]`, ...
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Multiplicity {
    Finite(u32),
    Omega,
}

impl Multiplicity {
    pub fn is_omega(self) -> bool {
        matches!(self, Multiplicity::Omega)
    }

    fn contains_slot(self, slot: u32) -> bool {
        match self {
            Multiplicity::Finite(k) => slot < k,
            Multiplicity::Omega => true,
        }
    }
}

impl Serialize for Multiplicity {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Multiplicity::Finite(k) => s.serialize_u32(*k),
            Multiplicity::Omega => s.serialize_str("omega"),
        }
    }
}

impl<'de> Deserialize<'de> for Multiplicity {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct MultVisitor;

        impl Visitor<'_> for MultVisitor {
            type Value = Multiplicity;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a positive integer or the string \"omega\"")
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Multiplicity, E> {
                match u32::try_from(v) {
                    Ok(k) if k > 0 => Ok(Multiplicity::Finite(k)),
                    _ => Err(E::custom(format!("multiplicity {v} out of range"))),
                }
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Multiplicity, E> {
                if v <= 0 {
                    return Err(E::custom(format!("multiplicity {v} must be positive")));
                }
                self.visit_u64(v as u64)
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Multiplicity, E> {
                if v == "omega" {
                    Ok(Multiplicity::Omega)
                } else {
                    Err(E::custom(format!("unknown multiplicity `{v}`")))
                }
            }
        }

        d.deserialize_any(MultVisitor)
    }
}

fn one() -> Multiplicity {
    Multiplicity::Finite(1)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeJson {
    pub id: String,
    pub src: String,
    pub dst: String,
    #[serde(default = "one")]
    pub mult: Multiplicity,
}

/// Wire form of a graph. Derived graphs may carry a `metadata` block,
/// which is ignored when loading.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphJson {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<serde_json::Value>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bundle {
    pub id: String,
    pub src: usize,
    pub dst: usize,
    pub mult: Multiplicity,
}

/// A concrete edge: member `slot` of bundle `bundle`. Ordering follows the
/// sorted bundle ids, then the slot number.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeRef {
    pub bundle: usize,
    pub slot: u32,
}

#[derive(Clone, Debug)]
pub struct Graph {
    vertices: Vec<String>,
    vertex_index: HashMap<String, usize>,
    bundles: Vec<Bundle>,
    bundle_index: HashMap<String, usize>,
    out: Vec<Vec<usize>>,
    inc: Vec<Vec<usize>>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.bundles == other.bundles
    }
}

impl Eq for Graph {}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum VertexClass {
    Sink,
    Regular { out_degree: usize },
    InfiniteEmitter,
}

/// A finite path. A path with no edges is the vertex `source`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path {
    pub source: usize,
    pub edges: Vec<EdgeRef>,
}

impl Path {
    pub fn vertex(v: usize) -> Path {
        Path {
            source: v,
            edges: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// A simple cycle, rotated so that its smallest edge comes first.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cycle {
    edges: Vec<EdgeRef>,
}

impl Cycle {
    pub fn from_edges(mut edges: Vec<EdgeRef>) -> Cycle {
        if let Some(pos) = edges
            .iter()
            .enumerate()
            .min_by_key(|(_, e)| **e)
            .map(|(i, _)| i)
        {
            edges.rotate_left(pos);
        }
        Cycle { edges }
    }

    pub fn edges(&self) -> &[EdgeRef] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Source of the first (smallest) edge.
    pub fn base(&self, g: &Graph) -> usize {
        g.src(self.edges[0])
    }

    pub fn vertices(&self, g: &Graph) -> Vec<usize> {
        self.edges.iter().map(|&e| g.src(e)).collect()
    }

    pub fn name(&self, g: &Graph) -> String {
        g.edges_name(&self.edges)
    }

    pub fn has_exit(&self, g: &Graph) -> bool {
        self.vertices(g)
            .into_iter()
            .any(|v| g.out_degree(v) != Some(1))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TreeView {
    pub root: String,
    pub vertices: VertexSet,
    pub induced_edges: Vec<String>,
}

impl Graph {
    pub fn builder() -> GraphBuilder {
        GraphBuilder::default()
    }

    pub fn from_json(json: GraphJson) -> Result<Graph> {
        let mut b = GraphBuilder::default();
        for v in json.vertices {
            b = b.vertex(v);
        }
        for e in json.edges {
            b = b.bundle(e.id, e.src, e.dst, e.mult);
        }
        b.build()
    }

    pub fn from_json_str(s: &str) -> Result<Graph> {
        let json: GraphJson =
            serde_json::from_str(s).map_err(|e| Error::InvalidGraph(e.to_string()))?;
        Graph::from_json(json)
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            vertices: self.vertices.clone(),
            edges: self
                .bundles
                .iter()
                .map(|b| EdgeJson {
                    id: b.id.clone(),
                    src: self.vertices[b.src].clone(),
                    dst: self.vertices[b.dst].clone(),
                    mult: b.mult,
                })
                .collect(),
            metadata: None,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_id(&self, name: &str) -> Result<usize> {
        self.vertex_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn has_vertex(&self, name: &str) -> bool {
        self.vertex_index.contains_key(name)
    }

    pub fn bundles(&self) -> &[Bundle] {
        &self.bundles
    }

    pub fn bundle(&self, id: &str) -> Option<&Bundle> {
        self.bundle_index.get(id).map(|&i| &self.bundles[i])
    }

    pub fn out_bundles(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    pub fn in_bundles(&self, v: usize) -> &[usize] {
        &self.inc[v]
    }

    pub fn src(&self, e: EdgeRef) -> usize {
        self.bundles[e.bundle].src
    }

    pub fn dst(&self, e: EdgeRef) -> usize {
        self.bundles[e.bundle].dst
    }

    pub fn edge_name(&self, e: EdgeRef) -> String {
        let b = &self.bundles[e.bundle];
        match b.mult {
            Multiplicity::Finite(1) => b.id.clone(),
            _ => format!("{}[{}]", b.id, e.slot),
        }
    }

    pub fn edges_name(&self, edges: &[EdgeRef]) -> String {
        edges
            .iter()
            .map(|&e| self.edge_name(e))
            .collect::<Vec<_>>()
            .join(".")
    }

    /// Resolves `e` (single edge) or `b[i]` (member of a bundle).
    pub fn edge_ref(&self, address: &str) -> Result<EdgeRef> {
        let unknown = || Error::UnknownEdge(address.to_string());
        if let Some(&i) = self.bundle_index.get(address) {
            return match self.bundles[i].mult {
                Multiplicity::Finite(1) => Ok(EdgeRef { bundle: i, slot: 0 }),
                _ => Err(unknown()),
            };
        }
        let open = address.rfind('[').ok_or_else(unknown)?;
        let inner = address[open + 1..].strip_suffix(']').ok_or_else(unknown)?;
        let slot: u32 = inner.parse().map_err(|_| unknown())?;
        let &i = self.bundle_index.get(&address[..open]).ok_or_else(unknown)?;
        match self.bundles[i].mult {
            Multiplicity::Finite(1) => Err(unknown()),
            m if m.contains_slot(slot) => Ok(EdgeRef { bundle: i, slot }),
            _ => Err(unknown()),
        }
    }

    pub fn is_valid_edge(&self, e: EdgeRef) -> bool {
        e.bundle < self.bundles.len() && self.bundles[e.bundle].mult.contains_slot(e.slot)
    }

    /// Concrete edges leaving `v`; ω-bundles contribute slots `0..omega_slots`.
    pub fn edges_from(&self, v: usize, omega_slots: u32) -> Vec<EdgeRef> {
        let mut out = Vec::new();
        for &b in &self.out[v] {
            let k = match self.bundles[b].mult {
                Multiplicity::Finite(k) => k,
                Multiplicity::Omega => omega_slots,
            };
            out.extend((0..k).map(|slot| EdgeRef { bundle: b, slot }));
        }
        out
    }

    /// Concrete edges entering `v`; ω-bundles contribute slots `0..omega_slots`.
    pub fn edges_into(&self, v: usize, omega_slots: u32) -> Vec<EdgeRef> {
        let mut out = Vec::new();
        for &b in &self.inc[v] {
            let k = match self.bundles[b].mult {
                Multiplicity::Finite(k) => k,
                Multiplicity::Omega => omega_slots,
            };
            out.extend((0..k).map(|slot| EdgeRef { bundle: b, slot }));
        }
        out
    }

    /// `None` when `v` is an infinite emitter.
    pub fn out_degree(&self, v: usize) -> Option<usize> {
        let mut total = 0usize;
        for &b in &self.out[v] {
            match self.bundles[b].mult {
                Multiplicity::Finite(k) => total += k as usize,
                Multiplicity::Omega => return None,
            }
        }
        Some(total)
    }

    pub fn classify(&self, v: usize) -> VertexClass {
        match self.out_degree(v) {
            None => VertexClass::InfiniteEmitter,
            Some(0) => VertexClass::Sink,
            Some(k) => VertexClass::Regular { out_degree: k },
        }
    }

    pub fn is_regular(&self, v: usize) -> bool {
        matches!(self.out_degree(v), Some(k) if k > 0)
    }

    pub fn is_infinite_emitter(&self, v: usize) -> bool {
        self.out_degree(v).is_none()
    }

    pub fn is_row_finite(&self) -> bool {
        self.bundles.iter().all(|b| !b.mult.is_omega())
    }

    pub fn omega_bundles(&self) -> impl Iterator<Item = &Bundle> {
        self.bundles.iter().filter(|b| b.mult.is_omega())
    }

    /// Distinct out-neighbours of `v`.
    pub fn successors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.out[v].iter().map(move |&b| self.bundles[b].dst)
    }

    pub fn predecessors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.inc[v].iter().map(move |&b| self.bundles[b].src)
    }

    pub fn path_range(&self, p: &Path) -> usize {
        p.edges.last().map_or(p.source, |&e| self.dst(e))
    }

    pub fn check_path(&self, p: &Path) -> Result<()> {
        if p.source >= self.vertices.len() {
            return Err(Error::InvalidPath("source vertex out of range".into()));
        }
        let mut at = p.source;
        for &e in &p.edges {
            if !self.is_valid_edge(e) {
                return Err(Error::InvalidPath(format!("bad edge address {e:?}")));
            }
            if self.src(e) != at {
                return Err(Error::InvalidPath(format!(
                    "edge `{}` does not start at `{}`",
                    self.edge_name(e),
                    self.vertices[at]
                )));
            }
            at = self.dst(e);
        }
        Ok(())
    }

    /// Builds a path from edge addresses; `base` is used only when `edges`
    /// is empty.
    pub fn path_from_names(&self, base: Option<&str>, edges: &[String]) -> Result<Path> {
        let refs = edges
            .iter()
            .map(|a| self.edge_ref(a))
            .collect::<Result<Vec<_>>>()?;
        let source = match refs.first() {
            Some(&e) => self.src(e),
            None => match base {
                Some(b) => self.vertex_id(b)?,
                None => return Err(Error::InvalidPath("empty path needs a base vertex".into())),
            },
        };
        let p = Path {
            source,
            edges: refs,
        };
        self.check_path(&p)?;
        Ok(p)
    }

    pub fn path_name(&self, p: &Path) -> String {
        if p.edges.is_empty() {
            self.vertices[p.source].clone()
        } else {
            self.edges_name(&p.edges)
        }
    }

    /// Forward reachability from `seeds` (paths of length ≥ 0).
    pub(crate) fn reach_from(&self, seeds: impl IntoIterator<Item = usize>) -> Vec<bool> {
        let mut seen = vec![false; self.vertices.len()];
        let mut queue = VecDeque::new();
        for s in seeds {
            if !seen[s] {
                seen[s] = true;
                queue.push_back(s);
            }
        }
        while let Some(v) = queue.pop_front() {
            for w in self.successors(v) {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// Backward reachability: vertices with a path (length ≥ 0) into `targets`.
    pub(crate) fn reach_to(&self, targets: impl IntoIterator<Item = usize>) -> Vec<bool> {
        let mut seen = vec![false; self.vertices.len()];
        let mut queue = VecDeque::new();
        for s in targets {
            if !seen[s] {
                seen[s] = true;
                queue.push_back(s);
            }
        }
        while let Some(v) = queue.pop_front() {
            for w in self.predecessors(v) {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// Vertices lying on some closed path (of length ≥ 1).
    pub fn on_closed_path(&self) -> Vec<bool> {
        (0..self.vertices.len())
            .map(|v| self.reach_from(self.successors(v))[v])
            .collect()
    }

    pub fn names(&self, flags: &[bool]) -> VertexSet {
        flags
            .iter()
            .enumerate()
            .filter(|(_, &f)| f)
            .map(|(v, _)| self.vertices[v].clone())
            .collect()
    }

    pub fn ids(&self, set: &VertexSet) -> Result<Vec<usize>> {
        set.iter().map(|n| self.vertex_id(n)).collect()
    }

    pub fn flags(&self, set: &VertexSet) -> Result<Vec<bool>> {
        let mut flags = vec![false; self.vertices.len()];
        for v in self.ids(set)? {
            flags[v] = true;
        }
        Ok(flags)
    }

    /// The subgraph on `keep` containing every bundle whose source is kept.
    /// `keep` must be hereditary for the result to be well formed.
    pub(crate) fn complete_subgraph(&self, keep: &[bool]) -> Graph {
        let mut b = GraphBuilder::default();
        for (v, name) in self.vertices.iter().enumerate() {
            if keep[v] {
                b = b.vertex(name.clone());
            }
        }
        for bundle in &self.bundles {
            if keep[bundle.src] {
                b = b.bundle(
                    bundle.id.clone(),
                    self.vertices[bundle.src].clone(),
                    self.vertices[bundle.dst].clone(),
                    bundle.mult,
                );
            }
        }
        b.build().expect("complete subgraph of a valid graph")
    }
}

#[derive(Default, Debug, Clone)]
pub struct GraphBuilder {
    vertices: Vec<String>,
    edges: Vec<(String, String, String, Multiplicity)>,
}

impl GraphBuilder {
    pub fn vertex(mut self, name: impl Into<String>) -> Self {
        self.vertices.push(name.into());
        self
    }

    pub fn vertices<I, S>(mut self, names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.vertices.extend(names.into_iter().map(Into::into));
        self
    }

    pub fn edge(self, id: impl Into<String>, src: impl Into<String>, dst: impl Into<String>) -> Self {
        self.bundle(id, src, dst, Multiplicity::Finite(1))
    }

    pub fn bundle(
        mut self,
        id: impl Into<String>,
        src: impl Into<String>,
        dst: impl Into<String>,
        mult: Multiplicity,
    ) -> Self {
        self.edges.push((id.into(), src.into(), dst.into(), mult));
        self
    }

    pub fn build(self) -> Result<Graph> {
        let mut vertices = self.vertices;
        vertices.sort();
        for w in vertices.windows(2) {
            if w[0] == w[1] {
                return Err(Error::InvalidGraph(format!("duplicate vertex `{}`", w[0])));
            }
        }
        let vertex_index: HashMap<String, usize> = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i))
            .collect();

        let mut edges = self.edges;
        edges.sort_by(|a, b| a.0.cmp(&b.0));
        let mut bundles = Vec::with_capacity(edges.len());
        let mut bundle_index = HashMap::new();
        for (id, src, dst, mult) in edges {
            if vertex_index.contains_key(&id) {
                return Err(Error::InvalidGraph(format!(
                    "edge id `{id}` collides with a vertex id"
                )));
            }
            if bundle_index.contains_key(&id) {
                return Err(Error::InvalidGraph(format!("duplicate edge `{id}`")));
            }
            if mult == Multiplicity::Finite(0) {
                return Err(Error::InvalidGraph(format!("edge `{id}` has multiplicity 0")));
            }
            let s = *vertex_index
                .get(&src)
                .ok_or_else(|| Error::InvalidGraph(format!("edge `{id}`: unknown src `{src}`")))?;
            let d = *vertex_index
                .get(&dst)
                .ok_or_else(|| Error::InvalidGraph(format!("edge `{id}`: unknown dst `{dst}`")))?;
            bundle_index.insert(id.clone(), bundles.len());
            bundles.push(Bundle {
                id,
                src: s,
                dst: d,
                mult,
            });
        }

        let mut out = vec![Vec::new(); vertices.len()];
        let mut inc = vec![Vec::new(); vertices.len()];
        for (i, b) in bundles.iter().enumerate() {
            out[b.src].push(i);
            inc[b.dst].push(i);
        }
        Ok(Graph {
            vertices,
            vertex_index,
            bundles,
            bundle_index,
            out,
            inc,
        })
    }
}

pub fn classify_vertex(g: &Graph, v: &str) -> Result<VertexClass> {
    Ok(g.classify(g.vertex_id(v)?))
}

pub fn tree(g: &Graph, v: &str) -> Result<TreeView> {
    let root = g.vertex_id(v)?;
    let reach = g.reach_from([root]);
    Ok(TreeView {
        root: v.to_string(),
        vertices: g.names(&reach),
        induced_edges: g
            .bundles
            .iter()
            .filter(|b| reach[b.src])
            .map(|b| b.id.clone())
            .collect(),
    })
}

/// `T_E(v)` as a complete subgraph of `g`.
pub fn tree_graph(g: &Graph, v: &str) -> Result<Graph> {
    let root = g.vertex_id(v)?;
    Ok(g.complete_subgraph(&g.reach_from([root])))
}

/// Errors when some ω-bundle lies on a closed path.
pub fn ensure_finitely_many_cycles(g: &Graph) -> Result<()> {
    for b in g.omega_bundles() {
        if g.reach_from([b.dst])[b.src] {
            return Err(Error::InfinitelyManyCycles { bundle: b.id.clone() });
        }
    }
    Ok(())
}

pub fn enumerate_cycles(g: &Graph) -> Result<Vec<Cycle>> {
    enumerate_cycles_capped(g, DEFAULT_MAX_CYCLES)
}

/// All simple cycles. Each cycle is found once, from its smallest vertex,
/// by a depth-first search restricted to larger vertices that can still
/// return to the start.
pub fn enumerate_cycles_capped(g: &Graph, max_cycles: usize) -> Result<Vec<Cycle>> {
    ensure_finitely_many_cycles(g)?;
    let n = g.vertex_count();
    let mut cycles = Vec::new();
    for start in 0..n {
        let mut allowed = vec![false; n];
        {
            let mut stack = vec![start];
            allowed[start] = true;
            while let Some(v) = stack.pop() {
                for u in g.predecessors(v) {
                    if u > start && !allowed[u] {
                        allowed[u] = true;
                        stack.push(u);
                    }
                }
            }
        }
        let mut on_path = vec![false; n];
        let mut path = Vec::new();
        cycle_dfs(
            g,
            start,
            start,
            &allowed,
            &mut on_path,
            &mut path,
            &mut cycles,
            max_cycles,
        )?;
    }
    cycles.sort();
    Ok(cycles)
}

#[allow(clippy::too_many_arguments)]
fn cycle_dfs(
    g: &Graph,
    start: usize,
    at: usize,
    allowed: &[bool],
    on_path: &mut [bool],
    path: &mut Vec<EdgeRef>,
    out: &mut Vec<Cycle>,
    max_cycles: usize,
) -> Result<()> {
    on_path[at] = true;
    for e in g.edges_from(at, 0) {
        let w = g.dst(e);
        if w == start {
            path.push(e);
            out.push(Cycle::from_edges(path.clone()));
            path.pop();
            if out.len() > max_cycles {
                return Err(Error::ResourceCap {
                    what: "cycle count",
                    limit: max_cycles,
                });
            }
        } else if allowed[w] && !on_path[w] {
            path.push(e);
            cycle_dfs(g, start, w, allowed, on_path, path, out, max_cycles)?;
            path.pop();
        }
    }
    on_path[at] = false;
    Ok(())
}

/// Vertices with out-degree at least two (ω-bundles included).
pub(crate) fn bifurcations(g: &Graph) -> Vec<bool> {
    (0..g.vertex_count())
        .map(|v| g.out_degree(v).is_none_or(|k| k >= 2))
        .collect()
}

pub(crate) fn line_point_flags(g: &Graph) -> Vec<bool> {
    let bif = bifurcations(g);
    let cyc = g.on_closed_path();
    let bad: Vec<usize> = (0..g.vertex_count()).filter(|&v| bif[v] || cyc[v]).collect();
    // v fails iff some bad vertex is reachable from v
    let reaches_bad = g.reach_to(bad);
    reaches_bad.into_iter().map(|b| !b).collect()
}

pub fn line_points(g: &Graph) -> VertexSet {
    g.names(&line_point_flags(g))
}

pub fn condition_l(g: &Graph) -> Result<bool> {
    Ok(enumerate_cycles(g)?.iter().all(|c| c.has_exit(g)))
}

/// Number of distinct simple closed paths based at `v`, saturated at 2.
/// A simple closed path returns to `v` only at its end; other vertices may
/// repeat, so any cycle on a return route gives infinitely many.
pub(crate) fn simple_closed_paths_at(g: &Graph, v: usize) -> u8 {
    let n = g.vertex_count();
    // vertices other than v reachable from v without passing through v
    let mut from_v = vec![false; n];
    let mut stack: Vec<usize> = g.successors(v).filter(|&w| w != v).collect();
    for &w in &stack {
        from_v[w] = true;
    }
    while let Some(x) = stack.pop() {
        for y in g.successors(x) {
            if y != v && !from_v[y] {
                from_v[y] = true;
                stack.push(y);
            }
        }
    }
    // vertices other than v that return to v without passing through v
    let mut to_v = vec![false; n];
    let mut stack: Vec<usize> = g.predecessors(v).filter(|&w| w != v).collect();
    for &w in &stack {
        to_v[w] = true;
    }
    while let Some(x) = stack.pop() {
        for y in g.predecessors(x) {
            if y != v && !to_v[y] {
                to_v[y] = true;
                stack.push(y);
            }
        }
    }
    let relevant: Vec<bool> = (0..n).map(|x| from_v[x] && to_v[x]).collect();

    let mult = |b: usize| -> u64 {
        match g.bundles()[b].mult {
            Multiplicity::Finite(k) => k as u64,
            Multiplicity::Omega => 2,
        }
    };

    // Count paths from each relevant vertex back to v; memoised DFS with
    // cycle detection on the relevant subgraph.
    #[derive(Clone, Copy, PartialEq)]
    enum State {
        New,
        Active,
        Done(u64),
    }
    fn count(
        g: &Graph,
        x: usize,
        v: usize,
        relevant: &[bool],
        state: &mut [State],
        mult: &dyn Fn(usize) -> u64,
    ) -> u64 {
        match state[x] {
            State::Done(c) => return c,
            State::Active => return 2,
            State::New => {}
        }
        state[x] = State::Active;
        let mut total = 0u64;
        for &b in g.out_bundles(x) {
            let y = g.bundles()[b].dst;
            let m = mult(b);
            if y == v {
                total += m;
            } else if relevant[y] {
                let c = count(g, y, v, relevant, state, mult);
                total += m * c;
            }
            total = total.min(2);
        }
        state[x] = State::Done(total);
        total
    }

    let mut state = vec![State::New; n];
    let mut total = 0u64;
    for &b in g.out_bundles(v) {
        let y = g.bundles()[b].dst;
        let m = mult(b);
        if y == v {
            total += m;
        } else if relevant[y] {
            total += m * count(g, y, v, &relevant, &mut state, &mult);
        }
        total = total.min(2);
    }
    total as u8
}

/// Every vertex that bases a simple closed path bases at least two.
pub fn condition_k(g: &Graph) -> Result<bool> {
    ensure_finitely_many_cycles(g)?;
    Ok((0..g.vertex_count()).all(|v| simple_closed_paths_at(g, v) != 1))
}
