//! Simple modules: Chen modules `V_[p]` over an infinite path `p`, the
//! module `S_v` at an infinite emitter, and the bifurcation data of a path.
//!
//! Monomials send basis elements to basis elements or to zero, so both
//! actions are computed monomial by monomial and extended linearly.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, AlgebraElement, Monomial};
use crate::error::{Error, Result};
use crate::graph::{EdgeRef, Graph, Path};
use crate::scalar::{Field, Scalar};

/// A finitely described infinite path.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum InfinitePath {
    /// `prefix · period · period · …`, stored with a primitive period and
    /// the shortest possible prefix.
    Periodic {
        prefix: Vec<EdgeRef>,
        period: Vec<EdgeRef>,
    },
    /// `g h g² h² g³ h³ …` for two distinct cycles based at one vertex.
    GhStream { g: Vec<EdgeRef>, h: Vec<EdgeRef> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum InfinitePathJson {
    Periodic {
        #[serde(default)]
        prefix: Vec<String>,
        period: Vec<String>,
    },
    Ghstream { g: String, h: String },
}

fn edges_from_names(g: &Graph, names: &[String]) -> Result<Vec<EdgeRef>> {
    names.iter().map(|n| g.edge_ref(n)).collect()
}

fn is_closed(g: &Graph, edges: &[EdgeRef]) -> bool {
    match (edges.first(), edges.last()) {
        (Some(&a), Some(&b)) => g.src(a) == g.dst(b),
        _ => false,
    }
}

fn check_edges(g: &Graph, edges: &[EdgeRef]) -> Result<()> {
    if let Some(&first) = edges.first() {
        g.check_path(&Path {
            source: g.src(first),
            edges: edges.to_vec(),
        })?;
    }
    Ok(())
}

fn primitive_root(period: &[EdgeRef]) -> Vec<EdgeRef> {
    let n = period.len();
    for d in 1..n {
        if n.is_multiple_of(d) && (d..n).all(|i| period[i] == period[i - d]) {
            return period[..d].to_vec();
        }
    }
    period.to_vec()
}

impl InfinitePath {
    pub fn periodic(g: &Graph, prefix: Vec<EdgeRef>, period: Vec<EdgeRef>) -> Result<InfinitePath> {
        if period.is_empty() {
            return Err(Error::InvalidPath("the period must be nonempty".into()));
        }
        check_edges(g, &prefix)?;
        check_edges(g, &period)?;
        if !is_closed(g, &period) {
            return Err(Error::InvalidPath(format!(
                "period {} is not closed",
                g.edges_name(&period)
            )));
        }
        if let Some(&last) = prefix.last() {
            if g.dst(last) != g.src(period[0]) {
                return Err(Error::InvalidPath(
                    "the prefix does not end where the period starts".into(),
                ));
            }
        }
        let mut prefix = prefix;
        let mut period = primitive_root(&period);
        while prefix.last().is_some() && prefix.last() == period.last() {
            prefix.pop();
            period.rotate_right(1);
        }
        Ok(InfinitePath::Periodic { prefix, period })
    }

    /// `c^∞` for a closed path `c`.
    pub fn rational(g: &Graph, period: Vec<EdgeRef>) -> Result<InfinitePath> {
        InfinitePath::periodic(g, Vec::new(), period)
    }

    pub fn ghstream(g: &Graph, gc: Vec<EdgeRef>, hc: Vec<EdgeRef>) -> Result<InfinitePath> {
        for c in [&gc, &hc] {
            check_edges(g, c)?;
            if !is_closed(g, c) {
                return Err(Error::InvalidPath(format!("{} is not closed", g.edges_name(c))));
            }
            let mut seen: Vec<usize> = c.iter().map(|&e| g.src(e)).collect();
            seen.sort_unstable();
            seen.dedup();
            if seen.len() != c.len() {
                return Err(Error::InvalidPath(format!(
                    "{} is not a cycle",
                    g.edges_name(c)
                )));
            }
        }
        if g.src(gc[0]) != g.src(hc[0]) {
            return Err(Error::InvalidPath("g and h must share their base".into()));
        }
        if gc == hc {
            return Err(Error::InvalidPath("g and h must differ".into()));
        }
        Ok(InfinitePath::GhStream { g: gc, h: hc })
    }

    pub fn from_json(g: &Graph, json: &InfinitePathJson) -> Result<InfinitePath> {
        match json {
            InfinitePathJson::Periodic { prefix, period } => InfinitePath::periodic(
                g,
                edges_from_names(g, prefix)?,
                edges_from_names(g, period)?,
            ),
            InfinitePathJson::Ghstream { g: gid, h: hid } => {
                let split = |id: &str| -> Vec<String> { id.split('.').map(str::to_string).collect() };
                InfinitePath::ghstream(
                    g,
                    edges_from_names(g, &split(gid))?,
                    edges_from_names(g, &split(hid))?,
                )
            }
        }
    }

    pub fn to_json(&self, g: &Graph) -> InfinitePathJson {
        let names = |edges: &[EdgeRef]| edges.iter().map(|&e| g.edge_name(e)).collect();
        match self {
            InfinitePath::Periodic { prefix, period } => InfinitePathJson::Periodic {
                prefix: names(prefix),
                period: names(period),
            },
            InfinitePath::GhStream { g: gc, h: hc } => InfinitePathJson::Ghstream {
                g: g.edges_name(gc),
                h: g.edges_name(hc),
            },
        }
    }

    /// Tail-equivalent to `c^∞` for a closed path `c`.
    pub fn is_rational(&self) -> bool {
        matches!(self, InfinitePath::Periodic { prefix, .. } if prefix.is_empty())
    }

    /// The edge `e_{i+1}` of `p = e₁e₂…`.
    pub fn edge_at(&self, i: usize) -> EdgeRef {
        match self {
            InfinitePath::Periodic { prefix, period } => {
                if i < prefix.len() {
                    prefix[i]
                } else {
                    period[(i - prefix.len()) % period.len()]
                }
            }
            InfinitePath::GhStream { g, h } => {
                let mut pos = i;
                let mut k = 1;
                loop {
                    let (lg, lh) = (k * g.len(), k * h.len());
                    if pos < lg {
                        return g[pos % g.len()];
                    }
                    if pos < lg + lh {
                        return h[(pos - lg) % h.len()];
                    }
                    pos -= lg + lh;
                    k += 1;
                }
            }
        }
    }

    /// `τ≤n(p)`, the first `n` edges.
    pub fn truncation(&self, n: usize) -> Vec<EdgeRef> {
        (0..n).map(|i| self.edge_at(i)).collect()
    }

    pub fn source(&self, g: &Graph) -> usize {
        g.src(self.edge_at(0))
    }
}

/// The element `prefix · τ>tail(p)` of the tail class of a fixed stream.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ChenElement {
    pub prefix: Vec<EdgeRef>,
    pub tail: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChenElementJson {
    pub prefix: Vec<String>,
    pub tail: usize,
}

/// A finite linear combination of basis elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleVector<B: Ord> {
    terms: BTreeMap<B, Scalar>,
}

impl<B: Ord + Clone> ModuleVector<B> {
    pub fn zero() -> Self {
        ModuleVector {
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(b: B, coeff: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(b, coeff);
        }
        ModuleVector { terms }
    }

    pub fn terms(&self) -> &BTreeMap<B, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `self + k · other`.
    pub fn add_scaled(&self, field: Field, k: &Scalar, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (b, c) in &other.terms {
            let slot = terms.entry(b.clone()).or_insert_with(|| field.zero());
            *slot = field.add(slot, &field.mul(k, c));
        }
        terms.retain(|_, c| !c.is_zero());
        ModuleVector { terms }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VectorTermJson<B> {
    pub basis: B,
    pub coeff: String,
}

/// Linear extension of a monomial action.
fn act_linear<B: Ord + Clone>(
    alg: &Algebra,
    x: &AlgebraElement,
    v: &ModuleVector<B>,
    act: impl Fn(&Monomial, &B) -> Option<B>,
) -> ModuleVector<B> {
    let field = alg.field();
    let mut terms: BTreeMap<B, Scalar> = BTreeMap::new();
    for (m, a) in x.terms() {
        for (b, c) in &v.terms {
            if let Some(out) = act(m, b) {
                let slot = terms.entry(out).or_insert_with(|| field.zero());
                *slot = field.add(slot, &field.mul(a, c));
            }
        }
    }
    terms.retain(|_, c| !c.is_zero());
    ModuleVector { terms }
}

fn same_graph(alg: &Algebra, g: &Graph) -> Result<()> {
    if alg.graph() == g {
        Ok(())
    } else {
        Err(Error::MixedContext)
    }
}

/// The Chen module `V_[p]`.
#[derive(Clone, Debug)]
pub struct ChenModule {
    graph: Graph,
    stream: InfinitePath,
}

impl ChenModule {
    pub fn new(graph: Graph, stream: InfinitePath) -> ChenModule {
        ChenModule { graph, stream }
    }

    pub fn stream(&self) -> &InfinitePath {
        &self.stream
    }

    /// The basis element `p` itself.
    pub fn generator(&self) -> ChenElement {
        ChenElement {
            prefix: Vec::new(),
            tail: 0,
        }
    }

    /// Shortest representation: trailing prefix edges that repeat the edge
    /// before the tail are absorbed into it.
    pub fn canonical(&self, mut prefix: Vec<EdgeRef>, mut tail: usize) -> ChenElement {
        let periodic = match &self.stream {
            InfinitePath::Periodic { prefix: p, period } => Some((p.len(), period.len())),
            InfinitePath::GhStream { .. } => None,
        };
        if let Some((pl, l)) = periodic {
            if tail >= pl + l {
                tail = pl + (tail - pl) % l;
            }
        }
        while let Some(&last) = prefix.last() {
            if tail > 0 && self.stream.edge_at(tail - 1) == last {
                tail -= 1;
            } else if let Some((pl, l)) = periodic.filter(|&(pl, _)| tail == pl) {
                // τ>pl and τ>pl+l are the same tail
                if self.stream.edge_at(pl + l - 1) != last {
                    break;
                }
                tail = pl + l - 1;
            } else {
                break;
            }
            prefix.pop();
        }
        ChenElement { prefix, tail }
    }

    pub fn first_edge(&self, x: &ChenElement) -> EdgeRef {
        x.prefix.first().copied().unwrap_or_else(|| self.stream.edge_at(x.tail))
    }

    pub fn source(&self, x: &ChenElement) -> usize {
        self.graph.src(self.first_edge(x))
    }

    /// `e* · x`.
    pub fn act_ghost(&self, e: EdgeRef, x: &ChenElement) -> Option<ChenElement> {
        if self.first_edge(x) != e {
            return None;
        }
        Some(if x.prefix.is_empty() {
            self.canonical(Vec::new(), x.tail + 1)
        } else {
            ChenElement {
                prefix: x.prefix[1..].to_vec(),
                tail: x.tail,
            }
        })
    }

    /// `p q* · x`.
    pub fn act_monomial(&self, m: &Monomial, x: &ChenElement) -> Option<ChenElement> {
        if self.source(x) != m.q().source {
            return None;
        }
        let mut cur = x.clone();
        for &e in &m.q().edges {
            cur = self.act_ghost(e, &cur)?;
        }
        let mut prefix = m.p().edges.clone();
        prefix.extend_from_slice(&cur.prefix);
        Some(self.canonical(prefix, cur.tail))
    }

    pub fn act(
        &self,
        alg: &Algebra,
        x: &AlgebraElement,
        v: &ModuleVector<ChenElement>,
    ) -> Result<ModuleVector<ChenElement>> {
        same_graph(alg, &self.graph)?;
        Ok(act_linear(alg, x, v, |m, b| self.act_monomial(m, b)))
    }

    pub fn element_json(&self, x: &ChenElement) -> ChenElementJson {
        ChenElementJson {
            prefix: x.prefix.iter().map(|&e| self.graph.edge_name(e)).collect(),
            tail: x.tail,
        }
    }

    pub fn vector_json(&self, v: &ModuleVector<ChenElement>) -> Vec<VectorTermJson<ChenElementJson>> {
        v.terms
            .iter()
            .map(|(b, c)| VectorTermJson {
                basis: self.element_json(b),
                coeff: c.to_string(),
            })
            .collect()
    }
}

/// The module `S_v` on the finite paths ending at an infinite emitter `v`,
/// where every ghost edge kills the trivial path `v`.
#[derive(Clone, Debug)]
pub struct SvModule {
    graph: Graph,
    v: usize,
}

impl SvModule {
    pub fn new(graph: Graph, v: &str) -> Result<SvModule> {
        let id = graph.vertex_id(v)?;
        if !graph.is_infinite_emitter(id) {
            return Err(Error::NotInfiniteEmitter(v.to_string()));
        }
        Ok(SvModule { graph, v: id })
    }

    pub fn generator(&self) -> Path {
        Path::vertex(self.v)
    }

    /// `p q* · β`: strip `q` from the front of `β`, then prepend `p`.
    pub fn act_monomial(&self, m: &Monomial, beta: &Path) -> Option<Path> {
        let q = m.q();
        if q.source != beta.source || !beta.edges.starts_with(&q.edges) {
            return None;
        }
        let mut edges = m.p().edges.clone();
        edges.extend_from_slice(&beta.edges[q.edges.len()..]);
        Some(Path {
            source: m.p().source,
            edges,
        })
    }

    pub fn act(&self, alg: &Algebra, x: &AlgebraElement, v: &ModuleVector<Path>) -> Result<ModuleVector<Path>> {
        same_graph(alg, &self.graph)?;
        Ok(act_linear(alg, x, v, |m, b| self.act_monomial(m, b)))
    }

    pub fn vector_json(&self, v: &ModuleVector<Path>) -> Vec<VectorTermJson<String>> {
        v.terms
            .iter()
            .map(|(b, c)| VectorTermJson {
                basis: self.graph.path_name(b),
                coeff: c.to_string(),
            })
            .collect()
    }
}

/// The bifurcating integers `n` of a path (those where `s(e_n)` emits more
/// than one edge), the kernel generators `f* e*_{n-1}…e₁*` for each other
/// edge `f` at `s(e_n)`, and the idempotents `μ_n = e₁…e_{n-1}(e₁…e_{n-1})*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelData {
    pub bifurcating_integers: Vec<usize>,
    pub generators: Vec<Vec<AlgebraElement>>,
    pub mu: Vec<AlgebraElement>,
    /// False when an ω-bundle at a bifurcation was only sampled.
    pub complete: bool,
}

impl KernelData {
    pub fn to_json(&self, alg: &Algebra) -> serde_json::Value {
        serde_json::json!({
            "bifurcatingIntegers": self.bifurcating_integers,
            "generators": self.generators.iter()
                .map(|gs| gs.iter().map(|x| alg.format(x)).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "mu": self.mu.iter().map(|x| alg.format(x)).collect::<Vec<_>>(),
            "complete": self.complete,
        })
    }
}

pub fn bifurcation_data(alg: &Algebra, p: &InfinitePath, depth: usize) -> Result<KernelData> {
    let g = alg.graph();
    let edges = p.truncation(depth);
    check_edges(g, &edges)?;
    let mut data = KernelData {
        bifurcating_integers: Vec::new(),
        generators: Vec::new(),
        mu: Vec::new(),
        complete: true,
    };
    for n in 1..=depth {
        let en = edges[n - 1];
        let w = g.src(en);
        if g.out_degree(w).is_some_and(|d| d < 2) {
            continue;
        }
        if g.is_infinite_emitter(w) {
            data.complete = false;
        }
        let head = Path {
            source: g.src(edges[0]),
            edges: edges[..n - 1].to_vec(),
        };
        let mut gens = Vec::new();
        for f in g.edges_from(w, depth as u32 + 1) {
            if f == en {
                continue;
            }
            let mut q = head.clone();
            q.edges.push(f);
            let m = alg.monomial(Path::vertex(g.dst(f)), q)?;
            gens.push(alg.from_monomial(m)?);
        }
        let mu = alg.monomial(head.clone(), head)?;
        data.bifurcating_integers.push(n);
        data.generators.push(gens);
        data.mu.push(alg.from_monomial(mu)?);
    }
    Ok(data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::evaluate;
    use crate::fixtures;

    fn chen(g: &Graph, period: &[&str]) -> (Algebra, ChenModule) {
        let names: Vec<String> = period.iter().map(|s| s.to_string()).collect();
        let stream = InfinitePath::rational(g, edges_from_names(g, &names).unwrap()).unwrap();
        (Algebra::new(g.clone()), ChenModule::new(g.clone(), stream))
    }

    fn act_on_generator(alg: &Algebra, m: &ChenModule, src: &str) -> ModuleVector<ChenElement> {
        let one = alg.field().one();
        m.act(alg, &evaluate(alg, src).unwrap(), &ModuleVector::basis(m.generator(), one))
            .unwrap()
    }

    #[test]
    fn loop_stream_is_fixed_by_its_edge() {
        let g = fixtures::single_loop();
        let (alg, m) = chen(&g, &["c"]);
        let p = ModuleVector::basis(m.generator(), alg.field().one());
        assert_eq!(act_on_generator(&alg, &m, "c*"), p);
        assert_eq!(act_on_generator(&alg, &m, "c"), p);
        assert_eq!(act_on_generator(&alg, &m, "v"), p);
    }

    #[test]
    fn toeplitz_ghost_of_exit_kills_the_stream() {
        let g = fixtures::toeplitz();
        let (alg, m) = chen(&g, &["c"]);
        assert!(act_on_generator(&alg, &m, "e*").is_zero());
        assert!(act_on_generator(&alg, &m, "v2").is_zero());
    }

    #[test]
    fn periodic_descriptors_are_canonical() {
        let g = fixtures::single_loop();
        let c = g.edge_ref("c").unwrap();
        let p = InfinitePath::periodic(&g, vec![c, c], vec![c, c]).unwrap();
        assert_eq!(p, InfinitePath::rational(&g, vec![c]).unwrap());
        assert!(p.is_rational());
        let t = fixtures::toeplitz();
        let e = t.edge_ref("e").unwrap();
        assert!(InfinitePath::periodic(&t, vec![], vec![e]).is_err());
        let json = InfinitePathJson::Periodic {
            prefix: vec![],
            period: vec!["c".into()],
        };
        assert_eq!(InfinitePath::from_json(&t, &json).unwrap().to_json(&t), json);
    }

    #[test]
    fn ghstream_prefixes() {
        let g = fixtures::rose(2);
        let json: InfinitePathJson =
            serde_json::from_str(r#"{"kind":"ghstream","g":"g","h":"h"}"#).unwrap();
        let p = InfinitePath::from_json(&g, &json).unwrap();
        let names: Vec<String> = p.truncation(12).iter().map(|&e| g.edge_name(e)).collect();
        assert_eq!(names, ["g", "h", "g", "g", "h", "h", "g", "g", "g", "h", "h", "h"]);
        assert!(!p.is_rational());
        let gg = g.edge_ref("g").unwrap();
        assert!(InfinitePath::ghstream(&g, vec![gg], vec![gg]).is_err());
    }

    #[test]
    fn chen_elements_compare_after_alignment() {
        let g = fixtures::rose(2);
        let p = InfinitePath::ghstream(&g, vec![g.edge_ref("g").unwrap()], vec![g.edge_ref("h").unwrap()]).unwrap();
        let m = ChenModule::new(g.clone(), p);
        let gg = g.edge_ref("g").unwrap();
        // g · τ>1(p) is p itself, since p starts with g
        assert_eq!(m.canonical(vec![gg], 1), m.generator());
        assert_ne!(m.canonical(vec![gg], 2), m.generator());
    }

    #[test]
    fn no_exit_cycle_orbit_has_one_phase_per_edge() {
        let g = fixtures::triangle();
        let (alg, m) = chen(&g, &["x", "y", "z"]);
        let mut seen = std::collections::BTreeSet::new();
        let mut todo = vec![m.generator()];
        while let Some(x) = todo.pop() {
            if !seen.insert(x.clone()) {
                continue;
            }
            for b in g.bundles() {
                let e = g.edge_ref(&b.id).unwrap();
                for mono in [alg.edge_monomial(e), alg.ghost_monomial(e)] {
                    if let Some(y) = m.act_monomial(&mono, &x) {
                        todo.push(y);
                    }
                }
            }
        }
        assert_eq!(seen.len(), 3);
    }

    #[test]
    fn sv_module_rules() {
        let g = fixtures::clock_omega_with_entry();
        let alg = Algebra::new(g.clone());
        let s = SvModule::new(g.clone(), "u").unwrap();
        let u = ModuleVector::basis(s.generator(), alg.field().one());
        let d = s.act(&alg, &evaluate(&alg, "d").unwrap(), &u).unwrap();
        assert_eq!(s.vector_json(&d)[0].basis, "d");
        for src in ["b[0]*", "b[7]*", "b[7].b[7]*", "d*"] {
            assert!(s.act(&alg, &evaluate(&alg, src).unwrap(), &u).unwrap().is_zero(), "{src}");
        }
        let back = s.act(&alg, &evaluate(&alg, "d*").unwrap(), &d).unwrap();
        assert_eq!(back, u);
        assert!(matches!(
            SvModule::new(g, "z"),
            Err(Error::NotInfiniteEmitter(_))
        ));
    }

    #[test]
    fn bifurcations_of_fixture_paths() {
        let g = fixtures::single_loop();
        let alg = Algebra::new(g.clone());
        let p = InfinitePath::rational(&g, vec![g.edge_ref("c").unwrap()]).unwrap();
        assert!(bifurcation_data(&alg, &p, 5).unwrap().bifurcating_integers.is_empty());

        let t = fixtures::toeplitz();
        let alg = Algebra::new(t.clone());
        let p = InfinitePath::rational(&t, vec![t.edge_ref("c").unwrap()]).unwrap();
        let k = bifurcation_data(&alg, &p, 3).unwrap();
        assert_eq!(k.bifurcating_integers, [1, 2, 3]);
        assert_eq!(alg.format(&k.generators[0][0]), "e*");
        assert_eq!(alg.format(&k.generators[1][0]), "e*.c*");
        assert_eq!(alg.format(&k.mu[0]), "v1");
    }
}
