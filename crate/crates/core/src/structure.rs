//! Structural decisions: the cycle order, finite presentation of all simple
//! modules, finiteness of GK-dimension, the matching ideal filtrations and
//! corner classification.

use std::collections::BTreeSet;

use serde::{Serialize, Serializer};
use serde_json::{json, Value};

use crate::algebra::DEFAULT_MAX_BASIS;
use crate::closures::{enumerate_hs_sets_capped, quotient, saturated_closure, QuotientSpec, DEFAULT_MAX_VERTICES_HS};
use crate::error::{Error, Result};
use crate::graph::{
    condition_k, condition_l, enumerate_cycles_capped, line_point_flags, line_points, tree_graph, Cycle, Graph,
    Multiplicity, VertexSet, DEFAULT_MAX_CYCLES,
};

/// Resource caps shared by the enumerating procedures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_cycles: usize,
    pub max_vertices_hs: usize,
    pub max_basis: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_cycles: DEFAULT_MAX_CYCLES,
            max_vertices_hs: DEFAULT_MAX_VERTICES_HS,
            max_basis: DEFAULT_MAX_BASIS,
        }
    }
}

/// Cycles ordered by `c ≥ c'` when some path runs from a vertex of `c` to a
/// vertex of `c'`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CyclePoset {
    pub cycles: Vec<String>,
    pub geq: Vec<Vec<bool>>,
    pub antisymmetric: bool,
    /// Number of cycles in a longest strictly descending chain; `None` when
    /// the relation is not antisymmetric.
    pub longest_chain: Option<usize>,
    pub minimal_cycles: Vec<String>,
    pub no_exit_cycles: Vec<String>,
    #[serde(skip)]
    pub raw: Vec<Cycle>,
}

impl CyclePoset {
    /// A pair `c ≠ c'` with `c ≥ c' ≥ c`.
    pub fn symmetric_pair(&self) -> Option<(usize, usize)> {
        let n = self.raw.len();
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .find(|&(i, j)| self.geq[i][j] && self.geq[j][i])
    }

    fn strictly_above(&self, i: usize, j: usize) -> bool {
        i != j && self.geq[i][j] && !self.geq[j][i]
    }
}

pub fn cycle_poset(g: &Graph, limits: &Limits) -> Result<CyclePoset> {
    let cycles = enumerate_cycles_capped(g, limits.max_cycles)?;
    let n = cycles.len();
    let reach: Vec<Vec<bool>> = cycles.iter().map(|c| g.reach_from(c.vertices(g))).collect();
    let geq: Vec<Vec<bool>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| cycles[j].vertices(g).iter().any(|&v| reach[i][v]))
                .collect()
        })
        .collect();
    let mut poset = CyclePoset {
        cycles: cycles.iter().map(|c| c.name(g)).collect(),
        geq,
        antisymmetric: true,
        longest_chain: None,
        minimal_cycles: Vec::new(),
        no_exit_cycles: cycles.iter().filter(|c| !c.has_exit(g)).map(|c| c.name(g)).collect(),
        raw: cycles,
    };
    poset.antisymmetric = poset.symmetric_pair().is_none();
    poset.minimal_cycles = (0..n)
        .filter(|&i| !(0..n).any(|j| poset.strictly_above(i, j)))
        .map(|i| poset.cycles[i].clone())
        .collect();
    if poset.antisymmetric {
        // longest path in the strict order, memoized from the bottom up
        let mut height: Vec<Option<usize>> = vec![None; n];
        fn visit(p: &CyclePoset, i: usize, height: &mut Vec<Option<usize>>) -> usize {
            if let Some(h) = height[i] {
                return h;
            }
            let below = (0..p.raw.len())
                .filter(|&j| p.strictly_above(i, j))
                .map(|j| visit(p, j, height))
                .max()
                .unwrap_or(0);
            height[i] = Some(below + 1);
            below + 1
        }
        poset.longest_chain = Some((0..n).map(|i| visit(&poset, i, &mut height)).max().unwrap_or(0));
    }
    Ok(poset)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ReasonCode {
    NotRowFinite,
    GeqNotAntisymmetric,
    #[serde(rename = "COND_2C_FAIL")]
    Cond2cFail,
    #[serde(rename = "COND_2D_FAIL")]
    Cond2dFail,
    AcyclicSocleFail,
    OkAcyclic,
    OkCyclic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Reason {
    pub code: ReasonCode,
    pub witness: Value,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FpVerdict {
    pub all_finitely_presented: bool,
    pub reasons: Vec<Reason>,
    pub notes: Vec<String>,
}

impl FpVerdict {
    pub fn has(&self, code: ReasonCode) -> bool {
        self.reasons.iter().any(|r| r.code == code)
    }
}

fn omega_witness(g: &Graph) -> Option<Value> {
    g.omega_bundles().next().map(|b| {
        json!({ "bundle": b.id, "vertex": g.vertex_name(b.src) })
    })
}

fn pair_witness(g: &Graph, poset: &CyclePoset, i: usize, j: usize) -> Value {
    let vi: BTreeSet<usize> = poset.raw[i].vertices(g).into_iter().collect();
    let shared: Vec<&str> = poset.raw[j]
        .vertices(g)
        .into_iter()
        .filter(|v| vi.contains(v))
        .map(|v| g.vertex_name(v))
        .collect();
    json!({ "cycles": [poset.cycles[i], poset.cycles[j]], "sharedVertices": shared })
}

/// Whether every simple module is finitely presented.
///
/// Acyclic graphs need the saturated closure of the line points to be all
/// of `E⁰`. Graphs with cycles need (a) row-finiteness, (b) an
/// antisymmetric cycle order, (c) every infinite path to contain a line
/// point or be tail-equivalent to a rational path, and (d) every proper
/// hereditary saturated set containing the line points to leave a quotient
/// with a no-exit cycle and no line points.
pub fn decide_fp(g: &Graph, limits: &Limits) -> Result<FpVerdict> {
    let mut verdict = FpVerdict {
        all_finitely_presented: false,
        reasons: Vec::new(),
        notes: Vec::new(),
    };
    if let Some(witness) = omega_witness(g) {
        verdict.reasons.push(Reason {
            code: ReasonCode::NotRowFinite,
            witness,
        });
        return Ok(verdict);
    }
    let poset = cycle_poset(g, limits)?;
    let lines = line_points(g);
    if poset.raw.is_empty() {
        let closure = saturated_closure(g, &lines)?.vertices;
        let missing: Vec<&String> = g.vertex_names().iter().filter(|v| !closure.contains(*v)).collect();
        if missing.is_empty() {
            verdict.all_finitely_presented = true;
            verdict.reasons.push(Reason {
                code: ReasonCode::OkAcyclic,
                witness: json!({ "linePoints": lines }),
            });
        } else {
            verdict.reasons.push(Reason {
                code: ReasonCode::AcyclicSocleFail,
                witness: json!({ "outsideClosure": missing }),
            });
        }
        return Ok(verdict);
    }
    verdict.notes.push(
        "with finitely many cycles every descending chain is finite, so the artinian condition reduces to antisymmetry"
            .into(),
    );
    if let Some((i, j)) = poset.symmetric_pair() {
        verdict.reasons.push(Reason {
            code: ReasonCode::GeqNotAntisymmetric,
            witness: pair_witness(g, &poset, i, j),
        });
        return Ok(verdict);
    }
    verdict.notes.push(
        "the infinite-path condition holds automatically: on a finite graph every infinite path ends in a cycle or reaches a line point"
            .into(),
    );
    for h in enumerate_hs_sets_capped(g, limits.max_vertices_hs)? {
        if h.vertices.len() == g.vertex_count() || !lines.is_subset(&h.vertices) {
            continue;
        }
        let q = quotient(g, &QuotientSpec::plain(h.clone()))?;
        let q_lines = line_points(&q);
        let q_cycles = enumerate_cycles_capped(&q, limits.max_cycles)?;
        let has_no_exit = q_cycles.iter().any(|c| !c.has_exit(&q));
        if !has_no_exit || !q_lines.is_empty() {
            verdict.reasons.push(Reason {
                code: ReasonCode::Cond2dFail,
                witness: json!({
                    "h": h.vertices,
                    "quotientHasNoExitCycle": has_no_exit,
                    "quotientLinePoints": q_lines,
                }),
            });
            return Ok(verdict);
        }
    }
    verdict.all_finitely_presented = true;
    verdict.reasons.push(Reason {
        code: ReasonCode::OkCyclic,
        witness: json!({ "cycles": poset.cycles }),
    });
    Ok(verdict)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GkVerdict {
    pub finite: bool,
    pub longest_chain: Option<usize>,
    /// `2d - 1` for `d ≥ 1`, and 0 for acyclic graphs.
    pub lower_bound: Option<usize>,
    pub witness: Option<Value>,
    pub warnings: Vec<String>,
}

/// A closed path through `b[0]` and one through `b[1]`, for an ω-bundle
/// `b` on a closed path.
fn omega_cycle_witness(g: &Graph, bundle: &str) -> Value {
    let b = g.bundle(bundle).expect("bundle exists");
    // shortest return path from r(b) to s(b), by breadth-first search
    let n = g.vertex_count();
    let mut prev: Vec<Option<crate::graph::EdgeRef>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut queue = std::collections::VecDeque::from([b.dst]);
    seen[b.dst] = true;
    while let Some(x) = queue.pop_front() {
        for e in g.edges_from(x, 1) {
            let y = g.dst(e);
            if !seen[y] {
                seen[y] = true;
                prev[y] = Some(e);
                queue.push_back(y);
            }
        }
    }
    let mut back = Vec::new();
    let mut at = b.src;
    while at != b.dst {
        let e = prev[at].expect("r(b) reaches s(b)");
        back.push(g.edge_name(e));
        at = g.src(e);
    }
    back.reverse();
    let close = |slot: u32| {
        let mut names = vec![format!("{}[{slot}]", b.id)];
        names.extend(back.iter().cloned());
        names.join(".")
    };
    json!({ "cycles": [close(0), close(1)], "bundle": b.id })
}

/// GK-dimension is finite exactly when the cycle order is antisymmetric.
pub fn decide_gk(g: &Graph, limits: &Limits) -> Result<GkVerdict> {
    let mut verdict = GkVerdict {
        finite: false,
        longest_chain: None,
        lower_bound: None,
        witness: None,
        warnings: Vec::new(),
    };
    if !g.is_row_finite() {
        verdict
            .warnings
            .push("graph is not row-finite; the verdict only inspects the listed cycle structure".into());
    }
    let poset = match cycle_poset(g, limits) {
        Ok(p) => p,
        Err(Error::InfinitelyManyCycles { bundle }) => {
            verdict.witness = Some(omega_cycle_witness(g, &bundle));
            return Ok(verdict);
        }
        Err(e) => return Err(e),
    };
    if let Some((i, j)) = poset.symmetric_pair() {
        verdict.witness = Some(pair_witness(g, &poset, i, j));
        return Ok(verdict);
    }
    let d = poset.longest_chain.expect("antisymmetric posets have a chain length");
    verdict.finite = true;
    verdict.longest_chain = Some(d);
    verdict.lower_bound = Some(if d == 0 { 0 } else { 2 * d - 1 });
    Ok(verdict)
}

/// A finite cardinal or `ω`, serialized as a number or `"omega"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cardinality {
    Finite(u64),
    Omega,
}

impl Serialize for Cardinality {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Cardinality::Finite(k) => s.serialize_u64(*k),
            Cardinality::Omega => s.serialize_str("omega"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LaurentBlock {
    pub cycle: String,
    pub index_cardinality: Cardinality,
}

/// What each step of a filtration adds, over the previous step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum Layer {
    /// The ideal generated by the line points.
    Socle { line_points: VertexSet },
    /// An ideal generated by acyclic vertices.
    Vnr,
    /// The ideal of one no-exit cycle, a matrix ring over `K[x,x⁻¹]`.
    #[serde(rename_all = "camelCase")]
    LaurentMatrix {
        cycle: String,
        index_cardinality: Cardinality,
    },
    /// Acyclic vertices and no-exit cycles added together.
    #[serde(rename_all = "camelCase")]
    Mixed {
        acyclic: VertexSet,
        cycles: Vec<LaurentBlock>,
    },
}

/// An ascending chain of hereditary saturated sets ending in `E⁰`;
/// `layers[i]` describes `chain[i]` over `chain[i-1]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Filtration {
    pub chain: Vec<VertexSet>,
    pub layers: Vec<Layer>,
}

/// The size of the matrix ring attached to a no-exit cycle `c` of `q`:
/// the number of paths ending at the base of `c` that meet the base only
/// at their end, or `ω` when another cycle or an ω-bundle feeds the base.
pub fn index_cardinality(q: &Graph, c: &Cycle) -> Result<Cardinality> {
    let base = c.base(q);
    let feeders = q.reach_to([base]);
    let on_c: BTreeSet<usize> = c.vertices(q).into_iter().collect();
    let cyclic = q.on_closed_path();
    let pumped = (0..q.vertex_count()).any(|x| feeders[x] && cyclic[x] && !on_c.contains(&x))
        || q.omega_bundles().any(|b| feeders[b.dst]);
    if pumped {
        return Ok(Cardinality::Omega);
    }
    let overflow = || Error::ResourceCap {
        what: "matrix index count exceeds 64 bits",
        limit: 64,
    };
    // paths[x] = paths from x to the base not meeting the base before the end
    let mut memo: Vec<Option<u64>> = vec![None; q.vertex_count()];
    fn count(
        q: &Graph,
        x: usize,
        base: usize,
        feeders: &[bool],
        memo: &mut Vec<Option<u64>>,
        overflow: &dyn Fn() -> Error,
    ) -> Result<u64> {
        if let Some(k) = memo[x] {
            return Ok(k);
        }
        let mut total = 0u64;
        for &b in q.out_bundles(x) {
            let bundle = &q.bundles()[b];
            if bundle.dst != base && !feeders[bundle.dst] {
                continue;
            }
            let m = match bundle.mult {
                Multiplicity::Finite(m) => m as u64,
                Multiplicity::Omega => unreachable!("ω-bundles feeding the base were excluded"),
            };
            let tail = if bundle.dst == base {
                1
            } else {
                count(q, bundle.dst, base, feeders, memo, overflow)?
            };
            total = total.checked_add(m.checked_mul(tail).ok_or_else(overflow)?).ok_or_else(overflow)?;
        }
        memo[x] = Some(total);
        Ok(total)
    }
    let mut total = 1u64;
    for x in (0..q.vertex_count()).filter(|&x| x != base && feeders[x]) {
        total = total
            .checked_add(count(q, x, base, &feeders, &mut memo, &overflow)?)
            .ok_or_else(overflow)?;
    }
    Ok(Cardinality::Finite(total))
}

fn quotient_by(g: &Graph, h: &VertexSet) -> Result<Graph> {
    let hs = crate::closures::HsSet::new(g, h.clone())?;
    quotient(g, &QuotientSpec::plain(hs))
}

fn no_exit_cycles(q: &Graph, limits: &Limits) -> Result<Vec<Cycle>> {
    let mut cycles: Vec<Cycle> = enumerate_cycles_capped(q, limits.max_cycles)?
        .into_iter()
        .filter(|c| !c.has_exit(q))
        .collect();
    cycles.sort_by_key(|c| c.name(q));
    Ok(cycles)
}

/// The chain `Soc(L) = I₁ < I₂ < … < L` whose successive quotients are
/// matrix rings over `K[x,x⁻¹]`, one no-exit cycle at a time.
pub fn fp_filtration(g: &Graph, limits: &Limits) -> Result<Filtration> {
    if !decide_fp(g, limits)?.all_finitely_presented {
        return Err(Error::Precondition(
            "the filtration needs every simple module to be finitely presented".into(),
        ));
    }
    let lines = line_points(g);
    let mut h = saturated_closure(g, &lines)?.vertices;
    let mut out = Filtration {
        chain: vec![h.clone()],
        layers: vec![Layer::Socle { line_points: lines }],
    };
    while h.len() < g.vertex_count() {
        let q = quotient_by(g, &h)?;
        let c = no_exit_cycles(&q, limits)?
            .into_iter()
            .next()
            .ok_or_else(|| Error::Precondition("quotient without a no-exit cycle".into()))?;
        let card = index_cardinality(&q, &c)?;
        let mut seed = h.clone();
        seed.extend(c.vertices(&q).into_iter().map(|v| q.vertex_name(v).to_string()));
        h = saturated_closure(g, &seed)?.vertices;
        out.chain.push(h.clone());
        out.layers.push(Layer::LaurentMatrix {
            cycle: c.name(&q),
            index_cardinality: card,
        });
    }
    Ok(out)
}

/// The finite chain `I₀ < I₁ < … < L` for graphs of finite GK-dimension:
/// `I₀` is generated by the ranges of exits of minimal cycles, and each
/// later step adds the acyclic vertices and no-exit cycles of the quotient.
pub fn gk_filtration(g: &Graph, limits: &Limits) -> Result<Filtration> {
    if !decide_gk(g, limits)?.finite {
        return Err(Error::Precondition(
            "the filtration needs finite GK-dimension".into(),
        ));
    }
    let poset = cycle_poset(g, limits)?;
    let all: VertexSet = g.vertex_names().iter().cloned().collect();
    if poset.raw.is_empty() {
        return Ok(Filtration {
            chain: vec![all],
            layers: vec![Layer::Vnr],
        });
    }
    let mut seed = VertexSet::new();
    for c in poset.raw.iter().filter(|c| poset.minimal_cycles.contains(&c.name(g))) {
        let on_c: BTreeSet<_> = c.edges().iter().copied().collect();
        for v in c.vertices(g) {
            for e in g.edges_from(v, 1) {
                if !on_c.contains(&e) {
                    seed.insert(g.vertex_name(g.dst(e)).to_string());
                }
            }
        }
    }
    let mut h = saturated_closure(g, &seed)?.vertices;
    let mut out = Filtration {
        chain: vec![h.clone()],
        layers: vec![Layer::Vnr],
    };
    while h.len() < g.vertex_count() {
        let q = quotient_by(g, &h)?;
        let cyclic = q.on_closed_path();
        let tainted = q.reach_to((0..q.vertex_count()).filter(|&v| cyclic[v]));
        let acyclic: VertexSet = (0..q.vertex_count())
            .filter(|&v| !tainted[v])
            .map(|v| q.vertex_name(v).to_string())
            .filter(|v| g.has_vertex(v))
            .collect();
        let mut blocks = Vec::new();
        let mut next = h.clone();
        next.extend(acyclic.iter().cloned());
        for c in no_exit_cycles(&q, limits)? {
            blocks.push(LaurentBlock {
                cycle: c.name(&q),
                index_cardinality: index_cardinality(&q, &c)?,
            });
            next.extend(c.vertices(&q).into_iter().map(|v| q.vertex_name(v).to_string()));
        }
        let next = saturated_closure(g, &next)?.vertices;
        if next == h {
            return Err(Error::Precondition("the filtration does not advance".into()));
        }
        h = next;
        out.chain.push(h.clone());
        out.layers.push(Layer::Mixed { acyclic, cycles: blocks });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CornerReport {
    pub vertex: String,
    pub is_line_point: bool,
    pub no_exit_cycle_tree: bool,
    pub acyclic: bool,
    pub condition_l: bool,
    pub condition_k: bool,
    pub von_neumann_regular: bool,
    pub zorn: bool,
    pub weakly_regular: bool,
    /// `vLv ≅ K` or `vLv ≅ K[x,x⁻¹]` when the tree forces it.
    pub corner: Option<String>,
}

/// Ring-theoretic properties of `vLv` read off the tree `T_E(v)`.
pub fn corner_report(g: &Graph, v: &str) -> Result<CornerReport> {
    let id = g.vertex_id(v)?;
    let t = tree_graph(g, v)?;
    let is_line_point = line_point_flags(g)[id];
    // every tree vertex emits exactly one edge: a line running into a cycle
    let no_exit_cycle_tree = (0..t.vertex_count()).all(|x| t.out_degree(x) == Some(1));
    let acyclic = !t.on_closed_path().iter().any(|&c| c);
    let l = condition_l(&t)?;
    let k = condition_k(&t)?;
    let corner = if is_line_point {
        Some("vLv ≅ K".to_string())
    } else if no_exit_cycle_tree {
        Some("vLv ≅ K[x,x⁻¹]".to_string())
    } else {
        None
    };
    Ok(CornerReport {
        vertex: v.to_string(),
        is_line_point,
        no_exit_cycle_tree,
        acyclic,
        condition_l: l,
        condition_k: k,
        von_neumann_regular: acyclic,
        zorn: l,
        weakly_regular: k,
        corner,
    })
}
