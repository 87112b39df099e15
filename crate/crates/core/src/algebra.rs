//! Exact symbolic Leavitt path algebras.
//!
//! Elements are finite combinations of monomials `p q*` kept in a normal
//! form: every regular vertex `w` has a chosen special edge `γ_w`, and no
//! monomial may end in `γ_w γ_w*`. Such a monomial is rewritten with the
//! second Cuntz–Krieger relation,
//!
//! ```text
//! p' γ γ* q'*  =  p' q'*  -  Σ_{f ≠ γ, s(f) = w} p' f f* q'*
//! ```
//!
//! which strictly shortens the offending term, so rewriting terminates, and
//! a monomial has exactly one junction, so the result does not depend on
//! the order in which terms are processed.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::hash::{DefaultHasher, Hash, Hasher};

use num_traits::Signed;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{EdgeRef, Graph, Path};
use crate::scalar::{Field, Scalar};

pub const DEFAULT_MAX_BASIS: usize = 1_000_000;

/// The monomial `p q*`, with `r(p) = r(q)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    p: Path,
    q: Path,
}

impl Monomial {
    pub fn p(&self) -> &Path {
        &self.p
    }

    pub fn q(&self) -> &Path {
        &self.q
    }

    pub fn degree(&self) -> i64 {
        self.p.len() as i64 - self.q.len() as i64
    }

    pub fn total_length(&self) -> usize {
        self.p.len() + self.q.len()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.p.edges.cmp(&other.p.edges))
            .then_with(|| self.q.edges.cmp(&other.q.edges))
            .then_with(|| self.p.source.cmp(&other.p.source))
            .then_with(|| self.q.source.cmp(&other.q.source))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// One outgoing edge per regular vertex, used to orient the CK-2 rewrite.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpecialEdgeChoice {
    chosen: Vec<Option<EdgeRef>>,
}

impl SpecialEdgeChoice {
    /// The smallest outgoing edge at every regular vertex.
    pub fn smallest(g: &Graph) -> SpecialEdgeChoice {
        SpecialEdgeChoice {
            chosen: (0..g.vertex_count())
                .map(|v| {
                    if g.is_regular(v) {
                        g.edges_from(v, 0).into_iter().min()
                    } else {
                        None
                    }
                })
                .collect(),
        }
    }

    /// The largest outgoing edge at every regular vertex.
    pub fn largest(g: &Graph) -> SpecialEdgeChoice {
        SpecialEdgeChoice {
            chosen: (0..g.vertex_count())
                .map(|v| {
                    if g.is_regular(v) {
                        g.edges_from(v, 0).into_iter().max()
                    } else {
                        None
                    }
                })
                .collect(),
        }
    }

    /// Overrides the choice at `s(e)`.
    pub fn with(mut self, g: &Graph, edge: &str) -> Result<SpecialEdgeChoice> {
        let e = g.edge_ref(edge)?;
        let v = g.src(e);
        if !g.is_regular(v) {
            return Err(Error::Precondition(format!(
                "`{}` is not a regular vertex",
                g.vertex_name(v)
            )));
        }
        self.chosen[v] = Some(e);
        Ok(self)
    }

    pub fn get(&self, v: usize) -> Option<EdgeRef> {
        self.chosen.get(v).copied().flatten()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraElement {
    ctx: u64,
    terms: BTreeMap<Monomial, Scalar>,
}

impl AlgebraElement {
    pub fn terms(&self) -> &BTreeMap<Monomial, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TermJson {
    pub p: Vec<String>,
    pub q: Vec<String>,
    pub coeff: String,
    pub vertex: String,
}

/// An algebra context: graph, coefficient field and normal-form orientation.
#[derive(Clone, Debug)]
pub struct Algebra {
    graph: Graph,
    field: Field,
    special: SpecialEdgeChoice,
    id: u64,
}

impl Algebra {
    pub fn new(graph: Graph) -> Algebra {
        let special = SpecialEdgeChoice::smallest(&graph);
        Algebra::with_parts(graph, Field::Rational, special)
    }

    pub fn with_field(graph: Graph, field: Field) -> Algebra {
        let special = SpecialEdgeChoice::smallest(&graph);
        Algebra::with_parts(graph, field, special)
    }

    pub fn with_parts(graph: Graph, field: Field, special: SpecialEdgeChoice) -> Algebra {
        let mut h = DefaultHasher::new();
        serde_json::to_string(&graph.to_json())
            .expect("graph serializes")
            .hash(&mut h);
        field.hash(&mut h);
        special.hash(&mut h);
        Algebra {
            graph,
            field,
            special,
            id: h.finish(),
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn special(&self) -> &SpecialEdgeChoice {
        &self.special
    }

    fn check(&self, a: &AlgebraElement) -> Result<()> {
        if a.ctx == self.id {
            Ok(())
        } else {
            Err(Error::MixedContext)
        }
    }

    pub fn zero(&self) -> AlgebraElement {
        AlgebraElement {
            ctx: self.id,
            terms: BTreeMap::new(),
        }
    }

    /// Validates `p q*` as a monomial of this graph.
    pub fn monomial(&self, p: Path, q: Path) -> Result<Monomial> {
        self.graph.check_path(&p)?;
        self.graph.check_path(&q)?;
        if self.graph.path_range(&p) != self.graph.path_range(&q) {
            return Err(Error::InvalidPath(format!(
                "r({}) differs from r({})",
                self.graph.path_name(&p),
                self.graph.path_name(&q)
            )));
        }
        Ok(Monomial { p, q })
    }

    pub fn vertex_monomial(&self, v: usize) -> Monomial {
        Monomial {
            p: Path::vertex(v),
            q: Path::vertex(v),
        }
    }

    pub fn edge_monomial(&self, e: EdgeRef) -> Monomial {
        let r = self.graph.dst(e);
        Monomial {
            p: Path {
                source: self.graph.src(e),
                edges: vec![e],
            },
            q: Path::vertex(r),
        }
    }

    pub fn ghost_monomial(&self, e: EdgeRef) -> Monomial {
        let r = self.graph.dst(e);
        Monomial {
            p: Path::vertex(r),
            q: Path {
                source: self.graph.src(e),
                edges: vec![e],
            },
        }
    }

    /// `coeff · m`, brought to normal form.
    pub fn element(&self, m: Monomial, coeff: Scalar) -> Result<AlgebraElement> {
        self.monomial(m.p.clone(), m.q.clone())?;
        self.normalize_terms(vec![(m, coeff)])
    }

    pub fn from_monomial(&self, m: Monomial) -> Result<AlgebraElement> {
        self.element(m, self.field.one())
    }

    pub fn vertex(&self, name: &str) -> Result<AlgebraElement> {
        let v = self.graph.vertex_id(name)?;
        self.from_monomial(self.vertex_monomial(v))
    }

    pub fn edge(&self, address: &str) -> Result<AlgebraElement> {
        let e = self.graph.edge_ref(address)?;
        self.from_monomial(self.edge_monomial(e))
    }

    pub fn ghost(&self, address: &str) -> Result<AlgebraElement> {
        let e = self.graph.edge_ref(address)?;
        self.from_monomial(self.ghost_monomial(e))
    }

    /// Whether `m` avoids the pattern `γ_w γ_w*` at its junction.
    pub fn is_normal(&self, m: &Monomial) -> bool {
        match (m.p.edges.last(), m.q.edges.last()) {
            (Some(&a), Some(&b)) if a == b => self.special.get(self.graph.src(a)) != Some(a),
            _ => true,
        }
    }

    /// One CK-2 step on a monomial that is not normal.
    fn rewrite(&self, m: &Monomial, coeff: &Scalar, out: &mut Vec<(Monomial, Scalar)>) {
        let gamma = *m.p.edges.last().expect("non-normal monomials end in an edge pair");
        let w = self.graph.src(gamma);
        let mut p = m.p.clone();
        let mut q = m.q.clone();
        p.edges.pop();
        q.edges.pop();
        let neg = self.field.neg(coeff);
        for f in self.graph.edges_from(w, 0) {
            if f == gamma {
                continue;
            }
            let mut pf = p.clone();
            let mut qf = q.clone();
            pf.edges.push(f);
            qf.edges.push(f);
            out.push((Monomial { p: pf, q: qf }, neg.clone()));
        }
        out.push((Monomial { p, q }, coeff.clone()));
    }

    pub fn normalize_terms(&self, terms: Vec<(Monomial, Scalar)>) -> Result<AlgebraElement> {
        self.normalize_terms_with(terms, &mut |len| len - 1)
    }

    /// Normal form of a sum of monomials; `pick(len)` chooses which pending
    /// term is processed next.
    pub fn normalize_terms_with(
        &self,
        terms: Vec<(Monomial, Scalar)>,
        pick: &mut dyn FnMut(usize) -> usize,
    ) -> Result<AlgebraElement> {
        for (m, _) in &terms {
            self.monomial(m.p.clone(), m.q.clone())?;
        }
        let mut pending = terms;
        let mut acc: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        while !pending.is_empty() {
            let i = pick(pending.len()).min(pending.len() - 1);
            let (m, c) = pending.swap_remove(i);
            if c.is_zero() {
                continue;
            }
            if self.is_normal(&m) {
                let slot = acc.entry(m).or_insert_with(|| self.field.zero());
                *slot = self.field.add(slot, &c);
            } else {
                self.rewrite(&m, &c, &mut pending);
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(AlgebraElement {
            ctx: self.id,
            terms: acc,
        })
    }

    /// `(p₁ q₁*)(p₂ q₂*)` by the first Cuntz–Krieger relation, before
    /// normalization. `None` when the product vanishes.
    pub fn contract(&self, a: &Monomial, b: &Monomial) -> Option<Monomial> {
        if a.q.source != b.p.source {
            return None;
        }
        let (q, r) = (&a.q.edges, &b.p.edges);
        if r.starts_with(q) {
            let mut p = a.p.clone();
            p.edges.extend_from_slice(&r[q.len()..]);
            Some(Monomial { p, q: b.q.clone() })
        } else if q.starts_with(r) {
            let mut s = b.q.clone();
            s.edges.extend_from_slice(&q[r.len()..]);
            Some(Monomial { p: a.p.clone(), q: s })
        } else {
            None
        }
    }

    pub fn add(&self, a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement> {
        self.check(a)?;
        self.check(b)?;
        let mut terms = a.terms.clone();
        for (m, c) in &b.terms {
            let slot = terms.entry(m.clone()).or_insert_with(|| self.field.zero());
            *slot = self.field.add(slot, c);
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(AlgebraElement {
            ctx: self.id,
            terms,
        })
    }

    pub fn scale(&self, k: &Scalar, a: &AlgebraElement) -> Result<AlgebraElement> {
        self.check(a)?;
        let mut terms = BTreeMap::new();
        for (m, c) in &a.terms {
            let v = self.field.mul(k, c);
            if !v.is_zero() {
                terms.insert(m.clone(), v);
            }
        }
        Ok(AlgebraElement {
            ctx: self.id,
            terms,
        })
    }

    pub fn neg(&self, a: &AlgebraElement) -> Result<AlgebraElement> {
        self.scale(&self.field.neg(&self.field.one()), a)
    }

    pub fn sub(&self, a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement> {
        self.add(a, &self.neg(b)?)
    }

    pub fn multiply(&self, a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement> {
        self.multiply_with(a, b, &mut |len| len - 1)
    }

    pub fn multiply_with(
        &self,
        a: &AlgebraElement,
        b: &AlgebraElement,
        pick: &mut dyn FnMut(usize) -> usize,
    ) -> Result<AlgebraElement> {
        self.check(a)?;
        self.check(b)?;
        let mut raw = Vec::new();
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                if let Some(m) = self.contract(ma, mb) {
                    raw.push((m, self.field.mul(ca, cb)));
                }
            }
        }
        self.normalize_terms_with(raw, pick)
    }

    /// Splits `a` into homogeneous components by `|p| - |q|`.
    pub fn degree_components(&self, a: &AlgebraElement) -> Result<BTreeMap<i64, AlgebraElement>> {
        self.check(a)?;
        let mut out: BTreeMap<i64, AlgebraElement> = BTreeMap::new();
        for (m, c) in &a.terms {
            out.entry(m.degree())
                .or_insert_with(|| self.zero())
                .terms
                .insert(m.clone(), c.clone());
        }
        Ok(out)
    }

    fn require_row_finite(&self) -> Result<()> {
        if self.graph.is_row_finite() {
            Ok(())
        } else {
            Err(Error::Precondition(
                "basis enumeration needs a row-finite graph".into(),
            ))
        }
    }

    /// Paths of length `0..=max_len`, grouped by range vertex.
    fn paths_by_range(&self, max_len: usize, cap: usize) -> Result<Vec<Vec<Path>>> {
        let g = &self.graph;
        let mut by_range = vec![Vec::new(); g.vertex_count()];
        let mut layer: Vec<Path> = (0..g.vertex_count()).map(Path::vertex).collect();
        let mut total = 0usize;
        for len in 0..=max_len {
            for p in &layer {
                by_range[g.path_range(p)].push(p.clone());
            }
            total += layer.len();
            if total > cap {
                return Err(Error::ResourceCap {
                    what: "path count during basis enumeration",
                    limit: cap,
                });
            }
            if len == max_len {
                break;
            }
            let mut next = Vec::new();
            for p in &layer {
                for e in g.edges_from(g.path_range(p), 0) {
                    let mut longer = p.clone();
                    longer.edges.push(e);
                    next.push(longer);
                }
            }
            layer = next;
        }
        Ok(by_range)
    }

    /// All normal monomials with `|p| + |q| ≤ max_total_length`, in
    /// canonical order.
    pub fn enumerate_basis(&self, max_total_length: usize, cap: usize) -> Result<Vec<Monomial>> {
        self.require_row_finite()?;
        let by_range = self.paths_by_range(max_total_length, cap)?;
        let mut out = Vec::new();
        for paths in &by_range {
            for p in paths {
                for q in paths {
                    if p.len() + q.len() > max_total_length {
                        continue;
                    }
                    let m = Monomial {
                        p: p.clone(),
                        q: q.clone(),
                    };
                    if self.is_normal(&m) {
                        out.push(m);
                        if out.len() > cap {
                            return Err(Error::ResourceCap {
                                what: "basis size",
                                limit: cap,
                            });
                        }
                    }
                }
            }
        }
        out.sort();
        Ok(out)
    }

    /// `dim V_n` for `n = 0..=n_max`, where `V` is spanned by the vertices,
    /// edges and ghost edges: the number of normal monomials with
    /// `|p| + |q| ≤ n`. Counted without enumerating monomials.
    pub fn growth_profile(&self, n_max: usize) -> Result<Vec<u64>> {
        self.require_row_finite()?;
        let g = &self.graph;
        let overflow = || Error::ResourceCap {
            what: "growth count exceeds 64 bits",
            limit: 64,
        };
        let nv = g.vertex_count();
        // counts[w][k] = number of paths of length k ending at w
        let mut counts = vec![vec![0u64; n_max + 1]; nv];
        for row in counts.iter_mut() {
            row[0] = 1;
        }
        for k in 1..=n_max {
            for w in 0..nv {
                let mut total = 0u64;
                for &b in g.in_bundles(w) {
                    let bundle = &g.bundles()[b];
                    let mult = match bundle.mult {
                        crate::graph::Multiplicity::Finite(m) => m as u64,
                        crate::graph::Multiplicity::Omega => unreachable!("row-finite"),
                    };
                    let add = mult
                        .checked_mul(counts[bundle.src][k - 1])
                        .ok_or_else(overflow)?;
                    total = total.checked_add(add).ok_or_else(overflow)?;
                }
                counts[w][k] = total;
            }
        }
        // pairs[w][n] = #{(p, q) ending at w : |p| + |q| ≤ n}
        let pairs = |w: usize, n: usize| -> Result<u64> {
            let mut total = 0u64;
            for a in 0..=n {
                for b in 0..=(n - a) {
                    let prod = counts[w][a].checked_mul(counts[w][b]).ok_or_else(overflow)?;
                    total = total.checked_add(prod).ok_or_else(overflow)?;
                }
            }
            Ok(total)
        };
        let mut out = Vec::with_capacity(n_max + 1);
        for n in 0..=n_max {
            let mut dim = 0u64;
            for w in 0..nv {
                dim = dim.checked_add(pairs(w, n)?).ok_or_else(overflow)?;
                if n >= 2 && self.special.get(w).is_some() {
                    dim -= pairs(w, n - 2)?;
                }
            }
            out.push(dim);
        }
        Ok(out)
    }

    pub fn monomial_string(&self, m: &Monomial) -> String {
        let g = &self.graph;
        if m.p.is_empty() && m.q.is_empty() {
            return g.vertex_name(m.p.source).to_string();
        }
        let mut parts: Vec<String> = m.p.edges.iter().map(|&e| g.edge_name(e)).collect();
        parts.extend(m.q.edges.iter().rev().map(|&e| format!("{}*", g.edge_name(e))));
        parts.join(".")
    }

    /// Human-readable form; parses back with the expression grammar.
    pub fn format(&self, a: &AlgebraElement) -> String {
        if a.terms.is_empty() {
            return "0".into();
        }
        let one = self.field.one();
        let mut s = String::new();
        for (i, (m, c)) in a.terms.iter().enumerate() {
            let text = self.monomial_string(m);
            let negative = c.as_rational().is_negative();
            let (sign, mag) = if negative {
                (" - ", self.field.neg(c))
            } else {
                (" + ", c.clone())
            };
            if i == 0 {
                if negative {
                    s.push('-');
                }
            } else {
                s.push_str(sign);
            }
            if mag == one {
                s.push_str(&text);
            } else {
                let _ = write!(s, "{mag} {text}");
            }
        }
        s
    }

    pub fn terms_json(&self, a: &AlgebraElement) -> Vec<TermJson> {
        let g = &self.graph;
        a.terms
            .iter()
            .map(|(m, c)| TermJson {
                p: m.p.edges.iter().map(|&e| g.edge_name(e)).collect(),
                q: m.q.edges.iter().map(|&e| g.edge_name(e)).collect(),
                coeff: c.to_string(),
                vertex: g.vertex_name(g.path_range(&m.p)).to_string(),
            })
            .collect()
    }
}
