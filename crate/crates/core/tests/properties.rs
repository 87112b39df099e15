mod common;

use std::collections::BTreeSet;

use common::{chen_relations, graph_from_edges, single};
use leavitt_core::closures::{
    breaking_vertices, enumerate_hs_sets, hereditary_closure, quotient, saturated_closure, subalgebra_graph, HsSet,
    QuotientSpec,
};
use leavitt_core::graph::{condition_k, condition_l, enumerate_cycles, line_points, tree, EdgeRef, EdgeJson, VertexClass};
use leavitt_core::modules::{bifurcation_data, ChenModule, InfinitePath, ModuleVector};
use leavitt_core::structure::{corner_report, cycle_poset, decide_fp, decide_gk, fp_filtration, gk_filtration};
use leavitt_core::{Algebra, Graph, Limits, Multiplicity, SpecialEdgeChoice, VertexSet};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn finite_graph(max_v: usize, max_e: usize) -> impl Strategy<Value = Graph> {
    (1..=max_v).prop_flat_map(move |n| {
        prop::collection::vec((0..n, 0..n, 1u32..=2), 0..=max_e).prop_map(move |es| {
            let es: Vec<_> = es.into_iter().map(|(s, d, m)| (s, d, Multiplicity::Finite(m))).collect();
            graph_from_edges(n, &es)
        })
    })
}

/// Finite graphs, sometimes with one extra ω-bundle.
fn any_graph() -> impl Strategy<Value = Graph> {
    (finite_graph(6, 8), any::<Option<(usize, usize)>>()).prop_map(|(g, w)| match w {
        None => g,
        Some((s, d)) => {
            let n = g.vertex_count();
            let mut json = g.to_json();
            json.edges.push(EdgeJson {
                id: "w".into(),
                src: format!("v{}", s % n),
                dst: format!("v{}", d % n),
                mult: Multiplicity::Omega,
            });
            Graph::from_json(json).unwrap()
        }
    })
}

fn subset(g: &Graph, mask: u64) -> VertexSet {
    (0..g.vertex_count())
        .filter(|v| mask >> v & 1 == 1)
        .map(|v| g.vertex_name(v).to_string())
        .collect()
}

/// Graphs without parallel edges.
fn simple_graph(max_v: usize, max_e: usize) -> impl Strategy<Value = Graph> {
    (1..=max_v).prop_flat_map(move |n| {
        prop::collection::vec((0..n, 0..n), 0..=max_e).prop_map(move |es| {
            let es: Vec<_> = es.into_iter().map(|(s, d)| (s, d, Multiplicity::Finite(1))).collect();
            graph_from_edges(n, &es)
        })
    })
}

/// Closed paths using edges of `f`, each edge at most once, by brute force.
fn closed_trails(g: &Graph, f: &[EdgeRef]) -> BTreeSet<Vec<String>> {
    fn extend(g: &Graph, f: &[EdgeRef], trail: &mut Vec<EdgeRef>, out: &mut BTreeSet<Vec<String>>) {
        let last = *trail.last().unwrap();
        if g.dst(last) == g.src(trail[0]) {
            out.insert(canonical(trail.iter().map(|&e| g.edge_name(e)).collect()));
        }
        for &e in f {
            if g.src(e) == g.dst(last) && !trail.contains(&e) {
                trail.push(e);
                extend(g, f, trail, out);
                trail.pop();
            }
        }
    }
    let mut out = BTreeSet::new();
    for &e in f {
        extend(g, f, &mut vec![e], &mut out);
    }
    out
}

fn lim() -> Limits {
    Limits::default()
}

/// Cycles as edge-name sequences rotated to their smallest name.
fn canonical(names: Vec<String>) -> Vec<String> {
    let k = (0..names.len()).min_by_key(|&i| &names[i]).unwrap_or(0);
    let mut c = names;
    c.rotate_left(k);
    c
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn classification_matches_degrees(g in any_graph()) {
        for v in 0..g.vertex_count() {
            let omega = g.out_bundles(v).iter().any(|&b| g.bundles()[b].mult.is_omega());
            let finite: u32 = g.out_bundles(v).iter().map(|&b| match g.bundles()[b].mult {
                Multiplicity::Finite(k) => k,
                Multiplicity::Omega => 0,
            }).sum();
            match g.classify(v) {
                VertexClass::InfiniteEmitter => prop_assert!(omega),
                VertexClass::Sink => prop_assert!(!omega && finite == 0),
                VertexClass::Regular { out_degree } => prop_assert!(!omega && out_degree == finite as usize && finite > 0),
            }
        }
    }

    #[test]
    fn trees_are_monotone(g in any_graph()) {
        for v in g.vertex_names() {
            let t = tree(&g, v).unwrap();
            for w in &t.vertices {
                prop_assert!(tree(&g, w).unwrap().vertices.is_subset(&t.vertices));
            }
        }
    }

    #[test]
    fn cycles_visit_each_vertex_once(g in finite_graph(6, 9)) {
        let cycles = enumerate_cycles(&g).unwrap();
        for c in &cycles {
            let vs = c.vertices(&g);
            let distinct: BTreeSet<_> = vs.iter().collect();
            prop_assert_eq!(distinct.len(), vs.len());
            for (i, &e) in c.edges().iter().enumerate() {
                prop_assert_eq!(g.dst(e), g.src(c.edges()[(i + 1) % c.len()]));
            }
        }
        let brute: usize = common::cycles_through(&g).iter().sum();
        let listed: usize = cycles.iter().map(|c| c.len()).sum();
        prop_assert_eq!(brute, listed);
    }

    #[test]
    fn line_points_match_definition(g in any_graph()) {
        let lp = line_points(&g);
        prop_assert_eq!(&lp, &common::naive_line_points(&g));
        for v in &lp {
            prop_assert!(tree(&g, v).unwrap().vertices.is_subset(&lp));
        }
    }

    #[test]
    fn condition_k_implies_l(g in finite_graph(5, 7)) {
        if condition_k(&g).unwrap() {
            prop_assert!(condition_l(&g).unwrap());
        }
    }

    #[test]
    fn saturated_closure_is_a_closure_operator(g in any_graph(), a in any::<u64>(), b in any::<u64>()) {
        let x = subset(&g, a);
        let y = subset(&g, a | b);
        let cx = saturated_closure(&g, &x).unwrap().vertices;
        prop_assert!(x.is_subset(&cx));
        prop_assert_eq!(&saturated_closure(&g, &cx).unwrap().vertices, &cx);
        prop_assert!(cx.is_subset(&saturated_closure(&g, &y).unwrap().vertices));
        prop_assert_eq!(&cx, &common::naive_hs_closure(&g, &x));
        prop_assert!(HsSet::new(&g, cx).is_ok());
    }

    #[test]
    fn hs_sets_are_exactly_the_fixed_points(g in any_graph()) {
        let listed: BTreeSet<VertexSet> = enumerate_hs_sets(&g).unwrap().into_iter().map(|h| h.vertices).collect();
        let brute: BTreeSet<VertexSet> = (0..1u64 << g.vertex_count())
            .map(|m| subset(&g, m))
            .filter(|s| &common::naive_hs_closure(&g, s) == s)
            .collect();
        prop_assert_eq!(listed, brute);
    }

    #[test]
    fn quotient_vertex_count(g in any_graph(), pick in any::<prop::sample::Index>(), smask in any::<u64>()) {
        let sets = enumerate_hs_sets(&g).unwrap();
        let h = sets[pick.index(sets.len())].clone();
        let bh: Vec<String> = breaking_vertices(&g, &h).unwrap().into_iter().collect();
        let s: VertexSet = bh.iter().enumerate().filter(|(i, _)| smask >> i & 1 == 1).map(|(_, v)| v.clone()).collect();
        let expected = g.vertex_count() - h.vertices.len() + bh.len() - s.len();
        let spec = QuotientSpec::new(&g, h, s).unwrap();
        prop_assert_eq!(quotient(&g, &spec).unwrap().vertex_count(), expected);
    }

    #[test]
    fn cycles_transport_to_subalgebra_graph(g in simple_graph(5, 7), mask in any::<u64>()) {
        let all: Vec<EdgeRef> = (0..g.vertex_count()).flat_map(|v| g.edges_from(v, 0)).collect();
        let f: Vec<EdgeRef> = all.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
        let ef = subalgebra_graph(&g, &f).unwrap();
        let transported: BTreeSet<Vec<String>> = enumerate_cycles(&ef).unwrap().iter()
            .map(|c| canonical(c.vertices(&ef).iter().map(|&v| ef.vertex_name(v).to_string()).collect()))
            .collect();
        // every cycle of g inside F survives
        for c in enumerate_cycles(&g).unwrap() {
            if c.edges().iter().all(|e| f.contains(e)) {
                let names = canonical(c.edges().iter().map(|&e| g.edge_name(e)).collect());
                prop_assert!(transported.contains(&names));
            }
        }
        // and the cycles of E_F are exactly the closed trails of g inside F
        prop_assert_eq!(transported, closed_trails(&g, &f));
    }

    #[test]
    fn saturation_adds_no_cycle_vertices(g in any_graph(), seed in any::<u64>()) {
        let x = hereditary_closure(&g, &subset(&g, seed)).unwrap();
        let sat = saturated_closure(&g, &x).unwrap().vertices;
        let on = g.on_closed_path();
        for w in sat.difference(&x) {
            prop_assert!(!on[g.vertex_id(w).unwrap()], "{} was added by saturation", w);
        }
    }

    #[test]
    fn cycles_in_a_generated_ideal_lie_in_the_tree(g in finite_graph(6, 9)) {
        let cycles = enumerate_cycles(&g).unwrap();
        for v in g.vertex_names() {
            let t = tree(&g, v).unwrap().vertices;
            let seed: VertexSet = [v.clone()].into();
            let ideal = saturated_closure(&g, &hereditary_closure(&g, &seed).unwrap()).unwrap().vertices;
            for c in &cycles {
                let c0: VertexSet = c.vertices(&g).iter().map(|&w| g.vertex_name(w).to_string()).collect();
                if c0.is_subset(&ideal) {
                    prop_assert!(c0.is_subset(&t));
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ck_relations_normalize_to_zero(g in finite_graph(5, 7)) {
        let alg = Algebra::new(g.clone());
        for v in 0..g.vertex_count() {
            let out = g.edges_from(v, 0);
            for &e in &out {
                for &f in &out {
                    let p = alg.multiply(&single(&alg, alg.ghost_monomial(e)), &single(&alg, alg.edge_monomial(f))).unwrap();
                    let want = if e == f { single(&alg, alg.vertex_monomial(g.dst(e))) } else { alg.zero() };
                    prop_assert_eq!(p, want);
                }
            }
            if g.is_regular(v) {
                let mut sum = single(&alg, alg.vertex_monomial(v));
                for &e in &out {
                    let ee = alg.multiply(&single(&alg, alg.edge_monomial(e)), &single(&alg, alg.ghost_monomial(e))).unwrap();
                    sum = alg.sub(&sum, &ee).unwrap();
                }
                prop_assert!(sum.is_zero());
            }
        }
    }

    #[test]
    fn grading_is_multiplicative(g in finite_graph(5, 7), seed in any::<u64>()) {
        let alg = Algebra::new(g);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..20 {
            let a = common::random_monomial(&mut rng, &alg, 3);
            let b = common::random_monomial(&mut rng, &alg, 3);
            let d = a.degree() + b.degree();
            let prod = alg.multiply(&single(&alg, a), &single(&alg, b)).unwrap();
            prop_assert!(prod.terms().keys().all(|m| m.degree() == d));
        }
    }

    #[test]
    fn rewriting_is_confluent_and_associative(g in finite_graph(4, 6), seed in any::<u64>()) {
        let alg = Algebra::new(g);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..20 {
            let [x, y, z] = [0; 3].map(|_| single(&alg, common::random_monomial(&mut rng, &alg, 3)));
            let xy = alg.multiply(&x, &y).unwrap();
            let mut sched = ChaCha8Rng::seed_from_u64(rng.gen());
            prop_assert_eq!(&alg.multiply_with(&x, &y, &mut |n| sched.gen_range(0..n)).unwrap(), &xy);
            let yz = alg.multiply(&y, &z).unwrap();
            prop_assert_eq!(alg.multiply(&xy, &z).unwrap(), alg.multiply(&x, &yz).unwrap());
        }
    }

    #[test]
    fn basis_counts_match_growth(g in finite_graph(4, 6)) {
        let alg = Algebra::new(g.clone());
        let growth = alg.growth_profile(4).unwrap();
        let other = Algebra::with_parts(g.clone(), alg.field(), SpecialEdgeChoice::largest(&g));
        prop_assert_eq!(&growth, &other.growth_profile(4).unwrap());
        for (n, &dim) in growth.iter().enumerate() {
            let basis = alg.enumerate_basis(n, lim().max_basis).unwrap();
            prop_assert_eq!(basis.len() as u64, dim);
            prop_assert!(basis.iter().all(|m| alg.is_normal(m) && m.total_length() <= n));
        }
    }

    #[test]
    fn chen_actions_respect_the_relations(g in finite_graph(5, 7), seed in any::<u64>()) {
        let cycles = enumerate_cycles(&g).unwrap();
        prop_assume!(!cycles.is_empty());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = &cycles[rng.gen_range(0..cycles.len())];
        let alg = Algebra::new(g.clone());
        let m = ChenModule::new(g.clone(), InfinitePath::rational(&g, c.edges().to_vec()).unwrap());
        chen_relations(&alg, &m, &m.generator()).map_err(TestCaseError::fail)?;
        for _ in 0..50 {
            let mono = common::random_monomial(&mut rng, &alg, 3);
            if let Some(q) = m.act_monomial(&mono, &m.generator()) {
                chen_relations(&alg, &m, &q).map_err(TestCaseError::fail)?;
            }
        }
    }

    #[test]
    fn kernel_generators_annihilate_the_stream(g in finite_graph(5, 8), pick in any::<prop::sample::Index>()) {
        let cycles = enumerate_cycles(&g).unwrap();
        prop_assume!(!cycles.is_empty());
        let c = &cycles[pick.index(cycles.len())];
        let alg = Algebra::new(g.clone());
        let p = InfinitePath::rational(&g, c.edges().to_vec()).unwrap();
        let k = bifurcation_data(&alg, &p, 4).unwrap();
        let m = ChenModule::new(g.clone(), p);
        let gen = ModuleVector::basis(m.generator(), alg.field().one());
        for (i, gs) in k.generators.iter().enumerate() {
            let at = k.bifurcating_integers[i];
            let s = g.src(m.stream().edge_at(at - 1));
            prop_assert!(g.out_degree(s).is_some_and(|d| d >= 2));
            for x in gs {
                prop_assert!(m.act(&alg, x, &gen).unwrap().is_zero());
                prop_assert_eq!(&alg.multiply(x, &k.mu[i]).unwrap(), x);
            }
        }
    }

    #[test]
    fn fp_and_gk_agree_with_cycle_counting(g in finite_graph(6, 10)) {
        let fp = decide_fp(&g, &lim()).unwrap();
        let gk = decide_gk(&g, &lim()).unwrap();
        let oracle = common::finite_graph_fp_oracle(&g);
        prop_assert_eq!(fp.all_finitely_presented, oracle);
        prop_assert_eq!(gk.finite, oracle);
        if !fp.all_finitely_presented {
            prop_assert!(!fp.reasons.is_empty());
        }
    }

    #[test]
    fn negative_verdicts_carry_reasons(g in any_graph()) {
        let fp = decide_fp(&g, &lim()).unwrap();
        prop_assert!(fp.all_finitely_presented || !fp.reasons.is_empty());
        if fp.all_finitely_presented {
            prop_assert!(decide_gk(&g, &lim()).unwrap().finite);
        }
    }

    #[test]
    fn filtrations_are_chains_of_ideals(g in finite_graph(6, 9)) {
        let all: VertexSet = g.vertex_names().iter().cloned().collect();
        if decide_fp(&g, &lim()).unwrap().all_finitely_presented {
            let f = fp_filtration(&g, &lim()).unwrap();
            prop_assert_eq!(f.chain.last(), Some(&all));
            prop_assert_eq!(f.chain.len(), f.layers.len());
            for w in f.chain.windows(2) {
                prop_assert!(w[0].is_subset(&w[1]) && w[0] != w[1]);
            }
            for h in &f.chain[..f.chain.len() - 1] {
                let h = HsSet::new(&g, h.clone()).unwrap();
                let q = quotient(&g, &QuotientSpec::plain(h)).unwrap();
                prop_assert!(line_points(&q).is_empty());
                prop_assert!(enumerate_cycles(&q).unwrap().iter().any(|c| !c.has_exit(&q)));
            }
        }
        let gk = decide_gk(&g, &lim()).unwrap();
        if gk.finite {
            let d = cycle_poset(&g, &lim()).unwrap().longest_chain.unwrap();
            let f = gk_filtration(&g, &lim()).unwrap();
            prop_assert!(f.chain.len() <= d + 1);
            prop_assert_eq!(f.chain.last(), Some(&all));
            for h in &f.chain {
                prop_assert!(HsSet::new(&g, h.clone()).is_ok());
            }
        }
    }

    #[test]
    fn corner_flags_are_consistent(g in finite_graph(6, 9)) {
        for v in g.vertex_names() {
            let r = corner_report(&g, v).unwrap();
            prop_assert!(!r.condition_k || r.condition_l);
            prop_assert!(!r.is_line_point || r.acyclic);
            prop_assert!(!r.no_exit_cycle_tree || !r.condition_l);
        }
    }
}
