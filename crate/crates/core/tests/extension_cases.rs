//! Instances whose `G - M` already needs all Δ+μ colors, so the driver has to
//! work with a reserve matching and the local recolorings.

use edgecolor_core::base_color::saturated_matching;
use edgecolor_core::extend::{
    apply_case_operation, classify_improper, extend_precoloring, triple_status, CaseId, ExtensionTriple,
    ImproperTag, Precoloring, Strategy, TripleStatus,
};
use edgecolor_core::oracle::verify_extension;
use edgecolor_core::trace::replay;
use edgecolor_core::{Color, EdgeId, EdgeSet, Error, Multigraph};

/// K5 with every pair doubled except `single`, which get one edge.
fn k5(off: usize, single: &[(usize, usize)], g: &mut Multigraph) {
    for u in 0..5 {
        for v in u + 1..5 {
            let m = if single.contains(&(u, v)) { 1 } else { 2 };
            g.add_parallel(off + u, off + v, m).unwrap();
        }
    }
}

fn doubled_k5() -> Multigraph {
    let mut g = Multigraph::new(5);
    k5(0, &[], &mut g);
    g
}

fn extend(g: &Multigraph, f: EdgeId, i: Color) -> (Precoloring, edgecolor_core::extend::Extension) {
    let p = Precoloring::new(g, [(f, i)]).unwrap();
    let ext = extend_precoloring(g, &p, Strategy::PaperFirst).unwrap();
    let report = verify_extension(g, &p, &ext.coloring);
    assert!(report.ok, "color {i}: {:?}", report.diagnostics);
    (p, ext)
}

fn initial_triple(g: &Multigraph, p: &Precoloring) -> ExtensionTriple {
    let top = (g.max_degree() + g.max_multiplicity()) as Color;
    let (sm, phi) = saturated_matching(g, p.matching()).unwrap();
    ExtensionTriple::new(sm.matching, EdgeSet::new(), phi.with_palette(top))
}

#[test]
fn doubled_k5_never_falls_back() {
    let g = doubled_k5();
    let mut seen = Vec::new();
    for i in 1..=10 {
        let (_, ext) = extend(&g, EdgeId(0), i);
        assert!(!ext.fallback, "color {i}: {:?}", ext.fallback_reason);
        assert_eq!(replay(&g, 10, &ext.trace).unwrap(), ext.coloring);
        seen.extend(ext.cases);
    }
    for case in [CaseId::OpI, CaseId::Case3Direct, CaseId::Case31] {
        assert!(seen.contains(&case), "{case} never used: {seen:?}");
    }
}

#[test]
fn tripled_k5_never_falls_back() {
    let mut g = Multigraph::new(5);
    for u in 0..5 {
        for v in u + 1..5 {
            g.add_parallel(u, v, 3).unwrap();
        }
    }
    for i in 1..=15 {
        let (_, ext) = extend(&g, EdgeId(0), i);
        assert!(!ext.fallback, "color {i}: {:?}", ext.fallback_reason);
    }
}

#[test]
fn bridge_between_two_cores_uses_case_two() {
    // each core has Δ = 7 with vertex 0 one short; the bridge joins the two short vertices
    let single = [(0, 1), (0, 2), (3, 4)];
    let mut g = Multigraph::new(10);
    k5(0, &single, &mut g);
    k5(5, &single, &mut g);
    let f = g.add_edge(0, 5).unwrap();
    let mut seen = Vec::new();
    for i in 1..=9 {
        let (_, ext) = extend(&g, f, i);
        assert!(!ext.fallback, "color {i}: {:?}", ext.fallback_reason);
        seen.extend(ext.cases);
    }
    assert!(seen.contains(&CaseId::Case2), "{seen:?}");
}

#[test]
fn single_clash_report_and_operation() {
    let g = doubled_k5();
    let p = Precoloring::new(&g, [(EdgeId(0), 6)]).unwrap();
    let t = initial_triple(&g, &p);
    assert_eq!(triple_status(&g, &p, &t), TripleStatus::Prefeasible);
    let report = classify_improper(&g, &p, &t);
    let (f, u) = report.first_t2().expect("color 6 clashes with a reserved vertex");
    assert_eq!(report.tag(f, u), ImproperTag::T2);

    // an unobstructed sequence exists, so Operations II and III refuse
    for case in [CaseId::OpII, CaseId::OpIII, CaseId::Case2] {
        match apply_case_operation(&g, &p, &t, (f, u), case) {
            Err(Error::Precondition(_)) => {}
            other => panic!("{case}: {other:?}"),
        }
    }
    let out = apply_case_operation(&g, &p, &t, (f, u), CaseId::OpI).unwrap();
    let after = classify_improper(&g, &p, &out);
    assert_eq!(after.e2.len() + 1, report.e2.len());
    assert!(triple_status(&g, &p, &out).is_prefeasible());
    assert!(out.trace.len() > t.trace.len());
}

#[test]
fn non_target_is_rejected() {
    let g = doubled_k5();
    let p = Precoloring::new(&g, [(EdgeId(0), 6)]).unwrap();
    let t = initial_triple(&g, &p);
    // vertex 2 is not an end of the precolored edge
    assert!(matches!(
        apply_case_operation(&g, &p, &t, (EdgeId(0), 2), CaseId::OpI),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn broken_triple_is_infeasible() {
    let g = doubled_k5();
    let p = Precoloring::new(&g, [(EdgeId(0), 6)]).unwrap();
    let mut t = initial_triple(&g, &p);
    let e = g.edge_ids().find(|&e| !t.mstar.contains(e) && e != EdgeId(0)).unwrap();
    t.phi.uncolor(e);
    assert!(matches!(triple_status(&g, &p, &t), TripleStatus::InfeasiblePrecondition(_)));
}

#[test]
fn oracle_only_matches_contract() {
    let g = doubled_k5();
    let p = Precoloring::new(&g, [(EdgeId(0), 3)]).unwrap();
    let ext = extend_precoloring(&g, &p, Strategy::OracleOnly).unwrap();
    assert!(verify_extension(&g, &p, &ext.coloring).ok);
    assert!(!ext.fallback);
    assert!(ext.cases.is_empty());
}

#[test]
fn simple_graphs_are_rejected() {
    let mut g = Multigraph::new(3);
    g.add_edge(0, 1).unwrap();
    g.add_edge(1, 2).unwrap();
    let p = Precoloring::new(&g, [(EdgeId(0), 1)]).unwrap();
    assert!(matches!(extend_precoloring(&g, &p, Strategy::PaperFirst), Err(Error::Input(_))));
}

#[test]
fn op_one_moves_the_reserve_edge_along_the_fan() {
    let g = doubled_k5();
    let p = Precoloring::new(&g, [(EdgeId(0), 6)]).unwrap();
    let t = initial_triple(&g, &p);
    let (f, u) = classify_improper(&g, &p, &t).first_t2().unwrap();
    let old: Vec<EdgeId> = t.mstar.iter().collect();
    let out = apply_case_operation(&g, &p, &t, (f, u), CaseId::OpI).unwrap();
    let new: Vec<EdgeId> = out.mstar.iter().filter(|e| !t.mstar.contains(*e)).collect();
    assert_eq!(new.len(), 1);
    assert_eq!(out.mstar.len(), old.len());
    // the replacement is a fan edge at the old reserve edge's center
    let (a, b) = g.ends(old[0]);
    assert!(g.is_incident(new[0], a) || g.is_incident(new[0], b));
    assert_eq!(out.phi.get(new[0]), None);
    assert!(out.trace.iter().any(|s| s.op == "reserve_swap"));
}

#[test]
fn case_three_one_closes_the_four_cycle() {
    let g = doubled_k5();
    let i = 9;
    let p = Precoloring::new(&g, [(EdgeId(0), i)]).unwrap();
    let t = initial_triple(&g, &p);
    let before = classify_improper(&g, &p, &t);
    assert_eq!(before.e2.len(), 2);
    let (f, u) = before.first_t2().unwrap();
    let out = apply_case_operation(&g, &p, &t, (f, u), CaseId::Case31).unwrap();
    let after = classify_improper(&g, &p, &out);
    assert_eq!(after.e2.len(), 0);
    assert_eq!(out.mstar.len() + 1, t.mstar.len());
    // the two clashing edges at u and v now carry Δ+μ and no i-edge meets f
    let (x, y) = g.ends(f);
    for w in [x, y] {
        let rest: Vec<EdgeId> = g.incident(w).iter().copied().filter(|&e| e != f).collect();
        assert!(rest.iter().all(|&e| out.phi.get(e) != Some(i)));
        assert_eq!(rest.iter().filter(|&&e| out.phi.get(e) == Some(10)).count(), 1);
    }
    assert!(out.special.len() >= 2);
    assert_eq!(triple_status(&g, &p, &out), TripleStatus::Feasible);
}

#[test]
fn doubled_path_both_precolored_one() {
    let mut g = Multigraph::new(8);
    for v in 0..7 {
        g.add_parallel(v, v + 1, 2).unwrap();
    }
    let (_, ext) = extend(&g, EdgeId(0), 1);
    assert!(!ext.fallback);
    let p = Precoloring::new(&g, [(EdgeId(0), 1), (EdgeId(8), 1)]).unwrap();
    let ext = extend_precoloring(&g, &p, Strategy::PaperFirst).unwrap();
    assert!(verify_extension(&g, &p, &ext.coloring).ok);
    assert!(ext.coloring.used_colors(&g).len() <= 6);
}
