//! Worked examples on small Hessenberg graphs.

use gkm_core::automorphism::{act_on_map, aut_star, dot_action, enumerate_aut, phi_sigma, phi_zero, GkmAutomorphism};
use gkm_core::cohomology::{action_matrix, betti_numbers, equivariant_basis, x_classes, GraphCohomology, Lattice};
use gkm_core::gkm::{Axiom, Witness};
use gkm_core::linalg::Matrix;
use gkm_core::rational::int;
use gkm_core::{build_gkm_graph, GkmError, GkmGraph, HessenbergFunction, LinearForm, Perm, Polynomial};

fn h(s: &str) -> HessenbergFunction {
    s.parse().unwrap()
}

fn graph(s: &str) -> GkmGraph {
    build_gkm_graph(&h(s)).unwrap()
}

fn root(a: usize, b: usize) -> LinearForm {
    // t_a - t_b, 1-based, n = 3
    LinearForm::root(3, a - 1, b - 1)
}

#[test]
fn hexagon_validates_and_is_full_rank() {
    let g = graph("2,3,3");
    assert!(g.validate().all_passed());
    assert!(g.is_full_rank());
    assert!(graph("3,3,3").is_full_rank());
    assert_eq!(g.edges().len(), 12);
}

#[test]
fn unpaired_edge_is_reported() {
    let names = vec!["a".to_string(), "b".to_string()];
    let g = GkmGraph::from_oriented_edges(3, names, vec![(0, 1, root(1, 2))]).unwrap();
    let report = g.validate();
    let check = report.check(Axiom::Reversal);
    assert!(!check.passed);
    assert_eq!(check.witness, Some(Witness::Edge { src: "a".into(), dst: "b".into(), label: "t1 - t2".into() }));
}

#[test]
fn proportional_labels_are_reported() {
    let names = vec!["a".to_string(), "b".to_string(), "c".to_string()];
    let twice = root(1, 2).scale(&int(2));
    let g = GkmGraph::from_unordered_edges(3, names, vec![(0, 1, root(1, 2)), (0, 2, twice)]).unwrap();
    assert!(!g.validate().check(Axiom::PairwiseIndependent).passed);
}

#[test]
fn two_cycle_is_not_full_rank() {
    let names = vec!["a".to_string(), "b".to_string()];
    let g = GkmGraph::from_unordered_edges(3, names, vec![(0, 1, root(1, 2))]).unwrap();
    assert!(g.validate().all_passed());
    assert!(!g.is_full_rank());
    assert!(matches!(enumerate_aut(&g), Err(GkmError::NotFullRank)));
}

#[test]
fn fixed_subgraphs() {
    let g = graph("3,3,3");
    let whole = g.fixed_subgraph(&[root(1, 2), root(2, 3)], "123").unwrap();
    assert_eq!(whole.num_vertices(), 6);
    assert_eq!(whole.edges().len(), g.edges().len());

    let g = graph("2,3,3");
    let edge = g.fixed_subgraph(&[root(1, 2)], "123").unwrap();
    assert_eq!(edge.vertices(), ["123", "213"]);
    assert_eq!(edge.edges().len(), 2);
    assert!(matches!(g.fixed_subgraph(&[root(1, 2)], "999"), Err(GkmError::UnknownVertex(_))));

    // (4, 2) is not a box of (3,3,4,4): only the boxes (3, 2) and (4, 3) see these labels.
    let g = graph("3,3,4,4");
    let span = [LinearForm::root(4, 1, 2), LinearForm::root(4, 2, 3)];
    let s = g.fixed_subgraph(&span, "1234").unwrap();
    assert_eq!(s.num_vertices(), 6);
    assert_eq!(s.degree(), Some(2));
    assert!(!s.is_k33());
    let s = graph("3,4,4,4").fixed_subgraph(&span, "1234").unwrap();
    assert!(s.is_k33());
}

#[test]
fn k33_recognition() {
    assert!(graph("3,3,3").is_k33());
    assert!(!graph("2,3,3").is_k33());
    let empty = GkmGraph::from_unordered_edges(3, vec![], vec![]).unwrap();
    assert!(!empty.is_k33());
}

#[test]
fn components() {
    let c = graph("1,2,3").connected_components();
    assert_eq!(c.len(), 6);
    assert!(c.iter().all(|x| x.len() == 1));
    assert_eq!(graph("2,3,3").connected_components().len(), 1);
    let c = graph("1,3,3").connected_components();
    assert_eq!(c.len(), 3);
    assert!(c.iter().all(|x| x.len() == 2));
}

#[test]
fn json_and_dot_round_trip() {
    let g = graph("2,3,4,4");
    let back = GkmGraph::from_json(&g.to_json()).unwrap();
    assert_eq!(back, g);
    let dot = graph("2,3,3").to_dot();
    assert!(dot.starts_with("graph G {"));
    assert!(dot.contains("\"123\" -- \"213\" [label=\"-t1 + t2\"];"));
    assert_eq!(dot.lines().filter(|l| l.contains("--")).count(), 6);
}

#[test]
fn phi_sigma_moves_edges_as_expected() {
    let g = graph("2,3,3");
    let s = Perm::parse("213").unwrap();
    let a = phi_sigma(&g, &s).unwrap();
    let id = g.vertex_index("123").unwrap();
    let sw = g.vertex_index("213").unwrap();
    assert_eq!(a.image(id), sw);
    assert_eq!(a.image(sw), id);
    let label = a.lattice_map().apply_linear(&root(2, 1));
    assert_eq!(label, root(1, 2));
    assert!(g.find_edge(a.image(id), a.image(sw), &label).is_some());
    assert_eq!(phi_sigma(&g, &Perm::identity(3)).unwrap(), GkmAutomorphism::identity(&g));
}

#[test]
fn phi_sigma_is_a_homomorphism() {
    for s in ["2,3,3", "2,3,4,4"] {
        let g = graph(s);
        let n = h(s).n();
        let perms = Perm::all(n);
        for a in perms.iter().step_by(5) {
            for b in perms.iter().step_by(7) {
                let lhs = phi_sigma(&g, a).unwrap().compose(&phi_sigma(&g, b).unwrap());
                assert_eq!(lhs, phi_sigma(&g, &a.compose(b)).unwrap());
            }
        }
    }
}

#[test]
fn phi_zero_examples() {
    let hh = h("2,3,3");
    let g = build_gkm_graph(&hh).unwrap();
    let p0 = phi_zero(&g, &hh).unwrap();
    assert!(p0.compose(&p0).is_identity());
    assert!(matches!(phi_zero(&graph("3,3,4,4"), &h("3,3,4,4")), Err(GkmError::StarConditionFails(_))));
    for n in 2..=5 {
        let full = HessenbergFunction::full(n);
        assert!(phi_zero(&build_gkm_graph(&full).unwrap(), &full).is_ok());
    }
}

#[test]
fn automorphism_counts() {
    assert_eq!(enumerate_aut(&graph("2,3,3")).unwrap().len(), 12);
    assert_eq!(enumerate_aut(&graph("3,3,4,4")).unwrap().len(), 24);
    assert_eq!(enumerate_aut(&graph("3,3,3")).unwrap().len(), 12);
}

#[test]
fn automorphisms_at_n5_spot_check() {
    for (s, order) in [("2,3,4,5,5", 240), ("3,3,4,5,5", 120)] {
        let hh = h(s);
        assert_eq!(hh.star_condition(), order == 240);
        assert_eq!(enumerate_aut(&build_gkm_graph(&hh).unwrap()).unwrap().len(), order, "h = {s}");
    }
}

#[test]
fn x_classes_under_generators() {
    let hh = h("2,3,3");
    let g = build_gkm_graph(&hh).unwrap();
    let xs = x_classes(&g).unwrap();
    assert_eq!(xs[0].values[g.vertex_index("123").unwrap()].to_string(), "t1");
    assert_eq!(xs[0].values[g.vertex_index("213").unwrap()].to_string(), "t2");
    for s in Perm::all(3) {
        let a = phi_sigma(&g, &s).unwrap();
        for x in &xs {
            assert_eq!(&act_on_map(&g, &a, x).unwrap(), x);
        }
    }
    let p0 = phi_zero(&g, &hh).unwrap();
    for i in 0..3 {
        assert_eq!(act_on_map(&g, &p0, &xs[i]).unwrap(), xs[2 - i].neg());
    }
    let id = GkmAutomorphism::identity(&g);
    assert_eq!(act_on_map(&g, &id, &xs[1]).unwrap(), xs[1]);
}

#[test]
fn dot_action_examples() {
    let g = graph("2,3,3");
    let basis: Vec<_> = (0..=4).step_by(2).flat_map(|d| equivariant_basis(&g, Lattice::T, d).unwrap()).collect();
    let perms = Perm::all(3);
    for xi in &basis {
        assert_eq!(&dot_action(&g, &Perm::identity(3), xi).unwrap(), xi);
        for t in &perms {
            let a = phi_sigma(&g, &t.inverse()).unwrap();
            assert_eq!(dot_action(&g, t, xi).unwrap(), act_on_map(&g, &a, xi).unwrap());
            for s in &perms {
                let lhs = dot_action(&g, &s.compose(t), xi).unwrap();
                let rhs = dot_action(&g, s, &dot_action(&g, t, xi).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }
}

#[test]
fn aut_star_examples() {
    let g = graph("3,3,3");
    let star = aut_star(&g, &enumerate_aut(&g).unwrap(), 3).unwrap();
    let mut expected: Vec<_> = Perm::all(3).iter().map(|s| phi_sigma(&g, s).unwrap()).collect();
    expected.sort();
    assert_eq!(star, expected);
    for s in ["2,3,3", "2,3,4,4"] {
        let g = graph(s);
        let star = aut_star(&g, &enumerate_aut(&g).unwrap(), h(s).complex_dimension() as u32).unwrap();
        assert_eq!(star, vec![GkmAutomorphism::identity(&g)]);
    }
}

#[test]
fn equivariant_bases() {
    for s in ["2,3,3", "3,3,3", "2,3,4,4"] {
        assert_eq!(equivariant_basis(&graph(s), Lattice::T, 0).unwrap().len(), 1);
    }
    assert_eq!(equivariant_basis(&graph("2,3,3"), Lattice::T, 2).unwrap().len(), 6);
    assert_eq!(equivariant_basis(&graph("1,3,3"), Lattice::T, 0).unwrap().len(), 3);
}

#[test]
fn betti_examples() {
    assert_eq!(betti_numbers(&graph("2,3,3")).unwrap(), vec![1, 4, 1]);
    assert_eq!(betti_numbers(&graph("3,3,3")).unwrap(), vec![1, 2, 2, 1]);
    let b = betti_numbers(&graph("2,3,4,4")).unwrap();
    assert_eq!(b.iter().sum::<usize>(), 24);
    assert_eq!((b[0], *b.last().unwrap()), (1, 1));
    assert!(b.iter().eq(b.iter().rev()));
}

#[test]
fn action_matrices() {
    let g = graph("3,3,3");
    let hh = h("3,3,3");
    let coh = GraphCohomology::compute(&g, 1).unwrap();
    let h2 = coh.degree(1).unwrap();
    assert!(action_matrix(&g, &GkmAutomorphism::identity(&g), h2).unwrap().is_identity());
    let p0 = phi_zero(&g, &hh).unwrap();
    let m = action_matrix(&g, &p0, h2).unwrap();
    let xs = x_classes(&g).unwrap();
    for i in 0..3 {
        let xi = h2.project(&xs[i]).unwrap();
        let image = m.mul_vec(&xi).unwrap();
        let expected: Vec<_> = h2.project(&xs[2 - i]).unwrap().into_iter().map(|c| -c).collect();
        assert_eq!(image, expected);
    }

    let g = graph("2,3,3");
    let coh = GraphCohomology::compute(&g, 1).unwrap();
    let a = phi_sigma(&g, &Perm::parse("213").unwrap()).unwrap();
    let m = action_matrix(&g, &a, coh.degree(1).unwrap()).unwrap();
    assert!(!m.is_identity());
    assert_eq!(m.mul(&m).unwrap(), Matrix::identity(4));
}

#[test]
fn normal_form_of_class_values() {
    let g = graph("2,3,3");
    for xi in equivariant_basis(&g, Lattice::T, 2).unwrap() {
        for v in &xi.values {
            assert!(v.terms().all(|(e, _)| e[2] == 0), "t3 appears in {v}");
        }
    }
    let sum = (0..3).fold(Polynomial::zero(3), |a, i| &a + &Polynomial::var(3, i));
    assert!(sum.normal_form_t().is_zero());
}
