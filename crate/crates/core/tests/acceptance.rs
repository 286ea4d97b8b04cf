//! Acceptance gate: runs the nine criteria at their full sizes and prints one line each.
//! Each criterion also gets checks against oracles written here, independent of the library.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use gkm_core::automorphism::{enumerate_aut, phi_zero};
use gkm_core::cohomology::{action_matrix, betti_numbers, equivariant_basis, x_classes, GraphCohomology, Lattice};
use gkm_core::gkm::{Axiom, Witness};
use gkm_core::unipotent::{conjugate_elementary, find_witness, HessSpace, PermMatrix};
use gkm_core::verify::{inject_violation, run_criterion, Bounds};
use gkm_core::{build_gkm_graph, HessenbergFunction, LinearForm, Perm};

fn h(s: &str) -> HessenbergFunction {
    s.parse().unwrap()
}

/// All permutations of `0..n` by Heap's algorithm.
fn heap_permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(k: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(a.clone());
            return;
        }
        for i in 0..k - 1 {
            go(k - 1, a, out);
            if k.is_multiple_of(2) {
                a.swap(i, k - 1);
            } else {
                a.swap(0, k - 1);
            }
        }
        go(k - 1, a, out);
    }
    let mut out = Vec::new();
    go(n, &mut (0..n).collect(), &mut out);
    out
}

/// Poincaré coefficients from the inversion statistic over the staircase.
fn inversion_oracle(hv: &[usize]) -> Vec<usize> {
    let n = hv.len();
    let mut counts = BTreeMap::new();
    for w in heap_permutations(n) {
        let mut k = 0;
        for j in 0..n {
            for i in j + 1..hv[j] {
                if w[j] > w[i] {
                    k += 1;
                }
            }
        }
        *counts.entry(k).or_insert(0usize) += 1;
    }
    let top = *counts.keys().max().unwrap();
    (0..=top).map(|k| counts.get(&k).copied().unwrap_or(0)).collect()
}

fn choose(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut r = 1;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

fn check(failures: &mut Vec<String>, ok: bool, what: impl Into<String>) {
    if !ok {
        failures.push(what.into());
    }
}

fn extra_checks(id: u8) -> Vec<String> {
    let mut f = Vec::new();
    match id {
        1 => {
            let frozen = [
                ("2,3,3", 12),
                ("3,3,3", 12),
                ("2,3,4,4", 48),
                ("2,4,4,4", 24),
                ("3,3,4,4", 24),
                ("3,4,4,4", 48),
                ("4,4,4,4", 48),
            ];
            let listed: Vec<String> = (3..=4).flat_map(HessenbergFunction::all_connected).map(|x| x.to_string()).collect();
            check(&mut f, listed == frozen.iter().map(|(s, _)| s.to_string()).collect::<Vec<_>>(), "connected h list changed");
            for (s, order) in frozen {
                let n = enumerate_aut(&build_gkm_graph(&h(s)).unwrap()).unwrap().len();
                check(&mut f, n == order, format!("|Aut Γ_({s})| = {n}, frozen {order}"));
            }
        }
        2 => {
            // Φ_0 is a genuine automorphism of the hexagon that moves H^2.
            let hh = h("2,3,3");
            let g = build_gkm_graph(&hh).unwrap();
            let coh = GraphCohomology::compute(&g, 1).unwrap();
            let m = action_matrix(&g, &phi_zero(&g, &hh).unwrap(), coh.degree(1).unwrap()).unwrap();
            check(&mut f, !m.is_identity(), "Φ_0 acts trivially on H^2 of the hexagon");
        }
        3 => {
            check(&mut f, inversion_oracle(&[2, 3, 3]) == vec![1, 4, 1], "oracle (2,3,3)");
            check(&mut f, inversion_oracle(&[3, 3, 3]) == vec![1, 2, 2, 1], "oracle (3,3,3)");
            for hh in (2..=4).flat_map(HessenbergFunction::all_connected) {
                let b = betti_numbers(&build_gkm_graph(&hh).unwrap()).unwrap();
                check(&mut f, b == inversion_oracle(hh.values()), format!("betti({hh}) = {b:?}"));
            }
        }
        4 => {
            for (s, k, dim) in [("2,3,3", 0, 1), ("2,3,3", 1, 6), ("2,3,3", 2, 12), ("3,3,3", 1, 4), ("3,3,3", 2, 9)] {
                let got = equivariant_basis(&build_gkm_graph(&h(s)).unwrap(), Lattice::T, 2 * k).unwrap().len();
                check(&mut f, got == dim, format!("dim H_T^{}(Γ_({s})) = {got}, frozen {dim}", 2 * k));
            }
            let hh = h("3,3,3");
            let b = inversion_oracle(hh.values());
            let g = build_gkm_graph(&hh).unwrap();
            for k in 0..=5usize {
                let expected: usize = (0..=k).filter(|j| k - j < b.len()).map(|j| b[k - j] * choose(j + 1, 1)).sum();
                let got = equivariant_basis(&g, Lattice::T, 2 * k).unwrap().len();
                check(&mut f, got == expected, format!("Hilbert (3,3,3) k = {k}: {got} vs {expected}"));
            }
        }
        5 => {
            let g = build_gkm_graph(&h("2,3,3")).unwrap();
            let xs = x_classes(&g).unwrap();
            for (v, i, val) in [("123", 0, "t1"), ("213", 0, "t2"), ("231", 2, "t1"), ("321", 1, "t2")] {
                let got = xs[i].values[g.vertex_index(v).unwrap()].to_string();
                check(&mut f, got == val, format!("x̂_{}({v}) = {got}", i + 1));
            }
        }
        6 => {
            // τ·ξ for a transposition on x̂_1 of the hexagon, by hand: (τ·x̂_1)(w) = τ(t_{(τ^{-1}w)(1)}) = t_{w(1)}.
            let g = build_gkm_graph(&h("2,3,3")).unwrap();
            let x1 = x_classes(&g).unwrap()[0].clone();
            let tau = Perm::parse("213").unwrap();
            let d = gkm_core::dot_action(&g, &tau, &x1).unwrap();
            check(&mut f, d == x1, "τ·x̂_1 ≠ x̂_1");
        }
        7 => {
            let g = PermMatrix(Perm::parse("132").unwrap()).to_matrix();
            let c = conjugate_elementary(&g, 2, 1).unwrap();
            check(&mut f, !HessSpace::new(h("2,3,3")).contains(&c), "g^{-1}E_21 g inside HessSpace(2,3,3)");
            for s in ["2,3,3", "2,3,4,4", "1,2,3"] {
                let hh = h(s);
                let n = hh.n();
                for i in 1..=n {
                    for j in (1..=n).filter(|&j| j != i) {
                        let w = find_witness(&hh, i, j).unwrap().expect("witness");
                        let c = conjugate_elementary(&PermMatrix(w.perm.clone()).to_matrix(), i, j).unwrap();
                        let (a, b) = w.entry;
                        // the single 1 sits at (w^{-1}(i), w^{-1}(j)), below the staircase
                        let inv = w.perm.inverse();
                        let ok = (a, b) == (inv.apply(i - 1) + 1, inv.apply(j - 1) + 1) && a > hh.at(b) && c.get(a - 1, b - 1) != &gkm_core::rational::int(0);
                        check(&mut f, ok, format!("bad certificate for h = ({s}), ({i}, {j})"));
                    }
                }
            }
        }
        8 => {
            let g = build_gkm_graph(&h("3,4,4,4")).unwrap();
            let s = g.fixed_subgraph(&[LinearForm::root(4, 1, 2), LinearForm::root(4, 2, 3)], "1234").unwrap();
            check(&mut f, s.is_k33(), "(3,4,4,4) with t2-t3, t3-t4 is not K_{3,3}");
            // (4, 2) is not a box of (3,3,4,4), so the same span only sees a hexagon.
            let g = build_gkm_graph(&h("3,3,4,4")).unwrap();
            let s = g.fixed_subgraph(&[LinearForm::root(4, 1, 2), LinearForm::root(4, 2, 3)], "1234").unwrap();
            check(&mut f, s.num_vertices() == 6 && !s.is_k33() && s.degree() == Some(2), "(3,3,4,4) subgraph is not a hexagon");
            let s = g.fixed_subgraph(&[LinearForm::root(4, 0, 1), LinearForm::root(4, 1, 2)], "1234").unwrap();
            check(&mut f, s.is_k33(), "(3,3,4,4) with t1-t2, t2-t3 is not K_{3,3}");
        }
        9 => {
            let g = build_gkm_graph(&h("2,3,3")).unwrap();
            let bad = inject_violation(&g, Axiom::Reversal).unwrap().validate();
            let w = bad.check(Axiom::Reversal).witness.clone();
            let expected = Witness::Edge { src: "123".into(), dst: "213".into(), label: "-t1 + t2".into() };
            check(&mut f, w.as_ref() == Some(&expected), format!("reversal witness {w:?}"));
            let bad = inject_violation(&g, Axiom::PairwiseIndependent).unwrap().validate();
            let ok = matches!(&bad.check(Axiom::PairwiseIndependent).witness, Some(Witness::Vertex { vertex, labels }) if vertex == "123" && labels.len() == 2);
            check(&mut f, ok, "pairwise independence witness");
            let bad = inject_violation(&g, Axiom::Congruence).unwrap().validate();
            check(&mut f, matches!(bad.check(Axiom::Congruence).witness, Some(Witness::Edge { .. })), "congruence witness");
        }
        _ => unreachable!(),
    }
    f
}

fn main() -> ExitCode {
    let bounds = Bounds::default();
    let mut all = true;
    for id in 1..=9 {
        let start = Instant::now();
        let mut report = run_criterion(id, &bounds).expect("criterion");
        let extra = extra_checks(id);
        report.failures.extend(extra);
        all &= report.passed();
        println!("{report} in {:.1}s", start.elapsed().as_secs_f64());
    }
    if all {
        println!("acceptance: all 9 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: FAILED");
        ExitCode::FAILURE
    }
}
