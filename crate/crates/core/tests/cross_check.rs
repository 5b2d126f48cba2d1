//! Cross-module consistency: the A1 cluster algebra on the truncated quiver
//! is the string combinatorics of the sl2 category in disguise.

use qaff::cartan::{cartan_from_label, CartanData};
use qaff::cluster::{enumerate_closure, initial_seed, mutate, Seed};
use qaff::laurent::LaurentPoly;
use qaff::quiver::{kr_label, TruncationParams, Vertex};
use qaff::sl2;
use qaff::tsystem::{FundamentalProvider, KrSolver};
use std::collections::{BTreeMap, BTreeSet};

fn a1() -> CartanData {
    cartan_from_label("A1".parse().unwrap()).unwrap()
}

fn a1_seed(cd: &CartanData, ell: i64) -> Seed {
    initial_seed(cd, &TruncationParams { ell, anchor: Vertex::new(1, -1) }).unwrap()
}

fn kr_table(cd: &CartanData, seed: &Seed, ell: i64) -> BTreeMap<Vertex, LaurentPoly> {
    let solver = KrSolver::new(cd, FundamentalProvider::Builtin);
    seed.quiver
        .vertices
        .iter()
        .map(|&v| {
            let l = kr_label(cd, v, ell).unwrap();
            (v, solver.t(l.i, l.k, l.r).unwrap())
        })
        .collect()
}

#[test]
fn strings_biject_with_cluster_variables() {
    let cd = a1();
    for ell in 1..=3 {
        let seed = a1_seed(&cd, ell);
        let table = kr_table(&cd, &seed, ell);
        let closure = enumerate_closure(&seed, 1000);
        assert!(closure.closed);

        let mut realized: BTreeSet<LaurentPoly> = closure
            .variables
            .iter()
            .chain(closure.frozen.iter())
            .map(|x| x.realize_qchar(&table).unwrap())
            .collect();
        let string_chis: BTreeSet<LaurentPoly> = sl2::strings_in_category(ell)
            .iter()
            .map(|s| s.qchar())
            .collect();
        assert_eq!(realized.len(), ((ell * (ell + 3)) / 2 + 1) as usize, "ell={ell}");
        assert_eq!(realized, string_chis, "ell={ell}");
        realized.clear();
    }
}

#[test]
fn exchange_relations_match_string_decompositions() {
    let cd = a1();
    for ell in 1..=2 {
        let seed = a1_seed(&cd, ell);
        let table = kr_table(&cd, &seed, ell);
        let chi_to_string: BTreeMap<LaurentPoly, sl2::Str> = sl2::strings_in_category(ell)
            .into_iter()
            .map(|s| (s.qchar(), s))
            .collect();
        let closure = enumerate_closure(&seed, 1000);
        assert!(closure.closed);

        // walk the exchange graph again, seed by seed
        let mut seen = BTreeSet::new();
        let mut queue = vec![seed];
        while let Some(s) = queue.pop() {
            for &k in s.quiver.mutable_vertices().collect::<Vec<_>>() {
                let next = mutate(&s, k).unwrap();
                let x = s.attach[&k].realize_qchar(&table).unwrap();
                let y = next.attach[&k].realize_qchar(&table).unwrap();
                // the exchanged pair is a special pair of strings and the
                // two exchange monomials are its Eq.(1) classes
                let sx = chi_to_string[&x];
                let sy = chi_to_string[&y];
                assert!(!sl2::in_general_position(&sx, &sy), "ell={ell}");
                let classes: BTreeSet<LaurentPoly> = sl2::tensor_pair(&sx, &sy)
                    .classes()
                    .map(|(c, _)| c.qchar())
                    .collect();
                let monomial = |arrows: Vec<(Vertex, i64)>| {
                    arrows.iter().fold(LaurentPoly::one(), |acc, &(v, m)| {
                        (0..m).fold(acc, |a, _| {
                            a.mul(&s.attach[&v].realize_qchar(&table).unwrap())
                        })
                    })
                };
                let exchange: BTreeSet<LaurentPoly> = [
                    monomial(s.quiver.arrows_into(k)),
                    monomial(s.quiver.arrows_out_of(k)),
                ]
                .into_iter()
                .collect();
                assert_eq!(classes, exchange, "ell={ell} at {k}");
                if seen.insert(next.to_json().to_string()) {
                    queue.push(next);
                }
            }
        }
    }
}
