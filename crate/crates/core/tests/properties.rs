mod common;

use abagrad::aba::{parse_abaf, serialize_abaf, AbafBuilder};
use abagrad::harness::properties::ZetaProperty;
use abagrad::kernels::{Agg, Influence, SetAgg};
use abagrad::order::{dominates, sup_equivalent, superior, SetFamily, StrengthMultiset};
use proptest::prelude::*;

fn strength() -> impl Strategy<Value = f64> {
    prop_oneof![
        Just(0.0),
        Just(1.0),
        (0u32..=20).prop_map(|i| f64::from(i) * 0.05),
        0.0..=1.0f64,
    ]
}

fn multiset(max: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(strength(), 0..=max)
}

fn family(max_members: usize, max_len: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(multiset(max_len), 0..=max_members)
}

fn ms(v: &[f64]) -> StrengthMultiset {
    StrengthMultiset::new(v.to_vec())
}

/// Framework text built from random indices; weights on a 0.01 grid.
fn abaf_text() -> impl Strategy<Value = String> {
    (1usize..6, 0usize..5).prop_flat_map(|(n_asm, n_atoms)| {
        let total = n_asm + n_atoms;
        (
            prop::collection::vec(0..total, n_asm),
            prop::collection::vec(0u32..=100, n_asm),
            prop::collection::vec(
                (0..total, prop::collection::btree_set(0..total, 0..3)),
                0..6,
            ),
        )
            .prop_map(move |(contraries, weights, rules)| {
                let name = |i: usize| {
                    if i < n_asm {
                        format!("a{i}")
                    } else {
                        format!("p{i}")
                    }
                };
                let mut b = AbafBuilder::new();
                for i in 0..total {
                    b.intern(&name(i));
                }
                for i in 0..n_asm {
                    b.assumption(&name(i));
                    b.contrary(&name(i), &name(contraries[i]));
                    b.weight(&name(i), f64::from(weights[i]) / 100.0);
                }
                for (head, body) in &rules {
                    let body: Vec<String> = body.iter().map(|&x| name(x)).collect();
                    b.rule(&name(*head), body.iter().map(String::as_str));
                }
                serialize_abaf(&b.build().expect("well formed"))
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn serialization_round_trips(text in abaf_text()) {
        let d = parse_abaf(&text).unwrap();
        let once = serialize_abaf(&d);
        let again = parse_abaf(&once).unwrap();
        prop_assert_eq!(&d, &again);
        prop_assert_eq!(serialize_abaf(&again), once);
    }

    #[test]
    fn product_and_min_satisfy_every_set_property(s in multiset(8)) {
        let sub: Vec<f64> = s.iter().copied().step_by(2).collect();
        for z in [SetAgg::Prod, SetAgg::Min] {
            for p in ZetaProperty::ALL {
                prop_assert!(p.holds(z, &s, &sub), "{z} {:?} on {s:?}", p);
            }
        }
    }

    #[test]
    fn every_set_aggregation_keeps_singletons(x in strength()) {
        for z in SetAgg::ALL {
            prop_assert_eq!(z.eval(&[x]), x);
        }
    }

    #[test]
    fn set_aggregation_ignores_order(mut s in multiset(8)) {
        for z in SetAgg::ALL {
            let before = z.eval(&s);
            s.reverse();
            prop_assert_eq!(before.to_bits(), z.eval(&s).to_bits());
        }
    }

    #[test]
    fn aggregation_ignores_order(mut a in multiset(6), mut s in multiset(6)) {
        for alpha in [Agg::Sum, Agg::Prod] {
            let before = alpha.eval(&a, &s);
            a.reverse();
            let shift = s.len().min(1);
            s.rotate_left(shift);
            prop_assert_eq!(before.to_bits(), alpha.eval(&a, &s).to_bits());
        }
    }

    #[test]
    fn bounded_influence_stays_in_unit_interval(b in strength(), w in -1.0..=1.0f64) {
        for iota in [Influence::linear(1.0), Influence::quadratic_energy(1.0), Influence::quadratic_energy(3.0)] {
            let v = iota.eval(b, w);
            prop_assert!((0.0..=1.0).contains(&v), "{iota:?} at ({b}, {w}) gives {v}");
        }
    }

    #[test]
    fn superiority_is_reflexive(a in multiset(6)) {
        prop_assert!(superior(&ms(&a), &ms(&a)));
    }

    #[test]
    fn superiority_is_transitive(a in multiset(5), b in multiset(5), c in multiset(5)) {
        if superior(&ms(&a), &ms(&b)) && superior(&ms(&b), &ms(&c)) {
            prop_assert!(superior(&ms(&a), &ms(&c)));
        }
    }

    #[test]
    fn sup_equivalence_is_mutual_superiority(a in multiset(5), s in multiset(5)) {
        let (a, s) = (ms(&a), ms(&s));
        prop_assert_eq!(sup_equivalent(&a, &s), superior(&a, &s) && superior(&s, &a));
    }

    #[test]
    fn superiority_matches_brute_force(a in multiset(5), s in multiset(6)) {
        prop_assert_eq!(superior(&ms(&a), &ms(&s)), common::superior_oracle(&a, &s));
    }

    #[test]
    fn dominance_matches_brute_force(att in family(4, 3), sup in family(4, 3)) {
        prop_assert_eq!(
            dominates(&common::family(&att), &common::family(&sup)),
            common::dominates_oracle(&att, &sup)
        );
    }

    #[test]
    fn dominance_is_reflexive(f in family(4, 3)) {
        let f = SetFamily::from_values(f);
        prop_assert!(dominates(&f, &f));
    }
}
