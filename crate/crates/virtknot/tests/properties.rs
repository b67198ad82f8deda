//! Property tests over randomized diagrams and polynomials.

use proptest::prelude::*;

use virtknot::diagram::{parse_gauss_code, serialize_gauss_code, ChordId, GaussDiagram, Role};
use virtknot::invariants::{parse_poly, writhe_polynomial, LaurentPolynomial};

/// Strategy: a valid Gauss diagram with up to `max` chords, canonical labels.
fn diagram_strategy(max: usize) -> impl Strategy<Value = GaussDiagram> {
    (0..=max)
        .prop_flat_map(|n| {
            let slots: Vec<usize> = (0..2 * n).collect();
            (
                Just(n),
                Just(slots).prop_shuffle(),
                prop::collection::vec(any::<bool>(), n),
            )
        })
        .prop_map(|(n, slots, signs)| {
            let mut word = vec![None; 2 * n];
            for i in 0..n {
                let sign = if signs[i] { 1 } else { -1 };
                let id = ChordId(i as u32 + 1);
                word[slots[2 * i]] = Some((id, Role::Over, sign));
                word[slots[2 * i + 1]] = Some((id, Role::Under, sign));
            }
            let word = word.into_iter().map(Option::unwrap).collect();
            GaussDiagram::from_word(word).unwrap().canonical_labels()
        })
}

fn poly_strategy() -> impl Strategy<Value = LaurentPolynomial> {
    prop::collection::btree_map(-20i64..=20, -100i64..=100, 0..6).prop_map(|m| {
        let mut f = LaurentPolynomial::default();
        for (e, c) in m {
            f.add_term(e, c);
        }
        f
    })
}

proptest! {
    #[test]
    fn gauss_code_round_trip(d in diagram_strategy(8)) {
        let code = serialize_gauss_code(&d);
        prop_assert_eq!(parse_gauss_code(&code).unwrap(), d);
    }

    #[test]
    fn interleaving_symmetric_sense_antisymmetric(d in diagram_strategy(7)) {
        let ids: Vec<ChordId> = d.chord_ids().collect();
        for &a in &ids {
            for &b in &ids {
                if a == b {
                    continue;
                }
                prop_assert_eq!(d.interleaves(a, b).unwrap(), d.interleaves(b, a).unwrap());
                if d.interleaves(a, b).unwrap() {
                    prop_assert_eq!(
                        d.crossing_sense(a, b).unwrap(),
                        -d.crossing_sense(b, a).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn writhe_polynomial_admissible(d in diagram_strategy(8)) {
        let w = writhe_polynomial(&d);
        prop_assert_eq!(w.eval_at_one(), 0);
        prop_assert_eq!(w.derivative_at_one(), 0);
    }

    #[test]
    fn connected_sum_adds_polynomials(a in diagram_strategy(5), b in diagram_strategy(5)) {
        let sum = a.connected_sum(&b);
        prop_assert_eq!(
            writhe_polynomial(&sum),
            writhe_polynomial(&a).add(&writhe_polynomial(&b))
        );
    }

    #[test]
    fn poly_text_round_trip(f in poly_strategy()) {
        let text = f.to_string();
        prop_assert_eq!(parse_poly(&text).unwrap(), f);
    }

    #[test]
    fn poly_json_round_trip(f in poly_strategy()) {
        let json = serde_json::to_string(&f).unwrap();
        prop_assert_eq!(serde_json::from_str::<LaurentPolynomial>(&json).unwrap(), f);
    }
}
