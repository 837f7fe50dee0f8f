// SPDX-License-Identifier: Apache-2.0

use std::cmp::Ordering;

use proptest::prelude::*;

use weihrauch_steps::cantor::{step, CantorPoint};
use weihrauch_steps::normalize::{compile_reduction, normalize_to_k};
use weihrauch_steps::transducer::{run, run_finite, sorted, DEFAULT_BUDGET};
use weihrauch_steps::truthtable::{TruthTable, Vertex};
use weihrauch_steps::verify::{brute_force_l, check_witness, sample_points, Status, DEPTH_SCHEDULE};

fn point() -> impl Strategy<Value = CantorPoint> {
    (prop::collection::vec(any::<bool>(), 0..6), prop::collection::vec(any::<bool>(), 1..5))
        .prop_map(|(p, q)| CantorPoint::new(p, q).unwrap())
}

fn proper_point() -> impl Strategy<Value = CantorPoint> {
    point().prop_filter("proper", CantorPoint::is_proper)
}

fn table(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = TruthTable> {
    n.prop_flat_map(|n| prop::collection::vec(any::<bool>(), 1 << n).prop_map(move |v| TruthTable::new(n, v).unwrap()))
}

proptest! {
    #[test]
    fn point_text_round_trip(x in point()) {
        let back: CantorPoint = x.to_string().parse().unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn lex_order_matches_bits(x in point(), y in point()) {
        let ord = x.lex_compare(&y);
        prop_assert_eq!(ord, x.cmp(&y));
        match x.first_difference(&y) {
            None => prop_assert_eq!(ord, Ordering::Equal),
            Some(i) => {
                prop_assert_eq!(x.prefix_bits(i), y.prefix_bits(i));
                prop_assert_eq!(ord, x.bit(i).cmp(&y.bit(i)));
            }
        }
        let horizon = 64;
        let (a, b) = (x.prefix_bits(horizon), y.prefix_bits(horizon));
        if ord == Ordering::Equal {
            prop_assert_eq!(a, b);
        } else {
            prop_assert_eq!(ord, a.cmp(&b));
        }
    }

    #[test]
    fn step_is_monotone(a in proper_point(), x in point(), y in point()) {
        if x <= y && step(&a, &x) {
            prop_assert!(step(&a, &y));
        }
        prop_assert_eq!(step(&a, &x), x >= a);
    }

    #[test]
    fn alternation_invariant_under_negation(f in table(1..=5)) {
        prop_assert_eq!(f.alternation_length(), f.negated().alternation_length());
    }

    #[test]
    fn alternation_matches_oracle(f in table(1..=4)) {
        prop_assert_eq!(f.alternation_length(), brute_force_l(&f).unwrap());
    }

    #[test]
    fn permitted_flip_never_lowers_alternation(f in table(1..=4), raw in any::<u32>()) {
        let n = f.dim();
        let v = Vertex::new(n, raw % ((1 << n) - 1)).unwrap();
        if f.check_flip_conditions(&v).unwrap() {
            prop_assert!(f.flipped_at(&v).alternation_length() >= f.alternation_length());
        }
    }

    #[test]
    fn sorted_outputs_are_ranks(xs in prop::collection::vec(point(), 1..=4)) {
        let n = xs.len();
        let ys = run(&sorted(n).unwrap(), &xs, DEFAULT_BUDGET).unwrap().points().unwrap();
        let mut want = xs.clone();
        want.sort();
        let mut got = ys.clone();
        got.sort();
        prop_assert_eq!(&got, &want);
        let ascending = ys.windows(2).all(|w| w[0] <= w[1]);
        let descending = ys.windows(2).all(|w| w[0] >= w[1]);
        prop_assert!(ascending || descending);
    }

    #[test]
    fn sorted_prefix_law(xs in prop::collection::vec(point(), 1..=4), k in 0usize..24) {
        let t = sorted(xs.len()).unwrap();
        let full = run(&t, &xs, DEFAULT_BUDGET).unwrap().points().unwrap();
        let words: Vec<Vec<bool>> = xs.iter().map(|x| x.prefix_bits(k)).collect();
        let partial = run_finite(&t, &words).unwrap();
        for (y, w) in full.iter().zip(&partial) {
            prop_assert!(w.len() <= k);
            prop_assert_eq!(&y.prefix_bits(w.len()), w);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_tables_normalize(f in table(4..=5)) {
        let r = normalize_to_k(&f).unwrap();
        let l = f.alternation_length();
        prop_assert_eq!(&r.table, &TruthTable::top_alternating(f.dim(), l).unwrap());
        prop_assert!(r.trace.iter().all(|t| t.alternation_length() == l));
    }

    #[test]
    fn compiled_witnesses_pass(f in table(1..=3), g in table(1..=3), a in proper_point(), seed in any::<u64>()) {
        let (f, g) = if f.alternation_length() <= g.alternation_length() { (f, g) } else { (g, f) };
        let w = compile_reduction(&f, &g, &a).unwrap().witness().unwrap();
        let samples = sample_points(&a, f.dim(), 32, seed).unwrap();
        let rep = check_witness(&w, &samples, &DEPTH_SCHEDULE).unwrap();
        prop_assert_eq!(rep.status, Status::Pass);
    }
}
