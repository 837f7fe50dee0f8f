// SPDX-License-Identifier: Apache-2.0

use super::*;
use crate::cantor::{multi_step, step, CantorPoint};
use crate::truthtable::{CoveringChain, TruthTable, Vertex};

fn p(s: &str) -> CantorPoint {
    s.parse().unwrap()
}

fn pts(list: &[&str]) -> Vec<CantorPoint> {
    list.iter().map(|s| p(s)).collect()
}

fn exact(t: &Transducer, xs: &[CantorPoint]) -> Vec<CantorPoint> {
    run(t, xs, DEFAULT_BUDGET).unwrap().points().unwrap()
}

fn truth(alpha: &CantorPoint, xs: &[CantorPoint]) -> Vec<bool> {
    xs.iter().map(|x| step(alpha, x)).collect()
}

#[test]
fn identity_and_max() {
    let xs = pts(&["01(1)", "(10)", "111(0)"]);
    assert_eq!(exact(&identity(3).unwrap(), &xs), xs);
    assert_eq!(exact(&max2(), &pts(&["010(0)", "011(0)"])), pts(&["011(0)"]));
    assert_eq!(exact(&max2(), &pts(&["00(1)", "01(0)"])), pts(&["01(0)"]));
    let x = p("1(011)");
    assert_eq!(exact(&max2(), &[x.clone(), x.clone()]), vec![x]);
}

#[test]
fn bit_flip_examples() {
    assert_eq!(exact(&bit_flip(), &pts(&["0(1)"])), pts(&["1(0)"]));
    assert_eq!(exact(&bit_flip(), &pts(&["(01)"])), pts(&["(10)"]));
    let ff = compose(bit_flip(), bit_flip()).unwrap();
    for s in ["(01)", "110(100)", "(1)"] {
        assert_eq!(exact(&ff, &pts(&[s])), pts(&[s]));
    }
}

#[test]
fn pair_machines() {
    let (x, y) = (p("0(1)"), p("(1)"));
    assert_eq!(exact(&switch_on_split(), &[x.clone(), y.clone()]), vec![x.clone(), x.clone()]);
    assert_eq!(exact(&switch_on_split(), &[y.clone(), x.clone()]), vec![y.clone(), x.clone()]);
    assert_eq!(exact(&switch_on_split(), &[x.clone(), x.clone()]), vec![x.clone(), x.clone()]);
    assert_eq!(exact(&maxmin_pair(), &[x.clone(), y.clone()]), vec![y.clone(), x.clone()]);
    let min_swap = compose(min2(), swap()).unwrap();
    assert_eq!(exact(&min_swap, &[x.clone(), y.clone()]), exact(&min2(), &[x, y]));
}

#[test]
fn sorted_examples() {
    let s = sorted(3).unwrap();
    let xs = pts(&["0(0)", "01(0)", "1(0)"]);
    assert_eq!(exact(&s, &xs), xs);
    assert_eq!(exact(&s, &pts(&["1(0)", "0(0)", "01(0)"])), xs);
    let same = pts(&["(01)", "(01)", "(01)"]);
    assert_eq!(exact(&s, &same), same);
}

#[test]
fn wtow_examples() {
    let (a, b) = (p("0(1)"), p("1(0)"));
    assert_eq!(exact(&wtow(2, 1).unwrap(), &[a.clone(), b.clone()]), vec![a.clone(), a.clone()]);
    assert_eq!(exact(&wtow1(2, 1).unwrap(), &[a.clone(), b.clone()]), vec![b.clone(), p("(1)")]);
    assert!(wtow(3, 0).is_err() && wtow(3, 3).is_err() && wtow1(3, 3).is_err());

    let alpha = p("(01)");
    let below = p("00(1)");
    let above = p("1(0)");
    let xs = vec![above.clone(), below.clone(), above.clone(), below.clone()];
    let w = exact(&wtow(4, 2).unwrap(), &xs);
    let w1 = exact(&wtow1(4, 2).unwrap(), &xs);
    assert_eq!(truth(&alpha, &w).iter().filter(|&&b| b).count(), 1);
    assert_eq!(truth(&alpha, &w1).iter().filter(|&&b| b).count(), 3);
}

#[test]
fn wtow_duplicate_after_sort() {
    let t = compose(wtow(3, 1).unwrap(), sorted(3).unwrap()).unwrap();
    let xs = pts(&["1(0)", "0(1)", "01(10)"]);
    let mut s = xs.clone();
    s.sort();
    assert_eq!(exact(&t, &xs), vec![s[0].clone(), s[1].clone(), s[1].clone()]);
}

#[test]
fn keylemma_walkthrough() {
    let alpha = p("(01)");
    let v: Vertex = "1100".parse().unwrap();
    let t = keylemma_flip(v).unwrap();
    let xs = pts(&["1(0)", "011(0)", "00(1)", "0(0)"]);
    assert_eq!(truth(&alpha, &xs), vec![true, true, false, false]);
    let out = truth(&alpha, &exact(&t, &xs));
    assert!(out == vec![true, true, true, false] || out == vec![true, true, false, true]);
    assert!(keylemma_flip("11".parse().unwrap()).is_err());
}

#[test]
fn keylemma_same_weight_is_identity() {
    let alpha = p("(01)");
    let t = keylemma_flip("1100".parse().unwrap()).unwrap();
    let xs = pts(&["1(0)", "00(1)", "011(0)", "0(0)"]);
    assert_eq!(truth(&alpha, &xs), vec![true, false, true, false]);
    assert_eq!(exact(&t, &xs), xs);
}

#[test]
fn chain_embed_examples() {
    let alpha = p("(01)");
    let chain = CoveringChain::from_order(3, &[3, 2, 1]).unwrap();
    let t = chain_embed(&chain);
    let xs = pts(&["0(0)", "01(0)", "1(0)"]);
    assert_eq!(exact(&t, &xs), xs);
    let fig: CoveringChain = "000,100,101,111".parse().unwrap();
    let t = chain_embed(&fig);
    let low = pts(&["0(0)", "00(1)", "(0)"]);
    assert_eq!(truth(&alpha, &exact(&t, &low)), vec![false; 3]);
    let high = pts(&["1(0)", "(1)", "(10)"]);
    assert_eq!(truth(&alpha, &exact(&t, &high)), vec![true; 3]);
    let one = pts(&["1(0)", "00(1)", "0(0)"]);
    assert_eq!(truth(&alpha, &exact(&t, &one)), vec![true, false, false]);
    let two = pts(&["1(0)", "(1)", "0(0)"]);
    assert_eq!(truth(&alpha, &exact(&t, &two)), vec![true, false, true]);
}

#[test]
fn plugs_and_pads() {
    let xs = pts(&["01(1)", "(10)"]);
    assert_eq!(exact(&const_plug(2, &[], &[]).unwrap(), &xs), xs);
    assert_eq!(exact(&const_plug(2, &[2], &[true]).unwrap(), &xs), pts(&["01(1)", "(1)"]));
    assert!(const_plug(2, &[3], &[true]).is_err());
    assert!(const_plug(2, &[1, 1], &[true, false]).is_err());
    let padded = exact(&pad_ones(2, 4).unwrap(), &xs);
    assert_eq!(padded, pts(&["01(1)", "(10)", "(1)", "(1)"]));
    let alpha = p("(01)");
    let three = pts(&["1(0)", "(1)", "(10)"]);
    let kept = exact(&keep_smallest(3, 2).unwrap(), &three);
    assert_eq!(truth(&alpha, &kept), vec![true, true]);
}

#[test]
fn zero_width_composition() {
    let t = compose(pad_zeros(0, 2).unwrap(), keep_smallest(3, 0).unwrap()).unwrap();
    assert_eq!(exact(&t, &pts(&["(1)", "(0)", "(01)"])), pts(&["(0)", "(0)"]));
}

#[test]
fn finite_outputs() {
    let out = run(&Transducer::Stall { arity_in: 1, arity_out: 1 }, &pts(&["(01)"]), 64).unwrap();
    assert_eq!(out.outputs, vec![Stream::Finite(vec![])]);
    let t = Transducer::Truncate { arity: 1, limit: 3 };
    let out = run(&t, &pts(&["(01)"]), 64).unwrap();
    assert_eq!(out.outputs, vec![Stream::Finite(vec![false, true, false])]);
    assert_eq!(run_finite(&t, &[vec![true; 5]]).unwrap(), vec![vec![true; 3]]);
}

#[test]
fn localizer_examples() {
    let thresholds = pts(&["0(01)", "1(01)"]);
    let seps = crate::cantor::dyadic_separators(&thresholds).unwrap();
    let w = interval_localizer(&thresholds, &seps).unwrap();
    let low = exact(&w.pre, &pts(&["00(1)"]));
    assert_eq!(low, pts(&["00(1)", "(0)"]));
    let high = exact(&w.pre, &pts(&["11(0)"]));
    assert_eq!(high, pts(&["(0)", "11(0)"]));
    for s in ["(0)", "0(01)", "01(0)", "011(0)", "1(0)", "1(01)", "(1)", "(01)", "(10)"] {
        let x = p(s);
        let y = exact(&w.pre, std::slice::from_ref(&x));
        let a = w.target.eval(&y).unwrap();
        let b = w.post.apply(a, std::slice::from_ref(&x)).unwrap();
        assert_eq!(b as usize, multi_step(&thresholds, &x).unwrap(), "x={s}");
    }
}

#[test]
fn undetermined_budget() {
    let t = sorted(2).unwrap();
    let xs = pts(&["0000000000(1)", "(01)"]);
    assert!(matches!(run(&t, &xs, 4), Err(RunError::Undetermined { .. })));
    assert!(run_with_schedule(&t, &xs, &[4, 64]).is_ok());
}

#[test]
fn certificate_round_trip() {
    let alpha = p("(01)");
    let cert = witness::Certificate {
        source: Problem::step_equal(TruthTable::or2(), &alpha),
        target: Problem::single(&alpha),
        stages: vec![Stage::Max],
        post: PostMap::identity(),
    };
    let text = cert.to_text();
    assert_eq!(witness::Certificate::parse(&text).unwrap(), cert);
    assert_eq!(witness::Certificate::parse(&text).unwrap().to_text(), text);
    let truncated: String = text.lines().take(3).map(|l| format!("{l}\n")).collect();
    assert!(witness::Certificate::parse(&truncated).is_err());
}
