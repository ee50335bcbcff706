use proptest::prelude::*;
use qcone::check::run_suite;
use qcone::cone::Subspace;
use qcone::cspace::{cstar_qmetric, ComplexityFunction};
use qcone::io::{parse_cone, to_json, ConeDoc};
use qcone::qnorm::{qmetric, sym_metric};
use qcone::rational::{format_q, parse_q, q};
use qcone::{ConeSpace, ExtReal, Matrix, PLQuasiNorm, QVec, Q};

fn rational() -> impl Strategy<Value = Q> {
    (-50i64..=50, 1i64..=12).prop_map(|(n, d)| Q::new(n.into(), d.into()))
}

fn vec2() -> impl Strategy<Value = QVec> {
    prop::collection::vec(rational(), 2).prop_map(QVec::new)
}

fn weights() -> impl Strategy<Value = Vec<Q>> {
    prop::collection::vec((0i64..=3).prop_map(q), 3)
}

/// `u(x) + u(y) + w(x - y)` style norms: three rows, random weights.
fn norm() -> impl Strategy<Value = PLQuasiNorm> {
    (weights(), weights()).prop_map(|(wp, wm)| {
        let m = Matrix::from_ints(2, &[&[1, 0], &[0, 1], &[1, -1]]);
        PLQuasiNorm::new(m, wp, wm).unwrap()
    })
}

fn cone() -> impl Strategy<Value = ConeSpace> {
    prop_oneof![
        Just(ConeSpace::full(2)),
        Just(ConeSpace::orthant(2)),
        Just(ConeSpace::polyhedral(Matrix::from_ints(2, &[&[0, 1]]))),
        Just(ConeSpace::polyhedral(Matrix::from_ints(2, &[&[1, 1], &[1, -1]]))),
    ]
}

fn abs_coords(v: QVec) -> QVec {
    QVec::new(v.coords().iter().map(num::Signed::abs).collect())
}

proptest! {
    #[test]
    fn rationals_print_canonically(x in rational()) {
        let text = format_q(&x);
        prop_assert_eq!(parse_q(&text).unwrap(), x.clone());
        prop_assert_eq!(format_q(&parse_q(&text).unwrap()), text);
    }

    #[test]
    fn quasi_metric_axioms(p in norm(), x in cone(), a in vec2(), b in vec2(), c in vec2()) {
        // (|a0| + |a1|, |a1|) has x >= y >= 0, which every sampled cone contains
        let shift = |v: QVec| {
            let v = abs_coords(v);
            QVec::new(vec![v[0].clone() + &v[1], v[1].clone()])
        };
        let (a, b, c) = (shift(a), shift(b), shift(c));
        let d = |s: &QVec, t: &QVec| qmetric(&p, &x, s, t).unwrap();
        prop_assert_eq!(d(&a, &a), ExtReal::zero());
        prop_assert!(d(&a, &c) <= &d(&a, &b) + &d(&b, &c));
        let s = sym_metric(&p, &x, &a, &b).unwrap();
        prop_assert_eq!(s.clone(), sym_metric(&p, &x, &b, &a).unwrap());
        prop_assert!(d(&a, &b) <= s);
    }

    #[test]
    fn canonical_representatives(g in vec2(), v in vec2(), t in rational()) {
        let sub = Subspace::span(2, std::slice::from_ref(&g));
        let rep = sub.canonical_rep(&v);
        prop_assert_eq!(sub.canonical_rep(&rep), rep.clone());
        prop_assert_eq!(sub.canonical_rep(&(&v + &g.scale(&t))), rep.clone());
        prop_assert!(sub.contains(&(&v - &rep)).unwrap());
    }

    #[test]
    fn complexity_distance_triangle(
        f in prop::collection::vec(0i64..20, 6),
        g in prop::collection::vec(0i64..20, 6),
        h in prop::collection::vec(0i64..20, 6),
    ) {
        let mk = |v: Vec<i64>| ComplexityFunction::new(v.into_iter().map(q).collect()).unwrap();
        let (f, g, h) = (mk(f), mk(g), mk(h));
        prop_assert!(cstar_qmetric(&f, &h).unwrap() <= cstar_qmetric(&f, &g).unwrap() + cstar_qmetric(&g, &h).unwrap());
    }

    #[test]
    fn cone_documents_round_trip(x in cone()) {
        let text = to_json(&ConeDoc::from_cone(&x));
        prop_assert_eq!(parse_cone(&text).unwrap(), x);
    }
}

#[test]
fn suite_passes_under_another_seed() {
    for out in run_suite(7, 10) {
        assert!(out.passed(), "{}: {:?}", out.name, out.violations);
    }
}
