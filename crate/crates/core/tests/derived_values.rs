//! Values that are not read off a worked example but derived, each checked
//! against a brute-force grid search written here. The grid search only
//! evaluates norms pointwise, so it shares nothing with the LP code.

use itertools::Itertools;
use num::{Signed, Zero};
use qcone::cone::Subspace;
use qcone::cspace::{cstar_norm, ComplexityFunction};
use qcone::lp::minimize_pl_over_coset;
use qcone::operators::{functional_norm, polar, DualIsometry, LinMap, NormedCone, Openness};
use qcone::qnorm::{dist_to_subspace, sym_metric, Direction};
use qcone::quotient::{QuotientOptions, QuotientSpace};
use qcone::rational::{frac, pos, q};
use qcone::{ConeSpace, ExtReal, Matrix, PLQuasiNorm, QVec, Q};

fn v(c: &[i64]) -> QVec {
    QVec::from_ints(c)
}

/// Points `k * step` with `|k * step| <= range` in every coordinate.
fn grid(dim: usize, range: i64, step: &Q) -> Vec<QVec> {
    let k = (q(range) / step).to_integer();
    let k: i64 = k.try_into().unwrap();
    (0..dim)
        .map(|_| -k..=k)
        .multi_cartesian_product()
        .map(|ks| QVec::new(ks.into_iter().map(|c| q(c) * step).collect()))
        .collect()
}

fn in_closed_cone(cone: &ConeSpace, x: &QVec) -> bool {
    cone.closure_rows().iter().all(|r| !r.dot(x).is_negative())
}

/// `min p(x0 + Σ t_i b_i)` over grid parameters.
fn grid_coset_min(p: &PLQuasiNorm, x0: &QVec, basis: &[QVec], range: i64, step: &Q) -> Q {
    if basis.is_empty() {
        return p.eval(x0).unwrap();
    }
    grid(basis.len(), range, step)
        .iter()
        .map(|t| {
            let mut x = x0.clone();
            for (ti, b) in t.coords().iter().zip(basis) {
                x = &x + &b.scale(ti);
            }
            p.eval(&x).unwrap()
        })
        .min()
        .unwrap()
}

/// `max f(x)` over grid points of the closed cone with `p(x) <= 1`.
fn grid_ball_max(cone: &ConeSpace, p: &PLQuasiNorm, range: i64, step: &Q, f: impl Fn(&QVec) -> Q) -> Q {
    grid(cone.dim(), range, step)
        .iter()
        .filter(|x| in_closed_cone(cone, x) && p.eval(x).unwrap() <= q(1))
        .map(&f)
        .max()
        .unwrap_or_else(Q::zero)
}

fn upper_sum() -> PLQuasiNorm {
    PLQuasiNorm::upper_sum(2)
}

fn halfspace() -> ConeSpace {
    ConeSpace::polyhedral(Matrix::from_ints(2, &[&[0, 1]]))
}

#[test]
fn symmetrized_distance_is_three() {
    let (x, y) = (v(&[2, 3]), v(&[1, 1]));
    let p = upper_sum();
    let direct = p.eval(&(&y - &x)).unwrap().max(p.eval(&(&x - &y)).unwrap());
    assert_eq!(direct, q(3));
    assert_eq!(
        sym_metric(&p, &ConeSpace::full(2), &x, &y).unwrap(),
        ExtReal::Finite(direct)
    );
}

#[test]
fn distance_into_the_diagonal_vanishes() {
    let p = upper_sum();
    let diag = Subspace::span(2, &[v(&[1, 1])]);
    let x = v(&[2, 3]);
    // d(g, x) = p(x - g) with g = t(1,1)
    let oracle = grid_coset_min(&p, &x, &[v(&[-1, -1])], 10, &frac(1, 100));
    assert_eq!(oracle, q(0));
    let exact = dist_to_subspace(&p, &ConeSpace::full(2), &x, &diag, Direction::ToX).unwrap();
    assert_eq!(exact, ExtReal::Finite(oracle));
}

#[test]
fn horizontal_coset_minimum_is_three() {
    let p = upper_sum();
    let g = Subspace::span(2, &[v(&[1, 0])]);
    let step = frac(1, 100);
    let oracle = grid_coset_min(&p, &v(&[2, 3]), g.basis(), 10, &step);
    let lip = p.lipschitz_along(&g.basis()[0]);
    let exact = minimize_pl_over_coset(&p, &v(&[2, 3]), &g, None).unwrap();
    let exact = exact.value().unwrap().clone();
    assert!(oracle.clone() - step * lip <= exact && exact <= oracle);
    assert_eq!(exact, q(3));

    // the horizontal line is not closed under u⊕u, so p̂ is only a prenorm
    let qs = QuotientSpace::build_with(
        ConeSpace::full(2),
        p,
        halfspace(),
        QuotientOptions {
            allow_prenorm: true,
        },
    )
    .unwrap();
    assert_eq!(qs.hat_p(&qs.class_of(&v(&[2, 3])).unwrap()).unwrap(), q(3));
}

#[test]
fn quotient_map_norm_is_one() {
    let qs = QuotientSpace::build_with(
        ConeSpace::full(2),
        upper_sum(),
        halfspace(),
        QuotientOptions {
            allow_prenorm: true,
        },
    )
    .unwrap();
    let p = upper_sum();
    let step = frac(1, 4);
    let oracle = grid_ball_max(&ConeSpace::full(2), &p, 2, &step, |x| {
        grid_coset_min(&p, x, &[v(&[1, 0])], 4, &step)
    });
    assert_eq!(oracle, q(1));
    assert_eq!(qs.quotient_map_norm().unwrap(), ExtReal::Finite(q(1)));
}

#[test]
fn polar_of_horizontal_line() {
    let qs = QuotientSpace::build_with(
        ConeSpace::full(2),
        upper_sum(),
        halfspace(),
        QuotientOptions {
            allow_prenorm: true,
        },
    )
    .unwrap();
    let gens = polar(&qs).unwrap();
    assert_eq!(gens.len(), 1);
    assert_eq!(gens[0].functional, v(&[0, 1]));
    let step = frac(1, 4);
    let c = v(&[0, 1]);
    let oracle = grid_ball_max(&ConeSpace::full(2), &upper_sum(), 3, &step, |x| pos(&c.dot(x)));
    assert_eq!(ExtReal::Finite(oracle), ExtReal::Finite(gens[0].norm.clone()));

    // (-1, 0) is unbounded on the ball: the grid maximum tracks the range
    let bad = v(&[-1, 0]);
    let at = |r| grid_ball_max(&ConeSpace::full(2), &upper_sum(), r, &q(1), |x| pos(&bad.dot(x)));
    assert_eq!((at(3), at(6)), (q(3), q(6)));
    let src = NormedCone::new(ConeSpace::full(2), upper_sum()).unwrap();
    assert_eq!(functional_norm(&src, &bad).unwrap(), ExtReal::Infinity);
}

#[test]
fn fiber_minimum_openness() {
    let p = PLQuasiNorm::diagonal(vec![q(0), q(1)], vec![q(0), q(0)]).unwrap();
    let src = NormedCone::new(halfspace(), p.clone()).unwrap();
    let tgt = NormedCone::new(ConeSpace::orthant(1), PLQuasiNorm::upper_sum(1)).unwrap();
    let f = LinMap::new(Matrix::from_ints(2, &[&[0, 1]]), src, tgt).unwrap();
    // every y > 0 is reached by (t, y) with p = y, so the ratio is 1
    let step = frac(1, 4);
    let pts = grid(2, 3, &step);
    for y in [frac(1, 4), q(1), q(2)] {
        let best = pts
            .iter()
            .filter(|x| in_closed_cone(&halfspace(), x) && x[1] == y)
            .map(|x| p.eval(x).unwrap())
            .min()
            .unwrap();
        assert_eq!(best / &y, q(1));
    }
    assert_eq!(f.openness_constant().unwrap(), Openness::Constant(q(1)));
}

#[test]
fn degenerate_projection_reaches_everything_for_free() {
    let abs_y = PLQuasiNorm::diagonal(vec![q(0), q(1)], vec![q(0), q(1)]).unwrap();
    let f = LinMap::new(
        Matrix::from_ints(2, &[&[1, 0]]),
        NormedCone::new(ConeSpace::full(2), abs_y.clone()).unwrap(),
        NormedCone::upper_reals(),
    )
    .unwrap();
    let pts = grid(2, 2, &frac(1, 2));
    for y in [q(-2), q(1), q(2)] {
        let best = pts
            .iter()
            .filter(|x| x[0] == y)
            .map(|x| abs_y.eval(x).unwrap())
            .min()
            .unwrap();
        assert!(best.is_zero());
    }
    assert_eq!(f.openness_constant().unwrap(), Openness::Constant(q(0)));
}

#[test]
fn weighted_sum_of_a_short_function() {
    let mut vals = vec![q(0); 8];
    vals[0] = q(1);
    vals[1] = q(2);
    let direct: Q = vals
        .iter()
        .enumerate()
        .map(|(n, c)| c / q(2).pow(n as i32))
        .sum();
    assert_eq!(direct, q(2));
    assert_eq!(cstar_norm(&ComplexityFunction::new(vals).unwrap()), direct);
}

#[test]
fn dual_of_second_coordinate() {
    let qs = QuotientSpace::build(ConeSpace::full(2), PLQuasiNorm::l1(2), halfspace()).unwrap();
    let iso = DualIsometry::new(&qs).unwrap();
    let h = iso.forward(&v(&[1])).unwrap();
    assert_eq!(h, v(&[0, 1]));
    let step = frac(1, 4);
    let on_space = grid_ball_max(&ConeSpace::full(2), &PLQuasiNorm::l1(2), 2, &step, |x| pos(&h.dot(x)));
    assert_eq!(on_space, q(1));
    assert_eq!(iso.norm_on_space(&h).unwrap(), ExtReal::Finite(on_space.clone()));
    assert_eq!(iso.norm_on_quotient(&v(&[1])).unwrap(), ExtReal::Finite(on_space));
}

#[test]
fn operator_norm_of_identity_from_below() {
    let nc = NormedCone::new(ConeSpace::full(2), upper_sum()).unwrap();
    let id = LinMap::new(Matrix::identity(2), nc.clone(), nc).unwrap();
    let mut prev = Q::zero();
    for step in [frac(1, 2), frac(1, 4), frac(1, 8)] {
        let g = grid_ball_max(&ConeSpace::full(2), &upper_sum(), 2, &step, |x| upper_sum().eval(x).unwrap());
        assert!(g >= prev && g <= q(1));
        prev = g;
    }
    assert_eq!(id.op_norm().unwrap(), ExtReal::Finite(q(1)));
}
