//! Brute-force grid oracles. They use only pointwise evaluation of norms
//! and cone membership, never the LP kernel, so they can cross-check it.
//!
//! Grid points are `k · step` for integers `|k| <= range / step`, visited in
//! a fixed order.

use itertools::Itertools;
use num::{Signed, ToPrimitive, Zero};

use crate::cone::ConeSpace;
use crate::error::{Error, Result};
use crate::linalg::QVec;
use crate::operators::LinMap;
use crate::qnorm::PLQuasiNorm;
use crate::rational::{q, Q};

fn grid_steps(range: &Q, step: &Q) -> Result<i64> {
    if !range.is_positive() || !step.is_positive() {
        return Err(Error::Invalid("grid range and step must be positive".into()));
    }
    (range / step)
        .floor()
        .to_integer()
        .to_i64()
        .ok_or_else(|| Error::Invalid("grid too large".into()))
}

fn grid(dim: usize, range: &Q, step: &Q) -> Result<impl Iterator<Item = Vec<Q>>> {
    let k = grid_steps(range, step)?;
    let step = step.clone();
    Ok((0..dim)
        .map(|_| -k..=k)
        .multi_cartesian_product()
        .map(move |ks| ks.into_iter().map(|c| q(c) * &step).collect()))
}

/// Minimum of `p(x0 + Σ t_i b_i)` over the grid of `t`.
pub fn grid_inf(p: &PLQuasiNorm, x0: &QVec, basis: &[QVec], range: &Q, step: &Q) -> Result<Q> {
    if basis.is_empty() {
        return p.eval(x0);
    }
    let mut best: Option<Q> = None;
    for t in grid(basis.len(), range, step)? {
        let mut x = x0.clone();
        for (ti, b) in t.iter().zip(basis) {
            x = &x + &b.scale(ti);
        }
        let v = p.eval(&x)?;
        if best.as_ref().is_none_or(|b| v < *b) {
            best = Some(v);
        }
    }
    Ok(best.expect("grid is nonempty"))
}

/// `(lower, upper)` around the exact infimum of `p` over the affine set,
/// valid when some minimizer has parameters inside the grid box: the
/// nearest grid point is within `step` in every parameter.
pub fn inf_sandwich(
    p: &PLQuasiNorm,
    x0: &QVec,
    basis: &[QVec],
    range: &Q,
    step: &Q,
) -> Result<(Q, Q)> {
    let upper = grid_inf(p, x0, basis, range, step)?;
    let lip: Q = basis.iter().map(|b| p.lipschitz_along(b)).sum();
    Ok((upper.clone() - step * lip, upper))
}

/// Lipschitz constant of `p` with respect to the max-norm.
pub fn max_norm_lipschitz(p: &PLQuasiNorm) -> Q {
    p.terms()
        .iter()
        .map(|t| {
            let w = if t.wplus > t.wminus { &t.wplus } else { &t.wminus };
            let l1: Q = t.row.coords().iter().map(|c| c.abs()).sum();
            w * l1
        })
        .sum()
}

fn closure_member(cone: &ConeSpace, x: &QVec) -> bool {
    cone.closure_rows().iter().all(|r| !r.dot(x).is_negative())
}

/// Maximum of `q(f(x))` over grid members of the source with `p(x) <= 1`.
pub fn grid_sup_opnorm(f: &LinMap, range: &Q, step: &Q) -> Result<Q> {
    let src = f.source();
    let mut best = Q::zero();
    for c in grid(src.dim(), range, step)? {
        let x = QVec::new(c);
        if !src.space.member(&x)? || src.norm.eval(&x)? > q(1) {
            continue;
        }
        let v = f.target().norm.eval(&f.matrix().apply(&x)?)?;
        if v > best {
            best = v;
        }
    }
    Ok(best)
}

/// `(lower, upper)` around the exact operator norm.
///
/// The lower end is [`grid_sup_opnorm`]. For the upper end, a maximizer
/// `x*` inside the box has a grid neighbour `x'` within `step / 2` in the
/// max-norm with `p(x') <= 1 + δ`, so `‖f‖ <= q(f(x')) + L_{q∘f} · step / 2`.
/// Valid for coordinate-aligned cones (full space and orthants), where
/// rounding to the grid stays in the closed cone.
pub fn sup_sandwich(f: &LinMap, range: &Q, step: &Q) -> Result<(Q, Q)> {
    let src = f.source();
    let lower = grid_sup_opnorm(f, range, step)?;
    let half = step / q(2);
    let slack = q(1) + max_norm_lipschitz(&src.norm) * &half;
    let q_of_f = f.target().norm.compose(f.matrix())?;
    let lq = max_norm_lipschitz(&q_of_f);
    let mut upper = Q::zero();
    for c in grid(src.dim(), range, step)? {
        let x = QVec::new(c);
        if !closure_member(&src.space, &x) || src.norm.eval(&x)? > slack {
            continue;
        }
        let v = q_of_f.eval(&x)?;
        if v > upper {
            upper = v;
        }
    }
    Ok((lower, upper + lq * half))
}
