//! Piecewise-linear quasi-norms and the extended quasi-metric they induce.
//!
//! A [`PLQuasiNorm`] is `p(x) = Σ_i w⁺_i·u((Mx)_i) + w⁻_i·u(-(Mx)_i)` with
//! `u(t) = t ∨ 0`. On a cone `X` it induces
//!
//! ```text
//! d_p(x, y) = p(y - x)   if y - x ∈ X
//!           = +inf       otherwise
//! ```
//!
//! which is an invariant extended quasi-metric.

use num::{Signed, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use crate::cone::{ConeSpace, Subspace};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, QVec};
use crate::lp::{minimize_pl_over_coset, CosetMin};
use crate::rational::{format_q, pos, q, Q};

/// Cap on the number of linear pieces any exact decomposition may enumerate.
pub const MAX_PIECES: usize = 1 << 12;

/// A nonnegative exact rational or `+inf`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExtReal {
    Finite(Q),
    Infinity,
}

impl ExtReal {
    pub fn zero() -> Self {
        ExtReal::Finite(Q::zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    pub fn finite(&self) -> Option<&Q> {
        match self {
            ExtReal::Finite(v) => Some(v),
            ExtReal::Infinity => None,
        }
    }

    /// `r · self` for `r >= 0`; `r · inf = inf` when `r > 0` and `0 · inf = 0`.
    pub fn scale(&self, r: &Q) -> ExtReal {
        match self {
            ExtReal::Finite(v) => ExtReal::Finite(v * r),
            ExtReal::Infinity if r.is_zero() => ExtReal::zero(),
            ExtReal::Infinity => ExtReal::Infinity,
        }
    }

    pub fn max(self, other: ExtReal) -> ExtReal {
        if self >= other {
            self
        } else {
            other
        }
    }
}

impl From<Q> for ExtReal {
    fn from(v: Q) -> Self {
        ExtReal::Finite(v)
    }
}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtReal {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => a.cmp(b),
            (ExtReal::Finite(_), ExtReal::Infinity) => Ordering::Less,
            (ExtReal::Infinity, ExtReal::Finite(_)) => Ordering::Greater,
            (ExtReal::Infinity, ExtReal::Infinity) => Ordering::Equal,
        }
    }
}

impl Add for &ExtReal {
    type Output = ExtReal;
    fn add(self, rhs: &ExtReal) -> ExtReal {
        match (self, rhs) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => ExtReal::Finite(a + b),
            _ => ExtReal::Infinity,
        }
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::Finite(v) => f.write_str(&format_q(v)),
            ExtReal::Infinity => f.write_str("inf"),
        }
    }
}

/// One summand `w⁺·u(row·x) + w⁻·u(-row·x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlTerm {
    pub row: QVec,
    pub wplus: Q,
    pub wminus: Q,
}

impl PlTerm {
    pub fn eval(&self, x: &QVec) -> Q {
        let t = self.row.dot(x);
        &self.wplus * pos(&t) + &self.wminus * pos(&-t)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PLQuasiNorm {
    m: Matrix,
    wplus: Vec<Q>,
    wminus: Vec<Q>,
}

impl PLQuasiNorm {
    pub fn new(m: Matrix, wplus: Vec<Q>, wminus: Vec<Q>) -> Result<Self> {
        let k = m.nrows();
        if wplus.len() != k || wminus.len() != k {
            return Err(Error::InvalidQuasiNorm(format!(
                "{k} rows but {} positive and {} negative weights",
                wplus.len(),
                wminus.len()
            )));
        }
        if wplus.iter().chain(&wminus).any(Signed::is_negative) {
            return Err(Error::InvalidQuasiNorm("weights must be nonnegative".into()));
        }
        if m.ncols() == 0 {
            return Err(Error::InvalidQuasiNorm("dimension must be positive".into()));
        }
        Ok(PLQuasiNorm { m, wplus, wminus })
    }

    /// Identity change of coordinates.
    pub fn diagonal(wplus: Vec<Q>, wminus: Vec<Q>) -> Result<Self> {
        Self::new(Matrix::identity(wplus.len()), wplus, wminus)
    }

    /// `u(x_1) + … + u(x_n)`.
    pub fn upper_sum(dim: usize) -> Self {
        Self::diagonal(vec![q(1); dim], vec![Q::zero(); dim]).expect("well-formed")
    }

    /// `|x_1| + … + |x_n|`.
    pub fn l1(dim: usize) -> Self {
        Self::diagonal(vec![q(1); dim], vec![q(1); dim]).expect("well-formed")
    }

    pub fn dim(&self) -> usize {
        self.m.ncols()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.m
    }

    pub fn wplus(&self) -> &[Q] {
        &self.wplus
    }

    pub fn wminus(&self) -> &[Q] {
        &self.wminus
    }

    pub fn terms(&self) -> Vec<PlTerm> {
        self.m
            .rows()
            .iter()
            .zip(self.wplus.iter().zip(&self.wminus))
            .map(|(row, (wp, wm))| PlTerm {
                row: row.clone(),
                wplus: wp.clone(),
                wminus: wm.clone(),
            })
            .collect()
    }

    pub fn eval(&self, x: &QVec) -> Result<Q> {
        x.check_dim(self.dim())?;
        let mut total = Q::zero();
        for (row, (wp, wm)) in self.m.rows().iter().zip(self.wplus.iter().zip(&self.wminus)) {
            let r = row.dot(x);
            if r.is_positive() {
                if !wp.is_zero() {
                    total += wp * r;
                }
            } else if r.is_negative() && !wm.is_zero() {
                total -= wm * r;
            }
        }
        Ok(total)
    }

    /// `x ↦ p(A x)`.
    pub fn compose(&self, a: &Matrix) -> Result<PLQuasiNorm> {
        let m = self.m.mul(a)?;
        PLQuasiNorm::new(m, self.wplus.clone(), self.wminus.clone())
    }

    /// Subspace on which both `p(x)` and `p(-x)` vanish.
    pub fn kernel(&self) -> Subspace {
        let rows: Vec<QVec> = self
            .terms()
            .into_iter()
            .filter(|t| t.wplus.is_positive() || t.wminus.is_positive())
            .map(|t| t.row)
            .collect();
        Subspace::span(self.dim(), &crate::linalg::null_space(self.dim(), &rows))
    }

    /// Linear functionals `l` with `p(x) = max_l l·x`.
    ///
    /// Each summand equals `max(w⁺ r·x, -w⁻ r·x)`, so `p` is the maximum over
    /// all sign choices. Parallel rows are merged first; the result is
    /// deduplicated. Fails when more than `limit` choices would be needed.
    pub fn pieces(&self, limit: usize) -> Result<Vec<QVec>> {
        let mut groups: Vec<(QVec, Q, Q)> = Vec::new();
        for t in self.terms() {
            if t.row.is_zero() || (t.wplus.is_zero() && t.wminus.is_zero()) {
                continue;
            }
            // row = scale · dir with dir's first nonzero entry equal to ±1
            let lead = t.row.coords().iter().find(|c| !c.is_zero()).cloned().unwrap();
            let scale = lead.abs();
            let mut dir = t.row.scale(&(q(1) / &scale));
            let (mut wp, mut wm) = (&t.wplus * &scale, &t.wminus * &scale);
            if lead.is_negative() {
                dir = -&dir;
                std::mem::swap(&mut wp, &mut wm);
            }
            match groups.iter_mut().find(|g| g.0 == dir) {
                Some(g) => {
                    g.1 += wp;
                    g.2 += wm;
                }
                None => groups.push((dir, wp, wm)),
            }
        }
        if groups.len() >= usize::BITS as usize || (1usize << groups.len()) > limit {
            return Err(Error::Unsupported {
                family: "piecewise-linear quasi-norm".into(),
                pieces: 1usize.checked_shl(groups.len() as u32).unwrap_or(usize::MAX),
                limit,
            });
        }
        let mut out: Vec<QVec> = vec![QVec::zeros(self.dim())];
        for (dir, wp, wm) in groups {
            let up = dir.scale(&wp);
            let down = dir.scale(&-wm);
            let mut next = Vec::with_capacity(out.len() * 2);
            for base in &out {
                for choice in [&up, &down] {
                    let v = base + choice;
                    if !next.contains(&v) {
                        next.push(v);
                    }
                }
            }
            out = next;
        }
        Ok(out)
    }

    /// Lipschitz bound of `t ↦ p(x0 + t·b)` for a direction `b`.
    pub fn lipschitz_along(&self, b: &QVec) -> Q {
        self.terms()
            .iter()
            .map(|t| {
                let w = if t.wplus > t.wminus {
                    &t.wplus
                } else {
                    &t.wminus
                };
                w * t.row.dot(b).abs()
            })
            .sum()
    }
}

/// Whether `p` is a quasi-norm on `x`: no nonzero `v` with `±v ∈ X` and
/// `p(v) = p(-v) = 0`.
pub fn validate_qnorm(p: &PLQuasiNorm, x: &ConeSpace) -> Result<bool> {
    if p.dim() != x.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            found: p.dim(),
        });
    }
    Ok(p.kernel().intersect(&x.lineality()).dim() == 0)
}

/// `d_p(x, y)`: `p(y - x)` when `y - x ∈ X`, `+inf` otherwise.
pub fn qmetric(p: &PLQuasiNorm, x_cone: &ConeSpace, x: &QVec, y: &QVec) -> Result<ExtReal> {
    check_compat(p, x_cone)?;
    x_cone.require_member(x, "first point")?;
    x_cone.require_member(y, "second point")?;
    let a = y - x;
    if x_cone.member(&a)? {
        Ok(ExtReal::Finite(p.eval(&a)?))
    } else {
        Ok(ExtReal::Infinity)
    }
}

/// `max(d_p(x, y), d_p(y, x))`.
pub fn sym_metric(p: &PLQuasiNorm, x_cone: &ConeSpace, x: &QVec, y: &QVec) -> Result<ExtReal> {
    Ok(qmetric(p, x_cone, x, y)?.max(qmetric(p, x_cone, y, x)?))
}

/// `y ∈ B(center, r)` (open) or `y ∈ B̄(center, r)` (closed).
pub fn ball_member(
    p: &PLQuasiNorm,
    x_cone: &ConeSpace,
    center: &QVec,
    radius: &Q,
    y: &QVec,
    closed: bool,
) -> Result<bool> {
    if !radius.is_positive() {
        return Err(Error::Invalid("ball radius must be positive".into()));
    }
    let d = qmetric(p, x_cone, center, y)?;
    let r = ExtReal::Finite(radius.clone());
    Ok(if closed { d <= r } else { d < r })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `inf_g d_p(x, g)`
    FromX,
    /// `inf_g d_p(g, x)`
    ToX,
}

/// Distance between `x` and the subspace `l ⊆ X`, in the given direction.
pub fn dist_to_subspace(
    p: &PLQuasiNorm,
    x_cone: &ConeSpace,
    x: &QVec,
    l: &Subspace,
    direction: Direction,
) -> Result<ExtReal> {
    check_compat(p, x_cone)?;
    x_cone.require_member(x, "point")?;
    // d(x, g) = p(g - x) needs g - x ∈ X; d(g, x) = p(x - g) needs x - g ∈ X.
    // Both are minimizations of p over a coset of l.
    let x0 = match direction {
        Direction::FromX => -x,
        Direction::ToX => x.clone(),
    };
    Ok(match minimize_pl_over_coset(p, &x0, l, Some(x_cone))? {
        CosetMin::Optimal { value, .. } => ExtReal::Finite(value),
        CosetMin::Infeasible => ExtReal::Infinity,
    })
}

pub(crate) fn check_compat(p: &PLQuasiNorm, x_cone: &ConeSpace) -> Result<()> {
    if p.dim() != x_cone.dim() {
        return Err(Error::DimensionMismatch {
            expected: x_cone.dim(),
            found: p.dim(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn v(c: &[i64]) -> QVec {
        QVec::from_ints(c)
    }

    fn abs_second() -> PLQuasiNorm {
        PLQuasiNorm::diagonal(vec![q(0), q(1)], vec![q(0), q(1)]).unwrap()
    }

    fn upper_second() -> PLQuasiNorm {
        PLQuasiNorm::diagonal(vec![q(0), q(1)], vec![q(0), q(0)]).unwrap()
    }

    #[test]
    fn eval_examples() {
        let p = PLQuasiNorm::upper_sum(2);
        assert_eq!(p.eval(&v(&[2, 3])).unwrap(), q(5));
        assert_eq!(p.eval(&v(&[-1, -2])).unwrap(), q(0));
        assert_eq!(abs_second().eval(&v(&[7, -3])).unwrap(), q(3));
        assert!(p.eval(&v(&[1])).is_err());
    }

    #[test]
    fn negative_weights_rejected() {
        assert!(PLQuasiNorm::diagonal(vec![q(-1)], vec![q(0)]).is_err());
        assert!(PLQuasiNorm::diagonal(vec![q(1)], vec![]).is_err());
    }

    #[test]
    fn validity_examples() {
        let full = ConeSpace::full(2);
        assert!(validate_qnorm(&PLQuasiNorm::upper_sum(2), &full).unwrap());
        assert!(!validate_qnorm(&upper_second(), &full).unwrap());
        let ray = ConeSpace::polyhedral(Matrix::from_ints(2, &[&[1, 0], &[-1, 0], &[0, 1]]));
        assert!(validate_qnorm(&upper_second(), &ray).unwrap());
    }

    #[test]
    fn qmetric_examples() {
        let p = PLQuasiNorm::upper_sum(2);
        let full = ConeSpace::full(2);
        assert_eq!(qmetric(&p, &full, &v(&[2, 3]), &v(&[1, 1])).unwrap(), ExtReal::zero());
        assert_eq!(qmetric(&p, &full, &v(&[1, 1]), &v(&[2, 3])).unwrap(), q(3).into());
        let orthant = ConeSpace::orthant(2);
        assert_eq!(
            qmetric(&p, &orthant, &v(&[1, 1]), &v(&[0, 0])).unwrap(),
            ExtReal::Infinity
        );
        assert!(matches!(
            qmetric(&p, &orthant, &v(&[-1, 1]), &v(&[0, 0])),
            Err(Error::NotMember { .. })
        ));
    }

    #[test]
    fn symmetrized_examples() {
        let p = PLQuasiNorm::upper_sum(2);
        let full = ConeSpace::full(2);
        // d(x,y) = u(-1)+u(-2) = 0, d(y,x) = u(1)+u(2) = 3
        assert_eq!(sym_metric(&p, &full, &v(&[2, 3]), &v(&[1, 1])).unwrap(), q(3).into());
        assert_eq!(sym_metric(&p, &full, &v(&[4, 4]), &v(&[4, 4])).unwrap(), ExtReal::zero());
        let orthant = ConeSpace::orthant(2);
        assert_eq!(
            sym_metric(&p, &orthant, &v(&[1, 1]), &v(&[0, 0])).unwrap(),
            ExtReal::Infinity
        );
    }

    #[test]
    fn ball_examples() {
        let u = PLQuasiNorm::upper_sum(1);
        let line = ConeSpace::full(1);
        assert!(ball_member(&u, &line, &v(&[0]), &q(1), &v(&[1]), true).unwrap());
        assert!(!ball_member(&u, &line, &v(&[0]), &q(1), &v(&[1]), false).unwrap());
        let p = PLQuasiNorm::upper_sum(2);
        assert!(ball_member(
            &p,
            &ConeSpace::full(2),
            &v(&[0, 0]),
            &frac(1, 10),
            &v(&[-100, -100]),
            false
        )
        .unwrap());
    }

    #[test]
    fn subspace_distance_examples() {
        let p = PLQuasiNorm::upper_sum(2);
        let full = ConeSpace::full(2);
        let diag = Subspace::span(2, &[v(&[1, 1])]);
        let x = v(&[2, 3]);
        assert_eq!(
            dist_to_subspace(&p, &full, &x, &diag, Direction::FromX).unwrap(),
            ExtReal::zero()
        );
        assert_eq!(
            dist_to_subspace(&p, &full, &x, &diag, Direction::ToX).unwrap(),
            ExtReal::zero()
        );
        let on = v(&[-5, -5]);
        for d in [Direction::FromX, Direction::ToX] {
            assert_eq!(dist_to_subspace(&p, &full, &on, &diag, d).unwrap(), ExtReal::zero());
        }
    }

    #[test]
    fn subspace_distance_infinite_when_no_admissible_difference() {
        let p = PLQuasiNorm::upper_sum(2);
        let orthant = ConeSpace::orthant(2);
        let trivial = Subspace::trivial(2);
        // d((1,1), 0) needs -(1,1) in the orthant.
        assert_eq!(
            dist_to_subspace(&p, &orthant, &v(&[1, 1]), &trivial, Direction::FromX).unwrap(),
            ExtReal::Infinity
        );
        assert_eq!(
            dist_to_subspace(&p, &orthant, &v(&[1, 1]), &trivial, Direction::ToX).unwrap(),
            q(2).into()
        );
    }

    #[test]
    fn pieces_reproduce_eval() {
        let p = PLQuasiNorm::new(
            Matrix::from_ints(2, &[&[1, 2], &[-2, -4], &[0, 1]]),
            vec![q(1), frac(1, 2), q(0)],
            vec![q(3), q(0), q(2)],
        )
        .unwrap();
        let pieces = p.pieces(64).unwrap();
        // rows 0 and 1 are parallel and merge, leaving 2 groups
        assert!(pieces.len() <= 4);
        for a in -3..=3 {
            for b in -3..=3 {
                let x = v(&[a, b]);
                let best = pieces.iter().map(|l| l.dot(&x)).max().unwrap();
                assert_eq!(best, p.eval(&x).unwrap());
            }
        }
        assert!(matches!(p.pieces(2), Err(Error::Unsupported { .. })));
    }

    #[test]
    fn ext_real_order_and_arithmetic() {
        let one: ExtReal = q(1).into();
        assert!(one < ExtReal::Infinity);
        assert_eq!(&one + &ExtReal::Infinity, ExtReal::Infinity);
        assert_eq!(ExtReal::Infinity.scale(&q(3)), ExtReal::Infinity);
        assert_eq!(ExtReal::Infinity.scale(&q(0)), ExtReal::zero());
        assert_eq!(ExtReal::Infinity.to_string(), "inf");
        assert_eq!(ExtReal::Finite(frac(2, 4)).to_string(), "1/2");
    }
}
