//! The quotient cone `X/Y`: classes `[x] = x + G_Y`, the infimum functional
//! `p̂([x]) = inf{p(x + g) : g ∈ G_Y}`, its quasi-metric, and an exact
//! closedness decision for `G_Y` in the topology of `d_p`.
//!
//! Since `G_Y ⊆ lin(X)`, a point `x ∈ X \ G_Y` lies in the closure of `G_Y`
//! exactly when some `v ∈ lin(X)` outside `G_Y` has `p(v) = 0`; then
//! `x = -v` is at distance zero from `G_Y` (take `g = 0`). The set of such
//! `v` is a polyhedral cone, so the decision reduces to checking its
//! finitely many generators.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use itertools::Itertools;
use num::{Signed, Zero};

use crate::cone::{ConeSpace, Subspace};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, QVec};
use crate::lp::{
    add_closed_membership, add_epigraph, minimize_pl_over_coset, AffineMap, CosetMin, LpOutcome,
    LpProblem, Relation, Sense,
};
use crate::polyhedra::{cone_generators, sup_sublinear, unit_ball};
use crate::qnorm::{check_compat, dist_to_subspace, validate_qnorm, Direction, ExtReal};
use crate::qnorm::{PLQuasiNorm, MAX_PIECES};
use crate::rational::{q, Q};

pub const DEFAULT_SEARCH_BUDGET: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClosedCertificate {
    CertifiedClosed,
    /// `witness ∈ X \ G` with `d_p(witness, G) = 0`.
    Falsified(QVec),
}

impl ClosedCertificate {
    pub fn is_closed(&self) -> bool {
        matches!(self, ClosedCertificate::CertifiedClosed)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FalsifierOutcome {
    Falsified(QVec),
    NoWitnessFound,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct QuotientOptions {
    /// Permit `p̂` and the quotient metric on a non-closed `G`, and accept a
    /// degenerate `p` on `X`.
    pub allow_prenorm: bool,
}

#[derive(Debug, Clone)]
pub struct QuotientSpace {
    space: ConeSpace,
    p: PLQuasiNorm,
    subcone: ConeSpace,
    g: Subspace,
    certificate: ClosedCertificate,
    allow_prenorm: bool,
    key: u64,
}

/// `[x]`, stored through its canonical representative.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuotientClass {
    rep: QVec,
    key: u64,
}

impl QuotientClass {
    pub fn rep(&self) -> &QVec {
        &self.rep
    }
}

impl QuotientSpace {
    pub fn build(space: ConeSpace, p: PLQuasiNorm, subcone: ConeSpace) -> Result<Self> {
        Self::build_with(space, p, subcone, QuotientOptions::default())
    }

    pub fn build_with(
        space: ConeSpace,
        p: PLQuasiNorm,
        subcone: ConeSpace,
        options: QuotientOptions,
    ) -> Result<Self> {
        check_compat(&p, &space)?;
        if subcone.dim() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                found: subcone.dim(),
            });
        }
        if !space.contains_cone(&subcone)? {
            return Err(Error::NotSubcone(format!(
                "{} subcone is not inside the {} cone",
                subcone.kind().name(),
                space.kind().name()
            )));
        }
        if !options.allow_prenorm && !validate_qnorm(&p, &space)? {
            return Err(Error::InvalidQuasiNorm(
                "p and p(-·) vanish together on a nonzero invertible element of X; \
                 pass allow_prenorm to proceed anyway"
                    .into(),
            ));
        }
        let g = subcone.lineality();
        Self::from_parts(space, p, subcone, g, options.allow_prenorm)
    }

    /// Assembles a quotient by a given `G ⊆ lin(X)` without re-validating
    /// `p` or the subcone.
    pub(crate) fn from_parts(
        space: ConeSpace,
        p: PLQuasiNorm,
        subcone: ConeSpace,
        g: Subspace,
        allow_prenorm: bool,
    ) -> Result<Self> {
        let lin = space.lineality();
        if !lin.contains_subspace(&g)? {
            return Err(Error::NotSubcone(
                "G is not contained in the lineality space of X".into(),
            ));
        }
        let certificate = match exact_closedness(&space, &p, &g)? {
            Some(w) => ClosedCertificate::Falsified(w),
            None => ClosedCertificate::CertifiedClosed,
        };
        let mut h = DefaultHasher::new();
        (&space, &p, &g).hash(&mut h);
        Ok(QuotientSpace {
            space,
            p,
            subcone,
            g,
            certificate,
            allow_prenorm,
            key: h.finish(),
        })
    }

    pub fn space(&self) -> &ConeSpace {
        &self.space
    }

    pub fn norm(&self) -> &PLQuasiNorm {
        &self.p
    }

    pub fn subcone(&self) -> &ConeSpace {
        &self.subcone
    }

    pub fn g(&self) -> &Subspace {
        &self.g
    }

    pub fn certificate(&self) -> &ClosedCertificate {
        &self.certificate
    }

    pub fn allows_prenorm(&self) -> bool {
        self.allow_prenorm
    }

    /// Dimension of the class coordinates.
    pub fn class_dim(&self) -> usize {
        self.space.dim() - self.g.dim()
    }

    fn require_usable(&self) -> Result<()> {
        match &self.certificate {
            ClosedCertificate::Falsified(w) if !self.allow_prenorm => Err(Error::NotClosed {
                witness: w.to_string(),
            }),
            _ => Ok(()),
        }
    }

    fn require_own(&self, c: &QuotientClass) -> Result<()> {
        if c.key != self.key {
            return Err(Error::SpaceMismatch(
                "class belongs to a different quotient".into(),
            ));
        }
        Ok(())
    }

    /// The quotient map `φ(x) = [x]`.
    pub fn class_of(&self, x: &QVec) -> Result<QuotientClass> {
        self.space.require_member(x, "point")?;
        Ok(QuotientClass {
            rep: self.g.canonical_rep(x),
            key: self.key,
        })
    }

    /// The class with the given coordinates in the complement basis.
    pub fn class_from_coords(&self, coords: &QVec) -> Result<QuotientClass> {
        self.class_of(&self.g.lift(coords)?)
    }

    pub fn coords(&self, c: &QuotientClass) -> Result<QVec> {
        self.require_own(c)?;
        Ok(self.g.class_coords(&c.rep))
    }

    pub fn zero(&self) -> QuotientClass {
        QuotientClass {
            rep: QVec::zeros(self.space.dim()),
            key: self.key,
        }
    }

    pub fn class_add(&self, a: &QuotientClass, b: &QuotientClass) -> Result<QuotientClass> {
        self.require_own(a)?;
        self.require_own(b)?;
        self.class_of(&(&a.rep + &b.rep))
    }

    pub fn class_scale(&self, r: &Q, a: &QuotientClass) -> Result<QuotientClass> {
        self.require_own(a)?;
        if r.is_negative() {
            return Err(Error::Invalid("cone scalars must be nonnegative".into()));
        }
        self.class_of(&a.rep.scale(r))
    }

    /// `p̂([x]) = min{p(x + g) : g ∈ G}`.
    pub fn hat_p(&self, c: &QuotientClass) -> Result<Q> {
        self.require_usable()?;
        self.require_own(c)?;
        match minimize_pl_over_coset(&self.p, &c.rep, &self.g, None)? {
            CosetMin::Optimal { value, .. } => Ok(value),
            CosetMin::Infeasible => unreachable!("an unconstrained coset is nonempty"),
        }
    }

    /// `d_p̂(a, b) = p̂(b - a)` when the difference class lies in `X/Y`,
    /// `+inf` otherwise.
    pub fn quotient_qmetric(&self, a: &QuotientClass, b: &QuotientClass) -> Result<ExtReal> {
        self.require_usable()?;
        self.require_own(a)?;
        self.require_own(b)?;
        let diff = &b.rep - &a.rep;
        Ok(
            match minimize_pl_over_coset(&self.p, &diff, &self.g, Some(&self.space))? {
                CosetMin::Optimal { value, .. } => ExtReal::Finite(value),
                CosetMin::Infeasible => ExtReal::Infinity,
            },
        )
    }

    /// `‖φ‖ = sup{p̂([x]) : x ∈ X, p(x) <= 1}`.
    pub fn quotient_map_norm(&self) -> Result<ExtReal> {
        self.require_usable()?;
        let ball = unit_ball(&self.space, &self.p)?;
        let (value, _) = sup_sublinear(&ball, |x| {
            Ok(
                match minimize_pl_over_coset(&self.p, x, &self.g, None)? {
                    CosetMin::Optimal { value, .. } => ExtReal::Finite(value),
                    CosetMin::Infeasible => ExtReal::Infinity,
                },
            )
        })?;
        Ok(value)
    }

    /// `sup{q(M z) : p̂(lift(z)) <= 1}` for a matrix `M` acting on class
    /// coordinates, computed over `x = lift(z) + B t` in the unit ball of `p`.
    pub fn sup_over_unit_ball(&self, m: &Matrix, q_norm: &PLQuasiNorm) -> Result<ExtReal> {
        let k = self.class_dim();
        if m.ncols() != k || q_norm.dim() != m.nrows() {
            return Err(Error::DimensionMismatch {
                expected: k,
                found: m.ncols(),
            });
        }
        let n = self.space.dim();
        let mut cols: Vec<QVec> = self.g.lift_matrix().transpose().rows().to_vec();
        cols.extend(self.g.basis().iter().cloned());
        let x = AffineMap::linear(Matrix::from_columns(n, &cols));
        let nvars = cols.len();
        let mut best = ExtReal::zero();
        for l in q_norm.pieces(MAX_PIECES)? {
            let obj = m.transpose().apply(&l)?;
            let mut lp = LpProblem::new(nvars, Sense::Maximize);
            add_closed_membership(&mut lp, &self.space, &x);
            let s = add_epigraph(&mut lp, &self.p, &x);
            let mut budget = vec![Q::zero(); lp.nvars()];
            for &i in &s {
                budget[i] = q(1);
            }
            lp.constrain(budget, Relation::Le, q(1));
            let mut c = obj.into_coords();
            c.resize(lp.nvars(), Q::zero());
            lp.set_objective(c);
            match lp.solve()? {
                LpOutcome::Optimal { value, .. } => best = best.max(ExtReal::Finite(value)),
                LpOutcome::Unbounded => return Ok(ExtReal::Infinity),
                LpOutcome::Infeasible => unreachable!("the origin is feasible"),
            }
        }
        Ok(best)
    }
}

/// A point `x ∈ X \ G` in the `d_p`-closure of `G`, if one exists.
fn exact_closedness(space: &ConeSpace, p: &PLQuasiNorm, g: &Subspace) -> Result<Option<QVec>> {
    let n = space.dim();
    let lin = space.lineality();
    // v ∈ lin(X) with p(v) = 0: each summand vanishes separately.
    let mut ineqs = Vec::new();
    for t in p.terms() {
        if t.wplus.is_positive() {
            ineqs.push(t.row.clone());
        }
        if t.wminus.is_positive() {
            ineqs.push(-&t.row);
        }
    }
    let gens = cone_generators(n, &ineqs, &lin.equations());
    for d in gens.all_directions() {
        if !g.contains(&d)? {
            let w = -&d;
            debug_assert_eq!(
                dist_to_subspace(p, space, &w, g, Direction::FromX)?,
                ExtReal::zero()
            );
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// Searches for a witness of non-closedness of `G`: first a deterministic
/// scan of up to `budget` small integer points of `X`, in order of
/// increasing max-norm, each tested by a distance LP; then the exact
/// generator check, which is complete.
pub fn falsify_closedness(qs: &QuotientSpace, budget: usize) -> Result<FalsifierOutcome> {
    let n = qs.space.dim();
    let mut tried = 0;
    'radius: for r in 1i64.. {
        let mut any = false;
        for pt in (0..n).map(|_| -r..=r).multi_cartesian_product() {
            if pt.iter().map(|c| c.abs()).max() != Some(r) {
                continue;
            }
            any = true;
            if tried == budget {
                break 'radius;
            }
            tried += 1;
            let x = QVec::from_ints(&pt);
            if !qs.space.member(&x)? || qs.g.contains(&x)? {
                continue;
            }
            if dist_to_subspace(&qs.p, &qs.space, &x, &qs.g, Direction::FromX)?.is_zero_value() {
                return Ok(FalsifierOutcome::Falsified(x));
            }
        }
        if !any {
            break;
        }
    }
    Ok(match exact_closedness(&qs.space, &qs.p, &qs.g)? {
        Some(w) => FalsifierOutcome::Falsified(w),
        None => FalsifierOutcome::NoWitnessFound,
    })
}

/// Checks that a claimed witness really is one.
pub fn verify_witness(qs: &QuotientSpace, w: &QVec) -> Result<bool> {
    Ok(qs.space.member(w)?
        && !qs.g.contains(w)?
        && dist_to_subspace(&qs.p, &qs.space, w, &qs.g, Direction::FromX)?.is_zero_value())
}

trait ZeroValue {
    fn is_zero_value(&self) -> bool;
}

impl ZeroValue for ExtReal {
    fn is_zero_value(&self) -> bool {
        matches!(self, ExtReal::Finite(v) if v.is_zero())
    }
}

/// Fixed sequences whose finite windows stand in for completeness
/// statements.
pub mod cauchy {
    use super::*;
    use crate::qnorm::qmetric;
    use crate::rational::frac;

    pub struct Fixture {
        pub name: &'static str,
        pub quotient: QuotientSpace,
        pub term: fn(i64) -> QVec,
        /// Terms needed for a modulus at `eps = 1/100` under the
        /// half-window rule of [`cauchy_modulus`].
        pub window: i64,
    }

    fn terms(fx: &Fixture, window: i64) -> Result<Vec<QVec>> {
        let terms: Vec<QVec> = (1..=window).map(fx.term).collect();
        for t in &terms {
            fx.quotient.space().require_member(t, "sequence term")?;
        }
        Ok(terms)
    }

    /// `d^s(a, b)` without re-checking that `a` and `b` are members.
    fn sym_dist(fx: &Fixture, a: &QVec, b: &QVec) -> Result<ExtReal> {
        let (p, x) = (fx.quotient.norm(), fx.quotient.space());
        let diff = b - a;
        let mut d = ExtReal::zero();
        for v in [&diff, &-&diff] {
            d = d.max(if x.member(v)? {
                ExtReal::Finite(p.eval(v)?)
            } else {
                ExtReal::Infinity
            });
        }
        Ok(d)
    }

    /// `max d^s(x_m, x_n)` over `from <= m, n <= window`.
    pub fn tail_diameter(fx: &Fixture, from: i64, window: i64) -> Result<ExtReal> {
        let terms = terms(fx, window)?;
        let start = (from.max(1) - 1) as usize;
        let mut diam = ExtReal::zero();
        for i in start..terms.len() {
            for j in i + 1..terms.len() {
                diam = diam.max(sym_dist(fx, &terms[i], &terms[j])?);
            }
        }
        Ok(diam)
    }

    /// Smallest `N <= window / 2` with `d^s(x_m, x_n) < eps` for all
    /// `N <= m, n <= window`, if any. Requiring the tail to cover at least
    /// half the window keeps the check from passing on a handful of terms.
    pub fn cauchy_modulus(fx: &Fixture, eps: &Q, window: i64) -> Result<Option<i64>> {
        let terms = terms(fx, window)?;
        let bound = ExtReal::Finite(eps.clone());
        let mut tail = ExtReal::zero();
        let mut best = None;
        for i in (0..terms.len()).rev() {
            for j in i + 1..terms.len() {
                tail = tail.max(sym_dist(fx, &terms[i], &terms[j])?);
            }
            if tail >= bound {
                break;
            }
            best = Some(i as i64 + 1);
        }
        Ok(best.filter(|n| 2 * n <= window))
    }

    /// Indices `n <= window` where `d_p̂([x_n], [x_{n+1}]) <= d_p(x_n, x_{n+1})`
    /// or its reverse fails.
    pub fn domination_failures(fx: &Fixture, window: i64) -> Result<Vec<i64>> {
        let qs = &fx.quotient;
        let mut bad = Vec::new();
        for n in 1..=window {
            let (a, b) = ((fx.term)(n), (fx.term)(n + 1));
            let (ca, cb) = (qs.class_of(&a)?, qs.class_of(&b)?);
            let ok = qs.quotient_qmetric(&ca, &cb)? <= qmetric(qs.norm(), qs.space(), &a, &b)?
                && qs.quotient_qmetric(&cb, &ca)? <= qmetric(qs.norm(), qs.space(), &b, &a)?;
            if !ok {
                bad.push(n);
            }
        }
        Ok(bad)
    }

    fn diagonal_approach(n: i64) -> QVec {
        let t = q(2) - frac(1, n);
        QVec::new(vec![t.clone(), t])
    }

    fn geometric(n: i64) -> QVec {
        let t = q(1) - Q::new(1.into(), num::pow(num::BigInt::from(2), n as usize));
        QVec::new(vec![t, q(3)])
    }

    fn alternating(n: i64) -> QVec {
        let t = frac(if n % 2 == 0 { 1 } else { -1 }, n * n);
        QVec::new(vec![t, q(0)])
    }

    /// Example sequences: the diagonal approach to `(2, 2)` under
    /// `u(x) + u(y)` modulo the diagonal, and two sequences under the
    /// `l1` norm modulo a line.
    pub fn fixtures() -> Vec<Fixture> {
        let diag = QuotientSpace::build_with(
            ConeSpace::full(2),
            PLQuasiNorm::upper_sum(2),
            ConeSpace::polyhedral(Matrix::from_ints(2, &[&[1, -1], &[-1, 1]])),
            QuotientOptions {
                allow_prenorm: true,
            },
        )
        .expect("well-formed fixture");
        let vertical = QuotientSpace::build(
            ConeSpace::full(2),
            PLQuasiNorm::l1(2),
            ConeSpace::polyhedral(Matrix::from_ints(2, &[&[1, 0], &[-1, 0]])),
        )
        .expect("well-formed fixture");
        let diag_l1 = QuotientSpace::build(
            ConeSpace::full(2),
            PLQuasiNorm::l1(2),
            ConeSpace::polyhedral(Matrix::from_ints(2, &[&[1, -1], &[-1, 1]])),
        )
        .expect("well-formed fixture");
        vec![
            Fixture {
                name: "diagonal approach",
                quotient: diag,
                term: diagonal_approach,
                window: 240,
            },
            Fixture {
                name: "geometric",
                quotient: vertical,
                term: geometric,
                window: 40,
            },
            Fixture {
                name: "alternating",
                quotient: diag_l1,
                term: alternating,
                window: 40,
            },
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qnorm::qmetric;

    fn v(c: &[i64]) -> QVec {
        QVec::from_ints(c)
    }

    fn halfspace() -> ConeSpace {
        ConeSpace::polyhedral(Matrix::from_ints(2, &[&[0, 1]]))
    }

    fn diagonal_line() -> ConeSpace {
        ConeSpace::polyhedral(Matrix::from_ints(2, &[&[1, -1], &[-1, 1]]))
    }

    fn prenorm() -> QuotientOptions {
        QuotientOptions {
            allow_prenorm: true,
        }
    }

    #[test]
    fn diagonal_is_not_closed() {
        let qs = QuotientSpace::build(ConeSpace::full(2), PLQuasiNorm::upper_sum(2), diagonal_line())
            .unwrap();
        let ClosedCertificate::Falsified(w) = qs.certificate().clone() else {
            panic!("expected a witness");
        };
        assert!(verify_witness(&qs, &w).unwrap());
        assert!(verify_witness(&qs, &v(&[2, 3])).unwrap());
        assert!(qs.hat_p(&qs.class_of(&v(&[2, -3])).unwrap()).is_err());
    }

    #[test]
    fn diagonal_prenorm_vanishes_on_nonzero_classes() {
        let qs = QuotientSpace::build_with(
            ConeSpace::full(2),
            PLQuasiNorm::upper_sum(2),
            diagonal_line(),
            prenorm(),
        )
        .unwrap();
        let a = qs.class_of(&v(&[2, -3])).unwrap();
        let b = qs.class_of(&v(&[-2, 3])).unwrap();
        assert_eq!(qs.hat_p(&a).unwrap(), q(0));
        assert_eq!(qs.hat_p(&b).unwrap(), q(0));
        assert_ne!(a, qs.zero());
        assert!(qs.g().contains(&(&a.rep - &v(&[2, -3]))).unwrap());
    }

    #[test]
    fn halfspace_lineality_is_not_closed_under_upper_sum() {
        let qs = QuotientSpace::build(ConeSpace::full(2), PLQuasiNorm::upper_sum(2), halfspace())
            .unwrap();
        assert_eq!(qs.g(), &Subspace::span(2, &[v(&[1, 0])]));
        assert!(!qs.certificate().is_closed());
        let FalsifierOutcome::Falsified(w) = falsify_closedness(&qs, DEFAULT_SEARCH_BUDGET).unwrap()
        else {
            panic!("expected a witness");
        };
        assert!(verify_witness(&qs, &w).unwrap());
    }

    #[test]
    fn degenerate_norm_on_halfspace_gives_closed_quotient() {
        let x = halfspace();
        let p = PLQuasiNorm::diagonal(vec![q(0), q(1)], vec![q(0), q(1)]).unwrap();
        let y = ConeSpace::polyhedral(Matrix::from_ints(2, &[&[0, 1], &[0, -1]]));
        assert!(QuotientSpace::build(x.clone(), p.clone(), y.clone()).is_err());
        let qs = QuotientSpace::build_with(x, p, y, prenorm()).unwrap();
        assert!(qs.certificate().is_closed());
    }

    #[test]
    fn whole_space_quotient_is_closed() {
        let qs =
            QuotientSpace::build(ConeSpace::full(2), PLQuasiNorm::l1(2), ConeSpace::full(2)).unwrap();
        assert_eq!(
            falsify_closedness(&qs, 10).unwrap(),
            FalsifierOutcome::NoWitnessFound
        );
        assert_eq!(qs.class_of(&v(&[4, -1])).unwrap(), qs.zero());
    }

    #[test]
    fn class_arithmetic() {
        let qs = QuotientSpace::build_with(
            ConeSpace::full(2),
            PLQuasiNorm::upper_sum(2),
            halfspace(),
            prenorm(),
        )
        .unwrap();
        let a = qs.class_of(&v(&[2, 3])).unwrap();
        assert_eq!(a.rep(), &v(&[0, 3]));
        let b = qs.class_of(&v(&[1, 1])).unwrap();
        assert_eq!(qs.class_add(&a, &b).unwrap().rep(), &v(&[0, 4]));
        assert_eq!(qs.class_add(&a, &qs.zero()).unwrap(), a);
        assert_eq!(qs.class_scale(&q(0), &a).unwrap(), qs.zero());
        assert_eq!(qs.class_of(&v(&[5, 0])).unwrap(), qs.zero());
        assert_eq!(qs.hat_p(&a).unwrap(), q(3));
        assert_eq!(qs.quotient_map_norm().unwrap(), ExtReal::Finite(q(1)));
        assert!(qs.class_scale(&q(-1), &a).is_err());
    }

    #[test]
    fn classes_of_different_quotients_do_not_mix() {
        let a = QuotientSpace::build(ConeSpace::full(2), PLQuasiNorm::l1(2), halfspace()).unwrap();
        let b = QuotientSpace::build(ConeSpace::full(2), PLQuasiNorm::l1(2), diagonal_line())
            .unwrap();
        let ca = a.class_of(&v(&[1, 1])).unwrap();
        assert!(matches!(b.hat_p(&ca), Err(Error::SpaceMismatch(_))));
    }

    #[test]
    fn diagonal_representative_is_class_equal() {
        let qs = QuotientSpace::build(ConeSpace::full(2), PLQuasiNorm::l1(2), diagonal_line())
            .unwrap();
        let c = qs.class_of(&v(&[2, -3])).unwrap();
        assert!(qs.g().contains(&(c.rep() - &v(&[2, -3]))).unwrap());
    }

    #[test]
    fn orthant_quotient_metric_infinite_downhill() {
        let x = ConeSpace::orthant(2);
        let y = ConeSpace::polyhedral(Matrix::from_ints(2, &[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]]));
        let qs = QuotientSpace::build(x.clone(), PLQuasiNorm::l1(2), y).unwrap();
        let a = qs.class_of(&v(&[1, 1])).unwrap();
        let b = qs.class_of(&v(&[0, 0])).unwrap();
        assert_eq!(qs.quotient_qmetric(&a, &b).unwrap(), ExtReal::Infinity);
        assert_eq!(qs.quotient_qmetric(&a, &a).unwrap(), ExtReal::zero());
        assert_eq!(
            qs.quotient_qmetric(&b, &a).unwrap(),
            qmetric(qs.norm(), &x, &v(&[0, 0]), &v(&[1, 1])).unwrap()
        );
    }

    #[test]
    fn nonsubcone_rejected() {
        let err = QuotientSpace::build(ConeSpace::orthant(2), PLQuasiNorm::l1(2), halfspace());
        assert!(matches!(err, Err(Error::NotSubcone(_))));
    }

    #[test]
    fn fixtures_are_cauchy_and_dominated() {
        for fx in cauchy::fixtures() {
            for eps in [q(1), crate::rational::frac(1, 10)] {
                assert!(
                    cauchy::cauchy_modulus(&fx, &eps, 40).unwrap().is_some(),
                    "{}",
                    fx.name
                );
            }
            assert!(cauchy::domination_failures(&fx, 20).unwrap().is_empty());
        }
    }

    #[test]
    fn modulus_needs_a_long_tail() {
        let fx = &cauchy::fixtures()[0];
        // the diagonal approach only settles below 1/100 after about 100 terms
        assert_eq!(cauchy::cauchy_modulus(fx, &crate::rational::frac(1, 100), 150).unwrap(), None);
        assert!(cauchy::cauchy_modulus(fx, &crate::rational::frac(1, 100), 240).unwrap().is_some());
        let d = cauchy::tail_diameter(fx, 10, 20).unwrap();
        assert_eq!(d, ExtReal::Finite(crate::rational::frac(1, 10)));
    }
}
