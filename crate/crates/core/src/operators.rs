//! Linear maps between quasi-normed cones.
//!
//! Every supremum here is of a convex piecewise-linear function over a
//! polyhedron. Writing the function as a maximum of linear pieces turns each
//! supremum into one LP per piece; an unbounded LP means an infinite value,
//! which is how discontinuity shows up.

use std::sync::OnceLock;

use num::{Signed, Zero};

use crate::cone::{ConeKind, ConeSpace, Subspace};
use crate::error::{Error, Result};
use crate::linalg::{null_space, Matrix, QVec};
use crate::lp::{
    add_closed_membership, add_epigraph, indicator, minimize_pl_over_coset, AffineMap, CosetMin,
    LpOutcome, LpProblem, Relation, Sense,
};
use crate::polyhedra::{
    closure_generators, polyhedron_generators, sup_sublinear, unit_ball, zero_set_generators,
};
use crate::qnorm::{check_compat, ExtReal, PLQuasiNorm, MAX_PIECES};
use crate::quotient::{ClosedCertificate, QuotientSpace};
use crate::rational::{q, Q};

/// A cone together with its quasi-norm.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NormedCone {
    pub space: ConeSpace,
    pub norm: PLQuasiNorm,
}

impl NormedCone {
    pub fn new(space: ConeSpace, norm: PLQuasiNorm) -> Result<Self> {
        check_compat(&norm, &space)?;
        Ok(NormedCone { space, norm })
    }

    /// `(R, u)`, the codomain of dual functionals.
    pub fn upper_reals() -> Self {
        NormedCone {
            space: ConeSpace::full(1),
            norm: PLQuasiNorm::upper_sum(1),
        }
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }
}

#[derive(Debug)]
pub struct LinMap {
    matrix: Matrix,
    source: NormedCone,
    target: NormedCone,
    cached_norm: OnceLock<ExtReal>,
}

impl Clone for LinMap {
    fn clone(&self) -> Self {
        LinMap {
            matrix: self.matrix.clone(),
            source: self.source.clone(),
            target: self.target.clone(),
            cached_norm: self.cached_norm.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Injectivity {
    Yes,
    /// Two members of the source with equal images that violate the property.
    No(QVec, QVec),
}

impl Injectivity {
    pub fn holds(&self) -> bool {
        matches!(self, Injectivity::Yes)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Openness {
    /// Smallest `M` with: every target `y` has a preimage `x` with
    /// `p(x) <= M q(y)`.
    Constant(Q),
    NotOpen(String),
}

impl LinMap {
    /// Checks dimensions and that the matrix sends source members to target
    /// members, using generators of the source closure.
    pub fn new(matrix: Matrix, source: NormedCone, target: NormedCone) -> Result<Self> {
        if matrix.ncols() != source.dim() {
            return Err(Error::DimensionMismatch {
                expected: source.dim(),
                found: matrix.ncols(),
            });
        }
        if matrix.nrows() != target.dim() {
            return Err(Error::DimensionMismatch {
                expected: target.dim(),
                found: matrix.nrows(),
            });
        }
        check_maps_into(&matrix, &source.space, &target.space)?;
        Ok(LinMap {
            matrix,
            source,
            target,
            cached_norm: OnceLock::new(),
        })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn source(&self) -> &NormedCone {
        &self.source
    }

    pub fn target(&self) -> &NormedCone {
        &self.target
    }

    pub fn apply(&self, x: &QVec) -> Result<QVec> {
        self.source.space.require_member(x, "argument")?;
        self.matrix.apply(x)
    }

    /// `‖f‖ = sup{q(f(x)) : x ∈ X, p(x) <= 1}`; computed once and memoized.
    pub fn op_norm(&self) -> Result<ExtReal> {
        if let Some(v) = self.cached_norm.get() {
            return Ok(v.clone());
        }
        let v = sup_pl_over_ball(&self.source, &self.matrix, &self.target.norm)?;
        let _ = self.cached_norm.set(v.clone());
        Ok(v)
    }

    pub fn is_continuous(&self) -> Result<bool> {
        Ok(self.op_norm()?.is_finite())
    }

    /// Decides whether `f(x) = f(y)` forces `p(x) = p(y)`.
    ///
    /// Maximizes `p(y) - p(x)` over pairs in a box with equal images, one LP
    /// per linear piece of `p(y)`. A positive optimum yields a witness.
    pub fn is_p_injective(&self) -> Result<Injectivity> {
        let n = self.source.dim();
        let p = &self.source.norm;
        let x_map = AffineMap::linear(selector(n, 2 * n, 0));
        let y_map = AffineMap::linear(selector(n, 2 * n, n));
        for l in p.pieces(MAX_PIECES)? {
            let mut lp = LpProblem::new(2 * n, Sense::Maximize);
            for i in 0..2 * n {
                lp.set_bounds(i, Some(q(-1)), Some(q(1)));
            }
            add_closed_membership(&mut lp, &self.source.space, &x_map);
            add_closed_membership(&mut lp, &self.source.space, &y_map);
            for row in self.matrix.rows() {
                let mut c = row.coords().to_vec();
                c.extend(row.coords().iter().map(|a| -a));
                lp.constrain(c, Relation::Eq, Q::zero());
            }
            let s = add_epigraph(&mut lp, p, &x_map);
            let mut obj: Vec<Q> = vec![Q::zero(); n];
            obj.extend(l.coords().iter().cloned());
            obj.resize(lp.nvars(), Q::zero());
            for &i in &s {
                obj[i] = q(-1);
            }
            lp.set_objective(obj);
            if let LpOutcome::Optimal { value, point } = lp.solve()? {
                if value.is_positive() {
                    let x = QVec::new(point[..n].to_vec());
                    let y = QVec::new(point[n..2 * n].to_vec());
                    let (x, y) = self.repair_pair(x, y)?;
                    return Ok(Injectivity::No(x, y));
                }
            }
        }
        Ok(Injectivity::Yes)
    }

    /// Moves a pair found on the closure of a strict cone into the cone while
    /// keeping equal images and distinct norms.
    fn repair_pair(&self, x: QVec, y: QVec) -> Result<(QVec, QVec)> {
        let space = &self.source.space;
        let p = &self.source.norm;
        if space.member(&x)? && space.member(&y)? {
            return Ok((x, y));
        }
        let e0 = QVec::unit(space.dim(), 0);
        let mut eps = q(1);
        loop {
            let shift = e0.scale(&eps);
            let (x2, y2) = (&x + &shift, &y + &shift);
            if space.member(&x2)? && space.member(&y2)? && p.eval(&x2)? != p.eval(&y2)? {
                return Ok((x2, y2));
            }
            eps /= q(2);
        }
    }

    /// Decides whether `f(x) = f(y)` forces `y - x ∈ G`, where `G` is the
    /// lineality space of the given quotient over the source.
    pub fn is_g_injective(&self, qs: &QuotientSpace) -> Result<Injectivity> {
        if qs.space() != &self.source.space {
            return Err(Error::SpaceMismatch(
                "quotient is not over the source cone".into(),
            ));
        }
        // X - X is the linear span of X.
        let gens = closure_generators(&self.source.space).all_directions();
        let span = Subspace::span(self.source.dim(), &gens);
        let kernel = Subspace::span(self.source.dim(), &self.matrix.null_space());
        for k in kernel.intersect(&span).basis() {
            if !qs.g().contains(k)? {
                let (x, y) = split_difference(&self.source.space, &gens, k)?;
                return Ok(Injectivity::No(x, y));
            }
        }
        Ok(Injectivity::Yes)
    }

    /// `min{p(x) : f(x) = y, x ∈ X}`, infinite when `y` is not reached.
    pub fn fiber_min(&self, y: &QVec) -> Result<ExtReal> {
        y.check_dim(self.target.dim())?;
        let Some(x0) = self.matrix.solve(y)? else {
            return Ok(ExtReal::Infinity);
        };
        let kernel = Subspace::span(self.source.dim(), &self.matrix.null_space());
        Ok(
            match minimize_pl_over_coset(&self.source.norm, &x0, &kernel, Some(&self.source.space))?
            {
                CosetMin::Optimal { value, .. } => ExtReal::Finite(value),
                CosetMin::Infeasible => ExtReal::Infinity,
            },
        )
    }

    /// Whether `y ∈ f(B(0, r))`, the image of the open ball of radius `r`.
    pub fn reaches_within(&self, y: &QVec, r: &Q) -> Result<bool> {
        Ok(self.fiber_min(y)? < ExtReal::Finite(r.clone()))
    }

    /// The smallest admissible constant in the open-mapping condition,
    /// `sup{fiber_min(y) : y ∈ Y, q(y) <= 1}`.
    pub fn openness_constant(&self) -> Result<Openness> {
        if self.matrix.rank() < self.target.dim() {
            return Ok(Openness::NotOpen(format!(
                "rank {} is below the target dimension {}",
                self.matrix.rank(),
                self.target.dim()
            )));
        }
        let ball = unit_ball(&self.target.space, &self.target.norm)?;
        let (value, arg) = sup_sublinear(&ball, |y| self.fiber_min(y))?;
        Ok(match value {
            ExtReal::Finite(m) => Openness::Constant(m),
            ExtReal::Infinity => Openness::NotOpen(match arg {
                Some(y) if self.fiber_min(&y)? == ExtReal::Infinity => {
                    format!("{y} is not reached by the map")
                }
                Some(y) => format!("preimage cost grows without bound along {y}"),
                None => "unbounded".into(),
            }),
        })
    }

    /// `k* = inf{q(f(x)) : x ∈ X, p(x) = 1}` (infinite when the unit sphere
    /// is empty).
    pub fn lower_bound_constant(&self) -> Result<ExtReal> {
        let n = self.source.dim();
        let p = &self.source.norm;
        let x_map = AffineMap::linear(Matrix::identity(n));
        let fx = AffineMap::linear(self.matrix.clone());
        let mut best = ExtReal::Infinity;
        for l in p.pieces(MAX_PIECES)? {
            if l.is_zero() {
                continue;
            }
            let mut lp = LpProblem::new(n, Sense::Minimize);
            add_closed_membership(&mut lp, &self.source.space, &x_map);
            lp.constrain(l.coords().to_vec(), Relation::Eq, q(1));
            let sp = add_epigraph(&mut lp, p, &x_map);
            let budget = indicator(lp.nvars(), &sp);
            lp.constrain(budget, Relation::Le, q(1));
            let sq = add_epigraph(&mut lp, &self.target.norm, &fx);
            lp.set_objective(indicator(lp.nvars(), &sq));
            if let LpOutcome::Optimal { value, .. } = lp.solve()? {
                best = best.min(ExtReal::Finite(value));
            }
        }
        Ok(best)
    }

    /// `c* = sup{p(x) : x ∈ X, q(f(x)) <= 1}`.
    pub fn inverse_bound(&self) -> Result<ExtReal> {
        let mut ineqs: Vec<(QVec, Q)> = self
            .source
            .space
            .closure_rows()
            .iter()
            .map(|a| (-a, Q::zero()))
            .collect();
        for l in self.target.norm.pieces(MAX_PIECES)? {
            ineqs.push((self.matrix.transpose().apply(&l)?, q(1)));
        }
        let gens = polyhedron_generators(self.source.dim(), &ineqs, &[]);
        let p = &self.source.norm;
        Ok(sup_sublinear(&gens, |x| Ok(ExtReal::Finite(p.eval(x)?)))?.0)
    }

    /// The quotient of the source by the lineality of `ker f ∩ X`.
    pub fn kernel_quotient(&self) -> Result<QuotientSpace> {
        let x = &self.source.space;
        let n = x.dim();
        let mut rows = x.closure_rows();
        rows.extend(self.matrix.rows().iter().cloned());
        let g = Subspace::span(n, &null_space(n, &rows));
        rows.extend(self.matrix.rows().iter().map(|r| -r));
        let subcone = ConeSpace::polyhedral(Matrix::from_rows(n, rows)?);
        QuotientSpace::from_parts(x.clone(), self.source.norm.clone(), subcone, g, false)
    }

    pub fn report(&self) -> Result<OperatorReport> {
        let norm = self.op_norm()?;
        let kernel = self.kernel_quotient()?;
        let factorization_norms = match factorize(self) {
            Ok(fx) => Some((fx.norm_t, fx.norm_tilde)),
            Err(Error::NotClosed { .. }) => None,
            Err(e) => return Err(e),
        };
        Ok(OperatorReport {
            continuous: norm.is_finite(),
            norm,
            p_injective: self.is_p_injective()?,
            g_injective: self.is_g_injective(&kernel)?,
            kernel_certificate: kernel.certificate().clone(),
            openness: self.openness_constant()?,
            factorization_norms,
        })
    }
}

fn selector(n: usize, total: usize, offset: usize) -> Matrix {
    let rows = (0..n).map(|i| QVec::unit(total, offset + i)).collect();
    Matrix::from_rows(total, rows).expect("unit rows have the requested length")
}

/// Writes `k = y - x` with `x, y ∈ X`, from generators of the closure.
fn split_difference(space: &ConeSpace, gens: &[QVec], k: &QVec) -> Result<(QVec, QVec)> {
    let n = space.dim();
    let coeffs = Matrix::from_columns(n, gens)
        .solve(k)?
        .expect("k lies in the span of the generators");
    let mut x = QVec::zeros(n);
    let mut y = QVec::zeros(n);
    for (c, g) in coeffs.coords().iter().zip(gens) {
        if c.is_positive() {
            y = &y + &g.scale(c);
        } else if c.is_negative() {
            x = &x - &g.scale(c);
        }
    }
    if !(space.member(&x)? && space.member(&y)?) {
        let e0 = QVec::unit(n, 0);
        x = &x + &e0;
        y = &y + &e0;
    }
    Ok((x, y))
}

/// Fails unless `matrix` maps `source` into `target`.
///
/// Closures are compared on generators. A strict target additionally needs
/// the image to avoid its boundary face `y_0 = 0` away from the origin: any
/// source generator whose image has `y_0 = 0` must map to zero (for a strict
/// source this matters only when `e_0` itself lands on that face).
fn check_maps_into(matrix: &Matrix, source: &ConeSpace, target: &ConeSpace) -> Result<()> {
    let gens = closure_generators(source).all_directions();
    for g in &gens {
        let image = matrix.apply(g)?;
        for row in target.closure_rows() {
            if row.dot(&image).is_negative() {
                return Err(Error::MapLeavesCone(format!(
                    "{g} maps to {image}, outside the {} target",
                    target.kind().name()
                )));
            }
        }
    }
    if matches!(target.kind(), ConeKind::StrictFirstOrthant) {
        let e0 = QVec::unit(source.dim(), 0);
        let strict_source_is_safe =
            source.is_strict() && matrix.apply(&e0)?[0].is_positive();
        if !strict_source_is_safe {
            for g in &gens {
                let image = matrix.apply(g)?;
                if image[0].is_zero() && !image.is_zero() {
                    return Err(Error::MapLeavesCone(format!(
                        "{g} maps to {image}, on the excluded face of the target"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// `sup{q(A x) : x ∈ cl(X), p(x) <= 1}`, one LP per piece of `q`.
///
/// For the strict orthant the closure gives the same supremum: its members
/// are dense in the closed unit ball and the objective is continuous.
fn sup_pl_over_ball(source: &NormedCone, a: &Matrix, q_norm: &PLQuasiNorm) -> Result<ExtReal> {
    let n = source.dim();
    let x_map = AffineMap::linear(Matrix::identity(n));
    let at = a.transpose();
    let mut best = ExtReal::zero();
    for l in q_norm.pieces(MAX_PIECES)? {
        let obj = at.apply(&l)?;
        if obj.is_zero() {
            continue;
        }
        let mut lp = LpProblem::new(n, Sense::Maximize);
        add_closed_membership(&mut lp, &source.space, &x_map);
        let s = add_epigraph(&mut lp, &source.norm, &x_map);
        let budget = indicator(lp.nvars(), &s);
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

/// `g ∘ f`.
pub fn compose(g: &LinMap, f: &LinMap) -> Result<LinMap> {
    if f.target != g.source {
        return Err(Error::SpaceMismatch(
            "the target of the inner map differs from the source of the outer map".into(),
        ));
    }
    Ok(LinMap {
        matrix: g.matrix.mul(&f.matrix)?,
        source: f.source.clone(),
        target: g.target.clone(),
        cached_norm: OnceLock::new(),
    })
}

/// A continuous functional into `(R, u)` with its exact norm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualElement {
    pub functional: QVec,
    pub norm: Q,
}

/// `‖c‖ = sup{u(c·x) : x ∈ X, p(x) <= 1}`.
pub fn functional_norm(source: &NormedCone, c: &QVec) -> Result<ExtReal> {
    c.check_dim(source.dim())?;
    let a = Matrix::from_rows(source.dim(), vec![c.clone()])?;
    sup_pl_over_ball(source, &a, &PLQuasiNorm::upper_sum(1))
}

/// Generators of the continuous functionals vanishing on `G`.
///
/// Functionals are taken modulo the annihilator of `span(X)`, so they are
/// represented inside `span(X)`. A functional `c` is continuous exactly when
/// `c·d <= 0` for every `d ∈ cl(X)` with `p(d) = 0` (the recession cone of
/// the unit ball). The result lists rays and both signs of lineality
/// vectors of that polyhedral cone; an empty list means only the zero
/// functional qualifies.
pub fn polar(qs: &QuotientSpace) -> Result<Vec<DualElement>> {
    let space = qs.space();
    let n = space.dim();
    let source = NormedCone::new(space.clone(), qs.norm().clone())?;
    let zero_dirs = zero_set_generators(space, qs.norm()).all_directions();
    let span_x = Subspace::span(n, &closure_generators(space).all_directions());
    let mut eqs: Vec<QVec> = qs.g().basis().to_vec();
    eqs.extend(span_x.equations());
    let gens = crate::polyhedra::cone_generators(n, &zero_dirs, &eqs);
    gens.all_directions()
        .into_iter()
        .map(|c| {
            let norm = functional_norm(&source, &c)?;
            let ExtReal::Finite(norm) = norm else {
                unreachable!("generators of the continuous cone have finite norm");
            };
            Ok(DualElement { functional: c, norm })
        })
        .collect()
}

/// The correspondence between functionals on `X/Y` (row vectors on class
/// coordinates) and functionals on `X` vanishing on `G`.
#[derive(Debug, Clone)]
pub struct DualIsometry {
    qs: QuotientSpace,
    source: NormedCone,
}

impl DualIsometry {
    pub fn new(qs: &QuotientSpace) -> Result<Self> {
        if let ClosedCertificate::Falsified(w) = qs.certificate() {
            return Err(Error::NotClosed {
                witness: w.to_string(),
            });
        }
        Ok(DualIsometry {
            qs: qs.clone(),
            source: NormedCone::new(qs.space().clone(), qs.norm().clone())?,
        })
    }

    pub fn quotient(&self) -> &QuotientSpace {
        &self.qs
    }

    /// `(T f)(x) = f([x])`.
    pub fn forward(&self, f: &QVec) -> Result<QVec> {
        f.check_dim(self.qs.class_dim())?;
        self.qs.g().class_coords_matrix().transpose().apply(f)
    }

    /// `f_h([x]) = h(x)`; `h` must vanish on `G`.
    pub fn backward(&self, h: &QVec) -> Result<QVec> {
        h.check_dim(self.qs.space().dim())?;
        if self.qs.g().basis().iter().any(|b| !h.dot(b).is_zero()) {
            return Err(Error::Invalid(format!("{h} does not vanish on G")));
        }
        Ok(QVec::new(
            self.qs.g().free_coords().iter().map(|&i| h[i].clone()).collect(),
        ))
    }

    /// `‖h‖_{p,u}` on `X`.
    pub fn norm_on_space(&self, h: &QVec) -> Result<ExtReal> {
        functional_norm(&self.source, h)
    }

    /// `‖f‖_{p̂,u}` on `X/Y`, computed over the quotient unit ball.
    pub fn norm_on_quotient(&self, f: &QVec) -> Result<ExtReal> {
        let m = Matrix::from_rows(self.qs.class_dim(), vec![f.clone()])?;
        self.qs.sup_over_unit_ball(&m, &PLQuasiNorm::upper_sum(1))
    }
}

/// `T̃` on class coordinates of `X / ker T`.
#[derive(Debug, Clone)]
pub struct InducedMap {
    pub matrix: Matrix,
    pub target: NormedCone,
}

impl InducedMap {
    pub fn apply(&self, coords: &QVec) -> Result<QVec> {
        self.matrix.apply(coords)
    }
}

#[derive(Debug, Clone)]
pub struct Factorization {
    pub quotient: QuotientSpace,
    pub induced: InducedMap,
    pub norm_t: ExtReal,
    pub norm_tilde: ExtReal,
    /// `k > 0` with `k p̂([x]) <= q(T̃[x])`, when the map is p-injective,
    /// G-injective and open with a positive constant `M` (then `k = 1/M`).
    pub iso_constant: Option<Q>,
}

/// `T = T̃ ∘ φ` with `φ` the quotient map of `X / ker T`.
pub fn factorize(t: &LinMap) -> Result<Factorization> {
    let qs = t.kernel_quotient()?;
    if let ClosedCertificate::Falsified(w) = qs.certificate() {
        return Err(Error::NotClosed {
            witness: w.to_string(),
        });
    }
    let tilde = t.matrix.mul(&qs.g().lift_matrix())?;
    debug_assert_eq!(tilde.mul(&qs.g().class_coords_matrix())?, t.matrix);
    let norm_t = t.op_norm()?;
    let norm_tilde = qs.sup_over_unit_ball(&tilde, &t.target.norm)?;
    let iso_constant = if t.is_p_injective()?.holds() && t.is_g_injective(&qs)?.holds() {
        match t.openness_constant()? {
            Openness::Constant(m) if m.is_positive() => Some(q(1) / m),
            _ => None,
        }
    } else {
        None
    };
    Ok(Factorization {
        quotient: qs,
        induced: InducedMap {
            matrix: tilde,
            target: t.target.clone(),
        },
        norm_t,
        norm_tilde,
        iso_constant,
    })
}

/// Everything the analysis front end prints about one map.
#[derive(Debug, Clone)]
pub struct OperatorReport {
    pub continuous: bool,
    pub norm: ExtReal,
    pub p_injective: Injectivity,
    pub g_injective: Injectivity,
    pub kernel_certificate: ClosedCertificate,
    pub openness: Openness,
    /// `(‖T‖, ‖T̃‖)`, absent when the kernel lineality is not closed.
    pub factorization_norms: Option<(ExtReal, ExtReal)>,
}
