//! The invariant suite: named properties, each run on seeded random
//! instances with exact assertions.

use num::{Signed, Zero};

use crate::cone::{ConeSpace, Subspace};
use crate::cspace::{
    cstar_as_plnorm, cstar_ep, cstar_norm, cstar_qmetric, truncated_f, truncated_f_collision,
    ComplexityFunction,
};
use crate::error::Result;
use crate::linalg::QVec;
use crate::operators::{
    compose, factorize, functional_norm, polar, DualIsometry, NormedCone,
};
use crate::oracle::{inf_sandwich, sup_sandwich};
use crate::polyhedra::unit_ball;
use crate::qnorm::{qmetric, ExtReal};
use crate::rational::{q, Q};
use crate::sample::Sampler;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CaseOutcome {
    Holds,
    /// The drawn instance does not meet the property's hypotheses.
    Skipped,
    Violated(String),
}

use CaseOutcome::{Holds, Skipped};

pub type Case = Result<CaseOutcome>;

pub type Property = fn(&mut Sampler) -> Case;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Ok(CaseOutcome::Violated(format!($($fmt)+)));
        }
    };
}

const MAX_DIM: usize = 3;

fn dim(s: &mut Sampler) -> usize {
    s.int(1, MAX_DIM as i64) as usize
}

fn qmetric_invariance_and_triangle(s: &mut Sampler) -> Case {
    let n = dim(s);
    let x_cone = s.cone(n);
    let p = s.valid_norm(&x_cone);
    let (x, y, z) = (s.member(&x_cone), s.member(&x_cone), s.member(&x_cone));
    let d = |a: &QVec, b: &QVec| qmetric(&p, &x_cone, a, b);
    ensure!(d(&x, &x)? == ExtReal::zero(), "d(x,x) != 0 at {x}");
    ensure!(
        d(&(&x + &z), &(&y + &z))? == d(&x, &y)?,
        "translation changes d at x={x} y={y} z={z}"
    );
    ensure!(
        d(&x, &z)? <= &d(&x, &y)? + &d(&y, &z)?,
        "triangle fails at x={x} y={y} z={z}"
    );
    Ok(Holds)
}

fn hat_p_sublinear(s: &mut Sampler) -> Case {
    let qs = s.quotient(MAX_DIM);
    let (x, y) = (s.member(qs.space()), s.member(qs.space()));
    let (a, b) = (qs.class_of(&x)?, qs.class_of(&y)?);
    let sum = qs.hat_p(&qs.class_add(&a, &b)?)?;
    ensure!(
        sum <= qs.hat_p(&a)? + qs.hat_p(&b)?,
        "p̂ not subadditive at {x}, {y}"
    );
    let r = if s.int(0, 4) == 0 { q(0) } else { s.nonneg_rational(3) };
    ensure!(
        qs.hat_p(&qs.class_scale(&r, &a)?)? == &r * qs.hat_p(&a)?,
        "p̂ not homogeneous at {x} with factor {r}"
    );
    Ok(Holds)
}

fn quotient_metric_dominated(s: &mut Sampler) -> Case {
    let qs = s.quotient(MAX_DIM);
    let (x, y) = (s.member(qs.space()), s.member(qs.space()));
    let upper = qmetric(qs.norm(), qs.space(), &x, &y)?;
    let lower = qs.quotient_qmetric(&qs.class_of(&x)?, &qs.class_of(&y)?)?;
    ensure!(lower <= upper, "d_p̂([x],[y]) = {lower} > d_p(x,y) = {upper} at {x}, {y}");
    Ok(Holds)
}

fn quotient_map_contracts(s: &mut Sampler) -> Case {
    let qs = s.quotient(MAX_DIM);
    let x = s.member(qs.space());
    let hp = qs.hat_p(&qs.class_of(&x)?)?;
    let p = qs.norm().eval(&x)?;
    ensure!(hp <= p, "p̂(φ(x)) = {hp} > p(x) = {p} at {x}");
    let norm = qs.quotient_map_norm()?;
    ensure!(norm <= ExtReal::Finite(q(1)), "‖φ‖ = {norm} > 1");
    Ok(Holds)
}

fn class_well_defined(s: &mut Sampler) -> Case {
    let qs = s.quotient(MAX_DIM);
    let x = s.member(qs.space());
    let g = s.subspace_member(qs.g());
    let (a, b) = (qs.class_of(&x)?, qs.class_of(&(&x + &g))?);
    ensure!(a == b, "[x] != [x+g] at x={x}, g={g}");
    ensure!(qs.hat_p(&a)? == qs.hat_p(&b)?, "p̂ differs on [x] and [x+g]");
    Ok(Holds)
}

fn inverse_classes(s: &mut Sampler) -> Case {
    let qs = s.quotient(MAX_DIM);
    let lin = qs.space().lineality();
    let x = s.subspace_member(&lin);
    let g = s.subspace_member(qs.g());
    let a = qs.class_of(&x)?;
    let b = qs.class_of(&(&g - &x))?;
    ensure!(qs.class_add(&a, &b)? == qs.zero(), "[x] + [-x+g] is not [0]");
    ensure!(qs.class_of(&-a.rep())? == b, "-rep([x]) is not in the inverse class");
    Ok(Holds)
}

fn falsified_witness_is_degenerate(s: &mut Sampler) -> Case {
    let qs = s.quotient(MAX_DIM);
    let crate::quotient::ClosedCertificate::Falsified(w) = qs.certificate().clone() else {
        return Ok(Skipped);
    };
    ensure!(!qs.g().contains(&w)?, "witness {w} lies in G");
    ensure!(
        crate::quotient::verify_witness(&qs, &w)?,
        "[{w}] is not in the closure of [0]"
    );
    Ok(Holds)
}

fn normineq(s: &mut Sampler) -> Case {
    let (n, m) = (dim(s), dim(s));
    let src = s.normed_cone(n);
    let tgt = s.coordinate_normed_cone(m);
    let f = s.map(&src, &tgt);
    let ExtReal::Finite(norm) = f.op_norm()? else {
        return Ok(Skipped);
    };
    let x = s.member(&src.space);
    let lhs = tgt.norm.eval(&f.apply(&x)?)?;
    let rhs = &norm * src.norm.eval(&x)?;
    ensure!(lhs <= rhs, "q(f(x)) = {lhs} > ‖f‖ p(x) = {rhs} at {x}");
    ensure!(f.is_continuous()?, "finite norm but reported discontinuous");
    Ok(Holds)
}

fn submultiplicative(s: &mut Sampler) -> Case {
    let (n, m, k) = (dim(s), dim(s), dim(s));
    let x = s.normed_cone(n);
    let y = s.coordinate_normed_cone(m);
    let z = s.coordinate_normed_cone(k);
    let f = s.map(&x, &y);
    let g = s.map(&y, &z);
    let (ExtReal::Finite(nf), ExtReal::Finite(ng)) = (f.op_norm()?, g.op_norm()?) else {
        return Ok(Skipped);
    };
    let gf = compose(&g, &f)?.op_norm()?;
    ensure!(
        gf <= ExtReal::Finite(&nf * &ng),
        "‖g∘f‖ = {gf} > ‖g‖‖f‖ = {}",
        crate::rational::format_q(&(&nf * &ng))
    );
    Ok(Holds)
}

fn ball_scaling(s: &mut Sampler) -> Case {
    let (n, m) = (dim(s), dim(s));
    let src = s.normed_cone(n);
    let tgt = s.coordinate_normed_cone(m);
    let f = s.map(&src, &tgt);
    let y = f.matrix().apply(&s.member(&src.space))?;
    let y = &y + &s.vector(m, 1);
    let (r, t) = (s.positive_rational(3), s.positive_rational(3));
    let scaled = y.scale(&(&t / &r));
    ensure!(
        f.reaches_within(&y, &r)? == f.reaches_within(&scaled, &t)?,
        "ball scaling fails for y={y}, r={r}, s={t}"
    );
    Ok(Holds)
}

fn vanishing_on_ball(s: &mut Sampler) -> Case {
    let n = dim(s);
    let src = s.normed_cone(n);
    let ball = unit_ball(&src.space, &src.norm)?;
    let mut gens = ball.vertices.clone();
    gens.extend(ball.recession.all_directions());
    let span = Subspace::span(n, &gens);
    // a functional vanishing on the ball's generators
    let mut c = QVec::zeros(n);
    for e in span.equations() {
        c = &c + &e.scale(&s.rational(2));
    }
    for _ in 0..3 {
        let x = s.member(&src.space);
        ensure!(c.dot(&x).is_zero(), "{c} vanishes on the unit ball but not at {x}");
    }
    Ok(Holds)
}

fn lower_bound_implies_trivial_kernel(s: &mut Sampler) -> Case {
    let (n, m) = (dim(s), dim(s));
    let src = NormedCone::new(ConeSpace::full(n), s.valid_norm(&ConeSpace::full(n)))?;
    let tgt = NormedCone::new(ConeSpace::full(m), s.valid_norm(&ConeSpace::full(m)))?;
    let f = s.map(&src, &tgt);
    let k = f.lower_bound_constant()?;
    if k > ExtReal::zero() {
        ensure!(
            f.matrix().null_space().is_empty(),
            "k* = {k} > 0 but the kernel is nontrivial"
        );
    }
    Ok(Holds)
}

fn inverse_bound_matches_lower_bound(s: &mut Sampler) -> Case {
    let n = dim(s);
    let m = s.int(n as i64, MAX_DIM as i64) as usize;
    let src = s.normed_cone(n);
    let tgt = s.coordinate_normed_cone(m);
    let f = s.map(&src, &tgt);
    if f.matrix().rank() < n {
        return Ok(Skipped);
    }
    let k = f.lower_bound_constant()?;
    let c = f.inverse_bound()?;
    ensure!(
        c.is_finite() == (k > ExtReal::zero()),
        "c* = {c} but k* = {k}"
    );
    if let (ExtReal::Finite(c), ExtReal::Finite(k)) = (&c, &k) {
        if k.is_positive() {
            ensure!(c * k == q(1), "c* k* != 1 (c* = {c}, k* = {k})");
        }
    }
    Ok(Holds)
}

fn dual_isometry(s: &mut Sampler) -> Case {
    let qs = s.closed_quotient(MAX_DIM);
    let iso = DualIsometry::new(&qs)?;
    let f = s.vector(qs.class_dim(), 3);
    let tf = iso.forward(&f)?;
    ensure!(iso.backward(&tf)? == f, "T_inv(T f) != f for f={f}");
    let (n1, n2) = (iso.norm_on_space(&tf)?, iso.norm_on_quotient(&f)?);
    ensure!(n1 == n2, "‖Tf‖ = {n1} but ‖f‖ = {n2} for f={f}");
    let mut h = QVec::zeros(qs.space().dim());
    for e in qs.g().equations() {
        h = &h + &e.scale(&s.rational(2));
    }
    ensure!(iso.forward(&iso.backward(&h)?)? == h, "T(T_inv h) != h for h={h}");
    let hb = iso.norm_on_quotient(&iso.backward(&h)?)?;
    ensure!(hb <= iso.norm_on_space(&h)?, "‖T_inv h‖ exceeds ‖h‖ for h={h}");
    Ok(Holds)
}

fn polar_generators(s: &mut Sampler) -> Case {
    let qs = s.quotient(MAX_DIM);
    let src = NormedCone::new(qs.space().clone(), qs.norm().clone())?;
    for d in polar(&qs)? {
        ensure!(
            qs.g().basis().iter().all(|b| d.functional.dot(b).is_zero()),
            "{} does not vanish on G",
            d.functional
        );
        ensure!(
            functional_norm(&src, &d.functional)? == ExtReal::Finite(d.norm.clone()),
            "stored norm of {} is wrong",
            d.functional
        );
        let x = s.member(qs.space());
        let lhs = crate::rational::pos(&d.functional.dot(&x));
        ensure!(
            lhs <= &d.norm * qs.norm().eval(&x)?,
            "u(c·x) > ‖c‖ p(x) for c={}, x={x}",
            d.functional
        );
    }
    Ok(Holds)
}

/// A random onto map whose kernel lineality is closed, if one turns up.
pub fn onto_map_with_closed_kernel(s: &mut Sampler) -> Result<Option<crate::operators::LinMap>> {
    for _ in 0..50 {
        let n = s.int(1, MAX_DIM as i64) as usize;
        let m = s.int(1, n as i64) as usize;
        let src = s.normed_cone(n);
        let tgt = s.coordinate_normed_cone(m);
        let f = s.map(&src, &tgt);
        if f.matrix().rank() == m && f.kernel_quotient()?.certificate().is_closed() {
            return Ok(Some(f));
        }
    }
    Ok(None)
}

fn factorization_norms(s: &mut Sampler) -> Case {
    let Some(f) = onto_map_with_closed_kernel(s)? else {
        return Ok(Skipped);
    };
    let fx = factorize(&f)?;
    ensure!(
        fx.norm_t == fx.norm_tilde,
        "‖T‖ = {} but ‖T̃‖ = {}",
        fx.norm_t,
        fx.norm_tilde
    );
    let c = fx.quotient.g().class_coords_matrix();
    ensure!(fx.induced.matrix.mul(&c)? == *f.matrix(), "T̃ ∘ φ != T");
    if let Some(k) = &fx.iso_constant {
        let x = s.member(&f.source().space);
        let cls = fx.quotient.class_of(&x)?;
        let lhs = k * fx.quotient.hat_p(&cls)?;
        let rhs = f.target().norm.eval(&fx.induced.apply(&fx.quotient.coords(&cls)?)?)?;
        ensure!(lhs <= rhs, "k p̂([x]) > q(T̃[x]) at {x}");
    }
    Ok(Holds)
}

fn cstar_axioms(s: &mut Sampler) -> Case {
    let n = s.int(1, 6) as usize;
    let mut cf = || -> Result<ComplexityFunction> {
        ComplexityFunction::new((0..n).map(|_| s.nonneg_rational(4)).collect())
    };
    let (f, g, h) = (cf()?, cf()?, cf()?);
    ensure!(cstar_qmetric(&f, &f)?.is_zero(), "d(f,f) != 0");
    ensure!(
        cstar_qmetric(&f, &h)? <= cstar_qmetric(&f, &g)? + cstar_qmetric(&g, &h)?,
        "triangle fails for {f}, {g}, {h}"
    );
    if cstar_qmetric(&f, &g)?.is_zero() && cstar_qmetric(&g, &f)?.is_zero() {
        ensure!(f == g, "d vanishes both ways on distinct {f}, {g}");
    }
    let p = cstar_as_plnorm(n);
    let x = ConeSpace::orthant(n);
    ensure!(
        cstar_ep(&f, &g)? == qmetric(&p, &x, &f.to_qvec(), &g.to_qvec())?,
        "e_p disagrees with the generic quasi-metric on {f}, {g}"
    );
    Ok(Holds)
}

fn truncated_f_isometry(s: &mut Sampler) -> Case {
    let n = s.int(2, 8) as usize;
    let f = truncated_f(n);
    let mut v: Vec<Q> = (0..n).map(|_| s.nonneg_rational(5)).collect();
    v[0] = s.positive_rational(5);
    let x = QVec::new(v);
    let image = ComplexityFunction::from_qvec(&f.apply(&x)?)?;
    ensure!(cstar_norm(&image) == x[0], "p(F(f)) != f(0) for f={x}");
    let (a, b) = truncated_f_collision(n)?;
    ensure!(
        a != b && f.apply(&a.to_qvec())? == f.apply(&b.to_qvec())?,
        "no collision witness"
    );
    Ok(Holds)
}

/// Coset infimum inside the grid sandwich, when the LP minimizer lies in
/// the grid box.
pub fn oracle_inf_case(s: &mut Sampler) -> Case {
    let n = s.int(1, 2) as usize;
    let x_cone = ConeSpace::full(n);
    let p = s.valid_norm(&x_cone);
    let g = Subspace::span(n, &[s.vector(n, 1)]);
    if g.dim() == 0 {
        return Ok(Skipped);
    }
    let x0 = s.vector(n, 3);
    let exact = match crate::lp::minimize_pl_over_coset(&p, &x0, &g, None)? {
        crate::lp::CosetMin::Optimal { value, shift } => {
            let t = &shift[g.pivots()[0]];
            if t.abs() > q(8) {
                return Ok(Skipped);
            }
            value
        }
        crate::lp::CosetMin::Infeasible => return Ok(CaseOutcome::Violated("unconstrained coset infeasible".into())),
    };
    let step = Q::new(1.into(), 4.into());
    let (lo, hi) = inf_sandwich(&p, &x0, g.basis(), &q(8), &step)?;
    ensure!(lo <= exact && exact <= hi, "inf {exact} outside [{lo}, {hi}]");
    Ok(Holds)
}

/// Operator norm inside the grid sandwich, for continuous maps on
/// coordinate cones whose unit-ball vertices lie in the grid box.
pub fn oracle_sup_case(s: &mut Sampler) -> Case {
    let (n, m) = (s.int(1, 2) as usize, s.int(1, 2) as usize);
    let src = s.coordinate_normed_cone(n);
    let tgt = s.coordinate_normed_cone(m);
    let f = s.map(&src, &tgt);
    let ExtReal::Finite(exact) = f.op_norm()? else {
        return Ok(Skipped);
    };
    let range = q(4);
    let ball = unit_ball(&src.space, &src.norm)?;
    if ball
        .vertices
        .iter()
        .any(|v| v.coords().iter().any(|c| c.abs() > range))
    {
        return Ok(Skipped);
    }
    let (lo, hi) = sup_sandwich(&f, &range, &Q::new(1.into(), 8.into()))?;
    ensure!(lo <= exact && exact <= hi, "sup {exact} outside [{lo}, {hi}]");
    Ok(Holds)
}

/// `(name, property)` pairs in suite order.
pub const PROPERTIES: &[(&str, Property)] = &[
    ("qmetric_invariance_and_triangle", qmetric_invariance_and_triangle),
    ("hat_p_sublinear", hat_p_sublinear),
    ("quotient_metric_dominated", quotient_metric_dominated),
    ("quotient_map_contracts", quotient_map_contracts),
    ("class_well_defined", class_well_defined),
    ("inverse_classes", inverse_classes),
    ("falsified_witness_is_degenerate", falsified_witness_is_degenerate),
    ("normineq", normineq),
    ("submultiplicative", submultiplicative),
    ("ball_scaling", ball_scaling),
    ("vanishing_on_ball", vanishing_on_ball),
    ("lower_bound_implies_trivial_kernel", lower_bound_implies_trivial_kernel),
    ("inverse_bound_matches_lower_bound", inverse_bound_matches_lower_bound),
    ("dual_isometry", dual_isometry),
    ("polar_generators", polar_generators),
    ("factorization_norms", factorization_norms),
    ("cstar_axioms", cstar_axioms),
    ("truncated_f_isometry", truncated_f_isometry),
    ("oracle_inf_sandwich", oracle_inf_case),
    ("oracle_sup_sandwich", oracle_sup_case),
];

/// Draws allowed per requested case before a property gives up on
/// finding instances that meet its hypotheses.
pub const MAX_DRAWS_PER_CASE: usize = 20;

#[derive(Debug, Clone)]
pub struct PropertyOutcome {
    pub name: &'static str,
    pub requested: usize,
    /// Instances that met the hypotheses and were checked.
    pub checked: usize,
    pub skipped: usize,
    pub violations: Vec<String>,
}

impl PropertyOutcome {
    /// No violations, and every requested case was checked.
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.checked >= self.requested
    }
}

/// Runs one property until `cases` instances meeting its hypotheses have
/// been checked. Each property gets its own stream derived from `seed` and
/// its position in [`PROPERTIES`], so results do not depend on which other
/// properties run.
pub fn run_property(index: usize, seed: u64, cases: usize) -> PropertyOutcome {
    let (name, prop) = PROPERTIES[index];
    let mut s = Sampler::new(seed.wrapping_mul(1_000_003).wrapping_add(index as u64));
    let mut out = PropertyOutcome {
        name,
        requested: cases,
        checked: 0,
        skipped: 0,
        violations: Vec::new(),
    };
    let mut draw = 0;
    while out.checked < cases && draw < cases * MAX_DRAWS_PER_CASE {
        match prop(&mut s) {
            Ok(CaseOutcome::Holds) => out.checked += 1,
            Ok(CaseOutcome::Skipped) => out.skipped += 1,
            Ok(CaseOutcome::Violated(why)) => {
                out.checked += 1;
                out.violations.push(format!("draw {draw}: {why}"));
            }
            Err(e) => {
                out.checked += 1;
                out.violations.push(format!("draw {draw}: error: {e}"));
            }
        }
        draw += 1;
    }
    out
}

pub fn property_index(name: &str) -> Option<usize> {
    PROPERTIES.iter().position(|(n, _)| *n == name)
}

pub fn run_suite(seed: u64, cases: usize) -> Vec<PropertyOutcome> {
    (0..PROPERTIES.len())
        .map(|i| run_property(i, seed, cases))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;
    use crate::qnorm::PLQuasiNorm;

    #[test]
    fn suite_passes_on_a_few_cases() {
        for out in run_suite(11, 5) {
            assert!(out.passed(), "{}: {:?}", out.name, out.violations);
        }
    }

    #[test]
    fn matrices_in_generated_maps_have_right_shape() {
        let mut s = Sampler::new(1);
        let src = s.normed_cone(3);
        let tgt = NormedCone::new(ConeSpace::full(2), PLQuasiNorm::l1(2)).unwrap();
        let f = s.map(&src, &tgt);
        assert_eq!((f.matrix().nrows(), f.matrix().ncols()), (2, 3));
        let _ = Matrix::identity(1);
    }
}
