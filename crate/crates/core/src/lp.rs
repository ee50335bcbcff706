//! Exact two-phase simplex over `Q` with Bland's pivoting rule, plus the
//! piecewise-linear coset minimization every infimum in the crate reduces to.
//!
//! Problems are stated over free variables by default; bounds are optional
//! per variable. Outcomes are reported as [`LpOutcome`], never as numeric
//! sentinels.

use num::{Signed, Zero};

use crate::cone::{ConeKind, ConeSpace, Subspace};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, QVec};
use crate::qnorm::PLQuasiNorm;
use crate::rational::{q, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearConstraint {
    pub coeffs: Vec<Q>,
    pub relation: Relation,
    pub rhs: Q,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { value: Q, point: Vec<Q> },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn value(&self) -> Option<&Q> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }
}

/// A linear program. Constraint coefficient vectors shorter than the number
/// of variables are implicitly zero-padded.
#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    pub sense: Sense,
    pub objective: Vec<Q>,
    pub constraints: Vec<LinearConstraint>,
    pub lower: Vec<Option<Q>>,
    pub upper: Vec<Option<Q>>,
}

impl LpProblem {
    /// `nvars` free variables and a zero objective.
    pub fn new(nvars: usize, sense: Sense) -> Self {
        LpProblem {
            sense,
            objective: vec![Q::zero(); nvars],
            constraints: Vec::new(),
            lower: vec![None; nvars],
            upper: vec![None; nvars],
        }
    }

    pub fn nvars(&self) -> usize {
        self.objective.len()
    }

    pub fn add_var(&mut self, lower: Option<Q>, upper: Option<Q>) -> usize {
        self.objective.push(Q::zero());
        self.lower.push(lower);
        self.upper.push(upper);
        self.objective.len() - 1
    }

    pub fn set_bounds(&mut self, var: usize, lower: Option<Q>, upper: Option<Q>) {
        self.lower[var] = lower;
        self.upper[var] = upper;
    }

    pub fn set_objective(&mut self, coeffs: Vec<Q>) {
        let mut c = coeffs;
        c.resize(self.nvars().max(c.len()), Q::zero());
        self.objective = c;
    }

    pub fn constrain(&mut self, coeffs: Vec<Q>, relation: Relation, rhs: Q) {
        self.constraints.push(LinearConstraint {
            coeffs,
            relation,
            rhs,
        });
    }

    fn validate(&self) -> Result<()> {
        let n = self.nvars();
        if self.lower.len() != n || self.upper.len() != n {
            return Err(Error::MalformedLp(format!(
                "{n} variables but {} lower and {} upper bounds",
                self.lower.len(),
                self.upper.len()
            )));
        }
        for (i, c) in self.constraints.iter().enumerate() {
            if c.coeffs.len() > n {
                return Err(Error::MalformedLp(format!(
                    "constraint {i} has {} coefficients for {n} variables",
                    c.coeffs.len()
                )));
            }
        }
        Ok(())
    }

    pub fn solve(&self) -> Result<LpOutcome> {
        self.validate()?;
        let n = self.nvars();

        // x_j = offset_j + sum(sign * z_k)
        let mut offset = vec![Q::zero(); n];
        let mut subst: Vec<Vec<(usize, Q)>> = Vec::with_capacity(n);
        let mut nz = 0usize;
        let mut extra: Vec<LinearConstraint> = Vec::new();
        for j in 0..n {
            match (&self.lower[j], &self.upper[j]) {
                (Some(l), up) => {
                    offset[j] = l.clone();
                    subst.push(vec![(nz, q(1))]);
                    if let Some(u) = up {
                        if u < l {
                            return Ok(LpOutcome::Infeasible);
                        }
                        let mut coeffs = vec![Q::zero(); nz + 1];
                        coeffs[nz] = q(1);
                        extra.push(LinearConstraint {
                            coeffs,
                            relation: Relation::Le,
                            rhs: u - l,
                        });
                    }
                    nz += 1;
                }
                (None, Some(u)) => {
                    offset[j] = u.clone();
                    subst.push(vec![(nz, q(-1))]);
                    nz += 1;
                }
                (None, None) => {
                    subst.push(vec![(nz, q(1)), (nz + 1, q(-1))]);
                    nz += 2;
                }
            }
        }

        let mut rows: Vec<(Vec<Q>, Relation, Q)> = Vec::new();
        for c in &self.constraints {
            let mut coeffs = vec![Q::zero(); nz];
            let mut rhs = c.rhs.clone();
            for (j, a) in c.coeffs.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                rhs -= a * &offset[j];
                for (k, s) in &subst[j] {
                    coeffs[*k] += a * s;
                }
            }
            rows.push((coeffs, c.relation, rhs));
        }
        for c in extra {
            let mut coeffs = c.coeffs;
            coeffs.resize(nz, Q::zero());
            rows.push((coeffs, c.relation, c.rhs));
        }

        let mut cost = vec![Q::zero(); nz];
        for (j, c) in self.objective.iter().enumerate() {
            let c = match self.sense {
                Sense::Minimize => c.clone(),
                Sense::Maximize => -c,
            };
            for (k, s) in &subst[j] {
                cost[*k] += &c * s;
            }
        }

        let z = match Tableau::standard_form(nz, rows).run(&cost) {
            Phase::Infeasible => return Ok(LpOutcome::Infeasible),
            Phase::Unbounded => return Ok(LpOutcome::Unbounded),
            Phase::Optimal(z) => z,
        };

        let point: Vec<Q> = (0..n)
            .map(|j| {
                subst[j]
                    .iter()
                    .fold(offset[j].clone(), |acc, (k, s)| acc + &z[*k] * s)
            })
            .collect();
        let value = self
            .objective
            .iter()
            .zip(&point)
            .map(|(c, x)| c * x)
            .sum();
        Ok(LpOutcome::Optimal { value, point })
    }
}

enum Phase {
    Optimal(Vec<Q>),
    Infeasible,
    Unbounded,
}

/// Dense tableau for `min c·z, A z = b, z >= 0, b >= 0`.
struct Tableau {
    /// Number of structural columns (original plus slack variables).
    nstruct: usize,
    /// Columns `nstruct..nstruct+m` are artificials; the last entry is the rhs.
    rows: Vec<Vec<Q>>,
    basis: Vec<usize>,
    nz: usize,
}

impl Tableau {
    fn standard_form(nz: usize, rows: Vec<(Vec<Q>, Relation, Q)>) -> Self {
        let nslack = rows.iter().filter(|r| r.1 != Relation::Eq).count();
        let nstruct = nz + nslack;
        let m = rows.len();
        let width = nstruct + m + 1;
        let mut table = Vec::with_capacity(m);
        let mut slack = nz;
        for (i, (coeffs, rel, rhs)) in rows.into_iter().enumerate() {
            let mut row = vec![Q::zero(); width];
            for (k, a) in coeffs.into_iter().enumerate() {
                row[k] = a;
            }
            match rel {
                Relation::Le => {
                    row[slack] = q(1);
                    slack += 1;
                }
                Relation::Ge => {
                    row[slack] = q(-1);
                    slack += 1;
                }
                Relation::Eq => {}
            }
            row[width - 1] = rhs;
            if row[width - 1].is_negative() {
                for v in row.iter_mut() {
                    *v = -&*v;
                }
            }
            row[nstruct + i] = q(1);
            table.push(row);
        }
        Tableau {
            nstruct,
            basis: (nstruct..nstruct + m).collect(),
            rows: table,
            nz,
        }
    }

    fn rhs(&self) -> usize {
        self.rows.first().map_or(self.nstruct, |r| r.len() - 1)
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = q(1) / &self.rows[r][c];
        for v in self.rows[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Bland's rule simplex on columns `0..ncols`. Returns false when unbounded.
    fn optimize(&mut self, cost: &[Q], ncols: usize) -> bool {
        let rhs = self.rhs();
        loop {
            let entering = (0..ncols).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let mut d = cost[j].clone();
                for (i, row) in self.rows.iter().enumerate() {
                    if !row[j].is_zero() {
                        d -= &cost[self.basis[i]] * &row[j];
                    }
                }
                d.is_negative()
            });
            let Some(c) = entering else {
                return true;
            };
            let mut leave: Option<(usize, Q)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[c].is_positive() {
                    continue;
                }
                let ratio = &row[rhs] / &row[c];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => {
                        ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                None => return false,
                Some((r, _)) => self.pivot(r, c),
            }
        }
    }

    fn run(mut self, cost: &[Q]) -> Phase {
        let m = self.rows.len();
        let rhs = self.rhs();
        let total = self.nstruct + m;

        let mut phase1 = vec![Q::zero(); total];
        for c in phase1.iter_mut().skip(self.nstruct) {
            *c = q(1);
        }
        self.optimize(&phase1, total);
        let infeasibility: Q = self
            .rows
            .iter()
            .zip(&self.basis)
            .filter(|(_, &b)| b >= self.nstruct)
            .map(|(r, _)| r[rhs].clone())
            .sum();
        if infeasibility.is_positive() {
            return Phase::Infeasible;
        }

        // Drive zero-valued artificials out of the basis; drop redundant rows.
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] >= self.nstruct {
                match (0..self.nstruct).find(|&j| !self.rows[i][j].is_zero()) {
                    Some(j) => {
                        self.pivot(i, j);
                        i += 1;
                    }
                    None => {
                        self.rows.remove(i);
                        self.basis.remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }

        let mut phase2 = vec![Q::zero(); total];
        phase2[..cost.len()].clone_from_slice(cost);
        if !self.optimize(&phase2, self.nstruct) {
            return Phase::Unbounded;
        }

        let mut z = vec![Q::zero(); self.nz];
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            if b < self.nz {
                z[b] = row[rhs].clone();
            }
        }
        Phase::Optimal(z)
    }
}

/// `x = offset + lin · w`, where `w` are the leading LP variables.
#[derive(Debug, Clone)]
pub(crate) struct AffineMap {
    pub lin: Matrix,
    pub offset: QVec,
}

impl AffineMap {
    pub fn linear(lin: Matrix) -> Self {
        let offset = QVec::zeros(lin.nrows());
        AffineMap { lin, offset }
    }

    /// Coefficients over the LP variables and constant term of `row · x(w)`.
    pub fn form(&self, row: &QVec) -> (Vec<Q>, Q) {
        let coeffs = (0..self.lin.ncols())
            .map(|j| {
                row.coords()
                    .iter()
                    .enumerate()
                    .map(|(i, r)| r * self.lin.entry(i, j))
                    .sum()
            })
            .collect();
        (coeffs, row.dot(&self.offset))
    }
}

/// Adds epigraph variables `s_i >= max(w+_i t_i, -w-_i t_i, 0)` for the terms
/// `t_i = (M x(w))_i` of `p`, and returns their indices. Terms with both
/// weights zero are skipped.
pub(crate) fn add_epigraph(lp: &mut LpProblem, p: &PLQuasiNorm, x: &AffineMap) -> Vec<usize> {
    let mut vars = Vec::new();
    for term in p.terms() {
        if term.wplus.is_zero() && term.wminus.is_zero() {
            continue;
        }
        let (coeffs, constant) = x.form(&term.row);
        let s = lp.add_var(Some(Q::zero()), None);
        if !term.wplus.is_zero() {
            let mut c: Vec<Q> = coeffs.iter().map(|a| -(a * &term.wplus)).collect();
            c.resize(s + 1, Q::zero());
            c[s] = q(1);
            lp.constrain(c, Relation::Ge, &term.wplus * &constant);
        }
        if !term.wminus.is_zero() {
            let mut c: Vec<Q> = coeffs.iter().map(|a| a * &term.wminus).collect();
            c.resize(s + 1, Q::zero());
            c[s] = q(1);
            lp.constrain(c, Relation::Ge, -(&term.wminus * &constant));
        }
        vars.push(s);
    }
    vars
}

/// Constrains `x(w)` to the closure of `cone` (the closed cone cut out by
/// its defining rows).
pub(crate) fn add_closed_membership(lp: &mut LpProblem, cone: &ConeSpace, x: &AffineMap) {
    for row in cone.closure_rows() {
        let (coeffs, constant) = x.form(&row);
        lp.constrain(coeffs, Relation::Ge, -constant);
    }
}

pub(crate) fn indicator(len: usize, vars: &[usize]) -> Vec<Q> {
    let mut c = vec![Q::zero(); len];
    for &v in vars {
        c[v] = q(1);
    }
    c
}

#[derive(Debug, Clone, PartialEq)]
pub enum CosetMin {
    /// `shift` is the element of the subspace at which `p(x0 + shift)` is
    /// minimal.
    Optimal { value: Q, shift: QVec },
    Infeasible,
}

impl CosetMin {
    pub fn value(&self) -> Option<&Q> {
        match self {
            CosetMin::Optimal { value, .. } => Some(value),
            CosetMin::Infeasible => None,
        }
    }
}

/// Minimizes `p(x0 + g)` over `g` in `subspace`, optionally keeping
/// `x0 + g` inside `extra_cone`.
///
/// For the strict first-coordinate orthant the feasible set is not closed;
/// the returned value is the exact infimum and the returned shift may lie on
/// the boundary of the cone.
pub fn minimize_pl_over_coset(
    p: &PLQuasiNorm,
    x0: &QVec,
    subspace: &Subspace,
    extra_cone: Option<&ConeSpace>,
) -> Result<CosetMin> {
    let n = p.dim();
    x0.check_dim(n)?;
    if subspace.ambient_dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: subspace.ambient_dim(),
        });
    }
    if let Some(c) = extra_cone {
        if c.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: c.dim(),
            });
        }
    }
    let basis = subspace.basis();
    let lin = Matrix::from_columns(n, basis);

    if let Some(cone) = extra_cone.filter(|c| matches!(c.kind(), ConeKind::StrictFirstOrthant)) {
        // The coset may pass through 0, where p vanishes.
        if let Some(t) = lin.solve(&-x0)? {
            return Ok(CosetMin::Optimal {
                value: Q::zero(),
                shift: lin.apply(&t)?,
            });
        }
        // Otherwise the strict part {x >= 0, x_0 > 0} must meet the coset.
        let x = AffineMap {
            lin: lin.clone(),
            offset: x0.clone(),
        };
        let mut probe = LpProblem::new(basis.len(), Sense::Maximize);
        add_closed_membership(&mut probe, cone, &x);
        let (c0, k0) = x.form(&QVec::unit(n, 0));
        probe.set_objective(c0);
        let reaches_interior = match probe.solve()? {
            LpOutcome::Unbounded => true,
            LpOutcome::Optimal { value, .. } => (value + k0).is_positive(),
            LpOutcome::Infeasible => false,
        };
        if !reaches_interior {
            return Ok(CosetMin::Infeasible);
        }
    }

    let x = AffineMap {
        lin: lin.clone(),
        offset: x0.clone(),
    };
    let mut lp = LpProblem::new(basis.len(), Sense::Minimize);
    if let Some(cone) = extra_cone {
        add_closed_membership(&mut lp, cone, &x);
    }
    let s = add_epigraph(&mut lp, p, &x);
    lp.set_objective(indicator(lp.nvars(), &s));
    match lp.solve()? {
        LpOutcome::Optimal { value, point } => {
            let t = QVec::new(point[..basis.len()].to_vec());
            Ok(CosetMin::Optimal {
                value,
                shift: lin.apply(&t)?,
            })
        }
        LpOutcome::Infeasible => Ok(CosetMin::Infeasible),
        LpOutcome::Unbounded => unreachable!("a sum of nonnegative epigraph variables is bounded below"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn free_lp(n: usize, sense: Sense) -> LpProblem {
        LpProblem::new(n, sense)
    }

    #[test]
    fn epigraph_of_upper_part_at_five() {
        // min t s.t. t >= x, t >= 0, x = 5
        let mut lp = free_lp(2, Sense::Minimize);
        lp.set_objective(vec![q(0), q(1)]);
        lp.constrain(vec![q(-1), q(1)], Relation::Ge, q(0));
        lp.constrain(vec![q(0), q(1)], Relation::Ge, q(0));
        lp.constrain(vec![q(1)], Relation::Eq, q(5));
        let out = lp.solve().unwrap();
        assert_eq!(out.value(), Some(&q(5)));
    }

    #[test]
    fn contradictory_bounds_are_infeasible() {
        let mut lp = free_lp(1, Sense::Minimize);
        lp.constrain(vec![q(1)], Relation::Ge, q(1));
        lp.constrain(vec![q(1)], Relation::Le, q(0));
        assert_eq!(lp.solve().unwrap(), LpOutcome::Infeasible);
    }

    #[test]
    fn ray_is_unbounded() {
        let mut lp = free_lp(1, Sense::Maximize);
        lp.set_objective(vec![q(1)]);
        lp.constrain(vec![q(1)], Relation::Ge, q(0));
        assert_eq!(lp.solve().unwrap(), LpOutcome::Unbounded);
    }

    #[test]
    fn bounds_and_fractional_optimum() {
        // max x + y s.t. 2x + 3y <= 7, x in [0, 2], y >= 1/2
        let mut lp = free_lp(2, Sense::Maximize);
        lp.set_objective(vec![q(1), q(1)]);
        lp.constrain(vec![q(2), q(3)], Relation::Le, q(7));
        lp.set_bounds(0, Some(q(0)), Some(q(2)));
        lp.set_bounds(1, Some(frac(1, 2)), None);
        match lp.solve().unwrap() {
            LpOutcome::Optimal { value, point } => {
                assert_eq!(value, q(3));
                assert_eq!(point, vec![q(2), q(1)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn redundant_equalities_are_tolerated() {
        let mut lp = free_lp(2, Sense::Minimize);
        lp.set_objective(vec![q(1), q(1)]);
        lp.constrain(vec![q(1), q(1)], Relation::Eq, q(2));
        lp.constrain(vec![q(2), q(2)], Relation::Eq, q(4));
        lp.set_bounds(0, Some(q(0)), None);
        lp.set_bounds(1, Some(q(0)), None);
        assert_eq!(lp.solve().unwrap().value(), Some(&q(2)));
    }

    #[test]
    fn malformed_problem_is_an_error() {
        let mut lp = free_lp(1, Sense::Minimize);
        lp.constrain(vec![q(1), q(2)], Relation::Le, q(0));
        assert!(matches!(lp.solve(), Err(Error::MalformedLp(_))));
    }

    #[test]
    fn degenerate_cycling_example_terminates() {
        // Beale's classic cycling instance for the textbook largest-coefficient rule.
        let mut lp = free_lp(4, Sense::Minimize);
        lp.set_objective(vec![frac(-3, 4), q(150), frac(-1, 50), q(6)]);
        lp.constrain(vec![frac(1, 4), q(-60), frac(-1, 25), q(9)], Relation::Le, q(0));
        lp.constrain(vec![frac(1, 2), q(-90), frac(-1, 50), q(3)], Relation::Le, q(0));
        lp.constrain(vec![q(0), q(0), q(1), q(0)], Relation::Le, q(1));
        for j in 0..4 {
            lp.set_bounds(j, Some(q(0)), None);
        }
        assert_eq!(lp.solve().unwrap().value(), Some(&frac(-1, 20)));
    }
}
