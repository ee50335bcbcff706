//! Cones embedded in `Q^n`: four closed families with exact membership,
//! and the lineality subspace `G_Y = {y ∈ Y : -y ∈ Y}`.
//!
//! Every cone here sits inside a linear space, so cancellation
//! (`z + x = z + y ⇒ x = y`) holds by construction.

use num::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{null_space, rref, Matrix, QVec};
use crate::lp::{LpOutcome, LpProblem, Relation, Sense};
use crate::rational::{q, Q};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ConeKind {
    Full,
    /// `{x : A x >= 0}`.
    Polyhedral(Matrix),
    Orthant,
    /// `{x >= 0 : x_0 > 0} ∪ {0}`.
    StrictFirstOrthant,
}

impl ConeKind {
    pub fn name(&self) -> &'static str {
        match self {
            ConeKind::Full => "full",
            ConeKind::Polyhedral(_) => "polyhedral",
            ConeKind::Orthant => "orthant",
            ConeKind::StrictFirstOrthant => "strict_first_orthant",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConeSpace {
    dim: usize,
    kind: ConeKind,
}

impl ConeSpace {
    pub fn new(dim: usize, kind: ConeKind) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Invalid("cone dimension must be positive".into()));
        }
        if let ConeKind::Polyhedral(a) = &kind {
            if a.ncols() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: a.ncols(),
                });
            }
        }
        Ok(ConeSpace { dim, kind })
    }

    pub fn full(dim: usize) -> Self {
        ConeSpace::new(dim, ConeKind::Full).expect("positive dimension")
    }

    pub fn orthant(dim: usize) -> Self {
        ConeSpace::new(dim, ConeKind::Orthant).expect("positive dimension")
    }

    pub fn strict_first_orthant(dim: usize) -> Self {
        ConeSpace::new(dim, ConeKind::StrictFirstOrthant).expect("positive dimension")
    }

    pub fn polyhedral(a: Matrix) -> Self {
        let dim = a.ncols();
        ConeSpace::new(dim, ConeKind::Polyhedral(a)).expect("matrix defines the dimension")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> &ConeKind {
        &self.kind
    }

    pub fn is_strict(&self) -> bool {
        matches!(self.kind, ConeKind::StrictFirstOrthant)
    }

    pub fn member(&self, v: &QVec) -> Result<bool> {
        v.check_dim(self.dim)?;
        Ok(match &self.kind {
            ConeKind::Full => true,
            ConeKind::Polyhedral(a) => a.rows().iter().all(|r| !r.dot(v).is_negative()),
            ConeKind::Orthant => v.coords().iter().all(|c| !c.is_negative()),
            ConeKind::StrictFirstOrthant => {
                v.is_zero()
                    || (v[0].is_positive() && v.coords().iter().all(|c| !c.is_negative()))
            }
        })
    }

    pub fn require_member(&self, v: &QVec, what: &str) -> Result<()> {
        if self.member(v)? {
            Ok(())
        } else {
            Err(Error::NotMember {
                what: format!("{what} {v}"),
            })
        }
    }

    /// Rows `a` with closure = `{x : a·x >= 0 for all rows}`.
    pub fn closure_rows(&self) -> Vec<QVec> {
        match &self.kind {
            ConeKind::Full => Vec::new(),
            ConeKind::Polyhedral(a) => a.rows().to_vec(),
            ConeKind::Orthant | ConeKind::StrictFirstOrthant => {
                (0..self.dim).map(|i| QVec::unit(self.dim, i)).collect()
            }
        }
    }

    pub fn lineality(&self) -> Subspace {
        match &self.kind {
            ConeKind::Full => Subspace::whole(self.dim),
            ConeKind::Polyhedral(a) => Subspace::span(self.dim, &a.null_space()),
            ConeKind::Orthant | ConeKind::StrictFirstOrthant => Subspace::trivial(self.dim),
        }
    }

    /// Exact test of `other ⊆ self`.
    pub fn contains_cone(&self, other: &ConeSpace) -> Result<bool> {
        if other.dim != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let n = self.dim;
        // Every closed constraint of `self` must hold on the closure of `other`.
        for row in self.closure_rows() {
            let mut lp = LpProblem::new(n, Sense::Minimize);
            lp.set_objective(row.coords().to_vec());
            for r in other.closure_rows() {
                lp.constrain(r.into_coords(), Relation::Ge, Q::zero());
            }
            for i in 0..n {
                lp.set_bounds(i, Some(q(-1)), Some(q(1)));
            }
            if let LpOutcome::Optimal { value, .. } = lp.solve()? {
                if value.is_negative() {
                    return Ok(false);
                }
            }
        }
        if self.is_strict() && !other.is_strict() {
            // `other` may not touch the face x_0 = 0 away from the origin.
            for i in 0..n {
                let mut lp = LpProblem::new(n, Sense::Maximize);
                lp.set_objective(QVec::unit(n, i).into_coords());
                for r in other.closure_rows() {
                    lp.constrain(r.into_coords(), Relation::Ge, Q::zero());
                }
                lp.constrain(QVec::unit(n, 0).into_coords(), Relation::Eq, Q::zero());
                for j in 0..n {
                    lp.set_bounds(j, Some(q(-1)), Some(q(1)));
                }
                if let LpOutcome::Optimal { value, .. } = lp.solve()? {
                    if value.is_positive() {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

/// A linear subspace of `Q^n`, stored as the reduced row echelon basis.
///
/// The pivot columns of that basis fix a complement: the coordinate axes of
/// the non-pivot columns. Killing the pivot coordinates gives the canonical
/// coset representative.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<QVec>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn span(ambient: usize, vectors: &[QVec]) -> Self {
        let (basis, pivots) = rref(ambient, vectors);
        Subspace {
            ambient,
            basis,
            pivots,
        }
    }

    pub fn trivial(ambient: usize) -> Self {
        Subspace::span(ambient, &[])
    }

    pub fn whole(ambient: usize) -> Self {
        let units: Vec<QVec> = (0..ambient).map(|i| QVec::unit(ambient, i)).collect();
        Subspace::span(ambient, &units)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[QVec] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Coordinates indexing the quotient `Q^n / self`.
    pub fn free_coords(&self) -> Vec<usize> {
        (0..self.ambient)
            .filter(|c| !self.pivots.contains(c))
            .collect()
    }

    pub fn contains(&self, v: &QVec) -> Result<bool> {
        v.check_dim(self.ambient)?;
        Ok(self.canonical_rep(v).is_zero())
    }

    pub fn contains_subspace(&self, other: &Subspace) -> Result<bool> {
        for b in other.basis() {
            if !self.contains(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        let mut eqs = self.equations();
        eqs.extend(other.equations());
        Subspace::span(self.ambient, &null_space(self.ambient, &eqs))
    }

    /// Rows whose common kernel is this subspace.
    pub fn equations(&self) -> Vec<QVec> {
        null_space(self.ambient, &self.basis)
    }

    /// The representative of `v + self` with zero pivot coordinates.
    pub fn canonical_rep(&self, v: &QVec) -> QVec {
        let mut r = v.clone();
        for (b, &p) in self.basis.iter().zip(&self.pivots) {
            let c = r[p].clone();
            if !c.is_zero() {
                r = &r - &b.scale(&c);
            }
        }
        r
    }

    /// Non-pivot coordinates of the canonical representative.
    pub fn class_coords(&self, v: &QVec) -> QVec {
        let r = self.canonical_rep(v);
        QVec::new(self.free_coords().iter().map(|&i| r[i].clone()).collect())
    }

    /// Inverse of [`Self::class_coords`] on canonical representatives.
    pub fn lift(&self, coords: &QVec) -> Result<QVec> {
        let free = self.free_coords();
        coords.check_dim(free.len())?;
        let mut v = QVec::zeros(self.ambient).into_coords();
        for (k, &i) in free.iter().enumerate() {
            v[i] = coords[k].clone();
        }
        Ok(QVec::new(v))
    }

    /// Matrix of `x ↦ class_coords(x)`, of shape `(n - dim) × n`.
    pub fn class_coords_matrix(&self) -> Matrix {
        let cols: Vec<QVec> = (0..self.ambient)
            .map(|j| self.class_coords(&QVec::unit(self.ambient, j)))
            .collect();
        Matrix::from_columns(self.ambient - self.dim(), &cols)
    }

    /// Matrix of [`Self::lift`], of shape `n × (n - dim)`.
    pub fn lift_matrix(&self) -> Matrix {
        let free = self.free_coords();
        let cols: Vec<QVec> = free.iter().map(|&i| QVec::unit(self.ambient, i)).collect();
        Matrix::from_columns(self.ambient, &cols)
    }
}
