//! Minkowski–Weyl generators of small polyhedra by exhaustive active-set
//! enumeration, and suprema of sublinear functions over them.
//!
//! Sizes in this crate are desk scale (ambient dimension up to about 6, a
//! few dozen inequalities), where enumerating active sets is exact and
//! fast enough.

use itertools::Itertools;
use num::{Signed, Zero};

use crate::cone::ConeSpace;
use crate::error::Result;
use crate::linalg::{null_space, Matrix, QVec};
use crate::qnorm::{ExtReal, PLQuasiNorm, MAX_PIECES};
use crate::rational::{q, Q};

/// Generators of a polyhedral cone: `cone(rays) + span(lineality)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeGenerators {
    pub lineality: Vec<QVec>,
    pub rays: Vec<QVec>,
}

impl ConeGenerators {
    /// Rays together with both signs of every lineality vector.
    pub fn all_directions(&self) -> Vec<QVec> {
        let mut out = self.rays.clone();
        for l in &self.lineality {
            out.push(l.clone());
            out.push(-l);
        }
        out
    }
}

/// `conv(vertices) + cone(rays) + span(lineality)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyhedronGenerators {
    pub vertices: Vec<QVec>,
    pub recession: ConeGenerators,
}

fn push_unique(list: &mut Vec<QVec>, v: QVec) {
    if !list.contains(&v) {
        list.push(v);
    }
}

fn nonzero_unique(rows: &[QVec]) -> Vec<QVec> {
    let mut out = Vec::new();
    for r in rows.iter().filter(|r| !r.is_zero()) {
        push_unique(&mut out, r.normalized());
    }
    out
}

/// Generators of `{x : a·x <= 0 for a in ineqs, e·x = 0 for e in eqs}`.
pub fn cone_generators(dim: usize, ineqs: &[QVec], eqs: &[QVec]) -> ConeGenerators {
    let ineqs = nonzero_unique(ineqs);
    let mut all = ineqs.clone();
    all.extend(eqs.iter().cloned());
    let lineality = null_space(dim, &all);

    let mut fixed: Vec<QVec> = eqs.to_vec();
    fixed.extend(lineality.iter().cloned());
    let rank = Matrix::from_rows(dim, fixed.clone())
        .expect("rows have the ambient dimension")
        .rank();
    let free = dim - rank;
    let mut rays = Vec::new();
    if free > 0 {
        for subset in ineqs.iter().combinations(free - 1) {
            let mut rows = fixed.clone();
            rows.extend(subset.into_iter().cloned());
            let ns = null_space(dim, &rows);
            if ns.len() != 1 {
                continue;
            }
            let r = &ns[0];
            for cand in [r.clone(), -r] {
                if ineqs.iter().all(|a| !a.dot(&cand).is_positive()) {
                    push_unique(&mut rays, cand.normalized());
                }
            }
        }
    }
    ConeGenerators { lineality, rays }
}

/// Generators of `{x : a·x <= b for (a, b) in ineqs, e·x = 0 for e in eqs}`.
/// An empty polyhedron has no vertices.
pub fn polyhedron_generators(
    dim: usize,
    ineqs: &[(QVec, Q)],
    eqs: &[QVec],
) -> PolyhedronGenerators {
    let mut live: Vec<(QVec, Q)> = Vec::new();
    for (a, b) in ineqs {
        if a.is_zero() {
            if b.is_negative() {
                return PolyhedronGenerators {
                    vertices: Vec::new(),
                    recession: ConeGenerators {
                        lineality: Vec::new(),
                        rays: Vec::new(),
                    },
                };
            }
            continue;
        }
        if !live.iter().any(|(la, lb)| la == a && lb == b) {
            live.push((a.clone(), b.clone()));
        }
    }
    let normals: Vec<QVec> = live.iter().map(|(a, _)| a.clone()).collect();
    let recession = cone_generators(dim, &normals, eqs);

    let mut fixed: Vec<QVec> = eqs.to_vec();
    fixed.extend(recession.lineality.iter().cloned());
    let rank = Matrix::from_rows(dim, fixed.clone())
        .expect("rows have the ambient dimension")
        .rank();
    let free = dim - rank;
    let feasible = |x: &QVec| live.iter().all(|(a, b)| a.dot(x) <= *b);

    let mut vertices = Vec::new();
    for subset in (0..live.len()).combinations(free) {
        let mut rows = fixed.clone();
        let mut rhs = vec![Q::zero(); fixed.len()];
        for &i in &subset {
            rows.push(live[i].0.clone());
            rhs.push(live[i].1.clone());
        }
        let m = Matrix::from_rows(dim, rows).expect("rows have the ambient dimension");
        if m.rank() != dim {
            continue;
        }
        if let Ok(Some(x)) = m.solve(&QVec::new(rhs)) {
            if feasible(&x) {
                push_unique(&mut vertices, x);
            }
        }
    }
    PolyhedronGenerators {
        vertices,
        recession,
    }
}

/// Generators of the closure of `cone`.
pub fn closure_generators(cone: &ConeSpace) -> ConeGenerators {
    let ineqs: Vec<QVec> = cone.closure_rows().iter().map(|a| -a).collect();
    cone_generators(cone.dim(), &ineqs, &[])
}

/// Generators of `{x ∈ cl(X) : p(x) = 0}`.
pub fn zero_set_generators(cone: &ConeSpace, p: &PLQuasiNorm) -> ConeGenerators {
    let mut ineqs: Vec<QVec> = cone.closure_rows().iter().map(|a| -a).collect();
    for t in p.terms() {
        if t.wplus.is_positive() {
            ineqs.push(t.row.clone());
        }
        if t.wminus.is_positive() {
            ineqs.push(-&t.row);
        }
    }
    cone_generators(cone.dim(), &ineqs, &[])
}

/// Generators of the closed unit ball `{x ∈ cl(X) : p(x) <= 1}`.
pub fn unit_ball(cone: &ConeSpace, p: &PLQuasiNorm) -> Result<PolyhedronGenerators> {
    let mut ineqs: Vec<(QVec, Q)> = cone
        .closure_rows()
        .into_iter()
        .map(|a| (-&a, Q::zero()))
        .collect();
    for l in p.pieces(MAX_PIECES)? {
        ineqs.push((l, q(1)));
    }
    Ok(polyhedron_generators(cone.dim(), &ineqs, &[]))
}

/// Supremum over a nonempty polyhedron of a convex, positively homogeneous,
/// nonnegative function `f` that is continuous where finite.
///
/// Such an `f` is unbounded along any recession direction where it is
/// positive; otherwise its supremum is attained at a vertex. Returns the
/// supremum and a maximizing generator (vertex, or direction when infinite).
pub fn sup_sublinear<F>(gens: &PolyhedronGenerators, mut f: F) -> Result<(ExtReal, Option<QVec>)>
where
    F: FnMut(&QVec) -> Result<ExtReal>,
{
    for d in gens.recession.all_directions() {
        let v = f(&d)?;
        if v != ExtReal::zero() {
            return Ok((ExtReal::Infinity, Some(d)));
        }
    }
    let mut best = ExtReal::zero();
    let mut arg = None;
    for v in &gens.vertices {
        let val = f(v)?;
        if arg.is_none() || val > best {
            best = val;
            arg = Some(v.clone());
        }
    }
    Ok((best, arg))
}
