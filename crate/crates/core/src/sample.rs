//! Seeded random instances for property checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use num::Zero;

use crate::cone::{ConeKind, ConeSpace, Subspace};
use crate::linalg::{Matrix, QVec};
use crate::operators::{LinMap, NormedCone};
use crate::polyhedra::closure_generators;
use crate::qnorm::{validate_qnorm, PLQuasiNorm};
use crate::quotient::{QuotientOptions, QuotientSpace};
use crate::rational::{q, Q};

const MAX_TRIES: usize = 10_000;

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn coin(&mut self) -> bool {
        self.rng.gen_bool(0.5)
    }

    /// `n / d` with `d ∈ 1..=3` and `|n / d| <= bound`.
    pub fn rational(&mut self, bound: i64) -> Q {
        let d = self.int(1, 3);
        Q::new(self.int(-bound * d, bound * d).into(), d.into())
    }

    pub fn nonneg_rational(&mut self, bound: i64) -> Q {
        let d = self.int(1, 3);
        Q::new(self.int(0, bound * d).into(), d.into())
    }

    pub fn positive_rational(&mut self, bound: i64) -> Q {
        let d = self.int(1, 3);
        Q::new(self.int(1, bound * d).into(), d.into())
    }

    pub fn vector(&mut self, dim: usize, bound: i64) -> QVec {
        QVec::new((0..dim).map(|_| self.rational(bound)).collect())
    }

    fn int_vector(&mut self, dim: usize, bound: i64) -> QVec {
        QVec::new((0..dim).map(|_| q(self.int(-bound, bound))).collect())
    }

    pub fn matrix(&mut self, nrows: usize, ncols: usize, bound: i64) -> Matrix {
        let rows = (0..nrows).map(|_| self.int_vector(ncols, bound)).collect();
        Matrix::from_rows(ncols, rows).expect("rows have ncols entries")
    }

    /// Full space or orthant.
    pub fn coordinate_cone(&mut self, dim: usize) -> ConeSpace {
        if self.coin() {
            ConeSpace::full(dim)
        } else {
            ConeSpace::orthant(dim)
        }
    }

    /// Any supported family; polyhedral cones have a nonzero closure.
    pub fn cone(&mut self, dim: usize) -> ConeSpace {
        match self.int(0, 4) {
            0 => ConeSpace::full(dim),
            1 => ConeSpace::orthant(dim),
            2 => ConeSpace::strict_first_orthant(dim),
            _ => loop {
                let k = self.int(1, dim as i64 + 1) as usize;
                let a = self.matrix(k, dim, 2);
                let c = ConeSpace::polyhedral(a);
                if !closure_generators(&c).all_directions().is_empty() {
                    break c;
                }
            },
        }
    }

    /// Integer rows and weights in `0..=2`.
    pub fn norm(&mut self, dim: usize) -> PLQuasiNorm {
        let k = self.int(dim as i64, dim as i64 + 1) as usize;
        let m = self.matrix(k, dim, 2);
        let wp = (0..k).map(|_| q(self.int(0, 2))).collect();
        let wm = (0..k).map(|_| q(self.int(0, 2))).collect();
        PLQuasiNorm::new(m, wp, wm).expect("nonnegative weights")
    }

    /// A norm that is a quasi-norm on `cone`.
    pub fn valid_norm(&mut self, cone: &ConeSpace) -> PLQuasiNorm {
        for _ in 0..MAX_TRIES {
            let p = self.norm(cone.dim());
            if validate_qnorm(&p, cone).expect("same dimension") {
                return p;
            }
        }
        PLQuasiNorm::l1(cone.dim())
    }

    pub fn member(&mut self, cone: &ConeSpace) -> QVec {
        let n = cone.dim();
        let gens = closure_generators(cone);
        let mut x = QVec::zeros(n);
        for r in &gens.rays {
            x = &x + &r.scale(&self.nonneg_rational(3));
        }
        for l in &gens.lineality {
            x = &x + &l.scale(&self.rational(3));
        }
        if cone.is_strict() && x[0].is_zero() && !x.is_zero() {
            x = &x + &QVec::unit(n, 0);
        }
        debug_assert!(cone.member(&x).unwrap());
        x
    }

    pub fn subspace_member(&mut self, g: &Subspace) -> QVec {
        let mut x = QVec::zeros(g.ambient_dim());
        for b in g.basis() {
            x = &x + &b.scale(&self.rational(3));
        }
        x
    }

    /// A polyhedral subcone of `cone` (or the cone itself).
    pub fn subcone(&mut self, cone: &ConeSpace) -> ConeSpace {
        let n = cone.dim();
        if cone.is_strict() {
            if self.coin() {
                return cone.clone();
            }
            // x >= 0 and x_0 >= x_i keeps away from the face x_0 = 0
            let mut rows: Vec<QVec> = (0..n).map(|i| QVec::unit(n, i)).collect();
            for i in 1..n {
                rows.push(&QVec::unit(n, 0) - &QVec::unit(n, i));
            }
            return ConeSpace::polyhedral(Matrix::from_rows(n, rows).expect("dimension n"));
        }
        let mut rows = cone.closure_rows();
        for _ in 0..self.int(0, n as i64) {
            rows.push(self.int_vector(n, 2));
        }
        if self.coin() {
            // cut down the lineality with a random equation
            let e = self.int_vector(n, 1);
            rows.push(e.clone());
            rows.push(-&e);
        }
        if rows.is_empty() {
            return ConeSpace::new(n, ConeKind::Full).expect("positive dimension");
        }
        ConeSpace::polyhedral(Matrix::from_rows(n, rows).expect("dimension n"))
    }

    /// Any quotient, allowing a non-closed `G`.
    pub fn quotient(&mut self, max_dim: usize) -> QuotientSpace {
        let n = self.int(1, max_dim as i64) as usize;
        let x = self.cone(n);
        let p = self.valid_norm(&x);
        let y = self.subcone(&x);
        QuotientSpace::build_with(
            x,
            p,
            y,
            QuotientOptions {
                allow_prenorm: true,
            },
        )
        .expect("sampled subcones lie in the cone")
    }

    /// A quotient whose `G` is certified closed.
    pub fn closed_quotient(&mut self, max_dim: usize) -> QuotientSpace {
        for _ in 0..MAX_TRIES {
            let qs = self.quotient(max_dim);
            if qs.certificate().is_closed() {
                return QuotientSpace::build(qs.space().clone(), qs.norm().clone(), qs.subcone().clone())
                    .expect("valid norm and subcone");
            }
        }
        panic!("no closed quotient found")
    }

    pub fn normed_cone(&mut self, dim: usize) -> NormedCone {
        let space = self.cone(dim);
        let norm = self.valid_norm(&space);
        NormedCone::new(space, norm).expect("same dimension")
    }

    pub fn coordinate_normed_cone(&mut self, dim: usize) -> NormedCone {
        let space = self.coordinate_cone(dim);
        let norm = self.valid_norm(&space);
        NormedCone::new(space, norm).expect("same dimension")
    }

    /// A random map between the given cones, redrawn until it respects
    /// them; falls back to the zero map. Orthant targets get nonnegative
    /// matrices.
    pub fn map(&mut self, source: &NormedCone, target: &NormedCone) -> LinMap {
        let (m, n) = (target.dim(), source.dim());
        for _ in 0..100 {
            let mut a = self.matrix(m, n, 2);
            if self.int(0, 3) == 0 || matches!(target.space.kind(), ConeKind::Orthant) {
                let rows = a
                    .rows()
                    .iter()
                    .map(|r| QVec::new(r.coords().iter().map(|c| c * c).collect()))
                    .collect();
                a = Matrix::from_rows(n, rows).expect("dimension n");
            }
            if let Ok(f) = LinMap::new(a, source.clone(), target.clone()) {
                return f;
            }
        }
        LinMap::new(Matrix::zeros(m, n), source.clone(), target.clone()).expect("zero map")
    }

    /// A continuous map, or `None` when the draws kept producing unbounded
    /// ones.
    pub fn continuous_map(&mut self, source: &NormedCone, target: &NormedCone) -> Option<LinMap> {
        for _ in 0..50 {
            let f = self.map(source, target);
            if f.is_continuous().expect("supported sizes") {
                return Some(f);
            }
        }
        None
    }
}
