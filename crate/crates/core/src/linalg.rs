//! Dense exact vectors and matrices with Gaussian elimination over `Q`.

use num::{Signed, Zero};
use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

use crate::error::{Error, Result};
use crate::rational::{format_q, parse_q, q, Q};

/// A point of the ambient rational space.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QVec(Vec<Q>);

impl QVec {
    pub fn new(coords: Vec<Q>) -> Self {
        QVec(coords)
    }

    pub fn zeros(dim: usize) -> Self {
        QVec(vec![Q::zero(); dim])
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        QVec(coords.iter().map(|&c| q(c)).collect())
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[i] = q(1);
        v
    }

    /// Parses comma-separated rationals, e.g. `2,-1/3,0.5`.
    pub fn parse_csv(text: &str) -> Result<Self> {
        let coords = text
            .split(',')
            .map(parse_q)
            .collect::<Result<Vec<_>>>()?;
        Ok(QVec(coords))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Q] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Q> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &QVec) -> Q {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn scale(&self, r: &Q) -> QVec {
        QVec(self.0.iter().map(|c| c * r).collect())
    }

    pub fn check_dim(&self, expected: usize) -> Result<()> {
        if self.dim() == expected {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected,
                found: self.dim(),
            })
        }
    }

    /// Positive multiple with largest absolute coordinate equal to one.
    pub fn normalized(&self) -> QVec {
        let m = self.0.iter().map(|c| c.abs()).max().unwrap_or_else(Q::zero);
        if m.is_zero() {
            self.clone()
        } else {
            self.scale(&(Q::from_integer(1.into()) / m))
        }
    }

    pub fn concat(&self, other: &QVec) -> QVec {
        let mut c = self.0.clone();
        c.extend(other.0.iter().cloned());
        QVec(c)
    }
}

impl Index<usize> for QVec {
    type Output = Q;
    fn index(&self, i: usize) -> &Q {
        &self.0[i]
    }
}

impl Add for &QVec {
    type Output = QVec;
    fn add(self, rhs: &QVec) -> QVec {
        assert_eq!(self.dim(), rhs.dim(), "vector dimensions differ");
        QVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &QVec {
    type Output = QVec;
    fn sub(self, rhs: &QVec) -> QVec {
        assert_eq!(self.dim(), rhs.dim(), "vector dimensions differ");
        QVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &QVec {
    type Output = QVec;
    fn neg(self) -> QVec {
        QVec(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for QVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", format_q(c))?;
        }
        write!(f, ")")
    }
}

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    ncols: usize,
    rows: Vec<QVec>,
}

impl Matrix {
    pub fn from_rows(ncols: usize, rows: Vec<QVec>) -> Result<Self> {
        for r in &rows {
            r.check_dim(ncols)?;
        }
        Ok(Matrix { ncols, rows })
    }

    pub fn from_ints(ncols: usize, rows: &[&[i64]]) -> Self {
        Matrix::from_rows(ncols, rows.iter().map(|r| QVec::from_ints(r)).collect())
            .expect("row length must match ncols")
    }

    pub fn identity(n: usize) -> Self {
        Matrix {
            ncols: n,
            rows: (0..n).map(|i| QVec::unit(n, i)).collect(),
        }
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Matrix {
            ncols,
            rows: vec![QVec::zeros(ncols); nrows],
        }
    }

    /// Matrix whose columns are the given vectors, each of length `nrows`.
    pub fn from_columns(nrows: usize, cols: &[QVec]) -> Self {
        let rows = (0..nrows)
            .map(|i| QVec::new(cols.iter().map(|c| c[i].clone()).collect()))
            .collect();
        Matrix {
            ncols: cols.len(),
            rows,
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[QVec] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &QVec {
        &self.rows[i]
    }

    pub fn entry(&self, i: usize, j: usize) -> &Q {
        &self.rows[i][j]
    }

    pub fn column(&self, j: usize) -> QVec {
        QVec::new(self.rows.iter().map(|r| r[j].clone()).collect())
    }

    pub fn apply(&self, x: &QVec) -> Result<QVec> {
        x.check_dim(self.ncols)?;
        Ok(QVec::new(self.rows.iter().map(|r| r.dot(x)).collect()))
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.ncols != other.nrows() {
            return Err(Error::DimensionMismatch {
                expected: self.ncols,
                found: other.nrows(),
            });
        }
        let cols: Vec<QVec> = (0..other.ncols).map(|j| other.column(j)).collect();
        let rows = self
            .rows
            .iter()
            .map(|r| QVec::new(cols.iter().map(|c| r.dot(c)).collect()))
            .collect();
        Ok(Matrix {
            ncols: other.ncols,
            rows,
        })
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_columns(self.ncols, &self.rows)
    }

    /// Stack rows of `other` under `self`.
    pub fn stack(&self, other: &Matrix) -> Result<Matrix> {
        if self.ncols != other.ncols {
            return Err(Error::DimensionMismatch {
                expected: self.ncols,
                found: other.ncols,
            });
        }
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Ok(Matrix {
            ncols: self.ncols,
            rows,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(QVec::is_zero)
    }

    pub fn rank(&self) -> usize {
        rref(self.ncols, &self.rows).1.len()
    }

    pub fn null_space(&self) -> Vec<QVec> {
        null_space(self.ncols, &self.rows)
    }

    /// Some solution of `self · x = b`, if one exists.
    pub fn solve(&self, b: &QVec) -> Result<Option<QVec>> {
        b.check_dim(self.nrows())?;
        Ok(solve(self, b))
    }

    pub fn parse_rows(ncols: usize, rows: &[Vec<String>]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|s| parse_q(s))
                    .collect::<Result<Vec<_>>>()
                    .map(QVec::new)
            })
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_rows(ncols, rows)
    }
}

/// Reduced row echelon form of the given rows. Returns the nonzero rows of
/// the RREF together with their pivot columns (strictly increasing).
pub fn rref(ncols: usize, rows: &[QVec]) -> (Vec<QVec>, Vec<usize>) {
    let mut m: Vec<Vec<Q>> = rows.iter().map(|r| r.coords().to_vec()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Q::from_integer(1.into()) / &m[r][c];
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let factor = m[i][c].clone();
                for j in c..ncols {
                    let delta = &factor * &m[r][j];
                    m[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m.into_iter().map(QVec::new).collect(), pivots)
}

/// Basis of `{x : row · x = 0 for every row}`, one vector per free column,
/// each with a single 1 among the free coordinates.
pub fn null_space(ncols: usize, rows: &[QVec]) -> Vec<QVec> {
    let (r, pivots) = rref(ncols, rows);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); ncols];
            v[f] = q(1);
            for (row, &p) in r.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            QVec::new(v)
        })
        .collect()
}

fn solve(a: &Matrix, b: &QVec) -> Option<QVec> {
    let n = a.ncols();
    let augmented: Vec<QVec> = a
        .rows()
        .iter()
        .zip(b.coords())
        .map(|(r, bi)| r.concat(&QVec::new(vec![bi.clone()])))
        .collect();
    let (r, pivots) = rref(n + 1, &augmented);
    if pivots.last() == Some(&n) {
        return None;
    }
    let mut x = vec![Q::zero(); n];
    for (row, &p) in r.iter().zip(&pivots) {
        x[p] = row[n].clone();
    }
    Some(QVec::new(x))
}
