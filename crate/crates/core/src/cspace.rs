//! A truncated dual complexity space: nonnegative cost sequences
//! `f(0), …, f(N-1)` with the weighted norm `Σ 2^-n f(n)`.
//!
//! Past index `N - 1` every sequence is taken to be zero, so the weighted
//! sum is always finite.

use std::fmt;

use num::{Signed, Zero};

use crate::cone::ConeSpace;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, QVec};
use crate::operators::{LinMap, NormedCone};
use crate::qnorm::{ExtReal, PLQuasiNorm};
use crate::rational::{format_q, parse_q, pos, q, Q};

pub const DEFAULT_TRUNCATION: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ComplexityFunction {
    values: Vec<Q>,
}

impl ComplexityFunction {
    pub fn new(values: Vec<Q>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Invalid("truncation length must be positive".into()));
        }
        if let Some(i) = values.iter().position(Signed::is_negative) {
            return Err(Error::Invalid(format!("negative cost at index {i}")));
        }
        Ok(ComplexityFunction { values })
    }

    pub fn zero(n: usize) -> Self {
        ComplexityFunction {
            values: vec![Q::zero(); n.max(1)],
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Q] {
        &self.values
    }

    pub fn to_qvec(&self) -> QVec {
        QVec::new(self.values.clone())
    }

    pub fn from_qvec(v: &QVec) -> Result<Self> {
        Self::new(v.coords().to_vec())
    }
}

impl fmt::Display for ComplexityFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_qvec())
    }
}

/// `2^-n` for `n < len`.
pub fn weights(len: usize) -> Vec<Q> {
    let mut w = Vec::with_capacity(len);
    let mut cur = q(1);
    for _ in 0..len {
        w.push(cur.clone());
        cur /= q(2);
    }
    w
}

fn same_len(f: &ComplexityFunction, g: &ComplexityFunction) -> Result<()> {
    if f.len() != g.len() {
        return Err(Error::DimensionMismatch {
            expected: f.len(),
            found: g.len(),
        });
    }
    Ok(())
}

pub fn cstar_norm(f: &ComplexityFunction) -> Q {
    weights(f.len())
        .iter()
        .zip(&f.values)
        .map(|(w, v)| w * v)
        .sum()
}

/// `Σ 2^-n (g(n) - f(n)) ∨ 0`.
pub fn cstar_qmetric(f: &ComplexityFunction, g: &ComplexityFunction) -> Result<Q> {
    same_len(f, g)?;
    Ok(weights(f.len())
        .iter()
        .zip(f.values.iter().zip(&g.values))
        .map(|(w, (a, b))| w * pos(&(b - a)))
        .sum())
}

/// `Σ 2^-n (g(n) - f(n))` when `f <= g` pointwise, `+inf` otherwise.
pub fn cstar_ep(f: &ComplexityFunction, g: &ComplexityFunction) -> Result<ExtReal> {
    same_len(f, g)?;
    if f.values.iter().zip(&g.values).any(|(a, b)| a > b) {
        return Ok(ExtReal::Infinity);
    }
    Ok(ExtReal::Finite(cstar_qmetric(f, g)?))
}

/// The weighted norm as a piecewise-linear quasi-norm on the orthant.
pub fn cstar_as_plnorm(len: usize) -> PLQuasiNorm {
    PLQuasiNorm::diagonal(weights(len), vec![Q::zero(); len]).expect("nonnegative weights")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ingested {
    pub function: ComplexityFunction,
    /// Indices below the truncation length with no row; filled with zero.
    pub missing: Vec<usize>,
}

/// Builds a cost function from `(index, cost)` rows.
pub fn ingest_series(rows: &[(usize, Q)], len: usize) -> Result<Ingested> {
    if len == 0 {
        return Err(Error::Invalid("truncation length must be positive".into()));
    }
    let mut values: Vec<Option<Q>> = vec![None; len];
    for (i, c) in rows {
        if *i >= len {
            return Err(Error::Invalid(format!(
                "index {i} is outside the truncation length {len}"
            )));
        }
        if c.is_negative() {
            return Err(Error::Invalid(format!(
                "negative cost {} at index {i}",
                format_q(c)
            )));
        }
        if values[*i].is_some() {
            return Err(Error::Invalid(format!("duplicate index {i}")));
        }
        values[*i] = Some(c.clone());
    }
    let missing = (0..len).filter(|&i| values[i].is_none()).collect();
    let values = values.into_iter().map(Option::unwrap_or_default).collect();
    Ok(Ingested {
        function: ComplexityFunction { values },
        missing,
    })
}

/// Parses `index,cost` lines after a header line. Blank lines are skipped.
pub fn parse_series_csv(text: &str) -> Result<Vec<(usize, Q)>> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let Some((_, header)) = lines.next() else {
        return Err(Error::Parse("empty series: expected an \"index,cost\" header".into()));
    };
    let cols: Vec<String> = header.split(',').map(|c| c.trim().to_lowercase()).collect();
    if cols != ["index", "cost"] {
        return Err(Error::Parse(format!(
            "expected header \"index,cost\", found {header:?}"
        )));
    }
    lines
        .map(|(lineno, l)| {
            let (i, c) = l
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("line {lineno}: expected \"index,cost\"")))?;
            let i = i
                .trim()
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("line {lineno}: bad index {:?}", i.trim())))?;
            let c = parse_q(c).map_err(|e| Error::Parse(format!("line {lineno}: {e}")))?;
            Ok((i, c))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// `b <= a` pointwise and `b != a`.
    BImprovesOnA,
    AImprovesOnB,
    Equivalent,
    Incomparable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::BImprovesOnA => "b improves on a",
            Verdict::AImprovesOnB => "a improves on b",
            Verdict::Equivalent => "equivalent",
            Verdict::Incomparable => "incomparable",
        })
    }
}

pub const VERDICT_CONVENTION: &str = "verdict convention (ours): b improves on a when b <= a \
     pointwise and b != a, i.e. e(b,a) is finite and d(a,b) = 0";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompareReport {
    pub d_ab: Q,
    pub d_ba: Q,
    pub e_ab: ExtReal,
    pub e_ba: ExtReal,
    pub verdict: Verdict,
}

impl fmt::Display for CompareReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "d(a,b) = {}", format_q(&self.d_ab))?;
        writeln!(f, "d(b,a) = {}", format_q(&self.d_ba))?;
        writeln!(f, "e(a,b) = {}", self.e_ab)?;
        writeln!(f, "e(b,a) = {}", self.e_ba)?;
        writeln!(f, "verdict = {}", self.verdict)?;
        write!(f, "{VERDICT_CONVENTION}")
    }
}

pub fn compare(a: &ComplexityFunction, b: &ComplexityFunction) -> Result<CompareReport> {
    let d_ab = cstar_qmetric(a, b)?;
    let d_ba = cstar_qmetric(b, a)?;
    let e_ab = cstar_ep(a, b)?;
    let e_ba = cstar_ep(b, a)?;
    let verdict = match (e_ab.is_finite(), e_ba.is_finite()) {
        (true, true) => Verdict::Equivalent,
        (false, true) => Verdict::BImprovesOnA,
        (true, false) => Verdict::AImprovesOnB,
        (false, false) => Verdict::Incomparable,
    };
    Ok(CompareReport {
        d_ab,
        d_ba,
        e_ab,
        e_ba,
        verdict,
    })
}

/// `f ↦ (f(0), 0, …, 0)` from the strict first-coordinate orthant with
/// `q(f) = f(0)` into the truncated space with its weighted norm.
pub fn truncated_f(len: usize) -> LinMap {
    let mut wplus = vec![Q::zero(); len];
    wplus[0] = q(1);
    let q_norm = PLQuasiNorm::diagonal(wplus, vec![Q::zero(); len]).expect("nonnegative weights");
    let mut rows = vec![QVec::zeros(len); len];
    rows[0] = QVec::unit(len, 0);
    LinMap::new(
        Matrix::from_rows(len, rows).expect("square"),
        NormedCone::new(ConeSpace::strict_first_orthant(len), q_norm).expect("same dimension"),
        NormedCone::new(ConeSpace::orthant(len), cstar_as_plnorm(len)).expect("same dimension"),
    )
    .expect("maps into the orthant")
}

/// Two distinct members of the source of [`truncated_f`] with equal images.
pub fn truncated_f_collision(len: usize) -> Result<(ComplexityFunction, ComplexityFunction)> {
    if len < 2 {
        return Err(Error::Invalid("needs at least two terms".into()));
    }
    let a = ComplexityFunction::new(QVec::unit(len, 0).into_coords())?;
    let mut b = a.values.clone();
    b[1] = q(1);
    Ok((a, ComplexityFunction::new(b)?))
}
