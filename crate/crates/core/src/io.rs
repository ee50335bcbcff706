//! JSON documents for cones, quasi-norms, quotients and maps.
//!
//! Rationals are written as strings (`"3/4"`, `"0.5"`, `"-2"`); bare JSON
//! integers are accepted on input.
//!
//! ```json
//! {"dim": 2, "kind": "polyhedral", "A": [[0, 1]]}
//! {"M": [[1, 0], [0, 1]], "wplus": [1, 1], "wminus": [0, 0]}
//! ```

use serde::{Deserialize, Serialize};

use crate::cone::{ConeKind, ConeSpace};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, QVec};
use crate::operators::{LinMap, NormedCone};
use crate::qnorm::PLQuasiNorm;
use crate::quotient::{QuotientOptions, QuotientSpace};
use crate::rational::serde_q::Wire;

type Rows = Vec<Vec<Wire>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeDoc {
    pub dim: usize,
    pub kind: String,
    #[serde(rename = "A", default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Rows>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormDoc {
    /// Defaults to the identity.
    #[serde(rename = "M", default, skip_serializing_if = "Option::is_none")]
    pub m: Option<Rows>,
    pub wplus: Vec<Wire>,
    pub wminus: Vec<Wire>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuotientDoc {
    pub space: ConeDoc,
    pub p: NormDoc,
    pub subcone: ConeDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormedConeDoc {
    pub space: ConeDoc,
    pub norm: NormDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDoc {
    pub matrix: Rows,
    pub source: NormedConeDoc,
    pub target: NormedConeDoc,
}

fn rows_to_matrix(ncols: usize, rows: &Rows) -> Result<Matrix> {
    let rows = rows
        .iter()
        .map(|r| QVec::new(r.iter().map(|w| w.0.clone()).collect()))
        .collect();
    Matrix::from_rows(ncols, rows)
}

fn matrix_to_rows(m: &Matrix) -> Rows {
    m.rows()
        .iter()
        .map(|r| r.coords().iter().cloned().map(Wire).collect())
        .collect()
}

fn unwire(v: &[Wire]) -> Vec<crate::rational::Q> {
    v.iter().map(|w| w.0.clone()).collect()
}

impl ConeDoc {
    pub fn to_cone(&self) -> Result<ConeSpace> {
        let kind = match (self.kind.as_str(), &self.a) {
            ("full", None) => ConeKind::Full,
            ("orthant", None) => ConeKind::Orthant,
            ("strict_first_orthant", None) => ConeKind::StrictFirstOrthant,
            ("polyhedral", Some(a)) => ConeKind::Polyhedral(rows_to_matrix(self.dim, a)?),
            ("polyhedral", None) => {
                return Err(Error::Parse("polyhedral cone needs a matrix \"A\"".into()))
            }
            ("full" | "orthant" | "strict_first_orthant", Some(_)) => {
                return Err(Error::Parse(format!("cone kind {:?} takes no matrix", self.kind)))
            }
            (other, _) => {
                return Err(Error::Parse(format!(
                    "unknown cone kind {other:?}; expected full, orthant, \
                     strict_first_orthant or polyhedral"
                )))
            }
        };
        ConeSpace::new(self.dim, kind)
    }

    pub fn from_cone(c: &ConeSpace) -> Self {
        ConeDoc {
            dim: c.dim(),
            kind: c.kind().name().into(),
            a: match c.kind() {
                ConeKind::Polyhedral(a) => Some(matrix_to_rows(a)),
                _ => None,
            },
        }
    }
}

impl NormDoc {
    /// `dim` is the ambient dimension, needed when `M` is omitted.
    pub fn to_norm(&self, dim: usize) -> Result<PLQuasiNorm> {
        let m = match &self.m {
            Some(rows) => rows_to_matrix(dim, rows)?,
            None => Matrix::identity(dim),
        };
        PLQuasiNorm::new(m, unwire(&self.wplus), unwire(&self.wminus))
    }

    pub fn from_norm(p: &PLQuasiNorm) -> Self {
        NormDoc {
            m: Some(matrix_to_rows(p.matrix())),
            wplus: p.wplus().iter().cloned().map(Wire).collect(),
            wminus: p.wminus().iter().cloned().map(Wire).collect(),
        }
    }
}

impl NormedConeDoc {
    pub fn to_normed_cone(&self) -> Result<NormedCone> {
        let space = self.space.to_cone()?;
        let norm = self.norm.to_norm(space.dim())?;
        NormedCone::new(space, norm)
    }

    pub fn from_normed_cone(nc: &NormedCone) -> Self {
        NormedConeDoc {
            space: ConeDoc::from_cone(&nc.space),
            norm: NormDoc::from_norm(&nc.norm),
        }
    }
}

impl QuotientDoc {
    pub fn to_quotient(&self, options: QuotientOptions) -> Result<QuotientSpace> {
        let space = self.space.to_cone()?;
        let p = self.p.to_norm(space.dim())?;
        let subcone = self.subcone.to_cone()?;
        QuotientSpace::build_with(space, p, subcone, options)
    }

    pub fn from_quotient(qs: &QuotientSpace) -> Self {
        QuotientDoc {
            space: ConeDoc::from_cone(qs.space()),
            p: NormDoc::from_norm(qs.norm()),
            subcone: ConeDoc::from_cone(qs.subcone()),
        }
    }
}

impl MapDoc {
    pub fn to_map(&self) -> Result<LinMap> {
        let source = self.source.to_normed_cone()?;
        let target = self.target.to_normed_cone()?;
        let matrix = rows_to_matrix(source.dim(), &self.matrix)?;
        LinMap::new(matrix, source, target)
    }

    pub fn from_map(f: &LinMap) -> Self {
        MapDoc {
            matrix: matrix_to_rows(f.matrix()),
            source: NormedConeDoc::from_normed_cone(f.source()),
            target: NormedConeDoc::from_normed_cone(f.target()),
        }
    }
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

pub fn parse_cone(text: &str) -> Result<ConeSpace> {
    parse_json::<ConeDoc>(text, "cone")?.to_cone()
}

pub fn parse_norm(text: &str, dim: usize) -> Result<PLQuasiNorm> {
    parse_json::<NormDoc>(text, "quasi-norm")?.to_norm(dim)
}

pub fn parse_quotient(text: &str, options: QuotientOptions) -> Result<QuotientSpace> {
    parse_json::<QuotientDoc>(text, "quotient description")?.to_quotient(options)
}

pub fn parse_map(text: &str) -> Result<LinMap> {
    parse_json::<MapDoc>(text, "map")?.to_map()
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    serde_json::to_string_pretty(doc).expect("documents serialize")
}
