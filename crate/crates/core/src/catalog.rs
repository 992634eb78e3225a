//! File formats: point files, component catalogs and quotient-ring scalars.
//!
//! Rationals are always written as `"p/q"` strings (`"4/1"` for integers).
//! Point files also accept the short forms `"4"` and `"-2/6"`.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::exact::{parse_rational, rational_to_string, Matrix, QuotientScalar, Rational};
use crate::imm::MatTuple;
use crate::jacobian::{jac_components, residuals_vanish};
use crate::quiver::{is_singular_point, maximal_components};
use crate::{Error, Result};

pub const CATALOG_SCHEMA: &str = include_str!("../schema/catalog.schema.json");
pub const POINT_SCHEMA: &str = include_str!("../schema/point.schema.json");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointFile {
    pub n: usize,
    pub q: usize,
    pub blocks: Vec<Vec<Vec<String>>>,
}

impl PointFile {
    pub fn from_point(point: &MatTuple<Rational>) -> Self {
        PointFile { n: point.n(), q: point.q(), blocks: blocks_to_strings(point) }
    }

    pub fn to_point(&self) -> Result<MatTuple<Rational>> {
        if self.n == 0 || self.q == 0 {
            return Err(Error::Parse("n and q must be positive".into()));
        }
        if self.blocks.len() != self.n {
            return Err(Error::Parse(format!("blocks: expected {} blocks, found {}", self.n, self.blocks.len())));
        }
        let mut out = Vec::with_capacity(self.n);
        for (a, block) in self.blocks.iter().enumerate() {
            if block.len() != self.q {
                return Err(Error::Parse(format!("blocks[{a}]: expected {} rows, found {}", self.q, block.len())));
            }
            let mut rows = Vec::with_capacity(self.q);
            for (i, row) in block.iter().enumerate() {
                if row.len() != self.q {
                    return Err(Error::Parse(format!(
                        "blocks[{a}][{i}]: expected {} entries, found {}",
                        self.q,
                        row.len()
                    )));
                }
                let parsed = row
                    .iter()
                    .enumerate()
                    .map(|(j, s)| {
                        parse_rational(s).map_err(|_| Error::Parse(format!("blocks[{a}][{i}][{j}]: bad rational {s:?}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                rows.push(parsed);
            }
            out.push(Matrix::from_rows(rows)?);
        }
        MatTuple::new(out)
    }
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Parse(format!("line {} column {}: {e}", e.line(), e.column()))
}

/// Parses a point file, reporting the JSON position or the offending field.
pub fn parse_point_file(text: &str) -> Result<MatTuple<Rational>> {
    let value: Value = serde_json::from_str(text).map_err(json_error)?;
    let obj = value.as_object().ok_or_else(|| Error::Parse("top level must be an object".into()))?;
    let field = |name: &str| obj.get(name).ok_or_else(|| Error::Parse(format!("missing field {name:?}")));
    let size = |name: &str| -> Result<usize> {
        field(name)?
            .as_u64()
            .map(|v| v as usize)
            .ok_or_else(|| Error::Parse(format!("field {name:?} must be a nonnegative integer")))
    };
    let (n, q) = (size("n")?, size("q")?);
    let blocks = field("blocks")?
        .as_array()
        .ok_or_else(|| Error::Parse("field \"blocks\" must be an array".into()))?
        .iter()
        .enumerate()
        .map(|(a, block)| {
            block
                .as_array()
                .ok_or_else(|| Error::Parse(format!("blocks[{a}] must be an array")))?
                .iter()
                .enumerate()
                .map(|(i, row)| {
                    row.as_array()
                        .ok_or_else(|| Error::Parse(format!("blocks[{a}][{i}] must be an array")))?
                        .iter()
                        .enumerate()
                        .map(|(j, entry)| {
                            entry.as_str().map(str::to_owned).ok_or_else(|| {
                                Error::Parse(format!("blocks[{a}][{i}][{j}] must be a string like \"p/q\""))
                            })
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    PointFile { n, q, blocks }.to_point()
}

pub fn write_point_file(point: &MatTuple<Rational>) -> String {
    serde_json::to_string_pretty(&PointFile::from_point(point)).expect("serializable")
}

pub fn blocks_to_strings(point: &MatTuple<Rational>) -> Vec<Vec<Vec<String>>> {
    point
        .blocks()
        .iter()
        .map(|b| b.to_rows().iter().map(|row| row.iter().map(rational_to_string).collect()).collect())
        .collect()
}

/// Quotient-ring scalar with its modulus `t^n + (q - 1)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuotientRecord {
    pub modulus: ModulusRecord,
    /// Ascending powers of `w`.
    pub coefficients: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModulusRecord {
    pub n: usize,
    pub q: u64,
}

impl QuotientRecord {
    pub fn from_scalar(x: &QuotientScalar) -> Self {
        let m = x.modulus();
        QuotientRecord {
            modulus: ModulusRecord { n: m.n, q: m.q },
            coefficients: x.coeffs().iter().map(rational_to_string).collect(),
        }
    }

    pub fn to_scalar(&self) -> Result<QuotientScalar> {
        let m = crate::exact::Modulus::new(self.modulus.n, self.modulus.q)?;
        let coeffs = self
            .coefficients
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()?;
        Ok(QuotientScalar::from_coeffs(m, coeffs))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub command: String,
    pub n: usize,
    pub q: usize,
    pub seed: u64,
    pub trials: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ComponentKind {
    Sing,
    Jacobian,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summand {
    pub start: usize,
    pub end: usize,
    pub multiplicity: usize,
}

/// Data identifying a component: a decomposition with its rank matrix, or a
/// Jacobian-locus label.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DefiningData {
    Sing { summands: Vec<Summand>, rank_matrix: Vec<Vec<usize>> },
    Jacobian { alpha: usize, r: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentRecord {
    pub kind: ComponentKind,
    pub label: String,
    pub data: DefiningData,
    pub dim: usize,
    pub dim_oracle: Option<usize>,
    pub representative: Vec<Vec<Vec<String>>>,
}

impl ComponentRecord {
    pub fn representative_point(&self) -> Result<MatTuple<Rational>> {
        let n = self.representative.len();
        let q = self.representative.first().map_or(0, Vec::len);
        PointFile { n, q, blocks: self.representative.clone() }.to_point()
    }

    /// Membership of the stored representative in its locus, re-checked exactly.
    pub fn verify_membership(&self) -> Result<bool> {
        let point = self.representative_point()?;
        Ok(match self.kind {
            ComponentKind::Sing => is_singular_point(&point),
            ComponentKind::Jacobian => residuals_vanish(&point),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatalogDocument {
    pub tool: String,
    pub version: String,
    pub config: ConfigEcho,
    /// Largest component dimension.
    pub locus_dim: Option<usize>,
    pub components: Vec<ComponentRecord>,
}

impl CatalogDocument {
    fn new(config: ConfigEcho, components: Vec<ComponentRecord>) -> Self {
        CatalogDocument {
            tool: "imm".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            locus_dim: components.iter().map(|c| c.dim).max(),
            config,
            components,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(json_error)
    }

    /// Components whose formula and oracle dimensions disagree.
    pub fn mismatches(&self) -> Vec<&ComponentRecord> {
        self.components.iter().filter(|c| c.dim_oracle.is_some_and(|d| d != c.dim)).collect()
    }
}

pub fn sing_catalog(n: usize, q: usize, seed: u64, trials: usize) -> Result<CatalogDocument> {
    let components = maximal_components(n, q)?
        .into_iter()
        .map(|c| ComponentRecord {
            kind: ComponentKind::Sing,
            label: c.rep.to_string(),
            data: DefiningData::Sing {
                summands: c
                    .rep
                    .parts
                    .iter()
                    .map(|(iv, &m)| Summand { start: iv.start, end: iv.end, multiplicity: m })
                    .collect(),
                rank_matrix: c.rank_matrix.ranks.clone(),
            },
            dim: c.dim_formula,
            dim_oracle: c.dim_oracle,
            representative: blocks_to_strings(&c.representative),
        })
        .collect();
    let config = ConfigEcho { command: "sing".into(), n, q, seed, trials };
    Ok(CatalogDocument::new(config, components))
}

pub fn jacobian_catalog(n: usize, q: usize, seed: u64, trials: usize) -> Result<CatalogDocument> {
    let components = jac_components(n, q)?
        .into_iter()
        .map(|c| {
            Ok(ComponentRecord {
                kind: ComponentKind::Jacobian,
                label: format!("W({},{})", c.alpha, c.r),
                data: DefiningData::Jacobian { alpha: c.alpha, r: c.r },
                dim: c.dim,
                dim_oracle: Some(crate::jacobian::jac_dim_oracle(q, c.r, seed)?),
                representative: blocks_to_strings(&c.representative),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let config = ConfigEcho { command: "jacobian".into(), n, q, seed, trials };
    Ok(CatalogDocument::new(config, components))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{frac, int, Modulus, Scalar};
    use crate::imm::evaluate;

    #[test]
    fn point_round_trip() {
        let mut rng = crate::random::rng(5);
        let p = crate::random::point(&mut rng, 3, 2, 9, 4);
        assert_eq!(parse_point_file(&write_point_file(&p)).unwrap(), p);
    }

    #[test]
    fn identity_point_file() {
        let text = r#"{"n":3,"q":2,"blocks":[[["1","0"],["0","1"]],[["1/1","0"],["0","1"]],[["2/2","0/5"],["0","1"]]]}"#;
        let p = parse_point_file(text).unwrap();
        assert_eq!(evaluate(&p), int(2));
    }

    #[test]
    fn diagnostics_name_the_field() {
        let bad = r#"{"n":1,"q":2,"blocks":[[["1","x"],["0","1"]]]}"#;
        let e = parse_point_file(bad).unwrap_err().to_string();
        assert!(e.contains("blocks[0][0][1]"), "{e}");
        let short = r#"{"n":2,"q":2,"blocks":[[["1","0"],["0","1"]]]}"#;
        assert!(parse_point_file(short).unwrap_err().to_string().contains("expected 2 blocks"));
        let syntax = "{\"n\":1,\n\"q\":}";
        assert!(parse_point_file(syntax).unwrap_err().to_string().contains("line 2"));
        assert!(parse_point_file(r#"{"n":1,"blocks":[]}"#).unwrap_err().to_string().contains("\"q\""));
    }

    #[test]
    fn quotient_round_trip() {
        let m = Modulus::new(3, 3).unwrap();
        let x = QuotientScalar::from_coeffs(m, vec![frac(1, 2), int(0), int(-4)]);
        let rec = QuotientRecord::from_scalar(&x);
        assert_eq!(rec.coefficients, vec!["1/2", "0/1", "-4/1"]);
        assert_eq!(rec.to_scalar().unwrap(), x);
        assert!(!rec.to_scalar().unwrap().is_zero());
    }

    #[test]
    fn catalogs_round_trip_and_verify() {
        for doc in [sing_catalog(3, 2, 0, 1).unwrap(), jacobian_catalog(4, 2, 0, 1).unwrap()] {
            let again = CatalogDocument::from_json(&doc.to_json()).unwrap();
            assert_eq!(again, doc);
            assert!(again.mismatches().is_empty());
            for c in &again.components {
                assert!(c.verify_membership().unwrap());
            }
        }
    }

    #[test]
    fn schemas_parse_and_list_catalog_fields() {
        let schema: Value = serde_json::from_str(CATALOG_SCHEMA).unwrap();
        let doc: Value = serde_json::from_str(&sing_catalog(3, 2, 0, 1).unwrap().to_json()).unwrap();
        for key in schema["required"].as_array().unwrap() {
            assert!(doc.get(key.as_str().unwrap()).is_some(), "{key}");
        }
        let item = &schema["properties"]["components"]["items"];
        for key in item["required"].as_array().unwrap() {
            assert!(doc["components"][0].get(key.as_str().unwrap()).is_some(), "{key}");
        }
        let _: Value = serde_json::from_str(POINT_SCHEMA).unwrap();
    }
}
