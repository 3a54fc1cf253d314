//! JSON system descriptions.
//!
//! ```json
//! {
//!   "m": 2,
//!   "labels": ["J0", "J0'"],
//!   "A": [["0", "1"], ["-1", "-1/z"]],
//!   "T": "z",
//!   "seeds": [["1"], ["0"]],
//!   "growth": {"C": "1", "D": "2", "provenance": "catalog"},
//!   "exponent_bounds": [{"point": "inf", "bound": "2"}]
//! }
//! ```
//!
//! `T`, `growth` and `exponent_bounds` are optional. Every rational is a
//! string so nothing passes through floating point.

use std::path::Path;

use efcert::algebra::{format_rational, parse_poly, parse_rational, RatFunc, Rational};
use efcert::efunction::{
    DiffSystem, EFunctionError, ExponentBound, GrowthCertificate, Provenance, SingularPoint,
};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("{source_name}: line {line}, column {column}: {message}")]
    Syntax {
        source_name: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{field}: {message}")]
    Field { field: String, message: String },
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

fn field(name: impl Into<String>, message: impl ToString) -> InputError {
    InputError::Field {
        field: name.into(),
        message: message.to_string(),
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SystemFile {
    m: usize,
    labels: Vec<String>,
    #[serde(rename = "A")]
    a: Vec<Vec<String>>,
    #[serde(rename = "T", default, skip_serializing_if = "Option::is_none")]
    t: Option<String>,
    seeds: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    growth: Option<GrowthFile>,
    #[serde(default)]
    exponent_bounds: Vec<BoundFile>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GrowthFile {
    #[serde(rename = "C")]
    c: String,
    #[serde(rename = "D")]
    d: String,
    provenance: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BoundFile {
    point: String,
    bound: String,
}

#[derive(Debug, Clone)]
pub struct ParsedSystem {
    pub system: DiffSystem,
    pub warnings: Vec<String>,
}

fn rational(name: &str, s: &str) -> Result<Rational, InputError> {
    parse_rational(s).map_err(|e| field(name, e))
}

fn system_field(e: &EFunctionError) -> &'static str {
    match e {
        EFunctionError::Shape { .. } => "A",
        EFunctionError::ComponentCount { .. } => "labels",
        EFunctionError::UnderdeterminedSeeds { .. }
        | EFunctionError::InconsistentSeeds { .. }
        | EFunctionError::AllComponentsZero => "seeds",
        EFunctionError::NotACommonDenominator { .. } | EFunctionError::NonMinimalDenominator { .. } => "T",
        EFunctionError::InvalidGrowth { .. } => "growth",
        _ => "system",
    }
}

pub fn parse_system_str(text: &str, source_name: &str) -> Result<ParsedSystem, InputError> {
    let file: SystemFile = serde_json::from_str(text).map_err(|e| InputError::Syntax {
        source_name: source_name.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if file.a.len() != file.m {
        return Err(field("A", format!("expected {} rows, found {}", file.m, file.a.len())));
    }
    let mut a = Vec::with_capacity(file.m);
    for (i, row) in file.a.iter().enumerate() {
        let mut r = Vec::with_capacity(row.len());
        for (j, s) in row.iter().enumerate() {
            r.push(s.parse::<RatFunc>().map_err(|e| field(format!("A[{i}][{j}]"), e))?);
        }
        a.push(r);
    }
    let mut seeds = Vec::with_capacity(file.seeds.len());
    for (i, row) in file.seeds.iter().enumerate() {
        let r = row
            .iter()
            .enumerate()
            .map(|(k, s)| rational(&format!("seeds[{i}][{k}]"), s))
            .collect::<Result<Vec<_>, _>>()?;
        seeds.push(r);
    }
    let labels = file.labels.clone();

    let mut warnings = Vec::new();
    let built = match &file.t {
        None => DiffSystem::new(a, seeds, labels),
        Some(t) => {
            let tp = parse_poly(t).map_err(|e| field("T", e))?;
            match tp.to_int() {
                None => {
                    warnings.push(format!("T = {t} has non-integer coefficients; recomputed"));
                    DiffSystem::new(a, seeds, labels)
                }
                Some(ti) => match DiffSystem::with_denominator(a.clone(), ti, seeds.clone(), labels.clone()) {
                    Err(
                        e @ (EFunctionError::NotACommonDenominator { .. }
                        | EFunctionError::NonMinimalDenominator { .. }),
                    ) => {
                        let sys = DiffSystem::new(a, seeds, labels);
                        if let Ok(s) = &sys {
                            warnings.push(format!("{e}; using T = {}", s.t()));
                        }
                        sys
                    }
                    other => other,
                },
            }
        }
    };
    let mut system = built.map_err(|e| field(system_field(&e), e))?;

    if let Some(g) = &file.growth {
        let provenance = match g.provenance.as_str() {
            "catalog" => Provenance::Catalog,
            "user-supplied" => Provenance::UserSupplied,
            other => {
                return Err(field(
                    "growth.provenance",
                    format!("expected \"catalog\" or \"user-supplied\", found {other:?}"),
                ))
            }
        };
        let cert = GrowthCertificate::new(rational("growth.C", &g.c)?, rational("growth.D", &g.d)?, provenance)
            .map_err(|e| field("growth", e))?;
        system = system.with_growth(cert);
    }
    let mut bounds = Vec::with_capacity(file.exponent_bounds.len());
    for (i, b) in file.exponent_bounds.iter().enumerate() {
        let point: SingularPoint = b
            .point
            .parse()
            .map_err(|e| field(format!("exponent_bounds[{i}].point"), e))?;
        let bound = rational(&format!("exponent_bounds[{i}].bound"), &b.bound)?;
        if bound < Rational::from_integer(0.into()) {
            return Err(field(format!("exponent_bounds[{i}].bound"), "must be nonnegative"));
        }
        bounds.push(ExponentBound { point, bound });
    }
    Ok(ParsedSystem {
        system: system.with_exponent_bounds(bounds),
        warnings,
    })
}

pub fn parse_system(path: &Path) -> Result<ParsedSystem, InputError> {
    let text = std::fs::read_to_string(path).map_err(|source| InputError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_system_str(&text, &path.display().to_string())
}

/// Pretty JSON with a trailing newline; `parse_system_str` reads it back to
/// an equal system and re-emitting gives the same bytes.
pub fn emit_system(sys: &DiffSystem) -> String {
    let file = SystemFile {
        m: sys.m(),
        labels: sys.labels().to_vec(),
        a: sys
            .a()
            .iter()
            .map(|row| row.iter().map(ToString::to_string).collect())
            .collect(),
        t: Some(sys.t().to_string()),
        seeds: sys
            .seeds()
            .iter()
            .map(|row| row.iter().map(format_rational).collect())
            .collect(),
        growth: sys.growth().map(|g| GrowthFile {
            c: format_rational(&g.c),
            d: format_rational(&g.d),
            provenance: g.provenance.as_str().to_string(),
        }),
        exponent_bounds: sys
            .exponent_bounds()
            .iter()
            .map(|b| BoundFile {
                point: b.point.to_string(),
                bound: format_rational(&b.bound),
            })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("plain data serializes");
    s.push('\n');
    s
}
