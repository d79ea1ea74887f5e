//! TOML model files.
//!
//! ```toml
//! name = "so3"
//! builder = "f-model"          # or "higgs"
//! l_mode = "adjoint-auxiliary" # or "zero"
//!
//! [algebra]
//! dim = 3
//! structure_constants = [[1, 2, 3, 1]]   # 1-based a, b, c and the value
//!
//! [[constraint]]                # optional, replaces a built constraint
//! name = "phi1"
//! expr = "q2*p3 - q3*p2"
//! ```

use std::fmt;
use std::path::Path;

use gaugekit::expr::rat;
use gaugekit::lie::{StructureConstants, ValidityReport};
use gaugekit::models::{build_f_model, build_higgs_model, ConstraintModel, LMode, ModelError};
use serde::Deserialize;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    name: String,
    builder: String,
    #[serde(default)]
    l_mode: Option<String>,
    #[serde(default)]
    bracket_scale: Option<i64>,
    #[serde(default)]
    algebra: Option<RawAlgebra>,
    #[serde(default)]
    constraint: Vec<RawConstraint>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAlgebra {
    dim: usize,
    structure_constants: Vec<[i64; 4]>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConstraint {
    name: String,
    expr: String,
}

#[derive(Debug)]
pub struct ModelFileError {
    pub path: String,
    pub line: Option<usize>,
    pub column: Option<usize>,
    pub message: String,
}

impl fmt::Display for ModelFileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.line, self.column) {
            (Some(l), Some(c)) => write!(f, "{}:{}:{}: {}", self.path, l, c, self.message),
            _ => write!(f, "{}: {}", self.path, self.message),
        }
    }
}

impl std::error::Error for ModelFileError {}

/// A loaded model, or an algebra that failed validation (reported by
/// `verify` rather than rejected as a parse error).
pub enum Loaded {
    Model(Box<ConstraintModel>),
    InvalidAlgebra {
        name: String,
        algebra: StructureConstants,
        report: ValidityReport,
    },
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |s| s.chars().count()) + 1;
    (line, column)
}

/// First occurrence of `needle`, for pointing semantic errors at a line.
fn locate(text: &str, needle: &str) -> Option<usize> {
    text.find(needle)
}

pub fn load(path: &Path) -> Result<Loaded, ModelFileError> {
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| ModelFileError {
        path: shown.clone(),
        line: None,
        column: None,
        message: e.to_string(),
    })?;
    parse(&text, &shown)
}

pub fn parse(text: &str, shown: &str) -> Result<Loaded, ModelFileError> {
    let err_at = |offset: Option<usize>, message: String| {
        let (line, column) = offset.map(|o| line_col(text, o)).unzip();
        ModelFileError {
            path: shown.to_string(),
            line,
            column,
            message,
        }
    };
    let raw: RawModel = toml::from_str(text).map_err(|e| {
        err_at(
            e.span().map(|s| s.start),
            e.message().trim().to_string(),
        )
    })?;

    let l_mode = match raw.l_mode.as_deref() {
        None | Some("adjoint-auxiliary") => LMode::AdjointAuxiliary,
        Some("zero") => LMode::Zero,
        Some(other) => {
            return Err(err_at(
                locate(text, "l_mode"),
                format!("unknown l_mode {other:?} (expected \"zero\" or \"adjoint-auxiliary\")"),
            ))
        }
    };
    let mut model = match raw.builder.as_str() {
        "higgs" => {
            if raw.algebra.is_some() {
                return Err(err_at(
                    locate(text, "[algebra]"),
                    "the higgs builder fixes its own algebra".into(),
                ));
            }
            build_higgs_model()
        }
        "f-model" => {
            let alg = raw.algebra.as_ref().ok_or_else(|| {
                err_at(None, "builder \"f-model\" needs an [algebra] table".into())
            })?;
            let reps: Vec<((usize, usize, usize), _)> = alg
                .structure_constants
                .iter()
                .map(|&[a, b, c, v]| {
                    let idx = |x: i64| {
                        usize::try_from(x)
                            .ok()
                            .filter(|&x| (1..=alg.dim).contains(&x))
                            .map(|x| x - 1)
                    };
                    match (idx(a), idx(b), idx(c)) {
                        (Some(a), Some(b), Some(c)) => Ok(((a, b, c), rat(v))),
                        _ => Err(err_at(
                            locate(text, "structure_constants"),
                            format!("index out of range 1..={} in [{a}, {b}, {c}, {v}]", alg.dim),
                        )),
                    }
                })
                .collect::<Result<_, _>>()?;
            let f = StructureConstants::from_representatives(alg.dim, &reps)
                .map_err(|e| err_at(locate(text, "structure_constants"), e.to_string()))?;
            match build_f_model(&f, l_mode) {
                Ok(m) => m,
                Err(ModelError::InvalidStructureConstants(report)) => {
                    return Ok(Loaded::InvalidAlgebra {
                        name: raw.name,
                        algebra: f,
                        report,
                    })
                }
                Err(e) => return Err(err_at(None, e.to_string())),
            }
        }
        other => {
            return Err(err_at(
                locate(text, "builder"),
                format!("unknown builder {other:?} (expected \"f-model\" or \"higgs\")"),
            ))
        }
    };
    if let Some(scale) = raw.bracket_scale {
        if rat(scale) != model.bracket_scale {
            return Err(err_at(
                locate(text, "bracket_scale"),
                format!(
                    "bracket_scale {scale} disagrees with the builder's {}",
                    model.bracket_scale
                ),
            ));
        }
    }
    for c in &raw.constraint {
        let at = locate(text, &c.expr);
        let k = model
            .constraint_names
            .iter()
            .position(|n| *n == c.name)
            .ok_or_else(|| err_at(at, format!("no constraint named {:?}", c.name)))?;
        let value = model.chart.parse(&c.expr).map_err(|e| {
            let inner = match &e {
                gaugekit::expr::ExprError::Syntax { position, .. }
                | gaugekit::expr::ExprError::UnknownSymbol { position, .. }
                | gaugekit::expr::ExprError::DivisionByZeroLiteral { position } => *position,
                _ => 0,
            };
            err_at(at.map(|o| o + inner), e.to_string())
        })?;
        model.constraints[k] = value;
    }
    model.name = raw.name;
    Ok(Loaded::Model(Box::new(model)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn syntax_error_has_position() {
        let e = match parse("name = \"x\"\nbuilder = = 3\n", "m.toml") {
            Err(e) => e,
            Ok(_) => panic!("accepted malformed file"),
        };
        assert_eq!(e.line, Some(2));
        assert!(e.column.is_some());
    }

    #[test]
    fn bad_expression_points_into_the_string() {
        let text = "name = \"x\"\nbuilder = \"f-model\"\n[algebra]\ndim = 3\n\
                    structure_constants = [[1, 2, 3, 1]]\n[[constraint]]\nname = \"phi1\"\nexpr = \"q2 * * p3\"\n";
        let e = match parse(text, "m.toml") {
            Err(e) => e,
            Ok(_) => panic!("accepted bad expression"),
        };
        assert_eq!(e.line, Some(8));
    }

    #[test]
    fn invalid_algebra_is_reported_not_rejected() {
        let text = "name = \"bad\"\nbuilder = \"f-model\"\n[algebra]\ndim = 5\n\
                    structure_constants = [[1, 2, 3, 1], [3, 4, 5, 1]]\n";
        assert!(matches!(parse(text, "m.toml"), Ok(Loaded::InvalidAlgebra { .. })));
    }
}
