//! JSON problem files.

use std::fmt;
use std::path::Path;

use fide_core::expr::{parse, Expr, ExprError};
use fide_core::galerkin::{Problem, VARS_X, VARS_XT};
use serde::Deserialize;

/// On-disk form of a problem. Expressions stay as source text until
/// [`ProblemFile::into_problem`].
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub name: String,
    pub q: f64,
    pub lambda: f64,
    pub p: String,
    pub f: String,
    pub kernel: String,
    #[serde(default)]
    pub d: f64,
    #[serde(default)]
    pub exact: Option<String>,
}

#[derive(Debug)]
pub enum LoadError {
    Io(std::io::Error),
    /// Malformed JSON or a schema violation (missing, unknown or mistyped
    /// member); serde names the member.
    Json(serde_json::Error),
    Expr {
        member: &'static str,
        source: ExprError,
    },
    Problem(fide_core::Error),
}

impl fmt::Display for LoadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LoadError::Io(e) => write!(f, "cannot read problem file: {e}"),
            LoadError::Json(e) => write!(f, "invalid problem file: {e}"),
            LoadError::Expr { member, source } => write!(f, "member `{member}`: {source}"),
            LoadError::Problem(e) => write!(f, "invalid problem: {e}"),
        }
    }
}

impl std::error::Error for LoadError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            LoadError::Io(e) => Some(e),
            LoadError::Json(e) => Some(e),
            LoadError::Expr { source, .. } => Some(source),
            LoadError::Problem(e) => Some(e),
        }
    }
}

fn expr(member: &'static str, source: &str, vars: &[&str]) -> Result<Expr, LoadError> {
    parse(source, vars).map_err(|source| LoadError::Expr { member, source })
}

impl ProblemFile {
    pub fn from_json(text: &str) -> Result<Self, LoadError> {
        serde_json::from_str(text).map_err(LoadError::Json)
    }

    pub fn into_problem(self) -> Result<Problem, LoadError> {
        let p = expr("p", &self.p, VARS_X)?;
        let f = expr("f", &self.f, VARS_X)?;
        let kernel = expr("kernel", &self.kernel, VARS_XT)?;
        let exact = self.exact.as_deref().map(|s| expr("exact", s, VARS_X)).transpose()?;
        let mut problem = Problem::new(self.name, self.q, self.lambda, p, f, kernel)
            .and_then(|pr| pr.with_initial_value(self.d))
            .map_err(LoadError::Problem)?;
        if let Some(e) = exact {
            problem = problem.with_exact(e).map_err(LoadError::Problem)?;
        }
        Ok(problem)
    }
}

pub fn load_problem(path: &Path) -> Result<Problem, LoadError> {
    let text = std::fs::read_to_string(path).map_err(LoadError::Io)?;
    ProblemFile::from_json(&text)?.into_problem()
}
