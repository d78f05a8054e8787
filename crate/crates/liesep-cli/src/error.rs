use std::fmt;

use serde::Serialize;

use liesep_core::symcore::SymError;
use liesep_core::Error;

/// Usage and input errors; these map to exit code 2.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CliError {
    pub code: &'static str,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub column: Option<usize>,
}

impl CliError {
    pub fn new(code: &'static str, message: impl Into<String>) -> Self {
        CliError { code, message: message.into(), path: None, line: None, column: None }
    }

    pub fn invalid(path: impl Into<String>, message: impl Into<String>) -> Self {
        CliError { path: Some(path.into()), ..Self::new("invalid_definition", message) }
    }

    pub fn from_json(e: serde_json::Error) -> Self {
        CliError { line: Some(e.line()), column: Some(e.column()), ..Self::new("json_parse", e.to_string()) }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "error[{}]", self.code)?;
        if let Some(p) = &self.path {
            write!(f, " at {}", p)?;
        }
        if let (Some(l), Some(c)) = (self.line, self.column) {
            write!(f, " (line {}, column {})", l, c)?;
        }
        write!(f, ": {}", self.message)
    }
}

impl std::error::Error for CliError {}

/// Machine-readable code for a failed computation.
pub fn error_code(e: &Error) -> &'static str {
    match e {
        Error::Sym(SymError::Parse { .. }) => "parse_error",
        Error::Sym(SymError::Pole) => "pole",
        Error::Sym(_) => "symbolic_error",
        Error::Dimension(_) => "dimension_mismatch",
        Error::DegenerateMetric => "degenerate_metric",
        Error::SymbolMismatch(_) => "symbol_mismatch",
        Error::NotDegenerate(_) => "not_degenerate",
        Error::Unreachable => "unreachable",
        Error::UnsupportedEntry { .. } => "unsupported_entry",
        Error::NotExpressible(_) => "not_expressible",
        Error::NotSeparable(_) => "not_separable",
        Error::Domain(_) => "domain_error",
    }
}
