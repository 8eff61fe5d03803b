use std::fmt;

use fwph_core::model::{IssueKind, ValidationReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    Dimension,
    Probability,
    Value,
    Unsupported,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ParseErrorKind::Syntax => "syntax error",
            ParseErrorKind::Dimension => "dimension error",
            ParseErrorKind::Probability => "probability error",
            ParseErrorKind::Value => "invalid value",
            ParseErrorKind::Unsupported => "unsupported section",
        })
    }
}

/// A parse failure located at a 1-based line and column of some file.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{}{line}:{column}: {kind}: {message}", file.as_deref().map(|f| format!("{f}:")).unwrap_or_default())]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub file: Option<String>,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(kind: ParseErrorKind, line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError { kind, file: None, line, column, message: message.into() }
    }

    pub fn in_file(mut self, file: impl Into<String>) -> Self {
        self.file = Some(file.into());
        self
    }
}

/// Classifies the first validation error; `locate` maps a scenario index
/// (or `None` for first-stage issues) to a position in the source.
pub(crate) fn from_report(report: &ValidationReport, locate: impl Fn(Option<usize>) -> (usize, usize)) -> Option<ParseError> {
    let issue = report.errors().next()?;
    let kind = match issue.kind {
        IssueKind::ProbabilitySum { .. } | IssueKind::NonPositiveProbability { .. } => ParseErrorKind::Probability,
        IssueKind::Dimension { .. } => ParseErrorKind::Dimension,
        _ => ParseErrorKind::Value,
    };
    let at = match issue.kind {
        IssueKind::ProbabilitySum { .. } => locate(Some(0)),
        _ => locate(issue.scenario),
    };
    Some(ParseError::new(kind, at.0, at.1, issue.to_string()))
}
