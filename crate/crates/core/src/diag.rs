//! Source locations and validation diagnostics.

use std::fmt;

/// A location in a workbook file. Lines and columns are 1-based.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SourceSpan {
    pub file: String,
    pub line: usize,
    pub column: usize,
    pub length: usize,
}

impl SourceSpan {
    pub fn new(file: impl Into<String>, line: usize, column: usize, length: usize) -> Self {
        SourceSpan { file: file.into(), line, column, length }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "{}", self.file)
        } else {
            write!(f, "{}:{}:{}", self.file, self.line, self.column)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Severity::Error => write!(f, "error"),
            Severity::Warning => write!(f, "warning"),
        }
    }
}

/// Machine-readable category for a validation finding.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiagCode {
    /// A Choice-table row assigns total probability mass > 1.
    ChoiceRowMass,
    /// A function symbol receives probabilistic values from a non-Choice table,
    /// so several values may hold at once.
    MultiValuedFunction,
    /// Two rows of a Unique table can match the same inputs.
    OverlappingRows,
    /// A symbol is read in an input column but no table or fact defines it.
    UndefinedInput,
    /// Overlapping rows of an Any table disagree on an output.
    ConflictingAnyRows,
}

impl fmt::Display for DiagCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DiagCode::ChoiceRowMass => "choice-row-mass",
            DiagCode::MultiValuedFunction => "multi-valued-function",
            DiagCode::OverlappingRows => "overlapping-rows",
            DiagCode::UndefinedInput => "undefined-input",
            DiagCode::ConflictingAnyRows => "conflicting-any-rows",
        };
        write!(f, "{s}")
    }
}

#[derive(Clone, Debug)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: DiagCode,
    pub message: String,
    pub span: SourceSpan,
}

impl Diagnostic {
    pub fn error(code: DiagCode, message: impl Into<String>, span: SourceSpan) -> Self {
        Diagnostic { severity: Severity::Error, code, message: message.into(), span }
    }

    pub fn warning(code: DiagCode, message: impl Into<String>, span: SourceSpan) -> Self {
        Diagnostic { severity: Severity::Warning, code, message: message.into(), span }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} [{}] ({})", self.severity, self.message, self.code, self.span)
    }
}
