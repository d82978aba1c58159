//! Structured diagnostics shared by every stage of the toolchain.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

/// Stable diagnostic codes. These strings are part of the tool's public
/// surface and are compared verbatim by golden tests.
pub mod codes {
    pub const PARSE: &str = "E-PARSE";
    pub const KIND: &str = "E-KIND";

    pub const IMPORT_MISSING: &str = "E-IMPORT-MISSING";
    pub const NAME_CLASH: &str = "E-NAME-CLASH";
    pub const PATH_UNRESOLVED: &str = "E-PATH-UNRESOLVED";
    pub const PATH_THROUGH_ATOMIC: &str = "E-PATH-THROUGH-ATOMIC";

    pub const SCD_DUP: &str = "E-SCD-DUP";
    pub const TYPE_UNRESOLVED: &str = "E-TYPE-UNRESOLVED";
    pub const ENUM_LITERAL: &str = "E-ENUM-LITERAL";
    pub const ENUM_LITERAL_DUP: &str = "E-ENUM-LITERAL-DUP";
    pub const ARG_ARITY: &str = "E-ARG-ARITY";
    pub const ARG_TYPE: &str = "E-ARG-TYPE";
    pub const CONN_UNRESOLVED: &str = "E-CONN-UNRESOLVED";
    pub const CONN_DIR: &str = "E-CONN-DIR";
    pub const CONN_TYPE: &str = "E-CONN-TYPE";
    pub const ABSTRACT_IMPURE: &str = "E-ABSTRACT-IMPURE";
    pub const COMPOSED_BEHAVIOR: &str = "E-COMPOSED-BEHAVIOR";
    pub const EXTENDS_CYCLE: &str = "E-EXTENDS-CYCLE";
    pub const CONTAINMENT_CYCLE: &str = "E-CONTAINMENT-CYCLE";
    pub const PORT_REDEF: &str = "E-PORT-REDEF";
    pub const PARAM_REDEF: &str = "E-PARAM-REDEF";
    pub const PLATFORM_LEAK: &str = "E-PLATFORM-LEAK";
    pub const ABSTRACT_INSTANCE: &str = "E-ABSTRACT-INSTANCE";
    pub const NO_BEHAVIOR: &str = "E-NO-BEHAVIOR";
    pub const KIND_UNDETERMINED: &str = "E-KIND-UNDETERMINED";
    pub const ROOT_UNRESOLVED: &str = "E-ROOT-UNRESOLVED";
    pub const PORT_UNUSED: &str = "W-PORT-UNUSED";

    pub const MODELLIB_IMPURE: &str = "E-MODELLIB-IMPURE";
    pub const IMPLLIB_ABSTRACT: &str = "E-IMPLLIB-ABSTRACT";
    pub const IMPLLIB_NO_SUPER: &str = "E-IMPLLIB-NO-SUPER";
    pub const IMPLLIB_ABSTRACT_SCD: &str = "E-IMPLLIB-ABSTRACT-SCD";
    pub const IMPL_NO_RTS: &str = "E-IMPL-NO-RTS";

    pub const BIND_PATH: &str = "E-BIND-PATH";
    pub const BIND_NOT_ABSTRACT: &str = "E-BIND-NOT-ABSTRACT";
    pub const BIND_TWICE: &str = "E-BIND-TWICE";
    pub const BIND_NOT_SUBTYPE: &str = "E-BIND-NOT-SUBTYPE";
    pub const BIND_NOT_PLATFORM: &str = "E-BIND-NOT-PLATFORM";
    pub const BIND_ARITY: &str = "E-BIND-ARITY";
    pub const BIND_ARG_TYPE: &str = "E-BIND-ARG-TYPE";
    pub const BIND_WRONG_ARCH: &str = "E-BIND-WRONG-ARCH";
    pub const CLASH: &str = "W-CLASH";
    pub const CLASH_ERROR: &str = "E-CLASH";

    pub const UNBOUND_ABSTRACT: &str = "E-UNBOUND-ABSTRACT";
    pub const UNBOUND_ABSTRACT_WARN: &str = "W-UNBOUND-ABSTRACT";
    pub const APP_NAME_CLASH: &str = "E-APP-NAME-CLASH";
    pub const ROOT_PARAMS: &str = "E-ROOT-PARAMS";
}

/// A region of a source file, 1-based and inclusive of its start.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct SourceSpan {
    pub file: Arc<str>,
    pub start_line: u32,
    pub start_col: u32,
    pub end_line: u32,
    pub end_col: u32,
}

impl SourceSpan {
    pub fn new(file: Arc<str>, start: (u32, u32), end: (u32, u32)) -> Self {
        Self {
            file,
            start_line: start.0,
            start_col: start.1,
            end_line: end.0,
            end_col: end.1,
        }
    }

    /// Smallest span covering both `self` and `other`.
    pub fn to(&self, other: &SourceSpan) -> SourceSpan {
        SourceSpan {
            file: self.file.clone(),
            start_line: self.start_line,
            start_col: self.start_col,
            end_line: other.end_line,
            end_col: other.end_col,
        }
    }

    fn key(&self) -> (&str, u32, u32, u32, u32) {
        (
            &self.file,
            self.start_line,
            self.start_col,
            self.end_line,
            self.end_col,
        )
    }
}

impl PartialOrd for SourceSpan {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SourceSpan {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file, self.start_line, self.start_col)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub code: &'static str,
    pub severity: Severity,
    pub span: SourceSpan,
    pub message: String,
    pub related: Vec<SourceSpan>,
}

impl Diagnostic {
    pub fn error(code: &'static str, span: SourceSpan, message: impl Into<String>) -> Self {
        Self {
            code,
            severity: Severity::Error,
            span,
            message: message.into(),
            related: Vec::new(),
        }
    }

    pub fn warning(code: &'static str, span: SourceSpan, message: impl Into<String>) -> Self {
        Self {
            severity: Severity::Warning,
            ..Self::error(code, span, message)
        }
    }

    pub fn with_related(mut self, span: SourceSpan) -> Self {
        self.related.push(span);
        self
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }

    /// `file:line:col: severity[CODE] message`
    pub fn render(&self, color: bool) -> String {
        let sev = if color {
            match self.severity {
                Severity::Error => format!("\x1b[1;31m{}\x1b[0m", self.severity),
                Severity::Warning => format!("\x1b[1;33m{}\x1b[0m", self.severity),
            }
        } else {
            self.severity.to_string()
        };
        format!("{}: {}[{}] {}", self.span, sev, self.code, self.message)
    }

    /// One line-delimited JSON record.
    pub fn to_json_line(&self) -> String {
        serde_json::json!({
            "code": self.code,
            "severity": self.severity,
            "file": &*self.span.file,
            "span": {
                "start_line": self.span.start_line,
                "start_col": self.span.start_col,
                "end_line": self.span.end_line,
                "end_col": self.span.end_col,
            },
            "message": self.message,
        })
        .to_string()
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(false))
    }
}

/// Sorts diagnostics by (file, span, code) and drops exact duplicates.
pub fn sort_diagnostics(diags: &mut Vec<Diagnostic>) {
    diags.sort_by(|a, b| {
        a.span
            .cmp(&b.span)
            .then_with(|| a.code.cmp(b.code))
            .then_with(|| a.message.cmp(&b.message))
    });
    diags.dedup();
}

pub fn has_errors(diags: &[Diagnostic]) -> bool {
    diags.iter().any(Diagnostic::is_error)
}
