use std::fmt;

use serde::Serialize;

/// A source range. Lines and columns are 1-based; `end` is exclusive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Span {
    pub start: usize,
    pub end: usize,
    pub line: usize,
    pub col: usize,
    pub end_line: usize,
    pub end_col: usize,
}

impl Span {
    pub fn join(self, other: Span) -> Span {
        Span {
            start: self.start,
            end: other.end,
            line: self.line,
            col: self.col,
            end_line: other.end_line,
            end_col: other.end_col,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

impl Severity {
    pub fn as_str(self) -> &'static str {
        match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        }
    }
}

/// Stable diagnostic identifiers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Code {
    /// Lexical or syntactic error.
    E001,
    /// Ill-formed context or ill-kinded type.
    E101,
    /// Unbound term variable.
    E201,
    /// Argument type does not match the domain.
    E202,
    /// Binder form of an application differs from the abstraction's.
    E203,
    /// Application of something that is not a function or universal.
    E204,
    /// Ascription target is not a proper type.
    E205,
    /// No derivation.
    E301,
    /// Several minimal witnesses.
    E302,
    /// Measure bound exhausted.
    E303,
    /// Unification outside the pattern fragment.
    E304,
    /// Elaborated term rejected by the plain F-omega checker.
    E401,
    /// Evaluation ran out of fuel.
    E402,
    /// Bad command line or internal failure.
    E501,
}

impl Code {
    pub fn as_str(self) -> &'static str {
        match self {
            Code::E001 => "E001",
            Code::E101 => "E101",
            Code::E201 => "E201",
            Code::E202 => "E202",
            Code::E203 => "E203",
            Code::E204 => "E204",
            Code::E205 => "E205",
            Code::E301 => "E301",
            Code::E302 => "E302",
            Code::E303 => "E303",
            Code::E304 => "E304",
            Code::E401 => "E401",
            Code::E402 => "E402",
            Code::E501 => "E501",
        }
    }

    /// Process exit status for a diagnostic with this code.
    pub fn exit_status(self) -> i32 {
        match self {
            Code::E001 => 4,
            Code::E101
            | Code::E201
            | Code::E202
            | Code::E203
            | Code::E204
            | Code::E205
            | Code::E401
            | Code::E402 => 1,
            Code::E302 => 2,
            Code::E301 | Code::E303 | Code::E304 => 3,
            Code::E501 => 5,
        }
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Note {
    pub message: String,
    pub span: Option<Span>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: Code,
    pub message: String,
    pub span: Option<Span>,
    /// Pre-order index of the offending term node, when known. Resolved into
    /// `span` by whoever owns the source map.
    pub node: Option<usize>,
    pub notes: Vec<Note>,
    /// Pretty-printed witnesses; populated for ambiguity errors.
    pub witnesses: Vec<String>,
}

impl Diagnostic {
    pub fn error(code: Code, message: impl Into<String>) -> Diagnostic {
        Diagnostic {
            severity: Severity::Error,
            code,
            message: message.into(),
            span: None,
            node: None,
            notes: Vec::new(),
            witnesses: Vec::new(),
        }
    }

    pub fn with_span(mut self, span: Span) -> Diagnostic {
        self.span = Some(span);
        self
    }

    pub fn at_node(mut self, node: usize) -> Diagnostic {
        if self.node.is_none() {
            self.node = Some(node);
        }
        self
    }

    pub fn with_note(mut self, message: impl Into<String>) -> Diagnostic {
        self.notes.push(Note { message: message.into(), span: None });
        self
    }

    pub fn with_witnesses(mut self, witnesses: Vec<String>) -> Diagnostic {
        self.witnesses = witnesses;
        self
    }

    /// Human-readable rendering.
    pub fn render(&self, file: &str) -> String {
        let mut out = format!("{}[{}]: {}\n", self.severity.as_str(), self.code, self.message);
        match self.span {
            Some(span) => out.push_str(&format!("  --> {}:{}:{}\n", file, span.line, span.col)),
            None => out.push_str(&format!("  --> {}\n", file)),
        }
        for note in &self.notes {
            out.push_str(&format!("  note: {}\n", note.message));
        }
        for witness in &self.witnesses {
            out.push_str(&format!("  witness: {}\n", witness));
        }
        out
    }

    /// One-line JSON rendering.
    pub fn to_json(&self, file: &str) -> String {
        let json = JsonDiagnostic {
            severity: self.severity.as_str(),
            code: self.code.as_str(),
            message: &self.message,
            span: self.span.map(|s| JsonSpan {
                file,
                line: s.line,
                col: s.col,
                end_line: s.end_line,
                end_col: s.end_col,
            }),
            notes: self
                .notes
                .iter()
                .map(|n| JsonNote {
                    message: &n.message,
                    span: n.span.map(|s| JsonSpan {
                        file,
                        line: s.line,
                        col: s.col,
                        end_line: s.end_line,
                        end_col: s.end_col,
                    }),
                })
                .collect(),
            witnesses: &self.witnesses,
        };
        serde_json::to_string(&json).expect("diagnostics always serialize")
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]: {}", self.severity.as_str(), self.code, self.message)
    }
}

impl std::error::Error for Diagnostic {}

#[derive(Serialize)]
struct JsonSpan<'a> {
    file: &'a str,
    line: usize,
    col: usize,
    #[serde(rename = "endLine")]
    end_line: usize,
    #[serde(rename = "endCol")]
    end_col: usize,
}

#[derive(Serialize)]
struct JsonNote<'a> {
    message: &'a str,
    span: Option<JsonSpan<'a>>,
}

#[derive(Serialize)]
struct JsonDiagnostic<'a> {
    severity: &'a str,
    code: &'a str,
    message: &'a str,
    span: Option<JsonSpan<'a>>,
    notes: Vec<JsonNote<'a>>,
    witnesses: &'a [String],
}
