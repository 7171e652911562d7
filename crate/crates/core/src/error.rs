use std::fmt;

use thiserror::Error;

/// 1-based source position. `line == 0` means "unknown" (synthesized nodes).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pos {
    pub line: u32,
    pub col: u32,
}

impl Pos {
    pub const UNKNOWN: Pos = Pos { line: 0, col: 0 };

    pub fn new(line: u32, col: u32) -> Pos {
        Pos { line, col }
    }

    pub fn is_known(self) -> bool {
        self.line > 0
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Error {
    #[error("notation table line {line}: {message}")]
    Notation { line: u32, message: String },

    #[error("duplicate notation entry `{symbol}` ({kind}) on line {line}")]
    DuplicateNotation { line: u32, symbol: String, kind: String },

    #[error("{message}")]
    Lexical { pos: Pos, message: String },

    #[error("expected {}, found {found}", expected.join(" or "))]
    Syntax { pos: Pos, expected: Vec<String>, found: String },

    #[error("undeclared mode `{symbol}`")]
    UndeclaredMode { pos: Pos, symbol: String },

    #[error("no declared arity of mode `{symbol}` yields a complete parse (tried: {}){}",
        fmt_arities(tried),
        detail.as_ref().map(|d| format!("; furthest error: {d}")).unwrap_or_default())]
    Resolution { pos: Pos, symbol: String, tried: Vec<usize>, detail: Option<String> },

    #[error("label `{label}` defined twice in the same block")]
    DuplicateLabel { pos: Pos, label: String },

    #[error("empty proof block")]
    EmptyProof { pos: Pos },

    #[error("`then` with no previous statement in its block")]
    DanglingThen { pos: Pos },

    #[error("a `then`-linked statement justified by a proof cannot carry an explicit reference")]
    LinkedProof { pos: Pos },

    #[error("reference to undefined label `{label}`")]
    UndefinedReference { pos: Pos, label: String },

    #[error("variable `{name}` has no introduction site in scope")]
    UnresolvedVariable { pos: Pos, name: String },

    #[error("line {line}: {message}")]
    WsmFormat { line: u32, message: String },
}

fn fmt_arities(tried: &[usize]) -> String {
    if tried.is_empty() {
        return "none".to_string();
    }
    tried.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(", ")
}

impl Error {
    /// Short machine-readable category used on the first line of error documents.
    pub fn category(&self) -> &'static str {
        match self {
            Error::Notation { .. } | Error::DuplicateNotation { .. } => "notation",
            Error::Lexical { .. } => "lexical",
            Error::Syntax { .. } | Error::EmptyProof { .. } => "syntax",
            Error::UndeclaredMode { .. } => "undeclared-mode",
            Error::Resolution { .. } => "resolution",
            Error::DuplicateLabel { .. } => "duplicate-label",
            Error::DanglingThen { .. } | Error::LinkedProof { .. } => "structure",
            Error::UndefinedReference { .. } => "undefined-reference",
            Error::UnresolvedVariable { .. } => "unresolved-variable",
            Error::WsmFormat { .. } => "wsm-format",
        }
    }

    pub fn pos(&self) -> Pos {
        match self {
            Error::Notation { line, .. }
            | Error::DuplicateNotation { line, .. }
            | Error::WsmFormat { line, .. } => Pos::new(*line, 0),
            Error::Lexical { pos, .. }
            | Error::Syntax { pos, .. }
            | Error::UndeclaredMode { pos, .. }
            | Error::Resolution { pos, .. }
            | Error::DuplicateLabel { pos, .. }
            | Error::EmptyProof { pos }
            | Error::DanglingThen { pos }
            | Error::LinkedProof { pos }
            | Error::UndefinedReference { pos, .. }
            | Error::UnresolvedVariable { pos, .. } => *pos,
        }
    }

    /// Plain-text error document: category, line, column, then the message.
    pub fn document(&self) -> String {
        let pos = self.pos();
        error_document(self.category(), pos.line, pos.col, &self.to_string())
    }
}

pub fn error_document(category: &str, line: u32, col: u32, message: &str) -> String {
    format!("error: {category}\nline: {line}\ncol: {col}\n{message}\n")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
