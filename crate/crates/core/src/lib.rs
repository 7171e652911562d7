//! Lexer, parser and normalizers for a Mizar language subset.
//!
//! A [`notation::NotationTable`] declares every non-builtin symbol. With it,
//! [`parser::parse_text`] builds an [`ast::Article`], which can be rendered as
//! parse-tree XML, pretty-printed, or normalized to the weakly strict (WSM) and
//! more strict (MSM) forms. WSM text can be read back without any table.

pub mod ast;
pub mod cli;
pub mod error;
pub mod lexer;
pub mod links;
pub mod msm;
pub mod notation;
pub mod parser;
pub mod pipeline;
pub mod printer;
pub mod service;
pub mod wsm;
pub mod xml;

pub use ast::Article;
pub use error::{Error, Pos, Result};
pub use notation::{default_table, load_notation_table, NotationTable};
pub use parser::parse_text;
