//! Longest-match tokenizer driven by the notation table.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Pos, Result};
use crate::notation::NotationTable;

/// Reserved words. `&` and `=` are keyword-operators; `set` doubles as the builtin mode.
pub const KEYWORDS: &[&str] = &[
    "reserve", "for", "of", "be", "being", "let", "assume", "thus", "then", "by", "proof", "end",
    "theorem", "holds", "ex", "st", "not", "&", "or", "implies", "iff", "is", "set", "=",
];

pub const PUNCTUATION: &[&str] = &[",", ";", ":", "(", ")", "[", "]"];

pub fn is_keyword(text: &str) -> bool {
    KEYWORDS.contains(&text)
}

pub fn is_identifier(text: &str) -> bool {
    let mut chars = text.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(is_ident_continue) && !is_keyword(text)
}

pub fn is_numeral(text: &str) -> bool {
    match text.as_bytes() {
        [b'0'] => true,
        [b'1'..=b'9', rest @ ..] => rest.iter().all(u8::is_ascii_digit),
        _ => false,
    }
}

fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Keyword,
    Identifier,
    Numeral,
    Symbol,
    Punctuation,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TokenKind::Keyword => "keyword",
            TokenKind::Identifier => "identifier",
            TokenKind::Numeral => "numeral",
            TokenKind::Symbol => "symbol",
            TokenKind::Punctuation => "punctuation",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    pub pos: Pos,
}

impl Token {
    pub fn is(&self, kind: TokenKind, text: &str) -> bool {
        self.kind == kind && self.text == text
    }

    pub fn is_keyword(&self, text: &str) -> bool {
        self.is(TokenKind::Keyword, text)
    }

    pub fn is_punct(&self, text: &str) -> bool {
        self.is(TokenKind::Punctuation, text)
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} `{}`", self.kind, self.text)
    }
}

struct Candidate {
    chars: usize,
    bytes: usize,
    // Tie-break among equally long matches: keyword > symbol > punctuation > word.
    rank: u8,
    kind: TokenKind,
}

pub fn tokenize(text: &str, table: &NotationTable) -> Result<Vec<Token>> {
    let mut by_first: HashMap<char, Vec<&str>> = HashMap::new();
    for lexeme in table.lexemes() {
        if let Some(c) = lexeme.chars().next() {
            by_first.entry(c).or_default().push(lexeme);
        }
    }

    let mut tokens = Vec::new();
    let mut line = 1u32;
    let mut col = 1u32;
    let mut i = 0usize;
    while i < text.len() {
        let rest = &text[i..];
        let c = rest.chars().next().expect("non-empty remainder");
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            col += 1;
            i += c.len_utf8();
            continue;
        }
        if rest.starts_with("::") {
            // Comment to end of line; the newline itself is handled above.
            let len = rest.find('\n').unwrap_or(rest.len());
            col += rest[..len].chars().count() as u32;
            i += len;
            continue;
        }

        let pos = Pos::new(line, col);
        let mut best: Option<Candidate> = None;
        let mut offer = |cand: Candidate| {
            let better = match &best {
                None => true,
                Some(b) => (cand.chars, cand.rank) > (b.chars, b.rank),
            };
            if better {
                best = Some(cand);
            }
        };

        if c.is_ascii_alphabetic() || c == '_' {
            let len = rest.find(|ch: char| !is_ident_continue(ch)).unwrap_or(rest.len());
            let word = &rest[..len];
            let (rank, kind) = if is_keyword(word) {
                (3, TokenKind::Keyword)
            } else {
                (0, TokenKind::Identifier)
            };
            offer(Candidate { chars: len, bytes: len, rank, kind });
        } else if c.is_ascii_digit() {
            let len = rest.find(|ch: char| !ch.is_ascii_digit()).unwrap_or(rest.len());
            offer(Candidate { chars: len, bytes: len, rank: 0, kind: TokenKind::Numeral });
        }
        if let Some(lexemes) = by_first.get(&c) {
            // Sorted longest first, so the first hit is the longest declared match.
            if let Some(sym) = lexemes.iter().find(|l| rest.starts_with(**l)) {
                offer(Candidate {
                    chars: sym.chars().count(),
                    bytes: sym.len(),
                    rank: 2,
                    kind: TokenKind::Symbol,
                });
            }
        }
        if c == '&' || c == '=' {
            offer(Candidate { chars: 1, bytes: 1, rank: 3, kind: TokenKind::Keyword });
        }
        if PUNCTUATION.iter().any(|p| rest.starts_with(p)) {
            offer(Candidate { chars: 1, bytes: 1, rank: 1, kind: TokenKind::Punctuation });
        }

        let Some(cand) = best else {
            return Err(Error::Lexical { pos, message: format!("unexpected character `{c}`") });
        };
        let lexeme = &rest[..cand.bytes];
        if cand.kind == TokenKind::Numeral && !is_numeral(lexeme) {
            return Err(Error::Lexical { pos, message: format!("malformed numeral `{lexeme}`") });
        }
        tokens.push(Token { kind: cand.kind, text: lexeme.to_string(), pos });
        col += cand.chars as u32;
        i += cand.bytes;
    }
    Ok(tokens)
}
