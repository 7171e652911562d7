//! Notation tables: the declared vocabulary a text is lexed and parsed against.
//!
//! A table lists every non-builtin mode, predicate and functor symbol with its
//! admissible arities (and, for infix functors, a binding priority). Without
//! it a text cannot be tokenized, let alone parsed: `Relation of X, Y` only
//! becomes decidable once we know which arities `Relation` admits.
//!
//! File format, one declaration per line:
//!
//! ```text
//! # comment
//! mode Relation 0 1 2
//! pred <=
//! func + infix 32
//! func dom prefix 1
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::lexer::{is_keyword, PUNCTUATION};

/// The builtin zero-argument mode, always present.
pub const BUILTIN_MODE: &str = "set";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NotationKind {
    Mode,
    Predicate,
    FunctorPrefix,
    FunctorInfix,
}

impl NotationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            NotationKind::Mode => "mode",
            NotationKind::Predicate => "predicate",
            NotationKind::FunctorPrefix => "functor-prefix",
            NotationKind::FunctorInfix => "functor-infix",
        }
    }
}

impl fmt::Display for NotationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NotationEntry {
    pub symbol: String,
    pub kind: NotationKind,
    pub arities: BTreeSet<usize>,
    /// Binding priority; only infix functors carry one. Higher binds tighter.
    pub priority: Option<u8>,
}

impl NotationEntry {
    pub fn mode(symbol: &str, arities: impl IntoIterator<Item = usize>) -> NotationEntry {
        NotationEntry {
            symbol: symbol.to_string(),
            kind: NotationKind::Mode,
            arities: arities.into_iter().collect(),
            priority: None,
        }
    }

    pub fn predicate(symbol: &str) -> NotationEntry {
        NotationEntry {
            symbol: symbol.to_string(),
            kind: NotationKind::Predicate,
            arities: BTreeSet::from([2]),
            priority: None,
        }
    }

    pub fn prefix(symbol: &str, arity: usize) -> NotationEntry {
        NotationEntry {
            symbol: symbol.to_string(),
            kind: NotationKind::FunctorPrefix,
            arities: BTreeSet::from([arity]),
            priority: None,
        }
    }

    pub fn infix(symbol: &str, priority: u8) -> NotationEntry {
        NotationEntry {
            symbol: symbol.to_string(),
            kind: NotationKind::FunctorInfix,
            arities: BTreeSet::from([2]),
            priority: Some(priority),
        }
    }

    fn check(&self) -> std::result::Result<(), String> {
        if self.symbol.is_empty() || self.symbol.chars().any(char::is_whitespace) {
            return Err(format!("invalid symbol `{}`", self.symbol));
        }
        if is_keyword(&self.symbol)
            || PUNCTUATION.contains(&self.symbol.as_str())
            || self.symbol.starts_with("::")
        {
            return Err(format!("`{}` is reserved and cannot be declared", self.symbol));
        }
        match self.kind {
            NotationKind::Mode if self.arities.is_empty() => {
                Err(format!("mode `{}` needs at least one arity", self.symbol))
            }
            NotationKind::Predicate | NotationKind::FunctorInfix
                if self.arities != BTreeSet::from([2]) =>
            {
                Err(format!("`{}` must be binary", self.symbol))
            }
            NotationKind::FunctorInfix if self.priority.is_none() => {
                Err(format!("infix functor `{}` needs a priority", self.symbol))
            }
            NotationKind::FunctorPrefix
                if self.arities.len() != 1 || self.arities.contains(&0) =>
            {
                Err(format!("prefix functor `{}` needs exactly one arity >= 1", self.symbol))
            }
            _ => Ok(()),
        }
    }
}

/// Immutable after construction; cheap to share between threads.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NotationTable {
    entries: BTreeMap<(String, NotationKind), NotationEntry>,
    lexemes: Vec<String>,
}

impl Default for NotationTable {
    fn default() -> Self {
        NotationTable::new()
    }
}

impl NotationTable {
    /// A table holding only the builtin mode `set`.
    pub fn new() -> NotationTable {
        let mut entries = BTreeMap::new();
        entries.insert(
            (BUILTIN_MODE.to_string(), NotationKind::Mode),
            NotationEntry::mode(BUILTIN_MODE, [0]),
        );
        NotationTable { entries, lexemes: Vec::new() }
    }

    /// Builds a table from entries, enforcing the same rules as the file loader.
    pub fn from_entries(entries: impl IntoIterator<Item = NotationEntry>) -> Result<NotationTable> {
        let mut table = NotationTable::new();
        for (i, entry) in entries.into_iter().enumerate() {
            table.insert(entry, i as u32 + 1)?;
        }
        table.rebuild_lexemes();
        Ok(table)
    }

    fn insert(&mut self, entry: NotationEntry, line: u32) -> Result<()> {
        entry.check().map_err(|message| Error::Notation { line, message })?;
        let key = (entry.symbol.clone(), entry.kind);
        if self.entries.contains_key(&key) {
            return Err(Error::DuplicateNotation {
                line,
                symbol: entry.symbol,
                kind: entry.kind.to_string(),
            });
        }
        // The only sanctioned cross-kind overloading is mode + prefix functor.
        for (other_kind, _) in self.kinds_of(&entry.symbol) {
            let pair = [other_kind, entry.kind];
            let allowed = pair.contains(&NotationKind::Mode)
                && pair.contains(&NotationKind::FunctorPrefix);
            if !allowed {
                return Err(Error::Notation {
                    line,
                    message: format!(
                        "`{}` is already declared as {other_kind}; it cannot also be {}",
                        entry.symbol, entry.kind
                    ),
                });
            }
        }
        self.entries.insert(key, entry);
        Ok(())
    }

    fn kinds_of<'a>(&'a self, symbol: &'a str) -> impl Iterator<Item = (NotationKind, &'a NotationEntry)> + 'a {
        self.entries
            .range((symbol.to_string(), NotationKind::Mode)..=(symbol.to_string(), NotationKind::FunctorInfix))
            .map(|((_, kind), entry)| (*kind, entry))
    }

    fn rebuild_lexemes(&mut self) {
        let mut lexemes: Vec<String> = self
            .entries
            .keys()
            .map(|(symbol, _)| symbol.clone())
            .filter(|s| s != BUILTIN_MODE)
            .collect();
        lexemes.sort_by(|a, b| lexeme_order(a, b));
        lexemes.dedup();
        self.lexemes = lexemes;
    }

    pub fn entry(&self, symbol: &str, kind: NotationKind) -> Option<&NotationEntry> {
        self.entries.get(&(symbol.to_string(), kind))
    }

    pub fn entries(&self) -> impl Iterator<Item = &NotationEntry> {
        self.entries.values()
    }

    pub fn is_kind(&self, symbol: &str, kind: NotationKind) -> bool {
        self.entry(symbol, kind).is_some()
    }

    pub fn priority(&self, symbol: &str) -> Option<u8> {
        self.entry(symbol, NotationKind::FunctorInfix).and_then(|e| e.priority)
    }

    /// Declared non-builtin symbols in longest-match order.
    pub fn lexemes(&self) -> &[String] {
        &self.lexemes
    }
}

/// Strictly decreasing length (in characters), ties broken lexicographically.
fn lexeme_order(a: &str, b: &str) -> std::cmp::Ordering {
    b.chars().count().cmp(&a.chars().count()).then_with(|| a.cmp(b))
}

impl FromStr for NotationTable {
    type Err = Error;

    fn from_str(source: &str) -> Result<NotationTable> {
        load_notation_table(source)
    }
}

pub fn load_notation_table(source: &str) -> Result<NotationTable> {
    let mut table = NotationTable::new();
    for (idx, raw) in source.lines().enumerate() {
        let line = idx as u32 + 1;
        let text = raw.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let entry = parse_declaration(text).map_err(|message| Error::Notation { line, message })?;
        table.insert(entry, line)?;
    }
    table.rebuild_lexemes();
    Ok(table)
}

fn parse_declaration(text: &str) -> std::result::Result<NotationEntry, String> {
    let fields: Vec<&str> = text.split_whitespace().collect();
    let number = |s: &str| -> std::result::Result<usize, String> {
        s.parse::<usize>().map_err(|_| format!("`{s}` is not a non-negative integer"))
    };
    match fields.as_slice() {
        ["mode", symbol, arities @ ..] if !arities.is_empty() => {
            let mut set = BTreeSet::new();
            for a in arities {
                if !set.insert(number(a)?) {
                    return Err(format!("duplicate arity {a} for mode `{symbol}`"));
                }
            }
            Ok(NotationEntry::mode(symbol, set))
        }
        ["pred", symbol] => Ok(NotationEntry::predicate(symbol)),
        ["func", symbol, "prefix", arity] => Ok(NotationEntry::prefix(symbol, number(arity)?)),
        ["func", symbol, "infix", priority] => {
            let p = number(priority)?;
            let p = u8::try_from(p).map_err(|_| format!("priority {p} outside 0..=255"))?;
            Ok(NotationEntry::infix(symbol, p))
        }
        ["mode", ..] | ["pred", ..] | ["func", ..] => {
            Err(format!("wrong number of fields in `{text}`"))
        }
        [other, ..] => Err(format!("unknown declaration kind `{other}`")),
        [] => unreachable!("blank lines are skipped"),
    }
}

/// Declared arities of `symbol` under `kind`; empty when undeclared.
pub fn lookup(table: &NotationTable, symbol: &str, kind: NotationKind) -> BTreeSet<usize> {
    table.entry(symbol, kind).map(|e| e.arities.clone()).unwrap_or_default()
}

pub fn symbol_lexemes(table: &NotationTable) -> Vec<String> {
    table.lexemes().to_vec()
}

/// The table shipped with the crate (`tables/default.tab`).
pub fn default_table() -> NotationTable {
    load_notation_table(DEFAULT_TABLE_SOURCE).expect("bundled default table is well-formed")
}

pub const DEFAULT_TABLE_SOURCE: &str = include_str!("../tables/default.tab");

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_source_has_only_builtin_set() {
        let t = load_notation_table("").unwrap();
        assert_eq!(t.entries().count(), 1);
        assert_eq!(lookup(&t, "set", NotationKind::Mode), BTreeSet::from([0]));
        assert!(symbol_lexemes(&t).is_empty());
    }

    #[test]
    fn relation_has_three_arities() {
        let t = load_notation_table("mode Relation 0 1 2").unwrap();
        assert_eq!(lookup(&t, "Relation", NotationKind::Mode), BTreeSet::from([0, 1, 2]));
    }

    #[test]
    fn duplicate_mode_is_rejected_by_name() {
        let err = load_notation_table("mode Relation 0\nmode Relation 1").unwrap_err();
        assert!(matches!(&err, Error::DuplicateNotation { symbol, line: 2, .. } if symbol == "Relation"));
        assert!(err.to_string().contains("Relation"));
    }

    #[test]
    fn builtin_set_cannot_be_redeclared() {
        assert!(load_notation_table("mode set 0").is_err());
    }

    #[test]
    fn lookup_of_undeclared_is_empty() {
        let t = NotationTable::new();
        assert!(lookup(&t, "Relation", NotationKind::Mode).is_empty());
        assert!(lookup(&t, "set", NotationKind::Predicate).is_empty());
    }

    #[test]
    fn lexemes_sorted_longest_first() {
        let t = load_notation_table("pred <\npred <=").unwrap();
        assert_eq!(symbol_lexemes(&t), vec!["<=", "<"]);
        let t = load_notation_table("func + infix 3\npred c=\npred =x").unwrap();
        assert_eq!(symbol_lexemes(&t), vec!["=x", "c=", "+"]);
        let t = load_notation_table("func + infix 3\npred c=").unwrap();
        assert_eq!(symbol_lexemes(&t), vec!["c=", "+"]);
    }

    #[test]
    fn malformed_lines_report_line_numbers() {
        let err = load_notation_table("# header\n\nmode Foo x").unwrap_err();
        assert!(matches!(err, Error::Notation { line: 3, .. }));
        let err = load_notation_table("pred").unwrap_err();
        assert!(matches!(err, Error::Notation { line: 1, .. }));
        let err = load_notation_table("func + infix 300").unwrap_err();
        assert!(matches!(err, Error::Notation { line: 1, .. }));
        let err = load_notation_table("func f prefix 0").unwrap_err();
        assert!(matches!(err, Error::Notation { line: 1, .. }));
        let err = load_notation_table("mode M 1 1").unwrap_err();
        assert!(matches!(err, Error::Notation { line: 1, .. }));
        let err = load_notation_table("widget w").unwrap_err();
        assert!(matches!(err, Error::Notation { line: 1, .. }));
    }

    #[test]
    fn keywords_and_punctuation_cannot_be_declared() {
        assert!(load_notation_table("pred for").is_err());
        assert!(load_notation_table("pred &").is_err());
        assert!(load_notation_table("func ; infix 1").is_err());
    }

    #[test]
    fn mode_and_prefix_may_share_a_symbol_but_nothing_else() {
        let t = load_notation_table("mode Seg 1\nfunc Seg prefix 1").unwrap();
        assert!(t.is_kind("Seg", NotationKind::Mode));
        assert!(t.is_kind("Seg", NotationKind::FunctorPrefix));
        assert_eq!(symbol_lexemes(&t), vec!["Seg"]);
        assert!(load_notation_table("pred <=\nfunc <= infix 3").is_err());
    }

    #[test]
    fn bundled_table_loads() {
        let t = default_table();
        assert_eq!(lookup(&t, "Relation", NotationKind::Mode), BTreeSet::from([0, 1, 2]));
        assert_eq!(lookup(&t, "Subset", NotationKind::Mode), BTreeSet::from([1]));
        assert!(t.is_kind("<=", NotationKind::Predicate));
        assert_eq!(t.priority("+"), Some(32));
        assert_eq!(lookup(&t, "dom", NotationKind::FunctorPrefix), BTreeSet::from([1]));
    }
}
