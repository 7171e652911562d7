//! Brute-force reference for arity resolution in `reserve` and `let` items.
//!
//! The oracle never looks at the parser. It tries every arity vector in
//! `S^m` (one entry per occurrence of the mode `M`) and replays the item
//! deterministically under that choice; the answer is the largest vector in
//! lexicographic order that consumes the whole item.

use std::collections::BTreeSet;

use rand::seq::IndexedRandom;
use rand::Rng;

use strictmiz::ast::{Article, TextItem};

pub const MODE: &str = "M";
const IDS: [&str; 6] = ["a", "b", "c", "d", "e", "f"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Id(String),
    Comma,
    Bind,
    Of,
    Set,
    Mode,
}

#[derive(Clone, Debug)]
pub struct Case {
    pub keyword: &'static str,
    pub tokens: Vec<Tok>,
    pub arities: BTreeSet<usize>,
}

impl Case {
    pub fn text(&self) -> String {
        let bind = if self.keyword == "let" { "be" } else { "for" };
        let mut out = String::from(self.keyword);
        for t in &self.tokens {
            out.push(' ');
            out.push_str(match t {
                Tok::Id(s) => s,
                Tok::Comma => ",",
                Tok::Bind => bind,
                Tok::Of => "of",
                Tok::Set => "set",
                Tok::Mode => MODE,
            });
        }
        out.push_str(" ;");
        out
    }

    pub fn table_source(&self) -> String {
        let list: Vec<String> = self.arities.iter().map(|a| a.to_string()).collect();
        format!("mode {MODE} {}\n", list.join(" "))
    }

    pub fn expected(&self) -> Option<Vec<usize>> {
        resolve(&self.tokens, &self.arities)
    }
}

/// Random item: 1 to 3 segments, at most 3 uses of `M`, at most 6
/// identifiers after `of`, arity set a non-empty subset of {0, 1, 2, 3}.
pub fn random_case<R: Rng>(rng: &mut R) -> Case {
    let keyword = if rng.random_bool(0.5) { "reserve" } else { "let" };
    let arities: BTreeSet<usize> = loop {
        let s: BTreeSet<usize> = (0..4).filter(|_| rng.random_bool(0.5)).collect();
        if !s.is_empty() {
            break s;
        }
    };
    let mut tokens = Vec::new();
    let mut modes = 0;
    let mut trailing = 6;
    for seg in 0..rng.random_range(1..=3) {
        if seg > 0 {
            tokens.push(Tok::Comma);
        }
        let n = rng.random_range(1..=2);
        ids(rng, &mut tokens, n);
        tokens.push(Tok::Bind);
        if modes == 3 || rng.random_bool(0.2) {
            tokens.push(Tok::Set);
            continue;
        }
        modes += 1;
        tokens.push(Tok::Mode);
        if trailing > 0 && rng.random_bool(0.75) {
            let n = rng.random_range(1..=3).min(trailing);
            trailing -= n;
            tokens.push(Tok::Of);
            ids(rng, &mut tokens, n);
        }
    }
    Case { keyword, tokens, arities }
}

fn ids<R: Rng>(rng: &mut R, tokens: &mut Vec<Tok>, n: usize) {
    for i in 0..n {
        if i > 0 {
            tokens.push(Tok::Comma);
        }
        tokens.push(Tok::Id(IDS.choose(rng).unwrap().to_string()));
    }
}

pub fn resolve(tokens: &[Tok], arities: &BTreeSet<usize>) -> Option<Vec<usize>> {
    let m = tokens.iter().filter(|t| **t == Tok::Mode).count();
    let choices: Vec<usize> = arities.iter().copied().collect();
    let mut best: Option<Vec<usize>> = None;
    let total = choices.len().pow(m as u32);
    for code in 0..total {
        let mut c = code;
        let mut vector = vec![0; m];
        for slot in vector.iter_mut().rev() {
            *slot = choices[c % choices.len()];
            c /= choices.len();
        }
        if replay(tokens, &vector) && best.as_ref().is_none_or(|b| vector > *b) {
            best = Some(vector);
        }
    }
    best
}

/// Deterministic reading of the item with every arity fixed in advance.
fn replay(tokens: &[Tok], vector: &[usize]) -> bool {
    let mut i = 0;
    let mut next_arity = vector.iter();
    let id = |i: usize| matches!(tokens.get(i), Some(Tok::Id(_)));
    loop {
        if !id(i) {
            return false;
        }
        i += 1;
        while tokens.get(i) == Some(&Tok::Comma) && id(i + 1) {
            i += 2;
        }
        if tokens.get(i) != Some(&Tok::Bind) {
            return false;
        }
        i += 1;
        match tokens.get(i) {
            Some(Tok::Set) => i += 1,
            Some(Tok::Mode) => {
                i += 1;
                let k = *next_arity.next().expect("one arity per mode");
                if k > 0 {
                    if tokens.get(i) != Some(&Tok::Of) || !id(i + 1) {
                        return false;
                    }
                    i += 2;
                    for _ in 1..k {
                        if tokens.get(i) != Some(&Tok::Comma) || !id(i + 1) {
                            return false;
                        }
                        i += 2;
                    }
                }
            }
            _ => return false,
        }
        match tokens.get(i) {
            None => return next_arity.next().is_none(),
            Some(Tok::Comma) => i += 1,
            Some(_) => return false,
        }
    }
}

/// Arities the parser chose for `M`, in source order.
pub fn observed(article: &Article) -> Vec<usize> {
    let mut out = Vec::new();
    for item in &article.items {
        if let TextItem::Reservation(segs) | TextItem::Let(segs) = item {
            out.extend(segs.iter().filter(|s| s.ty.mode == MODE).map(|s| s.ty.args.len()));
        }
    }
    out
}
