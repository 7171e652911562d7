//! Recursive-descent parser for the Mizar subset.
//!
//! The one genuinely ambiguous construct is a dependent type's argument list:
//! in `reserve P, R for Relation of X, Y;` the trailing `Y` is either the
//! second argument of `Relation` or a third reserved variable. Each mode
//! occurrence followed by `of` is a choice point over its declared arities,
//! tried largest first. Choice points are explored depth-first per item: if
//! the item (up to its `;` or `proof`) fails to parse, the most recent choice
//! point with untried arities is advanced and the item is re-parsed.
//!
//! Grammar (loosest to tightest for formulas):
//!
//! ```text
//! Article     ::= { TextItem }
//! TextItem    ::= Reservation | LetItem | AssumeItem | ThusItem | TheoremItem | Statement
//! Reservation ::= "reserve" IdList "for" TypeExpr { "," IdList "for" TypeExpr } ";"
//! LetItem     ::= "let" IdList "be" TypeExpr { "," IdList "be" TypeExpr } ";"
//! AssumeItem  ::= "assume" [ Label ":" ] Formula ";"
//! Statement   ::= [ "then" ] [ Label ":" ] Formula Justification ";"
//! ThusItem    ::= "thus" [ Label ":" ] Formula Justification ";"
//! TheoremItem ::= "theorem" [ Label ":" ] Formula Justification ";"
//! Justification ::= ε | "by" Label { "," Label } | "proof" { TextItem } "end"
//! TypeExpr    ::= Mode [ "of" Term { "," Term } ] | "(" TypeExpr ")"
//! Formula     ::= Formula "iff" Formula        (right)
//!               | Formula "implies" Formula    (right)
//!               | Formula "or" Formula         (left)
//!               | Formula "&" Formula          (left)
//!               | "not" Formula
//!               | Term "=" Term | Term Pred Term | Term "is" TypeExpr
//!               | "(" Formula ")"
//!               | "for" IdList "being" TypeExpr "holds" Formula
//!               | "ex" IdList "being" TypeExpr "st" Formula
//! Term        ::= Term InfixFunctor Term       (by priority, left)
//!               | Identifier | Numeral | PrefixFunctor "(" Term { "," Term } ")" | "(" Term ")"
//! ```
//!
//! Type arguments inside `reserve` and `let` are restricted to variables and
//! numerals.

use std::collections::HashSet;

use crate::ast::*;
use crate::error::{Error, Pos, Result};
use crate::lexer::{tokenize, Token, TokenKind};
use crate::notation::{lookup, NotationKind, NotationTable, BUILTIN_MODE};

/// Tokenize and parse in one step.
pub fn parse_text(text: &str, table: &NotationTable) -> Result<Article> {
    let tokens = tokenize(text, table)?;
    parse_article(&tokens, table)
}

pub fn parse_article(tokens: &[Token], table: &NotationTable) -> Result<Article> {
    let mut p = Parser::new(tokens, table);
    let items = p.parse_block(false)?;
    Ok(Article { items, source_name: String::new() })
}

/// Resolves the arguments of `mode_symbol` at the start of `suffix`, which
/// must begin with the `of` keyword or with whatever follows a zero-argument
/// type. The enclosing item must be completed by the remaining tokens: the
/// suffix is parsed as the tail of a reservation segment list (`, IdList for
/// Type ...` or `;`). Returns the argument terms and the number of tokens
/// consumed by them (including `of`).
pub fn resolve_type_arguments(
    suffix: &[Token],
    mode_symbol: &str,
    table: &NotationTable,
) -> Result<(Vec<Term>, usize)> {
    let mut tokens = Vec::with_capacity(suffix.len() + 4);
    let anchor = suffix.first().map(|t| t.pos).unwrap_or(Pos::UNKNOWN);
    let synth = |kind, text: &str| Token { kind, text: text.to_string(), pos: anchor };
    tokens.push(synth(TokenKind::Keyword, "reserve"));
    tokens.push(synth(TokenKind::Identifier, "_"));
    tokens.push(synth(TokenKind::Keyword, "for"));
    let mode_kind = if mode_symbol == BUILTIN_MODE { TokenKind::Keyword } else { TokenKind::Symbol };
    tokens.push(synth(mode_kind, mode_symbol));
    tokens.extend_from_slice(suffix);

    let mut p = Parser::new(&tokens, table);
    let item = p.parse_item()?;
    if p.pos != tokens.len() {
        return Err(p.unexpected(&["end of input"]));
    }
    let TextItem::Reservation(segments) = item else { unreachable!("reservation was forced") };
    let args = segments.into_iter().next().expect("at least one segment").ty.args;
    let consumed = if args.is_empty() { 0 } else { 2 * args.len() };
    Ok((args, consumed))
}

struct ChoicePoint {
    options: Vec<usize>,
    taken: usize,
    symbol: String,
    pos: Pos,
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    table: &'a NotationTable,
    forced: Vec<usize>,
    trace: Vec<ChoicePoint>,
}

/// What follows an item header.
enum Tail {
    Done,
    Proof,
}

impl<'a> Parser<'a> {
    fn new(tokens: &'a [Token], table: &'a NotationTable) -> Parser<'a> {
        Parser { tokens, pos: 0, table, forced: Vec::new(), trace: Vec::new() }
    }

    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn peek_at(&self, offset: usize) -> Option<&'a Token> {
        self.tokens.get(self.pos + offset)
    }

    fn here(&self) -> Pos {
        match self.peek() {
            Some(t) => t.pos,
            None => self.tokens.last().map(|t| Pos::new(t.pos.line, t.pos.col + t.text.chars().count() as u32)).unwrap_or(Pos::new(1, 1)),
        }
    }

    fn unexpected(&self, expected: &[&str]) -> Error {
        let found = match self.peek() {
            Some(t) => t.to_string(),
            None => "end of input".to_string(),
        };
        Error::Syntax {
            pos: self.here(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found,
        }
    }

    fn at_keyword(&self, kw: &str) -> bool {
        self.peek().is_some_and(|t| t.is_keyword(kw))
    }

    fn at_punct(&self, p: &str) -> bool {
        self.peek().is_some_and(|t| t.is_punct(p))
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        let hit = self.at_keyword(kw);
        if hit {
            self.pos += 1;
        }
        hit
    }

    fn eat_punct(&mut self, p: &str) -> bool {
        let hit = self.at_punct(p);
        if hit {
            self.pos += 1;
        }
        hit
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<()> {
        if self.eat_keyword(kw) {
            Ok(())
        } else {
            Err(self.unexpected(&[&format!("`{kw}`")]))
        }
    }

    fn expect_punct(&mut self, p: &str) -> Result<()> {
        if self.eat_punct(p) {
            Ok(())
        } else {
            Err(self.unexpected(&[&format!("`{p}`")]))
        }
    }

    fn identifier(&mut self, what: &str) -> Result<Ident> {
        match self.peek() {
            Some(t) if t.kind == TokenKind::Identifier => {
                self.pos += 1;
                Ok(Ident::new(t.text.clone(), t.pos))
            }
            _ => Err(self.unexpected(&[what])),
        }
    }

    fn id_list(&mut self) -> Result<Vec<Ident>> {
        let mut ids = vec![self.identifier("identifier")?];
        while self.at_punct(",") && self.peek_at(1).is_some_and(|t| t.kind == TokenKind::Identifier) {
            self.pos += 1;
            ids.push(self.identifier("identifier")?);
        }
        Ok(ids)
    }

    fn parse_block(&mut self, nested: bool) -> Result<Vec<TextItem>> {
        let mut items = Vec::new();
        let mut labels: HashSet<String> = HashSet::new();
        loop {
            match self.peek() {
                None if nested => return Err(self.unexpected(&["`end`"])),
                None => break,
                Some(t) if nested && t.is_keyword("end") => break,
                Some(_) => {}
            }
            let item = self.parse_item()?;
            if let Some(label) = item.label() {
                if !labels.insert(label.name.clone()) {
                    return Err(Error::DuplicateLabel { pos: label.pos, label: label.name.clone() });
                }
            }
            items.push(item);
        }
        Ok(items)
    }

    /// Parses one item, backtracking over type-arity choices within its header.
    fn parse_item(&mut self) -> Result<TextItem> {
        let start = self.pos;
        let mut forced: Vec<usize> = Vec::new();
        let mut errors: Vec<Error> = Vec::new();
        let mut first_choice: Option<(String, Pos, Vec<usize>)> = None;
        let (mut item, tail) = loop {
            self.pos = start;
            self.forced = std::mem::take(&mut forced);
            self.trace.clear();
            match self.parse_item_header() {
                Ok(ok) => break ok,
                Err(err) => {
                    if first_choice.is_none() {
                        if let Some(cp) = self.trace.first() {
                            first_choice = Some((cp.symbol.clone(), cp.pos, cp.options.clone()));
                        }
                    }
                    errors.push(err);
                    let next = (0..self.trace.len())
                        .rev()
                        .find(|&i| self.trace[i].taken + 1 < self.trace[i].options.len());
                    match next {
                        Some(i) => {
                            forced = self.trace[..i].iter().map(|c| c.taken).collect();
                            forced.push(self.trace[i].taken + 1);
                        }
                        None => return Err(self.give_up(errors, first_choice)),
                    }
                }
            }
        };
        self.trace.clear();
        self.forced.clear();

        if let Tail::Proof = tail {
            let proof_pos = self.tokens[self.pos - 1].pos;
            let body = self.parse_block(true)?;
            if body.is_empty() {
                return Err(Error::EmptyProof { pos: proof_pos });
            }
            self.expect_keyword("end")?;
            self.expect_punct(";")?;
            if let TextItem::Statement(s) = &mut item {
                s.justification = Justification::Proof(body);
            }
        }
        Ok(item)
    }

    fn give_up(&self, mut errors: Vec<Error>, first_choice: Option<(String, Pos, Vec<usize>)>) -> Error {
        let last = errors.pop().expect("at least one failed attempt");
        if errors.iter().all(|e| *e == last) {
            // The failure does not depend on any arity choice.
            if first_choice.is_none() || !matches!(last, Error::Syntax { .. }) {
                return last;
            }
        }
        match first_choice {
            Some((symbol, pos, tried)) => {
                errors.push(last);
                let furthest = errors.iter().max_by_key(|e| e.pos()).expect("non-empty");
                Error::Resolution {
                    pos,
                    symbol,
                    tried,
                    detail: Some(format!("{} at {}", furthest, furthest.pos())),
                }
            }
            None => last,
        }
    }

    fn choose(&mut self, options: Vec<usize>, symbol: &str, pos: Pos) -> usize {
        let idx = self.forced.get(self.trace.len()).copied().unwrap_or(0);
        let k = options[idx];
        self.trace.push(ChoicePoint { options, taken: idx, symbol: symbol.to_string(), pos });
        k
    }

    fn parse_item_header(&mut self) -> Result<(TextItem, Tail)> {
        let Some(tok) = self.peek() else {
            return Err(self.unexpected(&["text item"]));
        };
        if tok.kind == TokenKind::Keyword {
            match tok.text.as_str() {
                "reserve" => {
                    self.pos += 1;
                    let segs = self.segments("for")?;
                    return Ok((TextItem::Reservation(segs), Tail::Done));
                }
                "let" => {
                    self.pos += 1;
                    let segs = self.segments("be")?;
                    return Ok((TextItem::Let(segs), Tail::Done));
                }
                "assume" => {
                    self.pos += 1;
                    let label = self.opt_label()?;
                    let formula = self.formula()?;
                    self.expect_punct(";")?;
                    return Ok((TextItem::Assume { label, formula }, Tail::Done));
                }
                "thus" | "theorem" => {
                    let kind = if tok.text == "thus" { StatementKind::Thus } else { StatementKind::Theorem };
                    self.pos += 1;
                    return self.statement(kind, false);
                }
                "then" => {
                    self.pos += 1;
                    return self.statement(StatementKind::Plain, true);
                }
                _ => {}
            }
        }
        self.statement(StatementKind::Plain, false)
    }

    fn statement(&mut self, kind: StatementKind, then: bool) -> Result<(TextItem, Tail)> {
        let label = self.opt_label()?;
        let formula = self.formula()?;
        let (justification, tail) = if self.eat_keyword("by") {
            let mut refs = vec![self.identifier("label")?];
            while self.eat_punct(",") {
                refs.push(self.identifier("label")?);
            }
            self.expect_punct(";")?;
            (Justification::By(refs), Tail::Done)
        } else if self.eat_keyword("proof") {
            (Justification::None, Tail::Proof)
        } else if self.eat_punct(";") {
            (Justification::None, Tail::Done)
        } else {
            return Err(self.unexpected(&["`by`", "`proof`", "`;`"]));
        };
        let st = Statement { kind, then, label, formula, justification };
        Ok((TextItem::Statement(st), tail))
    }

    fn opt_label(&mut self) -> Result<Option<Ident>> {
        let is_label = self.peek().is_some_and(|t| t.kind == TokenKind::Identifier)
            && self.peek_at(1).is_some_and(|t| t.is_punct(":"));
        if !is_label {
            return Ok(None);
        }
        let id = self.identifier("label")?;
        self.pos += 1;
        Ok(Some(id))
    }

    fn segments(&mut self, binder: &str) -> Result<Vec<Segment>> {
        let mut segs = Vec::new();
        loop {
            let vars = self.id_list()?;
            self.expect_keyword(binder)?;
            let ty = self.type_expr(true)?;
            segs.push(Segment { vars, ty });
            if self.eat_punct(";") {
                return Ok(segs);
            }
            if !self.eat_punct(",") {
                return Err(self.unexpected(&["`,`", "`;`"]));
            }
        }
    }

    fn type_expr(&mut self, restricted: bool) -> Result<TypeExpr> {
        if self.eat_punct("(") {
            let ty = self.type_expr(restricted)?;
            self.expect_punct(")")?;
            return Ok(ty);
        }
        let tok = match self.peek() {
            Some(t) if t.is_keyword(BUILTIN_MODE) => t,
            Some(t) if t.kind == TokenKind::Symbol => {
                if !self.table.is_kind(&t.text, NotationKind::Mode) {
                    return Err(Error::UndeclaredMode { pos: t.pos, symbol: t.text.clone() });
                }
                t
            }
            Some(t) if t.kind == TokenKind::Identifier => {
                return Err(Error::UndeclaredMode { pos: t.pos, symbol: t.text.clone() });
            }
            _ => return Err(self.unexpected(&["mode"])),
        };
        self.pos += 1;
        let arities = lookup(self.table, &tok.text, NotationKind::Mode);
        let has_of = self.at_keyword("of");
        let options: Vec<usize> = if has_of {
            arities.iter().rev().copied().filter(|&k| k >= 1).collect()
        } else {
            arities.iter().copied().filter(|&k| k == 0).collect()
        };
        if options.is_empty() {
            let detail = if has_of {
                "mode takes no arguments but `of` follows"
            } else {
                "mode requires arguments but no `of` follows"
            };
            return Err(Error::Resolution {
                pos: tok.pos,
                symbol: tok.text.clone(),
                tried: Vec::new(),
                detail: Some(detail.to_string()),
            });
        }
        let k = self.choose(options, &tok.text, tok.pos);
        let mut args = Vec::with_capacity(k);
        if k > 0 {
            self.pos += 1; // `of`
            for i in 0..k {
                if i > 0 {
                    self.expect_punct(",")?;
                }
                args.push(if restricted { self.simple_term()? } else { self.term()? });
            }
        }
        Ok(TypeExpr { mode: tok.text.clone(), args, pos: tok.pos })
    }

    fn formula(&mut self) -> Result<Formula> {
        let left = self.implies_level()?;
        if self.eat_keyword("iff") {
            let right = self.formula()?;
            return Ok(Formula::binary(BinaryOp::Iff, left, right));
        }
        Ok(left)
    }

    fn implies_level(&mut self) -> Result<Formula> {
        let left = self.or_level()?;
        if self.eat_keyword("implies") {
            let right = self.implies_level()?;
            return Ok(Formula::binary(BinaryOp::Implies, left, right));
        }
        Ok(left)
    }

    fn or_level(&mut self) -> Result<Formula> {
        let mut left = self.and_level()?;
        while self.eat_keyword("or") {
            let right = self.and_level()?;
            left = Formula::binary(BinaryOp::Or, left, right);
        }
        Ok(left)
    }

    fn and_level(&mut self) -> Result<Formula> {
        let mut left = self.unary()?;
        while self.eat_keyword("&") {
            let right = self.unary()?;
            left = Formula::binary(BinaryOp::And, left, right);
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Formula> {
        if self.eat_keyword("not") {
            return Ok(Formula::negate(self.unary()?));
        }
        self.atomic()
    }

    fn atomic(&mut self) -> Result<Formula> {
        if self.at_keyword("for") || self.at_keyword("ex") {
            let quantifier =
                if self.at_keyword("for") { Quantifier::ForAll } else { Quantifier::Exists };
            self.pos += 1;
            let vars = self.id_list()?;
            self.expect_keyword("being")?;
            let ty = self.type_expr(false)?;
            self.expect_keyword(quantifier.body_keyword())?;
            let body = self.formula()?;
            return Ok(Formula::Quantified { quantifier, vars, ty, body: Box::new(body) });
        }
        if self.at_punct("(") && self.paren_is_formula(self.pos) {
            self.pos += 1;
            let f = self.formula()?;
            self.expect_punct(")")?;
            return Ok(f);
        }
        let left = self.term()?;
        if self.eat_keyword("=") {
            let right = self.term()?;
            return Ok(Formula::Eq { left, right });
        }
        if self.eat_keyword("is") {
            let ty = self.type_expr(false)?;
            return Ok(Formula::Is { term: left, ty });
        }
        match self.peek() {
            Some(t) if t.kind == TokenKind::Symbol && self.table.is_kind(&t.text, NotationKind::Predicate) => {
                self.pos += 1;
                let right = self.term()?;
                Ok(Formula::Pred { symbol: t.text.clone(), left, right, pos: t.pos })
            }
            _ => Err(self.unexpected(&["`=`", "`is`", "predicate"])),
        }
    }

    fn is_formula_token(&self, t: &Token) -> bool {
        match t.kind {
            TokenKind::Keyword => matches!(
                t.text.as_str(),
                "=" | "is" | "&" | "or" | "implies" | "iff" | "not" | "for" | "ex" | "holds" | "st" | "being"
            ),
            TokenKind::Symbol => self.table.is_kind(&t.text, NotationKind::Predicate),
            _ => false,
        }
    }

    /// Whether the parenthesis at `open` encloses a formula rather than a term.
    /// Terms never contain formula-level tokens at their own nesting depth.
    fn paren_is_formula(&self, open: usize) -> bool {
        let Some(close) = self.matching_paren(open) else { return false };
        let mut depth = 0usize;
        for t in &self.tokens[open + 1..close] {
            if t.is_punct("(") {
                depth += 1;
            } else if t.is_punct(")") {
                depth -= 1;
            } else if depth == 0 && self.is_formula_token(t) {
                return true;
            }
        }
        if close > open + 1 && self.tokens[open + 1].is_punct("(") && self.matching_paren(open + 1) == Some(close - 1) {
            return self.paren_is_formula(open + 1);
        }
        false
    }

    fn matching_paren(&self, open: usize) -> Option<usize> {
        let mut depth = 0usize;
        for (i, t) in self.tokens.iter().enumerate().skip(open) {
            if t.is_punct("(") {
                depth += 1;
            } else if t.is_punct(")") {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            } else if t.is_punct(";") {
                return None;
            }
        }
        None
    }

    fn term(&mut self) -> Result<Term> {
        self.climb(0)
    }

    fn climb(&mut self, min_priority: u16) -> Result<Term> {
        let mut left = self.primary()?;
        while let Some(t) = self.peek() {
            let Some(p) = (t.kind == TokenKind::Symbol).then(|| self.table.priority(&t.text)).flatten() else {
                break;
            };
            if u16::from(p) < min_priority {
                break;
            }
            self.pos += 1;
            let right = self.climb(u16::from(p) + 1)?;
            left = Term::Infix { functor: t.text.clone(), left: Box::new(left), right: Box::new(right), pos: t.pos };
        }
        Ok(left)
    }

    fn simple_term(&mut self) -> Result<Term> {
        match self.peek() {
            Some(t) if t.kind == TokenKind::Identifier => {
                self.pos += 1;
                Ok(Term::Var(Ident::new(t.text.clone(), t.pos)))
            }
            Some(t) if t.kind == TokenKind::Numeral => {
                self.pos += 1;
                Ok(Term::Numeral { value: t.text.clone(), pos: t.pos })
            }
            _ => Err(self.unexpected(&["variable", "numeral"])),
        }
    }

    fn primary(&mut self) -> Result<Term> {
        match self.peek() {
            Some(t) if matches!(t.kind, TokenKind::Identifier | TokenKind::Numeral) => self.simple_term(),
            Some(t) if t.kind == TokenKind::Symbol && self.table.is_kind(&t.text, NotationKind::FunctorPrefix) => {
                let arity = *lookup(self.table, &t.text, NotationKind::FunctorPrefix)
                    .iter()
                    .next()
                    .expect("prefix functors have one arity");
                self.pos += 1;
                self.expect_punct("(")?;
                let mut args = Vec::with_capacity(arity);
                for i in 0..arity {
                    if i > 0 {
                        self.expect_punct(",")?;
                    }
                    args.push(self.term()?);
                }
                self.expect_punct(")")?;
                Ok(Term::Prefix { functor: t.text.clone(), args, pos: t.pos })
            }
            Some(t) if t.is_punct("(") => {
                self.pos += 1;
                let inner = self.term()?;
                self.expect_punct(")")?;
                Ok(inner)
            }
            _ => Err(self.unexpected(&["term"])),
        }
    }
}
