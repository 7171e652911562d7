//! Weakly strict form: every notation disambiguated by parentheses, one item
//! per line, tokens separated by exactly one space.
//!
//! Parenthesized: every type with arguments `( Relation of X , Y )`, every
//! infix application `( X + Y )` and every compound or atomic formula
//! `( X = Y )`, `( not ( X = Y ) )`, `( for x being set holds ( x = x ) )`.
//! A proof occupies a header line ending in `proof`, its body lines, and
//! `end ;`.
//!
//! Because of this shape, [`parse_wsm`] needs no notation table: a token
//! followed by a parenthesized group is a prefix functor, the token after an
//! operand inside a group is an operator, and a group's operator decides
//! whether its operands are terms or formulas.

use std::collections::HashSet;

use crate::ast::*;
use crate::error::{Error, Pos, Result};
use crate::lexer::{is_identifier, is_keyword, is_numeral, PUNCTUATION};
use crate::notation::BUILTIN_MODE;

pub fn to_wsm(article: &Article) -> String {
    let mut out = String::new();
    for item in &article.items {
        emit_item(item, &mut out);
    }
    out
}

fn push_line(out: &mut String, tokens: &[String]) {
    out.push_str(&tokens.join(" "));
    out.push('\n');
}

fn emit_item(item: &TextItem, out: &mut String) {
    let mut toks: Vec<String> = Vec::new();
    match item {
        TextItem::Reservation(segs) | TextItem::Let(segs) => {
            let (head, binder) = match item {
                TextItem::Reservation(_) => ("reserve", "for"),
                _ => ("let", "be"),
            };
            toks.push(head.into());
            for (i, seg) in segs.iter().enumerate() {
                if i > 0 {
                    toks.push(",".into());
                }
                ident_list(&seg.vars, &mut toks);
                toks.push(binder.into());
                type_tokens(&seg.ty, &mut toks);
            }
            toks.push(";".into());
        }
        TextItem::Assume { label, formula } => {
            toks.push("assume".into());
            label_tokens(label.as_ref(), &mut toks);
            formula_tokens(formula, &mut toks);
            toks.push(";".into());
        }
        TextItem::Statement(s) => {
            if s.then {
                toks.push("then".into());
            }
            match s.kind {
                StatementKind::Plain => {}
                StatementKind::Thus => toks.push("thus".into()),
                StatementKind::Theorem => toks.push("theorem".into()),
            }
            label_tokens(s.label.as_ref(), &mut toks);
            formula_tokens(&s.formula, &mut toks);
            match &s.justification {
                Justification::None => toks.push(";".into()),
                Justification::By(refs) => {
                    toks.push("by".into());
                    ident_list(refs, &mut toks);
                    toks.push(";".into());
                }
                Justification::Proof(body) => {
                    toks.push("proof".into());
                    push_line(out, &toks);
                    for inner in body {
                        emit_item(inner, out);
                    }
                    push_line(out, &["end".into(), ";".into()]);
                    return;
                }
            }
        }
    }
    push_line(out, &toks);
}

fn label_tokens(label: Option<&Ident>, toks: &mut Vec<String>) {
    if let Some(l) = label {
        toks.push(l.name.clone());
        toks.push(":".into());
    }
}

fn ident_list(ids: &[Ident], toks: &mut Vec<String>) {
    for (i, id) in ids.iter().enumerate() {
        if i > 0 {
            toks.push(",".into());
        }
        toks.push(id.name.clone());
    }
}

fn type_tokens(ty: &TypeExpr, toks: &mut Vec<String>) {
    if ty.args.is_empty() {
        toks.push(ty.mode.clone());
        return;
    }
    toks.push("(".into());
    toks.push(ty.mode.clone());
    toks.push("of".into());
    term_list(&ty.args, toks);
    toks.push(")".into());
}

fn term_list(terms: &[Term], toks: &mut Vec<String>) {
    for (i, t) in terms.iter().enumerate() {
        if i > 0 {
            toks.push(",".into());
        }
        term_tokens(t, toks);
    }
}

fn term_tokens(t: &Term, toks: &mut Vec<String>) {
    match t {
        Term::Var(id) => toks.push(id.name.clone()),
        Term::Numeral { value, .. } => toks.push(value.clone()),
        Term::Prefix { functor, args, .. } => {
            toks.push(functor.clone());
            toks.push("(".into());
            term_list(args, toks);
            toks.push(")".into());
        }
        Term::Infix { functor, left, right, .. } => {
            toks.push("(".into());
            term_tokens(left, toks);
            toks.push(functor.clone());
            term_tokens(right, toks);
            toks.push(")".into());
        }
    }
}

fn formula_tokens(f: &Formula, toks: &mut Vec<String>) {
    toks.push("(".into());
    match f {
        Formula::Pred { symbol, left, right, .. } => {
            term_tokens(left, toks);
            toks.push(symbol.clone());
            term_tokens(right, toks);
        }
        Formula::Eq { left, right } => {
            term_tokens(left, toks);
            toks.push("=".into());
            term_tokens(right, toks);
        }
        Formula::Is { term, ty } => {
            term_tokens(term, toks);
            toks.push("is".into());
            type_tokens(ty, toks);
        }
        Formula::Not(inner) => {
            toks.push("not".into());
            formula_tokens(inner, toks);
        }
        Formula::Binary { op, left, right } => {
            formula_tokens(left, toks);
            toks.push(op.keyword().into());
            formula_tokens(right, toks);
        }
        Formula::Quantified { quantifier, vars, ty, body } => {
            toks.push(quantifier.keyword().into());
            ident_list(vars, toks);
            toks.push("being".into());
            type_tokens(ty, toks);
            toks.push(quantifier.body_keyword().into());
            formula_tokens(body, toks);
        }
    }
    toks.push(")".into());
}

/// True iff `text` parses as WSM and re-emits byte-identically.
pub fn is_wsm(text: &str) -> bool {
    match parse_wsm(text) {
        Ok(article) => to_wsm(&article) == text,
        Err(_) => false,
    }
}

#[derive(Debug)]
enum Node<'t> {
    Tok(&'t str, Pos),
    Group(Vec<Node<'t>>, Pos),
}

impl<'t> Node<'t> {
    fn tok(&self) -> Option<&'t str> {
        match self {
            Node::Tok(t, _) => Some(t),
            Node::Group(..) => None,
        }
    }

    fn pos(&self) -> Pos {
        match self {
            Node::Tok(_, p) | Node::Group(_, p) => *p,
        }
    }
}

struct Frame {
    header: Option<Statement>,
    items: Vec<TextItem>,
    labels: HashSet<String>,
}

/// Reconstructs an article from WSM text without consulting any notation table.
pub fn parse_wsm(text: &str) -> Result<Article> {
    let mut stack = vec![Frame { header: None, items: Vec::new(), labels: HashSet::new() }];
    let mut last_line = 0u32;
    for (idx, raw) in text.split_terminator('\n').enumerate() {
        let line = idx as u32 + 1;
        last_line = line;
        let tokens = split_line(raw, line)?;
        let nodes = group(&tokens, line)?;
        let mut cur = Cursor { nodes: &nodes, at: 0, line };

        if cur.peek_tok() == Some("end") {
            cur.at += 1;
            cur.expect_tok(";")?;
            cur.finish()?;
            if stack.len() == 1 {
                return Err(wsm_err(line, "`end` without an open proof"));
            }
            let frame = stack.pop().expect("nested frame");
            if frame.items.is_empty() {
                return Err(Error::EmptyProof { pos: Pos::new(line, 1) });
            }
            let mut header = frame.header.expect("nested frames carry a header");
            header.justification = Justification::Proof(frame.items);
            add_item(stack.last_mut().expect("root frame"), TextItem::Statement(header))?;
            continue;
        }

        let (item, opens_proof) = cur.item()?;
        cur.finish()?;
        if opens_proof {
            let TextItem::Statement(header) = item else { unreachable!("only statements open proofs") };
            if let Some(l) = &header.label {
                let frame = stack.last().expect("root frame");
                if frame.labels.contains(&l.name) {
                    return Err(Error::DuplicateLabel { pos: l.pos, label: l.name.clone() });
                }
            }
            stack.push(Frame { header: Some(header), items: Vec::new(), labels: HashSet::new() });
        } else {
            add_item(stack.last_mut().expect("root frame"), item)?;
        }
    }
    if stack.len() > 1 {
        return Err(wsm_err(last_line, "proof not closed by `end ;`"));
    }
    let root = stack.pop().expect("root frame");
    Ok(Article { items: root.items, source_name: String::new() })
}

fn add_item(frame: &mut Frame, item: TextItem) -> Result<()> {
    if let Some(l) = item.label() {
        if !frame.labels.insert(l.name.clone()) {
            return Err(Error::DuplicateLabel { pos: l.pos, label: l.name.clone() });
        }
    }
    frame.items.push(item);
    Ok(())
}

fn wsm_err(line: u32, message: impl Into<String>) -> Error {
    Error::WsmFormat { line, message: message.into() }
}

fn split_line(raw: &str, line: u32) -> Result<Vec<(&str, Pos)>> {
    if raw.is_empty() {
        return Err(wsm_err(line, "blank line"));
    }
    let mut out = Vec::new();
    let mut col = 1u32;
    for tok in raw.split(' ') {
        if tok.is_empty() {
            return Err(wsm_err(line, "tokens must be separated by exactly one space"));
        }
        if tok.chars().any(char::is_whitespace) {
            return Err(wsm_err(line, "only single spaces may separate tokens"));
        }
        out.push((tok, Pos::new(line, col)));
        col += tok.chars().count() as u32 + 1;
    }
    Ok(out)
}

fn group<'t>(tokens: &[(&'t str, Pos)], line: u32) -> Result<Vec<Node<'t>>> {
    let mut stack: Vec<(Vec<Node<'t>>, Pos)> = vec![(Vec::new(), Pos::new(line, 1))];
    for &(tok, pos) in tokens {
        match tok {
            "(" => stack.push((Vec::new(), pos)),
            ")" => {
                if stack.len() == 1 {
                    return Err(wsm_err(line, "unbalanced `)`"));
                }
                let (items, open) = stack.pop().expect("checked depth");
                stack.last_mut().expect("outer level").0.push(Node::Group(items, open));
            }
            _ => stack.last_mut().expect("outer level").0.push(Node::Tok(tok, pos)),
        }
    }
    if stack.len() != 1 {
        return Err(wsm_err(line, "unbalanced `(`"));
    }
    Ok(stack.pop().expect("outer level").0)
}

fn is_symbol(tok: &str) -> bool {
    !is_keyword(tok) && !PUNCTUATION.contains(&tok)
}

struct Cursor<'n, 't> {
    nodes: &'n [Node<'t>],
    at: usize,
    line: u32,
}

impl<'n, 't> Cursor<'n, 't> {
    fn err(&self, message: impl Into<String>) -> Error {
        wsm_err(self.line, message)
    }

    fn peek(&self) -> Option<&'n Node<'t>> {
        self.nodes.get(self.at)
    }

    fn peek_tok(&self) -> Option<&'t str> {
        self.peek().and_then(Node::tok)
    }

    fn next(&mut self) -> Option<&'n Node<'t>> {
        let n = self.nodes.get(self.at);
        if n.is_some() {
            self.at += 1;
        }
        n
    }

    fn eat_tok(&mut self, t: &str) -> bool {
        let hit = self.peek_tok() == Some(t);
        if hit {
            self.at += 1;
        }
        hit
    }

    fn expect_tok(&mut self, t: &str) -> Result<()> {
        if self.eat_tok(t) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{t}`, found {}", self.describe())))
        }
    }

    fn describe(&self) -> String {
        match self.peek() {
            Some(Node::Tok(t, _)) => format!("`{t}`"),
            Some(Node::Group(..)) => "a parenthesized group".to_string(),
            None => "end of line".to_string(),
        }
    }

    fn finish(&self) -> Result<()> {
        if self.at == self.nodes.len() {
            Ok(())
        } else {
            Err(self.err(format!("unexpected {} (one item per line)", self.describe())))
        }
    }

    fn ident(&mut self, what: &str) -> Result<Ident> {
        match self.next() {
            Some(Node::Tok(t, pos)) if is_identifier(t) => Ok(Ident::new(*t, *pos)),
            _ => {
                self.at = self.at.saturating_sub(1);
                Err(self.err(format!("expected {what}, found {}", self.describe())))
            }
        }
    }

    fn ident_list(&mut self) -> Result<Vec<Ident>> {
        let mut ids = vec![self.ident("identifier")?];
        while self.eat_tok(",") {
            ids.push(self.ident("identifier")?);
        }
        Ok(ids)
    }

    fn opt_label(&mut self) -> Result<Option<Ident>> {
        let is_label = matches!(self.peek(), Some(Node::Tok(t, _)) if is_identifier(t))
            && self.nodes.get(self.at + 1).and_then(Node::tok) == Some(":");
        if !is_label {
            return Ok(None);
        }
        let l = self.ident("label")?;
        self.at += 1;
        Ok(Some(l))
    }

    fn item(&mut self) -> Result<(TextItem, bool)> {
        match self.peek_tok() {
            Some("reserve") | Some("let") => {
                let reserve = self.peek_tok() == Some("reserve");
                self.at += 1;
                let binder = if reserve { "for" } else { "be" };
                let mut segs = Vec::new();
                loop {
                    let vars = self.ident_list()?;
                    self.expect_tok(binder)?;
                    let ty = self.type_unit()?;
                    segs.push(Segment { vars, ty });
                    if self.eat_tok(";") {
                        break;
                    }
                    self.expect_tok(",")?;
                }
                let item = if reserve { TextItem::Reservation(segs) } else { TextItem::Let(segs) };
                Ok((item, false))
            }
            Some("assume") => {
                self.at += 1;
                let label = self.opt_label()?;
                let formula = self.formula_unit()?;
                self.expect_tok(";")?;
                Ok((TextItem::Assume { label, formula }, false))
            }
            _ => {
                let then = self.eat_tok("then");
                let kind = if self.eat_tok("thus") {
                    StatementKind::Thus
                } else if self.eat_tok("theorem") {
                    StatementKind::Theorem
                } else {
                    StatementKind::Plain
                };
                if then && kind != StatementKind::Plain {
                    return Err(self.err("`then` may only precede a plain statement"));
                }
                let label = self.opt_label()?;
                let formula = self.formula_unit()?;
                let (justification, proof) = if self.eat_tok("by") {
                    let refs = self.ident_list()?;
                    self.expect_tok(";")?;
                    (Justification::By(refs), false)
                } else if self.eat_tok("proof") {
                    (Justification::None, true)
                } else {
                    self.expect_tok(";")?;
                    (Justification::None, false)
                };
                let st = Statement { kind, then, label, formula, justification };
                Ok((TextItem::Statement(st), proof))
            }
        }
    }

    fn sub<'m>(&self, nodes: &'m [Node<'t>]) -> Cursor<'m, 't> {
        Cursor { nodes, at: 0, line: self.line }
    }

    fn formula_unit(&mut self) -> Result<Formula> {
        match self.next() {
            Some(Node::Group(items, _)) => {
                let mut inner = self.sub(items);
                let f = inner.formula_body()?;
                inner.finish()?;
                Ok(f)
            }
            _ => {
                self.at = self.at.saturating_sub(1);
                Err(self.err(format!("expected parenthesized formula, found {}", self.describe())))
            }
        }
    }

    /// Contents of a formula group.
    fn formula_body(&mut self) -> Result<Formula> {
        if self.eat_tok("not") {
            return Ok(Formula::negate(self.formula_unit()?));
        }
        if let Some(q @ ("for" | "ex")) = self.peek_tok() {
            let quantifier = if q == "for" { Quantifier::ForAll } else { Quantifier::Exists };
            self.at += 1;
            let vars = self.ident_list()?;
            self.expect_tok("being")?;
            let ty = self.type_unit()?;
            self.expect_tok(quantifier.body_keyword())?;
            let body = self.formula_unit()?;
            return Ok(Formula::Quantified { quantifier, vars, ty, body: Box::new(body) });
        }
        // Binary shape: operand, operator, operand. Locate the operator first.
        let left_len = self.operand_len();
        let op_at = self.at + left_len;
        let Some(op_node) = self.nodes.get(op_at) else {
            return Err(self.err("expected an operator inside formula parentheses"));
        };
        let Some(op) = op_node.tok() else {
            return Err(self.err("expected an operator inside formula parentheses"));
        };
        if let Some(bin) = BinaryOp::from_keyword(op) {
            let left = self.formula_unit()?;
            self.at += 1;
            let right = self.formula_unit()?;
            return Ok(Formula::binary(bin, left, right));
        }
        let left = self.term()?;
        self.at += 1;
        match op {
            "=" => Ok(Formula::Eq { left, right: self.term()? }),
            "is" => Ok(Formula::Is { term: left, ty: self.type_unit()? }),
            sym if is_symbol(sym) => {
                let right = self.term()?;
                Ok(Formula::Pred { symbol: sym.to_string(), left, right, pos: op_node.pos() })
            }
            other => Err(self.err(format!("`{other}` is not a formula operator"))),
        }
    }

    /// Number of nodes making up the operand at the cursor.
    fn operand_len(&self) -> usize {
        match (self.peek(), self.nodes.get(self.at + 1)) {
            (Some(Node::Tok(..)), Some(Node::Group(..))) => 2,
            (Some(_), _) => 1,
            (None, _) => 0,
        }
    }

    fn term(&mut self) -> Result<Term> {
        match self.next() {
            Some(Node::Tok(t, pos)) => {
                if let Some(Node::Group(items, _)) = self.peek() {
                    if !is_symbol(t) {
                        return Err(self.err(format!("`{t}` cannot be a functor")));
                    }
                    self.at += 1;
                    let args = self.sub(items).term_list()?;
                    return Ok(Term::Prefix { functor: t.to_string(), args, pos: *pos });
                }
                if is_numeral(t) {
                    Ok(Term::Numeral { value: t.to_string(), pos: *pos })
                } else if is_identifier(t) {
                    Ok(Term::Var(Ident::new(*t, *pos)))
                } else {
                    Err(self.err(format!("`{t}` is not a term")))
                }
            }
            Some(Node::Group(items, _)) => {
                let mut inner = self.sub(items);
                let left = inner.term()?;
                let (functor, pos) = match inner.next() {
                    Some(Node::Tok(t, pos)) if is_symbol(t) => (t.to_string(), *pos),
                    _ => return Err(self.err("expected infix functor inside term parentheses")),
                };
                let right = inner.term()?;
                inner.finish()?;
                Ok(Term::Infix { functor, left: Box::new(left), right: Box::new(right), pos })
            }
            None => Err(self.err("expected term, found end of line")),
        }
    }

    fn term_list(&mut self) -> Result<Vec<Term>> {
        let mut terms = vec![self.term()?];
        while self.eat_tok(",") {
            terms.push(self.term()?);
        }
        self.finish()?;
        Ok(terms)
    }

    fn type_unit(&mut self) -> Result<TypeExpr> {
        match self.next() {
            Some(Node::Tok(t, pos)) if *t == BUILTIN_MODE || is_symbol(t) => {
                Ok(TypeExpr { mode: t.to_string(), args: Vec::new(), pos: *pos })
            }
            Some(Node::Group(items, _)) => {
                let mut inner = self.sub(items);
                let (mode, pos) = match inner.next() {
                    Some(Node::Tok(t, pos)) if is_symbol(t) => (t.to_string(), *pos),
                    _ => return Err(self.err("expected mode symbol inside type parentheses")),
                };
                inner.expect_tok("of")?;
                let args = inner.term_list()?;
                Ok(TypeExpr { mode, args, pos })
            }
            _ => {
                self.at = self.at.saturating_sub(1);
                Err(self.err(format!("expected type, found {}", self.describe())))
            }
        }
    }
}
