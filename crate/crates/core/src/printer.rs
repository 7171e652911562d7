//! Human-oriented layout with minimal parentheses.
//!
//! Parentheses follow from precedence: formulas `iff` < `implies` < `or` <
//! `&` < `not` < atomic, infix functors by declared priority (left
//! associative). A quantifier needs parentheses whenever anything follows it,
//! since its body extends as far right as possible. Type expressions in
//! `reserve`/`let` segments are the one place where precedence is not enough:
//! arity backtracking may regroup a bare `Relation of X, Y`, so those items are
//! re-parsed and parenthesized only where the reading would otherwise change.
//!
//! Long items wrap before `by`, then before connectives (outermost first),
//! then between a quantifier's header and its body. Continuation lines are
//! indented one extra level.

use crate::ast::*;
use crate::notation::NotationTable;
use crate::parser::parse_text;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrintConfig {
    pub max_width: usize,
    pub indent: usize,
}

impl PrintConfig {
    pub const MIN_WIDTH: usize = 20;

    /// `None` unless `max_width >= 20` and `indent >= 1`.
    pub fn new(max_width: usize, indent: usize) -> Option<PrintConfig> {
        (max_width >= Self::MIN_WIDTH && indent >= 1).then_some(PrintConfig { max_width, indent })
    }
}

impl Default for PrintConfig {
    fn default() -> PrintConfig {
        PrintConfig { max_width: 80, indent: 2 }
    }
}

/// Printed text plus the number of lines that could not be brought under the
/// width limit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Printed {
    pub text: String,
    pub overflow_lines: usize,
}

pub fn pretty(article: &Article, table: &NotationTable, config: PrintConfig) -> String {
    pretty_with_overflow(article, table, config).text
}

pub fn pretty_with_overflow(article: &Article, table: &NotationTable, config: PrintConfig) -> Printed {
    let mut p = Printer { table, config, out: String::new(), overflow: 0 };
    p.items(&article.items, 0);
    Printed { text: p.out, overflow_lines: p.overflow }
}

struct Piece {
    text: String,
    space_before: bool,
    /// Wrapping may start a new line before this piece; lower ranks are used first.
    break_rank: Option<u32>,
}

#[derive(Default)]
struct Doc {
    pieces: Vec<Piece>,
}

const RANK_BY: u32 = 0;
const RANK_CONNECTIVE: u32 = 1;
const RANK_QUANTIFIER: u32 = 100;
const RANK_REF_LIST: u32 = 200;
const RANK_ATOMIC: u32 = 250;
const RANK_ARGS: u32 = 300;

impl Doc {
    fn push(&mut self, text: &str) {
        let space_before = match (self.pieces.last(), text) {
            (None, _) => false,
            (Some(_), ")" | "," | ";" | ":") => false,
            (Some(prev), _) => prev.text != "(",
        };
        self.pieces.push(Piece { text: text.to_string(), space_before, break_rank: None });
    }

    /// Pushes a piece glued to the previous one (functor application).
    fn glue(&mut self, text: &str) {
        self.pieces.push(Piece { text: text.to_string(), space_before: false, break_rank: None });
    }

    fn push_breakable(&mut self, text: &str, rank: u32) {
        self.push(text);
        self.pieces.last_mut().expect("just pushed").break_rank = Some(rank);
    }

    /// Marks the next pushed piece as a break point.
    fn mark(&mut self) -> usize {
        self.pieces.len()
    }

    fn set_break(&mut self, at: usize, rank: u32) {
        if let Some(p) = self.pieces.get_mut(at) {
            if p.space_before {
                p.break_rank = Some(p.break_rank.map_or(rank, |r| r.min(rank)));
            }
        }
    }

    fn flat(&self) -> String {
        let mut s = String::new();
        for p in &self.pieces {
            if p.space_before {
                s.push(' ');
            }
            s.push_str(&p.text);
        }
        s
    }
}

struct Printer<'t> {
    table: &'t NotationTable,
    config: PrintConfig,
    out: String,
    overflow: usize,
}

impl<'t> Printer<'t> {
    fn items(&mut self, items: &[TextItem], level: usize) {
        for item in items {
            self.item(item, level);
        }
    }

    fn item(&mut self, item: &TextItem, level: usize) {
        let mut doc = Doc::default();
        match item {
            TextItem::Reservation(segs) | TextItem::Let(segs) => {
                let (head, binder) = match item {
                    TextItem::Reservation(_) => ("reserve", "for"),
                    _ => ("let", "be"),
                };
                let parens = self.segment_parens(head, binder, segs);
                doc.push(head);
                for (i, seg) in segs.iter().enumerate() {
                    if i > 0 {
                        doc.push(",");
                    }
                    let at = doc.mark();
                    for (j, v) in seg.vars.iter().enumerate() {
                        if j > 0 {
                            doc.push(",");
                        }
                        doc.push(&v.name);
                    }
                    if i > 0 {
                        doc.set_break(at, RANK_BY);
                    }
                    doc.push(binder);
                    if parens[i] {
                        doc.push("(");
                    }
                    type_expr(&mut doc, &seg.ty, self.table);
                    if parens[i] {
                        doc.push(")");
                    }
                }
                doc.push(";");
            }
            TextItem::Assume { label, formula } => {
                doc.push("assume");
                label_prefix(&mut doc, label.as_ref());
                self.formula(&mut doc, formula);
                doc.push(";");
            }
            TextItem::Statement(s) => {
                if s.then {
                    doc.push("then");
                }
                match s.kind {
                    StatementKind::Plain => {}
                    StatementKind::Thus => doc.push("thus"),
                    StatementKind::Theorem => doc.push("theorem"),
                }
                label_prefix(&mut doc, s.label.as_ref());
                self.formula(&mut doc, &s.formula);
                match &s.justification {
                    Justification::None => doc.push(";"),
                    Justification::By(refs) => {
                        doc.push_breakable("by", RANK_BY);
                        for (i, r) in refs.iter().enumerate() {
                            if i > 0 {
                                doc.push(",");
                                doc.push_breakable(&r.name, RANK_REF_LIST);
                            } else {
                                doc.push(&r.name);
                            }
                        }
                        doc.push(";");
                    }
                    Justification::Proof(body) => {
                        self.layout(&doc, level);
                        self.line(level, "proof");
                        self.items(body, level + 1);
                        self.line(level, "end;");
                        return;
                    }
                }
            }
        }
        self.layout(&doc, level);
    }

    fn formula(&self, doc: &mut Doc, f: &Formula) {
        formula(doc, f, 0, false, 0, self.table);
    }

    /// Which segments need `( Type )` for the item to re-parse as written.
    fn segment_parens(&self, head: &str, binder: &str, segs: &[Segment]) -> Vec<bool> {
        let original = if head == "reserve" { TextItem::Reservation(segs.to_vec()) } else { TextItem::Let(segs.to_vec()) };
        let expected = Article::new(vec![original]).without_positions();
        let render = |parens: &[bool]| {
            let mut doc = Doc::default();
            doc.push(head);
            for (i, seg) in segs.iter().enumerate() {
                if i > 0 {
                    doc.push(",");
                }
                for (j, v) in seg.vars.iter().enumerate() {
                    if j > 0 {
                        doc.push(",");
                    }
                    doc.push(&v.name);
                }
                doc.push(binder);
                if parens[i] {
                    doc.push("(");
                }
                type_expr(&mut doc, &seg.ty, self.table);
                if parens[i] {
                    doc.push(")");
                }
            }
            doc.push(";");
            doc.flat()
        };
        let reads_back = |parens: &[bool]| {
            parse_text(&render(parens), self.table).is_ok_and(|a| a.without_positions() == expected)
        };
        let mut parens = vec![false; segs.len()];
        if segs.len() < 2 || reads_back(&parens) {
            return parens;
        }
        for (i, seg) in segs.iter().enumerate() {
            parens[i] = !seg.ty.args.is_empty();
        }
        for i in 0..segs.len() {
            if parens[i] {
                parens[i] = false;
                if !reads_back(&parens) {
                    parens[i] = true;
                }
            }
        }
        parens
    }

    fn line(&mut self, level: usize, text: &str) {
        let indent = level * self.config.indent;
        if indent + text.chars().count() > self.config.max_width {
            self.overflow += 1;
        }
        for _ in 0..indent {
            self.out.push(' ');
        }
        self.out.push_str(text);
        self.out.push('\n');
    }

    fn layout(&mut self, doc: &Doc, level: usize) {
        let mut ranks: Vec<u32> = doc.pieces.iter().filter_map(|p| p.break_rank).collect();
        ranks.sort_unstable();
        ranks.dedup();
        let first = level * self.config.indent;
        let cont = first + self.config.indent;
        let mut lines = pack(doc, None, first, cont, self.config.max_width);
        for &rank in &ranks {
            if fits(&lines, first, cont, self.config.max_width) {
                break;
            }
            lines = pack(doc, Some(rank), first, cont, self.config.max_width);
        }
        for (i, l) in lines.iter().enumerate() {
            self.line(if i == 0 { level } else { level + 1 }, l);
        }
    }
}

fn fits(lines: &[String], first: usize, cont: usize, width: usize) -> bool {
    lines
        .iter()
        .enumerate()
        .all(|(i, l)| (if i == 0 { first } else { cont }) + l.chars().count() <= width)
}

/// Greedy fill: segments between enabled break points go on the current line
/// while they fit.
fn pack(doc: &Doc, max_rank: Option<u32>, first: usize, cont: usize, width: usize) -> Vec<String> {
    let mut segments: Vec<String> = Vec::new();
    let mut current = String::new();
    for p in &doc.pieces {
        let enabled = matches!((p.break_rank, max_rank), (Some(r), Some(m)) if r <= m);
        if enabled && !current.is_empty() {
            segments.push(std::mem::take(&mut current));
        } else if p.space_before {
            current.push(' ');
        }
        current.push_str(&p.text);
    }
    if !current.is_empty() {
        segments.push(current);
    }
    let mut lines: Vec<String> = Vec::new();
    for seg in segments {
        let indent = if lines.len() == 1 { first } else { cont };
        match lines.last_mut() {
            Some(line) => {
                if indent + line.chars().count() + 1 + seg.chars().count() <= width {
                    line.push(' ');
                    line.push_str(&seg);
                } else {
                    lines.push(seg);
                }
            }
            None => lines.push(seg),
        }
    }
    lines
}

fn label_prefix(doc: &mut Doc, label: Option<&Ident>) {
    if let Some(l) = label {
        doc.push(&l.name);
        doc.push(":");
    }
}

/// Precedence of a formula's outermost construct; quantifiers count as atomic
/// on their left edge.
fn formula_prec(f: &Formula) -> u8 {
    match f {
        Formula::Binary { op, .. } => op.precedence(),
        Formula::Not(_) => 5,
        _ => 6,
    }
}

/// `min_prec`: loosest construct allowed here without parentheses.
/// `followed`: whether more formula text follows in the same parenthesis level.
fn formula(doc: &mut Doc, f: &Formula, min_prec: u8, followed: bool, depth: u32, table: &NotationTable) {
    let needs = match f {
        Formula::Quantified { .. } => followed,
        _ => formula_prec(f) < min_prec,
    };
    if needs {
        doc.push("(");
        formula(doc, f, 0, false, depth, table);
        doc.push(")");
        return;
    }
    match f {
        Formula::Pred { symbol, left, right, .. } => {
            term(doc, left, 0, table);
            doc.push_breakable(symbol, RANK_ATOMIC + depth);
            term(doc, right, 0, table);
        }
        Formula::Eq { left, right } => {
            term(doc, left, 0, table);
            doc.push_breakable("=", RANK_ATOMIC + depth);
            term(doc, right, 0, table);
        }
        Formula::Is { term: t, ty } => {
            term(doc, t, 0, table);
            doc.push_breakable("is", RANK_ATOMIC + depth);
            type_expr(doc, ty, table);
        }
        Formula::Not(inner) => {
            doc.push("not");
            formula(doc, inner, 5, followed, depth + 1, table);
        }
        Formula::Binary { op, left, right } => {
            let p = op.precedence();
            let (left_min, right_min) = if op.right_assoc() { (p + 1, p) } else { (p, p + 1) };
            formula(doc, left, left_min, true, depth + 1, table);
            doc.push_breakable(op.keyword(), RANK_CONNECTIVE + depth);
            formula(doc, right, right_min, followed, depth + 1, table);
        }
        Formula::Quantified { quantifier, vars, ty, body } => {
            doc.push(quantifier.keyword());
            for (i, v) in vars.iter().enumerate() {
                if i > 0 {
                    doc.push(",");
                }
                doc.push(&v.name);
            }
            doc.push("being");
            type_expr(doc, ty, table);
            doc.push(quantifier.body_keyword());
            let at = doc.mark();
            formula(doc, body, 0, followed, depth + 1, table);
            doc.set_break(at, RANK_QUANTIFIER + depth);
        }
    }
}

fn type_expr(doc: &mut Doc, ty: &TypeExpr, table: &NotationTable) {
    doc.push(&ty.mode);
    if !ty.args.is_empty() {
        doc.push("of");
        term_list(doc, &ty.args, table);
    }
}

fn term_list(doc: &mut Doc, terms: &[Term], table: &NotationTable) {
    for (i, t) in terms.iter().enumerate() {
        if i > 0 {
            doc.push(",");
            let at = doc.mark();
            term(doc, t, 0, table);
            doc.set_break(at, RANK_ARGS);
        } else {
            term(doc, t, 0, table);
        }
    }
}

/// `min_priority`: loosest infix functor allowed here without parentheses.
fn term(doc: &mut Doc, t: &Term, min_priority: u16, table: &NotationTable) {
    match t {
        Term::Var(id) => doc.push(&id.name),
        Term::Numeral { value, .. } => doc.push(value),
        Term::Prefix { functor, args, .. } => {
            doc.push(functor);
            doc.glue("(");
            term_list(doc, args, table);
            doc.push(")");
        }
        Term::Infix { functor, left, right, .. } => {
            let p = u16::from(table.priority(functor).unwrap_or(0));
            let needs = p < min_priority;
            if needs {
                doc.push("(");
            }
            term(doc, left, p, table);
            doc.push(functor);
            term(doc, right, p + 1, table);
            if needs {
                doc.push(")");
            }
        }
    }
}
