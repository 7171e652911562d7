//! Syntax tree for the Mizar subset.
//!
//! Nodes carry source positions where a token anchors them. Positions take
//! part in `PartialEq`; compare trees "modulo positions" with
//! [`Article::without_positions`].

use crate::error::Pos;

/// A name together with where it was written: variables, labels, references.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ident {
    pub name: String,
    pub pos: Pos,
}

impl Ident {
    pub fn new(name: impl Into<String>, pos: Pos) -> Ident {
        Ident { name: name.into(), pos }
    }

    /// An identifier with no source position.
    pub fn synthetic(name: impl Into<String>) -> Ident {
        Ident::new(name, Pos::UNKNOWN)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Var(Ident),
    Numeral { value: String, pos: Pos },
    Prefix { functor: String, args: Vec<Term>, pos: Pos },
    Infix { functor: String, left: Box<Term>, right: Box<Term>, pos: Pos },
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(Ident::synthetic(name))
    }

    pub fn infix(functor: &str, left: Term, right: Term) -> Term {
        Term::Infix {
            functor: functor.to_string(),
            left: Box::new(left),
            right: Box::new(right),
            pos: Pos::UNKNOWN,
        }
    }

    /// Position of the leftmost token.
    pub fn pos(&self) -> Pos {
        match self {
            Term::Var(id) => id.pos,
            Term::Numeral { pos, .. } | Term::Prefix { pos, .. } => *pos,
            Term::Infix { left, .. } => left.pos(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeExpr {
    pub mode: String,
    pub args: Vec<Term>,
    pub pos: Pos,
}

impl TypeExpr {
    pub fn new(mode: &str, args: Vec<Term>) -> TypeExpr {
        TypeExpr { mode: mode.to_string(), args, pos: Pos::UNKNOWN }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    And,
    Or,
    Implies,
    Iff,
}

impl BinaryOp {
    pub fn keyword(self) -> &'static str {
        match self {
            BinaryOp::And => "&",
            BinaryOp::Or => "or",
            BinaryOp::Implies => "implies",
            BinaryOp::Iff => "iff",
        }
    }

    pub fn from_keyword(text: &str) -> Option<BinaryOp> {
        Some(match text {
            "&" => BinaryOp::And,
            "or" => BinaryOp::Or,
            "implies" => BinaryOp::Implies,
            "iff" => BinaryOp::Iff,
            _ => return None,
        })
    }

    /// Binding strength; larger binds tighter.
    pub fn precedence(self) -> u8 {
        match self {
            BinaryOp::Iff => 1,
            BinaryOp::Implies => 2,
            BinaryOp::Or => 3,
            BinaryOp::And => 4,
        }
    }

    pub fn right_assoc(self) -> bool {
        matches!(self, BinaryOp::Iff | BinaryOp::Implies)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quantifier {
    ForAll,
    Exists,
}

impl Quantifier {
    pub fn keyword(self) -> &'static str {
        match self {
            Quantifier::ForAll => "for",
            Quantifier::Exists => "ex",
        }
    }

    /// The keyword separating the header from the body.
    pub fn body_keyword(self) -> &'static str {
        match self {
            Quantifier::ForAll => "holds",
            Quantifier::Exists => "st",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formula {
    Pred { symbol: String, left: Term, right: Term, pos: Pos },
    Eq { left: Term, right: Term },
    Is { term: Term, ty: TypeExpr },
    Not(Box<Formula>),
    Binary { op: BinaryOp, left: Box<Formula>, right: Box<Formula> },
    Quantified { quantifier: Quantifier, vars: Vec<Ident>, ty: TypeExpr, body: Box<Formula> },
}

impl Formula {
    pub fn eq(left: Term, right: Term) -> Formula {
        Formula::Eq { left, right }
    }

    pub fn binary(op: BinaryOp, left: Formula, right: Formula) -> Formula {
        Formula::Binary { op, left: Box::new(left), right: Box::new(right) }
    }

    pub fn negate(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    /// Position of the leftmost anchored token (quantifiers report their first variable).
    pub fn pos(&self) -> Pos {
        match self {
            Formula::Pred { left, .. } | Formula::Eq { left, .. } => left.pos(),
            Formula::Is { term, .. } => term.pos(),
            Formula::Not(inner) => inner.pos(),
            Formula::Binary { left, .. } => left.pos(),
            Formula::Quantified { vars, .. } => vars.first().map(|v| v.pos).unwrap_or_default(),
        }
    }

    pub fn forall(vars: &[&str], ty: TypeExpr, body: Formula) -> Formula {
        Formula::Quantified {
            quantifier: Quantifier::ForAll,
            vars: vars.iter().map(|v| Ident::synthetic(*v)).collect(),
            ty,
            body: Box::new(body),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Justification {
    None,
    By(Vec<Ident>),
    Proof(Vec<TextItem>),
}

/// One `vars for/be Type` group of a reservation or `let`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub vars: Vec<Ident>,
    pub ty: TypeExpr,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StatementKind {
    /// Plain statement, optionally linked with `then`.
    Plain,
    Thus,
    Theorem,
}

/// A formula-bearing item: statements, `thus`, `theorem` and `assume`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Statement {
    pub kind: StatementKind,
    pub then: bool,
    pub label: Option<Ident>,
    pub formula: Formula,
    pub justification: Justification,
}

impl Statement {
    /// Best available anchor: the label if present, else the formula.
    pub fn pos(&self) -> Pos {
        self.label.as_ref().map(|l| l.pos).unwrap_or_else(|| self.formula.pos())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TextItem {
    Reservation(Vec<Segment>),
    Let(Vec<Segment>),
    Assume { label: Option<Ident>, formula: Formula },
    Statement(Statement),
}

impl TextItem {
    pub fn label(&self) -> Option<&Ident> {
        match self {
            TextItem::Assume { label, .. } => label.as_ref(),
            TextItem::Statement(s) => s.label.as_ref(),
            _ => None,
        }
    }

    /// True for items that assert a formula and can be cited.
    pub fn is_statement_like(&self) -> bool {
        matches!(self, TextItem::Assume { .. } | TextItem::Statement(_))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Article {
    pub items: Vec<TextItem>,
    pub source_name: String,
}

impl Article {
    pub fn new(items: Vec<TextItem>) -> Article {
        Article { items, source_name: String::new() }
    }

    /// Copy with every position reset and the source name cleared, for
    /// structural comparison.
    pub fn without_positions(&self) -> Article {
        let mut a = self.clone();
        a.source_name.clear();
        a.items.iter_mut().for_each(strip_item);
        a
    }
}

fn strip_ident(id: &mut Ident) {
    id.pos = Pos::UNKNOWN;
}

fn strip_item(item: &mut TextItem) {
    match item {
        TextItem::Reservation(segs) | TextItem::Let(segs) => {
            for seg in segs {
                seg.vars.iter_mut().for_each(strip_ident);
                strip_type(&mut seg.ty);
            }
        }
        TextItem::Assume { label, formula } => {
            label.iter_mut().for_each(strip_ident);
            strip_formula(formula);
        }
        TextItem::Statement(s) => {
            s.label.iter_mut().for_each(strip_ident);
            strip_formula(&mut s.formula);
            match &mut s.justification {
                Justification::None => {}
                Justification::By(refs) => refs.iter_mut().for_each(strip_ident),
                Justification::Proof(body) => body.iter_mut().for_each(strip_item),
            }
        }
    }
}

fn strip_type(ty: &mut TypeExpr) {
    ty.pos = Pos::UNKNOWN;
    ty.args.iter_mut().for_each(strip_term);
}

fn strip_term(t: &mut Term) {
    match t {
        Term::Var(id) => strip_ident(id),
        Term::Numeral { pos, .. } => *pos = Pos::UNKNOWN,
        Term::Prefix { args, pos, .. } => {
            *pos = Pos::UNKNOWN;
            args.iter_mut().for_each(strip_term);
        }
        Term::Infix { left, right, pos, .. } => {
            *pos = Pos::UNKNOWN;
            strip_term(left);
            strip_term(right);
        }
    }
}

fn strip_formula(f: &mut Formula) {
    match f {
        Formula::Pred { left, right, pos, .. } => {
            *pos = Pos::UNKNOWN;
            strip_term(left);
            strip_term(right);
        }
        Formula::Eq { left, right } => {
            strip_term(left);
            strip_term(right);
        }
        Formula::Is { term, ty } => {
            strip_term(term);
            strip_type(ty);
        }
        Formula::Not(inner) => strip_formula(inner),
        Formula::Binary { left, right, .. } => {
            strip_formula(left);
            strip_formula(right);
        }
        Formula::Quantified { vars, ty, body, .. } => {
            vars.iter_mut().for_each(strip_ident);
            strip_type(ty);
            strip_formula(body);
        }
    }
}
