//! More Strict form: serial labels on every formula, category-encoding
//! variable names, expanded sugar and explicit references instead of `then`.
//!
//! The passes are separate AST-to-AST functions; [`to_msm`] composes them.
//! Serialized MSM text is the WSM emitter applied to the result.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use crate::ast::*;
use crate::error::{Error, Pos, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VariableCategory {
    /// Introduced by `reserve`.
    Reserved,
    /// Introduced by a quantifier.
    Bound,
    /// Introduced by `let`.
    Fixed,
}

impl VariableCategory {
    pub fn prefix(self) -> &'static str {
        match self {
            VariableCategory::Reserved => "RV",
            VariableCategory::Bound => "BV",
            VariableCategory::Fixed => "CV",
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            VariableCategory::Reserved => "reserved",
            VariableCategory::Bound => "bound",
            VariableCategory::Fixed => "fixed",
        }
    }

    /// Category encoded in an MSM variable name, if it has the MSM shape.
    pub fn from_msm_name(name: &str) -> Option<VariableCategory> {
        let cat = [VariableCategory::Reserved, VariableCategory::Bound, VariableCategory::Fixed]
            .into_iter()
            .find(|c| name.starts_with(c.prefix()))?;
        let digits = &name[2..];
        let serial = !digits.is_empty() && !digits.starts_with('0') && digits.bytes().all(|b| b.is_ascii_digit());
        serial.then_some(cat)
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for VariableCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A place where a variable comes into scope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Introduction {
    pub name: String,
    pub pos: Pos,
    pub category: VariableCategory,
    /// The name this introduction receives in MSM (`RV3`, `BV1`, ...).
    pub msm_name: String,
}

/// A use of a variable inside a term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Occurrence {
    pub name: String,
    pub pos: Pos,
    pub category: VariableCategory,
    /// Index into [`VariableInfo::introductions`].
    pub introduction: usize,
}

/// Introductions and occurrences, both in textual order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VariableInfo {
    pub introductions: Vec<Introduction>,
    pub occurrences: Vec<Occurrence>,
}

/// Resolves every variable occurrence to its innermost introduction.
///
/// `reserve` and `let` bind for the rest of their block (nested proofs
/// included); a quantifier binds its body. A segment's type is resolved before
/// the segment's own variables come into scope.
pub fn classify_variables(article: &Article) -> Result<VariableInfo> {
    let mut copy = article.clone();
    let mut scoper = Scoper::new(false);
    scoper.items(&mut copy.items)?;
    Ok(scoper.info)
}

pub fn rename_variables(article: &Article) -> Result<Article> {
    let mut out = article.clone();
    let mut scoper = Scoper::new(true);
    scoper.items(&mut out.items)?;
    Ok(out)
}

struct Scoper {
    rename: bool,
    scope: Vec<(String, usize)>,
    counters: [usize; 3],
    info: VariableInfo,
}

impl Scoper {
    fn new(rename: bool) -> Scoper {
        Scoper { rename, scope: Vec::new(), counters: [0; 3], info: VariableInfo::default() }
    }

    fn introduce(&mut self, id: &mut Ident, category: VariableCategory) {
        let counter = &mut self.counters[category.index()];
        *counter += 1;
        let msm_name = format!("{}{}", category.prefix(), counter);
        self.scope.push((id.name.clone(), self.info.introductions.len()));
        self.info.introductions.push(Introduction { name: id.name.clone(), pos: id.pos, category, msm_name });
        if self.rename {
            id.name = self.info.introductions.last().expect("just pushed").msm_name.clone();
        }
    }

    fn occurrence(&mut self, id: &mut Ident) -> Result<()> {
        let Some(&(_, intro)) = self.scope.iter().rev().find(|(n, _)| *n == id.name) else {
            return Err(Error::UnresolvedVariable { pos: id.pos, name: id.name.clone() });
        };
        let category = self.info.introductions[intro].category;
        self.info.occurrences.push(Occurrence { name: id.name.clone(), pos: id.pos, category, introduction: intro });
        if self.rename {
            id.name = self.info.introductions[intro].msm_name.clone();
        }
        Ok(())
    }

    fn items(&mut self, items: &mut [TextItem]) -> Result<()> {
        let mark = self.scope.len();
        for item in items {
            match item {
                TextItem::Reservation(segs) => self.segments(segs, VariableCategory::Reserved)?,
                TextItem::Let(segs) => self.segments(segs, VariableCategory::Fixed)?,
                TextItem::Assume { formula, .. } => self.formula(formula)?,
                TextItem::Statement(s) => {
                    self.formula(&mut s.formula)?;
                    if let Justification::Proof(body) = &mut s.justification {
                        self.items(body)?;
                    }
                }
            }
        }
        self.scope.truncate(mark);
        Ok(())
    }

    fn segments(&mut self, segs: &mut [Segment], category: VariableCategory) -> Result<()> {
        for seg in segs {
            self.type_expr(&mut seg.ty)?;
            for v in &mut seg.vars {
                self.introduce(v, category);
            }
        }
        Ok(())
    }

    fn type_expr(&mut self, ty: &mut TypeExpr) -> Result<()> {
        ty.args.iter_mut().try_for_each(|t| self.term(t))
    }

    fn term(&mut self, t: &mut Term) -> Result<()> {
        match t {
            Term::Var(id) => self.occurrence(id),
            Term::Numeral { .. } => Ok(()),
            Term::Prefix { args, .. } => args.iter_mut().try_for_each(|a| self.term(a)),
            Term::Infix { left, right, .. } => {
                self.term(left)?;
                self.term(right)
            }
        }
    }

    fn formula(&mut self, f: &mut Formula) -> Result<()> {
        match f {
            Formula::Pred { left, right, .. } | Formula::Eq { left, right } => {
                self.term(left)?;
                self.term(right)
            }
            Formula::Is { term, ty } => {
                self.term(term)?;
                self.type_expr(ty)
            }
            Formula::Not(inner) => self.formula(inner),
            Formula::Binary { left, right, .. } => {
                self.formula(left)?;
                self.formula(right)
            }
            Formula::Quantified { vars, ty, body, .. } => {
                self.type_expr(ty)?;
                let mark = self.scope.len();
                for v in vars.iter_mut() {
                    self.introduce(v, VariableCategory::Bound);
                }
                self.formula(body)?;
                self.scope.truncate(mark);
                Ok(())
            }
        }
    }
}

/// Splits multi-variable quantifiers and one-variable-per-item reservations
/// and `let`s.
pub fn expand_sugar(article: &Article) -> Article {
    Article { items: expand_items(&article.items), source_name: article.source_name.clone() }
}

fn expand_items(items: &[TextItem]) -> Vec<TextItem> {
    let mut out = Vec::with_capacity(items.len());
    for item in items {
        match item {
            TextItem::Reservation(segs) | TextItem::Let(segs) => {
                let reserve = matches!(item, TextItem::Reservation(_));
                for seg in segs {
                    for v in &seg.vars {
                        let single = vec![Segment { vars: vec![v.clone()], ty: seg.ty.clone() }];
                        out.push(if reserve { TextItem::Reservation(single) } else { TextItem::Let(single) });
                    }
                }
            }
            TextItem::Assume { label, formula } => {
                out.push(TextItem::Assume { label: label.clone(), formula: expand_formula(formula) })
            }
            TextItem::Statement(s) => {
                let justification = match &s.justification {
                    Justification::Proof(body) => Justification::Proof(expand_items(body)),
                    other => other.clone(),
                };
                out.push(TextItem::Statement(Statement {
                    formula: expand_formula(&s.formula),
                    justification,
                    label: s.label.clone(),
                    ..*s
                }));
            }
        }
    }
    out
}

fn expand_formula(f: &Formula) -> Formula {
    match f {
        Formula::Pred { .. } | Formula::Eq { .. } | Formula::Is { .. } => f.clone(),
        Formula::Not(inner) => Formula::negate(expand_formula(inner)),
        Formula::Binary { op, left, right } => Formula::binary(*op, expand_formula(left), expand_formula(right)),
        Formula::Quantified { quantifier, vars, ty, body } => {
            let mut acc = expand_formula(body);
            for v in vars.iter().rev() {
                acc = Formula::Quantified {
                    quantifier: *quantifier,
                    vars: vec![v.clone()],
                    ty: ty.clone(),
                    body: Box::new(acc),
                };
            }
            acc
        }
    }
}

/// Replaces each `then` by an explicit reference to the previous statement of
/// the block, labeling that statement if needed. The reference goes first in
/// the `by` list, which is then deduplicated keeping first occurrences.
pub fn eliminate_then(article: &Article) -> Result<Article> {
    let mut out = article.clone();
    let mut used = HashSet::new();
    collect_labels(&out.items, &mut used);
    let mut fresh = FreshLabels { used, next: 1 };
    then_block(&mut out.items, &mut fresh)?;
    Ok(out)
}

struct FreshLabels {
    used: HashSet<String>,
    next: usize,
}

impl FreshLabels {
    fn next(&mut self) -> String {
        loop {
            let candidate = format!("Linked{}", self.next);
            self.next += 1;
            if self.used.insert(candidate.clone()) {
                return candidate;
            }
        }
    }
}

fn collect_labels(items: &[TextItem], out: &mut HashSet<String>) {
    for item in items {
        if let Some(l) = item.label() {
            out.insert(l.name.clone());
        }
        if let TextItem::Statement(Statement { justification: Justification::Proof(body), .. }) = item {
            collect_labels(body, out);
        }
    }
}

fn then_block(items: &mut [TextItem], fresh: &mut FreshLabels) -> Result<()> {
    let mut previous: Option<usize> = None;
    for i in 0..items.len() {
        if !items[i].is_statement_like() {
            continue;
        }
        let linked = matches!(&items[i], TextItem::Statement(s) if s.then);
        if linked {
            let (before, rest) = items.split_at_mut(i);
            let TextItem::Statement(s) = &mut rest[0] else { unreachable!("checked above") };
            let Some(p) = previous else {
                return Err(Error::DanglingThen { pos: s.pos() });
            };
            let target = ensure_label(&mut before[p], fresh);
            let mut refs = match &s.justification {
                Justification::None => Vec::new(),
                Justification::By(refs) => refs.clone(),
                Justification::Proof(_) => return Err(Error::LinkedProof { pos: s.pos() }),
            };
            refs.insert(0, Ident::synthetic(target));
            let mut seen = HashSet::new();
            refs.retain(|r| seen.insert(r.name.clone()));
            s.justification = Justification::By(refs);
            s.then = false;
        }
        if let TextItem::Statement(Statement { justification: Justification::Proof(body), .. }) = &mut items[i] {
            then_block(body, fresh)?;
        }
        previous = Some(i);
    }
    Ok(())
}

fn ensure_label(item: &mut TextItem, fresh: &mut FreshLabels) -> String {
    let slot = match item {
        TextItem::Assume { label, .. } => label,
        TextItem::Statement(s) => &mut s.label,
        _ => unreachable!("only statement-like items are link targets"),
    };
    slot.get_or_insert_with(|| Ident::synthetic(fresh.next())).name.clone()
}

/// Labels every formula-bearing item `Label1`, `Label2`, ... in pre-order and
/// rewrites references accordingly.
pub fn relabel(article: &Article) -> Result<Article> {
    let mut out = article.clone();
    let mut counter = 0usize;
    relabel_block(&mut out.items, &mut Vec::new(), &mut counter)?;
    Ok(out)
}

fn relabel_block(items: &mut [TextItem], scopes: &mut Vec<HashMap<String, String>>, counter: &mut usize) -> Result<()> {
    scopes.push(HashMap::new());
    for item in items.iter_mut() {
        if !item.is_statement_like() {
            continue;
        }
        *counter += 1;
        let new = format!("Label{counter}");
        let slot = match item {
            TextItem::Assume { label, .. } => label,
            TextItem::Statement(s) => {
                match &mut s.justification {
                    Justification::By(refs) => {
                        for r in refs.iter_mut() {
                            let target = scopes
                                .iter()
                                .rev()
                                .find_map(|scope| scope.get(&r.name))
                                .ok_or_else(|| Error::UndefinedReference { pos: r.pos, label: r.name.clone() })?;
                            r.name = target.clone();
                        }
                    }
                    Justification::Proof(body) => relabel_block(body, scopes, counter)?,
                    Justification::None => {}
                }
                &mut s.label
            }
            _ => unreachable!("filtered to statement-like items"),
        };
        match slot {
            Some(old) => {
                scopes.last_mut().expect("scope pushed").insert(old.name.clone(), new.clone());
                old.name = new;
            }
            None => *slot = Some(Ident::synthetic(new)),
        }
    }
    scopes.pop();
    Ok(())
}

/// Composes the passes. Variables are renamed before sugar is expanded: the
/// serial numbers come out the same, but a split segment such as
/// `let a, b be Element of a` can no longer capture its own variable.
pub fn to_msm(article: &Article) -> Result<Article> {
    let renamed = rename_variables(article)?;
    let expanded = expand_sugar(&renamed);
    let linked = eliminate_then(&expanded)?;
    relabel(&linked)
}

/// Labels that no `by` list cites, in order of definition.
pub fn unused_labels(article: &Article) -> Vec<String> {
    let mut defined = Vec::new();
    let mut cited = BTreeSet::new();
    scan_labels(&article.items, &mut defined, &mut cited);
    defined.retain(|l| !cited.contains(l));
    defined
}

fn scan_labels(items: &[TextItem], defined: &mut Vec<String>, cited: &mut BTreeSet<String>) {
    for item in items {
        if let Some(l) = item.label() {
            defined.push(l.name.clone());
        }
        if let TextItem::Statement(s) = item {
            match &s.justification {
                Justification::By(refs) => cited.extend(refs.iter().map(|r| r.name.clone())),
                Justification::Proof(body) => scan_labels(body, defined, cited),
                Justification::None => {}
            }
        }
    }
}
