//! Seeded random articles over the bundled notation table.
//!
//! Every generated article is well formed for all passes: variables are
//! reserved or bound before use, `then` never starts a block or precedes a
//! proof, references point at visible earlier labels, and no segment or
//! quantifier type mentions a variable it binds itself.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use strictmiz::ast::*;

const RESERVED: [&str; 4] = ["X", "Y", "Z", "W"];
const BOUND: [&str; 3] = ["x", "y", "z"];
const FIXED: [&str; 3] = ["a", "b", "c"];
const PREDS: [&str; 3] = ["<=", "c=", "in"];
const INFIX: [&str; 3] = ["+", "*", "\\/"];
const PREFIX: [(&str, usize); 4] = [("dom", 1), ("rng", 1), ("Funcs", 2), ("Seg", 1)];
/// Mode and one admissible arity.
const MODES: [(&str, usize); 9] = [
    ("set", 0),
    ("Relation", 0),
    ("Relation", 1),
    ("Relation", 2),
    ("Subset", 1),
    ("Element", 1),
    ("Function", 0),
    ("Function", 2),
    ("Seg", 1),
];

pub const MAX_DEPTH: usize = 4;

pub struct Gen {
    rng: ChaCha8Rng,
    labels: usize,
    /// Names usable in terms, innermost last.
    vars: Vec<String>,
    /// Labels citable from the current point, one frame per block.
    visible: Vec<Vec<String>>,
}

pub fn article(seed: u64) -> Article {
    Gen::new(seed).article()
}

impl Gen {
    pub fn new(seed: u64) -> Gen {
        Gen { rng: ChaCha8Rng::seed_from_u64(seed), labels: 0, vars: Vec::new(), visible: Vec::new() }
    }

    pub fn article(&mut self) -> Article {
        self.visible.push(Vec::new());
        let mut items = vec![self.initial_reservation()];
        let n = self.rng.random_range(1..=6);
        items.extend(self.block_items(n, 0, false));
        self.visible.pop();
        Article::new(items)
    }

    /// Large article made of short statements, for timing.
    pub fn long_article(&mut self, statements: usize) -> Article {
        self.visible.push(Vec::new());
        let mut items = vec![self.initial_reservation()];
        for _ in 0..statements {
            items.push(self.statement(StatementKind::Plain, items.len() > 1, 0, false));
        }
        Article::new(items)
    }

    fn initial_reservation(&mut self) -> TextItem {
        let mut segs = Vec::new();
        let mut declared: Vec<String> = Vec::new();
        let mut rest: Vec<&str> = RESERVED.to_vec();
        while !rest.is_empty() {
            let take = self.rng.random_range(1..=rest.len().min(2));
            let names: Vec<&str> = rest.drain(..take).collect();
            let ty = self.restricted_type(&declared);
            declared.extend(names.iter().map(|n| n.to_string()));
            segs.push(Segment { vars: names.iter().map(|n| Ident::synthetic(*n)).collect(), ty });
        }
        self.vars.extend(declared);
        TextItem::Reservation(segs)
    }

    /// Type whose arguments are variables from `scope` or numerals.
    fn restricted_type(&mut self, scope: &[String]) -> TypeExpr {
        let (mode, arity) = *MODES.choose(&mut self.rng).unwrap();
        let args = (0..arity)
            .map(|_| match scope.choose(&mut self.rng) {
                Some(v) if self.rng.random_bool(0.8) => Term::var(v),
                _ => Term::Numeral { value: self.rng.random_range(0..20).to_string(), pos: Default::default() },
            })
            .collect();
        TypeExpr::new(mode, args)
    }

    fn block_items(&mut self, n: usize, nesting: usize, in_proof: bool) -> Vec<TextItem> {
        let mark = self.vars.len();
        let mut items = Vec::new();
        let mut has_statement = false;
        for i in 0..n {
            let last = i + 1 == n;
            let roll = self.rng.random_range(0..10);
            let item = if in_proof && last {
                self.statement(StatementKind::Thus, has_statement, nesting, true)
            } else if in_proof && roll < 2 {
                self.let_item()
            } else if in_proof && roll < 4 {
                let label = self.maybe_label();
                let formula = self.formula(2);
                let item = TextItem::Assume { label: label.clone(), formula };
                self.publish(label);
                item
            } else if roll == 4 {
                self.reservation()
            } else {
                let kind = if !in_proof && roll >= 8 { StatementKind::Theorem } else { StatementKind::Plain };
                self.statement(kind, has_statement, nesting, false)
            };
            has_statement |= item.is_statement_like();
            items.push(item);
        }
        self.vars.truncate(mark);
        items
    }

    fn reservation(&mut self) -> TextItem {
        let name = *RESERVED.choose(&mut self.rng).unwrap();
        let scope: Vec<String> = self.vars.iter().filter(|v| *v != name).cloned().collect();
        let ty = self.restricted_type(&scope);
        self.vars.push(name.to_string());
        TextItem::Reservation(vec![Segment { vars: vec![Ident::synthetic(name)], ty }])
    }

    fn let_item(&mut self) -> TextItem {
        let mut segs = Vec::new();
        for _ in 0..self.rng.random_range(1..=2) {
            let count = self.rng.random_range(1..=2);
            let names: Vec<&str> = FIXED.choose_multiple(&mut self.rng, count).copied().collect();
            let scope: Vec<String> = self.vars.iter().filter(|v| !names.contains(&v.as_str())).cloned().collect();
            let ty = self.restricted_type(&scope);
            segs.push(Segment { vars: names.iter().map(|n| Ident::synthetic(*n)).collect(), ty });
            self.vars.extend(names.iter().map(|n| n.to_string()));
        }
        TextItem::Let(segs)
    }

    fn maybe_label(&mut self) -> Option<Ident> {
        self.rng.random_bool(0.6).then(|| {
            self.labels += 1;
            Ident::synthetic(format!("L{}", self.labels))
        })
    }

    fn publish(&mut self, label: Option<Ident>) {
        if let Some(l) = label {
            self.visible.last_mut().expect("block frame").push(l.name);
        }
    }

    fn statement(&mut self, kind: StatementKind, can_link: bool, nesting: usize, closing: bool) -> TextItem {
        let then = kind == StatementKind::Plain && can_link && self.rng.random_bool(0.3);
        let label = self.maybe_label();
        let depth = self.rng.random_range(0..=MAX_DEPTH);
        let formula = self.formula(depth);
        let citable: Vec<String> = self.visible.iter().flatten().cloned().collect();
        let roll = self.rng.random_range(0..10);
        let justification = if !then && !closing && nesting < 2 && roll < 2 {
            self.visible.push(Vec::new());
            let n = self.rng.random_range(1..=3);
            let body = self.block_items(n, nesting + 1, true);
            self.visible.pop();
            Justification::Proof(body)
        } else if roll < 6 && !citable.is_empty() {
            let count = self.rng.random_range(1..=citable.len().min(3));
            let refs = citable.choose_multiple(&mut self.rng, count).map(|l| Ident::synthetic(l.clone())).collect();
            Justification::By(refs)
        } else {
            Justification::None
        };
        self.publish(label.clone());
        TextItem::Statement(Statement { kind, then, label, formula, justification })
    }

    pub fn formula(&mut self, depth: usize) -> Formula {
        let roll = if depth == 0 { 0 } else { self.rng.random_range(0..10) };
        match roll {
            0..=2 => self.atomic(),
            3 => Formula::negate(self.formula(depth - 1)),
            4..=7 => {
                let op = *[BinaryOp::And, BinaryOp::Or, BinaryOp::Implies, BinaryOp::Iff].choose(&mut self.rng).unwrap();
                let left = self.formula(depth - 1);
                let right = self.formula(depth - 1);
                Formula::binary(op, left, right)
            }
            _ => {
                let quantifier = if self.rng.random_bool(0.5) { Quantifier::ForAll } else { Quantifier::Exists };
                let count = self.rng.random_range(1..=2);
                let names: Vec<&str> = BOUND.choose_multiple(&mut self.rng, count).copied().collect();
                let outer: Vec<String> = self.vars.iter().filter(|v| !names.contains(&v.as_str())).cloned().collect();
                let ty = self.general_type(&outer);
                let mark = self.vars.len();
                self.vars.extend(names.iter().map(|n| n.to_string()));
                let body = self.formula(depth - 1);
                self.vars.truncate(mark);
                Formula::Quantified {
                    quantifier,
                    vars: names.iter().map(|n| Ident::synthetic(*n)).collect(),
                    ty,
                    body: Box::new(body),
                }
            }
        }
    }

    fn atomic(&mut self) -> Formula {
        let scope = self.vars.clone();
        let left = self.term(2, &scope);
        match self.rng.random_range(0..4) {
            0 => Formula::eq(left, self.term(2, &scope)),
            1 => {
                let ty = self.general_type(&scope);
                Formula::Is { term: left, ty }
            }
            _ => {
                let symbol = PREDS.choose(&mut self.rng).unwrap().to_string();
                let right = self.term(2, &scope);
                Formula::Pred { symbol, left, right, pos: Default::default() }
            }
        }
    }

    fn general_type(&mut self, scope: &[String]) -> TypeExpr {
        let (mode, arity) = *MODES.choose(&mut self.rng).unwrap();
        let args = (0..arity).map(|_| self.term(1, scope)).collect();
        TypeExpr::new(mode, args)
    }

    pub fn term(&mut self, depth: usize, scope: &[String]) -> Term {
        let roll = if depth == 0 { self.rng.random_range(0..3) } else { self.rng.random_range(0..6) };
        match roll {
            0 | 1 if !scope.is_empty() => Term::var(scope.choose(&mut self.rng).unwrap()),
            0..=2 => Term::Numeral { value: self.rng.random_range(0..100).to_string(), pos: Default::default() },
            3 => {
                let (functor, arity) = *PREFIX.choose(&mut self.rng).unwrap();
                Term::Prefix {
                    functor: functor.to_string(),
                    args: (0..arity).map(|_| self.term(depth - 1, scope)).collect(),
                    pos: Default::default(),
                }
            }
            _ => {
                let functor = *INFIX.choose(&mut self.rng).unwrap();
                let left = self.term(depth - 1, scope);
                let right = self.term(depth - 1, scope);
                Term::infix(functor, left, right)
            }
        }
    }
}
