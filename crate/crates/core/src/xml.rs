//! Parse-tree XML.
//!
//! Element vocabulary: `Article`, `Reservation`, `LetItem`, `Assume`, `Thus`,
//! `Theorem`, `Statement`, `Justification` (`kind="by"|"proof"`), `Ref`,
//! `Proof`, formulas (`Pred`, `Eq`, `Is`, `Not`, `And`, `Or`, `Implies`, `Iff`,
//! `For`, `Ex`), terms (`Var`, `Num`, `PrefixApp`, `InfixApp`), `Type`,
//! `Variables`, `Variable`, `Label`. Attributes always appear in the order
//! name/mode/symbol/value, args, line, col. Positions are omitted for nodes
//! that have none.

use crate::ast::*;
use crate::error::Pos;

pub const XML_DECLARATION: &str = "<?xml version=\"1.0\"?>";

pub fn xml_escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

pub fn ast_to_xml(article: &Article) -> String {
    let mut w = Writer { out: String::new(), depth: 0 };
    w.out.push_str(XML_DECLARATION);
    w.out.push('\n');
    let attrs = [("src", article.source_name.clone())];
    if article.items.is_empty() {
        w.leaf("Article", &attrs);
    } else {
        w.open("Article", &attrs);
        for item in &article.items {
            w.item(item);
        }
        w.close("Article");
    }
    w.out
}

struct Writer {
    out: String,
    depth: usize,
}

fn positioned(mut attrs: Vec<(&'static str, String)>, pos: Pos) -> Vec<(&'static str, String)> {
    if pos.is_known() {
        attrs.push(("line", pos.line.to_string()));
        attrs.push(("col", pos.col.to_string()));
    }
    attrs
}

impl Writer {
    fn start(&mut self, name: &str, attrs: &[(&str, String)]) {
        for _ in 0..self.depth {
            self.out.push_str("  ");
        }
        self.out.push('<');
        self.out.push_str(name);
        for (k, v) in attrs {
            self.out.push(' ');
            self.out.push_str(k);
            self.out.push_str("=\"");
            self.out.push_str(&xml_escape(v));
            self.out.push('"');
        }
    }

    fn open(&mut self, name: &str, attrs: &[(&str, String)]) {
        self.start(name, attrs);
        self.out.push_str(">\n");
        self.depth += 1;
    }

    fn leaf(&mut self, name: &str, attrs: &[(&str, String)]) {
        self.start(name, attrs);
        self.out.push_str("/>\n");
    }

    fn close(&mut self, name: &str) {
        self.depth -= 1;
        for _ in 0..self.depth {
            self.out.push_str("  ");
        }
        self.out.push_str("</");
        self.out.push_str(name);
        self.out.push_str(">\n");
    }

    fn ident(&mut self, element: &str, id: &Ident) {
        self.leaf(element, &positioned(vec![("name", id.name.clone())], id.pos));
    }

    fn variables(&mut self, vars: &[Ident]) {
        self.open("Variables", &[]);
        for v in vars {
            self.ident("Variable", v);
        }
        self.close("Variables");
    }

    fn item(&mut self, item: &TextItem) {
        match item {
            TextItem::Reservation(segs) | TextItem::Let(segs) => {
                let name = if matches!(item, TextItem::Reservation(_)) { "Reservation" } else { "LetItem" };
                self.open(name, &[]);
                for seg in segs {
                    self.variables(&seg.vars);
                    self.type_expr(&seg.ty);
                }
                self.close(name);
            }
            TextItem::Assume { label, formula } => {
                self.open("Assume", &[]);
                if let Some(l) = label {
                    self.ident("Label", l);
                }
                self.formula(formula);
                self.close("Assume");
            }
            TextItem::Statement(s) => {
                let name = match s.kind {
                    StatementKind::Plain => "Statement",
                    StatementKind::Thus => "Thus",
                    StatementKind::Theorem => "Theorem",
                };
                let attrs = if s.then { vec![("then", "true".to_string())] } else { vec![] };
                self.open(name, &attrs);
                if let Some(l) = &s.label {
                    self.ident("Label", l);
                }
                self.formula(&s.formula);
                match &s.justification {
                    Justification::None => {}
                    Justification::By(refs) => {
                        self.open("Justification", &[("kind", "by".to_string())]);
                        for r in refs {
                            self.ident("Ref", r);
                        }
                        self.close("Justification");
                    }
                    Justification::Proof(body) => {
                        self.open("Justification", &[("kind", "proof".to_string())]);
                        self.open("Proof", &[]);
                        for inner in body {
                            self.item(inner);
                        }
                        self.close("Proof");
                        self.close("Justification");
                    }
                }
                self.close(name);
            }
        }
    }

    fn type_expr(&mut self, ty: &TypeExpr) {
        let attrs = positioned(vec![("mode", ty.mode.clone()), ("args", ty.args.len().to_string())], ty.pos);
        if ty.args.is_empty() {
            self.leaf("Type", &attrs);
        } else {
            self.open("Type", &attrs);
            for a in &ty.args {
                self.term(a);
            }
            self.close("Type");
        }
    }

    fn term(&mut self, t: &Term) {
        match t {
            Term::Var(id) => self.ident("Var", id),
            Term::Numeral { value, pos } => self.leaf("Num", &positioned(vec![("value", value.clone())], *pos)),
            Term::Prefix { functor, args, pos } => {
                let attrs = positioned(vec![("symbol", functor.clone()), ("args", args.len().to_string())], *pos);
                self.open("PrefixApp", &attrs);
                for a in args {
                    self.term(a);
                }
                self.close("PrefixApp");
            }
            Term::Infix { functor, left, right, pos } => {
                self.open("InfixApp", &positioned(vec![("symbol", functor.clone())], *pos));
                self.term(left);
                self.term(right);
                self.close("InfixApp");
            }
        }
    }

    fn formula(&mut self, f: &Formula) {
        match f {
            Formula::Pred { symbol, left, right, pos } => {
                self.open("Pred", &positioned(vec![("symbol", symbol.clone())], *pos));
                self.term(left);
                self.term(right);
                self.close("Pred");
            }
            Formula::Eq { left, right } => {
                self.open("Eq", &[]);
                self.term(left);
                self.term(right);
                self.close("Eq");
            }
            Formula::Is { term, ty } => {
                self.open("Is", &[]);
                self.term(term);
                self.type_expr(ty);
                self.close("Is");
            }
            Formula::Not(inner) => {
                self.open("Not", &[]);
                self.formula(inner);
                self.close("Not");
            }
            Formula::Binary { op, left, right } => {
                let name = match op {
                    BinaryOp::And => "And",
                    BinaryOp::Or => "Or",
                    BinaryOp::Implies => "Implies",
                    BinaryOp::Iff => "Iff",
                };
                self.open(name, &[]);
                self.formula(left);
                self.formula(right);
                self.close(name);
            }
            Formula::Quantified { quantifier, vars, ty, body } => {
                let name = match quantifier {
                    Quantifier::ForAll => "For",
                    Quantifier::Exists => "Ex",
                };
                self.open(name, &[]);
                self.variables(vars);
                self.type_expr(ty);
                self.formula(body);
                self.close(name);
            }
        }
    }
}
