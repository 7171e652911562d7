#![allow(dead_code)]

pub mod checks;
pub mod gen;
pub mod oracle;

use std::path::{Path, PathBuf};

use strictmiz::ast::*;
use strictmiz::links::link_graph;
use strictmiz::msm::{classify_variables, expand_sugar, to_msm, VariableCategory};
use strictmiz::wsm::to_wsm;

pub fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

pub fn golden_dir() -> PathBuf {
    corpus_dir().join("golden")
}

/// `(stem, text)` of every bundled article, sorted by name.
pub fn corpus() -> Vec<(String, String)> {
    let mut out: Vec<(String, String)> = std::fs::read_dir(corpus_dir())
        .expect("corpus directory")
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "miz"))
        .map(|p| {
            let stem = p.file_stem().unwrap().to_string_lossy().into_owned();
            (stem, std::fs::read_to_string(&p).unwrap())
        })
        .collect();
    out.sort();
    out
}

/// Compares against a golden file, or rewrites it when `UPDATE_GOLDEN` is set.
pub fn check_golden(name: &str, actual: &str) -> Result<(), String> {
    let path = golden_dir().join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all(golden_dir()).unwrap();
        std::fs::write(&path, actual).unwrap();
        return Ok(());
    }
    let expected = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if expected == actual {
        Ok(())
    } else {
        Err(format!("{name} differs from golden:\n--- expected\n{expected}--- actual\n{actual}"))
    }
}

/// Labels of formula-bearing items in pre-order.
pub fn labels_preorder(items: &[TextItem]) -> Vec<Option<String>> {
    let mut out = Vec::new();
    for item in items {
        if item.is_statement_like() {
            out.push(item.label().map(|l| l.name.clone()));
        }
        if let TextItem::Statement(Statement { justification: Justification::Proof(body), .. }) = item {
            out.extend(labels_preorder(body));
        }
    }
    out
}

fn single_binders(items: &[TextItem]) -> bool {
    fn formula_ok(f: &Formula) -> bool {
        match f {
            Formula::Quantified { vars, body, .. } => vars.len() == 1 && formula_ok(body),
            Formula::Not(inner) => formula_ok(inner),
            Formula::Binary { left, right, .. } => formula_ok(left) && formula_ok(right),
            _ => true,
        }
    }
    items.iter().all(|item| match item {
        TextItem::Reservation(segs) | TextItem::Let(segs) => segs.len() == 1 && segs[0].vars.len() == 1,
        TextItem::Assume { formula, .. } => formula_ok(formula),
        TextItem::Statement(s) => {
            formula_ok(&s.formula)
                && match &s.justification {
                    Justification::Proof(body) => single_binders(body),
                    _ => true,
                }
        }
    })
}

fn has_then(items: &[TextItem]) -> bool {
    items.iter().any(|item| match item {
        TextItem::Statement(s) => {
            s.then || matches!(&s.justification, Justification::Proof(body) if has_then(body))
        }
        _ => false,
    })
}

/// Checks every MSM property for one article; `Err` describes the first violation.
pub fn check_msm_invariants(article: &Article) -> Result<(), String> {
    let msm = to_msm(article).map_err(|e| format!("to_msm failed: {e}"))?;
    let text = to_wsm(&msm);

    if text.lines().any(|l| l.split(' ').any(|t| t == "then")) || has_then(&msm.items) {
        return Err("`then` survives in MSM".into());
    }

    let labels = labels_preorder(&msm.items);
    let expected: Vec<Option<String>> = (1..=labels.len()).map(|n| Some(format!("Label{n}"))).collect();
    if labels != expected {
        return Err(format!("labels are not Label1..LabelN in order: {labels:?}"));
    }

    if !single_binders(&msm.items) {
        return Err("a quantifier or segment still binds several variables".into());
    }

    let info = classify_variables(&msm).map_err(|e| format!("classify on MSM failed: {e}"))?;
    for o in &info.occurrences {
        if VariableCategory::from_msm_name(&o.name) != Some(o.category) {
            return Err(format!("variable {} does not decode to its category {}", o.name, o.category));
        }
    }
    for i in &info.introductions {
        if VariableCategory::from_msm_name(&i.name) != Some(i.category) {
            return Err(format!("introduction {} does not decode to {}", i.name, i.category));
        }
    }

    // Alpha-equivalence: same binding structure as the sugar-expanded original.
    let original = classify_variables(&expand_sugar(article)).map_err(|e| format!("classify failed: {e}"))?;
    let shape = |v: &strictmiz::msm::VariableInfo| -> Vec<(usize, VariableCategory)> {
        v.occurrences.iter().map(|o| (o.introduction, o.category)).collect()
    };
    if shape(&original) != shape(&info) || original.introductions.len() != info.introductions.len() {
        return Err("renaming changed the binding structure".into());
    }
    let g0 = link_graph(article).map_err(|e| format!("link graph of original: {e}"))?;
    let g1 = link_graph(&msm).map_err(|e| format!("link graph of MSM: {e}"))?;
    if g0.nodes.len() != g1.nodes.len() || g0.edges != g1.edges {
        return Err(format!("link graphs differ: {:?} vs {:?}", g0.edges, g1.edges));
    }

    let again = to_msm(&msm).map_err(|e| format!("second to_msm failed: {e}"))?;
    if to_wsm(&again) != text {
        return Err("MSM is not idempotent".into());
    }
    Ok(())
}
