//! Justification graph: which statements each statement relies on.

use std::collections::{BTreeSet, HashMap};

use crate::ast::{Article, Justification, TextItem};
use crate::error::{Error, Result};

/// Index path of an item: top-level index, then indices inside nested proofs.
pub type ItemPath = Vec<usize>;

/// Nodes are the formula-bearing items in pre-order (a statement precedes its
/// proof body). An edge `(from, to)` means `from` is justified by `to`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinkGraph {
    pub nodes: Vec<ItemPath>,
    pub labels: Vec<Option<String>>,
    pub edges: BTreeSet<(usize, usize)>,
}

impl LinkGraph {
    pub fn successors(&self, node: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.range((node, 0)..(node + 1, 0)).map(|&(_, to)| to)
    }

    /// Edges as item paths, independent of node numbering.
    pub fn edge_paths(&self) -> BTreeSet<(ItemPath, ItemPath)> {
        self.edges
            .iter()
            .map(|&(a, b)| (self.nodes[a].clone(), self.nodes[b].clone()))
            .collect()
    }
}

pub fn link_graph(article: &Article) -> Result<LinkGraph> {
    let mut g = LinkGraph::default();
    let mut scopes: Vec<HashMap<String, usize>> = Vec::new();
    walk(&article.items, &mut Vec::new(), &mut scopes, &mut g)?;
    Ok(g)
}

fn walk(
    items: &[TextItem],
    path: &mut ItemPath,
    scopes: &mut Vec<HashMap<String, usize>>,
    g: &mut LinkGraph,
) -> Result<()> {
    scopes.push(HashMap::new());
    let mut previous: Option<usize> = None;
    for (i, item) in items.iter().enumerate() {
        if !item.is_statement_like() {
            continue;
        }
        path.push(i);
        let node = g.nodes.len();
        g.nodes.push(path.clone());
        g.labels.push(item.label().map(|l| l.name.clone()));

        if let TextItem::Statement(s) = item {
            if s.then {
                let Some(prev) = previous else {
                    return Err(Error::DanglingThen { pos: s.pos() });
                };
                g.edges.insert((node, prev));
            }
            match &s.justification {
                Justification::By(refs) => {
                    for r in refs {
                        let target = scopes
                            .iter()
                            .rev()
                            .find_map(|scope| scope.get(&r.name))
                            .ok_or_else(|| Error::UndefinedReference { pos: r.pos, label: r.name.clone() })?;
                        g.edges.insert((node, *target));
                    }
                }
                Justification::Proof(body) => walk(body, path, scopes, g)?,
                Justification::None => {}
            }
        }

        if let Some(label) = item.label() {
            scopes.last_mut().expect("scope pushed").insert(label.name.clone(), node);
        }
        previous = Some(node);
        path.pop();
    }
    scopes.pop();
    Ok(())
}
