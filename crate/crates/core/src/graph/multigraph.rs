use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Directed multigraph; parallel edges and self-loops allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct Multigraph {
    vertex_labels: Vec<String>,
    edges: Vec<(usize, usize)>,
    edge_labels: Vec<String>,
}

impl Multigraph {
    /// Vertices labelled `1..=vertex_count`, edges `e1, e2, …`.
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let vertex_labels = (1..=vertex_count).map(|i| i.to_string()).collect();
        let edge_labels = (1..=edges.len()).map(|i| format!("e{i}")).collect();
        Multigraph::with_labels(vertex_labels, edges, edge_labels)
    }

    pub fn with_labels(vertex_labels: Vec<String>, edges: Vec<(usize, usize)>, edge_labels: Vec<String>) -> Result<Self> {
        let n = vertex_labels.len();
        if let Some(&(s, t)) = edges.iter().find(|&&(s, t)| s >= n || t >= n) {
            return Err(Error::InvalidArguments(format!("edge ({s}, {t}) leaves the {n} vertices")));
        }
        if edge_labels.len() != edges.len() {
            return Err(Error::InvalidArguments("one label per edge".into()));
        }
        Ok(Multigraph { vertex_labels, edges, edge_labels })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn vertex_label(&self, v: usize) -> &str {
        &self.vertex_labels[v]
    }

    pub fn edge_label(&self, e: usize) -> &str {
        &self.edge_labels[e]
    }

    pub fn vertex_by_label(&self, label: &str) -> Option<usize> {
        self.vertex_labels.iter().position(|l| l == label)
    }

    /// Incident edges of each vertex, in edge-index order.
    pub(crate) fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.vertex_count()];
        for (e, &(s, t)) in self.edges.iter().enumerate() {
            inc[s].push(e);
            if t != s {
                inc[t].push(e);
            }
        }
        inc
    }

    /// Weakly connected components: count and component index per vertex.
    pub fn components(&self) -> (usize, Vec<usize>) {
        let forest = self.spanning_forest();
        (forest.roots.len(), forest.component)
    }

    pub fn is_connected(&self) -> bool {
        self.components().0 <= 1
    }

    /// Breadth-first spanning forest. Roots are taken in vertex order,
    /// neighbours in edge-index order.
    pub fn spanning_forest(&self) -> SpanningForest {
        let n = self.vertex_count();
        let inc = self.incidence();
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut depth = vec![0usize; n];
        let mut component = vec![usize::MAX; n];
        let mut tree_edge = vec![false; self.edge_count()];
        let mut roots = Vec::new();
        for root in 0..n {
            if component[root] != usize::MAX {
                continue;
            }
            let c = roots.len();
            roots.push(root);
            component[root] = c;
            let mut queue = VecDeque::from([root]);
            while let Some(x) = queue.pop_front() {
                for &e in &inc[x] {
                    let (s, t) = self.edges[e];
                    let y = if s == x { t } else { s };
                    if component[y] == usize::MAX {
                        component[y] = c;
                        parent[y] = Some((x, e));
                        depth[y] = depth[x] + 1;
                        tree_edge[e] = true;
                        queue.push_back(y);
                    }
                }
            }
        }
        SpanningForest { parent, depth, component, tree_edge, roots }
    }

    /// `Σ_out f − Σ_in f` at every vertex.
    pub fn conservation_defect(&self, f: &[f64]) -> Result<Vec<f64>> {
        if f.len() != self.edge_count() {
            return Err(Error::InvalidArguments(format!(
                "edge function has {} values for {} edges",
                f.len(),
                self.edge_count()
            )));
        }
        let mut d = vec![0.0; self.vertex_count()];
        for (&(s, t), v) in self.edges.iter().zip(f) {
            d[s] += v;
            d[t] -= v;
        }
        Ok(d)
    }

    /// Graphviz rendering; `weights`, when given, are appended to labels.
    pub fn to_dot(&self, name: &str, weights: Option<&[f64]>) -> String {
        let mut out = format!("digraph \"{name}\" {{\n");
        for l in &self.vertex_labels {
            writeln!(out, "  \"{l}\";").unwrap();
        }
        for (e, &(s, t)) in self.edges.iter().enumerate() {
            let label = match weights {
                Some(w) => format!("{} ({})", self.edge_labels[e], w[e]),
                None => self.edge_labels[e].clone(),
            };
            writeln!(out, "  \"{}\" -> \"{}\" [label=\"{label}\"];", self.vertex_labels[s], self.vertex_labels[t]).unwrap();
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpanningForest {
    /// `(parent vertex, tree edge)`; `None` at roots.
    pub parent: Vec<Option<(usize, usize)>>,
    pub depth: Vec<usize>,
    pub component: Vec<usize>,
    pub tree_edge: Vec<bool>,
    pub roots: Vec<usize>,
}

/// The four-vertex, six-edge example: `e1: 1→2, e2: 2→3, e3: 3→4,
/// e4: 4→1, e5: 2→4, e6: 1→3`.
pub fn four_vertex_example() -> Multigraph {
    Multigraph::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0), (1, 3), (0, 2)]).expect("valid graph")
}
