use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{cycle_space, Multigraph};
use crate::word::factors::factor_occurrences;
use crate::word::{complexity, Alphabet, ComplexityReport, LazyWord, PrefixBuffer, StabilizationPolicy, Symbol};

/// Rauzy graph of order `n`: vertices are the length-`n` factors, edges the
/// length-`n+1` factors, from their prefix to their suffix. Vertices and
/// edges are sorted lexicographically.
#[derive(Debug, Clone)]
pub struct RauzyGraph {
    pub order: usize,
    pub alphabet: Alphabet,
    pub vertices: Vec<Vec<Symbol>>,
    pub edges: Vec<Vec<Symbol>>,
    pub graph: Multigraph,
    /// Edge weights: empirical frequencies or exact measures.
    pub weights: Vec<f64>,
    /// Raw occurrence counts, when built from a prefix.
    pub counts: Option<Vec<u64>>,
    pub prefix_len: usize,
    /// Set when the factor sets may not have stabilized.
    pub provisional: bool,
}

impl RauzyGraph {
    /// Graph on the given length-`n+1` words. Vertices are all their
    /// length-`n` prefixes and suffixes.
    pub fn from_edge_words(order: usize, alphabet: Alphabet, edges: BTreeMap<Vec<Symbol>, f64>) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidArguments("order must be positive".into()));
        }
        if let Some(w) = edges.keys().find(|w| w.len() != order + 1) {
            return Err(Error::InvalidArguments(format!("edge word of length {} at order {order}", w.len())));
        }
        let mut vertices: Vec<Vec<Symbol>> = edges
            .keys()
            .flat_map(|w| [w[..order].to_vec(), w[1..].to_vec()])
            .collect();
        vertices.sort();
        vertices.dedup();
        let index = |v: &[Symbol]| vertices.binary_search_by(|x| x.as_slice().cmp(v)).expect("vertex present");
        let pairs = edges.keys().map(|w| (index(&w[..order]), index(&w[1..]))).collect();
        let graph = Multigraph::with_labels(
            vertices.iter().map(|v| alphabet.render(v)).collect(),
            pairs,
            edges.keys().map(|w| alphabet.render(w)).collect(),
        )?;
        let (edges, weights): (Vec<_>, Vec<_>) = edges.into_iter().unzip();
        Ok(RauzyGraph {
            order,
            alphabet,
            vertices,
            edges,
            graph,
            weights,
            counts: None,
            prefix_len: 0,
            provisional: false,
        })
    }

    pub fn stats(&self) -> GraphStats {
        let (components, _) = self.graph.components();
        let v = self.graph.vertex_count();
        let e = self.graph.edge_count();
        GraphStats {
            n: self.order,
            vertices: v,
            edges: e,
            components,
            dim_z: cycle_space(&self.graph).dimension,
            chi: e as i64 - v as i64 + 1,
        }
    }

    /// Per-vertex defect of the raw counts; `None` for exact weights.
    pub fn count_defects(&self) -> Option<Vec<i64>> {
        let counts = self.counts.as_ref()?;
        let mut d = vec![0i64; self.graph.vertex_count()];
        for (&(s, t), &c) in self.graph.edges().iter().zip(counts) {
            d[s] += c as i64;
            d[t] -= c as i64;
        }
        Some(d)
    }

    pub fn to_dot(&self, with_weights: bool) -> String {
        let name = format!("rauzy_{}", self.order);
        self.graph.to_dot(&name, with_weights.then_some(self.weights.as_slice()))
    }
}

/// Rauzy graph of the prefix of length `len`. Weights are `count / (len - n)`.
///
/// The graph is provisional when the stream ended early, or when either
/// factor set differs between the half-length and full-length prefixes.
pub fn build_rauzy_graph(word: &LazyWord, n: usize, len: usize) -> Result<RauzyGraph> {
    if n == 0 || len < n + 1 {
        return Err(Error::InvalidArguments(format!("need n >= 1 and len >= n + 1, got n = {n}, len = {len}")));
    }
    let mut buffer = PrefixBuffer::new(word);
    from_buffer(&mut buffer, word.alphabet(), n, len)
}

fn from_buffer(buffer: &mut PrefixBuffer, alphabet: &Alphabet, n: usize, len: usize) -> Result<RauzyGraph> {
    let size = alphabet.size();
    let prefix = buffer.ensure(len);
    let actual = prefix.len();
    if actual < n + 1 {
        return Err(Error::InvalidArguments(format!("stream ended after {actual} letters")));
    }
    let counts = factor_occurrences(prefix, n + 1, size);
    let half = &prefix[..actual / 2];
    let provisional = actual < len
        || factor_occurrences(half, n + 1, size).len() != counts.len()
        || factor_occurrences(half, n, size).len() != factor_occurrences(prefix, n, size).len();
    let denom = (actual - n) as f64;
    let raw: Vec<u64> = counts.values().copied().collect();
    let weights = counts.iter().map(|(w, &c)| (w.clone(), c as f64 / denom)).collect();
    let mut g = RauzyGraph::from_edge_words(n, alphabet.clone(), weights)?;
    // Every n-factor of the prefix is the prefix or suffix of some edge.
    g.counts = Some(raw);
    g.prefix_len = actual;
    g.provisional = provisional;
    Ok(g)
}

/// `(n, |V|, |E|, components, dim Z, chi)` of one order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GraphStats {
    pub n: usize,
    pub vertices: usize,
    pub edges: usize,
    pub components: usize,
    pub dim_z: usize,
    /// `|E| − |V| + 1`, i.e. `p(n+1) − p(n) + 1`.
    pub chi: i64,
}

pub const STATS_CSV_HEADER: &str = "n,vertices,edges,components,dim_z,chi";

pub fn stats_csv(rows: &[GraphStats]) -> String {
    let mut out = format!("{STATS_CSV_HEADER}\n");
    for r in rows {
        writeln!(out, "{},{},{},{},{},{}", r.n, r.vertices, r.edges, r.components, r.dim_z, r.chi).unwrap();
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EulerRow {
    pub stats: GraphStats,
    pub stabilized: bool,
    pub connected: bool,
    pub chi_at_least_k: bool,
    pub chi_at_least_k_plus_1: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EulerReport {
    pub k: usize,
    pub rows: Vec<EulerRow>,
}

impl EulerReport {
    /// `chi ≥ k` on every row.
    pub fn holds(&self) -> bool {
        self.rows.iter().all(|r| r.chi_at_least_k)
    }

    pub fn strict_holds(&self) -> bool {
        self.rows.iter().all(|r| r.chi_at_least_k_plus_1)
    }
}

/// Rauzy graphs of orders `1..=n_max` on prefixes long enough for both
/// factor sets to stabilize under `policy`, with their Euler characteristic.
/// `chi = |E| − |V| + 1` throughout; disconnected graphs are flagged.
pub fn euler_characteristic_check(
    word: &LazyWord,
    k: usize,
    n_max: usize,
    policy: StabilizationPolicy,
) -> Result<EulerReport> {
    let report = complexity(word, n_max + 1, policy)?;
    euler_characteristic_with_report(word, k, n_max, &report)
}

/// As [`euler_characteristic_check`], reusing a complexity table that
/// covers orders up to `n_max + 1`.
pub fn euler_characteristic_with_report(
    word: &LazyWord,
    k: usize,
    n_max: usize,
    report: &ComplexityReport,
) -> Result<EulerReport> {
    if report.n_max() < n_max + 1 {
        return Err(Error::InvalidArguments(format!(
            "complexity table reaches n = {}, need {}",
            report.n_max(),
            n_max + 1
        )));
    }
    let mut buffer = PrefixBuffer::new(word);
    let mut rows = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let (a, b) = (report.get(n).expect("row"), report.get(n + 1).expect("row"));
        let len = a.prefix_len.max(b.prefix_len);
        let g = from_buffer(&mut buffer, word.alphabet(), n, len)?;
        let stats = g.stats();
        let connected = stats.components == 1;
        let chi = stats.chi;
        rows.push(EulerRow {
            stats,
            stabilized: a.stabilized && b.stabilized && !g.provisional,
            connected,
            chi_at_least_k: chi >= k as i64,
            chi_at_least_k_plus_1: chi > k as i64,
        });
    }
    Ok(EulerReport { k, rows })
}
