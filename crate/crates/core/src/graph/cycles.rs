use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Multigraph;

/// `±1` coefficients of an oriented cycle on the edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CycleVector {
    pub coefficients: Vec<i8>,
}

impl CycleVector {
    pub fn as_f64(&self) -> Vec<f64> {
        self.coefficients.iter().map(|&c| f64::from(c)).collect()
    }

    /// Signed edge terms such as `e6 - e2 - e1`, highest edge index first.
    pub fn render(&self, graph: &Multigraph) -> String {
        let mut out = String::new();
        for (e, &c) in self.coefficients.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let sign = if c > 0 { "+" } else { "-" };
            if out.is_empty() {
                if c < 0 {
                    out.push('-');
                }
            } else {
                out.push_str(&format!(" {sign} "));
            }
            out.push_str(graph.edge_label(e));
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

/// Fundamental cycles of a breadth-first spanning forest, one per
/// non-tree edge, in edge-index order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CycleSpaceBasis {
    pub cycles: Vec<CycleVector>,
    /// Non-tree edge generating each cycle.
    pub generators: Vec<usize>,
    pub dimension: usize,
    pub components: usize,
}

/// Basis of the cycle space. The cycle of a non-tree edge `e = s → t` is
/// `+e` followed by the tree path from `t` back to `s`.
pub fn cycle_space(graph: &Multigraph) -> CycleSpaceBasis {
    let forest = graph.spanning_forest();
    let m = graph.edge_count();
    let mut cycles = Vec::new();
    let mut generators = Vec::new();
    for e in (0..m).filter(|&e| !forest.tree_edge[e]) {
        let (s, t) = graph.edges()[e];
        let mut coeff = vec![0i8; m];
        coeff[e] += 1;
        // Climb from both ends to the common ancestor.
        let (mut a, mut b) = (t, s);
        let mut down = Vec::new();
        while a != b {
            if forest.depth[a] >= forest.depth[b] {
                let (p, pe) = forest.parent[a].expect("non-root");
                // Walking a -> p: forward when the edge points that way.
                coeff[pe] += if graph.edges()[pe] == (a, p) { 1 } else { -1 };
                a = p;
            } else {
                let (p, pe) = forest.parent[b].expect("non-root");
                down.push((p, b, pe));
                b = p;
            }
        }
        for (p, x, pe) in down.into_iter().rev() {
            // Walking p -> x.
            coeff[pe] += if graph.edges()[pe] == (p, x) { 1 } else { -1 };
        }
        cycles.push(CycleVector { coefficients: coeff });
        generators.push(e);
    }
    CycleSpaceBasis {
        dimension: cycles.len(),
        cycles,
        generators,
        components: forest.roots.len(),
    }
}

/// Cycle vector of a closed vertex walk `v_0, v_1, …, v_{r-1}, v_0`; each
/// step uses the first edge `v_j → v_{j+1}` (coefficient `+1`), or failing
/// that the first edge `v_{j+1} → v_j` (coefficient `-1`).
pub fn cycle_vector_from_walk(graph: &Multigraph, walk: &[usize]) -> Result<CycleVector> {
    if walk.is_empty() {
        return Err(Error::InvalidArguments("empty walk".into()));
    }
    let mut coeff = vec![0i8; graph.edge_count()];
    for j in 0..walk.len() {
        let (a, b) = (walk[j], walk[(j + 1) % walk.len()]);
        let edges = graph.edges();
        if let Some(e) = edges.iter().position(|&x| x == (a, b)) {
            coeff[e] += 1;
        } else if let Some(e) = edges.iter().position(|&x| x == (b, a)) {
            coeff[e] -= 1;
        } else {
            return Err(Error::InvalidArguments(format!("no edge between vertices {a} and {b}")));
        }
    }
    Ok(CycleVector { coefficients: coeff })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Decomposition {
    pub coefficients: Vec<f64>,
    /// `‖Σ α_i z_i − f‖∞`.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecompositionFailure {
    pub max_defect: f64,
    pub residual: f64,
    pub coefficients: Vec<f64>,
}

/// Coefficients of `f` in the basis; fails when `f` is not conserved or
/// the reconstruction residual exceeds `tol`. Each fundamental cycle is the
/// only basis vector touching its generator edge, with coefficient `+1`, so
/// the coefficient is read off `f` on that edge.
pub fn decompose_in_cycles(
    graph: &Multigraph,
    basis: &CycleSpaceBasis,
    f: &[f64],
    tol: f64,
) -> Result<std::result::Result<Decomposition, DecompositionFailure>> {
    let defect = graph.conservation_defect(f)?;
    let max_defect = defect.iter().fold(0.0f64, |m, d| m.max(d.abs()));
    let m = graph.edge_count();
    let coefficients: Vec<f64> = basis.generators.iter().map(|&e| f[e]).collect();
    let mut recon = vec![0.0; m];
    for (alpha, z) in coefficients.iter().zip(&basis.cycles) {
        for (r, &c) in recon.iter_mut().zip(&z.coefficients) {
            *r += alpha * f64::from(c);
        }
    }
    let residual = recon.iter().zip(f).fold(0.0f64, |mx, (r, v)| mx.max((r - v).abs()));
    if max_defect > tol || residual > tol {
        return Ok(Err(DecompositionFailure { max_defect, residual, coefficients }));
    }
    Ok(Ok(Decomposition { coefficients, residual }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::four_vertex_example;

    #[test]
    fn four_vertex_example_basis() {
        let g = four_vertex_example();
        let b = cycle_space(&g);
        assert_eq!(b.dimension, 3);
        assert_eq!(b.generators, vec![1, 2, 4]);
        let rendered: Vec<String> = b.cycles.iter().map(|c| c.render(&g)).collect();
        assert_eq!(rendered, vec!["-e6 + e2 + e1", "e6 + e4 + e3", "e5 + e4 + e1"]);
    }

    #[test]
    fn walk_132() {
        let g = four_vertex_example();
        let z = cycle_vector_from_walk(&g, &[0, 2, 1]).unwrap();
        assert_eq!(z.coefficients, vec![-1, -1, 0, 0, 0, 1]);
        assert_eq!(z.render(&g), "e6 - e2 - e1");
        assert!(g.conservation_defect(&z.as_f64()).unwrap().iter().all(|&d| d == 0.0));
    }

    #[test]
    fn example_flow_decomposes() {
        let g = four_vertex_example();
        let b = cycle_space(&g);
        let f = [1.0, 0.0, 1.0, 2.0, 1.0, 1.0];
        let d = decompose_in_cycles(&g, &b, &f, 1e-9).unwrap().unwrap();
        for (c, e) in d.coefficients.iter().zip([0.0, 1.0, 1.0]) {
            assert!((c - e).abs() < 1e-12);
        }
    }

    #[test]
    fn tree_has_no_cycles() {
        let g = Multigraph::new(4, vec![(0, 1), (1, 2), (3, 1)]).unwrap();
        let b = cycle_space(&g);
        assert_eq!(b.dimension, 0);
        let d = decompose_in_cycles(&g, &b, &[0.0; 3], 1e-9).unwrap().unwrap();
        assert!(d.coefficients.is_empty());
    }

    #[test]
    fn non_conserved_flow_fails() {
        let g = four_vertex_example();
        let b = cycle_space(&g);
        assert!(decompose_in_cycles(&g, &b, &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0], 1e-9).unwrap().is_err());
    }

    #[test]
    fn self_loops_and_parallel_edges() {
        let g = Multigraph::new(2, vec![(0, 0), (0, 1), (0, 1), (1, 0)]).unwrap();
        let b = cycle_space(&g);
        assert_eq!(b.dimension, 3);
        for z in &b.cycles {
            assert!(g.conservation_defect(&z.as_f64()).unwrap().iter().all(|&d| d == 0.0));
        }
    }
}
