use std::sync::{Arc, OnceLock};
use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::catalog::{builtin_examples, golden_alpha, Example};
use crate::error::Result;
use crate::graph::{
    cycle_space, cycle_vector_from_walk, decompose_in_cycles, euler_characteristic_with_report, four_vertex_example,
    Multigraph, RauzyGraph, build_rauzy_graph,
};
use crate::substitution::{fractal_cloud, perron, Substitution};
use crate::torus::measure::polygon_cylinder_measures;
use crate::torus::minimality::{DEFAULT_BOUND, DEFAULT_PRECISION};
use crate::torus::{
    exact_measure_identities, fundamental_domain_coverage, image_coverage, interval_cylinder_measures,
    monte_carlo_measure_identities,
};
use crate::verify::{CheckResult, VerificationReport};
use crate::word::{complexity, ComplexityReport, Symbol};

/// Names of all checks, in report order.
pub const CHECK_NAMES: [&str; 13] = [
    "sturmian-baseline",
    "kbonacci-equality",
    "hexagon-quadratic",
    "lower-bound",
    "piece-count",
    "increments",
    "graph-example",
    "cycle-roundtrip",
    "flow-conservation",
    "measure-identities",
    "euler-characteristic",
    "spectral",
    "fractal-boundedness",
];

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub seeds: Vec<u64>,
    /// Eigen-residual tolerance.
    pub tol: f64,
    pub prefix_cap: usize,
    /// Restrict to these checks; empty means all.
    pub only: Vec<String>,
    pub samples: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seeds: vec![crate::torus::examples::HEXAGON_DEFAULT_SEED],
            tol: 1e-12,
            prefix_cap: 1 << 24,
            only: Vec::new(),
            samples: crate::torus::measure::DEFAULT_SAMPLES,
        }
    }
}

impl VerifyConfig {
    /// Hexagon seeds: the configured ones, plus `seed + 1` when only one is
    /// given.
    pub fn hexagon_seeds(&self) -> Vec<u64> {
        let mut seeds = self.seeds.clone();
        if seeds.is_empty() {
            seeds.push(crate::torus::examples::HEXAGON_DEFAULT_SEED);
        }
        if seeds.len() == 1 {
            seeds.push(seeds[0].wrapping_add(1));
        }
        seeds.dedup();
        seeds
    }
}

/// Deterministic per-check seed.
pub fn check_seed(master: u64, name: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in name.bytes() {
        h = (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01b3);
    }
    let mut z = master ^ h;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

struct Table {
    name: String,
    k: usize,
    word: crate::word::LazyWord,
    report: ComplexityReport,
}

/// Complexity tables shared between checks, computed once on first use.
struct Context {
    config: VerifyConfig,
    circle: OnceLock<Table>,
    kbonacci: OnceLock<Vec<Table>>,
    hexagons: OnceLock<Vec<(u64, Table, Vec<usize>)>>,
}

const CIRCLE_N: usize = 50;
const HEXAGON_N: usize = 12;

fn table(example: &Example, n_max: usize) -> Table {
    let report = complexity(&example.word, n_max, example.policy).expect("n_max >= 1");
    Table { name: example.name.clone(), k: example.torus_dim, word: example.word.clone(), report }
}

impl Context {
    fn circle(&self) -> &Table {
        self.circle.get_or_init(|| {
            let e = Example::circle(golden_alpha()).expect("valid alpha").with_cap(self.config.prefix_cap);
            table(&e, CIRCLE_N)
        })
    }

    fn kbonacci(&self) -> &[Table] {
        self.kbonacci.get_or_init(|| {
            [(2, 30), (3, 30), (4, 20)]
                .par_iter()
                .map(|&(k, n)| table(&Example::k_bonacci(k).expect("k >= 2").with_cap(self.config.prefix_cap), n))
                .collect()
        })
    }

    /// Per seed: coding table and the exact number of cylinders per order.
    fn hexagons(&self) -> &[(u64, Table, Vec<usize>)] {
        self.hexagons.get_or_init(|| {
            self.config
                .hexagon_seeds()
                .par_iter()
                .map(|&seed| {
                    let e = Example::hexagon(seed).expect("hexagon builds").with_cap(self.config.prefix_cap);
                    let map = e.map.clone().expect("hexagon has a map");
                    let exact = (1..=HEXAGON_N)
                        .map(|n| polygon_cylinder_measures(&map, n, 1e-15).map(|c| c.len()).unwrap_or(0))
                        .collect();
                    (seed, table(&e, HEXAGON_N), exact)
                })
                .collect()
        })
    }

    fn all_tables(&self) -> Vec<&Table> {
        let mut out = vec![self.circle()];
        out.extend(self.kbonacci());
        out.extend(self.hexagons().iter().map(|h| &h.1));
        out
    }
}

struct Outcome {
    claim: &'static str,
    passed: bool,
    tolerance: &'static str,
    computed: Value,
    expected: Value,
    notes: Vec<String>,
}

fn rows(t: &Table) -> Value {
    json!(t.report.entries.iter().map(|e| json!([e.n, e.p, e.stabilized])).collect::<Vec<_>>())
}

fn exact_table(t: &Table, f: impl Fn(usize) -> usize) -> (bool, Vec<String>) {
    let mut notes = Vec::new();
    for e in &t.report.entries {
        if !e.stabilized {
            notes.push(format!("{}: row n={} not stabilized (prefix {})", t.name, e.n, e.prefix_len));
        } else if e.p != f(e.n) {
            notes.push(format!("{}: p({}) = {}, expected {}", t.name, e.n, e.p, f(e.n)));
        }
    }
    (notes.is_empty(), notes)
}

fn sturmian_baseline(ctx: &Context, _seed: u64) -> Result<Outcome> {
    let t = ctx.circle();
    let (passed, notes) = exact_table(t, |n| n + 1);
    Ok(Outcome {
        claim: "coding of the rotation by 1/phi has p(n) = n + 1",
        passed,
        tolerance: "exact",
        computed: rows(t),
        expected: json!("p(n) = n + 1, n = 1..50"),
        notes,
    })
}

fn kbonacci_equality(ctx: &Context, _seed: u64) -> Result<Outcome> {
    let mut passed = true;
    let mut notes = Vec::new();
    let mut computed = serde_json::Map::new();
    for t in ctx.kbonacci() {
        let (ok, n) = exact_table(t, |n| t.k * n + 1);
        passed &= ok;
        notes.extend(n);
        computed.insert(t.name.clone(), json!(t.report.values()));
    }
    Ok(Outcome {
        claim: "the k-bonacci fixed point has p(n) = (k-1)n + 1",
        passed,
        tolerance: "exact",
        computed: Value::Object(computed),
        expected: json!({"kbonacci-2": "n + 1", "kbonacci-3": "2n + 1", "kbonacci-4": "3n + 1"}),
        notes,
    })
}

fn hexagon_quadratic(ctx: &Context, _seed: u64) -> Result<Outcome> {
    let mut good = Vec::new();
    let mut notes = Vec::new();
    let mut computed = serde_json::Map::new();
    for (seed, t, exact) in ctx.hexagons() {
        let (ok, n) = exact_table(t, |n| n * n + n + 1);
        notes.extend(n);
        for (e, &x) in t.report.entries.iter().zip(exact) {
            if e.stabilized && e.p != x {
                notes.push(format!("{}: row n={} stabilized at {} but the exact cylinder count is {x}", t.name, e.n, e.p));
            }
        }
        if ok {
            good.push(*seed);
        }
        computed.insert(
            seed.to_string(),
            json!({"coding": rows(t), "exact_cylinders": exact, "translation": ctx_translation(*seed)}),
        );
    }
    Ok(Outcome {
        claim: "coding of a generic hexagon translation has p(n) = n^2 + n + 1",
        passed: good.len() >= 2,
        tolerance: "exact, stabilized rows, at least 2 seeds",
        computed: json!({"seeds": Value::Object(computed), "matching_seeds": good}),
        expected: json!("p(n) = n^2 + n + 1, n = 1..12"),
        notes,
    })
}

fn ctx_translation(seed: u64) -> Value {
    crate::torus::hexagon_default(seed).map(|m| json!(m.translation().vector())).unwrap_or(Value::Null)
}

fn examples_with_hexagons(ctx: &Context) -> Result<Vec<Example>> {
    let mut list: Vec<Example> =
        builtin_examples()?.into_iter().filter(|e| !matches!(e.kind, crate::catalog::ExampleKind::Hexagon { .. })).collect();
    for seed in ctx.config.hexagon_seeds() {
        list.push(Example::hexagon(seed)?);
    }
    Ok(list)
}

fn lower_bound(ctx: &Context, _seed: u64) -> Result<Outcome> {
    let examples = examples_with_hexagons(ctx)?;
    let tables = ctx.all_tables();
    let mut passed = true;
    let mut notes = Vec::new();
    let mut computed = serde_json::Map::new();
    for e in &examples {
        let verdict = e.minimality(DEFAULT_BOUND, DEFAULT_PRECISION);
        let Some(t) = tables.iter().find(|t| t.name == e.name) else { continue };
        if !verdict.is_minimal_evidence() {
            notes.push(format!("{}: skipped, relation {:?}", e.name, verdict.relation));
            continue;
        }
        let violations: Vec<usize> =
            t.report.entries.iter().filter(|r| r.p < e.torus_dim * r.n + 1).map(|r| r.n).collect();
        if !violations.is_empty() {
            passed = false;
            notes.push(format!("{}: p(n) < kn + 1 at n = {violations:?}", e.name));
        }
        computed.insert(e.name.clone(), json!({"k": e.torus_dim, "minimality": verdict, "p": t.report.values()}));
    }
    Ok(Outcome {
        claim: "p(n) >= kn + 1 for codings of minimal translations of T^k",
        passed,
        tolerance: "exact, all rows including lower-bound rows",
        computed: Value::Object(computed),
        expected: json!("p(n) >= kn + 1"),
        notes,
    })
}

fn piece_count(ctx: &Context, _seed: u64) -> Result<Outcome> {
    let mut passed = true;
    let mut computed = serde_json::Map::new();
    let mut notes = Vec::new();
    for e in examples_with_hexagons(ctx)? {
        let (k, m) = (e.torus_dim, e.piece_count);
        let tight = !matches!(e.kind, crate::catalog::ExampleKind::Circle { .. });
        let ok = m > k && (!tight || m == k + 1);
        if !ok {
            notes.push(format!("{}: m = {m}, k = {k}", e.name));
        }
        passed &= ok;
        computed.insert(e.name.clone(), json!({"k": k, "m": m}));
    }
    Ok(Outcome {
        claim: "a piecewise translation over a minimal translation of T^k has m >= k + 1 pieces",
        passed,
        tolerance: "exact; m = k + 1 for k-bonacci and hexagon",
        computed: Value::Object(computed),
        expected: json!("m >= k + 1"),
        notes,
    })
}

fn increments(ctx: &Context, _seed: u64) -> Result<Outcome> {
    let mut passed = true;
    let mut notes = Vec::new();
    let mut computed = serde_json::Map::new();
    for t in ctx.all_tables() {
        let mut min: Option<i64> = None;
        for w in t.report.entries.windows(2) {
            if !(w[0].stabilized && w[1].stabilized) {
                continue;
            }
            let d = w[1].p as i64 - w[0].p as i64;
            min = Some(min.map_or(d, |m: i64| m.min(d)));
            if d < t.k as i64 {
                passed = false;
                notes.push(format!("{}: p({}) - p({}) = {d} < {}", t.name, w[1].n, w[0].n, t.k));
            }
        }
        computed.insert(t.name.clone(), json!({"k": t.k, "min_increment": min}));
    }
    Ok(Outcome {
        claim: "p(n+1) - p(n) >= k on stabilized rows",
        passed,
        tolerance: "exact",
        computed: Value::Object(computed),
        expected: json!("min_increment >= k"),
        notes,
    })
}

fn graph_example(_ctx: &Context, _seed: u64) -> Result<Outcome> {
    let g = four_vertex_example();
    let basis = cycle_space(&g);
    let z = cycle_vector_from_walk(&g, &[0, 2, 1])?;
    let f = [1.0, 0.0, 1.0, 2.0, 1.0, 1.0];
    let defect = g.conservation_defect(&f)?;
    let out_1: f64 = g.edges().iter().zip(&f).filter(|(e, _)| e.0 == 0).map(|(_, v)| v).sum();
    let in_1: f64 = g.edges().iter().zip(&f).filter(|(e, _)| e.1 == 0).map(|(_, v)| v).sum();
    let out_terms: Vec<String> =
        g.edges().iter().zip(&f).filter(|(e, _)| e.0 == 0).map(|(_, v)| v.to_string()).collect();
    let balance = format!("{} = {}", in_1, out_terms.join(" + "));
    let dec = decompose_in_cycles(&g, &basis, &f, 1e-12)?;
    let (coefficients, residual) = match &dec {
        Ok(d) => (d.coefficients.clone(), d.residual),
        Err(e) => (e.coefficients.clone(), e.residual),
    };
    let passed = basis.dimension == 3
        && z.render(&g) == "e6 - e2 - e1"
        && defect.iter().all(|&d| d == 0.0)
        && in_1 == 2.0
        && out_1 == 2.0
        && balance == "2 = 1 + 1"
        && dec.is_ok();
    Ok(Outcome {
        claim: "the four-vertex example has dim Z = 6 - 4 + 1 = 3 and f = (1,0,1,2,1,1) is a flow",
        passed,
        tolerance: "exact",
        computed: json!({
            "dimension": basis.dimension,
            "cycle_132": z.render(&g),
            "fundamental_cycles": basis.cycles.iter().map(|c| c.render(&g)).collect::<Vec<_>>(),
            "defects": defect,
            "vertex_1_balance": balance,
            "coefficients": coefficients,
            "residual": residual,
        }),
        expected: json!({"dimension": 3, "cycle_132": "e6 - e2 - e1", "vertex_1_balance": "2 = 1 + 1"}),
        notes: Vec::new(),
    })
}

/// A random connected multigraph with at most 12 vertices and 30 edges.
pub fn random_connected_multigraph(rng: &mut ChaCha8Rng) -> Multigraph {
    let v = rng.random_range(1..=12usize);
    let e = rng.random_range((v - 1).max(1)..=30usize);
    let mut edges = Vec::with_capacity(e);
    for i in 1..v {
        let p = rng.random_range(0..i);
        edges.push(if rng.random::<bool>() { (p, i) } else { (i, p) });
    }
    while edges.len() < e {
        edges.push((rng.random_range(0..v), rng.random_range(0..v)));
    }
    // Shuffle edge order so tree edges are not always first.
    for i in (1..edges.len()).rev() {
        let j = rng.random_range(0..=i);
        edges.swap(i, j);
    }
    Multigraph::new(v, edges).expect("endpoints in range")
}

/// A random element of the flow space of a connected graph: a uniform random
/// vector projected onto the kernel of the incidence matrix.
pub fn random_conservative_flow(g: &Multigraph, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let (v, e) = (g.vertex_count(), g.edge_count());
    let mut b = DMatrix::<f64>::zeros(v, e);
    for (j, &(s, t)) in g.edges().iter().enumerate() {
        b[(s, j)] += 1.0;
        b[(t, j)] -= 1.0;
    }
    let x = DVector::from_fn(e, |_, _| rng.random_range(-1.0..1.0));
    if v < 2 {
        return x.iter().copied().collect();
    }
    // Potentials y with y_0 = 0 solving B Bᵀ y = B x; the grounded Laplacian
    // of a connected graph is positive definite.
    let grounded = b.rows(1, v - 1).into_owned();
    let lap = &grounded * grounded.transpose();
    let rhs = &grounded * &x;
    let y = lap.cholesky().expect("connected graph").solve(&rhs);
    let f = &x - grounded.transpose() * y;
    f.iter().copied().collect()
}

fn cycle_roundtrip(_ctx: &Context, seed: u64) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst_residual = 0f64;
    let mut worst_defect = 0f64;
    let mut notes = Vec::new();
    let mut passed = true;
    for i in 0..100 {
        let g = random_connected_multigraph(&mut rng);
        let basis = cycle_space(&g);
        let expected_dim = g.edge_count() + 1 - g.vertex_count();
        if basis.dimension != expected_dim || !g.is_connected() {
            passed = false;
            notes.push(format!("graph {i}: dim {} != {expected_dim}", basis.dimension));
        }
        let f = random_conservative_flow(&g, &mut rng);
        let defect = g.conservation_defect(&f)?.iter().fold(0f64, |m, d| m.max(d.abs()));
        worst_defect = worst_defect.max(defect);
        match decompose_in_cycles(&g, &basis, &f, 1e-9)? {
            Ok(d) => worst_residual = worst_residual.max(d.residual),
            Err(e) => {
                passed = false;
                worst_residual = worst_residual.max(e.residual);
                notes.push(format!("graph {i}: residual {:e}", e.residual));
            }
        }
    }
    Ok(Outcome {
        claim: "on connected graphs every flow is a combination of fundamental cycles, dim Z = |E| - |V| + 1",
        passed,
        tolerance: "residual < 1e-9",
        computed: json!({"graphs": 100, "max_residual": worst_residual, "max_flow_defect": worst_defect}),
        expected: json!({"max_residual": "< 1e-9"}),
        notes,
    })
}

fn flow_conservation(_ctx: &Context, _seed: u64) -> Result<Outcome> {
    let mut passed = true;
    let mut notes = Vec::new();
    let mut computed = serde_json::Map::new();
    for k in [2usize, 3] {
        let w = Substitution::k_bonacci(k)?.fixed_point(Symbol(0))?;
        let mut worst = 0i64;
        for n in 1..=10 {
            let g = build_rauzy_graph(&w, n, 100_000)?;
            let d = g.count_defects().expect("counts present");
            let m = d.iter().map(|x| x.abs()).max().unwrap_or(0);
            worst = worst.max(m);
        }
        if worst > 1 {
            passed = false;
            notes.push(format!("kbonacci-{k}: count defect {worst}"));
        }
        computed.insert(format!("kbonacci-{k}"), json!({"max_count_defect": worst}));
    }
    let map = crate::torus::circle_rotation(golden_alpha())?;
    let mut worst = 0f64;
    let mut worst_res = 0f64;
    for n in 1..=10 {
        let cylinders = interval_cylinder_measures(&map, n + 1)?;
        let g = RauzyGraph::from_edge_words(n, map.alphabet(), cylinders)?;
        let d = g.graph.conservation_defect(&g.weights)?;
        worst = d.iter().fold(worst, |m, x| m.max(x.abs()));
        match decompose_in_cycles(&g.graph, &cycle_space(&g.graph), &g.weights, 1e-12)? {
            Ok(dec) => worst_res = worst_res.max(dec.residual),
            Err(e) => {
                worst_res = worst_res.max(e.residual);
                passed = false;
                notes.push(format!("circle n={n}: decomposition residual {:e}", e.residual));
            }
        }
    }
    if worst >= 1e-12 {
        passed = false;
        notes.push(format!("circle: measure defect {worst:e}"));
    }
    computed.insert("circle-exact".into(), json!({"max_defect": worst, "max_decomposition_residual": worst_res}));
    Ok(Outcome {
        claim: "edge weights of Rauzy graphs are conserved at every vertex",
        passed,
        tolerance: "count defect in {-1, 0, 1}; exact measure defect < 1e-12",
        computed: Value::Object(computed),
        expected: json!({"max_count_defect": "<= 1", "max_defect": "< 1e-12"}),
        notes,
    })
}

fn measure_identities(ctx: &Context, seed: u64) -> Result<Outcome> {
    let mut passed = true;
    let mut notes = Vec::new();
    let circle = crate::torus::circle_rotation(golden_alpha())?;
    let exact = exact_measure_identities(&circle)?;
    if !(exact.max_translation_residual() < 1e-12 && exact.volume_residual.abs() < 1e-12) {
        passed = false;
        notes.push("circle identities off by more than 1e-12".into());
    }
    let mut hex = serde_json::Map::new();
    for (i, h) in ctx.config.hexagon_seeds().into_iter().enumerate() {
        let map = crate::torus::hexagon_default(h)?;
        let s = seed.wrapping_add(i as u64);
        let mc = monte_carlo_measure_identities(&map, ctx.config.samples, s)?;
        let fd = fundamental_domain_coverage(&map, ctx.config.samples, s ^ 1);
        let ic = image_coverage(&map, ctx.config.samples, s ^ 2);
        let ok = mc.holds(3.0, 0.0) && fd.fraction() >= 0.999 && ic.fraction() >= 1.0 - 1e-3;
        if !ok {
            passed = false;
            notes.push(format!("hexagon-{h}: identities or coverage outside tolerance"));
        }
        hex.insert(
            format!("hexagon-{h}"),
            json!({
                "monte_carlo": mc,
                "fundamental_domain_coverage": fd.fraction(),
                "image_coverage": ic.fraction(),
            }),
        );
    }
    Ok(Outcome {
        claim: "a + sum A_i r_i = 0 mod Z^k and sum A_i = 1",
        passed,
        tolerance: "circle exact < 1e-12; hexagon within 3 standard errors; coverage >= 0.999",
        computed: json!({"circle": exact, "hexagon": Value::Object(hex)}),
        expected: json!({"translation_residual": 0.0, "volume_residual": 0.0}),
        notes,
    })
}

fn euler_characteristic(ctx: &Context, _seed: u64) -> Result<Outcome> {
    let results: Vec<_> = ctx
        .all_tables()
        .into_iter()
        .map(|t| euler_characteristic_with_report(&t.word, t.k, 10, &t.report).map(|r| (t.name.clone(), r)))
        .collect::<Result<_>>()?;
    let mut passed = true;
    let mut notes = Vec::new();
    let mut computed = serde_json::Map::new();
    for (name, r) in results {
        passed &= r.holds();
        if !r.strict_holds() {
            notes.push(format!("{name}: chi >= k + 1 fails on some order"));
        }
        if r.rows.iter().any(|row| !row.connected) {
            notes.push(format!("{name}: disconnected graph"));
        }
        computed.insert(
            name,
            json!({
                "k": r.k,
                "chi": r.rows.iter().map(|row| row.stats.chi).collect::<Vec<_>>(),
                "chi_at_least_k": r.holds(),
                "chi_at_least_k_plus_1": r.strict_holds(),
            }),
        );
    }
    Ok(Outcome {
        claim: "Rauzy graphs have Euler characteristic at least k",
        passed,
        tolerance: "exact; chi >= k + 1 recorded only",
        computed: Value::Object(computed),
        expected: json!("chi >= k"),
        notes,
    })
}

/// Largest root in [1, 2] of `x^k - x^{k-1} - ... - 1`, by bisection.
fn bisection_root(k: usize) -> f64 {
    let f = |x: f64| x.powi(k as i32) - (0..k).map(|i| x.powi(i as i32)).sum::<f64>();
    let (mut lo, mut hi) = (1.0f64, 2.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn spectral(ctx: &Context, _seed: u64) -> Result<Outcome> {
    let mut passed = true;
    let mut computed = serde_json::Map::new();
    for k in [2usize, 3] {
        let s = Substitution::k_bonacci(k)?;
        let data = perron(&s.abelianization(), ctx.config.tol)?;
        let root = bisection_root(k);
        let len = 1_000_000;
        let prefix = s.fixed_point(Symbol(0))?.prefix(len);
        let mut freq = vec![0f64; k];
        for x in &prefix.symbols {
            freq[x.index()] += 1.0;
        }
        freq.iter_mut().for_each(|f| *f /= len as f64);
        let freq_err = freq.iter().zip(&data.right).fold(0f64, |m, (a, b)| m.max((a - b).abs()));
        let eig_err = (data.dominant_eigenvalue - root).abs();
        passed &= eig_err < 1e-10 && freq_err < 1e-3;
        computed.insert(
            format!("kbonacci-{k}"),
            json!({
                "eigenvalue": data.dominant_eigenvalue,
                "bisection_root": root,
                "eigenvalue_error": eig_err,
                "frequencies": freq,
                "eigenvector": data.right,
                "frequency_error": freq_err,
            }),
        );
    }
    Ok(Outcome {
        claim: "Perron eigenvalues are the k-bonacci roots and letter frequencies follow the eigenvector",
        passed,
        tolerance: "eigenvalue 1e-10; frequencies 1e-3",
        computed: Value::Object(computed),
        expected: json!({"kbonacci-2": bisection_root(2), "kbonacci-3": bisection_root(3)}),
        notes: Vec::new(),
    })
}

fn fractal_boundedness(ctx: &Context, _seed: u64) -> Result<Outcome> {
    let s = Substitution::k_bonacci(3)?;
    let (small, large) = rayon::join(|| fractal_cloud(&s, 100_000, ctx.config.tol), || fractal_cloud(&s, 200_000, ctx.config.tol));
    let (small, large) = (small?, large?);
    let ratio = large.radius / small.radius;
    let proj = small.projection.coordinates(&small.projection.right);
    let norm = proj.iter().map(|x| x * x).sum::<f64>().sqrt();
    let labels = small.labels.iter().map(|l| l.index()).collect::<std::collections::BTreeSet<_>>().len();
    Ok(Outcome {
        claim: "the tribonacci cloud is bounded and the projection kills the expanding direction",
        passed: (ratio - 1.0).abs() <= 0.05 && norm < 1e-10 && labels == 3,
        tolerance: "radius ratio within 5%; projection norm < 1e-10",
        computed: json!({
            "radius_100000": small.radius,
            "radius_200000": large.radius,
            "ratio": ratio,
            "eigenvector_projection_norm": norm,
            "pieces": labels,
        }),
        expected: json!({"ratio": 1.0, "eigenvector_projection_norm": 0.0, "pieces": 3}),
        notes: Vec::new(),
    })
}

type CheckFn = fn(&Context, u64) -> Result<Outcome>;

fn check_fn(name: &str) -> Option<CheckFn> {
    Some(match name {
        "sturmian-baseline" => sturmian_baseline,
        "kbonacci-equality" => kbonacci_equality,
        "hexagon-quadratic" => hexagon_quadratic,
        "lower-bound" => lower_bound,
        "piece-count" => piece_count,
        "increments" => increments,
        "graph-example" => graph_example,
        "cycle-roundtrip" => cycle_roundtrip,
        "flow-conservation" => flow_conservation,
        "measure-identities" => measure_identities,
        "euler-characteristic" => euler_characteristic,
        "spectral" => spectral,
        "fractal-boundedness" => fractal_boundedness,
        _ => return None,
    })
}

/// Run the battery. Unknown names in `config.only` are reported as an error.
pub fn run_verification(config: &VerifyConfig) -> Result<VerificationReport> {
    let names: Vec<&str> = if config.only.is_empty() {
        CHECK_NAMES.to_vec()
    } else {
        for n in &config.only {
            if check_fn(n).is_none() {
                return Err(crate::Error::InvalidArguments(format!(
                    "unknown check {n:?}; known checks: {}",
                    CHECK_NAMES.join(", ")
                )));
            }
        }
        CHECK_NAMES.iter().copied().filter(|n| config.only.iter().any(|o| o == n)).collect()
    };
    let master = config.seeds.first().copied().unwrap_or(crate::torus::examples::HEXAGON_DEFAULT_SEED);
    let ctx = Arc::new(Context {
        config: config.clone(),
        circle: OnceLock::new(),
        kbonacci: OnceLock::new(),
        hexagons: OnceLock::new(),
    });
    let checks = names
        .par_iter()
        .map(|&name| {
            let seed = check_seed(master, name);
            let start = Instant::now();
            let outcome = check_fn(name).expect("known check")(&ctx, seed);
            let runtime = start.elapsed();
            match outcome {
                Ok(o) => CheckResult {
                    name: name.to_string(),
                    claim: o.claim.to_string(),
                    passed: o.passed,
                    tolerance: o.tolerance.to_string(),
                    computed: o.computed,
                    expected: o.expected,
                    notes: o.notes,
                    seed,
                    runtime,
                },
                Err(e) => CheckResult {
                    name: name.to_string(),
                    claim: String::new(),
                    passed: false,
                    tolerance: String::new(),
                    computed: Value::Null,
                    expected: Value::Null,
                    notes: vec![format!("error: {e}")],
                    seed,
                    runtime,
                },
            }
        })
        .collect();
    Ok(VerificationReport { seeds: config.seeds.clone(), checks })
}
