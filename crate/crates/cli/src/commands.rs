//! One function per subcommand. Analyses return a [`Report`] that embeds
//! its inputs so `verify` can re-check it; generators return instance files.

use std::collections::BTreeMap;

use qgraph::classical::{
    classical_vertex_connectivity, confusability, lift, random_orth_rep,
    validate_orth_rep, ClassicalGraph, OrthonormalBasisCn,
};
use qgraph::connect::{
    is_connected_seeded, separator_search, tree_packing_check, SearchConfig,
    SeparatorMode, SeparatorReport,
};
use qgraph::cpmaps::{
    check_lgp, check_orth_rep, classical_to_quantum_rep, lgp_connectivity_bound, LgpVerdict,
    SampledVerdict,
};
use qgraph::instances::{hamming_cube, maximal_example, random_operator_system};
use qgraph::random::substream;
use qgraph::{KrausMap, Tolerance};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;
use crate::io::{
    any_graph_from, basis_from, basis_to, classical_graph_from, classical_graph_to, kraus_from,
    kraus_to, matrix_to_json, partition_from, quantum_graph_from, quantum_graph_to, InstanceFile,
    MatrixJson, Meta, TolJson,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub command: String,
    pub seed: u64,
    pub tolerance: TolJson,
    pub inputs: BTreeMap<String, InstanceFile>,
    pub result: Value,
    pub summary: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

pub enum Output {
    /// A report, flagged when its verdict is negative.
    Report(Report, bool),
    Instance(InstanceFile),
}

/// Shared run settings: seed and the resolved tolerance.
#[derive(Debug, Clone, Copy)]
pub struct Ctx {
    pub seed: u64,
    pub tol: Tolerance,
}

impl Ctx {
    fn report(&self, command: &str, inputs: Vec<(&str, InstanceFile)>, result: impl Serialize, summary: String) -> Report {
        Report {
            command: command.to_string(),
            seed: self.seed,
            tolerance: self.tol.into(),
            inputs: inputs.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            result: serde_json::to_value(result).expect("serializable"),
            summary,
            warnings: Vec::new(),
        }
    }

    fn meta(&self, name: String) -> Option<Meta> {
        Some(Meta {
            name: Some(name),
            seed: Some(self.seed),
            tolerance: None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConnectednessResult {
    pub n: usize,
    pub dim: usize,
    pub verdict: String,
    pub stabilization_power: usize,
    pub algebra_dim: usize,
    pub commutant_dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<MatrixJson>,
}

pub fn connectedness(ctx: &Ctx, graph: InstanceFile) -> Result<Output, CliError> {
    let s = quantum_graph_from(&graph, ctx.tol, "graph")?;
    let cert = is_connected_seeded(&s, ctx.seed)?;
    let verdict = if cert.is_connected() { "connected" } else { "disconnected" };
    let result = ConnectednessResult {
        n: s.ambient_dim(),
        dim: s.dim(),
        verdict: verdict.into(),
        stabilization_power: cert.stabilization_power,
        algebra_dim: cert.algebra_dim,
        commutant_dim: cert.commutant_dim,
        witness: cert.witness.as_ref().map(|p| matrix_to_json(p.matrix())),
    };
    let summary = format!(
        "{verdict}: S ⊆ M_{} of dimension {}, powers stabilize at m = {}, commutant dimension {}",
        result.n, result.dim, result.stabilization_power, result.commutant_dim
    );
    let negative = !cert.is_connected();
    Ok(Output::Report(ctx.report("connectedness", vec![("graph", graph)], result, summary), negative))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparatorJson {
    pub rank: usize,
    pub mode: String,
    pub compressed_dim: usize,
    pub projection: MatrixJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<[MatrixJson; 2]>,
}

fn separator_json(r: &SeparatorReport<f64>) -> SeparatorJson {
    SeparatorJson {
        rank: r.rank(),
        mode: match r.mode {
            SeparatorMode::Disconnection => "disconnection".into(),
            SeparatorMode::OneDimensional => "one_dimensional".into(),
        },
        compressed_dim: r.compressed_dim,
        projection: matrix_to_json(r.separator.matrix()),
        blocks: r
            .blocks
            .as_ref()
            .map(|(a, b)| [matrix_to_json(a.matrix()), matrix_to_json(b.matrix())]),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsResult {
    pub n: usize,
    pub lower: usize,
    pub upper: usize,
    pub tight: bool,
    pub conditional_lower: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lgp_bound: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub separator: Option<SeparatorJson>,
    pub restarts: usize,
    pub method_log: Vec<String>,
}

pub fn k_bounds(
    ctx: &Ctx,
    graph: InstanceFile,
    restarts: usize,
    samples: usize,
    lgp_rep: Option<InstanceFile>,
) -> Result<Output, CliError> {
    let s = quantum_graph_from(&graph, ctx.tol, "graph")?;
    let mut warnings = Vec::new();
    let mut lgp_bound = None;
    if let Some(file) = &lgp_rep {
        let phi = kraus_from(file, ctx.tol, "lgp-rep")?;
        match lgp_connectivity_bound(&phi, &s, samples, ctx.seed) {
            Ok(b) => lgp_bound = Some(b),
            Err(e) => warnings.push(format!("LGP bound omitted: {e}")),
        }
    }
    let config = SearchConfig {
        restarts,
        seed: ctx.seed,
        lgp_lower: lgp_bound,
        ..SearchConfig::default()
    };
    let b = separator_search(&s, &config)?;
    let result = BoundsResult {
        n: s.ambient_dim(),
        lower: b.lower,
        upper: b.upper,
        tight: b.is_tight(),
        conditional_lower: b.conditional_lower,
        lgp_bound,
        separator: b.best_separator.as_ref().map(separator_json),
        restarts,
        method_log: b.method_log.clone(),
    };
    let summary = if b.is_tight() {
        format!("connectivity exactly {}", b.lower)
    } else {
        format!("connectivity between {} and {}", b.lower, b.upper)
    } + if b.conditional_lower { " (lower bound conditional on sampled checks)" } else { "" };
    let mut inputs = vec![("graph", graph)];
    if let Some(f) = lgp_rep {
        inputs.push(("lgp_rep", f));
    }
    let mut report = ctx.report("k-bounds", inputs, result, summary);
    report.warnings = warnings;
    Ok(Output::Report(report, false))
}

pub fn lift_cmd(ctx: &Ctx, graph: InstanceFile) -> Result<Output, CliError> {
    let g = classical_graph_from(&graph, "graph")?;
    let s = lift::<f64>(&g, ctx.tol);
    let name = format!("S_G for a graph on {} vertices", g.n());
    Ok(Output::Instance(quantum_graph_to(&s, Some(Meta { name: Some(name), ..Meta::default() }))))
}

pub fn confusability_cmd(ctx: &Ctx, graph: InstanceFile, basis: Option<InstanceFile>, haar: bool) -> Result<Output, CliError> {
    let s = quantum_graph_from(&graph, ctx.tol, "graph")?;
    let n = s.ambient_dim();
    let v = match (basis, haar) {
        (Some(_), true) => return Err(CliError::Usage("give either --basis or --haar".into())),
        (Some(f), false) => {
            let b = basis_from(&f, ctx.tol, "basis")?;
            if b.n() != n {
                return Err(qgraph::Error::Dimension { expected: n.to_string(), found: b.n().to_string() }.into());
            }
            b
        }
        (None, true) => OrthonormalBasisCn::haar(n, &mut substream(ctx.seed, "haar-basis", 0)),
        (None, false) => OrthonormalBasisCn::standard(n),
    };
    let g = confusability(s.space(), &v)?;
    let mut meta = ctx.meta("confusability graph".into());
    if !haar {
        meta.as_mut().expect("set").seed = None;
    }
    Ok(Output::Instance(classical_graph_to(&g, meta)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelGraphResult {
    pub n: usize,
    pub dim: usize,
    pub verdict: String,
    pub graph: InstanceFile,
}

pub fn channel_graph(ctx: &Ctx, map: InstanceFile) -> Result<(Output, InstanceFile), CliError> {
    let phi = kraus_from(&map, ctx.tol, "map")?;
    let s = phi.channel_confusability()?;
    let cert = is_connected_seeded(&s, ctx.seed)?;
    let verdict = if cert.is_connected() { "connected" } else { "disconnected" };
    let graph = quantum_graph_to(&s, Some(Meta { name: Some("channel confusability graph".into()), ..Meta::default() }));
    let result = ChannelGraphResult {
        n: s.ambient_dim(),
        dim: s.dim(),
        verdict: verdict.into(),
        graph: graph.clone(),
    };
    let summary = format!("span{{K_i† K_j}} has dimension {} in M_{}; {verdict}", s.dim(), s.ambient_dim());
    Ok((Output::Report(ctx.report("channel-graph", vec![("map", map)], result, summary), false), graph))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreePackingResult {
    pub parts: usize,
    pub sum: usize,
    pub bound: usize,
    pub holds: bool,
}

pub fn tree_packing(ctx: &Ctx, graph: InstanceFile, partition: InstanceFile) -> Result<Output, CliError> {
    let s = any_graph_from(&graph, ctx.tol, "graph")?;
    let parts = partition_from(&partition, ctx.tol, "partition")?;
    let t = tree_packing_check(s.space(), &parts)?;
    let result = TreePackingResult {
        parts: parts.len(),
        sum: t.sum,
        bound: t.bound,
        holds: t.holds,
    };
    let summary = format!(
        "Σ dim P_j S P_i = {} {} 2(m − 1) = {}",
        t.sum,
        if t.holds { "≥" } else { "<" },
        t.bound
    );
    let report = ctx.report("tree-packing", vec![("graph", graph), ("partition", partition)], result, summary);
    Ok(Output::Report(report, !t.holds))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationJson {
    pub a: MatrixJson,
    pub b: MatrixJson,
    pub product: String,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrthRepResult {
    pub samples: usize,
    pub pairs_tested: usize,
    pub marginal: usize,
    pub worst_residual: f64,
    pub verdict: String,
    pub violations: Vec<ViolationJson>,
}

fn sampled(v: SampledVerdict) -> String {
    match v {
        SampledVerdict::PassSampled => "pass_sampled".into(),
        SampledVerdict::Violated => "violated".into(),
    }
}

pub fn check_orth_rep_cmd(ctx: &Ctx, map: InstanceFile, graph: InstanceFile, samples: usize) -> Result<Output, CliError> {
    let phi = kraus_from(&map, ctx.tol, "map")?;
    let s = any_graph_from(&graph, ctx.tol, "graph")?;
    let r = check_orth_rep(&phi, &s, samples, ctx.seed)?;
    let negative = r.verdict == SampledVerdict::Violated;
    let result = OrthRepResult {
        samples,
        pairs_tested: r.pairs_tested,
        marginal: r.marginal,
        worst_residual: r.worst_residual,
        verdict: sampled(r.verdict),
        violations: r
            .violations
            .iter()
            .map(|v| ViolationJson {
                a: matrix_to_json(&v.a),
                b: matrix_to_json(&v.b),
                product: v.product.to_string(),
                residual: v.residual,
            })
            .collect(),
    };
    let summary = if negative {
        format!("{} of {} annihilating pairs map to non-orthogonal pairs", r.violations.len(), r.pairs_tested)
    } else {
        format!("all {} sampled annihilating pairs map to C*-orthogonal pairs (sampled, not a proof)", r.pairs_tested)
    };
    let report = ctx.report("check-orth-rep", vec![("map", map), ("graph", graph)], result, summary);
    Ok(Output::Report(report, negative))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LgpViolationJson {
    pub q: MatrixJson,
    pub p: MatrixJson,
    pub rank: usize,
    pub rank_image: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LgpResult {
    pub samples: usize,
    pub verdict: String,
    pub directions: usize,
    pub annihilated_directions: usize,
    pub projections_tested: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub violation: Option<LgpViolationJson>,
}

pub fn check_lgp_cmd(ctx: &Ctx, map: InstanceFile, graph: InstanceFile, samples: usize) -> Result<Output, CliError> {
    let phi = kraus_from(&map, ctx.tol, "map")?;
    let s = any_graph_from(&graph, ctx.tol, "graph")?;
    let r = check_lgp(&phi, &s, samples, ctx.seed)?;
    let violation = match &r.verdict {
        LgpVerdict::PassSampled => None,
        LgpVerdict::Violated { q, p, rank_image } => Some(LgpViolationJson {
            q: matrix_to_json(q.matrix()),
            p: matrix_to_json(p.matrix()),
            rank: p.rank(),
            rank_image: *rank_image,
        }),
    };
    let summary = match &violation {
        None => format!(
            "rank Φ(P) ≥ rank P on {} sampled projections (sampled, not a proof)",
            r.projections_tested
        ),
        Some(v) => format!("rank Φ(P) = {} < rank P = {}", v.rank_image, v.rank),
    };
    let negative = violation.is_some();
    let result = LgpResult {
        samples,
        verdict: if negative { "violated".into() } else { "pass_sampled".into() },
        directions: r.directions,
        annihilated_directions: r.annihilated_directions,
        projections_tested: r.projections_tested,
        violation,
    };
    let report = ctx.report("check-lgp", vec![("map", map), ("graph", graph)], result, summary);
    Ok(Output::Report(report, negative))
}

pub enum Generate {
    Graph { n: usize, p: f64 },
    Basis { n: usize },
    Channel { n: usize, d: usize, k: usize },
    System { n: usize, gens: usize },
    Cube { order: usize },
    Maximal { n: usize },
    OrthRep { graph: InstanceFile, d: Option<usize> },
}

pub fn generate(ctx: &Ctx, what: Generate) -> Result<Output, CliError> {
    let mut rng = substream(ctx.seed, "generate", 0);
    let usage = |m: &str| Err(CliError::Usage(m.into()));
    let file = match what {
        Generate::Graph { n, p } => {
            if n == 0 || !(0.0..=1.0).contains(&p) {
                return usage("need n ≥ 1 and 0 ≤ p ≤ 1");
            }
            let g = ClassicalGraph::gnp(n, p, &mut rng);
            classical_graph_to(&g, ctx.meta(format!("G({n}, {p})")))
        }
        Generate::Basis { n } => {
            if n == 0 {
                return usage("need n ≥ 1");
            }
            basis_to(&OrthonormalBasisCn::haar(n, &mut rng), ctx.meta(format!("Haar basis of C^{n}")))
        }
        Generate::Channel { n, d, k } => {
            if n == 0 || d == 0 || k == 0 {
                return usage("dimensions must be positive");
            }
            let phi = KrausMap::stinespring(n, d, k, ctx.tol, &mut rng)?;
            kraus_to(&phi, ctx.meta(format!("Stinespring channel M_{n} → M_{d}, {k} Kraus operators")))
        }
        Generate::System { n, gens } => {
            if n == 0 {
                return usage("need n ≥ 1");
            }
            let s = random_operator_system::<f64, _>(n, gens, ctx.tol, &mut rng);
            quantum_graph_to(&s, ctx.meta(format!("random operator system in M_{n}, {gens} generators")))
        }
        Generate::Cube { order } => {
            if !(1..=6).contains(&order) {
                return usage("cube order must lie in 1..=6");
            }
            let s = hamming_cube::<f64>(order, ctx.tol);
            quantum_graph_to(&s, Some(Meta { name: Some(format!("Hamming cube C_{order}")), ..Meta::default() }))
        }
        Generate::Maximal { n } => {
            if n == 0 {
                return usage("need n ≥ 1");
            }
            let s = maximal_example::<f64>(n, ctx.tol);
            quantum_graph_to(&s, Some(Meta { name: Some(format!("span{{I_{n}, E_ij : i ≠ j}}")), ..Meta::default() }))
        }
        Generate::OrthRep { graph, d } => {
            let g = classical_graph_from(&graph, "graph")?;
            let n = g.n();
            let d = match d {
                Some(d) => d,
                None if n > 1 => n - classical_vertex_connectivity(&g)?,
                None => 1,
            }
            .max(1);
            // Sequential sampling can dead-end; retry on fresh substreams.
            let f = (0..64u64)
                .find_map(|i| {
                    let mut r = substream(ctx.seed, "orth-rep", i);
                    random_orth_rep::<f64, _>(&g, d, &ctx.tol, &mut r)
                })
                .ok_or_else(|| qgraph::Error::Degenerate(format!("no orthogonal representation in C^{d} found")))?;
            let lgp = validate_orth_rep(&g, &f, &ctx.tol)?.locally_general_position;
            let phi = classical_to_quantum_rep(&g, &f, ctx.tol)?;
            let tag = if lgp { ", locally general position" } else { "" };
            kraus_to(&phi, ctx.meta(format!("classical orthogonal representation in C^{d}{tag}")))
        }
    };
    Ok(Output::Instance(file))
}
