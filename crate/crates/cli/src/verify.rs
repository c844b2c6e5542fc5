//! Re-check a saved report from the inputs it embeds.

use qgraph::connect::{is_connected_seeded, is_separator, leakage, leakage_between, tree_packing_check};
use qgraph::cpmaps::{annihilation_residual, check_lgp, check_orth_rep, cstar_residual, SampledVerdict};
use qgraph::matcore::{numerical_rank, Projection};
use qgraph::{QuantumGraph, Tolerance};
use serde::{Deserialize, Serialize};

use crate::commands::{
    BoundsResult, ChannelGraphResult, ConnectednessResult, LgpResult, OrthRepResult, Report,
    TreePackingResult,
};
use crate::error::CliError;
use crate::io::{any_graph_from, kraus_from, matrix_from_json, partition_from, quantum_graph_from, InstanceFile, MatrixJson};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verification {
    pub command: String,
    pub verified: bool,
    pub checks: Vec<Check>,
}

struct Checks(Vec<Check>);

impl Checks {
    fn add(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.0.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }
}

fn input<'a>(r: &'a Report, key: &str) -> Result<&'a InstanceFile, CliError> {
    r.inputs.get(key).ok_or_else(|| CliError::Schema {
        origin: "report".into(),
        path: format!("inputs.{key}"),
        message: "missing input".into(),
    })
}

fn result<T: serde::de::DeserializeOwned>(r: &Report) -> Result<T, CliError> {
    serde_path_to_error::deserialize(r.result.clone()).map_err(|e| CliError::Schema {
        origin: "report".into(),
        path: format!("result.{}", e.path()),
        message: e.inner().to_string(),
    })
}

fn projection(m: &MatrixJson, n: usize, tol: &Tolerance, path: &str) -> Result<Projection<f64>, CliError> {
    let m = matrix_from_json(m, n, n, "report", path)?;
    Projection::from_matrix(&m, tol).map_err(|e| CliError::Schema {
        origin: "report".into(),
        path: path.into(),
        message: e.to_string(),
    })
}

/// `s` rebuilt at a tenfold tighter tolerance.
fn tightened(s: &QuantumGraph) -> Result<QuantumGraph, CliError> {
    let t = s.tol().tightened(10.0);
    Ok(QuantumGraph::try_from_subspace(s.space().clone().with_tolerance(t))?)
}

pub fn verify(report: &Report) -> Result<Verification, CliError> {
    let tol = Tolerance::new(report.tolerance.rank_rel, report.tolerance.residual_abs)?;
    let seed = report.seed;
    let mut c = Checks(Vec::new());
    match report.command.as_str() {
        "connectedness" => {
            let res: ConnectednessResult = result(report)?;
            let s = quantum_graph_from(input(report, "graph")?, tol, "inputs.graph")?;
            let cert = is_connected_seeded(&s, seed)?;
            let verdict = if cert.is_connected() { "connected" } else { "disconnected" };
            c.add("verdict", verdict == res.verdict, format!("recomputed {verdict}"));
            c.add(
                "stabilization power",
                cert.stabilization_power == res.stabilization_power,
                format!("recomputed m = {}", cert.stabilization_power),
            );
            c.add(
                "commutant dimension",
                cert.commutant_dim == res.commutant_dim,
                format!("recomputed {}", cert.commutant_dim),
            );
            match &res.witness {
                Some(w) => {
                    let p = projection(w, s.ambient_dim(), &tol, "result.witness")?;
                    let leak = leakage(s.space(), &p);
                    c.add(
                        "witness",
                        p.is_nontrivial() && leak <= tol.residual_abs,
                        format!("rank {}, ‖P S (I − P)‖ = {leak:.2e}", p.rank()),
                    );
                }
                None => c.add("witness", res.verdict == "connected", "none recorded"),
            }
        }
        "k-bounds" => {
            let res: BoundsResult = result(report)?;
            let s = quantum_graph_from(input(report, "graph")?, tol, "inputs.graph")?;
            c.add("ordering", res.lower <= res.upper, format!("{} ≤ {}", res.lower, res.upper));
            let cert = is_connected_seeded(&s, seed)?;
            c.add(
                "connectedness",
                cert.is_connected() == (res.upper > 0),
                format!("S is {}", if cert.is_connected() { "connected" } else { "disconnected" }),
            );
            match &res.separator {
                Some(sep) => {
                    let p = projection(&sep.projection, s.ambient_dim(), &tol, "result.separator.projection")?;
                    c.add("separator rank", p.rank() == res.upper, format!("rank {}", p.rank()));
                    let t = tightened(&s)?;
                    let verdict = is_separator(&t, &p)?;
                    let ok = match verdict.report() {
                        Some(r) => match &r.blocks {
                            Some((q1, q2)) => leakage_between(t.space(), q1, q2) <= t.tol().residual_abs,
                            None => true,
                        },
                        None => false,
                    };
                    c.add("separator", ok, "re-checked at a tenfold tighter tolerance");
                }
                None => c.add("separator", false, "no separator recorded"),
            }
        }
        "channel-graph" => {
            let res: ChannelGraphResult = result(report)?;
            let phi = kraus_from(input(report, "map")?, tol, "inputs.map")?;
            let s = phi.channel_confusability()?;
            let g = quantum_graph_from(&res.graph, tol, "result.graph")?;
            c.add("graph", s.same_as(&g), format!("dimension {}", s.dim()));
            let verdict = if is_connected_seeded(&s, seed)?.is_connected() { "connected" } else { "disconnected" };
            c.add("verdict", verdict == res.verdict, format!("recomputed {verdict}"));
        }
        "tree-packing" => {
            let res: TreePackingResult = result(report)?;
            let s = any_graph_from(input(report, "graph")?, tol, "inputs.graph")?;
            let parts = partition_from(input(report, "partition")?, tol, "inputs.partition")?;
            let t = tree_packing_check(s.space(), &parts)?;
            c.add(
                "sum",
                t.sum == res.sum && t.bound == res.bound && t.holds == res.holds,
                format!("recomputed {} against {}", t.sum, t.bound),
            );
        }
        "check-orth-rep" => {
            let res: OrthRepResult = result(report)?;
            let phi = kraus_from(input(report, "map")?, tol, "inputs.map")?;
            let s = any_graph_from(input(report, "graph")?, tol, "inputs.graph")?;
            let n = s.ambient_dim();
            for (i, v) in res.violations.iter().enumerate() {
                let a = matrix_from_json(&v.a, n, n, "report", &format!("result.violations[{i}].a"))?;
                let b = matrix_from_json(&v.b, n, n, "report", &format!("result.violations[{i}].b"))?;
                let ann = annihilation_residual(s.space(), &a, &b);
                let (r, _) = cstar_residual(&phi.apply(&a)?, &phi.apply(&b)?);
                c.add(
                    &format!("violation {i}"),
                    ann <= tol.residual_abs && r > 10.0 * tol.residual_abs,
                    format!("annihilation {ann:.2e}, C*-residual {r:.2e}"),
                );
            }
            let again = check_orth_rep(&phi, &s, res.samples, seed)?;
            let verdict = match again.verdict {
                SampledVerdict::PassSampled => "pass_sampled",
                SampledVerdict::Violated => "violated",
            };
            c.add(
                "resampled",
                verdict == res.verdict && again.pairs_tested == res.pairs_tested,
                format!("{verdict} on {} pairs", again.pairs_tested),
            );
        }
        "check-lgp" => {
            let res: LgpResult = result(report)?;
            let phi = kraus_from(input(report, "map")?, tol, "inputs.map")?;
            let s = any_graph_from(input(report, "graph")?, tol, "inputs.graph")?;
            let n = s.ambient_dim();
            if let Some(v) = &res.violation {
                let q = projection(&v.q, n, &tol, "result.violation.q")?;
                let p = projection(&v.p, n, &tol, "result.violation.p")?;
                let leak = leakage_between(s.space(), &q, &p);
                let rank = numerical_rank(&phi.apply(p.matrix())?, &tol);
                c.add(
                    "violation",
                    leak <= tol.residual_abs && rank < p.rank(),
                    format!("‖Q S P‖ = {leak:.2e}, rank Φ(P) = {rank} vs rank P = {}", p.rank()),
                );
            }
            let again = check_lgp(&phi, &s, res.samples, seed)?;
            let verdict = if again.passed() { "pass_sampled" } else { "violated" };
            c.add(
                "resampled",
                verdict == res.verdict && again.projections_tested == res.projections_tested,
                format!("{verdict} on {} projections", again.projections_tested),
            );
        }
        other => {
            return Err(CliError::Schema {
                origin: "report".into(),
                path: "command".into(),
                message: format!("no verifier for `{other}`"),
            })
        }
    }
    let verified = c.0.iter().all(|k| k.passed);
    Ok(Verification {
        command: report.command.clone(),
        verified,
        checks: c.0,
    })
}
