//! Instance files: a `kind` tag, a kind-specific payload and optional meta.
//! Complex entries are `[re, im]` pairs; matrices are arrays of rows.

use std::path::Path;

use qgraph::classical::{ClassicalGraph, OrthonormalBasisCn};
use qgraph::matcore::Projection;
use qgraph::opspace::{make_quantum_graph, BuildMode};
use qgraph::{ComplexMatrix, ComplexVector, KrausMap, QuantumGraph, Tolerance, C64};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;

pub type Pair = [f64; 2];
pub type MatrixJson = Vec<Vec<Pair>>;
pub type VectorJson = Vec<Pair>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    QuantumGraph,
    ClassicalGraph,
    KrausMap,
    Basis,
    Partition,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TolJson {
    pub rank_rel: f64,
    pub residual_abs: f64,
}

impl From<Tolerance> for TolJson {
    fn from(t: Tolerance) -> Self {
        Self {
            rank_rel: t.rank_rel,
            residual_abs: t.residual_abs,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Meta {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<TolJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub kind: Kind,
    pub payload: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<Meta>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeJson {
    #[default]
    Permissive,
    Strict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuantumGraphPayload {
    pub n: usize,
    pub generators: Vec<MatrixJson>,
    #[serde(default)]
    pub mode: ModeJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassicalGraphPayload {
    pub n: usize,
    /// 1-indexed.
    pub edges: Vec<[usize; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KrausPayload {
    pub in_dim: usize,
    pub out_dim: usize,
    pub kraus: Vec<MatrixJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisPayload {
    pub n: usize,
    pub vectors: Vec<VectorJson>,
}

/// Either coordinate blocks (1-indexed) or explicit projection matrices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartitionPayload {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub projections: Option<Vec<MatrixJson>>,
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_json(&text, &path.display().to_string())
}

pub fn parse_json<T: DeserializeOwned>(text: &str, origin: &str) -> Result<T, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| CliError::Schema {
        origin: origin.to_string(),
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })
}

/// Deserialize a payload, prefixing error paths with `payload`.
pub fn payload<T: DeserializeOwned>(file: &InstanceFile, origin: &str) -> Result<T, CliError> {
    serde_path_to_error::deserialize(file.payload.clone()).map_err(|e| CliError::Schema {
        origin: origin.to_string(),
        path: join_path("payload", &e.path().to_string()),
        message: e.inner().to_string(),
    })
}

fn join_path(head: &str, tail: &str) -> String {
    if tail == "." || tail.is_empty() {
        head.to_string()
    } else if tail.starts_with('[') {
        format!("{head}{tail}")
    } else {
        format!("{head}.{tail}")
    }
}

pub fn expect_kind(file: &InstanceFile, kinds: &[Kind], origin: &str) -> Result<(), CliError> {
    if kinds.contains(&file.kind) {
        return Ok(());
    }
    Err(CliError::Schema {
        origin: origin.to_string(),
        path: "kind".into(),
        message: format!("expected one of {kinds:?}, found {:?}", file.kind),
    })
}

fn schema(origin: &str, path: String, message: impl Into<String>) -> CliError {
    CliError::Schema {
        origin: origin.to_string(),
        path,
        message: message.into(),
    }
}

pub fn matrix_from_json(m: &MatrixJson, rows: usize, cols: usize, origin: &str, path: &str) -> Result<ComplexMatrix, CliError> {
    if m.len() != rows {
        return Err(schema(origin, path.into(), format!("expected {rows} rows, found {}", m.len())));
    }
    let mut out = ComplexMatrix::zeros(rows, cols);
    for (r, row) in m.iter().enumerate() {
        if row.len() != cols {
            return Err(schema(
                origin,
                format!("{path}[{r}]"),
                format!("expected {cols} entries, found {}", row.len()),
            ));
        }
        for (c, &[re, im]) in row.iter().enumerate() {
            if !(re.is_finite() && im.is_finite()) {
                return Err(schema(origin, format!("{path}[{r}][{c}]"), "non-finite entry"));
            }
            out[(r, c)] = C64::new(re, im);
        }
    }
    Ok(out)
}

pub fn matrix_to_json(m: &ComplexMatrix) -> MatrixJson {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
        .collect()
}

pub fn vector_from_json(v: &VectorJson, len: usize, origin: &str, path: &str) -> Result<ComplexVector, CliError> {
    if v.len() != len {
        return Err(schema(origin, path.into(), format!("expected {len} entries, found {}", v.len())));
    }
    for (i, [re, im]) in v.iter().enumerate() {
        if !(re.is_finite() && im.is_finite()) {
            return Err(schema(origin, format!("{path}[{i}]"), "non-finite entry"));
        }
    }
    Ok(ComplexVector::from_iterator(len, v.iter().map(|&[re, im]| C64::new(re, im))))
}

pub fn vector_to_json(v: &ComplexVector) -> VectorJson {
    v.iter().map(|z| [z.re, z.im]).collect()
}

fn positive(n: usize, origin: &str, path: &str) -> Result<(), CliError> {
    if n == 0 {
        return Err(schema(origin, path.into(), "must be positive"));
    }
    Ok(())
}

pub fn quantum_graph_from(file: &InstanceFile, tol: Tolerance, origin: &str) -> Result<QuantumGraph, CliError> {
    expect_kind(file, &[Kind::QuantumGraph], origin)?;
    let p: QuantumGraphPayload = payload(file, origin)?;
    positive(p.n, origin, "payload.n")?;
    let mats = p
        .generators
        .iter()
        .enumerate()
        .map(|(i, g)| matrix_from_json(g, p.n, p.n, origin, &format!("payload.generators[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let mode = match p.mode {
        ModeJson::Permissive => BuildMode::Permissive,
        ModeJson::Strict => BuildMode::Strict,
    };
    Ok(make_quantum_graph(p.n, &mats, tol, mode)?)
}

pub fn quantum_graph_to(s: &QuantumGraph, meta: Option<Meta>) -> InstanceFile {
    let p = QuantumGraphPayload {
        n: s.ambient_dim(),
        generators: s.basis().iter().map(matrix_to_json).collect(),
        mode: ModeJson::Permissive,
    };
    InstanceFile {
        kind: Kind::QuantumGraph,
        payload: serde_json::to_value(p).expect("serializable"),
        meta,
    }
}

pub fn classical_graph_from(file: &InstanceFile, origin: &str) -> Result<ClassicalGraph, CliError> {
    expect_kind(file, &[Kind::ClassicalGraph], origin)?;
    let p: ClassicalGraphPayload = payload(file, origin)?;
    let edges: Vec<(usize, usize)> = p.edges.iter().map(|&[i, j]| (i, j)).collect();
    ClassicalGraph::from_one_indexed(p.n, &edges)
        .map_err(|e| schema(origin, "payload.edges".into(), e.to_string()))
}

pub fn classical_graph_to(g: &ClassicalGraph, meta: Option<Meta>) -> InstanceFile {
    let p = ClassicalGraphPayload {
        n: g.n(),
        edges: g.edges().iter().map(|&(i, j)| [i + 1, j + 1]).collect(),
    };
    InstanceFile {
        kind: Kind::ClassicalGraph,
        payload: serde_json::to_value(p).expect("serializable"),
        meta,
    }
}

/// A quantum graph file, or a classical graph file lifted to `S_G`.
pub fn any_graph_from(file: &InstanceFile, tol: Tolerance, origin: &str) -> Result<QuantumGraph, CliError> {
    expect_kind(file, &[Kind::QuantumGraph, Kind::ClassicalGraph], origin)?;
    match file.kind {
        Kind::ClassicalGraph => Ok(qgraph::classical::lift(&classical_graph_from(file, origin)?, tol)),
        _ => quantum_graph_from(file, tol, origin),
    }
}

pub fn kraus_from(file: &InstanceFile, tol: Tolerance, origin: &str) -> Result<KrausMap, CliError> {
    expect_kind(file, &[Kind::KrausMap], origin)?;
    let p: KrausPayload = payload(file, origin)?;
    positive(p.in_dim, origin, "payload.in_dim")?;
    positive(p.out_dim, origin, "payload.out_dim")?;
    if p.kraus.is_empty() {
        return Err(schema(origin, "payload.kraus".into(), "needs at least one operator"));
    }
    let ks = p
        .kraus
        .iter()
        .enumerate()
        .map(|(i, k)| matrix_from_json(k, p.out_dim, p.in_dim, origin, &format!("payload.kraus[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(KrausMap::new(p.in_dim, p.out_dim, ks, tol)?)
}

pub fn kraus_to(phi: &KrausMap, meta: Option<Meta>) -> InstanceFile {
    let p = KrausPayload {
        in_dim: phi.in_dim(),
        out_dim: phi.out_dim(),
        kraus: phi.kraus().iter().map(matrix_to_json).collect(),
    };
    InstanceFile {
        kind: Kind::KrausMap,
        payload: serde_json::to_value(p).expect("serializable"),
        meta,
    }
}

pub fn basis_from(file: &InstanceFile, tol: Tolerance, origin: &str) -> Result<OrthonormalBasisCn<f64>, CliError> {
    expect_kind(file, &[Kind::Basis], origin)?;
    let p: BasisPayload = payload(file, origin)?;
    positive(p.n, origin, "payload.n")?;
    let vs = p
        .vectors
        .iter()
        .enumerate()
        .map(|(i, v)| vector_from_json(v, p.n, origin, &format!("payload.vectors[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    if vs.len() != p.n {
        return Err(schema(origin, "payload.vectors".into(), format!("expected {} vectors", p.n)));
    }
    OrthonormalBasisCn::from_vectors(&vs, &tol).map_err(|e| schema(origin, "payload.vectors".into(), e.to_string()))
}

pub fn basis_to(b: &OrthonormalBasisCn<f64>, meta: Option<Meta>) -> InstanceFile {
    let p = BasisPayload {
        n: b.n(),
        vectors: (0..b.n()).map(|i| vector_to_json(&b.vector(i))).collect(),
    };
    InstanceFile {
        kind: Kind::Basis,
        payload: serde_json::to_value(p).expect("serializable"),
        meta,
    }
}

pub fn partition_from(file: &InstanceFile, tol: Tolerance, origin: &str) -> Result<Vec<Projection<f64>>, CliError> {
    expect_kind(file, &[Kind::Partition], origin)?;
    let p: PartitionPayload = payload(file, origin)?;
    positive(p.n, origin, "payload.n")?;
    match (&p.blocks, &p.projections) {
        (Some(blocks), None) => blocks
            .iter()
            .enumerate()
            .map(|(b, block)| {
                let mut idx = Vec::with_capacity(block.len());
                for (k, &i) in block.iter().enumerate() {
                    if i == 0 || i > p.n {
                        return Err(schema(
                            origin,
                            format!("payload.blocks[{b}][{k}]"),
                            format!("index {i} outside 1..={}", p.n),
                        ));
                    }
                    idx.push(i - 1);
                }
                Ok(Projection::coordinate(p.n, &idx))
            })
            .collect(),
        (None, Some(mats)) => mats
            .iter()
            .enumerate()
            .map(|(i, m)| {
                let path = format!("payload.projections[{i}]");
                let m = matrix_from_json(m, p.n, p.n, origin, &path)?;
                Projection::from_matrix(&m, &tol).map_err(|e| schema(origin, path, e.to_string()))
            })
            .collect(),
        _ => Err(schema(origin, "payload".into(), "give exactly one of `blocks` or `projections`")),
    }
}

pub fn load_instance(path: &Path) -> Result<InstanceFile, CliError> {
    read_json(path)
}
