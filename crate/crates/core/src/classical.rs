//! Classical graphs and the bridge to quantum graphs: `S_G`, confusability
//! graphs `C_v(S)`, vertex connectivity, and classical orthogonal
//! representations.

use std::collections::VecDeque;

use rand::Rng;

use crate::error::{Error, Result};
use crate::matcore::{
    identity, matrix_unit, max_abs, null_space, numerical_rank, CMat, CVec,
    Projection, Tolerance,
};
use crate::opspace::{make_quantum_graph, BuildMode, OperatorSubspace, QuantumGraph};
use crate::random::{complex_gaussian, haar_unitary};
use crate::scalar::{cabs, Real};

/// Above this many vertices, vertex connectivity switches from exhaustive
/// cut enumeration to max-flow.
pub const EXHAUSTIVE_CUT_LIMIT: usize = 12;

/// Simple undirected graph on `0..n`. Loops are implicit and never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClassicalGraph {
    n: usize,
    adj: Vec<Vec<bool>>,
}

impl ClassicalGraph {
    /// Graph from 0-indexed edges.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::Validation("graph needs at least one vertex".into()));
        }
        let mut g = Self::empty(n);
        for &(i, j) in edges {
            if i >= n || j >= n {
                return Err(Error::Validation(format!(
                    "edge ({i}, {j}) has an endpoint outside 0..{n}"
                )));
            }
            if i == j {
                return Err(Error::Validation(format!("self-loop at vertex {i}")));
            }
            g.adj[i][j] = true;
            g.adj[j][i] = true;
        }
        Ok(g)
    }

    /// Graph from 1-indexed edges, as used in graph files.
    pub fn from_one_indexed(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut zero = Vec::with_capacity(edges.len());
        for &(i, j) in edges {
            if i == 0 || j == 0 {
                return Err(Error::Validation("vertices are 1-indexed".into()));
            }
            zero.push((i - 1, j - 1));
        }
        Self::new(n, &zero)
    }

    pub fn empty(n: usize) -> Self {
        Self {
            n,
            adj: vec![vec![false; n]; n],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for i in 0..n {
            for j in 0..n {
                g.adj[i][j] = i != j;
            }
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::new(n, &edges).expect("valid path")
    }

    pub fn cycle(n: usize) -> Self {
        let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        if n > 2 {
            edges.push((n - 1, 0));
        }
        Self::new(n, &edges).expect("valid cycle")
    }

    /// Erdős–Rényi `G(n, p)`.
    pub fn gnp<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Self {
        let mut g = Self::empty(n);
        for i in 0..n {
            for j in (i + 1)..n {
                if rng.random::<f64>() < p {
                    g.adj[i][j] = true;
                    g.adj[j][i] = true;
                }
            }
        }
        g
    }

    /// Graph whose edge set is the bitmask `code` over pairs `i < j` in
    /// lexicographic order.
    pub fn from_code(n: usize, code: u64) -> Self {
        let mut g = Self::empty(n);
        for (bit, (i, j)) in pairs(n).enumerate() {
            if code >> bit & 1 == 1 {
                g.adj[i][j] = true;
                g.adj[j][i] = true;
            }
        }
        g
    }

    pub fn code(&self) -> u64 {
        pairs(self.n)
            .enumerate()
            .filter(|(_, (i, j))| self.adj[*i][*j])
            .fold(0, |acc, (bit, _)| acc | 1 << bit)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.adj[i][j]
    }

    /// Edges `(i, j)` with `i < j`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        pairs(self.n).filter(|&(i, j)| self.adj[i][j]).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.edges().len()
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&j| self.adj[i][j])
    }

    /// Vertices `j ≠ i` not adjacent to `i`.
    pub fn non_neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&j| j != i && !self.adj[i][j])
    }

    pub fn is_complete(&self) -> bool {
        pairs(self.n).all(|(i, j)| self.adj[i][j])
    }

    pub fn relabeled(&self, perm: &[usize]) -> Self {
        let mut g = Self::empty(self.n);
        for (i, j) in self.edges() {
            g.adj[perm[i]][perm[j]] = true;
            g.adj[perm[j]][perm[i]] = true;
        }
        g
    }

    /// Smallest edge code over all relabelings; equal iff isomorphic.
    pub fn canonical_code(&self) -> u64 {
        let mut best = u64::MAX;
        for perm in permutations(self.n) {
            best = best.min(self.relabeled(&perm).code());
        }
        best
    }

    /// Connected components of the graph induced on vertices not in `removed`.
    fn components_without(&self, removed: u64) -> Vec<Vec<usize>> {
        let mut seen = removed;
        let mut comps = Vec::new();
        for s in 0..self.n {
            if seen >> s & 1 == 1 {
                continue;
            }
            seen |= 1 << s;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for w in self.neighbors(v) {
                    if seen >> w & 1 == 0 {
                        seen |= 1 << w;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }
}

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| ((i + 1)..n).map(move |j| (i, j)))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    heap_permute(n, &mut cur, &mut out);
    out
}

fn heap_permute(k: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(a.clone());
        return;
    }
    for i in 0..k {
        heap_permute(k - 1, a, out);
        if k.is_multiple_of(2) {
            a.swap(i, k - 1);
        } else {
            a.swap(0, k - 1);
        }
    }
}

/// Every labeled graph on `n` vertices.
pub fn all_labeled_graphs(n: usize) -> impl Iterator<Item = ClassicalGraph> {
    let bits = n * n.saturating_sub(1) / 2;
    assert!(bits < 63, "too many vertices to enumerate");
    (0..1u64 << bits).map(move |code| ClassicalGraph::from_code(n, code))
}

/// One representative per isomorphism class of graphs on `n` vertices.
pub fn isomorphism_class_representatives(n: usize) -> Vec<ClassicalGraph> {
    let mut codes: Vec<u64> = all_labeled_graphs(n).map(|g| g.canonical_code()).collect();
    codes.sort_unstable();
    codes.dedup();
    codes.into_iter().map(|c| ClassicalGraph::from_code(n, c)).collect()
}

/// `S_G = span{|e_i⟩⟨e_j| : i = j or i ~ j}`.
pub fn lift<T: Real>(g: &ClassicalGraph, tol: Tolerance) -> QuantumGraph<T> {
    let n = g.n;
    let mut mats: Vec<CMat<T>> = (0..n).map(|i| matrix_unit(n, i, i)).collect();
    for (i, j) in g.edges() {
        mats.push(matrix_unit(n, i, j));
        mats.push(matrix_unit(n, j, i));
    }
    make_quantum_graph(n, &mats, tol, BuildMode::Strict).expect("S_G is an operator system")
}

/// An ordered orthonormal basis of `C^n`, stored as the columns of a unitary.
#[derive(Debug, Clone)]
pub struct OrthonormalBasisCn<T: Real> {
    vectors: CMat<T>,
}

impl<T: Real> OrthonormalBasisCn<T> {
    pub fn new(vectors: CMat<T>, tol: &Tolerance) -> Result<Self> {
        if !vectors.is_square() {
            return Err(Error::dim("n vectors in C^n", format!("{:?}", vectors.shape())));
        }
        let n = vectors.ncols();
        let gram = vectors.adjoint() * &vectors;
        let worst = max_abs(&(gram - identity::<T>(n)));
        if worst > tol.residual::<T>() {
            return Err(Error::Validation(format!(
                "basis is not orthonormal (Gram deviation {worst})"
            )));
        }
        Ok(Self { vectors })
    }

    pub fn from_vectors(vectors: &[CVec<T>], tol: &Tolerance) -> Result<Self> {
        let n = vectors.first().map_or(0, |v| v.len());
        if vectors.iter().any(|v| v.len() != n) {
            return Err(Error::Validation("basis vectors differ in length".into()));
        }
        Self::new(CMat::from_columns(vectors), tol)
    }

    pub fn standard(n: usize) -> Self {
        Self {
            vectors: identity(n),
        }
    }

    pub fn haar<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        Self {
            vectors: haar_unitary(n, rng),
        }
    }

    /// Basis whose first `rank(P)` vectors span the range of `P` and whose
    /// remaining vectors span the range of `I − P`.
    pub fn aligned_with(p: &Projection<T>) -> Self {
        let q = p.complement();
        let mut cols = p.range_basis();
        cols.extend(q.range_basis());
        Self {
            vectors: CMat::from_columns(&cols),
        }
    }

    pub fn n(&self) -> usize {
        self.vectors.ncols()
    }

    pub fn matrix(&self) -> &CMat<T> {
        &self.vectors
    }

    pub fn vector(&self, i: usize) -> CVec<T> {
        self.vectors.column(i).into_owned()
    }
}

/// `C_v(S)`: `i ~ j` iff `|⟨v_i|B|v_j⟩| > residual_abs` for some basis `B`.
pub fn confusability<T: Real>(s: &OperatorSubspace<T>, v: &OrthonormalBasisCn<T>) -> Result<ClassicalGraph> {
    let n = s.ambient_dim();
    if v.n() != n {
        return Err(Error::dim(n, v.n()));
    }
    let thresh = s.tol().residual::<T>();
    let vm = v.matrix();
    let vd = vm.adjoint();
    let mut g = ClassicalGraph::empty(n);
    for b in s.basis() {
        let w = &vd * b * vm;
        for i in 0..n {
            for j in 0..n {
                if i != j && cabs(w[(i, j)]) > thresh {
                    g.adj[i][j] = true;
                    g.adj[j][i] = true;
                }
            }
        }
    }
    Ok(g)
}

pub fn classical_connected(g: &ClassicalGraph) -> bool {
    g.components_without(0).len() <= 1
}

/// A minimum vertex cut: removing `cut` disconnects the graph (`sides` holds
/// the resulting components) or, for complete graphs, leaves one vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexCut {
    pub cut: Vec<usize>,
    pub sides: Vec<Vec<usize>>,
}

fn mask_to_vec(mask: u64, n: usize) -> Vec<usize> {
    (0..n).filter(|&i| mask >> i & 1 == 1).collect()
}

fn subsets_of_size(n: usize, k: usize) -> impl Iterator<Item = u64> {
    // Gosper's hack over k-subsets of 0..n.
    let first: u64 = if k == 0 { 0 } else { (1u64 << k) - 1 };
    let limit = 1u64 << n;
    let mut next = Some(first);
    std::iter::from_fn(move || {
        let cur = next?;
        if cur >= limit {
            return None;
        }
        next = if cur == 0 {
            None
        } else {
            let c = cur & cur.wrapping_neg();
            let r = cur + c;
            Some((((r ^ cur) >> 2) / c) | r)
        };
        Some(cur)
    })
}

fn cuts_of_size(g: &ClassicalGraph, k: usize) -> impl Iterator<Item = VertexCut> + '_ {
    let n = g.n;
    subsets_of_size(n, k).filter_map(move |mask| {
        let comps = g.components_without(mask);
        let separating = comps.len() >= 2;
        let single = k + 1 == n;
        (separating || single).then(|| VertexCut {
            cut: mask_to_vec(mask, n),
            sides: comps,
        })
    })
}

fn minimum_vertex_cut_exhaustive(g: &ClassicalGraph) -> VertexCut {
    for k in 0..g.n {
        if let Some(c) = cuts_of_size(g, k).next() {
            return c;
        }
    }
    unreachable!("removing n - 1 vertices always leaves a single vertex")
}

/// Unit-capacity max-flow on the vertex-split digraph (Even's reduction).
struct SplitNetwork {
    cap: Vec<Vec<i32>>,
}

impl SplitNetwork {
    const INF: i32 = 1 << 20;

    fn new(g: &ClassicalGraph, s: usize, t: usize) -> Self {
        let n = g.n;
        let mut cap = vec![vec![0; 2 * n]; 2 * n];
        for v in 0..n {
            cap[2 * v][2 * v + 1] = if v == s || v == t { Self::INF } else { 1 };
        }
        for (u, v) in g.edges() {
            cap[2 * u + 1][2 * v] = Self::INF;
            cap[2 * v + 1][2 * u] = Self::INF;
        }
        Self { cap }
    }

    fn bfs(&self, src: usize) -> Vec<Option<usize>> {
        let m = self.cap.len();
        let mut parent = vec![None; m];
        parent[src] = Some(src);
        let mut queue = VecDeque::from([src]);
        while let Some(x) = queue.pop_front() {
            #[allow(clippy::needless_range_loop)]
            for y in 0..m {
                if parent[y].is_none() && self.cap[x][y] > 0 {
                    parent[y] = Some(x);
                    queue.push_back(y);
                }
            }
        }
        parent
    }

    /// Max flow from `src` to `dst`, stopping early once it exceeds `cap_at`.
    fn max_flow(&mut self, src: usize, dst: usize, cap_at: i32) -> i32 {
        let mut flow = 0;
        while flow <= cap_at {
            let parent = self.bfs(src);
            if parent[dst].is_none() {
                break;
            }
            let mut y = dst;
            while y != src {
                let x = parent[y].expect("on path");
                self.cap[x][y] -= 1;
                self.cap[y][x] += 1;
                y = x;
            }
            flow += 1;
        }
        flow
    }
}

fn minimum_vertex_cut_flow(g: &ClassicalGraph) -> VertexCut {
    let n = g.n;
    if g.is_complete() {
        return VertexCut {
            cut: (0..n - 1).collect(),
            sides: vec![vec![n - 1]],
        };
    }
    let mut best: Option<(i32, usize, usize)> = None;
    for (s, t) in pairs(n) {
        if g.adj[s][t] {
            continue;
        }
        let bound = best.map_or(n as i32, |b| b.0 - 1);
        let mut net = SplitNetwork::new(g, s, t);
        let f = net.max_flow(2 * s + 1, 2 * t, bound);
        if best.is_none_or(|b| f < b.0) {
            best = Some((f, s, t));
        }
    }
    let (_, s, t) = best.expect("non-complete graph has a non-adjacent pair");
    let mut net = SplitNetwork::new(g, s, t);
    net.max_flow(2 * s + 1, 2 * t, i32::MAX - 1);
    let reach = net.bfs(2 * s + 1);
    let cut: Vec<usize> = (0..n)
        .filter(|&v| reach[2 * v].is_some() && reach[2 * v + 1].is_none())
        .collect();
    let mask = cut.iter().fold(0u64, |m, &v| m | 1 << v);
    VertexCut {
        cut,
        sides: g.components_without(mask),
    }
}

/// A minimum vertex cut (exhaustive up to [`EXHAUSTIVE_CUT_LIMIT`] vertices,
/// max-flow above).
pub fn minimum_vertex_cut(g: &ClassicalGraph) -> Result<VertexCut> {
    if g.n < 2 {
        return Err(Error::Degenerate("vertex connectivity needs n >= 2".into()));
    }
    if g.n > 63 {
        return Err(Error::Validation("at most 63 vertices are supported".into()));
    }
    Ok(if g.n <= EXHAUSTIVE_CUT_LIMIT {
        minimum_vertex_cut_exhaustive(g)
    } else {
        minimum_vertex_cut_flow(g)
    })
}

/// `κ(G)`: fewest vertices whose removal disconnects `G` or leaves a single
/// vertex.
pub fn classical_vertex_connectivity(g: &ClassicalGraph) -> Result<usize> {
    Ok(minimum_vertex_cut(g)?.cut.len())
}

/// Every vertex cut of size `κ(G)`.
pub fn all_minimum_vertex_cuts(g: &ClassicalGraph) -> Result<Vec<VertexCut>> {
    let k = classical_vertex_connectivity(g)?;
    Ok(cuts_of_size(g, k).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreePackingBase {
    pub cross_edges: usize,
    pub parts: usize,
    pub holds: bool,
}

/// Count edges between distinct parts; holds iff at least `|parts| − 1`.
pub fn classical_tree_packing_base(g: &ClassicalGraph, partition: &[Vec<usize>]) -> Result<TreePackingBase> {
    let mut owner = vec![usize::MAX; g.n];
    for (p, part) in partition.iter().enumerate() {
        if part.is_empty() {
            return Err(Error::Validation(format!("part {p} is empty")));
        }
        for &v in part {
            if v >= g.n {
                return Err(Error::Validation(format!("vertex {v} out of range")));
            }
            if owner[v] != usize::MAX {
                return Err(Error::Validation(format!("vertex {v} appears in two parts")));
            }
            owner[v] = p;
        }
    }
    if let Some(v) = owner.iter().position(|&o| o == usize::MAX) {
        return Err(Error::Validation(format!("vertex {v} is not covered")));
    }
    let cross_edges = g
        .edges()
        .into_iter()
        .filter(|&(i, j)| owner[i] != owner[j])
        .count();
    Ok(TreePackingBase {
        cross_edges,
        parts: partition.len(),
        holds: cross_edges + 1 >= partition.len(),
    })
}

/// Every set partition of `0..n` (restricted growth strings).
pub fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    fn rec(i: usize, n: usize, labels: &mut Vec<usize>, maxl: usize, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == n {
            let mut parts = vec![Vec::new(); maxl];
            for (v, &l) in labels.iter().enumerate() {
                parts[l].push(v);
            }
            out.push(parts);
            return;
        }
        for l in 0..=maxl {
            labels.push(l);
            rec(i + 1, n, labels, maxl.max(l + 1), out);
            labels.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, &mut Vec::new(), 0, &mut out);
    out
}

/// Assignment of a nonzero vector of `C^d` to every vertex.
#[derive(Debug, Clone)]
pub struct ClassicalOrthRep<T: Real> {
    d: usize,
    vectors: Vec<CVec<T>>,
}

impl<T: Real> ClassicalOrthRep<T> {
    pub fn new(d: usize, vectors: Vec<CVec<T>>) -> Result<Self> {
        if d == 0 {
            return Err(Error::Validation("target dimension must be positive".into()));
        }
        if let Some(v) = vectors.iter().find(|v| v.len() != d) {
            return Err(Error::dim(d, v.len()));
        }
        Ok(Self { d, vectors })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vector(&self, i: usize) -> &CVec<T> {
        &self.vectors[i]
    }

    pub fn vectors(&self) -> &[CVec<T>] {
        &self.vectors
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrthRepValidation {
    pub valid: bool,
    pub locally_general_position: bool,
    /// Largest normalized overlap `|⟨f(i)|f(j)⟩| / (‖f(i)‖‖f(j)‖)` over
    /// non-adjacent pairs.
    pub worst_overlap: f64,
}

/// Check orthogonality on non-adjacent pairs and the locally-general-position
/// flag (non-neighbors of each vertex are represented independently).
pub fn validate_orth_rep<T: Real>(
    g: &ClassicalGraph,
    f: &ClassicalOrthRep<T>,
    tol: &Tolerance,
) -> Result<OrthRepValidation> {
    if f.len() != g.n {
        return Err(Error::dim(g.n, f.len()));
    }
    let norms: Vec<T> = f.vectors.iter().map(|v| v.norm()).collect();
    if let Some(i) = norms.iter().position(|&x| x <= tol.residual::<T>()) {
        return Err(Error::Validation(format!("vertex {i} is assigned the zero vector")));
    }
    let mut worst = T::zero();
    for (i, j) in pairs(g.n) {
        if !g.adj[i][j] {
            let ov = cabs(f.vectors[i].dotc(&f.vectors[j])) / (norms[i] * norms[j]);
            worst = worst.max(ov);
        }
    }
    let valid = worst <= tol.residual::<T>();
    let lgp = (0..g.n).all(|i| {
        let cols: Vec<CVec<T>> = g.non_neighbors(i).map(|j| f.vectors[j].clone()).collect();
        cols.is_empty() || numerical_rank(&CMat::from_columns(&cols), tol) == cols.len()
    });
    Ok(OrthRepValidation {
        valid,
        locally_general_position: lgp,
        worst_overlap: crate::scalar::to_f64(worst),
    })
}

/// Sequential random orthogonal representation in `C^d`: each `f(i)` is
/// Gaussian in the orthogonal complement of the earlier non-neighbors.
/// `None` if some complement is trivial.
pub fn random_orth_rep<T: Real, R: Rng + ?Sized>(
    g: &ClassicalGraph,
    d: usize,
    tol: &Tolerance,
    rng: &mut R,
) -> Option<ClassicalOrthRep<T>> {
    let mut vectors: Vec<CVec<T>> = Vec::with_capacity(g.n);
    for i in 0..g.n {
        let earlier: Vec<CVec<T>> = (0..i)
            .filter(|&j| !g.adj[i][j])
            .map(|j| vectors[j].clone())
            .collect();
        let free = if earlier.is_empty() {
            identity::<T>(d)
        } else {
            let rows = CMat::from_columns(&earlier).adjoint();
            null_space(&rows, tol)
        };
        if free.ncols() == 0 {
            return None;
        }
        let coeff = CVec::from_fn(free.ncols(), |_, _| complex_gaussian(rng));
        let v = &free * coeff;
        let norm = v.norm();
        vectors.push(v.unscale(norm));
    }
    ClassicalOrthRep::new(d, vectors).ok()
}

/// Projection onto `span{e_i : i ∈ set}` in the given basis.
pub fn basis_projection<T: Real>(v: &OrthonormalBasisCn<T>, set: &[usize]) -> Projection<T> {
    let cols: Vec<CVec<T>> = set.iter().map(|&i| v.vector(i)).collect();
    if cols.is_empty() {
        return Projection::zero(v.n());
    }
    Projection::from_isometry(CMat::from_columns(&cols))
}
