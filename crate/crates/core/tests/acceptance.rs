//! Acceptance suite: prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use qgraph::classical::{
    all_labeled_graphs, all_minimum_vertex_cuts, classical_connected,
    classical_vertex_connectivity, confusability, isomorphism_class_representatives, lift,
    random_orth_rep, validate_orth_rep, ClassicalGraph, OrthonormalBasisCn,
};
use qgraph::connect::{
    is_connected_seeded, is_separator, leakage, leakage_between, maximal_connectivity_check_seeded,
    separator_search, tree_packing_check, MaximalVerdict, SearchConfig, SeparatorReport,
};
use qgraph::cpmaps::{
    check_lgp, check_orth_rep, classical_to_quantum_rep, kraus_from_choi, lgp_connectivity_bound,
    SampledVerdict,
};
use qgraph::instances::{diagonal_algebra, hamming_cube, maximal_example, random_operator_system};
use qgraph::matcore::{hermitian_eig, hs_norm, matrix_unit, Projection};
use qgraph::opspace::{commutant, generated_algebra, make_quantum_graph, BuildMode, QuantumGraph};
use qgraph::random::{ginibre, haar_unitary, substream, QRng};
use qgraph::{CMat, KrausMap, Tolerance};

type Q = QuantumGraph<f64>;

const SEED: u64 = 20_240_611;

/// Running maxima of the residuals audited by criterion 10.
struct Hygiene {
    orthonormality: AtomicU64,
    idempotency: AtomicU64,
    eig: AtomicU64,
    choi: AtomicU64,
    reverify: AtomicU64,
}

const ORTHONORMALITY_BOUND: f64 = 1e-8;
const IDEMPOTENCY_BOUND: f64 = 1e-9;
const EIG_BOUND: f64 = 1e-10;
const CHOI_BOUND: f64 = 1e-8;
const REVERIFY_BOUND: f64 = 1e-9;

impl Hygiene {
    fn new() -> Self {
        Self {
            orthonormality: AtomicU64::new(0),
            idempotency: AtomicU64::new(0),
            eig: AtomicU64::new(0),
            choi: AtomicU64::new(0),
            reverify: AtomicU64::new(0),
        }
    }

    // Nonnegative finite f64s order the same as their bit patterns.
    fn bump(slot: &AtomicU64, x: f64) {
        let x = if x.is_finite() { x.abs() } else { f64::MAX };
        slot.fetch_max(x.to_bits(), Ordering::Relaxed);
    }

    fn read(slot: &AtomicU64) -> f64 {
        f64::from_bits(slot.load(Ordering::Relaxed))
    }

    fn space(&self, s: &Q) {
        Self::bump(&self.orthonormality, s.orthonormality_residual());
    }

    fn projection(&self, p: &Projection<f64>) {
        Self::bump(&self.idempotency, p.residual());
    }

    /// Eigenpair residuals of a Hermitian matrix, relative to its norm.
    fn hermitian(&self, h: &CMat<f64>) {
        let eig = hermitian_eig(h, &Tolerance::default()).expect("hermitian");
        let scale = hs_norm(h).max(f64::MIN_POSITIVE);
        for (k, &l) in eig.values.iter().enumerate() {
            let v = eig.vectors.column(k);
            let r = (h * v - v * qgraph::C64::new(l, 0.0)).norm() / scale;
            Self::bump(&self.eig, r);
        }
    }

    /// Rebuild `s` at a tenfold tighter tolerance and re-check a separator.
    fn separator(&self, s: &Q, p: &Projection<f64>) -> bool {
        self.projection(p);
        let tight = s.tol().tightened(10.0);
        let Ok(t) = Q::try_from_subspace(s.space().clone().with_tolerance(tight)) else {
            return false;
        };
        let Ok(v) = is_separator(&t, p) else {
            return false;
        };
        let Some(r) = v.report() else {
            return false;
        };
        if let Some((q1, q2)) = &r.blocks {
            self.projection(q1);
            self.projection(q2);
            let leak = leakage_between(t.space(), q1, q2);
            Self::bump(&self.reverify, leak);
            return leak <= REVERIFY_BOUND;
        }
        true
    }

    fn report(&self, r: &SeparatorReport<f64>, s: &Q) -> bool {
        self.separator(s, &r.separator)
    }
}

fn tol() -> Tolerance {
    Tolerance::default()
}

fn rng(label: &str, idx: u64) -> QRng {
    substream(SEED, label, idx)
}

/// Generic operator system on `n1 ⊕ n2`, conjugated by a Haar unitary.
fn random_disconnected(n1: usize, n2: usize, gens: usize, r: &mut QRng) -> Q {
    let n = n1 + n2;
    let u = haar_unitary::<f64, _>(n, r);
    let mats: Vec<CMat<f64>> = (0..gens)
        .map(|_| {
            let mut m = CMat::zeros(n, n);
            m.view_mut((0, 0), (n1, n1)).copy_from(&ginibre::<f64, _>(n1, n1, r));
            m.view_mut((n1, n1), (n2, n2)).copy_from(&ginibre::<f64, _>(n2, n2, r));
            &u * m * u.adjoint()
        })
        .collect();
    make_quantum_graph(n, &mats, tol(), BuildMode::Permissive).expect("square generators")
}

type Outcome = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// 1. Power stabilization and the commutant agree on random operator systems.
fn dual_algorithm(h: &Hygiene) -> Outcome {
    let results: Vec<std::result::Result<bool, String>> = (0..500u64)
        .into_par_iter()
        .map(|i| {
            let mut r = rng("dual", i);
            let n = r.random_range(2..=6);
            let gens = r.random_range(1..=6);
            let s = if i % 4 == 3 {
                let n1 = r.random_range(1..n);
                random_disconnected(n1, n - n1, gens, &mut r)
            } else {
                random_operator_system::<f64, _>(n, gens, tol(), &mut r)
            };
            h.space(&s);
            h.hermitian(&s.random_hermitian_element(&mut r));
            let (alg, _) = generated_algebra(&s);
            let by_powers = alg.is_full();
            let comm = commutant(&s);
            h.space(&QuantumGraph::try_from_subspace(comm.clone()).map_err(|e| e.to_string())?);
            let by_commutant = comm.dim() == 1;
            if by_powers != by_commutant {
                return Err(format!("instance {i}: powers {by_powers}, commutant {by_commutant}"));
            }
            let cert = is_connected_seeded(&s, i).map_err(|e| format!("instance {i}: {e}"))?;
            if cert.is_connected() != by_powers {
                return Err(format!("instance {i}: certificate disagrees"));
            }
            if let Some(p) = &cert.witness {
                h.projection(p);
                Hygiene::bump(&h.reverify, leakage(s.space(), p));
            }
            Ok(by_powers)
        })
        .collect();
    let mut connected = 0;
    for r in results {
        connected += usize::from(r?);
    }
    Ok(format!("500 systems agree ({connected} connected, {} disconnected)", 500 - connected))
}

// 2. Classical connectedness equals quantum connectedness of the lift.
fn classical_connectedness(h: &Hygiene) -> Outcome {
    let mut count = 0;
    for n in 1..=5 {
        for g in isomorphism_class_representatives(n) {
            let s = lift::<f64>(&g, tol());
            h.space(&s);
            let q = is_connected_seeded(&s, SEED).map_err(|e| e.to_string())?.is_connected();
            ensure(q == classical_connected(&g), || format!("mismatch on {:?}", g.edges()))?;
            count += 1;
        }
    }
    ensure(count == 52, || format!("expected 52 representatives, got {count}"))?;
    Ok(format!("{count} isomorphism classes (34 at n = 5)"))
}

fn check_kappa(g: &ClassicalGraph, h: &Hygiene, restarts: usize, seed: u64) -> std::result::Result<(), String> {
    let n = g.n();
    let kappa = classical_vertex_connectivity(g).map_err(|e| e.to_string())?;
    let s = lift::<f64>(g, tol());
    for cut in all_minimum_vertex_cuts(g).map_err(|e| e.to_string())? {
        let p = Projection::coordinate(n, &cut.cut);
        ensure(p.rank() == kappa, || format!("cut size {} ≠ κ {kappa}", p.rank()))?;
        ensure(h.separator(&s, &p), || format!("cut {:?} of {:?} does not lift", cut.cut, g.edges()))?;
    }
    let config = SearchConfig {
        restarts,
        seed,
        ..SearchConfig::default()
    };
    let b = separator_search(&s, &config).map_err(|e| format!("{:?}: {e}", g.edges()))?;
    ensure(b.upper >= kappa && b.lower <= kappa, || {
        format!("{:?}: bounds [{}, {}] vs κ {kappa}", g.edges(), b.lower, b.upper)
    })?;
    if let Some(r) = &b.best_separator {
        ensure(h.report(r, &s), || "best separator fails re-verification".into())?;
    }
    Ok(())
}

// 3. Minimum vertex cuts lift to separators and nothing smaller is found.
fn classical_k_connectedness(h: &Hygiene) -> Outcome {
    let labeled: Vec<ClassicalGraph> = (2..=5).flat_map(all_labeled_graphs).collect();
    labeled
        .par_iter()
        .enumerate()
        .try_for_each(|(i, g)| check_kappa(g, h, 200, i as u64))?;
    let random: Vec<ClassicalGraph> = (0..100u64)
        .map(|i| {
            let mut r = rng("kappa", i);
            let n = r.random_range(2..=8);
            let p = r.random_range(0.25..0.9);
            ClassicalGraph::gnp(n, p, &mut r)
        })
        .collect();
    random
        .par_iter()
        .enumerate()
        .try_for_each(|(i, g)| check_kappa(g, h, 200, 10_000 + i as u64))?;
    Ok(format!("{} labeled graphs (n ≤ 5) and 100 random graphs (n ≤ 8)", labeled.len()))
}

/// Random partition of `[n]` into `m` nonempty blocks.
fn random_blocks(n: usize, m: usize, r: &mut QRng) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(r);
    let mut cuts: Vec<usize> = (1..n).collect();
    cuts.shuffle(r);
    let mut cuts: Vec<usize> = cuts[..m - 1].to_vec();
    cuts.sort_unstable();
    let mut out = Vec::with_capacity(m);
    let mut start = 0;
    for c in cuts.into_iter().chain([n]) {
        out.push(order[start..c].to_vec());
        start = c;
    }
    out
}

// 4. Tree packing for connected systems; the witness split fails it.
fn tree_packing(h: &Hygiene) -> Outcome {
    let outcomes: Vec<std::result::Result<bool, String>> = (0..1000u64)
        .into_par_iter()
        .map(|i| {
            let mut r = rng("tree", i);
            let n = r.random_range(2..=6);
            let s = match i % 4 {
                0 | 1 => {
                    let g = loop {
                        let g = ClassicalGraph::gnp(n, r.random_range(0.3..0.9), &mut r);
                        if classical_connected(&g) {
                            break g;
                        }
                    };
                    lift::<f64>(&g, tol())
                }
                2 => random_operator_system::<f64, _>(n, r.random_range(1..=3), tol(), &mut r),
                _ => {
                    let n1 = r.random_range(1..n);
                    random_disconnected(n1, n - n1, r.random_range(1..=3), &mut r)
                }
            };
            let cert = is_connected_seeded(&s, i).map_err(|e| e.to_string())?;
            if let Some(p) = cert.witness {
                let parts = [p.clone(), p.complement()];
                let t = tree_packing_check(s.space(), &parts).map_err(|e| e.to_string())?;
                if t.sum != 0 || t.holds {
                    return Err(format!("trial {i}: witness split has sum {}", t.sum));
                }
                return Ok(false);
            }
            let m = r.random_range(2..=n);
            let mut parts: Vec<Projection<f64>> = random_blocks(n, m, &mut r)
                .iter()
                .map(|b| Projection::coordinate(n, b))
                .collect();
            if r.random::<bool>() {
                let u = haar_unitary::<f64, _>(n, &mut r);
                parts = parts.iter().map(|p| p.conjugated(&u)).collect();
            }
            for p in &parts {
                h.projection(p);
            }
            let t = tree_packing_check(s.space(), &parts).map_err(|e| e.to_string())?;
            if !t.holds {
                return Err(format!("trial {i}: sum {} < bound {}", t.sum, t.bound));
            }
            Ok(true)
        })
        .collect();
    let mut connected = 0;
    for o in outcomes {
        connected += usize::from(o?);
    }
    Ok(format!("1000 trials ({connected} connected, {} disconnected)", 1000 - connected))
}

// 5. Hamming cubes are connected within n powers.
fn hamming(h: &Hygiene) -> Outcome {
    let mut powers = Vec::new();
    for n in 2..=4 {
        let c = hamming_cube::<f64>(n, tol());
        h.space(&c);
        let cert = is_connected_seeded(&c, SEED).map_err(|e| e.to_string())?;
        ensure(cert.is_connected(), || format!("C_{n} reported disconnected"))?;
        ensure(cert.stabilization_power <= n, || {
            format!("C_{n} needs {} powers", cert.stabilization_power)
        })?;
        powers.push(cert.stabilization_power);
    }
    Ok(format!("stabilization powers {powers:?} for n = 2, 3, 4"))
}

// 6. Confusability graphs respect connectedness; lifts round-trip.
fn confusability_laws(h: &Hygiene) -> Outcome {
    let mut disconnected: Vec<Q> = Vec::new();
    let mut connected: Vec<Q> = Vec::new();
    for n in 2..=5 {
        for g in isomorphism_class_representatives(n) {
            let s = lift::<f64>(&g, tol());
            if classical_connected(&g) {
                connected.push(s);
            } else {
                disconnected.push(s);
            }
        }
    }
    for i in 0..20u64 {
        let mut r = rng("conf-d", i);
        let n = r.random_range(2..=6);
        let n1 = r.random_range(1..n);
        disconnected.push(random_disconnected(n1, n - n1, 2, &mut r));
        connected.push(random_operator_system::<f64, _>(n, 2, tol(), &mut r));
    }
    connected.push(hamming_cube::<f64>(2, tol()));
    connected.push(maximal_example::<f64>(4, tol()));

    disconnected.par_iter().enumerate().try_for_each(|(i, s)| {
        let cert = is_connected_seeded(s, i as u64).map_err(|e| e.to_string())?;
        let p = cert.witness.ok_or("disconnected system without witness")?;
        h.projection(&p);
        let basis = OrthonormalBasisCn::aligned_with(&p);
        let g = confusability(s.space(), &basis).map_err(|e| e.to_string())?;
        ensure(!classical_connected(&g), || format!("system {i}: aligned graph is connected"))
    })?;
    connected.par_iter().enumerate().try_for_each(|(i, s)| {
        let mut r = rng("conf-c", i as u64);
        for _ in 0..100 {
            let basis = OrthonormalBasisCn::haar(s.ambient_dim(), &mut r);
            let g = confusability(s.space(), &basis).map_err(|e| e.to_string())?;
            ensure(classical_connected(&g), || format!("system {i}: Haar basis gives a disconnected graph"))?;
        }
        Ok::<(), String>(())
    })?;
    let mut round = 0;
    for n in 1..=5 {
        for g in all_labeled_graphs(n) {
            let s = lift::<f64>(&g, tol());
            let back = confusability(s.space(), &OrthonormalBasisCn::standard(n)).map_err(|e| e.to_string())?;
            ensure(back == g, || format!("round trip changed {:?}", g.edges()))?;
            round += 1;
        }
    }
    Ok(format!(
        "{} disconnected, {} connected x 100 bases, {round} round trips",
        disconnected.len(),
        connected.len()
    ))
}

// 7. Random channels: confusability graphs, fixtures, and self-representation.
fn channel_pipeline(h: &Hygiene) -> Outcome {
    for n in 2..=5 {
        let d = KrausMap::dephasing(n, tol()).channel_confusability().map_err(|e| e.to_string())?;
        ensure(d.same_as(&diagonal_algebra(n, tol())), || format!("dephasing graph on M_{n}"))?;
        let cert = is_connected_seeded(&d, SEED).map_err(|e| e.to_string())?;
        ensure(!cert.is_connected(), || format!("dephasing graph on M_{n} connected"))?;
        let f = KrausMap::completely_depolarizing(n, tol())
            .channel_confusability()
            .map_err(|e| e.to_string())?;
        ensure(f.is_full(), || format!("depolarizing graph on M_{n} is not M_n"))?;
    }
    let counts: Vec<std::result::Result<usize, String>> = (0..200u64)
        .into_par_iter()
        .map(|i| {
            let mut r = rng("channel", i);
            // Isometries (k = 1) give C·I; k = 2 on C^5 gives dim S ≤ 4 < 5,
            // so every direction has a nonzero annihilated space.
            let (n, d, k) = if i % 2 == 0 {
                let n = r.random_range(2..=5);
                (n, r.random_range(n..=5), 1)
            } else {
                (5, r.random_range(3..=5), 2)
            };
            let phi = KrausMap::stinespring(n, d, k, tol(), &mut r).map_err(|e| e.to_string())?;
            let back = kraus_from_choi(&phi.choi(), n, d, tol()).map_err(|e| e.to_string())?;
            for a in 0..n {
                for b in 0..n {
                    let e = matrix_unit::<f64>(n, a, b);
                    let dev = (phi.apply(&e).unwrap() - back.apply(&e).unwrap()).iter().map(|z| z.norm()).fold(0.0, f64::max);
                    Hygiene::bump(&h.choi, dev);
                }
            }
            let s = phi.channel_confusability().map_err(|e| format!("channel {i}: {e}"))?;
            h.space(&s);
            if !(s.contains_identity() && s.is_adjoint_closed()) {
                return Err(format!("channel {i}: graph is not an operator system"));
            }
            let rep = check_orth_rep(&phi, &s, 200, i).map_err(|e| e.to_string())?;
            if rep.pairs_tested < 200 {
                return Err(format!("channel {i} ({n},{d},{k}): only {} pairs", rep.pairs_tested));
            }
            if rep.verdict != SampledVerdict::PassSampled || !rep.violations.is_empty() {
                return Err(format!("channel {i}: {} violations", rep.violations.len()));
            }
            Ok(rep.pairs_tested)
        })
        .collect();
    let mut pairs = 0;
    for c in counts {
        pairs += c?;
    }
    Ok(format!("200 channels, {pairs} annihilating pairs, no violations"))
}

// 8. Classical orthogonal representations lift; LGP gives n − d.
fn orth_rep_propositions(h: &Hygiene) -> Outcome {
    let mut cases = Vec::new();
    let mut i = 0u64;
    while cases.len() < 100 {
        let mut r = rng("orth", i);
        i += 1;
        let n = r.random_range(2..=6);
        let g = ClassicalGraph::gnp(n, r.random_range(0.2..0.9), &mut r);
        let kappa = classical_vertex_connectivity(&g).unwrap();
        let d = if i.is_multiple_of(2) { (n - kappa).max(1) } else { r.random_range(1..=n) };
        if let Some(f) = random_orth_rep::<f64, _>(&g, d, &tol(), &mut r) {
            cases.push((g, f, i));
        }
    }
    let lgp: Vec<std::result::Result<bool, String>> = cases
        .par_iter()
        .map(|(g, f, seed)| {
            let n = g.n();
            let check = validate_orth_rep(g, f, &tol()).map_err(|e| e.to_string())?;
            if !check.valid {
                return Err("sampler produced an invalid representation".into());
            }
            let phi = classical_to_quantum_rep(g, f, tol()).map_err(|e| e.to_string())?;
            let s = lift::<f64>(g, tol());
            let rep = check_orth_rep(&phi, &s, 200, *seed).map_err(|e| e.to_string())?;
            if rep.verdict != SampledVerdict::PassSampled {
                return Err(format!("{:?} in C^{}: {} violations", g.edges(), f.d(), rep.violations.len()));
            }
            if !check.locally_general_position {
                return Ok(false);
            }
            let l = check_lgp(&phi, &s, 40, *seed).map_err(|e| e.to_string())?;
            if !l.passed() {
                return Err(format!("{:?} in C^{}: LGP check failed", g.edges(), f.d()));
            }
            let bound = n.saturating_sub(f.d());
            let config = SearchConfig {
                seed: *seed,
                ..SearchConfig::default()
            };
            let b = separator_search(&s, &config).map_err(|e| e.to_string())?;
            if b.upper < bound {
                return Err(format!("{:?}: separator of rank {} < n − d = {bound}", g.edges(), b.upper));
            }
            if let Some(r) = &b.best_separator {
                if !h.report(r, &s) {
                    return Err("separator fails re-verification".into());
                }
            }
            Ok(true)
        })
        .collect();
    let mut flagged = 0;
    for l in lgp {
        flagged += usize::from(l?);
    }
    Ok(format!("100 representations, {flagged} in locally general position"))
}

// 9. Maximal connectivity of the closing example, refutation for C·I.
fn maximal(h: &Hygiene) -> Outcome {
    let m = maximal_example::<f64>(3, tol());
    match maximal_connectivity_check_seeded(&m, 24, SEED).map_err(|e| e.to_string())? {
        MaximalVerdict::Verified { exact: true, .. } => {}
        other => return Err(format!("maximal example: {other:?}")),
    }
    for n in 2..=4 {
        let s = QuantumGraph::<f64>::scalars(n, tol());
        match maximal_connectivity_check_seeded(&s, 24, SEED).map_err(|e| e.to_string())? {
            MaximalVerdict::Refuted { u, v, separator, .. } => {
                let overlap = u.dotc(&v).norm();
                ensure(overlap <= 1e-10, || format!("C·I_{n}: ⟨u|v⟩ = {overlap:e}"))?;
                ensure(h.report(&separator, &s), || format!("C·I_{n}: separator fails"))?;
            }
            other => return Err(format!("C·I_{n}: {other:?}")),
        }
    }
    let bound = lgp_connectivity_bound(&KrausMap::trace_map(3, tol()), &m, 200, SEED).map_err(|e| e.to_string())?;
    ensure(bound == 2, || format!("trace map bound {bound}"))?;
    Ok("maximal example verified exactly, C·I_n refuted, trace-map bound 2".into())
}

// 10. Residual audit over everything above.
fn hygiene(h: &Hygiene) -> Outcome {
    let rows = [
        ("orthonormality", Hygiene::read(&h.orthonormality), ORTHONORMALITY_BOUND),
        ("idempotency", Hygiene::read(&h.idempotency), IDEMPOTENCY_BOUND),
        ("eigenpairs", Hygiene::read(&h.eig), EIG_BOUND),
        ("choi round trip", Hygiene::read(&h.choi), CHOI_BOUND),
        ("re-verification", Hygiene::read(&h.reverify), REVERIFY_BOUND),
    ];
    let text: Vec<String> = rows.iter().map(|(n, v, b)| format!("{n} {v:.1e} ≤ {b:.0e}")).collect();
    for (name, v, b) in rows {
        ensure(v <= b, || format!("{name} residual {v:e} exceeds {b:e}"))?;
    }
    Ok(text.join(", "))
}

fn main() {
    let h = Hygiene::new();
    type Criterion = fn(&Hygiene) -> Outcome;
    let criteria: [(&str, Criterion, u64); 10] = [
        ("dual-algorithm connectedness", dual_algorithm, 60),
        ("classical connectedness", classical_connectedness, 10),
        ("classical k-connectedness", classical_k_connectedness, 600),
        ("tree packing", tree_packing, 300),
        ("hamming cube", hamming, 120),
        ("confusability laws", confusability_laws, 600),
        ("channel pipeline", channel_pipeline, 600),
        ("orthogonal representations", orth_rep_propositions, 600),
        ("maximal connectivity", maximal, 600),
        ("numerical hygiene", hygiene, 600),
    ];
    let mut failed = 0;
    for (k, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run(&h);
        let elapsed = start.elapsed();
        let over = elapsed > Duration::from_secs(*budget);
        let (status, detail) = match (&outcome, over) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("{d}; over the {budget} s budget")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("{status} [{:>2}] {name} ({:.1} s): {detail}", k + 1, elapsed.as_secs_f64());
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
