//! Named operator systems used as fixtures and examples.

use rand::Rng;

use crate::matcore::{identity, matrix_unit, CMat, Tolerance};
use crate::opspace::{make_quantum_graph, BuildMode, QuantumGraph};
use crate::random::ginibre;
use crate::scalar::{cx, Real};

/// `[I, X, Y, Z]`.
pub fn pauli<T: Real>() -> [CMat<T>; 4] {
    let m = |a: [(f64, f64); 4]| CMat::from_row_slice(2, 2, &a.map(|(re, im)| cx::<T>(re, im)));
    [
        m([(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (1.0, 0.0)]),
        m([(0.0, 0.0), (1.0, 0.0), (1.0, 0.0), (0.0, 0.0)]),
        m([(0.0, 0.0), (0.0, -1.0), (0.0, 1.0), (0.0, 0.0)]),
        m([(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (-1.0, 0.0)]),
    ]
}

/// Quantum Hamming cube `C_n ⊆ M_{2^n}`: tensor products of `n` factors from
/// `M_2` with at most one factor different from `I_2`. Dimension `1 + 3n`.
pub fn hamming_cube<T: Real>(n: usize, tol: Tolerance) -> QuantumGraph<T> {
    assert!((1..=10).contains(&n), "cube order out of range");
    let p = pauli::<T>();
    let mut gens = vec![identity::<T>(1 << n)];
    for site in 0..n {
        for sigma in &p[1..] {
            let mut m = identity::<T>(1);
            for k in 0..n {
                m = m.kronecker(if k == site { sigma } else { &p[0] });
            }
            gens.push(m);
        }
    }
    make_quantum_graph(1 << n, &gens, tol, BuildMode::Strict).expect("cube is an operator system")
}

/// `span{I_n, |e_i⟩⟨e_j| : i ≠ j}`.
pub fn maximal_example<T: Real>(n: usize, tol: Tolerance) -> QuantumGraph<T> {
    let mut gens = vec![identity::<T>(n)];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                gens.push(matrix_unit(n, i, j));
            }
        }
    }
    make_quantum_graph(n, &gens, tol, BuildMode::Strict).expect("operator system")
}

/// Diagonal matrices in `M_n`.
pub fn diagonal_algebra<T: Real>(n: usize, tol: Tolerance) -> QuantumGraph<T> {
    let gens: Vec<CMat<T>> = (0..n).map(|i| matrix_unit(n, i, i)).collect();
    make_quantum_graph(n, &gens, tol, BuildMode::Strict).expect("operator system")
}

/// Operator system generated by `gens` Ginibre matrices (adjoints and `I`
/// adjoined).
pub fn random_operator_system<T: Real, R: Rng + ?Sized>(
    n: usize,
    gens: usize,
    tol: Tolerance,
    rng: &mut R,
) -> QuantumGraph<T> {
    let mats: Vec<CMat<T>> = (0..gens).map(|_| ginibre(n, n, rng)).collect();
    make_quantum_graph(n, &mats, tol, BuildMode::Permissive).expect("square generators")
}
