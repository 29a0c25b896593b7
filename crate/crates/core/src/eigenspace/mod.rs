//! Cyclotomic arithmetic and eigenspace gradings of structure-constant Lie algebras.
//!
//! An automorphism `phi` of order `n` splits `L` over `Q(w)` into eigenspaces
//! `L_i = {x : phi(x) = w^i x}`, a (Z/nZ)-grading. An involution `h` with
//! `h phi h^-1 = phi^-1` permutes them, sending `L_i` to `L_{-i}`. All field
//! arithmetic is exact in `Q[t] / Phi_n`.

mod algebra;
mod cyclotomic;
mod decompose;
mod matrix;

pub use algebra::{AlgebraFile, AlgebraInput, AutomorphismPair, SCAlgebra, StructureConstant};
pub use cyclotomic::{cyclotomic_polynomial, CyclotomicField, CyclotomicNumber, RationalJson};
pub use decompose::{
    analyze_algebra, decompose_eigenspaces, eigenspace_decomposition, fixed_subalgebra,
    verify_automorphism_pair, verify_hypotheses, verify_selective_condition, DecompositionReport,
    Grading, GradingReport, HypothesisReport, NamedCheck, PairReport, SelectiveReport,
    SelectiveWitness,
};
pub use matrix::{is_zero_vector, CycMatrix, CycVector};

use std::sync::Arc;

/// The 2-dimensional abelian algebra with `phi = diag(w, w^2)` and `h` swapping
/// the basis vectors, over `Q(w_3)`.
pub fn abelian_example() -> (SCAlgebra, AutomorphismPair) {
    let k = CyclotomicField::new(3).expect("3 is a valid order");
    let alg = SCAlgebra::abelian(&k, vec!["e1".into(), "e2".into()]);
    let phi = CycMatrix::diagonal(&k, vec![k.omega_power(1), k.omega_power(2)]);
    let h = swap(&k, 2, &[(0, 1)], &[]);
    (alg, AutomorphismPair { phi, h, order: 3 })
}

/// Heisenberg algebra `[x, y] = z` over `Q(w_n)`.
pub fn heisenberg(n: u64) -> crate::Result<SCAlgebra> {
    let k = CyclotomicField::new(n)?;
    SCAlgebra::new(
        &k,
        vec!["x".into(), "y".into(), "z".into()],
        vec![StructureConstant {
            i: 0,
            j: 1,
            k: 2,
            value: k.one(),
        }],
    )
}

/// Permutation matrix exchanging each listed pair, with `-1` on the `negate` diagonal entries.
fn swap(
    k: &Arc<CyclotomicField>,
    d: usize,
    pairs: &[(usize, usize)],
    negate: &[usize],
) -> CycMatrix {
    let mut m = CycMatrix::identity(k, d);
    for &(a, b) in pairs {
        m.set(a, a, k.zero());
        m.set(b, b, k.zero());
        m.set(a, b, k.one());
        m.set(b, a, k.one());
    }
    for &i in negate {
        m.set(i, i, k.integer(-1));
    }
    m
}

#[cfg(test)]
mod tests;
