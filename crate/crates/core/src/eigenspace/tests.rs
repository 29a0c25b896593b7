use super::*;
use crate::error::Error;
use crate::free::{FineDegree, FreeLieAlgebra, GeneratorSet};

#[test]
fn abelian_example_passes_everything() {
    let (alg, aut) = abelian_example();
    let pair = verify_automorphism_pair(&alg, &aut).unwrap();
    assert!(pair.passed, "{pair:?}");

    let g = eigenspace_decomposition(&alg, &aut).unwrap();
    assert_eq!(g.dimensions(), vec![0, 1, 1]);
    assert_eq!(g.component(1), &[alg.basis_vector(0)]);

    let k = alg.field();
    assert!(fixed_subalgebra(&alg, &aut.phi).unwrap().is_empty());
    let fixed_h = fixed_subalgebra(&alg, &aut.h).unwrap();
    assert_eq!(fixed_h, vec![vec![k.one(), k.one()]]);
    assert_eq!(
        fixed_subalgebra(&alg, &CycMatrix::identity(k, 2))
            .unwrap()
            .len(),
        2
    );

    let hyp = verify_hypotheses(&alg, &aut).unwrap();
    assert!(hyp.passed && hyp.fixed_h_metabelian);
    assert_eq!(hyp.fixed_h_dimension, 1);

    let sel = verify_selective_condition(&alg, &g).unwrap();
    assert!(sel.passed);
}

#[test]
fn heisenberg_grading() {
    let alg = heisenberg(5).unwrap();
    let k = alg.field().clone();
    let phi = CycMatrix::diagonal(
        &k,
        vec![k.omega_power(1), k.omega_power(1), k.omega_power(2)],
    );
    let g = decompose_eigenspaces(&alg, &phi, 5).unwrap();
    assert_eq!(g.dimensions(), vec![0, 2, 1, 0, 0]);
    assert_eq!(g.component(1), &[alg.basis_vector(0), alg.basis_vector(1)]);
    assert_eq!(g.component(2), &[alg.basis_vector(2)]);
    assert_eq!(g.dimensions().iter().sum::<usize>(), alg.dimension());
    // L_1 has no partner L_4 here, so no h can exist.
    let aut = AutomorphismPair {
        phi: phi.clone(),
        h: CycMatrix::identity(&k, 3),
        order: 5,
    };
    assert!(!verify_automorphism_pair(&alg, &aut).unwrap().passed);
}

#[test]
fn identity_phi_has_wrong_order() {
    let (alg, mut aut) = abelian_example();
    aut.phi = CycMatrix::identity(alg.field(), 2);
    let report = verify_automorphism_pair(&alg, &aut).unwrap();
    assert!(!report.passed);
    assert!(!report.check("phi_order").unwrap().passed);
}

#[test]
fn heisenberg_pairs() {
    let alg = heisenberg(3).unwrap();
    let k = alg.field().clone();
    let phi = CycMatrix::diagonal(&k, vec![k.omega_power(1), k.omega_power(2), k.one()]);

    // x <-> y with z fixed reverses the bracket.
    let bad = AutomorphismPair {
        phi: phi.clone(),
        h: swap(&k, 3, &[(0, 1)], &[]),
        order: 3,
    };
    let report = verify_automorphism_pair(&alg, &bad).unwrap();
    let check = report.check("h_preserves_bracket").unwrap();
    assert!(!check.passed);
    assert_eq!(check.witness, Some(vec![0, 1]));

    let good = AutomorphismPair {
        phi,
        h: swap(&k, 3, &[(0, 1)], &[2]),
        order: 3,
    };
    assert!(verify_automorphism_pair(&alg, &good).unwrap().passed);
    let g = eigenspace_decomposition(&alg, &good).unwrap();
    assert_eq!(g.dimensions(), vec![1, 1, 1]);
    let hyp = verify_hypotheses(&alg, &good).unwrap();
    assert!(!hyp.passed);
    assert_eq!(hyp.fixed_phi_dimension, 1);
    assert_eq!(
        hyp.fixed_phi_witness,
        Some(vec!["0".into(), "0".into(), "1".into()])
    );
}

#[test]
fn invalid_inputs_are_rejected() {
    let k = CyclotomicField::new(3).unwrap();
    let labels = || vec!["a".to_string(), "b".to_string(), "c".to_string()];
    let sc = |i, j, kk, v: i64| StructureConstant {
        i,
        j,
        k: kk,
        value: k.integer(v),
    };
    // [a, b] = a, [b, c] = b: the Jacobi sum on (a, b, c) is [b, a] = -a.
    let err = SCAlgebra::new(&k, labels(), vec![sc(0, 1, 0, 1), sc(1, 2, 1, 1)]).unwrap_err();
    assert!(
        matches!(err, Error::InvalidAlgebra(ref m) if m.contains("(0, 1, 2)")),
        "{err:?}"
    );
    let err = SCAlgebra::new(&k, labels(), vec![sc(0, 1, 2, 1), sc(1, 0, 2, 1)]).unwrap_err();
    assert!(matches!(err, Error::InvalidAlgebra(ref m) if m.contains("antisymmetry")));
    assert!(SCAlgebra::new(&k, labels(), vec![sc(0, 0, 1, 1)]).is_err());
    assert!(SCAlgebra::new(&k, labels(), vec![sc(0, 1, 2, 1), sc(1, 0, 2, -1)]).is_ok());

    let (alg, mut aut) = abelian_example();
    aut.h = CycMatrix::identity(&k, 3);
    assert!(matches!(
        verify_automorphism_pair(&alg, &aut),
        Err(Error::DimensionMismatch(_))
    ));
    let (alg, mut aut) = abelian_example();
    aut.order = 1;
    assert!(matches!(
        verify_automorphism_pair(&alg, &aut),
        Err(Error::InvalidModulus(1))
    ));
    let not_aut = CycMatrix::diagonal(&k, vec![k.one(), k.omega_power(1), k.omega_power(2)]);
    let err = decompose_eigenspaces(&heisenberg(3).unwrap(), &not_aut, 3);
    assert!(matches!(err, Err(Error::NotAnAutomorphism(_))));
}

/// Multilinear part of the free Lie algebra on `letters` generators: the
/// quotient by every monomial with a repeated letter. Graded by length mod `n`.
fn multilinear_free(n: u64, letters: usize) -> (SCAlgebra, CycMatrix) {
    let names: Vec<String> = (0..letters).map(|i| format!("g{i}")).collect();
    let pairs: Vec<(&str, i64)> = names.iter().map(|s| (s.as_str(), 1)).collect();
    let free = FreeLieAlgebra::new(GeneratorSet::from_pairs(n, &pairs).unwrap());
    let mut monos = Vec::new();
    for mask in 1u32..(1 << letters) {
        let key = FineDegree::from_counts((0..letters).map(|i| (mask >> i) & 1).collect());
        monos.extend(free.basis(&key).monos.iter().copied());
    }
    let index: std::collections::HashMap<_, _> =
        monos.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let k = CyclotomicField::new(n).unwrap();
    let mut constants = Vec::new();
    for (i, &u) in monos.iter().enumerate() {
        for (j, &v) in monos.iter().enumerate().skip(i + 1) {
            let (du, dv) = (free.fine_degree_of(u), free.fine_degree_of(v));
            if du.counts().iter().zip(dv.counts()).any(|(a, b)| a + b > 1) {
                continue;
            }
            for (w, c) in free.bracket_monomials(u, v).iter() {
                constants.push(StructureConstant {
                    i,
                    j,
                    k: index[w],
                    value: k.integer(*c),
                });
            }
        }
    }
    let labels = monos
        .iter()
        .map(|&m| free.render(&free.monomial_element(m)))
        .collect();
    let alg = SCAlgebra::new(&k, labels, constants).unwrap();
    let phi = CycMatrix::diagonal(
        &k,
        monos
            .iter()
            .map(|&m| k.omega_power(free.length_of(m) as i64))
            .collect(),
    );
    (alg, phi)
}

#[test]
fn selective_condition_violation_has_witness() {
    // All generators in L_1; (1, 1, 1, 1) is (-1)-independent mod 7.
    let (alg, phi) = multilinear_free(7, 4);
    assert_eq!(alg.dimension(), 4 + 6 + 4 * 2 + 6);
    let g = decompose_eigenspaces(&alg, &phi, 7).unwrap();
    let report = verify_selective_condition(&alg, &g).unwrap();
    assert!(!report.passed);
    let w = report.witness.unwrap();
    assert_eq!(w.indices, vec![1, 1, 1, 1]);
    assert!(w.value.iter().any(|c| c != "0"));
}

#[test]
fn json_round_trip_and_mismatch() {
    let alg = heisenberg(5).unwrap();
    let k = alg.field().clone();
    let phi = CycMatrix::diagonal(
        &k,
        vec![k.omega_power(1), k.omega_power(1), k.omega_power(2)],
    );
    let file = AlgebraFile::from_parts(&alg, Some(&phi), None);
    let text = serde_json::to_string(&file).unwrap();
    let back = AlgebraFile::from_json(&text).unwrap().build().unwrap();
    assert_eq!(back.algebra.constants().len(), 1);
    assert_eq!(back.phi.as_ref(), Some(&phi));
    assert!(back.pair().is_none());

    let bad = r#"{"order": 3, "dimension": 2, "phi": [[[1]]]}"#;
    assert!(matches!(
        AlgebraFile::from_json(bad).unwrap().build(),
        Err(Error::DimensionMismatch(_))
    ));
    let rational =
        r#"{"order": 3, "dimension": 3, "structure_constants": [[0, 1, 2, ["1/2", 1]]]}"#;
    let parsed = AlgebraFile::from_json(rational).unwrap().build().unwrap();
    assert_eq!(
        parsed.algebra.bracket_basis(1, 0)[2].to_string(),
        "-1/2 - w"
    );
}

#[test]
fn analyze_abelian_and_phi_only_files() {
    let (alg, aut) = abelian_example();
    let file = AlgebraFile::from_parts(&alg, Some(&aut.phi), Some(&aut.h));
    let report = analyze_algebra(&file.build().unwrap()).unwrap();
    assert!(report.passed);
    assert_eq!(report.grading.unwrap().component_dimensions, vec![0, 1, 1]);

    let h = heisenberg(5).unwrap();
    let k = h.field().clone();
    let phi = CycMatrix::diagonal(
        &k,
        vec![k.omega_power(1), k.omega_power(1), k.omega_power(2)],
    );
    let report = analyze_algebra(
        &AlgebraFile::from_parts(&h, Some(&phi), None)
            .build()
            .unwrap(),
    )
    .unwrap();
    assert!(report.automorphism_pair.is_none() && report.hypotheses.is_none());
    assert!(report.grading.is_some());

    let bare = AlgebraFile::from_parts(&h, None, None).build().unwrap();
    assert!(matches!(analyze_algebra(&bare), Err(Error::Parse(_))));
}
