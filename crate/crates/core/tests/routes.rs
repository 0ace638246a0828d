//! Cross-validation of the three solution routes: closed forms, matrix
//! eigensolve, and recursion-polynomial roots must produce the same spectra,
//! and the characteristic polynomial of the operator must reproduce the
//! recursion polynomial coefficient by coefficient.

use qes_core::closed_form::closed_form_energies;
use qes_core::gauge::{
    build_from_sl2, build_operator, char_poly, eigen_spectrum, eigen_spectrum_complex_qr,
    eigen_spectrum_symmetrized, Sl2Generators,
};
use qes_core::model::{default_tol_real, multiset_deviation, PotentialSpec, Variant};
use qes_core::recursion::{build_r, factorization_check, qes_energies_recursion};

const ZETA_GRID: [f64; 5] = [0.1, 0.5, 1.0, 2.0, 5.0];

#[test]
fn recursion_and_matrix_agree_up_to_m20() {
    let tol = default_tol_real();
    for variant in [Variant::Plus, Variant::Minus] {
        for m in 1..=20u32 {
            for zeta in ZETA_GRID {
                let spec = PotentialSpec::new(variant, zeta, m).unwrap();
                let rec = qes_energies_recursion(&spec, tol).unwrap();
                let mat = eigen_spectrum(&build_operator(&spec), &spec, tol).unwrap();
                let dev = multiset_deviation(&rec.energies(), &mat.energies());
                assert!(dev < 1e-8, "{variant:?} m={m} zeta={zeta}: deviation {dev:e}");
            }
        }
    }
}

#[test]
fn closed_forms_match_both_routes_up_to_m4() {
    let tol = default_tol_real();
    for variant in [Variant::Plus, Variant::Minus] {
        for m in 1..=4u32 {
            for zeta in [0.0, 0.1, 0.25, 0.5, 1.0, 2.0, 5.0] {
                let spec = PotentialSpec::new(variant, zeta, m).unwrap();
                let closed = closed_form_energies(&spec, tol).unwrap();
                let rec = qes_energies_recursion(&spec, tol).unwrap();
                let mat = eigen_spectrum(&build_operator(&spec), &spec, tol).unwrap();
                let d1 = multiset_deviation(&closed.energies(), &rec.energies());
                let d2 = multiset_deviation(&closed.energies(), &mat.energies());
                assert!(d1 < 1e-9, "{variant:?} m={m} zeta={zeta} closed-vs-recursion {d1:e}");
                assert!(d2 < 1e-9, "{variant:?} m={m} zeta={zeta} closed-vs-matrix {d2:e}");
            }
        }
    }
}

#[test]
fn characteristic_polynomial_equals_recursion_polynomial() {
    for variant in [Variant::Plus, Variant::Minus] {
        for m in 1..=20u32 {
            for zeta in ZETA_GRID {
                let spec = PotentialSpec::new(variant, zeta, m).unwrap();
                let cp = char_poly(&build_operator(&spec));
                let rm = build_r(&spec, m as usize).pop().unwrap();
                assert_eq!(cp.degree(), rm.degree());
                let scale = rm.max_abs_coeff().max(1.0);
                for (a, b) in cp.coeffs.iter().zip(&rm.coeffs) {
                    assert!(
                        (a - b).norm() <= 1e-10 * scale,
                        "{variant:?} m={m} zeta={zeta}: {a} vs {b}"
                    );
                }
            }
        }
    }
}

#[test]
fn sl2_assembly_matches_direct_bands_elementwise() {
    for variant in [Variant::Plus, Variant::Minus] {
        for m in [1u32, 2, 3, 5, 9, 20, 50] {
            for zeta in [0.0, 0.5, 2.0] {
                let spec = PotentialSpec::new(variant, zeta, m).unwrap();
                let dense = Sl2Generators::new(m).hamiltonian(&spec);
                let direct = build_operator(&spec).to_dense();
                let dev = dense.sub(&direct).max_abs();
                assert!(dev < 1e-13, "{variant:?} m={m} zeta={zeta}: {dev:e}");
                let banded = build_from_sl2(&spec);
                assert_eq!(banded.diag.len(), m as usize);
            }
        }
    }
    for m in [1u32, 7, 30, 50] {
        assert!(Sl2Generators::<f64>::new(m).commutator_defect() < 1e-13);
    }
}

#[test]
fn trace_matches_eigenvalue_sum() {
    let tol = default_tol_real();
    for variant in [Variant::Plus, Variant::Minus] {
        for m in [2u32, 5, 11, 17] {
            for zeta in [0.3, 1.7] {
                let spec = PotentialSpec::new(variant, zeta, m).unwrap();
                let op = build_operator(&spec);
                let s = eigen_spectrum(&op, &spec, tol).unwrap();
                let sum: qes_core::C64 = s.energies().into_iter().sum();
                let rel = (sum.re - op.trace()).abs().max(sum.im.abs()) / op.trace().abs().max(1.0);
                assert!(rel < 1e-9, "{variant:?} m={m} zeta={zeta}: trace defect {rel:e}");
            }
        }
    }
}

#[test]
fn minus_spectra_are_real_and_certified_by_symmetrization() {
    let tol = default_tol_real();
    for m in 1..=30u32 {
        for zeta in [-5.0, -1.0, 0.5, 3.0, 5.0] {
            let spec = PotentialSpec::minus(zeta, m).unwrap();
            let op = build_operator(&spec);
            let sym = eigen_spectrum_symmetrized(&op, &spec, tol).unwrap();
            assert!(
                sym.max_rel_imag() < 1e-9,
                "minus m={m} zeta={zeta}: imag {:e}",
                sym.max_rel_imag()
            );
            // the certificate agrees with the unstructured complex eigensolve
            let qr = eigen_spectrum_complex_qr(&op, &spec, tol).unwrap();
            let dev = multiset_deviation(&sym.energies(), &qr.energies());
            assert!(dev < 1e-9, "minus m={m} zeta={zeta}: certificate deviation {dev:e}");
        }
    }
}

#[test]
fn factorization_identity_across_grid() {
    for variant in [Variant::Plus, Variant::Minus] {
        for m in 1..=10u32 {
            for zeta in [0.1, 0.5, 1.0, 2.0] {
                let spec = PotentialSpec::new(variant, zeta, m).unwrap();
                let rem = factorization_check(&spec, 5);
                assert!(rem < 1e-9, "{variant:?} m={m} zeta={zeta}: remainder {rem:e}");
            }
        }
    }
}

#[test]
fn plus_variant_conjugate_pairing_examples() {
    let tol = default_tol_real();
    // M=4, zeta in {0.5, 1, 2}: all four eigenvalues leave the real axis
    for zeta in [0.5, 1.0, 2.0] {
        let spec = PotentialSpec::plus(zeta, 4).unwrap();
        let s = eigen_spectrum(&build_operator(&spec), &spec, tol).unwrap();
        assert!(s.levels.iter().all(|l| !l.is_real()), "zeta={zeta}");
        assert!(s.levels.iter().all(|l| l.pair_id.is_some()), "zeta={zeta}");
    }
    // M=3: pair is real below the critical coupling, complex above
    let below = PotentialSpec::plus(0.49, 3).unwrap();
    let s = eigen_spectrum(&build_operator(&below), &below, tol).unwrap();
    assert!(s.all_real());
    let above = PotentialSpec::plus(0.51, 3).unwrap();
    let s = eigen_spectrum(&build_operator(&above), &above, tol).unwrap();
    assert!(!s.all_real());
}

#[test]
fn eigenvectors_agree_between_routes() {
    // phi from the recursion formula annihilates (A - E I) of the operator
    let tol = default_tol_real();
    for &(variant, zeta, m) in &[
        (Variant::Minus, 0.5f64, 3u32),
        (Variant::Minus, 1.0, 7),
        (Variant::Plus, 1.5, 5),
        (Variant::Plus, 0.25, 3),
    ] {
        let spec = PotentialSpec::new(variant, zeta, m).unwrap();
        let op = build_operator(&spec);
        let rec = qes_energies_recursion(&spec, tol).unwrap();
        for lvl in &rec.levels {
            let defect = op.eigen_defect(lvl.energy, &lvl.phi_coeffs);
            assert!(defect < 1e-9, "{variant:?} m={m} zeta={zeta}: defect {defect:e}");
        }
    }
    // the spec'd spot check: minus, zeta=0.5, M=3, E = 7.25 + 2 sqrt 2
    let spec = PotentialSpec::minus(0.5f64, 3).unwrap();
    let e = qes_core::C64::new(7.25 + 2.0 * 2.0f64.sqrt(), 0.0);
    let phi = qes_core::recursion::phi_from_r(&spec, e).unwrap();
    let defect = build_operator(&spec).eigen_defect(e, &phi);
    assert!(defect < 1e-9, "defect {defect:e}");
}

#[test]
fn single_precision_instantiation_works() {
    // the kernels are generic over the scalar; f32 needs loose tolerances
    let spec = qes_core::model::PotentialSpec::<f32>::minus(1.0f32, 2).unwrap();
    let op = qes_core::gauge::build_operator(&spec);
    let s = qes_core::gauge::eigen_spectrum(&op, &spec, 1e-3f32).unwrap();
    assert!((s.levels[0].energy.re - 2.0).abs() < 1e-4);
    assert!((s.levels[1].energy.re - 6.0).abs() < 1e-4);
    let rec = qes_core::recursion::qes_energies_recursion(&spec, 1e-3f32).unwrap();
    let dev = qes_core::model::multiset_deviation(&rec.energies(), &s.energies());
    assert!(dev < 1e-3, "f32 route deviation {dev:e}");
}
