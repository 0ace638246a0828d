//! Three-term recursion for the energy polynomials R_n(E) and the QES
//! energies as roots of R_M(E) = 0.
//!
//! With R_0 = 1, R_{-1} = 0 the recursion
//!
//! ```text
//! R_{n+1}(E) = (E - b_n) R_n(E) - a_n R_{n-1}(E)
//! a_n = -s * 4 n (M - n) zeta^2
//! b_n = 4 n (M - 1 - n) + 2M - 1 - s * zeta^2        (s = +1 plus, -1 minus)
//! ```
//!
//! makes every R_n monic of degree n. Since a_M = 0, R_M divides every later
//! member: R_{M+n} = R_M * Rbar_n with Rbar running the same recursion on the
//! shifted coefficients. The M roots of R_M are exactly the QES energies.

use crate::aberth;
use crate::error::Error;
use crate::model::{degenerate_flags, Method, PotentialSpec, Spectrum};
use crate::refine::{polish_simultaneous, ThreeTermPoly};
use crate::scalar::{imag, real, Cplx, Real};

/// The recursion coefficients a_n, b_n with the variant sign resolved.
///
/// `a_n` vanishes exactly at n = 0 and n = M because the integer factor
/// `n (M - n)` is computed in integer arithmetic.
#[derive(Debug, Clone, Copy)]
pub struct RecursionCoeffs<T> {
    spec: PotentialSpec<T>,
}

impl<T: Real> RecursionCoeffs<T> {
    pub fn new(spec: &PotentialSpec<T>) -> Self {
        Self { spec: *spec }
    }

    /// a_n = -s * 4 n (M - n) zeta^2 (real for both variants).
    pub fn a(&self, n: u32) -> T {
        let m = i64::from(self.spec.m);
        let n = i64::from(n);
        let factor = T::of_i64(4 * n * (m - n));
        -self.spec.variant.sign::<T>() * factor * self.spec.zeta * self.spec.zeta
    }

    /// b_n = 4 n (M - 1 - n) + 2M - 1 - s * zeta^2.
    pub fn b(&self, n: u32) -> T {
        let m = i64::from(self.spec.m);
        let n = i64::from(n);
        let poly = T::of_i64(4 * n * (m - 1 - n) + 2 * m - 1);
        poly - self.spec.variant.sign::<T>() * self.spec.zeta * self.spec.zeta
    }
}

/// Convenience constructor matching the operation name in the docs.
pub fn recursion_coeffs<T: Real>(spec: &PotentialSpec<T>) -> RecursionCoeffs<T> {
    RecursionCoeffs::new(spec)
}

/// Polynomial in E, coefficient k multiplying E^k. Monic by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyPolynomial<T> {
    pub coeffs: Vec<Cplx<T>>,
}

impl<T: Real> EnergyPolynomial<T> {
    pub fn one() -> Self {
        Self { coeffs: vec![real(T::one())] }
    }

    pub fn zero() -> Self {
        Self { coeffs: vec![real(T::zero())] }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> Cplx<T> {
        *self.coeffs.last().expect("nonempty")
    }

    pub fn eval(&self, e: Cplx<T>) -> Cplx<T> {
        let mut acc = Cplx::new(T::zero(), T::zero());
        for &c in self.coeffs.iter().rev() {
            acc = acc * e + c;
        }
        acc
    }

    pub fn max_abs_coeff(&self) -> T {
        self.coeffs
            .iter()
            .map(|c| c.norm())
            .fold(T::zero(), |a, b| a.max(b))
    }

    /// Next member of a three-term chain: (E - b) * self - a * prev.
    fn step(&self, prev: &EnergyPolynomial<T>, b: Cplx<T>, a: Cplx<T>) -> Self {
        let n = self.coeffs.len();
        let mut out = vec![Cplx::new(T::zero(), T::zero()); n + 1];
        for (k, &c) in self.coeffs.iter().enumerate() {
            out[k + 1] += c;
            out[k] -= b * c;
        }
        for (k, &c) in prev.coeffs.iter().enumerate() {
            out[k] -= a * c;
        }
        Self { coeffs: out }
    }

    /// Polynomial product (used by the factorization identity check).
    pub fn mul(&self, other: &EnergyPolynomial<T>) -> Self {
        let mut out =
            vec![Cplx::new(T::zero(), T::zero()); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self { coeffs: out }
    }
}

/// R_0..R_{n_max} as explicit polynomials in E.
pub fn build_r<T: Real>(spec: &PotentialSpec<T>, n_max: usize) -> Vec<EnergyPolynomial<T>> {
    let rc = RecursionCoeffs::new(spec);
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(EnergyPolynomial::one());
    if n_max == 0 {
        return out;
    }
    let mut prev = EnergyPolynomial::zero(); // R_{-1}
    for n in 0..n_max {
        let b = real(rc.b(n as u32));
        let a = real(rc.a(n as u32));
        let next = out[n].step(&prev, b, a);
        prev = out[n].clone();
        out.push(next);
    }
    out
}

/// The three-term chain for R_n as evaluation-ready coefficient arrays.
fn three_term<T: Real>(spec: &PotentialSpec<T>, n: usize) -> ThreeTermPoly<T> {
    let rc = RecursionCoeffs::new(spec);
    ThreeTermPoly {
        b: (0..n).map(|k| rc.b(k as u32)).collect(),
        a: (0..n).map(|k| rc.a(k as u32)).collect(),
    }
}

/// R_n(E) and d/dE R_n(E) evaluated through the recursion itself
/// (numerically stabler than the expanded coefficients), plus the largest
/// intermediate magnitude encountered, which scales the rounding error.
pub fn eval_r_with_deriv<T: Real>(
    spec: &PotentialSpec<T>,
    n: usize,
    e: Cplx<T>,
) -> (Cplx<T>, Cplx<T>, T) {
    three_term(spec, n).eval(e)
}

/// QES energies as the roots of R_M(E) = 0, polished by Newton steps on the
/// recursion-based evaluation. `method` tag: recursion.
pub fn qes_energies_recursion<T: Real>(
    spec: &PotentialSpec<T>,
    tol_real: T,
) -> Result<Spectrum<T>, Error> {
    let m = spec.dim();
    if spec.zeta == T::zero() {
        return Ok(diagonal_spectrum(spec, Method::Recursion, tol_real));
    }

    let polys = build_r(spec, m);
    let mut roots = aberth::polynomial_roots(&polys[m].coeffs, 500)?;

    // Polish against the recursion-based evaluation (compensated precision;
    // the expanded coefficients cannot resolve near-degenerate pairs).
    let chain = three_term(spec, m);
    polish_simultaneous(&chain, &mut roots, 40);
    let degenerate = degenerate_flags(&roots);

    // Accept each root when its residual sits at the evaluation noise floor
    // or its Newton correction bounds the root error at the 1e-12 level.
    let accept = T::of(1e-12);
    let floor = T::epsilon() * T::of(64.0);
    for &root in roots.iter() {
        let (p, dp, scale) = chain.eval(root);
        if p.norm() <= floor * scale {
            continue;
        }
        let correction = if dp.norm() == T::zero() { T::infinity() } else { (p / dp).norm() };
        let rel = correction / T::one().max(root.norm());
        if rel > accept {
            return Err(Error::NonConvergence {
                iterations: 500,
                residual: rel.to_f64().unwrap_or(f64::NAN),
            });
        }
    }

    let pairs = roots
        .into_iter()
        .zip(degenerate)
        .map(|(e, d)| {
            let phi = phi_from_r(spec, e)?;
            Ok((e, phi, d))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(Spectrum::assemble(*spec, Method::Recursion, pairs, tol_real))
}

/// zeta = 0: the gauged operator is diagonal, so the energies are the b_n and
/// the coefficient vectors are the standard basis. Shared by both routes so
/// the degenerate-b_n case stays deterministic.
pub(crate) fn diagonal_spectrum<T: Real>(
    spec: &PotentialSpec<T>,
    method: Method,
    tol_real: T,
) -> Spectrum<T> {
    let rc = RecursionCoeffs::new(spec);
    let m = spec.dim();
    let energies: Vec<Cplx<T>> = (0..m).map(|n| real(rc.b(n as u32))).collect();
    let degenerate = degenerate_flags(&energies);
    let pairs = energies
        .into_iter()
        .enumerate()
        .map(|(n, e)| {
            let mut phi = vec![Cplx::new(T::zero(), T::zero()); m];
            phi[n] = real(T::one());
            (e, phi, degenerate[n])
        })
        .collect();
    Spectrum::assemble(*spec, method, pairs, tol_real)
}

/// Largest normalized coefficient deviation of R_{M+n} - R_M * Rbar_n over
/// n = 1..=n_extra, where Rbar runs the recursion on the shifted coefficients
/// a_{M+n}, b_{M+n} (an exact algebraic identity; only rounding remains).
pub fn factorization_check<T: Real>(spec: &PotentialSpec<T>, n_extra: usize) -> T {
    assert!(n_extra >= 1);
    let m = spec.dim();
    let rc = RecursionCoeffs::new(spec);
    let direct = build_r(spec, m + n_extra);

    let mut rbar = Vec::with_capacity(n_extra + 1);
    rbar.push(EnergyPolynomial::one());
    let mut prev = EnergyPolynomial::zero();
    for n in 0..n_extra {
        let b = real(rc.b((m + n) as u32));
        let a = real(rc.a((m + n) as u32));
        let next = rbar[n].step(&prev, b, a);
        prev = rbar[n].clone();
        rbar.push(next);
    }

    let mut worst = T::zero();
    for n in 1..=n_extra {
        let product = direct[m].mul(&rbar[n]);
        let scale = T::one()
            .max(direct[m + n].max_abs_coeff())
            .max(product.max_abs_coeff());
        for (k, &c) in direct[m + n].coeffs.iter().enumerate() {
            let p = product.coeffs.get(k).copied().unwrap_or_else(|| real(T::zero()));
            worst = worst.max((c - p).norm() / scale);
        }
    }
    worst
}

/// Coefficients c_n = R_n(E) / n! * (s / (2 i zeta))^n for n = 0..M-1,
/// normalized so the highest nonzero entry is 1. Truncation at M-1 is exact
/// because R_M(E) = 0 annihilates every higher term.
pub fn phi_from_r<T: Real>(spec: &PotentialSpec<T>, energy: Cplx<T>) -> Result<Vec<Cplx<T>>, Error> {
    if spec.zeta == T::zero() {
        return Err(Error::ZetaZero);
    }
    let m = spec.dim();
    // E must sit within 1e-8 (relative) of a root of R_M: the Newton
    // correction |R/R'| bounds that distance; the noise floor covers
    // multiple roots where R' vanishes with R.
    let (rm, drm, scale) = eval_r_with_deriv(spec, m, energy);
    let at_noise_floor = rm.norm() <= T::epsilon() * T::of(64.0) * scale;
    let correction = if drm.norm() == T::zero() { T::infinity() } else { (rm / drm).norm() };
    if !at_noise_floor && correction > T::of(1e-8) * T::one().max(energy.norm()) {
        return Err(Error::NotAnEigenvalue {
            re: energy.re.to_f64().unwrap_or(f64::NAN),
            im: energy.im.to_f64().unwrap_or(f64::NAN),
            residual: (correction / T::one().max(energy.norm()))
                .to_f64()
                .unwrap_or(f64::NAN),
        });
    }

    // t = s * z / (2 i zeta)  =>  c_n picks up (s / (2 i zeta))^n / n!
    let factor = imag(-spec.variant.sign::<T>() / (T::of(2.0) * spec.zeta));
    let rc = RecursionCoeffs::new(spec);
    let mut coeffs = Vec::with_capacity(m);
    let mut r_prev = Cplx::new(T::zero(), T::zero());
    let mut r = real(T::one());
    let mut weight = real(T::one()); // factor^n / n!
    for n in 0..m {
        coeffs.push(r * weight);
        let b = real(rc.b(n as u32));
        let a = real(rc.a(n as u32));
        let r_next = (energy - b) * r - a * r_prev;
        r_prev = r;
        r = r_next;
        weight = weight * factor / T::of_usize(n + 1);
    }
    crate::model::normalize_phi(&mut coeffs);
    Ok(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::default_tol_real;

    type C = Cplx<f64>;

    #[test]
    fn coefficient_values_match_hand_substitution() {
        let minus = PotentialSpec::minus(1.0f64, 2).unwrap();
        let rc = RecursionCoeffs::new(&minus);
        assert_eq!(rc.a(1), 4.0);
        assert_eq!(rc.b(0), 4.0);
        assert_eq!(rc.b(1), 4.0);

        let plus = PotentialSpec::plus(0.25f64, 3).unwrap();
        let rc = RecursionCoeffs::new(&plus);
        assert_eq!(rc.b(0), 4.9375);
        assert_eq!(rc.b(1), 8.9375);
        assert_eq!(rc.b(2), 4.9375);
        assert_eq!(rc.a(1), -0.5);
        assert_eq!(rc.a(2), -0.5);
    }

    #[test]
    fn a_vanishes_exactly_at_ends() {
        for &(variant, zeta, m) in &[
            (Variant::Plus, 0.3f64, 5u32),
            (Variant::Minus, 2.0, 7),
            (Variant::Plus, 5.0, 1),
        ] {
            let spec = PotentialSpec::new(variant, zeta, m).unwrap();
            let rc = RecursionCoeffs::new(&spec);
            assert_eq!(rc.a(0), 0.0);
            assert_eq!(rc.a(m), 0.0);
        }
    }
    use crate::model::Variant;

    #[test]
    fn r2_expands_as_hand_computation() {
        // minus, zeta=1, M=2: R_2 = (E-4)^2 - 4 = E^2 - 8E + 12
        let spec = PotentialSpec::minus(1.0f64, 2).unwrap();
        let polys = build_r(&spec, 2);
        let r2 = &polys[2];
        assert_eq!(r2.degree(), 2);
        assert!((r2.coeffs[0] - C::new(12.0, 0.0)).norm() < 1e-13);
        assert!((r2.coeffs[1] - C::new(-8.0, 0.0)).norm() < 1e-13);
        assert!((r2.coeffs[2] - C::new(1.0, 0.0)).norm() == 0.0);
    }

    #[test]
    fn r1_is_shifted_identity() {
        // R_1 = E - b_0, b_0 = 2M - 1 - s zeta^2
        let spec = PotentialSpec::plus(1.0f64, 1).unwrap();
        let polys = build_r(&spec, 1);
        assert!((polys[1].coeffs[0] - C::new(0.0, 0.0)).norm() < 1e-15); // b_0 = 0
        // and the root E = 0 reproduces E = 1 - zeta^2 at zeta = 1
        let s = qes_energies_recursion(&spec, default_tol_real()).unwrap();
        assert!((s.levels[0].energy - C::new(0.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn m3_minus_energies() {
        // {5 + z^2, 7 + z^2 ± 2 sqrt(1 + 4 z^2)} at zeta = 1
        let spec = PotentialSpec::minus(1.0f64, 3).unwrap();
        let s = qes_energies_recursion(&spec, default_tol_real()).unwrap();
        let expected = [8.0 - 2.0 * 5.0f64.sqrt(), 6.0, 8.0 + 2.0 * 5.0f64.sqrt()];
        for (lvl, want) in s.levels.iter().zip(expected) {
            assert!((lvl.energy - C::new(want, 0.0)).norm() < 1e-10, "{} vs {want}", lvl.energy);
        }
        assert!(s.all_real());
    }

    #[test]
    fn m2_plus_conjugate_pair() {
        let spec = PotentialSpec::plus(1.0f64, 2).unwrap();
        let s = qes_energies_recursion(&spec, default_tol_real()).unwrap();
        assert!((s.levels[0].energy - C::new(2.0, -2.0)).norm() < 1e-10);
        assert!((s.levels[1].energy - C::new(2.0, 2.0)).norm() < 1e-10);
        assert_eq!(s.levels[0].pair_id, Some(1));
    }

    #[test]
    fn zeta_zero_diagonal_multiset() {
        let spec = PotentialSpec::minus(0.0f64, 3).unwrap();
        let s = qes_energies_recursion(&spec, default_tol_real()).unwrap();
        let es: Vec<f64> = s.levels.iter().map(|l| l.energy.re).collect();
        assert_eq!(es, vec![5.0, 5.0, 9.0]);
    }

    #[test]
    fn factorization_identity_small_cases() {
        let spec = PotentialSpec::minus(1.0f64, 2).unwrap();
        assert!(factorization_check(&spec, 3) < 1e-10);
        let spec = PotentialSpec::plus(2.0f64, 4).unwrap();
        assert!(factorization_check(&spec, 2) < 1e-10);
        // M=1: R_2 = R_1 * Rbar_1 exactly
        let spec = PotentialSpec::minus(0.5f64, 1).unwrap();
        assert!(factorization_check(&spec, 1) < 1e-15);
    }

    #[test]
    fn phi_from_r_matches_wavefunction_shape() {
        // minus, zeta=1, M=2, E=6: phi ∝ 1 + i z (from psi ∝ e^{-x} + i e^{x})
        let spec = PotentialSpec::minus(1.0f64, 2).unwrap();
        let phi = phi_from_r(&spec, C::new(6.0, 0.0)).unwrap();
        assert!((phi[1] - C::new(1.0, 0.0)).norm() < 1e-12);
        assert!((phi[0] - C::new(0.0, -1.0)).norm() < 1e-12); // 1/(i) = -i after normalization
    }

    #[test]
    fn phi_from_r_rejects_non_eigenvalues() {
        let spec = PotentialSpec::minus(1.0f64, 2).unwrap();
        match phi_from_r(&spec, C::new(5.0, 0.0)) {
            Err(Error::NotAnEigenvalue { .. }) => {}
            other => panic!("expected NotAnEigenvalue, got {other:?}"),
        }
        let spec0 = PotentialSpec::minus(0.0f64, 2).unwrap();
        assert_eq!(phi_from_r(&spec0, C::new(3.0, 0.0)), Err(Error::ZetaZero));
    }

    #[test]
    fn monic_and_degree_across_orders() {
        let spec = PotentialSpec::plus(2.5f64, 6).unwrap();
        for (n, p) in build_r(&spec, 9).iter().enumerate() {
            assert_eq!(p.degree(), n);
            assert_eq!(p.leading(), C::new(1.0, 0.0));
            for c in &p.coeffs {
                assert_eq!(c.im, 0.0, "coefficients stay exactly real");
            }
        }
    }
}
