//! Exact spectra and wavefunction shapes for M = 1..=4, both variants — the
//! regression oracle for the matrix and recursion routes.
//!
//! Energies:
//!
//! ```text
//! M=1:        E = 1 - s zeta^2
//! M=2 plus:   E = 3 - zeta^2 ± 2 i zeta          (conjugate pair)
//!     minus:  E = 3 + zeta^2 ± 2 zeta            (real)
//! M=3 plus:   E0 = 5 - zeta^2,  E± = 7 - zeta^2 ± 2 sqrt(1 - 4 zeta^2)
//!     minus:  E0 = 5 + zeta^2,  E± = 7 + zeta^2 ± 2 sqrt(1 + 4 zeta^2)
//! M=4 minus:  E = 11 - 2 sg zeta + zeta^2 + 4 tau sqrt(1 - sg zeta + zeta^2)
//! M=4 plus:   E = eps + 15 - zeta^2 with (eps + 8)(eps ± 4 i zeta) + 12 zeta^2 = 0
//! ```
//!
//! (s = +1 plus / -1 minus; sg, tau range over ±1.) Square roots take the
//! principal branch; the ± always spans both conjugates, so the multiset is
//! branch-independent.

use crate::error::Error;
use crate::model::{degenerate_flags, Method, PotentialSpec, Spectrum, Variant};
use crate::recursion::RecursionCoeffs;
use crate::scalar::{cplx, imag, real, Cplx, Real};

fn csqrt_of_real<T: Real>(v: T) -> Cplx<T> {
    if v >= T::zero() {
        real(v.sqrt())
    } else {
        imag((-v).sqrt())
    }
}

/// The exact energies in formula order (unsorted).
fn energies_raw<T: Real>(spec: &PotentialSpec<T>) -> Result<Vec<Cplx<T>>, Error> {
    let z = spec.zeta;
    let z2 = z * z;
    let s = spec.variant.sign::<T>();
    match spec.m {
        1 => Ok(vec![real(T::one() - s * z2)]),
        2 => {
            let base = real(T::of(3.0) - s * z2);
            let split = match spec.variant {
                Variant::Plus => imag(T::of(2.0) * z),
                Variant::Minus => real(T::of(2.0) * z),
            };
            Ok(vec![base + split, base - split])
        }
        3 => {
            let e0 = real(T::of(5.0) - s * z2);
            let base = real(T::of(7.0) - s * z2);
            let root = csqrt_of_real(T::one() - s * T::of(4.0) * z2) * T::of(2.0);
            Ok(vec![e0, base + root, base - root])
        }
        4 => match spec.variant {
            Variant::Minus => {
                let mut out = Vec::with_capacity(4);
                for sg in [T::one(), -T::one()] {
                    let radicand = T::one() - sg * z + z2;
                    let root = T::of(4.0) * radicand.sqrt();
                    let base = T::of(11.0) - T::of(2.0) * sg * z + z2;
                    out.push(real(base + root));
                    out.push(real(base - root));
                }
                Ok(out)
            }
            Variant::Plus => {
                // eps^2 + (8 + 4 i sg zeta) eps + 32 i sg zeta + 12 zeta^2 = 0,
                // solved for both sg, then E = eps + 15 - zeta^2.
                let mut out = Vec::with_capacity(4);
                for sg in [T::one(), -T::one()] {
                    let b = cplx(T::of(8.0), T::of(4.0) * sg * z);
                    let c = cplx(T::of(12.0) * z2, T::of(32.0) * sg * z);
                    let disc = (b * b - c * T::of(4.0)).sqrt();
                    let shift = real(T::of(15.0) - z2);
                    out.push((-b + disc) * T::of(0.5) + shift);
                    out.push((-b - disc) * T::of(0.5) + shift);
                }
                Ok(out)
            }
        },
        m => Err(Error::UnsupportedM(m)),
    }
}

/// phi coefficients from the two-term elimination chain of the finite linear
/// system (top coefficient 1, each lower one from the row above).
fn phi_chain<T: Real>(spec: &PotentialSpec<T>, energy: Cplx<T>) -> Vec<Cplx<T>> {
    let z = spec.zeta;
    let s = spec.variant.sign::<T>();
    let two_i_zeta = imag(T::of(2.0) * z);
    let one = real(T::one());
    match spec.m {
        1 => vec![one],
        2 => {
            let eps = energy - real(T::of(3.0) - s * z * z);
            vec![eps / two_i_zeta, one]
        }
        3 => {
            let eps = energy - real(T::of(9.0) - s * z * z);
            let c2 = one;
            let c1 = (eps + real(T::of(4.0))) / two_i_zeta;
            let c0 = (eps * c1 - two_i_zeta * T::of(2.0) * s * c2) / (two_i_zeta * T::of(2.0));
            vec![c0, c1, c2]
        }
        4 => {
            let eps = energy - real(T::of(15.0) - s * z * z);
            let c3 = one;
            let c2 = (eps + real(T::of(8.0))) / two_i_zeta;
            let c1 = (eps * c2 - two_i_zeta * T::of(3.0) * s * c3) / (two_i_zeta * T::of(2.0));
            let c0 = (eps * c1 - two_i_zeta * T::of(2.0) * s * c2) / (two_i_zeta * T::of(3.0));
            vec![c0, c1, c2, c3]
        }
        _ => unreachable!("guarded by energies_raw"),
    }
}

/// zeta = 0 fallback: match each exact energy to a diagonal entry b_k and
/// use the corresponding basis vector.
fn phi_basis_matched<T: Real>(
    spec: &PotentialSpec<T>,
    energies: &[Cplx<T>],
) -> Vec<Vec<Cplx<T>>> {
    let rc = RecursionCoeffs::new(spec);
    let m = spec.dim();
    let b: Vec<T> = (0..m).map(|n| rc.b(n as u32)).collect();
    let mut used = vec![false; m];
    energies
        .iter()
        .map(|&e| {
            let mut best = usize::MAX;
            let mut best_d = T::infinity();
            for (k, &bk) in b.iter().enumerate() {
                if used[k] {
                    continue;
                }
                let d = (e - real(bk)).norm();
                if d < best_d {
                    best_d = d;
                    best = k;
                }
            }
            used[best] = true;
            let mut phi = vec![Cplx::new(T::zero(), T::zero()); m];
            phi[best] = real(T::one());
            phi
        })
        .collect()
}

/// Exact spectrum for M = 1..=4; method tag: closed_form.
pub fn closed_form_energies<T: Real>(
    spec: &PotentialSpec<T>,
    tol_real: T,
) -> Result<Spectrum<T>, Error> {
    let energies = energies_raw(spec)?;
    let degenerate = degenerate_flags(&energies);
    let phis: Vec<Vec<Cplx<T>>> = if spec.zeta == T::zero() {
        phi_basis_matched(spec, &energies)
    } else {
        energies.iter().map(|&e| phi_chain(spec, e)).collect()
    };
    let pairs = energies
        .into_iter()
        .zip(phis)
        .zip(degenerate)
        .map(|((e, phi), d)| (e, phi, d))
        .collect();
    Ok(Spectrum::assemble(*spec, Method::ClosedForm, pairs, tol_real))
}

/// One closed-form wavefunction: energy, a human-readable descriptor, and an
/// evaluator for the unnormalized psi(x).
pub struct PsiClosedForm<T> {
    pub energy: Cplx<T>,
    pub descriptor: String,
    eval: Box<dyn Fn(Cplx<T>) -> Cplx<T> + Send + Sync>,
}

impl<T: Real> PsiClosedForm<T> {
    pub fn eval(&self, x: Cplx<T>) -> Cplx<T> {
        (self.eval)(x)
    }
}

fn gauge_exp<T: Real>(variant: Variant, zeta: T, x: Cplx<T>) -> Cplx<T> {
    let two_x = x * T::of(2.0);
    let h = match variant {
        Variant::Plus => two_x.cosh(),
        Variant::Minus => two_x.sinh(),
    };
    (h * imag(zeta * T::of(0.5))).exp()
}

/// The published closed-form shape of level `level_index` (indices follow the
/// sorted order of `closed_form_energies`). Shapes containing 1/zeta raise
/// `ZetaZero`; (plus, M=4) has no published shape and raises `NoClosedFormPsi`.
pub fn closed_form_psi<T: Real>(
    spec: &PotentialSpec<T>,
    level_index: usize,
) -> Result<PsiClosedForm<T>, Error> {
    if spec.m > 4 {
        return Err(Error::UnsupportedM(spec.m));
    }
    let variant = spec.variant;
    let zeta = spec.zeta;
    let z2 = zeta * zeta;
    let s = variant.sign::<T>();

    // (energy, descriptor, x-space factor multiplying the gauge exponential)
    type Shape<T> = (Cplx<T>, String, Box<dyn Fn(Cplx<T>) -> Cplx<T> + Send + Sync>);
    let mut shapes: Vec<Shape<T>> = Vec::new();
    let gauge_name = match variant {
        Variant::Plus => "exp(i*zeta/2 * cosh 2x)",
        Variant::Minus => "exp(i*zeta/2 * sinh 2x)",
    };

    match (spec.m, variant) {
        (1, _) => {
            shapes.push((
                real(T::one() - s * z2),
                gauge_name.to_string(),
                Box::new(|_x| real(T::one())),
            ));
        }
        (2, Variant::Plus) => {
            for sg in [T::one(), -T::one()] {
                let e = real(T::of(3.0) - z2) + imag(T::of(2.0) * zeta * sg);
                let tag = if sg > T::zero() { "+" } else { "-" };
                shapes.push((
                    e,
                    format!("{gauge_name} * (exp(-x) {tag} exp(x))"),
                    Box::new(move |x: Cplx<T>| (-x).exp() + x.exp() * sg),
                ));
            }
        }
        (2, Variant::Minus) => {
            for sg in [T::one(), -T::one()] {
                let e = real(T::of(3.0) + z2 + T::of(2.0) * zeta * sg);
                let tag = if sg > T::zero() { "+" } else { "-" };
                shapes.push((
                    e,
                    format!("{gauge_name} * (exp(-x) {tag} i*exp(x))"),
                    Box::new(move |x: Cplx<T>| (-x).exp() + x.exp() * imag(sg)),
                ));
            }
        }
        (3, v) => {
            // the node-counting level keeps the odd/even profile opposite to
            // the pair levels: sinh/cosh for plus, cosh/sinh for minus
            let sinh2 = (|x: Cplx<T>| (x * T::of(2.0)).sinh()) as fn(Cplx<T>) -> Cplx<T>;
            let cosh2 = (|x: Cplx<T>| (x * T::of(2.0)).cosh()) as fn(Cplx<T>) -> Cplx<T>;
            let (e0, hyper0, name0, hyper_pm, name_pm, disc_sign) = match v {
                Variant::Plus => (real(T::of(5.0) - z2), sinh2, "sinh 2x", cosh2, "cosh 2x", "-"),
                Variant::Minus => (real(T::of(5.0) + z2), cosh2, "cosh 2x", sinh2, "sinh 2x", "+"),
            };
            shapes.push((e0, format!("{gauge_name} * {name0}"), Box::new(hyper0)));
            let root = csqrt_of_real(T::one() - s * T::of(4.0) * z2);
            for sg in [T::one(), -T::one()] {
                let e = real(T::of(7.0) - s * z2) + root * (T::of(2.0) * sg);
                if zeta == T::zero() {
                    // shape carries 1/zeta; reported only if this level is selected
                    shapes.push((e, String::new(), Box::new(|_x| real(T::nan()))));
                    continue;
                }
                let offset = (real(T::one()) + root * sg) * imag(-T::one() / zeta);
                let tag = if sg > T::zero() { "+" } else { "-" };
                shapes.push((
                    e,
                    format!(
                        "{gauge_name} * (2*{name_pm} - i/zeta * (1 {tag} sqrt(1 {disc_sign} 4 zeta^2)))"
                    ),
                    Box::new(move |x: Cplx<T>| hyper_pm(x) * T::of(2.0) + offset),
                ));
            }
        }
        (4, Variant::Minus) => {
            if zeta == T::zero() {
                return Err(Error::ZetaZero);
            }
            for sg in [T::one(), -T::one()] {
                let radicand = T::one() - sg * zeta + z2;
                let rt = radicand.sqrt();
                for tau in [T::one(), -T::one()] {
                    let e = real(T::of(11.0) - T::of(2.0) * sg * zeta + z2 + T::of(4.0) * tau * rt);
                    let offset = imag(-(T::one() + tau * rt) / zeta);
                    let sgc = sg;
                    let stag = if sg > T::zero() { "-" } else { "+" };
                    let ttag = if tau > T::zero() { "+" } else { "-" };
                    let rtag = if sg > T::zero() { "-" } else { "+" };
                    shapes.push((
                        e,
                        format!(
                            "{gauge_name} * (exp(-x) {stag} i*exp(x)) * (sinh 2x - i/zeta * (1 {ttag} sqrt(1 {rtag} zeta + zeta^2)))"
                        ),
                        Box::new(move |x: Cplx<T>| {
                            let first = (-x).exp() - x.exp() * imag(sgc);
                            let second = (x * T::of(2.0)).sinh() + offset;
                            first * second
                        }),
                    ));
                }
            }
        }
        (4, Variant::Plus) => return Err(Error::NoClosedFormPsi),
        _ => unreachable!(),
    }

    shapes.sort_by(|a, b| {
        a.0.re
            .partial_cmp(&b.0.re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.0.im.partial_cmp(&b.0.im).unwrap_or(std::cmp::Ordering::Equal))
    });
    if level_index >= shapes.len() {
        return Err(Error::LevelOutOfRange { index: level_index, len: shapes.len() });
    }
    let (energy, descriptor, factor) = shapes.swap_remove(level_index);
    if descriptor.is_empty() {
        return Err(Error::ZetaZero);
    }
    let variant_c = variant;
    let zeta_c = zeta;
    Ok(PsiClosedForm {
        energy,
        descriptor,
        eval: Box::new(move |x| gauge_exp(variant_c, zeta_c, x) * factor(x)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::default_tol_real;

    type C = Cplx<f64>;

    fn energies(spec: &PotentialSpec<f64>) -> Vec<C> {
        closed_form_energies(spec, default_tol_real()).unwrap().energies()
    }

    #[test]
    fn m1_energies() {
        let plus = PotentialSpec::plus(2.0f64, 1).unwrap();
        assert!((energies(&plus)[0] - C::new(-3.0, 0.0)).norm() < 1e-14);
        let minus = PotentialSpec::minus(2.0f64, 1).unwrap();
        assert!((energies(&minus)[0] - C::new(5.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn m2_energies() {
        let plus = PotentialSpec::plus(1.0f64, 2).unwrap();
        let es = energies(&plus);
        assert!((es[0] - C::new(2.0, -2.0)).norm() < 1e-14);
        assert!((es[1] - C::new(2.0, 2.0)).norm() < 1e-14);
        let minus = PotentialSpec::minus(1.0f64, 2).unwrap();
        let es = energies(&minus);
        assert!((es[0] - C::new(2.0, 0.0)).norm() < 1e-14);
        assert!((es[1] - C::new(6.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn m3_plus_below_and_above_threshold() {
        let below = PotentialSpec::plus(0.25f64, 3).unwrap();
        let es = energies(&below);
        let r = 0.75f64.sqrt();
        assert!((es[0] - C::new(4.9375, 0.0)).norm() < 1e-12);
        assert!((es[1] - C::new(6.9375 - 2.0 * r, 0.0)).norm() < 1e-12);
        assert!((es[2] - C::new(6.9375 + 2.0 * r, 0.0)).norm() < 1e-12);

        let above = PotentialSpec::plus(1.0f64, 3).unwrap();
        let s = closed_form_energies(&above, default_tol_real()).unwrap();
        assert!(!s.all_real());
        let sqrt3 = 3.0f64.sqrt();
        assert!((s.levels[1].energy - C::new(6.0, -2.0 * sqrt3)).norm() < 1e-12);
        assert!((s.levels[2].energy - C::new(6.0, 2.0 * sqrt3)).norm() < 1e-12);

        // exactly at the threshold the pair collides and stays real
        let at = PotentialSpec::plus(0.5f64, 3).unwrap();
        let s = closed_form_energies(&at, default_tol_real()).unwrap();
        assert!(s.all_real());
        assert!((s.levels[1].energy - s.levels[2].energy).norm() == 0.0);
        assert!(s.levels[1].degenerate);
    }

    #[test]
    fn m4_minus_at_unit_coupling() {
        let spec = PotentialSpec::minus(1.0f64, 4).unwrap();
        let es = energies(&spec);
        let sqrt3 = 3.0f64.sqrt();
        let mut expected = vec![6.0, 14.0, 14.0 - 4.0 * sqrt3, 14.0 + 4.0 * sqrt3];
        expected.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (e, w) in es.iter().zip(expected) {
            assert!((e - C::new(w, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn m4_plus_all_complex() {
        for zeta in [0.5f64, 1.0, 2.0] {
            let spec = PotentialSpec::plus(zeta, 4).unwrap();
            let s = closed_form_energies(&spec, default_tol_real()).unwrap();
            for lvl in &s.levels {
                assert!(!lvl.is_real(), "zeta={zeta}: {:?}", lvl.energy);
            }
            // trace is real: eigenvalues come in conjugate pairs
            let sum: C = s.energies().into_iter().sum();
            assert!(sum.im.abs() < 1e-10);
        }
    }

    #[test]
    fn unsupported_m_is_rejected() {
        let spec = PotentialSpec::plus(1.0f64, 5).unwrap();
        assert!(matches!(
            closed_form_energies(&spec, default_tol_real()),
            Err(Error::UnsupportedM(5))
        ));
    }

    #[test]
    fn psi_shapes_evaluate() {
        // minus M=1: |psi| = 1 on the real axis
        let spec = PotentialSpec::minus(1.7f64, 1).unwrap();
        let psi = closed_form_psi(&spec, 0).unwrap();
        for x in [-1.0f64, 0.3, 2.0] {
            assert!((psi.eval(C::new(x, 0.0)).norm() - 1.0).abs() < 1e-12);
        }

        // minus M=3 level with E0 = 5 + zeta^2 is gauge * cosh: value 1 at x=0
        let spec = PotentialSpec::minus(1.0f64, 3).unwrap();
        let s = closed_form_energies(&spec, default_tol_real()).unwrap();
        let idx = s
            .levels
            .iter()
            .position(|l| (l.energy - C::new(6.0, 0.0)).norm() < 1e-12)
            .unwrap();
        let psi = closed_form_psi(&spec, idx).unwrap();
        assert!((psi.eval(C::new(0.0, 0.0)) - C::new(1.0, 0.0)).norm() < 1e-12);

        // plus M=2: the lower level vanishes at x = 0
        let spec = PotentialSpec::plus(1.0f64, 2).unwrap();
        let minus_level = closed_form_psi(&spec, 0).unwrap();
        let plus_level = closed_form_psi(&spec, 1).unwrap();
        let at0: Vec<f64> = vec![
            minus_level.eval(C::new(0.0, 0.0)).norm(),
            plus_level.eval(C::new(0.0, 0.0)).norm(),
        ];
        assert!(at0.iter().cloned().fold(f64::INFINITY, f64::min) < 1e-14);
        assert!(at0.iter().cloned().fold(0.0, f64::max) > 1.0);
    }

    #[test]
    fn psi_error_paths() {
        let spec = PotentialSpec::plus(1.0f64, 4).unwrap();
        assert!(matches!(closed_form_psi(&spec, 0), Err(Error::NoClosedFormPsi)));
        let spec = PotentialSpec::minus(0.0f64, 4).unwrap();
        assert!(matches!(closed_form_psi(&spec, 0), Err(Error::ZetaZero)));
        let spec = PotentialSpec::minus(1.0f64, 3).unwrap();
        assert!(matches!(
            closed_form_psi(&spec, 7),
            Err(Error::LevelOutOfRange { .. })
        ));
    }
}
