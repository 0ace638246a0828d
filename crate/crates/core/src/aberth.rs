//! Aberth-Ehrlich simultaneous root finding for complex-coefficient
//! polynomials. Used by the recursion route to solve R_M(E) = 0; callers
//! polish the results with Newton steps on a stabler evaluation.

use crate::error::Error;
use crate::scalar::{cplx, Cplx, Real};

/// Value and derivative by Horner's scheme. Coefficients ascending in degree.
pub fn horner_with_deriv<T: Real>(coeffs: &[Cplx<T>], z: Cplx<T>) -> (Cplx<T>, Cplx<T>) {
    let mut p = Cplx::new(T::zero(), T::zero());
    let mut dp = Cplx::new(T::zero(), T::zero());
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Root-radius bound used for the starting circle: the smaller of the Cauchy
/// bound `1 + max|c_k/c_n|` and the Fujiwara bound
/// `2 max_k |c_{n-k}/c_n|^(1/k)`. The Cauchy bound alone blows up with the
/// huge low-order coefficients of high-degree monic characteristic
/// polynomials and would stall the iteration far from the roots.
fn starting_radius<T: Real>(coeffs: &[Cplx<T>]) -> T {
    let n = coeffs.len() - 1;
    let lead = coeffs[n].norm();
    let mut cauchy = T::zero();
    let mut fujiwara = T::zero();
    for k in 1..=n {
        let ratio = coeffs[n - k].norm() / lead;
        cauchy = cauchy.max(ratio);
        let ratio = if k == n { ratio * T::of(0.5) } else { ratio };
        fujiwara = fujiwara.max(ratio.powf(T::one() / T::of_usize(k)));
    }
    (T::one() + cauchy).min(T::of(2.0) * fujiwara).max(T::of(0.5))
}

/// All roots of the polynomial with the given ascending coefficients.
///
/// Stops when every correction has stagnated at rounding level; returns the
/// current root set even then (callers verify accuracy after polishing).
/// Errors only when the iteration produces non-finite values or the leading
/// coefficient vanishes.
pub fn polynomial_roots<T: Real>(
    coeffs: &[Cplx<T>],
    max_iter: usize,
) -> Result<Vec<Cplx<T>>, Error> {
    let n = coeffs.len().saturating_sub(1);
    if coeffs.is_empty() || coeffs[n].norm() == T::zero() {
        return Err(Error::DomainError("leading coefficient must be nonzero"));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(vec![-coeffs[0] / coeffs[1]]);
    }

    let radius = starting_radius(coeffs);
    let tau = T::of(2.0) * T::PI();
    let offset = T::of(0.37);
    let mut roots: Vec<Cplx<T>> = (0..n)
        .map(|k| {
            let angle = tau * T::of_usize(k) / T::of_usize(n) + offset;
            cplx(radius * angle.cos(), radius * angle.sin())
        })
        .collect();

    let stop = T::epsilon() * T::of(4.0);
    for _ in 0..max_iter {
        let mut max_rel_step = T::zero();
        for k in 0..n {
            let z = roots[k];
            let (p, dp) = horner_with_deriv(coeffs, z);
            if p.norm() == T::zero() {
                continue;
            }
            let newton = if dp.norm() == T::zero() {
                // derivative vanished away from a root: nudge off the point
                cplx(T::of(1e-6) * (T::one() + z.norm()), T::of(1e-6))
            } else {
                p / dp
            };
            let mut repulsion = Cplx::new(T::zero(), T::zero());
            for (j, &other) in roots.iter().enumerate() {
                if j == k {
                    continue;
                }
                let d = z - other;
                if d.norm() == T::zero() {
                    continue;
                }
                repulsion += Cplx::new(T::one(), T::zero()) / d;
            }
            let denom = Cplx::new(T::one(), T::zero()) - newton * repulsion;
            let step = if denom.norm() == T::zero() { newton } else { newton / denom };
            roots[k] = z - step;
            if !roots[k].re.is_finite() || !roots[k].im.is_finite() {
                return Err(Error::NonConvergence {
                    iterations: max_iter,
                    residual: f64::INFINITY,
                });
            }
            max_rel_step = max_rel_step.max(step.norm() / (T::one() + roots[k].norm()));
        }
        if max_rel_step <= stop {
            break;
        }
    }
    Ok(roots)
}
