//! Small dense linear algebra kernels: a complex matrix container, a
//! complex Hessenberg shifted-QR eigenvalue iteration, an implicit-QL
//! eigensolver for real symmetric tridiagonal matrices, and tridiagonal
//! inverse iteration for eigenvectors. Desk scale only (n <= ~100).

use crate::error::Error;
use crate::scalar::{real, Cplx, Real};

/// Row-major square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseC<T> {
    pub n: usize,
    data: Vec<Cplx<T>>,
}

impl<T: Real> DenseC<T> {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![Cplx::new(T::zero(), T::zero()); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, real(T::one()));
        }
        m
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> Cplx<T> {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Cplx<T>) {
        self.data[i * self.n + j] = v;
    }

    pub fn mul(&self, other: &DenseC<T>) -> DenseC<T> {
        let n = self.n;
        let mut out = DenseC::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.at(i, k);
                if a.norm() == T::zero() {
                    continue;
                }
                for j in 0..n {
                    let v = out.at(i, j) + a * other.at(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &DenseC<T>) -> DenseC<T> {
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a -= *b;
        }
        out
    }

    pub fn add(&self, other: &DenseC<T>) -> DenseC<T> {
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += *b;
        }
        out
    }

    pub fn scale(&self, factor: Cplx<T>) -> DenseC<T> {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= factor;
        }
        out
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().map(|c| c.norm()).fold(T::zero(), |a, b| a.max(b))
    }

    /// [A, B] = AB - BA.
    pub fn commutator(&self, other: &DenseC<T>) -> DenseC<T> {
        self.mul(other).sub(&other.mul(self))
    }
}

/// Givens rotation [[c, s], [-conj(s), c]] (c real) zeroing g against f.
fn givens<T: Real>(f: Cplx<T>, g: Cplx<T>) -> (T, Cplx<T>) {
    let fa = f.norm();
    let ga = g.norm();
    if ga == T::zero() {
        return (T::one(), Cplx::new(T::zero(), T::zero()));
    }
    if fa == T::zero() {
        return (T::zero(), real(T::one()));
    }
    let h = fa.hypot(ga);
    let c = fa / h;
    let s = (f / fa) * g.conj() / h;
    (c, s)
}

/// Eigenvalue of the 2x2 block closest to its bottom-right entry.
fn wilkinson_shift<T: Real>(a11: Cplx<T>, a12: Cplx<T>, a21: Cplx<T>, a22: Cplx<T>) -> Cplx<T> {
    let half = T::of(0.5);
    let delta = (a11 - a22) * half;
    let disc = (delta * delta + a12 * a21).sqrt();
    let den_plus = delta + disc;
    let den_minus = delta - disc;
    let den = if den_plus.norm() >= den_minus.norm() { den_plus } else { den_minus };
    if den.norm() == T::zero() {
        a22
    } else {
        a22 - (a12 * a21) / den
    }
}

fn qr_step<T: Real>(a: &mut DenseC<T>, lo: usize, hi: usize, shift: Cplx<T>) {
    for i in lo..hi {
        let v = a.at(i, i) - shift;
        a.set(i, i, v);
    }
    let mut rotations = Vec::with_capacity(hi - lo - 1);
    for k in lo..hi - 1 {
        let (c, s) = givens(a.at(k, k), a.at(k + 1, k));
        for col in k..hi {
            let x = a.at(k, col);
            let y = a.at(k + 1, col);
            a.set(k, col, x * c + s * y);
            a.set(k + 1, col, y * c - s.conj() * x);
        }
        a.set(k + 1, k, Cplx::new(T::zero(), T::zero()));
        rotations.push((c, s));
    }
    for (idx, (c, s)) in rotations.into_iter().enumerate() {
        let k = lo + idx;
        let top = (k + 2).min(hi);
        for row in lo..top {
            let x = a.at(row, k);
            let y = a.at(row, k + 1);
            a.set(row, k, x * c + s.conj() * y);
            a.set(row, k + 1, y * c - s * x);
        }
    }
    for i in lo..hi {
        let v = a.at(i, i) + shift;
        a.set(i, i, v);
    }
}

/// All eigenvalues of an upper-Hessenberg complex matrix by explicit
/// single-shift QR with deflation (the matrix is consumed).
pub fn hessenberg_eigenvalues<T: Real>(a: &mut DenseC<T>) -> Result<Vec<Cplx<T>>, Error> {
    let n = a.n;
    let mut eigs = vec![Cplx::new(T::zero(), T::zero()); n];
    let mut hi = n;
    let mut stuck = 0usize;
    let eps = T::epsilon();
    while hi > 0 {
        if hi == 1 {
            eigs[0] = a.at(0, 0);
            hi = 0;
            continue;
        }
        // deflation scan from the bottom of the active block
        let mut lo = hi - 1;
        while lo > 0 {
            let sub = a.at(lo, lo - 1).norm();
            let scale = a.at(lo - 1, lo - 1).norm() + a.at(lo, lo).norm();
            let cutoff = if scale == T::zero() { T::min_positive_value() } else { eps * scale };
            if sub <= cutoff {
                a.set(lo, lo - 1, Cplx::new(T::zero(), T::zero()));
                break;
            }
            lo -= 1;
        }
        if lo == hi - 1 {
            eigs[hi - 1] = a.at(hi - 1, hi - 1);
            hi -= 1;
            stuck = 0;
            continue;
        }
        stuck += 1;
        if stuck > 60 {
            return Err(Error::EigensolverFailure);
        }
        let shift = if stuck.is_multiple_of(12) {
            // exceptional shift to break limit cycles
            let bump = a.at(hi - 1, hi - 2).norm()
                + if hi >= 3 { a.at(hi - 2, hi - 3).norm() } else { T::zero() };
            a.at(hi - 1, hi - 1) + real(T::of(0.75) * bump)
        } else {
            wilkinson_shift(
                a.at(hi - 2, hi - 2),
                a.at(hi - 2, hi - 1),
                a.at(hi - 1, hi - 2),
                a.at(hi - 1, hi - 1),
            )
        };
        qr_step(a, lo, hi, shift);
    }
    Ok(eigs)
}

/// Eigen-decomposition of a real symmetric tridiagonal matrix by the
/// implicit-QL algorithm. Returns eigenvalues ascending and the matching
/// orthonormal eigenvectors (`vectors[k]` belongs to `values[k]`).
pub fn sym_tridiag_eigen<T: Real>(
    diag: &[T],
    off: &[T],
) -> Result<(Vec<T>, Vec<Vec<T>>), Error> {
    let n = diag.len();
    assert!(off.len() + 1 == n || (n == 1 && off.is_empty()));
    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.push(T::zero());
    // columns of z are the eigenvectors
    let mut z = vec![vec![T::zero(); n]; n];
    for (i, row) in z.iter_mut().enumerate() {
        row[i] = T::one();
    }
    let eps = T::epsilon();

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= eps * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 50 {
                return Err(Error::EigensolverFailure);
            }
            let mut g = (d[l + 1] - d[l]) / (T::of(2.0) * e[l]);
            let mut r = g.hypot(T::one());
            let sign_r = if g >= T::zero() { r.abs() } else { -r.abs() };
            g = d[m] - d[l] + e[l] / (g + sign_r);
            let mut s = T::one();
            let mut c = T::one();
            let mut p = T::zero();
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == T::zero() {
                    d[i + 1] -= p;
                    e[m] = T::zero();
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + T::of(2.0) * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for row in z.iter_mut() {
                    f = row[i + 1];
                    row[i + 1] = s * row[i] + c * f;
                    row[i] = c * row[i] - s * f;
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = T::zero();
        }
    }

    // sort ascending, permuting eigenvectors along
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).unwrap_or(std::cmp::Ordering::Equal));
    let values: Vec<T> = order.iter().map(|&i| d[i]).collect();
    let vectors: Vec<Vec<T>> = order
        .iter()
        .map(|&col| (0..n).map(|row| z[row][col]).collect())
        .collect();
    Ok((values, vectors))
}

/// One linear solve of `(A - lambda I) x = b` for a complex tridiagonal `A`
/// given by bands `below[k] = A[k+1][k]`, `diag[k]`, `above[k] = A[k][k+1]`,
/// using Gaussian elimination with partial pivoting. Exact zero pivots are
/// replaced by `eps * scale` so inverse iteration can proceed.
fn tridiag_solve_shifted<T: Real>(
    diag: &[Cplx<T>],
    above: &[Cplx<T>],
    below: &[Cplx<T>],
    lambda: Cplx<T>,
    b: &[Cplx<T>],
) -> Vec<Cplx<T>> {
    let n = diag.len();
    let zero = Cplx::new(T::zero(), T::zero());
    let dl: Vec<Cplx<T>> = below.to_vec();
    let mut dd: Vec<Cplx<T>> = diag.iter().map(|&v| v - lambda).collect();
    let mut du: Vec<Cplx<T>> = above.to_vec();
    let mut du2 = vec![zero; n.saturating_sub(2)];
    let mut x = b.to_vec();

    let scale = diag
        .iter()
        .chain(above.iter())
        .chain(below.iter())
        .map(|c| c.norm())
        .fold(T::one(), |a, v| a.max(v));
    let tiny = real(T::epsilon() * scale);

    for i in 0..n.saturating_sub(1) {
        if dd[i].norm() >= dl[i].norm() {
            if dd[i].norm() == T::zero() {
                dd[i] = tiny;
            }
            let fact = dl[i] / dd[i];
            dd[i + 1] -= fact * du[i];
            x[i + 1] = x[i + 1] - fact * x[i];
        } else {
            let fact = dd[i] / dl[i];
            dd[i] = dl[i];
            let temp = dd[i + 1];
            dd[i + 1] = du[i] - fact * temp;
            du[i] = temp;
            if i + 2 < n {
                du2[i] = du[i + 1];
                du[i + 1] = -fact * du[i + 1];
            }
            x.swap(i, i + 1);
            x[i + 1] = x[i + 1] - fact * x[i];
        }
    }
    if dd[n - 1].norm() == T::zero() {
        dd[n - 1] = tiny;
    }

    // back substitution
    x[n - 1] /= dd[n - 1];
    if n >= 2 {
        x[n - 2] = (x[n - 2] - du[n - 2] * x[n - 1]) / dd[n - 2];
    }
    for i in (0..n.saturating_sub(2)).rev() {
        x[i] = (x[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / dd[i];
    }
    x
}

/// Eigenvector of a complex tridiagonal matrix by inverse iteration at the
/// (already accurate) eigenvalue `lambda`. Deterministic start vector.
pub fn tridiag_eigenvector<T: Real>(
    diag: &[Cplx<T>],
    above: &[Cplx<T>],
    below: &[Cplx<T>],
    lambda: Cplx<T>,
) -> Vec<Cplx<T>> {
    let n = diag.len();
    let norm0 = T::one() / T::of_usize(n).sqrt();
    let mut v: Vec<Cplx<T>> = (0..n)
        .map(|k| real(norm0 * (T::one() + T::of(1e-3) * T::of_usize(k % 7))))
        .collect();
    for _ in 0..3 {
        let mut w = tridiag_solve_shifted(diag, above, below, lambda, &v);
        let nrm = w.iter().map(|c| c.norm_sqr()).fold(T::zero(), |a, b| a + b).sqrt();
        if nrm == T::zero() || !nrm.is_finite() {
            break;
        }
        for c in w.iter_mut() {
            *c /= nrm;
        }
        v = w;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = Cplx<f64>;

    #[test]
    fn ql_solves_known_symmetric_tridiagonal() {
        // [[4, 2], [2, 4]] has eigenvalues {2, 6}
        let (vals, vecs) = sym_tridiag_eigen(&[4.0f64, 4.0], &[2.0]).unwrap();
        assert!((vals[0] - 2.0).abs() < 1e-12);
        assert!((vals[1] - 6.0).abs() < 1e-12);
        // eigenvector of 2 is (1, -1)/sqrt(2)
        let v = &vecs[0];
        assert!((v[0] + v[1]).abs() < 1e-12);
    }

    #[test]
    fn ql_handles_larger_matrices() {
        // -Laplacian stencil: eigenvalues 2 - 2 cos(k pi / (n+1))
        let n = 12;
        let diag = vec![2.0f64; n];
        let off = vec![-1.0f64; n - 1];
        let (vals, vecs) = sym_tridiag_eigen(&diag, &off).unwrap();
        for (k, v) in vals.iter().enumerate() {
            let expect = 2.0 - 2.0 * (std::f64::consts::PI * (k + 1) as f64 / (n as f64 + 1.0)).cos();
            assert!((v - expect).abs() < 1e-10, "{v} vs {expect}");
        }
        // residual check on one eigenpair
        let k = 5;
        let v = &vecs[k];
        for i in 0..n {
            let mut acc = diag[i] * v[i];
            if i > 0 {
                acc += off[i - 1] * v[i - 1];
            }
            if i + 1 < n {
                acc += off[i] * v[i + 1];
            }
            assert!((acc - vals[k] * v[i]).abs() < 1e-10);
        }
    }

    #[test]
    fn qr_finds_complex_eigenvalues_of_tridiagonal() {
        // [[4, -2i], [2i, 4]] is Hermitian: eigenvalues {2, 6}
        let mut a = DenseC::zeros(2);
        a.set(0, 0, C::new(4.0, 0.0));
        a.set(0, 1, C::new(0.0, -2.0));
        a.set(1, 0, C::new(0.0, 2.0));
        a.set(1, 1, C::new(4.0, 0.0));
        let mut eigs = hessenberg_eigenvalues(&mut a).unwrap();
        eigs.sort_by(|x, y| x.re.partial_cmp(&y.re).unwrap());
        assert!((eigs[0] - C::new(2.0, 0.0)).norm() < 1e-12);
        assert!((eigs[1] - C::new(6.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn qr_reproduces_known_nonnormal_spectrum() {
        // companion-style Hessenberg matrix of
        // p(x) = (x - 1)(x - 2i)(x + 3) = x^3 + (2 - 2i) x^2 + (-3 - 4i) x + 6i
        let c0 = C::new(0.0, 6.0);
        let c1 = C::new(-3.0, -4.0);
        let c2 = C::new(2.0, -2.0);
        let mut a = DenseC::zeros(3);
        a.set(0, 0, -c2);
        a.set(0, 1, -c1);
        a.set(0, 2, -c0);
        a.set(1, 0, C::new(1.0, 0.0));
        a.set(2, 1, C::new(1.0, 0.0));
        let eigs = hessenberg_eigenvalues(&mut a).unwrap();
        for target in [C::new(1.0, 0.0), C::new(0.0, 2.0), C::new(-3.0, 0.0)] {
            let best = eigs.iter().map(|e| (e - target).norm()).fold(f64::INFINITY, f64::min);
            assert!(best < 1e-10, "missing eigenvalue {target}");
        }
    }

    #[test]
    fn inverse_iteration_recovers_eigenvector() {
        // [[4, 2i], [-2i, 4]]: eigenvalue 6 has eigenvector (i, 1)/sqrt(2)
        let diag = [C::new(4.0, 0.0), C::new(4.0, 0.0)];
        let above = [C::new(0.0, 2.0)];
        let below = [C::new(0.0, -2.0)];
        let v = tridiag_eigenvector(&diag, &above, &below, C::new(6.0, 0.0));
        // check A v = 6 v
        let r0 = diag[0] * v[0] + above[0] * v[1] - C::new(6.0, 0.0) * v[0];
        let r1 = below[0] * v[0] + diag[1] * v[1] - C::new(6.0, 0.0) * v[1];
        assert!(r0.norm() < 1e-10 && r1.norm() < 1e-10, "residuals {r0} {r1}");
    }
}
