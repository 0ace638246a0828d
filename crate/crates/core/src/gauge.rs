//! The gauged Hamiltonian H_g as an M x M tridiagonal operator on the
//! monomial basis {1, z, ..., z^{M-1}}, its spectrum, and the sl(2,R)
//! representation that certifies the invariant subspace.
//!
//! Acting on z^n, H_g produces
//!
//! ```text
//! (z^{n+1} term)  2 i zeta (M - 1 - n)          -> raising[n] = A[n+1][n]
//! (z^n     term)  4 n (M - 1 - n) + 2M - 1 - s zeta^2 = b_n -> diag[n]
//! (z^{n-1} term)  s * 2 i zeta n                -> lowering[n-1] = A[n-1][n]
//! ```
//!
//! Column n of the matrix is the image of z^n. The raising coefficient dies
//! at n = M - 1, which is exactly the statement that the M-dimensional
//! polynomial subspace is invariant.

use crate::error::Error;
use crate::linalg::{self, DenseC};
use crate::model::{degenerate_flags, Method, PotentialSpec, Spectrum, Variant};
use crate::recursion::{diagonal_spectrum, EnergyPolynomial, RecursionCoeffs};
use crate::refine::{polish_simultaneous, ThreeTermPoly};
use crate::scalar::{imag, real, Cplx, Real};

/// Banded form of the gauged Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalOperator<T> {
    /// Matrix dimension M.
    pub dim: usize,
    /// diag[n] = b_n (real for both variants).
    pub diag: Vec<T>,
    /// raising[n] = A[n+1][n] = 2 i zeta (M - 1 - n), n = 0..M-2.
    pub raising: Vec<Cplx<T>>,
    /// lowering[n] = A[n][n+1] = s * 2 i zeta (n + 1), n = 0..M-2.
    pub lowering: Vec<Cplx<T>>,
}

impl<T: Real> TridiagonalOperator<T> {
    /// Product of opposite off-diagonal entries across gap n:
    /// raising[n] * lowering[n] = a_{n+1} of the three-term recursion.
    pub fn band_product(&self, n: usize) -> Cplx<T> {
        self.raising[n] * self.lowering[n]
    }

    pub fn trace(&self) -> T {
        self.diag.iter().fold(T::zero(), |a, &b| a + b)
    }

    pub fn to_dense(&self) -> DenseC<T> {
        let mut m = DenseC::zeros(self.dim);
        for n in 0..self.dim {
            m.set(n, n, real(self.diag[n]));
        }
        for n in 0..self.dim.saturating_sub(1) {
            m.set(n + 1, n, self.raising[n]);
            m.set(n, n + 1, self.lowering[n]);
        }
        m
    }

    /// y = A x.
    pub fn apply(&self, x: &[Cplx<T>]) -> Vec<Cplx<T>> {
        let n = self.dim;
        assert_eq!(x.len(), n);
        (0..n)
            .map(|i| {
                let mut acc = real(self.diag[i]) * x[i];
                if i > 0 {
                    acc += self.raising[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    acc += self.lowering[i] * x[i + 1];
                }
                acc
            })
            .collect()
    }

    /// Infinity norm of the bands (cheap matrix scale).
    pub fn norm_est(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.dim {
            let mut row = self.diag[i].abs();
            if i > 0 {
                row += self.raising[i - 1].norm();
            }
            if i + 1 < self.dim {
                row += self.lowering[i].norm();
            }
            worst = worst.max(row);
        }
        worst
    }

    /// max ||(A - E) v|| / (||A|| ||v||): how well v annihilates (A - E I).
    pub fn eigen_defect(&self, energy: Cplx<T>, v: &[Cplx<T>]) -> T {
        let av = self.apply(v);
        let mut worst = T::zero();
        let mut vnorm = T::zero();
        for (avi, &vi) in av.iter().zip(v) {
            worst = worst.max((*avi - energy * vi).norm());
            vnorm = vnorm.max(vi.norm());
        }
        worst / (self.norm_est().max(T::one()) * vnorm.max(T::of(1e-300)))
    }
}

/// Direct band construction from the action of H_g on z^n.
pub fn build_operator<T: Real>(spec: &PotentialSpec<T>) -> TridiagonalOperator<T> {
    let m = spec.dim();
    let rc = RecursionCoeffs::new(spec);
    let s = spec.variant.sign::<T>();
    let two_zeta = T::of(2.0) * spec.zeta;
    let diag = (0..m).map(|n| rc.b(n as u32)).collect();
    let raising = (0..m.saturating_sub(1))
        .map(|n| imag(two_zeta * T::of_usize(m - 1 - n)))
        .collect();
    let lowering = (0..m.saturating_sub(1))
        .map(|n| imag(s * two_zeta * T::of_usize(n + 1)))
        .collect();
    TridiagonalOperator { dim: m, diag, raising, lowering }
}

/// The sl(2,R) generators in the spin-j representation on monomials,
/// j = (M-1)/2: J+ z^n = (n-2j) z^{n+1}, J0 z^n = (n-j) z^n, J- z^n = n z^{n-1}.
#[derive(Debug, Clone)]
pub struct Sl2Generators<T> {
    pub m: u32,
    /// Spin j = (M-1)/2.
    pub j: T,
    pub jp: DenseC<T>,
    pub j0: DenseC<T>,
    pub jm: DenseC<T>,
}

impl<T: Real> Sl2Generators<T> {
    pub fn new(m: u32) -> Self {
        let dim = m as usize;
        let j = T::of_usize((m - 1) as usize) * T::of(0.5);
        let mut jp = DenseC::zeros(dim);
        let mut j0 = DenseC::zeros(dim);
        let mut jm = DenseC::zeros(dim);
        for n in 0..dim {
            let nf = T::of_usize(n);
            if n + 1 < dim {
                jp.set(n + 1, n, real(nf - T::of(2.0) * j));
            }
            j0.set(n, n, real(nf - j));
            if n > 0 {
                jm.set(n - 1, n, real(nf));
            }
        }
        Self { m, j, jp, j0, jm }
    }

    /// Worst max-abs defect among the algebra relations of this realization:
    /// [J0,J+] = J+, [J0,J-] = -J-, [J+,J-] = -2 J0
    /// (differential operators J+ = z^2 d/dz - 2jz, J0 = z d/dz - j, J- = d/dz).
    pub fn commutator_defect(&self) -> T {
        let one = real(T::one());
        let d1 = self.j0.commutator(&self.jp).sub(&self.jp).max_abs();
        let d2 = self.j0.commutator(&self.jm).add(&self.jm).max_abs();
        let d3 = self
            .jp
            .commutator(&self.jm)
            .add(&self.j0.scale(one + one))
            .max_abs();
        d1.max(d2).max(d3)
    }

    /// H_g = -4 J0^2 - 2 i zeta J+ + s 2 i zeta J- + (M^2 - s zeta^2) I.
    pub fn hamiltonian(&self, spec: &PotentialSpec<T>) -> DenseC<T> {
        assert_eq!(spec.m, self.m);
        let dim = self.m as usize;
        let s = spec.variant.sign::<T>();
        let two_i_zeta = imag(T::of(2.0) * spec.zeta);
        let msq = spec.m_scalar() * spec.m_scalar();
        let shift = real(msq - s * spec.zeta * spec.zeta);
        let mut h = self.j0.mul(&self.j0).scale(real(-T::of(4.0)));
        h = h.add(&self.jp.scale(-two_i_zeta));
        h = h.add(&self.jm.scale(two_i_zeta * s));
        h = h.add(&DenseC::identity(dim).scale(shift));
        h
    }
}

/// Assemble the operator through the sl(2,R) generators. Algebraically
/// identical to `build_operator`; the dense form is exposed through
/// `Sl2Generators::hamiltonian` for element-wise comparison.
pub fn build_from_sl2<T: Real>(spec: &PotentialSpec<T>) -> TridiagonalOperator<T> {
    let gens = Sl2Generators::new(spec.m);
    let h = gens.hamiltonian(spec);
    let m = spec.dim();
    let diag = (0..m).map(|n| h.at(n, n).re).collect();
    let raising = (0..m.saturating_sub(1)).map(|n| h.at(n + 1, n)).collect();
    let lowering = (0..m.saturating_sub(1)).map(|n| h.at(n, n + 1)).collect();
    TridiagonalOperator { dim: m, diag, raising, lowering }
}

/// Characteristic polynomial det(E I - A) by the tridiagonal determinant
/// recurrence p_{k+1} = (E - diag_k) p_k - raising_{k-1} lowering_{k-1} p_{k-1}.
/// Built purely from matrix entries so it cross-checks the recursion module.
pub fn char_poly<T: Real>(op: &TridiagonalOperator<T>) -> EnergyPolynomial<T> {
    let mut prev = EnergyPolynomial::zero();
    let mut cur = EnergyPolynomial::one();
    for k in 0..op.dim {
        let b = real(op.diag[k]);
        let a = if k == 0 {
            Cplx::new(T::zero(), T::zero())
        } else {
            op.band_product(k - 1)
        };
        let next = step_poly(&cur, &prev, b, a);
        prev = cur;
        cur = next;
    }
    cur
}

fn step_poly<T: Real>(
    cur: &EnergyPolynomial<T>,
    prev: &EnergyPolynomial<T>,
    b: Cplx<T>,
    a: Cplx<T>,
) -> EnergyPolynomial<T> {
    let n = cur.coeffs.len();
    let mut out = vec![Cplx::new(T::zero(), T::zero()); n + 1];
    for (k, &c) in cur.coeffs.iter().enumerate() {
        out[k + 1] += c;
        out[k] -= b * c;
    }
    for (k, &c) in prev.coeffs.iter().enumerate() {
        out[k] -= a * c;
    }
    EnergyPolynomial { coeffs: out }
}

/// Real symmetric tridiagonal matrix similar to a minus-variant operator.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricTridiagonal<T> {
    pub diag: Vec<T>,
    pub off: Vec<T>,
}

/// Diagonal similarity that turns a minus-variant operator into a real
/// symmetric tridiagonal matrix with off-diagonals sqrt(a_{n+1}) > 0 — the
/// constructive certificate that the minus spectrum is entirely real.
///
/// Errors with `VariantMismatch` when a band product is negative (the plus
/// variant: a_n < 0 admits no real symmetrization).
pub fn symmetrize_minus<T: Real>(
    op: &TridiagonalOperator<T>,
) -> Result<SymmetricTridiagonal<T>, Error> {
    let mut off = Vec::with_capacity(op.dim.saturating_sub(1));
    for n in 0..op.dim.saturating_sub(1) {
        let p = op.band_product(n);
        let scale = T::one().max(p.norm());
        if p.im.abs() > T::of(1e-12) * scale || p.re < -T::of(1e-12) * scale {
            return Err(Error::VariantMismatch { required: Variant::Minus });
        }
        off.push(p.re.max(T::zero()).sqrt());
    }
    Ok(SymmetricTridiagonal { diag: op.diag.clone(), off })
}

/// Spectrum of the symmetrized form (minus variant only): real eigenvalues by
/// construction, eigenvectors mapped back through the diagonal similarity.
pub fn eigen_spectrum_symmetrized<T: Real>(
    op: &TridiagonalOperator<T>,
    spec: &PotentialSpec<T>,
    tol_real: T,
) -> Result<Spectrum<T>, Error> {
    if spec.zeta == T::zero() {
        return Ok(diagonal_spectrum(spec, Method::Matrix, tol_real));
    }
    let sym = symmetrize_minus(op)?;
    let (values, vectors) = linalg::sym_tridiag_eigen(&sym.diag, &sym.off)?;

    // similarity D A D^{-1} = S with d_{n+1} = d_n * off_n / raising_n; the
    // operator eigenvector is phi = D^{-1} w.
    let m = op.dim;
    let mut d = vec![real(T::one()); m];
    for n in 0..m - 1 {
        d[n + 1] = d[n] * real(sym.off[n]) / op.raising[n];
    }
    let energies: Vec<Cplx<T>> = values.iter().map(|&v| real(v)).collect();
    let degenerate = degenerate_flags(&energies);
    let pairs = energies
        .into_iter()
        .zip(vectors)
        .zip(degenerate)
        .map(|((e, w), dg)| {
            let phi: Vec<Cplx<T>> = w.iter().zip(&d).map(|(&wi, &di)| real(wi) / di).collect();
            (e, phi, dg)
        })
        .collect();
    Ok(Spectrum::assemble(*spec, Method::Matrix, pairs, tol_real))
}

/// Spectrum through the general complex Hessenberg QR path, eigenvalues
/// refined against the tridiagonal determinant recurrence (built from the
/// matrix bands), eigenvectors by tridiagonal inverse iteration.
pub fn eigen_spectrum_complex_qr<T: Real>(
    op: &TridiagonalOperator<T>,
    spec: &PotentialSpec<T>,
    tol_real: T,
) -> Result<Spectrum<T>, Error> {
    if spec.zeta == T::zero() {
        return Ok(diagonal_spectrum(spec, Method::Matrix, tol_real));
    }
    let mut dense = op.to_dense();
    let mut eigs = linalg::hessenberg_eigenvalues(&mut dense)?;
    // band products are purely real (products of two imaginary entries)
    let chain = ThreeTermPoly {
        b: op.diag.clone(),
        a: std::iter::once(T::zero())
            .chain((0..op.dim.saturating_sub(1)).map(|n| op.band_product(n).re))
            .collect(),
    };
    polish_simultaneous(&chain, &mut eigs, 40);
    let degenerate = degenerate_flags(&eigs);
    let diag: Vec<Cplx<T>> = op.diag.iter().map(|&b| real(b)).collect();
    let pairs = eigs
        .into_iter()
        .zip(degenerate)
        .map(|(e, dg)| {
            let v = linalg::tridiag_eigenvector(&diag, &op.lowering, &op.raising, e);
            (e, v, dg)
        })
        .collect();
    Ok(Spectrum::assemble(*spec, Method::Matrix, pairs, tol_real))
}

/// Full eigen-decomposition of the gauged operator; method tag: matrix.
///
/// The minus variant goes through the real symmetric similarity (isospectral,
/// so reality is structural, not a numerical accident); the plus variant uses
/// the complex QR path; zeta = 0 is the exact diagonal case.
pub fn eigen_spectrum<T: Real>(
    op: &TridiagonalOperator<T>,
    spec: &PotentialSpec<T>,
    tol_real: T,
) -> Result<Spectrum<T>, Error> {
    match spec.variant {
        Variant::Minus => eigen_spectrum_symmetrized(op, spec, tol_real),
        Variant::Plus => eigen_spectrum_complex_qr(op, spec, tol_real),
    }
}
