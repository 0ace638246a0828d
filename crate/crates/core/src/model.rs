//! Domain types shared by every solution route: the potential family,
//! spectra, level classification, and the antilinear symmetry checks.
//!
//! The two potentials are
//!
//! ```text
//! V(x) = -(zeta*cosh(2x) - iM)^2      ("plus"  variant, Khare-Mandal)
//! V(x) = -(zeta*sinh(2x) - iM)^2      ("minus" variant, PT-symmetric partner)
//! ```
//!
//! with real coupling `zeta` and positive integer `M`. The minus variant is
//! invariant under PT (x -> -x, i -> -i); the plus variant is invariant under
//! the complex shift x -> i*pi/2 - x combined with time reversal.

use std::cmp::Ordering;
use std::fmt;

use crate::error::Error;
use crate::scalar::{imag, real, Cplx, Real};

/// Which of the two potential families, i.e. which branch of every `±`/`∓`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// cosh form (the original Khare-Mandal potential).
    Plus,
    /// sinh form (the PT-symmetric partner).
    Minus,
}

impl Variant {
    /// The upper/lower sign as a scalar: `+1` for `Plus`, `-1` for `Minus`.
    ///
    /// Every formula below writes `±x` as `s*x` and `∓x` as `-s*x`.
    pub fn sign<T: Real>(self) -> T {
        match self {
            Variant::Plus => T::one(),
            Variant::Minus => -T::one(),
        }
    }

    /// The antilinear symmetry this variant actually possesses.
    pub fn canonical_transform(self) -> SymmetryTransform {
        match self {
            Variant::Plus => SymmetryTransform::ShiftTime,
            Variant::Minus => SymmetryTransform::ParityTime,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Variant::Plus => "plus",
            Variant::Minus => "minus",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Full problem definition: variant, real coupling `zeta`, integer `M >= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialSpec<T> {
    pub variant: Variant,
    pub zeta: T,
    pub m: u32,
}

impl<T: Real> PotentialSpec<T> {
    pub fn new(variant: Variant, zeta: T, m: u32) -> Result<Self, Error> {
        if m < 1 {
            return Err(Error::InvalidSpec("M must be a positive integer"));
        }
        if !zeta.is_finite() {
            return Err(Error::InvalidSpec("zeta must be finite"));
        }
        Ok(Self { variant, zeta, m })
    }

    pub fn plus(zeta: T, m: u32) -> Result<Self, Error> {
        Self::new(Variant::Plus, zeta, m)
    }

    pub fn minus(zeta: T, m: u32) -> Result<Self, Error> {
        Self::new(Variant::Minus, zeta, m)
    }

    /// Matrix dimension of the invariant polynomial subspace.
    pub fn dim(&self) -> usize {
        self.m as usize
    }

    /// `M` as a scalar.
    pub fn m_scalar(&self) -> T {
        T::of_usize(self.m as usize)
    }

    /// The hyperbolic profile of this variant: `cosh(2x)` or `sinh(2x)`.
    pub fn hyper(&self, x: Cplx<T>) -> Cplx<T> {
        let two_x = x * T::of(2.0);
        match self.variant {
            Variant::Plus => two_x.cosh(),
            Variant::Minus => two_x.sinh(),
        }
    }

    /// Potential value from an already-computed hyperbolic profile.
    fn potential_from_hyper(&self, h: Cplx<T>) -> Cplx<T> {
        let w = h * self.zeta - imag(self.m_scalar());
        -(w * w)
    }
}

/// Evaluates `V(x) = -(zeta*h(2x) - iM)^2` with `h = cosh` (plus) or `sinh` (minus).
pub fn eval_potential<T: Real>(spec: &PotentialSpec<T>, x: Cplx<T>) -> Cplx<T> {
    spec.potential_from_hyper(spec.hyper(x))
}

/// The two antilinear operations of interest.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymmetryTransform {
    /// Parity plus time reversal: x -> -x, i -> -i.
    ParityTime,
    /// Complex shift plus time reversal: x -> i*pi/2 - x, i -> -i.
    ShiftTime,
}

/// Max deviation `|conj(V(transform(conj(x)))) - V(x)|` over the samples.
///
/// Conjugating the argument before the point map and the value afterwards is
/// the antilinear action on analytic functions; for real samples it reduces
/// to `conj(V(-x))` vs `V(x)` (ParityTime).
///
/// The shift `x -> i*pi/2 - x` is applied through the exact identities
/// `cosh(2(i*pi/2 - x)) = -cosh(2x)` and `sinh(2(i*pi/2 - x)) = sinh(2x)`,
/// so no floating-point `pi` enters and matched pairs sit at rounding level.
pub fn symmetry_deviation<T: Real>(
    spec: &PotentialSpec<T>,
    transform: SymmetryTransform,
    samples: &[Cplx<T>],
) -> T {
    let mut worst = T::zero();
    for &x in samples {
        let direct = eval_potential(spec, x);
        let h = match transform {
            SymmetryTransform::ParityTime => spec.hyper(-x.conj()),
            SymmetryTransform::ShiftTime => match spec.variant {
                Variant::Plus => -spec.hyper(x.conj()),
                Variant::Minus => spec.hyper(x.conj()),
            },
        };
        let image = spec.potential_from_hyper(h).conj();
        worst = worst.max((image - direct).norm());
    }
    worst
}

/// Deviation from the variant's own antilinear symmetry (should be ~0).
pub fn check_symmetry<T: Real>(spec: &PotentialSpec<T>, samples: &[Cplx<T>]) -> T {
    symmetry_deviation(spec, spec.variant.canonical_transform(), samples)
}

/// Reality classification of one level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reality {
    Real,
    Complex,
}

impl Reality {
    pub fn tag(self) -> &'static str {
        match self {
            Reality::Real => "real",
            Reality::Complex => "complex",
        }
    }
}

/// Which route produced a spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ClosedForm,
    Matrix,
    Recursion,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::ClosedForm => "closed_form",
            Method::Matrix => "matrix",
            Method::Recursion => "recursion",
        }
    }
}

/// Default relative tolerance for calling an eigenvalue real.
pub const TOL_REAL: f64 = 1e-9;

/// Relative eigenvalue gap below which two levels are treated as degenerate.
pub const DEGENERACY_GAP: f64 = 1e-7;

/// `TOL_REAL` in the working precision.
pub fn default_tol_real<T: Real>() -> T {
    T::of(TOL_REAL)
}

/// One QES eigenvalue with its polynomial coefficient vector.
#[derive(Debug, Clone, PartialEq)]
pub struct QesLevel<T> {
    /// The energy E.
    pub energy: Cplx<T>,
    /// Coefficients c_0..c_{M-1} of phi(z), highest nonzero scaled to 1.
    pub phi_coeffs: Vec<Cplx<T>>,
    pub reality: Reality,
    /// Index of the complex-conjugate partner level, when one exists.
    pub pair_id: Option<usize>,
    /// True when the energy sits within `DEGENERACY_GAP` of another level
    /// (at an exceptional point the eigenvectors genuinely coalesce).
    pub degenerate: bool,
}

impl<T: Real> QesLevel<T> {
    pub fn is_real(&self) -> bool {
        self.reality == Reality::Real
    }
}

/// Classify one energy at the given relative tolerance.
pub fn classify_reality<T: Real>(energy: Cplx<T>, tol_real: T) -> Reality {
    if energy.im.abs() <= tol_real * T::one().max(energy.norm()) {
        Reality::Real
    } else {
        Reality::Complex
    }
}

/// Scale a coefficient vector so its highest non-negligible entry is 1.
pub fn normalize_phi<T: Real>(coeffs: &mut [Cplx<T>]) {
    let scale = coeffs
        .iter()
        .map(|c| c.norm())
        .fold(T::zero(), |a, b| a.max(b));
    if scale == T::zero() {
        return;
    }
    let cutoff = scale * T::of(1e-12);
    if let Some(top) = coeffs.iter().rposition(|c| c.norm() > cutoff) {
        let lead = coeffs[top];
        for c in coeffs.iter_mut() {
            *c /= lead;
        }
    }
}

fn energy_order<T: Real>(a: &Cplx<T>, b: &Cplx<T>) -> Ordering {
    a.re.partial_cmp(&b.re)
        .unwrap_or(Ordering::Equal)
        .then(a.im.partial_cmp(&b.im).unwrap_or(Ordering::Equal))
}

/// One flag per energy: true when another level sits within `DEGENERACY_GAP`
/// (relative). At an exceptional point the flagged levels' eigenvectors
/// genuinely coalesce into a single Jordan-like direction.
pub fn degenerate_flags<T: Real>(energies: &[Cplx<T>]) -> Vec<bool> {
    let n = energies.len();
    let gap = T::of(DEGENERACY_GAP);
    let mut flags = vec![false; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let scale = T::one().max(energies[i].norm());
            if (energies[i] - energies[j]).norm() <= gap * scale {
                flags[i] = true;
                flags[j] = true;
            }
        }
    }
    flags
}

/// A full QES spectrum: exactly `m` levels, sorted by (Re E, Im E) ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum<T> {
    pub spec: PotentialSpec<T>,
    pub levels: Vec<QesLevel<T>>,
    pub method: Method,
}

impl<T: Real> Spectrum<T> {
    /// Assemble a spectrum from raw (energy, phi) pairs: sorts, classifies
    /// reality at `tol_real`, and links conjugate partners.
    pub fn assemble(
        spec: PotentialSpec<T>,
        method: Method,
        pairs: Vec<(Cplx<T>, Vec<Cplx<T>>, bool)>,
        tol_real: T,
    ) -> Self {
        let mut pairs = pairs;
        pairs.sort_by(|a, b| energy_order(&a.0, &b.0));
        let mut levels: Vec<QesLevel<T>> = pairs
            .into_iter()
            .map(|(energy, mut phi, degenerate)| {
                normalize_phi(&mut phi);
                QesLevel {
                    energy,
                    phi_coeffs: phi,
                    reality: classify_reality(energy, tol_real),
                    pair_id: None,
                    degenerate,
                }
            })
            .collect();
        link_conjugate_pairs(&mut levels);
        Spectrum { spec, levels, method }
    }

    pub fn energies(&self) -> Vec<Cplx<T>> {
        self.levels.iter().map(|l| l.energy).collect()
    }

    /// Largest |Im E| over the spectrum.
    pub fn max_abs_imag(&self) -> T {
        self.levels
            .iter()
            .map(|l| l.energy.im.abs())
            .fold(T::zero(), |a, b| a.max(b))
    }

    /// Largest |Im E| / max(1, |E|) over the spectrum.
    pub fn max_rel_imag(&self) -> T {
        self.levels
            .iter()
            .map(|l| l.energy.im.abs() / T::one().max(l.energy.norm()))
            .fold(T::zero(), |a, b| a.max(b))
    }

    pub fn all_real(&self) -> bool {
        self.levels.iter().all(|l| l.is_real())
    }

    /// Re-run reality classification and pairing at a different tolerance.
    pub fn reclassify(&mut self, tol_real: T) {
        for l in self.levels.iter_mut() {
            l.reality = classify_reality(l.energy, tol_real);
            l.pair_id = None;
        }
        link_conjugate_pairs(&mut self.levels);
    }
}

fn link_conjugate_pairs<T: Real>(levels: &mut [QesLevel<T>]) {
    let tol = T::of(1e-6);
    let n = levels.len();
    for i in 0..n {
        if levels[i].reality == Reality::Real || levels[i].pair_id.is_some() {
            continue;
        }
        let target = levels[i].energy.conj();
        let mut best: Option<(usize, T)> = None;
        for (j, level) in levels.iter().enumerate() {
            if j == i || level.reality == Reality::Real || level.pair_id.is_some() {
                continue;
            }
            let d = (level.energy - target).norm();
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some((j, d));
            }
        }
        if let Some((j, d)) = best {
            if d <= tol * T::one().max(levels[i].energy.norm()) {
                levels[i].pair_id = Some(j);
                levels[j].pair_id = Some(i);
            }
        }
    }
}

/// Greedy closest-pair distance between two eigenvalue multisets.
///
/// Returns infinity when the lengths differ; otherwise the largest matched
/// distance after repeatedly pairing the globally closest remaining entries.
pub fn multiset_deviation<T: Real>(a: &[Cplx<T>], b: &[Cplx<T>]) -> T {
    if a.len() != b.len() {
        return T::infinity();
    }
    let n = a.len();
    let mut used_a = vec![false; n];
    let mut used_b = vec![false; n];
    let mut worst = T::zero();
    for _ in 0..n {
        let mut best: Option<(usize, usize, T)> = None;
        for i in 0..n {
            if used_a[i] {
                continue;
            }
            for j in 0..n {
                if used_b[j] {
                    continue;
                }
                let d = (a[i] - b[j]).norm();
                if best.is_none_or(|(_, _, bd)| d < bd) {
                    best = Some((i, j, d));
                }
            }
        }
        let (i, j, d) = best.expect("nonempty");
        used_a[i] = true;
        used_b[j] = true;
        worst = worst.max(d);
    }
    worst
}

/// Uniform real sample grid, inclusive of both endpoints.
pub fn uniform_samples<T: Real>(n: usize, lo: T, hi: T) -> Vec<Cplx<T>> {
    assert!(n >= 2);
    (0..n)
        .map(|k| {
            let t = T::of_usize(k) / T::of_usize(n - 1);
            real(lo + (hi - lo) * t)
        })
        .collect()
}
