//! The `sweep` command: spectra on a uniform coupling grid with
//! nearest-continuation level tracking, so each emitted column follows one
//! eigenvalue branch and conjugate pairs do not swap columns mid-sweep.

use qes_core::gauge::{build_operator, eigen_spectrum};
use qes_core::model::{classify_reality, PotentialSpec, Reality, Variant};
use qes_core::recursion::qes_energies_recursion;
use qes_core::C64;

use crate::emit::{Cell, Meta, Table};
use crate::spectrum::MethodChoice;
use crate::{ordered_map, CliError};

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub variant: Variant,
    pub m: u32,
    pub method: MethodChoice,
    pub tol_real: f64,
    pub zeta_grid: Vec<f64>,
    /// tracks[level][grid_index]: one continuous eigenvalue branch per level.
    pub tracks: Vec<Vec<C64>>,
    /// Largest |Im E| at each grid point.
    pub max_imag: Vec<f64>,
}

impl SweepResult {
    pub fn table(&self) -> Table {
        let mut t = Table::new(vec!["zeta", "level_index", "re_E", "im_E", "reality"]);
        for (g, &zeta) in self.zeta_grid.iter().enumerate() {
            for (lvl, track) in self.tracks.iter().enumerate() {
                let e = track[g];
                let reality = classify_reality(e, self.tol_real) == Reality::Real;
                t.push(vec![
                    Cell::Float(zeta),
                    Cell::Int(lvl as i64),
                    Cell::Float(e.re),
                    Cell::Float(e.im),
                    Cell::Str(if reality { "real" } else { "complex" }.to_string()),
                ]);
            }
        }
        t
    }

    pub fn meta(&self) -> Meta {
        Meta::new()
            .str("variant", self.variant.tag())
            .int("m", i64::from(self.m))
            .str("method", self.method.tag())
            .float("tol_real", self.tol_real)
            .float("zeta_min", *self.zeta_grid.first().unwrap())
            .float("zeta_max", *self.zeta_grid.last().unwrap())
            .int("steps", self.zeta_grid.len() as i64)
            .str("tool_version", env!("CARGO_PKG_VERSION"))
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "# sweep variant={} m={} method={} points={}\n",
            self.variant.tag(),
            self.m,
            self.method.tag(),
            self.zeta_grid.len()
        );
        for (g, &zeta) in self.zeta_grid.iter().enumerate() {
            out.push_str(&format!("zeta {zeta:+.6}  max|Im| {:.3e}\n", self.max_imag[g]));
        }
        out
    }
}

/// Greedy globally-closest matching of new energies onto existing tracks.
fn continue_tracks(last: &[C64], fresh: &[C64]) -> Vec<usize> {
    let n = last.len();
    let mut assignment = vec![usize::MAX; n];
    let mut used_fresh = vec![false; n];
    let mut taken = vec![false; n];
    for _ in 0..n {
        let mut best: Option<(usize, usize, f64)> = None;
        for (t, &e_last) in last.iter().enumerate() {
            if taken[t] {
                continue;
            }
            for (f, &e_new) in fresh.iter().enumerate() {
                if used_fresh[f] {
                    continue;
                }
                let d = (e_last - e_new).norm();
                if best.is_none_or(|(_, _, bd)| d < bd) {
                    best = Some((t, f, d));
                }
            }
        }
        let (t, f, _) = best.expect("square matching");
        assignment[t] = f;
        taken[t] = true;
        used_fresh[f] = true;
    }
    assignment
}

#[allow(clippy::too_many_arguments)]
pub fn run_sweep(
    variant: Variant,
    m: u32,
    zeta_min: f64,
    zeta_max: f64,
    steps: usize,
    method: MethodChoice,
    tol_real: f64,
    threads: usize,
) -> Result<SweepResult, CliError> {
    if steps < 2 {
        return Err(CliError::Usage("sweep needs at least 2 steps".into()));
    }
    if !(zeta_min.is_finite() && zeta_max.is_finite() && zeta_min < zeta_max) {
        return Err(CliError::Usage("need finite zeta-min < zeta-max".into()));
    }
    if matches!(method, MethodChoice::Closed | MethodChoice::All) && m > 4 {
        return Err(CliError::Usage("closed-form sweep covers M = 1..=4 only".into()));
    }
    let zeta_grid: Vec<f64> = (0..steps)
        .map(|k| zeta_min + (zeta_max - zeta_min) * k as f64 / (steps - 1) as f64)
        .collect();

    let spectra: Vec<Result<Vec<C64>, CliError>> =
        ordered_map(zeta_grid.clone(), threads, |zeta| {
            let spec = PotentialSpec::new(variant, zeta, m).map_err(CliError::from)?;
            let s = match method {
                MethodChoice::Recursion => qes_energies_recursion(&spec, tol_real)?,
                MethodChoice::Closed => {
                    qes_core::closed_form::closed_form_energies(&spec, tol_real)?
                }
                _ => eigen_spectrum(&build_operator(&spec), &spec, tol_real)?,
            };
            Ok(s.energies())
        });
    let mut per_point = Vec::with_capacity(steps);
    for s in spectra {
        per_point.push(s?);
    }

    let dim = m as usize;
    let mut tracks: Vec<Vec<C64>> = (0..dim).map(|lvl| vec![per_point[0][lvl]]).collect();
    for fresh in per_point.iter().skip(1) {
        let last: Vec<C64> = tracks.iter().map(|t| *t.last().unwrap()).collect();
        let assignment = continue_tracks(&last, fresh);
        for (t, &f) in assignment.iter().enumerate() {
            tracks[t].push(fresh[f]);
        }
    }
    let max_imag = (0..steps)
        .map(|g| tracks.iter().map(|t| t[g].im.abs()).fold(0.0, f64::max))
        .collect();

    Ok(SweepResult { variant, m, method, tol_real, zeta_grid, tracks, max_imag })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::TOL_REAL;

    #[test]
    fn plus_m3_crosses_the_critical_coupling() {
        let s = run_sweep(Variant::Plus, 3, 0.0, 1.0, 101, MethodChoice::Matrix, TOL_REAL, 1)
            .unwrap();
        for (g, &zeta) in s.zeta_grid.iter().enumerate() {
            if zeta <= 0.5 {
                assert!(s.max_imag[g] < 1e-9, "zeta={zeta}: {:e}", s.max_imag[g]);
            } else {
                assert!(s.max_imag[g] > 1e-3, "zeta={zeta}: {:e}", s.max_imag[g]);
            }
        }
    }

    #[test]
    fn tracked_branches_are_continuous() {
        let s = run_sweep(Variant::Plus, 4, 0.1, 2.0, 96, MethodChoice::Matrix, TOL_REAL, 1)
            .unwrap();
        // conjugate partners must not swap columns: each track's imaginary
        // part keeps one sign on this range
        for track in &s.tracks {
            let signs: Vec<bool> = track.iter().map(|e| e.im > 0.0).collect();
            assert!(
                signs.iter().all(|&b| b == signs[0]),
                "track changed half-plane mid-sweep"
            );
        }
    }

    #[test]
    fn rejects_degenerate_grids() {
        assert!(matches!(
            run_sweep(Variant::Minus, 2, 0.0, 1.0, 1, MethodChoice::Matrix, TOL_REAL, 1),
            Err(CliError::Usage(_))
        ));
    }
}
