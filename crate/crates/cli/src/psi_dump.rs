//! The `wavefunction` command: sample one level's psi(x) on a uniform grid
//! and emit x, re_psi, im_psi and the pointwise relative ODE residual.

use qes_core::model::PotentialSpec;
use qes_core::wavefunction::{GaugeWavefunction, ResidualMode};
use qes_core::C64;

use crate::emit::{Cell, Meta, Table};
use crate::spectrum::{compute_spectrum, MethodChoice};
use crate::CliError;

#[derive(Debug, Clone)]
pub struct PsiDump {
    pub spec: PotentialSpec<f64>,
    pub level: usize,
    pub energy: C64,
    pub method: MethodChoice,
    pub tol_real: f64,
    pub rows: Vec<(f64, C64, f64)>,
}

impl PsiDump {
    pub fn table(&self) -> Table {
        let mut t = Table::new(vec!["x", "re_psi", "im_psi", "residual"]);
        for &(x, psi, residual) in &self.rows {
            t.push(vec![
                Cell::Float(x),
                Cell::Float(psi.re),
                Cell::Float(psi.im),
                Cell::Float(residual),
            ]);
        }
        t
    }

    pub fn meta(&self) -> Meta {
        Meta::new()
            .str("variant", self.spec.variant.tag())
            .float("zeta", self.spec.zeta)
            .int("m", i64::from(self.spec.m))
            .int("level", self.level as i64)
            .float("re_E", self.energy.re)
            .float("im_E", self.energy.im)
            .str("method", self.method.tag())
            .float("tol_real", self.tol_real)
            .str("tool_version", env!("CARGO_PKG_VERSION"))
    }
}

#[allow(clippy::too_many_arguments)]
pub fn dump_wavefunction(
    spec: &PotentialSpec<f64>,
    level: usize,
    method: MethodChoice,
    x_min: f64,
    x_max: f64,
    points: usize,
    tol_real: f64,
) -> Result<PsiDump, CliError> {
    if points < 2 {
        return Err(CliError::Usage("need at least 2 sample points".into()));
    }
    if !(x_min.is_finite() && x_max.is_finite() && x_min < x_max) {
        return Err(CliError::Usage("need finite x-min < x-max".into()));
    }
    if matches!(method, MethodChoice::All) {
        return Err(CliError::Usage(
            "wavefunction dump needs one method (closed, matrix or recursion)".into(),
        ));
    }
    let report = compute_spectrum(spec, method, tol_real)?;
    let spectrum = &report.spectra[0];
    let lvl = spectrum
        .levels
        .get(level)
        .ok_or(qes_core::Error::LevelOutOfRange { index: level, len: spectrum.levels.len() })?;
    let wf = GaugeWavefunction::from_level(spec, lvl);
    let rows = (0..points)
        .map(|k| {
            let x = x_min + (x_max - x_min) * k as f64 / (points - 1) as f64;
            let psi = wf.eval_psi(C64::new(x, 0.0));
            let (r, scale) = wf.residual_at(x, ResidualMode::Analytic);
            (x, psi, r / scale.max(f64::MIN_POSITIVE))
        })
        .collect();
    Ok(PsiDump {
        spec: *spec,
        level,
        energy: lvl.energy,
        method,
        tol_real,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use qes_core::model::Variant;
    use crate::TOL_REAL;

    #[test]
    fn dump_has_small_residuals_for_exact_levels() {
        let spec = PotentialSpec::new(Variant::Minus, 1.0, 3).unwrap();
        let d = dump_wavefunction(&spec, 0, MethodChoice::Matrix, -3.0, 3.0, 41, TOL_REAL)
            .unwrap();
        assert_eq!(d.rows.len(), 41);
        for (x, _, r) in &d.rows {
            assert!(*r < 1e-8, "x={x}: residual {r:e}");
        }
    }

    #[test]
    fn level_index_is_validated() {
        let spec = PotentialSpec::new(Variant::Minus, 1.0, 2).unwrap();
        assert!(matches!(
            dump_wavefunction(&spec, 5, MethodChoice::Matrix, -1.0, 1.0, 5, TOL_REAL),
            Err(CliError::Numerical(qes_core::Error::LevelOutOfRange { .. }))
        ));
    }
}
