//! The `spectrum` command: one (variant, zeta, M) by any or all routes,
//! with pairwise cross-route deviations.

use qes_core::closed_form::closed_form_energies;
use qes_core::gauge::{build_operator, eigen_spectrum};
use qes_core::model::{multiset_deviation, Method, PotentialSpec, Spectrum};
use qes_core::recursion::qes_energies_recursion;

use crate::emit::{Cell, Meta, Table};
use crate::CliError;

/// Route selection for the spectrum command.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodChoice {
    Closed,
    Matrix,
    Recursion,
    All,
}

impl MethodChoice {
    pub fn tag(self) -> &'static str {
        match self {
            MethodChoice::Closed => "closed",
            MethodChoice::Matrix => "matrix",
            MethodChoice::Recursion => "recursion",
            MethodChoice::All => "all",
        }
    }
}

/// Threshold above which cross-route disagreement is treated as a bug
/// (process exit code 2).
pub const DISAGREEMENT_LIMIT: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct SpectrumReport {
    pub spec: PotentialSpec<f64>,
    pub method: MethodChoice,
    pub tol_real: f64,
    pub spectra: Vec<Spectrum<f64>>,
    /// (route a, route b, multiset deviation) for every computed pair.
    pub deviations: Vec<(Method, Method, f64)>,
}

impl SpectrumReport {
    pub fn max_deviation(&self) -> f64 {
        self.deviations.iter().map(|d| d.2).fold(0.0, f64::max)
    }

    pub fn disagrees(&self) -> bool {
        self.max_deviation() > DISAGREEMENT_LIMIT
    }

    /// The spectrum whose levels the flat CSV rows report: the matrix route
    /// when present, otherwise the single requested route.
    pub fn canonical(&self) -> &Spectrum<f64> {
        self.spectra
            .iter()
            .find(|s| s.method == Method::Matrix)
            .unwrap_or(&self.spectra[0])
    }

    pub fn table(&self) -> Table {
        let mut t = Table::new(vec!["zeta", "level_index", "re_E", "im_E", "reality"]);
        for (idx, lvl) in self.canonical().levels.iter().enumerate() {
            t.push(vec![
                Cell::Float(self.spec.zeta),
                Cell::Int(idx as i64),
                Cell::Float(lvl.energy.re),
                Cell::Float(lvl.energy.im),
                Cell::Str(lvl.reality.tag().to_string()),
            ]);
        }
        t
    }

    pub fn meta(&self) -> Meta {
        Meta::new()
            .str("variant", self.spec.variant.tag())
            .float("zeta", self.spec.zeta)
            .int("m", i64::from(self.spec.m))
            .str("method", self.method.tag())
            .float("tol_real", self.tol_real)
            .float("max_route_deviation", self.max_deviation())
            .str("tool_version", env!("CARGO_PKG_VERSION"))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "# spectrum variant={} zeta={} m={} method={} tol_real={:e}\n",
            self.spec.variant.tag(),
            self.spec.zeta,
            self.spec.m,
            self.method.tag(),
            self.tol_real,
        ));
        for s in &self.spectra {
            out.push_str(&format!("method {}:\n", s.method.tag()));
            for (idx, lvl) in s.levels.iter().enumerate() {
                let pair = lvl
                    .pair_id
                    .map(|p| p.to_string())
                    .unwrap_or_else(|| "-".to_string());
                let flag = if lvl.degenerate { " degenerate" } else { "" };
                out.push_str(&format!(
                    "  {idx}  E = {:+.12e} {:+.12e}i  {}  pair {pair}{flag}\n",
                    lvl.energy.re,
                    lvl.energy.im,
                    lvl.reality.tag(),
                ));
            }
        }
        for (a, b, dev) in &self.deviations {
            out.push_str(&format!(
                "deviation {} vs {}: {:.3e}\n",
                a.tag(),
                b.tag(),
                dev
            ));
        }
        out
    }
}

pub fn compute_spectrum(
    spec: &PotentialSpec<f64>,
    method: MethodChoice,
    tol_real: f64,
) -> Result<SpectrumReport, CliError> {
    if matches!(method, MethodChoice::Closed) && spec.m > 4 {
        return Err(CliError::Usage(format!(
            "method=closed covers M = 1..=4, got M = {}",
            spec.m
        )));
    }
    let mut spectra = Vec::new();
    match method {
        MethodChoice::Closed => spectra.push(closed_form_energies(spec, tol_real)?),
        MethodChoice::Matrix => {
            spectra.push(eigen_spectrum(&build_operator(spec), spec, tol_real)?)
        }
        MethodChoice::Recursion => spectra.push(qes_energies_recursion(spec, tol_real)?),
        MethodChoice::All => {
            if spec.m <= 4 {
                spectra.push(closed_form_energies(spec, tol_real)?);
            }
            spectra.push(eigen_spectrum(&build_operator(spec), spec, tol_real)?);
            spectra.push(qes_energies_recursion(spec, tol_real)?);
        }
    }
    let mut deviations = Vec::new();
    for i in 0..spectra.len() {
        for j in (i + 1)..spectra.len() {
            deviations.push((
                spectra[i].method,
                spectra[j].method,
                multiset_deviation(&spectra[i].energies(), &spectra[j].energies()),
            ));
        }
    }
    Ok(SpectrumReport { spec: *spec, method, tol_real, spectra, deviations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use qes_core::model::Variant;

    #[test]
    fn all_routes_reported_with_deviations() {
        let spec = PotentialSpec::new(Variant::Minus, 1.0, 3).unwrap();
        let report = compute_spectrum(&spec, MethodChoice::All, TOL_REAL).unwrap();
        assert_eq!(report.spectra.len(), 3);
        assert_eq!(report.deviations.len(), 3);
        assert!(report.max_deviation() < 1e-9);
        assert!(!report.disagrees());
        let csv = report.table().to_csv();
        assert!(csv.starts_with("zeta,level_index,re_E,im_E,reality\n"));
        assert_eq!(csv.lines().count(), 4);
    }
    use crate::TOL_REAL;

    #[test]
    fn closed_route_rejects_large_m() {
        let spec = PotentialSpec::new(Variant::Minus, 1.0, 5).unwrap();
        assert!(matches!(
            compute_spectrum(&spec, MethodChoice::Closed, TOL_REAL),
            Err(CliError::Usage(_))
        ));
    }
}
