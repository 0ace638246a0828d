//! The `threshold` command: bisection on the "spectrum entirely real"
//! indicator over the coupling, locating the PT-breaking value zeta_c.

use qes_core::gauge::{build_operator, eigen_spectrum};
use qes_core::model::{PotentialSpec, Variant};

use crate::emit::{Cell, Meta, Table};
use crate::CliError;

/// Smallest coupling probed; a spectrum already complex there reports
/// zeta_c = 0 (broken for every nonzero coupling, as for even M).
pub const SMALLEST_PROBE: f64 = 1e-6;

/// Final bracket width the bisection refines to.
pub const BRACKET_TARGET: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct ThresholdResult {
    pub variant: Variant,
    pub m: u32,
    pub zeta_c: Option<f64>,
    pub bracket_width: f64,
    pub tol_real: f64,
    pub note: Option<String>,
}

impl ThresholdResult {
    pub fn table(&self) -> Table {
        let mut t = Table::new(vec!["m", "variant", "zeta_c", "bracket_width"]);
        t.push(vec![
            Cell::Int(i64::from(self.m)),
            Cell::Str(self.variant.tag().to_string()),
            match self.zeta_c {
                Some(z) => Cell::Float(z),
                None => Cell::Str("none".to_string()),
            },
            Cell::Float(self.bracket_width),
        ]);
        t
    }

    pub fn meta(&self) -> Meta {
        Meta::new()
            .str("variant", self.variant.tag())
            .int("m", i64::from(self.m))
            .float("tol_real", self.tol_real)
            .str("tool_version", env!("CARGO_PKG_VERSION"))
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("# threshold variant={} m={}\n", self.variant.tag(), self.m);
        match self.zeta_c {
            Some(z) => out.push_str(&format!(
                "zeta_c = {z:.12e} (bracket width {:.3e})\n",
                self.bracket_width
            )),
            None => out.push_str("zeta_c = none\n"),
        }
        if let Some(note) = &self.note {
            out.push_str(&format!("note: {note}\n"));
        }
        out
    }
}

fn fully_real(variant: Variant, m: u32, zeta: f64, tol_real: f64) -> Result<bool, CliError> {
    let spec = PotentialSpec::new(variant, zeta, m)?;
    let s = eigen_spectrum(&build_operator(&spec), &spec, tol_real)?;
    Ok(s.all_real())
}

pub fn find_threshold(
    variant: Variant,
    m: u32,
    zeta_hi: f64,
    tol_real: f64,
) -> Result<ThresholdResult, CliError> {
    if !(zeta_hi.is_finite() && zeta_hi > SMALLEST_PROBE) {
        return Err(CliError::Usage("zeta-hi must exceed the smallest probe 1e-6".into()));
    }
    if variant == Variant::Minus {
        return Ok(ThresholdResult {
            variant,
            m,
            zeta_c: None,
            bracket_width: 0.0,
            tol_real,
            note: Some(
                "the sinh-form potential is conjectured threshold-free: its spectrum \
                 stays real for every coupling (certified by the real symmetrization)"
                    .to_string(),
            ),
        });
    }

    if !fully_real(variant, m, SMALLEST_PROBE, tol_real)? {
        return Ok(ThresholdResult {
            variant,
            m,
            zeta_c: Some(0.0),
            bracket_width: SMALLEST_PROBE,
            tol_real,
            note: Some("spectrum is complex at the smallest probe".to_string()),
        });
    }
    if fully_real(variant, m, zeta_hi, tol_real)? {
        return Ok(ThresholdResult {
            variant,
            m,
            zeta_c: None,
            bracket_width: 0.0,
            tol_real,
            note: Some(format!("spectrum still entirely real at zeta = {zeta_hi}")),
        });
    }

    let mut lo = SMALLEST_PROBE;
    let mut hi = zeta_hi;
    while hi - lo > BRACKET_TARGET {
        let mid = 0.5 * (lo + hi);
        if fully_real(variant, m, mid, tol_real)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(ThresholdResult {
        variant,
        m,
        zeta_c: Some(0.5 * (lo + hi)),
        bracket_width: hi - lo,
        tol_real,
        note: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::TOL_REAL;

    #[test]
    fn m3_threshold_is_one_half() {
        let r = find_threshold(Variant::Plus, 3, 10.0, TOL_REAL).unwrap();
        let zc = r.zeta_c.unwrap();
        assert!((zc - 0.5).abs() < 1e-8, "zeta_c = {zc}");
        assert!(r.bracket_width <= BRACKET_TARGET);
        // bracket postcondition: real just below, complex just above
        assert!(fully_real(Variant::Plus, 3, zc - r.bracket_width, TOL_REAL).unwrap());
        assert!(!fully_real(Variant::Plus, 3, zc + r.bracket_width, TOL_REAL).unwrap());
    }

    #[test]
    fn even_m_breaks_immediately() {
        for m in [2u32, 4] {
            let r = find_threshold(Variant::Plus, m, 10.0, TOL_REAL).unwrap();
            assert_eq!(r.zeta_c, Some(0.0), "m={m}");
        }
    }

    #[test]
    fn minus_variant_reports_none_with_note() {
        let r = find_threshold(Variant::Minus, 7, 10.0, TOL_REAL).unwrap();
        assert!(r.zeta_c.is_none());
        assert!(r.note.unwrap().contains("threshold-free"));
    }

    #[test]
    fn m1_never_breaks() {
        let r = find_threshold(Variant::Plus, 1, 10.0, TOL_REAL).unwrap();
        assert!(r.zeta_c.is_none());
    }
}
