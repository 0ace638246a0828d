//! The `conjecture-scan` command: probes the claim that the sinh-form
//! (minus) potential keeps an entirely real QES spectrum for every M and
//! coupling, beyond the closed-form cases. Each point is solved by the plain
//! complex eigensolver, and the real-symmetrization certificate is compared
//! against it.

use qes_core::gauge::{
    build_operator, eigen_spectrum_complex_qr, eigen_spectrum_symmetrized,
};
use qes_core::model::{multiset_deviation, PotentialSpec, Variant};

use crate::emit::{Cell, Meta, Table};
use crate::{ordered_map, CliError};

#[derive(Debug, Clone)]
pub struct ConjectureRow {
    pub m: u32,
    pub zeta: f64,
    /// max |Im E| / max(1, |E|) from the direct (unstructured) eigensolve.
    pub max_rel_imag: f64,
    /// Multiset deviation between the symmetrized certificate and the direct
    /// eigensolve (minus variant only).
    pub certificate_dev: Option<f64>,
    pub all_real: bool,
}

#[derive(Debug, Clone)]
pub struct ConjectureReport {
    pub variant: Variant,
    pub m_max: u32,
    pub tol_real: f64,
    pub rows: Vec<ConjectureRow>,
    pub worst_rel_imag: f64,
    pub worst_certificate_dev: f64,
    /// "supports" / "violates" for the minus variant, "n/a" otherwise.
    pub verdict: &'static str,
}

impl ConjectureReport {
    pub fn table(&self) -> Table {
        let mut t = Table::new(vec!["m", "zeta", "max_rel_imag", "certificate_dev", "all_real"]);
        for row in &self.rows {
            t.push(vec![
                Cell::Int(i64::from(row.m)),
                Cell::Float(row.zeta),
                Cell::Float(row.max_rel_imag),
                match row.certificate_dev {
                    Some(d) => Cell::Float(d),
                    None => Cell::Str("n/a".to_string()),
                },
                Cell::Str(row.all_real.to_string()),
            ]);
        }
        t
    }

    pub fn meta(&self) -> Meta {
        Meta::new()
            .str("variant", self.variant.tag())
            .int("m_max", i64::from(self.m_max))
            .float("tol_real", self.tol_real)
            .float("worst_rel_imag", self.worst_rel_imag)
            .float("worst_certificate_dev", self.worst_certificate_dev)
            .str("verdict", self.verdict)
            .str("tool_version", env!("CARGO_PKG_VERSION"))
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "# conjecture-scan variant={} m_max={} tol_real={:e}\n",
            self.variant.tag(),
            self.m_max,
            self.tol_real
        );
        out.push_str("   m      zeta    max|Im|/max(1,|E|)   certificate_dev\n");
        for r in &self.rows {
            let cert = r
                .certificate_dev
                .map(|d| format!("{d:.3e}"))
                .unwrap_or_else(|| "n/a".to_string());
            out.push_str(&format!(
                "  {:2}  {:+8.3}          {:.3e}         {cert}\n",
                r.m, r.zeta, r.max_rel_imag
            ));
        }
        out.push_str(&format!(
            "worst max|Im|/max(1,|E|): {:.3e}\nworst certificate deviation: {:.3e}\nverdict: {}\n",
            self.worst_rel_imag, self.worst_certificate_dev, self.verdict
        ));
        out
    }
}

pub fn conjecture_scan(
    variant: Variant,
    m_max: u32,
    zeta_grid: &[f64],
    tol_real: f64,
    threads: usize,
) -> Result<ConjectureReport, CliError> {
    if m_max < 1 {
        return Err(CliError::Usage("m-max must be at least 1".into()));
    }
    if zeta_grid.is_empty() {
        return Err(CliError::Usage("zeta grid must be nonempty".into()));
    }
    let mut cases = Vec::new();
    for m in 1..=m_max {
        for &zeta in zeta_grid {
            cases.push((m, zeta));
        }
    }
    let rows: Vec<Result<ConjectureRow, CliError>> = ordered_map(cases, threads, |(m, zeta)| {
        let spec = PotentialSpec::new(variant, zeta, m)?;
        let op = build_operator(&spec);
        let direct = eigen_spectrum_complex_qr(&op, &spec, tol_real)?;
        let certificate_dev = if variant == Variant::Minus {
            let sym = eigen_spectrum_symmetrized(&op, &spec, tol_real)?;
            Some(multiset_deviation(&sym.energies(), &direct.energies()))
        } else {
            None
        };
        Ok(ConjectureRow {
            m,
            zeta,
            max_rel_imag: direct.max_rel_imag(),
            certificate_dev,
            all_real: direct.all_real(),
        })
    });
    let rows = rows.into_iter().collect::<Result<Vec<_>, _>>()?;

    let worst_rel_imag = rows.iter().map(|r| r.max_rel_imag).fold(0.0, f64::max);
    let worst_certificate_dev = rows
        .iter()
        .filter_map(|r| r.certificate_dev)
        .fold(0.0, f64::max);
    let verdict = if variant == Variant::Minus {
        if worst_rel_imag < tol_real {
            "supports"
        } else {
            "violates"
        }
    } else {
        "n/a"
    };
    Ok(ConjectureReport {
        variant,
        m_max,
        tol_real,
        rows,
        worst_rel_imag,
        worst_certificate_dev,
        verdict,
    })
}
