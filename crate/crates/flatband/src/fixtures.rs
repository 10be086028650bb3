//! Plain-text oracle reports, also used as archived regression fixtures.
//!
//! One `key value` pair per line; checks are
//! `check <name> <lhs> <rhs> <tolerance> PASS|FAIL`.

use std::collections::BTreeMap;

use flatband_core::oracle::OracleReport;

use crate::output::fmt_num;

pub fn format_report(report: &OracleReport) -> String {
    let mut lines = vec![
        "# flatband oracle report".to_string(),
        format!("n_sites {}", report.n_sites),
        format!("n_max_site {}", report.n_max_site),
        format!("omega_m {}", fmt_num(report.omega_m)),
        format!("delta {}", fmt_num(report.delta)),
        format!("omega_coupling {}", fmt_num(report.omega_coupling)),
        format!("full.energy_per_site {}", fmt_num(report.full.energy_per_site)),
        format!("full.sigma_z {}", fmt_num(report.full.sigma_z)),
        format!("full.photon_number {}", fmt_num(report.full.photon_number)),
        format!("meanfield.psi_star {}", fmt_num(report.meanfield.psi_star)),
        format!("meanfield.ground_energy {}", fmt_num(report.meanfield.ground_energy)),
        format!("meanfield.sigma_z {}", fmt_num(report.meanfield.sigma_z_expectation)),
        format!("meanfield.photon_number {}", fmt_num(report.meanfield.photon_number)),
        format!("rabi.energy {}", fmt_num(report.rabi.energy)),
        format!("rabi.sigma_z {}", fmt_num(report.rabi.sigma_z)),
        format!("rabi.photon_number {}", fmt_num(report.rabi.photon_number)),
    ];
    for check in &report.checks {
        lines.push(format!(
            "check {} {} {} {} {}",
            check.name,
            fmt_num(check.lhs),
            fmt_num(check.rhs),
            fmt_num(check.tolerance),
            verdict(check.passed())
        ));
    }
    lines.push(format!("result {}", verdict(report.passed())));
    let mut out = lines.join("\n");
    out.push('\n');
    out
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

/// Numeric `key value` lines of a report; checks and comments are skipped.
pub fn report_values(text: &str) -> Result<BTreeMap<String, f64>, String> {
    let mut values = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with("check ") {
            continue;
        }
        let mut parts = line.split_whitespace();
        let (Some(key), Some(value), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(format!("line {}: expected `key value`", n + 1));
        };
        if key == "result" {
            continue;
        }
        let v = value
            .parse::<f64>()
            .map_err(|_| format!("line {}: `{value}` is not a number", n + 1))?;
        values.insert(key.to_string(), v);
    }
    Ok(values)
}
