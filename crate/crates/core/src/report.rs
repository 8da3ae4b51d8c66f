//! CSV exports. Rationals are written as `"p/q"`, floats with Rust's
//! shortest round-trip formatting, so equal inputs give byte-identical files.

use std::io;

use crate::analytics::{RatioReport, Sweep};
use crate::certify::CertifyReport;
use crate::engine::{MonteCarloStats, Policy};
use crate::rational::{format_rational, Rational};

fn ratio_cell(r: &Option<Rational>) -> String {
    r.as_ref().map_or_else(|| "undefined".to_string(), format_rational)
}

/// `policy, trials, mean, stderr, per_step_mean`.
pub fn write_stats_csv<W: io::Write>(out: W, rows: &[(Policy, MonteCarloStats)]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["policy", "trials", "mean", "stderr", "per_step_mean"])?;
    for (policy, s) in rows {
        w.write_record([
            policy.name().to_string(),
            s.trials.to_string(),
            s.mean_profit.to_string(),
            s.stderr.to_string(),
            s.per_step_mean.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// One exact comparison, labelled for the ratio table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioRow {
    pub instance_id: String,
    pub matroid_kind: String,
    pub density: Rational,
    pub report: RatioReport,
}

/// `instance_id, matroid_kind, density, online, offline, ratio, bound, satisfied`.
pub fn write_ratio_csv<W: io::Write>(out: W, rows: &[RatioRow]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "instance_id",
        "matroid_kind",
        "density",
        "online",
        "offline",
        "ratio",
        "bound",
        "satisfied",
    ])?;
    for row in rows {
        let r = &row.report;
        w.write_record([
            row.instance_id.clone(),
            row.matroid_kind.clone(),
            format_rational(&row.density),
            format_rational(&r.online_per_step),
            format_rational(&r.offline_per_step),
            ratio_cell(&r.ratio),
            format_rational(&r.bound),
            r.satisfied.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// `family, epsilon, online, offline, ratio, ratio_approx, limit, gap, margin, within_margin`.
pub fn write_sweep_csv<W: io::Write>(out: W, sweep: &Sweep) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "family",
        "epsilon",
        "online",
        "offline",
        "ratio",
        "ratio_approx",
        "limit",
        "gap",
        "margin",
        "within_margin",
    ])?;
    for p in &sweep.points {
        let approx = p.report.ratio.as_ref().map_or(f64::NAN, crate::rational::to_f64);
        w.write_record([
            sweep.family.to_string(),
            format_rational(&p.epsilon),
            format_rational(&p.report.online_per_step),
            format_rational(&p.report.offline_per_step),
            ratio_cell(&p.report.ratio),
            approx.to_string(),
            format_rational(&sweep.limit),
            format_rational(&p.gap),
            format_rational(&p.margin),
            p.within_margin().to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// `property, trials, failures, passed`.
pub fn write_certify_csv<W: io::Write>(out: W, report: &CertifyReport) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["property", "trials", "failures", "passed"])?;
    for r in &report.results {
        w.write_record([
            r.name.to_string(),
            r.trials.to_string(),
            r.failures.to_string(),
            r.passed().to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
