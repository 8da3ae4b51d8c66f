//! One function per subcommand. Each writes its CSV files into the output
//! directory (when one is given) and a summary table on standard output.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use trading_prophet::analytics::{
    check_random_order_guarantee, exact_ratio_augmented, hardness_sweep, uniform_guarantee, InequalityCheck,
};
use trading_prophet::certify::{certify, CertifyOptions};
use trading_prophet::engine::{monte_carlo, run_policy, MarketInstance, MonteCarloStats, Policy, PriceModel};
use trading_prophet::matroid::matroid_guarantee;
use trading_prophet::rational::{format_rational, Rational};
use trading_prophet::report::{write_certify_csv, write_ratio_csv, write_stats_csv, write_sweep_csv, RatioRow};
use trading_prophet::Matroid;

use crate::config::{self, missing, rational, uniform_capacity, ExperimentConfig, ModelSpec};
use crate::error::{CliError, Result};

/// Settings shared by every subcommand, after flags, environment and config
/// have been merged.
pub struct Context {
    pub config: ExperimentConfig,
    /// Used for `instance_id` when the config has no `id`.
    pub config_stem: String,
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub trials: Option<u64>,
    pub quiet: bool,
}

impl Context {
    fn trials(&self, default: u64) -> Result<u64> {
        match self.trials.or(self.config.trials).unwrap_or(default) {
            0 => Err(CliError::config("trials: must be at least 1")),
            n => Ok(n),
        }
    }

    fn instance_id(&self) -> String {
        self.config.id.clone().unwrap_or_else(|| self.config_stem.clone())
    }

    /// Writes `name` into the output directory, if there is one.
    fn write(&self, name: &str, fill: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
        let Some(dir) = &self.out else { return Ok(()) };
        fs::create_dir_all(dir)?;
        let mut file = BufWriter::new(File::create(dir.join(name))?);
        fill(&mut file)?;
        file.flush()?;
        Ok(())
    }

    fn summary(&self, title: &str, header: &[&str], rows: &[Vec<String>]) {
        if !self.quiet {
            println!("{title}");
            print!("{}", table(header, rows));
        }
    }
}

fn csv_err(e: impl std::fmt::Display) -> CliError {
    CliError::Io(io::Error::other(e.to_string()))
}

/// Left-aligned columns separated by two spaces.
fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        format!("{}\n", padded.join("  ").trim_end())
    };
    let mut out = line(header.to_vec());
    for row in rows {
        out += &line(row.iter().map(String::as_str).collect());
    }
    out
}

fn stats_rows(rows: &[(Policy, MonteCarloStats)]) -> Vec<Vec<String>> {
    rows.iter()
        .map(|(p, s)| {
            vec![
                p.name().to_string(),
                s.trials.to_string(),
                format!("{:.6}", s.mean_profit),
                format!("{:.6}", s.stderr),
                format!("{:.6}", s.per_step_mean),
            ]
        })
        .collect()
}

const STATS_HEADER: [&str; 5] = ["policy", "trials", "mean", "stderr", "per_step_mean"];

fn ratio_rows(rows: &[RatioRow]) -> Vec<Vec<String>> {
    rows.iter()
        .map(|r| {
            vec![
                r.instance_id.clone(),
                r.matroid_kind.clone(),
                format_rational(&r.density),
                format_rational(&r.report.online_per_step),
                format_rational(&r.report.offline_per_step),
                r.report.ratio.as_ref().map_or_else(|| "undefined".into(), format_rational),
                format_rational(&r.report.bound),
                r.report.satisfied.to_string(),
            ]
        })
        .collect()
}

const RATIO_HEADER: [&str; 8] = [
    "instance_id",
    "matroid_kind",
    "density",
    "online",
    "offline",
    "ratio",
    "bound",
    "satisfied",
];

/// Monte Carlo traces and statistics for the online policy and the
/// hindsight optimum.
pub fn simulate(ctx: &Context) -> Result<()> {
    let m = ctx.config.matroid()?;
    let spec = ctx.config.model()?;
    let (model, online) = match spec {
        ModelSpec::RandomOrder { .. } => (PriceModel::RandomOrder(spec.random_order(&m)?), Policy::OnlineRandomOrder),
        _ => (PriceModel::Iid(spec.iid(&m)?), Policy::OnlineIid),
    };
    let horizon = match (&model, ctx.config.horizon) {
        (PriceModel::RandomOrder(ds), None) => ds.len(),
        (_, Some(n)) => n,
        (PriceModel::Iid(_), None) => return Err(missing("horizon")),
    };
    let inst = MarketInstance::new(m, model, horizon, ctx.seed)?;
    run_simulation(ctx, &inst, online)
}

fn run_simulation(ctx: &Context, inst: &MarketInstance, online: Policy) -> Result<()> {
    let trials = ctx.trials(1000)?;
    let mut rows = Vec::new();
    for (policy, file) in [(online, "trace.csv"), (Policy::Offline, "offline_trace.csv")] {
        rows.push((policy, monte_carlo(inst, policy, trials)?));
        let trace = run_policy(inst, policy, 0)?;
        ctx.write(file, |w| trace.write_csv(w).map_err(csv_err))?;
    }
    ctx.write("stats.csv", |w| write_stats_csv(w, &rows).map_err(csv_err))?;
    ctx.summary(
        &format!("horizon {}, seed {}, {trials} trials", inst.horizon(), inst.seed()),
        &STATS_HEADER,
        &stats_rows(&rows),
    );
    Ok(())
}

fn bound(ctx: &Context, m: &Matroid) -> Result<Rational> {
    match ctx.config.bound.as_deref() {
        None | Some("matroid") => Ok(matroid_guarantee(m)?),
        Some("uniform") => Ok(uniform_guarantee(m.ground_size(), uniform_capacity(m, "matroid")?)),
        Some(text) => rational("bound", text),
    }
}

/// Exact per-step values and the competitive ratio of an i.i.d. instance.
pub fn exact(ctx: &Context) -> Result<()> {
    let m = ctx.config.matroid()?;
    let offline = ctx.config.offline_matroid()?.unwrap_or_else(|| m.clone());
    let dist = ctx.config.model()?.iid(&m)?;
    let report = exact_ratio_augmented(&m, &offline, &dist, bound(ctx, &m)?)?;
    let rows = [RatioRow {
        instance_id: ctx.instance_id(),
        matroid_kind: m.kind_name().to_string(),
        density: m.density()?,
        report,
    }];
    ctx.write("ratio.csv", |w| write_ratio_csv(w, &rows).map_err(csv_err))?;
    ctx.summary("exact per-step values", &RATIO_HEADER, &ratio_rows(&rows));
    Ok(())
}

/// The exact ratio of a hardness family along a decreasing epsilon schedule.
pub fn hardness(ctx: &Context) -> Result<()> {
    let m = ctx.config.matroid()?;
    let spec = ctx.config.sweep.as_ref().ok_or_else(|| missing("sweep"))?;
    let offline = ctx.config.offline_matroid()?;
    let family = config::family(spec.family, &m, offline.as_ref())?;
    let epsilons = spec
        .epsilons
        .iter()
        .enumerate()
        .map(|(i, e)| rational(&format!("sweep.epsilons[{i}]"), e))
        .collect::<Result<Vec<_>>>()?;
    if epsilons.is_empty() {
        return Err(CliError::config("sweep.epsilons: need at least one value"));
    }
    let sweep = hardness_sweep(&family, &epsilons).map_err(|e| CliError::at("sweep", e))?;
    ctx.write("sweep.csv", |w| write_sweep_csv(w, &sweep).map_err(csv_err))?;
    let rows: Vec<Vec<String>> = sweep
        .points
        .iter()
        .map(|p| {
            let r = p.report.ratio.as_ref();
            vec![
                format_rational(&p.epsilon),
                r.map_or_else(|| "undefined".into(), format_rational),
                r.map_or_else(|| "nan".into(), |r| format!("{:.6}", trading_prophet::rational::to_f64(r))),
                format_rational(&p.gap),
                p.within_margin().to_string(),
            ]
        })
        .collect();
    ctx.summary(
        &format!(
            "{} family, limit {}, monotone {}",
            sweep.family,
            format_rational(&sweep.limit),
            sweep.monotone()
        ),
        &["epsilon", "ratio", "ratio_approx", "gap", "within_margin"],
        &rows,
    );
    Ok(())
}

fn lemma_row(name: &str, c: &InequalityCheck) -> Vec<String> {
    vec![
        name.to_string(),
        format_rational(&c.lhs),
        format_rational(&c.rhs),
        c.holds.to_string(),
    ]
}

/// Exact random-order values with both supporting lemmas, plus a Monte
/// Carlo run of the same instance.
pub fn random_order(ctx: &Context) -> Result<()> {
    let m = ctx.config.matroid()?;
    let ds = ctx.config.model()?.random_order(&m)?;
    let cert = check_random_order_guarantee(&m, &ds)?;
    let rows = [RatioRow {
        instance_id: ctx.instance_id(),
        matroid_kind: m.kind_name().to_string(),
        density: cert.density.clone(),
        report: cert.report.clone(),
    }];
    ctx.write("ratio.csv", |w| write_ratio_csv(w, &rows).map_err(csv_err))?;
    let lemmas = vec![
        lemma_row("mixture_pair", &cert.mixture_pair),
        lemma_row("mean_discrepancy", &cert.discrepancy),
    ];
    let header = ["lemma", "lhs", "rhs", "holds"];
    ctx.write("lemmas.csv", |w| {
        let mut out = String::from("lemma,lhs,rhs,holds\n");
        for row in &lemmas {
            out += &row.join(",");
            out.push('\n');
        }
        w.write_all(out.as_bytes()).map_err(CliError::from)
    })?;
    ctx.summary(&format!("random order, n = {}", cert.n), &RATIO_HEADER, &ratio_rows(&rows));
    ctx.summary("", &header, &lemmas);
    let inst = MarketInstance::random_order(m, ds, ctx.seed)?;
    run_simulation(ctx, &inst, Policy::OnlineRandomOrder)
}

/// Prints the exact density `max |X| / rk(X)`.
pub fn density(ctx: &Context) -> Result<()> {
    let m = ctx.config.matroid()?;
    let d = m.density()?;
    println!("{}", format_rational(&d));
    ctx.write("density.csv", |w| {
        let text = format!(
            "matroid_kind,k,density,guarantee\n{},{},{},{}\n",
            m.kind_name(),
            m.ground_size(),
            format_rational(&d),
            format_rational(&matroid_guarantee(&m)?)
        );
        w.write_all(text.as_bytes()).map_err(CliError::from)
    })
}

/// Runs the property suite; fails with exit code 1 if any property fails.
pub fn run_certify(ctx: &Context) -> Result<()> {
    let trials = ctx.trials(CertifyOptions::default().trials as u64)?;
    let options = CertifyOptions {
        seed: ctx.seed,
        trials: usize::try_from(trials).map_err(|_| CliError::config("trials: too large"))?,
    };
    let report = certify(options)?;
    ctx.write("certify.csv", |w| write_certify_csv(w, &report).map_err(csv_err))?;
    let rows: Vec<Vec<String>> = report
        .results
        .iter()
        .map(|r| {
            vec![
                r.name.to_string(),
                r.trials.to_string(),
                r.failures.to_string(),
                if r.passed() { "PASS" } else { "FAIL" }.to_string(),
            ]
        })
        .collect();
    ctx.summary(
        &format!("seed {}, {} trials per property", options.seed, options.trials),
        &["property", "trials", "failures", "verdict"],
        &rows,
    );
    if report.all_passed() {
        return Ok(());
    }
    let violated: Vec<String> = report
        .failed()
        .map(|r| format!("{} ({})", r.name, r.first_failure.as_deref().unwrap_or("no detail")))
        .collect();
    Err(CliError::Failed(format!("violated properties: {}", violated.join("; "))))
}

pub fn stem(path: &Path) -> String {
    path.file_stem().map_or_else(|| "instance".into(), |s| s.to_string_lossy().into_owned())
}
