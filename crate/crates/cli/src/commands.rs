//! Command implementations. Each builds a [`Table`]; writing is left to the caller.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, PI, SQRT_2};
use std::path::{Path, PathBuf};

use catlab::catalysis::{converged_n_max, MomentTable};
use catlab::fock_oracle::{catalyze, default_truncation, oracle_wigner, FockVector};
use catlab::metrics::{self, MomentSource};
use catlab::sweep::{self, ExtremumKind, Metric, MetricSpec, ScanSpec, ScanVariable, THETA_EPSILON};
use catlab::wigner::{
    self, characteristic_time, min_wigner, negative_volume, negative_volume_decohered, negative_volume_on,
    GridSpec, WignerFunction, WignerGrid,
};
use catlab::{CatalysisParams, Complex64, ThermalChannel};
use serde_json::{json, Value};

use crate::args::{
    parse_grid, parse_z, DecohereArgs, Format, MetricsArgs, PndArgs, Recipe, ReproArgs, ScanArgs, SqueezeArgs,
    Variable, WignerArgs,
};
use crate::error::CliError;
use crate::output::{emit, Table};

/// Oracle deviations above this fail an audit run.
pub const AUDIT_TOLERANCE: f64 = 1e-6;

fn deviation(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

fn oracle_state(p: &CatalysisParams, n_trunc: Option<usize>) -> Result<(FockVector, f64), CliError> {
    let n = n_trunc.unwrap_or_else(|| default_truncation(p.z(), p.m()));
    Ok(catalyze(p.z(), p.theta(), p.m(), n)?)
}

fn finish_audit(table: &mut Table, worst: f64) -> Result<(), CliError> {
    table.set("oracle_max_deviation", worst);
    eprintln!("oracle audit: max deviation {worst:.3e}");
    if worst > AUDIT_TOLERANCE {
        return Err(CliError::numeric(format!(
            "oracle audit deviation {worst:.3e} exceeds {AUDIT_TOLERANCE:e}"
        )));
    }
    Ok(())
}

struct MetricRow {
    q: f64,
    g2: f64,
    var_q: f64,
    var_p: f64,
    s_opt: f64,
}

fn metric_row<S: MomentSource>(src: &S) -> Result<MetricRow, CliError> {
    let v = metrics::quadrature_variances_from(src)?;
    Ok(MetricRow {
        q: metrics::mandel_q_from(src)?,
        g2: metrics::g2_from(src)?,
        var_q: v.var_q,
        var_p: v.var_p,
        s_opt: metrics::s_opt_from(src)?,
    })
}

pub fn metrics_table(args: &MetricsArgs, config: Value) -> Result<Table, CliError> {
    let mut table = Table::new(
        config,
        &["z_re", "z_im", "theta", "m", "Q", "g2", "var_q", "var_p", "db_q", "db_p", "s_opt", "p_succ"],
    );
    let mut worst = 0.0f64;
    for p in args.state.lattice()? {
        let row = metric_row(&MomentTable::new(p))?;
        let (state, p_succ) = oracle_state(&p, args.n_trunc)?;
        if args.oracle {
            let o = metric_row(&state)?;
            for (a, b) in [(row.q, o.q), (row.g2, o.g2), (row.var_q, o.var_q), (row.var_p, o.var_p), (row.s_opt, o.s_opt)] {
                worst = worst.max(deviation(a, b));
            }
        }
        table.push(vec![
            p.z().re,
            p.z().im,
            p.theta(),
            f64::from(p.m()),
            row.q,
            row.g2,
            row.var_q,
            row.var_p,
            metrics::to_db(row.var_q),
            metrics::to_db(row.var_p),
            row.s_opt,
            p_succ,
        ]);
    }
    if args.oracle {
        finish_audit(&mut table, worst)?;
    }
    Ok(table)
}

pub fn pnd_table(args: &PndArgs, config: Value) -> Result<Table, CliError> {
    let p = args.state.single()?;
    let n_max = match args.n_max {
        Some(n) => n,
        None => converged_n_max(&p)?,
    };
    let probs = metrics::pnd_vector(&p, n_max);
    let mut table = Table::new(config, &["n", "p_n"]);
    for (n, &pn) in probs.iter().enumerate() {
        table.push(vec![n as f64, pn]);
    }
    table.set("sum", probs.iter().sum::<f64>());
    table.set("mean_photon", metrics::mean_photon(&p));
    if args.oracle {
        let (state, _) = oracle_state(&p, args.n_trunc)?;
        let oracle = state.probabilities();
        let worst = probs
            .iter()
            .zip(&oracle)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        finish_audit(&mut table, worst)?;
    }
    Ok(table)
}

/// `(q, p, W)` triples in row-major q-then-p order.
pub fn grid_table(config: Value, grid: &WignerGrid) -> Table {
    let mut table = Table::new(config, &["q", "p", "W"]);
    let s = &grid.spec;
    for i in 0..s.n_q {
        for j in 0..s.n_p {
            table.push(vec![s.q(i), s.p(j), grid.value(i, j)]);
        }
    }
    table.set(
        "grid",
        json!({"q_min": s.q_min, "q_max": s.q_max, "p_min": s.p_min, "p_max": s.p_max, "n_q": s.n_q, "n_p": s.n_p}),
    );
    table.set("normalization_defect", grid.normalization_defect);
    table
}

/// Grid, negative volume and minimum for one state and channel.
pub fn wigner_summary(
    p: &CatalysisParams,
    channel: &ThermalChannel,
    spec: &GridSpec,
    config: Value,
) -> Result<Table, CliError> {
    let w = WignerFunction::decohered(p, channel);
    let grid = wigner::decohered_grid(p, channel, spec)?;
    let delta = negative_volume_on(&w, &grid.spec)?;
    let min = min_wigner(p, channel)?;
    let (mq, mp) = wigner::qp_of(min.location);
    let mut table = grid_table(config, &grid);
    table.set("delta", delta);
    table.set("min_w", min.value);
    table.set("min_q", mq);
    table.set("min_p", mp);
    Ok(table)
}

pub fn wigner_table(args: &WignerArgs, config: Value) -> Result<Table, CliError> {
    let p = args.state.single()?;
    let channel = args.channel.channel()?;
    if args.oracle && channel.kt != 0.0 {
        return Err(CliError::input("--oracle audits the undecohered Wigner function only (kt = 0)"));
    }
    let w = WignerFunction::decohered(&p, &channel);
    let spec = parse_grid(args.grid.as_deref(), w.center_qp())?;
    let mut table = wigner_summary(&p, &channel, &spec, config)?;
    if args.oracle {
        let (state, _) = oracle_state(&p, args.n_trunc)?;
        let stride = (table.rows.len() / 25).max(1);
        let mut worst = 0.0f64;
        for row in table.rows.iter().step_by(stride) {
            let gamma = wigner::gamma_of(row[0], row[1]);
            worst = worst.max((row[2] - oracle_wigner(&state, gamma).value).abs());
        }
        finish_audit(&mut table, worst)?;
    }
    Ok(table)
}

pub fn table1_params() -> Vec<CatalysisParams> {
    let mut out = Vec::new();
    for m in 1..=3 {
        for z in [1.0, 2.0] {
            for theta in [PI / 5.0, FRAC_PI_4, FRAC_PI_3] {
                out.push(CatalysisParams::real(z, theta, m).expect("fixed table parameters are valid"));
            }
        }
    }
    out
}

pub fn table1_table(config: Value) -> Result<Table, CliError> {
    let mut table = Table::new(config, &["m", "z", "theta", "delta"]);
    for p in table1_params() {
        let delta = negative_volume(&p, &GridSpec::default_for(&p))?;
        table.push(vec![f64::from(p.m()), p.z().re, p.theta(), delta]);
    }
    Ok(table)
}

fn default_kts() -> Vec<f64> {
    (0..=20).map(|i| 0.025 * i as f64).collect()
}

pub fn decohere_table(args: &DecohereArgs, config: Value) -> Result<Table, CliError> {
    let p = args.state.single()?;
    let kts = if args.kt.is_empty() { default_kts() } else { args.kt.clone() };
    let mut table = Table::new(config, &["kt", "min_w", "delta"]);
    for kt in kts {
        let ch = ThermalChannel::new(kt, args.nbar)?;
        let min = min_wigner(&p, &ch)?;
        table.push(vec![kt, min.value, negative_volume_decohered(&p, &ch)?]);
    }
    table.set("kt_c", characteristic_time(&p, args.nbar)?);
    Ok(table)
}

pub fn squeeze_table(args: &SqueezeArgs, config: Value) -> Result<Table, CliError> {
    let scan = ScanSpec::new(ScanVariable::Theta, THETA_EPSILON, FRAC_PI_2 - THETA_EPSILON, args.points, true)?;
    let mut table = Table::new(config, &["z_re", "z_im", "m", "db_best", "theta_star", "var_at_star"]);
    for z in &args.z {
        let z = parse_z(z)?;
        for &m in &args.m {
            let opt = metrics::optimal_squeezing(z, m, &scan)?;
            table.push(vec![z.re, z.im, f64::from(m), opt.db_best, opt.theta_star, opt.var_at_star]);
        }
    }
    Ok(table)
}

fn scan_variable(v: Variable) -> (ScanVariable, f64, f64) {
    match v {
        Variable::Theta => (ScanVariable::Theta, THETA_EPSILON, FRAC_PI_2 - THETA_EPSILON),
        Variable::Z => (ScanVariable::ZReal, 0.05, 3.0),
        Variable::Kt => (ScanVariable::Kt, 0.0, 0.5),
    }
}

/// Scan rows `(x, value)`; skipped points are listed in the summary instead.
fn scan_into_table(metric: &MetricSpec, spec: &ScanSpec, mut table: Table) -> Result<Table, CliError> {
    let result = sweep::scan(metric, spec)?;
    for (i, (&x, &v)) in result.abscissas.iter().zip(&result.values).enumerate() {
        if !result.skipped.contains(&i) {
            table.push(vec![x, v]);
        }
    }
    let extrema: Vec<Value> = result
        .extrema
        .iter()
        .map(|e| {
            json!({
                "location": e.location,
                "value": e.value,
                "kind": match e.kind { ExtremumKind::Min => "min", ExtremumKind::Max => "max" },
            })
        })
        .collect();
    let skipped: Vec<f64> = result.skipped.iter().map(|&i| result.abscissas[i]).collect();
    table.set("extrema", extrema);
    table.set("zero_crossings", result.zero_crossings.clone());
    table.set("skipped", skipped);
    Ok(table)
}

pub fn scan_table(args: &ScanArgs, config: Value) -> Result<Table, CliError> {
    let metric = Metric::parse(&args.metric)
        .ok_or_else(|| CliError::input(format!("unknown metric {:?}", args.metric)))?;
    let p = args.state.single()?;
    let (variable, lo, hi) = scan_variable(args.variable);
    let spec = ScanSpec::new(
        variable,
        args.lo.unwrap_or(lo),
        args.hi.unwrap_or(hi),
        args.points,
        !args.no_refine,
    )?;
    let metric = MetricSpec::new(metric, p).with_channel(args.channel.channel()?);
    scan_into_table(&metric, &spec, Table::new(config, &["x", "value"]))
}

fn extension(format: Format) -> &'static str {
    match format {
        Format::Csv => "csv",
        Format::Json => "json",
    }
}

fn theta_label(theta: f64) -> &'static str {
    if theta == PI / 5.0 {
        "pi5"
    } else if theta == FRAC_PI_4 {
        "pi4"
    } else if theta == FRAC_PI_3 {
        "pi3"
    } else if theta == PI / 6.0 {
        "pi6"
    } else {
        "theta"
    }
}

struct Writer<'a> {
    dir: &'a Path,
    format: Format,
    written: Vec<PathBuf>,
}

impl Writer<'_> {
    fn write(&mut self, stem: &str, table: &Table) -> Result<(), CliError> {
        let path = self.dir.join(format!("{stem}.{}", extension(self.format)));
        emit(&table.render(self.format), Some(&path))?;
        self.written.push(path);
        Ok(())
    }
}

fn theta_curve(metric: Metric, z: Complex64, m: u32, points: usize) -> Result<Vec<(f64, f64)>, CliError> {
    let spec = ScanSpec::new(ScanVariable::Theta, THETA_EPSILON, FRAC_PI_2 - THETA_EPSILON, points, false)?;
    let metric = MetricSpec::new(metric, CatalysisParams::new(z, FRAC_PI_4, m)?);
    let r = sweep::scan(&metric, &spec)?;
    Ok(r.abscissas
        .into_iter()
        .zip(r.values)
        .filter(|(_, v)| v.is_finite())
        .collect())
}

/// Runs a reproduction recipe and returns the files written.
pub fn repro(args: &ReproArgs, config: Value) -> Result<Vec<PathBuf>, CliError> {
    let mut out = Writer {
        dir: &args.out,
        format: args.format,
        written: Vec::new(),
    };
    let c = |re: f64| Complex64::new(re, 0.0);
    match args.recipe {
        Recipe::Fig2 => {
            let mut t = Table::new(config, &["z", "m", "theta", "Q"]);
            for z in [1.0, 2.0] {
                for m in 1..=4 {
                    for (theta, q) in theta_curve(Metric::MandelQ, c(z), m, 400)? {
                        t.push(vec![z, f64::from(m), theta, q]);
                    }
                }
            }
            out.write("fig2", &t)?;
        }
        Recipe::Fig3 => {
            let mut t = Table::new(config, &["abs_z_sq", "m", "theta", "g2"]);
            for z2 in [1.0, 2.0] {
                for m in 0..=4 {
                    for (theta, g) in theta_curve(Metric::G2, c(f64::sqrt(z2)), m, 400)? {
                        t.push(vec![z2, f64::from(m), theta, g]);
                    }
                }
            }
            let mut peaks = Vec::new();
            for (m, bracket) in [(1, (0.5, 0.9)), (2, (0.4, 0.65)), (3, (0.35, 0.55)), (4, (0.3, 0.5))] {
                let spec = MetricSpec::new(Metric::G2, CatalysisParams::real(1.0, 0.5, m)?);
                let (theta, g) = sweep::find_metric_peak(&spec, ScanVariable::Theta, bracket)?;
                peaks.push(json!({"m": m, "theta": theta, "g2": g}));
            }
            t.set("peaks_abs_z_sq_1", peaks);
            out.write("fig3", &t)?;
        }
        Recipe::Fig4 => {
            let mut t = Table::new(config, &["theta", "z", "m", "n", "p_n"]);
            for (theta, z) in [(PI / 6.0, 1.0), (FRAC_PI_4, 1.0), (FRAC_PI_3, 1.0), (FRAC_PI_3, 0.5)] {
                for m in 0..=3 {
                    let p = CatalysisParams::real(z, theta, m)?;
                    for (n, pn) in metrics::pnd_vector(&p, 10).into_iter().enumerate() {
                        t.push(vec![theta, z, f64::from(m), n as f64, pn]);
                    }
                }
            }
            out.write("fig4", &t)?;
        }
        Recipe::Fig5 => {
            let scan = ScanSpec::theta_default();
            let mut t = Table::new(config, &["z", "m", "db_best", "theta_star"]);
            for m in 1..=4 {
                for i in 1..=30 {
                    let z = 0.1 * f64::from(i);
                    let opt = metrics::optimal_squeezing(c(z), m, &scan)?;
                    t.push(vec![z, f64::from(m), opt.db_best, opt.theta_star]);
                }
            }
            out.write("fig5", &t)?;
        }
        Recipe::Fig6 => {
            let mut t = Table::new(config, &["z", "m", "theta", "s_opt"]);
            for z in [1.0, 2.0] {
                for m in 0..=4 {
                    for (theta, s) in theta_curve(Metric::SOpt, c(z), m, 400)? {
                        t.push(vec![z, f64::from(m), theta, s]);
                    }
                }
            }
            out.write("fig6", &t)?;
        }
        Recipe::Fig7 => {
            let mut summary = Table::new(config.clone(), &["m", "theta", "delta", "min_w"]);
            for m in 1..=2 {
                for theta in [PI / 5.0, FRAC_PI_4, FRAC_PI_3] {
                    let p = CatalysisParams::real(1.0, theta, m)?;
                    let ch = ThermalChannel::identity();
                    let t = wigner_summary(&p, &ch, &GridSpec::default_for(&p), config.clone())?;
                    summary.push(vec![f64::from(m), theta, t.summary["delta"].as_f64().unwrap_or(f64::NAN), t.summary["min_w"].as_f64().unwrap_or(f64::NAN)]);
                    out.write(&format!("fig7_m{m}_{}", theta_label(theta)), &t)?;
                }
            }
            out.write("fig7", &summary)?;
        }
        Recipe::Fig8 => {
            let p = CatalysisParams::real(1.0, FRAC_PI_3, 1)?;
            let mut summary = Table::new(config.clone(), &["kt", "delta", "min_w"]);
            for (i, kt) in [0.0, 0.05, 0.1, 0.2].into_iter().enumerate() {
                let ch = ThermalChannel::new(kt, 0.0)?;
                let center = (SQRT_2 * p.zbar().re * ch.decay(), SQRT_2 * p.zbar().im * ch.decay());
                let t = wigner_summary(&p, &ch, &GridSpec::around(center, 6.0, 301), config.clone())?;
                summary.push(vec![kt, t.summary["delta"].as_f64().unwrap_or(f64::NAN), t.summary["min_w"].as_f64().unwrap_or(f64::NAN)]);
                out.write(&format!("fig8_{}", ["a", "b", "c", "d"][i]), &t)?;
            }
            out.write("fig8", &summary)?;
        }
        Recipe::Fig9 => {
            let mut t = Table::new(config, &["m", "theta", "kt", "min_w"]);
            let mut kt_c = serde_json::Map::new();
            for (m, theta) in [(1, PI / 5.0), (1, FRAC_PI_4), (1, FRAC_PI_3), (2, FRAC_PI_3)] {
                let p = CatalysisParams::real(1.0, theta, m)?;
                for i in 0..=40 {
                    let kt = 0.0125 * f64::from(i);
                    let min = min_wigner(&p, &ThermalChannel::new(kt, 0.0)?)?;
                    t.push(vec![f64::from(m), theta, kt, min.value]);
                }
                kt_c.insert(format!("m{m}_{}", theta_label(theta)), characteristic_time(&p, 0.0)?.into());
            }
            t.set("kt_c", Value::Object(kt_c));
            out.write("fig9", &t)?;
        }
        Recipe::Table1 => {
            out.write("table1", &table1_table(config)?)?;
        }
    }
    Ok(out.written)
}
