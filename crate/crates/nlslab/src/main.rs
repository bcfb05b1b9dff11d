//! Command-line entry point: orchestrates runs and reproduces the reference
//! tables by name. All heavy computation lives in the library; this binary
//! does argument plumbing, manifests and file output.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use nlslab::fitting::{self, RatePoint};
use nlslab::golden;
use nlslab::grid::ChebyshevGrid;
use nlslab::ground_state;
use nlslab::reduced;
use nlslab::report;
use nlslab::rescale;
use nlslab::spectral;

#[derive(Parser)]
#[command(name = "nlslab", about = "Numerical laboratory for L2-critical NLS blow-up")]
struct Cli {
    /// Output directory (flag > NLSLAB_OUT env > ./out).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Key-value config file (one `flag = value` per line) supplying
    /// defaults for any omitted flag.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the ground state and emit its constants and profile.
    GroundState {
        #[arg(long)]
        dim: u32,
        #[arg(long)]
        nodes: Option<usize>,
        #[arg(long)]
        domain_length: Option<f64>,
        /// Also report the Table-18-style ‖Q - Pe^{-r}‖_∞ consistency line.
        #[arg(long)]
        check_weighted: bool,
    },
    /// Run the rescaled NLS to the focusing target.
    Simulate {
        #[arg(long)]
        dim: u32,
        #[arg(long)]
        amp: Option<f64>,
        #[arg(long)]
        nodes: Option<usize>,
        #[arg(long)]
        kappa: Option<f64>,
        #[arg(long)]
        dtau: Option<f64>,
        #[arg(long)]
        stop_focusing: Option<f64>,
    },
    /// Fit blow-up rates from a checkpoint CSV (ln_l, ln_t_minus_t columns).
    Fit {
        #[arg(long)]
        trace: PathBuf,
        /// Comma-separated subset of the form catalogue (labels); default all.
        #[arg(long)]
        forms: Option<String>,
    },
    /// Integrate the reduced adiabatic system.
    Reduced {
        #[arg(long)]
        c_nu: f64,
        #[arg(long)]
        b0: Option<f64>,
        #[arg(long)]
        a0: Option<f64>,
        #[arg(long)]
        stop_focusing: Option<f64>,
        #[arg(long)]
        tau_end: Option<f64>,
    },
    /// Spectral-property evidence ledger and verdict for one dimension.
    Spectral {
        #[arg(long)]
        dim: u32,
    },
    /// Regenerate a reference table and diff against the golden values.
    Report {
        /// Table name: table-1, table-7, table-8, table-10, table-11, table-19.
        table: String,
    },
}

fn out_dir(cli: &Cli) -> Result<PathBuf> {
    let dir = cli
        .out
        .clone()
        .or_else(|| std::env::var_os("NLSLAB_OUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"));
    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    Ok(dir)
}

/// Key-value config file: `name = value` lines, `#` comments.
fn load_config(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut map = BTreeMap::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            bail!("config line without '=': {line}");
        };
        map.insert(k.trim().replace('-', "_"), v.trim().to_string());
    }
    Ok(map)
}

fn cfg_get<T: std::str::FromStr>(cfg: &BTreeMap<String, String>, key: &str) -> Option<T> {
    cfg.get(key).and_then(|v| v.parse().ok())
}

/// Write the run manifest before heavy computation starts.
fn write_manifest(dir: &Path, name: &str, params: &serde_json::Value) -> Result<()> {
    let manifest = serde_json::json!({
        "command": name,
        "params": params,
        "version": env!("CARGO_PKG_VERSION"),
    });
    fs::write(
        dir.join(format!("{name}.manifest.json")),
        serde_json::to_string_pretty(&manifest)?,
    )?;
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    let code = match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    };
    std::process::exit(code);
}

fn run(cli: &Cli) -> Result<i32> {
    let dir = out_dir(cli)?;
    let cfg = match &cli.config {
        Some(p) => load_config(p)?,
        None => BTreeMap::new(),
    };
    match &cli.command {
        Command::GroundState {
            dim,
            nodes,
            domain_length,
            check_weighted,
        } => {
            let n = nodes.or_else(|| cfg_get(&cfg, "nodes")).unwrap_or(1025);
            let length = domain_length
                .or_else(|| cfg_get(&cfg, "domain_length"))
                .unwrap_or(100.0);
            write_manifest(
                &dir,
                "ground-state",
                &serde_json::json!({"dim": dim, "nodes": n, "domain_length": length}),
            )?;
            if *dim == 1 {
                let (_, err) = ground_state::solve_d1_anchor(n, length.min(40.0))?;
                println!("d=1 sup-norm error vs explicit formula: {err:.3e}");
                fs::write(
                    dir.join("ground-state-d1.json"),
                    serde_json::to_string_pretty(&serde_json::json!({"sup_error": err}))?,
                )?;
                return Ok(0);
            }
            let grid = ChebyshevGrid::truncated(n, length)?;
            let p = ground_state::profile(*dim, &grid)?;
            println!(
                "d={dim}: mass={:.4} M={:.6} nu0={:.6} c_nu={:.4}",
                p.mass, p.m_const, p.nu0, p.c_nu
            );
            if *check_weighted {
                let dist = ground_state::direct_q_distance(*dim, &grid, &p)?;
                println!("||Q - P e^-r||_inf = {dist:.3e}");
            }
            let mut w = csv::Writer::from_path(dir.join(format!("profile-d{dim}.csv")))?;
            w.write_record(["r", "Q", "V1", "V2"])?;
            for i in 0..grid.len() {
                w.write_record(&[
                    grid.xi[i].to_string(),
                    p.q_vals[i].to_string(),
                    p.v1_vals[i].to_string(),
                    p.v2_vals[i].to_string(),
                ])?;
            }
            w.flush()?;
            fs::write(
                dir.join(format!("constants-d{dim}.json")),
                serde_json::to_string_pretty(&serde_json::json!({
                    "dim": dim, "mass": p.mass, "m_const": p.m_const,
                    "nu0": p.nu0, "c_nu": p.c_nu,
                }))?,
            )?;
            Ok(0)
        }
        Command::Simulate {
            dim,
            amp,
            nodes,
            kappa,
            dtau,
            stop_focusing,
        } => {
            let mut config = rescale::SimConfig::standard(*dim);
            if let Some(a) = amp.or_else(|| cfg_get(&cfg, "amp")) {
                config.amplitude = a;
            }
            if let Some(n) = nodes.or_else(|| cfg_get(&cfg, "nodes")) {
                config.nodes = n;
            }
            if let Some(k) = kappa.or_else(|| cfg_get(&cfg, "kappa")) {
                config.kappa = k;
            }
            if let Some(dt) = dtau.or_else(|| cfg_get(&cfg, "dtau")) {
                config.dtau = dt;
            }
            if let Some(s) = stop_focusing.or_else(|| cfg_get(&cfg, "stop_focusing")) {
                config.stop_focusing = s;
            }
            write_manifest(&dir, "simulate", &serde_json::to_value(&config)?)?;
            if config.amplitude < rescale::threshold_amplitude(*dim) {
                eprintln!(
                    "warning: amplitude {} below blow-up threshold {}",
                    config.amplitude,
                    rescale::threshold_amplitude(*dim)
                );
            }
            let trace = rescale::run(&config)?;
            let tmt = trace.t_minus_t();
            // subsampled trace for plotting
            let mut w = csv::Writer::from_path(dir.join(format!("trace-d{dim}.csv")))?;
            w.write_record(["step", "tau", "ln_l", "a", "sup_v", "t_minus_t"])?;
            let stride = (trace.ln_l.len() / 5000).max(1);
            for j in (0..trace.ln_l.len()).step_by(stride) {
                w.write_record(&[
                    j.to_string(),
                    (j as f64 * config.dtau).to_string(),
                    trace.ln_l[j].to_string(),
                    trace.a[j].to_string(),
                    trace.sup_v[j].to_string(),
                    tmt[j].to_string(),
                ])?;
            }
            w.flush()?;
            // checkpoints at the fitting levels
            let levels = golden::checkpoint_levels(*dim);
            let mut w = csv::Writer::from_path(dir.join(format!("checkpoints-d{dim}.csv")))?;
            w.write_record(["ln_l", "ln_t_minus_t"])?;
            for cp in trace.checkpoints(&levels) {
                w.write_record(&[cp.l.ln().to_string(), cp.t_minus_t.ln().to_string()])?;
            }
            w.flush()?;
            let summary = serde_json::json!({
                "dim": dim,
                "steps": trace.steps(),
                "conservation_error": trace.conservation_error(),
                "blowup_time": trace.blowup_time(),
                "completed": trace.completed,
            });
            fs::write(
                dir.join(format!("summary-d{dim}.json")),
                serde_json::to_string_pretty(&summary)?,
            )?;
            println!(
                "d={dim}: {} steps, conservation error {:.3e}, T = {:.6}",
                trace.steps(),
                trace.conservation_error(),
                trace.blowup_time()
            );
            Ok(0)
        }
        Command::Fit { trace, forms } => {
            let mut rdr = csv::Reader::from_path(trace)
                .with_context(|| format!("reading {}", trace.display()))?;
            let mut points = Vec::new();
            for rec in rdr.deserialize::<RatePoint>() {
                points.push(rec?);
            }
            if points.len() < 2 {
                eprintln!("error: trace has {} checkpoints; need at least 2", points.len());
                return Ok(2);
            }
            write_manifest(&dir, "fit", &serde_json::json!({"trace": trace, "forms": forms}))?;
            let n_rho = points.len() - 1;
            let report = fitting::fitting_report(&points, n_rho.saturating_sub(4), n_rho, 5)?;
            let keep: Option<Vec<&str>> = forms.as_ref().map(|f| f.split(',').collect());
            let mut w = csv::Writer::from_path(dir.join("fit-report.csv"))?;
            w.write_record(["form", "epsilon", "drift", "rho_final"])?;
            for e in &report.entries {
                if let Some(keep) = &keep {
                    if !keep.contains(&e.label.as_str()) {
                        continue;
                    }
                }
                w.write_record(&[
                    e.label.clone(),
                    e.epsilon.to_string(),
                    e.drift_last.to_string(),
                    e.rho.last().unwrap().to_string(),
                ])?;
            }
            w.flush()?;
            fs::write(dir.join("fit-report.json"), serde_json::to_string_pretty(&report)?)?;
            println!("best form: {} (stabilizes: {})", report.best, report.loglog_stabilizes);
            Ok(0)
        }
        Command::Reduced {
            c_nu,
            b0,
            a0,
            stop_focusing,
            tau_end,
        } => {
            let mut config = reduced::ReducedConfig::standard(*c_nu);
            if let Some(b) = b0.or_else(|| cfg_get(&cfg, "b0")) {
                config.b0 = b;
                config.a0 = b.sqrt();
            }
            if let Some(a) = a0.or_else(|| cfg_get(&cfg, "a0")) {
                config.a0 = a;
            }
            config.stop_focusing = stop_focusing.or_else(|| cfg_get(&cfg, "stop_focusing"));
            if let Some(t) = tau_end.or_else(|| cfg_get(&cfg, "tau_end")) {
                config.tau_end = t;
            }
            write_manifest(&dir, "reduced", &serde_json::to_value(&config)?)?;
            let trace = reduced::run(&config, 8);
            let mut w = csv::Writer::from_path(dir.join("reduced.csv"))?;
            w.write_record(["tau", "a", "b", "ln_l", "ln_t_minus_t", "loglog_ratio"])?;
            for j in 0..trace.tau.len() {
                let ratio = if trace.ln_t_minus_t[j] < -1.0 {
                    trace.loglog_ratio(j).to_string()
                } else {
                    String::new()
                };
                w.write_record(&[
                    trace.tau[j].to_string(),
                    trace.a[j].to_string(),
                    trace.b[j].to_string(),
                    trace.ln_l[j].to_string(),
                    trace.ln_t_minus_t[j].to_string(),
                    ratio,
                ])?;
            }
            w.flush()?;
            let j = trace.tau.len() - 1;
            println!(
                "reduced: tau_end={:.3e} a={:.6} b={:.6} ln L={:.3}",
                trace.tau[j], trace.a[j], trace.b[j], trace.ln_l[j]
            );
            Ok(0)
        }
        Command::Spectral { dim } => {
            write_manifest(&dir, "spectral", &serde_json::json!({"dim": dim}))?;
            let grid = ChebyshevGrid::truncated(1025, 100.0)?;
            let p = ground_state::profile(*dim, &grid)?;
            let l1 = spectral::count_index(*dim, 0, spectral::Operator::L1, &p)?;
            let l2 = spectral::count_index(*dim, 0, spectral::Operator::L2, &p)?;
            let l1k1 = spectral::count_index(*dim, 1, spectral::Operator::L1, &p)?;
            let l2k1 = spectral::count_index(*dim, 1, spectral::Operator::L2, &p)?;
            let l1k2 = spectral::count_index(*dim, 2, spectral::Operator::L1, &p)?;
            let forms = spectral::bilinear_matrix(*dim, &p)?;
            let l2z = spectral::property2_form(*dim, &p, spectral::OuterBc::Artificial)?;
            let need_k2 = l1k2.zero_count > 0;
            let h = spectral::harmonic_forms(*dim, &p, need_k2)?;
            let ev = spectral::VerdictEvidence {
                indices: spectral::ChannelIndices {
                    l1_radial: l1.zero_count,
                    l2_radial: l2.zero_count,
                    l1_k1: l1k1.zero_count,
                    l2_k1: l2k1.zero_count,
                    l1_k2: l1k2.zero_count,
                },
                k11: forms.k11,
                k22: forms.k22,
                kk: forms.kk,
                jj: forms.jj,
                l2z,
                k11_1: h.k11_1,
                k11_2: h.k11_2,
            };
            let verdict = spectral::assemble_verdict(&ev);
            let ledger = serde_json::json!({
                "dim": dim,
                "indices": ev.indices,
                "index_results": [l1, l2, l1k1, l2k1, l1k2],
                "forms": forms,
                "l2z": l2z,
                "harmonic_forms": h,
                "verdict": verdict,
            });
            fs::write(
                dir.join(format!("spectral-d{dim}.json")),
                serde_json::to_string_pretty(&ledger)?,
            )?;
            println!(
                "d={dim}: P1 {:?}, P2 {:?}",
                verdict.property1, verdict.property2
            );
            for line in &verdict.evidence {
                println!("  {line}");
            }
            Ok(0)
        }
        Command::Report { table } => {
            let rows = regenerate_table(table)?;
            print!("{}", report::render(&rows));
            let mut w = csv::Writer::from_path(dir.join(format!("{table}.csv")))?;
            w.write_record(["entry", "computed", "reference", "rel_err", "ok"])?;
            for r in &rows {
                w.write_record(&[
                    r.label.clone(),
                    r.computed.to_string(),
                    r.reference.to_string(),
                    r.rel_err.to_string(),
                    r.ok.to_string(),
                ])?;
            }
            w.flush()?;
            if report::all_ok(&rows) {
                Ok(0)
            } else {
                let mut stderr = std::io::stderr();
                writeln!(stderr, "golden mismatch in {table}")?;
                Ok(1)
            }
        }
    }
}

fn profiles_for(dims: &[u32]) -> Result<Vec<(u32, ground_state::GroundStateProfile)>> {
    let grid = ChebyshevGrid::truncated(1025, 100.0)?;
    let mut out = Vec::new();
    for &d in dims {
        out.push((d, ground_state::profile(d, &grid)?));
    }
    Ok(out)
}

fn regenerate_table(table: &str) -> Result<Vec<report::ReportRow>> {
    let all: Vec<u32> = (5..=12).collect();
    Ok(match table {
        "table-1" => report::table1(&profiles_for(&[4, 5, 6, 7, 8, 9, 10, 11, 12])?),
        "table-7" => report::table7(&profiles_for(&all)?),
        "table-8" | "table-9" => report::table89(&profiles_for(&all)?),
        "table-10" => report::table10(&profiles_for(&[3, 4, 5, 6, 7, 8, 9, 10, 11, 12])?),
        "table-11" | "table-12" | "table-13" => report::table111213(&profiles_for(&all)?),
        "table-19" => {
            let grid = ChebyshevGrid::truncated(1025, 100.0)?;
            let p = ground_state::cubic_3d_profile(&grid)?;
            report::table19(&p)
        }
        other => bail!("unknown table name: {other} (supported: table-1, table-7, table-8, table-9, table-10, table-11, table-12, table-13, table-19)"),
    })
}
