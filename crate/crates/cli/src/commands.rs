//! Subcommand bodies. Each returns the files it produced, unwritten.

use std::fmt::Write as _;

use wisfbm::{
    convergence_study, rate_vs_h_sweep, solve_endpoint, solve_path, CholeskySampler, CirculantSampler,
    ConvergenceConfig64, FbmPath64, Hurst64, RateFit64, SdeProblem64, SeedSpec, SolverKind, TimeGrid64,
};

use crate::config::{Command, SamplerChoice, Settings};
use crate::error::{CliError, Result};
use crate::output::{csv_file, real, OutputFile};
use crate::registry;

fn hurst_list(s: &Settings) -> Result<Vec<Hurst64>> {
    if s.hurst.is_empty() {
        return Err(CliError::Config("hurst list is empty".into()));
    }
    Ok(s.hurst.iter().map(|&h| Hurst64::new(h)).collect::<wisfbm::Result<_>>()?)
}

fn problem(s: &Settings, hurst: Hurst64) -> Result<SdeProblem64> {
    let drift = registry::lookup(&s.drift).ok_or_else(|| CliError::Config(format!("unknown drift '{}'", s.drift)))?;
    Ok(SdeProblem64::new(s.alpha, s.beta, s.x0, s.t_final, hurst, drift)?)
}

fn study_config(s: &Settings, hurst: Hurst64) -> Result<ConvergenceConfig64> {
    let cfg = ConvergenceConfig64 {
        problem: problem(s, hurst)?,
        methods: s.methods.clone(),
        dt_list: s.dt_list.clone(),
        ref_steps: s.ref_steps,
        samples: s.samples,
        batches: s.batches,
        master_seed: s.seed,
    };
    cfg.subsample_factors()?;
    Ok(cfg)
}

fn sample(s: &Settings, hurst: Hurst64, grid: TimeGrid64) -> Result<FbmPath64> {
    let seed = SeedSpec::new(s.seed, s.stream);
    Ok(match s.sampler {
        SamplerChoice::Circulant => CirculantSampler::new(hurst, grid)?.sample(seed),
        SamplerChoice::Cholesky => CholeskySampler::new(hurst, grid)?.sample(seed),
    })
}

fn h_label(h: f64) -> String {
    format!("{h}")
}

/// One path per Hurst value, solved by every selected method.
pub fn sample_path(s: &Settings) -> Result<Vec<OutputFile>> {
    if s.methods.is_empty() {
        return Err(CliError::Config("no methods selected".into()));
    }
    let grid = TimeGrid64::with_step(s.t_final, s.dt)
        .map_err(|_| CliError::Config(format!("dt = {} does not divide t_final = {}", s.dt, s.t_final)))?;
    let mut header = vec!["t".to_string(), "B_H".to_string()];
    header.extend(s.methods.iter().map(|m| format!("X_{}", m.name())));
    let header: Vec<&str> = header.iter().map(String::as_str).collect();

    let mut files = Vec::new();
    let mut names = Vec::new();
    for h in hurst_list(s)? {
        let p = problem(s, h)?;
        let path = sample(s, h, grid)?;
        let columns: Vec<Vec<f64>> = s
            .methods
            .iter()
            .map(|&m| -> Result<Vec<f64>> {
                Ok(if s.endpoint_only {
                    vec![solve_endpoint(&p, m, &path)?.x_at_t]
                } else {
                    solve_path(&p, m, &path)?.values
                })
            })
            .collect::<Result<_>>()?;
        let indices: Vec<usize> = if s.endpoint_only { vec![grid.n_steps()] } else { (0..=grid.n_steps()).collect() };
        let rows: Vec<Vec<String>> = indices
            .iter()
            .enumerate()
            .map(|(r, &i)| {
                let mut row = vec![real(grid.time(i)), real(path.values()[i])];
                row.extend(columns.iter().map(|c| real(c[r])));
                row
            })
            .collect();
        let name = format!("sample_path_H{}.csv", h_label(h.value()));
        files.push(csv_file(&name, &header, &rows)?);
        names.push(name);
    }
    files.push(sample_path_recipe(&names, &s.methods));
    Ok(files)
}

fn fit_fields(fit: Option<&RateFit64>) -> [String; 4] {
    match fit {
        Some(f) => [real(f.slope), real(f.slope_stderr), real(f.error_constant), real(f.intercept)],
        None => std::array::from_fn(|_| real(f64::NAN)),
    }
}

/// RMSE against a fine reference for each method and step size.
pub fn converge(s: &Settings) -> Result<Vec<OutputFile>> {
    let hs = hurst_list(s)?;
    if hs.len() != 1 {
        return Err(CliError::Config(format!("converge takes a single hurst value, got {}", hs.len())));
    }
    let report = convergence_study(&study_config(s, hs[0])?)?;

    let rmse_rows: Vec<Vec<String>> = report
        .table
        .entries
        .iter()
        .map(|e| vec![e.method.name().to_string(), real(e.dt), real(e.rmse), real(e.batch_std())])
        .collect();
    let fit_rows: Vec<Vec<String>> = report
        .fits
        .iter()
        .map(|mf| {
            let [slope, stderr, c, _] = fit_fields(mf.fit.as_ref().ok());
            vec![mf.method.name().to_string(), slope, stderr, c]
        })
        .collect();

    let mut dat = String::new();
    for &m in &s.methods {
        let _ = writeln!(dat, "# {}\n# log2_dt log2_rmse", m.name());
        for e in report.table.column(m) {
            if e.rmse > 0.0 {
                let _ = writeln!(dat, "{} {}", real(e.dt.log2()), real(e.rmse.log2()));
            }
        }
        dat.push_str("\n\n");
    }

    Ok(vec![
        csv_file("rmse.csv", &["method", "dt", "rmse", "batch_std"], &rmse_rows)?,
        csv_file("fit.csv", &["method", "slope", "slope_stderr", "error_constant"], &fit_rows)?,
        OutputFile::new("rmse_plot.dat", dat.into_bytes()),
        rmse_recipe(&s.methods),
    ])
}

/// Fitted rate (and error constant) as a function of H.
pub fn rate_sweep(s: &Settings) -> Result<Vec<OutputFile>> {
    let hs = hurst_list(s)?;
    let report = rate_vs_h_sweep(&hs, &study_config(s, hs[0])?)?;

    let rows: Vec<Vec<String>> = report
        .rows
        .iter()
        .map(|r| {
            let fit = r.fit.as_ref().ok();
            let [slope, stderr, _, intercept] = fit_fields(fit);
            vec![
                real(r.hurst),
                r.method.name().to_string(),
                slope,
                stderr,
                intercept,
                real(r.theoretical_rate),
                real(r.conjectured_rate),
            ]
        })
        .collect();

    let mut dat = String::new();
    for &m in &s.methods {
        let _ = writeln!(dat, "# {}\n# H slope slope_stderr log_error_constant theoretical_rate conjectured_rate", m.name());
        for r in report.rows.iter().filter(|r| r.method == m) {
            let [slope, stderr, _, intercept] = fit_fields(r.fit.as_ref().ok());
            let _ = writeln!(
                dat,
                "{} {slope} {stderr} {intercept} {} {}",
                real(r.hurst),
                real(r.theoretical_rate),
                real(r.conjectured_rate)
            );
        }
        dat.push_str("\n\n");
    }

    Ok(vec![
        csv_file(
            "sweep.csv",
            &["H", "method", "slope", "slope_stderr", "log_error_constant", "theoretical_rate", "conjectured_rate"],
            &rows,
        )?,
        OutputFile::new("sweep_plot.dat", dat.into_bytes()),
        sweep_recipe(&s.methods),
    ])
}

pub fn run(command: Command, s: &Settings) -> Result<Vec<OutputFile>> {
    match command {
        Command::SamplePath => sample_path(s),
        Command::Converge => converge(s),
        Command::RateSweep => rate_sweep(s),
    }
}

fn sample_path_recipe(csvs: &[String], methods: &[SolverKind]) -> OutputFile {
    let mut gp = String::from("set datafile separator ','\nset key autotitle columnhead\nset xlabel 't'\n");
    for f in csvs {
        let _ = write!(gp, "set title '{f}'\nplot '{f}' using 1:2 with lines");
        for i in 0..methods.len() {
            let _ = write!(gp, ", '' using 1:{} with lines", i + 3);
        }
        gp.push_str("\npause -1\n");
    }
    OutputFile::new("sample_path.gp", gp.into_bytes())
}

fn rmse_recipe(methods: &[SolverKind]) -> OutputFile {
    let mut gp = String::from("set xlabel 'log2 dt'\nset ylabel 'log2 RMSE'\nset key left top\nplot ");
    let parts: Vec<String> = methods
        .iter()
        .enumerate()
        .map(|(i, m)| format!("'rmse_plot.dat' index {i} using 1:2 with linespoints title '{}'", m.name()))
        .collect();
    gp.push_str(&parts.join(", \\\n     "));
    gp.push_str("\npause -1\n");
    OutputFile::new("rmse.gp", gp.into_bytes())
}

fn sweep_recipe(methods: &[SolverKind]) -> OutputFile {
    let mut gp = String::from("set xlabel 'H'\nset ylabel 'rate'\nset key left top\nplot ");
    let mut parts: Vec<String> = methods
        .iter()
        .enumerate()
        .map(|(i, m)| format!("'sweep_plot.dat' index {i} using 1:2:3 with yerrorlines title '{}'", m.name()))
        .collect();
    parts.push("'sweep_plot.dat' index 0 using 1:5 with lines dashtype 2 title 'min(H, zeta)'".into());
    parts.push("'sweep_plot.dat' index 0 using 1:6 with lines dashtype 3 title 'min(H+1/2, 1)'".into());
    gp.push_str(&parts.join(", \\\n     "));
    gp.push_str("\npause -1\n");
    gp.push_str("set ylabel 'log C'\nplot ");
    let parts: Vec<String> = methods
        .iter()
        .enumerate()
        .map(|(i, m)| format!("'sweep_plot.dat' index {i} using 1:4 with linespoints title '{}'", m.name()))
        .collect();
    gp.push_str(&parts.join(", \\\n     "));
    gp.push_str("\npause -1\n");
    OutputFile::new("sweep.gp", gp.into_bytes())
}
