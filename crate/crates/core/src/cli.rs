//! Command line driver.
//!
//! One thin binary with six subcommands, each a single invocation of the
//! library machinery:
//!
//! ```text
//! solve        solve one problem, write (node, u, U) rows
//! sweep        scan the (alpha, beta) parameter plane, one error row per pair
//! convergence  mesh-refinement study with fitted convergence orders
//! compare      flux gap between two schemes across a refinement ladder
//! reference    dump the shooting reference solution
//! check        run the embedded property suite
//! ```
//!
//! Configuration is a flat `key = value` text format with section prefixes
//! (`problem.V = "2*sin(2*pi*x)"`); every key can also be set by a command
//! line flag of the same dotted name (`--problem.V=...`). Later sources win:
//! preset defaults, then the config file, then flags.
//!
//! Exit codes: 0 success, 1 configuration error, 2 numerical failure.
//! Output is CSV with a header line, 17 significant digits, LF endings;
//! identical configuration and seed give byte-identical output.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;

use crate::analysis::{compare_schemes, error_report, fit_eoc, ErrorReport};
use crate::assembly::{assemble, AssemblyError, DiscreteField, DiscreteSystem, Problem};
use crate::checks::run_property_suite;
use crate::field::ScalarField;
use crate::linsolve::{default_max_iter, DEFAULT_TOL};
use crate::means::MeanSpec;
use crate::mesh::{build_cubic_mesh, build_interval_mesh, AxisBox, IntervalLayout, Mesh};
use crate::presets;
use crate::reference::{shoot_reference, ReferenceError, ReferenceSolution};

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Numeric(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Numeric(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

fn config_err<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Config(msg.into()))
}

fn map_assembly(err: AssemblyError) -> CliError {
    match err {
        AssemblyError::MissingDirichlet => CliError::Config(err.to_string()),
        AssemblyError::Mean(e) => CliError::Config(e.to_string()),
        other => CliError::Numeric(other.to_string()),
    }
}

fn map_reference(err: ReferenceError) -> CliError {
    match err {
        ReferenceError::BadProblem(_) => CliError::Config(err.to_string()),
        other => CliError::Numeric(other.to_string()),
    }
}

/// 17 significant digits; non-finite values become the `nan` sentinel.
fn fmt17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "nan".to_string()
    }
}

// ---------------------------------------------------------------- key maps

#[derive(Debug, Default)]
struct KeyMap {
    entries: BTreeMap<String, String>,
}

impl KeyMap {
    fn insert(&mut self, key: &str, value: &str) {
        self.entries.insert(key.to_string(), value.to_string());
    }

    fn take(&mut self, key: &str) -> Option<String> {
        self.entries.remove(key)
    }

    fn take_parsed<T: FromStr>(&mut self, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: fmt::Display,
    {
        match self.take(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse::<T>()
                .map(Some)
                .map_err(|e| CliError::Config(format!("key '{key}': {e}"))),
        }
    }

    fn reject_leftovers(&self) -> Result<(), CliError> {
        if let Some(key) = self.entries.keys().next() {
            return config_err(format!("unknown key '{key}'"));
        }
        Ok(())
    }
}

fn strip_quotes(v: &str) -> &str {
    let v = v.trim();
    if v.len() >= 2 && ((v.starts_with('"') && v.ends_with('"')) || (v.starts_with('\'') && v.ends_with('\''))) {
        &v[1..v.len() - 1]
    } else {
        v
    }
}

fn parse_config_text(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match line.split_once('=') {
            Some((k, v)) => out.push((k.trim().to_string(), strip_quotes(v).to_string())),
            None => {
                return config_err(format!("line {}: expected 'key = value'", lineno + 1));
            }
        }
    }
    Ok(out)
}

// ------------------------------------------------------------- run config

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum MeshKindCfg {
    Interval,
    Cubic,
}

#[derive(Debug)]
struct RunConfig {
    problem: Problem,
    mesh_kind: MeshKindCfg,
    n_nodes: usize,
    h_cubic: Option<f64>,
    mean: MeanSpec,
    means: Vec<MeanSpec>,
    /// (n_grid, tol) of the shooting reference, when configured.
    reference: Option<(usize, f64)>,
    output: String,
    seed: u64,
    sweep_alpha: (f64, f64, f64),
    sweep_beta: (f64, f64, f64),
    levels: Vec<usize>,
    compare_a: MeanSpec,
    compare_b: MeanSpec,
    compare_hat: MeanSpec,
}

fn parse_domain(text: &str) -> Result<AxisBox, CliError> {
    let mut lo = Vec::new();
    let mut hi = Vec::new();
    for part in text.split(';') {
        let (a, b) = part
            .split_once(',')
            .ok_or_else(|| CliError::Config(format!("domain part '{part}' is not 'lo,hi'")))?;
        let a: f64 = a.trim().parse().map_err(|_| CliError::Config(format!("bad domain bound '{a}'")))?;
        let b: f64 = b.trim().parse().map_err(|_| CliError::Config(format!("bad domain bound '{b}'")))?;
        if !(a < b) {
            return config_err(format!("domain part '{part}' is empty"));
        }
        lo.push(a);
        hi.push(b);
    }
    if lo.is_empty() || lo.len() > 3 {
        return config_err("domain must have 1 to 3 'lo,hi' parts separated by ';'");
    }
    Ok(AxisBox::new(&lo, &hi))
}

fn parse_range(text: &str) -> Result<(f64, f64, f64), CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return config_err(format!("range '{text}' is not 'lo:hi:step'"));
    }
    let lo: f64 = parts[0].trim().parse().map_err(|_| CliError::Config(format!("bad range bound '{}'", parts[0])))?;
    let hi: f64 = parts[1].trim().parse().map_err(|_| CliError::Config(format!("bad range bound '{}'", parts[1])))?;
    let step: f64 = parts[2].trim().parse().map_err(|_| CliError::Config(format!("bad range step '{}'", parts[2])))?;
    if !(step > 0.0) || hi < lo {
        return config_err(format!("range '{text}' is empty or has a non-positive step"));
    }
    Ok((lo, hi, step))
}

fn expand_range((lo, hi, step): (f64, f64, f64)) -> Vec<f64> {
    let mut out = Vec::new();
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    for k in 0..=n {
        out.push(lo + k as f64 * step);
    }
    out
}

fn parse_mean_list(text: &str) -> Result<Vec<MeanSpec>, CliError> {
    // 'general:a,b' contains a comma, so split on commas not followed by a digit-only tail
    let mut out = Vec::new();
    let mut buffer = String::new();
    for piece in text.split(',') {
        if buffer.is_empty() {
            buffer = piece.trim().to_string();
        } else {
            buffer = format!("{buffer},{}", piece.trim());
        }
        if buffer.starts_with("general:") && !buffer.contains(',') {
            continue; // wait for the second parameter
        }
        out.push(
            buffer
                .parse::<MeanSpec>()
                .map_err(|e| CliError::Config(e.to_string()))?,
        );
        buffer.clear();
    }
    if !buffer.is_empty() {
        return config_err(format!("dangling mean fragment '{buffer}'"));
    }
    if out.is_empty() {
        return config_err("empty mean list");
    }
    Ok(out)
}

fn build_config(pairs: Vec<(String, String)>) -> Result<RunConfig, CliError> {
    let mut keys = KeyMap::default();
    for (k, v) in pairs {
        keys.insert(&k, &v);
    }

    let preset = keys.take("preset");
    let (mut problem, reference_default) = match preset.as_deref() {
        None => (
            Problem {
                domain: AxisBox::interval(0.0, 1.0),
                potential: ScalarField::Constant(0.0),
                source: ScalarField::Constant(0.0),
                diffusion: ScalarField::Constant(1.0),
                dirichlet: None,
            },
            false,
        ),
        Some("example1") => (presets::example1(), true),
        Some("example2") => (presets::example2(), true),
        Some(other) => return config_err(format!("unknown preset '{other}'")),
    };

    if let Some(text) = keys.take("problem.domain") {
        problem.domain = parse_domain(&text)?;
    }
    let take_field = |keys: &mut KeyMap, key: &str| -> Result<Option<ScalarField>, CliError> {
        match keys.take(key) {
            None => Ok(None),
            Some(text) => ScalarField::parse(&text)
                .map(Some)
                .map_err(|e| CliError::Config(format!("key '{key}': {e}"))),
        }
    };
    if let Some(f) = take_field(&mut keys, "problem.V")? {
        problem.potential = f;
    }
    if let Some(f) = take_field(&mut keys, "problem.f")? {
        problem.source = f;
    }
    if let Some(f) = take_field(&mut keys, "problem.kappa")? {
        problem.diffusion = f;
    }

    let d_left: Option<f64> = keys.take_parsed("problem.dirichlet.left")?;
    let d_right: Option<f64> = keys.take_parsed("problem.dirichlet.right")?;
    let d_expr = keys.take("problem.dirichlet");
    match (d_left, d_right, d_expr) {
        (None, None, None) => {}
        (Some(l), Some(r), None) => {
            let (a, b) = (problem.domain.lo[0], problem.domain.hi[0]);
            let mid = 0.5 * (a + b);
            problem.dirichlet = Some(ScalarField::func(move |p| if p[0] < mid { l } else { r }));
        }
        (None, None, Some(text)) => {
            problem.dirichlet = Some(
                ScalarField::parse(&text)
                    .map_err(|e| CliError::Config(format!("key 'problem.dirichlet': {e}")))?,
            );
        }
        _ => {
            return config_err(
                "give either both problem.dirichlet.left/right or a single problem.dirichlet expression",
            )
        }
    }

    let mesh_kind = match keys.take("mesh.kind").as_deref() {
        None | Some("interval") => MeshKindCfg::Interval,
        Some("cubic") => MeshKindCfg::Cubic,
        Some(other) => return config_err(format!("unknown mesh.kind '{other}'")),
    };
    let n_nodes: usize = keys.take_parsed("mesh.n")?.unwrap_or(1025);
    if n_nodes < 3 {
        return config_err(format!("mesh.n = {n_nodes} is too small (need >= 3 nodes)"));
    }
    let h_cubic: Option<f64> = keys.take_parsed("mesh.h")?;
    if mesh_kind == MeshKindCfg::Cubic && h_cubic.is_none() {
        return config_err("mesh.kind = cubic needs mesh.h");
    }

    let mean = match keys.take("mean") {
        None => MeanSpec::ScharfetterGummel,
        Some(text) => text.parse().map_err(|e: crate::means::MeanError| CliError::Config(e.to_string()))?,
    };
    let means = match keys.take("means") {
        None => vec![
            MeanSpec::ScharfetterGummel,
            MeanSpec::Geometric,
            MeanSpec::Arithmetic,
            MeanSpec::Harmonic,
        ],
        Some(text) => parse_mean_list(&text)?,
    };

    let ref_n: Option<usize> = keys.take_parsed("reference.n_grid")?;
    let ref_tol: Option<f64> = keys.take_parsed("reference.tol")?;
    let ref_enabled: Option<bool> = keys.take_parsed("reference.enabled")?;
    let reference = if ref_enabled == Some(false) {
        None
    } else if reference_default || ref_n.is_some() || ref_tol.is_some() || ref_enabled == Some(true) {
        Some((ref_n.unwrap_or(presets::REFERENCE_GRID), ref_tol.unwrap_or(1e-12)))
    } else {
        None
    };
    if let Some((n, tol)) = reference {
        if n < 1000 || !(tol > 0.0) {
            return config_err(format!(
                "reference needs n_grid >= 1000 and tol > 0, got ({n}, {tol})"
            ));
        }
    }

    let output = keys.take("output").unwrap_or_else(|| "-".to_string());
    let seed: u64 = keys.take_parsed("seed")?.unwrap_or(0);
    let sweep_alpha = match keys.take("sweep.alpha") {
        None => (-4.0, 6.0, 0.5),
        Some(text) => parse_range(&text)?,
    };
    let sweep_beta = match keys.take("sweep.beta") {
        None => (-4.0, 6.0, 0.5),
        Some(text) => parse_range(&text)?,
    };
    let levels = match keys.take("levels") {
        None => vec![33, 65, 129, 257, 513, 1025],
        Some(text) => {
            let mut out = Vec::new();
            for part in text.split(',') {
                let n: usize = part.trim().parse().map_err(|_| {
                    CliError::Config(format!("bad level '{part}' in 'levels'"))
                })?;
                if n < 3 {
                    return config_err(format!("level {n} is too small"));
                }
                out.push(n);
            }
            out
        }
    };
    let compare_a = match keys.take("compare.a") {
        None => MeanSpec::ScharfetterGummel,
        Some(t) => t.parse().map_err(|e: crate::means::MeanError| CliError::Config(e.to_string()))?,
    };
    let compare_b = match keys.take("compare.b") {
        None => MeanSpec::Geometric,
        Some(t) => t.parse().map_err(|e: crate::means::MeanError| CliError::Config(e.to_string()))?,
    };
    let compare_hat = match keys.take("compare.hat") {
        None => compare_b,
        Some(t) => t.parse().map_err(|e: crate::means::MeanError| CliError::Config(e.to_string()))?,
    };

    keys.reject_leftovers()?;

    Ok(RunConfig {
        problem,
        mesh_kind,
        n_nodes,
        h_cubic,
        mean,
        means,
        reference,
        output,
        seed,
        sweep_alpha,
        sweep_beta,
        levels,
        compare_a,
        compare_b,
        compare_hat,
    })
}

// ------------------------------------------------------------ subcommands

fn write_output(path: &str, content: &str) -> Result<(), CliError> {
    if path == "-" {
        print!("{content}");
        Ok(())
    } else {
        std::fs::write(path, content)
            .map_err(|e| CliError::Config(format!("cannot write '{path}': {e}")))
    }
}

fn interval_mesh(config: &RunConfig, n_nodes: usize) -> Result<Arc<Mesh>, CliError> {
    let (a, b) = (config.problem.domain.lo[0], config.problem.domain.hi[0]);
    build_interval_mesh(a, b, IntervalLayout::UniformNodes(n_nodes))
        .map(Arc::new)
        .map_err(|e| CliError::Config(e.to_string()))
}

fn build_mesh(config: &RunConfig) -> Result<Arc<Mesh>, CliError> {
    match config.mesh_kind {
        MeshKindCfg::Interval => {
            if config.problem.domain.dim != 1 {
                return config_err("interval meshes need a 1D domain");
            }
            interval_mesh(config, config.n_nodes)
        }
        MeshKindCfg::Cubic => build_cubic_mesh(&config.problem.domain, config.h_cubic.unwrap())
            .map(Arc::new)
            .map_err(|e| CliError::Config(e.to_string())),
    }
}

fn build_reference(config: &RunConfig) -> Result<Option<Arc<ReferenceSolution>>, CliError> {
    match config.reference {
        None => Ok(None),
        Some((n_grid, tol)) => {
            if config.problem.domain.dim != 1 {
                return config_err("reference solutions require a 1D problem");
            }
            shoot_reference(&config.problem, n_grid, tol)
                .map(|r| Some(Arc::new(r)))
                .map_err(map_reference)
        }
    }
}

fn solve_system(system: &DiscreteSystem) -> Result<DiscreteField, CliError> {
    system
        .solve(DEFAULT_TOL, default_max_iter(system.n_unknowns()))
        .map(|(field, _)| field)
        .map_err(|e| CliError::Numeric(e.to_string()))
}

fn report_line(r: &ErrorReport) -> String {
    format!(
        "mean={} n={} h={} err_u_L2={} err_u_L2pi={} err_flux_L2={} err_flux_L2S={} err_HT={}",
        r.mean,
        r.n,
        fmt17(r.h),
        fmt17(r.err_u_l2),
        fmt17(r.err_u_l2pi),
        fmt17(r.err_flux_l2),
        fmt17(r.err_flux_l2s),
        fmt17(r.err_ht)
    )
}

fn cmd_solve(config: &RunConfig) -> Result<(), CliError> {
    let mesh = build_mesh(config)?;
    let system = assemble(&config.problem, mesh.clone(), config.mean).map_err(map_assembly)?;
    let u_rel = solve_system(&system)?;
    let u = system.to_density(&u_rel);

    let mut csv = String::new();
    let coords = ["x", "y", "z"];
    csv.push_str(&coords[..mesh.dim].join(","));
    csv.push_str(",u,U\n");
    for c in &mesh.cells {
        for d in 0..mesh.dim {
            csv.push_str(&fmt17(c.center[d]));
            csv.push(',');
        }
        csv.push_str(&fmt17(u.values[c.index]));
        csv.push(',');
        csv.push_str(&fmt17(u_rel.values[c.index]));
        csv.push('\n');
    }
    write_output(&config.output, &csv)?;

    if let Some(reference) = build_reference(config)? {
        let report = error_report(&system, &u_rel, &reference)
            .map_err(|e| CliError::Numeric(e.to_string()))?;
        eprintln!("{}", report_line(&report));
    }
    Ok(())
}

fn cmd_sweep(config: &RunConfig) -> Result<(), CliError> {
    if config.mesh_kind != MeshKindCfg::Interval {
        return config_err("sweep runs on interval meshes");
    }
    let reference = build_reference(config)?
        .ok_or_else(|| CliError::Config("sweep needs a configured reference".into()))?;
    let mesh = build_mesh(config)?;
    let alphas = expand_range(config.sweep_alpha);
    let betas = expand_range(config.sweep_beta);
    let cells: Vec<(f64, f64)> = alphas
        .iter()
        .flat_map(|&a| betas.iter().map(move |&b| (a, b)))
        .collect();

    let problem = &config.problem;
    let rows: Vec<Result<ErrorReport, CliError>> = cells
        .par_iter()
        .map(|&(alpha, beta)| {
            let mean = MeanSpec::General { alpha, beta };
            let system = assemble(problem, mesh.clone(), mean).map_err(map_assembly)?;
            let u_rel = solve_system(&system)?;
            error_report(&system, &u_rel, &reference).map_err(|e| CliError::Numeric(e.to_string()))
        })
        .collect();

    let mut csv = String::from("alpha,beta,err_u_L2,err_u_L2pi,err_flux_L2,err_flux_L2S\n");
    let mut failed = 0usize;
    for ((alpha, beta), row) in cells.iter().zip(&rows) {
        match row {
            Ok(r) => {
                csv.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    fmt17(*alpha),
                    fmt17(*beta),
                    fmt17(r.err_u_l2),
                    fmt17(r.err_u_l2pi),
                    fmt17(r.err_flux_l2),
                    fmt17(r.err_flux_l2s)
                ));
            }
            Err(_) => {
                failed += 1;
                csv.push_str(&format!(
                    "{},{},nan,nan,nan,nan\n",
                    fmt17(*alpha),
                    fmt17(*beta)
                ));
            }
        }
    }
    write_output(&config.output, &csv)?;
    if failed > 0 {
        return Err(CliError::Numeric(format!("{failed} sweep cells failed")));
    }
    Ok(())
}

fn cmd_convergence(config: &RunConfig) -> Result<(), CliError> {
    if config.mesh_kind != MeshKindCfg::Interval {
        return config_err("convergence studies run on interval meshes");
    }
    if config.levels.len() < 3 {
        return config_err("convergence needs at least 3 levels");
    }
    let reference = build_reference(config)?
        .ok_or_else(|| CliError::Config("convergence needs a configured reference".into()))?;
    let cells: Vec<(MeanSpec, usize)> = config
        .means
        .iter()
        .flat_map(|&m| config.levels.iter().map(move |&n| (m, n)))
        .collect();
    let problem = &config.problem;
    let rows: Vec<Result<ErrorReport, CliError>> = cells
        .par_iter()
        .map(|&(mean, n)| {
            let mesh = interval_mesh(config, n)?;
            let system = assemble(problem, mesh, mean).map_err(map_assembly)?;
            let u_rel = solve_system(&system)?;
            error_report(&system, &u_rel, &reference).map_err(|e| CliError::Numeric(e.to_string()))
        })
        .collect();

    let mut csv =
        String::from("mean,n,h,err_u_L2,err_u_L2pi,err_flux_L2,err_flux_L2S,err_HT,eoc_u,eoc_flux\n");
    let mut idx = 0usize;
    for &mean in &config.means {
        let mut level_rows = Vec::new();
        for &n in &config.levels {
            match &rows[idx] {
                Ok(r) => {
                    csv.push_str(&format!(
                        "{mean},{n},{},{},{},{},{},{},nan,nan\n",
                        fmt17(r.h),
                        fmt17(r.err_u_l2),
                        fmt17(r.err_u_l2pi),
                        fmt17(r.err_flux_l2),
                        fmt17(r.err_flux_l2s),
                        fmt17(r.err_ht)
                    ));
                    level_rows.push(r.clone());
                }
                Err(e) => return Err(CliError::Numeric(format!("mean {mean}, n {n}: {e}"))),
            }
            idx += 1;
        }
        let eoc_u = fit_eoc(&level_rows.iter().map(|r| (r.h, r.err_u_l2)).collect::<Vec<_>>())
            .map_err(|e| CliError::Numeric(e.to_string()))?;
        let eoc_flux = fit_eoc(&level_rows.iter().map(|r| (r.h, r.err_flux_l2)).collect::<Vec<_>>())
            .map_err(|e| CliError::Numeric(e.to_string()))?;
        csv.push_str(&format!(
            "{mean},0,nan,nan,nan,nan,nan,nan,{},{}\n",
            fmt17(eoc_u),
            fmt17(eoc_flux)
        ));
    }
    write_output(&config.output, &csv)
}

fn cmd_compare(config: &RunConfig) -> Result<(), CliError> {
    if config.mesh_kind != MeshKindCfg::Interval {
        return config_err("compare runs on interval meshes");
    }
    if config.levels.len() < 3 {
        return config_err("compare needs at least 3 levels");
    }
    let problem = &config.problem;
    let gaps: Vec<Result<(usize, f64, f64, f64), CliError>> = config
        .levels
        .par_iter()
        .map(|&n| {
            let mesh = interval_mesh(config, n)?;
            let sys_a = assemble(problem, mesh.clone(), config.compare_a).map_err(map_assembly)?;
            let sys_b = assemble(problem, mesh.clone(), config.compare_b).map_err(map_assembly)?;
            let sol_a = solve_system(&sys_a)?;
            let sol_b = solve_system(&sys_b)?;
            let cmp = compare_schemes(&sys_a, &sys_b, &sol_a, &sol_b, config.compare_hat)
                .map_err(|e| CliError::Numeric(e.to_string()))?;
            Ok((n, mesh.diameter, cmp.flux_gap, cmp.bound_rhs))
        })
        .collect();

    let mut csv = String::from("n,h,flux_gap,bound_rhs,gap_slope\n");
    let mut fit_rows = Vec::new();
    for row in gaps {
        let (n, h, gap, bound) = row?;
        csv.push_str(&format!("{n},{},{},{},nan\n", fmt17(h), fmt17(gap), fmt17(bound)));
        if gap > 0.0 {
            fit_rows.push((h, gap));
        }
    }
    let slope = if fit_rows.len() >= 3 {
        fit_eoc(&fit_rows).unwrap_or(f64::NAN)
    } else {
        f64::NAN
    };
    csv.push_str(&format!("0,nan,nan,nan,{}\n", fmt17(slope)));
    write_output(&config.output, &csv)
}

fn cmd_reference(config: &RunConfig) -> Result<(), CliError> {
    let reference = build_reference(config)?
        .ok_or_else(|| CliError::Config("the reference command needs reference settings".into()))?;
    let mut csv = String::from("x,u,J\n");
    for k in 0..reference.grid.len() {
        csv.push_str(&format!(
            "{},{},{}\n",
            fmt17(reference.grid[k]),
            fmt17(reference.u[k]),
            fmt17(reference.flux[k])
        ));
    }
    write_output(&config.output, &csv)
}

fn cmd_check(config: &RunConfig) -> Result<(), CliError> {
    let outcomes = run_property_suite(config.seed);
    let mut failed = 0usize;
    for c in &outcomes {
        if c.passed {
            println!("ok   {}", c.name);
        } else {
            println!("FAIL {}: {}", c.name, c.details);
            failed += 1;
        }
    }
    if failed > 0 {
        return Err(CliError::Numeric(format!("{failed} checks failed")));
    }
    Ok(())
}

// ------------------------------------------------------------- entry point

const USAGE: &str = "usage: stolarsky-fv <solve|sweep|convergence|compare|reference|check> [--config FILE] [--KEY VALUE | --KEY=VALUE ...]

Keys (config file lines 'KEY = VALUE' or flags '--KEY VALUE'):
  preset                      example1 | example2
  problem.domain              e.g. 0,1  (cubic: 0,1;0,1)
  problem.V / problem.f / problem.kappa   expressions in x[,y,z]
  problem.dirichlet.left/.right           boundary values (1D)
  problem.dirichlet                       boundary expression
  mesh.kind                   interval | cubic
  mesh.n                      node count (interval), default 1025
  mesh.h                      cell width (cubic)
  mean / means                interface mean(s): max quadratic arithmetic
                              logarithmic geometric|sqra scharfetter-gummel|sg
                              harmonic min general:A,B
  reference.n_grid            shooting grid nodes (default 136474)
  reference.tol               shooting tolerance (default 1e-12)
  reference.enabled           true | false
  levels                      comma list of node counts for ladders
  sweep.alpha / sweep.beta    ranges lo:hi:step (default -4:6:0.5)
  compare.a / compare.b / compare.hat     means for the compare command
  output                      CSV path or '-' (stdout)
  seed                        integer for the check suite
";

fn parse_cli(args: &[String]) -> Result<(String, Vec<(String, String)>), CliError> {
    if args.is_empty() {
        return config_err(format!("missing subcommand\n{USAGE}"));
    }
    let sub = args[0].clone();
    let mut pairs = Vec::new();
    let mut config_pairs = Vec::new();
    let mut i = 1;
    while i < args.len() {
        let arg = &args[i];
        let stripped = arg
            .strip_prefix("--")
            .ok_or_else(|| CliError::Config(format!("expected a --flag, got '{arg}'")))?;
        let (key, value) = if let Some((k, v)) = stripped.split_once('=') {
            i += 1;
            (k.to_string(), v.to_string())
        } else {
            if i + 1 >= args.len() {
                return config_err(format!("flag '--{stripped}' needs a value"));
            }
            i += 2;
            (stripped.to_string(), args[i - 1].clone())
        };
        if key == "config" {
            let text = std::fs::read_to_string(&value)
                .map_err(|e| CliError::Config(format!("cannot read '{value}': {e}")))?;
            config_pairs.extend(parse_config_text(&text)?);
        } else {
            pairs.push((key, strip_quotes(&value).to_string()));
        }
    }
    // file first, flags override
    config_pairs.extend(pairs);
    Ok((sub, config_pairs))
}

/// Run the CLI; returns the process exit code.
pub fn main_with_args(args: Vec<String>) -> i32 {
    let (sub, pairs) = match parse_cli(&args) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("{e}");
            return e.exit_code();
        }
    };
    if sub == "help" || sub == "--help" || sub == "-h" {
        print!("{USAGE}");
        return 0;
    }
    let result = build_config(pairs).and_then(|config| match sub.as_str() {
        "solve" => cmd_solve(&config),
        "sweep" => cmd_sweep(&config),
        "convergence" => cmd_convergence(&config),
        "compare" => cmd_compare(&config),
        "reference" => cmd_reference(&config),
        "check" => cmd_check(&config),
        other => config_err(format!("unknown subcommand '{other}'\n{USAGE}")),
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_text_parses_and_rejects_garbage() {
        let pairs = parse_config_text("# comment\nproblem.V = \"2*sin(2*pi*x)\"\nmesh.n = 33\n").unwrap();
        assert_eq!(pairs.len(), 2);
        assert_eq!(pairs[0].1, "2*sin(2*pi*x)");
        assert!(parse_config_text("just words").is_err());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = build_config(vec![("mesh.m".into(), "12".into())]).unwrap_err();
        assert!(matches!(err, CliError::Config(_)));
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn preset_defaults_propagate() {
        let cfg = build_config(vec![("preset".into(), "example1".into())]).unwrap();
        assert_eq!(cfg.reference, Some((presets::REFERENCE_GRID, 1e-12)));
        assert_eq!(cfg.n_nodes, 1025);
        assert!((cfg.problem.potential.eval_1d(0.25).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn mean_lists_with_general_entries() {
        let means = parse_mean_list("sg,sqra,general:3.2,1,harmonic").unwrap();
        assert_eq!(means.len(), 4);
        assert_eq!(means[2], MeanSpec::General { alpha: 3.2, beta: 1.0 });
    }

    #[test]
    fn ranges_expand_inclusively() {
        assert_eq!(expand_range((0.0, 1.0, 0.5)), vec![0.0, 0.5, 1.0]);
        assert_eq!(expand_range((2.0, 2.0, 1.0)), vec![2.0]);
        assert!(parse_range("0:1").is_err());
    }
}
