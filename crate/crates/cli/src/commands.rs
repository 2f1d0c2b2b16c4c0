use std::f64::consts::FRAC_PI_2;
use std::io::Write;

use gravwit::jaynes_cummings::{jc_witness, jc_witness_quadratic};
use gravwit::linalg::CMatrix;
use gravwit::locc::{classical_decomposition, random_separable, realize_dynamics_pair, ClassicalRealization};
use gravwit::physical::{
    min_negative_time, oscillator_witness, qubit_osc_coupling, qubit_qubit_coupling, required_probe_mass,
    QubitOscillatorSetup, QubitQubitSetup,
};
use gravwit::qubit_gravity::{dynamics_pair, DynamicsPair, TwoQubitProtocol};
use gravwit::sdp::{build_witness_sdp, solve_sdp, sweep, verify_solution, SolverSettings, SolverStatus};
use gravwit::witness::{analytical_closed_form, analytical_witness, certify_witness, CorrelatorSet, WitnessOperators};
use rayon::prelude::*;
use serde_json::json;

use crate::config::{self, ThetaGrid};
use crate::{Cli, CliError, Command, GridArgs};

/// Tolerance of the analytical-vs-closed-form column check.
const CLOSED_FORM_TOL: f64 = 1e-9;
/// Lowest witness value accepted on classical-memory dynamics.
const NEGATIVE_CONTROL_TOL: f64 = -1e-7;

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn io_err(e: std::io::Error) -> CliError {
    CliError::Usage(format!("write failed: {e}"))
}

fn write_csv(out: &mut dyn Write, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
    writeln!(out, "{}", header.join(",")).map_err(io_err)?;
    for row in rows {
        writeln!(out, "{}", row.join(",")).map_err(io_err)?;
    }
    Ok(())
}

fn write_json(out: &mut dyn Write, value: &serde_json::Value) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Usage(e.to_string()))?;
    writeln!(out, "{text}").map_err(io_err)
}

/// Explicit list, else a min/max/steps grid if any bound is given, else `default`.
fn resolve_grid(flags: &GridArgs, cfg: &ThetaGrid, default: Vec<f64>) -> Result<Vec<f64>, CliError> {
    let lo = flags.theta_min.or(cfg.theta_min);
    let hi = flags.theta_max.or(cfg.theta_max);
    let steps = flags.theta_steps.or(cfg.theta_steps);
    let grid = if let Some(list) = flags.theta.clone().or_else(|| cfg.theta.clone()) {
        list
    } else if lo.is_none() && hi.is_none() && steps.is_none() {
        default
    } else {
        let lo = lo.unwrap_or(default[0]);
        let hi = hi.unwrap_or(default[default.len() - 1]);
        let steps = steps.unwrap_or(default.len());
        match steps {
            0 => Vec::new(),
            1 => vec![lo],
            n => linspace(lo, hi, n),
        }
    };
    if grid.is_empty() {
        return Err(CliError::Usage("theta grid is empty".into()));
    }
    if let Some(bad) = grid.iter().find(|t| !t.is_finite()) {
        return Err(CliError::Usage(format!("non-finite theta {bad}")));
    }
    Ok(grid)
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
}

/// `0.15, 0.30, …, 1.35, 1.40`.
fn default_sweep_grid() -> Vec<f64> {
    (1..=9).map(|k| 0.15 * k as f64).chain([1.40]).collect()
}

fn pool(workers: Option<usize>) -> Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    match workers {
        Some(0) => return Err(CliError::Usage("--workers must be at least 1".into())),
        Some(n) => builder = builder.num_threads(n),
        None => {}
    }
    builder.build().map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))
}

fn protocol_pair(theta: f64) -> Result<DynamicsPair, CliError> {
    Ok(dynamics_pair(&TwoQubitProtocol::new(theta))?)
}

pub fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let cfg_path = cli.config.as_deref();
    match &cli.command {
        Command::TwoQubit { grid, lambda } => {
            let cfg: config::TwoQubitConfig = config::load(cfg_path)?;
            let thetas = resolve_grid(grid, &cfg.grid, linspace(0.0, FRAC_PI_2, 50))?;
            let lambda = lambda.or(cfg.lambda).unwrap_or(1.0);
            two_qubit(&thetas, lambda, cli.workers, out)
        }
        Command::SdpSweep { grid, max_iter } => {
            let cfg: config::SdpSweepConfig = config::load(cfg_path)?;
            let thetas = resolve_grid(grid, &cfg.grid, default_sweep_grid())?;
            let defaults = SolverSettings::default();
            let settings = SolverSettings {
                tol: cli.tol.or(cfg.tol).unwrap_or(defaults.tol),
                max_iter: max_iter.or(cfg.max_iter).unwrap_or(defaults.max_iter),
                ..defaults
            };
            sdp_sweep(&thetas, &settings, cli.workers.or(cfg.workers), out)
        }
        Command::Jc { g, delta, quadratic } => {
            let cfg: config::JcConfig = config::load(cfg_path)?;
            let gs = g.clone().or(cfg.g).unwrap_or_else(|| vec![0.0, 0.05, 0.25, 0.5]);
            let deltas = delta.clone().or(cfg.delta).unwrap_or_else(|| vec![1.0]);
            let quadratic = *quadratic || cfg.quadratic.unwrap_or(false);
            jc(&gs, &deltas, quadratic, cli.workers.or(cfg.workers), out)
        }
        Command::Estimate => {
            let cfg: config::EstimateConfig = config::load(cfg_path)?;
            estimate(&cfg, out)
        }
        Command::LoccCheck { count, memory_dim, include_identity } => {
            let cfg: config::LoccConfig = config::load(cfg_path)?;
            let defaults = SolverSettings::default();
            let opts = LoccOptions {
                seed: cli.seed.or(cfg.seed).unwrap_or(42),
                count: count.or(cfg.count).unwrap_or(50),
                memory_dim: memory_dim.or(cfg.memory_dim).unwrap_or(2),
                include_identity: *include_identity || cfg.include_identity.unwrap_or(false),
                settings: SolverSettings { tol: cli.tol.or(cfg.tol).unwrap_or(defaults.tol), ..defaults },
            };
            locc_check(&opts, cli.workers.or(cfg.workers), out)
        }
    }
}

fn two_qubit(thetas: &[f64], lambda: f64, workers: Option<usize>, out: &mut dyn Write) -> Result<(), CliError> {
    if !(lambda > 0.0) {
        return Err(CliError::Usage(format!("lambda must be positive, got {lambda}")));
    }
    let cert = certify_witness(&WitnessOperators::analytical().scaled(lambda))?;
    let rows: Vec<(f64, CorrelatorSet, f64, f64)> = pool(workers)?.install(|| {
        thetas
            .par_iter()
            .map(|&theta| {
                let corrs = CorrelatorSet::from_pair(&protocol_pair(theta)?)?;
                let w = analytical_witness(&corrs, lambda)?;
                Ok((theta, corrs, w, analytical_closed_form(theta, lambda)))
            })
            .collect::<Result<_, CliError>>()
    })?;
    let table: Vec<Vec<String>> = rows
        .iter()
        .map(|(t, c, w, cf)| {
            vec![num(*t), num(c.c_z1), num(c.c_xx2), num(c.c_zz2), num(*w), num(*cf), cert.valid.to_string()]
        })
        .collect();
    write_csv(
        out,
        &["theta", "c_z1", "c_xx2", "c_zz2", "w_analytical", "closed_form_w", "certificate_valid"],
        &table,
    )?;
    let worst = rows.iter().map(|r| (r.2 - r.3).abs()).fold(0.0, f64::max);
    if worst > CLOSED_FORM_TOL * lambda.max(1.0) {
        return Err(CliError::Contract(format!("analytical and closed-form witness differ by {worst:e}")));
    }
    if !cert.valid {
        return Err(CliError::Contract("witness certificate failed".into()));
    }
    Ok(())
}

fn sdp_sweep(thetas: &[f64], settings: &SolverSettings, workers: Option<usize>, out: &mut dyn Write) -> Result<(), CliError> {
    let points = pool(workers)?.install(|| sweep(thetas, settings))?;
    let table: Vec<Vec<String>> = points
        .iter()
        .map(|p| {
            let s = &p.solution;
            vec![
                num(p.theta),
                num(s.objective),
                s.status.to_string(),
                s.iterations.to_string(),
                num(s.primal_residual),
                num(s.dual_residual),
            ]
        })
        .collect();
    write_csv(out, &["theta", "w_star", "status", "iterations", "primal_res", "dual_res"], &table)?;
    let unconverged = points.iter().filter(|p| p.solution.status != SolverStatus::Optimal).count();
    if unconverged > 0 {
        eprintln!("warning: {unconverged} of {} points did not converge", points.len());
    }
    let rejected: Vec<f64> = points
        .iter()
        .filter(|p| p.solution.status == SolverStatus::Optimal && !p.verification.feasible)
        .map(|p| p.theta)
        .collect();
    if !rejected.is_empty() {
        return Err(CliError::Contract(format!("independent verification failed at theta {rejected:?}")));
    }
    Ok(())
}

fn jc(gs: &[f64], deltas: &[f64], quadratic: bool, workers: Option<usize>, out: &mut dyn Write) -> Result<(), CliError> {
    let grid: Vec<(f64, f64)> = gs.iter().flat_map(|&g| deltas.iter().map(move |&d| (g, d))).collect();
    if grid.is_empty() {
        return Err(CliError::Usage("(g, delta) grid is empty".into()));
    }
    if let Some((g, d)) = grid.iter().find(|(g, d)| (*g == 0.0 && *d == 0.0) || !g.is_finite() || !d.is_finite()) {
        return Err(CliError::Usage(format!("degenerate grid point g = {g}, delta = {d}")));
    }
    let rows = pool(workers)?.install(|| {
        grid.par_iter()
            .map(|&(g, d)| jc_witness(g, d).map_err(CliError::from))
            .collect::<Result<Vec<_>, _>>()
    })?;
    let mut header = vec!["g", "delta", "w_measured", "w_closed_form", "discrepancy"];
    if quadratic {
        header.push("w_quadratic");
    }
    let table: Vec<Vec<String>> = rows
        .iter()
        .map(|w| {
            let mut row = vec![num(w.g), num(w.delta), num(w.measured), num(w.closed_form), num(w.discrepancy)];
            if quadratic {
                let q = if w.delta == 0.0 { f64::NAN } else { jc_witness_quadratic(w.g, w.delta) };
                row.push(num(q));
            }
            row
        })
        .collect();
    write_csv(out, &header, &table)
}

fn estimate(cfg: &config::EstimateConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let q_ref = QubitQubitSetup::reference();
    let q_in = &cfg.qubit_qubit;
    let qq = QubitQubitSetup {
        big_m: q_in.big_m.unwrap_or(q_ref.big_m),
        m: q_in.m.unwrap_or(q_ref.m),
        delta_big_x: q_in.delta_big_x.unwrap_or(q_ref.delta_big_x),
        delta_x: q_in.delta_x.unwrap_or(q_ref.delta_x),
        d: q_in.d.unwrap_or(q_ref.d),
    };
    let g_qq = qubit_qubit_coupling(&qq)?;
    let tau_min = min_negative_time(g_qq)?;

    let o = &cfg.oscillator;
    let geometry = QubitOscillatorSetup::from_surface_distances(
        1e-14,
        o.big_m.unwrap_or(1e-6),
        o.frequency.unwrap_or(10.0),
        o.surface_l.unwrap_or(100e-6),
        o.surface_r.unwrap_or(350e-6),
        o.density.unwrap_or(gravwit::physical::TUNGSTEN_DENSITY),
    )?;
    let target = o.target_w.unwrap_or(1e-6);
    let tau = o.tau.unwrap_or(100.0);
    let mass = required_probe_mass(&geometry, target, tau)?;
    let sized = QubitOscillatorSetup { m: mass, ..geometry };
    let report = json!({
        "qubit_qubit": {
            "inputs": qq,
            "g": g_qq,
            "tau_min": tau_min,
        },
        "oscillator": {
            "inputs": {
                "big_m": geometry.big_m,
                "frequency": geometry.frequency,
                "radius": geometry.radius(),
                "d_l": geometry.d_l,
                "d_r": geometry.d_r,
                "density": geometry.density,
                "target_w": target,
                "tau": tau,
            },
            "required_mass": mass,
            "g": qubit_osc_coupling(&sized)?,
            "witness_at_required_mass": oscillator_witness(&sized, tau)?,
        },
    });
    write_json(out, &report)
}

struct LoccOptions {
    seed: u64,
    count: usize,
    memory_dim: usize,
    include_identity: bool,
    settings: SolverSettings,
}

fn locc_check(opts: &LoccOptions, workers: Option<usize>, out: &mut dyn Write) -> Result<(), CliError> {
    if opts.count == 0 {
        return Err(CliError::Usage("count must be at least 1".into()));
    }
    if opts.memory_dim < 1 {
        return Err(CliError::Usage("memory_dim must be at least 1".into()));
    }
    let identity = ClassicalRealization {
        kraus_first: vec![CMatrix::identity(2)],
        conditional_maps: vec![vec![CMatrix::identity(2)]],
        branch_probabilities: vec![1.0],
    };
    let random = opts.count - usize::from(opts.include_identity);
    let values: Vec<(f64, f64)> = pool(workers)?.install(|| {
        (0..opts.count)
            .into_par_iter()
            .map(|k| {
                let real = if opts.include_identity && k == 0 {
                    identity.clone()
                } else {
                    let sep = random_separable(opts.seed.wrapping_add(k as u64), 3, 2, opts.memory_dim);
                    classical_decomposition(&sep)?
                };
                let pair = realize_dynamics_pair(&real)?;
                let analytical = analytical_witness(&CorrelatorSet::from_pair(&pair)?, 1.0)?;
                let problem = build_witness_sdp(&pair);
                let sol = solve_sdp(&problem, &opts.settings)?;
                let verified = verify_solution(&problem, &sol)?;
                Ok((analytical, verified.certified_w))
            })
            .collect::<Result<_, CliError>>()
    })?;
    let min_analytical = values.iter().map(|v| v.0).fold(f64::INFINITY, f64::min);
    let min_sdp = values.iter().map(|v| v.1).fold(f64::INFINITY, f64::min);
    let pass = min_analytical >= NEGATIVE_CONTROL_TOL && min_sdp >= NEGATIVE_CONTROL_TOL;
    write_json(
        out,
        &json!({
            "instances": opts.count,
            "random_instances": random,
            "seed": opts.seed,
            "memory_dim": opts.memory_dim,
            "min_analytical_w": min_analytical,
            "min_sdp_w": min_sdp,
            "threshold": NEGATIVE_CONTROL_TOL,
            "pass": pass,
        }),
    )?;
    if !pass {
        return Err(CliError::Contract(format!(
            "classical dynamics scored below {NEGATIVE_CONTROL_TOL}: analytical {min_analytical:e}, sdp {min_sdp:e}"
        )));
    }
    Ok(())
}
