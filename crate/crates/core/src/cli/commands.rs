use std::path::PathBuf;

use nalgebra::Matrix2;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::output::{Report, Table};
use super::spec::{parse_complex, parse_gain, parse_list, parse_state, uniform_grid};
use super::{
    AmplitudeGrid, CliError, Command, EstimatorArgs, Format, MethodArg, OutputArgs, SqueezingGrid,
};
use crate::cloner::{run_averaged, run_single_shot, CloneResult, ClonerConfig};
use crate::comm::{error_curve, Method};
use crate::error::{Error, Result};
use crate::fidelity::{
    ancilla_cov, ancilla_fidelities, enhancement, gaussian_fidelity, maximize_fidelity_numeric,
    optimal_ancilla_squeezing,
};
use crate::gaussian::{GaussianMeasurement, GaussianState};
use crate::sampling::derive_seed;

const DEFAULT_QUAD_ORDER: usize = 40;
const DEFAULT_MC_SAMPLES: usize = 100_000;

fn r_grid(g: &SqueezingGrid) -> Result<Vec<f64>> {
    uniform_grid("r", g.r_min, g.r_max, g.r_step)
}

fn alpha_grid(g: &AmplitudeGrid) -> Result<Vec<f64>> {
    if g.alpha_min < 0.0 {
        return Err(Error::Range {
            name: "alpha-min",
            value: g.alpha_min,
            allowed: "[0, inf)",
        });
    }
    uniform_grid("alpha", g.alpha_min, g.alpha_max, g.alpha_step)
}

fn estimator(e: &EstimatorArgs) -> (Method, usize) {
    match e.method {
        MethodArg::Quad => (Method::Quadrature, e.budget.unwrap_or(DEFAULT_QUAD_ORDER)),
        MethodArg::Mc => (Method::MonteCarlo, e.budget.unwrap_or(DEFAULT_MC_SAMPLES)),
    }
}

fn label(x: f64) -> String {
    x.to_string()
}

fn fig2(eta: f64, grid: &SqueezingGrid) -> Result<(Table, Value)> {
    let rs = r_grid(grid)?;
    let meas = GaussianMeasurement::heterodyne(eta)?;
    let rows = rs
        .par_iter()
        .map(|&r| {
            let f = ancilla_fidelities(&ancilla_cov(0.0, r), meas.cov())?;
            Ok(vec![r, f.optimal, f.vacuum])
        })
        .collect::<Result<Vec<_>>>()?;
    let table = Table {
        columns: vec![
            "r".into(),
            "f_opt_ancilla".into(),
            "f_vacuum_ancilla".into(),
        ],
        rows,
    };
    Ok((table, json!({"command": "fig2", "eta": eta, "r_grid": rs})))
}

fn fig3(etas: &str, grid: &SqueezingGrid) -> Result<(Table, Value)> {
    let etas = parse_list(etas)?;
    let rs = r_grid(grid)?;
    let rows = rs
        .par_iter()
        .map(|&r| {
            let mut row = vec![r];
            for &eta in &etas {
                row.push(enhancement(r, eta)?);
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut columns = vec!["r".to_string()];
    columns.extend(etas.iter().map(|&e| format!("g_eta_{}", label(e))));
    Ok((
        Table { columns, rows },
        json!({"command": "fig3", "etas": etas, "r_grid": rs}),
    ))
}

/// One error-probability curve per `(eta, epsilon)` setting; column `k`
/// draws its seeds from `derive_seed(seed, k)`.
fn comm_table(
    settings: &[(f64, f64)],
    tag: &str,
    alphas: &[f64],
    est: &EstimatorArgs,
) -> Result<Table> {
    let (method, budget) = estimator(est);
    let curves = settings
        .iter()
        .enumerate()
        .map(|(k, &(eta, eps))| {
            error_curve(
                alphas,
                eta,
                eps,
                method,
                budget,
                Some(derive_seed(est.seed, k as u64)),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let mut columns = vec!["alpha".to_string()];
    for &(eta, eps) in settings {
        let v = label(if tag == "eta" { eta } else { eps });
        columns.push(format!("h_e_{tag}_{v}"));
        columns.push(format!("abs_error_{tag}_{v}"));
    }
    let rows = alphas
        .iter()
        .enumerate()
        .map(|(i, &a)| {
            let mut row = vec![a];
            for curve in &curves {
                row.push(curve[i].h_e);
                row.push(curve[i].abs_error);
            }
            row
        })
        .collect();
    Ok(Table { columns, rows })
}

fn estimator_config(e: &EstimatorArgs) -> Value {
    let (method, budget) = estimator(e);
    json!({"method": method, "budget": budget, "seed": e.seed})
}

fn fig4(
    etas: &str,
    epsilon: f64,
    grid: &AmplitudeGrid,
    est: &EstimatorArgs,
) -> Result<(Table, Value)> {
    let etas = parse_list(etas)?;
    let alphas = alpha_grid(grid)?;
    let settings: Vec<(f64, f64)> = etas.iter().map(|&eta| (eta, epsilon)).collect();
    let table = comm_table(&settings, "eta", &alphas, est)?;
    let cfg = json!({
        "command": "fig4", "etas": etas, "epsilon": epsilon,
        "alpha_grid": alphas, "estimator": estimator_config(est),
    });
    Ok((table, cfg))
}

fn fig5(
    eta: f64,
    epsilons: &str,
    grid: &AmplitudeGrid,
    est: &EstimatorArgs,
) -> Result<(Table, Value)> {
    let epsilons = parse_list(epsilons)?;
    let alphas = alpha_grid(grid)?;
    let settings: Vec<(f64, f64)> = epsilons.iter().map(|&eps| (eta, eps)).collect();
    let table = comm_table(&settings, "epsilon", &alphas, est)?;
    let cfg = json!({
        "command": "fig5", "eta": eta, "epsilons": epsilons,
        "alpha_grid": alphas, "estimator": estimator_config(est),
    });
    Ok((table, cfg))
}

fn state_json(state: &GaussianState) -> Value {
    let mean: Vec<f64> = state.mean().iter().copied().collect();
    let cov = state.cov();
    let rows: Vec<Vec<f64>> = (0..cov.nrows())
        .map(|i| cov.row(i).iter().copied().collect())
        .collect();
    json!({"mean": mean, "cov": rows})
}

fn clone_json(clone: &GaussianState, rho1: &GaussianState, rho2: &GaussianState) -> Result<Value> {
    let flipped = clone.phase_flipped();
    let mut v = state_json(clone);
    let obj = v.as_object_mut().expect("state_json builds an object");
    obj.insert(
        "fidelity_rho1".into(),
        json!(gaussian_fidelity(rho1, clone)?.fidelity),
    );
    obj.insert(
        "fidelity_rho2".into(),
        json!(gaussian_fidelity(rho2, clone)?.fidelity),
    );
    obj.insert(
        "fidelity_rho1_flipped".into(),
        json!(gaussian_fidelity(rho1, &flipped)?.fidelity),
    );
    obj.insert(
        "fidelity_rho2_flipped".into(),
        json!(gaussian_fidelity(rho2, &flipped)?.fidelity),
    );
    Ok(v)
}

#[allow(clippy::too_many_arguments)]
fn clone_cmd(
    rho1_spec: &str,
    rho2_spec: &str,
    ancilla_spec: &str,
    tau1: f64,
    tau2: f64,
    g: &str,
    eta: f64,
    single_shot: Option<&str>,
) -> Result<(Report, Value)> {
    let rho1 = parse_state(rho1_spec)?;
    let rho2 = parse_state(rho2_spec)?;
    let ancilla = parse_state(ancilla_spec)?;
    let gain = parse_gain(g, tau1)?;
    let cfg = ClonerConfig::new(
        tau1,
        tau2,
        gain,
        GaussianMeasurement::heterodyne(eta)?,
        ancilla,
    )?;
    let z = single_shot.map(parse_complex).transpose()?;
    let (res, density): (CloneResult, Option<f64>) = match z {
        Some(z) => {
            let (r, p) = run_single_shot(&rho1, &rho2, &cfg, z)?;
            (r, Some(p))
        }
        None => (run_averaged(&rho1, &rho2, &cfg)?, None),
    };
    let mut result = json!({
        "gain": gain,
        "f1": res.f1,
        "f2": res.f2,
        "clone1": clone_json(&res.clone1, &rho1, &rho2)?,
        "clone2": clone_json(&res.clone2, &rho1, &rho2)?,
    });
    if let Some(p) = density {
        result["outcome_density"] = json!(p);
    }
    let config = json!({
        "command": "clone", "rho1": rho1_spec, "rho2": rho2_spec, "ancilla": ancilla_spec,
        "tau1": tau1, "tau2": tau2, "g": g, "eta": eta,
        "single_shot": z.map(|z| vec![z.re, z.im]),
    });
    Ok((Report { result }, config))
}

fn optimize_cmd(input: &str, eta: f64) -> Result<(Report, Value)> {
    let state = parse_state(input)?;
    let sigma_k: Matrix2<f64> = state.mode_cov(0);
    let meas = GaussianMeasurement::heterodyne(eta)?;
    let s_bar = optimal_ancilla_squeezing(&sigma_k, meas.cov())?;
    let numeric = maximize_fidelity_numeric(&sigma_k, meas.cov())?;
    let pair = ancilla_fidelities(&sigma_k, meas.cov())?;
    let result = json!({
        "s_bar": s_bar,
        "s_numeric": numeric.s_star,
        "f_gain": (pair.optimal - pair.vacuum) / pair.vacuum,
    });
    let config = json!({"command": "optimize-ancilla", "input": input, "eta": eta});
    Ok((Report { result }, config))
}

/// Computes a command's full output text and returns it with its target path.
pub(super) fn execute(command: Command) -> Result<(String, Option<PathBuf>), CliError> {
    let table_out = |(t, cfg): (Table, Value), o: OutputArgs| {
        let format = o.format.unwrap_or(Format::Csv);
        (t.render(&with_format(cfg, format), format), o.out)
    };
    let report_out = |(r, cfg): (Report, Value), o: OutputArgs| {
        let format = o.format.unwrap_or(Format::Json);
        (r.render(&with_format(cfg, format), format), o.out)
    };
    Ok(match command {
        Command::Fig2 { eta, grid, output } => table_out(fig2(eta, &grid)?, output),
        Command::Fig3 { etas, grid, output } => table_out(fig3(&etas, &grid)?, output),
        Command::Fig4 {
            etas,
            epsilon,
            grid,
            estimator,
            output,
        } => table_out(fig4(&etas, epsilon, &grid, &estimator)?, output),
        Command::Fig5 {
            eta,
            epsilons,
            grid,
            estimator,
            output,
        } => table_out(fig5(eta, &epsilons, &grid, &estimator)?, output),
        Command::Clone {
            rho1,
            rho2,
            ancilla,
            tau1,
            tau2,
            g,
            eta,
            single_shot,
            output,
        } => report_out(
            clone_cmd(
                &rho1,
                &rho2,
                &ancilla,
                tau1,
                tau2,
                &g,
                eta,
                single_shot.as_deref(),
            )?,
            output,
        ),
        Command::OptimizeAncilla { input, eta, output } => {
            report_out(optimize_cmd(&input, eta)?, output)
        }
    })
}

fn with_format(mut cfg: Value, format: Format) -> Value {
    cfg["format"] = json!(format);
    cfg
}
