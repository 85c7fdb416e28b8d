// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use serde_json::{Map, Value};
use thermowit_core::heat::ladder::asymptotic_row;
use thermowit_core::heat::oracle::{heat_bounds_oracle, oracle_study, OracleOptions};
use thermowit_core::heat::{heat_bounds, ScalarProblem};
use thermowit_core::tavis_cummings::{build_tc_model, coherent_input_state, run_trajectory, FixedPointOptions};
use thermowit_core::thermo::{average_energy, gibbs_state, von_neumann_entropy};
use thermowit_core::witness::isotropic::{isotropic_sweep, lambda_crt, lambda_crt_residual};
use thermowit_core::witness::{
    incoh_free_energy_bound, local_data, sep_free_energy_bound, sep_free_energy_bound_energy_only, verdict,
    witness_heat_bounds, LocalData, DEFAULT_MARGIN,
};
use thermowit_core::{DensityMatrix, Hamiltonian};

use crate::args::{
    AsymptoticArgs, BoundsArgs, Cli, Command, Control, LambdaCrtArgs, OracleArgs, TcArgs, WernerArgs, WitnessArgs,
    WitnessKind,
};
use crate::config::{parse_list, parse_real, parse_real_list, Params};
use crate::error::{input, CliResult};
use crate::output::{csv_text, fmt_num, json_line, json_num, json_opt};

/// What a command produced: the main document and an optional extra stdout line.
#[derive(Debug, Clone, PartialEq)]
pub struct Emission {
    /// CSV or JSON text, destined for `out` or stdout.
    pub document: String,
    pub out: Option<PathBuf>,
    /// Printed to stdout after the document (summary lines).
    pub summary: Option<String>,
}

/// Runs the parsed command. Reads input files, writes nothing.
pub fn execute(cli: &Cli) -> CliResult<Emission> {
    let config = cli.config.as_deref();
    match &cli.command {
        Command::Bounds(a) => bounds(a, Params::new("bounds", config)?),
        Command::WernerSweep(a) => werner_sweep(a, Params::new("werner-sweep", config)?),
        Command::LambdaCrt(a) => lambda_crt_table(a, Params::new("lambda-crt", config)?),
        Command::Asymptotic(a) => asymptotic(a, Params::new("asymptotic", config)?),
        Command::TavisCummings(a) => tavis_cummings(a, Params::new("tavis-cummings", config)?),
        Command::Witness(a) => witness(a, Params::new("witness", config)?),
        Command::Oracle(a) => oracle(a, Params::new("oracle", config)?),
    }
}

fn positive(name: &str, x: f64) -> CliResult<f64> {
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(input(format!("--{name} must be positive, got {x}")))
    }
}

fn in_range(name: &str, x: usize, lo: usize, hi: usize) -> CliResult<usize> {
    if (lo..=hi).contains(&x) {
        Ok(x)
    } else {
        Err(input(format!("--{name} must lie in [{lo}, {hi}], got {x}")))
    }
}

fn out_path(p: &mut Params, flag: &Option<PathBuf>) -> CliResult<Option<PathBuf>> {
    p.unrecorded("out", flag.clone())
}

fn bool_str(b: bool) -> String {
    b.to_string()
}

fn bounds(a: &BoundsArgs, mut p: Params) -> CliResult<Emission> {
    let state_path: PathBuf = p.required("state", a.state.clone())?;
    let h_path: PathBuf = p.required("hamiltonian", a.hamiltonian.clone())?;
    let beta = positive("beta", p.required("beta", a.beta)?)?;
    let out = out_path(&mut p, &a.out.out)?;
    p.finish()?;

    let rho = DensityMatrix::load(&state_path)?;
    let h = Hamiltonian::load(&h_path)?;
    let e = average_energy(&rho, &h)?;
    let s = von_neumann_entropy(&rho);
    let b = heat_bounds(&rho, &h, beta)?;
    let mut m = Map::new();
    m.insert("beta_c".into(), json_num(b.beta_c));
    m.insert("beta_h".into(), json_opt(b.beta_h));
    m.insert("q_c".into(), json_num(b.q_c));
    m.insert("q_h".into(), json_num(b.q_h));
    m.insert("h_capped".into(), Value::Bool(b.h_capped));
    m.insert("degenerate".into(), Value::Bool(b.degenerate));
    m.insert("E".into(), json_num(e));
    m.insert("S".into(), json_num(s));
    m.insert("F".into(), json_num(e - s / beta));
    Ok(Emission { document: json_line(m), out, summary: None })
}

fn werner_sweep(a: &WernerArgs, mut p: Params) -> CliResult<Emission> {
    let d = in_range("d", p.with_default("d", a.d, 2)?, 2, 7)?;
    let beta = positive("beta", p.with_default("beta", a.beta, 0.5)?)?;
    let steps = p.with_default("lambda-steps", a.lambda_steps, 400)?;
    if steps < 2 {
        return Err(input(format!("--lambda-steps must be at least 2, got {steps}")));
    }
    let out = out_path(&mut p, &a.out.out)?;
    let mut record = p.finish()?;
    record.insert("local-hamiltonian".into(), "ladder".into());

    let rows: Vec<Vec<String>> = isotropic_sweep(d, beta, steps)?
        .iter()
        .map(|r| {
            vec![
                fmt_num(r.lambda),
                fmt_num(r.q_c),
                fmt_num(r.q_h),
                fmt_num(r.q_star_c),
                fmt_num(r.q_star_h),
                bool_str(r.detected),
            ]
        })
        .collect();
    let header = ["lambda", "q_c", "q_h", "q_star_c", "q_star_h", "detected"];
    Ok(Emission { document: csv_text("werner-sweep", &record, &header, &rows), out, summary: None })
}

fn lambda_crt_table(a: &LambdaCrtArgs, mut p: Params) -> CliResult<Emission> {
    let d_max = in_range("d-max", p.with_default("d-max", a.d_max, 7)?, 2, 12)?;
    let out = out_path(&mut p, &a.out.out)?;
    let record = p.finish()?;
    let rows = (2..=d_max)
        .map(|d| {
            let l = lambda_crt(d)?;
            debug_assert!(lambda_crt_residual(d, l).abs() <= 1e-8);
            Ok(vec![d.to_string(), fmt_num(l)])
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(Emission { document: csv_text("lambda-crt", &record, &["d", "lambda_crt"], &rows), out, summary: None })
}

fn asymptotic(a: &AsymptoticArgs, mut p: Params) -> CliResult<Emission> {
    let d_list: Vec<usize> = parse_list(&p.with_default("d-list", a.d_list.clone(), "2,3,4,5".into())?, "integers")?;
    let beta_list = parse_real_list(&p.with_default("beta-list", a.beta_list.clone(), "10,20,50".into())?)?;
    let entropy: Option<f64> = p.optional("entropy", a.entropy)?;
    let out = out_path(&mut p, &a.out.out)?;
    let record = p.finish()?;
    for &d in &d_list {
        in_range("d-list", d, 2, 12)?;
    }
    for &b in &beta_list {
        positive("beta-list", b)?;
    }

    let mut rows = Vec::new();
    for &d in &d_list {
        for &beta in &beta_list {
            let r = asymptotic_row(d, beta, entropy)?;
            rows.push(vec![
                d.to_string(),
                fmt_num(beta),
                fmt_num(r.numeric),
                fmt_num(r.asymptotic),
                fmt_num(r.rel_err),
            ]);
        }
    }
    let header = ["d", "beta", "beta_c_numeric_magnitude", "beta_c_asymptotic", "rel_err"];
    Ok(Emission { document: csv_text("asymptotic", &record, &header, &rows), out, summary: None })
}

fn tavis_cummings(a: &TcArgs, mut p: Params) -> CliResult<Emission> {
    let epsilon = positive("epsilon", p.with_default("epsilon", a.epsilon, 1.0)?)?;
    let g: f64 = p.with_default("g", a.g, 1.0)?;
    let beta = positive("beta", p.with_default("beta", a.beta, 0.3)?)?;
    let tau = positive("tau", parse_real(&p.with_default("tau", a.tau.clone(), "pi/4".into())?)?)?;
    let n_max = p.with_default("n-max", a.n_max, 8)?;
    let steps = p.with_default("steps", a.steps, 200)?;
    let control_name = p.with_default("control", a.control.map(|c| c.as_str().to_string()), "coherent".into())?;
    let max_leakage = p.with_default("max-leakage", a.max_leakage, FixedPointOptions::default().max_leakage)?;
    let out = out_path(&mut p, &a.out.out)?;
    let record = p.finish()?;
    let control = match control_name.as_str() {
        "coherent" => Control::Coherent,
        "incoherent" => Control::Incoherent,
        other => return Err(input(format!("--control must be coherent or incoherent, got {other}"))),
    };
    if !(g.is_finite() && g >= 0.0) {
        return Err(input(format!("--g must be nonnegative, got {g}")));
    }
    if n_max < 2 || steps < 2 {
        return Err(input("--n-max and --steps must be at least 2"));
    }
    if max_leakage.is_nan() || max_leakage < 0.0 {
        return Err(input(format!("--max-leakage must be nonnegative, got {max_leakage}")));
    }

    let model = build_tc_model(epsilon, g, n_max, beta)?;
    let rho_s = match control {
        Control::Coherent => coherent_input_state(beta, epsilon)?,
        Control::Incoherent => gibbs_state(&Hamiltonian::from_levels(&[0.0, epsilon])?, beta)?,
    };
    let opts = FixedPointOptions { max_leakage, ..Default::default() };
    let tr = run_trajectory(&model, &rho_s, tau, steps, &opts)?;
    let rows: Vec<Vec<String>> = (0..tr.times.len())
        .map(|k| {
            vec![
                fmt_num(tr.times[k]),
                fmt_num(tr.q[k]),
                fmt_num(tr.delta[k]),
                fmt_num(tr.energy_drift[k]),
                fmt_num(tr.leakage[k]),
            ]
        })
        .collect();
    let header = ["t", "q", "delta", "energy_drift", "leakage"];

    let mut m = Map::new();
    m.insert("control".into(), Value::String(control.as_str().into()));
    m.insert("max_q".into(), json_num(tr.max_q()));
    m.insert("q_tau".into(), json_num(*tr.q.last().expect("two points")));
    m.insert("final_delta".into(), json_num(tr.final_delta()));
    m.insert("fixed_point_residual".into(), json_num(tr.fixed_point_residual));
    m.insert("fixed_point_iterations".into(), Value::from(tr.fixed_point_iterations));
    m.insert("spectral_fallback".into(), Value::Bool(tr.fixed_point_spectral));
    m.insert("unit_eigenvalue_multiplicity".into(), Value::from(tr.unit_multiplicity));
    m.insert("max_leakage".into(), json_num(tr.max_leakage()));
    m.insert("max_energy_drift".into(), json_num(tr.max_abs_energy_drift()));
    Ok(Emission { document: csv_text("tavis-cummings", &record, &header, &rows), out, summary: Some(json_line(m)) })
}

fn local_hamiltonians(paths: &[PathBuf], dims: &[usize]) -> CliResult<Vec<Hamiltonian>> {
    if paths.is_empty() {
        return dims.iter().map(|&d| Ok(Hamiltonian::ladder(d)?)).collect();
    }
    if paths.len() != dims.len() {
        return Err(input(format!("{} local Hamiltonians for {} parties", paths.len(), dims.len())));
    }
    let hs = paths.iter().map(Hamiltonian::load).collect::<Result<Vec<_>, _>>()?;
    for (h, &d) in hs.iter().zip(dims) {
        if h.dim() != d {
            return Err(input(format!("local Hamiltonian of dim {} for a party of dim {d}", h.dim())));
        }
    }
    Ok(hs)
}

fn witness(a: &WitnessArgs, mut p: Params) -> CliResult<Emission> {
    let kind_name = p.required("kind", a.kind.map(|k| format!("{k:?}").to_lowercase()))?;
    let beta = positive("beta", p.required("beta", a.beta)?)?;
    let state_path: Option<PathBuf> = p.optional("state", a.state.clone())?;
    let margin = p.with_default("margin", a.margin, DEFAULT_MARGIN)?;
    let q: Option<f64> = p.optional("q", a.q)?;
    if !(margin.is_finite() && margin >= 0.0) {
        return Err(input(format!("--margin must be nonnegative, got {margin}")));
    }
    let kind = match kind_name.as_str() {
        "separable" => WitnessKind::Separable,
        "incoherent" => WitnessKind::Incoherent,
        other => return Err(input(format!("--kind must be separable or incoherent, got {other}"))),
    };
    let state = state_path.as_ref().map(DensityMatrix::load).transpose()?;

    let (bound, h) = match kind {
        WitnessKind::Separable => {
            let energies: Option<String> = p.optional("energies", a.energies.clone())?;
            let entropies: Option<String> = p.optional("entropies", a.entropies.clone())?;
            let dims_flag: Option<String> = p.optional("dims", a.dims.clone())?;
            let dimension_only = p.with_default("dimension-only", a.dimension_only.then_some(true), false)?;
            let (dims, data) = match (&state, energies) {
                (Some(rho), None) => {
                    let dims = rho.dims().to_vec();
                    let locals = local_hamiltonians(&a.local_hamiltonians, &dims)?;
                    let data = local_data(rho, &locals)?;
                    (dims, data)
                }
                (None, Some(e)) => {
                    let energies = parse_real_list(&e)?;
                    let entropies = match (entropies, dimension_only) {
                        (Some(s), _) => parse_real_list(&s)?,
                        (None, true) => vec![0.0; energies.len()],
                        (None, false) => return Err(input("--entropies is required unless --dimension-only is set")),
                    };
                    if entropies.len() != energies.len() {
                        return Err(input("--energies and --entropies need the same length"));
                    }
                    let dims: Vec<usize> = match dims_flag {
                        Some(d) => parse_list(&d, "integers")?,
                        None => return Err(input("--dims is required with --energies")),
                    };
                    if dims.len() != energies.len() {
                        return Err(input("--dims and --energies need the same length"));
                    }
                    let data = energies
                        .iter()
                        .zip(&entropies)
                        .map(|(&energy, &entropy)| LocalData { energy, entropy })
                        .collect();
                    (dims, data)
                }
                _ => return Err(input("separable witness needs exactly one of --state or --energies")),
            };
            let locals = local_hamiltonians(&a.local_hamiltonians, &dims)?;
            for (l, (h, &d)) in data.iter().zip(locals.iter().zip(&dims)) {
                let max_s = (d as f64).ln();
                if !(l.entropy >= 0.0 && l.entropy <= max_s + 1e-9) {
                    return Err(input(format!("local entropy {} outside [0, ln {d}]", l.entropy)));
                }
                if l.energy < h.ground_energy() - 1e-9 || l.energy > h.top_energy() + 1e-9 {
                    return Err(input(format!("local energy {} outside the local spectrum", l.energy)));
                }
            }
            let bound = if dimension_only {
                sep_free_energy_bound_energy_only(&data.iter().map(|l| l.energy).collect::<Vec<_>>(), beta)?
            } else {
                sep_free_energy_bound(&data, beta)?
            };
            (bound, Hamiltonian::local_sum(&locals)?)
        }
        WitnessKind::Incoherent => {
            let h_path: Option<PathBuf> = p.optional("hamiltonian", a.hamiltonian.clone())?;
            let levels: Option<String> = p.optional("levels", a.levels.clone())?;
            let energy_flag: Option<f64> = p.optional("energy", a.energy)?;
            let h = match (h_path, levels) {
                (Some(path), None) => Hamiltonian::load(path)?,
                (None, Some(l)) => {
                    let mut v = parse_real_list(&l)?;
                    v.sort_by(f64::total_cmp);
                    Hamiltonian::from_levels(&v)?
                }
                _ => return Err(input("incoherent witness needs exactly one of --hamiltonian or --levels")),
            };
            let energy = match (energy_flag, &state) {
                (Some(e), None) => e,
                (None, Some(rho)) => average_energy(rho, &h)?,
                _ => return Err(input("incoherent witness needs exactly one of --energy or --state")),
            };
            (incoh_free_energy_bound(energy, &h, beta)?, h)
        }
    };
    let out = out_path(&mut p, &a.out.out)?;
    p.finish()?;

    let env = witness_heat_bounds(&bound, &h, beta)?;
    let mut m = Map::new();
    m.insert("kind".into(), Value::String(kind_name));
    m.insert("f_star".into(), json_num(env.f_star));
    m.insert("s_floor".into(), json_num(env.s_floor));
    m.insert("e_cap".into(), json_num(env.e_cap));
    m.insert("q_star_c".into(), json_num(env.q_star_c));
    m.insert("q_star_h".into(), json_num(env.q_star_h));
    m.insert("beta_star_c".into(), json_num(env.beta_star_c));
    m.insert("beta_star_h".into(), json_opt(env.beta_star_h));
    if let Some(q) = q {
        m.insert("q".into(), json_num(q));
        m.insert("verdict".into(), Value::String(verdict(q, &env, margin).as_str().into()));
    }
    Ok(Emission { document: json_line(m), out, summary: None })
}

fn oracle(a: &OracleArgs, mut p: Params) -> CliResult<Emission> {
    let state_path: Option<PathBuf> = p.optional("state", a.state.clone())?;
    let beta = positive("beta", p.with_default("beta", a.beta, 1.0)?)?;
    let seed = p.with_default("seed", a.seed, 0)?;
    let resolution = p.with_default("resolution", a.resolution, OracleOptions::default().resolution)?;
    let samples = p.with_default("samples", a.samples, OracleOptions::default().samples)?;
    if resolution < 1000 {
        return Err(input(format!("--resolution must be at least 1000, got {resolution}")));
    }
    let opts = OracleOptions { resolution, samples, seed, ..Default::default() };

    if let Some(path) = state_path {
        let h_path: PathBuf = p.required("hamiltonian", a.hamiltonian.clone())?;
        let out = out_path(&mut p, &a.out.out)?;
        p.finish()?;
        let rho = DensityMatrix::load(path)?;
        let h = Hamiltonian::load(h_path)?;
        let problem = ScalarProblem::from_state(&rho, &h, beta)?;
        let solver = thermowit_core::heat::heat_bounds_scalar(&problem)?;
        let o = heat_bounds_oracle(&rho, &h, beta, &opts)?;
        let mut m = Map::new();
        m.insert("q_c".into(), json_num(solver.q_c));
        m.insert("q_h".into(), json_num(solver.q_h));
        m.insert("oracle_q_c".into(), json_num(o.q_c));
        m.insert("oracle_q_h".into(), json_num(o.q_h));
        m.insert("oracle_x_c".into(), json_num(o.x_c));
        m.insert("oracle_x_h".into(), json_num(o.x_h));
        m.insert("feasible_samples".into(), Value::from(o.feasible_samples));
        m.insert("max_excess".into(), json_num(o.max_excess));
        return Ok(Emission { document: json_line(m), out, summary: None });
    }

    let dims: Vec<usize> = parse_list(&p.with_default("dims", a.dims.clone(), "2,3,4".into())?, "integers")?;
    let count = p.with_default("count", a.count, 100)?;
    let out = out_path(&mut p, &a.out.out)?;
    let record = p.finish()?;
    for &d in &dims {
        in_range("dims", d, 2, 64)?;
    }
    let rows: Vec<Vec<String>> = oracle_study(&dims, count, beta, seed, &opts)?
        .iter()
        .map(|r| {
            vec![
                r.dim.to_string(),
                r.index.to_string(),
                fmt_num(r.q_c),
                fmt_num(r.q_h),
                fmt_num(r.oracle_q_c),
                fmt_num(r.oracle_q_h),
                fmt_num(r.max_gap()),
                fmt_num(r.max_excess),
                r.feasible_samples.to_string(),
                fmt_num(r.defect_c),
                fmt_num(r.defect_h),
            ]
        })
        .collect();
    let header = [
        "dim",
        "index",
        "q_c",
        "q_h",
        "oracle_q_c",
        "oracle_q_h",
        "max_gap",
        "max_excess",
        "feasible_samples",
        "defect_c",
        "defect_h",
    ];
    Ok(Emission { document: csv_text("oracle", &record, &header, &rows), out, summary: None })
}
