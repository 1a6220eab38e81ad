//! Command-line interface: `modes`, `couplings`, `lamb`, `oracle`, `sweep`,
//! `validate`, `figure`. All numeric output goes to CSV/JSON files with a
//! metadata block echoing the resolved parameters; identical inputs give
//! byte-identical files when `--no-timestamp` is set.
//!
//! Exit codes: 0 success, 2 parameter-validation failure, 1 numerical
//! failure, 64 usage error (unknown flag or configuration key).

mod emit;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use emit::{cell, params_json, tagged_path, write_csv, Meta};
use fluxline::config::{load_config, param_dimension, set_param};
use fluxline::coupling::{coupling_strength, suppression_factor};
use fluxline::ladder::{
    build_ladder_with, convergence_study_with, ground_state_solve, ladder_modes, LadderBoundary,
    MassModel, StationaryBranch, QUBIT_WEIGHT_WARNING,
};
use fluxline::lamb::{
    lamb_sum_all, lamb_sum_asymptotic, lamb_sum_odd, lamb_sum_partial, renormalized_gap_factored,
    Parity, SumMethod,
};
use fluxline::modes::{
    low_frequency_band, mode_k_exact, mode_k_exact_cr, mode_k_high_approx, mode_k_low_approx,
    mode_k_low_third_order,
};
use fluxline::params::{derive, q_factor_from_cr, validate, Severity};
use fluxline::units::{parse_quantity, Dimension};
use fluxline::{CircuitParams, DerivedParams};

#[derive(Parser)]
#[command(name = "fluxline", version, about = "Flux qubit / transmission-line resonator calculations")]
struct Cli {
    /// Omit the timestamp metadata line (byte-reproducible outputs).
    #[arg(long, global = true)]
    no_timestamp: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ApproxKind {
    Exact,
    Low1,
    Low3,
    High,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ParityArg {
    Odd,
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EmitKind {
    Couplings,
    Modes,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FigureKind {
    Fig2,
    Fig4,
    Fig5,
}

#[derive(Subcommand)]
enum Command {
    /// Check a parameter file and print the derived constants.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Normal-mode table (exact roots or a labelled approximation).
    Modes {
        #[arg(long)]
        config: PathBuf,
        /// Highest branch index (inclusive).
        #[arg(long)]
        n_max: usize,
        #[arg(long, value_enum, default_value_t = ApproxKind::Exact)]
        approx: ApproxKind,
        /// Solve the bare line terminated by C_R instead of the qubit branch.
        #[arg(long)]
        cr_terminated: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Per-mode coupling strengths.
    Couplings {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        n_max: usize,
        /// Qubit current override in amps (default: persistent-current estimate).
        #[arg(long)]
        i_qubit: Option<String>,
        /// Comma-separated coupling-inductance values; one output table per value.
        #[arg(long, value_delimiter = ',')]
        lc_sweep: Option<Vec<String>>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Mode-sum and renormalized-gap evaluation (JSON output).
    Lamb {
        #[arg(long)]
        config: PathBuf,
        /// Dimensionless cutoff; mutually exclusive with --from-params.
        #[arg(long)]
        n_cutoff: Option<f64>,
        /// Take n_cutoff from the derived circuit constants.
        #[arg(long)]
        from_params: bool,
        #[arg(long, value_enum, default_value_t = ParityArg::Odd)]
        parity: ParityArg,
        /// digamma | partial:N | asymptotic
        #[arg(long, default_value = "digamma")]
        method: String,
        /// Bare qubit gap as a frequency (e.g. "2.5 GHz" or "1e10 rad/s").
        #[arg(long)]
        delta0: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Discrete-ladder eigensolver and convergence study.
    Oracle {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        n_segments: usize,
        /// Segment counts for a convergence study (replaces the mode table).
        #[arg(long, value_delimiter = ',')]
        sweep: Option<Vec<usize>>,
        /// Drop the qubit branch entirely (grounded bare line).
        #[arg(long)]
        no_qubit: bool,
        /// Bare line terminated by C_R (same as --no-qubit; named for symmetry
        /// with `modes`).
        #[arg(long)]
        cr_terminated: bool,
        /// Clamp the qubit flux: node 0 grounded through L_c ∥ L_2. This is
        /// the discrete counterpart of the continuum boundary condition.
        #[arg(long)]
        clamp_qubit: bool,
        /// Number of modes to report.
        #[arg(long, default_value_t = 64)]
        n_modes: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Re-run `modes` or `couplings` over a set of values for one parameter.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Parameter key to vary (X, l, c, L_c, L_2, C_q, E_J, C_R, Phi_ext).
        #[arg(long)]
        vary: String,
        /// Comma-separated quantities, e.g. 115.5pH,231pH,462pH.
        #[arg(long, value_delimiter = ',')]
        values: Vec<String>,
        #[arg(long, value_enum)]
        emit: EmitKind,
        #[arg(long, default_value_t = 32)]
        n_max: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Columnar data behind the standard plots.
    Figure {
        #[arg(long, value_enum)]
        kind: FigureKind,
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

enum CliError {
    Usage(String),
    Validation(String),
    Numerical(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 64,
            CliError::Validation(_) => 2,
            CliError::Numerical(_) => 1,
        }
    }
    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Validation(m) | CliError::Numerical(m) => m,
        }
    }
}

fn classify(e: fluxline::Error) -> CliError {
    use fluxline::Error as E;
    match e {
        E::UnknownKey { .. } | E::MissingKey { .. } | E::Config { .. } | E::Quantity { .. } => {
            CliError::Usage(e.to_string())
        }
        E::InvalidParameter { .. } | E::Domain { .. } => CliError::Validation(e.to_string()),
        E::RootSearch { .. }
        | E::NonConvergence { .. }
        | E::Eigen { .. }
        | E::Consistency { .. } => CliError::Numerical(e.to_string()),
        E::Io(err) => CliError::Numerical(format!("io: {err}")),
    }
}

fn io_err(e: std::io::Error) -> CliError {
    CliError::Numerical(format!("io: {e}"))
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("MULTIMODE_CQED_THREADS") {
        match threads.parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => eprintln!("warning: ignoring invalid MULTIMODE_CQED_THREADS={threads}"),
        }
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let kind = e.kind();
            let _ = e.print();
            return if matches!(kind, ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(64)
            };
        }
    };
    let timestamp = !cli.no_timestamp;
    let result = match cli.command {
        Command::Validate { config } => run_validate(&config),
        Command::Modes {
            config,
            n_max,
            approx,
            cr_terminated,
            out,
        } => run_modes(&config, n_max, approx, cr_terminated, &out, timestamp),
        Command::Couplings {
            config,
            n_max,
            i_qubit,
            lc_sweep,
            out,
        } => run_couplings(&config, n_max, i_qubit.as_deref(), lc_sweep, &out, timestamp),
        Command::Lamb {
            config,
            n_cutoff,
            from_params,
            parity,
            method,
            delta0,
            out,
        } => run_lamb(
            &config,
            n_cutoff,
            from_params,
            parity,
            &method,
            delta0.as_deref(),
            &out,
            timestamp,
        ),
        Command::Oracle {
            config,
            n_segments,
            sweep,
            no_qubit,
            cr_terminated,
            clamp_qubit,
            n_modes,
            out,
        } => run_oracle(
            &config,
            n_segments,
            sweep,
            no_qubit,
            cr_terminated,
            clamp_qubit,
            n_modes,
            &out,
            timestamp,
        ),
        Command::Sweep {
            config,
            vary,
            values,
            emit,
            n_max,
            out,
        } => run_sweep(&config, &vary, &values, emit, n_max, &out, timestamp),
        Command::Figure { kind, config, out } => run_figure(kind, &config, &out, timestamp),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn load(config: &Path) -> Result<(CircuitParams, DerivedParams), CliError> {
    let params = load_config(config).map_err(classify)?;
    let derived = derive(&params).map_err(classify)?;
    Ok((params, derived))
}

// ---------------------------------------------------------------------------

fn run_validate(config: &Path) -> Result<(), CliError> {
    let params = load_config(config).map_err(classify)?;
    let findings = validate(&params);
    let mut hard = 0usize;
    for f in &findings {
        match f.severity {
            Severity::Error => {
                hard += 1;
                println!("error: {}", f.rule);
            }
            Severity::Advisory => println!("advisory: {}", f.rule),
        }
    }
    if hard > 0 {
        return Err(CliError::Validation(format!(
            "{hard} parameter violation(s)"
        )));
    }
    let d = derive(&params).map_err(classify)?;
    println!("L_c2/(Xl) = {}", d.boundary_inductance / d.total_inductance);
    println!("n_cutoff = {}", d.n_cutoff);
    println!("L_c2 = {:e} H", d.boundary_inductance);
    println!("Z0 = {} ohm", d.impedance);
    println!("omega0 = {:e} rad/s (omega0/2pi = {:e} Hz)", d.omega0, d.omega0 / std::f64::consts::TAU);
    println!(
        "omega_cutoff = {:e} rad/s (omega_cutoff/2pi = {:e} Hz)",
        d.omega_cutoff,
        d.omega_cutoff / std::f64::consts::TAU
    );
    println!("Xl = {:e} H", d.total_inductance);
    println!("Xc = {:e} F", d.total_capacitance);
    match q_factor_from_cr(&params) {
        Ok(q) if q.is_finite() => println!("Q_TLR = {q}"),
        Ok(_) => println!("Q_TLR = infinite (C_R = 0)"),
        Err(e) => return Err(classify(e)),
    }
    Ok(())
}

// ---------------------------------------------------------------------------

fn run_modes(
    config: &Path,
    n_max: usize,
    approx: ApproxKind,
    cr_terminated: bool,
    out: &Path,
    timestamp: bool,
) -> Result<(), CliError> {
    let (params, derived) = load(config)?;
    if cr_terminated && approx != ApproxKind::Exact {
        return Err(CliError::Usage(
            "--approx applies to the qubit-terminated branch; use --approx exact with --cr-terminated".into(),
        ));
    }
    if matches!(approx, ApproxKind::Low1 | ApproxKind::Low3) {
        if let Some(band) = low_frequency_band(&derived) {
            if n_max > band {
                eprintln!(
                    "warning: low-frequency form requested up to n = {n_max}, \
                     regime holds for n <= {band} (n_cutoff/4)"
                );
            }
        }
    }
    if approx == ApproxKind::High && (n_max as f64) < derived.n_cutoff {
        eprintln!(
            "warning: high-frequency form requested below n_cutoff = {}",
            derived.n_cutoff
        );
    }
    // The high-frequency form is undefined at n = 0; its table starts at 1.
    let n_start = if approx == ApproxKind::High { 1 } else { 0 };
    if n_max < n_start {
        return Err(CliError::Usage(
            "--approx high needs --n-max >= 1 (the form is undefined at n = 0)".into(),
        ));
    }

    let mut rows = Vec::with_capacity(n_max + 1 - n_start);
    for n in n_start..=n_max {
        let mode = if cr_terminated {
            mode_k_exact_cr(&params, n).map_err(classify)?
        } else {
            match approx {
                ApproxKind::Exact => mode_k_exact(&derived, n).map_err(classify)?,
                ApproxKind::Low1 => mode_k_low_approx(&derived, n),
                ApproxKind::Low3 => mode_k_low_third_order(&derived, n),
                ApproxKind::High => mode_k_high_approx(&derived, n).map_err(classify)?,
            }
        };
        rows.push(vec![
            n.to_string(),
            cell(mode.kx),
            cell(mode.omega),
            cell(mode.omega / derived.omega0),
            cell(mode.sin_kx()),
        ]);
    }

    let mut meta = Meta::new("modes", timestamp);
    meta.push_params(&params);
    meta.push_derived(&derived);
    meta.push(
        "branch",
        if cr_terminated { "cr-terminated" } else { "qubit-terminated" },
    );
    meta.push(
        "approx",
        match approx {
            ApproxKind::Exact => "exact",
            ApproxKind::Low1 => "low1",
            ApproxKind::Low3 => "low3",
            ApproxKind::High => "high",
        },
    );
    write_csv(
        out,
        &meta,
        &["n", "kX", "omega_rad_s", "omega_over_omega0", "sin_knX"],
        &rows,
    )
    .map_err(io_err)
}

// ---------------------------------------------------------------------------

struct CouplingTable {
    rows: Vec<Vec<String>>,
    g0: f64,
    i_qubit: f64,
    i_qubit_source: &'static str,
}

fn coupling_table(
    params: &CircuitParams,
    derived: &DerivedParams,
    n_max: usize,
    i_qubit: Option<f64>,
    g0_ref: Option<f64>,
) -> Result<CouplingTable, CliError> {
    let mut rows = Vec::with_capacity(n_max + 1);
    let mut g0 = None;
    let mut i_used = 0.0;
    let mut source = "persistent-current estimate";
    for n in 0..=n_max {
        let mode = mode_k_exact(derived, n).map_err(classify)?;
        let c = coupling_strength(params, derived, &mode, i_qubit).map_err(classify)?;
        let g0_val = *g0.get_or_insert(c.coupling_rate);
        i_used = c.qubit_current;
        if i_qubit.is_some() {
            source = "override";
        }
        let reference = g0_ref.unwrap_or(g0_val);
        rows.push(vec![
            n.to_string(),
            cell(mode.omega / derived.omega0),
            cell(mode.omega / derived.omega_cutoff),
            cell(c.coupling_rate),
            cell(c.coupling_rate / reference),
            cell(c.suppression),
            cell(c.coupling_rate / std::f64::consts::TAU),
        ]);
    }
    Ok(CouplingTable {
        rows,
        g0: g0.unwrap_or(f64::NAN),
        i_qubit: i_used,
        i_qubit_source: source,
    })
}

const COUPLING_HEADER: [&str; 7] = [
    "n",
    "omega_over_omega0",
    "omega_over_omegacutoff",
    "g_rad_s",
    "g_over_g0_ref",
    "suppression",
    "g_over_2pi_hz",
];

fn run_couplings(
    config: &Path,
    n_max: usize,
    i_qubit_text: Option<&str>,
    lc_sweep: Option<Vec<String>>,
    out: &Path,
    timestamp: bool,
) -> Result<(), CliError> {
    let (params, derived) = load(config)?;
    let i_qubit = i_qubit_text
        .map(|t| parse_quantity(t, Dimension::Current).map_err(classify))
        .transpose()?;

    match lc_sweep {
        None => {
            let table = coupling_table(&params, &derived, n_max, i_qubit, None)?;
            let mut meta = Meta::new("couplings", timestamp);
            meta.push_params(&params);
            meta.push_derived(&derived);
            meta.push("i_qubit", cell(table.i_qubit));
            meta.push("i_qubit_source", table.i_qubit_source);
            meta.push("g0_ref", cell(table.g0));
            write_csv(out, &meta, &COUPLING_HEADER, &table.rows).map_err(io_err)
        }
        Some(values) => {
            if values.is_empty() {
                return Err(CliError::Usage("--lc-sweep needs at least one value".into()));
            }
            let lcs: Vec<(String, f64)> = values
                .iter()
                .map(|v| {
                    parse_quantity(v, Dimension::Inductance)
                        .map(|x| (v.clone(), x))
                        .map_err(classify)
                })
                .collect::<Result<_, _>>()?;
            // Normalization is explicit: g0 of the first listed value.
            let mut first = params;
            first.coupling_inductance = lcs[0].1;
            let first_derived = derive(&first).map_err(classify)?;
            let g0_ref = coupling_table(&first, &first_derived, 0, i_qubit, None)?.g0;

            let tables: Vec<(String, CircuitParams, DerivedParams, CouplingTable)> = lcs
                .par_iter()
                .map(|(tag, lc)| {
                    let mut p = params;
                    p.coupling_inductance = *lc;
                    let d = derive(&p).map_err(classify)?;
                    let t = coupling_table(&p, &d, n_max, i_qubit, Some(g0_ref))?;
                    Ok((tag.clone(), p, d, t))
                })
                .collect::<Result<_, CliError>>()?;

            for (tag, p, d, table) in tables {
                let mut meta = Meta::new("couplings", timestamp);
                meta.push_params(&p);
                meta.push_derived(&d);
                meta.push("i_qubit", cell(table.i_qubit));
                meta.push("i_qubit_source", table.i_qubit_source);
                meta.push("g0_ref", cell(g0_ref));
                meta.push("g0_ref_from", format!("L_c = {}", lcs[0].0));
                let path = tagged_path(out, &format!("L_c={tag}"));
                write_csv(&path, &meta, &COUPLING_HEADER, &table.rows).map_err(io_err)?;
            }
            Ok(())
        }
    }
}

// ---------------------------------------------------------------------------

#[allow(clippy::too_many_arguments)]
fn run_lamb(
    config: &Path,
    n_cutoff_flag: Option<f64>,
    from_params: bool,
    parity: ParityArg,
    method: &str,
    delta0_text: Option<&str>,
    out: &Path,
    timestamp: bool,
) -> Result<(), CliError> {
    let (params, derived) = load(config)?;
    let n_cutoff = match (n_cutoff_flag, from_params) {
        (Some(v), false) => v,
        (None, true) => derived.n_cutoff,
        _ => {
            return Err(CliError::Usage(
                "exactly one of --n-cutoff or --from-params is required".into(),
            ))
        }
    };
    let parity_val = match parity {
        ParityArg::Odd => Parity::Odd,
        ParityArg::All => Parity::All,
    };
    let sum = if method == "digamma" {
        match parity_val {
            Parity::Odd => lamb_sum_odd(n_cutoff),
            Parity::All => lamb_sum_all(n_cutoff),
        }
        .map_err(classify)?
    } else if method == "asymptotic" {
        lamb_sum_asymptotic(n_cutoff, parity_val).map_err(classify)?
    } else if let Some(terms) = method.strip_prefix("partial:") {
        let terms: usize = terms
            .parse()
            .map_err(|_| CliError::Usage(format!("bad term count in --method {method}")))?;
        lamb_sum_partial(n_cutoff, parity_val, terms).map_err(classify)?
    } else {
        return Err(CliError::Usage(format!(
            "--method must be digamma, asymptotic or partial:N (got `{method}`)"
        )));
    };

    // Fundamental-mode coupling for the factored exponent.
    let m0 = mode_k_exact(&derived, 0).map_err(classify)?;
    let c0 = coupling_strength(&params, &derived, &m0, None).map_err(classify)?;
    let g_ratio = c0.coupling_rate / m0.omega;
    let exponent = 2.0 * g_ratio * g_ratio * sum.value;

    let (delta0, delta) = match delta0_text {
        None => (None, None),
        Some(text) => {
            let freq = parse_quantity(text, Dimension::Frequency).map_err(classify)?;
            let bare = std::f64::consts::TAU * freq;
            let gap = renormalized_gap_factored(bare, c0.coupling_rate, m0.omega, &sum)
                .map_err(classify)?;
            if gap.validity_warning {
                eprintln!(
                    "warning: renormalized gap {} rad/s is not far below the fundamental mode; \
                     the step-wise renormalization margin is violated",
                    gap.gap
                );
            }
            (Some(bare), Some(gap.gap))
        }
    };

    let method_name = match sum.method {
        SumMethod::Digamma => "digamma".to_string(),
        SumMethod::Asymptotic => "asymptotic".to_string(),
        SumMethod::PartialSum { terms } => format!("partial:{terms}"),
    };
    let mut doc = serde_json::json!({
        "generated_by": "fluxline lamb",
        "n_cutoff": n_cutoff,
        "parity": match parity_val { Parity::Odd => "odd", Parity::All => "all" },
        "method": method_name,
        "sum": sum.value,
        "tail_bound": sum.tail_bound,
        "exponent": exponent,
        "delta0": delta0,
        "delta": delta,
        "g0": c0.coupling_rate,
        "omega_mode0": m0.omega,
        "i_qubit": c0.qubit_current,
        "params": params_json(&params),
    });
    if timestamp {
        let secs = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        doc["timestamp_unix"] = serde_json::json!(secs);
    }
    let text = serde_json::to_string_pretty(&doc).expect("json serialization") + "\n";
    std::fs::write(out, text).map_err(io_err)
}

// ---------------------------------------------------------------------------

#[allow(clippy::too_many_arguments)]
fn run_oracle(
    config: &Path,
    n_segments: usize,
    sweep: Option<Vec<usize>>,
    no_qubit: bool,
    cr_terminated: bool,
    clamp_qubit: bool,
    n_modes: usize,
    out: &Path,
    timestamp: bool,
) -> Result<(), CliError> {
    let (params, derived) = load(config)?;
    let boundary = match (no_qubit || cr_terminated, clamp_qubit) {
        (true, true) => {
            return Err(CliError::Usage(
                "--clamp-qubit conflicts with --no-qubit/--cr-terminated".into(),
            ))
        }
        (true, false) => LadderBoundary::Bare,
        (false, true) => LadderBoundary::ClampedQubit,
        (false, false) => LadderBoundary::FullQubit,
    };

    let boundary_name = match boundary {
        LadderBoundary::FullQubit => "full-qubit",
        LadderBoundary::ClampedQubit => "clamped-qubit",
        LadderBoundary::Bare => "bare",
    };

    if let Some(counts) = sweep {
        let study = convergence_study_with(&params, &counts, boundary).map_err(classify)?;
        let mut meta = Meta::new("oracle", timestamp);
        meta.push_params(&params);
        meta.push_derived(&derived);
        meta.push("boundary", boundary_name);
        for (i, omega) in study.continuum_omegas.iter().enumerate() {
            meta.push(&format!("continuum_omega_{i}"), cell(*omega));
        }
        for (i, order) in study.fitted_orders.iter().enumerate() {
            meta.push(&format!("fitted_order_{i}"), cell(*order));
        }
        let rows: Vec<Vec<String>> = study
            .rows
            .iter()
            .map(|r| {
                let mut row = vec![r.segments.to_string()];
                row.extend(r.rel_errors.iter().map(|e| cell(*e)));
                row
            })
            .collect();
        return write_csv(
            out,
            &meta,
            &[
                "n_segments",
                "rel_err_mode0",
                "rel_err_mode1",
                "rel_err_mode2",
                "rel_err_mode3",
                "rel_err_mode4",
            ],
            &rows,
        )
        .map_err(io_err);
    }

    let stationary = match boundary {
        LadderBoundary::FullQubit => Some(ground_state_solve(&params).map_err(classify)?),
        _ => None,
    };
    let system = build_ladder_with(
        &params,
        n_segments,
        stationary.as_ref(),
        boundary,
        MassModel::HalfCellEnds,
    )
    .map_err(classify)?;
    let spectrum = ladder_modes(&system, n_modes).map_err(classify)?;

    if matches!(boundary, LadderBoundary::FullQubit) {
        let flagged = spectrum.near_resonant_modes(QUBIT_WEIGHT_WARNING);
        if !flagged.is_empty() {
            eprintln!(
                "note: modes {flagged:?} hybridize with the qubit (weight > {QUBIT_WEIGHT_WARNING}); \
                 the clamped-boundary reference is unreliable there"
            );
        }
    }

    let sqrt_cl = derived.sqrt_cl();
    let mut rows = Vec::with_capacity(spectrum.omegas.len());
    for i in 0..spectrum.omegas.len() {
        let omega = spectrum.omegas[i];
        let continuum = match boundary {
            LadderBoundary::Bare => mode_k_exact_cr(&params, i).map_err(classify)?.omega,
            _ => mode_k_exact(&derived, i).map_err(classify)?.omega,
        };
        let envelope = spectrum.envelope_current(i, sqrt_cl);
        let i0_ratio = if envelope > 0.0 {
            spectrum.node0_current(i) / envelope
        } else {
            0.0
        };
        rows.push(vec![
            i.to_string(),
            cell(omega),
            cell(omega / derived.omega0),
            cell(spectrum.qubit_weight[i]),
            cell(i0_ratio),
            cell(continuum),
            cell((omega - continuum) / continuum),
        ]);
    }

    let mut meta = Meta::new("oracle", timestamp);
    meta.push_params(&params);
    meta.push_derived(&derived);
    meta.push("boundary", boundary_name);
    meta.push("n_segments", n_segments);
    meta.push("mass_model", "half-cell-ends");
    if let Some(gs) = &stationary {
        meta.push("Phi_GS", cell(gs.qubit_flux));
        meta.push("phi_GS", cell(gs.node_flux));
        meta.push(
            "stationary_branch",
            match gs.branch {
                StationaryBranch::Negative => "negative",
                StationaryBranch::Zero => "zero",
                StationaryBranch::Positive => "positive",
            },
        );
        meta.push("stationary_is_saddle", gs.is_saddle);
    }
    write_csv(
        out,
        &meta,
        &[
            "mode_index",
            "omega_rad_s",
            "omega_over_omega0",
            "qubit_weight",
            "i0_over_ipeak",
            "continuum_omega",
            "rel_error",
        ],
        &rows,
    )
    .map_err(io_err)
}

// ---------------------------------------------------------------------------

fn run_sweep(
    config: &Path,
    vary: &str,
    values: &[String],
    emit: EmitKind,
    n_max: usize,
    out: &Path,
    timestamp: bool,
) -> Result<(), CliError> {
    let (base, _) = load(config)?;
    let dim = param_dimension(vary)
        .ok_or_else(|| CliError::Usage(format!("unknown parameter key `{vary}`")))?;
    if values.is_empty() {
        return Err(CliError::Usage("--values needs at least one entry".into()));
    }
    let parsed: Vec<(String, f64)> = values
        .iter()
        .map(|v| {
            parse_quantity(v, dim)
                .map(|x| (v.clone(), x))
                .map_err(classify)
        })
        .collect::<Result<_, _>>()?;

    // Explicit normalization for coupling sweeps: g0 of the first value.
    let g0_ref = match emit {
        EmitKind::Couplings => {
            let mut p = base;
            set_param(&mut p, vary, parsed[0].1).map_err(classify)?;
            let d = derive(&p).map_err(classify)?;
            Some(coupling_table(&p, &d, 0, None, None)?.g0)
        }
        EmitKind::Modes => None,
    };

    let outputs: Vec<(String, CircuitParams, DerivedParams, Vec<Vec<String>>, Option<CouplingTable>)> =
        parsed
            .par_iter()
            .map(|(tag, value)| {
                let mut p = base;
                set_param(&mut p, vary, *value).map_err(classify)?;
                let d = derive(&p).map_err(classify)?;
                match emit {
                    EmitKind::Modes => {
                        let mut rows = Vec::with_capacity(n_max + 1);
                        for n in 0..=n_max {
                            let m = mode_k_exact(&d, n).map_err(classify)?;
                            rows.push(vec![
                                n.to_string(),
                                cell(m.kx),
                                cell(m.omega),
                                cell(m.omega / d.omega0),
                                cell(m.sin_kx()),
                            ]);
                        }
                        Ok((tag.clone(), p, d, rows, None))
                    }
                    EmitKind::Couplings => {
                        let t = coupling_table(&p, &d, n_max, None, g0_ref)?;
                        Ok((tag.clone(), p, d, Vec::new(), Some(t)))
                    }
                }
            })
            .collect::<Result<_, CliError>>()?;

    for (tag, p, d, mode_rows, coupling) in outputs {
        let mut meta = Meta::new("sweep", timestamp);
        meta.push_params(&p);
        meta.push_derived(&d);
        meta.push("swept_key", vary);
        meta.push("swept_value", &tag);
        let path = tagged_path(out, &format!("{vary}={tag}"));
        match &coupling {
            None => write_csv(
                &path,
                &meta,
                &["n", "kX", "omega_rad_s", "omega_over_omega0", "sin_knX"],
                &mode_rows,
            )
            .map_err(io_err)?,
            Some(t) => {
                meta.push("i_qubit", cell(t.i_qubit));
                meta.push("i_qubit_source", t.i_qubit_source);
                if let Some(g0) = g0_ref {
                    meta.push("g0_ref", cell(g0));
                    meta.push("g0_ref_from", format!("{vary} = {}", values[0]));
                }
                write_csv(&path, &meta, &COUPLING_HEADER, &t.rows).map_err(io_err)?;
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------

fn run_figure(
    kind: FigureKind,
    config: &Path,
    out: &Path,
    timestamp: bool,
) -> Result<(), CliError> {
    let (params, derived) = load(config)?;
    match kind {
        FigureKind::Fig4 => {
            // Suppression factor over x = ω/ω_cutoff ∈ [0, 10].
            let mut rows = Vec::with_capacity(1001);
            for i in 0..=1000usize {
                let x = i as f64 / 100.0;
                rows.push(vec![cell(x), cell(suppression_factor(x))]);
            }
            let mut meta = Meta::new("figure fig4", timestamp);
            meta.push_params(&params);
            meta.push_derived(&derived);
            write_csv(out, &meta, &["x", "suppression"], &rows).map_err(io_err)
        }
        FigureKind::Fig2 => {
            // Current profiles of the lowest three modes, with the qubit
            // boundary and for the bare grounded line, unit peak amplitude.
            let grid = 201usize;
            let mut bare = derived;
            bare.boundary_inductance = 0.0;
            bare.omega_cutoff = f64::INFINITY;
            bare.n_cutoff = f64::INFINITY;
            let mut columns: Vec<Vec<f64>> = Vec::new();
            let mut positions = Vec::new();
            for (label_derived, _) in [(&derived, "coupled"), (&bare, "bare")] {
                for n in 0..3usize {
                    let m = mode_k_exact(label_derived, n).map_err(classify)?;
                    let profile = fluxline::modes::current_profile(label_derived, &m, grid)
                        .map_err(classify)?;
                    if positions.is_empty() {
                        positions = profile.positions.clone();
                    }
                    columns.push(profile.currents);
                }
            }
            let rows: Vec<Vec<String>> = (0..grid)
                .map(|i| {
                    let mut row = vec![cell(positions[i])];
                    row.extend(columns.iter().map(|c| cell(c[i])));
                    row
                })
                .collect();
            let mut meta = Meta::new("figure fig2", timestamp);
            meta.push_params(&params);
            meta.push_derived(&derived);
            meta.push("normalization", "unit peak flux amplitude per mode");
            write_csv(
                out,
                &meta,
                &[
                    "x_m",
                    "i_coupled_mode0",
                    "i_coupled_mode1",
                    "i_coupled_mode2",
                    "i_bare_mode0",
                    "i_bare_mode1",
                    "i_bare_mode2",
                ],
                &rows,
            )
            .map_err(io_err)
        }
        FigureKind::Fig5 => {
            // g_n versus ω_n/ω₀ for three cutoffs, L_c adjusted at fixed L_2;
            // normalized to g0 of the middle (n_cutoff = 50) series.
            let targets = [25.0, 50.0, 100.0];
            let n_max = 200usize;
            let mut series = Vec::new();
            for &target in &targets {
                let lc2 = derived.impedance / (target * derived.omega0);
                if lc2 >= params.loop_inductance {
                    return Err(CliError::Validation(format!(
                        "n_cutoff target {target} needs L_c2 = {lc2:e} H below L_2 = {:e} H",
                        params.loop_inductance
                    )));
                }
                let mut p = params;
                p.coupling_inductance =
                    lc2 * params.loop_inductance / (params.loop_inductance - lc2);
                let d = derive(&p).map_err(classify)?;
                series.push((target, p, d));
            }
            let reference = {
                let (_, p, d) = &series[1];
                let m0 = mode_k_exact(d, 0).map_err(classify)?;
                coupling_strength(p, d, &m0, None)
                    .map_err(classify)?
                    .coupling_rate
            };
            let mut rows = Vec::new();
            for (target, p, d) in &series {
                for n in 0..=n_max {
                    let m = mode_k_exact(d, n).map_err(classify)?;
                    let c = coupling_strength(p, d, &m, None).map_err(classify)?;
                    rows.push(vec![
                        cell(*target),
                        n.to_string(),
                        cell(m.omega / d.omega0),
                        cell(c.coupling_rate),
                        cell(c.coupling_rate / reference),
                    ]);
                }
            }
            let mut meta = Meta::new("figure fig5", timestamp);
            meta.push_params(&params);
            meta.push_derived(&derived);
            meta.push("normalization", "g0 of the n_cutoff = 50 series");
            write_csv(
                out,
                &meta,
                &[
                    "n_cutoff_target",
                    "n",
                    "omega_over_omega0",
                    "g_rad_s",
                    "g_over_g0_ref",
                ],
                &rows,
            )
            .map_err(io_err)
        }
    }
}
