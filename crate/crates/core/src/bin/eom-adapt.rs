use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use eom_adapt::adapt::{
    adapt_solve_from, build_pool, AdaptAnsatz, AdaptConfig, AdaptResult, GroundStateConfig,
    PoolKind,
};
use eom_adapt::bands::{
    band_pipeline, load_fixture_dir, Alignment, BandConfig, OutputFormat, PathPoint,
};
use eom_adapt::eom::{eom_spectrum, EomConfig, Formulation, IndexSpace, Sector, SpinChannel};
use eom_adapt::fci::exact_ip_ea;
use eom_adapt::lattice::{
    build_hamiltonian, hubbard_integrals, parse_kfcidump, write_kfcidump, HubbardSpec, KPoint,
};
use eom_adapt::noise::{run_noise_experiment, NoiseExperiment, NoiseSpec};
use eom_adapt::sim::prepare_hartree_fock;
use eom_adapt::{Error, Result};

#[derive(Parser)]
#[command(
    name = "eom-adapt",
    version,
    about = "Adaptive ground states and EOM band energies for periodic lattices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Adaptive ground state of one integral file.
    Ground(GroundArgs),
    /// Band structure over a directory of per-k integral files.
    Bands(BandsArgs),
    /// Exact diagonalization in the N and N±1 sectors.
    Fci(FciArgs),
    /// IP and EA spectra at one k-point.
    Eom(EomArgs),
    /// Depolarizing-noise experiment with zero-noise extrapolation.
    Noise(NoiseArgs),
    /// Generate model integral files.
    #[command(subcommand)]
    Model(ModelCommand),
}

#[derive(Args, Clone)]
struct SolverArgs {
    /// Operator pool.
    #[arg(long, default_value = "gsd")]
    pool: PoolKind,
    /// Use only the anti-Hermitian pool without complementary operators.
    #[arg(long)]
    no_complement: bool,
    /// Residual-gradient threshold in Hartree.
    #[arg(long, default_value_t = 1e-3)]
    eps: f64,
    #[arg(long, default_value_t = 200)]
    max_iter: usize,
}

impl SolverArgs {
    fn ground(&self) -> GroundStateConfig {
        GroundStateConfig {
            pool: self.pool,
            complemented: !self.no_complement,
            adapt: AdaptConfig {
                epsilon: self.eps,
                max_iter: self.max_iter,
                ..AdaptConfig::default()
            },
        }
    }
}

#[derive(Args, Clone)]
struct EomFlags {
    #[arg(long, default_value_t = 0.5)]
    qpwt_min: f64,
    /// Relative overlap cutoff for canonical orthogonalization.
    #[arg(long, default_value_t = 1e-8)]
    s_tol: f64,
    /// Also solve the unprojected double-commutator equations.
    #[arg(long)]
    eom_np: bool,
    #[arg(long, value_enum, default_value = "alpha")]
    channel: ChannelArg,
    #[arg(long, value_enum, default_value = "general")]
    space: SpaceArg,
}

impl EomFlags {
    fn config(&self, formulation: Formulation) -> EomConfig {
        EomConfig {
            channel: match self.channel {
                ChannelArg::Alpha => SpinChannel::Alpha,
                ChannelArg::Beta => SpinChannel::Beta,
                ChannelArg::Both => SpinChannel::Both,
            },
            space: match self.space {
                SpaceArg::General => IndexSpace::General,
                SpaceArg::OccVirt => IndexSpace::OccupiedVirtual,
            },
            s_tol: self.s_tol,
            formulation,
        }
    }
}

#[derive(ValueEnum, Clone, Copy)]
enum ChannelArg {
    Alpha,
    Beta,
    Both,
}

#[derive(ValueEnum, Clone, Copy)]
enum SpaceArg {
    General,
    OccVirt,
}

#[derive(ValueEnum, Clone, Copy)]
enum FormatArg {
    Json,
    Csv,
    Asciiplot,
}

#[derive(ValueEnum, Clone, Copy)]
enum AlignArg {
    PerK,
    VbmZero,
}

#[derive(Args)]
struct GroundArgs {
    #[arg(long)]
    integrals: PathBuf,
    #[command(flatten)]
    solver: SolverArgs,
    /// Continue from a saved result file.
    #[arg(long)]
    resume: Option<PathBuf>,
    /// Write the full result (ansatz, angles, history) here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BandsArgs {
    #[arg(long)]
    fixture_dir: PathBuf,
    #[command(flatten)]
    solver: SolverArgs,
    #[command(flatten)]
    eom: EomFlags,
    #[arg(long, value_enum, default_value = "per-k")]
    align: AlignArg,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FciArgs {
    #[arg(long)]
    integrals: PathBuf,
    /// Twice the total Sz of the N-electron sector.
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    twice_sz: i32,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EomArgs {
    #[arg(long)]
    integrals: PathBuf,
    /// Target mesh point as `n1,n2,n3`.
    #[arg(long, default_value = "0,0,0", value_parser = parse_triple)]
    k: [usize; 3],
    #[command(flatten)]
    solver: SolverArgs,
    #[command(flatten)]
    eom: EomFlags,
    /// Write the subspace matrices and spectra here.
    #[arg(long)]
    dump: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct NoiseArgs {
    #[arg(long)]
    integrals: PathBuf,
    #[command(flatten)]
    solver: SolverArgs,
    #[arg(long, default_value_t = 0.001)]
    lambda: f64,
    #[arg(long, value_delimiter = ',', default_value = "1.0,1.25,1.5")]
    scales: Vec<f64>,
    #[arg(long, default_value_t = 1 << 17)]
    shots: u64,
    #[arg(long, default_value_t = 16)]
    repeats: usize,
    /// Seed of the first repeat; repeat i uses seed + i.
    #[arg(long, default_value_t = 2021)]
    seed: u64,
    #[arg(long, default_value_t = 0.5)]
    qpwt_min: f64,
    #[arg(long, default_value_t = eom_adapt::noise::NOISY_S_TOL)]
    s_tol: f64,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum ModelCommand {
    /// One-dimensional Hubbard ring in the band basis.
    Hubbard(HubbardArgs),
}

#[derive(Args)]
struct HubbardArgs {
    #[arg(long, default_value_t = 2)]
    cells: usize,
    #[arg(long, default_value_t = 1)]
    sites: usize,
    #[arg(long, default_value_t = 1.0)]
    t: f64,
    /// Hopping between cells; defaults to `t`.
    #[arg(long)]
    t_inter: Option<f64>,
    #[arg(long, default_value_t = 4.0)]
    u: f64,
    /// Comma-separated on-site energies, one per site of the cell.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    onsite: Vec<f64>,
    /// Total electrons in the ring.
    #[arg(long)]
    electrons: usize,
    /// Boundary twist in units of 2π.
    #[arg(long, default_value_t = 0.0)]
    twist: f64,
    /// Write one single-cell file per k-point and a path.json into `--out`.
    #[arg(long)]
    per_k: bool,
    #[arg(long)]
    out: PathBuf,
}

fn parse_triple(s: &str) -> std::result::Result<[usize; 3], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected n1,n2,n3, got `{s}`"));
    }
    let mut out = [0; 3];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p.trim().parse().map_err(|_| format!("bad integer `{p}`"))?;
    }
    Ok(out)
}

/// A run that finished but missed its convergence target.
struct NotConverged(String);

enum Failure {
    Error(Error),
    NotConverged(NotConverged),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

type Outcome = std::result::Result<(), Failure>;

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Error::Io {
            path: p.to_path_buf(),
            source: e,
        }),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn emit_json<T: Serialize>(value: &T, out: Option<&Path>) -> Result<()> {
    emit(&serde_json::to_string_pretty(value)?, out)
}

fn converged(ok: bool, what: &str) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(Failure::NotConverged(NotConverged(format!(
            "{what} did not reach the gradient threshold"
        ))))
    }
}

fn ground(a: GroundArgs) -> Outcome {
    let table = parse_kfcidump(&a.integrals)?;
    let cfg = a.solver.ground();
    let h = build_hamiltonian(&table)?;
    let pool = build_pool(&table, cfg.pool, cfg.complemented)?;
    let reference = prepare_hartree_fock(&table)?;
    let start = match &a.resume {
        Some(p) => AdaptResult::load(p)?.ansatz.rebind(&pool)?,
        None => AdaptAnsatz::default(),
    };
    let result = adapt_solve_from(start, &h, &pool, &reference, &cfg.adapt)?;
    match &a.out {
        Some(p) => {
            result.save(p)?;
            eprintln!(
                "energy {:.12} Ha, {} operators, converged {}",
                result.energy,
                result.ansatz.len(),
                result.converged
            );
        }
        None => emit_json(&result, None)?,
    }
    converged(result.converged, "ground state")
}

fn bands(a: BandsArgs) -> Outcome {
    let fixtures = load_fixture_dir(&a.fixture_dir)?;
    let cfg = BandConfig {
        ground: a.solver.ground(),
        eom: a.eom.config(Formulation::Projected),
        qpwt_min: a.eom.qpwt_min,
        eom_np: a.eom.eom_np,
        alignment: match a.align {
            AlignArg::PerK => Alignment::PerK,
            AlignArg::VbmZero => Alignment::VbmZero,
        },
    };
    let bs = band_pipeline(&fixtures, &cfg);
    let format = match a.format {
        FormatArg::Json => OutputFormat::Json,
        FormatArg::Csv => OutputFormat::Csv,
        FormatArg::Asciiplot => OutputFormat::Asciiplot,
    };
    emit(&bs.render(format)?, a.out.as_deref())?;
    for p in &bs.points {
        if let Some(e) = &p.error {
            eprintln!("{}: {e}", p.label);
        }
    }
    converged(bs.all_converged(), "at least one k-point")
}

fn fci(a: FciArgs) -> Outcome {
    let table = parse_kfcidump(&a.integrals)?;
    let h = build_hamiltonian(&table)?;
    let spectra = exact_ip_ea(&h, table.n_electrons, a.twice_sz)?;
    #[derive(Serialize)]
    struct Report<'a> {
        n_electrons: usize,
        twice_sz: i32,
        ground_energy: f64,
        gap: f64,
        ip: &'a [f64],
        ea: &'a [f64],
    }
    emit_json(
        &Report {
            n_electrons: table.n_electrons,
            twice_sz: a.twice_sz,
            ground_energy: spectra.ground_energy,
            gap: spectra.gap(),
            ip: &spectra.ip,
            ea: &spectra.ea,
        },
        a.out.as_deref(),
    )?;
    Ok(())
}

fn eom(a: EomArgs) -> Outcome {
    let table = parse_kfcidump(&a.integrals)?;
    let gs = eom_adapt::adapt::solve_ground_state(&table, &a.solver.ground())?;
    let k = KPoint(a.k);
    let mut formulations = vec![Formulation::Projected];
    if a.eom.eom_np {
        formulations.push(Formulation::Unprojected);
    }
    #[derive(Serialize)]
    struct Entry {
        sector: Sector,
        formulation: Formulation,
        labels: Vec<String>,
        excitation_energies: Vec<f64>,
        qpwt: Vec<f64>,
        lowest_quasiparticle: Option<f64>,
        retained_dim: usize,
    }
    let mut entries = Vec::new();
    let mut dumps = Vec::new();
    for &f in &formulations {
        for sector in [Sector::Ip, Sector::Ea] {
            let s = eom_spectrum(
                &table,
                &gs.state,
                &gs.hamiltonian,
                sector,
                k,
                &a.eom.config(f),
            )?;
            entries.push(Entry {
                sector,
                formulation: f,
                labels: s.problem.labels.clone(),
                excitation_energies: s.solution.excitation_energies.clone(),
                qpwt: s.solution.qpwt.clone(),
                lowest_quasiparticle: s.solution.lowest_quasiparticle(a.eom.qpwt_min).map(|x| x.1),
                retained_dim: s.solution.retained_dim,
            });
            dumps.push(s);
        }
    }
    if let Some(p) = &a.dump {
        emit_json(&dumps, Some(p))?;
    }
    #[derive(Serialize)]
    struct Report {
        ground_energy: f64,
        converged: bool,
        k: [usize; 3],
        spectra: Vec<Entry>,
    }
    emit_json(
        &Report {
            ground_energy: gs.result.energy,
            converged: gs.result.converged,
            k: a.k,
            spectra: entries,
        },
        a.out.as_deref(),
    )?;
    converged(gs.result.converged, "ground state")
}

fn noise(a: NoiseArgs) -> Outcome {
    let table = parse_kfcidump(&a.integrals)?;
    let gs = eom_adapt::adapt::solve_ground_state(&table, &a.solver.ground())?;
    let cfg = NoiseExperiment {
        spec: NoiseSpec {
            lambda: a.lambda,
            scale_factors: a.scales,
            shots: a.shots,
            repeats: a.repeats,
            ..NoiseSpec::default()
        },
        base_seed: a.seed,
        qpwt_min: a.qpwt_min,
        s_tol: a.s_tol,
        ..NoiseExperiment::default()
    };
    let report = run_noise_experiment(&table, &gs, &cfg)?;
    let text = match a.format {
        FormatArg::Csv => report.to_csv()?,
        FormatArg::Json => report.to_json()?,
        FormatArg::Asciiplot => {
            return Err(Error::InvalidInput("noise reports support json or csv".into()).into())
        }
    };
    emit(&text, a.out.as_deref())?;
    let i = &report.improvement;
    eprintln!(
        "extrapolation closer to ideal: energy {}/{}, IP {}/{}, EA {}/{}",
        i.energy, i.repeats, i.ip, i.repeats, i.ea, i.repeats
    );
    Ok(())
}

fn model(cmd: ModelCommand) -> Outcome {
    let ModelCommand::Hubbard(a) = cmd;
    let spec = HubbardSpec {
        n_cells: a.cells,
        sites_per_cell: a.sites,
        t: a.t,
        t_inter: a.t_inter.unwrap_or(a.t),
        u: a.u,
        onsite: a.onsite,
        n_electrons: a.electrons,
        twist: a.twist,
    };
    if !a.per_k {
        write_kfcidump(&hubbard_integrals(&spec)?, &a.out)?;
        return Ok(());
    }
    let points = spec
        .single_k_cells()?
        .into_iter()
        .enumerate()
        .map(|(n, cell)| {
            let point = PathPoint {
                label: format!("k{n}"),
                k: [0.0, 0.0, cell.twist],
                file: format!("k{n}.kfcidump"),
                mesh_k: [0, 0, 0],
            };
            Ok((point, hubbard_integrals(&cell)?))
        })
        .collect::<Result<Vec<_>>>()?;
    eom_adapt::bands::write_fixture_dir(&a.out, &points)?;
    Ok(())
}

fn main() -> ExitCode {
    // Usage errors are input errors, not the non-convergence code clap uses.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match cli.command {
        Command::Ground(a) => ground(a),
        Command::Bands(a) => bands(a),
        Command::Fci(a) => fci(a),
        Command::Eom(a) => eom(a),
        Command::Noise(a) => noise(a),
        Command::Model(m) => model(m),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::NotConverged(NotConverged(msg))) => {
            eprintln!("warning: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Error(e)) => {
            eprintln!("error: {e}");
            if e.is_input_error() {
                ExitCode::from(3)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
