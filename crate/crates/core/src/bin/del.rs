//! Command-line front end: ingestion -> sampling -> features -> analysis.
//!
//! Exit codes: 0 success, 2 configuration error, 3 data error, 4 numeric
//! error, 5 analysis criteria failed.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use del_core::analysis::{
    classical_mds, energy_curve, expressivity_report, expressivity_report_for,
    layout_distance_matrix, ExpressivityOutput, KDE_MODE_GRID,
};
use del_core::archive::{read_archive, write_archive};
use del_core::error::Error;
use del_core::features::{feature_tensor, write_features, write_features_csv, EdgeFeatureTensor};
use del_core::graph::{parse_tudataset, read_edge_list, Dataset, Graph};
use del_core::layout::{LayoutAlgorithm, LayoutParams};
use del_core::sampler::{sample_dataset, LayoutEnsemble, SampleConfig, ThreadBudget};

const EXIT_CONFIG: u8 = 2;
const EXIT_DATA: u8 = 3;
const EXIT_NUMERIC: u8 = 4;
const EXIT_CRITERIA: u8 = 5;

#[derive(Parser)]
#[command(
    name = "del",
    version,
    about = "Distributional edge layouts: sample steady-state graph layouts and build edge features"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample layout ensembles into a binary archive plus energy-trace CSVs.
    Sample(SampleArgs),
    /// Build per-edge length features (.delf, optional CSV mirror).
    Features(FeaturesArgs),
    /// Export energy curves, layout-distance matrices, and MDS coordinates.
    Analyze(AnalyzeArgs),
    /// Run the GTW expressivity analysis on a 1-WL-indistinguishable pair.
    Expressivity(ExpressivityArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoFlag {
    /// Fruchterman-Reingold spring-electrical model.
    Fr,
    /// Kamada-Kawai all-pairs spring model.
    Kk,
    /// Generalized (a, r) force model.
    Ar,
}

#[derive(Args)]
struct LayoutFlags {
    /// Layout algorithm.
    #[arg(long, value_enum, default_value = "fr")]
    algo: AlgoFlag,

    /// Layouts sampled per graph (k).
    #[arg(long, default_value_t = 8)]
    layouts: usize,

    /// Iteration budget per layout (force steps, or KK outer sweeps).
    #[arg(long, default_value_t = 50)]
    iterations: usize,

    /// Layout dimension (>= 2).
    #[arg(long, default_value_t = 2)]
    dim: usize,

    /// Attractive force coefficient.
    #[arg(long, default_value_t = 1.0)]
    kattr: f64,

    /// Repulsive force coefficient.
    #[arg(long, default_value_t = 1.0)]
    krep: f64,

    /// Attraction exponent of the (a, r) model (used by --algo ar).
    #[arg(long = "a-exp", default_value_t = 2.0, allow_hyphen_values = true)]
    a_exp: f64,

    /// Repulsion exponent of the (a, r) model (used by --algo ar).
    #[arg(long = "r-exp", default_value_t = -1.0, allow_hyphen_values = true)]
    r_exp: f64,

    /// Initial step size.
    #[arg(long, default_value_t = 0.1)]
    step: f64,

    /// Step-size fraction retained per iteration, in (0, 1].
    #[arg(long, default_value_t = 0.95)]
    cooling: f64,

    /// Langevin noise scale (temperature); 0 = deterministic descent.
    #[arg(long, default_value_t = 0.0)]
    noise: f64,

    /// Convergence threshold on the largest KK gradient norm.
    #[arg(long = "kk-tolerance", default_value_t = 1e-4)]
    kk_tolerance: f64,

    /// Half-width of the uniform random initialization box.
    #[arg(long = "init-box", default_value_t = 1.0)]
    init_box: f64,

    /// Base seed; per-layout seeds derive from (seed, graph id, index).
    #[arg(long, default_value_t = 42)]
    seed: u64,

    /// Worker threads: "auto" or a positive count. Affects speed only.
    #[arg(long, default_value = "auto")]
    threads: String,
}

impl LayoutFlags {
    fn sample_config(&self) -> Result<SampleConfig, Error> {
        let algorithm = match self.algo {
            AlgoFlag::Fr => LayoutAlgorithm::FruchtermanReingold,
            AlgoFlag::Kk => LayoutAlgorithm::KamadaKawai,
            AlgoFlag::Ar => LayoutAlgorithm::ArModel,
        };
        let thread_budget = match self.threads.as_str() {
            "auto" => ThreadBudget::Auto,
            other => {
                let n: usize = other.parse().map_err(|_| {
                    Error::Config(format!("--threads must be \"auto\" or a count, got {other:?}"))
                })?;
                if n == 0 {
                    return Err(Error::Config("--threads must be >= 1".into()));
                }
                ThreadBudget::Fixed(n)
            }
        };
        if self.layouts == 0 {
            return Err(Error::Config("--layouts must be >= 1".into()));
        }
        let cfg = SampleConfig {
            layouts_per_graph: self.layouts,
            base_seed: self.seed,
            layout_params: LayoutParams {
                algorithm,
                dim: self.dim,
                iterations: self.iterations,
                k_attr: self.kattr,
                k_rep: self.krep,
                a_exp: self.a_exp,
                r_exp: self.r_exp,
                step_size: self.step,
                cooling: self.cooling,
                noise_scale: self.noise,
                kk_spring_k: self.kattr,
                kk_tolerance: self.kk_tolerance,
                init_box: self.init_box,
            },
            thread_budget,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Args)]
struct SampleArgs {
    /// Dataset directory (TUDataset layout) or edge-list file.
    #[arg(long)]
    input: PathBuf,

    /// Output directory.
    #[arg(long, default_value = "del-out")]
    output: PathBuf,

    #[command(flatten)]
    layout: LayoutFlags,
}

#[derive(Args)]
struct FeaturesArgs {
    /// Dataset to sample in one-shot mode (directory or edge-list file).
    #[arg(long)]
    input: Option<PathBuf>,

    /// Existing layout archive (written by `del sample`).
    #[arg(long)]
    archive: Option<PathBuf>,

    /// Output directory.
    #[arg(long, default_value = "del-out")]
    output: PathBuf,

    /// Also write the CSV mirror of the feature file.
    #[arg(long)]
    csv: bool,

    #[command(flatten)]
    layout: LayoutFlags,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Dataset directory or edge-list file.
    #[arg(long)]
    input: PathBuf,

    /// Output directory.
    #[arg(long, default_value = "del-out")]
    output: PathBuf,

    /// Export the mean energy-per-iteration curve.
    #[arg(long)]
    curve: bool,

    /// Export per-graph layout-distance matrices.
    #[arg(long = "layout-distance")]
    layout_distance: bool,

    /// Export per-graph 2D MDS coordinates of the layout distances.
    #[arg(long)]
    mds: bool,

    #[command(flatten)]
    layout: LayoutFlags,
}

#[derive(Args)]
struct ExpressivityArgs {
    /// Output directory.
    #[arg(long, default_value = "del-out")]
    output: PathBuf,

    /// GTW samples per graph.
    #[arg(long, default_value_t = 50)]
    samples: usize,

    /// Two edge-list files to compare instead of the built-in pair.
    #[arg(long, num_args = 2, value_names = ["FIRST", "SECOND"])]
    pair: Option<Vec<PathBuf>>,

    #[command(flatten)]
    layout: LayoutFlags,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("DEL_LOG")).init();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Sample(args) => cmd_sample(args),
        Command::Features(args) => cmd_features(args),
        Command::Analyze(args) => cmd_analyze(args),
        Command::Expressivity(args) => cmd_expressivity(args),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(classify(&e))
        }
    }
}

fn classify(e: &Error) -> u8 {
    match e {
        Error::Config(_) => EXIT_CONFIG,
        Error::NumericDegeneracy(_) => EXIT_NUMERIC,
        Error::Sampling(_) => {
            if e.is_numeric() {
                EXIT_NUMERIC
            } else {
                EXIT_DATA
            }
        }
        _ => EXIT_DATA,
    }
}

/// Directory -> TUDataset, file -> single-graph edge list.
fn load_dataset(path: &Path) -> Result<Dataset, Error> {
    if path.is_dir() {
        parse_tudataset(path)
    } else {
        let parsed = read_edge_list(path)?;
        if parsed.warnings > 0 {
            log::warn!(
                "{}: dropped {} duplicate/self-loop edge(s)",
                path.display(),
                parsed.warnings
            );
        }
        let name = parsed.graph.graph_id().to_string();
        Ok(Dataset {
            name,
            graphs: vec![parsed.graph],
        })
    }
}

fn ensure_dir(path: &Path) -> Result<(), Error> {
    fs::create_dir_all(path)?;
    Ok(())
}

fn sanitize(id: &str) -> String {
    id.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' })
        .collect()
}

fn write_traces_csv(path: &Path, ensembles: &[LayoutEnsemble]) -> Result<(), Error> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "graph_id,layout_idx,iteration,energy")?;
    for ens in ensembles {
        for (li, trace) in ens.traces.iter().enumerate() {
            for (t, e) in trace.0.iter().enumerate() {
                writeln!(w, "{},{li},{t},{:.16e}", ens.graph_id, e)?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

fn cmd_sample(args: SampleArgs) -> Result<ExitCode, Error> {
    let cfg = args.layout.sample_config()?;
    let ds = load_dataset(&args.input)?;
    ensure_dir(&args.output)?;

    let start = Instant::now();
    let ensembles = sample_dataset(&ds, &cfg)?;
    let elapsed = start.elapsed();

    let entries: Vec<(Graph, LayoutEnsemble)> = ds
        .graphs
        .iter()
        .cloned()
        .zip(ensembles.iter().cloned())
        .collect();
    write_archive(&args.output.join("layouts.della"), &entries)?;
    write_traces_csv(&args.output.join("energy_traces.csv"), &ensembles)?;

    println!(
        "sampled {} graph(s) x {} layout(s) in {:.3} s",
        ds.len(),
        cfg.layouts_per_graph,
        elapsed.as_secs_f64()
    );
    for ens in &ensembles {
        let mean_energy: f64 =
            ens.layouts.iter().map(|l| l.final_energy).sum::<f64>() / ens.len() as f64;
        let mean_iters: f64 =
            ens.layouts.iter().map(|l| l.iterations_run as f64).sum::<f64>() / ens.len() as f64;
        println!(
            "  {}: n={} m={} mean final energy {:.4} mean iterations {:.1}",
            ens.graph_id,
            entries
                .iter()
                .find(|(g, _)| g.graph_id() == ens.graph_id)
                .map(|(g, _)| g.node_count())
                .unwrap_or(0),
            entries
                .iter()
                .find(|(g, _)| g.graph_id() == ens.graph_id)
                .map(|(g, _)| g.edge_count())
                .unwrap_or(0),
            mean_energy,
            mean_iters
        );
    }
    println!("wrote {}", args.output.join("layouts.della").display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_features(args: FeaturesArgs) -> Result<ExitCode, Error> {
    let cfg = args.layout.sample_config()?;
    ensure_dir(&args.output)?;

    let entries: Vec<(Graph, LayoutEnsemble)> = match (&args.archive, &args.input) {
        (Some(archive), _) => read_archive(archive)?,
        (None, Some(input)) => {
            let ds = load_dataset(input)?;
            let ensembles = sample_dataset(&ds, &cfg)?;
            ds.graphs.into_iter().zip(ensembles).collect()
        }
        (None, None) => {
            return Err(Error::Format(
                "no input: pass --archive <file> or --input <dataset> for one-shot sampling"
                    .into(),
            ))
        }
    };

    let tensors: Vec<EdgeFeatureTensor> = entries
        .iter()
        .map(|(g, ens)| feature_tensor(ens, g))
        .collect::<Result<_, _>>()?;

    let delf_path = args.output.join("features.delf");
    write_features(&delf_path, &tensors)?;
    println!("wrote {} ({} graphs)", delf_path.display(), tensors.len());
    if args.csv {
        let csv_path = args.output.join("features.csv");
        write_features_csv(&csv_path, &tensors)?;
        println!("wrote {}", csv_path.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<ExitCode, Error> {
    if !(args.curve || args.layout_distance || args.mds) {
        return Err(Error::Config(
            "nothing to do: pass --curve, --layout-distance, and/or --mds".into(),
        ));
    }
    let cfg = args.layout.sample_config()?;
    let ds = load_dataset(&args.input)?;
    ensure_dir(&args.output)?;

    if args.curve {
        let curve = energy_curve(&ds, &cfg, args.layout.iterations)?;
        let path = args.output.join("energy_curve.csv");
        let mut w = BufWriter::new(File::create(&path)?);
        writeln!(w, "iteration,mean_energy")?;
        for (t, e) in curve.iter().enumerate() {
            writeln!(w, "{t},{e:.16e}")?;
        }
        w.flush()?;
        println!("wrote {} ({} rows)", path.display(), curve.len());
    }

    if args.layout_distance || args.mds {
        let ensembles = sample_dataset(&ds, &cfg)?;
        for (g, ens) in ds.graphs.iter().zip(&ensembles) {
            let matrix = layout_distance_matrix(ens, g)?;
            let tag = sanitize(g.graph_id());
            if args.layout_distance {
                let path = args.output.join(format!("layout_distance_{tag}.csv"));
                let mut w = BufWriter::new(File::create(&path)?);
                let k = matrix.layout_count();
                let header: Vec<String> = (0..k).map(|j| format!("layout_{j}")).collect();
                writeln!(w, "{}", header.join(","))?;
                for i in 0..k {
                    let row: Vec<String> =
                        (0..k).map(|j| format!("{:.16e}", matrix.get(i, j))).collect();
                    writeln!(w, "{}", row.join(","))?;
                }
                w.flush()?;
                println!("wrote {}", path.display());
            }
            if args.mds {
                let embedding = classical_mds(&matrix)?;
                let path = args.output.join(format!("mds_{tag}.csv"));
                let mut w = BufWriter::new(File::create(&path)?);
                writeln!(w, "layout_idx,x,y")?;
                for (i, c) in embedding.coords.iter().enumerate() {
                    writeln!(w, "{i},{:.16e},{:.16e}", c[0], c[1])?;
                }
                w.flush()?;
                println!(
                    "wrote {} (variance fraction {:.4})",
                    path.display(),
                    embedding.variance_fraction
                );
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_expressivity(args: ExpressivityArgs) -> Result<ExitCode, Error> {
    let cfg = args.layout.sample_config()?;
    ensure_dir(&args.output)?;

    let output: ExpressivityOutput = match &args.pair {
        Some(paths) => {
            let g1 = read_edge_list(&paths[0])?.graph;
            let g2 = read_edge_list(&paths[1])?.graph;
            expressivity_report_for(&g1, &g2, &cfg, args.samples)?
        }
        None => expressivity_report(&cfg, args.samples)?,
    };
    let report = &output.report;

    let json_path = args.output.join("summary.json");
    let json = serde_json::to_string_pretty(report)
        .map_err(|e| Error::Format(format!("failed to serialize report: {e}")))?;
    fs::write(&json_path, json + "\n")?;

    let samples_path = args.output.join("gtw_samples.csv");
    let mut w = BufWriter::new(File::create(&samples_path)?);
    writeln!(w, "graph_id,sample_idx,gtw")?;
    for dist in &output.distributions {
        for (i, v) in dist.samples.iter().enumerate() {
            writeln!(w, "{},{i},{v:.16e}", dist.graph_id)?;
        }
    }
    w.flush()?;

    for dist in &output.distributions {
        let h = dist.bandwidth();
        let lo = dist.summary.min - 3.0 * h;
        let hi = dist.summary.max + 3.0 * h;
        let path = args
            .output
            .join(format!("kde_{}.csv", sanitize(&dist.graph_id)));
        let mut w = BufWriter::new(File::create(&path)?);
        writeln!(w, "x,density")?;
        for (x, density) in dist.kde.grid(lo, hi, KDE_MODE_GRID) {
            writeln!(w, "{x:.16e},{density:.16e}")?;
        }
        w.flush()?;
    }

    print!("{}", report.render_text());
    println!("wrote {}", json_path.display());

    if report.passed() {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!(
            "expressivity criteria failed: distinguishable={} stable={}",
            report.distinguishable, report.stable
        );
        Ok(ExitCode::from(EXIT_CRITERIA))
    }
}
