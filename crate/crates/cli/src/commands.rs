use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use empo_core::distributions::{InputModel, SamplerMethod};
use empo_core::fixture::{table1_points, TABLE1, TABLE1_N, TABLE1_TRIALS};
use empo_core::model_select::{render_verdict, select_degree, SelectionPolicy};
use empo_core::montecarlo::{run_experiment, CounterMode, ExperimentConfig, TrialSummary};
use empo_core::polyfit::{fit_report, DataPoint};
use empo_core::theory;

use crate::grid::parse_grid;
use crate::io::{self, ReportDocument, RunMetadata, VerdictDocument};
use crate::render::render_report;
use crate::svg::write_svg;

/// Failure classes mapped to process exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags or values: exit 2.
    Usage(String),
    /// I/O, data, or numerical failure: exit 1.
    Runtime(anyhow::Error),
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Runtime(e)
    }
}

impl From<empo_core::Error> for CliError {
    fn from(e: empo_core::Error) -> Self {
        CliError::Runtime(e.into())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.into())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "empo",
    version,
    about = "Selection-sort interchange experiments and empirical-O fits"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the Monte Carlo experiment and write a TrialSummary CSV.
    Simulate(SimulateArgs),
    /// Closed-form tie probability, interchange probability and expected inversions.
    Theory(TheoryArgs),
    /// Fit a polynomial to a TrialSummary CSV and print regression tables.
    Fit(FitArgs),
    /// Choose the polynomial degree (empirical O) for a TrialSummary CSV.
    Select(SelectArgs),
    /// Simulate, fit degrees 2-4, select, and plot into a directory.
    Reproduce(ReproduceArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Exchange,
    Textbook,
    Inversions,
}

impl From<ModeArg> for CounterMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Exchange => CounterMode::ExchangeInterchanges,
            ModeArg::Textbook => CounterMode::TextbookInterchanges,
            ModeArg::Inversions => CounterMode::Inversions,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SamplerArg {
    Loop,
    Inverse,
}

impl From<SamplerArg> for SamplerMethod {
    fn from(s: SamplerArg) -> Self {
        match s {
            SamplerArg::Loop => SamplerMethod::Loop,
            SamplerArg::Inverse => SamplerMethod::Inverse,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeedArg {
    Fixed(u64),
    Auto,
}

fn parse_seed(s: &str) -> std::result::Result<SeedArg, String> {
    if s == "auto" {
        Ok(SeedArg::Auto)
    } else {
        s.parse()
            .map(SeedArg::Fixed)
            .map_err(|_| format!("expected an unsigned 64-bit integer or 'auto', got '{s}'"))
    }
}

/// Parsed `--p` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PGrid(pub Vec<f64>);

fn parse_p_grid(s: &str) -> std::result::Result<PGrid, String> {
    parse_grid(s).map(PGrid)
}

fn parse_p_value(s: &str) -> std::result::Result<f64, String> {
    let grid = parse_grid(s)?;
    match grid.as_slice() {
        [p] => Ok(*p),
        _ => Err("expected a single p value".into()),
    }
}

#[derive(Debug, Clone, Args)]
pub struct RunFlags {
    /// Master seed, or `auto` to pick one (printed and recorded).
    #[arg(long, value_parser = parse_seed)]
    pub seed: Option<SeedArg>,
    /// Worker threads; output bytes do not depend on this.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Leave the timestamp out of metadata so reruns are byte-identical.
    #[arg(long)]
    pub no_timestamp: bool,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// Grid `a..b:step` (inclusive), a comma list, or one value.
    #[arg(long, value_parser = parse_p_grid, default_value = "0.1..0.9:0.1")]
    pub p: PGrid,
    #[arg(long, value_enum, default_value = "exchange")]
    pub mode: ModeArg,
    #[arg(long, value_enum, default_value = "inverse")]
    pub sampler: SamplerArg,
    /// Output file; standard output when omitted.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub run: RunFlags,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum DistArg {
    Geometric,
    Continuous,
}

#[derive(Debug, Args)]
pub struct TheoryArgs {
    #[arg(long, value_enum, default_value = "geometric")]
    pub dist: DistArg,
    /// Required for `--dist geometric`.
    #[arg(long, value_parser = parse_p_value)]
    pub p: Option<f64>,
    #[arg(long, default_value_t = 1000)]
    pub n: u64,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Args)]
pub struct InputFlags {
    /// TrialSummary CSV (x = p, y = mean_c).
    #[arg(long, required_unless_present = "use_fixture")]
    pub input: Option<PathBuf>,
    /// Use the embedded published n = 1000 table instead of a file.
    #[arg(long, conflicts_with = "input")]
    pub use_fixture: bool,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub input: InputFlags,
    #[arg(long, default_value_t = 3)]
    pub degree: usize,
    /// Also write the full-precision report JSON here.
    #[arg(long)]
    pub json: Option<PathBuf>,
    #[arg(long)]
    pub no_timestamp: bool,
}

#[derive(Debug, Args)]
pub struct SelectArgs {
    #[command(flatten)]
    pub input: InputFlags,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1)]
    pub d_min: usize,
    #[arg(long, default_value_t = 4)]
    pub d_max: usize,
    /// Also write the verdict JSON here.
    #[arg(long)]
    pub json: Option<PathBuf>,
    #[arg(long)]
    pub no_timestamp: bool,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    #[arg(long, default_value = "reproduction")]
    pub out_dir: PathBuf,
    /// Skip simulation and fit the embedded published table.
    #[arg(long)]
    pub use_fixture: bool,
    #[arg(long, value_enum, default_value = "inverse")]
    pub sampler: SamplerArg,
    #[command(flatten)]
    pub run: RunFlags,
}

pub fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Simulate(a) => cmd_simulate(a),
        Command::Theory(a) => cmd_theory(a),
        Command::Fit(a) => cmd_fit(a),
        Command::Select(a) => cmd_select(a),
        Command::Reproduce(a) => cmd_reproduce(a),
    }
}

fn resolve_seed(seed: Option<SeedArg>) -> CliResult<u64> {
    match seed {
        None => Err(CliError::Usage(
            "--seed is required (pass an integer, or `auto` to choose one)".into(),
        )),
        Some(SeedArg::Fixed(s)) => Ok(s),
        Some(SeedArg::Auto) => {
            let nanos = std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map_or(0, |d| d.as_nanos() as u64);
            let seed = empo_core::distributions::mix_seed(nanos, std::process::id() as u64);
            eprintln!("seed: {seed}");
            Ok(seed)
        }
    }
}

/// Runs `f` on a pool of `jobs` threads when given.
fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> CliResult<T> {
    match jobs {
        Some(0) => Err(CliError::Usage("--jobs must be at least 1".into())),
        #[cfg(feature = "parallel")]
        Some(j) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(j)
                .build()
                .context("building thread pool")?;
            Ok(pool.install(f))
        }
        _ => Ok(f()),
    }
}

fn config_json(cfg: &ExperimentConfig) -> serde_json::Value {
    serde_json::to_value(cfg).expect("config serializes")
}

fn simulate(cfg: &ExperimentConfig, jobs: Option<usize>) -> CliResult<Vec<TrialSummary>> {
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(with_jobs(jobs, || run_experiment(cfg))??)
}

fn write_output(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

pub fn cmd_simulate(a: SimulateArgs) -> CliResult<()> {
    let seed = resolve_seed(a.run.seed)?;
    let cfg = ExperimentConfig {
        n: a.n,
        trials: a.trials,
        p_values: a.p.0,
        counter_mode: a.mode.into(),
        master_seed: seed,
        sampler_method: a.sampler.into(),
    };
    let rows = simulate(&cfg, a.run.jobs)?;
    let meta = RunMetadata::new(Some(seed), config_json(&cfg), !a.run.no_timestamp);
    write_output(a.out.as_deref(), &io::csv_string(&rows, &meta))
}

pub fn cmd_theory(a: TheoryArgs) -> CliResult<()> {
    let model = match a.dist {
        DistArg::Continuous => InputModel::ContinuousUniform,
        DistArg::Geometric => {
            let p =
                a.p.ok_or_else(|| CliError::Usage("--p is required for --dist geometric".into()))?;
            InputModel::geometric(p).map_err(|e| CliError::Usage(e.to_string()))?
        }
    };
    if a.n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    let pred = theory::predict(model, a.n);
    if a.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&pred).expect("prediction serializes")
        );
    } else {
        let dist = match model {
            InputModel::ContinuousUniform => "continuous uniform".to_string(),
            InputModel::Geometric { p } => format!("geometric(p = {})", p.p()),
        };
        println!("input model:              {dist}");
        println!("n:                        {}", a.n);
        println!("pairs compared:           {}", theory::pair_count(a.n));
        println!("tie probability:          {}", pred.tie_probability);
        println!("interchange probability:  {}", pred.interchange_probability);
        println!("expected interchanges:    {}", pred.expected_interchanges);
        println!("(expected inversion count of the unsorted input)");
    }
    Ok(())
}

fn load_points(input: &InputFlags) -> CliResult<(Vec<DataPoint>, serde_json::Value)> {
    if input.use_fixture {
        return Ok((
            table1_points(),
            json!("embedded published table (n=1000, 100 trials)"),
        ));
    }
    let path = input
        .input
        .as_ref()
        .expect("clap enforces --input or --use-fixture");
    let rows = io::read_csv_file(path)?;
    Ok((io::to_points(&rows), json!(path.display().to_string())))
}

pub fn cmd_fit(a: FitArgs) -> CliResult<()> {
    let (points, source) = load_points(&a.input)?;
    let report = fit_report(&points, a.degree, "p")
        .with_context(|| format!("fitting degree {}", a.degree))?;
    print!("{}", render_report(&report));
    if let Some(path) = &a.json {
        let meta = RunMetadata::new(
            None,
            json!({"input": source, "degree": a.degree}),
            !a.no_timestamp,
        );
        let doc = ReportDocument {
            report,
            metadata: meta,
        };
        write_output(Some(path), &io::to_json(&doc))?;
    }
    Ok(())
}

pub fn cmd_select(a: SelectArgs) -> CliResult<()> {
    let policy = SelectionPolicy {
        alpha: a.alpha,
        d_min: a.d_min,
        d_max: a.d_max,
    };
    let (points, source) = load_points(&a.input)?;
    if let Err(e @ empo_core::Error::InvalidPolicy(_)) = policy.validate(points.len()) {
        return Err(CliError::Usage(e.to_string()));
    }
    let verdict = select_degree(&points, policy).context("selecting degree")?;
    print!("{}", render_verdict(&verdict));
    if let Some(path) = &a.json {
        let meta = RunMetadata::new(
            None,
            json!({"input": source, "policy": policy}),
            !a.no_timestamp,
        );
        let doc = VerdictDocument {
            verdict,
            metadata: meta,
        };
        write_output(Some(path), &io::to_json(&doc))?;
    }
    Ok(())
}

fn write_file(dir: &Path, name: &str, text: &str) -> CliResult<()> {
    let path = dir.join(name);
    fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

pub fn cmd_reproduce(a: ReproduceArgs) -> CliResult<()> {
    fs::create_dir_all(&a.out_dir).with_context(|| format!("creating {}", a.out_dir.display()))?;
    let dir = a.out_dir.as_path();
    let stamp = !a.run.no_timestamp;

    let fixture_rows: Vec<TrialSummary> = TABLE1
        .iter()
        .map(|r| TrialSummary {
            p: r.p,
            n: TABLE1_N,
            trials: TABLE1_TRIALS,
            mean_c: r.mean_c,
            sd_c: r.sd_c,
            cv_c: Some(r.cv_c),
        })
        .collect();
    let fixture_meta = RunMetadata::new(None, json!("published table, verbatim"), stamp);
    write_file(
        dir,
        "table1.csv",
        &io::csv_string(&fixture_rows, &fixture_meta),
    )?;

    let (rows, meta) = if a.use_fixture {
        (fixture_rows.clone(), fixture_meta)
    } else {
        let seed = resolve_seed(a.run.seed)?;
        let mut cfg = ExperimentConfig::reference_default(seed);
        cfg.sampler_method = a.sampler.into();
        let rows = simulate(&cfg, a.run.jobs)?;
        let meta = RunMetadata::new(Some(seed), config_json(&cfg), stamp);
        write_file(dir, "table1_repro.csv", &io::csv_string(&rows, &meta))?;
        write_file(dir, "comparison.csv", &comparison_csv(&rows, &meta))?;
        (rows, meta)
    };
    let points = io::to_points(&rows);

    let mut fits = Vec::new();
    for degree in [2usize, 3, 4] {
        let report = fit_report(&points, degree, "p")?;
        write_file(
            dir,
            &format!("tables_d{degree}.txt"),
            &render_report(&report),
        )?;
        let doc = ReportDocument {
            report: report.clone(),
            metadata: RunMetadata {
                config: json!({"fit_degree": degree, "data": meta.config}),
                ..meta.clone()
            },
        };
        write_file(dir, &format!("fit_d{degree}.json"), &io::to_json(&doc))?;
        fits.push(report);
    }

    let verdict = select_degree(&points, SelectionPolicy::default())?;
    write_file(dir, "verdict.txt", &render_verdict(&verdict))?;
    let doc = VerdictDocument {
        verdict: verdict.clone(),
        metadata: RunMetadata {
            config: json!({"policy": SelectionPolicy::default(), "data": meta.config}),
            ..meta.clone()
        },
    };
    write_file(dir, "verdict.json", &io::to_json(&doc))?;

    let titles = [
        "Degree 2 fit of mean c against p",
        "Degree 3 fit of mean c against p",
        "Degree 4 fit of mean c against p",
    ];
    for (k, (report, title)) in fits.iter().zip(titles).enumerate() {
        let label = format!("degree {}", report.model.degree);
        let svg = write_svg(title, &points, &[(label, report.model.clone())]);
        write_file(dir, &format!("fig{}.svg", k + 1), &svg)?;
    }
    let svg = write_svg(
        "Cubic fit of mean c against p",
        &points,
        &[("cubic".to_string(), fits[1].model.clone())],
    );
    write_file(dir, "fig4.svg", &svg)?;

    println!(
        "{}",
        render_verdict(&verdict).lines().next().unwrap_or_default()
    );
    println!("artifacts written to {}", dir.display());
    Ok(())
}

/// Simulated cells next to the published means and the closed-form inversion expectation.
fn comparison_csv(rows: &[TrialSummary], meta: &RunMetadata) -> String {
    let mut out = String::new();
    out.push_str("# simulated vs published exchange-sort interchange means\n");
    out.push_str(
        "# expected_inversions is the closed-form expectation of the inversion count, \
         n(n-1)/2 * (1-p)/(2-p); it is not an expectation of exchange-sort swaps and is \
         several times larger than the measured means\n",
    );
    out.push_str(&format!(
        "# master_seed: {}\n",
        meta.master_seed.unwrap_or_default()
    ));
    out.push_str("p,sim_mean_c,sim_sd_c,published_mean_c,published_sd_c,z_vs_published,expected_inversions,inversions_over_sim\n");
    for r in rows {
        let published = TABLE1.iter().find(|t| (t.p - r.p).abs() < 1e-12);
        let theory = theory::expected_interchanges(
            InputModel::geometric(r.p).expect("validated p"),
            r.n as u64,
        );
        let (pm, psd, z) = match published {
            Some(t) if r.n == TABLE1_N => {
                let se = t.sd_c / (TABLE1_TRIALS as f64).sqrt();
                (
                    t.mean_c.to_string(),
                    t.sd_c.to_string(),
                    ((r.mean_c - t.mean_c) / se).to_string(),
                )
            }
            _ => (String::new(), String::new(), String::new()),
        };
        let ratio = if r.mean_c > 0.0 {
            (theory / r.mean_c).to_string()
        } else {
            String::new()
        };
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.p, r.mean_c, r.sd_c, pm, psd, z, theory, ratio
        ));
    }
    out
}
