mod manifest;
mod render;

use std::io::{IsTerminal, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ncap_core::scores::coordinates;
use ncap_core::{consensus_report, distance_report, Method, RankTable};

use manifest::{
    require_levels, CliError, CliResult, MissingChoice, OutputFormat, RunManifest, WeightChoice,
};

#[derive(Parser, Debug)]
#[command(name = "ncap", version)]
#[command(
    about = "Score platform autonomy: component performance, autonomy level and NCAP distances"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Component-performance scores and ranks per method
    Score(CommonArgs),
    /// Autonomy level of each capability profile
    Level(CommonArgs),
    /// Absolute and relative potential autonomy distances
    Distance {
        #[command(flatten)]
        common: CommonArgs,
        /// Pin the reference platform instead of taking the largest distance
        #[arg(long)]
        reference: Option<String>,
    },
    /// NCAP coordinates for external plotting
    Plotdata(CommonArgs),
    /// Rank agreement across methods
    Compare(CommonArgs),
}

#[derive(Debug, Clone)]
struct MethodList(Vec<Method>);

fn parse_methods(s: &str) -> Result<MethodList, String> {
    Method::parse_list(s)
        .map(MethodList)
        .map_err(|e| e.to_string())
}

#[derive(Args, Debug)]
struct CommonArgs {
    /// Feature matrix (comma-separated, first column = platform id)
    #[arg(long)]
    matrix: Option<PathBuf>,

    /// Evaluation config (TOML)
    #[arg(long)]
    config: Option<PathBuf>,

    /// Precomputed N_CP scores (platform column plus one column per method)
    #[arg(long)]
    scores: Option<PathBuf>,

    /// Comma-separated methods: max,sum,map,zsc,product
    #[arg(long, value_parser = parse_methods, default_value = "max,map,zsc,sum,product")]
    methods: MethodList,

    #[arg(long, value_enum, default_value = "uniform")]
    weights: WeightChoice,

    /// Overrides the config's missing-value policy
    #[arg(long, value_enum)]
    missing: Option<MissingChoice>,

    #[arg(long, value_enum, default_value = "table")]
    format: OutputFormat,

    /// Write output here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

impl CommonArgs {
    fn manifest(self, reference: Option<String>) -> RunManifest {
        RunManifest {
            matrix: self.matrix,
            config: self.config,
            scores: self.scores,
            methods: self.methods.0,
            weights: self.weights,
            missing: self.missing.map(Into::into),
            format: self.format,
            out: self.out,
            reference,
        }
    }
}

fn use_color(m: &RunManifest) -> bool {
    m.out.is_none()
        && m.format == OutputFormat::Table
        && std::env::var_os("NCAP_NO_COLOR").is_none()
        && std::io::stdout().is_terminal()
}

fn cmd_score(m: &RunManifest) -> CliResult<String> {
    let table = m.score_table()?;
    let ranks = RankTable::from_scores(&table)?;
    let levels = match &m.config {
        Some(_) => Some(m.level_map()?).filter(|l| !l.is_empty()),
        None => None,
    };
    Ok(render::scores(
        &table,
        &ranks,
        levels.as_ref(),
        m.format,
        use_color(m),
    ))
}

fn cmd_level(m: &RunManifest) -> CliResult<String> {
    let rows = m.levels()?;
    if m.matrix.is_some() {
        let config = m.load_config()?;
        let matrix = m.load_matrix(&config)?;
        let levels = rows
            .iter()
            .map(|(p, l)| (p.platform.clone(), l.value))
            .collect();
        require_levels(matrix.platforms(), &levels)?;
    }
    Ok(render::levels(&rows, m.format, use_color(m)))
}

fn cmd_distance(m: &RunManifest) -> CliResult<String> {
    let table = m.score_table()?;
    let levels = m.level_map()?;
    require_levels(table.platforms(), &levels)?;
    let reports = m
        .methods
        .iter()
        .map(|&method| {
            let coords = coordinates(&table, &levels, method)?;
            Ok(distance_report(&coords, m.reference.as_deref())?)
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(render::distances(&reports, m.format, use_color(m)))
}

fn cmd_plotdata(m: &RunManifest) -> CliResult<String> {
    let table = m.score_table()?;
    let levels = m.level_map()?;
    require_levels(table.platforms(), &levels)?;
    let mut coords = Vec::new();
    for &method in &m.methods {
        coords.extend(coordinates(&table, &levels, method)?);
    }
    Ok(render::plot(&coords, m.format))
}

fn cmd_compare(m: &RunManifest) -> CliResult<String> {
    let table = m.score_table()?;
    let stats = consensus_report(&RankTable::from_scores(&table)?)?;
    Ok(render::agreement(&stats, m.format, use_color(m)))
}

fn run(cli: Cli) -> CliResult<()> {
    let (manifest, command): (RunManifest, fn(&RunManifest) -> CliResult<String>) =
        match cli.command {
            Command::Score(a) => (a.manifest(None), cmd_score),
            Command::Level(a) => (a.manifest(None), cmd_level),
            Command::Distance { common, reference } => (common.manifest(reference), cmd_distance),
            Command::Plotdata(a) => (a.manifest(None), cmd_plotdata),
            Command::Compare(a) => (a.manifest(None), cmd_compare),
        };
    manifest.validate()?;
    let output = command(&manifest)?;
    match &manifest.out {
        Some(path) => std::fs::write(path, output).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(output.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}]: {}", e.class(), e.to_string().replace('\n', " "));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
