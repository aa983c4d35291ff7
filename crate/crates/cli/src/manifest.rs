use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use ncap_core::aggregate::score_table;
use ncap_core::scores::parse_score_table;
use ncap_core::{
    classify, parse_feature_matrix, resolve_missing, AutonomyLevel, CapabilityProfile, EvalConfig,
    FeatureMatrix, Method, MissingValuePolicy, NcapError, ScoreTable, WeightVector,
};

#[derive(Debug)]
pub enum CliError {
    Core {
        context: String,
        source: NcapError,
    },
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    Usage(String),
}

impl CliError {
    pub fn class(&self) -> &'static str {
        match self {
            Self::Core { source, .. } => source.class(),
            Self::Io { .. } => "IoError",
            Self::Usage(_) => "UsageError",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Core { context, source } if context.is_empty() => write!(f, "{source}"),
            Self::Core { context, source } => write!(f, "{context}: {source}"),
            Self::Io { path, source } => write!(f, "{}: {source}", path.display()),
            Self::Usage(msg) => f.write_str(msg),
        }
    }
}

impl From<NcapError> for CliError {
    fn from(source: NcapError) -> Self {
        Self::Core {
            context: String::new(),
            source,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

trait Context<T> {
    fn context(self, path: &Path) -> CliResult<T>;
}

impl<T> Context<T> for Result<T, NcapError> {
    fn context(self, path: &Path) -> CliResult<T> {
        self.map_err(|source| CliError::Core {
            context: path.display().to_string(),
            source,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum WeightChoice {
    Uniform,
    Config,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Table,
    Csv,
    Jsonl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum MissingChoice {
    Error,
    Mean,
    Exclude,
}

impl From<MissingChoice> for MissingValuePolicy {
    fn from(c: MissingChoice) -> Self {
        match c {
            MissingChoice::Error => Self::Error,
            MissingChoice::Mean => Self::ColumnMean,
            MissingChoice::Exclude => Self::Exclude,
        }
    }
}

/// Everything one command needs: inputs, methods and output settings.
#[derive(Debug, Clone)]
pub struct RunManifest {
    pub matrix: Option<PathBuf>,
    pub config: Option<PathBuf>,
    pub scores: Option<PathBuf>,
    pub methods: Vec<Method>,
    pub weights: WeightChoice,
    pub missing: Option<MissingValuePolicy>,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    pub reference: Option<String>,
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

impl RunManifest {
    pub fn validate(&self) -> CliResult<()> {
        if self.methods.is_empty() {
            return Err(CliError::Usage("at least one method is required".into()));
        }
        for path in [&self.matrix, &self.config, &self.scores]
            .into_iter()
            .flatten()
        {
            if !path.exists() {
                return Err(CliError::Io {
                    path: path.clone(),
                    source: std::io::Error::new(std::io::ErrorKind::NotFound, "file not found"),
                });
            }
        }
        Ok(())
    }

    pub fn load_config(&self) -> CliResult<EvalConfig> {
        let path = self
            .config
            .as_ref()
            .ok_or_else(|| CliError::Usage("--config is required".into()))?;
        EvalConfig::from_toml(&read(path)?).context(path)
    }

    pub fn load_matrix(&self, config: &EvalConfig) -> CliResult<FeatureMatrix> {
        let path = self
            .matrix
            .as_ref()
            .ok_or_else(|| CliError::Usage("--matrix is required".into()))?;
        parse_feature_matrix(&read(path)?, config).context(path)
    }

    /// N_CP scores for the requested methods, either read from `--scores`
    /// or computed from `--matrix` and `--config`.
    pub fn score_table(&self) -> CliResult<ScoreTable> {
        if let Some(path) = &self.scores {
            let all = parse_score_table(&read(path)?).context(path)?;
            let mut table = ScoreTable::new(all.platforms().to_vec());
            for &m in &self.methods {
                let col = all.column(m).ok_or_else(|| CliError::Core {
                    context: path.display().to_string(),
                    source: NcapError::Config(format!("no `{m}` column")),
                })?;
                table.insert(m, col.to_vec())?;
            }
            return Ok(table);
        }
        let Some(matrix_path) = &self.matrix else {
            return Err(CliError::Usage(
                "either --scores or --matrix with --config is required".into(),
            ));
        };
        let config = self.load_config()?;
        let matrix = self.load_matrix(&config)?;
        let policy = self.missing.unwrap_or(config.missing);
        let resolved = resolve_missing(&matrix, policy).context(matrix_path)?;
        let weights = match self.weights {
            WeightChoice::Uniform => WeightVector::uniform(matrix.n_features())?,
            WeightChoice::Config => {
                let config_path = self.config.as_deref().unwrap_or(matrix_path);
                config
                    .weights_for(matrix.features())
                    .and_then(WeightVector::user_defined)
                    .context(config_path)?
            }
        };
        score_table(&resolved, &weights, &self.methods, config.zscore).context(matrix_path)
    }

    /// Autonomy level per platform from the config's capability profiles.
    pub fn levels(&self) -> CliResult<Vec<(CapabilityProfile, AutonomyLevel)>> {
        let config = self.load_config()?;
        config
            .profiles
            .into_iter()
            .map(|p| {
                let level = classify(&p)?;
                Ok((p, level))
            })
            .collect()
    }

    pub fn level_map(&self) -> CliResult<HashMap<String, u8>> {
        Ok(self
            .levels()?
            .into_iter()
            .map(|(p, l)| (p.platform, l.value))
            .collect())
    }
}

/// Every platform in `platforms` must have a level.
pub fn require_levels(platforms: &[String], levels: &HashMap<String, u8>) -> CliResult<()> {
    match platforms.iter().find(|p| !levels.contains_key(*p)) {
        Some(p) => {
            Err(NcapError::Config(format!("no capability profile for platform `{p}`")).into())
        }
        None => Ok(()),
    }
}
