//! Command-line front end.
//!
//! Settings come from built-in defaults, then an optional `key=value` config
//! file, then flags; later sources win. Exit codes: 0 success, 1 internal
//! failure, 2 usage error (reported as one line on stderr).

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::Parser;

use crate::experiment::{run_experiment, ExperimentConfig};
use crate::output::{render_table, write_bundle, OutputFormat};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub const DEFAULT_OUT_DIR: &str = "results";

#[derive(Debug, Parser)]
#[command(
    name = "taxicab",
    version,
    about = "Sample and verify the Manhattan distance between uniform points of [0,1]^n"
)]
struct Args {
    /// Comma-separated dimensions, e.g. 1,2,3,5,10,20,50,100
    #[arg(long)]
    dims: Option<String>,
    /// Point pairs sampled per dimension
    #[arg(long)]
    pairs: Option<String>,
    /// Base seed (u64)
    #[arg(long)]
    seed: Option<String>,
    /// Histogram bins
    #[arg(long)]
    bins: Option<String>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
    /// Compute Kolmogorov-Smirnov columns
    #[arg(long)]
    gof: bool,
    /// Emit histogram and density overlay CSVs
    #[arg(long)]
    histograms: bool,
    /// key=value config file; flags override it
    #[arg(long)]
    config: Option<PathBuf>,
    /// csv, json or both
    #[arg(long)]
    format: Option<String>,
}

/// Fully resolved run settings.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSettings {
    pub experiment: ExperimentConfig,
    pub out_dir: PathBuf,
    pub format: OutputFormat,
}

impl Default for RunSettings {
    fn default() -> Self {
        Self {
            experiment: ExperimentConfig::default(),
            out_dir: PathBuf::from(DEFAULT_OUT_DIR),
            format: OutputFormat::Both,
        }
    }
}

fn parse_dims(s: &str) -> Result<Vec<usize>, String> {
    let dims = s
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| match t.parse::<usize>() {
            Ok(0) => Err("invalid dimension 0: dimensions must be positive".to_string()),
            Ok(d) => Ok(d),
            Err(_) => Err(format!(
                "invalid dimension '{t}': dimensions must be positive integers"
            )),
        })
        .collect::<Result<Vec<_>, _>>()?;
    if dims.is_empty() {
        return Err("at least one dimension is required".into());
    }
    Ok(dims)
}

fn parse_count(what: &str, s: &str, min: usize) -> Result<usize, String> {
    match s.trim().parse::<usize>() {
        Ok(v) if v >= min => Ok(v),
        _ => Err(format!(
            "invalid {what} '{}': must be an integer >= {min}",
            s.trim()
        )),
    }
}

fn parse_seed(s: &str) -> Result<u64, String> {
    s.trim().parse().map_err(|_| {
        format!(
            "invalid seed '{}': must be an unsigned 64-bit integer",
            s.trim()
        )
    })
}

fn parse_bool(key: &str, s: &str) -> Result<bool, String> {
    match s.trim() {
        "true" | "1" | "yes" | "on" => Ok(true),
        "false" | "0" | "no" | "off" => Ok(false),
        other => Err(format!(
            "invalid value '{other}' for {key}: expected true or false"
        )),
    }
}

/// Applies a `key=value` config file on top of `settings`. Blank lines and
/// lines starting with `#` are ignored.
pub fn apply_config_text(settings: &mut RunSettings, text: &str) -> Result<(), String> {
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(format!("config line {}: expected key=value", i + 1));
        };
        let (key, value) = (key.trim(), value.trim());
        let exp = &mut settings.experiment;
        match key {
            "dims" => exp.dims = parse_dims(value)?,
            "pairs" => exp.num_pairs = parse_count("pair count", value, 2)?,
            "seed" => exp.seed = parse_seed(value)?,
            "bins" => exp.bins = parse_count("bin count", value, 1)?,
            "gof" => exp.emit_gof = parse_bool(key, value)?,
            "histograms" => exp.emit_histograms = parse_bool(key, value)?,
            "out" => settings.out_dir = PathBuf::from(value),
            "format" => settings.format = value.parse()?,
            other => return Err(format!("config line {}: unknown key '{other}'", i + 1)),
        }
    }
    Ok(())
}

fn resolve(args: Args) -> Result<RunSettings, String> {
    let mut settings = RunSettings::default();
    if let Some(path) = &args.config {
        let text = fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        apply_config_text(&mut settings, &text)?;
    }
    let exp = &mut settings.experiment;
    if let Some(d) = &args.dims {
        exp.dims = parse_dims(d)?;
    }
    if let Some(p) = &args.pairs {
        exp.num_pairs = parse_count("pair count", p, 2)?;
    }
    if let Some(s) = &args.seed {
        exp.seed = parse_seed(s)?;
    }
    if let Some(b) = &args.bins {
        exp.bins = parse_count("bin count", b, 1)?;
    }
    exp.emit_gof |= args.gof;
    exp.emit_histograms |= args.histograms;
    if let Some(out) = args.out {
        settings.out_dir = out;
    }
    if let Some(f) = &args.format {
        settings.format = f.parse()?;
    }
    exp.validate().map_err(|e| e.to_string())?;
    Ok(settings)
}

fn prepare_out_dir(dir: &Path) -> Result<(), String> {
    fs::create_dir_all(dir)
        .map_err(|e| format!("cannot create output directory {}: {e}", dir.display()))?;
    if !dir.is_dir() {
        return Err(format!("output path {} is not a directory", dir.display()));
    }
    Ok(())
}

/// Runs the CLI against the given argument list (program name first) and
/// returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return EXIT_OK;
            }
            let rendered = e.to_string();
            let first = rendered
                .lines()
                .next()
                .unwrap_or("error: invalid arguments");
            let _ = writeln!(stderr, "{first}");
            return EXIT_USAGE;
        }
    };
    let settings = match resolve(args).and_then(|s| prepare_out_dir(&s.out_dir).map(|_| s)) {
        Ok(s) => s,
        Err(msg) => {
            let _ = writeln!(stderr, "error: {msg}");
            return EXIT_USAGE;
        }
    };
    let report = match run_experiment(&settings.experiment) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_FAILURE;
        }
    };
    let written = match write_bundle(&report, &settings.out_dir, settings.format) {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_FAILURE;
        }
    };
    let _ = write!(stdout, "{}", render_table(&report));
    let _ = writeln!(
        stdout,
        "wrote {} files to {}",
        written.len(),
        settings.out_dir.display()
    );
    EXIT_OK
}

#[cfg(test)]
mod tests {
    use super::*;

    fn resolve_from(argv: &[&str]) -> Result<RunSettings, String> {
        let args = Args::try_parse_from(std::iter::once("taxicab").chain(argv.iter().copied()))
            .map_err(|e| e.to_string())?;
        resolve(args)
    }

    #[test]
    fn defaults_follow_the_reference_sweep() {
        let s = resolve_from(&[]).unwrap();
        assert_eq!(s.experiment.dims, vec![1, 2, 3, 5, 10, 20, 50, 100]);
        assert_eq!(s.experiment.num_pairs, 10_000);
        assert_eq!(s.experiment.seed, 0);
        assert_eq!(s.experiment.bins, 30);
        assert_eq!(s.format, OutputFormat::Both);
    }

    #[test]
    fn zero_dimension_is_named() {
        let err = resolve_from(&["--dims", "3,0"]).unwrap_err();
        assert!(err.contains("invalid dimension 0"), "{err}");
        assert!(resolve_from(&["--dims", "a"]).unwrap_err().contains("'a'"));
        assert!(resolve_from(&["--pairs", "0"]).is_err());
        assert!(resolve_from(&["--pairs", "-3"]).is_err());
        assert!(resolve_from(&["--format", "xml"]).is_err());
    }

    #[test]
    fn config_text_then_flags() {
        let mut s = RunSettings::default();
        apply_config_text(
            &mut s,
            "# sweep\ndims = 4, 8\npairs=500\nseed=7\ngof=true\nformat=json\n\n",
        )
        .unwrap();
        assert_eq!(s.experiment.dims, vec![4, 8]);
        assert_eq!(s.experiment.num_pairs, 500);
        assert_eq!(s.experiment.seed, 7);
        assert!(s.experiment.emit_gof);
        assert_eq!(s.format, OutputFormat::Json);

        assert!(apply_config_text(&mut s, "colour=blue").is_err());
        assert!(apply_config_text(&mut s, "dims").is_err());
        assert!(apply_config_text(&mut s, "gof=maybe").is_err());
    }
}
