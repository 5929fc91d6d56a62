//! `hgls`: hypergeometric local systems of gamma vectors from the command line.

mod render;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hgls::algebra::IntMatrix;
use hgls::{import_model, parse_gamma, Error, GammaVector, ToricModel};
use rayon::prelude::*;
use serde_json::{json, Value};

use report::{analyze, error_json, series_section, ModelChoice, Sections};

#[derive(Parser)]
#[command(name = "hgls", version, about = "Exact data of hypergeometric local systems attached to gamma vectors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report on a single gamma vector.
    Analyze {
        /// Comma-separated entries, e.g. "-5,-2,3,4".
        #[arg(long, allow_hyphen_values = true)]
        gamma: String,
        /// Model matrix rows separated by ';', entries by ','.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "model_file")]
        matrix: Option<String>,
        /// Model JSON with an "A" field.
        #[arg(long, conflicts_with = "built_model")]
        model_file: Option<PathBuf>,
        /// Use the generic model construction even when a standard model exists.
        #[arg(long, conflicts_with = "matrix")]
        built_model: bool,
        /// Print JSON instead of indented text.
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        sections: SectionArgs,
    },
    /// One JSON report per line of a file of gamma vectors.
    Batch {
        /// One gamma vector per line; '#' starts a comment.
        #[arg(long)]
        file: PathBuf,
        /// Worker threads.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Use the generic model construction even when a standard model exists.
        #[arg(long)]
        built_model: bool,
        #[command(flatten)]
        sections: SectionArgs,
    },
    /// Power series of the period or of the hypergeometric function.
    Series {
        #[arg(long, allow_hyphen_values = true)]
        gamma: String,
        /// Highest power of t in the series.
        #[arg(long, default_value_t = 10)]
        terms: usize,
        /// Apply the hypergeometric operator to the series.
        #[arg(long)]
        check_annihilation: bool,
        /// Print JSON instead of indented text.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args, Clone)]
struct SectionArgs {
    /// Hodge numbers.
    #[arg(long)]
    hodge: bool,
    /// Toric model matrix.
    #[arg(long)]
    model: bool,
    /// Cone census and weight filtration.
    #[arg(long)]
    cone: bool,
    /// Minimal operator of the form "beta0;b1,...,bd" (repeatable).
    #[arg(long = "minimal-op", value_name = "FORM", allow_hyphen_values = true)]
    minimal_op: Vec<String>,
    /// GKZ operator of the form "beta0;b1,...,bd" (repeatable).
    #[arg(long = "gkz-op", value_name = "FORM", allow_hyphen_values = true)]
    gkz_op: Vec<String>,
    /// Levelt monodromy triple.
    #[arg(long)]
    monodromy: bool,
    /// Period series up to t^N with an annihilation check.
    #[arg(long, value_name = "N")]
    series: Option<usize>,
    /// Lattice primitivity and quadrilateral covering data.
    #[arg(long)]
    covering: bool,
    /// Consistency checks across modules.
    #[arg(long)]
    validate: bool,
}

impl From<SectionArgs> for Sections {
    fn from(a: SectionArgs) -> Self {
        Sections {
            hodge: a.hodge,
            model: a.model,
            cone: a.cone,
            minimal_op: a.minimal_op,
            gkz_op: a.gkz_op,
            monodromy: a.monodromy,
            series: a.series,
            covering: a.covering,
            validate: a.validate,
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::TrivialSystem | Error::DegenerateModel | Error::ZeroClass => 3,
        Error::Unsupported(_) | Error::UnreducibleForm(_) => 1,
        _ => 2,
    }
}

fn emit(v: &Value, as_json: bool) {
    if as_json {
        println!("{}", serde_json::to_string_pretty(v).expect("JSON values serialize"));
    } else {
        print!("{}", render::plain(v));
    }
}

fn fail(e: &Error, as_json: bool) -> ExitCode {
    if as_json {
        println!("{}", json!({"error": error_json(e)}));
    } else {
        eprintln!("error [{}]: {e}", e.code());
    }
    ExitCode::from(exit_code(e))
}

fn parse_matrix(s: &str) -> Result<IntMatrix, Error> {
    let rows = s
        .split(';')
        .map(|r| {
            r.split(',')
                .map(|x| {
                    x.trim().parse::<i64>().map_err(|_| Error::Parse { pos: 0, msg: format!("not an integer: {x:?}") })
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    if rows.iter().any(|r| r.len() != rows[0].len()) {
        return Err(Error::InvalidArgument("matrix rows differ in length".into()));
    }
    Ok(IntMatrix::from_i64(&rows))
}

fn read_model_file(g: &GammaVector, path: &PathBuf) -> Result<ToricModel, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Error::Parse { pos: e.column(), msg: e.to_string() })?;
    let rows: Vec<Vec<i64>> = serde_json::from_value(v["A"].clone())
        .map_err(|e| Error::InvalidArgument(format!("model file needs an integer matrix \"A\": {e}")))?;
    import_model(g, &IntMatrix::from_i64(&rows))
}

fn run_analyze(
    gamma: &str,
    matrix: Option<String>,
    model_file: Option<PathBuf>,
    built: bool,
    as_json: bool,
    s: Sections,
) -> ExitCode {
    let g = match parse_gamma(gamma) {
        Ok(g) => g,
        Err(e) => return fail(&e, as_json),
    };
    let model = match (matrix, model_file) {
        (Some(m), _) => parse_matrix(&m).and_then(|a| import_model(&g, &a)).map(ModelChoice::Imported),
        (None, Some(p)) => read_model_file(&g, &p).map(ModelChoice::Imported),
        (None, None) if built => Ok(ModelChoice::Built),
        (None, None) => Ok(ModelChoice::Default),
    };
    let model = match model {
        Ok(m) => m,
        Err(e) => return fail(&e, as_json),
    };
    match analyze(&g, &s, model) {
        Ok(out) => {
            emit(&out.value, as_json);
            match out.error {
                Some(e) => {
                    if !as_json {
                        eprintln!("error [{}]: {e}", e.code());
                    }
                    ExitCode::from(exit_code(&e))
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(e) => fail(&e, as_json),
    }
}

/// Non-empty, non-comment lines with their 1-based numbers.
fn batch_lines(text: &str) -> Vec<(usize, String)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim().to_string()))
        .filter(|(_, l)| !l.is_empty())
        .collect()
}

fn batch_record(line: usize, input: &str, s: &Sections, choice: &ModelChoice) -> Value {
    let result = parse_gamma(input).and_then(|g| analyze(&g, s, choice.clone()));
    match result {
        Ok(out) => {
            let mut v = out.value;
            v["line"] = json!(line);
            v
        }
        Err(e) => json!({"line": line, "input": input, "error": error_json(&e)}),
    }
}

fn run_batch(file: &PathBuf, jobs: usize, built: bool, s: Sections) -> ExitCode {
    let choice = if built { ModelChoice::Built } else { ModelChoice::Default };
    let text = match std::fs::read_to_string(file) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {}: {e}", file.display());
            return ExitCode::from(2);
        }
    };
    let lines = batch_lines(&text);
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let records: Vec<Value> =
        pool.install(|| lines.par_iter().map(|(n, l)| batch_record(*n, l, &s, &choice)).collect());
    for r in &records {
        println!("{r}");
    }
    ExitCode::SUCCESS
}

fn run_series(gamma: &str, terms: usize, check: bool, as_json: bool) -> ExitCode {
    let g = match parse_gamma(gamma) {
        Ok(g) => g,
        Err(e) => return fail(&e, as_json),
    };
    match series_section(&g, terms, check) {
        Ok(mut v) => {
            v["gamma"] = json!(g.entries());
            emit(&v, as_json);
            ExitCode::SUCCESS
        }
        Err(e) => fail(&e, as_json),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Analyze { gamma, matrix, model_file, built_model, json, sections } => {
            run_analyze(&gamma, matrix, model_file, built_model, json, sections.into())
        }
        Command::Batch { file, jobs, built_model, sections } => run_batch(&file, jobs, built_model, sections.into()),
        Command::Series { gamma, terms, check_annihilation, json } => {
            run_series(&gamma, terms, check_annihilation, json)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn batch_lines_skip_comments() {
        let l = batch_lines("# header\n-2,1,1\n\n  -5,-2,3,4 # curve\n");
        assert_eq!(l, vec![(2, "-2,1,1".to_string()), (4, "-5,-2,3,4".to_string())]);
    }

    #[test]
    fn matrices_parse() {
        let m = parse_matrix("1,1,1,1;2,0,2,1;0,3,2,0;0,1,1,0").unwrap();
        assert_eq!((m.nrows(), m.ncols()), (4, 4));
        assert!(parse_matrix("1,2;3").is_err());
        assert!(parse_matrix("1,x").is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::TrivialSystem), 3);
        assert_eq!(exit_code(&Error::SumNotZero(1)), 2);
        assert_eq!(exit_code(&Error::Unsupported("x".into())), 1);
    }

    #[test]
    fn forms_parse() {
        let p = report::parse_form("2;2,4").unwrap();
        assert_eq!((p.k, p.m), (2, vec![2, 4]));
        assert!(matches!(report::parse_form("2,2,4"), Err(Error::Parse { .. })));
        assert!(matches!(report::parse_form("1;1,x"), Err(Error::Parse { pos: 4, .. })));
    }
}
