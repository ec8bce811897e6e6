use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use abelsplit::driver::{
    fit_counting, run_survey, CensusMode, Cell, FitModel, Format, Provenance, RationalGenus2, Survey,
    SurveyParams, SurveyRow, GRID, ORACLE_LIMIT,
};
use abelsplit::error::{Error, Result};
use abelsplit::quadorders::{class_number, class_number_forms, hurwitz_class_number, kronecker_class_number};
use abelsplit::weilquartic::{classify, is_geometrically_split};

#[derive(Parser)]
#[command(name = "abelsplit", version, about = "Split abelian surfaces over finite fields: censuses and surveys")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Global {
    /// Output file; stdout if omitted. CSV files get a .meta.json sidecar.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Accepted for compatibility; computations run on one thread.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Csv)]
    format: OutFormat,
    /// Exit with status 3 if any computation was undetermined.
    #[arg(long, global = true)]
    strict: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

#[derive(Args)]
struct CensusArgs {
    /// One or more primes (comma separated).
    #[arg(long, required = true, value_delimiter = ',')]
    q: Vec<u64>,
    /// Enumerate every curve (the default).
    #[arg(long, conflicts_with = "samples")]
    exact: bool,
    /// Estimate from this many random curves instead.
    #[arg(long)]
    samples: Option<u64>,
}

#[derive(Subcommand)]
enum Cmd {
    /// c_q: normalized mass of split principally polarized surfaces.
    Cq(CensusArgs),
    /// d_q: the same for geometrically split surfaces.
    Dq(CensusArgs),
    /// Σ relcond(E) over ordinary curves, per prime power q.
    RelcondSum {
        #[arg(long, default_value_t = 5)]
        q_min: u64,
        #[arg(long)]
        q_max: u64,
        /// Also sum over enumerated isomorphism classes.
        #[arg(long)]
        verify: bool,
    },
    /// Weighted masses per split class for one prime q.
    Census {
        #[arg(long)]
        q: u64,
    },
    /// Split class of the Weil quartic T⁴ − a1T³ + a2T² − q·a1·T + q².
    Classify {
        #[arg(long)]
        q: u64,
        #[arg(long, allow_hyphen_values = true)]
        a1: i64,
        #[arg(long, allow_hyphen_values = true)]
        a2: i64,
        #[arg(long)]
        geometric: bool,
    },
    /// Class numbers of imaginary quadratic orders.
    Classnum {
        #[arg(long, allow_hyphen_values = true, conflicts_with = "range")]
        delta: Option<i64>,
        #[arg(long, num_args = 2, allow_hyphen_values = true, value_names = ["A", "B"])]
        range: Option<Vec<i64>>,
    },
    /// Σψ(n) and Σψ(n)/n at powers of ten up to --max.
    ArithSums {
        #[arg(long)]
        max: u64,
    },
    /// Counting function of split good primes for a curve over ℚ.
    Pisplit {
        #[arg(long, default_value = "x^5+x+6")]
        curve: String,
        #[arg(long)]
        zmax: u64,
        #[arg(long, default_value_t = GRID)]
        grid: usize,
        /// Cross-check decisions against exhaustive counts up to this prime.
        #[arg(long, default_value_t = ORACLE_LIMIT)]
        oracle_upto: u64,
    },
    /// Fit c·√z/log z and a·√z/(log z)^b to a pisplit CSV.
    Fit {
        #[arg(long)]
        input: PathBuf,
        /// Column holding the counts.
        #[arg(long, default_value = "pi_split")]
        column: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(undetermined) if undetermined > 0 && cli.global.strict => {
            eprintln!("error: {undetermined} undetermined computations");
            ExitCode::from(3)
        }
        Ok(undetermined) => {
            if undetermined > 0 {
                eprintln!("warning: {undetermined} undetermined computations were excluded");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Invalid(_) | Error::Overflow(_) => 2,
                Error::Undetermined(_) => 3,
                Error::Io { .. } => 1,
            })
        }
    }
}

fn census_mode(a: &CensusArgs, seed: u64) -> CensusMode {
    match a.samples {
        Some(samples) if !a.exact => CensusMode::Sampled { samples, seed },
        _ => CensusMode::Exact,
    }
}

/// Runs the command and returns the number of undetermined computations.
fn run(cli: &Cli) -> Result<u64> {
    let g = &cli.global;
    let prov = Provenance { command: std::env::args().collect(), seed: Some(g.seed) };
    let format = match g.format {
        OutFormat::Csv => Format::Csv,
        OutFormat::Json => Format::Json,
    };
    let params = match &cli.cmd {
        Cmd::Cq(a) => SurveyParams::Cq { qs: a.q.clone(), mode: census_mode(a, g.seed) },
        Cmd::Dq(a) => SurveyParams::Dq { qs: a.q.clone(), mode: census_mode(a, g.seed) },
        Cmd::RelcondSum { q_min, q_max, verify } => {
            SurveyParams::Relcond { q_min: *q_min, q_max: *q_max, verify: *verify }
        }
        Cmd::Census { q } => SurveyParams::Census { q: *q },
        Cmd::ArithSums { max } => SurveyParams::Arith { max: *max },
        Cmd::Pisplit { curve, zmax, grid, oracle_upto } => SurveyParams::Pisplit {
            curve: curve.parse::<RationalGenus2>()?,
            zmax: *zmax,
            grid: *grid,
            oracle_upto: *oracle_upto,
        },
        Cmd::Classify { q, a1, a2, geometric } => {
            let c = classify(*q, *a1, *a2)?;
            let mut v = json!({ "q": q, "a1": a1, "a2": a2 });
            v.as_object_mut().unwrap().extend(c.to_json().as_object().unwrap().clone());
            if *geometric {
                v["geometric"] = serde_json::to_value(is_geometrically_split(*q, *a1, *a2)?).unwrap();
            }
            let body = serde_json::to_string_pretty(&v).unwrap() + "\n";
            write_text(g.out.as_deref(), &body)?;
            return Ok(0);
        }
        Cmd::Classnum { delta, range } => {
            let (lo, hi) = match (delta, range) {
                (Some(d), _) => (*d, *d),
                (None, Some(r)) => (r[0].min(r[1]), r[0].max(r[1])),
                (None, None) => return Err(Error::Invalid("give --delta or --range".into())),
            };
            let s = classnum_table(lo, hi, &prov)?;
            s.write(g.out.as_deref(), format)?;
            return Ok(0);
        }
        Cmd::Fit { input, column } => {
            let s = fit_table(input, column, &prov)?;
            s.write(g.out.as_deref(), format)?;
            return Ok(0);
        }
    };
    let s = run_survey(&params, &prov)?;
    s.write(g.out.as_deref(), format)?;
    Ok(s.undetermined)
}

fn write_text(out: Option<&std::path::Path>, body: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, body).map_err(|e| Error::Io { path: p.display().to_string(), msg: e.to_string() }),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn classnum_table(lo: i64, hi: i64, prov: &Provenance) -> Result<Survey> {
    if hi >= 0 || hi - lo > 10_000_000 {
        return Err(Error::Invalid(format!("need negative discriminants in a range of at most 10⁷, got {lo}..{hi}")));
    }
    let mut s = Survey::new("classnum", None);
    s.meta.insert("command".into(), json!(prov.command));
    for (i, d) in (lo..=hi).filter(|d| d.rem_euclid(4) <= 1).enumerate() {
        let hw = hurwitz_class_number(d)?;
        s.rows.push(
            SurveyRow::new(i as u64)
                .with("delta", Cell::Int(d as i128))
                .with("h", Cell::Int(class_number(d)? as i128))
                .with("h_forms", Cell::Int(class_number_forms(d)? as i128))
                .with("kronecker_h", Cell::Int(kronecker_class_number(d)? as i128))
                .with("hurwitz_h", Cell::Rational(num_rational::BigRational::new((*hw.numer()).into(), (*hw.denom()).into()))),
        );
    }
    if s.rows.is_empty() {
        return Err(Error::Invalid(format!("no discriminants in {lo}..{hi}")));
    }
    Ok(s)
}

fn fit_table(input: &std::path::Path, column: &str, prov: &Provenance) -> Result<Survey> {
    let io = |e: std::io::Error| Error::Io { path: input.display().to_string(), msg: e.to_string() };
    let text = std::fs::read_to_string(input).map_err(io)?;
    let mut lines = text.lines();
    let head: Vec<&str> = lines.next().unwrap_or("").split(',').collect();
    let col = |name: &str| {
        head.iter().position(|h| *h == name).ok_or_else(|| Error::Invalid(format!("{} has no column {name:?}", input.display())))
    };
    let (zi, yi) = (col("z")?, col(column)?);
    let mut pts = Vec::new();
    for line in lines.filter(|l| !l.is_empty()) {
        let f: Vec<&str> = line.split(',').collect();
        let num = |i: usize| {
            f.get(i).and_then(|v| v.parse::<f64>().ok()).ok_or_else(|| Error::Invalid(format!("bad row {line:?}")))
        };
        pts.push((num(zi)?, num(yi)?));
    }
    let mut s = Survey::new("fit", None);
    s.meta.insert("command".into(), json!(prov.command));
    s.meta.insert("input".into(), json!(input.display().to_string()));
    for (i, m) in [FitModel::Constant, FitModel::Power].into_iter().enumerate() {
        let r = fit_counting(&pts, m)?;
        let name = match m {
            FitModel::Constant => "c*sqrt(z)/log(z)",
            FitModel::Power => "a*sqrt(z)/log(z)^b",
        };
        s.rows.push(
            SurveyRow::new(i as u64)
                .with("model", Cell::Text(name.into()))
                .with("a", Cell::Real(r.a))
                .with("b", Cell::Real(r.b))
                .with("residual", Cell::Real(r.residual))
                .with("points", Cell::Int(r.points as i128)),
        );
    }
    Ok(s)
}
