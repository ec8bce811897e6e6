//! Survey tables: CSV with a JSON provenance sidecar, or a single JSON document.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use num_rational::BigRational;
use serde_json::{json, Map, Value};

use super::curve::RationalGenus2;
use super::fit::{fit_counting, FitModel};
use super::pisplit::pisplit;
use crate::ellipt::{sum_relcond_closed_form, sum_relcond_enumerated};
use crate::error::{invalid, Error, Result};
use crate::genus2::{exact_cq, monte_carlo_cq, split_census, CensusResult};
use crate::numth::{prime_power, ratio_to_f64, sum_psi, sum_psi_over_n};
use crate::weilquartic::GEOMETRIC_SWEEP;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i128),
    Rational(BigRational),
    Real(f64),
    Text(String),
}

impl Cell {
    pub fn csv(&self) -> String {
        match self {
            Cell::Int(n) => n.to_string(),
            Cell::Rational(r) => format!("{}/{}", r.numer(), r.denom()),
            Cell::Real(x) => sig10(*x),
            Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(n) => i64::try_from(*n).map_or_else(|_| json!(n.to_string()), |v| json!(v)),
            Cell::Rational(r) => json!(format!("{}/{}", r.numer(), r.denom())),
            Cell::Real(x) => sig10(*x).parse::<f64>().map_or(Value::Null, |v| json!(v)),
            Cell::Text(s) => json!(s),
        }
    }
}

/// A real with 10 significant digits.
pub fn sig10(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".into();
    }
    let mag = x.abs().log10().floor() as i32;
    if (-4..15).contains(&mag) {
        format!("{:.*}", (9 - mag).max(0) as usize, x)
    } else {
        format!("{x:.9e}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurveyRow {
    pub key: u64,
    pub values: Vec<(String, Cell)>,
    pub flags: Vec<String>,
}

impl SurveyRow {
    pub fn new(key: u64) -> SurveyRow {
        SurveyRow { key, values: Vec::new(), flags: Vec::new() }
    }

    pub fn with(mut self, name: &str, cell: Cell) -> SurveyRow {
        self.values.push((name.to_string(), cell));
        self
    }

    pub fn get(&self, name: &str) -> Option<&Cell> {
        self.values.iter().find(|(n, _)| n == name).map(|(_, c)| c)
    }
}

/// Command line and seed recorded in the sidecar.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Provenance {
    pub command: Vec<String>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Survey {
    pub kind: String,
    /// Name of the key column, or None when keys are row ordinals and not written.
    pub key: Option<String>,
    pub rows: Vec<SurveyRow>,
    pub meta: Map<String, Value>,
    pub undetermined: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Survey {
    pub fn new(kind: &str, key: Option<&str>) -> Survey {
        Survey { kind: kind.into(), key: key.map(Into::into), rows: Vec::new(), meta: Map::new(), undetermined: 0 }
    }

    fn check_keys(&self) -> Result<()> {
        match self.rows.windows(2).find(|w| w[0].key >= w[1].key) {
            Some(w) => invalid(format!("survey keys not increasing: {} then {}", w[0].key, w[1].key)),
            None => Ok(()),
        }
    }

    fn columns(&self) -> Vec<String> {
        let mut cols: Vec<String> = Vec::new();
        for r in &self.rows {
            for (n, _) in &r.values {
                if !cols.contains(n) {
                    cols.push(n.clone());
                }
            }
        }
        cols
    }

    pub fn to_csv(&self) -> Result<String> {
        self.check_keys()?;
        let cols = self.columns();
        let with_flags = self.rows.iter().any(|r| !r.flags.is_empty());
        let mut head: Vec<String> = self.key.iter().cloned().collect();
        head.extend(cols.iter().cloned());
        if with_flags {
            head.push("flags".into());
        }
        let mut out = head.join(",");
        out.push('\n');
        for r in &self.rows {
            let mut line: Vec<String> = self.key.iter().map(|_| r.key.to_string()).collect();
            line.extend(cols.iter().map(|c| r.get(c).map_or(String::new(), Cell::csv)));
            if with_flags {
                line.push(Cell::Text(r.flags.join(";")).csv());
            }
            let _ = writeln!(out, "{}", line.join(","));
        }
        Ok(out)
    }

    pub fn meta_json(&self) -> Value {
        let mut m = self.meta.clone();
        m.insert("kind".into(), json!(self.kind));
        m.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
        m.insert("undetermined".into(), json!(self.undetermined));
        Value::Object(m)
    }

    pub fn to_json(&self) -> Result<Value> {
        self.check_keys()?;
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let mut o = Map::new();
                if let Some(k) = &self.key {
                    o.insert(k.clone(), json!(r.key));
                }
                for (n, c) in &r.values {
                    o.insert(n.clone(), c.json());
                }
                if !r.flags.is_empty() {
                    o.insert("flags".into(), json!(r.flags));
                }
                Value::Object(o)
            })
            .collect();
        Ok(json!({ "meta": self.meta_json(), "rows": rows }))
    }

    /// Writes the table to `out` (stdout if None). CSV output to a file gets a
    /// `<out>.meta.json` sidecar; JSON output embeds the metadata.
    pub fn write(&self, out: Option<&Path>, format: Format) -> Result<()> {
        let body = match format {
            Format::Csv => self.to_csv()?,
            Format::Json => pretty(&self.to_json()?),
        };
        match out {
            None => io::stdout().write_all(body.as_bytes()).map_err(|e| io_err("<stdout>", e)),
            Some(path) => {
                fs::write(path, body).map_err(|e| io_err(path, e))?;
                if format == Format::Csv {
                    let side = sidecar_path(path);
                    fs::write(&side, pretty(&self.meta_json())).map_err(|e| io_err(&side, e))?;
                }
                Ok(())
            }
        }
    }
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn io_err(path: impl AsRef<Path>, e: io::Error) -> Error {
    Error::Io { path: path.as_ref().display().to_string(), msg: e.to_string() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CensusMode {
    Exact,
    Sampled { samples: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum SurveyParams {
    Cq { qs: Vec<u64>, mode: CensusMode },
    Dq { qs: Vec<u64>, mode: CensusMode },
    Relcond { q_min: u64, q_max: u64, verify: bool },
    Census { q: u64 },
    Pisplit { curve: RationalGenus2, zmax: u64, grid: usize, oracle_upto: u64 },
    Arith { max: u64 },
}

impl SurveyParams {
    pub fn kind(&self) -> &'static str {
        match self {
            SurveyParams::Cq { .. } => "cq",
            SurveyParams::Dq { .. } => "dq",
            SurveyParams::Relcond { .. } => "relcond",
            SurveyParams::Census { .. } => "census",
            SurveyParams::Pisplit { .. } => "pisplit",
            SurveyParams::Arith { .. } => "arith",
        }
    }
}

/// Runs a survey. The result depends only on `params` (and the seed inside them).
pub fn run_survey(params: &SurveyParams, prov: &Provenance) -> Result<Survey> {
    let mut s = match params {
        SurveyParams::Cq { qs, mode } => census_table("cq", qs, *mode, false)?,
        SurveyParams::Dq { qs, mode } => census_table("dq", qs, *mode, true)?,
        SurveyParams::Relcond { q_min, q_max, verify } => relcond_table(*q_min, *q_max, *verify)?,
        SurveyParams::Census { q } => {
            let mut s = Survey::new("census", None);
            for (i, (class, mass)) in split_census(*q)?.into_iter().enumerate() {
                s.rows.push(
                    SurveyRow::new(i as u64)
                        .with("q", Cell::Int(*q as i128))
                        .with("class", Cell::Text(class))
                        .with("weighted_mass", Cell::Rational(mass)),
                );
            }
            s
        }
        SurveyParams::Pisplit { curve, zmax, grid, oracle_upto } => pisplit_table(curve, *zmax, *grid, *oracle_upto)?,
        SurveyParams::Arith { max } => arith_table(*max)?,
    };
    s.meta.insert("command".into(), json!(prov.command));
    s.meta.insert("seed".into(), json!(prov.seed));
    Ok(s)
}

/// [`run_survey`] followed by [`Survey::write`].
pub fn run_survey_to(params: &SurveyParams, prov: &Provenance, out: Option<&Path>, format: Format) -> Result<Survey> {
    let s = run_survey(params, prov)?;
    s.write(out, format)?;
    Ok(s)
}

fn sorted_unique(qs: &[u64]) -> Vec<u64> {
    let mut v = qs.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

fn census_table(kind: &str, qs: &[u64], mode: CensusMode, geometric: bool) -> Result<Survey> {
    let mut s = Survey::new(kind, Some("q"));
    let mut heur = vec![json!("non-Jacobian masses (products, restrictions of scalars) added exactly")];
    if geometric {
        heur.push(json!(format!("geometric splitting decided over extensions of degree k <= {GEOMETRIC_SWEEP}")));
    }
    match mode {
        CensusMode::Exact => {
            s.meta.insert("mode".into(), json!("exact"));
        }
        CensusMode::Sampled { samples, seed } => {
            s.meta.insert("mode".into(), json!("monte_carlo"));
            s.meta.insert("samples".into(), json!(samples));
            s.meta.insert("census_seed".into(), json!(seed));
            heur.push(json!("curves sampled uniformly among squarefree binary sextic models"));
        }
    }
    s.meta.insert("heuristics".into(), Value::Array(heur));
    for q in sorted_unique(qs) {
        let r: CensusResult = match mode {
            CensusMode::Exact => exact_cq(q)?,
            CensusMode::Sampled { samples, seed } => monte_carlo_cq(q, samples, seed)?,
        };
        let (value, se, mass) = if geometric {
            (r.d_q, r.d_stderr, r.weighted_geom_split.clone())
        } else {
            (r.c_q, r.stderr, r.weighted_split.clone())
        };
        let name = if geometric { "d_q" } else { "c_q" };
        let mut row = SurveyRow::new(q).with(name, Cell::Real(value));
        if let Some(se) = se {
            row = row.with("stderr", Cell::Real(se));
        }
        let mass_name = if geometric { "geom_split_mass" } else { "split_mass" };
        row = row.with(mass_name, Cell::Rational(mass)).with("total_mass", Cell::Rational(r.total_mass()));
        s.rows.push(row);
    }
    Ok(s)
}

fn relcond_table(q_min: u64, q_max: u64, verify: bool) -> Result<Survey> {
    if q_min > q_max {
        return invalid(format!("empty range {q_min}..{q_max}"));
    }
    let mut s = Survey::new("relcond", Some("q"));
    s.meta.insert("verify".into(), json!(verify));
    for q in q_min.max(5)..=q_max {
        match prime_power(q) {
            Some((p, _)) if p >= 5 => {}
            _ => continue,
        }
        let sum = sum_relcond_closed_form(q)?;
        let mut row = SurveyRow::new(q)
            .with("relcond_sum", Cell::Int(sum as i128))
            .with("ratio", Cell::Real(sum as f64 / q as f64));
        if verify {
            let e = sum_relcond_enumerated(q)?;
            row = row.with("enumerated", Cell::Int(e as i128));
            if e != sum {
                row.flags.push("mismatch".into());
            }
        }
        s.rows.push(row);
    }
    Ok(s)
}

fn pisplit_table(curve: &RationalGenus2, zmax: u64, grid: usize, oracle_upto: u64) -> Result<Survey> {
    let r = pisplit(curve, zmax, grid, oracle_upto)?;
    let mut s = Survey::new("pisplit", Some("z"));
    for &(z, n) in &r.samples {
        let g = if z >= 3 { (z as f64).sqrt() / (z as f64).ln() } else { f64::NAN };
        let mut row = SurveyRow::new(z).with("pi_split", Cell::Int(n as i128));
        if g.is_finite() {
            row = row.with("ratio", Cell::Real(n as f64 / g));
        }
        s.rows.push(row);
    }
    s.undetermined = r.undetermined.len() as u64;
    let pts: Vec<(f64, f64)> = r.samples.iter().map(|&(z, n)| (z as f64, n as f64)).collect();
    let fits: Vec<Value> = [FitModel::Constant, FitModel::Power]
        .into_iter()
        .filter_map(|m| fit_counting(&pts, m).ok())
        .map(|f| json!({ "model": f.model, "a": f.a, "b": f.b, "residual": f.residual, "points": f.points }))
        .collect();
    let m = &mut s.meta;
    m.insert("curve".into(), json!(curve.to_string()));
    m.insert("disc".into(), json!(curve.disc().to_string()));
    m.insert("zmax".into(), json!(zmax));
    m.insert("good_primes".into(), json!(r.good));
    m.insert("split_primes".into(), json!(r.split.len()));
    m.insert("undetermined_primes".into(), json!(r.undetermined));
    m.insert("oracle_checked".into(), json!(r.oracle_checked));
    m.insert("oracle_mismatches".into(), json!(r.oracle_mismatches));
    m.insert("fits".into(), Value::Array(fits));
    m.insert(
        "heuristics".into(),
        json!([
            "good reduction taken as p >= 5 with p not dividing disc(f) or lead(f)",
            format!("fit on {grid} log-spaced z values, least squares on counts, z >= 100"),
        ]),
    );
    if !r.oracle_mismatches.is_empty() {
        return Err(Error::Undetermined(format!("oracle disagrees at p = {:?}", r.oracle_mismatches)));
    }
    Ok(s)
}

fn arith_table(max: u64) -> Result<Survey> {
    if max < 10 {
        return invalid("arith-sums needs max >= 10");
    }
    let mut s = Survey::new("arith", Some("x"));
    let pi2 = std::f64::consts::PI.powi(2);
    s.meta.insert("limit_sum_psi".into(), json!(15.0 / (2.0 * pi2)));
    s.meta.insert("limit_sum_psi_over_n".into(), json!(15.0 / pi2));
    let mut xs: Vec<u64> = std::iter::successors(Some(10u64), |x| x.checked_mul(10)).take_while(|&x| x < max).collect();
    xs.push(max);
    for x in xs {
        let a = sum_psi(x)?;
        let b = ratio_to_f64(&sum_psi_over_n(x)?);
        s.rows.push(
            SurveyRow::new(x)
                .with("sum_psi", Cell::Int(a as i128))
                .with("sum_psi_scaled", Cell::Real(a as f64 / (x as f64 * x as f64)))
                .with("sum_psi_over_n_scaled", Cell::Real(b / x as f64)),
        );
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ten_digit_reals() {
        assert_eq!(sig10(0.79894617853), "0.7989461785");
        assert_eq!(sig10(4.4651), "4.465100000");
        assert_eq!(sig10(123456.0), "123456.0000");
        assert_eq!(sig10(-2.5e-7), "-2.500000000e-7");
        assert_eq!(sig10(0.0), "0");
    }

    #[test]
    fn census_csv_columns() {
        let s = run_survey(&SurveyParams::Census { q: 7 }, &Provenance::default()).unwrap();
        let csv = s.to_csv().unwrap();
        assert!(csv.starts_with("q,class,weighted_mass\n"));
        assert!(csv.lines().any(|l| l == "7,total,392/1"));
    }

    #[test]
    fn keys_must_increase() {
        let mut s = Survey::new("t", Some("q"));
        s.rows.push(SurveyRow::new(5));
        s.rows.push(SurveyRow::new(5));
        assert!(s.to_csv().is_err());
    }

    #[test]
    fn relcond_rows_match() {
        let p = SurveyParams::Relcond { q_min: 1, q_max: 30, verify: true };
        let s = run_survey(&p, &Provenance::default()).unwrap();
        let keys: Vec<u64> = s.rows.iter().map(|r| r.key).collect();
        assert_eq!(keys, vec![5, 7, 11, 13, 17, 19, 23, 25, 29]);
        assert!(s.rows.iter().all(|r| r.flags.is_empty()));
    }
}
