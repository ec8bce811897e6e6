//! Writes a relative-conductor survey as CSV with its metadata sidecar.

use abelsplit::driver::{run_survey_to, Format, Provenance, SurveyParams};

fn main() -> abelsplit::Result<()> {
    let dir = std::env::temp_dir();
    let out = dir.join("relcond.csv");
    let params = SurveyParams::Relcond { q_min: 5, q_max: 60, verify: true };
    let prov = Provenance { command: std::env::args().collect(), seed: None };
    let s = run_survey_to(&params, &prov, Some(&out), Format::Csv)?;
    println!("wrote {} rows to {}", s.rows.len(), out.display());
    print!("{}", std::fs::read_to_string(&out).unwrap_or_default());
    Ok(())
}
