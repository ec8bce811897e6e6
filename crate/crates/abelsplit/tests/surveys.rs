use abelsplit::driver::{run_survey, run_survey_to, CensusMode, Cell, Format, Provenance, RationalGenus2, SurveyParams};
use abelsplit::genus2::exact_cq;

#[test]
fn cq_row_matches_census() {
    let p = SurveyParams::Cq { qs: vec![17], mode: CensusMode::Exact };
    let s = run_survey(&p, &Provenance::default()).unwrap();
    let r = exact_cq(17).unwrap();
    assert_eq!(s.rows.len(), 1);
    assert_eq!(s.rows[0].get("c_q"), Some(&Cell::Real(r.c_q)));
    assert!(s.to_csv().unwrap().contains("17,0.7989078575,"));
}

#[test]
fn surveys_are_byte_identical_on_rerun() {
    let dir = std::env::temp_dir().join(format!("abelsplit-survey-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let prov = Provenance { command: vec!["cq".into()], seed: Some(9) };
    let params = [
        SurveyParams::Cq { qs: vec![101], mode: CensusMode::Sampled { samples: 2000, seed: 9 } },
        SurveyParams::Pisplit { curve: "x^5+x+6".parse::<RationalGenus2>().unwrap(), zmax: 20_000, grid: 40, oracle_upto: 0 },
    ];
    for (i, p) in params.iter().enumerate() {
        let a = dir.join(format!("a{i}.csv"));
        let b = dir.join(format!("b{i}.csv"));
        run_survey_to(p, &prov, Some(&a), Format::Csv).unwrap();
        run_survey_to(p, &prov, Some(&b), Format::Csv).unwrap();
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
        let side = |x: &std::path::Path| std::fs::read(format!("{}.meta.json", x.display())).unwrap();
        assert_eq!(side(&a), side(&b));
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn pisplit_counts_are_monotone() {
    let p = SurveyParams::Pisplit { curve: "x^5+x+6".parse().unwrap(), zmax: 100_000, grid: 40, oracle_upto: 1000 };
    let s = run_survey(&p, &Provenance::default()).unwrap();
    let counts: Vec<i128> = s
        .rows
        .iter()
        .map(|r| match r.get("pi_split") {
            Some(Cell::Int(n)) => *n,
            _ => panic!("missing count"),
        })
        .collect();
    assert_eq!(counts.len(), 40);
    assert!(counts.windows(2).all(|w| w[0] <= w[1]));
    assert_eq!(s.undetermined, 0);
    assert_eq!(s.meta["oracle_mismatches"].as_array().unwrap().len(), 0);
    assert_eq!(s.meta["fits"].as_array().unwrap().len(), 2);
}

#[test]
fn unwritable_output_names_the_path() {
    let p = SurveyParams::Census { q: 5 };
    let s = run_survey(&p, &Provenance::default()).unwrap();
    let err = s.write(Some(std::path::Path::new("/nonexistent/dir/out.csv")), Format::Csv).unwrap_err();
    assert!(err.to_string().contains("/nonexistent/dir/out.csv"));
}
