use coopvax_survey::score::{EXCELLENT_ABOVE, POOR_BELOW};
use coopvax_survey::{
    aggregate_from_question_means, classify, parse_dataset, quality_score, question_stats, Classification, DatasetError,
    Dimension, Factor, Instrument, ScoreError, SdKind, SurveyDataset, Weights,
};
use proptest::prelude::*;

fn inst() -> Instrument {
    Instrument::bundled()
}

fn uniform(value: u8, respondents: usize) -> SurveyDataset {
    let i = inst();
    SurveyDataset::from_rows(&i, vec![vec![value; i.questions.len()]; respondents]).unwrap()
}

fn score(ds: &SurveyDataset) -> f64 {
    quality_score(ds, &inst(), Weights::default(), SdKind::Population).unwrap().quality_score
}

fn csv_of(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for r in rows {
        s.push_str(&r.join(","));
        s.push('\n');
    }
    s
}

fn full_header(i: &Instrument) -> Vec<&str> {
    i.questions.iter().map(|q| q.id.as_str()).collect()
}

#[test]
fn hand_computed_question_stats() {
    let i = inst();
    let mut rows = vec![vec![3u8; 32]; 4];
    for (r, v) in [4, 4, 5, 4].into_iter().enumerate() {
        rows[r][0] = v;
    }
    let ds = SurveyDataset::from_rows(&i, rows).unwrap();
    let (m, sd) = question_stats(&ds, "q01", SdKind::Population).unwrap();
    // Deviations -0.25, -0.25, 0.75, -0.25: squared sum 0.75 over 4.
    assert!((m - 4.25).abs() < 1e-9);
    assert!((sd - 0.1875f64.sqrt()).abs() < 1e-9);
    assert!((sd - 0.4330127).abs() < 1e-7);
    let (_, sample) = question_stats(&ds, "q01", SdKind::Sample).unwrap();
    assert!((sample - 0.25f64.sqrt()).abs() < 1e-9);
    assert_eq!(question_stats(&ds, "q02", SdKind::Population).unwrap(), (3.0, 0.0));
    assert!(matches!(question_stats(&ds, "nope", SdKind::Population), Err(ScoreError::UnknownQuestion(_))));
}

/// 28 answers to "I had fun with the game" reproducing the published 4.32
/// mean and 0.54 SD at two decimals.
#[test]
fn twenty_eight_response_vector() {
    let i = inst();
    let fun = i.questions.iter().position(|q| q.text == "I had fun with the game.").unwrap();
    let answers: Vec<u8> = [5; 10].into_iter().chain([4; 17]).chain([3; 1]).collect();
    assert_eq!(answers.len(), 28);
    let rows = answers
        .iter()
        .map(|a| {
            let mut r = vec![4u8; 32];
            r[fun] = *a;
            r
        })
        .collect();
    let ds = SurveyDataset::from_rows(&i, rows).unwrap();
    let (m, sd) = question_stats(&ds, &i.questions[fun].id, SdKind::Population).unwrap();
    assert!((m - 121.0 / 28.0).abs() < 1e-12);
    assert_eq!(format!("{m:.2}"), "4.32");
    assert_eq!(format!("{sd:.2}"), "0.54");
}

#[test]
fn scale_extremes_and_midpoint() {
    for (v, expect, class) in [
        (5, 100.0, Classification::Excellent),
        (3, 50.0, Classification::Regular),
        (1, 0.0, Classification::Poor),
    ] {
        let r = quality_score(&uniform(v, 28), &inst(), Weights::default(), SdKind::Population).unwrap();
        assert_eq!(r.quality_score, expect);
        assert_eq!(r.classification, class);
    }
}

/// Three respondents answer 4 and two answer 3: every mean is 3.6, which
/// rescales to exactly 65.
#[test]
fn excellent_boundary_is_exclusive() {
    let i = inst();
    let mut rows = vec![vec![4u8; 32]; 3];
    rows.extend(vec![vec![3u8; 32]; 2]);
    let ds = SurveyDataset::from_rows(&i, rows.clone()).unwrap();
    assert_eq!(score(&ds), 65.0);
    assert_eq!(classify(score(&ds)), Classification::Regular);
    let px = i.questions.iter().position(|q| q.dimension == Dimension::PlayerExperience).unwrap();
    rows[3][px] = 4;
    let ds = SurveyDataset::from_rows(&i, rows).unwrap();
    assert!(score(&ds) > EXCELLENT_ABOVE);
    assert_eq!(classify(score(&ds)), Classification::Excellent);
}

/// Seven respondents answer 3 and three answer 2: every mean is 2.7, which
/// rescales to exactly 42.5.
#[test]
fn poor_boundary_is_exclusive() {
    let i = inst();
    let mut rows = vec![vec![3u8; 32]; 7];
    rows.extend(vec![vec![2u8; 32]; 3]);
    let ds = SurveyDataset::from_rows(&i, rows.clone()).unwrap();
    assert_eq!(score(&ds), 42.5);
    assert_eq!(classify(score(&ds)), Classification::Regular);
    let us = i.questions.iter().position(|q| q.dimension == Dimension::Usability).unwrap();
    rows[0][us] = 2;
    let ds = SurveyDataset::from_rows(&i, rows).unwrap();
    assert!(score(&ds) < POOR_BELOW);
    assert_eq!(classify(score(&ds)), Classification::Poor);
}

#[test]
fn classify_thresholds() {
    assert_eq!(classify(65.0), Classification::Regular);
    assert_eq!(classify(65.000001), Classification::Excellent);
    assert_eq!(classify(42.5), Classification::Regular);
    assert_eq!(classify(42.499999), Classification::Poor);
}

#[test]
fn weights_change_the_balance() {
    let i = inst();
    let row: Vec<u8> = i
        .questions
        .iter()
        .map(|q| match q.dimension {
            Dimension::PlayerExperience => 5,
            Dimension::Usability => 1,
            Dimension::Pedagogy => 3,
        })
        .collect();
    let ds = SurveyDataset::from_rows(&i, vec![row]).unwrap();
    let r = quality_score(&ds, &i, Weights { alpha_px: 2.0, alpha_us: 1.0 }, SdKind::Population).unwrap();
    assert!((r.quality_score - 100.0 * 8.0 / 12.0).abs() < 1e-9);
    assert_eq!(r.weights.alpha_px, 2.0);
    assert!(r.formula.contains("alpha_px"));
    for bad in [0.0, -1.0, f64::NAN] {
        let err = quality_score(&ds, &i, Weights { alpha_px: bad, alpha_us: 1.0 }, SdKind::Population).unwrap_err();
        assert!(matches!(err, ScoreError::NonPositiveWeight(..)));
    }
}

#[test]
fn pedagogy_is_reported_but_not_scored() {
    let i = inst();
    let row = |ped: u8| -> Vec<u8> {
        i.questions.iter().map(|q| if q.dimension == Dimension::Pedagogy { ped } else { 4 }).collect()
    };
    let a = quality_score(&SurveyDataset::from_rows(&i, vec![row(1)]).unwrap(), &i, Weights::default(), SdKind::Population).unwrap();
    let b = quality_score(&SurveyDataset::from_rows(&i, vec![row(5)]).unwrap(), &i, Weights::default(), SdKind::Population).unwrap();
    assert_eq!(a.quality_score, b.quality_score);
    assert_eq!(a.dimension(Dimension::Pedagogy).unwrap().mean, 1.0);
    assert_eq!(b.dimension(Dimension::Pedagogy).unwrap().mean, 5.0);
}

#[test]
fn factor_stats_pool_questions_and_respondents() {
    let i = inst();
    let si: Vec<usize> = i.questions.iter().enumerate().filter(|(_, q)| q.factor == Factor::Si).map(|(k, _)| k).collect();
    assert_eq!(si.len(), 3);
    let mut rows = vec![vec![3u8; 32]; 2];
    rows[0][si[0]] = 5;
    rows[1][si[2]] = 1;
    let r = quality_score(&SurveyDataset::from_rows(&i, rows).unwrap(), &i, Weights::default(), SdKind::Population).unwrap();
    let f = r.factor(Factor::Si).unwrap();
    // Pooled values 5,3,3,3,3,1.
    assert_eq!((f.questions, f.n), (3, 6));
    assert!((f.mean - 3.0).abs() < 1e-12);
    assert!((f.sd - (8.0f64 / 6.0).sqrt()).abs() < 1e-12);
}

#[test]
fn csv_with_28_full_rows_is_accepted() {
    let i = inst();
    let rows: Vec<Vec<String>> = (0..28).map(|r| (0..32).map(|c| ((r + c) % 5 + 1).to_string()).collect()).collect();
    let ds = parse_dataset(csv_of(&full_header(&i), &rows).as_bytes(), &i).unwrap();
    assert_eq!(ds.respondents(), 28);
    assert_eq!(ds.question_ids.len(), 32);
    assert!(ds.missing().is_empty());
}

#[test]
fn out_of_range_cell_is_located() {
    let i = inst();
    let mut rows: Vec<Vec<String>> = vec![vec!["3".to_string(); 32]; 3];
    rows[1][4] = "7".into();
    let err = parse_dataset(csv_of(&full_header(&i), &rows).as_bytes(), &i).unwrap_err();
    match err {
        DatasetError::OutOfRangeResponse { row, column, value } => {
            assert_eq!((row, column.as_str(), value.as_str()), (2, "q05", "7"));
        }
        other => panic!("unexpected {other}"),
    }
    for bad in ["0", "x", "3.5", "-1"] {
        rows[1][4] = bad.into();
        assert!(matches!(
            parse_dataset(csv_of(&full_header(&i), &rows).as_bytes(), &i),
            Err(DatasetError::OutOfRangeResponse { .. })
        ));
    }
}

#[test]
fn column_errors() {
    let i = inst();
    let mut header = full_header(&i);
    header.push("q99");
    let rows = vec![vec!["3".to_string(); 33]];
    assert!(matches!(parse_dataset(csv_of(&header, &rows).as_bytes(), &i), Err(DatasetError::UnknownColumn(c)) if c == "q99"));

    let header = &full_header(&i)[..31];
    let rows = vec![vec!["3".to_string(); 31]];
    assert!(matches!(parse_dataset(csv_of(header, &rows).as_bytes(), &i), Err(DatasetError::MissingColumn(c)) if c == "q32"));

    let mut header = full_header(&i);
    header[1] = "q01";
    let rows = vec![vec!["3".to_string(); 32]];
    assert!(matches!(parse_dataset(csv_of(&header, &rows).as_bytes(), &i), Err(DatasetError::DuplicateColumn(_))));

    assert!(matches!(
        parse_dataset(csv_of(&full_header(&i), &[]).as_bytes(), &i),
        Err(DatasetError::EmptyDataset)
    ));
}

#[test]
fn demographics_ignored_and_missing_cells_reported() {
    let i = inst();
    let mut header = vec!["demo_age"];
    header.extend(full_header(&i));
    let mut rows: Vec<Vec<String>> = (0..3)
        .map(|r| std::iter::once(format!("{}", 20 + r)).chain((0..32).map(|_| "4".to_string())).collect())
        .collect();
    rows[0][1] = String::new();
    rows[2][1] = "2".into();
    let ds = parse_dataset(csv_of(&header, &rows).as_bytes(), &i).unwrap();
    let missing = ds.missing();
    assert_eq!(missing.len(), 1);
    assert_eq!((missing[0].row, missing[0].question.as_str()), (1, "q01"));
    let (m, _) = question_stats(&ds, "q01", SdKind::Population).unwrap();
    assert_eq!(m, 3.0);
    let r = quality_score(&ds, &i, Weights::default(), SdKind::Population).unwrap();
    assert_eq!(r.missing.len(), 1);
    assert_eq!(r.questions[0].n, 2);
}

#[test]
fn question_without_responses_is_an_error() {
    let i = inst();
    let mut rows: Vec<Vec<String>> = vec![vec!["4".to_string(); 32]; 2];
    rows[0][12] = String::new();
    rows[1][12] = String::new();
    let ds = parse_dataset(csv_of(&full_header(&i), &rows).as_bytes(), &i).unwrap();
    assert_eq!(
        quality_score(&ds, &i, Weights::default(), SdKind::Population).unwrap_err(),
        ScoreError::NoResponses("q13".into())
    );
}

fn row_strategy() -> impl Strategy<Value = Vec<Vec<u8>>> {
    prop::collection::vec(prop::collection::vec(1u8..=5, 32), 1..12)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn score_is_bounded(rows in row_strategy(), a in 0.01f64..10.0, b in 0.01f64..10.0) {
        let i = inst();
        let ds = SurveyDataset::from_rows(&i, rows).unwrap();
        let r = quality_score(&ds, &i, Weights { alpha_px: a, alpha_us: b }, SdKind::Population).unwrap();
        prop_assert!((0.0..=100.0).contains(&r.quality_score));
        prop_assert_eq!(r.classification, classify(r.quality_score));
    }

    #[test]
    fn raising_a_response_never_lowers_the_score(rows in row_strategy(), pick in any::<prop::sample::Index>(), a in 0.01f64..10.0, b in 0.01f64..10.0) {
        let i = inst();
        let w = Weights { alpha_px: a, alpha_us: b };
        let cells: Vec<(usize, usize)> = (0..rows.len()).flat_map(|r| (0..32).map(move |c| (r, c))).filter(|&(r, c)| rows[r][c] < 5).collect();
        prop_assume!(!cells.is_empty());
        let (r, c) = cells[pick.index(cells.len())];
        let before = quality_score(&SurveyDataset::from_rows(&i, rows.clone()).unwrap(), &i, w, SdKind::Population).unwrap();
        let mut raised = rows;
        raised[r][c] += 1;
        let after = quality_score(&SurveyDataset::from_rows(&i, raised).unwrap(), &i, w, SdKind::Population).unwrap();
        prop_assert!(after.quality_score >= before.quality_score - 1e-12);
    }

    #[test]
    fn equal_weights_average_the_rescaled_dimensions(rows in row_strategy(), a in 0.01f64..10.0) {
        let i = inst();
        let ds = SurveyDataset::from_rows(&i, rows).unwrap();
        let r = quality_score(&ds, &i, Weights { alpha_px: a, alpha_us: a }, SdKind::Population).unwrap();
        let px = r.dimension(Dimension::PlayerExperience).unwrap().mean;
        let us = r.dimension(Dimension::Usability).unwrap().mean;
        let expect = (100.0 * (px - 1.0) / 4.0 + 100.0 * (us - 1.0) / 4.0) / 2.0;
        prop_assert!((r.quality_score - expect).abs() < 1e-9);
    }
}

#[test]
fn means_input_length_is_checked() {
    assert_eq!(
        aggregate_from_question_means(&inst(), &[4.0; 31], Weights::default()).unwrap_err(),
        ScoreError::MeanCount { expected: 32, got: 31 }
    );
}
