use discovery_core::estimators::Estimator;
use discovery_core::study::{draw_zeta_samples, evaluate_sample, run_study, sensitivity_grid, StudyConfig};
use discovery_core::{fixtures, intervals, FitConfig, PdParams, Scaling, StreamPlan, Target};

#[test]
fn study_reports_follow_the_protocol() {
    let cfg = StudyConfig { replicates: 40, ..StudyConfig::default() };
    let reports = run_study(&cfg, &StreamPlan::new(2)).unwrap();
    assert_eq!(reports.len(), 5);
    let ks: Vec<u64> = reports.iter().map(|r| r.k).collect();
    assert!(ks.windows(2).all(|w| w[0] <= w[1]), "{ks:?}");
    for r in &reports {
        assert_eq!(r.n, 1000);
        assert_eq!(r.rows.iter().map(|row| row.l).collect::<Vec<_>>(), vec![0, 1, 5, 10, 20, 30]);
        let bnp = r.sse_of(Estimator::Bnp).unwrap();
        let gt = r.sse_of(Estimator::GoodTuring).unwrap();
        assert!(bnp < 0.01 && gt > 0.1, "{r:?}");
    }
    assert_eq!(reports, run_study(&cfg, &StreamPlan::new(2)).unwrap());
}

#[test]
fn smoothing_comparison_on_fresh_samples() {
    let (samples, pop) = draw_zeta_samples(1.5, 1000, 20, &StreamPlan::new(77)).unwrap();
    let ls = [0, 1];
    let mut pd_wins = 0;
    for (i, x) in samples.iter().enumerate() {
        let r = evaluate_sample(x, &pop, &ls, &FitConfig::default(), i).unwrap();
        let pd = r.sse_of(Estimator::PdSmooth).unwrap();
        let poisson = r.sse_of(Estimator::PoissonSmooth).unwrap();
        pd_wins += usize::from(pd < poisson);
    }
    assert!(pd_wins >= 18, "{pd_wins}/20");
}

#[test]
fn steep_zipf_leaves_little_unseen_mass() {
    let (samples, pop) = draw_zeta_samples(20.0, 100, 3, &StreamPlan::new(1)).unwrap();
    for x in &samples {
        let r = evaluate_sample(x, &pop, &[0], &FitConfig::default(), 0).unwrap();
        assert!(r.rows[0].truth < 1e-5);
    }
}

#[test]
fn sensitivity_row_matches_plain_interval() {
    let s = fixtures::aerobic().unwrap();
    let p = PdParams::new(0.66850, 46.2411).unwrap();
    let plan = StreamPlan::new(9);
    let cells = sensitivity_grid(&s, &[(0.4, 10.0)], Some(p), &[s.n()], 0.95, 2_000, Scaling::Rstar, &plan).unwrap();
    assert_eq!(cells.len(), 2);
    let eb = cells.iter().find(|c| c.empirical_bayes).unwrap();
    let ci = intervals::credible_interval(&p, &s, s.n(), &Target::Single(0), 0.95, 2_000, Scaling::Rstar, &plan)
        .unwrap();
    assert_eq!((eb.lo, eb.hi), (ci.lo, ci.hi));
}
