use fdrlab::harness::{run_experiment, ExperimentConfig, ProcedureSpec};
use fdrlab::{alpha_threshold, bonferroni, EstimateFlag, ModelParams, Probability};

fn config(m: usize, pi1: f64, mu: f64, procedure: ProcedureSpec, trials: u64, seed: u64) -> ExperimentConfig {
    ExperimentConfig::new(ModelParams::new(m, pi1, mu).unwrap(), procedure, trials, seed).unwrap()
}

fn prob(x: f64) -> Probability<f64> {
    Probability::new(x).unwrap()
}

#[test]
fn fdr_and_mfdr_agree_for_large_fields() {
    let c = config(10_000, 0.1, 2.0, ProcedureSpec::Bh(prob(0.1)), 400, 31);
    let rates = run_experiment(&c, 2).unwrap().points[0].rates;
    let (fdr, mfdr) = (rates.fdr, rates.mfdr);
    let gap = (fdr.value.unwrap() - mfdr.value.unwrap()).abs();
    // The two estimators share trials, so the sum of SEs bounds the SE of the gap.
    assert!(gap <= 3.0 * (fdr.stderr.unwrap() + mfdr.stderr.unwrap()), "gap {gap}");
}

#[test]
fn alpha_threshold_mfdr_matches_formula() {
    let c = config(5_000, 0.2, 2.0, ProcedureSpec::Alpha(prob(0.05)), 200, 32);
    let point = &run_experiment(&c, 2).unwrap().points[0];
    let mfdr = point.rates.mfdr;
    let target = point.targets.mfdr.unwrap();
    assert!((mfdr.value.unwrap() - target).abs() <= 3.0 * mfdr.stderr.unwrap());
    let ppv = point.rates.ppv.value.unwrap();
    assert!((ppv + mfdr.value.unwrap() - 1.0).abs() < 1e-15);
}

#[test]
fn bonferroni_on_one_test_is_the_alpha_threshold() {
    for p in [0.01, 0.05, 0.2] {
        let p = [prob(p)];
        assert_eq!(bonferroni(&p, prob(0.05)).unwrap(), alpha_threshold(&p, prob(0.05)));
    }
}

#[test]
fn null_fields_flag_undefined_ratios() {
    // Bonferroni at 1e-9 on 100 nulls almost never rejects.
    let c = config(100, 0.0, 2.0, ProcedureSpec::Bonferroni(prob(1e-9)), 50, 33);
    let rates = run_experiment(&c, 1).unwrap().points[0].rates;
    assert_eq!(rates.mfdr.value, None);
    assert_eq!(rates.ppv.flag, Some(EstimateFlag::NoRejections));
    assert_eq!(rates.fdr.value, Some(0.0));
}

/// 10^4 fields of 10^6 nulls: 10^10 draws.
#[test]
#[ignore = "about 10^10 normal draws; run with --ignored"]
fn genome_wide_alpha_expected_count() {
    let c = config(1_000_000, 0.0, 2.0, ProcedureSpec::Alpha(prob(5e-8)), 10_000, 34);
    let rates = run_experiment(&c, std::thread::available_parallelism().map_or(1, |n| n.get()))
        .unwrap()
        .points[0]
        .rates;
    let r = rates.mean_rejections;
    let (mean, se) = (r.value.unwrap(), r.stderr.unwrap());
    assert!((mean - 0.05).abs() <= 3.0 * se, "{mean} +- {se}");
}
