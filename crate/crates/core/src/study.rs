//! Simulation study on Zeta populations and the `(σ, θ)` sensitivity grid.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::estimators::{
    bnp_discovery_value, good_turing, pd_coefficients, smooth_spectrum, smoothed_good_turing, zeta_sample,
    Estimator, Population, SmoothedSpectrum, SmoothingRule, Target, ZetaPopulation,
};
use crate::intervals::{Scaling, ZDraws, ZPosteriorSampler};
use crate::pyp::{fit_empirical_bayes, FitConfig, PdParams};
use crate::rng::StreamPlan;
use crate::sample::{LabeledSample, SampleSummary};

/// Estimators compared in the simulation study, in report order.
pub const STUDY_ESTIMATORS: [Estimator; 5] =
    [Estimator::Bnp, Estimator::GoodTuring, Estimator::PdSmooth, Estimator::PoissonSmooth, Estimator::Sgt];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StudyConfig {
    pub replicates: usize,
    pub n: u64,
    pub s: f64,
    pub groups: usize,
    pub ls: Vec<u64>,
    #[serde(skip)]
    pub fit: FitConfig,
}

impl Default for StudyConfig {
    fn default() -> Self {
        Self { replicates: 500, n: 1000, s: 1.5, groups: 5, ls: vec![0, 1, 5, 10, 20, 30], fit: FitConfig::default() }
    }
}

/// One row of a sample report: the truth and each estimator's value at `l`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StudyRow {
    pub l: u64,
    pub truth: f64,
    /// Aligned with [`STUDY_ESTIMATORS`]; `None` where the estimator is
    /// undefined for the sample.
    pub values: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleReport {
    pub group: usize,
    pub n: u64,
    pub k: u64,
    pub sigma: f64,
    pub theta: f64,
    pub rows: Vec<StudyRow>,
    /// Sum of squared errors over `l = 0..=n`, aligned with
    /// [`STUDY_ESTIMATORS`].
    pub sse: Vec<Option<f64>>,
}

impl SampleReport {
    pub fn sse_of(&self, e: Estimator) -> Option<f64> {
        STUDY_ESTIMATORS.iter().position(|&x| x == e).and_then(|i| self.sse[i])
    }
}

/// `(0; l)`-discovery truth for `l = 0..=n`.
pub fn truth_curve<P: Population<u128>>(pop: &P, sample: &LabeledSample<u128>) -> Result<Vec<f64>> {
    let mut out = vec![0.0; sample.n() as usize + 1];
    let mut seen = 0.0;
    for (label, &c) in sample.counts() {
        let p = pop.prob(label).ok_or_else(|| Error::UnknownSpecies(label.to_string()))?;
        seen += p;
        out[c as usize] += p;
    }
    out[0] = (1.0 - seen).max(0.0);
    Ok(out)
}

/// Values of one estimator for `l = 0..=n`; `None` when the estimator
/// cannot be formed (e.g. simple Good–Turing on fewer than two populated
/// frequencies).
pub fn estimator_curve(e: Estimator, p: &PdParams, s: &SampleSummary) -> Result<Option<Vec<f64>>> {
    let n = s.n();
    let curve = match e {
        Estimator::Bnp => (0..=n).map(|l| bnp_discovery_value(p, s, 0, l)).collect::<Result<Vec<_>>>()?,
        Estimator::GoodTuring => (0..=n).map(|l| Ok(good_turing(s, l)?.value)).collect::<Result<Vec<_>>>()?,
        Estimator::PdSmooth => {
            // (l+1) m'_{l+1} / n with m'_l = c_{σ,l} k
            let c = pd_coefficients(p.sigma(), n + 1);
            (0..=n).map(|l| (l + 1) as f64 * c[l as usize] * s.k() as f64 / n as f64).collect()
        }
        Estimator::PoissonSmooth => {
            let sm = smooth_spectrum(&SmoothingRule::poisson_default(), s)?;
            debug_assert!(matches!(sm, SmoothedSpectrum::Poisson { .. }));
            (0..=n).map(|l| (l + 1) as f64 * sm.get(l + 1) / n as f64).collect()
        }
        Estimator::Sgt => {
            if s.spectrum().len() < 2 {
                return Ok(None);
            }
            let mut v = vec![0.0; n as usize + 1];
            v[0] = smoothed_good_turing(&SmoothingRule::Sgt, s, 0)?.value;
            for (l, _) in s.spectrum().iter() {
                v[l as usize] = smoothed_good_turing(&SmoothingRule::Sgt, s, l)?.value;
            }
            v
        }
        other => return Err(Error::Unsupported(format!("{} is not part of the study", other.tag()))),
    };
    Ok(Some(curve))
}

/// Fit `(σ, θ)` by empirical Bayes and score every study estimator.
pub fn evaluate_sample<P: Population<u128>>(
    sample: &LabeledSample<u128>,
    pop: &P,
    ls: &[u64],
    fit: &FitConfig,
    group: usize,
) -> Result<SampleReport> {
    let s = sample.summary();
    let params = fit_empirical_bayes(&s, fit)?.params;
    let truth = truth_curve(pop, sample)?;
    let curves: Vec<Option<Vec<f64>>> =
        STUDY_ESTIMATORS.iter().map(|&e| estimator_curve(e, &params, &s)).collect::<Result<_>>()?;
    let sse = curves
        .iter()
        .map(|c| c.as_ref().map(|c| c.iter().zip(&truth).map(|(a, b)| (a - b) * (a - b)).sum()))
        .collect();
    let rows = ls
        .iter()
        .filter(|&&l| l <= s.n())
        .map(|&l| StudyRow {
            l,
            truth: truth[l as usize],
            values: curves.iter().map(|c| c.as_ref().map(|c| c[l as usize])).collect(),
        })
        .collect();
    Ok(SampleReport { group, n: s.n(), k: s.k(), sigma: params.sigma(), theta: params.theta(), rows, sse })
}

/// Draw `count` Zeta samples, sample `i` on stream `i` of `plan`.
pub fn draw_zeta_samples(s: f64, n: u64, count: usize, plan: &StreamPlan) -> Result<(Vec<LabeledSample<u128>>, ZetaPopulation)> {
    let pop = ZetaPopulation::new(s)?;
    let samples = (0..count as u64)
        .into_par_iter()
        .map(|i| zeta_sample(s, n, &mut plan.rng(i)).map(|(x, _)| x))
        .collect::<Result<Vec<_>>>()?;
    Ok((samples, pop))
}

/// Indices of one sample per `k`-quantile group: samples are ranked by
/// their number of distinct species, cut into `groups` equal blocks, and
/// one member of each block is picked uniformly.
pub fn pick_by_k_groups<R: Rng + ?Sized>(ks: &[u64], groups: usize, rng: &mut R) -> Result<Vec<usize>> {
    if groups == 0 || ks.len() < groups {
        return Err(Error::InvalidParams(format!("{} samples cannot fill {groups} groups", ks.len())));
    }
    let mut order: Vec<usize> = (0..ks.len()).collect();
    order.sort_by_key(|&i| (ks[i], i));
    Ok((0..groups)
        .map(|g| {
            let lo = g * ks.len() / groups;
            let hi = (g + 1) * ks.len() / groups;
            order[rng.random_range(lo..hi)]
        })
        .collect())
}

/// The full protocol: draw, group by `k`, pick one sample per group, fit
/// and score.
pub fn run_study(cfg: &StudyConfig, plan: &StreamPlan) -> Result<Vec<SampleReport>> {
    let (samples, pop) = draw_zeta_samples(cfg.s, cfg.n, cfg.replicates, &plan.child(0))?;
    let ks: Vec<u64> = samples.iter().map(|x| x.counts().len() as u64).collect();
    let picks = pick_by_k_groups(&ks, cfg.groups, &mut plan.child(1).rng(0))?;
    picks
        .par_iter()
        .enumerate()
        .map(|(g, &i)| evaluate_sample(&samples[i], &pop, &cfg.ls, &cfg.fit, g + 1))
        .collect()
}

/// One cell of the sensitivity grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SensitivityCell {
    pub sigma: f64,
    pub theta: f64,
    pub m: u64,
    pub estimate: f64,
    pub lo: f64,
    pub hi: f64,
    /// Set on the row evaluated at the empirical-Bayes fit.
    pub empirical_bayes: bool,
}

/// Credible intervals for the `(m; 0)`-discovery at each `(σ, θ)` and `m`.
///
/// Cell `j` of the grid draws from `plan.child(j + 1)`; the
/// empirical-Bayes row, when given, uses `plan` itself so that it matches a
/// plain interval computation with the same seed.
#[allow(clippy::too_many_arguments)]
pub fn sensitivity_grid(
    s: &SampleSummary,
    cells: &[(f64, f64)],
    eb: Option<PdParams>,
    ms: &[u64],
    level: f64,
    draws: usize,
    scaling: Scaling,
    plan: &StreamPlan,
) -> Result<Vec<SensitivityCell>> {
    let mut jobs: Vec<(PdParams, bool, StreamPlan)> = Vec::new();
    for (j, &(sigma, theta)) in cells.iter().enumerate() {
        jobs.push((PdParams::new(sigma, theta)?, false, plan.child(j as u64 + 1)));
    }
    if let Some(p) = eb {
        jobs.push((p, true, *plan));
    }
    let mut out = Vec::with_capacity(jobs.len() * ms.len());
    for (p, is_eb, cell_plan) in jobs {
        let z = ZDraws::new(&ZPosteriorSampler::new(p, s.n(), s.k())?, draws, &cell_plan)?;
        for &m in ms {
            let ci = z.interval(&p, s, m, &Target::Single(0), level, scaling)?;
            out.push(SensitivityCell {
                sigma: p.sigma(),
                theta: p.theta(),
                m,
                estimate: bnp_discovery_value(&p, s, m, 0)?,
                lo: ci.lo,
                hi: ci.hi,
                empirical_bayes: is_eb,
            });
        }
    }
    Ok(out)
}

/// The `{0.2, 0.4, 0.6, 0.8} × {0.1, 1, 10, 100, 1000}` grid.
pub fn default_sensitivity_cells() -> Vec<(f64, f64)> {
    let mut v = Vec::new();
    for theta in [0.1, 1.0, 10.0, 100.0, 1000.0] {
        for sigma in [0.2, 0.4, 0.6, 0.8] {
            v.push((sigma, theta));
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    #[test]
    fn truth_curve_partitions_mass() {
        let pop: BTreeMap<u128, f64> = [(1, 0.5), (2, 0.3), (3, 0.2)].into_iter().collect();
        let s = LabeledSample::from_labels([1u128, 1, 2]).unwrap();
        let t = truth_curve(&pop, &s).unwrap();
        assert_eq!(t.len(), 4);
        assert!((t[0] - 0.2).abs() < 1e-15);
        assert_eq!((t[1], t[2], t[3]), (0.3, 0.5, 0.0));
    }

    #[test]
    fn groups_follow_k_order() {
        let ks: Vec<u64> = (0..20).rev().collect();
        let picks = pick_by_k_groups(&ks, 4, &mut StreamPlan::new(3).rng(0)).unwrap();
        let picked_k: Vec<u64> = picks.iter().map(|&i| ks[i]).collect();
        for (g, k) in picked_k.iter().enumerate() {
            assert!((5 * g as u64..5 * g as u64 + 5).contains(k));
        }
        assert!(pick_by_k_groups(&ks[..3], 4, &mut StreamPlan::new(3).rng(0)).is_err());
    }

    #[test]
    fn pd_curve_matches_rule() {
        let s = SampleSummary::from_spectrum([(1, 5), (2, 2), (4, 1)], true).unwrap();
        let p = PdParams::new(0.4, 3.0).unwrap();
        let c = estimator_curve(Estimator::PdSmooth, &p, &s).unwrap().unwrap();
        for l in [0u64, 1, 3] {
            let want = smoothed_good_turing(&SmoothingRule::Pd { sigma: 0.4 }, &s, l).unwrap().value;
            assert!((c[l as usize] - want).abs() < 1e-15);
        }
    }
}
