use discovery_core::estimators::{bnp_discovery_value, expected_freq_count, expected_new_species};
use discovery_core::pyp::{
    eppf_loglik, fit_empirical_bayes, posterior_grid, simulate_continuation, simulate_sample, CrpState, GammaPrior,
};
use discovery_core::{fixtures, FitConfig, PdParams, SampleSummary, StreamPlan};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

// Set partitions of {0..n} as restricted growth strings.
fn set_partitions(n: usize) -> Vec<Vec<u64>> {
    fn go(i: usize, n: usize, blocks: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if i == n {
            out.push(blocks.clone());
            return;
        }
        for b in 0..=blocks.len() {
            if b == blocks.len() {
                blocks.push(1);
            } else {
                blocks[b] += 1;
            }
            go(i + 1, n, blocks, out);
            if blocks[b] == 1 && b + 1 == blocks.len() {
                blocks.pop();
            } else {
                blocks[b] -= 1;
            }
        }
    }
    let mut out = Vec::new();
    go(0, n, &mut Vec::new(), &mut out);
    out
}

#[test]
fn partition_probabilities_sum_to_one() {
    for (sigma, theta) in [(0.3, 1.2), (0.8, -0.5), (0.05, 40.0)] {
        let p = PdParams::new(sigma, theta).unwrap();
        for n in 1..=7 {
            let parts = set_partitions(n);
            let total: f64 = parts
                .into_iter()
                .map(|b| eppf_loglik(&p, &SampleSummary::from_species_freqs(b).unwrap()).unwrap().exp())
                .sum();
            assert!((total - 1.0).abs() < 1e-12, "n={n}: {total}");
        }
    }
}

#[test]
fn small_likelihoods() {
    let p = PdParams::new(0.35, 2.0).unwrap();
    let one = SampleSummary::from_species_freqs(vec![1]).unwrap();
    assert!(eppf_loglik(&p, &one).unwrap().abs() < 1e-15);
    let pair = SampleSummary::from_species_freqs(vec![2]).unwrap();
    assert!((eppf_loglik(&p, &pair).unwrap() - (0.65f64 / 3.0).ln()).abs() < 1e-14);
    let two = SampleSummary::from_species_freqs(vec![1, 1]).unwrap();
    assert!((eppf_loglik(&p, &two).unwrap() - (2.35f64 / 3.0).ln()).abs() < 1e-14);
    let bare = SampleSummary::from_spectrum([(1, 2)], false).unwrap();
    assert!(eppf_loglik(&p, &bare).is_err());
}

proptest! {
    #[test]
    fn likelihood_ignores_species_order(
        freqs in prop::collection::vec(1u64..50, 1..30),
        seed in any::<u64>(),
        sigma in 0.01f64..0.99,
        theta in 0.0f64..100.0,
    ) {
        let p = PdParams::new(sigma, theta).unwrap();
        let mut shuffled = freqs.clone();
        shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let a = eppf_loglik(&p, &SampleSummary::from_species_freqs(freqs).unwrap()).unwrap();
        let b = eppf_loglik(&p, &SampleSummary::from_species_freqs(shuffled).unwrap()).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
    }

    #[test]
    fn predictive_masses_sum_to_one(freqs in prop::collection::vec(1u64..20, 1..15), sigma in 0.01f64..0.99, theta in 0.0f64..50.0) {
        let p = PdParams::new(sigma, theta).unwrap();
        let (n, k) = (freqs.iter().sum::<u64>(), freqs.len() as u64);
        let old: f64 = freqs.iter().map(|&f| (f as f64 - sigma) / (theta + n as f64)).sum();
        prop_assert!((p.new_species_prob(n, k) + old - 1.0).abs() < 1e-14);
    }
}

#[test]
fn fits_on_library_data() {
    let cfg = FitConfig::default();
    let a = fit_empirical_bayes(&fixtures::aerobic().unwrap().with_freqs(), &cfg).unwrap();
    assert!((a.params.sigma() - 0.669).abs() < 0.005 && (a.params.theta() - 46.241).abs() < 0.5, "{a:?}");
    assert!(!a.boundary);
    let b = fit_empirical_bayes(&fixtures::anaerobic().unwrap().with_freqs(), &cfg).unwrap();
    assert!((b.params.sigma() - 0.656).abs() < 0.005 && (b.params.theta() - 155.408).abs() < 0.5, "{b:?}");
    // Deterministic for a fixed configuration.
    let again = fit_empirical_bayes(&fixtures::aerobic().unwrap().with_freqs(), &cfg).unwrap();
    assert_eq!(a, again);
}

#[test]
fn fit_on_simulated_zeta_samples() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..5 {
        let (sample, _) = discovery_core::estimators::zeta_sample(1.5, 1000, &mut rng).unwrap();
        let fit = fit_empirical_bayes(&sample.summary(), &FitConfig::default()).unwrap();
        assert!((0.55..0.80).contains(&fit.params.sigma()), "{fit:?}");
    }
}

fn posterior_around(s: &SampleSummary, prior: &GammaPrior) -> (PdParams, discovery_core::pyp::GridPosterior) {
    let fit = fit_empirical_bayes(s, &FitConfig::default()).unwrap().params;
    let sigmas: Vec<f64> = (1..200).map(|i| i as f64 * 0.005).collect();
    let thetas: Vec<f64> = (1..=400).map(|j| j as f64 * 0.5 + fit.theta() - 100.0).filter(|&t| t > 0.0).collect();
    (fit, posterior_grid(s, prior, &sigmas, &thetas).unwrap())
}

#[test]
fn posterior_sits_on_the_fit() {
    for s in [fixtures::aerobic().unwrap().with_freqs(), fixtures::anaerobic().unwrap().with_freqs()] {
        let (fit, post) = posterior_around(&s, &GammaPrior::default());
        let total: f64 = post.masses().iter().flatten().sum();
        assert!((total - 1.0).abs() < 1e-10);
        assert!(post.sigma_mass(fit.sigma() - 0.1, fit.sigma() + 0.1) >= 0.95);
        let (ms, _) = post.mode();
        assert!((ms - fit.sigma()).abs() <= 0.02, "mode σ {ms} vs {fit:?}");
    }
    let (fit, post) = posterior_around(&fixtures::aerobic().unwrap().with_freqs(), &GammaPrior::default());
    let (ms, mt) = post.mode();
    assert!((ms - fit.sigma()).abs() <= 0.02 && (mt - fit.theta()).abs() <= 5.0, "mode ({ms}, {mt}) vs {fit:?}");
}

#[test]
fn prior_drags_anaerobic_theta() {
    // The likelihood is flat along θ for the larger library, so the
    // exponential prior moves the joint mode well below θ̂; with a nearly
    // flat prior the mode returns to the fit.
    let s = fixtures::anaerobic().unwrap().with_freqs();
    let (fit, post) = posterior_around(&s, &GammaPrior::default());
    let (_, mt) = post.mode();
    assert!(mt < fit.theta() - 5.0 && mt > fit.theta() - 30.0, "{mt}");
    let (fit, post) = posterior_around(&s, &GammaPrior { shape: 1.0, scale: 1e12 });
    let (ms, mt) = post.mode();
    assert!((ms - fit.sigma()).abs() <= 0.02 && (mt - fit.theta()).abs() <= 5.0, "mode ({ms}, {mt}) vs {fit:?}");
}

#[test]
fn single_node_posterior() {
    let s = fixtures::aerobic().unwrap().with_freqs();
    let post = posterior_grid(&s, &GammaPrior::default(), &[0.669], &[46.241]).unwrap();
    assert!((post.masses()[0][0] - 1.0).abs() < 1e-15);
    assert!(posterior_grid(&s, &GammaPrior::default(), &[1.2], &[46.0]).is_err());
}

#[test]
fn richness_follows_recursion() {
    let p = PdParams::new(0.5, 1.0).unwrap();
    let n = 2000u64;
    let mut ek = 0.0;
    for j in 0..n {
        ek += (p.theta() + p.sigma() * ek) / (p.theta() + j as f64);
    }
    let plan = StreamPlan::new(4);
    let ks: Vec<f64> = plan
        .collect::<f64, discovery_core::Error, _>(400, |rng, c| {
            (0..c).map(|_| Ok(simulate_sample(&p, n, rng)?.k() as f64)).collect()
        })
        .unwrap();
    let mean = ks.iter().sum::<f64>() / ks.len() as f64;
    let var = ks.iter().map(|k| (k - mean).powi(2)).sum::<f64>() / (ks.len() - 1) as f64;
    let se = (var / ks.len() as f64).sqrt();
    assert!((mean - ek).abs() < 4.0 * se, "{mean} vs {ek} (se {se})");
}

#[test]
fn second_draw_is_new_at_predictive_rate() {
    let p = PdParams::new(0.3, 2.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let reps = 200_000;
    let hits = (0..reps).filter(|_| simulate_sample(&p, 2, &mut rng).unwrap().k() == 2).count() as f64;
    let want = (2.0 + 0.3) / 3.0;
    let se = (want * (1.0 - want) / reps as f64).sqrt();
    assert!((hits / reps as f64 - want).abs() < 4.0 * se);
    assert_eq!(simulate_sample(&p, 1, &mut rng).unwrap().k(), 1);
}

#[test]
fn tiny_sigma_behaves_like_dirichlet() {
    let p = PdParams::new(1e-9, 3.0).unwrap();
    for (n, k) in [(10, 4), (1000, 30)] {
        assert!((p.new_species_prob(n, k) - 3.0 / (3.0 + n as f64)).abs() < 1e-6);
    }
}

#[test]
fn continuation_matches_expected_counts() {
    let p = PdParams::new(0.5, 1.0).unwrap();
    let s = SampleSummary::from_species_freqs(vec![6, 4, 3, 2, 1, 1, 1, 1, 1]).unwrap();
    assert_eq!(s.n(), 20);
    let m = 40;
    let reps = 40_000;
    let plan = StreamPlan::new(12);
    let runs = plan
        .collect(reps, |rng, c| (0..c).map(|_| simulate_continuation(&p, &s, m, rng)).collect())
        .unwrap();
    let knew: Vec<f64> = runs.iter().map(|r| r.k_new as f64).collect();
    check_mean(&knew, expected_new_species(&p, &s, m), "K");
    for l in [1u64, 2, 5] {
        let xs: Vec<f64> = runs.iter().map(|r| r.spectrum_after.get(l) as f64).collect();
        check_mean(&xs, expected_freq_count(&p, &s, m, l).unwrap(), &format!("M({l})"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let none = simulate_continuation(&p, &s, 0, &mut rng).unwrap();
    assert_eq!((none.k_new, &none.spectrum_after), (0, s.spectrum()));
}

fn check_mean(xs: &[f64], want: f64, what: &str) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let se = (var / n).sqrt();
    assert!((mean - want).abs() < 4.0 * se, "{what}: {mean} vs {want} (se {se})");
}

#[test]
fn one_step_continuation() {
    let p = PdParams::new(0.4, 0.7).unwrap();
    let s = SampleSummary::from_species_freqs(vec![1]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let reps = 200_000;
    let hits = (0..reps).filter(|_| simulate_continuation(&p, &s, 1, &mut rng).unwrap().k_new == 1).count();
    let want = 1.1 / 1.7;
    let se = (want * (1.0 - want) / reps as f64).sqrt();
    assert!((hits as f64 / reps as f64 - want).abs() < 4.0 * se);
}

#[test]
fn small_class_shares_converge() {
    // D(0; l) ≈ (l+1) c_{σ,l+1} k/n for large n; the spread of the ratio
    // around one shrinks as n grows.
    let p = PdParams::new(0.6, 5.0).unwrap();
    let plan = StreamPlan::new(31);
    let mut prev = f64::INFINITY;
    for (i, n) in [1_000u64, 10_000, 100_000].into_iter().enumerate() {
        let samples: Vec<SampleSummary> = plan
            .child(i as u64)
            .collect(40, |rng, c| (0..c).map(|_| simulate_sample(&p, n, rng)).collect())
            .unwrap();
        let mut devs: Vec<f64> = Vec::new();
        for s in &samples {
            for l in 1..=3u64 {
                let coeff = discovery_core::intervals::discovery_coefficient(p.sigma(), l);
                let asym = coeff * s.k() as f64 / s.n() as f64;
                devs.push((bnp_discovery_value(&p, s, 0, l).unwrap() / asym - 1.0).abs());
            }
        }
        devs.sort_by(f64::total_cmp);
        let med = devs[devs.len() / 2];
        assert!(med < prev, "n={n}: median deviation {med} did not shrink from {prev}");
        prev = med;
    }
}

#[test]
fn crp_state_bookkeeping() {
    let p = PdParams::new(0.5, 1.0).unwrap();
    let mut st = CrpState::from_freqs(p, &[3, 1]);
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for _ in 0..100 {
        st.step(&mut rng);
    }
    assert_eq!(st.n(), 104);
    assert_eq!(st.counts().iter().sum::<u64>(), 104);
    assert_eq!(st.k(), st.counts().len() as u64);
}
