use anyhow::{bail, Context, Result};
use serde_json::{json, Map, Value};

use discovery_core::estimators::{
    bnp_cumulative, bnp_discovery, good_toulmin, good_turing, smoothed_good_turing, DiscoveryEstimate,
};
use discovery_core::intervals::{
    asymptotic_estimate, exact_interval_new_species_based, ZDraws, ZPosteriorSampler, MIN_DRAWS,
};
use discovery_core::pyp::{fit_empirical_bayes, posterior_grid, GammaPrior};
use discovery_core::study::{run_study, sensitivity_grid, StudyConfig, STUDY_ESTIMATORS};
use discovery_core::{
    fixtures, Estimator, FitConfig, FitResult, PdParams, SampleSummary, Scaling, SmoothingRule, StreamPlan, Target,
};

use crate::args::*;
use crate::output::{num, opt, Report};

fn load(input: &InputArgs) -> Result<(SampleSummary, Value)> {
    if let Some(p) = &input.spectrum {
        let s = SampleSummary::read_spectrum_csv(p, true).with_context(|| format!("reading {}", p.display()))?;
        return Ok((s, json!({ "spectrum": p.display().to_string() })));
    }
    if let Some(p) = &input.tokens {
        let s = SampleSummary::read_tokens(p).with_context(|| format!("reading {}", p.display()))?;
        return Ok((s, json!({ "tokens": p.display().to_string() })));
    }
    let name = input.library.as_deref().unwrap_or_default();
    match fixtures::by_name(name) {
        Some(s) => Ok((s?, json!({ "library": name }))),
        None => bail!("unknown library {name:?}; expected aerobic or anaerobic"),
    }
}

fn base_config(input: Value, s: &SampleSummary) -> Map<String, Value> {
    let mut c = Map::new();
    c.insert("input".into(), input);
    c.insert("n".into(), json!(s.n()));
    c.insert("k".into(), json!(s.k()));
    c
}

/// Explicit parameters, the fit, or `None` when neither was asked for.
fn params(args: &ParamArgs, s: &SampleSummary, config: &mut Map<String, Value>) -> Result<Option<PdParams>> {
    let p = match (args.sigma, args.theta, args.fit) {
        (Some(sigma), Some(theta), false) => PdParams::new(sigma, theta)?,
        (None, None, true) => {
            let fit = fit_empirical_bayes(s, &FitConfig::default())?;
            config.insert("fit".into(), fit_json(&fit));
            fit.params
        }
        (None, None, false) => return Ok(None),
        _ => bail!("pass either --fit or both --sigma and --theta"),
    };
    config.insert("sigma".into(), json!(p.sigma()));
    config.insert("theta".into(), json!(p.theta()));
    Ok(Some(p))
}

fn require(p: Option<PdParams>) -> Result<PdParams> {
    p.context("this command needs --fit or --sigma and --theta")
}

fn fit_json(f: &FitResult) -> Value {
    json!({
        "sigma": f.params.sigma(),
        "theta": f.params.theta(),
        "loglik": f.loglik,
        "boundary": f.boundary,
        "evaluations": f.evaluations,
    })
}

/// `123`, `n`, `10n`: sizes, the latter two relative to the sample size.
pub fn parse_m(tokens: &[String], n: u64) -> Result<Vec<u64>> {
    tokens
        .iter()
        .map(|t| {
            let t = t.trim();
            let parsed = match t.strip_suffix('n') {
                Some("") => Some(n),
                Some(c) => c.parse::<u64>().ok().and_then(|c| c.checked_mul(n)),
                None => t.parse::<u64>().ok(),
            };
            parsed.with_context(|| format!("bad --m value {t:?}; use integers, n or multiples like 10n"))
        })
        .collect()
}

fn targets(t: &TargetArgs) -> Vec<Target> {
    let mut out: Vec<Target> = t.l.iter().map(|&l| Target::Single(l)).collect();
    if !t.cumulative.is_empty() {
        out.push(Target::Set(t.cumulative.clone()));
    }
    if out.is_empty() {
        out.push(Target::Single(0));
    }
    out
}

fn target_config(t: &TargetArgs, ms: &[u64], config: &mut Map<String, Value>) {
    config.insert("m".into(), json!(ms));
    config.insert("l".into(), json!(t.l));
    if !t.cumulative.is_empty() {
        config.insert("cumulative".into(), json!(t.cumulative));
    }
}

fn scaling(s: ScalingArg) -> Scaling {
    match s {
        ScalingArg::Naive => Scaling::Naive,
        ScalingArg::Rstar => Scaling::Rstar,
    }
}

pub fn fit(a: &FitArgs) -> Result<Report> {
    let (s, input) = load(&a.input)?;
    let f = fit_empirical_bayes(&s, &FitConfig::default())?;
    if f.boundary {
        eprintln!("warning: the fit sits on the boundary of the parameter space");
    }
    let mut r = Report::new("fit", base_config(input, &s), None);
    r.columns = vec!["sigma", "theta", "loglik", "boundary", "evaluations"];
    r.rows = vec![vec![
        num(f.params.sigma()),
        num(f.params.theta()),
        num(f.loglik),
        f.boundary.to_string(),
        f.evaluations.to_string(),
    ]];
    r.records = json!([fit_json(&f)]);
    Ok(r)
}

// A frequency set for estimators defined per frequency: the sum.
fn summed<F: Fn(u64) -> discovery_core::Result<DiscoveryEstimate>>(t: &Target, f: F) -> Result<DiscoveryEstimate> {
    match t {
        Target::Single(l) => Ok(f(*l)?),
        Target::Set(ls) => {
            let parts = ls.iter().map(|&l| f(l)).collect::<discovery_core::Result<Vec<_>>>()?;
            let mut e = parts[0].clone();
            e.target = t.clone();
            e.value = parts.iter().map(|p| p.value).sum();
            Ok(e)
        }
    }
}

fn estimate_row(e: &DiscoveryEstimate) -> Vec<String> {
    vec![e.estimator.tag().into(), e.n.to_string(), e.m.to_string(), e.target.label(), num(e.value), e.unstable.to_string()]
}

pub fn estimate(a: &EstimateArgs) -> Result<Report> {
    let (s, input) = load(&a.input)?;
    let mut config = base_config(input, &s);
    let p = params(&a.params, &s, &mut config)?;
    let ms = parse_m(&a.targets.m, s.n())?;
    target_config(&a.targets, &ms, &mut config);
    let mut estimators = a.estimator.clone();
    if let Some(sm) = a.smoother {
        estimators.push(match sm {
            SmootherArg::Pd => EstimatorArg::PdSmooth,
            SmootherArg::Poisson => EstimatorArg::PoissonSmooth,
            SmootherArg::Sgt => EstimatorArg::Sgt,
        });
    }
    let mut seen = Vec::new();
    estimators.retain(|e| !seen.contains(e) && {
        seen.push(*e);
        true
    });
    config.insert(
        "estimators".into(),
        json!(estimators.iter().map(|e| format!("{e:?}").to_lowercase()).collect::<Vec<_>>()),
    );
    let ts = targets(&a.targets);
    let mut out = Vec::new();
    for e in &estimators {
        match e {
            EstimatorArg::Bnp => {
                let p = require(p)?;
                for &m in &ms {
                    for t in &ts {
                        out.push(match t {
                            Target::Single(l) => bnp_discovery(&p, &s, m, *l)?,
                            Target::Set(ls) => bnp_cumulative(&p, &s, m, ls)?,
                        });
                    }
                }
            }
            EstimatorArg::Gtoulmin => {
                for &m in &ms {
                    out.push(good_toulmin(&s, m, a.clamp));
                }
            }
            EstimatorArg::Gt => {
                for t in &ts {
                    out.push(summed(t, |l| good_turing(&s, l))?);
                }
            }
            EstimatorArg::Sgt | EstimatorArg::PoissonSmooth | EstimatorArg::PdSmooth => {
                let rule = match e {
                    EstimatorArg::Sgt => SmoothingRule::Sgt,
                    EstimatorArg::PoissonSmooth => SmoothingRule::poisson_default(),
                    _ => SmoothingRule::Pd { sigma: require(p)?.sigma() },
                };
                for t in &ts {
                    out.push(summed(t, |l| smoothed_good_turing(&rule, &s, l))?);
                }
            }
        }
    }
    if out.iter().any(|e| e.unstable) {
        eprintln!("warning: some Good–Toulmin values are flagged unstable");
    }
    let mut r = Report::new("estimate", config, None);
    r.columns = vec!["estimator", "n", "m", "target", "value", "unstable"];
    r.rows = out.iter().map(estimate_row).collect();
    r.records = serde_json::to_value(&out)?;
    Ok(r)
}

pub fn interval(a: &IntervalArgs) -> Result<Report> {
    let (s, input) = load(&a.input)?;
    let mut config = base_config(input, &s);
    let p = require(params(&a.params, &s, &mut config)?)?;
    let ms = parse_m(&a.targets.m, s.n())?;
    target_config(&a.targets, &ms, &mut config);
    let sc = scaling(a.mc.scaling);
    config.insert("level".into(), json!(a.mc.level));
    let ts = targets(&a.targets);
    let seed = if a.exact {
        config.insert("method".into(), json!("exact-pmf"));
        None
    } else {
        config.insert("scaling".into(), json!(sc.method().tag()));
        config.insert("draws".into(), json!(a.mc.draws));
        Some(a.mc.seed)
    };
    let draws = if !a.exact && ms.iter().any(|&m| m > 0) {
        if a.mc.draws < MIN_DRAWS {
            bail!("--draws {} is below the minimum of {MIN_DRAWS}", a.mc.draws);
        }
        let sampler = ZPosteriorSampler::new(p, s.n(), s.k())?;
        Some(ZDraws::new(&sampler, a.mc.draws, &StreamPlan::new(a.mc.seed))?)
    } else {
        None
    };
    let mut rows = Vec::new();
    let mut records = Vec::new();
    for &m in &ms {
        for t in &ts {
            let est = bnp_cumulative(&p, &s, m, &t.ls())?;
            let mut est = DiscoveryEstimate { target: t.clone(), ..est };
            let (ci, asym) = if a.exact {
                let l = match t {
                    Target::Single(l) => *l,
                    Target::Set(_) => bail!("--exact supports single frequencies only"),
                };
                (exact_interval_new_species_based(&p, &s, m, l, a.mc.level)?, None)
            } else {
                let z = draws.as_ref();
                let ci = match z {
                    Some(z) => z.interval(&p, &s, m, t, a.mc.level, sc)?,
                    None => discovery_core::intervals::credible_interval(
                        &p, &s, 0, t, a.mc.level, a.mc.draws, sc, &StreamPlan::new(a.mc.seed),
                    )?,
                };
                let asym = (m > 0).then(|| asymptotic_estimate(&p, &s, m, t, sc.method())).transpose()?;
                (ci, asym.map(|e| e.value))
            };
            est = est.with_interval(ci);
            rows.push(vec![
                est.estimator.tag().into(),
                est.n.to_string(),
                m.to_string(),
                t.label(),
                num(est.value),
                opt(asym),
                num(ci.lo),
                num(ci.hi),
                num(ci.level),
                ci.method.tag().into(),
                ci.draws.to_string(),
            ]);
            let mut rec = serde_json::to_value(&est)?;
            if let (Some(v), Some(obj)) = (asym, rec.as_object_mut()) {
                obj.insert("asymptotic".into(), json!(v));
            }
            records.push(rec);
        }
    }
    let mut r = Report::new("interval", config, seed);
    r.columns = vec!["estimator", "n", "m", "target", "value", "asymptotic", "lo", "hi", "level", "method", "draws"];
    r.rows = rows;
    r.records = Value::Array(records);
    Ok(r)
}

pub fn simulate(a: &SimulateArgs) -> Result<Report> {
    let cfg = StudyConfig { replicates: a.replicates, n: a.n, s: a.s, groups: a.groups, ls: a.l.clone(), ..Default::default() };
    let reports = run_study(&cfg, &StreamPlan::new(a.seed))?;
    let config = match serde_json::to_value(&cfg)? {
        Value::Object(m) => m,
        _ => unreachable!("study config serializes to an object"),
    };
    let tags: Vec<&'static str> = STUDY_ESTIMATORS.iter().map(Estimator::tag).collect();
    let mut r = Report::new("simulate", config, Some(a.seed));
    r.columns = ["group", "n", "k", "sigma", "theta", "l", "truth"].into_iter().chain(tags.iter().copied()).collect();
    let mut records = Vec::new();
    for rep in &reports {
        let head = vec![rep.group.to_string(), rep.n.to_string(), rep.k.to_string(), num(rep.sigma), num(rep.theta)];
        for row in &rep.rows {
            let mut cells = head.clone();
            cells.push(row.l.to_string());
            cells.push(num(row.truth));
            cells.extend(row.values.iter().map(|v| opt(*v)));
            r.rows.push(cells);
        }
        let mut cells = head;
        cells.push("sse".into());
        cells.push(String::new());
        cells.extend(rep.sse.iter().map(|v| opt(*v)));
        r.rows.push(cells);

        let by_tag = |vals: &[Option<f64>]| -> Map<String, Value> {
            tags.iter().zip(vals).map(|(t, v)| (t.to_string(), json!(v))).collect()
        };
        records.push(json!({
            "group": rep.group,
            "n": rep.n,
            "k": rep.k,
            "sigma": rep.sigma,
            "theta": rep.theta,
            "rows": rep.rows.iter().map(|row| json!({
                "l": row.l,
                "truth": row.truth,
                "estimates": by_tag(&row.values),
            })).collect::<Vec<_>>(),
            "sse": by_tag(&rep.sse),
        }));
    }
    r.records = Value::Array(records);
    Ok(r)
}

pub fn sensitivity(a: &SensitivityArgs) -> Result<Report> {
    let (s, input) = load(&a.input)?;
    let mut config = base_config(input, &s);
    let eb = params(&a.params, &s, &mut config)?;
    let ms = parse_m(&a.m, s.n())?;
    if ms.contains(&0) {
        bail!("sensitivity intervals need m > 0");
    }
    if a.mc.draws < MIN_DRAWS {
        bail!("--draws {} is below the minimum of {MIN_DRAWS}", a.mc.draws);
    }
    let cells: Vec<(f64, f64)> =
        a.grid_theta.iter().flat_map(|&t| a.grid_sigma.iter().map(move |&sg| (sg, t))).collect();
    let sc = scaling(a.mc.scaling);
    config.insert("m".into(), json!(ms));
    config.insert("grid_sigma".into(), json!(a.grid_sigma));
    config.insert("grid_theta".into(), json!(a.grid_theta));
    config.insert("level".into(), json!(a.mc.level));
    config.insert("draws".into(), json!(a.mc.draws));
    config.insert("scaling".into(), json!(sc.method().tag()));
    let out = sensitivity_grid(&s, &cells, eb, &ms, a.mc.level, a.mc.draws, sc, &StreamPlan::new(a.mc.seed))?;
    let mut r = Report::new("sensitivity", config, Some(a.mc.seed));
    r.columns = vec!["sigma", "theta", "m", "estimate", "lo", "hi", "empirical_bayes"];
    r.rows = out
        .iter()
        .map(|c| {
            vec![num(c.sigma), num(c.theta), c.m.to_string(), num(c.estimate), num(c.lo), num(c.hi), c.empirical_bayes.to_string()]
        })
        .collect();
    r.records = serde_json::to_value(&out)?;
    Ok(r)
}

pub fn posterior(a: &PosteriorArgs) -> Result<Report> {
    let (s, input) = load(&a.input)?;
    let mut config = base_config(input, &s);
    if a.sigma_points == 0 || a.theta_points == 0 {
        bail!("grids need at least one point");
    }
    let sigmas: Vec<f64> = (1..=a.sigma_points).map(|i| i as f64 / (a.sigma_points + 1) as f64).collect();
    let thetas: Vec<f64> = if a.theta_points == 1 {
        vec![a.theta_min]
    } else {
        let step = (a.theta_max - a.theta_min) / (a.theta_points - 1) as f64;
        (0..a.theta_points).map(|j| a.theta_min + step * j as f64).collect()
    };
    let prior = GammaPrior { shape: a.prior_shape, scale: a.prior_scale };
    config.insert("sigma_points".into(), json!(a.sigma_points));
    config.insert("theta_grid".into(), json!({"min": a.theta_min, "max": a.theta_max, "points": a.theta_points}));
    config.insert("prior".into(), json!({"sigma": "uniform(0,1)", "theta": {"shape": prior.shape, "scale": prior.scale}}));
    let post = posterior_grid(&s, &prior, &sigmas, &thetas)?;
    let fit = fit_empirical_bayes(&s, &FitConfig::default())?;
    let (ms, mt) = post.mode();
    let mut r = Report::new("posterior-grid", config, None);
    r.notes.push(("fit".into(), fit_json(&fit)));
    r.notes.push(("mode".into(), json!({"sigma": ms, "theta": mt})));
    r.columns = vec!["sigma", "theta", "log_density"];
    let mut records = Vec::new();
    for (i, &sg) in post.sigma_grid.iter().enumerate() {
        for (j, &th) in post.theta_grid.iter().enumerate() {
            let d = post.log_density[i][j];
            r.rows.push(vec![num(sg), num(th), num(d)]);
            records.push(json!({"sigma": sg, "theta": th, "log_density": d}));
        }
    }
    r.records = Value::Array(records);
    Ok(r)
}
