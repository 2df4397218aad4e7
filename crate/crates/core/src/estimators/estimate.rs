use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

/// Which estimator produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Estimator {
    Bnp,
    BnpIdentity,
    BnpAsymptoticNaive,
    BnpAsymptoticRstar,
    #[serde(rename = "gt")]
    GoodTuring,
    #[serde(rename = "gtoulmin")]
    GoodToulmin,
    Sgt,
    PoissonSmooth,
    PdSmooth,
}

impl Estimator {
    pub fn tag(&self) -> &'static str {
        match self {
            Estimator::Bnp => "bnp",
            Estimator::BnpIdentity => "bnp-identity",
            Estimator::BnpAsymptoticNaive => "bnp-asymptotic-naive",
            Estimator::BnpAsymptoticRstar => "bnp-asymptotic-rstar",
            Estimator::GoodTuring => "gt",
            Estimator::GoodToulmin => "gtoulmin",
            Estimator::Sgt => "sgt",
            Estimator::PoissonSmooth => "poisson-smooth",
            Estimator::PdSmooth => "pd-smooth",
        }
    }
}

/// A single frequency `l` or a set `{l_1, ..., l_τ}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Target {
    Single(u64),
    Set(Vec<u64>),
}

impl Target {
    pub fn ls(&self) -> Vec<u64> {
        match self {
            Target::Single(l) => vec![*l],
            Target::Set(ls) => ls.clone(),
        }
    }

    /// `l` or the `;`-joined set, as used in CSV output.
    pub fn label(&self) -> String {
        match self {
            Target::Single(l) => l.to_string(),
            Target::Set(ls) => ls.iter().map(u64::to_string).collect::<Vec<_>>().join(";"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IntervalMethod {
    /// Limit law scaled by `m^{σ-1}`.
    #[serde(rename = "asymptotic-naive")]
    AsymptoticNaive,
    /// Limit law scaled by `r*(m, l)`.
    #[serde(rename = "asymptotic-rstar")]
    AsymptoticRstar,
    /// Quantiles of the exact law of the number of new species.
    #[serde(rename = "exact-pmf")]
    ExactPmf,
}

impl IntervalMethod {
    pub fn tag(&self) -> &'static str {
        match self {
            IntervalMethod::AsymptoticNaive => "asymptotic-naive",
            IntervalMethod::AsymptoticRstar => "asymptotic-rstar",
            IntervalMethod::ExactPmf => "exact-pmf",
        }
    }
}

/// Equal-tailed credible interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CredibleInterval {
    pub lo: f64,
    pub hi: f64,
    pub level: f64,
    pub method: IntervalMethod,
    /// Monte Carlo draws behind the interval; zero for exact intervals.
    pub draws: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscoveryEstimate {
    pub estimator: Estimator,
    pub n: u64,
    pub m: u64,
    pub target: Target,
    pub value: f64,
    /// Set by Good–Toulmin when the extrapolation is unreliable.
    pub unstable: bool,
    pub interval: Option<CredibleInterval>,
}

impl DiscoveryEstimate {
    pub fn new(estimator: Estimator, n: u64, m: u64, target: Target, value: f64) -> Self {
        Self { estimator, n, m, target, value, unstable: false, interval: None }
    }

    pub fn with_interval(mut self, ci: CredibleInterval) -> Self {
        self.interval = Some(ci);
        self
    }
}

#[derive(Serialize)]
struct Record<'a> {
    estimator: Estimator,
    n: u64,
    m: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    l: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ls: Option<&'a [u64]>,
    value: f64,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    unstable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    interval: Option<&'a CredibleInterval>,
}

impl Serialize for DiscoveryEstimate {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let (l, ls) = match &self.target {
            Target::Single(l) => (Some(*l), None),
            Target::Set(ls) => (None, Some(ls.as_slice())),
        };
        Record {
            estimator: self.estimator,
            n: self.n,
            m: self.m,
            l,
            ls,
            value: self.value,
            unstable: self.unstable,
            interval: self.interval.as_ref(),
        }
        .serialize(s)
    }
}
