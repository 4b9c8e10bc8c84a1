//! Instance configuration: line-oriented `key = value` text or JSON.

use std::fmt;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};

/// Which torus characters an experiment runs over.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum ThetaSelector {
    All,
    StronglyGeneric,
    /// Exponent vectors against the torus generators.
    Explicit(Vec<Vec<u64>>),
    /// `count` strongly generic characters drawn with the config seed.
    Sample(usize),
}

impl FromStr for ThetaSelector {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "all" => return Ok(ThetaSelector::All),
            "generic" | "strongly-generic" => return Ok(ThetaSelector::StronglyGeneric),
            _ => {}
        }
        if let Some(k) = s.strip_prefix("sample:") {
            return Ok(ThetaSelector::Sample(k.parse().with_context(|| format!("sample size `{k}`"))?));
        }
        let thetas = s
            .split(';')
            .map(|t| t.split(',').map(|e| e.trim().parse::<u64>()).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| anyhow!("theta selector `{s}`: expected all, generic, sample:N or e1,e2;..."))?;
        Ok(ThetaSelector::Explicit(thetas))
    }
}

impl fmt::Display for ThetaSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ThetaSelector::All => f.write_str("all"),
            ThetaSelector::StronglyGeneric => f.write_str("generic"),
            ThetaSelector::Sample(k) => write!(f, "sample:{k}"),
            ThetaSelector::Explicit(ts) => {
                let parts: Vec<String> =
                    ts.iter().map(|t| t.iter().map(u64::to_string).collect::<Vec<_>>().join(",")).collect();
                f.write_str(&parts.join(";"))
            }
        }
    }
}

impl TryFrom<String> for ThetaSelector {
    type Error = anyhow::Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<ThetaSelector> for String {
    fn from(t: ThetaSelector) -> String {
        t.to_string()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Experiment {
    Classify,
    Build,
    Dim,
    Rss,
    Irred,
    Omega,
    Density,
    Hill,
}

impl Experiment {
    pub const ALL: [Experiment; 8] = [
        Experiment::Classify,
        Experiment::Build,
        Experiment::Dim,
        Experiment::Rss,
        Experiment::Irred,
        Experiment::Omega,
        Experiment::Density,
        Experiment::Hill,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Classify => "classify",
            Experiment::Build => "build",
            Experiment::Dim => "dim",
            Experiment::Rss => "rss",
            Experiment::Irred => "irred",
            Experiment::Omega => "omega",
            Experiment::Density => "density",
            Experiment::Hill => "hill",
        }
    }
}

impl FromStr for Experiment {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s.trim())
            .ok_or_else(|| anyhow!("unknown experiment `{s}`"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InstanceConfig {
    /// Ring key of the base ring, e.g. `mixed:p3:e1:r3:a1`.
    pub ring: String,
    /// Defaults to the sum of `torus`.
    pub n: usize,
    /// Partition of `n` giving the torus type.
    pub torus: Vec<usize>,
    pub theta: ThetaSelector,
    pub experiments: Vec<Experiment>,
    pub seed: u64,
    pub guard: u64,
    /// Bound for the brute-force oracles, stricter than `guard`.
    pub oracle_guard: u64,
    /// 0 means one worker per core.
    pub threads: usize,
    /// Largest residue degree multiplier for the density sweep.
    pub density_max_m: u32,
}

impl Default for InstanceConfig {
    fn default() -> Self {
        InstanceConfig {
            ring: String::new(),
            n: 0,
            torus: Vec::new(),
            theta: ThetaSelector::StronglyGeneric,
            experiments: Vec::new(),
            seed: 0,
            guard: hdl_core::DEFAULT_GUARD,
            oracle_guard: 1 << 16,
            threads: 0,
            density_max_m: 3,
        }
    }
}

pub fn parse_list<T: FromStr>(s: &str) -> Result<Vec<T>>
where
    T::Err: fmt::Display,
{
    s.split(',')
        .filter(|x| !x.trim().is_empty())
        .map(|x| x.trim().parse::<T>().map_err(|e| anyhow!("`{x}`: {e}")))
        .collect()
}

impl InstanceConfig {
    /// Parses `key = value` lines; `#` starts a comment.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut c = InstanceConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| anyhow!("line {}: expected key = value", lineno + 1))?;
            c.set(k.trim(), v.trim()).with_context(|| format!("line {}", lineno + 1))?;
        }
        c.finish()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let c: InstanceConfig = serde_json::from_str(text)?;
        c.finish()
    }

    /// JSON when the text starts with `{`, key-value lines otherwise.
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            Self::from_json(text)
        } else {
            Self::from_text(text)
        }
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "ring" => self.ring = value.to_string(),
            "n" => self.n = value.parse()?,
            "torus" => self.torus = parse_list(value)?,
            "theta" => self.theta = value.parse()?,
            "experiments" => self.experiments = parse_list(value)?,
            "seed" => self.seed = value.parse()?,
            "guard" => self.guard = value.parse()?,
            "oracle_guard" => self.oracle_guard = value.parse()?,
            "threads" => self.threads = value.parse()?,
            "density_max_m" => self.density_max_m = value.parse()?,
            _ => bail!("unknown key `{key}`"),
        }
        Ok(())
    }

    /// Fills defaults and checks consistency.
    pub fn finish(mut self) -> Result<Self> {
        if self.ring.is_empty() {
            bail!("missing ring");
        }
        hdl_core::chainring::ChainRing::new(hdl_core::chainring::RingSpec::parse(&self.ring)?)?;
        if self.torus.is_empty() {
            if self.n == 0 {
                bail!("missing torus");
            }
            self.torus = vec![1; self.n];
        }
        let sum: usize = self.torus.iter().sum();
        if self.n == 0 {
            self.n = sum;
        }
        if sum != self.n || self.torus.contains(&0) {
            bail!("torus {:?} is not a partition of n = {}", self.torus, self.n);
        }
        if self.oracle_guard > self.guard {
            bail!("oracle_guard must not exceed guard");
        }
        self.experiments.sort();
        self.experiments.dedup();
        Ok(self)
    }

    pub fn to_text(&self) -> String {
        let join = |v: Vec<String>| v.join(",");
        format!(
            "ring = {}\nn = {}\ntorus = {}\ntheta = {}\nexperiments = {}\nseed = {}\nguard = {}\noracle_guard = {}\nthreads = {}\ndensity_max_m = {}\n",
            self.ring,
            self.n,
            join(self.torus.iter().map(usize::to_string).collect()),
            self.theta,
            join(self.experiments.iter().map(|e| e.name().to_string()).collect()),
            self.seed,
            self.guard,
            self.oracle_guard,
            self.threads,
            self.density_max_m,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let text = "ring = mixed:p3:e1:r3:a1\ntorus = 1,1 # split\ntheta = sample:10\nexperiments = rss,classify\nseed = 7\n";
        let c = InstanceConfig::from_text(text).unwrap();
        assert_eq!(c.n, 2);
        assert_eq!(c.theta, ThetaSelector::Sample(10));
        assert_eq!(c.experiments, vec![Experiment::Classify, Experiment::Rss]);
        assert_eq!(InstanceConfig::from_text(&c.to_text()).unwrap(), c);
        let json = serde_json::to_string(&c).unwrap();
        assert_eq!(InstanceConfig::parse(&json).unwrap(), c);
    }

    #[test]
    fn explicit_thetas() {
        let t: ThetaSelector = "1,2;0,5".parse().unwrap();
        assert_eq!(t, ThetaSelector::Explicit(vec![vec![1, 2], vec![0, 5]]));
        assert_eq!(t.to_string(), "1,2;0,5");
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(InstanceConfig::from_text("torus = 1,1").is_err());
        assert!(InstanceConfig::from_text("ring = mixed:p4:e1:r2:a1\ntorus = 2").is_err());
        assert!(InstanceConfig::from_text("ring = mixed:p3:e1:r2:a1\nn = 3\ntorus = 2").is_err());
        assert!(InstanceConfig::from_text("ring = mixed:p3:e1:r2:a1\ncolour = red").is_err());
    }
}
