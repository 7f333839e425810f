use crate::baselines::{GreedyMatcher, NaiveOptMatcher};
use crate::bgs::BgsMatcher;
use crate::dyn_blossom::{BlossomConfig, DynBlossomMatcher};
use crate::matcher::DynamicMatcher;
use crate::neiman_solomon::NeimanSolomonMatcher;
use crate::random_walk::{RandomWalkMatcher, Repetitions, WalkConfig};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Greedy,
    NaiveOpt,
    RandomWalk,
    DynBlossom,
    Bgs,
    NeimanSolomon,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::Greedy,
        Algorithm::NaiveOpt,
        Algorithm::RandomWalk,
        Algorithm::DynBlossom,
        Algorithm::Bgs,
        Algorithm::NeimanSolomon,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Greedy => "greedy",
            Algorithm::NaiveOpt => "naive-opt",
            Algorithm::RandomWalk => "random-walk",
            Algorithm::DynBlossom => "dyn-blossom",
            Algorithm::Bgs => "bgs",
            Algorithm::NeimanSolomon => "neiman-solomon",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| ConfigError::UnknownAlgorithm(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("unknown algorithm {0:?}")]
    UnknownAlgorithm(String),
    #[error("option {option} does not apply to {algorithm}")]
    NotApplicable {
        option: &'static str,
        algorithm: Algorithm,
    },
    #[error("{algorithm} requires {option}")]
    Missing {
        option: &'static str,
        algorithm: Algorithm,
    },
    #[error("invalid value for {option}: {detail}")]
    Invalid {
        option: &'static str,
        detail: String,
    },
}

/// One matcher configuration of an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatcherConfig {
    pub algorithm: Algorithm,
    /// Walk length for random-walk (required), search depth for dyn-blossom.
    #[serde(default)]
    pub epsilon: Option<f64>,
    #[serde(default)]
    pub settling: bool,
    /// dyn-blossom only; `None` means safe.
    #[serde(default)]
    pub safe: Option<bool>,
    #[serde(default)]
    pub lazy: bool,
    /// bgs only; `None` means 1.
    #[serde(default)]
    pub bgs_c: Option<f64>,
    /// random-walk only: walks per free vertex, `None` means 1.
    #[serde(default)]
    pub walk_repetitions: Option<Repetitions>,
    #[serde(default)]
    pub seed: u64,
    /// Independent runs per instance.
    #[serde(default = "default_repetitions")]
    pub repetitions: u32,
}

fn default_repetitions() -> u32 {
    10
}

impl MatcherConfig {
    pub fn new(algorithm: Algorithm) -> Self {
        Self {
            algorithm,
            epsilon: None,
            settling: false,
            safe: None,
            lazy: false,
            bgs_c: None,
            walk_repetitions: None,
            seed: 0,
            repetitions: default_repetitions(),
        }
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = Some(epsilon);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_repetitions(mut self, repetitions: u32) -> Self {
        self.repetitions = repetitions;
        self
    }

    /// Rejects options that the algorithm does not define and out-of-range
    /// values.
    pub fn validate(&self) -> Result<(), ConfigError> {
        use Algorithm::*;
        let a = self.algorithm;
        let reject = |set: bool, option, allowed: &[Algorithm]| {
            if set && !allowed.contains(&a) {
                Err(ConfigError::NotApplicable {
                    option,
                    algorithm: a,
                })
            } else {
                Ok(())
            }
        };
        reject(self.epsilon.is_some(), "epsilon", &[RandomWalk, DynBlossom])?;
        reject(self.settling, "settling", &[RandomWalk])?;
        reject(self.walk_repetitions.is_some(), "walk-repetitions", &[RandomWalk])?;
        reject(self.safe.is_some(), "safe", &[DynBlossom])?;
        reject(self.lazy, "lazy", &[DynBlossom])?;
        reject(self.bgs_c.is_some(), "bgs-c", &[Bgs])?;
        if let Some(e) = self.epsilon {
            if !(e.is_finite() && e > 0.0) {
                return Err(ConfigError::Invalid {
                    option: "epsilon",
                    detail: format!("{e} is not a positive number"),
                });
            }
        } else if a == RandomWalk {
            return Err(ConfigError::Missing {
                option: "epsilon",
                algorithm: a,
            });
        }
        if let Some(c) = self.bgs_c {
            if !(c.is_finite() && c > 0.0) {
                return Err(ConfigError::Invalid {
                    option: "bgs-c",
                    detail: format!("{c} is not a positive number"),
                });
            }
        }
        if self.walk_repetitions == Some(Repetitions::Fixed(0)) {
            return Err(ConfigError::Invalid {
                option: "walk-repetitions",
                detail: "must be at least 1".into(),
            });
        }
        if self.repetitions == 0 {
            return Err(ConfigError::Invalid {
                option: "repetitions",
                detail: "must be at least 1".into(),
            });
        }
        Ok(())
    }

    /// A fresh matcher on `n` vertices for repetition `rep`; randomized
    /// matchers are seeded with `seed + rep`.
    pub fn build(&self, n: usize, rep: u32) -> Result<Box<dyn DynamicMatcher>, ConfigError> {
        self.validate()?;
        let seed = self.seed.wrapping_add(u64::from(rep));
        Ok(match self.algorithm {
            Algorithm::Greedy => Box::new(GreedyMatcher::new(n)),
            Algorithm::NaiveOpt => Box::new(NaiveOptMatcher::new(n)),
            Algorithm::RandomWalk => {
                let cfg = WalkConfig {
                    epsilon: self.epsilon.unwrap(),
                    settling: self.settling,
                    repetitions: self.walk_repetitions.unwrap_or(Repetitions::Fixed(1)),
                };
                Box::new(RandomWalkMatcher::new(n, cfg, seed))
            }
            Algorithm::DynBlossom => Box::new(DynBlossomMatcher::new(
                n,
                BlossomConfig {
                    safe: self.safe.unwrap_or(true),
                    lazy: self.lazy,
                    epsilon: self.epsilon,
                },
            )),
            Algorithm::Bgs => Box::new(BgsMatcher::new(n, self.bgs_c.unwrap_or(1.0), seed)),
            Algorithm::NeimanSolomon => Box::new(NeimanSolomonMatcher::new(n)),
        })
    }

    /// Short label naming the algorithm and its non-default options.
    pub fn label(&self) -> String {
        let mut s = self.algorithm.to_string();
        if self.settling {
            s.push_str("-settle");
        }
        if self.safe == Some(false) {
            s.push_str("-unsafe");
        }
        if self.lazy {
            s.push_str("-lazy");
        }
        if let Some(e) = self.epsilon {
            s.push_str(&format!("(eps={e})"));
        }
        if let Some(c) = self.bgs_c {
            s.push_str(&format!("(c={c})"));
        }
        s
    }
}
