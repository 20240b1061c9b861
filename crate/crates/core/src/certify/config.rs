use serde::{Deserialize, Serialize};

use crate::avoidance::SearchOptions;
use crate::error::{Error, Result};
use crate::extension::{BetaMap, OracleOptions};
use crate::fpcore::enumerate::default_partitions;
use crate::fpcore::{Budget, PrimeModulus, DEFAULT_BUDGET};

pub const DEFAULT_WITNESS_CAP: usize = 4;

/// Everything the pipeline needs. `beta = None` means "build it".
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PipelineConfig {
    pub p: u64,
    pub r1: usize,
    /// Dimension of the symplectic model of local cohomology; must be even.
    pub r: usize,
    pub budget: u128,
    /// Sample matrices kept from each side of `C_v` in the counts.
    pub witness_cap: usize,
    /// Seed of the random-restart phase of the avoidance search.
    pub seed: u64,
    /// Seed of the central parts used by the projected bicyclic oracle.
    pub oracle_seed: u64,
    pub oracle_sample_budget: u128,
    pub beta: Option<BetaMap>,
    /// Enumeration partitions. Results do not depend on it.
    pub partitions: usize,
    pub record_timing: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            p: 3,
            r1: 4,
            r: 2,
            budget: DEFAULT_BUDGET,
            witness_cap: DEFAULT_WITNESS_CAP,
            seed: 0,
            oracle_seed: 0,
            oracle_sample_budget: OracleOptions::default().sample_budget,
            beta: None,
            partitions: default_partitions(),
            record_timing: false,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<PrimeModulus> {
        let p = PrimeModulus::new(self.p)?;
        if self.r == 0 || !self.r.is_multiple_of(2) {
            return Err(Error::InvalidConfig(format!(
                "r must be even and positive, got {}",
                self.r
            )));
        }
        if self.partitions == 0 {
            return Err(Error::InvalidConfig("partitions must be at least 1".into()));
        }
        match &self.beta {
            None if self.r1 < 4 => Err(Error::InvalidConfig(format!(
                "building β needs r1 >= 4, got {}; supply β to go lower",
                self.r1
            ))),
            Some(_) if self.r1 < 2 => Err(Error::InvalidConfig(format!(
                "r1 must be at least 2, got {}",
                self.r1
            ))),
            Some(b) if b.r1() != self.r1 || b.modulus() != p => Err(Error::InvalidConfig(format!(
                "supplied β is over F_{} with r1 = {}, config says F_{} with r1 = {}",
                b.modulus(),
                b.r1(),
                p,
                self.r1
            ))),
            _ => Ok(p),
        }
    }

    pub fn budget(&self) -> Budget {
        Budget(self.budget)
    }

    pub fn search_options(&self) -> SearchOptions {
        SearchOptions {
            seed: self.seed,
            ..SearchOptions::default()
        }
    }

    pub fn oracle_options(&self) -> OracleOptions {
        OracleOptions {
            sample_budget: self.oracle_sample_budget,
            seed: self.oracle_seed,
        }
    }
}

/// The part of the configuration echoed into a certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub p: u64,
    pub r1: usize,
    pub r: usize,
    pub budget: super::ExactInt,
    pub witness_cap: usize,
    pub oracle_sample_budget: super::ExactInt,
    pub beta_source: BetaSource,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BetaSource {
    Built,
    Supplied,
}
