use serde::{Deserialize, Serialize};

use super::certificate::*;
use super::config::{BetaSource, PipelineConfig};
use super::pipeline::run_pipeline;
use crate::error::{Error, Result};
use crate::extension::BetaMap;
use crate::fpcore::{wedge_dim, FpMatrix, PrimeModulus};
use crate::localcount::{
    axkatz_bound, closed_climit, closed_xi, padic_valuation, pullback_wedge, w_pairing, DualWedge,
    SymplecticSpace,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecheckLevel {
    /// Schema plus internal consistency of the recorded numbers.
    Structural,
    /// Structural, then re-run the pipeline and compare every field.
    Full,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub level: RecheckLevel,
    pub problems: Vec<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.problems.is_empty()
    }
}

fn beta_of(c: &Certificate, p: PrimeModulus) -> Result<Option<BetaMap>> {
    let Some(b) = &c.beta else {
        return Ok(None);
    };
    let m = FpMatrix::from_row_vectors(p, wedge_dim(c.config.r1), &b.rows)?;
    Ok(Some(BetaMap::new(c.config.r1, m)?))
}

fn structural(c: &Certificate, problems: &mut Vec<String>) -> Result<()> {
    let mut bad = |s: String| problems.push(s);
    let cfg = &c.config;
    let p = match PrimeModulus::new(cfg.p) {
        Ok(p) => p,
        Err(e) => {
            bad(format!("config.p: {e}"));
            return Ok(());
        }
    };
    if cfg.r == 0 || !cfg.r.is_multiple_of(2) {
        bad(format!("config.r = {} is not even", cfg.r));
        return Ok(());
    }
    let names: Vec<&str> = c.verdicts.iter().map(|v| v.check.as_str()).collect();
    if names != CHECKS {
        bad("verdict list does not match the check list".into());
    }
    if Status::of(&c.verdicts) != c.status {
        bad(format!("status {} disagrees with the verdicts", c.status.as_str()));
    }
    if cfg.beta_source == BetaSource::Supplied && c.construction.is_some() {
        bad("supplied β with a construction record".into());
    }

    let beta = match beta_of(c, p) {
        Ok(b) => b,
        Err(e) => {
            bad(format!("beta: {e}"));
            return Ok(());
        }
    };
    if let (Some(beta), Some(sec)) = (&beta, &c.beta) {
        if sec.r2 != beta.r2() || sec.rank != beta.rank() {
            bad("beta r2/rank do not match its rows".into());
        }
        if let Some(k) = &c.kernel {
            if k.dim != beta.kernel().dim() {
                bad(format!("kernel dim {} but β has kernel dim {}", k.dim, beta.kernel().dim()));
            }
        }
    }
    let s = SymplecticSpace::standard(p, cfg.r)?;

    if let Some(n) = &c.counts {
        let (ev, cv) = (n.count_ev.value(), n.count_cv.value());
        if !(1 <= cv && cv <= ev) {
            bad(format!("need 1 <= #C_v <= #E_v, got {cv} and {ev}"));
        } else {
            if padic_valuation(ev, p)? != n.val_ev {
                bad(format!("val_ev = {} does not match #E_v = {ev}", n.val_ev));
            }
            if padic_valuation(cv, p)? != n.val_cv {
                bad(format!("val_cv = {} does not match #C_v = {cv}", n.val_cv));
            }
        }
        if let Some(beta) = &beta {
            if n.axkatz_bound != axkatz_bound(cfg.r1, cfg.r, beta.r2()) {
                bad("axkatz_bound does not match r1, r, r2".into());
            }
            let lists = crate::localcount::WitnessLists {
                in_cv: n.samples_in_cv.iter().map(|m| FpMatrix::from_row_vectors(p, cfg.r, m)).collect::<Result<_>>()?,
                outside_cv: n
                    .samples_outside_cv
                    .iter()
                    .map(|m| FpMatrix::from_row_vectors(p, cfg.r, m))
                    .collect::<Result<_>>()?,
            };
            for msg in super::pipeline::sample_problems(beta, &s, &lists) {
                bad(msg);
            }
        }
        if n.closed_xi.value() != closed_xi(p, cfg.r1, cfg.r)? as i128 {
            bad("closed_xi does not match its formula".into());
        }
        if n.closed_climit.value() != closed_climit(p, cfg.r)? {
            bad("closed_climit does not match its formula".into());
        }
    }

    if let WitnessSection::Found { b, xi, value, .. } = &c.witness {
        let f = DualWedge::new(p, cfg.r1, b.clone())?;
        let m = FpMatrix::from_row_vectors(p, cfg.r, xi)?;
        if m.rows() != cfg.r1 {
            bad("witness xi has the wrong shape".into());
        } else {
            let w = w_pairing(&f, &m, &s)?;
            if w != *value || w == 0 {
                bad(format!("recorded W(b, xi) = {value}, recomputed {w}"));
            }
            if let Some(beta) = &beta {
                if !beta.annihilates(&pullback_wedge(&m, &s)?)? {
                    bad("witness xi is not in E_v".into());
                }
            }
        }
    }
    Ok(())
}

fn config_of(c: &Certificate, partitions: usize) -> Result<PipelineConfig> {
    let p = PrimeModulus::new(c.config.p)?;
    let beta = match c.config.beta_source {
        BetaSource::Built => None,
        BetaSource::Supplied => Some(
            beta_of(c, p)?.ok_or_else(|| Error::InvalidConfig("supplied β missing from certificate".into()))?,
        ),
    };
    let nonneg = |x: i128, what: &str| {
        u128::try_from(x).map_err(|_| Error::InvalidConfig(format!("{what} is negative")))
    };
    Ok(PipelineConfig {
        p: c.config.p,
        r1: c.config.r1,
        r: c.config.r,
        budget: nonneg(c.config.budget.value(), "budget")?,
        witness_cap: c.config.witness_cap,
        seed: c.seeds.search,
        oracle_seed: c.seeds.oracle,
        oracle_sample_budget: nonneg(c.config.oracle_sample_budget.value(), "oracle_sample_budget")?,
        beta,
        partitions,
        record_timing: false,
    })
}

/// Checks a JSON certificate. Parse failures and schema-version mismatches
/// are errors; everything else is reported as a list of problems.
pub fn verify_certificate(bytes: &[u8], level: RecheckLevel, partitions: usize) -> Result<VerifyReport> {
    let c = parse_certificate(bytes)?;
    let mut problems = Vec::new();
    structural(&c, &mut problems)?;
    if level == RecheckLevel::Full {
        let cfg = config_of(&c, partitions)?;
        let fresh = run_pipeline(&cfg)?;
        let strip = |c: &Certificate| -> Result<serde_json::Value> {
            let mut v = serde_json::to_value(c).map_err(|e| Error::Parse(e.to_string()))?;
            if let Some(o) = v.as_object_mut() {
                o.remove("timing_ms");
            }
            Ok(v)
        };
        let (old, new) = (strip(&c)?, strip(&fresh)?);
        if let (Some(o), Some(n)) = (old.as_object(), new.as_object()) {
            for (key, nv) in n {
                if o.get(key) != Some(nv) {
                    problems.push(format!("field `{key}` differs from a fresh run"));
                }
            }
            for key in o.keys().filter(|k| !n.contains_key(*k)) {
                problems.push(format!("unexpected field `{key}`"));
            }
        }
    }
    Ok(VerifyReport { level, problems })
}
