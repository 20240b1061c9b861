use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::config::{BetaSource, ConfigEcho};
use super::exact::ExactInt;
use crate::avoidance::SearchStrategy;
use crate::error::{Error, Result};
use crate::extension::OracleMode;
use crate::localcount::WitnessMethod;

pub const SCHEMA_VERSION: &str = "bicert/1";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Names of the checks, in the order they appear in every certificate.
pub const CHECKS: &[&str] = &[
    "beta_surjective",
    "kernel_generator_not_decomposable",
    "kernel_avoids_pure_wedges",
    "bic_paths_agree",
    "bic_trivial",
    "counts_consistent",
    "cv_matches_closed_form",
    "climit_nonzero",
    "congruence",
    "axkatz",
    "cv_valuation",
    "witness_iff_strict",
    "witness_nonconstant",
    "witness_unramified",
    "tame_ev_matches",
    "rank_one_membership",
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail { reason: String },
    Skipped { reason: String, budget_exhausted: bool },
}

impl Verdict {
    pub fn from_bool(ok: bool, reason: impl FnOnce() -> String) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail { reason: reason() }
        }
    }

    pub fn budget(reason: impl Into<String>) -> Self {
        Verdict::Skipped {
            reason: reason.into(),
            budget_exhausted: true,
        }
    }

    pub fn not_applicable(reason: impl Into<String>) -> Self {
        Verdict::Skipped {
            reason: reason.into(),
            budget_exhausted: false,
        }
    }

    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictEntry {
    pub check: String,
    pub verdict: Verdict,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// No failure, but a budget stopped at least one check.
    Incomplete,
}

impl Status {
    pub fn of(verdicts: &[VerdictEntry]) -> Self {
        if verdicts.iter().any(|v| matches!(v.verdict, Verdict::Fail { .. })) {
            Status::Fail
        } else if verdicts.iter().any(|v| {
            matches!(
                v.verdict,
                Verdict::Skipped {
                    budget_exhausted: true,
                    ..
                }
            )
        }) {
            Status::Incomplete
        } else {
            Status::Pass
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Incomplete => "incomplete",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Seeds {
    pub search: u64,
    pub oracle: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BetaSection {
    pub r2: usize,
    pub rank: usize,
    /// Rows of `β` against the lexicographic wedge coordinates.
    pub rows: Vec<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionSection {
    pub grassmannian_points: ExactInt,
    pub projective_bound: ExactInt,
    pub strategy: SearchStrategy,
    pub search_steps: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelSection {
    pub dim: usize,
    pub generator: Option<Vec<u32>>,
    pub generator_decomposable: Option<bool>,
    pub avoids_pure_wedges: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BicSection {
    pub computed_size: Option<u64>,
    pub oracle_size: Option<u64>,
    pub oracle_mode: Option<OracleMode>,
    /// Coordinate functionals vanishing on `Bic`.
    pub unramified_dual_basis: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountsSection {
    pub count_ev: ExactInt,
    pub count_cv: ExactInt,
    pub val_ev: u32,
    pub val_cv: u32,
    pub axkatz_bound: u64,
    pub closed_xi: ExactInt,
    pub closed_climit: ExactInt,
    pub val_climit: u32,
    /// First members of `C_v` in enumeration order, as row lists.
    pub samples_in_cv: Vec<Vec<Vec<u32>>>,
    /// First members of `E_v \ C_v` in enumeration order.
    pub samples_outside_cv: Vec<Vec<Vec<u32>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceEntry {
    pub a: usize,
    pub closed_xi: ExactInt,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum WitnessSection {
    Found {
        b: Vec<u32>,
        xi: Vec<Vec<u32>>,
        value: u32,
        method: WitnessMethod,
        unramified: Option<bool>,
    },
    Exhausted,
    Skipped {
        reason: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TameSection {
    pub pairs: ExactInt,
    pub count_ev_r2: ExactInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankOneSection {
    pub rank_le_one: ExactInt,
    pub all_in_cv: bool,
    pub span_dim: usize,
    pub full_dim: usize,
    pub elementary_in_cv: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema_version: String,
    pub tool_version: String,
    pub status: Status,
    pub config: ConfigEcho,
    pub seeds: Seeds,
    pub beta: Option<BetaSection>,
    pub construction: Option<ConstructionSection>,
    pub kernel: Option<KernelSection>,
    pub bic: Option<BicSection>,
    pub counts: Option<CountsSection>,
    pub congruences: Option<Vec<CongruenceEntry>>,
    pub witness: WitnessSection,
    pub tame: Option<TameSection>,
    pub rank_one: Option<RankOneSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
    pub verdicts: Vec<VerdictEntry>,
}

impl Certificate {
    pub fn verdict(&self, check: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.check == check).map(|v| &v.verdict)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Text,
}

/// JSON with keys sorted at every level, two-space indentation and a
/// trailing newline. Parsing and re-emitting reproduces the same bytes.
pub fn to_canonical_json(c: &Certificate) -> Result<Vec<u8>> {
    // `serde_json::Value` keeps object keys in a sorted map
    let value = serde_json::to_value(c).map_err(|e| Error::Parse(e.to_string()))?;
    let mut out = serde_json::to_vec_pretty(&value).map_err(|e| Error::Parse(e.to_string()))?;
    out.push(b'\n');
    Ok(out)
}

pub fn emit_certificate(c: &Certificate, format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Json => to_canonical_json(c),
        Format::Text => Ok(to_text(c).into_bytes()),
    }
}

/// Parses a JSON certificate, rejecting other schema versions.
pub fn parse_certificate(bytes: &[u8]) -> Result<Certificate> {
    let value: serde_json::Value = serde_json::from_slice(bytes).map_err(|e| Error::Parse(e.to_string()))?;
    let found = value
        .get("schema_version")
        .and_then(|v| v.as_str())
        .ok_or_else(|| Error::Parse("missing schema_version".into()))?;
    if found != SCHEMA_VERSION {
        return Err(Error::VersionMismatch {
            expected: SCHEMA_VERSION.into(),
            found: found.into(),
        });
    }
    serde_json::from_value(value).map_err(|e| Error::Parse(e.to_string()))
}

fn rows(m: &[Vec<u32>]) -> String {
    m.iter()
        .map(|r| r.iter().map(u32::to_string).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join(" | ")
}

fn opt<T: std::fmt::Display>(x: &Option<T>) -> String {
    x.as_ref().map_or_else(|| "-".to_string(), T::to_string)
}

fn to_text(c: &Certificate) -> String {
    let mut s = String::new();
    let cfg = &c.config;
    let _ = writeln!(s, "certificate {} (bicert {})", c.schema_version, c.tool_version);
    let _ = writeln!(s, "status: {}", c.status.as_str());
    let source = match cfg.beta_source {
        BetaSource::Built => "built",
        BetaSource::Supplied => "supplied",
    };
    let _ = writeln!(
        s,
        "p = {}, r1 = {}, r = {}, budget = {}, beta {}",
        cfg.p, cfg.r1, cfg.r, cfg.budget, source
    );
    let _ = writeln!(s, "seeds: search {}, oracle {}", c.seeds.search, c.seeds.oracle);
    if let Some(b) = &c.beta {
        let _ = writeln!(s, "\nbeta: r2 = {}, rank = {}", b.r2, b.rank);
        for r in &b.rows {
            let _ = writeln!(s, "  {}", r.iter().map(u32::to_string).collect::<Vec<_>>().join(" "));
        }
    }
    if let Some(k) = &c.construction {
        let _ = writeln!(
            s,
            "construction: #X = {} < #P = {}, {} in {} steps",
            k.grassmannian_points,
            k.projective_bound,
            match k.strategy {
                SearchStrategy::Greedy => "greedy".to_string(),
                SearchStrategy::Backtracked { backtracks } => format!("greedy with {backtracks} backtracks"),
                SearchStrategy::RandomRestart { restart } => format!("random restart {restart}"),
            },
            k.search_steps
        );
    }
    if let Some(k) = &c.kernel {
        let _ = writeln!(
            s,
            "kernel: dim {}, generator {}, decomposable {}, avoids pure wedges {}",
            k.dim,
            k.generator.as_ref().map_or_else(|| "-".to_string(), |g| format!("{g:?}")),
            opt(&k.generator_decomposable),
            opt(&k.avoids_pure_wedges)
        );
    }
    if let Some(b) = &c.bic {
        let _ = writeln!(
            s,
            "bic: computed {} elements, oracle {} ({}), unramified coordinate functionals {}",
            opt(&b.computed_size),
            opt(&b.oracle_size),
            b.oracle_mode.as_ref().map_or_else(|| "-".to_string(), |m| match m {
                OracleMode::FullGroup => "all pairs of G".to_string(),
                OracleMode::Projected { b1, b2 } => format!("pairs of A lifted with b1 = {b1:?}, b2 = {b2:?}"),
            }),
            opt(&b.unramified_dual_basis)
        );
    }
    if let Some(n) = &c.counts {
        let _ = writeln!(s, "\n#E_v = {} (v_p = {}), Ax-Katz bound {}", n.count_ev, n.val_ev, n.axkatz_bound);
        let _ = writeln!(s, "#C_v = {} (v_p = {}), closed form {}", n.count_cv, n.val_cv, n.closed_xi);
        let _ = writeln!(s, "C(r) = {} (v_p = {})", n.closed_climit, n.val_climit);
    }
    if let Some(cs) = &c.congruences {
        for e in cs {
            let _ = writeln!(s, "  a = {}: Xi = {}, congruent {}", e.a, e.closed_xi, e.holds);
        }
    }
    match &c.witness {
        WitnessSection::Found {
            b,
            xi,
            value,
            method,
            unramified,
        } => {
            let _ = writeln!(
                s,
                "\nwitness: b = {:?}, xi = [{}], W(b, xi) = {}/p, via {}, unramified {}",
                b,
                rows(xi),
                value,
                match method {
                    WitnessMethod::CoordinateProbe => "coordinate probe",
                    WitnessMethod::FullScan => "full scan",
                },
                opt(unramified)
            );
        }
        WitnessSection::Exhausted => {
            let _ = writeln!(s, "\nwitness: none, E_v = C_v");
        }
        WitnessSection::Skipped { reason } => {
            let _ = writeln!(s, "\nwitness: skipped ({reason})");
        }
    }
    if let Some(t) = &c.tame {
        let _ = writeln!(s, "tame E_v: {} pairs, #E_v at r = 2: {}", t.pairs, t.count_ev_r2);
    }
    if let Some(r) = &c.rank_one {
        let _ = writeln!(
            s,
            "rank <= 1: {} matrices, all in C_v {}, span {}/{}",
            r.rank_le_one, r.all_in_cv, r.span_dim, r.full_dim
        );
    }
    if let Some(t) = c.timing_ms {
        let _ = writeln!(s, "time: {t} ms");
    }
    let _ = writeln!(s, "\nchecks:");
    for v in &c.verdicts {
        let line = match &v.verdict {
            Verdict::Pass => "pass".to_string(),
            Verdict::Fail { reason } => format!("FAIL: {reason}"),
            Verdict::Skipped {
                reason,
                budget_exhausted,
            } => {
                if *budget_exhausted {
                    format!("skipped (budget): {reason}")
                } else {
                    format!("skipped: {reason}")
                }
            }
        };
        let _ = writeln!(s, "  {:<36} {}", v.check, line);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entry(check: &str, verdict: Verdict) -> VerdictEntry {
        VerdictEntry {
            check: check.into(),
            verdict,
        }
    }

    #[test]
    fn status_rules() {
        let pass = entry("a", Verdict::Pass);
        let na = entry("b", Verdict::not_applicable("n/a"));
        let budget = entry("c", Verdict::budget("too big"));
        let fail = entry("d", Verdict::Fail { reason: "x".into() });
        assert_eq!(Status::of(&[pass.clone(), na.clone()]), Status::Pass);
        assert_eq!(Status::of(&[pass.clone(), budget.clone()]), Status::Incomplete);
        assert_eq!(Status::of(&[budget, fail, pass]), Status::Fail);
    }

    #[test]
    fn verdict_json_shape() {
        let v = serde_json::to_string(&Verdict::Fail { reason: "r".into() }).unwrap();
        assert_eq!(v, r#"{"outcome":"fail","reason":"r"}"#);
        let w = serde_json::to_string(&WitnessSection::Exhausted).unwrap();
        assert_eq!(w, r#"{"status":"exhausted"}"#);
    }

    #[test]
    fn rejects_other_versions_and_garbage() {
        assert!(matches!(
            parse_certificate(br#"{"schema_version": "bicert/0"}"#),
            Err(Error::VersionMismatch { .. })
        ));
        assert!(matches!(parse_certificate(b"{\"schema_ver"), Err(Error::Parse(_))));
        assert!(matches!(parse_certificate(b"{}"), Err(Error::Parse(_))));
    }
}
