use std::time::Instant;

use super::certificate::*;
use super::config::{BetaSource, ConfigEcho, PipelineConfig};
use super::exact::ExactInt;
use crate::avoidance::{build_beta, kernel_avoids_pure_wedges, kernel_generator};
use crate::error::{Error, Result};
use crate::extension::{bic_bruteforce_oracle, bic_of_beta, BetaMap};
use crate::fpcore::wedge_dim;
use crate::localcount::*;

/// Budget errors become `Err(reason)`; anything else propagates.
fn guarded<T>(r: Result<T>) -> Result<std::result::Result<T, String>> {
    match r {
        Ok(x) => Ok(Ok(x)),
        Err(e) if e.is_budget() => Ok(Err(e.to_string())),
        Err(e) => Err(e),
    }
}

#[derive(Default)]
struct Verdicts(Vec<VerdictEntry>);

impl Verdicts {
    fn push(&mut self, check: &str, verdict: Verdict) {
        debug_assert_eq!(CHECKS[self.0.len()], check);
        self.0.push(VerdictEntry {
            check: check.into(),
            verdict,
        });
    }

    /// Records every remaining check as skipped.
    fn skip_rest(&mut self, verdict: Verdict) {
        for &check in &CHECKS[self.0.len()..] {
            self.0.push(VerdictEntry {
                check: check.into(),
                verdict: verdict.clone(),
            });
        }
    }
}

fn skipped_from(reason: &str) -> Verdict {
    Verdict::budget(reason)
}

fn matrix_rows(m: &crate::fpcore::FpMatrix) -> Vec<Vec<u32>> {
    m.to_rows()
}

/// Runs the whole chain: `β`, its kernel and bicyclic set, the descent counts
/// and closed forms, the witness search and the unramifiedness of the witness.
pub fn run_pipeline(cfg: &PipelineConfig) -> Result<Certificate> {
    let p = cfg.validate()?;
    let start = Instant::now();
    let budget = cfg.budget();
    let parts = cfg.partitions;
    let s = SymplecticSpace::standard(p, cfg.r)?;
    let mut v = Verdicts::default();

    let source = if cfg.beta.is_some() {
        BetaSource::Supplied
    } else {
        BetaSource::Built
    };
    let mut cert = Certificate {
        schema_version: SCHEMA_VERSION.into(),
        tool_version: TOOL_VERSION.into(),
        status: Status::Pass,
        config: ConfigEcho {
            p: cfg.p,
            r1: cfg.r1,
            r: cfg.r,
            budget: ExactInt::from(cfg.budget),
            witness_cap: cfg.witness_cap,
            oracle_sample_budget: ExactInt::from(cfg.oracle_sample_budget),
            beta_source: source,
        },
        seeds: Seeds {
            search: cfg.seed,
            oracle: cfg.oracle_seed,
        },
        beta: None,
        construction: None,
        kernel: None,
        bic: None,
        counts: None,
        congruences: None,
        witness: WitnessSection::Skipped {
            reason: "not reached".into(),
        },
        tame: None,
        rank_one: None,
        timing_ms: None,
        verdicts: Vec::new(),
    };
    let finish = |mut cert: Certificate, v: Verdicts| {
        cert.verdicts = v.0;
        cert.status = Status::of(&cert.verdicts);
        if cfg.record_timing {
            cert.timing_ms = Some(start.elapsed().as_millis() as u64);
        }
        cert
    };

    // β
    let beta: BetaMap = match &cfg.beta {
        Some(b) => b.clone(),
        None => match guarded(build_beta(p, cfg.r1, budget, cfg.search_options()))? {
            Ok(built) => {
                cert.construction = Some(ConstructionSection {
                    grassmannian_points: built.grassmannian_points.into(),
                    projective_bound: built.projective_bound.into(),
                    strategy: built.strategy.clone(),
                    search_steps: built.search_steps,
                });
                built.beta
            }
            Err(reason) => {
                cert.witness = WitnessSection::Skipped {
                    reason: reason.clone(),
                };
                v.skip_rest(skipped_from(&format!("building β: {reason}")));
                return Ok(finish(cert, v));
            }
        },
    };
    cert.beta = Some(BetaSection {
        r2: beta.r2(),
        rank: beta.rank(),
        rows: matrix_rows(beta.matrix()),
    });
    v.push(
        "beta_surjective",
        Verdict::from_bool(beta.is_surjective(), || {
            format!("rank {} < r2 = {}", beta.rank(), beta.r2())
        }),
    );

    // kernel
    let generator = kernel_generator(&beta);
    let avoids = guarded(kernel_avoids_pure_wedges(&beta, budget))?;
    cert.kernel = Some(KernelSection {
        dim: beta.kernel().dim(),
        generator: generator.as_ref().map(|g| g.coords().to_vec()),
        generator_decomposable: generator.as_ref().map(|g| g.is_decomposable()),
        avoids_pure_wedges: avoids.as_ref().ok().copied(),
    });
    v.push(
        "kernel_generator_not_decomposable",
        match &generator {
            None => Verdict::not_applicable("Ker β = 0"),
            Some(g) => Verdict::from_bool(!g.is_decomposable(), || {
                format!("kernel generator {:?} is a pure wedge", g.coords())
            }),
        },
    );
    v.push(
        "kernel_avoids_pure_wedges",
        match &avoids {
            Ok(ok) => Verdict::from_bool(*ok, || "Ker β contains a nonzero pure wedge".into()),
            Err(reason) => Verdict::budget(reason),
        },
    );

    // bicyclic set, two ways
    let bic = guarded(bic_of_beta(&beta, budget, parts))?;
    let oracle = guarded(bic_bruteforce_oracle(&beta, cfg.oracle_options(), budget, parts))?;
    let dual_basis = DualWedge::dual_basis(p, beta.r1());
    let unramified_basis = match &bic {
        Ok(set) => {
            let mut n = 0;
            for f in &dual_basis {
                n += usize::from(vanishes_on(f, set)?);
            }
            Some(n)
        }
        Err(_) => None,
    };
    cert.bic = Some(BicSection {
        computed_size: bic.as_ref().ok().map(|b| b.len() as u64),
        oracle_size: oracle.as_ref().ok().map(|o| o.set.len() as u64),
        oracle_mode: oracle.as_ref().ok().map(|o| o.mode.clone()),
        unramified_dual_basis: unramified_basis,
    });
    v.push(
        "bic_paths_agree",
        match (&bic, &oracle) {
            (Ok(a), Ok(b)) => Verdict::from_bool(*a == b.set, || {
                format!("computed {} elements, oracle {}", a.len(), b.set.len())
            }),
            (Err(r), _) | (_, Err(r)) => Verdict::budget(r.clone()),
        },
    );
    v.push(
        "bic_trivial",
        match &bic {
            Ok(set) => Verdict::from_bool(crate::extension::bic::is_trivial(set), || {
                format!("Bic has {} nonzero elements", set.iter().filter(|w| !w.is_zero()).count())
            }),
            Err(r) => Verdict::budget(r.clone()),
        },
    );

    // counts and closed forms
    let ev = guarded(count_ev(&beta, &s, Some(cfg.witness_cap), budget, parts))?;
    let xi = closed_xi(p, cfg.r1, cfg.r)?;
    let climit = closed_climit(p, cfg.r)?;
    let val_climit = padic_valuation(climit, p).ok();
    let axk = axkatz_bound(cfg.r1, cfg.r, beta.r2());
    match &ev {
        Ok(ev) => {
            let w = ev.witnesses.clone().unwrap_or_default();
            let val_ev = padic_valuation(ev.count as i128, p)?;
            let val_cv = padic_valuation(ev.count_cv as i128, p)?;
            cert.counts = Some(CountsSection {
                count_ev: ev.count.into(),
                count_cv: ev.count_cv.into(),
                val_ev,
                val_cv,
                axkatz_bound: axk,
                closed_xi: xi.into(),
                closed_climit: climit.into(),
                val_climit: val_climit.unwrap_or(0),
                samples_in_cv: w.in_cv.iter().map(matrix_rows).collect(),
                samples_outside_cv: w.outside_cv.iter().map(matrix_rows).collect(),
            });
            let samples_ok = sample_problems(&beta, &s, &w).is_empty();
            v.push(
                "counts_consistent",
                Verdict::from_bool(ev.count_cv >= 1 && ev.count_cv <= ev.count && samples_ok, || {
                    format!("#C_v = {}, #E_v = {}, samples ok {samples_ok}", ev.count_cv, ev.count)
                }),
            );
            v.push(
                "cv_matches_closed_form",
                Verdict::from_bool(ev.count_cv == xi, || format!("#C_v = {} but Xi = {xi}", ev.count_cv)),
            );
        }
        Err(r) => {
            v.push("counts_consistent", Verdict::budget(r.clone()));
            v.push("cv_matches_closed_form", Verdict::budget(r.clone()));
        }
    }
    v.push(
        "climit_nonzero",
        Verdict::from_bool(climit != 0, || "C(r) = 0".into()),
    );
    let mut congruences = Vec::new();
    let mut overflow = false;
    for a in 1..=cfg.r1 {
        match closed_xi(p, a, cfg.r).and_then(|x| {
            let x = i128::try_from(x).map_err(|_| Error::Overflow("Xi"))?;
            Ok((x, congruent_mod_power(x, climit, p, a as u32)?))
        }) {
            Ok((x, holds)) => congruences.push(CongruenceEntry {
                a,
                closed_xi: x.into(),
                holds,
            }),
            Err(Error::Overflow(_)) => {
                overflow = true;
                break;
            }
            Err(e) => return Err(e),
        }
    }
    v.push(
        "congruence",
        if overflow {
            Verdict::not_applicable("closed forms overflow 128-bit integers")
        } else {
            let bad: Vec<usize> = congruences.iter().filter(|c| !c.holds).map(|c| c.a).collect();
            Verdict::from_bool(bad.is_empty(), || format!("fails for a in {bad:?}"))
        },
    );
    cert.congruences = Some(congruences);
    match &cert.counts {
        Some(c) => {
            v.push(
                "axkatz",
                Verdict::from_bool(c.val_ev as u64 >= axk, || {
                    format!("v_p(#E_v) = {} < {axk}", c.val_ev)
                }),
            );
            v.push(
                "cv_valuation",
                match val_climit {
                    Some(vc) if cfg.r1 > vc as usize => Verdict::from_bool(c.val_cv == vc, || {
                        format!("v_p(#C_v) = {} but v_p(C(r)) = {vc}", c.val_cv)
                    }),
                    _ => Verdict::not_applicable("r1 does not exceed v_p(C(r))"),
                },
            );
        }
        None => {
            let reason = ev.as_ref().err().cloned().unwrap_or_default();
            v.push("axkatz", Verdict::budget(reason.clone()));
            v.push("cv_valuation", Verdict::budget(reason));
        }
    }

    // witness
    let outcome = guarded(find_obstruction_witness(&beta, &s, budget, parts))?;
    match (&outcome, &ev) {
        (Ok(o), Ok(ev)) => {
            let strict = ev.count_cv < ev.count;
            let found = o.witness().is_some();
            v.push(
                "witness_iff_strict",
                Verdict::from_bool(strict == found, || {
                    format!("witness found {found}, #C_v < #E_v {strict}")
                }),
            );
        }
        (Err(r), _) | (_, Err(r)) => v.push("witness_iff_strict", Verdict::budget(r.clone())),
    }
    match &outcome {
        Ok(WitnessOutcome::Found(w)) => {
            let pb = pullback_wedge(&w.xi, &s)?;
            let in_ev = beta.annihilates(&pb)?;
            let recomputed = w_pairing(&w.b, &w.xi, &s)?;
            let at_zero = w_pairing(&w.b, &crate::fpcore::FpMatrix::zeros(p, cfg.r1, cfg.r), &s)?;
            v.push(
                "witness_nonconstant",
                Verdict::from_bool(in_ev && recomputed == w.value && w.value != 0 && at_zero == 0, || {
                    format!("xi in E_v {in_ev}, W(b, xi) = {recomputed}, W(b, 0) = {at_zero}")
                }),
            );
            let unramified = match &bic {
                Ok(set) => Some(vanishes_on(&w.b, set)?),
                Err(_) => None,
            };
            v.push(
                "witness_unramified",
                match (unramified, &bic) {
                    (Some(u), _) => Verdict::from_bool(u, || "b does not vanish on Bic".into()),
                    (None, Err(r)) => Verdict::budget(r.clone()),
                    (None, Ok(_)) => unreachable!(),
                },
            );
            cert.witness = WitnessSection::Found {
                b: w.b.coeffs().to_vec(),
                xi: matrix_rows(&w.xi),
                value: w.value,
                method: w.method,
                unramified,
            };
        }
        Ok(WitnessOutcome::Exhausted) => {
            cert.witness = WitnessSection::Exhausted;
            v.push("witness_nonconstant", Verdict::not_applicable("E_v = C_v"));
            v.push("witness_unramified", Verdict::not_applicable("no witness"));
        }
        Err(r) => {
            cert.witness = WitnessSection::Skipped { reason: r.clone() };
            v.push("witness_nonconstant", Verdict::budget(r.clone()));
            v.push("witness_unramified", Verdict::budget(r.clone()));
        }
    }

    // tame places
    let s2 = SymplecticSpace::standard(p, 2)?;
    let tame = guarded(tame_ev(&beta, budget, parts))?;
    let ev2 = guarded(count_ev(&beta, &s2, None, budget, parts))?;
    match (&tame, &ev2) {
        (Ok(t), Ok(e)) => {
            cert.tame = Some(TameSection {
                pairs: (t.len() as u128).into(),
                count_ev_r2: e.count.into(),
            });
            v.push(
                "tame_ev_matches",
                Verdict::from_bool(t.len() as u128 == e.count, || {
                    format!("{} pairs but #E_v = {} at r = 2", t.len(), e.count)
                }),
            );
        }
        (Err(r), _) | (_, Err(r)) => v.push("tame_ev_matches", Verdict::budget(r.clone())),
    }

    match guarded(rank_one_membership(&s, cfg.r1, budget))? {
        Ok(rep) => {
            v.push(
                "rank_one_membership",
                Verdict::from_bool(rep.passes(), || format!("{rep:?}")),
            );
            cert.rank_one = Some(RankOneSection {
                rank_le_one: rep.rank_le_one.into(),
                all_in_cv: rep.all_in_cv,
                span_dim: rep.span_dim,
                full_dim: rep.full_dim,
                elementary_in_cv: rep.elementary_in_cv,
            });
        }
        Err(r) => v.push("rank_one_membership", Verdict::budget(r)),
    }

    debug_assert_eq!(v.0.len(), CHECKS.len());
    debug_assert_eq!(wedge_dim(cfg.r1), beta.matrix().cols());
    Ok(finish(cert, v))
}

/// Problems with the sample matrices recorded by a count.
pub(crate) fn sample_problems(beta: &BetaMap, s: &SymplecticSpace, w: &WitnessLists) -> Vec<String> {
    let mut out = Vec::new();
    for m in &w.in_cv {
        match pullback_wedge(m, s) {
            Ok(pb) if pb.is_zero() => {}
            _ => out.push(format!("sample {:?} is not in C_v", m.to_rows())),
        }
    }
    for m in &w.outside_cv {
        match pullback_wedge(m, s) {
            Ok(pb) if !pb.is_zero() && beta.annihilates(&pb).unwrap_or(false) => {}
            _ => out.push(format!("sample {:?} is not in E_v \\ C_v", m.to_rows())),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpcore::PrimeModulus;

    fn supplied() -> PipelineConfig {
        let p = PrimeModulus::new(3).unwrap();
        PipelineConfig {
            r1: 3,
            beta: Some(BetaMap::coordinate(p, 3, 0, 1)),
            partitions: 2,
            ..PipelineConfig::default()
        }
    }

    #[test]
    fn built_beta_certificate_passes() {
        let cfg = PipelineConfig {
            partitions: 2,
            ..PipelineConfig::default()
        };
        let c = run_pipeline(&cfg).unwrap();
        assert_eq!(c.status, Status::Pass, "{:?}", c.verdicts);
        assert_eq!(c.beta.as_ref().unwrap().r2, 5);
        assert_eq!(c.bic.as_ref().unwrap().computed_size, Some(1));
        assert_eq!(c.witness, WitnessSection::Exhausted);
        let n = c.counts.as_ref().unwrap();
        assert_eq!((n.count_ev.value(), n.count_cv.value()), (321, 321));
        assert_eq!(c.bic.as_ref().unwrap().unramified_dual_basis, Some(6));
    }

    #[test]
    fn supplied_beta_certificate() {
        let c = run_pipeline(&supplied()).unwrap();
        let n = c.counts.as_ref().unwrap();
        assert_eq!((n.count_ev.value(), n.count_cv.value()), (297, 105));
        match &c.witness {
            WitnessSection::Found { b, xi, value, unramified, .. } => {
                assert_eq!(b, &vec![0, 1, 0]);
                assert_eq!(xi, &vec![vec![1, 0], vec![0, 0], vec![0, 1]]);
                assert_eq!(*value, 1);
                assert_eq!(*unramified, Some(false));
            }
            other => panic!("{other:?}"),
        }
        // Bic is not {0} for this β, so the certificate is honestly invalid
        assert_eq!(c.status, Status::Fail);
        assert!(!c.verdict("bic_trivial").unwrap().is_pass());
        assert!(c.verdict("witness_nonconstant").unwrap().is_pass());
        assert!(c.verdict("cv_matches_closed_form").unwrap().is_pass());
    }

    #[test]
    fn odd_r_is_a_config_error() {
        let cfg = PipelineConfig {
            r: 3,
            ..PipelineConfig::default()
        };
        assert!(matches!(run_pipeline(&cfg), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn budget_exhaustion_never_passes() {
        let cfg = PipelineConfig {
            budget: 500,
            ..supplied()
        };
        let c = run_pipeline(&cfg).unwrap();
        // the kernel of this β holds pure wedges, so the status is fail
        // rather than incomplete
        assert_eq!(c.status, Status::Fail);
        assert!(matches!(
            c.verdict("counts_consistent").unwrap(),
            Verdict::Skipped { budget_exhausted: true, .. }
        ));
        assert!(c.counts.is_none());
    }

    #[test]
    fn deterministic_across_partitions() {
        let base = to_canonical_json(&run_pipeline(&supplied()).unwrap()).unwrap();
        for parts in [1, 8] {
            let cfg = PipelineConfig {
                partitions: parts,
                ..supplied()
            };
            assert_eq!(to_canonical_json(&run_pipeline(&cfg).unwrap()).unwrap(), base);
        }
    }
}
