//! Exhaustive counts of `E_v` and `C_v` over all `r1 × r` matrices.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::closed_form::{axkatz_bound, closed_climit, closed_xi, padic_valuation};
use super::symplectic::{pullback_coords_into, SymplecticSpace};
use crate::error::{Error, Result};
use crate::extension::BetaMap;
use crate::fpcore::enumerate::{for_each_in_range, map_partitions, space_size};
use crate::fpcore::{Budget, FpMatrix, PrimeModulus, Subspace};

/// Sample matrices collected during a count, truncated to a cap.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WitnessLists {
    /// Members of `C_v`, in enumeration order.
    pub in_cv: Vec<FpMatrix>,
    /// Members of `E_v \ C_v`, in enumeration order.
    pub outside_cv: Vec<FpMatrix>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvCount {
    pub count: u128,
    /// `#C_v`, tallied in the same pass.
    pub count_cv: u128,
    pub witnesses: Option<WitnessLists>,
}

#[derive(Default)]
struct Partial {
    ev: u128,
    cv: u128,
    in_cv: Vec<u64>,
    outside_cv: Vec<u64>,
}

fn check_shapes(beta: &BetaMap, s: &SymplecticSpace) -> Result<()> {
    if beta.modulus() != s.modulus() {
        return Err(Error::ModulusMismatch(
            beta.modulus().as_u64(),
            s.modulus().as_u64(),
        ));
    }
    Ok(())
}

/// One pass over every matrix; `cap` limits the indices each partition keeps.
fn scan(beta: &BetaMap, s: &SymplecticSpace, budget: Budget, partitions: usize, cap: usize) -> Result<(Partial, u64)> {
    check_shapes(beta, s)?;
    let p = beta.modulus();
    let (r1, r) = (beta.r1(), s.dim());
    let total = space_size(p, r1 * r, budget, "E_v enumeration")?;
    let parts = map_partitions(total, partitions, |range| {
        let mut acc = Partial::default();
        let mut coords = Vec::new();
        for_each_in_range(p, r1 * r, range, |idx, m| {
            pullback_coords_into(p, r1, r, m, &mut coords);
            if coords.iter().all(|&c| c == 0) {
                acc.ev += 1;
                acc.cv += 1;
                if acc.in_cv.len() < cap {
                    acc.in_cv.push(idx);
                }
            } else if beta.kills_coords(&coords) {
                acc.ev += 1;
                if acc.outside_cv.len() < cap {
                    acc.outside_cv.push(idx);
                }
            }
        });
        acc
    });
    // merge in partition order, so truncation does not depend on the split
    let mut out = Partial::default();
    for part in parts {
        out.ev += part.ev;
        out.cv += part.cv;
        out.in_cv.extend(part.in_cv);
        out.outside_cv.extend(part.outside_cv);
    }
    out.in_cv.truncate(cap);
    out.outside_cv.truncate(cap);
    Ok((out, total))
}

/// The matrix at odometer index `idx` (row-major, little-endian).
pub fn matrix_at(p: PrimeModulus, rows: usize, cols: usize, idx: u64) -> FpMatrix {
    let od = crate::fpcore::enumerate::Odometer::at(p, rows * cols, idx);
    FpMatrix::from_residues(p, rows, cols, od.digits().to_vec())
}

/// `#E_v = #{M : β(M J Mᵀ) = 0}`; with `witness_cap`, also the first matrices
/// found inside and outside `C_v`.
pub fn count_ev(
    beta: &BetaMap,
    s: &SymplecticSpace,
    witness_cap: Option<usize>,
    budget: Budget,
    partitions: usize,
) -> Result<EvCount> {
    let (part, _) = scan(beta, s, budget, partitions, witness_cap.unwrap_or(0))?;
    let p = beta.modulus();
    let (r1, r) = (beta.r1(), s.dim());
    let witnesses = witness_cap.map(|_| WitnessLists {
        in_cv: part.in_cv.iter().map(|&i| matrix_at(p, r1, r, i)).collect(),
        outside_cv: part.outside_cv.iter().map(|&i| matrix_at(p, r1, r, i)).collect(),
    });
    Ok(EvCount {
        count: part.ev,
        count_cv: part.cv,
        witnesses,
    })
}

/// `#C_v = #{M : M J Mᵀ = 0}`.
pub fn count_cv(p: PrimeModulus, r1: usize, s: &SymplecticSpace, budget: Budget, partitions: usize) -> Result<u128> {
    // β = 0 makes every matrix an E_v member; only the C_v tally matters
    let zero = BetaMap::zero(p, r1, 0);
    Ok(scan(&zero, s, budget, partitions, 0)?.0.cv)
}

/// Both counts from one pass: `(#E_v, #C_v)`.
pub fn count_descent_sets(beta: &BetaMap, s: &SymplecticSpace, budget: Budget, partitions: usize) -> Result<(u128, u128)> {
    let (part, _) = scan(beta, s, budget, partitions, 0)?;
    Ok((part.ev, part.cv))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountReport {
    pub p: u64,
    pub r1: usize,
    pub r2: usize,
    pub r: usize,
    pub count_ev: u128,
    pub count_cv: u128,
    pub val_ev: u32,
    pub val_cv: u32,
    pub axkatz_bound: u64,
    pub closed_xi: u128,
    pub closed_climit: i128,
}

impl CountReport {
    pub fn compute(beta: &BetaMap, s: &SymplecticSpace, budget: Budget, partitions: usize) -> Result<Self> {
        let p = beta.modulus();
        let (count_ev, count_cv) = count_descent_sets(beta, s, budget, partitions)?;
        let as_int = |n: u128| i128::try_from(n).map_err(|_| Error::Overflow("count"));
        Ok(CountReport {
            p: p.as_u64(),
            r1: beta.r1(),
            r2: beta.r2(),
            r: s.dim(),
            count_ev,
            count_cv,
            val_ev: padic_valuation(as_int(count_ev)?, p)?,
            val_cv: padic_valuation(as_int(count_cv)?, p)?,
            axkatz_bound: axkatz_bound(beta.r1(), s.dim(), beta.r2()),
            closed_xi: closed_xi(p, beta.r1(), s.dim())?,
            closed_climit: closed_climit(p, s.dim())?,
        })
    }

    pub fn axkatz_holds(&self) -> bool {
        self.val_ev as u64 >= self.axkatz_bound
    }
}

/// `{(a1, a2) ∈ A² : β(a1 ∧ a2) = 0}`: `E_v` at a tame place, where `ξ` is
/// determined by the images of the two topological generators.
pub fn tame_ev(beta: &BetaMap, budget: Budget, partitions: usize) -> Result<BTreeSet<(Vec<u32>, Vec<u32>)>> {
    let p = beta.modulus();
    let r1 = beta.r1();
    let total = space_size(p, 2 * r1, budget, "tame E_v")?;
    let parts = map_partitions(total, partitions, |range| {
        let mut found = Vec::new();
        for_each_in_range(p, 2 * r1, range, |_, d| {
            let (a1, a2) = d.split_at(r1);
            if beta.on_pair(a1, a2).map(|v| v.iter().all(|&x| x == 0)).unwrap_or(false) {
                found.push((a1.to_vec(), a2.to_vec()));
            }
        });
        found
    });
    Ok(parts.into_iter().flatten().collect())
}

/// The two columns of an `r1 × 2` matrix.
pub fn column_pair(m: &FpMatrix) -> (Vec<u32>, Vec<u32>) {
    (m.column(0), m.column(1))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankOneReport {
    /// Matrices of rank at most one.
    pub rank_le_one: u128,
    pub all_in_cv: bool,
    pub span_dim: usize,
    pub full_dim: usize,
    pub elementary_in_cv: bool,
}

impl RankOneReport {
    pub fn passes(&self) -> bool {
        self.all_in_cv && self.elementary_in_cv && self.span_dim == self.full_dim
    }
}

fn rank_le_one(m: &[u32], r1: usize, r: usize, p: PrimeModulus) -> bool {
    for i in 0..r1 {
        for j in i + 1..r1 {
            for k in 0..r {
                for l in k + 1..r {
                    let a = p.mul(m[i * r + k], m[j * r + l]);
                    let b = p.mul(m[i * r + l], m[j * r + k]);
                    if a != b {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Every matrix of rank at most one lies in `C_v`, and such matrices span
/// the whole space of `r1 × r` matrices.
pub fn rank_one_membership(s: &SymplecticSpace, r1: usize, budget: Budget) -> Result<RankOneReport> {
    let p = s.modulus();
    let r = s.dim();
    let n = r1 * r;
    let total = space_size(p, n, budget, "rank-one scan")?;
    let mut count = 0u128;
    let mut all_in_cv = true;
    let mut span = Subspace::zero(p, n);
    let mut coords = Vec::new();
    for_each_in_range(p, n, 0..total, |_, m| {
        if !rank_le_one(m, r1, r, p) {
            return;
        }
        count += 1;
        pullback_coords_into(p, r1, r, m, &mut coords);
        all_in_cv &= coords.iter().all(|&c| c == 0);
        if span.dim() < n && !span.contains(m) {
            span = span.extended(m);
        }
    });
    let mut elementary_in_cv = true;
    for k in 0..n {
        let mut e = vec![0u32; n];
        e[k] = 1;
        pullback_coords_into(p, r1, r, &e, &mut coords);
        elementary_in_cv &= coords.iter().all(|&c| c == 0);
    }
    Ok(RankOneReport {
        rank_le_one: count,
        all_in_cv,
        span_dim: span.dim(),
        full_dim: n,
        elementary_in_cv,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::avoidance::build_beta;
    use crate::avoidance::SearchOptions;
    use crate::fpcore::wedge;

    fn p3() -> PrimeModulus {
        PrimeModulus::new(3).unwrap()
    }

    fn sym(r: usize) -> SymplecticSpace {
        SymplecticSpace::standard(p3(), r).unwrap()
    }

    #[test]
    fn ev_examples() {
        let b2 = BetaMap::coordinate(p3(), 2, 0, 1);
        assert_eq!(count_ev(&b2, &sym(2), None, Budget::default(), 1).unwrap().count, 33);
        let b3 = BetaMap::coordinate(p3(), 3, 0, 1);
        let ev = count_ev(&b3, &sym(2), Some(4), Budget::default(), 3).unwrap();
        assert_eq!(ev.count, 297);
        let w = ev.witnesses.unwrap();
        assert_eq!(w.in_cv.len(), 4);
        assert_eq!(w.outside_cv.len(), 4);
        assert!(w.in_cv[0].is_zero());
    }

    #[test]
    fn ev_independent_oracle() {
        // 33 dependent (projected) column pairs times 9 free third rows
        let p = p3();
        let mut dependent = 0;
        for u in 0..9u32 {
            for v in 0..9u32 {
                let (u1, u2, v1, v2) = (u % 3, u / 3, v % 3, v / 3);
                if (u1 * v2 + 9 - u2 * v1) % 3 == 0 {
                    dependent += 1;
                }
            }
        }
        assert_eq!(dependent, 33);
        assert_eq!(dependent * 9, 297);
        // 81 - |GL_2(F_3)|
        assert_eq!(81 - 48, 33);
        let _ = p;
    }

    #[test]
    fn cv_examples() {
        assert_eq!(count_cv(p3(), 1, &sym(2), Budget::default(), 2).unwrap(), 9);
        assert_eq!(count_cv(p3(), 2, &sym(2), Budget::default(), 2).unwrap(), 33);
        assert_eq!(count_cv(p3(), 3, &sym(2), Budget::default(), 2).unwrap(), 105);
        assert_eq!(count_cv(p3(), 2, &sym(4), Budget::default(), 4).unwrap(), 2241);
    }

    #[test]
    fn injective_beta_gives_equal_counts() {
        let id = BetaMap::new(3, FpMatrix::identity(p3(), 3)).unwrap();
        let (ev, cv) = count_descent_sets(&id, &sym(2), Budget::default(), 2).unwrap();
        assert_eq!(ev, cv);
    }

    #[test]
    fn budget_is_enforced() {
        let b = BetaMap::coordinate(p3(), 3, 0, 1);
        let err = count_ev(&b, &sym(2), None, Budget(100), 1).unwrap_err();
        assert!(err.is_budget());
    }

    #[test]
    fn witness_lists_independent_of_partitions() {
        let b = BetaMap::coordinate(p3(), 3, 0, 1);
        let one = count_ev(&b, &sym(2), Some(7), Budget::default(), 1).unwrap();
        for parts in [2, 5, 8] {
            assert_eq!(count_ev(&b, &sym(2), Some(7), Budget::default(), parts).unwrap(), one);
        }
    }

    #[test]
    fn report_fields() {
        let b = BetaMap::coordinate(p3(), 3, 0, 1);
        let rep = CountReport::compute(&b, &sym(2), Budget::default(), 2).unwrap();
        assert_eq!((rep.count_ev, rep.count_cv), (297, 105));
        assert_eq!(rep.val_ev, 3);
        assert_eq!(rep.val_cv, 1);
        assert_eq!(rep.axkatz_bound, 2);
        assert!(rep.axkatz_holds());
        assert_eq!(rep.closed_xi, 105);
        assert_eq!(rep.closed_climit, -3);
    }

    #[test]
    fn tame_ev_from_built_beta() {
        let built = build_beta(p3(), 4, Budget::default(), SearchOptions::default()).unwrap();
        let tame = tame_ev(&built.beta, Budget::default(), 4).unwrap();
        assert_eq!(tame.len(), 321);
        // oracle: linearly dependent pairs
        for (a1, a2) in &tame {
            assert!(wedge(p3(), a1, a2).unwrap().is_zero());
        }
        assert_eq!(tame.len(), 81 + 80 * 3);
        assert_eq!(
            count_ev(&built.beta, &sym(2), None, Budget::default(), 2).unwrap().count,
            321
        );
    }

    #[test]
    fn tame_ev_matches_column_extraction() {
        let b = BetaMap::coordinate(p3(), 3, 0, 2);
        let tame = tame_ev(&b, Budget::default(), 1).unwrap();
        let ev = count_ev(&b, &sym(2), Some(usize::MAX), Budget::default(), 2).unwrap();
        let w = ev.witnesses.unwrap();
        let cols: BTreeSet<_> = w.in_cv.iter().chain(&w.outside_cv).map(column_pair).collect();
        assert_eq!(cols, tame);
        assert_eq!(tame.len() as u128, ev.count);
        let zero = BetaMap::zero(p3(), 2, 1);
        assert_eq!(tame_ev(&zero, Budget::default(), 1).unwrap().len(), 81);
    }

    #[test]
    fn rank_one_small() {
        let rep = rank_one_membership(&sym(2), 2, Budget::default()).unwrap();
        assert_eq!(rep.rank_le_one, 33);
        assert_eq!(rep.span_dim, 4);
        assert!(rep.passes());
        // 1 + (p^r1 - 1)(p^r - 1)/(p - 1)
        let rep = rank_one_membership(&sym(4), 2, Budget::default()).unwrap();
        assert_eq!(rep.rank_le_one, 1 + 8 * 80 / 2);
        assert!(rep.passes());
    }
}
