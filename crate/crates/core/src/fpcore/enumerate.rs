//! Budgeted, partitionable enumeration of `F_p^k` in odometer order.
//!
//! Index `x` corresponds to the vector whose entry `k` is the `k`-th base-`p`
//! digit of `x` (little-endian). For matrices, entries are taken row-major.
//! Work is split into contiguous index ranges; callers reduce the per-range
//! results in range order, so results never depend on the partition count.

use std::ops::Range;
use std::thread;

use serde::{Deserialize, Serialize};

use super::prime::PrimeModulus;
use crate::error::{Error, Result};

/// Environment variable consulted for the default partition count.
pub const THREADS_ENV: &str = "BICERT_THREADS";

/// Default enumeration cap: `2^28` items.
pub const DEFAULT_BUDGET: u128 = 1 << 28;

/// Upper bound on the number of items an enumeration may visit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget(pub u128);

impl Default for Budget {
    fn default() -> Self {
        Budget(DEFAULT_BUDGET)
    }
}

impl Budget {
    pub fn check(self, what: &'static str, needed: Option<u128>) -> Result<u64> {
        match needed {
            Some(n) if n <= self.0 && n <= u64::MAX as u128 => Ok(n as u64),
            Some(n) => Err(Error::BudgetExceeded {
                what,
                needed: n,
                cap: self.0,
            }),
            None => Err(Error::BudgetExceeded {
                what,
                needed: u128::MAX,
                cap: self.0,
            }),
        }
    }
}

/// `p^k`, checked against the budget.
pub fn space_size(p: PrimeModulus, k: usize, budget: Budget, what: &'static str) -> Result<u64> {
    let needed = u32::try_from(k).ok().and_then(|k| p.checked_pow(k));
    budget.check(what, needed)
}

/// Partition count from [`THREADS_ENV`], falling back to available parallelism.
pub fn default_partitions() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Splits `0..total` into at most `parts` contiguous, nearly equal ranges.
pub fn partition_ranges(total: u64, parts: usize) -> Vec<Range<u64>> {
    let parts = (parts.max(1) as u64).min(total.max(1));
    let base = total / parts;
    let extra = total % parts;
    let mut out = Vec::with_capacity(parts as usize);
    let mut lo = 0;
    for k in 0..parts {
        let len = base + u64::from(k < extra);
        out.push(lo..lo + len);
        lo += len;
    }
    out
}

/// Runs `f` on each partition of `0..total`, one scoped thread per
/// partition, and returns the results in partition order.
pub fn map_partitions<T, F>(total: u64, parts: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(Range<u64>) -> T + Sync,
{
    let ranges = partition_ranges(total, parts);
    if ranges.len() == 1 {
        return vec![f(ranges[0].clone())];
    }
    thread::scope(|s| {
        let handles: Vec<_> = ranges
            .into_iter()
            .map(|r| {
                let f = &f;
                s.spawn(move || f(r))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("enumeration worker panicked"))
            .collect()
    })
}

/// Base-`p` odometer over vectors of length `len`.
#[derive(Clone, Debug)]
pub struct Odometer {
    p: u32,
    digits: Vec<u32>,
}

impl Odometer {
    pub fn at(p: PrimeModulus, len: usize, mut index: u64) -> Self {
        let pv = p.value();
        let digits = (0..len)
            .map(|_| {
                let d = (index % pv as u64) as u32;
                index /= pv as u64;
                d
            })
            .collect();
        Odometer { p: pv, digits }
    }

    #[inline]
    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    /// Advances to the next index; wraps to zero after the last vector.
    #[inline]
    pub fn step(&mut self) {
        for d in self.digits.iter_mut() {
            *d += 1;
            if *d < self.p {
                return;
            }
            *d = 0;
        }
    }
}

/// Calls `f` on every vector with index in `range`.
pub fn for_each_in_range<F>(p: PrimeModulus, len: usize, range: Range<u64>, mut f: F)
where
    F: FnMut(u64, &[u32]),
{
    if range.is_empty() {
        return;
    }
    let mut od = Odometer::at(p, len, range.start);
    for idx in range {
        f(idx, od.digits());
        od.step();
    }
}

/// All vectors of `F_p^len`, in odometer order.
pub fn all_vectors(p: PrimeModulus, len: usize) -> impl Iterator<Item = Vec<u32>> {
    let total = p.as_u64().pow(len as u32);
    let mut od = Odometer::at(p, len, 0);
    (0..total).map(move |_| {
        let v = od.digits().to_vec();
        od.step();
        v
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_cover_exactly() {
        for total in [0u64, 1, 7, 100, 6561] {
            for parts in [1, 2, 3, 8, 1000] {
                let rs = partition_ranges(total, parts);
                assert_eq!(rs.first().unwrap().start, 0);
                assert_eq!(rs.last().unwrap().end, total);
                for w in rs.windows(2) {
                    assert_eq!(w[0].end, w[1].start);
                }
            }
        }
    }

    #[test]
    fn odometer_matches_index_decoding() {
        let p = PrimeModulus::new(3).unwrap();
        let mut seen = Vec::new();
        for_each_in_range(p, 3, 0..27, |i, d| {
            assert_eq!(Odometer::at(p, 3, i).digits(), d);
            seen.push(d.to_vec());
        });
        assert_eq!(seen[1], vec![1, 0, 0]);
        assert_eq!(seen[3], vec![0, 1, 0]);
        assert_eq!(seen.len(), 27);
    }

    #[test]
    fn partitioned_sum_is_partition_independent() {
        let p = PrimeModulus::new(5).unwrap();
        let total = 5u64.pow(5);
        let sum = |parts| -> u64 {
            map_partitions(total, parts, |r| {
                let mut s = 0;
                for_each_in_range(p, 5, r, |_, d| s += d.iter().map(|&x| x as u64).sum::<u64>());
                s
            })
            .into_iter()
            .sum()
        };
        assert_eq!(sum(1), sum(3));
        assert_eq!(sum(1), sum(8));
    }

    #[test]
    fn budget_rejects_large_spaces() {
        let p = PrimeModulus::new(3).unwrap();
        assert_eq!(space_size(p, 4, Budget(81), "t"), Ok(81));
        assert!(matches!(
            space_size(p, 5, Budget(81), "t"),
            Err(Error::BudgetExceeded { needed: 243, .. })
        ));
        assert!(space_size(p, 1000, Budget::default(), "t").is_err());
    }
}
