//! Closed-form counts of isotropic homomorphisms and their `p`-adic limit.
//!
//! For `V` of even dimension `r` with a non-degenerate alternating form and
//! `a = dim A`:
//!
//! ```text
//! Ξ(a, r) = Σ_{d=0}^{min(a, r/2)} I_d · M_d
//! I_d     = Π_{i<d} (p^a - p^i)                       surjections A -> F_p^d
//! M_d     = Π_{i<d} (p^{r-i} - p^i) / Π_{i<d} (p^d - p^i)   isotropic d-subspaces
//! C(r)    = Σ_{d=0}^{r/2} (-1)^d Π_{i<d} (p^{r-i} - p^i) / Π_{i=1}^{d} (p^i - 1)
//! ```
//!
//! and `Ξ(a, r) ≡ C(r) (mod p^a)`.

use crate::error::{Error, Result};
use crate::fpcore::PrimeModulus;

fn pow(p: PrimeModulus, k: usize, what: &'static str) -> Result<u128> {
    p.checked_pow(k as u32).ok_or(Error::Overflow(what))
}

fn check_even(r: usize) -> Result<()> {
    if !r.is_multiple_of(2) {
        return Err(Error::Precondition(format!(
            "a non-degenerate alternating form needs even dimension, got {r}"
        )));
    }
    Ok(())
}

/// `Π_{i<d} (p^{r-i} - p^i)`, shared numerator of `M_d` and `a(d)`.
fn isotropic_numerator(p: PrimeModulus, r: usize, d: usize) -> Result<u128> {
    let mut acc: u128 = 1;
    for i in 0..d {
        let term = pow(p, r - i, "isotropic count")? - pow(p, i, "isotropic count")?;
        acc = acc.checked_mul(term).ok_or(Error::Overflow("isotropic count"))?;
    }
    Ok(acc)
}

/// `I_d`: surjections from `F_p^a` onto a `d`-dimensional space.
pub fn surjection_count(p: PrimeModulus, a: usize, d: usize) -> Result<u128> {
    if d > a {
        return Ok(0);
    }
    let top = pow(p, a, "surjection count")?;
    let mut acc: u128 = 1;
    for i in 0..d {
        acc = acc
            .checked_mul(top - pow(p, i, "surjection count")?)
            .ok_or(Error::Overflow("surjection count"))?;
    }
    Ok(acc)
}

/// `M_d`: isotropic `d`-dimensional subspaces of the standard symplectic `F_p^r`.
pub fn isotropic_subspace_count(p: PrimeModulus, r: usize, d: usize) -> Result<u128> {
    check_even(r)?;
    if d > r / 2 {
        return Ok(0);
    }
    let num = isotropic_numerator(p, r, d)?;
    let pd = pow(p, d, "isotropic count")?;
    let mut den: u128 = 1;
    for i in 0..d {
        den = den
            .checked_mul(pd - pow(p, i, "isotropic count")?)
            .ok_or(Error::Overflow("isotropic count"))?;
    }
    if num % den != 0 {
        return Err(Error::InexactDivision("isotropic subspace count"));
    }
    Ok(num / den)
}

/// `Ξ(a, r)`, the number of `ξ: F_p^a -> F_p^r` pulling the form back to zero.
pub fn closed_xi(p: PrimeModulus, a: usize, r: usize) -> Result<u128> {
    check_even(r)?;
    let mut total: u128 = 0;
    for d in 0..=a.min(r / 2) {
        let term = surjection_count(p, a, d)?
            .checked_mul(isotropic_subspace_count(p, r, d)?)
            .ok_or(Error::Overflow("closed_xi"))?;
        total = total.checked_add(term).ok_or(Error::Overflow("closed_xi"))?;
    }
    Ok(total)
}

/// The terms `a(0), ..., a(r/2)` of the alternating sum defining `C(r)`.
pub fn climit_terms(p: PrimeModulus, r: usize) -> Result<Vec<u128>> {
    check_even(r)?;
    (0..=r / 2)
        .map(|d| {
            let num = isotropic_numerator(p, r, d)?;
            let mut den: u128 = 1;
            for i in 1..=d {
                den = den
                    .checked_mul(pow(p, i, "C(r)")? - 1)
                    .ok_or(Error::Overflow("C(r)"))?;
            }
            if num % den != 0 {
                return Err(Error::InexactDivision("C(r) term"));
            }
            Ok(num / den)
        })
        .collect()
}

/// `C(r) = Ξ(∞, r)`, the `p`-adic limit of `Ξ(a, r)` as `a -> ∞`.
pub fn closed_climit(p: PrimeModulus, r: usize) -> Result<i128> {
    let mut acc: i128 = 0;
    for (d, t) in climit_terms(p, r)?.into_iter().enumerate() {
        let t = i128::try_from(t).map_err(|_| Error::Overflow("C(r)"))?;
        acc = if d % 2 == 0 {
            acc.checked_add(t)
        } else {
            acc.checked_sub(t)
        }
        .ok_or(Error::Overflow("C(r)"))?;
    }
    Ok(acc)
}

/// `⌈(r1·r - 2·r2) / 2⌉`, floored at zero: the Ax–Katz lower bound on the
/// valuation of the number of solutions of `r2` quadrics in `r1·r` unknowns.
pub fn axkatz_bound(r1: usize, r: usize, r2: usize) -> u64 {
    let n = (r1 * r) as i128 - 2 * r2 as i128;
    if n <= 0 {
        0
    } else {
        ((n + 1) / 2) as u64
    }
}

/// Largest `k` with `p^k | n`.
pub fn padic_valuation(n: i128, p: PrimeModulus) -> Result<u32> {
    if n == 0 {
        return Err(Error::ZeroValuation);
    }
    let q = p.value() as i128;
    let mut n = n;
    let mut k = 0;
    while n % q == 0 {
        n /= q;
        k += 1;
    }
    Ok(k)
}

/// `x ≡ y (mod p^a)` for exact integers.
pub fn congruent_mod_power(x: i128, y: i128, p: PrimeModulus, a: u32) -> Result<bool> {
    let m = (p.value() as i128)
        .checked_pow(a)
        .ok_or(Error::Overflow("modulus p^a"))?;
    let diff = x.checked_sub(y).ok_or(Error::Overflow("congruence"))?;
    Ok(diff.rem_euclid(m) == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u64) -> PrimeModulus {
        PrimeModulus::new(n).unwrap()
    }

    #[test]
    fn xi_values() {
        assert_eq!(closed_xi(p(3), 0, 2).unwrap(), 1);
        assert_eq!(closed_xi(p(3), 1, 2).unwrap(), 9);
        assert_eq!(closed_xi(p(3), 2, 2).unwrap(), 33);
        assert_eq!(closed_xi(p(3), 3, 2).unwrap(), 105);
        assert_eq!(closed_xi(p(3), 2, 4).unwrap(), 2241);
        assert_eq!(closed_xi(p(3), 1, 4).unwrap(), 81);
        assert!(closed_xi(p(3), 2, 3).is_err());
    }

    #[test]
    fn isotropic_pieces() {
        assert_eq!(isotropic_subspace_count(p(3), 4, 1).unwrap(), 40);
        assert_eq!(isotropic_subspace_count(p(3), 4, 2).unwrap(), 40);
        assert_eq!(isotropic_subspace_count(p(3), 2, 1).unwrap(), 4);
        assert_eq!(surjection_count(p(3), 2, 1).unwrap(), 8);
        assert_eq!(surjection_count(p(3), 2, 2).unwrap(), 48);
        assert_eq!(surjection_count(p(3), 1, 2).unwrap(), 0);
    }

    #[test]
    fn climit_values() {
        assert_eq!(closed_climit(p(3), 2).unwrap(), -3);
        assert_eq!(closed_climit(p(3), 4).unwrap(), 81);
        assert_eq!(closed_climit(p(5), 2).unwrap(), -5);
        assert_eq!(climit_terms(p(3), 4).unwrap(), vec![1, 40, 120]);
    }

    #[test]
    fn climit_sign_and_monotone_terms() {
        for q in [3, 5, 7, 11] {
            for r in [2, 4, 6, 8] {
                let terms = climit_terms(p(q), r).unwrap();
                assert!(terms.windows(2).all(|w| w[0] < w[1]));
                let c = closed_climit(p(q), r).unwrap();
                assert_ne!(c, 0);
                assert_eq!(c.signum(), if (r / 2) % 2 == 0 { 1 } else { -1 });
            }
        }
    }

    #[test]
    fn congruence_with_limit() {
        for q in [3, 5] {
            for r in [2, 4, 6] {
                let c = closed_climit(p(q), r).unwrap();
                for a in 1..=6 {
                    let xi = closed_xi(p(q), a, r).unwrap() as i128;
                    assert!(congruent_mod_power(xi, c, p(q), a as u32).unwrap(), "p={q} r={r} a={a}");
                }
            }
        }
    }

    #[test]
    fn axkatz_examples() {
        assert_eq!(axkatz_bound(2, 2, 1), 1);
        assert_eq!(axkatz_bound(3, 2, 1), 2);
        assert_eq!(axkatz_bound(4, 4, 5), 3);
        assert_eq!(axkatz_bound(1, 2, 5), 0);
        assert_eq!(axkatz_bound(3, 3, 1), 4);
    }

    #[test]
    fn valuations() {
        assert_eq!(padic_valuation(33, p(3)).unwrap(), 1);
        assert_eq!(padic_valuation(2241, p(3)).unwrap(), 3);
        assert_eq!(padic_valuation(-3, p(3)).unwrap(), 1);
        assert_eq!(padic_valuation(7, p(3)).unwrap(), 0);
        assert_eq!(padic_valuation(0, p(3)), Err(Error::ZeroValuation));
    }
}
