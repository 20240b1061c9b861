use super::beta::BetaMap;
use crate::error::{Error, Result};
use crate::fpcore::enumerate::{for_each_in_range, space_size};
use crate::fpcore::{wedge_dim, Budget, FpMatrix, PrimeModulus};

/// The 2-cocycle `(a, a') ↦ ½ β(a' ∧ a)` with trivial action, i.e. `ι(β)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cocycle2 {
    beta: BetaMap,
}

impl Cocycle2 {
    pub fn beta(&self) -> &BetaMap {
        &self.beta
    }

    pub fn eval(&self, a: &[u32], a_prime: &[u32]) -> Result<Vec<u32>> {
        let p = self.beta.modulus();
        let half = p.half();
        Ok(self
            .beta
            .on_pair(a_prime, a)?
            .into_iter()
            .map(|x| p.mul(half, x))
            .collect())
    }

    /// `c(a1,a2) + c(a1+a2,a3) == c(a2,a3) + c(a1,a2+a3)`.
    pub fn satisfies_identity(&self, a1: &[u32], a2: &[u32], a3: &[u32]) -> Result<bool> {
        let p = self.beta.modulus();
        let add = |x: &[u32], y: &[u32]| -> Vec<u32> {
            x.iter().zip(y).map(|(&s, &t)| p.add(s, t)).collect()
        };
        let lhs = add(&self.eval(a1, a2)?, &self.eval(&add(a1, a2), a3)?);
        let rhs = add(&self.eval(a2, a3)?, &self.eval(a1, &add(a2, a3))?);
        Ok(lhs == rhs)
    }

    /// Checks the cocycle identity on every triple of `A³`.
    pub fn verify_exhaustive(&self, budget: Budget) -> Result<bool> {
        let r1 = self.beta.r1();
        let p = self.beta.modulus();
        let total = space_size(p, 3 * r1, budget, "cocycle identity")?;
        let mut ok = true;
        for_each_in_range(p, 3 * r1, 0..total, |_, d| {
            if ok && !self.satisfies_identity(&d[..r1], &d[r1..2 * r1], &d[2 * r1..]).unwrap_or(false) {
                ok = false;
            }
        });
        Ok(ok)
    }
}

/// `ι(β)`.
pub fn iota(beta: &BetaMap) -> Cocycle2 {
    Cocycle2 { beta: beta.clone() }
}

/// Literal antisymmetrization `e_i ∧ e_j ↦ c(e_i, e_j) - c(e_j, e_i)`.
///
/// For a cocycle of a central extension this is the commutator pairing
/// `π(g1) ∧ π(g2) ↦ [g1, g2]`; on `ι(β)` it evaluates to `-β`.
pub fn antisymmetrize<F>(p: PrimeModulus, r1: usize, r2: usize, c: F) -> Result<BetaMap>
where
    F: Fn(&[u32], &[u32]) -> Result<Vec<u32>>,
{
    let m = wedge_dim(r1);
    let mut matrix = FpMatrix::zeros(p, r2, m);
    let unit = |i: usize| -> Vec<u32> {
        let mut e = vec![0; r1];
        e[i] = 1;
        e
    };
    let mut col = 0;
    for i in 0..r1 {
        for j in i + 1..r1 {
            let (ei, ej) = (unit(i), unit(j));
            let x = c(&ei, &ej)?;
            let y = c(&ej, &ei)?;
            if x.len() != r2 || y.len() != r2 {
                return Err(Error::DimensionMismatch {
                    op: "antisymmetrize",
                    expected: r2,
                    found: x.len().min(y.len()),
                });
            }
            for k in 0..r2 {
                matrix.set(k, col, p.sub(x[k], y[k]));
            }
            col += 1;
        }
    }
    BetaMap::new(r1, matrix)
}

/// The section `θ` of `ι`: `e_i ∧ e_j ↦ c(e_j, e_i) - c(e_i, e_j)`, so that
/// `θ(ι(β)) = β`. This is [`antisymmetrize`] composed with `-1` on `B`.
pub fn theta<F>(p: PrimeModulus, r1: usize, r2: usize, c: F) -> Result<BetaMap>
where
    F: Fn(&[u32], &[u32]) -> Result<Vec<u32>>,
{
    let anti = antisymmetrize(p, r1, r2, c)?;
    BetaMap::new(r1, anti.matrix().scale(p.value() - 1))
}

impl Cocycle2 {
    pub fn theta(&self) -> Result<BetaMap> {
        theta(self.beta.modulus(), self.beta.r1(), self.beta.r2(), |a, b| {
            self.eval(a, b)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3() -> PrimeModulus {
        PrimeModulus::new(3).unwrap()
    }

    #[test]
    fn zero_beta_gives_zero_cocycle() {
        let c = iota(&BetaMap::zero(p3(), 3, 2));
        assert_eq!(c.eval(&[1, 2, 0], &[0, 1, 1]).unwrap(), vec![0, 0]);
        assert_eq!(c.theta().unwrap(), BetaMap::zero(p3(), 3, 2));
    }

    #[test]
    fn iota_on_basis_pair() {
        // ½ β(e2 ∧ e1) = 2 · (-1) = 1 mod 3
        let beta = BetaMap::coordinate(p3(), 2, 0, 1);
        let c = iota(&beta);
        assert_eq!(c.eval(&[1, 0], &[0, 1]).unwrap(), vec![1]);
        assert_eq!(c.eval(&[0, 1], &[1, 0]).unwrap(), vec![2]);
        assert_eq!(c.theta().unwrap(), beta);
        let anti = antisymmetrize(p3(), 2, 1, |a, b| c.eval(a, b)).unwrap();
        assert_eq!(anti.matrix().get(0, 0), 2);
    }

    #[test]
    fn theta_kills_symmetric_evaluators() {
        let p = PrimeModulus::new(5).unwrap();
        let sym = |a: &[u32], b: &[u32]| -> Result<Vec<u32>> {
            let dot: u32 = a.iter().zip(b).map(|(x, y)| x * y).sum();
            Ok(vec![dot % 5, (a[0] * b[0]) % 5])
        };
        assert_eq!(theta(p, 3, 2, sym).unwrap(), BetaMap::zero(p, 3, 2));
        assert_eq!(antisymmetrize(p, 3, 2, sym).unwrap(), BetaMap::zero(p, 3, 2));
        let zero = |_: &[u32], _: &[u32]| -> Result<Vec<u32>> { Ok(vec![0]) };
        assert_eq!(theta(p, 4, 1, zero).unwrap(), BetaMap::zero(p, 4, 1));
    }

    #[test]
    fn theta_after_iota_is_identity_r1_le_3() {
        // every β: Λ²(F_3^{r1}) -> F_3 for r1 <= 3
        let p = p3();
        for r1 in 2..=3 {
            let m = wedge_dim(r1);
            for idx in 0..3u64.pow(m as u32) {
                let od = crate::fpcore::enumerate::Odometer::at(p, m, idx);
                let mat = FpMatrix::from_residues(p, 1, m, od.digits().to_vec());
                let beta = BetaMap::new(r1, mat).unwrap();
                assert_eq!(iota(&beta).theta().unwrap(), beta);
            }
        }
    }
}
