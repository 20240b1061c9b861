use serde::{Deserialize, Serialize};

use super::beta::BetaMap;
use crate::error::{Error, Result};

/// An element `(b, a)` of the central extension `G = B × A`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ExtElem {
    pub b: Vec<u32>,
    pub a: Vec<u32>,
}

impl ExtElem {
    pub fn new(b: Vec<u32>, a: Vec<u32>) -> Self {
        ExtElem { b, a }
    }

    pub fn identity(r1: usize, r2: usize) -> Self {
        ExtElem {
            b: vec![0; r2],
            a: vec![0; r1],
        }
    }

    /// `π(g)`.
    pub fn project(&self) -> &[u32] {
        &self.a
    }

    pub fn is_identity(&self) -> bool {
        self.a.iter().chain(&self.b).all(|&x| x == 0)
    }
}

fn check_shape(g: &ExtElem, beta: &BetaMap) -> Result<()> {
    if g.a.len() != beta.r1() {
        return Err(Error::DimensionMismatch {
            op: "ExtElem (A part)",
            expected: beta.r1(),
            found: g.a.len(),
        });
    }
    if g.b.len() != beta.r2() {
        return Err(Error::DimensionMismatch {
            op: "ExtElem (B part)",
            expected: beta.r2(),
            found: g.b.len(),
        });
    }
    let p = beta.modulus().value();
    if g.a.iter().chain(&g.b).any(|&x| x >= p) {
        return Err(Error::Precondition("ExtElem entries must be reduced mod p".into()));
    }
    Ok(())
}

/// `(b1, a1)(b2, a2) = (b1 + b2 + ½ β(a2 ∧ a1), a1 + a2)`.
pub fn group_mul(g1: &ExtElem, g2: &ExtElem, beta: &BetaMap) -> Result<ExtElem> {
    check_shape(g1, beta)?;
    check_shape(g2, beta)?;
    let p = beta.modulus();
    let half = p.half();
    let twist = beta.on_pair(&g2.a, &g1.a)?;
    let b = g1
        .b
        .iter()
        .zip(&g2.b)
        .zip(&twist)
        .map(|((&x, &y), &t)| p.add(p.add(x, y), p.mul(half, t)))
        .collect();
    let a = g1.a.iter().zip(&g2.a).map(|(&x, &y)| p.add(x, y)).collect();
    Ok(ExtElem { b, a })
}

/// `(b, a)^{-1} = (-b, -a)`, valid because `β(a ∧ a) = 0`.
pub fn group_inv(g: &ExtElem, beta: &BetaMap) -> Result<ExtElem> {
    check_shape(g, beta)?;
    let p = beta.modulus();
    Ok(ExtElem {
        b: g.b.iter().map(|&x| p.neg(x)).collect(),
        a: g.a.iter().map(|&x| p.neg(x)).collect(),
    })
}

/// `g^k` by repeated multiplication.
pub fn group_pow(g: &ExtElem, k: u64, beta: &BetaMap) -> Result<ExtElem> {
    let mut acc = ExtElem::identity(beta.r1(), beta.r2());
    for _ in 0..k {
        acc = group_mul(&acc, g, beta)?;
    }
    Ok(acc)
}

/// `g1 g2 g1⁻¹ g2⁻¹`, computed through the group law.
pub fn commutator(g1: &ExtElem, g2: &ExtElem, beta: &BetaMap) -> Result<ExtElem> {
    let g1g2 = group_mul(g1, g2, beta)?;
    let t = group_mul(&g1g2, &group_inv(g1, beta)?, beta)?;
    group_mul(&t, &group_inv(g2, beta)?, beta)
}

/// `(β(π(g2) ∧ π(g1)), 0)`, the closed form of [`commutator`].
pub fn commutator_formula(g1: &ExtElem, g2: &ExtElem, beta: &BetaMap) -> Result<ExtElem> {
    check_shape(g1, beta)?;
    check_shape(g2, beta)?;
    Ok(ExtElem {
        b: beta.on_pair(&g2.a, &g1.a)?,
        a: vec![0; beta.r1()],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpcore::PrimeModulus;

    fn setup() -> BetaMap {
        BetaMap::coordinate(PrimeModulus::new(3).unwrap(), 2, 0, 1)
    }

    #[test]
    fn identity_and_inverse() {
        let beta = setup();
        let g = ExtElem::new(vec![2], vec![1, 2]);
        let e = ExtElem::identity(2, 1);
        assert_eq!(group_mul(&g, &e, &beta).unwrap(), g);
        assert_eq!(group_mul(&e, &g, &beta).unwrap(), g);
        let inv = group_inv(&g, &beta).unwrap();
        assert_eq!(inv, ExtElem::new(vec![1], vec![2, 1]));
        assert!(group_mul(&g, &inv, &beta).unwrap().is_identity());
        assert!(group_pow(&g, 3, &beta).unwrap().is_identity());
    }

    #[test]
    fn commutator_of_basis_lifts() {
        let beta = setup();
        let g1 = ExtElem::new(vec![0], vec![1, 0]);
        let g2 = ExtElem::new(vec![0], vec![0, 1]);
        let c = commutator(&g1, &g2, &beta).unwrap();
        assert_eq!(c, ExtElem::new(vec![2], vec![0, 0]));
        assert_eq!(commutator_formula(&g1, &g2, &beta).unwrap(), c);
        assert!(commutator(&g1, &g1, &beta).unwrap().is_identity());
        let zero = BetaMap::zero(PrimeModulus::new(3).unwrap(), 2, 1);
        assert!(commutator(&g1, &g2, &zero).unwrap().is_identity());
    }

    #[test]
    fn shape_errors() {
        let beta = setup();
        let good = ExtElem::identity(2, 1);
        assert!(group_mul(&ExtElem::new(vec![0], vec![0]), &good, &beta).is_err());
        assert!(group_mul(&good, &ExtElem::new(vec![0, 0], vec![0, 0]), &beta).is_err());
        assert!(group_mul(&good, &ExtElem::new(vec![3], vec![0, 0]), &beta).is_err());
    }
}
