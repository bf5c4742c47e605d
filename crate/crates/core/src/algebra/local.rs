use std::collections::BTreeMap;
use std::sync::Arc;

use super::class::{same_ring, RingClass};
use super::ratfunc::RationalFunctionT;
use super::ring::GradedRing;
use crate::error::{Error, Result};

/// Polynomial in the formal nilpotent cotangent variables `ψ₁, ψ₂` with
/// [`RingClass`] coefficients, truncated above total ψ-degree `bound`.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalClass {
    ring: Arc<GradedRing>,
    bound: u32,
    terms: BTreeMap<(u32, u32), RingClass>,
}

impl LocalClass {
    pub fn zero(ring: &Arc<GradedRing>, bound: u32) -> Self {
        LocalClass {
            ring: ring.clone(),
            bound,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_class(c: RingClass, bound: u32) -> Self {
        let mut x = Self::zero(c.ring(), bound);
        x.insert((0, 0), c);
        x
    }

    pub fn scalar(ring: &Arc<GradedRing>, c: RationalFunctionT, bound: u32) -> Self {
        Self::from_class(RingClass::scalar(ring, c), bound)
    }

    pub fn one(ring: &Arc<GradedRing>, bound: u32) -> Self {
        Self::scalar(ring, RationalFunctionT::one(), bound)
    }

    /// `c · ψ₁^i ψ₂^j`
    pub fn psi_monomial(c: RationalFunctionT, ring: &Arc<GradedRing>, i: u32, j: u32, bound: u32) -> Self {
        let mut x = Self::zero(ring, bound);
        x.insert((i, j), RingClass::scalar(ring, c));
        x
    }

    fn insert(&mut self, key: (u32, u32), c: RingClass) {
        if key.0 + key.1 > self.bound || c.is_zero() {
            return;
        }
        match self.terms.remove(&key) {
            Some(prev) => {
                let s = prev.add(&c).expect("same ring");
                if !s.is_zero() {
                    self.terms.insert(key, s);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn ring(&self) -> &Arc<GradedRing> {
        &self.ring
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &RingClass)> {
        self.terms.iter()
    }

    /// Coefficient of `ψ₁^i ψ₂^j`.
    pub fn coefficient(&self, i: u32, j: u32) -> RingClass {
        self.terms
            .get(&(i, j))
            .cloned()
            .unwrap_or_else(|| RingClass::zero(&self.ring))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check(&self, other: &LocalClass) -> Result<()> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn add(&self, other: &LocalClass) -> Result<LocalClass> {
        self.check(other)?;
        let mut out = self.clone();
        out.bound = self.bound.min(other.bound);
        out.terms.retain(|k, _| k.0 + k.1 <= out.bound);
        for (k, c) in &other.terms {
            out.insert(*k, c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> LocalClass {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.neg();
        }
        out
    }

    pub fn scale(&self, c: &RationalFunctionT) -> LocalClass {
        let mut out = LocalClass::zero(&self.ring, self.bound);
        for (k, v) in &self.terms {
            out.insert(*k, v.scale(c));
        }
        out
    }

    pub fn mul(&self, other: &LocalClass) -> Result<LocalClass> {
        self.check(other)?;
        let mut out = LocalClass::zero(&self.ring, self.bound.min(other.bound));
        for ((i1, j1), a) in &self.terms {
            for ((i2, j2), b) in &other.terms {
                if i1 + i2 + j1 + j2 > out.bound {
                    continue;
                }
                out.insert((i1 + i2, j1 + j2), a.mul(b)?);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> LocalClass {
        let mut acc = LocalClass::one(&self.ring, self.bound);
        for _ in 0..e {
            acc = acc.mul(self).expect("same ring");
        }
        acc
    }

    /// Inverse when the constant coefficient is invertible in the ring; the
    /// remainder is nilpotent (positive ring degree or positive ψ-degree).
    pub fn invert_unit(&self) -> Result<LocalClass> {
        let c0 = self.coefficient(0, 0);
        let inv0 = c0.invert_unit()?;
        let inv0_local = LocalClass::from_class(inv0, self.bound);
        let mut nil = self.mul(&inv0_local)?;
        nil.insert((0, 0), RingClass::one(&self.ring).neg());
        let minus_nil = nil.neg();
        let mut term = LocalClass::one(&self.ring, self.bound);
        let mut sum = term.clone();
        for _ in 0..(self.bound + self.ring.top_degree()) {
            term = term.mul(&minus_nil)?;
            if term.is_zero() {
                break;
            }
            sum = sum.add(&term)?;
        }
        sum.mul(&inv0_local)
    }

    /// Replaces `ψ₁, ψ₂` by concrete classes of the coefficient ring.
    pub fn substitute(&self, psi1: &RingClass, psi2: &RingClass) -> Result<RingClass> {
        let mut out = RingClass::zero(&self.ring);
        for ((i, j), c) in &self.terms {
            let term = c.mul(&psi1.pow(*i))?.mul(&psi2.pow(*j))?;
            out = out.add(&term)?;
        }
        Ok(out)
    }
}

/// Reversed Chern polynomial `x^r + c₁ x^{r−1} + … + c_r` of a rank-`r`
/// bundle with Chern classes `chern = [c₁, …, c_r]`.
pub fn p_eval(chern: &[RingClass], x: &LocalClass) -> Result<LocalClass> {
    let mut acc = LocalClass::one(x.ring(), x.bound());
    for c in chern {
        acc = acc.mul(x)?.add(&LocalClass::from_class(c.clone(), x.bound()))?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn t() -> RationalFunctionT {
        RationalFunctionT::t()
    }

    #[test]
    fn p_eval_examples() {
        let pt = GradedRing::point();
        let x = LocalClass::scalar(&pt, t(), 3);
        let trivial = vec![RingClass::zero(&pt)];
        assert_eq!(p_eval(&trivial, &x).unwrap(), x);

        let p1 = GradedRing::projective(1, "h");
        let h = RingClass::basis(&p1, 1);
        let two_t = LocalClass::scalar(&p1, t().scale(&rat(2, 1)), 3);
        let expected = LocalClass::from_class(RingClass::scalar(&p1, t().scale(&rat(2, 1))).add(&h).unwrap(), 3);
        assert_eq!(p_eval(&[h], &two_t).unwrap(), expected);

        // rank 2 trivial at t - ψ₁
        let arg = LocalClass::scalar(&pt, t(), 4)
            .add(&LocalClass::psi_monomial(RationalFunctionT::from_int(-1), &pt, 1, 0, 4))
            .unwrap();
        let got = p_eval(&[RingClass::zero(&pt), RingClass::zero(&pt)], &arg).unwrap();
        let want = LocalClass::scalar(&pt, &t() * &t(), 4)
            .add(&LocalClass::psi_monomial(t().scale(&rat(-2, 1)), &pt, 1, 0, 4))
            .unwrap()
            .add(&LocalClass::psi_monomial(RationalFunctionT::one(), &pt, 2, 0, 4))
            .unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn truncation_and_inverse() {
        let pt = GradedRing::point();
        let psi = LocalClass::psi_monomial(RationalFunctionT::one(), &pt, 1, 0, 2);
        assert!(psi.pow(3).is_zero());
        let x = LocalClass::scalar(&pt, t(), 2).add(&psi).unwrap();
        let inv = x.invert_unit().unwrap();
        assert_eq!(x.mul(&inv).unwrap(), LocalClass::one(&pt, 2));
        assert!(psi.invert_unit().is_err());
    }
}
