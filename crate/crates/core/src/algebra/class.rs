use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use super::ratfunc::RationalFunctionT;
use super::rational::Rational;
use super::ring::{invert_matrix, GradedRing};
use crate::error::{Error, Result};

/// Element of `H*(X_u) ⊗ Q(t)`: one rational-function coefficient per basis
/// monomial of the owning ring.
#[derive(Clone)]
pub struct RingClass {
    ring: Arc<GradedRing>,
    coeffs: Vec<RationalFunctionT>,
}

impl PartialEq for RingClass {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.coeffs == other.coeffs
    }
}

pub(crate) fn same_ring(a: &Arc<GradedRing>, b: &Arc<GradedRing>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl RingClass {
    pub fn zero(ring: &Arc<GradedRing>) -> Self {
        RingClass {
            ring: ring.clone(),
            coeffs: vec![RationalFunctionT::zero(); ring.len()],
        }
    }

    pub fn one(ring: &Arc<GradedRing>) -> Self {
        Self::scalar(ring, RationalFunctionT::one())
    }

    pub fn scalar(ring: &Arc<GradedRing>, c: RationalFunctionT) -> Self {
        let mut x = Self::zero(ring);
        x.coeffs[ring.unit_index()] = c;
        x
    }

    /// The basis monomial with index `i`.
    pub fn basis(ring: &Arc<GradedRing>, i: usize) -> Self {
        let mut x = Self::zero(ring);
        x.coeffs[i] = RationalFunctionT::one();
        x
    }

    pub fn from_coeffs(ring: &Arc<GradedRing>, coeffs: Vec<RationalFunctionT>) -> Result<Self> {
        if coeffs.len() != ring.len() {
            return Err(Error::RingMismatch);
        }
        Ok(RingClass {
            ring: ring.clone(),
            coeffs,
        })
    }

    pub fn ring(&self) -> &Arc<GradedRing> {
        &self.ring
    }

    pub fn coeffs(&self) -> &[RationalFunctionT] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &RationalFunctionT {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Coefficient of the unit monomial.
    pub fn unit_part(&self) -> &RationalFunctionT {
        &self.coeffs[self.ring.unit_index()]
    }

    /// Every nonzero coefficient sits on a monomial of degree `d`.
    pub fn is_pure_degree(&self, d: u32) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(i, c)| c.is_zero() || self.ring.degree(i) == d)
    }

    fn check(&self, other: &RingClass) -> Result<()> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn add(&self, other: &RingClass) -> Result<RingClass> {
        self.check(other)?;
        Ok(RingClass {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &RingClass) -> Result<RingClass> {
        self.check(other)?;
        Ok(RingClass {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn neg(&self) -> RingClass {
        self.scale(&RationalFunctionT::from_int(-1))
    }

    pub fn scale(&self, c: &RationalFunctionT) -> RingClass {
        RingClass {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn scale_rational(&self, c: &Rational) -> RingClass {
        RingClass {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(|a| a.scale(c)).collect(),
        }
    }

    /// Cup product through the ring's multiplication table.
    pub fn mul(&self, other: &RingClass) -> Result<RingClass> {
        self.check(other)?;
        let mut out = vec![RationalFunctionT::zero(); self.ring.len()];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a * b;
                for (k, c) in self.ring.product(i, j) {
                    out[*k] = &out[*k] + &ab.scale(c);
                }
            }
        }
        Ok(RingClass {
            ring: self.ring.clone(),
            coeffs: out,
        })
    }

    pub fn pow(&self, e: u32) -> RingClass {
        let mut acc = RingClass::one(&self.ring);
        for _ in 0..e {
            acc = acc.mul(self).expect("same ring");
        }
        acc
    }

    /// Inverse of a class whose unit coefficient is a nonzero rational
    /// function: `a0 (1 + n)` with `n` nilpotent, inverted by the finite
    /// geometric series in `n`.
    pub fn invert_unit(&self) -> Result<RingClass> {
        let a0 = self.unit_part();
        if a0.is_zero() {
            return Err(Error::NonInvertible);
        }
        let inv0 = a0.inverse()?;
        let mut nil = self.scale(&inv0);
        nil.coeffs[self.ring.unit_index()] = RationalFunctionT::zero();
        let minus_nil = nil.neg();
        let mut term = RingClass::one(&self.ring);
        let mut sum = term.clone();
        for _ in 0..self.ring.top_degree() {
            term = term.mul(&minus_nil)?;
            if term.is_zero() {
                break;
            }
            sum = sum.add(&term)?;
        }
        Ok(sum.scale(&inv0))
    }

    /// Applies the integration functional (only top-degree monomials count).
    pub fn integrate(&self) -> RationalFunctionT {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(i, c)| !c.is_zero() && !self.ring.integral(*i).is_zero())
            .fold(RationalFunctionT::zero(), |acc, (i, c)| {
                &acc + &c.scale(self.ring.integral(i))
            })
    }

    /// Integrates `self` as a class on `ring`, failing on a mismatch.
    pub fn integrate_on(&self, ring: &Arc<GradedRing>) -> Result<RationalFunctionT> {
        if !same_ring(&self.ring, ring) {
            return Err(Error::RingMismatch);
        }
        Ok(self.integrate())
    }

    /// Künneth decomposition of the diagonal: pairs `(e_i, e^i)` with
    /// `Σ_i ∫(e_i · x) e^i = x` for every class `x`.
    pub fn diagonal_decomposition(ring: &Arc<GradedRing>) -> Result<Vec<(RingClass, RingClass)>> {
        let gram = ring.gram();
        let inv = invert_matrix(&gram).ok_or_else(|| {
            Error::InvalidComponent("singular integration pairing".into())
        })?;
        let n = ring.len();
        Ok((0..n)
            .map(|i| {
                let dual = (0..n)
                    .map(|j| RationalFunctionT::constant(inv[j][i].clone()))
                    .collect();
                (
                    RingClass::basis(ring, i),
                    RingClass {
                        ring: ring.clone(),
                        coeffs: dual,
                    },
                )
            })
            .collect())
    }
}

impl fmt::Debug for RingClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RingClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mono: Vec<String> = self.ring.basis()[i]
                .iter()
                .zip(self.ring.generators())
                .filter(|(e, _)| **e > 0)
                .map(|(e, (g, _))| if *e == 1 { g.clone() } else { format!("{g}^{e}") })
                .collect();
            if mono.is_empty() {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c})*{}", mono.join("*"))?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
