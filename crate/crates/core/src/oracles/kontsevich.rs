use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebra::Rational;
use crate::error::{Error, Result};

fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Number of rational plane curves of degree `d` through `3d − 1` general
/// points, by Kontsevich's recursion.
pub fn kontsevich_nd(d: u32) -> Result<Rational> {
    if d < 1 {
        return Err(Error::Invalid("kontsevich_nd needs d >= 1".into()));
    }
    let mut n: Vec<BigInt> = vec![BigInt::zero(), BigInt::one()];
    for dd in 2..=d as i64 {
        let mut acc = BigInt::zero();
        for d1 in 1..dd {
            let d2 = dd - d1;
            let term = binomial(3 * dd - 4, 3 * d1 - 2) * d2 - binomial(3 * dd - 4, 3 * d1 - 1) * d1;
            acc += &n[d1 as usize] * &n[d2 as usize] * BigInt::from(d1 * d1 * d2) * term;
        }
        n.push(acc);
    }
    Ok(Rational::from_integer(n[d as usize].clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    #[test]
    fn known_values() {
        let want = [1i64, 1, 12, 620, 87304, 26312976];
        for (d, w) in want.iter().enumerate() {
            assert_eq!(kontsevich_nd(d as u32 + 1).unwrap(), rat(*w, 1));
        }
        assert!(kontsevich_nd(0).is_err());
    }
}
