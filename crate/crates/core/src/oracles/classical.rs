use num_integer::Integer;

use crate::algebra::{Rational, RationalFunctionT};
use crate::error::{Error, Result};

/// `Π` of the nonzero section weights of `f*TX` for a degree-`d` cover `f`
/// of an invariant line with tangent weight `delta·t` at its source.
///
/// `normals` lists `(weight at the source, degree on the line)` for the
/// remaining summands of `TX` restricted to the line. Sections of a summand
/// of degree `e ≥ 0` carry weights `α − jΔ/d` for `0 ≤ j ≤ de`; for `e < 0`
/// the `H¹` weights `α + jΔ/d`, `0 < j < d|e|`, go to the denominator. The
/// single zero weight of the tangent summand is the infinitesimal
/// reparametrization fixing both ends and is dropped.
pub fn classical_edge_euler(delta: i64, normals: &[(i64, i64)], d: u64) -> Result<RationalFunctionT> {
    if d == 0 {
        return Err(Error::Invalid("cover degree 0 is not an edge".into()));
    }
    if delta == 0 {
        return Err(Error::Invalid("zero tangent weight".into()));
    }
    let d = d as i64;
    let step = Rational::new(delta.into(), d.into());
    let lin = |w: Rational| RationalFunctionT::monomial(w, 1);
    let mut acc = RationalFunctionT::one();
    for j in 0..=2 * d {
        if j != d {
            acc = &acc * &lin(Rational::from_integer(delta.into()) - &step * Rational::from_integer(j.into()));
        }
    }
    for &(alpha, e) in normals {
        let a = Rational::from_integer(alpha.into());
        let (range, sign, num) = if e >= 0 { (0..=d * e, -1, true) } else { (1..=-d * e - 1, 1, false) };
        for j in range {
            let w = &a + &step * Rational::from_integer((sign * j).into());
            if w == Rational::from_integer(0.into()) {
                return Err(Error::Invalid("zero normal weight: fixed locus is not isolated".into()));
            }
            acc = if num { &acc * &lin(w) } else { (&acc * &lin(w).inverse()?).clone() };
        }
    }
    Ok(acc)
}

/// The classical edge term of the coordinate line from `p_i` to `p_j` in
/// `P^N` with weights `a`.
pub fn classical_projective_edge_euler(a: &[i64], i: usize, j: usize, d: u64) -> Result<RationalFunctionT> {
    let normals: Vec<(i64, i64)> = (0..a.len()).filter(|&k| k != i && k != j).map(|k| (a[k] - a[i], 1)).collect();
    classical_edge_euler(a[j] - a[i], &normals, d)
}

/// Limits and stabilizer of the orbit of a point with the given support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitData {
    pub m: i64,
    pub big_m: i64,
    /// `None` for a fixed point.
    pub stabilizer: Option<u64>,
    pub degree: i64,
}

/// Direct parametrization of `λ·[z]` for a point of `P^N` supported on
/// `support`: the orbit runs from the smallest to the largest supported
/// weight, and `λ` acts trivially exactly when it is a root of unity of
/// order dividing every pairwise weight difference.
pub fn orbit_parametrize(weights: &[i64], support: &[usize]) -> Result<OrbitData> {
    let ws: Vec<i64> = support.iter().map(|&i| weights[i]).collect();
    let (Some(&m), Some(&big_m)) = (ws.iter().min(), ws.iter().max()) else {
        return Err(Error::Invalid("empty support".into()));
    };
    let mut g = 0i64;
    for x in &ws {
        for y in &ws {
            g = g.gcd(&(x - y));
        }
    }
    Ok(OrbitData {
        m,
        big_m,
        stabilizer: if g == 0 { None } else { Some(g as u64) },
        degree: big_m - m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn t_pow(c: Rational, k: i64) -> RationalFunctionT {
        RationalFunctionT::monomial(c, k)
    }

    #[test]
    fn p1_covers() {
        assert_eq!(classical_edge_euler(1, &[], 1).unwrap(), t_pow(rat(-1, 1), 2));
        assert_eq!(classical_edge_euler(1, &[], 2).unwrap(), t_pow(rat(1, 4), 4));
        assert_eq!(classical_edge_euler(1, &[], 3).unwrap(), t_pow(rat(-4, 81), 6));
        assert!(classical_edge_euler(1, &[], 0).is_err());
        // (−1)^d (d!)² / d^{2d} (Δt)^{2d}
        assert_eq!(classical_edge_euler(3, &[], 2).unwrap(), t_pow(rat(81, 4), 4));
    }

    #[test]
    fn p2_lines() {
        assert_eq!(classical_projective_edge_euler(&[0, 1, 5], 0, 1, 1).unwrap(), t_pow(rat(-20, 1), 4));
        assert_eq!(classical_projective_edge_euler(&[0, 1, 5], 0, 2, 1).unwrap(), t_pow(rat(100, 1), 4));
        assert_eq!(classical_projective_edge_euler(&[0, 1, 5], 1, 2, 1).unwrap(), t_pow(rat(-80, 1), 4));
        assert!(classical_projective_edge_euler(&[0, 1, 5], 0, 2, 5).is_err());
    }

    #[test]
    fn negative_degree_summand() {
        // O(−1) on a line, d = 2: one H¹ weight halfway between the ends.
        let e = classical_edge_euler(2, &[(3, -1)], 2).unwrap();
        assert_eq!(e, &classical_edge_euler(2, &[], 2).unwrap() * &t_pow(rat(1, 4), -1));
    }

    #[test]
    fn orbits() {
        let w = [0, 1, 5];
        let o = orbit_parametrize(&w, &[0, 2]).unwrap();
        assert_eq!((o.m, o.big_m, o.stabilizer, o.degree), (0, 5, Some(5), 5));
        let o = orbit_parametrize(&w, &[1, 2]).unwrap();
        assert_eq!((o.m, o.big_m, o.stabilizer, o.degree), (1, 5, Some(4), 4));
        let o = orbit_parametrize(&w, &[1]).unwrap();
        assert_eq!((o.stabilizer, o.degree), (None, 0));
        assert_eq!(orbit_parametrize(&w, &[0, 1, 2]).unwrap().stabilizer, Some(1));
    }
}
