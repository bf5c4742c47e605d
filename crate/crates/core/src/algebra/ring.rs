use std::collections::HashMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::rational::Rational;
use crate::error::{Error, Result};

/// One explicit product in a ring presentation: `lhs * rhs = Σ coeff · monomial`.
#[derive(Clone, Debug, PartialEq)]
pub struct TableEntry {
    pub lhs: Vec<u32>,
    pub rhs: Vec<u32>,
    pub value: Vec<(Vec<u32>, Rational)>,
}

/// Commutative graded Q-algebra with a finite monomial basis.
///
/// Products of basis monomials come from the explicit table, or, when absent,
/// from exponent addition if the sum is a basis monomial, or vanish when the
/// degree exceeds the top degree. Anything else is an incomplete presentation.
#[derive(Debug, PartialEq)]
pub struct GradedRing {
    generators: Vec<(String, u32)>,
    basis: Vec<Vec<u32>>,
    degrees: Vec<u32>,
    top_degree: u32,
    /// `mult[i][j]` is the expansion of `basis[i] * basis[j]`.
    mult: Vec<Vec<Vec<(usize, Rational)>>>,
    integration: Vec<Rational>,
    unit: usize,
}

impl GradedRing {
    /// Validates a presentation and builds the full multiplication table.
    pub fn from_presentation(
        generators: Vec<(String, u32)>,
        basis: Vec<Vec<u32>>,
        table: Vec<TableEntry>,
        top_degree: u32,
        integration: Vec<(Vec<u32>, Rational)>,
    ) -> Result<Arc<GradedRing>> {
        let ng = generators.len();
        if let Some((name, _)) = generators.iter().find(|(_, d)| *d == 0) {
            return Err(Error::Ring(format!("generator {name} has degree 0")));
        }
        if let Some(m) = basis.iter().find(|m| m.len() != ng) {
            return Err(Error::Ring(format!("monomial {m:?} has wrong length")));
        }
        let index: HashMap<Vec<u32>, usize> =
            basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        if index.len() != basis.len() {
            return Err(Error::Ring("repeated basis monomial".into()));
        }
        let unit = *index
            .get(&vec![0; ng])
            .ok_or_else(|| Error::Ring("missing unit monomial in basis".into()))?;
        let degree_of = |m: &[u32]| -> u32 {
            m.iter().zip(&generators).map(|(e, (_, d))| e * d).sum()
        };
        let degrees: Vec<u32> = basis.iter().map(|m| degree_of(m)).collect();
        if let Some(m) = basis.iter().find(|m| degree_of(m) > top_degree) {
            return Err(Error::Ring(format!("basis monomial {m:?} above top degree")));
        }
        let lookup = |m: &[u32]| {
            index
                .get(m)
                .copied()
                .ok_or_else(|| Error::Ring(format!("monomial {m:?} not in basis")))
        };

        let n = basis.len();
        let mut explicit: Vec<Vec<Option<Vec<(usize, Rational)>>>> = vec![vec![None; n]; n];
        for entry in &table {
            let (i, j) = (lookup(&entry.lhs)?, lookup(&entry.rhs)?);
            let want = degrees[i] + degrees[j];
            let mut value = Vec::new();
            for (m, c) in &entry.value {
                let k = lookup(m)?;
                if c.is_zero() {
                    continue;
                }
                if degrees[k] != want {
                    return Err(Error::Ring(format!(
                        "product {:?}*{:?} has a term of degree {} (expected {want})",
                        entry.lhs, entry.rhs, degrees[k]
                    )));
                }
                value.push((k, c.clone()));
            }
            value.sort_by_key(|(k, _)| *k);
            for (a, b) in [(i, j), (j, i)] {
                match &explicit[a][b] {
                    Some(prev) if *prev != value => {
                        return Err(Error::Ring(format!(
                            "non-commutative table entry for {:?}*{:?}",
                            entry.lhs, entry.rhs
                        )))
                    }
                    _ => explicit[a][b] = Some(value.clone()),
                }
            }
        }
        if let Some(v) = &explicit[unit][unit] {
            if *v != vec![(unit, Rational::one())] {
                return Err(Error::Ring("unit law violated".into()));
            }
        }

        let mut mult = vec![vec![Vec::new(); n]; n];
        for i in 0..n {
            for j in 0..n {
                mult[i][j] = match explicit[i][j].take() {
                    Some(v) => {
                        if (i == unit && v != vec![(j, Rational::one())])
                            || (j == unit && v != vec![(i, Rational::one())])
                        {
                            return Err(Error::Ring("missing unit: unit law violated".into()));
                        }
                        v
                    }
                    None => {
                        let sum: Vec<u32> =
                            basis[i].iter().zip(&basis[j]).map(|(a, b)| a + b).collect();
                        if let Some(&k) = index.get(&sum) {
                            vec![(k, Rational::one())]
                        } else if degrees[i] + degrees[j] > top_degree {
                            Vec::new()
                        } else {
                            return Err(Error::Ring(format!(
                                "table incomplete: no value for {:?}*{:?}",
                                basis[i], basis[j]
                            )));
                        }
                    }
                };
            }
        }

        let mut integ = vec![Rational::zero(); n];
        for (m, c) in integration {
            let k = lookup(&m)?;
            if !c.is_zero() && degrees[k] != top_degree {
                return Err(Error::Ring(format!(
                    "integration support {m:?} outside top degree"
                )));
            }
            integ[k] = c;
        }
        if integ.iter().all(|c| c.is_zero()) {
            return Err(Error::Ring("component ring incomplete: no integration functional".into()));
        }

        let ring = GradedRing {
            generators,
            basis,
            degrees,
            top_degree,
            mult,
            integration: integ,
            unit,
        };
        ring.check_associative()?;
        Ok(Arc::new(ring))
    }

    fn check_associative(&self) -> Result<()> {
        let n = self.basis.len();
        let expand = |terms: &[(usize, Rational)], k: usize| {
            let mut out = vec![Rational::zero(); n];
            for (m, c) in terms {
                for (r, d) in &self.mult[*m][k] {
                    out[*r] += c * d;
                }
            }
            out
        };
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let left = expand(&self.mult[i][j], k);
                    let right = expand(&self.mult[j][k], i);
                    if left != right {
                        return Err(Error::Ring(format!(
                            "table not associative on {:?},{:?},{:?}",
                            self.basis[i], self.basis[j], self.basis[k]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Cohomology of a point.
    pub fn point() -> Arc<GradedRing> {
        Self::from_presentation(vec![], vec![vec![]], vec![], 0, vec![(vec![], Rational::one())])
            .expect("point ring")
    }

    /// `H*(P^n) = Q[h]/(h^{n+1})` with `∫ h^n = 1`.
    pub fn projective(n: u32, name: &str) -> Arc<GradedRing> {
        Self::from_presentation(
            vec![(name.to_string(), 1)],
            (0..=n).map(|k| vec![k]).collect(),
            vec![],
            n,
            vec![(vec![n], Rational::one())],
        )
        .expect("projective ring")
    }

    /// Tensor product; generators of `b` follow those of `a`.
    pub fn tensor(a: &GradedRing, b: &GradedRing) -> Result<Arc<GradedRing>> {
        let mut generators = a.generators.clone();
        generators.extend(b.generators.iter().cloned());
        let join = |x: &[u32], y: &[u32]| [x, y].concat();
        let mut basis = Vec::new();
        for ma in &a.basis {
            for mb in &b.basis {
                basis.push(join(ma, mb));
            }
        }
        let mut table = Vec::new();
        for (i1, a1) in a.basis.iter().enumerate() {
            for (j1, b1) in b.basis.iter().enumerate() {
                for (i2, a2) in a.basis.iter().enumerate() {
                    for (j2, b2) in b.basis.iter().enumerate() {
                        let mut value = Vec::new();
                        for (ka, ca) in &a.mult[i1][i2] {
                            for (kb, cb) in &b.mult[j1][j2] {
                                value.push((join(&a.basis[*ka], &b.basis[*kb]), ca * cb));
                            }
                        }
                        table.push(TableEntry {
                            lhs: join(a1, b1),
                            rhs: join(a2, b2),
                            value,
                        });
                    }
                }
            }
        }
        let mut integration = Vec::new();
        for (i, ma) in a.basis.iter().enumerate() {
            for (j, mb) in b.basis.iter().enumerate() {
                let c = &a.integration[i] * &b.integration[j];
                if !c.is_zero() {
                    integration.push((join(ma, mb), c));
                }
            }
        }
        Self::from_presentation(generators, basis, table, a.top_degree + b.top_degree, integration)
    }

    pub fn generators(&self) -> &[(String, u32)] {
        &self.generators
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.basis
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn degree(&self, i: usize) -> u32 {
        self.degrees[i]
    }

    pub fn top_degree(&self) -> u32 {
        self.top_degree
    }

    pub fn unit_index(&self) -> usize {
        self.unit
    }

    pub fn index_of(&self, monomial: &[u32]) -> Option<usize> {
        self.basis.iter().position(|m| m == monomial)
    }

    pub fn product(&self, i: usize, j: usize) -> &[(usize, Rational)] {
        &self.mult[i][j]
    }

    pub fn integral(&self, i: usize) -> &Rational {
        &self.integration[i]
    }

    /// The explicit table, for serialization.
    pub fn table_entries(&self) -> Vec<TableEntry> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            for j in i..self.len() {
                let terms = &self.mult[i][j];
                let sum: Vec<u32> =
                    self.basis[i].iter().zip(&self.basis[j]).map(|(a, b)| a + b).collect();
                let implicit = match self.index_of(&sum) {
                    Some(k) => *terms == vec![(k, Rational::one())],
                    None => terms.is_empty() && self.degrees[i] + self.degrees[j] > self.top_degree,
                };
                if !implicit {
                    out.push(TableEntry {
                        lhs: self.basis[i].clone(),
                        rhs: self.basis[j].clone(),
                        value: terms.iter().map(|(k, c)| (self.basis[*k].clone(), c.clone())).collect(),
                    });
                }
            }
        }
        out
    }

    pub fn integration_entries(&self) -> Vec<(Vec<u32>, Rational)> {
        self.basis
            .iter()
            .zip(&self.integration)
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect()
    }

    /// Gram matrix of the integration pairing on the basis.
    pub fn gram(&self) -> Vec<Vec<Rational>> {
        let n = self.len();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        self.mult[i][j]
                            .iter()
                            .fold(Rational::zero(), |acc, (k, c)| acc + c * &self.integration[*k])
                    })
                    .collect()
            })
            .collect()
    }
}

/// Inverse of a square rational matrix by Gauss–Jordan; `None` when singular.
pub(crate) fn invert_matrix(m: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        let inv = Rational::one() / &a[col][col];
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (x, p) in a[r].iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    #[test]
    fn point_and_projective_line() {
        let pt = GradedRing::point();
        assert_eq!(pt.len(), 1);
        let p1 = GradedRing::projective(1, "h");
        assert_eq!(p1.product(1, 1), &[]);
        assert_eq!(p1.integral(1), &rat(1, 1));
    }

    #[test]
    fn rejects_degree_violating_table() {
        let err = GradedRing::from_presentation(
            vec![("h".into(), 1)],
            vec![vec![0], vec![1]],
            vec![TableEntry {
                lhs: vec![1],
                rhs: vec![1],
                value: vec![(vec![1], rat(1, 1))],
            }],
            1,
            vec![(vec![1], rat(1, 1))],
        );
        assert!(matches!(err, Err(Error::Ring(_))));
    }

    #[test]
    fn rejects_missing_unit_and_bad_integration() {
        let no_unit = GradedRing::from_presentation(
            vec![("h".into(), 1)],
            vec![vec![1]],
            vec![],
            1,
            vec![(vec![1], rat(1, 1))],
        );
        assert!(no_unit.is_err());
        let low = GradedRing::from_presentation(
            vec![("h".into(), 1)],
            vec![vec![0], vec![1]],
            vec![],
            1,
            vec![(vec![0], rat(1, 1))],
        );
        assert!(low.is_err());
        let none = GradedRing::from_presentation(
            vec![("h".into(), 1)],
            vec![vec![0], vec![1]],
            vec![],
            1,
            vec![],
        );
        assert!(matches!(none, Err(Error::Ring(m)) if m.contains("incomplete")));
    }

    #[test]
    fn rejects_non_commutative_entries() {
        let gens = vec![("a".into(), 1), ("b".into(), 1)];
        let basis = vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]];
        let entry = |l: Vec<u32>, r: Vec<u32>, c| TableEntry {
            lhs: l,
            rhs: r,
            value: vec![(vec![1, 1], c)],
        };
        let table = vec![
            entry(vec![1, 0], vec![0, 1], rat(1, 1)),
            entry(vec![0, 1], vec![1, 0], rat(2, 1)),
        ];
        let r = GradedRing::from_presentation(gens, basis, table, 2, vec![(vec![1, 1], rat(1, 1))]);
        assert!(matches!(r, Err(Error::Ring(m)) if m.contains("non-commutative")));
    }

    #[test]
    fn tensor_of_lines() {
        let p1 = GradedRing::projective(1, "a");
        let q1 = GradedRing::projective(1, "b");
        let r = GradedRing::tensor(&p1, &q1).unwrap();
        assert_eq!(r.len(), 4);
        assert_eq!(r.top_degree(), 2);
        let ab = r.index_of(&[1, 1]).unwrap();
        assert_eq!(r.integral(ab), &rat(1, 1));
        let a = r.index_of(&[1, 0]).unwrap();
        assert!(r.product(a, a).is_empty());
    }

    #[test]
    fn matrix_inverse() {
        let m = vec![vec![rat(0, 1), rat(1, 1)], vec![rat(1, 1), rat(0, 1)]];
        assert_eq!(invert_matrix(&m).unwrap(), m);
        assert!(invert_matrix(&[vec![rat(0, 1)]]).is_none());
    }
}
