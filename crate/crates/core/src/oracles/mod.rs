//! Independent ground truth: Kontsevich's recursion, the classical
//! isolated-edge Euler class, direct orbit parametrization and a naive
//! triple enumerator, with exact comparison reports.

mod brute;
mod classical;
mod kontsevich;

use std::collections::BTreeSet;

use serde::Serialize;
use serde_json::{json, Value};

pub use brute::{brute_force_triples, oracle_form};
pub use classical::{classical_edge_euler, classical_projective_edge_euler, orbit_parametrize, OrbitData};
pub use kontsevich::kontsevich_nd;

use crate::action::{build_moment_graph, product_spec, projective_space_spec, trivial_projective_spec, ActionSpec, EdgeDatum};
use crate::algebra::{format_rational, rat, Rational};
use crate::assembly::{gw_invariant, parse_insertions, psi_integral, InvariantOptions};
use crate::edge::{blowup_tangent_delta, edge_euler, EdgeInputs};
use crate::error::Result;
use crate::graphs::enumerate_triples;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    ExactEqual,
    Mismatch,
}

/// One exact oracle/engine comparison.
#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub name: String,
    pub inputs: Value,
    pub oracle: String,
    pub engine: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diff: Option<String>,
}

impl OracleReport {
    pub fn compare(name: &str, inputs: Value, oracle: String, engine: String) -> Self {
        let (verdict, diff) = if oracle == engine {
            (Verdict::ExactEqual, None)
        } else {
            (Verdict::Mismatch, Some(format!("oracle {oracle} vs engine {engine}")))
        };
        OracleReport {
            name: name.to_string(),
            inputs,
            oracle,
            engine,
            verdict,
            diff,
        }
    }

    fn failed(name: &str, inputs: Value, oracle: String, err: impl std::fmt::Display) -> Self {
        OracleReport {
            name: name.to_string(),
            inputs,
            oracle,
            engine: "error".into(),
            verdict: Verdict::Mismatch,
            diff: Some(err.to_string()),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::ExactEqual
    }
}

fn show<T: std::fmt::Display>(r: Result<T>) -> String {
    match r {
        Ok(x) => x.to_string(),
        Err(e) => format!("error: {e}"),
    }
}

/// `N_d` from the recursion against the localization sum `⟨pt^{3d−1}⟩_d`
/// on `P²`.
pub fn check_plane_curves(weights: &[i64], d: u32) -> OracleReport {
    let inputs = json!({"weights": weights, "d": d});
    let oracle = show(kontsevich_nd(d).map(|q| format_rational(&q)));
    let engine = projective_space_spec(2, weights).and_then(|s| {
        let ins = vec![crate::assembly::Insertion::new("pt", 0); 3 * d as usize - 1];
        gw_invariant(&s, &[rat(d as i64, 1)], &ins, &InvariantOptions::default())
    });
    match engine {
        Ok(r) => OracleReport::compare(
            "kontsevich",
            inputs,
            oracle,
            r.value.map(|q| format_rational(&q)).unwrap_or_else(|| r.total.to_string()),
        ),
        Err(e) => OracleReport::failed("kontsevich", inputs, oracle, e),
    }
}

/// Constant term of the engine's edge Euler class against the classical
/// section-weight product, for the coordinate line `p_i p_j` of `P^N`
/// covered `d` times.
pub fn check_edge(weights: &[i64], i: usize, j: usize, d: u64) -> OracleReport {
    let inputs = json!({"weights": weights, "edge": [i, j], "d": d});
    let oracle = show(classical_projective_edge_euler(weights, i, j, d));
    let engine = (|| -> Result<crate::algebra::RationalFunctionT> {
        let spec = projective_space_spec(weights.len() as u32 - 1, weights)?;
        let index = spec
            .edges
            .iter()
            .position(|e| (e.from, e.to) == (i, j))
            .ok_or_else(|| crate::Error::Invalid(format!("no edge {i}->{j}")))?;
        let e = edge_euler(&EdgeInputs::for_datum(&spec, &EdgeDatum::edge(index, d, &spec))?)?;
        Ok(e.coefficient(0, 0).unit_part().clone())
    })();
    match engine {
        Ok(e) => OracleReport::compare("edge-euler", inputs, oracle, e.to_string()),
        Err(e) => OracleReport::failed("edge-euler", inputs, oracle, e),
    }
}

/// Stabilizer and class of every moment-graph edge against the direct
/// parametrization of a point supported on its two ends.
pub fn check_orbits(weights: &[i64]) -> Vec<OracleReport> {
    let mut out = Vec::new();
    let spec = match projective_space_spec(weights.len() as u32 - 1, weights) {
        Ok(s) => s,
        Err(e) => return vec![OracleReport::failed("orbit", json!({"weights": weights}), String::new(), e)],
    };
    let graph = match build_moment_graph(&spec) {
        Ok(g) => g,
        Err(e) => return vec![OracleReport::failed("orbit", json!({"weights": weights}), String::new(), e)],
    };
    for e in &graph.edges {
        let inputs = json!({"weights": weights, "support": [e.from, e.to]});
        let oracle = match orbit_parametrize(weights, &[e.from, e.to]) {
            Ok(o) => {
                let s = o.stabilizer.unwrap_or(0);
                format!("stab {s}, class {}", format_rational(&rat(o.degree, s.max(1) as i64)))
            }
            Err(err) => format!("error: {err}"),
        };
        let engine = format!("stab {}, class {}", e.stab, e.orbit_class.iter().map(format_rational).collect::<Vec<_>>().join(","));
        out.push(OracleReport::compare("orbit", inputs, oracle, engine));
    }
    out
}

/// Set equality of canonical forms between `enumerate_triples` (restricted
/// to at most `e_max` edges) and the brute-force enumerator.
pub fn check_enumeration(spec: &ActionSpec, label: &str, n: usize, beta: &[Rational], e_max: usize) -> OracleReport {
    let inputs = json!({
        "spec": label,
        "n": n,
        "beta": beta.iter().map(format_rational).collect::<Vec<_>>(),
        "e_max": e_max,
    });
    let brute: BTreeSet<String> = brute_force_triples(spec, n, beta, e_max).iter().map(oracle_form).collect();
    let engine = match enumerate_triples(spec, n, beta) {
        Ok(ts) => ts,
        Err(crate::Error::Unstable { .. }) => vec![],
        Err(e) => return OracleReport::failed("enumeration", inputs, brute.len().to_string(), e),
    };
    let kept: Vec<_> = engine.iter().filter(|t| t.edges.len() <= e_max).collect();
    let forms: BTreeSet<String> = kept.iter().map(|t| oracle_form(t)).collect();
    let mut report = OracleReport::compare(
        "enumeration",
        inputs,
        format!("{} triples", brute.len()),
        format!("{} triples", kept.len()),
    );
    if forms != brute || forms.len() != kept.len() {
        report.verdict = Verdict::Mismatch;
        let missing: Vec<_> = brute.difference(&forms).take(3).collect();
        let extra: Vec<_> = forms.difference(&brute).take(3).collect();
        report.diff = Some(format!(
            "{} distinct engine forms; missing from engine {missing:?}; extra in engine {extra:?}",
            forms.len()
        ));
    }
    report
}

fn check_blowups() -> Vec<OracleReport> {
    // Weighted blowup discrepancy: K_{X̃} = π*K_X + (Σ w·r − 1) E.
    let cases: [&[(u64, usize)]; 4] = [&[(1, 2)], &[(1, 1), (2, 1)], &[(1, 3)], &[(2, 1), (3, 2)]];
    let mut out = Vec::new();
    for pieces in cases {
        let disc: i64 = pieces.iter().map(|&(w, r)| w as i64 * r as i64).sum::<i64>() - 1;
        let d = blowup_tangent_delta(pieces);
        out.push(OracleReport::compare(
            "blowup",
            json!({"pieces": pieces}),
            format!("rank 0, c1 {}[E]", -disc),
            format!("rank {}, c1 {}[E]", d.rank(), d.c1_coefficient()),
        ));
    }
    out
}

fn check_psi() -> Vec<OracleReport> {
    let cases: [(&[u32], i64); 3] = [(&[0, 0, 0], 1), (&[1, 0, 0, 0], 1), (&[2, 1, 0, 0, 0, 0], 3)];
    cases
        .iter()
        .map(|(a, v)| {
            OracleReport::compare(
                "psi-integral",
                json!({"a": a}),
                format_rational(&rat(*v, 1)),
                show(psi_integral(a).map(|q| format_rational(&q))),
            )
        })
        .collect()
}

fn check_product() -> OracleReport {
    let inputs = json!({"spec": "P1(0,1) x P1(trivial)", "beta": ["1", "0"], "insertions": "pt|pt, pt|1"});
    let r = (|| -> Result<crate::assembly::InvariantResult> {
        let spec = product_spec(&projective_space_spec(1, &[0, 1])?, &trivial_projective_spec(1)?)?;
        gw_invariant(&spec, &[rat(1, 1), rat(0, 1)], &parse_insertions("pt|pt, pt|1")?, &InvariantOptions::default())
    })();
    match r {
        Ok(r) => OracleReport::compare(
            "product",
            inputs,
            format_rational(&rat(1, 1)),
            r.value.map(|q| format_rational(&q)).unwrap_or_else(|| r.total.to_string()),
        ),
        Err(e) => OracleReport::failed("product", inputs, format_rational(&rat(1, 1)), e),
    }
}

/// The full oracle suite.
pub fn selftest() -> Vec<OracleReport> {
    let mut out = Vec::new();
    out.extend(check_psi());
    for d in 1..=3 {
        out.push(check_plane_curves(&[0, 1, 5], d));
    }
    for d in 1..=3 {
        out.push(check_edge(&[0, 1], 0, 1, d));
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            out.push(check_edge(&[0, 1, 5], i, j, d));
        }
    }
    out.extend(check_orbits(&[0, 1, 5]));
    if let (Ok(p1), Ok(p2)) = (projective_space_spec(1, &[0, 1]), projective_space_spec(2, &[0, 1, 5])) {
        for (beta, n) in [(0, 3), (1, 0), (1, 2), (2, 1), (3, 0)] {
            out.push(check_enumeration(&p1, "P1(0,1)", n, &[rat(beta, 1)], 4));
        }
        for (beta, n) in [(0, 3), (1, 2), (2, 0), (5, 0)] {
            out.push(check_enumeration(&p2, "P2(0,1,5)", n, &[rat(beta, 1)], 4));
        }
    }
    out.extend(check_blowups());
    out.push(check_product());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_oracle_agrees() {
        assert!(check_edge(&[0, 1], 0, 1, 2).passed());
        assert!(check_edge(&[0, 1, 5], 1, 2, 3).passed());
    }

    #[test]
    fn orbit_oracle_agrees() {
        assert!(check_orbits(&[0, 1, 5]).iter().all(|r| r.passed()));
    }

    #[test]
    fn enumeration_oracle_agrees() {
        let p1 = projective_space_spec(1, &[0, 1]).unwrap();
        let r = check_enumeration(&p1, "P1", 2, &[rat(1, 1)], 2);
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn mismatch_is_reported() {
        let r = OracleReport::compare("x", json!({}), format_rational(&rat(1, 1)), "2".into());
        assert_eq!(r.verdict, Verdict::Mismatch);
        assert!(r.diff.is_some());
    }
}
