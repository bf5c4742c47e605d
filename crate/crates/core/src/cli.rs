//! Command-line surface. Every command prints one JSON report.

use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::action::{parse_action_spec, projective_space_spec, spec_to_json, ActionSpec, EdgeDatum};
use crate::algebra::{format_rational, parse_rational, Rational};
use crate::assembly::{gw_invariant, parse_insertions, InvariantOptions};
use crate::edge::{edge_report, EdgeInputs};
use crate::error::{Error, Result};
use crate::graphs::enumerate_triples;
use crate::oracles::selftest;

pub const SCHEMA: &str = "gwloc/1";

#[derive(Parser, Debug)]
#[command(name = "gwloc", version, about = "Genus-0 equivariant Gromov-Witten invariants by C*-localization")]
struct Cli {
    /// Indent the JSON report.
    #[arg(long, global = true)]
    pretty: bool,
    /// Worker threads for graph evaluation.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Omit `duration_ms` so identical inputs give identical bytes.
    #[arg(long, global = true)]
    no_timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enumerate the minimal labeled triples for (n, β).
    Graphs {
        #[arg(long)]
        config: String,
        #[arg(long)]
        beta: String,
        #[arg(long)]
        n: usize,
    },
    /// Euler class and K-class summands of one edge.
    Edge {
        #[arg(long)]
        config: String,
        /// `U-V` or `U-V:k` with component ids and multiple `k` of the
        /// primitive orbit class.
        #[arg(long)]
        omega: String,
        /// Covering degree `n[/m]` onto the orbit closure; overrides `k`.
        #[arg(long)]
        cover: Option<String>,
    },
    /// ⟨τ_{a_1}γ_1 … τ_{a_n}γ_n⟩_{0,β}.
    Invariant {
        #[arg(long)]
        config: String,
        #[arg(long)]
        beta: String,
        #[arg(long, allow_hyphen_values = true)]
        insertions: String,
        #[arg(long)]
        breakdown: bool,
    },
    /// Print the generated config of P^N with the given weights.
    Pn {
        #[arg(long)]
        dim: u32,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        weights: Vec<i64>,
    },
    /// Run the oracle suite.
    Selftest,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Graphs { .. } => "graphs",
            Command::Edge { .. } => "edge",
            Command::Invariant { .. } => "invariant",
            Command::Pn { .. } => "pn",
            Command::Selftest => "selftest",
        }
    }
}

struct Loaded {
    spec: ActionSpec,
    digest: String,
}

fn load(path: &str) -> Result<Loaded> {
    let bytes = std::fs::read(path).map_err(|e| Error::Config(format!("{path}: {e}")))?;
    let text = String::from_utf8(bytes.clone()).map_err(|e| Error::Config(format!("{path}: {e}")))?;
    Ok(Loaded {
        spec: parse_action_spec(&text)?,
        digest: hex::encode(Sha256::digest(&bytes)),
    })
}

fn parse_beta(s: &str) -> Result<Vec<Rational>> {
    s.split(',').map(|x| parse_rational(x.trim())).collect()
}

fn parse_cover(s: &str) -> Result<(u64, u64)> {
    let bad = || Error::Config(format!("malformed cover {s:?}"));
    let (n, m) = s.split_once('/').unwrap_or((s, "1"));
    let n: u64 = n.trim().parse().map_err(|_| bad())?;
    let m: u64 = m.trim().parse().map_err(|_| bad())?;
    if n == 0 || m == 0 {
        return Err(bad());
    }
    Ok((n, m))
}

fn edge_datum(spec: &ActionSpec, omega: &str, cover: Option<&str>) -> Result<EdgeDatum> {
    let (ends, k) = match omega.split_once(':') {
        Some((e, k)) => (e, Some(k.trim().parse::<u64>().map_err(|_| Error::Config(format!("malformed multiple in {omega:?}")))?)),
        None => (omega, None),
    };
    let (u, v) = ends
        .split_once('-')
        .ok_or_else(|| Error::Config(format!("omega must be U-V, got {omega:?}")))?;
    let find = |id: &str| {
        spec.component_index(id.trim())
            .ok_or_else(|| Error::Config(format!("unknown component {id:?}")))
    };
    let (u, v) = (find(u)?, find(v)?);
    let index = spec
        .edges
        .iter()
        .position(|e| (e.from, e.to) == (u, v) || (e.from, e.to) == (v, u))
        .ok_or_else(|| Error::Config(format!("no moment-graph edge joins {omega:?}")))?;
    let k = match cover {
        Some(c) => {
            let (n, m) = parse_cover(c)?;
            let stab = spec.edges[index].stab;
            if (n * stab) % m != 0 {
                return Err(Error::Config(format!("cover {c} is not k/{stab} for an integer k")));
            }
            n * stab / m
        }
        None => k.unwrap_or(1),
    };
    if k == 0 {
        return Err(Error::Config("edge multiple must be positive".into()));
    }
    Ok(EdgeDatum::edge(index, k, spec))
}

fn execute(cli: &Cli) -> Result<(Value, Option<String>, Vec<String>)> {
    match &cli.command {
        Command::Graphs { config, beta, n } => {
            let l = load(config)?;
            let beta = parse_beta(beta)?;
            let ts = enumerate_triples(&l.spec, *n, &beta)?;
            let list: Vec<Value> = ts.iter().map(|t| t.to_json(&l.spec)).collect();
            Ok((json!({"count": ts.len(), "triples": list}), Some(l.digest), vec![]))
        }
        Command::Edge { config, omega, cover } => {
            let l = load(config)?;
            let d = edge_datum(&l.spec, omega, cover.as_deref())?;
            let mut r = edge_report(&EdgeInputs::for_datum(&l.spec, &d)?)?;
            let diagnostics = match r.get_mut("diagnostics").map(Value::take) {
                Some(Value::Array(v)) => v.into_iter().filter_map(|x| x.as_str().map(String::from)).collect(),
                _ => vec![],
            };
            if let Some(o) = r.as_object_mut() {
                o.remove("diagnostics");
                o.insert("k".into(), json!(d.k));
                o.insert("class".into(), json!(d.class.iter().map(format_rational).collect::<Vec<_>>()));
            }
            Ok((r, Some(l.digest), diagnostics))
        }
        Command::Invariant {
            config,
            beta,
            insertions,
            breakdown,
        } => {
            let l = load(config)?;
            let beta = parse_beta(beta)?;
            let ins = parse_insertions(insertions)?;
            let opts = InvariantOptions {
                jobs: cli.jobs,
                breakdown: *breakdown,
            };
            let r = gw_invariant(&l.spec, &beta, &ins, &opts)?;
            let mut v = r.to_json(&l.spec);
            if let Some(o) = v.as_object_mut() {
                o.remove("duration_ms");
            }
            let diagnostics = if r.numerical {
                vec![]
            } else {
                vec![format!("insertion degrees do not match vdim {}; total is a class in t", r.vdim)]
            };
            Ok((v, Some(l.digest), diagnostics))
        }
        Command::Pn { .. } => unreachable!("handled before the report wrapper"),
        Command::Selftest => {
            let reports = selftest();
            let failed = reports.iter().filter(|r| !r.passed()).count();
            let v = json!({
                "passed": reports.len() - failed,
                "failed": failed,
                "reports": reports,
            });
            if failed > 0 {
                return Err(Error::Invalid(format!("{failed} oracle comparisons failed: {v}")));
            }
            Ok((v, None, vec![]))
        }
    }
}

fn render(v: &Value, pretty: bool) -> String {
    if pretty {
        serde_json::to_string_pretty(v).unwrap_or_default()
    } else {
        v.to_string()
    }
}

/// Runs the command line `argv` (program name first) and returns the exit
/// code with the text for standard output.
pub fn run<I, T>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (code, e.render().to_string());
        }
    };
    if let Command::Pn { dim, weights } = &cli.command {
        return match projective_space_spec(*dim, weights).and_then(|s| spec_to_json(&s)) {
            Ok(text) => (0, text),
            Err(e) => {
                let v = json!({"schema": SCHEMA, "command": "pn", "error": {"kind": "config", "message": e.to_string()}});
                (2, render(&v, cli.pretty))
            }
        };
    }
    let start = Instant::now();
    let out = execute(&cli);
    let mut report = json!({"schema": SCHEMA, "command": cli.command.name()});
    let code = match out {
        Ok((result, digest, diagnostics)) => {
            report["config_digest"] = digest.map(Value::String).unwrap_or(Value::Null);
            report["result"] = result;
            report["diagnostics"] = json!(diagnostics);
            0
        }
        Err(e) => {
            let kind = if e.is_config() { "config" } else { "computation" };
            report["error"] = json!({"kind": kind, "message": e.to_string()});
            if e.is_config() {
                2
            } else {
                1
            }
        }
    };
    if !cli.no_timing {
        report["duration_ms"] = json!(start.elapsed().as_millis() as u64);
    }
    (code, render(&report, cli.pretty))
}
