//! Command-line surface.  Network files and outputs are JSON documents;
//! rationals are strings `"p/q"` (or `"p"`) in lowest terms.

use crate::combinat::enumerate_noncrossing;
use crate::electrical::{lstar_from_resistance, resistance_matrix, response_matrix};
use crate::error::{input, precondition, Error, Result};
use crate::grassmann::{
    chart_from_lstar, chart_from_response, extract_symmetric, is_isotropic, is_totally_nonnegative, kappa,
    kernel_dimension_of_kappa, lam_map, omega, representative, Chart, ExteriorVector,
};
use crate::groves::{electrically_equivalent, lambda_value, lambda_vector};
use crate::network::{boundary_name, dual, is_minimal, medial_strands, ydelta, CactusNetwork, Direction, Edge, Site};
use crate::{RationalMatrix, Q};
use clap::{Parser, Subcommand, ValueEnum};
use num_traits::Zero;
use serde::Deserialize;
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

#[derive(Debug, Parser)]
#[command(name = "cactus", version, about = "Exact electrical invariants of cactus networks")]
pub struct Cli {
    /// Print each document on a single line.
    #[arg(long, global = true)]
    pub compact: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a network file; exit 0 iff it is valid.
    Validate { file: PathBuf },
    /// Nonzero grove measurements, in canonical partition order.
    Lambda { file: PathBuf },
    /// Response matrix, one row per shape block.
    Response { file: PathBuf },
    /// Effective resistances between boundary labels.
    Resistance { file: PathBuf },
    /// The dual response matrix L* computed from resistances.
    Lstar { file: PathBuf },
    /// Plücker coordinates of the network's point.
    Plucker {
        file: PathBuf,
        /// Also apply κ and report whether the result vanishes.
        #[arg(long)]
        check_isotropy: bool,
    },
    /// Isotropy of the network's point.
    Isotropy { file: PathBuf },
    /// Total nonnegativity of the network's point.
    Tnn { file: PathBuf },
    /// Chart representative built from the response or resistance matrix.
    Chart {
        file: PathBuf,
        #[arg(long, value_enum)]
        from: ChartSource,
    },
    /// Symmetric matrix read off a chart of the network's point.
    Extract {
        file: PathBuf,
        #[arg(long, value_enum)]
        chart: ChartArg,
    },
    /// Apply one Y-Δ move and write the new network.
    Ydelta {
        file: PathBuf,
        /// A vertex name (ytod) or three comma-separated edge ids (dtoy).
        #[arg(long)]
        site: String,
        #[arg(long, value_enum)]
        direction: DirectionArg,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Write the dual network.
    Dual {
        file: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Medial pairing of the boundary points.
    Medial { file: PathBuf },
    /// Whether the medial graph is minimal.
    Minimal { file: PathBuf },
    /// Whether two networks are electrically equivalent.
    Equiv { first: PathBuf, second: PathBuf },
    /// Dimension of the kernel of κ.
    KernelDim {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ChartSource {
    Response,
    Resistance,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ChartArg {
    NotShorted,
    Connected,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum DirectionArg {
    Ytod,
    Dtoy,
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn format_q(x: &Q) -> String {
    x.to_string()
}

pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Input(format!("bad rational {s:?}"));
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let p: num_bigint::BigInt = p.parse().map_err(|_| bad())?;
    let q: num_bigint::BigInt = q.parse().map_err(|_| bad())?;
    if q == 0.into() {
        return Err(bad());
    }
    Ok(Q::new(p, q))
}

fn value_to_q(v: &Value) -> Result<Q> {
    match v {
        Value::String(s) => parse_q(s),
        Value::Number(x) => match x.as_i64() {
            Some(i) => Ok(Q::from_integer(i.into())),
            None => input(format!("conductance {x} must be an integer or a \"p/q\" string")),
        },
        other => input(format!("conductance {other} must be a string")),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeFile {
    id: String,
    ends: [String; 2],
    conductance: Value,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NetworkFile {
    n: usize,
    shape: Vec<Vec<usize>>,
    #[serde(default)]
    internal_vertices: Vec<String>,
    #[serde(default)]
    edges: Vec<EdgeFile>,
    #[serde(default)]
    rotations: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    moves: u32,
}

/// Parse a network document.  Structural validity is not checked here.
pub fn parse_network(text: &str) -> Result<CactusNetwork> {
    let file: NetworkFile = serde_json::from_str(text).map_err(|e| Error::Input(format!("network file: {e}")))?;
    let edges = file
        .edges
        .into_iter()
        .map(|e| {
            Ok(Edge {
                conductance: value_to_q(&e.conductance)?,
                id: e.id,
                ends: e.ends,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CactusNetwork {
        n: file.n,
        shape_blocks: file.shape,
        internal_vertices: file.internal_vertices,
        edges,
        rotations: file.rotations,
        moves: file.moves,
    })
}

pub fn network_to_value(net: &CactusNetwork) -> Value {
    let edges: Vec<Value> = net
        .edges
        .iter()
        .map(|e| json!({"id": e.id, "ends": e.ends, "conductance": format_q(&e.conductance)}))
        .collect();
    let mut order: Vec<String> = (1..=net.n).map(boundary_name).collect();
    order.extend(net.internal_vertices.iter().cloned());
    order.extend(net.rotations.keys().filter(|k| !order.contains(k)).cloned().collect::<Vec<_>>());
    let mut rotations = Map::new();
    for v in order {
        if let Some(r) = net.rotations.get(&v) {
            rotations.insert(v, json!(r));
        }
    }
    json!({
        "n": net.n,
        "shape": net.shape_blocks,
        "internal_vertices": net.internal_vertices,
        "edges": edges,
        "rotations": rotations,
        "moves": net.moves,
    })
}

pub fn render(v: &Value, compact: bool) -> String {
    let mut s = if compact {
        serde_json::to_string(v)
    } else {
        serde_json::to_string_pretty(v)
    }
    .expect("JSON values always serialize");
    s.push('\n');
    s
}

pub fn matrix_to_value(m: &RationalMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|r| Value::Array(m.row(r).iter().map(|x| Value::String(format_q(x))).collect()))
            .collect(),
    )
}

pub fn exterior_to_value(v: &ExteriorVector) -> Value {
    let mut map = Map::new();
    for (k, x) in v.to_key_map() {
        map.insert(k, Value::String(format_q(&x)));
    }
    Value::Object(map)
}

fn read_network(path: &Path) -> Result<CactusNetwork> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    parse_network(&text)
}

fn labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| i.to_string()).collect()
}

fn image(net: &CactusNetwork) -> Result<ExteriorVector> {
    Ok(lam_map(net.n, &lambda_vector(net)?))
}

fn emit_network(net: &CactusNetwork, output: &Option<PathBuf>, compact: bool) -> Result<Value> {
    let doc = network_to_value(net);
    match output {
        Some(path) => {
            std::fs::write(path, render(&doc, compact)).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
            Ok(json!({"output": path.display().to_string()}))
        }
        None => Ok(doc),
    }
}

fn execute(cli: &Cli) -> Result<(Value, i32)> {
    let ok = |v: Value| Ok((v, 0));
    match &cli.command {
        Command::Validate { file } => {
            let net = read_network(file)?;
            let report = net.validate();
            let checks: Vec<Value> = report
                .checks
                .iter()
                .map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail}))
                .collect();
            let code = if report.is_valid() { 0 } else { 1 };
            Ok((json!({"valid": report.is_valid(), "checks": checks}), code))
        }
        Command::Lambda { file } => {
            let net = read_network(file)?;
            let lam = lambda_vector(&net)?;
            let mut map = Map::new();
            for s in enumerate_noncrossing(net.n) {
                let x = lambda_value(&lam, &s);
                if !x.is_zero() {
                    map.insert(s.key(), Value::String(format_q(&x)));
                }
            }
            ok(json!({"n": net.n, "lambda": map}))
        }
        Command::Response { file } => {
            let net = read_network(file)?;
            let l = response_matrix(&net)?;
            let shape = net.shape()?;
            let rows: Vec<String> = shape
                .blocks()
                .iter()
                .map(|b| b.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
                .collect();
            ok(json!({"rows": rows, "matrix": matrix_to_value(&l)}))
        }
        Command::Resistance { file } => {
            let net = read_network(file)?;
            ok(json!({"rows": labels(net.n), "matrix": matrix_to_value(&resistance_matrix(&net)?)}))
        }
        Command::Lstar { file } => {
            let net = read_network(file)?;
            let ls = lstar_from_resistance(&resistance_matrix(&net)?)?;
            ok(json!({"rows": labels(net.n), "matrix": matrix_to_value(&ls)}))
        }
        Command::Plucker { file, check_isotropy } => {
            let net = read_network(file)?;
            let v = image(&net)?;
            let mut doc = json!({"n": net.n, "degree": v.degree(), "coordinates": exterior_to_value(&v)});
            if *check_isotropy {
                let k = kappa(&omega(net.n), &v)?;
                doc["kappa"] = json!(if k.is_zero() { "zero" } else { "nonzero" });
            }
            ok(doc)
        }
        Command::Isotropy { file } => {
            let net = read_network(file)?;
            let v = image(&net)?;
            let k = kappa(&omega(net.n), &v)?;
            let rep = representative(&v)?;
            let iso = is_isotropic(&rep, &omega(net.n))?;
            ok(json!({
                "kappa": if k.is_zero() { "zero" } else { "nonzero" },
                "isotropic": k.is_zero() && iso,
            }))
        }
        Command::Tnn { file } => {
            let net = read_network(file)?;
            ok(json!({"totally_nonnegative": is_totally_nonnegative(&image(&net)?)?}))
        }
        Command::Chart { file, from } => {
            let net = read_network(file)?;
            let (name, m) = match from {
                ChartSource::Response => {
                    if !net.shape()?.is_singletons() {
                        return precondition("the response chart needs a network with no shorted boundary vertices");
                    }
                    ("not-shorted", chart_from_response(&response_matrix(&net)?)?)
                }
                ChartSource::Resistance => {
                    let ls = lstar_from_resistance(&resistance_matrix(&net)?)?;
                    ("connected", chart_from_lstar(&ls)?)
                }
            };
            ok(json!({"chart": name, "matrix": matrix_to_value(&m)}))
        }
        Command::Extract { file, chart } => {
            let net = read_network(file)?;
            let rep = representative(&image(&net)?)?;
            let (name, chart) = match chart {
                ChartArg::NotShorted => ("not-shorted", Chart::NotShorted),
                ChartArg::Connected => ("connected", Chart::Connected),
            };
            let m = extract_symmetric(&rep, chart)?;
            ok(json!({"chart": name, "rows": labels(net.n), "matrix": matrix_to_value(&m)}))
        }
        Command::Ydelta { file, site, direction, output } => {
            let net = read_network(file)?;
            let direction = match direction {
                DirectionArg::Ytod => Direction::YToDelta,
                DirectionArg::Dtoy => Direction::DeltaToY,
            };
            let out = ydelta(&net, &Site::parse(site, direction)?, direction)?;
            ok(emit_network(&out, output, cli.compact)?)
        }
        Command::Dual { file, output } => {
            let net = read_network(file)?;
            ok(emit_network(&dual(&net)?, output, cli.compact)?)
        }
        Command::Medial { file } => {
            let net = read_network(file)?;
            let m = medial_strands(&net)?;
            let pairs: Vec<[usize; 2]> = m.pairing.pairs().iter().map(|&(a, b)| [a, b]).collect();
            ok(json!({"pairing": pairs, "closed_strands": m.closed_strands}))
        }
        Command::Minimal { file } => {
            let net = read_network(file)?;
            ok(json!({"minimal": is_minimal(&net)?}))
        }
        Command::Equiv { first, second } => {
            let (a, b) = (read_network(first)?, read_network(second)?);
            let f = electrically_equivalent(&a, &b)?;
            ok(json!({"equivalent": f.is_some(), "factor": f.map(|x| format_q(&x))}))
        }
        Command::KernelDim { n } => ok(json!({"n": n, "dimension": kernel_dimension_of_kappa(*n)?})),
    }
}

/// Run one command line (program name first) without touching the process.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: 1, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    match execute(&cli) {
        Ok((doc, code)) => Outcome {
            code,
            stdout: render(&doc, cli.compact),
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: e.exit_code(),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::electrical::linalg::{q, qr};
    use crate::network::fixtures::*;

    #[test]
    fn rationals() {
        assert_eq!(parse_q("6/4").unwrap(), qr(3, 2));
        assert_eq!(parse_q(" -2 ").unwrap(), q(-2));
        assert_eq!(format_q(&qr(3, -6)), "-1/2");
        assert_eq!(format_q(&q(4)), "4");
        for bad in ["", "1/0", "x", "1/2/3"] {
            assert_eq!(parse_q(bad).unwrap_err().exit_code(), 1, "{bad}");
        }
    }

    #[test]
    fn network_round_trip() {
        for net in [y123(), delta_1_half_third(), cactus6_123(), parallel_pair(q(1), qr(2, 7))] {
            let text = render(&network_to_value(&net), false);
            assert_eq!(parse_network(&text).unwrap(), net);
            let text = render(&network_to_value(&net), true);
            assert_eq!(text.lines().count(), 1);
            assert_eq!(parse_network(&text).unwrap(), net);
        }
    }

    #[test]
    fn integer_conductances_and_defaults() {
        let text = r#"{"n": 2, "shape": [[1], [2]], "edges": [{"id": "e", "ends": ["b1", "b2"], "conductance": 3}],
                       "rotations": {"b1": ["e"], "b2": ["e"]}}"#;
        assert_eq!(parse_network(text).unwrap(), single_edge(q(3)));
    }

    #[test]
    fn malformed_files() {
        for text in ["", "{", r#"{"n": 2}"#, r#"{"n": 1, "shape": [[1]], "extra": 0}"#, r#"{"n": 1, "shape": [[1]], "edges": [{"id": "e", "ends": ["b1", "b1"], "conductance": true}]}"#] {
            assert_eq!(parse_network(text).unwrap_err().exit_code(), 1, "{text}");
        }
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run(["cactus"]).code, 1);
        assert_eq!(run(["cactus", "frobnicate"]).code, 1);
        assert_eq!(run(["cactus", "chart", "x.net", "--from", "nowhere"]).code, 1);
        assert_eq!(run(["cactus", "--help"]).code, 0);
    }

    #[test]
    fn kernel_dim_command() {
        let out = run(["cactus", "--compact", "kernel-dim", "--n", "3"]);
        assert_eq!(out.code, 0);
        assert_eq!(out.stdout, "{\"n\":3,\"dimension\":5}\n");
        assert_eq!(run(["cactus", "kernel-dim", "--n", "9"]).code, 2);
    }

    #[test]
    fn missing_file_is_input_error() {
        let out = run(["cactus", "lambda", "/nonexistent/file.net"]);
        assert_eq!(out.code, 1);
        assert!(out.stderr.starts_with("error: invalid input"));
    }
}
