//! `ramanet`: scan for admissible moduli, build colored Cayley graphs on
//! `PSL(2, F_N)`, verify their spectra and square structure, and run the
//! transmission simulator over them.
//!
//! Exit codes: 0 success, 1 empty result, 2 invalid input, 3 failed
//! verification.

use std::fs;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use ramanet::cayley::{build_colored_cayley, verify_square_property, AuditMode, ColoredCayleyGraph, GroupContext, SquareReport, MAX_VERTICES};
use ramanet::generators::{hilbert_generators, lps_generators, square_table, GeneratorSetDoc, SquareTable};
use ramanet::graph::{ColoredGraph, GraphSummary};
use ramanet::numbertheory::{certify, is_prime, legendre, scan_rational, scan_valid_n, SplitPrime};
use ramanet::protocol::{disperse, reconstruct, send_with_cross_check, verify, DispersalSet, Transcript};
use ramanet::spectral::{analyze, spectrum_csv, AnalyzeConfig, LanczosConfig, SpectralReport, DENSE_CAP, RAMANUJAN_TOL};
use ramanet::SCHEMA_VERSION;

/// Environment variable fixing the worker thread count.
const THREADS_ENV: &str = "RAMANET_THREADS";

const EXIT_EMPTY: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_FAILED: u8 = 3;

#[derive(Parser)]
#[command(name = "ramanet", version, about = "Explicit Ramanujan networks from quaternion arithmetic")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List primes N that admit the networks for the given norm prime(s).
    Scan(ScanArgs),
    /// Build the colored Cayley graph and write its files.
    Build(BuildArgs),
    /// Audit, spectrally verify, and square-check a graph.
    Verify(VerifyArgs),
    /// Send a payload with cross-channel checking and disperse it as shares.
    Protocol(ProtocolArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
enum Field {
    #[value(name = "Q")]
    Q,
    #[value(name = "Q_sqrt5")]
    QSqrt5,
}

#[derive(Args, Clone, Debug)]
struct NetworkArgs {
    #[arg(long, value_enum, default_value = "Q")]
    field: Field,
    /// Norm prime of the first color.
    #[arg(long)]
    p: Option<u64>,
    /// Norm prime of a second color (rational field only).
    #[arg(long)]
    q: Option<u64>,
    /// The prime N; vertices are PSL(2, F_N).
    #[arg(long = "N")]
    n: Option<u64>,
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long, value_enum, default_value = "Q")]
    field: Field,
    #[arg(long)]
    p: u64,
    #[arg(long)]
    q: Option<u64>,
    /// Largest N examined.
    #[arg(long)]
    limit: u64,
    /// Also write the certificates as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct BuildArgs {
    #[command(flatten)]
    net: NetworkArgs,
    /// Directory for edges.txt, graph.dot, summary.json, generator and table JSON.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Edge-list file to verify instead of building from parameters.
    #[arg(long, conflicts_with_all = ["p", "q", "n"])]
    graph: Option<PathBuf>,
    #[command(flatten)]
    net: NetworkArgs,
    #[arg(long, default_value_t = DENSE_CAP)]
    dense_cap: usize,
    /// Slack in |λ| ≤ 2√(r−1) + tol.
    #[arg(long, default_value_t = RAMANUJAN_TOL)]
    tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Vertices sampled by the square audit.
    #[arg(long, default_value_t = 32)]
    square_samples: usize,
    /// Audit squares at every vertex.
    #[arg(long)]
    square_exhaustive: bool,
    /// Write the report here instead of stdout.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Write dense spectra as spectrum-<color>.csv into this directory.
    #[arg(long)]
    csv_dir: Option<PathBuf>,
}

#[derive(Args)]
struct ProtocolArgs {
    #[command(flatten)]
    net: NetworkArgs,
    /// File whose bytes are sent.
    #[arg(long)]
    payload: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    src: usize,
    /// Destination vertex; defaults to the last vertex.
    #[arg(long)]
    dst: Option<usize>,
    /// Number of dispersal shares.
    #[arg(long, default_value_t = 2)]
    g: usize,
    /// Random-walk length of each share's route.
    #[arg(long, default_value_t = 16)]
    walk: usize,
    /// Write the transcript here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Re-verify a saved transcript against the graph instead of sending.
    #[arg(long, conflicts_with = "payload")]
    check: Option<PathBuf>,
}

/// A command failure carrying its exit code.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_INVALID, message: message.into() }
}

fn io_failure(path: &Path, e: impl std::fmt::Display) -> Failure {
    invalid(format!("{}: {e}", path.display()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(f) = configure_threads() {
        eprintln!("error: {}", f.message);
        return ExitCode::from(f.code);
    }
    let result = match cli.command {
        Command::Scan(a) => cmd_scan(&a),
        Command::Build(a) => cmd_build(&a),
        Command::Verify(a) => cmd_verify(&a),
        Command::Protocol(a) => cmd_protocol(&a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var(THREADS_ENV) else { return Ok(()) };
    let n: usize = v.parse().map_err(|_| invalid(format!("{THREADS_ENV}={v:?} is not a thread count")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| invalid(format!("thread pool: {e}")))
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn emit(text: &str, path: Option<&Path>) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| io_failure(p, e)),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| invalid(format!("stdout: {e}"))),
    }
}

#[derive(Serialize)]
struct ScanReport<T: Serialize> {
    schema_version: u32,
    field: Field,
    primes: Vec<u64>,
    limit: u64,
    certificates: Vec<T>,
}

fn cmd_scan(a: &ScanArgs) -> Result<u8, Failure> {
    let (count, json, table) = match a.field {
        Field::Q => {
            let primes: Vec<u64> = std::iter::once(a.p).chain(a.q).collect();
            let certs = scan_rational(&primes, a.limit).map_err(|e| invalid(e.to_string()))?;
            let mut table = String::from("N\tsqrt(-1)\n");
            for c in &certs {
                table.push_str(&format!("{}\t{}\n", c.n, c.sqrt_m1));
            }
            let report = ScanReport { schema_version: SCHEMA_VERSION, field: a.field, primes, limit: a.limit, certificates: certs };
            (report.certificates.len(), to_json(&report), table)
        }
        Field::QSqrt5 => {
            if a.q.is_some() {
                return Err(invalid("--q applies to the rational field only"));
            }
            let certs = scan_valid_n(a.p, a.limit).map_err(|e| invalid(e.to_string()))?;
            let mut table = String::from("N\t(a,b)\tsqrt(-1)\tsqrt(5)\tpi,pibar mod N\n");
            for c in &certs {
                table.push_str(&format!(
                    "{}\t({},{})\t{}\t{}\t{},{}\n",
                    c.n, c.pell.a, c.pell.b, c.sqrt_m1, c.sqrt_5, c.pi_residues.0, c.pi_residues.1
                ));
            }
            let report = ScanReport { schema_version: SCHEMA_VERSION, field: a.field, primes: vec![a.p], limit: a.limit, certificates: certs };
            (report.certificates.len(), to_json(&report), table)
        }
    };
    emit(&table, None)?;
    if let Some(p) = &a.json {
        emit(&json, Some(p))?;
    }
    Ok(if count == 0 { EXIT_EMPTY } else { 0 })
}

/// A built network with everything needed to export or verify it.
struct Network {
    cayley: ColoredCayleyGraph,
    table: Option<SquareTable>,
    generators: Vec<GeneratorSetDoc>,
}

/// Checks every congruence and size precondition without building anything.
fn validate(net: &NetworkArgs) -> Result<(u64, Option<u64>, u64), Failure> {
    let p = net.p.ok_or_else(|| invalid("--p is required"))?;
    let n = net.n.ok_or_else(|| invalid("--N is required"))?;
    if !is_prime(n) || n % 4 != 1 {
        return Err(invalid(format!("N = {n} must be a prime congruent to 1 mod 4")));
    }
    let size = n.checked_mul(n * n - 1).map(|x| x / 2);
    if size.is_none_or(|s| s > MAX_VERTICES) {
        return Err(invalid(format!("PSL(2, F_{n}) exceeds {MAX_VERTICES} vertices")));
    }
    match net.field {
        Field::Q => {
            for x in std::iter::once(p).chain(net.q) {
                if !is_prime(x) || x % 4 != 1 {
                    return Err(invalid(format!("{x} must be a prime congruent to 1 mod 4")));
                }
                if x == n {
                    return Err(invalid(format!("N must differ from the norm prime {x}")));
                }
                if legendre(x as i64, n).map_err(|e| invalid(e.to_string()))? != 1 {
                    return Err(invalid(format!("{x} is not a square mod {n}")));
                }
            }
            if net.q == Some(p) {
                return Err(invalid("--p and --q must differ"));
            }
        }
        Field::QSqrt5 => {
            if net.q.is_some() {
                return Err(invalid("--q applies to the rational field only"));
            }
            let split = SplitPrime::new(p).map_err(|e| invalid(e.to_string()))?;
            let cert = certify(&split, n).map_err(|e| invalid(e.to_string()))?;
            if !cert.tau_is_square {
                return Err(invalid(format!("tau is not a square mod {n}")));
            }
            if !cert.pi_split_ok {
                return Err(invalid(format!("pi or pibar is not a square mod {n} (or N = p)")));
            }
        }
    }
    Ok((p, net.q, n))
}

fn build_network(net: &NetworkArgs) -> Result<Network, Failure> {
    let (p, q, n) = validate(net)?;
    let fail = |e: &dyn std::fmt::Display| invalid(e.to_string());
    match net.field {
        Field::Q => {
            let first = lps_generators(p).map_err(|e| fail(&e))?;
            let ctx = GroupContext::rational(n).map_err(|e| fail(&e))?;
            match q {
                None => Ok(Network {
                    cayley: build_colored_cayley(&ctx, &[&first]).map_err(|e| fail(&e))?,
                    table: None,
                    generators: vec![first.to_document()],
                }),
                Some(q) => {
                    let second = lps_generators(q).map_err(|e| fail(&e))?;
                    let table = square_table(&first, &second).map_err(|e| fail(&e))?;
                    Ok(Network {
                        cayley: build_colored_cayley(&ctx, &[&first, &second]).map_err(|e| fail(&e))?,
                        table: Some(table),
                        generators: vec![first.to_document(), second.to_document()],
                    })
                }
            }
        }
        Field::QSqrt5 => {
            let (first, second) = hilbert_generators(p).map_err(|e| fail(&e))?;
            let table = square_table(&first, &second).map_err(|e| fail(&e))?;
            let ctx = GroupContext::real_quadratic(n).map_err(|e| fail(&e))?;
            Ok(Network {
                cayley: build_colored_cayley(&ctx, &[&first, &second]).map_err(|e| fail(&e))?,
                table: Some(table),
                generators: vec![first.to_document(), second.to_document()],
            })
        }
    }
}

fn cmd_build(a: &BuildArgs) -> Result<u8, Failure> {
    let net = build_network(&a.net)?;
    let graph = &net.cayley.graph;
    let summary = graph.summary(Some(net.cayley.ctx().modulus()));
    if let Some(dir) = &a.out {
        fs::create_dir_all(dir).map_err(|e| io_failure(dir, e))?;
        let edges = dir.join("edges.txt");
        let file = fs::File::create(&edges).map_err(|e| io_failure(&edges, e))?;
        graph.write_edge_list(std::io::BufWriter::new(file)).map_err(|e| io_failure(&edges, e))?;
        emit(&graph.to_dot(), Some(&dir.join("graph.dot")))?;
        emit(&to_json(&summary), Some(&dir.join("summary.json")))?;
        for doc in &net.generators {
            emit(&to_json(doc), Some(&dir.join(format!("generators-{}.json", doc.color))))?;
        }
        if let Some(t) = &net.table {
            emit(&to_json(&t.to_document()), Some(&dir.join("square-table.json")))?;
        }
    }
    emit(&to_json(&summary), None)?;
    Ok(0)
}

#[derive(Serialize)]
struct VerifyReport {
    schema_version: u32,
    source: String,
    summary: GraphSummary,
    spectral: Vec<SpectralReport>,
    square: Option<SquareReport>,
    passed: bool,
}

fn cmd_verify(a: &VerifyArgs) -> Result<u8, Failure> {
    let (graph, source, network, vertex_transitive) = match &a.graph {
        Some(path) => {
            let file = fs::File::open(path).map_err(|e| io_failure(path, e))?;
            let g = ColoredGraph::read_edge_list(BufReader::new(file)).map_err(|e| io_failure(path, e))?;
            (g, path.display().to_string(), None, false)
        }
        None => {
            let net = build_network(&a.net)?;
            let source = format!("{:?} p={:?} q={:?} N={:?}", a.net.field, a.net.p, a.net.q, a.net.n);
            (net.cayley.graph.clone(), source, Some(net), true)
        }
    };
    let modulus = network.as_ref().map(|n| n.cayley.ctx().modulus());
    let summary = graph.summary(modulus);
    let cfg = AnalyzeConfig {
        dense_cap: a.dense_cap,
        tol: a.tol,
        vertex_transitive,
        lanczos: LanczosConfig { seed: a.seed, ..LanczosConfig::default() },
    };
    let mut spectral = Vec::new();
    for layer in &graph.colors {
        let (report, evs) = analyze(layer, cfg).map_err(|e| Failure { code: EXIT_FAILED, message: e.to_string() })?;
        if let (Some(dir), Some(evs)) = (&a.csv_dir, evs) {
            fs::create_dir_all(dir).map_err(|e| io_failure(dir, e))?;
            emit(&spectrum_csv(&evs), Some(&dir.join(format!("spectrum-{}.csv", layer.label))))?;
        }
        spectral.push(report);
    }
    let square = match &network {
        Some(net) if net.cayley.graph.colors.len() >= 2 => {
            let mode = if a.square_exhaustive {
                AuditMode::Exhaustive
            } else {
                AuditMode::Sample { k: a.square_samples, seed: a.seed }
            };
            Some(verify_square_property(&net.cayley, 0, 1, mode, net.table.as_ref()).map_err(|e| invalid(e.to_string()))?)
        }
        _ => None,
    };
    let audits_ok = summary.colors.iter().all(|c| c.regularity.is_some() && c.symmetric);
    let passed = audits_ok && spectral.iter().all(|s| s.verdict) && square.as_ref().is_none_or(SquareReport::passed);
    let report = VerifyReport { schema_version: SCHEMA_VERSION, source, summary, spectral, square, passed };
    emit(&to_json(&report), a.json.as_deref())?;
    Ok(if passed { 0 } else { EXIT_FAILED })
}

#[derive(Serialize, serde::Deserialize)]
struct ProtocolReport {
    schema_version: u32,
    seed: u64,
    transcript: Transcript,
    dispersal: DispersalSet,
    reconstructed: bool,
}

fn cmd_protocol(a: &ProtocolArgs) -> Result<u8, Failure> {
    if let Some(path) = &a.check {
        let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
        let saved: ProtocolReport = serde_json::from_str(&text).map_err(|e| io_failure(path, e))?;
        let net = build_network(&a.net)?;
        let t = &saved.transcript;
        let verdict = verify(&net.cayley.graph, &t.transmission, t.check_color.as_deref(), net.table.as_ref());
        let routes_ok = saved.dispersal.routes.iter().all(|r| verify(&net.cayley.graph, r, None, None).is_ok());
        let shares_ok = reconstruct(&saved.dispersal).is_ok_and(|p| p == t.transmission.payload);
        let checked = Transcript::new(t.transmission.clone(), &t.data_color, t.check_color.as_deref(), verdict);
        let ok = checked.accepted && routes_ok && shares_ok;
        emit(&to_json(&checked), a.out.as_deref())?;
        return Ok(if ok { 0 } else { EXIT_FAILED });
    }
    let path = a.payload.as_ref().ok_or_else(|| invalid("--payload or --check is required"))?;
    let payload = fs::read(path).map_err(|e| io_failure(path, e))?;
    let net = build_network(&a.net)?;
    let graph = &net.cayley.graph;
    if graph.colors.len() < 2 {
        return Err(invalid("the protocol needs a two-color network"));
    }
    let dst = a.dst.unwrap_or(graph.n() - 1);
    if a.src >= graph.n() || dst >= graph.n() {
        return Err(invalid(format!("vertices must be below {}", graph.n())));
    }
    let (data, check) = (graph.colors[0].label.clone(), graph.colors[1].label.clone());
    let t = send_with_cross_check(graph, &payload, a.src, dst, &data, &check, net.table.as_ref(), a.seed)
        .map_err(|e| Failure { code: EXIT_FAILED, message: e.to_string() })?;
    let verdict = verify(graph, &t, Some(&check), net.table.as_ref());
    let dispersal = disperse(graph, &payload, a.g, a.walk, a.seed).map_err(|e| invalid(e.to_string()))?;
    let reconstructed = reconstruct(&dispersal).is_ok_and(|p| p == payload);
    let transcript = Transcript::new(t, &data, Some(&check), verdict);
    let ok = transcript.accepted && reconstructed;
    let report = ProtocolReport { schema_version: SCHEMA_VERSION, seed: a.seed, transcript, dispersal, reconstructed };
    emit(&to_json(&report), a.out.as_deref())?;
    Ok(if ok { 0 } else { EXIT_FAILED })
}
