//! `dpcolor`: command-line front end for the DP-colouring library.
//!
//! Every subcommand prints a human-readable summary (or JSON with
//! `--format json`) and, with `--out`, writes its structured result to a
//! file. Exit codes: 0 success, 1 precondition or hypothesis failure,
//! 2 usage error, 3 cap exceeded.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use dpcolor::coloring::{chromatic_number, chromatic_polynomial_eval, coloring_number, is_k_critical};
use dpcolor::dp::{chi_dp, is_robustly_critical, p_dp, FullCoverSpace};
use dpcolor::explore::explore;
use dpcolor::format::{parse_edge_list, parse_graph6, parse_graph6_stream, to_graph6};
use dpcolor::graph::named;
use dpcolor::product::{
    build_random_bad_cover, build_star_bad_cover, c_bound_check, c_constant, f_dp_bracket, shift_classes,
    volatility_probability, CoverCertificate, HypothesisChecks, ProbabilityMethod, ProbabilityResult,
};
use dpcolor::{Error, Limits, Mode, SimpleGraph};

#[derive(Parser, Debug)]
#[command(name = "dpcolor", version, about = "Exact DP-colouring computations and bad-cover certificates")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Worker threads for parallel enumeration.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Maximum number of covers (or colourings) enumerated.
    #[arg(long, global = true, default_value_t = 10_000_000)]
    cap_covers: u64,
    /// Maximum number of search nodes per solve.
    #[arg(long, global = true, default_value_t = 10_000_000)]
    cap_nodes: u64,
    /// Write the structured result to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Standard output format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    /// How `--graph` files are read.
    #[arg(long, global = true, value_enum, default_value_t = InputFormat::Auto)]
    input_format: InputFormat,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum InputFormat {
    Auto,
    Graph6,
    EdgeList,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum ModeArg {
    Reduced,
    Oracle,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum MethodArg {
    Formula,
    Exact,
    Montecarlo,
}

#[derive(Args, Debug)]
struct GraphArg {
    /// A file path, `g6:<graph6>` or `name:<C5|K4|P4|K2,3|Petersen|...>`.
    #[arg(long)]
    graph: String,
}

#[derive(Args, Debug)]
struct GraphK {
    #[command(flatten)]
    graph: GraphArg,
    #[arg(long)]
    k: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate the chromatic polynomial P(G,k).
    Chrompoly(GraphK),
    /// Chromatic number.
    Chi(GraphArg),
    /// Coloring number (degeneracy + 1) and its elimination order.
    Col(GraphArg),
    /// DP-chromatic number by exhaustive full-cover enumeration.
    Chidp(GraphArg),
    /// DP colour function P_DP(G,k).
    Pdp(GraphK),
    /// Decide k-criticality.
    Critical(GraphK),
    /// Decide robust k-criticality.
    Robust {
        #[command(flatten)]
        gk: GraphK,
        #[arg(long, value_enum, default_value_t = ModeArg::Reduced)]
        mode: ModeArg,
    },
    /// Shift classes of proper k-colourings.
    Classes(GraphK),
    /// Deterministic bad cover of G □ K_{1,t}.
    StarCover {
        #[command(flatten)]
        gk: GraphK,
        #[arg(long)]
        t: usize,
        /// Also confirm χ_DP(G) = k before building.
        #[arg(long)]
        check_chi_dp: bool,
    },
    /// Randomised bad cover of G □ K_{l,t}.
    RandomCover {
        #[command(flatten)]
        gk: GraphK,
        #[arg(long)]
        l: usize,
        #[arg(long)]
        t: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        check_chi_dp: bool,
    },
    /// Replay and re-verify a certificate file.
    VerifyCover {
        certificate: PathBuf,
    },
    /// Bracket P_DP(G,k)/k ≤ f ≤ P(G,k)/k for a robustly critical graph.
    FdpBracket(GraphK),
    /// Probability that one colouring is volatile for a random leaf.
    Prob {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        l: usize,
        #[arg(long, value_enum, default_value_t = MethodArg::Formula)]
        method: MethodArg,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Leaves-per-block constant and its closed-form bound.
    CConst {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        l: usize,
    },
    /// Per-graph evidence table over a graph6 corpus.
    ExploreQuestions {
        /// graph6 corpus, one graph per line.
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        k: usize,
    },
}

/// A human summary plus the structured result.
struct Report {
    text: String,
    value: Value,
    /// Written verbatim by `--out` instead of `value` (certificates).
    document: Option<String>,
    exit: u8,
}

impl Report {
    fn new(text: impl Into<String>, value: Value) -> Self {
        Report {
            text: text.into(),
            value,
            document: None,
            exit: 0,
        }
    }
}

fn load_graph(spec: &str, input: InputFormat) -> Result<SimpleGraph, Error> {
    if let Some(s) = spec.strip_prefix("g6:") {
        return parse_graph6(s);
    }
    if let Some(s) = spec.strip_prefix("name:") {
        return named(s);
    }
    let text = fs::read_to_string(spec)?;
    let edge_list = match input {
        InputFormat::Graph6 => false,
        InputFormat::EdgeList => true,
        InputFormat::Auto => text
            .lines()
            .map(str::trim)
            .find(|l| !l.is_empty() && !l.starts_with('#'))
            .is_some_and(|l| l.contains(char::is_whitespace)),
    };
    if edge_list {
        parse_edge_list(&text)
    } else {
        parse_graph6(text.trim())
    }
}

fn mode(m: ModeArg) -> Mode {
    match m {
        ModeArg::Reduced => Mode::Reduced,
        ModeArg::Oracle => Mode::Oracle,
    }
}

fn checks(chi: bool) -> HypothesisChecks {
    HypothesisChecks {
        critical: true,
        chi_dp: chi,
    }
}

fn run(cmd: Command, g: &Global, limits: &Limits) -> Result<Report, Error> {
    let graph = |a: &GraphArg| load_graph(&a.graph, g.input_format);
    Ok(match cmd {
        Command::Chrompoly(a) => {
            let gr = graph(&a.graph)?;
            let p = chromatic_polynomial_eval(&gr, a.k, limits)?;
            Report::new(p.to_string(), json!({"graph6": to_graph6(&gr), "k": a.k, "p": p.to_string()}))
        }
        Command::Chi(a) => {
            let gr = graph(&a)?;
            let x = chromatic_number(&gr, limits)?;
            Report::new(x.to_string(), json!({"graph6": to_graph6(&gr), "chi": x}))
        }
        Command::Col(a) => {
            let gr = graph(&a)?;
            let (col, order) = coloring_number(&gr);
            Report::new(col.to_string(), json!({"graph6": to_graph6(&gr), "col": col, "ordering": order}))
        }
        Command::Chidp(a) => {
            let gr = graph(&a)?;
            let x = chi_dp(&gr, limits)?;
            Report::new(x.to_string(), json!({"graph6": to_graph6(&gr), "chi_dp": x}))
        }
        Command::Pdp(a) => {
            let gr = graph(&a.graph)?;
            let p = p_dp(&gr, a.k, limits)?;
            let covers = gr
                .is_connected()
                .then(|| FullCoverSpace::new(&gr, a.k, limits).map(|s| s.total()))
                .transpose()?;
            Report::new(
                p.to_string(),
                json!({"graph6": to_graph6(&gr), "k": a.k, "p_dp": p.to_string(), "covers": covers}),
            )
        }
        Command::Critical(a) => {
            let gr = graph(&a.graph)?;
            let c = is_k_critical(&gr, a.k, limits)?;
            Report::new(c.to_string(), json!({"graph6": to_graph6(&gr), "k": a.k, "critical": c}))
        }
        Command::Robust { gk, mode: m } => {
            let gr = graph(&gk.graph)?;
            let v = is_robustly_critical(&gr, gk.k, mode(m), limits)?;
            let witness = v.witness.as_ref().map(|c| serde_json::to_value(c.to_record()).expect("record"));
            let text = match (v.robust, v.critical) {
                (true, _) => "true".to_string(),
                (false, false) => format!("false (not {}-critical)", gk.k),
                (false, true) => "false (non-canonical bad cover found)".to_string(),
            };
            Report::new(
                text,
                json!({"graph6": to_graph6(&gr), "k": gk.k, "robust": v.robust, "critical": v.critical, "witness": witness}),
            )
        }
        Command::Classes(a) => {
            let gr = graph(&a.graph)?;
            let sc = shift_classes(&gr, a.k, limits)?;
            let reps: Vec<&Vec<usize>> = sc.representatives.iter().map(|r| &r.colors).collect();
            let mut text = format!("{} classes of size {}", sc.len(), a.k);
            for r in &reps {
                text.push_str(&format!("\n{r:?}"));
            }
            Report::new(text, json!({"graph6": to_graph6(&gr), "k": a.k, "representatives": reps}))
        }
        Command::StarCover { gk, t, check_chi_dp } => {
            let gr = graph(&gk.graph)?;
            let out = build_star_bad_cover(&gr, gk.k, t, checks(check_chi_dp), limits)?;
            certificate_report(&out.certificate)
        }
        Command::RandomCover {
            gk,
            l,
            t,
            seed,
            check_chi_dp,
        } => {
            let gr = graph(&gk.graph)?;
            let out = build_random_bad_cover(&gr, gk.k, l, t, seed, checks(check_chi_dp), limits)?;
            let mut r = certificate_report(&out.certificate);
            if !out.attempts.is_empty() {
                r.text.push_str(&format!(
                    "\nblocks: {}, resampled: {}",
                    out.attempts.len(),
                    out.resamples()
                ));
            }
            r
        }
        Command::VerifyCover { certificate } => verify(&certificate, limits)?,
        Command::FdpBracket(a) => {
            let gr = graph(&a.graph)?;
            let b = f_dp_bracket(&gr, a.k, limits)?;
            let text = match b.exact() {
                Some(x) => format!("({}, {}), exact f = {x}", b.lower, b.upper),
                None => format!("({}, {})", b.lower, b.upper),
            };
            Report::new(
                text,
                json!({"graph6": to_graph6(&gr), "k": a.k, "lower": b.lower.to_string(), "upper": b.upper.to_string(),
                       "exact": b.exact().map(|x| x.to_string())}),
            )
        }
        Command::Prob {
            k,
            l,
            method,
            samples,
            seed,
        } => {
            let m = match method {
                MethodArg::Formula => ProbabilityMethod::Formula,
                MethodArg::Exact => ProbabilityMethod::Exact,
                MethodArg::Montecarlo => ProbabilityMethod::MonteCarlo { samples, seed },
            };
            match volatility_probability(k, l, m)? {
                ProbabilityResult::Exact(r) => Report::new(
                    format!("{r} ≈ {:.6}", ProbabilityResult::Exact(r.clone()).to_f64()),
                    json!({"k": k, "l": l, "probability": r.to_string()}),
                ),
                est @ ProbabilityResult::Estimate { successes, samples } => Report::new(
                    format!("{:.6} ({successes}/{samples})", est.to_f64()),
                    json!({"k": k, "l": l, "estimate": est.to_f64(), "successes": successes, "samples": samples, "seed": seed}),
                ),
            }
        }
        Command::CConst { k, l } => {
            let c = c_constant(k, l)?;
            let within = c_bound_check(k, l)?;
            Report::new(
                format!("c = {c}, bound holds: {within}"),
                json!({"k": k, "l": l, "c": c, "bound_holds": within}),
            )
        }
        Command::ExploreQuestions { corpus, k } => {
            let text = fs::read_to_string(&corpus)?;
            let mut graphs = Vec::new();
            for (i, parsed) in parse_graph6_stream(&text).into_iter().enumerate() {
                match parsed {
                    Ok(gr) => graphs.push(gr),
                    Err(e) => eprintln!("skipping corpus entry {}: {e}", i + 1),
                }
            }
            let rows = explore(&graphs, k, limits)?;
            let mut table = String::from("graph6\tn\tm\tcritical\tchi_dp=k\tbad_full\trobust\tP\tP_DP\tnotice");
            let show = |b: Option<bool>| b.map_or("-".to_string(), |b| b.to_string());
            for r in &rows {
                table.push_str(&format!(
                    "\n{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                    r.graph6,
                    r.n,
                    r.m,
                    r.critical,
                    show(r.chi_dp_is_k),
                    show(r.every_bad_cover_full),
                    show(r.robust),
                    r.p.as_ref().map_or("-".into(), ToString::to_string),
                    r.p_dp.as_ref().map_or("-".into(), ToString::to_string),
                    r.notice.as_deref().unwrap_or("")
                ));
            }
            Report::new(table, json!({"k": k, "rows": rows}))
        }
    })
}

fn certificate_report(cert: &CoverCertificate) -> Report {
    let text = format!(
        "{}: {} colourings of the X side checked over {} leaves (hash {})",
        cert.status, cert.x_colorings, cert.t, cert.hash
    );
    Report {
        text,
        value: serde_json::to_value(cert).expect("certificate"),
        document: Some(cert.to_json()),
        exit: 0,
    }
}

fn verify(path: &Path, limits: &Limits) -> Result<Report, Error> {
    let cert = CoverCertificate::from_json(&fs::read_to_string(path)?)?;
    let rep = cert.verify(limits)?;
    let text = if rep.status_matches {
        rep.status.clone()
    } else {
        format!("status mismatch: recorded {:?}, recomputed {:?}", cert.status, rep.status)
    };
    Ok(Report {
        text,
        value: json!({"status": rep.status, "bad": rep.bad, "x_colorings": rep.x_colorings, "matches_record": rep.status_matches}),
        document: None,
        exit: if rep.status_matches { 0 } else { 1 },
    })
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::CapExceeded { .. } => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let g = &cli.global;
    let limits = Limits {
        covers: g.cap_covers,
        nodes: g.cap_nodes,
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(g.threads.max(1)).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start worker pool: {e}");
            return ExitCode::from(1);
        }
    };
    let result = pool.install(|| run(cli.command, g, &limits));
    match result {
        Ok(report) => {
            match g.format {
                OutputFormat::Text => println!("{}", report.text),
                OutputFormat::Json => println!("{}", serde_json::to_string_pretty(&report.value).expect("json")),
            }
            if let Some(path) = &g.out {
                let body = report
                    .document
                    .unwrap_or_else(|| serde_json::to_string_pretty(&report.value).expect("json") + "\n");
                if let Err(e) = fs::write(path, body) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(1);
                }
            }
            ExitCode::from(report.exit)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
