//! `folkman` command-line interface.
//!
//! Standard output is machine-parseable (JSON, graph6 or DIMACS per verb);
//! diagnostics and solver progress go to standard error.  Exit codes: 0 on
//! success, 1 when a checked property is refuted (a graph fails its claim or
//! a certificate fails re-verification), 2 on usage and resource errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use folkman::arrowing::{
    edge_arrowing_check_with, vertex_arrowing_check_with, ArrowingProblem, ArrowingVerdict, Mode,
    Outcome, SearchBudget,
};
use folkman::certificate::{load_any, AnyCertificate, ArrowingCertificate, ConstructionCertificate};
use folkman::constructions::{self, FigureId};
use folkman::graph::{self, Graph};
use folkman::ledger::{self, Ledger};
use folkman::sat::{self, SatOptions};
use folkman::Error;

const CONSTRUCTIONS: &str = "figure_ga, figure_gb, claim5_witness9, claim5_witness8, \
                             five_block, theorem8_drop, c5_blowup, theorem10, theorem10_base, \
                             theorem11, theorem11_base, product_witness, cone_k3c5";

#[derive(Parser)]
#[command(
    name = "folkman",
    version,
    about = "Builds, checks and certifies witness graphs for generalized Folkman number bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a named construction; prints a JSON summary including graph6.
    Build {
        /// One of the known recipes (see long help).
        #[arg(help = CONSTRUCTIONS)]
        name: String,
        /// Family parameter for parametric recipes (c5_blowup: t, default 2).
        #[arg(long)]
        param: Option<usize>,
        /// Also write the bare graph6 line to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide arrowing for a given host, or re-check a certificate file.
    Verify {
        /// Host graph: a graph6 literal or a path to a graph6 file.
        #[arg(long)]
        graph6: Option<String>,
        /// Comma-separated targets, e.g. K3,K3 or Kmp(2,2,3),J4.
        #[arg(long)]
        targets: Option<String>,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        /// Additionally require the host to be K_s-free.
        #[arg(long)]
        forbidden_clique: Option<usize>,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
        /// Worker threads for the exhaustive search (never changes results).
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Exhaustive: max colored elements; SAT: max solver conflicts.
        #[arg(long)]
        budget: Option<usize>,
        /// Re-check this certificate file instead of deciding an instance.
        #[arg(long, conflicts_with_all = ["graph6", "targets", "mode"])]
        certificate: Option<PathBuf>,
        /// Write the verdict as an arrowing certificate to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a construction, check its clique bound and its arrowing claim,
    /// and emit a construction certificate.
    Certify {
        #[arg(help = CONSTRUCTIONS)]
        name: String,
        #[arg(long)]
        param: Option<usize>,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Derive the best known upper bound for an expression like Fv(J5,J5;5).
    Bound {
        expr: String,
        /// Rule-application depth for the derivation search.
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// Export the non-arrowing CNF of an instance as DIMACS.
    ExportCnf {
        #[arg(long)]
        graph6: String,
        #[arg(long)]
        targets: String,
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print exact metrics of a graph as JSON.
    Stats {
        #[arg(long)]
        graph6: String,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Vertex,
    Edge,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Vertex => Mode::Vertex,
            ModeArg::Edge => Mode::Edge,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Exhaustive,
    Sat,
    Auto,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

/// Writes the stdout payload plus a trailing newline.  A consumer that stops
/// reading early (`head`, a closed pager) breaks the pipe; that is not an
/// error in the payload, so the process ends quietly instead of panicking
/// mid-write.
fn emit(payload: impl std::fmt::Display) {
    emit_raw(format_args!("{payload}\n"));
}

fn emit_raw(payload: std::fmt::Arguments<'_>) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if let Err(e) = out.write_fmt(payload).and_then(|()| out.flush()) {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: cannot write to stdout: {e}");
        std::process::exit(2);
    }
}

fn run(cmd: Command) -> folkman::Result<ExitCode> {
    match cmd {
        Command::Build { name, param, out } => run_build(&name, param, out.as_deref()),
        Command::Verify {
            graph6,
            targets,
            mode,
            forbidden_clique,
            method,
            jobs,
            budget,
            certificate,
            out,
        } => {
            if let Some(path) = certificate {
                return verify_certificate_file(&path);
            }
            let (Some(g6), Some(targets), Some(mode)) = (graph6, targets, mode) else {
                return Err(Error::InvalidArgument(
                    "verify needs --graph6, --targets and --mode (or --certificate)".into(),
                ));
            };
            run_verify(
                &g6,
                &targets,
                mode,
                forbidden_clique,
                method,
                jobs,
                budget,
                out.as_deref(),
            )
        }
        Command::Certify {
            name,
            param,
            method,
            jobs,
            budget,
            out,
        } => run_certify(&name, param, method, jobs, budget, out.as_deref()),
        Command::Bound { expr, depth } => run_bound(&expr, depth),
        Command::ExportCnf {
            graph6,
            targets,
            mode,
            out,
        } => run_export_cnf(&graph6, &targets, mode, out.as_deref()),
        Command::Stats { graph6 } => run_stats(&graph6),
    }
}

/// Accepts either a literal graph6 string or a path to a file whose first
/// nonblank line is one.
fn read_graph6_arg(arg: &str) -> folkman::Result<Graph> {
    let path = Path::new(arg);
    if path.exists() {
        let text = std::fs::read_to_string(path)?;
        let line = text
            .lines()
            .map(str::trim)
            .find(|l| !l.is_empty())
            .ok_or_else(|| Error::InvalidArgument(format!("{arg}: empty graph6 file")))?;
        graph::from_graph6(line)
    } else {
        graph::from_graph6(arg)
    }
}

fn parse_targets(spec: &str) -> folkman::Result<Vec<Graph>> {
    ledger::parse_pattern_list(spec)?
        .iter()
        .map(|p| p.to_graph())
        .collect()
}

fn reject_param(name: &str, param: Option<usize>) -> folkman::Result<()> {
    if param.is_some() {
        return Err(Error::InvalidArgument(format!(
            "`{name}` takes no --param (only c5_blowup does)"
        )));
    }
    Ok(())
}

fn build_graph(name: &str, param: Option<usize>) -> folkman::Result<Graph> {
    if name != "c5_blowup" {
        reject_param(name, param)?;
    }
    match name {
        "figure_ga" => Ok(constructions::figure_graph(FigureId::Ga)),
        "figure_gb" => Ok(constructions::figure_graph(FigureId::Gb)),
        "claim5_witness9" => Ok(constructions::claim5_witness9()),
        "claim5_witness8" => Ok(constructions::claim5_witness8()),
        "five_block" => constructions::claim5_five_block(),
        "theorem8_drop" => {
            constructions::theorem8_drop(&constructions::figure_graph(FigureId::Ga), 4)
        }
        "c5_blowup" => constructions::c5_blowup(param.unwrap_or(2)),
        "theorem10" => Ok(constructions::theorem10_graph()?.1),
        "theorem10_base" => Ok(constructions::theorem10_graph()?.0),
        "theorem11" => Ok(constructions::theorem11_graph(None)?.1),
        "theorem11_base" => Ok(constructions::theorem11_graph(None)?.0),
        "product_witness" => {
            constructions::product_witness(&graph::cycle(5)?, &graph::cycle(5)?)
        }
        "cone_k3c5" => constructions::cone_k3c5(),
        other => Err(Error::InvalidArgument(format!(
            "unknown construction `{other}`; known: {CONSTRUCTIONS}"
        ))),
    }
}

fn run_build(name: &str, param: Option<usize>, out: Option<&Path>) -> folkman::Result<ExitCode> {
    let g = build_graph(name, param)?;
    let g6 = graph::to_graph6(&g);
    if let Some(path) = out {
        std::fs::write(path, format!("{g6}\n"))?;
    }
    let summary = serde_json::json!({
        "name": name,
        "label": g.label(),
        "order": g.order(),
        "edges": g.edge_count(),
        "clique_number": graph::clique_number(&g),
        "graph6": g6,
    });
    emit(serde_json::to_string_pretty(&summary).expect("json"));
    Ok(ExitCode::SUCCESS)
}

/// What `certify <name>` builds, checks and claims.  For the apex recipes
/// the checked problem lives on the base graph; `reduction` explains why
/// that check supports the claim about the headline graph.
struct CertifyPlan {
    graph: Graph,
    expected_clique: usize,
    problem: ArrowingProblem,
    claim: String,
    reduction: Option<String>,
}

fn certify_plan(name: &str, param: Option<usize>) -> folkman::Result<CertifyPlan> {
    let k = graph::complete;
    let j = graph::near_complete;
    let kmp = graph::complete_multipartite;
    let plan = |graph: Graph,
                expected_clique: usize,
                mode: Mode,
                targets: Vec<Graph>,
                forbidden: usize,
                claim: String,
                reduction: Option<String>|
     -> folkman::Result<CertifyPlan> {
        let problem = ArrowingProblem::new(graph.clone(), mode, targets, Some(forbidden))?;
        Ok(CertifyPlan {
            graph,
            expected_clique,
            problem,
            claim,
            reduction,
        })
    };
    if name != "c5_blowup" {
        reject_param(name, param)?;
    }
    match name {
        "figure_ga" | "figure_gb" => {
            let g = build_graph(name, None)?;
            plan(
                g,
                3,
                Mode::Vertex,
                vec![k(3)?, k(3)?],
                4,
                "Fv(3,3;4) <= 14".into(),
                None,
            )
        }
        "claim5_witness9" => plan(
            constructions::claim5_witness9(),
            2,
            Mode::Vertex,
            vec![j(3)?, j(3)?],
            3,
            "Fv(J3,J3;3) <= 9".into(),
            None,
        ),
        "claim5_witness8" => plan(
            constructions::claim5_witness8(),
            2,
            Mode::Vertex,
            vec![k(2)?, j(3)?],
            3,
            "Fv(K2,J3;3) <= 8".into(),
            None,
        ),
        "five_block" => plan(
            constructions::claim5_five_block()?,
            4,
            Mode::Vertex,
            vec![j(5)?, j(5)?],
            5,
            "Fv(J5,J5;5) <= 36".into(),
            None,
        ),
        "theorem8_drop" => plan(
            constructions::theorem8_drop(&constructions::figure_graph(FigureId::Ga), 4)?,
            3,
            Mode::Vertex,
            vec![j(4)?, j(4)?],
            4,
            "Fv(J4,J4;4) <= 32".into(),
            None,
        ),
        "c5_blowup" => {
            let t = param.unwrap_or(2);
            let g = constructions::c5_blowup(t)?;
            let order = g.order();
            plan(
                g,
                2,
                Mode::Vertex,
                vec![kmp(&[t, t])?, kmp(&[t, t])?],
                3,
                format!("Fv(Kmp({t},{t}),Kmp({t},{t});3) <= {order}"),
                None,
            )
        }
        "theorem10" => {
            let (h, g) = constructions::theorem10_graph()?;
            let problem = ArrowingProblem::new(
                h,
                Mode::Vertex,
                vec![kmp(&[2, 2, 3])?, kmp(&[2, 2, 3])?],
                Some(4),
            )?;
            Ok(CertifyPlan {
                graph: g,
                expected_clique: 4,
                problem,
                claim: "Fe(J4,J4;5) <= 51".into(),
                reduction: Some(
                    "checked instance: the 50-vertex base graph vertex-arrows the two \
                     complete tripartite companions; joining one apex vertex then forces \
                     a monochromatic J4 in every edge 2-coloring, and the apex over a \
                     K4-free graph is K5-free"
                        .into(),
                ),
            })
        }
        "theorem11" => {
            let (h, g) = constructions::theorem11_graph(None)?;
            let problem = ArrowingProblem::new(
                h,
                Mode::Vertex,
                vec![j(4)?, kmp(&[2, 2, 1])?],
                Some(4),
            )?;
            Ok(CertifyPlan {
                graph: g,
                expected_clique: 4,
                problem,
                claim: "Fe(K3,J4;5) <= 27".into(),
                reduction: Some(
                    "checked instance: the 26-vertex base graph vertex-arrows (J4, K_{1,2,2}); \
                     joining one apex vertex then forces a monochromatic K3 or J4 in every \
                     edge 2-coloring, and the apex over a K4-free graph is K5-free"
                        .into(),
                ),
            })
        }
        "product_witness" => {
            let c5 = graph::cycle(5)?;
            plan(
                constructions::product_witness(&c5, &c5)?,
                4,
                Mode::Vertex,
                vec![k(4)?, k(4)?],
                5,
                "Fv(4,4;5) <= 25".into(),
                None,
            )
        }
        "cone_k3c5" => plan(
            constructions::cone_k3c5()?,
            5,
            Mode::Edge,
            vec![k(3)?, k(3)?],
            6,
            "Fe(3,3;6) <= 8".into(),
            None,
        ),
        "theorem10_base" | "theorem11_base" => Err(Error::InvalidArgument(format!(
            "`{name}` is a build-only alias; certify the full construction instead"
        ))),
        other => Err(Error::InvalidArgument(format!(
            "unknown construction `{other}`; known: {CONSTRUCTIONS}"
        ))),
    }
}

fn decide(
    problem: &ArrowingProblem,
    method: MethodArg,
    jobs: usize,
    budget: Option<usize>,
) -> folkman::Result<ArrowingVerdict> {
    let search_budget = budget.map(SearchBudget::uniform).unwrap_or_default();
    let fits = match problem.mode {
        Mode::Vertex => problem.element_count() <= search_budget.max_vertex_elements,
        Mode::Edge => problem.element_count() <= search_budget.max_edge_elements,
    };
    let exhaustive = match method {
        MethodArg::Exhaustive => true,
        MethodArg::Sat => false,
        MethodArg::Auto => fits,
    };
    if exhaustive {
        match problem.mode {
            Mode::Vertex => vertex_arrowing_check_with(problem, &search_budget, jobs),
            Mode::Edge => edge_arrowing_check_with(problem, &search_budget, jobs),
        }
    } else {
        let mut progress = |s: &sat::SolveStats| {
            eprintln!(
                "c conflicts={} decisions={} propagations={}",
                s.conflicts, s.decisions, s.propagations
            );
        };
        sat::sat_arrowing_check_with(
            problem,
            SatOptions {
                external_command: std::env::var("FOLKMAN_SAT_CMD").ok(),
                max_conflicts: budget.map(|b| b as u64),
                progress: Some(&mut progress),
            },
        )
    }
}

#[allow(clippy::too_many_arguments)]
fn run_verify(
    graph6: &str,
    targets: &str,
    mode: ModeArg,
    forbidden_clique: Option<usize>,
    method: MethodArg,
    jobs: usize,
    budget: Option<usize>,
    out: Option<&Path>,
) -> folkman::Result<ExitCode> {
    let host = read_graph6_arg(graph6)?;
    let problem = ArrowingProblem::new(host, mode.into(), parse_targets(targets)?, forbidden_clique)?;
    if let Some(s) = forbidden_clique {
        let cl = graph::clique_number(&problem.host);
        if cl >= s {
            eprintln!("refuted: host has clique number {cl}, not K{s}-free");
            return Ok(ExitCode::from(1));
        }
    }
    let verdict = decide(&problem, method, jobs, budget)?;
    let cert = ArrowingCertificate::from_verdict(&problem, &verdict);
    emit(cert.to_json());
    if let Some(path) = out {
        cert.save(path)?;
    }
    Ok(match verdict.outcome {
        Outcome::Arrows => ExitCode::SUCCESS,
        Outcome::NotArrows => ExitCode::from(1),
    })
}

fn verify_certificate_file(path: &Path) -> folkman::Result<ExitCode> {
    let loaded = load_any(path)?;
    let (kind, outcome) = match &loaded {
        AnyCertificate::Arrowing(c) => ("arrowing", c.verify()),
        AnyCertificate::Construction(c) => ("construction", c.verify()),
    };
    let name = path.display().to_string();
    match outcome {
        Ok(()) => {
            emit(serde_json::json!({"certificate": name, "kind": kind, "status": "valid"}));
            Ok(ExitCode::SUCCESS)
        }
        Err(Error::BadCertificate(reason)) => {
            emit(serde_json::json!({
                "certificate": name, "kind": kind, "status": "invalid", "reason": reason
            }));
            Ok(ExitCode::from(1))
        }
        Err(other) => Err(other),
    }
}

fn run_certify(
    name: &str,
    param: Option<usize>,
    method: MethodArg,
    jobs: usize,
    budget: Option<usize>,
    out: Option<&Path>,
) -> folkman::Result<ExitCode> {
    let plan = certify_plan(name, param)?;
    let cl = graph::clique_number(&plan.graph);
    if cl != plan.expected_clique {
        eprintln!(
            "refuted: {name} has clique number {cl}, expected {}",
            plan.expected_clique
        );
        return Ok(ExitCode::from(1));
    }
    let verdict = decide(&plan.problem, method, jobs, budget)?;
    let inner = ArrowingCertificate::from_verdict(&plan.problem, &verdict);
    let cert = ConstructionCertificate::new(name, &plan.graph, plan.claim, plan.reduction, inner);
    emit(cert.to_json());
    if let Some(path) = out {
        cert.save(path)?;
    }
    match verdict.outcome {
        Outcome::Arrows => Ok(ExitCode::SUCCESS),
        Outcome::NotArrows => {
            eprintln!("refuted: {name} does not arrow its targets");
            Ok(ExitCode::from(1))
        }
    }
}

fn run_bound(expr_text: &str, depth: usize) -> folkman::Result<ExitCode> {
    let expr = ledger::parse_expr(expr_text)?;
    let ledger = Ledger::standard().with_depth(depth);
    match ledger.derive(&expr) {
        Some(record) => emit(record.to_json()),
        None => emit(
            serde_json::to_string_pretty(
                &serde_json::json!({"expr": expr.to_string(), "status": "unknown"})
            )
            .expect("json"),
        ),
    }
    Ok(ExitCode::SUCCESS)
}

fn run_export_cnf(
    graph6: &str,
    targets: &str,
    mode: ModeArg,
    out: Option<&Path>,
) -> folkman::Result<ExitCode> {
    let host = read_graph6_arg(graph6)?;
    let targets = parse_targets(targets)?;
    let formula = match mode {
        ModeArg::Vertex => sat::encode_vertex_nonarrowing(&host, &targets)?,
        ModeArg::Edge => sat::encode_edge_nonarrowing(&host, &targets)?,
    };
    let dimacs = sat::export_dimacs(&formula);
    match out {
        Some(path) => std::fs::write(path, &dimacs)?,
        None => emit_raw(format_args!("{dimacs}")),
    }
    eprintln!(
        "c variables={} clauses={}",
        formula.variable_count,
        formula.clauses.len()
    );
    Ok(ExitCode::SUCCESS)
}

fn run_stats(graph6: &str) -> folkman::Result<ExitCode> {
    let g = read_graph6_arg(graph6)?;
    let stats = serde_json::json!({
        "label": g.label(),
        "order": g.order(),
        "edges": g.edge_count(),
        "clique_number": graph::clique_number(&g),
        "independence_number": graph::independence_number(&g),
        "triangles": graph::triangle_count(&g),
        "max_degree": graph::max_degree(&g),
        "automorphisms": graph::automorphism_count(&g).ok(),
        "graph6": graph::to_graph6(&g),
    });
    emit(serde_json::to_string_pretty(&stats).expect("json"));
    Ok(ExitCode::SUCCESS)
}
