//! CNF bridge for arrowing questions.
//!
//! "`host` does NOT arrow `(H₁,…,H_r)`" is satisfiability of a formula whose
//! models are exactly the good colorings: for every copy of `Hᵢ` there is a
//! clause forbidding that copy from being monochromatic in color `i`.  UNSAT
//! therefore certifies arrowing.  For two colors one boolean per element
//! suffices (true = color 0), which makes the copy clauses pure; three or
//! more colors use a one-hot variable block per element.
//!
//! Variables that occur in no clause correspond to elements lying in no copy
//! of any target; they are free and the solver's fixed default phase decides
//! them.
//!
//! The embedded solver is a conflict-driven clause learner: two watched
//! literals, first-UIP learning, integer activity decisions, Luby restarts,
//! phase saving and learnt-clause reduction.  It is complete and fully
//! deterministic.  Models are re-verified against the clause list before
//! being returned; external UNSAT answers (via [`run_external`]) are trusted
//! but labeled as such.

mod solver;

pub use solver::{solve, solve_with_progress, SolveResult, SolveStats, SolveStatus, SolverKind};

use crate::arrowing::{
    enumerate_copies, ArrowingProblem, ArrowingVerdict, Method, Mode, Outcome, SearchStats,
};
use crate::graph::Graph;
use crate::{Error, Result};

/// A CNF instance together with the (element, color) → variable layout
/// needed to decode models back into colorings.
#[derive(Clone, Debug)]
pub struct CnfFormula {
    pub variable_count: usize,
    /// Positive literal = variable true; variables are 1-based.
    pub clauses: Vec<Vec<i32>>,
    /// Whether a symmetry-breaking unit clause (first element, color 0) was
    /// added; sound only because the targets were pairwise isomorphic.
    pub symmetry_unit: bool,
    mode: Mode,
    element_count: usize,
    color_count: usize,
}

impl CnfFormula {
    /// The literal asserting "element `e` has color `c`".
    ///
    /// Two colors share one variable per element (positive = color 0); with
    /// more colors each element owns a one-hot block of `r` variables.
    pub fn literal(&self, element: usize, color: usize) -> i32 {
        debug_assert!(element < self.element_count && color < self.color_count);
        if self.color_count == 2 {
            let v = (element + 1) as i32;
            if color == 0 {
                v
            } else {
                -v
            }
        } else {
            (element * self.color_count + color + 1) as i32
        }
    }

    /// The full (element, color) → literal table.
    pub fn varmap(&self) -> Vec<((usize, usize), i32)> {
        let mut out = Vec::with_capacity(self.element_count * self.color_count);
        for e in 0..self.element_count {
            for c in 0..self.color_count {
                out.push(((e, c), self.literal(e, c)));
            }
        }
        out
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn element_count(&self) -> usize {
        self.element_count
    }

    pub fn color_count(&self) -> usize {
        self.color_count
    }

    /// Translates a model (indexed by variable − 1) into a coloring, one
    /// color index per element.
    pub fn decode_model(&self, model: &[bool]) -> Result<Vec<u8>> {
        if model.len() != self.variable_count {
            return Err(Error::invalid(format!(
                "model assigns {} variables, formula has {}",
                model.len(),
                self.variable_count
            )));
        }
        let mut coloring = Vec::with_capacity(self.element_count);
        for e in 0..self.element_count {
            if self.color_count == 2 {
                coloring.push(if model[e] { 0 } else { 1 });
            } else {
                let mut chosen = None;
                for c in 0..self.color_count {
                    if model[e * self.color_count + c] {
                        if chosen.is_some() {
                            return Err(Error::invalid(format!(
                                "model gives element {e} two colors"
                            )));
                        }
                        chosen = Some(c as u8);
                    }
                }
                coloring.push(chosen.ok_or_else(|| {
                    Error::invalid(format!("model gives element {e} no color"))
                })?);
            }
        }
        Ok(coloring)
    }
}

fn encode_nonarrowing(problem: &ArrowingProblem) -> Result<CnfFormula> {
    let m = problem.element_count();
    let r = problem.color_count();
    let mut copies = Vec::with_capacity(r);
    for t in &problem.targets {
        copies.push(enumerate_copies(&problem.host, t, problem.mode)?.masks);
    }
    let symmetry = m > 0 && problem.targets_interchangeable()?;
    let (variable_count, mut clauses) = if r == 2 {
        (m, Vec::new())
    } else {
        // One-hot block per element: at least one color, at most one color.
        let mut cls = Vec::new();
        for e in 0..m {
            let block: Vec<i32> = (0..r).map(|c| (e * r + c + 1) as i32).collect();
            cls.push(block.clone());
            for i in 0..r {
                for j in i + 1..r {
                    cls.push(vec![-block[i], -block[j]]);
                }
            }
        }
        (m * r, cls)
    };
    let lit = |e: usize, c: usize| -> i32 {
        if r == 2 {
            let v = (e + 1) as i32;
            if c == 0 {
                v
            } else {
                -v
            }
        } else {
            (e * r + c + 1) as i32
        }
    };
    for (c, list) in copies.iter().enumerate() {
        for &mask in list {
            // Not every element of this copy may take color c.
            clauses.push(crate::graph::iter_bits(mask).map(|e| -lit(e, c)).collect());
        }
    }
    if symmetry {
        clauses.push(vec![lit(0, 0)]);
    }
    Ok(CnfFormula {
        variable_count,
        clauses,
        symmetry_unit: symmetry,
        mode: problem.mode,
        element_count: m,
        color_count: r,
    })
}

/// CNF whose models are the good vertex colorings of `host`; UNSAT means
/// `host → (targets)^v`.
pub fn encode_vertex_nonarrowing(host: &Graph, targets: &[Graph]) -> Result<CnfFormula> {
    let problem =
        ArrowingProblem::new(host.clone(), Mode::Vertex, targets.to_vec(), None)?;
    encode_nonarrowing(&problem)
}

/// CNF whose models are the good edge colorings of `host` (edges in
/// lexicographic order); UNSAT means `host → (targets)^e`.
pub fn encode_edge_nonarrowing(host: &Graph, targets: &[Graph]) -> Result<CnfFormula> {
    let problem = ArrowingProblem::new(host.clone(), Mode::Edge, targets.to_vec(), None)?;
    encode_nonarrowing(&problem)
}

/// Bit-exact DIMACS rendering: `p cnf V C` header, one 0-terminated clause
/// per line, no comments.
pub fn export_dimacs(f: &CnfFormula) -> String {
    let mut out = format!("p cnf {} {}\n", f.variable_count, f.clauses.len());
    for clause in &f.clauses {
        for lit in clause {
            out.push_str(&lit.to_string());
            out.push(' ');
        }
        out.push_str("0\n");
    }
    out
}

/// Runs an external DIMACS solver.
///
/// The command is split on whitespace; a `{file}` token is replaced by the
/// path of a temporary DIMACS file, otherwise the path is appended as the
/// last argument.  Output must contain an `s SATISFIABLE` /
/// `s UNSATISFIABLE` / `s UNKNOWN` line, with `v` lines listing the model.
/// SAT models are re-verified against the clause list; UNSAT is taken on
/// the solver's word and labeled [`SolverKind::External`].
pub fn run_external(f: &CnfFormula, command: &str) -> Result<SolveResult> {
    let start = std::time::Instant::now();
    let mut parts = command.split_whitespace();
    let program = parts
        .next()
        .ok_or_else(|| Error::ExternalSolver("empty solver command".into()))?;
    let mut args: Vec<String> = parts.map(str::to_string).collect();

    let dir = tempfile::tempdir()?;
    let path = dir.path().join("instance.cnf");
    std::fs::write(&path, export_dimacs(f))?;
    let path_str = path.to_string_lossy().into_owned();
    let mut substituted = false;
    for a in &mut args {
        if a == "{file}" {
            *a = path_str.clone();
            substituted = true;
        }
    }
    if !substituted {
        args.push(path_str);
    }

    let output = std::process::Command::new(program)
        .args(&args)
        .output()
        .map_err(|e| Error::ExternalSolver(format!("failed to run `{command}`: {e}")))?;
    // SAT solvers conventionally exit 10/20; only the printed status matters.
    let stdout = String::from_utf8_lossy(&output.stdout);
    let mut status = None;
    let mut literals: Vec<i32> = Vec::new();
    for line in stdout.lines() {
        if let Some(rest) = line.strip_prefix("s ") {
            status = Some(rest.trim().to_string());
        } else if let Some(rest) = line.strip_prefix("v ") {
            for tok in rest.split_whitespace() {
                let l: i32 = tok.parse().map_err(|_| {
                    Error::ExternalSolver(format!("unparseable literal `{tok}` in v line"))
                })?;
                if l != 0 {
                    literals.push(l);
                }
            }
        }
    }
    let status = status.ok_or_else(|| {
        Error::ExternalSolver(format!(
            "no `s` status line in output of `{command}`"
        ))
    })?;
    let kind = SolverKind::External(command.to_string());
    let stats = SolveStats {
        conflicts: 0,
        decisions: 0,
        propagations: 0,
        wall_ms: start.elapsed().as_millis() as u64,
    };
    match status.as_str() {
        "UNSATISFIABLE" => Ok(SolveResult {
            status: SolveStatus::Unsat,
            model: None,
            solver: kind,
            stats,
        }),
        "SATISFIABLE" => {
            let mut model = vec![false; f.variable_count];
            for l in literals {
                let v = l.unsigned_abs() as usize;
                if v == 0 || v > f.variable_count {
                    return Err(Error::ExternalSolver(format!(
                        "model literal {l} outside 1..={}",
                        f.variable_count
                    )));
                }
                model[v - 1] = l > 0;
            }
            for (i, clause) in f.clauses.iter().enumerate() {
                let ok = clause
                    .iter()
                    .any(|&l| model[l.unsigned_abs() as usize - 1] == (l > 0));
                if !ok {
                    return Err(Error::ExternalSolver(format!(
                        "claimed model falsifies clause {i}"
                    )));
                }
            }
            Ok(SolveResult {
                status: SolveStatus::Sat,
                model: Some(model),
                solver: kind,
                stats,
            })
        }
        "UNKNOWN" => Ok(SolveResult {
            status: SolveStatus::Unknown,
            model: None,
            solver: kind,
            stats,
        }),
        other => Err(Error::ExternalSolver(format!(
            "unrecognized solver status `{other}`"
        ))),
    }
}

/// Options for [`sat_arrowing_check_with`].
#[derive(Default)]
pub struct SatOptions<'a> {
    /// Use this external command instead of the embedded solver.
    pub external_command: Option<String>,
    /// Abort the embedded solver after this many conflicts.
    pub max_conflicts: Option<u64>,
    /// Called periodically with running statistics (embedded solver only).
    pub progress: Option<&'a mut dyn FnMut(&SolveStats)>,
}

/// Decides an arrowing problem through the CNF route: UNSAT ⇒ Arrows,
/// SAT ⇒ NotArrows with the decoded model as witness (re-verified through
/// the copy-list checker before being returned).
///
/// Honors the `FOLKMAN_SAT_CMD` environment variable as the external-solver
/// command; unset means the embedded solver.
pub fn sat_arrowing_check(problem: &ArrowingProblem) -> Result<ArrowingVerdict> {
    let opts = SatOptions {
        external_command: std::env::var("FOLKMAN_SAT_CMD").ok(),
        ..SatOptions::default()
    };
    sat_arrowing_check_with(problem, opts)
}

/// As [`sat_arrowing_check`] with explicit solver options.
pub fn sat_arrowing_check_with(
    problem: &ArrowingProblem,
    opts: SatOptions<'_>,
) -> Result<ArrowingVerdict> {
    let f = encode_nonarrowing(problem)?;
    let copies = f.clauses.len()
        - if f.symmetry_unit { 1 } else { 0 }
        - if problem.color_count() > 2 {
            // One-hot scaffolding clauses are not copy clauses.
            let r = problem.color_count();
            problem.element_count() * (1 + r * (r - 1) / 2)
        } else {
            0
        };
    let result = match &opts.external_command {
        Some(cmd) => run_external(&f, cmd)?,
        None => match opts.progress {
            Some(cb) => solve_with_progress(&f, opts.max_conflicts, cb)?,
            None => solve_with_progress(&f, opts.max_conflicts, &mut |_| {})?,
        },
    };
    let method = match result.solver {
        SolverKind::Embedded => Method::Sat,
        SolverKind::External(_) => Method::External,
    };
    let stats = SearchStats {
        nodes: result.stats.conflicts,
        copies,
        wall_ms: result.stats.wall_ms,
    };
    match result.status {
        SolveStatus::Unsat => Ok(ArrowingVerdict {
            outcome: Outcome::Arrows,
            witness: None,
            method,
            symmetry_breaking: f.symmetry_unit,
            stats,
        }),
        SolveStatus::Sat => {
            let model = result.model.expect("SAT results carry a model");
            let witness = f.decode_model(&model)?;
            if !crate::arrowing::verify_certificate(problem, &witness)? {
                return Err(Error::BadCertificate(
                    "solver model decodes to a coloring with a monochromatic copy".into(),
                ));
            }
            Ok(ArrowingVerdict {
                outcome: Outcome::NotArrows,
                witness: Some(witness),
                method,
                symmetry_breaking: f.symmetry_unit,
                stats,
            })
        }
        SolveStatus::Unknown => Err(Error::ExternalSolver(
            "external solver returned UNKNOWN".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrowing::{edge_arrowing_check, vertex_arrowing_check};
    use crate::graph::{complete, complete_multipartite, cycle, near_complete, Graph};

    fn formula(vars: usize, clauses: &[&[i32]]) -> CnfFormula {
        CnfFormula {
            variable_count: vars,
            clauses: clauses.iter().map(|c| c.to_vec()).collect(),
            symmetry_unit: false,
            mode: Mode::Vertex,
            element_count: vars,
            color_count: 2,
        }
    }

    #[test]
    fn dimacs_is_bit_exact() {
        let f = formula(2, &[&[1, -2]]);
        assert_eq!(export_dimacs(&f), "p cnf 2 1\n1 -2 0\n");
    }

    #[test]
    fn trivial_formulas() {
        let f = formula(0, &[]);
        let r = solve(&f).unwrap();
        assert_eq!(r.status, SolveStatus::Sat);
        assert_eq!(r.model.unwrap(), Vec::<bool>::new());

        let f = formula(1, &[&[1], &[-1]]);
        assert_eq!(solve(&f).unwrap().status, SolveStatus::Unsat);

        let f = formula(3, &[&[1, 2], &[-1, 3], &[-2, -3], &[-1, -2]]);
        let r = solve(&f).unwrap();
        assert_eq!(r.status, SolveStatus::Sat);
    }

    #[test]
    fn pigeonhole_three_into_two_is_unsat() {
        // Pigeon i in hole h = var 2i+h+1; i in 0..3, h in 0..2.
        let mut clauses: Vec<Vec<i32>> = Vec::new();
        for i in 0..3 {
            clauses.push(vec![2 * i + 1, 2 * i + 2]);
        }
        for h in 0..2i32 {
            for i in 0..3i32 {
                for j in i + 1..3 {
                    clauses.push(vec![-(2 * i + h + 1), -(2 * j + h + 1)]);
                }
            }
        }
        let f = CnfFormula {
            variable_count: 6,
            clauses,
            symmetry_unit: false,
            mode: Mode::Vertex,
            element_count: 6,
            color_count: 2,
        };
        assert_eq!(solve(&f).unwrap().status, SolveStatus::Unsat);
    }

    #[test]
    fn solver_matches_brute_force_on_random_instances() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..60 {
            let vars = rng.gen_range(1..=9);
            let n_clauses = rng.gen_range(1..=28);
            let clauses: Vec<Vec<i32>> = (0..n_clauses)
                .map(|_| {
                    let len = rng.gen_range(1..=3);
                    (0..len)
                        .map(|_| {
                            let v = rng.gen_range(1..=vars) as i32;
                            if rng.gen_bool(0.5) {
                                v
                            } else {
                                -v
                            }
                        })
                        .collect()
                })
                .collect();
            let brute_sat = (0..1u32 << vars).any(|bits| {
                clauses.iter().all(|c| {
                    c.iter().any(|&l| {
                        let val = bits >> (l.unsigned_abs() - 1) & 1 == 1;
                        val == (l > 0)
                    })
                })
            });
            let f = CnfFormula {
                variable_count: vars,
                clauses,
                symmetry_unit: false,
                mode: Mode::Vertex,
                element_count: vars,
                color_count: 2,
            };
            let got = solve(&f).unwrap();
            assert_eq!(
                got.status,
                if brute_sat {
                    SolveStatus::Sat
                } else {
                    SolveStatus::Unsat
                }
            );
        }
    }

    #[test]
    fn solver_stats_are_deterministic() {
        let host = complete(6).unwrap();
        let f = encode_edge_nonarrowing(&host, &[complete(3).unwrap(), complete(3).unwrap()])
            .unwrap();
        let a = solve(&f).unwrap();
        let b = solve(&f).unwrap();
        assert_eq!(a.status, SolveStatus::Unsat);
        assert_eq!(a.stats.conflicts, b.stats.conflicts);
        assert_eq!(a.stats.decisions, b.stats.decisions);
        assert_eq!(a.stats.propagations, b.stats.propagations);
    }

    #[test]
    fn pentagon_encoding_shape() {
        let c5 = cycle(5).unwrap();
        let k2 = complete(2).unwrap();
        let f = encode_vertex_nonarrowing(&c5, &[k2.clone(), k2]).unwrap();
        assert_eq!(f.variable_count, 5);
        assert!(f.symmetry_unit);
        // One clause per edge per color plus the symmetry unit.
        assert_eq!(f.clauses.len(), 11);
        assert_eq!(solve(&f).unwrap().status, SolveStatus::Unsat);
    }

    #[test]
    fn clause_count_matches_copy_lists_without_symmetry() {
        // Distinct targets: no symmetry unit, so clauses = |copies₁| + |copies₂|.
        let host = complete_multipartite(&[1, 2, 2]).unwrap();
        let j3 = near_complete(3).unwrap();
        let k3 = complete(3).unwrap();
        let f = encode_edge_nonarrowing(&host, &[j3.clone(), k3.clone()]).unwrap();
        assert!(!f.symmetry_unit);
        let c1 = enumerate_copies(&host, &j3, Mode::Edge).unwrap().len();
        let c2 = enumerate_copies(&host, &k3, Mode::Edge).unwrap().len();
        assert_eq!(f.clauses.len(), c1 + c2);
    }

    #[test]
    fn path_instance_decodes_to_valid_witness() {
        let p3 = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let k2 = complete(2).unwrap();
        let problem =
            ArrowingProblem::new(p3, Mode::Vertex, vec![k2.clone(), k2], None).unwrap();
        let v = sat_arrowing_check(&problem).unwrap();
        assert_eq!(v.outcome, Outcome::NotArrows);
        assert_eq!(v.method, Method::Sat);
        let w = v.witness.unwrap();
        assert!(crate::arrowing::verify_certificate(&problem, &w).unwrap());
    }

    #[test]
    fn edge_instances_agree_with_engine() {
        let k3 = complete(3).unwrap();
        for host in [complete(5).unwrap(), complete(6).unwrap()] {
            let problem = ArrowingProblem::new(
                host,
                Mode::Edge,
                vec![k3.clone(), k3.clone()],
                None,
            )
            .unwrap();
            let sat = sat_arrowing_check(&problem).unwrap();
            let exhaustive = edge_arrowing_check(&problem).unwrap();
            assert_eq!(sat.outcome, exhaustive.outcome);
        }
        // The K5 split exists and both pentagon classes have 5 edges.
        let problem = ArrowingProblem::new(
            complete(5).unwrap(),
            Mode::Edge,
            vec![k3.clone(), k3],
            None,
        )
        .unwrap();
        let w = sat_arrowing_check(&problem).unwrap().witness.unwrap();
        assert_eq!(w.iter().filter(|&&c| c == 0).count(), 5);
        assert_eq!(w.iter().filter(|&&c| c == 1).count(), 5);
    }

    #[test]
    fn multipartite_gadgets_are_unsat() {
        let j3 = near_complete(3).unwrap();
        let j4 = near_complete(4).unwrap();
        let host = complete_multipartite(&[2, 2, 3]).unwrap();
        let f = encode_edge_nonarrowing(&host, &[j3, j4]).unwrap();
        assert_eq!(solve(&f).unwrap().status, SolveStatus::Unsat);
    }

    #[test]
    fn three_color_onehot_round_trip() {
        // K3 with three K2 targets: rainbow colorings exist.
        let k2 = complete(2).unwrap();
        let problem = ArrowingProblem::new(
            complete(3).unwrap(),
            Mode::Vertex,
            vec![k2.clone(), k2.clone(), k2.clone()],
            None,
        )
        .unwrap();
        let v = sat_arrowing_check(&problem).unwrap();
        assert_eq!(v.outcome, Outcome::NotArrows);
        let w = v.witness.unwrap();
        assert!(crate::arrowing::verify_certificate(&problem, &w).unwrap());
        // K7 cannot avoid a monochromatic edge in three colors.
        let problem = ArrowingProblem::new(
            complete(7).unwrap(),
            Mode::Vertex,
            vec![k2.clone(), k2.clone(), k2],
            None,
        )
        .unwrap();
        assert_eq!(sat_arrowing_check(&problem).unwrap().outcome, Outcome::Arrows);
    }

    #[test]
    fn random_hosts_agree_with_engine() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let k2 = complete(2).unwrap();
        let k3 = complete(3).unwrap();
        for _ in 0..10 {
            let n = 10;
            let mut g = Graph::new(n).unwrap();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(0.5) {
                        g.add_edge(u, v).unwrap();
                    }
                }
            }
            let problem = ArrowingProblem::new(
                g,
                Mode::Vertex,
                vec![
                    k3.clone(),
                    if rng.gen_bool(0.5) { k3.clone() } else { k2.clone() },
                ],
                None,
            )
            .unwrap();
            let sat = sat_arrowing_check(&problem).unwrap();
            let exhaustive = vertex_arrowing_check(&problem).unwrap();
            assert_eq!(sat.outcome, exhaustive.outcome);
            if let Some(w) = sat.witness {
                assert!(crate::arrowing::verify_certificate(&problem, &w).unwrap());
            }
        }
    }

    #[test]
    fn conflict_limit_is_a_distinguishable_error() {
        // A formula the solver cannot finish in one conflict.
        let host = complete(6).unwrap();
        let f = encode_edge_nonarrowing(&host, &[complete(3).unwrap(), complete(3).unwrap()])
            .unwrap();
        let err = solve_with_progress(&f, Some(1), &mut |_| {}).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }), "{err}");
    }

    #[test]
    fn external_solver_protocol() {
        use std::io::Write;
        use std::os::unix::fs::PermissionsExt;

        let dir = tempfile::tempdir().unwrap();
        let write_script = |name: &str, body: &str| -> String {
            let path = dir.path().join(name);
            let mut fh = std::fs::File::create(&path).unwrap();
            writeln!(fh, "#!/bin/sh").unwrap();
            writeln!(fh, "{body}").unwrap();
            let mut perms = fh.metadata().unwrap().permissions();
            perms.set_mode(0o755);
            std::fs::set_permissions(&path, perms).unwrap();
            path.to_string_lossy().into_owned()
        };

        let f = formula(2, &[&[1, -2]]);

        let unsat = write_script("unsat.sh", "echo 's UNSATISFIABLE'");
        let r = run_external(&f, &unsat).unwrap();
        assert_eq!(r.status, SolveStatus::Unsat);
        assert!(matches!(r.solver, SolverKind::External(_)));

        let sat = write_script("sat.sh", "echo 's SATISFIABLE'; echo 'v 1 2 0'");
        let r = run_external(&f, &sat).unwrap();
        assert_eq!(r.status, SolveStatus::Sat);
        assert_eq!(r.model.unwrap(), vec![true, true]);

        // A lying model is rejected.
        let f_hard = formula(1, &[&[1]]);
        let lying = write_script("lie.sh", "echo 's SATISFIABLE'; echo 'v -1 0'");
        assert!(run_external(&f_hard, &lying).is_err());

        let unknown = write_script("unk.sh", "echo 's UNKNOWN'");
        assert_eq!(
            run_external(&f, &unknown).unwrap().status,
            SolveStatus::Unknown
        );

        let silent = write_script("silent.sh", "true");
        assert!(run_external(&f, &silent).is_err());

        assert!(run_external(&f, "/definitely/not/a/solver").is_err());
    }

    #[test]
    fn external_brute_force_agrees_on_pentagon_instance() {
        // A genuine external solver: a brute-force DIMACS script.  Slow but
        // correct for tiny instances, enough to exercise the full protocol.
        use std::io::Write;
        use std::os::unix::fs::PermissionsExt;

        let dir = tempfile::tempdir().unwrap();
        let py = dir.path().join("brute.py");
        let mut fh = std::fs::File::create(&py).unwrap();
        write!(
            fh,
            r#"#!/usr/bin/env python3
import sys, itertools
clauses, nvars = [], 0
for line in open(sys.argv[1]):
    t = line.split()
    if not t or t[0] in 'cp%':
        if t and t[0] == 'p':
            nvars = int(t[2])
        continue
    clauses.append([int(x) for x in t if x != '0'])
for bits in itertools.product([False, True], repeat=nvars):
    if all(any((l > 0) == bits[abs(l) - 1] for l in c) for c in clauses):
        print('s SATISFIABLE')
        print('v ' + ' '.join(str(i + 1 if b else -(i + 1)) for i, b in enumerate(bits)) + ' 0')
        sys.exit(10)
print('s UNSATISFIABLE')
sys.exit(20)
"#
        )
        .unwrap();
        let mut perms = fh.metadata().unwrap().permissions();
        perms.set_mode(0o755);
        std::fs::set_permissions(&py, perms).unwrap();
        drop(fh);
        let cmd = format!("python3 {}", py.to_string_lossy());

        let c5 = cycle(5).unwrap();
        let k2 = complete(2).unwrap();
        let f = encode_vertex_nonarrowing(&c5, &[k2.clone(), k2.clone()]).unwrap();
        let external = run_external(&f, &cmd).unwrap();
        let embedded = solve(&f).unwrap();
        assert_eq!(external.status, embedded.status);
        assert_eq!(external.status, SolveStatus::Unsat);

        // And a satisfiable one: the path instance.
        let p3 = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let problem =
            ArrowingProblem::new(p3, Mode::Vertex, vec![k2.clone(), k2], None).unwrap();
        let verdict = sat_arrowing_check_with(
            &problem,
            SatOptions {
                external_command: Some(cmd),
                ..SatOptions::default()
            },
        )
        .unwrap();
        assert_eq!(verdict.outcome, Outcome::NotArrows);
        assert_eq!(verdict.method, Method::External);
        assert!(
            crate::arrowing::verify_certificate(&problem, &verdict.witness.unwrap()).unwrap()
        );
    }

    #[test]
    #[ignore = "minutes-scale instance; the acceptance suite runs it"]
    fn fifty_vertex_instance_is_unsat() {
        let h = crate::constructions::theorem10_graph().unwrap().0;
        assert_eq!(h.order(), 50);
        let t = crate::graph::complete_multipartite(&[2, 2, 3]).unwrap();
        let problem =
            ArrowingProblem::new(h, Mode::Vertex, vec![t.clone(), t], None).unwrap();
        let start = std::time::Instant::now();
        let f = encode_nonarrowing(&problem).unwrap();
        eprintln!(
            "encoded: {} vars, {} clauses in {:?}",
            f.variable_count,
            f.clauses.len(),
            start.elapsed()
        );
        let start = std::time::Instant::now();
        let r = solve(&f).unwrap();
        eprintln!(
            "solved: {:?} after {} conflicts, {} decisions in {:?}",
            r.status, r.stats.conflicts, r.stats.decisions, start.elapsed()
        );
        assert_eq!(r.status, SolveStatus::Unsat);
    }

    #[test]
    fn isolated_vertex_targets_rejected_before_encoding() {
        let lonely = Graph::from_edges(3, &[(0, 1)]).unwrap();
        let err = encode_vertex_nonarrowing(
            &cycle(5).unwrap(),
            &[lonely, complete(2).unwrap()],
        )
        .unwrap_err();
        assert!(err.to_string().contains("isolated"));
    }
}
