//! JSON certificates for arrowing verdicts and named constructions.
//!
//! A certificate is a self-contained, re-checkable claim.  Graphs travel as
//! graph6 strings, so a reader needs nothing but this crate (or any graph6
//! implementation) to rebuild the instance.  Files carry no timestamps and
//! no wall-clock fields, and serialization uses a fixed field order, so the
//! same claim always produces byte-identical output.
//!
//! Two kinds exist:
//! - [`ArrowingCertificate`]: one arrowing question and its verdict.  A
//!   `not_arrows` verdict embeds the witness coloring and is re-checkable in
//!   polynomial time; an `arrows` verdict is re-checkable only by re-running
//!   a decision procedure, which [`ArrowingCertificate::verify`] does.
//! - [`ConstructionCertificate`]: a named recipe, the bound it realizes, and
//!   the arrowing certificate backing the claim.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::arrowing::{
    self, ArrowingProblem, ArrowingVerdict, Method, Mode, Outcome, SearchBudget, SearchStats,
};
use crate::graph::{clique_number, from_graph6, to_graph6};
use crate::sat;
use crate::{Error, Result};

pub const ARROWING_FORMAT: &str = "arrowing/1";
pub const CONSTRUCTION_FORMAT: &str = "construction/1";

/// The instance portion of an arrowing certificate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub host_graph6: String,
    pub mode: Mode,
    pub targets_graph6: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub forbidden_clique: Option<usize>,
}

impl ProblemSpec {
    pub fn from_problem(problem: &ArrowingProblem) -> ProblemSpec {
        ProblemSpec {
            host_graph6: to_graph6(&problem.host),
            mode: problem.mode,
            targets_graph6: problem.targets.iter().map(to_graph6).collect(),
            forbidden_clique: problem.forbidden_clique,
        }
    }

    pub fn to_problem(&self) -> Result<ArrowingProblem> {
        let host = from_graph6(&self.host_graph6)?;
        let targets = self
            .targets_graph6
            .iter()
            .map(|t| from_graph6(t))
            .collect::<Result<Vec<_>>>()?;
        ArrowingProblem::new(host, self.mode, targets, self.forbidden_clique)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArrowingCertificate {
    pub format: String,
    pub problem: ProblemSpec,
    pub outcome: Outcome,
    /// Good coloring, one color index per element, iff `outcome` is
    /// `not_arrows`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Vec<u8>>,
    pub method: Method,
    pub symmetry_breaking: bool,
    pub stats: SearchStats,
}

impl ArrowingCertificate {
    pub fn from_verdict(problem: &ArrowingProblem, verdict: &ArrowingVerdict) -> Self {
        ArrowingCertificate {
            format: ARROWING_FORMAT.to_string(),
            problem: ProblemSpec::from_problem(problem),
            outcome: verdict.outcome,
            witness: verdict.witness.clone(),
            method: verdict.method,
            symmetry_breaking: verdict.symmetry_breaking,
            stats: verdict.stats,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cert: ArrowingCertificate = serde_json::from_str(text)?;
        if cert.format != ARROWING_FORMAT {
            return Err(Error::BadCertificate(format!(
                "format `{}` is not `{ARROWING_FORMAT}`",
                cert.format
            )));
        }
        Ok(cert)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Re-checks the whole claim from scratch.
    ///
    /// Clique-freeness (when claimed) is recomputed exactly.  A `not_arrows`
    /// outcome is verified against the embedded witness using only copy
    /// enumeration.  An `arrows` outcome is re-decided: exhaustively when
    /// the instance fits the default budget, otherwise through the SAT
    /// route (which honors `FOLKMAN_SAT_CMD`).
    pub fn verify(&self) -> Result<()> {
        let problem = self.problem.to_problem()?;
        if let Some(s) = problem.forbidden_clique {
            let cl = clique_number(&problem.host);
            if cl >= s {
                return Err(Error::BadCertificate(format!(
                    "host has clique number {cl}, violating the claimed K{s}-freeness"
                )));
            }
        }
        match self.outcome {
            Outcome::NotArrows => {
                let witness = self.witness.as_ref().ok_or_else(|| {
                    Error::BadCertificate("not_arrows certificate lacks a witness".into())
                })?;
                if arrowing::verify_certificate(&problem, witness)? {
                    Ok(())
                } else {
                    Err(Error::BadCertificate(
                        "witness coloring leaves a monochromatic copy".into(),
                    ))
                }
            }
            Outcome::Arrows => {
                let budget = SearchBudget::default();
                let fits = match problem.mode {
                    Mode::Vertex => problem.element_count() <= budget.max_vertex_elements,
                    Mode::Edge => problem.element_count() <= budget.max_edge_elements,
                };
                let verdict = if fits {
                    match problem.mode {
                        Mode::Vertex => arrowing::vertex_arrowing_check(&problem)?,
                        Mode::Edge => arrowing::edge_arrowing_check(&problem)?,
                    }
                } else {
                    sat::sat_arrowing_check(&problem)?
                };
                if verdict.outcome == Outcome::Arrows {
                    Ok(())
                } else {
                    Err(Error::BadCertificate(
                        "re-deciding the instance refutes the claimed arrowing".into(),
                    ))
                }
            }
        }
    }
}

/// Identity block of a construction certificate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstructionInfo {
    /// Recipe name as the CLI spells it.
    pub name: String,
    pub graph6: String,
    pub order: usize,
    pub clique_number: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub label: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstructionCertificate {
    pub format: String,
    pub construction: ConstructionInfo,
    /// The bound this construction realizes, e.g. `Fv(J5,J5;5) <= 36`.
    pub claim: String,
    /// How the checked problem relates to the claim when they differ (apex
    /// constructions check vertex arrowing of the base graph).
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reduction: Option<String>,
    pub arrowing: ArrowingCertificate,
    pub tool_version: String,
}

impl ConstructionCertificate {
    pub fn new(
        name: &str,
        graph: &crate::Graph,
        claim: String,
        reduction: Option<String>,
        arrowing: ArrowingCertificate,
    ) -> Self {
        ConstructionCertificate {
            format: CONSTRUCTION_FORMAT.to_string(),
            construction: ConstructionInfo {
                name: name.to_string(),
                graph6: to_graph6(graph),
                order: graph.order(),
                clique_number: clique_number(graph),
                label: graph.label().map(str::to_string),
            },
            claim,
            reduction,
            arrowing,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cert: ConstructionCertificate = serde_json::from_str(text)?;
        if cert.format != CONSTRUCTION_FORMAT {
            return Err(Error::BadCertificate(format!(
                "format `{}` is not `{CONSTRUCTION_FORMAT}`",
                cert.format
            )));
        }
        Ok(cert)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Integrity of the identity block plus full re-check of the inner
    /// arrowing certificate.  Whether the recipe named here reproduces the
    /// stored graph is the CLI's job; this check is recipe-agnostic.
    pub fn verify(&self) -> Result<()> {
        let g = from_graph6(&self.construction.graph6)?;
        if g.order() != self.construction.order {
            return Err(Error::BadCertificate(format!(
                "stored order {} disagrees with the graph's {}",
                self.construction.order,
                g.order()
            )));
        }
        let cl = clique_number(&g);
        if cl != self.construction.clique_number {
            return Err(Error::BadCertificate(format!(
                "stored clique number {} disagrees with the recomputed {cl}",
                self.construction.clique_number
            )));
        }
        self.arrowing.verify()
    }
}

/// Either certificate kind, selected by the `format` field.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyCertificate {
    Arrowing(ArrowingCertificate),
    Construction(ConstructionCertificate),
}

pub fn load_any(path: &Path) -> Result<AnyCertificate> {
    let text = std::fs::read_to_string(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    match value.get("format").and_then(|f| f.as_str()) {
        Some(ARROWING_FORMAT) => Ok(AnyCertificate::Arrowing(ArrowingCertificate::from_json(
            &text,
        )?)),
        Some(CONSTRUCTION_FORMAT) => Ok(AnyCertificate::Construction(
            ConstructionCertificate::from_json(&text)?,
        )),
        Some(other) => Err(Error::BadCertificate(format!(
            "unrecognized certificate format `{other}`"
        ))),
        None => Err(Error::BadCertificate(
            "certificate lacks a format field".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrowing::vertex_arrowing_check;
    use crate::constructions;
    use crate::graph::{complete, cycle};

    fn pentagon_problem() -> ArrowingProblem {
        ArrowingProblem::new(
            cycle(5).unwrap(),
            Mode::Vertex,
            vec![complete(2).unwrap(), complete(2).unwrap()],
            Some(3),
        )
        .unwrap()
    }

    fn square_problem() -> ArrowingProblem {
        ArrowingProblem::new(
            cycle(4).unwrap(),
            Mode::Vertex,
            vec![complete(2).unwrap(), complete(2).unwrap()],
            None,
        )
        .unwrap()
    }

    #[test]
    fn arrows_certificate_round_trip() {
        let problem = pentagon_problem();
        let verdict = vertex_arrowing_check(&problem).unwrap();
        assert_eq!(verdict.outcome, Outcome::Arrows);
        let cert = ArrowingCertificate::from_verdict(&problem, &verdict);
        cert.verify().unwrap();

        let text = cert.to_json();
        let back = ArrowingCertificate::from_json(&text).unwrap();
        assert_eq!(back, cert);
        assert!(text.contains("\"outcome\": \"arrows\""));
        assert!(text.contains("\"mode\": \"vertex\""));
        assert!(!text.contains("wall_ms"), "no wall-clock data in files");
        assert!(!text.contains("witness"), "arrows verdicts have no witness");
    }

    #[test]
    fn not_arrows_certificate_embeds_checkable_witness() {
        let problem = square_problem();
        let verdict = vertex_arrowing_check(&problem).unwrap();
        assert_eq!(verdict.outcome, Outcome::NotArrows);
        let cert = ArrowingCertificate::from_verdict(&problem, &verdict);
        cert.verify().unwrap();
        // The 4-cycle is bipartite, so the two-coloring must alternate.
        assert_eq!(cert.witness, Some(vec![0, 1, 0, 1]));

        let mut bad = cert.clone();
        bad.witness = Some(vec![0, 0, 1, 1]);
        assert!(bad.verify().is_err(), "edge 0-1 is monochromatic");

        let mut bad = cert.clone();
        bad.witness = None;
        assert!(bad.verify().is_err());

        let mut bad = cert;
        bad.outcome = Outcome::Arrows;
        bad.witness = None;
        assert!(bad.verify().is_err(), "re-deciding refutes the flip");
    }

    #[test]
    fn clique_freeness_claim_is_rechecked() {
        let problem = ArrowingProblem::new(
            complete(4).unwrap(),
            Mode::Vertex,
            vec![complete(2).unwrap(), complete(2).unwrap()],
            Some(3),
        )
        .unwrap();
        let verdict = vertex_arrowing_check(&problem).unwrap();
        let cert = ArrowingCertificate::from_verdict(&problem, &verdict);
        let err = cert.verify().unwrap_err();
        assert!(err.to_string().contains("clique number"), "{err}");
    }

    #[test]
    fn serialization_is_byte_identical_across_runs() {
        let problem = pentagon_problem();
        let v1 = vertex_arrowing_check(&problem).unwrap();
        let v2 = vertex_arrowing_check(&problem).unwrap();
        let a = ArrowingCertificate::from_verdict(&problem, &v1).to_json();
        let b = ArrowingCertificate::from_verdict(&problem, &v2).to_json();
        assert_eq!(a, b);
    }

    #[test]
    fn save_and_load_both_kinds() {
        let dir = tempfile::tempdir().unwrap();
        let problem = pentagon_problem();
        let verdict = vertex_arrowing_check(&problem).unwrap();
        let cert = ArrowingCertificate::from_verdict(&problem, &verdict);
        let p1 = dir.path().join("arrowing.json");
        cert.save(&p1).unwrap();
        assert_eq!(ArrowingCertificate::load(&p1).unwrap(), cert);

        let g = constructions::claim5_witness9();
        let wrapped = ConstructionCertificate::new(
            "claim5_witness9",
            &g,
            "Fv(J3,J3;3) <= 9".to_string(),
            None,
            cert.clone(),
        );
        let p2 = dir.path().join("construction.json");
        wrapped.save(&p2).unwrap();
        let back = ConstructionCertificate::load(&p2).unwrap();
        assert_eq!(back, wrapped);
        assert_eq!(back.construction.order, 9);
        assert_eq!(back.construction.clique_number, 2);
        back.verify().unwrap();

        match load_any(&p1).unwrap() {
            AnyCertificate::Arrowing(c) => assert_eq!(c, cert),
            _ => panic!("wrong kind"),
        }
        match load_any(&p2).unwrap() {
            AnyCertificate::Construction(c) => assert_eq!(c, wrapped),
            _ => panic!("wrong kind"),
        }

        // Kind confusion is rejected.
        assert!(ArrowingCertificate::load(&p2).is_err());
        assert!(ConstructionCertificate::load(&p1).is_err());
    }

    #[test]
    fn construction_identity_block_is_rechecked() {
        let problem = pentagon_problem();
        let verdict = vertex_arrowing_check(&problem).unwrap();
        let inner = ArrowingCertificate::from_verdict(&problem, &verdict);
        let g = cycle(5).unwrap();
        let cert = ConstructionCertificate::new("c5", &g, "demo".into(), None, inner);
        cert.verify().unwrap();

        let mut bad = cert.clone();
        bad.construction.clique_number = 3;
        assert!(bad.verify().is_err());
        let mut bad = cert;
        bad.construction.order = 6;
        assert!(bad.verify().is_err());
    }
}
