use thiserror::Error;

/// Unified error type for the crate.
///
/// Every budget violation is an explicit error rather than a silent fallback:
/// callers decide whether to raise the budget or switch method (e.g. from the
/// exhaustive engine to SAT).
#[derive(Debug, Error)]
pub enum Error {
    /// A structurally invalid argument (bad order, bad vertex id, bad part
    /// sizes, malformed pattern string, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An input exceeds a configured search budget.
    #[error("{what} = {actual} exceeds budget {limit}{}", hint.as_ref().map(|h| format!(" ({h})")).unwrap_or_default())]
    BudgetExceeded {
        what: &'static str,
        limit: usize,
        actual: usize,
        hint: Option<String>,
    },

    /// Malformed graph6 input.
    #[error("graph6: {0}")]
    Graph6(String),

    /// Malformed arrowing problem (too few colors, trivial target, ...).
    #[error("invalid arrowing problem: {0}")]
    InvalidProblem(String),

    /// A certificate failed independent re-verification.
    #[error("certificate rejected: {0}")]
    BadCertificate(String),

    /// External SAT solver failures: spawn errors, unparseable output, or a
    /// claimed model that does not satisfy the formula.
    #[error("external solver: {0}")]
    ExternalSolver(String),

    /// A ledger rule was applied to premises that do not fit its shape, or
    /// with a violated side condition.
    #[error("rule not applicable: {0}")]
    RuleViolation(String),

    /// Inserting this record would contradict bounds already in the ledger.
    #[error("ledger contradiction: {0}")]
    LedgerContradiction(String),

    /// Underlying I/O failure (certificate files, DIMACS export, ...).
    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    /// Malformed JSON on a certificate or graph-dump path.
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
