use core::fmt;

use crate::lp::LpError;
use crate::milp::MilpError;
use crate::model::ValidationReport;

/// Why a scenario subproblem did not produce a usable value.
#[derive(Debug, Clone, PartialEq)]
pub enum SubproblemFailure {
    Infeasible,
    Unbounded,
    /// Limits stopped the search before any finite bound was certified.
    NoBound,
    Solver(MilpError),
}

impl fmt::Display for SubproblemFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubproblemFailure::Infeasible => f.write_str("infeasible (instance is inconsistent)"),
            SubproblemFailure::Unbounded => f.write_str("unbounded (scenario feasible set is not bounded)"),
            SubproblemFailure::NoBound => f.write_str("limits hit before a bound was certified"),
            SubproblemFailure::Solver(e) => write!(f, "{e}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    Invalid(ValidationReport),
    Subproblem {
        scenario: usize,
        failure: SubproblemFailure,
    },
    /// No recourse exists for the common first-stage point in this scenario.
    RecourseInfeasible {
        scenario: usize,
    },
    NonBinaryFirstStage {
        var: usize,
    },
    /// `sum_s p_s w_s` is not zero.
    DualInfeasible {
        imbalance: f64,
    },
    /// The initial vertex sets share no first-stage point, which a one-step
    /// inner loop needs.
    NoCommonPoint,
    Config(&'static str),
    EnumerationBudget {
        needed: f64,
        budget: usize,
    },
    Lp(LpError),
    /// An oracle LP ended without an optimal basis.
    OracleLp,
    /// The deterministic equivalent could not be solved.
    ExtensiveForm(SubproblemFailure),
    /// Cutting planes stopped at their iteration limit with this gap open.
    KelleyLimit {
        lower: f64,
        upper: f64,
    },
}

impl Error {
    pub(crate) fn sub(scenario: usize, failure: SubproblemFailure) -> Self {
        Error::Subproblem { scenario, failure }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Invalid(r) => write!(f, "invalid problem: {r}"),
            Error::Subproblem { scenario, failure } => write!(f, "scenario {scenario}: {failure}"),
            Error::RecourseInfeasible { scenario } => write!(
                f,
                "recourse assumption violated: scenario {scenario} has no recourse for the common first-stage point"
            ),
            Error::NonBinaryFirstStage { var } => write!(
                f,
                "first-stage variable {var} is not binary; progressive hedging needs a pure-binary first stage"
            ),
            Error::DualInfeasible { imbalance } => {
                write!(f, "multipliers are not dual feasible: |sum p_s w_s| = {imbalance:e}")
            }
            Error::NoCommonPoint => f.write_str("initial vertex sets share no common first-stage point"),
            Error::Config(msg) => write!(f, "bad configuration: {msg}"),
            Error::EnumerationBudget { needed, budget } => {
                write!(f, "enumeration needs {needed:.0} points, budget is {budget}")
            }
            Error::Lp(e) => write!(f, "{e}"),
            Error::OracleLp => f.write_str("oracle LP did not reach an optimal basis"),
            Error::ExtensiveForm(failure) => write!(f, "extensive form: {failure}"),
            Error::KelleyLimit { lower, upper } => {
                write!(f, "cutting planes hit the iteration limit with bounds [{lower}, {upper}]")
            }
        }
    }
}

impl From<LpError> for Error {
    fn from(e: LpError) -> Self {
        Error::Lp(e)
    }
}
