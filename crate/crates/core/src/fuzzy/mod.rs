//! Mamdani fuzzy inference for charging-priority weights.
//!
//! The pipeline maps two crisp inputs on the unit interval — a vehicle's
//! state of charge and its normalized parking stay time — to a crisp
//! scheduling weight in `[0, 1]`:
//!
//! 1. fuzzification against the `soc` and `stay_time` linguistic variables,
//! 2. rule firing with min-AND, min-implication (clipping) and
//!    max-aggregation over the 25-rule base,
//! 3. centroid (center-of-gravity) defuzzification of the aggregated
//!    output set over a uniform sample grid.
//!
//! [`Fis`] bundles the three variables, the rule base and the grid
//! resolution; [`Fis::default`] gives the built-in configuration.

mod engine;
mod membership;
mod rules;
mod variable;

pub use engine::{defuzzify_cog, load_mf_overrides, Fis, FisBuilder, MfOverride};
pub use membership::MembershipFunction;
pub use rules::{AggregatedOutput, Rule, RuleBase};
pub use variable::{
    FuzzifiedInput, LinguisticVariable, Term, SOC_LABELS, SOC_VARIABLE, STAY_LABELS,
    STAY_VARIABLE, WEIGHT_LABELS, WEIGHT_VARIABLE,
};

use thiserror::Error;

/// Errors from constructing or evaluating the fuzzy pipeline.
#[derive(Debug, Error)]
pub enum FuzzyError {
    /// A crisp input fell outside the normalized universe `[0, 1]`.
    #[error("input {value} is outside the unit interval [0, 1]")]
    OutOfRange { value: f64 },

    /// Membership-function breakpoints are out of order or outside `[0, 1]`.
    #[error("invalid membership breakpoints {points:?}: {reason}")]
    InvalidBreakpoints { points: Vec<f64>, reason: String },

    /// A variable was declared with a label set other than its canonical one.
    #[error("variable `{variable}` must have terms {expected:?}, got {found:?}")]
    WrongTermSet {
        variable: String,
        expected: Vec<String>,
        found: Vec<String>,
    },

    /// A rule or clip level referenced a label the target variable lacks.
    #[error("unknown label `{label}` for variable `{variable}`")]
    UnknownLabel { variable: String, label: String },

    /// The rule base does not cover every (soc, stay) pair exactly once.
    #[error("rule base must cover all 25 (soc, stay) pairs exactly once: {reason}")]
    IncompleteRuleBase { reason: String },

    /// Defuzzification was asked to aggregate a set with no fired term.
    #[error("aggregated output is empty: no rule fired with positive strength")]
    EmptyAggregate,

    /// Defuzzification grid too coarse to trust.
    #[error("defuzzification resolution {resolution} is below the minimum of {min}")]
    ResolutionTooSmall { resolution: usize, min: usize },

    /// The terms of a variable leave part of the universe with degree zero.
    #[error("terms of `{variable}` leave the universe uncovered near x = {x}")]
    CoverageGap { variable: String, x: f64 },

    /// A rule or membership-parameter file failed to parse.
    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    /// A rule or membership-parameter file could not be read.
    #[error("failed to read `{path}`")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}
