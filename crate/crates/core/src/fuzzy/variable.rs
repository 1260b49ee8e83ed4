use super::{FuzzyError, MembershipFunction};

/// Canonical variable names.
pub const SOC_VARIABLE: &str = "soc";
pub const STAY_VARIABLE: &str = "stay_time";
pub const WEIGHT_VARIABLE: &str = "weight";

/// Term labels of the `soc` input, from very low to very high charge.
pub const SOC_LABELS: [&str; 5] = ["VL", "L", "M", "H", "VH"];

/// Term labels of the `stay_time` input, from very short to very long stays.
/// The long-stay term is spelled `VL_long` to keep it distinct from the
/// low-charge `VL` of `soc`.
pub const STAY_LABELS: [&str; 5] = ["VS", "S", "M", "L", "VL_long"];

/// Term labels of the `weight` output: low, medium, high weight.
pub const WEIGHT_LABELS: [&str; 3] = ["LW", "MW", "HW"];

/// One labeled fuzzy set of a linguistic variable.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub label: String,
    pub mf: MembershipFunction,
}

impl Term {
    pub fn new(label: impl Into<String>, mf: MembershipFunction) -> Self {
        Self {
            label: label.into(),
            mf,
        }
    }
}

/// A named variable with an ordered list of labeled terms.
#[derive(Debug, Clone, PartialEq)]
pub struct LinguisticVariable {
    name: String,
    terms: Vec<Term>,
}

impl LinguisticVariable {
    /// Builds a variable whose term labels must match `expected` exactly,
    /// in order.
    pub fn new(
        name: impl Into<String>,
        terms: Vec<Term>,
        expected: &[&str],
    ) -> Result<Self, FuzzyError> {
        let name = name.into();
        let found: Vec<String> = terms.iter().map(|t| t.label.clone()).collect();
        if found != expected {
            return Err(FuzzyError::WrongTermSet {
                variable: name,
                expected: expected.iter().map(|s| s.to_string()).collect(),
                found,
            });
        }
        Ok(Self { name, terms })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn term(&self, label: &str) -> Option<&Term> {
        self.terms.iter().find(|t| t.label == label)
    }

    /// Membership degree of `x` in every term.
    pub fn fuzzify(&self, x: f64) -> Result<FuzzifiedInput, FuzzyError> {
        if !(0.0..=1.0).contains(&x) {
            return Err(FuzzyError::OutOfRange { value: x });
        }
        let degrees = self
            .terms
            .iter()
            .map(|t| (t.label.clone(), t.mf.degree(x)))
            .collect();
        Ok(FuzzifiedInput { degrees })
    }

    /// First grid point (step 1/1000) where every term has degree zero,
    /// if any. Such a gap would let defuzzification see an empty aggregate.
    pub fn coverage_gap(&self) -> Option<f64> {
        (0..=1000).map(|i| i as f64 / 1000.0).find(|&x| {
            self.terms.iter().all(|t| t.mf.degree(x) <= 0.0)
        })
    }
}

/// Membership degrees of one crisp input across a variable's terms,
/// in term order.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzifiedInput {
    degrees: Vec<(String, f64)>,
}

impl FuzzifiedInput {
    /// Builds degrees directly; intended for tests and rule experiments.
    pub fn from_degrees(degrees: Vec<(String, f64)>) -> Self {
        Self { degrees }
    }

    pub fn degree(&self, label: &str) -> Option<f64> {
        self.degrees
            .iter()
            .find(|(l, _)| l == label)
            .map(|&(_, d)| d)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.degrees.iter().map(|(l, d)| (l.as_str(), *d))
    }
}
