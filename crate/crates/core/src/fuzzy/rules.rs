use std::fmt;
use std::path::Path;

use super::variable::{FuzzifiedInput, SOC_LABELS, STAY_LABELS, WEIGHT_LABELS};
use super::FuzzyError;

/// One inference rule: IF soc IS `soc` AND stay_time IS `stay`
/// THEN weight IS `weight`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub soc: String,
    pub stay: String,
    pub weight: String,
}

impl Rule {
    pub fn new(
        soc: impl Into<String>,
        stay: impl Into<String>,
        weight: impl Into<String>,
    ) -> Self {
        Self {
            soc: soc.into(),
            stay: stay.into(),
            weight: weight.into(),
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} -> {}", self.soc, self.stay, self.weight)
    }
}

/// The complete 5x5 rule matrix: every (soc, stay) label pair exactly once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleBase {
    rules: Vec<Rule>,
}

/// Built-in consequents, row per stay label (VS..VL_long), column per soc
/// label (VL..VH). Weight grows with state of charge and shrinks with stay
/// length, so vehicles that need little charger time and leave soon come
/// first.
const DEFAULT_MATRIX: [[&str; 5]; 5] = [
    ["MW", "MW", "HW", "HW", "HW"], // VS
    ["MW", "MW", "MW", "HW", "HW"], // S
    ["LW", "MW", "MW", "MW", "HW"], // M
    ["LW", "LW", "MW", "MW", "MW"], // L
    ["LW", "LW", "LW", "MW", "MW"], // VL_long
];

impl RuleBase {
    /// Validates that `rules` form a complete matrix over the canonical
    /// label sets.
    pub fn new(rules: Vec<Rule>) -> Result<Self, FuzzyError> {
        if rules.len() != 25 {
            return Err(FuzzyError::IncompleteRuleBase {
                reason: format!("expected 25 rules, got {}", rules.len()),
            });
        }
        let mut seen = [[false; 5]; 5];
        for rule in &rules {
            let si = label_index(&SOC_LABELS, &rule.soc).ok_or_else(|| {
                FuzzyError::UnknownLabel {
                    variable: "soc".into(),
                    label: rule.soc.clone(),
                }
            })?;
            let ti = label_index(&STAY_LABELS, &rule.stay).ok_or_else(|| {
                FuzzyError::UnknownLabel {
                    variable: "stay_time".into(),
                    label: rule.stay.clone(),
                }
            })?;
            if label_index(&WEIGHT_LABELS, &rule.weight).is_none() {
                return Err(FuzzyError::UnknownLabel {
                    variable: "weight".into(),
                    label: rule.weight.clone(),
                });
            }
            if seen[si][ti] {
                return Err(FuzzyError::IncompleteRuleBase {
                    reason: format!("pair ({}, {}) appears more than once", rule.soc, rule.stay),
                });
            }
            seen[si][ti] = true;
        }
        Ok(Self { rules })
    }

    /// The built-in monotone rule matrix.
    pub fn standard() -> Self {
        let mut rules = Vec::with_capacity(25);
        for (ti, stay) in STAY_LABELS.iter().enumerate() {
            for (si, soc) in SOC_LABELS.iter().enumerate() {
                rules.push(Rule::new(*soc, *stay, DEFAULT_MATRIX[ti][si]));
            }
        }
        Self::new(rules).expect("built-in matrix is complete")
    }

    /// All 25 rules mapped to one consequent. With every rule pointing at
    /// the symmetric `MW` term this makes the weight constant, which turns
    /// weight-ordered dispatch into plain arrival order.
    pub fn uniform(weight_label: &str) -> Result<Self, FuzzyError> {
        if label_index(&WEIGHT_LABELS, weight_label).is_none() {
            return Err(FuzzyError::UnknownLabel {
                variable: "weight".into(),
                label: weight_label.into(),
            });
        }
        let rules = STAY_LABELS
            .iter()
            .flat_map(|stay| {
                SOC_LABELS
                    .iter()
                    .map(move |soc| Rule::new(*soc, *stay, weight_label))
            })
            .collect();
        Self::new(rules)
    }

    /// Parses a rule file: one `<soc> <stay> -> <weight>` per line, `#`
    /// comments and blank lines ignored. In the stay position `VL` is
    /// accepted as shorthand for `VL_long`. The file must define the
    /// complete 25-rule matrix.
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self, FuzzyError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| FuzzyError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Parses rule-file text; `origin` names the source in errors.
    pub fn parse(text: &str, origin: &str) -> Result<Self, FuzzyError> {
        let mut rules = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parse_err = |message: String| FuzzyError::Parse {
                path: origin.to_string(),
                line: idx + 1,
                message,
            };
            let (lhs, rhs) = line
                .split_once("->")
                .ok_or_else(|| parse_err("expected `<soc> <stay> -> <weight>`".into()))?;
            let mut inputs = lhs.split_whitespace();
            let soc = inputs
                .next()
                .ok_or_else(|| parse_err("missing soc label".into()))?;
            let stay = inputs
                .next()
                .ok_or_else(|| parse_err("missing stay label".into()))?;
            if inputs.next().is_some() {
                return Err(parse_err("too many antecedent labels".into()));
            }
            let mut outputs = rhs.split_whitespace();
            let weight = outputs
                .next()
                .ok_or_else(|| parse_err("missing weight label".into()))?;
            if outputs.next().is_some() {
                return Err(parse_err("too many consequent labels".into()));
            }
            let stay = if stay == "VL" { "VL_long" } else { stay };
            rules.push(Rule::new(soc, stay, weight));
        }
        Self::new(rules)
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    /// Renders the rule base in the rule-file format.
    pub fn to_file_format(&self) -> String {
        let mut out = String::from("# <soc> <stay> -> <weight>\n");
        for rule in &self.rules {
            out.push_str(&rule.to_string());
            out.push('\n');
        }
        out
    }

    /// Mamdani firing: each rule fires with strength
    /// `min(degree(soc), degree(stay))`; per output term the clip level is
    /// the max firing strength over rules with that consequent.
    pub fn fire(
        &self,
        soc_in: &FuzzifiedInput,
        stay_in: &FuzzifiedInput,
    ) -> Result<AggregatedOutput, FuzzyError> {
        let mut clips = [0.0f64; 3];
        for rule in &self.rules {
            let soc_deg = soc_in
                .degree(&rule.soc)
                .ok_or_else(|| FuzzyError::UnknownLabel {
                    variable: "soc".into(),
                    label: rule.soc.clone(),
                })?;
            let stay_deg = stay_in
                .degree(&rule.stay)
                .ok_or_else(|| FuzzyError::UnknownLabel {
                    variable: "stay_time".into(),
                    label: rule.stay.clone(),
                })?;
            let strength = soc_deg.min(stay_deg);
            let wi = label_index(&WEIGHT_LABELS, &rule.weight).expect("validated at construction");
            clips[wi] = clips[wi].max(strength);
        }
        Ok(AggregatedOutput {
            clip_levels: WEIGHT_LABELS
                .iter()
                .zip(clips)
                .map(|(l, c)| (l.to_string(), c))
                .collect(),
        })
    }
}

/// Clip levels per output term. The aggregated fuzzy set is implicit:
/// `mu(y) = max over terms of min(clip(term), degree_term(y))`.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregatedOutput {
    clip_levels: Vec<(String, f64)>,
}

impl AggregatedOutput {
    /// Builds clip levels directly; levels must lie in `[0, 1]`.
    pub fn from_clips(clip_levels: Vec<(String, f64)>) -> Result<Self, FuzzyError> {
        for (_, c) in &clip_levels {
            if !(0.0..=1.0).contains(c) {
                return Err(FuzzyError::OutOfRange { value: *c });
            }
        }
        Ok(Self { clip_levels })
    }

    /// Clip level for `label`; unlisted terms are unfired (zero).
    pub fn clip(&self, label: &str) -> f64 {
        self.clip_levels
            .iter()
            .find(|(l, _)| l == label)
            .map(|&(_, c)| c)
            .unwrap_or(0.0)
    }

    /// True when no term fired with positive strength.
    pub fn is_empty(&self) -> bool {
        self.clip_levels.iter().all(|&(_, c)| c <= 0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.clip_levels.iter().map(|(l, c)| (l.as_str(), *c))
    }
}

fn label_index(labels: &[&str], label: &str) -> Option<usize> {
    labels.iter().position(|l| *l == label)
}
