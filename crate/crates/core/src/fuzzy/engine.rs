use std::path::Path;

use super::membership::MembershipFunction;
use super::rules::{AggregatedOutput, RuleBase};
use super::variable::{
    LinguisticVariable, Term, SOC_LABELS, SOC_VARIABLE, STAY_LABELS, STAY_VARIABLE,
    WEIGHT_LABELS, WEIGHT_VARIABLE,
};
use super::FuzzyError;

/// Default number of sample points for centroid defuzzification.
pub const DEFAULT_RESOLUTION: usize = 1001;

/// Smallest accepted defuzzification grid.
pub const MIN_RESOLUTION: usize = 100;

// Computed weights are snapped to this grid so that inputs carrying the
// same information produce bit-equal weights for the scheduler's
// tie-breaking. The quantum is far below the resolution of the sample grid.
const WEIGHT_QUANTUM_INV: f64 = 1e9;

pub(crate) fn default_soc_terms() -> Vec<Term> {
    vec![
        Term::new("VL", MembershipFunction::Trapezoidal { a: 0.0, b: 0.0, c: 0.3, d: 0.5 }),
        Term::new("L", MembershipFunction::Triangular { a: 0.1, b: 0.3, c: 0.5 }),
        Term::new("M", MembershipFunction::Triangular { a: 0.3, b: 0.5, c: 0.7 }),
        Term::new("H", MembershipFunction::Triangular { a: 0.5, b: 0.7, c: 0.9 }),
        Term::new("VH", MembershipFunction::Trapezoidal { a: 0.7, b: 0.9, c: 1.0, d: 1.0 }),
    ]
}

pub(crate) fn default_stay_terms() -> Vec<Term> {
    vec![
        Term::new("VS", MembershipFunction::Trapezoidal { a: 0.0, b: 0.0, c: 0.3, d: 0.5 }),
        Term::new("S", MembershipFunction::Triangular { a: 0.1, b: 0.3, c: 0.5 }),
        Term::new("M", MembershipFunction::Triangular { a: 0.3, b: 0.5, c: 0.7 }),
        Term::new("L", MembershipFunction::Triangular { a: 0.5, b: 0.7, c: 0.9 }),
        Term::new("VL_long", MembershipFunction::Trapezoidal { a: 0.7, b: 0.9, c: 1.0, d: 1.0 }),
    ]
}

pub(crate) fn default_weight_terms() -> Vec<Term> {
    vec![
        Term::new("LW", MembershipFunction::Trapezoidal { a: 0.0, b: 0.0, c: 0.3, d: 0.5 }),
        Term::new("MW", MembershipFunction::Triangular { a: 0.3, b: 0.5, c: 0.7 }),
        Term::new("HW", MembershipFunction::Trapezoidal { a: 0.5, b: 0.7, c: 1.0, d: 1.0 }),
    ]
}

/// The assembled inference system: three linguistic variables, a complete
/// rule base and a defuzzification grid.
///
/// A `Fis` is immutable after construction, so it can be shared freely
/// across threads and evaluated concurrently.
#[derive(Debug, Clone, PartialEq)]
pub struct Fis {
    soc: LinguisticVariable,
    stay: LinguisticVariable,
    weight: LinguisticVariable,
    rules: RuleBase,
    resolution: usize,
}

impl Default for Fis {
    fn default() -> Self {
        FisBuilder::new().build().expect("built-in configuration is valid")
    }
}

impl Fis {
    pub fn builder() -> FisBuilder {
        FisBuilder::new()
    }

    pub fn soc_variable(&self) -> &LinguisticVariable {
        &self.soc
    }

    pub fn stay_variable(&self) -> &LinguisticVariable {
        &self.stay
    }

    pub fn weight_variable(&self) -> &LinguisticVariable {
        &self.weight
    }

    pub fn rule_base(&self) -> &RuleBase {
        &self.rules
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    /// Full pipeline: fuzzify both inputs, fire the rules, defuzzify.
    ///
    /// Deterministic; total on `[0, 1]^2` whenever both input variables
    /// cover the universe (which the default configuration does).
    pub fn compute_weight(&self, soc: f64, stay: f64) -> Result<f64, FuzzyError> {
        let soc_in = self.soc.fuzzify(soc)?;
        let stay_in = self.stay.fuzzify(stay)?;
        let agg = self.rules.fire(&soc_in, &stay_in)?;
        let raw = defuzzify_cog(&self.weight, &agg, self.resolution)?;
        Ok((raw * WEIGHT_QUANTUM_INV).round() / WEIGHT_QUANTUM_INV)
    }
}

/// Centroid (center-of-gravity) defuzzification of the aggregated output
/// set over a uniform grid of `resolution` sample points spanning `[0, 1]`:
/// `sum(y * mu(y)) / sum(mu(y))` with
/// `mu(y) = max over terms of min(clip(term), degree_term(y))`.
pub fn defuzzify_cog(
    var: &LinguisticVariable,
    agg: &AggregatedOutput,
    resolution: usize,
) -> Result<f64, FuzzyError> {
    if resolution < MIN_RESOLUTION {
        return Err(FuzzyError::ResolutionTooSmall {
            resolution,
            min: MIN_RESOLUTION,
        });
    }
    for (label, _) in agg.iter() {
        if var.term(label).is_none() {
            return Err(FuzzyError::UnknownLabel {
                variable: var.name().to_string(),
                label: label.to_string(),
            });
        }
    }
    if agg.is_empty() {
        return Err(FuzzyError::EmptyAggregate);
    }
    let clipped: Vec<(f64, &MembershipFunction)> = var
        .terms()
        .iter()
        .map(|t| (agg.clip(&t.label), &t.mf))
        .filter(|(clip, _)| *clip > 0.0)
        .collect();
    let step_count = (resolution - 1) as f64;
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..resolution {
        let y = i as f64 / step_count;
        let mut mu: f64 = 0.0;
        for (clip, mf) in &clipped {
            mu = mu.max(clip.min(mf.degree(y)));
        }
        num += y * mu;
        den += mu;
    }
    if den <= 0.0 {
        return Err(FuzzyError::EmptyAggregate);
    }
    Ok(num / den)
}

/// Builder over the built-in configuration. Term overrides, a custom rule
/// base and the grid resolution can be set before validation.
#[derive(Debug, Clone)]
pub struct FisBuilder {
    soc: Vec<Term>,
    stay: Vec<Term>,
    weight: Vec<Term>,
    rules: RuleBase,
    resolution: usize,
    require_input_coverage: bool,
}

impl Default for FisBuilder {
    fn default() -> Self {
        Self::new()
    }
}

impl FisBuilder {
    pub fn new() -> Self {
        Self {
            soc: default_soc_terms(),
            stay: default_stay_terms(),
            weight: default_weight_terms(),
            rules: RuleBase::standard(),
            resolution: DEFAULT_RESOLUTION,
            require_input_coverage: true,
        }
    }

    pub fn rules(mut self, rules: RuleBase) -> Self {
        self.rules = rules;
        self
    }

    pub fn resolution(mut self, resolution: usize) -> Self {
        self.resolution = resolution;
        self
    }

    /// Skips the coverage check on the two input variables, for
    /// experimenting with term sets that leave part of the universe
    /// uncovered. `compute_weight` then fails with an empty-aggregate
    /// error for inputs inside a gap. The output variable must always
    /// cover the universe.
    pub fn allow_input_gaps(mut self) -> Self {
        self.require_input_coverage = false;
        self
    }

    /// Replaces one term's membership function.
    pub fn set_term(
        mut self,
        variable: &str,
        label: &str,
        mf: MembershipFunction,
    ) -> Result<Self, FuzzyError> {
        let terms = match variable {
            SOC_VARIABLE => &mut self.soc,
            STAY_VARIABLE => &mut self.stay,
            WEIGHT_VARIABLE => &mut self.weight,
            _ => {
                return Err(FuzzyError::UnknownLabel {
                    variable: variable.into(),
                    label: label.into(),
                })
            }
        };
        let term = terms
            .iter_mut()
            .find(|t| t.label == label)
            .ok_or_else(|| FuzzyError::UnknownLabel {
                variable: variable.into(),
                label: label.into(),
            })?;
        term.mf = mf;
        Ok(self)
    }

    /// Applies a list of overrides, e.g. the output of
    /// [`load_mf_overrides`].
    pub fn apply_overrides(mut self, overrides: &[MfOverride]) -> Result<Self, FuzzyError> {
        for o in overrides {
            self = self.set_term(&o.variable, &o.label, o.mf)?;
        }
        Ok(self)
    }

    pub fn build(self) -> Result<Fis, FuzzyError> {
        let soc = LinguisticVariable::new(SOC_VARIABLE, self.soc, &SOC_LABELS)?;
        let stay = LinguisticVariable::new(STAY_VARIABLE, self.stay, &STAY_LABELS)?;
        let weight = LinguisticVariable::new(WEIGHT_VARIABLE, self.weight, &WEIGHT_LABELS)?;
        if let Some(x) = weight.coverage_gap() {
            return Err(FuzzyError::CoverageGap {
                variable: WEIGHT_VARIABLE.into(),
                x,
            });
        }
        if self.require_input_coverage {
            for var in [&soc, &stay] {
                if let Some(x) = var.coverage_gap() {
                    return Err(FuzzyError::CoverageGap {
                        variable: var.name().to_string(),
                        x,
                    });
                }
            }
        }
        if self.resolution < MIN_RESOLUTION {
            return Err(FuzzyError::ResolutionTooSmall {
                resolution: self.resolution,
                min: MIN_RESOLUTION,
            });
        }
        Ok(Fis {
            soc,
            stay,
            weight,
            rules: self.rules,
            resolution: self.resolution,
        })
    }
}

/// One parsed line of a membership-parameter file.
#[derive(Debug, Clone, PartialEq)]
pub struct MfOverride {
    pub variable: String,
    pub label: String,
    pub mf: MembershipFunction,
}

/// Parses a membership-parameter file: one term per line,
/// `<variable> <label> tri|trap <breakpoints...>` with `#` comments.
/// Terms not listed keep their built-in parameters.
pub fn load_mf_overrides(path: impl AsRef<Path>) -> Result<Vec<MfOverride>, FuzzyError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| FuzzyError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_mf_overrides(&text, &path.display().to_string())
}

/// Parses membership-parameter text; `origin` names the source in errors.
pub fn parse_mf_overrides(text: &str, origin: &str) -> Result<Vec<MfOverride>, FuzzyError> {
    let mut overrides = Vec::new();
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
        let mut fields = line.split_whitespace();
        let variable = fields
            .next()
            .ok_or_else(|| parse_err("missing variable".into()))?;
        let label = fields
            .next()
            .ok_or_else(|| parse_err("missing label".into()))?;
        let shape = fields
            .next()
            .ok_or_else(|| parse_err("missing shape (tri|trap)".into()))?;
        let points: Vec<f64> = fields
            .map(|f| {
                f.parse::<f64>()
                    .map_err(|_| parse_err(format!("invalid breakpoint `{f}`")))
            })
            .collect::<Result<_, _>>()?;
        let mf = match (shape, points.as_slice()) {
            ("tri", [a, b, c]) => MembershipFunction::triangular(*a, *b, *c)?,
            ("trap", [a, b, c, d]) => MembershipFunction::trapezoidal(*a, *b, *c, *d)?,
            ("tri", _) => return Err(parse_err("tri takes exactly 3 breakpoints".into())),
            ("trap", _) => return Err(parse_err("trap takes exactly 4 breakpoints".into())),
            _ => return Err(parse_err(format!("unknown shape `{shape}`"))),
        };
        overrides.push(MfOverride {
            variable: variable.to_string(),
            label: label.to_string(),
            mf,
        });
    }
    Ok(overrides)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clips(pairs: &[(&str, f64)]) -> AggregatedOutput {
        AggregatedOutput::from_clips(
            pairs.iter().map(|&(l, c)| (l.to_string(), c)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn centroid_of_symmetric_triangle_is_half() {
        let fis = Fis::default();
        let cog = defuzzify_cog(fis.weight_variable(), &clips(&[("MW", 1.0)]), 1001).unwrap();
        assert!((cog - 0.5).abs() < 1e-6);
    }

    #[test]
    fn centroid_of_high_shoulder() {
        // Closed form for Trapezoidal(0.5, 0.7, 1.0, 1.0) at clip 1:
        // area 0.4, first moment 0.31833..., centroid 0.795833...
        let fis = Fis::default();
        let cog = defuzzify_cog(fis.weight_variable(), &clips(&[("HW", 1.0)]), 1001).unwrap();
        assert!((cog - 0.795833).abs() < 1e-3, "got {cog}");
    }

    #[test]
    fn empty_aggregate_is_an_error() {
        let fis = Fis::default();
        let err = defuzzify_cog(fis.weight_variable(), &clips(&[]), 1001).unwrap_err();
        assert!(matches!(err, FuzzyError::EmptyAggregate));
        let err =
            defuzzify_cog(fis.weight_variable(), &clips(&[("MW", 0.0)]), 1001).unwrap_err();
        assert!(matches!(err, FuzzyError::EmptyAggregate));
    }

    #[test]
    fn coarse_resolution_is_rejected() {
        let fis = Fis::default();
        let err = defuzzify_cog(fis.weight_variable(), &clips(&[("MW", 1.0)]), 10).unwrap_err();
        assert!(matches!(err, FuzzyError::ResolutionTooSmall { .. }));
    }

    #[test]
    fn unknown_clip_label_is_rejected() {
        let fis = Fis::default();
        let err =
            defuzzify_cog(fis.weight_variable(), &clips(&[("XW", 1.0)]), 1001).unwrap_err();
        assert!(matches!(err, FuzzyError::UnknownLabel { .. }));
    }

    #[test]
    fn weight_for_high_soc_short_stay_is_high() {
        let fis = Fis::default();
        assert!(fis.compute_weight(0.9, 0.1).unwrap() >= 0.7);
    }

    #[test]
    fn weight_for_low_soc_long_stay_is_low() {
        let fis = Fis::default();
        assert!(fis.compute_weight(0.1, 0.9).unwrap() <= 0.3);
    }

    #[test]
    fn weight_at_midpoint_is_near_half() {
        let fis = Fis::default();
        assert!((fis.compute_weight(0.5, 0.5).unwrap() - 0.5).abs() <= 0.05);
    }

    #[test]
    fn compute_weight_is_bit_deterministic() {
        let fis = Fis::default();
        for &(s, t) in &[(0.23, 0.81), (0.5, 0.5), (0.0, 1.0), (0.97, 0.03)] {
            assert_eq!(
                fis.compute_weight(s, t).unwrap().to_bits(),
                fis.compute_weight(s, t).unwrap().to_bits()
            );
        }
    }

    #[test]
    fn uniform_rules_give_exactly_half_everywhere() {
        let fis = Fis::builder()
            .rules(RuleBase::uniform("MW").unwrap())
            .build()
            .unwrap();
        for i in 0..=10 {
            for j in 0..=10 {
                let w = fis
                    .compute_weight(i as f64 / 10.0, j as f64 / 10.0)
                    .unwrap();
                assert_eq!(w, 0.5, "at soc={i} stay={j}");
            }
        }
    }

    #[test]
    fn builder_rejects_uncovered_inputs_unless_allowed() {
        // Pull the long-stay shoulder back so nothing covers (0.9, 1.0].
        let narrow = MembershipFunction::trapezoidal(0.0, 0.0, 0.3, 0.5).unwrap();
        let strict = Fis::builder().set_term(STAY_VARIABLE, "VL_long", narrow).unwrap();
        assert!(matches!(
            strict.clone().build(),
            Err(FuzzyError::CoverageGap { .. })
        ));

        let lenient = strict.allow_input_gaps().build().unwrap();
        assert!(matches!(
            lenient.compute_weight(0.5, 0.95),
            Err(FuzzyError::EmptyAggregate)
        ));
        assert!(lenient.compute_weight(0.5, 0.5).is_ok());
    }

    #[test]
    fn builder_rejects_uncovered_output() {
        let narrow = MembershipFunction::triangular(0.4, 0.5, 0.6).unwrap();
        let b = Fis::builder()
            .set_term(WEIGHT_VARIABLE, "LW", narrow).unwrap()
            .set_term(WEIGHT_VARIABLE, "HW", narrow).unwrap()
            .allow_input_gaps();
        assert!(matches!(b.build(), Err(FuzzyError::CoverageGap { .. })));
    }

    #[test]
    fn mf_override_parsing() {
        let text = "\
# loosen the mid terms
soc M tri 0.0 0.5 0.7
stay_time M tri 0.0 0.5 0.7
stay_time VL_long trap 0.0 0.0 0.3 0.5
";
        let overrides = parse_mf_overrides(text, "inline").unwrap();
        assert_eq!(overrides.len(), 3);
        assert_eq!(overrides[0].variable, "soc");
        assert_eq!(
            overrides[2].mf,
            MembershipFunction::trapezoidal(0.0, 0.0, 0.3, 0.5).unwrap()
        );
        // This particular set no longer covers long stays, so the strict
        // build fails and the lenient build works.
        let applied = Fis::builder().apply_overrides(&overrides).unwrap();
        assert!(applied.clone().build().is_err());
        assert!(applied.allow_input_gaps().build().is_ok());
    }

    #[test]
    fn mf_parse_errors_carry_line_numbers() {
        let err = parse_mf_overrides("soc M tri 0.1 0.2\n", "inline").unwrap_err();
        assert!(matches!(err, FuzzyError::Parse { line: 1, .. }));
        let err = parse_mf_overrides("\nsoc M blob 0.1 0.2 0.3\n", "inline").unwrap_err();
        assert!(matches!(err, FuzzyError::Parse { line: 2, .. }));
    }

    #[test]
    fn set_term_rejects_unknown_names() {
        assert!(Fis::builder()
            .set_term("nope", "M", MembershipFunction::triangular(0.0, 0.5, 1.0).unwrap())
            .is_err());
        assert!(Fis::builder()
            .set_term(SOC_VARIABLE, "XX", MembershipFunction::triangular(0.0, 0.5, 1.0).unwrap())
            .is_err());
    }
}
