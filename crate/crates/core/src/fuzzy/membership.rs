use super::FuzzyError;

/// A piecewise-linear membership function on the normalized universe `[0, 1]`.
///
/// Breakpoints must be ordered (`a <= b <= c` resp. `a <= b <= c <= d`) and
/// lie in `[0, 1]`. Zero-width edges (`a == b` or `c == d`) are allowed and
/// evaluate as a vertical step: the shared breakpoint takes the plateau
/// value 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MembershipFunction {
    /// Rises linearly from `a` to the peak `b`, falls linearly to `c`.
    Triangular { a: f64, b: f64, c: f64 },
    /// Rises from `a` to `b`, holds 1 on `[b, c]`, falls to `d`.
    Trapezoidal { a: f64, b: f64, c: f64, d: f64 },
}

impl MembershipFunction {
    pub fn triangular(a: f64, b: f64, c: f64) -> Result<Self, FuzzyError> {
        check_breakpoints(&[a, b, c])?;
        Ok(Self::Triangular { a, b, c })
    }

    pub fn trapezoidal(a: f64, b: f64, c: f64, d: f64) -> Result<Self, FuzzyError> {
        check_breakpoints(&[a, b, c, d])?;
        Ok(Self::Trapezoidal { a, b, c, d })
    }

    /// Membership degree of `x`, which must lie in `[0, 1]`.
    pub fn eval(&self, x: f64) -> Result<f64, FuzzyError> {
        if !(0.0..=1.0).contains(&x) {
            return Err(FuzzyError::OutOfRange { value: x });
        }
        Ok(self.degree(x))
    }

    /// Unchecked evaluation, total on all of `f64`.
    pub(crate) fn degree(&self, x: f64) -> f64 {
        match *self {
            Self::Triangular { a, b, c } => {
                if x == b {
                    1.0
                } else if x <= a || x >= c {
                    0.0
                } else if x < b {
                    (x - a) / (b - a)
                } else {
                    (c - x) / (c - b)
                }
            }
            Self::Trapezoidal { a, b, c, d } => {
                if (b..=c).contains(&x) {
                    1.0
                } else if x <= a || x >= d {
                    0.0
                } else if x < b {
                    (x - a) / (b - a)
                } else {
                    (d - x) / (d - c)
                }
            }
        }
    }

    /// The closed interval outside of which the degree is zero.
    pub fn support(&self) -> (f64, f64) {
        match *self {
            Self::Triangular { a, c, .. } => (a, c),
            Self::Trapezoidal { a, d, .. } => (a, d),
        }
    }
}

fn check_breakpoints(points: &[f64]) -> Result<(), FuzzyError> {
    let ordered = points.windows(2).all(|w| w[0] <= w[1]);
    if !ordered {
        return Err(FuzzyError::InvalidBreakpoints {
            points: points.to_vec(),
            reason: "breakpoints must be non-decreasing".into(),
        });
    }
    if points.iter().any(|p| !(0.0..=1.0).contains(p)) {
        return Err(FuzzyError::InvalidBreakpoints {
            points: points.to_vec(),
            reason: "breakpoints must lie in [0, 1]".into(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangular_peak_is_one() {
        let mf = MembershipFunction::triangular(0.1, 0.3, 0.5).unwrap();
        assert_eq!(mf.eval(0.3).unwrap(), 1.0);
    }

    #[test]
    fn triangular_outside_support_is_zero() {
        let mf = MembershipFunction::triangular(0.1, 0.3, 0.5).unwrap();
        assert_eq!(mf.eval(0.9).unwrap(), 0.0);
        assert_eq!(mf.eval(0.1).unwrap(), 0.0);
        assert_eq!(mf.eval(0.5).unwrap(), 0.0);
    }

    #[test]
    fn trapezoid_descending_edge() {
        // (0.5 - 0.4) / (0.5 - 0.3) on the falling edge.
        let mf = MembershipFunction::trapezoidal(0.0, 0.0, 0.3, 0.5).unwrap();
        assert!((mf.eval(0.4).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn zero_width_edge_is_a_step() {
        let mf = MembershipFunction::trapezoidal(0.0, 0.0, 0.3, 0.5).unwrap();
        assert_eq!(mf.eval(0.0).unwrap(), 1.0);
        let right = MembershipFunction::trapezoidal(0.7, 0.9, 1.0, 1.0).unwrap();
        assert_eq!(right.eval(1.0).unwrap(), 1.0);
    }

    #[test]
    fn degenerate_triangle_is_a_singleton() {
        let mf = MembershipFunction::triangular(0.5, 0.5, 0.5).unwrap();
        assert_eq!(mf.eval(0.5).unwrap(), 1.0);
        assert_eq!(mf.eval(0.499).unwrap(), 0.0);
    }

    #[test]
    fn rejects_unordered_breakpoints() {
        assert!(MembershipFunction::triangular(0.5, 0.3, 0.7).is_err());
        assert!(MembershipFunction::trapezoidal(0.0, 0.4, 0.3, 0.5).is_err());
    }

    #[test]
    fn rejects_breakpoints_outside_unit_interval() {
        assert!(MembershipFunction::triangular(-0.1, 0.3, 0.5).is_err());
        assert!(MembershipFunction::trapezoidal(0.5, 0.7, 1.0, 1.1).is_err());
    }

    #[test]
    fn rejects_out_of_range_input() {
        let mf = MembershipFunction::triangular(0.1, 0.3, 0.5).unwrap();
        assert!(matches!(mf.eval(1.2), Err(FuzzyError::OutOfRange { .. })));
        assert!(matches!(mf.eval(-0.2), Err(FuzzyError::OutOfRange { .. })));
    }
}
