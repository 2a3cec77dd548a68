use std::fmt;
use std::str::FromStr;

use crate::ModelError;

/// Regularization weight expressed either as a plain value or symbolically
/// as "c/p" — a constant over the sampling fraction — resolved when the
/// instance is generated. The experiment grids are parameterized this way
/// ("20/p", "100/p", "500/p").
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GammaRule {
    Fixed(f64),
    OverP(f64),
}

impl GammaRule {
    /// Concrete γ for a given sampling fraction.
    pub fn resolve(&self, p: f64) -> Result<f64, ModelError> {
        match *self {
            GammaRule::Fixed(v) => Ok(v),
            GammaRule::OverP(c) => {
                if !(p.is_finite() && p > 0.0) {
                    return Err(ModelError::InvalidParameter(format!(
                        "cannot resolve gamma rule at p = {p}"
                    )));
                }
                Ok(c / p)
            }
        }
    }
}

impl FromStr for GammaRule {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = |detail: &str| ModelError::InvalidParameter(format!("gamma rule '{s}': {detail}"));
        let (num, over_p) = match s.strip_suffix("/p") {
            Some(head) => (head.trim_end(), true),
            None => (s, false),
        };
        if num.contains('/') {
            return Err(bad("only the form 'c/p' or a plain number is understood"));
        }
        let v: f64 = num.parse().map_err(|_| bad("not a number"))?;
        if !(v.is_finite() && v > 0.0) {
            return Err(bad("must be finite and positive"));
        }
        Ok(if over_p { GammaRule::OverP(v) } else { GammaRule::Fixed(v) })
    }
}

impl fmt::Display for GammaRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GammaRule::Fixed(v) => write!(f, "{v}"),
            GammaRule::OverP(c) => write!(f, "{c}/p"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_both_forms() {
        assert_eq!("20/p".parse::<GammaRule>().unwrap(), GammaRule::OverP(20.0));
        assert_eq!("0.5".parse::<GammaRule>().unwrap(), GammaRule::Fixed(0.5));
        assert_eq!(" 100 /p".parse::<GammaRule>().unwrap(), GammaRule::OverP(100.0));
    }

    #[test]
    fn resolves_over_p() {
        let g = "100/p".parse::<GammaRule>().unwrap();
        assert_eq!(g.resolve(0.3).unwrap(), 100.0 / 0.3);
        assert!(g.resolve(0.0).is_err());
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "p", "/p", "1/2", "nan", "inf/p", "-3", "1e999"] {
            assert!(s.parse::<GammaRule>().is_err(), "accepted {s:?}");
        }
    }

    #[test]
    fn display_round_trips() {
        for s in ["20/p", "0.5", "12.25/p"] {
            let g: GammaRule = s.parse().unwrap();
            let back: GammaRule = g.to_string().parse().unwrap();
            assert_eq!(g, back);
        }
    }
}
