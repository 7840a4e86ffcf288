use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::afe::StripConstants;
use crate::error::{Error, Result};

/// Search limits for the budget planner.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BudgetCaps {
    /// Largest admissible R.
    pub max_r: f64,
    /// Largest admissible ln Q₀.
    pub max_ln_q0: f64,
}

impl Default for BudgetCaps {
    fn default() -> Self {
        BudgetCaps {
            max_r: 1e15,
            max_ln_q0: 1e250,
        }
    }
}

/// User-supplied values for the effectively computable but unspecified
/// constants. Defaults are 1; every budget derived from them is conditional
/// on these choices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ConstantsRegistry {
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub c5: f64,
    #[serde(rename = "C0")]
    pub big_c0: f64,
    #[serde(rename = "C1")]
    pub big_c1: f64,
    #[serde(rename = "C2")]
    pub big_c2: f64,
    #[serde(rename = "C3")]
    pub big_c3: f64,
    #[serde(rename = "C4")]
    pub big_c4: f64,
    #[serde(rename = "C5")]
    pub big_c5: f64,
    pub eta: f64,
    pub theta: f64,
    pub xi: f64,
    /// Decay exponent ν; `None` means the fitted value from the truncation
    /// experiments is used.
    pub nu: Option<f64>,
    pub caps: BudgetCaps,
}

impl Default for ConstantsRegistry {
    fn default() -> Self {
        let strip = StripConstants::default();
        ConstantsRegistry {
            c0: 1.0,
            c1: 1.0,
            c2: 1.0,
            c3: 1.0,
            c4: 1.0,
            c5: 1.0,
            big_c0: 1.0,
            big_c1: 1.0,
            big_c2: 1.0,
            big_c3: 1.0,
            big_c4: 1.0,
            big_c5: 1.0,
            eta: strip.eta,
            theta: strip.theta,
            xi: strip.xi,
            nu: None,
            caps: BudgetCaps::default(),
        }
    }
}

impl ConstantsRegistry {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let reg: ConstantsRegistry = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        reg.validate()?;
        Ok(reg)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| Error::Parse(format!("{}: {e}", path.as_ref().display())))?;
        Self::from_json_str(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("registry serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let named = [
            ("c0", self.c0),
            ("c1", self.c1),
            ("c2", self.c2),
            ("c3", self.c3),
            ("c4", self.c4),
            ("c5", self.c5),
            ("C0", self.big_c0),
            ("C1", self.big_c1),
            ("C2", self.big_c2),
            ("C3", self.big_c3),
            ("C4", self.big_c4),
            ("C5", self.big_c5),
        ];
        for (name, v) in named {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Domain(format!("{name} = {v} must be positive and finite")));
            }
        }
        let strip = StripConstants::default();
        for (name, v, want) in [
            ("eta", self.eta, strip.eta),
            ("theta", self.theta, strip.theta),
            ("xi", self.xi, strip.xi),
        ] {
            if (v - want).abs() > 1e-15 * want.abs() {
                return Err(Error::Domain(format!("{name} = {v} differs from the fixed value {want}")));
            }
        }
        if let Some(nu) = self.nu {
            if !(nu > 0.0 && nu.is_finite()) {
                return Err(Error::Domain(format!("nu = {nu} must be positive")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_roundtrip_and_defaults() {
        let reg = ConstantsRegistry::default();
        let back = ConstantsRegistry::from_json_str(&reg.to_json()).unwrap();
        assert_eq!(reg, back);
        let partial = ConstantsRegistry::from_json_str(r#"{"c0": 2.5, "C2": 3.0, "nu": 0.2}"#).unwrap();
        assert_eq!(partial.c0, 2.5);
        assert_eq!(partial.big_c2, 3.0);
        assert_eq!(partial.c1, 1.0);
        assert_eq!(partial.nu, Some(0.2));
    }

    #[test]
    fn rejects_bad_values() {
        assert!(ConstantsRegistry::from_json_str(r#"{"c3": 0}"#).is_err());
        assert!(ConstantsRegistry::from_json_str(r#"{"xi": 0.5}"#).is_err());
        assert!(ConstantsRegistry::from_json_str("not json").is_err());
    }
}
