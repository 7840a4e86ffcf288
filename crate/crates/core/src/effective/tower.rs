use std::cmp::Ordering;
use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

/// Largest t with exp(t) finite.
const EXP_LIMIT: f64 = 709.782_712_893_384;

/// A non-negative magnitude exp^height(top), exp applied `height` times.
///
/// Normalized so that height > 0 implies top ≥ EXP_LIMIT, which makes the
/// lexicographic order on (height, top) the order of the values. Sums are
/// exact up to the rounding of `top` once a summand is too large for f64.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tower {
    height: u32,
    top: f64,
}

impl Tower {
    pub fn new(x: f64) -> Self {
        Tower { height: 0, top: x }
    }

    /// The magnitude whose natural log is `ln_x`.
    pub fn from_ln(ln_x: f64) -> Self {
        Tower { height: 1, top: ln_x }.normalized()
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn top(&self) -> f64 {
        self.top
    }

    fn normalized(mut self) -> Self {
        while self.height > 0 && self.top < EXP_LIMIT {
            self.top = self.top.exp();
            self.height -= 1;
        }
        self
    }

    /// The value as an f64, or `None` once it overflows.
    pub fn to_f64(&self) -> Option<f64> {
        (self.height == 0).then_some(self.top)
    }

    /// ln of the value (values must be positive).
    pub fn ln(&self) -> Tower {
        if self.height == 0 {
            Tower::new(self.top.ln())
        } else {
            Tower {
                height: self.height - 1,
                top: self.top,
            }
        }
    }

    pub fn exp(&self) -> Tower {
        Tower {
            height: self.height + 1,
            top: self.top,
        }
        .normalized()
    }

    /// ln of the value as an f64 when representable.
    pub fn ln_f64(&self) -> Option<f64> {
        self.ln().to_f64()
    }

    /// Sum of two non-negative magnitudes.
    pub fn add(&self, other: &Tower) -> Tower {
        let (big, small) = if self >= other { (self, other) } else { (other, self) };
        match (big.height, small.height) {
            (0, 0) => {
                let s = big.top + small.top;
                if s.is_finite() {
                    Tower::new(s)
                } else {
                    // ln(a+b) = ln a + ln(1 + b/a)
                    Tower::from_ln(big.top.ln() + (small.top / big.top).ln_1p())
                }
            }
            (1, 0) => Tower::from_ln(big.top + (small.top.ln() - big.top).exp().ln_1p()),
            (1, 1) => Tower::from_ln(big.top + (small.top - big.top).exp().ln_1p()),
            // Relative contribution below the f64 resolution of `big.top`.
            _ => *big,
        }
    }

    /// Product of two positive magnitudes.
    pub fn mul(&self, other: &Tower) -> Tower {
        if let (Some(a), Some(b)) = (self.to_f64(), other.to_f64()) {
            let p = a * b;
            if p.is_finite() {
                return Tower::new(p);
            }
        }
        self.ln().add_signed(&other.ln()).exp()
    }

    /// Multiplies by a positive f64.
    pub fn scale(&self, c: f64) -> Tower {
        self.mul(&Tower::new(c))
    }

    /// Sum where either operand may be negative while small.
    pub(crate) fn add_signed(&self, other: &Tower) -> Tower {
        match (self.to_f64(), other.to_f64()) {
            (Some(a), Some(b)) => {
                let s = a + b;
                if s.is_finite() {
                    Tower::new(s)
                } else {
                    self.add(other)
                }
            }
            (Some(a), None) if a < 0.0 => subtract_small(other, -a),
            (None, Some(b)) if b < 0.0 => subtract_small(self, -b),
            _ => self.add(other),
        }
    }

    pub fn max(self, other: Tower) -> Tower {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// Human-readable scale of `top`: "linear", "ln", "ln ln", …
    pub fn scale_label(&self) -> String {
        if self.height == 0 {
            "linear".into()
        } else {
            vec!["ln"; self.height as usize].join(" ")
        }
    }
}

/// x − b for huge x and b ≥ 0 representable.
fn subtract_small(x: &Tower, b: f64) -> Tower {
    if x.height == 1 {
        Tower::from_ln(x.top + (-(b.ln() - x.top).exp()).ln_1p())
    } else {
        *x
    }
}

impl PartialOrd for Tower {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.height.cmp(&other.height) {
            Ordering::Equal => self.top.partial_cmp(&other.top),
            o => Some(o),
        }
    }
}

impl fmt::Display for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.height {
            0 => write!(f, "{:e}", self.top),
            1 => write!(f, "exp({:.6e})", self.top),
            h => write!(f, "exp^{h}({:.6e})", self.top),
        }
    }
}

impl Serialize for Tower {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Tower", 2)?;
        s.serialize_field("value", &self.top)?;
        s.serialize_field("scale", &self.scale_label())?;
        s.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn agrees_with_direct_arithmetic() {
        let xs = [0.5, 3.0, 1e10, 7.5e150, 1e300];
        for &a in &xs {
            for &b in &xs {
                let s = Tower::new(a).add(&Tower::new(b));
                if let Some(v) = s.to_f64() {
                    assert!((v - (a + b)).abs() <= 1e-15 * (a + b));
                }
                let p = Tower::new(a).mul(&Tower::new(b));
                match p.to_f64() {
                    Some(v) => assert!((v / (a * b) - 1.0).abs() < 1e-12),
                    None => assert!(((p.ln_f64().unwrap()) - (a.ln() + b.ln())).abs() < 1e-12 * (a.ln() + b.ln())),
                }
            }
        }
    }

    #[test]
    fn ordering_across_heights() {
        let big = Tower::from_ln(800.0);
        assert!(big > Tower::new(f64::MAX));
        assert!(Tower::from_ln(5.0).to_f64().is_some());
        let huge = Tower::from_ln(1e300).exp();
        assert_eq!(huge.height(), 2);
        assert!(huge > big);
    }

    #[test]
    fn ln_exp_roundtrip() {
        let x = Tower::from_ln(1e5);
        assert_eq!(x.ln().to_f64(), Some(1e5));
        assert_eq!(x.ln().exp(), x);
        assert_eq!(x.scale_label(), "ln");
    }

    #[test]
    fn log_space_sum() {
        let a = Tower::from_ln(1000.0);
        let b = Tower::from_ln(1000.0);
        let s = a.add(&b).ln_f64().unwrap();
        assert!((s - (1000.0 + 2f64.ln())).abs() < 1e-12);
    }
}
