use serde::{Deserialize, Serialize};

use super::{airy_profile, RadialIntensity};
use crate::error::{Error, Result};

/// A named radial intensity in units of its characteristic radius.
pub trait RadialShape: Send + Sync + std::fmt::Debug {
    fn name(&self) -> &'static str;

    fn intensity(&self, s: f64) -> f64;

    /// Radius past which the shape is treated as zero.
    fn extent(&self) -> f64;

    fn table(&self, points: usize) -> Result<RadialIntensity> {
        RadialIntensity::sample(|s| self.intensity(s), self.extent(), points)
    }
}

/// `exp(-2 s²)`, the intensity of a unit-waist Gaussian beam.
#[derive(Debug, Clone, Copy, Default)]
pub struct GaussianShape;

impl RadialShape for GaussianShape {
    fn name(&self) -> &'static str {
        "gaussian"
    }
    fn intensity(&self, s: f64) -> f64 {
        (-2.0 * s * s).exp()
    }
    fn extent(&self) -> f64 {
        4.0
    }
}

/// Unit disk of constant intensity.
#[derive(Debug, Clone, Copy, Default)]
pub struct FlatTopShape;

impl RadialShape for FlatTopShape {
    fn name(&self) -> &'static str {
        "flat-top"
    }
    fn intensity(&self, s: f64) -> f64 {
        if s <= 1.0 {
            1.0
        } else {
            0.0
        }
    }
    fn extent(&self) -> f64 {
        1.0
    }
}

/// Intensity of the field `exp(a s²)` on the unit disk.
#[derive(Debug, Clone, Copy)]
pub struct ExponentialShape {
    pub a: f64,
}

impl RadialShape for ExponentialShape {
    fn name(&self) -> &'static str {
        "exponential"
    }
    fn intensity(&self, s: f64) -> f64 {
        if s <= 1.0 {
            (2.0 * self.a * s * s).exp()
        } else {
            0.0
        }
    }
    fn extent(&self) -> f64 {
        1.0
    }
}

/// `[J_n(2πs)/(2πs)]²` out to a few rings.
#[derive(Debug, Clone, Copy)]
pub struct AiryShape {
    pub order: i32,
    pub rings: f64,
}

impl RadialShape for AiryShape {
    fn name(&self) -> &'static str {
        "airy"
    }
    fn intensity(&self, s: f64) -> f64 {
        airy_profile(s, self.order)
    }
    fn extent(&self) -> f64 {
        self.rings
    }
}

pub const SHAPE_NAMES: [&str; 4] = ["gaussian", "flat-top", "exponential", "airy"];

/// Serializable shape selection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ShapeSpec {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<i32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rings: Option<f64>,
}

impl ShapeSpec {
    pub fn named(kind: &str) -> Self {
        Self {
            kind: kind.to_string(),
            a: None,
            order: None,
            rings: None,
        }
    }

    pub fn build(&self) -> Result<Box<dyn RadialShape>> {
        shape_by_name(self)
    }
}

pub fn shape_by_name(spec: &ShapeSpec) -> Result<Box<dyn RadialShape>> {
    match spec.kind.as_str() {
        "gaussian" => Ok(Box::new(GaussianShape)),
        "flat-top" => Ok(Box::new(FlatTopShape)),
        "exponential" => {
            let a = spec
                .a
                .ok_or_else(|| Error::Domain("exponential shape needs the parameter a".into()))?;
            if !a.is_finite() {
                return Err(Error::Domain(format!("exponential parameter must be finite, got {a}")));
            }
            Ok(Box::new(ExponentialShape { a }))
        }
        "airy" => {
            let order = spec.order.unwrap_or(1);
            if order != 0 && order != 1 {
                return Err(Error::Domain(format!("Airy order must be 0 or 1, got {order}")));
            }
            let rings = spec.rings.unwrap_or(3.0);
            if !(rings > 0.0) {
                return Err(Error::Domain(format!("Airy extent must be > 0, got {rings}")));
            }
            Ok(Box::new(AiryShape { order, rings }))
        }
        other => Err(Error::UnknownStrategy {
            kind: "intensity shape",
            name: other.to_string(),
            available: SHAPE_NAMES.join(", "),
        }),
    }
}
