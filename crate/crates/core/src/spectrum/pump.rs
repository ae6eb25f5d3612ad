use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::bessel_j;

/// Closed-form family a pump belongs to, if any.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClosedForm {
    Gaussian,
    TruncatedExponential { a: f64 },
}

/// A radially symmetric pump field `Φ(r)`.
///
/// Radii are physical (same unit as the waists); implementations scale by the
/// pump waist `w_p` themselves.
pub trait PumpProfile: Send + Sync + fmt::Debug {
    /// Registry name of the profile kind.
    fn name(&self) -> &'static str;

    fn amplitude(&self, r: f64, w_p: f64) -> f64;

    /// Radii where the field is discontinuous or has a kink.
    fn breakpoints(&self, _w_p: f64) -> Vec<f64> {
        Vec::new()
    }

    /// Radius beyond which the field vanishes identically.
    fn support(&self, _w_p: f64) -> Option<f64> {
        None
    }

    /// Whether `Φ(r) ≥ 0` everywhere (overlap amplitudes are then non-negative).
    fn is_nonnegative(&self) -> bool {
        true
    }

    fn closed_form(&self) -> Option<ClosedForm> {
        None
    }

    fn spec(&self) -> PumpSpec;
}

/// `exp(-r²/w_p²)`, untruncated.
#[derive(Debug, Clone, Copy, Default)]
pub struct GaussianPump;

impl PumpProfile for GaussianPump {
    fn name(&self) -> &'static str {
        "gaussian"
    }
    fn amplitude(&self, r: f64, w_p: f64) -> f64 {
        (-(r / w_p).powi(2)).exp()
    }
    fn closed_form(&self) -> Option<ClosedForm> {
        Some(ClosedForm::Gaussian)
    }
    fn spec(&self) -> PumpSpec {
        PumpSpec::named("gaussian")
    }
}

/// `exp(a r²/w_p²)` inside the pump waist and exactly zero outside.
#[derive(Debug, Clone, Copy)]
pub struct TruncatedExponentialPump {
    pub a: f64,
}

impl PumpProfile for TruncatedExponentialPump {
    fn name(&self) -> &'static str {
        "truncated-exponential"
    }
    fn amplitude(&self, r: f64, w_p: f64) -> f64 {
        if r <= w_p {
            (self.a * (r / w_p).powi(2)).exp()
        } else {
            0.0
        }
    }
    fn breakpoints(&self, w_p: f64) -> Vec<f64> {
        vec![w_p]
    }
    fn support(&self, w_p: f64) -> Option<f64> {
        Some(w_p)
    }
    fn closed_form(&self) -> Option<ClosedForm> {
        Some(ClosedForm::TruncatedExponential { a: self.a })
    }
    fn spec(&self) -> PumpSpec {
        PumpSpec {
            a: Some(self.a),
            ..PumpSpec::named("truncated-exponential")
        }
    }
}

/// Airy-type field `J_n(2πρ)/(2πρ)` with `ρ = r / w_p`.
///
/// Order 1 is the physical Airy disk (limit 1/2 on axis); order 0 is
/// singular on axis and only its integrals are meaningful.
#[derive(Debug, Clone, Copy)]
pub struct AiryPump {
    pub bessel_order: u8,
}

impl AiryPump {
    pub fn new(bessel_order: u8) -> Result<Self> {
        if bessel_order > 1 {
            return Err(Error::Domain(format!("Airy Bessel order must be 0 or 1, got {bessel_order}")));
        }
        Ok(Self { bessel_order })
    }
}

impl PumpProfile for AiryPump {
    fn name(&self) -> &'static str {
        "airy"
    }
    fn amplitude(&self, r: f64, w_p: f64) -> f64 {
        let x = 2.0 * PI * r / w_p;
        if x == 0.0 {
            return if self.bessel_order == 1 { 0.5 } else { f64::INFINITY };
        }
        bessel_j(self.bessel_order as i32, x) / x
    }
    fn is_nonnegative(&self) -> bool {
        false
    }
    fn spec(&self) -> PumpSpec {
        PumpSpec {
            bessel_order: Some(self.bessel_order),
            ..PumpSpec::named("airy")
        }
    }
}

/// Piecewise-linear field through `(r / w_p, amplitude)` samples, zero past
/// the last sample.
#[derive(Debug, Clone)]
pub struct TabulatedPump {
    radii: Vec<f64>,
    values: Vec<f64>,
}

impl TabulatedPump {
    pub fn new(samples: &[(f64, f64)]) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::Domain("tabulated pump needs at least two samples".into()));
        }
        if samples[0].0 != 0.0 {
            return Err(Error::Domain(format!("tabulated radii must start at 0, got {}", samples[0].0)));
        }
        if samples.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return Err(Error::Domain("tabulated radii must be strictly increasing".into()));
        }
        if let Some(&(r, v)) = samples.iter().find(|(_, v)| !(*v >= 0.0) || !v.is_finite()) {
            return Err(Error::Domain(format!("tabulated amplitude at r={r} must be finite and >= 0, got {v}")));
        }
        Ok(Self {
            radii: samples.iter().map(|s| s.0).collect(),
            values: samples.iter().map(|s| s.1).collect(),
        })
    }

    /// Samples `f(r / w_p)` on `n` uniform points over `[0, extent]` (units of `w_p`).
    pub fn sample<F: Fn(f64) -> f64>(f: F, extent: f64, n: usize) -> Result<Self> {
        let samples: Vec<(f64, f64)> = (0..n)
            .map(|i| {
                let s = extent * i as f64 / (n - 1) as f64;
                (s, f(s))
            })
            .collect();
        Self::new(&samples)
    }
}

impl PumpProfile for TabulatedPump {
    fn name(&self) -> &'static str {
        "tabulated"
    }
    fn amplitude(&self, r: f64, w_p: f64) -> f64 {
        let s = r / w_p;
        let last = *self.radii.last().expect("validated non-empty");
        if s > last || s < 0.0 {
            return 0.0;
        }
        let i = self.radii.partition_point(|&x| x <= s).saturating_sub(1).min(self.radii.len() - 2);
        let (r0, r1) = (self.radii[i], self.radii[i + 1]);
        let t = (s - r0) / (r1 - r0);
        self.values[i] + t * (self.values[i + 1] - self.values[i])
    }
    fn breakpoints(&self, w_p: f64) -> Vec<f64> {
        self.radii.iter().map(|s| s * w_p).collect()
    }
    fn support(&self, w_p: f64) -> Option<f64> {
        self.radii.last().map(|s| s * w_p)
    }
    fn spec(&self) -> PumpSpec {
        PumpSpec {
            samples: Some(self.radii.iter().copied().zip(self.values.iter().copied()).collect()),
            ..PumpSpec::named("tabulated")
        }
    }
}

/// Serializable pump description; `kind` selects the registered profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct PumpSpec {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<Vec<(f64, f64)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bessel_order: Option<u8>,
}

impl PumpSpec {
    pub fn named(kind: &str) -> Self {
        Self {
            kind: kind.to_string(),
            a: None,
            samples: None,
            bessel_order: None,
        }
    }

    pub fn build(&self) -> Result<Box<dyn PumpProfile>> {
        pump_by_name(&self.kind, self)
    }
}

type PumpBuilder = fn(&PumpSpec) -> Result<Box<dyn PumpProfile>>;

const PUMPS: &[(&str, PumpBuilder)] = &[
    ("gaussian", |_| Ok(Box::new(GaussianPump))),
    ("truncated-exponential", |spec| {
        let a = spec
            .a
            .ok_or_else(|| Error::Domain("truncated-exponential pump requires parameter `a`".into()))?;
        if !a.is_finite() {
            return Err(Error::Domain(format!("parameter `a` must be finite, got {a}")));
        }
        Ok(Box::new(TruncatedExponentialPump { a }))
    }),
    ("airy", |spec| Ok(Box::new(AiryPump::new(spec.bessel_order.unwrap_or(1))?))),
    ("tabulated", |spec| {
        let samples = spec
            .samples
            .as_deref()
            .ok_or_else(|| Error::Domain("tabulated pump requires `samples`".into()))?;
        Ok(Box::new(TabulatedPump::new(samples)?))
    }),
];

pub const PUMP_NAMES: [&str; 4] = ["gaussian", "truncated-exponential", "airy", "tabulated"];

/// Looks up a pump profile by registry name and builds it from `spec`.
pub fn pump_by_name(name: &str, spec: &PumpSpec) -> Result<Box<dyn PumpProfile>> {
    PUMPS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, build)| build(spec))
        .unwrap_or_else(|| {
            Err(Error::UnknownStrategy {
                kind: "pump profile",
                name: name.to_string(),
                available: PUMP_NAMES.join(", "),
            })
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truncated_exponential_is_zero_outside_waist() {
        let p = TruncatedExponentialPump { a: 0.19 };
        assert_eq!(p.amplitude(2.0, 2.0), 0.19f64.exp());
        assert_eq!(p.amplitude(2.0 + 1e-12, 2.0), 0.0);
    }

    #[test]
    fn gaussian_matches_minus_one_exponential_inside_waist() {
        let e = TruncatedExponentialPump { a: -1.0 };
        for r in [0.0, 0.3, 0.99] {
            assert!((GaussianPump.amplitude(r, 1.0) - e.amplitude(r, 1.0)).abs() < 1e-16);
        }
    }

    #[test]
    fn airy_axis_limit() {
        assert_eq!(AiryPump::new(1).unwrap().amplitude(0.0, 1.0), 0.5);
        assert!((AiryPump::new(1).unwrap().amplitude(1e-9, 1.0) - 0.5).abs() < 1e-12);
        assert!(AiryPump::new(2).is_err());
    }

    #[test]
    fn tabulated_validation() {
        assert!(TabulatedPump::new(&[(0.1, 1.0), (0.2, 1.0)]).is_err());
        assert!(TabulatedPump::new(&[(0.0, 1.0), (0.0, 1.0)]).is_err());
        assert!(TabulatedPump::new(&[(0.0, 1.0), (0.5, -1.0)]).is_err());
    }

    #[test]
    fn tabulated_interpolates_linearly() {
        let t = TabulatedPump::new(&[(0.0, 1.0), (1.0, 3.0), (2.0, 0.0)]).unwrap();
        assert_eq!(t.amplitude(1.0, 2.0), 2.0);
        assert_eq!(t.amplitude(3.0, 2.0), 1.5);
        assert_eq!(t.amplitude(4.5, 2.0), 0.0);
    }

    #[test]
    fn registry_round_trip() {
        for name in PUMP_NAMES {
            let spec = PumpSpec {
                a: Some(0.1),
                samples: Some(vec![(0.0, 1.0), (1.0, 0.5)]),
                ..PumpSpec::named(name)
            };
            let pump = spec.build().unwrap();
            assert_eq!(pump.name(), name);
            assert_eq!(pump.spec().kind, name);
        }
        assert!(matches!(
            pump_by_name("bessel-gauss", &PumpSpec::named("bessel-gauss")),
            Err(Error::UnknownStrategy { .. })
        ));
        assert!(PumpSpec::named("truncated-exponential").build().is_err());
    }
}
