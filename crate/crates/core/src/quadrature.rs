//! Globally adaptive Gauss–Kronrod (7/15) integration on a finite interval.
//!
//! The interval is first split at caller-supplied breakpoints (discontinuities,
//! kinks, characteristic length scales). The panel with the largest error
//! estimate is then bisected until the summed estimate meets the tolerance.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub absolute: f64,
    pub relative: f64,
    pub max_panels: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            absolute: 1e-300,
            relative: 1e-13,
            max_panels: 20_000,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub panels: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Panel {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (i, &x) in XGK[..7].iter().enumerate() {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[i] * pair;
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }
    let value = kronrod * half;
    let raw = ((kronrod - gauss) * half).abs();
    // QUADPACK-style rescaling of the raw Kronrod–Gauss difference.
    let error = if raw > 0.0 {
        let scaled = raw * (200.0 * raw / value.abs().max(f64::MIN_POSITIVE)).powf(1.5).min(1.0);
        scaled.max(raw.min(50.0 * f64::EPSILON * value.abs()))
    } else {
        0.0
    };
    Panel { lo, hi, value, error }
}

/// Integrates `f` over `[lo, hi]`, using every breakpoint strictly inside the
/// interval as an initial panel boundary.
pub fn integrate<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, breakpoints: &[f64], tol: Tolerance) -> Result<Estimate> {
    if !(hi > lo) {
        return Ok(Estimate { value: 0.0, error: 0.0, panels: 0 });
    }
    let mut edges: Vec<f64> = std::iter::once(lo)
        .chain(breakpoints.iter().copied().filter(|&b| b > lo && b < hi))
        .chain(std::iter::once(hi))
        .collect();
    edges.sort_by(f64::total_cmp);
    edges.dedup();

    let mut heap: BinaryHeap<Panel> = edges.windows(2).map(|w| kronrod(&f, w[0], w[1])).collect();
    let mut value: f64 = heap.iter().map(|p| p.value).sum();
    let mut error: f64 = heap.iter().map(|p| p.error).sum();
    loop {
        if !value.is_finite() {
            return Err(Error::Accuracy {
                context: "integrand produced a non-finite value".into(),
                residual: f64::INFINITY,
            });
        }
        if error <= tol.absolute.max(tol.relative * value.abs()) {
            // Running sums drift; confirm with an exact re-summation.
            value = heap.iter().map(|p| p.value).sum();
            error = heap.iter().map(|p| p.error).sum();
            if error <= tol.absolute.max(tol.relative * value.abs()) {
                return Ok(Estimate { value, error, panels: heap.len() });
            }
        }
        if heap.len() >= tol.max_panels {
            return Err(Error::Accuracy {
                context: format!("panel limit {} reached", tol.max_panels),
                residual: error,
            });
        }
        let worst = heap.pop().expect("non-empty panel set");
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo || mid >= worst.hi {
            return Err(Error::Accuracy {
                context: "panel cannot be bisected further".into(),
                residual: error,
            });
        }
        let left = kronrod(&f, worst.lo, mid);
        let right = kronrod(&f, mid, worst.hi);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
}

/// Composite Simpson weights for a uniform grid of `n` points (trapezoid on
/// the final interval when `n` is even).
pub fn simpson_weights(n: usize, h: f64) -> Vec<f64> {
    let mut w = vec![0.0; n];
    if n < 2 {
        return w;
    }
    let simpson_end = if n % 2 == 1 { n - 1 } else { n - 2 };
    for i in (0..simpson_end).step_by(2) {
        w[i] += h / 3.0;
        w[i + 1] += 4.0 * h / 3.0;
        w[i + 2] += h / 3.0;
    }
    if simpson_end < n - 1 {
        w[n - 2] += h / 2.0;
        w[n - 1] += h / 2.0;
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let est = integrate(|x| x.powi(5) - 2.0 * x, 0.0, 2.0, &[], Tolerance::default()).unwrap();
        assert!((est.value - (64.0 / 6.0 - 4.0)).abs() < 1e-13);
    }

    #[test]
    fn narrow_peak_found_with_breakpoints() {
        let f = |x: f64| (-((x - 0.3) / 0.01).powi(2)).exp();
        let bps: Vec<f64> = (1..200).map(|k| k as f64 * 0.05).collect();
        let est = integrate(f, 0.0, 10.0, &bps, Tolerance::default()).unwrap();
        let exact = 0.01 * std::f64::consts::PI.sqrt();
        assert!((est.value - exact).abs() < 1e-14);
    }

    #[test]
    fn discontinuity_at_breakpoint() {
        let f = |x: f64| if x < 1.0 { x.exp() } else { 0.0 };
        let est = integrate(f, 0.0, 3.0, &[1.0], Tolerance::default()).unwrap();
        assert!((est.value - (1f64.exp() - 1.0)).abs() < 1e-13);
    }

    #[test]
    fn panel_limit_is_reported() {
        let tol = Tolerance { max_panels: 4, ..Tolerance::default() };
        let err = integrate(|x: f64| (1.0 / x).sin(), 1e-6, 1.0, &[], tol).unwrap_err();
        assert!(matches!(err, Error::Accuracy { .. }));
    }

    #[test]
    fn simpson_weights_integrate_cubic() {
        for n in [5usize, 6] {
            let h = 1.0 / (n - 1) as f64;
            let w = simpson_weights(n, h);
            let s: f64 = w.iter().enumerate().map(|(i, w)| w * (i as f64 * h).powi(2)).sum();
            assert!((s - 1.0 / 3.0).abs() < if n % 2 == 1 { 1e-14 } else { 1e-2 });
        }
    }
}
