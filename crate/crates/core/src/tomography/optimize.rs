use std::collections::VecDeque;

/// Stopping rules and memory for [`lbfgs`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LbfgsOptions {
    pub memory: usize,
    pub max_iterations: usize,
    /// Stop when `(f_k - f_{k+1}) / max(|f_k|, |f_{k+1}|, 1)` falls below this.
    pub relative_decrease: f64,
    /// Stop when the Euclidean gradient norm falls below this.
    pub gradient_norm: f64,
}

impl Default for LbfgsOptions {
    fn default() -> Self {
        Self {
            memory: 10,
            max_iterations: 5000,
            relative_decrease: 1e-10,
            gradient_norm: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LbfgsOutcome {
    pub x: Vec<f64>,
    pub value: f64,
    pub gradient_norm: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Limited-memory BFGS with Armijo backtracking. `f` returns the value and
/// gradient; non-finite values are treated as infeasible and backtracked.
pub fn lbfgs<F>(mut f: F, x0: Vec<f64>, options: LbfgsOptions) -> LbfgsOutcome
where
    F: FnMut(&[f64]) -> (f64, Vec<f64>),
{
    let mut x = x0;
    let (mut fx, mut g) = f(&x);
    let mut history: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::with_capacity(options.memory);
    let finish = |x: Vec<f64>, value: f64, g: &[f64], iterations: usize, converged: bool| LbfgsOutcome {
        x,
        value,
        gradient_norm: norm(g),
        iterations,
        converged,
    };
    if norm(&g) < options.gradient_norm {
        return finish(x, fx, &g, 0, true);
    }

    for iteration in 1..=options.max_iterations {
        let mut direction = two_loop(&g, &history);
        if dot(&direction, &g) >= 0.0 {
            history.clear();
            direction = g.iter().map(|v| -v).collect();
        }
        let slope = dot(&direction, &g);
        let mut step = if history.is_empty() { (1.0 / norm(&g)).min(1.0) } else { 1.0 };

        let mut accepted = None;
        for _ in 0..80 {
            let trial: Vec<f64> = x.iter().zip(&direction).map(|(a, b)| a + step * b).collect();
            let (ft, gt) = f(&trial);
            if ft.is_finite() && ft <= fx + 1e-4 * step * slope {
                accepted = Some((trial, ft, gt));
                break;
            }
            step *= 0.5;
        }
        let Some((x_new, f_new, g_new)) = accepted else {
            if history.is_empty() {
                return finish(x, fx, &g, iteration, false);
            }
            history.clear();
            continue;
        };

        let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-12 * norm(&s) * norm(&y) {
            if history.len() == options.memory {
                history.pop_front();
            }
            history.push_back((s, y, 1.0 / sy));
        }

        let decrease = (fx - f_new) / fx.abs().max(f_new.abs()).max(1.0);
        x = x_new;
        fx = f_new;
        g = g_new;
        if decrease < options.relative_decrease || norm(&g) < options.gradient_norm {
            return finish(x, fx, &g, iteration, true);
        }
    }
    finish(x, fx, &g, options.max_iterations, false)
}

fn two_loop(g: &[f64], history: &VecDeque<(Vec<f64>, Vec<f64>, f64)>) -> Vec<f64> {
    let mut q = g.to_vec();
    let mut alphas = Vec::with_capacity(history.len());
    for (s, y, rho) in history.iter().rev() {
        let a = rho * dot(s, &q);
        q.iter_mut().zip(y).for_each(|(qi, yi)| *qi -= a * yi);
        alphas.push(a);
    }
    if let Some((s, y, _)) = history.back() {
        let scale = dot(s, y) / dot(y, y);
        q.iter_mut().for_each(|v| *v *= scale);
    }
    for ((s, y, rho), a) in history.iter().zip(alphas.iter().rev()) {
        let b = rho * dot(y, &q);
        q.iter_mut().zip(s).for_each(|(qi, si)| *qi += (a - b) * si);
    }
    q.iter_mut().for_each(|v| *v = -*v);
    q
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rosenbrock() {
        let out = lbfgs(
            |x| {
                let (a, b) = (x[0], x[1]);
                let f = (1.0 - a).powi(2) + 100.0 * (b - a * a).powi(2);
                let g = vec![-2.0 * (1.0 - a) - 400.0 * a * (b - a * a), 200.0 * (b - a * a)];
                (f, g)
            },
            vec![-1.2, 1.0],
            LbfgsOptions {
                relative_decrease: 0.0,
                ..LbfgsOptions::default()
            },
        );
        assert!(out.converged);
        assert!((out.x[0] - 1.0).abs() < 1e-6 && (out.x[1] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn quadratic_in_many_dimensions() {
        let n = 50;
        let out = lbfgs(
            |x| {
                let f = x.iter().enumerate().map(|(i, v)| (i + 1) as f64 * (v - 1.0).powi(2)).sum();
                let g = x.iter().enumerate().map(|(i, v)| 2.0 * (i + 1) as f64 * (v - 1.0)).collect();
                (f, g)
            },
            vec![0.0; n],
            LbfgsOptions {
                relative_decrease: 0.0,
                ..LbfgsOptions::default()
            },
        );
        assert!(out.converged);
        assert!(out.x.iter().all(|v| (v - 1.0).abs() < 1e-6));
    }

    #[test]
    fn iteration_cap_is_reported() {
        let out = lbfgs(
            |x| ((x[0] - 3.0).powi(2), vec![2.0 * (x[0] - 3.0)]),
            vec![0.0],
            LbfgsOptions {
                max_iterations: 1,
                relative_decrease: 0.0,
                gradient_norm: 0.0,
                ..LbfgsOptions::default()
            },
        );
        assert!(!out.converged);
        assert_eq!(out.iterations, 1);
    }
}
