//! Limited-memory BFGS with a strong Wolfe line search.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LbfgsConfig {
    pub memory: usize,
    /// Stop when the gradient 2-norm drops below this.
    pub gtol: f64,
    pub max_iter: usize,
    /// Gradient norm below which a stalled line search still counts as converged.
    pub stall_gtol: f64,
    pub c1: f64,
    pub c2: f64,
}

impl Default for LbfgsConfig {
    fn default() -> Self {
        LbfgsConfig {
            memory: 10,
            gtol: 1e-8,
            max_iter: 1000,
            stall_gtol: 1e-6,
            c1: 1e-4,
            c2: 0.9,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LbfgsReport {
    pub x: Vec<f64>,
    pub f: f64,
    pub grad_norm: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(x: &[f64], a: f64, d: &[f64]) -> Vec<f64> {
    x.iter().zip(d).map(|(xi, di)| xi + a * di).collect()
}

struct Problem<'a, F> {
    fg: &'a mut F,
    evaluations: usize,
}

impl<F> Problem<'_, F>
where
    F: FnMut(&[f64]) -> Result<(f64, Vec<f64>)>,
{
    fn eval(&mut self, x: &[f64]) -> Result<(f64, Vec<f64>)> {
        self.evaluations += 1;
        let (f, g) = (self.fg)(x)?;
        if !f.is_finite() || g.iter().any(|v| !v.is_finite()) {
            return Err(Error::Optimizer {
                iterations: self.evaluations,
                message: "objective returned a non-finite value".into(),
            });
        }
        Ok((f, g))
    }
}

struct Point {
    a: f64,
    f: f64,
    g: Vec<f64>,
    slope: f64,
}

/// Strong Wolfe line search along `d`; `None` when no acceptable step is found.
fn line_search<F>(
    prob: &mut Problem<'_, F>,
    x: &[f64],
    f0: f64,
    slope0: f64,
    d: &[f64],
    a_init: f64,
    cfg: &LbfgsConfig,
) -> Result<Option<Point>>
where
    F: FnMut(&[f64]) -> Result<(f64, Vec<f64>)>,
{
    let probe = |prob: &mut Problem<'_, F>, a: f64| -> Result<Point> {
        let (f, g) = prob.eval(&axpy(x, a, d))?;
        let slope = dot(&g, d);
        Ok(Point { a, f, g, slope })
    };
    let armijo = |p: &Point| p.f <= f0 + cfg.c1 * p.a * slope0;
    let curvature = |p: &Point| p.slope.abs() <= -cfg.c2 * slope0;

    let mut prev = Point {
        a: 0.0,
        f: f0,
        g: Vec::new(),
        slope: slope0,
    };
    let mut a = a_init;
    let (mut lo, mut hi);
    let mut first = true;
    loop {
        let p = probe(prob, a)?;
        if !armijo(&p) || (!first && p.f >= prev.f) {
            lo = prev;
            hi = p;
            break;
        }
        if curvature(&p) {
            return Ok(Some(p));
        }
        if p.slope >= 0.0 {
            hi = prev;
            lo = p;
            break;
        }
        if a > 1e6 {
            return Ok(Some(p));
        }
        first = false;
        prev = p;
        a *= 2.0;
    }
    // zoom
    for _ in 0..40 {
        let width = hi.a - lo.a;
        // quadratic through lo (value and slope) and hi (value)
        let denom = 2.0 * (hi.f - lo.f - lo.slope * width);
        let mut a = if denom.abs() > 0.0 {
            lo.a - lo.slope * width * width / denom
        } else {
            lo.a + 0.5 * width
        };
        let (left, right) = if lo.a < hi.a {
            (lo.a, hi.a)
        } else {
            (hi.a, lo.a)
        };
        let margin = 0.1 * (right - left);
        if !a.is_finite() || a < left + margin || a > right - margin {
            a = 0.5 * (lo.a + hi.a);
        }
        if (right - left).abs() < 1e-16 * lo.a.abs().max(1.0) {
            break;
        }
        let p = probe(prob, a)?;
        if !armijo(&p) || p.f >= lo.f {
            hi = p;
        } else {
            if curvature(&p) {
                return Ok(Some(p));
            }
            if p.slope * (hi.a - lo.a) >= 0.0 {
                hi = lo;
            }
            lo = p;
        }
    }
    // accept any strict decrease found along the way
    if lo.a > 0.0 && lo.f < f0 {
        return Ok(Some(lo));
    }
    Ok(None)
}

/// Minimizes `fg`, which returns value and gradient.
pub fn minimize<F>(mut fg: F, x0: Vec<f64>, cfg: &LbfgsConfig) -> Result<LbfgsReport>
where
    F: FnMut(&[f64]) -> Result<(f64, Vec<f64>)>,
{
    let mut prob = Problem {
        fg: &mut fg,
        evaluations: 0,
    };
    let mut x = x0;
    let (mut f, mut g) = prob.eval(&x)?;
    let mut memory: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::new();
    let mut iterations = 0;
    let mut converged = false;
    while iterations < cfg.max_iter {
        let gn = norm(&g);
        if gn < cfg.gtol {
            converged = true;
            break;
        }
        iterations += 1;
        // two-loop recursion
        let mut q = g.clone();
        let mut alphas = Vec::with_capacity(memory.len());
        for (s, y, rho) in memory.iter().rev() {
            let a = rho * dot(s, &q);
            q = axpy(&q, -a, y);
            alphas.push(a);
        }
        if let Some((s, y, _)) = memory.back() {
            let gamma = dot(s, y) / dot(y, y);
            q.iter_mut().for_each(|v| *v *= gamma);
        }
        for ((s, y, rho), a) in memory.iter().zip(alphas.iter().rev()) {
            let b = rho * dot(y, &q);
            q = axpy(&q, a - b, s);
        }
        let mut d: Vec<f64> = q.iter().map(|v| -v).collect();
        let mut slope = dot(&d, &g);
        if slope >= 0.0 {
            memory.clear();
            d = g.iter().map(|v| -v).collect();
            slope = -gn * gn;
        }
        let a_init = if memory.is_empty() {
            (1.0 / gn).min(1.0)
        } else {
            1.0
        };
        let mut step = line_search(&mut prob, &x, f, slope, &d, a_init, cfg)?;
        if step.is_none() && !memory.is_empty() {
            memory.clear();
            d = g.iter().map(|v| -v).collect();
            step = line_search(&mut prob, &x, f, -gn * gn, &d, (1.0 / gn).min(1.0), cfg)?;
        }
        let Some(p) = step else {
            converged = gn < cfg.stall_gtol;
            break;
        };
        let s: Vec<f64> = d.iter().map(|v| v * p.a).collect();
        let y: Vec<f64> = p.g.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        x = axpy(&x, 1.0, &s);
        f = p.f;
        g = p.g;
        if sy > 1e-14 * norm(&s) * norm(&y) {
            memory.push_back((s, y, 1.0 / sy));
            if memory.len() > cfg.memory {
                memory.pop_front();
            }
        }
    }
    let grad_norm = norm(&g);
    if !converged && grad_norm < cfg.gtol {
        converged = true;
    }
    Ok(LbfgsReport {
        x,
        f,
        grad_norm,
        iterations,
        evaluations: prob.evaluations,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rosenbrock() {
        let fg = |x: &[f64]| -> Result<(f64, Vec<f64>)> {
            let (a, b) = (x[0], x[1]);
            let f = (1.0 - a).powi(2) + 100.0 * (b - a * a).powi(2);
            let g = vec![
                -2.0 * (1.0 - a) - 400.0 * a * (b - a * a),
                200.0 * (b - a * a),
            ];
            Ok((f, g))
        };
        let r = minimize(fg, vec![-1.2, 1.0], &LbfgsConfig::default()).unwrap();
        assert!(r.converged);
        assert!((r.x[0] - 1.0).abs() < 1e-7 && (r.x[1] - 1.0).abs() < 1e-7);
    }

    #[test]
    fn periodic_objective() {
        let fg = |x: &[f64]| -> Result<(f64, Vec<f64>)> {
            Ok((
                -(x[0].cos()) - 0.5 * (2.0 * x[1]).cos(),
                vec![x[0].sin(), (2.0 * x[1]).sin()],
            ))
        };
        let r = minimize(fg, vec![0.3, -0.4], &LbfgsConfig::default()).unwrap();
        assert!(r.converged && r.grad_norm < 1e-8);
        assert!((r.f + 1.5).abs() < 1e-14);
    }

    #[test]
    fn already_stationary() {
        let fg = |x: &[f64]| -> Result<(f64, Vec<f64>)> { Ok((x[0] * x[0], vec![2.0 * x[0]])) };
        let r = minimize(fg, vec![0.0], &LbfgsConfig::default()).unwrap();
        assert_eq!(r.iterations, 0);
        assert!(r.converged);
    }

    #[test]
    fn non_finite_objective_is_an_error() {
        let fg = |_: &[f64]| -> Result<(f64, Vec<f64>)> { Ok((f64::NAN, vec![1.0])) };
        assert!(minimize(fg, vec![0.0], &LbfgsConfig::default()).is_err());
    }
}
