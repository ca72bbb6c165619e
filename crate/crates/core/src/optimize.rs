// Copyright 2026 msprep Contributors
// SPDX-License-Identifier: Apache-2.0

//! Dense BFGS with a strong-Wolfe line search.
//!
//! Templates here carry at most a few hundred parameters, so the inverse
//! Hessian approximation is stored in full.

/// Sufficient-decrease constant.
const C1: f64 = 1e-4;
/// Curvature constant.
const C2: f64 = 0.9;
const MAX_LINE_EVALS: usize = 40;
/// Relative decrease below which an iteration counts as stalled.
const STALL_RTOL: f64 = 2.2e-9;
const STALL_PATIENCE: usize = 3;

#[derive(Clone, Debug)]
pub struct MinimizeOptions {
    pub max_iters: usize,
    /// Stop once `‖∇f‖∞` drops to this value.
    pub gradient_tolerance: f64,
    /// Stop once `f` drops to this value.
    pub target_cost: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopReason {
    Target,
    Gradient,
    MaxIters,
    Stalled,
    LineSearch,
}

#[derive(Clone, Debug)]
pub struct MinimizeOutcome {
    pub x: Vec<f64>,
    pub cost: f64,
    pub iterations: usize,
    /// Objective at the start point and after every accepted step.
    pub history: Vec<f64>,
    pub stop: StopReason,
    pub evaluations: usize,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn inf_norm(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, x| m.max(x.abs()))
}

struct Point {
    alpha: f64,
    f: f64,
    g: Vec<f64>,
    slope: f64,
}

struct LineSearch<'a, F> {
    f: &'a mut F,
    x: &'a [f64],
    p: &'a [f64],
    f0: f64,
    slope0: f64,
    evals: usize,
}

impl<F: FnMut(&[f64]) -> (f64, Vec<f64>)> LineSearch<'_, F> {
    fn eval(&mut self, alpha: f64) -> Point {
        self.evals += 1;
        let trial: Vec<f64> = self.x.iter().zip(self.p).map(|(x, p)| x + alpha * p).collect();
        let (f, g) = (self.f)(&trial);
        let slope = dot(&g, self.p);
        Point { alpha, f, g, slope }
    }

    fn armijo(&self, pt: &Point) -> bool {
        pt.f <= self.f0 + C1 * pt.alpha * self.slope0
    }

    fn curvature(&self, pt: &Point) -> bool {
        pt.slope.abs() <= -C2 * self.slope0
    }

    /// Returns a point satisfying the strong Wolfe conditions, or failing
    /// that, the best sufficient-decrease point seen.
    fn search(&mut self, alpha0: f64) -> Option<Point> {
        let mut prev = Point { alpha: 0.0, f: self.f0, g: Vec::new(), slope: self.slope0 };
        let mut alpha = alpha0;
        let mut first = true;
        while self.evals < MAX_LINE_EVALS {
            let pt = self.eval(alpha);
            if !pt.f.is_finite() {
                alpha = 0.5 * (prev.alpha + alpha);
                continue;
            }
            if !self.armijo(&pt) || (!first && pt.f >= prev.f) {
                return self.zoom(prev, pt);
            }
            if self.curvature(&pt) {
                return Some(pt);
            }
            if pt.slope >= 0.0 {
                return self.zoom(pt, prev);
            }
            alpha *= 2.0;
            prev = pt;
            first = false;
        }
        (prev.alpha > 0.0).then_some(prev)
    }

    fn zoom(&mut self, mut lo: Point, mut hi: Point) -> Option<Point> {
        while self.evals < MAX_LINE_EVALS {
            let alpha = interpolate(&lo, &hi);
            if (hi.alpha - lo.alpha).abs() < 1e-16 * lo.alpha.abs().max(1.0) {
                break;
            }
            let pt = self.eval(alpha);
            if !self.armijo(&pt) || pt.f >= lo.f {
                hi = pt;
            } else {
                if self.curvature(&pt) {
                    return Some(pt);
                }
                if pt.slope * (hi.alpha - lo.alpha) >= 0.0 {
                    hi = lo;
                }
                lo = pt;
            }
        }
        (lo.alpha > 0.0).then_some(lo)
    }
}

/// Minimizer of the cubic through `lo` and `hi`, kept well inside the
/// bracket; bisection when the cubic is unusable.
fn interpolate(lo: &Point, hi: &Point) -> f64 {
    let (a, b) = (lo.alpha, hi.alpha);
    let width = b - a;
    let d1 = lo.slope + hi.slope - 3.0 * (lo.f - hi.f) / (a - b);
    let disc = d1 * d1 - lo.slope * hi.slope;
    let mid = 0.5 * (a + b);
    if disc < 0.0 || !disc.is_finite() {
        return mid;
    }
    let d2 = width.signum() * disc.sqrt();
    let t = b - width * (hi.slope + d2 - d1) / (hi.slope - lo.slope + 2.0 * d2);
    let (low, high) = (a.min(b), a.max(b));
    let margin = 0.1 * width.abs();
    if t.is_finite() && t > low + margin && t < high - margin {
        t
    } else {
        mid
    }
}

/// Minimize `f` from `x0`. `f` returns the objective and its gradient.
pub fn minimize<F>(mut f: F, x0: &[f64], opts: &MinimizeOptions) -> MinimizeOutcome
where
    F: FnMut(&[f64]) -> (f64, Vec<f64>),
{
    let n = x0.len();
    let mut x = x0.to_vec();
    let (mut fx, mut g) = f(&x);
    let mut evaluations = 1;
    let mut history = vec![fx];
    let mut iterations = 0;
    let mut stalled = 0;
    // Inverse Hessian, row-major.
    let mut h = identity(n);
    let mut h_is_identity = true;

    let stop = loop {
        if fx <= opts.target_cost {
            break StopReason::Target;
        }
        if n == 0 || inf_norm(&g) <= opts.gradient_tolerance {
            break StopReason::Gradient;
        }
        if iterations >= opts.max_iters {
            break StopReason::MaxIters;
        }
        let mut p: Vec<f64> = (0..n).map(|i| -dot(&h[i * n..(i + 1) * n], &g)).collect();
        let mut slope = dot(&p, &g);
        if slope >= 0.0 {
            h = identity(n);
            h_is_identity = true;
            p = g.iter().map(|v| -v).collect();
            slope = -dot(&g, &g);
        }
        let alpha0 = if h_is_identity { (1.0 / inf_norm(&g)).min(1.0) } else { 1.0 };
        let mut ls = LineSearch { f: &mut f, x: &x, p: &p, f0: fx, slope0: slope, evals: 0 };
        let found = ls.search(alpha0);
        evaluations += ls.evals;
        let Some(pt) = found.filter(|pt| pt.f < fx) else {
            if h_is_identity {
                break StopReason::LineSearch;
            }
            h = identity(n);
            h_is_identity = true;
            continue;
        };

        iterations += 1;
        let s: Vec<f64> = p.iter().map(|v| pt.alpha * v).collect();
        let y: Vec<f64> = pt.g.iter().zip(&g).map(|(a, b)| a - b).collect();
        for (xi, si) in x.iter_mut().zip(&s) {
            *xi += si;
        }
        let decrease = fx - pt.f;
        fx = pt.f;
        g = pt.g;
        history.push(fx);

        if decrease <= STALL_RTOL * fx.abs().max(f64::MIN_POSITIVE) {
            stalled += 1;
            if stalled >= STALL_PATIENCE {
                break StopReason::Stalled;
            }
        } else {
            stalled = 0;
        }

        let sy = dot(&s, &y);
        if sy > 1e-12 * dot(&s, &s).sqrt() * dot(&y, &y).sqrt() {
            if h_is_identity {
                let scale = sy / dot(&y, &y);
                h.iter_mut().for_each(|v| *v *= scale);
                h_is_identity = false;
            }
            bfgs_update(&mut h, &s, &y, sy);
        }
    };

    MinimizeOutcome { x, cost: fx, iterations, history, stop, evaluations }
}

fn identity(n: usize) -> Vec<f64> {
    let mut h = vec![0.0; n * n];
    for i in 0..n {
        h[i * n + i] = 1.0;
    }
    h
}

/// `H ← (I − ρ s yᵀ) H (I − ρ y sᵀ) + ρ s sᵀ` with `ρ = 1 / sᵀy`.
fn bfgs_update(h: &mut [f64], s: &[f64], y: &[f64], sy: f64) {
    let n = s.len();
    let rho = 1.0 / sy;
    let hy: Vec<f64> = (0..n).map(|i| dot(&h[i * n..(i + 1) * n], y)).collect();
    let yhy = dot(y, &hy);
    let coef = rho * rho * yhy + rho;
    for i in 0..n {
        for j in 0..n {
            h[i * n + j] += coef * s[i] * s[j] - rho * (hy[i] * s[j] + s[i] * hy[j]);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rosenbrock(x: &[f64]) -> (f64, Vec<f64>) {
        let (a, b) = (x[0], x[1]);
        let f = (1.0 - a).powi(2) + 100.0 * (b - a * a).powi(2);
        let g = vec![-2.0 * (1.0 - a) - 400.0 * a * (b - a * a), 200.0 * (b - a * a)];
        (f, g)
    }

    fn opts() -> MinimizeOptions {
        MinimizeOptions { max_iters: 500, gradient_tolerance: 1e-10, target_cost: 0.0 }
    }

    #[test]
    fn solves_rosenbrock() {
        let out = minimize(rosenbrock, &[-1.2, 1.0], &opts());
        assert!((out.x[0] - 1.0).abs() < 1e-6 && (out.x[1] - 1.0).abs() < 1e-6, "{out:?}");
    }

    #[test]
    fn history_never_increases() {
        let out = minimize(rosenbrock, &[-1.2, 1.0], &opts());
        assert!(out.history.windows(2).all(|w| w[1] <= w[0]));
        assert_eq!(out.history.len(), out.iterations + 1);
    }

    #[test]
    fn quadratic_converges_quickly() {
        let diag = [1.0, 10.0, 100.0];
        let f = |x: &[f64]| {
            let v = x.iter().zip(&diag).map(|(xi, d)| 0.5 * d * xi * xi).sum();
            let g = x.iter().zip(&diag).map(|(xi, d)| d * xi).collect();
            (v, g)
        };
        let out = minimize(f, &[1.0, 1.0, 1.0], &opts());
        assert!(out.cost < 1e-18);
        assert!(out.iterations < 30);
    }

    #[test]
    fn target_stops_early() {
        let out = minimize(rosenbrock, &[-1.2, 1.0], &MinimizeOptions { target_cost: 1.0, ..opts() });
        assert_eq!(out.stop, StopReason::Target);
        assert!(out.cost <= 1.0);
    }

    #[test]
    fn zero_dimensional_problem() {
        let out = minimize(|_| (0.25, Vec::new()), &[], &opts());
        assert_eq!(out.iterations, 0);
        assert_eq!(out.cost, 0.25);
    }
}
