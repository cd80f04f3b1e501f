//! Unconstrained quasi-Newton minimization and the smooth maps from the
//! plane onto open boxes that make box-constrained problems unconstrained.

/// Stopping rules for [`bfgs`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BfgsOptions {
    pub max_iter: usize,
    /// Stop when the max-norm of the gradient falls below this.
    pub grad_tol: f64,
    /// Stop when a step moves no coordinate by more than `step_tol * (1 + |x|)`.
    pub step_tol: f64,
}

impl Default for BfgsOptions {
    fn default() -> Self {
        BfgsOptions { max_iter: 500, grad_tol: 1e-8, step_tol: 1e-8 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    Gradient,
    Step,
    MaxIter,
    LineSearch,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BfgsResult {
    pub x: Vec<f64>,
    pub f: f64,
    pub grad: Vec<f64>,
    pub iterations: usize,
    pub termination: Termination,
}

impl BfgsResult {
    pub fn converged(&self) -> bool {
        matches!(self.termination, Termination::Gradient | Termination::Step)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn max_abs(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Minimizes `f` from `x0`. `f` returns the value and gradient, or `None`
/// outside its domain (treated as `+inf` by the line search).
/// Returns `None` when `f(x0)` is not finite.
pub fn bfgs<F>(mut f: F, x0: &[f64], opts: &BfgsOptions) -> Option<BfgsResult>
where
    F: FnMut(&[f64]) -> Option<(f64, Vec<f64>)>,
{
    let d = x0.len();
    let mut x = x0.to_vec();
    let (mut fx, mut g) = f(&x).filter(|(v, g)| v.is_finite() && g.iter().all(|c| c.is_finite()))?;
    // inverse Hessian approximation, row-major
    let mut h = vec![0.0; d * d];
    for a in 0..d {
        h[a * d + a] = 1.0;
    }
    let mut first = true;
    let mut termination = Termination::MaxIter;
    let mut iterations = 0;
    while iterations < opts.max_iter {
        if max_abs(&g) < opts.grad_tol {
            termination = Termination::Gradient;
            break;
        }
        iterations += 1;
        let mut p: Vec<f64> = (0..d).map(|a| -dot(&h[a * d..(a + 1) * d], &g)).collect();
        let mut slope = dot(&p, &g);
        if !(slope < 0.0) {
            // lost descent: restart from steepest descent
            for a in 0..d {
                for b in 0..d {
                    h[a * d + b] = if a == b { 1.0 } else { 0.0 };
                }
            }
            p = g.iter().map(|v| -v).collect();
            slope = -dot(&g, &g);
            first = true;
        }
        let mut step = 1.0;
        if first {
            // keep the first trial step of unit length
            let len = max_abs(&p);
            if len > 1.0 {
                step = 1.0 / len;
            }
        }
        let mut accepted = None;
        for _ in 0..60 {
            let trial: Vec<f64> = x.iter().zip(&p).map(|(xi, pi)| xi + step * pi).collect();
            if let Some((ft, gt)) = f(&trial) {
                if ft.is_finite() && gt.iter().all(|c| c.is_finite()) && ft <= fx + 1e-4 * step * slope {
                    accepted = Some((trial, ft, gt));
                    break;
                }
            }
            step *= 0.5;
        }
        let Some((xn, fn_, gn)) = accepted else {
            termination = Termination::LineSearch;
            break;
        };
        let s: Vec<f64> = xn.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = gn.iter().zip(&g).map(|(a, b)| a - b).collect();
        let small_step = s.iter().zip(&x).all(|(si, xi)| si.abs() <= opts.step_tol * (1.0 + xi.abs()));
        let sy = dot(&s, &y);
        if sy > 1e-12 * dot(&s, &s).sqrt() * dot(&y, &y).sqrt() {
            if first {
                // scale the initial inverse Hessian
                let gamma = sy / dot(&y, &y);
                for v in h.iter_mut() {
                    *v *= gamma;
                }
                first = false;
            }
            let rho = 1.0 / sy;
            let hy: Vec<f64> = (0..d).map(|a| dot(&h[a * d..(a + 1) * d], &y)).collect();
            let yhy = dot(&y, &hy);
            for a in 0..d {
                for b in 0..d {
                    h[a * d + b] += rho * ((1.0 + rho * yhy) * s[a] * s[b] - hy[a] * s[b] - s[a] * hy[b]);
                }
            }
        }
        x = xn;
        fx = fn_;
        g = gn;
        if small_step {
            termination = if max_abs(&g) < opts.grad_tol { Termination::Gradient } else { Termination::Step };
            break;
        }
    }
    if termination == Termination::MaxIter && max_abs(&g) < opts.grad_tol {
        termination = Termination::Gradient;
    }
    Some(BfgsResult { x, f: fx, grad: g, iterations, termination })
}

/// Logistic map from the real line onto the open interval `(lo, hi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Logistic {
    pub lo: f64,
    pub hi: f64,
}

impl Logistic {
    pub fn value(&self, x: f64) -> f64 {
        self.lo + (self.hi - self.lo) * sigmoid(x)
    }

    pub fn deriv(&self, x: f64) -> f64 {
        let s = sigmoid(x);
        (self.hi - self.lo) * s * (1.0 - s)
    }

    /// Preimage of `y`, clamped into the interior.
    pub fn inverse(&self, y: f64) -> f64 {
        let t = ((y - self.lo) / (self.hi - self.lo)).clamp(1e-15, 1.0 - 1e-15);
        (t / (1.0 - t)).ln()
    }
}

fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Map from the real line onto magnitudes in `(1/bound, bound)`:
/// `y = bound^tanh(x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogMagnitude {
    pub bound: f64,
}

impl LogMagnitude {
    pub fn value(&self, x: f64) -> f64 {
        (self.bound.ln() * x.tanh()).exp()
    }

    pub fn deriv(&self, x: f64) -> f64 {
        let c = x.cosh();
        self.value(x) * self.bound.ln() / (c * c)
    }

    /// Preimage of the magnitude `y`, clamped into the interior.
    pub fn inverse(&self, y: f64) -> f64 {
        let t = (y.ln() / self.bound.ln()).clamp(-1.0 + 1e-15, 1.0 - 1e-15);
        t.atanh()
    }
}
