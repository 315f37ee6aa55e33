//! Dense log-barrier interior-point solver for the small convex programs
//! the power allocators produce (at most a few dozen variables and
//! constraints). Damped Newton inner iterations with backtracking line
//! search, barrier weight escalated by a fixed factor until the duality
//! gap estimate meets the requested tolerance.

use crate::error::{Error, Result};
use crate::real::Real;

/// A smooth convex program `min f0(x)  s.t.  g_i(x) <= 0`.
///
/// `objective` and `constraint` fill dense gradient and Hessian buffers
/// (row-major, `dim x dim`). Evaluations outside the natural domain may
/// return non-finite values; the solver treats those points as infeasible.
pub trait ConvexProgram<R: Real> {
    fn dim(&self) -> usize;
    fn num_constraints(&self) -> usize;
    fn objective(&self, x: &[R], grad: &mut [R], hess: &mut [R]) -> R;
    fn constraint(&self, index: usize, x: &[R], grad: &mut [R], hess: &mut [R]) -> R;
}

#[derive(Debug, Clone, Copy)]
pub struct BarrierSettings<R> {
    /// Target duality-gap (KKT) tolerance.
    pub tolerance: R,
    /// Initial barrier weight t.
    pub initial_weight: R,
    /// Multiplicative weight schedule.
    pub weight_growth: R,
    /// Cap on Newton steps per barrier stage.
    pub max_newton_per_stage: usize,
}

impl<R: Real> BarrierSettings<R> {
    pub fn with_tolerance(tolerance: R) -> Self {
        BarrierSettings {
            tolerance,
            initial_weight: R::one(),
            weight_growth: R::of(10.0),
            max_newton_per_stage: 80,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BarrierOutcome<R> {
    pub x: Vec<R>,
    /// Duality-gap estimate `m / t` at exit; doubles as the KKT residual
    /// certificate (stationarity holds to Newton tolerance by construction).
    pub kkt_residual: R,
    pub newton_steps: usize,
}

struct Workspace<R> {
    grad: Vec<R>,
    hess: Vec<R>,
    cg: Vec<R>,
    ch: Vec<R>,
}

/// Evaluate the barrier potential `t f0 - sum ln(-g_i)`; `None` if x is
/// outside the domain (some g_i >= 0 or a non-finite value appears).
fn potential<R: Real, P: ConvexProgram<R>>(
    p: &P,
    x: &[R],
    t: R,
    ws: &mut Workspace<R>,
) -> Option<R> {
    let f0 = p.objective(x, &mut ws.cg, &mut ws.ch);
    if !f0.is_finite() {
        return None;
    }
    let mut phi = t * f0;
    for i in 0..p.num_constraints() {
        let gi = p.constraint(i, x, &mut ws.cg, &mut ws.ch);
        if !(gi < R::zero()) || !gi.is_finite() {
            return None;
        }
        phi -= (-gi).ln();
    }
    phi.is_finite().then_some(phi)
}

/// Assemble gradient and Hessian of the barrier potential at a strictly
/// feasible point. Returns false if the point is not in the domain.
fn assemble<R: Real, P: ConvexProgram<R>>(p: &P, x: &[R], t: R, ws: &mut Workspace<R>) -> bool {
    let n = p.dim();
    ws.grad.iter_mut().for_each(|v| *v = R::zero());
    ws.hess.iter_mut().for_each(|v| *v = R::zero());
    ws.cg.iter_mut().for_each(|v| *v = R::zero());
    ws.ch.iter_mut().for_each(|v| *v = R::zero());

    let f0 = p.objective(x, &mut ws.cg, &mut ws.ch);
    if !f0.is_finite() {
        return false;
    }
    for i in 0..n {
        ws.grad[i] = t * ws.cg[i];
        for l in 0..n {
            ws.hess[i * n + l] = t * ws.ch[i * n + l];
        }
    }
    for ci in 0..p.num_constraints() {
        ws.cg.iter_mut().for_each(|v| *v = R::zero());
        ws.ch.iter_mut().for_each(|v| *v = R::zero());
        let gi = p.constraint(ci, x, &mut ws.cg, &mut ws.ch);
        if !(gi < R::zero()) || !gi.is_finite() {
            return false;
        }
        let inv = -R::one() / gi; // 1 / (-g_i) > 0
        for i in 0..n {
            ws.grad[i] += inv * ws.cg[i];
            for l in 0..n {
                ws.hess[i * n + l] += inv * inv * ws.cg[i] * ws.cg[l] + inv * ws.ch[i * n + l];
            }
        }
    }
    true
}

/// In-place Cholesky solve of `H d = -grad` with escalating ridge if the
/// Hessian is numerically semidefinite. Returns the Newton direction.
fn newton_direction<R: Real>(hess: &[R], grad: &[R], n: usize) -> Option<Vec<R>> {
    let mut ridge = R::zero();
    let scale = (0..n)
        .map(|i| hess[i * n + i].abs())
        .fold(R::one(), |a, b| a.max(b));
    for _ in 0..12 {
        let mut l = vec![R::zero(); n * n];
        let mut ok = true;
        'outer: for i in 0..n {
            for j in 0..=i {
                let mut s = hess[i * n + j] + if i == j { ridge } else { R::zero() };
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k];
                }
                if i == j {
                    if !(s > R::zero()) || !s.is_finite() {
                        ok = false;
                        break 'outer;
                    }
                    l[i * n + i] = s.sqrt();
                } else {
                    l[i * n + j] = s / l[j * n + j];
                }
            }
        }
        if ok {
            // forward/backward substitution for H d = -grad
            let mut y = vec![R::zero(); n];
            for i in 0..n {
                let mut s = -grad[i];
                for k in 0..i {
                    s -= l[i * n + k] * y[k];
                }
                y[i] = s / l[i * n + i];
            }
            let mut d = vec![R::zero(); n];
            for i in (0..n).rev() {
                let mut s = y[i];
                for k in i + 1..n {
                    s -= l[k * n + i] * d[k];
                }
                d[i] = s / l[i * n + i];
            }
            if d.iter().all(|v| v.is_finite()) {
                return Some(d);
            }
        }
        ridge = if ridge == R::zero() {
            scale * R::of(1e-12)
        } else {
            ridge * R::of(100.0)
        };
    }
    None
}

/// Minimize the program from a strictly feasible starting point.
pub fn solve<R: Real, P: ConvexProgram<R>>(
    program: &P,
    x0: Vec<R>,
    settings: &BarrierSettings<R>,
) -> Result<BarrierOutcome<R>> {
    let n = program.dim();
    let m = program.num_constraints();
    assert_eq!(x0.len(), n, "start point dimension mismatch");
    let mut ws = Workspace {
        grad: vec![R::zero(); n],
        hess: vec![R::zero(); n * n],
        cg: vec![R::zero(); n],
        ch: vec![R::zero(); n * n],
    };
    if potential(program, &x0, settings.initial_weight, &mut ws).is_none() {
        return Err(Error::Solver {
            outer_iteration: 0,
            message: "barrier start point is not strictly feasible".into(),
        });
    }

    let mut x = x0;
    let mut t = settings.initial_weight;
    let mut newton_steps = 0usize;
    let m_r = R::of_usize(m.max(1));

    loop {
        // centering: damped Newton on the barrier potential
        for _ in 0..settings.max_newton_per_stage {
            if !assemble(program, &x, t, &mut ws) {
                return Err(Error::Solver {
                    outer_iteration: newton_steps,
                    message: "iterate left the feasible domain".into(),
                });
            }
            let Some(dir) = newton_direction(&ws.hess, &ws.grad, n) else {
                return Err(Error::Solver {
                    outer_iteration: newton_steps,
                    message: "Newton system could not be factored".into(),
                });
            };
            let decrement_sq: R = ws.grad.iter().zip(&dir).map(|(&g, &d)| -(g * d)).sum();
            if decrement_sq * R::of(0.5) <= R::of(1e-14).max(R::epsilon() * R::of(16.0)) {
                break;
            }
            let phi0 = potential(program, &x, t, &mut ws).expect("current point feasible");
            let slope: R = ws.grad.iter().zip(&dir).map(|(&g, &d)| g * d).sum();
            let mut step = R::one();
            let armijo = R::of(1e-4);
            let mut accepted = false;
            for _ in 0..70 {
                let trial: Vec<R> = x
                    .iter()
                    .zip(&dir)
                    .map(|(&xi, &di)| xi + step * di)
                    .collect();
                if let Some(phi) = potential(program, &trial, t, &mut ws) {
                    if phi <= phi0 + armijo * step * slope {
                        x = trial;
                        accepted = true;
                        break;
                    }
                }
                step *= R::of(0.5);
            }
            newton_steps += 1;
            if !accepted {
                // line search stalled at numerical precision
                break;
            }
        }

        let gap = m_r / t;
        if gap <= settings.tolerance {
            return Ok(BarrierOutcome {
                x,
                kkt_residual: gap,
                newton_steps,
            });
        }
        t *= settings.weight_growth;
        if !t.is_finite() {
            return Err(Error::Solver {
                outer_iteration: newton_steps,
                message: "barrier weight overflow before reaching tolerance".into(),
            });
        }
    }
}
