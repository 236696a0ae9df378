//! Adaptive Dormand-Prince 5(4) integration with dense output and event
//! location, for small autonomous systems.
//!
//! A rejected stage that leaves the admissible domain is retried with a
//! smaller step; only when the step size underflows is the failure surfaced,
//! which signals that the trajectory is approaching a singular boundary
//! (`f2 -> 0` or `f -> 0`).

use thiserror::Error;

/// Step size below which the controller gives up.
pub const STEP_FLOOR: f64 = 1e-14;

/// Which domain guard a right-hand side evaluation tripped.
#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum DomainGuard {
    #[error("second-factor radius f2 collapsed")]
    RadiusCollapse,
    #[error("profile curve reached the unit circle (f^2 ~ 0)")]
    SphereBoundary,
    #[error("Gauss map degenerate (h ~ 0)")]
    GaussDegenerate,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OdeError {
    #[error("trajectory left the admissible domain at t = {t:.6e}: {guard}")]
    DomainBreach { t: f64, guard: DomainGuard },
    #[error("step size underflow at t = {t:.6e} (h = {h:.3e}); singular boundary approached")]
    StepSizeUnderflow { t: f64, h: f64 },
    #[error("step budget of {max_steps} exhausted at t = {t:.6e}")]
    StepBudget { t: f64, max_steps: usize },
}

/// Autonomous right-hand side of an `N`-dimensional first-order system.
pub trait OdeSystem<const N: usize> {
    fn eval(&self, y: &[f64; N]) -> Result<[f64; N], DomainGuard>;
}

/// Relative and absolute local error tolerances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeTolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Default for OdeTolerance {
    fn default() -> Self {
        Self {
            rel: 1e-10,
            abs: 1e-10,
        }
    }
}

impl OdeTolerance {
    pub fn from_scalar(tol: f64) -> Self {
        Self { rel: tol, abs: tol }
    }
}

// Dormand-Prince 5(4) tableau.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// Difference between the 5th- and 4th-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
// Dense-output weights.
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

#[derive(Debug, Clone)]
struct DenseStep<const N: usize> {
    t0: f64,
    h: f64,
    cont: [[f64; N]; 5],
}

impl<const N: usize> DenseStep<N> {
    fn sample(&self, t: f64) -> [f64; N] {
        let s = (t - self.t0) / self.h;
        let s1 = 1.0 - s;
        let mut y = [0.0; N];
        for i in 0..N {
            let c = &self.cont;
            y[i] = c[0][i] + s * (c[1][i] + s1 * (c[2][i] + s * (c[3][i] + s1 * c[4][i])));
        }
        y
    }
}

/// A trajectory with per-step dense output.
#[derive(Debug, Clone)]
pub struct Solution<const N: usize> {
    steps: Vec<DenseStep<N>>,
    pub t_end: f64,
    pub y_end: [f64; N],
    pub n_accepted: usize,
    pub n_rejected: usize,
}

impl<const N: usize> Solution<N> {
    /// Dense evaluation at `t`, clamped to `[0, t_end]`.
    pub fn sample(&self, t: f64) -> [f64; N] {
        if self.steps.is_empty() || t >= self.t_end {
            return self.y_end;
        }
        let t = t.max(0.0);
        let idx = self.steps.partition_point(|s| s.t0 <= t);
        self.steps[idx.saturating_sub(1)].sample(t)
    }

    /// `m + 1` equally spaced samples over `[0, t_end]`, endpoints included.
    pub fn sample_uniform(&self, m: usize) -> Vec<(f64, [f64; N])> {
        assert!(m >= 1);
        (0..=m)
            .map(|i| {
                let t = self.t_end * i as f64 / m as f64;
                (t, self.sample(t))
            })
            .collect()
    }
}

/// Outcome of an event-terminated integration.
#[derive(Debug, Clone)]
pub struct EventRun<const N: usize> {
    pub solution: Solution<N>,
    /// First upward crossing `(t, y)` of the event function, if one occurred.
    pub crossing: Option<(f64, [f64; N])>,
}

#[derive(Debug, Clone, Copy)]
pub struct Integrator {
    pub tol: OdeTolerance,
    pub h_init: f64,
    pub max_steps: usize,
}

impl Default for Integrator {
    fn default() -> Self {
        Self {
            tol: OdeTolerance::default(),
            h_init: 1e-4,
            max_steps: 1_000_000,
        }
    }
}

impl Integrator {
    pub fn with_tolerance(tol: OdeTolerance) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }

    /// Integrates from `y0` to exactly `t = t_end` (`t_end >= 0`).
    pub fn run<const N: usize, F: OdeSystem<N>>(
        &self,
        system: &F,
        y0: [f64; N],
        t_end: f64,
    ) -> Result<Solution<N>, OdeError> {
        assert!(t_end >= 0.0, "integration time must be nonnegative");
        self.drive(system, y0, t_end, |_: &[f64; N]| f64::NEG_INFINITY)
            .map(|run| run.solution)
    }

    /// Integrates until the first upward crossing of `event` (from negative
    /// to nonnegative), or until `t_max`. The crossing time is located on
    /// the dense output by bisection to `1e-12` in `t`.
    pub fn run_until<const N: usize, F: OdeSystem<N>, G: Fn(&[f64; N]) -> f64>(
        &self,
        system: &F,
        y0: [f64; N],
        t_max: f64,
        event: G,
    ) -> Result<EventRun<N>, OdeError> {
        assert!(t_max >= 0.0, "integration time must be nonnegative");
        self.drive(system, y0, t_max, event)
    }

    fn drive<const N: usize, F: OdeSystem<N>, G: Fn(&[f64; N]) -> f64>(
        &self,
        system: &F,
        y0: [f64; N],
        t_end: f64,
        event: G,
    ) -> Result<EventRun<N>, OdeError> {
        let mut sol = Solution {
            steps: Vec::new(),
            t_end: 0.0,
            y_end: y0,
            n_accepted: 0,
            n_rejected: 0,
        };
        if t_end == 0.0 {
            return Ok(EventRun {
                solution: sol,
                crossing: None,
            });
        }

        let mut t = 0.0;
        let mut y = y0;
        let mut k1 = system
            .eval(&y)
            .map_err(|guard| OdeError::DomainBreach { t, guard })?;
        let mut g_prev = event(&y);
        let mut h = self.h_init.min(t_end);
        let mut n_steps = 0usize;

        while t < t_end {
            n_steps += 1;
            if n_steps > self.max_steps {
                return Err(OdeError::StepBudget {
                    t,
                    max_steps: self.max_steps,
                });
            }
            if h < STEP_FLOOR {
                return Err(OdeError::StepSizeUnderflow { t, h });
            }
            // Land exactly on t_end, avoiding a micro-step at the very end.
            let mut last = false;
            if t + 1.05 * h >= t_end {
                h = t_end - t;
                last = true;
            }

            match self.try_step(system, &y, &k1, h) {
                Err(_guard) => {
                    // Trial stage left the domain: shrink and retry.
                    sol.n_rejected += 1;
                    h *= 0.25;
                    continue;
                }
                Ok(step) => {
                    let err = self.error_norm(&y, &step.y_new, &step.err_vec);
                    if !err.is_finite() {
                        sol.n_rejected += 1;
                        h *= 0.1;
                        continue;
                    }
                    if err > 1.0 {
                        sol.n_rejected += 1;
                        h *= (0.9 * err.powf(-0.2)).max(0.1);
                        continue;
                    }
                    // Accepted.
                    sol.steps.push(DenseStep {
                        t0: t,
                        h,
                        cont: step.cont,
                    });
                    sol.n_accepted += 1;
                    let t_new = t + h;
                    let g_new = event(&step.y_new);
                    if g_prev < 0.0 && g_new >= 0.0 {
                        let (t_star, y_star) =
                            locate_crossing(sol.steps.last().unwrap(), &event, t, t_new);
                        sol.t_end = t_star;
                        sol.y_end = y_star;
                        return Ok(EventRun {
                            solution: sol,
                            crossing: Some((t_star, y_star)),
                        });
                    }
                    g_prev = g_new;
                    t = t_new;
                    y = step.y_new;
                    k1 = step.k7;
                    if last {
                        break;
                    }
                    let fac = if err == 0.0 {
                        5.0
                    } else {
                        (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
                    };
                    h *= fac;
                }
            }
        }

        sol.t_end = t_end;
        sol.y_end = y;
        Ok(EventRun {
            solution: sol,
            crossing: None,
        })
    }

    fn error_norm<const N: usize>(&self, y: &[f64; N], y_new: &[f64; N], err: &[f64; N]) -> f64 {
        let mut acc = 0.0;
        for i in 0..N {
            let scale = self.tol.abs + self.tol.rel * y[i].abs().max(y_new[i].abs());
            let e = err[i] / scale;
            acc += e * e;
        }
        (acc / N as f64).sqrt()
    }

    fn try_step<const N: usize, F: OdeSystem<N>>(
        &self,
        system: &F,
        y: &[f64; N],
        k1: &[f64; N],
        h: f64,
    ) -> Result<StepOutcome<N>, DomainGuard> {
        let stage = |coeffs: &[(f64, &[f64; N])]| {
            let mut out = *y;
            for &(c, k) in coeffs {
                for i in 0..N {
                    out[i] += h * c * k[i];
                }
            }
            out
        };
        let _ = (C2, C3, C4, C5); // autonomous system: stage times unused
        let k2 = system.eval(&stage(&[(A21, k1)]))?;
        let k3 = system.eval(&stage(&[(A31, k1), (A32, &k2)]))?;
        let k4 = system.eval(&stage(&[(A41, k1), (A42, &k2), (A43, &k3)]))?;
        let k5 = system.eval(&stage(&[(A51, k1), (A52, &k2), (A53, &k3), (A54, &k4)]))?;
        let k6 = system.eval(&stage(&[
            (A61, k1),
            (A62, &k2),
            (A63, &k3),
            (A64, &k4),
            (A65, &k5),
        ]))?;
        let y_new = stage(&[(B1, k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
        let k7 = system.eval(&y_new)?;

        let mut err_vec = [0.0; N];
        for i in 0..N {
            err_vec[i] =
                h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
        }

        let mut cont = [[0.0; N]; 5];
        for i in 0..N {
            let ydiff = y_new[i] - y[i];
            let bspl = h * k1[i] - ydiff;
            cont[0][i] = y[i];
            cont[1][i] = ydiff;
            cont[2][i] = bspl;
            cont[3][i] = ydiff - h * k7[i] - bspl;
            cont[4][i] =
                h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
        }

        Ok(StepOutcome {
            y_new,
            k7,
            err_vec,
            cont,
        })
    }
}

struct StepOutcome<const N: usize> {
    y_new: [f64; N],
    k7: [f64; N],
    err_vec: [f64; N],
    cont: [[f64; N]; 5],
}

fn locate_crossing<const N: usize, G: Fn(&[f64; N]) -> f64>(
    step: &DenseStep<N>,
    event: &G,
    t_lo: f64,
    t_hi: f64,
) -> (f64, [f64; N]) {
    let mut lo = t_lo;
    let mut hi = t_hi;
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if event(&step.sample(mid)) >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (hi, step.sample(hi))
}
