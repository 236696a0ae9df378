//! The half-period boundary value problem.
//!
//! From the initial conditions `f1(0) = 0, f2(0) = a, theta(0) = 0`, a
//! triple `(a, H, T)` is a shooting point when `F1(a, H, T) = f1(T) = 0`
//! and `Theta(a, H, T) = theta(T) = pi`. Each converged point is one
//! embedded CMC hypersurface with half-period `T`.

use serde::Serialize;
use thiserror::Error;

use crate::family::FamilyParams;
use crate::ivp::{Integrator, OdeError, OdeTolerance};
use crate::profile::{turning_rate, DualSensitivitySystem, ProfileState, ProfileSystem};
use crate::vec3;

/// Longest time the seed scan will wait for the tangent angle to reach pi.
const EVENT_T_MAX: f64 = 6.0;

/// Grid resolution of the exhaustive bracketing scan.
const SCAN_RESOLUTION: f64 = 1e-3;

/// Interval count of the cheap first-pass scan.
const SCAN_COARSE: usize = 40;

#[derive(Debug, Error)]
pub enum ShootingError {
    #[error("trajectory not admissible: {0}")]
    NonAdmissible(#[from] OdeError),
    #[error("no convergence after {iterations} Newton iterations (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("shooting Jacobian slice is numerically singular (cond = {cond:.3e})")]
    SingularJacobian { cond: f64 },
    #[error(
        "no sign change of the terminal height over a in [{lo}, {hi}] at resolution {resolution}"
    )]
    NoBracket { lo: f64, hi: f64, resolution: f64 },
    #[error("invalid shooting input: {0}")]
    InvalidInput(String),
}

/// One point of the solution set: `(a, H, T)` with the residuals of the
/// boundary conditions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShootingPoint {
    pub a: f64,
    #[serde(rename = "H")]
    pub h_mean: f64,
    #[serde(rename = "T")]
    pub half_period: f64,
    pub res_f1: f64,
    pub res_theta: f64,
}

impl ShootingPoint {
    pub fn guess(a: f64, h_mean: f64, half_period: f64) -> Self {
        Self {
            a,
            h_mean,
            half_period,
            res_f1: f64::NAN,
            res_theta: f64::NAN,
        }
    }

    pub fn position(&self) -> [f64; 3] {
        [self.a, self.h_mean, self.half_period]
    }

    pub fn residual_norm(&self) -> f64 {
        self.res_f1.abs().max(self.res_theta.abs())
    }
}

/// Gradients of the boundary functions with respect to `(a, H, T)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShootingJacobian {
    pub grad_f1: [f64; 3],
    pub grad_theta: [f64; 3],
}

/// A converged shooting point together with the Jacobian at the solution.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SolvedPoint {
    pub point: ShootingPoint,
    pub jacobian: ShootingJacobian,
    pub iterations: usize,
}

/// Which 2-dimensional slice of `(a, H, T)` the Newton correction acts on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Frozen {
    /// `a` held fixed; unknowns `(H, T)`.
    SeedRadius,
    /// `H` held fixed; unknowns `(a, T)`.
    MeanCurvature,
    /// `T` held fixed; unknowns `(a, H)`.
    HalfPeriod,
    /// Unknowns restricted to the plane through the guess orthogonal to
    /// `normal` (pseudo-arclength slice).
    Plane { normal: [f64; 3] },
}

impl Frozen {
    fn basis(&self) -> [[f64; 3]; 2] {
        match self {
            Frozen::SeedRadius => [[0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
            Frozen::MeanCurvature => [[1.0, 0.0, 0.0], [0.0, 0.0, 1.0]],
            Frozen::HalfPeriod => [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]],
            Frozen::Plane { normal } => {
                let (n_hat, _) = vec3::normalize(normal);
                // Seed axis least aligned with the normal.
                let mut axis = [0.0; 3];
                let mut best = f64::INFINITY;
                for i in 0..3 {
                    if n_hat[i].abs() < best {
                        best = n_hat[i].abs();
                        axis = [0.0; 3];
                        axis[i] = 1.0;
                    }
                }
                let (w1, _) = vec3::normalize(&vec3::cross(&n_hat, &axis));
                let w2 = vec3::cross(&n_hat, &w1);
                [w1, w2]
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct NewtonSettings {
    pub tol: f64,
    pub max_iter: usize,
    pub max_halvings: usize,
    pub max_cond: f64,
}

impl Default for NewtonSettings {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 20,
            max_halvings: 8,
            max_cond: 1e12,
        }
    }
}

impl NewtonSettings {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }
}

fn validate(a: f64, half_period: f64) -> Result<(), ShootingError> {
    if !(a > 0.0 && a < 1.0) {
        return Err(ShootingError::InvalidInput(format!(
            "seed radius a = {a} must lie in (0, 1)"
        )));
    }
    if !half_period.is_finite() || half_period <= 0.0 {
        return Err(ShootingError::InvalidInput(format!(
            "half-period T = {half_period} must be positive"
        )));
    }
    Ok(())
}

/// Integrates the base system to `T` and fills the boundary residuals
/// `res_f1 = f1(T)`, `res_theta = theta(T) - pi`.
pub fn evaluate(
    a: f64,
    h_mean: f64,
    half_period: f64,
    params: FamilyParams,
    ode: OdeTolerance,
) -> Result<ShootingPoint, ShootingError> {
    validate(a, half_period)?;
    let sys = ProfileSystem { params, h_mean };
    let sol = Integrator::with_tolerance(ode).run(
        &sys,
        ProfileState::start(a).to_array(),
        half_period,
    )?;
    Ok(ShootingPoint {
        a,
        h_mean,
        half_period,
        res_f1: sol.y_end[0],
        res_theta: sol.y_end[2] - std::f64::consts::PI,
    })
}

/// Integrates the base system and both sensitivity blocks in one pass and
/// assembles the gradients
/// `grad F1 = (f1_a(T), f1_H(T), cos(theta(T)))`,
/// `grad Theta = (theta_a(T), theta_H(T), K(T))`.
pub fn jacobian(
    a: f64,
    h_mean: f64,
    half_period: f64,
    params: FamilyParams,
    ode: OdeTolerance,
) -> Result<(ShootingPoint, ShootingJacobian), ShootingError> {
    validate(a, half_period)?;
    let sys = DualSensitivitySystem { params, h_mean };
    let sol = Integrator::with_tolerance(ode).run(&sys, sys.initial(a), half_period)?;
    let y = sol.y_end;
    let final_state = ProfileState::new(y[0], y[1], y[2]);
    let k_end = turning_rate(&final_state, params, h_mean).map_err(|guard| {
        ShootingError::NonAdmissible(OdeError::DomainBreach {
            t: half_period,
            guard,
        })
    })?;
    let point = ShootingPoint {
        a,
        h_mean,
        half_period,
        res_f1: y[0],
        res_theta: y[2] - std::f64::consts::PI,
    };
    let jac = ShootingJacobian {
        grad_f1: [y[3], y[6], y[2].cos()],
        grad_theta: [y[5], y[8], k_end],
    };
    Ok((point, jac))
}

/// Damped Newton iteration on `(F1, Theta - pi)` restricted to the slice
/// selected by `frozen`. Steps are halved (up to `max_halvings`) while the
/// residual norm fails to decrease.
///
/// The residual must be resolved beyond the Newton tolerance, so the
/// internal integrations run two decades tighter than `newton.tol`.
pub fn solve(
    guess: ShootingPoint,
    frozen: Frozen,
    params: FamilyParams,
    ode: OdeTolerance,
    newton: &NewtonSettings,
) -> Result<SolvedPoint, ShootingError> {
    let ode = OdeTolerance {
        rel: ode.rel.min(newton.tol * 1e-2),
        abs: ode.abs.min(newton.tol * 1e-2),
    };
    let basis = frozen.basis();
    let mut x = guess.position();

    for iter in 0..=newton.max_iter {
        let (point, jac) = jacobian(x[0], x[1], x[2], params, ode)?;
        let res = [point.res_f1, point.res_theta];
        let res_norm = point.residual_norm();
        if res_norm < newton.tol {
            return Ok(SolvedPoint {
                point,
                jacobian: jac,
                iterations: iter,
            });
        }
        if iter == newton.max_iter {
            return Err(ShootingError::NoConvergence {
                iterations: iter,
                residual: res_norm,
            });
        }

        let j = [
            [
                vec3::dot(&jac.grad_f1, &basis[0]),
                vec3::dot(&jac.grad_f1, &basis[1]),
            ],
            [
                vec3::dot(&jac.grad_theta, &basis[0]),
                vec3::dot(&jac.grad_theta, &basis[1]),
            ],
        ];
        let (delta, cond) = solve_2x2(&j, &res);
        if cond > newton.max_cond {
            return Err(ShootingError::SingularJacobian { cond });
        }

        // Step halving on residual increase (2-norm).
        let res2 = (res[0] * res[0] + res[1] * res[1]).sqrt();
        let mut lambda = 1.0;
        let mut accepted = None;
        for _ in 0..=newton.max_halvings {
            let cand = [
                x[0] + lambda * (delta[0] * basis[0][0] + delta[1] * basis[1][0]),
                x[1] + lambda * (delta[0] * basis[0][1] + delta[1] * basis[1][1]),
                x[2] + lambda * (delta[0] * basis[0][2] + delta[1] * basis[1][2]),
            ];
            if cand[0] > 0.0 && cand[0] < 1.0 && cand[2] > 0.0 {
                if let Ok(p) = evaluate(cand[0], cand[1], cand[2], params, ode) {
                    let cand2 = (p.res_f1 * p.res_f1 + p.res_theta * p.res_theta).sqrt();
                    if cand2 < res2 {
                        accepted = Some(cand);
                        break;
                    }
                }
            }
            lambda *= 0.5;
        }
        match accepted {
            Some(cand) => x = cand,
            None => {
                return Err(ShootingError::NoConvergence {
                    iterations: iter,
                    residual: res_norm,
                })
            }
        }
    }
    unreachable!("loop returns on convergence or failure");
}

fn solve_2x2(j: &[[f64; 2]; 2], r: &[f64; 2]) -> ([f64; 2], f64) {
    let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    let frob2 = j[0][0] * j[0][0] + j[0][1] * j[0][1] + j[1][0] * j[1][0] + j[1][1] * j[1][1];
    let disc = (frob2 * frob2 - 4.0 * det * det).max(0.0).sqrt();
    let smax2 = 0.5 * (frob2 + disc);
    let smin2 = 0.5 * (frob2 - disc);
    let cond = if smin2 <= 0.0 {
        f64::INFINITY
    } else {
        (smax2 / smin2).sqrt()
    };
    let delta = [
        -(j[1][1] * r[0] - j[0][1] * r[1]) / det,
        -(j[0][0] * r[1] - j[1][0] * r[0]) / det,
    ];
    (delta, cond)
}

/// Height `f1` and time of the first upward crossing of `theta = pi` for
/// the trajectory seeded at `(0, a, 0)`. `None` when the trajectory leaves
/// the admissible set or never reaches `theta = pi` by `t = EVENT_T_MAX`.
pub fn half_turn_height(
    params: FamilyParams,
    h_mean: f64,
    a: f64,
    ode: OdeTolerance,
) -> Option<(f64, f64)> {
    let sys = ProfileSystem { params, h_mean };
    let run = Integrator::with_tolerance(ode)
        .run_until(&sys, ProfileState::start(a).to_array(), EVENT_T_MAX, |y| {
            y[2] - std::f64::consts::PI
        })
        .ok()?;
    run.crossing.map(|(t, y)| (y[0], t))
}

/// Finds a converged shooting point at fixed `H` by scanning the seed
/// radius: the scalar map `psi(a) = f1` at the first `theta = pi` event is
/// bracketed for a sign change, bisected, and the root polished with a
/// Newton solve in the `(a, T)` slice.
pub fn find_seed(
    params: FamilyParams,
    h_mean: f64,
    a_range: (f64, f64),
    ode: OdeTolerance,
    newton: &NewtonSettings,
) -> Result<SolvedPoint, ShootingError> {
    let (lo, hi) = a_range;
    if !(lo > 0.0 && hi < 1.0 && lo < hi) {
        return Err(ShootingError::InvalidInput(format!(
            "scan range ({lo}, {hi}) must satisfy 0 < lo < hi < 1"
        )));
    }

    let fine_intervals = ((hi - lo) / SCAN_RESOLUTION).ceil() as usize;
    for intervals in [SCAN_COARSE, fine_intervals.max(SCAN_COARSE + 1)] {
        let psi = |a: f64| half_turn_height(params, h_mean, a, ode);
        let mut prev: Option<(f64, f64, f64)> = None; // (a, psi, t_event)
        for i in 0..=intervals {
            let a = lo + (hi - lo) * i as f64 / intervals as f64;
            let cur = psi(a);
            if let (Some((a0, p0, _)), Some((p1, t1))) = (prev, cur) {
                if p0 * p1 <= 0.0 {
                    return bisect_and_polish(params, h_mean, (a0, p0), (a, p1), t1, ode, newton);
                }
            }
            prev = cur.map(|(p, t)| (a, p, t));
        }
    }
    Err(ShootingError::NoBracket {
        lo,
        hi,
        resolution: SCAN_RESOLUTION,
    })
}

fn bisect_and_polish(
    params: FamilyParams,
    h_mean: f64,
    mut lo: (f64, f64),
    mut hi: (f64, f64),
    mut t_event: f64,
    ode: OdeTolerance,
    newton: &NewtonSettings,
) -> Result<SolvedPoint, ShootingError> {
    while hi.0 - lo.0 > 1e-9 {
        let mid = 0.5 * (lo.0 + hi.0);
        let (p, t) =
            half_turn_height(params, h_mean, mid, ode).ok_or(ShootingError::NoBracket {
                lo: lo.0,
                hi: hi.0,
                resolution: SCAN_RESOLUTION,
            })?;
        t_event = t;
        if lo.1 * p <= 0.0 {
            hi = (mid, p);
        } else {
            lo = (mid, p);
        }
    }
    let a_root = 0.5 * (lo.0 + hi.0);
    solve(
        ShootingPoint::guess(a_root, h_mean, t_event),
        Frozen::MeanCurvature,
        params,
        ode,
        newton,
    )
}
