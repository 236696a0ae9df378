//! Predictor-corrector tracing of the solution curve in `(a, H, T)`-space.
//!
//! The tangent at a converged shooting point is `v = grad F1 x grad Theta`;
//! the corrector is a Newton solve restricted to the plane through the
//! predicted point orthogonal to `v`, which stays well-posed through the
//! fold at the minimum of `H`.

use serde::Serialize;
use thiserror::Error;

use crate::family::FamilyParams;
use crate::ivp::OdeTolerance;
use crate::shooting::{
    self, Frozen, NewtonSettings, ShootingError, ShootingJacobian, ShootingPoint, SolvedPoint,
};
use crate::vec3;

#[derive(Debug, Error)]
pub enum ContinuationError {
    #[error("tangent rank drop: |grad F1 x grad Theta| = {norm:.3e}")]
    RankDrop { norm: f64 },
    #[error(transparent)]
    Shooting(#[from] ShootingError),
    #[error("curve does not span the requested feature: {0}")]
    NotSpanned(String),
}

/// One traced point with its oriented unit tangent.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CurvePoint {
    #[serde(flatten)]
    pub point: ShootingPoint,
    pub tangent: [f64; 3],
}

/// Why a trace stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StopReason {
    /// `a` fell below the floor (profile collapsing onto the axis).
    RadiusFloor,
    /// `T` fell below the floor (profile collapsing to a point).
    PeriodFloor,
    /// `H` exceeded the cap.
    CurvatureCap,
    /// Point budget exhausted.
    PointBudget,
    /// Step size underflowed without a converged corrector.
    Stalled,
}

/// An arm of the solution curve traced in one direction.
#[derive(Debug, Clone)]
pub struct TracedArm {
    pub points: Vec<CurvePoint>,
    pub stop: StopReason,
    pub last_error: Option<String>,
}

/// Trace direction in terms of the seed radius `a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    IncreasingA,
    DecreasingA,
}

impl Direction {
    fn sign(self) -> f64 {
        match self {
            Direction::IncreasingA => 1.0,
            Direction::DecreasingA => -1.0,
        }
    }
}

/// Predictor step-size control. The step is halved on corrector failure or
/// slow convergence and grown after easy corrections.
#[derive(Debug, Clone, Copy)]
pub struct StepControl {
    pub h_init: f64,
    pub h_min: f64,
    pub h_max: f64,
    pub grow: f64,
    pub grow_below_iters: usize,
    pub shrink_above_iters: usize,
}

impl Default for StepControl {
    fn default() -> Self {
        Self {
            h_init: 1e-2,
            h_min: 1e-5,
            h_max: 5e-2,
            grow: 1.3,
            grow_below_iters: 2,
            shrink_above_iters: 5,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct StopRules {
    pub a_floor: f64,
    pub t_floor: f64,
    pub h_cap: f64,
    pub max_points: usize,
}

impl Default for StopRules {
    fn default() -> Self {
        Self {
            a_floor: 1e-3,
            t_floor: 5e-3,
            h_cap: 50.0,
            max_points: 4000,
        }
    }
}

/// Unit tangent of the solution curve at a converged point,
/// `v = grad F1 x grad Theta` normalized. The sign is not fixed here;
/// tracing orients it.
pub fn tangent(jac: &ShootingJacobian) -> Result<[f64; 3], ContinuationError> {
    let v = vec3::cross(&jac.grad_f1, &jac.grad_theta);
    let n = vec3::norm(&v);
    if n < 1e-10 {
        return Err(ContinuationError::RankDrop { norm: n });
    }
    Ok(vec3::scale(&v, 1.0 / n))
}

/// Traces one arm of the solution curve from a converged start point.
///
/// Predictor `p + h v`, corrector in the plane orthogonal to `v` through
/// the predicted point. Mid-trace failures end the arm with the partial
/// curve attached; only a defective start point is an error.
pub fn trace(
    start: &SolvedPoint,
    params: FamilyParams,
    direction: Direction,
    step: &StepControl,
    stop: &StopRules,
    ode: OdeTolerance,
    newton: &NewtonSettings,
) -> Result<TracedArm, ContinuationError> {
    let v0 = tangent(&start.jacobian)?;
    // Orient so that the direction flag refers to the seed radius.
    let mut tan = vec3::scale(&v0, v0[0].signum() * direction.sign());
    let mut cur = start.point;
    let mut points = vec![CurvePoint {
        point: cur,
        tangent: tan,
    }];
    let mut h = step.h_init;

    loop {
        if points.len() >= stop.max_points {
            return Ok(arm(points, StopReason::PointBudget, None));
        }
        let pred = vec3::add(&cur.position(), &vec3::scale(&tan, h));
        let corrected = shooting::solve(
            ShootingPoint::guess(pred[0], pred[1], pred[2]),
            Frozen::Plane { normal: tan },
            params,
            ode,
            newton,
        );
        match corrected {
            Ok(next) => {
                let nt = match tangent(&next.jacobian) {
                    Ok(t) => t,
                    Err(e) => return Ok(arm(points, StopReason::Stalled, Some(e.to_string()))),
                };
                let nt = if vec3::dot(&nt, &tan) < 0.0 {
                    vec3::scale(&nt, -1.0)
                } else {
                    nt
                };
                points.push(CurvePoint {
                    point: next.point,
                    tangent: nt,
                });
                cur = next.point;
                tan = nt;

                if cur.a < stop.a_floor {
                    return Ok(arm(points, StopReason::RadiusFloor, None));
                }
                if cur.half_period < stop.t_floor {
                    return Ok(arm(points, StopReason::PeriodFloor, None));
                }
                if cur.h_mean > stop.h_cap {
                    return Ok(arm(points, StopReason::CurvatureCap, None));
                }

                if next.iterations <= step.grow_below_iters {
                    h = (h * step.grow).min(step.h_max);
                } else if next.iterations > step.shrink_above_iters {
                    h = (h * 0.5).max(step.h_min);
                }
            }
            Err(e) => {
                if h <= step.h_min * 1.000_001 {
                    return Ok(arm(points, StopReason::Stalled, Some(e.to_string())));
                }
                h = (h * 0.5).max(step.h_min);
            }
        }
    }
}

fn arm(points: Vec<CurvePoint>, stop: StopReason, last_error: Option<String>) -> TracedArm {
    TracedArm {
        points,
        stop,
        last_error,
    }
}

/// The full solution curve, ordered by increasing seed radius `a`, with
/// tangents oriented consistently along the ordering.
#[derive(Debug, Clone)]
pub struct GammaCurve {
    pub params: FamilyParams,
    pub points: Vec<CurvePoint>,
}

impl GammaCurve {
    /// Joins the decreasing-`a` and increasing-`a` arms traced from the
    /// same seed point into one ordered curve.
    pub fn from_arms(params: FamilyParams, down: &TracedArm, up: &TracedArm) -> Self {
        let mut points = Vec::with_capacity(down.points.len() + up.points.len());
        for cp in down.points.iter().skip(1).rev() {
            points.push(CurvePoint {
                point: cp.point,
                tangent: vec3::scale(&cp.tangent, -1.0),
            });
        }
        points.extend(up.points.iter().copied());
        Self { params, points }
    }

    pub fn from_single(params: FamilyParams, arm: &TracedArm, direction: Direction) -> Self {
        let mut points = arm.points.clone();
        if direction == Direction::DecreasingA {
            points.reverse();
            for cp in &mut points {
                cp.tangent = vec3::scale(&cp.tangent, -1.0);
            }
        }
        Self { params, points }
    }

    /// Number of points at which `H` crosses the given level (polyline
    /// sign-change count, counting exact hits once).
    pub fn level_crossings(&self, h_level: f64) -> usize {
        let mut count = 0;
        let mut prev: Option<f64> = None;
        for cp in &self.points {
            let d = cp.point.h_mean - h_level;
            if d == 0.0 {
                count += 1;
                prev = None;
                continue;
            }
            if let Some(p) = prev {
                if p * d < 0.0 {
                    count += 1;
                }
            }
            prev = Some(d);
        }
        count
    }
}

/// Diagnostic record of the small-`a` end of the traced curve: as `a`
/// approaches zero the half-period should drift toward 1 and the mean
/// curvature toward 0 from below.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SmallATrend {
    pub a: f64,
    #[serde(rename = "H")]
    pub h_mean: f64,
    #[serde(rename = "T")]
    pub half_period: f64,
}

/// The distinguished points of a traced family.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SpecialPoints {
    /// Seed radius of the minimal (`H = 0`) member.
    #[serde(rename = "a_H0")]
    pub a_h0: f64,
    /// Seed radius at the minimum of `H` along the curve.
    #[serde(rename = "a_Hmin")]
    pub a_hmin: f64,
    /// Minimum mean curvature along the curve (negative).
    #[serde(rename = "H_min")]
    pub h_min: f64,
    /// Bracket for the collapse limit of the seed radius: the largest
    /// solved `a` and the extrapolated limit of an `a = a* - c T^2` fit
    /// over the final points.
    pub a_star_bracket: (f64, f64),
    pub small_a_trend: SmallATrend,
}

/// Number of trailing points used for the collapse-limit fit.
const A_STAR_FIT_POINTS: usize = 10;

/// Extracts the special points from a traced curve. The curve must span
/// the `H = 0` crossing and the `H` minimum.
pub fn detect_special(
    curve: &GammaCurve,
    ode: OdeTolerance,
    newton: &NewtonSettings,
) -> Result<SpecialPoints, ContinuationError> {
    let pts = &curve.points;
    if pts.len() < A_STAR_FIT_POINTS {
        return Err(ContinuationError::NotSpanned(format!(
            "only {} traced points",
            pts.len()
        )));
    }

    let h_zero = locate_h_zero(curve, ode, newton)?;
    let fold = locate_fold(curve, ode, newton)?;
    let a_star_bracket = fit_a_star(pts);
    let tail = pts
        .iter()
        .min_by(|x, y| x.point.a.total_cmp(&y.point.a))
        .expect("nonempty curve");

    Ok(SpecialPoints {
        a_h0: h_zero.a,
        a_hmin: fold.a,
        h_min: fold.h_mean,
        a_star_bracket,
        small_a_trend: SmallATrend {
            a: tail.point.a,
            h_mean: tail.point.h_mean,
            half_period: tail.point.half_period,
        },
    })
}

fn locate_h_zero(
    curve: &GammaCurve,
    ode: OdeTolerance,
    newton: &NewtonSettings,
) -> Result<ShootingPoint, ContinuationError> {
    let pts = &curve.points;
    // An exact zero (a seed solved at frozen H = 0) counts directly; take
    // the candidate with the largest a, which is the genuine crossing.
    if let Some(cp) = pts
        .iter()
        .filter(|cp| cp.point.h_mean.abs() <= 1e-13)
        .max_by(|x, y| x.point.a.total_cmp(&y.point.a))
    {
        return Ok(cp.point);
    }
    let mut best: Option<(usize, usize)> = None;
    for i in 0..pts.len() - 1 {
        if pts[i].point.h_mean * pts[i + 1].point.h_mean < 0.0 {
            best = Some((i, i + 1));
        }
    }
    let (i, j) =
        best.ok_or_else(|| ContinuationError::NotSpanned("curve does not bracket H = 0".into()))?;
    let (p, q) = (pts[i].point, pts[j].point);
    let w = p.h_mean / (p.h_mean - q.h_mean);
    let guess = ShootingPoint::guess(
        p.a + w * (q.a - p.a),
        0.0,
        p.half_period + w * (q.half_period - p.half_period),
    );
    let solved = shooting::solve(guess, Frozen::MeanCurvature, curve.params, ode, newton)?;
    Ok(solved.point)
}

fn locate_fold(
    curve: &GammaCurve,
    ode: OdeTolerance,
    newton: &NewtonSettings,
) -> Result<ShootingPoint, ContinuationError> {
    let pts = &curve.points;
    let flip = (0..pts.len() - 1)
        .find(|&i| pts[i].tangent[1] < 0.0 && pts[i + 1].tangent[1] >= 0.0)
        .ok_or_else(|| {
            ContinuationError::NotSpanned("curve does not bracket the H minimum".into())
        })?;
    let p = pts[flip].point.position();
    let q = pts[flip + 1].point.position();
    let chord = vec3::sub(&q, &p);
    let (u, chord_len) = vec3::normalize(&chord);
    if chord_len == 0.0 {
        return Ok(pts[flip].point);
    }
    let eval = |s: f64| -> Result<ShootingPoint, ContinuationError> {
        let guess = vec3::add(&p, &vec3::scale(&chord, s));
        let solved = shooting::solve(
            ShootingPoint::guess(guess[0], guess[1], guess[2]),
            Frozen::Plane { normal: u },
            curve.params,
            ode,
            newton,
        )?;
        Ok(solved.point)
    };

    // Golden-section minimization of H along the chord parameter.
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (0.0f64, 1.0f64);
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let mut fc = eval(c)?;
    let mut fd = eval(d)?;
    for _ in 0..200 {
        if (fc.h_mean - fd.h_mean).abs() < 1e-8 {
            break;
        }
        if fc.h_mean < fd.h_mean {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = eval(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = eval(d)?;
        }
    }
    Ok(if fc.h_mean < fd.h_mean { fc } else { fd })
}

/// Least-squares fit of `a = a* - c T^2` over the trailing points of the
/// collapse arm; returns `(largest solved a, extrapolated a*)`.
fn fit_a_star(pts: &[CurvePoint]) -> (f64, f64) {
    let tail = &pts[pts.len() - A_STAR_FIT_POINTS.min(pts.len())..];
    let m = tail.len() as f64;
    let (mut sx, mut sxx, mut sa, mut sax) = (0.0, 0.0, 0.0, 0.0);
    for cp in tail {
        let x = cp.point.half_period * cp.point.half_period;
        sx += x;
        sxx += x * x;
        sa += cp.point.a;
        sax += cp.point.a * x;
    }
    // Normal equations for (a*, c) in a = a* - c x.
    let det = m * sxx - sx * sx;
    let lower = pts.last().expect("nonempty").point.a;
    if det.abs() < 1e-30 {
        return (lower, lower + 1e-6);
    }
    let a_star = (sa * sxx - sx * sax) / det;
    (lower, a_star.max(lower + 1e-12))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shooting::find_seed;

    fn params31() -> FamilyParams {
        FamilyParams::from_factors(1, 1).unwrap()
    }

    fn seed31() -> SolvedPoint {
        find_seed(
            params31(),
            0.0,
            (0.05, 0.5),
            OdeTolerance::default(),
            &NewtonSettings::default(),
        )
        .unwrap()
    }

    #[test]
    fn tangent_matches_reference_direction() {
        let seed = seed31();
        let v = tangent(&seed.jacobian).unwrap();
        // Reference tangent, up to scale and sign.
        let (expect, _) = crate::vec3::normalize(&[-1.19859, -1.57684, 0.235021]);
        let align = crate::vec3::dot(&v, &expect);
        let flipped = if align < 0.0 {
            crate::vec3::scale(&v, -1.0)
        } else {
            v
        };
        for i in 0..3 {
            assert!(
                (flipped[i] - expect[i]).abs() < 1e-3,
                "component {i}: {} vs {}",
                flipped[i],
                expect[i]
            );
        }
        // Cross-product orthogonality.
        assert!(crate::vec3::dot(&v, &seed.jacobian.grad_f1).abs() < 1e-12);
        assert!(crate::vec3::dot(&v, &seed.jacobian.grad_theta).abs() < 1e-12);
    }

    #[test]
    fn short_traces_move_in_the_requested_direction() {
        let seed = seed31();
        let stop = StopRules {
            max_points: 12,
            ..StopRules::default()
        };
        let up = trace(
            &seed,
            params31(),
            Direction::IncreasingA,
            &StepControl::default(),
            &stop,
            OdeTolerance::default(),
            &NewtonSettings::default(),
        )
        .unwrap();
        assert!(up.points.last().unwrap().point.a > seed.point.a);
        assert!(up.points.last().unwrap().point.h_mean > 0.0);

        let down = trace(
            &seed,
            params31(),
            Direction::DecreasingA,
            &StepControl::default(),
            &stop,
            OdeTolerance::default(),
            &NewtonSettings::default(),
        )
        .unwrap();
        assert!(down.points.last().unwrap().point.a < seed.point.a);
        assert!(down.points.last().unwrap().point.h_mean < 0.0);

        let merged = GammaCurve::from_arms(params31(), &down, &up);
        assert_eq!(merged.points.len(), up.points.len() + down.points.len() - 1);
        for w in merged.points.windows(2) {
            assert!(w[0].point.a < w[1].point.a, "ordered by a");
            assert!(
                crate::vec3::dot(&w[0].tangent, &w[1].tangent) > 0.0,
                "consistent orientation"
            );
        }
    }

    #[test]
    fn tangent_agrees_with_secant_direction() {
        let seed = seed31();
        let step = StepControl {
            h_init: 5e-3,
            h_max: 5e-3,
            ..StepControl::default()
        };
        let stop = StopRules {
            max_points: 5,
            ..StopRules::default()
        };
        let arm = trace(
            &seed,
            params31(),
            Direction::IncreasingA,
            &step,
            &stop,
            OdeTolerance::default(),
            &NewtonSettings::default(),
        )
        .unwrap();
        let p0 = arm.points[1].point.position();
        let p2 = arm.points[3].point.position();
        let (secant, _) = crate::vec3::normalize(&crate::vec3::sub(&p2, &p0));
        let tan = arm.points[2].tangent;
        for i in 0..3 {
            assert!(
                (tan[i] - secant[i]).abs() < 1e-2,
                "{} vs {}",
                tan[i],
                secant[i]
            );
        }
    }

    #[test]
    fn retracing_reproduces_the_same_curve() {
        let seed = seed31();
        // Small fixed steps keep the polyline chords within the oracle
        // tolerance of the exact curve.
        let step = StepControl {
            h_init: 1e-3,
            h_max: 1e-3,
            ..StepControl::default()
        };
        let stop = StopRules {
            max_points: 30,
            ..StopRules::default()
        };
        let ode = OdeTolerance::default();
        let newton = NewtonSettings::default();
        let arm_a = trace(
            &seed,
            params31(),
            Direction::IncreasingA,
            &step,
            &stop,
            ode,
            &newton,
        )
        .unwrap();

        // Restart from an interior point of the first trace.
        let mid = arm_a.points[15].point;
        let restart =
            shooting::solve(mid, Frozen::MeanCurvature, params31(), ode, &newton).unwrap();
        let arm_b = trace(
            &restart,
            params31(),
            Direction::IncreasingA,
            &step,
            &stop,
            ode,
            &newton,
        )
        .unwrap();

        // Every restarted point lies within 1e-6 of the first polyline.
        for cp in arm_b.points.iter().take(10) {
            let d = dist_to_polyline(&cp.point.position(), &arm_a.points);
            assert!(d < 1e-6, "distance {d}");
        }
    }

    fn dist_to_polyline(x: &[f64; 3], pts: &[CurvePoint]) -> f64 {
        let mut best = f64::INFINITY;
        for w in pts.windows(2) {
            let a = w[0].point.position();
            let b = w[1].point.position();
            let ab = crate::vec3::sub(&b, &a);
            let denom = crate::vec3::dot(&ab, &ab);
            let t = if denom == 0.0 {
                0.0
            } else {
                (crate::vec3::dot(&crate::vec3::sub(x, &a), &ab) / denom).clamp(0.0, 1.0)
            };
            let proj = crate::vec3::add(&a, &crate::vec3::scale(&ab, t));
            best = best.min(crate::vec3::norm(&crate::vec3::sub(x, &proj)));
        }
        best
    }

    #[test]
    fn level_crossing_count() {
        let mk = |h: f64| CurvePoint {
            point: ShootingPoint {
                a: 0.1,
                h_mean: h,
                half_period: 1.0,
                res_f1: 0.0,
                res_theta: 0.0,
            },
            tangent: [1.0, 0.0, 0.0],
        };
        let curve = GammaCurve {
            params: params31(),
            points: vec![mk(-0.01), mk(-0.06), mk(-0.08), mk(-0.06), mk(0.0), mk(0.3)],
        };
        assert_eq!(curve.level_crossings(-0.05), 2);
        assert_eq!(curve.level_crossings(-0.09), 0);
        assert_eq!(curve.level_crossings(0.1), 1);
    }
}
