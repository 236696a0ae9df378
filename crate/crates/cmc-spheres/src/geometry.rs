//! Full profile curves and hypersurface data from a converged shooting
//! point: symmetry extension, embeddedness verification, immersion points,
//! volume quadrature and the comparison against Clifford volumes.

use serde::Serialize;
use thiserror::Error;

use crate::family::{self, FamilyParams};
use crate::ivp::{Integrator, OdeError, OdeTolerance};
use crate::profile::{ProfileState, ProfileSystem};
use crate::shooting::ShootingPoint;

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error(transparent)]
    Ode(#[from] OdeError),
    #[error("profile sample at t = {t:.6e} violates the domain invariants")]
    NonAdmissible { t: f64 },
}

/// One dense sample of the profile curve with its derived scalars.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ProfileSample {
    pub t: f64,
    pub f1: f64,
    pub f2: f64,
    pub theta: f64,
    pub f: f64,
    pub g: f64,
    pub h: f64,
}

impl ProfileSample {
    fn from_state(t: f64, state: ProfileState) -> Self {
        Self {
            t,
            f1: state.f1,
            f2: state.f2,
            theta: state.theta,
            f: state.f(),
            g: state.g(),
            h: state.h(),
        }
    }

    pub fn state(&self) -> ProfileState {
        ProfileState::new(self.f1, self.f2, self.theta)
    }
}

/// A full-period profile curve sampled on `[0, 2T]`.
///
/// The second half is produced by the reflection symmetry
/// `f1(T + t) = -f1(T - t)`, `f2(T + t) = f2(T - t)`,
/// `theta(T + t) = 2 pi - theta(T - t)`; the deviation of the directly
/// integrated second half from the reflected one is recorded.
#[derive(Debug, Clone)]
pub struct ProfileCurve {
    pub params: FamilyParams,
    pub point: ShootingPoint,
    pub samples: Vec<ProfileSample>,
    pub reflection_deviation: f64,
}

/// Integrates the full period and samples it. `n_samples` is rounded up to
/// a multiple of 8 so that both halves carry composite-Simpson grids.
pub fn reconstruct(
    point: &ShootingPoint,
    params: FamilyParams,
    n_samples: usize,
    ode: OdeTolerance,
) -> Result<ProfileCurve, GeometryError> {
    let n = n_samples.max(16).div_ceil(8) * 8;
    let t_half = point.half_period;
    let sys = ProfileSystem {
        params,
        h_mean: point.h_mean,
    };
    let sol = Integrator::with_tolerance(ode).run(
        &sys,
        ProfileState::start(point.a).to_array(),
        2.0 * t_half,
    )?;

    let mut samples = Vec::with_capacity(n + 1);
    let mut deviation = 0.0f64;
    for i in 0..=n {
        let t = 2.0 * t_half * i as f64 / n as f64;
        let state = if i <= n / 2 {
            ProfileState::from_array(&sol.sample(t))
        } else {
            // Reflection of the first half about t = T.
            let mirror = sol.sample(2.0 * t_half - t);
            let direct = sol.sample(t);
            let reflected = ProfileState::new(
                -mirror[0],
                mirror[1],
                2.0 * std::f64::consts::PI - mirror[2],
            );
            deviation = deviation
                .max((direct[0] - reflected.f1).abs())
                .max((direct[1] - reflected.f2).abs())
                .max((direct[2] - reflected.theta).abs());
            reflected
        };
        if !state.admissible() {
            return Err(GeometryError::NonAdmissible { t });
        }
        samples.push(ProfileSample::from_state(t, state));
    }

    Ok(ProfileCurve {
        params,
        point: *point,
        samples,
        reflection_deviation: deviation,
    })
}

/// Verdict of the simple-closed-curve test, with the first violating
/// segment pair when the curve self-intersects.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EmbeddingCheck {
    pub embedded: bool,
    pub violation: Option<(usize, usize)>,
}

/// Tests the closed polyline `(f1, f2)` for self-intersection (pairwise
/// segment tests between non-adjacent segments, pruned by a uniform spatial
/// grid) and for strict positivity of `f2`.
pub fn check_embedded(curve: &ProfileCurve) -> EmbeddingCheck {
    if curve.samples.iter().any(|s| s.f2 <= 0.0) {
        return EmbeddingCheck {
            embedded: false,
            violation: None,
        };
    }
    let mut pts: Vec<[f64; 2]> = curve.samples.iter().map(|s| [s.f1, s.f2]).collect();
    // The reflection extension closes the loop exactly; drop the duplicate
    // closing vertex and treat the polyline as cyclic.
    if pts.len() > 1 {
        pts.pop();
    }
    match find_self_intersection(&pts) {
        Some(pair) => EmbeddingCheck {
            embedded: false,
            violation: Some(pair),
        },
        None => EmbeddingCheck {
            embedded: true,
            violation: None,
        },
    }
}

/// First pair of non-adjacent segments of the closed polyline through
/// `pts` that intersect, if any.
pub fn find_self_intersection(pts: &[[f64; 2]]) -> Option<(usize, usize)> {
    let n = pts.len();
    if n < 4 {
        return None;
    }
    let seg = |i: usize| (pts[i], pts[(i + 1) % n]);

    // Uniform grid keyed by cell coordinates; cell size tracks the longest
    // segment so each segment overlaps O(1) cells.
    let (mut min_x, mut min_y) = (f64::INFINITY, f64::INFINITY);
    let (mut max_x, mut max_y) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    let mut longest = 0.0f64;
    for i in 0..n {
        let (a, b) = seg(i);
        min_x = min_x.min(a[0]);
        min_y = min_y.min(a[1]);
        max_x = max_x.max(a[0]);
        max_y = max_y.max(a[1]);
        longest = longest.max(((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt());
    }
    let cell = longest.max(1e-12) * 1.5;
    let nx = (((max_x - min_x) / cell).floor() as i64 + 1).max(1);
    let ny = (((max_y - min_y) / cell).floor() as i64 + 1).max(1);
    let cell_of = |x: f64, y: f64| -> (i64, i64) {
        (
            (((x - min_x) / cell).floor() as i64).clamp(0, nx - 1),
            (((y - min_y) / cell).floor() as i64).clamp(0, ny - 1),
        )
    };

    let mut grid: Vec<Vec<usize>> = vec![Vec::new(); (nx * ny) as usize];
    for i in 0..n {
        let (a, b) = seg(i);
        let (cx0, cy0) = cell_of(a[0].min(b[0]), a[1].min(b[1]));
        let (cx1, cy1) = cell_of(a[0].max(b[0]), a[1].max(b[1]));
        for cx in cx0..=cx1 {
            for cy in cy0..=cy1 {
                grid[(cy * nx + cx) as usize].push(i);
            }
        }
    }

    let adjacent = |i: usize, j: usize| {
        let d = i.abs_diff(j);
        d == 1 || d == n - 1
    };
    let mut candidates: Vec<usize> = Vec::new();
    for i in 0..n {
        let (a, b) = seg(i);
        candidates.clear();
        let (cx0, cy0) = cell_of(a[0].min(b[0]), a[1].min(b[1]));
        let (cx1, cy1) = cell_of(a[0].max(b[0]), a[1].max(b[1]));
        for cx in cx0..=cx1 {
            for cy in cy0..=cy1 {
                candidates.extend(grid[(cy * nx + cx) as usize].iter().copied());
            }
        }
        candidates.sort_unstable();
        candidates.dedup();
        for &j in candidates.iter().filter(|&&j| j > i) {
            if adjacent(i, j) {
                continue;
            }
            let (c, d) = seg(j);
            if segments_intersect(a, b, c, d) {
                return Some((i, j));
            }
        }
    }
    None
}

fn orient(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

fn on_segment(a: [f64; 2], b: [f64; 2], p: [f64; 2]) -> bool {
    p[0] >= a[0].min(b[0])
        && p[0] <= a[0].max(b[0])
        && p[1] >= a[1].min(b[1])
        && p[1] <= a[1].max(b[1])
}

fn segments_intersect(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2]) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if ((o1 > 0.0 && o2 < 0.0) || (o1 < 0.0 && o2 > 0.0))
        && ((o3 > 0.0 && o4 < 0.0) || (o3 < 0.0 && o4 > 0.0))
    {
        return true;
    }
    // Collinear touching counts as a violation for non-adjacent segments.
    (o1 == 0.0 && on_segment(a, b, c))
        || (o2 == 0.0 && on_segment(a, b, d))
        || (o3 == 0.0 && on_segment(c, d, a))
        || (o4 == 0.0 && on_segment(c, d, b))
}

/// Point of the immersion `phi(y, z, t) = (f y, f2 z, f1)` in `R^{n+2}`,
/// for unit vectors `y` in `R^{k+1}`, `z` in `R^{l+1}`.
pub fn immersion_point(sample: &ProfileSample, y: &[f64], z: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(y.len() + z.len() + 1);
    out.extend(y.iter().map(|&yi| sample.f * yi));
    out.extend(z.iter().map(|&zi| sample.f2 * zi));
    out.push(sample.f1);
    out
}

/// Hypersurface volume with the Clifford comparison volumes and the
/// verdict of the volume comparison.
#[derive(Debug, Clone, Serialize)]
pub struct VolumeReport {
    pub vol: f64,
    /// `(l', VolC(n, l'))` for the distinct Clifford factors `1 <= l' <= n/2`.
    pub clifford: Vec<(u32, f64)>,
    /// `vol` exceeds every listed Clifford volume.
    pub yau_ok: bool,
    pub quadrature_error_estimate: f64,
}

/// Volume of the hypersurface generated by the profile curve:
///
/// `Vol = 2 sigma_k sigma_l  Int_0^T  f2^l f^{k-1} h dt`
///
/// using the exact simplification `1 + (df/dt)^2 = h^2 / f^2` of the
/// arc-length volume element. Composite Simpson quadrature on the dense
/// samples of `[0, T]`, with a Richardson error estimate from the
/// half-resolution grid.
pub fn volume(curve: &ProfileCurve) -> VolumeReport {
    let params = curve.params;
    let k = params.k();
    let l = params.l();
    let half = curve.samples.len() / 2; // sample count is even by construction
    let first_half = &curve.samples[..=half];
    let integrand: Vec<f64> = first_half
        .iter()
        .map(|s| s.f2.powi(l as i32) * s.f.powi(k as i32 - 1) * s.h)
        .collect();
    let dt = curve.point.half_period / half as f64;
    let fine = simpson(&integrand, dt);
    let coarse_vals: Vec<f64> = integrand.iter().copied().step_by(2).collect();
    let coarse = simpson(&coarse_vals, 2.0 * dt);
    let scale = 2.0 * family::sphere_volume(k) * family::sphere_volume(l);
    let vol = scale * fine;
    let quadrature_error_estimate = scale * (fine - coarse).abs() / 15.0;

    let n = params.n();
    let clifford: Vec<(u32, f64)> = (1..=n / 2)
        .map(|lp| (lp, family::clifford_volume(n, lp).expect("valid factor")))
        .collect();
    let yau_ok = clifford.iter().all(|&(_, v)| vol > v);

    VolumeReport {
        vol,
        clifford,
        yau_ok,
        quadrature_error_estimate,
    }
}

fn simpson(values: &[f64], dt: f64) -> f64 {
    let n = values.len() - 1;
    assert!(
        n >= 2 && n.is_multiple_of(2),
        "Simpson needs an even interval count"
    );
    let mut acc = values[0] + values[n];
    for (i, v) in values.iter().enumerate().take(n).skip(1) {
        acc += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
    }
    acc * dt / 3.0
}

/// Verdict of the volume comparison for one minimal example.
#[derive(Debug, Clone, Serialize)]
pub struct YauVerdict {
    pub vol: f64,
    /// Volume of the totally geodesic equator `sigma_n`.
    pub sigma_n: f64,
    pub exceeds_all_clifford: bool,
    pub exceeds_geodesic_floor: bool,
    /// `(l', vol - VolC(n, l'))` margins, all positive when the comparison
    /// holds.
    pub margins: Vec<(u32, f64)>,
}

pub fn yau_check(params: FamilyParams, report: &VolumeReport) -> YauVerdict {
    let sigma_n = family::sphere_volume(params.n());
    let margins: Vec<(u32, f64)> = report
        .clifford
        .iter()
        .map(|&(lp, v)| (lp, report.vol - v))
        .collect();
    YauVerdict {
        vol: report.vol,
        sigma_n,
        exceeds_all_clifford: margins.iter().all(|&(_, m)| m > 0.0),
        exceeds_geodesic_floor: report.vol > sigma_n,
        margins,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shooting::{find_seed, NewtonSettings};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn params31() -> FamilyParams {
        FamilyParams::from_factors(1, 1).unwrap()
    }

    fn minimal31() -> ShootingPoint {
        find_seed(
            params31(),
            0.0,
            (0.05, 0.5),
            OdeTolerance::default(),
            &NewtonSettings::default(),
        )
        .unwrap()
        .point
    }

    #[test]
    fn reconstruct_minimal_31() {
        let point = minimal31();
        let curve = reconstruct(&point, params31(), 1024, OdeTolerance::default()).unwrap();
        // Full length 2T.
        let len = curve.samples.last().unwrap().t;
        assert!((len - 2.31851).abs() < 1e-4, "length {len}");
        // Endpoint closure in (f1, f2).
        let first = curve.samples.first().unwrap();
        let last = curve.samples.last().unwrap();
        assert!((first.f1 - last.f1).abs() < 1e-6);
        assert!((first.f2 - last.f2).abs() < 1e-6);
        assert!((last.theta - 2.0 * PI).abs() < 1e-6);
        // Direct integration of the second half agrees with the reflection.
        assert!(
            curve.reflection_deviation < 1e-7,
            "deviation {}",
            curve.reflection_deviation
        );
        // Reflection symmetry of the stored samples.
        let n = curve.samples.len() - 1;
        for i in 0..=n {
            let s = &curve.samples[i];
            let m = &curve.samples[n - i];
            assert!((s.f1 + m.f1).abs() < 1e-6);
            assert!((s.f2 - m.f2).abs() < 1e-6);
        }
    }

    #[test]
    fn embedded_verdict_for_minimal_31() {
        let curve = reconstruct(&minimal31(), params31(), 1024, OdeTolerance::default()).unwrap();
        let check = check_embedded(&curve);
        assert!(check.embedded, "violation: {:?}", check.violation);
    }

    #[test]
    fn figure_eight_is_rejected() {
        // A polyline tracing a bowtie: two triangles sharing a crossing.
        let pts = [[0.0, 0.0], [1.0, 1.0], [1.0, 0.0], [0.0, 1.0]];
        let hit = find_self_intersection(&pts);
        assert!(hit.is_some());
        let (i, j) = hit.unwrap();
        assert!((i, j) == (0, 2) || (i, j) == (1, 3), "pair {:?}", (i, j));
    }

    proptest! {
        /// Star-shaped polygons (radial graphs around an interior point)
        /// are always simple.
        #[test]
        fn star_shaped_polygons_are_simple(radii in proptest::collection::vec(0.2f64..1.0, 8..40)) {
            let n = radii.len();
            let pts: Vec<[f64; 2]> = radii
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    let phi = std::f64::consts::TAU * i as f64 / n as f64;
                    [r * phi.cos(), r * phi.sin() + 2.0]
                })
                .collect();
            prop_assert!(find_self_intersection(&pts).is_none());
        }
    }

    #[test]
    fn immersion_points_lie_on_the_sphere() {
        let curve = reconstruct(&minimal31(), params31(), 256, OdeTolerance::default()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let idx = rng.gen_range(0..curve.samples.len());
            let phi_y = rng.gen_range(0.0..std::f64::consts::TAU);
            let phi_z = rng.gen_range(0.0..std::f64::consts::TAU);
            let y = [phi_y.cos(), phi_y.sin()];
            let z = [phi_z.cos(), phi_z.sin()];
            let p = immersion_point(&curve.samples[idx], &y, &z);
            assert_eq!(p.len(), 5);
            let norm: f64 = p.iter().map(|v| v * v).sum::<f64>().sqrt();
            assert!((norm - 1.0).abs() < 1e-12);
        }
        // t = 0 sample has last coordinate f1 = 0.
        let p0 = immersion_point(&curve.samples[0], &[1.0, 0.0], &[0.0, 1.0]);
        assert!(p0[4].abs() < 1e-12);
        // Flipping z only changes the middle block.
        let pa = immersion_point(&curve.samples[10], &[1.0, 0.0], &[0.6, 0.8]);
        let pb = immersion_point(&curve.samples[10], &[1.0, 0.0], &[-0.6, -0.8]);
        assert_eq!(pa[0], pb[0]);
        assert_eq!(pa[1], pb[1]);
        assert_eq!(pa[2], -pb[2]);
        assert_eq!(pa[3], -pb[3]);
        assert_eq!(pa[4], pb[4]);
    }

    #[test]
    fn volume_of_minimal_31() {
        let curve = reconstruct(&minimal31(), params31(), 4096, OdeTolerance::default()).unwrap();
        let report = volume(&curve);
        assert!((report.vol - 37.8540).abs() < 1e-2, "vol {}", report.vol);
        assert!(report.quadrature_error_estimate < 1e-8);
        assert!(report.yau_ok);
        let verdict = yau_check(params31(), &report);
        assert!(verdict.exceeds_all_clifford);
        assert!(verdict.exceeds_geodesic_floor);
        // Margin over VolC(3, 1) ~ 7.46.
        assert!((verdict.margins[0].1 - 7.46).abs() < 0.02);
    }

    #[test]
    fn volume_integrand_identity() {
        // f2^l f^{k-1} h equals f2^l f^k sqrt(1 + (df/dt)^2) pointwise.
        let curve = reconstruct(&minimal31(), params31(), 512, OdeTolerance::default()).unwrap();
        for s in &curve.samples {
            let (sin_t, cos_t) = s.theta.sin_cos();
            let dfdt = -(s.f1 * cos_t + s.f2 * sin_t) / s.f;
            let h_form = s.f2 * s.h;
            let sqrt_form = s.f2 * s.f * (1.0 + dfdt * dfdt).sqrt();
            assert!((h_form - sqrt_form).abs() < 1e-10);
        }
    }

    #[test]
    fn perturbed_trajectory_breaks_curvature_identity() {
        use crate::profile::{curvature_residual, RatedSample};
        let curve = reconstruct(&minimal31(), params31(), 1024, OdeTolerance::default()).unwrap();
        let samples: Vec<RatedSample> = curve
            .samples
            .iter()
            .map(|s| RatedSample::on_flow(s.state(), params31(), 0.0).unwrap())
            .collect();
        let clean = curvature_residual(&samples, params31(), 0.0).unwrap();
        assert!(clean < 1e-8, "clean residual {clean}");
        // Offsetting theta desynchronizes the states from their recorded
        // turning rates; the identity must notice.
        let skewed: Vec<RatedSample> = samples
            .iter()
            .map(|r| RatedSample {
                state: ProfileState::new(r.state.f1, r.state.f2, r.state.theta + 0.01),
                theta_rate: r.theta_rate,
            })
            .collect();
        let broken = curvature_residual(&skewed, params31(), 0.0).unwrap();
        assert!(broken > 1e-3, "perturbed residual {broken}");
    }

    #[test]
    fn immersion_grid_points_stay_separated() {
        let curve = reconstruct(&minimal31(), params31(), 64, OdeTolerance::default()).unwrap();
        let mut pts: Vec<[f64; 5]> = Vec::new();
        for si in (0..curve.samples.len() - 1).step_by(6) {
            for iu in 0..10 {
                for iv in 0..10 {
                    let u = std::f64::consts::TAU * iu as f64 / 10.0;
                    let v = std::f64::consts::TAU * iv as f64 / 10.0;
                    let p = immersion_point(
                        &curve.samples[si],
                        &[u.cos(), u.sin()],
                        &[v.cos(), v.sin()],
                    );
                    pts.push([p[0], p[1], p[2], p[3], p[4]]);
                }
            }
        }
        let mut min_d2 = f64::INFINITY;
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                let d2: f64 = (0..5).map(|k| (pts[i][k] - pts[j][k]).powi(2)).sum();
                min_d2 = min_d2.min(d2);
            }
        }
        assert!(min_d2 > 0.0, "grid points collide");
    }

    #[test]
    fn volume_symmetric_over_second_half() {
        // Integrating the directly computed second half of the period gives
        // the same value as the first half.
        use crate::ivp::Integrator;
        use crate::profile::ProfileSystem;

        let point = minimal31();
        let sys = ProfileSystem {
            params: params31(),
            h_mean: point.h_mean,
        };
        let sol = Integrator::default()
            .run(
                &sys,
                ProfileState::start(point.a).to_array(),
                2.0 * point.half_period,
            )
            .unwrap();
        let w = |y: [f64; 3]| {
            let s = ProfileState::from_array(&y);
            s.f2 * s.h()
        };
        let m = 2048usize;
        let dt = point.half_period / m as f64;
        let first: Vec<f64> = (0..=m).map(|i| w(sol.sample(dt * i as f64))).collect();
        let second: Vec<f64> = (0..=m)
            .map(|i| w(sol.sample(point.half_period + dt * i as f64)))
            .collect();
        let a = simpson(&first, dt);
        let b = simpson(&second, dt);
        assert!((a - b).abs() < 1e-8 * a.abs(), "{a} vs {b}");
    }
}
