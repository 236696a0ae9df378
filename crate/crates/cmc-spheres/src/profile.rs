//! The profile-curve ODE and its variational systems.
//!
//! Under arc-length parametrization `f1' = cos(theta)`, `f2' = sin(theta)`,
//! the turning rate of the tangent is
//!
//! ```text
//! theta' = K = h^2 / (f2 f^2) * (n f1 f2 sin(theta) + n H f2 h
//!                                - n f2^2 cos(theta) + l cos(theta))
//! ```
//!
//! with `f = sqrt(1 - f1^2 - f2^2)`, `g = f2 cos(theta) - f1 sin(theta)`,
//! `h = sqrt(1 - g^2)`. A trajectory of this field generates a hypersurface
//! of constant mean curvature `H` via
//! `phi(y, z, t) = (f y, f2 z, f1)`.

use crate::family::FamilyParams;
use crate::ivp::{DomainGuard, OdeSystem};

/// Guard threshold on `f2` and `f^2`: below this the trajectory has left
/// the admissible open set.
pub const EPS_DOM: f64 = 1e-12;

/// State of the profile curve: position `(f1, f2)` plus tangent angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileState {
    pub f1: f64,
    pub f2: f64,
    pub theta: f64,
}

impl ProfileState {
    pub fn new(f1: f64, f2: f64, theta: f64) -> Self {
        Self { f1, f2, theta }
    }

    /// Initial condition `f1(0) = 0, f2(0) = a, theta(0) = 0`.
    pub fn start(a: f64) -> Self {
        Self::new(0.0, a, 0.0)
    }

    /// `f^2 = 1 - f1^2 - f2^2`.
    pub fn f_sq(&self) -> f64 {
        1.0 - self.f1 * self.f1 - self.f2 * self.f2
    }

    /// Radius of the first sphere factor, `f = sqrt(1 - f1^2 - f2^2)`.
    pub fn f(&self) -> f64 {
        self.f_sq().sqrt()
    }

    /// `g = f2 cos(theta) - f1 sin(theta)`.
    pub fn g(&self) -> f64 {
        self.f2 * self.theta.cos() - self.f1 * self.theta.sin()
    }

    /// `h = sqrt(1 - g^2)`.
    pub fn h(&self) -> f64 {
        (1.0 - self.g() * self.g()).sqrt()
    }

    pub fn guard(&self) -> Result<(), DomainGuard> {
        if self.f2 <= EPS_DOM {
            return Err(DomainGuard::RadiusCollapse);
        }
        if self.f_sq() <= EPS_DOM {
            return Err(DomainGuard::SphereBoundary);
        }
        Ok(())
    }

    pub fn admissible(&self) -> bool {
        self.guard().is_ok()
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.f1, self.f2, self.theta]
    }

    pub fn from_array(y: &[f64; 3]) -> Self {
        Self::new(y[0], y[1], y[2])
    }
}

/// Turning rate `K` of the profile tangent.
pub fn turning_rate(
    state: &ProfileState,
    params: FamilyParams,
    h_mean: f64,
) -> Result<f64, DomainGuard> {
    state.guard()?;
    let n = params.n() as f64;
    let l = params.l() as f64;
    let (s, c) = state.theta.sin_cos();
    let f_sq = state.f_sq();
    let g = state.f2 * c - state.f1 * s;
    let h2 = 1.0 - g * g;
    let h = h2.sqrt();
    let a = h2 / (state.f2 * f_sq);
    let b = n * state.f1 * state.f2 * s + n * h_mean * state.f2 * h - n * state.f2 * state.f2 * c
        + l * c;
    Ok(a * b)
}

/// Partial derivatives of the turning rate `K` with respect to the state
/// variables and the mean curvature, evaluated analytically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TurningRatePartials {
    pub value: f64,
    pub wrt_f1: f64,
    pub wrt_f2: f64,
    pub wrt_theta: f64,
    pub wrt_h_mean: f64,
}

pub fn turning_rate_partials(
    state: &ProfileState,
    params: FamilyParams,
    h_mean: f64,
) -> Result<TurningRatePartials, DomainGuard> {
    state.guard()?;
    let n = params.n() as f64;
    let l = params.l() as f64;
    let f1 = state.f1;
    let f2 = state.f2;
    let (s, c) = state.theta.sin_cos();
    let f_sq = 1.0 - f1 * f1 - f2 * f2;
    let g = f2 * c - f1 * s;
    let h2 = 1.0 - g * g;
    let h = h2.sqrt();

    let a = h2 / (f2 * f_sq);
    let b = n * f1 * f2 * s + n * h_mean * f2 * h - n * f2 * f2 * c + l * c;

    // g_x and h_x = -(g/h) g_x.
    let g_theta = -f2 * s - f1 * c;
    let h_f1 = (g / h) * s;
    let h_f2 = -(g / h) * c;
    let h_theta = -(g / h) * g_theta;

    // A = h^2 / (f2 f^2), differentiated logarithmically.
    let a_f1 = a * (2.0 * g * s / h2 + 2.0 * f1 / f_sq);
    let a_f2 = a * (-2.0 * g * c / h2 - 1.0 / f2 + 2.0 * f2 / f_sq);
    let a_theta = a * (2.0 * g * (f2 * s + f1 * c) / h2);

    let b_f1 = n * f2 * s + n * h_mean * f2 * h_f1;
    let b_f2 = n * f1 * s + n * h_mean * (h + f2 * h_f2) - 2.0 * n * f2 * c;
    let b_theta = n * f1 * f2 * c + n * h_mean * f2 * h_theta + n * f2 * f2 * s - l * s;
    let b_h_mean = n * f2 * h;

    Ok(TurningRatePartials {
        value: a * b,
        wrt_f1: a_f1 * b + a * b_f1,
        wrt_f2: a_f2 * b + a * b_f2,
        wrt_theta: a_theta * b + a * b_theta,
        wrt_h_mean: a * b_h_mean,
    })
}

/// The base 3-dimensional system `(f1, f2, theta)`.
#[derive(Debug, Clone, Copy)]
pub struct ProfileSystem {
    pub params: FamilyParams,
    pub h_mean: f64,
}

impl OdeSystem<3> for ProfileSystem {
    fn eval(&self, y: &[f64; 3]) -> Result<[f64; 3], DomainGuard> {
        let state = ProfileState::from_array(y);
        let k = turning_rate(&state, self.params, self.h_mean)?;
        let (s, c) = state.theta.sin_cos();
        Ok([c, s, k])
    }
}

/// Which parameter a sensitivity block differentiates against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SensitivityTag {
    /// Derivatives with respect to the seed radius `a = f2(0)`;
    /// initial block `(0, 1, 0)`.
    SeedRadius,
    /// Derivatives with respect to the prescribed mean curvature `H`;
    /// initial block `(0, 0, 0)`. The forcing term `dK/dH` enters the
    /// third equation because `H` appears explicitly in `K`.
    MeanCurvature,
}

impl SensitivityTag {
    pub fn initial_block(self) -> [f64; 3] {
        match self {
            SensitivityTag::SeedRadius => [0.0, 1.0, 0.0],
            SensitivityTag::MeanCurvature => [0.0, 0.0, 0.0],
        }
    }
}

/// Base system augmented with one sensitivity block
/// `(f1, f2, theta, s_f1, s_f2, s_theta)`.
#[derive(Debug, Clone, Copy)]
pub struct SensitivitySystem {
    pub params: FamilyParams,
    pub h_mean: f64,
    pub tag: SensitivityTag,
}

impl SensitivitySystem {
    pub fn initial(&self, a: f64) -> [f64; 6] {
        let b = self.tag.initial_block();
        [0.0, a, 0.0, b[0], b[1], b[2]]
    }
}

impl OdeSystem<6> for SensitivitySystem {
    fn eval(&self, y: &[f64; 6]) -> Result<[f64; 6], DomainGuard> {
        let state = ProfileState::new(y[0], y[1], y[2]);
        let kp = turning_rate_partials(&state, self.params, self.h_mean)?;
        let (s, c) = state.theta.sin_cos();
        let forcing = match self.tag {
            SensitivityTag::SeedRadius => 0.0,
            SensitivityTag::MeanCurvature => kp.wrt_h_mean,
        };
        let ds_theta = kp.wrt_f1 * y[3] + kp.wrt_f2 * y[4] + kp.wrt_theta * y[5] + forcing;
        Ok([c, s, kp.value, -y[5] * s, y[5] * c, ds_theta])
    }
}

/// Base system augmented with both sensitivity blocks in one pass:
/// `(f1, f2, theta, a-block, H-block)`. One evaluation of the `K` partials
/// serves both blocks.
#[derive(Debug, Clone, Copy)]
pub struct DualSensitivitySystem {
    pub params: FamilyParams,
    pub h_mean: f64,
}

impl DualSensitivitySystem {
    pub fn initial(&self, a: f64) -> [f64; 9] {
        [0.0, a, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0]
    }
}

impl OdeSystem<9> for DualSensitivitySystem {
    fn eval(&self, y: &[f64; 9]) -> Result<[f64; 9], DomainGuard> {
        let state = ProfileState::new(y[0], y[1], y[2]);
        let kp = turning_rate_partials(&state, self.params, self.h_mean)?;
        let (s, c) = state.theta.sin_cos();
        let da_theta = kp.wrt_f1 * y[3] + kp.wrt_f2 * y[4] + kp.wrt_theta * y[5];
        let dh_theta = kp.wrt_f1 * y[6] + kp.wrt_f2 * y[7] + kp.wrt_theta * y[8] + kp.wrt_h_mean;
        Ok([
            c,
            s,
            kp.value,
            -y[5] * s,
            y[5] * c,
            da_theta,
            -y[8] * s,
            y[8] * c,
            dh_theta,
        ])
    }
}

/// Pointwise curvature data along a trajectory, including the mean
/// curvature reconstructed from the second-fundamental-form identity
/// `n H = (n g + kappa1 + l kappa2)/h - kappa1 (f f')^2 / h^3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureDiagnostics {
    pub kappa1: f64,
    pub kappa2: f64,
    pub g: f64,
    pub h: f64,
    pub f: f64,
    pub h_reconstructed: f64,
}

pub fn diagnostics(
    state: &ProfileState,
    params: FamilyParams,
    h_mean: f64,
) -> Result<CurvatureDiagnostics, DomainGuard> {
    let n = params.n() as f64;
    let l = params.l() as f64;
    let kappa1 = turning_rate(state, params, h_mean)?;
    let (s, c) = state.theta.sin_cos();
    let kappa2 = -c / state.f2;
    let g = state.g();
    let h = state.h();
    let f = state.f();
    // f f' = -(f1 cos(theta) + f2 sin(theta)).
    let ffp = -(state.f1 * c + state.f2 * s);
    let h_reconstructed =
        ((n * g + kappa1 + l * kappa2) / h - kappa1 * ffp * ffp / (h * h * h)) / n;
    Ok(CurvatureDiagnostics {
        kappa1,
        kappa2,
        g,
        h,
        f,
        h_reconstructed,
    })
}

/// One trajectory sample together with its recorded turning rate
/// `theta' = K` as produced along the flow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatedSample {
    pub state: ProfileState,
    pub theta_rate: f64,
}

impl RatedSample {
    /// Samples a trajectory state, recording the flow rate at that state.
    pub fn on_flow(
        state: ProfileState,
        params: FamilyParams,
        h_mean: f64,
    ) -> Result<Self, DomainGuard> {
        let theta_rate = turning_rate(&state, params, h_mean)?;
        Ok(Self { state, theta_rate })
    }
}

/// Maximum deviation of the reconstructed mean curvature from the
/// prescribed one over trajectory samples.
///
/// `kappa1` is the recorded turning rate of each sample, so the identity
/// is exact (up to integration error) for genuine flow samples, while a
/// state series that is inconsistent with its recorded rates — a curve
/// that does not actually solve the flow — fails it.
pub fn curvature_residual(
    samples: &[RatedSample],
    params: FamilyParams,
    h_mean: f64,
) -> Result<f64, DomainGuard> {
    let n = params.n() as f64;
    let l = params.l() as f64;
    let mut worst = 0.0f64;
    for sample in samples {
        let state = &sample.state;
        state.guard()?;
        let kappa1 = sample.theta_rate;
        let (s, c) = state.theta.sin_cos();
        let kappa2 = -c / state.f2;
        let g = state.g();
        let h = state.h();
        let ffp = -(state.f1 * c + state.f2 * s);
        let h_rec = ((n * g + kappa1 + l * kappa2) / h - kappa1 * ffp * ffp / (h * h * h)) / n;
        worst = worst.max((h_rec - h_mean).abs());
    }
    Ok(worst)
}

/// Unit normal (Gauss map) at a point of the immersion:
/// `xi = h^{-1} (-g f y, (-g f2 + f1') z, -g f1 - f2')`,
/// for unit vectors `y` in `R^{k+1}` and `z` in `R^{l+1}`.
pub fn gauss_map(state: &ProfileState, y: &[f64], z: &[f64]) -> Result<Vec<f64>, DomainGuard> {
    state.guard()?;
    let h = state.h();
    if h <= EPS_DOM {
        return Err(DomainGuard::GaussDegenerate);
    }
    let g = state.g();
    let f = state.f();
    let (s, c) = state.theta.sin_cos();
    let inv_h = 1.0 / h;
    let mut xi = Vec::with_capacity(y.len() + z.len() + 1);
    for &yi in y {
        xi.push(inv_h * (-g * f) * yi);
    }
    for &zi in z {
        xi.push(inv_h * (-g * state.f2 + c) * zi);
    }
    xi.push(inv_h * (-g * state.f1 - s));
    Ok(xi)
}
