//! Family parameters and the two closed-form reference families (totally
//! umbilical spheres and Clifford products) used for comparison and
//! validation.

use std::f64::consts::TAU;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FamilyError {
    #[error("sphere factor dimensions must be positive (k = {k}, l = {l})")]
    NonPositiveFactor { k: i64, l: i64 },
    #[error("second factor dimension l = {l} must satisfy 1 <= l <= n - 2 for n = {n}")]
    FactorOutOfRange { n: i64, l: i64 },
    #[error("Clifford factor l = {l} must satisfy 1 <= l <= n - 1 for n = {n}")]
    CliffordFactorOutOfRange { n: i64, l: i64 },
    #[error("radius r = {r} must lie in the open interval (0, 1)")]
    RadiusOutOfRange { r: f64 },
}

/// Integer data `(k, l)` selecting a hypersurface family
/// `S^k x S^l x S^1 -> S^{n+1}` with `n = k + l + 1`.
///
/// The ambient-indexed constructor [`FamilyParams::from_ambient`] accepts
/// `(n, l)` and recovers `k = n - l - 1`; both constructors agree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FamilyParams {
    k: u32,
    l: u32,
}

impl FamilyParams {
    pub fn from_factors(k: u32, l: u32) -> Result<Self, FamilyError> {
        if k < 1 || l < 1 {
            return Err(FamilyError::NonPositiveFactor {
                k: k as i64,
                l: l as i64,
            });
        }
        Ok(Self { k, l })
    }

    pub fn from_ambient(n: u32, l: u32) -> Result<Self, FamilyError> {
        if l < 1 || l + 2 > n {
            return Err(FamilyError::FactorOutOfRange {
                n: n as i64,
                l: l as i64,
            });
        }
        Self::from_factors(n - l - 1, l)
    }

    /// Dimension of the first sphere factor.
    pub fn k(&self) -> u32 {
        self.k
    }

    /// Dimension of the second sphere factor.
    pub fn l(&self) -> u32 {
        self.l
    }

    /// Hypersurface dimension `n = k + l + 1`.
    pub fn n(&self) -> u32 {
        self.k + self.l + 1
    }
}

/// Volume of the unit `m`-sphere, via the recurrence
/// `sigma_0 = 2`, `sigma_1 = 2 pi`, `sigma_m = 2 pi sigma_{m-2} / (m - 1)`.
pub fn sphere_volume(m: u32) -> f64 {
    let mut even = 2.0; // sigma_0
    let mut odd = TAU; // sigma_1
    for j in 2..=m.max(1) {
        if j % 2 == 0 {
            even = TAU * even / (j - 1) as f64;
        } else {
            odd = TAU * odd / (j - 1) as f64;
        }
    }
    if m.is_multiple_of(2) {
        even
    } else {
        odd
    }
}

/// Volume of the minimal Clifford hypersurface
/// `S^{n-l}(sqrt((n-l)/n)) x S^l(sqrt(l/n))` in `S^{n+1}`:
///
/// `VolC(n, l) = ((n-l)/n)^{(n-l)/2} sigma_{n-l} (l/n)^{l/2} sigma_l`.
pub fn clifford_volume(n: u32, l: u32) -> Result<f64, FamilyError> {
    if l < 1 || l + 1 > n {
        return Err(FamilyError::CliffordFactorOutOfRange {
            n: n as i64,
            l: l as i64,
        });
    }
    let nf = n as f64;
    let kf = (n - l) as f64;
    let lf = l as f64;
    Ok((kf / nf).powf(kf / 2.0)
        * sphere_volume(n - l)
        * (lf / nf).powf(lf / 2.0)
        * sphere_volume(l))
}

/// Mean curvature of the Clifford product `S^k(r) x S^l(sqrt(1-r^2))` in
/// `S^{k+l+1}`, with respect to the Gauss map
/// `nu = (-sqrt(1-r^2) y, r z)`:
///
/// `(k + l) H = k sqrt(1-r^2)/r - l r/sqrt(1-r^2)`.
pub fn clifford_mean_curvature(k: u32, l: u32, r: f64) -> Result<f64, FamilyError> {
    if !(r > 0.0 && r < 1.0) {
        return Err(FamilyError::RadiusOutOfRange { r });
    }
    let s = (1.0 - r * r).sqrt();
    Ok((k as f64 * s / r - l as f64 * r / s) / (k + l) as f64)
}

/// Mean curvature of the totally umbilical sphere `S^k(r)` in `S^{k+1}`,
/// with respect to the Gauss map `nu = (-sqrt(1-r^2) y, r)`:
/// `H = sqrt(1-r^2)/r`.
pub fn umbilical_mean_curvature(r: f64) -> Result<f64, FamilyError> {
    if !(r > 0.0 && r < 1.0) {
        return Err(FamilyError::RadiusOutOfRange { r });
    }
    Ok((1.0 - r * r).sqrt() / r)
}

/// One Clifford hypersurface `S^k(r) x S^l(sqrt(1-r^2))` with its mean
/// curvature and total volume.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CliffordDatum {
    pub r: f64,
    pub h_mean: f64,
    pub volume: f64,
}

impl CliffordDatum {
    pub fn new(k: u32, l: u32, r: f64) -> Result<Self, FamilyError> {
        let h_mean = clifford_mean_curvature(k, l, r)?;
        let volume = sphere_volume(k)
            * r.powi(k as i32)
            * sphere_volume(l)
            * (1.0 - r * r).powf(l as f64 / 2.0);
        Ok(Self { r, h_mean, volume })
    }

    /// The minimal member of the family: `r = sqrt((n-l)/n)` gives `H = 0`.
    pub fn minimal(n: u32, l: u32) -> Result<Self, FamilyError> {
        if l < 1 || l + 1 > n {
            return Err(FamilyError::CliffordFactorOutOfRange {
                n: n as i64,
                l: l as i64,
            });
        }
        let r = ((n - l) as f64 / n as f64).sqrt();
        Self::new(n - l, l, r)
    }
}
