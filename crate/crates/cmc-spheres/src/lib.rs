//! Numerical construction of one-parameter families of embedded constant
//! mean curvature hypersurfaces `S^k x S^l x S^1 -> S^{n+1}`, `n = k + l + 1`.
//!
//! The pipeline: the profile-curve ODE ([`profile`]) is integrated with an
//! adaptive embedded Runge-Kutta pair ([`ivp`]); the half-period boundary
//! value problem `f1(T) = 0`, `theta(T) = pi` is solved by shooting
//! ([`shooting`]); the solution curve in `(a, H, T)`-space is traced by
//! tangent predictor / Newton corrector continuation ([`continuation`]);
//! full profile curves, embeddedness verdicts and hypersurface volumes are
//! produced by [`geometry`], including the comparison against minimal
//! Clifford hypersurfaces ([`family`]).

pub mod cli;
pub mod continuation;
pub mod family;
pub mod geometry;
pub mod ivp;
pub mod profile;
pub mod shooting;

pub(crate) mod vec3;
