//! Reproducibility manifest embedded in every JSON output file.

use serde::Serialize;

use crate::family::FamilyParams;

#[derive(Debug, Clone, Serialize)]
pub struct FamilyInfo {
    pub k: u32,
    pub l: u32,
    pub n: u32,
}

impl From<FamilyParams> for FamilyInfo {
    fn from(p: FamilyParams) -> Self {
        Self {
            k: p.k(),
            l: p.l(),
            n: p.n(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ToleranceInfo {
    pub ode_rel: f64,
    pub ode_abs: f64,
    pub newton: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    /// The invoked command line, verbatim.
    pub command: String,
    pub tool: &'static str,
    pub version: &'static str,
    pub family: Option<FamilyInfo>,
    pub tolerances: ToleranceInfo,
    /// Command-specific seed data (guesses, scan ranges, sample counts).
    pub seed: serde_json::Value,
    pub wall_time_s: f64,
    /// Files written by this run.
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(
        command: String,
        family: Option<FamilyParams>,
        tol_ode: f64,
        tol_newton: f64,
        seed: serde_json::Value,
    ) -> Self {
        Self {
            command,
            tool: "cmc-spheres",
            version: env!("CARGO_PKG_VERSION"),
            family: family.map(FamilyInfo::from),
            tolerances: ToleranceInfo {
                ode_rel: tol_ode,
                ode_abs: tol_ode,
                newton: tol_newton,
            },
            seed,
            wall_time_s: 0.0,
            outputs: Vec::new(),
        }
    }
}
