//! JSON case configurations for verification campaigns.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::geometry::GeometryMode;
use crate::jets::C64;
use crate::rational::{Poly, RationalMap};
use crate::vortex::{VortexFamily, VortexSolution};

const MAX_RESOLUTION: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckKind {
    Geometry,
    Vortex,
    Flatness,
    Winding,
    Lift,
    Dirac,
}

impl CheckKind {
    pub const ALL: [CheckKind; 6] = [
        CheckKind::Geometry,
        CheckKind::Vortex,
        CheckKind::Flatness,
        CheckKind::Winding,
        CheckKind::Lift,
        CheckKind::Dirac,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Geometry => "geometry",
            CheckKind::Vortex => "vortex",
            CheckKind::Flatness => "flatness",
            CheckKind::Winding => "winding",
            CheckKind::Lift => "lift",
            CheckKind::Dirac => "dirac",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridKind {
    /// Square grid clipped to a disc around the origin of the chart.
    Disk,
    /// The unit disc of both stereographic charts of the sphere.
    TwoChartSphere,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub kind: GridKind,
    pub resolution: usize,
    /// Disc radius in chart units; defaults to the surface's sampling radius.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub analytic: f64,
    pub fibre_fd: f64,
    pub quadrature: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            analytic: 1e-9,
            fibre_fd: 1e-7,
            quadrature: 1e-3,
        }
    }
}

fn default_f1() -> Vec<C64> {
    vec![C64::new(1.0, 0.0)]
}

fn default_exclusion() -> f64 {
    crate::vortex::DEFAULT_EXCLUSION_RADIUS
}

fn default_checks() -> Vec<CheckKind> {
    CheckKind::ALL.to_vec()
}

fn default_fibre_samples() -> usize {
    4
}

/// One verification case. Coefficients are `[re, im]` pairs in ascending
/// degree; the map is `f = f₂/f₁`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseConfig {
    #[serde(default)]
    pub name: String,
    #[serde(rename = "C0")]
    pub c0: i32,
    #[serde(rename = "C2n")]
    pub c2n: i32,
    pub n: f64,
    #[serde(default)]
    pub mode: GeometryMode,
    #[serde(default = "default_f1")]
    pub f1_coeffs: Vec<C64>,
    pub f2_coeffs: Vec<C64>,
    pub grid: GridConfig,
    #[serde(default = "default_exclusion")]
    pub exclusion_radius: f64,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default = "default_checks")]
    pub checks: Vec<CheckKind>,
    /// Number of equally spaced fibre angles in `[0, 4π)` for lifted checks.
    #[serde(default = "default_fibre_samples")]
    pub fibre_samples: usize,
}

impl CaseConfig {
    /// Parse and validate.
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: CaseConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn has_check(&self, kind: CheckKind) -> bool {
        self.checks.contains(&kind)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        self.family()?;
        if self.f2_coeffs.is_empty() || self.f1_coeffs.is_empty() {
            return bad("f1_coeffs and f2_coeffs must be non-empty".into());
        }
        if !self
            .f1_coeffs
            .iter()
            .chain(&self.f2_coeffs)
            .all(|z| z.re.is_finite() && z.im.is_finite())
        {
            return bad("coefficients must be finite".into());
        }
        if !(2..=MAX_RESOLUTION).contains(&self.grid.resolution) {
            return bad(format!("grid.resolution must lie in 2..={MAX_RESOLUTION}"));
        }
        if let Some(r) = self.grid.radius {
            if !(r.is_finite() && r > 0.0) {
                return bad(format!("grid.radius must be finite and > 0, got {r}"));
            }
            let bound = self.family()?.source().domain().radius_bound;
            if self.grid.kind == GridKind::Disk && r >= bound {
                return bad(format!("grid.radius {r} reaches the chart boundary {bound}"));
            }
        }
        if self.grid.kind == GridKind::TwoChartSphere && self.c0 != 1 {
            return bad("two_chart_sphere grids need C0 = 1".into());
        }
        if !(self.exclusion_radius.is_finite() && self.exclusion_radius > 0.0) {
            return bad("exclusion_radius must be finite and > 0".into());
        }
        let t = &self.tolerances;
        if ![t.analytic, t.fibre_fd, t.quadrature]
            .iter()
            .all(|v| v.is_finite() && *v > 0.0)
        {
            return bad("tolerances must be finite and > 0".into());
        }
        if self.checks.is_empty() {
            return bad("checks must name at least one check".into());
        }
        if self.has_check(CheckKind::Dirac) && self.c0 == 0 {
            return bad("the dirac check needs C0 != 0".into());
        }
        if self.fibre_samples == 0 {
            return bad("fibre_samples must be at least 1".into());
        }
        self.map()?;
        Ok(())
    }

    pub fn family(&self) -> Result<VortexFamily> {
        VortexFamily::new(self.c0, self.c2n, self.n, self.mode).map_err(as_config)
    }

    pub fn map(&self) -> Result<RationalMap> {
        RationalMap::new(Poly::new(self.f1_coeffs.clone()), Poly::new(self.f2_coeffs.clone())).map_err(as_config)
    }

    pub fn solution(&self) -> Result<VortexSolution> {
        VortexSolution::with_exclusion_radius(self.family()?, self.map()?, self.exclusion_radius).map_err(as_config)
    }

    /// SHA-256 of the compact JSON serialisation, as lowercase hex.
    pub fn hash(&self) -> Result<String> {
        let digest = Sha256::digest(serde_json::to_vec(self)?);
        Ok(digest.iter().map(|b| format!("{b:02x}")).collect())
    }
}

fn as_config(e: Error) -> Error {
    match e {
        Error::Config(_) => e,
        other => Error::Config(other.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const POPOV: &str = r#"{
        "C0": 1, "C2n": 1, "n": 1,
        "f2_coeffs": [[0,0],[0,0],[1,0]],
        "grid": {"kind": "disk", "resolution": 16}
    }"#;

    #[test]
    fn defaults_fill_in() {
        let cfg = CaseConfig::from_json(POPOV).unwrap();
        assert_eq!(cfg.mode, GeometryMode::Fixed);
        assert_eq!(cfg.checks, CheckKind::ALL.to_vec());
        assert_eq!(cfg.f1_coeffs, vec![C64::new(1.0, 0.0)]);
        assert_eq!(cfg.tolerances, Tolerances::default());
    }

    #[test]
    fn round_trip() {
        let cfg = CaseConfig::from_json(POPOV).unwrap();
        let again = CaseConfig::from_json(&cfg.to_json().unwrap()).unwrap();
        assert_eq!(cfg, again);
        assert_eq!(cfg.hash().unwrap(), again.hash().unwrap());
    }

    #[test]
    fn rejects_invalid() {
        for patch in [
            POPOV.replace("\"n\": 1", "\"n\": 0"),
            POPOV.replace("\"C2n\": 1", "\"C2n\": -1"),
            POPOV.replace("\"C0\": 1", "\"C0\": 2"),
            POPOV.replace("\"resolution\": 16", "\"resolution\": 1"),
            POPOV.replace("\"C0\": 1, \"C2n\": 1", "\"C0\": 0, \"C2n\": 1"),
            POPOV.replace("\"n\": 1", "\"n\": 1, \"colour\": 3"),
            POPOV.replace("[[0,0],[0,0],[1,0]]", "[[2,0]]"),
        ] {
            assert!(
                matches!(CaseConfig::from_json(&patch), Err(Error::Config(_))),
                "{patch}"
            );
        }
        let flat_no_dirac = POPOV
            .replace("\"C0\": 1, \"C2n\": 1", "\"C0\": 0, \"C2n\": 1")
            .replace("\"n\": 1,", "\"n\": 1, \"checks\": [\"vortex\"],");
        assert!(CaseConfig::from_json(&flat_no_dirac).is_ok());
    }
}
