//! Constant-curvature surfaces in a stereographic chart: co-frames, spin
//! connections, Kähler forms and the structure and Gauss equations.
//!
//! In [`GeometryMode::Fixed`] the co-frame is `2 dz / (1 + C|z|²)` and the
//! curvature is `C`. In [`GeometryMode::Normalised`] the chart coordinate is
//! `w = z/√n`, the co-frame `2 dw / (1 + nC|w|²)` and the curvature `nC`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jets::{c, exterior_d, wedge, CPoint, Jet2, OneForm, TwoFormVal, C64, I};

/// Smallest admissible conformal denominator `1 + κC|z|²`.
pub const MIN_DENOMINATOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum GeometryMode {
    #[default]
    Fixed,
    #[serde(alias = "normalized")]
    Normalised,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceSpec {
    curvature: i8,
    mode: GeometryMode,
    n: f64,
}

pub(crate) fn check_curvature_sign(c: i32) -> Result<i8> {
    if (-1..=1).contains(&c) {
        Ok(c as i8)
    } else {
        Err(Error::Config(format!("curvature sign must be -1, 0 or 1, got {c}")))
    }
}

pub(crate) fn check_n(n: f64) -> Result<f64> {
    if n.is_finite() && n > 0.0 {
        Ok(n)
    } else {
        Err(Error::Config(format!(
            "family exponent n must be finite and > 0, got {n}"
        )))
    }
}

impl SurfaceSpec {
    pub fn new(curvature: i32, mode: GeometryMode, n: f64) -> Result<Self> {
        Ok(Self {
            curvature: check_curvature_sign(curvature)?,
            mode,
            n: check_n(n)?,
        })
    }

    pub fn fixed(curvature: i32) -> Result<Self> {
        Self::new(curvature, GeometryMode::Fixed, 1.0)
    }

    pub fn curvature_sign(&self) -> i8 {
        self.curvature
    }

    pub fn mode(&self) -> GeometryMode {
        self.mode
    }

    pub fn n(&self) -> f64 {
        self.n
    }

    /// Scale factor multiplying `C|z|²` in the conformal denominator.
    pub fn kappa(&self) -> f64 {
        match self.mode {
            GeometryMode::Fixed => 1.0,
            GeometryMode::Normalised => self.n,
        }
    }

    /// Nominal Gauss curvature.
    pub fn nominal_curvature(&self) -> f64 {
        self.kappa() * self.curvature as f64
    }

    pub fn domain(&self) -> ChartDomain {
        ChartDomain {
            curvature_sign: self.curvature,
            radius_bound: if self.curvature < 0 {
                1.0 / self.kappa().sqrt()
            } else {
                f64::INFINITY
            },
        }
    }

    /// Default sampling radius: 0.9 of the disc for hyperbolic charts, 3 in
    /// fixed-mode units otherwise.
    pub fn default_sample_radius(&self) -> f64 {
        let r = if self.curvature < 0 { 0.9 } else { 3.0 };
        r / self.kappa().sqrt()
    }

    /// Jet of `1 + κC|z|²`; errors on or beyond the chart boundary.
    pub fn denominator(&self, p: CPoint) -> Result<Jet2> {
        let z = Jet2::coordinate(p);
        let den = z.modulus_squared() * (self.kappa() * self.curvature as f64) + 1.0;
        if den.v.re <= MIN_DENOMINATOR {
            return Err(Error::DomainBoundary);
        }
        Ok(den)
    }

    pub fn coframe(&self, p: CPoint) -> Result<OneForm> {
        let den = self.denominator(p)?;
        let coef = Jet2::real(2.0) / den;
        Ok(OneForm::new(coef.first_order(), Default::default()))
    }

    pub fn spin_connection(&self, p: CPoint) -> Result<OneForm> {
        let den = self.denominator(p)?;
        let z = Jet2::coordinate(p);
        let k = I * (self.kappa() * self.curvature as f64);
        let a = (z.conj() / den) * (-k);
        let b = (z / den) * k;
        Ok(OneForm::new(a.first_order(), b.first_order()))
    }

    /// `de - iΓ∧e`, which vanishes identically.
    pub fn structure_residual(&self, p: CPoint) -> Result<TwoFormVal> {
        let e = self.coframe(p)?;
        let gamma = self.spin_connection(p)?;
        let de = exterior_d(&e);
        Ok(de - wedge(&gamma.value(), &e.value()).scale(I))
    }

    /// Gauss curvature extracted from `dΓ = (i/2) K e∧ē`.
    pub fn gauss_curvature(&self, p: CPoint) -> Result<f64> {
        let gamma = self.spin_connection(p)?;
        let d_gamma = exterior_d(&gamma);
        let area = self.kahler_form(p)?;
        Ok((d_gamma.c / area.c).re)
    }

    /// `ω = (i/2) e∧ē`.
    pub fn kahler_form(&self, p: CPoint) -> Result<TwoFormVal> {
        let e = self.coframe(p)?.value();
        Ok(wedge(&e, &e.conj()).scale(c(0.0, 0.5)))
    }

    /// Map a chart point of this spec to the fixed-mode coordinate `z = √κ w`.
    pub fn to_fixed_coordinate(&self, w: C64) -> C64 {
        w * self.kappa().sqrt()
    }
}

/// Region of validity of a stereographic chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChartDomain {
    pub curvature_sign: i8,
    pub radius_bound: f64,
}

impl ChartDomain {
    pub fn contains(&self, z: C64) -> bool {
        z.norm() < self.radius_bound
    }
}

/// Points of a `resolution × resolution` uniform grid on `[-r, r]²` that lie
/// in the closed disc of radius `r`, in row-major order.
pub fn disk_grid(radius: f64, resolution: usize) -> Vec<CPoint> {
    let mut pts = Vec::with_capacity(resolution * resolution);
    if resolution < 2 {
        pts.push(CPoint::at(C64::default()));
        return pts;
    }
    let step = 2.0 * radius / (resolution - 1) as f64;
    for i in 0..resolution {
        let y = -radius + step * i as f64;
        for j in 0..resolution {
            let x = -radius + step * j as f64;
            if x * x + y * y <= radius * radius * (1.0 + 1e-12) {
                pts.push(CPoint::at(c(x, y)));
            }
        }
    }
    pts
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(re: f64, im: f64) -> CPoint {
        CPoint::at(c(re, im))
    }

    #[test]
    fn coframe_examples() {
        let s = SurfaceSpec::fixed(1).unwrap();
        assert_eq!(s.coframe(pt(0.0, 0.0)).unwrap().dz.v, c(2.0, 0.0));
        let h = SurfaceSpec::fixed(-1).unwrap();
        assert!(matches!(h.coframe(pt(1.0, 0.0)), Err(Error::DomainBoundary)));
        let nrm = SurfaceSpec::new(1, GeometryMode::Normalised, 4.0).unwrap();
        let e = nrm.coframe(pt(1.0, 0.0)).unwrap();
        assert!((e.dz.v - c(0.4, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn spin_connection_examples() {
        for cc in [-1, 0, 1] {
            let s = SurfaceSpec::fixed(cc).unwrap();
            assert_eq!(s.spin_connection(pt(0.0, 0.0)).unwrap().value().norm(), 0.0);
        }
        let s = SurfaceSpec::fixed(1).unwrap();
        let g = s.spin_connection(pt(1.0, 0.0)).unwrap().value();
        assert!((g.a - c(0.0, -0.5)).norm() < 1e-15);
        assert!((g.b - c(0.0, 0.5)).norm() < 1e-15);
        assert_eq!(g.reality_defect(), 0.0);
    }

    #[test]
    fn structure_and_gauss() {
        let flat = SurfaceSpec::fixed(0).unwrap();
        assert_eq!(flat.structure_residual(pt(1.3, -2.0)).unwrap().c, C64::default());
        assert_eq!(flat.gauss_curvature(pt(0.7, 0.1)).unwrap(), 0.0);
        let h = SurfaceSpec::fixed(-1).unwrap();
        assert!(h.structure_residual(pt(0.5, 0.2)).unwrap().norm() < 1e-10);
        let s = SurfaceSpec::fixed(1).unwrap();
        assert!((s.gauss_curvature(pt(2.0, 1.0)).unwrap() - 1.0).abs() < 1e-10);
        let n3 = SurfaceSpec::new(1, GeometryMode::Normalised, 3.0).unwrap();
        assert!((n3.gauss_curvature(pt(0.4, 0.3)).unwrap() - 3.0).abs() < 1e-10);
    }

    #[test]
    fn kahler_form_values() {
        let flat = SurfaceSpec::fixed(0).unwrap();
        assert_eq!(flat.kahler_form(pt(5.0, 1.0)).unwrap().c, c(0.0, 2.0));
        let s = SurfaceSpec::fixed(1).unwrap();
        assert_eq!(s.kahler_form(pt(0.0, 0.0)).unwrap().c, c(0.0, 2.0));
        let k = s.kahler_form(pt(0.3, 2.0)).unwrap().c;
        assert!(k.re.abs() < 1e-15 && k.im > 0.0);
    }

    #[test]
    fn invalid_specs() {
        assert!(SurfaceSpec::new(2, GeometryMode::Fixed, 1.0).is_err());
        assert!(SurfaceSpec::new(1, GeometryMode::Fixed, 0.0).is_err());
        assert!(SurfaceSpec::new(1, GeometryMode::Fixed, f64::NAN).is_err());
    }

    #[test]
    fn grid_is_symmetric_and_bounded() {
        let g = disk_grid(0.9, 64);
        assert!(g.iter().all(|p| p.z.norm() <= 0.9 + 1e-12));
        assert!(g.len() > 64 * 64 / 2);
    }
}
