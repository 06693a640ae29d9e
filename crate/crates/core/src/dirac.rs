//! Magnetic Dirac modes on the groups `H_{C0}` (`C0 = ±1`) built from
//! upstairs vortex configurations, and their transport to `ℝ³` through the
//! maps `H` and `G`.
//!
//! A configuration `(Φ, A)` gives the spinor `Ψ = (Φ, 0)` with the shifted
//! connection `A' = A + ¾σ⁰`. The Dirac equation reduces to two component
//! equations along `X₀` and `X₊`; the curvature condition is checked on its
//! `σ¹∧σ²` component, the only one that survives for vortex configurations.

use nalgebra::{Matrix2, Matrix3};

use crate::error::{Error, Result};
use crate::jets::group::{BiJet1, BiJet2, Tangent};
use crate::jets::{c, C64, I};
use crate::lift::{maurer_cartan, GroupElement, GroupPoint, Lift, VortexConfiguration, XField};

/// Shift of the fibre component of the connection.
pub const FIBRE_SHIFT: f64 = 0.75;

/// `X f` at `g` for a function given through its jets.
pub fn xfields_apply<F>(which: XField, field: F, g: &GroupPoint) -> C64
where
    F: Fn(&[C64; 4]) -> BiJet2,
{
    let coords = g.coords();
    which.linear(g.c).apply(&field(&coords), &coords).v
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Spinor {
    pub up: C64,
    pub down: C64,
}

impl Spinor {
    pub fn new(up: C64, down: C64) -> Self {
        Self { up, down }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.up.norm_sqr() + self.down.norm_sqr()
    }
}

/// `Ψ = (Φ, 0)` with `A' = A + ¾σ⁰`, at one group point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MagneticMode {
    pub config: VortexConfiguration,
    /// `Φ`, the principal `n`-th root of `Φⁿ`, with first-order jets.
    pub phi: BiJet1,
    /// `A'` on `X₀, X₊, X₋`.
    pub a_prime: [C64; 3],
}

/// Components of `F_{A'} = -(C₂ₙ/(C₀n)) 4i|Ψ|²ⁿ⁻² ⋆Ψ†h⁻¹dhΨ + (C₀/4n) σ¹∧σ²`
/// along `σ¹∧σ²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureIdentity {
    /// `F_{A'}`
    pub lhs: C64,
    /// The star term.
    pub star: C64,
    /// `C₀/(4n)`
    pub constant: f64,
}

impl CurvatureIdentity {
    pub fn residual(&self) -> C64 {
        self.residual_with_star_scale(1.0)
    }

    /// Residual with the star term multiplied by `s`, for sensitivity checks.
    pub fn residual_with_star_scale(&self, s: f64) -> C64 {
        self.lhs - self.star * s - self.constant
    }
}

pub fn vortex_magnetic_mode(config: &VortexConfiguration) -> Result<MagneticMode> {
    if config.source_curvature() == 0 {
        return Err(Error::InvalidConfiguration(
            "magnetic modes need a curved source group (C0 != 0)".into(),
        ));
    }
    let phi = config.phi_n.powf(config.n.recip())?;
    let a_prime = [
        config.a(XField::X0) + FIBRE_SHIFT,
        config.a(XField::Plus),
        config.a(XField::Minus),
    ];
    Ok(MagneticMode {
        config: *config,
        phi,
        a_prime,
    })
}

impl MagneticMode {
    pub fn spinor(&self) -> Spinor {
        Spinor::new(self.phi.v, C64::default())
    }

    fn point(&self) -> &GroupPoint {
        &self.config.point
    }

    /// `(X₀Φ + iA'₀Φ - (3i/4)Φ, X₊Φ + iA'₊Φ)`.
    pub fn dirac_residual(&self) -> (C64, C64) {
        let phi = self.phi.v;
        let x0 = self.config.derive(XField::X0, &self.phi);
        let xp = self.config.derive(XField::Plus, &self.phi);
        (
            x0 + I * self.a_prime[0] * phi - I * FIBRE_SHIFT * phi,
            xp + I * self.a_prime[1] * phi,
        )
    }

    /// `Ψ†h⁻¹dhΨ` on a tangent vector, from the matrix form of the group.
    pub fn maurer_cartan_bilinear(&self, t: &Tangent) -> Result<C64> {
        let g = self.point();
        let h = g.element().m;
        // Differentiating [[z₁, -Cz̄₂], [z₂, z̄₁]]; the conjugate entries take
        // the dz̄ slots, so complexified tangents are handled too.
        let dh = Matrix2::new(t.d[0], -(g.c as f64) * t.d[3], t.d[1], t.d[2]);
        let inv = h.try_inverse().ok_or(Error::SingularPoint("group inverse"))?;
        let m = inv * dh;
        let psi = self.spinor();
        Ok(psi.up.conj() * (m[(0, 0)] * psi.up + m[(0, 1)] * psi.down)
            + psi.down.conj() * (m[(1, 0)] * psi.up + m[(1, 1)] * psi.down))
    }

    /// Both sides of the curvature condition along `σ¹∧σ²`.
    pub fn curvature_identity(&self) -> Result<CurvatureIdentity> {
        let cfg = &self.config;
        let g = self.point();
        let c0 = g.c as f64;
        let c2n = cfg.c2n as f64;
        let n = cfg.n;
        let coords = g.coords();

        // dA'(X₊, X₋) = X₊A'₋ - X₋A'₊ - A'([X₊, X₋]), with A'₀ carrying the
        // constant shift, and σ¹∧σ²(X₊, X₋) = -2i.
        let da = cfg.derive(XField::Plus, &cfg.n_a[2]) / n - cfg.derive(XField::Minus, &cfg.n_a[1]) / n
            + 2.0 * I * c0 * self.a_prime[0];
        let lhs = da / (-2.0 * I);

        // Ψ†h⁻¹dhΨ is a multiple of σ⁰; read the coefficient off X₀.
        let x0 = XField::X0.linear(g.c).at(&coords);
        let mc0 = maurer_cartan(g, &x0)?.sigma0;
        let bilinear = self.maurer_cartan_bilinear(&x0)? / mc0;
        let star_sigma0 = hodge_star_sigma0(c0);
        let weight = self.spinor().norm_sqr().powf(n - 1.0);
        let star = -(c2n / (c0 * n)) * 4.0 * I * weight * bilinear * star_sigma0;
        Ok(CurvatureIdentity {
            lhs,
            star,
            constant: c0 / (4.0 * n),
        })
    }
}

/// Coefficient of `σ¹∧σ²` in `⋆σ⁰` for the metric
/// `¼((1/C₀)(σ⁰)² + (σ¹)² + (σ²)²)`, oriented by `σ⁰∧σ¹∧σ²`.
pub fn hodge_star_sigma0(c0: f64) -> f64 {
    let g = Matrix3::from_diagonal(&nalgebra::Vector3::new(0.25 / c0, 0.25, 0.25));
    let vol = g.determinant().abs().sqrt();
    let ginv = g.try_inverse().expect("diagonal metric");
    // ⋆σ⁰ = √|g| g^{0a} ε_{a12} σ¹∧σ²
    vol * ginv[(0, 0)]
}

/// A point of the Lie algebra with the metric `(1/C₀)(dx⁰)² + (dx¹)² + (dx²)²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct R3Point {
    pub x: [f64; 3],
    pub c0: i8,
}

impl R3Point {
    pub fn new(x: [f64; 3], c0: i8) -> Result<Self> {
        if c0 != 1 && c0 != -1 {
            return Err(Error::InvalidConfiguration(format!("C0 must be +1 or -1, got {c0}")));
        }
        if !x.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("R3Point"));
        }
        Ok(Self { x, c0 })
    }

    /// `C₀r² = (x⁰)² + C₀((x¹)² + (x²)²)`, with `r² = C₀(x⁰)² + (x¹)² + (x²)²`.
    pub fn c0_r2(&self) -> f64 {
        let [x0, x1, x2] = self.x;
        x0 * x0 + self.c0 as f64 * (x1 * x1 + x2 * x2)
    }

    pub fn in_region(&self) -> bool {
        self.c0_r2() > -1.0
    }

    fn checked_q(&self) -> Result<f64> {
        let q = self.c0_r2();
        if q + 1.0 <= 1e-12 {
            Err(Error::OutsideRegion)
        } else {
            Ok(q)
        }
    }

    /// `x·t` in the two-dimensional representation.
    pub fn algebra_matrix(&self) -> Matrix2<C64> {
        let [x0, x1, x2] = self.x;
        let cc = self.c0 as f64;
        let t0 = Matrix2::new(c(0.0, -0.5), C64::default(), C64::default(), c(0.0, 0.5));
        let t1 = Matrix2::new(C64::default(), c(0.0, -0.5 * cc), c(0.0, -0.5), C64::default());
        let t2 = Matrix2::new(C64::default(), c(-0.5 * cc, 0.0), c(0.5, 0.0), C64::default());
        t0 * C64::from(x0) + t1 * C64::from(x1) + t2 * C64::from(x2)
    }
}

/// Inverse stereographic map `H: ℝ³ → H_{C₀}`.
pub fn h_map(x: &R3Point) -> Result<GroupElement> {
    let q = x.checked_q()?;
    let [x0, x1, x2] = x.x;
    let k = 1.0 / (1.0 + q);
    let z1 = c(1.0 - q, 2.0 * x0) * k;
    let z2 = I * 2.0 * c(x1, x2) * k;
    Ok(GroupElement::from_point(&GroupPoint { z1, z2, c: x.c0 }))
}

/// Inverse gnomonic map `G(x) = (𝕀 - 2x·t)/√(1 + C₀r²)`.
pub fn g_map(x: &R3Point) -> Result<GroupElement> {
    let q = x.checked_q()?;
    let m = (Matrix2::identity() - x.algebra_matrix() * C64::from(2.0)) / C64::from((1.0 + q).sqrt());
    Ok(GroupElement { m, c: x.c0 })
}

/// `∂H/∂xⁱ` applied to the first column, as a real tangent at `H(x)`.
pub fn h_tangent(x: &R3Point, i: usize) -> Result<Tangent> {
    let q = x.checked_q()?;
    let [x0, x1, x2] = x.x;
    let cc = x.c0 as f64;
    let dq = [2.0 * x0, 2.0 * cc * x1, 2.0 * cc * x2][i];
    let den = (1.0 + q) * (1.0 + q);
    let delta = |j: usize| if i == j { 1.0 } else { 0.0 };
    let dz1 = (c(0.0, 2.0 * delta(0)) * (1.0 + q) - c(2.0, 2.0 * x0) * dq) / den;
    let dz2 = (I * 2.0 * c(delta(1), delta(2)) * (1.0 + q) - I * 2.0 * c(x1, x2) * dq) / den;
    Ok(Tangent::real(dz1, dz2))
}

/// A mode transported to `ℝ³`: `Ψ_H = Ω⁻¹ G (Φ∘H, 0)` and `H*A'` on
/// `∂₀, ∂₁, ∂₂`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct R3Mode {
    pub psi: Spinor,
    pub potential: [f64; 3],
}

/// `A'` on a tangent at the mode's point.
pub fn shifted_potential_on(mode: &MagneticMode, t: &Tangent) -> Result<C64> {
    let [v0, vp, vm] = maurer_cartan(&mode.config.point, t)?.frame_components();
    Ok(mode.a_prime[0] * v0 + mode.a_prime[1] * vp + mode.a_prime[2] * vm)
}

/// Transport the magnetic mode of a lifted solution to `x`. `omega` is the
/// conformal factor relating the two Dirac operators, supplied by the caller.
pub fn pullback_mode<W>(lift: &Lift, x: &R3Point, omega: W) -> Result<R3Mode>
where
    W: Fn(&R3Point) -> f64,
{
    let h = h_map(x)?.point();
    let mode = vortex_magnetic_mode(&lift.configuration(&h)?)?;
    let g = g_map(x)?.m;
    let psi = mode.spinor();
    let scale = C64::from(omega(x).recip());
    let up = (g[(0, 0)] * psi.up + g[(0, 1)] * psi.down) * scale;
    let down = (g[(1, 0)] * psi.up + g[(1, 1)] * psi.down) * scale;
    let mut potential = [0.0; 3];
    for (i, slot) in potential.iter_mut().enumerate() {
        *slot = shifted_potential_on(&mode, &h_tangent(x, i)?)?.re;
    }
    Ok(R3Mode {
        psi: Spinor::new(up, down),
        potential,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::GeometryMode;
    use crate::jets::CPoint;
    use crate::lift::section;
    use crate::rational::{Poly, RationalMap};
    use crate::vortex::{VortexFamily, VortexSolution};

    fn lift(c0: i32, c2n: i32, n: f64, f2: &[f64]) -> Lift {
        let fam = VortexFamily::new(c0, c2n, n, GeometryMode::Fixed).unwrap();
        let sol = VortexSolution::new(fam, RationalMap::polynomial(Poly::from_real(f2)).unwrap()).unwrap();
        Lift::new(&sol).unwrap()
    }

    fn point(c0: i8) -> GroupPoint {
        section(c0, CPoint::new(c(0.3, -0.2)).unwrap()).unwrap().rotate(0.9)
    }

    #[test]
    fn x_fields_on_coordinates() {
        let g = point(1);
        let z1 = |x: &[C64; 4]| BiJet2::variable(x, 0);
        assert!((xfields_apply(XField::X0, z1, &g) - c(0.0, -0.5) * g.z1).norm() < 1e-15);
        let one = |_: &[C64; 4]| BiJet2::constant(1.0.into());
        assert_eq!(xfields_apply(XField::Minus, one, &g), C64::default());
    }

    #[test]
    fn trivial_mode() {
        let l = lift(1, 1, 1.0, &[0.0, 1.0]);
        let mode = vortex_magnetic_mode(&l.configuration(&point(1)).unwrap()).unwrap();
        assert!((mode.spinor().up - 1.0).norm() < 1e-14);
        assert!((mode.a_prime[0] - FIBRE_SHIFT).norm() < 1e-14);
        let (r0, rp) = mode.dirac_residual();
        assert!(r0.norm() < 1e-14 && rp.norm() < 1e-14);
        assert!(mode.curvature_identity().unwrap().residual().norm() < 1e-14);
    }

    #[test]
    fn popov_mode_at_n1() {
        for (c0, c2n) in [(1, 1), (-1, -1)] {
            let l = lift(c0, c2n, 1.0, &[0.0, 0.0, 0.5]);
            let mode = vortex_magnetic_mode(&l.configuration(&point(c0 as i8)).unwrap()).unwrap();
            let (r0, rp) = mode.dirac_residual();
            assert!(r0.norm() < 1e-12 && rp.norm() < 1e-12);
            let id = mode.curvature_identity().unwrap();
            assert!(id.residual().norm() < 1e-12, "{id:?}");
            let moved = id.residual_with_star_scale(1.0 + 1e-3).norm();
            assert!(moved > 1e-3 * id.star.norm() * 0.5);
        }
    }

    #[test]
    fn missing_shift_is_detected() {
        let l = lift(1, 1, 2.0, &[0.0, 0.0, 1.0]);
        let mut mode = vortex_magnetic_mode(&l.configuration(&point(1)).unwrap()).unwrap();
        mode.a_prime[0] -= FIBRE_SHIFT;
        let (r0, _) = mode.dirac_residual();
        assert!((r0.norm() - FIBRE_SHIFT * mode.phi.v.norm()).abs() < 1e-12);
    }

    #[test]
    fn flat_source_is_rejected() {
        let l = lift(0, 1, 1.0, &[0.0, 0.0, 1.0]);
        let g = GroupPoint::new(C64::from_polar(1.0, 0.2), c(0.3, 0.1), 0).unwrap();
        assert!(matches!(
            vortex_magnetic_mode(&l.configuration(&g).unwrap()),
            Err(Error::InvalidConfiguration(_))
        ));
    }

    #[test]
    fn h_is_g_squared() {
        for (x, c0) in [([0.3, -0.5, 0.8], 1), ([0.4, 0.3, -0.2], -1), ([1.5, 0.9, 1.1], -1)] {
            let p = R3Point::new(x, c0).unwrap();
            let h = h_map(&p).unwrap();
            let g = g_map(&p).unwrap();
            assert!((h.m - g.m * g.m).iter().all(|d| d.norm() < 1e-12));
            assert!((g.determinant() - 1.0).norm() < 1e-12);
            assert!(h.point().constraint_defect() < 1e-12);
        }
        let origin = R3Point::new([0.0; 3], 1).unwrap();
        assert!((h_map(&origin).unwrap().m - Matrix2::identity())
            .iter()
            .all(|d| d.norm() == 0.0));
        let edge = R3Point::new([1.0, 1.0, 1.0], -1).unwrap();
        assert!(matches!(h_map(&edge), Err(Error::OutsideRegion)));
    }

    #[test]
    fn pulled_back_potential_matches_differences() {
        let l = lift(1, 1, 1.0, &[0.0, 0.0, 1.0]);
        let x = R3Point::new([0.2, 0.4, -0.3], 1).unwrap();
        let m = pullback_mode(&l, &x, |_| 1.0).unwrap();
        let h = 1e-6;
        let mode = vortex_magnetic_mode(&l.configuration(&h_map(&x).unwrap().point()).unwrap()).unwrap();
        for i in 0..3 {
            let shift = |s: f64| {
                let mut y = x.x;
                y[i] += s;
                h_map(&R3Point::new(y, 1).unwrap()).unwrap().point()
            };
            let (p, q) = (shift(h), shift(-h));
            let t = Tangent::real((p.z1 - q.z1) / (2.0 * h), (p.z2 - q.z2) / (2.0 * h));
            let fd = shifted_potential_on(&mode, &t).unwrap().re;
            assert!((fd - m.potential[i]).abs() < 1e-6, "{i}: {fd} vs {}", m.potential[i]);
        }
    }
}
