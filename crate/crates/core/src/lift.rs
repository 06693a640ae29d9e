//! Lift of vortex solutions to the three-dimensional groups
//! `H_C = {(z₁, z₂) : |z₁|² + C|z₂|² = 1}` (SU(2), the Euclidean group, or
//! SU(1,1)), viewed as circle bundles over the constant-curvature surfaces.
//!
//! Functions on the group are evaluated as [`BiJet2`]s in `(z₁, z₂, z̄₁, z̄₂)`
//! so that the left-invariant fields `X₀, X₊, X₋` act exactly.

use nalgebra::Matrix2;

use crate::cartan::{LieValue, LieValuedOneForm};
use crate::error::{Error, Result};
use crate::geometry::{SurfaceSpec, MIN_DENOMINATOR};
use crate::jets::group::{BiJet1, BiJet2, LinearField, Tangent};
use crate::jets::{c, CPoint, Jet2, OneFormVal, C64, I};
use crate::rational::RationalMap;
use crate::vortex::{GaugeConfiguration, VortexFamily, VortexSolution};

/// Tolerance on the defining quadric of a group point.
pub const CONSTRAINT_TOLERANCE: f64 = 1e-12;

/// Step for central differences along the fibre.
pub const FIBRE_STEP: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupPoint {
    pub z1: C64,
    pub z2: C64,
    pub c: i8,
}

impl GroupPoint {
    pub fn new(z1: C64, z2: C64, c: i8) -> Result<Self> {
        let g = Self { z1, z2, c };
        let defect = g.constraint_defect();
        if defect.is_nan() || defect > CONSTRAINT_TOLERANCE {
            return Err(Error::ConstraintViolation(format!("|z1|^2 + C|z2|^2 - 1 = {defect:e}")));
        }
        Ok(g)
    }

    pub fn identity(c: i8) -> Self {
        Self {
            z1: 1.0.into(),
            z2: C64::default(),
            c,
        }
    }

    pub fn constraint_defect(&self) -> f64 {
        (self.z1.norm_sqr() + self.c as f64 * self.z2.norm_sqr() - 1.0).abs()
    }

    /// Coordinates in jet slot order `[z₁, z₂, z̄₁, z̄₂]`.
    pub fn coords(&self) -> [C64; 4] {
        [self.z1, self.z2, self.z1.conj(), self.z2.conj()]
    }

    pub fn element(&self) -> GroupElement {
        GroupElement::from_point(self)
    }

    /// Right action of the fibre circle, `h ↦ h·m(θ)`.
    pub fn rotate(&self, theta: f64) -> Self {
        let ph = C64::from_polar(1.0, -0.5 * theta);
        Self {
            z1: self.z1 * ph,
            z2: self.z2 * ph,
            c: self.c,
        }
    }
}

/// `[[z₁, -C z̄₂], [z₂, z̄₁]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupElement {
    pub m: Matrix2<C64>,
    pub c: i8,
}

impl GroupElement {
    pub fn from_point(g: &GroupPoint) -> Self {
        let cc = g.c as f64;
        Self {
            m: Matrix2::new(g.z1, -g.z2.conj() * cc, g.z2, g.z1.conj()),
            c: g.c,
        }
    }

    /// Fibre element `m(θ) = diag(e^{-iθ/2}, e^{iθ/2})`.
    pub fn fibre(theta: f64, c: i8) -> Self {
        Self::from_point(&GroupPoint::identity(c).rotate(theta))
    }

    /// The first column, which determines the element.
    pub fn point(&self) -> GroupPoint {
        GroupPoint {
            z1: self.m[(0, 0)],
            z2: self.m[(1, 0)],
            c: self.c,
        }
    }

    pub fn determinant(&self) -> C64 {
        self.m.determinant()
    }

    pub fn mul(&self, o: &GroupElement) -> Result<GroupElement> {
        if self.c != o.c {
            return Err(Error::MixedAlgebra(self.c, o.c));
        }
        Ok(Self {
            m: self.m * o.m,
            c: self.c,
        })
    }
}

/// A point of the bundle in the local trivialisation `h = s(z)·m(θ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiberedPoint {
    pub base: CPoint,
    pub angle: f64,
}

impl FiberedPoint {
    pub fn new(base: CPoint, angle: f64) -> Self {
        Self {
            base,
            angle: angle.rem_euclid(4.0 * std::f64::consts::PI),
        }
    }

    pub fn to_group(&self, spec: &SurfaceSpec) -> Result<GroupPoint> {
        Ok(section_for(spec, self.base)?.rotate(self.angle))
    }
}

/// `π(z₁, z₂) = z₂/z₁`.
pub fn hopf_projection(g: &GroupPoint) -> Result<CPoint> {
    if g.z1.norm() <= MIN_DENOMINATOR {
        return Err(Error::OnRemovedFibre);
    }
    CPoint::new(g.z2 / g.z1)
}

/// `s(z) = (1, z)/√(1 + C|z|²)`.
pub fn section(c: i8, p: CPoint) -> Result<GroupPoint> {
    let den = 1.0 + c as f64 * p.z.norm_sqr();
    if den <= MIN_DENOMINATOR {
        return Err(Error::DomainBoundary);
    }
    let k = den.sqrt().recip();
    Ok(GroupPoint {
        z1: k.into(),
        z2: p.z * k,
        c,
    })
}

/// The section in the chart coordinate of `spec`, i.e. `s(√κ w)`.
pub fn section_for(spec: &SurfaceSpec, p: CPoint) -> Result<GroupPoint> {
    section(spec.curvature_sign(), CPoint::at(spec.to_fixed_coordinate(p.z)))
}

/// Values of the left-invariant forms on one tangent vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaurerCartan {
    pub sigma: C64,
    pub sigma_bar: C64,
    pub sigma0: C64,
}

impl MaurerCartan {
    /// Components of the tangent on the frame `X₀, X₊, X₋`.
    pub fn frame_components(&self) -> [C64; 3] {
        [self.sigma0, 0.5 * self.sigma_bar, 0.5 * self.sigma]
    }
}

/// `σ = 2i(z₁dz₂ - z₂dz₁)`, `σ̄` its conjugate and
/// `σ⁰ = i(z̄₁dz₁ + Cz̄₂dz₂ - z₁dz̄₁ - Cz₂dz̄₂)` on a complexified tangent,
/// which must be tangent to the quadric.
pub fn maurer_cartan(g: &GroupPoint, t: &Tangent) -> Result<MaurerCartan> {
    let [z1, z2, w1, w2] = g.coords();
    let [d1, d2, e1, e2] = t.d;
    let cc = g.c as f64;
    let drift = w1 * d1 + z1 * e1 + cc * (w2 * d2 + z2 * e2);
    let scale = t.d.iter().map(|x| x.norm()).fold(1.0, f64::max);
    if drift.norm() > 1e-9 * scale {
        return Err(Error::ConstraintViolation(format!(
            "tangent leaves the quadric at rate {:e}",
            drift.norm()
        )));
    }
    Ok(MaurerCartan {
        sigma: 2.0 * I * (z1 * d2 - z2 * d1),
        sigma_bar: -2.0 * I * (w1 * e2 - w2 * e1),
        sigma0: I * (w1 * d1 + cc * w2 * d2 - z1 * e1 - cc * z2 * e2),
    })
}

/// The left-invariant vector fields dual to `σ⁰, σ̄/2, σ/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XField {
    X0,
    Plus,
    Minus,
}

impl XField {
    pub const ALL: [XField; 3] = [XField::X0, XField::Plus, XField::Minus];

    pub fn linear(self, curvature: i8) -> LinearField {
        let z = C64::default();
        let cc = curvature as f64;
        let mut m = [[z; 4]; 4];
        match self {
            XField::X0 => {
                m[0][0] = c(0.0, -0.5);
                m[1][1] = c(0.0, -0.5);
                m[2][2] = c(0.0, 0.5);
                m[3][3] = c(0.0, 0.5);
            }
            // X₋ = -i(z̄₁∂₂ - Cz̄₂∂₁)
            XField::Minus => {
                m[0][3] = I * cc;
                m[1][2] = -I;
            }
            XField::Plus => {
                m[2][1] = -I * cc;
                m[3][0] = I;
            }
        }
        LinearField { m }
    }

    fn index(self) -> usize {
        match self {
            XField::X0 => 0,
            XField::Plus => 1,
            XField::Minus => 2,
        }
    }
}

/// Bundle map covering a rational map, built from the homogenised
/// polynomials `Fᵢ(z₁, z₂) = z₁ᵈ fᵢ(z₂/z₁)`:
/// `U = (F₁, F₂)/√(|F₁|² + C₂ₙ|F₂|²)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BundleMapU {
    f1: Vec<C64>,
    f2: Vec<C64>,
    degree: usize,
    c2n: i8,
}

impl BundleMapU {
    pub fn from_map(map: &RationalMap, c2n: i8) -> Self {
        let degree = map.degree();
        let pad = |p: &[C64]| {
            let mut v = p.to_vec();
            v.resize(degree + 1, C64::default());
            v
        };
        Self {
            f1: pad(map.f1().coeffs()),
            f2: pad(map.f2().coeffs()),
            degree,
            c2n,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn target_curvature(&self) -> i8 {
        self.c2n
    }

    fn homogenise(&self, coeffs: &[C64], z1: &BiJet2, z2: &BiJet2) -> BiJet2 {
        let mut acc = BiJet2::constant(C64::default());
        for (k, a) in coeffs.iter().enumerate() {
            if *a != C64::default() {
                acc = acc + (z1.powi((self.degree - k) as u32) * z2.powi(k as u32)).scale(*a);
            }
        }
        acc
    }

    /// `(F₁, F₂)` as jets at `g`.
    pub fn numerators(&self, g: &GroupPoint) -> (BiJet2, BiJet2) {
        let (z1, z2) = BiJet2::coordinates(&g.coords());
        (self.homogenise(&self.f1, &z1, &z2), self.homogenise(&self.f2, &z1, &z2))
    }

    /// `(u₁, u₂) = U(g)` as jets.
    pub fn jets(&self, g: &GroupPoint) -> Result<(BiJet2, BiJet2)> {
        let (f1, f2) = self.numerators(g);
        let radicand = f1 * f1.conj() + f2 * f2.conj() * self.c2n as f64;
        if radicand.v.re <= MIN_DENOMINATOR {
            return Err(Error::DomainViolation);
        }
        let k = radicand.powf(-0.5)?;
        Ok((f1 * k, f2 * k))
    }
}

/// `U(g)` as a point of the target group.
pub fn bundle_map(u: &BundleMapU, g: &GroupPoint) -> Result<GroupPoint> {
    let (u1, u2) = u.jets(g)?;
    Ok(GroupPoint {
        z1: u1.v,
        z2: u2.v,
        c: u.c2n,
    })
}

/// `τ⁰` of the target group evaluated on `dU·X`, given the jets of the
/// components and their conjugates.
fn tau0_along(c2n: f64, u: &[BiJet1; 4], xu: &[BiJet1; 4]) -> BiJet1 {
    // slots: u1, u2, ū1, ū2
    (u[2] * xu[0] + u[3] * xu[1] * C64::from(c2n) - u[0] * xu[2] - u[1] * xu[3] * C64::from(c2n)).scale(I)
}

/// An n-vortex configuration on the group at one point: `Φⁿ` and the frame
/// components `nA(X₀), nA(X₊), nA(X₋)`, each with first-order jets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VortexConfiguration {
    pub point: GroupPoint,
    pub c2n: i8,
    pub n: f64,
    pub phi_n: BiJet1,
    /// `nA` on `X₀, X₊, X₋`.
    pub n_a: [BiJet1; 3],
}

/// Residuals of the equations an upstairs vortex configuration satisfies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpstairsResiduals {
    /// `X₀Φⁿ + inA₀Φⁿ`
    pub x0_phi: C64,
    /// `X₊Φⁿ + inA₊Φⁿ`
    pub plus_phi: C64,
    /// `dA(X₊, X₋) + 2i(C₀ - C₂ₙ|Φ|²ⁿ)/n`
    pub flux: C64,
    /// `dA(X₀, X₊)` and `dA(X₀, X₋)`
    pub fibre_flux: [C64; 2],
}

impl UpstairsResiduals {
    pub fn max_norm(&self) -> f64 {
        [
            self.x0_phi,
            self.plus_phi,
            self.flux,
            self.fibre_flux[0],
            self.fibre_flux[1],
        ]
        .iter()
        .map(|x| x.norm())
        .fold(0.0, f64::max)
    }
}

/// `Φⁿσ = U*τ` and `nA = U*τ⁰ - σ⁰`, evaluated on the frame.
pub fn vortex_configuration(u: &BundleMapU, g: &GroupPoint, n: f64) -> Result<VortexConfiguration> {
    let (u1, u2) = u.jets(g)?;
    let coords = g.coords();
    let comps = [u1, u2, u1.conj(), u2.conj()];
    let first = comps.map(|j| j.first_order());
    let c2n = u.c2n as f64;

    let xm = XField::Minus.linear(g.c);
    let xm_u1 = xm.apply(&u1, &coords);
    let xm_u2 = xm.apply(&u2, &coords);
    let phi_n = (first[0] * xm_u2 - first[1] * xm_u1).scale(I);

    let mut n_a = [BiJet1::constant(C64::default()); 3];
    for x in XField::ALL {
        let lin = x.linear(g.c);
        let xu = comps.map(|j| lin.apply(&j, &coords));
        let mut na = tau0_along(c2n, &first, &xu);
        if x == XField::X0 {
            na.v -= 1.0;
        }
        n_a[x.index()] = na;
    }
    Ok(VortexConfiguration {
        point: *g,
        c2n: u.c2n,
        n,
        phi_n,
        n_a,
    })
}

impl VortexConfiguration {
    pub fn source_curvature(&self) -> i8 {
        self.point.c
    }

    /// `A(X)` for one frame field.
    pub fn a(&self, x: XField) -> C64 {
        self.n_a[x.index()].v / self.n
    }

    /// Derivative `X f` of a jet stored with the configuration.
    pub fn derive(&self, x: XField, f: &BiJet1) -> C64 {
        x.linear(self.point.c).apply1(f, &self.point.coords())
    }

    pub fn residuals(&self) -> UpstairsResiduals {
        use XField::*;
        let n = self.n;
        let c0 = self.point.c as f64;
        let phi = self.phi_n.v;
        let na = |x: XField| self.n_a[x.index()].v;
        let xa = |x: XField, y: XField| self.derive(x, &self.n_a[y.index()]) / n;
        let a = |x: XField| self.a(x);
        let flux = xa(Plus, Minus) - xa(Minus, Plus) + 2.0 * I * c0 * a(X0);
        let expected = -2.0 * I * (c0 - self.c2n as f64 * phi.norm_sqr()) / n;
        UpstairsResiduals {
            x0_phi: self.derive(X0, &self.phi_n) + I * na(X0) * phi,
            plus_phi: self.derive(Plus, &self.phi_n) + I * na(Plus) * phi,
            flux: flux - expected,
            fibre_flux: [
                xa(X0, Plus) - xa(Plus, X0) + I * a(Plus),
                xa(X0, Minus) - xa(Minus, X0) - I * a(Minus),
            ],
        }
    }

    /// `𝒜(X)` as an algebra element (target constant `C₂ₙ`).
    fn connection_jets(&self, x: XField) -> [BiJet1; 3] {
        let zero = BiJet1::constant(C64::default());
        let na = self.n_a[x.index()];
        match x {
            XField::X0 => {
                let mut a0 = na;
                a0.v += 1.0;
                [a0, zero, zero]
            }
            XField::Plus => [na, self.phi_n.conj(), zero],
            XField::Minus => [na, zero, self.phi_n],
        }
    }

    /// Value of the flat connection `𝒜 = (nA + σ⁰)t₀ + ½Φⁿσ t₋ + ½Φ̄ⁿσ̄ t₊` on a
    /// frame field.
    pub fn connection(&self, x: XField) -> LieValue {
        let [a0, ap, am] = self.connection_jets(x);
        LieValue::new(a0.v, ap.v, am.v, self.c2n)
    }

    /// `𝒜` on an arbitrary tangent vector at the point.
    pub fn connection_on(&self, t: &Tangent) -> Result<LieValue> {
        let comps = maurer_cartan(&self.point, t)?.frame_components();
        let mut acc = LieValue::zero(self.c2n);
        for x in XField::ALL {
            acc = acc.add(&self.connection(x).scale(comps[x.index()]));
        }
        Ok(acc)
    }

    fn derive_connection(&self, x: XField, y: XField) -> LieValue {
        let [a0, ap, am] = self.connection_jets(y);
        LieValue::new(self.derive(x, &a0), self.derive(x, &ap), self.derive(x, &am), self.c2n)
    }

    /// Curvature of `𝒜` on the frame pairs `(X₀,X₊), (X₀,X₋), (X₊,X₋)`, with
    /// all derivatives taken exactly.
    pub fn connection_curvature(&self) -> Result<[LieValue; 3]> {
        self.curvature_with(|x, y| Ok(self.derive_connection(x, y)))
    }

    fn curvature_with<D>(&self, derive: D) -> Result<[LieValue; 3]>
    where
        D: Fn(XField, XField) -> Result<LieValue>,
    {
        use XField::*;
        let c0 = self.point.c as f64;
        let conn = |x| self.connection(x);
        // 𝒜([Xa, Xb]) for the three frame brackets.
        let brackets = [
            conn(Plus).scale(-I),
            conn(Minus).scale(I),
            conn(X0).scale(-2.0 * I * c0),
        ];
        let pairs = [(X0, Plus), (X0, Minus), (Plus, Minus)];
        let mut out = [LieValue::zero(self.c2n); 3];
        for (k, (a, b)) in pairs.into_iter().enumerate() {
            let d = derive(a, b)?.add(&derive(b, a)?.scale((-1.0).into()));
            out[k] = d
                .add(&brackets[k].scale((-1.0).into()))
                .add(&conn(a).bracket(&conn(b))?);
        }
        Ok(out)
    }
}

/// The lift of a downstairs solution: the bundle map covering its rational
/// map (in fixed-geometry coordinates) and the sections of source and target.
#[derive(Debug, Clone)]
pub struct Lift {
    family: VortexFamily,
    fixed_map: RationalMap,
    u: BundleMapU,
}

/// Pointwise comparison of lifted and downstairs quantities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PullbackCheck {
    /// `|s*Φⁿ - φⁿ f₁/f̄₁|`
    pub higgs: f64,
    /// `|s*(nA) + nA_down + 2dα|`, `α = arg f₁`
    pub potential: f64,
}

impl Lift {
    pub fn new(sol: &VortexSolution) -> Result<Self> {
        let family = *sol.family();
        let kappa = family.source().kappa();
        let fixed_map = if kappa == 1.0 {
            sol.map().clone()
        } else {
            sol.map().rescaled(kappa)?
        };
        let u = BundleMapU::from_map(&fixed_map, family.c2n());
        Ok(Self { family, fixed_map, u })
    }

    pub fn family(&self) -> &VortexFamily {
        &self.family
    }

    pub fn bundle_map(&self) -> &BundleMapU {
        &self.u
    }

    /// The map in fixed-geometry coordinates `z = √κ w`.
    pub fn fixed_map(&self) -> &RationalMap {
        &self.fixed_map
    }

    pub fn section(&self, p: CPoint) -> Result<GroupPoint> {
        section_for(&self.family.source(), p)
    }

    pub fn group_point(&self, fp: &FiberedPoint) -> Result<GroupPoint> {
        fp.to_group(&self.family.source())
    }

    pub fn configuration(&self, g: &GroupPoint) -> Result<VortexConfiguration> {
        vortex_configuration(&self.u, g, self.family.n())
    }

    /// `|π(U(g)) - f(π(g))|`.
    pub fn equivariance_residual(&self, g: &GroupPoint) -> Result<f64> {
        let up = hopf_projection(&bundle_map(&self.u, g)?)?;
        let down = self.fixed_map.eval(hopf_projection(g)?.z)?;
        Ok((up.z - down).norm())
    }

    /// Pushforwards of `∂_w` and `∂_w̄` under the section.
    fn section_tangents(&self, p: CPoint) -> Result<(GroupPoint, [Tangent; 2])> {
        let spec = self.family.source();
        let g = self.section(p)?;
        let den = spec.denominator(p)?;
        let s1 = den.powf(-0.5)?;
        let s2 = Jet2::coordinate(p) * s1 * spec.kappa().sqrt();
        let (b1, b2) = (s1.conj(), s2.conj());
        let dw = Tangent::new(s1.dz, s2.dz, b1.dz, b2.dz);
        let dwbar = Tangent::new(s1.dzbar, s2.dzbar, b1.dzbar, b2.dzbar);
        Ok((g, [dw, dwbar]))
    }

    /// `s*σ` and `s*σ⁰` as chart one-forms.
    pub fn pulled_back_forms(&self, p: CPoint) -> Result<(OneFormVal, OneFormVal)> {
        let (g, [dw, dwbar]) = self.section_tangents(p)?;
        let a = maurer_cartan(&g, &dw)?;
        let b = maurer_cartan(&g, &dwbar)?;
        Ok((OneFormVal::new(a.sigma, b.sigma), OneFormVal::new(a.sigma0, b.sigma0)))
    }

    /// `|s*σ - i√κ e|` and `|s*σ⁰ + Γ|`.
    pub fn pullback_identities(&self, p: CPoint) -> Result<(f64, f64)> {
        let spec = self.family.source();
        let (sigma, sigma0) = self.pulled_back_forms(p)?;
        let e = spec.coframe(p)?.value().scale(I * spec.kappa().sqrt());
        let gamma = spec.spin_connection(p)?.value();
        Ok(((sigma - e).norm(), (sigma0 + gamma).norm()))
    }

    /// `s*Φⁿ` and `s*(nA)` at a chart point.
    pub fn pulled_back_configuration(&self, p: CPoint) -> Result<(C64, OneFormVal)> {
        let (g, tangents) = self.section_tangents(p)?;
        let (u1, u2) = self.u.jets(&g)?;
        let comps = [u1, u2, u1.conj(), u2.conj()].map(|j| j.first_order());
        let phi = vortex_configuration(&self.u, &g, self.family.n())?.phi_n.v;
        let mut na = [C64::default(); 2];
        for (slot, t) in na.iter_mut().zip(tangents.iter()) {
            let du = comps.map(|j| BiJet1::constant(j.along(t)));
            let tau0 = tau0_along(self.u.c2n as f64, &comps.map(|j| BiJet1::constant(j.v)), &du).v;
            *slot = tau0 - maurer_cartan(&g, t)?.sigma0;
        }
        Ok((phi, OneFormVal::new(na[0], na[1])))
    }

    /// `α = arg f₁(√κ w)` and `dα` on the chart.
    fn phase_of_f1(&self, p: CPoint) -> Result<(C64, OneFormVal)> {
        let rk = self.family.source().kappa().sqrt();
        let z = p.z * rk;
        let f1 = self.fixed_map.f1().eval(z);
        if f1.norm() <= MIN_DENOMINATOR {
            return Err(Error::PoleAtPoint);
        }
        let log_d = self.fixed_map.f1().derivative().eval(z) * rk / f1;
        let d_alpha = OneFormVal::new(log_d, -log_d.conj()).scale(-0.5 * I);
        Ok((f1 / f1.conj(), d_alpha))
    }

    /// Compare the section pullback of the upstairs configuration with the
    /// downstairs solution.
    pub fn pullback_check(&self, sol: &VortexSolution, p: CPoint) -> Result<PullbackCheck> {
        let (phi_up, na_up) = self.pulled_back_configuration(p)?;
        let phi_down = sol.higgs_field(p)?.v;
        let a_down = sol.gauge_potential(p)?.value().scale(self.family.n().into());
        let (phase, d_alpha) = self.phase_of_f1(p)?;
        Ok(PullbackCheck {
            higgs: (phi_up - phi_down * phase).norm(),
            potential: (na_up + a_down + d_alpha.scale(2.0.into())).norm(),
        })
    }

    /// `s*𝒜` as a chart one-form with algebra-valued coefficients of `dw` and
    /// `dw̄`.
    pub fn pulled_back_connection(&self, p: CPoint) -> Result<(LieValue, LieValue)> {
        let (g, [dw, dwbar]) = self.section_tangents(p)?;
        let cfg = self.configuration(&g)?;
        Ok((cfg.connection_on(&dw)?, cfg.connection_on(&dwbar)?))
    }

    /// `f*Â - (r⁻¹ s*𝒜 r + r⁻¹dr)` with `r = diag(e^{iα}, e^{-iα})`,
    /// `α = arg f₁`; the largest coefficient.
    pub fn conjugation_residual<G: GaugeConfiguration + ?Sized>(&self, sol: &G, p: CPoint) -> Result<f64> {
        let (sa, sb) = self.pulled_back_connection(p)?;
        let (phase, d_alpha) = self.phase_of_f1(p)?;
        let fa: LieValuedOneForm = crate::cartan::pullback_ahat(sol, p)?;
        let (fa_z, fa_zbar) = fa.value();
        let conj = |v: LieValue, da: C64| LieValue::new(v.a0 + 2.0 * da, v.ap * phase, v.am / phase, v.c);
        let rz = conj(sa, d_alpha.a);
        let rzb = conj(sb, d_alpha.b);
        let diff_z = fa_z.add(&rz.scale((-1.0).into()));
        let diff_zb = fa_zbar.add(&rzb.scale((-1.0).into()));
        Ok(diff_z.norm().max(diff_zb.norm()))
    }

    /// Curvature of `𝒜` with the `X₀` derivatives replaced by central
    /// differences along the fibre.
    pub fn connection_curvature_fd(&self, g: &GroupPoint) -> Result<[LieValue; 3]> {
        let cfg = self.configuration(g)?;
        let fwd = self.configuration(&g.rotate(FIBRE_STEP))?;
        let bwd = self.configuration(&g.rotate(-FIBRE_STEP))?;
        cfg.curvature_with(|x, y| {
            if x == XField::X0 {
                let (p, m) = (fwd.connection(y), bwd.connection(y));
                Ok(p.add(&m.scale((-1.0).into())).scale((0.5 / FIBRE_STEP).into()))
            } else {
                Ok(cfg.derive_connection(x, y))
            }
        })
    }
}
