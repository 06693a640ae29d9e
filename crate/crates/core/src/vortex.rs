//! Vortex fields built from a rational map in the holomorphic gauge.
//!
//! For a map `f` between constant-curvature surfaces with curvature signs
//! `C0` (source) and `C2n` (target) the Higgs field is
//!
//! ```text
//! φⁿ = (1 + κ C0 |z|²) / (1 + κ C2n |f|²) · f'(z)
//! ```
//!
//! and the gauge potential is the real one-form with
//! `A_z̄ = -(i/n) ∂_z̄ log φⁿ`. Only `φⁿ` is ever evaluated, so non-integer
//! exponents cause no branch ambiguity.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{GeometryMode, SurfaceSpec, MIN_DENOMINATOR};
use crate::jets::{exterior_d, wedge, CPoint, Jet2, OneForm, OneFormVal, TwoFormVal, C64, I};
use crate::quadrature::{integrate, integrate_disc, integrate_sphere, QuadratureConfig};
use crate::rational::{RamificationSet, RationalMap};

/// Default radius of the discs removed around vortex centres and poles.
pub const DEFAULT_EXCLUSION_RADIUS: f64 = 1e-2;

/// Samples used to accumulate the phase winding of `φⁿ` on a small circle.
const PHASE_SAMPLES: usize = 512;

/// Curvature pairs for which the flux integral has the wrong sign and no
/// vortex solutions exist.
const INADMISSIBLE: [(i8, i8); 3] = [(1, -1), (1, 0), (0, -1)];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VortexFamily {
    c0: i8,
    c2n: i8,
    n: f64,
    mode: GeometryMode,
}

impl VortexFamily {
    pub fn new(c0: i32, c2n: i32, n: f64, mode: GeometryMode) -> Result<Self> {
        let source = SurfaceSpec::new(c0, mode, n)?;
        let target = SurfaceSpec::new(c2n, mode, n)?;
        let pair = (source.curvature_sign(), target.curvature_sign());
        if INADMISSIBLE.contains(&pair) {
            return Err(Error::Config(format!(
                "curvature pair (C0, C2n) = ({c0}, {c2n}) admits no vortices"
            )));
        }
        Ok(Self {
            c0: pair.0,
            c2n: pair.1,
            n,
            mode,
        })
    }

    pub fn is_admissible(c0: i32, c2n: i32) -> bool {
        (-1..=1).contains(&c0) && (-1..=1).contains(&c2n) && !INADMISSIBLE.contains(&(c0 as i8, c2n as i8))
    }

    pub fn c0(&self) -> i8 {
        self.c0
    }

    pub fn c2n(&self) -> i8 {
        self.c2n
    }

    pub fn n(&self) -> f64 {
        self.n
    }

    pub fn mode(&self) -> GeometryMode {
        self.mode
    }

    /// Surface the vortices live on.
    pub fn source(&self) -> SurfaceSpec {
        SurfaceSpec::new(self.c0 as i32, self.mode, self.n).expect("validated at construction")
    }

    /// Surface the rational map takes values in.
    pub fn target(&self) -> SurfaceSpec {
        SurfaceSpec::new(self.c2n as i32, self.mode, self.n).expect("validated at construction")
    }

    /// Divisor of the right-hand side of the second vortex equation when
    /// written against `(i/2) e∧ē`: `n` in fixed mode, `1` once the
    /// geometry absorbs it.
    pub fn nu(&self) -> f64 {
        match self.mode {
            GeometryMode::Fixed => self.n,
            GeometryMode::Normalised => 1.0,
        }
    }
}

/// A removed disc around a point where the holomorphic gauge is singular.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Exclusion {
    pub center: C64,
    pub radius: f64,
}

impl Exclusion {
    pub fn contains(&self, z: C64) -> bool {
        (z - self.center).norm() < self.radius
    }
}

/// Fields and equations that any `(φⁿ, A)` pair supports. Implementors only
/// supply the two fields; residuals and gauge-invariant densities follow.
pub trait GaugeConfiguration: Sync {
    fn family(&self) -> &VortexFamily;

    fn higgs_field(&self, p: CPoint) -> Result<Jet2>;

    fn gauge_potential(&self, p: CPoint) -> Result<OneForm>;

    /// `φⁿ` where the holomorphic gauge is singular only in the potential:
    /// skips the exclusion test, still fails at poles and chart boundaries.
    fn higgs_field_unchecked(&self, p: CPoint) -> Result<Jet2> {
        self.higgs_field(p)
    }

    fn gauge_potential_unchecked(&self, p: CPoint) -> Result<OneForm> {
        self.gauge_potential(p)
    }

    fn flux_density_unchecked(&self, p: CPoint) -> Result<f64> {
        Ok(exterior_d(&self.gauge_potential_unchecked(p)?).area_density().re)
    }

    /// Dz∧dz̄ coefficient of `(dφⁿ - inAφⁿ)∧e`.
    fn residual_selfdual(&self, p: CPoint) -> Result<C64> {
        let phi = self.higgs_field(p)?;
        let a = self.gauge_potential(p)?.value();
        let e = self.family().source().coframe(p)?.value();
        let n = self.family().n();
        let cov = OneFormVal::new(phi.dz, phi.dzbar) - a.scale(I * n * phi.v);
        Ok(wedge(&cov, &e).c)
    }

    /// The self-dual residual divided by `n`, i.e. `φⁿ⁻¹(dφ - iAφ)∧e`.
    fn residual_selfdual_reduced(&self, p: CPoint) -> Result<C64> {
        Ok(self.residual_selfdual(p)? / self.family().n())
    }

    /// `dA - ((-C0 + C2n|φ|²ⁿ)/ν)(i/2) e∧ē` as a dz∧dz̄ coefficient.
    fn residual_vortex2(&self, p: CPoint) -> Result<C64> {
        let fam = self.family();
        let phi = self.higgs_field(p)?;
        let da = exterior_d(&self.gauge_potential(p)?);
        let omega = fam.source().kahler_form(p)?;
        let k = (-(fam.c0() as f64) + fam.c2n() as f64 * phi.v.norm_sqr()) / fam.nu();
        Ok((da - omega.scale(k.into())).c)
    }

    /// `dA` as a two-form.
    fn field_strength(&self, p: CPoint) -> Result<TwoFormVal> {
        Ok(exterior_d(&self.gauge_potential(p)?))
    }

    /// `|φⁿ|²`, the conformal factor of the Baptista metric.
    fn baptista_factor(&self, p: CPoint) -> Result<f64> {
        Ok(self.higgs_field(p)?.v.norm_sqr())
    }

    /// Density of `dA` against `dx∧dy`.
    fn flux_density(&self, p: CPoint) -> Result<f64> {
        Ok(self.field_strength(p)?.area_density().re)
    }
}

/// Closed-form solution for a rational map.
#[derive(Debug, Clone)]
pub struct VortexSolution {
    family: VortexFamily,
    map: RationalMap,
    ramification: RamificationSet,
    poles: Vec<C64>,
    exclusions: Vec<Exclusion>,
}

impl VortexSolution {
    pub fn new(family: VortexFamily, map: RationalMap) -> Result<Self> {
        Self::with_exclusion_radius(family, map, DEFAULT_EXCLUSION_RADIUS)
    }

    pub fn with_exclusion_radius(family: VortexFamily, map: RationalMap, radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius >= 0.0) {
            return Err(Error::Config(format!("exclusion radius must be >= 0, got {radius}")));
        }
        let ramification = map.ramification_points()?;
        let poles: Vec<C64> = map.poles()?.into_iter().map(|r| r.value).collect();
        let exclusions = ramification
            .points
            .iter()
            .map(|r| r.location)
            .chain(poles.iter().copied())
            .map(|center| Exclusion { center, radius })
            .collect();
        Ok(Self {
            family,
            map,
            ramification,
            poles,
            exclusions,
        })
    }

    pub fn map(&self) -> &RationalMap {
        &self.map
    }

    pub fn ramification(&self) -> &RamificationSet {
        &self.ramification
    }

    pub fn poles(&self) -> &[C64] {
        &self.poles
    }

    pub fn exclusions(&self) -> &[Exclusion] {
        &self.exclusions
    }

    pub fn check_excluded(&self, p: CPoint) -> Result<()> {
        if self.exclusions.iter().any(|e| e.contains(p.z)) {
            Err(Error::ExcludedRegion)
        } else {
            Ok(())
        }
    }

    /// Flux `N = (1/2π)∫dA`, globally on the sphere or as a sum of local
    /// contributions around the special points of the chart.
    pub fn winding_number(&self, mode: WindingMode, cfg: &QuadratureConfig) -> Result<WindingReport> {
        self.winding_number_of(self, mode, cfg)
    }

    /// Winding of another configuration with the same special points as
    /// this solution, e.g. a gauge transform of it.
    pub fn winding_number_of<G>(&self, fields: &G, mode: WindingMode, cfg: &QuadratureConfig) -> Result<WindingReport>
    where
        G: GaugeConfiguration + ?Sized,
    {
        let d = self.map.degree() as f64;
        let n = self.family.n;
        match mode {
            WindingMode::Global => {
                if self.family.c0 != 1 {
                    return Err(Error::UnsupportedDomain(format!(
                        "global flux needs a compact source surface, got C0 = {}",
                        self.family.c0
                    )));
                }
                let radius = 1.0 / self.family.source().kappa().sqrt();
                let est = integrate_sphere(|z| fields.flux_density_unchecked(CPoint::at(z)), radius, cfg)?;
                let value = est.value / (2.0 * std::f64::consts::PI);
                Ok(WindingReport::new(mode, value, (2.0 * d - 2.0) / n, n, Vec::new()))
            }
            WindingMode::Local => {
                let local = self.local_windings(fields, cfg)?;
                let mut value = local.iter().fold(0.0, |acc, l| acc + l.value);
                // Points beyond a hyperbolic chart edge carry no circle and
                // are left out of both sides.
                let mut expected = local.iter().fold(0.0, |acc, l| acc + l.multiplicity as f64) / n;
                if self.family.c0 == 1 {
                    // The point at infinity has no circle in this chart; its
                    // multiplicity enters through the degree bookkeeping.
                    let inf = self.ramification.at_infinity as f64 / n;
                    value += inf;
                    expected += inf;
                }
                Ok(WindingReport::new(mode, value, expected, n, local))
            }
        }
    }

    /// Contribution of each finite special point (ramification point or
    /// pole) to the flux.
    pub fn local_windings<G>(&self, fields: &G, cfg: &QuadratureConfig) -> Result<Vec<LocalWinding>>
    where
        G: GaugeConfiguration + ?Sized,
    {
        let mut specials: Vec<(C64, usize)> = self
            .ramification
            .points
            .iter()
            .map(|r| (r.location, r.multiplicity))
            .collect();
        for &p in &self.poles {
            if !specials.iter().any(|(q, _)| (*q - p).norm() < 1e-9) {
                specials.push((p, 0));
            }
        }
        let radius_bound = self.family.source().domain().radius_bound;
        let mut out = Vec::with_capacity(specials.len());
        for (i, &(q, multiplicity)) in specials.iter().enumerate() {
            let nearest = specials
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, (o, _))| (o - q).norm())
                .fold(f64::INFINITY, f64::min);
            let to_edge = radius_bound - q.norm();
            if to_edge <= 0.0 {
                continue;
            }
            let radius = DEFAULT_EXCLUSION_RADIUS.min(0.4 * nearest).min(0.4 * to_edge);
            let value = local_winding(fields, q, radius, cfg)?;
            out.push(LocalWinding {
                location: q,
                multiplicity,
                value,
            });
        }
        Ok(out)
    }
}

/// `(1/2πn) Δarg φⁿ - (1/2π)∮A + (1/2π)∫_disc dA` on the circle of the
/// given radius around `q`. The first two terms measure the singular part
/// of the flux at `q`; the last adds the smooth part inside the circle.
pub fn local_winding<G>(fields: &G, q: C64, radius: f64, cfg: &QuadratureConfig) -> Result<f64>
where
    G: GaugeConfiguration + ?Sized,
{
    let two_pi = 2.0 * std::f64::consts::PI;
    let on_circle = |t: f64| CPoint::at(q + C64::from_polar(radius, t));

    let mut phase = 0.0;
    let mut prev = fields.higgs_field_unchecked(on_circle(0.0))?.v.arg();
    for k in 1..=PHASE_SAMPLES {
        let next = fields
            .higgs_field_unchecked(on_circle(two_pi * k as f64 / PHASE_SAMPLES as f64))?
            .v
            .arg();
        let mut step = next - prev;
        step -= two_pi * (step / two_pi).round();
        phase += step;
        prev = next;
    }
    let turns = (phase / two_pi).round();

    let holonomy = integrate(
        |t| {
            let a = fields.gauge_potential_unchecked(on_circle(t))?.value();
            let dz = I * C64::from_polar(radius, t);
            Ok((a.a * dz + a.b * dz.conj()).re)
        },
        0.0,
        two_pi,
        cfg,
    )?;
    let flux = integrate_disc(|u| fields.flux_density_unchecked(CPoint::at(q + u)), radius, cfg)?;
    Ok(turns / fields.family().n() - (holonomy.value - flux.value) / two_pi)
}

impl GaugeConfiguration for VortexSolution {
    fn family(&self) -> &VortexFamily {
        &self.family
    }

    fn higgs_field(&self, p: CPoint) -> Result<Jet2> {
        self.check_excluded(p)?;
        self.higgs_field_unchecked(p)
    }

    /// `φⁿ` without the exclusion test; still fails at poles and at the
    /// boundary of the target chart.
    fn higgs_field_unchecked(&self, p: CPoint) -> Result<Jet2> {
        let kappa = self.family.source().kappa();
        let den0 = self.family.source().denominator(p)?;
        let f = self.map.eval_jet(p)?;
        let den2 = f.modulus_squared() * (kappa * self.family.c2n as f64) + 1.0;
        if den2.v.re <= MIN_DENOMINATOR {
            return Err(Error::DomainBoundary);
        }
        let fp = self.map.derivative_jet(p)?;
        (den0 * fp).try_div(&den2)
    }

    fn gauge_potential_unchecked(&self, p: CPoint) -> Result<OneForm> {
        let phi = self.higgs_field_unchecked(p)?;
        let a_zbar = phi.ln()?.d_zbar().scale(-I / self.family.n);
        Ok(OneForm::new(a_zbar.conj(), a_zbar))
    }

    fn gauge_potential(&self, p: CPoint) -> Result<OneForm> {
        self.check_excluded(p)?;
        self.gauge_potential_unchecked(p)
    }

    fn baptista_factor(&self, p: CPoint) -> Result<f64> {
        Ok(self.higgs_field_unchecked(p)?.v.norm_sqr())
    }
}

/// `(φⁿ e^{inβ}, A + dβ)` for a real gauge function `β`.
pub struct GaugeTransformed<'a, G, B> {
    inner: &'a G,
    beta: B,
}

impl<'a, G, B> GaugeTransformed<'a, G, B>
where
    G: GaugeConfiguration,
    B: Fn(CPoint) -> Jet2 + Sync,
{
    pub fn new(inner: &'a G, beta: B) -> Self {
        Self { inner, beta }
    }

    fn rotate(&self, phi: Jet2, p: CPoint) -> Jet2 {
        phi * ((self.beta)(p) * (I * self.inner.family().n())).exp()
    }
}

impl<G, B> GaugeConfiguration for GaugeTransformed<'_, G, B>
where
    G: GaugeConfiguration,
    B: Fn(CPoint) -> Jet2 + Sync,
{
    fn family(&self) -> &VortexFamily {
        self.inner.family()
    }

    fn higgs_field(&self, p: CPoint) -> Result<Jet2> {
        Ok(self.rotate(self.inner.higgs_field(p)?, p))
    }

    fn gauge_potential(&self, p: CPoint) -> Result<OneForm> {
        Ok(self.inner.gauge_potential(p)? + OneForm::gradient(&(self.beta)(p)))
    }

    fn higgs_field_unchecked(&self, p: CPoint) -> Result<Jet2> {
        Ok(self.rotate(self.inner.higgs_field_unchecked(p)?, p))
    }

    fn gauge_potential_unchecked(&self, p: CPoint) -> Result<OneForm> {
        Ok(self.inner.gauge_potential_unchecked(p)? + OneForm::gradient(&(self.beta)(p)))
    }
}

/// The configuration with `δ` added to the gauge potential; used to confirm
/// that the residuals detect violations.
pub struct Perturbed<'a, G, D> {
    inner: &'a G,
    delta: D,
}

impl<'a, G, D> Perturbed<'a, G, D>
where
    G: GaugeConfiguration,
    D: Fn(CPoint) -> OneForm + Sync,
{
    pub fn new(inner: &'a G, delta: D) -> Self {
        Self { inner, delta }
    }
}

impl<G, D> GaugeConfiguration for Perturbed<'_, G, D>
where
    G: GaugeConfiguration,
    D: Fn(CPoint) -> OneForm + Sync,
{
    fn family(&self) -> &VortexFamily {
        self.inner.family()
    }

    fn higgs_field(&self, p: CPoint) -> Result<Jet2> {
        self.inner.higgs_field(p)
    }

    fn gauge_potential(&self, p: CPoint) -> Result<OneForm> {
        Ok(self.inner.gauge_potential(p)? + (self.delta)(p))
    }

    fn higgs_field_unchecked(&self, p: CPoint) -> Result<Jet2> {
        self.inner.higgs_field_unchecked(p)
    }

    fn gauge_potential_unchecked(&self, p: CPoint) -> Result<OneForm> {
        Ok(self.inner.gauge_potential_unchecked(p)? + (self.delta)(p))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WindingMode {
    Global,
    Local,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalWinding {
    pub location: C64,
    /// Ramification multiplicity; 0 for an unramified pole.
    pub multiplicity: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindingReport {
    pub mode: WindingMode,
    pub value: f64,
    pub expected: f64,
    pub delta: f64,
    /// Whether `value` is expected to be an integer (only for `n = 1`).
    pub integral: bool,
    pub local: Vec<LocalWinding>,
}

impl WindingReport {
    fn new(mode: WindingMode, value: f64, expected: f64, n: f64, local: Vec<LocalWinding>) -> Self {
        Self {
            mode,
            value,
            expected,
            delta: (value - expected).abs(),
            integral: n == 1.0,
            local,
        }
    }
}

impl Error {
    /// Errors that mark a sample point as lying outside the region where a
    /// quantity is defined, rather than a failure of the computation.
    pub fn is_exclusion(&self) -> bool {
        matches!(
            self,
            Error::ExcludedRegion
                | Error::DomainBoundary
                | Error::PoleAtPoint
                | Error::OnRemovedFibre
                | Error::DomainViolation
        )
    }
}

/// Max, sum and counts of a non-negative quantity over sample points.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SweepStats {
    pub max: f64,
    pub sum: f64,
    pub evaluated: usize,
    pub excluded: usize,
}

impl SweepStats {
    pub fn mean(&self) -> f64 {
        if self.evaluated == 0 {
            0.0
        } else {
            self.sum / self.evaluated as f64
        }
    }

    pub fn push(&mut self, v: f64) {
        self.max = if v.is_nan() { f64::NAN } else { self.max.max(v) };
        self.sum += v;
        self.evaluated += 1;
    }

    pub fn merge(&mut self, other: &SweepStats) {
        self.max = if other.max.is_nan() {
            f64::NAN
        } else {
            self.max.max(other.max)
        };
        self.sum += other.sum;
        self.evaluated += other.evaluated;
        self.excluded += other.excluded;
    }
}

/// Evaluate `f` at every point in parallel and reduce in point order, so the
/// result does not depend on scheduling. Exclusion errors are counted; any
/// other error aborts the sweep.
pub fn sweep<T, F>(points: &[T], f: F) -> Result<SweepStats>
where
    T: Sync,
    F: Fn(&T) -> Result<f64> + Sync,
{
    let values: Vec<Result<f64>> = points.par_iter().map(&f).collect();
    let mut stats = SweepStats::default();
    for v in values {
        match v {
            Ok(x) => stats.push(x),
            Err(e) if e.is_exclusion() => stats.excluded += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(stats)
}
