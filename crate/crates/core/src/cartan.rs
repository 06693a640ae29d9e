//! Lie-algebra-valued forms over the basis `(t₀, t₊, t₋)` with
//!
//! ```text
//! [t₀, t±] = ∓i t±,    [t₊, t₋] = -2iC t₀
//! ```
//!
//! which is su(2) for `C = 1`, su(1,1) for `C = -1` and the contracted
//! (Euclidean) algebra for `C = 0`. The connection on the target surface is
//! `Â = -Γ t₀ + (i/2)√κ (e t₋ - ē t₊)`; it is flat, and so is its pullback by
//! a rational map exactly when the vortex equations hold.

use nalgebra::Matrix2;

use crate::error::{Error, Result};
use crate::geometry::SurfaceSpec;
use crate::jets::{c, exterior_d, wedge, CPoint, OneForm, OneFormVal, TwoFormVal, C64, I};
use crate::rational::RationalMap;
use crate::vortex::GaugeConfiguration;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LieValue {
    pub a0: C64,
    pub ap: C64,
    pub am: C64,
    pub c: i8,
}

impl LieValue {
    pub fn new(a0: C64, ap: C64, am: C64, c: i8) -> Self {
        Self { a0, ap, am, c }
    }

    pub fn zero(c: i8) -> Self {
        Self::new(C64::default(), C64::default(), C64::default(), c)
    }

    pub fn t0(c: i8) -> Self {
        Self::new(1.0.into(), C64::default(), C64::default(), c)
    }

    pub fn tp(c: i8) -> Self {
        Self::new(C64::default(), 1.0.into(), C64::default(), c)
    }

    pub fn tm(c: i8) -> Self {
        Self::new(C64::default(), C64::default(), 1.0.into(), c)
    }

    /// The three basis elements in the order `t₀, t₊, t₋`.
    pub fn basis(c: i8) -> [Self; 3] {
        [Self::t0(c), Self::tp(c), Self::tm(c)]
    }

    pub fn bracket(&self, y: &LieValue) -> Result<LieValue> {
        if self.c != y.c {
            return Err(Error::MixedAlgebra(self.c, y.c));
        }
        let x = self;
        let cc = self.c as f64;
        Ok(LieValue::new(
            -2.0 * I * cc * (x.ap * y.am - x.am * y.ap),
            -I * (x.a0 * y.ap - x.ap * y.a0),
            I * (x.a0 * y.am - x.am * y.a0),
            self.c,
        ))
    }

    pub fn scale(&self, k: C64) -> Self {
        Self::new(self.a0 * k, self.ap * k, self.am * k, self.c)
    }

    pub fn add(&self, o: &LieValue) -> Self {
        Self::new(self.a0 + o.a0, self.ap + o.ap, self.am + o.am, self.c)
    }

    pub fn norm(&self) -> f64 {
        self.a0.norm().max(self.ap.norm()).max(self.am.norm())
    }

    /// Distance from the real form: `a0` real and `ap = conj(am)`.
    pub fn reality_defect(&self) -> f64 {
        self.a0.im.abs().max((self.ap - self.am.conj()).norm())
    }

    /// Image in 2×2 matrices, with `t₀ = -(i/2)diag(1,-1)`,
    /// `t₊ = [[0,-iC],[0,0]]`, `t₋ = [[0,0],[-i,0]]`. Faithful only for
    /// `C = ±1`.
    pub fn to_matrix(&self) -> Matrix2<C64> {
        let h = c(0.0, -0.5);
        let cc = self.c as f64;
        Matrix2::new(h * self.a0, -I * cc * self.ap, -I * self.am, -h * self.a0)
    }
}

/// One-form valued in the algebra: one chart one-form (with jets) per basis
/// element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LieValuedOneForm {
    pub t0: OneForm,
    pub tp: OneForm,
    pub tm: OneForm,
    pub c: i8,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LieValuedTwoForm {
    pub t0: TwoFormVal,
    pub tp: TwoFormVal,
    pub tm: TwoFormVal,
    pub c: i8,
}

impl LieValuedTwoForm {
    pub fn max_norm(&self) -> f64 {
        self.t0.norm().max(self.tp.norm()).max(self.tm.norm())
    }

    /// Coefficients of dz∧dz̄ as an algebra element.
    pub fn coefficient(&self) -> LieValue {
        LieValue::new(self.t0.c, self.tp.c, self.tm.c, self.c)
    }
}

impl LieValuedOneForm {
    fn components(&self) -> [(OneFormVal, LieValue); 3] {
        let [b0, bp, bm] = LieValue::basis(self.c);
        [(self.t0.value(), b0), (self.tp.value(), bp), (self.tm.value(), bm)]
    }

    /// Pointwise value as an algebra element for each of `dz` and `dz̄`.
    pub fn value(&self) -> (LieValue, LieValue) {
        let v = |f: fn(&OneFormVal) -> C64| {
            LieValue::new(f(&self.t0.value()), f(&self.tp.value()), f(&self.tm.value()), self.c)
        };
        (v(|w| w.a), v(|w| w.b))
    }

    /// `dα + ½[α∧α]`, where for `α = Σ αₐ tₐ` the bracket term is
    /// `½ Σ_{a,b} (αₐ∧α_b)[tₐ, t_b]`.
    pub fn curvature(&self) -> Result<LieValuedTwoForm> {
        let mut acc = LieValue::new(
            exterior_d(&self.t0).c,
            exterior_d(&self.tp).c,
            exterior_d(&self.tm).c,
            self.c,
        );
        let comps = self.components();
        for (fa, ta) in &comps {
            for (fb, tb) in &comps {
                let w = wedge(fa, fb).c * 0.5;
                acc = acc.add(&ta.bracket(tb)?.scale(w));
            }
        }
        Ok(LieValuedTwoForm {
            t0: TwoFormVal::new(acc.a0),
            tp: TwoFormVal::new(acc.ap),
            tm: TwoFormVal::new(acc.am),
            c: self.c,
        })
    }

    /// Largest departure from the real form over both chart components.
    pub fn reality_defect(&self) -> f64 {
        let t0 = self.t0.value().reality_defect();
        let pm = (self.tp.value() - self.tm.value().conj()).norm();
        t0.max(pm)
    }
}

/// `Â = -Γ t₀ + (i/2)√κ (e t₋ - ē t₊)` on the chart of `spec`.
pub fn ahat(spec: &SurfaceSpec, p: CPoint) -> Result<LieValuedOneForm> {
    let e = spec.coframe(p)?;
    let gamma = spec.spin_connection(p)?;
    let k = c(0.0, 0.5 * spec.kappa().sqrt());
    let tm = e.scale(k);
    Ok(LieValuedOneForm {
        t0: -gamma,
        tp: tm.conj(),
        tm,
        c: spec.curvature_sign(),
    })
}

/// `f*Â = -(nA + Γ₀) t₀ + (i/2)√κ (φⁿ e₀ t₋ - φ̄ⁿ ē₀ t₊)` assembled from the
/// fields of a configuration.
pub fn pullback_ahat<G: GaugeConfiguration + ?Sized>(cfg: &G, p: CPoint) -> Result<LieValuedOneForm> {
    let fam = cfg.family();
    let source = fam.source();
    let phi = cfg.higgs_field(p)?;
    let a = cfg.gauge_potential(p)?;
    let gamma = source.spin_connection(p)?;
    let e = source.coframe(p)?;
    let k = c(0.0, 0.5 * source.kappa().sqrt());
    let tm = e.times(phi.first_order()).scale(k);
    Ok(LieValuedOneForm {
        t0: -(a.scale(fam.n().into()) + gamma),
        tp: tm.conj(),
        tm,
        c: fam.c2n(),
    })
}

/// Largest mismatch between the curvature of `f*Â` and its expression
/// through the vortex residuals: `t₀ ↦ -n·R₂`, `t₋ ↦ (i√κ/2)·n·R₁` with `R₁`
/// the reduced self-dual residual, and `t₊ ↦ -conj(t₋)`.
pub fn flatness_decomposition<G: GaugeConfiguration + ?Sized>(cfg: &G, p: CPoint) -> Result<f64> {
    let fam = cfg.family();
    let n = fam.n();
    let k = c(0.0, 0.5 * fam.source().kappa().sqrt());
    let f = pullback_ahat(cfg, p)?.curvature()?;
    let r2 = cfg.residual_vortex2(p)?;
    let r1 = cfg.residual_selfdual_reduced(p)?;
    let d0 = (f.t0.c + r2 * n).norm();
    let dm = (f.tm.c - k * n * r1).norm();
    let dp = (f.tp.c + f.tm.c.conj()).norm();
    Ok(d0.max(dm).max(dp))
}

/// Pull a pointwise one-form on the target back through a holomorphic map:
/// `f*(α du + β dū) = α f' dz + β conj(f') dz̄`.
pub fn pullback_through(form: &OneFormVal, fprime: C64) -> OneFormVal {
    OneFormVal::new(form.a * fprime, form.b * fprime.conj())
}

/// `f*Â` computed by evaluating `Â` at `f(p)` on the target chart and pulling
/// back with the chain rule. Only pointwise values are available this way.
pub fn pullback_ahat_direct(target: &SurfaceSpec, map: &RationalMap, p: CPoint) -> Result<[OneFormVal; 3]> {
    let [f, fp, _, _] = map.holomorphic_derivatives(p.z)?;
    let u = CPoint::new(f)?;
    let a = ahat(target, u)?;
    Ok([
        pullback_through(&a.t0.value(), fp),
        pullback_through(&a.tp.value(), fp),
        pullback_through(&a.tm.value(), fp),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::GeometryMode;
    use crate::rational::Poly;
    use crate::vortex::{VortexFamily, VortexSolution};

    #[test]
    fn brackets_of_basis() {
        let [t0, tp, tm] = LieValue::basis(1);
        let b = tp.bracket(&tm).unwrap();
        assert_eq!(b, LieValue::new(c(0.0, -2.0), C64::default(), C64::default(), 1));
        let b = t0.bracket(&tp).unwrap();
        assert_eq!(b, LieValue::new(C64::default(), c(0.0, -1.0), C64::default(), 1));
        assert!(matches!(t0.bracket(&LieValue::t0(-1)), Err(Error::MixedAlgebra(1, -1))));
    }

    #[test]
    fn matrix_representation_agrees() {
        for cc in [-1i8, 1] {
            let x = LieValue::new(c(0.3, -0.2), c(1.1, 0.4), c(-0.5, 0.7), cc);
            let y = LieValue::new(c(-0.8, 0.1), c(0.2, -0.9), c(0.6, 0.3), cc);
            let (mx, my) = (x.to_matrix(), y.to_matrix());
            let comm = mx * my - my * mx;
            let diff = comm - x.bracket(&y).unwrap().to_matrix();
            assert!(diff.iter().all(|d| d.norm() < 1e-14));
        }
    }

    #[test]
    fn ahat_at_origin() {
        let spec = SurfaceSpec::fixed(1).unwrap();
        let a = ahat(&spec, CPoint::from_re_im(0.0, 0.0).unwrap()).unwrap();
        assert!(a.t0.value().norm() < 1e-15);
        assert!((a.tm.value().a - I).norm() < 1e-15 && a.tm.value().b.norm() < 1e-15);
        assert!((a.tp.value().b + I).norm() < 1e-15 && a.tp.value().a.norm() < 1e-15);
    }

    #[test]
    fn ahat_is_flat() {
        for cc in [-1, 0, 1] {
            for (mode, n) in [(GeometryMode::Fixed, 1.0), (GeometryMode::Normalised, 3.0)] {
                let spec = SurfaceSpec::new(cc, mode, n).unwrap();
                let p = CPoint::new(c(0.21, -0.17)).unwrap();
                let a = ahat(&spec, p).unwrap();
                assert!(a.curvature().unwrap().max_norm() < 1e-12);
                assert!(a.reality_defect() < 1e-15);
            }
        }
    }

    #[test]
    fn curvature_splits_into_vortex_residuals() {
        use crate::vortex::Perturbed;
        for mode in [GeometryMode::Fixed, GeometryMode::Normalised] {
            for (c0, c2n, n) in [(1, 1, 1.0), (-1, 1, 2.0), (0, 1, 1.5)] {
                let fam = VortexFamily::new(c0, c2n, n, mode).unwrap();
                let map = RationalMap::polynomial(Poly::from_real(&[0.0, 0.0, 0.3])).unwrap();
                let sol = VortexSolution::new(fam, map).unwrap();
                let bent = Perturbed::new(&sol, |p: CPoint| {
                    let a = crate::jets::Jet2::coordinate(p).conj() * c(0.2, 0.1);
                    OneForm::new(a.first_order(), a.conj().first_order())
                });
                let p = CPoint::new(c(0.3, 0.2)).unwrap();
                let r = bent.residual_vortex2(p).unwrap().norm() + bent.residual_selfdual(p).unwrap().norm();
                assert!(r > 1e-2);
                assert!(flatness_decomposition(&bent, p).unwrap() < 1e-12);
                assert!(flatness_decomposition(&sol, p).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn pullback_matches_direct_chain_rule() {
        let fam = VortexFamily::new(1, 1, 2.0, GeometryMode::Fixed).unwrap();
        let map = RationalMap::polynomial(Poly::from_real(&[0.0, -3.0, 0.0, 1.0])).unwrap();
        let sol = VortexSolution::new(fam, map.clone()).unwrap();
        let p = CPoint::new(c(0.4, 0.3)).unwrap();
        let assembled = pullback_ahat(&sol, p).unwrap();
        let direct = pullback_ahat_direct(&fam.target(), &map, p).unwrap();
        let got = [assembled.t0.value(), assembled.tp.value(), assembled.tm.value()];
        for (g, d) in got.iter().zip(direct.iter()) {
            assert!((*g - *d).norm() < 1e-10, "{g:?} vs {d:?}");
        }
    }
}
