//! Complex polynomials and rational maps `f = f₂/f₁`, their Wronskians and
//! ramification points.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jets::{is_finite, CPoint, Jet2, C64};
use crate::roots::{find_roots, Root};

/// Relative tolerance below which `|f₁(z)|` counts as a pole.
pub const POLE_TOLERANCE: f64 = 1e-12;
/// Relative tolerance for a shared root of `f₁` and `f₂`.
pub const COPRIME_TOLERANCE: f64 = 1e-9;

/// Polynomial with complex coefficients in ascending degree.
///
/// Trailing zero coefficients are trimmed; the zero polynomial is `[0]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "Vec<C64>", into = "Vec<C64>")]
pub struct Poly {
    coeffs: Vec<C64>,
}

impl From<Vec<C64>> for Poly {
    fn from(v: Vec<C64>) -> Self {
        Poly::new(v)
    }
}

impl From<Poly> for Vec<C64> {
    fn from(p: Poly) -> Self {
        p.coeffs
    }
}

impl Poly {
    pub fn new(mut coeffs: Vec<C64>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|a| a.norm() == 0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(C64::default());
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&a| C64::new(a, 0.0)).collect())
    }

    pub fn constant(a: C64) -> Self {
        Self::new(vec![a])
    }

    /// `z^k`.
    pub fn monomial(k: usize) -> Self {
        let mut v = vec![C64::default(); k + 1];
        v[k] = C64::new(1.0, 0.0);
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].norm() == 0.0
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|&a| is_finite(a))
    }

    /// Sum of coefficient moduli.
    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|a| a.norm()).sum()
    }

    /// `Σ |a_k| |z|^k`, the natural scale for rounding in `eval(z)`.
    pub fn scale_at(&self, z: C64) -> f64 {
        let r = z.norm();
        self.coeffs.iter().rev().fold(0.0, |acc, a| acc * r + a.norm())
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.coeffs.iter().rev().fold(C64::default(), |acc, &a| acc * z + a)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::constant(C64::default());
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &a)| a * k as f64)
                .collect(),
        )
    }

    /// Taylor coefficients `p^{(k)}(z)/k!` for `k = 0..=order`.
    pub fn taylor(&self, z: C64, order: usize) -> Vec<C64> {
        // Repeated synthetic division by (x - z).
        let mut work: Vec<C64> = self.coeffs.clone();
        let mut out = Vec::with_capacity(order + 1);
        for _ in 0..=order {
            if work.is_empty() {
                out.push(C64::default());
                continue;
            }
            let mut acc = C64::default();
            let mut quotient = vec![C64::default(); work.len().saturating_sub(1)];
            for k in (0..work.len()).rev() {
                acc = acc * z + work[k];
                if k > 0 {
                    quotient[k - 1] = acc;
                }
            }
            out.push(acc);
            work = quotient;
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut v = vec![C64::default(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Poly::new(v)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let get = |p: &Poly, k: usize| p.coeffs.get(k).copied().unwrap_or_default();
        Poly::new((0..len).map(|k| get(self, k) - get(other, k)).collect())
    }

    pub fn scale(&self, k: C64) -> Poly {
        Poly::new(self.coeffs.iter().map(|&a| a * k).collect())
    }

    /// `p(s z)`.
    pub fn rescale_argument(&self, s: f64) -> Poly {
        let mut f = 1.0;
        Poly::new(
            self.coeffs
                .iter()
                .map(|&a| {
                    let out = a * f;
                    f *= s;
                    out
                })
                .collect(),
        )
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[Root]) -> Poly {
        let mut p = Poly::constant(C64::new(1.0, 0.0));
        for r in roots {
            let lin = Poly::new(vec![-r.value, C64::new(1.0, 0.0)]);
            for _ in 0..r.multiplicity {
                p = p.mul(&lin);
            }
        }
        p
    }
}

/// A ramification point and its order (`m` means the map is locally `(m+1)`-to-one).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RamificationPoint {
    pub location: C64,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RamificationSet {
    pub points: Vec<RamificationPoint>,
    /// Ramification order at `z = ∞`, from the degree deficit of the Wronskian.
    pub at_infinity: usize,
}

impl RamificationSet {
    pub fn total(&self) -> usize {
        self.points.iter().map(|p| p.multiplicity).sum::<usize>() + self.at_infinity
    }

    pub fn finite_total(&self) -> usize {
        self.points.iter().map(|p| p.multiplicity).sum()
    }
}

/// `f = f₂/f₁` with coprime `f₁`, `f₂`, not both constant.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalMap {
    f1: Poly,
    f2: Poly,
}

impl RationalMap {
    pub fn new(f1: Poly, f2: Poly) -> Result<Self> {
        if !f1.is_finite() || !f2.is_finite() {
            return Err(Error::NonFinite("polynomial coefficients"));
        }
        if f1.is_zero() {
            return Err(Error::InvalidConfiguration("denominator is the zero polynomial".into()));
        }
        if f1.degree() == 0 && f2.degree() == 0 {
            return Err(Error::DegenerateMap);
        }
        if f1.degree() > 0 && !f2.is_zero() {
            for r in find_roots(&f1)? {
                let scale = f2.scale_at(r.value).max(f64::MIN_POSITIVE);
                if f2.eval(r.value).norm() <= COPRIME_TOLERANCE * scale {
                    return Err(Error::NotCoprime(format!("{}", r.value)));
                }
            }
        }
        let m = Self { f1, f2 };
        if m.wronskian().is_zero() {
            return Err(Error::DegenerateMap);
        }
        Ok(m)
    }

    /// Polynomial map `f = f₂`.
    pub fn polynomial(f2: Poly) -> Result<Self> {
        Self::new(Poly::constant(C64::new(1.0, 0.0)), f2)
    }

    pub fn f1(&self) -> &Poly {
        &self.f1
    }

    pub fn f2(&self) -> &Poly {
        &self.f2
    }

    pub fn degree(&self) -> usize {
        self.f1.degree().max(self.f2.degree())
    }

    fn check_pole(&self, z: C64) -> Result<C64> {
        let d = self.f1.eval(z);
        let scale = self.f1.scale_at(C64::new(z.norm().max(1.0), 0.0));
        if d.norm() < POLE_TOLERANCE * scale {
            return Err(Error::PoleAtPoint);
        }
        Ok(d)
    }

    /// `[f, f′, f″, f‴]` at `z`, by series division of the Taylor expansions.
    pub fn holomorphic_derivatives(&self, z: C64) -> Result<[C64; 4]> {
        self.check_pole(z)?;
        let b = self.f1.taylor(z, 3);
        let a = self.f2.taylor(z, 3);
        // q = a / b as power series in (x - z).
        let mut q = [C64::default(); 4];
        for k in 0..4 {
            let mut s = a[k];
            for j in 0..k {
                s -= q[j] * b[k - j];
            }
            q[k] = s / b[0];
        }
        Ok([q[0], q[1], q[2] * 2.0, q[3] * 6.0])
    }

    pub fn eval(&self, z: C64) -> Result<C64> {
        let d = self.check_pole(z)?;
        Ok(self.f2.eval(z) / d)
    }

    /// Jet of `f` (holomorphic, so all `z̄` derivatives vanish).
    pub fn eval_jet(&self, p: CPoint) -> Result<Jet2> {
        let [f, f1, f2, _] = self.holomorphic_derivatives(p.z)?;
        Ok(Jet2::holomorphic(f, f1, f2))
    }

    /// Jet of `f′`.
    pub fn derivative_jet(&self, p: CPoint) -> Result<Jet2> {
        let [_, f1, f2, f3] = self.holomorphic_derivatives(p.z)?;
        Ok(Jet2::holomorphic(f1, f2, f3))
    }

    /// `f₁ f₂′ − f₂ f₁′`.
    /// `f₁f₂' - f₂f₁'`. Its degree is at most `2·deg f - 2`; leading
    /// coefficients that cancel only up to rounding are dropped, since they
    /// would otherwise show up as spurious roots far from the origin.
    pub fn wronskian(&self) -> Poly {
        let w = self
            .f1
            .mul(&self.f2.derivative())
            .sub(&self.f2.mul(&self.f1.derivative()));
        let cap = (2 * self.degree()).saturating_sub(2);
        let noise = 16.0 * f64::EPSILON * (self.degree() as f64) * self.f1.norm() * self.f2.norm();
        let mut coeffs: Vec<C64> = w.coeffs().iter().take(cap + 1).copied().collect();
        while coeffs.len() > 1 && coeffs.last().is_some_and(|a| a.norm() <= noise) {
            coeffs.pop();
        }
        Poly::new(coeffs)
    }

    pub fn ramification_points(&self) -> Result<RamificationSet> {
        let w = self.wronskian();
        if w.is_zero() {
            return Err(Error::DegenerateMap);
        }
        let points = if w.degree() == 0 {
            Vec::new()
        } else {
            find_roots(&w)?
                .into_iter()
                .map(|r| RamificationPoint {
                    location: r.value,
                    multiplicity: r.multiplicity,
                })
                .collect()
        };
        let expected = 2 * self.degree() - 2;
        Ok(RamificationSet {
            points,
            at_infinity: expected.saturating_sub(w.degree()),
        })
    }

    /// Finite poles of `f` (roots of `f₁`).
    pub fn poles(&self) -> Result<Vec<Root>> {
        if self.f1.degree() == 0 {
            return Ok(Vec::new());
        }
        find_roots(&self.f1)
    }

    /// `g(z) = √s · f(z/√s)`: the same map written in coordinates scaled by `√s`
    /// on both source and target.
    pub fn rescaled(&self, s: f64) -> Result<Self> {
        let r = s.sqrt();
        Self::new(
            self.f1.rescale_argument(1.0 / r),
            self.f2.rescale_argument(1.0 / r).scale(C64::new(r, 0.0)),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jets::c;

    fn z_pow(k: usize) -> RationalMap {
        RationalMap::polynomial(Poly::monomial(k)).unwrap()
    }

    #[test]
    fn eval_jet_examples() {
        let j = z_pow(1).eval_jet(CPoint::at(c(2.0, 0.0))).unwrap();
        assert_eq!((j.v, j.dz), (c(2.0, 0.0), c(1.0, 0.0)));
        let j = z_pow(2).eval_jet(CPoint::at(c(1.0, 0.0))).unwrap();
        assert_eq!((j.v, j.dz, j.dzdz), (c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0)));
        let inv = RationalMap::new(Poly::monomial(1), Poly::from_real(&[1.0])).unwrap();
        assert!(matches!(
            inv.eval_jet(CPoint::at(C64::default())),
            Err(Error::PoleAtPoint)
        ));
    }

    #[test]
    fn wronskian_examples() {
        assert_eq!(z_pow(2).wronskian(), Poly::from_real(&[0.0, 2.0]));
        assert_eq!(z_pow(1).wronskian(), Poly::from_real(&[1.0]));
        let f = RationalMap::new(Poly::monomial(1), Poly::from_real(&[-1.0, 0.0, 1.0])).unwrap();
        assert_eq!(f.wronskian(), Poly::from_real(&[1.0, 0.0, 1.0]));
    }

    #[test]
    fn ramification_examples() {
        let r = z_pow(2).ramification_points().unwrap();
        assert_eq!(r.points.len(), 1);
        assert_eq!(r.points[0].multiplicity, 1);
        assert_eq!(r.at_infinity, 1);
        assert_eq!(r.total(), 2);

        let cubic = RationalMap::polynomial(Poly::from_real(&[0.0, -3.0, 0.0, 1.0])).unwrap();
        let r = cubic.ramification_points().unwrap();
        let mut locs: Vec<f64> = r.points.iter().map(|p| p.location.re).collect();
        locs.sort_by(f64::total_cmp);
        assert!((locs[0] + 1.0).abs() < 1e-12 && (locs[1] - 1.0).abs() < 1e-12);
        assert_eq!(r.at_infinity, 2);
        assert_eq!(r.total(), 4);

        let id = z_pow(1).ramification_points().unwrap();
        assert!(id.points.is_empty() && id.total() == 0);
    }

    #[test]
    fn construction_errors() {
        let common = RationalMap::new(Poly::from_real(&[-1.0, 1.0]), Poly::from_real(&[-1.0, 0.0, 1.0]));
        assert!(matches!(common, Err(Error::NotCoprime(_))));
        let constant = RationalMap::new(Poly::from_real(&[2.0]), Poly::from_real(&[3.0]));
        assert!(matches!(constant, Err(Error::DegenerateMap)));
    }

    #[test]
    fn taylor_coefficients() {
        let p = Poly::from_real(&[1.0, 2.0, 3.0]);
        let t = p.taylor(c(1.0, 0.0), 3);
        assert_eq!(t, vec![c(6.0, 0.0), c(8.0, 0.0), c(3.0, 0.0), c(0.0, 0.0)]);
    }

    #[test]
    fn rescaling_conjugates_by_dilation() {
        let f = RationalMap::new(Poly::from_real(&[1.0, 0.5]), Poly::from_real(&[0.0, 0.0, 1.0])).unwrap();
        let g = f.rescaled(4.0).unwrap();
        let z = c(0.3, -0.7);
        let lhs = g.eval(z).unwrap();
        let rhs = f.eval(z / 2.0).unwrap() * 2.0;
        assert!((lhs - rhs).norm() < 1e-14);
    }
}
