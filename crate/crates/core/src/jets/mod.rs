//! Wirtinger jets: exact first and second derivatives of complex scalar
//! fields, with `z` and `z̄` treated as independent variables.
//!
//! [`Jet2`] carries a field through second order in one complex variable,
//! [`Jet1`] through first order. Differential forms on a chart are built from
//! them: [`OneForm`] holds `Jet1` coefficients of `dz` and `dz̄` so that
//! [`exterior_d`] can be taken, while [`OneFormVal`] and [`TwoFormVal`] are the
//! pointwise values.
//!
//! The two-variable jets used on the group manifold live in [`group`].

pub mod group;

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub(crate) const I: C64 = C64::new(0.0, 1.0);

pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub(crate) fn is_finite(z: C64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// A point on a complex chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CPoint {
    pub z: C64,
}

impl CPoint {
    pub fn new(z: C64) -> Result<Self> {
        if !is_finite(z) {
            return Err(Error::NonFinite("chart point"));
        }
        Ok(Self { z })
    }

    pub fn from_re_im(re: f64, im: f64) -> Result<Self> {
        Self::new(c(re, im))
    }

    /// Unchecked constructor for points produced internally from finite data.
    pub(crate) fn at(z: C64) -> Self {
        Self { z }
    }
}

/// Elementary operations that can be composed onto a jet.
///
/// Binary operations (`add`, `mul`, `div`) are the arithmetic operators on
/// [`Jet2`]; constants and coordinates are the [`Jet2::constant`] and
/// [`Jet2::coordinate`] constructors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Elementary {
    Identity,
    Conj,
    Log,
    Sqrt,
    /// Principal-branch power with a real exponent.
    Pow(f64),
    Exp,
    Recip,
    ModulusSquared,
}

/// Apply `outer` to `inner` through second order.
pub fn jet_compose(outer: Elementary, inner: &Jet2) -> Result<Jet2> {
    inner.compose(outer)
}

/// Second-order Wirtinger jet of a scalar field in one complex variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet2 {
    pub v: C64,
    pub dz: C64,
    pub dzbar: C64,
    pub dzdzbar: C64,
    pub dzdz: C64,
    pub dzbardzbar: C64,
}

impl Jet2 {
    pub const ZERO: Jet2 = Jet2::constant(C64::new(0.0, 0.0));

    pub const fn constant(v: C64) -> Self {
        let zero = C64::new(0.0, 0.0);
        Self {
            v,
            dz: zero,
            dzbar: zero,
            dzdzbar: zero,
            dzdz: zero,
            dzbardzbar: zero,
        }
    }

    pub fn real(v: f64) -> Self {
        Self::constant(c(v, 0.0))
    }

    /// The coordinate function `z` evaluated at `p`.
    pub fn coordinate(p: CPoint) -> Self {
        Self {
            dz: c(1.0, 0.0),
            ..Self::constant(p.z)
        }
    }

    /// The conjugate coordinate `z̄` evaluated at `p`.
    pub fn coordinate_conj(p: CPoint) -> Self {
        Self::coordinate(p).conj()
    }

    /// Jet of a holomorphic function given its value and first two derivatives.
    pub fn holomorphic(v: C64, d1: C64, d2: C64) -> Self {
        Self {
            dz: d1,
            dzdz: d2,
            ..Self::constant(v)
        }
    }

    pub fn is_finite(&self) -> bool {
        [self.v, self.dz, self.dzbar, self.dzdzbar, self.dzdz, self.dzbardzbar]
            .into_iter()
            .all(is_finite)
    }

    pub fn conj(&self) -> Self {
        Self {
            v: self.v.conj(),
            dz: self.dzbar.conj(),
            dzbar: self.dz.conj(),
            dzdzbar: self.dzdzbar.conj(),
            dzdz: self.dzbardzbar.conj(),
            dzbardzbar: self.dzdz.conj(),
        }
    }

    pub fn modulus_squared(&self) -> Self {
        *self * self.conj()
    }

    pub fn scale(&self, k: C64) -> Self {
        Self {
            v: self.v * k,
            dz: self.dz * k,
            dzbar: self.dzbar * k,
            dzdzbar: self.dzdzbar * k,
            dzdz: self.dzdz * k,
            dzbardzbar: self.dzbardzbar * k,
        }
    }

    /// Chain rule for a holomorphic outer function with value `g0` and
    /// derivatives `g1`, `g2` at `self.v`.
    pub fn chain(&self, g0: C64, g1: C64, g2: C64) -> Self {
        Self {
            v: g0,
            dz: g1 * self.dz,
            dzbar: g1 * self.dzbar,
            dzdzbar: g2 * self.dz * self.dzbar + g1 * self.dzdzbar,
            dzdz: g2 * self.dz * self.dz + g1 * self.dzdz,
            dzbardzbar: g2 * self.dzbar * self.dzbar + g1 * self.dzbardzbar,
        }
    }

    pub fn compose(&self, outer: Elementary) -> Result<Self> {
        let u = self.v;
        let out = match outer {
            Elementary::Identity => *self,
            Elementary::Conj => self.conj(),
            Elementary::ModulusSquared => self.modulus_squared(),
            Elementary::Exp => {
                let e = u.exp();
                self.chain(e, e, e)
            }
            Elementary::Log => {
                nonzero(u, "log")?;
                let r = u.inv();
                self.chain(u.ln(), r, -r * r)
            }
            Elementary::Recip => {
                nonzero(u, "reciprocal")?;
                let r = u.inv();
                self.chain(r, -r * r, 2.0 * r * r * r)
            }
            Elementary::Sqrt => return self.compose(Elementary::Pow(0.5)),
            Elementary::Pow(p) => {
                if p == 0.0 {
                    Self::real(1.0)
                } else if p.fract() == 0.0 && p > 0.0 && p <= i32::MAX as f64 {
                    let k = p as i32;
                    let d1 = if k >= 1 { p * u.powi(k - 1) } else { C64::default() };
                    let d2 = if k >= 2 {
                        p * (p - 1.0) * u.powi(k - 2)
                    } else {
                        C64::default()
                    };
                    self.chain(u.powi(k), d1, d2)
                } else {
                    nonzero(u, "power")?;
                    let g0 = (p * u.ln()).exp();
                    let r = u.inv();
                    self.chain(g0, p * g0 * r, p * (p - 1.0) * g0 * r * r)
                }
            }
        };
        if !out.is_finite() {
            return Err(Error::SingularPoint(outer_name(outer)));
        }
        Ok(out)
    }

    pub fn ln(&self) -> Result<Self> {
        self.compose(Elementary::Log)
    }

    pub fn exp(&self) -> Self {
        let e = self.v.exp();
        self.chain(e, e, e)
    }

    pub fn powf(&self, p: f64) -> Result<Self> {
        self.compose(Elementary::Pow(p))
    }

    pub fn sqrt(&self) -> Result<Self> {
        self.compose(Elementary::Sqrt)
    }

    pub fn recip(&self) -> Result<Self> {
        self.compose(Elementary::Recip)
    }

    /// Checked division; fails where the divisor vanishes.
    pub fn try_div(&self, rhs: &Self) -> Result<Self> {
        Ok(*self * rhs.recip()?)
    }

    /// Truncation to first order.
    pub fn first_order(&self) -> Jet1 {
        Jet1 {
            v: self.v,
            dz: self.dz,
            dzbar: self.dzbar,
        }
    }

    /// `∂_z` of the field, as a first-order jet.
    pub fn d_z(&self) -> Jet1 {
        Jet1 {
            v: self.dz,
            dz: self.dzdz,
            dzbar: self.dzdzbar,
        }
    }

    /// `∂_z̄` of the field, as a first-order jet.
    pub fn d_zbar(&self) -> Jet1 {
        Jet1 {
            v: self.dzbar,
            dz: self.dzdzbar,
            dzbar: self.dzbardzbar,
        }
    }
}

fn nonzero(u: C64, what: &'static str) -> Result<()> {
    if u.norm() == 0.0 {
        Err(Error::SingularPoint(what))
    } else {
        Ok(())
    }
}

fn outer_name(e: Elementary) -> &'static str {
    match e {
        Elementary::Identity => "identity",
        Elementary::Conj => "conj",
        Elementary::Log => "log",
        Elementary::Sqrt => "sqrt",
        Elementary::Pow(_) => "power",
        Elementary::Exp => "exp",
        Elementary::Recip => "reciprocal",
        Elementary::ModulusSquared => "modulus squared",
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    fn add(self, r: Jet2) -> Jet2 {
        Jet2 {
            v: self.v + r.v,
            dz: self.dz + r.dz,
            dzbar: self.dzbar + r.dzbar,
            dzdzbar: self.dzdzbar + r.dzdzbar,
            dzdz: self.dzdz + r.dzdz,
            dzbardzbar: self.dzbardzbar + r.dzbardzbar,
        }
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, r: Jet2) -> Jet2 {
        self + (-r)
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        self.scale(c(-1.0, 0.0))
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, r: Jet2) -> Jet2 {
        let a = self;
        Jet2 {
            v: a.v * r.v,
            dz: a.dz * r.v + a.v * r.dz,
            dzbar: a.dzbar * r.v + a.v * r.dzbar,
            dzdzbar: a.dzdzbar * r.v + a.dz * r.dzbar + a.dzbar * r.dz + a.v * r.dzdzbar,
            dzdz: a.dzdz * r.v + 2.0 * a.dz * r.dz + a.v * r.dzdz,
            dzbardzbar: a.dzbardzbar * r.v + 2.0 * a.dzbar * r.dzbar + a.v * r.dzbardzbar,
        }
    }
}

/// Unchecked division: a zero divisor yields non-finite entries. Use
/// [`Jet2::try_div`] where the divisor can vanish.
impl Div for Jet2 {
    type Output = Jet2;
    fn div(self, r: Jet2) -> Jet2 {
        let inv = r.v.inv();
        self * r.chain(inv, -inv * inv, 2.0 * inv * inv * inv)
    }
}

impl Add<C64> for Jet2 {
    type Output = Jet2;
    fn add(mut self, k: C64) -> Jet2 {
        self.v += k;
        self
    }
}

impl Add<f64> for Jet2 {
    type Output = Jet2;
    fn add(self, k: f64) -> Jet2 {
        self + c(k, 0.0)
    }
}

impl Mul<C64> for Jet2 {
    type Output = Jet2;
    fn mul(self, k: C64) -> Jet2 {
        self.scale(k)
    }
}

impl Mul<f64> for Jet2 {
    type Output = Jet2;
    fn mul(self, k: f64) -> Jet2 {
        self.scale(c(k, 0.0))
    }
}

/// First-order Wirtinger jet.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet1 {
    pub v: C64,
    pub dz: C64,
    pub dzbar: C64,
}

impl Jet1 {
    pub const fn constant(v: C64) -> Self {
        Self {
            v,
            dz: C64::new(0.0, 0.0),
            dzbar: C64::new(0.0, 0.0),
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            v: self.v.conj(),
            dz: self.dzbar.conj(),
            dzbar: self.dz.conj(),
        }
    }

    pub fn scale(&self, k: C64) -> Self {
        Self {
            v: self.v * k,
            dz: self.dz * k,
            dzbar: self.dzbar * k,
        }
    }

    pub fn is_finite(&self) -> bool {
        is_finite(self.v) && is_finite(self.dz) && is_finite(self.dzbar)
    }
}

impl Add for Jet1 {
    type Output = Jet1;
    fn add(self, r: Jet1) -> Jet1 {
        Jet1 {
            v: self.v + r.v,
            dz: self.dz + r.dz,
            dzbar: self.dzbar + r.dzbar,
        }
    }
}

impl Sub for Jet1 {
    type Output = Jet1;
    fn sub(self, r: Jet1) -> Jet1 {
        Jet1 {
            v: self.v - r.v,
            dz: self.dz - r.dz,
            dzbar: self.dzbar - r.dzbar,
        }
    }
}

impl Neg for Jet1 {
    type Output = Jet1;
    fn neg(self) -> Jet1 {
        self.scale(c(-1.0, 0.0))
    }
}

impl Mul for Jet1 {
    type Output = Jet1;
    fn mul(self, r: Jet1) -> Jet1 {
        Jet1 {
            v: self.v * r.v,
            dz: self.dz * r.v + self.v * r.dz,
            dzbar: self.dzbar * r.v + self.v * r.dzbar,
        }
    }
}

impl Mul<C64> for Jet1 {
    type Output = Jet1;
    fn mul(self, k: C64) -> Jet1 {
        self.scale(k)
    }
}

impl Mul<f64> for Jet1 {
    type Output = Jet1;
    fn mul(self, k: f64) -> Jet1 {
        self.scale(c(k, 0.0))
    }
}

impl From<Jet2> for Jet1 {
    fn from(j: Jet2) -> Jet1 {
        j.first_order()
    }
}

/// Pointwise value of a one-form `a dz + b dz̄`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct OneFormVal {
    pub a: C64,
    pub b: C64,
}

impl OneFormVal {
    pub fn new(a: C64, b: C64) -> Self {
        Self { a, b }
    }

    pub fn dz() -> Self {
        Self::new(c(1.0, 0.0), C64::default())
    }

    pub fn dzbar() -> Self {
        Self::new(C64::default(), c(1.0, 0.0))
    }

    /// Complex conjugate form: `conj(b) dz + conj(a) dz̄`.
    pub fn conj(&self) -> Self {
        Self::new(self.b.conj(), self.a.conj())
    }

    pub fn scale(&self, k: C64) -> Self {
        Self::new(self.a * k, self.b * k)
    }

    /// Distance from the nearest real one-form, `|b - conj(a)|`.
    pub fn reality_defect(&self) -> f64 {
        (self.b - self.a.conj()).norm()
    }

    pub fn norm(&self) -> f64 {
        self.a.norm().max(self.b.norm())
    }
}

impl Add for OneFormVal {
    type Output = OneFormVal;
    fn add(self, r: OneFormVal) -> OneFormVal {
        OneFormVal::new(self.a + r.a, self.b + r.b)
    }
}

impl Sub for OneFormVal {
    type Output = OneFormVal;
    fn sub(self, r: OneFormVal) -> OneFormVal {
        OneFormVal::new(self.a - r.a, self.b - r.b)
    }
}

/// Pointwise value of a two-form `c dz∧dz̄`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TwoFormVal {
    pub c: C64,
}

impl TwoFormVal {
    pub fn new(c: C64) -> Self {
        Self { c }
    }

    pub fn norm(&self) -> f64 {
        self.c.norm()
    }

    pub fn scale(&self, k: C64) -> Self {
        Self::new(self.c * k)
    }

    /// Density with respect to `dx∧dy` (since `dz∧dz̄ = -2i dx∧dy`).
    pub fn area_density(&self) -> C64 {
        -2.0 * I * self.c
    }
}

impl Add for TwoFormVal {
    type Output = TwoFormVal;
    fn add(self, r: TwoFormVal) -> TwoFormVal {
        TwoFormVal::new(self.c + r.c)
    }
}

impl Sub for TwoFormVal {
    type Output = TwoFormVal;
    fn sub(self, r: TwoFormVal) -> TwoFormVal {
        TwoFormVal::new(self.c - r.c)
    }
}

/// One-form whose coefficients carry first-order jets, so that it can be
/// differentiated once.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct OneForm {
    pub dz: Jet1,
    pub dzbar: Jet1,
}

impl OneForm {
    pub fn new(dz: Jet1, dzbar: Jet1) -> Self {
        Self { dz, dzbar }
    }

    /// The differential `df` of a scalar field.
    pub fn gradient(f: &Jet2) -> Self {
        Self::new(f.d_z(), f.d_zbar())
    }

    pub fn value(&self) -> OneFormVal {
        OneFormVal::new(self.dz.v, self.dzbar.v)
    }

    pub fn conj(&self) -> Self {
        Self::new(self.dzbar.conj(), self.dz.conj())
    }

    pub fn scale(&self, k: C64) -> Self {
        Self::new(self.dz * k, self.dzbar * k)
    }

    /// Multiply by a scalar field (product rule on the coefficients).
    pub fn times(&self, f: Jet1) -> Self {
        Self::new(self.dz * f, self.dzbar * f)
    }

    pub fn is_finite(&self) -> bool {
        self.dz.is_finite() && self.dzbar.is_finite()
    }
}

impl Add for OneForm {
    type Output = OneForm;
    fn add(self, r: OneForm) -> OneForm {
        OneForm::new(self.dz + r.dz, self.dzbar + r.dzbar)
    }
}

impl Sub for OneForm {
    type Output = OneForm;
    fn sub(self, r: OneForm) -> OneForm {
        OneForm::new(self.dz - r.dz, self.dzbar - r.dzbar)
    }
}

impl Neg for OneForm {
    type Output = OneForm;
    fn neg(self) -> OneForm {
        OneForm::new(-self.dz, -self.dzbar)
    }
}

/// `d(a dz + b dz̄) = (∂_z b - ∂_z̄ a) dz∧dz̄`.
pub fn exterior_d(form: &OneForm) -> TwoFormVal {
    TwoFormVal::new(form.dzbar.dz - form.dz.dzbar)
}

/// `p∧q` for pointwise one-forms.
pub fn wedge(p: &OneFormVal, q: &OneFormVal) -> TwoFormVal {
    TwoFormVal::new(p.a * q.b - p.b * q.a)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    /// Central differences in Re z and Im z, converted to Wirtinger derivatives.
    fn fd_wirtinger(f: impl Fn(C64) -> C64, z: C64, h: f64) -> (C64, C64) {
        let fx = (f(z + c(h, 0.0)) - f(z - c(h, 0.0))) / (2.0 * h);
        let fy = (f(z + c(0.0, h)) - f(z - c(0.0, h))) / (2.0 * h);
        ((fx - I * fy) * 0.5, (fx + I * fy) * 0.5)
    }

    #[test]
    fn identity_tag_returns_same_jet() {
        let p = CPoint::at(c(0.3, -0.7));
        let j = Jet2::coordinate(p) * Jet2::coordinate_conj(p) + 2.0;
        assert_eq!(jet_compose(Elementary::Identity, &j).unwrap(), j);
    }

    #[test]
    fn log_of_coordinate_at_one() {
        let j = Jet2::coordinate(CPoint::at(c(1.0, 0.0)));
        let l = jet_compose(Elementary::Log, &j).unwrap();
        assert!(close(l.v, C64::default(), 0.0));
        assert!(close(l.dz, c(1.0, 0.0), 0.0));
        assert!(close(l.dzdz, c(-1.0, 0.0), 0.0));
        assert!(close(l.dzbar, C64::default(), 0.0));
    }

    #[test]
    fn log_at_zero_is_singular() {
        let j = Jet2::coordinate(CPoint::at(C64::default()));
        assert!(matches!(jet_compose(Elementary::Log, &j), Err(Error::SingularPoint(_))));
        assert!(j.powf(0.5).is_err());
        // Non-negative integer powers are entire.
        assert_eq!(j.powf(2.0).unwrap().dzdz, c(2.0, 0.0));
    }

    #[test]
    fn closed_holomorphic_form_has_zero_derivative() {
        let p = CPoint::at(c(0.4, 0.9));
        let z = Jet2::coordinate(p);
        let a = (z * z * z + z).first_order();
        let form = OneForm::new(a, Jet1::default());
        assert_eq!(exterior_d(&form).c, C64::default());
    }

    #[test]
    fn zbar_dz_has_derivative_minus_one() {
        let p = CPoint::at(c(-1.2, 0.5));
        let zb = Jet2::coordinate_conj(p).first_order();
        let form = OneForm::new(zb, Jet1::default());
        assert_eq!(exterior_d(&form).c, c(-1.0, 0.0));
    }

    #[test]
    fn wedge_basis_cases() {
        let dz = OneFormVal::dz();
        let dzb = OneFormVal::dzbar();
        assert_eq!(wedge(&dz, &dz).c, C64::default());
        assert_eq!(wedge(&dz, &dzb).c, c(1.0, 0.0));
        assert_eq!(wedge(&dzb, &dz).c, c(-1.0, 0.0));
    }

    #[test]
    fn chain_rule_matches_finite_differences() {
        let z0 = c(0.35, -0.6);
        let p = CPoint::at(z0);
        let build = |j: Jet2| -> Jet2 {
            let m = j.modulus_squared() + 1.0;
            let num = (j * j + c(0.5, 0.2)).powf(1.5).unwrap();
            (num / m).ln().unwrap() * j.conj()
        };
        let scalar = |z: C64| -> C64 {
            let m = z.norm_sqr() + 1.0;
            let num = ((z * z + c(0.5, 0.2)).ln() * 1.5).exp();
            (num / m).ln() * z.conj()
        };
        let jet = build(Jet2::coordinate(p));
        let h = 1e-5;
        let (fz, fzb) = fd_wirtinger(scalar, z0, h);
        assert!(close(jet.dz, fz, 1e-6 * (1.0 + fz.norm())));
        assert!(close(jet.dzbar, fzb, 1e-6 * (1.0 + fzb.norm())));
        // Second derivatives from differences of the exact first derivatives.
        let dz_of = |z: C64| build(Jet2::coordinate(CPoint::at(z))).dz;
        let dzb_of = |z: C64| build(Jet2::coordinate(CPoint::at(z))).dzbar;
        let (fzz, fzzb) = fd_wirtinger(dz_of, z0, h);
        let (_, fzbzb) = fd_wirtinger(dzb_of, z0, h);
        assert!(close(jet.dzdz, fzz, 1e-6 * (1.0 + fzz.norm())));
        assert!(close(jet.dzdzbar, fzzb, 1e-6 * (1.0 + fzzb.norm())));
        assert!(close(jet.dzbardzbar, fzbzb, 1e-6 * (1.0 + fzbzb.norm())));
    }

    #[test]
    fn conjugation_rule_is_exact() {
        let p = CPoint::at(c(0.2, 0.9));
        let z = Jet2::coordinate(p);
        let f = (z * z.conj() + 2.0).ln().unwrap() * z * z;
        let g = f.conj();
        assert_eq!(g.dz, f.dzbar.conj());
        assert_eq!(g.dzbar, f.dz.conj());
        assert_eq!(g.dzdz, f.dzbardzbar.conj());
        assert_eq!(g.dzdzbar, f.dzdzbar.conj());
    }

    #[test]
    fn sqrt_and_pow_agree() {
        let p = CPoint::at(c(1.3, 0.4));
        let f = Jet2::coordinate(p) * Jet2::coordinate_conj(p) + 1.0;
        let a = f.sqrt().unwrap();
        let b = f.powf(0.5).unwrap();
        assert_eq!(a, b);
        let sq = a * a;
        assert!(close(sq.dzdzbar, f.dzdzbar, 1e-14));
    }
}
