//! Jets in two complex variables `(z₁, z₂)` and their conjugates.
//!
//! Slots are ordered `[z₁, z₂, z̄₁, z̄₂]`; conjugation swaps slot `i` with
//! slot `(i + 2) % 4`. Vector fields with coefficients linear in the
//! coordinates (the left-invariant fields on the group manifolds) act on a
//! [`BiJet2`] to give an exact [`BiJet1`] of the derivative.

use std::ops::{Add, Mul, Neg, Sub};

use super::{c, is_finite, C64};
use crate::error::{Error, Result};

const N: usize = 4;

#[inline]
fn partner(i: usize) -> usize {
    (i + 2) % N
}

fn zero() -> C64 {
    C64::default()
}

/// A complexified tangent vector, given by its components on
/// `∂₁, ∂₂, ∂̄₁, ∂̄₂` (equivalently the values of `dz₁, dz₂, dz̄₁, dz̄₂`).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Tangent {
    pub d: [C64; N],
}

impl Tangent {
    pub fn new(dz1: C64, dz2: C64, dz1bar: C64, dz2bar: C64) -> Self {
        Self {
            d: [dz1, dz2, dz1bar, dz2bar],
        }
    }

    /// A real tangent vector with holomorphic velocity `(ż₁, ż₂)`.
    pub fn real(dz1: C64, dz2: C64) -> Self {
        Self::new(dz1, dz2, dz1.conj(), dz2.conj())
    }

    pub fn conj(&self) -> Self {
        let mut d = [zero(); N];
        for (i, slot) in d.iter_mut().enumerate() {
            *slot = self.d[partner(i)].conj();
        }
        Self { d }
    }

    pub fn scale(&self, k: C64) -> Self {
        Self {
            d: self.d.map(|x| x * k),
        }
    }
}

impl Add for Tangent {
    type Output = Tangent;
    fn add(self, r: Tangent) -> Tangent {
        let mut d = self.d;
        for (a, b) in d.iter_mut().zip(r.d) {
            *a += b;
        }
        Tangent { d }
    }
}

impl Sub for Tangent {
    type Output = Tangent;
    fn sub(self, r: Tangent) -> Tangent {
        self + r.scale(c(-1.0, 0.0))
    }
}

/// A vector field `Σ kᵢ ∂ᵢ` whose coefficients are linear in the
/// coordinates, `k = M·(z₁, z₂, z̄₁, z̄₂)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearField {
    pub m: [[C64; N]; N],
}

impl LinearField {
    pub fn at(&self, coords: &[C64; N]) -> Tangent {
        let mut d = [zero(); N];
        for (i, slot) in d.iter_mut().enumerate() {
            *slot = (0..N).map(|j| self.m[i][j] * coords[j]).sum();
        }
        Tangent { d }
    }

    /// Commutator `[X, Y]` of two linear fields, again linear: `[X,Y] = (M_Y M_X - M_X M_Y)`.
    pub fn bracket(&self, other: &LinearField) -> LinearField {
        let mut m = [[zero(); N]; N];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, slot) in row.iter_mut().enumerate() {
                let mut acc = zero();
                for k in 0..N {
                    acc += other.m[i][k] * self.m[k][j] - self.m[i][k] * other.m[k][j];
                }
                *slot = acc;
            }
        }
        LinearField { m }
    }

    pub fn scale(&self, s: C64) -> LinearField {
        LinearField {
            m: self.m.map(|row| row.map(|x| x * s)),
        }
    }

    pub fn max_abs_diff(&self, other: &LinearField) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..N {
            for j in 0..N {
                worst = worst.max((self.m[i][j] - other.m[i][j]).norm());
            }
        }
        worst
    }

    /// Apply to a second-order jet, returning the first-order jet of `X f`.
    pub fn apply(&self, f: &BiJet2, coords: &[C64; N]) -> BiJet1 {
        let k = self.at(coords);
        let v = (0..N).map(|i| k.d[i] * f.grad[i]).sum();
        let mut grad = [zero(); N];
        for (j, slot) in grad.iter_mut().enumerate() {
            let mut acc = zero();
            for i in 0..N {
                acc += self.m[i][j] * f.grad[i] + k.d[i] * f.hess[i][j];
            }
            *slot = acc;
        }
        BiJet1 { v, grad }
    }

    /// Apply to a first-order jet, returning the value of `X f`.
    pub fn apply1(&self, f: &BiJet1, coords: &[C64; N]) -> C64 {
        f.along(&self.at(coords))
    }
}

/// Second-order jet in `(z₁, z₂, z̄₁, z̄₂)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiJet2 {
    pub v: C64,
    pub grad: [C64; N],
    pub hess: [[C64; N]; N],
}

impl BiJet2 {
    pub fn constant(v: C64) -> Self {
        Self {
            v,
            grad: [zero(); N],
            hess: [[zero(); N]; N],
        }
    }

    /// Coordinate function for slot `i` at the point `coords`.
    pub fn variable(coords: &[C64; N], i: usize) -> Self {
        let mut j = Self::constant(coords[i]);
        j.grad[i] = c(1.0, 0.0);
        j
    }

    /// `(z₁, z₂)` coordinate jets at a point.
    pub fn coordinates(coords: &[C64; N]) -> (Self, Self) {
        (Self::variable(coords, 0), Self::variable(coords, 1))
    }

    pub fn conj(&self) -> Self {
        let mut out = Self::constant(self.v.conj());
        for i in 0..N {
            out.grad[i] = self.grad[partner(i)].conj();
            for j in 0..N {
                out.hess[i][j] = self.hess[partner(i)][partner(j)].conj();
            }
        }
        out
    }

    pub fn scale(&self, k: C64) -> Self {
        Self {
            v: self.v * k,
            grad: self.grad.map(|x| x * k),
            hess: self.hess.map(|r| r.map(|x| x * k)),
        }
    }

    pub fn chain(&self, g0: C64, g1: C64, g2: C64) -> Self {
        let mut out = Self::constant(g0);
        for i in 0..N {
            out.grad[i] = g1 * self.grad[i];
            for j in 0..N {
                out.hess[i][j] = g2 * self.grad[i] * self.grad[j] + g1 * self.hess[i][j];
            }
        }
        out
    }

    pub fn recip(&self) -> Result<Self> {
        if self.v.norm() == 0.0 {
            return Err(Error::SingularPoint("reciprocal"));
        }
        let r = self.v.inv();
        Ok(self.chain(r, -r * r, 2.0 * r * r * r))
    }

    /// Principal-branch real power.
    pub fn powf(&self, p: f64) -> Result<Self> {
        if self.v.norm() == 0.0 {
            return Err(Error::SingularPoint("power"));
        }
        let g0 = (p * self.v.ln()).exp();
        let r = self.v.inv();
        Ok(self.chain(g0, p * g0 * r, p * (p - 1.0) * g0 * r * r))
    }

    pub fn sqrt(&self) -> Result<Self> {
        self.powf(0.5)
    }

    pub fn powi(&self, k: u32) -> Self {
        let mut acc = Self::constant(c(1.0, 0.0));
        for _ in 0..k {
            acc = acc * *self;
        }
        acc
    }

    pub fn first_order(&self) -> BiJet1 {
        BiJet1 {
            v: self.v,
            grad: self.grad,
        }
    }

    pub fn is_finite(&self) -> bool {
        is_finite(self.v)
            && self.grad.iter().copied().all(is_finite)
            && self.hess.iter().flatten().copied().all(is_finite)
    }
}

impl Add for BiJet2 {
    type Output = BiJet2;
    fn add(mut self, r: BiJet2) -> BiJet2 {
        self.v += r.v;
        for i in 0..N {
            self.grad[i] += r.grad[i];
            for j in 0..N {
                self.hess[i][j] += r.hess[i][j];
            }
        }
        self
    }
}

impl Sub for BiJet2 {
    type Output = BiJet2;
    fn sub(self, r: BiJet2) -> BiJet2 {
        self + (-r)
    }
}

impl Neg for BiJet2 {
    type Output = BiJet2;
    fn neg(self) -> BiJet2 {
        self.scale(c(-1.0, 0.0))
    }
}

impl Mul for BiJet2 {
    type Output = BiJet2;
    fn mul(self, r: BiJet2) -> BiJet2 {
        let mut out = BiJet2::constant(self.v * r.v);
        for i in 0..N {
            out.grad[i] = self.grad[i] * r.v + self.v * r.grad[i];
            for j in 0..N {
                out.hess[i][j] =
                    self.hess[i][j] * r.v + self.grad[i] * r.grad[j] + self.grad[j] * r.grad[i] + self.v * r.hess[i][j];
            }
        }
        out
    }
}

impl Mul<C64> for BiJet2 {
    type Output = BiJet2;
    fn mul(self, k: C64) -> BiJet2 {
        self.scale(k)
    }
}

impl Mul<f64> for BiJet2 {
    type Output = BiJet2;
    fn mul(self, k: f64) -> BiJet2 {
        self.scale(c(k, 0.0))
    }
}

/// First-order jet in `(z₁, z₂, z̄₁, z̄₂)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiJet1 {
    pub v: C64,
    pub grad: [C64; N],
}

impl BiJet1 {
    pub fn constant(v: C64) -> Self {
        Self { v, grad: [zero(); N] }
    }

    pub fn conj(&self) -> Self {
        let mut grad = [zero(); N];
        for (i, slot) in grad.iter_mut().enumerate() {
            *slot = self.grad[partner(i)].conj();
        }
        Self { v: self.v.conj(), grad }
    }

    pub fn scale(&self, k: C64) -> Self {
        Self {
            v: self.v * k,
            grad: self.grad.map(|x| x * k),
        }
    }

    /// Directional derivative along a tangent vector.
    pub fn along(&self, t: &Tangent) -> C64 {
        (0..N).map(|i| t.d[i] * self.grad[i]).sum()
    }

    pub fn recip(&self) -> Result<Self> {
        if self.v.norm() == 0.0 {
            return Err(Error::SingularPoint("reciprocal"));
        }
        let r = self.v.inv();
        Ok(Self {
            v: r,
            grad: self.grad.map(|x| -r * r * x),
        })
    }

    /// Principal-branch real power.
    pub fn powf(&self, p: f64) -> Result<Self> {
        if self.v.norm() == 0.0 {
            return Err(Error::SingularPoint("power"));
        }
        let v = (p * self.v.ln()).exp();
        let k = p * v / self.v;
        Ok(Self {
            v,
            grad: self.grad.map(|x| k * x),
        })
    }
}

impl Add for BiJet1 {
    type Output = BiJet1;
    fn add(mut self, r: BiJet1) -> BiJet1 {
        self.v += r.v;
        for i in 0..N {
            self.grad[i] += r.grad[i];
        }
        self
    }
}

impl Sub for BiJet1 {
    type Output = BiJet1;
    fn sub(self, r: BiJet1) -> BiJet1 {
        self + r.scale(c(-1.0, 0.0))
    }
}

impl Mul for BiJet1 {
    type Output = BiJet1;
    fn mul(self, r: BiJet1) -> BiJet1 {
        let mut grad = [zero(); N];
        for (i, slot) in grad.iter_mut().enumerate() {
            *slot = self.grad[i] * r.v + self.v * r.grad[i];
        }
        BiJet1 { v: self.v * r.v, grad }
    }
}

impl Mul<C64> for BiJet1 {
    type Output = BiJet1;
    fn mul(self, k: C64) -> BiJet1 {
        self.scale(k)
    }
}
