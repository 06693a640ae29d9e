//! Adaptive Gauss–Kronrod (7, 15) quadrature in one dimension, and nested
//! integration over discs and over the Riemann sphere in two charts.

// Nodes and weights are tabulated to more digits than f64 holds.
#![allow(clippy::excessive_precision)]

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jets::C64;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
/// Gauss weights for the odd-indexed Kronrod nodes (the 7-point rule).
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: u32,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-6,
            rel_tol: 1e-9,
            max_depth: 30,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

fn gk15<F: Fn(f64) -> Result<f64>>(f: &F, a: f64, b: f64) -> Result<(f64, f64)> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx)? + f(c + dx)?;
        kronrod += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    Ok((kronrod * h, ((kronrod - gauss) * h).abs()))
}

/// `∫_a^b f`, bisecting until each piece meets its share of the tolerance.
pub fn integrate<F: Fn(f64) -> Result<f64>>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<Estimate> {
    let (whole, err) = gk15(&f, a, b)?;
    let mut evaluations = 15;
    let mut total = 0.0;
    let mut total_err = 0.0;
    let target = cfg.abs_tol.max(cfg.rel_tol * whole.abs());
    let mut stack = vec![(a, b, whole, err, 0u32)];
    while let Some((lo, hi, val, e, depth)) = stack.pop() {
        let share = target * (hi - lo) / (b - a);
        if e <= share || (hi - lo) <= f64::EPSILON * (1.0 + lo.abs()) * 64.0 {
            total += val;
            total_err += e;
            continue;
        }
        if depth >= cfg.max_depth {
            return Err(Error::QuadratureNonConvergence(format!(
                "depth limit on [{lo}, {hi}] with local error {e:e}"
            )));
        }
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(&f, lo, mid)?;
        let (v2, e2) = gk15(&f, mid, hi)?;
        evaluations += 30;
        stack.push((lo, mid, v1, e1, depth + 1));
        stack.push((mid, hi, v2, e2, depth + 1));
    }
    if !total.is_finite() {
        return Err(Error::QuadratureNonConvergence("non-finite integral".into()));
    }
    Ok(Estimate {
        value: total,
        error: total_err,
        evaluations,
    })
}

/// `∫_{|z|<R} f(z) dx dy` in polar coordinates.
pub fn integrate_disc<F: Fn(C64) -> Result<f64>>(f: F, radius: f64, cfg: &QuadratureConfig) -> Result<Estimate> {
    let two_pi = 2.0 * std::f64::consts::PI;
    // The inner tolerance is tighter so the outer error estimate dominates.
    let inner = QuadratureConfig {
        abs_tol: cfg.abs_tol / (two_pi * radius.max(1.0)),
        ..*cfg
    };
    let evals = std::cell::Cell::new(0usize);
    let outer = integrate(
        |r| {
            let ring = integrate(|t| f(C64::from_polar(r, t)), 0.0, two_pi, &inner)?;
            evals.set(evals.get() + ring.evaluations);
            Ok(ring.value * r)
        },
        0.0,
        radius,
        cfg,
    )?;
    Ok(Estimate {
        evaluations: evals.get(),
        ..outer
    })
}

/// `∫_{S²} ρ dx dy` for a density `ρ` given in the chart `z`: the disc
/// `|z| < R` directly, and its complement through `z = R²/u`, where the
/// density picks up the Jacobian `R⁴/|u|⁴`.
pub fn integrate_sphere<F: Fn(C64) -> Result<f64>>(
    density: F,
    chart_radius: f64,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    let half = QuadratureConfig {
        abs_tol: 0.5 * cfg.abs_tol,
        ..*cfg
    };
    let r2 = chart_radius * chart_radius;
    let north = integrate_disc(&density, chart_radius, &half)?;
    let south = integrate_disc(
        |u| Ok(density(r2 / u)? * (r2 / u.norm_sqr()).powi(2)),
        chart_radius,
        &half,
    )?;
    Ok(Estimate {
        value: north.value + south.value,
        error: north.error + south.error,
        evaluations: north.evaluations + south.evaluations,
    })
}
