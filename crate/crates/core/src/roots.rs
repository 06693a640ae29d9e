//! All roots of a complex polynomial, with multiplicities.
//!
//! Aberth–Ehrlich simultaneous iteration does the work; the companion-matrix
//! eigenvalues are the fallback when it stalls. Clustered approximations of
//! a multiple root are merged and their centroid polished by Newton's method
//! on the derivative whose root is simple.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::jets::{c, C64};
use crate::rational::Poly;

const MAX_ITER: usize = 1000;
/// Candidate cluster radii, relative to `1 + |root|`, tried from coarse to
/// fine. A root of multiplicity `m` is resolved only to about `ε^{1/m}`
/// (worse when clusters are close), so candidates are collected loosely and
/// each group is confirmed by the derivative test in [`confirm`]; groups
/// that fail are split at the next radius.
const CANDIDATE_RADII: [f64; 4] = [1e-2, 1e-3, 1e-4, 1e-5];
/// Relative size below which a Taylor coefficient counts as zero.
const MULTIPLICITY_TOLERANCE: f64 = 1e-8;
/// Final cluster radius for reporting merged roots.
pub const CLUSTER_RADIUS: f64 = 1e-6;

/// A root together with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub value: C64,
    pub multiplicity: usize,
}

pub fn find_roots(p: &Poly) -> Result<Vec<Root>> {
    let deg = p.degree();
    if deg == 0 {
        return Err(Error::DegenerateMap);
    }
    let coeffs = p.coeffs();
    let zeros = coeffs.iter().take_while(|a| a.norm() == 0.0).count();
    let reduced = Poly::new(coeffs[zeros..].to_vec());

    let mut out = Vec::new();
    if zeros > 0 {
        out.push(Root {
            value: C64::default(),
            multiplicity: zeros,
        });
    }
    if reduced.degree() == 0 {
        return Ok(out);
    }
    let approx = match aberth(&reduced) {
        Ok(r) => r,
        Err(_) => companion_roots(&reduced)?,
    };
    out.extend(cluster(&reduced, approx));
    out.sort_by(|a, b| {
        (a.value.re, a.value.im)
            .partial_cmp(&(b.value.re, b.value.im))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(out)
}

/// Eigenvalues of the companion matrix of `p`.
pub fn companion_roots(p: &Poly) -> Result<Vec<C64>> {
    let deg = p.degree();
    if deg == 0 {
        return Err(Error::DegenerateMap);
    }
    let a = p.coeffs();
    let lead = a[deg];
    let mut m = DMatrix::<C64>::zeros(deg, deg);
    for i in 1..deg {
        m[(i, i - 1)] = c(1.0, 0.0);
    }
    for i in 0..deg {
        m[(i, deg - 1)] = -a[i] / lead;
    }
    let schur = nalgebra::linalg::Schur::try_new(m, 1e-15, 10_000).ok_or(Error::NonConvergence(10_000))?;
    let (_, t) = schur.unpack();
    Ok((0..deg).map(|i| t[(i, i)]).collect())
}

fn aberth(p: &Poly) -> Result<Vec<C64>> {
    let deg = p.degree();
    let a = p.coeffs();
    let dp = p.derivative();
    // Initial guesses on a circle whose radius is the geometric mean of the
    // root moduli, with an irrational angular offset to break symmetry.
    let radius = (a[0].norm() / a[deg].norm()).powf(1.0 / deg as f64).max(1e-3);
    let mut z: Vec<C64> = (0..deg)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * k as f64 / deg as f64 + 0.4;
            C64::from_polar(radius, t)
        })
        .collect();
    for _ in 0..MAX_ITER {
        let mut worst: f64 = 0.0;
        for i in 0..deg {
            let pv = p.eval(z[i]);
            if pv.norm() == 0.0 {
                continue;
            }
            let ratio = pv / dp.eval(z[i]);
            let s: C64 = (0..deg).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let w = ratio / (c(1.0, 0.0) - ratio * s);
            if !(w.re.is_finite() && w.im.is_finite()) {
                continue;
            }
            z[i] -= w;
            worst = worst.max(w.norm() / (1.0 + z[i].norm()));
        }
        if worst < 1e-15 {
            return Ok(z);
        }
    }
    // Linear convergence on multiple roots may stall above 1e-15; accept the
    // iterate if every residual is at rounding level.
    let scale = p.norm();
    let ok = z
        .iter()
        .all(|&r| p.eval(r).norm() <= 1e-9 * scale * (1.0 + r.norm()).powi(deg as i32));
    if ok {
        Ok(z)
    } else {
        Err(Error::NonConvergence(MAX_ITER))
    }
}

fn newton_polish(p: &Poly, mut z: C64, steps: usize) -> C64 {
    let dp = p.derivative();
    for _ in 0..steps {
        let d = dp.eval(z);
        if d.norm() == 0.0 {
            break;
        }
        let step = p.eval(z) / d;
        if !(step.re.is_finite() && step.im.is_finite()) {
            break;
        }
        z -= step;
        if step.norm() <= 1e-16 * (1.0 + z.norm()) {
            break;
        }
    }
    z
}

/// Union-find grouping of points closer than `radius·(1 + |z|)`.
fn groups(points: &[C64], radius: f64) -> Vec<Vec<C64>> {
    let n = points.len();
    let mut label: Vec<usize> = (0..n).collect();
    fn find(label: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while label[r] != r {
            r = label[r];
        }
        label[i] = r;
        r
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (points[i] - points[j]).norm() < radius * (1.0 + points[i].norm()) {
                let (a, b) = (find(&mut label, i), find(&mut label, j));
                label[a.max(b)] = a.min(b);
            }
        }
    }
    let mut out: Vec<Vec<C64>> = Vec::new();
    let mut heads: Vec<usize> = Vec::new();
    for (i, &z) in points.iter().enumerate() {
        let h = find(&mut label, i);
        match heads.iter().position(|&x| x == h) {
            Some(k) => out[k].push(z),
            None => {
                heads.push(h);
                out.push(vec![z]);
            }
        }
    }
    out
}

/// Accept a group of `m` approximations as one `m`-fold root if Newton on
/// the `(m-1)`-th derivative stays inside the group and the Taylor
/// coefficients of order `< m` there are at rounding level.
fn confirm(p: &Poly, g: &[C64], radius: f64) -> Option<Root> {
    let m = g.len();
    let centroid = g.iter().sum::<C64>() / m as f64;
    let mut dm = p.clone();
    for _ in 0..(m - 1) {
        dm = dm.derivative();
    }
    let polished = newton_polish(&dm, centroid, 20);
    if (polished - centroid).norm() >= radius * (1.0 + centroid.norm()) {
        return None;
    }
    // Rounding scale of each Taylor coefficient: the same expansion with
    // every coefficient replaced by its modulus.
    let abs = Poly::new(p.coeffs().iter().map(|a| C64::from(a.norm())).collect());
    let scales = abs.taylor(C64::from(polished.norm()), m);
    let taylor = p.taylor(polished, m);
    let ok = taylor[..m]
        .iter()
        .zip(&scales)
        .all(|(t, s)| t.norm() <= MULTIPLICITY_TOLERANCE * s.norm());
    ok.then_some(Root {
        value: polished,
        multiplicity: m,
    })
}

fn cluster(p: &Poly, approx: Vec<C64>) -> Vec<Root> {
    let mut out = Vec::new();
    refine(p, approx, 0, &mut out);
    out
}

fn refine(p: &Poly, points: Vec<C64>, level: usize, out: &mut Vec<Root>) {
    let radius = CANDIDATE_RADII[level];
    for g in groups(&points, radius) {
        if g.len() == 1 {
            out.push(Root {
                value: newton_polish(p, g[0], 8),
                multiplicity: 1,
            });
        } else if let Some(root) = confirm(p, &g, radius) {
            out.push(root);
        } else if level + 1 < CANDIDATE_RADII.len() {
            refine(p, g, level + 1, out);
        } else {
            out.extend(g.into_iter().map(|r| Root {
                value: newton_polish(p, r, 8),
                multiplicity: 1,
            }));
        }
    }
}
