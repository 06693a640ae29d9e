//! Runs the checks named in a [`CaseConfig`] over its sample grid and
//! collects them into a [`Report`]; also exports field samples as CSV.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cartan::{ahat, flatness_decomposition, pullback_ahat, LieValue};
use crate::config::{CaseConfig, CheckKind, GridKind};
use crate::dirac::{g_map, h_map, vortex_magnetic_mode, R3Point};
use crate::error::{Error, Result};
use crate::geometry::{disk_grid, GeometryMode, SurfaceSpec};
use crate::jets::{CPoint, C64};
use crate::lift::{maurer_cartan, FiberedPoint, GroupPoint, Lift, XField};
use crate::quadrature::QuadratureConfig;
use crate::report::{CheckResult, Provenance, Report, WindingSummary};
use crate::vortex::{sweep, GaugeConfiguration, SweepStats, VortexSolution, WindingMode};

/// Half-width of the cube of `ℝ³` sample points for the `H`/`G` checks.
const R3_EXTENT: f64 = 1.5;
const R3_SAMPLES: usize = 9;

/// Chart points for a case. A two-chart sphere grid covers `|z| ≤ R` with
/// `R = 1/√κ` and the far hemisphere through `z = R²/u`, `0 < |u| < R`.
pub fn sample_points(cfg: &CaseConfig, spec: &SurfaceSpec) -> Vec<CPoint> {
    let res = cfg.grid.resolution;
    match cfg.grid.kind {
        GridKind::Disk => disk_grid(cfg.grid.radius.unwrap_or_else(|| spec.default_sample_radius()), res),
        GridKind::TwoChartSphere => {
            let r = 1.0 / spec.kappa().sqrt();
            let mut pts = disk_grid(r, res);
            let far = disk_grid(r, res)
                .into_iter()
                .filter(|u| u.z.norm() > 0.0 && u.z.norm() < r * (1.0 - 1e-9))
                .map(|u| CPoint::at(r * r / u.z));
            pts.extend(far);
            pts
        }
    }
}

/// Base points times `count` equally spaced fibre angles in `[0, 4π)`.
pub fn fibred_points(base: &[CPoint], count: usize) -> Vec<FiberedPoint> {
    let step = 4.0 * PI / count as f64;
    base.iter()
        .flat_map(|&p| (0..count).map(move |k| FiberedPoint::new(p, step * k as f64)))
        .collect()
}

/// Deterministic cube grid in `ℝ³` plus the boundary examples of the region.
pub fn r3_points(c0: i8) -> Vec<[f64; 3]> {
    let step = 2.0 * R3_EXTENT / (R3_SAMPLES - 1) as f64;
    let mut pts = Vec::with_capacity(R3_SAMPLES.pow(3) + 2);
    for i in 0..R3_SAMPLES {
        for j in 0..R3_SAMPLES {
            for k in 0..R3_SAMPLES {
                pts.push([i, j, k].map(|m| -R3_EXTENT + step * m as f64));
            }
        }
    }
    if c0 < 0 {
        pts.push([1.0, 1.0, 1.0]);
        pts.push([0.0, 1.0, 0.0]);
    }
    pts
}

/// Run every check in the configuration.
pub fn run_case(cfg: &CaseConfig) -> Result<Report> {
    run_checks(cfg, &cfg.checks)
}

/// Run a subset of checks, in the canonical order.
pub fn run_checks(cfg: &CaseConfig, kinds: &[CheckKind]) -> Result<Report> {
    cfg.validate()?;
    let sol = cfg.solution()?;
    let spec = sol.family().source();
    let points = sample_points(cfg, &spec);
    let mut checks = Vec::new();
    let mut winding = None;
    for kind in CheckKind::ALL.into_iter().filter(|k| kinds.contains(k)) {
        match kind {
            CheckKind::Geometry => checks.extend(geometry_checks(cfg, &sol, &points)?),
            CheckKind::Vortex => checks.extend(vortex_checks(cfg, &sol, &points)?),
            CheckKind::Flatness => checks.extend(flatness_checks(cfg, &sol, &points)?),
            CheckKind::Winding => {
                let (check, summary) = winding_check(cfg, &sol)?;
                checks.push(check);
                winding = Some(summary);
            }
            CheckKind::Lift => checks.extend(lift_checks(cfg, &sol, &points)?),
            CheckKind::Dirac => checks.extend(dirac_checks(cfg, &sol, &points)?),
        }
    }
    Ok(Report::new(
        cfg.name.clone(),
        checks,
        winding,
        Provenance::now(cfg.hash()?),
    ))
}

fn geometry_checks(cfg: &CaseConfig, sol: &VortexSolution, points: &[CPoint]) -> Result<Vec<CheckResult>> {
    let tol = cfg.tolerances.analytic;
    let fam = sol.family();
    let (source, target) = (fam.source(), fam.target());
    let structure = |spec: SurfaceSpec| move |p: &CPoint| Ok(spec.structure_residual(*p)?.norm());
    let gauss = |spec: SurfaceSpec| move |p: &CPoint| Ok((spec.gauss_curvature(*p)? - spec.nominal_curvature()).abs());
    // Target quantities are sampled where the map sends the grid.
    let on_images = |f: &(dyn Fn(&CPoint) -> Result<f64> + Sync)| {
        sweep(points, |p| {
            f(&CPoint::new(nearer_chart(&target, sol.map().eval(p.z)?))?)
        })
    };
    Ok(vec![
        CheckResult::from_stats("geometry.structure", &sweep(points, structure(source))?, tol),
        CheckResult::from_stats("geometry.gauss", &sweep(points, gauss(source))?, tol),
        CheckResult::from_stats("geometry.target_structure", &on_images(&structure(target))?, tol),
        CheckResult::from_stats("geometry.target_gauss", &on_images(&gauss(target))?, tol),
        CheckResult::from_stats(
            "geometry.rescaling",
            &sweep(points, |p| rescaling_residual(&source, p.z))?,
            tol,
        ),
    ])
}

/// On a sphere, the representative of `u` in whichever stereographic chart
/// has it inside the unit disc (`u ↦ 1/(κu)` is the chart transition).
pub fn nearer_chart(spec: &SurfaceSpec, u: C64) -> C64 {
    let k = spec.kappa();
    if spec.curvature_sign() > 0 && k * u.norm_sqr() > 1.0 {
        (u * k).inv()
    } else {
        u
    }
}

/// Consistency of the fixed and normalised charts under `z = √n w`: the
/// pulled-back co-frame is `√n` times the normalised one, the spin
/// connections and `Â` agree, and the curvature scales by `n`. `z` is a
/// point of the chart of `spec`.
pub fn rescaling_residual(spec: &SurfaceSpec, z: C64) -> Result<f64> {
    let n = spec.n();
    let rn = n.sqrt();
    let fixed = SurfaceSpec::new(spec.curvature_sign() as i32, GeometryMode::Fixed, n)?;
    let norm = SurfaceSpec::new(spec.curvature_sign() as i32, GeometryMode::Normalised, n)?;
    let w = match spec.mode() {
        GeometryMode::Fixed => z / rn,
        GeometryMode::Normalised => z,
    };
    let (pw, pz) = (CPoint::new(w)?, CPoint::new(w * rn)?);
    let pull = |v: C64| v * rn;
    let ef = fixed.coframe(pz)?.value();
    let en = norm.coframe(pw)?.value();
    let gf = fixed.spin_connection(pz)?.value();
    let gn = norm.spin_connection(pw)?.value();
    let af = ahat(&fixed, pz)?;
    let an = ahat(&norm, pw)?;
    let mut worst = (pull(ef.a) - rn * en.a).norm().max((pull(ef.b) - rn * en.b).norm());
    worst = worst.max((pull(gf.a) - gn.a).norm()).max((pull(gf.b) - gn.b).norm());
    for (x, y) in [(af.t0, an.t0), (af.tp, an.tp), (af.tm, an.tm)] {
        let (x, y) = (x.value(), y.value());
        worst = worst.max((pull(x.a) - y.a).norm()).max((pull(x.b) - y.b).norm());
    }
    let k = (norm.gauss_curvature(pw)? - n * fixed.gauss_curvature(pz)?).abs();
    Ok(worst.max(k))
}

fn vortex_checks(cfg: &CaseConfig, sol: &VortexSolution, points: &[CPoint]) -> Result<Vec<CheckResult>> {
    let tol = cfg.tolerances.analytic;
    Ok(vec![
        CheckResult::from_stats(
            "vortex.selfdual",
            &sweep(points, |p| Ok(sol.residual_selfdual(*p)?.norm()))?,
            tol,
        ),
        CheckResult::from_stats(
            "vortex.vortex2",
            &sweep(points, |p| Ok(sol.residual_vortex2(*p)?.norm()))?,
            tol,
        ),
    ])
}

fn flatness_checks(cfg: &CaseConfig, sol: &VortexSolution, points: &[CPoint]) -> Result<Vec<CheckResult>> {
    let tol = cfg.tolerances.analytic;
    let curvature = sweep(points, |p| Ok(pullback_ahat(sol, *p)?.curvature()?.max_norm()))?;
    let split = sweep(points, |p| flatness_decomposition(sol, *p))?;
    Ok(vec![
        CheckResult::from_stats("flatness.curvature", &curvature, tol),
        CheckResult::from_stats("flatness.decomposition", &split, tol),
    ])
}

/// Global flux on a compact source, local flux around special points
/// otherwise.
pub fn winding_mode_for(cfg: &CaseConfig) -> WindingMode {
    if cfg.c0 == 1 {
        WindingMode::Global
    } else {
        WindingMode::Local
    }
}

fn winding_check(cfg: &CaseConfig, sol: &VortexSolution) -> Result<(CheckResult, WindingSummary)> {
    let w = sol.winding_number(winding_mode_for(cfg), &QuadratureConfig::default())?;
    let mut stats = SweepStats::default();
    stats.push(w.delta);
    let check = CheckResult::from_stats("winding", &stats, cfg.tolerances.quadrature);
    Ok((check, WindingSummary::from(&w)))
}

fn max_norm(values: &[LieValue]) -> f64 {
    values.iter().map(LieValue::norm).fold(0.0, f64::max)
}

/// `|ω(X_b) - δ|` over the Maurer–Cartan table, with `ω = (σ⁰, σ̄/2, σ/2)`.
pub fn maurer_cartan_table_residual(g: &GroupPoint) -> Result<f64> {
    let coords = g.coords();
    let mut worst = 0.0f64;
    for (b, x) in XField::ALL.iter().enumerate() {
        let comps = maurer_cartan(g, &x.linear(g.c).at(&coords))?.frame_components();
        for (a, v) in comps.iter().enumerate() {
            let want = if a == b { 1.0 } else { 0.0 };
            worst = worst.max((v - want).norm());
        }
    }
    Ok(worst)
}

fn lift_checks(cfg: &CaseConfig, sol: &VortexSolution, points: &[CPoint]) -> Result<Vec<CheckResult>> {
    let (tol, fd_tol) = (cfg.tolerances.analytic, cfg.tolerances.fibre_fd);
    let lift = Lift::new(sol)?;
    let fibred = fibred_points(points, cfg.fibre_samples);
    let at = |fp: &FiberedPoint| -> Result<GroupPoint> {
        sol.check_excluded(fp.base)?;
        lift.group_point(fp)
    };
    let base = |p: &CPoint| -> Result<CPoint> {
        sol.check_excluded(*p)?;
        Ok(*p)
    };
    let identities = sweep(points, |p| {
        let (s, s0) = lift.pullback_identities(base(p)?)?;
        Ok(s.max(s0))
    })?;
    let table = sweep(&fibred, |fp| maurer_cartan_table_residual(&at(fp)?))?;
    let pullback = sweep(points, |p| {
        let c = lift.pullback_check(sol, base(p)?)?;
        Ok(c.higgs.max(c.potential))
    })?;
    let upstairs = sweep(&fibred, |fp| Ok(lift.configuration(&at(fp)?)?.residuals().max_norm()))?;
    let flat = sweep(&fibred, |fp| {
        Ok(max_norm(&lift.configuration(&at(fp)?)?.connection_curvature()?))
    })?;
    let flat_fd = sweep(&fibred, |fp| Ok(max_norm(&lift.connection_curvature_fd(&at(fp)?)?)))?;
    let conj = sweep(points, |p| lift.conjugation_residual(sol, base(p)?))?;
    let equiv = sweep(&fibred, |fp| lift.equivariance_residual(&at(fp)?))?;
    Ok(vec![
        CheckResult::from_stats("lift.pullback_identities", &identities, tol),
        CheckResult::from_stats("lift.maurer_cartan", &table, tol),
        CheckResult::from_stats("lift.pullback", &pullback, tol),
        CheckResult::from_stats("lift.configuration", &upstairs, tol),
        CheckResult::from_stats("lift.flatness", &flat, tol),
        CheckResult::from_stats("lift.flatness_fd", &flat_fd, fd_tol),
        CheckResult::from_stats("lift.conjugation", &conj, tol),
        CheckResult::from_stats("lift.equivariance", &equiv, tol),
    ])
}

fn dirac_checks(cfg: &CaseConfig, sol: &VortexSolution, points: &[CPoint]) -> Result<Vec<CheckResult>> {
    let (tol, fd_tol) = (cfg.tolerances.analytic, cfg.tolerances.fibre_fd);
    let c0 = sol.family().c0();
    if c0 == 0 {
        return Err(Error::Config("the dirac check needs C0 != 0".into()));
    }
    let lift = Lift::new(sol)?;
    let fibred = fibred_points(points, cfg.fibre_samples);
    let mode_at = |fp: &FiberedPoint| {
        sol.check_excluded(fp.base)?;
        vortex_magnetic_mode(&lift.configuration(&lift.group_point(fp)?)?)
    };
    let component = sweep(&fibred, |fp| {
        let (r0, rp) = mode_at(fp)?.dirac_residual();
        Ok(r0.norm().max(rp.norm()))
    })?;
    let identity = sweep(&fibred, |fp| Ok(mode_at(fp)?.curvature_identity()?.residual().norm()))?;

    let r3 = r3_points(c0);
    let squares = sweep(&r3, |x| {
        let p = R3Point::new(*x, c0)?;
        if !p.in_region() {
            return Err(Error::DomainBoundary);
        }
        let (h, g) = (h_map(&p)?, g_map(&p)?);
        let diff = (h.m - g.m * g.m).iter().map(|d| d.norm()).fold(0.0, f64::max);
        let det = (g.determinant() - 1.0).norm();
        Ok(diff.max(det).max(h.point().constraint_defect()))
    })?;
    let region = sweep(&r3, |x| {
        let p = R3Point::new(*x, c0)?;
        let expected = c0 == 1 || x[0] * x[0] - (x[1] * x[1] + x[2] * x[2]) > -1.0;
        let agree = p.in_region() == expected && h_map(&p).is_ok() == expected;
        Ok(if agree { 0.0 } else { 1.0 })
    })?;
    Ok(vec![
        CheckResult::from_stats("dirac.component", &component, fd_tol),
        CheckResult::from_stats("dirac.curvature_identity", &identity, fd_tol),
        CheckResult::from_stats("dirac.h_equals_g_squared", &squares, tol),
        CheckResult::from_stats("dirac.region", &region, tol),
    ])
}

/// Summary written next to a CSV sample file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSummary {
    pub case: String,
    pub grid_points: usize,
    pub rows: usize,
    pub excluded: usize,
    pub config_hash: String,
}

pub const SAMPLE_HEADER: &str = "re_z,im_z,abs_phi_2n,A_zbar_re,A_zbar_im,F_density,baptista";

/// One CSV row: `|φ|²ⁿ`, `A_z̄`, the density of `dA` against `dx∧dy`, and the
/// Baptista metric density `|φ|²ⁿ·4/(1 + κC₀|z|²)²`.
fn sample_row(sol: &VortexSolution, p: CPoint) -> Result<[f64; 7]> {
    let phi = sol.higgs_field(p)?;
    let a = sol.gauge_potential(p)?.value();
    let flux = sol.flux_density(p)?;
    let abs2n = phi.v.norm_sqr();
    let den = sol.family().source().denominator(p)?.v.re;
    Ok([p.z.re, p.z.im, abs2n, a.b.re, a.b.im, flux, abs2n * 4.0 / (den * den)])
}

/// CSV text and summary for the case's sample grid. Excluded points are
/// omitted and counted.
pub fn sample_fields_csv(cfg: &CaseConfig) -> Result<(String, SampleSummary)> {
    cfg.validate()?;
    let sol = cfg.solution()?;
    let points = sample_points(cfg, &sol.family().source());
    let rows: Vec<Result<[f64; 7]>> = points.par_iter().map(|p| sample_row(&sol, *p)).collect();
    let mut csv = String::from(SAMPLE_HEADER);
    csv.push('\n');
    let (mut written, mut excluded) = (0, 0);
    for row in rows {
        match row {
            Ok(r) => {
                let line: Vec<String> = r.iter().map(|v| v.to_string()).collect();
                writeln!(csv, "{}", line.join(",")).expect("write to string");
                written += 1;
            }
            Err(e) if e.is_exclusion() => excluded += 1,
            Err(e) => return Err(e),
        }
    }
    let summary = SampleSummary {
        case: cfg.name.clone(),
        grid_points: points.len(),
        rows: written,
        excluded,
        config_hash: cfg.hash()?,
    };
    Ok((csv, summary))
}

/// Path of the sidecar summary for a CSV output path.
pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.file_stem().map(|s| s.to_os_string()).unwrap_or_default();
    name.push(".sidecar.json");
    out.with_file_name(name)
}

/// Write the CSV to `out` and its summary to [`sidecar_path`].
pub fn sample_fields(cfg: &CaseConfig, out: &Path) -> Result<SampleSummary> {
    let (csv, summary) = sample_fields_csv(cfg)?;
    std::fs::write(out, csv)?;
    std::fs::write(sidecar_path(out), serde_json::to_string_pretty(&summary)? + "\n")?;
    Ok(summary)
}
