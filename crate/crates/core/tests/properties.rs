//! Property tests of the invariants each module promises.

use nvortex::campaign::{maurer_cartan_table_residual, rescaling_residual};
use nvortex::cartan::{flatness_decomposition, pullback_ahat, LieValue};
use nvortex::config::{CaseConfig, CheckKind, GridConfig, GridKind, Tolerances};
use nvortex::dirac::{g_map, h_map, R3Point};
use nvortex::jets::{exterior_d, jet_compose, wedge, Elementary, OneForm, OneFormVal};
use nvortex::lift::{hopf_projection, section, FiberedPoint, Lift, XField};
use nvortex::roots::{find_roots, Root};
use nvortex::vortex::{GaugeConfiguration, GaugeTransformed, Perturbed, VortexFamily, VortexSolution};
use nvortex::{CPoint, Error, GeometryMode, Jet2, Poly, RationalMap, SurfaceSpec, C64};
use proptest::prelude::*;

const I: C64 = C64::new(0.0, 1.0);
const H: f64 = 1e-5;

fn cplx(r: f64) -> impl Strategy<Value = C64> {
    (-r..r, -r..r).prop_map(|(a, b)| C64::new(a, b))
}

fn mode() -> impl Strategy<Value = GeometryMode> {
    prop_oneof![Just(GeometryMode::Fixed), Just(GeometryMode::Normalised)]
}

/// Families from the verification matrix, plus real exponents.
fn family() -> impl Strategy<Value = VortexFamily> {
    let pair = prop_oneof![Just((-1, -1)), Just((0, 1)), Just((1, 1)), Just((-1, 0)), Just((-1, 1)),];
    (pair, 0.3f64..3.5, mode()).prop_map(|((c0, c2n), n, m)| VortexFamily::new(c0, c2n, n, m).unwrap())
}

fn poly(max_degree: usize, r: f64) -> impl Strategy<Value = Poly> {
    prop::collection::vec(cplx(r), 2..=max_degree + 1).prop_map(|mut v| {
        let last = v.len() - 1;
        if v[last].norm() < 0.2 {
            v[last] += C64::new(0.5, 0.0);
        }
        Poly::new(v)
    })
}

/// Test field built from the elementary vocabulary, and the same field from
/// plain complex arithmetic.
#[derive(Debug)]
struct Field {
    a: f64,
    b: C64,
    p: f64,
}

impl Field {
    fn jet(&self, q: CPoint) -> Jet2 {
        let z = Jet2::coordinate(q);
        let zb = jet_compose(Elementary::Conj, &z).unwrap();
        let log = jet_compose(Elementary::Log, &(z.modulus_squared() * self.a + 1.0)).unwrap();
        let pow = jet_compose(Elementary::Pow(self.p), &(z * self.b + zb + 3.0)).unwrap();
        let rec = jet_compose(Elementary::Recip, &(z * zb + 2.0)).unwrap();
        let ex = jet_compose(Elementary::Exp, &(z * (I * 0.7))).unwrap();
        let sq = jet_compose(Elementary::Sqrt, &(z * z + 4.0)).unwrap();
        log * pow + ex * rec + sq * zb
    }

    fn value(&self, z: C64) -> C64 {
        let zb = z.conj();
        let log = (C64::from(1.0) + self.a * z.norm_sqr()).ln();
        let pow = (z * self.b + zb + 3.0).powf(self.p);
        let rec = (z * zb + 2.0).inv();
        let ex = (z * I * 0.7).exp();
        let sq = (z * z + 4.0).sqrt();
        log * pow + ex * rec + sq * zb
    }
}

fn field() -> impl Strategy<Value = Field> {
    (0.1f64..2.0, cplx(0.9), -2.5f64..2.5).prop_map(|(a, b, p)| Field { a, b, p })
}

/// `(∂_z, ∂_z̄)` by central differences in `x` and `y`.
fn wirtinger_fd<F: Fn(C64) -> C64>(f: F, z: C64) -> (C64, C64) {
    let fx = (f(z + H) - f(z - H)) / (2.0 * H);
    let fy = (f(z + I * H) - f(z - I * H)) / (2.0 * H);
    ((fx - I * fy) * 0.5, (fx + I * fy) * 0.5)
}

fn close(a: C64, b: C64, rel: f64) -> bool {
    (a - b).norm() <= rel * (1.0 + a.norm().max(b.norm()))
}

fn at(z: C64) -> CPoint {
    CPoint::new(z).unwrap()
}

fn lie(r: f64, c: i8) -> impl Strategy<Value = LieValue> {
    (cplx(r), cplx(r), cplx(r)).prop_map(move |(a, b, d)| LieValue::new(a, b, d, c))
}

fn lie_close(x: &LieValue, y: &LieValue) -> f64 {
    x.add(&y.scale((-1.0).into())).norm()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn chain_rule_matches_differences(f in field(), z in cplx(0.9)) {
        let j = f.jet(at(z));
        prop_assert!(close(j.v, f.value(z), 1e-13));
        let (dz, dzb) = wirtinger_fd(|w| f.value(w), z);
        prop_assert!(close(j.dz, dz, 1e-6), "{:?} vs {:?}", j.dz, dz);
        prop_assert!(close(j.dzbar, dzb, 1e-6));
        // Second order against differences of the verified first order.
        let (dzdz, dzdzb) = wirtinger_fd(|w| f.jet(at(w)).dz, z);
        let (_, dzbdzb) = wirtinger_fd(|w| f.jet(at(w)).dzbar, z);
        prop_assert!(close(j.dzdz, dzdz, 1e-6));
        prop_assert!(close(j.dzdzbar, dzdzb, 1e-6));
        prop_assert!(close(j.dzbardzbar, dzbdzb, 1e-6));
    }

    #[test]
    fn conjugation_rule_is_exact(f in field(), z in cplx(0.9)) {
        let j = f.jet(at(z));
        let cj = jet_compose(Elementary::Conj, &j).unwrap();
        prop_assert_eq!(cj.v, j.v.conj());
        prop_assert_eq!(cj.dz, j.dzbar.conj());
        prop_assert_eq!(cj.dzbar, j.dz.conj());
        prop_assert_eq!(cj.dzdz, j.dzbardzbar.conj());
        prop_assert_eq!(cj.dzbardzbar, j.dzdz.conj());
        prop_assert_eq!(cj.dzdzbar, j.dzdzbar.conj());
    }

    #[test]
    fn d_squared_vanishes(f in field(), z in cplx(0.9)) {
        let dd = exterior_d(&OneForm::gradient(&f.jet(at(z))));
        prop_assert!(dd.norm() < 1e-12);
    }

    #[test]
    fn wedge_is_antisymmetric_and_bilinear(p in (cplx(2.0), cplx(2.0)), q in (cplx(2.0), cplx(2.0)), k in cplx(2.0)) {
        let (p, q) = (OneFormVal::new(p.0, p.1), OneFormVal::new(q.0, q.1));
        prop_assert_eq!(wedge(&p, &q).c, -wedge(&q, &p).c);
        prop_assert_eq!(wedge(&p, &p).c, C64::new(0.0, 0.0));
        let lhs = wedge(&p.scale(k), &q).c;
        prop_assert!(close(lhs, wedge(&p, &q).c * k, 1e-14));
        prop_assert!(close(wedge(&p, &q.scale(k)).c, lhs, 1e-14));
    }

    #[test]
    fn roots_rebuild_the_polynomial(
        centres in prop::collection::vec((cplx(2.0), 1usize..=3), 1..5)
    ) {
        // Keep distinct roots well separated.
        let mut roots: Vec<Root> = Vec::new();
        for (v, m) in centres {
            if roots.iter().all(|r| (r.value - v).norm() > 0.3) {
                roots.push(Root { value: v, multiplicity: m });
            }
        }
        let p = Poly::from_roots(&roots);
        let found = find_roots(&p).unwrap();
        prop_assert_eq!(found.iter().map(|r| r.multiplicity).sum::<usize>(), p.degree());
        let rebuilt = Poly::from_roots(&found);
        let scale = p.norm();
        for (a, b) in rebuilt.coeffs().iter().zip(p.coeffs()) {
            prop_assert!((a - b).norm() <= 1e-7 * scale, "{:?} vs {:?}", a, b);
        }
    }

    #[test]
    fn riemann_hurwitz(f1 in poly(3, 1.5), f2 in poly(5, 1.5)) {
        let Ok(map) = RationalMap::new(f1, f2) else { return Ok(()) };
        let ram = map.ramification_points().unwrap();
        prop_assert_eq!(ram.total(), 2 * map.degree() - 2);
    }

    #[test]
    fn rational_jet_matches_differences(f1 in poly(2, 1.5), f2 in poly(4, 1.5), z in cplx(1.5)) {
        let Ok(map) = RationalMap::new(f1, f2) else { return Ok(()) };
        prop_assume!(map.f1().eval(z).norm() > 0.1);
        let j = map.eval_jet(at(z)).unwrap();
        let (dz, dzb) = wirtinger_fd(|w| map.eval(w).unwrap(), z);
        prop_assert!(close(j.dz, dz, 1e-6));
        prop_assert!(dzb.norm() < 1e-6 * (1.0 + j.dz.norm()));
        prop_assert_eq!(j.dzbar, C64::new(0.0, 0.0));
    }

    #[test]
    fn geometry_identities(cc in -1i32..=1, m in mode(), n in 0.3f64..4.0, u in cplx(1.0)) {
        let spec = SurfaceSpec::new(cc, m, n).unwrap();
        let z = u * spec.default_sample_radius() * std::f64::consts::FRAC_1_SQRT_2;
        let p = at(z);
        prop_assert!(spec.structure_residual(p).unwrap().norm() < 1e-10);
        let nominal = match m { GeometryMode::Fixed => cc as f64, GeometryMode::Normalised => n * cc as f64 };
        prop_assert!((spec.gauss_curvature(p).unwrap() - nominal).abs() < 1e-9);
        let g = spec.spin_connection(p).unwrap().value();
        prop_assert_eq!(g.b, g.a.conj());
        prop_assert!(rescaling_residual(&spec, z).unwrap() < 1e-12);
    }

    #[test]
    fn vortex_equations_hold(fam in family(), f2 in poly(3, 1.0), u in cplx(1.0)) {
        let Ok(map) = RationalMap::polynomial(f2) else { return Ok(()) };
        let sol = VortexSolution::new(fam, map).unwrap();
        let z = u * fam.source().default_sample_radius() * 0.7;
        let p = at(z);
        let (r1, r2) = match (sol.residual_selfdual(p), sol.residual_vortex2(p)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => { prop_assume!(!e.is_exclusion()); panic!("{e}") }
        };
        // Scale by the size of the fields themselves.
        let s = 1.0 + sol.higgs_field(p).unwrap().v.norm_sqr();
        prop_assert!(r1.norm() < 1e-9 * s, "{}", r1.norm());
        prop_assert!(r2.norm() < 1e-9 * s, "{}", r2.norm());
        let flat = pullback_ahat(&sol, p).unwrap().curvature().unwrap().max_norm();
        prop_assert!(flat < 1e-9 * s);
        prop_assert!(flatness_decomposition(&sol, p).unwrap() < 1e-10 * s);
    }

    #[test]
    fn decomposition_holds_off_shell(fam in family(), k in cplx(0.5), u in cplx(0.5)) {
        let map = RationalMap::polynomial(Poly::from_real(&[0.1, 0.0, 0.4])).unwrap();
        let sol = VortexSolution::new(fam, map).unwrap();
        let bent = Perturbed::new(&sol, |p: CPoint| {
            let a = Jet2::coordinate(p) * Jet2::coordinate(p).conj() * k;
            OneForm::new(a.first_order(), a.conj().first_order())
        });
        let p = at(u * fam.source().default_sample_radius() * 0.5);
        let r = flatness_decomposition(&bent, p);
        prop_assume!(r.is_ok());
        prop_assert!(r.unwrap() < 1e-10);
    }

    #[test]
    fn gauge_invariance(fam in family(), coeffs in (-1.0f64..1.0, -1.0f64..1.0, cplx(1.0)), u in cplx(1.0)) {
        let map = RationalMap::polynomial(Poly::from_real(&[0.0, -0.3, 0.0, 0.5])).unwrap();
        let sol = VortexSolution::new(fam, map).unwrap();
        let (a, b, w) = coeffs;
        let beta = move |p: CPoint| {
            let z = Jet2::coordinate(p);
            let hol = z * z * w;
            z.modulus_squared() * a + (hol + hol.conj()) * 0.5 + b
        };
        let moved = GaugeTransformed::new(&sol, beta);
        let p = at(u * fam.source().default_sample_radius() * 0.7);
        let Ok(phi) = sol.higgs_field(p) else { return Ok(()) };
        let s = 1.0 + phi.v.norm_sqr();
        let d1 = (sol.residual_selfdual(p).unwrap().norm() - moved.residual_selfdual(p).unwrap().norm()).abs();
        let d2 = (sol.residual_vortex2(p).unwrap().norm() - moved.residual_vortex2(p).unwrap().norm()).abs();
        let db = (sol.baptista_factor(p).unwrap() - moved.baptista_factor(p).unwrap()).abs();
        let df = (sol.flux_density(p).unwrap() - moved.flux_density(p).unwrap()).abs();
        prop_assert!(d1.max(d2) < 1e-10 * s);
        prop_assert!(db < 1e-10 * s);
        prop_assert!(df < 1e-10 * s);
    }

    #[test]
    fn bracket_is_antisymmetric_and_jacobi(c in -1i8..=1, x in lie(2.0, 0), y in lie(2.0, 0), z in lie(2.0, 0)) {
        let re = |v: LieValue| LieValue::new(v.a0, v.ap, v.am, c);
        let (x, y, z) = (re(x), re(y), re(z));
        let xy = x.bracket(&y).unwrap();
        prop_assert!(lie_close(&xy, &y.bracket(&x).unwrap().scale((-1.0).into())) < 1e-14);
        let jac = x.bracket(&y.bracket(&z).unwrap()).unwrap()
            .add(&y.bracket(&z.bracket(&x).unwrap()).unwrap())
            .add(&z.bracket(&x.bracket(&y).unwrap()).unwrap());
        prop_assert!(jac.norm() < 1e-12);
    }

    #[test]
    fn x_fields_commute_as_the_algebra(c in -1i8..=1) {
        let [x0, xp, xm] = XField::ALL.map(|x| x.linear(c));
        prop_assert!(x0.bracket(&xp).max_abs_diff(&xp.scale(-I)) < 1e-15);
        prop_assert!(x0.bracket(&xm).max_abs_diff(&xm.scale(I)) < 1e-15);
        prop_assert!(xp.bracket(&xm).max_abs_diff(&x0.scale(I * (-2.0 * c as f64))) < 1e-15);
    }

    #[test]
    fn section_and_fibres(c in -1i8..=1, u in cplx(0.7), theta in 0.0f64..12.0) {
        let p = at(u);
        let g = section(c, p).unwrap();
        prop_assert!(g.constraint_defect() < 1e-12);
        prop_assert!((hopf_projection(&g).unwrap().z - u).norm() < 1e-14);
        let r = g.rotate(theta);
        prop_assert!(r.constraint_defect() < 1e-12);
        prop_assert!((hopf_projection(&r).unwrap().z - u).norm() < 1e-13);
        prop_assert!(maurer_cartan_table_residual(&r).unwrap() < 1e-12);
    }

    #[test]
    fn lift_matches_downstairs(fam in family(), u in cplx(1.0), theta in 0.0f64..12.0) {
        let map = RationalMap::polynomial(Poly::from_real(&[0.0, 0.2, 0.5])).unwrap();
        let sol = VortexSolution::new(fam, map).unwrap();
        let lift = Lift::new(&sol).unwrap();
        let p = at(u * fam.source().default_sample_radius() * 0.6);
        let check = match lift.pullback_check(&sol, p) {
            Ok(c) => c,
            Err(e) => { prop_assume!(!e.is_exclusion()); panic!("{e}") }
        };
        prop_assert!(check.higgs.max(check.potential) < 1e-9);
        let g = lift.group_point(&FiberedPoint::new(p, theta)).unwrap();
        prop_assert!(g.constraint_defect() < 1e-12);
        let cfg = lift.configuration(&g).unwrap();
        prop_assert!(cfg.residuals().max_norm() < 1e-9);
        prop_assert!(lift.equivariance_residual(&g).unwrap() < 1e-9);
    }

    #[test]
    fn h_is_g_squared(c0 in prop_oneof![Just(-1i8), Just(1i8)], x in (-2.0f64..2.0, -2.0f64..2.0, -2.0f64..2.0)) {
        let p = R3Point::new([x.0, x.1, x.2], c0).unwrap();
        let expected = c0 == 1 || x.0 * x.0 - x.1 * x.1 - x.2 * x.2 > -1.0;
        prop_assert_eq!(p.in_region(), expected);
        if p.c0_r2() + 1.0 <= 1e-3 {
            return Ok(());
        }
        let (h, g) = (h_map(&p).unwrap(), g_map(&p).unwrap());
        let scale = 1.0 + g.m.iter().map(|v| v.norm_sqr()).sum::<f64>();
        prop_assert!((h.m - g.m * g.m).iter().all(|d| d.norm() < 1e-12 * scale));
        prop_assert!((g.determinant() - 1.0).norm() < 1e-12 * scale);
        prop_assert!(h.point().constraint_defect() < 1e-12 * scale);
    }

    #[test]
    fn config_round_trips(
        fam in family(),
        f2 in prop::collection::vec(cplx(3.0), 2..5),
        res in 2usize..200,
        kind in prop_oneof![Just(GridKind::Disk), Just(GridKind::TwoChartSphere)],
        mask in 1u8..64,
    ) {
        let checks: Vec<CheckKind> = CheckKind::ALL.iter().enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0).map(|(_, k)| *k).collect();
        let cfg = CaseConfig {
            name: "p".into(),
            c0: fam.c0() as i32,
            c2n: fam.c2n() as i32,
            n: fam.n(),
            mode: fam.mode(),
            f1_coeffs: vec![C64::new(1.0, 0.0)],
            f2_coeffs: f2,
            grid: GridConfig { kind, resolution: res, radius: None },
            exclusion_radius: 0.01,
            tolerances: Tolerances::default(),
            checks,
            fibre_samples: 3,
        };
        let text = cfg.to_json().unwrap();
        let back: CaseConfig = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(&back, &cfg);
        prop_assert_eq!(back.to_json().unwrap(), text);
        match cfg.validate() {
            Ok(()) => prop_assert_eq!(CaseConfig::from_json(&cfg.to_json().unwrap()).unwrap(), cfg),
            Err(e) => prop_assert!(matches!(e, Error::Config(_))),
        }
    }
}
