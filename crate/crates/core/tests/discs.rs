use std::f64::consts::PI;
use std::sync::Arc;

use mconvex::discs::{
    composition_laplacian, composition_laplacian_fd, conformality_residual, harmonicity_residual,
    subharmonicity_sweep, AffineDisc, CatenoidMap, ConformalMap, FnMap, HelicoidMap, ParamDomain, Similarity,
    SweepGrid, WeierstrassEntry, WeierstrassMap,
};
use mconvex::mpsh::ClosureField;
use mconvex::numkit::VecN;
use mconvex::{Error, Exec};

fn v(x: &[f64]) -> VecN {
    VecN::new(x)
}

#[test]
fn affine_disc_is_exactly_conformal() {
    let f = AffineDisc::new(v(&[0.1, 0.2, 0.3]), v(&[0.6, 0.8, 0.0]), v(&[0.0, 0.0, 1.0]), 0.5);
    assert_eq!(conformality_residual(&f, [0.2, 0.1]).unwrap(), (0.0, 0.0));
    assert_eq!(harmonicity_residual(&f, [0.2, 0.1]).unwrap(), VecN::zeros(3));
}

#[test]
fn non_conformal_and_non_harmonic_examples() {
    let d = ParamDomain::Disc { center: [0.0, 0.0], radius: 1.0 };
    let f = FnMap::new("stretch", 3, d, |z| VecN::new(&[z[0], 2.0 * z[1], 0.0]));
    let (a, b) = conformality_residual(&f, [0.3, 0.4]).unwrap();
    assert!(a.abs() < 1e-9 && (b + 3.0).abs() < 1e-6);
    let g = FnMap::new("square", 3, d, |z| VecN::new(&[z[0] * z[0], 0.0, 0.0]));
    let lap = harmonicity_residual(&g, [0.3, 0.4]).unwrap();
    assert!((lap[0] - 2.0).abs() < 1e-5);
    let rho = ClosureField::scaled_norm_sq(3, 1.0);
    assert!(matches!(composition_laplacian(&rho, &g, [0.3, 0.4]), Err(Error::NotHarmonic { .. })));
}

#[test]
fn analytic_helicoid_and_catenoid() {
    let d = ParamDomain::Rect { lo: [-1.0, -PI], hi: [1.0, PI] };
    for f in [&HelicoidMap { domain: d } as &dyn ConformalMap, &CatenoidMap { domain: d }] {
        for z in d.lattice(5, 7) {
            let (a, b) = conformality_residual(f, z).unwrap();
            assert!(a.abs() < 1e-12 && b.abs() < 1e-12);
            assert!(harmonicity_residual(f, z).unwrap().norm() < 1e-12);
        }
    }
}

#[test]
fn weierstrass_closed_forms() {
    let ann = ParamDomain::Annulus { inner: (-1.2f64).exp(), outer: 1.2f64.exp() };
    let cat = WeierstrassMap::new(WeierstrassEntry::catenoid(), ann);
    let disc = ParamDomain::Disc { center: [1.0, 0.0], radius: 0.6 };
    let hel = WeierstrassMap::new(WeierstrassEntry::helicoid(), disc);
    for (s, t) in [(0.3f64, 0.5f64), (-0.9, 2.5), (1.1, -2.0)] {
        let z = [s.exp() * f64::cos(t), s.exp() * f64::sin(t)];
        let x = cat.jet(z).unwrap().value;
        let want = v(&[-s.cosh() * t.cos(), -s.cosh() * t.sin(), s]);
        assert!(x.dist(&want) < 1e-12, "{x:?} {want:?}");
        let (a, b) = conformality_residual(&cat, z).unwrap();
        assert!(a.abs() < 1e-8 && b.abs() < 1e-8);
        assert!(harmonicity_residual(&cat, z).unwrap().norm() < 1e-8);
    }
    for (s, t) in [(0.1f64, 0.2f64), (-0.3, -0.4), (0.4, 0.1)] {
        let z = [s.exp() * f64::cos(t), s.exp() * f64::sin(t)];
        let x = hel.jet(z).unwrap().value;
        let want = v(&[s.sinh() * t.sin(), -s.sinh() * t.cos(), -t]);
        assert!(x.dist(&want) < 1e-12, "{x:?} {want:?}");
        assert!(harmonicity_residual(&hel, z).unwrap().norm() < 1e-8);
    }
    let enn = WeierstrassMap::new(WeierstrassEntry::enneper(), ParamDomain::Disc { center: [0.0, 0.0], radius: 0.9 });
    for [x, y] in [[0.3f64, 0.2], [-0.5, 0.4], [0.1, -0.7]] {
        let got = enn.jet([x, y]).unwrap().value;
        let want = v(&[
            0.5 * (x - x * x * x / 3.0 + x * y * y),
            -0.5 * (y + x * x * y - y * y * y / 3.0),
            0.5 * (x * x - y * y),
        ]);
        assert!(got.dist(&want) < 1e-12, "{got:?} {want:?}");
        let (a, b) = conformality_residual(&enn, [x, y]).unwrap();
        assert!(a.abs() < 1e-12 && b.abs() < 1e-12);
    }
}

#[test]
fn composition_laplacian_examples() {
    let f = Similarity::scale_shift(Arc::new(HelicoidMap { domain: ParamDomain::Disc { center: [0.0, 0.0], radius: 1.0 } }), 0.5, v(&[0.1, 0.0, 0.0])).unwrap();
    let rho = ClosureField::scaled_norm_sq(3, 1.0);
    for z in [[0.1, 0.2], [-0.4, 0.3]] {
        let j = f.jet(z).unwrap();
        let lap = composition_laplacian(&rho, &f, z).unwrap();
        assert!((lap - 4.0 * j.fx.norm_sq()).abs() < 1e-12);
        let fd = composition_laplacian_fd(&rho, &f, z, 1e-4).unwrap();
        assert!((lap - fd).abs() < 1e-6);
    }
    let lin = ClosureField::affine(v(&[1.0, -2.0, 0.5]), 0.3);
    assert_eq!(composition_laplacian(&lin, &f, [0.2, 0.2]).unwrap(), 0.0);
}

#[test]
fn negative_control_sweep_flags() {
    let f = AffineDisc::new(VecN::zeros(3), v(&[1.0, 0.0, 0.0]), v(&[0.0, 1.0, 0.0]), 0.5);
    let grid = SweepGrid { n1: 8, n2: 16 };
    let good = subharmonicity_sweep(&ClosureField::scaled_norm_sq(3, 1.0), &f, grid, 1e-8, Exec::available()).unwrap();
    assert!(good.passed());
    let bad = subharmonicity_sweep(&ClosureField::scaled_norm_sq(3, -1.0), &f, grid, 1e-8, Exec::available()).unwrap();
    assert!(!bad.passed());
    assert_eq!(bad.violation_count, 128);
    assert!((bad.min_laplacian + 4.0).abs() < 1e-12);
}
