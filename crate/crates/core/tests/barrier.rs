use std::sync::Arc;

use mconvex::barrier::{
    build_barrier, choose_collar, fd_eigen_check, make_cap, make_profile, rho0, verify_barrier, BarrierFunction,
    BarrierOptions, Cap, CollarRatios, Region, SmoothingCap, VerifySpec,
};
use mconvex::mpsh::{grid_verdict, GridSpec};
use mconvex::numkit::VecN;
use mconvex::surfaces::{CatalogEntry, SurfaceKind};
use mconvex::{Error, Exec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn v(x: &[f64]) -> VecN {
    VecN::new(x)
}

fn ball() -> CatalogEntry {
    CatalogEntry::new(SurfaceKind::Sphere { n: 3, radius: 1.0 }, 1.0).unwrap()
}

fn ball_barrier(alpha: Option<f64>) -> BarrierFunction {
    let e = ball();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let opts = BarrierOptions { alpha, reach: Some(1.0), boundary: e.boundary_samples(64, &mut rng), ..Default::default() };
    build_barrier(e.domain().unwrap(), 2, 1.0, &opts).unwrap()
}

#[test]
fn profile_examples() {
    let p = make_profile(4.0, 2, 1.0).unwrap();
    assert_eq!(p.h(0.0), 0.0);
    assert_eq!(p.dh(0.0), 1.0);
    assert_eq!(p.ddh(0.0), 4.0);
    assert!((p.h(-0.25) - ((-1f64).exp() - 1.0) / 4.0).abs() < 1e-15);
    assert!((p.h(-0.25) + 0.158030).abs() < 1e-6);
    assert!((p.inverse(p.h(-0.3)) + 0.3).abs() < 1e-14);
    assert!(make_profile(1.0001, 2, 1.0).is_ok());
    assert!(make_profile(1.0, 2, 1.0).is_err());
}

#[test]
fn collar_example() {
    let p = make_profile(4.0, 2, 1.0).unwrap();
    assert!((p.threshold_radius() - 4f64.ln() / 4.0).abs() < 1e-14);
    let c = choose_collar(&p, 1.0, 0.99, CollarRatios::default()).unwrap();
    assert!((c.eps0_prime - 0.343108).abs() < 1e-6, "{c:?}");
    assert!(c.eps1 < c.eps2 && c.eps2 < c.eps0 && c.eps0 < c.eps0_prime);
    assert!(p.ddh(-c.eps0_prime) > 1.0);
    assert!(choose_collar(&p, 1.0, 0.0, CollarRatios::default()).is_err());
    for alpha in [1.5, 3.0, 10.0, 100.0, 1e4] {
        let p = make_profile(alpha, 2, 1.0).unwrap();
        let c = choose_collar(&p, 1.0, 0.99, CollarRatios::default()).unwrap();
        assert!(p.ddh(-c.eps0_prime) > 1.0, "alpha {alpha}");
    }
}

#[test]
fn rho0_example() {
    let e = ball();
    let p = make_profile(4.0, 2, 1.0).unwrap();
    let c = choose_collar(&p, 1.0, 0.99, CollarRatios::default()).unwrap();
    let r = rho0(e.domain().unwrap(), &c, &p, &v(&[0.9, 0.0, 0.0])).unwrap();
    assert!((r + 0.082420).abs() < 1e-6, "{r}");
    assert_eq!(rho0(e.domain().unwrap(), &c, &p, &v(&[0.0, 1.0, 0.0])).unwrap().abs(), 0.0);
    let deep = rho0(e.domain().unwrap(), &c, &p, &v(&[0.1, 0.0, 0.0])).unwrap();
    assert_eq!(deep, p.h(-c.eps0));
}

#[test]
fn cap_shape() {
    for degree in [3, 5, 7] {
        let cap = SmoothingCap::new(-2.0, -1.0, degree).unwrap();
        assert_eq!(cap.value(-0.5), -0.5);
        assert_eq!(cap.d1(-0.5), 1.0);
        assert_eq!(cap.d1(-3.0), 0.0);
        assert!((cap.d1(-1.5) - 0.5).abs() < 1e-15);
        assert!((cap.value(-3.0) + 1.5).abs() < 1e-15);
        let h = 1e-6;
        for t in [-1.9, -1.6, -1.2] {
            assert!((cap.value(t + h) - cap.value(t - h)) / (2.0 * h) - cap.d1(t) < 1e-8);
            assert!(cap.d2(t) >= 0.0);
        }
    }
    assert!(SmoothingCap::new(-1.0, -1.0, 3).is_err());
    assert!(SmoothingCap::new(-2.0, -1.0, 4).is_err());
}

#[test]
fn cap_is_c2_at_the_seams() {
    let p = make_profile(2.0, 2, 1.0).unwrap();
    let c = choose_collar(&p, 1.0, 0.99, CollarRatios::default()).unwrap();
    let cap = make_cap(&c, &p, 3).unwrap();
    for t in [cap.lo(), cap.hi()] {
        let e = 1e-12;
        assert!((cap.d1(t - e) - cap.d1(t + e)).abs() < 1e-9);
        assert!((cap.d2(t - e) - cap.d2(t + e)).abs() < 1e-6);
    }
}

#[test]
fn ball_barrier_passes_all_checks() {
    let bf = ball_barrier(None);
    let e = ball();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let samples: Vec<VecN> = GridSpec::cube(3, 1.0, 12).points().into_iter().filter(|x| x.norm() < 1.0).collect();
    let spec = VerifySpec::new(samples, e.boundary_samples(64, &mut rng));
    let rep = verify_barrier(&bf, &spec).unwrap();
    for c in &rep.checks {
        assert!(c.passed(), "{c:?}");
    }
    assert_eq!(rep.grid.violated, 0);
    assert!(rep.level_std_max <= 1e-7, "{}", rep.level_std_max);
}

#[test]
fn ball_barrier_values() {
    let bf = ball_barrier(None);
    assert!(bf.value_at(&v(&[0.0, 0.0, 1.0])).unwrap().abs() < 1e-12);
    let j = bf.evaluate(&v(&[0.0, 0.0, 0.0])).unwrap();
    assert_eq!(j.region, Region::Plateau);
    assert_eq!(j.value, bf.plateau_value());
    let t = -0.5;
    let d = bf.level_delta(t);
    let x = v(&[1.0 + d, 0.0, 0.0]);
    assert!((bf.value_at(&x).unwrap() - t).abs() < 1e-12);
    assert!((bf.value_at(&v(&[1.0 - bf.collar().eps1, 0.0, 0.0])).unwrap() + 1.0).abs() < 1e-12);
}

#[test]
fn ball_spectrum_matches_fd() {
    let bf = ball_barrier(Some(4.0));
    let j = bf.evaluate(&v(&[0.9, 0.0, 0.0])).unwrap();
    let list = bf.eigenvalue_list(&j);
    let nu = 1.0 / 0.9;
    let (h1, h2) = (bf.profile().dh(-0.1), bf.profile().ddh(-0.1));
    let c = bf.scale();
    // eps1 < 0.1 here, so the point sits in the transition of the cap
    assert_eq!(j.region, Region::Transition);
    let (k1, k2) = (bf.cap().d1(j.rho0), bf.cap().d2(j.rho0));
    assert!(k1 > 0.0 && k1 < 1.0);
    let mut want = vec![c * k1 * h1 * nu, c * k1 * h1 * nu, c * (k1 * h2 + k2 * h1 * h1)];
    want.sort_by(f64::total_cmp);
    for (a, b) in list.iter().zip(&want) {
        assert!((a - b).abs() < 1e-9 * b.abs(), "{list:?} {want:?}");
    }
    let s = fd_eigen_check(&bf, &[v(&[0.9, 0.0, 0.0]), v(&[0.0, 0.6, 0.75])], 2e-5, 1e-6, Exec::Sequential).unwrap();
    assert!(s.passed(), "{s:?}");
}

#[test]
fn halfspace_barrier_spectrum() {
    let e = CatalogEntry::new(SurfaceKind::Plane { n: 3 }, 2.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let opts = BarrierOptions { reach: Some(1.0), boundary: e.boundary_samples(16, &mut rng), ..Default::default() };
    let bf = build_barrier(e.domain().unwrap(), 2, 1.0, &opts).unwrap();
    let j = bf.evaluate(&v(&[0.3, -0.2, -0.05])).unwrap();
    let list = bf.eigenvalue_list(&j);
    assert!(list[0].abs() < 1e-12 && list[1].abs() < 1e-12 && list[2] > 0.0);
}

#[test]
fn non_convex_and_thin_reach_are_rejected() {
    let e = CatalogEntry::new(SurfaceKind::Catenoid { scale: 1.0 }, 1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let opts = BarrierOptions { reach: Some(1.0), boundary: e.boundary_samples(16, &mut rng), ..Default::default() };
    assert!(matches!(build_barrier(e.domain().unwrap(), 1, 0.5, &opts), Err(Error::NotMConvex { .. })));
    assert!(matches!(build_barrier(e.domain().unwrap(), 2, 1.5, &opts), Err(Error::ReachTooSmall { .. })));
}

#[derive(Debug)]
struct Tampered(SmoothingCap);

impl Cap for Tampered {
    fn value(&self, t: f64) -> f64 {
        self.0.value(t)
    }
    fn d1(&self, t: f64) -> f64 {
        self.0.d1(t)
    }
    fn d2(&self, t: f64) -> f64 {
        if t > self.lo() && t < self.hi() {
            -50.0 / (self.hi() - self.lo())
        } else {
            self.0.d2(t)
        }
    }
    fn lo(&self) -> f64 {
        self.0.lo()
    }
    fn hi(&self) -> f64 {
        self.0.hi()
    }
}

#[test]
fn tampered_cap_is_caught() {
    let bf = ball_barrier(None);
    let inner = SmoothingCap::new(bf.cap().lo(), bf.cap().hi(), 3).unwrap();
    let bf = bf.with_cap(Arc::new(Tampered(inner)));
    let rep = grid_verdict(&bf, &GridSpec::cube(3, 1.0, 12).points().into_iter().filter(|x| x.norm() < 1.0).collect::<Vec<_>>(), 2, Some(1e-8), Exec::available()).unwrap();
    assert!(rep.violated > 0);
}

