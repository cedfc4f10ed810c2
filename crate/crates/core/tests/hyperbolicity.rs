use mconvex::hyperbolicity::{bck_metric, metric_upper_bound, DiscSearchSpec};
use mconvex::numkit::VecN;
use mconvex::surfaces::{CatalogEntry, ImplicitDomain, SurfaceKind};
use mconvex::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn v(x: &[f64]) -> VecN {
    VecN::new(x)
}

fn ball(r: f64) -> ImplicitDomain {
    CatalogEntry::new(SurfaceKind::Sphere { n: 3, radius: r }, 1.0).unwrap().domain().unwrap().clone()
}

#[test]
fn bck_examples() {
    assert_eq!(bck_metric(&VecN::zeros(3), &v(&[0.0, 0.3, 0.4])).unwrap(), 0.5);
    assert!((bck_metric(&v(&[0.5, 0.0, 0.0]), &v(&[1.0, 0.0, 0.0])).unwrap() - 4.0 / 3.0).abs() < 1e-15);
    assert!((bck_metric(&v(&[0.5, 0.0, 0.0]), &v(&[0.0, 1.0, 0.0])).unwrap() - 1.0 / 0.75f64.sqrt()).abs() < 1e-15);
    assert!(matches!(bck_metric(&v(&[1.0, 0.0, 0.0]), &v(&[1.0, 0.0, 0.0])), Err(Error::OutsideDomain { .. })));
}

#[test]
fn disc_search_matches_bck_examples() {
    let d = ball(1.0);
    let spec = DiscSearchSpec::default();
    for (p, w) in [
        (v(&[0.0, 0.0, 0.0]), v(&[0.0, 0.0, 1.0])),
        (v(&[0.5, 0.0, 0.0]), v(&[1.0, 0.0, 0.0])),
        (v(&[0.5, 0.0, 0.0]), v(&[0.0, 1.0, 0.0])),
        (v(&[0.3, -0.4, 0.2]), v(&[0.2, 0.7, -1.0])),
    ] {
        let est = metric_upper_bound(&d, &p, &w, &spec).unwrap();
        let want = bck_metric(&p, &w).unwrap();
        assert!(est.bound >= want - 1e-6 && est.bound <= 1.01 * want, "{p:?} {w:?}: {} vs {want}", est.bound);
    }
}

#[test]
fn random_pairs_on_the_ball() {
    let d = ball(1.0);
    let spec = DiscSearchSpec::default();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..10 {
        let p = loop {
            let p = VecN::from_fn(3, |_| rng.random_range(-0.9..0.9));
            if p.norm() <= 0.9 {
                break p;
            }
        };
        let w = VecN::from_fn(3, |_| rng.random_range(-1.0..1.0));
        let est = metric_upper_bound(&d, &p, &w, &spec).unwrap();
        let want = bck_metric(&p, &w).unwrap();
        assert!(est.bound >= want - 1e-6 && est.bound <= 1.01 * want, "{p:?} {w:?}: {} vs {want}", est.bound);
    }
}

#[test]
fn monotone_under_inclusion() {
    let small = ball(1.0);
    let big = ball(1.5);
    let spec = DiscSearchSpec::default();
    for (p, w) in [(v(&[0.2, 0.1, 0.0]), v(&[0.0, 1.0, 0.0])), (v(&[0.6, 0.0, 0.3]), v(&[1.0, 1.0, 0.0]))] {
        let a = metric_upper_bound(&small, &p, &w, &spec).unwrap().bound;
        let b = metric_upper_bound(&big, &p, &w, &spec).unwrap().bound;
        assert!(a >= b - 1e-6, "{a} < {b}");
    }
}

#[test]
fn preconditions() {
    let d = ball(1.0);
    let spec = DiscSearchSpec::default();
    assert!(matches!(metric_upper_bound(&d, &v(&[2.0, 0.0, 0.0]), &v(&[1.0, 0.0, 0.0]), &spec), Err(Error::OutsideDomain { .. })));
    assert!(metric_upper_bound(&d, &VecN::zeros(3), &VecN::zeros(3), &spec).is_err());
}

#[test]
fn witness_disc_lies_inside() {
    let d = ball(1.0);
    let p = v(&[0.4, 0.3, 0.0]);
    let est = metric_upper_bound(&d, &p, &v(&[0.0, 0.0, 1.0]), &DiscSearchSpec::default()).unwrap();
    let c = p + est.center_offset;
    for k in 0..360 {
        let t = k as f64 * std::f64::consts::PI / 180.0;
        let x = c + (est.plane[0] * t.cos() + est.plane[1] * t.sin()) * est.radius;
        assert!(d.phi(&x) < 0.0);
    }
    assert_eq!(est.label, "upper bound only");
}
