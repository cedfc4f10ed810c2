use mconvex::mpsh::{
    grid_verdict, is_m_psh_at, min_m_trace, minimizing_plane, random_plane, trace_on_plane, ClosureField, GridSpec,
    MPlane, Verdict,
};
use mconvex::numkit::{SymMat, VecN};
use mconvex::{Error, Exec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn e(n: usize, i: usize) -> VecN {
    VecN::basis(n, i)
}

#[test]
fn trace_examples() {
    let p = MPlane::new(vec![e(3, 0), e(3, 1)]).unwrap();
    assert_eq!(trace_on_plane(&SymMat::identity(3), &p).unwrap(), 2.0);
    let h = SymMat::diag(&[-1.0, 2.0, 5.0]);
    assert_eq!(trace_on_plane(&h, &p).unwrap(), 1.0);
    assert!((min_m_trace(&h, 2).unwrap() - 1.0).abs() < 1e-14);
    assert_eq!(min_m_trace(&SymMat::zeros(3), 3).unwrap(), 0.0);
    assert!(matches!(min_m_trace(&h, 4), Err(Error::MOutOfRange { .. })));
    assert!(MPlane::new(vec![e(3, 0), e(3, 0) * 0.5 + e(3, 1)]).is_err());
}

#[test]
fn min_trace_is_the_infimum_over_planes() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut h = SymMat::zeros(4);
    for i in 0..4 {
        for j in i..4 {
            h.set(i, j, rng.random_range(-1.0..1.0));
        }
    }
    let want = min_m_trace(&h, 2).unwrap();
    let best = minimizing_plane(&h, 2).unwrap();
    assert!((trace_on_plane(&h, &best).unwrap() - want).abs() < 1e-12);
    let mut lowest = f64::INFINITY;
    for _ in 0..10_000 {
        let t = trace_on_plane(&h, &random_plane(4, 2, &mut rng)).unwrap();
        assert!(t >= want - 1e-9);
        lowest = lowest.min(t);
    }
    assert!(lowest - want < 1e-3 * (1.0 + want.abs()) * 10.0, "{lowest} vs {want}");
}

#[test]
fn pointwise_verdicts() {
    let x = VecN::new(&[0.3, -0.1, 0.7]);
    let v = is_m_psh_at(&ClosureField::scaled_norm_sq(3, 1.0), &x, 2, None).unwrap();
    assert_eq!(v.verdict, Verdict::StrictlyPsh);
    assert!((v.margin - 4.0).abs() < 1e-12);
    let saddle = ClosureField::quadratic(SymMat::diag(&[2.0, -2.0, 0.0]));
    // harmonic on the (x1, x2)-plane, but the infimum over 2-planes is -2
    let p12 = MPlane::new(vec![e(3, 0), e(3, 1)]).unwrap();
    assert_eq!(trace_on_plane(&SymMat::diag(&[2.0, -2.0, 0.0]), &p12).unwrap(), 0.0);
    let v = is_m_psh_at(&saddle, &x, 2, None).unwrap();
    assert_eq!(v.verdict, Verdict::Violated);
    assert!((v.margin + 2.0).abs() < 1e-12);
    let v = is_m_psh_at(&saddle, &x, 3, None).unwrap();
    assert_eq!(v.verdict, Verdict::Psh);
    assert!(v.margin.abs() < 1e-12);
    let v = is_m_psh_at(&ClosureField::scaled_norm_sq(3, -1.0), &x, 2, None).unwrap();
    assert_eq!(v.verdict, Verdict::Violated);
    assert!((v.margin + 4.0).abs() < 1e-12);
}

#[test]
fn grid_reports() {
    let pts = GridSpec::cube(3, 1.0, 6).points();
    assert_eq!(pts.len(), 216);
    let r = grid_verdict(&ClosureField::scaled_norm_sq(3, 1.0), &pts, 2, None, Exec::available()).unwrap();
    assert_eq!(r.strict, 216);
    let r = grid_verdict(&ClosureField::scaled_norm_sq(3, -1.0), &pts, 2, None, Exec::available()).unwrap();
    assert_eq!(r.violated, 216);
    assert_eq!(r.violations.len(), 64);
    let s = grid_verdict(&ClosureField::scaled_norm_sq(3, -1.0), &pts, 2, None, Exec::Sequential).unwrap();
    assert_eq!(r, s);
}
