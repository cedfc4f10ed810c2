use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::numkit::VecN;
use crate::surfaces::{tangent_frame, ImplicitDomain};
use crate::{Error, Exec, Result};

/// Closed-form Klein-model length of `v` at `p` in the unit ball.
pub fn bck_metric(p: &VecN, v: &VecN) -> Result<f64> {
    let s = 1.0 - p.norm_sq();
    if s <= 0.0 {
        return Err(Error::OutsideDomain { point: p.to_vec() });
    }
    let pv = p.dot(v);
    Ok((v.norm_sq() / s + pv * pv / (s * s)).sqrt())
}

/// Parameters of the extremal-disc search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscSearchSpec {
    /// Coarse orientation samples of the disc plane around `v`.
    pub orientations: usize,
    /// Golden-section refinement tolerance for the orientation, radians.
    pub angle_tol: f64,
    /// Rays used to measure the inscribed radius around a centre.
    pub rays: usize,
    /// Radii and angles of the containment lattice.
    pub lattice: (usize, usize),
    /// Extra points on the boundary circle of the witnessing disc.
    pub boundary_points: usize,
    /// Relative enlargement of the disc used in the containment test.
    pub margin: f64,
    /// Radii beyond this count as unbounded.
    pub max_radius: f64,
    /// Random orientations tried in dimension above 3.
    pub random_directions: usize,
    pub seed: u64,
    pub exec: Exec,
}

impl Default for DiscSearchSpec {
    fn default() -> Self {
        DiscSearchSpec {
            orientations: 8,
            angle_tol: 1e-3,
            rays: 64,
            lattice: (32, 64),
            boundary_points: 128,
            margin: 1e-9,
            max_radius: 1e3,
            random_directions: 16,
            seed: 0,
            exec: Exec::available(),
        }
    }
}

/// An upper bound for `g_Ω(p, v)` with the disc that witnesses it.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricEstimate {
    pub point: VecN,
    pub direction: VecN,
    pub bound: f64,
    /// Orthonormal pair spanning the disc plane; the first is `v/|v|`.
    pub plane: [VecN; 2],
    /// Disc centre minus `p`.
    pub center_offset: VecN,
    /// Euclidean radius of the affine disc.
    pub radius: f64,
    /// `|f_x(0)|` after the Möbius reparametrization, per unit `|v|`.
    pub r: f64,
    pub label: &'static str,
}

struct Plane<'a> {
    domain: &'a ImplicitDomain,
    p: VecN,
    e1: VecN,
    e2: VecN,
    spec: &'a DiscSearchSpec,
}

impl Plane<'_> {
    fn at(&self, a: [f64; 2]) -> VecN {
        self.p + self.e1 * a[0] + self.e2 * a[1]
    }

    /// Distance from `c` to the first exit along `d`, searching no further
    /// than `cap`. Returns `cap` when no exit is found.
    fn exit(&self, c: &VecN, d: &VecN, cap: f64) -> f64 {
        let inside = |s: f64| self.domain.phi(&(*c + *d * s)) < 0.0;
        let mut lo = 0.0;
        let mut step = 1e-3 * self.domain.scale();
        loop {
            let s = (lo + step).min(cap);
            if !inside(s) {
                let mut hi = s;
                while hi - lo > 1e-11 * (1.0 + hi) {
                    let mid = 0.5 * (lo + hi);
                    if inside(mid) {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                return lo;
            }
            if s >= cap {
                return cap;
            }
            lo = s;
            step *= 1.25;
        }
    }

    /// Inscribed radius of the planar section around `c`.
    fn inscribed(&self, c: &VecN) -> f64 {
        if self.domain.phi(c) >= 0.0 {
            return 0.0;
        }
        let mut best = self.spec.max_radius;
        for k in 0..self.spec.rays {
            let t = 2.0 * PI * k as f64 / self.spec.rays as f64;
            let d = self.e1 * t.cos() + self.e2 * t.sin();
            best = self.exit(c, &d, best);
        }
        best * (1.0 - 1e-6)
    }

    /// `(r, R)` for the disc centred at offset `a`.
    fn score(&self, a: [f64; 2]) -> (f64, f64) {
        let rr = self.inscribed(&self.at(a));
        let a2 = a[0] * a[0] + a[1] * a[1];
        if rr * rr <= a2 {
            (0.0, rr)
        } else {
            ((rr * rr - a2) / rr, rr)
        }
    }

    fn contained(&self, a: [f64; 2], radius: f64) -> bool {
        let c = self.at(a);
        let big = radius * (1.0 + self.spec.margin);
        let (nr, nt) = self.spec.lattice;
        let ok = |s: f64, t: f64| self.domain.phi(&(c + (self.e1 * t.cos() + self.e2 * t.sin()) * s)) < 0.0;
        for i in 0..nr {
            let s = big * (i as f64 + 1.0) / nr as f64;
            for j in 0..nt {
                if !ok(s, 2.0 * PI * j as f64 / nt as f64) {
                    return false;
                }
            }
        }
        (0..self.spec.boundary_points).all(|j| ok(big, 2.0 * PI * (j as f64 + 0.5) / self.spec.boundary_points as f64))
    }

    /// Best disc in this plane: coarse scan of centres, then Nelder-Mead.
    fn optimize(&self) -> ([f64; 2], f64, f64) {
        let r0 = self.inscribed(&self.p);
        let mut best = ([0.0, 0.0], self.score([0.0, 0.0]));
        for frac in [0.25, 0.5, 0.75] {
            for j in 0..8 {
                let t = 2.0 * PI * j as f64 / 8.0;
                let a = [frac * r0 * t.cos(), frac * r0 * t.sin()];
                let s = self.score(a);
                if s.0 > best.1 .0 {
                    best = (a, s);
                }
            }
        }
        let a = nelder_mead(|a| -self.score(a).0, best.0, 0.1 * r0.min(self.spec.max_radius), 1e-9 * r0.max(1e-300));
        let s = self.score(a);
        if s.0 >= best.1 .0 {
            (a, s.0, s.1)
        } else {
            (best.0, best.1 .0, best.1 .1)
        }
    }
}

fn nelder_mead(f: impl Fn([f64; 2]) -> f64, x0: [f64; 2], size: f64, tol: f64) -> [f64; 2] {
    let mut s = [x0, [x0[0] + size, x0[1]], [x0[0], x0[1] + size]];
    let mut v = s.map(&f);
    for _ in 0..400 {
        let mut idx = [0, 1, 2];
        idx.sort_by(|&i, &j| v[i].total_cmp(&v[j]));
        s = idx.map(|i| s[i]);
        v = idx.map(|i| v[i]);
        let spread = (s[1][0] - s[0][0]).hypot(s[1][1] - s[0][1]).max((s[2][0] - s[0][0]).hypot(s[2][1] - s[0][1]));
        if spread < tol {
            break;
        }
        let c = [0.5 * (s[0][0] + s[1][0]), 0.5 * (s[0][1] + s[1][1])];
        let lerp = |t: f64| [c[0] + t * (s[2][0] - c[0]), c[1] + t * (s[2][1] - c[1])];
        let xr = lerp(-1.0);
        let fr = f(xr);
        if fr < v[0] {
            let xe = lerp(-2.0);
            let fe = f(xe);
            if fe < fr {
                s[2] = xe;
                v[2] = fe;
            } else {
                s[2] = xr;
                v[2] = fr;
            }
        } else if fr < v[1] {
            s[2] = xr;
            v[2] = fr;
        } else {
            let xc = if fr < v[2] { lerp(-0.5) } else { lerp(0.5) };
            let fc = f(xc);
            if fc < v[2].min(fr) {
                s[2] = xc;
                v[2] = fc;
            } else {
                for k in 1..3 {
                    s[k] = [0.5 * (s[0][0] + s[k][0]), 0.5 * (s[0][1] + s[k][1])];
                    v[k] = f(s[k]);
                }
            }
        }
    }
    let best = (0..3).min_by(|&i, &j| v[i].total_cmp(&v[j])).unwrap_or(0);
    s[best]
}

struct Candidate {
    e2: VecN,
    a: [f64; 2],
    r: f64,
    radius: f64,
}

/// Searches affine discs through `p` tangent to `v`, composed with disc
/// automorphisms, for the largest derivative `r`; returns `|v|/r`.
///
/// The result is always an upper bound for `g_Ω(p, v)`; on the unit ball it
/// reproduces the Klein metric.
pub fn metric_upper_bound(domain: &ImplicitDomain, p: &VecN, v: &VecN, spec: &DiscSearchSpec) -> Result<MetricEstimate> {
    let n = domain.dim();
    if p.dim() != n || v.dim() != n {
        return Err(Error::DimMismatch { expected: n, got: p.dim().max(v.dim()) });
    }
    if n < 2 {
        return Err(Error::Dimension(n));
    }
    if !(domain.phi(p) < 0.0) {
        return Err(Error::OutsideDomain { point: p.to_vec() });
    }
    let e1 = v.normalized().ok_or_else(|| Error::invalid("v", "must be nonzero"))?;
    let frame = tangent_frame(&e1);
    let solve = |e2: VecN| -> Candidate {
        let pl = Plane { domain, p: *p, e1, e2, spec };
        let (a, r, radius) = pl.optimize();
        Candidate { e2, a, r, radius }
    };

    let best = if n == 2 {
        solve(frame[0])
    } else if n == 3 {
        let dir = |t: f64| frame[0] * t.cos() + frame[1] * t.sin();
        let k = spec.orientations.max(2);
        let coarse = spec.exec.map_range(k, |j| solve(dir(PI * j as f64 / k as f64)));
        let j0 = argmax(&coarse);
        let t0 = PI * j0 as f64 / k as f64;
        let h = PI / k as f64;
        let refined = golden_max(|t| solve(dir(t)).r, t0 - h, t0 + h, spec.angle_tol);
        let cand = solve(dir(refined));
        if cand.r > coarse[j0].r {
            cand
        } else {
            coarse.into_iter().nth(j0).expect("nonempty")
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        let mut dirs: Vec<VecN> = frame.clone();
        for _ in 0..spec.random_directions {
            let g = VecN::from_fn(n - 1, |_| StandardNormal.sample(&mut rng));
            let mut d = VecN::zeros(n);
            for (i, f) in frame.iter().enumerate() {
                d += *f * g[i];
            }
            if let Some(d) = d.normalized() {
                dirs.push(d);
            }
        }
        let cands = spec.exec.map(&dirs, |d| solve(*d));
        let mut best = cands.into_iter().max_by(|a, b| a.r.total_cmp(&b.r)).expect("nonempty");
        // rotate the best direction towards each frame vector
        for f in &frame {
            let w = *f - best.e2 * best.e2.dot(f);
            let Some(w) = w.normalized() else { continue };
            let e2 = best.e2;
            let t = golden_max(|t| solve(e2 * t.cos() + w * t.sin()).r, -PI / 2.0, PI / 2.0, spec.angle_tol);
            let c = solve(e2 * t.cos() + w * t.sin());
            if c.r > best.r {
                best = c;
            }
        }
        best
    };

    let pl = Plane { domain, p: *p, e1, e2: best.e2, spec };
    let mut radius = best.radius;
    let a = best.a;
    let a2 = a[0] * a[0] + a[1] * a[1];
    let mut ok = false;
    for _ in 0..60 {
        if radius * radius > a2 && pl.contained(a, radius) {
            ok = true;
            break;
        }
        radius *= 0.999;
    }
    if !ok || radius <= 0.0 {
        return Ok(MetricEstimate {
            point: *p,
            direction: *v,
            bound: f64::INFINITY,
            plane: [e1, best.e2],
            center_offset: e1 * a[0] + best.e2 * a[1],
            radius: 0.0,
            r: 0.0,
            label: "no admissible disc found",
        });
    }
    let r = (radius * radius - a2) / radius;
    Ok(MetricEstimate {
        point: *p,
        direction: *v,
        bound: v.norm() / r,
        plane: [e1, best.e2],
        center_offset: e1 * a[0] + best.e2 * a[1],
        radius,
        r,
        label: "upper bound only",
    })
}

fn argmax(c: &[Candidate]) -> usize {
    let mut j = 0;
    for (i, x) in c.iter().enumerate() {
        if x.r > c[j].r {
            j = i;
        }
    }
    j
}

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while b - a > tol {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        }
    }
    0.5 * (a + b)
}
