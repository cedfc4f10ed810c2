use crate::numkit::{solve_dense, VecN};
use crate::surfaces::ImplicitDomain;
use crate::{Error, Result};

/// Multi-start nearest-point solver settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectionSettings {
    /// Number of starts: the gradient-flow retraction of `x` plus the nearest
    /// boundary seeds.
    pub starts: usize,
    /// Convergence tolerance in position, relative to the domain scale.
    pub tol: f64,
    /// Minimizers farther apart than this count as distinct.
    pub separation: f64,
    pub max_iter: usize,
}

impl Default for ProjectionSettings {
    fn default() -> Self {
        ProjectionSettings { starts: 16, tol: 1e-10, separation: 1e-6, max_iter: 200 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectionResult {
    pub foot: VecN,
    /// Signed distance, negative inside `Ω`.
    pub delta: f64,
    /// Number of distinct minimizers found; `≥ 2` means `x` is on or near the
    /// medial axis.
    pub multiplicity: usize,
    /// Stationarity residual of the returned foot.
    pub residual: f64,
}

/// Signed distance with default solver settings.
pub fn signed_distance(domain: &ImplicitDomain, x: &VecN) -> Result<ProjectionResult> {
    signed_distance_with(domain, x, &ProjectionSettings::default())
}

pub fn signed_distance_with(domain: &ImplicitDomain, x: &VecN, s: &ProjectionSettings) -> Result<ProjectionResult> {
    if x.dim() != domain.dim() {
        return Err(Error::DimMismatch { expected: domain.dim(), got: x.dim() });
    }
    if !x.is_finite() {
        return Err(Error::NonFinite { context: "projection input" });
    }
    let fx = domain.phi(x);
    if fx == 0.0 {
        return Ok(ProjectionResult { foot: *x, delta: 0.0, multiplicity: 1, residual: 0.0 });
    }

    let mut starts: Vec<VecN> = Vec::with_capacity(s.starts);
    if let Some(y) = domain.retract(x) {
        starts.push(y);
    }
    let seeds = domain.seeds();
    let k = s.starts.saturating_sub(starts.len()).min(seeds.len());
    if k > 0 {
        let mut idx: Vec<(f64, usize)> = seeds.iter().enumerate().map(|(i, p)| (p.dist(x), i)).collect();
        if k < idx.len() {
            idx.select_nth_unstable_by(k - 1, |a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            idx.truncate(k);
        }
        idx.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        starts.extend(idx.iter().map(|&(_, i)| seeds[i]));
    }
    if starts.is_empty() {
        return Err(Error::ProjectionFailed { point: x.to_vec(), best: x.to_vec(), residual: f64::INFINITY });
    }

    let scale = domain.scale();
    let mut found: Vec<(VecN, f64, f64)> = Vec::with_capacity(starts.len());
    let mut best_fail: Option<(VecN, f64)> = None;
    for y0 in &starts {
        let (y, res) = local_min(domain, x, y0, s);
        let d = y.dist(x);
        if res <= s.tol * (scale + d) {
            found.push((y, d, res));
        } else if best_fail.is_none_or(|(_, r)| res < r) {
            best_fail = Some((y, res));
        }
    }
    if found.is_empty() {
        let (b, r) = best_fail.unwrap_or((*x, f64::INFINITY));
        return Err(Error::ProjectionFailed { point: x.to_vec(), best: b.to_vec(), residual: r });
    }
    // stable: ties keep start order
    found.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (foot, dmin, residual) = found[0];
    let window = 1e-7 * (scale + dmin);
    let mut distinct: Vec<VecN> = Vec::new();
    for (y, d, _) in &found {
        if *d > dmin + window {
            break;
        }
        if distinct.iter().all(|q| q.dist(y) > s.separation * scale) {
            distinct.push(*y);
        }
    }
    let delta = if fx < 0.0 { -dmin } else { dmin };
    Ok(ProjectionResult { foot, delta, multiplicity: distinct.len(), residual })
}

/// Stationarity residual of `y` as a nearest-point candidate for `x`.
fn residual(domain: &ImplicitDomain, x: &VecN, y: &VecN) -> f64 {
    let g = domain.gradient(y);
    let gn = g.norm();
    if gn == 0.0 {
        return f64::INFINITY;
    }
    let nh = g * (1.0 / gn);
    let r = *y - *x;
    let t = r - nh * r.dot(&nh);
    t.norm() + (domain.phi(y) / gn).abs()
}

/// Projected gradient descent on `|y - x|² / 2` over `{φ = 0}`, then a Newton
/// polish of the first-order conditions.
fn local_min(domain: &ImplicitDomain, x: &VecN, y0: &VecN, s: &ProjectionSettings) -> (VecN, f64) {
    let mut y = *y0;
    let mut d = y.dist(x);
    for _ in 0..s.max_iter {
        let g = domain.gradient(&y);
        let gn = g.norm();
        if gn == 0.0 {
            break;
        }
        let nh = g * (1.0 / gn);
        let r = y - *x;
        let t = r - nh * r.dot(&nh);
        if t.norm() <= 1e-9 * (domain.scale() + d) {
            break;
        }
        let mut tau = 1.0;
        let mut moved = false;
        while tau > 1e-8 {
            if let Some(yn) = domain.retract(&(y - t * tau)) {
                let dn = yn.dist(x);
                if dn < d {
                    y = yn;
                    d = dn;
                    moved = true;
                    break;
                }
            }
            tau *= 0.5;
        }
        if !moved {
            break;
        }
    }
    let r_pg = residual(domain, x, &y);
    match newton_polish(domain, x, &y) {
        Some(yn) => {
            let r_n = residual(domain, x, &yn);
            let dn = yn.dist(x);
            if r_n <= r_pg && dn <= d + 1e-9 * (domain.scale() + d) {
                (yn, r_n)
            } else {
                (y, r_pg)
            }
        }
        None => (y, r_pg),
    }
}

/// Newton iteration on `y - x + λ∇φ(y) = 0, φ(y) = 0`.
fn newton_polish(domain: &ImplicitDomain, x: &VecN, y0: &VecN) -> Option<VecN> {
    let n = x.dim();
    let mut y = *y0;
    let g = domain.gradient(&y);
    let g2 = g.norm_sq();
    if g2 == 0.0 {
        return None;
    }
    let mut lam = -(y - *x).dot(&g) / g2;
    for _ in 0..20 {
        let g = domain.gradient(&y);
        let h = domain.hessian(&y);
        let f = domain.phi(&y);
        let mut a = vec![vec![0.0; n + 1]; n + 1];
        let mut b = vec![0.0; n + 1];
        for i in 0..n {
            for j in 0..n {
                a[i][j] = lam * h.get(i, j) + if i == j { 1.0 } else { 0.0 };
            }
            a[i][n] = g[i];
            a[n][i] = g[i];
            b[i] = y[i] - x[i] + lam * g[i];
        }
        b[n] = f;
        let step = solve_dense(a, b).ok()?;
        let dy = VecN::from_fn(n, |i| step[i]);
        y -= dy;
        lam -= step[n];
        if !y.is_finite() {
            return None;
        }
        if dy.norm() <= 1e-15 * (domain.scale() + y.norm()) {
            break;
        }
    }
    Some(y)
}
