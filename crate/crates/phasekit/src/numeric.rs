//! Shared numerical machinery: Gauss-Legendre quadrature, bracketing
//! bisection, least-squares line fits, parabolic peak refinement, and a few
//! planar geometry helpers.

use std::f64::consts::PI;

use crate::model::SpacePoint;

/// Gauss-Legendre quadrature rule on `[-1, 1]`, mapped affinely to arbitrary
/// finite intervals by [`GaussLegendre::integrate`].
///
/// Nodes and weights are computed by Newton iteration on the Legendre
/// polynomial, so any order is available; the computation is deterministic.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Builds the rule of the given order (number of nodes).
    ///
    /// Panics if `order == 0`.
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "quadrature order must be at least 1");
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let half = n.div_ceil(2);
        for i in 0..half {
            // Tricomi-style initial guess for the i-th root of P_n.
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-15 * x.abs().max(1.0) {
                    let (_, d) = legendre_with_derivative(n, x);
                    dp = d;
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = x;
            nodes[n - 1 - i] = -x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Integrates `f` over `[a, b]` with this rule.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        half * acc
    }
}

/// Evaluates `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    debug_assert!(n >= 1);
    let mut prev = 1.0;
    let mut cur = x;
    for k in 2..=n {
        let kf = k as f64;
        let next = ((2.0 * kf - 1.0) * x * cur - (kf - 1.0) * prev) / kf;
        prev = cur;
        cur = next;
    }
    let dp = n as f64 * (x * cur - prev) / (x * x - 1.0);
    (cur, dp)
}

/// Bisection on a bracketed sign change.
///
/// Requires `f(lo)` and `f(hi)` to have opposite signs; returns `None`
/// otherwise. Converges on the abscissa to `rel_tol * max(1, |x|)`.
pub fn bisect<F: Fn(f64) -> f64>(
    mut lo: f64,
    mut hi: f64,
    f: F,
    rel_tol: f64,
    max_iter: usize,
) -> Option<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Some(lo);
    }
    if fhi == 0.0 {
        return Some(hi);
    }
    if flo.signum() == fhi.signum() {
        return None;
    }
    for _ in 0..max_iter {
        let mid = 0.5 * (lo + hi);
        if (hi - lo).abs() <= rel_tol * mid.abs().max(1.0) {
            return Some(mid);
        }
        let fmid = f(mid);
        if fmid == 0.0 {
            return Some(mid);
        }
        if fmid.signum() == flo.signum() {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Least-squares line fit `y = slope * x + intercept`.
///
/// Returns `None` for fewer than two points or a degenerate abscissa spread.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Option<(f64, f64)> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return None;
    }
    let n = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mean_x) * (x - mean_x);
        sxy += (x - mean_x) * (y - mean_y);
    }
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    Some((slope, mean_y - slope * mean_x))
}

/// Vertex offset of the parabola through `(-1, y0)`, `(0, y1)`, `(1, y2)`.
///
/// Returns the offset in `[-1, 1]` when the triple is concave down (a genuine
/// maximum), `None` otherwise.
pub fn parabolic_peak_offset(y0: f64, y1: f64, y2: f64) -> Option<f64> {
    let denom = y0 - 2.0 * y1 + y2;
    if denom.is_nan() || denom >= 0.0 {
        return None;
    }
    let delta = 0.5 * (y0 - y2) / denom;
    (delta.abs() <= 1.0).then_some(delta)
}

/// Distance from point `p` to the closed segment `[a, b]`.
pub fn segment_point_distance(a: SpacePoint, b: SpacePoint, p: SpacePoint) -> f64 {
    let dx = b.x - a.x;
    let dy = b.y - a.y;
    let len2 = dx * dx + dy * dy;
    if len2 == 0.0 {
        return p.distance_to(a);
    }
    let t = (((p.x - a.x) * dx + (p.y - a.y) * dy) / len2).clamp(0.0, 1.0);
    let cx = a.x + t * dx;
    let cy = a.y + t * dy;
    ((p.x - cx).powi(2) + (p.y - cy).powi(2)).sqrt()
}

/// Winding number of the closed polygon `vertices` (implicitly closed from
/// the last vertex back to the first) around `p`, by summing signed turn
/// angles. Undefined if `p` lies on the polygon.
pub fn winding_number(vertices: &[SpacePoint], p: SpacePoint) -> i32 {
    let n = vertices.len();
    if n < 3 {
        return 0;
    }
    let mut total = 0.0;
    for i in 0..n {
        let a = vertices[i];
        let b = vertices[(i + 1) % n];
        let (ax, ay) = (a.x - p.x, a.y - p.y);
        let (bx, by) = (b.x - p.x, b.y - p.y);
        let cross = ax * by - ay * bx;
        let dot = ax * bx + ay * by;
        total += cross.atan2(dot);
    }
    (total / (2.0 * PI)).round() as i32
}
