//! Path-phase amplitude engine.
//!
//! A path of momentum magnitude `p` through a vector potential `A`
//! accumulates the real action phase `(p * arc_length + q * integral(A.dl)) / kappa`,
//! and its amplitude is the unit-modulus complex exponential of that phase.
//! Finitely many paths superpose by plain complex addition, and intensities
//! are squared moduli.

use num_complex::Complex64;
use thiserror::Error;

use crate::model::{FieldSpec, ModelParams, Path, Solenoid, SpacePoint};
use crate::numeric::{segment_point_distance, GaussLegendre};

/// Unit-modulus complex amplitude of a single path (sums of amplitudes may
/// have any modulus).
pub type Amplitude = Complex64;

/// Default Gauss-Legendre order for vector-potential line integrals.
pub const DEFAULT_GL_ORDER: usize = 16;

/// Default finite-difference step for [`verify_momentum_relation`],
/// balancing truncation against round-off at double precision.
pub const DEFAULT_FD_STEP: f64 = 1e-4;

/// Panels are split until their length is at most this multiple of their
/// distance to the solenoid center, which keeps the vortex kernel smooth on
/// every panel regardless of how close a long chord passes to the core.
const SOLENOID_PANEL_RATIO: f64 = 0.5;

/// Tolerance for the shared-endpoint precondition of [`average_momentum`].
const ENDPOINT_MATCH_TOL: f64 = 1e-9;

/// Below this superposed modulus the momentum average is reported as
/// divergent rather than returning a meaningless quotient.
const DIVERGENCE_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PhaseError {
    #[error(
        "path segment {index} passes within the solenoid core \
         (distance {distance:.6e} < core radius {core_radius:.6e})"
    )]
    PathIntersectsSolenoidCore {
        index: usize,
        distance: f64,
        core_radius: f64,
    },
    #[error("amplitude list is empty")]
    EmptyList,
    #[error("path {index} does not share the common start and end points")]
    MismatchedEndpoints { index: usize },
    #[error("superposed amplitude modulus {modulus:.3e} is below the divergence threshold")]
    DivergentAverage { modulus: f64 },
    #[error("finite-difference step must be positive and finite, got {step}")]
    NonPositiveStep { step: f64 },
}

/// Vector potential of `field` at `point`.
pub fn vector_potential(field: &FieldSpec, point: SpacePoint) -> (f64, f64) {
    match field {
        FieldSpec::None => (0.0, 0.0),
        FieldSpec::IdealSolenoid(s) => s.vector_potential(point),
        FieldSpec::Gradient(g) => g.gradient_at(point),
    }
}

fn lerp(a: SpacePoint, b: SpacePoint, t: f64) -> SpacePoint {
    SpacePoint::new(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y))
}

/// Line integral of the solenoid potential along the segment `[a, b]`,
/// assuming the segment stays outside the core. Panels are refined towards
/// the closest approach so the rule order alone controls accuracy.
fn solenoid_segment_integral(s: &Solenoid, a: SpacePoint, b: SpacePoint, rule: &GaussLegendre) -> f64 {
    let dx = b.x - a.x;
    let dy = b.y - a.y;
    let mut acc = 0.0;
    let mut stack = vec![(0.0_f64, 1.0_f64)];
    while let Some((t0, t1)) = stack.pop() {
        let pa = lerp(a, b, t0);
        let pb = lerp(a, b, t1);
        let len = pa.distance_to(pb);
        let dist = segment_point_distance(pa, pb, s.center());
        if len <= SOLENOID_PANEL_RATIO * dist || t1 - t0 < 1e-12 {
            acc += rule.integrate(t0, t1, |t| {
                let (ax, ay) = s.vector_potential(lerp(a, b, t));
                ax * dx + ay * dy
            });
        } else {
            let tm = 0.5 * (t0 + t1);
            stack.push((tm, t1));
            stack.push((t0, tm));
        }
    }
    acc
}

/// Line integral of the field's vector potential along the straight segment
/// `[a, b]`. `index` is only used to report which path segment hit the
/// solenoid core.
fn segment_field_integral(
    field: &FieldSpec,
    a: SpacePoint,
    b: SpacePoint,
    index: usize,
    rule: &GaussLegendre,
) -> Result<f64, PhaseError> {
    match field {
        FieldSpec::None => Ok(0.0),
        FieldSpec::Gradient(g) => {
            let dx = b.x - a.x;
            let dy = b.y - a.y;
            Ok(rule.integrate(0.0, 1.0, |t| {
                let (gx, gy) = g.gradient_at(lerp(a, b, t));
                gx * dx + gy * dy
            }))
        }
        FieldSpec::IdealSolenoid(s) => {
            let distance = segment_point_distance(a, b, s.center());
            if distance < s.core_radius() {
                return Err(PhaseError::PathIntersectsSolenoidCore {
                    index,
                    distance,
                    core_radius: s.core_radius(),
                });
            }
            Ok(solenoid_segment_integral(s, a, b, rule))
        }
    }
}

fn field_line_integral(
    path: &Path,
    field: &FieldSpec,
    rule: &GaussLegendre,
) -> Result<f64, PhaseError> {
    let mut acc = 0.0;
    for (index, (a, b)) in path.segments().enumerate() {
        acc += segment_field_integral(field, a, b, index, rule)?;
    }
    Ok(acc)
}

/// Action phase `(p * arc_length(path) + q * integral(A.dl)) / kappa`
/// accumulated along the polyline, with the field integral evaluated by
/// Gauss-Legendre quadrature of order [`DEFAULT_GL_ORDER`] per panel.
pub fn action_phase(path: &Path, field: &FieldSpec, params: &ModelParams) -> Result<f64, PhaseError> {
    action_phase_with_order(path, field, params, DEFAULT_GL_ORDER)
}

/// Same as [`action_phase`] with an explicit quadrature order, used to probe
/// quadrature robustness.
pub fn action_phase_with_order(
    path: &Path,
    field: &FieldSpec,
    params: &ModelParams,
    order: usize,
) -> Result<f64, PhaseError> {
    let rule = GaussLegendre::new(order);
    let field_part = field_line_integral(path, field, &rule)?;
    Ok((path.momentum_magnitude() * path.arc_length() + params.charge() * field_part)
        / params.kappa())
}

/// Unit-modulus amplitude `exp(i * action_phase)`.
pub fn amplitude(path: &Path, field: &FieldSpec, params: &ModelParams) -> Result<Amplitude, PhaseError> {
    Ok(Complex64::from_polar(1.0, action_phase(path, field, params)?))
}

/// Component-wise complex sum of the per-path amplitudes.
pub fn superpose(amplitudes: &[Amplitude]) -> Result<Amplitude, PhaseError> {
    if amplitudes.is_empty() {
        return Err(PhaseError::EmptyList);
    }
    Ok(amplitudes.iter().sum())
}

/// Intensity `psi psi* = re^2 + im^2`.
pub fn intensity(psi: Amplitude) -> f64 {
    psi.norm_sqr()
}

/// Amplitude-weighted average momentum over paths sharing the same start and
/// end points:
///
/// `sum_i (p_i t_i) psi_i / sum_i psi_i`
///
/// where `t_i` is the final-segment unit tangent of path `i`. The result is
/// a complex 2-vector and is returned without projection; near-destructive
/// denominators are an explicit error.
pub fn average_momentum(
    paths: &[Path],
    field: &FieldSpec,
    params: &ModelParams,
) -> Result<[Complex64; 2], PhaseError> {
    if paths.is_empty() {
        return Err(PhaseError::EmptyList);
    }
    let start = paths[0].start();
    let end = paths[0].end();
    for (index, path) in paths.iter().enumerate().skip(1) {
        if path.start().distance_to(start) > ENDPOINT_MATCH_TOL
            || path.end().distance_to(end) > ENDPOINT_MATCH_TOL
        {
            return Err(PhaseError::MismatchedEndpoints { index });
        }
    }
    let mut num_x = Complex64::new(0.0, 0.0);
    let mut num_y = Complex64::new(0.0, 0.0);
    let mut den = Complex64::new(0.0, 0.0);
    for path in paths {
        let psi = amplitude(path, field, params)?;
        let (tx, ty) = path.final_tangent();
        let p = path.momentum_magnitude();
        num_x += p * tx * psi;
        num_y += p * ty * psi;
        den += psi;
    }
    let modulus = den.norm();
    if modulus < DIVERGENCE_THRESHOLD {
        return Err(PhaseError::DivergentAverage { modulus });
    }
    Ok([num_x / den, num_y / den])
}

/// Max-norm residual of the momentum eigen-relation
/// `(p t + q A) psi = -i kappa d(psi)` at the path's final vertex, checked by
/// central finite differences of the amplitude along each coordinate axis.
///
/// Displacing the endpoint by `delta` continues the amplitude as the local
/// plane wave: the momentum term advances by the signed projection
/// `p (t . delta)` while the field term is integrated along the displacement
/// segment. The residual shrinks as `O(step^2)` for smooth fields;
/// [`DEFAULT_FD_STEP`] is a reasonable step when nothing else is known.
pub fn verify_momentum_relation(
    path: &Path,
    field: &FieldSpec,
    params: &ModelParams,
    step: f64,
) -> Result<f64, PhaseError> {
    if !step.is_finite() || step <= 0.0 {
        return Err(PhaseError::NonPositiveStep { step });
    }
    let rule = GaussLegendre::new(DEFAULT_GL_ORDER);
    let psi0 = Complex64::from_polar(1.0, action_phase(path, field, params)?);
    let end = path.end();
    let (tx, ty) = path.final_tangent();
    let p = path.momentum_magnitude();
    let q = params.charge();
    let kappa = params.kappa();
    let (a_x, a_y) = vector_potential(field, end);

    let mut worst: f64 = 0.0;
    for (ex, ey) in [(1.0, 0.0), (0.0, 1.0)] {
        let tangent_proj = tx * ex + ty * ey;
        // The probe segment is a virtual extension; report it under the
        // index it would occupy if appended to the path.
        let probe_index = path.vertices().len().saturating_sub(1);
        let displaced = |sign: f64| -> Result<Complex64, PhaseError> {
            let tip = SpacePoint::new(end.x + sign * step * ex, end.y + sign * step * ey);
            let field_part = segment_field_integral(field, end, tip, probe_index, &rule)?;
            let extra = (p * tangent_proj * sign * step + q * field_part) / kappa;
            Ok(psi0 * Complex64::from_polar(1.0, extra))
        };
        let fd = (displaced(1.0)? - displaced(-1.0)?) / Complex64::new(2.0 * step, 0.0);
        let lhs = Complex64::new(0.0, -kappa) * fd;
        let rhs = (p * tangent_proj + q * (a_x * ex + a_y * ey)) * psi0;
        worst = worst.max((lhs - rhs).norm());
    }
    Ok(worst)
}
