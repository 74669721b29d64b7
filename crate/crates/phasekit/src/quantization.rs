//! Bound-state quantization: turning points, the classical action integral
//! over one period, and energies selected by the conditions
//! `action = 2 pi kappa n` (closed orbits) or `2 pi kappa (n + 1/2)`
//! (1-D wells).
//!
//! The action integrand `sqrt(2 m (E - V))` has inverse-square-root
//! singularities at the turning points. Substituting
//! `x = x_c + x_h sin(theta)` absorbs them: for simple turning points the
//! theta-integrand is smooth, so a fixed-node Gauss-Legendre rule converges
//! spectrally. The nodes are split into two symmetric panels so even wells
//! with a kink at the midpoint (the linear well) stay smooth per panel.

use std::f64::consts::PI;

use thiserror::Error;

use crate::model::{ModelParams, Potential1D, PotentialKind, QuantizationProblem};
use crate::numeric::{bisect, GaussLegendre};

/// Total theta-node count for the action quadrature (two panels of half
/// this many nodes each).
pub const DEFAULT_ACTION_NODES: usize = 128;

/// Relative tolerance on the energy bisection.
const ENERGY_REL_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuantizationError {
    #[error("energy {energy} is not above the potential minimum {min}")]
    EnergyBelowMinimum { energy: f64, min: f64 },
    #[error("energy {energy} is not bracketed by the potential")]
    EnergyNotBracketed { energy: f64 },
    #[error("integer rule with n = 0 targets zero action; no orbit exists")]
    ZeroActionTarget,
    #[error("no energy bracket found below the potential ceiling")]
    BracketNotFound,
    #[error("circular-orbit quantization requires a non-zero charge")]
    InvalidCharge,
    #[error("level range must start at n = 1 with n_max >= 1")]
    InvalidLevelRange,
    #[error("potential has no one-dimensional turning points")]
    NoTurningPoints,
}

/// A solved level: index, energy, and the classical action at that energy
/// (equal to its `2 pi kappa (n + delta)` target at convergence).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyLevel {
    pub n: u32,
    pub energy: f64,
    pub action: f64,
}

/// Classical turning points `(x_left, x_right)` with `V(x) = E` on both
/// sides of the well minimum.
///
/// Harmonic and linear wells use closed forms. Tabulated potentials walk
/// outward from the sampled minimum and invert the bracketing linear piece
/// exactly, which meets the `|V(x) - E| < 1e-12 max(1, |E|)` bound by
/// construction.
pub fn turning_points(
    potential: &Potential1D,
    params: &ModelParams,
    energy: f64,
) -> Result<(f64, f64), QuantizationError> {
    match potential.kind() {
        PotentialKind::Harmonic { omega } => {
            if energy <= 0.0 {
                return Err(QuantizationError::EnergyBelowMinimum { energy, min: 0.0 });
            }
            let xt = (2.0 * energy / params.mass()).sqrt() / omega;
            Ok((-xt, xt))
        }
        PotentialKind::LinearWell { slope } => {
            if energy <= 0.0 {
                return Err(QuantizationError::EnergyBelowMinimum { energy, min: 0.0 });
            }
            let xt = energy / slope;
            Ok((-xt, xt))
        }
        PotentialKind::CoulombCircular => Err(QuantizationError::NoTurningPoints),
        PotentialKind::Tabulated { xs, vs } => {
            let (imin, vmin) = vs
                .iter()
                .enumerate()
                .fold((0, f64::INFINITY), |(ib, vb), (i, &v)| {
                    if v < vb {
                        (i, v)
                    } else {
                        (ib, vb)
                    }
                });
            if energy <= vmin {
                return Err(QuantizationError::EnergyBelowMinimum {
                    energy,
                    min: vmin,
                });
            }
            let right = (imin + 1..xs.len())
                .find(|&k| vs[k] >= energy)
                .map(|k| cross_piece(xs[k - 1], vs[k - 1], xs[k], vs[k], energy));
            let left = (0..imin)
                .rev()
                .find(|&k| vs[k] >= energy)
                .map(|k| cross_piece(xs[k + 1], vs[k + 1], xs[k], vs[k], energy));
            match (left, right) {
                (Some(l), Some(r)) => Ok((l, r)),
                _ => Err(QuantizationError::EnergyNotBracketed { energy }),
            }
        }
    }
}

/// Exact crossing of a linear piece from `(x_in, v_in)` (below `energy`) to
/// `(x_out, v_out)` (at or above `energy`).
fn cross_piece(x_in: f64, v_in: f64, x_out: f64, v_out: f64, energy: f64) -> f64 {
    let t = (energy - v_in) / (v_out - v_in);
    x_in + t * (x_out - x_in)
}

/// Classical action over one whole period of motion,
/// `2 * integral from x_left to x_right of sqrt(2 m (E - V(x))) dx`,
/// via the turning-point substitution with [`DEFAULT_ACTION_NODES`] nodes.
///
/// For the circular Coulomb orbit there are no turning points; the closed
/// orbit action `2 pi k q^2 sqrt(m / (-2E))` applies for `E < 0`.
pub fn action_integral(
    potential: &Potential1D,
    params: &ModelParams,
    energy: f64,
) -> Result<f64, QuantizationError> {
    action_integral_with_nodes(potential, params, energy, DEFAULT_ACTION_NODES)
}

/// Same as [`action_integral`] with an explicit total node count (split into
/// two panels), used to probe quadrature convergence.
pub fn action_integral_with_nodes(
    potential: &Potential1D,
    params: &ModelParams,
    energy: f64,
    nodes: usize,
) -> Result<f64, QuantizationError> {
    if let PotentialKind::CoulombCircular = potential.kind() {
        if energy >= 0.0 {
            return Err(QuantizationError::EnergyNotBracketed { energy });
        }
        let q2 = params.charge() * params.charge();
        return Ok(2.0
            * PI
            * params.coulomb_constant()
            * q2
            * (params.mass() / (-2.0 * energy)).sqrt());
    }

    let (x_left, x_right) = turning_points(potential, params, energy)?;
    let x_center = 0.5 * (x_left + x_right);
    let x_half = 0.5 * (x_right - x_left);
    let two_m = 2.0 * params.mass();
    let rule = GaussLegendre::new((nodes / 2).max(1));
    let integrand = |theta: f64| {
        let x = x_center + x_half * theta.sin();
        // Clamp tiny negative excursions from rounding near the endpoints.
        (two_m * (energy - potential.value(x, params))).max(0.0).sqrt() * x_half * theta.cos()
    };
    let left = rule.integrate(-0.5 * PI, 0.0, integrand);
    let right = rule.integrate(0.0, 0.5 * PI, integrand);
    Ok(2.0 * (left + right))
}

/// Ceiling above which a potential can no longer bracket an energy, if any.
fn bracket_ceiling(potential: &Potential1D) -> Option<f64> {
    match potential.kind() {
        PotentialKind::Tabulated { vs, .. } => Some(vs[0].min(*vs.last().unwrap())),
        _ => None,
    }
}

/// Solves `action_integral(E) = 2 pi kappa (n + delta)` for the energy by
/// geometric bracket expansion and bisection. The action is monotone
/// increasing in `E` for single-well potentials (and for the circular
/// Coulomb orbit on `E < 0`), so the root is unique.
pub fn quantize_level(
    problem: &QuantizationProblem,
    params: &ModelParams,
) -> Result<EnergyLevel, QuantizationError> {
    let delta = problem.rule.offset();
    if problem.level == 0 && delta == 0.0 {
        return Err(QuantizationError::ZeroActionTarget);
    }
    let target = 2.0 * PI * params.kappa() * (problem.level as f64 + delta);
    let action = |energy: f64| action_integral(&problem.potential, params, energy);

    let (mut lo, mut hi);
    if let PotentialKind::CoulombCircular = problem.potential.kind() {
        if params.charge() == 0.0 {
            return Err(QuantizationError::InvalidCharge);
        }
        // Expand toward -infinity until the action drops below target and
        // toward 0 until it exceeds it.
        lo = -1.0;
        let mut guard = 0;
        while action(lo)? > target {
            lo *= 16.0;
            guard += 1;
            if guard > 200 {
                return Err(QuantizationError::BracketNotFound);
            }
        }
        hi = -1.0;
        guard = 0;
        while action(hi)? < target {
            hi /= 16.0;
            guard += 1;
            if guard > 200 {
                return Err(QuantizationError::BracketNotFound);
            }
        }
    } else {
        let (_, min_v) = problem
            .potential
            .minimum()
            .ok_or(QuantizationError::NoTurningPoints)?;
        let ceiling = bracket_ceiling(&problem.potential);
        lo = min_v;
        let mut step = params.kappa() * 1e-3;
        hi = min_v + step;
        let mut guard = 0;
        loop {
            if let Some(ceiling) = ceiling {
                if hi >= ceiling {
                    // Just below the ceiling is the last admissible energy.
                    hi = min_v + (ceiling - min_v) * (1.0 - 1e-12);
                    if action(hi)? < target {
                        return Err(QuantizationError::BracketNotFound);
                    }
                    break;
                }
            }
            if action(hi)? >= target {
                break;
            }
            step *= 2.0;
            hi = min_v + step;
            guard += 1;
            if guard > 400 {
                return Err(QuantizationError::BracketNotFound);
            }
        }
    }

    // Monotone bisection; the lower bound is never evaluated, so the open
    // endpoint at the potential minimum is safe.
    let mut energy = 0.5 * (lo + hi);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        energy = mid;
        if (hi - lo).abs() <= ENERGY_REL_TOL * mid.abs().max(1.0) {
            break;
        }
        if action(mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    Ok(EnergyLevel {
        n: problem.level,
        energy,
        action: action(energy)?,
    })
}

/// Radius of the circular orbit whose action is `2 pi kappa n`, from the
/// force balance `m v^2 / r = k q^2 / r^2`.
pub fn circular_orbit_radius(params: &ModelParams, n: u32) -> f64 {
    let q2 = params.charge() * params.charge();
    (params.kappa() * n as f64).powi(2) / (params.mass() * params.coulomb_constant() * q2)
}

/// Circular-orbit levels for `n = 1..=n_max`: the force balance
/// `m v^2 / r = k q^2 / r^2` and the action condition
/// `2 pi r m v = 2 pi kappa n` are solved numerically for each level, then
/// cross-checked against the closed form `-m k^2 q^4 / (2 kappa^2 n^2)`.
pub fn hydrogen_circular_levels(
    params: &ModelParams,
    n_max: u32,
) -> Result<Vec<EnergyLevel>, QuantizationError> {
    if params.charge() == 0.0 {
        return Err(QuantizationError::InvalidCharge);
    }
    if n_max < 1 {
        return Err(QuantizationError::InvalidLevelRange);
    }
    let k = params.coulomb_constant();
    let q2 = params.charge() * params.charge();
    let m = params.mass();
    let kappa = params.kappa();

    let mut levels = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        let nf = n as f64;
        // With v eliminated through the action condition (v = kappa n / m r)
        // the force balance becomes g(r) = kappa^2 n^2 / (m r) - k q^2 = 0,
        // monotone decreasing in r.
        let g = |r: f64| kappa * kappa * nf * nf / (m * r) - k * q2;
        let mut r_lo = 1.0;
        while g(r_lo) <= 0.0 {
            r_lo *= 0.5;
            assert!(r_lo > f64::MIN_POSITIVE, "orbit bracket underflow");
        }
        let mut r_hi = 1.0;
        while g(r_hi) >= 0.0 {
            r_hi *= 2.0;
            assert!(r_hi.is_finite(), "orbit bracket overflow");
        }
        let radius = bisect(r_lo, r_hi, g, 1e-15, 300).expect("sign change by construction");
        let speed = kappa * nf / (m * radius);
        let energy = 0.5 * m * speed * speed - k * q2 / radius;
        let action = 2.0 * PI * radius * m * speed;

        let closed_form = -m * k * k * q2 * q2 / (2.0 * kappa * kappa * nf * nf);
        assert!(
            (energy - closed_form).abs() <= 1e-10 * closed_form.abs(),
            "numeric orbit energy {energy} drifted from closed form {closed_form}"
        );
        levels.push(EnergyLevel { n, energy, action });
    }
    Ok(levels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::QuantizationRule;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn params() -> ModelParams {
        ModelParams::default()
    }

    #[test]
    fn harmonic_turning_points() {
        let pot = Potential1D::harmonic(1.0).unwrap();
        let (l, r) = turning_points(&pot, &params(), 0.5).unwrap();
        assert_abs_diff_eq!(l, -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(r, 1.0, epsilon = 1e-14);
        assert!(matches!(
            turning_points(&pot, &params(), 0.0),
            Err(QuantizationError::EnergyBelowMinimum { .. })
        ));
    }

    #[test]
    fn linear_well_turning_points() {
        let pot = Potential1D::linear_well(1.0).unwrap();
        let (l, r) = turning_points(&pot, &params(), 2.0).unwrap();
        assert_abs_diff_eq!(l, -2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(r, 2.0, epsilon = 1e-14);
    }

    #[test]
    fn tabulated_quartic_turning_points_match_bisection_oracle() {
        // Dense sampling of V = x^4 on [-3, 3].
        let n = 6001;
        let samples: Vec<(f64, f64)> = (0..n)
            .map(|i| {
                let x = -3.0 + 6.0 * i as f64 / (n - 1) as f64;
                (x, x.powi(4))
            })
            .collect();
        let pot = Potential1D::tabulated(&samples).unwrap();
        let p = params();
        let (l, r) = turning_points(&pot, &p, 16.0).unwrap();
        assert_abs_diff_eq!(l, -2.0, epsilon = 1e-6);
        assert_abs_diff_eq!(r, 2.0, epsilon = 1e-6);

        // Independent bisection on the interpolant itself.
        let oracle = bisect(0.0, 3.0, |x| pot.value(x, &p) - 16.0, 1e-14, 300).unwrap();
        assert_abs_diff_eq!(r, oracle, epsilon = 1e-9);

        // Energy above the table ceiling cannot be bracketed.
        assert!(matches!(
            turning_points(&pot, &p, 100.0),
            Err(QuantizationError::EnergyNotBracketed { .. })
        ));
    }

    #[test]
    fn harmonic_action_is_two_pi_e_over_omega() {
        let pot = Potential1D::harmonic(1.0).unwrap();
        let action = action_integral(&pot, &params(), 1.0).unwrap();
        assert_relative_eq!(action, 2.0 * PI, max_relative = 1e-9);
    }

    #[test]
    fn action_vanishes_at_the_well_bottom() {
        let table: Vec<(f64, f64)> = (0..401)
            .map(|i| {
                let x = -2.0 + 4.0 * i as f64 / 400.0;
                (x, x * x + 0.25 * x.powi(4))
            })
            .collect();
        for pot in [
            Potential1D::harmonic(1.0).unwrap(),
            Potential1D::linear_well(1.0).unwrap(),
            Potential1D::tabulated(&table).unwrap(),
        ] {
            let min = pot.minimum().unwrap().1;
            let action = action_integral(&pot, &params(), min + 1e-12).unwrap();
            assert!(action < 1e-5, "action {action} at vanishing orbit");
        }
    }

    #[test]
    fn linear_well_action_closed_form() {
        // One period: (8/3) sqrt(2m) E^(3/2) / slope.
        let pot = Potential1D::linear_well(1.0).unwrap();
        let p = ModelParams::new(1.0, 0.5, 1.0, 1.0).unwrap();
        let action = action_integral(&pot, &p, 1.0).unwrap();
        assert_relative_eq!(action, 8.0 / 3.0, max_relative = 1e-9);
    }

    #[test]
    fn harmonic_levels_are_half_integer_multiples() {
        let pot = Potential1D::harmonic(1.0).unwrap();
        for (n, expected) in [(0u32, 0.5), (3, 3.5)] {
            let problem = QuantizationProblem {
                potential: pot.clone(),
                rule: QuantizationRule::HalfInteger,
                level: n,
            };
            let level = quantize_level(&problem, &params()).unwrap();
            assert_relative_eq!(level.energy, expected, max_relative = 1e-8);
        }
    }

    #[test]
    fn linear_well_level_matches_inverted_action() {
        let pot = Potential1D::linear_well(1.0).unwrap();
        let p = ModelParams::new(1.0, 0.5, 1.0, 1.0).unwrap();
        let problem = QuantizationProblem {
            potential: pot,
            rule: QuantizationRule::HalfInteger,
            level: 1,
        };
        let level = quantize_level(&problem, &p).unwrap();
        let expected = (9.0 * PI / 8.0).powf(2.0 / 3.0);
        assert_relative_eq!(level.energy, expected, max_relative = 1e-8);
    }

    #[test]
    fn integer_rule_rejects_zero_level() {
        let problem = QuantizationProblem {
            potential: Potential1D::harmonic(1.0).unwrap(),
            rule: QuantizationRule::Integer,
            level: 0,
        };
        assert!(matches!(
            quantize_level(&problem, &params()),
            Err(QuantizationError::ZeroActionTarget)
        ));
    }

    #[test]
    fn tabulated_ceiling_strands_deep_levels() {
        // A shallow well cannot hold a large action target.
        let samples: Vec<(f64, f64)> = (0..201)
            .map(|i| {
                let x = -1.0 + 2.0 * i as f64 / 200.0;
                (x, x * x)
            })
            .collect();
        let problem = QuantizationProblem {
            potential: Potential1D::tabulated(&samples).unwrap(),
            rule: QuantizationRule::HalfInteger,
            level: 40,
        };
        assert!(matches!(
            quantize_level(&problem, &params()),
            Err(QuantizationError::BracketNotFound)
        ));
    }

    #[test]
    fn coulomb_circular_quantizes_to_bohr_energies() {
        let problem = QuantizationProblem {
            potential: Potential1D::coulomb_circular(),
            rule: QuantizationRule::Integer,
            level: 2,
        };
        let level = quantize_level(&problem, &params()).unwrap();
        assert_relative_eq!(level.energy, -0.125, max_relative = 1e-9);
    }

    #[test]
    fn quantized_action_hits_target() {
        let pot = Potential1D::harmonic(2.0).unwrap();
        for n in [0u32, 1, 5, 9] {
            let problem = QuantizationProblem {
                potential: pot.clone(),
                rule: QuantizationRule::HalfInteger,
                level: n,
            };
            let level = quantize_level(&problem, &params()).unwrap();
            let target = 2.0 * PI * (n as f64 + 0.5);
            assert_relative_eq!(level.action, target, max_relative = 1e-9);
        }
    }

    #[test]
    fn levels_increase_with_n() {
        let pot = Potential1D::linear_well(0.7).unwrap();
        let mut last = f64::NEG_INFINITY;
        for n in 0..8 {
            let problem = QuantizationProblem {
                potential: pot.clone(),
                rule: QuantizationRule::HalfInteger,
                level: n,
            };
            let e = quantize_level(&problem, &params()).unwrap().energy;
            assert!(e > last, "E_{n} = {e} not above previous {last}");
            last = e;
        }
    }

    #[test]
    fn kappa_scaling_of_harmonic_levels() {
        let pot = Potential1D::harmonic(1.0).unwrap();
        let scaled = ModelParams::new(3.0, 1.0, 1.0, 1.0).unwrap();
        for n in [0u32, 2, 7] {
            let problem = QuantizationProblem {
                potential: pot.clone(),
                rule: QuantizationRule::HalfInteger,
                level: n,
            };
            let base = quantize_level(&problem, &params()).unwrap().energy;
            let tripled = quantize_level(&problem, &scaled).unwrap().energy;
            assert_relative_eq!(tripled, 3.0 * base, max_relative = 1e-8);
        }
    }

    #[test]
    fn action_is_monotone_in_energy() {
        let p = params();
        for pot in [
            Potential1D::harmonic(1.3).unwrap(),
            Potential1D::linear_well(0.8).unwrap(),
        ] {
            let mut last = 0.0;
            for k in 1..20 {
                let e = 0.3 * k as f64;
                let action = action_integral(&pot, &p, e).unwrap();
                assert!(action > last);
                last = action;
            }
        }
    }

    #[test]
    fn node_doubling_is_converged() {
        let p = params();
        let pot = Potential1D::harmonic(1.0).unwrap();
        let coarse = action_integral_with_nodes(&pot, &p, 2.5, 128).unwrap();
        let fine = action_integral_with_nodes(&pot, &p, 2.5, 256).unwrap();
        assert!(((fine - coarse) / coarse).abs() < 1e-10);
    }

    #[test]
    fn hydrogen_ground_state() {
        let levels = hydrogen_circular_levels(&params(), 2).unwrap();
        assert_relative_eq!(levels[0].energy, -0.5, max_relative = 1e-10);
        assert_relative_eq!(levels[1].energy, -0.125, max_relative = 1e-10);
        assert_abs_diff_eq!(levels[0].action, 2.0 * PI, epsilon = 1e-9);
        assert_relative_eq!(circular_orbit_radius(&params(), 1), 1.0, max_relative = 1e-12);
    }

    #[test]
    fn hydrogen_energy_scales_inversely_with_kappa_squared() {
        let doubled = ModelParams::new(2.0, 1.0, 1.0, 1.0).unwrap();
        let levels = hydrogen_circular_levels(&doubled, 1).unwrap();
        assert_relative_eq!(levels[0].energy, -0.125, max_relative = 1e-10);
    }

    #[test]
    fn hydrogen_rejects_zero_charge_and_empty_range() {
        let neutral = ModelParams::new(1.0, 1.0, 0.0, 1.0).unwrap();
        assert!(matches!(
            hydrogen_circular_levels(&neutral, 3),
            Err(QuantizationError::InvalidCharge)
        ));
        assert!(matches!(
            hydrogen_circular_levels(&params(), 0),
            Err(QuantizationError::InvalidLevelRange)
        ));
    }

    #[test]
    fn rydberg_product_is_constant() {
        let levels = hydrogen_circular_levels(&params(), 10).unwrap();
        let first = levels[0].energy;
        for level in &levels {
            let product = level.energy * (level.n as f64).powi(2);
            assert_relative_eq!(product, first, max_relative = 1e-9);
        }
    }
}
