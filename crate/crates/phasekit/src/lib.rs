//! phasekit: semiclassical path-phase simulation and quantization.
//!
//! A particle of momentum `p` and charge `q` traversing a polyline through a
//! vector potential `A` carries the unit-modulus amplitude
//! `exp[(i / kappa)(p * arc_length + q * integral(A . dl))]`, where `kappa`
//! is a free action-scale parameter. Summing such amplitudes over the finite
//! set of paths joining two points reproduces two-slit fringes, the
//! Aharonov-Bohm flux shift, and (through the closed-orbit action
//! conditions) discrete bound-state energies. Fitting generated fringe
//! spacings recovers `kappa` again, closing the loop between the model's one
//! constant and what an interference experiment measures.
//!
//! Modules:
//! - [`model`]: shared domain types (parameters, paths, fields, potentials).
//! - [`phase`]: action phases, amplitudes, superposition, intensities, and
//!   the finite-difference check of the momentum relation.
//! - [`interference`]: two-slit and Aharonov-Bohm geometry, fringe patterns,
//!   fringe-spacing measurement, and kappa extraction.
//! - [`quantization`]: turning points, the singular-free action quadrature,
//!   and bound-state energy solving.
//! - [`numeric`]: quadrature, root bracketing, and fitting helpers.

pub mod interference;
pub mod model;
pub mod numeric;
pub mod phase;
pub mod quantization;

pub use interference::{
    ab_pattern, extract_kappa, fit_kappa, fringe_analysis, fringe_spacing, pattern,
    pattern_with_field, two_slit_paths, ABGeometry, FringeAnalysis, InterferenceError, KappaFit,
    PatternMeta, TwoSlitGeometry,
};
pub use model::{
    arc_length, FieldSpec, FringePattern, GradientField, ModelError, ModelParams, Path,
    Potential1D, QuantizationProblem, QuantizationRule, Solenoid, SpacePoint,
};
pub use phase::{
    action_phase, action_phase_with_order, amplitude, average_momentum, intensity, superpose,
    vector_potential, verify_momentum_relation, Amplitude, PhaseError, DEFAULT_FD_STEP,
    DEFAULT_GL_ORDER,
};
pub use quantization::{
    action_integral, action_integral_with_nodes, circular_orbit_radius, hydrogen_circular_levels,
    quantize_level, turning_points, EnergyLevel, QuantizationError,
};
