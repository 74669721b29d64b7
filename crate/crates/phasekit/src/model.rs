//! Domain types shared by the phase engine, the interference geometry, and
//! the quantization solver.
//!
//! Everything here is planar and immutable after construction. The unit
//! system is dimensionless: `kappa`, `mass`, `charge`, and the Coulomb
//! constant are free parameters (all defaulting to 1), never hard-coded
//! physical constants.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::interference::PatternMeta;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("{name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("{name} must be finite")]
    NonFinite { name: &'static str },
    #[error("path must contain at least one vertex")]
    EmptyPath,
    #[error("path segment {index} has zero length")]
    ZeroLengthSegment { index: usize },
    #[error("momentum magnitude must be finite and non-negative, got {value}")]
    InvalidMomentum { value: f64 },
    #[error("tabulated potential needs at least two samples")]
    TabulatedTooShort,
    #[error("tabulated abscissas must be strictly increasing (violated at index {index})")]
    TabulatedNotIncreasing { index: usize },
    #[error("pattern has {coords} screen coordinates but {intensities} intensities")]
    PatternLengthMismatch { coords: usize, intensities: usize },
    #[error("pattern screen coordinates must be strictly increasing (violated at index {index})")]
    PatternCoordsNotIncreasing { index: usize },
    #[error("pattern must contain at least one sample")]
    EmptyPattern,
}

fn ensure_positive(name: &'static str, value: f64) -> Result<f64, ModelError> {
    if !value.is_finite() {
        return Err(ModelError::NonFinite { name });
    }
    if value <= 0.0 {
        return Err(ModelError::NonPositive { name, value });
    }
    Ok(value)
}

fn ensure_finite(name: &'static str, value: f64) -> Result<f64, ModelError> {
    if !value.is_finite() {
        return Err(ModelError::NonFinite { name });
    }
    Ok(value)
}

/// The constants entering every phase integral: the action scale `kappa`,
/// the particle mass and charge, and the Coulomb force constant used by
/// hydrogen-type problems.
///
/// `kappa`, `mass`, and `coulomb_constant` must be positive; `charge` may be
/// zero or negative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    kappa: f64,
    mass: f64,
    charge: f64,
    coulomb_constant: f64,
}

impl ModelParams {
    pub fn new(
        kappa: f64,
        mass: f64,
        charge: f64,
        coulomb_constant: f64,
    ) -> Result<Self, ModelError> {
        Ok(ModelParams {
            kappa: ensure_positive("kappa", kappa)?,
            mass: ensure_positive("mass", mass)?,
            charge: ensure_finite("charge", charge)?,
            coulomb_constant: ensure_positive("coulomb_constant", coulomb_constant)?,
        })
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn charge(&self) -> f64 {
        self.charge
    }

    pub fn coulomb_constant(&self) -> f64 {
        self.coulomb_constant
    }
}

impl Default for ModelParams {
    /// All constants equal to 1.
    fn default() -> Self {
        ModelParams {
            kappa: 1.0,
            mass: 1.0,
            charge: 1.0,
            coulomb_constant: 1.0,
        }
    }
}

/// A point in the plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpacePoint {
    pub x: f64,
    pub y: f64,
}

impl SpacePoint {
    pub fn new(x: f64, y: f64) -> Self {
        SpacePoint { x, y }
    }

    pub fn distance_to(&self, other: SpacePoint) -> f64 {
        (other.x - self.x).hypot(other.y - self.y)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// An ordered polyline with a scalar momentum magnitude carried along the
/// local tangent.
///
/// A single-vertex path is the degenerate zero-length path; any longer path
/// must have strictly positive segment lengths.
#[derive(Debug, Clone, PartialEq)]
pub struct Path {
    vertices: Vec<SpacePoint>,
    momentum: f64,
}

impl Path {
    pub fn new(vertices: Vec<SpacePoint>, momentum_magnitude: f64) -> Result<Self, ModelError> {
        if vertices.is_empty() {
            return Err(ModelError::EmptyPath);
        }
        for v in &vertices {
            if !v.is_finite() {
                return Err(ModelError::NonFinite { name: "vertex" });
            }
        }
        for (index, pair) in vertices.windows(2).enumerate() {
            if pair[0] == pair[1] {
                return Err(ModelError::ZeroLengthSegment { index });
            }
        }
        if !momentum_magnitude.is_finite() || momentum_magnitude < 0.0 {
            return Err(ModelError::InvalidMomentum {
                value: momentum_magnitude,
            });
        }
        Ok(Path {
            vertices,
            momentum: momentum_magnitude,
        })
    }

    pub fn vertices(&self) -> &[SpacePoint] {
        &self.vertices
    }

    pub fn momentum_magnitude(&self) -> f64 {
        self.momentum
    }

    pub fn start(&self) -> SpacePoint {
        self.vertices[0]
    }

    pub fn end(&self) -> SpacePoint {
        *self.vertices.last().expect("non-empty by construction")
    }

    pub fn segments(&self) -> impl Iterator<Item = (SpacePoint, SpacePoint)> + '_ {
        self.vertices.windows(2).map(|w| (w[0], w[1]))
    }

    /// Sum of Euclidean segment lengths; 0 for a single-vertex path.
    pub fn arc_length(&self) -> f64 {
        self.segments().map(|(a, b)| a.distance_to(b)).sum()
    }

    /// Unit tangent of the final segment. A single-vertex path has no
    /// direction and returns the zero vector, so its momentum term vanishes.
    pub fn final_tangent(&self) -> (f64, f64) {
        if self.vertices.len() < 2 {
            return (0.0, 0.0);
        }
        let a = self.vertices[self.vertices.len() - 2];
        let b = self.vertices[self.vertices.len() - 1];
        let len = a.distance_to(b);
        ((b.x - a.x) / len, (b.y - a.y) / len)
    }
}

/// Free arc-length helper mirroring [`Path::arc_length`].
pub fn arc_length(path: &Path) -> f64 {
    path.arc_length()
}

/// An idealized infinite solenoid perpendicular to the plane: all flux is
/// confined inside `core_radius`, and outside the core the vector potential
/// is tangential with magnitude `flux / (2 pi r)`. Paths may not enter the
/// core.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Solenoid {
    center: SpacePoint,
    flux: f64,
    core_radius: f64,
}

impl Solenoid {
    pub fn new(center: SpacePoint, flux: f64, core_radius: f64) -> Result<Self, ModelError> {
        if !center.is_finite() {
            return Err(ModelError::NonFinite {
                name: "solenoid center",
            });
        }
        Ok(Solenoid {
            center,
            flux: ensure_finite("flux", flux)?,
            core_radius: ensure_positive("core_radius", core_radius)?,
        })
    }

    pub fn center(&self) -> SpacePoint {
        self.center
    }

    pub fn flux(&self) -> f64 {
        self.flux
    }

    pub fn core_radius(&self) -> f64 {
        self.core_radius
    }

    /// Vector potential at `point`. Outside the core this is the vortex
    /// field `flux / (2 pi r)` along the tangential direction; inside the
    /// core it ramps linearly (uniform interior field), which keeps the
    /// function total even though paths never sample it there.
    pub fn vector_potential(&self, point: SpacePoint) -> (f64, f64) {
        use std::f64::consts::PI;
        let rx = point.x - self.center.x;
        let ry = point.y - self.center.y;
        let r2 = rx * rx + ry * ry;
        let core2 = self.core_radius * self.core_radius;
        let coeff = if r2 >= core2 {
            self.flux / (2.0 * PI * r2)
        } else {
            self.flux / (2.0 * PI * core2)
        };
        (-ry * coeff, rx * coeff)
    }
}

type ScalarFn = dyn Fn(SpacePoint) -> f64 + Send + Sync;
type GradientFn = dyn Fn(SpacePoint) -> (f64, f64) + Send + Sync;

/// A curl-free test field defined by a scalar potential; its vector
/// potential is the gradient of that potential.
///
/// The gradient closure must be the true gradient of the potential closure;
/// that pairing is the caller's contract. Keeping the gradient analytic is
/// what lets closed-loop integrals vanish to quadrature precision instead of
/// finite-difference precision.
#[derive(Clone)]
pub struct GradientField {
    potential: Arc<ScalarFn>,
    gradient: Arc<GradientFn>,
}

impl GradientField {
    pub fn new(
        potential: impl Fn(SpacePoint) -> f64 + Send + Sync + 'static,
        gradient: impl Fn(SpacePoint) -> (f64, f64) + Send + Sync + 'static,
    ) -> Self {
        GradientField {
            potential: Arc::new(potential),
            gradient: Arc::new(gradient),
        }
    }

    pub fn potential_at(&self, point: SpacePoint) -> f64 {
        (self.potential)(point)
    }

    pub fn gradient_at(&self, point: SpacePoint) -> (f64, f64) {
        (self.gradient)(point)
    }
}

impl fmt::Debug for GradientField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GradientField").finish_non_exhaustive()
    }
}

/// Vector-potential descriptor entering the `q A` term of the phase
/// integral.
#[derive(Debug, Clone)]
pub enum FieldSpec {
    /// No electromagnetic potential.
    None,
    /// Ideal solenoid with confined flux.
    IdealSolenoid(Solenoid),
    /// Gradient of a scalar potential (curl-free test field).
    Gradient(GradientField),
}

impl FieldSpec {
    pub fn none() -> Self {
        FieldSpec::None
    }

    pub fn ideal_solenoid(
        center: SpacePoint,
        flux: f64,
        core_radius: f64,
    ) -> Result<Self, ModelError> {
        Ok(FieldSpec::IdealSolenoid(Solenoid::new(
            center,
            flux,
            core_radius,
        )?))
    }

    pub fn gradient_field(
        potential: impl Fn(SpacePoint) -> f64 + Send + Sync + 'static,
        gradient: impl Fn(SpacePoint) -> (f64, f64) + Send + Sync + 'static,
    ) -> Self {
        FieldSpec::Gradient(GradientField::new(potential, gradient))
    }

    pub fn solenoid(&self) -> Option<&Solenoid> {
        match self {
            FieldSpec::IdealSolenoid(s) => Some(s),
            _ => None,
        }
    }
}

/// Sampled intensity over a screen coordinate, together with the geometry
/// and constants that generated it.
#[derive(Debug, Clone)]
pub struct FringePattern {
    screen_coords: Vec<f64>,
    intensities: Vec<f64>,
    metadata: PatternMeta,
}

impl FringePattern {
    /// Screen coordinates must be strictly increasing and the two lists must
    /// have equal, non-zero length. Intensities must be finite; the `[0, 4]`
    /// range of two-path superposition holds for generated patterns but is
    /// not a construction constraint (externally measured patterns may carry
    /// offsets).
    pub fn new(
        screen_coords: Vec<f64>,
        intensities: Vec<f64>,
        metadata: PatternMeta,
    ) -> Result<Self, ModelError> {
        if screen_coords.is_empty() {
            return Err(ModelError::EmptyPattern);
        }
        if screen_coords.len() != intensities.len() {
            return Err(ModelError::PatternLengthMismatch {
                coords: screen_coords.len(),
                intensities: intensities.len(),
            });
        }
        for v in screen_coords.iter().chain(&intensities) {
            if !v.is_finite() {
                return Err(ModelError::NonFinite {
                    name: "pattern sample",
                });
            }
        }
        for (index, pair) in screen_coords.windows(2).enumerate() {
            if pair[1] <= pair[0] {
                return Err(ModelError::PatternCoordsNotIncreasing { index });
            }
        }
        Ok(FringePattern {
            screen_coords,
            intensities,
            metadata,
        })
    }

    pub fn screen_coords(&self) -> &[f64] {
        &self.screen_coords
    }

    pub fn intensities(&self) -> &[f64] {
        &self.intensities
    }

    pub fn metadata(&self) -> &PatternMeta {
        &self.metadata
    }

    pub fn len(&self) -> usize {
        self.screen_coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.screen_coords.is_empty()
    }
}

/// Quantization rule selector: integer multiples of `2 pi kappa` for closed
/// orbits, half-integer offsets for 1-D wells.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuantizationRule {
    Integer,
    HalfInteger,
}

impl QuantizationRule {
    /// The `delta` in the action target `2 pi kappa (n + delta)`.
    pub fn offset(&self) -> f64 {
        match self {
            QuantizationRule::Integer => 0.0,
            QuantizationRule::HalfInteger => 0.5,
        }
    }
}

/// A 1-D bound-state problem: potential, rule, and level index.
#[derive(Debug, Clone)]
pub struct QuantizationProblem {
    pub potential: Potential1D,
    pub rule: QuantizationRule,
    pub level: u32,
}

#[derive(Debug, Clone)]
pub(crate) enum PotentialKind {
    Harmonic { omega: f64 },
    LinearWell { slope: f64 },
    CoulombCircular,
    Tabulated { xs: Vec<f64>, vs: Vec<f64> },
}

/// One-dimensional potential catalog.
///
/// `Harmonic` is `V = m omega^2 x^2 / 2`, `LinearWell` is `V = slope |x|`,
/// both single-well and even with minimum 0 at the origin. `Tabulated`
/// interpolates samples piecewise-linearly, so turning points are solved
/// exactly per piece. `CoulombCircular` stands for the attractive circular
/// orbit problem; it has no 1-D turning points, and its action is the closed
/// orbit action at energy `E < 0`.
#[derive(Debug, Clone)]
pub struct Potential1D {
    kind: PotentialKind,
}

impl Potential1D {
    pub fn harmonic(omega: f64) -> Result<Self, ModelError> {
        Ok(Potential1D {
            kind: PotentialKind::Harmonic {
                omega: ensure_positive("omega", omega)?,
            },
        })
    }

    pub fn linear_well(slope: f64) -> Result<Self, ModelError> {
        Ok(Potential1D {
            kind: PotentialKind::LinearWell {
                slope: ensure_positive("slope", slope)?,
            },
        })
    }

    pub fn coulomb_circular() -> Self {
        Potential1D {
            kind: PotentialKind::CoulombCircular,
        }
    }

    pub fn tabulated(samples: &[(f64, f64)]) -> Result<Self, ModelError> {
        if samples.len() < 2 {
            return Err(ModelError::TabulatedTooShort);
        }
        for &(x, v) in samples {
            if !x.is_finite() || !v.is_finite() {
                return Err(ModelError::NonFinite {
                    name: "tabulated sample",
                });
            }
        }
        for (index, pair) in samples.windows(2).enumerate() {
            if pair[1].0 <= pair[0].0 {
                return Err(ModelError::TabulatedNotIncreasing { index });
            }
        }
        Ok(Potential1D {
            kind: PotentialKind::Tabulated {
                xs: samples.iter().map(|s| s.0).collect(),
                vs: samples.iter().map(|s| s.1).collect(),
            },
        })
    }

    pub(crate) fn kind(&self) -> &PotentialKind {
        &self.kind
    }

    /// Potential energy at `x`. Tabulated potentials clamp to their endpoint
    /// values outside the sampled range; the Coulomb case reads `x` as an
    /// orbit radius.
    pub fn value(&self, x: f64, params: &ModelParams) -> f64 {
        match &self.kind {
            PotentialKind::Harmonic { omega } => 0.5 * params.mass() * omega * omega * x * x,
            PotentialKind::LinearWell { slope } => slope * x.abs(),
            PotentialKind::CoulombCircular => {
                let q2 = params.charge() * params.charge();
                if x == 0.0 {
                    f64::NEG_INFINITY
                } else {
                    -params.coulomb_constant() * q2 / x.abs()
                }
            }
            PotentialKind::Tabulated { xs, vs } => {
                if x <= xs[0] {
                    return vs[0];
                }
                if x >= *xs.last().unwrap() {
                    return *vs.last().unwrap();
                }
                let k = xs.partition_point(|&xi| xi <= x);
                let t = (x - xs[k - 1]) / (xs[k] - xs[k - 1]);
                vs[k - 1] + t * (vs[k] - vs[k - 1])
            }
        }
    }

    /// Location and value of the potential minimum, when the potential is a
    /// well. `None` for the Coulomb orbit case.
    pub fn minimum(&self) -> Option<(f64, f64)> {
        match &self.kind {
            PotentialKind::Harmonic { .. } | PotentialKind::LinearWell { .. } => Some((0.0, 0.0)),
            PotentialKind::CoulombCircular => None,
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
                Some((xs[imin], vmin))
            }
        }
    }
}
