//! Two-slit and Aharonov-Bohm interference: explicit path pairs, fringe
//! pattern generation over a screen, fringe-spacing measurement, and the
//! inversion that recovers the action scale `kappa` from a measured pattern.
//!
//! Phases are built from exact path lengths; the small-angle (Fraunhofer)
//! spacing formula `2 pi kappa L / (p d)` appears only in documentation and
//! tests as a sanity scale, never in the computation.

use std::f64::consts::PI;

use thiserror::Error;

use crate::model::{
    FieldSpec, FringePattern, ModelError, ModelParams, Path, Solenoid, SpacePoint,
};
use crate::numeric::{linear_fit, parabolic_peak_offset, segment_point_distance, winding_number};
use crate::phase::{self, PhaseError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InterferenceError {
    #[error("slit_a and slit_b must be distinct")]
    CoincidentSlits,
    #[error("source must not coincide with a slit")]
    SourceOnSlit,
    #[error("screen_x ({screen_x}) must be strictly beyond both slit abscissas")]
    ScreenNotBeyondSlits { screen_x: f64 },
    #[error("n_samples must be at least 8, got {n_samples}")]
    TooFewSamples { n_samples: usize },
    #[error("screen_span must be a finite increasing interval, got ({lo}, {hi})")]
    InvalidSpan { lo: f64, hi: f64 },
    #[error("geometry contains a non-finite coordinate")]
    NonFiniteGeometry,
    #[error("momentum must be positive, got {momentum}")]
    NonPositiveMomentum { momentum: f64 },
    #[error("screen point {point} lies outside the span ({lo}, {hi})")]
    OutOfSpan { point: f64, lo: f64, hi: f64 },
    #[error("solenoid at ({x}, {y}) is not enclosed between the two slit paths")]
    SolenoidNotEnclosed { x: f64, y: f64 },
    #[error(
        "solenoid core intersects a slit path for screen point {screen_point} \
         (distance {distance:.6e} < core radius {core_radius:.6e})"
    )]
    SolenoidBlocksPath {
        screen_point: f64,
        distance: f64,
        core_radius: f64,
    },
    #[error("pattern has {found} interior maxima; at least 3 are required")]
    TooFewPeaks { found: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Phase(#[from] PhaseError),
}

/// Point source, two ideal point slits, and a sampled screen line.
#[derive(Debug, Clone, Copy)]
pub struct TwoSlitGeometry {
    source: SpacePoint,
    slit_a: SpacePoint,
    slit_b: SpacePoint,
    screen_x: f64,
    screen_span: (f64, f64),
    n_samples: usize,
}

impl TwoSlitGeometry {
    pub fn new(
        source: SpacePoint,
        slit_a: SpacePoint,
        slit_b: SpacePoint,
        screen_x: f64,
        screen_span: (f64, f64),
        n_samples: usize,
    ) -> Result<Self, InterferenceError> {
        if !source.is_finite()
            || !slit_a.is_finite()
            || !slit_b.is_finite()
            || !screen_x.is_finite()
            || !screen_span.0.is_finite()
            || !screen_span.1.is_finite()
        {
            return Err(InterferenceError::NonFiniteGeometry);
        }
        if slit_a == slit_b {
            return Err(InterferenceError::CoincidentSlits);
        }
        if source == slit_a || source == slit_b {
            return Err(InterferenceError::SourceOnSlit);
        }
        if !(screen_x > slit_a.x && screen_x > slit_b.x) {
            return Err(InterferenceError::ScreenNotBeyondSlits { screen_x });
        }
        if n_samples < 8 {
            return Err(InterferenceError::TooFewSamples { n_samples });
        }
        if screen_span.0 >= screen_span.1 {
            return Err(InterferenceError::InvalidSpan {
                lo: screen_span.0,
                hi: screen_span.1,
            });
        }
        Ok(TwoSlitGeometry {
            source,
            slit_a,
            slit_b,
            screen_x,
            screen_span,
            n_samples,
        })
    }

    pub fn source(&self) -> SpacePoint {
        self.source
    }

    pub fn slit_a(&self) -> SpacePoint {
        self.slit_a
    }

    pub fn slit_b(&self) -> SpacePoint {
        self.slit_b
    }

    pub fn screen_x(&self) -> f64 {
        self.screen_x
    }

    pub fn screen_span(&self) -> (f64, f64) {
        self.screen_span
    }

    pub fn n_samples(&self) -> usize {
        self.n_samples
    }

    /// Midpoint of the screen span.
    pub fn center(&self) -> f64 {
        0.5 * (self.screen_span.0 + self.screen_span.1)
    }

    /// The `n_samples` equally spaced screen coordinates, inclusive of both
    /// span endpoints.
    pub fn sample_coords(&self) -> Vec<f64> {
        let (lo, hi) = self.screen_span;
        let denom = (self.n_samples - 1) as f64;
        (0..self.n_samples)
            .map(|j| {
                let t = j as f64 / denom;
                lo * (1.0 - t) + hi * t
            })
            .collect()
    }

    /// Exact path-length difference `l1 - l2` at a screen point (path 1 runs
    /// through `slit_a`).
    pub fn path_difference(&self, screen_point: f64) -> f64 {
        let target = SpacePoint::new(self.screen_x, screen_point);
        let l1 = self.source.distance_to(self.slit_a) + self.slit_a.distance_to(target);
        let l2 = self.source.distance_to(self.slit_b) + self.slit_b.distance_to(target);
        l1 - l2
    }

    /// Analytic derivative of [`Self::path_difference`] with respect to the
    /// screen coordinate.
    pub fn path_difference_slope(&self, screen_point: f64) -> f64 {
        let target = SpacePoint::new(self.screen_x, screen_point);
        let d1 = (screen_point - self.slit_a.y) / self.slit_a.distance_to(target);
        let d2 = (screen_point - self.slit_b.y) / self.slit_b.distance_to(target);
        d1 - d2
    }
}

/// Two-slit geometry with an ideal solenoid placed between the slit paths.
///
/// Construction verifies, for every sampled screen point, that the closed
/// loop through both paths winds around the solenoid center and that neither
/// path passes within the core radius.
#[derive(Debug, Clone, Copy)]
pub struct ABGeometry {
    base: TwoSlitGeometry,
    solenoid: Solenoid,
}

impl ABGeometry {
    pub fn new(base: TwoSlitGeometry, solenoid: Solenoid) -> Result<Self, InterferenceError> {
        let center = solenoid.center();
        for screen_point in base.sample_coords() {
            let target = SpacePoint::new(base.screen_x, screen_point);
            let loop_vertices = [base.source, base.slit_a, target, base.slit_b];
            if winding_number(&loop_vertices, center).abs() != 1 {
                return Err(InterferenceError::SolenoidNotEnclosed {
                    x: center.x,
                    y: center.y,
                });
            }
            for (a, b) in [
                (base.source, base.slit_a),
                (base.slit_a, target),
                (base.source, base.slit_b),
                (base.slit_b, target),
            ] {
                let distance = segment_point_distance(a, b, center);
                if distance < solenoid.core_radius() {
                    return Err(InterferenceError::SolenoidBlocksPath {
                        screen_point,
                        distance,
                        core_radius: solenoid.core_radius(),
                    });
                }
            }
        }
        Ok(ABGeometry { base, solenoid })
    }

    pub fn base(&self) -> &TwoSlitGeometry {
        &self.base
    }

    pub fn solenoid(&self) -> &Solenoid {
        &self.solenoid
    }
}

/// The geometry and constants that generated a pattern.
#[derive(Debug, Clone, Copy)]
pub struct PatternMeta {
    pub geometry: TwoSlitGeometry,
    pub params: ModelParams,
    pub momentum: f64,
    /// Enclosed solenoid flux, 0 when no solenoid is present.
    pub flux: f64,
}

/// Builds the path pair without the span precondition; pattern sampling
/// calls this directly since its coordinates are in-span by construction.
fn slit_paths_unchecked(
    geometry: &TwoSlitGeometry,
    screen_point: f64,
    momentum: f64,
) -> Result<(Path, Path), InterferenceError> {
    let target = SpacePoint::new(geometry.screen_x, screen_point);
    let path_a = Path::new(vec![geometry.source, geometry.slit_a, target], momentum)?;
    let path_b = Path::new(vec![geometry.source, geometry.slit_b, target], momentum)?;
    Ok((path_a, path_b))
}

/// The two three-vertex polylines source -> slit -> screen point, both
/// carrying the same momentum magnitude. Path 1 runs through `slit_a`. The
/// screen point must lie within the (closed) screen span.
pub fn two_slit_paths(
    geometry: &TwoSlitGeometry,
    screen_point: f64,
    momentum: f64,
) -> Result<(Path, Path), InterferenceError> {
    let (lo, hi) = geometry.screen_span;
    if !(screen_point >= lo && screen_point <= hi) {
        return Err(InterferenceError::OutOfSpan {
            point: screen_point,
            lo,
            hi,
        });
    }
    slit_paths_unchecked(geometry, screen_point, momentum)
}

/// Samples the two-path intensity over the screen with an arbitrary field.
pub fn pattern_with_field(
    geometry: &TwoSlitGeometry,
    params: &ModelParams,
    momentum: f64,
    field: &FieldSpec,
) -> Result<FringePattern, InterferenceError> {
    if !momentum.is_finite() || momentum <= 0.0 {
        return Err(InterferenceError::NonPositiveMomentum { momentum });
    }
    let coords = geometry.sample_coords();
    let mut intensities = Vec::with_capacity(coords.len());
    for &x in &coords {
        let (path_a, path_b) = slit_paths_unchecked(geometry, x, momentum)?;
        let psi_a = phase::amplitude(&path_a, field, params)?;
        let psi_b = phase::amplitude(&path_b, field, params)?;
        intensities.push(phase::intensity(phase::superpose(&[psi_a, psi_b])?));
    }
    let flux = field.solenoid().map_or(0.0, |s| s.flux());
    let meta = PatternMeta {
        geometry: *geometry,
        params: *params,
        momentum,
        flux,
    };
    Ok(FringePattern::new(coords, intensities, meta)?)
}

/// Field-free two-slit fringe pattern. Each sample equals
/// `2 + 2 cos[(p / kappa)(l1 - l2)]` with exact path lengths.
pub fn pattern(
    geometry: &TwoSlitGeometry,
    params: &ModelParams,
    momentum: f64,
) -> Result<FringePattern, InterferenceError> {
    pattern_with_field(geometry, params, momentum, &FieldSpec::None)
}

/// Two-slit pattern with the solenoid potential included in both path
/// integrals. Relative to the flux-free pattern every phase is shifted by
/// `q flux / kappa` times the winding number of the closed loop that runs
/// out through `slit_a` and back through `slit_b` (a positive flux carries a
/// counterclockwise vector potential, so the shift is `+q flux / kappa` when
/// that loop winds counterclockwise around the solenoid).
pub fn ab_pattern(
    geometry: &ABGeometry,
    params: &ModelParams,
    momentum: f64,
) -> Result<FringePattern, InterferenceError> {
    pattern_with_field(
        geometry.base(),
        params,
        momentum,
        &FieldSpec::IdealSolenoid(*geometry.solenoid()),
    )
}

/// Interior maxima refined by parabolic interpolation, plus the mean
/// spacing from a least-squares line of peak position against peak index.
#[derive(Debug, Clone)]
pub struct FringeAnalysis {
    pub spacing: f64,
    pub peak_positions: Vec<f64>,
}

/// Result of inverting a fringe pattern for `kappa`.
#[derive(Debug, Clone, Copy)]
pub struct KappaFit {
    pub kappa_hat: f64,
    pub fringe_spacing: f64,
    pub peaks_used: usize,
}

/// Detects interior local maxima by three-point comparison and refines each
/// by parabolic interpolation. The comparison is strict on the left and
/// non-strict on the right so a symmetric two-sample plateau registers once.
pub fn fringe_analysis(pattern: &FringePattern) -> Result<FringeAnalysis, InterferenceError> {
    let w = pattern.intensities();
    let x = pattern.screen_coords();
    let mut peaks = Vec::new();
    for i in 1..w.len().saturating_sub(1) {
        if w[i] > w[i - 1] && w[i] >= w[i + 1] {
            let position = match parabolic_peak_offset(w[i - 1], w[i], w[i + 1]) {
                Some(delta) => x[i] + delta * 0.5 * (x[i + 1] - x[i - 1]),
                None => x[i],
            };
            peaks.push(position);
        }
    }
    if peaks.len() < 3 {
        return Err(InterferenceError::TooFewPeaks { found: peaks.len() });
    }
    let indices: Vec<f64> = (0..peaks.len()).map(|k| k as f64).collect();
    let (spacing, _) = linear_fit(&indices, &peaks).expect("at least three peaks");
    Ok(FringeAnalysis {
        spacing,
        peak_positions: peaks,
    })
}

/// Mean fringe spacing; requires at least three interior maxima.
pub fn fringe_spacing(pattern: &FringePattern) -> Result<f64, InterferenceError> {
    Ok(fringe_analysis(pattern)?.spacing)
}

/// Inverts a measured fringe spacing for `kappa`: the spacing is converted
/// to a path-difference period through the exact geometric derivative at the
/// pattern center, and `kappa_hat = p * period / (2 pi)`.
pub fn fit_kappa(
    pattern: &FringePattern,
    momentum: f64,
    geometry: &TwoSlitGeometry,
) -> Result<KappaFit, InterferenceError> {
    if !momentum.is_finite() || momentum <= 0.0 {
        return Err(InterferenceError::NonPositiveMomentum { momentum });
    }
    let analysis = fringe_analysis(pattern)?;
    let slope = geometry.path_difference_slope(geometry.center()).abs();
    let period = analysis.spacing * slope;
    Ok(KappaFit {
        kappa_hat: momentum * period / (2.0 * PI),
        fringe_spacing: analysis.spacing,
        peaks_used: analysis.peak_positions.len(),
    })
}

/// The recovered `kappa` alone; see [`fit_kappa`].
pub fn extract_kappa(
    pattern: &FringePattern,
    momentum: f64,
    geometry: &TwoSlitGeometry,
) -> Result<f64, InterferenceError> {
    Ok(fit_kappa(pattern, momentum, geometry)?.kappa_hat)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use crate::numeric::bisect;

    fn canonical() -> TwoSlitGeometry {
        TwoSlitGeometry::new(
            SpacePoint::new(-100.0, 0.0),
            SpacePoint::new(0.0, 0.5),
            SpacePoint::new(0.0, -0.5),
            100.0,
            (-50.0, 50.0),
            512,
        )
        .unwrap()
    }

    /// Wide geometry with many fringes near the axis, used for spacing and
    /// kappa-extraction tests.
    fn extraction_geometry(n_samples: usize) -> TwoSlitGeometry {
        TwoSlitGeometry::new(
            SpacePoint::new(-10_000.0, 0.0),
            SpacePoint::new(0.0, 2_000.0),
            SpacePoint::new(0.0, -2_000.0),
            100_000.0,
            (-400.0, 400.0),
            n_samples,
        )
        .unwrap()
    }

    #[test]
    fn geometry_validation() {
        let p = SpacePoint::new(0.0, 0.5);
        assert!(matches!(
            TwoSlitGeometry::new(SpacePoint::new(-1.0, 0.0), p, p, 10.0, (-1.0, 1.0), 64),
            Err(InterferenceError::CoincidentSlits)
        ));
        assert!(matches!(
            TwoSlitGeometry::new(
                SpacePoint::new(-1.0, 0.0),
                p,
                SpacePoint::new(0.0, -0.5),
                0.0,
                (-1.0, 1.0),
                64
            ),
            Err(InterferenceError::ScreenNotBeyondSlits { .. })
        ));
        assert!(matches!(
            TwoSlitGeometry::new(
                SpacePoint::new(-1.0, 0.0),
                p,
                SpacePoint::new(0.0, -0.5),
                10.0,
                (-1.0, 1.0),
                7
            ),
            Err(InterferenceError::TooFewSamples { n_samples: 7 })
        ));
        assert!(matches!(
            TwoSlitGeometry::new(
                SpacePoint::new(-1.0, 0.0),
                p,
                SpacePoint::new(0.0, -0.5),
                10.0,
                (1.0, 1.0),
                64
            ),
            Err(InterferenceError::InvalidSpan { .. })
        ));
    }

    #[test]
    fn symmetric_center_point_has_equal_path_lengths() {
        let geom = canonical();
        let (a, b) = two_slit_paths(&geom, 0.0, 1.0).unwrap();
        assert_abs_diff_eq!(a.arc_length(), b.arc_length(), epsilon = 1e-12);
    }

    #[test]
    fn path_lengths_match_hand_arithmetic() {
        // Source (-1, 0), slits (0, +-0.5), screen point (10, 1): each leg is
        // a hypotenuse evaluated directly.
        let geom = TwoSlitGeometry::new(
            SpacePoint::new(-1.0, 0.0),
            SpacePoint::new(0.0, 0.5),
            SpacePoint::new(0.0, -0.5),
            10.0,
            (-5.0, 5.0),
            64,
        )
        .unwrap();
        let (a, b) = two_slit_paths(&geom, 1.0, 2.0).unwrap();
        let expect_a = (1.0_f64 + 0.25).sqrt() + (100.0_f64 + 0.25).sqrt();
        let expect_b = (1.0_f64 + 0.25).sqrt() + (100.0_f64 + 2.25).sqrt();
        assert_abs_diff_eq!(a.arc_length(), expect_a, epsilon = 1e-12);
        assert_abs_diff_eq!(b.arc_length(), expect_b, epsilon = 1e-12);
        assert_eq!(a.momentum_magnitude(), 2.0);
        assert_eq!(b.momentum_magnitude(), 2.0);
    }

    #[test]
    fn span_endpoints_are_valid_screen_points() {
        let geom = canonical();
        assert!(two_slit_paths(&geom, 50.0, 1.0).is_ok());
        assert!(two_slit_paths(&geom, -50.0, 1.0).is_ok());
        assert!(matches!(
            two_slit_paths(&geom, 50.0001, 1.0),
            Err(InterferenceError::OutOfSpan { .. })
        ));
    }

    #[test]
    fn pattern_center_is_fully_constructive() {
        // Odd sample count puts a sample exactly on the symmetry axis.
        let geom = TwoSlitGeometry::new(
            SpacePoint::new(-100.0, 0.0),
            SpacePoint::new(0.0, 0.5),
            SpacePoint::new(0.0, -0.5),
            100.0,
            (-50.0, 50.0),
            511,
        )
        .unwrap();
        let patt = pattern(&geom, &ModelParams::default(), 2.0 * PI).unwrap();
        let center = patt.intensities()[255];
        assert_abs_diff_eq!(center, 4.0, epsilon = 1e-10);
    }

    #[test]
    fn destructive_point_from_bisection_oracle() {
        // Find the screen point where (p / kappa) (l1 - l2) = pi by bisecting
        // the exact path-difference, then check the two-path intensity there.
        let geom = extraction_geometry(64);
        let params = ModelParams::default();
        let p = 2.0 * PI;
        let target = PI * params.kappa() / p;
        let x = bisect(
            0.0,
            200.0,
            |x| geom.path_difference(x).abs() - target,
            1e-14,
            300,
        )
        .expect("bracketed");
        let (pa, pb) = two_slit_paths(&geom, x, p).unwrap();
        let psi_a = phase::amplitude(&pa, &FieldSpec::None, &params).unwrap();
        let psi_b = phase::amplitude(&pb, &FieldSpec::None, &params).unwrap();
        let w = phase::intensity(phase::superpose(&[psi_a, psi_b]).unwrap());
        assert!(w < 1e-9, "destructive intensity {w} not below 1e-9");
    }

    #[test]
    fn pattern_matches_cosine_law_everywhere() {
        let geom = canonical();
        let params = ModelParams::default();
        let p = 2.0 * PI;
        let patt = pattern(&geom, &params, p).unwrap();
        let mut worst: f64 = 0.0;
        for (&x, &w) in patt.screen_coords().iter().zip(patt.intensities()) {
            let expected = 2.0 + 2.0 * ((p / params.kappa()) * geom.path_difference(x)).cos();
            worst = worst.max((w - expected).abs());
        }
        assert!(worst < 1e-10, "max deviation {worst}");
    }

    #[test]
    fn near_axis_maxima_spacing_matches_small_angle_scale() {
        // Slit separation 20, slit-screen distance 100, wavelength 1: maxima
        // near the axis sit about lambda L / d = 5 apart. The oracle below
        // finds the first off-axis maximum from the exact path difference.
        let geom = TwoSlitGeometry::new(
            SpacePoint::new(-100.0, 0.0),
            SpacePoint::new(0.0, 10.0),
            SpacePoint::new(0.0, -10.0),
            100.0,
            (-12.0, 12.0),
            4097,
        )
        .unwrap();
        let params = ModelParams::default();
        let p = 2.0 * PI; // lambda = 2 pi kappa / p = 1
        let patt = pattern(&geom, &params, p).unwrap();
        let analysis = fringe_analysis(&patt).unwrap();

        // Two maxima nearest the axis.
        let mut by_axis_distance = analysis.peak_positions.clone();
        by_axis_distance.sort_by(|a, b| a.abs().partial_cmp(&b.abs()).unwrap());
        let nearest = by_axis_distance[0];
        let second = by_axis_distance[1];
        assert_abs_diff_eq!(nearest, 0.0, epsilon = 1e-3);

        // Oracle: exact solution of |path difference| = lambda.
        let x1 = bisect(0.1, 12.0, |x| geom.path_difference(x).abs() - 1.0, 1e-13, 200)
            .expect("bracketed");
        assert_relative_eq!(second.abs(), x1, max_relative = 1e-3);
        // Small-angle scale is approximate only.
        assert_relative_eq!(x1, 5.0, max_relative = 0.02);
    }

    #[test]
    fn pattern_is_mirror_symmetric() {
        let geom = canonical();
        let patt = pattern(&geom, &ModelParams::default(), 2.0 * PI).unwrap();
        let w = patt.intensities();
        let n = w.len();
        let mut worst: f64 = 0.0;
        for i in 0..n / 2 {
            worst = worst.max((w[i] - w[n - 1 - i]).abs());
        }
        assert!(worst < 1e-10, "asymmetry {worst}");
    }

    // slit_a below the axis so the loop out through slit_a and back through
    // slit_b winds counterclockwise and the fringe shift is +q flux / kappa.
    fn ab_setup(flux: f64) -> (ABGeometry, TwoSlitGeometry) {
        let base = TwoSlitGeometry::new(
            SpacePoint::new(-100.0, 0.0),
            SpacePoint::new(0.0, -0.5),
            SpacePoint::new(0.0, 0.5),
            100.0,
            (-50.0, 50.0),
            511,
        )
        .unwrap();
        let solenoid = Solenoid::new(SpacePoint::new(0.3, 0.0), flux, 0.05).unwrap();
        (ABGeometry::new(base, solenoid).unwrap(), base)
    }

    #[test]
    fn ab_with_zero_flux_matches_field_free_pattern() {
        let params = ModelParams::default();
        let p = 2.0 * PI;
        let (ab, base) = ab_setup(0.0);
        let with = ab_pattern(&ab, &params, p).unwrap();
        let without = pattern(&base, &params, p).unwrap();
        for (a, b) in with.intensities().iter().zip(without.intensities()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn half_turn_flux_swaps_maxima_and_minima() {
        let params = ModelParams::default();
        let p = 2.0 * PI;
        // q flux / kappa = pi.
        let (ab, base) = ab_setup(PI);
        let with = ab_pattern(&ab, &params, p).unwrap();
        let without = pattern(&base, &params, p).unwrap();
        let center = with.len() / 2;
        assert_abs_diff_eq!(without.intensities()[center], 4.0, epsilon = 1e-10);
        assert!(
            with.intensities()[center] < 1e-6,
            "shifted center {}",
            with.intensities()[center]
        );
    }

    #[test]
    fn full_turn_flux_restores_the_pattern() {
        let params = ModelParams::default();
        let p = 2.0 * PI;
        let (ab, base) = ab_setup(2.0 * PI);
        let with = ab_pattern(&ab, &params, p).unwrap();
        let without = pattern(&base, &params, p).unwrap();
        for (a, b) in with.intensities().iter().zip(without.intensities()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-9);
        }
    }

    #[test]
    fn ab_pattern_is_phase_shifted_cosine() {
        let params = ModelParams::default();
        let p = 2.0 * PI;
        let flux = 1.234;
        let (ab, base) = ab_setup(flux);
        let with = ab_pattern(&ab, &params, p).unwrap();
        let shift = params.charge() * flux / params.kappa();
        let mut worst: f64 = 0.0;
        for (&x, &w) in with.screen_coords().iter().zip(with.intensities()) {
            let theta = (p / params.kappa()) * base.path_difference(x);
            worst = worst.max((w - (2.0 + 2.0 * (theta + shift).cos())).abs());
        }
        assert!(worst < 1e-9, "max deviation from shifted law {worst}");
    }

    #[test]
    fn flux_contribution_is_topological() {
        // Moving the solenoid by 20% of the slit gap, invariants intact,
        // leaves the pattern unchanged.
        let params = ModelParams::default();
        let p = 2.0 * PI;
        let (ab, base) = ab_setup(1.7);
        let moved = ABGeometry::new(
            base,
            Solenoid::new(SpacePoint::new(0.3, 0.2), 1.7, 0.05).unwrap(),
        )
        .unwrap();
        let first = ab_pattern(&ab, &params, p).unwrap();
        let second = ab_pattern(&moved, &params, p).unwrap();
        for (a, b) in first.intensities().iter().zip(second.intensities()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-9);
        }
    }

    #[test]
    fn ab_construction_rejects_bad_solenoid_placement() {
        let base = canonical();
        // Far outside the loop.
        assert!(matches!(
            ABGeometry::new(
                base,
                Solenoid::new(SpacePoint::new(0.0, 30.0), 1.0, 0.01).unwrap()
            ),
            Err(InterferenceError::SolenoidNotEnclosed { .. })
        ));
        // Core so large it swallows the slit paths.
        assert!(matches!(
            ABGeometry::new(
                base,
                Solenoid::new(SpacePoint::new(0.3, 0.0), 1.0, 0.6).unwrap()
            ),
            Err(InterferenceError::SolenoidBlocksPath { .. })
        ));
    }

    #[test]
    fn synthetic_cosine_spacing() {
        // W(x) = 2 + 2 cos(2 pi x / 5) sampled on [0, 50]: period 5 by
        // construction of the generator.
        let geom = canonical();
        let meta = PatternMeta {
            geometry: geom,
            params: ModelParams::default(),
            momentum: 1.0,
            flux: 0.0,
        };
        let n = 512;
        let coords: Vec<f64> = (0..n).map(|j| 50.0 * j as f64 / (n - 1) as f64).collect();
        let intensities: Vec<f64> = coords
            .iter()
            .map(|x| 2.0 + 2.0 * (2.0 * PI * x / 5.0).cos())
            .collect();
        let patt = FringePattern::new(coords.clone(), intensities.clone(), meta).unwrap();
        let spacing = fringe_spacing(&patt).unwrap();
        assert_abs_diff_eq!(spacing, 5.0, epsilon = 1e-3);

        // Constant offsets do not move the peaks.
        let lifted: Vec<f64> = intensities.iter().map(|w| w + 0.5).collect();
        let patt_up = FringePattern::new(coords, lifted, meta).unwrap();
        assert_abs_diff_eq!(
            fringe_spacing(&patt_up).unwrap(),
            spacing,
            epsilon = 1e-6
        );
    }

    #[test]
    fn two_maxima_are_not_enough() {
        let geom = canonical();
        let meta = PatternMeta {
            geometry: geom,
            params: ModelParams::default(),
            momentum: 1.0,
            flux: 0.0,
        };
        let n = 256;
        let coords: Vec<f64> = (0..n).map(|j| 13.0 * j as f64 / (n - 1) as f64).collect();
        // Interior maxima at x = 6 and x = 12 only (x = 0 sits on the edge).
        let intensities: Vec<f64> = coords
            .iter()
            .map(|x| 2.0 + 2.0 * (2.0 * PI * x / 6.0).cos())
            .collect();
        let patt = FringePattern::new(coords, intensities, meta).unwrap();
        assert!(matches!(
            fringe_spacing(&patt),
            Err(InterferenceError::TooFewPeaks { found: 2 })
        ));
    }

    #[test]
    fn kappa_round_trip_at_unity() {
        let geom = extraction_geometry(4096);
        let params = ModelParams::default();
        let p = 2.0 * PI;
        let patt = pattern(&geom, &params, p).unwrap();
        let kappa_hat = extract_kappa(&patt, p, &geom).unwrap();
        assert_relative_eq!(kappa_hat, 1.0, max_relative = 1e-4);
    }

    #[test]
    fn kappa_round_trip_at_scaled_hbar() {
        let geom = extraction_geometry(4096);
        let kappa = 1.0546;
        let params = ModelParams::new(kappa, 1.0, 1.0, 1.0).unwrap();
        let p = 2.0 * PI;
        let patt = pattern(&geom, &params, p).unwrap();
        let kappa_hat = extract_kappa(&patt, p, &geom).unwrap();
        assert_relative_eq!(kappa_hat, kappa, max_relative = 1e-4);
    }

    #[test]
    fn kappa_extraction_insensitive_to_p_and_slit_scaling() {
        // Doubling p and halving the slit separation changes the pattern but
        // not the recovered kappa.
        let params = ModelParams::default();
        let geom1 = extraction_geometry(4096);
        let geom2 = TwoSlitGeometry::new(
            SpacePoint::new(-10_000.0, 0.0),
            SpacePoint::new(0.0, 1_000.0),
            SpacePoint::new(0.0, -1_000.0),
            100_000.0,
            (-400.0, 400.0),
            4096,
        )
        .unwrap();
        let p = 2.0 * PI;
        let k1 = extract_kappa(&pattern(&geom1, &params, p).unwrap(), p, &geom1).unwrap();
        let k2 =
            extract_kappa(&pattern(&geom2, &params, 2.0 * p).unwrap(), 2.0 * p, &geom2).unwrap();
        assert_relative_eq!(k1, k2, max_relative = 1e-4);
        assert_relative_eq!(k2, 1.0, max_relative = 1e-4);
    }

    #[test]
    fn generated_intensities_stay_in_two_path_range() {
        let geom = extraction_geometry(2048);
        let patt = pattern(&geom, &ModelParams::default(), 5.0).unwrap();
        for &w in patt.intensities() {
            assert!((-1e-12..=4.0 + 1e-12).contains(&w), "intensity {w}");
        }
    }
}
