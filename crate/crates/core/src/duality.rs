//! Observables of the two-path interferometer: degree of coherence, Stokes
//! parameters, degrees of polarization, conditional polarization states,
//! visibility, the Helstrom matrix, distinguishability, trace distance, and
//! screen intensity profiles.
//!
//! Everything here is a pure function of a [`CoherencePolarizationMatrix`].
//! In the fixed basis {|H,1>, |H,2>, |V,1>, |V,2>}, path 1 occupies indices
//! (0, 2) and path 2 indices (1, 3); the 2x2 blocks extracted along those
//! index pairs live in the {|H>, |V>} polarization basis.

use crate::error::{Error, PathLabel, Result};
use crate::linalg::{c, C64, Mat2};
use crate::state::CoherencePolarizationMatrix;
use serde::Serialize;

/// Window inside which a slightly negative eigenvalue discriminant is treated
/// as roundoff and clamped to zero; anything more negative signals an invalid
/// input matrix.
pub const DISCRIMINANT_CLAMP: f64 = 1e-9;

/// Magnitude below which the coherence phase is reported as undefined.
pub const PHASE_UNDEFINED_BELOW: f64 = 1e-12;

/// One of the two interferometer arms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Path {
    One,
    Two,
}

impl Path {
    /// (H, V) basis indices of this path in the 4-dimensional space.
    #[inline]
    pub fn indices(self) -> (usize, usize) {
        match self {
            Path::One => (0, 2),
            Path::Two => (1, 3),
        }
    }

    fn label(self) -> PathLabel {
        match self {
            Path::One => PathLabel::One,
            Path::Two => PathLabel::Two,
        }
    }
}

/// Stokes parameters of one path, as dimensionless ensemble averages.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StokesVector {
    pub s0: f64,
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
}

/// Normalized 2x2 polarization state of one path in the {|H>, |V>} basis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolarizationState {
    m: Mat2,
}

impl PolarizationState {
    pub fn from_matrix(m: Mat2) -> Self {
        Self { m }
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.m
    }

    /// |H><H|.
    pub fn horizontal() -> Self {
        Self::from_matrix(Mat2::from_rows([
            [c(1.0, 0.0), c(0.0, 0.0)],
            [c(0.0, 0.0), c(0.0, 0.0)],
        ]))
    }

    /// |V><V|.
    pub fn vertical() -> Self {
        Self::from_matrix(Mat2::from_rows([
            [c(0.0, 0.0), c(0.0, 0.0)],
            [c(0.0, 0.0), c(1.0, 0.0)],
        ]))
    }
}

/// Weighted difference of the two conditional polarization states,
/// I1 rho_1 - I2 rho_2, expressed directly in density matrix entries.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HelstromMatrix {
    m: Mat2,
}

impl HelstromMatrix {
    pub fn matrix(&self) -> &Mat2 {
        &self.m
    }
}

/// Double-slit detection geometry: a wavenumber plus either explicit path
/// lengths or the far-field triple they are derived from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScreenGeometry {
    /// Wavenumber k (inverse length).
    pub wavenumber: f64,
    pub paths: PathLengths,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PathLengths {
    /// Slit-to-detector distances given directly.
    Direct { r1: f64, r2: f64 },
    /// Far-field layout: slit 1 at +d/2 and slit 2 at -d/2 on the transverse
    /// axis, screen at distance `screen_distance`, detector at transverse
    /// coordinate `screen_coordinate`. The far-field reduction of the fringe
    /// visibility assumes `screen_distance >> slit_separation`; that is the
    /// caller's responsibility and is not enforced here.
    FarField {
        slit_separation: f64,
        screen_distance: f64,
        screen_coordinate: f64,
    },
}

/// NaN-safe rejection of non-positive lengths.
fn not_positive(x: f64) -> bool {
    !x.is_finite() || x <= 0.0
}

impl ScreenGeometry {
    /// Resolve to concrete path lengths (r1, r2).
    pub fn path_lengths(&self) -> Result<(f64, f64)> {
        if not_positive(self.wavenumber) {
            return Err(Error::InvalidGeometry(format!(
                "wavenumber must be positive, got {}",
                self.wavenumber
            )));
        }
        match self.paths {
            PathLengths::Direct { r1, r2 } => {
                if not_positive(r1) || not_positive(r2) {
                    return Err(Error::InvalidGeometry(format!(
                        "path lengths must be positive, got r1 = {r1}, r2 = {r2}"
                    )));
                }
                Ok((r1, r2))
            }
            PathLengths::FarField {
                slit_separation: d,
                screen_distance: l,
                screen_coordinate: x,
            } => {
                if not_positive(d) || not_positive(l) || !x.is_finite() {
                    return Err(Error::InvalidGeometry(format!(
                        "need slit_separation > 0, screen_distance > 0, finite coordinate; \
                         got d = {d}, L = {l}, x = {x}"
                    )));
                }
                let r1 = f64::hypot(l, x - 0.5 * d);
                let r2 = f64::hypot(l, x + 0.5 * d);
                Ok((r1, r2))
            }
        }
    }
}

/// Uniform scan of the screen coordinate used by the numeric fringe contrast.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub samples: usize,
}

/// Every scalar observable of one state in a single bundle. Fields that are
/// undefined for the state (coherence of an empty path, phase of a vanishing
/// coherence) are `None` and serialize as explicit nulls, never as zeros.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DualityReport {
    pub i1: f64,
    pub i2: f64,
    pub mu_abs: Option<f64>,
    pub mu_phase: Option<f64>,
    pub p1: Option<f64>,
    pub p2: Option<f64>,
    pub visibility: f64,
    pub distinguishability: f64,
    pub d2_plus_v2: f64,
}

impl DualityReport {
    /// Largest violation of the range invariants every emitted report must
    /// satisfy: all quantities in [0, 1] and I1 + I2 = 1.
    pub fn range_defect(&self) -> f64 {
        fn outside(x: f64) -> f64 {
            (-x).max(x - 1.0).max(0.0)
        }
        let mut d = outside(self.i1)
            .max(outside(self.i2))
            .max(outside(self.visibility))
            .max(outside(self.distinguishability))
            .max((self.i1 + self.i2 - 1.0).abs());
        for v in [self.mu_abs, self.p1, self.p2].into_iter().flatten() {
            d = d.max(outside(v));
        }
        d
    }
}

/// Unnormalized 2x2 sub-block of one path in the {|H>, |V>} basis.
pub fn path_block(rho: &CoherencePolarizationMatrix, path: Path) -> Mat2 {
    let (h, v) = path.indices();
    Mat2::from_rows([
        [rho.entry(h, h), rho.entry(h, v)],
        [rho.entry(v, h), rho.entry(v, v)],
    ])
}

/// Path probabilities (I1, I2) = (rho_11 + rho_33, rho_22 + rho_44).
pub fn path_probabilities(rho: &CoherencePolarizationMatrix) -> (f64, f64) {
    let i1 = rho.entry(0, 0).re + rho.entry(2, 2).re;
    let i2 = rho.entry(1, 1).re + rho.entry(3, 3).re;
    (i1, i2)
}

/// Degree of coherence mu = (rho_12 + rho_34) / sqrt(I1 I2).
///
/// Undefined when either path carries no probability.
pub fn degree_of_coherence(rho: &CoherencePolarizationMatrix, tol: f64) -> Result<C64> {
    let (i1, i2) = path_probabilities(rho);
    if i1 <= tol {
        return Err(Error::EmptyPath {
            path: PathLabel::One,
            intensity: i1,
        });
    }
    if i2 <= tol {
        return Err(Error::EmptyPath {
            path: PathLabel::Two,
            intensity: i2,
        });
    }
    Ok((rho.entry(0, 1) + rho.entry(2, 3)) / (i1.sqrt() * i2.sqrt()))
}

/// Stokes parameters of one path.
///
/// For path 1: (rho_11 + rho_33, rho_11 - rho_33, rho_13 + rho_31,
/// i(rho_13 - rho_31)); path 2 reads the same formulas on indices (2, 4).
/// The components are real for any Hermitian input; the imaginary residue is
/// checked against `debug_assert` and discarded.
pub fn stokes(rho: &CoherencePolarizationMatrix, path: Path) -> StokesVector {
    let (h, v) = path.indices();
    let s0 = rho.entry(h, h) + rho.entry(v, v);
    let s1 = rho.entry(h, h) - rho.entry(v, v);
    let s2 = rho.entry(h, v) + rho.entry(v, h);
    let s3 = c(0.0, 1.0) * (rho.entry(h, v) - rho.entry(v, h));
    debug_assert!(
        s0.im.abs().max(s1.im.abs()).max(s2.im.abs()).max(s3.im.abs()) < 1e-9,
        "imaginary residue in Stokes parameters of a non-Hermitian matrix"
    );
    StokesVector {
        s0: s0.re,
        s1: s1.re,
        s2: s2.re,
        s3: s3.re,
    }
}

/// Degree of polarization of one path:
/// p = sqrt(S1^2 + S2^2 + S3^2) / S0.
pub fn degree_of_polarization(
    rho: &CoherencePolarizationMatrix,
    path: Path,
    tol: f64,
) -> Result<f64> {
    let s = stokes(rho, path);
    if s.s0 <= tol {
        return Err(Error::EmptyPath {
            path: path.label(),
            intensity: s.s0,
        });
    }
    Ok((s.s1 * s.s1 + s.s2 * s.s2 + s.s3 * s.s3).sqrt() / s.s0)
}

/// Normalized polarization state of one path: the 2x2 sub-block divided by
/// the path probability.
pub fn conditional_polarization(
    rho: &CoherencePolarizationMatrix,
    path: Path,
    tol: f64,
) -> Result<PolarizationState> {
    let block = path_block(rho, path);
    let weight = block.trace().re;
    if weight <= tol {
        return Err(Error::EmptyPath {
            path: path.label(),
            intensity: weight,
        });
    }
    Ok(PolarizationState::from_matrix(block.scale(1.0 / weight)))
}

/// Rebuild a polarization state from its Stokes parameters,
/// rho = (1/2) sum_i (S_i / S_0) sigma_i.
///
/// Independent route to the same matrix as [`conditional_polarization`];
/// used to cross-check the two.
pub fn polarization_from_stokes(s: &StokesVector, tol: f64) -> Result<PolarizationState> {
    if s.s0 <= tol {
        return Err(Error::EmptyPath {
            path: PathLabel::One,
            intensity: s.s0,
        });
    }
    let n = 1.0 / (2.0 * s.s0);
    Ok(PolarizationState::from_matrix(Mat2::from_rows([
        [c((s.s0 + s.s1) * n, 0.0), c(s.s2 * n, -s.s3 * n)],
        [c(s.s2 * n, s.s3 * n), c((s.s0 - s.s1) * n, 0.0)],
    ])))
}

/// Fringe visibility near the screen center: V = 2 |rho_12 + rho_34|.
pub fn visibility(rho: &CoherencePolarizationMatrix) -> f64 {
    2.0 * (rho.entry(0, 1) + rho.entry(2, 3)).norm()
}

/// Fringe visibility without the far-field reduction:
/// 2 r1 r2 |rho_12 + rho_34| / (r2^2 (rho_11 + rho_33) + r1^2 (rho_22 + rho_44)).
///
/// Reduces to [`visibility`] when r1 = r2.
pub fn visibility_general(rho: &CoherencePolarizationMatrix, r1: f64, r2: f64) -> Result<f64> {
    if not_positive(r1) || not_positive(r2) {
        return Err(Error::InvalidGeometry(format!(
            "path lengths must be positive, got r1 = {r1}, r2 = {r2}"
        )));
    }
    let (i1, i2) = path_probabilities(rho);
    let numer = 2.0 * r1 * r2 * (rho.entry(0, 1) + rho.entry(2, 3)).norm();
    Ok(numer / (r2 * r2 * i1 + r1 * r1 * i2))
}

/// Probability density of detection at the screen point fixed by `g`:
/// rho(P) = I1/r1^2 + I2/r2^2 + (2/(r1 r2)) Re[(rho_12 + rho_34) e^{ik(r1-r2)}].
///
/// The interference term is written on the unnormalized cross-path coherence,
/// so it vanishes continuously when a path empties and no division by a zero
/// intensity ever occurs.
pub fn screen_intensity(rho: &CoherencePolarizationMatrix, g: &ScreenGeometry) -> Result<f64> {
    let (r1, r2) = g.path_lengths()?;
    let (i1, i2) = path_probabilities(rho);
    let coherence = rho.entry(0, 1) + rho.entry(2, 3);
    let phase = C64::from_polar(1.0, g.wavenumber * (r1 - r2));
    Ok(i1 / (r1 * r1) + i2 / (r2 * r2) + 2.0 * (coherence * phase).re / (r1 * r2))
}

/// Numeric fringe contrast (max - min)/(max + min) of the intensity profile
/// sampled uniformly over the scan range.
///
/// The geometry template must be in far-field mode; its screen coordinate is
/// replaced by each scan sample in turn. Agreement with [`visibility`]
/// improves as d/L shrinks: the residual is dominated by the 1/r^2 envelope
/// drift, of relative size ~ (x/L)^2 + (x/L)(d/L) over the scanned window, so
/// the discrepancy vanishes as d/L -> 0 with the fringe count held fixed.
/// Extrema are taken over the raw samples with no interpolation; the sample
/// count is the caller's accuracy knob.
pub fn fringe_visibility_numeric(
    rho: &CoherencePolarizationMatrix,
    g_template: &ScreenGeometry,
    scan: &ScanSpec,
) -> Result<f64> {
    let (d, l) = match g_template.paths {
        PathLengths::FarField {
            slit_separation,
            screen_distance,
            ..
        } => (slit_separation, screen_distance),
        PathLengths::Direct { .. } => {
            return Err(Error::InvalidGeometry(
                "fringe scan requires a far-field geometry template".into(),
            ))
        }
    };
    let range_empty =
        !scan.x_min.is_finite() || !scan.x_max.is_finite() || scan.x_min >= scan.x_max;
    if scan.samples < 2 || range_empty {
        return Err(Error::EmptyScan(format!(
            "need x_min < x_max and at least 2 samples, got [{}, {}] with {}",
            scan.x_min, scan.x_max, scan.samples
        )));
    }

    let step = (scan.x_max - scan.x_min) / (scan.samples - 1) as f64;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..scan.samples {
        let geometry = ScreenGeometry {
            wavenumber: g_template.wavenumber,
            paths: PathLengths::FarField {
                slit_separation: d,
                screen_distance: l,
                screen_coordinate: scan.x_min + step * i as f64,
            },
        };
        let intensity = screen_intensity(rho, &geometry)?;
        lo = lo.min(intensity);
        hi = hi.max(intensity);
    }
    Ok((hi - lo) / (hi + lo))
}

/// The Helstrom matrix
/// [[rho_11 - rho_22, rho_13 - rho_24], [rho_31 - rho_42, rho_33 - rho_44]]:
/// the difference of the unnormalized path blocks.
pub fn helstrom(rho: &CoherencePolarizationMatrix) -> HelstromMatrix {
    HelstromMatrix {
        m: path_block(rho, Path::One) - path_block(rho, Path::Two),
    }
}

/// Distinguishability D = (|alpha + gamma| + |alpha - gamma|)/2 with
/// alpha = rho_11 - rho_22 + rho_33 - rho_44, beta = rho_13 - rho_24,
/// kappa = (rho_11 - rho_22)(rho_33 - rho_44) and
/// gamma = sqrt(alpha^2 + 4(|beta|^2 - kappa)).
///
/// A discriminant inside [-1e-9, 0) is clamped to zero as roundoff; anything
/// more negative is rejected, since it cannot arise from a valid state.
pub fn distinguishability(rho: &CoherencePolarizationMatrix) -> Result<f64> {
    // alpha and kappa are kept complex so that a corrupted (non-Hermitian)
    // diagonal surfaces as a negative discriminant instead of being silently
    // projected onto the real axis.
    let alpha = rho.entry(0, 0) - rho.entry(1, 1) + rho.entry(2, 2) - rho.entry(3, 3);
    let beta = rho.entry(0, 2) - rho.entry(1, 3);
    let kappa = (rho.entry(0, 0) - rho.entry(1, 1)) * (rho.entry(2, 2) - rho.entry(3, 3));
    let disc = (alpha * alpha + 4.0 * (c(beta.norm_sqr(), 0.0) - kappa)).re;
    if disc < -DISCRIMINANT_CLAMP {
        return Err(Error::NumericDomain { value: disc });
    }
    let gamma = disc.max(0.0).sqrt();
    Ok(0.5 * ((alpha.re + gamma).abs() + (alpha.re - gamma).abs()))
}

/// Distinguishability by the independent route: trace norm of the Helstrom
/// matrix via the closed-form 2x2 Hermitian eigenvalues.
pub fn distinguishability_oracle(rho: &CoherencePolarizationMatrix) -> f64 {
    let [lo, hi] = helstrom(rho).matrix().eigenvalues_hermitian();
    lo.abs() + hi.abs()
}

/// Trace distance T = (1/2) sum_i |lambda_i(pa - pb)| between two
/// polarization states.
pub fn trace_distance(pa: &PolarizationState, pb: &PolarizationState) -> f64 {
    let diff = *pa.matrix() - *pb.matrix();
    let [lo, hi] = diff.eigenvalues_hermitian();
    0.5 * (lo.abs() + hi.abs())
}

/// Evaluate every observable on one state.
///
/// When a path is empty, the coherence and that path's polarization degree
/// are reported as `None`; the phase is additionally `None` whenever |mu|
/// falls below [`PHASE_UNDEFINED_BELOW`]. The phase is mapped into (-pi, pi].
pub fn report(rho: &CoherencePolarizationMatrix, tol: f64) -> Result<DualityReport> {
    let (i1, i2) = path_probabilities(rho);
    let v = visibility(rho);
    let d = distinguishability(rho)?;

    let (mu_abs, mu_phase) = match degree_of_coherence(rho, tol) {
        Ok(mu) => {
            let abs = mu.norm();
            let phase = if abs < PHASE_UNDEFINED_BELOW {
                None
            } else {
                let arg = mu.arg();
                Some(if arg <= -std::f64::consts::PI {
                    std::f64::consts::PI
                } else {
                    arg
                })
            };
            (Some(abs), phase)
        }
        Err(Error::EmptyPath { .. }) => (None, None),
        Err(e) => return Err(e),
    };

    let pol = |path: Path| match degree_of_polarization(rho, path, tol) {
        Ok(p) => Ok(Some(p)),
        Err(Error::EmptyPath { .. }) => Ok(None),
        Err(e) => Err(e),
    };

    Ok(DualityReport {
        i1,
        i2,
        mu_abs,
        mu_phase,
        p1: pol(Path::One)?,
        p2: pol(Path::Two)?,
        visibility: v,
        distinguishability: d,
        d2_plus_v2: d * d + v * v,
    })
}
