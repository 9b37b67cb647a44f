//! Construction and validation of coherence-polarization states.
//!
//! Every state lives in the fixed 4-dimensional basis
//! {|H,1>, |H,2>, |V,1>, |V,2>}: horizontal/vertical polarization crossed with
//! the two interferometer paths. The basis order is a compile-time constant
//! shared by every module; see [`BASIS_LABELS`] and the `H1` .. `V2` index
//! constants.
//!
//! Constructors never repair their inputs. A matrix that fails the density
//! matrix axioms is reported as such by [`validate`] with per-axiom defects
//! rather than being hermitized or renormalized behind the caller's back.

use crate::error::{check_unit_interval, Error, Result};
use crate::linalg::{c, C64, Mat4};
use crate::rng::Xoshiro256PlusPlus;
use serde::Serialize;

/// Basis labels in their fixed order.
pub const BASIS_LABELS: [&str; 4] = ["H1", "H2", "V1", "V2"];

/// Index of |H,1>: horizontal polarization, path 1.
pub const H1: usize = 0;
/// Index of |H,2>: horizontal polarization, path 2.
pub const H2: usize = 1;
/// Index of |V,1>: vertical polarization, path 1.
pub const V1: usize = 2;
/// Index of |V,2>: vertical polarization, path 2.
pub const V2: usize = 3;

/// Default tolerance for validation and for the empty-path thresholds.
pub const DEFAULT_VALIDATE_TOL: f64 = 1e-9;

/// The 4x4 coherence-polarization density matrix.
///
/// The wrapper itself does not enforce the density matrix axioms: states can
/// be loaded from files and inspected even when broken. Use [`validate`] to
/// obtain a [`ValidationReport`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoherencePolarizationMatrix {
    m: Mat4,
}

impl CoherencePolarizationMatrix {
    pub fn from_matrix(m: Mat4) -> Self {
        Self { m }
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.m
    }

    #[inline]
    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.m.e[row][col]
    }

    /// The maximally mixed state, identity/4.
    pub fn maximally_mixed() -> Self {
        Self {
            m: Mat4::identity().scale(0.25),
        }
    }
}

/// A pure state of the path-polarization space, stored as four amplitudes in
/// the fixed basis order.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PureStateVector {
    amps: [C64; 4],
}

impl PureStateVector {
    pub fn from_amplitudes(amps: [C64; 4]) -> Self {
        Self { amps }
    }

    pub fn amplitudes(&self) -> &[C64; 4] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// Outcome of checking the density matrix axioms on one state.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationReport {
    pub is_valid: bool,
    /// Largest |rho_nm - conj(rho_mn)|.
    pub hermiticity_defect: f64,
    /// |Tr(rho) - 1|.
    pub trace_defect: f64,
    /// Smallest eigenvalue of the conjugate-symmetrized matrix.
    pub min_eigenvalue: f64,
    /// Zero-based (n, m) pairs with |rho_nm|^2 > rho_nn * rho_mm + tol.
    pub violated_bounds: Vec<(usize, usize)>,
}

/// Check the density matrix axioms: Hermiticity, unit trace, positive
/// semidefiniteness, and the element bounds |rho_nm|^2 <= rho_nn rho_mm.
///
/// Never mutates the input. The only error is a non-finite entry; every other
/// deviation is quantified in the returned report.
pub fn validate(rho: &CoherencePolarizationMatrix, tol: f64) -> Result<ValidationReport> {
    let m = rho.matrix();
    for i in 0..4 {
        for j in 0..4 {
            let v = m.e[i][j];
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::NonFiniteEntry { row: i, col: j });
            }
        }
    }

    let hermiticity_defect = m.hermiticity_defect();
    let trace_defect = (m.trace() - c(1.0, 0.0)).norm();
    let min_eigenvalue = m.eigenvalues_hermitian()[0];

    let mut violated_bounds = Vec::new();
    for n in 0..4 {
        for mm in (n + 1)..4 {
            let cross = m.e[n][mm].norm_sqr();
            let bound = m.e[n][n].re * m.e[mm][mm].re;
            if cross > bound + tol {
                violated_bounds.push((n, mm));
            }
        }
    }

    let is_valid = hermiticity_defect <= tol
        && trace_defect <= tol
        && min_eigenvalue >= -tol
        && violated_bounds.is_empty();

    Ok(ValidationReport {
        is_valid,
        hermiticity_defect,
        trace_defect,
        min_eigenvalue,
        violated_bounds,
    })
}

/// The rank-1 density matrix |v><v| of a normalized pure state.
pub fn from_pure(v: &PureStateVector) -> Result<CoherencePolarizationMatrix> {
    let defect = (v.norm() - 1.0).abs();
    if !defect.is_finite() || defect > DEFAULT_VALIDATE_TOL {
        return Err(Error::NotNormalized {
            defect,
            tol: DEFAULT_VALIDATE_TOL,
        });
    }
    let a = v.amplitudes();
    let mut m = Mat4::zeros();
    for i in 0..4 {
        for j in 0..4 {
            m.e[i][j] = a[i] * a[j].conj();
        }
    }
    Ok(CoherencePolarizationMatrix::from_matrix(m))
}

/// Horizontally polarized photons split over the two paths:
/// a |H,1> + sqrt(1-a^2) |H,2>, a in [0, 1].
pub fn psi1(a: f64) -> Result<PureStateVector> {
    check_unit_interval("a", a)?;
    let b = (1.0 - a * a).sqrt();
    Ok(PureStateVector::from_amplitudes([
        c(a, 0.0),
        c(b, 0.0),
        c(0.0, 0.0),
        c(0.0, 0.0),
    ]))
}

/// Horizontal polarization on path 1, elliptical on path 2:
/// a |H,1> + sqrt(1-a^2) (b |H,2> + i sqrt(1-b^2) |V,2>), a, b in [0, 1].
pub fn psi2(a: f64, b: f64) -> Result<PureStateVector> {
    check_unit_interval("a", a)?;
    check_unit_interval("b", b)?;
    let w = (1.0 - a * a).sqrt();
    Ok(PureStateVector::from_amplitudes([
        c(a, 0.0),
        c(b * w, 0.0),
        c(0.0, 0.0),
        c(0.0, (1.0 - b * b).sqrt() * w),
    ]))
}

/// Equal superposition of |H,1> with a diagonally polarized path 2:
/// (1/sqrt(2)) |H,1> + (1/2)(|H,2> + |V,2>).
///
/// A pure state with partial visibility and partial distinguishability,
/// V = D = 1/sqrt(2); the default probe for the channel trajectories.
pub fn psi_mixed() -> PureStateVector {
    PureStateVector::from_amplitudes([
        c(std::f64::consts::FRAC_1_SQRT_2, 0.0),
        c(0.5, 0.0),
        c(0.0, 0.0),
        c(0.5, 0.0),
    ])
}

/// Werner state: eta-weighted mixture of the path-polarization singlet
/// projector |psi-><psi-| with the maximally mixed state, where
/// |psi-> = (|H,2> - |V,1>)/sqrt(2).
pub fn werner(eta: f64) -> Result<CoherencePolarizationMatrix> {
    check_unit_interval("eta", eta)?;
    let mut m = Mat4::zeros();
    let lo = (1.0 - eta) / 4.0;
    let hi = (1.0 + eta) / 4.0;
    m.e[H1][H1] = c(lo, 0.0);
    m.e[H2][H2] = c(hi, 0.0);
    m.e[V1][V1] = c(hi, 0.0);
    m.e[V2][V2] = c(lo, 0.0);
    m.e[H2][V1] = c(-eta / 2.0, 0.0);
    m.e[V1][H2] = c(-eta / 2.0, 0.0);
    Ok(CoherencePolarizationMatrix::from_matrix(m))
}

/// Haar-random pure state: four complex standard normals, normalized.
///
/// Deterministic for a fixed seed on every platform (see [`crate::rng`]).
pub fn random_pure(seed: u64) -> PureStateVector {
    let mut g = Xoshiro256PlusPlus::seed_from_u64(seed);
    loop {
        let amps = [
            g.next_complex_normal(),
            g.next_complex_normal(),
            g.next_complex_normal(),
            g.next_complex_normal(),
        ];
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            return PureStateVector::from_amplitudes(amps.map(|a| a / norm));
        }
    }
}

/// Random mixed state of the given rank from the Ginibre ensemble:
/// G G^dagger / Tr(G G^dagger) for a 4 x rank matrix of complex standard
/// normals. Deterministic for a fixed seed.
pub fn random_mixed(seed: u64, rank: usize) -> Result<CoherencePolarizationMatrix> {
    if !(1..=4).contains(&rank) {
        return Err(Error::ParameterOutOfRange {
            name: "rank",
            value: rank as f64,
            min: 1.0,
            max: 4.0,
        });
    }
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    // row-major draw order: g[i][k] for i in 0..4, k in 0..rank
    let mut g = [[c(0.0, 0.0); 4]; 4];
    for row in g.iter_mut() {
        for slot in row.iter_mut().take(rank) {
            *slot = rng.next_complex_normal();
        }
    }
    let mut m = Mat4::zeros();
    for i in 0..4 {
        for j in 0..4 {
            let mut s = c(0.0, 0.0);
            for (gi, gj) in g[i][..rank].iter().zip(&g[j][..rank]) {
                s += gi * gj.conj();
            }
            m.e[i][j] = s;
        }
    }
    let tr = m.trace().re;
    Ok(CoherencePolarizationMatrix::from_matrix(m.scale(1.0 / tr)))
}
