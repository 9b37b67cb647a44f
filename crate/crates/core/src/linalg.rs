//! Fixed-size complex matrices for the 4-dimensional path-polarization space
//! and its 2-dimensional polarization subspaces.
//!
//! The whole library lives in dimensions 2 and 4, so the matrix types are
//! plain stack arrays with exactly the operations the physics needs. The 2x2
//! Hermitian eigenvalues are closed-form; the 4x4 Hermitian eigenvalues use
//! cyclic Jacobi rotations. Both solvers read the upper triangle and treat the
//! lower one as its conjugate mirror, so a non-Hermitian input is diagnosed by
//! the separate hermiticity defect, not by the eigensolver.

use num_complex::Complex64;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

pub type C64 = Complex64;

/// Shorthand complex constructor.
#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Complex 2x2 matrix, row-major.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Mat2 {
    pub e: [[C64; 2]; 2],
}

/// Complex 4x4 matrix, row-major.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Mat4 {
    pub e: [[C64; 4]; 4],
}

macro_rules! impl_mat_common {
    ($name:ident, $n:expr) => {
        impl $name {
            pub const DIM: usize = $n;

            pub fn zeros() -> Self {
                Self::default()
            }

            pub fn identity() -> Self {
                let mut m = Self::zeros();
                for i in 0..$n {
                    m.e[i][i] = c(1.0, 0.0);
                }
                m
            }

            pub fn from_rows(rows: [[C64; $n]; $n]) -> Self {
                Self { e: rows }
            }

            /// Conjugate transpose.
            pub fn adjoint(&self) -> Self {
                let mut m = Self::zeros();
                for i in 0..$n {
                    for j in 0..$n {
                        m.e[i][j] = self.e[j][i].conj();
                    }
                }
                m
            }

            pub fn scale(&self, s: f64) -> Self {
                let mut m = *self;
                for row in m.e.iter_mut() {
                    for v in row.iter_mut() {
                        *v *= s;
                    }
                }
                m
            }

            pub fn trace(&self) -> C64 {
                let mut t = c(0.0, 0.0);
                for i in 0..$n {
                    t += self.e[i][i];
                }
                t
            }

            /// Largest entry magnitude.
            pub fn max_abs(&self) -> f64 {
                let mut m = 0.0f64;
                for row in &self.e {
                    for v in row {
                        m = m.max(v.norm());
                    }
                }
                m
            }

            /// Largest |a_ij - b_ij| over all entries.
            pub fn max_abs_diff(&self, other: &Self) -> f64 {
                let mut m = 0.0f64;
                for i in 0..$n {
                    for j in 0..$n {
                        m = m.max((self.e[i][j] - other.e[i][j]).norm());
                    }
                }
                m
            }

            /// Largest |a_ij - conj(a_ji)|; zero iff the matrix is Hermitian.
            pub fn hermiticity_defect(&self) -> f64 {
                let mut m = 0.0f64;
                for i in 0..$n {
                    for j in i..$n {
                        m = m.max((self.e[i][j] - self.e[j][i].conj()).norm());
                    }
                }
                m
            }

            pub fn is_finite(&self) -> bool {
                self.e
                    .iter()
                    .flatten()
                    .all(|v| v.re.is_finite() && v.im.is_finite())
            }
        }

        impl Index<(usize, usize)> for $name {
            type Output = C64;
            #[inline]
            fn index(&self, (i, j): (usize, usize)) -> &C64 {
                &self.e[i][j]
            }
        }

        impl IndexMut<(usize, usize)> for $name {
            #[inline]
            fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
                &mut self.e[i][j]
            }
        }

        impl Add for $name {
            type Output = Self;
            fn add(self, rhs: Self) -> Self {
                let mut m = self;
                for i in 0..$n {
                    for j in 0..$n {
                        m.e[i][j] += rhs.e[i][j];
                    }
                }
                m
            }
        }

        impl Sub for $name {
            type Output = Self;
            fn sub(self, rhs: Self) -> Self {
                let mut m = self;
                for i in 0..$n {
                    for j in 0..$n {
                        m.e[i][j] -= rhs.e[i][j];
                    }
                }
                m
            }
        }

        impl Mul for $name {
            type Output = Self;
            fn mul(self, rhs: Self) -> Self {
                let mut m = Self::zeros();
                for i in 0..$n {
                    for k in 0..$n {
                        let a = self.e[i][k];
                        if a.re == 0.0 && a.im == 0.0 {
                            continue;
                        }
                        for j in 0..$n {
                            m.e[i][j] += a * rhs.e[k][j];
                        }
                    }
                }
                m
            }
        }
    };
}

impl_mat_common!(Mat2, 2);
impl_mat_common!(Mat4, 4);

impl Mat2 {
    /// Eigenvalues of a Hermitian 2x2 matrix in closed form, ascending.
    ///
    /// Uses the upper-triangle entry for the off-diagonal coupling.
    pub fn eigenvalues_hermitian(&self) -> [f64; 2] {
        let a = self.e[0][0].re;
        let d = self.e[1][1].re;
        let b = self.e[0][1].norm();
        let mean = 0.5 * (a + d);
        let r = f64::hypot(0.5 * (a - d), b);
        [mean - r, mean + r]
    }
}

impl Mat4 {
    /// Copy with the strict lower triangle replaced by the conjugate of the
    /// upper one and real diagonal.
    fn conj_mirrored(&self) -> Self {
        let mut m = *self;
        for i in 0..4 {
            m.e[i][i] = c(m.e[i][i].re, 0.0);
            for j in (i + 1)..4 {
                m.e[j][i] = m.e[i][j].conj();
            }
        }
        m
    }

    /// Eigenvalues of a Hermitian 4x4 matrix via cyclic Jacobi, ascending.
    pub fn eigenvalues_hermitian(&self) -> [f64; 4] {
        let mut w = self.conj_mirrored();
        let scale = w.max_abs().max(1.0);

        for _sweep in 0..30 {
            let mut off = 0.0f64;
            for i in 0..4 {
                for j in (i + 1)..4 {
                    off = off.max(w.e[i][j].norm());
                }
            }
            if off <= 1e-16 * scale {
                break;
            }
            for p in 0..4 {
                for q in (p + 1)..4 {
                    let b = w.e[p][q];
                    let m = b.norm();
                    if m <= 1e-18 * scale {
                        continue;
                    }
                    let app = w.e[p][p].re;
                    let aqq = w.e[q][q].re;
                    let u = b / m;
                    let tau = (aqq - app) / (2.0 * m);
                    let t = if tau >= 0.0 {
                        1.0 / (tau + f64::hypot(1.0, tau))
                    } else {
                        -1.0 / (-tau + f64::hypot(1.0, tau))
                    };
                    let cos = 1.0 / f64::hypot(1.0, t);
                    let sin = t * cos;

                    let mut g = Mat4::identity();
                    g.e[p][p] = c(cos, 0.0);
                    g.e[p][q] = sin * u;
                    g.e[q][p] = -sin * u.conj();
                    g.e[q][q] = c(cos, 0.0);

                    w = g.adjoint() * w * g;
                }
            }
        }

        let mut ev = [w.e[0][0].re, w.e[1][1].re, w.e[2][2].re, w.e[3][3].re];
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        ev
    }
}
