//! Jones/Stokes algebra: polarization-state representation, the Poincaré-space
//! mapping, rotation, and the two bit detectors (non-coherent differential
//! and coherent with rotation compensation).
//!
//! Component ordering is (vertical, horizontal) throughout. A physical
//! rotation of the wave by β maps to a rotation of the Poincaré point by 2β
//! about the s3 axis, which is what makes differential detection immune to
//! the channel's polarization rotation.

use nalgebra::{Matrix2, Vector3};
use num_complex::Complex64;

/// Dual-polarized complex amplitude pair (vertical, horizontal), in √W.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JonesVector {
    pub v: Complex64,
    pub h: Complex64,
}

impl JonesVector {
    pub const ZERO: JonesVector = JonesVector {
        v: Complex64::new(0.0, 0.0),
        h: Complex64::new(0.0, 0.0),
    };

    pub fn new(v: Complex64, h: Complex64) -> Self {
        JonesVector { v, h }
    }

    /// Total power |v|² + |h|² (W).
    pub fn power(&self) -> f64 {
        self.v.norm_sqr() + self.h.norm_sqr()
    }

    /// Euclidean norm √(|v|² + |h|²) (√W).
    pub fn norm(&self) -> f64 {
        self.power().sqrt()
    }

    /// Component-wise scaling by a complex factor.
    pub fn scale(&self, c: Complex64) -> JonesVector {
        JonesVector::new(c * self.v, c * self.h)
    }
}

impl std::ops::Add for JonesVector {
    type Output = JonesVector;

    fn add(self, rhs: JonesVector) -> JonesVector {
        JonesVector::new(self.v + rhs.v, self.h + rhs.h)
    }
}

/// The four Stokes parameters (W). `s0` is total power; (s1, s2, s3) locates
/// the polarization state in Poincaré space. For anything built from a
/// [`JonesVector`] the state is fully polarized: s0² = s1² + s2² + s3².
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StokesVector {
    pub s0: f64,
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
}

impl StokesVector {
    /// The Poincaré-space sub-vector (s1, s2, s3).
    pub fn sub(&self) -> Vector3<f64> {
        Vector3::new(self.s1, self.s2, self.s3)
    }
}

/// Maps a Jones vector to its Stokes parameters:
/// s0 = |h|² + |v|², s1 = |h|² − |v|², s2 = 2·Re(h·v*), s3 = −2·Im(h·v*).
pub fn stokes(e: &JonesVector) -> StokesVector {
    let pv = e.v.norm_sqr();
    let ph = e.h.norm_sqr();
    let cross = e.h * e.v.conj();
    StokesVector {
        s0: ph + pv,
        s1: ph - pv,
        s2: 2.0 * cross.re,
        s3: -2.0 * cross.im,
    }
}

/// Polarization rotation by β acting on (v, h):
/// [[cos β, sin β], [−sin β, cos β]]. Orthogonal, so norm-preserving.
pub fn rotation_matrix(beta: f64) -> Matrix2<f64> {
    let (s, c) = beta.sin_cos();
    Matrix2::new(c, s, -s, c)
}

/// Applies a real 2×2 matrix to a Jones vector.
pub fn apply_rotation(a: &Matrix2<f64>, e: &JonesVector) -> JonesVector {
    JonesVector::new(
        a[(0, 0)] * e.v + a[(0, 1)] * e.h,
        a[(1, 0)] * e.v + a[(1, 1)] * e.h,
    )
}

/// Non-coherent differential detector: compares the Poincaré sub-vectors of
/// two successive received signals. An aligned pair (dot ≥ 0, ties included)
/// decodes bit 0, an anti-aligned pair bit 1.
pub fn dpolsk_detect(s_k: &Vector3<f64>, s_prev: &Vector3<f64>) -> bool {
    s_k.dot(s_prev) < 0.0
}

/// Coherent detector: de-rotates the received signal with the rotation
/// estimate, then picks the closer of the two slant constellation points in
/// Poincaré space, which reduces to the sign of s2 (ties decode bit 1).
pub fn cpolsk_detect(y: &JonesVector, beta_hat: f64) -> bool {
    let derotated = apply_rotation(&rotation_matrix(beta_hat).transpose(), y);
    stokes(&derotated).s2 >= 0.0
}
