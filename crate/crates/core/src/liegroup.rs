//! Rotation and pose kernels.
//!
//! The quaternion map `A(P) = I + 2 (p0 p~ + p~ p~) / |P|^2` is defined for
//! non-unit quaternions and always yields a proper rotation; it is the map used
//! for interpolated (non-unit) quaternions inside the elements. Generic
//! versions over [`RealField`] are used by the element kernels so the same code
//! path can be evaluated with dual numbers.

use nalgebra::{Matrix3, Matrix3x4, Matrix4, RealField, Vector3, Vector4, Vector6};

use crate::error::{Error, Result};

/// Quaternions with norm at or below this value are rejected.
pub const DEGENERATE_NORM: f64 = 1e-8;

/// Relative rotations closer than this to a half turn are treated as the cut
/// locus of the logarithm.
pub const CUT_LOCUS_MARGIN: f64 = 1e-6;

/// Orthonormality defect accepted when a matrix is claimed to be a rotation.
pub const ROTATION_TOLERANCE: f64 = 1e-8;

#[inline]
pub(crate) fn lit<T: RealField + Copy>(x: f64) -> T {
    nalgebra::convert::<f64, T>(x)
}

/// Skew-symmetric matrix such that `skew(a) * b == a.cross(b)`.
#[inline]
pub fn skew<T: RealField + Copy>(a: &Vector3<T>) -> Matrix3<T> {
    let z = T::zero();
    Matrix3::new(z, -a.z, a.y, a.z, z, -a.x, -a.y, a.x, z)
}

/// Inverse of [`skew`], reading the skew-symmetric part of `m`.
#[inline]
pub fn vee(m: &Matrix3<f64>) -> Vector3<f64> {
    0.5 * Vector3::new(m[(2, 1)] - m[(1, 2)], m[(0, 2)] - m[(2, 0)], m[(1, 0)] - m[(0, 1)])
}

/// Quaternion map for a possibly non-unit quaternion `(p0, p)`.
pub fn rotation_of<T: RealField + Copy>(p0: T, p: &Vector3<T>) -> Matrix3<T> {
    let norm2 = p0 * p0 + p.norm_squared();
    let s = skew(p);
    Matrix3::identity() + (s * p0 + s * s) * (lit::<T>(2.0) / norm2)
}

/// Tangent operator `T(P) = 2/|P|^2 (-p | p0 I - p~)`, so that the scaled
/// curvature is `T(P) P'`.
pub fn tangent_of<T: RealField + Copy>(p0: T, p: &Vector3<T>) -> Matrix3x4<T> {
    let norm2 = p0 * p0 + p.norm_squared();
    let c = lit::<T>(2.0) / norm2;
    let s = skew(p);
    let mut t = Matrix3x4::zeros();
    for i in 0..3 {
        t[(i, 0)] = -p[i] * c;
        for j in 0..3 {
            let d = if i == j { p0 } else { T::zero() };
            t[(i, j + 1)] = (d - s[(i, j)]) * c;
        }
    }
    t
}

/// Quaternion `P = (p0, p)`; the norm is not required to be one.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quaternion {
    pub p0: f64,
    pub p: Vector3<f64>,
}

impl Quaternion {
    pub fn new(p0: f64, p1: f64, p2: f64, p3: f64) -> Self {
        Self { p0, p: Vector3::new(p1, p2, p3) }
    }

    pub fn identity() -> Self {
        Self::new(1.0, 0.0, 0.0, 0.0)
    }

    pub fn from_vector(v: &Vector4<f64>) -> Self {
        Self::new(v[0], v[1], v[2], v[3])
    }

    pub fn to_vector(&self) -> Vector4<f64> {
        Vector4::new(self.p0, self.p.x, self.p.y, self.p.z)
    }

    /// Unit quaternion of a rotation by `angle` about `axis` (normalized here).
    pub fn from_axis_angle(axis: &Vector3<f64>, angle: f64) -> Self {
        let u = axis.normalize();
        let (s, c) = (0.5 * angle).sin_cos();
        Self { p0: c, p: u * s }
    }

    pub fn norm(&self) -> f64 {
        self.to_vector().norm()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { p0: self.p0 * s, p: self.p * s }
    }

    pub fn normalized(&self) -> Self {
        self.scale(1.0 / self.norm())
    }

    pub fn conjugate(&self) -> Self {
        Self { p0: self.p0, p: -self.p }
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.p0 * other.p0 + self.p.dot(&other.p)
    }

    /// Hamilton product `self ⊗ rhs`; `A(a ⊗ b) = A(a) A(b)`.
    pub fn mul(&self, rhs: &Self) -> Self {
        Self {
            p0: self.p0 * rhs.p0 - self.p.dot(&rhs.p),
            p: rhs.p * self.p0 + self.p * rhs.p0 + self.p.cross(&rhs.p),
        }
    }
}

fn check_norm(q: &Quaternion) -> Result<()> {
    let norm = q.norm();
    if !(norm > DEGENERATE_NORM) {
        return Err(Error::DegenerateQuaternion { norm });
    }
    Ok(())
}

/// Proper orthogonal 3x3 matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RotationMatrix(pub Matrix3<f64>);

impl RotationMatrix {
    /// Wraps `m` after checking orthonormality and orientation.
    pub fn new(m: Matrix3<f64>) -> Result<Self> {
        let defect = orthonormality_defect(&m);
        if defect > ROTATION_TOLERANCE || m.determinant() <= 0.0 {
            return Err(Error::NotARotation { defect });
        }
        Ok(Self(m))
    }

    pub fn identity() -> Self {
        Self(Matrix3::identity())
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.0
    }
}

/// Largest entry of `|m^T m - I|`.
pub fn orthonormality_defect(m: &Matrix3<f64>) -> f64 {
    (m.transpose() * m - Matrix3::identity()).abs().max()
}

pub fn quat_to_rotation(q: &Quaternion) -> Result<RotationMatrix> {
    check_norm(q)?;
    Ok(RotationMatrix(rotation_of(q.p0, &q.p)))
}

pub fn quat_tangent(q: &Quaternion) -> Result<Matrix3x4<f64>> {
    check_norm(q)?;
    Ok(tangent_of(q.p0, &q.p))
}

/// Spurrier's extraction of a unit quaternion from a rotation matrix.
///
/// The branch is selected by the largest of the trace and the diagonal
/// entries. The result has `p0 >= 0`; when `p0` vanishes the vector component
/// of largest magnitude is made positive.
pub fn rotation_to_quat(a: &Matrix3<f64>) -> Result<Quaternion> {
    let defect = orthonormality_defect(a);
    if defect > ROTATION_TOLERANCE || a.determinant() <= 0.0 {
        return Err(Error::NotARotation { defect });
    }
    let tr = a.trace();
    let diag = [a[(0, 0)], a[(1, 1)], a[(2, 2)]];
    let (imax, dmax) = diag
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, d)| if d > acc.1 { (i, d) } else { acc });

    let mut q = if tr >= dmax {
        let p0 = 0.5 * (1.0 + tr).sqrt();
        let c = 0.25 / p0;
        Quaternion::new(
            p0,
            (a[(2, 1)] - a[(1, 2)]) * c,
            (a[(0, 2)] - a[(2, 0)]) * c,
            (a[(1, 0)] - a[(0, 1)]) * c,
        )
    } else {
        let i = imax;
        let j = (i + 1) % 3;
        let k = (i + 2) % 3;
        let pi = (0.5 * a[(i, i)] + 0.25 * (1.0 - tr)).sqrt();
        let c = 0.25 / pi;
        let mut p = Vector3::zeros();
        p[i] = pi;
        p[j] = (a[(j, i)] + a[(i, j)]) * c;
        p[k] = (a[(k, i)] + a[(i, k)]) * c;
        Quaternion { p0: (a[(k, j)] - a[(j, k)]) * c, p }
    };

    if q.p0.abs() > 1e-12 {
        if q.p0 < 0.0 {
            q = q.scale(-1.0);
        }
    } else {
        let imag = q.p.iamax();
        if q.p[imag] < 0.0 {
            q = q.scale(-1.0);
        }
    }
    Ok(q)
}

/// Rigid transformation `x -> R x + t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EuclideanTransform {
    pub rotation: Matrix3<f64>,
    pub translation: Vector3<f64>,
}

impl EuclideanTransform {
    pub fn new(rotation: Matrix3<f64>, translation: Vector3<f64>) -> Self {
        Self { rotation, translation }
    }

    pub fn identity() -> Self {
        Self::new(Matrix3::identity(), Vector3::zeros())
    }

    pub fn inverse(&self) -> Self {
        let rt = self.rotation.transpose();
        Self::new(rt, -(rt * self.translation))
    }

    pub fn compose(&self, rhs: &Self) -> Self {
        Self::new(self.rotation * rhs.rotation, self.rotation * rhs.translation + self.translation)
    }

    pub fn to_homogeneous(&self) -> Matrix4<f64> {
        let mut h = Matrix4::identity();
        h.fixed_view_mut::<3, 3>(0, 0).copy_from(&self.rotation);
        h.fixed_view_mut::<3, 1>(0, 3).copy_from(&self.translation);
        h
    }
}

/// Twist coordinates: translational part first, rotational part last.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Twist(pub Vector6<f64>);

impl Twist {
    pub fn translational(&self) -> Vector3<f64> {
        self.0.fixed_rows::<3>(0).into()
    }

    pub fn rotational(&self) -> Vector3<f64> {
        self.0.fixed_rows::<3>(3).into()
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }
}

/// SO(3) logarithm returning the rotation vector and its angle.
pub fn so3_log(r: &Matrix3<f64>) -> Result<(Vector3<f64>, f64)> {
    let q = rotation_to_quat(r)?;
    let s = q.p.norm();
    let angle = 2.0 * s.atan2(q.p0);
    if angle >= std::f64::consts::PI - CUT_LOCUS_MARGIN {
        return Err(Error::CutLocus { angle });
    }
    // angle / sin(angle / 2), continuous at zero
    let factor = if s < 1e-8 { 2.0 / q.p0 * (1.0 - s * s / (3.0 * q.p0 * q.p0)) } else { angle / s };
    Ok((q.p * factor, angle))
}

/// SE(3) logarithm of a rigid transformation.
pub fn se3_log(h: &EuclideanTransform) -> Result<Twist> {
    let (omega, angle) = so3_log(&h.rotation)?;
    let w = skew(&omega);
    // coefficient of w^2 in V^{-1}
    let c = if angle < 1e-4 {
        let a2 = angle * angle;
        1.0 / 12.0 + a2 / 720.0 + a2 * a2 / 30240.0
    } else {
        let half = 0.5 * angle;
        (1.0 - half * half.cos() / half.sin()) / (angle * angle)
    };
    let v_inv = Matrix3::identity() - 0.5 * w + c * w * w;
    let v = v_inv * h.translation;
    Ok(Twist(Vector6::new(v.x, v.y, v.z, omega.x, omega.y, omega.z)))
}
