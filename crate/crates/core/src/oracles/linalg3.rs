//! Small dense 3×3 helpers; matrices are row-major `[[T; 3]; 3]`.

use crate::real::Real;

pub type Vec3<T> = [T; 3];
pub type Mat3<T> = [[T; 3]; 3];

#[inline]
pub fn dot<T: Real>(a: Vec3<T>, b: Vec3<T>) -> T {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub fn sub<T: Real>(a: Vec3<T>, b: Vec3<T>) -> Vec3<T> {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
pub fn norm<T: Real>(a: Vec3<T>) -> T {
    dot(a, a).sqrt()
}

#[inline]
pub fn scale<T: Real>(a: Vec3<T>, s: T) -> Vec3<T> {
    [a[0] * s, a[1] * s, a[2] * s]
}

#[inline]
pub fn cross<T: Real>(a: Vec3<T>, b: Vec3<T>) -> Vec3<T> {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Determinant of the matrix whose columns are `a, b, c`.
#[inline]
pub fn det_cols<T: Real>(a: Vec3<T>, b: Vec3<T>, c: Vec3<T>) -> T {
    dot(a, cross(b, c))
}

pub fn det<T: Real>(m: &Mat3<T>) -> T {
    det_cols(m[0], m[1], m[2])
}

/// Matrix with the given vectors as columns.
pub fn from_cols<T: Real>(a: Vec3<T>, b: Vec3<T>, c: Vec3<T>) -> Mat3<T> {
    [[a[0], b[0], c[0]], [a[1], b[1], c[1]], [a[2], b[2], c[2]]]
}

pub fn transpose<T: Real>(m: &Mat3<T>) -> Mat3<T> {
    from_cols(m[0], m[1], m[2])
}

#[inline]
pub fn mul_vec<T: Real>(m: &Mat3<T>, v: Vec3<T>) -> Vec3<T> {
    [dot(m[0], v), dot(m[1], v), dot(m[2], v)]
}

/// Inverse by the adjugate; `None` when singular.
pub fn inverse<T: Real>(m: &Mat3<T>) -> Option<Mat3<T>> {
    let d = det(m);
    if d == T::zero() || !d.is_finite() {
        return None;
    }
    // Rows of the inverse are the cross products of pairs of columns.
    let cols = transpose(m);
    let r0 = scale(cross(cols[1], cols[2]), T::one() / d);
    let r1 = scale(cross(cols[2], cols[0]), T::one() / d);
    let r2 = scale(cross(cols[0], cols[1]), T::one() / d);
    Some([r0, r1, r2])
}

/// Spectral norm bound via the Frobenius norm.
pub fn frobenius<T: Real>(m: &Mat3<T>) -> T {
    (dot(m[0], m[0]) + dot(m[1], m[1]) + dot(m[2], m[2])).sqrt()
}
