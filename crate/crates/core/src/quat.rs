//! Real quaternions `w + x i + y j + z ij` and their similarity classes.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result, TIGHT_TOL};

/// A real quaternion. `z` is the coefficient of `ij`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const IJ: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quaternion { w, x, y, z }
    }

    pub const fn real(w: f64) -> Self {
        Quaternion::new(w, 0.0, 0.0, 0.0)
    }

    /// Embeds `a + bi` as a quaternion.
    pub fn from_complex(c: Complex64) -> Self {
        Quaternion::new(c.re, c.im, 0.0, 0.0)
    }

    /// Builds `c + d j` from complex parts.
    pub fn from_parts(c: Complex64, d: Complex64) -> Self {
        Quaternion::new(c.re, c.im, d.re, d.im)
    }

    /// The complex part `c` in `q = c + d j`.
    pub fn complex_part(self) -> Complex64 {
        Complex64::new(self.w, self.x)
    }

    /// The `j` part `d` in `q = c + d j`.
    pub fn j_part(self) -> Complex64 {
        Complex64::new(self.y, self.z)
    }

    pub fn re(self) -> f64 {
        self.w
    }

    /// Imaginary part as a quaternion with zero real part.
    pub fn im(self) -> Quaternion {
        Quaternion::new(0.0, self.x, self.y, self.z)
    }

    pub fn conj(self) -> Self {
        Quaternion::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn norm_sqr(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn im_norm(self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    /// Multiplicative inverse; infinite components for zero input.
    pub fn inv(self) -> Self {
        self.conj() / self.norm_sqr()
    }

    pub fn is_zero(self, tol: f64) -> bool {
        self.norm() <= tol
    }

    /// True when the quaternion lies in the standard complex plane `R + R i`.
    pub fn is_complex(self, tol: f64) -> bool {
        self.y.hypot(self.z) <= tol
    }

    pub fn to_complex(self) -> Complex64 {
        self.complex_part()
    }

    pub fn is_finite(self) -> bool {
        self.w.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn scale(self, s: f64) -> Self {
        Quaternion::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }

    /// Unit quaternion `q / |q|`.
    pub fn normalize(self) -> Self {
        self / self.norm()
    }
}

/// Hamilton product with `i^2 = j^2 = -1` and `ij = -ji`.
pub fn qmul(p: Quaternion, q: Quaternion) -> Quaternion {
    Quaternion::new(
        p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
        p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
        p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
        p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w,
    )
}

impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, rhs: Quaternion) -> Quaternion {
        qmul(self, rhs)
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;
    fn mul(self, rhs: f64) -> Quaternion {
        self.scale(rhs)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    fn mul(self, rhs: Quaternion) -> Quaternion {
        rhs.scale(self)
    }
}

impl Div<f64> for Quaternion {
    type Output = Quaternion;
    fn div(self, rhs: f64) -> Quaternion {
        self.scale(1.0 / rhs)
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, rhs: Quaternion) -> Quaternion {
        Quaternion::new(self.w + rhs.w, self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, rhs: Quaternion) {
        *self = *self + rhs;
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, rhs: Quaternion) -> Quaternion {
        Quaternion::new(self.w - rhs.w, self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl SubAssign for Quaternion {
    fn sub_assign(&mut self, rhs: Quaternion) {
        *self = *self - rhs;
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.w, -self.x, -self.y, -self.z)
    }
}

impl From<f64> for Quaternion {
    fn from(w: f64) -> Self {
        Quaternion::real(w)
    }
}

impl From<Complex64> for Quaternion {
    fn from(c: Complex64) -> Self {
        Quaternion::from_complex(c)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {:+}i {:+}j {:+}ij", self.w, self.x, self.y, self.z)
    }
}

impl Serialize for Quaternion {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.w, self.x, self.y, self.z].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Quaternion {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [w, x, y, z] = <[f64; 4]>::deserialize(d)?;
        Ok(Quaternion::new(w, x, y, z))
    }
}

/// A similarity class `{u q u^-1}` represented by its unique member `a + bi`
/// with `b >= 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimilarityClass {
    #[serde(with = "crate::io::complex_serde")]
    pub rep: Complex64,
}

impl SimilarityClass {
    pub fn of_complex(c: Complex64) -> Self {
        SimilarityClass {
            rep: Complex64::new(c.re, c.im.abs()),
        }
    }

    /// Whether both classes agree within `tol` on the representative.
    pub fn approx_eq(&self, other: &SimilarityClass, tol: f64) -> bool {
        (self.rep - other.rep).norm() <= tol
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.rep.im <= tol
    }
}

/// Canonical representative `Re(q) + |Im(q)| i` of the similarity class of `q`.
pub fn canonicalize(q: Quaternion) -> SimilarityClass {
    SimilarityClass {
        rep: Complex64::new(q.w, q.im_norm()),
    }
}

/// Whether `p` and `q` are similar: same real part and same norm.
pub fn are_similar(p: Quaternion, q: Quaternion, tol: f64) -> bool {
    (p.w - q.w).abs() <= tol && (p.norm() - q.norm()).abs() <= tol
}

/// For purely imaginary `s != 0`, returns `r = |s|` and a unit quaternion `x`
/// with `s = x (r i) x^-1`, using `q = (r + s1) - s3 j + s2 ij`.
pub fn similarity_conjugator(s: Quaternion) -> Result<(f64, Quaternion)> {
    let r = s.im_norm();
    if s.norm() <= TIGHT_TOL {
        return Err(Error::ZeroInput);
    }
    if s.w.abs() > TIGHT_TOL * s.norm().max(1.0) {
        return Err(Error::NotImaginary { re: s.w });
    }
    let q = Quaternion::new(r + s.x, 0.0, -s.z, s.y);
    // q vanishes exactly when s is a negative multiple of i; j flips i to -i.
    if q.norm() <= TIGHT_TOL * r.max(1.0) {
        return Ok((r, Quaternion::J));
    }
    Ok((r, q.normalize()))
}
