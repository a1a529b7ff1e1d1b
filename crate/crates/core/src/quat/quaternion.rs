use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A real quaternion `w + x e1 + y e2 + z e3` with `e1 e2 = e3`, `e2 e3 = e1`,
/// `e3 e1 = e2` and `e_u^2 = -1`.
///
/// Serialized as the JSON array `[w, x, y, z]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl From<[f64; 4]> for Quaternion {
    fn from(c: [f64; 4]) -> Self {
        Quaternion::new(c[0], c[1], c[2], c[3])
    }
}

impl From<Quaternion> for [f64; 4] {
    fn from(q: Quaternion) -> Self {
        [q.w, q.x, q.y, q.z]
    }
}

impl From<f64> for Quaternion {
    fn from(r: f64) -> Self {
        Quaternion::real(r)
    }
}

/// Default threshold under which a quaternion is treated as a zero divisor.
pub fn default_zero_eps(q: Quaternion) -> f64 {
    1e-14 * (1.0 + q.norm())
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const E1: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const E2: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const E3: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quaternion { w, x, y, z }
    }

    pub const fn real(w: f64) -> Self {
        Quaternion::new(w, 0.0, 0.0, 0.0)
    }

    /// Imaginary unit `e_u` for `u` in `1..=3`.
    pub fn unit(u: usize) -> Self {
        match u {
            1 => Self::E1,
            2 => Self::E2,
            3 => Self::E3,
            _ => panic!("imaginary unit index {u} out of range 1..=3"),
        }
    }

    pub fn to_array(self) -> [f64; 4] {
        self.into()
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

    /// The vector part: real component zeroed.
    pub fn vec_part(self) -> Self {
        Quaternion::new(0.0, self.x, self.y, self.z)
    }

    pub fn is_real(self) -> bool {
        self.x == 0.0 && self.y == 0.0 && self.z == 0.0
    }

    pub fn is_finite(self) -> bool {
        self.w.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// `conj(q) / |q|^2`, refusing quaternions whose modulus is at or below
    /// [`default_zero_eps`].
    pub fn inv(self) -> Result<Self> {
        self.inv_with_eps(default_zero_eps(self))
    }

    pub fn inv_with_eps(self, eps: f64) -> Result<Self> {
        let n2 = self.norm_sqr();
        if !(n2.sqrt() > eps) {
            return Err(Error::ZeroDivisor(self.to_string()));
        }
        Ok(self.conj() / n2)
    }

    pub fn powi(self, n: u32) -> Self {
        let mut acc = Quaternion::ONE;
        let mut base = self;
        let mut k = n;
        // powers of one quaternion commute, so square-and-multiply is exact in order
        while k > 0 {
            if k & 1 == 1 {
                acc *= base;
            }
            base = base * base;
            k >>= 1;
        }
        acc
    }

    pub fn dist(self, other: Quaternion) -> f64 {
        (self - other).norm()
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {:+}e1 {:+}e2 {:+}e3", self.w, self.x, self.y, self.z)
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.w, -self.x, -self.y, -self.z)
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, o: Quaternion) -> Quaternion {
        Quaternion::new(
            self.w * o.w - self.x * o.x - self.y * o.y - self.z * o.z,
            self.w * o.x + self.x * o.w + self.y * o.z - self.z * o.y,
            self.w * o.y - self.x * o.z + self.y * o.w + self.z * o.x,
            self.w * o.z + self.x * o.y - self.y * o.x + self.z * o.w,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;
    fn mul(self, s: f64) -> Quaternion {
        Quaternion::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    fn mul(self, q: Quaternion) -> Quaternion {
        q * self
    }
}

impl Div<f64> for Quaternion {
    type Output = Quaternion;
    fn div(self, s: f64) -> Quaternion {
        Quaternion::new(self.w / s, self.x / s, self.y / s, self.z / s)
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, o: Quaternion) {
        *self = *self + o;
    }
}

impl SubAssign for Quaternion {
    fn sub_assign(&mut self, o: Quaternion) {
        *self = *self - o;
    }
}

impl MulAssign for Quaternion {
    fn mul_assign(&mut self, o: Quaternion) {
        *self = *self * o;
    }
}

impl Sum for Quaternion {
    fn sum<I: Iterator<Item = Quaternion>>(iter: I) -> Self {
        iter.fold(Quaternion::ZERO, |a, b| a + b)
    }
}

impl Product for Quaternion {
    fn product<I: Iterator<Item = Quaternion>>(iter: I) -> Self {
        iter.fold(Quaternion::ONE, |a, b| a * b)
    }
}

/// Cap on the number of factors accepted by [`symmetric_product`].
pub const SYMMETRIC_PRODUCT_CAP: usize = 8;

/// Permutation-averaged product `(1/n!) sum_sigma q_sigma(1) ... q_sigma(n)`.
///
/// All `n!` orderings are enumerated (Heap's algorithm), so `n` is capped at
/// [`SYMMETRIC_PRODUCT_CAP`].
pub fn symmetric_product(qs: &[Quaternion]) -> Result<Quaternion> {
    let n = qs.len();
    if n == 0 {
        return Err(Error::InvalidInput("symmetric product of zero factors".into()));
    }
    if n > SYMMETRIC_PRODUCT_CAP {
        return Err(Error::DegreeCap { degree: n, cap: SYMMETRIC_PRODUCT_CAP });
    }
    let mut perm: Vec<Quaternion> = qs.to_vec();
    let mut counters = vec![0usize; n];
    let mut total: Quaternion = perm.iter().copied().product();
    let mut count = 1u64;
    let mut i = 1;
    while i < n {
        if counters[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(counters[i], i);
            }
            total += perm.iter().copied().product();
            count += 1;
            counters[i] += 1;
            i = 1;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }
    Ok(total / count as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Quaternion, b: Quaternion, tol: f64) -> bool {
        a.dist(b) <= tol
    }

    #[test]
    fn cayley_table() {
        let (e1, e2, e3) = (Quaternion::E1, Quaternion::E2, Quaternion::E3);
        assert_eq!(e1 * e2, e3);
        assert_eq!(e2 * e1, -e3);
        assert_eq!(e2 * e3, e1);
        assert_eq!(e3 * e1, e2);
        for u in 1..=3 {
            assert_eq!(Quaternion::unit(u) * Quaternion::unit(u), -Quaternion::ONE);
        }
    }

    #[test]
    fn product_examples() {
        let q = Quaternion::new(0.3, -1.0, 2.0, 0.5);
        assert_eq!(q * Quaternion::ONE, q);
        let p = (Quaternion::ONE + Quaternion::E1) * (Quaternion::ONE + Quaternion::E2);
        assert_eq!(p, Quaternion::new(1.0, 1.0, 1.0, 1.0));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(Quaternion::E1.inv().unwrap(), -Quaternion::E1);
        assert_eq!(Quaternion::real(2.0).inv().unwrap(), Quaternion::real(0.5));
        let q = Quaternion::ONE + Quaternion::E1;
        let qi = q.inv().unwrap();
        assert!(close(qi, Quaternion::new(0.5, -0.5, 0.0, 0.0), 1e-15));
        assert!(close(q * qi, Quaternion::ONE, 1e-15));
        assert!(matches!(Quaternion::ZERO.inv(), Err(Error::ZeroDivisor(_))));
        assert!(Quaternion::real(1e-15).inv().is_err());
        assert!(Quaternion::real(1e-15).inv_with_eps(1e-20).is_ok());
    }

    #[test]
    fn vec_part_examples() {
        assert_eq!(Quaternion::new(3.0, 0.0, 1.0, 0.0).vec_part(), Quaternion::E2);
        assert_eq!(Quaternion::real(5.0).vec_part(), Quaternion::ZERO);
        let v = Quaternion::new(0.0, 1.0, 1.0, 1.0);
        assert_eq!(v.vec_part(), v);
    }

    #[test]
    fn symmetric_product_examples() {
        let (e1, e2) = (Quaternion::E1, Quaternion::E2);
        assert_eq!(symmetric_product(&[e1, e2]).unwrap(), Quaternion::ZERO);
        let q = Quaternion::new(0.1, 0.2, 0.3, 0.4);
        assert_eq!(symmetric_product(&[q]).unwrap(), q);
        assert_eq!(symmetric_product(&[e1, e1]).unwrap(), -Quaternion::ONE);
        assert!(matches!(symmetric_product(&[q; 9]), Err(Error::DegreeCap { .. })));
        assert!(symmetric_product(&[]).is_err());
    }

    #[test]
    fn symmetric_product_counts_all_orderings() {
        // sym(e1, e2, e3) = (1/6) sum over orderings; each product is +-1,
        // e1e2e3 = -1 and the odd orderings give +1, so the average is 0
        let s = symmetric_product(&[Quaternion::E1, Quaternion::E2, Quaternion::E3]).unwrap();
        assert!(close(s, Quaternion::ZERO, 1e-15));
        // sym(e1, e1, e2): every ordering multiplies to -e2
        let s = symmetric_product(&[Quaternion::E1, Quaternion::E1, Quaternion::E2]).unwrap();
        let brute = (Quaternion::E1 * Quaternion::E1 * Quaternion::E2
            + Quaternion::E1 * Quaternion::E2 * Quaternion::E1
            + Quaternion::E2 * Quaternion::E1 * Quaternion::E1)
            / 3.0;
        assert!(close(s, brute, 1e-15));
    }

    #[test]
    fn serde_array_form() {
        let q = Quaternion::new(1.0, -2.0, 0.5, 0.0);
        let s = serde_json::to_string(&q).unwrap();
        assert_eq!(s, "[1.0,-2.0,0.5,0.0]");
        let back: Quaternion = serde_json::from_str(&s).unwrap();
        assert_eq!(back, q);
    }
}
