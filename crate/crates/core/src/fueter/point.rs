use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quat::Quaternion;

/// A point `x = (x0, x1, x2, x3)` of `R^4`, identified with
/// `q = x0 + x1 e1 + x2 e2 + x3 e3`. JSON form `[x0, x1, x2, x3]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct PointH {
    pub x0: f64,
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

impl From<[f64; 4]> for PointH {
    fn from(c: [f64; 4]) -> Self {
        PointH::new(c[0], c[1], c[2], c[3])
    }
}

impl From<PointH> for [f64; 4] {
    fn from(p: PointH) -> Self {
        [p.x0, p.x1, p.x2, p.x3]
    }
}

impl From<Quaternion> for PointH {
    fn from(q: Quaternion) -> Self {
        PointH::new(q.w, q.x, q.y, q.z)
    }
}

impl PointH {
    pub const fn new(x0: f64, x1: f64, x2: f64, x3: f64) -> Self {
        PointH { x0, x1, x2, x3 }
    }

    /// Like [`PointH::new`] but rejects points off `H*` (vanishing vector part).
    pub fn strict(x0: f64, x1: f64, x2: f64, x3: f64) -> Result<Self> {
        let p = PointH::new(x0, x1, x2, x3);
        p.check_h_star()?;
        Ok(p)
    }

    pub fn coords(self) -> [f64; 4] {
        self.into()
    }

    /// Coordinate `x_k`, `k` in `0..=3`.
    pub fn coord(self, k: usize) -> f64 {
        self.coords()[k]
    }

    pub fn with_coord(self, k: usize, v: f64) -> PointH {
        let mut c = self.coords();
        c[k] = v;
        c.into()
    }

    pub fn vector(self) -> [f64; 3] {
        [self.x1, self.x2, self.x3]
    }

    pub fn to_quaternion(self) -> Quaternion {
        Quaternion::new(self.x0, self.x1, self.x2, self.x3)
    }

    /// The vector part `q_vec = x1 e1 + x2 e2 + x3 e3`.
    pub fn vec_part(self) -> Quaternion {
        Quaternion::new(0.0, self.x1, self.x2, self.x3)
    }

    pub fn vec_norm_sqr(self) -> f64 {
        self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3
    }

    pub fn norm(self) -> f64 {
        self.to_quaternion().norm()
    }

    /// `1 / q_vec`, failing on the singular set `q_vec = 0`.
    pub fn inv_vec_part(self) -> Result<Quaternion> {
        self.vec_part().inv().map_err(|_| Error::SingularVectorPart(self.coords()))
    }

    pub fn is_in_h_star(self) -> bool {
        self.inv_vec_part().is_ok()
    }

    pub fn check_h_star(self) -> Result<()> {
        self.inv_vec_part().map(|_| ())
    }

    pub fn scale(self, s: f64) -> PointH {
        PointH::new(self.x0 * s, self.x1 * s, self.x2 * s, self.x3 * s)
    }

    /// `a + t (b - a)`.
    pub fn lerp(self, b: PointH, t: f64) -> PointH {
        self + (b - self).scale(t)
    }
}

impl std::ops::Add for PointH {
    type Output = PointH;
    fn add(self, o: PointH) -> PointH {
        PointH::new(self.x0 + o.x0, self.x1 + o.x1, self.x2 + o.x2, self.x3 + o.x3)
    }
}

impl std::ops::Sub for PointH {
    type Output = PointH;
    fn sub(self, o: PointH) -> PointH {
        PointH::new(self.x0 - o.x0, self.x1 - o.x1, self.x2 - o.x2, self.x3 - o.x3)
    }
}
