//! Seeded random inputs for property checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fueter::{in_omega_1, PointH};
use crate::quat::{QMatrix, Quaternion};

pub type SeededRng = ChaCha8Rng;

/// Minimum `|q_vec|` for a point to count as safely inside `H*`.
pub const DEFAULT_MIN_VEC: f64 = 0.05;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_quaternion<R: Rng>(rng: &mut R) -> Quaternion {
    Quaternion::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0))
}

/// Uniform in `[-1, 1]^4`, rejected while `|q_vec| < min_vec`.
pub fn random_point_h_star<R: Rng>(rng: &mut R, min_vec: f64) -> PointH {
    loop {
        let p = PointH::from(random_quaternion(rng));
        if p.vec_norm_sqr().sqrt() >= min_vec {
            return p;
        }
    }
}

/// Uniform in the ball `|q| < radius`, rejected while `|q_vec| < min_vec`.
pub fn random_point_in_ball<R: Rng>(rng: &mut R, radius: f64, min_vec: f64) -> PointH {
    loop {
        let p = PointH::from(random_quaternion(rng));
        if p.norm() < 1.0 && p.vec_norm_sqr().sqrt() >= min_vec / radius {
            return p.scale(radius);
        }
    }
}

/// A point of `Omega_1` with `|q| < radius` and `|q_vec| >= min_vec`.
pub fn random_point_omega_1<R: Rng>(rng: &mut R, radius: f64, min_vec: f64) -> PointH {
    loop {
        let p = random_point_in_ball(rng, radius, min_vec);
        if in_omega_1(p).unwrap_or(false) {
            return p;
        }
    }
}

/// A point of the slice `x0 = 0` with `|x_vec| < radius`.
pub fn random_slice_point<R: Rng>(rng: &mut R, radius: f64, min_vec: f64) -> PointH {
    let p = random_point_in_ball(rng, radius, min_vec);
    PointH::new(0.0, p.x1, p.x2, p.x3)
}

/// Entries uniform in `[-1, 1]^4`.
pub fn random_qmatrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> QMatrix {
    QMatrix::from_fn(rows, cols, |_, _| random_quaternion(rng))
}

/// Endpoints of a segment whose vector parts are positive multiples of one
/// another, so the whole segment stays off the axis `q_vec = 0`.
pub fn random_radial_segment<R: Rng>(rng: &mut R, min_vec: f64) -> (PointH, PointH) {
    let a = random_point_h_star(rng, min_vec.max(0.2));
    let lambda = loop {
        let l = rng.gen_range(0.3..2.0);
        if (l - 1.0f64).abs() > 0.1 {
            break l;
        }
    };
    let b = PointH::new(rng.gen_range(-1.0..=1.0), lambda * a.x1, lambda * a.x2, lambda * a.x3);
    (a, b)
}
