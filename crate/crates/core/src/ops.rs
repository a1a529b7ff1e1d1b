//! Finite-difference evaluation of the operators `V_q`, its conjugate,
//! `G_q` and the Euler operator `E`, the Euler-exponential construction of
//! `mu^alpha`, and the Gleason remainder integrals `R_u^{ab}`.
//!
//! `V_q f = d0 f - (1/q_vec) sum_u x_u du f`, with `1/q_vec` acting from the
//! left. Fields may be quaternion- or matrix-valued; see [`FieldValue`].

use rand::Rng;

use crate::error::{Error, Result};
use crate::fueter::{mu_alpha, mu_u, MultiIndex, PointH};
use crate::quat::{QMatrix, Quaternion};

/// Environment variable overriding the default finite-difference step.
pub const FD_STEP_ENV: &str = "VQ_FD_STEP";
pub const DEFAULT_FD_STEP: f64 = 1e-5;
pub const GLEASON_DEFAULT_NODES: usize = 1001;
/// Number of equispaced samples used to check that a segment avoids `q_vec = 0`.
pub const SEGMENT_SAMPLES: usize = 64;
/// Minimum `|q_vec|` along a Gleason segment.
pub const SEGMENT_MIN_VEC: f64 = 0.01;

/// Values a field can take: a real vector space with a left action of `H`.
pub trait FieldValue: Clone {
    /// `self + a * other`.
    fn axpy(&self, a: f64, other: &Self) -> Self;
    fn scaled(&self, a: f64) -> Self;
    fn left_mul(&self, q: Quaternion) -> Self;
    /// Size used for residuals: the modulus, or the largest entry modulus.
    fn magnitude(&self) -> f64;
}

impl FieldValue for Quaternion {
    fn axpy(&self, a: f64, other: &Self) -> Self {
        *self + *other * a
    }
    fn scaled(&self, a: f64) -> Self {
        *self * a
    }
    fn left_mul(&self, q: Quaternion) -> Self {
        q * *self
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

impl FieldValue for QMatrix {
    fn axpy(&self, a: f64, other: &Self) -> Self {
        self + &other.scale(a)
    }
    fn scaled(&self, a: f64) -> Self {
        self.scale(a)
    }
    fn left_mul(&self, q: Quaternion) -> Self {
        self.lmul(q)
    }
    fn magnitude(&self) -> f64 {
        self.max_abs()
    }
}

/// A deterministic, reentrant map `PointH -> V`, assumed `C^1` where it is defined.
pub trait Field<V> {
    fn eval(&self, x: PointH) -> Result<V>;
}

impl<V, F: Fn(PointH) -> Result<V>> Field<V> for F {
    fn eval(&self, x: PointH) -> Result<V> {
        self(x)
    }
}

/// Central difference scheme of order 2 or 4 with step `h`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FdScheme {
    h: f64,
    order: u8,
}

impl Default for FdScheme {
    fn default() -> Self {
        FdScheme { h: DEFAULT_FD_STEP, order: 2 }
    }
}

impl FdScheme {
    pub fn new(h: f64, order: u8) -> Result<Self> {
        if !(h.is_finite() && h > 10.0 * f64::EPSILON) {
            return Err(Error::InvalidInput(format!("finite-difference step {h} too small")));
        }
        if order != 2 && order != 4 {
            return Err(Error::InvalidInput(format!("finite-difference order {order} is not 2 or 4")));
        }
        Ok(FdScheme { h, order })
    }

    /// Default order-2 scheme, with the step taken from `VQ_FD_STEP` when set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(FD_STEP_ENV) {
            Ok(s) => {
                let h = s.trim().parse::<f64>().map_err(|_| Error::InvalidInput(format!("{FD_STEP_ENV}={s}")))?;
                FdScheme::new(h, 2)
            }
            Err(_) => Ok(FdScheme::default()),
        }
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn order(&self) -> u8 {
        self.order
    }

    pub fn with_step(self, h: f64) -> Result<Self> {
        FdScheme::new(h, self.order)
    }

    fn stencil(&self) -> &'static [(f64, f64)] {
        match self.order {
            2 => &[(1.0, 0.5), (-1.0, -0.5)],
            _ => &[(2.0, -1.0 / 12.0), (1.0, 8.0 / 12.0), (-1.0, -8.0 / 12.0), (-2.0, 1.0 / 12.0)],
        }
    }

    /// `d f / d x_k` at `x`, `k` in `0..=3`.
    pub fn partial<V: FieldValue>(&self, f: &impl Field<V>, x: PointH, k: usize) -> Result<V> {
        let reach = self.stencil()[0].0 * self.h;
        if x.vec_norm_sqr().sqrt() <= reach {
            return Err(Error::StencilOutOfDomain(x.coords()));
        }
        let mut acc: Option<V> = None;
        for &(offset, weight) in self.stencil() {
            let p = x.with_coord(k, x.coord(k) + offset * self.h);
            if !p.is_in_h_star() {
                return Err(Error::StencilOutOfDomain(p.coords()));
            }
            let v = f.eval(p).map_err(|e| match e {
                Error::SingularVectorPart(c) => Error::StencilOutOfDomain(c),
                other => other,
            })?;
            let w = weight / self.h;
            acc = Some(match acc {
                None => v.scaled(w),
                Some(a) => a.axpy(w, &v),
            });
        }
        Ok(acc.expect("stencil is non-empty"))
    }

    /// All four partials `[d0 f, d1 f, d2 f, d3 f]`.
    pub fn gradient<V: FieldValue>(&self, f: &impl Field<V>, x: PointH) -> Result<[V; 4]> {
        Ok([self.partial(f, x, 0)?, self.partial(f, x, 1)?, self.partial(f, x, 2)?, self.partial(f, x, 3)?])
    }
}

fn euler_of<V: FieldValue>(grad: &[V; 4], x: PointH) -> V {
    grad[1].scaled(x.x1).axpy(x.x2, &grad[2]).axpy(x.x3, &grad[3])
}

/// `V_q f(x) = d0 f - (1/q_vec) sum_u x_u du f`.
pub fn apply_vq<V: FieldValue>(f: &impl Field<V>, x: PointH, scheme: &FdScheme) -> Result<V> {
    let inv = x.inv_vec_part()?;
    let g = scheme.gradient(f, x)?;
    Ok(g[0].axpy(-1.0, &euler_of(&g, x).left_mul(inv)))
}

/// The conjugate operator in its `e_u` form, `d0 f + (1/q_vec) sum_u e_u du f`.
pub fn apply_vq_bar<V: FieldValue>(f: &impl Field<V>, x: PointH, scheme: &FdScheme) -> Result<V> {
    let inv = x.inv_vec_part()?;
    let g = scheme.gradient(f, x)?;
    let sum = g[1].left_mul(Quaternion::E1).axpy(1.0, &g[2].left_mul(Quaternion::E2)).axpy(1.0, &g[3].left_mul(Quaternion::E3));
    Ok(g[0].axpy(1.0, &sum.left_mul(inv)))
}

/// The conjugate operator in its `x_u` form, `d0 f + (1/q_vec) sum_u x_u du f`.
pub fn apply_vq_bar_alt<V: FieldValue>(f: &impl Field<V>, x: PointH, scheme: &FdScheme) -> Result<V> {
    let inv = x.inv_vec_part()?;
    let g = scheme.gradient(f, x)?;
    Ok(g[0].axpy(1.0, &euler_of(&g, x).left_mul(inv)))
}

/// `G_q f = |q_vec|^2 d0 f + q_vec E f`, so that `G_q = |q_vec|^2 V_q`.
pub fn apply_gq<V: FieldValue>(f: &impl Field<V>, x: PointH, scheme: &FdScheme) -> Result<V> {
    x.check_h_star()?;
    let g = scheme.gradient(f, x)?;
    Ok(g[0].scaled(x.vec_norm_sqr()).axpy(1.0, &euler_of(&g, x).left_mul(x.vec_part())))
}

/// Euler operator `E f = sum_u x_u du f`.
pub fn euler<V: FieldValue>(f: &impl Field<V>, x: PointH, scheme: &FdScheme) -> Result<V> {
    x.check_h_star()?;
    let g = scheme.gradient(f, x)?;
    Ok(euler_of(&g, x))
}

/// `exp(x0 (1/q_vec) E)(x^alpha)` as a finite sum.
///
/// `E` acts on `x^alpha (1/q_vec)^n` by the factor `|alpha| - n`, so the
/// `n`-th term is `x0^n / n! * k_n * x^alpha (1/q_vec)^n` with
/// `k_0 = 1`, `k_{n+1} = k_n (|alpha| - n)`. The series stops once `k_n = 0`.
pub fn euler_exponential(alpha: MultiIndex, x: PointH) -> Result<Quaternion> {
    let inv = x.inv_vec_part()?;
    let xa = alpha.monomial(x.x1, x.x2, x.x3);
    let deg = alpha.degree() as f64;
    let mut k = 1.0;
    let mut coef = 1.0;
    let mut power = Quaternion::ONE;
    let mut acc = Quaternion::ZERO;
    let mut n = 0usize;
    while k != 0.0 {
        acc += power * (coef * k * xa);
        k *= deg - n as f64;
        n += 1;
        coef *= x.x0 / n as f64;
        power *= inv;
    }
    Ok(acc)
}

fn check_segment(a: PointH, b: PointH) -> Result<()> {
    let bad = (0..SEGMENT_SAMPLES)
        .map(|i| a.lerp(b, i as f64 / (SEGMENT_SAMPLES - 1) as f64))
        .any(|p| !(p.vec_norm_sqr().sqrt() > SEGMENT_MIN_VEC));
    if bad {
        return Err(Error::SegmentLeavesDomain { a: a.coords(), b: b.coords() });
    }
    Ok(())
}

/// `R_u^{ab} f = int_0^1 du f(a + t (b - a)) dt` by composite Simpson on
/// `quad_points` nodes, with `du f` by central differences.
pub fn gleason_remainder<V: FieldValue>(
    f: &impl Field<V>,
    a: PointH,
    b: PointH,
    u: usize,
    quad_points: usize,
    scheme: &FdScheme,
) -> Result<V> {
    if !(1..=3).contains(&u) {
        return Err(Error::InvalidInput(format!("direction {u} outside 1..=3")));
    }
    if quad_points < 3 || quad_points.is_multiple_of(2) {
        return Err(Error::InvalidInput(format!("Simpson needs an odd node count >= 3, got {quad_points}")));
    }
    check_segment(a, b)?;
    let intervals = quad_points - 1;
    let step = 1.0 / intervals as f64;
    let mut acc: Option<V> = None;
    for i in 0..quad_points {
        let w = match i {
            0 => 1.0,
            i if i == intervals => 1.0,
            i if i % 2 == 1 => 4.0,
            _ => 2.0,
        } * step
            / 3.0;
        let d = scheme.partial(f, a.lerp(b, i as f64 * step), u)?;
        acc = Some(match acc {
            None => d.scaled(w),
            Some(s) => s.axpy(w, &d),
        });
    }
    Ok(acc.expect("at least three nodes"))
}

/// `sum_u mu_u(b - a) R_u^{ab} f`.
pub fn gleason_sum<V: FieldValue>(
    f: &impl Field<V>,
    a: PointH,
    b: PointH,
    quad_points: usize,
    scheme: &FdScheme,
) -> Result<V> {
    let d = b - a;
    let mut acc: Option<V> = None;
    for u in 1..=3 {
        let r = gleason_remainder(f, a, b, u, quad_points, scheme)?.left_mul(mu_u(d, u)?);
        acc = Some(match acc {
            None => r,
            Some(s) => s.axpy(1.0, &r),
        });
    }
    Ok(acc.expect("three directions"))
}

/// `|f(b) - f(a) - sum_u mu_u(b - a) R_u^{ab} f|`.
pub fn gleason_defect<V: FieldValue>(
    f: &impl Field<V>,
    a: PointH,
    b: PointH,
    quad_points: usize,
    scheme: &FdScheme,
) -> Result<f64> {
    let s = gleason_sum(f, a, b, quad_points, scheme)?;
    Ok(f.eval(b)?.axpy(-1.0, &f.eval(a)?).axpy(-1.0, &s).magnitude())
}

/// The field `x -> mu^alpha(x)`.
pub fn mu_field(alpha: MultiIndex) -> impl Fn(PointH) -> Result<Quaternion> + Copy {
    move |x| mu_alpha(x, alpha)
}

/// The field `x -> q^n b`.
pub fn power_field(n: u32, b: Quaternion) -> impl Fn(PointH) -> Result<Quaternion> + Copy {
    move |x| Ok(x.to_quaternion().powi(n) * b)
}

/// Closed form of `d mu_1 / d x_2 = x1 x0 (e2 / q_vec^2 + 2 x2 / q_vec^3)`,
/// using `q_vec^2 = -|q_vec|^2`.
pub fn dmu1_dx2(x: PointH) -> Result<Quaternion> {
    let inv = x.inv_vec_part()?;
    let sq = -x.vec_norm_sqr();
    Ok((Quaternion::E2 / sq + inv * (2.0 * x.x2 / sq)) * (x.x1 * x.x0))
}

/// A polynomial `sum_beta x^beta c_beta` in the four real coordinates with
/// quaternionic right coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyField {
    pub terms: Vec<([u32; 4], Quaternion)>,
}

impl PolyField {
    /// Random dense polynomial of total degree `<= degree`, coefficients in `[-1, 1]^4`.
    pub fn random<R: Rng>(rng: &mut R, degree: u32) -> Self {
        let mut terms = Vec::new();
        for b0 in 0..=degree {
            for b1 in 0..=degree - b0 {
                for b2 in 0..=degree - b0 - b1 {
                    for b3 in 0..=degree - b0 - b1 - b2 {
                        terms.push(([b0, b1, b2, b3], crate::sample::random_quaternion(rng)));
                    }
                }
            }
        }
        PolyField { terms }
    }

    pub fn eval_at(&self, x: PointH) -> Quaternion {
        let c = x.coords();
        self.terms
            .iter()
            .map(|(beta, q)| *q * (0..4).map(|k| c[k].powi(beta[k] as i32)).product::<f64>())
            .sum()
    }
}

impl Field<Quaternion> for PolyField {
    fn eval(&self, x: PointH) -> Result<Quaternion> {
        Ok(self.eval_at(x))
    }
}
