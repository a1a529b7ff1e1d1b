//! Blaschke factors, the Halmos extension, and `V_q`-rational functions given
//! by state-space data.
//!
//! A realization `(A, B, C, D)` stores `A = (A_1; A_2; A_3)` as a `3N x N`
//! block column and `B` likewise as `3N x m`. Its rational function is
//! `R(x) = D + C (I - mu(x) A)^{-star} star mu(x) B`, whose restriction to
//! `x0 = 0` is `D + C (I - sum x_u A_u)^{-1} sum x_u B_u`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fueter::{mu_row, MultiIndex, PointH};
use crate::quat::{rank1_spectral, QMatrix, Quaternion};
use crate::series::{linear_series, split_blocks, star_inverse, star_mul, star_resolvent, FueterSeries};

/// A point `a` of `Omega_1` with `mu(a)` and `s = mu(a) mu(a)*` cached.
#[derive(Clone, Debug, PartialEq)]
pub struct BlaschkePoint {
    a: PointH,
    mu_row: QMatrix,
    s: f64,
}

impl BlaschkePoint {
    pub fn new(a: PointH) -> Result<Self> {
        let mu_row = mu_row(a)?;
        let s: f64 = mu_row.data().iter().map(|q| q.norm_sqr()).sum();
        if !(s < 1.0) {
            return Err(Error::OutsideOmega1(a.coords()));
        }
        Ok(BlaschkePoint { a, mu_row, s })
    }

    pub fn point(&self) -> PointH {
        self.a
    }

    /// The row `mu(a)`.
    pub fn mu(&self) -> &QMatrix {
        &self.mu_row
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    /// `(I_3 - mu(a)* mu(a))^p`.
    pub fn defect_power(&self, p: f64) -> QMatrix {
        rank1_spectral(&self.mu_row, |t| t.powf(p)).expect("s < 1 checked on construction")
    }
}

/// The row series `mu(x) - mu(a)`.
fn mu_minus_constant(a: &BlaschkePoint) -> Result<FueterSeries> {
    let units = [1, 2, 3].map(|u| QMatrix::from_fn(1, 3, |_, j| if j + 1 == u { Quaternion::ONE } else { Quaternion::ZERO }));
    linear_series(&units)?.try_sub(&FueterSeries::constant(a.mu().clone()))
}

/// `B_a = (1 - s)^{1/2} (1 - mu(x) mu(a)*)^{-star} star (mu(x) - mu(a)) (I_3 - mu(a)* mu(a))^{-1/2}`
/// to total degree `trunc`, as a `1 x 3` series.
pub fn blaschke_series(a: &BlaschkePoint, trunc: usize) -> Result<FueterSeries> {
    if trunc == 0 {
        return Err(Error::InvalidInput("Blaschke series needs trunc >= 1".into()));
    }
    let conj_mu = [0, 1, 2].map(|u| QMatrix::scalar(a.mu()[(0, u)].conj()));
    let symbol = FueterSeries::identity(1).try_sub(&linear_series(&conj_mu)?)?;
    let inverse = star_inverse(&symbol, trunc)?;
    let product = star_mul(&inverse, &mu_minus_constant(a)?)?;
    product.scale((1.0 - a.s()).sqrt()).right_mul_const(&a.defect_power(-0.5))
}

/// Closed form of `B_a(0, x_vec) = -mu(a) + (1 - s)^{1/2} (1 - x_vec mu(a)*)^{-1} x_vec (I_3 - mu(a)* mu(a))^{1/2}`.
pub fn blaschke_restrict(a: &BlaschkePoint, xvec: [f64; 3]) -> Result<QMatrix> {
    let w: Quaternion = (0..3).map(|u| a.mu()[(0, u)].conj() * xvec[u]).sum();
    let inv = (Quaternion::ONE - w).inv().map_err(|_| Error::SingularPencil)?;
    let row = QMatrix::row_vector(&xvec.map(Quaternion::real));
    let tail = (&row * &a.defect_power(0.5)).lmul(inv).scale((1.0 - a.s()).sqrt());
    Ok(&tail - a.mu())
}

/// Bound on the entries of `B_a(0, x_vec) - B_a^{trunc}(0, x_vec)` for
/// `rho = |x_vec| s^{1/2} < 1`: `(s^{1/2} rho^{trunc+1} + |x_vec| rho^trunc) / (1 - rho)`.
pub fn blaschke_tail_bound(a: &BlaschkePoint, xvec: [f64; 3], trunc: usize) -> Option<f64> {
    let r = xvec.iter().map(|v| v * v).sum::<f64>().sqrt();
    let rho = r * a.s().sqrt();
    (rho < 1.0).then(|| (a.s().sqrt() * rho.powi(trunc as i32 + 1) + r * rho.powi(trunc as i32)) / (1.0 - rho))
}

/// The signature matrix `J = diag(1, -1, -1, -1)`.
pub fn signature_j() -> QMatrix {
    QMatrix::diag(&[Quaternion::ONE, -Quaternion::ONE, -Quaternion::ONE, -Quaternion::ONE])
}

/// Halmos extension
/// `H(a) = [[(1-s)^{-1/2}, -mu(a) (I - mu(a)* mu(a))^{-1/2}], [-mu(a)* (1-s)^{-1/2}, (I - mu(a)* mu(a))^{-1/2}]]`.
pub fn halmos(a: &BlaschkePoint) -> QMatrix {
    let c = (1.0 - a.s()).powf(-0.5);
    let root = a.defect_power(-0.5);
    let mut h = QMatrix::zeros(4, 4);
    h[(0, 0)] = Quaternion::real(c);
    h.set_block(0, 1, &-&(a.mu() * &root));
    h.set_block(1, 0, &a.mu().adjoint().scale(-c));
    h.set_block(1, 1, &root);
    h
}

/// State-space data `(A, B, C, D)` with `A: 3N x N`, `B: 3N x m`, `C: n x N`, `D: n x m`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RealizationJson", into = "RealizationJson")]
pub struct Realization {
    a: QMatrix,
    b: QMatrix,
    c: QMatrix,
    d: QMatrix,
}

#[derive(Serialize, Deserialize)]
struct RealizationJson {
    #[serde(rename = "N")]
    big_n: usize,
    n: usize,
    m: usize,
    #[serde(rename = "A")]
    a: QMatrix,
    #[serde(rename = "B")]
    b: QMatrix,
    #[serde(rename = "C")]
    c: QMatrix,
    #[serde(rename = "D")]
    d: QMatrix,
}

impl TryFrom<RealizationJson> for Realization {
    type Error = Error;
    fn try_from(raw: RealizationJson) -> Result<Self> {
        let r = Realization::new(raw.a, raw.b, raw.c, raw.d)?;
        if (r.state_dim(), r.output_dim(), r.input_dim()) != (raw.big_n, raw.n, raw.m) {
            return Err(Error::ShapeMismatch(format!(
                "declared N={}, n={}, m={} but matrices give N={}, n={}, m={}",
                raw.big_n,
                raw.n,
                raw.m,
                r.state_dim(),
                r.output_dim(),
                r.input_dim()
            )));
        }
        Ok(r)
    }
}

impl From<Realization> for RealizationJson {
    fn from(r: Realization) -> Self {
        RealizationJson { big_n: r.state_dim(), n: r.output_dim(), m: r.input_dim(), a: r.a, b: r.b, c: r.c, d: r.d }
    }
}

impl Realization {
    pub fn new(a: QMatrix, b: QMatrix, c: QMatrix, d: QMatrix) -> Result<Self> {
        let big_n = a.cols();
        let (n, m) = d.shape();
        let ok = a.rows() == 3 * big_n && b.shape() == (3 * big_n, m) && c.shape() == (n, big_n);
        if !ok {
            return Err(Error::ShapeMismatch(format!(
                "A {}x{}, B {}x{}, C {}x{}, D {}x{} do not form a realization",
                a.rows(),
                a.cols(),
                b.rows(),
                b.cols(),
                c.rows(),
                c.cols(),
                n,
                m
            )));
        }
        Ok(Realization { a, b, c, d })
    }

    pub fn a(&self) -> &QMatrix {
        &self.a
    }
    pub fn b(&self) -> &QMatrix {
        &self.b
    }
    pub fn c(&self) -> &QMatrix {
        &self.c
    }
    pub fn d(&self) -> &QMatrix {
        &self.d
    }

    /// `N`.
    pub fn state_dim(&self) -> usize {
        self.a.cols()
    }
    /// `n`.
    pub fn output_dim(&self) -> usize {
        self.d.rows()
    }
    /// `m`.
    pub fn input_dim(&self) -> usize {
        self.d.cols()
    }

    pub fn a_blocks(&self) -> [QMatrix; 3] {
        split_blocks(&self.a, self.state_dim()).expect("validated on construction")
    }

    pub fn b_blocks(&self) -> [QMatrix; 3] {
        split_blocks(&self.b, self.state_dim()).expect("validated on construction")
    }

    /// The colligation `T = [[A, B], [C, D]]`, of size `(3N + n) x (N + m)`.
    pub fn colligation(&self) -> QMatrix {
        let big_n = self.state_dim();
        let mut t = QMatrix::zeros(3 * big_n + self.output_dim(), big_n + self.input_dim());
        t.set_block(0, 0, &self.a);
        t.set_block(0, big_n, &self.b);
        t.set_block(3 * big_n, 0, &self.c);
        t.set_block(3 * big_n, big_n, &self.d);
        t
    }

    fn weighted(blocks: &[QMatrix; 3], xvec: [f64; 3]) -> QMatrix {
        let mut acc = blocks[0].scale(xvec[0]);
        for u in 1..3 {
            acc = &acc + &blocks[u].scale(xvec[u]);
        }
        acc
    }
}

/// `D + C (I_N - sum x_u A_u)^{-1} (sum x_u B_u)` by quaternionic Gaussian elimination.
pub fn rational_restrict(r: &Realization, xvec: [f64; 3]) -> Result<QMatrix> {
    let pencil = &QMatrix::identity(r.state_dim()) - &Realization::weighted(&r.a_blocks(), xvec);
    let rhs = Realization::weighted(&r.b_blocks(), xvec);
    let state = pencil.solve(&rhs).map_err(|e| match e {
        Error::SingularMatrix => Error::SingularPencil,
        other => other,
    })?;
    Ok(r.d() + &(r.c() * &state))
}

/// `D + C (I - mu A)^{-star} star mu B`, keeping total degrees `<= trunc`.
pub fn rational_series(r: &Realization, trunc: usize) -> Result<FueterSeries> {
    let d = FueterSeries::constant(r.d().clone());
    if trunc == 0 {
        return Ok(d.truncate(0));
    }
    let resolvent = star_resolvent(r.a(), trunc - 1)?.as_polynomial();
    let tail = star_mul(&resolvent, &linear_series(&r.b_blocks())?)?.left_mul_const(r.c())?;
    Ok(d.try_add(&tail)?.truncate(trunc))
}

/// Bound on the entries of `R(0, x_vec) - R^{trunc}(0, x_vec)`:
/// `|C|_F |sum x_u B_u|_F rho^trunc / (1 - rho)` with `rho = |sum x_u A_u|_F < 1`.
pub fn rational_tail_bound(r: &Realization, xvec: [f64; 3], trunc: usize) -> Option<f64> {
    let rho = Realization::weighted(&r.a_blocks(), xvec).frobenius_norm();
    let xb = Realization::weighted(&r.b_blocks(), xvec).frobenius_norm();
    (rho < 1.0).then(|| r.c().frobenius_norm() * xb * rho.powi(trunc as i32) / (1.0 - rho))
}

/// The realization of `B_a`: `A = mu(a)*`, `B = (I_3 - mu(a)* mu(a))^{1/2}`,
/// `C = (1 - s)^{1/2}`, `D = -mu(a)`.
pub fn blaschke_realization(a: &BlaschkePoint) -> Realization {
    Realization::new(
        a.mu().adjoint(),
        a.defect_power(0.5),
        QMatrix::scalar(Quaternion::real((1.0 - a.s()).sqrt())),
        -a.mu(),
    )
    .expect("shapes are fixed")
}

/// Coefficient at `alpha` of the series of `r`, computed from word sums:
/// `C (sum over words w of A_{w_1} ... A_{w_{k-1}}) B_{w_k}` for `|alpha| = k >= 1`.
pub fn rational_coefficient_by_words(r: &Realization, alpha: MultiIndex) -> QMatrix {
    if alpha.degree() == 0 {
        return r.d().clone();
    }
    let a = r.a_blocks();
    let b = r.b_blocks();
    let mut acc = QMatrix::zeros(r.output_dim(), r.input_dim());
    for last in 1..=3 {
        let Some(rest) = alpha.minus_unit(last) else { continue };
        let words = word_sum(&a, rest, r.state_dim());
        acc = &acc + &(&(r.c() * &words) * &b[last - 1]);
    }
    acc
}

/// Sum over all words with letter counts `alpha` of the ordered block products.
pub fn word_sum(blocks: &[QMatrix; 3], alpha: MultiIndex, n: usize) -> QMatrix {
    if alpha.degree() == 0 {
        return QMatrix::identity(n);
    }
    let mut acc = QMatrix::zeros(n, n);
    for u in 1..=3 {
        if let Some(rest) = alpha.minus_unit(u) {
            acc = &acc + &(&blocks[u - 1] * &word_sum(blocks, rest, n));
        }
    }
    acc
}
