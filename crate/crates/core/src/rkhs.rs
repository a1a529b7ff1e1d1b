//! Reproducing kernels `K_c(x, y) = sum_alpha mu^alpha(x) conj(mu^alpha(y)) / c_alpha`,
//! the Arveson family `c_alpha = alpha! / |alpha|!`, the shift operators
//! `M_u`, `B_u` and `M_u*` as coefficient maps, and Gram matrices for
//! positivity tests.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::fueter::{factorial, MuTable, MultiIndex, PointH};
use crate::quat::{QMatrix, Quaternion};
use crate::series::{star_mul, FueterSeries};

/// Positive weights `c_alpha` defining the norm `||mu^alpha||^2 = c_alpha`.
///
/// Custom families are accepted without checking the summability condition
/// that makes `H(K_c)` a space of convergent series.
#[derive(Clone, Debug, PartialEq)]
pub enum CoefficientFamily {
    Arveson,
    Custom(BTreeMap<MultiIndex, BigRational>),
}

impl CoefficientFamily {
    /// A custom family; every value must be strictly positive.
    pub fn custom(values: BTreeMap<MultiIndex, BigRational>) -> Result<Self> {
        if let Some((a, v)) = values.iter().find(|(_, v)| !v.is_positive()) {
            return Err(Error::InvalidInput(format!("coefficient c_{a} = {v} is not positive")));
        }
        Ok(CoefficientFamily::Custom(values))
    }

    /// The family `c_alpha = value` for all `|alpha| <= max_degree`.
    pub fn uniform(value: BigRational, max_degree: usize) -> Result<Self> {
        Self::custom(MultiIndex::up_to_degree(max_degree).map(|a| (a, value.clone())).collect())
    }

    /// Exact `c_alpha`.
    pub fn coefficient(&self, alpha: MultiIndex) -> Result<BigRational> {
        match self {
            CoefficientFamily::Arveson => Ok(arveson_coefficient(alpha)),
            CoefficientFamily::Custom(map) => map
                .get(&alpha)
                .cloned()
                .ok_or_else(|| Error::InvalidInput(format!("custom family has no coefficient for {alpha}"))),
        }
    }

    /// `1 / c_alpha` as a float.
    pub fn weight(&self, alpha: MultiIndex) -> Result<f64> {
        match self {
            CoefficientFamily::Arveson => Ok(alpha.multinomial()),
            _ => rational_to_f64(&self.coefficient(alpha)?.recip()),
        }
    }
}

/// `alpha! / |alpha|!`, exact.
pub fn arveson_coefficient(alpha: MultiIndex) -> BigRational {
    BigRational::new(BigInt::from(alpha.factorial()), BigInt::from(factorial(alpha.degree())))
}

pub fn rational_to_f64(r: &BigRational) -> Result<f64> {
    r.to_f64().filter(|v| v.is_finite()).ok_or_else(|| Error::InvalidInput(format!("{r} does not fit a float")))
}

/// Truncated kernel value with its tail estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelValue {
    pub value: Quaternion,
    /// For the Arveson family with `|x| |y| < 1`: `(|x||y|)^{trunc+1} / (1 - |x||y|)`,
    /// which dominates the omitted levels by Cauchy-Schwarz.
    pub tail_bound: Option<f64>,
}

fn kernel_from_tables(c: &CoefficientFamily, tx: &MuTable, ty: &MuTable, trunc: usize) -> Result<Quaternion> {
    let mut acc = Quaternion::ZERO;
    for a in MultiIndex::up_to_degree(trunc) {
        acc += tx.get(a) * ty.get(a).conj() * c.weight(a)?;
    }
    Ok(acc)
}

fn arveson_tail(c: &CoefficientFamily, x: PointH, y: PointH, trunc: usize) -> Option<f64> {
    let r = x.norm() * y.norm();
    (matches!(c, CoefficientFamily::Arveson) && r < 1.0).then(|| r.powi(trunc as i32 + 1) / (1.0 - r))
}

/// `sum_{|alpha| <= trunc} mu^alpha(x) conj(mu^alpha(y)) / c_alpha`.
pub fn kernel_eval(c: &CoefficientFamily, x: PointH, y: PointH, trunc: usize) -> Result<KernelValue> {
    let tx = MuTable::new(x, trunc)?;
    let ty = MuTable::new(y, trunc)?;
    Ok(KernelValue { value: kernel_from_tables(c, &tx, &ty, trunc)?, tail_bound: arveson_tail(c, x, y, trunc) })
}

/// Gram matrix `G_ij = K_c(x_i, x_j)` of the truncated kernel.
pub fn gram_matrix(c: &CoefficientFamily, points: &[PointH], trunc: usize) -> Result<QMatrix> {
    let tables = points.iter().map(|p| MuTable::new(*p, trunc)).collect::<Result<Vec<_>>>()?;
    let weights = MultiIndex::up_to_degree(trunc).map(|a| Ok((a, c.weight(a)?))).collect::<Result<Vec<_>>>()?;
    let n = points.len();
    let mut g = QMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v: Quaternion = if i == j {
                Quaternion::real(weights.iter().map(|(a, w)| tables[i].get(*a).norm_sqr() * w).sum())
            } else {
                weights.iter().map(|(a, w)| tables[i].get(*a) * tables[j].get(*a).conj() * *w).sum()
            };
            g[(i, j)] = v;
            g[(j, i)] = v.conj();
        }
    }
    Ok(g)
}

fn map_terms(
    f: &FueterSeries,
    trunc: Option<usize>,
    mut step: impl FnMut(MultiIndex) -> Result<Option<(MultiIndex, f64)>>,
) -> Result<FueterSeries> {
    let mut terms = BTreeMap::new();
    for (a, m) in f.terms() {
        if let Some((b, s)) = step(*a)? {
            terms.insert(b, m.scale(s));
        }
    }
    FueterSeries::from_terms(f.rows(), f.cols(), terms, trunc)
}

fn check_unit(u: usize) -> Result<()> {
    if (1..=3).contains(&u) {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("direction {u} outside 1..=3")))
    }
}

/// `M_u mu^alpha = mu^{alpha + e_u}`.
pub fn shift(u: usize, f: &FueterSeries) -> Result<FueterSeries> {
    check_unit(u)?;
    map_terms(f, f.trunc().map(|d| d + 1), |a| Ok(Some((a.plus_unit(u), 1.0))))
}

/// `B_u mu^alpha = (alpha_u / |alpha|) mu^{alpha - e_u}`, zero when `alpha_u = 0`.
pub fn backward_shift(u: usize, f: &FueterSeries) -> Result<FueterSeries> {
    check_unit(u)?;
    map_terms(f, f.trunc().map(|d| d.saturating_sub(1)), |a| {
        Ok(a.minus_unit(u).map(|b| (b, a.get(u) as f64 / a.degree() as f64)))
    })
}

/// Exact ratio `c_alpha / c_{alpha - e_u}`, or `None` when `alpha_u = 0`.
pub fn shift_adjoint_ratio(c: &CoefficientFamily, alpha: MultiIndex, u: usize) -> Result<Option<BigRational>> {
    check_unit(u)?;
    match alpha.minus_unit(u) {
        None => Ok(None),
        Some(b) => Ok(Some(c.coefficient(alpha)? / c.coefficient(b)?)),
    }
}

/// `M_u* mu^alpha = (c_alpha / c_{alpha - e_u}) mu^{alpha - e_u}`.
pub fn shift_adjoint(u: usize, c: &CoefficientFamily, f: &FueterSeries) -> Result<FueterSeries> {
    map_terms(f, f.trunc().map(|d| d.saturating_sub(1)), |a| match shift_adjoint_ratio(c, a, u)? {
        None => Ok(None),
        Some(r) => Ok(Some((a.minus_unit(u).expect("ratio exists"), rational_to_f64(&r)?))),
    })
}

/// `1 - sum_{u : alpha_u > 0} c_alpha / c_{alpha - e_u}`, exact.
pub fn structural_defect(c: &CoefficientFamily, alpha: MultiIndex) -> Result<BigRational> {
    if alpha.degree() == 0 {
        return Err(Error::InvalidInput("structural defect needs |alpha| >= 1".into()));
    }
    let mut acc = BigRational::one();
    for u in 1..=3 {
        if let Some(r) = shift_adjoint_ratio(c, alpha, u)? {
            acc -= r;
        }
    }
    Ok(acc)
}

/// Renders an exact rational as `numer/denom` in lowest terms.
pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Block Gram matrix of the truncated multiplier kernel together with any
/// points that fell outside `Omega_A`.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiplierGram {
    pub gram: QMatrix,
    pub warnings: Vec<Error>,
}

/// Gram matrix of
/// `K(x, y) = sum_{|alpha| <= trunc} (|alpha|!/alpha!) [mu^alpha(x) conj(mu^alpha(y)) I_n - (mu^alpha star S)(x) (mu^alpha star S)(y)*]`
/// on the given points, as `n x n` blocks.
///
/// `S` is used as the polynomial its stored coefficients define; any
/// truncation marker on it is ignored. Points with `|q| >= 1` are reported in
/// `warnings` but still evaluated.
pub fn multiplier_kernel_gram(s: &FueterSeries, points: &[PointH], trunc: usize) -> Result<MultiplierGram> {
    let s = s.as_polynomial();
    let n = s.rows();
    let warnings = points.iter().filter(|p| !(p.norm() < 1.0)).map(|p| Error::PointOutsideOmegaA(p.coords())).collect();
    let depth = trunc + s.max_degree().unwrap_or(0);
    let tables = points.iter().map(|p| MuTable::new(*p, depth)).collect::<Result<Vec<_>>>()?;
    let np = points.len();
    let mut gram = QMatrix::zeros(np * n, np * n);
    let id = QMatrix::identity(n);
    for alpha in MultiIndex::up_to_degree(trunc) {
        let w = alpha.multinomial();
        let shifted = star_mul(&FueterSeries::monomial(alpha, id.clone()), &s)?;
        let values: Vec<QMatrix> = tables.iter().map(|t| shifted.eval_with(t)).collect();
        let mus: Vec<Quaternion> = tables.iter().map(|t| t.get(alpha)).collect();
        for i in 0..np {
            for j in 0..np {
                let scalar = id.lmul(mus[i] * mus[j].conj());
                let block = &scalar - &(&values[i] * &values[j].adjoint());
                let prev = gram.block(i * n, j * n, n, n);
                gram.set_block(i * n, j * n, &(&prev + &block.scale(w)));
            }
        }
    }
    Ok(MultiplierGram { gram, warnings })
}
