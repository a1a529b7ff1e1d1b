//! Finitely supported `mu^alpha`-expansions with quaternionic matrix
//! coefficients and the CK product `star`.
//!
//! A series `f = sum_alpha mu^alpha f_alpha` stores its coefficients keyed by
//! multi-index in canonical (graded lexicographic) order. Since the `mu_u`
//! commute and the monomials multiply by adding indices, the CK product is
//! coefficient convolution `(f star g)_gamma = sum_{alpha+beta=gamma} f_alpha g_beta`,
//! with the matrix products taken in that order.
//!
//! A series may carry a truncation degree: every term above it was discarded
//! somewhere upstream, so only coefficients up to that degree are exact.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fueter::{MuTable, MultiIndex, PointH};
use crate::quat::{QMatrix, Quaternion};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SeriesJson", into = "SeriesJson")]
pub struct FueterSeries {
    rows: usize,
    cols: usize,
    trunc: Option<usize>,
    terms: BTreeMap<MultiIndex, QMatrix>,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    alpha: MultiIndex,
    coeff: QMatrix,
}

#[derive(Serialize, Deserialize)]
struct SeriesJson {
    rows: usize,
    cols: usize,
    trunc: Option<usize>,
    terms: Vec<TermJson>,
}

impl TryFrom<SeriesJson> for FueterSeries {
    type Error = Error;
    fn try_from(raw: SeriesJson) -> Result<Self> {
        let mut terms = BTreeMap::new();
        for t in raw.terms {
            if terms.insert(t.alpha, t.coeff).is_some() {
                return Err(Error::InvalidInput(format!("duplicate term {}", t.alpha)));
            }
        }
        FueterSeries::from_terms(raw.rows, raw.cols, terms, raw.trunc)
    }
}

impl From<FueterSeries> for SeriesJson {
    fn from(s: FueterSeries) -> Self {
        SeriesJson {
            rows: s.rows,
            cols: s.cols,
            trunc: s.trunc,
            terms: s.terms.into_iter().map(|(alpha, coeff)| TermJson { alpha, coeff }).collect(),
        }
    }
}

fn min_trunc(a: Option<usize>, b: Option<usize>) -> Option<usize> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl FueterSeries {
    pub fn zero(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "series shape must be positive");
        FueterSeries { rows, cols, trunc: None, terms: BTreeMap::new() }
    }

    /// The constant series `mu^0 m`.
    pub fn constant(m: QMatrix) -> Self {
        Self::monomial(MultiIndex::ZERO, m)
    }

    pub fn identity(n: usize) -> Self {
        Self::constant(QMatrix::identity(n))
    }

    /// The single term `mu^alpha m`.
    pub fn monomial(alpha: MultiIndex, m: QMatrix) -> Self {
        let mut s = Self::zero(m.rows(), m.cols());
        if !m.is_zero() {
            s.terms.insert(alpha, m);
        }
        s
    }

    /// Builds a series from explicit terms, validating shapes, dropping exact
    /// zeros and terms above `trunc`.
    pub fn from_terms(
        rows: usize,
        cols: usize,
        terms: BTreeMap<MultiIndex, QMatrix>,
        trunc: Option<usize>,
    ) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::ShapeMismatch(format!("series shape {rows}x{cols}")));
        }
        if let Some((alpha, m)) = terms.iter().find(|(_, m)| m.shape() != (rows, cols)) {
            return Err(Error::ShapeMismatch(format!(
                "coefficient at {alpha} is {}x{}, series is {rows}x{cols}",
                m.rows(),
                m.cols()
            )));
        }
        let terms = terms
            .into_iter()
            .filter(|(a, m)| !m.is_zero() && trunc.is_none_or(|d| a.degree() <= d))
            .collect();
        Ok(FueterSeries { rows, cols, trunc, terms })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn trunc(&self) -> Option<usize> {
        self.trunc
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &QMatrix)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, alpha: MultiIndex) -> Option<&QMatrix> {
        self.terms.get(&alpha)
    }

    /// Coefficient at `alpha`, with zero for absent terms.
    pub fn coefficient_or_zero(&self, alpha: MultiIndex) -> QMatrix {
        self.terms.get(&alpha).cloned().unwrap_or_else(|| QMatrix::zeros(self.rows, self.cols))
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.terms.keys().next_back().map(|a| a.degree())
    }

    /// Drops terms above degree `d` and records the truncation.
    pub fn truncate(&self, d: usize) -> Self {
        let trunc = min_trunc(self.trunc, Some(d));
        let terms = self.terms.iter().filter(|(a, _)| a.degree() <= d).map(|(a, m)| (*a, m.clone())).collect();
        FueterSeries { rows: self.rows, cols: self.cols, trunc, terms }
    }

    /// Same coefficients with the truncation marker cleared, i.e. the stored
    /// polynomial taken at face value.
    pub fn as_polynomial(&self) -> Self {
        FueterSeries { trunc: None, ..self.clone() }
    }

    fn insert_add(terms: &mut BTreeMap<MultiIndex, QMatrix>, alpha: MultiIndex, m: QMatrix) {
        match terms.get_mut(&alpha) {
            Some(existing) => *existing = &*existing + &m,
            None => {
                terms.insert(alpha, m);
            }
        }
    }

    fn combine(&self, other: &Self, sign: f64) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch(format!(
                "adding {}x{} and {}x{} series",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut terms = self.terms.clone();
        for (a, m) in &other.terms {
            Self::insert_add(&mut terms, *a, m.scale(sign));
        }
        Self::from_terms(self.rows, self.cols, terms, min_trunc(self.trunc, other.trunc))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.combine(other, 1.0)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, -1.0)
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map_coefficients(|m| m.scale(s))
    }

    /// `m star f` for a constant matrix `m`: every coefficient multiplied on the left.
    pub fn left_mul_const(&self, m: &QMatrix) -> Result<Self> {
        if m.cols() != self.rows {
            return Err(Error::ShapeMismatch("constant times series".into()));
        }
        let terms = self.terms.iter().map(|(a, c)| Ok((*a, m.matmul(c)?))).collect::<Result<_>>()?;
        Self::from_terms(m.rows(), self.cols, terms, self.trunc)
    }

    /// `f star m` for a constant matrix `m`: every coefficient multiplied on the right.
    pub fn right_mul_const(&self, m: &QMatrix) -> Result<Self> {
        if self.cols != m.rows() {
            return Err(Error::ShapeMismatch("series times constant".into()));
        }
        let terms = self.terms.iter().map(|(a, c)| Ok((*a, c.matmul(m)?))).collect::<Result<_>>()?;
        Self::from_terms(self.rows, m.cols(), terms, self.trunc)
    }

    fn map_coefficients(&self, f: impl Fn(&QMatrix) -> QMatrix) -> Self {
        let terms = self.terms.iter().map(|(a, m)| (*a, f(m))).filter(|(_, m)| !m.is_zero()).collect();
        FueterSeries { rows: self.rows, cols: self.cols, trunc: self.trunc, terms }
    }

    /// Largest coefficient distance over all indices of degree `<= d`.
    pub fn max_coeff_diff(&self, other: &Self, d: usize) -> f64 {
        if self.shape() != other.shape() {
            return f64::INFINITY;
        }
        let zero = QMatrix::zeros(self.rows, self.cols);
        self.terms
            .keys()
            .chain(other.terms.keys())
            .filter(|a| a.degree() <= d)
            .map(|a| {
                let x = self.terms.get(a).unwrap_or(&zero);
                let y = other.terms.get(a).unwrap_or(&zero);
                x.max_abs_diff(y)
            })
            .fold(0.0, f64::max)
    }

    /// Evaluates `sum_alpha mu^alpha(x) f_alpha`, each scalar `mu^alpha(x)`
    /// acting from the left on its coefficient.
    pub fn eval(&self, x: PointH) -> Result<QMatrix> {
        let table = MuTable::new(x, self.max_degree().unwrap_or(0))?;
        Ok(self.eval_with(&table))
    }

    pub fn eval_with(&self, table: &MuTable) -> QMatrix {
        let mut acc = QMatrix::zeros(self.rows, self.cols);
        for (a, m) in &self.terms {
            acc = &acc + &m.lmul(table.get(*a));
        }
        acc
    }
}

/// CK-extension of polynomial boundary data `sum x^alpha p_alpha` at
/// `x0 = 0`: each `x^alpha` is replaced by `mu^alpha`. An empty input yields
/// the `1 x 1` zero series.
pub fn ck_extend(poly: impl IntoIterator<Item = (MultiIndex, QMatrix)>) -> Result<FueterSeries> {
    let mut terms = BTreeMap::new();
    let mut shape = None;
    for (alpha, m) in poly {
        match shape {
            None => shape = Some(m.shape()),
            Some(s) if s != m.shape() => {
                return Err(Error::ShapeMismatch(format!("boundary coefficient at {alpha} has a different shape")))
            }
            _ => {}
        }
        FueterSeries::insert_add(&mut terms, alpha, m);
    }
    let (rows, cols) = shape.unwrap_or((1, 1));
    FueterSeries::from_terms(rows, cols, terms, None)
}

/// The CK product `f star g`. The result is truncated to the smaller of the
/// operands' truncation degrees.
pub fn star_mul(f: &FueterSeries, g: &FueterSeries) -> Result<FueterSeries> {
    if f.cols != g.rows {
        return Err(Error::ShapeMismatch(format!(
            "star product of {}x{} and {}x{} series",
            f.rows, f.cols, g.rows, g.cols
        )));
    }
    let trunc = min_trunc(f.trunc, g.trunc);
    let mut terms = BTreeMap::new();
    for (a, fa) in &f.terms {
        for (b, gb) in &g.terms {
            let c = *a + *b;
            if trunc.is_some_and(|d| c.degree() > d) {
                continue;
            }
            FueterSeries::insert_add(&mut terms, c, fa.matmul(gb)?);
        }
    }
    FueterSeries::from_terms(f.rows, g.cols, terms, trunc)
}

/// Star inverse of a square series up to total degree `trunc`, by the
/// recursion `g_0 = f_0^{-1}`, `g_gamma = -f_0^{-1} sum_{0 < alpha <= gamma} f_alpha g_{gamma - alpha}`.
///
/// In the formal power series ring this left inverse is also a right inverse.
pub fn star_inverse(f: &FueterSeries, trunc: usize) -> Result<FueterSeries> {
    if f.rows != f.cols {
        return Err(Error::ShapeMismatch("star inverse of a non-square series".into()));
    }
    let f0 = f.coefficient(MultiIndex::ZERO).ok_or(Error::SingularConstantTerm)?;
    let f0_inv = f0.inverse().map_err(|_| Error::SingularConstantTerm)?;
    let trunc = f.trunc.map_or(trunc, |d| d.min(trunc));
    let n = f.rows;
    let higher: Vec<(MultiIndex, &QMatrix)> =
        f.terms.iter().filter(|(a, _)| **a != MultiIndex::ZERO).map(|(a, m)| (*a, m)).collect();
    let mut g: BTreeMap<MultiIndex, QMatrix> = BTreeMap::new();
    g.insert(MultiIndex::ZERO, f0_inv.clone());
    for gamma in MultiIndex::up_to_degree(trunc).skip(1) {
        let mut acc = QMatrix::zeros(n, n);
        let mut any = false;
        for (alpha, fa) in &higher {
            if let Some(rest) = gamma.checked_sub(*alpha) {
                if let Some(gr) = g.get(&rest) {
                    acc = &acc + &(*fa * gr);
                    any = true;
                }
            }
        }
        if any {
            let coeff = -&(&f0_inv * &acc);
            if !coeff.is_zero() {
                g.insert(gamma, coeff);
            }
        }
    }
    FueterSeries::from_terms(n, n, g, Some(trunc))
}

/// The `3 x 1` block column `A = (A_1; A_2; A_3)` split into its blocks.
pub(crate) fn split_blocks(stacked: &QMatrix, block_rows: usize) -> Result<[QMatrix; 3]> {
    if stacked.rows() != 3 * block_rows {
        return Err(Error::ShapeMismatch(format!(
            "expected {} rows (three blocks of {block_rows}), got {}",
            3 * block_rows,
            stacked.rows()
        )));
    }
    let c = stacked.cols();
    Ok([0, 1, 2].map(|u| stacked.block(u * block_rows, 0, block_rows, c)))
}

/// The degree-one series `sum_u mu^{e_u} M_u` for blocks `M_u`.
pub fn linear_series(blocks: &[QMatrix; 3]) -> Result<FueterSeries> {
    let shape = blocks[0].shape();
    if blocks.iter().any(|b| b.shape() != shape) {
        return Err(Error::ShapeMismatch("linear series blocks differ in shape".into()));
    }
    let terms = (1..=3).map(|u| (MultiIndex::unit(u), blocks[u - 1].clone())).collect();
    FueterSeries::from_terms(shape.0, shape.1, terms, None)
}

/// `(I_N - mu(x) A)^{-star}` to degree `trunc`, for `A` stacked as three
/// `N x N` blocks (`3N x N`).
pub fn star_resolvent(a: &QMatrix, trunc: usize) -> Result<FueterSeries> {
    let n = a.cols();
    let blocks = split_blocks(a, n)?;
    let pencil = FueterSeries::identity(n).try_sub(&linear_series(&blocks)?)?;
    star_inverse(&pencil, trunc)
}

/// Convenience: the scalar series `sum mu^alpha q_alpha` from quaternion terms.
pub fn scalar_series(terms: impl IntoIterator<Item = (MultiIndex, Quaternion)>) -> Result<FueterSeries> {
    ck_extend(terms.into_iter().map(|(a, q)| (a, QMatrix::scalar(q))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(w: f64, x: f64, y: f64, z: f64) -> Quaternion {
        Quaternion::new(w, x, y, z)
    }

    fn scalar(q: Quaternion) -> QMatrix {
        QMatrix::scalar(q)
    }

    #[test]
    fn ck_extend_examples() {
        let a = MultiIndex::new(1, 2, 0);
        let s = ck_extend([(a, scalar(Quaternion::ONE))]).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.coefficient(a), Some(&scalar(Quaternion::ONE)));
        let z = ck_extend(std::iter::empty()).unwrap();
        assert!(z.is_empty());
        let bad = ck_extend([(a, scalar(Quaternion::ONE)), (MultiIndex::ZERO, QMatrix::zeros(2, 1))]);
        assert!(matches!(bad, Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn star_monomials() {
        let (a, b) = (MultiIndex::new(1, 0, 2), MultiIndex::new(0, 3, 1));
        let (c, d) = (q(0.5, 1.0, -2.0, 0.0), q(0.0, 0.3, 0.1, 1.0));
        let f = FueterSeries::monomial(a, scalar(c));
        let g = FueterSeries::monomial(b, scalar(d));
        let fg = star_mul(&f, &g).unwrap();
        assert_eq!(fg, FueterSeries::monomial(a + b, scalar(c * d)));
        let gf = star_mul(&g, &f).unwrap();
        assert_ne!(fg, gf);
        assert_eq!(star_mul(&f, &FueterSeries::identity(1)).unwrap(), f);
    }

    #[test]
    fn star_product_respects_truncation() {
        let f = scalar_series([(MultiIndex::ZERO, Quaternion::ONE), (MultiIndex::unit(1), Quaternion::E2)])
            .unwrap()
            .truncate(2);
        let g = scalar_series([(MultiIndex::new(2, 0, 0), Quaternion::E1)]).unwrap();
        let fg = star_mul(&f, &g).unwrap();
        assert_eq!(fg.trunc(), Some(2));
        assert_eq!(fg.len(), 1);
    }

    #[test]
    fn star_inverse_of_geometric_symbol() {
        let c = q(0.2, 0.3, -0.1, 0.4);
        let f = scalar_series([(MultiIndex::ZERO, Quaternion::ONE), (MultiIndex::unit(1), -c)]).unwrap();
        let g = star_inverse(&f, 7).unwrap();
        for k in 0..=7u32 {
            let coeff = g.coefficient(MultiIndex::new(k, 0, 0)).unwrap();
            assert!(coeff[(0, 0)].dist(c.powi(k)) < 1e-15);
        }
        assert_eq!(g.len(), 8);
        let prod = star_mul(&f, &g.as_polynomial()).unwrap();
        for (alpha, m) in prod.terms() {
            if alpha.degree() <= 7 {
                let want = if *alpha == MultiIndex::ZERO { Quaternion::ONE } else { Quaternion::ZERO };
                assert!(m[(0, 0)].dist(want) < 1e-15);
            }
        }
        assert_eq!(star_inverse(&FueterSeries::identity(2), 5).unwrap().as_polynomial(), FueterSeries::identity(2));
    }

    #[test]
    fn star_inverse_requires_invertible_constant() {
        let f = scalar_series([(MultiIndex::unit(2), Quaternion::ONE)]).unwrap();
        assert_eq!(star_inverse(&f, 3), Err(Error::SingularConstantTerm));
    }

    #[test]
    fn resolvent_examples() {
        let zero = QMatrix::zeros(6, 2);
        assert_eq!(star_resolvent(&zero, 4).unwrap().as_polynomial(), FueterSeries::identity(2));
        let a = q(0.1, 0.5, 0.0, -0.2);
        let stacked = QMatrix::from_vec(3, 1, vec![a, Quaternion::ZERO, Quaternion::ZERO]).unwrap();
        let r = star_resolvent(&stacked, 6).unwrap();
        assert_eq!(r.len(), 7);
        for k in 0..=6u32 {
            assert!(r.coefficient(MultiIndex::new(k, 0, 0)).unwrap()[(0, 0)].dist(a.powi(k)) < 1e-15);
        }
    }

    #[test]
    fn eval_examples() {
        let z = FueterSeries::zero(2, 3);
        assert!(z.eval(PointH::new(0.1, 0.2, 0.3, 0.4)).unwrap().is_zero());
        let a = MultiIndex::new(2, 0, 1);
        let c = QMatrix::row_vector(&[q(1.0, 2.0, 0.0, 0.0), q(0.0, 0.0, 1.0, -1.0)]);
        let s = FueterSeries::monomial(a, c.clone());
        let v = s.eval(PointH::new(0.0, 0.5, 2.0, -1.5)).unwrap();
        assert_eq!(v, c.scale(0.25 * -1.5));
        assert!(s.eval(PointH::new(1.0, 0.0, 0.0, 0.0)).is_err());
    }

    #[test]
    fn json_is_canonical() {
        let s = scalar_series([
            (MultiIndex::new(0, 1, 0), Quaternion::E1),
            (MultiIndex::ZERO, Quaternion::ONE),
            (MultiIndex::new(1, 0, 0), Quaternion::E2),
        ])
        .unwrap()
        .truncate(3);
        let text = serde_json::to_string(&s).unwrap();
        assert!(text.starts_with(r#"{"rows":1,"cols":1,"trunc":3,"terms":[{"alpha":[0,0,0]"#), "{text}");
        let pos_100 = text.find("[1,0,0]").unwrap();
        let pos_010 = text.find("[0,1,0]").unwrap();
        assert!(pos_010 < pos_100);
        let back: FueterSeries = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }
}
