use std::collections::BTreeMap;

use super::{MultiIndex, PointH};
use crate::error::{Error, Result};
use crate::quat::{symmetric_product, QMatrix, Quaternion, SYMMETRIC_PRODUCT_CAP};
use crate::series::FueterSeries;

/// `1 + x0 / q_vec`, the common right factor of every Fueter variable.
pub fn fueter_factor(x: PointH) -> Result<Quaternion> {
    Ok(Quaternion::ONE + x.inv_vec_part()? * x.x0)
}

/// The Fueter variable `mu_u(x) = x_u (1 + x0 / q_vec)`, `u` in `1..=3`.
pub fn mu_u(x: PointH, u: usize) -> Result<Quaternion> {
    check_unit(u)?;
    Ok(fueter_factor(x)? * x.coord(u))
}

/// The row `(mu_1(x), mu_2(x), mu_3(x))`.
pub fn mu_row(x: PointH) -> Result<QMatrix> {
    let f = fueter_factor(x)?;
    Ok(QMatrix::row_vector(&[f * x.x1, f * x.x2, f * x.x3]))
}

/// `mu^alpha(x) = x^alpha (1 + x0 / q_vec)^{|alpha|}`.
pub fn mu_alpha(x: PointH, alpha: MultiIndex) -> Result<Quaternion> {
    let f = fueter_factor(x)?;
    Ok(f.powi(alpha.degree() as u32) * alpha.monomial(x.x1, x.x2, x.x3))
}

/// `mu^alpha` as the ordered product `mu_1^{a1} mu_2^{a2} mu_3^{a3}`.
pub fn mu_alpha_product(x: PointH, alpha: MultiIndex) -> Result<Quaternion> {
    let mut acc = Quaternion::ONE;
    for u in 1..=3 {
        let m = mu_u(x, u)?;
        for _ in 0..alpha.get(u) {
            acc *= m;
        }
    }
    Ok(acc)
}

/// Classical Fueter variable `zeta_l = x_l - x0 e_l`.
pub fn zeta_u(x: PointH, u: usize) -> Result<Quaternion> {
    check_unit(u)?;
    Ok(Quaternion::real(x.coord(u)) - Quaternion::unit(u) * x.x0)
}

/// Classical Fueter monomial: symmetric product of `a1` copies of `zeta_1`,
/// `a2` of `zeta_2` and `a3` of `zeta_3`.
pub fn zeta_alpha(x: PointH, alpha: MultiIndex) -> Result<Quaternion> {
    let factors = repeated_units(alpha, |u| zeta_u(x, u))?;
    if factors.is_empty() {
        return Ok(Quaternion::ONE);
    }
    symmetric_product(&factors)
}

/// `c_{alpha,n} = (n! / alpha!) e_1^{x a1} x e_2^{x a2} x e_3^{x a3}`, the
/// coefficients of `q^n = sum_{|alpha| = n} mu^alpha c_{alpha,n}`.
pub fn c_alpha_n(alpha: MultiIndex, n: usize) -> Result<Quaternion> {
    if alpha.degree() != n {
        return Err(Error::DegreeMismatch { expected: n, found: alpha.degree() });
    }
    if n == 0 {
        return Ok(Quaternion::ONE);
    }
    let units = repeated_units(alpha, |u| Ok(Quaternion::unit(u)))?;
    let sym = symmetric_product(&units)?;
    Ok(sym * alpha.multinomial())
}

fn repeated_units(alpha: MultiIndex, f: impl Fn(usize) -> Result<Quaternion>) -> Result<Vec<Quaternion>> {
    if alpha.degree() > SYMMETRIC_PRODUCT_CAP {
        return Err(Error::DegreeCap { degree: alpha.degree(), cap: SYMMETRIC_PRODUCT_CAP });
    }
    let mut out = Vec::with_capacity(alpha.degree());
    for u in 1..=3 {
        let q = f(u)?;
        out.extend(std::iter::repeat_n(q, alpha.get(u) as usize));
    }
    Ok(out)
}

fn check_unit(u: usize) -> Result<()> {
    if !(1..=3).contains(&u) {
        return Err(Error::InvalidInput(format!("variable index {u} not in 1..=3")));
    }
    Ok(())
}

/// The series `sum_{|alpha| = n} mu^alpha c_{alpha,n}`, equal to `q^n` on `H*`.
pub fn expand_qn(n: usize) -> Result<FueterSeries> {
    if n > SYMMETRIC_PRODUCT_CAP {
        return Err(Error::DegreeCap { degree: n, cap: SYMMETRIC_PRODUCT_CAP });
    }
    let mut terms = BTreeMap::new();
    for alpha in MultiIndex::of_degree(n) {
        terms.insert(alpha, QMatrix::scalar(c_alpha_n(alpha, n)?));
    }
    FueterSeries::from_terms(1, 1, terms, None)
}

/// Cached `mu^alpha(x)` for repeated evaluation at one point.
///
/// Stores `x_u^k` and `(1 + x0/q_vec)^k` up to a degree bound, so each
/// monomial costs one scalar product.
#[derive(Clone, Debug)]
pub struct MuTable {
    point: PointH,
    powers: [Vec<f64>; 3],
    factor_powers: Vec<Quaternion>,
}

impl MuTable {
    pub fn new(x: PointH, max_degree: usize) -> Result<Self> {
        let f = fueter_factor(x)?;
        let v = x.vector();
        let powers = [0, 1, 2].map(|u| {
            let mut p = Vec::with_capacity(max_degree + 1);
            let mut acc = 1.0;
            for _ in 0..=max_degree {
                p.push(acc);
                acc *= v[u];
            }
            p
        });
        let mut factor_powers = Vec::with_capacity(max_degree + 1);
        let mut acc = Quaternion::ONE;
        for _ in 0..=max_degree {
            factor_powers.push(acc);
            acc *= f;
        }
        Ok(MuTable { point: x, powers, factor_powers })
    }

    pub fn point(&self) -> PointH {
        self.point
    }

    pub fn max_degree(&self) -> usize {
        self.factor_powers.len() - 1
    }

    /// `mu^alpha(x)`; falls back to the closed form past the cached degree.
    pub fn get(&self, alpha: MultiIndex) -> Quaternion {
        let d = alpha.degree();
        if d > self.max_degree() {
            return mu_alpha(self.point, alpha).expect("point was validated on construction");
        }
        let m = self.powers[0][alpha.a1 as usize] * self.powers[1][alpha.a2 as usize] * self.powers[2][alpha.a3 as usize];
        self.factor_powers[d] * m
    }
}

/// `L_{r,R,rho} = R (1 + rho / (sqrt(3) r))`, the growth bound
/// `|mu^alpha(x)| <= L^{|alpha|}` on `Omega_{r,R,rho}`.
pub fn omega_growth_bound(r: f64, big_r: f64, rho: f64) -> Result<f64> {
    check_bounds(r, big_r, rho)?;
    Ok(big_r * (1.0 + rho / (3f64.sqrt() * r)))
}

fn check_bounds(r: f64, big_r: f64, rho: f64) -> Result<()> {
    if !(r > 0.0 && r < big_r && rho > 0.0) {
        return Err(Error::BadBounds(format!("need 0 < r < R and rho > 0, got r={r}, R={big_r}, rho={rho}")));
    }
    Ok(())
}

/// Membership in `Omega_{r,R,rho}`: `r < |x_u| < R` for each `u` and `|x0| < rho`.
pub fn in_omega_r_big_r_rho(x: PointH, r: f64, big_r: f64, rho: f64) -> Result<bool> {
    check_bounds(r, big_r, rho)?;
    let coords_ok = x.vector().iter().all(|v| r < v.abs() && v.abs() < big_r);
    Ok(coords_ok && x.x0.abs() < rho)
}

/// `sum_u |mu_u(x)|^2`.
pub fn mu_norm_sqr(x: PointH) -> Result<f64> {
    Ok(mu_row(x)?.data().iter().map(|q| q.norm_sqr()).sum())
}

/// Membership in `Omega_1`: `sum_u |mu_u(x)|^2 < 1`.
pub fn in_omega_1(x: PointH) -> Result<bool> {
    Ok(mu_norm_sqr(x)? < 1.0)
}

/// Truncated diagonal `sum_{|alpha| <= trunc} |mu^alpha(x)|^2 |alpha|!/alpha!`
/// of the Arveson kernel.
#[derive(Clone, Debug, PartialEq)]
pub struct ArvesonDiagonal {
    pub value: f64,
    /// Contribution of each total degree `0..=trunc`.
    pub levels: Vec<f64>,
    /// `|q|^{2(trunc+1)} / (1 - |q|^2)` when `|q| < 1`, otherwise `None`
    /// (the full series diverges).
    pub tail_bound: Option<f64>,
}

pub fn arveson_diag(x: PointH, trunc: usize) -> Result<ArvesonDiagonal> {
    let table = MuTable::new(x, trunc)?;
    let levels: Vec<f64> = (0..=trunc)
        .map(|n| MultiIndex::of_degree(n).map(|a| table.get(a).norm_sqr() * a.multinomial()).sum())
        .collect();
    let value = levels.iter().sum();
    let r2 = x.to_quaternion().norm_sqr();
    let tail_bound = (r2 < 1.0).then(|| r2.powi(trunc as i32 + 1) / (1.0 - r2));
    Ok(ArvesonDiagonal { value, levels, tail_bound })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Quaternion, b: Quaternion, tol: f64) -> bool {
        a.dist(b) <= tol
    }

    #[test]
    fn mu_u_examples() {
        let x = PointH::new(0.0, 0.3, -1.2, 2.0);
        for u in 1..=3 {
            assert_eq!(mu_u(x, u).unwrap(), Quaternion::real(x.coord(u)));
        }
        let x = PointH::new(1.0, 1.0, 0.0, 0.0);
        assert!(close(mu_u(x, 1).unwrap(), Quaternion::new(1.0, -1.0, 0.0, 0.0), 1e-15));
        assert!(matches!(mu_u(PointH::new(1.0, 0.0, 0.0, 0.0), 1), Err(Error::SingularVectorPart(_))));
        assert!(mu_u(x, 4).is_err());
    }

    #[test]
    fn mu_alpha_examples() {
        let x = PointH::new(0.4, 0.5, -0.7, 0.2);
        assert_eq!(mu_alpha(x, MultiIndex::ZERO).unwrap(), Quaternion::ONE);
        let a = MultiIndex::new(2, 1, 3);
        let v = mu_alpha(x, a).unwrap();
        let r2 = x.vec_norm_sqr();
        let expected = a.monomial(x.x1, x.x2, x.x3).powi(2) * (1.0 + x.x0 * x.x0 / r2).powi(6);
        assert!((v.norm_sqr() - expected).abs() < 1e-14 * expected.max(1.0));
        let x0 = PointH::new(0.0, 0.5, -0.7, 0.2);
        let v = mu_alpha(x0, a).unwrap();
        assert!(v.vec_part().norm() < 1e-16);
        assert!((v.w - a.monomial(0.5, -0.7, 0.2)).abs() < 1e-16);
    }

    #[test]
    fn zeta_examples() {
        let x = PointH::new(0.0, 0.3, 0.7, -0.2);
        let a = MultiIndex::new(1, 2, 1);
        assert!(close(zeta_alpha(x, a).unwrap(), Quaternion::real(a.monomial(0.3, 0.7, -0.2)), 1e-15));
        let x = PointH::new(1.0, 2.0, 0.0, 0.0);
        assert_eq!(zeta_alpha(x, MultiIndex::new(1, 0, 0)).unwrap(), Quaternion::new(2.0, -1.0, 0.0, 0.0));
        // hand expansion: sym(1 - e1, 1 - e2) = 1 - e1 - e2 + (e1e2 + e2e1)/2 = 1 - e1 - e2
        let x = PointH::new(1.0, 1.0, 1.0, 0.0);
        let z = zeta_alpha(x, MultiIndex::new(1, 1, 0)).unwrap();
        assert!(close(z, Quaternion::new(1.0, -1.0, -1.0, 0.0), 1e-15));
        assert!(matches!(zeta_alpha(x, MultiIndex::new(9, 0, 0)), Err(Error::DegreeCap { .. })));
    }

    #[test]
    fn c_alpha_n_examples() {
        assert_eq!(c_alpha_n(MultiIndex::new(1, 0, 0), 1).unwrap(), Quaternion::E1);
        assert_eq!(c_alpha_n(MultiIndex::new(2, 0, 0), 2).unwrap(), -Quaternion::ONE);
        assert!(close(c_alpha_n(MultiIndex::new(1, 1, 0), 2).unwrap(), Quaternion::ZERO, 1e-15));
        assert!(matches!(c_alpha_n(MultiIndex::new(1, 1, 0), 3), Err(Error::DegreeMismatch { .. })));
        assert!(matches!(c_alpha_n(MultiIndex::new(9, 0, 0), 9), Err(Error::DegreeCap { .. })));
    }

    #[test]
    fn c_alpha_n_real_on_even_pure_powers() {
        for u in 1..=3 {
            for k in 1..=4u32 {
                let mut a = [0u32; 3];
                a[u - 1] = 2 * k;
                let c = c_alpha_n(a.into(), 2 * k as usize).unwrap();
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                assert!(close(c, Quaternion::real(sign), 1e-15), "{a:?} {c}");
            }
        }
    }

    #[test]
    fn expand_qn_examples() {
        let s0 = expand_qn(0).unwrap();
        assert_eq!(s0.len(), 1);
        assert_eq!(s0.coefficient(MultiIndex::ZERO).unwrap(), &QMatrix::scalar(Quaternion::ONE));
        let v = expand_qn(2).unwrap().eval(PointH::new(0.0, 1.0, 1.0, 0.0)).unwrap();
        assert!(close(v[(0, 0)], Quaternion::real(-2.0), 1e-14));
        let v = expand_qn(3).unwrap().eval(PointH::new(1.0, 1.0, 0.0, 0.0)).unwrap();
        assert!(close(v[(0, 0)], Quaternion::new(-2.0, 2.0, 0.0, 0.0), 1e-14));
        assert!(expand_qn(9).is_err());
    }

    #[test]
    fn omega_examples() {
        assert!(in_omega_r_big_r_rho(PointH::new(0.0, 1.0, 1.0, 1.0), 0.5, 2.0, 1.0).unwrap());
        assert!(!in_omega_r_big_r_rho(PointH::new(0.0, 0.1, 1.0, 1.0), 0.5, 2.0, 1.0).unwrap());
        assert!(!in_omega_r_big_r_rho(PointH::new(1.5, 1.0, 1.0, 1.0), 0.5, 2.0, 1.0).unwrap());
        assert!(matches!(in_omega_r_big_r_rho(PointH::default(), 2.0, 1.0, 1.0), Err(Error::BadBounds(_))));
        assert!(in_omega_1(PointH::new(0.0, 0.5, 0.0, 0.1)).unwrap());
        assert!(!in_omega_1(PointH::new(0.0, 1.0, 1.0, 0.0)).unwrap());
        assert!(in_omega_1(PointH::new(0.0, 0.0, 0.0, 0.0)).is_err());
    }

    #[test]
    fn arveson_diag_examples() {
        let d = arveson_diag(PointH::new(0.0, 0.5, 0.0, 0.0), 40).unwrap();
        assert!((d.value - 4.0 / 3.0).abs() < 1e-9);
        assert!(d.tail_bound.unwrap() < 1e-20);
        let d = arveson_diag(PointH::new(0.3, 0.5, 0.1, 0.0), 0).unwrap();
        assert_eq!(d.value, 1.0);
        let d = arveson_diag(PointH::new(0.5, 0.8, 0.4, 0.0), 10).unwrap();
        assert!(d.tail_bound.is_none());
        assert!(d.levels.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn mu_table_matches_closed_form() {
        let x = PointH::new(-0.3, 0.2, 0.9, -0.4);
        let t = MuTable::new(x, 5).unwrap();
        for a in MultiIndex::up_to_degree(7) {
            assert!(close(t.get(a), mu_alpha(x, a).unwrap(), 1e-14));
        }
    }
}
