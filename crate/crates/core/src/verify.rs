//! Seeded identity checks, one per acceptance criterion, grouped in suites.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fueter::{arveson_diag, expand_qn, mu_alpha, MultiIndex, PointH};
use crate::ops::{
    apply_vq, apply_vq_bar_alt, dmu1_dx2, euler_exponential, gleason_defect, mu_field, FdScheme, GLEASON_DEFAULT_NODES,
};
use crate::quat::{min_eigenvalue, QMatrix, Quaternion};
use crate::rkhs::{gram_matrix, multiplier_kernel_gram, structural_defect, CoefficientFamily};
use crate::sample::{
    random_point_h_star, random_point_in_ball, random_point_omega_1, random_qmatrix, random_quaternion,
    random_radial_segment, random_slice_point, seeded_rng, SeededRng,
};
use crate::schur::{
    blaschke_realization, blaschke_restrict, blaschke_series, halmos, rational_restrict, rational_series,
    rational_tail_bound, signature_j, BlaschkePoint, Realization,
};
use crate::series::{star_mul, FueterSeries};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Fueter,
    Operators,
    Ck,
    Kernel,
    Blaschke,
    Rational,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 7] = ["fueter", "operators", "ck", "kernel", "blaschke", "rational", "all"];

    /// Criterion ids covered by the suite.
    pub fn criteria(self) -> &'static [u8] {
        match self {
            Suite::Fueter => &[2, 3],
            Suite::Operators => &[1, 4, 5, 6],
            Suite::Ck => &[12],
            Suite::Kernel => &[7, 8, 9],
            Suite::Blaschke => &[10, 11],
            Suite::Rational => &[13],
            Suite::All => &[1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13],
        }
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "fueter" => Suite::Fueter,
            "operators" => Suite::Operators,
            "ck" => Suite::Ck,
            "kernel" => Suite::Kernel,
            "blaschke" => Suite::Blaschke,
            "rational" => Suite::Rational,
            "all" => Suite::All,
            _ => return Err(Error::InvalidInput(format!("unknown suite {s:?}; expected one of {:?}", Suite::NAMES))),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub id: u8,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} [{:>2}] {}: {}", self.id, self.name, self.detail)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub suite: Suite,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

pub fn run_suite(suite: Suite, seed: u64) -> VerifyReport {
    let checks: Vec<CheckResult> = suite.criteria().iter().map(|&id| run_check(id, seed)).collect();
    VerifyReport { suite, seed, passed: checks.iter().all(|c| c.passed), checks }
}

pub const CHECK_NAMES: [&str; 13] = [
    "V_q annihilates mu^alpha",
    "Euler exponential",
    "q^n expansion",
    "Gleason decomposition",
    "Appell identity",
    "negative control",
    "structural identity",
    "Arveson diagonal",
    "Arveson Gram PSD",
    "Halmos J-unitarity",
    "Blaschke factor",
    "star product",
    "rational restriction",
];

/// Runs criterion `id` (1..=13). Numerical errors inside a check count as failure.
pub fn run_check(id: u8, seed: u64) -> CheckResult {
    let mut rng = seeded_rng(seed.wrapping_mul(1_000_003).wrapping_add(id as u64));
    let outcome = match id {
        1 => vq_kernel_check(&mut rng),
        2 => euler_exponential_check(&mut rng),
        3 => expansion_check(&mut rng),
        4 => gleason_check(&mut rng),
        5 => appell_check(&mut rng),
        6 => negative_control(),
        7 => structural_check(),
        8 => arveson_diagonal_check(&mut rng),
        9 => gram_psd_check(&mut rng),
        10 => halmos_check(&mut rng),
        11 => blaschke_check(&mut rng),
        12 => star_check(&mut rng),
        13 => rational_check(&mut rng),
        _ => Err(Error::InvalidInput(format!("no criterion {id}"))),
    };
    let name = CHECK_NAMES.get((id as usize).wrapping_sub(1)).copied().unwrap_or("unknown").to_string();
    match outcome {
        Ok((passed, detail)) => CheckResult { id, name, passed, detail },
        Err(e) => CheckResult { id, name, passed: false, detail: format!("error: {e}") },
    }
}

type Outcome = Result<(bool, String)>;

fn points<R: Rng>(rng: &mut R, count: usize, min_vec: f64) -> Vec<PointH> {
    (0..count).map(|_| random_point_h_star(rng, min_vec)).collect()
}

/// Largest `|V_q mu^alpha|` over `|alpha| <= 6` and the given points.
fn kernel_residual(pts: &[PointH], scheme: &FdScheme) -> Result<f64> {
    let mut worst = 0.0f64;
    for x in pts {
        for alpha in MultiIndex::up_to_degree(6) {
            worst = worst.max(apply_vq(&mu_field(alpha), *x, scheme)?.norm());
        }
    }
    Ok(worst)
}

/// Summed `|V_q mu^alpha|` over `|alpha| <= 6` and the given points.
fn kernel_residual_sum(pts: &[PointH], scheme: &FdScheme) -> Result<f64> {
    let mut total = 0.0;
    for x in pts {
        for alpha in MultiIndex::up_to_degree(6) {
            total += apply_vq(&mu_field(alpha), *x, scheme)?.norm();
        }
    }
    Ok(total)
}

/// Steps at which the order-2 residual is dominated by truncation error.
pub const CONVERGENCE_STEPS: [f64; 3] = [2e-3, 1e-3, 5e-4];

fn vq_kernel_check(rng: &mut SeededRng) -> Outcome {
    let pts = points(rng, 50, 0.1);
    let scheme = FdScheme::default();
    let worst = kernel_residual(&pts, &scheme)?;
    let sums = CONVERGENCE_STEPS
        .iter()
        .map(|&h| kernel_residual_sum(&pts, &scheme.with_step(h)?))
        .collect::<Result<Vec<_>>>()?;
    let ratios = [sums[0] / sums[1], sums[1] / sums[2]];
    let converges = ratios.iter().all(|r| (3.0..=5.0).contains(r));
    Ok((
        worst <= 1e-6 && converges,
        format!(
            "max |V_q mu^a| = {worst:.2e} at h = 1e-5 (bound 1e-6); halving ratios {:.3}, {:.3} from h = {:e}",
            ratios[0], ratios[1], CONVERGENCE_STEPS[0]
        ),
    ))
}

fn euler_exponential_check(rng: &mut SeededRng) -> Outcome {
    let mut worst = 0.0f64;
    for x in points(rng, 50, 0.05) {
        for alpha in MultiIndex::up_to_degree(8) {
            let diff = euler_exponential(alpha, x)?.dist(mu_alpha(x, alpha)?);
            worst = worst.max(diff);
        }
    }
    Ok((worst <= 1e-12, format!("max |exp(x0 E / q_vec) x^a - mu^a| = {worst:.2e} over |a| <= 8 (bound 1e-12)")))
}

fn expansion_check(rng: &mut SeededRng) -> Outcome {
    let series = (0..=6).map(expand_qn).collect::<Result<Vec<_>>>()?;
    let mut worst = 0.0f64;
    for x in points(rng, 50, 0.05) {
        let q = x.to_quaternion();
        for (n, s) in series.iter().enumerate() {
            let direct = q.powi(n as u32);
            let rel = s.eval(x)?[(0, 0)].dist(direct) / direct.norm().max(f64::MIN_POSITIVE);
            worst = worst.max(rel);
        }
    }
    Ok((worst <= 1e-10, format!("max relative |sum mu^a c_(a,n) - q^n| = {worst:.2e} for n <= 6 (bound 1e-10)")))
}

fn gleason_check(rng: &mut SeededRng) -> Outcome {
    let scheme = FdScheme::default();
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let (a, b) = random_radial_segment(rng, 0.2);
        for gamma in MultiIndex::up_to_degree(4) {
            worst = worst.max(gleason_defect(&mu_field(gamma), a, b, GLEASON_DEFAULT_NODES, &scheme)?);
        }
    }
    Ok((
        worst <= 1e-7,
        format!("max |f(b) - f(a) - sum mu_u(b-a) R_u f| = {worst:.2e} on 20 radial segments, |g| <= 4 (bound 1e-7)"),
    ))
}

fn appell_check(rng: &mut SeededRng) -> Outcome {
    let scheme = FdScheme::default();
    let mut worst = 0.0f64;
    for x in points(rng, 50, 0.1) {
        let qinv = x.to_quaternion().inv()?;
        for alpha in MultiIndex::up_to_degree(5) {
            let lhs = apply_vq_bar_alt(&mu_field(alpha), x, &scheme)? * 0.5;
            let rhs = qinv * mu_alpha(x, alpha)? * alpha.degree() as f64;
            worst = worst.max(lhs.dist(rhs));
        }
    }
    Ok((worst <= 1e-6, format!("max |V_bar mu^a / 2 - |a| q^-1 mu^a| = {worst:.2e} for |a| <= 5 (bound 1e-6)")))
}

fn negative_control() -> Outcome {
    let x = PointH::new(0.5, 1.0, 1.0, 1.0);
    let r = apply_vq(&dmu1_dx2, x, &FdScheme::default())?.norm();
    Ok((r > 1e-3, format!("|V_q (d mu_1 / d x_2)| = {r:.4e} at (0.5, 1, 1, 1) (must exceed 1e-3)")))
}

fn structural_check() -> Outcome {
    let c = CoefficientFamily::Arveson;
    let mut count = 0;
    let mut nonzero = 0;
    for alpha in MultiIndex::up_to_degree(10).filter(|a| a.degree() > 0) {
        count += 1;
        if !structural_defect(&c, alpha)?.is_zero() {
            nonzero += 1;
        }
    }
    Ok((nonzero == 0 && count == 285, format!("{nonzero} nonzero exact defects among {count} indices with 1 <= |a| <= 10")))
}

fn arveson_diagonal_check(rng: &mut SeededRng) -> Outcome {
    let mut worst_excess = f64::NEG_INFINITY;
    for _ in 0..20 {
        let x = random_point_in_ball(rng, 0.8, 0.05);
        let d = arveson_diag(x, 40)?;
        let exact = 1.0 / (1.0 - x.to_quaternion().norm_sqr());
        let tail = d.tail_bound.ok_or_else(|| Error::DomainError("no tail bound inside the unit ball".into()))?;
        // partial sums approach from below; allow rounding at 1e-12 relative
        let excess = (exact - d.value).abs() - tail - 1e-12 * exact;
        worst_excess = worst_excess.max(excess);
    }
    Ok((
        worst_excess <= 0.0,
        format!("max (|partial - 1/(1-|q|^2)| - tail bound - 1e-12 rel) = {worst_excess:.2e} on 20 points, trunc 40"),
    ))
}

fn gram_psd_check(rng: &mut SeededRng) -> Outcome {
    let mut worst = f64::INFINITY;
    for _ in 0..20 {
        let k = rng.gen_range(1..=6);
        let pts: Vec<_> = (0..k).map(|_| random_point_in_ball(rng, 0.7, 0.05)).collect();
        let g = gram_matrix(&CoefficientFamily::Arveson, &pts, 30)?;
        worst = worst.min(min_eigenvalue(&g, 1e-10)?);
    }
    Ok((worst >= -1e-8, format!("smallest Gram eigenvalue {worst:.3e} over 20 sets (bound -1e-8)")))
}

fn halmos_check(rng: &mut SeededRng) -> Outcome {
    let j = signature_j();
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let a = BlaschkePoint::new(random_point_omega_1(rng, 0.95, 0.05))?;
        let h = halmos(&a);
        let left = (&(&(&h * &j) * &h.adjoint()) - &j).frobenius_norm();
        let right = (&(&(&h.adjoint() * &j) * &h) - &j).frobenius_norm();
        worst = worst.max(left).max(right);
    }
    Ok((worst <= 1e-10, format!("max ||H J H* - J||, ||H* J H - J|| = {worst:.2e} on 20 points (bound 1e-10)")))
}

fn blaschke_check(rng: &mut SeededRng) -> Outcome {
    let id4 = QMatrix::identity(4);
    let (mut unitary, mut coeff, mut vanish) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..10 {
        let a = BlaschkePoint::new(random_point_omega_1(rng, 0.9, 0.05))?;
        let r = blaschke_realization(&a);
        let t = r.colligation();
        unitary = unitary.max((&t * &t.adjoint()).max_abs_diff(&id4)).max((&t.adjoint() * &t).max_abs_diff(&id4));
        coeff = coeff.max(blaschke_series(&a, 12)?.max_coeff_diff(&rational_series(&r, 12)?, 12));

        let slice = BlaschkePoint::new(random_slice_point(rng, 0.9, 0.05))?;
        let av = slice.point().vector();
        vanish = vanish
            .max(blaschke_restrict(&slice, av)?.max_abs())
            .max(rational_restrict(&blaschke_realization(&slice), av)?.max_abs());
    }
    let mut min_eig = f64::INFINITY;
    for _ in 0..3 {
        let a = BlaschkePoint::new(random_point_omega_1(rng, 0.6, 0.05))?;
        let s = blaschke_series(&a, 20)?;
        let k = rng.gen_range(2..=5);
        let pts: Vec<_> = (0..k).map(|_| random_point_in_ball(rng, 0.6, 0.05)).collect();
        let g = multiplier_kernel_gram(&s, &pts, 20)?;
        min_eig = min_eig.min(min_eigenvalue(&g.gram, 1e-9)?);
    }
    let passed = unitary <= 1e-12 && coeff <= 1e-10 && vanish <= 1e-10 && min_eig >= -1e-6;
    Ok((
        passed,
        format!(
            "T unitarity {unitary:.1e} (1e-12); series vs realization {coeff:.1e} to degree 12 (1e-10); \
             restriction at a {vanish:.1e} (1e-10); multiplier Gram min eigenvalue {min_eig:.2e} (-1e-6)"
        ),
    ))
}

fn random_scalar_series<R: Rng>(rng: &mut R, rows: usize, cols: usize, degree: usize) -> Result<FueterSeries> {
    let terms = MultiIndex::up_to_degree(degree).map(|a| (a, random_qmatrix(rng, rows, cols))).collect();
    FueterSeries::from_terms(rows, cols, terms, None)
}

fn star_check(rng: &mut SeededRng) -> Outcome {
    let mut exact = true;
    let all: Vec<_> = MultiIndex::up_to_degree(4).collect();
    for _ in 0..50 {
        let (a, b) = (all[rng.gen_range(0..all.len())], all[rng.gen_range(0..all.len())]);
        let (c, d) = (random_quaternion(rng), random_quaternion(rng));
        let lhs = star_mul(&FueterSeries::monomial(a, QMatrix::scalar(c)), &FueterSeries::monomial(b, QMatrix::scalar(d)))?;
        exact &= lhs == FueterSeries::monomial(a + b, QMatrix::scalar(c * d));
    }
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let f = random_scalar_series(rng, 1, 2, 3)?;
        let g = random_scalar_series(rng, 2, 2, 3)?;
        let fg = star_mul(&f, &g)?;
        for _ in 0..5 {
            let x = random_slice_point(rng, 1.0, 0.05);
            let direct = &f.eval(x)? * &g.eval(x)?;
            worst = worst.max(fg.eval(x)?.max_abs_diff(&direct));
        }
    }
    let e1 = FueterSeries::monomial(MultiIndex::unit(1), QMatrix::scalar(Quaternion::E1));
    let e2 = FueterSeries::monomial(MultiIndex::unit(2), QMatrix::scalar(Quaternion::E2));
    let witness = star_mul(&e1, &e2)? != star_mul(&e2, &e1)?;
    Ok((
        exact && worst <= 1e-12 && witness,
        format!(
            "monomial rule exact: {exact}; max x0 = 0 factorization error {worst:.2e} (1e-12); \
             mu_1 e1 * mu_2 e2 != mu_2 e2 * mu_1 e1: {witness}"
        ),
    ))
}

fn random_realization<R: Rng>(rng: &mut R) -> Result<Realization> {
    let big_n = rng.gen_range(1..=3);
    let n = rng.gen_range(1..=2);
    let m = rng.gen_range(1..=2);
    let blocks: Vec<QMatrix> = (0..3).map(|_| random_qmatrix(rng, big_n, big_n)).collect();
    let total: f64 = blocks.iter().map(|b| b.frobenius_norm()).sum();
    let scale = 0.6 / total;
    let scaled: Vec<QMatrix> = blocks.iter().map(|b| b.scale(scale)).collect();
    let a = QMatrix::vstack(&[&scaled[0], &scaled[1], &scaled[2]])?;
    Realization::new(a, random_qmatrix(rng, 3 * big_n, m), random_qmatrix(rng, n, big_n), random_qmatrix(rng, n, m))
}

fn rational_check(rng: &mut SeededRng) -> Outcome {
    const TRUNC: usize = 12;
    let mut worst_excess = f64::NEG_INFINITY;
    let mut worst_diff = 0.0f64;
    let mut worst_ratio = 0.0f64;
    for _ in 0..20 {
        let r = random_realization(rng)?;
        let series = rational_series(&r, TRUNC)?;
        let x = random_slice_point(rng, 1.0, 0.05);
        let xv = x.vector();
        let diff = rational_restrict(&r, xv)?.max_abs_diff(&series.eval(x)?);
        let bound = rational_tail_bound(&r, xv, TRUNC)
            .ok_or_else(|| Error::DomainError("pencil is not a contraction at the sample".into()))?;
        worst_diff = worst_diff.max(diff);
        worst_ratio = worst_ratio.max(diff / (bound + 1e-12));
        worst_excess = worst_excess.max(diff - bound - 1e-12);
    }
    Ok((
        worst_excess <= 0.0,
        format!(
            "max |restrict - series_{TRUNC}| = {worst_diff:.2e}; max error / tail bound = {worst_ratio:.3} on 20 realizations"
        ),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_parse_and_cover_all_criteria() {
        for name in Suite::NAMES {
            assert!(name.parse::<Suite>().is_ok());
        }
        assert!("nope".parse::<Suite>().is_err());
        let mut ids: Vec<u8> = [Suite::Fueter, Suite::Operators, Suite::Ck, Suite::Kernel, Suite::Blaschke, Suite::Rational]
            .iter()
            .flat_map(|s| s.criteria().iter().copied())
            .collect();
        ids.sort();
        assert_eq!(ids, Suite::All.criteria());
    }

    #[test]
    fn unknown_check_fails_cleanly() {
        let r = run_check(99, 0);
        assert!(!r.passed);
        assert!(r.to_string().starts_with("FAIL [99]"));
    }

    #[test]
    fn cheap_checks_pass() {
        for id in [6, 7, 12] {
            let r = run_check(id, 5);
            assert!(r.passed, "{r}");
        }
    }
}
