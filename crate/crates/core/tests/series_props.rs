use proptest::prelude::*;
use vq_core::fueter::{expand_qn, MultiIndex, PointH};
use vq_core::ops::{apply_vq, FdScheme};
use vq_core::sample::{random_point_in_ball, random_qmatrix, random_quaternion, seeded_rng};
use vq_core::schur::word_sum;
use vq_core::series::{scalar_series, star_mul, star_resolvent};
use vq_core::{FueterSeries, QMatrix};

fn random_series(seed: u64, degree: usize, rows: usize, cols: usize) -> FueterSeries {
    let mut rng = seeded_rng(seed);
    let terms = MultiIndex::up_to_degree(degree).map(|a| (a, random_qmatrix(&mut rng, rows, cols))).collect();
    FueterSeries::from_terms(rows, cols, terms, None).unwrap()
}

fn close(a: &FueterSeries, b: &FueterSeries, tol: f64) -> bool {
    let d = a.max_degree().unwrap_or(0).max(b.max_degree().unwrap_or(0));
    a.max_coeff_diff(b, d) <= tol
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn star_product_is_associative(seed in any::<u64>()) {
        let f = random_series(seed, 2, 2, 3);
        let g = random_series(seed ^ 1, 2, 3, 1);
        let h = random_series(seed ^ 2, 2, 1, 2);
        let left = star_mul(&star_mul(&f, &g).unwrap(), &h).unwrap();
        let right = star_mul(&f, &star_mul(&g, &h).unwrap()).unwrap();
        prop_assert!(close(&left, &right, 1e-12));
    }

    #[test]
    fn star_product_is_bilinear(seed in any::<u64>(), s in -2.0f64..2.0) {
        let f = random_series(seed, 2, 2, 2);
        let f2 = random_series(seed ^ 3, 3, 2, 2);
        let g = random_series(seed ^ 4, 2, 2, 2);
        let lhs = star_mul(&f.scale(s).try_add(&f2).unwrap(), &g).unwrap();
        let rhs = star_mul(&f, &g).unwrap().scale(s).try_add(&star_mul(&f2, &g).unwrap()).unwrap();
        prop_assert!(close(&lhs, &rhs, 1e-12));
        let lhs = star_mul(&g, &f.try_add(&f2).unwrap()).unwrap();
        let rhs = star_mul(&g, &f).unwrap().try_add(&star_mul(&g, &f2).unwrap()).unwrap();
        prop_assert!(close(&lhs, &rhs, 1e-12));
    }

    #[test]
    fn powers_multiply_under_star(n in 0usize..=4, m in 0usize..=4) {
        let prod = star_mul(&expand_qn(n).unwrap(), &expand_qn(m).unwrap()).unwrap();
        prop_assert!(close(&prod, &expand_qn(n + m).unwrap(), 1e-12));
    }

    #[test]
    fn series_are_regular(seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let terms: Vec<_> = MultiIndex::up_to_degree(4).map(|a| (a, random_quaternion(&mut rng))).collect();
        let f = scalar_series(terms).unwrap();
        let x = random_point_in_ball(&mut rng, 1.0, 0.3);
        let field = |p: PointH| f.eval(p).map(|m| m[(0, 0)]);
        let v = apply_vq(&field, x, &FdScheme::new(1e-4, 4).unwrap()).unwrap();
        prop_assert!(v.norm() < 1e-6, "{v:?}");
    }

    #[test]
    fn resolvent_coefficients_are_word_sums(seed in any::<u64>(), big_n in 1usize..=3) {
        let mut rng = seeded_rng(seed);
        let blocks: [QMatrix; 3] = std::array::from_fn(|_| random_qmatrix(&mut rng, big_n, big_n).scale(0.4));
        let stacked = QMatrix::vstack(&[&blocks[0], &blocks[1], &blocks[2]]).unwrap();
        let r = star_resolvent(&stacked, 4).unwrap();
        for alpha in MultiIndex::up_to_degree(4) {
            let want = word_sum(&blocks, alpha, big_n);
            prop_assert!(r.coefficient_or_zero(alpha).max_abs_diff(&want) < 1e-12);
        }
    }

    #[test]
    fn json_round_trip_is_byte_identical(seed in any::<u64>()) {
        let f = random_series(seed, 3, 2, 1).truncate(2);
        let text = serde_json::to_string(&f).unwrap();
        let back: FueterSeries = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(serde_json::to_string(&back).unwrap(), text);
        prop_assert_eq!(back, f);
    }
}
