use proptest::prelude::*;
use vq_core::quat::{complexify, rank1_spectral, symmetric_product, QMatrix, Quaternion};

fn quat() -> impl Strategy<Value = Quaternion> {
    prop::array::uniform4(-2.0f64..2.0).prop_map(Quaternion::from)
}

fn qmatrix(rows: usize, cols: usize) -> impl Strategy<Value = QMatrix> {
    prop::collection::vec(quat(), rows * cols).prop_map(move |d| QMatrix::from_vec(rows, cols, d).unwrap())
}

proptest! {
    #[test]
    fn modulus_is_multiplicative(p in quat(), q in quat()) {
        let lhs = (p * q).norm();
        let rhs = p.norm() * q.norm();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1e-300));
    }

    #[test]
    fn conjugation_reverses_products(p in quat(), q in quat()) {
        prop_assert!((p * q).conj().dist(q.conj() * p.conj()) < 1e-14);
        let n = p.conj() * p;
        prop_assert!(n.vec_part().norm() <= 1e-15 * p.norm_sqr().max(1.0));
    }

    #[test]
    fn inverse_is_two_sided(q in quat()) {
        prop_assume!(q.norm() > 1e-3);
        let inv = q.inv().unwrap();
        prop_assert!((q * inv).dist(Quaternion::ONE) < 1e-12);
        prop_assert!((inv * q).dist(Quaternion::ONE) < 1e-12);
    }

    #[test]
    fn symmetric_product_ignores_order(qs in prop::collection::vec(quat(), 1..=5), shuffles in prop::collection::vec(any::<prop::sample::Index>(), 10)) {
        let base = symmetric_product(&qs).unwrap();
        let mut perm = qs.clone();
        for (k, idx) in shuffles.iter().enumerate() {
            let j = idx.index(perm.len());
            let i = k % perm.len();
            perm.swap(i, j);
            prop_assert!(symmetric_product(&perm).unwrap().dist(base) <= 1e-12 * (1.0 + base.norm()) * 32.0);
        }
    }

    #[test]
    fn rank1_square_root(v in prop::array::uniform3(quat()), scale in 0.0f64..0.999) {
        let row = QMatrix::row_vector(&v);
        let n = row.frobenius_norm();
        prop_assume!(n > 0.0);
        let row = row.scale(scale / n);
        let r = rank1_spectral(&row, f64::sqrt).unwrap();
        let target = &QMatrix::identity(3) - &(&row.adjoint() * &row);
        prop_assert!((&r * &r).max_abs_diff(&target) < 1e-12);
    }

    #[test]
    fn complexify_is_a_star_homomorphism(m in qmatrix(3, 2), n in qmatrix(2, 4)) {
        let lhs = complexify(&(&m * &n));
        let rhs = complexify(&m).matmul(&complexify(&n)).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        prop_assert!(complexify(&m.adjoint()).max_abs_diff(&complexify(&m).adjoint()) < 1e-15);
    }

    #[test]
    fn adjoint_identities(m in qmatrix(2, 3), n in qmatrix(3, 2)) {
        prop_assert_eq!(m.adjoint().adjoint(), m.clone());
        prop_assert!((&m * &n).adjoint().max_abs_diff(&(&n.adjoint() * &m.adjoint())) < 1e-13);
    }

    #[test]
    fn json_round_trip_is_byte_identical(m in qmatrix(2, 2)) {
        let text = serde_json::to_string(&m).unwrap();
        let back: QMatrix = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }
}
