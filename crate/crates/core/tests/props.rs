//! Property-based checks for the algebraic substrate: field axioms through
//! serialized strings, linear-algebra identities, lattice modularity, the
//! q-binomial recurrence, and log-scale arithmetic against a float oracle.

use num_bigint::BigUint;
use proptest::prelude::*;

use qmatroid::bounds::LogValue;
use qmatroid::field::FieldSpec;
use qmatroid::json::{element_from_str, element_to_string};
use qmatroid::lattice::{gaussian_binomial, Subspace};
use qmatroid::matrix::Matrix;
use qmatroid::zeropattern::ZeroPattern;

fn small_field() -> impl Strategy<Value = FieldSpec> {
    prop_oneof![
        Just(FieldSpec::new(2, 1).unwrap()),
        Just(FieldSpec::new(2, 2).unwrap()),
        Just(FieldSpec::new(2, 4).unwrap()),
        Just(FieldSpec::new(3, 1).unwrap()),
        Just(FieldSpec::new(3, 2).unwrap()),
        Just(FieldSpec::new(5, 1).unwrap()),
        Just(FieldSpec::new(7, 1).unwrap()),
    ]
}

fn matrix_in(field: FieldSpec, rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    let order = field.order();
    proptest::collection::vec(0..order, rows * cols)
        .prop_map(move |codes| Matrix::from_codes(field.clone(), rows, cols, &codes).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn element_strings_roundtrip(field in small_field(), raw in 0u64..10_000) {
        let code = raw % field.order();
        let s = element_to_string(&field, code).unwrap();
        prop_assert_eq!(s.len(), field.e() as usize);
        prop_assert_eq!(element_from_str(&field, &s).unwrap(), code);
    }

    #[test]
    fn field_arithmetic_is_a_field(field in small_field(), a_raw in 0u64..10_000, b_raw in 0u64..10_000) {
        let a = field.element(a_raw % field.order()).unwrap();
        let b = field.element(b_raw % field.order()).unwrap();
        prop_assert_eq!(field.add(a, b), field.add(b, a));
        prop_assert_eq!(field.mul(a, b), field.mul(b, a));
        prop_assert_eq!(field.add(a, field.neg(a)), field.zero());
        if b.code() != 0 {
            let q = field.div(a, b).unwrap();
            prop_assert_eq!(field.mul(q, b), a);
        }
        // Distributivity through a fixed third element.
        let c = field.primitive_element();
        let lhs = field.mul(c, field.add(a, b));
        let rhs = field.add(field.mul(c, a), field.mul(c, b));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn rref_is_idempotent_and_rank_transposes(
        (field, rows, cols) in (small_field(), 1usize..4, 1usize..5),
        seed in 0u64..1_000_000,
    ) {
        let order = field.order();
        let codes: Vec<u64> = (0..rows * cols)
            .map(|i| (seed.wrapping_mul(6364136223846793005).wrapping_add(i as u64 * 1442695040888963407) >> 33) % order)
            .collect();
        let m = Matrix::from_codes(field.clone(), rows, cols, &codes).unwrap();
        let (r, pivots) = m.rref();
        let (rr, pivots2) = r.rref();
        prop_assert_eq!(&r, &rr, "rref not idempotent");
        prop_assert_eq!(pivots, pivots2);
        prop_assert_eq!(m.rank(), m.transpose().rank(), "rank differs under transpose");

        // Kernel vectors really annihilate the matrix.
        let kernel = m.kernel_basis();
        if kernel.rows() > 0 {
            let prod = m.mat_mul(&kernel.transpose()).unwrap();
            for i in 0..prod.rows() {
                for j in 0..prod.cols() {
                    prop_assert_eq!(prod.get(i, j).code(), 0, "kernel vector not annihilated");
                }
            }
        }
        prop_assert_eq!(m.rank() + kernel.rows(), cols, "rank-nullity");
    }

    #[test]
    fn subspace_lattice_is_modular(
        a in matrix_in(FieldSpec::new(2, 1).unwrap(), 2, 4),
        b in matrix_in(FieldSpec::new(2, 1).unwrap(), 2, 4),
    ) {
        let v = Subspace::from_rows(&a);
        let w = Subspace::from_rows(&b);
        let sum = v.sum(&w).unwrap();
        let meet = v.intersect(&w).unwrap();
        prop_assert_eq!(v.dim() + w.dim(), sum.dim() + meet.dim(), "modular law");
        prop_assert!(sum.contains(&v) && sum.contains(&w));
        prop_assert!(v.contains(&meet) && w.contains(&meet));
        let dist = v.subspace_distance(&w).unwrap();
        prop_assert_eq!(dist, v.dim() + w.dim() - 2 * meet.dim());
        // Orthogonal complement pairs dimensions and annihilates.
        let perp = v.ortho_complement();
        prop_assert_eq!(v.dim() + perp.dim(), 4);
        prop_assert_eq!(v.intersect(&v.ortho_complement().ortho_complement()).unwrap().dim(), v.dim());
    }

    #[test]
    fn gaussian_binomials_satisfy_symmetry_and_recurrence(n in 1u64..12, k in 0u64..12, q in 2u64..6) {
        prop_assume!(k <= n);
        let gb = |n: u64, k: u64| gaussian_binomial(n, k, q).unwrap();
        prop_assert_eq!(gb(n, k), gb(n, n - k), "symmetry");
        if k >= 1 {
            let rhs = gb(n - 1, k - 1) + BigUint::from(q).pow(k as u32) * gb(n - 1, k);
            prop_assert_eq!(gb(n, k), rhs, "Pascal recurrence");
        }
    }

    #[test]
    fn log_values_track_a_float_oracle(a in 1u64..1_000_000, b in 1u64..1_000_000, num in 1u128..50, den in 1u128..50) {
        let la = LogValue::log2_of(a);
        let lb = LogValue::log2_of(b);
        let sum = &la + &lb;
        prop_assert!((sum.to_f64() - (a as f64 * b as f64).log2()).abs() < 1e-9);
        let scaled = la.scale(num, den);
        prop_assert!((scaled.to_f64() - (a as f64).log2() * num as f64 / den as f64).abs() < 1e-9);
        let lsum = LogValue::log2_sum(&[la.clone(), lb.clone()]);
        prop_assert!((lsum.to_f64() - (a as f64 + b as f64).log2()).abs() < 1e-9);
        prop_assert!(lsum >= la.max(lb));
    }

    #[test]
    fn zero_patterns_roundtrip_and_order_consistently(symbols in proptest::collection::vec(0u8..2, 0..12)) {
        let rendered: String = symbols.iter().map(|&s| if s == 0 { '0' } else { '*' }).collect();
        let p = ZeroPattern::parse(&rendered).unwrap();
        prop_assert_eq!(p.to_string(), rendered);
        prop_assert_eq!(p.zero_count(), symbols.iter().filter(|&&s| s == 0).count());
    }
}
