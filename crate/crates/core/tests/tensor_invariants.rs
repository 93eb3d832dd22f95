use gme_core::states::{random_mixed, random_pure};
use gme_core::tensor::{
    hermitian_eigen, hermitian_eigenvalues, partial_trace, partial_transpose, purity, trace_norm,
    SubsetMask, SystemShape,
};
use proptest::prelude::*;

fn shape_strategy() -> impl Strategy<Value = SystemShape> {
    prop_oneof![
        Just(vec![2, 2]),
        Just(vec![2, 3]),
        Just(vec![3, 2, 2]),
        Just(vec![2, 2, 2]),
        Just(vec![3, 3]),
        Just(vec![2, 2, 2, 2]),
    ]
    .prop_map(|dims| SystemShape::new(dims).unwrap())
}

fn cut_of(shape: &SystemShape, raw: u32) -> SubsetMask {
    let full = shape.full_bits();
    SubsetMask::new(1 + raw % (full - 1), shape.parties()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn marginals_keep_unit_trace(shape in shape_strategy(), seed in any::<u64>(), raw in any::<u32>(), rank in 1usize..4) {
        let rho = random_mixed(&shape, rank, seed);
        let cut = cut_of(&shape, raw);
        let tr = partial_trace(rho.matrix(), &shape, cut.complement()).unwrap().trace();
        prop_assert!((tr.re - 1.0).abs() < 1e-12 && tr.im.abs() < 1e-12);
    }

    #[test]
    fn complementary_marginals_share_purity(shape in shape_strategy(), seed in any::<u64>(), raw in any::<u32>()) {
        let psi = random_pure(&shape, seed).projector();
        let cut = cut_of(&shape, raw);
        let a = purity(&partial_trace(&psi, &shape, cut).unwrap()).unwrap();
        let b = purity(&partial_trace(&psi, &shape, cut.complement()).unwrap()).unwrap();
        prop_assert!((a - b).abs() < 1e-10);
    }

    #[test]
    fn partial_transpose_involution(shape in shape_strategy(), seed in any::<u64>(), raw in any::<u32>(), rank in 1usize..4) {
        let rho = random_mixed(&shape, rank, seed);
        let cut = cut_of(&shape, raw);
        let pt = partial_transpose(rho.matrix(), &shape, cut).unwrap();
        prop_assert!(pt.hermiticity_deviation() < 1e-14);
        prop_assert!((pt.trace().re - 1.0).abs() < 1e-12);
        prop_assert_eq!(&partial_transpose(&pt, &shape, cut).unwrap(), rho.matrix());
    }

    #[test]
    fn pt_trace_norm_at_least_one(shape in shape_strategy(), seed in any::<u64>(), raw in any::<u32>(), rank in 1usize..5) {
        let rho = random_mixed(&shape, rank, seed);
        let cut = cut_of(&shape, raw);
        let pt = partial_transpose(rho.matrix(), &shape, cut).unwrap();
        let norm = trace_norm(&pt).unwrap();
        prop_assert!(norm >= 1.0 - 1e-10);
        if (norm - 1.0).abs() <= 1e-10 {
            let min = hermitian_eigenvalues(&pt).unwrap()[0];
            prop_assert!(min >= -1e-10);
        }
    }

    #[test]
    fn eigenvalues_sum_to_trace(shape in shape_strategy(), seed in any::<u64>(), rank in 1usize..5) {
        let rho = random_mixed(&shape, rank, seed);
        let e = hermitian_eigen(rho.matrix()).unwrap();
        let sum: f64 = e.values.iter().sum();
        prop_assert!((sum - rho.matrix().trace().re).abs() < 1e-10);
        prop_assert!((&e.reconstruct() - rho.matrix()).max_abs() < 1e-9);
    }
}

#[test]
fn reconstruction_at_dimension_64() {
    let shape = SystemShape::uniform(6, 2).unwrap();
    let rho = random_mixed(&shape, 10, 42);
    let e = hermitian_eigen(rho.matrix()).unwrap();
    assert!((&e.reconstruct() - rho.matrix()).max_abs() < 1e-9);
}
