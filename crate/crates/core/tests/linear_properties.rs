use num_bigint::BigInt;
use proptest::prelude::*;

use schurpair::linear::{homology, smith_normal_form, IntMatrix, SparseIntMatrix};

fn matrix(max_dim: usize, bound: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| {
        prop::collection::vec(prop::collection::vec(-bound..=bound, c), r)
    })
}

fn sparse(rows: &[Vec<i64>]) -> SparseIntMatrix {
    SparseIntMatrix::from_dense(&IntMatrix::from_i64_rows(rows))
}

fn permuted(a: &[Vec<i64>], rows: &[usize], cols: &[usize]) -> Vec<Vec<i64>> {
    rows.iter()
        .map(|&i| cols.iter().map(|&j| a[i][j]).collect())
        .collect()
}

fn shuffled(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn invariants_form_a_divisor_chain(a in matrix(6, 20)) {
        let snf = smith_normal_form(&sparse(&a), false);
        prop_assert_eq!(snf.rank, snf.invariants.len());
        prop_assert!(snf.invariants.iter().all(|d| *d > BigInt::from(0)));
        prop_assert!(snf.invariants.windows(2).all(|w| (&w[1] % &w[0]) == BigInt::from(0)));
    }

    #[test]
    fn both_routes_agree(a in matrix(6, 20)) {
        let m = sparse(&a);
        prop_assert_eq!(smith_normal_form(&m, false).invariants, smith_normal_form(&m, true).invariants);
    }

    #[test]
    fn permutation_and_transpose_invariance(
        (a, rows, cols) in matrix(5, 9).prop_flat_map(|a| {
            let (r, c) = (a.len(), a[0].len());
            (Just(a), shuffled(r), shuffled(c))
        })
    ) {
        let base = smith_normal_form(&sparse(&a), false).invariants;
        let p = permuted(&a, &rows, &cols);
        prop_assert_eq!(&smith_normal_form(&sparse(&p), false).invariants, &base);
        prop_assert_eq!(&smith_normal_form(&sparse(&a).transpose(), true).invariants, &base);
    }

    #[test]
    fn transforms_reconstruct_the_diagonal(a in matrix(5, 9)) {
        let dense = IntMatrix::from_i64_rows(&a);
        let snf = smith_normal_form(&SparseIntMatrix::from_dense(&dense), true);
        let t = snf.transforms.unwrap();
        prop_assert_eq!(t.u.determinant().abs(), 1i64.into());
        prop_assert_eq!(t.v.determinant().abs(), 1i64.into());
        let mut diag = IntMatrix::zeros(dense.rows(), dense.cols());
        for (i, d) in snf.invariants.iter().enumerate() {
            diag.set(i, i, d.into());
        }
        prop_assert_eq!(t.u.mul(&dense).mul(&t.v), diag);
    }

    #[test]
    fn homology_with_a_zero_map(a in matrix(5, 9)) {
        let m = sparse(&a);
        let snf = smith_normal_form(&m, false);
        // Only an incoming map: the cokernel of `a`.
        let coker = homology(&SparseIntMatrix::zero(1, m.rows()), &m).unwrap();
        let torsion: Vec<u64> = snf.torsion().map(|d| u64::try_from(d).unwrap()).collect();
        prop_assert_eq!(coker.torsion.order(), torsion.iter().map(|&d| d as u128).product::<u128>());
        prop_assert_eq!(coker.free_rank, m.rows() - snf.rank);
        // Only an outgoing map: the kernel of `a`, which is free.
        let kernel = homology(&m, &SparseIntMatrix::zero(m.cols(), 1)).unwrap();
        prop_assert!(kernel.torsion.is_trivial());
        prop_assert_eq!(kernel.free_rank, m.cols() - snf.rank);
    }

    #[test]
    fn coordinate_dump_round_trip(a in matrix(6, 1000)) {
        let m = sparse(&a);
        prop_assert_eq!(SparseIntMatrix::parse_coordinate_text(&m.to_coordinate_text()).unwrap(), m);
    }

    #[test]
    fn dump_parser_never_panics(text in "[0-9 \\-\\n]{0,60}") {
        let _ = SparseIntMatrix::parse_coordinate_text(&text);
    }
}
