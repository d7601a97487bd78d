mod common;

use common::brute_pfaffian;
use condensation::algebra::{
    determinant, determinant_by_elimination, determinant_by_permutations, enumerate_one_factors, pfaffian,
    pfaffian_by_expansion, pfaffian_by_pairings, pfaffian_collapses_to_determinant, OneFactor, SquareMatrix,
    TriangularArray,
};
use condensation::scalar::int;
use condensation::Scalar;
use num_traits::Zero;
use proptest::prelude::*;

fn small_entry() -> impl Strategy<Value = Scalar> {
    (-4i64..5, 1i64..4).prop_map(|(p, q)| Scalar::new(p.into(), q.into()))
}

fn skew(n: usize) -> impl Strategy<Value = Vec<Vec<Scalar>>> {
    prop::collection::vec(small_entry(), n * n).prop_map(move |flat| {
        let mut a = vec![vec![Scalar::zero(); n]; n];
        for i in 0..n {
            for j in i + 1..n {
                a[i][j] = flat[i * n + j].clone();
                a[j][i] = -flat[i * n + j].clone();
            }
        }
        a
    })
}

fn triangular(a: &[Vec<Scalar>]) -> TriangularArray {
    TriangularArray::from_fn(a.len(), |i, j| a[i - 1][j - 1].clone())
}

fn square(n: usize) -> impl Strategy<Value = SquareMatrix> {
    prop::collection::vec(small_entry(), n * n)
        .prop_map(move |flat| SquareMatrix::from_fn(n, |i, j| flat[(i - 1) * n + (j - 1)].clone()))
}

proptest! {
    #[test]
    fn pfaffian_routes_agree(a in (0usize..5).prop_flat_map(|h| skew(2 * h))) {
        let t = triangular(&a);
        let oracle = brute_pfaffian(&a);
        prop_assert_eq!(&pfaffian_by_pairings(&t).unwrap(), &oracle);
        prop_assert_eq!(&pfaffian_by_expansion(&t).unwrap(), &oracle);
        // Pf(A)^2 = det(A)
        let full = SquareMatrix::from_fn(a.len(), |i, j| a[i - 1][j - 1].clone());
        prop_assert_eq!(determinant(&full).unwrap(), &oracle * &oracle);
    }

    #[test]
    fn determinant_routes_agree(m in (0usize..6).prop_flat_map(square)) {
        prop_assert_eq!(determinant_by_permutations(&m), determinant_by_elimination(&m));
        let n = m.dim();
        let transposed = SquareMatrix::from_fn(n, |i, j| m.get(j, i).clone());
        prop_assert_eq!(determinant(&transposed).unwrap(), determinant(&m).unwrap());
    }

    #[test]
    fn determinant_is_multiplicative(pair in (1usize..5).prop_flat_map(|n| (square(n), square(n)))) {
        let (x, y) = pair;
        let n = x.dim();
        let product = SquareMatrix::from_fn(n, |i, j| (1..=n).map(|k| x.get(i, k) * y.get(k, j)).sum());
        prop_assert_eq!(determinant(&product).unwrap(), determinant(&x).unwrap() * determinant(&y).unwrap());
    }

    #[test]
    fn pfaffian_collapses_on_bipartite_pattern(m in (1usize..5).prop_flat_map(square)) {
        let n = m.dim();
        let t = TriangularArray::from_fn(2 * n, |i, j| {
            if i <= n && j > n { m.get(i, 2 * n + 1 - j).clone() } else { Scalar::zero() }
        });
        let (pf, det) = pfaffian_collapses_to_determinant(&t, n).unwrap();
        prop_assert_eq!(&pf, &det);
        prop_assert_eq!(det, determinant_by_permutations(&m));
    }

    #[test]
    fn resolving_a_crossing_flips_the_sign(idx in 0usize..945, pick in (0usize..5, 0usize..5)) {
        let factors = enumerate_one_factors(10).unwrap();
        let f = &factors[idx];
        let (x, y) = (f.pairs()[pick.0], f.pairs()[pick.1]);
        prop_assume!(x != y);
        let ((a, b), (c, d)) = if x < y { (x, y) } else { (y, x) };
        prop_assume!(a < c && c < b && b < d);
        // crossing chords (a,b), (c,d) uncross either way; both flip parity
        for g in [f.swap_pairs((a, b), (c, d)).unwrap(), f.swap_pairs((a, b), (d, c)).unwrap()] {
            prop_assert_eq!(g.sign(), -f.sign());
        }
    }
}

#[test]
fn one_factor_counts() {
    for (n, expected) in [(2, 1), (4, 3), (6, 15), (8, 105), (10, 945)] {
        let all = enumerate_one_factors(n).unwrap();
        assert_eq!(all.len(), expected);
        let mut sorted = all.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), expected);
    }
    assert!(enumerate_one_factors(3).is_err());
    assert!(OneFactor::new([(1, 2), (2, 3)]).is_err());
}

#[test]
fn pfaffian_of_order_four() {
    let vals = [[0, 2, 3, 5], [0, 0, 7, 11], [0, 0, 0, 13], [0, 0, 0, 0]];
    let t = TriangularArray::from_fn(4, |i, j| int(vals[i - 1][j - 1]));
    // a12 a34 - a13 a24 + a14 a23
    let expected = int(2 * 13 - 3 * 11 + 5 * 7);
    assert_eq!(pfaffian(&t).unwrap(), expected);
    assert_eq!(pfaffian(&TriangularArray::zeros(0)).unwrap(), int(1));
    assert!(pfaffian(&TriangularArray::zeros(3)).is_err());
}

#[test]
fn collapse_rejects_entries_inside_blocks() {
    let t = TriangularArray::from_fn(4, |i, j| if (i, j) == (1, 2) { int(1) } else { int(0) });
    assert!(pfaffian_collapses_to_determinant(&t, 2).is_err());
}
