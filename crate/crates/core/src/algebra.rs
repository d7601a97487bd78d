//! Pairings, Pfaffians and determinants over exact rationals.
//!
//! Each quantity has two independent evaluation routes. [`pfaffian`] and
//! [`determinant`] run both where the cheap one is affordable and refuse to
//! return a value the routes disagree on.

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Largest dimension for which the Pfaffian is also summed over all pairings.
pub const PAIRING_SUM_MAX: usize = 12;

/// Largest dimension for which the determinant is also summed over all
/// permutations.
pub const PERMUTATION_SUM_MAX: usize = 6;

/// A partition of `{1, ..., n}` into pairs `(i, j)` with `i < j`, sorted by
/// first element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OneFactor {
    pairs: Vec<(usize, usize)>,
}

impl OneFactor {
    /// Validates that `pairs` partition `{1, ..., n}` for some even `n`.
    pub fn new(pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<OneFactor> {
        let mut pairs: Vec<(usize, usize)> = pairs
            .into_iter()
            .map(|(a, b)| if a < b { (a, b) } else { (b, a) })
            .collect();
        pairs.sort();
        let n = pairs.len() * 2;
        let mut seen = vec![false; n + 1];
        for &(a, b) in &pairs {
            for x in [a, b] {
                if x == 0 || x > n || std::mem::replace(&mut seen[x], true) {
                    return Err(Error::InvalidArgument(format!(
                        "pairs do not partition 1..={n}"
                    )));
                }
            }
        }
        Ok(OneFactor { pairs })
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn size(&self) -> usize {
        self.pairs.len() * 2
    }

    /// The element paired with `x`.
    pub fn partner(&self, x: usize) -> Option<usize> {
        self.pairs.iter().find_map(|&(a, b)| {
            if a == x {
                Some(b)
            } else if b == x {
                Some(a)
            } else {
                None
            }
        })
    }

    /// Number of pairs `(a, b)`, `(c, d)` with `a < c < b < d`: crossing
    /// chords when `1..=n` sit around a circle.
    pub fn crossing_number(&self) -> usize {
        let p = &self.pairs;
        let mut count = 0;
        for x in 0..p.len() {
            for y in 0..p.len() {
                let ((a, b), (c, d)) = (p[x], p[y]);
                if a < c && c < b && b < d {
                    count += 1;
                }
            }
        }
        count
    }

    /// `+1` or `-1` according to the parity of the crossing number.
    pub fn sign(&self) -> i8 {
        if self.crossing_number() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Replaces pairs `(i, j)` and `(k, l)` by `(i, k)` and `(j, l)`.
    pub fn swap_pairs(&self, (i, j): (usize, usize), (k, l): (usize, usize)) -> Result<OneFactor> {
        let norm = |a: usize, b: usize| if a < b { (a, b) } else { (b, a) };
        let (ij, kl) = (norm(i, j), norm(k, l));
        if !self.pairs.contains(&ij) || !self.pairs.contains(&kl) || ij == kl {
            return Err(Error::InvalidArgument("pairs to swap are not in the factor".into()));
        }
        let rest = self.pairs.iter().copied().filter(|&p| p != ij && p != kl);
        OneFactor::new(rest.chain([norm(i, k), norm(j, l)]))
    }
}

impl fmt::Display for OneFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (n, (a, b)) in self.pairs.iter().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "({a},{b})")?;
        }
        write!(f, "}}")
    }
}

/// All `(n-1)!!` one-factors of `{1, ..., n}` in lexicographic order.
pub fn enumerate_one_factors(n: usize) -> Result<Vec<OneFactor>> {
    if n % 2 == 1 || n == 0 {
        return Err(Error::InvalidArgument(format!(
            "one-factors need an even positive size, got {n}"
        )));
    }
    let mut out = Vec::new();
    let mut free: Vec<usize> = (1..=n).collect();
    let mut current = Vec::new();
    one_factors_rec(&mut free, &mut current, &mut out);
    Ok(out)
}

fn one_factors_rec(free: &mut Vec<usize>, current: &mut Vec<(usize, usize)>, out: &mut Vec<OneFactor>) {
    if free.is_empty() {
        out.push(OneFactor { pairs: current.clone() });
        return;
    }
    let first = free.remove(0);
    for idx in 0..free.len() {
        let partner = free.remove(idx);
        current.push((first, partner));
        one_factors_rec(free, current, out);
        current.pop();
        free.insert(idx, partner);
    }
    free.insert(0, first);
}

pub fn crossing_number(f: &OneFactor) -> usize {
    f.crossing_number()
}

/// Strict upper triangle of an even-dimensional array, indexed from 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangularArray {
    n: usize,
    entries: Vec<Scalar>,
}

impl TriangularArray {
    pub fn zeros(n: usize) -> TriangularArray {
        TriangularArray {
            n,
            entries: vec![Scalar::zero(); n * n.saturating_sub(1) / 2],
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> TriangularArray {
        let mut t = TriangularArray::zeros(n);
        for i in 1..=n {
            for j in i + 1..=n {
                t.set(i, j, f(i, j));
            }
        }
        t
    }

    pub fn from_fallible_fn(
        n: usize,
        mut f: impl FnMut(usize, usize) -> Result<Scalar>,
    ) -> Result<TriangularArray> {
        let mut t = TriangularArray::zeros(n);
        for i in 1..=n {
            for j in i + 1..=n {
                t.set(i, j, f(i, j)?);
            }
        }
        Ok(t)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    fn offset(&self, i: usize, j: usize) -> usize {
        assert!(1 <= i && i < j && j <= self.n, "({i},{j}) outside strict upper triangle");
        // rows 1..i-1 hold (n-1) + (n-2) + ... entries
        let before = (i - 1) * (2 * self.n - i) / 2;
        before + (j - i - 1)
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[self.offset(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Scalar) {
        let k = self.offset(i, j);
        self.entries[k] = value;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareMatrix {
    n: usize,
    entries: Vec<Scalar>,
}

impl SquareMatrix {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> SquareMatrix {
        let mut entries = Vec::with_capacity(n * n);
        for i in 1..=n {
            for j in 1..=n {
                entries.push(f(i, j));
            }
        }
        SquareMatrix { n, entries }
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<SquareMatrix> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidArgument("matrix is not square".into()));
        }
        Ok(SquareMatrix {
            n,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn identity(n: usize) -> SquareMatrix {
        SquareMatrix::from_fn(n, |i, j| if i == j { Scalar::one() } else { Scalar::zero() })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Entry at 1-based `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[(i - 1) * self.n + (j - 1)]
    }
}

/// Pfaffian as the signed sum over one-factors of products of entries.
pub fn pfaffian_by_pairings(t: &TriangularArray) -> Result<Scalar> {
    if t.n % 2 == 1 {
        return Err(Error::InvalidArgument(format!("Pfaffian of odd dimension {}", t.n)));
    }
    if t.n == 0 {
        return Ok(Scalar::one());
    }
    let mut total = Scalar::zero();
    for f in enumerate_one_factors(t.n)? {
        let mut term = Scalar::one();
        for &(i, j) in f.pairs() {
            term *= t.get(i, j);
            if term.is_zero() {
                break;
            }
        }
        if f.sign() < 0 {
            total -= term;
        } else {
            total += term;
        }
    }
    Ok(total)
}

/// Pfaffian by expansion along the first remaining row, memoized on the set
/// of remaining indices.
pub fn pfaffian_by_expansion(t: &TriangularArray) -> Result<Scalar> {
    if t.n % 2 == 1 {
        return Err(Error::InvalidArgument(format!("Pfaffian of odd dimension {}", t.n)));
    }
    if t.n > 63 {
        return Err(Error::InvalidArgument(format!("dimension {} too large", t.n)));
    }
    let mut memo = HashMap::new();
    let all = if t.n == 0 { 0 } else { (1u64 << t.n) - 1 };
    Ok(expand(t, all, &mut memo))
}

fn expand(t: &TriangularArray, remaining: u64, memo: &mut HashMap<u64, Scalar>) -> Scalar {
    if remaining == 0 {
        return Scalar::one();
    }
    if let Some(x) = memo.get(&remaining) {
        return x.clone();
    }
    let first = remaining.trailing_zeros() as usize;
    let mut rest = remaining & !(1u64 << first);
    let mut total = Scalar::zero();
    let mut position = 0;
    while rest != 0 {
        let j = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let entry = t.get(first + 1, j + 1);
        if !entry.is_zero() {
            let minor = expand(t, remaining & !(1u64 << first) & !(1u64 << j), memo);
            let term = entry * minor;
            if position % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        position += 1;
    }
    memo.insert(remaining, total.clone());
    total
}

/// Pfaffian of `t`. Up to [`PAIRING_SUM_MAX`] both routes run and must agree.
pub fn pfaffian(t: &TriangularArray) -> Result<Scalar> {
    let by_expansion = pfaffian_by_expansion(t)?;
    if t.n <= PAIRING_SUM_MAX {
        let by_pairings = pfaffian_by_pairings(t)?;
        if by_pairings != by_expansion {
            return Err(Error::Integrity(format!(
                "Pfaffian routes disagree: {by_pairings} by pairings, {by_expansion} by expansion"
            )));
        }
    }
    Ok(by_expansion)
}

/// `sum over permutations of sgn(sigma) * prod m[i][sigma(i)]`.
pub fn determinant_by_permutations(m: &SquareMatrix) -> Scalar {
    fn rec(
        m: &SquareMatrix,
        row: usize,
        used: &mut Vec<bool>,
        perm: &mut Vec<usize>,
        product: Scalar,
        total: &mut Scalar,
    ) {
        if product.is_zero() {
            return;
        }
        if row > m.n {
            if permutation_sign(perm) > 0 {
                *total += product;
            } else {
                *total -= product;
            }
            return;
        }
        for col in 1..=m.n {
            if !used[col] {
                used[col] = true;
                perm.push(col);
                rec(m, row + 1, used, perm, &product * m.get(row, col), total);
                perm.pop();
                used[col] = false;
            }
        }
    }
    let mut total = Scalar::zero();
    rec(m, 1, &mut vec![false; m.n + 1], &mut Vec::new(), Scalar::one(), &mut total);
    total
}

/// Sign of a permutation given as images of `1..=n`, by inversion count.
pub fn permutation_sign(perm: &[usize]) -> i8 {
    let mut inversions = 0;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Fraction-free (Bareiss) elimination with row pivoting.
pub fn determinant_by_elimination(m: &SquareMatrix) -> Scalar {
    let n = m.n;
    if n == 0 {
        return Scalar::one();
    }
    let mut a: Vec<Vec<Scalar>> = (1..=n).map(|i| (1..=n).map(|j| m.get(i, j).clone()).collect()).collect();
    let mut negate = false;
    let mut prev = Scalar::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    negate = !negate;
                }
                None => return Scalar::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let value = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = value;
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// Determinant of `m`. Up to [`PERMUTATION_SUM_MAX`] both routes run and
/// must agree.
pub fn determinant(m: &SquareMatrix) -> Result<Scalar> {
    let by_elimination = determinant_by_elimination(m);
    if m.n <= PERMUTATION_SUM_MAX {
        let by_permutations = determinant_by_permutations(m);
        if by_permutations != by_elimination {
            return Err(Error::Integrity(format!(
                "determinant routes disagree: {by_permutations} by permutations, {by_elimination} by elimination"
            )));
        }
    }
    Ok(by_elimination)
}

/// For a `2n`-dimensional array whose only nonzero entries pair an index
/// `<= n` with one `> n`, returns the Pfaffian together with the determinant
/// of the `n x n` block `b[i][j] = t[i][2n + 1 - j]`. The two must coincide.
pub fn pfaffian_collapses_to_determinant(t: &TriangularArray, n: usize) -> Result<(Scalar, Scalar)> {
    if t.n != 2 * n {
        return Err(Error::InvalidArgument(format!(
            "array has dimension {}, expected {}",
            t.n,
            2 * n
        )));
    }
    for i in 1..=t.n {
        for j in i + 1..=t.n {
            let same_block = (i <= n) == (j <= n);
            if same_block && !t.get(i, j).is_zero() {
                return Err(Error::InvalidArgument(format!(
                    "entry ({i},{j}) lies inside a diagonal block but is nonzero"
                )));
            }
        }
    }
    let pf = pfaffian(t)?;
    let block = SquareMatrix::from_fn(n, |i, j| t.get(i, 2 * n + 1 - j).clone());
    let det = determinant(&block)?;
    if pf != det {
        return Err(Error::Integrity(format!(
            "Pfaffian {pf} does not collapse to determinant {det}"
        )));
    }
    Ok((pf, det))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    #[test]
    fn one_factor_counts() {
        assert_eq!(enumerate_one_factors(2).unwrap().len(), 1);
        assert_eq!(enumerate_one_factors(4).unwrap().len(), 3);
        assert!(enumerate_one_factors(5).is_err());
    }

    #[test]
    fn crossing_examples() {
        assert_eq!(OneFactor::new([(1, 2), (3, 4)]).unwrap().crossing_number(), 0);
        assert_eq!(OneFactor::new([(1, 3), (2, 4)]).unwrap().crossing_number(), 1);
        assert_eq!(OneFactor::new([(1, 4), (2, 5), (3, 6)]).unwrap().crossing_number(), 3);
        assert_eq!(OneFactor::new([(1, 4), (2, 3)]).unwrap().crossing_number(), 0);
    }

    #[test]
    fn invalid_one_factor() {
        assert!(OneFactor::new([(1, 2), (2, 3)]).is_err());
        assert!(OneFactor::new([(1, 5), (2, 3)]).is_err());
    }

    #[test]
    fn pfaffian_small() {
        let t = TriangularArray::from_fn(2, |_, _| int(7));
        assert_eq!(pfaffian(&t).unwrap(), int(7));
        // m12 m34 - m13 m24 + m14 m23 with m_ij = 10 i + j
        let t = TriangularArray::from_fn(4, |i, j| int((10 * i + j) as i64));
        let expected = int(12 * 34 - 13 * 24 + 14 * 23);
        assert_eq!(pfaffian(&t).unwrap(), expected);
        assert!(pfaffian(&TriangularArray::zeros(3)).is_err());
    }

    #[test]
    fn determinant_small() {
        assert_eq!(determinant(&SquareMatrix::identity(4)).unwrap(), int(1));
        let m = SquareMatrix::from_rows(vec![vec![int(2), int(3)], vec![int(5), int(7)]]).unwrap();
        assert_eq!(determinant(&m).unwrap(), int(2 * 7 - 3 * 5));
        let singular =
            SquareMatrix::from_rows(vec![vec![int(1), int(2)], vec![int(2), int(4)]]).unwrap();
        assert_eq!(determinant(&singular).unwrap(), int(0));
    }

    #[test]
    fn pivoting_needed() {
        let m = SquareMatrix::from_rows(vec![
            vec![int(0), int(1), int(0)],
            vec![int(1), int(0), int(0)],
            vec![int(0), int(0), int(1)],
        ])
        .unwrap();
        assert_eq!(determinant(&m).unwrap(), int(-1));
    }

    #[test]
    fn collapse_small() {
        let t = TriangularArray::from_fn(2, |_, _| int(5));
        assert_eq!(pfaffian_collapses_to_determinant(&t, 1).unwrap(), (int(5), int(5)));
        let bad = TriangularArray::from_fn(4, |_, _| int(1));
        assert!(pfaffian_collapses_to_determinant(&bad, 2).is_err());
    }

    #[test]
    fn triangular_indexing_is_a_bijection() {
        let t = TriangularArray::from_fn(6, |i, j| int((i * 10 + j) as i64));
        for i in 1..=6 {
            for j in i + 1..=6 {
                assert_eq!(t.get(i, j), &int((i * 10 + j) as i64));
            }
        }
    }

    #[test]
    fn swap_flips_sign() {
        let f = OneFactor::new([(1, 2), (3, 4), (5, 6)]).unwrap();
        let g = f.swap_pairs((1, 2), (3, 4)).unwrap();
        assert_eq!(g, OneFactor::new([(1, 3), (2, 4), (5, 6)]).unwrap());
        assert_eq!(f.sign(), -g.sign());
    }
}
