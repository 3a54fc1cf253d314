//! Dense exact matrices: kernels, determinants, cofactors and rank.

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use super::rational::{content, lcm, primitive_normalized, Integer, Rational};
use super::AlgebraError;

/// Row-major rectangular matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type IntMatrix = Matrix<Integer>;
pub type RatMatrix = Matrix<Rational>;

impl<T: Clone> Matrix<T> {
    /// Panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Matrix with row `r` and column `c` removed.
    pub fn minor(&self, r: usize, c: usize) -> Self {
        let rows = (0..self.rows)
            .filter(|&i| i != r)
            .map(|i| {
                self.row(i)
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != c)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect::<Vec<Vec<T>>>();
        Matrix {
            rows: self.rows - 1,
            cols: self.cols - 1,
            data: rows.into_iter().flatten().collect(),
        }
    }
}

impl IntMatrix {
    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { BigInt::one() } else { BigInt::zero() })
    }

    pub fn mul_vec(&self, v: &[Integer]) -> Vec<Integer> {
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }
}

impl RatMatrix {
    pub fn mul_vec_int(&self, v: &[Integer]) -> Vec<Rational> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * Rational::from_integer(b.clone()))
                    .sum()
            })
            .collect()
    }
}

/// Clears the denominators of each row, giving a primitive integer row.
fn integer_rows(m: &RatMatrix) -> Vec<Vec<Integer>> {
    (0..m.rows())
        .map(|i| {
            let row = m.row(i);
            let l = row.iter().fold(BigInt::one(), |acc, x| lcm(&acc, x.denom()));
            let ints: Vec<Integer> = row
                .iter()
                .map(|x| (x * Rational::from_integer(l.clone())).to_integer())
                .collect();
            divide_by_content(ints)
        })
        .collect()
}

fn divide_by_content(mut v: Vec<Integer>) -> Vec<Integer> {
    let g = content(&v);
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x = &*x / &g;
        }
    }
    v
}

/// Fraction-free Gauss–Jordan elimination with content reduction.
/// Pivots are chosen as the first nonzero entry in row-major scan order, so the
/// result is deterministic. Returns the reduced nonzero rows and their pivot columns.
fn gauss_jordan(mut a: Vec<Vec<Integer>>, cols: usize) -> (Vec<Vec<Integer>>, Vec<usize>) {
    let nrows = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..cols {
        if r >= nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let pivot_row = std::mem::take(&mut a[r]);
        let pv = pivot_row[col].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let g = pv.gcd(&row[col]);
            let fp = &pv / &g;
            let fr = &row[col] / &g;
            let updated: Vec<Integer> = row
                .iter()
                .zip(&pivot_row)
                .map(|(x, y)| &fp * x - &fr * y)
                .collect();
            *row = divide_by_content(updated);
        }
        a[r] = pivot_row;
        pivots.push(col);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

/// Exact basis of the right kernel of `m`, each vector primitive with its
/// first nonzero entry positive. Empty iff `m` has full column rank.
pub fn kernel_basis(m: &RatMatrix) -> Vec<Vec<Integer>> {
    let cols = m.cols();
    let (reduced, pivots) = gauss_jordan(integer_rows(m), cols);
    let mut is_pivot = vec![false; cols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let mut basis = Vec::new();
    for free in (0..cols).filter(|&c| !is_pivot[c]) {
        // rows with a nonzero entry in the free column constrain the vector
        let mut l = BigInt::one();
        for (row, &pc) in reduced.iter().zip(&pivots) {
            if !row[free].is_zero() {
                l = lcm(&l, &row[pc]);
            }
        }
        let mut v = vec![BigInt::zero(); cols];
        v[free] = l.clone();
        for (row, &pc) in reduced.iter().zip(&pivots) {
            if !row[free].is_zero() {
                v[pc] = -(&l * &row[free]) / &row[pc];
            }
        }
        basis.push(primitive_normalized(v));
    }
    basis
}

/// Rank of a list of integer rows.
pub fn rank(rows: &[Vec<Integer>]) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    gauss_jordan(rows.to_vec(), cols).1.len()
}

/// Exact determinant by Bareiss fraction-free elimination.
pub fn det_exact(m: &IntMatrix) -> Result<Integer, AlgebraError> {
    if !m.is_square() {
        return Err(AlgebraError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a = m.to_rows();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return Ok(BigInt::zero());
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    Ok(sign * &a[n - 1][n - 1])
}

/// Signed minor `(-1)^{row+col} det(M without row, col)`; indices are 0-based.
/// A 1×1 matrix has cofactor 1.
pub fn cofactor(m: &IntMatrix, row: usize, col: usize) -> Result<Integer, AlgebraError> {
    if !m.is_square() {
        return Err(AlgebraError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if row >= m.rows() || col >= m.cols() {
        return Err(AlgebraError::IndexOutOfRange {
            row,
            col,
            size: m.rows(),
        });
    }
    let d = det_exact(&m.minor(row, col))?;
    Ok(if (row + col) % 2 == 0 { d } else { -d })
}

/// Max-norm of an integer vector.
pub fn max_norm(v: &[Integer]) -> Integer {
    v.iter().map(|x| x.abs()).max().unwrap_or_else(BigInt::zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, rat};
    use proptest::prelude::*;

    fn im(rows: &[&[i64]]) -> IntMatrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    fn qm(rows: &[&[i64]]) -> RatMatrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
    }

    fn iv(v: &[i64]) -> Vec<Integer> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel_basis(&qm(&[&[1, 1]])), vec![iv(&[1, -1])]);
        assert!(kernel_basis(&qm(&[&[1, 0], &[0, 1]])).is_empty());
        let k = kernel_basis(&qm(&[&[1, 2, 3]]));
        assert_eq!(k, vec![iv(&[2, -1, 0]), iv(&[3, 0, -1])]);
    }

    #[test]
    fn kernel_with_rational_entries() {
        let m = Matrix::from_rows(vec![vec![rat(1, 2), rat(1, 3), int(0)], vec![int(0), int(1), rat(-1, 5)]]);
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 1);
        assert!(m.mul_vec_int(&k[0]).iter().all(|x| x.is_zero()));
        assert_eq!(k[0], iv(&[2, -3, -15]));
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(det_exact(&IntMatrix::identity(3)).unwrap(), BigInt::one());
        assert_eq!(det_exact(&im(&[&[3, -1], &[4, -1]])).unwrap(), BigInt::one());
        assert!(det_exact(&im(&[&[1, 2, 3], &[4, 5, 6], &[1, 2, 3]])).unwrap().is_zero());
        assert!(matches!(det_exact(&im(&[&[1, 2]])), Err(AlgebraError::NotSquare { .. })));
        // needs a row swap
        assert_eq!(det_exact(&im(&[&[0, 1], &[1, 0]])).unwrap(), BigInt::from(-1));
    }

    #[test]
    fn cofactor_examples() {
        assert_eq!(cofactor(&IntMatrix::identity(2), 0, 0).unwrap(), BigInt::one());
        assert_eq!(cofactor(&im(&[&[3, -1], &[4, -1]]), 1, 0).unwrap(), BigInt::one());
        assert_eq!(cofactor(&im(&[&[7]]), 0, 0).unwrap(), BigInt::one());
        assert!(matches!(
            cofactor(&IntMatrix::identity(2), 2, 0),
            Err(AlgebraError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn rank_of_rows() {
        assert_eq!(rank(&[iv(&[1, 2]), iv(&[2, 4])]), 1);
        assert_eq!(rank(&[iv(&[3, -1]), iv(&[4, -1])]), 2);
        assert_eq!(rank(&[iv(&[0, 0])]), 0);
    }

    fn small_matrix(n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
        proptest::collection::vec(proptest::collection::vec(-6i64..=6, n), n)
    }

    proptest! {
        #[test]
        fn det_matches_cofactor_expansion(n in 1usize..5, seed in small_matrix(4), row in 0usize..4) {
            let rows: Vec<Vec<i64>> = seed.iter().take(n).map(|r| r[..n].to_vec()).collect();
            let m = Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect());
            let row = row % n;
            let expanded: BigInt = (0..n)
                .map(|j| m.get(row, j) * cofactor(&m, row, j).unwrap())
                .sum();
            prop_assert_eq!(det_exact(&m).unwrap(), expanded);
        }

        #[test]
        fn kernel_vectors_are_annihilated(
            rows in 1usize..5,
            cols in 1usize..7,
            entries in proptest::collection::vec((-9i64..=9, 1i64..=4), 36),
        ) {
            let m = Matrix::from_fn(rows, cols, |i, j| {
                let (p, q) = entries[i * 6 + j];
                rat(p, q)
            });
            let k = kernel_basis(&m);
            let r = rank(&integer_rows(&m));
            prop_assert_eq!(k.len(), cols - r);
            for v in &k {
                prop_assert!(m.mul_vec_int(v).iter().all(|x| x.is_zero()));
                prop_assert!(content(v).is_one());
                prop_assert!(v.iter().find(|x| !x.is_zero()).unwrap().is_positive());
            }
        }
    }
}
