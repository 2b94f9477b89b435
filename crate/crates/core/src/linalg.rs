//! Exact integer linear algebra: rank, kernel bases and graph nullity.
//!
//! Every routine here works over the integers without floating point. The
//! elimination kernels run on a machine-word fast path first and restart in
//! arbitrary precision the moment any intermediate value would overflow.

use std::collections::BTreeSet;
use std::fmt;

use nalgebra::{DMatrix, SymmetricEigen};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("symmetric eigensolver did not converge")]
    ConvergenceFailure,
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(String),
}

/// Dense integer matrix in row-major order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> IntMatrix {
        assert_eq!(entries.len(), rows * cols, "entry count must be rows * cols");
        IntMatrix { rows, cols, entries }
    }

    pub fn zeros(rows: usize, cols: usize) -> IntMatrix {
        IntMatrix::new(rows, cols, vec![BigInt::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> IntMatrix {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let entries = rows
            .iter()
            .flat_map(|row| {
                assert_eq!(row.len(), c, "ragged rows");
                row.iter().map(|&x| BigInt::from(x))
            })
            .collect();
        IntMatrix::new(r, c, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: BigInt) {
        self.entries[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Rows reordered by `row_perm` and columns by `col_perm`
    /// (`result[i][j] = self[row_perm[i]][col_perm[j]]`).
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> IntMatrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for &r in row_perm {
            for &c in col_perm {
                entries.push(self.get(r, c).clone());
            }
        }
        IntMatrix::new(row_perm.len(), col_perm.len(), entries)
    }

    pub fn mul_vector(&self, v: &RationalVector) -> RationalVector {
        assert_eq!(v.len(), self.cols);
        let entries = (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v.entries())
                    .filter(|(a, _)| !a.is_zero())
                    .fold(BigRational::zero(), |acc, (a, x)| {
                        acc + BigRational::from_integer(a.clone()) * x
                    })
            })
            .collect();
        RationalVector::new(entries)
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// A vector of exact rationals, indexed by vertex when used as a weighting.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalVector {
    entries: Vec<BigRational>,
}

impl RationalVector {
    pub fn new(entries: Vec<BigRational>) -> RationalVector {
        RationalVector { entries }
    }

    pub fn zeros(n: usize) -> RationalVector {
        RationalVector::new(vec![BigRational::zero(); n])
    }

    pub fn from_integers<I: IntoIterator<Item = i64>>(values: I) -> RationalVector {
        RationalVector::new(
            values
                .into_iter()
                .map(|x| BigRational::from_integer(BigInt::from(x)))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> &BigRational {
        &self.entries[i]
    }

    pub fn set(&mut self, i: usize, value: BigRational) {
        self.entries[i] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn scaled(&self, factor: &BigRational) -> RationalVector {
        RationalVector::new(self.entries.iter().map(|x| x * factor).collect())
    }

    pub fn add(&self, other: &RationalVector) -> RationalVector {
        assert_eq!(self.len(), other.len());
        RationalVector::new(
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// Scaled to integers with gcd 1 and first nonzero entry positive.
    /// The zero vector maps to all zeros.
    pub fn primitive(&self) -> Vec<BigInt> {
        let denom_lcm = self
            .entries
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let mut ints: Vec<BigInt> = self
            .entries
            .iter()
            .map(|x| x.numer() * (&denom_lcm / x.denom()))
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        if g.is_zero() {
            return ints;
        }
        let negate = ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
        for x in &mut ints {
            *x = &*x / &g;
            if negate {
                *x = -&*x;
            }
        }
        ints
    }

    pub fn to_primitive_vector(&self) -> RationalVector {
        RationalVector::new(
            self.primitive()
                .into_iter()
                .map(BigRational::from_integer)
                .collect(),
        )
    }
}

/// Integer types the elimination kernels can run on. Fallible operations
/// return `None` on overflow so callers can retry in arbitrary precision.
trait ExactInt: Clone + PartialEq + fmt::Debug {
    fn nil() -> Self;
    fn unit() -> Self;
    fn is_nil(&self) -> bool;
    fn mul(&self, other: &Self) -> Option<Self>;
    fn sub(&self, other: &Self) -> Option<Self>;
    fn div_exact(&self, other: &Self) -> Option<Self>;
    fn gcd_with(&self, other: &Self) -> Self;
    fn abs_cmp(&self, other: &Self) -> std::cmp::Ordering;
}

macro_rules! impl_exact_prim {
    ($t:ty) => {
        impl ExactInt for $t {
            fn nil() -> Self {
                0
            }
            fn unit() -> Self {
                1
            }
            fn is_nil(&self) -> bool {
                *self == 0
            }
            fn mul(&self, other: &Self) -> Option<Self> {
                self.checked_mul(*other)
            }
            fn sub(&self, other: &Self) -> Option<Self> {
                self.checked_sub(*other)
            }
            fn div_exact(&self, other: &Self) -> Option<Self> {
                debug_assert_eq!(self % other, 0, "inexact division");
                self.checked_div(*other)
            }
            fn gcd_with(&self, other: &Self) -> Self {
                Integer::gcd(self, other)
            }
            fn abs_cmp(&self, other: &Self) -> std::cmp::Ordering {
                self.unsigned_abs().cmp(&other.unsigned_abs())
            }
        }
    };
}

impl_exact_prim!(i64);
impl_exact_prim!(i128);

impl ExactInt for BigInt {
    fn nil() -> Self {
        Zero::zero()
    }
    fn unit() -> Self {
        One::one()
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn mul(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }
    fn sub(&self, other: &Self) -> Option<Self> {
        Some(self - other)
    }
    fn div_exact(&self, other: &Self) -> Option<Self> {
        debug_assert!(Zero::is_zero(&(self % other)), "inexact division");
        Some(self / other)
    }
    fn gcd_with(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn abs_cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.magnitude().cmp(other.magnitude())
    }
}

fn to_i128_rows(m: &IntMatrix) -> Option<Vec<Vec<i128>>> {
    (0..m.rows)
        .map(|r| m.row(r).iter().map(ToPrimitive::to_i128).collect())
        .collect()
}

fn to_big_rows(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    (0..m.rows).map(|r| m.row(r).to_vec()).collect()
}

/// Fraction-free (Bareiss) forward elimination with partial pivoting on
/// absolute value. Columns without a pivot are skipped; every division is
/// exact because each stored entry is a minor of the input.
fn bareiss_rank<T: ExactInt>(mut a: Vec<Vec<T>>, cols: usize) -> Option<usize> {
    let rows = a.len();
    let mut prev = T::unit();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let pivot = (r..rows)
            .filter(|&i| !a[i][c].is_nil())
            .max_by(|&i, &j| a[i][c].abs_cmp(&a[j][c]).then(j.cmp(&i)));
        let Some(p) = pivot else { continue };
        a.swap(r, p);
        let (top, bottom) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in bottom.iter_mut() {
            let factor = row[c].clone();
            for j in c + 1..cols {
                let lhs = pivot_row[c].mul(&row[j])?;
                let rhs = factor.mul(&pivot_row[j])?;
                row[j] = lhs.sub(&rhs)?.div_exact(&prev)?;
            }
            row[c] = T::nil();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    Some(r)
}

/// Rank over the rationals by fraction-free Bareiss elimination.
pub fn rank_exact(m: &IntMatrix) -> usize {
    if m.rows == 0 || m.cols == 0 {
        return 0;
    }
    if let Some(rows) = to_i128_rows(m) {
        if let Some(rank) = bareiss_rank(rows, m.cols) {
            return rank;
        }
    }
    bareiss_rank(to_big_rows(m), m.cols).expect("arbitrary precision never overflows")
}

pub fn adjacency_matrix(g: &Graph) -> IntMatrix {
    let n = g.order();
    let mut m = IntMatrix::zeros(n, n);
    for (u, v) in g.edges() {
        m.set(u, v, BigInt::one());
        m.set(v, u, BigInt::one());
    }
    m
}

/// Divides a row by the gcd of its entries.
fn reduce_content<T: ExactInt>(row: &mut [T]) -> Option<()> {
    let g = row.iter().fold(T::nil(), |acc, x| acc.gcd_with(x));
    if !g.is_nil() && g != T::unit() {
        for x in row.iter_mut() {
            *x = x.div_exact(&g)?;
        }
    }
    Some(())
}

/// Integer reduced row echelon form with a fixed left-to-right column order;
/// the first row holding a nonzero entry in the column becomes the pivot.
/// Returns the pivot column of each pivot row.
fn integer_rref<T: ExactInt>(a: &mut [Vec<T>], cols: usize) -> Option<Vec<usize>> {
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_nil()) else {
            continue;
        };
        a.swap(r, p);
        reduce_content(&mut a[r])?;
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c].is_nil() {
                continue;
            }
            let g = pivot_row[c].gcd_with(&row[c]);
            let mp = pivot_row[c].div_exact(&g)?;
            let mr = row[c].div_exact(&g)?;
            for j in 0..cols {
                let lhs = mp.mul(&row[j])?;
                let rhs = mr.mul(&pivot_row[j])?;
                row[j] = lhs.sub(&rhs)?;
            }
            reduce_content(row)?;
        }
        pivots.push(c);
        r += 1;
    }
    Some(pivots)
}

fn kernel_from_rref<T: ExactInt + Into<BigInt>>(
    a: Vec<Vec<T>>,
    pivots: &[usize],
    cols: usize,
) -> Vec<RationalVector> {
    let mut is_pivot = vec![false; cols];
    for &c in pivots {
        is_pivot[c] = true;
    }
    let a: Vec<Vec<BigInt>> = a
        .into_iter()
        .map(|row| row.into_iter().map(Into::into).collect())
        .collect();
    (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = RationalVector::zeros(cols);
            v.set(f, BigRational::one());
            for (k, &pc) in pivots.iter().enumerate() {
                if !a[k][f].is_nil() {
                    v.set(pc, -BigRational::new(a[k][f].clone(), a[k][pc].clone()));
                }
            }
            v.to_primitive_vector()
        })
        .collect()
}

/// Basis of the right kernel, one vector per non-pivot column of the reduced
/// echelon form. Vectors are in primitive integer form with their first
/// nonzero entry positive.
pub fn kernel_basis(m: &IntMatrix) -> Vec<RationalVector> {
    if m.cols == 0 {
        return Vec::new();
    }
    if let Some(mut rows) = to_i128_rows(m) {
        if let Some(pivots) = integer_rref(&mut rows, m.cols) {
            return kernel_from_rref(rows, &pivots, m.cols);
        }
    }
    let mut rows = to_big_rows(m);
    let pivots = integer_rref(&mut rows, m.cols).expect("arbitrary precision never overflows");
    kernel_from_rref(rows, &pivots, m.cols)
}

type SparseRow<T> = Vec<(usize, T)>;

/// `alpha * a - beta * b` on sorted sparse rows.
fn sparse_combine<T: ExactInt>(
    alpha: &T,
    a: &SparseRow<T>,
    beta: &T,
    b: &SparseRow<T>,
) -> Option<SparseRow<T>> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ca = a.get(i).map_or(usize::MAX, |e| e.0);
        let cb = b.get(j).map_or(usize::MAX, |e| e.0);
        let (col, value) = if ca < cb {
            i += 1;
            (ca, alpha.mul(&a[i - 1].1)?)
        } else if cb < ca {
            j += 1;
            (cb, T::nil().sub(&beta.mul(&b[j - 1].1)?)?)
        } else {
            i += 1;
            j += 1;
            (ca, alpha.mul(&a[i - 1].1)?.sub(&beta.mul(&b[j - 1].1)?)?)
        };
        if !value.is_nil() {
            out.push((col, value));
        }
    }
    Some(out)
}

/// Rank of a sparse integer matrix by pivoted elimination that keeps rows
/// integral: each update is `p * row - a * pivot_row` followed by division
/// by the row content. Pivots are chosen Markowitz-style (shortest row, then
/// least-populated column) to limit fill.
fn sparse_rank<T: ExactInt>(mut rows: Vec<SparseRow<T>>, cols: usize) -> Option<usize> {
    let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); cols];
    for (i, row) in rows.iter().enumerate() {
        for &(c, _) in row {
            col_rows[c].insert(i);
        }
    }
    let mut active: BTreeSet<usize> = (0..rows.len()).filter(|&i| !rows[i].is_empty()).collect();
    let mut rank = 0;
    while let Some(&r) = active.iter().min_by_key(|&&i| (rows[i].len(), i)) {
        active.remove(&r);
        let pivot_row = std::mem::take(&mut rows[r]);
        for &(c, _) in &pivot_row {
            col_rows[c].remove(&r);
        }
        let &(c, ref p) = pivot_row
            .iter()
            .min_by(|x, y| {
                col_rows[x.0]
                    .len()
                    .cmp(&col_rows[y.0].len())
                    .then(x.1.abs_cmp(&y.1))
                    .then(x.0.cmp(&y.0))
            })
            .expect("active rows are nonempty");
        rank += 1;
        let targets: Vec<usize> = col_rows[c].iter().copied().collect();
        for i in targets {
            let a = rows[i]
                .iter()
                .find(|e| e.0 == c)
                .map(|e| e.1.clone())
                .expect("column index is consistent");
            let g = p.gcd_with(&a);
            let mut updated = sparse_combine(&p.div_exact(&g)?, &rows[i], &a.div_exact(&g)?, &pivot_row)?;
            let mut values: Vec<T> = updated.iter().map(|e| e.1.clone()).collect();
            reduce_content(&mut values)?;
            for (e, v) in updated.iter_mut().zip(values) {
                e.1 = v;
            }
            for &(col, _) in &rows[i] {
                col_rows[col].remove(&i);
            }
            for &(col, _) in &updated {
                col_rows[col].insert(i);
            }
            if updated.is_empty() {
                active.remove(&i);
            }
            rows[i] = updated;
        }
    }
    Some(rank)
}

fn graph_sparse_rows<T: ExactInt>(g: &Graph) -> Vec<SparseRow<T>> {
    (0..g.order())
        .map(|v| g.neighbors(v).iter().map(|&w| (w, T::unit())).collect())
        .collect()
}

/// Rank of the adjacency matrix, computed on the sparse structure.
pub fn adjacency_rank(g: &Graph) -> usize {
    let n = g.order();
    if let Some(rank) = sparse_rank::<i64>(graph_sparse_rows(g), n) {
        return rank;
    }
    sparse_rank::<BigInt>(graph_sparse_rows(g), n).expect("arbitrary precision never overflows")
}

/// Multiplicity of eigenvalue 0 of the adjacency matrix, `n - rank A(G)`.
pub fn nullity(g: &Graph) -> usize {
    g.order() - adjacency_rank(g)
}

/// Number of eigenvalues of `A(G)` with absolute value below `tol`, from a
/// floating-point symmetric eigensolver. Meant only as an independent check
/// on the exact routines.
pub fn nullity_float_oracle(g: &Graph, tol: f64) -> Result<usize, LinalgError> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(LinalgError::BadTolerance(tol.to_string()));
    }
    let n = g.order();
    if n == 0 {
        return Ok(0);
    }
    let mut m = DMatrix::<f64>::zeros(n, n);
    for (u, v) in g.edges() {
        m[(u, v)] = 1.0;
        m[(v, u)] = 1.0;
    }
    let eig = SymmetricEigen::try_new(m, 1e-15, 10_000).ok_or(LinalgError::ConvergenceFailure)?;
    Ok(eig.eigenvalues.iter().filter(|x| x.abs() < tol).count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{cycle_graph, path_graph};

    /// Plain Gaussian elimination over the rationals; independent of the
    /// fraction-free kernels above.
    fn rational_rank(m: &IntMatrix) -> usize {
        let mut a: Vec<Vec<BigRational>> = (0..m.rows())
            .map(|r| m.row(r).iter().cloned().map(BigRational::from_integer).collect())
            .collect();
        let mut rank = 0;
        for c in 0..m.cols() {
            let Some(p) = (rank..a.len()).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(rank, p);
            let pivot = a[rank].clone();
            for row in a.iter_mut().skip(rank + 1) {
                let f = &row[c] / &pivot[c];
                for (x, p) in row[c..].iter_mut().zip(&pivot[c..]) {
                    *x -= &f * p;
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn adjacency_matrix_examples() {
        assert_eq!(
            adjacency_matrix(&path_graph(3)),
            IntMatrix::from_rows(&[vec![0, 1, 0], vec![1, 0, 1], vec![0, 1, 0]])
        );
        assert_eq!(adjacency_matrix(&Graph::empty(2)), IntMatrix::zeros(2, 2));
        assert_eq!(
            adjacency_matrix(&path_graph(2)),
            IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]])
        );
        assert!(adjacency_matrix(&cycle_graph(7)).is_symmetric());
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank_exact(&adjacency_matrix(&path_graph(3))), 2);
        assert_eq!(rank_exact(&IntMatrix::zeros(4, 3)), 0);
        assert_eq!(rank_exact(&adjacency_matrix(&cycle_graph(4))), 2);
        assert_eq!(rank_exact(&IntMatrix::identity(5)), 5);
        assert_eq!(rank_exact(&IntMatrix::zeros(0, 0)), 0);
    }

    #[test]
    fn rank_of_rectangular_and_dependent_rows() {
        let m = IntMatrix::from_rows(&[vec![2, 4, 6], vec![1, 2, 3], vec![0, 0, 1], vec![3, 6, 10]]);
        assert_eq!(rank_exact(&m), 2);
        assert_eq!(rational_rank(&m), 2);
    }

    #[test]
    fn big_entries_fall_back_to_arbitrary_precision() {
        let big = i64::MAX;
        let m = IntMatrix::from_rows(&[
            vec![big, big - 1, 3],
            vec![big - 2, big, 5],
            vec![big, big, big],
        ]);
        assert_eq!(rank_exact(&m), rational_rank(&m));
    }

    #[test]
    fn kernel_examples() {
        let k = kernel_basis(&adjacency_matrix(&path_graph(3)));
        assert_eq!(k.len(), 1);
        assert_eq!(k[0], RationalVector::from_integers([1, 0, -1]));
        assert!(kernel_basis(&IntMatrix::identity(4)).is_empty());
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let m = adjacency_matrix(&cycle_graph(8));
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.mul_vector(v).is_zero());
        }
    }

    #[test]
    fn primitive_form() {
        let half = BigRational::new(BigInt::from(-1), BigInt::from(2));
        let v = RationalVector::new(vec![BigRational::zero(), half, BigRational::from_integer(BigInt::from(3))]);
        assert_eq!(v.primitive(), vec![BigInt::from(0), BigInt::from(1), BigInt::from(-6)]);
        assert!(RationalVector::zeros(3).primitive().iter().all(Zero::is_zero));
    }

    #[test]
    fn nullity_small_graphs() {
        assert_eq!(nullity(&path_graph(3)), 1);
        assert_eq!(nullity(&cycle_graph(4)), 2);
        assert_eq!(nullity(&cycle_graph(6)), 0);
        assert_eq!(nullity(&cycle_graph(8)), 2);
        assert_eq!(nullity(&cycle_graph(5)), 0);
        assert_eq!(nullity(&Graph::empty(3)), 3);
    }

    #[test]
    fn float_oracle_examples() {
        assert_eq!(nullity_float_oracle(&path_graph(3), 1e-8).unwrap(), 1);
        assert_eq!(nullity_float_oracle(&cycle_graph(4), 1e-8).unwrap(), 2);
        assert!(matches!(
            nullity_float_oracle(&path_graph(3), 0.0),
            Err(LinalgError::BadTolerance(_))
        ));
    }

    #[test]
    fn sparse_and_dense_routes_agree_on_paths_and_cycles() {
        for n in 1..20 {
            for g in [path_graph(n), if n >= 3 { cycle_graph(n) } else { path_graph(n) }] {
                let dense = rank_exact(&adjacency_matrix(&g));
                assert_eq!(adjacency_rank(&g), dense);
                assert_eq!(rational_rank(&adjacency_matrix(&g)), dense);
            }
        }
    }
}
