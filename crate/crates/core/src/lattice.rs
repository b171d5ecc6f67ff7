//! Dense integer matrices, Smith normal form and lattice quotients.
//!
//! Generic over the machine integer type; every arithmetic step is checked
//! and reports [`LatticeError::Overflow`] instead of wrapping.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_traits::{PrimInt, Signed};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("integer overflow in lattice arithmetic")]
    Overflow,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix has no finite order up to {0}")]
    NoFiniteOrder(usize),
    #[error("image of (m - 1) is not contained in the kernel of the norm map")]
    ImageNotInKernel,
}

/// Machine integer usable as a matrix entry.
pub trait IntScalar: PrimInt + Signed + fmt::Debug + fmt::Display + Send + Sync + 'static {}

impl<T: PrimInt + Signed + fmt::Debug + fmt::Display + Send + Sync + 'static> IntScalar for T {}

fn add<T: IntScalar>(a: T, b: T) -> Result<T, LatticeError> {
    a.checked_add(&b).ok_or(LatticeError::Overflow)
}

fn sub<T: IntScalar>(a: T, b: T) -> Result<T, LatticeError> {
    a.checked_sub(&b).ok_or(LatticeError::Overflow)
}

fn mul<T: IntScalar>(a: T, b: T) -> Result<T, LatticeError> {
    a.checked_mul(&b).ok_or(LatticeError::Overflow)
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: IntScalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.concat() }
    }

    pub fn from_columns(cols: &[Vec<T>]) -> Self {
        Self::from_rows(cols).transpose()
    }

    /// Converts small `i64` literals; panics if an entry does not fit `T`.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let rows: Vec<Vec<T>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| T::from(v).expect("entry fits")).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> Vec<T> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self, LatticeError> {
        if self.cols != other.rows {
            return Err(LatticeError::Shape(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] = add(out[(i, j)], mul(a, other[(k, j)])?)?;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[T]) -> Result<Vec<T>, LatticeError> {
        let col = Self::from_columns(&[v.to_vec()]);
        Ok(self.mul(&col)?.column(0))
    }

    fn zip_with(&self, other: &Self, f: fn(T, T) -> Result<T, LatticeError>) -> Result<Self, LatticeError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LatticeError::Shape("elementwise operation on different shapes".into()));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f(a, b))
            .collect::<Result<_, _>>()?;
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn add(&self, other: &Self) -> Result<Self, LatticeError> {
        self.zip_with(other, add)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, LatticeError> {
        self.zip_with(other, sub)
    }

    pub fn pow(&self, k: u32) -> Result<Self, LatticeError> {
        let mut acc = Self::identity(self.rows);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    pub fn trace(&self) -> Result<T, LatticeError> {
        (0..self.rows.min(self.cols)).try_fold(T::zero(), |acc, i| add(acc, self[(i, i)]))
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<T, LatticeError> {
        if !self.is_square() {
            return Err(LatticeError::Shape("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut sign = T::one();
        let mut prev = T::one();
        for k in 0..n {
            if a[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                    return Ok(T::zero());
                };
                a.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = sub(mul(a[(i, j)], a[(k, k)])?, mul(a[(i, k)], a[(k, j)])?)?;
                    a[(i, j)] = v / prev;
                }
                a[(i, k)] = T::zero();
            }
            prev = a[(k, k)];
        }
        if n == 0 {
            return Ok(T::one());
        }
        mul(sign, a[(n - 1, n - 1)])
    }

    /// Coefficients of `det(λI − A)`, constant term first, leading 1 last
    /// (Faddeev–LeVerrier; the divisions are exact over ℤ).
    pub fn characteristic_polynomial(&self) -> Result<Vec<T>, LatticeError> {
        if !self.is_square() {
            return Err(LatticeError::Shape("characteristic polynomial of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut coeffs = vec![T::zero(); n + 1];
        coeffs[n] = T::one();
        let mut m = Self::zeros(n, n);
        for k in 1..=n {
            let mut next = self.mul(&m)?;
            for i in 0..n {
                next[(i, i)] = add(next[(i, i)], coeffs[n - k + 1])?;
            }
            m = next;
            let am = self.mul(&m)?;
            let kk = T::from(k).ok_or(LatticeError::Overflow)?;
            coeffs[n - k] = -(am.trace()? / kk);
        }
        Ok(coeffs)
    }

    /// Smallest `k ≤ limit` with `A^k = I`.
    pub fn order(&self, limit: usize) -> Result<usize, LatticeError> {
        let id = Self::identity(self.rows);
        let mut acc = self.clone();
        for k in 1..=limit {
            if acc == id {
                return Ok(k);
            }
            acc = acc.mul(self)?;
        }
        Err(LatticeError::NoFiniteOrder(limit))
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// `row[dst] += q · row[src]`
    fn add_row(&mut self, dst: usize, src: usize, q: T) -> Result<(), LatticeError> {
        for j in 0..self.cols {
            self[(dst, j)] = add(self[(dst, j)], mul(q, self[(src, j)])?)?;
        }
        Ok(())
    }

    /// `col[dst] += q · col[src]`
    fn add_col(&mut self, dst: usize, src: usize, q: T) -> Result<(), LatticeError> {
        for i in 0..self.rows {
            self[(i, dst)] = add(self[(i, dst)], mul(q, self[(i, src)])?)?;
        }
        Ok(())
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            self[(i, j)] = -self[(i, j)];
        }
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: fmt::Display> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.data[i * self.cols + j].to_string()).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// `u · a · v = d` with `u`, `v` unimodular and `d` diagonal,
/// `d[0] | d[1] | … ` nonnegative.
#[derive(Clone, Debug)]
pub struct SmithForm<T: fmt::Display> {
    pub u: Matrix<T>,
    pub d: Matrix<T>,
    pub v: Matrix<T>,
    pub v_inv: Matrix<T>,
    pub rank: usize,
}

impl<T: IntScalar> SmithForm<T> {
    pub fn diagonal(&self) -> Vec<T> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d[(i, i)]).collect()
    }
}

/// Smith normal form with transformation matrices.
pub fn smith_normal_form<T: IntScalar>(a: &Matrix<T>) -> Result<SmithForm<T>, LatticeError> {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = Matrix::identity(m);
    let mut v = Matrix::identity(n);
    let mut v_inv = Matrix::identity(n);
    let mut rank = 0;

    for t in 0..m.min(n) {
        // smallest nonzero entry of the trailing block becomes the pivot
        let pivot = (t..m)
            .flat_map(|i| (t..n).map(move |j| (i, j)))
            .filter(|&(i, j)| !d[(i, j)].is_zero())
            .min_by_key(|&(i, j)| d[(i, j)].abs());
        let Some((pi, pj)) = pivot else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);
        v_inv.swap_rows(t, pj);

        loop {
            let mut dirty = false;
            for i in t + 1..m {
                let q = d[(i, t)].div_euclid_checked(d[(t, t)])?;
                if !q.is_zero() {
                    d.add_row(i, t, -q)?;
                    u.add_row(i, t, -q)?;
                }
                if !d[(i, t)].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..n {
                let q = d[(t, j)].div_euclid_checked(d[(t, t)])?;
                if !q.is_zero() {
                    d.add_col(j, t, -q)?;
                    v.add_col(j, t, -q)?;
                    v_inv.add_row(t, j, q)?;
                }
                if !d[(t, j)].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // bring the smallest remainder in row t / column t to the pivot
                let best_row = (t + 1..m)
                    .filter(|&i| !d[(i, t)].is_zero())
                    .min_by_key(|&i| d[(i, t)].abs());
                let best_col = (t + 1..n)
                    .filter(|&j| !d[(t, j)].is_zero())
                    .min_by_key(|&j| d[(t, j)].abs());
                match (best_row, best_col) {
                    (Some(i), Some(j)) if d[(t, j)].abs() < d[(i, t)].abs() => {
                        d.swap_cols(t, j);
                        v.swap_cols(t, j);
                        v_inv.swap_rows(t, j);
                    }
                    (Some(i), _) => {
                        d.swap_rows(t, i);
                        u.swap_rows(t, i);
                    }
                    (None, Some(j)) => {
                        d.swap_cols(t, j);
                        v.swap_cols(t, j);
                        v_inv.swap_rows(t, j);
                    }
                    (None, None) => unreachable!(),
                }
                continue;
            }
            // divisibility: fold a non-divisible row into the pivot row
            let bad = (t + 1..m)
                .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !(d[(i, j)] % d[(t, t)]).is_zero());
            match bad {
                Some((i, _)) => {
                    d.add_row(t, i, T::one())?;
                    u.add_row(t, i, T::one())?;
                }
                None => break,
            }
        }
        if d[(t, t)] < T::zero() {
            d.negate_row(t);
            u.negate_row(t);
        }
        rank += 1;
    }
    Ok(SmithForm { u, d, v, v_inv, rank })
}

trait DivEuclidChecked: Sized {
    fn div_euclid_checked(self, rhs: Self) -> Result<Self, LatticeError>;
}

impl<T: IntScalar> DivEuclidChecked for T {
    fn div_euclid_checked(self, rhs: T) -> Result<T, LatticeError> {
        let q = self.checked_div(&rhs).ok_or(LatticeError::Overflow)?;
        let r = self - q * rhs;
        Ok(if r < T::zero() {
            if rhs > T::zero() {
                q - T::one()
            } else {
                q + T::one()
            }
        } else {
            q
        })
    }
}

/// Invariant factors of `ℤ^k / (column span of a)` for a `k × n` matrix:
/// diagonal entries other than 1, with 0 for every free summand.
pub fn quotient_invariants<T: IntScalar>(a: &Matrix<T>) -> Result<Vec<T>, LatticeError> {
    let snf = smith_normal_form(a)?;
    let diag = snf.diagonal();
    let mut out: Vec<T> = diag.iter().copied().filter(|v| !v.is_one() && !v.is_zero()).collect();
    out.extend(std::iter::repeat_n(T::zero(), a.rows() - snf.rank));
    Ok(out)
}

/// Basis (as columns) of the integer kernel of `a`.
pub fn kernel_basis<T: IntScalar>(a: &Matrix<T>) -> Result<Matrix<T>, LatticeError> {
    let snf = smith_normal_form(a)?;
    let cols: Vec<Vec<T>> = (snf.rank..a.cols()).map(|j| snf.v.column(j)).collect();
    if cols.is_empty() {
        return Ok(Matrix::zeros(a.cols(), 0));
    }
    Ok(Matrix::from_columns(&cols))
}

/// `H¹(⟨m⟩, ℤⁿ) = ker(1 + m + … + m^(k−1)) / im(m − 1)` for `m` of finite
/// order `k`, as invariant factors (0 marks a free summand).
pub fn h1_cyclic<T: IntScalar>(m: &Matrix<T>) -> Result<Vec<T>, LatticeError> {
    if !m.is_square() {
        return Err(LatticeError::Shape("action matrix must be square".into()));
    }
    let n = m.rows();
    let k = m.order(64)?;
    let mut norm = Matrix::zeros(n, n);
    let mut power = Matrix::identity(n);
    for _ in 0..k {
        norm = norm.add(&power)?;
        power = power.mul(m)?;
    }
    let snf = smith_normal_form(&norm)?;
    let r = snf.rank;
    if r == n {
        return Ok(Vec::new());
    }
    let image = m.sub(&Matrix::identity(n))?;
    // kernel basis = columns r.. of v, so kernel coordinates are rows r.. of v⁻¹·b
    let mut coords = Matrix::zeros(n - r, n);
    for j in 0..n {
        let c = snf.v_inv.mul_vec(&image.column(j))?;
        if c[..r].iter().any(|x| !x.is_zero()) {
            return Err(LatticeError::ImageNotInKernel);
        }
        for i in r..n {
            coords[(i - r, j)] = c[i];
        }
    }
    quotient_invariants(&coords)
}
