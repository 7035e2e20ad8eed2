//! Prime fields `F_p` and dense exact linear algebra over them.
//!
//! Entries are stored reduced in `0..p` as `u32`; products go through `u64`.
//! Matrices act on column vectors: a `rows x cols` matrix maps `F_p^cols`
//! to `F_p^rows`.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub const DEFAULT_PRIME: u32 = 107;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// The first `count` primes, ascending.
pub fn first_primes(count: usize) -> Vec<u32> {
    (2u32..)
        .filter(|&n| is_prime(n as u64))
        .take(count)
        .collect()
}

impl PrimeField {
    pub fn new(p: u64) -> Result<PrimeField> {
        if p >= 1 << 16 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p: p as u32 })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn reduce(&self, x: i64) -> u32 {
        x.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn pow(&self, mut a: u32, mut e: u64) -> u32 {
        let mut r = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero in F_{}", self.p);
        self.pow(a, self.p as u64 - 2)
    }

    /// Symmetric integer lift in `(-p/2, p/2]`.
    pub fn lift(&self, a: u32) -> i64 {
        if a as u64 * 2 > self.p as u64 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }
}

impl Default for PrimeField {
    fn default() -> Self {
        PrimeField { p: DEFAULT_PRIME }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Debug, Clone)]
pub struct Rref {
    pub matrix: FMatrix,
    pub pivots: Vec<usize>,
}

impl FMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> FMatrix {
        FMatrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> FMatrix {
        let mut m = FMatrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_fn(
        field: PrimeField,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> i64,
    ) -> FMatrix {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(field.reduce(f(r, c)));
            }
        }
        FMatrix {
            field,
            rows,
            cols,
            data,
        }
    }

    /// Builds a matrix from integer rows; all rows must have length `cols`.
    pub fn from_rows(field: PrimeField, cols: usize, rows: &[Vec<i64>]) -> Result<FMatrix> {
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged matrix rows".into()));
        }
        Ok(FMatrix::from_fn(field, rows.len(), cols, |r, c| rows[r][c]))
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(field: PrimeField, rows: usize, columns: &[Vec<u32>]) -> FMatrix {
        let mut m = FMatrix::zeros(field, rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (r, &x) in col.iter().enumerate() {
                m.data[r * m.cols + c] = x % field.p;
            }
        }
        m
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % self.field.p;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<u32>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> FMatrix {
        FMatrix::from_fn(self.field, self.cols, self.rows, |r, c| {
            self.get(c, r) as i64
        })
    }

    fn check_field(&self, other: &FMatrix) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.p, other.field.p));
        }
        Ok(())
    }

    pub fn mul(&self, other: &FMatrix) -> Result<FMatrix> {
        self.check_field(other)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let p = self.field.p as u64;
        let mut out = FMatrix::zeros(self.field, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k) as u64;
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let idx = r * out.cols + c;
                    out.data[idx] =
                        ((out.data[idx] as u64 + a * other.get(k, c) as u64) % p) as u32;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols);
        let p = self.field.p as u64;
        (0..self.rows)
            .map(|r| {
                let mut acc = 0u64;
                for c in 0..self.cols {
                    acc += self.get(r, c) as u64 * v[c] as u64;
                }
                (acc % p) as u32
            })
            .collect()
    }

    pub fn add(&self, other: &FMatrix) -> Result<FMatrix> {
        self.check_field(other)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch(
                "matrix sum of different shapes".into(),
            ));
        }
        let f = self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        Ok(FMatrix {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn sub(&self, other: &FMatrix) -> Result<FMatrix> {
        self.check_field(other)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch(
                "matrix difference of different shapes".into(),
            ));
        }
        let f = self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.sub(a, b))
            .collect();
        Ok(FMatrix {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &FMatrix) -> Result<FMatrix> {
        self.check_field(other)?;
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch("hstack row mismatch".into()));
        }
        Ok(FMatrix::from_fn(
            self.field,
            self.rows,
            self.cols + other.cols,
            |r, c| {
                if c < self.cols {
                    self.get(r, c) as i64
                } else {
                    other.get(r, c - self.cols) as i64
                }
            },
        ))
    }

    /// `[self ; other]`.
    pub fn vstack(&self, other: &FMatrix) -> Result<FMatrix> {
        self.check_field(other)?;
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch("vstack column mismatch".into()));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(FMatrix {
            field: self.field,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Block diagonal `diag(self, other)`.
    pub fn block_diag(&self, other: &FMatrix) -> FMatrix {
        FMatrix::from_fn(
            self.field,
            self.rows + other.rows,
            self.cols + other.cols,
            |r, c| {
                if r < self.rows && c < self.cols {
                    self.get(r, c) as i64
                } else if r >= self.rows && c >= self.cols {
                    other.get(r - self.rows, c - self.cols) as i64
                } else {
                    0
                }
            },
        )
    }

    /// Rows `r0..r1` as a new matrix.
    pub fn row_block(&self, r0: usize, r1: usize) -> FMatrix {
        FMatrix {
            field: self.field,
            rows: r1 - r0,
            cols: self.cols,
            data: self.data[r0 * self.cols..r1 * self.cols].to_vec(),
        }
    }

    /// Columns `c0..c1` as a new matrix.
    pub fn col_block(&self, c0: usize, c1: usize) -> FMatrix {
        FMatrix::from_fn(self.field, self.rows, c1 - c0, |r, c| {
            self.get(r, c0 + c) as i64
        })
    }

    pub fn rref(&self) -> Rref {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(piv) = (row..m.rows).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            if piv != row {
                for c in 0..m.cols {
                    m.data.swap(piv * m.cols + c, row * m.cols + c);
                }
            }
            let inv = f.inv(m.get(row, col));
            for c in col..m.cols {
                let idx = row * m.cols + c;
                m.data[idx] = f.mul(m.data[idx], inv);
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let factor = m.get(r, col);
                if factor == 0 {
                    continue;
                }
                for c in col..m.cols {
                    let sub = f.mul(factor, m.data[row * m.cols + c]);
                    let idx = r * m.cols + c;
                    m.data[idx] = f.sub(m.data[idx], sub);
                }
            }
            pivots.push(col);
            row += 1;
        }
        Rref { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Determinant of a square matrix; the empty matrix has determinant 1.
    pub fn det(&self) -> Result<u32> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "determinant of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let f = self.field;
        let n = self.rows;
        let mut m = self.data.clone();
        let mut det = 1u32;
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| m[r * n + col] != 0) else {
                return Ok(0);
            };
            if piv != col {
                for c in 0..n {
                    m.swap(piv * n + c, col * n + c);
                }
                det = f.neg(det);
            }
            let pv = m[col * n + col];
            det = f.mul(det, pv);
            let inv = f.inv(pv);
            for r in col + 1..n {
                let factor = f.mul(m[r * n + col], inv);
                if factor == 0 {
                    continue;
                }
                for c in col..n {
                    let sub = f.mul(factor, m[col * n + c]);
                    m[r * n + c] = f.sub(m[r * n + c], sub);
                }
            }
        }
        Ok(det)
    }

    /// The rows listed in `rows`, in that order.
    pub fn select_rows(&self, rows: &[usize]) -> FMatrix {
        FMatrix::from_fn(self.field, rows.len(), self.cols, |r, c| {
            self.get(rows[r], c) as i64
        })
    }

    /// Columns spanning the right kernel, one per free column of the rref.
    pub fn kernel_basis(&self) -> FMatrix {
        let Rref { matrix: r, pivots } = self.rref();
        let f = self.field;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = FMatrix::zeros(f, self.cols, free.len());
        for (j, &fc) in free.iter().enumerate() {
            k.data[fc * k.cols + j] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                k.data[pc * k.cols + j] = f.neg(r.get(i, fc));
            }
        }
        k
    }

    /// Columns of `self` at the pivot positions: a basis of the column space.
    pub fn image_basis(&self) -> FMatrix {
        let pivots = self.rref().pivots;
        FMatrix::from_fn(self.field, self.rows, pivots.len(), |r, c| {
            self.get(r, pivots[c]) as i64
        })
    }

    /// Some `x` with `self * x = b`, if the system is consistent.
    pub fn solve(&self, b: &[u32]) -> Result<Option<Vec<u32>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side of length {} for {} rows",
                b.len(),
                self.rows
            )));
        }
        let rhs = FMatrix::from_columns(self.field, self.rows, &[b.to_vec()]);
        Ok(self.solve_matrix(&rhs)?.map(|x| x.column(0)))
    }

    /// Some `X` with `self * X = b` (column by column), if consistent.
    pub fn solve_matrix(&self, b: &FMatrix) -> Result<Option<FMatrix>> {
        self.check_field(b)?;
        if b.rows != self.rows {
            return Err(Error::DimensionMismatch("solve_matrix row mismatch".into()));
        }
        let aug = self.hstack(b)?;
        let Rref { matrix: r, pivots } = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return Ok(None);
        }
        let mut x = FMatrix::zeros(self.field, self.cols, b.cols);
        for (i, &pc) in pivots.iter().enumerate() {
            for c in 0..b.cols {
                x.data[pc * x.cols + c] = r.get(i, self.cols + c);
            }
        }
        Ok(Some(x))
    }

    /// Coordinates of the columns of `vectors` in the basis formed by the
    /// columns of `self` (which must be linearly independent and span them).
    pub fn coordinates_of(&self, vectors: &FMatrix) -> Result<FMatrix> {
        self.solve_matrix(vectors)?
            .ok_or_else(|| Error::Internal("vectors are not in the span of the basis".into()))
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for r in 0..self.rows {
            let line: Vec<String> = self
                .row(r)
                .iter()
                .map(|&x| self.field.lift(x).to_string())
                .collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }

    /// Parses the row-per-line text format; `cols` is needed for matrices
    /// with no rows.
    pub fn parse(field: PrimeField, text: &str, cols: usize) -> Result<FMatrix> {
        let mut rows = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let row = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<i64>().map_err(|_| Error::Parse {
                        line: i + 1,
                        msg: format!("bad entry `{t}`"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        FMatrix::from_rows(field, cols, &rows)
    }
}

impl fmt::Display for FMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

/// A fixed model of `V / U` for a subspace `U` of `F_p^n`: the coordinates of
/// `V` that are not pivots of the rref of `U` give a complement.
#[derive(Debug, Clone)]
pub struct Quotient {
    /// rref rows spanning `U`
    basis_rref: FMatrix,
    pivots: Vec<usize>,
    complement: Vec<usize>,
}

impl Quotient {
    /// `span` holds spanning vectors of `U` as columns.
    pub fn new(span: &FMatrix) -> Quotient {
        let Rref { matrix, pivots } = span.transpose().rref();
        let rank = pivots.len();
        let basis_rref = matrix.row_block(0, rank);
        let complement = (0..span.rows()).filter(|c| !pivots.contains(c)).collect();
        Quotient {
            basis_rref,
            pivots,
            complement,
        }
    }

    pub fn dim(&self) -> usize {
        self.complement.len()
    }

    pub fn complement_coords(&self) -> &[usize] {
        &self.complement
    }

    /// Coordinates of `v + U` in the quotient model.
    pub fn project(&self, v: &[u32]) -> Vec<u32> {
        let f = self.basis_rref.field();
        let mut w = v.to_vec();
        for (i, &pc) in self.pivots.iter().enumerate() {
            let factor = w[pc];
            if factor == 0 {
                continue;
            }
            for c in 0..w.len() {
                w[c] = f.sub(w[c], f.mul(factor, self.basis_rref.get(i, c)));
            }
        }
        self.complement.iter().map(|&c| w[c]).collect()
    }

    /// Matrix of `V -> V/U` in the quotient model.
    pub fn projection_matrix(&self, field: PrimeField, n: usize) -> FMatrix {
        let cols: Vec<Vec<u32>> = (0..n)
            .map(|c| {
                let mut e = vec![0; n];
                e[c] = 1;
                self.project(&e)
            })
            .collect();
        FMatrix::from_columns(field, self.dim(), &cols)
    }

    /// Standard basis vectors of the complement, as columns of an `n x dim` matrix.
    pub fn section(&self, field: PrimeField, n: usize) -> FMatrix {
        let mut m = FMatrix::zeros(field, n, self.dim());
        for (j, &c) in self.complement.iter().enumerate() {
            m.set(c, j, 1);
        }
        m
    }
}

/// The composite `X --a--> V --> V / U` where `U` is spanned by the columns
/// of `u_span`.
pub fn quotient_map(a: &FMatrix, u_span: &FMatrix) -> Result<FMatrix> {
    if a.rows() != u_span.rows() {
        return Err(Error::DimensionMismatch(format!(
            "map into dimension {} but subspace of dimension-{} space",
            a.rows(),
            u_span.rows()
        )));
    }
    let q = Quotient::new(u_span);
    let cols: Vec<Vec<u32>> = a.columns().iter().map(|c| q.project(c)).collect();
    Ok(FMatrix::from_columns(a.field(), q.dim(), &cols))
}

/// Number of `k`-dimensional subspaces of `F_q^n`.
pub fn gaussian_binomial(n: u64, k: u64, q: u64) -> Result<BigUint> {
    if k > n || q < 2 {
        return Err(Error::OutOfRange(format!(
            "gaussian_binomial({n}, {k}, {q})"
        )));
    }
    let k = k.min(n - k);
    let q = BigUint::from(q);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= q.pow((n - i) as u32) - BigUint::one();
        den *= q.pow((i + 1) as u32) - BigUint::one();
    }
    debug_assert!((&num % &den).is_zero());
    Ok(num / den)
}

/// Word-size variant for the counting recursions; `None` on overflow.
pub fn gaussian_binomial_u128(n: u32, k: u32, q: u32) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    // Pascal-type recursion [n,k] = [n-1,k-1] + q^k [n-1,k] keeps values exact.
    let mut row = vec![0u128; (k + 1) as usize];
    row[0] = 1;
    for m in 1..=n {
        for j in (1..=k.min(m)).rev() {
            let qj = (q as u128).checked_pow(j)?;
            let v = row[j as usize - 1].checked_add(qj.checked_mul(row[j as usize])?)?;
            row[j as usize] = v;
        }
    }
    Some(row[k as usize])
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn determinants() {
        let k = f(7);
        let m = FMatrix::from_rows(k, 2, &[vec![1, 2], vec![3, 4]]).unwrap();
        assert_eq!(k.lift(m.det().unwrap()), -2);
        let swap = FMatrix::from_rows(k, 2, &[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(k.lift(swap.det().unwrap()), -1);
        assert_eq!(FMatrix::zeros(k, 0, 0).det().unwrap(), 1);
        let singular =
            FMatrix::from_rows(k, 3, &[vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]]).unwrap();
        assert_eq!(singular.det().unwrap(), 0);
        assert!(FMatrix::zeros(k, 1, 2).det().is_err());
    }

    #[test]
    fn field_construction() {
        assert!(PrimeField::new(107).is_ok());
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(91).is_err());
        assert!(PrimeField::new(65537).is_err());
        let k = f(7);
        assert_eq!(k.mul(3, k.inv(3)), 1);
        assert_eq!(k.lift(6), -1);
        assert_eq!(first_primes(6), vec![2, 3, 5, 7, 11, 13]);
    }

    #[test]
    fn rank_examples() {
        let k = f(107);
        assert_eq!(FMatrix::identity(k, 3).rank(), 3);
        assert_eq!(FMatrix::zeros(k, 3, 4).rank(), 0);
        let m = FMatrix::from_rows(f(2), 2, &[vec![1, 1], vec![1, 1]]).unwrap();
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn kernel_examples() {
        let k = f(107);
        assert_eq!(FMatrix::identity(k, 4).kernel_basis().cols(), 0);
        assert_eq!(FMatrix::zeros(k, 3, 3).kernel_basis().cols(), 3);
        let m = FMatrix::from_rows(f(3), 3, &[vec![1, 0, 1]]).unwrap();
        let ker = m.kernel_basis();
        assert_eq!(ker.cols(), 2);
        assert!(m.mul(&ker).unwrap().is_zero());
    }

    #[test]
    fn solve_and_quotient() {
        let k = f(11);
        let id = FMatrix::identity(k, 3);
        assert_eq!(id.solve(&[1, 2, 3]).unwrap(), Some(vec![1, 2, 3]));
        let singular = FMatrix::from_rows(k, 2, &[vec![1, 1], vec![1, 1]]).unwrap();
        assert_eq!(singular.solve(&[1, 2]).unwrap(), None);
        assert!(id.solve(&[1, 2]).is_err());

        let q = quotient_map(&id, &id).unwrap();
        assert_eq!((q.rows(), q.cols()), (0, 3));

        // rank one map with image spanned by (1,1,0); hyperplane x - y = 0 contains it
        let a = FMatrix::from_rows(k, 3, &[vec![1, 2, 0], vec![1, 2, 0], vec![0, 0, 0]]).unwrap();
        let hyper = FMatrix::from_rows(k, 2, &[vec![1, 0], vec![1, 0], vec![0, 1]]).unwrap();
        let qa = quotient_map(&a, &hyper).unwrap();
        assert_eq!((qa.rows(), qa.cols()), (1, 3));
        assert!(qa.is_zero());
    }

    #[test]
    fn matrix_text_round_trip() {
        let k = f(107);
        let m = FMatrix::from_rows(k, 3, &[vec![1, -1, 0], vec![2, 0, 5]]).unwrap();
        assert_eq!(m.to_text(), "1 -1 0\n2 0 5\n");
        assert_eq!(FMatrix::parse(k, &m.to_text(), 3).unwrap(), m);
    }

    #[test]
    fn gaussian_binomial_examples() {
        assert_eq!(gaussian_binomial(5, 0, 3).unwrap(), BigUint::from(1u32));
        assert_eq!(gaussian_binomial(4, 2, 2).unwrap(), BigUint::from(35u32));
        assert_eq!(gaussian_binomial(3, 1, 3).unwrap(), BigUint::from(13u32));
        assert!(gaussian_binomial(2, 3, 2).is_err());
        assert!(gaussian_binomial(2, 1, 1).is_err());
        assert_eq!(gaussian_binomial_u128(4, 2, 2), Some(35));
        assert_eq!(gaussian_binomial_u128(2, 3, 2), Some(0));
    }

    /// Counts k-subspaces of F_q^n by enumerating all k-tuples of vectors and
    /// dividing by |GL_k(F_q)|-many ordered bases per subspace.
    fn subspaces_by_bases(n: u32, k: u32, q: u32) -> u64 {
        let qn = (q as u64).pow(n);
        let mut ordered_bases_in_space = 1u64;
        let mut ordered_bases_in_subspace = 1u64;
        for i in 0..k {
            ordered_bases_in_space *= qn - (q as u64).pow(i);
            ordered_bases_in_subspace *= (q as u64).pow(k) - (q as u64).pow(i);
        }
        ordered_bases_in_space / ordered_bases_in_subspace
    }

    #[test]
    fn gaussian_binomial_matches_basis_count() {
        for q in [2u32, 3, 5] {
            for n in 0..5u32 {
                for k in 0..=n {
                    let expected = subspaces_by_bases(n, k, q);
                    assert_eq!(
                        gaussian_binomial(n as u64, k as u64, q as u64).unwrap(),
                        BigUint::from(expected)
                    );
                    assert_eq!(gaussian_binomial_u128(n, k, q), Some(expected as u128));
                }
            }
        }
    }

    fn arb_matrix() -> impl Strategy<Value = (u64, usize, usize, Vec<i64>)> {
        (
            prop::sample::select(vec![2u64, 3, 5, 107]),
            1usize..6,
            1usize..6,
        )
            .prop_flat_map(|(p, r, c)| {
                (
                    Just(p),
                    Just(r),
                    Just(c),
                    prop::collection::vec(0i64..7, r * c),
                )
            })
    }

    proptest! {
        #[test]
        fn rank_nullity((p, r, c, entries) in arb_matrix()) {
            let m = FMatrix::from_fn(f(p), r, c, |i, j| entries[i * c + j]);
            let ker = m.kernel_basis();
            prop_assert_eq!(m.rank() + ker.cols(), c);
            prop_assert!(m.mul(&ker).unwrap().is_zero());
            prop_assert_eq!(ker.rank(), ker.cols());
        }

        #[test]
        fn rref_idempotent((p, r, c, entries) in arb_matrix()) {
            let m = FMatrix::from_fn(f(p), r, c, |i, j| entries[i * c + j]);
            let once = m.rref();
            let twice = once.matrix.rref();
            prop_assert_eq!(&once.matrix, &twice.matrix);
            prop_assert_eq!(once.pivots.len(), m.rank());
            prop_assert_eq!(m.image_basis().cols(), m.rank());
        }

        #[test]
        fn gaussian_symmetry(n in 0u64..7, k in 0u64..7, q in prop::sample::select(vec![2u64, 3, 4, 5, 7])) {
            prop_assume!(k <= n);
            prop_assert_eq!(gaussian_binomial(n, k, q).unwrap(), gaussian_binomial(n, n - k, q).unwrap());
        }
    }
}
