//! Exact integer linear algebra: Smith normal form, column echelon form,
//! integer kernels and images, and linear solving over `Z` and `Z/n`.
//!
//! All entries are arbitrary-precision integers. Matrices act on column
//! vectors; a lattice basis is stored as the columns of an [`IntMatrix`].

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Dense integer matrix stored in row-major order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries supplied for a {}x{} matrix",
                data.len(),
                rows,
                cols
            )));
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from `i64` rows. Panics on ragged input.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMatrix {
            rows: r,
            cols: c,
            data: rows.iter().flatten().map(|&x| BigInt::from(x)).collect(),
        }
    }

    /// Like [`IntMatrix::from_rows`] but reports ragged input as an error.
    pub fn try_from_rows(rows: &[Vec<BigInt>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged matrix rows".into()));
        }
        Ok(IntMatrix {
            rows: r,
            cols: c,
            data: rows.iter().flatten().cloned().collect(),
        })
    }

    /// Matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(rows: usize, columns: &[Vec<BigInt>]) -> Self {
        let cols = columns.len();
        let mut m = Self::zeros(rows, cols);
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, x) in col.iter().enumerate() {
                m.data[i * cols + j] = x.clone();
            }
        }
        m
    }

    pub fn diagonal(entries: &[BigInt]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, d) in entries.iter().enumerate() {
            m.data[i * n + i] = d.clone();
        }
        m
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

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = BigInt::zero();
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !x.is_zero() {
                        acc += a * x;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn neg(&self) -> IntMatrix {
        self.scale(&BigInt::from(-1))
    }

    /// `[self | other]`
    pub fn hstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let cols = self.cols + other.cols;
        let mut out = Self::zeros(self.rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[i * cols + j] = self.get(i, j).clone();
            }
            for j in 0..other.cols {
                out.data[i * cols + self.cols + j] = other.get(i, j).clone();
            }
        }
        out
    }

    /// `[self; other]`
    pub fn vstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        IntMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn block_diag(&self, other: &IntMatrix) -> IntMatrix {
        let mut out = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.set(self.rows + i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }

    /// Columns `range` of the matrix.
    pub fn column_slice(&self, start: usize, end: usize) -> IntMatrix {
        let cols = end - start;
        let mut out = Self::zeros(self.rows, cols);
        for i in 0..self.rows {
            for j in 0..cols {
                out.data[i * cols + j] = self.get(i, start + j).clone();
            }
        }
        out
    }

    pub fn row_slice(&self, start: usize, end: usize) -> IntMatrix {
        IntMatrix {
            rows: end - start,
            cols: self.cols,
            data: self.data[start * self.cols..end * self.cols].to_vec(),
        }
    }

    pub fn trace(&self) -> BigInt {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).sum()
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a: Vec<Vec<BigInt>> = self.to_rows();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    pub fn is_unimodular(&self) -> bool {
        self.is_square() && self.determinant().abs().is_one()
    }

    /// Inverse of a unimodular matrix.
    pub fn inverse_unimodular(&self) -> Result<IntMatrix> {
        if !self.is_square() {
            return Err(Error::Dimension("inverse of a non-square matrix".into()));
        }
        let snf = snf(self);
        if !snf.diagonal().iter().all(One::is_one) || snf.rank() != self.rows {
            return Err(Error::NotUnimodular(self.determinant().to_string()));
        }
        // u a v = 1, so a^{-1} = v u
        Ok(snf.v.mul(&snf.u))
    }

    /// Sum of absolute values of the entries; a cheap size measure.
    pub fn l1_norm(&self) -> BigInt {
        self.data.iter().map(|x| x.abs()).sum()
    }

    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_i64()).collect())
            .collect()
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Structure of a finitely generated abelian group
/// `Z/d_1 + ... + Z/d_k + Z^free_rank` with `d_i | d_{i+1}` and `d_i >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinAbGroup {
    invariant_factors: Vec<BigInt>,
    free_rank: usize,
}

impl FinAbGroup {
    pub fn trivial() -> Self {
        FinAbGroup {
            invariant_factors: Vec::new(),
            free_rank: 0,
        }
    }

    pub fn free(rank: usize) -> Self {
        FinAbGroup {
            invariant_factors: Vec::new(),
            free_rank: rank,
        }
    }

    pub fn cyclic(n: u64) -> Self {
        Self::from_orders(&[BigInt::from(n)], 0)
    }

    /// Normalizes an arbitrary list of cyclic orders (0 meaning `Z`) into
    /// invariant-factor form.
    pub fn from_orders(orders: &[BigInt], extra_free: usize) -> Self {
        let zeros = orders.iter().filter(|d| d.is_zero()).count();
        let finite: Vec<BigInt> = orders
            .iter()
            .filter(|d| !d.is_zero())
            .map(|d| d.abs())
            .collect();
        let diag = IntMatrix::diagonal(&finite);
        let mut g = cokernel_structure(&diag);
        g.free_rank += zeros + extra_free;
        g
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty() && self.free_rank == 0
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }

    /// Exponent of the torsion subgroup (largest invariant factor, or 1).
    pub fn exponent(&self) -> BigInt {
        self.invariant_factors
            .last()
            .cloned()
            .unwrap_or_else(BigInt::one)
    }

    pub fn direct_sum(&self, other: &FinAbGroup) -> FinAbGroup {
        let mut orders = self.invariant_factors.clone();
        orders.extend(other.invariant_factors.iter().cloned());
        Self::from_orders(&orders, self.free_rank + other.free_rank)
    }

    /// Factors as `u64` where they fit (display helpers, tests).
    pub fn factors_u64(&self) -> Vec<u64> {
        self.invariant_factors
            .iter()
            .map(|d| d.to_u64().expect("invariant factor exceeds u64"))
            .collect()
    }
}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = self
            .invariant_factors
            .iter()
            .map(|d| format!("Z/{d}"))
            .collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Smith normal form `u * a * v = s`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    rank: usize,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// The nonzero diagonal entries `d_1 | d_2 | ... | d_rank`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.s.get(i, i).clone()).collect()
    }

    pub fn source_dims(&self) -> (usize, usize) {
        (self.s.rows(), self.s.cols())
    }

    /// Solves `a x = b` (over `Z` when `modulus` is zero, otherwise modulo it).
    pub fn solve(&self, b: &[BigInt], modulus: &BigInt) -> Option<Vec<BigInt>> {
        let c = self.u.mul_vec(b);
        let y = solve_diagonal(&self.diagonal(), &c, self.v.rows(), modulus)?;
        let mut x = self.v.mul_vec(&y);
        if !modulus.is_zero() {
            for xi in &mut x {
                *xi = xi.mod_floor(modulus);
            }
        }
        Some(x)
    }
}

/// Solves `D y = c` for a diagonal `D` with the given nonzero diagonal,
/// `y` of length `unknowns`.
fn solve_diagonal(
    diag: &[BigInt],
    c: &[BigInt],
    unknowns: usize,
    modulus: &BigInt,
) -> Option<Vec<BigInt>> {
    let mut y = vec![BigInt::zero(); unknowns];
    for (i, ci) in c.iter().enumerate() {
        if i < diag.len() {
            let d = &diag[i];
            if modulus.is_zero() {
                let (q, r) = ci.div_rem(d);
                if !r.is_zero() {
                    return None;
                }
                y[i] = q;
            } else {
                let g = d.gcd(modulus);
                if !ci.mod_floor(&g).is_zero() {
                    return None;
                }
                let m = modulus / &g;
                if m.is_one() {
                    y[i] = BigInt::zero();
                    continue;
                }
                let inv = mod_inverse(&(d / &g), &m)?;
                y[i] = ((ci / &g) * inv).mod_floor(&m);
            }
        } else if modulus.is_zero() {
            if !ci.is_zero() {
                return None;
            }
        } else if !ci.mod_floor(modulus).is_zero() {
            return None;
        }
    }
    Some(y)
}

/// Inverse of `a` modulo `m`, when it exists.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// Working state for Smith reduction: the matrix rows, plus optional
/// row/column transformation accumulators.
struct SmithState {
    a: Vec<Vec<BigInt>>,
    u: Option<Vec<Vec<BigInt>>>,
    v: Option<Vec<Vec<BigInt>>>,
    // Extra right-hand-side columns that follow the row operations but are
    // never pivoted on.
    rhs: Vec<Vec<BigInt>>,
}

impl SmithState {
    fn swap_rows(&mut self, i: usize, k: usize) {
        if i == k {
            return;
        }
        self.a.swap(i, k);
        self.rhs.swap(i, k);
        if let Some(u) = &mut self.u {
            u.swap(i, k);
        }
    }

    fn swap_cols(&mut self, j: usize, k: usize) {
        if j == k {
            return;
        }
        for row in &mut self.a {
            row.swap(j, k);
        }
        if let Some(v) = &mut self.v {
            for row in v.iter_mut() {
                row.swap(j, k);
            }
        }
    }

    /// row_i -= q * row_k
    fn row_axpy(&mut self, i: usize, k: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        let (src, dst) = two_rows(&mut self.a, k, i);
        for (d, s) in dst.iter_mut().zip(src.iter()) {
            if !s.is_zero() {
                *d -= q * s;
            }
        }
        let (src, dst) = two_rows(&mut self.rhs, k, i);
        for (d, s) in dst.iter_mut().zip(src.iter()) {
            if !s.is_zero() {
                *d -= q * s;
            }
        }
        if let Some(u) = &mut self.u {
            let (src, dst) = two_rows(u, k, i);
            for (d, s) in dst.iter_mut().zip(src.iter()) {
                if !s.is_zero() {
                    *d -= q * s;
                }
            }
        }
    }

    /// col_j -= q * col_k
    fn col_axpy(&mut self, j: usize, k: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for row in &mut self.a {
            if !row[k].is_zero() {
                let t = q * &row[k];
                row[j] -= t;
            }
        }
        if let Some(v) = &mut self.v {
            for row in v.iter_mut() {
                if !row[k].is_zero() {
                    let t = q * &row[k];
                    row[j] -= t;
                }
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in &mut self.a[i] {
            *x = -&*x;
        }
        for x in &mut self.rhs[i] {
            *x = -&*x;
        }
        if let Some(u) = &mut self.u {
            for x in &mut u[i] {
                *x = -&*x;
            }
        }
    }

    /// Reduces to diagonal form with the divisibility chain; returns the rank.
    fn reduce(&mut self) -> usize {
        let m = self.a.len();
        let n = if m == 0 { 0 } else { self.a[0].len() };
        let mut t = 0;
        while t < m.min(n) {
            // least absolute value pivot, ties broken by (row, col)
            let Some((pi, pj)) = self.least_entry(t) else {
                break;
            };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let mut dirty = false;
                for i in t + 1..m {
                    if !self.a[i][t].is_zero() {
                        let q = &self.a[i][t] / &self.a[t][t];
                        self.row_axpy(i, t, &q);
                        if !self.a[i][t].is_zero() {
                            dirty = true;
                        }
                    }
                }
                for j in t + 1..n {
                    if !self.a[t][j].is_zero() {
                        let q = &self.a[t][j] / &self.a[t][t];
                        self.col_axpy(j, t, &q);
                        if !self.a[t][j].is_zero() {
                            dirty = true;
                        }
                    }
                }
                if dirty {
                    let (pi, pj) = self.least_in_cross(t);
                    self.swap_rows(t, pi);
                    self.swap_cols(t, pj);
                    continue;
                }
                // divisibility: every remaining entry must be a multiple of the pivot
                let p = self.a[t][t].clone();
                let bad = (t + 1..m)
                    .find(|&i| (t + 1..n).any(|j| !self.a[i][j].mod_floor(&p).is_zero()));
                match bad {
                    Some(i) => {
                        // row_t += row_i brings a non-multiple into the pivot row
                        self.row_axpy(t, i, &BigInt::from(-1));
                    }
                    None => break,
                }
            }
            if self.a[t][t].is_negative() {
                self.negate_row(t);
            }
            t += 1;
        }
        t
    }

    fn least_entry(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in self.a.iter().enumerate().skip(t) {
            for (j, x) in row.iter().enumerate().skip(t) {
                if x.is_zero() {
                    continue;
                }
                match best {
                    None => best = Some((i, j)),
                    Some((bi, bj)) => {
                        if x.abs() < self.a[bi][bj].abs() {
                            best = Some((i, j));
                        }
                    }
                }
                if x.abs().is_one() {
                    return best;
                }
            }
        }
        best
    }

    /// Least nonzero entry in row t / column t (at least the pivot is nonzero
    /// or some remainder is).
    fn least_in_cross(&self, t: usize) -> (usize, usize) {
        let mut best = (t, t);
        let mut best_val: Option<BigInt> = None;
        let mut consider = |i: usize, j: usize, x: &BigInt| {
            if x.is_zero() {
                return;
            }
            let ax = x.abs();
            if best_val.as_ref().is_none_or(|b| ax < *b) {
                best_val = Some(ax);
                best = (i, j);
            }
        };
        for i in t..self.a.len() {
            consider(i, t, &self.a[i][t]);
        }
        for j in t + 1..self.a[t].len() {
            consider(t, j, &self.a[t][j]);
        }
        best
    }
}

fn two_rows(rows: &mut [Vec<BigInt>], src: usize, dst: usize) -> (&[BigInt], &mut [BigInt]) {
    assert_ne!(src, dst);
    if src < dst {
        let (a, b) = rows.split_at_mut(dst);
        (&a[src], &mut b[0])
    } else {
        let (a, b) = rows.split_at_mut(src);
        (&b[0], &mut a[dst])
    }
}

fn identity_rows(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

fn rows_to_matrix(rows: Vec<Vec<BigInt>>, cols: usize) -> IntMatrix {
    let r = rows.len();
    IntMatrix {
        rows: r,
        cols,
        data: rows.into_iter().flatten().collect(),
    }
}

/// Smith normal form with transformation matrices.
pub fn snf(a: &IntMatrix) -> SmithForm {
    let mut st = SmithState {
        a: a.to_rows(),
        u: Some(identity_rows(a.rows())),
        v: Some(identity_rows(a.cols())),
        rhs: vec![Vec::new(); a.rows()],
    };
    let rank = st.reduce();
    SmithForm {
        s: rows_to_matrix(st.a, a.cols()),
        u: rows_to_matrix(st.u.unwrap(), a.rows()),
        v: rows_to_matrix(st.v.unwrap(), a.cols()),
        rank,
    }
}

/// Diagonal of the Smith form, without transformation matrices.
pub fn smith_diagonal(a: &IntMatrix) -> Vec<BigInt> {
    let mut st = SmithState {
        a: a.to_rows(),
        u: None,
        v: None,
        rhs: vec![Vec::new(); a.rows()],
    };
    let rank = st.reduce();
    (0..rank).map(|i| st.a[i][i].clone()).collect()
}

/// Smith reduction that carries right-hand sides along instead of the full
/// left transformation: returns the diagonal and `u * rhs`.
///
/// Useful when `a` has many rows and only a few vectors need to be mapped
/// into Smith coordinates.
pub fn smith_with_rhs(a: &IntMatrix, rhs: &[Vec<BigInt>]) -> (Vec<BigInt>, Vec<Vec<BigInt>>) {
    let m = a.rows();
    let mut rows_rhs = vec![Vec::with_capacity(rhs.len()); m];
    for col in rhs {
        assert_eq!(col.len(), m, "rhs length mismatch");
        for (i, x) in col.iter().enumerate() {
            rows_rhs[i].push(x.clone());
        }
    }
    let mut st = SmithState {
        a: a.to_rows(),
        u: None,
        v: None,
        rhs: rows_rhs,
    };
    let rank = st.reduce();
    let diag = (0..rank).map(|i| st.a[i][i].clone()).collect();
    let transformed = (0..rhs.len())
        .map(|k| st.rhs.iter().map(|row| row[k].clone()).collect())
        .collect();
    (diag, transformed)
}

/// Column echelon form `a * t = h` with `t` unimodular. The first `rank`
/// columns of `h` are in echelon form and span the column space; the
/// remaining columns of `h` are zero.
pub struct ColumnEchelon {
    pub h: IntMatrix,
    pub t: IntMatrix,
    pub rank: usize,
}

pub fn column_echelon(a: &IntMatrix) -> ColumnEchelon {
    let m = a.rows();
    let n = a.cols();
    // each working column is [a column ; t column]
    let mut cols: Vec<Vec<BigInt>> = (0..n)
        .map(|j| {
            let mut c = a.column(j);
            c.extend((0..n).map(|k| if k == j { BigInt::one() } else { BigInt::zero() }));
            c
        })
        .collect();
    let mut k = 0;
    for i in 0..m {
        if k == n {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for j in k..n {
                if cols[j][i].is_zero() {
                    continue;
                }
                if best.is_none_or(|b| cols[j][i].abs() < cols[b][i].abs()) {
                    best = Some(j);
                }
            }
            let Some(b) = best else { break };
            cols.swap(k, b);
            let mut done = true;
            for j in k + 1..n {
                if cols[j][i].is_zero() {
                    continue;
                }
                let q = &cols[j][i] / &cols[k][i];
                let (pivot, other) = split_pair(&mut cols, k, j);
                for (x, p) in other.iter_mut().zip(pivot.iter()).skip(i) {
                    if !p.is_zero() {
                        *x -= &q * p;
                    }
                }
                if !other[i].is_zero() {
                    done = false;
                }
            }
            if done {
                if cols[k][i].is_negative() {
                    for x in cols[k].iter_mut() {
                        *x = -&*x;
                    }
                }
                k += 1;
                break;
            }
        }
    }
    let mut h = IntMatrix::zeros(m, n);
    let mut t = IntMatrix::zeros(n, n);
    for (j, col) in cols.into_iter().enumerate() {
        for (i, x) in col.into_iter().enumerate() {
            if i < m {
                h.set(i, j, x);
            } else {
                t.set(i - m, j, x);
            }
        }
    }
    ColumnEchelon { h, t, rank: k }
}

fn split_pair(cols: &mut [Vec<BigInt>], a: usize, b: usize) -> (&[BigInt], &mut [BigInt]) {
    two_rows(cols, a, b)
}

/// Saturated basis of the integer null space `{x : a x = 0}`, as columns.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let ech = column_echelon(a);
    ech.t.column_slice(ech.rank, a.cols())
}

/// Basis of the lattice spanned by the columns of `a`, as columns.
pub fn image_basis(a: &IntMatrix) -> IntMatrix {
    let ech = column_echelon(a);
    ech.h.column_slice(0, ech.rank)
}

/// Solves `a x = b` over `Z` (`modulus == 0`) or over `Z/modulus`.
pub fn solve_linear(a: &IntMatrix, b: &[BigInt], modulus: &BigInt) -> Result<Option<Vec<BigInt>>> {
    if b.len() != a.rows() {
        return Err(Error::Dimension(format!(
            "right-hand side of length {} for a matrix with {} rows",
            b.len(),
            a.rows()
        )));
    }
    if modulus.is_negative() {
        return Err(Error::Invalid("negative modulus".into()));
    }
    Ok(snf(a).solve(b, modulus))
}

/// Structure of `Z^rows / (column span of a)`.
pub fn cokernel_structure(a: &IntMatrix) -> FinAbGroup {
    let diag = smith_diagonal(a);
    let invariant_factors: Vec<BigInt> = diag.iter().filter(|d| !d.is_one()).cloned().collect();
    FinAbGroup {
        invariant_factors,
        free_rank: a.rows() - diag.len(),
    }
}

/// Coordinates of each column of `vectors` in the lattice basis `basis`
/// (full column rank). Fails if some vector is not in the lattice.
pub fn coordinates_in(basis: &IntMatrix, vectors: &IntMatrix) -> Result<IntMatrix> {
    assert_eq!(basis.rows(), vectors.rows());
    let form = snf(basis);
    let zero = BigInt::zero();
    let mut cols = Vec::with_capacity(vectors.cols());
    for j in 0..vectors.cols() {
        let x = form
            .solve(&vectors.column(j), &zero)
            .ok_or_else(|| Error::Invalid("vector outside the lattice".into()))?;
        cols.push(x);
    }
    Ok(IntMatrix::from_columns(basis.cols(), &cols))
}

/// Structure of `big / small` where `small ⊆ big` are lattices given by
/// spanning columns (`big` must be a basis).
pub fn quotient_structure(big_basis: &IntMatrix, small_span: &IntMatrix) -> Result<FinAbGroup> {
    let coords = coordinates_in(big_basis, small_span)?;
    Ok(cokernel_structure(&coords))
}

/// Incrementally maintained integer lattice in row echelon form, for
/// membership tests while a spanning set grows.
#[derive(Clone, Debug)]
pub struct LatticeBuilder {
    dim: usize,
    // rows in echelon form; pivots strictly increasing
    rows: Vec<(usize, Vec<BigInt>)>,
}

impl LatticeBuilder {
    pub fn new(dim: usize) -> Self {
        LatticeBuilder {
            dim,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn reduce(&self, v: &mut [BigInt]) {
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let q = v[*p].div_floor(&row[*p]);
            if !q.is_zero() {
                for (x, r) in v.iter_mut().zip(row.iter()).skip(*p) {
                    if !r.is_zero() {
                        *x -= &q * r;
                    }
                }
            }
        }
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        let mut w = v.to_vec();
        // full reduction: pivots must divide exactly
        for (p, row) in &self.rows {
            if (0..*p).any(|i| !w[i].is_zero()) {
                return false;
            }
            if w[*p].is_zero() {
                continue;
            }
            let (q, r) = w[*p].div_rem(&row[*p]);
            if !r.is_zero() {
                return false;
            }
            for (x, rr) in w.iter_mut().zip(row.iter()).skip(*p) {
                if !rr.is_zero() {
                    *x -= &q * rr;
                }
            }
        }
        w.iter().all(Zero::is_zero)
    }

    /// Adds a vector to the spanning set; returns whether the lattice grew.
    pub fn insert(&mut self, v: &[BigInt]) -> bool {
        assert_eq!(v.len(), self.dim);
        if self.contains(v) {
            return false;
        }
        let mut cur = v.to_vec();
        self.reduce(&mut cur);
        let mut idx = 0;
        loop {
            let Some(p) = cur.iter().position(|x| !x.is_zero()) else {
                return true;
            };
            while idx < self.rows.len() && self.rows[idx].0 < p {
                idx += 1;
            }
            if idx == self.rows.len() || self.rows[idx].0 > p {
                if cur[p].is_negative() {
                    for x in cur.iter_mut() {
                        *x = -&*x;
                    }
                }
                self.rows.insert(idx, (p, cur));
                return true;
            }
            // same pivot: gcd-combine the two rows
            let row = self.rows[idx].1.clone();
            let e = row[p].extended_gcd(&cur[p]);
            let a = &row[p] / &e.gcd;
            let b = &cur[p] / &e.gcd;
            let new_row: Vec<BigInt> = row
                .iter()
                .zip(cur.iter())
                .map(|(r, c)| &e.x * r + &e.y * c)
                .collect();
            let rest: Vec<BigInt> = row
                .iter()
                .zip(cur.iter())
                .map(|(r, c)| &a * c - &b * r)
                .collect();
            let mut new_row = new_row;
            if new_row[p].is_negative() {
                for x in new_row.iter_mut() {
                    *x = -&*x;
                }
            }
            self.rows[idx].1 = new_row;
            cur = rest;
            idx += 1;
        }
    }

    /// Basis vectors (echelon rows) as matrix columns.
    pub fn basis(&self) -> IntMatrix {
        let cols: Vec<Vec<BigInt>> = self.rows.iter().map(|(_, r)| r.clone()).collect();
        IntMatrix::from_columns(self.dim, &cols)
    }
}

pub fn int(x: i64) -> BigInt {
    BigInt::from(x)
}

pub fn ivec(xs: &[i64]) -> Vec<BigInt> {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    #[test]
    fn snf_small_example() {
        let a = m(&[&[2, 4], &[6, 8]]);
        let f = snf(&a);
        assert_eq!(f.diagonal(), ivec(&[2, 4]));
        assert_eq!(f.u.mul(&a).mul(&f.v), f.s);
        assert!(f.u.determinant().abs().is_one());
        assert!(f.v.determinant().abs().is_one());
    }

    #[test]
    fn snf_identity_and_zero() {
        let f = snf(&IntMatrix::identity(4));
        assert_eq!(f.s, IntMatrix::identity(4));
        let z = IntMatrix::zeros(3, 2);
        let f = snf(&z);
        assert_eq!(f.rank(), 0);
        assert!(f.s.is_zero());
    }

    #[test]
    fn snf_is_deterministic() {
        let a = m(&[&[3, 5, 7], &[2, -4, 6], &[0, 9, 1]]);
        let f1 = snf(&a);
        let f2 = snf(&a);
        assert_eq!(f1.u, f2.u);
        assert_eq!(f1.v, f2.v);
    }

    #[test]
    fn kernel_examples() {
        let k = kernel_basis(&m(&[&[1, 1, 1]]));
        assert_eq!(k.cols(), 2);
        assert!(m(&[&[1, 1, 1]]).mul(&k).is_zero());
        assert_eq!(kernel_basis(&m(&[&[2, 1], &[1, 1]])).cols(), 0);
        let k = kernel_basis(&m(&[&[2, -1], &[-4, 2]]));
        assert_eq!(k.cols(), 1);
        let c = k.column(0);
        assert!(c == ivec(&[1, 2]) || c == ivec(&[-1, -2]));
    }

    #[test]
    fn solve_examples() {
        let a = m(&[&[2]]);
        assert_eq!(solve_linear(&a, &ivec(&[1]), &int(0)).unwrap(), None);
        assert_eq!(solve_linear(&a, &ivec(&[1]), &int(3)).unwrap(), Some(ivec(&[2])));
        let id = IntMatrix::identity(3);
        let b = ivec(&[4, -7, 11]);
        assert_eq!(solve_linear(&id, &b, &int(0)).unwrap(), Some(b));
        assert!(solve_linear(&id, &ivec(&[1]), &int(0)).is_err());
    }

    #[test]
    fn cokernel_examples() {
        let g = cokernel_structure(&m(&[&[2, 0], &[0, 3]]));
        assert_eq!(g.factors_u64(), vec![6]);
        assert_eq!(g.free_rank(), 0);
        let g = cokernel_structure(&m(&[&[0]]));
        assert_eq!(g, FinAbGroup::free(1));
        assert!(cokernel_structure(&IntMatrix::identity(3)).is_trivial());
    }

    #[test]
    fn determinant_and_inverse() {
        let a = m(&[&[2, 1, 0], &[1, 1, 0], &[0, 0, -1]]);
        assert_eq!(a.determinant(), int(-1));
        let inv = a.inverse_unimodular().unwrap();
        assert!(a.mul(&inv).is_identity());
        assert!(m(&[&[2]]).inverse_unimodular().is_err());
    }

    #[test]
    fn lattice_builder_membership() {
        let mut l = LatticeBuilder::new(2);
        assert!(l.insert(&ivec(&[2, 0])));
        assert!(l.insert(&ivec(&[0, 3])));
        assert!(l.contains(&ivec(&[4, -3])));
        assert!(!l.contains(&ivec(&[1, 0])));
        assert!(l.insert(&ivec(&[3, 0])));
        assert!(l.contains(&ivec(&[1, 0])));
        assert_eq!(l.rank(), 2);
    }

    #[test]
    fn fin_ab_display() {
        assert_eq!(FinAbGroup::trivial().to_string(), "0");
        let g = FinAbGroup::from_orders(&ivec(&[2, 3, 2]), 1);
        assert_eq!(g.to_string(), "Z/2 + Z/6 + Z");
    }
}
