//! Exact integer linear algebra.
//!
//! Smith normal form with transformation matrices, cokernels of integer
//! matrices as finitely generated abelian groups, and transport of lattice
//! endomorphisms to those cokernels. Arithmetic is checked `i64`; any
//! overflow aborts the computation with [`IntMatError::Overflow`].

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntMatError {
    #[error("integer overflow during {0}")]
    Overflow(&'static str),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("endomorphism does not preserve image lattice")]
    NotInvariant,
    #[error("invalid elementary divisor {0}")]
    BadDivisor(u64),
}

pub type Result<T> = std::result::Result<T, IntMatError>;

fn add(a: i64, b: i64) -> Result<i64> {
    a.checked_add(b).ok_or(IntMatError::Overflow("addition"))
}

fn mul(a: i64, b: i64) -> Result<i64> {
    a.checked_mul(b).ok_or(IntMatError::Overflow("multiplication"))
}

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, entries: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, entries: Vec<i64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(IntMatError::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(IntMatrix { rows, cols, entries })
    }

    /// Builds a matrix from nested rows. Panics on ragged input.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "ragged rows");
            entries.extend_from_slice(r);
        }
        IntMatrix { rows: rows.len(), cols, entries }
    }

    /// Permutation matrix sending basis vector `e_i` to `e_{perm[i]}`.
    pub fn permutation(perm: &[usize]) -> Self {
        let n = perm.len();
        let mut m = Self::zeros(n, n);
        for (i, &p) in perm.iter().enumerate() {
            m[(p, i)] = 1;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
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

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(IntMatError::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] = add(out[(i, j)], mul(a, other[(k, j)])?)?;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[i64]) -> Result<Vec<i64>> {
        if v.len() != self.cols {
            return Err(IntMatError::Dimension(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .try_fold(0i64, |acc, (&a, &b)| add(acc, mul(a, b)?))
            })
            .collect()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<i64> {
        if !self.is_square() {
            return Err(IntMatError::Dimension("determinant of non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(1);
        }
        let mut a: Vec<Vec<i128>> =
            (0..n).map(|i| self.row(i).iter().map(|&x| x as i128).collect()).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a[k][k] == 0 {
                match (k + 1..n).find(|&i| a[i][k] != 0) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return Ok(0),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = a[i][j]
                        .checked_mul(a[k][k])
                        .and_then(|x| x.checked_sub(a[i][k].checked_mul(a[k][j])?))
                        .ok_or(IntMatError::Overflow("determinant"))?;
                    a[i][j] = num / prev;
                }
            }
            prev = a[k][k];
        }
        i64::try_from(sign * a[n - 1][n - 1]).map_err(|_| IntMatError::Overflow("determinant"))
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = i64;

    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// `u * m * v == d` with `u`, `v` unimodular and `d` diagonal in Smith form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfResult {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    /// Inverse of `u`, carried along so cokernel elements can be lifted.
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SnfResult {
    /// Diagonal of `d`, length `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<i64> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d[(i, i)]).collect()
    }

    /// Nonzero diagonal entries.
    pub fn elementary_divisors(&self) -> Vec<i64> {
        self.diagonal().into_iter().filter(|&x| x != 0).collect()
    }

    pub fn rank(&self) -> usize {
        self.elementary_divisors().len()
    }
}

/// Smith normal form over `i64`.
///
/// Returns [`IntMatError::Overflow`] when an entry of `d` or of the
/// transformation matrices does not fit; [`smith_normal_form_wide`] runs the
/// same reduction and keeps `i128` entries.
pub fn smith_normal_form(m: &IntMatrix) -> Result<SnfResult> {
    let w = smith_normal_form_wide(m)?;
    Ok(SnfResult {
        u: w.u.narrow()?,
        d: w.d.narrow()?,
        v: w.v.narrow()?,
        u_inv: w.u_inv.narrow()?,
        v_inv: w.v_inv.narrow()?,
    })
}

/// Smith form with `i128` transformation matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WideSnf {
    pub u: WideMatrix,
    pub d: WideMatrix,
    pub v: WideMatrix,
    pub u_inv: WideMatrix,
    pub v_inv: WideMatrix,
}

/// Smith normal form with `i128` arithmetic.
///
/// Alternates row and column Hermite reduction (smallest pivot in the
/// active column or row, ties to the lowest index, entries off the pivot
/// reduced to `[0, pivot)`) until the matrix is diagonal, repairs the
/// divisibility chain, then size-reduces the transforms against kernel
/// vectors. Every step is deterministic.
pub fn smith_normal_form_wide(m: &IntMatrix) -> Result<WideSnf> {
    let mut s = Reducer::new(m);
    s.run()?;
    s.reduce_against_kernels()?;
    Ok(WideSnf { u: s.u, d: s.a, v: s.v, u_inv: s.u_inv, v_inv: s.v_inv })
}

/// Quotient rounded to nearest, so remainders satisfy `|r| <= |p| / 2`.
fn nearest_quotient(x: i128, p: i128) -> i128 {
    let q = x.div_euclid(p);
    let r = x - q * p;
    if 2 * r > p.abs() {
        q + p.signum()
    } else {
        q
    }
}

struct Reducer {
    a: WideMatrix,
    u: WideMatrix,
    u_inv: WideMatrix,
    v: WideMatrix,
    v_inv: WideMatrix,
}

impl Reducer {
    fn new(m: &IntMatrix) -> Self {
        Reducer {
            a: WideMatrix::from(m),
            u: WideMatrix::identity(m.rows()),
            u_inv: WideMatrix::identity(m.rows()),
            v: WideMatrix::identity(m.cols()),
            v_inv: WideMatrix::identity(m.cols()),
        }
    }

    fn rows(&self) -> usize {
        self.a.rows
    }

    fn cols(&self) -> usize {
        self.a.cols
    }

    // Row operation E on the left: a <- E a, u <- E u, u_inv <- u_inv E^-1.
    fn row_swap(&mut self, x: usize, y: usize) {
        self.a.swap_rows(x, y);
        self.u.swap_rows(x, y);
        self.u_inv.swap_cols(x, y);
    }

    fn row_add(&mut self, dst: usize, src: usize, f: i128) -> Result<()> {
        self.a.add_row(dst, src, f)?;
        self.u.add_row(dst, src, f)?;
        self.u_inv.add_col(src, dst, f.checked_neg().ok_or(IntMatError::Overflow("elimination"))?)
    }

    fn row_negate(&mut self, i: usize) {
        self.a.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }

    // Column operation E on the right: a <- a E, v <- v E, v_inv <- E^-1 v_inv.
    fn col_swap(&mut self, x: usize, y: usize) {
        self.a.swap_cols(x, y);
        self.v.swap_cols(x, y);
        self.v_inv.swap_rows(x, y);
    }

    fn col_add(&mut self, dst: usize, src: usize, f: i128) -> Result<()> {
        self.a.add_col(dst, src, f)?;
        self.v.add_col(dst, src, f)?;
        self.v_inv.add_row(src, dst, f.checked_neg().ok_or(IntMatError::Overflow("elimination"))?)
    }

    fn col_negate(&mut self, j: usize) {
        self.a.negate_col(j);
        self.v.negate_col(j);
        self.v_inv.negate_row(j);
    }

    /// Row-style Hermite form: echelon, positive pivots, entries above each
    /// pivot in `[0, pivot)`.
    fn row_hermite(&mut self) -> Result<()> {
        let mut pr = 0;
        for c in 0..self.cols() {
            if pr >= self.rows() {
                break;
            }
            loop {
                let best = (pr..self.rows())
                    .filter(|&i| self.a.get(i, c) != 0)
                    .min_by_key(|&i| self.a.get(i, c).unsigned_abs());
                let Some(b) = best else { break };
                self.row_swap(pr, b);
                let p = self.a.get(pr, c);
                let mut clear = true;
                for i in pr + 1..self.rows() {
                    let q = nearest_quotient(self.a.get(i, c), p);
                    self.row_add(i, pr, -q)?;
                    clear &= self.a.get(i, c) == 0;
                }
                if clear {
                    break;
                }
            }
            if self.a.get(pr, c) == 0 {
                continue;
            }
            if self.a.get(pr, c) < 0 {
                self.row_negate(pr);
            }
            let p = self.a.get(pr, c);
            for i in 0..pr {
                let q = self.a.get(i, c).div_euclid(p);
                self.row_add(i, pr, -q)?;
            }
            pr += 1;
        }
        Ok(())
    }

    /// Column-style Hermite form, the transpose of [`Self::row_hermite`].
    fn col_hermite(&mut self) -> Result<()> {
        let mut pc = 0;
        for r in 0..self.rows() {
            if pc >= self.cols() {
                break;
            }
            loop {
                let best = (pc..self.cols())
                    .filter(|&j| self.a.get(r, j) != 0)
                    .min_by_key(|&j| self.a.get(r, j).unsigned_abs());
                let Some(b) = best else { break };
                self.col_swap(pc, b);
                let p = self.a.get(r, pc);
                let mut clear = true;
                for j in pc + 1..self.cols() {
                    let q = nearest_quotient(self.a.get(r, j), p);
                    self.col_add(j, pc, -q)?;
                    clear &= self.a.get(r, j) == 0;
                }
                if clear {
                    break;
                }
            }
            if self.a.get(r, pc) == 0 {
                continue;
            }
            if self.a.get(r, pc) < 0 {
                self.col_negate(pc);
            }
            let p = self.a.get(r, pc);
            for j in 0..pc {
                let q = self.a.get(r, j).div_euclid(p);
                self.col_add(j, pc, -q)?;
            }
            pc += 1;
        }
        Ok(())
    }

    fn is_diagonal(&self) -> bool {
        (0..self.rows()).all(|i| (0..self.cols()).all(|j| i == j || self.a.get(i, j) == 0))
    }

    fn run(&mut self) -> Result<()> {
        let n = self.rows().min(self.cols());
        loop {
            while !self.is_diagonal() {
                self.row_hermite()?;
                if self.is_diagonal() {
                    break;
                }
                self.col_hermite()?;
            }
            let offender = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).find(|&(i, j)| {
                let (p, q) = (self.a.get(i, i), self.a.get(j, j));
                (p == 0 && q != 0) || (p != 0 && q % p != 0)
            });
            let Some((i, j)) = offender else { break };
            if self.a.get(i, i) == 0 {
                self.row_swap(i, j);
                self.col_swap(i, j);
            } else {
                // Column reduction first, or the row form just undoes the sum.
                self.row_add(i, j, 1)?;
                self.col_hermite()?;
            }
        }
        for i in 0..n {
            if self.a.get(i, i) < 0 {
                self.row_negate(i);
            }
        }
        Ok(())
    }

    /// Rows of `u` past the rank span the left kernel and columns of `v`
    /// past the rank span the kernel; adding them elsewhere leaves
    /// `u m v` unchanged.
    fn reduce_against_kernels(&mut self) -> Result<()> {
        let rank = (0..self.rows().min(self.cols())).filter(|&i| self.a.get(i, i) != 0).count();
        for _ in 0..64 {
            let mut changed = false;
            for j in rank..self.rows() {
                let kj = self.u.row(j);
                for i in (0..self.rows()).filter(|&i| i != j) {
                    if let Some(c) = reduction_step(&self.u.row(i), &kj) {
                        self.u.add_row(i, j, -c)?;
                        self.u_inv.add_col(j, i, c)?;
                        changed = true;
                    }
                }
            }
            for j in rank..self.cols() {
                let kj = self.v.column(j);
                for i in (0..self.cols()).filter(|&i| i != j) {
                    if let Some(c) = reduction_step(&self.v.column(i), &kj) {
                        self.v.add_col(i, j, -c)?;
                        self.v_inv.add_row(j, i, c)?;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        Ok(())
    }
}

/// Multiple of `k` to subtract from `x` when that shortens it.
fn reduction_step(x: &[i128], k: &[i128]) -> Option<i128> {
    let norm = |v: &[i128]| v.iter().map(|&t| (t as f64) * (t as f64)).sum::<f64>();
    let kk = norm(k);
    if kk == 0.0 {
        return None;
    }
    let dot: f64 = x.iter().zip(k).map(|(&a, &b)| a as f64 * b as f64).sum();
    let c = (dot / kk).round();
    if c == 0.0 || !c.is_finite() || c.abs() > 1e30 {
        return None;
    }
    let c = c as i128;
    let shorter: Vec<i128> = x
        .iter()
        .zip(k)
        .map(|(&a, &b)| c.checked_mul(b).and_then(|y| a.checked_sub(y)))
        .collect::<Option<_>>()?;
    (norm(&shorter) < norm(x)).then_some(c)
}

/// Dense row-major `i128` matrix; the wide counterpart of [`IntMatrix`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WideMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<i128>,
}

impl WideMatrix {
    pub fn identity(n: usize) -> Self {
        let mut entries = vec![0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        WideMatrix { rows: n, cols: n, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i128 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> Vec<i128> {
        self.entries[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<i128> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    /// Largest entry bit length, 0 for the zero matrix.
    pub fn max_bits(&self) -> u32 {
        self.entries.iter().map(|x| 128 - x.unsigned_abs().leading_zeros()).max().unwrap_or(0)
    }

    pub fn mul(&self, other: &WideMatrix) -> Result<WideMatrix> {
        if self.cols != other.rows {
            return Err(IntMatError::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut entries = vec![0i128; self.rows * other.cols];
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc: i128 = 0;
                for k in 0..self.cols {
                    acc = self
                        .get(i, k)
                        .checked_mul(other.get(k, j))
                        .and_then(|x| x.checked_add(acc))
                        .ok_or(IntMatError::Overflow("multiplication"))?;
                }
                entries[i * other.cols + j] = acc;
            }
        }
        Ok(WideMatrix { rows: self.rows, cols: other.cols, entries })
    }

    /// Back to `i64`, or [`IntMatError::Overflow`].
    pub fn narrow(&self) -> Result<IntMatrix> {
        let entries = self
            .entries
            .iter()
            .map(|&x| i64::try_from(x).map_err(|_| IntMatError::Overflow("narrowing to i64")))
            .collect::<Result<Vec<_>>>()?;
        IntMatrix::from_vec(self.rows, self.cols, entries)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.entries.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.entries.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    fn add_row(&mut self, dst: usize, src: usize, f: i128) -> Result<()> {
        if f == 0 {
            return Ok(());
        }
        for j in 0..self.cols {
            let x = f
                .checked_mul(self.get(src, j))
                .and_then(|y| y.checked_add(self.get(dst, j)))
                .ok_or(IntMatError::Overflow("elimination"))?;
            self.entries[dst * self.cols + j] = x;
        }
        Ok(())
    }

    fn add_col(&mut self, dst: usize, src: usize, f: i128) -> Result<()> {
        if f == 0 {
            return Ok(());
        }
        for i in 0..self.rows {
            let x = f
                .checked_mul(self.get(i, src))
                .and_then(|y| y.checked_add(self.get(i, dst)))
                .ok_or(IntMatError::Overflow("elimination"))?;
            self.entries[i * self.cols + dst] = x;
        }
        Ok(())
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            self.entries[i * self.cols + j] *= -1;
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            self.entries[i * self.cols + j] *= -1;
        }
    }
}

impl From<&IntMatrix> for WideMatrix {
    fn from(m: &IntMatrix) -> Self {
        WideMatrix { rows: m.rows(), cols: m.cols(), entries: m.entries().iter().map(|&x| x as i128).collect() }
    }
}

impl fmt::Debug for WideMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<i128>> = (0..self.rows).map(|i| self.row(i)).collect();
        write!(f, "{rows:?}")
    }
}

/// Finitely generated abelian group `Z/d_1 + ... + Z/d_k + Z^free_rank`,
/// with `2 <= d_1 | d_2 | ... | d_k`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FinAbGroup {
    divisors: Vec<u64>,
    free_rank: usize,
}

impl FinAbGroup {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        FinAbGroup { divisors: Vec::new(), free_rank: rank }
    }

    pub fn cyclic(n: u64) -> Self {
        match n {
            0 => Self::free(1),
            1 => Self::trivial(),
            _ => FinAbGroup { divisors: vec![n], free_rank: 0 },
        }
    }

    /// Validated constructor from an invariant-factor chain.
    pub fn new(divisors: Vec<u64>, free_rank: usize) -> Result<Self> {
        for (i, &d) in divisors.iter().enumerate() {
            if d < 2 {
                return Err(IntMatError::BadDivisor(d));
            }
            if i + 1 < divisors.len() && !divisors[i + 1].is_multiple_of(d) {
                return Err(IntMatError::BadDivisor(divisors[i + 1]));
            }
        }
        Ok(FinAbGroup { divisors, free_rank })
    }

    /// Normalizes an arbitrary direct sum of cyclic groups `Z/n_i`
    /// (`n_i = 0` meaning `Z`) into invariant-factor form.
    pub fn from_cyclic_factors(orders: &[u64]) -> Result<Self> {
        let free_rank = orders.iter().filter(|&&n| n == 0).count();
        let mut diag: Vec<i64> = Vec::new();
        for &n in orders.iter().filter(|&&n| n > 1) {
            diag.push(i64::try_from(n).map_err(|_| IntMatError::Overflow("cyclic order"))?);
        }
        let k = diag.len();
        let mut m = IntMatrix::zeros(k, k);
        for (i, &n) in diag.iter().enumerate() {
            m[(i, i)] = n;
        }
        let snf = smith_normal_form(&m)?;
        let divisors = snf
            .elementary_divisors()
            .into_iter()
            .filter(|&x| x > 1)
            .map(|x| x as u64)
            .collect();
        Ok(FinAbGroup { divisors, free_rank })
    }

    pub fn divisors(&self) -> &[u64] {
        &self.divisors
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> FinAbGroup {
        FinAbGroup { divisors: self.divisors.clone(), free_rank: 0 }
    }

    pub fn is_trivial(&self) -> bool {
        self.divisors.is_empty() && self.free_rank == 0
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> u64 {
        self.divisors.iter().product()
    }

    /// Order of the group, `None` when infinite.
    pub fn order(&self) -> Option<u64> {
        self.is_finite().then(|| self.torsion_order())
    }

    /// `dim_{F_l} (G / lG)` restricted to torsion: the number of divisors
    /// divisible by `ell`.
    pub fn l_rank(&self, ell: u64) -> usize {
        self.divisors.iter().filter(|&&d| d % ell == 0).count()
    }

    /// Exponents of the `ell`-primary part: `Z_l (x) G` torsion is
    /// `sum Z_l / l^{a_i}` with `a_i = v_l(d_i) > 0`.
    pub fn l_primary_exponents(&self, ell: u64) -> Vec<u32> {
        self.divisors
            .iter()
            .map(|&d| valuation(d, ell))
            .filter(|&a| a > 0)
            .collect()
    }

    pub fn direct_sum(&self, other: &FinAbGroup) -> Result<FinAbGroup> {
        let mut orders: Vec<u64> = self.divisors.iter().chain(&other.divisors).copied().collect();
        orders.extend(std::iter::repeat_n(0, self.free_rank + other.free_rank));
        Self::from_cyclic_factors(&orders)
    }
}

pub fn valuation(mut n: u64, ell: u64) -> u32 {
    if n == 0 || ell < 2 {
        return 0;
    }
    let mut v = 0;
    while n.is_multiple_of(ell) {
        n /= ell;
        v += 1;
    }
    v
}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        while i < self.divisors.len() {
            let d = self.divisors[i];
            let run = self.divisors[i..].iter().take_while(|&&x| x == d).count();
            parts.push(if run == 1 { format!("Z/{d}") } else { format!("(Z/{d})^{run}") });
            i += run;
        }
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Cokernel `Z^rows / M Z^cols` together with its coordinate data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cokernel {
    pub group: FinAbGroup,
    /// `rows x (torsion coords + free coords)`; row `i` is the image of `e_i`,
    /// torsion entries reduced modulo their divisor.
    pub projection: IntMatrix,
    snf: SnfResult,
    /// Indices into the SNF diagonal that carry torsion, then free coordinates.
    torsion_slots: Vec<usize>,
    free_slots: Vec<usize>,
}

impl Cokernel {
    pub fn snf(&self) -> &SnfResult {
        &self.snf
    }

    /// Cokernel coordinates of a vector of `Z^rows`.
    pub fn coordinates(&self, x: &[i64]) -> Result<Vec<i64>> {
        let y = self.snf.u.mul_vec(x)?;
        let divs = self.group.divisors();
        let mut out: Vec<i64> = self
            .torsion_slots
            .iter()
            .zip(divs)
            .map(|(&s, &d)| y[s].rem_euclid(d as i64))
            .collect();
        out.extend(self.free_slots.iter().map(|&s| y[s]));
        Ok(out)
    }

    /// A lift to `Z^rows` of the `k`-th torsion generator.
    fn torsion_generator(&self, k: usize) -> Vec<i64> {
        self.snf.u_inv.column(self.torsion_slots[k])
    }
}

pub fn cokernel(m: &IntMatrix) -> Result<Cokernel> {
    let snf = smith_normal_form(m)?;
    let rows = m.rows();
    let diag = snf.diagonal();
    let mut torsion_slots = Vec::new();
    let mut free_slots = Vec::new();
    let mut divisors = Vec::new();
    for i in 0..rows {
        let d = diag.get(i).copied().unwrap_or(0);
        match d {
            1 => {}
            0 => free_slots.push(i),
            d => {
                torsion_slots.push(i);
                divisors.push(d as u64);
            }
        }
    }
    let group = FinAbGroup::new(divisors, free_slots.len())?;
    let ncoords = torsion_slots.len() + free_slots.len();
    let mut projection = IntMatrix::zeros(rows, ncoords);
    for i in 0..rows {
        for (k, &s) in torsion_slots.iter().enumerate() {
            projection[(i, k)] = snf.u[(s, i)].rem_euclid(group.divisors()[k] as i64);
        }
        for (k, &s) in free_slots.iter().enumerate() {
            projection[(i, torsion_slots.len() + k)] = snf.u[(s, i)];
        }
    }
    Ok(Cokernel { group, projection, snf, torsion_slots, free_slots })
}

/// Action of `g` on the torsion of `coker M`, in torsion coordinates.
///
/// Column `j` is the image of the `j`-th torsion generator; entry `(i, j)`
/// is reduced modulo divisor `i`.
pub fn induced_endomorphism(m: &IntMatrix, g: &IntMatrix) -> Result<IntMatrix> {
    let coker = cokernel(m)?;
    induced_on_cokernel(&coker, m, g)
}

pub fn induced_on_cokernel(coker: &Cokernel, m: &IntMatrix, g: &IntMatrix) -> Result<IntMatrix> {
    if !g.is_square() || g.rows() != m.rows() {
        return Err(IntMatError::Dimension(format!(
            "endomorphism {}x{} on Z^{}",
            g.rows(),
            g.cols(),
            m.rows()
        )));
    }
    let snf = coker.snf();
    let diag = snf.diagonal();
    // g(column of M) must lie in the image: its U-coordinates are multiples of the diagonal.
    for j in 0..m.cols() {
        let y = snf.u.mul_vec(&g.mul_vec(&m.column(j))?)?;
        for (i, &yi) in y.iter().enumerate() {
            let d = diag.get(i).copied().unwrap_or(0);
            let ok = if d == 0 { yi == 0 } else { yi % d == 0 };
            if !ok {
                return Err(IntMatError::NotInvariant);
            }
        }
    }
    let k = coker.group.divisors().len();
    let mut out = IntMatrix::zeros(k, k);
    for j in 0..k {
        let image = g.mul_vec(&coker.torsion_generator(j))?;
        let coords = coker.coordinates(&image)?;
        for i in 0..k {
            out[(i, j)] = coords[i];
        }
    }
    Ok(out)
}

/// Product of two torsion-coordinate matrices, reduced modulo the divisors.
pub fn compose_mod(divisors: &[u64], a: &IntMatrix, b: &IntMatrix) -> Result<IntMatrix> {
    let mut p = a.mul(b)?;
    reduce_mod_divisors(divisors, &mut p);
    Ok(p)
}

pub fn reduce_mod_divisors(divisors: &[u64], m: &mut IntMatrix) {
    for i in 0..m.rows() {
        let d = divisors[i] as i64;
        for j in 0..m.cols() {
            m[(i, j)] = m[(i, j)].rem_euclid(d);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cartan_a2() -> IntMatrix {
        IntMatrix::from_rows(&[[2, -1], [-1, 2]])
    }

    fn check_snf(m: &IntMatrix) -> SnfResult {
        let s = smith_normal_form(m).unwrap();
        assert_eq!(s.u.mul(m).unwrap().mul(&s.v).unwrap(), s.d);
        assert_eq!(s.u.mul(&s.u_inv).unwrap(), IntMatrix::identity(m.rows()));
        s
    }

    #[test]
    fn snf_cartan_a2() {
        let s = check_snf(&cartan_a2());
        assert_eq!(s.diagonal(), vec![1, 3]);
        assert_eq!(s.u.determinant().unwrap().abs(), 1);
        assert_eq!(s.v.determinant().unwrap().abs(), 1);
    }

    #[test]
    fn snf_identity_and_zero() {
        let s = check_snf(&IntMatrix::identity(3));
        assert_eq!(s.d, IntMatrix::identity(3));
        assert_eq!(s.u, IntMatrix::identity(3));
        assert_eq!(s.v, IntMatrix::identity(3));

        let s = check_snf(&IntMatrix::from_rows(&[[0]]));
        assert_eq!(s.d, IntMatrix::from_rows(&[[0]]));
        let c = cokernel(&IntMatrix::from_rows(&[[0]])).unwrap();
        assert_eq!(c.group, FinAbGroup::free(1));
    }

    #[test]
    fn snf_rectangular() {
        let m = IntMatrix::from_rows(&[[2, 4, 4], [-6, 6, 12]]);
        let s = check_snf(&m);
        assert_eq!(s.diagonal(), vec![2, 6]);
        let c = cokernel(&m.transpose()).unwrap();
        assert_eq!(c.group, FinAbGroup::new(vec![2, 6], 1).unwrap());
    }

    #[test]
    fn snf_needs_divisibility_fix() {
        let m = IntMatrix::from_rows(&[[2, 0], [0, 3]]);
        assert_eq!(check_snf(&m).diagonal(), vec![1, 6]);
    }

    #[test]
    fn overflow_is_reported() {
        let big = i64::MAX / 2 + 7;
        let m = IntMatrix::from_rows(&[[big, big - 1], [big - 3, big]]);
        match smith_normal_form(&m) {
            Err(IntMatError::Overflow(_)) => {}
            Ok(s) => assert_eq!(s.u.mul(&m).unwrap().mul(&s.v).unwrap(), s.d),
            Err(e) => panic!("unexpected {e}"),
        }
        let m = IntMatrix::from_rows(&[[i64::MAX, 1], [1, i64::MAX]]);
        assert!(m.mul(&m).is_err());
    }

    #[test]
    fn cokernel_projection_a2() {
        let c = cokernel(&cartan_a2()).unwrap();
        assert_eq!(c.group.divisors(), &[3]);
        // omega_1 and omega_2 are opposite generators of Z/3.
        let p1 = c.projection[(0, 0)];
        let p2 = c.projection[(1, 0)];
        assert_ne!(p1, 0);
        assert_eq!((p1 + p2) % 3, 0);
        // Columns of M map to zero.
        for j in 0..2 {
            assert_eq!(c.coordinates(&cartan_a2().column(j)).unwrap(), vec![0]);
        }
    }

    /// Coset oracle for Z^2 / C Z^2 with C the A2 Cartan matrix: the class
    /// of (a, b) is (a - b) mod 3 since (2,-1) and (-1,2) both have a - b = 0 mod 3.
    fn a2_class(v: &[i64]) -> i64 {
        (v[0] - v[1]).rem_euclid(3)
    }

    #[test]
    fn induced_flip_on_a2_is_minus_one() {
        let flip = IntMatrix::permutation(&[1, 0]);
        // Oracle: flip sends class of e_1 (= 1) to class of e_2 (= 2 = -1).
        assert_eq!(a2_class(&flip.mul_vec(&[1, 0]).unwrap()), 2);
        let g = induced_endomorphism(&cartan_a2(), &flip).unwrap();
        assert_eq!(g, IntMatrix::from_rows(&[[2]]));
    }

    #[test]
    fn induced_reflection_on_a2_is_identity() {
        // s_1 on the weight basis: omega_1 -> omega_1 - alpha_1, alpha_1 = 2 omega_1 - omega_2.
        let s1 = IntMatrix::from_rows(&[[-1, 0], [1, 1]]);
        let g = induced_endomorphism(&cartan_a2(), &s1).unwrap();
        assert_eq!(g, IntMatrix::from_rows(&[[1]]));
        let id = induced_endomorphism(&cartan_a2(), &IntMatrix::identity(2)).unwrap();
        assert_eq!(id, IntMatrix::from_rows(&[[1]]));
    }

    #[test]
    fn induced_rejects_non_invariant() {
        let m = IntMatrix::from_rows(&[[2, 0], [0, 1]]);
        let swap = IntMatrix::permutation(&[1, 0]);
        assert_eq!(induced_endomorphism(&m, &swap), Err(IntMatError::NotInvariant));
    }

    #[test]
    fn group_normalization() {
        let g = FinAbGroup::from_cyclic_factors(&[2, 3, 4, 0]).unwrap();
        assert_eq!(g.divisors(), &[2, 12]);
        assert_eq!(g.free_rank(), 1);
        assert_eq!(g.to_string(), "Z/2 + Z/12 + Z");
        assert_eq!(g.l_rank(2), 2);
        assert_eq!(g.l_rank(3), 1);
        assert_eq!(g.l_primary_exponents(2), vec![1, 2]);
        assert!(FinAbGroup::new(vec![4, 2], 0).is_err());
        assert!(FinAbGroup::new(vec![1], 0).is_err());
        assert_eq!(FinAbGroup::new(vec![2, 2], 0).unwrap().to_string(), "(Z/2)^2");
    }
}
