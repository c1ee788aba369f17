//! Exact integer matrix arithmetic.
//!
//! Everything here is computed over arbitrary-precision integers; there is
//! no floating point anywhere in this module. The central tool is the Smith
//! normal form `U * M * V = D` with unimodular `U`, `V`, from which we derive
//! ranks, saturated kernel lattices, quotient invariants, and integer linear
//! system solving.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl std::fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count must be rows*cols");
        IntMatrix { rows, cols, entries }
    }

    /// Build from machine integers, row-major.
    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        Self::new(rows, cols, entries.iter().map(|&e| BigInt::from(e)).collect())
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMatrix { rows: r, cols: c, entries: rows.into_iter().flatten().collect() }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, entries: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        (0..self.cols).map(|j| self.get(i, j).clone()).collect()
    }

    pub fn col(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row_is_zero(&self, i: usize) -> bool {
        (0..self.cols).all(|j| self.get(i, j).is_zero())
    }

    pub fn col_is_zero(&self, j: usize) -> bool {
        (0..self.rows).all(|i| self.get(i, j).is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let cur = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &v[j]).sum())
            .collect()
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows, "row count mismatch in hstack");
        let mut out = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }

    /// Copy with row `i` zeroed out unless `keep(i)`.
    pub fn select_rows(&self, keep: impl Fn(usize) -> bool) -> IntMatrix {
        let mut out = self.clone();
        for i in 0..self.rows {
            if !keep(i) {
                for j in 0..self.cols {
                    out.set(i, j, BigInt::zero());
                }
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row_a -= q * row_b
    fn row_sub(&mut self, a: usize, b: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = self.get(a, j) - q * self.get(b, j);
            self.set(a, j, v);
        }
    }

    /// col_a -= q * col_b
    fn col_sub(&mut self, a: usize, b: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = self.get(i, a) - q * self.get(i, b);
            self.set(i, a, v);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }

    /// row_a += row_b
    fn row_add(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            let v = self.get(a, j) + self.get(b, j);
            self.set(a, j, v);
        }
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant needs a square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for t in 0..n - 1 {
            if m.get(t, t).is_zero() {
                let swap = (t + 1..n).find(|&i| !m.get(i, t).is_zero());
                match swap {
                    Some(i) => {
                        m.swap_rows(t, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in t + 1..n {
                for j in t + 1..n {
                    let v = (m.get(i, j) * m.get(t, t) - m.get(i, t) * m.get(t, j)) / &prev;
                    m.set(i, j, v);
                }
                m.set(i, t, BigInt::zero());
            }
            prev = m.get(t, t).clone();
        }
        sign * m.get(n - 1, n - 1)
    }
}

/// Smith normal form `U * M * V = D` of a source matrix `M`.
///
/// `U` and `V` are unimodular; `D` is diagonal with nonnegative entries,
/// each dividing the next.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        (0..self.d.rows().min(self.d.cols())).filter(|&t| !self.d.get(t, t).is_zero()).count()
    }

    /// Diagonal entries d_1, ..., d_min(r,c).
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols())).map(|t| self.d.get(t, t).clone()).collect()
    }
}

/// Position of the smallest nonzero |entry| in the trailing submatrix, ties
/// broken by row-major order.
fn smallest_pivot(m: &IntMatrix, from: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in from..m.rows() {
        for j in from..m.cols() {
            let e = m.get(i, j);
            if e.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if m.get(bi, bj).abs() <= e.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

/// Smith normal form with smallest-absolute-value pivoting.
///
/// The global minimum of the trailing submatrix is re-selected on every
/// reduction pass, which keeps the pass count Euclidean and the entries
/// from snowballing.
pub fn smith_normal_form(m: &IntMatrix) -> SmithDecomposition {
    let mut d = m.clone();
    let mut u = IntMatrix::identity(m.rows());
    let mut v = IntMatrix::identity(m.cols());
    let bound = m.rows().min(m.cols());
    let mut t = 0;
    while t < bound {
        if smallest_pivot(&d, t).is_none() {
            break; // trailing block is zero
        }
        loop {
            let (pi, pj) = smallest_pivot(&d, t).expect("nonzero entry persists");
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);
            // leave remainders in place; the next pass picks the new minimum
            let mut reduced = true;
            for i in t + 1..d.rows() {
                if d.get(i, t).is_zero() {
                    continue;
                }
                let q = d.get(i, t).div_floor(d.get(t, t));
                d.row_sub(i, t, &q);
                u.row_sub(i, t, &q);
                if !d.get(i, t).is_zero() {
                    reduced = false;
                }
            }
            for j in t + 1..d.cols() {
                if d.get(t, j).is_zero() {
                    continue;
                }
                let q = d.get(t, j).div_floor(d.get(t, t));
                d.col_sub(j, t, &q);
                v.col_sub(j, t, &q);
                if !d.get(t, j).is_zero() {
                    reduced = false;
                }
            }
            if !reduced {
                continue;
            }
            // divisibility: pivot must divide the whole trailing block
            let offender = (t + 1..d.rows())
                .flat_map(|i| (t + 1..d.cols()).map(move |j| (i, j)))
                .find(|&(i, j)| !d.get(i, j).mod_floor(d.get(t, t)).is_zero());
            match offender {
                Some((i, _)) => {
                    d.row_add(t, i);
                    u.row_add(t, i);
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    SmithDecomposition { u, d, v }
}

/// Rank over the rationals.
pub fn rank(m: &IntMatrix) -> usize {
    smith_normal_form(m).rank()
}

/// Basis of the saturated integer kernel `{v : Mv = 0}`, as matrix columns.
///
/// The returned columns span a direct summand of Z^cols: any integer vector
/// killed by `M` is an integer combination of them.
pub fn kernel_basis(m: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(m);
    let r = snf.rank();
    let n = m.cols();
    let mut out = IntMatrix::zeros(n, n - r);
    for j in r..n {
        for i in 0..n {
            out.set(i, j - r, snf.v.get(i, j).clone());
        }
    }
    out
}

/// Structure of the quotient `Z^rows / (column span of M)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientStructure {
    /// Invariant factors > 1, in divisibility order.
    pub torsion: Vec<BigInt>,
    pub free_rank: usize,
}

pub fn quotient_structure(m: &IntMatrix) -> QuotientStructure {
    let snf = smith_normal_form(m);
    let torsion = snf.diagonal().into_iter().filter(|d| !d.is_zero() && !d.is_one()).collect();
    QuotientStructure { torsion, free_rank: m.rows() - snf.rank() }
}

/// Column-style Hermite normal form `H = M * V'` (V' unimodular).
///
/// Pivots walk down and to the right, are positive, entries to their right
/// in the pivot row vanish and entries to their left are reduced into
/// `[0, pivot)`. Unique for a fixed column span, which makes completed
/// relation matrices reproducible.
pub fn column_hermite_form(m: &IntMatrix) -> IntMatrix {
    let mut h = m.clone();
    let mut c = 0;
    for row in 0..h.rows() {
        if c >= h.cols() {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for j in c..h.cols() {
                if h.get(row, j).is_zero() {
                    continue;
                }
                match best {
                    Some(b) if h.get(row, b).abs() <= h.get(row, j).abs() => {}
                    _ => best = Some(j),
                }
            }
            let Some(j) = best else { break };
            h.swap_cols(c, j);
            let mut clean = true;
            for j in c + 1..h.cols() {
                if h.get(row, j).is_zero() {
                    continue;
                }
                let q = h.get(row, j).div_floor(h.get(row, c));
                h.col_sub(j, c, &q);
                if !h.get(row, j).is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if h.get(row, c).is_zero() {
            continue; // no pivot in this row
        }
        if h.get(row, c).is_negative() {
            h.negate_col(c);
        }
        for j in 0..c {
            let q = h.get(row, j).div_floor(h.get(row, c));
            h.col_sub(j, c, &q);
        }
        c += 1;
    }
    h
}

/// Solve `M x = b` over the integers; `None` when no integral solution exists.
pub fn solve_integer(m: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(b.len(), m.rows(), "rhs length mismatch");
    let snf = smith_normal_form(m);
    let r = snf.rank();
    let ub = snf.u.apply(b);
    let mut y = vec![BigInt::zero(); m.cols()];
    for (i, ubi) in ub.iter().enumerate() {
        if i < r {
            let d = snf.d.get(i, i);
            let (q, rem) = ubi.div_rem(d);
            if !rem.is_zero() {
                return None;
            }
            y[i] = q;
        } else if !ubi.is_zero() {
            return None;
        }
    }
    Some(snf.v.apply(&y))
}

/// True when every column of `sub` is an integer combination of `of`'s columns.
pub fn columns_in_span(sub: &IntMatrix, of: &IntMatrix) -> bool {
    (0..sub.cols()).all(|j| solve_integer(of, &sub.col(j)).is_some())
}

/// Inverse of a unimodular matrix (integer entries).
pub fn inverse_unimodular(m: &IntMatrix) -> Result<IntMatrix, Error> {
    assert_eq!(m.rows(), m.cols(), "inverse needs a square matrix");
    let n = m.rows();
    let mut out = IntMatrix::zeros(n, n);
    for j in 0..n {
        let mut e = vec![BigInt::zero(); n];
        e[j] = BigInt::one();
        let col = solve_integer(m, &e).ok_or(Error::NotUnimodular)?;
        for i in 0..n {
            out.set(i, j, col[i].clone());
        }
    }
    Ok(out)
}
