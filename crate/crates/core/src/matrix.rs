//! Dense integer matrices, Hermite and Smith normal forms, exact solving.
//!
//! Conventions used throughout the crate:
//!
//! * `hnf` works on column vectors with a left transform: `H = U * M`,
//!   `|det U| = 1`. `H` is in column echelon form with pivot rows strictly
//!   increasing, positive pivots and the entries above each pivot reduced into
//!   `[0, pivot)`. For a square nonsingular `M` this puts the pivot of column
//!   `j` at row `j`, so the first `d-1` columns end with a zero coordinate —
//!   the form the parallelepiped recursion needs.
//! * `col_lattice_hnf` instead preserves the column span (column operations
//!   only) and is the canonical basis used for lattice comparisons.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rat::{Rat, RatVec};

pub type IntVec = Vec<BigInt>;

#[derive(Clone, PartialEq, Eq)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl std::fmt::Debug for IntMat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "IntMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for IntMat {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl IntMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMat { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Self::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m[(i, j)] = BigInt::from(v);
            }
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[IntVec]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, |col| col.len());
        let mut m = Self::zero(r, c);
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), r, "ragged columns");
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn col(&self, j: usize) -> IntVec {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row(&self, i: usize) -> IntVec {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn transpose(&self) -> IntMat {
        let mut t = IntMat::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = a * &other[(k, j)];
                    out[(i, j)] += add;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> IntVec {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| &self[(i, j)] * &v[j]).sum())
            .collect()
    }

    pub fn mul_rat_vec(&self, v: &[Rat]) -> RatVec {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| Rat::from_integer(self[(i, j)].clone()) * &v[j])
                    .sum()
            })
            .collect()
    }

    /// Determinant by fraction-free Bareiss elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "det of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.data.clone();
        let mut sign = 1i32;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k * n + k].is_zero() {
                match (k + 1..n).find(|&i| !a[i * n + k].is_zero()) {
                    Some(p) => {
                        for j in 0..n {
                            a.swap(k * n + j, p * n + j);
                        }
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[i * n + j] * &a[k * n + k] - &a[i * n + k] * &a[k * n + j];
                    a[i * n + j] = &num / &prev;
                }
                a[i * n + k] = BigInt::zero();
            }
            prev = a[k * n + k].clone();
        }
        let d = a[(n - 1) * n + (n - 1)].clone();
        if sign < 0 {
            -d
        } else {
            d
        }
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.det().abs().is_one()
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        let mut a: Vec<RatVec> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| Rat::from_integer(self[(i, j)].clone())).collect())
            .collect();
        rat_row_rank(&mut a, self.cols)
    }

    /// Exact inverse of a unimodular matrix (integral by construction).
    pub fn unimodular_inverse(&self) -> IntMat {
        assert!(self.is_unimodular(), "inverse of non-unimodular matrix");
        let n = self.rows;
        let mut inv = IntMat::zero(n, n);
        for j in 0..n {
            let mut e = vec![Rat::zero(); n];
            e[j] = Rat::one();
            let col = solve_rational(self, &e).expect("unimodular matrix is nonsingular");
            for i in 0..n {
                debug_assert!(col[i].denom().is_one());
                inv[(i, j)] = col[i].numer().clone();
            }
        }
        inv
    }
}

fn rat_row_rank(a: &mut [RatVec], cols: usize) -> usize {
    let rows = a.len();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for i in rank + 1..rows {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] / &a[rank][c];
            for j in c..cols {
                let sub = &f * &a[rank][j];
                a[i][j] = &a[i][j] - sub;
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Rank of a set of integer vectors.
pub fn int_vec_rank(vecs: &[IntVec]) -> usize {
    if vecs.is_empty() {
        return 0;
    }
    IntMat::from_cols(vecs).rank()
}

/// Hermite normal form with a left transform: returns `(H, U)` with
/// `H = U * M`, `|det U| = 1`, pivot rows strictly increasing per column,
/// positive pivots, entries above each pivot reduced into `[0, pivot)`.
pub fn hnf(m: &IntMat) -> (IntMat, IntMat) {
    let rows = m.rows();
    let cols = m.cols();
    let mut h = m.clone();
    let mut u = IntMat::identity(rows);
    let mut r = 0;

    let row_sub = |h: &mut IntMat, u: &mut IntMat, dst: usize, src: usize, q: &BigInt| {
        if q.is_zero() {
            return;
        }
        for j in 0..cols {
            let sub = q * &h[(src, j)];
            h[(dst, j)] -= sub;
        }
        for j in 0..rows {
            let sub = q * &u[(src, j)];
            u[(dst, j)] -= sub;
        }
    };
    let row_swap = |h: &mut IntMat, u: &mut IntMat, a: usize, b: usize| {
        if a == b {
            return;
        }
        for j in 0..cols {
            let tmp = h[(a, j)].clone();
            h[(a, j)] = h[(b, j)].clone();
            h[(b, j)] = tmp;
        }
        for j in 0..rows {
            let tmp = u[(a, j)].clone();
            u[(a, j)] = u[(b, j)].clone();
            u[(b, j)] = tmp;
        }
    };
    let row_neg = |h: &mut IntMat, u: &mut IntMat, i: usize| {
        for j in 0..cols {
            let v = -h[(i, j)].clone();
            h[(i, j)] = v;
        }
        for j in 0..rows {
            let v = -u[(i, j)].clone();
            u[(i, j)] = v;
        }
    };

    for c in 0..cols {
        if r >= rows {
            break;
        }
        // gcd-eliminate column c below row r
        loop {
            let pivot = (r..rows)
                .filter(|&i| !h[(i, c)].is_zero())
                .min_by_key(|&i| h[(i, c)].abs());
            let Some(p) = pivot else { break };
            row_swap(&mut h, &mut u, r, p);
            let mut done = true;
            for i in r + 1..rows {
                if h[(i, c)].is_zero() {
                    continue;
                }
                let q = h[(i, c)].div_floor(&h[(r, c)]);
                row_sub(&mut h, &mut u, i, r, &q);
                if !h[(i, c)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            row_neg(&mut h, &mut u, r);
        }
        // reduce entries above the pivot into [0, pivot)
        for i in 0..r {
            let q = h[(i, c)].div_floor(&h[(r, c)]);
            row_sub(&mut h, &mut u, i, r, &q);
        }
        r += 1;
    }
    (h, u)
}

/// Row Hermite form without the transform matrix (for large inputs where an
/// n-by-n transform would dominate).
fn hnf_h_only(m: &IntMat) -> IntMat {
    let rows = m.rows();
    let cols = m.cols();
    let mut h = m.clone();
    let mut r = 0;
    for c in 0..cols {
        if r >= rows {
            break;
        }
        loop {
            let pivot = (r..rows)
                .filter(|&i| !h[(i, c)].is_zero())
                .min_by_key(|&i| h[(i, c)].abs());
            let Some(p) = pivot else { break };
            if p != r {
                for j in 0..cols {
                    let tmp = h[(r, j)].clone();
                    h[(r, j)] = h[(p, j)].clone();
                    h[(p, j)] = tmp;
                }
            }
            let mut done = true;
            for i in r + 1..rows {
                if h[(i, c)].is_zero() {
                    continue;
                }
                let q = h[(i, c)].div_floor(&h[(r, c)]);
                if !q.is_zero() {
                    for j in 0..cols {
                        let sub = &q * &h[(r, j)];
                        h[(i, j)] -= sub;
                    }
                }
                if !h[(i, c)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            for j in 0..cols {
                let v = -h[(r, j)].clone();
                h[(r, j)] = v;
            }
        }
        for i in 0..r {
            let q = h[(i, c)].div_floor(&h[(r, c)]);
            if !q.is_zero() {
                for j in 0..cols {
                    let sub = &q * &h[(r, j)];
                    h[(i, j)] -= sub;
                }
            }
        }
        r += 1;
    }
    h
}

/// Canonical basis of the lattice spanned by the columns of `m` (column
/// operations only, zero columns dropped). Unique per column span.
pub fn col_lattice_hnf(m: &IntMat) -> IntMat {
    let h = hnf_h_only(&m.transpose());
    let ht = h.transpose();
    let cols: Vec<IntVec> = (0..ht.cols())
        .map(|j| ht.col(j))
        .filter(|c| c.iter().any(|x| !x.is_zero()))
        .collect();
    IntMat::from_cols(&cols)
}

/// Chunked version for large generator sets: folds columns into the running
/// canonical basis a block at a time, keeping every intermediate matrix
/// small.
pub fn col_lattice_hnf_incremental(cols: &[IntVec]) -> IntMat {
    let Some(first) = cols.first() else {
        return IntMat::zero(0, 0);
    };
    let d = first.len();
    let mut basis: Vec<IntVec> = Vec::new();
    for chunk in cols.chunks(4 * d.max(1)) {
        let mut all = basis.clone();
        all.extend(chunk.iter().cloned());
        let h = col_lattice_hnf(&IntMat::from_cols(&all));
        basis = (0..h.cols()).map(|j| h.col(j)).collect();
    }
    if basis.is_empty() {
        IntMat::zero(d, 0)
    } else {
        IntMat::from_cols(&basis)
    }
}

/// Smith normal form: returns `(S, U, V)` with `S = U * M * V` diagonal,
/// `s_1 | s_2 | ...`, nonnegative diagonal, `U`, `V` unimodular.
pub fn snf(m: &IntMat) -> (IntMat, IntMat, IntMat) {
    let rows = m.rows();
    let cols = m.cols();
    let mut s = m.clone();
    let mut u = IntMat::identity(rows);
    let mut v = IntMat::identity(cols);

    fn row_sub(s: &mut IntMat, u: &mut IntMat, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..s.cols() {
            let sub = q * &s[(src, j)];
            s[(dst, j)] -= sub;
        }
        for j in 0..u.cols() {
            let sub = q * &u[(src, j)];
            u[(dst, j)] -= sub;
        }
    }
    fn col_sub(s: &mut IntMat, v: &mut IntMat, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..s.rows() {
            let sub = q * &s[(i, src)];
            s[(i, dst)] -= sub;
        }
        for i in 0..v.rows() {
            let sub = q * &v[(i, src)];
            v[(i, dst)] -= sub;
        }
    }
    fn row_swap(s: &mut IntMat, u: &mut IntMat, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..s.cols() {
            let tmp = s[(a, j)].clone();
            s[(a, j)] = s[(b, j)].clone();
            s[(b, j)] = tmp;
        }
        for j in 0..u.cols() {
            let tmp = u[(a, j)].clone();
            u[(a, j)] = u[(b, j)].clone();
            u[(b, j)] = tmp;
        }
    }
    fn col_swap(s: &mut IntMat, v: &mut IntMat, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..s.rows() {
            let tmp = s[(i, a)].clone();
            s[(i, a)] = s[(i, b)].clone();
            s[(i, b)] = tmp;
        }
        for i in 0..v.rows() {
            let tmp = v[(i, a)].clone();
            v[(i, a)] = v[(i, b)].clone();
            v[(i, b)] = tmp;
        }
    }

    let n = rows.min(cols);
    for t in 0..n {
        // move a minimal nonzero entry of the trailing block to (t, t) and
        // clear its row and column
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if s[(i, j)].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| s[(i, j)].abs() < s[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else { break };
            row_swap(&mut s, &mut u, t, bi);
            col_swap(&mut s, &mut v, t, bj);

            let mut clean = true;
            for i in t + 1..rows {
                if s[(i, t)].is_zero() {
                    continue;
                }
                let q = s[(i, t)].div_floor(&s[(t, t)]);
                row_sub(&mut s, &mut u, i, t, &q);
                if !s[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if s[(t, j)].is_zero() {
                    continue;
                }
                let q = s[(t, j)].div_floor(&s[(t, t)]);
                col_sub(&mut s, &mut v, j, t, &q);
                if !s[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if s[(t, t)].is_negative() {
            for j in 0..cols {
                let x = -s[(t, j)].clone();
                s[(t, j)] = x;
            }
            for j in 0..rows {
                let x = -u[(t, j)].clone();
                u[(t, j)] = x;
            }
        }
    }

    // enforce the divisibility chain
    loop {
        let mut dirty = false;
        for t in 0..n.saturating_sub(1) {
            let a = s[(t, t)].clone();
            let b = s[(t + 1, t + 1)].clone();
            if a.is_zero() && !b.is_zero() {
                row_swap(&mut s, &mut u, t, t + 1);
                col_swap(&mut s, &mut v, t, t + 1);
                dirty = true;
                continue;
            }
            if a.is_zero() || (&b % &a).is_zero() {
                continue;
            }
            // fold s[t+1][t+1] into position (t, t) via gcd
            // add column t+1 to column t, then re-clear the 2x2 block
            col_sub(&mut s, &mut v, t, t + 1, &BigInt::from(-1));
            loop {
                if s[(t + 1, t)].is_zero() {
                    break;
                }
                let q = s[(t, t)].div_floor(&s[(t + 1, t)]);
                // reduce row t by row t+1
                row_sub(&mut s, &mut u, t, t + 1, &q);
                if s[(t, t)].is_zero() {
                    row_swap(&mut s, &mut u, t, t + 1);
                }
                if s[(t + 1, t)].is_zero() {
                    break;
                }
                let q2 = s[(t + 1, t)].div_floor(&s[(t, t)]);
                row_sub(&mut s, &mut u, t + 1, t, &q2);
            }
            // clear fill-in at (t, t+1)
            if !s[(t, t + 1)].is_zero() {
                let q = s[(t, t + 1)].div_floor(&s[(t, t)]);
                col_sub(&mut s, &mut v, t + 1, t, &q);
                debug_assert!(s[(t, t + 1)].is_zero());
            }
            if s[(t, t)].is_negative() {
                for j in 0..cols {
                    let x = -s[(t, j)].clone();
                    s[(t, j)] = x;
                }
                for j in 0..rows {
                    let x = -u[(t, j)].clone();
                    u[(t, j)] = x;
                }
            }
            if s[(t + 1, t + 1)].is_negative() {
                for j in 0..cols {
                    let x = -s[(t + 1, j)].clone();
                    s[(t + 1, j)] = x;
                }
                for j in 0..rows {
                    let x = -u[(t + 1, j)].clone();
                    u[(t + 1, j)] = x;
                }
            }
            dirty = true;
        }
        if !dirty {
            break;
        }
    }
    (s, u, v)
}

/// Exact solution of `A x = b` for square `A`; `None` unless `A` is
/// nonsingular.
pub fn solve_rational(a: &IntMat, b: &[Rat]) -> Option<RatVec> {
    assert_eq!(a.rows(), a.cols(), "solve_rational requires a square matrix");
    let n = a.rows();
    assert_eq!(b.len(), n);
    let mut m: Vec<RatVec> = (0..n)
        .map(|i| {
            let mut row: RatVec = (0..n)
                .map(|j| Rat::from_integer(a[(i, j)].clone()))
                .collect();
            row.push(b[i].clone());
            row
        })
        .collect();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return None; // singular
        };
        m.swap(c, p);
        let pivot = m[c][c].clone();
        for j in c..=n {
            m[c][j] = &m[c][j] / &pivot;
        }
        for i in 0..n {
            if i == c || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for j in c..=n {
                let sub = &f * &m[c][j];
                m[i][j] = &m[i][j] - sub;
            }
        }
    }
    Some((0..n).map(|i| m[i][n].clone()).collect())
}

/// Exact solution of the full-column-rank rectangular system `A x = b`
/// (rows >= cols), or `None` when inconsistent.
pub fn solve_rational_rect(a: &IntMat, b: &[BigInt]) -> Option<RatVec> {
    let rows = a.rows();
    let cols = a.cols();
    assert_eq!(rows, b.len());
    let mut m: Vec<RatVec> = (0..rows)
        .map(|i| {
            let mut row: RatVec =
                (0..cols).map(|j| Rat::from_integer(a[(i, j)].clone())).collect();
            row.push(Rat::from_integer(b[i].clone()));
            row
        })
        .collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            return None; // rank-deficient columns unsupported here
        };
        m.swap(r, p);
        let pv = m[r][c].clone();
        for j in c..=cols {
            m[r][j] = &m[r][j] / &pv;
        }
        for i in 0..rows {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for j in c..=cols {
                let sub = &f * &m[r][j];
                m[i][j] = &m[i][j] - sub;
            }
        }
        pivots.push((r, c));
        r += 1;
    }
    for i in r..rows {
        if !m[i][cols].is_zero() {
            return None; // inconsistent
        }
    }
    let mut x = vec![Rat::zero(); cols];
    for (row, col) in pivots {
        x[col] = m[row][cols].clone();
    }
    Some(x)
}

/// Does the integer vector `x` lie in the lattice spanned by the columns of
/// `basis` (full column rank assumed)?
pub fn in_column_lattice(basis: &IntMat, x: &[BigInt]) -> bool {
    // Solve basis * c = x over Q via least-squares-free elimination on the
    // rectangular system; consistent + integral c <=> member.
    let rows = basis.rows();
    let cols = basis.cols();
    assert_eq!(rows, x.len());
    let mut m: Vec<RatVec> = (0..rows)
        .map(|i| {
            let mut row: RatVec = (0..cols)
                .map(|j| Rat::from_integer(basis[(i, j)].clone()))
                .collect();
            row.push(Rat::from_integer(x[i].clone()));
            row
        })
        .collect();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r][c].clone();
        for j in c..=cols {
            m[r][j] = &m[r][j] / &pivot;
        }
        for i in 0..rows {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for j in c..=cols {
                let sub = &f * &m[r][j];
                m[i][j] = &m[i][j] - sub;
            }
        }
        r += 1;
    }
    // consistency: zero rows must have zero rhs
    for i in r..rows {
        if !m[i][cols].is_zero() {
            return false;
        }
    }
    // integrality of the solution coordinates (pivot columns)
    let mut row = 0;
    for c in 0..cols {
        if row < rows && m[row][c].is_one() && (0..rows).all(|i| i == row || m[i][c].is_zero()) {
            if !m[row][cols].denom().is_one() {
                return false;
            }
            row += 1;
        }
    }
    true
}

/// Basis (as columns) of the saturation of the column span of `m`, i.e. of
/// `(R-span of columns) ∩ Z^d`. Columns of a unimodular matrix, so mapping to
/// saturation coordinates is lattice-exact.
pub fn saturation_basis(m: &IntMat) -> IntMat {
    let (s, u, _) = snf(m);
    let n = s.rows().min(s.cols());
    let rank = (0..n).take_while(|&i| !s[(i, i)].is_zero()).count();
    let uinv = u.unimodular_inverse();
    let cols: Vec<IntVec> = (0..rank).map(|j| uinv.col(j)).collect();
    IntMat::from_cols(&cols)
}

/// A unimodular matrix whose last row equals the given primitive functional.
pub fn unimodular_with_last_row(u_fn: &[BigInt]) -> Result<IntMat> {
    let d = u_fn.len();
    let g: BigInt = u_fn.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_one() {
        return Err(Error::Parse("functional is not primitive".into()));
    }
    // W * u = e_1 for some unimodular W, so u is the first column of W^{-1};
    // transpose and cycle to put u as the last row.
    let (h, w) = hnf(&IntMat::from_cols(&[u_fn.to_vec()]));
    debug_assert!(h[(0, 0)].is_one());
    let winv = w.unimodular_inverse();
    // rows of winv^T are columns of winv; first column of winv is u
    let wt = winv.transpose();
    // wt has first row = u; cycle rows so u is last
    let mut rows: Vec<IntVec> = (0..d).map(|i| wt.row(i)).collect();
    let first = rows.remove(0);
    rows.push(first);
    let mut t = IntMat::zero(d, d);
    for (i, row) in rows.iter().enumerate() {
        for j in 0..d {
            t[(i, j)] = row[j].clone();
        }
    }
    debug_assert!(t.is_unimodular());
    Ok(t)
}

/// Primitive part of a nonzero integer vector (divide by gcd, keep sign).
pub fn primitive(v: &[BigInt]) -> IntVec {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag_of(m: &IntMat) -> Vec<i64> {
        (0..m.rows().min(m.cols()))
            .map(|i| i64::try_from(&m[(i, i)]).unwrap())
            .collect()
    }

    #[test]
    fn hnf_identity() {
        let m = IntMat::identity(3);
        let (h, u) = hnf(&m);
        assert_eq!(h, IntMat::identity(3));
        assert_eq!(u, IntMat::identity(3));
    }

    #[test]
    fn hnf_reconstruction_and_det() {
        let m = IntMat::from_rows(&[vec![2, 4], vec![6, 8]]);
        let (h, u) = hnf(&m);
        // U * M = H by direct multiplication, |det U| = 1
        assert_eq!(u.mul(&m), h);
        assert!(u.det().abs().is_one());
        assert_eq!(h.det().abs(), BigInt::from(8));
        // echelon: pivot of column j at row j, zeros below
        assert!(h[(1, 0)].is_zero());
        assert!(h[(0, 0)].is_positive());
    }

    #[test]
    fn hnf_single_column_gcd() {
        // gcd oracle: gcd(4, 6) = 2
        let m = IntMat::from_cols(&[vec![BigInt::from(4), BigInt::from(6)]]);
        let (h, u) = hnf(&m);
        assert_eq!(h.col(0), vec![BigInt::from(2), BigInt::zero()]);
        assert_eq!(u.mul(&m), h);
        assert!(u.det().abs().is_one());
    }

    #[test]
    fn hnf_empty() {
        let m = IntMat::zero(0, 0);
        let (h, u) = hnf(&m);
        assert_eq!(h.rows(), 0);
        assert_eq!(u.rows(), 0);
        let m = IntMat::zero(3, 0);
        let (h, u) = hnf(&m);
        assert_eq!(h.cols(), 0);
        assert_eq!(u, IntMat::identity(3));
    }

    #[test]
    fn snf_identity() {
        let (s, u, v) = snf(&IntMat::identity(4));
        assert_eq!(s, IntMat::identity(4));
        assert!(u.is_unimodular() && v.is_unimodular());
    }

    #[test]
    fn snf_2x2() {
        // oracle: s1 = gcd of entries = 2, s2 = |det| / s1 = 8 / 2 = 4
        let m = IntMat::from_rows(&[vec![2, 4], vec![6, 8]]);
        let (s, u, v) = snf(&m);
        assert_eq!(diag_of(&s), vec![2, 4]);
        assert_eq!(u.mul(&m).mul(&v), s);
        assert!(u.det().abs().is_one());
        assert!(v.det().abs().is_one());
    }

    #[test]
    fn snf_empty_simplex_edges() {
        // |det| = 2, all 1x1 and 2x2 minors have gcd 1
        let m = IntMat::from_rows(&[vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 2]]);
        let (s, u, v) = snf(&m);
        assert_eq!(diag_of(&s), vec![1, 1, 2]);
        assert_eq!(u.mul(&m).mul(&v), s);
    }

    #[test]
    fn solve_rational_cases() {
        use crate::rat::{rat, rat_int, rvec};
        let id = IntMat::identity(3);
        let b = vec![rat(1, 2), rat_int(3), rat(-7, 5)];
        assert_eq!(solve_rational(&id, &b).unwrap(), b);

        let a = IntMat::from_rows(&[vec![2, 0], vec![0, 4]]);
        assert_eq!(
            solve_rational(&a, &rvec(&[1, 1])).unwrap(),
            vec![rat(1, 2), rat(1, 4)]
        );

        // singular with inconsistent rhs
        let a = IntMat::from_rows(&[vec![1, 1], vec![2, 2]]);
        assert_eq!(solve_rational(&a, &rvec(&[1, 3])), None);
    }

    #[test]
    fn column_lattice_membership() {
        let basis = IntMat::from_cols(&[
            vec![BigInt::from(2), BigInt::zero()],
            vec![BigInt::from(1), BigInt::from(3)],
        ]);
        assert!(in_column_lattice(&basis, &[BigInt::from(3), BigInt::from(3)]));
        assert!(!in_column_lattice(&basis, &[BigInt::from(1), BigInt::zero()]));
    }

    #[test]
    fn saturation_of_scaled_lattice() {
        // columns (2,0), (0,2) span index-4 sublattice; saturation is Z^2
        let m = IntMat::from_rows(&[vec![2, 0], vec![0, 2]]);
        let sat = saturation_basis(&m);
        assert_eq!(sat.cols(), 2);
        assert!(sat.det().abs().is_one());
        // column (2,4) alone saturates to (1,2)
        let m = IntMat::from_cols(&[vec![BigInt::from(2), BigInt::from(4)]]);
        let sat = saturation_basis(&m);
        assert_eq!(sat.cols(), 1);
        assert_eq!(primitive(&sat.col(0)), sat.col(0));
    }

    #[test]
    fn unimodular_completion_of_functional() {
        let u = vec![BigInt::from(2), BigInt::from(3), BigInt::from(5)];
        let t = unimodular_with_last_row(&u).unwrap();
        assert!(t.is_unimodular());
        assert_eq!(t.row(2), u);
        assert!(unimodular_with_last_row(&[BigInt::from(2), BigInt::from(4)]).is_err());
    }
}
