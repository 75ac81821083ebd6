use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A dense matrix of arbitrary-precision integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<BigInt>>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix { rows, cols, data: alloc::vec![alloc::vec![BigInt::zero(); cols]; rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows of length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<Vec<BigInt>>) -> Result<Self> {
        for r in &rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, found: r.len() });
            }
        }
        Ok(IntegerMatrix { rows: rows.len(), cols, data: rows })
    }

    pub fn from_i64(cols: usize, rows: &[&[i64]]) -> Self {
        Self::from_rows(cols, rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
            .expect("rectangular literal")
    }

    pub fn num_rows(&self) -> usize {
        self.rows
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i][j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        self.data.clone()
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        self.data.iter().map(|r| r[j].clone()).collect()
    }

    pub fn transpose(&self) -> IntegerMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j][i] = self.data[i][j].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntegerMatrix) -> Result<IntegerMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i][j] += a * &other.data[k][j];
                }
            }
        }
        Ok(out)
    }

    /// `M · v` for a column vector `v`.
    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        debug_assert_eq!(v.len(), self.cols);
        self.data.iter().map(|r| dot(r, v)).collect()
    }

    /// `v · M` for a row vector `v`.
    pub fn apply_row(&self, v: &[BigInt]) -> Vec<BigInt> {
        debug_assert_eq!(v.len(), self.rows);
        let mut out = alloc::vec![BigInt::zero(); self.cols];
        for (c, r) in v.iter().zip(&self.data) {
            if c.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(r) {
                *o += c * x;
            }
        }
        out
    }

    /// Columns `range` as a new matrix.
    pub fn columns(&self, from: usize, to: usize) -> IntegerMatrix {
        IntegerMatrix {
            rows: self.rows,
            cols: to - from,
            data: self.data.iter().map(|r| r[from..to].to_vec()).collect(),
        }
    }

    pub fn rows_range(&self, from: usize, to: usize) -> IntegerMatrix {
        IntegerMatrix { rows: to - from, cols: self.cols, data: self.data[from..to].to_vec() }
    }

    pub fn hstack(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.rows, other.rows);
        IntegerMatrix {
            rows: self.rows,
            cols: self.cols + other.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.iter().chain(b).cloned().collect()).collect(),
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        self.data.swap(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for r in &mut self.data {
            r.swap(i, j);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in &mut self.data[i] {
            *x = -&*x;
        }
    }

    /// `row_i -= q * row_j`
    fn sub_row(&mut self, i: usize, j: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for k in 0..self.cols {
            let t = q * &self.data[j][k];
            self.data[i][k] -= t;
        }
    }

    /// `col_i -= q * col_j`
    fn sub_col(&mut self, i: usize, j: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for r in &mut self.data {
            let t = q * &r[j];
            r[i] -= t;
        }
    }

    /// Replaces rows `(i, j)` by `(a·r_i + b·r_j, c·r_i + d·r_j)`.
    fn combine_rows(&mut self, i: usize, j: usize, [a, b, c, d]: [&BigInt; 4]) {
        for k in 0..self.cols {
            let (x, y) = (&self.data[i][k], &self.data[j][k]);
            let ni = a * x + b * y;
            let nj = c * x + d * y;
            self.data[i][k] = ni;
            self.data[j][k] = nj;
        }
    }

    pub fn rank(&self) -> usize {
        hermite_normal_form(self).rank()
    }
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Divides by the gcd of the entries; the zero vector is returned unchanged.
pub fn primitive(v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() || g.is_one() {
        v
    } else {
        v.into_iter().map(|x| x / &g).collect()
    }
}

/// Row-style Hermite normal form `H = U · M`.
///
/// `H` is in row echelon form with positive pivots, entries above each pivot
/// reduced into `[0, pivot)`, and zero rows at the bottom. `U` is unimodular.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HermiteForm {
    pub h: IntegerMatrix,
    pub u: IntegerMatrix,
    /// Pivot column of each nonzero row of `h`.
    pub pivots: Vec<usize>,
}

impl HermiteForm {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Nonzero rows of `h`: a basis of the row lattice.
    pub fn basis(&self) -> Vec<Vec<BigInt>> {
        self.h.data[..self.rank()].to_vec()
    }

    /// Canonical representative of `v` modulo the row lattice.
    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        let mut v = v.to_vec();
        for (i, &c) in self.pivots.iter().enumerate() {
            let q = v[c].div_floor(self.h.get(i, c));
            if !q.is_zero() {
                for (x, y) in v.iter_mut().zip(self.h.row(i)) {
                    *x -= &q * y;
                }
            }
        }
        v
    }

    /// Lattice membership by back-substitution against `h`.
    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }
}

pub fn hermite_normal_form(m: &IntegerMatrix) -> HermiteForm {
    let mut h = m.clone();
    let mut u = IntegerMatrix::identity(m.rows);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        for i in r + 1..m.rows {
            if h.data[i][c].is_zero() {
                continue;
            }
            if h.data[r][c].is_zero() {
                h.swap_rows(r, i);
                u.swap_rows(r, i);
                continue;
            }
            let (a, b) = (h.data[r][c].clone(), h.data[i][c].clone());
            let e = a.extended_gcd(&b);
            let (ca, cb) = (-(&b / &e.gcd), &a / &e.gcd);
            let coeffs = [&e.x, &e.y, &ca, &cb];
            h.combine_rows(r, i, coeffs);
            u.combine_rows(r, i, coeffs);
        }
        if h.data[r][c].is_zero() {
            continue;
        }
        if h.data[r][c].is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        let p = h.data[r][c].clone();
        for k in 0..r {
            let q = h.data[k][c].div_floor(&p);
            h.sub_row(k, r, &q);
            u.sub_row(k, r, &q);
        }
        pivots.push(c);
        r += 1;
    }
    HermiteForm { h, u, pivots }
}

/// Smith normal form `D = U · M · V` with `U`, `V` unimodular.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    /// Nonzero diagonal entries, positive, each dividing the next.
    pub divisors: Vec<BigInt>,
    pub d: IntegerMatrix,
    pub u: IntegerMatrix,
    pub v: IntegerMatrix,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.divisors.len()
    }

    /// Elementary divisors greater than one: the torsion of the cokernel.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.divisors.iter().filter(|d| !d.is_one()).cloned().collect()
    }
}

pub fn smith_normal_form(m: &IntegerMatrix) -> SmithForm {
    let mut a = m.clone();
    let mut u = IntegerMatrix::identity(m.rows);
    let mut v = IntegerMatrix::identity(m.cols);
    let mut divisors = Vec::new();
    for t in 0..m.rows.min(m.cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..m.rows {
                for j in t..m.cols {
                    let x = &a.data[i][j];
                    if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < a.data[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return finish(a, u, v, divisors);
            };
            a.swap_rows(t, bi);
            u.swap_rows(t, bi);
            a.swap_cols(t, bj);
            v.swap_cols(t, bj);
            let p = a.data[t][t].clone();
            let mut clean = true;
            for i in t + 1..m.rows {
                let q = &a.data[i][t] / &p;
                a.sub_row(i, t, &q);
                u.sub_row(i, t, &q);
                clean &= a.data[i][t].is_zero();
            }
            for j in t + 1..m.cols {
                let q = &a.data[t][j] / &p;
                a.sub_col(j, t, &q);
                v.sub_col(j, t, &q);
                clean &= a.data[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..m.rows).find(|&i| (t + 1..m.cols).any(|j| !a.data[i][j].is_multiple_of(&p)));
            match bad {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    a.sub_row(t, i, &minus_one);
                    u.sub_row(t, i, &minus_one);
                }
                None => break,
            }
        }
        if a.data[t][t].is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
        divisors.push(a.data[t][t].clone());
    }
    finish(a, u, v, divisors)
}

fn finish(d: IntegerMatrix, u: IntegerMatrix, v: IntegerMatrix, divisors: Vec<BigInt>) -> SmithForm {
    SmithForm { divisors, d, u, v }
}

/// Inverse of a unimodular matrix, via the Hermite form of `[M | I]`.
pub fn unimodular_inverse(m: &IntegerMatrix) -> Result<IntegerMatrix> {
    if m.rows != m.cols {
        return Err(Error::Matrix("square"));
    }
    let n = m.rows;
    let hf = hermite_normal_form(&m.hstack(&IntegerMatrix::identity(n)));
    if hf.h.columns(0, n) != IntegerMatrix::identity(n) {
        return Err(Error::Matrix("unimodular"));
    }
    Ok(hf.h.columns(n, 2 * n))
}

/// Basis of `{x : x · M = 0}` as rows.
pub fn left_kernel(m: &IntegerMatrix) -> Vec<Vec<BigInt>> {
    let hf = hermite_normal_form(m);
    hf.u.data[hf.rank()..].to_vec()
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &IntegerMatrix) -> BigInt {
    assert_eq!(m.rows, m.cols, "determinant of a non-square matrix");
    let n = m.rows;
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.data.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = t / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// The adjugate, so that `M · adj(M) = det(M) · I`.
pub fn adjugate(m: &IntegerMatrix) -> IntegerMatrix {
    let n = m.rows;
    let mut adj = IntegerMatrix::zeros(n, n);
    if n == 1 {
        adj.data[0][0] = BigInt::one();
        return adj;
    }
    for i in 0..n {
        for j in 0..n {
            let minor = IntegerMatrix {
                rows: n - 1,
                cols: n - 1,
                data: (0..n)
                    .filter(|&r| r != i)
                    .map(|r| (0..n).filter(|&c| c != j).map(|c| m.data[r][c].clone()).collect())
                    .collect(),
            };
            let c = determinant(&minor);
            adj.data[j][i] = if (i + j) % 2 == 0 { c } else { -c };
        }
    }
    adj
}

/// A right inverse `S` with `M · S = I` of a matrix whose columns generate `Z^rows`.
pub fn right_inverse(m: &IntegerMatrix) -> Result<IntegerMatrix> {
    let snf = smith_normal_form(m);
    if snf.rank() != m.rows || snf.divisors.iter().any(|d| !d.is_one()) {
        return Err(Error::Matrix("surjective"));
    }
    snf.v.columns(0, m.rows).mul(&snf.u)
}

/// Coordinates adapted to the saturated sublattice `K = span(S) ∩ Z^n`.
///
/// `coords` is unimodular with `x ↦ x · coords` sending `K` onto `Z^r × 0`;
/// the last `n - r` coordinates give the projection onto the torsion-free
/// quotient `Z^n / K`, normalized so the projection matrix is in Hermite form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeSplit {
    rank: usize,
    coords: IntegerMatrix,
    inverse: IntegerMatrix,
}

impl LatticeSplit {
    pub fn new(n: usize, span: &[Vec<BigInt>]) -> Self {
        let m = IntegerMatrix::from_rows(n, span.to_vec()).expect("span vectors of length n");
        let snf = smith_normal_form(&m);
        let r = snf.rank();
        let quotient = snf.v.columns(r, n).transpose();
        let hf = hermite_normal_form(&quotient);
        let adjusted = hf.h.transpose();
        let coords = snf.v.columns(0, r).hstack(&adjusted);
        let inverse = unimodular_inverse(&coords).expect("block change of a unimodular basis");
        LatticeSplit { rank: r, coords, inverse }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn ambient(&self) -> usize {
        self.coords.rows
    }

    pub fn quotient_rank(&self) -> usize {
        self.ambient() - self.rank
    }

    /// Coordinates of a vector of `K` in the basis [`LatticeSplit::inner_basis`].
    pub fn inner_coords(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.coords.apply_row(x)[..self.rank].to_vec()
    }

    pub fn lift_inner(&self, y: &[BigInt]) -> Vec<BigInt> {
        self.inverse.rows_range(0, self.rank).apply_row(y)
    }

    /// A lattice basis of `K`.
    pub fn inner_basis(&self) -> Vec<Vec<BigInt>> {
        self.inverse.data[..self.rank].to_vec()
    }

    /// Projection matrix `(n - r) × n` onto `Z^n / K`.
    pub fn projection(&self) -> IntegerMatrix {
        self.coords.columns(self.rank, self.ambient()).transpose()
    }

    /// Section `n × (n - r)` with `projection · section = I`.
    pub fn section(&self) -> IntegerMatrix {
        self.inverse.rows_range(self.rank, self.ambient()).transpose()
    }

    pub fn project(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.coords.apply_row(x)[self.rank..].to_vec()
    }

    pub fn lift_quotient(&self, z: &[BigInt]) -> Vec<BigInt> {
        self.inverse.rows_range(self.rank, self.ambient()).apply_row(z)
    }
}
