//! Dense matrices over a finite field.
//!
//! Rank, the normal form `A = P diag(I_r, 0) Q`, g-inverses, the rank
//! distance and the minus partial order all live here. A [`MatrixSpace`]
//! fixes `(field, rows, cols)` and maps matrices to a base-`q` integer
//! encoding: entry `k` in row-major order is the digit of weight `q^k`.

use std::fmt;

use thiserror::Error;

use crate::fields::{Elem, Field, FieldError, FieldHom};

/// Default cap on the number of states an enumeration may visit.
pub const DEFAULT_STATE_CAP: u64 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatError {
    #[error("shape mismatch: {0}x{1} vs {2}x{3}")]
    ShapeMismatch(usize, usize, usize, usize),
    #[error("matrices live over different fields")]
    FieldMismatch,
    #[error("expected {expected} entries, got {got}")]
    EntryCount { expected: usize, got: usize },
    #[error("cannot parse matrix: {0}")]
    Parse(String),
    #[error("enumeration of {size} states exceeds the cap of {cap}")]
    CapExceeded { size: u128, cap: u64 },
    #[error("rank {r} impossible for a {m}x{n} matrix")]
    BadRank { r: usize, m: usize, n: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat{}x{}[{}]", self.rows, self.cols, self.to_csv())
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_csv())
    }
}

impl Mat {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Mat {
        Mat {
            field: field.clone(),
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> Mat {
        Mat::diag_ones(field, n, n, n)
    }

    /// `diag(I_r, 0)` of shape `rows x cols`.
    pub fn diag_ones(field: &Field, rows: usize, cols: usize, r: usize) -> Mat {
        let mut m = Mat::zeros(field, rows, cols);
        for i in 0..r.min(rows).min(cols) {
            m.data[i * cols + i] = 1;
        }
        m
    }

    /// The matrix unit with a single 1 at `(i, j)`, zero-based.
    pub fn unit(field: &Field, rows: usize, cols: usize, i: usize, j: usize) -> Mat {
        let mut m = Mat::zeros(field, rows, cols);
        m.data[i * cols + j] = 1;
        m
    }

    pub fn from_vec(field: &Field, rows: usize, cols: usize, data: Vec<Elem>) -> Result<Mat, MatError> {
        if data.len() != rows * cols {
            return Err(MatError::EntryCount {
                expected: rows * cols,
                got: data.len(),
            });
        }
        for &d in &data {
            field.check(d as u64)?;
        }
        Ok(Mat {
            field: field.clone(),
            rows,
            cols,
            data,
        })
    }

    /// Parses comma-separated element indices in row-major order.
    pub fn from_csv(field: &Field, rows: usize, cols: usize, csv: &str) -> Result<Mat, MatError> {
        let data = csv
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| MatError::Parse(format!("bad entry `{t}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Mat::from_vec(field, rows, cols, data)
    }

    pub fn to_csv(&self) -> String {
        let parts: Vec<String> = self.data.iter().map(|d| d.to_string()).collect();
        parts.join(",")
    }

    /// Outer product of a column vector and a row vector.
    pub fn outer(field: &Field, col: &[Elem], row: &[Elem]) -> Mat {
        let mut m = Mat::zeros(field, col.len(), row.len());
        for (i, &c) in col.iter().enumerate() {
            for (j, &r) in row.iter().enumerate() {
                m.data[i * row.len() + j] = field.mul(c, r);
            }
        }
        m
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn data(&self) -> &[Elem] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<Elem> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<Elem> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&d| d == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    fn same_space(&self, other: &Mat) -> Result<(), MatError> {
        if self.field != other.field {
            return Err(MatError::FieldMismatch);
        }
        if self.shape() != other.shape() {
            return Err(MatError::ShapeMismatch(self.rows, self.cols, other.rows, other.cols));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Mat) -> Result<Mat, MatError> {
        self.same_space(other)?;
        Ok(self.zip(other, |f, a, b| f.add(a, b)))
    }

    pub fn try_sub(&self, other: &Mat) -> Result<Mat, MatError> {
        self.same_space(other)?;
        Ok(self.zip(other, |f, a, b| f.sub(a, b)))
    }

    pub fn try_mul(&self, other: &Mat) -> Result<Mat, MatError> {
        if self.field != other.field {
            return Err(MatError::FieldMismatch);
        }
        if self.cols != other.rows {
            return Err(MatError::ShapeMismatch(self.rows, self.cols, other.rows, other.cols));
        }
        let f = &self.field;
        let mut out = Mat::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = f.add(out.data[idx], f.mul(a, other.get(k, j)));
                }
            }
        }
        Ok(out)
    }

    /// Panicking sum for matrices already known to share a space.
    pub fn add(&self, other: &Mat) -> Mat {
        self.try_add(other).expect("matrix add")
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        self.try_sub(other).expect("matrix sub")
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        self.try_mul(other).expect("matrix mul")
    }

    pub fn neg(&self) -> Mat {
        let f = self.field.clone();
        self.map_same(|a| f.neg(a))
    }

    pub fn scale(&self, s: Elem) -> Mat {
        let f = self.field.clone();
        self.map_same(|a| f.mul(s, a))
    }

    fn zip(&self, other: &Mat, op: impl Fn(&Field, Elem, Elem) -> Elem) -> Mat {
        Mat {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| op(&self.field, a, b))
                .collect(),
        }
    }

    fn map_same(&self, op: impl Fn(Elem) -> Elem) -> Mat {
        Mat {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| op(a)).collect(),
        }
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    /// Entrywise image `A^tau` over the destination field of `hom`.
    pub fn map_entries(&self, hom: &FieldHom) -> Mat {
        assert!(hom.src() == &self.field, "field hom source does not match matrix field");
        Mat {
            field: hom.dst().clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| hom.apply(a)).collect(),
        }
    }

    /// Copies `self` into the top-left corner of a zero `rows x cols` matrix.
    pub fn embed(&self, rows: usize, cols: usize) -> Mat {
        assert!(rows >= self.rows && cols >= self.cols);
        let mut out = Mat::zeros(&self.field, rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
        }
        out
    }

    /// The top-left `rows x cols` block.
    pub fn block(&self, rows: usize, cols: usize) -> Mat {
        let mut out = Mat::zeros(&self.field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out.set(i, j, self.get(i, j));
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        rank_of(&self.field, self.rows, self.cols, &mut self.data.clone())
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Option<Mat> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let ech = Echelon::compute(self);
        if ech.pivots.len() != n {
            return None;
        }
        // R A = I when A is invertible.
        Some(ech.transform)
    }

    pub fn det2(&self) -> Elem {
        assert!(self.rows == 2 && self.cols == 2);
        let f = &self.field;
        f.sub(
            f.mul(self.get(0, 0), self.get(1, 1)),
            f.mul(self.get(0, 1), self.get(1, 0)),
        )
    }

    /// Basis of the right null space `{x : A x = 0}`, as column vectors.
    pub fn kernel(&self) -> Vec<Vec<Elem>> {
        let ech = Echelon::compute(self);
        let f = &self.field;
        let free: Vec<usize> = (0..self.cols).filter(|c| !ech.pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut x = vec![0; self.cols];
                x[fc] = 1;
                for (r, &pc) in ech.pivots.iter().enumerate() {
                    x[pc] = f.neg(ech.reduced.get(r, fc));
                }
                x
            })
            .collect()
    }

    /// `A = P diag(I_r, 0) Q` with a deterministic pivot rule.
    pub fn normal_form(&self) -> NormalForm {
        let f = &self.field;
        let ech = Echelon::compute(self);
        let r = ech.pivots.len();
        // R A = E (reduced echelon). Column operations C with E C = diag(I_r, 0):
        // pivot columns move to the front, then the remaining entries of the
        // pivot rows are cleared.
        let n = self.cols;
        let mut order: Vec<usize> = ech.pivots.clone();
        order.extend((0..n).filter(|c| !ech.pivots.contains(c)));
        let mut perm = Mat::zeros(f, n, n);
        for (new, &old) in order.iter().enumerate() {
            perm.set(old, new, 1);
        }
        let ep = ech.reduced.mul(&perm);
        // ep = [I_r  B; 0 0]; clear B with C2 = [I -B; 0 I].
        let mut c2 = Mat::identity(f, n);
        for i in 0..r {
            for j in r..n {
                c2.set(i, j, f.neg(ep.get(i, j)));
            }
        }
        let c = perm.mul(&c2);
        let p = ech.transform.inverse().expect("row transform is invertible");
        let q = c.inverse().expect("column transform is invertible");
        NormalForm { p, q, rank: r }
    }

    /// The canonical g-inverse `Q^-1 diag(I_r, 0) P^-1` of the normal form.
    pub fn g_inverse(&self) -> Mat {
        let nf = self.normal_form();
        let d = Mat::diag_ones(&self.field, self.cols, self.rows, nf.rank);
        nf.q.inverse().unwrap().mul(&d).mul(&nf.p.inverse().unwrap())
    }
}

/// `A = p * diag(I_rank, 0) * q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalForm {
    pub p: Mat,
    pub q: Mat,
    pub rank: usize,
}

impl NormalForm {
    pub fn reconstruct(&self) -> Mat {
        let d = Mat::diag_ones(self.p.field(), self.p.rows(), self.q.rows(), self.rank);
        self.p.mul(&d).mul(&self.q)
    }
}

/// Reduced row echelon form with the accumulated row transform.
struct Echelon {
    reduced: Mat,
    transform: Mat,
    pivots: Vec<usize>,
}

impl Echelon {
    /// Columns are scanned left to right; within a column the first nonzero
    /// entry at or below the current row becomes the pivot, swapped upward.
    fn compute(a: &Mat) -> Echelon {
        let f = a.field.clone();
        let (m, n) = a.shape();
        let mut e = a.clone();
        let mut t = Mat::identity(&f, m);
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..n {
            if row == m {
                break;
            }
            let Some(pr) = (row..m).find(|&i| e.get(i, col) != 0) else {
                continue;
            };
            if pr != row {
                swap_rows(&mut e, pr, row);
                swap_rows(&mut t, pr, row);
            }
            let inv = f.inv(e.get(row, col)).unwrap();
            scale_row(&mut e, row, inv);
            scale_row(&mut t, row, inv);
            for i in 0..m {
                if i != row {
                    let factor = e.get(i, col);
                    if factor != 0 {
                        let nf = f.neg(factor);
                        axpy_row(&mut e, i, row, nf);
                        axpy_row(&mut t, i, row, nf);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        Echelon {
            reduced: e,
            transform: t,
            pivots,
        }
    }
}

fn swap_rows(a: &mut Mat, i: usize, j: usize) {
    for c in 0..a.cols {
        a.data.swap(i * a.cols + c, j * a.cols + c);
    }
}

fn scale_row(a: &mut Mat, i: usize, s: Elem) {
    for c in 0..a.cols {
        let v = a.field.mul(s, a.get(i, c));
        a.set(i, c, v);
    }
}

/// row_i += s * row_j
fn axpy_row(a: &mut Mat, i: usize, j: usize, s: Elem) {
    for c in 0..a.cols {
        let v = a.field.add(a.get(i, c), a.field.mul(s, a.get(j, c)));
        a.set(i, c, v);
    }
}

/// Rank by forward elimination on a scratch buffer.
pub(crate) fn rank_of(f: &Field, m: usize, n: usize, d: &mut [Elem]) -> usize {
    let mut rank = 0;
    for col in 0..n {
        if rank == m {
            break;
        }
        let Some(pr) = (rank..m).find(|&i| d[i * n + col] != 0) else {
            continue;
        };
        if pr != rank {
            for c in 0..n {
                d.swap(pr * n + c, rank * n + c);
            }
        }
        let inv = f.inv(d[rank * n + col]).unwrap();
        for i in rank + 1..m {
            let x = d[i * n + col];
            if x == 0 {
                continue;
            }
            let factor = f.neg(f.mul(x, inv));
            for c in col..n {
                d[i * n + c] = f.add(d[i * n + c], f.mul(factor, d[rank * n + c]));
            }
        }
        rank += 1;
    }
    rank
}

pub fn rank(a: &Mat) -> usize {
    a.rank()
}

pub fn is_adjacent(a: &Mat, b: &Mat) -> Result<bool, MatError> {
    Ok(a.try_sub(b)?.rank() == 1)
}

pub fn distance(a: &Mat, b: &Mat) -> Result<usize, MatError> {
    Ok(a.try_sub(b)?.rank())
}

/// The minus order: `A <= B` iff `rank(B - A) = rank(B) - rank(A)`.
pub fn minus_le(a: &Mat, b: &Mat) -> Result<bool, MatError> {
    let d = b.try_sub(a)?.rank();
    let (ra, rb) = (a.rank(), b.rank());
    Ok(rb >= ra && d == rb - ra)
}

/// Every `G` with `A G A = A`, by exhaustive search over `cols x rows` matrices.
pub fn all_g_inverses(a: &Mat, cap: u64) -> Result<Vec<Mat>, MatError> {
    let space = MatrixSpace::new(a.field(), a.cols(), a.rows());
    space.ensure_within(cap)?;
    Ok(space.iter().filter(|g| &a.mul(g).mul(a) == a).collect())
}

/// The g-inverse characterisation of the minus order: there are g-inverses
/// `G1`, `G2` of `A` with `A G1 = B G1` and `G2 A = G2 B`.
pub fn minus_le_via_ginverse(a: &Mat, b: &Mat, cap: u64) -> Result<bool, MatError> {
    a.same_space(b)?;
    let gs = all_g_inverses(a, cap)?;
    Ok(minus_le_with_ginverses(a, b, &gs))
}

/// Same test with a precomputed list of g-inverses of `a`.
pub fn minus_le_with_ginverses(a: &Mat, b: &Mat, gs: &[Mat]) -> bool {
    let left = gs.iter().any(|g| a.mul(g) == b.mul(g));
    left && gs.iter().any(|g| g.mul(a) == g.mul(b))
}

/// The set `F^{rows x cols}` together with its integer encoding.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MatrixSpace {
    field: Field,
    rows: usize,
    cols: usize,
}

impl fmt::Debug for MatrixSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})^{}x{}", self.field.order(), self.rows, self.cols)
    }
}

impl MatrixSpace {
    pub fn new(field: &Field, rows: usize, cols: usize) -> MatrixSpace {
        MatrixSpace {
            field: field.clone(),
            rows,
            cols,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> usize {
        self.rows * self.cols
    }

    pub fn q(&self) -> usize {
        self.field.order()
    }

    /// `q^(rows*cols)`, saturating.
    pub fn size(&self) -> u128 {
        (self.q() as u128)
            .checked_pow(self.entries() as u32)
            .unwrap_or(u128::MAX)
    }

    pub fn ensure_within(&self, cap: u64) -> Result<usize, MatError> {
        let size = self.size();
        if size > cap as u128 {
            Err(MatError::CapExceeded { size, cap })
        } else {
            Ok(size as usize)
        }
    }

    pub fn contains(&self, a: &Mat) -> bool {
        a.field() == &self.field && a.shape() == (self.rows, self.cols)
    }

    pub fn check(&self, a: &Mat) -> Result<(), MatError> {
        if a.field() != &self.field {
            return Err(MatError::FieldMismatch);
        }
        if a.shape() != (self.rows, self.cols) {
            return Err(MatError::ShapeMismatch(a.rows(), a.cols(), self.rows, self.cols));
        }
        Ok(())
    }

    pub fn zero(&self) -> Mat {
        Mat::zeros(&self.field, self.rows, self.cols)
    }

    pub fn unit(&self, i: usize, j: usize) -> Mat {
        Mat::unit(&self.field, self.rows, self.cols, i, j)
    }

    pub fn diag_ones(&self, r: usize) -> Mat {
        Mat::diag_ones(&self.field, self.rows, self.cols, r)
    }

    pub fn encode(&self, a: &Mat) -> usize {
        let q = self.q();
        a.data.iter().rev().fold(0usize, |acc, &d| acc * q + d as usize)
    }

    pub fn decode(&self, mut idx: usize) -> Mat {
        let q = self.q();
        let mut data = Vec::with_capacity(self.entries());
        for _ in 0..self.entries() {
            data.push((idx % q) as Elem);
            idx /= q;
        }
        Mat {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn parse(&self, csv: &str) -> Result<Mat, MatError> {
        Mat::from_csv(&self.field, self.rows, self.cols, csv)
    }

    /// Every matrix of the space in encoding order. The caller is responsible
    /// for checking the size first.
    pub fn iter(&self) -> impl Iterator<Item = Mat> + '_ {
        (0..self.size() as usize).map(move |i| self.decode(i))
    }

    /// Every matrix of rank exactly `r`, in encoding order.
    pub fn enumerate_rank(&self, r: usize, cap: u64) -> Result<impl Iterator<Item = Mat> + '_, MatError> {
        if r > self.rows.min(self.cols) {
            return Err(MatError::BadRank {
                r,
                m: self.rows,
                n: self.cols,
            });
        }
        self.ensure_within(cap)?;
        Ok(self.iter().filter(move |a| a.rank() == r))
    }

    /// Rank-one matrices `u v^t` with `u` projectively normalised, in encoding order.
    pub fn rank_one(&self) -> Vec<Mat> {
        let f = &self.field;
        let mut out = Vec::new();
        for u in projective_points(f, self.rows) {
            for v in nonzero_vectors(f, self.cols) {
                out.push(Mat::outer(f, &u, &v));
            }
        }
        out.sort_by_key(|m| self.encode(m));
        out
    }

    /// Invertible matrices of a square space, in encoding order.
    pub fn invertibles(&self, cap: u64) -> Result<Vec<Mat>, MatError> {
        self.ensure_within(cap)?;
        Ok(self.iter().filter(|a| a.is_invertible()).collect())
    }
}

/// Nonzero vectors of length `n` whose first nonzero coordinate is 1, in
/// little-endian index order.
pub fn projective_points(f: &Field, n: usize) -> Vec<Vec<Elem>> {
    nonzero_vectors(f, n)
        .into_iter()
        .filter(|v| v.iter().find(|&&x| x != 0) == Some(&1))
        .collect()
}

pub fn nonzero_vectors(f: &Field, n: usize) -> Vec<Vec<Elem>> {
    let q = f.order();
    let total = q.pow(n as u32);
    (1..total)
        .map(|mut idx| {
            let mut v = Vec::with_capacity(n);
            for _ in 0..n {
                v.push((idx % q) as Elem);
                idx /= q;
            }
            v
        })
        .collect()
}

/// Scales `v` so its first nonzero coordinate is 1. Returns the scale used.
pub fn normalize(f: &Field, v: &mut [Elem]) -> Option<Elem> {
    let lead = *v.iter().find(|&&x| x != 0)?;
    let inv = f.inv(lead).unwrap();
    for x in v.iter_mut() {
        *x = f.mul(inv, *x);
    }
    Some(lead)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: u64) -> Field {
        Field::standard(q).unwrap()
    }

    fn m(f: &Field, r: usize, c: usize, csv: &str) -> Mat {
        Mat::from_csv(f, r, c, csv).unwrap()
    }

    #[test]
    fn rank_examples() {
        let f = gf(2);
        assert_eq!(Mat::zeros(&f, 2, 2).rank(), 0);
        assert_eq!(Mat::identity(&f, 2).rank(), 2);
        assert_eq!(m(&f, 2, 2, "1,1,1,1").rank(), 1);
    }

    #[test]
    fn normal_form_examples() {
        let f = gf(3);
        let d = Mat::diag_ones(&f, 2, 3, 1);
        let nf = d.normal_form();
        assert_eq!(
            (nf.p.clone(), nf.q.clone(), nf.rank),
            (Mat::identity(&f, 2), Mat::identity(&f, 3), 1)
        );
        let e21 = Mat::unit(&f, 2, 2, 1, 0);
        let nf = e21.normal_form();
        assert_eq!(nf.rank, 1);
        assert_eq!(nf.reconstruct(), e21);
        let z = Mat::zeros(&f, 2, 2).normal_form();
        assert_eq!((z.p, z.q, z.rank), (Mat::identity(&f, 2), Mat::identity(&f, 2), 0));
    }

    #[test]
    fn normal_form_reconstructs_everything() {
        for (q, r, c) in [(2, 2, 2), (3, 2, 2), (2, 2, 3), (4, 2, 2)] {
            let f = gf(q);
            let s = MatrixSpace::new(&f, r, c);
            for a in s.iter() {
                let nf = a.normal_form();
                assert!(nf.p.is_invertible() && nf.q.is_invertible());
                assert_eq!(nf.rank, a.rank());
                assert_eq!(nf.reconstruct(), a);
                let g = a.g_inverse();
                assert_eq!(a.mul(&g).mul(&a), a);
            }
        }
    }

    #[test]
    fn g_inverse_examples() {
        let f = gf(2);
        let d = Mat::diag_ones(&f, 2, 3, 2);
        assert_eq!(d.g_inverse(), Mat::diag_ones(&f, 3, 2, 2));
        assert!(Mat::zeros(&f, 2, 3).g_inverse().is_zero());
        let j = m(&f, 2, 2, "1,1,1,1");
        // 16 candidates, at least one works
        assert!(!all_g_inverses(&j, 100).unwrap().is_empty());
        assert_eq!(j.mul(&j.g_inverse()).mul(&j), j);
    }

    #[test]
    fn adjacency_and_distance() {
        let f = gf(3);
        let z = Mat::zeros(&f, 2, 2);
        let e = |i, j| Mat::unit(&f, 2, 2, i, j);
        assert!(is_adjacent(&z, &e(0, 0)).unwrap());
        assert!(!is_adjacent(&z, &Mat::identity(&f, 2)).unwrap());
        assert!(!is_adjacent(&z, &z).unwrap());
        let other = e(0, 0).add(&e(0, 1)).add(&e(1, 1)).neg();
        assert!(is_adjacent(&e(1, 0), &other).unwrap());
        assert_eq!(distance(&z, &Mat::identity(&f, 2)).unwrap(), 2);
        assert_eq!(distance(&other, &other).unwrap(), 0);
        let g2 = gf(2);
        assert_eq!(is_adjacent(&z, &Mat::zeros(&g2, 2, 2)), Err(MatError::FieldMismatch));
        assert!(matches!(
            distance(&z, &Mat::zeros(&f, 2, 3)),
            Err(MatError::ShapeMismatch(..))
        ));
    }

    #[test]
    fn minus_order_examples() {
        let f = gf(2);
        let e11 = Mat::unit(&f, 2, 2, 0, 0);
        let i2 = Mat::identity(&f, 2);
        assert!(minus_le(&i2, &i2).unwrap());
        assert!(minus_le(&e11, &i2).unwrap());
        assert!(minus_le(&m(&f, 2, 2, "1,1,0,0"), &i2).unwrap());
        let e22 = Mat::unit(&f, 2, 2, 1, 1);
        assert!(!minus_le(&e11, &e22).unwrap());
        assert!(!minus_le_via_ginverse(&e11, &e22, 1000).unwrap());
        assert!(minus_le_via_ginverse(&e11, &e11, 1000).unwrap());
    }

    #[test]
    fn rank_counts() {
        let f = gf(2);
        let s = MatrixSpace::new(&f, 2, 2);
        assert_eq!(s.enumerate_rank(1, 100).unwrap().count(), 9);
        let zeros: Vec<Mat> = s.enumerate_rank(0, 100).unwrap().collect();
        assert_eq!(zeros, vec![s.zero()]);
        let s3 = MatrixSpace::new(&gf(3), 2, 2);
        assert_eq!(s3.enumerate_rank(1, 100).unwrap().count(), 32);
        assert_eq!(s3.rank_one().len(), 32);
        assert!(s3.enumerate_rank(3, 100).is_err());
        assert!(s3.enumerate_rank(1, 10).is_err());
    }

    #[test]
    fn rank_one_formula() {
        for (q, r, c) in [(2u64, 2usize, 3usize), (3, 3, 2), (4, 2, 2)] {
            let s = MatrixSpace::new(&gf(q), r, c);
            let qq = q as usize;
            let expected = (qq.pow(r as u32) - 1) * (qq.pow(c as u32) - 1) / (qq - 1);
            assert_eq!(s.rank_one().len(), expected);
            assert_eq!(s.enumerate_rank(1, 1 << 20).unwrap().count(), expected);
        }
    }

    #[test]
    fn kernel_and_inverse() {
        let f = gf(5);
        let a = m(&f, 2, 3, "1,2,3,2,4,1");
        for x in a.kernel() {
            let col = Mat::from_vec(&f, 3, 1, x).unwrap();
            assert!(a.mul(&col).is_zero());
        }
        assert_eq!(a.kernel().len(), 3 - a.rank());
        let b = m(&f, 2, 2, "1,2,3,4");
        assert_eq!(b.mul(&b.inverse().unwrap()), Mat::identity(&f, 2));
        assert!(m(&f, 2, 2, "1,2,2,4").inverse().is_none());
    }

    #[test]
    fn encode_round_trip() {
        let s = MatrixSpace::new(&gf(3), 2, 2);
        for i in 0..81 {
            assert_eq!(s.encode(&s.decode(i)), i);
        }
        assert_eq!(s.encode(&s.unit(0, 0)), 1);
    }

    /// Pairs `(P D_r Q, P D_t Q)` with `r <= t` over all invertible `P`, `Q`.
    fn simultaneous_normal_form_pairs(s: &MatrixSpace) -> std::collections::HashSet<(usize, usize)> {
        let f = s.field();
        let gl_m = MatrixSpace::new(f, s.rows(), s.rows()).invertibles(1 << 20).unwrap();
        let gl_n = MatrixSpace::new(f, s.cols(), s.cols()).invertibles(1 << 20).unwrap();
        let k = s.rows().min(s.cols());
        let mut out = std::collections::HashSet::new();
        for p in &gl_m {
            for q in &gl_n {
                let ds: Vec<Mat> = (0..=k).map(|r| p.mul(&s.diag_ones(r)).mul(q)).collect();
                for r in 0..=k {
                    for t in r..=k {
                        out.insert((s.encode(&ds[r]), s.encode(&ds[t])));
                    }
                }
            }
        }
        out
    }

    #[test]
    fn minus_order_characterisations_agree() {
        for q in [2, 3] {
            let s = MatrixSpace::new(&gf(q), 2, 2);
            let pairs = simultaneous_normal_form_pairs(&s);
            let all: Vec<Mat> = s.iter().collect();
            for a in &all {
                let gs = all_g_inverses(a, 1 << 20).unwrap();
                for b in &all {
                    let lhs = minus_le(a, b).unwrap();
                    assert_eq!(lhs, minus_le_with_ginverses(a, b, &gs), "{a} {b}");
                    assert_eq!(lhs, pairs.contains(&(s.encode(a), s.encode(b))), "{a} {b}");
                }
            }
        }
    }

    #[test]
    fn minus_order_below_idempotents() {
        for q in [2, 3] {
            let s = MatrixSpace::new(&gf(q), 2, 2);
            for b in s.iter().filter(|b| &b.mul(b) == b) {
                for a in s.iter() {
                    let algebraic = a == a.mul(&a) && a == a.mul(&b) && a == b.mul(&a);
                    assert_eq!(minus_le(&a, &b).unwrap(), algebraic);
                }
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn triangle_inequality(a in 0usize..81, b in 0usize..81, c in 0usize..81) {
                let s = MatrixSpace::new(&gf(3), 2, 2);
                let (a, b, c) = (s.decode(a), s.decode(b), s.decode(c));
                prop_assert!(distance(&a, &c).unwrap() <= distance(&a, &b).unwrap() + distance(&b, &c).unwrap());
            }

            #[test]
            fn minus_order_invariant_under_equivalence(a in 0usize..81, b in 0usize..81, p in 0usize..81, q in 0usize..81) {
                let f = gf(3);
                let s = MatrixSpace::new(&f, 2, 2);
                let (pm, qm) = (s.decode(p), s.decode(q));
                prop_assume!(pm.is_invertible() && qm.is_invertible());
                let (a, b) = (s.decode(a), s.decode(b));
                prop_assert_eq!(
                    minus_le(&a, &b).unwrap(),
                    minus_le(&pm.mul(&a).mul(&qm), &pm.mul(&b).mul(&qm)).unwrap()
                );
            }
        }
    }
}
