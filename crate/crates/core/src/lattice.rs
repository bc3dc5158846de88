//! Exact integer linear algebra over `i64` with checked arithmetic.
//!
//! Every operation either returns the exact answer or [`Error::Overflow`];
//! nothing wraps silently.

use std::fmt;
use std::ops::{Deref, DerefMut};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[inline]
pub(crate) fn add(a: i64, b: i64) -> Result<i64> {
    a.checked_add(b).ok_or(Error::Overflow)
}

#[inline]
pub(crate) fn mul(a: i64, b: i64) -> Result<i64> {
    a.checked_mul(b).ok_or(Error::Overflow)
}

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a as i64
}

/// An element of `Z^r`, either a lattice vector or a covector.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntVector(pub Vec<i64>);

impl IntVector {
    pub fn new(entries: Vec<i64>) -> Self {
        IntVector(entries)
    }

    pub fn zeros(len: usize) -> Self {
        IntVector(vec![0; len])
    }

    pub fn unit(len: usize, k: usize) -> Self {
        let mut v = vec![0; len];
        v[k] = 1;
        IntVector(v)
    }

    pub fn dot(&self, other: &IntVector) -> Result<i64> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch(format!(
                "dot product of lengths {} and {}",
                self.len(),
                other.len()
            )));
        }
        self.iter()
            .zip(other.iter())
            .try_fold(0i64, |acc, (&a, &b)| add(acc, mul(a, b)?))
    }

    pub fn is_zero(&self) -> bool {
        self.iter().all(|&x| x == 0)
    }

    pub fn content(&self) -> i64 {
        self.iter().fold(0, |g, &x| gcd(g, x))
    }

    pub fn is_primitive(&self) -> bool {
        self.content() == 1
    }

    /// Sign of the first nonzero entry, or 0 for the zero vector.
    pub fn leading_sign(&self) -> i64 {
        self.iter().find(|&&x| x != 0).map_or(0, |x| x.signum())
    }

    /// Representative of `±self` whose first nonzero entry is positive.
    pub fn sign_normalized(&self) -> IntVector {
        if self.leading_sign() < 0 {
            self.negated()
        } else {
            self.clone()
        }
    }

    pub fn negated(&self) -> IntVector {
        IntVector(self.iter().map(|&x| -x).collect())
    }

    pub fn scaled(&self, s: i64) -> Result<IntVector> {
        self.iter().map(|&x| mul(x, s)).collect::<Result<_>>().map(IntVector)
    }
}

impl Deref for IntVector {
    type Target = Vec<i64>;
    fn deref(&self) -> &Vec<i64> {
        &self.0
    }
}

impl DerefMut for IntVector {
    fn deref_mut(&mut self) -> &mut Vec<i64> {
        &mut self.0
    }
}

impl From<Vec<i64>> for IntVector {
    fn from(v: Vec<i64>) -> Self {
        IntVector(v)
    }
}

impl fmt::Debug for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<i64>) -> Result<Self> {
        if rows * cols != data.len() {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::DimensionMismatch("ragged rows".into()));
            }
            data.extend_from_slice(r);
        }
        Ok(IntMatrix { rows: rows.len(), cols, data })
    }

    /// Builds an `n x columns.len()` matrix from column vectors of length `n`.
    pub fn from_columns(n: usize, columns: &[IntVector]) -> Result<Self> {
        let mut m = Self::zeros(n, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "column {j} has length {}, expected {n}",
                    c.len()
                )));
            }
            for i in 0..n {
                m[(i, j)] = c[i];
            }
        }
        Ok(m)
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

    pub fn as_slice(&self) -> &[i64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> IntVector {
        IntVector(self.data[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn column(&self, j: usize) -> IntVector {
        IntVector((0..self.rows).map(|i| self[(i, j)]).collect())
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).0).collect()
    }

    pub fn columns(&self) -> Vec<IntVector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn select_columns(&self, idx: &[usize]) -> IntMatrix {
        let mut m = Self::zeros(self.rows, idx.len());
        for (k, &j) in idx.iter().enumerate() {
            for i in 0..self.rows {
                m[(i, k)] = self[(i, j)];
            }
        }
        m
    }

    pub fn select_rows(&self, idx: &[usize]) -> IntMatrix {
        let mut m = Self::zeros(idx.len(), self.cols);
        for (k, &i) in idx.iter().enumerate() {
            m.data[k * self.cols..(k + 1) * self.cols]
                .copy_from_slice(&self.data[i * self.cols..(i + 1) * self.cols]);
        }
        m
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)];
            }
        }
        m
    }

    pub fn mul(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] = add(out[(i, j)], mul(a, rhs[(k, j)])?)?;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &IntVector) -> Result<IntVector> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch(format!(
                "cannot apply {}x{} matrix to vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        (0..self.rows)
            .map(|i| {
                (0..self.cols).try_fold(0i64, |acc, k| add(acc, mul(self[(i, k)], v[k])?))
            })
            .collect::<Result<_>>()
            .map(IntVector)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// `row[dst] += q * row[src]`
    fn add_row_multiple(&mut self, dst: usize, src: usize, q: i64) -> Result<()> {
        if q == 0 {
            return Ok(());
        }
        for j in 0..self.cols {
            self[(dst, j)] = add(self[(dst, j)], mul(q, self[(src, j)])?)?;
        }
        Ok(())
    }

    /// `col[dst] += q * col[src]`
    fn add_col_multiple(&mut self, dst: usize, src: usize, q: i64) -> Result<()> {
        if q == 0 {
            return Ok(());
        }
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

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
        }
        write!(f, "]")
    }
}

/// Determinant by Bareiss fraction-free elimination.
pub fn det(m: &IntMatrix) -> Result<i64> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows, cols: m.cols });
    }
    let n = m.rows;
    if n == 0 {
        return Ok(1);
    }
    let mut a: Vec<i128> = m.data.iter().map(|&x| x as i128).collect();
    let at = |i: usize, j: usize| i * n + j;
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[at(k, k)] == 0 {
            let Some(p) = (k + 1..n).find(|&i| a[at(i, k)] != 0) else {
                return Ok(0);
            };
            for j in 0..n {
                a.swap(at(k, j), at(p, j));
            }
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let x = a[at(i, j)]
                    .checked_mul(a[at(k, k)])
                    .and_then(|x| x.checked_sub(a[at(i, k)].checked_mul(a[at(k, j)])?))
                    .ok_or(Error::Overflow)?;
                // exact by Sylvester's identity
                a[at(i, j)] = x / prev;
            }
        }
        prev = a[at(k, k)];
    }
    let d = sign * a[at(n - 1, n - 1)];
    i64::try_from(d).map_err(|_| Error::Overflow)
}

/// Integral inverse of a matrix with determinant `±1`.
pub fn unimodular_inverse(m: &IntMatrix) -> Result<IntMatrix> {
    let d = det(m)?;
    if d.abs() != 1 {
        return Err(Error::NotUnimodular { det: d });
    }
    let n = m.rows;
    let mut a = m.clone();
    let mut inv = IntMatrix::identity(n);
    // Row-reduce with unimodular operations only; the pivot of each column
    // ends up as the gcd of the remaining entries, which is forced to be 1.
    for c in 0..n {
        loop {
            let pivot = (c..n)
                .filter(|&i| a[(i, c)] != 0)
                .min_by_key(|&i| a[(i, c)].unsigned_abs());
            let Some(p) = pivot else {
                return Err(Error::NotUnimodular { det: 0 });
            };
            a.swap_rows(c, p);
            inv.swap_rows(c, p);
            let mut done = true;
            for i in c + 1..n {
                let q = a[(i, c)] / a[(c, c)];
                a.add_row_multiple(i, c, -q)?;
                inv.add_row_multiple(i, c, -q)?;
                if a[(i, c)] != 0 {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a[(c, c)] < 0 {
            a.negate_row(c);
            inv.negate_row(c);
        }
        debug_assert_eq!(a[(c, c)], 1);
    }
    for c in (0..n).rev() {
        for i in 0..c {
            let q = a[(i, c)];
            a.add_row_multiple(i, c, -q)?;
            inv.add_row_multiple(i, c, -q)?;
        }
    }
    Ok(inv)
}

/// Smith normal form `U * M * V = D` with `U`, `V` unimodular and `D`
/// diagonal with nonnegative entries, each dividing the next.
#[derive(Debug, Clone)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        (0..self.d.rows.min(self.d.cols)).take_while(|&i| self.d[(i, i)] != 0).count()
    }

    pub fn invariant_factors(&self) -> Vec<i64> {
        (0..self.rank()).map(|i| self.d[(i, i)]).collect()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> Result<SmithForm> {
    let (rows, cols) = (m.rows, m.cols);
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        let pivot = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| d[(i, j)] != 0)
            .min_by_key(|&(i, j)| d[(i, j)].unsigned_abs());
        let Some((pi, pj)) = pivot else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            let mut clean = true;
            for i in t + 1..rows {
                let q = d[(i, t)] / d[(t, t)];
                d.add_row_multiple(i, t, -q)?;
                u.add_row_multiple(i, t, -q)?;
                if d[(i, t)] != 0 {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                let q = d[(t, j)] / d[(t, t)];
                d.add_col_multiple(j, t, -q)?;
                v.add_col_multiple(j, t, -q)?;
                if d[(t, j)] != 0 {
                    clean = false;
                }
            }
            if !clean {
                // a nonzero remainder is smaller than the pivot: promote it
                let (pi, pj) = (t..rows)
                    .map(|i| (i, t))
                    .chain((t..cols).map(|j| (t, j)))
                    .filter(|&(i, j)| d[(i, j)] != 0)
                    .min_by_key(|&(i, j)| d[(i, j)].unsigned_abs())
                    .expect("pivot row/column is nonzero");
                d.swap_rows(t, pi);
                u.swap_rows(t, pi);
                d.swap_cols(t, pj);
                v.swap_cols(t, pj);
                continue;
            }
            let p = d[(t, t)];
            let offender = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| d[(i, j)] % p != 0);
            match offender {
                Some((i, _)) => {
                    d.add_row_multiple(t, i, 1)?;
                    u.add_row_multiple(t, i, 1)?;
                }
                None => break,
            }
        }
        if d[(t, t)] < 0 {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    Ok(SmithForm { u, d, v })
}

/// Basis of the saturated sublattice `{v : <w, v> = 0 for all w in rows}`
/// of `Z^rank`. Basis vectors are sign-normalized.
pub fn integer_kernel(rows: &[IntVector], rank: usize) -> Result<Vec<IntVector>> {
    if let Some(bad) = rows.iter().find(|w| w.len() != rank) {
        return Err(Error::DimensionMismatch(format!(
            "covector of length {} in rank {rank}",
            bad.len()
        )));
    }
    if rows.is_empty() {
        return Ok((0..rank).map(|k| IntVector::unit(rank, k)).collect());
    }
    let m = IntMatrix::from_rows(&rows.iter().map(|w| w.0.clone()).collect::<Vec<_>>())?;
    let snf = smith_normal_form(&m)?;
    let r = snf.rank();
    Ok((r..rank).map(|j| snf.v.column(j).sign_normalized()).collect())
}

/// The sign-normalized primitive generator of a rank-one lattice.
pub fn primitive_generator(basis: &[IntVector]) -> Result<IntVector> {
    if basis.len() != 1 || basis[0].is_zero() {
        return Err(Error::RankNotOne { rank: basis.iter().filter(|b| !b.is_zero()).count() });
    }
    let g = basis[0].content();
    Ok(IntVector(basis[0].iter().map(|&x| x / g).collect()).sign_normalized())
}

impl Serialize for IntMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<i64>> = Vec::deserialize(d)?;
        IntMatrix::from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn det_small_cases() {
        assert_eq!(det(&IntMatrix::identity(3)).unwrap(), 1);
        assert_eq!(det(&m(&[&[1, -1], &[1, 0]])).unwrap(), 1);
        assert_eq!(det(&m(&[&[0, 2], &[1, 1]])).unwrap(), -2);
        assert_eq!(det(&m(&[&[0, 0], &[1, 1]])).unwrap(), 0);
        assert!(matches!(det(&m(&[&[1, 2, 3]])), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn det_overflow_is_an_error() {
        let big = i64::MAX / 2;
        assert_eq!(det(&m(&[&[big, big], &[-big, big]])), Err(Error::Overflow));
    }

    #[test]
    fn unimodular_inverse_cases() {
        assert_eq!(unimodular_inverse(&IntMatrix::identity(3)).unwrap(), IntMatrix::identity(3));
        let a = m(&[&[1, -1], &[0, -1]]);
        assert_eq!(unimodular_inverse(&a).unwrap(), a);
        assert_eq!(
            unimodular_inverse(&m(&[&[2, 0], &[0, 1]])),
            Err(Error::NotUnimodular { det: 2 })
        );
    }

    #[test]
    fn kernel_cases() {
        let k = integer_kernel(&[IntVector::new(vec![0, 1])], 2).unwrap();
        assert_eq!(k, vec![IntVector::new(vec![1, 0])]);
        let k = integer_kernel(&[IntVector::new(vec![1, 0]), IntVector::new(vec![0, 1])], 2).unwrap();
        assert!(k.is_empty());
        let k = integer_kernel(&[IntVector::new(vec![1, -1])], 2).unwrap();
        assert_eq!(k, vec![IntVector::new(vec![1, 1])]);
        let k = integer_kernel(&[], 3).unwrap();
        assert_eq!(k.len(), 3);
    }

    #[test]
    fn kernel_is_saturated() {
        // 2x - 4y = 0 has kernel generated by (2,1), not (4,2)
        let k = integer_kernel(&[IntVector::new(vec![2, -4])], 2).unwrap();
        assert_eq!(k, vec![IntVector::new(vec![2, 1])]);
    }

    #[test]
    fn primitive_generator_cases() {
        assert_eq!(
            primitive_generator(&[IntVector::new(vec![2, 2])]).unwrap(),
            IntVector::new(vec![1, 1])
        );
        assert_eq!(
            primitive_generator(&[IntVector::new(vec![0, -3])]).unwrap(),
            IntVector::new(vec![0, 1])
        );
        assert_eq!(primitive_generator(&[]), Err(Error::RankNotOne { rank: 0 }));
    }

    #[test]
    fn smith_form_of_known_matrix() {
        let a = m(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let s = smith_normal_form(&a).unwrap();
        assert_eq!(s.invariant_factors(), vec![2, 6, 12]);
        assert_eq!(s.u.mul(&a).unwrap().mul(&s.v).unwrap(), s.d);
    }
}
