//! Square matrices over GF(q).

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::canonical::vector_order;
use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::poly::Poly;

pub type Vector = Vec<Elem>;

/// An n×n matrix stored row-major.
#[derive(Clone)]
pub struct Matrix {
    field: Field,
    n: usize,
    data: Vec<Elem>,
}

impl PartialEq for Matrix {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.n == other.n && self.data == other.data
    }
}

impl Eq for Matrix {}

impl std::hash::Hash for Matrix {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.data.hash(state);
    }
}

impl Matrix {
    /// Builds a matrix from row-major entries.
    pub fn from_vec(field: &Field, n: usize, data: Vec<Elem>) -> Result<Matrix> {
        if n == 0 {
            return Err(Error::DimensionMismatch(
                "matrices must be at least 1x1".into(),
            ));
        }
        if data.len() != n * n {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {n}x{n} matrix",
                data.len()
            )));
        }
        if data.iter().any(|&e| !field.contains(e)) {
            return Err(Error::MixedFields);
        }
        Ok(Matrix {
            field: field.clone(),
            n,
            data,
        })
    }

    pub fn from_rows(field: &Field, rows: Vec<Vec<Elem>>) -> Result<Matrix> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("matrix is not square".into()));
        }
        Matrix::from_vec(field, n, rows.into_iter().flatten().collect())
    }

    /// Rows of element indices, e.g. `&[&[0, 1], &[1, 1]]`.
    pub fn from_indices(field: &Field, rows: &[&[u64]]) -> Result<Matrix> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&i| field.index_element(i)).collect())
            .collect::<Result<Vec<Vec<Elem>>>>()?;
        Matrix::from_rows(field, rows)
    }

    pub fn zero(field: &Field, n: usize) -> Matrix {
        assert!(n > 0, "matrices must be at least 1x1");
        Matrix {
            field: field.clone(),
            n,
            data: vec![Elem::ZERO; n * n],
        }
    }

    pub fn scalar(field: &Field, n: usize, c: Elem) -> Matrix {
        let mut m = Matrix::zero(field, n);
        for i in 0..n {
            m.data[i * n + i] = c;
        }
        m
    }

    pub fn identity(field: &Field, n: usize) -> Matrix {
        Matrix::scalar(field, n, Elem::ONE)
    }

    pub fn diagonal(field: &Field, entries: &[Elem]) -> Matrix {
        let mut m = Matrix::zero(field, entries.len());
        for (i, &e) in entries.iter().enumerate() {
            m.set(i, i, e);
        }
        m
    }

    /// The matrix whose columns are the given vectors.
    pub fn from_columns(field: &Field, columns: &[Vector]) -> Result<Matrix> {
        let n = columns.len();
        if n == 0 || columns.iter().any(|c| c.len() != n) {
            return Err(Error::DimensionMismatch(
                "columns do not form a square matrix".into(),
            ));
        }
        let mut m = Matrix::zero(field, n);
        for (j, col) in columns.iter().enumerate() {
            for (i, &e) in col.iter().enumerate() {
                m.set(i, j, e);
            }
        }
        Ok(m)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Elem] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.data[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> Vector {
        self.data[i * self.n..(i + 1) * self.n].to_vec()
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.n).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    fn compatible(&self, other: &Matrix) -> Result<()> {
        if self.field != other.field {
            return Err(Error::MixedFields);
        }
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.n, self.n, other.n, other.n
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Matrix) -> Result<Matrix> {
        self.compatible(other)?;
        let f = &self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        Ok(Matrix {
            data,
            ..self.clone()
        })
    }

    pub fn try_sub(&self, other: &Matrix) -> Result<Matrix> {
        self.compatible(other)?;
        let f = &self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.sub(a, b))
            .collect();
        Ok(Matrix {
            data,
            ..self.clone()
        })
    }

    pub fn try_mul(&self, other: &Matrix) -> Result<Matrix> {
        self.compatible(other)?;
        let (f, n) = (&self.field, self.n);
        let mut data = vec![Elem::ZERO; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let idx = i * n + j;
                    data[idx] = f.add(data[idx], f.mul(a, other.get(k, j)));
                }
            }
        }
        Ok(Matrix {
            data,
            ..self.clone()
        })
    }

    pub fn scale(&self, c: Elem) -> Matrix {
        let f = &self.field;
        Matrix {
            data: self.data.iter().map(|&a| f.mul(a, c)).collect(),
            ..self.clone()
        }
    }

    pub fn transpose(&self) -> Matrix {
        let n = self.n;
        let mut t = self.clone();
        for i in 0..n {
            for j in 0..n {
                t.data[j * n + i] = self.data[i * n + j];
            }
        }
        t
    }

    pub fn pow(&self, mut e: u64) -> Matrix {
        let mut base = self.clone();
        let mut acc = Matrix::identity(&self.field, self.n);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn mul_vec(&self, v: &[Elem]) -> Result<Vector> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} for a {n}x{n} matrix",
                v.len(),
                n = self.n
            )));
        }
        let f = &self.field;
        Ok((0..self.n)
            .map(|i| (0..self.n).fold(Elem::ZERO, |acc, j| f.add(acc, f.mul(self.get(i, j), v[j]))))
            .collect())
    }

    /// `p(M)` by Horner's rule.
    pub fn eval_poly(&self, p: &Poly) -> Result<Matrix> {
        if p.field() != &self.field {
            return Err(Error::MixedFields);
        }
        let mut acc = Matrix::zero(&self.field, self.n);
        for &c in p.coeffs().iter().rev() {
            acc = &acc * self;
            for i in 0..self.n {
                let idx = i * self.n + i;
                acc.data[idx] = self.field.add(acc.data[idx], c);
            }
        }
        Ok(acc)
    }

    /// `det(xI - M)` by Berkowitz's division-free algorithm.
    pub fn charpoly(&self) -> Poly {
        let mut coeffs = berkowitz(&self.field, self.n, &self.data);
        coeffs.reverse();
        Poly::from_elems(&self.field, coeffs)
    }

    pub fn det(&self) -> Elem {
        let c0 = self.charpoly().coeff(0);
        if self.n.is_multiple_of(2) {
            c0
        } else {
            self.field.neg(c0)
        }
    }

    /// Minimal polynomial: least common multiple of the orders of the
    /// standard basis vectors.
    pub fn minpoly(&self) -> Poly {
        let mut acc = Poly::one(&self.field);
        for j in 0..self.n {
            let mut e = vec![Elem::ZERO; self.n];
            e[j] = Elem::ONE;
            let order = vector_order(self, &e).expect("dimensions match");
            acc = acc.lcm(&order).expect("same field");
        }
        acc
    }

    /// Reduced row echelon form and pivot columns. Pivots are taken as the
    /// first nonzero entry of each column, scanning rows top-down.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let (rows, pivots) = rref_rows(&self.field, self.n, self.data.clone());
        (
            Matrix {
                data: rows,
                ..self.clone()
            },
            pivots,
        )
    }

    /// Rank and a kernel basis (one vector per free column, ascending).
    pub fn rank_kernel(&self) -> (usize, Vec<Vector>) {
        let (r, pivots) = self.rref();
        (
            pivots.len(),
            kernel_from_rref(&self.field, self.n, &r.data, &pivots),
        )
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn is_invertible(&self) -> bool {
        self.rank() == self.n
    }

    /// Inverse by Gauss–Jordan elimination on `[M | I]`.
    pub fn invert(&self) -> Result<Matrix> {
        let (f, n) = (&self.field, self.n);
        let w = 2 * n;
        let mut aug = vec![Elem::ZERO; n * w];
        for i in 0..n {
            for j in 0..n {
                aug[i * w + j] = self.get(i, j);
            }
            aug[i * w + n + i] = Elem::ONE;
        }
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !aug[r * w + col].is_zero())
                .ok_or(Error::Singular)?;
            if pivot != col {
                for j in 0..w {
                    aug.swap(pivot * w + j, col * w + j);
                }
            }
            let inv = f.inv(aug[col * w + col])?;
            for j in 0..w {
                aug[col * w + j] = f.mul(aug[col * w + j], inv);
            }
            for r in 0..n {
                let factor = aug[r * w + col];
                if r == col || factor.is_zero() {
                    continue;
                }
                for j in 0..w {
                    aug[r * w + j] = f.sub(aug[r * w + j], f.mul(factor, aug[col * w + j]));
                }
            }
        }
        let data = (0..n)
            .flat_map(|i| aug[i * w + n..(i + 1) * w].to_vec())
            .collect();
        Ok(Matrix {
            data,
            ..self.clone()
        })
    }

    /// Index in `[0, q^(n²))`: entries row-major as base-q digits, entry
    /// (0,0) least significant.
    pub fn index(&self) -> BigUint {
        let q = BigUint::from(self.field.order());
        self.data
            .iter()
            .rev()
            .fold(BigUint::zero(), |acc, e| acc * &q + e.index())
    }

    pub fn from_index(field: &Field, n: usize, index: &BigUint) -> Result<Matrix> {
        let q = BigUint::from(field.order());
        let bound = q.pow((n * n) as u32);
        if index >= &bound {
            return Err(Error::IndexOutOfRange {
                index: index.to_string(),
                bound: bound.to_string(),
            });
        }
        let mut rest = index.clone();
        let mut data = Vec::with_capacity(n * n);
        for _ in 0..n * n {
            let digit = (&rest % &q).to_u64().expect("digit below q");
            data.push(field.index_element(digit)?);
            rest /= &q;
        }
        Matrix::from_vec(field, n, data)
    }

    pub fn parse(text: &str, field: &Field) -> Result<Matrix> {
        parse_matrix(text, field)
    }
}

/// Berkowitz's algorithm on row-major entries. Returns the coefficients of
/// `det(xI - A)` from the leading 1 down to the constant term.
pub(crate) fn berkowitz(f: &Field, n: usize, a: &[Elem]) -> Vec<Elem> {
    let mut c = vec![Elem::ONE, f.neg(a[0])];
    let mut t = Vec::with_capacity(n + 1);
    let mut v = Vec::with_capacity(n);
    let mut w = Vec::with_capacity(n);
    for r in 1..n {
        // leading r×r block A_r, row R = a[r][..r], column S = a[..r][r]
        t.clear();
        t.push(Elem::ONE);
        t.push(f.neg(a[r * n + r]));
        v.clear();
        v.extend((0..r).map(|i| a[i * n + r]));
        for _ in 0..r {
            let dot = (0..r).fold(Elem::ZERO, |acc, j| f.add(acc, f.mul(a[r * n + j], v[j])));
            t.push(f.neg(dot));
            w.clear();
            w.extend(
                (0..r).map(|i| {
                    (0..r).fold(Elem::ZERO, |acc, j| f.add(acc, f.mul(a[i * n + j], v[j])))
                }),
            );
            std::mem::swap(&mut v, &mut w);
        }
        let next: Vec<Elem> = (0..r + 2)
            .map(|i| (0..=i.min(r)).fold(Elem::ZERO, |acc, j| f.add(acc, f.mul(t[i - j], c[j]))))
            .collect();
        c = next;
    }
    c
}

/// Row reduction of an `rows × cols` row-major array to reduced echelon form.
pub(crate) fn rref_general(
    f: &Field,
    rows: usize,
    cols: usize,
    mut data: Vec<Elem>,
) -> (Vec<Elem>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !data[i * cols + col].is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                data.swap(p * cols + j, r * cols + j);
            }
        }
        let inv = f.inv(data[r * cols + col]).expect("pivot is nonzero");
        for j in 0..cols {
            data[r * cols + j] = f.mul(data[r * cols + j], inv);
        }
        for i in 0..rows {
            let factor = data[i * cols + col];
            if i == r || factor.is_zero() {
                continue;
            }
            for j in 0..cols {
                data[i * cols + j] = f.sub(data[i * cols + j], f.mul(factor, data[r * cols + j]));
            }
        }
        pivots.push(col);
        r += 1;
    }
    (data, pivots)
}

fn rref_rows(f: &Field, n: usize, data: Vec<Elem>) -> (Vec<Elem>, Vec<usize>) {
    rref_general(f, n, n, data)
}

/// Kernel basis of a reduced echelon array with `cols` columns.
pub(crate) fn kernel_from_rref(
    f: &Field,
    cols: usize,
    r: &[Elem],
    pivots: &[usize],
) -> Vec<Vector> {
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Elem::ZERO; cols];
            v[free] = Elem::ONE;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(r[row * cols + free]);
            }
            v
        })
        .collect()
}

macro_rules! forward_op {
    ($trait:ident, $method:ident, $inner:ident) => {
        impl $trait<&Matrix> for &Matrix {
            type Output = Matrix;
            fn $method(self, rhs: &Matrix) -> Matrix {
                self.$inner(rhs).expect("incompatible matrices")
            }
        }
        impl $trait<Matrix> for Matrix {
            type Output = Matrix;
            fn $method(self, rhs: Matrix) -> Matrix {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_op!(Add, add, try_add);
forward_op!(Sub, sub, try_sub);
forward_op!(Mul, mul, try_mul);

/// Text format: rows separated by `;`, entries by `,`.
pub fn format_matrix(m: &Matrix) -> String {
    (0..m.n)
        .map(|i| {
            m.row(i)
                .iter()
                .map(|e| e.index().to_string())
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect::<Vec<_>>()
        .join(";")
}

pub fn parse_matrix(text: &str, field: &Field) -> Result<Matrix> {
    let mut rows = Vec::new();
    let mut offset = 0;
    for row_text in text.split(';') {
        let mut row = Vec::new();
        let mut col_offset = offset;
        for entry in row_text.split(',') {
            let trimmed = entry.trim();
            let lead = entry.len() - entry.trim_start().len();
            if trimmed.is_empty() || !trimmed.bytes().all(|b| b.is_ascii_digit()) {
                return Err(Error::Parse {
                    position: col_offset + lead,
                    message: format!("invalid matrix entry {trimmed:?}"),
                });
            }
            row.push(field.parse_element(trimmed)?);
            col_offset += entry.len() + 1;
        }
        rows.push(row);
        offset += row_text.len() + 1;
    }
    Matrix::from_rows(field, rows)
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_matrix(self))
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] over {:?}", format_matrix(self), self.field)
    }
}

/// Incrementally built echelon basis that remembers how each basis row was
/// obtained from the inserted vectors, so membership queries also return
/// coordinates.
#[derive(Clone)]
pub struct Span {
    field: Field,
    dim: usize,
    rows: Vec<SpanRow>,
    inserted: usize,
}

#[derive(Clone)]
struct SpanRow {
    pivot: usize,
    vector: Vector,
    combo: Vector,
}

impl Span {
    pub fn new(field: &Field, dim: usize) -> Span {
        Span {
            field: field.clone(),
            dim,
            rows: Vec::new(),
            inserted: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    /// Returns `(residual, coords)` with `v = residual + Σ coords[i]·inserted[i]`.
    /// The residual is zero iff `v` lies in the span.
    pub fn reduce(&self, v: &[Elem]) -> (Vector, Vector) {
        let f = &self.field;
        let mut residual = v.to_vec();
        let mut coords = vec![Elem::ZERO; self.inserted];
        for row in &self.rows {
            let c = residual[row.pivot];
            if c.is_zero() {
                continue;
            }
            for (r, &x) in residual.iter_mut().zip(&row.vector) {
                *r = f.sub(*r, f.mul(c, x));
            }
            for (k, &x) in coords.iter_mut().zip(&row.combo) {
                *k = f.add(*k, f.mul(c, x));
            }
        }
        (residual, coords)
    }

    pub fn contains(&self, v: &[Elem]) -> bool {
        self.reduce(v).0.iter().all(|e| e.is_zero())
    }

    /// Coordinates of `v` in terms of the inserted vectors, if it lies in the span.
    pub fn coordinates(&self, v: &[Elem]) -> Option<Vector> {
        let (residual, coords) = self.reduce(v);
        residual.iter().all(|e| e.is_zero()).then_some(coords)
    }

    /// Inserts `v`; returns false (and records nothing) if it is dependent.
    pub fn insert(&mut self, v: &[Elem]) -> bool {
        assert_eq!(v.len(), self.dim, "vector length");
        let f = self.field.clone();
        let (residual, coords) = self.reduce(v);
        let Some(pivot) = residual.iter().position(|e| !e.is_zero()) else {
            return false;
        };
        let inv = f.inv(residual[pivot]).expect("nonzero pivot");
        let m = self.inserted;
        self.inserted += 1;
        for row in &mut self.rows {
            row.combo.push(Elem::ZERO);
        }
        let mut combo: Vector = coords.iter().map(|&c| f.neg(c)).collect();
        combo.push(Elem::ONE);
        debug_assert_eq!(combo.len(), m + 1);
        self.rows.push(SpanRow {
            pivot,
            vector: residual.iter().map(|&x| f.mul(x, inv)).collect(),
            combo: combo.iter().map(|&x| f.mul(x, inv)).collect(),
        });
        true
    }
}
