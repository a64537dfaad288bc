use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::exactalg::field::FieldElem;
use crate::exactalg::hom::RingHom;
use crate::exactalg::ring::{Elem, Exponent, Ring};

/// Dense row-major matrix over a single ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl Matrix {
    pub fn zeros(ring: &Ring, rows: usize, cols: usize) -> Self {
        Matrix { ring: ring.clone(), rows, cols, data: vec![ring.zero(); rows * cols] }
    }

    pub fn identity(ring: &Ring, n: usize) -> Self {
        let mut m = Matrix::zeros(ring, n, n);
        for i in 0..n {
            m.data[i * n + i] = ring.one();
        }
        m
    }

    pub fn from_rows(ring: &Ring, rows: Vec<Vec<Elem>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::Shape("ragged rows".into()));
            }
            for e in row {
                if !ring.contains(&e) {
                    return Err(Error::RingMismatch {
                        expected: ring.to_string(),
                        found: format!("{e:?}"),
                    });
                }
                data.push(e);
            }
        }
        Ok(Matrix { ring: ring.clone(), rows: r, cols: c, data })
    }

    pub fn from_i64(ring: &Ring, rows: &[&[i64]]) -> Self {
        let v = rows.iter().map(|r| r.iter().map(|x| ring.from_i64(*x)).collect()).collect();
        Matrix::from_rows(ring, v).expect("integer rows")
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Elem {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Elem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Elem)> {
        let c = self.cols;
        self.data.iter().enumerate().map(move |(k, e)| (k / c, k % c, e))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| self.ring.is_zero(e))
    }

    fn check_same(&self, other: &Matrix) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch {
                expected: self.ring.to_string(),
                found: other.ring.to_string(),
            });
        }
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::Shape(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| self.ring.add(a, b)).collect();
        Ok(Matrix { data, ..self.clone_shape() })
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| self.ring.sub(a, b)).collect();
        Ok(Matrix { data, ..self.clone_shape() })
    }

    pub fn neg(&self) -> Matrix {
        let data = self.data.iter().map(|a| self.ring.neg(a)).collect();
        Matrix { data, ..self.clone_shape() }
    }

    pub fn scale(&self, c: &Elem) -> Matrix {
        let data = self.data.iter().map(|a| self.ring.mul(c, a)).collect();
        Matrix { data, ..self.clone_shape() }
    }

    fn clone_shape(&self) -> Matrix {
        Matrix { ring: self.ring.clone(), rows: self.rows, cols: self.cols, data: Vec::new() }
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch {
                expected: self.ring.to_string(),
                found: other.ring.to_string(),
            });
        }
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let r = &self.ring;
        let mut out = Matrix::zeros(r, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if r.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other.data[k * other.cols + j];
                    if !r.is_zero(b) {
                        let slot = &mut out.data[i * other.cols + j];
                        *slot = r.add(slot, &r.mul(a, b));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(&self.ring, self.cols, self.rows);
        for (i, j, e) in self.entries() {
            out.data[j * self.rows + i] = e.clone();
        }
        out
    }

    /// Entrywise image under a ring homomorphism.
    pub fn apply_hom(&self, h: &RingHom) -> Result<Matrix> {
        if *h.source() != self.ring {
            return Err(Error::RingMismatch {
                expected: h.source().to_string(),
                found: self.ring.to_string(),
            });
        }
        if h.is_identity() {
            return Ok(self.clone());
        }
        let data = self.data.iter().map(|a| h.apply(a)).collect();
        Ok(Matrix { ring: h.target().clone(), rows: self.rows, cols: self.cols, data })
    }

    /// Base-field matrix of the coefficients of `x^w`.
    pub fn weight_component(&self, w: &[i32]) -> Result<Matrix> {
        if self.ring.is_field() {
            return Err(Error::NotLaurent(self.ring.to_string()));
        }
        let base: Ring = base_ring(&self.ring);
        let data = self.data.iter().map(|a| Elem::F(self.ring.coefficient(a, w))).collect();
        Ok(Matrix { ring: base, rows: self.rows, cols: self.cols, data })
    }

    /// All exponent vectors occurring in some entry.
    pub fn support(&self) -> BTreeSet<Exponent> {
        let mut out = BTreeSet::new();
        for a in &self.data {
            for (e, _) in self.ring.terms(a) {
                out.insert(e);
            }
        }
        out
    }

    /// Stacks `blocks[i][j]` into one matrix; `None` entries are zero.
    pub fn block(ring: &Ring, row_sizes: &[usize], col_sizes: &[usize], blocks: &[Vec<Option<&Matrix>>]) -> Matrix {
        let rows: usize = row_sizes.iter().sum();
        let cols: usize = col_sizes.iter().sum();
        let mut out = Matrix::zeros(ring, rows, cols);
        let mut r0 = 0;
        for (bi, rs) in row_sizes.iter().enumerate() {
            let mut c0 = 0;
            for (bj, cs) in col_sizes.iter().enumerate() {
                if let Some(m) = blocks[bi][bj] {
                    debug_assert_eq!((m.rows, m.cols), (*rs, *cs));
                    for (i, j, e) in m.entries() {
                        out.data[(r0 + i) * cols + c0 + j] = e.clone();
                    }
                }
                c0 += cs;
            }
            r0 += rs;
        }
        out
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        let mut out = Matrix::zeros(&self.ring, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out.data[i * cols + j] = self.data[(r0 + i) * self.cols + c0 + j].clone();
            }
        }
        out
    }

    /// Inverse via Gauss–Jordan with unit pivots; `None` if no unit pivot is
    /// available at some step (over a field: iff singular).
    pub fn try_inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let r = &self.ring;
        let mut a = self.clone();
        let mut inv = Matrix::identity(r, n);
        for col in 0..n {
            let piv = (col..n).find(|&i| r.is_unit(a.get(i, col)))?;
            a.swap_rows(piv, col);
            inv.swap_rows(piv, col);
            let p_inv = r.inv(a.get(col, col))?;
            a.scale_row(col, &p_inv);
            inv.scale_row(col, &p_inv);
            for i in 0..n {
                if i != col && !r.is_zero(a.get(i, col)) {
                    let f = a.get(i, col).clone();
                    a.add_row_multiple(i, col, &r.neg(&f));
                    inv.add_row_multiple(i, col, &r.neg(&f));
                }
            }
        }
        if a != Matrix::identity(r, n) {
            return None;
        }
        Some(inv)
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            for c in 0..self.cols {
                self.data.swap(i * self.cols + c, j * self.cols + c);
            }
        }
    }

    fn scale_row(&mut self, i: usize, f: &Elem) {
        for c in 0..self.cols {
            let k = i * self.cols + c;
            self.data[k] = self.ring.mul(f, &self.data[k]);
        }
    }

    /// row_i += f * row_j
    fn add_row_multiple(&mut self, i: usize, j: usize, f: &Elem) {
        for c in 0..self.cols {
            let b = &self.data[j * self.cols + c];
            if !self.ring.is_zero(b) {
                let v = self.ring.mul(f, b);
                let k = i * self.cols + c;
                self.data[k] = self.ring.add(&self.data[k], &v);
            }
        }
    }

    fn require_field(&self) -> Result<()> {
        if self.ring.is_field() {
            Ok(())
        } else {
            Err(Error::NotAField(self.ring.to_string()))
        }
    }

    /// Reduced row echelon form over a field, with pivot columns.
    pub fn rref(&self) -> Result<(Matrix, Vec<usize>)> {
        self.require_field()?;
        let r = &self.ring;
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..a.cols {
            if row == a.rows {
                break;
            }
            let Some(p) = (row..a.rows).find(|&i| !r.is_zero(a.get(i, col))) else {
                continue;
            };
            a.swap_rows(p, row);
            let inv = r.inv(a.get(row, col)).expect("nonzero in a field");
            a.scale_row(row, &inv);
            for i in 0..a.rows {
                if i != row && !r.is_zero(a.get(i, col)) {
                    let f = r.neg(a.get(i, col));
                    a.add_row_multiple(i, row, &f);
                }
            }
            pivots.push(col);
            row += 1;
        }
        Ok((a, pivots))
    }

    pub fn field_rank(&self) -> Result<usize> {
        self.require_field()?;
        Ok(rank_in_place(&self.ring, self.rows, self.cols, self.data.clone()))
    }

    /// Columns spanning the kernel, one per free variable of the echelon form.
    pub fn kernel_basis(&self) -> Result<Vec<Vec<Elem>>> {
        let (a, pivots) = self.rref()?;
        let r = &self.ring;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        Ok(free
            .iter()
            .map(|&f| {
                let mut v = vec![r.zero(); self.cols];
                v[f] = r.one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = r.neg(a.get(row, f));
                }
                v
            })
            .collect())
    }

    pub fn mul_vec(&self, v: &[Elem]) -> Vec<Elem> {
        let r = &self.ring;
        (0..self.rows)
            .map(|i| {
                let mut acc = r.zero();
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !r.is_zero(a) && !r.is_zero(x) {
                        acc = r.add(&acc, &r.mul(a, x));
                    }
                }
                acc
            })
            .collect()
    }
}

/// Rank by forward elimination, consuming row-major field data.
fn rank_in_place(ring: &Ring, rows: usize, cols: usize, mut data: Vec<Elem>) -> usize {
    let base = ring.base();
    let field = |e: &Elem| match e {
        Elem::F(c) => c.clone(),
        Elem::L(_) => unreachable!("field matrix"),
    };
    let mut m: Vec<Vec<FieldElem>> =
        (0..rows).map(|_| data.drain(..cols).map(|e| field(&e)).collect::<Vec<_>>()).collect();
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..rows).find(|&i| !base.is_zero(&m[i][col])) else {
            continue;
        };
        m.swap(p, rank);
        let inv = base.inv(&m[rank][col]).expect("nonzero");
        let pivot_row: Vec<FieldElem> = m[rank].iter().map(|x| base.mul(&inv, x)).collect();
        for row in m.iter_mut().skip(rank + 1) {
            if base.is_zero(&row[col]) {
                continue;
            }
            let f = row[col].clone();
            for c in col..cols {
                if !base.is_zero(&pivot_row[c]) {
                    row[c] = base.sub(&row[c], &base.mul(&f, &pivot_row[c]));
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// The base field of `ring` as a ring.
pub fn base_ring(ring: &Ring) -> Ring {
    match ring.base() {
        crate::exactalg::field::BaseField::Rationals => Ring::rationals(),
        crate::exactalg::field::BaseField::Prime(p) => Ring::prime_field(p).expect("validated prime"),
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = (0..self.cols).map(|j| self.ring.fmt_elem(self.get(i, j))).collect();
            write!(f, "{}", row.join(", "))?;
        }
        write!(f, "]")
    }
}
