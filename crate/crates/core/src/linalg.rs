//! Exact dense linear algebra over the coefficient fields.

use crate::error::{Error, Result};
use crate::poly::{Monomial, MultiPoly};
use std::collections::BTreeMap;
use crate::scalar::{Field, Scalar};
use std::fmt;

/// A square matrix of scalars, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareMatrix {
    field: Field,
    rows: Vec<Vec<Scalar>>,
}

impl SquareMatrix {
    pub fn new(field: &Field, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("matrix is not square".into()));
        }
        if rows.iter().flatten().any(|s| !s.same_field(&field.zero())) {
            return Err(Error::FieldMismatch(field.describe(), "matrix entry".into()));
        }
        Ok(SquareMatrix { field: field.clone(), rows })
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        let rows = (0..n)
            .map(|i| (0..n).map(|j| if i == j { field.one() } else { field.zero() }).collect())
            .collect();
        SquareMatrix { field: field.clone(), rows }
    }

    pub fn zero(field: &Field, n: usize) -> Self {
        SquareMatrix { field: field.clone(), rows: vec![vec![field.zero(); n]; n] }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<Scalar>] {
        &self.rows
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim();
        let rows = (0..n).map(|i| (0..n).map(|j| self.rows[j][i].clone()).collect()).collect();
        SquareMatrix { field: self.field.clone(), rows }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.dim();
        let mut out = Self::zero(&self.field, n);
        for i in 0..n {
            for k in 0..n {
                if self.rows[i][k].is_zero() {
                    continue;
                }
                for j in 0..n {
                    let t = &self.rows[i][k] * &other.rows[k][j];
                    out.rows[i][j] = &out.rows[i][j] + &t;
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect())
            .collect();
        SquareMatrix { field: self.field.clone(), rows }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc = Self::identity(&self.field, self.dim());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().flatten().all(|s| s.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(&self.field, self.dim())
    }

    /// `(M - I)^n = 0`.
    pub fn is_unipotent(&self) -> bool {
        let n = self.dim();
        self.sub(&Self::identity(&self.field, n)).pow(n as u32).is_zero()
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.rows
            .iter()
            .map(|r| r.iter().zip(v).fold(self.field.zero(), |acc, (a, b)| &acc + &(a * b)))
            .collect()
    }

    pub fn det(&self) -> Scalar {
        let n = self.dim();
        let mut m = self.rows.clone();
        let mut det = self.field.one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
                return self.field.zero();
            };
            if p != col {
                m.swap(p, col);
                det = -det;
            }
            det = &det * &m[col][col];
            let inv = m[col][col].inv().expect("nonzero pivot");
            for r in col + 1..n {
                if m[r][col].is_zero() {
                    continue;
                }
                let f = &m[r][col] * &inv;
                for c in col..n {
                    let t = &f * &m[col][c];
                    m[r][c] = &m[r][c] - &t;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.dim();
        let mut m = self.rows.clone();
        let mut inv = Self::identity(&self.field, n).rows;
        for col in 0..n {
            let p = (col..n).find(|&r| !m[r][col].is_zero()).ok_or(Error::SingularSystem)?;
            m.swap(p, col);
            inv.swap(p, col);
            let s = m[col][col].inv()?;
            for c in 0..n {
                m[col][c] = &m[col][c] * &s;
                inv[col][c] = &inv[col][c] * &s;
            }
            for r in 0..n {
                if r == col || m[r][col].is_zero() {
                    continue;
                }
                let f = m[r][col].clone();
                for c in 0..n {
                    let t = &f * &m[col][c];
                    m[r][c] = &m[r][c] - &t;
                    let t = &f * &inv[col][c];
                    inv[r][c] = &inv[r][c] - &t;
                }
            }
        }
        Ok(SquareMatrix { field: self.field.clone(), rows: inv })
    }
}

impl fmt::Display for SquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| format!("[{}]", r.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(", ")))
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

/// Solves `M * X = rhs` for polynomial unknowns `X` (scalar matrix `M`).
pub fn solve_with_poly_rhs(matrix: &[Vec<Scalar>], rhs: &[MultiPoly]) -> Result<Vec<MultiPoly>> {
    let n = matrix.len();
    if rhs.len() != n || matrix.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidInput("system must be square".into()));
    }
    let mut m: Vec<Vec<Scalar>> = matrix.to_vec();
    let mut b: Vec<MultiPoly> = rhs.to_vec();
    for col in 0..n {
        let p = (col..n).find(|&r| !m[r][col].is_zero()).ok_or(Error::SingularSystem)?;
        m.swap(p, col);
        b.swap(p, col);
        let s = m[col][col].inv()?;
        for c in col..n {
            m[col][c] = &m[col][c] * &s;
        }
        b[col] = b[col].scale(&s);
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for c in col..n {
                let t = &f * &m[col][c];
                m[r][c] = &m[r][c] - &t;
            }
            let t = b[col].scale(&f);
            b[r] = &b[r] - &t;
        }
    }
    Ok(b)
}

/// Coefficients `c` with `target = sum_j c_j vectors[j]`, assuming the
/// vectors are linearly independent; `None` if `target` is outside their span.
pub fn express_in_span(vectors: &[MultiPoly], target: &MultiPoly) -> Option<Vec<Scalar>> {
    let field = target.field().clone();
    let k = vectors.len();
    let mut rows: BTreeMap<&Monomial, Vec<Scalar>> = BTreeMap::new();
    for (j, v) in vectors.iter().chain(std::iter::once(target)).enumerate() {
        for (m, c) in v.terms() {
            rows.entry(m).or_insert_with(|| vec![field.zero(); k + 1])[j] = c.clone();
        }
    }
    let mut ech = RowEchelon::new(&field, k + 1);
    for row in rows.into_values() {
        ech.add_row(row);
    }
    if ech.pivots.iter().any(|p| p.0 == k) {
        return None;
    }
    let mut out = vec![field.zero(); k];
    for (c, row) in &ech.pivots {
        out[*c] = row[k].clone();
    }
    Some(out)
}

/// Incrementally maintained reduced row echelon form.
///
/// Pivots are chosen at the first nonzero column, so callers control which
/// unknowns end up free through the column order.
#[derive(Clone, Debug)]
pub struct RowEchelon {
    field: Field,
    ncols: usize,
    pivots: Vec<(usize, Vec<Scalar>)>,
}

impl RowEchelon {
    pub fn new(field: &Field, ncols: usize) -> Self {
        RowEchelon { field: field.clone(), ncols, pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Reduces `row` against the current pivots; returns whether the rank grew.
    pub fn add_row(&mut self, mut row: Vec<Scalar>) -> bool {
        debug_assert_eq!(row.len(), self.ncols);
        for (c, pr) in &self.pivots {
            if row[*c].is_zero() {
                continue;
            }
            let f = row[*c].clone();
            for (x, y) in row.iter_mut().zip(pr) {
                if !y.is_zero() {
                    *x = &*x - &(&f * y);
                }
            }
        }
        let Some(col) = row.iter().position(|s| !s.is_zero()) else {
            return false;
        };
        let inv = row[col].inv().expect("nonzero pivot");
        for x in row.iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        for (_, pr) in self.pivots.iter_mut() {
            if pr[col].is_zero() {
                continue;
            }
            let f = pr[col].clone();
            for (x, y) in pr.iter_mut().zip(&row) {
                if !y.is_zero() {
                    *x = &*x - &(&f * y);
                }
            }
        }
        self.pivots.push((col, row));
        self.pivots.sort_by_key(|p| p.0);
        true
    }

    /// Basis of the right nullspace, one vector per free column (free
    /// column entry 1), ordered by free column.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        let pivot_cols: Vec<usize> = self.pivots.iter().map(|p| p.0).collect();
        (0..self.ncols)
            .filter(|c| !pivot_cols.contains(c))
            .map(|free| {
                let mut v = vec![self.field.zero(); self.ncols];
                v[free] = self.field.one();
                for (pc, pr) in &self.pivots {
                    v[*pc] = -&pr[free];
                }
                v
            })
            .collect()
    }

    /// The reduced row basis of the row space, ordered by pivot column.
    pub fn basis(&self) -> Vec<Vec<Scalar>> {
        self.pivots.iter().map(|p| p.1.clone()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Scalar {
        Field::Rationals.from_i64(n)
    }

    #[test]
    fn inverse_and_det() {
        let f = Field::Rationals;
        let m = SquareMatrix::new(&f, vec![vec![q(2), q(1)], vec![q(1), q(1)]]).unwrap();
        assert_eq!(m.det(), q(1));
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        let s = SquareMatrix::new(&f, vec![vec![q(1), q(2)], vec![q(2), q(4)]]).unwrap();
        assert_eq!(s.inverse(), Err(Error::SingularSystem));
    }

    #[test]
    fn unipotency() {
        let f = Field::Rationals;
        let j = SquareMatrix::new(&f, vec![vec![q(1), q(0)], vec![q(5), q(1)]]).unwrap();
        assert!(j.is_unipotent());
        let d = SquareMatrix::new(&f, vec![vec![q(2), q(0)], vec![q(0), f.from_ratio(1, 2)]]).unwrap();
        assert!(!d.is_unipotent());
        assert!(SquareMatrix::identity(&f, 3).is_unipotent());
    }

    #[test]
    fn nullspace_of_rank_one() {
        let f = Field::Rationals;
        let mut e = RowEchelon::new(&f, 3);
        assert!(e.add_row(vec![q(1), q(2), q(3)]));
        assert!(!e.add_row(vec![q(2), q(4), q(6)]));
        let ns = e.nullspace();
        assert_eq!(ns.len(), 2);
        for v in ns {
            let dot = &(&v[0] + &(&v[1] * &q(2))) + &(&v[2] * &q(3));
            assert!(dot.is_zero());
        }
    }
}
