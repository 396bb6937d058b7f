//! Dense matrices over a [`Field`] and Gauss-Jordan elimination.

use crate::galois::{Field, FieldElement};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

/// Result of Gauss-Jordan elimination.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub reduced: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, data: vec![FieldElement::ZERO; rows * cols] }
    }

    pub fn identity(size: usize) -> Matrix {
        let mut m = Matrix::zeros(size, size);
        for i in 0..size {
            m[(i, i)] = FieldElement::ONE;
        }
        m
    }

    /// Builds from rows; all rows must share a length. `cols` is used when
    /// `rows` is empty.
    pub fn from_rows(rows: Vec<Vec<FieldElement>>, cols: usize) -> Matrix {
        let cols = rows.first().map_or(cols, |r| r.len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in &rows {
            assert_eq!(r.len(), cols, "ragged matrix");
            data.extend_from_slice(r);
        }
        Matrix { rows: rows.len(), cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [FieldElement] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[FieldElement]> {
        self.data.chunks(self.cols.max(1)).take(self.rows)
    }

    pub fn to_rows(&self) -> Vec<Vec<FieldElement>> {
        self.iter_rows().map(|r| r.to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<FieldElement> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        Matrix::from_rows(idx.iter().map(|&i| self.row(i).to_vec()).collect(), self.cols)
    }

    pub fn select_columns(&self, idx: &[usize]) -> Matrix {
        let rows = self.iter_rows().map(|r| idx.iter().map(|&j| r[j]).collect()).collect();
        Matrix::from_rows(rows, idx.len())
    }

    pub fn transpose(&self) -> Matrix {
        let rows = (0..self.cols).map(|j| self.column(j)).collect();
        Matrix::from_rows(rows, self.rows)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    /// `v * self` for a row vector `v` of length `rows`.
    pub fn left_mul(&self, field: &Field, v: &[FieldElement]) -> Vec<FieldElement> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![FieldElement::ZERO; self.cols];
        for (i, &c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, &x) in out.iter_mut().zip(self.row(i)) {
                *o = field.add(*o, field.mul(c, x));
            }
        }
        out
    }

    /// `self * v` for a column vector of length `cols`.
    pub fn mul_vec(&self, field: &Field, v: &[FieldElement]) -> Vec<FieldElement> {
        assert_eq!(v.len(), self.cols);
        self.iter_rows().map(|r| field.dot(r, v)).collect()
    }

    /// Reduced row echelon form, choosing pivot columns by scanning
    /// `column_order` left to right.
    pub fn rref_with_order(&self, field: &Field, column_order: &[usize]) -> Echelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for &col in column_order {
            if rank == m.rows {
                break;
            }
            let Some(p) = (rank..m.rows).find(|&i| !m[(i, col)].is_zero()) else {
                continue;
            };
            m.swap_rows(rank, p);
            let inv = field.inv(m[(rank, col)]).expect("pivot is nonzero");
            for x in m.row_mut(rank) {
                *x = field.mul(*x, inv);
            }
            let pivot_row = m.row(rank).to_vec();
            for i in 0..m.rows {
                if i == rank {
                    continue;
                }
                let factor = m[(i, col)];
                if factor.is_zero() {
                    continue;
                }
                let nf = field.neg(factor);
                for (x, &y) in m.row_mut(i).iter_mut().zip(&pivot_row) {
                    if !y.is_zero() {
                        *x = field.add(*x, field.mul(nf, y));
                    }
                }
            }
            pivots.push(col);
            rank += 1;
        }
        Echelon { reduced: m, rank, pivots }
    }

    pub fn rref(&self, field: &Field) -> Echelon {
        let order: Vec<usize> = (0..self.cols).collect();
        self.rref_with_order(field, &order)
    }

    pub fn rank(&self, field: &Field) -> usize {
        self.rref(field).rank
    }

    /// Basis of `{ x : self * x = 0 }`, one vector per free column.
    pub fn null_space(&self, field: &Field) -> Vec<Vec<FieldElement>> {
        let ech = self.rref(field);
        let mut is_pivot = vec![false; self.cols];
        for &p in &ech.pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&j| !is_pivot[j])
            .map(|free| {
                let mut v = vec![FieldElement::ZERO; self.cols];
                v[free] = FieldElement::ONE;
                for (r, &p) in ech.pivots.iter().enumerate() {
                    v[p] = field.neg(ech.reduced[(r, free)]);
                }
                v
            })
            .collect()
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = FieldElement;
    fn index(&self, (i, j): (usize, usize)) -> &FieldElement {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut FieldElement {
        &mut self.data[i * self.cols + j]
    }
}

/// Solution set of `A x = b`: a particular solution plus a kernel basis.
#[derive(Clone, Debug)]
pub struct AffineSolution {
    pub particular: Vec<FieldElement>,
    pub kernel: Vec<Vec<FieldElement>>,
}

/// Solves `A x = b`; `None` when inconsistent.
pub fn solve(field: &Field, a: &Matrix, b: &[FieldElement]) -> Option<AffineSolution> {
    assert_eq!(a.rows(), b.len());
    let cols = a.cols();
    let aug_rows = a
        .iter_rows()
        .zip(b)
        .map(|(r, &bi)| {
            let mut v = r.to_vec();
            v.push(bi);
            v
        })
        .collect();
    let aug = Matrix::from_rows(aug_rows, cols + 1);
    let ech = aug.rref(field);
    if ech.pivots.contains(&cols) {
        return None;
    }
    let mut particular = vec![FieldElement::ZERO; cols];
    for (r, &p) in ech.pivots.iter().enumerate() {
        particular[p] = ech.reduced[(r, cols)];
    }
    Some(AffineSolution { particular, kernel: a.null_space(field) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(v: &[u16]) -> Vec<FieldElement> {
        v.iter().map(|&x| FieldElement(x)).collect()
    }

    #[test]
    fn rank_examples() {
        let f5 = Field::with_order(5).unwrap();
        assert_eq!(Matrix::identity(4).rank(&f5), 4);
        assert_eq!(Matrix::zeros(3, 5).rank(&f5), 0);
        let m = Matrix::from_rows(vec![el(&[1, 2]), el(&[2, 4])], 2);
        assert_eq!(m.rank(&f5), 1);
        let ech = m.rref(&f5);
        assert_eq!(ech.pivots, vec![0]);
    }

    #[test]
    fn null_space_annihilates() {
        let f7 = Field::with_order(7).unwrap();
        let m = Matrix::from_rows(vec![el(&[1, 2, 3, 4]), el(&[0, 1, 5, 6]), el(&[1, 3, 1, 3])], 4);
        let ns = m.null_space(&f7);
        assert_eq!(ns.len(), 4 - m.rank(&f7));
        for v in ns {
            assert!(m.mul_vec(&f7, &v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let f5 = Field::with_order(5).unwrap();
        let a = Matrix::from_rows(vec![el(&[1, 1]), el(&[2, 2])], 2);
        let sol = solve(&f5, &a, &el(&[3, 1])).unwrap();
        assert_eq!(a.mul_vec(&f5, &sol.particular), el(&[3, 1]));
        assert_eq!(sol.kernel.len(), 1);
        assert!(solve(&f5, &a, &el(&[3, 2])).is_none());
    }
}
