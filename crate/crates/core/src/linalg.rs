//! Dense Gaussian elimination over any level of the tower.

use crate::field::{Elem, Field};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Elem::ZERO; rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Elem>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Elem> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }
}

/// Reduces `m` to reduced row echelon form in place; returns pivot columns.
pub fn row_reduce<F: Field + ?Sized>(field: &F, m: &mut Matrix) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let Some(piv) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
            continue;
        };
        m.swap_rows(r, piv);
        let inv = field.inv(m.get(r, c)).expect("pivot is nonzero");
        for j in c..m.cols {
            m.set(r, j, field.mul(inv, m.get(r, j)));
        }
        for i in 0..m.rows {
            if i == r {
                continue;
            }
            let factor = m.get(i, c);
            if factor.is_zero() {
                continue;
            }
            for j in c..m.cols {
                let v = field.sub(m.get(i, j), field.mul(factor, m.get(r, j)));
                m.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field + ?Sized>(field: &F, m: &Matrix) -> usize {
    let mut work = m.clone();
    row_reduce(field, &mut work).len()
}

/// Basis of `{ v : m v = 0 }`, one vector per free column, each with a 1 in
/// its free position.
pub fn nullspace<F: Field + ?Sized>(field: &F, m: &Matrix) -> Vec<Vec<Elem>> {
    let mut work = m.clone();
    let pivots = row_reduce(field, &mut work);
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Elem::ZERO; m.cols];
            v[f] = Elem::ONE;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = field.neg(work.get(row, f));
            }
            v
        })
        .collect()
}

/// Determinant by elimination with row swaps.
pub fn determinant<F: Field + ?Sized>(field: &F, m: &Matrix) -> Elem {
    assert_eq!(m.rows, m.cols, "determinant of a non-square matrix");
    let n = m.rows;
    let mut work = m.clone();
    let mut det = Elem::ONE;
    for c in 0..n {
        let Some(piv) = (c..n).find(|&i| !work.get(i, c).is_zero()) else {
            return Elem::ZERO;
        };
        if piv != c {
            work.swap_rows(c, piv);
            det = field.neg(det);
        }
        let pv = work.get(c, c);
        det = field.mul(det, pv);
        let inv = field.inv(pv).expect("pivot is nonzero");
        for i in c + 1..n {
            let factor = field.mul(work.get(i, c), inv);
            if factor.is_zero() {
                continue;
            }
            for j in c..n {
                let v = field.sub(work.get(i, j), field.mul(factor, work.get(c, j)));
                work.set(i, j, v);
            }
        }
    }
    det
}

/// `m * v`.
pub fn apply<F: Field + ?Sized>(field: &F, m: &Matrix, v: &[Elem]) -> Vec<Elem> {
    (0..m.rows)
        .map(|i| {
            m.row(i)
                .iter()
                .zip(v)
                .fold(Elem::ZERO, |acc, (a, b)| field.add(acc, field.mul(*a, *b)))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    fn e(v: &[u32]) -> Vec<Elem> {
        v.iter().copied().map(Elem).collect()
    }

    #[test]
    fn rank_and_nullspace_over_f5() {
        let f = PrimeField::new(5);
        let m = Matrix::from_rows(vec![e(&[1, 2, 3]), e(&[2, 1, 1]), e(&[3, 3, 4])]);
        // row3 = row1 + row2
        assert_eq!(rank(&f, &m), 2);
        let ns = nullspace(&f, &m);
        assert_eq!(ns.len(), 1);
        assert!(apply(&f, &m, &ns[0]).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let f = PrimeField::new(7);
        let m = Matrix::from_rows(vec![e(&[0, 2, 3]), e(&[4, 5, 6]), e(&[1, 0, 2])]);
        // 0*(10-0) - 2*(8-6) + 3*(0-5) = -4 - 15 = -19 = 2 mod 7
        assert_eq!(determinant(&f, &m), Elem(2));
        let singular = Matrix::from_rows(vec![e(&[1, 2]), e(&[2, 4])]);
        assert_eq!(determinant(&f, &singular), Elem::ZERO);
    }
}
