use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{int, Rational};

/// Dense rational column vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QVector(pub Vec<Rational>);

impl QVector {
    pub fn zeros(n: usize) -> Self {
        QVector(vec![Rational::zero(); n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[i] = Rational::one();
        v
    }

    pub fn from_ints(xs: &[i64]) -> Self {
        QVector(xs.iter().map(|&x| int(x)).collect())
    }

    pub fn from_bigints(xs: &[BigInt]) -> Self {
        QVector(xs.iter().map(|x| Rational::from_integer(x.clone())).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn dot(&self, other: &QVector) -> Rational {
        debug_assert_eq!(self.dim(), other.dim());
        let mut s = Rational::zero();
        for (a, b) in self.0.iter().zip(&other.0) {
            if !a.is_zero() && !b.is_zero() {
                s += a * b;
            }
        }
        s
    }

    pub fn add(&self, other: &QVector) -> QVector {
        QVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &QVector) -> QVector {
        QVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, c: &Rational) -> QVector {
        QVector(self.0.iter().map(|a| a * c).collect())
    }

    pub fn neg(&self) -> QVector {
        QVector(self.0.iter().map(|a| -a).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|x| x.is_integer())
    }

    pub fn to_ints(&self) -> Option<Vec<BigInt>> {
        self.0
            .iter()
            .map(|x| x.is_integer().then(|| x.to_integer()))
            .collect()
    }

    pub fn max_abs(&self) -> Rational {
        self.0
            .iter()
            .map(|x| x.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

impl Index<usize> for QVector {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl IndexMut<usize> for QVector {
    fn index_mut(&mut self, i: usize) -> &mut Rational {
        &mut self.0[i]
    }
}

impl fmt::Display for QVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Dense rational matrix, row major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        QMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| int(x)).collect())
                .collect(),
        )
    }

    /// Matrix whose columns are `cols`; `dim` is needed when `cols` is empty.
    pub fn from_columns(dim: usize, cols: &[QVector]) -> Self {
        let mut m = Self::zeros(dim, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.dim(), dim);
            for i in 0..dim {
                m[(i, j)] = c[i].clone();
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

    pub fn column(&self, j: usize) -> QVector {
        QVector((0..self.rows).map(|i| self[(i, j)].clone()).collect())
    }

    pub fn columns(&self) -> Vec<QVector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn row(&self, i: usize) -> QVector {
        QVector(self.data[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn transpose(&self) -> QMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut m = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        m[(i, j)] += a * b;
                    }
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &QVector) -> QVector {
        assert_eq!(self.cols, v.dim(), "shape mismatch");
        QVector(
            (0..self.rows)
                .map(|i| {
                    let mut s = Rational::zero();
                    for j in 0..self.cols {
                        let a = &self[(i, j)];
                        if !a.is_zero() && !v[j].is_zero() {
                            s += a * &v[j];
                        }
                    }
                    s
                })
                .collect(),
        )
    }

    pub fn scale(&self, c: &Rational) -> QMatrix {
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn sub(&self, other: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn hstack(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.rows, other.rows);
        let mut m = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                m[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        m
    }

    /// Submatrix on the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> QMatrix {
        let mut m = Self::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m[(a, b)] = self[(i, j)].clone();
            }
        }
        m
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (QMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].recip();
            for j in c..m.cols {
                let x = &m[(r, j)] * &inv;
                m[(r, j)] = x;
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in c..m.cols {
                        if !m[(r, j)].is_zero() {
                            let x = &m[(r, j)] * &f;
                            m[(i, j)] -= x;
                        }
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn det(&self) -> Rational {
        assert_eq!(self.rows, self.cols, "det of non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Rational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Rational::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det *= &piv;
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = &m[(i, c)] / &piv;
                for j in c..n {
                    if !m[(c, j)].is_zero() {
                        let x = &m[(c, j)] * &f;
                        m[(i, j)] -= x;
                    }
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<QMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(self.clone());
        }
        let (r, piv) = self.hstack(&Self::identity(n)).rref();
        if piv.len() < n || piv[n - 1] != n - 1 {
            return None;
        }
        Some(r.select(&(0..n).collect::<Vec<_>>(), &(n..2 * n).collect::<Vec<_>>()))
    }

    /// Some solution of `self * x = b`, or `None` if inconsistent.
    pub fn solve(&self, b: &QVector) -> Option<QVector> {
        assert_eq!(self.rows, b.dim());
        let aug = self.hstack(&QMatrix::from_columns(self.rows, std::slice::from_ref(b)));
        let (r, piv) = aug.rref();
        if piv.last() == Some(&self.cols) {
            return None;
        }
        let mut x = QVector::zeros(self.cols);
        for (i, &c) in piv.iter().enumerate() {
            x[c] = r[(i, self.cols)].clone();
        }
        Some(x)
    }

    /// Basis of the right kernel.
    pub fn nullspace(&self) -> Vec<QVector> {
        let (r, piv) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !piv.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = QVector::zeros(self.cols);
                v[f] = Rational::one();
                for (i, &p) in piv.iter().enumerate() {
                    v[p] = -r[(i, f)].clone();
                }
                v
            })
            .collect()
    }

    /// Indices of a maximal linearly independent prefix-greedy set of columns.
    pub fn independent_columns(&self) -> Vec<usize> {
        self.rref().1
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.is_integer())
    }
}

impl Index<(usize, usize)> for QMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            writeln!(f, "{}", self.row(i))?;
        }
        Ok(())
    }
}
