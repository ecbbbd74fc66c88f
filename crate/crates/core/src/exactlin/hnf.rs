use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{big, lcm_denominators, QMatrix, QVector, Rational};
use crate::{Error, Result};

/// Integer matrix as a list of rows.
pub type IntMatrix = Vec<Vec<BigInt>>;

pub(crate) fn to_int_matrix(m: &QMatrix) -> Result<IntMatrix> {
    (0..m.rows())
        .map(|i| m.row(i).to_ints().ok_or(Error::NonIntegerInput))
        .collect()
}

pub(crate) fn from_int_matrix(rows: usize, cols: usize, m: &IntMatrix) -> QMatrix {
    let mut q = QMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            q[(i, j)] = big(&m[i][j]);
        }
    }
    q
}

fn col_combine(m: &mut IntMatrix, p: usize, j: usize, x: &BigInt, y: &BigInt, u: &BigInt, v: &BigInt) {
    // (col_p, col_j) <- (x col_p + y col_j, u col_p + v col_j)
    for row in m.iter_mut() {
        let a = row[p].clone();
        let b = row[j].clone();
        row[p] = x * &a + y * &b;
        row[j] = u * &a + v * &b;
    }
}

fn col_swap(m: &mut IntMatrix, a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

fn col_axpy(m: &mut IntMatrix, dst: usize, src: usize, f: &BigInt) {
    // col_dst -= f * col_src
    for row in m.iter_mut() {
        let t = &row[src] * f;
        row[dst] -= t;
    }
}

fn col_neg(m: &mut IntMatrix, c: usize) {
    for row in m.iter_mut() {
        row[c] = -row[c].clone();
    }
}

/// Column HNF of an integer `r x n` matrix: `H = M U` with `U` unimodular, `H` lower
/// echelon with positive pivots and entries left of a pivot reduced into `[0, pivot)`.
/// Returns `(H, U, pivot_rows)`; columns at and beyond `pivot_rows.len()` of `H` are zero.
pub(crate) fn hnf_int(m: &IntMatrix, ncols: usize) -> (IntMatrix, IntMatrix, Vec<usize>) {
    let rows = m.len();
    let mut h = m.clone();
    let mut u: IntMatrix = (0..ncols)
        .map(|i| (0..ncols).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut pivot_rows = Vec::new();
    let mut pc = 0;
    for i in 0..rows {
        if pc == ncols {
            break;
        }
        for j in pc + 1..ncols {
            if h[i][j].is_zero() {
                continue;
            }
            if h[i][pc].is_zero() {
                col_swap(&mut h, pc, j);
                col_swap(&mut u, pc, j);
                continue;
            }
            let a = h[i][pc].clone();
            let b = h[i][j].clone();
            let eg = a.extended_gcd(&b);
            let (g, x, y) = (eg.gcd, eg.x, eg.y);
            let u1 = -(&b / &g);
            let v1 = &a / &g;
            col_combine(&mut h, pc, j, &x, &y, &u1, &v1);
            col_combine(&mut u, pc, j, &x, &y, &u1, &v1);
        }
        if h[i][pc].is_zero() {
            continue;
        }
        if h[i][pc].is_negative() {
            col_neg(&mut h, pc);
            col_neg(&mut u, pc);
        }
        let piv = h[i][pc].clone();
        for j in 0..pc {
            let q = h[i][j].div_floor(&piv);
            if !q.is_zero() {
                col_axpy(&mut h, j, pc, &q);
                col_axpy(&mut u, j, pc, &q);
            }
        }
        pivot_rows.push(i);
        pc += 1;
    }
    (h, u, pivot_rows)
}

/// Column-style Hermite normal form: `(H, U)` with `H = M U`, `U` unimodular.
pub fn hermite_normal_form(m: &QMatrix) -> Result<(QMatrix, QMatrix)> {
    let im = to_int_matrix(m)?;
    let (h, u, _) = hnf_int(&im, m.cols());
    Ok((
        from_int_matrix(m.rows(), m.cols(), &h),
        from_int_matrix(m.cols(), m.cols(), &u),
    ))
}

fn scale_rows_to_int(m: &QMatrix) -> IntMatrix {
    (0..m.rows())
        .map(|i| {
            let r = m.row(i);
            let d = big(&lcm_denominators(r.0.iter()));
            r.0.iter().map(|x| (x * &d).to_integer()).collect()
        })
        .collect()
}

/// Diagonal of the HNF of a square nonsingular integer matrix; the boxes
/// `0 <= c_i < diag_i` enumerate `Z^k / M Z^k`.
pub fn hnf_diagonal(m: &QMatrix) -> Result<Vec<BigInt>> {
    let im = to_int_matrix(m)?;
    let (h, _, piv) = hnf_int(&im, m.cols());
    if piv.len() != m.rows() || m.rows() != m.cols() {
        return Err(Error::DependentVectors);
    }
    Ok((0..piv.len()).map(|j| h[piv[j]][j].clone()).collect())
}

/// Basis of `ker(M) ∩ Z^n` for a rational matrix `M`.
pub fn integer_kernel(m: &QMatrix) -> Vec<QVector> {
    let n = m.cols();
    let im = scale_rows_to_int(m);
    let (_, u, piv) = hnf_int(&im, n);
    (piv.len()..n)
        .map(|j| QVector((0..n).map(|i| big(&u[i][j])).collect()))
        .collect()
}

/// Rational `z` with `H z = b` where `H` is the HNF of the integer matrix `m`,
/// restricted to its nonzero columns. `None` if `b` is outside the column span.
pub(crate) fn hnf_coordinates(
    h: &IntMatrix,
    piv: &[usize],
    b: &[Rational],
) -> Option<Vec<Rational>> {
    let r = piv.len();
    let mut z: Vec<Rational> = Vec::with_capacity(r);
    for (j, &pr) in piv.iter().enumerate() {
        let mut s = b[pr].clone();
        for (l, zl) in z.iter().enumerate() {
            if !h[pr][l].is_zero() {
                s -= big(&h[pr][l]) * zl;
            }
        }
        z.push(s / big(&h[pr][j]));
    }
    for (i, bi) in b.iter().enumerate() {
        let mut s = Rational::zero();
        for (l, zl) in z.iter().enumerate() {
            if !h[i][l].is_zero() {
                s += big(&h[i][l]) * zl;
            }
        }
        if &s != bi {
            return None;
        }
    }
    Some(z)
}

/// Integer solution of `M x = b`, if any. `M` must be integral.
pub fn solve_integral(m: &QMatrix, b: &QVector) -> Result<Option<QVector>> {
    let im = to_int_matrix(m)?;
    let n = m.cols();
    let (h, u, piv) = hnf_int(&im, n);
    let Some(z) = hnf_coordinates(&h, &piv, &b.0) else {
        return Ok(None);
    };
    if !z.iter().all(|x| x.is_integer()) {
        return Ok(None);
    }
    let x = (0..n)
        .map(|i| {
            z.iter()
                .enumerate()
                .fold(Rational::zero(), |acc, (j, zj)| acc + big(&u[i][j]) * zj)
        })
        .collect();
    Ok(Some(QVector(x)))
}
