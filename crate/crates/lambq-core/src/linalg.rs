//! Dense real linear algebra, sized for this crate's needs.
//!
//! The transformation matrices here are genuinely dense and never exceed a
//! few hundred rows outside the Fock oracle, so a plain row-major matrix
//! with textbook algorithms is the right tool: LU with partial pivoting for
//! determinants and solves, cyclic Jacobi for small symmetric eigenproblems,
//! and Householder tridiagonalization with bisection plus inverse iteration
//! when the Fock oracle needs a few extreme eigenpairs of a matrix with a
//! couple of thousand rows. Everything is deterministic.

use alloc::vec;
use alloc::vec::Vec;
use libm::{fabs, sqrt};

use crate::error::{Error, Result};

/// Dense row-major matrix of f64.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    /// Number of rows.
    pub rows: usize,
    /// Number of columns.
    pub cols: usize,
    /// Row-major storage, length `rows * cols`.
    pub data: Vec<f64>,
}

impl Mat {
    /// All-zero matrix.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![0.0; rows * cols] }
    }

    /// Identity matrix.
    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    /// Entry (i, j).
    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    /// Mutable entry (i, j).
    #[inline]
    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }

    /// Matrix product self * rhs.
    pub fn mul(&self, rhs: &Mat) -> Mat {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in mul");
        let mut out = Mat::zeros(self.rows, rhs.cols);
        // i-k-j order streams both operands row-major.
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.at(i, k);
                if aik == 0.0 {
                    continue;
                }
                let row_out = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                let row_b = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                for (o, b) in row_out.iter_mut().zip(row_b) {
                    *o += aik * b;
                }
            }
        }
        out
    }

    /// Transpose.
    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *out.at_mut(j, i) = self.at(i, j);
            }
        }
        out
    }

    /// Matrix-vector product self * v.
    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, v.len(), "shape mismatch in mul_vec");
        let mut out = vec![0.0; self.rows];
        for i in 0..self.rows {
            let row = &self.data[i * self.cols..(i + 1) * self.cols];
            let mut acc = 0.0;
            for (a, b) in row.iter().zip(v) {
                acc += a * b;
            }
            out[i] = acc;
        }
        out
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, &x| if fabs(x) > m { fabs(x) } else { m })
    }

    /// Largest absolute entrywise difference from `other`.
    pub fn max_abs_diff(&self, other: &Mat) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (&a, &b)| if fabs(a - b) > m { fabs(a - b) } else { m })
    }

    /// Largest absolute asymmetry |A_ij - A_ji| over all pairs.
    pub fn asymmetry(&self) -> f64 {
        assert_eq!(self.rows, self.cols);
        let mut m = 0.0;
        for i in 0..self.rows {
            for j in 0..i {
                let d = fabs(self.at(i, j) - self.at(j, i));
                if d > m {
                    m = d;
                }
            }
        }
        m
    }
}

/// LU factorization with partial pivoting (Doolittle form, P A = L U).
#[derive(Debug, Clone)]
pub struct Lu {
    lu: Mat,
    piv: Vec<usize>,
    /// Sign of the row permutation, +1 or -1.
    pub perm_sign: f64,
}

impl Lu {
    /// Factorize a square matrix. Fails only on an exactly zero pivot
    /// column, which for this crate's matrices signals a degenerate
    /// transformation rather than a numerical accident.
    pub fn factor(a: &Mat) -> Result<Lu> {
        assert_eq!(a.rows, a.cols, "LU needs a square matrix");
        let n = a.rows;
        let mut lu = a.clone();
        let mut piv: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        for k in 0..n {
            // Partial pivot: largest magnitude in column k at or below row k.
            let mut p = k;
            let mut best = fabs(lu.at(k, k));
            for i in k + 1..n {
                let v = fabs(lu.at(i, k));
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best == 0.0 {
                return Err(Error::SingularMatrix);
            }
            if p != k {
                for j in 0..n {
                    let tmp = lu.at(k, j);
                    *lu.at_mut(k, j) = lu.at(p, j);
                    *lu.at_mut(p, j) = tmp;
                }
                piv.swap(k, p);
                sign = -sign;
            }
            let pivot = lu.at(k, k);
            for i in k + 1..n {
                let m = lu.at(i, k) / pivot;
                *lu.at_mut(i, k) = m;
                if m != 0.0 {
                    for j in k + 1..n {
                        let upd = m * lu.at(k, j);
                        *lu.at_mut(i, j) -= upd;
                    }
                }
            }
        }
        Ok(Lu { lu, piv, perm_sign: sign })
    }

    /// Determinant: permutation sign times the product of pivots.
    pub fn det(&self) -> f64 {
        let n = self.lu.rows;
        let mut d = self.perm_sign;
        for i in 0..n {
            d *= self.lu.at(i, i);
        }
        d
    }

    /// Solve A x = b for a single right-hand side.
    pub fn solve_vec(&self, b: &[f64]) -> Vec<f64> {
        let n = self.lu.rows;
        assert_eq!(b.len(), n);
        let mut x: Vec<f64> = self.piv.iter().map(|&p| b[p]).collect();
        // Forward substitution with unit lower triangle.
        for i in 1..n {
            let mut acc = x[i];
            for j in 0..i {
                acc -= self.lu.at(i, j) * x[j];
            }
            x[i] = acc;
        }
        // Back substitution.
        for i in (0..n).rev() {
            let mut acc = x[i];
            for j in i + 1..n {
                acc -= self.lu.at(i, j) * x[j];
            }
            x[i] = acc / self.lu.at(i, i);
        }
        x
    }

    /// Solve A X = B column by column.
    pub fn solve_mat(&self, b: &Mat) -> Mat {
        let n = self.lu.rows;
        assert_eq!(b.rows, n);
        let mut out = Mat::zeros(n, b.cols);
        let mut col = vec![0.0; n];
        for j in 0..b.cols {
            for i in 0..n {
                col[i] = b.at(i, j);
            }
            let x = self.solve_vec(&col);
            for i in 0..n {
                *out.at_mut(i, j) = x[i];
            }
        }
        out
    }

    /// Explicit inverse (used only where entries of the inverse are the
    /// observable, as in the emission spectrum).
    pub fn inverse(&self) -> Mat {
        self.solve_mat(&Mat::identity(self.lu.rows))
    }
}

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Returns eigenvalues ascending with matching eigenvector columns.
/// Intended for dimensions up to a few hundred.
pub fn jacobi_eigh(a: &Mat) -> (Vec<f64>, Mat) {
    assert_eq!(a.rows, a.cols, "jacobi_eigh needs a square matrix");
    let n = a.rows;
    let mut m = a.clone();
    let mut v = Mat::identity(n);
    for sweep in 0..100 {
        // Off-diagonal Frobenius norm decides convergence.
        let mut off = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                off += m.at(i, j) * m.at(i, j);
            }
        }
        if sqrt(off) < 1e-15 * (1.0 + m.max_abs()) {
            break;
        }
        // Threshold schedule from the classic algorithm: skip tiny entries
        // early so the first sweeps rotate only significant pairs.
        let thresh = if sweep < 3 { 0.2 * off / ((n * n) as f64) } else { 0.0 };
        for p in 0..n {
            for q in p + 1..n {
                let apq = m.at(p, q);
                if apq * apq <= thresh {
                    continue;
                }
                let app = m.at(p, p);
                let aqq = m.at(q, q);
                let diff = aqq - app;
                // Stable rotation angle.
                let t = if fabs(apq) < 1e-300 {
                    continue;
                } else {
                    let theta = diff / (2.0 * apq);
                    let t = 1.0 / (fabs(theta) + sqrt(theta * theta + 1.0));
                    if theta < 0.0 {
                        -t
                    } else {
                        t
                    }
                };
                let c = 1.0 / sqrt(t * t + 1.0);
                let s = t * c;
                // Apply the rotation to rows/columns p and q.
                for k in 0..n {
                    let mkp = m.at(k, p);
                    let mkq = m.at(k, q);
                    *m.at_mut(k, p) = c * mkp - s * mkq;
                    *m.at_mut(k, q) = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m.at(p, k);
                    let mqk = m.at(q, k);
                    *m.at_mut(p, k) = c * mpk - s * mqk;
                    *m.at_mut(q, k) = s * mpk + c * mqk;
                }
                // Enforce exact symmetry of the rotated pair.
                *m.at_mut(p, q) = 0.0;
                *m.at_mut(q, p) = 0.0;
                let _ = (app, aqq);
                for k in 0..n {
                    let vkp = v.at(k, p);
                    let vkq = v.at(k, q);
                    *v.at_mut(k, p) = c * vkp - s * vkq;
                    *v.at_mut(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    // Sort ascending, permuting eigenvector columns alongside.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m.at(i, i).partial_cmp(&m.at(j, j)).unwrap());
    let evals: Vec<f64> = order.iter().map(|&i| m.at(i, i)).collect();
    let mut evecs = Mat::zeros(n, n);
    for (new_j, &old_j) in order.iter().enumerate() {
        for i in 0..n {
            *evecs.at_mut(i, new_j) = v.at(i, old_j);
        }
    }
    (evals, evecs)
}

/// Householder reduction of a symmetric matrix to tridiagonal form with
/// accumulation of the orthogonal transform: A = Q T Q^T.
/// Returns (diag, off, q) where `off[i]` couples rows i and i+1.
pub fn tridiagonalize(a: &Mat) -> (Vec<f64>, Vec<f64>, Mat) {
    assert_eq!(a.rows, a.cols);
    let n = a.rows;
    let mut q = a.clone();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let mut scale = 0.0;
            for k in 0..=l {
                scale += fabs(q.at(i, k));
            }
            if scale == 0.0 {
                e[i] = q.at(i, l);
            } else {
                for k in 0..=l {
                    *q.at_mut(i, k) /= scale;
                    h += q.at(i, k) * q.at(i, k);
                }
                let f = q.at(i, l);
                let g = if f >= 0.0 { -sqrt(h) } else { sqrt(h) };
                e[i] = scale * g;
                h -= f * g;
                *q.at_mut(i, l) = f - g;
                let mut f_acc = 0.0;
                for j in 0..=l {
                    *q.at_mut(j, i) = q.at(i, j) / h;
                    let mut g_acc = 0.0;
                    for k in 0..=j {
                        g_acc += q.at(j, k) * q.at(i, k);
                    }
                    for k in j + 1..=l {
                        g_acc += q.at(k, j) * q.at(i, k);
                    }
                    e[j] = g_acc / h;
                    f_acc += e[j] * q.at(i, j);
                }
                let hh = f_acc / (h + h);
                for j in 0..=l {
                    let f = q.at(i, j);
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        let upd = f * e[k] + g * q.at(i, k);
                        *q.at_mut(j, k) -= upd;
                    }
                }
            }
        } else {
            e[i] = q.at(i, l);
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    // Accumulate the product of Householder reflectors into q.
    for i in 0..n {
        if d[i] != 0.0 {
            for j in 0..i {
                let mut g = 0.0;
                for k in 0..i {
                    g += q.at(i, k) * q.at(k, j);
                }
                for k in 0..i {
                    let upd = g * q.at(k, i);
                    *q.at_mut(k, j) -= upd;
                }
            }
        }
        d[i] = q.at(i, i);
        *q.at_mut(i, i) = 1.0;
        for j in 0..i {
            *q.at_mut(j, i) = 0.0;
            *q.at_mut(i, j) = 0.0;
        }
    }
    // Shift the subdiagonal so off[i] couples (i, i+1).
    let off: Vec<f64> = (0..n.saturating_sub(1)).map(|i| e[i + 1]).collect();
    (d, off, q)
}

/// Number of eigenvalues of the tridiagonal (diag, off) strictly below x,
/// by the Sturm sequence of the shifted LDL^T recurrence.
pub fn tridiag_count_below(diag: &[f64], off: &[f64], x: f64) -> usize {
    let n = diag.len();
    let mut count = 0;
    let mut q = diag[0] - x;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..n {
        let e2 = off[i - 1] * off[i - 1];
        let denom = if q == 0.0 { 1e-300 } else { q };
        q = diag[i] - x - e2 / denom;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// The `k` lowest eigenvalues of a symmetric tridiagonal matrix by Sturm
/// bisection, ascending. Deterministic to ~1 ulp of the Gershgorin scale.
pub fn tridiag_lowest_eigenvalues(diag: &[f64], off: &[f64], k: usize) -> Vec<f64> {
    let n = diag.len();
    assert!(k <= n);
    // Gershgorin bounds.
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { fabs(off[i - 1]) } else { 0.0 } + if i + 1 < n { fabs(off[i]) } else { 0.0 };
        if diag[i] - r < lo {
            lo = diag[i] - r;
        }
        if diag[i] + r > hi {
            hi = diag[i] + r;
        }
    }
    let mut out = Vec::with_capacity(k);
    for j in 0..k {
        let (mut a, mut b) = (lo, hi);
        for _ in 0..120 {
            let mid = 0.5 * (a + b);
            if tridiag_count_below(diag, off, mid) > j {
                b = mid;
            } else {
                a = mid;
            }
            if b - a <= f64::EPSILON * (fabs(a) + fabs(b)) {
                break;
            }
        }
        out.push(0.5 * (a + b));
    }
    out
}

/// Eigenvector of the tridiagonal (diag, off) for an isolated eigenvalue
/// `lambda`, by inverse iteration with a pivoted tridiagonal solve.
/// Returns a unit vector.
pub fn tridiag_eigenvector(diag: &[f64], off: &[f64], lambda: f64) -> Vec<f64> {
    let n = diag.len();
    // Start from a mildly structured vector so no symmetry accidentally
    // orthogonalizes the iterate against the target eigenvector.
    let mut v: Vec<f64> = (0..n).map(|i| 1.0 + 0.5 * ((i % 3) as f64) - 0.25 * ((i % 7) as f64)).collect();
    normalize(&mut v);
    for _ in 0..3 {
        v = solve_shifted_tridiag(diag, off, lambda, &v);
        normalize(&mut v);
    }
    v
}

/// Solve (T - lambda I) x = b with partial pivoting; T tridiagonal.
fn solve_shifted_tridiag(diag: &[f64], off: &[f64], lambda: f64, b: &[f64]) -> Vec<f64> {
    let n = diag.len();
    // Bands: sub[i] couples row i to i-1, d[i] diagonal, sup1/sup2 fill-in.
    let mut d: Vec<f64> = diag.iter().map(|&x| x - lambda).collect();
    let mut sup1: Vec<f64> = (0..n).map(|i| if i + 1 < n { off[i] } else { 0.0 }).collect();
    let mut sup2 = vec![0.0; n];
    let mut sub: Vec<f64> = (0..n).map(|i| if i > 0 { off[i - 1] } else { 0.0 }).collect();
    let mut x: Vec<f64> = b.to_vec();
    // Forward elimination with row swaps between adjacent rows.
    for i in 0..n - 1 {
        if fabs(sub[i + 1]) > fabs(d[i]) {
            // Swap rows i and i+1.
            let (a0, a1, a2) = (sub[i + 1], d[i + 1], sup1[i + 1]);
            sub[i + 1] = d[i];
            d[i + 1] = sup1[i];
            sup1[i + 1] = sup2[i];
            d[i] = a0;
            sup1[i] = a1;
            sup2[i] = a2;
            x.swap(i, i + 1);
        }
        let pivot = if d[i] == 0.0 { 1e-300 } else { d[i] };
        let m = sub[i + 1] / pivot;
        d[i + 1] -= m * sup1[i];
        sup1[i + 1] -= m * sup2[i];
        x[i + 1] -= m * x[i];
        sub[i + 1] = 0.0;
    }
    // Back substitution over the three remaining bands.
    for i in (0..n).rev() {
        let mut acc = x[i];
        if i + 1 < n {
            acc -= sup1[i] * x[i + 1];
        }
        if i + 2 < n {
            acc -= sup2[i] * x[i + 2];
        }
        let pivot = if d[i] == 0.0 { 1e-300 } else { d[i] };
        x[i] = acc / pivot;
    }
    x
}

/// Scale a vector to unit Euclidean norm in place.
pub fn normalize(v: &mut [f64]) {
    let mut s = 0.0;
    for &x in v.iter() {
        s += x * x;
    }
    let n = sqrt(s);
    if n > 0.0 {
        for x in v.iter_mut() {
            *x /= n;
        }
    }
}

/// Dot product.
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut s = 0.0;
    for (x, y) in a.iter().zip(b) {
        s += x * y;
    }
    s
}
