//! Symmetric eigendecomposition via Householder tridiagonalization followed
//! by the implicit-shift QL iteration (EISPACK `tred2`/`tql2` lineage).

use super::{LinalgError, SymMatrix};
use crate::scalar::Scalar;

/// Iterations allowed per eigenvalue before the QL sweep is declared stuck.
const MAX_QL_ITER: usize = 50;

/// Orthonormal basis and ascending eigenvalues of a symmetric matrix.
///
/// `basis` is stored row-major; column `k` is the eigenvector paired with
/// `eigenvalues[k]`. The sign of each eigenvector is arbitrary.
#[derive(Debug, Clone)]
pub struct EigenDecomposition<T> {
    n: usize,
    basis: Vec<T>,
    eigenvalues: Vec<T>,
}

impl<T: Scalar> EigenDecomposition<T> {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> &[T] {
        &self.eigenvalues
    }

    pub fn min_eigenvalue(&self) -> T {
        self.eigenvalues[0]
    }

    pub fn max_eigenvalue(&self) -> T {
        self.eigenvalues[self.n - 1]
    }

    /// Entry `(i, k)` of the basis: component `i` of eigenvector `k`.
    pub fn basis_entry(&self, i: usize, k: usize) -> T {
        self.basis[i * self.n + k]
    }

    /// Same basis with replacement eigenvalues (must be ascending).
    pub fn with_eigenvalues(&self, eigenvalues: Vec<T>) -> Self {
        assert_eq!(eigenvalues.len(), self.n, "eigenvalue count mismatch");
        debug_assert!(
            eigenvalues.windows(2).all(|w| w[0] <= w[1]),
            "replacement eigenvalues must be ascending"
        );
        Self {
            n: self.n,
            basis: self.basis.clone(),
            eigenvalues,
        }
    }

    /// Assemble the matrix with spectrum `f(eigenvalue)` in this basis.
    pub fn map_eigenvalues(&self, f: impl Fn(T) -> T) -> SymMatrix<T> {
        let n = self.n;
        // W = V * diag(f(d)), then X = W * V^T.
        let mut w = vec![T::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                w[i * n + k] = self.basis[i * n + k] * f(self.eigenvalues[k]);
            }
        }
        let mut x = vec![T::zero(); n * n];
        for i in 0..n {
            for j in i..n {
                let mut acc = T::zero();
                for k in 0..n {
                    acc = acc + w[i * n + k] * self.basis[j * n + k];
                }
                x[i * n + j] = acc;
                x[j * n + i] = acc;
            }
        }
        SymMatrix::from_symmetric_unchecked(n, x)
    }

    /// Reassemble the original matrix: `V diag(d) V^T`.
    pub fn reconstruct(&self) -> SymMatrix<T> {
        self.map_eigenvalues(|d| d)
    }

    /// Apply the matrix this decomposition represents to a vector.
    pub fn apply(&self, v: &[T]) -> Vec<T> {
        let n = self.n;
        assert_eq!(v.len(), n, "vector length mismatch");
        // V diag(d) V^T v in two O(n^2) passes.
        let mut t = vec![T::zero(); n];
        for k in 0..n {
            let mut acc = T::zero();
            for i in 0..n {
                acc = acc + self.basis[i * n + k] * v[i];
            }
            t[k] = acc * self.eigenvalues[k];
        }
        let mut out = vec![T::zero(); n];
        for i in 0..n {
            let mut acc = T::zero();
            for k in 0..n {
                acc = acc + self.basis[i * n + k] * t[k];
            }
            out[i] = acc;
        }
        out
    }
}

/// Full eigendecomposition of a symmetric matrix, eigenvalues ascending.
pub fn sym_eig<T: Scalar>(a: &SymMatrix<T>) -> Result<EigenDecomposition<T>, LinalgError> {
    let n = a.n();
    let mut v = a.entries().to_vec();
    let mut d = vec![T::zero(); n];
    let mut e = vec![T::zero(); n];

    tridiagonalize(n, &mut v, &mut d, &mut e);
    ql_implicit(n, &mut v, &mut d, &mut e).map_err(|_| LinalgError::NonConvergence { dim: n })?;
    sort_ascending(n, &mut v, &mut d);

    Ok(EigenDecomposition {
        n,
        basis: v,
        eigenvalues: d,
    })
}

/// Householder reduction to tridiagonal form; accumulates the transform in
/// `v`, leaving the diagonal in `d` and subdiagonal in `e`.
fn tridiagonalize<T: Scalar>(n: usize, v: &mut [T], d: &mut [T], e: &mut [T]) {
    let at = |v: &[T], i: usize, j: usize| v[i * n + j];

    for j in 0..n {
        d[j] = at(v, n - 1, j);
    }

    for i in (1..n).rev() {
        let mut scale = T::zero();
        let mut h = T::zero();
        for item in d.iter().take(i) {
            scale = scale + item.abs();
        }
        if scale == T::zero() {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = at(v, i - 1, j);
                v[i * n + j] = T::zero();
                v[j * n + i] = T::zero();
            }
        } else {
            for k in 0..i {
                d[k] = d[k] / scale;
                h = h + d[k] * d[k];
            }
            let f = d[i - 1];
            let mut g = h.sqrt();
            if f > T::zero() {
                g = -g;
            }
            e[i] = scale * g;
            h = h - f * g;
            d[i - 1] = f - g;
            for item in e.iter_mut().take(i) {
                *item = T::zero();
            }
            // Apply the similarity transformation to the remaining columns.
            for j in 0..i {
                let f = d[j];
                v[j * n + i] = f;
                let mut g = e[j] + at(v, j, j) * f;
                for k in (j + 1)..i {
                    g = g + at(v, k, j) * d[k];
                    e[k] = e[k] + at(v, k, j) * f;
                }
                e[j] = g;
            }
            let mut f = T::zero();
            for j in 0..i {
                e[j] = e[j] / h;
                f = f + e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] = e[j] - hh * d[j];
            }
            for j in 0..i {
                let f = d[j];
                let g = e[j];
                for k in j..i {
                    v[k * n + j] = at(v, k, j) - (f * e[k] + g * d[k]);
                }
                d[j] = at(v, i - 1, j);
                v[i * n + j] = T::zero();
            }
        }
        d[i] = h;
    }

    // Accumulate the Householder transformations.
    for i in 0..n.saturating_sub(1) {
        v[(n - 1) * n + i] = at(v, i, i);
        v[i * n + i] = T::one();
        let h = d[i + 1];
        if h != T::zero() {
            for k in 0..=i {
                d[k] = at(v, k, i + 1) / h;
            }
            for j in 0..=i {
                let mut g = T::zero();
                for k in 0..=i {
                    g = g + at(v, k, i + 1) * at(v, k, j);
                }
                for k in 0..=i {
                    v[k * n + j] = at(v, k, j) - g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[k * n + (i + 1)] = T::zero();
        }
    }
    for j in 0..n {
        d[j] = at(v, n - 1, j);
        v[(n - 1) * n + j] = T::zero();
    }
    v[(n - 1) * n + (n - 1)] = T::one();
    e[0] = T::zero();
}

/// Implicit-shift QL sweep on the tridiagonal (d, e), rotations accumulated
/// into `v`. Fails only if an eigenvalue refuses to converge.
fn ql_implicit<T: Scalar>(n: usize, v: &mut [T], d: &mut [T], e: &mut [T]) -> Result<(), ()> {
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = T::zero();

    let mut f = T::zero();
    let mut tst1 = T::zero();
    let eps = T::epsilon();
    let half = T::cst(0.5);

    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut iter = 0usize;
            loop {
                iter += 1;
                if iter > MAX_QL_ITER {
                    return Err(());
                }
                // Form the implicit shift.
                let g = d[l];
                let two_el = e[l] + e[l];
                let mut p = (d[l + 1] - g) / two_el;
                let mut r = p.hypot(T::one());
                if p < T::zero() {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for item in d.iter_mut().take(n).skip(l + 2) {
                    *item = *item - h;
                }
                f = f + h;

                // One QL sweep.
                p = d[m];
                let mut c = T::one();
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = T::zero();
                let mut s2 = T::zero();
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for k in 0..n {
                        let h = v[k * n + (i + 1)];
                        v[k * n + (i + 1)] = s * v[k * n + i] + c * h;
                        v[k * n + i] = c * v[k * n + i] - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;

                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] = d[l] + f;
        e[l] = T::zero();
        let _ = half;
    }
    Ok(())
}

/// Sort eigenvalues ascending, permuting basis columns alongside.
fn sort_ascending<T: Scalar>(n: usize, v: &mut [T], d: &mut [T]) {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| d[a].partial_cmp(&d[b]).expect("NaN eigenvalue"));

    let sorted_d: Vec<T> = idx.iter().map(|&k| d[k]).collect();
    let old_v = v.to_vec();
    for (new_col, &old_col) in idx.iter().enumerate() {
        for row in 0..n {
            v[row * n + new_col] = old_v[row * n + old_col];
        }
    }
    d.copy_from_slice(&sorted_d);
}
