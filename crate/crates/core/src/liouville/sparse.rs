//! Minimal complex CSR matrix and a preconditioned BiCGSTAB solver, used by
//! the sparse steady-state path.

use num_complex::Complex64 as C64;

/// Compressed sparse row matrix over Complex64.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    n_rows: usize,
    n_cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<C64>,
}

impl CsrMatrix {
    /// Builds from (row, col, value) triplets; duplicates are summed and
    /// exact zeros dropped.
    pub fn from_triplets(n_rows: usize, n_cols: usize, mut triplets: Vec<(usize, usize, C64)>) -> Self {
        triplets.retain(|&(_, _, v)| v != C64::new(0.0, 0.0));
        triplets.sort_unstable_by_key(|&(r, c, _)| (r, c));
        let mut merged: Vec<(usize, usize, C64)> = Vec::with_capacity(triplets.len());
        for (r, c, v) in triplets {
            debug_assert!(r < n_rows && c < n_cols);
            match merged.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 += v,
                _ => merged.push((r, c, v)),
            }
        }
        let mut row_ptr = vec![0usize; n_rows + 1];
        for &(r, _, _) in &merged {
            row_ptr[r + 1] += 1;
        }
        for i in 0..n_rows {
            row_ptr[i + 1] += row_ptr[i];
        }
        let col_idx = merged.iter().map(|t| t.1).collect();
        let values = merged.iter().map(|t| t.2).collect();
        Self { n_rows, n_cols, row_ptr, col_idx, values }
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn iter_entries(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        (0..self.n_rows).flat_map(move |r| {
            (self.row_ptr[r]..self.row_ptr[r + 1]).map(move |p| (r, self.col_idx[p], self.values[p]))
        })
    }

    /// y = A x.
    pub fn matvec(&self, x: &[C64], y: &mut [C64]) {
        debug_assert_eq!(x.len(), self.n_cols);
        debug_assert_eq!(y.len(), self.n_rows);
        for r in 0..self.n_rows {
            let mut acc = C64::new(0.0, 0.0);
            for p in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.values[p] * x[self.col_idx[p]];
            }
            y[r] = acc;
        }
    }

    /// y = Aᴴ x (conjugate transpose application, scatter form).
    pub fn adjoint_matvec(&self, x: &[C64], y: &mut [C64]) {
        debug_assert_eq!(x.len(), self.n_rows);
        debug_assert_eq!(y.len(), self.n_cols);
        y.fill(C64::new(0.0, 0.0));
        for r in 0..self.n_rows {
            let xr = x[r];
            for p in self.row_ptr[r]..self.row_ptr[r + 1] {
                y[self.col_idx[p]] += self.values[p].conj() * xr;
            }
        }
    }

    /// Main diagonal (zeros where absent).
    pub fn diagonal(&self) -> Vec<C64> {
        let mut d = vec![C64::new(0.0, 0.0); self.n_rows.min(self.n_cols)];
        for (r, c, v) in self.iter_entries() {
            if r == c {
                d[r] = v;
            }
        }
        d
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[C64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Solves (A − shift·I) x = b with Jacobi-preconditioned BiCGSTAB.
///
/// Returns the best solution found and its achieved relative residual
/// ‖(A−σ)x − b‖/‖b‖; callers decide whether the residual is acceptable.
/// Inverse iteration tolerates inexact inner solves, so a stall is not an
/// error here.
pub fn bicgstab_shifted(
    a: &CsrMatrix,
    shift: C64,
    b: &[C64],
    tol: f64,
    max_iter: usize,
) -> (Vec<C64>, f64) {
    let n = a.n_rows();
    assert_eq!(a.n_cols(), n);
    assert_eq!(b.len(), n);
    let diag = a.diagonal();
    let scale = a.max_abs().max(1e-300);
    let precond: Vec<C64> = diag
        .iter()
        .map(|&d| {
            let m = d - shift;
            if m.norm() < 1e-12 * scale {
                C64::new(1.0 / scale, 0.0)
            } else {
                m.inv()
            }
        })
        .collect();

    let apply = |x: &[C64], y: &mut [C64]| {
        a.matvec(x, y);
        for i in 0..n {
            y[i] -= shift * x[i];
        }
    };

    let b_norm = norm(b);
    if b_norm == 0.0 {
        return (vec![C64::new(0.0, 0.0); n], 0.0);
    }

    let mut x = vec![C64::new(0.0, 0.0); n];
    let mut r = b.to_vec();
    let r0 = r.clone();
    let mut rho = C64::new(1.0, 0.0);
    let mut alpha = C64::new(1.0, 0.0);
    let mut omega = C64::new(1.0, 0.0);
    let mut v = vec![C64::new(0.0, 0.0); n];
    let mut p = vec![C64::new(0.0, 0.0); n];
    let mut tmp = vec![C64::new(0.0, 0.0); n];

    for _ in 0..max_iter {
        let rho_next = dot(&r0, &r);
        if rho_next.norm() < 1e-300 {
            break; // breakdown; return best effort
        }
        let beta = (rho_next / rho) * (alpha / omega);
        rho = rho_next;
        for i in 0..n {
            p[i] = r[i] + beta * (p[i] - omega * v[i]);
        }
        let p_hat: Vec<C64> = p.iter().zip(&precond).map(|(x, m)| x * m).collect();
        apply(&p_hat, &mut v);
        let denom = dot(&r0, &v);
        if denom.norm() < 1e-300 {
            break;
        }
        alpha = rho / denom;
        let s: Vec<C64> = r.iter().zip(&v).map(|(ri, vi)| ri - alpha * vi).collect();
        if norm(&s) / b_norm < tol {
            for i in 0..n {
                x[i] += alpha * p_hat[i];
            }
            apply(&x, &mut tmp);
            let res = {
                for i in 0..n {
                    tmp[i] -= b[i];
                }
                norm(&tmp) / b_norm
            };
            return (x, res);
        }
        let s_hat: Vec<C64> = s.iter().zip(&precond).map(|(x, m)| x * m).collect();
        apply(&s_hat, &mut tmp);
        let t_dot_t = dot(&tmp, &tmp);
        if t_dot_t.norm() < 1e-300 {
            break;
        }
        omega = dot(&tmp, &s) / t_dot_t;
        for i in 0..n {
            x[i] += alpha * p_hat[i] + omega * s_hat[i];
            r[i] = s[i] - omega * tmp[i];
        }
        let res = norm(&r) / b_norm;
        if res < tol {
            return (x, res);
        }
        if omega.norm() < 1e-300 {
            break;
        }
    }
    // best-effort exit: report the achieved residual
    apply(&x, &mut tmp);
    for i in 0..n {
        tmp[i] -= b[i];
    }
    let res = norm(&tmp) / b_norm;
    (x, res)
}
