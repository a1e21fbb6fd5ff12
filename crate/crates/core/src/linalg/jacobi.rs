//! Cyclic complex Jacobi rotations for dense Hermitian matrices.
//!
//! Storage is row-major. Each rotation updates rows `p` and `q` of the
//! matrix, mirrors them into the columns by Hermiticity, and applies the same
//! rotation to the rows of `Vᵀ`, so the inner loops stay contiguous.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

pub(crate) const MAX_SWEEPS: usize = 60;
pub(crate) const OFF_DIAGONAL_TOL: f64 = 1e-14;

pub(crate) struct Decomposition {
    pub values: Vec<f64>,
    /// row `k` holds the components of eigenvector `k`
    pub vectors_t: Vec<C64>,
    pub sweeps: usize,
}

fn off_diagonal_sq(a: &[C64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i * n + j].norm_sqr();
            }
        }
    }
    s
}

pub(crate) fn decompose(mut a: Vec<C64>, n: usize) -> Result<Decomposition> {
    let mut vt = vec![C64::new(0.0, 0.0); n * n];
    for i in 0..n {
        vt[i * n + i] = C64::new(1.0, 0.0);
    }
    for i in 0..n {
        a[i * n + i].im = 0.0;
    }
    let frob = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let target = OFF_DIAGONAL_TOL * frob;
    let mut sweeps = 0;
    loop {
        let off = off_diagonal_sq(&a, n).sqrt();
        if off <= target || frob == 0.0 {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NonConvergence {
                what: "Jacobi eigensolver",
                budget: MAX_SWEEPS,
            });
        }
        sweeps += 1;
        let mut row_p = vec![C64::new(0.0, 0.0); n];
        let mut row_q = vec![C64::new(0.0, 0.0); n];
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let g = a[p * n + q];
                let g_abs = g.norm();
                if g_abs == 0.0 {
                    continue;
                }
                let alpha = a[p * n + p].re;
                let beta = a[q * n + q].re;
                let theta = (beta - alpha) / (2.0 * g_abs);
                let t = if theta.is_finite() {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                } else {
                    0.0
                };
                if t == 0.0 {
                    a[p * n + q] = C64::new(0.0, 0.0);
                    a[q * n + p] = C64::new(0.0, 0.0);
                    continue;
                }
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let phase = g / g_abs;
                let sp = phase * s; // s e^{iφ}
                let sp_conj = sp.conj(); // s e^{-iφ}

                row_p.copy_from_slice(&a[p * n..(p + 1) * n]);
                row_q.copy_from_slice(&a[q * n..(q + 1) * n]);
                for k in 0..n {
                    let ap = row_p[k];
                    let aq = row_q[k];
                    a[p * n + k] = ap * c - sp * aq;
                    a[q * n + k] = sp_conj * ap + aq * c;
                }
                for k in 0..n {
                    if k != p && k != q {
                        a[k * n + p] = a[p * n + k].conj();
                        a[k * n + q] = a[q * n + k].conj();
                    }
                }
                a[p * n + p] = C64::new(alpha - t * g_abs, 0.0);
                a[q * n + q] = C64::new(beta + t * g_abs, 0.0);
                a[p * n + q] = C64::new(0.0, 0.0);
                a[q * n + p] = C64::new(0.0, 0.0);

                // V ← V R acts on columns p, q of V, i.e. rows p, q of Vᵀ
                let (head, tail) = vt.split_at_mut(q * n);
                let vp = &mut head[p * n..(p + 1) * n];
                let vq = &mut tail[..n];
                for k in 0..n {
                    let xp = vp[k];
                    let xq = vq[k];
                    vp[k] = xp * c - sp_conj * xq;
                    vq[k] = sp * xp + xq * c;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]).then(i.cmp(&j)));
    let values = order.iter().map(|&i| diag[i]).collect();
    let mut vectors_t = Vec::with_capacity(n * n);
    for &i in &order {
        vectors_t.extend_from_slice(&vt[i * n..(i + 1) * n]);
    }
    Ok(Decomposition {
        values,
        vectors_t,
        sweeps,
    })
}
