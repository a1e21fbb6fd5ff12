//! Gauss rules and an adaptive Gauss–Kronrod integrator.

use crate::error::{Error, Result};
use crate::specfun::ln_gamma_pos;

/// Generalized Gauss–Laguerre rule for `∫₀^∞ x^α e^{−x} f(x) dx`.
///
/// Weights are kept as logarithms; `scaled_weight(i) = w_i e^{x_i}` is the
/// weight to use when the integrand already carries its own `e^{−x}`.
#[derive(Debug, Clone)]
pub struct GaussLaguerre {
    pub alpha: f64,
    pub nodes: Vec<f64>,
    pub ln_weights: Vec<f64>,
}

impl GaussLaguerre {
    pub fn new(n: usize, alpha: f64) -> Result<Self> {
        if n == 0 || n > 400 {
            return Err(Error::invalid(format!("Gauss-Laguerre order {n} outside 1..=400")));
        }
        if !(alpha > -1.0) {
            return Err(Error::invalid(format!("Laguerre exponent {alpha} must exceed -1")));
        }
        let nf = n as f64;
        let mut nodes = vec![0.0; n];
        let mut ln_weights = vec![0.0; n];
        let ln_norm = ln_gamma_pos(alpha + nf) - ln_gamma_pos(nf);
        // eigenvalues of the symmetric tridiagonal Jacobi matrix seed Newton
        let diag: Vec<f64> = (0..n).map(|i| 2.0 * i as f64 + alpha + 1.0).collect();
        let off_sq: Vec<f64> = (1..n).map(|i| i as f64 * (i as f64 + alpha)).collect();
        let seeds = tridiagonal_eigenvalues(&diag, &off_sq);
        for i in 0..n {
            let mut z = seeds[i];
            let (mut pp, mut p2) = (0.0, 0.0);
            for _ in 0..8 {
                let (mut p1, mut q2) = (1.0_f64, 0.0_f64);
                for j in 0..n {
                    let jf = j as f64;
                    let p3 = q2;
                    q2 = p1;
                    p1 = ((2.0 * jf + 1.0 + alpha - z) * q2 - (jf + alpha) * p3) / (jf + 1.0);
                }
                p2 = q2;
                pp = (nf * p1 - (nf + alpha) * p2) / z;
                let z1 = z;
                z = z1 - p1 / pp;
                if (z - z1).abs() <= 4.0 * f64::EPSILON * z.abs() {
                    break;
                }
            }
            if (z - seeds[i]).abs() > 1e-8 * z.abs().max(1.0) {
                return Err(Error::Quadrature(format!(
                    "Gauss-Laguerre Newton step left its bracket at index {i} (n = {n})"
                )));
            }
            if i > 0 && z <= nodes[i - 1] {
                return Err(Error::Quadrature(format!(
                    "Gauss-Laguerre nodes collapsed at index {i} (n = {n})"
                )));
            }
            nodes[i] = z;
            ln_weights[i] = ln_norm - pp.abs().ln() - nf.ln() - p2.abs().ln();
        }
        Ok(Self {
            alpha,
            nodes,
            ln_weights,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.ln_weights[i].exp()
    }

    /// `w_i e^{x_i}`
    pub fn scaled_weight(&self, i: usize) -> f64 {
        (self.ln_weights[i] + self.nodes[i]).exp()
    }

    /// `Σ w_i f(x_i)`
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().enumerate().map(|(i, &x)| self.weight(i) * f(x)).sum()
    }
}

/// Eigenvalues (ascending) of the symmetric tridiagonal matrix with the
/// given diagonal and squared off-diagonal, by Sturm-sequence bisection.
fn tridiagonal_eigenvalues(diag: &[f64], off_sq: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let below = |x: f64| -> usize {
        let mut count = 0;
        let mut q = diag[0] - x;
        if q < 0.0 {
            count += 1;
        }
        for i in 1..n {
            let prev = if q == 0.0 { f64::EPSILON } else { q };
            q = diag[i] - x - off_sq[i - 1] / prev;
            if q < 0.0 {
                count += 1;
            }
        }
        count
    };
    let mut lo_all = f64::INFINITY;
    let mut hi_all = f64::NEG_INFINITY;
    for i in 0..n {
        let r = off_sq.get(i).map_or(0.0, |b| b.sqrt()) + if i > 0 { off_sq[i - 1].sqrt() } else { 0.0 };
        lo_all = lo_all.min(diag[i] - r);
        hi_all = hi_all.max(diag[i] + r);
    }
    (0..n)
        .map(|k| {
            let (mut lo, mut hi) = (lo_all, hi_all);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if below(mid) > k {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}

/// Gauss–Legendre rule on `[−1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("Gauss-Legendre order must be positive"));
        }
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = (n + 1) / 2;
        let nf = n as f64;
        for i in 0..m {
            let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut pp = 0.0;
            for _ in 0..100 {
                let (mut p1, mut p2) = (1.0_f64, 0.0_f64);
                for j in 0..n {
                    let jf = j as f64;
                    let p3 = p2;
                    p2 = p1;
                    p1 = ((2.0 * jf + 1.0) * z * p2 - jf * p3) / (jf + 1.0);
                }
                pp = nf * (z * p1 - p2) / (z * z - 1.0);
                let z1 = z;
                z = z1 - p1 / pp;
                if (z - z1).abs() <= 1e-16 {
                    break;
                }
            }
            nodes[i] = -z;
            nodes[n - 1 - i] = z;
            let w = 2.0 / ((1.0 - z * z) * pp * pp);
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Ok(Self { nodes, weights })
    }

    /// `∫_a^b f` with the rule mapped to `[a, b]`.
    pub fn integrate(&self, a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
        let h = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + h * x))
            .sum::<f64>()
            * h
    }

    /// Nodes and weights of the composite rule on `panels` equal cells of `[a, b]`.
    pub fn composite(&self, a: f64, b: f64, panels: usize) -> (Vec<f64>, Vec<f64>) {
        let mut xs = Vec::with_capacity(panels * self.nodes.len());
        let mut ws = Vec::with_capacity(panels * self.nodes.len());
        let width = (b - a) / panels as f64;
        for p in 0..panels {
            let lo = a + p as f64 * width;
            let mid = lo + 0.5 * width;
            for (&x, &w) in self.nodes.iter().zip(&self.weights) {
                xs.push(mid + 0.5 * width * x);
                ws.push(0.5 * width * w);
            }
        }
        (xs, ws)
    }
}

const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const GK_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const G7_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let h = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let fc = f(mid);
    let mut kron = GK_WEIGHTS[7] * fc;
    let mut gauss = G7_WEIGHTS[3] * fc;
    for k in 0..7 {
        let x = h * GK_NODES[k];
        let s = f(mid - x) + f(mid + x);
        kron += GK_WEIGHTS[k] * s;
        if k % 2 == 1 {
            gauss += G7_WEIGHTS[k / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

/// Adaptive Gauss–Kronrod (7/15) integration of `f` over `[a, b]` to within
/// `abs_tol + rel_tol·|I|`.
pub fn adaptive_gk(f: impl Fn(f64) -> f64, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<f64> {
    const MAX_INTERVALS: usize = 4000;
    let f: &dyn Fn(f64) -> f64 = &f;
    let (v, e) = gk15(f, a, b);
    // (error, lo, hi, value)
    let mut pieces = vec![(e, a, b, v)];
    loop {
        let total: f64 = pieces.iter().map(|p| p.3).sum();
        let err: f64 = pieces.iter().map(|p| p.0).sum();
        if !total.is_finite() {
            return Err(Error::Quadrature("integrand produced a non-finite value".into()));
        }
        if err <= abs_tol.max(rel_tol * total.abs()) {
            return Ok(total);
        }
        if pieces.len() >= MAX_INTERVALS {
            return Err(Error::Quadrature(format!(
                "adaptive rule exhausted {MAX_INTERVALS} intervals (error estimate {err:.3e})"
            )));
        }
        let worst = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .0.total_cmp(&y.1 .0))
            .map(|(i, _)| i)
            .expect("non-empty");
        let (_, lo, hi, _) = pieces.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(f, lo, mid);
        let (v2, e2) = gk15(f, mid, hi);
        pieces.push((e1, lo, mid, v1));
        pieces.push((e2, mid, hi, v2));
    }
}
