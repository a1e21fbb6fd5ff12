//! Dense complex operators on a labelled finite basis, and the Hermitian
//! toolkit built on a Jacobi eigensolver: spectral calculus, sign parts,
//! exponentials of anti-Hermitian matrices, commutators and label windows.

mod jacobi;

use std::fmt;

use ndarray::{Array1, Array2, Axis};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

pub(crate) const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub(crate) const ONE: C64 = C64 { re: 1.0, im: 0.0 };
pub(crate) const I: C64 = C64 { re: 0.0, im: 1.0 };

/// How basis labels map onto matrix rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisMode {
    /// labels `0, 1, …, D−1`
    OneSided,
    /// labels `offset, …, offset + D − 1`, truncated at both ends
    TwoSided,
    /// labels `offset, …, offset + D − 1`, read modulo `D`
    Cyclic,
}

impl BasisMode {
    pub fn name(self) -> &'static str {
        match self {
            BasisMode::OneSided => "one_sided",
            BasisMode::TwoSided => "two_sided",
            BasisMode::Cyclic => "cyclic",
        }
    }
}

impl fmt::Display for BasisMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for BasisMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "one_sided" | "one-sided" => Ok(BasisMode::OneSided),
            "two_sided" | "two-sided" => Ok(BasisMode::TwoSided),
            "cyclic" => Ok(BasisMode::Cyclic),
            other => Err(Error::invalid(format!("unknown basis mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisSpec {
    mode: BasisMode,
    dim: usize,
    offset: i64,
}

impl BasisSpec {
    pub fn new(mode: BasisMode, dim: usize, offset: i64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("basis dimension must be positive"));
        }
        if mode == BasisMode::OneSided && offset != 0 {
            return Err(Error::invalid("a one-sided basis starts at label 0"));
        }
        Ok(Self { mode, dim, offset })
    }

    pub fn one_sided(dim: usize) -> Result<Self> {
        Self::new(BasisMode::OneSided, dim, 0)
    }

    /// Two-sided basis centred on zero: labels `−D/2, …, D − 1 − D/2`.
    pub fn two_sided(dim: usize) -> Result<Self> {
        Self::new(BasisMode::TwoSided, dim, -((dim / 2) as i64))
    }

    /// Cyclic basis with the same centred labelling as [`BasisSpec::two_sided`].
    pub fn cyclic(dim: usize) -> Result<Self> {
        Self::new(BasisMode::Cyclic, dim, -((dim / 2) as i64))
    }

    /// The centred (or, for one-sided, zero-based) basis of the given mode.
    pub fn centred(mode: BasisMode, dim: usize) -> Result<Self> {
        match mode {
            BasisMode::OneSided => Self::one_sided(dim),
            BasisMode::TwoSided => Self::two_sided(dim),
            BasisMode::Cyclic => Self::cyclic(dim),
        }
    }

    pub fn mode(&self) -> BasisMode {
        self.mode
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn label(&self, row: usize) -> i64 {
        self.offset + row as i64
    }

    pub fn labels(&self) -> impl Iterator<Item = i64> + '_ {
        (0..self.dim).map(move |r| self.label(r))
    }

    pub fn first_label(&self) -> i64 {
        self.offset
    }

    pub fn last_label(&self) -> i64 {
        self.offset + self.dim as i64 - 1
    }

    /// Row carrying `label`; cyclic bases wrap, the others return `None`
    /// outside the truncation.
    pub fn row_of(&self, label: i64) -> Option<usize> {
        let r = label - self.offset;
        match self.mode {
            BasisMode::Cyclic => Some(r.rem_euclid(self.dim as i64) as usize),
            _ if (0..self.dim as i64).contains(&r) => Some(r as usize),
            _ => None,
        }
    }

    /// Label range left after removing `margin` rows from each edge.
    pub fn interior(&self, margin: usize) -> Result<(i64, i64)> {
        let lo = self.first_label() + margin as i64;
        let hi = self.last_label() - margin as i64;
        if lo > hi {
            return Err(Error::EmptyWindow { lo, hi });
        }
        Ok((lo, hi))
    }
}

/// A `D × D` complex matrix together with the basis it acts on.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedOperator {
    basis: BasisSpec,
    entries: Array2<C64>,
}

impl TruncatedOperator {
    pub fn new(basis: BasisSpec, entries: Array2<C64>) -> Result<Self> {
        let (r, c) = entries.dim();
        if r != basis.dim() || c != basis.dim() {
            return Err(Error::BasisMismatch(format!(
                "{r}x{c} matrix for a basis of dimension {}",
                basis.dim()
            )));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::invalid("operator entries must be finite"));
        }
        Ok(Self { basis, entries })
    }

    pub(crate) fn from_parts(basis: BasisSpec, entries: Array2<C64>) -> Self {
        debug_assert_eq!(entries.dim(), (basis.dim(), basis.dim()));
        Self { basis, entries }
    }

    pub fn zeros(basis: BasisSpec) -> Self {
        let d = basis.dim();
        Self::from_parts(basis, Array2::zeros((d, d)))
    }

    pub fn identity(basis: BasisSpec) -> Self {
        let d = basis.dim();
        Self::from_parts(basis, Array2::eye(d))
    }

    pub fn from_fn(basis: BasisSpec, f: impl Fn(usize, usize) -> C64) -> Self {
        let d = basis.dim();
        Self::from_parts(basis, Array2::from_shape_fn((d, d), |(r, c)| f(r, c)))
    }

    pub fn from_diagonal(basis: BasisSpec, diag: &[f64]) -> Result<Self> {
        if diag.len() != basis.dim() {
            return Err(Error::BasisMismatch(format!(
                "{} diagonal entries for dimension {}",
                diag.len(),
                basis.dim()
            )));
        }
        let d = Array1::from_iter(diag.iter().map(|&x| C64::new(x, 0.0)));
        Self::new(basis, Array2::from_diag(&d))
    }

    /// Diagonal operator carrying the basis labels, `N e_n = n e_n`.
    pub fn number(basis: BasisSpec) -> Self {
        let labels: Vec<f64> = basis.labels().map(|l| l as f64).collect();
        Self::from_diagonal(basis, &labels).expect("dimension matches by construction")
    }

    pub fn basis(&self) -> BasisSpec {
        self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn entries(&self) -> &Array2<C64> {
        &self.entries
    }

    pub fn into_entries(self) -> Array2<C64> {
        self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.entries[[row, col]]
    }

    /// Entry addressed by basis labels.
    pub fn at_labels(&self, row: i64, col: i64) -> Option<C64> {
        Some(self.entries[[self.basis.row_of(row)?, self.basis.row_of(col)?]])
    }

    pub fn adjoint(&self) -> Self {
        Self::from_parts(self.basis, self.entries.t().mapv(|z| z.conj()))
    }

    pub fn scaled(&self, k: C64) -> Self {
        Self::from_parts(self.basis, self.entries.mapv(|z| z * k))
    }

    pub fn plus(&self, other: &Self) -> Result<Self> {
        self.same_basis(other)?;
        Ok(Self::from_parts(self.basis, &self.entries + &other.entries))
    }

    pub fn minus(&self, other: &Self) -> Result<Self> {
        self.same_basis(other)?;
        Ok(Self::from_parts(self.basis, &self.entries - &other.entries))
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.same_basis(other)?;
        Ok(Self::from_parts(self.basis, self.entries.dot(&other.entries)))
    }

    pub fn apply(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.dim() {
            return Err(Error::BasisMismatch(format!(
                "vector of length {} for dimension {}",
                v.len(),
                self.dim()
            )));
        }
        let x = ndarray::ArrayView1::from(v);
        Ok(self.entries.dot(&x).to_vec())
    }

    pub fn trace(&self) -> C64 {
        self.entries.diag().sum()
    }

    pub fn max_norm(&self) -> f64 {
        op_norm_max(self)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `max |M − M†|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in i..n {
                let d = (self.entries[[i, j]] - self.entries[[j, i]].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// `(M + M†)/2`.
    pub fn hermitian_part(&self) -> Self {
        let h = (&self.entries + &self.entries.t().mapv(|z| z.conj())).mapv(|z| z * 0.5);
        Self::from_parts(self.basis, h)
    }

    /// Principal submatrix on rows `rows` (by index, not label), reported on a
    /// fresh one-sided basis.
    pub fn leading_block(&self, size: usize) -> Result<Self> {
        if size == 0 || size > self.dim() {
            return Err(Error::invalid(format!("block size {size} outside 1..={}", self.dim())));
        }
        let e = self.entries.slice(ndarray::s![..size, ..size]).to_owned();
        let basis = BasisSpec::new(self.basis.mode, size, self.basis.offset)?;
        Ok(Self::from_parts(basis, e))
    }

    /// Block-diagonal `self ⊕ other`; the result is indexed `0 … 2D − 1`.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        let (a, b) = (self.dim(), other.dim());
        let mut e = Array2::zeros((a + b, a + b));
        e.slice_mut(ndarray::s![..a, ..a]).assign(&self.entries);
        e.slice_mut(ndarray::s![a.., a..]).assign(&other.entries);
        Ok(Self::from_parts(BasisSpec::one_sided(a + b)?, e))
    }

    fn same_basis(&self, other: &Self) -> Result<()> {
        if self.basis != other.basis {
            return Err(Error::BasisMismatch(format!("{:?} vs {:?}", self.basis, other.basis)));
        }
        Ok(())
    }
}

/// Eigenvalues ascending, eigenvectors as the columns of a unitary matrix.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    basis: BasisSpec,
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Array2<C64>,
    pub sweeps: usize,
}

impl EigenSystem {
    pub fn basis(&self) -> BasisSpec {
        self.basis
    }

    /// `V f(Λ) V†`, symmetrized.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> TruncatedOperator {
        self.map_complex(|l| C64::new(f(l), 0.0)).hermitian_part()
    }

    /// `V diag(w) V†` for arbitrary complex weights.
    pub fn map_complex(&self, f: impl Fn(f64) -> C64) -> TruncatedOperator {
        let w: Vec<C64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut vw = self.eigenvectors.clone();
        for (mut col, wk) in vw.axis_iter_mut(Axis(1)).zip(&w) {
            col.mapv_inplace(|z| z * wk);
        }
        let vh = self.eigenvectors.t().mapv(|z| z.conj());
        TruncatedOperator::from_parts(self.basis, vw.dot(&vh))
    }

    /// Orthogonal projector onto the eigenvectors whose eigenvalue satisfies
    /// `keep`.
    pub fn projector(&self, keep: impl Fn(f64) -> bool) -> TruncatedOperator {
        self.map(|l| if keep(l) { 1.0 } else { 0.0 })
    }
}

/// Eigendecomposition of a Hermitian operator by cyclic Jacobi sweeps.
pub fn hermitian_eig(m: &TruncatedOperator) -> Result<EigenSystem> {
    let scale = m.max_norm();
    let defect = m.hermiticity_defect();
    if defect > 1e-12 * scale {
        return Err(Error::NotHermitian { defect });
    }
    let n = m.dim();
    let flat: Vec<C64> = m.entries.iter().cloned().collect();
    let dec = jacobi::decompose(flat, n)?;
    let vt = Array2::from_shape_vec((n, n), dec.vectors_t).expect("n*n entries");
    Ok(EigenSystem {
        basis: m.basis,
        eigenvalues: dec.values,
        eigenvectors: vt.reversed_axes(),
        sweeps: dec.sweeps,
    })
}

/// Eigenvalues only.
pub fn eigenvalues(m: &TruncatedOperator) -> Result<Vec<f64>> {
    Ok(hermitian_eig(m)?.eigenvalues)
}

/// `f(M)` for Hermitian `M`.
pub fn spectral_function(m: &TruncatedOperator, f: impl Fn(f64) -> f64) -> Result<TruncatedOperator> {
    Ok(hermitian_eig(m)?.map(f))
}

/// Default kernel threshold for [`sign_part`]: `1e-8 · ‖S‖_max`.
pub fn default_zero_tol(s: &TruncatedOperator) -> f64 {
    1e-8 * s.max_norm()
}

/// The partial isometry `Σ` of the polar decomposition `S = Σ|S|`:
/// eigenvalues within `zero_tol` of zero map to 0, the rest to their sign.
pub fn sign_part(s: &TruncatedOperator, zero_tol: f64) -> Result<TruncatedOperator> {
    spectral_function(s, |l| if l.abs() <= zero_tol { 0.0 } else { l.signum() })
}

/// `exp(G)` for anti-Hermitian `G`, via the spectrum of the Hermitian `−iG`.
pub fn anti_hermitian_exp(g: &TruncatedOperator) -> Result<TruncatedOperator> {
    let h = g.scaled(-I);
    let defect = h.hermiticity_defect();
    if defect > 1e-12 * h.max_norm().max(1.0) {
        return Err(Error::NotAntiHermitian { defect });
    }
    let h = h.hermitian_part();
    let es = hermitian_eig(&h)?;
    Ok(es.map_complex(|l| C64::from_polar(1.0, l)))
}

/// `AB − BA`.
pub fn commutator(a: &TruncatedOperator, b: &TruncatedOperator) -> Result<TruncatedOperator> {
    a.matmul(b)?.minus(&b.matmul(a)?)
}

/// Largest entry modulus.
pub fn op_norm_max(a: &TruncatedOperator) -> f64 {
    a.entries.iter().fold(0.0_f64, |m, z| m.max(z.norm()))
}

/// Principal submatrix over the basis labels `lo ..= hi`.
pub fn window_restrict(a: &TruncatedOperator, lo: i64, hi: i64) -> Result<TruncatedOperator> {
    let b = a.basis;
    let lo_c = lo.max(b.first_label());
    let hi_c = hi.min(b.last_label());
    if lo_c > hi_c {
        return Err(Error::EmptyWindow { lo, hi });
    }
    let r0 = (lo_c - b.offset) as usize;
    let r1 = (hi_c - b.offset) as usize;
    let e = a.entries.slice(ndarray::s![r0..=r1, r0..=r1]).to_owned();
    let mode = match b.mode {
        BasisMode::OneSided if lo_c == 0 => BasisMode::OneSided,
        _ => BasisMode::TwoSided,
    };
    let basis = BasisSpec::new(mode, r1 - r0 + 1, lo_c)?;
    Ok(TruncatedOperator::from_parts(basis, e))
}
