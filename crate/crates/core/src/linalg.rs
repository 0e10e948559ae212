//! Dense complex linear algebra for few-qubit states.
//!
//! Qubit 0 is the most significant bit of a computational-basis index, so for
//! three qubits the amplitude of `|q0 q1 q2>` lives at `4*q0 + 2*q1 + q2`.

use nalgebra::{DMatrix, Matrix2, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest supported register.
pub const MAX_QUBITS: usize = 8;

const NORM_TOL: f64 = 1e-12;
const HERMITIAN_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-10;
const UNITARY_TOL: f64 = 1e-10;
/// Eigenvalues in `[-PSD_TOL, 0)` are roundoff and clamp to zero.
pub const PSD_TOL: f64 = 1e-8;

/// Normalized pure state of `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl PureState {
    /// Wraps amplitudes that are already normalized to within `1e-12`.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let n_qubits = qubits_for_len(amplitudes.len())?;
        let norm = norm(&amplitudes);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized((norm - 1.0).abs()));
        }
        Ok(Self { n_qubits, amplitudes })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let n_qubits = qubits_for_len(amplitudes.len())?;
        let norm = norm(&amplitudes);
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::NotNormalized(f64::NAN));
        }
        for a in &mut amplitudes {
            *a /= norm;
        }
        Ok(Self { n_qubits, amplitudes })
    }

    /// Computational-basis state `|index>`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(Error::QubitCount(n_qubits));
        }
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::InvalidArgument(format!(
                "basis index {index} out of range for dimension {dim}"
            )));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, amplitudes })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: other.dim(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Tensor product `self ⊗ other`; `self` supplies the leading qubits.
    pub fn tensor(&self, other: &PureState) -> Result<PureState> {
        let n = self.n_qubits + other.n_qubits;
        if n > MAX_QUBITS {
            return Err(Error::QubitCount(n));
        }
        let mut amplitudes = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amplitudes.push(a * b);
            }
        }
        Ok(PureState {
            n_qubits: n,
            amplitudes,
        })
    }

    /// Reorders qubits so that new qubit `k` is old qubit `order[k]`.
    pub fn permute_qubits(&self, order: &[usize]) -> Result<PureState> {
        let n = self.n_qubits;
        if order.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: order.len(),
            });
        }
        let mut seen = vec![false; n];
        for &q in order {
            if q >= n {
                return Err(Error::QubitOutOfRange { index: q, n_qubits: n });
            }
            if std::mem::replace(&mut seen[q], true) {
                return Err(Error::InvalidArgument(format!("qubit {q} repeated in permutation")));
            }
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); self.dim()];
        for (new_idx, amp) in amplitudes.iter_mut().enumerate() {
            let mut old_idx = 0usize;
            for (k, &q) in order.iter().enumerate() {
                let bit = (new_idx >> (n - 1 - k)) & 1;
                old_idx |= bit << (n - 1 - q);
            }
            *amp = self.amplitudes[old_idx];
        }
        Ok(PureState {
            n_qubits: n,
            amplitudes,
        })
    }

    pub fn to_density_matrix(&self) -> DensityMatrix {
        let v = nalgebra::DVector::from_column_slice(&self.amplitudes);
        DensityMatrix {
            entries: &v * v.adjoint(),
        }
    }
}

fn norm(amplitudes: &[Complex64]) -> f64 {
    amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

fn qubits_for_len(len: usize) -> Result<usize> {
    if len < 2 || !len.is_power_of_two() {
        return Err(Error::InvalidArgument(format!(
            "amplitude count {len} is not a power of two >= 2"
        )));
    }
    let n = len.trailing_zeros() as usize;
    if n > MAX_QUBITS {
        return Err(Error::QubitCount(n));
    }
    Ok(n)
}

/// Hermitian, unit-trace, positive semidefinite matrix.
///
/// Construction checks hermiticity and trace; positivity is checked when the
/// spectrum is taken (see [`hermitian_eigenvalues`]).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    entries: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::DimensionMismatch {
                expected: entries.nrows(),
                actual: entries.ncols(),
            });
        }
        let dim = entries.nrows();
        if dim == 0 || dim > 1 << MAX_QUBITS {
            return Err(Error::InvalidArgument(format!("unsupported dimension {dim}")));
        }
        let mut worst = 0.0f64;
        for i in 0..dim {
            for j in i..dim {
                worst = worst.max((entries[(i, j)] - entries[(j, i)].conj()).norm());
            }
        }
        if worst > HERMITIAN_TOL {
            return Err(Error::NotHermitian(worst));
        }
        let trace = entries.trace();
        if (trace.re - 1.0).abs() > TRACE_TOL || trace.im.abs() > TRACE_TOL {
            return Err(Error::BadTrace(trace.re));
        }
        Ok(Self { entries })
    }

    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        let d = nalgebra::DVector::from_iterator(diag.len(), diag.iter().map(|&x| Complex64::new(x, 0.0)));
        Self::new(DMatrix::from_diagonal(&d))
    }

    /// `(1/dim) * I`.
    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        Self::from_diagonal(&vec![1.0 / dim as f64; dim])
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    /// Qubit count when the dimension is a power of two.
    pub fn n_qubits(&self) -> Option<usize> {
        let d = self.dim();
        (d >= 2 && d.is_power_of_two()).then(|| d.trailing_zeros() as usize)
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    /// Convex combination `p*self + (1-p)*other`.
    pub fn mix(&self, other: &DensityMatrix, p: f64) -> Result<DensityMatrix> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: other.dim(),
            });
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::OutOfUnitInterval(p));
        }
        let c = |x: f64| Complex64::new(x, 0.0);
        DensityMatrix::new(self.entries.map(|z| z * c(p)) + other.entries.map(|z| z * c(1.0 - p)))
    }

    pub(crate) fn from_trusted(entries: DMatrix<Complex64>) -> Self {
        Self { entries }
    }
}

/// Ordered, non-empty list of distinct qubit indices to keep.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubsystemMask(Vec<usize>);

impl SubsystemMask {
    pub fn new(kept: Vec<usize>) -> Result<Self> {
        if kept.is_empty() {
            return Err(Error::EmptyMask);
        }
        if kept.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::UnorderedMask(kept));
        }
        Ok(Self(kept))
    }

    /// Mask from arbitrary distinct indices, sorted into increasing order.
    pub fn from_unsorted(mut kept: Vec<usize>) -> Result<Self> {
        kept.sort_unstable();
        Self::new(kept)
    }

    pub fn qubits(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Qubits of an `n_qubits` register not in this mask, in increasing order.
    pub fn complement(&self, n_qubits: usize) -> Vec<usize> {
        (0..n_qubits).filter(|q| !self.0.contains(q)).collect()
    }

    fn check(&self, n_qubits: usize) -> Result<()> {
        match self.0.iter().find(|&&q| q >= n_qubits) {
            Some(&index) => Err(Error::QubitOutOfRange { index, n_qubits }),
            None => Ok(()),
        }
    }
}

/// Splits each basis index into (kept index, traced index) given the qubit
/// lists. Entry `i` of the result belongs to full basis index `i`.
fn split_indices(n_qubits: usize, kept: &[usize], traced: &[usize]) -> Vec<(usize, usize)> {
    let gather = |idx: usize, qubits: &[usize]| {
        qubits
            .iter()
            .fold(0usize, |acc, &q| (acc << 1) | ((idx >> (n_qubits - 1 - q)) & 1))
    };
    (0..1usize << n_qubits)
        .map(|idx| (gather(idx, kept), gather(idx, traced)))
        .collect()
}

/// Amplitudes reshaped as a `2^|keep| x 2^(n-|keep|)` matrix so that the
/// reduced density matrix is `M M^†`.
pub(crate) fn bipartite_factor(psi: &PureState, keep: &SubsystemMask) -> Result<DMatrix<Complex64>> {
    let n = psi.n_qubits();
    keep.check(n)?;
    let traced = keep.complement(n);
    let mut m = DMatrix::zeros(1 << keep.len(), 1 << traced.len());
    for (idx, (k, r)) in split_indices(n, keep.qubits(), &traced).into_iter().enumerate() {
        m[(k, r)] = psi.amplitudes[idx];
    }
    Ok(m)
}

/// Reduced density matrix of a pure state on the kept qubits.
pub fn partial_trace_pure(psi: &PureState, keep: &SubsystemMask) -> Result<DensityMatrix> {
    let m = bipartite_factor(psi, keep)?;
    Ok(DensityMatrix::from_trusted(&m * m.adjoint()))
}

/// Reduced density matrix of a multi-qubit density matrix on the kept qubits.
pub fn partial_trace_mixed(rho: &DensityMatrix, keep: &SubsystemMask) -> Result<DensityMatrix> {
    let n = rho
        .n_qubits()
        .ok_or_else(|| Error::InvalidArgument(format!("dimension {} is not a qubit register", rho.dim())))?;
    keep.check(n)?;
    let traced = keep.complement(n);
    let split = split_indices(n, keep.qubits(), &traced);
    let mut out = DMatrix::zeros(1 << keep.len(), 1 << keep.len());
    for (i, &(ki, ri)) in split.iter().enumerate() {
        for (j, &(kj, rj)) in split.iter().enumerate() {
            if ri == rj {
                out[(ki, kj)] += rho.entries[(i, j)];
            }
        }
    }
    Ok(DensityMatrix::from_trusted(out))
}

/// Either kind of input accepted by [`partial_trace`].
pub enum StateRef<'a> {
    Pure(&'a PureState),
    Mixed(&'a DensityMatrix),
}

impl<'a> From<&'a PureState> for StateRef<'a> {
    fn from(value: &'a PureState) -> Self {
        StateRef::Pure(value)
    }
}

impl<'a> From<&'a DensityMatrix> for StateRef<'a> {
    fn from(value: &'a DensityMatrix) -> Self {
        StateRef::Mixed(value)
    }
}

pub fn partial_trace<'a>(state: impl Into<StateRef<'a>>, keep: &SubsystemMask) -> Result<DensityMatrix> {
    match state.into() {
        StateRef::Pure(psi) => partial_trace_pure(psi, keep),
        StateRef::Mixed(rho) => partial_trace_mixed(rho, keep),
    }
}

/// Sorts descending and applies the positivity clamp.
fn clamp_spectrum(mut values: Vec<f64>) -> Result<Vec<f64>> {
    values.sort_by(|a, b| b.total_cmp(a));
    for v in &mut values {
        if *v < -PSD_TOL || v.is_nan() {
            return Err(Error::NotPositive(*v));
        }
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    Ok(values)
}

/// Eigenvalues of a density matrix, descending, with the positivity clamp.
pub fn hermitian_eigenvalues(m: &DensityMatrix) -> Result<Vec<f64>> {
    let values = m.entries.clone().symmetric_eigenvalues();
    clamp_spectrum(values.iter().copied().collect())
}

/// Eigen-pairs of a Hermitian matrix, sorted by descending eigenvalue. No
/// clamping: callers decide how to treat small negative values.
pub(crate) fn hermitian_eigen(m: DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    let eig = SymmetricEigen::new(m);
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Spectrum of a Hermitian matrix that is not necessarily unit-trace.
pub(crate) fn psd_eigenvalues(m: DMatrix<Complex64>) -> Result<Vec<f64>> {
    clamp_spectrum(m.symmetric_eigenvalues().iter().copied().collect())
}

/// `sum_i lambda_i^alpha` over the clamped spectrum.
pub fn trace_power(m: &DensityMatrix, alpha: f64) -> Result<f64> {
    if !(alpha >= 1.0) {
        return Err(Error::InvalidAlpha(alpha));
    }
    Ok(spectrum_power(&hermitian_eigenvalues(m)?, alpha))
}

pub(crate) fn spectrum_power(spectrum: &[f64], alpha: f64) -> f64 {
    spectrum.iter().filter(|&&l| l > 0.0).map(|&l| l.powf(alpha)).sum()
}

/// Trace distance between pure states, `sqrt(1 - |<a|b>|^2)`.
///
/// Evaluated as the norm of the part of `b` orthogonal to `a`, which stays
/// accurate for distances far below `sqrt(machine epsilon)`.
pub fn pure_trace_distance(a: &PureState, b: &PureState) -> Result<f64> {
    let overlap = a.inner(b)?;
    let orthogonal: f64 = a
        .amplitudes
        .iter()
        .zip(&b.amplitudes)
        .map(|(x, y)| (y - overlap * x).norm_sqr())
        .sum();
    Ok(orthogonal.sqrt().min(1.0))
}

/// Applies a single-qubit unitary to one tensor factor.
pub fn apply_local_unitary(state: &PureState, qubit: usize, u: &Matrix2<Complex64>) -> Result<PureState> {
    let n = state.n_qubits();
    if qubit >= n {
        return Err(Error::QubitOutOfRange {
            index: qubit,
            n_qubits: n,
        });
    }
    let dev = (u.adjoint() * u - Matrix2::identity())
        .iter()
        .fold(0.0f64, |acc, z| acc.max(z.norm()));
    if dev > UNITARY_TOL {
        return Err(Error::NotUnitary(dev));
    }
    let stride = 1usize << (n - 1 - qubit);
    let mut amplitudes = state.amplitudes.clone();
    for idx in 0..state.dim() {
        if idx & stride == 0 {
            let (a0, a1) = (state.amplitudes[idx], state.amplitudes[idx | stride]);
            amplitudes[idx] = u[(0, 0)] * a0 + u[(0, 1)] * a1;
            amplitudes[idx | stride] = u[(1, 0)] * a0 + u[(1, 1)] * a1;
        }
    }
    Ok(PureState {
        n_qubits: n,
        amplitudes,
    })
}

/// Common single-qubit gates.
pub mod gates {
    use nalgebra::Matrix2;
    use num_complex::Complex64;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    pub fn identity() -> Matrix2<Complex64> {
        Matrix2::identity()
    }

    pub fn pauli_x() -> Matrix2<Complex64> {
        Matrix2::new(c(0.0), c(1.0), c(1.0), c(0.0))
    }

    pub fn hadamard() -> Matrix2<Complex64> {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Matrix2::new(c(h), c(h), c(h), c(-h))
    }
}
