//! Rényi-α entanglement quantities and the residuals of the superadditivity,
//! second-order monogamy and squared-concurrence monogamy inequalities.
//!
//! All logarithms are base 2, so every entanglement value is in bits. Mixed
//! two-qubit states use the closed form in terms of the concurrence
//! `C`:
//!
//! ```text
//! R_alpha(C) = log2(x^alpha + (1-x)^alpha) / (1 - alpha),  x = (1 + sqrt(1 - C^2)) / 2
//! ```
//!
//! which reduces to the binary entropy of `x` (entanglement of formation) at
//! `alpha = 1`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    bipartite_factor, hermitian_eigen, hermitian_eigenvalues, psd_eigenvalues, spectrum_power, DensityMatrix,
    PureState, SubsystemMask, PSD_TOL,
};

/// Residuals below this value count as genuine violations.
pub const VIOLATION_THRESHOLD: f64 = -1e-7;

const ALPHA_ONE_TOL: f64 = 1e-9;
const UNIT_INTERVAL_TOL: f64 = 1e-12;

/// Rényi order, `alpha >= 1`. Values within `1e-9` of one snap to exactly one.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Alpha(f64);

impl Alpha {
    pub const TWO: Alpha = Alpha(2.0);
    pub const ONE: Alpha = Alpha(1.0);

    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::InvalidAlpha(value));
        }
        if (value - 1.0).abs() < ALPHA_ONE_TOL {
            return Ok(Alpha(1.0));
        }
        if value < 1.0 {
            return Err(Error::InvalidAlpha(value));
        }
        Ok(Alpha(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// True on the entanglement-of-formation branch.
    pub fn is_one(self) -> bool {
        self.0 == 1.0
    }
}

impl TryFrom<f64> for Alpha {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Alpha::new(value)
    }
}

impl From<Alpha> for f64 {
    fn from(value: Alpha) -> Self {
        value.0
    }
}

impl std::fmt::Display for Alpha {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Assignment of four qubits to the roles a₁, a₂ (Alice) and b₁, b₂ (Bob).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PairingLayout {
    pub a1: usize,
    pub a2: usize,
    pub b1: usize,
    pub b2: usize,
}

impl PairingLayout {
    pub fn new(a1: usize, a2: usize, b1: usize, b2: usize) -> Result<Self> {
        let layout = Self { a1, a2, b1, b2 };
        let q = layout.qubits();
        for i in 0..4 {
            for j in i + 1..4 {
                if q[i] == q[j] {
                    return Err(Error::InvalidLayout(format!("qubit {} used twice", q[i])));
                }
            }
        }
        Ok(layout)
    }

    /// a₁=0, a₂=1, b₁=2, b₂=3.
    pub fn canonical() -> Self {
        Self {
            a1: 0,
            a2: 1,
            b1: 2,
            b2: 3,
        }
    }

    pub fn qubits(&self) -> [usize; 4] {
        [self.a1, self.a2, self.b1, self.b2]
    }

    /// Exchanges the roles (a₁↔a₂, b₁↔b₂).
    pub fn swapped(&self) -> Self {
        Self {
            a1: self.a2,
            a2: self.a1,
            b1: self.b2,
            b2: self.b1,
        }
    }

    /// Alice's side `{a₁, a₂}`.
    pub fn alice(&self) -> SubsystemMask {
        SubsystemMask::from_unsorted(vec![self.a1, self.a2]).expect("layout qubits are distinct")
    }

    pub(crate) fn check(&self, psi: &PureState) -> Result<()> {
        if psi.n_qubits() != 4 {
            return Err(Error::InvalidArgument(format!(
                "residuals need a 4-qubit state, got {} qubits",
                psi.n_qubits()
            )));
        }
        // new() already rejects duplicates; fields are public so recheck here.
        Self::new(self.a1, self.a2, self.b1, self.b2)?;
        match self.qubits().into_iter().find(|&q| q >= 4) {
            Some(q) => Err(Error::InvalidLayout(format!("qubit {q} out of range"))),
            None => Ok(()),
        }
    }
}

impl Default for PairingLayout {
    fn default() -> Self {
        Self::canonical()
    }
}

/// Every term of the superadditivity and second-order monogamy inequalities
/// for one state at one α.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub alpha: Alpha,
    pub e_bipartite: f64,
    pub e_a1b1: f64,
    pub e_a2b2: f64,
    pub e_a1b2: f64,
    pub e_a2b1: f64,
    pub ss_residual: f64,
    pub monogamy_residual: f64,
}

impl ResidualReport {
    /// Largest absolute difference between corresponding fields.
    pub fn max_deviation(&self, other: &ResidualReport) -> f64 {
        [
            self.alpha.value() - other.alpha.value(),
            self.e_bipartite - other.e_bipartite,
            self.e_a1b1 - other.e_a1b1,
            self.e_a2b2 - other.e_a2b2,
            self.e_a1b2 - other.e_a1b2,
            self.e_a2b1 - other.e_a2b1,
            self.ss_residual - other.ss_residual,
            self.monogamy_residual - other.monogamy_residual,
        ]
        .into_iter()
        .fold(0.0, |acc, d| acc.max(d.abs()))
    }
}

fn log2_sum_over_one_minus_alpha(sum: f64, alpha: f64) -> f64 {
    sum.log2() / (1.0 - alpha)
}

/// Rényi entropy of a spectrum (entries assumed clamped to `>= 0`).
pub fn renyi_of_spectrum(spectrum: &[f64], alpha: Alpha) -> f64 {
    if alpha.is_one() {
        -spectrum
            .iter()
            .filter(|&&l| l > 0.0)
            .map(|&l| l * l.log2())
            .sum::<f64>()
    } else {
        log2_sum_over_one_minus_alpha(spectrum_power(spectrum, alpha.value()), alpha.value())
    }
    .max(0.0)
}

/// Rényi α-entropy of a density matrix in bits.
pub fn renyi_entropy(rho: &DensityMatrix, alpha: Alpha) -> Result<f64> {
    Ok(renyi_of_spectrum(&hermitian_eigenvalues(rho)?, alpha))
}

fn sigma_y_sigma_y() -> DMatrix<Complex64> {
    let mut s = DMatrix::zeros(4, 4);
    s[(0, 3)] = Complex64::new(-1.0, 0.0);
    s[(1, 2)] = Complex64::new(1.0, 0.0);
    s[(2, 1)] = Complex64::new(1.0, 0.0);
    s[(3, 0)] = Complex64::new(-1.0, 0.0);
    s
}

/// Concurrence from any factor `M` with `rho = M M^†` (M has four rows).
///
/// The square roots of the eigenvalues of `rho * rho~` are the singular values
/// of the complex-symmetric matrix `tau = M^T (σy⊗σy) M`; taking them from an
/// SVD keeps small values accurate to machine precision rather than to its
/// square root.
pub(crate) fn concurrence_from_factor(m: &DMatrix<Complex64>) -> Result<f64> {
    debug_assert_eq!(m.nrows(), 4);
    if m.ncols() > 4 {
        let (values, vectors) = hermitian_eigen(m * m.adjoint());
        return concurrence_from_eigen(&values, &vectors);
    }
    let tau = m.transpose() * sigma_y_sigma_y() * m;
    let mut roots: Vec<f64> = tau.singular_values().iter().copied().collect();
    roots.sort_by(|a, b| b.total_cmp(a));
    roots.resize(4, 0.0);
    Ok((roots[0] - roots[1] - roots[2] - roots[3]).clamp(0.0, 1.0))
}

fn concurrence_from_eigen(values: &[f64], vectors: &DMatrix<Complex64>) -> Result<f64> {
    let mut factor = vectors.clone();
    for (c, &v) in values.iter().enumerate() {
        if v < -PSD_TOL {
            return Err(Error::NotPositive(v));
        }
        let s = Complex64::new(v.max(0.0).sqrt(), 0.0);
        for r in 0..factor.nrows() {
            factor[(r, c)] *= s;
        }
    }
    concurrence_from_factor(&factor)
}

/// Two-qubit concurrence via the spin-flip construction.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            actual: rho.dim(),
        });
    }
    let (values, vectors) = hermitian_eigen(rho.entries().clone());
    concurrence_from_eigen(&values, &vectors)
}

/// Concurrence of the reduced state of qubits `i` and `j`.
pub fn pair_concurrence(psi: &PureState, i: usize, j: usize) -> Result<f64> {
    if i == j {
        return Err(Error::InvalidArgument(format!(
            "pair needs two distinct qubits, got ({i}, {j})"
        )));
    }
    let mask = SubsystemMask::from_unsorted(vec![i, j])?;
    concurrence_from_factor(&bipartite_factor(psi, &mask)?)
}

/// Two-qubit Rényi measure as a function of the concurrence.
pub fn renyi_from_concurrence(c: f64, alpha: Alpha) -> Result<f64> {
    if !(-UNIT_INTERVAL_TOL..=1.0 + UNIT_INTERVAL_TOL).contains(&c) {
        return Err(Error::OutOfUnitInterval(c));
    }
    let c = c.clamp(0.0, 1.0);
    let root = (1.0 - c * c).sqrt();
    // 1 - x written without cancellation for small c.
    let small = c * c / (2.0 * (1.0 + root));
    let large = 1.0 - small;
    Ok(renyi_of_spectrum(&[large, small], alpha))
}

/// Rényi measure between qubits `i` and `j` of a pure state.
pub fn pair_entanglement(psi: &PureState, i: usize, j: usize, alpha: Alpha) -> Result<f64> {
    renyi_from_concurrence(pair_concurrence(psi, i, j)?, alpha)
}

/// Entanglement across the cut `partition_a | rest` of a pure state.
pub fn bipartite_pure_entanglement(psi: &PureState, partition_a: &SubsystemMask, alpha: Alpha) -> Result<f64> {
    let n = psi.n_qubits();
    if partition_a.len() >= n {
        return Err(Error::InvalidArgument("partition must be a proper subset".into()));
    }
    Ok(renyi_of_spectrum(&reduced_spectrum(psi, partition_a)?, alpha))
}

/// Spectrum of the reduction on `mask`, computed on whichever side of the cut
/// is smaller (the nonzero parts agree).
pub fn reduced_spectrum(psi: &PureState, mask: &SubsystemMask) -> Result<Vec<f64>> {
    let m = bipartite_factor(psi, mask)?;
    let gram = if m.nrows() <= m.ncols() {
        &m * m.adjoint()
    } else {
        m.adjoint() * &m
    };
    let mut spectrum = psd_eigenvalues(gram)?;
    spectrum.resize(m.nrows(), 0.0);
    Ok(spectrum)
}

/// Full residual report for a 4-qubit pure state.
pub fn residual_report(psi: &PureState, layout: &PairingLayout, alpha: Alpha) -> Result<ResidualReport> {
    layout.check(psi)?;
    let e_bipartite = bipartite_pure_entanglement(psi, &layout.alice(), alpha)?;
    let e_a1b1 = pair_entanglement(psi, layout.a1, layout.b1, alpha)?;
    let e_a2b2 = pair_entanglement(psi, layout.a2, layout.b2, alpha)?;
    let e_a1b2 = pair_entanglement(psi, layout.a1, layout.b2, alpha)?;
    let e_a2b1 = pair_entanglement(psi, layout.a2, layout.b1, alpha)?;
    let ss_residual = e_bipartite - e_a1b1 - e_a2b2;
    Ok(ResidualReport {
        alpha,
        e_bipartite,
        e_a1b1,
        e_a2b2,
        e_a1b2,
        e_a2b1,
        ss_residual,
        monogamy_residual: ss_residual - e_a1b2 - e_a2b1,
    })
}

/// `E(a₁a₂|b₁b₂) − E(a₁b₁) − E(a₂b₂)` and the other terms. Negative
/// `ss_residual` certifies a superadditivity violation.
pub fn ss_residual(psi: &PureState, layout: &PairingLayout, alpha: Alpha) -> Result<ResidualReport> {
    residual_report(psi, layout, alpha)
}

/// Same report; the relevant field is `monogamy_residual`, which also
/// subtracts the cross pairs a₁b₂ and a₂b₁.
pub fn monogamy2_residual(psi: &PureState, layout: &PairingLayout, alpha: Alpha) -> Result<ResidualReport> {
    residual_report(psi, layout, alpha)
}

/// Superadditivity residual alone; skips the cross-pair terms.
pub fn ss_value(psi: &PureState, layout: &PairingLayout, alpha: Alpha) -> Result<f64> {
    layout.check(psi)?;
    Ok(bipartite_pure_entanglement(psi, &layout.alice(), alpha)?
        - pair_entanglement(psi, layout.a1, layout.b1, alpha)?
        - pair_entanglement(psi, layout.a2, layout.b2, alpha)?)
}

fn r2_from_concurrence_squared(c2: f64) -> f64 {
    // -log2((2 - C^2) / 2)
    -(-c2 / 2.0).ln_1p() / std::f64::consts::LN_2
}

/// `R₂(focus | rest) − Σ_i R₂(ρ_{focus,i})` for an n-qubit pure state.
pub fn ckw_r2_residual(psi: &PureState, focus: usize) -> Result<f64> {
    let n = psi.n_qubits();
    if n < 3 {
        return Err(Error::QubitCount(n));
    }
    if focus >= n {
        return Err(Error::QubitOutOfRange {
            index: focus,
            n_qubits: n,
        });
    }
    let spectrum = reduced_spectrum(psi, &SubsystemMask::new(vec![focus])?)?;
    let purity: f64 = spectrum.iter().map(|l| l * l).sum();
    let whole = r2_from_concurrence_squared(2.0 * (1.0 - purity));
    let mut pairs = 0.0;
    for other in (0..n).filter(|&q| q != focus) {
        let c = pair_concurrence(psi, focus, other)?;
        pairs += r2_from_concurrence_squared(c * c);
    }
    Ok(whole - pairs)
}

/// `−log2((2 − ΣC²)/2) + Σ log2((2 − C²)/2)` for squared concurrences with
/// each entry in `[0, 1]` and total at most one.
pub fn sum_inequality_residual(c_squared: &[f64]) -> Result<f64> {
    let mut total = 0.0;
    for &c2 in c_squared {
        if !(-UNIT_INTERVAL_TOL..=1.0 + UNIT_INTERVAL_TOL).contains(&c2) {
            return Err(Error::OutOfUnitInterval(c2));
        }
        total += c2.clamp(0.0, 1.0);
    }
    if total > 1.0 + UNIT_INTERVAL_TOL {
        return Err(Error::OutOfUnitInterval(total));
    }
    let lhs = r2_from_concurrence_squared(total.min(1.0));
    let rhs: f64 = c_squared
        .iter()
        .map(|&c2| r2_from_concurrence_squared(c2.clamp(0.0, 1.0)))
        .sum();
    Ok(lhs - rhs)
}

/// The six pairwise entanglements of a four-qubit state, labelled by role.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairEntanglements {
    pub a1a2: f64,
    pub a1b1: f64,
    pub a1b2: f64,
    pub a2b1: f64,
    pub a2b2: f64,
    pub b1b2: f64,
}

/// Invariant summary used to recognise an optimum without comparing
/// amplitudes: reduced spectra plus pairwise entanglements.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateFingerprint {
    pub alpha: Alpha,
    pub spectrum_a1a2: Vec<f64>,
    pub spectrum_a1b1: Vec<f64>,
    pub spectrum_a2b2: Vec<f64>,
    pub pairs: PairEntanglements,
    pub e_bipartite: f64,
}

pub fn fingerprint(psi: &PureState, layout: &PairingLayout, alpha: Alpha) -> Result<StateFingerprint> {
    layout.check(psi)?;
    let spec = |i: usize, j: usize| reduced_spectrum(psi, &SubsystemMask::from_unsorted(vec![i, j])?);
    let pair = |i: usize, j: usize| pair_entanglement(psi, i, j, alpha);
    let PairingLayout { a1, a2, b1, b2 } = *layout;
    Ok(StateFingerprint {
        alpha,
        spectrum_a1a2: spec(a1, a2)?,
        spectrum_a1b1: spec(a1, b1)?,
        spectrum_a2b2: spec(a2, b2)?,
        pairs: PairEntanglements {
            a1a2: pair(a1, a2)?,
            a1b1: pair(a1, b1)?,
            a1b2: pair(a1, b2)?,
            a2b1: pair(a2, b1)?,
            a2b2: pair(a2, b2)?,
            b1b2: pair(b1, b2)?,
        },
        e_bipartite: bipartite_pure_entanglement(psi, &layout.alice(), alpha)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::partial_trace;
    use crate::states;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol:e})");
    }

    #[test]
    fn alpha_snaps_and_rejects() {
        assert!(Alpha::new(1.0 + 1e-10).unwrap().is_one());
        assert!(Alpha::new(1.0 - 1e-10).unwrap().is_one());
        assert!(!Alpha::new(1.0 + 1e-6).unwrap().is_one());
        assert!(Alpha::new(0.5).is_err());
        assert!(Alpha::new(f64::NAN).is_err());
    }

    #[test]
    fn layout_rejects_duplicates() {
        assert!(PairingLayout::new(0, 1, 1, 3).is_err());
        let psi = states::bell_pairs_02_13();
        let bad = PairingLayout::new(0, 1, 2, 4).unwrap();
        assert!(residual_report(&psi, &bad, Alpha::TWO).is_err());
    }

    #[test]
    fn concurrence_examples() {
        let bell = states::bell_phi_plus().to_density_matrix();
        close(concurrence(&bell).unwrap(), 1.0, 1e-12);
        let zero = PureState::basis(2, 0).unwrap().to_density_matrix();
        close(concurrence(&zero).unwrap(), 0.0, 1e-12);
        let werner = states::werner(0.5).unwrap();
        close(concurrence(&werner).unwrap(), 0.25, 1e-12);
        assert!(concurrence(&DensityMatrix::maximally_mixed(2).unwrap()).is_err());
    }

    #[test]
    fn renyi_entropy_examples() {
        let half = DensityMatrix::maximally_mixed(2).unwrap();
        close(renyi_entropy(&half, Alpha::TWO).unwrap(), 1.0, 1e-15);
        let diag = DensityMatrix::from_diagonal(&[0.66, 0.14, 0.14, 0.06]).unwrap();
        let r2 = renyi_entropy(&diag, Alpha::TWO).unwrap();
        close(r2, -(0.4784f64).log2(), 1e-14);
        close(r2, 1.0637, 5e-5);
        let pure = states::ghz(3).to_density_matrix();
        for a in [1.0, 1.5, 2.0, 5.0] {
            close(renyi_entropy(&pure, Alpha::new(a).unwrap()).unwrap(), 0.0, 1e-12);
        }
        close(renyi_entropy(&half, Alpha::ONE).unwrap(), 1.0, 1e-15);
    }

    #[test]
    fn renyi_from_concurrence_examples() {
        close(renyi_from_concurrence(1.0, Alpha::TWO).unwrap(), 1.0, 1e-15);
        for a in [1.0, 1.5, 2.0, 4.0] {
            close(renyi_from_concurrence(0.0, Alpha::new(a).unwrap()).unwrap(), 0.0, 0.0);
        }
        // x = 0.9: x^2 + (1-x)^2 = 0.82
        close(
            renyi_from_concurrence(0.6, Alpha::TWO).unwrap(),
            -(0.82f64).log2(),
            1e-14,
        );
        close(renyi_from_concurrence(0.6, Alpha::TWO).unwrap(), 0.28630, 1e-4);
        assert!(renyi_from_concurrence(1.1, Alpha::TWO).is_err());
        assert!(renyi_from_concurrence(-0.1, Alpha::TWO).is_err());
    }

    #[test]
    fn pair_and_bipartite_examples() {
        let psi = states::bell_pairs_02_13();
        for a in [1.0, 1.5, 2.0] {
            let alpha = Alpha::new(a).unwrap();
            close(pair_entanglement(&psi, 0, 2, alpha).unwrap(), 1.0, 1e-12);
            close(pair_entanglement(&psi, 0, 3, alpha).unwrap(), 0.0, 1e-12);
            let alice = SubsystemMask::new(vec![0, 1]).unwrap();
            close(bipartite_pure_entanglement(&psi, &alice, alpha).unwrap(), 2.0, 1e-12);
            let product = PureState::basis(4, 0).unwrap();
            close(
                bipartite_pure_entanglement(&product, &alice, alpha).unwrap(),
                0.0,
                1e-12,
            );
        }
        assert!(pair_entanglement(&psi, 1, 1, Alpha::TWO).is_err());
        let everything = SubsystemMask::new(vec![0, 1, 2, 3]).unwrap();
        assert!(bipartite_pure_entanglement(&psi, &everything, Alpha::TWO).is_err());
    }

    #[test]
    fn pair_path_matches_density_matrix_path() {
        let psi = PureState::normalized(
            (0..16)
                .map(|k| Complex64::new((0.7 * k as f64).sin(), (1.3 * k as f64 + 0.2).cos()))
                .collect(),
        )
        .unwrap();
        for (i, j) in [(0, 1), (0, 3), (1, 2), (2, 3)] {
            let rho = partial_trace(&psi, &SubsystemMask::new(vec![i, j]).unwrap()).unwrap();
            close(pair_concurrence(&psi, i, j).unwrap(), concurrence(&rho).unwrap(), 1e-12);
        }
    }

    #[test]
    fn residual_examples() {
        let layout = PairingLayout::canonical();
        let bell = states::bell_pairs_02_13();
        let r = ss_residual(&bell, &layout, Alpha::TWO).unwrap();
        close(r.ss_residual, 0.0, 1e-12);
        close(r.monogamy_residual, 0.0, 1e-12);

        let ghz = states::ghz(4);
        let r = monogamy2_residual(&ghz, &layout, Alpha::TWO).unwrap();
        close(r.e_bipartite, 1.0, 1e-12);
        close(r.ss_residual, 1.0, 1e-12);
        close(r.monogamy_residual, 1.0, 1e-12);

        close(ss_value(&ghz, &layout, Alpha::TWO).unwrap(), r.ss_residual, 1e-15);
        assert!(ss_residual(&states::ghz(3), &layout, Alpha::TWO).is_err());
    }

    #[test]
    fn ckw_examples() {
        close(ckw_r2_residual(&states::ghz(3), 0).unwrap(), 1.0, 1e-12);
        // log2(9/5) - 2 log2(9/7) = log2(441/405)
        let w = ckw_r2_residual(&states::w3(), 0).unwrap();
        close(w, (441.0f64 / 405.0).log2(), 1e-12);
        close(w, 0.1229, 1e-4);
        close(
            ckw_r2_residual(&PureState::basis(4, 5).unwrap(), 2).unwrap(),
            0.0,
            1e-12,
        );
        assert!(ckw_r2_residual(&states::bell_phi_plus(), 0).is_err());
    }

    #[test]
    fn sum_inequality_examples() {
        close(sum_inequality_residual(&[1.0]).unwrap(), 0.0, 1e-15);
        let expected = 1.0 + 2.0 * (0.75f64).log2();
        close(sum_inequality_residual(&[0.5, 0.5]).unwrap(), expected, 1e-15);
        close(expected, 0.16992, 1e-5);
        close(sum_inequality_residual(&[0.0, 0.0, 0.0]).unwrap(), 0.0, 0.0);
        assert!(sum_inequality_residual(&[0.7, 0.7]).is_err());
        assert!(sum_inequality_residual(&[-0.2]).is_err());
    }

    #[test]
    fn two_qubit_pure_concurrence_formula() {
        // 2|ad - bc| with a=0.5, b=0.5i, c=-0.5, d=0.5
        let amps = vec![c(0.5), Complex64::new(0.0, 0.5), c(-0.5), c(0.5)];
        let psi = PureState::new(amps.clone()).unwrap();
        let oracle = 2.0 * (amps[0] * amps[3] - amps[1] * amps[2]).norm();
        close(concurrence(&psi.to_density_matrix()).unwrap(), oracle, 1e-12);
    }
}
