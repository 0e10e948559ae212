//! Named reference states.

use num_complex::Complex64;

use crate::error::Result;
use crate::linalg::{DensityMatrix, PureState};

fn real(values: &[f64]) -> Vec<Complex64> {
    values.iter().map(|&v| Complex64::new(v, 0.0)).collect()
}

/// `(|00> + |11>)/√2`.
pub fn bell_phi_plus() -> PureState {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    PureState::new(real(&[h, 0.0, 0.0, h])).expect("normalized")
}

/// Singlet `(|01> - |10>)/√2`.
pub fn singlet() -> PureState {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    PureState::new(real(&[0.0, h, -h, 0.0])).expect("normalized")
}

/// Bell pairs on qubits (0,2) and (1,3) of a four-qubit register.
pub fn bell_pairs_02_13() -> PureState {
    bell_phi_plus()
        .tensor(&bell_phi_plus())
        .and_then(|s| s.permute_qubits(&[0, 2, 1, 3]))
        .expect("four qubits")
}

/// `(|0…0> + |1…1>)/√2`.
pub fn ghz(n_qubits: usize) -> PureState {
    let dim = 1usize << n_qubits;
    let mut amps = vec![0.0; dim];
    amps[0] = std::f64::consts::FRAC_1_SQRT_2;
    amps[dim - 1] = std::f64::consts::FRAC_1_SQRT_2;
    PureState::new(real(&amps)).expect("normalized")
}

/// `(|001> + |010> + |100>)/√3`.
pub fn w3() -> PureState {
    let t = 1.0 / 3f64.sqrt();
    PureState::new(real(&[0.0, t, t, 0.0, t, 0.0, 0.0, 0.0])).expect("normalized")
}

/// Werner state `p |Ψ⁻><Ψ⁻| + (1-p) I/4`.
pub fn werner(p: f64) -> Result<DensityMatrix> {
    singlet()
        .to_density_matrix()
        .mix(&DensityMatrix::maximally_mixed(4)?, p)
}
