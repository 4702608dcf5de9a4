//! Brute-force references that share no code with the enumeration pipeline:
//! dense Hamiltonian spectra, exhaustive Ising sums and the transfer-matrix
//! closed form of the periodic chain.

use faer::{Mat, Side};
use stabtherm_core::{CssModel, Error, IsingModel, PauliOp, Result};

/// Largest model the dense oracle will build (a 4096 × 4096 matrix).
pub const MAX_DENSE_QUBITS: usize = 12;
/// Largest Ising model summed configuration by configuration.
pub const MAX_BRUTE_SPINS: usize = 24;

fn mask(bits: impl Iterator<Item = usize>) -> usize {
    bits.fold(0, |m, q| m | (1 << q))
}

/// `−Σ coupling · P` as a dense real symmetric matrix.
///
/// Basis state `j` has qubit `q` in `|1⟩` iff bit `q` of `j` is set. Each
/// term is `X` on its x support times `Z` on its z support; the two supports
/// must be disjoint so that the term is real and Hermitian.
pub fn dense_hamiltonian(n_qubits: usize, terms: &[(f64, PauliOp)]) -> Result<Mat<f64>> {
    if n_qubits > MAX_DENSE_QUBITS {
        return Err(Error::CapExceeded {
            what: "dense oracle qubit count",
            requested: n_qubits as u64,
            cap: MAX_DENSE_QUBITS as u64,
            suggestion: "use the constraint-enumerator partition function instead",
        });
    }
    let dim = 1usize << n_qubits;
    let mut h = Mat::<f64>::zeros(dim, dim);
    for (coupling, op) in terms {
        if op.n_qubits() != n_qubits {
            return Err(Error::InvalidInput(format!(
                "term acts on {} qubits, expected {n_qubits}",
                op.n_qubits()
            )));
        }
        let x = mask(op.x_mask().iter_ones());
        let z = mask(op.z_mask().iter_ones());
        if x & z != 0 {
            return Err(Error::InvalidInput(format!(
                "term {op} contains a Y factor; the dense oracle handles real terms only"
            )));
        }
        for j in 0..dim {
            let sign = if (j & z).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            h.write(j ^ x, j, h.read(j ^ x, j) - coupling * sign);
        }
    }
    Ok(h)
}

fn model_terms(m: &CssModel) -> Vec<(f64, PauliOp)> {
    let a = m.a_ops().into_iter().map(|p| (m.coupling_a(), p));
    let b = m.b_ops().into_iter().map(|p| (m.coupling_b(), p));
    a.chain(b).collect()
}

/// Full spectrum of a small Hamiltonian.
#[derive(Clone, Debug)]
pub struct DenseSpectrum {
    pub n_qubits: usize,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// `max_i ‖H v_i − λ_i v_i‖` over the computed eigenpairs.
    pub max_residual: f64,
}

impl DenseSpectrum {
    /// Diagonalizes a real symmetric matrix (only its lower triangle is read).
    pub fn of_matrix(n_qubits: usize, h: &Mat<f64>) -> Self {
        let eig = h.selfadjoint_eigendecomposition(Side::Lower);
        let (u, s) = (eig.u(), eig.s().column_vector());
        let residual = h * u - u * eig.s();
        let max_residual = (0..residual.ncols())
            .map(|k| residual.col(k).norm_l2())
            .fold(0.0, f64::max);
        let mut eigenvalues: Vec<f64> = (0..s.nrows()).map(|i| s.read(i)).collect();
        eigenvalues.sort_by(f64::total_cmp);
        DenseSpectrum {
            n_qubits,
            eigenvalues,
            max_residual,
        }
    }

    pub fn of_model(m: &CssModel) -> Result<Self> {
        let h = dense_hamiltonian(m.n_qubits(), &model_terms(m))?;
        Ok(Self::of_matrix(m.n_qubits(), &h))
    }

    /// `ln Σ_i e^{−β λ_i}`.
    pub fn log_trace(&self, beta: f64) -> f64 {
        log_sum_exp(self.eigenvalues.iter().map(|&l| -beta * l))
    }
}

/// `ln Tr e^{−βH}` by full diagonalization of the dense Hamiltonian.
pub fn dense_log_trace(m: &CssModel, beta: f64) -> Result<f64> {
    Ok(DenseSpectrum::of_model(m)?.log_trace(beta))
}

fn log_sum_exp(values: impl Iterator<Item = f64> + Clone) -> f64 {
    let max = values.clone().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + values.map(|v| (v - max).exp()).sum::<f64>().ln()
}

/// `ln Σ_s e^{βJ Σ_bonds s_i s_j}` over all `2^n` configurations.
pub fn ising_brute_log_z(ising: &IsingModel, beta: f64) -> Result<f64> {
    let n = ising.n_spins();
    if n > MAX_BRUTE_SPINS {
        return Err(Error::CapExceeded {
            what: "brute-force Ising spin count",
            requested: n as u64,
            cap: MAX_BRUTE_SPINS as u64,
            suggestion: "use the transfer-matrix form for chains or a series comparison",
        });
    }
    // Histogram of Σ s_i s_j first, then one log-sum-exp over its support.
    let bonds = ising.bonds();
    let mut by_alignment = vec![0u64; 2 * bonds.len() + 1];
    for config in 0u64..(1u64 << n) {
        let unequal = bonds
            .iter()
            .filter(|&&(i, j)| ((config >> i) ^ (config >> j)) & 1 == 1)
            .count();
        by_alignment[2 * (bonds.len() - unequal)] += 1;
    }
    let k = beta * ising.coupling();
    let offset = bonds.len() as f64;
    Ok(log_sum_exp(
        by_alignment
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(twice, &c)| (c as f64).ln() + k * (twice as f64 - offset)),
    ))
}

/// `ln[(2 cosh βJ)^L + (2 sinh βJ)^L]` for the periodic chain of `L` spins.
pub fn ising_chain_closed(l: usize, coupling: f64, beta: f64) -> Result<f64> {
    if l == 0 {
        return Err(Error::InvalidInput("a chain needs at least one site".into()));
    }
    let k = beta * coupling;
    let l = l as f64;
    // ln(2 cosh k) and ln(2|sinh k|) without overflow.
    let ln_2cosh = k.abs() + (-2.0 * k.abs()).exp().ln_1p();
    let ln_2sinh = k.abs() + (-(-2.0 * k.abs()).exp_m1()).ln();
    let big = l * ln_2cosh;
    if k == 0.0 {
        return Ok(big);
    }
    // The sinh term is smaller in magnitude; its sign is that of k^L.
    let ratio = (l * ln_2sinh - big).exp();
    let negative = k < 0.0 && (l as u64) % 2 == 1;
    Ok(big + if negative { (-ratio).ln_1p() } else { ratio.ln_1p() })
}
