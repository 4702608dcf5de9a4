//! Concrete CSS stabilizer Hamiltonians and classical Ising models.
//!
//! Every lattice model here is periodic. Lattice cells are indexed with the
//! same scheme as [`HypercubicComplex`], so generator supports can be compared
//! directly against boundary matrices.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::complex::HypercubicComplex;
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};
use crate::pauli::PauliOp;

/// The Hamiltonian `H = −a Σ_r A_r − b Σ_s B_s` with `A_r` products of `σ^x`
/// and `B_s` products of `σ^z`.
#[derive(Clone, Debug)]
pub struct CssModel {
    n_qubits: usize,
    a_gens: BitMatrix,
    b_gens: BitMatrix,
    coupling_a: f64,
    coupling_b: f64,
    label: String,
}

impl CssModel {
    /// Rows of `a_gens` are X-type supports, rows of `b_gens` Z-type supports.
    ///
    /// Generators whose support cancelled to nothing are rejected: they would
    /// silently change the generator counts in the partition function.
    pub fn new(
        label: impl Into<String>,
        n_qubits: usize,
        a_gens: BitMatrix,
        b_gens: BitMatrix,
    ) -> Result<Self> {
        let label = label.into();
        for (side, m) in [("A", &a_gens), ("B", &b_gens)] {
            if m.cols() != n_qubits {
                return Err(Error::invalid(alloc::format!(
                    "{label}: {side} generators have {} columns for {n_qubits} qubits",
                    m.cols()
                )));
            }
            if let Some(r) = (0..m.rows()).find(|&r| m.row(r).is_zero()) {
                return Err(Error::invalid(alloc::format!(
                    "{label}: {side} generator {r} cancels to the identity"
                )));
            }
        }
        Ok(CssModel {
            n_qubits,
            a_gens,
            b_gens,
            coupling_a: 1.0,
            coupling_b: 1.0,
            label,
        })
    }

    pub fn with_couplings(mut self, a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite() && b > 0.0 && b.is_finite()) {
            return Err(Error::invalid(alloc::format!(
                "couplings must be positive and finite, got a={a}, b={b}"
            )));
        }
        self.coupling_a = a;
        self.coupling_b = b;
        Ok(self)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn a_gens(&self) -> &BitMatrix {
        &self.a_gens
    }

    pub fn b_gens(&self) -> &BitMatrix {
        &self.b_gens
    }

    pub fn coupling_a(&self) -> f64 {
        self.coupling_a
    }

    pub fn coupling_b(&self) -> f64 {
        self.coupling_b
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn a_ops(&self) -> Vec<PauliOp> {
        self.a_gens
            .row_vectors()
            .iter()
            .map(|r| PauliOp::x_type(self.n_qubits, r.iter_ones()))
            .collect()
    }

    pub fn b_ops(&self) -> Vec<PauliOp> {
        self.b_gens
            .row_vectors()
            .iter()
            .map(|r| PauliOp::z_type(self.n_qubits, r.iter_ones()))
            .collect()
    }

    /// The model with the roles of the two sides exchanged: X-type
    /// generators become Z-type and vice versa, couplings follow.
    pub fn swapped(&self) -> CssModel {
        CssModel {
            n_qubits: self.n_qubits,
            a_gens: self.b_gens.clone(),
            b_gens: self.a_gens.clone(),
            coupling_a: self.coupling_b,
            coupling_b: self.coupling_a,
            label: alloc::format!("{} (swapped)", self.label),
        }
    }

    /// The same model with its qubits relabelled by `perm` (qubit `q` moves
    /// to `perm[q]`).
    pub fn relabelled(&self, perm: &[usize]) -> Result<CssModel> {
        if perm.len() != self.n_qubits {
            return Err(Error::invalid("permutation length differs from qubit count"));
        }
        let map = |m: &BitMatrix| -> Result<BitMatrix> {
            let rows = m
                .row_vectors()
                .iter()
                .map(|r| BitVector::from_indices(self.n_qubits, r.iter_ones().map(|q| perm[q])))
                .collect();
            BitMatrix::from_rows(self.n_qubits, rows)
        };
        Ok(CssModel {
            a_gens: map(&self.a_gens)?,
            b_gens: map(&self.b_gens)?,
            ..self.clone()
        })
    }
}

/// True iff every X-type generator overlaps every Z-type generator on an
/// even number of qubits.
pub fn css_validate(m: &CssModel) -> bool {
    if m.a_gens.rows() == 0 || m.b_gens.rows() == 0 {
        return true;
    }
    m.a_gens
        .mul(&m.b_gens.transpose())
        .map(|p| p.is_zero())
        .unwrap_or(false)
}

fn check_size(l: usize) -> Result<()> {
    if l < 2 {
        return Err(Error::invalid(alloc::format!(
            "linear size must be at least 2, got {l}"
        )));
    }
    Ok(())
}

/// Link-qubit toric code on `Z_L^D`: stars on vertices, plaquettes on faces.
fn toric_links(dim: usize, l: usize, label: String) -> Result<CssModel> {
    check_size(l)?;
    let cx = HypercubicComplex::new(dim, l)?;
    let n = cx.n_cells(1);
    let stars = (0..cx.n_vertices())
        .map(|v| {
            BitVector::from_indices(
                n,
                (0..dim).flat_map(|d| {
                    [cx.cell_index(v, &[d]), cx.cell_index(cx.shift(v, d, -1), &[d])]
                }),
            )
        })
        .collect();
    let mut plaquettes = Vec::with_capacity(cx.n_cells(2));
    for v in 0..cx.n_vertices() {
        for dirs in cx.direction_sets(2) {
            let (d, e) = (dirs[0], dirs[1]);
            plaquettes.push(BitVector::from_indices(
                n,
                [
                    cx.cell_index(v, &[d]),
                    cx.cell_index(cx.shift(v, e, 1), &[d]),
                    cx.cell_index(v, &[e]),
                    cx.cell_index(cx.shift(v, d, 1), &[e]),
                ],
            ));
        }
    }
    CssModel::new(
        label,
        n,
        BitMatrix::from_rows(n, stars)?,
        BitMatrix::from_rows(n, plaquettes)?,
    )
}

/// 2D toric code: `2L²` link qubits, weight-4 stars and plaquettes.
pub fn build_toric_2d(l: usize) -> Result<CssModel> {
    toric_links(2, l, alloc::format!("toric2d L={l}"))
}

/// 3D toric code: `3L³` link qubits, weight-6 stars, weight-4 plaquettes.
pub fn build_toric_3d(l: usize) -> Result<CssModel> {
    toric_links(3, l, alloc::format!("toric3d L={l}"))
}

/// 4D toric code with qubits on the `6L⁴` plaquettes.
///
/// `A_ℓ` acts on the six plaquettes whose boundary contains the link `ℓ`;
/// `B_c` acts on the six plaquettes bounding the cube `c`.
pub fn build_toric_4d(l: usize) -> Result<CssModel> {
    check_size(l)?;
    let cx = HypercubicComplex::new(4, l)?;
    let n = cx.n_cells(2);
    let mut a_rows = Vec::with_capacity(cx.n_cells(1));
    for v in 0..cx.n_vertices() {
        for d in 0..4 {
            let mut support = Vec::with_capacity(6);
            for e in (0..4).filter(|&e| e != d) {
                let plane = if d < e { [d, e] } else { [e, d] };
                support.push(cx.cell_index(v, &plane));
                support.push(cx.cell_index(cx.shift(v, e, -1), &plane));
            }
            a_rows.push(BitVector::from_indices(n, support));
        }
    }
    let mut b_rows = Vec::with_capacity(cx.n_cells(3));
    for v in 0..cx.n_vertices() {
        for cube in cx.direction_sets(3) {
            let mut support = Vec::with_capacity(6);
            for &g in cube {
                let face: Vec<usize> = cube.iter().copied().filter(|&h| h != g).collect();
                support.push(cx.cell_index(v, &face));
                support.push(cx.cell_index(cx.shift(v, g, 1), &face));
            }
            b_rows.push(BitVector::from_indices(n, support));
        }
    }
    CssModel::new(
        alloc::format!("toric4d L={l}"),
        n,
        BitMatrix::from_rows(n, a_rows)?,
        BitMatrix::from_rows(n, b_rows)?,
    )
}

/// Qubit index of the `σ` (species 0) or `τ` (species 1) qubit at a vertex
/// of Haah's code.
#[inline]
pub fn haah_qubit(vertex: usize, species: usize) -> usize {
    2 * vertex + species
}

/// Haah's cubic code: a `σ` and a `τ` qubit on every vertex of `Z_L³`.
pub fn build_haah(l: usize) -> Result<CssModel> {
    check_size(l)?;
    let cx = HypercubicComplex::new(3, l)?;
    let n = 2 * cx.n_vertices();
    let at = |v: usize, offset: [isize; 3]| -> usize {
        (0..3).fold(v, |w, d| cx.shift(w, d, offset[d]))
    };
    const SIGMA: usize = 0;
    const TAU: usize = 1;
    let a_terms: [(usize, [isize; 3]); 8] = [
        (SIGMA, [0, 0, 0]),
        (TAU, [0, 0, 0]),
        (TAU, [1, 0, 0]),
        (TAU, [0, 1, 0]),
        (TAU, [0, 0, 1]),
        (SIGMA, [1, 1, 0]),
        (SIGMA, [1, 0, 1]),
        (SIGMA, [0, 1, 1]),
    ];
    let b_terms: [(usize, [isize; 3]); 8] = [
        (TAU, [1, 0, 0]),
        (TAU, [0, 1, 0]),
        (TAU, [0, 0, 1]),
        (SIGMA, [1, 1, 0]),
        (SIGMA, [1, 0, 1]),
        (SIGMA, [0, 1, 1]),
        (SIGMA, [1, 1, 1]),
        (TAU, [1, 1, 1]),
    ];
    let rows = |terms: &[(usize, [isize; 3])]| -> Vec<BitVector> {
        (0..cx.n_vertices())
            .map(|v| {
                BitVector::from_indices(
                    n,
                    terms.iter().map(|&(s, off)| haah_qubit(at(v, off), s)),
                )
            })
            .collect()
    };
    CssModel::new(
        alloc::format!("haah L={l}"),
        n,
        BitMatrix::from_rows(n, rows(&a_terms))?,
        BitMatrix::from_rows(n, rows(&b_terms))?,
    )
}

/// The bond-algebra dual of a periodic Ising chain of `n` spins: `n` qubits on
/// a ring with X-type generators `X_i X_{i+1}` and no Z-type generators.
pub fn build_chain_css(n: usize) -> Result<CssModel> {
    if n < 3 {
        return Err(Error::invalid("a ring needs at least 3 sites"));
    }
    let rows = (0..n)
        .map(|i| BitVector::from_indices(n, [i, (i + 1) % n]))
        .collect();
    CssModel::new(
        alloc::format!("chain n={n}"),
        n,
        BitMatrix::from_rows(n, rows)?,
        BitMatrix::zeros(0, n),
    )
}

/// Classical Ising model `H = −J Σ_bonds s_i s_j`.
///
/// Bonds are a list, not a set: on an `L = 2` periodic lattice two distinct
/// links join the same pair of sites, and both are kept.
#[derive(Clone, Debug)]
pub struct IsingModel {
    n_spins: usize,
    bonds: Vec<(usize, usize)>,
    coupling: f64,
}

impl IsingModel {
    pub fn new(n_spins: usize, bonds: Vec<(usize, usize)>, coupling: f64) -> Result<Self> {
        if !(coupling > 0.0 && coupling.is_finite()) {
            return Err(Error::invalid(alloc::format!("coupling must be positive, got {coupling}")));
        }
        if let Some(&(i, j)) = bonds.iter().find(|&&(i, j)| i >= n_spins || j >= n_spins || i == j) {
            return Err(Error::invalid(alloc::format!(
                "bond ({i}, {j}) invalid for {n_spins} spins"
            )));
        }
        Ok(IsingModel {
            n_spins,
            bonds,
            coupling,
        })
    }

    pub fn n_spins(&self) -> usize {
        self.n_spins
    }

    pub fn bonds(&self) -> &[(usize, usize)] {
        &self.bonds
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn with_coupling(self, coupling: f64) -> Result<Self> {
        IsingModel::new(self.n_spins, self.bonds, coupling)
    }

    /// `−J · #bonds`, attained by both uniform configurations.
    pub fn ground_state_energy(&self) -> f64 {
        -self.coupling * self.bonds.len() as f64
    }
}

/// Nearest-neighbour Ising model on `Z_L^D` with one bond per lattice link,
/// in link-index order.
pub fn build_ising(dim: usize, l: usize) -> Result<IsingModel> {
    let cx = HypercubicComplex::new(dim, l)?;
    let bonds = (0..cx.n_vertices())
        .flat_map(|v| (0..dim).map(move |d| (v, d)))
        .map(|(v, d)| (v, cx.shift(v, d, 1)))
        .collect();
    IsingModel::new(cx.n_vertices(), bonds, 1.0)
}

/// The model families the builders cover.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModelKind {
    Toric2d,
    Toric3d,
    Toric4d,
    Haah,
    Ising,
}

impl ModelKind {
    pub const ALL: [ModelKind; 5] = [
        ModelKind::Toric2d,
        ModelKind::Toric3d,
        ModelKind::Toric4d,
        ModelKind::Haah,
        ModelKind::Ising,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::Toric2d => "toric2d",
            ModelKind::Toric3d => "toric3d",
            ModelKind::Toric4d => "toric4d",
            ModelKind::Haah => "haah",
            ModelKind::Ising => "ising",
        }
    }

    /// Lattice dimension `D`, used for the `L^D` volume normalization.
    pub fn lattice_dim(self) -> usize {
        match self {
            ModelKind::Toric2d => 2,
            ModelKind::Toric3d | ModelKind::Haah => 3,
            ModelKind::Toric4d => 4,
            ModelKind::Ising => 1,
        }
    }

    /// Builds the CSS model of this kind; `Ising` is not a CSS model.
    pub fn build_css(self, l: usize, a: f64, b: f64) -> Result<CssModel> {
        let m = match self {
            ModelKind::Toric2d => build_toric_2d(l)?,
            ModelKind::Toric3d => build_toric_3d(l)?,
            ModelKind::Toric4d => build_toric_4d(l)?,
            ModelKind::Haah => build_haah(l)?,
            ModelKind::Ising => {
                return Err(Error::invalid("the ising model is classical, not a CSS model"))
            }
        };
        m.with_couplings(a, b)
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ModelKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| {
                Error::InvalidInput(alloc::format!(
                    "unknown model {:?}; expected one of toric2d, toric3d, toric4d, haah, ising",
                    s.to_string()
                ))
            })
    }
}
