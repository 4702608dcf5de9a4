//! Checks of the dualities between stabilizer models and classical Ising
//! models: coefficient matching of series expansions, homology identities on
//! the 4-torus, bond-algebra isomorphisms, logical operators and ground-state
//! degeneracy.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::complex::HypercubicComplex;
use crate::enumerate::{
    constraint_kernel, span_weight_enumerator, weight_enumerator_full_with_cap, Side,
    WeightEnumerator, DEFAULT_CAP,
};
use crate::error::{Error, Result};
use crate::gf2::{span_rank, BitMatrix, BitVector};
use crate::math::{ln_biguint, ln_sum_exp, LN_2};
use crate::models::{build_chain_css, build_haah, build_ising, build_toric_3d, build_toric_4d, haah_qubit, CssModel, IsingModel};
use crate::pauli::PauliOp;

/// Largest spin count the brute-force low-temperature expansion accepts.
pub const MAX_BRUTE_SPINS: usize = 24;

/// Coefficient-by-coefficient comparison of two series below a cutoff.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesComparison {
    pub claim: String,
    /// Orders `n < cutoff` must agree.
    pub cutoff: usize,
    pub matched: bool,
    /// `(n, lhs_n, rhs_n)` for the lowest disagreeing order below the cutoff.
    pub first_mismatch: Option<(usize, BigUint, BigUint)>,
    pub lhs: Vec<BigUint>,
    pub rhs: Vec<BigUint>,
}

/// Compares `lhs` and `rhs` for all orders below `cutoff`; missing entries
/// count as zero.
pub fn compare_series(claim: impl Into<String>, lhs: &[BigUint], rhs: &[BigUint], cutoff: usize) -> SeriesComparison {
    let at = |s: &[BigUint], n: usize| s.get(n).cloned().unwrap_or_default();
    let first_mismatch = (0..cutoff)
        .find(|&n| at(lhs, n) != at(rhs, n))
        .map(|n| (n, at(lhs, n), at(rhs, n)));
    SeriesComparison {
        claim: claim.into(),
        cutoff,
        matched: first_mismatch.is_none(),
        first_mismatch,
        lhs: lhs.to_vec(),
        rhs: rhs.to_vec(),
    }
}

/// Low-temperature expansion coefficients of an Ising model: entry `Δ` counts
/// the unordered pairs `{C, Λ∖C}` of flipped-spin sets with `Δ` broken bonds,
/// for `Δ ≤ n_max`.
///
/// Walks the `2^(n−1)` subsets that leave the last spin unflipped in Gray-code
/// order, updating the broken-bond count incrementally.
pub fn ising_low_t_coeffs(ising: &IsingModel, n_max: usize) -> Result<Vec<BigUint>> {
    let n = ising.n_spins();
    if n > MAX_BRUTE_SPINS {
        return Err(Error::CapExceeded {
            what: "Ising spin count",
            requested: n as u64,
            cap: MAX_BRUTE_SPINS as u64,
            suggestion: "compare against the constraint enumerator instead of brute force",
        });
    }
    let mut hist = vec![0u64; n_max + 1];
    if n == 0 {
        hist[0] = 1;
        return Ok(hist.into_iter().map(BigUint::from).collect());
    }
    let mut neighbours: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(i, j) in ising.bonds() {
        neighbours[i].push(j);
        neighbours[j].push(i);
    }
    let free = n - 1;
    let mut flipped = vec![false; n];
    let mut broken: usize = 0;
    hist[0] += 1;
    for step in 1u64..(1u64 << free) {
        let i = step.trailing_zeros() as usize;
        for &j in &neighbours[i] {
            if flipped[i] == flipped[j] {
                broken += 1;
            } else {
                broken -= 1;
            }
        }
        flipped[i] = !flipped[i];
        if broken <= n_max {
            hist[broken] += 1;
        }
    }
    Ok(hist.into_iter().map(BigUint::from).collect())
}

/// `ln Z` from broken-bond class counts:
/// `Z = 2 e^{βJ·B} Σ_Δ c_Δ e^{−2βJΔ}` with `B` the number of bonds.
pub fn ising_log_z_low_t(ising: &IsingModel, coeffs: &[BigUint], beta: f64) -> f64 {
    let k = beta * ising.coupling();
    let terms = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(d, c)| ln_biguint(c) - 2.0 * k * d as f64);
    LN_2 + k * ising.bonds().len() as f64 + ln_sum_exp(terms)
}

fn padded(w: &WeightEnumerator, len: usize) -> Vec<BigUint> {
    (0..len).map(|n| w.coeff(n)).collect()
}

/// A-side constraint enumerator of the 4D toric code against the 4D Ising
/// broken-bond expansion, for all orders below `L³`.
pub fn check_series_duality_4dtc(l: usize) -> Result<SeriesComparison> {
    check_series_duality_4dtc_with_cap(l, DEFAULT_CAP)
}

pub fn check_series_duality_4dtc_with_cap(l: usize, cap: usize) -> Result<SeriesComparison> {
    let ising = build_ising(4, l)?;
    if ising.n_spins() > MAX_BRUTE_SPINS {
        return Err(Error::CapExceeded {
            what: "4D Ising spin count",
            requested: ising.n_spins() as u64,
            cap: MAX_BRUTE_SPINS as u64,
            suggestion: "only L = 2 is reachable by brute force",
        });
    }
    let m = build_toric_4d(l)?;
    let wa = weight_enumerator_full_with_cap(&constraint_kernel(&m, Side::A), cap)?;
    let cutoff = l * l * l;
    let code = padded(&wa, ising.bonds().len() + 1);
    let spins = ising_low_t_coeffs(&ising, ising.bonds().len())?;
    Ok(compare_series(
        alloc::format!("4D toric code A-side constraints = 4D Ising broken-bond classes below order {cutoff} (L={l})"),
        &code,
        &spins,
        cutoff,
    ))
}

/// Weight distributions of 3-cycles and 3-boundaries on the 4-torus.
#[derive(Clone, Debug)]
pub struct HomologyIdentity {
    pub comparison: SeriesComparison,
    /// `b_n`: all cellular 3-cycles.
    pub cycles: WeightEnumerator,
    /// `b*_n`: contractible 3-cycles (boundaries of 4-chains).
    pub boundaries: WeightEnumerator,
    /// Rank of the third homology group.
    pub betti: usize,
}

/// `b_n = b*_n` for `n < L³` on `Z_L⁴`.
pub fn check_homology_identity(l: usize) -> Result<HomologyIdentity> {
    check_homology_identity_with_cap(l, DEFAULT_CAP)
}

pub fn check_homology_identity_with_cap(l: usize, cap: usize) -> Result<HomologyIdentity> {
    let cx = HypercubicComplex::new(4, l)?;
    let n = cx.n_cells(3);
    let z3 = cx.cycle_space(3)?;
    let b3 = cx.boundary_space(3)?;
    let cycles = span_weight_enumerator(&z3, n, cap)?;
    let boundaries = span_weight_enumerator(&b3, n, cap)?;
    let cutoff = l * l * l;
    let comparison = compare_series(
        alloc::format!("3-cycles = contractible 3-cycles below area {cutoff} on the 4-torus (L={l})"),
        cycles.coeffs(),
        boundaries.coeffs(),
        cutoff,
    );
    Ok(HomologyIdentity {
        comparison,
        betti: z3.len() - b3.len(),
        cycles,
        boundaries,
    })
}

/// Finite-size surrogate of the upper bound on `𝒯_b`: every `b_n ≥ b*_n`
/// and `Σ b_n ≤ 2^betti · Σ b*_n` (16 on the 4-torus).
pub fn check_coefficient_bound(l: usize) -> Result<bool> {
    let h = check_homology_identity(l)?;
    Ok(coefficient_bound_holds(&h))
}

pub fn coefficient_bound_holds(h: &HomologyIdentity) -> bool {
    let pointwise = (0..=h.cycles.len()).all(|n| h.cycles.coeff(n) >= h.boundaries.coeff(n));
    let classes = BigUint::one() << h.betti;
    pointwise && h.cycles.total() <= classes * h.boundaries.total()
}

/// The two sides of the 3D toric code duality: the star side against a
/// periodic chain of `L³` spins, and the plaquette side against the 3D Ising
/// broken-bond expansion below order `L²`.
pub fn check_series_duality_3dtc(l: usize) -> Result<(SeriesComparison, SeriesComparison)> {
    let m = build_toric_3d(l)?;
    let n3 = l * l * l;
    let chain = build_chain_css(n3)?;
    let wa = weight_enumerator_full_with_cap(&constraint_kernel(&m, Side::A), DEFAULT_CAP)?;
    let wc = weight_enumerator_full_with_cap(&constraint_kernel(&chain, Side::A), DEFAULT_CAP)?;
    let stars = compare_series(
        alloc::format!("3D toric code star constraints = periodic chain of {n3} sites (L={l})"),
        wa.coeffs(),
        wc.coeffs(),
        n3 + 1,
    );
    let ising = build_ising(3, l)?;
    let wb = weight_enumerator_full_with_cap(&constraint_kernel(&m, Side::B), DEFAULT_CAP)?;
    let spins = ising_low_t_coeffs(&ising, ising.bonds().len())?;
    let cutoff = l * l;
    let plaquettes = compare_series(
        alloc::format!("3D toric code plaquette constraints = 3D Ising broken-bond classes below order {cutoff} (L={l})"),
        &padded(&wb, ising.bonds().len() + 1),
        &spins,
        cutoff,
    );
    Ok((stars, plaquettes))
}

/// Both constraint enumerators of Haah's code against that of a periodic
/// chain of `L³` sites (exact when the ground-state degeneracy is 4).
pub fn check_haah_chain_duality(l: usize) -> Result<(SeriesComparison, SeriesComparison)> {
    let m = build_haah(l)?;
    let n3 = l * l * l;
    let chain = build_chain_css(n3)?;
    let wc = weight_enumerator_full_with_cap(&constraint_kernel(&chain, Side::A), DEFAULT_CAP)?;
    let side = |s: Side| -> Result<SeriesComparison> {
        let w = weight_enumerator_full_with_cap(&constraint_kernel(&m, s), DEFAULT_CAP)?;
        Ok(compare_series(
            alloc::format!("Haah {}-side constraints = periodic chain of {n3} sites (L={l})", s.as_str()),
            w.coeffs(),
            wc.coeffs(),
            n3 + 1,
        ))
    };
    Ok((side(Side::A)?, side(Side::B)?))
}

/// Two positionally paired operator lists on (possibly different) systems.
#[derive(Clone, Debug)]
pub struct BondMap {
    source: Vec<PauliOp>,
    target: Vec<PauliOp>,
}

impl BondMap {
    pub fn new(source: Vec<PauliOp>, target: Vec<PauliOp>) -> Result<Self> {
        if source.len() != target.len() {
            return Err(Error::invalid(alloc::format!(
                "bond map pairs {} source with {} target operators",
                source.len(),
                target.len()
            )));
        }
        for (name, ops) in [("source", &source), ("target", &target)] {
            if let Some(first) = ops.first() {
                if ops.iter().any(|p| p.n_qubits() != first.n_qubits()) {
                    return Err(Error::invalid(alloc::format!(
                        "{name} operators act on different qubit counts"
                    )));
                }
            }
        }
        Ok(BondMap { source, target })
    }

    pub fn source(&self) -> &[PauliOp] {
        &self.source
    }

    pub fn target(&self) -> &[PauliOp] {
        &self.target
    }

    pub fn len(&self) -> usize {
        self.source.len()
    }

    pub fn is_empty(&self) -> bool {
        self.source.is_empty()
    }

    /// The map read backwards.
    pub fn inverse(&self) -> BondMap {
        BondMap {
            source: self.target.clone(),
            target: self.source.clone(),
        }
    }

    /// Exchanges the targets of entries `i` and `j`.
    pub fn with_targets_swapped(&self, i: usize, j: usize) -> BondMap {
        let mut out = self.clone();
        out.target.swap(i, j);
        out
    }

    /// First pair `(i, j)` whose commutation differs between the two sides.
    pub fn first_violation(&self) -> Option<(usize, usize)> {
        let n = self.source.len();
        for i in 0..n {
            for j in i + 1..n {
                let s = self.source[i].commutes(&self.source[j]).expect("sizes checked");
                let t = self.target[i].commutes(&self.target[j]).expect("sizes checked");
                if s != t {
                    return Some((i, j));
                }
            }
        }
        None
    }
}

/// True iff every pair of source operators commutes exactly when the
/// corresponding target pair does.
pub fn bond_algebra_isomorphic(map: &BondMap) -> bool {
    map.first_violation().is_none()
}

/// Which local perturbation is added to the open-boundary 2D toric code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bath {
    /// `σ^x` on horizontal links.
    Vx,
    /// `σ^y` on horizontal links.
    Vy,
}

/// A bond map for the open 2D toric code plus a local bath, with the index
/// ranges of each operator family. Entries are ordered stars, plaquettes,
/// field terms.
#[derive(Clone, Debug)]
pub struct BathMapping {
    pub map: BondMap,
    pub n_stars: usize,
    pub n_plaquettes: usize,
    pub n_fields: usize,
}

impl BathMapping {
    pub fn stars(&self) -> core::ops::Range<usize> {
        0..self.n_stars
    }

    pub fn plaquettes(&self) -> core::ops::Range<usize> {
        self.n_stars..self.n_stars + self.n_plaquettes
    }

    pub fn fields(&self) -> core::ops::Range<usize> {
        let s = self.n_stars + self.n_plaquettes;
        s..s + self.n_fields
    }
}

/// Builds the source and dual operator lists for the open-boundary 2D toric
/// code with bath `bath`.
///
/// Source qubits: horizontal link `(i+½, j)` for `0 ≤ i < L, 0 ≤ j ≤ L`, then
/// vertical link `(i, j+½)` for `0 ≤ i ≤ L, 0 ≤ j < L`. Stars sit on interior
/// vertices `1 ≤ i, j ≤ L−1`; plaquettes are labelled by their lower-left
/// corner `0 ≤ i, j ≤ L−1`.
///
/// Dual for `Vx`: each column of plaquettes becomes an open chain,
/// `B_{i,j} → τ^z_{i,j} τ^z_{i,j+1}`, `σ^x_{i+½,j} → τ^x_{i,j}`, and each
/// star becomes a lone `τ^z` on an auxiliary spin.
///
/// Dual for `Vy`: plaquettes as above; rows of stars become open chains
/// `A_{i,j} → ρ^z_{i,j} ρ^z_{i+1,j}`; `σ^y_{i+½,j} → τ^x_{i,j} ρ^x_{i+1,j}`,
/// so that the field on link `(i+½, j)` meets the two stars at `(i, j)` and
/// `(i+1, j)` that share it.
pub fn build_2dtc_bath_mapping(l: usize, bath: Bath) -> Result<BathMapping> {
    if l < 2 {
        return Err(Error::invalid(alloc::format!(
            "linear size must be at least 2, got {l}"
        )));
    }
    let n_h = l * (l + 1);
    let n_src = 2 * n_h;
    let h_link = |i: usize, j: usize| i * (l + 1) + j;
    let v_link = |i: usize, j: usize| n_h + i * l + j;

    let mut source = Vec::new();
    for i in 1..l {
        for j in 1..l {
            source.push(PauliOp::x_type(
                n_src,
                [h_link(i - 1, j), h_link(i, j), v_link(i, j - 1), v_link(i, j)],
            ));
        }
    }
    for i in 0..l {
        for j in 0..l {
            source.push(PauliOp::z_type(
                n_src,
                [h_link(i, j), h_link(i, j + 1), v_link(i, j), v_link(i + 1, j)],
            ));
        }
    }
    for i in 0..l {
        for j in 0..=l {
            source.push(match bath {
                Bath::Vx => PauliOp::x_type(n_src, [h_link(i, j)]),
                Bath::Vy => PauliOp::y_type(n_src, [h_link(i, j)]),
            });
        }
    }
    let n_stars = (l - 1) * (l - 1);
    let n_plaquettes = l * l;
    let n_fields = l * (l + 1);

    // τ_{i,j} for 0 ≤ i < L, 0 ≤ j ≤ L share the horizontal-link layout.
    let tau = |i: usize, j: usize| i * (l + 1) + j;
    let mut target = Vec::with_capacity(source.len());
    match bath {
        Bath::Vx => {
            let n_tgt = n_h + n_stars;
            for k in 0..n_stars {
                target.push(PauliOp::z_type(n_tgt, [n_h + k]));
            }
            for i in 0..l {
                for j in 0..l {
                    target.push(PauliOp::z_type(n_tgt, [tau(i, j), tau(i, j + 1)]));
                }
            }
            for i in 0..l {
                for j in 0..=l {
                    target.push(PauliOp::x_type(n_tgt, [tau(i, j)]));
                }
            }
        }
        Bath::Vy => {
            // ρ_{i,j} for 0 ≤ i ≤ L, 0 ≤ j ≤ L.
            let rho = |i: usize, j: usize| n_h + i * (l + 1) + j;
            let n_tgt = n_h + (l + 1) * (l + 1);
            for i in 1..l {
                for j in 1..l {
                    target.push(PauliOp::z_type(n_tgt, [rho(i, j), rho(i + 1, j)]));
                }
            }
            for i in 0..l {
                for j in 0..l {
                    target.push(PauliOp::z_type(n_tgt, [tau(i, j), tau(i, j + 1)]));
                }
            }
            for i in 0..l {
                for j in 0..=l {
                    target.push(PauliOp::x_type(n_tgt, [tau(i, j), rho(i + 1, j)]));
                }
            }
        }
    }
    Ok(BathMapping {
        map: BondMap::new(source, target)?,
        n_stars,
        n_plaquettes,
        n_fields,
    })
}

/// Ranks entering the ground-state degeneracy `2^(N − rank A − rank B)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GsdReport {
    pub n_qubits: usize,
    pub rank_a: usize,
    pub rank_b: usize,
    pub log2_gsd: usize,
    pub gsd: BigUint,
}

pub fn gsd_report(m: &CssModel) -> GsdReport {
    let rank_a = m.a_gens().rank();
    let rank_b = m.b_gens().rank();
    let log2_gsd = m.n_qubits() - rank_a - rank_b;
    GsdReport {
        n_qubits: m.n_qubits(),
        rank_a,
        rank_b,
        log2_gsd,
        gsd: BigUint::one() << log2_gsd,
    }
}

/// Ground-state degeneracy of a CSS model.
pub fn gsd(m: &CssModel) -> BigUint {
    gsd_report(m).gsd
}

/// One named logical-operator candidate.
#[derive(Clone, Debug)]
pub struct Logical {
    pub label: String,
    pub op: PauliOp,
    /// Family `0` is Z-type, family `1` is X-type.
    pub family: usize,
    /// Pattern key: in the 4D toric code two operators of opposite families
    /// anticommute exactly when their keys agree.
    pub key: usize,
}

/// Outcome of the logical-operator checks.
#[derive(Clone, Debug)]
pub struct LogicalReport {
    pub model: String,
    pub logicals: Vec<Logical>,
    /// Every logical commutes with every stabilizer generator.
    pub commute_with_stabilizers: bool,
    /// The stated mutual (anti)commutation pattern holds for every pair.
    pub pattern_holds: bool,
    /// No logical is a product of stabilizer generators.
    pub none_in_stabilizer_group: bool,
    /// Number of independent logicals in each family modulo the stabilizer
    /// group, `[Z-type, X-type]`.
    pub independent: [usize; 2],
}

impl LogicalReport {
    pub fn all_hold(&self) -> bool {
        self.commute_with_stabilizers && self.pattern_holds && self.none_in_stabilizer_group
    }
}

fn in_stabilizer_group(m: &CssModel, op: &PauliOp) -> bool {
    // A CSS-type operator is a stabilizer iff its support is a sum of rows.
    let check = |gens: &BitMatrix, support: &BitVector| -> bool {
        if support.is_zero() {
            return true;
        }
        if gens.rows() == 0 {
            return false;
        }
        gens.transpose().solve(support).expect("lengths agree").is_some()
    };
    check(m.b_gens(), op.z_mask()) && check(m.a_gens(), op.x_mask())
}

fn independent_modulo(gens: &BitMatrix, ops: &[BitVector]) -> usize {
    let base = gens.row_vectors().to_vec();
    let mut all = base.clone();
    all.extend_from_slice(ops);
    span_rank(&all, gens.cols()) - span_rank(&base, gens.cols())
}

fn assemble_report(
    m: &CssModel,
    logicals: Vec<Logical>,
    anticommute: impl Fn(&Logical, &Logical) -> bool,
) -> LogicalReport {
    let stabilizers: Vec<PauliOp> = m.a_ops().into_iter().chain(m.b_ops()).collect();
    let commute_with_stabilizers = logicals
        .iter()
        .all(|lg| stabilizers.iter().all(|s| lg.op.commutes(s).expect("same size")));
    let mut pattern_holds = true;
    for (i, p) in logicals.iter().enumerate() {
        for q in &logicals[i..] {
            let commutes = p.op.commutes(&q.op).expect("same size");
            if commutes == anticommute(p, q) {
                pattern_holds = false;
            }
        }
    }
    let none_in_stabilizer_group = logicals.iter().all(|lg| !in_stabilizer_group(m, &lg.op));
    let z_ops: Vec<BitVector> = logicals
        .iter()
        .filter(|lg| lg.family == 0)
        .map(|lg| lg.op.z_mask().clone())
        .collect();
    let x_ops: Vec<BitVector> = logicals
        .iter()
        .filter(|lg| lg.family == 1)
        .map(|lg| lg.op.x_mask().clone())
        .collect();
    LogicalReport {
        model: String::from(m.label()),
        independent: [
            independent_modulo(m.b_gens(), &z_ops),
            independent_modulo(m.a_gens(), &x_ops),
        ],
        logicals,
        commute_with_stabilizers,
        pattern_holds,
        none_in_stabilizer_group,
    }
}

/// Plane operators of the 4D toric code.
///
/// `𝒫^{μν}_{ij}` is `σ^z` on every μν-plaquette whose two remaining
/// coordinates are `(i, j)`; `𝒬^{μν}_{ij}` is `σ^x` on every μν-plaquette
/// with `x_μ = i`, `x_ν = j`. A `𝒫` and a `𝒬` anticommute iff they share the
/// plane orientation.
pub fn logical_operators_4dtc(l: usize) -> Result<LogicalReport> {
    let m = build_toric_4d(l)?;
    let cx = HypercubicComplex::new(4, l)?;
    let n = m.n_qubits();
    let mut logicals = Vec::new();
    for (key, plane) in cx.direction_sets(2).iter().enumerate() {
        let (mu, nu) = (plane[0], plane[1]);
        let others: Vec<usize> = (0..4).filter(|d| *d != mu && *d != nu).collect();
        for i in 0..l {
            for j in 0..l {
                let mut p_support = Vec::new();
                let mut q_support = Vec::new();
                for v in 0..cx.n_vertices() {
                    let c = cx.vertex_coords(v);
                    let cell = cx.cell_index(v, plane);
                    if c[others[0]] == i && c[others[1]] == j {
                        p_support.push(cell);
                    }
                    if c[mu] == i && c[nu] == j {
                        q_support.push(cell);
                    }
                }
                logicals.push(Logical {
                    label: alloc::format!("P^{mu}{nu}_{i}{j}"),
                    op: PauliOp::z_type(n, p_support),
                    family: 0,
                    key,
                });
                logicals.push(Logical {
                    label: alloc::format!("Q^{mu}{nu}_{i}{j}"),
                    op: PauliOp::x_type(n, q_support),
                    family: 1,
                    key,
                });
            }
        }
    }
    Ok(assemble_report(&m, logicals, |p, q| {
        p.family != q.family && p.key == q.key
    }))
}

/// Plane operators of Haah's code: `𝒫^μ_i` is `σ^z` and `𝒬^μ_i` is `τ^x` on
/// every vertex of the plane `x_μ = i`. All of them commute.
pub fn logical_operators_haah(l: usize) -> Result<LogicalReport> {
    let m = build_haah(l)?;
    let cx = HypercubicComplex::new(3, l)?;
    let n = m.n_qubits();
    let mut logicals = Vec::new();
    for mu in 0..3 {
        for i in 0..l {
            let plane: Vec<usize> = (0..cx.n_vertices())
                .filter(|&v| cx.vertex_coords(v)[mu] == i)
                .collect();
            logicals.push(Logical {
                label: alloc::format!("P^{mu}_{i}"),
                op: PauliOp::z_type(n, plane.iter().map(|&v| haah_qubit(v, 0))),
                family: 0,
                key: mu,
            });
            logicals.push(Logical {
                label: alloc::format!("Q^{mu}_{i}"),
                op: PauliOp::x_type(n, plane.iter().map(|&v| haah_qubit(v, 1))),
                family: 1,
                key: mu,
            });
        }
    }
    Ok(assemble_report(&m, logicals, |_, _| false))
}

/// True when `sub` spans the same space as `sup` (equal rank and mutual
/// containment), used to identify constraint kernels with cycle spaces.
pub fn same_subspace(a: &[BitVector], b: &[BitVector], len: usize) -> bool {
    let ra = span_rank(a, len);
    let rb = span_rank(b, len);
    let mut all = a.to_vec();
    all.extend_from_slice(b);
    ra == rb && span_rank(&all, len) == ra
}

/// Counts with a zero coefficient trimmed from the top.
pub fn trimmed(coeffs: &[BigUint]) -> &[BigUint] {
    let end = coeffs.iter().rposition(|c| !c.is_zero()).map_or(0, |p| p + 1);
    &coeffs[..end]
}
