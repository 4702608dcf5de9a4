//! Constraint kernels and their weight enumerators.
//!
//! A constraint is a set of generators on one side of a CSS model whose
//! product is the identity. Constraints form the kernel of the transposed
//! generator-support matrix, and the weight enumerator `Σ_n c_n T^n` of that
//! kernel is the nontrivial factor of the partition function.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::gf2::{echelon_rows, BitVector};
use crate::math::{ln_biguint, ln_sum_exp, LN_2};
use crate::models::CssModel;

/// Default largest kernel dimension walked exhaustively (2^28 elements).
pub const DEFAULT_CAP: usize = 28;

/// Largest half-list the meet-in-the-middle join will materialize.
pub const MITM_HALF_LIMIT: u64 = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::A => "A",
            Side::B => "B",
        }
    }
}

/// A basis for the space of generator subsets on one side whose product is
/// the identity. Basis vectors live in generator-index space.
#[derive(Clone, Debug)]
pub struct ConstraintKernel {
    side: Side,
    n_generators: usize,
    basis: Vec<BitVector>,
}

impl ConstraintKernel {
    /// Wraps an arbitrary basis of a subspace of `GF(2)^n_generators`.
    /// Vectors must be independent and of length `n_generators`.
    pub fn from_basis(side: Side, n_generators: usize, basis: Vec<BitVector>) -> Result<Self> {
        if basis.iter().any(|v| v.len() != n_generators) {
            return Err(Error::invalid("basis vector length differs from generator count"));
        }
        if echelon_rows(basis.clone(), n_generators).rank() != basis.len() {
            return Err(Error::invalid("basis vectors are linearly dependent"));
        }
        Ok(ConstraintKernel {
            side,
            n_generators,
            basis,
        })
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn n_generators(&self) -> usize {
        self.n_generators
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BitVector] {
        &self.basis
    }
}

/// Kernel of the transposed support matrix of one side of `m`.
pub fn constraint_kernel(m: &CssModel, side: Side) -> ConstraintKernel {
    let gens = match side {
        Side::A => m.a_gens(),
        Side::B => m.b_gens(),
    };
    ConstraintKernel {
        side,
        n_generators: gens.rows(),
        basis: gens.transpose().kernel_basis(),
    }
}

/// Counts `c_n` of subspace elements by Hamming weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightEnumerator {
    coeffs: Vec<BigUint>,
    complete: bool,
    max_tracked: usize,
    dim: usize,
    len: usize,
}

impl WeightEnumerator {
    /// Builds an enumerator from explicit counts indexed by weight, for a
    /// `dim`-dimensional subspace of `GF(2)^len`.
    pub fn from_counts(
        counts: Vec<BigUint>,
        dim: usize,
        len: usize,
        complete: bool,
        max_tracked: usize,
    ) -> Self {
        WeightEnumerator {
            coeffs: counts,
            complete,
            max_tracked,
            dim,
            len,
        }
    }

    /// Builds an enumerator from 64-bit counts, as produced by
    /// [`gray_range_histogram`].
    pub fn from_histogram(hist: &[u64], dim: usize, len: usize, complete: bool, max_tracked: usize) -> Self {
        Self::from_counts(
            hist.iter().map(|&c| BigUint::from(c)).collect(),
            dim,
            len,
            complete,
            max_tracked,
        )
    }

    /// `c_n`, zero beyond the stored range.
    pub fn coeff(&self, n: usize) -> BigUint {
        self.coeffs.get(n).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &[BigUint] {
        &self.coeffs
    }

    /// Nonzero `(weight, count)` pairs in increasing weight.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, &BigUint)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    /// Largest weight whose count is exact.
    pub fn max_tracked(&self) -> usize {
        self.max_tracked
    }

    /// Dimension of the enumerated subspace.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Length of the ambient vectors, i.e. the largest possible weight.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn total(&self) -> BigUint {
        self.coeffs.iter().sum()
    }

    /// Natural log of an upper bound on the omitted tail `Σ_{n > max} c_n T^n`
    /// at `T`, namely `2^dim T^(max+1)`; `-inf` when nothing is omitted.
    pub fn ln_tail_bound(&self, t: f64) -> f64 {
        if self.complete || self.max_tracked >= self.len {
            return f64::NEG_INFINITY;
        }
        if t == 0.0 {
            return f64::NEG_INFINITY;
        }
        self.dim as f64 * LN_2 + (self.max_tracked + 1) as f64 * libm::log(t)
    }
}

/// Value of `ln Σ_n c_n T^n` together with how much a truncation could hide.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesValue {
    pub ln_value: f64,
    /// Upper bound on `ln(true) − ln_value`; zero for complete enumerators.
    pub ln_error_bound: f64,
}

/// `ln Σ_n c_n T^n` by log-sum-exp over the terms.
pub fn evaluate_log_t(w: &WeightEnumerator, t: f64) -> Result<SeriesValue> {
    if !(0.0..1.0).contains(&t) {
        return Err(Error::invalid(alloc::format!("T must lie in [0, 1), got {t}")));
    }
    let ln_t = libm::log(t);
    let terms = w.nonzero().filter_map(|(n, c)| {
        if n == 0 {
            Some(ln_biguint(c))
        } else if t == 0.0 {
            None
        } else {
            Some(ln_biguint(c) + n as f64 * ln_t)
        }
    });
    let terms: Vec<f64> = terms.collect();
    let ln_value = ln_sum_exp(terms.iter().copied());
    let ln_tail = w.ln_tail_bound(t);
    let ln_error_bound = if ln_tail == f64::NEG_INFINITY {
        0.0
    } else {
        libm::log1p(libm::exp(ln_tail - ln_value))
    };
    Ok(SeriesValue {
        ln_value,
        ln_error_bound,
    })
}

/// Packed basis laid out for the Gray-code inner loop.
struct PackedBasis {
    words: usize,
    data: Vec<u64>,
    /// Indices of nonzero words, per basis vector.
    support: Vec<Vec<u32>>,
}

impl PackedBasis {
    fn new(basis: &[BitVector], len: usize) -> Self {
        let words = len.div_ceil(64).max(1);
        let mut data = vec![0u64; basis.len() * words];
        let mut support = Vec::with_capacity(basis.len());
        for (i, v) in basis.iter().enumerate() {
            let slot = &mut data[i * words..(i + 1) * words];
            slot[..v.words().len()].copy_from_slice(v.words());
            support.push(
                (0..words)
                    .filter(|&w| slot[w] != 0)
                    .map(|w| w as u32)
                    .collect(),
            );
        }
        PackedBasis {
            words,
            data,
            support,
        }
    }

    #[inline]
    fn vector(&self, i: usize) -> &[u64] {
        &self.data[i * self.words..(i + 1) * self.words]
    }
}

#[inline]
fn gray(i: u64) -> u64 {
    i ^ (i >> 1)
}

/// Weight histogram of the span elements visited by the Gray-code walk over
/// positions `start..end` (positions index the reflected binary Gray code of
/// `basis.len()` bits).
///
/// The walk is seeded with the codeword at `start`, so disjoint ranges can be
/// processed independently and their histograms added.
pub fn gray_range_histogram(basis: &[BitVector], len: usize, start: u64, end: u64) -> Vec<u64> {
    let dim = basis.len();
    assert!(dim < 64, "Gray-code walks are limited to 63 basis vectors");
    assert!(start <= end && end <= 1u64 << dim, "range out of bounds");
    let mut hist = vec![0u64; len + 1];
    if start == end {
        return hist;
    }
    let packed = PackedBasis::new(basis, len);
    let mut acc = vec![0u64; packed.words];
    let code = gray(start);
    for (j, _) in basis.iter().enumerate().filter(|&(j, _)| (code >> j) & 1 == 1) {
        for (a, b) in acc.iter_mut().zip(packed.vector(j)) {
            *a ^= b;
        }
    }
    let mut weight: i64 = acc.iter().map(|w| w.count_ones() as i64).sum();
    hist[weight as usize] += 1;
    if packed.words == 1 {
        // Single-word fast path.
        let mut a = acc[0];
        let vecs: Vec<u64> = (0..dim).map(|j| packed.data[j]).collect();
        for i in start + 1..end {
            a ^= vecs[i.trailing_zeros() as usize];
            hist[a.count_ones() as usize] += 1;
        }
        return hist;
    }
    for i in start + 1..end {
        let j = i.trailing_zeros() as usize;
        let v = packed.vector(j);
        for &w in &packed.support[j] {
            let w = w as usize;
            let old = acc[w];
            let new = old ^ v[w];
            weight += new.count_ones() as i64 - old.count_ones() as i64;
            acc[w] = new;
        }
        hist[weight as usize] += 1;
    }
    hist
}

fn check_full_cap(dim: usize, cap: usize) -> Result<()> {
    if dim > cap {
        return Err(Error::CapExceeded {
            what: "kernel dimension",
            requested: dim as u64,
            cap: cap as u64,
            suggestion: "use the meet-in-the-middle enumerator with a weight cutoff, or raise the cap",
        });
    }
    Ok(())
}

/// Exhaustive weight distribution of the span of `basis` (vectors of length
/// `len`) by a single Gray-code walk.
pub fn span_weight_enumerator(basis: &[BitVector], len: usize, cap: usize) -> Result<WeightEnumerator> {
    check_full_cap(basis.len(), cap)?;
    let hist = gray_range_histogram(basis, len, 0, 1u64 << basis.len());
    Ok(WeightEnumerator::from_histogram(&hist, basis.len(), len, true, len))
}

/// Complete weight enumerator of a kernel using the default cap.
pub fn weight_enumerator_full(k: &ConstraintKernel) -> Result<WeightEnumerator> {
    weight_enumerator_full_with_cap(k, DEFAULT_CAP)
}

pub fn weight_enumerator_full_with_cap(k: &ConstraintKernel, cap: usize) -> Result<WeightEnumerator> {
    span_weight_enumerator(&k.basis, k.n_generators, cap)
}

/// Exact `c_n` for `n ≤ max_weight` by meet in the middle, using the default cap.
pub fn weight_enumerator_mitm(k: &ConstraintKernel, max_weight: usize) -> Result<WeightEnumerator> {
    weight_enumerator_mitm_with_cap(k, max_weight, DEFAULT_CAP)
}

struct HalfEntry {
    words: Vec<u64>,
    weight: usize,
    size: usize,
}

/// All XOR combinations of at most `max_size` vectors of `half`.
fn half_combinations(half: &[BitVector], words: usize, max_size: usize) -> Vec<HalfEntry> {
    fn rec(
        half: &[BitVector],
        from: usize,
        acc: &mut Vec<u64>,
        size: usize,
        max_size: usize,
        out: &mut Vec<HalfEntry>,
    ) {
        out.push(HalfEntry {
            words: acc.clone(),
            weight: acc.iter().map(|w| w.count_ones() as usize).sum(),
            size,
        });
        if size == max_size {
            return;
        }
        for j in from..half.len() {
            for (a, b) in acc.iter_mut().zip(half[j].words()) {
                *a ^= b;
            }
            rec(half, j + 1, acc, size + 1, max_size, out);
            for (a, b) in acc.iter_mut().zip(half[j].words()) {
                *a ^= b;
            }
        }
    }
    let mut out = Vec::new();
    rec(half, 0, &mut vec![0; words], 0, max_size, &mut out);
    out
}

fn combinations_up_to(n: usize, k: usize) -> u64 {
    let mut total: u64 = 0;
    let mut c: u64 = 1;
    for i in 0..=k.min(n) {
        total = total.saturating_add(c);
        c = c.saturating_mul((n - i) as u64) / (i as u64 + 1);
    }
    total
}

/// Meet-in-the-middle truncated enumerator.
///
/// The basis is brought to reduced echelon form, so each basis vector owns a
/// pivot coordinate no other vector touches and a combination of `s` vectors
/// has weight at least `s`. Each half of the basis contributes its
/// combinations of at most `max_weight` vectors; the join pairs entries whose
/// weights differ by at most `max_weight` and whose sizes sum to at most
/// `max_weight`.
pub fn weight_enumerator_mitm_with_cap(
    k: &ConstraintKernel,
    max_weight: usize,
    cap: usize,
) -> Result<WeightEnumerator> {
    let dim = k.dim();
    if dim > 2 * cap {
        return Err(Error::CapExceeded {
            what: "kernel dimension",
            requested: dim as u64,
            cap: 2 * cap as u64,
            suggestion: "no exact enumerator is available at this size",
        });
    }
    let n = k.n_generators;
    let words = n.div_ceil(64).max(1);
    let reduced = echelon_rows(k.basis.clone(), n).rows;
    let split = dim.div_ceil(2);
    let (h1, h2) = reduced.split_at(split);
    let need = combinations_up_to(h1.len(), max_weight);
    if need > MITM_HALF_LIMIT {
        return Err(Error::CapExceeded {
            what: "meet-in-the-middle half list",
            requested: need,
            cap: MITM_HALF_LIMIT,
            suggestion: "lower the weight cutoff",
        });
    }
    let left = half_combinations(h1, words, max_weight);
    let right = half_combinations(h2, words, max_weight);

    let mut buckets: Vec<Vec<&HalfEntry>> = vec![Vec::new(); n + 1];
    for e in &right {
        buckets[e.weight].push(e);
    }
    let top = max_weight.min(n);
    let mut hist = vec![0u64; top + 1];
    for u in &left {
        if u.size > top {
            continue;
        }
        let lo = u.weight.saturating_sub(top);
        let hi = (u.weight + top).min(n);
        for bucket in &buckets[lo..=hi] {
            for v in bucket {
                if u.size + v.size > top {
                    continue;
                }
                let w: usize = u
                    .words
                    .iter()
                    .zip(&v.words)
                    .map(|(a, b)| (a ^ b).count_ones() as usize)
                    .sum();
                if w <= top {
                    hist[w] += 1;
                }
            }
        }
    }
    Ok(WeightEnumerator::from_histogram(&hist, dim, n, false, max_weight))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{build_haah, build_toric_2d, build_toric_4d};
    use rand::rngs::StdRng;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};

    fn random_basis(rng: &mut StdRng, dim: usize, len: usize) -> Vec<BitVector> {
        loop {
            let basis: Vec<BitVector> = (0..dim)
                .map(|_| {
                    let bits: Vec<bool> = (0..len).map(|_| rng.gen_bool(0.3)).collect();
                    BitVector::from_bools(&bits)
                })
                .collect();
            if echelon_rows(basis.clone(), len).rank() == dim {
                return basis;
            }
        }
    }

    /// Subset-by-subset enumeration without Gray codes.
    fn brute(basis: &[BitVector], len: usize) -> Vec<u64> {
        let mut hist = vec![0u64; len + 1];
        for mask in 0u64..(1 << basis.len()) {
            let mut v = BitVector::zeros(len);
            for (j, b) in basis.iter().enumerate() {
                if (mask >> j) & 1 == 1 {
                    v ^= b;
                }
            }
            hist[v.weight()] += 1;
        }
        hist
    }

    fn counts(w: &WeightEnumerator) -> Vec<u64> {
        w.coeffs().iter().map(|c| c.try_into().unwrap()).collect()
    }

    #[test]
    fn empty_kernel() {
        let k = ConstraintKernel::from_basis(Side::A, 5, Vec::new()).unwrap();
        let w = weight_enumerator_full(&k).unwrap();
        assert_eq!(w.coeff(0), BigUint::from(1u32));
        assert_eq!(w.total(), BigUint::from(1u32));
        let m = weight_enumerator_mitm(&k, 3).unwrap();
        assert_eq!(counts(&m), vec![1, 0, 0, 0]);
        assert_eq!(evaluate_log_t(&w, 0.7).unwrap().ln_value, 0.0);
    }

    #[test]
    fn haah_kernel_is_all_ones() {
        let m = build_haah(3).unwrap();
        for side in [Side::A, Side::B] {
            let k = constraint_kernel(&m, side);
            assert_eq!(k.dim(), 1);
            assert_eq!(k.basis()[0], BitVector::ones(27));
            let w = weight_enumerator_full(&k).unwrap();
            let nz: Vec<(usize, u64)> = w.nonzero().map(|(n, c)| (n, c.try_into().unwrap())).collect();
            assert_eq!(nz, vec![(0, 1), (27, 1)]);
        }
    }

    #[test]
    fn toric_2d_star_kernel() {
        let m = build_toric_2d(3).unwrap();
        let k = constraint_kernel(&m, Side::A);
        assert_eq!(k.dim(), 1);
        assert_eq!(k.basis()[0], BitVector::ones(9));
    }

    #[test]
    fn kernel_vectors_multiply_to_identity() {
        let m = build_toric_4d(2).unwrap();
        let k = constraint_kernel(&m, Side::B);
        assert_eq!(k.dim(), 19);
        for v in k.basis() {
            assert!(m.b_gens().combine_rows(v).unwrap().is_zero());
        }
    }

    #[test]
    fn gray_walk_matches_brute_force() {
        let mut rng = StdRng::seed_from_u64(7);
        for &(dim, len) in &[(0, 4), (1, 3), (5, 20), (9, 64), (8, 130)] {
            let basis = random_basis(&mut rng, dim, len);
            let w = span_weight_enumerator(&basis, len, DEFAULT_CAP).unwrap();
            assert_eq!(counts(&w), brute(&basis, len), "dim={dim} len={len}");
            assert_eq!(w.total(), BigUint::from(1u64 << dim));
        }
    }

    #[test]
    fn gray_ranges_merge() {
        let mut rng = StdRng::seed_from_u64(11);
        let basis = random_basis(&mut rng, 10, 90);
        let whole = gray_range_histogram(&basis, 90, 0, 1024);
        let mut merged = vec![0u64; 91];
        for (s, e) in [(0, 1), (1, 300), (300, 301), (301, 1000), (1000, 1024)] {
            for (m, h) in merged.iter_mut().zip(gray_range_histogram(&basis, 90, s, e)) {
                *m += h;
            }
        }
        assert_eq!(merged, whole);
    }

    #[test]
    fn weight_distribution_ignores_basis_order() {
        let mut rng = StdRng::seed_from_u64(3);
        let mut basis = random_basis(&mut rng, 12, 70);
        let before = span_weight_enumerator(&basis, 70, DEFAULT_CAP).unwrap();
        basis.shuffle(&mut rng);
        let after = span_weight_enumerator(&basis, 70, DEFAULT_CAP).unwrap();
        assert_eq!(before, after);
    }

    #[test]
    fn mitm_matches_full_walk() {
        let mut rng = StdRng::seed_from_u64(5);
        for &(dim, len, cut) in &[(7, 30, 30), (11, 40, 9), (12, 70, 20), (6, 6, 2)] {
            let basis = random_basis(&mut rng, dim, len);
            let k = ConstraintKernel::from_basis(Side::A, len, basis).unwrap();
            let full = counts(&weight_enumerator_full(&k).unwrap());
            let mitm = weight_enumerator_mitm(&k, cut).unwrap();
            assert!(!mitm.is_complete());
            assert_eq!(mitm.max_tracked(), cut);
            let top = cut.min(len);
            assert_eq!(counts(&mitm)[..=top], full[..=top], "dim={dim} cut={cut}");
        }
    }

    #[test]
    fn caps_are_enforced() {
        let mut rng = StdRng::seed_from_u64(9);
        let basis = random_basis(&mut rng, 6, 20);
        let k = ConstraintKernel::from_basis(Side::B, 20, basis).unwrap();
        let err = weight_enumerator_full_with_cap(&k, 5).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { requested: 6, cap: 5, .. }));
        assert!(weight_enumerator_mitm_with_cap(&k, 3, 2).is_err());
        assert!(weight_enumerator_mitm_with_cap(&k, 3, 3).is_ok());
    }

    #[test]
    fn dependent_basis_rejected() {
        let v = BitVector::from_indices(4, [0, 1]);
        assert!(ConstraintKernel::from_basis(Side::A, 4, vec![v.clone(), v]).is_err());
    }

    #[test]
    fn series_evaluation() {
        let mut c = vec![BigUint::zero(); 28];
        c[0] = BigUint::from(1u32);
        c[27] = BigUint::from(1u32);
        let w = WeightEnumerator::from_counts(c, 1, 27, true, 27);
        assert_eq!(evaluate_log_t(&w, 0.0).unwrap().ln_value, 0.0);
        let near_one = evaluate_log_t(&w, 0.999999).unwrap().ln_value;
        assert!((near_one - LN_2).abs() < 3e-5);
        let t = libm::tanh(0.5);
        let direct = libm::log(1.0 + libm::pow(t, 27.0));
        let got = evaluate_log_t(&w, t).unwrap().ln_value;
        assert!(((got - direct) / direct).abs() < 1e-14);
        assert!(evaluate_log_t(&w, 1.0).is_err());
        assert!(evaluate_log_t(&w, -0.1).is_err());
    }

    #[test]
    fn truncated_series_reports_bound() {
        let mut rng = StdRng::seed_from_u64(21);
        let basis = random_basis(&mut rng, 8, 24);
        let k = ConstraintKernel::from_basis(Side::A, 24, basis).unwrap();
        let full = weight_enumerator_full(&k).unwrap();
        let cut = weight_enumerator_mitm(&k, 6).unwrap();
        let t = 0.2;
        let exact = evaluate_log_t(&full, t).unwrap();
        let approx = evaluate_log_t(&cut, t).unwrap();
        assert_eq!(exact.ln_error_bound, 0.0);
        assert!(approx.ln_error_bound > 0.0);
        assert!(exact.ln_value - approx.ln_value <= approx.ln_error_bound + 1e-15);
        assert!(exact.ln_value >= approx.ln_value);
        let all = weight_enumerator_mitm(&k, 24).unwrap();
        assert_eq!(evaluate_log_t(&all, t).unwrap().ln_error_bound, 0.0);
    }
}
