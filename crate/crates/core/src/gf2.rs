//! Dense, bit-packed linear algebra over GF(2).
//!
//! Rows are stored as packed `u64` words; elimination works row-major with
//! XOR of whole words. Pivots are chosen leftmost column first and rows are
//! fully reduced, so kernel bases and row-space bases come out in the same
//! order on every run.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{BitXor, BitXorAssign};

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

/// A vector over GF(2). Bits past `len` are always zero.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = BitVector {
            len,
            words: vec![u64::MAX; words_for(len)],
        };
        v.mask_tail();
        v
    }

    /// Builds a vector from a list of set positions. Repeated positions
    /// cancel in pairs, as they would in a GF(2) sum.
    pub fn from_indices<I>(len: usize, indices: I) -> Self
    where
        I: IntoIterator<Item = usize>,
    {
        let mut v = Self::zeros(len);
        for i in indices {
            v.flip(i);
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i);
            }
        }
        v
    }

    /// Builds a vector from raw words; bits beyond `len` are discarded.
    pub fn from_words(len: usize, mut words: Vec<u64>) -> Self {
        words.resize(words_for(len), 0);
        let mut v = BitVector { len, words };
        v.mask_tail();
        v
    }

    fn mask_tail(&mut self) {
        let rem = self.len % WORD_BITS;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        self.words[i / WORD_BITS] |= 1 << (i % WORD_BITS);
    }

    #[inline]
    pub fn clear(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        self.words[i / WORD_BITS] &= !(1 << (i % WORD_BITS));
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        self.words[i / WORD_BITS] ^= 1 << (i % WORD_BITS);
    }

    pub fn assign(&mut self, i: usize, value: bool) {
        if value {
            self.set(i)
        } else {
            self.clear(i)
        }
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Inner product mod 2.
    pub fn dot(&self, other: &BitVector) -> bool {
        assert_eq!(self.len, other.len, "dot product of unequal lengths");
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= a & b;
        }
        acc.count_ones() & 1 == 1
    }

    /// Size of the intersection of the two supports.
    pub fn overlap(&self, other: &BitVector) -> usize {
        assert_eq!(self.len, other.len, "overlap of unequal lengths");
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// XOR of `other` into `self`, skipping the first `from_word` words.
    #[inline]
    fn xor_from(&mut self, other: &BitVector, from_word: usize) {
        for (a, b) in self.words[from_word..].iter_mut().zip(&other.words[from_word..]) {
            *a ^= b;
        }
    }

    /// Position of the lowest set bit at or after `start`.
    pub fn first_one_from(&self, start: usize) -> Option<usize> {
        if start >= self.len {
            return None;
        }
        let mut wi = start / WORD_BITS;
        let mut word = self.words[wi] & (u64::MAX << (start % WORD_BITS));
        loop {
            if word != 0 {
                return Some(wi * WORD_BITS + word.trailing_zeros() as usize);
            }
            wi += 1;
            if wi >= self.words.len() {
                return None;
            }
            word = self.words[wi];
        }
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            core::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let tz = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(wi * WORD_BITS + tz)
                }
            })
        })
    }

    /// Concatenation `self ‖ other`.
    pub fn concat(&self, other: &BitVector) -> BitVector {
        let mut out = BitVector::zeros(self.len + other.len);
        for i in self.iter_ones() {
            out.set(i);
        }
        for i in other.iter_ones() {
            out.set(self.len + i);
        }
        out
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("BitVector(")?;
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        f.write_str(")")
    }
}

impl BitXorAssign<&BitVector> for BitVector {
    fn bitxor_assign(&mut self, rhs: &BitVector) {
        assert_eq!(self.len, rhs.len, "xor of unequal lengths");
        self.xor_from(rhs, 0);
    }
}

impl BitXor<&BitVector> for &BitVector {
    type Output = BitVector;

    fn bitxor(self, rhs: &BitVector) -> BitVector {
        let mut out = self.clone();
        out ^= rhs;
        out
    }
}

/// A dense matrix over GF(2), stored as a list of packed rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BitVector>,
}

/// Reduced row echelon form of a matrix, together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    /// Nonzero rows only, in pivot order.
    pub rows: Vec<BitVector>,
    /// `pivots[r]` is the leading column of `rows[r]`.
    pub pivots: Vec<usize>,
    pub cols: usize,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix {
            rows,
            cols,
            data: vec![BitVector::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i].set(i);
        }
        m
    }

    /// Builds a matrix from rows that must all have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<BitVector>) -> Result<Self> {
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != cols) {
            return Err(Error::invalid(alloc::format!(
                "row {i} has length {} but the matrix has {cols} columns",
                r.len()
            )));
        }
        Ok(BitMatrix {
            rows: rows.len(),
            cols,
            data: rows,
        })
    }

    /// Convenience constructor from 0/1 literals; panics on ragged input.
    pub fn from_dense(rows: &[&[u8]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows
            .iter()
            .map(|r| {
                assert_eq!(r.len(), cols, "ragged dense matrix");
                BitVector::from_bools(&r.iter().map(|&b| b & 1 == 1).collect::<Vec<_>>())
            })
            .collect();
        BitMatrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn row(&self, i: usize) -> &BitVector {
        &self.data[i]
    }

    pub fn row_vectors(&self) -> &[BitVector] {
        &self.data
    }

    pub fn into_rows(self) -> Vec<BitVector> {
        self.data
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.data[r].assign(c, value)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(BitVector::is_zero)
    }

    pub fn column(&self, c: usize) -> BitVector {
        let mut v = BitVector::zeros(self.rows);
        for (r, row) in self.data.iter().enumerate() {
            if row.get(c) {
                v.set(r);
            }
        }
        v
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for (r, row) in self.data.iter().enumerate() {
            for c in row.iter_ones() {
                t.data[c].set(r);
            }
        }
        t
    }

    /// `self · x`.
    pub fn mul_vec(&self, x: &BitVector) -> Result<BitVector> {
        if x.len() != self.cols {
            return Err(Error::invalid(alloc::format!(
                "vector of length {} against a matrix with {} columns",
                x.len(),
                self.cols
            )));
        }
        let mut out = BitVector::zeros(self.rows);
        for (r, row) in self.data.iter().enumerate() {
            if row.dot(x) {
                out.set(r);
            }
        }
        Ok(out)
    }

    /// `xᵀ · self`, i.e. the XOR of the rows selected by `x`.
    pub fn combine_rows(&self, x: &BitVector) -> Result<BitVector> {
        if x.len() != self.rows {
            return Err(Error::invalid(alloc::format!(
                "selector of length {} against a matrix with {} rows",
                x.len(),
                self.rows
            )));
        }
        let mut out = BitVector::zeros(self.cols);
        for r in x.iter_ones() {
            out ^= &self.data[r];
        }
        Ok(out)
    }

    /// Matrix product `self · rhs`.
    pub fn mul(&self, rhs: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::invalid(alloc::format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let data = self
            .data
            .iter()
            .map(|row| {
                let mut acc = BitVector::zeros(rhs.cols);
                for k in row.iter_ones() {
                    acc ^= &rhs.data[k];
                }
                acc
            })
            .collect();
        Ok(BitMatrix {
            rows: self.rows,
            cols: rhs.cols,
            data,
        })
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.cols {
            return Err(Error::invalid("vstack of matrices with different widths"));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(BitMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn echelon(&self) -> Echelon {
        echelon_rows(self.data.clone(), self.cols)
    }

    pub fn rank(&self) -> usize {
        self.echelon().rank()
    }

    /// Basis of `{x : self · x = 0}`, one vector per free column in
    /// increasing column order.
    pub fn kernel_basis(&self) -> Vec<BitVector> {
        let ech = self.echelon();
        kernel_from_echelon(&ech)
    }

    /// Some `x` with `self · x = b`, or `None` when `b` is outside the column
    /// space. Free variables are set to zero.
    pub fn solve(&self, b: &BitVector) -> Result<Option<BitVector>> {
        if b.len() != self.rows {
            return Err(Error::invalid(alloc::format!(
                "right-hand side of length {} for a matrix with {} rows",
                b.len(),
                self.rows
            )));
        }
        let augmented: Vec<BitVector> = self
            .data
            .iter()
            .enumerate()
            .map(|(r, row)| {
                let mut wide = BitVector::zeros(self.cols + 1);
                for c in row.iter_ones() {
                    wide.set(c);
                }
                if b.get(r) {
                    wide.set(self.cols);
                }
                wide
            })
            .collect();
        let ech = echelon_rows(augmented, self.cols + 1);
        if ech.pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = BitVector::zeros(self.cols);
        for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
            if row.get(self.cols) {
                x.set(p);
            }
        }
        Ok(Some(x))
    }

    /// A basis of the row space (the nonzero rows of the reduced echelon form).
    pub fn row_space_basis(&self) -> Vec<BitVector> {
        self.echelon().rows
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for row in &self.data {
            for c in 0..self.cols {
                f.write_str(if row.get(c) { "1" } else { "0" })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Reduced row echelon form of `rows` (each of length `cols`).
pub fn echelon_rows(mut rows: Vec<BitVector>, cols: usize) -> Echelon {
    let mut pivots = Vec::new();
    let mut next = 0;
    let mut col = 0;
    while col < cols && next < rows.len() {
        let wi = col / WORD_BITS;
        let bit = 1u64 << (col % WORD_BITS);
        let found = (next..rows.len()).find(|&r| rows[r].words[wi] & bit != 0);
        let Some(p) = found else {
            col += 1;
            continue;
        };
        rows.swap(next, p);
        let (head, tail) = rows.split_at_mut(next);
        let (pivot_row, rest) = tail.split_first_mut().expect("pivot row exists");
        for r in head.iter_mut().chain(rest.iter_mut()) {
            if r.words[wi] & bit != 0 {
                r.xor_from(pivot_row, wi);
            }
        }
        pivots.push(col);
        next += 1;
        col += 1;
    }
    rows.truncate(next);
    Echelon { rows, pivots, cols }
}

/// Kernel basis read off a reduced echelon form.
pub fn kernel_from_echelon(ech: &Echelon) -> Vec<BitVector> {
    let mut is_pivot = vec![false; ech.cols];
    for &p in &ech.pivots {
        is_pivot[p] = true;
    }
    (0..ech.cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = BitVector::zeros(ech.cols);
            v.set(free);
            for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
                if row.get(free) {
                    v.set(p);
                }
            }
            v
        })
        .collect()
}

/// Rank of the span of a list of equal-length vectors.
pub fn span_rank(vectors: &[BitVector], len: usize) -> usize {
    echelon_rows(vectors.to_vec(), len).rank()
}

/// True when every vector of `sub` lies in the span of `sup`.
pub fn span_contains(sup: &[BitVector], sub: &[BitVector], len: usize) -> bool {
    let base = span_rank(sup, len);
    let mut all = sup.to_vec();
    all.extend_from_slice(sub);
    span_rank(&all, len) == base
}
