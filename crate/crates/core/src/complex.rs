//! Cubical cell complex of the periodic lattice `Z_L^D` with GF(2) boundary
//! operators.
//!
//! A k-cell is a base vertex together with a sorted set of k directions it
//! extends along. Dense indices are `vertex_index * C(D, k) + subset_rank`,
//! where vertices are numbered row-major (first coordinate most significant)
//! and direction subsets are ranked lexicographically.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};

/// Largest supported lattice dimension.
pub const MAX_DIM: usize = 8;

#[derive(Clone, Debug)]
pub struct HypercubicComplex {
    dim: usize,
    size: usize,
    n_vertices: usize,
    /// `subsets[k]` lists the k-element direction subsets in lexicographic order.
    subsets: Vec<Vec<Vec<usize>>>,
    /// `subset_rank[mask]` is the rank of the subset `mask` within its size class.
    subset_rank: Vec<usize>,
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

impl HypercubicComplex {
    pub fn new(dim: usize, size: usize) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::invalid(alloc::format!(
                "lattice dimension must be in 1..={MAX_DIM}, got {dim}"
            )));
        }
        if size < 2 {
            return Err(Error::invalid(alloc::format!(
                "linear size must be at least 2, got {size}"
            )));
        }
        let n_vertices = size
            .checked_pow(dim as u32)
            .ok_or_else(|| Error::invalid("lattice too large"))?;
        let subsets: Vec<Vec<Vec<usize>>> = (0..=dim).map(|k| combinations(dim, k)).collect();
        let mut subset_rank = vec![0; 1 << dim];
        for class in &subsets {
            for (rank, s) in class.iter().enumerate() {
                let mask: usize = s.iter().map(|&d| 1 << d).sum();
                subset_rank[mask] = rank;
            }
        }
        Ok(HypercubicComplex {
            dim,
            size,
            n_vertices,
            subsets,
            subset_rank,
        })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    /// `C(D, k) · L^D`, zero outside `0..=D`.
    pub fn n_cells(&self, k: usize) -> usize {
        if k > self.dim {
            0
        } else {
            self.subsets[k].len() * self.n_vertices
        }
    }

    /// The k-element direction subsets, in index order.
    pub fn direction_sets(&self, k: usize) -> &[Vec<usize>] {
        &self.subsets[k]
    }

    pub fn vertex_index(&self, coords: &[usize]) -> usize {
        debug_assert_eq!(coords.len(), self.dim);
        coords.iter().fold(0, |acc, &c| acc * self.size + c % self.size)
    }

    pub fn vertex_coords(&self, mut index: usize) -> Vec<usize> {
        let mut coords = vec![0; self.dim];
        for slot in coords.iter_mut().rev() {
            *slot = index % self.size;
            index /= self.size;
        }
        coords
    }

    /// Vertex reached from `vertex` by `delta` steps along `direction`.
    pub fn shift(&self, vertex: usize, direction: usize, delta: isize) -> usize {
        let stride = self.size.pow((self.dim - 1 - direction) as u32);
        let coord = (vertex / stride) % self.size;
        let l = self.size as isize;
        let moved = ((coord as isize + delta) % l + l) % l;
        vertex - coord * stride + moved as usize * stride
    }

    /// Dense index of the cell at `vertex` spanning the sorted `directions`.
    pub fn cell_index(&self, vertex: usize, directions: &[usize]) -> usize {
        let k = directions.len();
        let mask: usize = directions.iter().map(|&d| 1 << d).sum();
        vertex * self.subsets[k].len() + self.subset_rank[mask]
    }

    /// `(base vertex, directions)` of the k-cell with dense index `index`.
    pub fn cell(&self, k: usize, index: usize) -> (usize, &[usize]) {
        let per = self.subsets[k].len();
        (index / per, &self.subsets[k][index % per])
    }

    /// The 2k faces of a k-cell (with repetition only if faces coincide).
    pub fn faces(&self, k: usize, index: usize) -> Vec<usize> {
        let (vertex, dirs) = self.cell(k, index);
        let mut out = Vec::with_capacity(2 * k);
        for (pos, &d) in dirs.iter().enumerate() {
            let mut rest: Vec<usize> = dirs.to_vec();
            rest.remove(pos);
            out.push(self.cell_index(vertex, &rest));
            out.push(self.cell_index(self.shift(vertex, d, 1), &rest));
        }
        out
    }

    /// `∂_k`: one row per (k−1)-cell, one column per k-cell.
    pub fn boundary_matrix(&self, k: usize) -> Result<BitMatrix> {
        if k == 0 || k > self.dim {
            return Err(Error::invalid(alloc::format!(
                "boundary degree must be in 1..={}, got {k}",
                self.dim
            )));
        }
        let mut m = BitMatrix::zeros(self.n_cells(k - 1), self.n_cells(k));
        for cell in 0..self.n_cells(k) {
            for face in self.faces(k, cell) {
                let cur = m.get(face, cell);
                m.set(face, cell, !cur);
            }
        }
        Ok(m)
    }

    /// Basis of the k-cycles, `ker ∂_k` (all k-chains when k = 0).
    pub fn cycle_space(&self, k: usize) -> Result<Vec<BitVector>> {
        if k > self.dim {
            return Err(Error::invalid(alloc::format!("degree {k} exceeds dimension")));
        }
        if k == 0 {
            return Ok(BitMatrix::identity(self.n_cells(0)).into_rows());
        }
        Ok(self.boundary_matrix(k)?.kernel_basis())
    }

    /// Basis of the k-boundaries, `im ∂_{k+1}` (empty when k = D).
    pub fn boundary_space(&self, k: usize) -> Result<Vec<BitVector>> {
        if k > self.dim {
            return Err(Error::invalid(alloc::format!("degree {k} exceeds dimension")));
        }
        if k == self.dim {
            return Ok(Vec::new());
        }
        Ok(self.boundary_matrix(k + 1)?.transpose().row_space_basis())
    }

    /// `dim ker ∂_k − rank ∂_{k+1}`.
    pub fn homology_rank(&self, k: usize) -> usize {
        if k > self.dim {
            return 0;
        }
        let rank = |j: usize| -> usize {
            if j == 0 || j > self.dim {
                0
            } else {
                self.boundary_matrix(j).expect("degree in range").rank()
            }
        };
        let cycles = self.n_cells(k) - rank(k);
        cycles - rank(k + 1)
    }

    /// Chain of the boundary of one top-dimensional cell rooted at `vertex`,
    /// as a (D−1)-chain.
    pub fn top_cell_boundary(&self, vertex: usize) -> BitVector {
        let all: Vec<usize> = (0..self.dim).collect();
        let top = self.cell_index(vertex, &all);
        BitVector::from_indices(self.n_cells(self.dim - 1), self.faces(self.dim, top))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::span_contains;

    #[test]
    fn cell_counts() {
        let c = HypercubicComplex::new(4, 2).unwrap();
        let counts: Vec<usize> = (0..=4).map(|k| c.n_cells(k)).collect();
        assert_eq!(counts, vec![16, 64, 96, 64, 16]);
        for d in 1..=4 {
            for l in 2..=3 {
                let c = HypercubicComplex::new(d, l).unwrap();
                let euler: isize = (0..=d)
                    .map(|k| if k % 2 == 0 { 1 } else { -1 } * c.n_cells(k) as isize)
                    .sum();
                assert_eq!(euler, 0, "D={d} L={l}");
            }
        }
    }

    #[test]
    fn rejects_degenerate_sizes() {
        assert!(HypercubicComplex::new(2, 1).is_err());
        assert!(HypercubicComplex::new(0, 3).is_err());
        let c = HypercubicComplex::new(2, 3).unwrap();
        assert!(c.boundary_matrix(0).is_err());
        assert!(c.boundary_matrix(3).is_err());
    }

    #[test]
    fn indexing_round_trips() {
        let c = HypercubicComplex::new(3, 3).unwrap();
        for k in 0..=3 {
            for idx in 0..c.n_cells(k) {
                let (v, dirs) = c.cell(k, idx);
                assert_eq!(c.cell_index(v, dirs), idx);
            }
        }
        for v in 0..c.n_vertices() {
            assert_eq!(c.vertex_index(&c.vertex_coords(v)), v);
            for d in 0..3 {
                assert_eq!(c.shift(c.shift(v, d, 1), d, -1), v);
            }
        }
        // Row-major: last coordinate varies fastest.
        assert_eq!(c.vertex_coords(1), vec![0, 0, 1]);
        assert_eq!(c.shift(0, 0, 1), 9);
    }

    #[test]
    fn chain_boundary_has_two_endpoints() {
        let c = HypercubicComplex::new(1, 3).unwrap();
        let d1 = c.boundary_matrix(1).unwrap();
        for col in 0..3 {
            assert_eq!(d1.column(col).weight(), 2);
        }
    }

    #[test]
    fn boundary_squares_to_zero() {
        for d in 1..=4 {
            for l in 2..=3 {
                let c = HypercubicComplex::new(d, l).unwrap();
                for k in 2..=d {
                    let lower = c.boundary_matrix(k - 1).unwrap();
                    let upper = c.boundary_matrix(k).unwrap();
                    assert!(lower.mul(&upper).unwrap().is_zero(), "D={d} L={l} k={k}");
                }
            }
        }
    }

    #[test]
    fn four_torus_shapes() {
        let c = HypercubicComplex::new(4, 2).unwrap();
        let d3 = c.boundary_matrix(3).unwrap();
        assert_eq!((d3.rows(), d3.cols()), (96, 64));
        assert_eq!(c.homology_rank(0), 1);
        assert_eq!(c.homology_rank(3), 4);
        let z3 = c.cycle_space(3).unwrap();
        let b3 = c.boundary_space(3).unwrap();
        assert_eq!(z3.len(), b3.len() + 4);
        let ker_d4 = c.boundary_matrix(4).unwrap().kernel_basis().len();
        assert_eq!(b3.len(), 16 - ker_d4);
        assert!(span_contains(&z3, &b3, 64));
        let hyper = c.top_cell_boundary(5);
        assert_eq!(hyper.weight(), 8);
        assert!(span_contains(&z3, &[hyper], 64));
    }

    #[test]
    fn torus_betti_numbers() {
        let t2 = HypercubicComplex::new(2, 3).unwrap();
        assert_eq!(
            (0..=2).map(|k| t2.homology_rank(k)).collect::<Vec<_>>(),
            vec![1, 2, 1]
        );
        let t3 = HypercubicComplex::new(3, 2).unwrap();
        assert_eq!(
            (0..=3).map(|k| t3.homology_rank(k)).collect::<Vec<_>>(),
            vec![1, 3, 3, 1]
        );
    }
}
