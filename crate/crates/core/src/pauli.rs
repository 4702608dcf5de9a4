//! Phase-free Pauli operators in the binary symplectic representation.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::gf2::BitVector;

/// A Pauli operator up to phase: `X` where only the x bit is set, `Z` where
/// only the z bit is set, `Y` where both are.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliOp {
    x: BitVector,
    z: BitVector,
}

impl PauliOp {
    pub fn identity(n_qubits: usize) -> Self {
        PauliOp {
            x: BitVector::zeros(n_qubits),
            z: BitVector::zeros(n_qubits),
        }
    }

    pub fn from_masks(x: BitVector, z: BitVector) -> Result<Self> {
        if x.len() != z.len() {
            return Err(Error::invalid(alloc::format!(
                "x mask has {} qubits, z mask has {}",
                x.len(),
                z.len()
            )));
        }
        Ok(PauliOp { x, z })
    }

    /// Product of `σ^x` over `support`.
    pub fn x_type(n_qubits: usize, support: impl IntoIterator<Item = usize>) -> Self {
        PauliOp {
            x: BitVector::from_indices(n_qubits, support),
            z: BitVector::zeros(n_qubits),
        }
    }

    /// Product of `σ^z` over `support`.
    pub fn z_type(n_qubits: usize, support: impl IntoIterator<Item = usize>) -> Self {
        PauliOp {
            x: BitVector::zeros(n_qubits),
            z: BitVector::from_indices(n_qubits, support),
        }
    }

    /// Product of `σ^y` over `support`.
    pub fn y_type(n_qubits: usize, support: impl IntoIterator<Item = usize>) -> Self {
        let x = BitVector::from_indices(n_qubits, support);
        PauliOp { z: x.clone(), x }
    }

    #[inline]
    pub fn n_qubits(&self) -> usize {
        self.x.len()
    }

    pub fn x_mask(&self) -> &BitVector {
        &self.x
    }

    pub fn z_mask(&self) -> &BitVector {
        &self.z
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    fn check_size(&self, other: &PauliOp) -> Result<()> {
        if self.n_qubits() != other.n_qubits() {
            return Err(Error::invalid(alloc::format!(
                "Pauli operators on {} and {} qubits",
                self.n_qubits(),
                other.n_qubits()
            )));
        }
        Ok(())
    }

    /// Symplectic form `⟨x, z'⟩ + ⟨z, x'⟩ = 0 (mod 2)`.
    pub fn commutes(&self, other: &PauliOp) -> Result<bool> {
        self.check_size(other)?;
        Ok(self.x.dot(&other.z) == self.z.dot(&other.x))
    }

    /// Phase-free product.
    pub fn multiply(&self, other: &PauliOp) -> Result<PauliOp> {
        self.check_size(other)?;
        Ok(PauliOp {
            x: &self.x ^ &other.x,
            z: &self.z ^ &other.z,
        })
    }

    /// Number of qubits acted on nontrivially.
    pub fn weight(&self) -> usize {
        self.x
            .words()
            .iter()
            .zip(self.z.words())
            .map(|(a, b)| (a | b).count_ones() as usize)
            .sum()
    }

    /// Renders as `"X3 Z7 Y12"`; the identity renders as `"I"`.
    pub fn to_sparse_string(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        for q in 0..self.n_qubits() {
            let label = match (self.x.get(q), self.z.get(q)) {
                (false, false) => continue,
                (true, false) => 'X',
                (false, true) => 'Z',
                (true, true) => 'Y',
            };
            parts.push(alloc::format!("{label}{q}"));
        }
        if parts.is_empty() {
            String::from("I")
        } else {
            parts.join(" ")
        }
    }

    /// Parses the sparse form produced by [`PauliOp::to_sparse_string`].
    pub fn parse_sparse(n_qubits: usize, text: &str) -> Result<PauliOp> {
        let mut op = PauliOp::identity(n_qubits);
        let text = text.trim();
        if text == "I" || text.is_empty() {
            return Ok(op);
        }
        for token in text.split_whitespace() {
            let mut chars = token.chars();
            let kind = chars.next().unwrap_or(' ');
            let q: usize = chars
                .as_str()
                .parse()
                .map_err(|_| Error::invalid(alloc::format!("bad Pauli token {token:?}")))?;
            if q >= n_qubits {
                return Err(Error::invalid(alloc::format!(
                    "qubit {q} out of range for {n_qubits} qubits"
                )));
            }
            match kind {
                'X' => op.x.flip(q),
                'Z' => op.z.flip(q),
                'Y' => {
                    op.x.flip(q);
                    op.z.flip(q);
                }
                _ => return Err(Error::invalid(alloc::format!("bad Pauli token {token:?}"))),
            }
        }
        Ok(op)
    }
}

impl fmt::Display for PauliOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_sparse_string())
    }
}

impl fmt::Debug for PauliOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliOp[{}]({})", self.n_qubits(), self.to_sparse_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use proptest::prelude::*;

    #[test]
    fn single_qubit_relations() {
        let x1 = PauliOp::x_type(3, [1]);
        let z1 = PauliOp::z_type(3, [1]);
        let z2 = PauliOp::z_type(3, [2]);
        assert!(!x1.commutes(&z1).unwrap());
        assert!(x1.commutes(&z2).unwrap());
        let y1 = PauliOp::y_type(3, [1]);
        assert!(!y1.commutes(&x1).unwrap());
        assert!(!y1.commutes(&z1).unwrap());
        assert!(y1.commutes(&y1).unwrap());
    }

    #[test]
    fn products_and_weights() {
        let p = PauliOp::parse_sparse(5, "X0 Y2 Z4").unwrap();
        assert!(p.multiply(&p).unwrap().is_identity());
        assert_eq!(p.multiply(&PauliOp::identity(5)).unwrap(), p);
        assert_eq!(p.weight(), 3);
        assert_eq!(PauliOp::identity(5).weight(), 0);
        assert_eq!(p.to_string(), "X0 Y2 Z4");
        assert_eq!(PauliOp::identity(2).to_string(), "I");
    }

    #[test]
    fn size_mismatch_is_rejected() {
        let a = PauliOp::x_type(2, [0]);
        let b = PauliOp::z_type(3, [0]);
        assert!(a.commutes(&b).is_err());
        assert!(a.multiply(&b).is_err());
        assert!(PauliOp::parse_sparse(2, "X5").is_err());
        assert!(PauliOp::parse_sparse(2, "Q1").is_err());
    }

    fn pauli(n: usize) -> impl Strategy<Value = PauliOp> {
        (
            proptest::collection::vec(any::<bool>(), n),
            proptest::collection::vec(any::<bool>(), n),
        )
            .prop_map(|(x, z)| {
                PauliOp::from_masks(BitVector::from_bools(&x), BitVector::from_bools(&z)).unwrap()
            })
    }

    proptest! {
        #[test]
        fn commutation_is_symmetric(p in pauli(70), q in pauli(70)) {
            prop_assert_eq!(p.commutes(&q).unwrap(), q.commutes(&p).unwrap());
        }

        #[test]
        fn product_algebra(p in pauli(40), q in pauli(40), r in pauli(40)) {
            let pq = p.multiply(&q).unwrap();
            prop_assert_eq!(pq.multiply(&q).unwrap(), p.clone());
            prop_assert_eq!(pq.clone(), q.multiply(&p).unwrap());
            prop_assert_eq!(pq.multiply(&r).unwrap(), p.multiply(&q.multiply(&r).unwrap()).unwrap());
        }

        #[test]
        fn css_commutation_is_overlap_parity(x in proptest::collection::vec(any::<bool>(), 33),
                                             z in proptest::collection::vec(any::<bool>(), 33)) {
            let xs = BitVector::from_bools(&x);
            let zs = BitVector::from_bools(&z);
            let a = PauliOp::x_type(33, xs.iter_ones());
            let b = PauliOp::z_type(33, zs.iter_ones());
            prop_assert_eq!(a.commutes(&b).unwrap(), xs.overlap(&zs).is_multiple_of(2));
        }

        #[test]
        fn sparse_text_round_trips(p in pauli(20)) {
            prop_assert_eq!(PauliOp::parse_sparse(20, &p.to_string()).unwrap(), p);
        }
    }
}
