//! Exact integer linear algebra: sparse matrices, Smith normal form and the
//! homology of a two-term chain segment.

mod dense;
mod int;
mod snf;
mod sparse;

pub use dense::IntMatrix;
pub use int::Int;
pub use snf::{smith_normal_form, SnfResult, SnfTransforms};
pub use sparse::{SparseIntMatrix, MAX_DUMP_DIM};

use num_traits::ToPrimitive;
use thiserror::Error;

use crate::abelian::AbelianInvariants;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinearError {
    #[error("entry ({row}, {col}) outside a {rows}x{cols} matrix")]
    IndexOutOfBounds {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
    #[error("cannot compose {left:?} with {right:?}")]
    DimensionMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error(
        "boundary maps do not compose to zero (first witness: column {column} of the incoming map)"
    )]
    NotAComplex { column: usize },
    #[error("matrix dump line {line}: {msg}")]
    Dump { line: usize, msg: String },
    #[error("torsion coefficient {0} does not fit in 64 bits")]
    Overflow(String),
}

/// `ker(d_out) / im(d_in)` for a segment `C_in --d_in--> C --d_out--> C_out`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainHomology {
    pub torsion: AbelianInvariants,
    pub free_rank: usize,
}

/// Homology at the middle term of `d_out ∘ d_in`.
///
/// The torsion of `ker d_out / im d_in` equals the torsion of
/// `C / im d_in`, because `C / ker d_out` embeds in the free module `C_out`.
/// So the torsion is read off the Smith invariants of `d_in`, and the free
/// rank is `nullity(d_out) - rank(d_in)`.
pub fn homology(
    d_out: &SparseIntMatrix,
    d_in: &SparseIntMatrix,
) -> Result<ChainHomology, LinearError> {
    if d_out.cols() != d_in.rows() {
        return Err(LinearError::DimensionMismatch {
            left: (d_out.rows(), d_out.cols()),
            right: (d_in.rows(), d_in.cols()),
        });
    }
    check_complex(d_out, d_in)?;
    let snf_in = smith_normal_form(d_in, false);
    let rank_out = smith_normal_form(d_out, false).rank;
    let mut orders = Vec::new();
    for d in snf_in.torsion() {
        orders.push(
            d.to_u64()
                .ok_or_else(|| LinearError::Overflow(d.to_string()))?,
        );
    }
    let torsion = AbelianInvariants::from_cyclic_orders(&orders);
    Ok(ChainHomology {
        torsion,
        free_rank: d_out.cols() - rank_out - snf_in.rank,
    })
}

/// Verifies `d_out · d_in = 0`, naming the first offending column.
pub fn check_complex(d_out: &SparseIntMatrix, d_in: &SparseIntMatrix) -> Result<(), LinearError> {
    for c in 0..d_in.cols() {
        if !d_out.apply_to_sparse(d_in.column(c)).is_empty() {
            return Err(LinearError::NotAComplex { column: c });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_maps_give_free_homology() {
        let d_out = SparseIntMatrix::zero(1, 4);
        let d_in = SparseIntMatrix::zero(4, 2);
        let h = homology(&d_out, &d_in).unwrap();
        assert_eq!(h.free_rank, 4);
        assert!(h.torsion.is_trivial());
    }

    #[test]
    fn multiplication_by_two() {
        let d_out = SparseIntMatrix::zero(1, 1);
        let d_in = SparseIntMatrix::from_triplets(1, 1, vec![(0, 0, Int::from(2))]).unwrap();
        let h = homology(&d_out, &d_in).unwrap();
        assert_eq!(h.free_rank, 0);
        assert_eq!(h.torsion.factors(), &[2]);
    }

    #[test]
    fn nonzero_composition_rejected() {
        let d_out = SparseIntMatrix::from_triplets(1, 2, vec![(0, 0, Int::ONE)]).unwrap();
        let d_in =
            SparseIntMatrix::from_triplets(2, 2, vec![(1, 0, Int::ONE), (0, 1, Int::ONE)]).unwrap();
        assert_eq!(
            homology(&d_out, &d_in).unwrap_err(),
            LinearError::NotAComplex { column: 1 }
        );
    }

    #[test]
    fn nullity_of_outgoing_map() {
        // d_out = [1 1 0] has nullity 2; nothing comes in.
        let d_out =
            SparseIntMatrix::from_triplets(1, 3, vec![(0, 0, Int::ONE), (0, 1, Int::ONE)]).unwrap();
        let h = homology(&d_out, &SparseIntMatrix::zero(3, 0)).unwrap();
        assert_eq!(h.free_rank, 2);
    }
}
