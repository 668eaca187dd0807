//! The first Chern class of a Stein handlebody.
//!
//! On the cochain level c₁ takes the value rot(Kᵢ) on the 2-handle hᵢ. Its
//! class in H² is written in the basis dual to the adapted C₂ basis of
//! [`ChainFrame`]: free coordinates are values on the H₂ basis, torsion
//! coordinates are residues modulo the invariant factors of ∂₂ that exceed 1.
//! Free coordinates depend on the chosen H₂ basis; their gcd does not.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::intlinalg::gcd_vector;
use crate::stein::{ChainFrame, StructureError, SteinHandlebody};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorsionCoordinate {
    pub residue: BigInt,
    pub order: BigInt,
}

impl TorsionCoordinate {
    /// Reduces `value` into `0..order`. `order` must exceed 1.
    pub fn new(value: &BigInt, order: BigInt) -> Self {
        assert!(order > BigInt::one(), "torsion order must exceed 1");
        Self {
            residue: value.mod_floor(&order),
            order,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CohomologyClass {
    pub free_coords: Vec<BigInt>,
    pub torsion_coords: Vec<TorsionCoordinate>,
}

impl CohomologyClass {
    pub fn is_empty(&self) -> bool {
        self.free_coords.is_empty() && self.torsion_coords.is_empty()
    }

    pub fn is_torsion(&self) -> bool {
        self.free_coords.iter().all(Zero::is_zero)
    }

    /// Largest n with [α] = n·α′ modulo torsion; 0 for torsion classes.
    pub fn divisibility(&self) -> BigInt {
        gcd_vector(&self.free_coords)
    }

    /// Pairing with an H₂ class given in basis coordinates; torsion pairs to 0.
    pub fn pair(&self, alpha: &[BigInt]) -> BigInt {
        self.free_coords.iter().zip(alpha).map(|(c, a)| c * a).sum()
    }

    pub fn negated(&self) -> Self {
        Self {
            free_coords: self.free_coords.iter().map(|c| -c).collect(),
            torsion_coords: self
                .torsion_coords
                .iter()
                .map(|t| TorsionCoordinate::new(&-&t.residue, t.order.clone()))
                .collect(),
        }
    }
}

impl fmt::Display for CohomologyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.free_coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")?;
        for t in &self.torsion_coords {
            write!(f, " + {} mod {}", t.residue, t.order)?;
        }
        Ok(())
    }
}

/// Rotation numbers, one per 2-handle.
pub fn c1_cochain(x: &SteinHandlebody) -> Vec<BigInt> {
    x.handles.iter().map(|h| BigInt::from(h.rot)).collect()
}

pub fn c1_class(x: &SteinHandlebody) -> CohomologyClass {
    class_of_cochain(&ChainFrame::new(x), &c1_cochain(x))
}

/// Class of a 2-cochain (values on the 2-handles) in the frame's basis.
pub fn class_of_cochain(frame: &ChainFrame, cochain: &[BigInt]) -> CohomologyClass {
    let adapted = |j: usize| -> BigInt {
        (0..cochain.len())
            .map(|i| &cochain[i] * &frame.snf.v_inv[(i, j)])
            .sum()
    };
    let rank = frame.rank();
    let n = cochain.len();
    CohomologyClass {
        free_coords: (rank..n).map(adapted).collect(),
        torsion_coords: frame
            .torsion_generators()
            .into_iter()
            .map(|(j, order)| TorsionCoordinate::new(&adapted(j), order))
            .collect(),
    }
}

pub fn c1_divisibility(x: &SteinHandlebody) -> BigInt {
    c1_class(x).divisibility()
}

/// gcd of the rotation numbers; 0 when there are no 2-handles or all
/// rotations vanish. Defined only without 1-handles.
pub fn rotation_divisor(x: &SteinHandlebody) -> Result<BigInt, StructureError> {
    if x.one_handles > 0 {
        return Err(StructureError::HasOneHandles(x.one_handles));
    }
    Ok(gcd_vector(&c1_cochain(x)).abs())
}
