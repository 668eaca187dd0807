//! Generators for the standard example families, as abstract handlebody
//! records without 1-handles.
//!
//! - X_p: two 2-handles with rotation numbers 0 and p on a rank-2 indefinite
//!   unimodular form.
//! - Y_k: k unlinked tb = −1 unknots.
//! - Z_{n,p} = X_p ♮ Y_{n−2}.
//! - torus family: one handle of fixed framing r₁ and rotation rᵢ, plus Y_{k−1}.
//!
//! The records carry the invariants of these manifolds only; the Legendrian
//! fronts are not reconstructed.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::intlinalg::IntegerMatrix;
use crate::stein::{boundary_connected_sum, SteinHandlebody, TwoHandle};

/// Attached to every generated record by the file-format layer.
pub const MODEL_NOTE: &str =
    "abstract model: 1-handle-free record carrying the classification data; fronts and Kirby moves are not modeled";

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FamilyError {
    #[error("Z_{{n,p}} needs n ≥ 2, got {0}")]
    RankTooSmall(usize),
    #[error("the torus family needs at least one rotation number")]
    Empty,
    #[error("rotation numbers must share a parity: {first} and {other}")]
    MixedParity { first: u32, other: u32 },
    #[error("the torus family needs k ≥ 1, got {0}")]
    KTooSmall(usize),
}

/// Rotations (0, p). For even p both handles have tb = 1 and the form is the
/// hyperbolic plane H; for odd p the parity of tb + rot forces an odd framing
/// on the second handle and the form is [[0, 1], [1, 1]].
pub fn build_xp(p: u32) -> SteinHandlebody {
    let p = i64::from(p);
    if p % 2 == 0 {
        SteinHandlebody::new(
            0,
            vec![TwoHandle::new(1, 0), TwoHandle::new(1, p)],
            IntegerMatrix::from_rows(&[[0, 1], [1, 0]]).expect("2x2"),
        )
    } else {
        SteinHandlebody::new(
            0,
            vec![TwoHandle::new(1, 0), TwoHandle::new(2, p)],
            IntegerMatrix::from_rows(&[[0, 1], [1, 1]]).expect("2x2"),
        )
    }
}

pub fn build_y(k: usize) -> SteinHandlebody {
    SteinHandlebody::unlinked(vec![TwoHandle::unknot(); k])
}

pub fn build_znp(n: usize, p: u32) -> Result<SteinHandlebody, FamilyError> {
    if n < 2 {
        return Err(FamilyError::RankTooSmall(n));
    }
    Ok(boundary_connected_sum(&build_xp(p), &build_y(n - 2)))
}

/// One record per rᵢ: a knot handle with tb = r₁ + 1 and rot = rᵢ, summed
/// with Y_{k−1}.
pub fn build_torus_family(rs: &[u32], k: usize) -> Result<Vec<SteinHandlebody>, FamilyError> {
    let &first = rs.first().ok_or(FamilyError::Empty)?;
    if k == 0 {
        return Err(FamilyError::KTooSmall(k));
    }
    if let Some(&other) = rs.iter().find(|&&r| r % 2 != first % 2) {
        return Err(FamilyError::MixedParity { first, other });
    }
    let tb = i64::from(first) + 1;
    Ok(rs
        .iter()
        .map(|&r| {
            let knot = SteinHandlebody::unlinked(vec![TwoHandle::new(tb, i64::from(r))]);
            boundary_connected_sum(&knot, &build_y(k - 1))
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyMember {
    pub id: String,
    pub handlebody: SteinHandlebody,
}

/// The arithmetic progression Z_{n,start}, Z_{n,start+step}, …; finite
/// prefixes stand in for the infinite family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ZnpSequence {
    pub n: usize,
    pub start: u32,
    pub step: u32,
}

impl ZnpSequence {
    pub fn new(n: usize, start: u32, step: u32) -> Result<Self, FamilyError> {
        if n < 2 {
            return Err(FamilyError::RankTooSmall(n));
        }
        Ok(Self { n, start, step })
    }

    pub fn p(&self, i: u32) -> u32 {
        self.start + self.step * i
    }

    pub fn member(&self, i: u32) -> FamilyMember {
        let p = self.p(i);
        FamilyMember {
            id: format!("Z_{},{}", self.n, p),
            handlebody: build_znp(self.n, p).expect("n checked"),
        }
    }

    pub fn prefix(&self, len: u32) -> Vec<FamilyMember> {
        (0..len).map(|i| self.member(i)).collect()
    }

    /// True when the divisibilities p are pairwise distinct along the whole
    /// sequence and grow without bound.
    pub fn divisibility_unbounded(&self) -> bool {
        self.step > 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chern::{c1_divisibility, rotation_divisor};
    use crate::contact::{classify, DiffeoType};
    use crate::intlinalg::{form_properties, Definiteness};
    use crate::stein::{homology, validate};
    use num_bigint::BigInt;

    #[test]
    fn xp_data() {
        for p in [0u32, 1, 2, 5, 8] {
            let x = build_xp(p);
            assert!(validate(&x).is_ok(), "p = {p}");
            assert_eq!(x.rotations(), vec![0, i64::from(p)]);
            assert_eq!(rotation_divisor(&x), Ok(BigInt::from(p)));
            let f = form_properties(&x.linking).unwrap();
            assert!(f.unimodular);
            assert_eq!(f.definiteness, Definiteness::Indefinite);
            assert_eq!(f.even, p % 2 == 0);
        }
    }

    #[test]
    fn y_data() {
        assert_eq!(build_y(0), SteinHandlebody::disk());
        let y = build_y(3);
        assert!(validate(&y).is_ok());
        assert_eq!(homology(&y).b2, 3);
        assert_eq!(rotation_divisor(&y), Ok(BigInt::from(0)));
        assert_eq!(y.linking, IntegerMatrix::diagonal_from(&[-2, -2, -2]));
    }

    #[test]
    fn znp_data() {
        assert_eq!(build_znp(1, 3), Err(FamilyError::RankTooSmall(1)));
        let z = build_znp(3, 4).unwrap();
        let c = classify(&z).unwrap();
        assert_eq!((c.n, c.r.clone()), (3, BigInt::from(4)));
        assert_eq!(c.diffeo_type, DiffeoType::TrivialBundleSum);
        let c = classify(&build_znp(3, 5).unwrap()).unwrap();
        assert_eq!(c.diffeo_type, DiffeoType::TwistedBundleSum);
        for n in 2..7 {
            for p in 0..11 {
                let z = build_znp(n, p).unwrap();
                assert_eq!(homology(&z).b2, n);
                assert_eq!(c1_divisibility(&z), BigInt::from(p));
            }
        }
    }

    #[test]
    fn torus_family() {
        let fam = build_torus_family(&[1, 3], 2).unwrap();
        assert_eq!(fam.len(), 2);
        assert_eq!(fam[0].linking, fam[1].linking);
        assert_eq!(fam[0].handles[0].tb, fam[1].handles[0].tb);
        assert_eq!(fam[0].handles[0].framing(), 1);
        let r: Vec<_> = fam.iter().map(|x| classify(x).unwrap().r).collect();
        assert_eq!(r, vec![BigInt::from(1), BigInt::from(3)]);
        assert_eq!(
            build_torus_family(&[1, 2], 1),
            Err(FamilyError::MixedParity { first: 1, other: 2 })
        );
        assert_eq!(build_torus_family(&[], 1), Err(FamilyError::Empty));
        let single = build_torus_family(&[2], 3).unwrap();
        assert_eq!(classify(&single[0]).unwrap().n, 3);
    }

    #[test]
    fn sequence_prefix() {
        let s = ZnpSequence::new(3, 0, 2).unwrap();
        let m = s.prefix(3);
        assert_eq!(m[2].id, "Z_3,4");
        assert_eq!(m[2].handlebody, build_znp(3, 4).unwrap());
    }
}
