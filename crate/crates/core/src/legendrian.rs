//! Classical invariants of Legendrian knots from counted front data.
//!
//! A front is recorded only by its crossing signs and cusp counts; planarity
//! or realizability of the data is not checked.

use alloc::vec::Vec;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FrontError {
    #[error("crossing {index} has sign {sign}, expected +1 or -1")]
    CrossingSign { index: usize, sign: i8 },
    #[error("total cusp count {total} is odd")]
    OddCuspCount { total: u64 },
    #[error("a knot front needs at least 2 cusps, found {total}")]
    TooFewCusps { total: u64 },
    #[error("tb + rot must be odd for a Legendrian knot (tb = {tb}, rot = {rot})")]
    Parity { tb: i64, rot: i64 },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FrontDiagram {
    pub crossings: Vec<i8>,
    pub up_cusps: u32,
    pub down_cusps: u32,
}

/// Direction of a stabilization. A positive one adds a pair of down cusps,
/// a negative one a pair of up cusps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stabilization {
    Positive,
    Negative,
}

impl FrontDiagram {
    pub fn new(crossings: Vec<i8>, up_cusps: u32, down_cusps: u32) -> Self {
        Self {
            crossings,
            up_cusps,
            down_cusps,
        }
    }

    /// The standard tb = −1 unknot front: one cusp of each kind.
    pub fn standard_unknot() -> Self {
        Self::new(Vec::new(), 1, 1)
    }

    pub fn check(&self) -> Result<(), FrontError> {
        if let Some((index, &sign)) = self
            .crossings
            .iter()
            .enumerate()
            .find(|(_, &s)| s != 1 && s != -1)
        {
            return Err(FrontError::CrossingSign { index, sign });
        }
        let total = self.up_cusps as u64 + self.down_cusps as u64;
        if total % 2 == 1 {
            return Err(FrontError::OddCuspCount { total });
        }
        if total < 2 {
            return Err(FrontError::TooFewCusps { total });
        }
        Ok(())
    }

    pub fn writhe(&self) -> i64 {
        self.crossings.iter().map(|&s| s as i64).sum()
    }

    pub fn stabilized(&self, kind: Stabilization) -> Self {
        let mut f = self.clone();
        match kind {
            Stabilization::Positive => f.down_cusps += 2,
            Stabilization::Negative => f.up_cusps += 2,
        }
        f
    }
}

/// writhe − (number of cusps) / 2
pub fn thurston_bennequin(f: &FrontDiagram) -> Result<i64, FrontError> {
    f.check()?;
    Ok(f.writhe() - (f.up_cusps as i64 + f.down_cusps as i64) / 2)
}

/// (down cusps − up cusps) / 2
pub fn rotation_number(f: &FrontDiagram) -> Result<i64, FrontError> {
    f.check()?;
    Ok((f.down_cusps as i64 - f.up_cusps as i64) / 2)
}

/// tb + rot is odd for every Legendrian knot.
pub fn validate_knot_parity(tb: i64, rot: i64) -> Result<(), FrontError> {
    if (tb + rot).rem_euclid(2) == 1 {
        Ok(())
    } else {
        Err(FrontError::Parity { tb, rot })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    #[test]
    fn unknot_fronts() {
        let u = FrontDiagram::standard_unknot();
        assert_eq!(thurston_bennequin(&u), Ok(-1));
        assert_eq!(rotation_number(&u), Ok(0));
        let s = FrontDiagram::new(vec![], 1, 3);
        assert_eq!(thurston_bennequin(&s), Ok(-2));
        assert_eq!(rotation_number(&s), Ok(1));
        let s2 = FrontDiagram::new(vec![], 5, 1);
        assert_eq!(rotation_number(&s2), Ok(-2));
    }

    #[test]
    fn right_handed_trefoil_reaches_max_tb() {
        // maximal tb of the right-handed trefoil is 1
        let t = FrontDiagram::new(vec![1, 1, 1], 2, 2);
        assert_eq!(thurston_bennequin(&t), Ok(1));
        assert_eq!(rotation_number(&t), Ok(0));
    }

    #[test]
    fn malformed_fronts() {
        assert_eq!(
            thurston_bennequin(&FrontDiagram::new(vec![], 1, 2)),
            Err(FrontError::OddCuspCount { total: 3 })
        );
        assert!(matches!(
            rotation_number(&FrontDiagram::new(vec![], 0, 0)),
            Err(FrontError::TooFewCusps { .. })
        ));
        assert!(matches!(
            FrontDiagram::new(vec![1, 2], 1, 1).check(),
            Err(FrontError::CrossingSign { index: 1, sign: 2 })
        ));
    }

    #[test]
    fn parity() {
        assert!(validate_knot_parity(-1, 0).is_ok());
        assert!(validate_knot_parity(0, 0).is_err());
        // fixed tb = r₁ + 1 with rotations of the parity of r₁
        for r1 in 0..6i64 {
            for k in 0..4 {
                assert!(validate_knot_parity(r1 + 1, r1 + 2 * k).is_ok());
            }
        }
        assert!(validate_knot_parity(-4, -7).is_ok());
    }

    fn front() -> impl Strategy<Value = FrontDiagram> {
        (
            proptest::collection::vec(prop_oneof![Just(1i8), Just(-1i8)], 0..12),
            0u32..8,
            0u32..8,
        )
            .prop_filter_map("even cusps", |(c, up, down)| {
                let f = FrontDiagram::new(c, up, down);
                f.check().ok().map(|_| f)
            })
    }

    proptest! {
        #[test]
        fn stabilization_law(f in front()) {
            let tb = thurston_bennequin(&f).unwrap();
            let rot = rotation_number(&f).unwrap();
            let pos = f.stabilized(Stabilization::Positive);
            let neg = f.stabilized(Stabilization::Negative);
            prop_assert_eq!(thurston_bennequin(&pos).unwrap(), tb - 1);
            prop_assert_eq!(rotation_number(&pos).unwrap(), rot + 1);
            prop_assert_eq!(thurston_bennequin(&neg).unwrap(), tb - 1);
            prop_assert_eq!(rotation_number(&neg).unwrap(), rot - 1);
            let parity = (tb + rot).rem_euclid(2);
            for g in [pos, neg] {
                let (t, r) = (thurston_bennequin(&g).unwrap(), rotation_number(&g).unwrap());
                prop_assert_eq!((t + r).rem_euclid(2), parity);
            }
        }
    }
}
