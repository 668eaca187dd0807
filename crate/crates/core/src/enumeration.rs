//! Finite candidate sets for the first Chern class of a Stein structure on a
//! fixed handlebody.
//!
//! If the basis class vᵢ of H₂ is represented by a surface of genus gᵢ then
//! every Stein structure satisfies |⟨c₁, vᵢ⟩| + vᵢ·vᵢ ≤ 2gᵢ − 2. Together with
//! the finitely many torsion residues this leaves finitely many classes.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::chern::{c1_class, CohomologyClass, TorsionCoordinate};
use crate::genus::GenusOracle;
use crate::intlinalg::form_properties;
use crate::stein::{chain_boundary, presentation, validate, ChainFrame, SteinHandlebody};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationOptions {
    /// Keep only characteristic classes: ⟨c, vᵢ⟩ ≡ vᵢ·vᵢ (mod 2). The first
    /// Chern class of an almost complex structure is always characteristic.
    pub characteristic_parity: bool,
    /// Also test every other oracle entry against the adjunction inequality.
    pub extra_oracle_classes: bool,
    pub max_candidates: u64,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        Self {
            characteristic_parity: true,
            extra_oracle_classes: false,
            max_candidates: 1_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EnumerationError {
    #[error("oracle has no entry for basis class {0:?}")]
    MissingOracle(Vec<BigInt>),
    #[error(
        "oracle is inconsistent with the adjunction inequality: class {class:?} has genus bound {genus} but self-intersection {self_int}"
    )]
    Inconsistent {
        class: Vec<BigInt>,
        genus: u64,
        self_int: BigInt,
    },
    #[error("oracle class {0:?} has the wrong number of coordinates")]
    Dimension(Vec<BigInt>),
    #[error("{count} candidates exceed the limit {limit}")]
    TooMany { count: BigInt, limit: u64 },
}

fn unit(n: usize, i: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); n];
    v[i] = BigInt::one();
    v
}

/// 2g − 2 − α·α, the bound on |⟨c, α⟩|.
fn pairing_bound(genus: u64, self_int: &BigInt) -> BigInt {
    BigInt::from(genus) * 2 - 2 - self_int
}

pub fn enumerate_c1_candidates(
    x: &SteinHandlebody,
    oracle: &GenusOracle,
) -> Result<Vec<CohomologyClass>, EnumerationError> {
    enumerate_c1_candidates_with(x, oracle, EnumerationOptions::default())
}

/// Sorted, deduplicated candidate classes.
pub fn enumerate_c1_candidates_with(
    x: &SteinHandlebody,
    oracle: &GenusOracle,
    opts: EnumerationOptions,
) -> Result<Vec<CohomologyClass>, EnumerationError> {
    let frame = ChainFrame::new(x);
    let q = frame.intersection_form(x);
    let b2 = frame.b2();
    let mut ranges: Vec<Vec<BigInt>> = Vec::with_capacity(b2);
    for i in 0..b2 {
        let v = unit(b2, i);
        let genus = oracle
            .lookup(&v)
            .ok_or_else(|| EnumerationError::MissingOracle(v.clone()))?;
        let s = &q[(i, i)];
        let bound = pairing_bound(genus, s);
        if bound.is_negative() {
            return Err(EnumerationError::Inconsistent {
                class: v,
                genus,
                self_int: s.clone(),
            });
        }
        let mut values = Vec::new();
        let mut c = -bound.clone();
        while c <= bound {
            if !opts.characteristic_parity || (&c - s).is_even() {
                values.push(c.clone());
            }
            c += 1;
        }
        ranges.push(values);
    }
    let torsion = frame.torsion_generators();
    let mut count = BigInt::one();
    for r in &ranges {
        count *= r.len();
    }
    for (_, order) in &torsion {
        count *= order;
    }
    if count > BigInt::from(opts.max_candidates) {
        return Err(EnumerationError::TooMany {
            count,
            limit: opts.max_candidates,
        });
    }
    let extra: Vec<(Vec<BigInt>, BigInt)> = if opts.extra_oracle_classes {
        let mut out = Vec::new();
        for (class, genus) in oracle.entries() {
            if class.len() != b2 {
                return Err(EnumerationError::Dimension(class.clone()));
            }
            let s = q.bilinear(class, class).expect("dimension checked");
            let bound = pairing_bound(genus, &s);
            if bound.is_negative() {
                return Err(EnumerationError::Inconsistent {
                    class: class.clone(),
                    genus,
                    self_int: s,
                });
            }
            out.push((class.clone(), bound));
        }
        out
    } else {
        Vec::new()
    };

    let torsion_ranges: Vec<(BigInt, usize)> = torsion
        .iter()
        .map(|(_, o)| (o.clone(), o.to_usize().expect("bounded by max_candidates")))
        .collect();
    let mut out = Vec::with_capacity(count.to_usize().unwrap_or(0));
    let mut free = vec![0usize; ranges.len()];
    let mut tors = vec![0usize; torsion_ranges.len()];
    if ranges.iter().any(|r| r.is_empty()) {
        return Ok(out);
    }
    loop {
        let class = CohomologyClass {
            free_coords: free.iter().zip(&ranges).map(|(&k, r)| r[k].clone()).collect(),
            torsion_coords: tors
                .iter()
                .zip(&torsion_ranges)
                .map(|(&k, (o, _))| TorsionCoordinate::new(&BigInt::from(k), o.clone()))
                .collect(),
        };
        let keep = extra
            .iter()
            .all(|(alpha, bound)| class.pair(alpha).abs() <= *bound);
        if keep {
            out.push(class);
        }
        if !advance(&mut tors, |i| torsion_ranges[i].1)
            && !advance(&mut free, |i| ranges[i].len())
        {
            break;
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Odometer step; false once every digit has wrapped.
fn advance(digits: &mut [usize], radix: impl Fn(usize) -> usize) -> bool {
    for i in (0..digits.len()).rev() {
        digits[i] += 1;
        if digits[i] < radix(i) {
            return true;
        }
        digits[i] = 0;
    }
    false
}

/// Number of candidate classes; an upper bound for the number of first
/// Chern classes of Stein structures on x.
pub fn nc_upper_bound(x: &SteinHandlebody, oracle: &GenusOracle) -> Result<usize, EnumerationError> {
    Ok(enumerate_c1_candidates(x, oracle)?.len())
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EvidenceError {
    #[error("no records")]
    Empty,
    #[error("record {index} does not validate")]
    Invalid { index: usize },
    #[error("record {index} differs from record 0 in {what}; they may present different manifolds")]
    Mismatch { index: usize, what: &'static str },
}

/// Number of distinct first Chern classes among records asserted to present
/// the same smooth manifold. Records must share b₂, form properties,
/// abelianized π₁ and the 2-chain boundary, so their classes are written in
/// the same coordinates.
pub fn nc_lower_bound(records: &[SteinHandlebody]) -> Result<usize, EvidenceError> {
    let first = records.first().ok_or(EvidenceError::Empty)?;
    for (index, x) in records.iter().enumerate() {
        if validate(x).is_err() {
            return Err(EvidenceError::Invalid { index });
        }
    }
    let frame0 = ChainFrame::new(first);
    let form0 = form_properties(&frame0.intersection_form(first)).expect("symmetric");
    let ab0 = presentation(first).abelianization();
    let boundary0 = chain_boundary(first);
    let mut classes = Vec::with_capacity(records.len());
    for (index, x) in records.iter().enumerate() {
        let frame = ChainFrame::new(x);
        let mismatch = |what| EvidenceError::Mismatch { index, what };
        if frame.b2() != frame0.b2() {
            return Err(mismatch("b2"));
        }
        if form_properties(&frame.intersection_form(x)).expect("symmetric") != form0 {
            return Err(mismatch("intersection form properties"));
        }
        if presentation(x).abelianization() != ab0 {
            return Err(mismatch("abelianization"));
        }
        if chain_boundary(x) != boundary0 {
            return Err(mismatch("handle attaching words"));
        }
        classes.push(c1_class(x));
    }
    classes.sort();
    classes.dedup();
    Ok(classes.len())
}
