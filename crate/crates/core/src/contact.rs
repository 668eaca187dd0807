//! Contact 5-manifolds supported by open books with identity monodromy.
//!
//! With a page X without 1-handles the pair (b₂(X), r(X)) is a complete
//! invariant of the supported contact manifold, which is then written
//! (S_{n,r}, ζ_{n,r}). S_{n,r} is #ₙS²×S³ for r even and #ₙS²×̃S³ for r odd.

use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;

use crate::acmoves::{reduce_handlebody, AcBudget, AcTrace, HandleReduction};
use crate::chern::rotation_divisor;
use crate::stein::{homology, StructureError, SteinHandlebody};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DiffeoType {
    /// #ₙ S² × S³
    TrivialBundleSum,
    /// #ₙ S² ×̃ S³
    TwistedBundleSum,
}

impl DiffeoType {
    pub fn from_r(r: &BigInt) -> Self {
        if r.is_even() {
            DiffeoType::TrivialBundleSum
        } else {
            DiffeoType::TwistedBundleSum
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            DiffeoType::TrivialBundleSum => "trivial_bundle_sum",
            DiffeoType::TwistedBundleSum => "twisted_bundle_sum",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "trivial_bundle_sum" => Some(DiffeoType::TrivialBundleSum),
            "twisted_bundle_sum" => Some(DiffeoType::TwistedBundleSum),
            _ => None,
        }
    }
}

impl fmt::Display for DiffeoType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ContactFiveClass {
    pub n: usize,
    pub r: BigInt,
    pub diffeo_type: DiffeoType,
}

impl ContactFiveClass {
    pub fn new(n: usize, r: BigInt) -> Self {
        let diffeo_type = DiffeoType::from_r(&r);
        Self { n, r, diffeo_type }
    }
}

impl fmt::Display for ContactFiveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(S_{{{n},{r}}}, ζ_{{{n},{r}}})", n = self.n, r = self.r)
    }
}

pub fn classify(x: &SteinHandlebody) -> Result<ContactFiveClass, StructureError> {
    let r = rotation_divisor(x)?;
    Ok(ContactFiveClass::new(homology(x).b2, r))
}

pub fn contactomorphic(a: &ContactFiveClass, b: &ContactFiveClass) -> bool {
    a.n == b.n && a.r == b.r
}

pub fn diffeomorphic_total_spaces(a: &ContactFiveClass, b: &ContactFiveClass) -> bool {
    a.n == b.n && a.r.is_even() == b.r.is_even()
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ClassifyError {
    #[error("unclassifiable: 1-handles survive a bounded Andrews–Curtis search")]
    Unclassifiable,
}

/// A classification, together with the move trace when 1-handles had to be
/// traded away first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classified {
    pub class: ContactFiveClass,
    pub ac_trace: Option<AcTrace>,
}

pub fn classify_with_reduction(
    x: &SteinHandlebody,
    budget: AcBudget,
) -> Result<Classified, ClassifyError> {
    match reduce_handlebody(x, budget) {
        HandleReduction::Unchanged => Ok(Classified {
            class: classify(x).expect("no 1-handles"),
            ac_trace: None,
        }),
        HandleReduction::Reduced { handlebody, trace } => Ok(Classified {
            class: classify(&handlebody).expect("reduced record has no 1-handles"),
            ac_trace: Some(trace),
        }),
        HandleReduction::Exhausted(_) => Err(ClassifyError::Unclassifiable),
    }
}
