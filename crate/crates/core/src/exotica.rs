//! Detecting pairwise non-diffeomorphic members of a family of Stein
//! handlebodies.
//!
//! Fix a matrix q. If the divisibilities dᵢ of c₁ along a family with
//! intersection matrix q are pairwise distinct then dᵢ → ∞, so the
//! adjunction lower bounds for the Q-genus tend to infinity and infinitely
//! many members are pairwise non-diffeomorphic. On a finite prefix we exhibit
//! the members realizing strictly increasing lower bounds.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;

use crate::acmoves::AcBudget;
use crate::chern::c1_divisibility;
use crate::contact::{classify_with_reduction, ContactFiveClass};
use crate::families::FamilyMember;
use crate::genus::{q_genus_lb, q_genus_search, q_genus_ub_min, GenusError, GenusOracle};
use crate::intlinalg::IntegerMatrix;
use crate::stein::{homology, intersection_form, validate};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    InfiniteExoticSubfamily,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::InfiniteExoticSubfamily => "infinite_exotic_subfamily",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MemberReport {
    pub id: String,
    pub divisibility: BigInt,
    pub contact_class: Option<ContactFiveClass>,
    /// Absent when the member was excluded.
    pub q_genus_lower: Option<BigInt>,
    /// d, m_min, m_max feeding the lower bound.
    pub inequality: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExoticaReport {
    pub members: Vec<MemberReport>,
    pub verdict: Verdict,
    /// Ids in order of strictly increasing lower bounds.
    pub witness: Vec<String>,
    pub notes: Vec<String>,
    /// Set with the positive verdict: pairwise distinct divisibilities are
    /// unbounded, hence so are the lower bounds.
    pub unbounded_lower_bounds: bool,
}

impl ExoticaReport {
    fn inconclusive(members: Vec<MemberReport>, notes: Vec<String>) -> Self {
        Self {
            members,
            verdict: Verdict::Inconclusive,
            witness: Vec::new(),
            notes,
            unbounded_lower_bounds: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ExoticaError {
    #[error("a family needs at least 2 members, got {0}")]
    TooSmall(usize),
    #[error("member {id} is unclassifiable: 1-handles survive the Andrews–Curtis search")]
    Unclassifiable { id: String },
    #[error("member {id} has b2 = {found}, expected {expected}")]
    B2Mismatch {
        id: String,
        expected: usize,
        found: usize,
    },
    #[error("member {id} has torsion in H²")]
    Torsion { id: String },
    #[error("member {id} does not validate")]
    Invalid { id: String },
    #[error(transparent)]
    Genus(#[from] GenusError),
    #[error("oracle upper bound {upper} is below the lower bound {lower}; the oracle is unsound")]
    UnsoundOracle { lower: BigInt, upper: u64 },
}

fn explain(d: &BigInt, q: &IntegerMatrix, lower: &BigInt) -> String {
    let diag = q.diagonal();
    let m_min = diag.iter().min().expect("nonempty");
    let m_max = diag.iter().max().expect("nonempty");
    format!(
        "d = {d}, m_min = {m_min}, m_max = {m_max}: lower = max(0, ⌈(d + m_min + 2)/2⌉, ⌈(m_max + 2)/2⌉) = {lower}"
    )
}

/// Divisibility route. Members failing the compatibility checks against q
/// are excluded with a note.
pub fn detect_by_divisibility(
    family: &[FamilyMember],
    q: &IntegerMatrix,
) -> Result<ExoticaReport, ExoticaError> {
    if family.len() < 2 {
        return Err(ExoticaError::TooSmall(family.len()));
    }
    let mut members = Vec::with_capacity(family.len());
    let mut notes = Vec::new();
    for m in family {
        let d = c1_divisibility(&m.handlebody);
        let (lower, inequality) = if validate(&m.handlebody).is_err() {
            notes.push(format!("{}: excluded, does not validate", m.id));
            (None, None)
        } else {
            match q_genus_lb(&m.handlebody, q) {
                Ok(b) => {
                    let e = explain(&d, q, &b.lower);
                    (Some(b.lower), Some(e))
                }
                Err(e) => {
                    notes.push(format!("{}: excluded, {e}", m.id));
                    (None, None)
                }
            }
        };
        members.push(MemberReport {
            id: m.id.clone(),
            divisibility: d,
            contact_class: None,
            q_genus_lower: lower,
            inequality,
        });
    }
    Ok(conclude(members, notes))
}

fn conclude(members: Vec<MemberReport>, mut notes: Vec<String>) -> ExoticaReport {
    let mut kept: Vec<&MemberReport> = members.iter().filter(|m| m.q_genus_lower.is_some()).collect();
    if kept.len() < 2 {
        notes.push(String::from("fewer than 2 members compatible with q"));
        return ExoticaReport::inconclusive(members, notes);
    }
    let distinct: BTreeSet<&BigInt> = kept.iter().map(|m| &m.divisibility).collect();
    if distinct.len() != kept.len() {
        notes.push(String::from("divisibilities not pairwise distinct"));
        return ExoticaReport::inconclusive(members, notes);
    }
    kept.sort_by(|a, b| a.divisibility.cmp(&b.divisibility).then(a.id.cmp(&b.id)));
    // the bound is monotone in d; keep the last member of each plateau
    let mut witness = Vec::new();
    for (i, m) in kept.iter().enumerate() {
        let next = kept.get(i + 1).and_then(|n| n.q_genus_lower.as_ref());
        if next != m.q_genus_lower.as_ref() {
            witness.push(m.id.clone());
        }
    }
    if witness.len() < 2 {
        notes.push(String::from(
            "divisibilities pairwise distinct but the prefix shows no increase of the lower bound yet",
        ));
        return ExoticaReport::inconclusive(members, notes);
    }
    notes.push(String::from("divisibilities pairwise distinct"));
    notes.push(String::from(
        "homeomorphism evidence (equal b2 and form) is reported, not proven",
    ));
    ExoticaReport {
        members,
        verdict: Verdict::InfiniteExoticSubfamily,
        witness,
        notes,
        unbounded_lower_bounds: true,
    }
}

/// Contact route: pairwise non-contactomorphic boundaries of the supported
/// open books force pairwise distinct divisibilities.
pub fn detect_by_contact(
    family: &[FamilyMember],
    budget: AcBudget,
) -> Result<ExoticaReport, ExoticaError> {
    if family.len() < 2 {
        return Err(ExoticaError::TooSmall(family.len()));
    }
    let mut classes = Vec::with_capacity(family.len());
    let mut notes = Vec::new();
    for m in family {
        if validate(&m.handlebody).is_err() {
            return Err(ExoticaError::Invalid { id: m.id.clone() });
        }
        let c = classify_with_reduction(&m.handlebody, budget)
            .map_err(|_| ExoticaError::Unclassifiable { id: m.id.clone() })?;
        if c.ac_trace.is_some() {
            notes.push(format!("{}: AC-reduced before classification", m.id));
        }
        classes.push(c.class);
    }
    let b2 = classes[0].n;
    for (m, c) in family.iter().zip(&classes) {
        if c.n != b2 {
            return Err(ExoticaError::B2Mismatch {
                id: m.id.clone(),
                expected: b2,
                found: c.n,
            });
        }
        if !homology(&m.handlebody).torsion_orders.is_empty() {
            return Err(ExoticaError::Torsion { id: m.id.clone() });
        }
    }
    let mut seen: BTreeSet<(usize, BigInt)> = BTreeSet::new();
    for (m, c) in family.iter().zip(&classes) {
        if !seen.insert((c.n, c.r.clone())) {
            notes.push(format!(
                "{} supports the same contact manifold (n = {}, r = {}) as an earlier member",
                m.id, c.n, c.r
            ));
        }
    }
    let mut r = if seen.len() == family.len() {
        notes.push(String::from(
            "pairwise non-contactomorphic, so the divisibilities are pairwise distinct",
        ));
        let q = intersection_form(&family[0].handlebody);
        let mut r = detect_by_divisibility(family, &q)?;
        notes.append(&mut r.notes);
        r.notes = notes;
        r
    } else {
        let members = family
            .iter()
            .map(|m| MemberReport {
                id: m.id.clone(),
                divisibility: c1_divisibility(&m.handlebody),
                contact_class: None,
                q_genus_lower: None,
                inequality: None,
            })
            .collect();
        ExoticaReport::inconclusive(members, notes)
    };
    for (m, c) in r.members.iter_mut().zip(classes) {
        m.contact_class = Some(c);
    }
    Ok(r)
}

/// Source of upper bounds for the first manifold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UpperSource {
    Bases(Vec<Vec<Vec<BigInt>>>),
    Search { coeff_bound: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    /// G_{a,q} ≤ upper_a
    pub upper_a: u64,
    /// G_{b,q} ≥ lower_b
    pub lower_b: BigInt,
    pub lower_a: BigInt,
    pub q: IntegerMatrix,
}

/// Some(certificate) iff the upper bound for a is below the lower bound for
/// b; the Q-genus is a diffeomorphism invariant.
pub fn certify_nondiffeomorphic(
    a: &crate::stein::SteinHandlebody,
    b: &crate::stein::SteinHandlebody,
    q: &IntegerMatrix,
    oracle_a: &GenusOracle,
    source: &UpperSource,
) -> Result<Option<Certificate>, ExoticaError> {
    let lower_a = q_genus_lb(a, q)?.lower;
    let lower_b = q_genus_lb(b, q)?.lower;
    let upper_a = match source {
        UpperSource::Bases(bases) => q_genus_ub_min(a, q, oracle_a, bases)?.value,
        UpperSource::Search { coeff_bound } => {
            match q_genus_search(a, q, oracle_a, *coeff_bound) {
                Ok(s) => match s.upper {
                    Some(u) => u,
                    None => return Ok(None),
                },
                Err(GenusError::InconsistentOracle { lower, upper }) => {
                    return Err(ExoticaError::UnsoundOracle { lower, upper })
                }
                Err(e) => return Err(e.into()),
            }
        }
    };
    if BigInt::from(upper_a) < lower_a {
        return Err(ExoticaError::UnsoundOracle {
            lower: lower_a,
            upper: upper_a,
        });
    }
    Ok((BigInt::from(upper_a) < lower_b).then(|| Certificate {
        upper_a,
        lower_b,
        lower_a,
        q: q.clone(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{build_znp, ZnpSequence};
    use alloc::vec;

    fn member(id: &str, n: usize, p: u32) -> FamilyMember {
        FamilyMember {
            id: String::from(id),
            handlebody: build_znp(n, p).unwrap(),
        }
    }

    #[test]
    fn divisibility_route_on_even_prefix() {
        let fam = ZnpSequence::new(3, 0, 2).unwrap().prefix(6);
        let q = intersection_form(&fam[0].handlebody);
        let r = detect_by_divisibility(&fam, &q).unwrap();
        assert_eq!(r.verdict, Verdict::InfiniteExoticSubfamily);
        assert!(r.unbounded_lower_bounds);
        let lbs: Vec<BigInt> = r
            .witness
            .iter()
            .map(|id| r.members.iter().find(|m| &m.id == id).unwrap().q_genus_lower.clone().unwrap())
            .collect();
        assert!(lbs.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn equal_divisibilities_are_inconclusive() {
        let fam = vec![member("a", 3, 2), member("b", 3, 2), member("c", 3, 4)];
        let q = intersection_form(&fam[0].handlebody);
        let r = detect_by_divisibility(&fam, &q).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
        assert!(r.witness.is_empty());
        assert!(r.notes.iter().any(|n| n.contains("not pairwise distinct")));
        assert_eq!(
            detect_by_divisibility(&fam[..1], &q),
            Err(ExoticaError::TooSmall(1))
        );
    }

    #[test]
    fn contact_route() {
        let fam: Vec<_> = (0..6).map(|r| member(&format!("m{r}"), 3, 2 * r)).collect();
        let r = detect_by_contact(&fam, AcBudget::default()).unwrap();
        assert_eq!(r.verdict, Verdict::InfiniteExoticSubfamily);
        assert!(r.members.iter().all(|m| m.contact_class.is_some()));
        let same = vec![member("a", 3, 2), member("b", 3, 2)];
        let r = detect_by_contact(&same, AcBudget::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn identical_pair_never_certified() {
        let a = build_znp(3, 0).unwrap();
        let q = intersection_form(&a);
        let o = GenusOracle::new()
            .with(&[1, 0, 0], 1)
            .unwrap()
            .with(&[0, 1, 0], 1)
            .unwrap()
            .with(&[0, 0, 1], 0)
            .unwrap();
        let bases = UpperSource::Bases(vec![vec![
            vec![1.into(), 0.into(), 0.into()],
            vec![0.into(), 1.into(), 0.into()],
            vec![0.into(), 0.into(), 1.into()],
        ]]);
        assert_eq!(certify_nondiffeomorphic(&a, &a, &q, &o, &bases), Ok(None));
        let far = build_znp(3, 10).unwrap();
        let c = certify_nondiffeomorphic(&a, &far, &q, &o, &bases).unwrap().unwrap();
        assert_eq!(c.upper_a, 1);
        assert_eq!(c.lower_b, BigInt::from(5));
    }
}
