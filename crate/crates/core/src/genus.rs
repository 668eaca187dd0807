//! Adjunction genus bounds and the intersection genus G_{Z,Q}.
//!
//! For a nonzero class Σ in a Stein surface, |⟨c₁, Σ⟩| + Σ·Σ ≤ 2g(Σ) − 2.
//! G_{Z,Q} is the minimum, over ordered H₂ bases with intersection matrix Q,
//! of the largest minimal genus of a basis element. Lower bounds come from
//! adjunction; upper bounds need surfaces supplied by the caller through a
//! [`GenusOracle`].

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::chern::{c1_class, c1_divisibility};
use crate::intlinalg::{form_properties, IntegerMatrix};
use crate::stein::{intersection_form, is_zero_vector, SteinHandlebody};

pub const MAX_SEARCH_RANK: usize = 4;
pub const MAX_SEARCH_COEFF: u32 = 6;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum GenusError {
    #[error("the zero class has no adjunction bound")]
    ZeroClass,
    #[error("class has {found} coordinates, expected {expected}")]
    Dimension { expected: usize, found: usize },
    #[error("q has rank {rank} but b2 = {b2}")]
    RankMismatch { rank: usize, b2: usize },
    #[error("intersection genus needs b2 ≥ 1")]
    EmptyForm,
    #[error("q is not symmetric")]
    NotSymmetric,
    #[error("q cannot be an intersection matrix of x: {0} differs")]
    Incompatible(&'static str),
    #[error("basis has {found} vectors, expected {expected}")]
    BasisSize { expected: usize, found: usize },
    #[error("basis is not unimodular")]
    BasisNotUnimodular,
    #[error("basis intersection matrix differs from q")]
    BasisMatrix,
    #[error("oracle has no entry for class {0:?}")]
    MissingOracle(Vec<BigInt>),
    #[error("oracle is empty")]
    EmptyOracle,
    #[error("search guard: {what} is {found}, limit {limit}")]
    Guard {
        what: &'static str,
        found: u64,
        limit: u64,
    },
    #[error("oracle upper bound {upper} is below the adjunction lower bound {lower}")]
    InconsistentOracle { lower: BigInt, upper: u64 },
    #[error("no bases supplied")]
    NoBases,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("genus bounds are declared only for nonzero classes")]
    ZeroClass,
}

/// Declared genus upper bounds for H₂ classes, in the coordinates of the
/// canonical H₂ basis. A surface representing α also represents −α, so
/// lookups are sign-insensitive.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GenusOracle {
    entries: BTreeMap<Vec<BigInt>, u64>,
}

impl GenusOracle {
    pub fn new() -> Self {
        Self::default()
    }

    /// Keeps the smaller bound if the class is already present.
    pub fn insert(&mut self, class: Vec<BigInt>, genus_ub: u64) -> Result<(), OracleError> {
        if is_zero_vector(&class) {
            return Err(OracleError::ZeroClass);
        }
        let slot = self.entries.entry(class).or_insert(genus_ub);
        *slot = (*slot).min(genus_ub);
        Ok(())
    }

    pub fn with(mut self, class: &[i64], genus_ub: u64) -> Result<Self, OracleError> {
        self.insert(class.iter().map(|&c| BigInt::from(c)).collect(), genus_ub)?;
        Ok(self)
    }

    pub fn lookup(&self, class: &[BigInt]) -> Option<u64> {
        let direct = self.entries.get(class).copied();
        let neg: Vec<BigInt> = class.iter().map(|c| -c).collect();
        match (direct, self.entries.get(&neg).copied()) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Vec<BigInt>, u64)> {
        self.entries.iter().map(|(k, &v)| (k, v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QGenusBound {
    pub lower: BigInt,
    pub upper: Option<u64>,
    /// Basis vector attaining `upper`.
    pub witness_class: Option<Vec<BigInt>>,
    /// Full basis attaining `upper`, columns in order.
    pub witness_basis: Option<Vec<Vec<BigInt>>>,
    pub matrix: IntegerMatrix,
    pub checks_run: Vec<&'static str>,
    pub bases_found: usize,
}

/// Least g ≥ 0 with |pairing| + self_int ≤ 2g − 2.
pub fn adjunction_genus_lb(pairing: &BigInt, self_int: &BigInt) -> BigInt {
    let g = (pairing.abs() + self_int + 2i32).div_ceil(&BigInt::from(2));
    if g.is_negative() {
        BigInt::zero()
    } else {
        g
    }
}

/// Adjunction bound for a class given in canonical H₂ coordinates.
pub fn class_genus_lb(x: &SteinHandlebody, alpha: &[BigInt]) -> Result<BigInt, GenusError> {
    let q = intersection_form(x);
    if alpha.len() != q.rows() {
        return Err(GenusError::Dimension {
            expected: q.rows(),
            found: alpha.len(),
        });
    }
    if is_zero_vector(alpha) {
        return Err(GenusError::ZeroClass);
    }
    let pairing = c1_class(x).pair(alpha);
    let self_int = q.bilinear(alpha, alpha).expect("dimension checked");
    Ok(adjunction_genus_lb(&pairing, &self_int))
}

/// Necessary conditions for `q` to be the intersection form of `x`; returns
/// the intersection form of `x` and the names of the checks performed.
fn check_compatible(
    x: &SteinHandlebody,
    q: &IntegerMatrix,
) -> Result<(IntegerMatrix, Vec<&'static str>), GenusError> {
    let qx = intersection_form(x);
    let mut checks = Vec::new();
    if !q.is_square() || !q.is_symmetric() {
        return Err(GenusError::NotSymmetric);
    }
    checks.push("symmetric");
    if q.rows() != qx.rows() {
        return Err(GenusError::RankMismatch {
            rank: q.rows(),
            b2: qx.rows(),
        });
    }
    if qx.rows() == 0 {
        return Err(GenusError::EmptyForm);
    }
    checks.push("rank");
    let a = form_properties(q).map_err(|_| GenusError::NotSymmetric)?;
    let b = form_properties(&qx).expect("intersection forms are symmetric");
    if a.determinant != b.determinant {
        return Err(GenusError::Incompatible("determinant"));
    }
    checks.push("determinant");
    if a.signature != b.signature {
        return Err(GenusError::Incompatible("signature"));
    }
    checks.push("signature");
    if a.even != b.even {
        return Err(GenusError::Incompatible("parity"));
    }
    checks.push("parity");
    Ok((qx, checks))
}

/// Lower bound for G_{Z,q} from the divisibility d of c₁:
/// max(0, ⌈(d + m_min + 2)/2⌉, ⌈(m_max + 2)/2⌉) over the diagonal of q.
pub fn q_genus_lb(x: &SteinHandlebody, q: &IntegerMatrix) -> Result<QGenusBound, GenusError> {
    let (_, checks) = check_compatible(x, q)?;
    let d = c1_divisibility(x);
    Ok(QGenusBound {
        lower: lower_from_divisibility(&d, q),
        upper: None,
        witness_class: None,
        witness_basis: None,
        matrix: q.clone(),
        checks_run: checks,
        bases_found: 0,
    })
}

/// The bound of [`q_genus_lb`] as a function of d alone; `q` must be nonempty.
pub fn lower_from_divisibility(d: &BigInt, q: &IntegerMatrix) -> BigInt {
    let diag = q.diagonal();
    let m_min = diag.iter().min().expect("nonempty form");
    let m_max = diag.iter().max().expect("nonempty form");
    let two = BigInt::from(2);
    let a = (d + m_min + 2i32).div_ceil(&two);
    let b = (m_max + 2i32).div_ceil(&two);
    a.max(b).max(BigInt::zero())
}

/// Upper bound for G_{Z,q} from one explicit basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenusUpper {
    pub value: u64,
    pub witness_class: Vec<BigInt>,
}

fn check_basis(qx: &IntegerMatrix, q: &IntegerMatrix, basis: &[Vec<BigInt>]) -> Result<(), GenusError> {
    if basis.len() != q.rows() {
        return Err(GenusError::BasisSize {
            expected: q.rows(),
            found: basis.len(),
        });
    }
    if let Some(v) = basis.iter().find(|v| v.len() != qx.rows()) {
        return Err(GenusError::Dimension {
            expected: qx.rows(),
            found: v.len(),
        });
    }
    let b = IntegerMatrix::from_columns(qx.rows(), basis).expect("dimensions checked");
    if !b.is_unimodular() {
        return Err(GenusError::BasisNotUnimodular);
    }
    if &qx.congruent_by(&b).expect("dimensions checked") != q {
        return Err(GenusError::BasisMatrix);
    }
    Ok(())
}

fn basis_max(oracle: &GenusOracle, basis: &[Vec<BigInt>]) -> Result<GenusUpper, GenusError> {
    let mut best: Option<GenusUpper> = None;
    for v in basis {
        let g = oracle
            .lookup(v)
            .ok_or_else(|| GenusError::MissingOracle(v.clone()))?;
        if best.as_ref().is_none_or(|b| g > b.value) {
            best = Some(GenusUpper {
                value: g,
                witness_class: v.clone(),
            });
        }
    }
    best.ok_or(GenusError::EmptyForm)
}

/// max over the basis of the oracle bounds.
pub fn q_genus_ub(
    x: &SteinHandlebody,
    q: &IntegerMatrix,
    oracle: &GenusOracle,
    basis: &[Vec<BigInt>],
) -> Result<GenusUpper, GenusError> {
    let (qx, _) = check_compatible(x, q)?;
    check_basis(&qx, q, basis)?;
    basis_max(oracle, basis)
}

/// Minimum of [`q_genus_ub`] over several bases; ties keep the earliest.
pub fn q_genus_ub_min(
    x: &SteinHandlebody,
    q: &IntegerMatrix,
    oracle: &GenusOracle,
    bases: &[Vec<Vec<BigInt>>],
) -> Result<GenusUpper, GenusError> {
    let mut best: Option<GenusUpper> = None;
    for basis in bases {
        let u = q_genus_ub(x, q, oracle, basis)?;
        if best.as_ref().is_none_or(|b| u.value < b.value) {
            best = Some(u);
        }
    }
    best.ok_or(GenusError::NoBases)
}

/// Every ordered basis of H₂ with coordinates in [−bound, bound] whose
/// intersection matrix is `q`, in lexicographic order of the coordinate
/// vectors.
pub fn bases_realizing(
    qx: &IntegerMatrix,
    q: &IntegerMatrix,
    bound: u32,
) -> Vec<Vec<Vec<BigInt>>> {
    let n = qx.rows();
    let b = bound as i64;
    let mut by_square: BTreeMap<BigInt, Vec<Vec<BigInt>>> = BTreeMap::new();
    let width = (2 * b + 1) as u64;
    let total = width.pow(n as u32);
    for index in 0..total {
        let mut rest = index;
        let mut v = vec![BigInt::zero(); n];
        for c in v.iter_mut().rev() {
            *c = BigInt::from((rest % width) as i64 - b);
            rest /= width;
        }
        if !is_zero_vector(&v) {
            let s = qx.bilinear(&v, &v).expect("square");
            by_square.entry(s).or_default().push(v);
        }
    }
    let mut out = Vec::new();
    let mut chosen: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    extend_bases(qx, q, &by_square, &mut chosen, &mut out);
    out
}

fn extend_bases(
    qx: &IntegerMatrix,
    q: &IntegerMatrix,
    by_square: &BTreeMap<BigInt, Vec<Vec<BigInt>>>,
    chosen: &mut Vec<Vec<BigInt>>,
    out: &mut Vec<Vec<Vec<BigInt>>>,
) {
    let k = chosen.len();
    if k == q.rows() {
        let b = IntegerMatrix::from_columns(qx.rows(), chosen).expect("square");
        if b.is_unimodular() {
            out.push(chosen.clone());
        }
        return;
    }
    let Some(candidates) = by_square.get(&q[(k, k)]) else {
        return;
    };
    for v in candidates {
        let fits = chosen
            .iter()
            .enumerate()
            .all(|(j, w)| qx.bilinear(w, v).expect("square") == q[(j, k)]);
        if fits {
            chosen.push(v.clone());
            extend_bases(qx, q, by_square, chosen, out);
            chosen.pop();
        }
    }
}

/// Exhaustive search for bases realizing `q` with small coordinates,
/// combined with the adjunction lower bound.
pub fn q_genus_search(
    x: &SteinHandlebody,
    q: &IntegerMatrix,
    oracle: &GenusOracle,
    coeff_bound: u32,
) -> Result<QGenusBound, GenusError> {
    let (qx, mut checks) = check_compatible(x, q)?;
    if qx.rows() > MAX_SEARCH_RANK {
        return Err(GenusError::Guard {
            what: "b2",
            found: qx.rows() as u64,
            limit: MAX_SEARCH_RANK as u64,
        });
    }
    if coeff_bound > MAX_SEARCH_COEFF {
        return Err(GenusError::Guard {
            what: "coefficient bound",
            found: coeff_bound as u64,
            limit: MAX_SEARCH_COEFF as u64,
        });
    }
    if oracle.is_empty() {
        return Err(GenusError::EmptyOracle);
    }
    let lower = lower_from_divisibility(&c1_divisibility(x), q);
    let bases = bases_realizing(&qx, q, coeff_bound);
    checks.push("basis search");
    let mut best: Option<(GenusUpper, Vec<Vec<BigInt>>)> = None;
    for basis in &bases {
        if let Ok(u) = basis_max(oracle, basis) {
            if best.as_ref().is_none_or(|(b, _)| u.value < b.value) {
                best = Some((u, basis.clone()));
            }
        }
    }
    if let Some((u, _)) = &best {
        if BigInt::from(u.value) < lower {
            return Err(GenusError::InconsistentOracle {
                lower,
                upper: u.value,
            });
        }
    }
    Ok(QGenusBound {
        lower,
        upper: best.as_ref().map(|(u, _)| u.value),
        witness_class: best.as_ref().map(|(u, _)| u.witness_class.clone()),
        witness_basis: best.map(|(_, b)| b),
        matrix: q.clone(),
        checks_run: checks,
        bases_found: bases.len(),
    })
}

/// ⌈n/2⌉ for nonnegative n.
pub fn half_ceil(n: &BigInt) -> BigInt {
    n.div_ceil(&BigInt::from(2))
}

/// True when every class has a value in the oracle equal to zero; spheres
/// represent the whole basis.
pub fn is_sphere_basis(oracle: &GenusOracle, basis: &[Vec<BigInt>]) -> bool {
    basis.iter().all(|v| oracle.lookup(v) == Some(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stein::TwoHandle;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn bv(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&c| b(c)).collect()
    }

    fn unknot() -> SteinHandlebody {
        SteinHandlebody::unlinked(vec![TwoHandle::unknot()])
    }

    #[test]
    fn adjunction_examples() {
        assert_eq!(adjunction_genus_lb(&b(0), &b(-2)), b(0));
        assert_eq!(adjunction_genus_lb(&b(6), &b(0)), b(4));
        assert_eq!(adjunction_genus_lb(&b(-6), &b(0)), b(4));
        assert_eq!(adjunction_genus_lb(&b(0), &b(-40)), b(0));
        for g in 0..6i64 {
            let d = 2 * g - 2 + 2;
            assert_eq!(adjunction_genus_lb(&b(d), &b(-2)), b(g));
        }
    }

    #[test]
    fn class_bound() {
        let x = unknot();
        assert_eq!(class_genus_lb(&x, &bv(&[1])), Ok(b(0)));
        assert_eq!(class_genus_lb(&x, &bv(&[0])), Err(GenusError::ZeroClass));
        assert!(matches!(
            class_genus_lb(&x, &bv(&[1, 0])),
            Err(GenusError::Dimension { .. })
        ));
        let y = SteinHandlebody::unlinked(vec![TwoHandle::new(-1, 4)]);
        assert_eq!(class_genus_lb(&y, &bv(&[1])), Ok(adjunction_genus_lb(&b(4), &b(-2))));
        assert_eq!(class_genus_lb(&y, &bv(&[2])), Ok(adjunction_genus_lb(&b(8), &b(-8))));
    }

    #[test]
    fn oracle_is_sign_insensitive_and_keeps_minimum() {
        let mut o = GenusOracle::new().with(&[1, 2], 3).unwrap();
        o.insert(bv(&[-1, -2]), 1).unwrap();
        assert_eq!(o.lookup(&bv(&[1, 2])), Some(1));
        o.insert(bv(&[1, 2]), 5).unwrap();
        assert_eq!(o.lookup(&bv(&[-1, -2])), Some(1));
        assert_eq!(o.insert(bv(&[0, 0]), 1), Err(OracleError::ZeroClass));
    }

    #[test]
    fn lower_bound_checks() {
        let x = SteinHandlebody::unlinked(vec![TwoHandle::unknot(); 2]);
        let q = IntegerMatrix::diagonal_from(&[-2, -2]);
        let r = q_genus_lb(&x, &q).unwrap();
        assert_eq!(r.lower, b(0));
        assert_eq!(r.checks_run, ["symmetric", "rank", "determinant", "signature", "parity"]);
        assert!(matches!(
            q_genus_lb(&x, &IntegerMatrix::diagonal_from(&[-2])),
            Err(GenusError::RankMismatch { .. })
        ));
        assert_eq!(
            q_genus_lb(&x, &IntegerMatrix::diagonal_from(&[-1, -4])),
            Err(GenusError::Incompatible("parity"))
        );
        assert_eq!(
            q_genus_lb(&x, &IntegerMatrix::diagonal_from(&[-2, -3])),
            Err(GenusError::Incompatible("determinant"))
        );
        assert_eq!(
            q_genus_lb(&SteinHandlebody::disk(), &IntegerMatrix::zeros(0, 0)),
            Err(GenusError::EmptyForm)
        );
    }

    #[test]
    fn upper_bound_single_unknot() {
        let x = unknot();
        let q = IntegerMatrix::diagonal_from(&[-2]);
        let o = GenusOracle::new().with(&[1], 0).unwrap();
        let u = q_genus_ub(&x, &q, &o, &[bv(&[1])]).unwrap();
        assert_eq!(u.value, 0);
        assert_eq!(
            q_genus_ub(&x, &q, &GenusOracle::new(), &[bv(&[1])]),
            Err(GenusError::MissingOracle(bv(&[1])))
        );
        assert_eq!(q_genus_ub(&x, &q, &o, &[bv(&[2])]), Err(GenusError::BasisNotUnimodular));
        let s = q_genus_search(&x, &q, &o, 3).unwrap();
        assert_eq!(s.upper, Some(0));
        assert_eq!(s.bases_found, 2);
    }

    #[test]
    fn hyperbolic_search() {
        let x = SteinHandlebody::new(
            0,
            vec![TwoHandle::new(1, 0), TwoHandle::new(1, 2)],
            IntegerMatrix::from_rows(&[[0, 1], [1, 0]]).unwrap(),
        );
        let q = intersection_form(&x);
        let o = GenusOracle::new().with(&[1, 0], 1).unwrap().with(&[0, 1], 2).unwrap();
        let s = q_genus_search(&x, &q, &o, 2).unwrap();
        assert!(s.bases_found >= 2);
        assert_eq!(s.upper, Some(2));
        assert!(s.lower <= b(2));
        assert!(matches!(
            q_genus_search(&x, &q, &GenusOracle::new(), 2),
            Err(GenusError::EmptyOracle)
        ));
        assert!(matches!(
            q_genus_search(&x, &q, &o, 7),
            Err(GenusError::Guard { .. })
        ));
    }

    #[test]
    fn two_bases_take_minimum() {
        let x = SteinHandlebody::unlinked(vec![TwoHandle::unknot(); 2]);
        let q = IntegerMatrix::diagonal_from(&[-2, -2]);
        let o = GenusOracle::new()
            .with(&[1, 0], 3)
            .unwrap()
            .with(&[0, 1], 0)
            .unwrap()
            .with(&[0, -1], 0)
            .unwrap();
        let b1 = vec![bv(&[1, 0]), bv(&[0, 1])];
        let b2 = vec![bv(&[0, 1]), bv(&[1, 0])];
        assert_eq!(q_genus_ub_min(&x, &q, &o, &[b1, b2]).unwrap().value, 3);
    }
}
