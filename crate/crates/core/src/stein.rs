//! Stein handlebodies: one 0-handle, 1-handles, and 2-handles attached along
//! Legendrian knots with framing tb − 1.
//!
//! Linking numbers between 2-handles are supplied data. Attaching words record
//! how each 2-handle runs over the 1-handles (signed, 1-based generator
//! indices) and determine both ∂₂ and the π₁ presentation.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::intlinalg::{
    kernel_from_snf, smith_normal_form, IntegerMatrix, SnfDecomposition,
};
use crate::legendrian::{rotation_number, thurston_bennequin, FrontDiagram, FrontError};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TwoHandle {
    pub tb: i64,
    pub rot: i64,
    pub word: Vec<i64>,
    pub front: Option<FrontDiagram>,
}

impl TwoHandle {
    pub fn new(tb: i64, rot: i64) -> Self {
        Self {
            tb,
            rot,
            word: Vec::new(),
            front: None,
        }
    }

    pub fn with_word(mut self, word: Vec<i64>) -> Self {
        self.word = word;
        self
    }

    /// A handle whose tb and rot are read off the front.
    pub fn from_front(front: FrontDiagram) -> Result<Self, FrontError> {
        let tb = thurston_bennequin(&front)?;
        let rot = rotation_number(&front)?;
        Ok(Self {
            tb,
            rot,
            word: Vec::new(),
            front: Some(front),
        })
    }

    /// The tb = −1 unknot.
    pub fn unknot() -> Self {
        Self::new(-1, 0)
    }

    pub fn framing(&self) -> i64 {
        self.tb - 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SteinHandlebody {
    pub one_handles: usize,
    pub handles: Vec<TwoHandle>,
    /// Symmetric; diagonal entries are the framings tb − 1.
    pub linking: IntegerMatrix,
}

impl SteinHandlebody {
    /// D⁴: no 1-handles, no 2-handles.
    pub fn disk() -> Self {
        Self {
            one_handles: 0,
            handles: Vec::new(),
            linking: IntegerMatrix::zeros(0, 0),
        }
    }

    pub fn new(one_handles: usize, handles: Vec<TwoHandle>, linking: IntegerMatrix) -> Self {
        Self {
            one_handles,
            handles,
            linking,
        }
    }

    /// Uses the off-diagonal part of `linking` and overwrites its diagonal
    /// with the framings tb − 1.
    pub fn with_derived_framings(
        one_handles: usize,
        handles: Vec<TwoHandle>,
        mut linking: IntegerMatrix,
    ) -> Self {
        if linking.is_square() && linking.rows() == handles.len() {
            for (i, h) in handles.iter().enumerate() {
                linking[(i, i)] = BigInt::from(h.framing());
            }
        }
        Self::new(one_handles, handles, linking)
    }

    /// Unlinked handles over no 1-handles.
    pub fn unlinked(handles: Vec<TwoHandle>) -> Self {
        let n = handles.len();
        Self::with_derived_framings(0, handles, IntegerMatrix::zeros(n, n))
    }

    pub fn rotations(&self) -> Vec<i64> {
        self.handles.iter().map(|h| h.rot).collect()
    }

    pub fn validate(&self) -> Result<(), Vec<Violation>> {
        validate(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    LinkingShape {
        rows: usize,
        cols: usize,
        handles: usize,
    },
    LinkingNotSymmetric {
        row: usize,
        col: usize,
    },
    FramingMismatch {
        handle: usize,
        tb: i64,
        diagonal: BigInt,
    },
    Parity {
        handle: usize,
        tb: i64,
        rot: i64,
    },
    InvalidFront {
        handle: usize,
        error: FrontError,
    },
    FrontMismatch {
        handle: usize,
        invariant: &'static str,
        declared: i64,
        from_front: i64,
    },
    WordLetter {
        handle: usize,
        letter: i64,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::LinkingShape {
                rows,
                cols,
                handles,
            } => write!(
                f,
                "linking matrix is {rows}x{cols} but there are {handles} 2-handles"
            ),
            Violation::LinkingNotSymmetric { row, col } => {
                write!(f, "linking matrix is not symmetric at ({row}, {col})")
            }
            Violation::FramingMismatch {
                handle,
                tb,
                diagonal,
            } => write!(
                f,
                "handle {handle}: framing ≠ tb − 1 (tb = {tb}, diagonal = {diagonal})"
            ),
            Violation::Parity { handle, tb, rot } => {
                write!(f, "handle {handle}: tb + rot is even (tb = {tb}, rot = {rot})")
            }
            Violation::InvalidFront { handle, error } => {
                write!(f, "handle {handle}: invalid front: {error}")
            }
            Violation::FrontMismatch {
                handle,
                invariant,
                declared,
                from_front,
            } => write!(
                f,
                "handle {handle}: declared {invariant} = {declared} but the front gives {from_front}"
            ),
            Violation::WordLetter { handle, letter } => {
                write!(f, "handle {handle}: word letter {letter} is not a 1-handle index")
            }
        }
    }
}

/// Checks every structural invariant and reports all violations found.
pub fn validate(x: &SteinHandlebody) -> Result<(), Vec<Violation>> {
    let mut out = Vec::new();
    let n = x.handles.len();
    let shape_ok = x.linking.rows() == n && x.linking.cols() == n;
    if !shape_ok {
        out.push(Violation::LinkingShape {
            rows: x.linking.rows(),
            cols: x.linking.cols(),
            handles: n,
        });
    } else {
        for i in 0..n {
            for j in 0..i {
                if x.linking[(i, j)] != x.linking[(j, i)] {
                    out.push(Violation::LinkingNotSymmetric { row: i, col: j });
                }
            }
        }
    }
    for (i, h) in x.handles.iter().enumerate() {
        if shape_ok && x.linking[(i, i)] != BigInt::from(h.framing()) {
            out.push(Violation::FramingMismatch {
                handle: i,
                tb: h.tb,
                diagonal: x.linking[(i, i)].clone(),
            });
        }
        if (h.tb + h.rot).rem_euclid(2) == 0 {
            out.push(Violation::Parity {
                handle: i,
                tb: h.tb,
                rot: h.rot,
            });
        }
        if let Some(front) = &h.front {
            match (thurston_bennequin(front), rotation_number(front)) {
                (Ok(tb), Ok(rot)) => {
                    if tb != h.tb {
                        out.push(Violation::FrontMismatch {
                            handle: i,
                            invariant: "tb",
                            declared: h.tb,
                            from_front: tb,
                        });
                    }
                    if rot != h.rot {
                        out.push(Violation::FrontMismatch {
                            handle: i,
                            invariant: "rot",
                            declared: h.rot,
                            from_front: rot,
                        });
                    }
                }
                (Err(error), _) | (_, Err(error)) => {
                    out.push(Violation::InvalidFront { handle: i, error })
                }
            }
        }
        for &letter in &h.word {
            if letter == 0 || letter.unsigned_abs() as usize > x.one_handles {
                out.push(Violation::WordLetter { handle: i, letter });
            }
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum StructureError {
    #[error("operation needs a handlebody without 1-handles, found {0}")]
    HasOneHandles(usize),
}

/// The linking matrix, which is the intersection form when there are no
/// 1-handles. See [`intersection_form`] for the general case.
pub fn intersection_matrix(x: &SteinHandlebody) -> Result<IntegerMatrix, StructureError> {
    if x.one_handles > 0 {
        return Err(StructureError::HasOneHandles(x.one_handles));
    }
    Ok(x.linking.clone())
}

/// ∂₂ : C₂ → C₁; entry (j, i) is the exponent sum of generator j+1 in the
/// word of handle i.
pub fn chain_boundary(x: &SteinHandlebody) -> IntegerMatrix {
    let mut m = IntegerMatrix::zeros(x.one_handles, x.handles.len());
    for (i, h) in x.handles.iter().enumerate() {
        for &letter in &h.word {
            let g = letter.unsigned_abs() as usize;
            if g == 0 || g > x.one_handles {
                continue;
            }
            let e = &mut m[(g - 1, i)];
            if letter > 0 {
                *e += 1;
            } else {
                *e -= 1;
            }
        }
    }
    m
}

/// ∂₂ in Smith form together with the bases it induces on C₂.
///
/// With `∂₂ = u·d·v` and `aᵢ` the nonzero invariant factors, the columns
/// `vᵢ` of `v_inv` satisfy `∂₂(vᵢ) = aᵢ uᵢ` for `i < rank` and `∂₂(vᵢ) = 0`
/// afterwards; the latter are a basis of H₂. The dual classes `[vᵢ*]` with
/// `aᵢ > 1` are the torsion generators of H², of order `aᵢ`.
#[derive(Clone, Debug)]
pub struct ChainFrame {
    pub snf: SnfDecomposition,
    /// H₂ basis, one column per class, coordinates over the 2-handles.
    pub h2_basis: IntegerMatrix,
}

impl ChainFrame {
    pub fn new(x: &SteinHandlebody) -> Self {
        let snf = smith_normal_form(&chain_boundary(x));
        let h2_basis = kernel_from_snf(&snf);
        Self { snf, h2_basis }
    }

    pub fn rank(&self) -> usize {
        self.snf.rank()
    }

    pub fn b2(&self) -> usize {
        self.h2_basis.cols()
    }

    /// (index into the adapted C₂ basis, order) for each torsion generator of H².
    pub fn torsion_generators(&self) -> Vec<(usize, BigInt)> {
        self.snf
            .invariant_factors()
            .into_iter()
            .enumerate()
            .filter(|(_, a)| *a > BigInt::one())
            .collect()
    }

    /// Intersection form on H₂ in the basis `h2_basis`: Kᵀ·L·K.
    pub fn intersection_form(&self, x: &SteinHandlebody) -> IntegerMatrix {
        x.linking
            .congruent_by(&self.h2_basis)
            .expect("linking matrix matches the number of 2-handles")
    }

    /// Handle coordinates of a class given in `h2_basis` coordinates.
    pub fn to_handle_coords(&self, alpha: &[BigInt]) -> Option<Vec<BigInt>> {
        self.h2_basis.mul_vec(alpha).ok()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Homology {
    pub b2: usize,
    pub h1_free_rank: usize,
    pub torsion_orders: Vec<BigInt>,
}

/// H₂ rank and H₁ = coker ∂₂ (free rank and torsion orders).
pub fn homology(x: &SteinHandlebody) -> Homology {
    homology_of(&ChainFrame::new(x), x.one_handles)
}

pub(crate) fn homology_of(frame: &ChainFrame, one_handles: usize) -> Homology {
    Homology {
        b2: frame.b2(),
        h1_free_rank: one_handles - frame.rank(),
        torsion_orders: frame.torsion_generators().into_iter().map(|(_, a)| a).collect(),
    }
}

/// Intersection form on H₂ in the deterministic basis of [`ChainFrame`].
/// Equals the linking matrix when there are no 1-handles.
pub fn intersection_form(x: &SteinHandlebody) -> IntegerMatrix {
    ChainFrame::new(x).intersection_form(x)
}

/// Letters are signed 1-based generator indices.
pub fn free_reduce(word: &[i64]) -> Vec<i64> {
    let mut out: Vec<i64> = Vec::with_capacity(word.len());
    for &l in word {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

pub fn invert_word(word: &[i64]) -> Vec<i64> {
    word.iter().rev().map(|&l| -l).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PresentationError {
    #[error("relator {relator} uses letter {letter} with only {generators} generators")]
    LetterOutOfRange {
        relator: usize,
        letter: i64,
        generators: usize,
    },
}

/// Finite presentation with freely reduced relators.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupPresentation {
    generators: usize,
    relators: Vec<Vec<i64>>,
}

impl GroupPresentation {
    pub fn new(generators: usize, relators: Vec<Vec<i64>>) -> Result<Self, PresentationError> {
        for (i, r) in relators.iter().enumerate() {
            if let Some(&letter) = r
                .iter()
                .find(|&&l| l == 0 || l.unsigned_abs() as usize > generators)
            {
                return Err(PresentationError::LetterOutOfRange {
                    relator: i,
                    letter,
                    generators,
                });
            }
        }
        Ok(Self::from_parts(
            generators,
            relators.iter().map(|r| free_reduce(r)).collect(),
        ))
    }

    pub(crate) fn from_parts(generators: usize, relators: Vec<Vec<i64>>) -> Self {
        Self {
            generators,
            relators,
        }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn relators(&self) -> &[Vec<i64>] {
        &self.relators
    }

    pub fn total_length(&self) -> usize {
        self.relators.iter().map(Vec::len).sum()
    }

    /// Exponent-sum matrix, generators × relators.
    pub fn relation_matrix(&self) -> IntegerMatrix {
        let mut m = IntegerMatrix::zeros(self.generators, self.relators.len());
        for (i, r) in self.relators.iter().enumerate() {
            for &l in r {
                let e = &mut m[(l.unsigned_abs() as usize - 1, i)];
                if l > 0 {
                    *e += 1;
                } else {
                    *e -= 1;
                }
            }
        }
        m
    }

    /// Abelianization as (free rank, torsion orders > 1).
    pub fn abelianization(&self) -> (usize, Vec<BigInt>) {
        let snf = smith_normal_form(&self.relation_matrix());
        let torsion = snf
            .invariant_factors()
            .into_iter()
            .filter(|a| *a > BigInt::one())
            .collect();
        (self.generators - snf.rank(), torsion)
    }
}

impl fmt::Display for GroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for g in 1..=self.generators {
            if g > 1 {
                write!(f, ", ")?;
            }
            write!(f, "{}", generator_name(g))?;
        }
        write!(f, " | ")?;
        for (i, r) in self.relators.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            if r.is_empty() {
                write!(f, "1")?;
            }
            for &l in r {
                write!(f, "{}", generator_name(l.unsigned_abs() as usize))?;
                if l < 0 {
                    write!(f, "^-1")?;
                }
            }
        }
        write!(f, ">")
    }
}

fn generator_name(g: usize) -> String {
    use alloc::format;
    const NAMES: [&str; 6] = ["x", "y", "z", "u", "v", "w"];
    match NAMES.get(g.wrapping_sub(1)) {
        Some(n) => String::from(*n),
        None => format!("g{g}"),
    }
}

/// 1-handles become generators, attaching words become relators.
pub fn presentation(x: &SteinHandlebody) -> GroupPresentation {
    GroupPresentation::from_parts(
        x.one_handles,
        x.handles.iter().map(|h| free_reduce(&h.word)).collect(),
    )
}

/// Boundary connected sum: handles of `b` follow those of `a`, its 1-handle
/// indices are shifted past those of `a`, linking is block diagonal.
pub fn boundary_connected_sum(a: &SteinHandlebody, b: &SteinHandlebody) -> SteinHandlebody {
    let shift = a.one_handles as i64;
    let mut handles = a.handles.clone();
    handles.extend(b.handles.iter().map(|h| TwoHandle {
        word: h
            .word
            .iter()
            .map(|&l| if l > 0 { l + shift } else { l - shift })
            .collect(),
        ..h.clone()
    }));
    SteinHandlebody {
        one_handles: a.one_handles + b.one_handles,
        handles,
        linking: IntegerMatrix::block_diagonal(&a.linking, &b.linking),
    }
}

pub(crate) fn is_zero_vector(v: &[BigInt]) -> bool {
    v.iter().all(Zero::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn unknot_body() -> SteinHandlebody {
        SteinHandlebody::unlinked(vec![TwoHandle::unknot()])
    }

    fn g_squared() -> SteinHandlebody {
        SteinHandlebody::with_derived_framings(
            1,
            vec![TwoHandle::new(-1, 0).with_word(vec![1, 1])],
            IntegerMatrix::zeros(1, 1),
        )
    }

    #[test]
    fn validate_examples() {
        assert!(validate(&SteinHandlebody::disk()).is_ok());
        assert!(validate(&unknot_body()).is_ok());
        assert_eq!(unknot_body().linking[(0, 0)], BigInt::from(-2));
        let bad = SteinHandlebody::new(
            0,
            vec![TwoHandle::unknot()],
            IntegerMatrix::diagonal_from(&[-1i64]),
        );
        let v = validate(&bad).unwrap_err();
        assert_eq!(v.len(), 1);
        assert!(v[0].to_string().contains("framing ≠ tb − 1"));
    }

    #[test]
    fn validate_collects_everything() {
        let mut h = TwoHandle::new(0, 0).with_word(vec![3]);
        h.front = Some(FrontDiagram::standard_unknot());
        let x = SteinHandlebody::new(
            1,
            vec![h, TwoHandle::unknot()],
            IntegerMatrix::from_rows(&[[5, 1], [2, -2]]).unwrap(),
        );
        let v = validate(&x).unwrap_err();
        assert!(v.iter().any(|e| matches!(e, Violation::LinkingNotSymmetric { .. })));
        assert!(v.iter().any(|e| matches!(e, Violation::FramingMismatch { handle: 0, .. })));
        assert!(v.iter().any(|e| matches!(e, Violation::Parity { handle: 0, .. })));
        assert!(v.iter().any(|e| matches!(e, Violation::FrontMismatch { invariant: "tb", .. })));
        assert!(v.iter().any(|e| matches!(e, Violation::WordLetter { letter: 3, .. })));
    }

    #[test]
    fn intersection_matrix_examples() {
        assert_eq!(
            intersection_matrix(&unknot_body()).unwrap(),
            IntegerMatrix::diagonal_from(&[-2i64])
        );
        assert!(intersection_matrix(&SteinHandlebody::disk()).unwrap().is_empty());
        assert_eq!(
            intersection_matrix(&g_squared()),
            Err(StructureError::HasOneHandles(1))
        );
    }

    #[test]
    fn chain_boundary_examples() {
        assert_eq!(chain_boundary(&unknot_body()).rows(), 0);
        assert_eq!(chain_boundary(&unknot_body()).cols(), 1);
        assert_eq!(
            chain_boundary(&g_squared()),
            IntegerMatrix::from_rows(&[[2]]).unwrap()
        );
        let x = SteinHandlebody::with_derived_framings(
            1,
            vec![
                TwoHandle::unknot().with_word(vec![1]),
                TwoHandle::unknot().with_word(vec![-1]),
            ],
            IntegerMatrix::zeros(2, 2),
        );
        assert_eq!(
            chain_boundary(&x),
            IntegerMatrix::from_rows(&[[1, -1]]).unwrap()
        );
    }

    #[test]
    fn homology_examples() {
        assert_eq!(
            homology(&unknot_body()),
            Homology {
                b2: 1,
                h1_free_rank: 0,
                torsion_orders: vec![]
            }
        );
        assert_eq!(
            homology(&g_squared()),
            Homology {
                b2: 0,
                h1_free_rank: 0,
                torsion_orders: vec![BigInt::from(2)]
            }
        );
        let circle = SteinHandlebody::new(1, vec![], IntegerMatrix::zeros(0, 0));
        assert_eq!(homology(&circle).h1_free_rank, 1);
    }

    #[test]
    fn presentation_examples() {
        assert_eq!(presentation(&SteinHandlebody::disk()), GroupPresentation::empty());
        let circle = SteinHandlebody::new(1, vec![], IntegerMatrix::zeros(0, 0));
        let p = presentation(&circle);
        assert_eq!((p.generators(), p.relators().len()), (1, 0));
        let x = SteinHandlebody::with_derived_framings(
            1,
            vec![TwoHandle::unknot().with_word(vec![1, -1])],
            IntegerMatrix::zeros(1, 1),
        );
        assert_eq!(presentation(&x).relators(), &[Vec::<i64>::new()]);
        assert!(GroupPresentation::new(1, vec![vec![2]]).is_err());
        let q = GroupPresentation::new(2, vec![vec![1, 2, -2, -1, 1]]).unwrap();
        assert_eq!(q.relators(), &[vec![1]]);
    }

    #[test]
    fn connected_sum() {
        let a = g_squared();
        let b = boundary_connected_sum(&a, &SteinHandlebody::disk());
        assert_eq!(b, a);
        let c = boundary_connected_sum(&a, &a);
        assert_eq!(c.one_handles, 2);
        assert_eq!(c.handles[1].word, vec![2, 2]);
        assert!(validate(&c).is_ok());
        let hc = homology(&c);
        assert_eq!(hc.torsion_orders, vec![BigInt::from(2), BigInt::from(2)]);
        let u = boundary_connected_sum(&unknot_body(), &unknot_body());
        assert_eq!(
            intersection_matrix(&u).unwrap(),
            IntegerMatrix::diagonal_from(&[-2i64, -2])
        );
        assert_eq!(homology(&u).b2, 2);
    }

    #[test]
    fn intersection_form_over_one_handles() {
        // h1 over g, h2 over g⁻¹: H₂ is spanned by h1 + h2.
        let x = SteinHandlebody::with_derived_framings(
            1,
            vec![
                TwoHandle::unknot().with_word(vec![1]),
                TwoHandle::unknot().with_word(vec![-1]),
            ],
            IntegerMatrix::from_rows(&[[0, 1], [1, 0]]).unwrap(),
        );
        let q = intersection_form(&x);
        assert_eq!(q, IntegerMatrix::from_rows(&[[-2]]).unwrap());
    }
}
