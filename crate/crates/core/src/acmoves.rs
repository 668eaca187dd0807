//! Bounded Andrews–Curtis search on handle presentations.
//!
//! States are kept canonical: relators freely and cyclically reduced, each
//! replaced by the smaller of itself and its inverse, sorted, and generators
//! renumbered by first occurrence. Under this quotient the inversion and
//! swap moves are invisible, so the search branches only on multiplication
//! and conjugation.
//!
//! A relator consisting of a single letter `y^±1` is always eliminated
//! before branching: `ClearGenerator` deletes `y` from the other relators
//! (each deletion multiplies by a conjugate of that relator) and
//! `Destabilize` then drops the pair. These forced steps are recorded in the
//! trace but do not count towards the depth.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::chern::c1_class;
use crate::stein::{
    free_reduce, invert_word, presentation, ChainFrame, GroupPresentation, SteinHandlebody,
    TwoHandle,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AcMove {
    /// rᵢ ← rᵢ⁻¹
    Invert { relator: usize },
    Swap { a: usize, b: usize },
    /// rₜ ← rₜ·r_b^±1 (right) or r_b^±1·rₜ (left)
    Multiply {
        target: usize,
        by: usize,
        inverse: bool,
        side: Side,
    },
    /// rᵢ ← l·rᵢ·l⁻¹
    Conjugate { relator: usize, letter: i64 },
    /// Adds generator g+1 and relator g+1.
    Stabilize,
    /// rᵢ = y^±1: deletes y from every other relator.
    ClearGenerator { relator: usize },
    /// rᵢ = y^±1 with y in no other relator: removes both.
    Destabilize { relator: usize },
}

impl fmt::Display for AcMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            AcMove::Invert { relator } => write!(f, "invert r{relator}"),
            AcMove::Swap { a, b } => write!(f, "swap r{a} r{b}"),
            AcMove::Multiply {
                target,
                by,
                inverse,
                side,
            } => {
                let e = if inverse { "^-1" } else { "" };
                match side {
                    Side::Right => write!(f, "r{target} <- r{target} r{by}{e}"),
                    Side::Left => write!(f, "r{target} <- r{by}{e} r{target}"),
                }
            }
            AcMove::Conjugate { relator, letter } => {
                write!(f, "conjugate r{relator} by {letter}")
            }
            AcMove::Stabilize => write!(f, "stabilize"),
            AcMove::ClearGenerator { relator } => write!(f, "clear generator of r{relator}"),
            AcMove::Destabilize { relator } => write!(f, "destabilize r{relator}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum MoveError {
    #[error("relator index {0} out of range")]
    RelatorIndex(usize),
    #[error("letter {0} is not a generator")]
    Letter(i64),
    #[error("multiplying relator {0} by itself is not an Andrews–Curtis move")]
    SelfMultiply(usize),
    #[error("relator {0} is not a single letter")]
    NotSingleLetter(usize),
    #[error("generator of relator {0} still occurs in another relator")]
    GeneratorInUse(usize),
    #[error("replay ended at {found} instead of the recorded {expected}")]
    ReplayMismatch {
        expected: GroupPresentation,
        found: GroupPresentation,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AcBudget {
    pub max_depth: usize,
    pub max_states: usize,
}

impl Default for AcBudget {
    fn default() -> Self {
        Self {
            max_depth: 8,
            max_states: 200_000,
        }
    }
}

/// Nontrivial abelianization: the presentation cannot describe the trivial group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Obstruction {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl fmt::Display for Obstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "abelianization ")?;
        let mut first = true;
        if self.free_rank > 0 {
            match self.free_rank {
                1 => write!(f, "ℤ")?,
                k => write!(f, "ℤ^{k}")?,
            }
            first = false;
        }
        for t in &self.torsion {
            if !first {
                write!(f, " ⊕ ")?;
            }
            write!(f, "ℤ/{t}")?;
            first = false;
        }
        Ok(())
    }
}

/// A replayable sequence of moves between two canonical presentations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AcTrace {
    pub start: GroupPresentation,
    pub moves: Vec<AcMove>,
    pub end: GroupPresentation,
}

impl AcTrace {
    pub fn verify(&self) -> Result<(), MoveError> {
        let found = replay(&self.start, &self.moves)?;
        if found == self.end {
            Ok(())
        } else {
            Err(MoveError::ReplayMismatch {
                expected: self.end.clone(),
                found,
            })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AcOutcome {
    /// All generators removed; `trace.end` has zero generators.
    Trivialized { trace: AcTrace, states: usize },
    /// Budget spent (or an obstruction found) first; `best` ends at the
    /// least complex state seen, by (generators, total relator length).
    Exhausted {
        best: AcTrace,
        obstruction: Option<Obstruction>,
        states: usize,
    },
}

impl AcOutcome {
    pub fn is_trivialized(&self) -> bool {
        matches!(self, AcOutcome::Trivialized { .. })
    }

    pub fn trace(&self) -> &AcTrace {
        match self {
            AcOutcome::Trivialized { trace, .. } => trace,
            AcOutcome::Exhausted { best, .. } => best,
        }
    }
}

fn relator(p: &GroupPresentation, i: usize) -> Result<&Vec<i64>, MoveError> {
    p.relators().get(i).ok_or(MoveError::RelatorIndex(i))
}

fn single_letter(p: &GroupPresentation, i: usize) -> Result<usize, MoveError> {
    match relator(p, i)?.as_slice() {
        [l] => Ok(l.unsigned_abs() as usize),
        _ => Err(MoveError::NotSingleLetter(i)),
    }
}

/// Applies one move; the result is freely reduced but not canonical.
pub fn apply_move(p: &GroupPresentation, mv: &AcMove) -> Result<GroupPresentation, MoveError> {
    let g = p.generators();
    let mut rels: Vec<Vec<i64>> = p.relators().to_vec();
    match *mv {
        AcMove::Invert { relator: i } => {
            let r = relator(p, i)?;
            rels[i] = invert_word(r);
        }
        AcMove::Swap { a, b } => {
            relator(p, a)?;
            relator(p, b)?;
            rels.swap(a, b);
        }
        AcMove::Multiply {
            target,
            by,
            inverse,
            side,
        } => {
            if target == by {
                return Err(MoveError::SelfMultiply(target));
            }
            let t = relator(p, target)?;
            let b = relator(p, by)?;
            let b = if inverse { invert_word(b) } else { b.clone() };
            let mut w = Vec::with_capacity(t.len() + b.len());
            match side {
                Side::Right => {
                    w.extend_from_slice(t);
                    w.extend_from_slice(&b);
                }
                Side::Left => {
                    w.extend_from_slice(&b);
                    w.extend_from_slice(t);
                }
            }
            rels[target] = free_reduce(&w);
        }
        AcMove::Conjugate { relator: i, letter } => {
            if letter == 0 || letter.unsigned_abs() as usize > g {
                return Err(MoveError::Letter(letter));
            }
            let r = relator(p, i)?;
            let mut w = Vec::with_capacity(r.len() + 2);
            w.push(letter);
            w.extend_from_slice(r);
            w.push(-letter);
            rels[i] = free_reduce(&w);
        }
        AcMove::Stabilize => {
            rels.push(vec![g as i64 + 1]);
            return Ok(GroupPresentation::from_parts(g + 1, rels));
        }
        AcMove::ClearGenerator { relator: i } => {
            let y = single_letter(p, i)?;
            for (j, r) in rels.iter_mut().enumerate() {
                if j != i {
                    let kept: Vec<i64> = r
                        .iter()
                        .copied()
                        .filter(|l| l.unsigned_abs() as usize != y)
                        .collect();
                    *r = free_reduce(&kept);
                }
            }
        }
        AcMove::Destabilize { relator: i } => {
            let y = single_letter(p, i)?;
            let used = rels
                .iter()
                .enumerate()
                .any(|(j, r)| j != i && r.iter().any(|l| l.unsigned_abs() as usize == y));
            if used {
                return Err(MoveError::GeneratorInUse(i));
            }
            rels.remove(i);
            let y = y as i64;
            for r in rels.iter_mut() {
                for l in r.iter_mut() {
                    if l.abs() > y {
                        *l -= l.signum();
                    }
                }
            }
            return Ok(GroupPresentation::from_parts(g - 1, rels));
        }
    }
    Ok(GroupPresentation::from_parts(g, rels))
}

fn cyclic_reduce(w: &[i64]) -> Vec<i64> {
    let w = free_reduce(w);
    let mut lo = 0;
    let mut hi = w.len();
    while hi - lo >= 2 && w[lo] == -w[hi - 1] {
        lo += 1;
        hi -= 1;
    }
    w[lo..hi].to_vec()
}

fn letter_key(l: i64) -> (u64, bool) {
    (l.unsigned_abs(), l < 0)
}

fn word_key(w: &[i64]) -> (usize, Vec<(u64, bool)>) {
    (w.len(), w.iter().map(|&l| letter_key(l)).collect())
}

fn oriented(w: Vec<i64>) -> Vec<i64> {
    let inv = invert_word(&w);
    if word_key(&inv) < word_key(&w) {
        inv
    } else {
        w
    }
}

fn sorted_oriented(rels: Vec<Vec<i64>>) -> Vec<Vec<i64>> {
    let mut rels: Vec<Vec<i64>> = rels.into_iter().map(oriented).collect();
    rels.sort_by_key(|w| word_key(w));
    rels
}

/// Canonical representative; see the module docs.
pub fn canonicalize(p: &GroupPresentation) -> GroupPresentation {
    let g = p.generators();
    let rels = sorted_oriented(p.relators().iter().map(|r| cyclic_reduce(r)).collect());
    let mut order: Vec<usize> = Vec::with_capacity(g);
    let mut seen = vec![false; g + 1];
    for r in &rels {
        for l in r {
            let x = l.unsigned_abs() as usize;
            if !seen[x] {
                seen[x] = true;
                order.push(x);
            }
        }
    }
    for (x, s) in seen.iter().enumerate().skip(1) {
        if !s {
            order.push(x);
        }
    }
    let mut rename = vec![0i64; g + 1];
    for (new, &old) in order.iter().enumerate() {
        rename[old] = new as i64 + 1;
    }
    let rels = rels
        .into_iter()
        .map(|r| {
            r.into_iter()
                .map(|l| rename[l.unsigned_abs() as usize] * l.signum())
                .collect()
        })
        .collect();
    GroupPresentation::from_parts(g, sorted_oriented(rels))
}

/// Applies `moves` from the canonical form of `start`, canonicalizing after each.
pub fn replay(start: &GroupPresentation, moves: &[AcMove]) -> Result<GroupPresentation, MoveError> {
    let mut s = canonicalize(start);
    for mv in moves {
        s = canonicalize(&apply_move(&s, mv)?);
    }
    Ok(s)
}

/// Nontrivial abelianization, if any.
pub fn trivializability_obstruction(p: &GroupPresentation) -> Option<Obstruction> {
    let (free_rank, torsion) = p.abelianization();
    if free_rank == 0 && torsion.is_empty() {
        None
    } else {
        Some(Obstruction { free_rank, torsion })
    }
}

/// Eliminates single-letter relators until none remain.
fn forced_closure(mut s: GroupPresentation) -> (GroupPresentation, Vec<AcMove>) {
    let mut moves = Vec::new();
    loop {
        let Some(i) = s.relators().iter().position(|r| r.len() == 1) else {
            return (s, moves);
        };
        let y = s.relators()[i][0].unsigned_abs();
        let elsewhere = s
            .relators()
            .iter()
            .enumerate()
            .any(|(j, r)| j != i && r.iter().any(|l| l.unsigned_abs() == y));
        let mv = if elsewhere {
            AcMove::ClearGenerator { relator: i }
        } else {
            AcMove::Destabilize { relator: i }
        };
        s = canonicalize(&apply_move(&s, &mv).expect("forced move is applicable"));
        moves.push(mv);
    }
}

fn branch_moves(s: &GroupPresentation) -> Vec<AcMove> {
    let rels = s.relators();
    let mut out = Vec::new();
    for target in 0..rels.len() {
        for by in 0..rels.len() {
            if by == target || rels[by].is_empty() {
                continue;
            }
            for inverse in [false, true] {
                for side in [Side::Right, Side::Left] {
                    out.push(AcMove::Multiply {
                        target,
                        by,
                        inverse,
                        side,
                    });
                }
            }
        }
    }
    for (i, r) in rels.iter().enumerate() {
        if r.len() < 2 {
            continue;
        }
        for g in 1..=s.generators() as i64 {
            for letter in [g, -g] {
                out.push(AcMove::Conjugate { relator: i, letter });
            }
        }
    }
    out
}

struct Node {
    state: GroupPresentation,
    parent: Option<usize>,
    moves: Vec<AcMove>,
}

fn complexity(p: &GroupPresentation) -> (usize, usize) {
    (p.generators(), p.total_length())
}

fn trace_to(nodes: &[Node], start: &GroupPresentation, idx: usize) -> AcTrace {
    let mut chain = Vec::new();
    let mut cur = Some(idx);
    while let Some(i) = cur {
        chain.push(i);
        cur = nodes[i].parent;
    }
    let moves = chain
        .iter()
        .rev()
        .flat_map(|&i| nodes[i].moves.iter().cloned())
        .collect();
    AcTrace {
        start: start.clone(),
        moves,
        end: nodes[idx].state.clone(),
    }
}

/// Breadth-first search for a sequence of moves removing every generator.
///
/// Layers are expanded in a fixed move order, so the result is the first
/// zero-generator state at the shallowest depth and does not depend on
/// anything but the input. A nontrivial abelianization ends the search
/// immediately.
pub fn ac_reduce(p: &GroupPresentation, max_depth: usize, max_states: usize) -> AcOutcome {
    let start = canonicalize(p);
    let obstruction = trivializability_obstruction(&start);
    let (s0, forced) = forced_closure(start.clone());
    let mut nodes = vec![Node {
        state: s0.clone(),
        parent: None,
        moves: forced,
    }];
    let mut best = 0usize;
    if s0.generators() == 0 {
        return AcOutcome::Trivialized {
            trace: trace_to(&nodes, &start, 0),
            states: 1,
        };
    }
    if obstruction.is_some() {
        return AcOutcome::Exhausted {
            best: trace_to(&nodes, &start, 0),
            obstruction,
            states: 1,
        };
    }
    let mut seen: BTreeSet<GroupPresentation> = BTreeSet::new();
    seen.insert(s0);
    let mut frontier = vec![0usize];
    'search: for _ in 0..max_depth {
        let mut next = Vec::new();
        for &idx in &frontier {
            for mv in branch_moves(&nodes[idx].state) {
                let stepped = match apply_move(&nodes[idx].state, &mv) {
                    Ok(s) => canonicalize(&s),
                    Err(_) => continue,
                };
                let (state, mut moves) = forced_closure(stepped);
                if seen.contains(&state) {
                    continue;
                }
                seen.insert(state.clone());
                moves.insert(0, mv);
                let goal = state.generators() == 0;
                let key = (complexity(&state), state.clone());
                nodes.push(Node {
                    state,
                    parent: Some(idx),
                    moves,
                });
                let id = nodes.len() - 1;
                if goal {
                    return AcOutcome::Trivialized {
                        trace: trace_to(&nodes, &start, id),
                        states: nodes.len(),
                    };
                }
                if key < (complexity(&nodes[best].state), nodes[best].state.clone()) {
                    best = id;
                }
                next.push(id);
                if nodes.len() >= max_states {
                    break 'search;
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    AcOutcome::Exhausted {
        best: trace_to(&nodes, &start, best),
        obstruction: None,
        states: nodes.len(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HandleReduction {
    /// No 1-handles to remove.
    Unchanged,
    /// All 1-handles removed. The new record has one 2-handle per H₂ basis
    /// class, linking matrix the intersection form and rotation numbers the
    /// values of c₁, so b₂ and the divisibility of c₁ are unchanged.
    Reduced {
        handlebody: SteinHandlebody,
        trace: AcTrace,
    },
    Exhausted(AcOutcome),
}

/// Replaces a page whose π₁ presentation is AC-trivial by a 1-handle-free
/// record with the same H₂ data.
pub fn reduce_handlebody(x: &SteinHandlebody, budget: AcBudget) -> HandleReduction {
    if x.one_handles == 0 {
        return HandleReduction::Unchanged;
    }
    let outcome = ac_reduce(&presentation(x), budget.max_depth, budget.max_states);
    let AcOutcome::Trivialized { trace, .. } = outcome else {
        return HandleReduction::Exhausted(outcome);
    };
    HandleReduction::Reduced {
        handlebody: handle_free_model(x),
        trace,
    }
}

fn handle_free_model(x: &SteinHandlebody) -> SteinHandlebody {
    let frame = ChainFrame::new(x);
    let q = frame.intersection_form(x);
    let c1 = c1_class(x);
    let basis = &frame.h2_basis;
    let unit_of = |j: usize| -> Option<usize> {
        let col = basis.column(j);
        let ones: Vec<usize> = (0..col.len()).filter(|&i| col[i].is_one()).collect();
        let zeros = col.iter().filter(|c| num_traits::Zero::is_zero(*c)).count();
        (ones.len() == 1 && zeros == col.len() - 1).then(|| ones[0])
    };
    let mut handles = Vec::with_capacity(basis.cols());
    for j in 0..basis.cols() {
        let handle = match unit_of(j) {
            Some(i) => TwoHandle {
                word: Vec::new(),
                ..x.handles[i].clone()
            },
            None => {
                let tb = i64::try_from(&q[(j, j)] + 1).expect("framing fits in i64");
                let rot = i64::try_from(&c1.free_coords[j]).expect("rotation fits in i64");
                TwoHandle::new(tb, rot)
            }
        };
        handles.push(handle);
    }
    SteinHandlebody::new(0, handles, q)
}
