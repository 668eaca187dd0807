use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{FormError, IntegerMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Definiteness {
    PositiveDefinite,
    NegativeDefinite,
    Indefinite,
    Degenerate,
}

impl Definiteness {
    pub fn as_str(self) -> &'static str {
        match self {
            Definiteness::PositiveDefinite => "positive-definite",
            Definiteness::NegativeDefinite => "negative-definite",
            Definiteness::Indefinite => "indefinite",
            Definiteness::Degenerate => "degenerate",
        }
    }
}

impl fmt::Display for Definiteness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Inertia (b⁺, b⁻, b⁰) of a symmetric form.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl Signature {
    pub fn value(&self) -> i64 {
        self.positive as i64 - self.negative as i64
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FormProperties {
    pub even: bool,
    pub unimodular: bool,
    pub definiteness: Definiteness,
    pub signature: Signature,
    /// Dimension of the lattice (number of rows).
    pub rank: usize,
    pub determinant: BigInt,
}

/// Parity, unimodularity, inertia and determinant of a symmetric matrix.
///
/// Inertia comes from symmetric integer elimination: each step is a rational
/// congruence scaled by a positive factor, so signs of the pivots are exact.
pub fn form_properties(q: &IntegerMatrix) -> Result<FormProperties, FormError> {
    if !q.is_square() {
        return Err(FormError::NotSquare {
            rows: q.rows(),
            cols: q.cols(),
        });
    }
    if let Some((i, j)) = first_asymmetry(q) {
        return Err(FormError::NotSymmetric { row: i, col: j });
    }
    let determinant = q.determinant().expect("square");
    let signature = inertia(q);
    let even = q.diagonal().iter().all(|x| x.is_even());
    let definiteness = if signature.positive > 0 && signature.negative > 0 {
        Definiteness::Indefinite
    } else if signature.zero > 0 {
        Definiteness::Degenerate
    } else if signature.negative == 0 {
        Definiteness::PositiveDefinite
    } else {
        Definiteness::NegativeDefinite
    };
    Ok(FormProperties {
        even,
        unimodular: determinant.abs().is_one(),
        definiteness,
        signature,
        rank: q.rows(),
        determinant,
    })
}

fn first_asymmetry(q: &IntegerMatrix) -> Option<(usize, usize)> {
    (0..q.rows())
        .flat_map(|i| (0..i).map(move |j| (i, j)))
        .find(|&(i, j)| q[(i, j)] != q[(j, i)])
}

fn inertia(q: &IntegerMatrix) -> Signature {
    let n = q.rows();
    let mut a: Vec<Vec<BigInt>> = q.to_rows();
    let mut sig = Signature::default();
    let mut k = 0;
    while k < n {
        let pivot_row = (k..n).find(|&i| !a[i][i].is_zero());
        let p = match pivot_row {
            Some(p) => p,
            None => {
                // All remaining diagonal entries vanish; a nonzero off-diagonal
                // entry a_ij gives a_ii + 2a_ij + a_jj = 2a_ij after adding
                // row/column j to row/column i.
                let off = (k..n)
                    .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                    .find(|&(i, j)| !a[i][j].is_zero());
                let Some((i, j)) = off else {
                    sig.zero += n - k;
                    break;
                };
                for c in 0..n {
                    let x = a[j][c].clone();
                    a[i][c] += x;
                }
                for r in 0..n {
                    let x = a[r][j].clone();
                    a[r][i] += x;
                }
                i
            }
        };
        if p != k {
            a.swap(p, k);
            for row in a.iter_mut() {
                row.swap(p, k);
            }
        }
        let piv = a[k][k].clone();
        if piv.is_positive() {
            sig.positive += 1;
        } else {
            sig.negative += 1;
        }
        // |piv| times the Schur complement keeps inertia and stays integral.
        let sign = if piv.is_positive() {
            BigInt::one()
        } else {
            -BigInt::one()
        };
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &piv * &a[i][j] - &a[i][k] * &a[k][j];
                a[i][j] = t * &sign;
            }
        }
        let content = (k + 1..n)
            .flat_map(|i| (k + 1..n).map(move |j| (i, j)))
            .fold(BigInt::zero(), |g, (i, j)| g.gcd(&a[i][j]));
        if content > BigInt::one() {
            for row in a.iter_mut().skip(k + 1) {
                for x in row.iter_mut().skip(k + 1) {
                    *x /= &content;
                }
            }
        }
        k += 1;
    }
    sig
}
