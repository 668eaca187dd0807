use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntegerMatrix;

/// Smith normal form `source = u · d · v` with unimodular `u`, `v`.
///
/// The inverses of both factors are kept as well: `u_inv · source · v_inv = d`.
/// Columns of `v_inv` give a basis of the domain adapted to `source`, columns
/// of `u` a basis of the codomain, so that `source · v_inv[:, i] = dᵢ · u[:, i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfDecomposition {
    pub u: IntegerMatrix,
    pub d: IntegerMatrix,
    pub v: IntegerMatrix,
    pub u_inv: IntegerMatrix,
    pub v_inv: IntegerMatrix,
    pub source: IntegerMatrix,
}

impl SnfDecomposition {
    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        self.d.diagonal().iter().take_while(|x| !x.is_zero()).count()
    }

    /// The nonzero diagonal entries d₁ | d₂ | … in order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.d
            .diagonal()
            .into_iter()
            .take_while(|x| !x.is_zero())
            .collect()
    }
}

struct Reducer {
    a: IntegerMatrix,
    u: IntegerMatrix,
    u_inv: IntegerMatrix,
    v: IntegerMatrix,
    v_inv: IntegerMatrix,
}

// Each elementary operation on `a` is mirrored on the four factors so that
// `u · a · v` and `u_inv · source · v_inv = a` stay true throughout.
impl Reducer {
    fn row_add(&mut self, target: usize, source: usize, c: &BigInt) {
        self.a.add_row_multiple(target, source, c);
        self.u_inv.add_row_multiple(target, source, c);
        self.u.add_col_multiple(source, target, &-c);
    }

    fn col_add(&mut self, target: usize, source: usize, c: &BigInt) {
        self.a.add_col_multiple(target, source, c);
        self.v_inv.add_col_multiple(target, source, c);
        self.v.add_row_multiple(source, target, &-c);
    }

    fn row_swap(&mut self, i: usize, k: usize) {
        self.a.swap_rows(i, k);
        self.u_inv.swap_rows(i, k);
        self.u.swap_cols(i, k);
    }

    fn col_swap(&mut self, j: usize, k: usize) {
        self.a.swap_cols(j, k);
        self.v_inv.swap_cols(j, k);
        self.v.swap_rows(j, k);
    }

    fn col_negate(&mut self, j: usize) {
        self.a.negate_col(j);
        self.v_inv.negate_col(j);
        self.v.negate_row(j);
    }

    /// Smallest nonzero |entry| in the trailing block starting at (t, t);
    /// ties go to the lowest (row, column) in row-major order.
    fn pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<((usize, usize), BigInt)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                let x = &self.a[(i, j)];
                if x.is_zero() {
                    continue;
                }
                let ax = x.abs();
                if best.as_ref().is_none_or(|(_, b)| ax < *b) {
                    best = Some(((i, j), ax));
                }
            }
        }
        best.map(|(pos, _)| pos)
    }

    fn run(&mut self) {
        let (rows, cols) = (self.a.rows(), self.a.cols());
        for t in 0..rows.min(cols) {
            loop {
                let Some((pi, pj)) = self.pivot(t) else {
                    return;
                };
                self.row_swap(t, pi);
                self.col_swap(t, pj);
                let p = self.a[(t, t)].clone();

                for i in t + 1..rows {
                    if !self.a[(i, t)].is_zero() {
                        let q = &self.a[(i, t)] / &p;
                        self.row_add(i, t, &-q);
                    }
                }
                for j in t + 1..cols {
                    if !self.a[(t, j)].is_zero() {
                        let q = &self.a[(t, j)] / &p;
                        self.col_add(j, t, &-q);
                    }
                }

                let leftover = (t + 1..rows).any(|i| !self.a[(i, t)].is_zero())
                    || (t + 1..cols).any(|j| !self.a[(t, j)].is_zero());
                if leftover {
                    continue;
                }

                let bad_row = (t + 1..rows)
                    .find(|&i| (t + 1..cols).any(|j| !self.a[(i, j)].is_multiple_of(&p)));
                if let Some(i) = bad_row {
                    self.row_add(t, i, &BigInt::one());
                    continue;
                }

                if p.is_negative() {
                    self.col_negate(t);
                }
                break;
            }
        }
    }
}

/// Smith normal form with deterministic minimal-pivot elimination.
pub fn smith_normal_form(m: &IntegerMatrix) -> SnfDecomposition {
    let mut r = Reducer {
        a: m.clone(),
        u: IntegerMatrix::identity(m.rows()),
        u_inv: IntegerMatrix::identity(m.rows()),
        v: IntegerMatrix::identity(m.cols()),
        v_inv: IntegerMatrix::identity(m.cols()),
    };
    r.run();
    SnfDecomposition {
        u: r.u,
        d: r.a,
        v: r.v,
        u_inv: r.u_inv,
        v_inv: r.v_inv,
        source: m.clone(),
    }
}

/// Saturated ℤ-basis of `{x : m·x = 0}`, one vector per column.
pub fn kernel_basis(m: &IntegerMatrix) -> IntegerMatrix {
    kernel_from_snf(&smith_normal_form(m))
}

pub(crate) fn kernel_from_snf(snf: &SnfDecomposition) -> IntegerMatrix {
    let rank = snf.rank();
    let n = snf.source.cols();
    let cols: Vec<Vec<BigInt>> = (rank..n).map(|j| snf.v_inv.column(j)).collect();
    IntegerMatrix::from_columns(n, &cols).expect("columns of v_inv have matching length")
}

pub fn rank(m: &IntegerMatrix) -> usize {
    smith_normal_form(m).rank()
}

/// gcd of absolute values; 0 for an empty or all-zero list.
pub fn gcd_vector(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn check(m: &IntegerMatrix) -> SnfDecomposition {
        let s = smith_normal_form(m);
        assert_eq!(&(&s.u * &s.d) * &s.v, *m);
        assert_eq!(&(&s.u_inv * m) * &s.v_inv, s.d);
        assert!(s.u.is_unimodular() && s.v.is_unimodular());
        assert_eq!(&s.u * &s.u_inv, IntegerMatrix::identity(m.rows()));
        assert_eq!(&s.v * &s.v_inv, IntegerMatrix::identity(m.cols()));
        s
    }

    #[test]
    fn diag_2_3() {
        let m = IntegerMatrix::diagonal_from(&[2i64, 3]);
        assert_eq!(check(&m).d, IntegerMatrix::diagonal_from(&[1i64, 6]));
    }

    #[test]
    fn zero_matrix_is_fixed() {
        let m = IntegerMatrix::zeros(2, 3);
        let s = check(&m);
        assert!(s.d.is_zero());
        assert_eq!(s.u, IntegerMatrix::identity(2));
        assert_eq!(s.v, IntegerMatrix::identity(3));
    }

    #[test]
    fn two_by_two_example() {
        // invariant factors from determinantal divisors: gcd of entries 2, |det| = 4
        let m = IntegerMatrix::from_rows(&[[4, 6], [2, 2]]).unwrap();
        assert_eq!(check(&m).d, IntegerMatrix::diagonal_from(&[2i64, 2]));
    }

    #[test]
    fn empty_shapes() {
        for (r, c) in [(0, 0), (0, 3), (2, 0)] {
            let s = check(&IntegerMatrix::zeros(r, c));
            assert_eq!(s.rank(), 0);
        }
    }

    #[test]
    fn negative_pivot_sign_goes_into_v() {
        let m = IntegerMatrix::from_rows(&[[-3]]).unwrap();
        let s = check(&m);
        assert_eq!(s.d[(0, 0)], BigInt::from(3));
        assert_eq!(s.v[(0, 0)], BigInt::from(-1));
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel_basis(&IntegerMatrix::from_rows(&[[2]]).unwrap()).cols(), 0);
        assert_eq!(kernel_basis(&IntegerMatrix::zeros(1, 2)), IntegerMatrix::identity(2));
        let m = IntegerMatrix::from_rows(&[[1, 2]]).unwrap();
        let k = kernel_basis(&m);
        assert_eq!(k.cols(), 1);
        assert!((&m * &k).is_zero());
        let col = k.column(0);
        assert_eq!(gcd_vector(&col), BigInt::from(1));
        assert!(col == vec![BigInt::from(2), BigInt::from(-1)] || col == vec![BigInt::from(-2), BigInt::from(1)]);
    }

    #[test]
    fn gcd_conventions() {
        assert_eq!(gcd_vector(&[]), BigInt::zero());
        let v: Vec<BigInt> = [0, 7, 0, 0].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(gcd_vector(&v), BigInt::from(7));
        assert_eq!(gcd_vector(&[BigInt::from(4), BigInt::from(-6)]), BigInt::from(2));
    }
}
