//! Dense matrices over exact rationals: Bareiss determinants, rank, reduced
//! row echelon form and linear solves with inconsistency certificates.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Index, IndexMut};

pub type Q = BigRational;

pub fn q(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

pub fn qr(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Index<(usize, usize)> for RationalMatrix {
    type Output = Q;
    fn index(&self, (r, c): (usize, usize)) -> &Q {
        assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for RationalMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Q {
        assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![Q::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Q::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        RationalMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[Q] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Q>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &RationalMatrix) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = &other[(k, c)];
                    if !b.is_zero() {
                        out[(r, c)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn scale(&self, s: &Q) -> Self {
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn add(&self, other: &RationalMatrix) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &RationalMatrix) -> Self {
        self.add(&other.scale(&q(-1)))
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut m = Self::zeros(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                m[(i, j)] = self[(r, c)].clone();
            }
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|r| (0..r).all(|c| self[(r, c)] == self[(c, r)]))
    }

    pub fn row_sums(&self) -> Vec<Q> {
        (0..self.rows).map(|r| self.row(r).iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<Q> {
        (0..self.cols)
            .map(|c| (0..self.rows).map(|r| &self[(r, c)]).sum())
            .collect()
    }

    /// Symmetric with every row and column summing to zero.
    pub fn is_symmetric_zero_sum(&self) -> bool {
        self.is_symmetric() && self.row_sums().iter().all(|x| x.is_zero())
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Exact determinant by Bareiss fraction-free elimination.  Each row is
    /// first scaled to integers; the scales are divided out at the end.
    pub fn determinant(&self) -> Q {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Q::one();
        }
        let mut scale = BigInt::one();
        let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        for r in 0..n {
            let l = self
                .row(r)
                .iter()
                .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            scale *= &l;
            a.push(
                self.row(r)
                    .iter()
                    .map(|x| x.numer() * (&l / x.denom()))
                    .collect(),
            );
        }
        let det = bareiss(&mut a);
        Q::new(det, scale)
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (RationalMatrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place(None);
        (m, pivots)
    }

    /// Row-reduce in place; when `track` is given, apply the same row
    /// operations to it.  Returns pivot columns.
    fn rref_in_place(&mut self, mut track: Option<&mut RationalMatrix>) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self[(r, col)].is_zero()) else {
                continue;
            };
            self.swap_rows(row, p);
            if let Some(t) = track.as_deref_mut() {
                t.swap_rows(row, p);
            }
            let inv = self[(row, col)].recip();
            for c in 0..self.cols {
                let v = &self[(row, c)] * &inv;
                self[(row, c)] = v;
            }
            if let Some(t) = track.as_deref_mut() {
                for c in 0..t.cols {
                    let v = &t[(row, c)] * &inv;
                    t[(row, c)] = v;
                }
            }
            for r in 0..self.rows {
                if r == row || self[(r, col)].is_zero() {
                    continue;
                }
                let f = self[(r, col)].clone();
                for c in 0..self.cols {
                    if !self[(row, c)].is_zero() {
                        let v = &self[(r, c)] - &f * &self[(row, c)];
                        self[(r, c)] = v;
                    }
                }
                if let Some(t) = track.as_deref_mut() {
                    for c in 0..t.cols {
                        if !t[(row, c)].is_zero() {
                            let v = &t[(r, c)] - &f * &t[(row, c)];
                            t[(r, c)] = v;
                        }
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : A x = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<Q>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Q::zero(); self.cols];
                v[f] = Q::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -r[(i, f)].clone();
                }
                v
            })
            .collect()
    }

    /// Inverse of a square matrix, `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square());
        let n = self.rows;
        if n == 0 {
            return Some(self.clone());
        }
        let mut aug = RationalMatrix::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug[(r, c)] = self[(r, c)].clone();
            }
            aug[(r, n + r)] = Q::one();
        }
        let pivots = aug.rref_in_place(None);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        let rows: Vec<usize> = (0..n).collect();
        Some(aug.submatrix(&rows, &cols))
    }

    /// Solve `A x = b`.
    pub fn solve(&self, b: &[Q]) -> Solution {
        assert_eq!(b.len(), self.rows);
        let mut aug = RationalMatrix::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug[(r, c)] = self[(r, c)].clone();
            }
            aug[(r, self.cols)] = b[r].clone();
        }
        let mut t = RationalMatrix::identity(self.rows);
        let pivots = aug.rref_in_place(Some(&mut t));
        if let Some(pos) = pivots.iter().position(|&p| p == self.cols) {
            // Row `pos` reads 0 = 1, and row `pos` of `t` combines the
            // original equations into exactly that.
            return Solution::Inconsistent {
                certificate: t.row(pos).to_vec(),
            };
        }
        let mut x = vec![Q::zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = aug[(i, self.cols)].clone();
        }
        Solution::Consistent {
            particular: x,
            nullspace: self.nullspace(),
        }
    }
}

fn bareiss(a: &mut [Vec<BigInt>]) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    /// `particular` solves the system; adding any combination of the
    /// `nullspace` vectors gives every other solution.
    Consistent {
        particular: Vec<Q>,
        nullspace: Vec<Vec<Q>>,
    },
    /// `certificate` `y` satisfies `yᵀA = 0` and `yᵀb ≠ 0`.
    Inconsistent { certificate: Vec<Q> },
}

/// True iff `u = s * v` for some nonzero rational `s`; returns `s`.
/// Supports must agree exactly, then ratios are compared by cross-multiplying.
pub fn proportional(u: &[Q], v: &[Q]) -> Option<Q> {
    if u.len() != v.len() {
        return None;
    }
    let mut factor: Option<Q> = None;
    let mut anchor: Option<usize> = None;
    for i in 0..u.len() {
        if u[i].is_zero() != v[i].is_zero() {
            return None;
        }
        if u[i].is_zero() {
            continue;
        }
        match anchor {
            None => {
                anchor = Some(i);
                factor = Some(&u[i] / &v[i]);
            }
            Some(a) => {
                if &u[i] * &v[a] != &u[a] * &v[i] {
                    return None;
                }
            }
        }
    }
    factor
}

pub fn is_nonnegative(x: &Q) -> bool {
    !x.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn permutation_det(m: &RationalMatrix) -> Q {
        // Leibniz expansion, the brute-force oracle.
        let n = m.rows();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut total = Q::zero();
        fn rec(k: usize, perm: &mut Vec<usize>, m: &RationalMatrix, total: &mut Q) {
            let n = perm.len();
            if k == n {
                let mut inv = 0;
                for i in 0..n {
                    for j in i + 1..n {
                        if perm[i] > perm[j] {
                            inv += 1;
                        }
                    }
                }
                let mut prod = if inv % 2 == 0 { q(1) } else { q(-1) };
                for (i, &p) in perm.iter().enumerate() {
                    prod *= &m[(i, p)];
                }
                *total += prod;
                return;
            }
            for i in k..n {
                perm.swap(k, i);
                rec(k + 1, perm, m, total);
                perm.swap(k, i);
            }
        }
        rec(0, &mut perm, m, &mut total);
        total
    }

    #[test]
    fn small_determinants() {
        assert_eq!(RationalMatrix::identity(3).determinant(), q(1));
        assert_eq!(RationalMatrix::from_i64(&[&[1, 2], &[3, 4]]).determinant(), q(-2));
        assert_eq!(RationalMatrix::zeros(0, 0).determinant(), q(1));
        let m = RationalMatrix::from_rows(vec![vec![qr(1, 2), qr(1, 3)], vec![qr(1, 4), qr(1, 5)]]);
        assert_eq!(m.determinant(), qr(1, 10) - qr(1, 12));
        let swap = RationalMatrix::from_i64(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 5]]);
        assert_eq!(swap.determinant(), q(-5));
    }

    #[test]
    fn response_matrix_rank() {
        let l = RationalMatrix::from_rows(vec![
            vec![qr(-5, 6), qr(1, 3), qr(1, 2)],
            vec![qr(1, 3), qr(-4, 3), q(1)],
            vec![qr(1, 2), q(1), qr(-3, 2)],
        ]);
        assert_eq!(l.rank(), 2);
        let ns = l.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(ns[0].iter().all(|x| *x == ns[0][0]));
    }

    #[test]
    fn solve_cases() {
        let a = RationalMatrix::from_i64(&[&[1, 1], &[2, 2]]);
        match a.solve(&[q(1), q(2)]) {
            Solution::Consistent { particular, nullspace } => {
                assert_eq!(a.mul_vec(&particular), vec![q(1), q(2)]);
                assert_eq!(nullspace.len(), 1);
            }
            _ => panic!("expected a solution"),
        }
        match a.solve(&[q(1), q(3)]) {
            Solution::Inconsistent { certificate } => {
                let ya: Vec<Q> = (0..2).map(|c| &certificate[0] * &a[(0, c)] + &certificate[1] * &a[(1, c)]).collect();
                assert!(ya.iter().all(|x| x.is_zero()));
                assert!(!(&certificate[0] * q(1) + &certificate[1] * q(3)).is_zero());
            }
            _ => panic!("expected inconsistency"),
        }
    }

    #[test]
    fn proportionality() {
        let u = vec![q(6), q(6), q(3), q(2), q(6)];
        let v = vec![q(1), q(1), qr(1, 2), qr(1, 3), q(1)];
        assert_eq!(proportional(&u, &v), Some(q(6)));
        assert_eq!(proportional(&v, &v), Some(q(1)));
        assert_eq!(proportional(&[q(1), q(0)], &[q(1), q(1)]), None);
        assert_eq!(proportional(&[q(1), q(2)], &[q(1), q(3)]), None);
        assert_eq!(proportional(&[q(0)], &[q(0)]), None);
    }

    fn small_matrix(n: usize) -> impl Strategy<Value = RationalMatrix> {
        proptest::collection::vec((-4i64..=4, 1i64..=3), n * n).prop_map(move |v| {
            RationalMatrix::from_rows(
                v.chunks(n)
                    .map(|r| r.iter().map(|&(a, b)| qr(a, b)).collect())
                    .collect(),
            )
        })
    }

    proptest! {
        #[test]
        fn bareiss_matches_leibniz(m in (1usize..=5).prop_flat_map(small_matrix)) {
            prop_assert_eq!(m.determinant(), permutation_det(&m));
        }

        #[test]
        fn rank_agrees_with_determinant(m in (1usize..=4).prop_flat_map(small_matrix)) {
            let full = m.rank() == m.rows();
            prop_assert_eq!(full, !m.determinant().is_zero());
        }

        #[test]
        fn solve_is_exact(m in (1usize..=4).prop_flat_map(small_matrix), b in proptest::collection::vec(-3i64..=3, 4)) {
            let b: Vec<Q> = b.iter().take(m.rows()).map(|&x| q(x)).collect();
            match m.solve(&b) {
                Solution::Consistent { particular, nullspace } => {
                    prop_assert_eq!(m.mul_vec(&particular), b.clone());
                    prop_assert_eq!(nullspace.len(), m.cols() - m.rank());
                    for v in nullspace {
                        prop_assert!(m.mul_vec(&v).iter().all(|x| x.is_zero()));
                    }
                }
                Solution::Inconsistent { certificate } => {
                    let ya = m.transpose().mul_vec(&certificate);
                    prop_assert!(ya.iter().all(|x| x.is_zero()));
                    let yb: Q = certificate.iter().zip(&b).map(|(y, x)| y * x).sum();
                    prop_assert!(!yb.is_zero());
                }
            }
        }
    }
}
