//! Exterior coordinates, Lam's map, the forms Ω and Ω^D, the contraction κ,
//! the cyclic shift and the two Schubert charts.
//!
//! Ground positions are `0..2n` in the order `1 < 1~ < 2 < 2~ < ... < n < n~`,
//! so `k` sits at `2(k-1)` and `k~` at `2k-1`.  A basis vector `e_J` is the
//! wedge of its positions taken in ascending order.

use crate::combinat::{circle_position, concordant_index_pairs, element_at, element_name, enumerate_noncrossing, NoncrossingPartition};
use crate::electrical::linalg::{proportional, RationalMatrix, Solution, Q};
use crate::error::{input, internal, precondition, Error, Result};
use crate::groves::Lambda;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

/// Largest `n` accepted by [`kernel_dimension_of_kappa`].
pub const KAPPA_MAX_N: usize = 5;

/// A vector of `∧^k ℝ^{2n}` stored by its nonzero coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExteriorVector {
    n: usize,
    degree: usize,
    coords: BTreeMap<Vec<usize>, Q>,
}

impl ExteriorVector {
    pub fn zero(n: usize, degree: usize) -> Self {
        ExteriorVector { n, degree, coords: BTreeMap::new() }
    }

    /// `e_J` for ascending positions `J`.
    pub fn basis(n: usize, positions: &[usize]) -> Self {
        let mut v = Self::zero(n, positions.len());
        v.add_term(positions.to_vec(), Q::one());
        v
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn get(&self, positions: &[usize]) -> Q {
        self.coords.get(positions).cloned().unwrap_or_else(Q::zero)
    }

    /// Coordinate by ground elements (`k` or `n+k` for `k~`), in any order.
    pub fn coordinate(&self, elements: &[usize]) -> Q {
        let mut pos: Vec<usize> = elements.iter().map(|&x| circle_position(self.n, x)).collect();
        pos.sort_unstable();
        self.get(&pos)
    }

    /// Nonzero coordinates, ascending by position set.
    pub fn iter(&self) -> impl Iterator<Item = (&Vec<usize>, &Q)> {
        self.coords.iter()
    }

    pub fn add_term(&mut self, positions: Vec<usize>, c: Q) {
        debug_assert_eq!(positions.len(), self.degree);
        if c.is_zero() {
            return;
        }
        let slot = self.coords.entry(positions).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.coords.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, other: &ExteriorVector) -> ExteriorVector {
        let mut out = self.clone();
        for (k, v) in &other.coords {
            out.add_term(k.clone(), v.clone());
        }
        out
    }

    pub fn scale(&self, s: &Q) -> ExteriorVector {
        let mut out = Self::zero(self.n, self.degree);
        if !s.is_zero() {
            out.coords = self.coords.iter().map(|(k, v)| (k.clone(), v * s)).collect();
        }
        out
    }

    /// Coordinates over every `degree`-subset in lexicographic order.
    pub fn to_dense(&self) -> Vec<Q> {
        subsets(2 * self.n, self.degree).iter().map(|j| self.get(j)).collect()
    }

    /// `Some(s)` with `self = s * other`, `s ≠ 0`.
    pub fn proportional_to(&self, other: &ExteriorVector) -> Option<Q> {
        if self.n != other.n || self.degree != other.degree {
            return None;
        }
        proportional(&self.to_dense(), &other.to_dense())
    }

    /// Keys like `"1,1~,2"` with their values, ascending by position set.
    pub fn to_key_map(&self) -> Vec<(String, Q)> {
        self.coords.iter().map(|(k, v)| (subset_key(self.n, k), v.clone())).collect()
    }
}

/// `"1,1~,2"` for ascending positions.
pub fn subset_key(n: usize, positions: &[usize]) -> String {
    positions.iter().map(|&p| element_name(n, element_at(n, p))).collect::<Vec<_>>().join(",")
}

/// Inverse of [`subset_key`]; returns ascending positions.
pub fn parse_subset_key(n: usize, s: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (num, tilde) = match part.strip_suffix('~') {
            Some(x) => (x, true),
            None => (part, false),
        };
        let k: usize = num.parse().map_err(|_| Error::Input(format!("bad index {part:?}")))?;
        if k == 0 || k > n {
            return input(format!("index {part:?} out of range for n = {n}"));
        }
        out.push(if tilde { 2 * k - 1 } else { 2 * (k - 1) });
    }
    out.sort_unstable();
    if out.windows(2).any(|w| w[0] == w[1]) {
        return input(format!("repeated index in {s:?}"));
    }
    Ok(out)
}

/// All `k`-subsets of `0..m`, lexicographic.
pub fn subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > m {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] < m - k + i) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Sort `v` and return the parity of the permutation used (true = odd).
fn sort_with_parity(v: &mut [usize]) -> bool {
    let mut odd = false;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            odd = !odd;
            j -= 1;
        }
    }
    odd
}

fn sign(odd: bool) -> Q {
    if odd {
        -Q::one()
    } else {
        Q::one()
    }
}

/// `f_σ`: the sum of `e_{I,I~}` over index pairs concordant with `(σ, σ~)`.
pub fn f_sigma(sigma: &NoncrossingPartition) -> ExteriorVector {
    let n = sigma.n();
    let mut v = ExteriorVector::zero(n, n + 1);
    for pair in concordant_index_pairs(&sigma.kreweras_pair()) {
        let pos: Vec<usize> = pair.elements(n).iter().map(|&x| circle_position(n, x)).collect();
        v.add_term(pos, Q::one());
    }
    v
}

/// Lam's map `Λ ↦ Σ Λ_σ f_σ`.
pub fn lam_map(n: usize, lambda: &Lambda) -> ExteriorVector {
    let mut v = ExteriorVector::zero(n, n + 1);
    for (sigma, c) in lambda {
        for (k, x) in f_sigma(sigma).iter() {
            v.add_term(k.clone(), x * c);
        }
    }
    v
}

/// Writes `v = Σ Λ_σ f_σ` when possible.  `None` when `v` is outside the span.
pub fn solve_lambda(v: &ExteriorVector) -> Option<Lambda> {
    let n = v.n();
    if v.degree() != n + 1 {
        return None;
    }
    let sigmas = enumerate_noncrossing(n);
    let cols: Vec<Vec<Q>> = sigmas.iter().map(|s| f_sigma(s).to_dense()).collect();
    let rows = subsets(2 * n, n + 1).len();
    let a = RationalMatrix::from_rows((0..rows).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect());
    match a.solve(&v.to_dense()) {
        Solution::Consistent { particular, .. } => Some(
            sigmas
                .into_iter()
                .zip(particular)
                .filter(|(_, x)| !x.is_zero())
                .collect(),
        ),
        Solution::Inconsistent { .. } => None,
    }
}

fn check_rep(m: &RationalMatrix) -> Result<usize> {
    if m.cols() % 2 != 0 || m.cols() == 0 {
        return input(format!("a representative needs an even number of columns, got {}", m.cols()));
    }
    Ok(m.cols() / 2)
}

/// All maximal minors of a full-rank `k x 2n` matrix.
pub fn plucker(m: &RationalMatrix) -> Result<ExteriorVector> {
    let n = check_rep(m)?;
    let k = m.rows();
    if m.rank() != k {
        return precondition("the matrix does not have full row rank");
    }
    let rows: Vec<usize> = (0..k).collect();
    let mut v = ExteriorVector::zero(n, k);
    for cols in subsets(2 * n, k) {
        let d = m.submatrix(&rows, &cols).determinant();
        v.add_term(cols, d);
    }
    Ok(v)
}

/// A matrix whose Plücker vector is proportional to `v`.  Fails when `v` is
/// not decomposable.
pub fn representative(v: &ExteriorVector) -> Result<RationalMatrix> {
    let n = v.n();
    let k = v.degree();
    let Some((j0, pivot)) = v.iter().next().map(|(j, x)| (j.clone(), x.clone())) else {
        return precondition("the zero vector has no representative");
    };
    let mut m = RationalMatrix::zeros(k, 2 * n);
    for (r, &jr) in j0.iter().enumerate() {
        for c in 0..2 * n {
            if c == jr {
                m[(r, c)] = Q::one();
                continue;
            }
            if j0.contains(&c) {
                continue;
            }
            let mut cols = j0.clone();
            cols[r] = c;
            let odd = sort_with_parity(&mut cols);
            m[(r, c)] = sign(odd) * v.get(&cols) / &pivot;
        }
    }
    match plucker(&m)?.proportional_to(v) {
        Some(_) => Ok(m),
        None => precondition("the vector is not a point of the Grassmannian"),
    }
}

/// Ω as a `2n x 2n` matrix: `Ω(x, y) = xᵀ Ω y`.
pub fn omega(n: usize) -> RationalMatrix {
    let mut w = RationalMatrix::zeros(2 * n, 2 * n);
    let mut put = |a: usize, b: usize, c: Q| {
        w[(a, b)] += &c;
        w[(b, a)] -= &c;
    };
    for i in 0..n {
        put(2 * i, 2 * i + 1, Q::one());
    }
    for j in 1..n {
        put(2 * j, 2 * j - 1, Q::one());
    }
    if n > 0 {
        let s = if n % 2 == 0 { Q::one() } else { -Q::one() };
        put(0, 2 * n - 1, s);
    }
    w
}

/// Ω^D with cyclic indices.
pub fn omega_d(n: usize) -> RationalMatrix {
    let mut w = RationalMatrix::zeros(2 * n, 2 * n);
    let mut put = |a: usize, b: usize, c: Q| {
        w[(a, b)] += &c;
        w[(b, a)] -= &c;
    };
    for i in 0..n {
        put(2 * i, 2 * i + 1, Q::one());
        put(2 * i + 1, 2 * ((i + 1) % n), Q::one());
    }
    w
}

/// Diagonal sign matrix with `(-1)^(k-1)` at `k` and `k~`.
pub fn d_matrix(n: usize) -> RationalMatrix {
    let mut d = RationalMatrix::zeros(2 * n, 2 * n);
    for p in 0..2 * n {
        d[(p, p)] = sign((p / 2) % 2 == 1);
    }
    d
}

/// Σ: `e_1 ↦ (-1)^n e_n~` and every other basis vector moves one step back.
pub fn shift_matrix(n: usize) -> RationalMatrix {
    let mut s = RationalMatrix::zeros(2 * n, 2 * n);
    for p in 1..2 * n {
        s[(p, p - 1)] = Q::one();
    }
    if n > 0 {
        s[(0, 2 * n - 1)] = sign(n % 2 == 1);
    }
    s
}

/// `X ↦ X Σ`.
pub fn cyclic_shift(m: &RationalMatrix) -> Result<RationalMatrix> {
    let n = check_rep(m)?;
    Ok(m.mul(&shift_matrix(n)))
}

/// `∧^k Σ` on coordinates, as a signed permutation of basis vectors.
pub fn shift_coordinates(v: &ExteriorVector) -> ExteriorVector {
    let n = v.n();
    let flip = n % 2 == 1;
    let mut out = ExteriorVector::zero(n, v.degree());
    for (j, x) in v.iter() {
        let mut odd = false;
        let mut image: Vec<usize> = j
            .iter()
            .map(|&p| {
                if p == 0 {
                    odd ^= flip;
                    2 * n - 1
                } else {
                    p - 1
                }
            })
            .collect();
        odd ^= sort_with_parity(&mut image);
        out.add_term(image, sign(odd) * x);
    }
    out
}

/// `κ(e_J) = Σ_{p<q} (-1)^{p+q-1} W(a_p, a_q) e_{J∖{a_p,a_q}}`, extended linearly.
pub fn kappa(form: &RationalMatrix, v: &ExteriorVector) -> Result<ExteriorVector> {
    let n = v.n();
    if form.rows() != 2 * n || form.cols() != 2 * n {
        return input("form and vector sizes disagree");
    }
    if v.degree() < 2 {
        return input("κ needs degree at least 2");
    }
    let mut out = ExteriorVector::zero(n, v.degree() - 2);
    for (j, x) in v.iter() {
        kappa_basis(form, j, |rest, c| out.add_term(rest, c * x));
    }
    Ok(out)
}

fn kappa_basis(form: &RationalMatrix, j: &[usize], mut emit: impl FnMut(Vec<usize>, Q)) {
    for p in 0..j.len() {
        for q in p + 1..j.len() {
            let w = &form[(j[p], j[q])];
            if w.is_zero() {
                continue;
            }
            // 1-based exponent p+q-1 has the parity of the 0-based p+q+1.
            let c = sign((p + q + 1) % 2 == 1) * w;
            let rest = j.iter().enumerate().filter(|&(t, _)| t != p && t != q).map(|(_, &a)| a).collect();
            emit(rest, c);
        }
    }
}

/// `dim ker κ` on `∧^{n+1}`, for the form Ω.
pub fn kernel_dimension_of_kappa(n: usize) -> Result<usize> {
    if n == 0 || n > KAPPA_MAX_N {
        return precondition(format!("kernel dimension is computed for 1 <= n <= {KAPPA_MAX_N}"));
    }
    let form = omega(n);
    let domain = subsets(2 * n, n + 1);
    let target = subsets(2 * n, n - 1);
    let index: BTreeMap<&Vec<usize>, usize> = target.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut m = RationalMatrix::zeros(target.len(), domain.len());
    for (col, j) in domain.iter().enumerate() {
        kappa_basis(&form, j, |rest, c| m[(index[&rest], col)] += c);
    }
    Ok(domain.len() - m.rank())
}

/// `M W Mᵀ = 0`.
pub fn is_isotropic(m: &RationalMatrix, form: &RationalMatrix) -> Result<bool> {
    if m.cols() != form.rows() {
        return input("representative and form sizes disagree");
    }
    Ok(m.mul(form).mul(&m.transpose()).is_zero())
}

/// All coordinates share the sign of the first nonzero one.
pub fn is_totally_nonnegative(v: &ExteriorVector) -> Result<bool> {
    let Some((_, first)) = v.iter().next() else {
        return precondition("the zero vector has no sign");
    };
    let neg = first.is_negative();
    Ok(v.iter().all(|(_, x)| x.is_negative() == neg))
}

/// `v` rescaled so its first nonzero coordinate is positive.
pub fn sign_normalized(v: &ExteriorVector) -> ExteriorVector {
    match v.iter().next() {
        Some((_, x)) if x.is_negative() => v.scale(&-Q::one()),
        _ => v.clone(),
    }
}

/// The common values of `Δ_{[n],{k~}}` and of `Δ_{{k},[n~]}`.
pub fn extreme_coordinates(v: &ExteriorVector) -> Result<(Q, Q)> {
    let n = v.n();
    if v.degree() != n + 1 {
        return input(format!("expected degree {}, got {}", n + 1, v.degree()));
    }
    let plain: Vec<usize> = (1..=n).collect();
    let tildes: Vec<usize> = (n + 1..=2 * n).collect();
    let not_shorted: Vec<Q> = (1..=n)
        .map(|k| {
            let mut e = plain.clone();
            e.push(n + k);
            v.coordinate(&e)
        })
        .collect();
    let connected: Vec<Q> = (1..=n)
        .map(|k| {
            let mut e = tildes.clone();
            e.push(k);
            v.coordinate(&e)
        })
        .collect();
    if not_shorted.iter().any(|x| x != &not_shorted[0]) {
        return precondition("the coordinates Δ_{[n],{k~}} are not all equal");
    }
    if connected.iter().any(|x| x != &connected[0]) {
        return precondition("the coordinates Δ_{{k},[n~]} are not all equal");
    }
    Ok((not_shorted[0].clone(), connected[0].clone()))
}

fn check_symmetric(l: &RationalMatrix) -> Result<usize> {
    if !l.is_square() || l.rows() == 0 {
        return input("expected a nonempty square matrix");
    }
    if !l.is_symmetric_zero_sum() {
        return input("expected a symmetric matrix with zero row sums");
    }
    Ok(l.rows())
}

/// The two charts of the isotropic Grassmannian.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chart {
    /// `Δ_{[n],{k~}} ≠ 0`; parametrized by the response matrix.
    NotShorted,
    /// `Δ_{{k},[n~]} ≠ 0`; parametrized by `L*`.
    Connected,
}

/// Representative `P D` of the not-shorted chart point for `L`.
pub fn chart_from_response(l: &RationalMatrix) -> Result<RationalMatrix> {
    let n = check_symmetric(l)?;
    // S_{j,i-1} = S_{j,i} + L_{ij}, S_{j,n} = 0.
    let mut s = RationalMatrix::zeros(n, n);
    for j in 0..n {
        for i in (1..n).rev() {
            s[(j, i - 1)] = &s[(j, i)] + &l[(i, j)];
        }
    }
    let mut p = RationalMatrix::zeros(n + 1, 2 * n);
    for k in 0..n {
        p[(0, 2 * k + 1)] = Q::one();
    }
    for j in 0..n {
        p[(j + 1, 2 * j)] = Q::one();
        for k in 0..n {
            p[(j + 1, 2 * k + 1)] = s[(j, k)].clone();
        }
    }
    Ok(p.mul(&d_matrix(n)))
}

/// Representative `P D` of the connected chart point for `L*`.
pub fn chart_from_lstar(lstar: &RationalMatrix) -> Result<RationalMatrix> {
    let n = check_symmetric(lstar)?;
    // T_{j,i+1} = T_{j,i} + L*_{ij}, T_{j,1} = 0.
    let mut t = RationalMatrix::zeros(n, n);
    for j in 0..n {
        for i in 0..n - 1 {
            t[(j, i + 1)] = &t[(j, i)] + &lstar[(i, j)];
        }
    }
    let mut p = RationalMatrix::zeros(n + 1, 2 * n);
    for k in 0..n {
        p[(0, 2 * k)] = Q::one();
    }
    for j in 0..n {
        p[(j + 1, 2 * j + 1)] = Q::one();
        for k in 0..n {
            p[(j + 1, 2 * k)] = t[(j, k)].clone();
        }
    }
    Ok(p.mul(&d_matrix(n)))
}

/// The symmetric matrix of a chart point: `L` for the not-shorted chart,
/// `L*` for the connected one.
pub fn extract_symmetric(m: &RationalMatrix, chart: Chart) -> Result<RationalMatrix> {
    let n = check_rep(m)?;
    if m.rows() != n + 1 {
        return input(format!("expected {} rows, got {}", n + 1, m.rows()));
    }
    if !is_isotropic(m, &omega(n))? {
        return precondition("the representative is not isotropic for Ω");
    }
    let p = m.mul(&d_matrix(n));
    // Pivot half first, then the other half.
    let (pivot, other): (Vec<usize>, Vec<usize>) = match chart {
        Chart::NotShorted => ((0..n).map(|k| 2 * k).collect(), (0..n).map(|k| 2 * k + 1).collect()),
        Chart::Connected => ((0..n).map(|k| 2 * k + 1).collect(), (0..n).map(|k| 2 * k).collect()),
    };
    let order: Vec<usize> = pivot.iter().chain(other.iter()).copied().collect();
    let rows: Vec<usize> = (0..n + 1).collect();
    let (r, pivots) = p.submatrix(&rows, &order).rref();
    if pivots.len() != n + 1 || pivots[..n] != (0..n).collect::<Vec<_>>()[..] {
        return precondition("the subspace is outside the chart");
    }
    let last = r.row(n)[n..].to_vec();
    if last.iter().any(|x| !x.is_one()) {
        return precondition("the subspace is outside the chart");
    }
    // Row j of the pattern is row j-1 of the reduced matrix; its entries in
    // the other half are S (or T) up to a constant.
    let entry = |j: usize, k: usize| r[(j, n + k)].clone();
    let mut sym = RationalMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            sym[(i, j)] = match chart {
                Chart::NotShorted => entry(j, (i + n - 1) % n) - entry(j, i),
                Chart::Connected => entry(j, (i + 1) % n) - entry(j, i),
            };
        }
    }
    if !sym.is_symmetric_zero_sum() {
        return internal("chart extraction produced a matrix that is not symmetric with zero sums");
    }
    Ok(sym)
}

fn require_planar_image(v: &ExteriorVector) -> Result<usize> {
    let n = v.n();
    if v.degree() != n + 1 {
        return input(format!("expected degree {}, got {}", n + 1, v.degree()));
    }
    Ok(n)
}

/// `L_ij = Δ_{[n]∖{j},{(i-1)~,i~}} / Δ_{[n],{i~}}` for `i < j`.
pub fn response_from_coordinates(v: &ExteriorVector) -> Result<RationalMatrix> {
    let n = require_planar_image(v)?;
    let (den, _) = extreme_coordinates(v)?;
    if den.is_zero() {
        return precondition("Δ_{[n],{k~}} vanishes: some boundary vertices are shorted");
    }
    let mut l = RationalMatrix::zeros(n, n);
    for i in 1..=n {
        for j in i + 1..=n {
            let mut e: Vec<usize> = (1..=n).filter(|&x| x != j).collect();
            let prev = if i == 1 { n } else { i - 1 };
            e.push(n + prev);
            e.push(n + i);
            let x = v.coordinate(&e) / &den;
            l[(i - 1, j - 1)] = x.clone();
            l[(j - 1, i - 1)] = x;
        }
    }
    for i in 0..n {
        let off: Q = (0..n).filter(|&j| j != i).map(|j| l[(i, j)].clone()).sum();
        l[(i, i)] = -off;
    }
    Ok(l)
}

/// `R_ij = Σ_{k=i}^{j-1} Δ_{{i,j},[n~]∖{k~}} / Δ_{{i},[n~]}` for `i < j`.
pub fn resistance_from_coordinates(v: &ExteriorVector) -> Result<RationalMatrix> {
    let n = require_planar_image(v)?;
    let (_, den) = extreme_coordinates(v)?;
    if den.is_zero() {
        return precondition("Δ_{{k},[n~]} vanishes: the network is disconnected");
    }
    let mut r = RationalMatrix::zeros(n, n);
    for i in 1..=n {
        for j in i + 1..=n {
            let mut sum = Q::zero();
            for k in i..j {
                let mut e = vec![i, j];
                e.extend((1..=n).filter(|&x| x != k).map(|x| n + x));
                sum += v.coordinate(&e);
            }
            let x = sum / &den;
            r[(i - 1, j - 1)] = x.clone();
            r[(j - 1, i - 1)] = x;
        }
    }
    Ok(r)
}
