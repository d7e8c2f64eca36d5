//! Laplacian, response matrix, effective resistance and the dual response.
//!
//! Signs follow the convention where the response matrix has negative
//! diagonal and nonnegative off-diagonal entries: `L = -Schur(𝓛)`.

pub mod linalg;

use crate::error::{input, precondition, Result};
use crate::network::{CactusNetwork, QuotientGraph};
use linalg::{RationalMatrix, Solution, Q};
use num_traits::{One, Zero};

/// 𝓛 of Γ: positive diagonal, parallel edges summed, loops ignored.
pub fn laplacian(g: &QuotientGraph) -> RationalMatrix {
    let n = g.vertices.len();
    let mut m = RationalMatrix::zeros(n, n);
    for e in g.edges.iter().filter(|e| !e.is_loop) {
        let (u, v) = e.ends;
        m[(u, u)] += &e.conductance;
        m[(v, v)] += &e.conductance;
        m[(u, v)] -= &e.conductance;
        m[(v, u)] -= &e.conductance;
    }
    m
}

/// Response matrix indexed by the boundary vertices of Γ (shape blocks).
pub fn response_from_quotient(g: &QuotientGraph) -> Result<RationalMatrix> {
    let lap = laplacian(g);
    let b: Vec<usize> = (0..g.num_boundary).collect();
    let i: Vec<usize> = (g.num_boundary..g.vertices.len()).collect();
    let bb = lap.submatrix(&b, &b);
    if i.is_empty() {
        return Ok(bb.scale(&-Q::one()));
    }
    let Some(ii_inv) = lap.submatrix(&i, &i).inverse() else {
        return precondition("some internal vertices are not connected to the boundary");
    };
    let schur = bb.sub(&lap.submatrix(&b, &i).mul(&ii_inv).mul(&lap.submatrix(&i, &b)));
    Ok(schur.scale(&-Q::one()))
}

/// Response matrix of the network, one row per shape block.
pub fn response_matrix(net: &CactusNetwork) -> Result<RationalMatrix> {
    net.ensure_valid()?;
    response_from_quotient(&net.quotient_graph()?)
}

/// Effective resistance between two vertices of Γ given the response matrix.
fn resistance_between(l: &RationalMatrix, u: usize, v: usize) -> Result<Q> {
    if u == v {
        return Ok(Q::zero());
    }
    let k = l.rows();
    // L V = e_u - e_v together with the gauge V(u) = 0.
    let mut rows = l.to_rows();
    let mut gauge = vec![Q::zero(); k];
    gauge[u] = Q::one();
    rows.push(gauge);
    let mut rhs = vec![Q::zero(); k + 1];
    rhs[u] = Q::one();
    rhs[v] = -Q::one();
    match RationalMatrix::from_rows(rows).solve(&rhs) {
        Solution::Consistent { particular, nullspace } => {
            if !nullspace.is_empty() {
                return crate::error::internal("resistance system is underdetermined on a connected network");
            }
            Ok(&particular[v] - &particular[u])
        }
        Solution::Inconsistent { .. } => precondition("boundary vertices are not connected"),
    }
}

/// `n x n` effective resistances between boundary labels.
pub fn resistance_matrix(net: &CactusNetwork) -> Result<RationalMatrix> {
    net.ensure_valid()?;
    let g = net.quotient_graph()?;
    if !g.is_connected() {
        return precondition("effective resistance needs a connected network");
    }
    let l = response_from_quotient(&g)?;
    let n = net.n;
    let mut r = RationalMatrix::zeros(n, n);
    for i in 1..=n {
        for j in i + 1..=n {
            let x = resistance_between(&l, g.shape.block_index(i), g.shape.block_index(j))?;
            r[(i - 1, j - 1)] = x.clone();
            r[(j - 1, i - 1)] = x;
        }
    }
    Ok(r)
}

/// `L*_ij = (R_ij + R_{i+1,j+1} - R_{i+1,j} - R_{i,j+1}) / 2`, indices
/// mod `n`, with the diagonal fixed by zero row sums.
pub fn lstar_from_resistance(r: &RationalMatrix) -> Result<RationalMatrix> {
    if !r.is_square() || !r.is_symmetric() {
        return input("a resistance matrix must be square and symmetric");
    }
    let n = r.rows();
    let half = Q::new(1.into(), 2.into());
    let mut l = RationalMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let (i1, j1) = ((i + 1) % n, (j + 1) % n);
                l[(i, j)] = (&r[(i, j)] + &r[(i1, j1)] - &r[(i1, j)] - &r[(i, j1)]) * &half;
            }
        }
        let off: Q = (0..n).filter(|&j| j != i).map(|j| l[(i, j)].clone()).sum();
        l[(i, i)] = -off;
    }
    Ok(l)
}

#[cfg(test)]
mod tests {
    use super::linalg::{q, qr};
    use super::*;
    use crate::network::fixtures::*;

    fn m(rows: Vec<Vec<Q>>) -> RationalMatrix {
        RationalMatrix::from_rows(rows)
    }

    #[test]
    fn y_response() {
        let l = response_matrix(&y123()).unwrap();
        let want = m(vec![
            vec![qr(-5, 6), qr(1, 3), qr(1, 2)],
            vec![qr(1, 3), qr(-4, 3), q(1)],
            vec![qr(1, 2), q(1), qr(-3, 2)],
        ]);
        assert_eq!(l, want);
        assert!(l.is_symmetric_zero_sum());
    }

    #[test]
    fn y_resistance() {
        let r = resistance_matrix(&y123()).unwrap();
        assert_eq!(r[(0, 1)], qr(3, 2));
        assert_eq!(r[(0, 2)], qr(4, 3));
        assert_eq!(r[(1, 2)], qr(5, 6));
        assert!((0..3).all(|i| r[(i, i)].is_zero()));
    }

    #[test]
    fn y_lstar() {
        let ls = lstar_from_resistance(&resistance_matrix(&y123()).unwrap()).unwrap();
        let want = m(vec![
            vec![qr(-3, 2), qr(1, 2), q(1)],
            vec![qr(1, 2), qr(-5, 6), qr(1, 3)],
            vec![q(1), qr(1, 3), qr(-4, 3)],
        ]);
        assert_eq!(ls, want);
    }

    #[test]
    fn two_point_lstar() {
        let r = m(vec![vec![q(0), qr(2, 7)], vec![qr(2, 7), q(0)]]);
        let ls = lstar_from_resistance(&r).unwrap();
        assert_eq!(ls, m(vec![vec![qr(-2, 7), qr(2, 7)], vec![qr(2, 7), qr(-2, 7)]]));
    }

    #[test]
    fn cactus6_laplacian_and_resistance() {
        let net = cactus6_123();
        let lap = laplacian(&net.quotient_graph().unwrap());
        let want = RationalMatrix::from_i64(&[&[-4, 3, 1, 0], &[3, -3, 0, 0], &[1, 0, -3, 2], &[0, 0, 2, -2]]);
        assert_eq!(lap.scale(&q(-1)), want);
        assert_eq!(response_matrix(&net).unwrap(), want);
        let r = resistance_matrix(&net).unwrap();
        assert_eq!(r[(1, 4)], qr(11, 6));
        assert!(r[(1, 2)].is_zero());
        assert!(r[(3, 5)].is_zero());
    }

    #[test]
    fn trivial_laplacians() {
        let net = CactusNetwork::empty(&crate::combinat::NoncrossingPartition::singletons(1));
        assert_eq!(laplacian(&net.quotient_graph().unwrap()), RationalMatrix::zeros(1, 1));
        let lap = laplacian(&parallel_pair(q(1), q(2)).quotient_graph().unwrap());
        assert_eq!(lap, RationalMatrix::from_i64(&[&[3, -3], &[-3, 3]]));
    }

    #[test]
    fn series_and_parallel() {
        let mut series = y123();
        series.edges.retain(|e| e.id != "c");
        series.rotations.insert("v".into(), vec!["a".into(), "b".into()]);
        series.rotations.remove("b3");
        let r = resistance_matrix(&series);
        // b3 is isolated, so the network is disconnected.
        assert_eq!(r.unwrap_err().exit_code(), 2);
        series.n = 2;
        series.shape_blocks = vec![vec![1], vec![2]];
        let r = resistance_matrix(&series).unwrap();
        assert_eq!(r[(0, 1)], qr(3, 2));
        let r = resistance_matrix(&parallel_pair(q(1), q(2))).unwrap();
        assert_eq!(r[(0, 1)], qr(1, 3));
    }

    #[test]
    fn floating_internal_component_has_no_response() {
        let mut net = y123();
        net.internal_vertices.extend(["p".to_string(), "r".to_string()]);
        net.edges.push(edge("z", "p", "r", q(1)));
        net.rotations.insert("p".into(), vec!["z".into()]);
        net.rotations.insert("r".into(), vec!["z".into()]);
        assert_eq!(response_matrix(&net).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn gauge_independence() {
        let l = response_matrix(&y123()).unwrap();
        for (u, v) in [(0, 1), (0, 2), (1, 2)] {
            let r = resistance_between(&l, u, v).unwrap();
            // Any other potential differs by a constant vector.
            let mut b = vec![Q::zero(); 3];
            b[u] = q(1);
            b[v] = q(-1);
            let Solution::Consistent { particular, nullspace } = l.solve(&b) else { panic!() };
            assert_eq!(nullspace.len(), 1);
            for t in [q(0), q(5), qr(-7, 3)] {
                let pot: Vec<Q> = particular.iter().zip(&nullspace[0]).map(|(x, k)| x + k * &t).collect();
                assert_eq!(&pot[v] - &pot[u], r);
            }
            assert_eq!(resistance_between(&l, v, u).unwrap(), r);
        }
    }
}
