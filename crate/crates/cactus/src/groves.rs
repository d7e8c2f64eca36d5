//! Groves and grove measurements.
//!
//! A grove is a forest in Γ with every component touching the boundary.
//! `Λ_σ` sums the conductance products of the groves whose boundary
//! connectivity is `σ`.  Loops of Γ never lie in a grove.

use crate::combinat::{is_noncrossing, NoncrossingPartition};
use crate::electrical::linalg::{proportional, RationalMatrix, Q};
use crate::error::{input, internal, precondition, Result};
use crate::network::{CactusNetwork, QuotientGraph};
use num_traits::{One, Zero};
use std::collections::{BTreeMap, BTreeSet};

pub const DEFAULT_EDGE_CAP: usize = 20;

/// Grove measurements; partitions with `Λ = 0` are absent.
pub type Lambda = BTreeMap<NoncrossingPartition, Q>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grove {
    /// Sorted edge ids.
    pub edges: Vec<String>,
    pub partition: NoncrossingPartition,
    pub weight: Q,
}

struct Forest {
    parent: Vec<usize>,
}

impl Forest {
    fn new(n: usize) -> Self {
        Forest { parent: (0..n).collect() }
    }

    fn find(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    /// Joins two trees; false if already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

/// `σ(F)` when every component of `F` reaches the boundary, else `None`.
fn boundary_partition(g: &QuotientGraph, forest: &Forest) -> Option<Vec<Vec<usize>>> {
    let touched: BTreeSet<usize> = (0..g.num_boundary).map(|b| forest.find(b)).collect();
    if (g.num_boundary..g.vertices.len()).any(|v| !touched.contains(&forest.find(v))) {
        return None;
    }
    let n = g.shape.n();
    let mut blocks: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 1..=n {
        blocks.entry(forest.find(g.shape.block_index(i))).or_default().push(i);
    }
    Some(blocks.into_values().collect())
}

fn check_cap(g: &QuotientGraph, cap: usize) -> Result<()> {
    let m = g.edges.iter().filter(|e| !e.is_loop).count();
    if m > cap {
        return precondition(format!("{m} edges exceed the grove enumeration cap of {cap}"));
    }
    Ok(())
}

fn to_partition(n: usize, blocks: Vec<Vec<usize>>) -> Result<NoncrossingPartition> {
    if !is_noncrossing(n, &blocks)? {
        return internal(format!("grove connectivity {blocks:?} crosses, so the embedding is invalid"));
    }
    NoncrossingPartition::new(n, blocks)
}

type Visitor<'a> = dyn FnMut(&[usize], &Forest, &Q) -> Result<()> + 'a;

/// Depth-first include/exclude over the non-loop edges of Γ.
fn visit(g: &QuotientGraph, edges: &[usize], k: usize, forest: &Forest, chosen: &mut Vec<usize>, weight: &Q, out: &mut Visitor) -> Result<()> {
    if k == edges.len() {
        return out(chosen, forest, weight);
    }
    visit(g, edges, k + 1, forest, chosen, weight, out)?;
    let e = &g.edges[edges[k]];
    let mut joined = Forest { parent: forest.parent.clone() };
    if joined.union(e.ends.0, e.ends.1) {
        chosen.push(edges[k]);
        visit(g, edges, k + 1, &joined, chosen, &(weight * &e.conductance), out)?;
        chosen.pop();
    }
    Ok(())
}

fn for_each_grove(g: &QuotientGraph, cap: usize, mut f: impl FnMut(&[usize], Vec<Vec<usize>>, &Q) -> Result<()>) -> Result<()> {
    check_cap(g, cap)?;
    let edges: Vec<usize> = (0..g.edges.len()).filter(|&e| !g.edges[e].is_loop).collect();
    let forest = Forest::new(g.vertices.len());
    let mut chosen = Vec::new();
    visit(g, &edges, 0, &forest, &mut chosen, &Q::one(), &mut |set, forest, w| match boundary_partition(g, forest) {
        Some(blocks) => f(set, blocks, w),
        None => Ok(()),
    })
}

/// Every grove, ordered lexicographically by sorted edge ids.
pub fn enumerate_groves(net: &CactusNetwork, cap: usize) -> Result<Vec<Grove>> {
    net.ensure_valid()?;
    let g = net.quotient_graph()?;
    let mut out = Vec::new();
    for_each_grove(&g, cap, |set, blocks, w| {
        let mut edges: Vec<String> = set.iter().map(|&e| g.edges[e].id.clone()).collect();
        edges.sort();
        out.push(Grove {
            edges,
            partition: to_partition(g.shape.n(), blocks)?,
            weight: w.clone(),
        });
        Ok(())
    })?;
    out.sort_by(|a, b| a.edges.cmp(&b.edges));
    Ok(out)
}

/// `σ(F)` for an edge set given by ids.
pub fn grove_partition(net: &CactusNetwork, edge_ids: &[&str]) -> Result<NoncrossingPartition> {
    net.ensure_valid()?;
    let g = net.quotient_graph()?;
    let mut forest = Forest::new(g.vertices.len());
    for id in edge_ids {
        let Some(e) = g.edges.iter().find(|e| e.id == *id) else {
            return input(format!("unknown edge {id:?}"));
        };
        if e.is_loop || !forest.union(e.ends.0, e.ends.1) {
            return input(format!("edge set {edge_ids:?} contains a cycle"));
        }
    }
    match boundary_partition(&g, &forest) {
        Some(blocks) => to_partition(g.shape.n(), blocks),
        None => input(format!("edge set {edge_ids:?} leaves a component without boundary vertices")),
    }
}

pub fn lambda_vector_capped(net: &CactusNetwork, cap: usize) -> Result<Lambda> {
    net.ensure_valid()?;
    let g = net.quotient_graph()?;
    let n = g.shape.n();
    let mut acc = Lambda::new();
    for_each_grove(&g, cap, |_, blocks, w| {
        *acc.entry(to_partition(n, blocks)?).or_insert_with(Q::zero) += w;
        Ok(())
    })?;
    Ok(acc)
}

pub fn lambda_vector(net: &CactusNetwork) -> Result<Lambda> {
    lambda_vector_capped(net, DEFAULT_EDGE_CAP)
}

pub fn lambda_value(lambda: &Lambda, sigma: &NoncrossingPartition) -> Q {
    lambda.get(sigma).cloned().unwrap_or_else(Q::zero)
}

/// Dense vector over all noncrossing partitions in canonical order.
pub fn lambda_dense(n: usize, lambda: &Lambda) -> Vec<Q> {
    crate::combinat::enumerate_noncrossing(n).iter().map(|s| lambda_value(lambda, s)).collect()
}

/// `Some(q)` with `Λ(a) = q Λ(b)`, `q > 0`, when the measurements are
/// proportional.
pub fn equivalence_factor(a: &Lambda, b: &Lambda, n: usize) -> Result<Option<Q>> {
    if a.values().all(Zero::is_zero) || b.values().all(Zero::is_zero) {
        return precondition("a network with all grove measurements zero");
    }
    let (u, v) = (lambda_dense(n, a), lambda_dense(n, b));
    Ok(proportional(&u, &v).filter(|q| q > &Q::zero()))
}

pub fn electrically_equivalent(a: &CactusNetwork, b: &CactusNetwork) -> Result<Option<Q>> {
    if a.n != b.n {
        return precondition(format!("networks have {} and {} boundary vertices", a.n, b.n));
    }
    equivalence_factor(&lambda_vector(a)?, &lambda_vector(b)?, a.n)
}

/// `L_ij = Λ_{ij} / Λ_{singletons}`, where `ij` joins `i` and `j` and
/// leaves everything else alone.
pub fn response_from_lambda(n: usize, lambda: &Lambda) -> Result<RationalMatrix> {
    let den = lambda_value(lambda, &NoncrossingPartition::singletons(n));
    if den.is_zero() {
        return precondition("Λ of the singleton partition vanishes: some boundary vertices are shorted");
    }
    let mut l = RationalMatrix::zeros(n, n);
    for i in 1..=n {
        for j in i + 1..=n {
            let x = lambda_value(lambda, &NoncrossingPartition::pair(n, i, j)) / &den;
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

/// `R_ij = Σ Λ_σ / Λ_{[n]}` over two-block `σ` separating `i` and `j`.
pub fn resistance_from_lambda(n: usize, lambda: &Lambda) -> Result<RationalMatrix> {
    let den = lambda_value(lambda, &NoncrossingPartition::full(n));
    if den.is_zero() {
        return precondition("Λ of the one-block partition vanishes: the network is disconnected");
    }
    let mut r = RationalMatrix::zeros(n, n);
    for i in 1..=n {
        for j in i + 1..=n {
            let num: Q = lambda
                .iter()
                .filter(|(s, _)| crate::combinat::is_concordant(&[i, j], s))
                .map(|(_, x)| x.clone())
                .sum();
            let x = num / &den;
            r[(i - 1, j - 1)] = x.clone();
            r[(j - 1, i - 1)] = x;
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::electrical::linalg::{q, qr};
    use crate::network::fixtures::*;
    use proptest::prelude::*;

    #[test]
    fn grove_ratio_formulas() {
        use crate::electrical::{resistance_matrix, response_matrix};
        for net in [y123(), delta_1_half_third(), single_edge(q(4)), parallel_pair(q(1), qr(1, 2))] {
            let lam = lambda_vector(&net).unwrap();
            assert_eq!(response_from_lambda(net.n, &lam).unwrap(), response_matrix(&net).unwrap());
            assert_eq!(resistance_from_lambda(net.n, &lam).unwrap(), resistance_matrix(&net).unwrap());
        }
        let lam = lambda_vector(&cactus6_123()).unwrap();
        assert_eq!(response_from_lambda(6, &lam).unwrap_err().exit_code(), 2);
        assert_eq!(resistance_from_lambda(6, &lam).unwrap(), resistance_matrix(&cactus6_123()).unwrap());
    }

    fn nc(n: usize, key: &str) -> NoncrossingPartition {
        NoncrossingPartition::parse_key(n, key).unwrap()
    }

    /// All edge subsets, filtered by the grove conditions.
    fn brute_force(net: &CactusNetwork) -> Vec<(Vec<String>, NoncrossingPartition)> {
        let g = net.quotient_graph().unwrap();
        let m = g.edges.len();
        let mut out = Vec::new();
        for mask in 0u32..(1 << m) {
            let set: Vec<usize> = (0..m).filter(|&e| mask >> e & 1 == 1).collect();
            if set.iter().any(|&e| g.edges[e].is_loop) {
                continue;
            }
            // Acyclic iff unions never fail; count components the slow way.
            let mut comp: Vec<usize> = (0..g.vertices.len()).collect();
            let mut acyclic = true;
            for &e in &set {
                let (a, b) = (comp[g.edges[e].ends.0], comp[g.edges[e].ends.1]);
                if a == b {
                    acyclic = false;
                    break;
                }
                for c in comp.iter_mut() {
                    if *c == a {
                        *c = b;
                    }
                }
            }
            if !acyclic {
                continue;
            }
            let roots: BTreeSet<usize> = (0..g.num_boundary).map(|b| comp[b]).collect();
            if (0..g.vertices.len()).any(|v| !roots.contains(&comp[v])) {
                continue;
            }
            let mut blocks: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for i in 1..=net.n {
                blocks.entry(comp[g.shape.block_index(i)]).or_default().push(i);
            }
            let mut ids: Vec<String> = set.iter().map(|&e| g.edges[e].id.clone()).collect();
            ids.sort();
            out.push((ids, NoncrossingPartition::new(net.n, blocks.into_values().collect()).unwrap()));
        }
        out.sort();
        out
    }

    #[test]
    fn y_groves() {
        let groves = enumerate_groves(&y123(), DEFAULT_EDGE_CAP).unwrap();
        let sets: Vec<Vec<String>> = groves.iter().map(|g| g.edges.clone()).collect();
        let want: Vec<Vec<String>> = [&["a"][..], &["a", "b"], &["a", "b", "c"], &["a", "c"], &["b"], &["b", "c"], &["c"]]
            .iter()
            .map(|s| s.iter().map(|x| x.to_string()).collect())
            .collect();
        assert_eq!(sets, want);
        assert!(!sets.contains(&vec![]));
    }

    #[test]
    fn y_lambda() {
        let l = lambda_vector(&y123()).unwrap();
        assert_eq!(lambda_value(&l, &nc(3, "1,2,3")), q(6));
        assert_eq!(lambda_value(&l, &nc(3, "1|2,3")), q(6));
        assert_eq!(lambda_value(&l, &nc(3, "1,3|2")), q(3));
        assert_eq!(lambda_value(&l, &nc(3, "1,2|3")), q(2));
        assert_eq!(lambda_value(&l, &nc(3, "1|2|3")), q(6));
    }

    #[test]
    fn partitions_of_examples() {
        assert_eq!(grove_partition(&y123(), &["b", "c"]).unwrap(), nc(3, "1|2,3"));
        assert_eq!(grove_partition(&y123(), &["a", "b", "c"]).unwrap(), NoncrossingPartition::full(3));
        assert_eq!(grove_partition(&cactus6_123(), &["a", "b"]).unwrap(), nc(6, "1,4,5,6|2,3"));
        assert!(grove_partition(&y123(), &[]).is_err());
    }

    #[test]
    fn edgeless_single_vertex() {
        let net = CactusNetwork::empty(&NoncrossingPartition::singletons(1));
        let l = lambda_vector(&net).unwrap();
        assert_eq!(l.len(), 1);
        assert_eq!(lambda_value(&l, &NoncrossingPartition::singletons(1)), q(1));
    }

    #[test]
    fn cactus6_full_block() {
        let l = lambda_vector(&cactus6_123()).unwrap();
        assert_eq!(lambda_value(&l, &NoncrossingPartition::full(6)), q(6));
    }

    #[test]
    fn equivalences() {
        assert_eq!(electrically_equivalent(&y123(), &delta_1_half_third()).unwrap(), Some(q(6)));
        assert_eq!(electrically_equivalent(&y123(), &y123()).unwrap(), Some(q(1)));
        let y111 = y_network(q(1), q(1), q(1));
        let y112 = y_network(q(1), q(1), q(2));
        assert_eq!(electrically_equivalent(&y111, &y112).unwrap(), None);
        let delta = lambda_dense(3, &lambda_vector(&delta_1_half_third()).unwrap());
        // Canonical order: 1|2|3, 1|2,3, 1,2|3, 1,2,3, 1,3|2.
        assert_eq!(delta, vec![q(1), q(1), qr(1, 3), q(1), qr(1, 2)]);
    }

    #[test]
    fn cap_is_enforced() {
        assert_eq!(enumerate_groves(&y123(), 2).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn relabelling_keeps_lambda() {
        let net = y123();
        let renamed = net.renamed(|v| format!("{v}_x"), |e| format!("z{e}"));
        assert_eq!(lambda_vector(&net).unwrap(), lambda_vector(&renamed).unwrap());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn enumeration_matches_brute_force(seed in any::<u64>()) {
            let net = crate::testutil::random_network(seed, 4, 9);
            let fast: Vec<(Vec<String>, NoncrossingPartition)> = enumerate_groves(&net, DEFAULT_EDGE_CAP)
                .unwrap()
                .into_iter()
                .map(|g| (g.edges, g.partition))
                .collect();
            let mut fast_sorted = fast.clone();
            fast_sorted.sort();
            prop_assert_eq!(fast_sorted, brute_force(&net));
            let lambda = lambda_vector(&net).unwrap();
            prop_assert!(lambda.values().all(|v| v > &Q::zero()));
        }
    }
}
