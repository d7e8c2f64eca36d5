//! Cactus networks: the data model, validation, the quotient graph Γ,
//! medial strands, Y-Δ moves and duals.
//!
//! A network is stored as drawn in the disc before boundary vertices are
//! glued.  Boundary vertex `i` is named `b{i}`; labels run clockwise.  The
//! rotation of a boundary vertex lists its edges clockwise, starting from the
//! one nearest the boundary arc towards `b{i+1}`.  When `i` shares a shape
//! block with other labels, its edges run into the part of the cactus that
//! contains that same arc (the region of `i~`).  This fixes how the
//! rotations of glued vertices concatenate into the rotation of Γ.

mod builder;
mod dual;
mod map;
mod medial;
mod ydelta;

pub use builder::{grow, Corner, NetworkBuilder};
pub use dual::dual;
pub use map::CactusMap;
pub use medial::{medial_pairing, medial_strands, is_minimal, MedialStrands};
pub use ydelta::{delta_sites, y_sites, ydelta, Direction, Site};

use crate::combinat::{is_noncrossing, NoncrossingPartition};
use crate::electrical::linalg::Q;
use crate::error::{input, Result};
use num_traits::{Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub ends: [String; 2],
    pub conductance: Q,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CactusNetwork {
    pub n: usize,
    /// Blocks of the shape as given; see [`CactusNetwork::shape`].
    pub shape_blocks: Vec<Vec<usize>>,
    pub internal_vertices: Vec<String>,
    pub edges: Vec<Edge>,
    /// Clockwise edge ids around each vertex; absent means no edges.
    pub rotations: BTreeMap<String, Vec<String>>,
    /// Number of local moves applied so far; feeds derived ids.
    pub moves: u32,
}

pub fn boundary_name(i: usize) -> String {
    format!("b{i}")
}

/// `Some(i)` for `b{i}` with `1 <= i <= n`.
pub fn boundary_label(n: usize, name: &str) -> Option<usize> {
    let rest = name.strip_prefix('b')?;
    if rest.is_empty() || !rest.bytes().all(|c| c.is_ascii_digit()) || rest.starts_with('0') {
        return None;
    }
    rest.parse().ok().filter(|&i| i >= 1 && i <= n)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    fn push(&mut self, name: &'static str, problems: Vec<String>) {
        self.checks.push(Check {
            name,
            passed: problems.is_empty(),
            detail: if problems.is_empty() {
                "ok".into()
            } else {
                problems.join("; ")
            },
        });
    }
}

impl CactusNetwork {
    /// An edgeless network with the given shape.
    pub fn empty(shape: &NoncrossingPartition) -> Self {
        CactusNetwork {
            n: shape.n(),
            shape_blocks: shape.blocks().to_vec(),
            internal_vertices: Vec::new(),
            edges: Vec::new(),
            rotations: BTreeMap::new(),
            moves: 0,
        }
    }

    pub fn shape(&self) -> Result<NoncrossingPartition> {
        NoncrossingPartition::new(self.n, self.shape_blocks.clone())
    }

    pub fn edge(&self, id: &str) -> Option<&Edge> {
        self.edges.iter().find(|e| e.id == id)
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.id == id)
    }

    pub fn is_vertex(&self, name: &str) -> bool {
        boundary_label(self.n, name).is_some() || self.internal_vertices.iter().any(|v| v == name)
    }

    pub fn rotation(&self, v: &str) -> &[String] {
        self.rotations.get(v).map_or(&[], |r| r.as_slice())
    }

    /// Product of all conductances.
    pub fn conductance_product(&self) -> Q {
        self.edges.iter().map(|e| e.conductance.clone()).product()
    }

    /// Every vertex name: `b1..bn` then internal vertices in stored order.
    pub fn vertex_names(&self) -> Vec<String> {
        (1..=self.n)
            .map(boundary_name)
            .chain(self.internal_vertices.iter().cloned())
            .collect()
    }

    fn structural_problems(&self) -> Vec<String> {
        let mut p = Vec::new();
        if self.n == 0 {
            p.push("n must be positive".into());
        }
        let mut names = BTreeSet::new();
        for v in &self.internal_vertices {
            if v.starts_with('b') && v[1..].bytes().all(|c| c.is_ascii_digit()) {
                p.push(format!("internal vertex {v:?} uses the boundary naming scheme"));
            }
            if !names.insert(v.clone()) {
                p.push(format!("vertex {v:?} listed twice"));
            }
        }
        let mut ids = BTreeSet::new();
        for e in &self.edges {
            if !ids.insert(e.id.clone()) {
                p.push(format!("edge id {:?} used twice", e.id));
            }
            for end in &e.ends {
                if !self.is_vertex(end) {
                    p.push(format!("edge {:?} has unknown end {end:?}", e.id));
                }
            }
        }
        p
    }

    /// Run every check; failures are reported, not raised.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport { checks: Vec::new() };
        let structure = self.structural_problems();
        let structure_ok = structure.is_empty();
        report.push("structure", structure);

        let mut shape_ok = false;
        match is_noncrossing(self.n, &self.shape_blocks) {
            Err(e) => {
                report.push("shape-partition", vec![e.to_string()]);
                report.push("shape-noncrossing", vec!["not checked: shape is not a partition".into()]);
            }
            Ok(nc) => {
                report.push("shape-partition", vec![]);
                if nc {
                    shape_ok = true;
                    report.push("shape-noncrossing", vec![]);
                } else {
                    report.push("shape-noncrossing", vec![format!("blocks {:?} cross", self.shape_blocks)]);
                }
            }
        }

        let positivity: Vec<String> = self
            .edges
            .iter()
            .filter(|e| !e.conductance.is_positive())
            .map(|e| format!("edge {:?} has conductance {}", e.id, e.conductance))
            .collect();
        report.push("conductance-positive", positivity);

        let loops: Vec<String> = self
            .edges
            .iter()
            .filter(|e| e.ends[0] == e.ends[1])
            .map(|e| format!("edge {:?} is a loop at {}", e.id, e.ends[0]))
            .collect();
        let loops_ok = loops.is_empty();
        report.push("no-loops", loops);

        let rotation = if structure_ok { self.rotation_problems() } else { vec!["not checked: structural errors".into()] };
        let rotation_ok = rotation.is_empty();
        report.push("rotation-system", rotation);

        if structure_ok && shape_ok && rotation_ok && loops_ok {
            let map = CactusMap::build_unchecked(self);
            report.push("planar-embedding", map.euler_problems());
            report.push("boundary-order", map.outer_face_problems());
        } else {
            let skipped = vec!["not checked: earlier checks failed".to_string()];
            report.push("planar-embedding", skipped.clone());
            report.push("boundary-order", skipped);
        }
        report
    }

    /// Error unless [`CactusNetwork::validate`] passes.
    pub fn ensure_valid(&self) -> Result<()> {
        let r = self.validate();
        if r.is_valid() {
            Ok(())
        } else {
            let msgs: Vec<String> = r.failures().iter().map(|c| format!("{}: {}", c.name, c.detail)).collect();
            input(format!("invalid network: {}", msgs.join(" | ")))
        }
    }

    fn rotation_problems(&self) -> Vec<String> {
        let mut p = Vec::new();
        let mut expected: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for e in &self.edges {
            expected.entry(e.ends[0].clone()).or_default().push(e.id.clone());
            if e.ends[1] != e.ends[0] {
                expected.entry(e.ends[1].clone()).or_default().push(e.id.clone());
            }
        }
        for v in self.rotations.keys() {
            if !self.is_vertex(v) {
                p.push(format!("rotation given for unknown vertex {v:?}"));
            }
        }
        for v in self.vertex_names() {
            let mut want = expected.remove(&v).unwrap_or_default();
            let mut have = self.rotation(&v).to_vec();
            want.sort();
            have.sort();
            if want != have {
                p.push(format!("rotation at {v} lists {have:?} but incident edges are {want:?}"));
            }
        }
        p
    }

    /// Γ: boundary vertices glued along shape blocks.
    pub fn quotient_graph(&self) -> Result<QuotientGraph> {
        let shape = self.shape()?;
        let mut vertices: Vec<String> = shape
            .blocks()
            .iter()
            .map(|b| format!("{{{}}}", b.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        let nb = vertices.len();
        vertices.extend(self.internal_vertices.iter().cloned());
        let index = |name: &str| -> Result<usize> {
            if let Some(i) = boundary_label(self.n, name) {
                return Ok(shape.block_index(i));
            }
            match self.internal_vertices.iter().position(|v| v == name) {
                Some(k) => Ok(nb + k),
                None => input(format!("unknown vertex {name:?}")),
            }
        };
        let mut edges = Vec::with_capacity(self.edges.len());
        for e in &self.edges {
            let (u, v) = (index(&e.ends[0])?, index(&e.ends[1])?);
            edges.push(QuotientEdge {
                id: e.id.clone(),
                ends: (u, v),
                conductance: e.conductance.clone(),
                is_loop: u == v,
            });
        }
        let mut rotations = Vec::with_capacity(vertices.len());
        for b in shape.blocks() {
            let mut r = Vec::new();
            for &i in b {
                r.extend(self.rotation(&boundary_name(i)).iter().cloned());
            }
            rotations.push(r);
        }
        for v in &self.internal_vertices {
            rotations.push(self.rotation(v).to_vec());
        }
        Ok(QuotientGraph {
            shape,
            vertices,
            num_boundary: nb,
            edges,
            rotations,
        })
    }

    /// Same network with internal vertices and edges renamed.
    pub fn renamed(&self, vertex: impl Fn(&str) -> String, edge: impl Fn(&str) -> String) -> Self {
        let vname = |v: &str| if boundary_label(self.n, v).is_some() { v.to_string() } else { vertex(v) };
        CactusNetwork {
            n: self.n,
            shape_blocks: self.shape_blocks.clone(),
            internal_vertices: self.internal_vertices.iter().map(|v| vertex(v)).collect(),
            edges: self
                .edges
                .iter()
                .map(|e| Edge {
                    id: edge(&e.id),
                    ends: [vname(&e.ends[0]), vname(&e.ends[1])],
                    conductance: e.conductance.clone(),
                })
                .collect(),
            rotations: self
                .rotations
                .iter()
                .map(|(v, r)| (vname(v), r.iter().map(|x| edge(x)).collect()))
                .collect(),
            moves: self.moves,
        }
    }

    /// Whether every internal vertex is joined to some boundary vertex.
    pub fn has_floating_component(&self) -> Result<bool> {
        let g = self.quotient_graph()?;
        let comp = g.components();
        let reached: BTreeSet<usize> = (0..g.num_boundary).map(|b| comp[b]).collect();
        Ok((g.num_boundary..g.vertices.len()).any(|v| !reached.contains(&comp[v])))
    }

    pub fn check_conductances(&self) -> Result<()> {
        if let Some(e) = self.edges.iter().find(|e| e.conductance.is_zero() || e.conductance.is_negative()) {
            return input(format!("edge {:?} has non-positive conductance", e.id));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientEdge {
    pub id: String,
    pub ends: (usize, usize),
    pub conductance: Q,
    /// Both ends lie in one shape block.  Kept for the record, ignored by
    /// groves and the Laplacian.
    pub is_loop: bool,
}

/// Γ: vertex `k < num_boundary` is the `k`-th shape block in canonical
/// order, later vertices are the internal vertices in stored order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientGraph {
    pub shape: NoncrossingPartition,
    pub vertices: Vec<String>,
    pub num_boundary: usize,
    pub edges: Vec<QuotientEdge>,
    /// Clockwise edge ids per vertex; glued vertices concatenate the
    /// rotations of their members in clockwise order.
    pub rotations: Vec<Vec<String>>,
}

impl QuotientGraph {
    pub fn loops(&self) -> Vec<&QuotientEdge> {
        self.edges.iter().filter(|e| e.is_loop).collect()
    }

    /// Component id per vertex (loops ignored).
    pub fn components(&self) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..self.vertices.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for e in self.edges.iter().filter(|e| !e.is_loop) {
            let (a, b) = (find(&mut parent, e.ends.0), find(&mut parent, e.ends.1));
            if a != b {
                parent[a] = b;
            }
        }
        (0..self.vertices.len()).map(|v| find(&mut parent, v)).collect()
    }

    pub fn is_connected(&self) -> bool {
        let c = self.components();
        c.iter().all(|&x| x == c[0])
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use crate::electrical::linalg::{q, qr};

    pub fn edge(id: &str, a: &str, b: &str, c: Q) -> Edge {
        Edge {
            id: id.into(),
            ends: [a.into(), b.into()],
            conductance: c,
        }
    }

    pub fn rot(pairs: &[(&str, &[&str])]) -> BTreeMap<String, Vec<String>> {
        pairs
            .iter()
            .map(|(v, r)| (v.to_string(), r.iter().map(|x| x.to_string()).collect()))
            .collect()
    }

    /// Star with centre `v` and edges `a`, `b`, `c` to `b1`, `b2`, `b3`.
    pub fn y_network(a: Q, b: Q, c: Q) -> CactusNetwork {
        CactusNetwork {
            n: 3,
            shape_blocks: vec![vec![1], vec![2], vec![3]],
            internal_vertices: vec!["v".into()],
            edges: vec![edge("a", "b1", "v", a), edge("b", "b2", "v", b), edge("c", "b3", "v", c)],
            rotations: rot(&[("b1", &["a"]), ("b2", &["b"]), ("b3", &["c"]), ("v", &["a", "b", "c"])]),
            moves: 0,
        }
    }

    pub fn y123() -> CactusNetwork {
        y_network(q(1), q(2), q(3))
    }

    /// Triangle with edge `A` opposite `b1`, `B` opposite `b2`, `C` opposite `b3`.
    pub fn delta_network(a: Q, b: Q, c: Q) -> CactusNetwork {
        CactusNetwork {
            n: 3,
            shape_blocks: vec![vec![1], vec![2], vec![3]],
            internal_vertices: vec![],
            edges: vec![edge("A", "b2", "b3", a), edge("B", "b1", "b3", b), edge("C", "b1", "b2", c)],
            rotations: rot(&[("b1", &["C", "B"]), ("b2", &["A", "C"]), ("b3", &["B", "A"])]),
            moves: 0,
        }
    }

    pub fn delta_1_half_third() -> CactusNetwork {
        delta_network(q(1), qr(1, 2), qr(1, 3))
    }

    /// The six-label cactus with shape {1},{2,3},{4,6},{5}: edge `c` joins
    /// 1 to the block {2,3}, `a` joins 1 to {4,6}, `b` joins {4,6} to 5.
    pub fn cactus6(a: Q, b: Q, c: Q) -> CactusNetwork {
        CactusNetwork {
            n: 6,
            shape_blocks: vec![vec![1], vec![2, 3], vec![4, 6], vec![5]],
            internal_vertices: vec![],
            edges: vec![edge("a", "b1", "b6", a), edge("b", "b4", "b5", b), edge("c", "b1", "b3", c)],
            rotations: rot(&[("b1", &["c", "a"]), ("b3", &["c"]), ("b4", &["b"]), ("b5", &["b"]), ("b6", &["a"])]),
            moves: 0,
        }
    }

    pub fn cactus6_123() -> CactusNetwork {
        cactus6(q(1), q(2), q(3))
    }

    /// One edge between `b1` and `b2`.
    pub fn single_edge(c: Q) -> CactusNetwork {
        CactusNetwork {
            n: 2,
            shape_blocks: vec![vec![1], vec![2]],
            internal_vertices: vec![],
            edges: vec![edge("e", "b1", "b2", c)],
            rotations: rot(&[("b1", &["e"]), ("b2", &["e"])]),
            moves: 0,
        }
    }

    pub fn parallel_pair(c1: Q, c2: Q) -> CactusNetwork {
        CactusNetwork {
            n: 2,
            shape_blocks: vec![vec![1], vec![2]],
            internal_vertices: vec![],
            edges: vec![edge("e", "b1", "b2", c1), edge("f", "b1", "b2", c2)],
            rotations: rot(&[("b1", &["e", "f"]), ("b2", &["f", "e"])]),
            moves: 0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::electrical::linalg::q;

    #[test]
    fn fixtures_are_valid() {
        for net in [y123(), delta_1_half_third(), cactus6_123(), single_edge(q(2)), parallel_pair(q(1), q(2))] {
            let r = net.validate();
            assert!(r.is_valid(), "{:?}", r.failures());
        }
    }

    #[test]
    fn zero_conductance_fails() {
        let mut net = y123();
        net.edges[1].conductance = q(0);
        let r = net.validate();
        assert_eq!(r.failures().iter().map(|c| c.name).collect::<Vec<_>>(), ["conductance-positive"]);
    }

    #[test]
    fn crossing_shape_fails() {
        let mut net = CactusNetwork::empty(&NoncrossingPartition::singletons(4));
        net.shape_blocks = vec![vec![1, 3], vec![2, 4]];
        let r = net.validate();
        assert!(r.failures().iter().any(|c| c.name == "shape-noncrossing"));
    }

    #[test]
    fn wrong_rotation_order_fails() {
        // Swapping the two edges at b1 in the triangle puts B on the wrong
        // side of C, which no disc drawing allows.
        let mut net = delta_1_half_third();
        net.rotations.insert("b1".into(), vec!["B".into(), "C".into()]);
        let r = net.validate();
        assert!(r.failures().iter().any(|c| c.name == "planar-embedding"), "{r:?}");
    }

    #[test]
    fn missing_rotation_entry_fails() {
        let mut net = y123();
        net.rotations.insert("v".into(), vec!["a".into(), "b".into()]);
        assert!(net.validate().failures().iter().any(|c| c.name == "rotation-system"));
    }

    #[test]
    fn loops_fail() {
        let mut net = y123();
        net.edges.push(edge("l", "v", "v", q(1)));
        net.rotations.get_mut("v").unwrap().push("l".into());
        assert!(net.validate().failures().iter().any(|c| c.name == "no-loops"));
    }

    #[test]
    fn quotient_of_cactus() {
        let g = cactus6_123().quotient_graph().unwrap();
        assert_eq!(g.vertices, ["{1}", "{2,3}", "{4,6}", "{5}"]);
        assert_eq!(g.num_boundary, 4);
        let ends: Vec<(usize, usize)> = g.edges.iter().map(|e| e.ends).collect();
        assert_eq!(ends, [(0, 2), (2, 3), (0, 1)]);
        assert_eq!(g.rotations[0], ["c", "a"]);
        assert!(g.loops().is_empty());
    }

    #[test]
    fn quotient_of_planar_network_is_the_graph() {
        let net = y123();
        let g = net.quotient_graph().unwrap();
        assert_eq!(g.vertices, ["{1}", "{2}", "{3}", "v"]);
        assert_eq!(g.edges.len(), net.edges.len());
        for (qe, e) in g.edges.iter().zip(&net.edges) {
            assert_eq!(qe.conductance, e.conductance);
            assert_eq!(qe.id, e.id);
        }
        assert_eq!(g.rotations[3], ["a", "b", "c"]);
    }

    #[test]
    fn quotient_flags_glued_loops() {
        // An edge between two labels of one block becomes a loop of Γ.  Such
        // an edge would have to pass through the glued point, so the network
        // does not embed in the cactus.
        let mut net = single_edge(q(1));
        net.shape_blocks = vec![vec![1, 2]];
        let g = net.quotient_graph().unwrap();
        assert_eq!(g.vertices, ["{1,2}"]);
        assert_eq!(g.loops().len(), 1);
        assert!(!net.validate().is_valid());
    }

    #[test]
    fn boundary_names() {
        assert_eq!(boundary_label(6, "b6"), Some(6));
        assert_eq!(boundary_label(6, "b7"), None);
        assert_eq!(boundary_label(6, "b06"), None);
        assert_eq!(boundary_label(6, "v"), None);
    }
}
