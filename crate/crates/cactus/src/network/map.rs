//! Γ as a combinatorial map, with the boundary circle drawn in.
//!
//! Besides the network edges, the map carries one arc per boundary label:
//! arc `i` runs from the vertex of `i` to the vertex of `i+1`.  Edge `e`
//! owns darts `2e` (from `ends[0]`) and `2e+1`; arc `i` is edge `m+i-1`.
//! Faces are orbits of `d -> prev(rev(d))`; interior faces then run
//! clockwise and the outer face is exactly the reversed arcs.

use super::{boundary_label, CactusNetwork};
use crate::combinat::NoncrossingPartition;
use crate::error::Result;
use std::collections::BTreeMap;

#[derive(Debug, Clone)]
pub struct CactusMap {
    n: usize,
    shape: NoncrossingPartition,
    m: usize,
    num_vertices: usize,
    ends: Vec<(usize, usize)>,
    end_names: Vec<[String; 2]>,
    rot: Vec<Vec<usize>>,
    pos: Vec<(usize, usize)>,
    faces: Vec<Vec<usize>>,
    face_of: Vec<usize>,
    outer: usize,
}

impl CactusMap {
    pub fn build(net: &CactusNetwork) -> Result<Self> {
        net.ensure_valid()?;
        Ok(Self::build_unchecked(net))
    }

    /// Assumes names, shape and rotation lists are consistent.
    pub(crate) fn build_unchecked(net: &CactusNetwork) -> Self {
        let n = net.n;
        let shape = net.shape().expect("shape checked by caller");
        let nb = shape.num_blocks();
        let m = net.edges.len();
        let internal: BTreeMap<&str, usize> = net
            .internal_vertices
            .iter()
            .enumerate()
            .map(|(k, v)| (v.as_str(), nb + k))
            .collect();
        let vindex = |name: &str| match boundary_label(n, name) {
            Some(i) => shape.block_index(i),
            None => internal[name],
        };
        let mut ends: Vec<(usize, usize)> = net
            .edges
            .iter()
            .map(|e| (vindex(&e.ends[0]), vindex(&e.ends[1])))
            .collect();
        for i in 1..=n {
            ends.push((shape.block_index(i), shape.block_index(i % n + 1)));
        }
        let end_names = net.edges.iter().map(|e| e.ends.clone()).collect();
        let ids: BTreeMap<&str, usize> = net.edges.iter().enumerate().map(|(k, e)| (e.id.as_str(), k)).collect();
        let leaving = |v: &str, id: &str| {
            let e = ids[id];
            if net.edges[e].ends[0] == v {
                2 * e
            } else {
                2 * e + 1
            }
        };
        let out_arc = |i: usize| 2 * (m + i - 1);
        let in_arc = |j: usize| 2 * (m + (j + n - 2) % n) + 1;

        let num_vertices = nb + net.internal_vertices.len();
        let mut rot = vec![Vec::new(); num_vertices];
        for (b, block) in shape.blocks().iter().enumerate() {
            for (k, &i) in block.iter().enumerate() {
                let next = block[(k + 1) % block.len()];
                let name = super::boundary_name(i);
                rot[b].push(out_arc(i));
                rot[b].extend(net.rotation(&name).iter().map(|id| leaving(&name, id)));
                rot[b].push(in_arc(next));
            }
        }
        for (k, v) in net.internal_vertices.iter().enumerate() {
            rot[nb + k] = net.rotation(v).iter().map(|id| leaving(v, id)).collect();
        }

        let mut map = CactusMap {
            n,
            shape,
            m,
            num_vertices,
            ends,
            end_names,
            rot,
            pos: Vec::new(),
            faces: Vec::new(),
            face_of: Vec::new(),
            outer: 0,
        };
        map.trace_faces();
        map
    }

    fn trace_faces(&mut self) {
        let darts = 2 * self.ends.len();
        self.pos = vec![(usize::MAX, 0); darts];
        for (v, r) in self.rot.iter().enumerate() {
            for (k, &d) in r.iter().enumerate() {
                self.pos[d] = (v, k);
            }
        }
        self.face_of = vec![usize::MAX; darts];
        self.faces.clear();
        for start in 0..darts {
            if self.face_of[start] != usize::MAX {
                continue;
            }
            let f = self.faces.len();
            let mut walk = Vec::new();
            let mut d = start;
            while self.face_of[d] == usize::MAX {
                self.face_of[d] = f;
                walk.push(d);
                d = self.phi(d);
            }
            self.faces.push(walk);
        }
        self.outer = self.face_of[self.reverse_arc_dart(1)];
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn shape(&self) -> &NoncrossingPartition {
        &self.shape
    }

    /// Number of network edges (arcs excluded).
    pub fn num_edges(&self) -> usize {
        self.m
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_boundary_vertices(&self) -> usize {
        self.shape.num_blocks()
    }

    pub fn edge_of(&self, d: usize) -> usize {
        d / 2
    }

    pub fn rev(&self, d: usize) -> usize {
        d ^ 1
    }

    pub fn arc_label(&self, d: usize) -> Option<usize> {
        let e = d / 2;
        (e >= self.m).then(|| e - self.m + 1)
    }

    pub fn is_forward_arc(&self, d: usize) -> bool {
        self.arc_label(d).is_some() && d % 2 == 0
    }

    pub fn forward_arc_dart(&self, i: usize) -> usize {
        2 * (self.m + i - 1)
    }

    pub fn reverse_arc_dart(&self, i: usize) -> usize {
        self.forward_arc_dart(i) + 1
    }

    pub fn tail(&self, d: usize) -> usize {
        let (a, b) = self.ends[d / 2];
        if d % 2 == 0 {
            a
        } else {
            b
        }
    }

    pub fn head(&self, d: usize) -> usize {
        self.tail(d ^ 1)
    }

    /// Name of the unglued vertex a network dart leaves from.
    pub fn tail_name(&self, d: usize) -> &str {
        &self.end_names[d / 2][d % 2]
    }

    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rot[v]
    }

    pub fn prev_in_rotation(&self, d: usize) -> usize {
        let (v, k) = self.pos[d];
        let r = &self.rot[v];
        r[(k + r.len() - 1) % r.len()]
    }

    pub fn next_in_rotation(&self, d: usize) -> usize {
        let (v, k) = self.pos[d];
        let r = &self.rot[v];
        r[(k + 1) % r.len()]
    }

    /// Next dart along the face to the right of `d`.
    pub fn phi(&self, d: usize) -> usize {
        self.prev_in_rotation(d ^ 1)
    }

    pub fn faces(&self) -> &[Vec<usize>] {
        &self.faces
    }

    pub fn face_of(&self, d: usize) -> usize {
        self.face_of[d]
    }

    pub fn outer_face(&self) -> usize {
        self.outer
    }

    pub fn interior_faces(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.faces.len()).filter(move |&f| f != self.outer)
    }

    /// Component id per vertex, arcs included.
    pub fn components(&self) -> Vec<usize> {
        let mut comp: Vec<usize> = (0..self.num_vertices).collect();
        fn find(c: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while c[r] != r {
                r = c[r];
            }
            c[x] = r;
            r
        }
        for &(a, b) in &self.ends {
            let (ra, rb) = (find(&mut comp, a), find(&mut comp, b));
            if ra != rb {
                comp[ra] = rb;
            }
        }
        (0..self.num_vertices).map(|v| find(&mut comp, v)).collect()
    }

    /// Whether some component holds no boundary vertex.
    pub fn has_floating_component(&self) -> bool {
        let comp = self.components();
        (self.num_boundary_vertices()..self.num_vertices).any(|v| comp[v] != comp[0])
    }

    pub(crate) fn euler_problems(&self) -> Vec<String> {
        let comp = self.components();
        let mut tally: BTreeMap<usize, (i64, i64, i64)> = BTreeMap::new();
        for &c in &comp {
            tally.entry(c).or_default().0 += 1;
        }
        for &(a, _) in &self.ends {
            tally.get_mut(&comp[a]).unwrap().1 += 1;
        }
        for walk in &self.faces {
            tally.get_mut(&comp[self.tail(walk[0])]).unwrap().2 += 1;
        }
        let mut problems = Vec::new();
        for (c, (v, e, f)) in tally {
            let f = if e == 0 { 1 } else { f };
            let chi = v - e + f;
            if chi != 2 {
                let which = if comp[0] == c { "the boundary component".to_string() } else { format!("component of vertex {c}") };
                problems.push(format!(
                    "{which} has V - E + F = {v} - {e} + {f} = {chi}, so the rotations do not describe a drawing in the cactus"
                ));
            }
        }
        problems
    }

    pub(crate) fn outer_face_problems(&self) -> Vec<String> {
        let walk = &self.faces[self.outer];
        let want: Vec<usize> = (0..self.n).map(|k| self.reverse_arc_dart((self.n - k) % self.n + 1)).collect();
        let mut got = walk.clone();
        if let Some(s) = got.iter().position(|&d| d == want[0]) {
            got.rotate_left(s);
        }
        if got == want {
            vec![]
        } else {
            vec!["the outer face is not bounded by the boundary circle in label order".into()]
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;
    use crate::electrical::linalg::q;

    #[test]
    fn single_edge_faces() {
        let map = CactusMap::build(&single_edge(q(1))).unwrap();
        // Edge, two arcs: two interior faces and the outer one.
        assert_eq!(map.faces().len(), 3);
        let interior: Vec<&Vec<usize>> = map.interior_faces().map(|f| &map.faces()[f]).collect();
        for w in interior {
            assert_eq!(w.len(), 2);
            assert_eq!(w.iter().filter(|&&d| map.is_forward_arc(d)).count(), 1);
        }
    }

    #[test]
    fn cactus6_face_structure() {
        let map = CactusMap::build(&cactus6_123()).unwrap();
        // Six arcs and three edges on four boundary vertices: F = 2 - V + E = 7.
        assert_eq!(map.faces().len(), 7);
        let mut arcs_per_face: Vec<Vec<usize>> = map
            .interior_faces()
            .map(|f| map.faces()[f].iter().filter(|&&d| map.is_forward_arc(d)).map(|&d| map.arc_label(d).unwrap()).collect())
            .collect();
        arcs_per_face.sort();
        assert_eq!(arcs_per_face, vec![vec![1], vec![2], vec![3], vec![4], vec![5], vec![6]]);
        assert!(!map.has_floating_component());
    }

    #[test]
    fn empty_network_faces_are_discs() {
        let shape = NoncrossingPartition::new(4, vec![vec![1, 3], vec![2], vec![4]]).unwrap();
        let net = CactusNetwork::empty(&shape);
        let map = CactusMap::build(&net).unwrap();
        // One interior face per block of the complement.
        assert_eq!(map.faces().len() - 1, shape.kreweras_complement().num_blocks());
    }

    #[test]
    fn n1_loop_arc() {
        let net = CactusNetwork::empty(&NoncrossingPartition::singletons(1));
        let map = CactusMap::build(&net).unwrap();
        assert_eq!(map.faces().len(), 2);
    }
}
