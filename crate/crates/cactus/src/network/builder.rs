//! Growing cactus networks one face-respecting step at a time.
//!
//! Every step keeps the drawing planar by construction: new edges run
//! inside one interior face between two of its corners.  Random generation
//! drives this from outside with whatever source of choices it likes.

use super::{boundary_name, CactusMap, CactusNetwork, Edge};
use crate::combinat::NoncrossingPartition;
use crate::electrical::linalg::Q;
use crate::error::{input, Error, Result};

/// A slot in a vertex rotation: inserting an edge id at `position` of
/// `vertex`'s list places it in the corresponding face corner.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corner {
    pub vertex: String,
    pub position: usize,
    /// Index of the vertex of Γ the corner belongs to.
    pub glued: usize,
}

#[derive(Debug, Clone)]
pub struct NetworkBuilder {
    net: CactusNetwork,
    counter: usize,
}

impl NetworkBuilder {
    pub fn new(shape: &NoncrossingPartition) -> Self {
        NetworkBuilder {
            net: CactusNetwork::empty(shape),
            counter: 0,
        }
    }

    pub fn network(&self) -> &CactusNetwork {
        &self.net
    }

    pub fn finish(self) -> CactusNetwork {
        self.net
    }

    /// Corners of each interior face, in walk order.
    pub fn faces(&self) -> Vec<Vec<Corner>> {
        let map = CactusMap::build_unchecked(&self.net);
        map.interior_faces()
            .map(|f| map.faces()[f].iter().map(|&d| self.corner(&map, d)).collect())
            .collect()
    }

    fn corner(&self, map: &CactusMap, d_out: usize) -> Corner {
        let glued = map.tail(d_out);
        match map.arc_label(d_out) {
            Some(i) => Corner {
                vertex: boundary_name(i),
                position: 0,
                glued,
            },
            None => {
                let vertex = map.tail_name(d_out).to_string();
                let id = &self.net.edges[map.edge_of(d_out)].id;
                let position = self.net.rotation(&vertex).iter().position(|x| x == id).unwrap() + 1;
                Corner { vertex, position, glued }
            }
        }
    }

    fn fresh(&mut self, prefix: &str) -> String {
        loop {
            self.counter += 1;
            let name = format!("{prefix}{}", self.counter);
            if !self.net.is_vertex(&name) && self.net.edge(&name).is_none() {
                return name;
            }
        }
    }

    fn commit(&mut self, next: CactusNetwork) -> Result<()> {
        let report = next.validate();
        if !report.is_valid() {
            return Err(Error::Internal(format!("builder step broke the network: {:?}", report.failures())));
        }
        self.net = next;
        Ok(())
    }

    fn insert(net: &mut CactusNetwork, at: &Corner, id: &str) {
        let rot = net.rotations.entry(at.vertex.clone()).or_default();
        rot.insert(at.position.min(rot.len()), id.to_string());
    }

    /// Edge between two corners of one face.  Returns the edge id.
    pub fn add_chord(&mut self, a: &Corner, b: &Corner, conductance: Q) -> Result<String> {
        if a.glued == b.glued {
            return input("a chord needs two distinct vertices");
        }
        let id = self.fresh("e");
        let mut next = self.net.clone();
        next.edges.push(Edge {
            id: id.clone(),
            ends: [a.vertex.clone(), b.vertex.clone()],
            conductance,
        });
        Self::insert(&mut next, a, &id);
        Self::insert(&mut next, b, &id);
        self.commit(next)?;
        Ok(id)
    }

    /// New internal vertex joined to one corner.  Returns the vertex name.
    pub fn add_pendant(&mut self, at: &Corner, conductance: Q) -> Result<String> {
        let v = self.fresh("v");
        let id = self.fresh("e");
        let mut next = self.net.clone();
        next.internal_vertices.push(v.clone());
        next.edges.push(Edge {
            id: id.clone(),
            ends: [at.vertex.clone(), v.clone()],
            conductance,
        });
        Self::insert(&mut next, at, &id);
        next.rotations.insert(v.clone(), vec![id]);
        self.commit(next)?;
        Ok(v)
    }

    /// Split an edge with a new internal vertex.  Returns the vertex name.
    pub fn subdivide(&mut self, edge: &str, c1: Q, c2: Q) -> Result<String> {
        let Some(k) = self.net.edge_index(edge) else {
            return input(format!("unknown edge {edge:?}"));
        };
        let v = self.fresh("v");
        let (e1, e2) = (self.fresh("e"), self.fresh("e"));
        let mut next = self.net.clone();
        let old = next.edges.remove(k);
        let [x, y] = old.ends;
        for (end, new) in [(&x, &e1), (&y, &e2)] {
            let rot = next.rotations.get_mut(end).unwrap();
            let p = rot.iter().position(|id| id == edge).unwrap();
            rot[p] = new.clone();
        }
        next.edges.push(Edge { id: e1.clone(), ends: [x, v.clone()], conductance: c1 });
        next.edges.push(Edge { id: e2.clone(), ends: [v.clone(), y], conductance: c2 });
        next.internal_vertices.push(v.clone());
        next.rotations.insert(v.clone(), vec![e1, e2]);
        self.commit(next)?;
        Ok(v)
    }
}

/// Conductances used by [`grow`].
const CONDUCTANCES: [(i64, i64); 8] = [(1, 1), (2, 1), (3, 1), (1, 2), (1, 3), (2, 3), (5, 2), (4, 1)];

/// Grow a network on `shape` in `steps` moves; `pick(k)` must
/// return an index below `k` and supplies every choice.
pub fn grow(shape: &NoncrossingPartition, steps: usize, pick: &mut dyn FnMut(usize) -> usize) -> CactusNetwork {
    let mut b = NetworkBuilder::new(shape);
    let cond = |pick: &mut dyn FnMut(usize) -> usize| {
        let (p, q) = CONDUCTANCES[pick(CONDUCTANCES.len())];
        Q::new(p.into(), q.into())
    };
    for _ in 0..steps {
        let faces = b.faces();
        let choice = pick(10);
        if choice < 6 {
            let f = &faces[pick(faces.len())];
            let a = &f[pick(f.len())];
            let others: Vec<&Corner> = f.iter().filter(|c| c.glued != a.glued).collect();
            if !others.is_empty() {
                let z = others[pick(others.len())].clone();
                let a = a.clone();
                let c = cond(pick);
                b.add_chord(&a, &z, c).expect("chord inside a face");
                continue;
            }
        }
        if choice < 8 || b.network().edges.is_empty() {
            let f = &faces[pick(faces.len())];
            let a = f[pick(f.len())].clone();
            let c = cond(pick);
            b.add_pendant(&a, c).expect("pendant inside a face");
        } else {
            let e = b.network().edges[pick(b.network().edges.len())].id.clone();
            let (c1, c2) = (cond(pick), cond(pick));
            b.subdivide(&e, c1, c2).expect("subdivision");
        }
    }
    b.finish()
}
