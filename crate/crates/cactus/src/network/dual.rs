//! Dual cactus networks.
//!
//! Interior faces of the cactus become dual vertices.  The face holding arc
//! `i` is (part of) dual boundary vertex `i`, which already includes the
//! cyclic shift of labels: the arc after `i` is where `i~` sits.  Edge `e`
//! becomes `e*` with conductance `1/c(e)`.

use super::{boundary_name, CactusMap, CactusNetwork, Edge};
use crate::electrical::linalg::Q;
use crate::error::{precondition, Error, Result};
use num_traits::One;
use std::collections::BTreeMap;

pub fn dual(net: &CactusNetwork) -> Result<CactusNetwork> {
    let map = CactusMap::build(net)?;
    if map.has_floating_component() {
        return precondition("the dual needs every component to touch the boundary");
    }
    let n = net.n;
    let mut shape_blocks = Vec::new();
    let mut internal = Vec::new();
    // Dual vertex name for each network dart, by the face it bounds.
    let mut end_name: BTreeMap<usize, String> = BTreeMap::new();
    let mut rotations: BTreeMap<String, Vec<usize>> = BTreeMap::new();

    for f in map.interior_faces() {
        let walk = &map.faces()[f];
        let arcs: Vec<usize> = walk.iter().filter_map(|&d| map.arc_label(d)).collect();
        if arcs.is_empty() {
            let name = format!("f{}", internal.len() + 1);
            for &d in walk {
                end_name.insert(d, name.clone());
            }
            rotations.insert(name.clone(), walk.clone());
            internal.push(name);
            continue;
        }
        let mut block = arcs.clone();
        block.sort_unstable();
        shape_blocks.push(block);
        let start = walk.iter().position(|&d| map.arc_label(d).is_some()).unwrap();
        let mut member = String::new();
        for k in 0..walk.len() {
            let d = walk[(start + k) % walk.len()];
            match map.arc_label(d) {
                Some(i) => {
                    member = boundary_name(i);
                    rotations.entry(member.clone()).or_default();
                }
                None => {
                    end_name.insert(d, member.clone());
                    rotations.get_mut(&member).unwrap().push(d);
                }
            }
        }
    }
    shape_blocks.sort();

    let star = |id: &str| format!("{id}*");
    let mut edges = Vec::new();
    for (e, edge) in net.edges.iter().enumerate() {
        if map.face_of(2 * e) == map.face_of(2 * e + 1) {
            continue;
        }
        edges.push(Edge {
            id: star(&edge.id),
            ends: [end_name[&(2 * e)].clone(), end_name[&(2 * e + 1)].clone()],
            conductance: Q::one() / &edge.conductance,
        });
    }
    let kept = |d: &usize| map.face_of(*d) != map.face_of(*d ^ 1);
    let rotations = rotations
        .into_iter()
        .map(|(v, darts)| {
            let ids = darts.iter().filter(|d| kept(d)).map(|&d| star(&net.edges[d / 2].id)).collect();
            (v, ids)
        })
        .filter(|(_, r): &(String, Vec<String>)| !r.is_empty())
        .collect();

    let out = CactusNetwork {
        n,
        shape_blocks,
        internal_vertices: internal,
        edges,
        rotations,
        moves: net.moves,
    };
    out.ensure_valid()
        .map_err(|e| Error::Internal(format!("dual network failed validation: {e}")))?;
    Ok(out)
}
