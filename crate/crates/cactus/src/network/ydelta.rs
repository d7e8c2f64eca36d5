//! Y-Δ moves.
//!
//! A Y at internal vertex `v` with clockwise edges `a, b, c` becomes a
//! triangle whose edge opposite the end of `a` has conductance `bc/(a+b+c)`,
//! and so on cyclically.  The inverse takes a triangular interior face to a
//! new internal vertex.

use super::{boundary_label, CactusMap, CactusNetwork, Edge};
use crate::electrical::linalg::Q;
use crate::error::{input, precondition, Result};
use std::collections::BTreeSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    YToDelta,
    DeltaToY,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Site {
    /// Centre of a Y.
    Vertex(String),
    /// The three edge ids of a triangular face, in any order.
    Triangle([String; 3]),
}

impl Site {
    /// `v` for a vertex, `x,y,z` for a triangle.
    pub fn parse(s: &str, direction: Direction) -> Result<Site> {
        match direction {
            Direction::YToDelta => Ok(Site::Vertex(s.trim().to_string())),
            Direction::DeltaToY => {
                let parts: Vec<String> = s.split(',').map(|p| p.trim().to_string()).collect();
                match <[String; 3]>::try_from(parts) {
                    Ok(t) => Ok(Site::Triangle(t)),
                    Err(_) => input(format!("a triangle site needs three comma-separated edge ids, got {s:?}")),
                }
            }
        }
    }
}

fn other_end<'a>(e: &'a Edge, v: &str) -> &'a str {
    if e.ends[0] == v {
        &e.ends[1]
    } else {
        &e.ends[0]
    }
}

/// Quotient vertex a name is glued to.
fn glued(net: &CactusNetwork, name: &str) -> (Option<usize>, String) {
    match (boundary_label(net.n, name), net.shape()) {
        (Some(i), Ok(shape)) => (Some(shape.block_index(i)), String::new()),
        _ => (None, name.to_string()),
    }
}

fn fresh_suffix(net: &CactusNetwork, candidates: impl Fn(u32) -> Vec<String>) -> u32 {
    let mut k = net.moves + 1;
    loop {
        let taken = candidates(k).iter().any(|x| net.edge(x).is_some() || net.is_vertex(x));
        if !taken {
            return k;
        }
        k += 1;
    }
}

/// Internal vertices where a Y-to-Δ move applies.
pub fn y_sites(net: &CactusNetwork) -> Result<Vec<String>> {
    net.ensure_valid()?;
    Ok(net
        .internal_vertices
        .iter()
        .filter(|v| y_centre(net, v).is_ok())
        .cloned()
        .collect())
}

/// Triangular faces where a Δ-to-Y move applies, edge ids in face order.
pub fn delta_sites(net: &CactusNetwork) -> Result<Vec<[String; 3]>> {
    let map = CactusMap::build(net)?;
    let mut out = Vec::new();
    for f in map.interior_faces() {
        if let Some(corners) = triangle_corners(&map, f) {
            out.push(corners.map(|(d, _)| net.edges[map.edge_of(d)].id.clone()));
        }
    }
    Ok(out)
}

fn y_centre<'a>(net: &'a CactusNetwork, v: &str) -> Result<[&'a Edge; 3]> {
    if !net.internal_vertices.iter().any(|x| x == v) {
        return precondition(format!("{v:?} is not an internal vertex"));
    }
    let rot = net.rotation(v);
    if rot.len() != 3 {
        return precondition(format!("vertex {v} has degree {}, not 3", rot.len()));
    }
    let edges: Vec<&Edge> = rot.iter().map(|id| net.edge(id).expect("validated")).collect();
    let neighbours: BTreeSet<(Option<usize>, String)> = edges.iter().map(|e| glued(net, other_end(e, v))).collect();
    if neighbours.len() != 3 {
        return precondition(format!("the neighbours of {v} are not three distinct vertices"));
    }
    Ok([edges[0], edges[1], edges[2]])
}

/// For a face that is a triangle of network edges with distinct corners:
/// each face dart with the corner vertex it leaves from.
fn triangle_corners(map: &CactusMap, f: usize) -> Option<[(usize, usize); 3]> {
    let walk = &map.faces()[f];
    if walk.len() != 3 || walk.iter().any(|&d| map.arc_label(d).is_some()) {
        return None;
    }
    let corners: Vec<(usize, usize)> = walk.iter().map(|&d| (d, map.tail(d))).collect();
    let distinct: BTreeSet<usize> = corners.iter().map(|c| c.1).collect();
    (distinct.len() == 3).then(|| [corners[0], corners[1], corners[2]])
}

pub fn ydelta(net: &CactusNetwork, site: &Site, direction: Direction) -> Result<CactusNetwork> {
    net.ensure_valid()?;
    match (direction, site) {
        (Direction::YToDelta, Site::Vertex(v)) => y_to_delta(net, v),
        (Direction::DeltaToY, Site::Triangle(t)) => delta_to_y(net, t),
        _ => input("site kind does not match the move direction"),
    }
}

fn replace_in_rotation(net: &mut CactusNetwork, v: &str, old: &str, new: &[String]) {
    let rot = net.rotations.entry(v.to_string()).or_default();
    let k = rot.iter().position(|x| x == old).expect("edge in rotation");
    rot.splice(k..=k, new.iter().cloned());
}

fn y_to_delta(net: &CactusNetwork, v: &str) -> Result<CactusNetwork> {
    let edges = y_centre(net, v)?;
    let ids: Vec<String> = edges.iter().map(|e| e.id.clone()).collect();
    let k = fresh_suffix(net, |k| ids.iter().map(|id| format!("{id}.{k}")).collect());
    let ends: Vec<String> = edges.iter().map(|e| other_end(e, v).to_string()).collect();
    let cond: Vec<Q> = edges.iter().map(|e| e.conductance.clone()).collect();
    let total: Q = cond.iter().cloned().sum();

    let mut out = net.clone();
    out.moves = k;
    out.internal_vertices.retain(|x| x != v);
    out.edges.retain(|e| !ids.contains(&e.id));
    out.rotations.remove(v);
    // New edge t is opposite ends[t]: it joins the other two.
    let new_id = |t: usize| format!("{}.{k}", ids[t]);
    for t in 0..3 {
        let (p, q) = ((t + 1) % 3, (t + 2) % 3);
        out.edges.push(Edge {
            id: new_id(t),
            ends: [ends[p].clone(), ends[q].clone()],
            conductance: &cond[p] * &cond[q] / &total,
        });
    }
    for t in 0..3 {
        let (next, prev) = ((t + 1) % 3, (t + 2) % 3);
        // Clockwise at ends[t]: first towards the next neighbour, then the previous.
        replace_in_rotation(&mut out, &ends[t], &ids[t], &[new_id(prev), new_id(next)]);
    }
    Ok(out)
}

fn delta_to_y(net: &CactusNetwork, triangle: &[String; 3]) -> Result<CactusNetwork> {
    let map = CactusMap::build(net)?;
    let want: BTreeSet<usize> = triangle
        .iter()
        .map(|id| net.edge_index(id).ok_or_else(|| crate::error::Error::Input(format!("unknown edge {id:?}"))))
        .collect::<Result<_>>()?;
    let face = map.interior_faces().find(|&f| {
        let walk = &map.faces()[f];
        walk.len() == 3 && walk.iter().map(|&d| map.edge_of(d)).collect::<BTreeSet<_>>() == want
    });
    let Some(face) = face else {
        return precondition(format!("edges {triangle:?} do not bound a triangular face"));
    };
    let Some(corners) = triangle_corners(&map, face) else {
        return precondition(format!("the face of {triangle:?} does not have three distinct corners"));
    };

    // corners[t] = (dart d_t leaving corner t, corner).  The triangle edge
    // opposite corner t is the one of d_{t+1}.
    let tri: Vec<&Edge> = corners.iter().map(|&(d, _)| &net.edges[map.edge_of(d)]).collect();
    let opposite = |t: usize| tri[(t + 1) % 3];
    let k = fresh_suffix(net, |k| {
        let mut c: Vec<String> = tri.iter().map(|e| format!("{}.{k}", e.id)).collect();
        c.push(format!("y{k}"));
        c
    });
    let centre = format!("y{k}");
    let (ca, cb, cc) = (&tri[0].conductance, &tri[1].conductance, &tri[2].conductance);
    let numer: Q = ca * cb + ca * cc + cb * cc;

    let mut out = net.clone();
    out.moves = k;
    out.edges.retain(|e| !want.contains(&net.edge_index(&e.id).unwrap()));
    let mut centre_rot = Vec::new();
    for (t, &(d, _)) in corners.iter().enumerate() {
        let spoke = format!("{}.{k}", opposite(t).id);
        let name = map.tail_name(d).to_string();
        // At the corner, the incoming triangle edge follows the outgoing one.
        let prev_dart = corners[(t + 2) % 3].0;
        let pair = [net.edges[map.edge_of(d)].id.clone(), net.edges[map.edge_of(prev_dart)].id.clone()];
        let rot = out.rotations.get_mut(&name).expect("corner has a rotation");
        let len = rot.len();
        let at = (0..len)
            .find(|&p| rot[p] == pair[0] && rot[(p + 1) % len] == pair[1])
            .expect("triangle edges adjacent at corner");
        if at + 1 < len {
            rot.splice(at..at + 2, [spoke.clone()]);
        } else {
            // Wraps around the end of a cyclic list.
            rot.pop();
            rot[0] = spoke.clone();
        }
        out.edges.push(Edge {
            id: spoke.clone(),
            ends: [centre.clone(), name],
            conductance: &numer / &opposite(t).conductance,
        });
        centre_rot.push(spoke);
    }
    out.internal_vertices.push(centre.clone());
    out.rotations.insert(centre, centre_rot);
    Ok(out)
}
