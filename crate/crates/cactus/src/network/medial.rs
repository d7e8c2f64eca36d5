//! Medial strands.
//!
//! Arc `i` carries two medial boundary points: `2i` near `i` and `2i+1`
//! near `i+1` (indices mod `2n`, written in `1..=2n`).  Inside each interior
//! face the strand pieces join cyclically adjacent items of the face walk,
//! except the two points of one arc.  At an edge, a strand coming from one
//! side of the edge leaves towards the same side on the other face.

use super::{CactusMap, CactusNetwork};
use crate::combinat::Matching;
use crate::error::{internal, Result};
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Item {
    Point(usize),
    Dart(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MedialStrands {
    pub n: usize,
    /// Endpoint pairs of the boundary strands, each `(a, b)` with `a < b`.
    pub pairing: Matching,
    /// Edge crossings of each strand in order; boundary strands first, in
    /// the order of their smaller endpoint, then closed strands.
    pub strands: Vec<Vec<usize>>,
    pub closed_strands: usize,
}

impl MedialStrands {
    /// Edges crossed twice by one strand.
    pub fn self_crossings(&self) -> Vec<usize> {
        let mut seen: BTreeMap<usize, usize> = BTreeMap::new();
        let mut out = Vec::new();
        for (s, edges) in self.strands.iter().enumerate() {
            for &e in edges {
                if seen.insert(e, s) == Some(s) {
                    out.push(e);
                }
            }
        }
        out
    }

    /// Strand pairs that cross at two or more edges.
    pub fn bigons(&self) -> Vec<(usize, usize)> {
        let mut owners: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (s, edges) in self.strands.iter().enumerate() {
            for &e in edges {
                owners.entry(e).or_default().push(s);
            }
        }
        let mut count: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for strands in owners.values() {
            if let [a, b] = strands[..] {
                if a != b {
                    *count.entry((a.min(b), a.max(b))).or_default() += 1;
                }
            }
        }
        count.into_iter().filter(|&(_, c)| c >= 2).map(|(p, _)| p).collect()
    }

    pub fn is_minimal(&self) -> bool {
        self.self_crossings().is_empty() && self.bigons().is_empty()
    }
}

pub fn medial_strands(net: &CactusNetwork) -> Result<MedialStrands> {
    let map = CactusMap::build(net)?;
    trace(&map)
}

pub fn medial_pairing(net: &CactusNetwork) -> Result<Matching> {
    Ok(medial_strands(net)?.pairing)
}

pub fn is_minimal(net: &CactusNetwork) -> Result<bool> {
    Ok(medial_strands(net)?.is_minimal())
}

fn trace(map: &CactusMap) -> Result<MedialStrands> {
    let n = map.n();
    let np = 2 * n;
    // Item lists per interior face, and where each dart and point sits.
    let mut items: Vec<Vec<Item>> = Vec::new();
    let mut dart_at: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    let mut point_at = vec![(0, 0); np + 1];
    for f in map.interior_faces() {
        let slot = items.len();
        let mut list = Vec::new();
        for &d in &map.faces()[f] {
            match map.arc_label(d) {
                Some(i) => {
                    let a = (2 * i - 1) % np + 1;
                    let b = (2 * i) % np + 1;
                    point_at[a] = (slot, list.len());
                    list.push(Item::Point(a));
                    point_at[b] = (slot, list.len());
                    list.push(Item::Point(b));
                }
                None => {
                    dart_at.insert(d, (slot, list.len()));
                    list.push(Item::Dart(d));
                }
            }
        }
        items.push(list);
    }
    let step = |slot: usize, k: usize, forward: bool| {
        let len = items[slot].len();
        if forward {
            (slot, (k + 1) % len)
        } else {
            (slot, (k + len - 1) % len)
        }
    };

    // pass[(edge, forward)] = strand through that side pairing of the edge.
    let mut pass: BTreeMap<(usize, bool), usize> = BTreeMap::new();
    let mut strands: Vec<Vec<usize>> = Vec::new();
    let mut pairs = Vec::new();

    // Walk from a position, moving forward or backward through items.
    // Returns the endpoint reached, or None if we came back to a pass.
    let walk = |mut at: (usize, usize), mut forward: bool, strand: usize, pass: &mut BTreeMap<(usize, bool), usize>, crossed: &mut Vec<usize>| -> Result<Option<usize>> {
        loop {
            match items[at.0][at.1] {
                Item::Point(p) => return Ok(Some(p)),
                Item::Dart(d) => {
                    // Arrived from the neighbour opposite to the direction of travel.
                    let e = map.edge_of(d);
                    let side = !forward;
                    if let Some(&s) = pass.get(&(e, side)) {
                        if s == strand {
                            return Ok(None);
                        }
                        return internal(format!("medial pass at edge {e} visited by two strands"));
                    }
                    pass.insert((e, side), strand);
                    crossed.push(e);
                    // Leave towards the same side of the edge on the other face.
                    let other = dart_at[&map.rev(d)];
                    forward = !forward;
                    at = step(other.0, other.1, forward);
                }
            }
        }
    };

    let mut done = vec![false; np + 1];
    for p in 1..=np {
        if done[p] {
            continue;
        }
        let strand = strands.len();
        let (slot, k) = point_at[p];
        // Even points join the item before them, odd points the one after.
        let forward = p % 2 == 1;
        let mut crossed = Vec::new();
        let start = step(slot, k, forward);
        let end = match walk(start, forward, strand, &mut pass, &mut crossed)? {
            Some(q) => q,
            None => return internal("boundary strand closed up"),
        };
        if end == p || done[end] {
            return internal(format!("medial strand from {p} ended at {end}"));
        }
        done[p] = true;
        done[end] = true;
        pairs.push((p.min(end), p.max(end)));
        strands.push(crossed);
    }

    let mut closed = 0;
    for e in 0..map.num_edges() {
        for side in [false, true] {
            if pass.contains_key(&(e, side)) {
                continue;
            }
            let strand = strands.len();
            let mut crossed = Vec::new();
            if walk(dart_at[&(2 * e)], !side, strand, &mut pass, &mut crossed)?.is_some() {
                return internal("closed strand reached the boundary");
            }
            strands.push(crossed);
            closed += 1;
        }
    }

    Ok(MedialStrands {
        n,
        pairing: Matching::new(n, pairs)?,
        strands,
        closed_strands: closed,
    })
}
