//! Noncrossing partitions, Kreweras complements, concordance and matchings.
//!
//! Ground-set conventions, fixed here and used everywhere else:
//!
//! * plain labels are `1..=n`;
//! * the tilde label `k~` is the integer `n + k` (see [`tilde`], [`untilde`]);
//! * the interleaved circle `1, 1~, 2, 2~, ..., n, n~` places `k` at position
//!   `2(k-1)` and `k~` at `2(k-1)+1` (see [`circle_position`]); the same
//!   numbers are the column indices of the exterior algebra.
//!
//! A Kreweras complement is returned as a partition of `1..=n` whose element
//! `k` stands for `k~`.  Read as a partition of plain labels it is exactly the
//! shifted partition `s(σ~)` used by duality.

use crate::error::{input, Result};
use std::fmt;

pub fn tilde(n: usize, k: usize) -> usize {
    n + k
}

pub fn is_tilde(n: usize, x: usize) -> bool {
    x > n
}

pub fn untilde(n: usize, x: usize) -> usize {
    if x > n {
        x - n
    } else {
        x
    }
}

/// Position of a ground element on the interleaved circle (0-based).
pub fn circle_position(n: usize, x: usize) -> usize {
    if x > n {
        2 * (x - n - 1) + 1
    } else {
        2 * (x - 1)
    }
}

/// Inverse of [`circle_position`].
pub fn element_at(n: usize, pos: usize) -> usize {
    if pos % 2 == 0 {
        pos / 2 + 1
    } else {
        n + pos / 2 + 1
    }
}

/// `"3"` for a plain label, `"3~"` for a tilde label.
pub fn element_name(n: usize, x: usize) -> String {
    if x > n {
        format!("{}~", x - n)
    } else {
        x.to_string()
    }
}

pub fn catalan(n: usize) -> u64 {
    let mut c: u64 = 1;
    for k in 0..n as u64 {
        c = c * 2 * (2 * k + 1) / (k + 2);
    }
    c
}

/// A noncrossing partition of `{1..n}`, stored canonically: blocks sorted by
/// their minimum, elements ascending.  The derived order is lexicographic on
/// that encoding and is the output order used throughout.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NoncrossingPartition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

fn canonical(mut blocks: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    for b in blocks.iter_mut() {
        b.sort_unstable();
    }
    blocks.sort();
    blocks
}

fn check_partition(n: usize, blocks: &[Vec<usize>]) -> Result<()> {
    let mut seen = vec![false; n + 1];
    for b in blocks {
        if b.is_empty() {
            return input("empty block");
        }
        for &x in b {
            if x == 0 || x > n {
                return input(format!("element {x} outside 1..{n}"));
            }
            if seen[x] {
                return input(format!("element {x} appears twice"));
            }
            seen[x] = true;
        }
    }
    if let Some(x) = (1..=n).find(|&x| !seen[x]) {
        return input(format!("element {x} is missing"));
    }
    Ok(())
}

fn crossing_free(n: usize, blocks: &[Vec<usize>]) -> bool {
    let mut owner = vec![0usize; n + 1];
    for (i, b) in blocks.iter().enumerate() {
        for &x in b {
            owner[x] = i;
        }
    }
    for a in 1..=n {
        for b in a + 1..=n {
            if owner[b] == owner[a] {
                continue;
            }
            for c in b + 1..=n {
                if owner[c] != owner[a] {
                    continue;
                }
                for d in c + 1..=n {
                    if owner[d] == owner[b] {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// True iff no `a<b<c<d` has `a,c` in one block and `b,d` in another.
pub fn is_noncrossing(n: usize, blocks: &[Vec<usize>]) -> Result<bool> {
    check_partition(n, blocks)?;
    Ok(crossing_free(n, blocks))
}

impl NoncrossingPartition {
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        if !is_noncrossing(n, &blocks)? {
            return input(format!("partition {blocks:?} is crossing"));
        }
        Ok(NoncrossingPartition {
            n,
            blocks: canonical(blocks),
        })
    }

    pub fn singletons(n: usize) -> Self {
        NoncrossingPartition {
            n,
            blocks: (1..=n).map(|i| vec![i]).collect(),
        }
    }

    pub fn full(n: usize) -> Self {
        NoncrossingPartition {
            n,
            blocks: vec![(1..=n).collect()],
        }
    }

    /// Partition with the given pair in one block and every other label alone.
    pub fn pair(n: usize, i: usize, j: usize) -> Self {
        let mut blocks = vec![vec![i, j]];
        blocks.extend((1..=n).filter(|&k| k != i && k != j).map(|k| vec![k]));
        NoncrossingPartition {
            n,
            blocks: canonical(blocks),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Index (in canonical order) of the block containing label `x`.
    pub fn block_index(&self, x: usize) -> usize {
        self.blocks
            .iter()
            .position(|b| b.contains(&x))
            .expect("label outside partition")
    }

    pub fn same_block(&self, x: usize, y: usize) -> bool {
        self.block_index(x) == self.block_index(y)
    }

    pub fn is_singletons(&self) -> bool {
        self.blocks.len() == self.n
    }

    /// `σ` refines `other` if every block of `σ` lies inside a block of `other`.
    pub fn refines(&self, other: &NoncrossingPartition) -> bool {
        self.blocks
            .iter()
            .all(|b| b.iter().all(|&x| other.same_block(b[0], x)))
    }

    /// Apply a relabelling `x -> f(x)` (must be a bijection of `1..n`).
    pub fn relabel(&self, f: impl Fn(usize) -> usize) -> Result<Self> {
        let blocks = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|&x| f(x)).collect())
            .collect();
        NoncrossingPartition::new(self.n, blocks)
    }

    /// The Kreweras complement `σ~`; element `k` of the result denotes `k~`.
    pub fn kreweras_complement(&self) -> NoncrossingPartition {
        let n = self.n;
        // k~ sits between k and k+1.  k~ and l~ (k<l) are joined iff no block
        // of σ meets both the arc {k+1..l} and its complement.
        let mut parent: Vec<usize> = (0..=n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for k in 1..=n {
            for l in k + 1..=n {
                let separated = self.blocks.iter().any(|b| {
                    let inside = b.iter().any(|&x| x > k && x <= l);
                    let outside = b.iter().any(|&x| x <= k || x > l);
                    inside && outside
                });
                if !separated {
                    let (a, b) = (find(&mut parent, k), find(&mut parent, l));
                    parent[a] = b;
                }
            }
        }
        let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for k in 1..=n {
            let r = find(&mut parent, k);
            groups.entry(r).or_default().push(k);
        }
        NoncrossingPartition {
            n,
            blocks: canonical(groups.into_values().collect()),
        }
    }

    pub fn kreweras_pair(&self) -> KrewerasPair {
        KrewerasPair {
            sigma: self.clone(),
            sigma_tilde: self.kreweras_complement(),
        }
    }

    /// Display form such as `1|2,3`.
    pub fn key(&self) -> String {
        self.blocks
            .iter()
            .map(|b| {
                b.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect::<Vec<_>>()
            .join("|")
    }

    /// Parse the form produced by [`NoncrossingPartition::key`].
    pub fn parse_key(n: usize, s: &str) -> Result<Self> {
        let mut blocks = Vec::new();
        for part in s.split('|') {
            let mut b = Vec::new();
            for x in part.split(',') {
                match x.trim().parse::<usize>() {
                    Ok(v) => b.push(v),
                    Err(_) => return input(format!("bad partition key {s:?}")),
                }
            }
            blocks.push(b);
        }
        NoncrossingPartition::new(n, blocks)
    }
}

impl fmt::Display for NoncrossingPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key())
    }
}

/// All noncrossing partitions of `{1..n}` in canonical (lexicographic) order.
pub fn enumerate_noncrossing(n: usize) -> Vec<NoncrossingPartition> {
    let mut out = Vec::new();
    let mut rgs = vec![0usize; n];
    fn rec(i: usize, n: usize, max: usize, rgs: &mut Vec<usize>, out: &mut Vec<NoncrossingPartition>) {
        if i == n {
            let mut blocks = vec![Vec::new(); max];
            for (x, &b) in rgs.iter().enumerate() {
                blocks[b].push(x + 1);
            }
            if crossing_free(n, &blocks) {
                out.push(NoncrossingPartition {
                    n,
                    blocks: canonical(blocks),
                });
            }
            return;
        }
        for b in 0..=max {
            rgs[i] = b;
            rec(i + 1, n, max.max(b + 1), rgs, out);
        }
    }
    if n > 0 {
        rec(0, n, 0, &mut rgs, &mut out);
    }
    out.sort();
    out
}

/// True iff every block of `sigma` contains exactly one element of `set`.
pub fn is_concordant(set: &[usize], sigma: &NoncrossingPartition) -> bool {
    let in_set = |x: &usize| set.contains(x);
    set.iter().all(|&x| x >= 1 && x <= sigma.n)
        && sigma
            .blocks
            .iter()
            .all(|b| b.iter().filter(|x| in_set(x)).count() == 1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KrewerasPair {
    pub sigma: NoncrossingPartition,
    /// Element `k` stands for `k~`.
    pub sigma_tilde: NoncrossingPartition,
}

impl KrewerasPair {
    pub fn new(sigma: NoncrossingPartition) -> Self {
        sigma.kreweras_pair()
    }

    /// Both defining properties: the union is noncrossing on the interleaved
    /// circle and the block counts sum to `n+1`.
    pub fn is_valid(&self) -> bool {
        let n = self.sigma.n;
        if self.sigma_tilde.n != n || self.sigma.num_blocks() + self.sigma_tilde.num_blocks() != n + 1 {
            return false;
        }
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for b in self.sigma.blocks() {
            blocks.push(b.iter().map(|&x| circle_position(n, x) + 1).collect());
        }
        for b in self.sigma_tilde.blocks() {
            blocks.push(b.iter().map(|&k| circle_position(n, tilde(n, k)) + 1).collect());
        }
        crossing_free(2 * n, &blocks)
    }
}

/// `(I, I~)` with `I ⊆ [n]` and `I~` given as tilde integers `n+k`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexPair {
    pub i: Vec<usize>,
    pub i_tilde: Vec<usize>,
}

impl IndexPair {
    pub fn len(&self) -> usize {
        self.i.len() + self.i_tilde.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Ground elements sorted along the interleaved order.
    pub fn elements(&self, n: usize) -> Vec<usize> {
        let mut all: Vec<usize> = self.i.iter().chain(self.i_tilde.iter()).copied().collect();
        all.sort_by_key(|&x| circle_position(n, x));
        all
    }
}

fn choices(blocks: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut acc: Vec<Vec<usize>> = vec![Vec::new()];
    for b in blocks {
        let mut next = Vec::with_capacity(acc.len() * b.len());
        for prefix in &acc {
            for &x in b {
                let mut p = prefix.clone();
                p.push(x);
                next.push(p);
            }
        }
        acc = next;
    }
    for c in acc.iter_mut() {
        c.sort_unstable();
    }
    acc
}

/// Every `(I, I~)` concordant with the pair, sorted.
pub fn concordant_index_pairs(pair: &KrewerasPair) -> Vec<IndexPair> {
    let n = pair.sigma.n;
    let mut out = Vec::new();
    for i in choices(pair.sigma.blocks()) {
        for it in choices(pair.sigma_tilde.blocks()) {
            out.push(IndexPair {
                i: i.clone(),
                i_tilde: it.iter().map(|&k| tilde(n, k)).collect(),
            });
        }
    }
    out.sort();
    out
}

/// A perfect matching on `{1..2n}`, pairs stored as `(a, b)` with `a < b`,
/// sorted by `a`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matching {
    n: usize,
    pairs: Vec<(usize, usize)>,
}

impl Matching {
    pub fn new(n: usize, pairs: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = vec![false; 2 * n + 1];
        let mut norm = Vec::with_capacity(pairs.len());
        for (a, b) in pairs {
            for x in [a, b] {
                if x == 0 || x > 2 * n || seen[x] {
                    return input(format!("pair ({a},{b}) is not part of a perfect matching on 1..{}", 2 * n));
                }
                seen[x] = true;
            }
            norm.push((a.min(b), a.max(b)));
        }
        if norm.len() != n {
            return input("matching does not cover every point");
        }
        norm.sort_unstable();
        Ok(Matching { n, pairs: norm })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn partner(&self, x: usize) -> usize {
        for &(a, b) in &self.pairs {
            if a == x {
                return b;
            }
            if b == x {
                return a;
            }
        }
        panic!("point {x} not in matching")
    }
}
