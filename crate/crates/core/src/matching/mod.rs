//! Maximum bipartite matching (layered augmenting paths) and the matching
//! based constructions built on it: complete level matchings, the normalized
//! matching check and Dilworth minimum chain partitions.
//!
//! Graphs are seen through the [`Adjacency`] trait so that level-to-level
//! comparability graphs can be generated on the fly instead of stored.

mod dilworth;
mod level;

pub use dilworth::{min_chain_partition, ContainmentDag, DILWORTH_MAX_FAMILY};
pub use level::{complete_level_matching, lym_check, DownGraph, LevelMatching};

use crate::error::{domain, Result};

/// Marker for an unmatched vertex.
pub const NONE: u32 = u32::MAX;

/// A bipartite graph whose left vertices `0..left_len()` know their right
/// neighbors. Neighbor lists must come out sorted ascending and duplicate
/// free; right indices are expected to follow increasing bitmask order so
/// that "lowest index first" equals "lowest bitmask first".
pub trait Adjacency {
    fn left_len(&self) -> usize;
    fn right_len(&self) -> usize;
    /// Clears `out` and fills it with the neighbors of left vertex `u`.
    fn neighbors(&self, u: usize, out: &mut Vec<u32>);

    fn has_edge(&self, u: usize, r: u32) -> bool {
        let mut buf = Vec::new();
        self.neighbors(u, &mut buf);
        buf.binary_search(&r).is_ok()
    }
}

/// Explicit graph in compressed sparse row form.
#[derive(Clone, Debug)]
pub struct BipartiteGraph {
    pub left: Vec<u64>,
    pub right: Vec<u64>,
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl BipartiteGraph {
    /// `adjacency[u]` lists right indices adjacent to left vertex `u`.
    pub fn new(left: Vec<u64>, right: Vec<u64>, adjacency: Vec<Vec<u32>>) -> Result<Self> {
        if adjacency.len() != left.len() {
            return domain("adjacency must have one list per left vertex");
        }
        let mut offsets = Vec::with_capacity(left.len() + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        for (u, mut list) in adjacency.into_iter().enumerate() {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                return domain(format!("duplicate edge at left vertex {u}"));
            }
            if list.last().is_some_and(|&r| r as usize >= right.len()) {
                return domain(format!("edge from left vertex {u} leaves the right side"));
            }
            targets.extend(list);
            offsets.push(targets.len());
        }
        Ok(Self {
            left,
            right,
            offsets,
            targets,
        })
    }

    /// Graph with an edge wherever `related(left, right)` holds.
    pub fn from_relation(
        left: Vec<u64>,
        right: Vec<u64>,
        related: impl Fn(u64, u64) -> bool,
    ) -> Self {
        let adjacency = left
            .iter()
            .map(|&l| {
                right
                    .iter()
                    .enumerate()
                    .filter(|&(_, &r)| related(l, r))
                    .map(|(i, _)| i as u32)
                    .collect()
            })
            .collect();
        Self::new(left, right, adjacency).expect("relation graph is well formed")
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len()
    }

    pub fn neighbor_slice(&self, u: usize) -> &[u32] {
        &self.targets[self.offsets[u]..self.offsets[u + 1]]
    }
}

impl Adjacency for BipartiteGraph {
    fn left_len(&self) -> usize {
        self.left.len()
    }

    fn right_len(&self) -> usize {
        self.right.len()
    }

    fn neighbors(&self, u: usize, out: &mut Vec<u32>) {
        out.clear();
        out.extend_from_slice(self.neighbor_slice(u));
    }

    fn has_edge(&self, u: usize, r: u32) -> bool {
        self.neighbor_slice(u).binary_search(&r).is_ok()
    }
}

/// A matching stored from both sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    left_to_right: Vec<u32>,
    right_to_left: Vec<u32>,
}

impl Matching {
    pub fn empty(left_len: usize, right_len: usize) -> Self {
        Self {
            left_to_right: vec![NONE; left_len],
            right_to_left: vec![NONE; right_len],
        }
    }

    /// Builds a matching from `(left, right)` pairs, rejecting repeated or
    /// out-of-range endpoints.
    pub fn from_pairs(left_len: usize, right_len: usize, pairs: &[(u32, u32)]) -> Result<Self> {
        let mut m = Self::empty(left_len, right_len);
        for &(u, r) in pairs {
            if u as usize >= left_len || r as usize >= right_len {
                return domain(format!("pair ({u}, {r}) out of range"));
            }
            if m.left_to_right[u as usize] != NONE || m.right_to_left[r as usize] != NONE {
                return domain(format!("pair ({u}, {r}) reuses a matched vertex"));
            }
            m.left_to_right[u as usize] = r;
            m.right_to_left[r as usize] = u;
        }
        Ok(m)
    }

    pub fn size(&self) -> usize {
        self.left_to_right.iter().filter(|&&r| r != NONE).count()
    }

    pub fn right_of(&self, u: usize) -> Option<u32> {
        match self.left_to_right[u] {
            NONE => None,
            r => Some(r),
        }
    }

    pub fn left_of(&self, r: usize) -> Option<u32> {
        match self.right_to_left[r] {
            NONE => None,
            u => Some(u),
        }
    }

    pub fn left_len(&self) -> usize {
        self.left_to_right.len()
    }

    pub fn right_len(&self) -> usize {
        self.right_to_left.len()
    }

    /// `(left, right)` pairs in increasing left order.
    pub fn pairs(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.left_to_right
            .iter()
            .enumerate()
            .filter(|(_, &r)| r != NONE)
            .map(|(u, &r)| (u as u32, r))
    }

    pub fn covers_all_left(&self) -> bool {
        self.left_to_right.iter().all(|&r| r != NONE)
    }

    /// Checks sizes, mutual consistency and that every pair is an edge.
    pub fn validate<G: Adjacency>(&self, g: &G) -> Result<()> {
        if self.left_len() != g.left_len() || self.right_len() != g.right_len() {
            return domain("matching dimensions do not match the graph");
        }
        for (u, &r) in self.left_to_right.iter().enumerate() {
            if r == NONE {
                continue;
            }
            if r as usize >= self.right_len() || self.right_to_left[r as usize] != u as u32 {
                return domain(format!("left vertex {u} has an inconsistent partner"));
            }
            if !g.has_edge(u, r) {
                return domain(format!("pair ({u}, {r}) is not an edge"));
            }
        }
        let back = self.right_to_left.iter().filter(|&&u| u != NONE).count();
        if back != self.size() {
            return domain("matching sides disagree");
        }
        Ok(())
    }
}

/// Maximum-cardinality matching of `g`.
pub fn maximum_matching<G: Adjacency>(g: &G) -> Matching {
    let mut m = Matching::empty(g.left_len(), g.right_len());
    augment_to_maximum(g, &mut m);
    m
}

/// Maximum matching whose covered vertex set contains that of `m`.
///
/// Augmenting paths flip edges along alternating paths between two free
/// vertices, so every vertex covered before stays covered.
pub fn extend_to_maximum_covering<G: Adjacency>(g: &G, m: &Matching) -> Result<Matching> {
    m.validate(g)?;
    let mut out = m.clone();
    augment_to_maximum(g, &mut out);
    Ok(out)
}

/// Greedy pass followed by Hopcroft–Karp phases, all in ascending index
/// order. Mutates `m` in place; only ever augments.
fn augment_to_maximum<G: Adjacency>(g: &G, m: &mut Matching) {
    let nl = g.left_len();
    let mut buf = Vec::new();
    for u in 0..nl {
        if m.left_to_right[u] != NONE {
            continue;
        }
        g.neighbors(u, &mut buf);
        if let Some(&r) = buf.iter().find(|&&r| m.right_to_left[r as usize] == NONE) {
            m.left_to_right[u] = r;
            m.right_to_left[r as usize] = u as u32;
        }
    }

    let mut dist = vec![u32::MAX; nl];
    let mut queue: Vec<u32> = Vec::new();
    // One neighbor buffer per DFS depth, reused across searches.
    let mut frames: Vec<(u32, Vec<u32>, usize)> = Vec::new();
    loop {
        // Layering from all free left vertices.
        queue.clear();
        for u in 0..nl {
            if m.left_to_right[u] == NONE {
                dist[u] = 0;
                queue.push(u as u32);
            } else {
                dist[u] = u32::MAX;
            }
        }
        let mut free_depth = u32::MAX;
        let mut head = 0;
        while head < queue.len() {
            let u = queue[head] as usize;
            head += 1;
            if dist[u] >= free_depth {
                continue;
            }
            g.neighbors(u, &mut buf);
            for &r in &buf {
                let w = m.right_to_left[r as usize];
                if w == NONE {
                    free_depth = free_depth.min(dist[u] + 1);
                } else if dist[w as usize] == u32::MAX {
                    dist[w as usize] = dist[u] + 1;
                    queue.push(w);
                }
            }
        }
        if free_depth == u32::MAX {
            break;
        }

        let mut augmented = false;
        for root in 0..nl {
            if m.left_to_right[root] != NONE || dist[root] != 0 {
                continue;
            }
            if dfs_augment(g, m, &mut dist, &mut frames, root as u32, free_depth) {
                augmented = true;
            }
        }
        if !augmented {
            break;
        }
    }
}

/// Iterative layered DFS from `root`; on success flips the found path.
fn dfs_augment<G: Adjacency>(
    g: &G,
    m: &mut Matching,
    dist: &mut [u32],
    frames: &mut Vec<(u32, Vec<u32>, usize)>,
    root: u32,
    free_depth: u32,
) -> bool {
    let mut depth = 0usize;
    let push = |frames: &mut Vec<(u32, Vec<u32>, usize)>, depth: usize, u: u32| {
        if frames.len() <= depth {
            frames.push((u, Vec::new(), 0));
        }
        let f = &mut frames[depth];
        f.0 = u;
        f.2 = 0;
        g.neighbors(u as usize, &mut f.1);
    };
    push(frames, 0, root);
    loop {
        let (u, pos) = (frames[depth].0, frames[depth].2);
        if pos >= frames[depth].1.len() {
            dist[u as usize] = u32::MAX;
            if depth == 0 {
                return false;
            }
            depth -= 1;
            frames[depth].2 += 1;
            continue;
        }
        let r = frames[depth].1[pos];
        let w = m.right_to_left[r as usize];
        if w == NONE {
            if dist[u as usize] + 1 != free_depth {
                frames[depth].2 += 1;
                continue;
            }
            for f in frames.iter().take(depth + 1) {
                let (fu, fr) = (f.0, f.1[f.2]);
                m.left_to_right[fu as usize] = fr;
                m.right_to_left[fr as usize] = fu;
            }
            // Path vertices are done for this phase.
            for f in frames.iter().take(depth + 1) {
                dist[f.0 as usize] = u32::MAX;
            }
            return true;
        }
        if dist[w as usize] != u32::MAX && dist[w as usize] == dist[u as usize] + 1 {
            depth += 1;
            push(frames, depth, w);
        } else {
            frames[depth].2 += 1;
        }
    }
}
