//! Iterated mod-2 homology covers of Cayley graphs of `(Z/2)^r`.
//!
//! Level 1 is the Cayley multigraph of `(Z/2)^r` with its standard basis;
//! each further level is the maximal elementary abelian 2-cover of the
//! previous one. Edge labels and orientations are lifted, so every level is
//! again a Cayley graph of a quotient of the free group of rank `r`. The
//! fibres of the cover projection form a wall structure on the cover.

use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::Serialize;

use crate::embedding::EmbeddingTable;
use crate::error::{Error, Result};
use crate::graph::{LabeledMultigraph, UNREACHABLE};
use crate::group::{FiniteGroupTable, Generators};

/// Default vertex cap for tower levels.
pub const DEFAULT_TOWER_CAP: usize = 1_000_000;

/// Cayley multigraph: for each free generator `s` (one per `{s, s⁻¹}`
/// class, labelled by its position) and each vertex `v`, an edge
/// `v → v·s`. An involution therefore gives two parallel edges between
/// `v` and `v·s`, and every vertex has degree `|S|` with involutions
/// counted twice.
pub fn cayley_multigraph(group: &FiniteGroupTable, gens: &Generators) -> LabeledMultigraph {
    let free = gens.free_generators(group);
    let mut edges = Vec::with_capacity(group.order() * free.len());
    for (label, &s) in free.iter().enumerate() {
        for v in 0..group.order() {
            edges.push((v, group.mul(v, s), label as u32));
        }
    }
    LabeledMultigraph::new(group.order(), edges).expect("Cayley edges in range")
}

/// Bit vectors stored row-major, one row of `words` u64s per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignatureTable {
    bits: usize,
    words: usize,
    data: Vec<u64>,
}

impl SignatureTable {
    fn zeros(rows: usize, bits: usize) -> Self {
        let words = bits.div_ceil(64);
        SignatureTable { bits, words, data: vec![0; rows * words] }
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn row(&self, v: usize) -> &[u64] {
        &self.data[v * self.words..(v + 1) * self.words]
    }

    pub fn bit(&self, v: usize, i: usize) -> bool {
        self.row(v)[i / 64] >> (i % 64) & 1 == 1
    }

    fn copy_flip(&mut self, from: usize, to: usize, bit: usize) {
        let w = self.words;
        self.data.copy_within(from * w..(from + 1) * w, to * w);
        self.data[to * w + bit / 64] ^= 1 << (bit % 64);
    }

    pub fn hamming(&self, x: usize, y: usize) -> u32 {
        self.row(x).iter().zip(self.row(y)).map(|(a, b)| (a ^ b).count_ones()).sum()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("vertex");
        for i in 0..self.bits {
            let _ = write!(out, ",bit_{i}");
        }
        out.push('\n');
        for v in 0..self.data.len() / self.words.max(1) {
            let _ = write!(out, "{v}");
            for i in 0..self.bits {
                out.push_str(if self.bit(v, i) { ",1" } else { ",0" });
            }
            out.push('\n');
        }
        out
    }
}

/// One stage of the tower.
#[derive(Debug, Clone)]
pub struct TowerLevel {
    level: usize,
    graph: LabeledMultigraph,
    base_edge_count: usize,
    /// Cover edge → base edge; empty at level 1.
    projection: Vec<usize>,
    signatures: Option<SignatureTable>,
    girth: Option<usize>,
}

impl TowerLevel {
    fn new(level: usize, graph: LabeledMultigraph) -> Self {
        let girth = graph.simple_girth();
        TowerLevel { level, graph, base_edge_count: 0, projection: Vec::new(), signatures: None, girth }
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn graph(&self) -> &LabeledMultigraph {
        &self.graph
    }

    pub fn base_edge_count(&self) -> usize {
        self.base_edge_count
    }

    pub fn projection(&self) -> &[usize] {
        &self.projection
    }

    pub fn signatures(&self) -> Option<&SignatureTable> {
        self.signatures.as_ref()
    }

    /// Girth of the simple underlying graph; `None` for forests.
    pub fn girth(&self) -> Option<usize> {
        self.girth
    }

    pub fn has_walls(&self) -> bool {
        self.signatures.is_some()
    }

    /// Member edges of every wall, indexed by base edge.
    pub fn walls(&self) -> Result<Vec<Vec<usize>>> {
        if !self.has_walls() {
            return Err(Error::NoWallStructure);
        }
        let mut walls = vec![Vec::new(); self.base_edge_count];
        for (e, &b) in self.projection.iter().enumerate() {
            walls[b].push(e);
        }
        Ok(walls)
    }

    /// Crossing-parity signatures relative to another base vertex.
    pub fn signatures_from(&self, base: usize) -> Result<SignatureTable> {
        if !self.has_walls() {
            return Err(Error::NoWallStructure);
        }
        signatures_by_bfs(&self.graph, &self.projection, self.base_edge_count, base)
    }
}

fn signatures_by_bfs(
    graph: &LabeledMultigraph,
    projection: &[usize],
    bits: usize,
    base: usize,
) -> Result<SignatureTable> {
    let n = graph.vertex_count();
    let mut sig = SignatureTable::zeros(n, bits);
    let mut seen = vec![false; n];
    seen[base] = true;
    let mut queue = VecDeque::from([base]);
    while let Some(u) = queue.pop_front() {
        for &(v, e) in graph.neighbors(u) {
            if !seen[v] {
                seen[v] = true;
                sig.copy_flip(u, v, projection[e]);
                queue.push_back(v);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::Disconnected { components: graph.components().1 });
    }
    // Every edge must change exactly its own coordinate; otherwise some
    // closed walk would cross a wall an odd number of times.
    for (e, &(u, v, _)) in graph.edges().iter().enumerate() {
        let diff = sig.hamming(u, v);
        if diff != 1 || !(sig.bit(u, projection[e]) ^ sig.bit(v, projection[e])) {
            return Err(Error::Contract(format!("signatures inconsistent across edge {e} = ({u}, {v})")));
        }
    }
    Ok(sig)
}

/// Spanning tree by BFS from vertex 0 with edges scanned in index order.
/// Returns, per edge, `Some(j)` for the j-th non-tree edge and `None` for
/// tree edges.
fn non_tree_numbering(base: &LabeledMultigraph) -> Result<Vec<Option<usize>>> {
    base.check_connected()?;
    let n = base.vertex_count();
    let mut tree_edge = vec![false; base.edge_count()];
    if n > 0 {
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(u) = queue.pop_front() {
            for &(v, e) in base.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    tree_edge[e] = true;
                    queue.push_back(v);
                }
            }
        }
    }
    let mut next = 0;
    Ok(tree_edge
        .iter()
        .map(|&t| {
            if t {
                None
            } else {
                next += 1;
                Some(next - 1)
            }
        })
        .collect())
}

/// Number of vertices of the homology cover, if it fits in a u128.
pub fn cover_size(base: &LabeledMultigraph) -> Option<u128> {
    let d = base.cycle_rank();
    (base.vertex_count() as u128).checked_mul(1u128.checked_shl(d as u32).filter(|_| d < 128)?)
}

/// Maximal elementary abelian 2-cover of a connected graph.
///
/// Cover vertex `(v, c)` with `c ∈ F₂^d` has index `v·2^d + c`; the lift of
/// base edge `e` at sheet `c` has index `e·2^d + c` and flips coordinate `j`
/// of `c` when `e` is the j-th non-tree edge.
pub fn homology_cover(base: &LabeledMultigraph, level: usize, cap: usize) -> Result<TowerLevel> {
    let numbering = non_tree_numbering(base)?;
    let d = base.cycle_rank();
    let needed = cover_size(base);
    match needed {
        Some(n) if n <= cap as u128 => {}
        _ => {
            return Err(Error::CapExceeded {
                what: "homology cover vertices",
                needed: needed.unwrap_or(u128::MAX),
                cap: cap as u128,
            })
        }
    }
    let sheets = 1usize << d;
    let n = base.vertex_count() * sheets;
    let mut edges = Vec::with_capacity(base.edge_count() * sheets);
    let mut projection = Vec::with_capacity(base.edge_count() * sheets);
    for (e, &(u, v, label)) in base.edges().iter().enumerate() {
        let flip = numbering[e].map_or(0, |j| 1usize << j);
        for c in 0..sheets {
            edges.push((u * sheets + c, v * sheets + (c ^ flip), label));
            projection.push(e);
        }
    }
    let graph = LabeledMultigraph::new(n, edges)?;
    let signatures = signatures_by_bfs(&graph, &projection, base.edge_count(), 0)?;
    let mut out = TowerLevel::new(level, graph);
    out.base_edge_count = base.edge_count();
    out.projection = projection;
    out.signatures = Some(signatures);
    Ok(out)
}

/// Why a tower stopped before the requested depth.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Truncation {
    /// The level that could not be built.
    pub level: usize,
    pub base_vertices: usize,
    pub cycle_rank: usize,
    pub cap: usize,
}

impl Truncation {
    /// Human-readable size of the missing level, `V·2^d`.
    pub fn needed(&self) -> String {
        format!("{}*2^{}", self.base_vertices, self.cycle_rank)
    }
}

#[derive(Debug, Clone)]
pub struct Tower {
    pub rank: usize,
    pub levels: Vec<TowerLevel>,
    pub truncated: Option<Truncation>,
}

/// Levels `1..=depth` of the tower over the free group of rank `rank`,
/// stopping early (with a truncation marker) once a level would exceed
/// `cap` vertices.
pub fn build_tower(rank: usize, depth: usize, cap: usize) -> Result<Tower> {
    if rank == 0 {
        return Err(Error::Input("tower rank must be at least 1".into()));
    }
    if rank >= 16 {
        return Err(Error::CapExceeded { what: "tower rank", needed: rank as u128, cap: 15 });
    }
    let mut tower = Tower { rank, levels: Vec::new(), truncated: None };
    if depth == 0 {
        return Ok(tower);
    }
    if (1usize << rank) > cap {
        tower.truncated = Some(Truncation { level: 1, base_vertices: 1, cycle_rank: rank, cap });
        return Ok(tower);
    }
    let group = FiniteGroupTable::elementary_abelian_2(rank);
    let basis: Vec<usize> = (0..rank).map(|i| 1 << i).collect();
    let gens = Generators::new(&group, &basis)?;
    tower.levels.push(TowerLevel::new(1, cayley_multigraph(&group, &gens)));
    for level in 2..=depth {
        let base = tower.levels.last().expect("level 1 exists").graph();
        match homology_cover(base, level, cap) {
            Ok(next) => tower.levels.push(next),
            Err(Error::CapExceeded { .. }) => {
                tower.truncated = Some(Truncation {
                    level,
                    base_vertices: base.vertex_count(),
                    cycle_rank: base.cycle_rank(),
                    cap,
                });
                break;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(tower)
}

/// Number of walls separating `x` and `y`.
pub fn wall_metric(level: &TowerLevel, x: usize, y: usize) -> Result<u32> {
    let sig = level.signatures().ok_or(Error::NoWallStructure)?;
    let n = level.graph().vertex_count();
    if x >= n || y >= n {
        return Err(Error::Input(format!("vertex out of range 0..{n}")));
    }
    Ok(sig.hamming(x, y))
}

/// Each vertex mapped to its signature as a 0/1 vector, so that
/// `‖F(x) − F(y)‖² = d_W(x, y)`.
pub fn wall_embedding(level: &TowerLevel) -> Result<EmbeddingTable> {
    let sig = level.signatures().ok_or(Error::NoWallStructure)?;
    let points = (0..level.graph().vertex_count())
        .map(|v| (0..sig.bits()).map(|i| if sig.bit(v, i) { 1.0 } else { 0.0 }).collect())
        .collect();
    Ok(EmbeddingTable::single(points))
}

/// Number of components left after deleting each wall's edges.
pub fn wall_separation(level: &TowerLevel) -> Result<Vec<usize>> {
    let projection = level.projection();
    let walls = level.walls()?;
    Ok((0..walls.len())
        .map(|w| level.graph().components_avoiding(|e| projection[e] == w).1)
        .collect())
}

/// All-pairs comparison of the wall metric with the graph metric.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct WallMetricReport {
    pub level: usize,
    pub vertices: usize,
    pub girth: Option<usize>,
    pub pairs: u64,
    /// Pairs with `d_W > d`.
    pub upper_violations: u64,
    /// Pairs with `d < girth/2` but `d_W ≠ d`.
    pub below_half_girth_mismatches: u64,
    /// Pairs where `d ≤ girth` and `d_W ≤ girth` disagree.
    pub girth_scale_failures: u64,
    /// Largest `d` below which `d_W = d` holds for every pair.
    pub exact_radius: u32,
    pub diameter: u32,
}

pub fn wall_metric_report(level: &TowerLevel) -> Result<WallMetricReport> {
    let sig = level.signatures().ok_or(Error::NoWallStructure)?;
    let g = level.graph();
    let n = g.vertex_count();
    let mut report = WallMetricReport { level: level.level(), vertices: n, girth: level.girth(), ..Default::default() };
    let mut first_mismatch = u32::MAX;
    for x in 0..n {
        let dist = g.distances_from(x);
        for y in x + 1..n {
            let d = dist[y];
            debug_assert_ne!(d, UNREACHABLE);
            let dw = sig.hamming(x, y);
            report.pairs += 1;
            report.diameter = report.diameter.max(d);
            if dw > d {
                report.upper_violations += 1;
            }
            if dw != d {
                first_mismatch = first_mismatch.min(d);
                if let Some(girth) = level.girth() {
                    if 2 * (d as usize) < girth {
                        report.below_half_girth_mismatches += 1;
                    }
                }
            }
            if let Some(girth) = level.girth() {
                if (d as usize <= girth) != (dw as usize <= girth) {
                    report.girth_scale_failures += 1;
                }
            }
        }
    }
    report.exact_radius = first_mismatch.min(report.diameter + 1);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cayley_multigraph_examples() {
        let v4 = FiniteGroupTable::elementary_abelian_2(2);
        let g = cayley_multigraph(&v4, &Generators::new(&v4, &[1, 2]).unwrap());
        assert_eq!((g.vertex_count(), g.edge_count()), (4, 8));
        assert_eq!(g.cycle_rank(), 5);
        assert_eq!(g.regular_degree().unwrap(), 4);
        let trivial = FiniteGroupTable::trivial();
        let g = cayley_multigraph(&trivial, &Generators::new(&trivial, &[]).unwrap());
        assert_eq!((g.vertex_count(), g.edge_count()), (1, 0));
        let z3 = FiniteGroupTable::cyclic(3);
        let g = cayley_multigraph(&z3, &Generators::new(&z3, &[1]).unwrap());
        assert_eq!((g.vertex_count(), g.edge_count()), (3, 3));
        assert_eq!(g.simple_girth(), Some(3));
    }

    #[test]
    fn cover_of_tree_is_the_tree() {
        let path = LabeledMultigraph::from_pairs(4, &[(0, 1), (1, 2), (1, 3)]).unwrap();
        let cover = homology_cover(&path, 2, 100).unwrap();
        assert_eq!(cover.graph(), &path);
    }

    #[test]
    fn cover_of_square_is_octagon() {
        let c4 = LabeledMultigraph::cycle(4);
        let cover = homology_cover(&c4, 2, 100).unwrap();
        let g = cover.graph();
        assert_eq!(g.vertex_count(), 8);
        assert_eq!(g.regular_degree().unwrap(), 2);
        assert!(g.is_connected());
        assert_eq!(g.simple_girth(), Some(8));
        // preimages of each base edge are antipodal
        let dist = g.all_pairs_distances();
        for wall in cover.walls().unwrap() {
            assert_eq!(wall.len(), 2);
            let (a, b) = (g.edge(wall[0]), g.edge(wall[1]));
            assert_eq!(dist[a.0][b.0].min(dist[a.0][b.1]), 3);
        }
        for x in 0..8 {
            for y in 0..8 {
                assert_eq!(wall_metric(&cover, x, y).unwrap(), dist[x][y]);
            }
        }
        let emb = wall_embedding(&cover).unwrap();
        let antipode = (0..8).find(|&y| dist[0][y] == 4).unwrap();
        assert_eq!(emb.distance(0, 0, antipode), 2.0);
    }

    #[test]
    fn disconnected_base_rejected() {
        let g = LabeledMultigraph::from_pairs(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(matches!(homology_cover(&g, 2, 100), Err(Error::Disconnected { .. })));
    }

    #[test]
    fn level_one_has_no_walls() {
        let tower = build_tower(2, 1, DEFAULT_TOWER_CAP).unwrap();
        assert!(matches!(wall_metric(&tower.levels[0], 0, 1), Err(Error::NoWallStructure)));
        assert!(wall_embedding(&tower.levels[0]).is_err());
    }

    #[test]
    fn rank_two_sizes_and_truncation() {
        let tower = build_tower(2, 3, DEFAULT_TOWER_CAP).unwrap();
        assert_eq!(tower.levels.len(), 2);
        assert_eq!(tower.levels[0].graph().vertex_count(), 4);
        assert_eq!(tower.levels[1].graph().vertex_count(), 128);
        assert_eq!(tower.levels[0].girth(), Some(4));
        assert_eq!(tower.levels[1].girth(), Some(4));
        let t = tower.truncated.unwrap();
        assert_eq!((t.level, t.base_vertices, t.cycle_rank), (3, 128, 129));
    }

    #[test]
    fn base_change_is_a_global_xor() {
        let tower = build_tower(2, 2, DEFAULT_TOWER_CAP).unwrap();
        let level = &tower.levels[1];
        let s0 = level.signatures().unwrap();
        let s5 = level.signatures_from(5).unwrap();
        let mask: Vec<u64> = s0.row(0).iter().zip(s5.row(0)).map(|(a, b)| a ^ b).collect();
        for v in 0..level.graph().vertex_count() {
            let m: Vec<u64> = s0.row(v).iter().zip(s5.row(v)).map(|(a, b)| a ^ b).collect();
            assert_eq!(m, mask);
            for w in 0..level.graph().vertex_count() {
                assert_eq!(s0.hamming(v, w), s5.hamming(v, w));
            }
        }
    }

    #[test]
    fn signature_csv_shape() {
        let tower = build_tower(1, 2, 100).unwrap();
        let csv = tower.levels[1].signatures().unwrap().to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "vertex,bit_0,bit_1");
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[1], "0,0,0");
    }

    #[test]
    fn walls_separate_in_two() {
        for (rank, depth) in [(1, 8), (2, 2)] {
            let tower = build_tower(rank, depth, DEFAULT_TOWER_CAP).unwrap();
            for level in tower.levels.iter().skip(1) {
                assert!(wall_separation(level).unwrap().iter().all(|&c| c == 2));
            }
        }
    }
}
