//! Labelled multigraphs: Cayley, Schreier, cover and tree graphs.

use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Sentinel distance for unreachable vertices.
pub const UNREACHABLE: u32 = u32::MAX;

/// Undirected multigraph with labelled edges. Parallel edges and loops are
/// allowed. A loop adds 2 to the degree of its vertex and never lies on an
/// edge boundary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledMultigraph {
    vertex_count: usize,
    edges: Vec<(usize, usize, u32)>,
    /// `adjacency[v]` lists `(neighbour, edge index)`; loops appear twice.
    adjacency: Vec<Vec<(usize, usize)>>,
}

impl LabeledMultigraph {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize, u32)>) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); vertex_count];
        for (i, &(u, v, _)) in edges.iter().enumerate() {
            if u >= vertex_count || v >= vertex_count {
                return Err(Error::Input(format!(
                    "edge {i} = ({u}, {v}) has an endpoint outside 0..{vertex_count}"
                )));
            }
            adjacency[u].push((v, i));
            adjacency[v].push((u, i));
        }
        Ok(LabeledMultigraph { vertex_count, edges, adjacency })
    }

    /// Unlabelled graph from an edge list.
    pub fn from_pairs(vertex_count: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        Self::new(vertex_count, pairs.iter().map(|&(u, v)| (u, v, 0)).collect())
    }

    pub fn cycle(n: usize) -> Self {
        let pairs: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::from_pairs(n, &pairs).expect("cycle endpoints in range")
    }

    pub fn complete(n: usize) -> Self {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        Self::from_pairs(n, &pairs).expect("complete graph endpoints in range")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize, u32)] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> (usize, usize, u32) {
        self.edges[i]
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    /// The common degree, or an error naming a vertex that differs.
    pub fn regular_degree(&self) -> Result<usize> {
        let d = if self.vertex_count == 0 { 0 } else { self.degree(0) };
        match (0..self.vertex_count).find(|&v| self.degree(v) != d) {
            None => Ok(d),
            Some(v) => Err(Error::NotRegular(format!(
                "vertex 0 has degree {d}, vertex {v} has degree {}",
                self.degree(v)
            ))),
        }
    }

    /// Cycle rank `E − V + c` (number of independent cycles).
    pub fn cycle_rank(&self) -> usize {
        self.edges.len() + self.components().1 - self.vertex_count
    }

    /// BFS distances from `source`.
    pub fn distances_from(&self, source: usize) -> Vec<u32> {
        self.distances_from_avoiding(source, |_| false)
    }

    /// BFS distances from `source` ignoring edges for which `skip` holds.
    pub fn distances_from_avoiding(&self, source: usize, skip: impl Fn(usize) -> bool) -> Vec<u32> {
        let mut dist = vec![UNREACHABLE; self.vertex_count];
        dist[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for &(v, e) in &self.adjacency[u] {
                if dist[v] == UNREACHABLE && !skip(e) {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// All-pairs distance matrix, row-major.
    pub fn all_pairs_distances(&self) -> Vec<Vec<u32>> {
        (0..self.vertex_count).map(|v| self.distances_from(v)).collect()
    }

    /// Component id per vertex and the number of components.
    pub fn components(&self) -> (Vec<usize>, usize) {
        self.components_avoiding(|_| false)
    }

    /// Components after deleting the edges for which `skip` holds.
    pub fn components_avoiding(&self, skip: impl Fn(usize) -> bool) -> (Vec<usize>, usize) {
        let mut comp = vec![usize::MAX; self.vertex_count];
        let mut count = 0;
        for s in 0..self.vertex_count {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = count;
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &(v, e) in &self.adjacency[u] {
                    if comp[v] == usize::MAX && !skip(e) {
                        comp[v] = count;
                        stack.push(v);
                    }
                }
            }
            count += 1;
        }
        (comp, count)
    }

    pub fn is_connected(&self) -> bool {
        self.components().1 <= 1
    }

    pub fn check_connected(&self) -> Result<()> {
        match self.components().1 {
            0 | 1 => Ok(()),
            components => Err(Error::Disconnected { components }),
        }
    }

    /// Neighbour lists of the simple underlying graph (loops and repeated
    /// edges removed), sorted.
    pub fn simple_adjacency(&self) -> Vec<Vec<usize>> {
        self.adjacency
            .iter()
            .enumerate()
            .map(|(u, nbrs)| {
                let mut out: Vec<usize> = nbrs.iter().map(|&(v, _)| v).filter(|&v| v != u).collect();
                out.sort_unstable();
                out.dedup();
                out
            })
            .collect()
    }

    /// Girth of the simple underlying graph; `None` for forests.
    pub fn simple_girth(&self) -> Option<usize> {
        let adj = self.simple_adjacency();
        let n = self.vertex_count;
        let mut best = usize::MAX;
        let mut dist = vec![UNREACHABLE; n];
        let mut parent = vec![usize::MAX; n];
        for root in 0..n {
            dist.iter_mut().for_each(|d| *d = UNREACHABLE);
            dist[root] = 0;
            parent[root] = usize::MAX;
            let mut queue = VecDeque::from([root]);
            'bfs: while let Some(u) = queue.pop_front() {
                if 2 * dist[u] as usize + 1 >= best {
                    break;
                }
                for &v in &adj[u] {
                    if dist[v] == UNREACHABLE {
                        dist[v] = dist[u] + 1;
                        parent[v] = u;
                        queue.push_back(v);
                    } else if parent[u] != v {
                        best = best.min((dist[u] + dist[v] + 1) as usize);
                        if dist[v] <= dist[u] {
                            break 'bfs;
                        }
                    }
                }
            }
        }
        (best != usize::MAX).then_some(best)
    }

    /// Number of edges with exactly one endpoint in `set` (given as a mask).
    pub fn edge_boundary(&self, in_set: &[bool]) -> usize {
        self.edges.iter().filter(|&&(u, v, _)| in_set[u] != in_set[v]).count()
    }

    /// Serialises to the edge-list text format: a `graph V E` header, then
    /// one `u v label` line per edge.
    pub fn to_text(&self) -> String {
        let mut out = format!("graph {} {}\n", self.vertex_count, self.edges.len());
        for &(u, v, l) in &self.edges {
            let _ = writeln!(out, "{u} {v} {l}");
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (ln, header) = lines.next().ok_or(Error::Parse { line: 1, message: "empty graph file".into() })?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let (n, m) = match fields.as_slice() {
            ["graph", n, m] => match (n.parse::<usize>(), m.parse::<usize>()) {
                (Ok(n), Ok(m)) => (n, m),
                _ => return Err(Error::Parse { line: ln, message: format!("bad header `{header}`") }),
            },
            _ => return Err(Error::Parse { line: ln, message: format!("expected `graph V E`, got `{header}`") }),
        };
        let mut edges = Vec::with_capacity(m);
        for _ in 0..m {
            let (ln, line) = lines.next().ok_or(Error::Parse { line: ln, message: "edge list truncated".into() })?;
            let nums: Vec<&str> = line.split_whitespace().collect();
            let parsed = match nums.as_slice() {
                [u, v, l] => u.parse().ok().zip(v.parse().ok()).zip(l.parse().ok()),
                [u, v] => u.parse().ok().zip(v.parse().ok()).map(|p| (p, 0)),
                _ => None,
            };
            let ((u, v), l) = parsed.ok_or_else(|| Error::Parse { line: ln, message: format!("bad edge `{line}`") })?;
            edges.push((u, v, l));
        }
        if let Some((ln, extra)) = lines.next() {
            return Err(Error::Parse { line: ln, message: format!("unexpected trailing content `{extra}`") });
        }
        Self::new(n, edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_properties() {
        let c8 = LabeledMultigraph::cycle(8);
        assert_eq!(c8.regular_degree().unwrap(), 2);
        assert_eq!(c8.simple_girth(), Some(8));
        assert_eq!(c8.distances_from(0)[4], 4);
        assert_eq!(c8.cycle_rank(), 1);
    }

    #[test]
    fn girth_ignores_parallel_edges_and_loops() {
        let g = LabeledMultigraph::from_pairs(3, &[(0, 1), (0, 1), (1, 2), (2, 2)]).unwrap();
        assert_eq!(g.simple_girth(), None);
        assert_eq!(g.cycle_rank(), 2);
        assert_eq!(g.degree(2), 3);
        assert_eq!(LabeledMultigraph::complete(4).simple_girth(), Some(3));
        // Petersen graph has girth 5
        let mut pairs = Vec::new();
        for i in 0..5 {
            pairs.push((i, (i + 1) % 5));
            pairs.push((i, i + 5));
            pairs.push((i + 5, (i + 2) % 5 + 5));
        }
        assert_eq!(LabeledMultigraph::from_pairs(10, &pairs).unwrap().simple_girth(), Some(5));
    }

    /// Girth by brute force: shortest cycle through each edge of the
    /// simple graph, found by BFS with that edge removed.
    fn girth_oracle(g: &LabeledMultigraph) -> Option<usize> {
        let adj = g.simple_adjacency();
        let mut best = None::<usize>;
        for u in 0..g.vertex_count() {
            for &v in adj[u].iter().filter(|&&v| v > u) {
                let mut dist = vec![usize::MAX; g.vertex_count()];
                dist[u] = 0;
                let mut q = VecDeque::from([u]);
                while let Some(x) = q.pop_front() {
                    for &y in &adj[x] {
                        if (x == u && y == v) || dist[y] != usize::MAX {
                            continue;
                        }
                        dist[y] = dist[x] + 1;
                        q.push_back(y);
                    }
                }
                if dist[v] != usize::MAX {
                    let c = dist[v] + 1;
                    best = Some(best.map_or(c, |b| b.min(c)));
                }
            }
        }
        best
    }

    #[test]
    fn girth_matches_oracle_on_random_graphs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let n = rng.gen_range(2..14);
            let m = rng.gen_range(0..2 * n);
            let pairs: Vec<(usize, usize)> = (0..m).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect();
            let g = LabeledMultigraph::from_pairs(n, &pairs).unwrap();
            assert_eq!(g.simple_girth(), girth_oracle(&g), "{pairs:?}");
        }
    }

    #[test]
    fn text_round_trip() {
        let g = LabeledMultigraph::new(3, vec![(0, 1, 0), (1, 2, 1), (2, 2, 1)]).unwrap();
        assert_eq!(LabeledMultigraph::parse(&g.to_text()).unwrap(), g);
        assert!(LabeledMultigraph::parse("graph 2 1\n0 5 0\n").is_err());
        assert!(matches!(LabeledMultigraph::parse("graph 2 2\n0 1 0\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn components_and_boundary() {
        let g = LabeledMultigraph::from_pairs(4, &[(0, 1), (2, 3), (3, 3)]).unwrap();
        assert_eq!(g.components().1, 2);
        assert!(matches!(g.check_connected(), Err(Error::Disconnected { components: 2 })));
        assert_eq!(g.edge_boundary(&[true, false, false, false]), 1);
        assert_eq!(g.edge_boundary(&[false, false, false, true]), 1);
    }
}
