//! Annulus cluster decompositions of trees, their Lipschitz partitions of
//! unity, equi-exactness certificates, and partitions subordinate to
//! separated covers of finite metric spaces.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::LabeledMultigraph;
use crate::metric::{FiniteMetric, MetricComponent};

/// Rooted tree with constant-time distance queries (Euler tour plus a
/// sparse table for lowest common ancestors).
#[derive(Debug, Clone)]
pub struct Tree {
    adj: Vec<Vec<usize>>,
    root: usize,
    parent: Vec<usize>,
    depth: Vec<u32>,
    first: Vec<usize>,
    euler: Vec<usize>,
    sparse: Vec<Vec<usize>>,
}

impl Tree {
    pub fn from_edges(n: usize, edges: &[(usize, usize)], root: usize) -> Result<Self> {
        if n == 0 || root >= n {
            return Err(Error::Input(format!("root {root} invalid for a tree on {n} vertices")));
        }
        if edges.len() + 1 != n {
            return Err(Error::Input(format!("{} edges cannot form a tree on {n} vertices", edges.len())));
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n || u == v {
                return Err(Error::Input(format!("invalid tree edge ({u}, {v})")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut parent = vec![usize::MAX; n];
        let mut depth = vec![0u32; n];
        let mut first = vec![usize::MAX; n];
        let mut euler = Vec::with_capacity(2 * n);
        // Iterative DFS: (vertex, next neighbour position).
        let mut stack = vec![(root, 0usize)];
        parent[root] = root;
        first[root] = 0;
        euler.push(root);
        while let Some(&mut (v, ref mut pos)) = stack.last_mut() {
            if let Some(&u) = adj[v].get(*pos) {
                *pos += 1;
                if u == parent[v] {
                    continue;
                }
                if first[u] != usize::MAX {
                    return Err(Error::Input("edges contain a cycle".into()));
                }
                parent[u] = v;
                depth[u] = depth[v] + 1;
                first[u] = euler.len();
                euler.push(u);
                stack.push((u, 0));
            } else {
                stack.pop();
                if let Some(&(p, _)) = stack.last() {
                    euler.push(p);
                }
            }
        }
        if first.contains(&usize::MAX) {
            return Err(Error::Disconnected { components: 2 });
        }
        let mut sparse = vec![(0..euler.len()).collect::<Vec<usize>>()];
        let mut span = 1;
        while 2 * span <= euler.len() {
            let prev = sparse.last().expect("non-empty");
            let next: Vec<usize> = (0..=euler.len() - 2 * span)
                .map(|i| {
                    let (a, b) = (prev[i], prev[i + span]);
                    if depth[euler[a]] <= depth[euler[b]] {
                        a
                    } else {
                        b
                    }
                })
                .collect();
            sparse.push(next);
            span *= 2;
        }
        Ok(Self { adj, root, parent, depth, first, euler, sparse })
    }

    pub fn from_graph(graph: &LabeledMultigraph, root: usize) -> Result<Self> {
        let edges: Vec<(usize, usize)> = graph.edges().iter().map(|&(u, v, _)| (u, v)).collect();
        Self::from_edges(graph.vertex_count(), &edges, root)
    }

    /// The path `0 – 1 – … – (n−1)` rooted at 0.
    pub fn path(n: usize) -> Self {
        let edges: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_edges(n, &edges, 0).expect("paths are trees")
    }

    /// A centre 0 with `leaves` neighbours.
    pub fn star(leaves: usize) -> Self {
        let edges: Vec<(usize, usize)> = (1..=leaves).map(|i| (0, i)).collect();
        Self::from_edges(leaves + 1, &edges, 0).expect("stars are trees")
    }

    /// Complete binary tree of the given depth in heap order.
    pub fn binary(depth: u32) -> Self {
        let n = (1usize << (depth + 1)) - 1;
        let edges: Vec<(usize, usize)> = (1..n).map(|i| ((i - 1) / 2, i)).collect();
        Self::from_edges(n, &edges, 0).expect("binary trees are trees")
    }

    /// The same tree rooted elsewhere.
    pub fn rerooted(&self, root: usize) -> Result<Self> {
        Self::from_edges(self.len(), &self.edge_list(), root)
    }

    pub fn edge_list(&self) -> Vec<(usize, usize)> {
        (0..self.len()).filter(|&v| v != self.root).map(|v| (self.parent[v], v)).collect()
    }

    pub fn to_graph(&self) -> LabeledMultigraph {
        LabeledMultigraph::from_pairs(self.len(), &self.edge_list()).expect("tree edges in range")
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// `|v|`, the distance to the root.
    pub fn depth(&self, v: usize) -> u32 {
        self.depth[v]
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        (v != self.root).then_some(self.parent[v])
    }

    pub fn lca(&self, x: usize, y: usize) -> usize {
        let (mut i, mut j) = (self.first[x], self.first[y]);
        if i > j {
            std::mem::swap(&mut i, &mut j);
        }
        let level = (usize::BITS - 1 - (j - i + 1).leading_zeros()) as usize;
        let (a, b) = (self.sparse[level][i], self.sparse[level][j + 1 - (1 << level)]);
        let (a, b) = (self.euler[a], self.euler[b]);
        if self.depth[a] <= self.depth[b] {
            a
        } else {
            b
        }
    }

    pub fn dist(&self, x: usize, y: usize) -> u32 {
        self.depth[x] + self.depth[y] - 2 * self.depth[self.lca(x, y)]
    }

    /// Ancestor of `v` at depth `h ≤ |v|`.
    pub fn ancestor_at(&self, mut v: usize, h: u32) -> usize {
        while self.depth[v] > h {
            v = self.parent[v];
        }
        v
    }

    /// Exact diameter of a vertex subset by a double sweep.
    pub fn subset_diameter(&self, set: &[usize]) -> u32 {
        let Some(&start) = set.first() else { return 0 };
        let far = *set.iter().max_by_key(|&&v| self.dist(start, v)).expect("non-empty");
        set.iter().map(|&v| self.dist(far, v)).max().unwrap_or(0)
    }

    /// `d(x, T ∖ set)` for every `x ∈ set` (in the order of `set`), or `None`
    /// when `set` is the whole tree.
    fn distance_to_complement(&self, set: &[usize], inside: &mut [bool]) -> Option<Vec<u32>> {
        for &v in set {
            inside[v] = true;
        }
        let result = if set.len() == self.len() {
            None
        } else {
            let mut dist: std::collections::HashMap<usize, u32> = Default::default();
            let mut queue = VecDeque::new();
            for &v in set {
                if self.adj[v].iter().any(|&u| !inside[u]) {
                    dist.insert(v, 1);
                    queue.push_back(v);
                }
            }
            while let Some(v) = queue.pop_front() {
                let d = dist[&v];
                for &u in &self.adj[v] {
                    if inside[u] && !dist.contains_key(&u) {
                        dist.insert(u, d + 1);
                        queue.push_back(u);
                    }
                }
            }
            Some(set.iter().map(|v| dist[v]).collect())
        };
        for &v in set {
            inside[v] = false;
        }
        result
    }
}

impl FiniteMetric for Tree {
    fn len(&self) -> usize {
        self.adj.len()
    }

    fn dist(&self, x: usize, y: usize) -> u64 {
        Tree::dist(self, x, y) as u64
    }
}

/// A random tree on `n` vertices with maximum degree at most `max_degree`:
/// each new vertex attaches to a uniformly chosen vertex with spare degree.
pub fn random_tree(n: usize, max_degree: usize, rng: &mut impl Rng) -> Result<Tree> {
    if n == 0 || (n > 2 && max_degree < 2) || (n == 2 && max_degree < 1) {
        return Err(Error::Input(format!("no tree on {n} vertices has maximum degree {max_degree}")));
    }
    let mut degree = vec![0usize; n];
    let mut open: Vec<usize> = vec![0];
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    for v in 1..n {
        let i = rng.gen_range(0..open.len());
        let p = open[i];
        edges.push((p, v));
        degree[p] += 1;
        degree[v] = 1;
        if degree[p] == max_degree {
            open.swap_remove(i);
        }
        if max_degree > 1 {
            open.push(v);
        }
    }
    Tree::from_edges(n, &edges, 0)
}

/// `(x|y)_b = ½(|x| + |y| − d(x, y))`, an integer on trees.
pub fn gromov_product(tree: &Tree, base: usize, x: usize, y: usize) -> u32 {
    let twice = tree.dist(base, x) + tree.dist(base, y) - tree.dist(x, y);
    debug_assert_eq!(twice % 2, 0);
    twice / 2
}

/// Clusters `C_{k,i}` of the annuli `A_k = {x : kL ≤ |x| < (k+1)L}` under
/// `x ~ y ⇔ (x|y) ≥ L(k − ½)`, and their neighbourhoods
/// `W_{k,i} = {x : 2·d(x, C_{k,i}) < L}`. The tree's root is the basepoint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClusterDecomposition {
    pub l: u32,
    pub base: usize,
    pub annulus: Vec<u32>,
    pub cluster: Vec<usize>,
    pub clusters: Vec<Vec<usize>>,
    pub cluster_annulus: Vec<u32>,
    pub neighbourhoods: Vec<Vec<usize>>,
}

impl ClusterDecomposition {
    pub fn cluster_count(&self) -> usize {
        self.clusters.len()
    }

    /// Parity class (`k mod 2`) of a cluster.
    pub fn parity(&self, i: usize) -> u32 {
        self.cluster_annulus[i] % 2
    }
}

/// Smallest integer depth `h` with `h ≥ L(k − ½)`.
fn threshold(l: u32, k: u32) -> u32 {
    (l * (2 * k - 1)).div_ceil(2)
}

fn neighbourhood(tree: &Tree, set: &[usize], l: u32, mark: &mut [u32]) -> Vec<usize> {
    // mark[v] holds 1 + distance for visited vertices.
    let mut out: Vec<usize> = set.to_vec();
    let mut queue: VecDeque<usize> = set.iter().copied().collect();
    for &v in set {
        mark[v] = 1;
    }
    while let Some(v) = queue.pop_front() {
        let d = mark[v];
        // A neighbour at distance d (= mark) joins when 2d < L.
        if 2 * d >= l {
            continue;
        }
        for &u in tree.neighbors(v) {
            if mark[u] == 0 {
                mark[u] = d + 1;
                out.push(u);
                queue.push_back(u);
            }
        }
    }
    for &v in &out {
        mark[v] = 0;
    }
    out.sort_unstable();
    out
}

pub fn cluster_decomposition(tree: &Tree, l: u32) -> Result<ClusterDecomposition> {
    if l == 0 {
        return Err(Error::Input("scale L must be at least 1".into()));
    }
    let n = tree.len();
    let annulus: Vec<u32> = (0..n).map(|v| tree.depth(v) / l).collect();
    let mut key_to_cluster: std::collections::HashMap<(u32, usize), usize> = Default::default();
    let mut cluster = vec![0usize; n];
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    let mut cluster_annulus = Vec::new();
    for v in 0..n {
        let k = annulus[v];
        let anchor = if k == 0 { tree.root() } else { tree.ancestor_at(v, threshold(l, k)) };
        let id = *key_to_cluster.entry((k, anchor)).or_insert_with(|| {
            clusters.push(Vec::new());
            cluster_annulus.push(k);
            clusters.len() - 1
        });
        cluster[v] = id;
        clusters[id].push(v);
    }
    let mut mark = vec![0u32; n];
    let neighbourhoods = clusters.iter().map(|c| neighbourhood(tree, c, l, &mut mark)).collect();
    Ok(ClusterDecomposition { l, base: tree.root(), annulus, cluster, clusters, cluster_annulus, neighbourhoods })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecompositionReport {
    pub l: u32,
    pub clusters: usize,
    pub max_cluster_diameter: u32,
    /// Smallest distance between distinct clusters of one annulus.
    pub min_separation: Option<u32>,
    pub max_support_diameter: u32,
    /// Largest number of neighbourhoods containing one vertex.
    pub max_multiplicity: usize,
    /// Vertices lying in two neighbourhoods of the same parity.
    pub parity_overlaps: usize,
    /// Same-annulus pairs whose cluster membership disagrees with the relation.
    pub relation_failures: u64,
}

impl DecompositionReport {
    pub fn passed(&self) -> bool {
        self.max_cluster_diameter <= 3 * self.l
            && self.min_separation.is_none_or(|s| s >= self.l)
            && self.max_support_diameter <= 4 * self.l
            && self.parity_overlaps == 0
            && self.max_multiplicity <= 2
            && self.relation_failures == 0
    }
}

/// Checks the decomposition against its defining relation on every pair of
/// each annulus, and measures diameters, separation and overlaps.
pub fn check_decomposition(tree: &Tree, dec: &ClusterDecomposition) -> DecompositionReport {
    let l = dec.l;
    let mut by_annulus: Vec<Vec<usize>> = Vec::new();
    for (v, &k) in dec.annulus.iter().enumerate() {
        if by_annulus.len() <= k as usize {
            by_annulus.resize(k as usize + 1, Vec::new());
        }
        by_annulus[k as usize].push(v);
    }
    let mut min_separation: Option<u32> = None;
    let mut relation_failures = 0;
    for (k, members) in by_annulus.iter().enumerate() {
        let k = k as u32;
        for (i, &x) in members.iter().enumerate() {
            for &y in &members[i + 1..] {
                let related = k == 0 || 2 * tree.depth(tree.lca(x, y)) >= l * (2 * k - 1);
                let same = dec.cluster[x] == dec.cluster[y];
                if related != same {
                    relation_failures += 1;
                }
                if !same {
                    let d = tree.dist(x, y);
                    min_separation = Some(min_separation.map_or(d, |m| m.min(d)));
                }
            }
        }
    }
    let mut count = vec![[0usize; 2]; tree.len()];
    for (i, w) in dec.neighbourhoods.iter().enumerate() {
        for &v in w {
            count[v][dec.parity(i) as usize] += 1;
        }
    }
    DecompositionReport {
        l,
        clusters: dec.cluster_count(),
        max_cluster_diameter: dec.clusters.iter().map(|c| tree.subset_diameter(c)).max().unwrap_or(0),
        min_separation,
        max_support_diameter: dec.neighbourhoods.iter().map(|w| tree.subset_diameter(w)).max().unwrap_or(0),
        max_multiplicity: count.iter().map(|c| c[0] + c[1]).max().unwrap_or(0),
        parity_overlaps: count.iter().filter(|c| c[0] > 1 || c[1] > 1).count(),
        relation_failures,
    }
}

/// Weights `φ_i(x) = f_i(x) / Σ_j f_j(x)` with integer numerators
/// `f_i(x) = d(x, X ∖ W_i)`, or the scale `L` when `W_i` is everything.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartitionOfUnity {
    pub l: u32,
    /// Support `W_i` of each weight.
    pub supports: Vec<Vec<usize>>,
    /// Non-zero `(i, f_i(x))` at each vertex, ordered by `i`.
    pub numerators: Vec<Vec<(usize, u64)>>,
    pub denominators: Vec<u64>,
}

impl PartitionOfUnity {
    fn from_numerators(l: u32, supports: Vec<Vec<usize>>, n: usize, f: &[Vec<u64>]) -> Result<Self> {
        let mut numerators = vec![Vec::new(); n];
        for (i, (w, fi)) in supports.iter().zip(f).enumerate() {
            for (&v, &value) in w.iter().zip(fi) {
                if value > 0 {
                    numerators[v].push((i, value));
                }
            }
        }
        let denominators: Vec<u64> = numerators.iter().map(|row| row.iter().map(|&(_, f)| f).sum()).collect();
        if let Some(v) = denominators.iter().position(|&d| d == 0) {
            return Err(Error::Contract(format!("vertex {v} lies in no neighbourhood; weights are undefined")));
        }
        Ok(Self { l, supports, numerators, denominators })
    }

    pub fn len(&self) -> usize {
        self.denominators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.denominators.is_empty()
    }

    pub fn piece_count(&self) -> usize {
        self.supports.len()
    }

    pub fn weight(&self, x: usize, i: usize) -> Ratio<u64> {
        let f = self.numerators[x].iter().find(|&&(j, _)| j == i).map_or(0, |&(_, f)| f);
        Ratio::new(f, self.denominators[x])
    }

    /// Weights as floating point rows `[x][i]`.
    pub fn dense_weights(&self) -> Vec<Vec<f64>> {
        (0..self.len())
            .map(|x| {
                let mut row = vec![0.0; self.piece_count()];
                for &(i, f) in &self.numerators[x] {
                    row[i] = f as f64 / self.denominators[x] as f64;
                }
                row
            })
            .collect()
    }

    /// `Σ_i |φ_i(x) − φ_i(y)|` as an exact fraction.
    pub fn l1_difference(&self, x: usize, y: usize) -> Ratio<u64> {
        let (sx, sy) = (self.denominators[x] as u128, self.denominators[y] as u128);
        let (rx, ry) = (&self.numerators[x], &self.numerators[y]);
        let key = |r: Option<&(usize, u64)>| r.map_or(usize::MAX, |&(i, _)| i);
        let (mut i, mut j, mut total) = (0, 0, 0u128);
        while i < rx.len() || j < ry.len() {
            let (p, q) = (key(rx.get(i)), key(ry.get(j)));
            let mut a = 0;
            let mut b = 0;
            if p <= q {
                a = rx[i].1 as u128 * sy;
                i += 1;
            }
            if q <= p {
                b = ry[j].1 as u128 * sx;
                j += 1;
            }
            total += a.abs_diff(b);
        }
        let r = Ratio::new(total, sx * sy);
        Ratio::new(*r.numer() as u64, *r.denom() as u64)
    }
}

/// The partition of unity subordinate to the cluster neighbourhoods.
pub fn partition_of_unity(tree: &Tree, dec: &ClusterDecomposition) -> Result<PartitionOfUnity> {
    let mut inside = vec![false; tree.len()];
    let f: Vec<Vec<u64>> = dec
        .neighbourhoods
        .iter()
        .map(|w| match tree.distance_to_complement(w, &mut inside) {
            Some(d) => d.into_iter().map(u64::from).collect(),
            None => vec![dec.l as u64; w.len()],
        })
        .collect();
    PartitionOfUnity::from_numerators(dec.l, dec.neighbourhoods.clone(), tree.len(), &f)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LipschitzReport {
    pub l: u32,
    pub pairs: u64,
    /// Largest `Σ_i|φ_i(x) − φ_i(y)| / d(x, y)` seen.
    pub max_ratio: f64,
    /// Pairs with `L·Σ_i|Δφ_i| > 40·d`, checked exactly.
    pub violations: u64,
}

/// Lipschitz check on every edge and on `samples` random pairs.
pub fn lipschitz_report(tree: &Tree, pou: &PartitionOfUnity, samples: usize, rng: &mut impl Rng) -> LipschitzReport {
    let mut rep = LipschitzReport { l: pou.l, pairs: 0, max_ratio: 0.0, violations: 0 };
    let mut check = |x: usize, y: usize| {
        let d = tree.dist(x, y) as u64;
        if d == 0 {
            return;
        }
        let diff = pou.l1_difference(x, y);
        rep.pairs += 1;
        let ratio = *diff.numer() as f64 / (*diff.denom() as f64 * d as f64);
        rep.max_ratio = rep.max_ratio.max(ratio);
        if pou.l as u128 * *diff.numer() as u128 > 40 * d as u128 * *diff.denom() as u128 {
            rep.violations += 1;
        }
    };
    for (u, v) in tree.edge_list() {
        check(u, v);
    }
    let n = tree.len();
    for _ in 0..samples {
        check(rng.gen_range(0..n), rng.gen_range(0..n));
    }
    rep
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TreeCertificate {
    #[serde(rename = "L")]
    pub l: u32,
    #[serde(rename = "C")]
    pub c: u32,
    pub max_l1_ratio: f64,
    pub verified_pairs: u64,
}

/// Scale `L = ⌈40R/ε⌉` used by [`equi_exact_certificate`].
pub fn certificate_scale(r: u32, eps: f64) -> Result<u32> {
    if !(eps > 0.0 && eps.is_finite()) || r == 0 {
        return Err(Error::Input(format!("certificate needs R ≥ 1 and ε > 0, got R={r}, ε={eps}")));
    }
    let l = (40.0 * r as f64 / eps).ceil();
    if l > 1e6 {
        return Err(Error::CapExceeded { what: "certificate scale L", needed: l as u128, cap: 1_000_000 });
    }
    Ok((l as u32).max(1))
}

/// Certifies, with one scale `L = ⌈40R/ε⌉` and bound `C = 4L` for all trees,
/// that every partition has supports of diameter at most `C` and
/// `Σ_i|φ_i(x) − φ_i(y)| ≤ ε` whenever `d(x, y) ≤ R` (checked on every such pair).
pub fn equi_exact_certificate(trees: &[Tree], r: u32, eps: f64) -> Result<Vec<TreeCertificate>> {
    let l = certificate_scale(r, eps)?;
    let c = 4 * l;
    let eps_exact = Ratio::<BigInt>::from_float(eps).ok_or_else(|| Error::Input(format!("ε = {eps} is not finite")))?;
    trees
        .iter()
        .enumerate()
        .map(|(t, tree)| {
            let dec = cluster_decomposition(tree, l)?;
            let pou = partition_of_unity(tree, &dec)?;
            if let Some(w) = pou.supports.iter().find(|w| tree.subset_diameter(w) > c) {
                return Err(Error::Contract(format!("tree {t}: support of diameter {} exceeds C = {c}", tree.subset_diameter(w))));
            }
            let mut cert = TreeCertificate { l, c, max_l1_ratio: 0.0, verified_pairs: 0 };
            let mut dist = vec![u32::MAX; tree.len()];
            for x in 0..tree.len() {
                // Vertices within R of x, by a bounded BFS.
                let mut ball = vec![x];
                dist[x] = 0;
                let mut head = 0;
                while head < ball.len() {
                    let v = ball[head];
                    head += 1;
                    if dist[v] == r {
                        continue;
                    }
                    for &u in tree.neighbors(v) {
                        if dist[u] == u32::MAX {
                            dist[u] = dist[v] + 1;
                            ball.push(u);
                        }
                    }
                }
                for &y in &ball {
                    if y > x {
                        let diff = pou.l1_difference(x, y);
                        let exact = Ratio::new(BigInt::from(*diff.numer()), BigInt::from(*diff.denom()));
                        if exact > eps_exact {
                            return Err(Error::Contract(format!(
                                "tree {t}: pair ({x},{y}) at distance {} has ℓ¹ difference {diff} > ε = {eps}",
                                dist[y]
                            )));
                        }
                        cert.verified_pairs += 1;
                        let ratio = *diff.numer() as f64 / *diff.denom() as f64 / dist[y] as f64;
                        cert.max_l1_ratio = cert.max_l1_ratio.max(ratio);
                    }
                }
                for &v in &ball {
                    dist[v] = u32::MAX;
                }
            }
            Ok(cert)
        })
        .collect()
}

/// Two-family partition for a cover by a core `Z` and pieces `U_i` whose
/// remainders `U_i ∖ Z` are pairwise at least `L` apart. Supports are
/// `Z(L/2)` (index 0) and `(U_i ∖ Z)(L/2)` (index `i + 1`), with
/// `A(L/2) = {x : 2·d(x, A) < L}`.
pub fn separated_cover_partition(
    space: &MetricComponent,
    core: &[usize],
    pieces: &[Vec<usize>],
    l: u32,
) -> Result<PartitionOfUnity> {
    if l == 0 {
        return Err(Error::Input("scale L must be at least 1".into()));
    }
    let n = space.len();
    let mut in_core = vec![false; n];
    for &v in core {
        if v >= n {
            return Err(Error::Input(format!("core vertex {v} out of range")));
        }
        in_core[v] = true;
    }
    let mut covered = in_core.clone();
    let remainders: Vec<Vec<usize>> = pieces
        .iter()
        .map(|p| {
            p.iter()
                .copied()
                .filter(|&v| {
                    if v < n {
                        covered[v] = true;
                    }
                    v < n && !in_core[v]
                })
                .collect()
        })
        .collect();
    if let Some(v) = covered.iter().position(|&c| !c) {
        return Err(Error::Input(format!("vertex {v} is in neither the core nor any piece")));
    }
    for i in 0..remainders.len() {
        for j in i + 1..remainders.len() {
            for &x in &remainders[i] {
                for &y in &remainders[j] {
                    if space.d(x, y) < l {
                        return Err(Error::Contract(format!(
                            "pieces {i} and {j} are not {l}-separated: d({x},{y}) = {}",
                            space.d(x, y)
                        )));
                    }
                }
            }
        }
    }
    let grow = |set: &[usize]| -> Vec<usize> {
        if set.is_empty() {
            return Vec::new();
        }
        (0..n).filter(|&x| set.iter().any(|&c| 2 * space.d(x, c) < l)).collect()
    };
    let mut supports = vec![grow(core)];
    supports.extend(remainders.iter().map(|r| grow(r)));
    let f: Vec<Vec<u64>> = supports
        .iter()
        .map(|w| {
            let mut inside = vec![false; n];
            for &v in w {
                inside[v] = true;
            }
            let outside: Vec<usize> = (0..n).filter(|&v| !inside[v]).collect();
            w.iter()
                .map(|&x| outside.iter().map(|&y| space.d(x, y) as u64).min().unwrap_or(l as u64))
                .collect()
        })
        .collect();
    PartitionOfUnity::from_numerators(l, supports, n, &f)
}

/// A reproducible family of random trees with sizes in `min_size..=max_size`.
pub fn random_tree_family(count: usize, min_size: usize, max_size: usize, max_degree: usize, seed: u64) -> Result<Vec<Tree>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(min_size..=max_size);
            random_tree(n, max_degree, &mut rng)
        })
        .collect()
}
