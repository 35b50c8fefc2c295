use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::embedding::{euclidean, EmbeddingTable};
use crate::error::{Error, Result};
use crate::graph::{LabeledMultigraph, UNREACHABLE};

/// Below this many points the triangle inequality is checked on every triple.
pub const EXHAUSTIVE_TRIANGLE_MAX: usize = 200;
/// Up to this many points it is checked on sampled triples.
pub const SAMPLED_TRIANGLE_MAX: usize = 2000;
const TRIANGLE_SAMPLES: usize = 200_000;

/// A finite metric space with integer distances, indexed `0..len()`.
pub trait FiniteMetric {
    fn len(&self) -> usize;
    fn dist(&self, x: usize, y: usize) -> u64;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// One of the spaces `X_n` in a coarse union.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MetricComponent {
    label: String,
    point_count: usize,
    #[serde(skip)]
    dist: Vec<u32>,
    basepoint: usize,
    diameter: u32,
}

impl MetricComponent {
    /// Validates symmetry, zero diagonal, positivity and (for at most
    /// [`SAMPLED_TRIANGLE_MAX`] points) the triangle inequality.
    pub fn new(label: impl Into<String>, rows: Vec<Vec<u32>>, basepoint: usize) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::NotAMetric("empty space".into()));
        }
        if basepoint >= n {
            return Err(Error::Input(format!("basepoint {basepoint} out of range for {n} points")));
        }
        let mut dist = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotAMetric(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            dist.extend_from_slice(row);
        }
        let out = Self::from_flat(label.into(), n, dist, basepoint);
        out.validate()?;
        Ok(out)
    }

    /// Graph metric of a connected multigraph.
    pub fn from_graph(label: impl Into<String>, graph: &LabeledMultigraph, basepoint: usize) -> Result<Self> {
        graph.check_connected()?;
        let n = graph.vertex_count();
        if basepoint >= n {
            return Err(Error::Input(format!("basepoint {basepoint} out of range for {n} points")));
        }
        let mut dist = Vec::with_capacity(n * n);
        for v in 0..n {
            dist.extend(graph.distances_from(v));
        }
        debug_assert!(!dist.contains(&UNREACHABLE));
        Ok(Self::from_flat(label.into(), n, dist, basepoint))
    }

    fn from_flat(label: String, point_count: usize, dist: Vec<u32>, basepoint: usize) -> Self {
        let diameter = dist.iter().copied().max().unwrap_or(0);
        Self { label, point_count, dist, basepoint, diameter }
    }

    fn validate(&self) -> Result<()> {
        let n = self.point_count;
        for x in 0..n {
            if self.d(x, x) != 0 {
                return Err(Error::NotAMetric(format!("d({x},{x}) = {}", self.d(x, x))));
            }
            for y in x + 1..n {
                if self.d(x, y) != self.d(y, x) {
                    return Err(Error::NotAMetric(format!("d({x},{y}) != d({y},{x})")));
                }
                if self.d(x, y) == 0 {
                    return Err(Error::NotAMetric(format!("d({x},{y}) = 0 for distinct points")));
                }
            }
        }
        let check = |x: usize, y: usize, z: usize| -> Result<()> {
            if self.d(x, z) > self.d(x, y) + self.d(y, z) {
                return Err(Error::NotAMetric(format!("triangle inequality fails at ({x},{y},{z})")));
            }
            Ok(())
        };
        if n < EXHAUSTIVE_TRIANGLE_MAX {
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        check(x, y, z)?;
                    }
                }
            }
        } else if n <= SAMPLED_TRIANGLE_MAX {
            let mut rng = ChaCha8Rng::seed_from_u64(0x7219);
            for _ in 0..TRIANGLE_SAMPLES {
                check(rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n))?;
            }
        }
        Ok(())
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn basepoint(&self) -> usize {
        self.basepoint
    }

    pub fn diameter(&self) -> u32 {
        self.diameter
    }

    pub fn d(&self, x: usize, y: usize) -> u32 {
        self.dist[x * self.point_count + y]
    }

    pub fn row(&self, x: usize) -> &[u32] {
        &self.dist[x * self.point_count..(x + 1) * self.point_count]
    }
}

impl FiniteMetric for MetricComponent {
    fn len(&self) -> usize {
        self.point_count
    }

    fn dist(&self, x: usize, y: usize) -> u64 {
        self.d(x, y) as u64
    }
}

/// Coarse disjoint union of `X_1, X_2, …` with cross distances routed
/// through basepoints: `d_n(x, b_n) + K_n + K_m + d_m(y, b_m)` where
/// `K_n = 2ⁿ + max_{j≤n} diam(X_j)`.
#[derive(Debug, Clone, Serialize)]
pub struct CoarseUnion {
    components: Vec<MetricComponent>,
    offsets: Vec<u64>,
    #[serde(skip)]
    starts: Vec<usize>,
}

pub fn coarse_union(components: Vec<MetricComponent>) -> Result<CoarseUnion> {
    if components.is_empty() {
        return Err(Error::Input("coarse union of an empty list".into()));
    }
    if components.len() > 60 {
        return Err(Error::CapExceeded { what: "coarse union components", needed: components.len() as u128, cap: 60 });
    }
    let mut offsets = Vec::with_capacity(components.len());
    let mut max_diam = 0u64;
    let mut starts = Vec::with_capacity(components.len() + 1);
    let mut total = 0;
    for (i, c) in components.iter().enumerate() {
        max_diam = max_diam.max(c.diameter() as u64);
        offsets.push((1u64 << (i + 1)) + max_diam);
        starts.push(total);
        total += c.len();
    }
    starts.push(total);
    Ok(CoarseUnion { components, offsets, starts })
}

impl CoarseUnion {
    pub fn components(&self) -> &[MetricComponent] {
        &self.components
    }

    /// `K_n` for the 1-based component index `n`, stored at `n − 1`.
    pub fn offsets(&self) -> &[u64] {
        &self.offsets
    }

    /// Global index of point `x` of component `c` (0-based).
    pub fn global(&self, c: usize, x: usize) -> usize {
        self.starts[c] + x
    }

    /// Component (0-based) and local index of a global point.
    pub fn locate(&self, g: usize) -> (usize, usize) {
        let c = self.starts.partition_point(|&s| s <= g) - 1;
        (c, g - self.starts[c])
    }

    pub fn distance(&self, (n, x): (usize, usize), (m, y): (usize, usize)) -> u64 {
        if n == m {
            return self.components[n].d(x, y) as u64;
        }
        let (cn, cm) = (&self.components[n], &self.components[m]);
        cn.d(x, cn.basepoint()) as u64 + self.offsets[n] + self.offsets[m] + cm.d(y, cm.basepoint()) as u64
    }

    /// Checks `|2ⁿ − 2ᵐ| ≤ d(x, y)` on every cross-component pair.
    pub fn check_scale_axiom(&self) -> AxiomReport {
        let mut report = AxiomReport::default();
        for n in 0..self.components.len() {
            for m in n + 1..self.components.len() {
                let gap = (1u64 << (m + 1)) - (1u64 << (n + 1));
                for x in 0..self.components[n].len() {
                    for y in 0..self.components[m].len() {
                        report.pairs += 1;
                        let d = self.distance((n, x), (m, y));
                        report.min_slack = report.min_slack.min(d as i64 - gap as i64);
                        if d < gap {
                            report.violations += 1;
                        }
                    }
                }
            }
        }
        report
    }

    /// The sets `U_{n,m}(R) = {x ∈ X_n : d(x, X_m) ≤ R}` that are non-empty,
    /// computed by brute force over cross pairs.
    pub fn neighbourhood_sets(&self, r: u64) -> BoundednessReport {
        let k = self.components.len();
        let mut sets = Vec::new();
        for n in 0..k {
            for m in 0..k {
                if n == m {
                    continue;
                }
                let members: Vec<usize> = (0..self.components[n].len())
                    .filter(|&x| (0..self.components[m].len()).any(|y| self.distance((n, x), (m, y)) <= r))
                    .collect();
                if members.is_empty() {
                    continue;
                }
                let c = &self.components[n];
                let diameter = members
                    .iter()
                    .flat_map(|&x| members.iter().map(move |&y| c.d(x, y)))
                    .max()
                    .unwrap_or(0);
                sets.push(NeighbourhoodSet { n: n + 1, m: m + 1, size: members.len(), diameter });
            }
        }
        // Every non-empty set must involve only components with 2ⁿ ≤ R.
        let unexpected = sets.iter().filter(|s| (1u64 << s.n.max(s.m)) > r).count();
        BoundednessReport { r, sets, unexpected }
    }

    /// Sampled triangle inequality check on global points.
    pub fn spot_check_triangle(&self, samples: usize, seed: u64) -> usize {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = self.len();
        (0..samples)
            .filter(|_| {
                let (x, y, z) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                self.dist(x, z) > self.dist(x, y) + self.dist(y, z)
            })
            .count()
    }
}

impl FiniteMetric for CoarseUnion {
    fn len(&self) -> usize {
        *self.starts.last().expect("starts is never empty")
    }

    fn dist(&self, x: usize, y: usize) -> u64 {
        self.distance(self.locate(x), self.locate(y))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub pairs: u64,
    pub violations: u64,
    /// Smallest `d(x, y) − |2ⁿ − 2ᵐ|` seen.
    pub min_slack: i64,
}

impl Default for AxiomReport {
    fn default() -> Self {
        Self { pairs: 0, violations: 0, min_slack: i64::MAX }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NeighbourhoodSet {
    pub n: usize,
    pub m: usize,
    pub size: usize,
    pub diameter: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundednessReport {
    pub r: u64,
    pub sets: Vec<NeighbourhoodSet>,
    /// Non-empty sets between components with `2^max(n,m) > R`.
    pub unexpected: usize,
}

/// Embedding of a coarse union: `F(n, x) = F_n(x) ⊕ 2ⁿ`, with components
/// padded to a common dimension. Points are in global order.
pub fn hilbert_union(space: &CoarseUnion, table: &EmbeddingTable) -> Result<Vec<Vec<f64>>> {
    if table.component_count() != space.components().len() {
        return Err(Error::Input(format!(
            "embedding has {} components, union has {}",
            table.component_count(),
            space.components().len()
        )));
    }
    let dim = table.components().iter().flatten().map(Vec::len).max().unwrap_or(0);
    let mut out = Vec::with_capacity(space.len());
    for (n, comp) in space.components().iter().enumerate() {
        if table.points(n).len() != comp.len() {
            return Err(Error::Input(format!("embedding component {} does not cover its space", n + 1)));
        }
        for v in table.points(n) {
            let mut p = v.clone();
            p.resize(dim, 0.0);
            p.push((1u64 << (n + 1)) as f64);
            out.push(p);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProfileRow {
    pub t: u64,
    pub rho_minus: f64,
    pub rho_plus: f64,
}

/// Compression and dilatation of a map on the realised positive distances.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompressionProfile {
    pub rows: Vec<ProfileRow>,
}

/// `ρ₋(t) = min ‖F(x)−F(y)‖` over pairs with `d ≥ t` and `ρ₊(t) = max` over
/// pairs with `d ≤ t`, for every realised distance `t > 0`.
pub fn profile(space: &impl FiniteMetric, points: &[Vec<f64>]) -> Result<CompressionProfile> {
    let n = space.len();
    if points.len() != n {
        return Err(Error::Input(format!("embedding has {} points, space has {n}", points.len())));
    }
    let mut by_distance: std::collections::BTreeMap<u64, (f64, f64)> = Default::default();
    for x in 0..n {
        for y in x + 1..n {
            let d = space.dist(x, y);
            let e = euclidean(&points[x], &points[y]);
            let entry = by_distance.entry(d).or_insert((f64::INFINITY, 0.0));
            entry.0 = entry.0.min(e);
            entry.1 = entry.1.max(e);
        }
    }
    let mut rows: Vec<ProfileRow> =
        by_distance.iter().map(|(&t, &(lo, hi))| ProfileRow { t, rho_minus: lo, rho_plus: hi }).collect();
    for i in (0..rows.len().saturating_sub(1)).rev() {
        rows[i].rho_minus = rows[i].rho_minus.min(rows[i + 1].rho_minus);
    }
    for i in 1..rows.len() {
        rows[i].rho_plus = rows[i].rho_plus.max(rows[i - 1].rho_plus);
    }
    Ok(CompressionProfile { rows })
}

impl CompressionProfile {
    fn row_at(&self, t: u64) -> Option<&ProfileRow> {
        self.rows.binary_search_by_key(&t, |r| r.t).ok().map(|i| &self.rows[i])
    }

    /// `ρ₋` at a realised distance.
    pub fn lower(&self, t: u64) -> Option<f64> {
        self.row_at(t).map(|r| r.rho_minus)
    }

    /// `ρ₊` at a realised distance.
    pub fn upper(&self, t: u64) -> Option<f64> {
        self.row_at(t).map(|r| r.rho_plus)
    }

    /// Pairs violating `ρ₋(d) ≤ ‖F(x)−F(y)‖ ≤ ρ₊(d)`.
    pub fn check_pairs(&self, space: &impl FiniteMetric, points: &[Vec<f64>]) -> usize {
        let mut bad = 0;
        for x in 0..space.len() {
            for y in x + 1..space.len() {
                let d = space.dist(x, y);
                let e = euclidean(&points[x], &points[y]);
                match self.row_at(d) {
                    Some(r) if r.rho_minus <= e && e <= r.rho_plus => {}
                    _ => bad += 1,
                }
            }
        }
        bad
    }

    pub fn is_monotone(&self) -> bool {
        self.rows.windows(2).all(|w| w[0].rho_minus <= w[1].rho_minus && w[0].rho_plus <= w[1].rho_plus)
            && self.rows.iter().all(|r| r.rho_minus <= r.rho_plus)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,rho_minus,rho_plus\n");
        for r in &self.rows {
            out.push_str(&format!("{},{},{}\n", r.t, r.rho_minus, r.rho_plus));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> MetricComponent {
        let rows = (0..n).map(|i| (0..n).map(|j| i.abs_diff(j) as u32).collect()).collect();
        MetricComponent::new(format!("P{n}"), rows, 0).unwrap()
    }

    #[test]
    fn rejects_non_metrics() {
        assert!(MetricComponent::new("x", vec![vec![0, 1], vec![2, 0]], 0).is_err());
        assert!(MetricComponent::new("x", vec![vec![1]], 0).is_err());
        let bad = vec![vec![0, 1, 5], vec![1, 0, 1], vec![5, 1, 0]];
        assert!(matches!(MetricComponent::new("x", bad, 0), Err(Error::NotAMetric(_))));
        assert!(MetricComponent::new("x", vec![vec![0]], 1).is_err());
    }

    #[test]
    fn one_point_components() {
        let p = || MetricComponent::new("pt", vec![vec![0]], 0).unwrap();
        let u = coarse_union(vec![p(), p()]).unwrap();
        assert_eq!(u.dist(0, 1), 6);
        assert!(coarse_union(vec![]).is_err());
    }

    #[test]
    fn single_component_is_isometric() {
        let c = path(5);
        let u = coarse_union(vec![c.clone()]).unwrap();
        for x in 0..5 {
            for y in 0..5 {
                assert_eq!(u.dist(x, y), c.dist(x, y));
            }
        }
    }

    #[test]
    fn union_axioms_on_paths() {
        let u = coarse_union((1..=6).map(path).collect()).unwrap();
        let rep = u.check_scale_axiom();
        assert_eq!(rep.violations, 0);
        assert_eq!(u.spot_check_triangle(20_000, 1), 0);
        for (n, m) in [(0, 1), (2, 5)] {
            let d = u.distance((n, 0), (m, 0));
            assert!(d >= (1 << (n + 1)) + (1 << (m + 1)));
        }
        for r in [1, 10, 100] {
            assert_eq!(u.neighbourhood_sets(r).unexpected, 0);
        }
        assert!(u.neighbourhood_sets(1).sets.is_empty());
        assert_eq!(u.locate(u.global(3, 2)), (3, 2));
    }

    #[test]
    fn identity_and_constant_profiles() {
        let c = path(6);
        let pts: Vec<Vec<f64>> = (0..6).map(|i| vec![i as f64]).collect();
        let p = profile(&c, &pts).unwrap();
        assert!(p.rows.iter().all(|r| r.rho_minus == r.t as f64 && r.rho_plus == r.t as f64));
        assert_eq!(p.check_pairs(&c, &pts), 0);
        let zero = vec![vec![0.0]; 6];
        let p = profile(&c, &zero).unwrap();
        assert!(p.rows.iter().all(|r| r.rho_minus == 0.0 && r.rho_plus == 0.0));
        assert!(p.is_monotone());
        assert!(profile(&c, &zero[..3]).is_err());
    }

    #[test]
    fn graph_components_and_union_embedding() {
        let g = LabeledMultigraph::cycle(8);
        let c = MetricComponent::from_graph("C8", &g, 0).unwrap();
        assert_eq!(c.diameter(), 4);
        let u = coarse_union(vec![c.clone(), c]).unwrap();
        let table = EmbeddingTable::new(vec![vec![vec![0.0]; 8], vec![vec![1.0, 2.0]; 8]]);
        let pts = hilbert_union(&u, &table).unwrap();
        assert_eq!(pts.len(), 16);
        assert!(pts.iter().all(|p| p.len() == 3));
        assert_eq!(pts[8][2], 4.0);
    }
}
