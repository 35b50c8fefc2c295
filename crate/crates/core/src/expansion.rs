//! Cheeger constants of multigraphs, monotonicity under quotients, and
//! small-boundary witness sets in Baumslag Schreier graphs.

use nalgebra::{DMatrix, SymmetricEigen};
use num_rational::Ratio;
use serde::Serialize;

use crate::baumslag::{schreier_graph, sigma, TruncatedWordSet};
use crate::error::{Error, Result};
use crate::graph::LabeledMultigraph;
use crate::group::{Factor, FiniteGroupTable, FreeProduct, GeneratingSet, Generators};
use crate::tower::cayley_multigraph;

/// Largest vertex count accepted by the exhaustive Cheeger search.
pub const MAX_EXACT_VERTICES: usize = 24;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum CheegerValue {
    Exact(#[serde(serialize_with = "serialize_ratio")] Ratio<u64>),
    Interval { lower: f64, upper: f64, lambda: f64, degree: usize },
}

fn serialize_ratio<S: serde::Serializer>(r: &Ratio<u64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheegerResult {
    pub value: CheegerValue,
    /// A minimising vertex set (exact mode only).
    pub witness: Option<Vec<usize>>,
}

impl CheegerResult {
    pub fn exact(&self) -> Option<Ratio<u64>> {
        match self.value {
            CheegerValue::Exact(r) => Some(r),
            CheegerValue::Interval { .. } => None,
        }
    }

    pub fn interval(&self) -> Option<(f64, f64)> {
        match self.value {
            CheegerValue::Exact(_) => None,
            CheegerValue::Interval { lower, upper, .. } => Some((lower, upper)),
        }
    }
}

/// Exact Cheeger constant: minimum of `|∂S|/|S|` over non-empty `S` with
/// `|S| ≤ |V|/2`, by Gray-code enumeration of all subsets. Parallel edges
/// count with multiplicity; loops never lie on a boundary. The witness is
/// the first minimiser in Gray-code order.
pub fn cheeger_exact(graph: &LabeledMultigraph) -> Result<CheegerResult> {
    let n = graph.vertex_count();
    if n > MAX_EXACT_VERTICES {
        return Err(Error::TooLargeForExact { vertices: n, max: MAX_EXACT_VERTICES });
    }
    if n < 2 {
        return Err(Error::Input("Cheeger constant needs at least two vertices".into()));
    }
    // Non-loop neighbour masks with multiplicity.
    let nbrs: Vec<Vec<usize>> = (0..n)
        .map(|v| graph.neighbors(v).iter().map(|&(u, _)| u).filter(|&u| u != v).collect())
        .collect();
    let mut in_set = 0u32;
    let mut size = 0usize;
    let mut boundary: i64 = 0;
    let mut best: Option<(u64, u64, u32)> = None;
    for i in 1u64..(1u64 << n) {
        let v = i.trailing_zeros() as usize;
        let adding = in_set & (1 << v) == 0;
        for &u in &nbrs[v] {
            let u_in = in_set & (1 << u) != 0;
            boundary += if u_in == adding { -1 } else { 1 };
        }
        in_set ^= 1 << v;
        if adding {
            size += 1;
        } else {
            size -= 1;
        }
        if 2 * size <= n {
            let (b, s) = (boundary as u64, size as u64);
            let better = match best {
                None => true,
                Some((bb, bs, _)) => b * bs < bb * s,
            };
            if better {
                best = Some((b, s, in_set));
            }
        }
    }
    let (b, s, mask) = best.expect("some subset of size one exists");
    let witness = (0..n).filter(|&v| mask & (1 << v) != 0).collect();
    Ok(CheegerResult { value: CheegerValue::Exact(Ratio::new(b, s)), witness: Some(witness) })
}

/// `|∂S|/|S|` for a given vertex set.
pub fn boundary_ratio(graph: &LabeledMultigraph, set: &[usize]) -> Result<Ratio<u64>> {
    if set.is_empty() {
        return Err(Error::Input("empty vertex set".into()));
    }
    let mut mask = vec![false; graph.vertex_count()];
    for &v in set {
        mask[v] = true;
    }
    Ok(Ratio::new(graph.edge_boundary(&mask) as u64, set.len() as u64))
}

/// Adjacency matrix with multiplicities; a loop contributes 2 to its
/// diagonal entry so that row sums equal degrees.
pub fn adjacency_matrix(graph: &LabeledMultigraph) -> DMatrix<f64> {
    let n = graph.vertex_count();
    let mut a = DMatrix::zeros(n, n);
    for &(u, v, _) in graph.edges() {
        if u == v {
            a[(u, u)] += 2.0;
        } else {
            a[(u, v)] += 1.0;
            a[(v, u)] += 1.0;
        }
    }
    a
}

/// Second-smallest eigenvalue of the normalised Laplacian `I − A/d` of a
/// connected `d`-regular graph.
pub fn spectral_gap(graph: &LabeledMultigraph) -> Result<(usize, f64)> {
    let d = graph.regular_degree()?;
    graph.check_connected()?;
    let n = graph.vertex_count();
    if n < 2 || d == 0 {
        return Err(Error::Input("spectral gap needs at least two vertices and positive degree".into()));
    }
    let lap = DMatrix::identity(n, n) - adjacency_matrix(graph) / d as f64;
    let eig = SymmetricEigen::new(lap);
    let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    if values[0].abs() > 1e-9 {
        return Err(Error::Numerical(format!("smallest Laplacian eigenvalue is {} rather than 0", values[0])));
    }
    Ok((d, values[1].max(0.0)))
}

/// Cheeger interval `[dλ/2, d·√(2λ)]` for a connected regular graph.
pub fn cheeger_spectral(graph: &LabeledMultigraph) -> Result<CheegerResult> {
    let (d, lambda) = spectral_gap(graph)?;
    let df = d as f64;
    Ok(CheegerResult {
        value: CheegerValue::Interval { lower: df * lambda / 2.0, upper: df * (2.0 * lambda).sqrt(), lambda, degree: d },
        witness: None,
    })
}

/// Schreier multigraph on the right cosets `Hg`: for each free generator
/// `s` and each coset, an edge `Hg → Hgs`. Vertices are numbered by the
/// smallest element of the coset, in increasing order.
pub fn coset_schreier_graph(group: &FiniteGroupTable, subgroup: &[usize], gens: &Generators) -> Result<LabeledMultigraph> {
    group.check_subgroup(subgroup)?;
    let n = group.order();
    let mut coset_of = vec![usize::MAX; n];
    let mut count = 0;
    for g in 0..n {
        if coset_of[g] != usize::MAX {
            continue;
        }
        for &h in subgroup {
            coset_of[group.mul(h, g)] = count;
        }
        count += 1;
    }
    let reps: Vec<usize> = (0..count).map(|c| (0..n).find(|&g| coset_of[g] == c).expect("coset has members")).collect();
    let mut edges = Vec::new();
    for (label, &s) in gens.free_generators(group).iter().enumerate() {
        for (c, &g) in reps.iter().enumerate() {
            edges.push((c, coset_of[group.mul(g, s)], label as u32));
        }
    }
    LabeledMultigraph::new(count, edges)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotonicityReport {
    pub group_order: usize,
    pub subgroup_order: usize,
    #[serde(serialize_with = "serialize_ratio")]
    pub h_group: Ratio<u64>,
    /// `None` when the quotient has a single vertex.
    #[serde(serialize_with = "serialize_opt_ratio")]
    pub h_quotient: Option<Ratio<u64>>,
    pub holds: bool,
}

fn serialize_opt_ratio<S: serde::Serializer>(r: &Option<Ratio<u64>>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&r.to_string()),
        None => s.serialize_none(),
    }
}

/// Compares `h(Cay(G, S))` with `h` of the Schreier graph on `H\G`.
pub fn quotient_monotonicity_check(group: &FiniteGroupTable, subgroup: &[usize], gens: &Generators) -> Result<MonotonicityReport> {
    let quotient = coset_schreier_graph(group, subgroup, gens)?;
    let h_group = cheeger_exact(&cayley_multigraph(group, gens))?.exact().expect("exact mode");
    monotonicity_with(group.order(), subgroup.len(), h_group, &quotient)
}

fn monotonicity_with(order: usize, sub: usize, h_group: Ratio<u64>, quotient: &LabeledMultigraph) -> Result<MonotonicityReport> {
    let h_quotient = if quotient.vertex_count() >= 2 { cheeger_exact(quotient)?.exact() } else { None };
    let holds = h_quotient.is_none_or(|hq| h_group <= hq);
    Ok(MonotonicityReport { group_order: order, subgroup_order: sub, h_group, h_quotient, holds })
}

/// The fixed family of generating sets used in sweeps: every generating
/// set made of one or two inverse classes, plus all non-identity elements.
pub fn sweep_generating_sets(group: &FiniteGroupTable) -> Vec<Generators> {
    let classes: Vec<usize> = Generators::all(group).free_generators(group);
    let mut out: Vec<Generators> = Vec::new();
    let mut push = |elems: &[usize]| {
        let g = Generators::new(group, elems).expect("elements in range");
        if g.word_lengths(group).is_ok() && !out.contains(&g) {
            out.push(g);
        }
    };
    for (i, &x) in classes.iter().enumerate() {
        push(&[x]);
        for &y in &classes[i + 1..] {
            push(&[x, y]);
        }
    }
    push(&classes);
    out
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SweepSummary {
    pub groups: usize,
    pub checks: usize,
    pub failures: Vec<String>,
}

/// Runs the quotient monotonicity check over every subgroup and every
/// generating set of [`sweep_generating_sets`] for each named group.
pub fn monotonicity_sweep(groups: &[(String, FiniteGroupTable)]) -> Result<SweepSummary> {
    let mut summary = SweepSummary::default();
    for (name, g) in groups {
        if g.order() < 2 || g.order() > MAX_EXACT_VERTICES {
            continue;
        }
        summary.groups += 1;
        let subgroups = g.subgroups();
        for gens in sweep_generating_sets(g) {
            let h_group = cheeger_exact(&cayley_multigraph(g, &gens))?.exact().expect("exact mode");
            for h in &subgroups {
                let quotient = coset_schreier_graph(g, h, &gens)?;
                let r = monotonicity_with(g.order(), h.len(), h_group, &quotient)?;
                summary.checks += 1;
                if !r.holds {
                    summary.failures.push(format!("{name}: S={:?} H={h:?}: {} > {:?}", gens.elements(), r.h_group, r.h_quotient));
                }
            }
        }
    }
    Ok(summary)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FolnerWitness {
    pub k: usize,
    pub words: usize,
    pub side: Factor,
    /// Word indices of `P`: the identity and every word whose rightmost
    /// syllable lies in `side`.
    pub set: Vec<usize>,
    pub boundary: usize,
    #[serde(serialize_with = "serialize_ratio")]
    pub ratio: Ratio<u64>,
    /// `|S|` with involutions counted twice (the graph degree).
    pub degree: usize,
    /// `|S|` as a set.
    pub generators: usize,
    /// `ratio` when `|P| ≤ |U(k)|/2`, which then bounds `h` from above.
    #[serde(serialize_with = "serialize_opt_ratio")]
    pub h_upper: Option<Ratio<u64>>,
    /// Whether `|P| ≥ (|A|−1)^⌊k/2⌋·(|B|−1)^⌊k/2⌋`.
    pub size_lower_bound_holds: bool,
}

/// The small-boundary set `P` in the Schreier graph of `σ(k)` with
/// `S = (A ∖ {e}) ∪ (B ∖ {e})`.
pub fn folner_witness(group: &FreeProduct, k: usize, side: Factor, cap: usize) -> Result<FolnerWitness> {
    let words = TruncatedWordSet::build(group, k, cap)?;
    let rep = sigma(group, &words)?;
    let gens = GeneratingSet::all_non_identity(group);
    let graph = schreier_graph(&rep, group, &gens);
    folner_on(group, &words, &graph, &gens, side)
}

fn folner_on(
    group: &FreeProduct,
    words: &TruncatedWordSet,
    graph: &LabeledMultigraph,
    gens: &GeneratingSet,
    side: Factor,
) -> Result<FolnerWitness> {
    let set: Vec<usize> = words
        .words()
        .iter()
        .enumerate()
        .filter(|(_, w)| w.rightmost().is_none_or(|s| s.factor == side))
        .map(|(i, _)| i)
        .collect();
    let ratio = boundary_ratio(graph, &set)?;
    let boundary = *ratio.numer() as usize * set.len() / *ratio.denom() as usize;
    let degree = graph.regular_degree()?;
    let h_upper = (2 * set.len() <= words.len()).then_some(ratio);
    let half = (words.k() / 2) as u32;
    let bound = ((group.a().order() - 1) as u128).pow(half) * ((group.b().order() - 1) as u128).pow(half);
    Ok(FolnerWitness {
        k: words.k(),
        words: words.len(),
        side,
        boundary,
        ratio,
        degree,
        generators: gens.len(),
        h_upper,
        size_lower_bound_holds: set.len() as u128 >= bound,
        set,
    })
}

/// Witnesses for both sides at each `k`, built from one Schreier graph per `k`.
pub fn folner_series(group: &FreeProduct, ks: impl IntoIterator<Item = usize>, cap: usize) -> Result<Vec<(FolnerWitness, FolnerWitness)>> {
    let gens = GeneratingSet::all_non_identity(group);
    ks.into_iter()
        .map(|k| {
            let words = TruncatedWordSet::build(group, k, cap)?;
            let rep = sigma(group, &words)?;
            let graph = schreier_graph(&rep, group, &gens);
            Ok((folner_on(group, &words, &graph, &gens, Factor::A)?, folner_on(group, &words, &graph, &gens, Factor::B)?))
        })
        .collect()
}

/// The witness with the smaller set, side A on ties.
pub fn smaller_side(pair: &(FolnerWitness, FolnerWitness)) -> &FolnerWitness {
    if pair.1.set.len() < pair.0.set.len() {
        &pair.1
    } else {
        &pair.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baumslag::DEFAULT_WORD_CAP;

    fn r(a: u64, b: u64) -> Ratio<u64> {
        Ratio::new(a, b)
    }

    #[test]
    fn exact_examples() {
        let k2 = LabeledMultigraph::complete(2);
        assert_eq!(cheeger_exact(&k2).unwrap().exact(), Some(r(1, 1)));
        let c4 = cheeger_exact(&LabeledMultigraph::cycle(4)).unwrap();
        assert_eq!(c4.exact(), Some(r(1, 1)));
        let c8 = cheeger_exact(&LabeledMultigraph::cycle(8)).unwrap();
        assert_eq!(c8.exact(), Some(r(1, 2)));
        let w = c8.witness.unwrap();
        assert_eq!(w.len(), 4);
        assert_eq!(boundary_ratio(&LabeledMultigraph::cycle(8), &w).unwrap(), r(1, 2));
        assert!(matches!(cheeger_exact(&LabeledMultigraph::cycle(25)), Err(Error::TooLargeForExact { .. })));
    }

    /// Direct minimum over all subsets, recomputing each boundary.
    fn cheeger_oracle(g: &LabeledMultigraph) -> Ratio<u64> {
        let n = g.vertex_count();
        let mut best: Option<Ratio<u64>> = None;
        for mask in 1u32..(1 << n) {
            let size = mask.count_ones() as usize;
            if 2 * size > n {
                continue;
            }
            let inside: Vec<bool> = (0..n).map(|v| mask & (1 << v) != 0).collect();
            let val = Ratio::new(g.edge_boundary(&inside) as u64, size as u64);
            best = Some(best.map_or(val, |b| b.min(val)));
        }
        best.unwrap()
    }

    #[test]
    fn exact_matches_oracle_and_spectral_interval() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..60 {
            let n = rng.gen_range(2..11);
            // random 2r-regular multigraph from r random permutations
            let r_count = rng.gen_range(1..3);
            let mut pairs = Vec::new();
            for _ in 0..r_count {
                let mut p: Vec<usize> = (0..n).collect();
                for i in (1..n).rev() {
                    p.swap(i, rng.gen_range(0..=i));
                }
                pairs.extend((0..n).map(|v| (v, p[v])));
            }
            let g = LabeledMultigraph::from_pairs(n, &pairs).unwrap();
            let exact = cheeger_exact(&g).unwrap();
            assert_eq!(exact.exact().unwrap(), cheeger_oracle(&g));
            assert_eq!(boundary_ratio(&g, exact.witness.as_ref().unwrap()).unwrap(), exact.exact().unwrap());
            if g.is_connected() {
                let (lo, hi) = cheeger_spectral(&g).unwrap().interval().unwrap();
                let h = *exact.exact().unwrap().numer() as f64 / *exact.exact().unwrap().denom() as f64;
                assert!(lo <= h + 1e-9 && h <= hi + 1e-9, "{lo} {h} {hi}");
            }
        }
    }

    #[test]
    fn spectral_examples() {
        let (d, l) = spectral_gap(&LabeledMultigraph::cycle(4)).unwrap();
        assert_eq!(d, 2);
        assert!((l - 1.0).abs() < 1e-9);
        let (_, l) = spectral_gap(&LabeledMultigraph::cycle(8)).unwrap();
        assert!((l - (1.0 - std::f64::consts::FRAC_1_SQRT_2)).abs() < 1e-9);
        let (d, l) = spectral_gap(&LabeledMultigraph::complete(2)).unwrap();
        assert_eq!(d, 1);
        assert!((l - 2.0).abs() < 1e-9);
        let (lo, hi) = cheeger_spectral(&LabeledMultigraph::complete(2)).unwrap().interval().unwrap();
        assert!(lo <= 1.0 && 1.0 <= hi);
        let path = LabeledMultigraph::from_pairs(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(matches!(cheeger_spectral(&path), Err(Error::NotRegular(_))));
    }

    #[test]
    fn monotonicity_examples() {
        let z4 = FiniteGroupTable::cyclic(4);
        let gens = Generators::new(&z4, &[1]).unwrap();
        let trivial = quotient_monotonicity_check(&z4, &[0], &gens).unwrap();
        assert_eq!(Some(trivial.h_group), trivial.h_quotient);
        let r = quotient_monotonicity_check(&z4, &[0, 2], &gens).unwrap();
        assert_eq!((r.h_group, r.h_quotient), (Ratio::new(1, 1), Some(Ratio::new(2, 1))));
        assert!(r.holds);
        let v4 = FiniteGroupTable::elementary_abelian_2(2);
        let r = quotient_monotonicity_check(&v4, &[0, 1], &Generators::new(&v4, &[1, 2]).unwrap()).unwrap();
        assert!(r.holds);
        assert!(matches!(quotient_monotonicity_check(&z4, &[0, 1], &gens), Err(Error::NotSubgroup(_))));
    }

    #[test]
    fn small_sweep() {
        let lib: Vec<_> = crate::group::group_library(8);
        let s = monotonicity_sweep(&lib).unwrap();
        assert!(s.failures.is_empty(), "{:?}", s.failures);
        assert!(s.checks > 100);
    }

    #[test]
    fn folner_examples() {
        let g = FreeProduct::new(FiniteGroupTable::cyclic(2), FiniteGroupTable::cyclic(3));
        let series = folner_series(&g, 2..=8, DEFAULT_WORD_CAP).unwrap();
        let sizes: Vec<usize> = series.iter().map(|p| p.0.set.len()).collect();
        assert_eq!(sizes, [4, 6, 10, 14, 22, 30, 46]);
        for (a, b) in &series {
            assert_eq!(a.set.len() + b.set.len(), a.words + 1);
            assert!(a.boundary <= a.degree && b.boundary <= b.degree);
            assert_eq!(a.boundary, 2);
        }
        let b4 = folner_witness(&g, 4, Factor::B, DEFAULT_WORD_CAP).unwrap();
        assert_eq!(b4.ratio, r(2, 13));
        assert!(b4.ratio <= r(3, 4));
        let h = cheeger_exact(&{
            let u = TruncatedWordSet::build(&g, 3, 100).unwrap();
            schreier_graph(&sigma(&g, &u).unwrap(), &g, &GeneratingSet::all_non_identity(&g))
        })
        .unwrap()
        .exact()
        .unwrap();
        assert!(h <= series[1].0.h_upper.unwrap());
    }
}
