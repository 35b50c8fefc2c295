//! End-to-end acceptance checks. Each test prints one PASS/FAIL line.

use std::io::Write;
use std::time::{Duration, Instant};

use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use boxlab::baumslag::{faithfulness_report, schreier_graph, sigma, TruncatedWordSet, DEFAULT_WORD_CAP};
use boxlab::bass_serre::{qi_report, DEFAULT_TREE_CAP};
use boxlab::expansion::{cheeger_exact, cheeger_spectral, folner_series, monotonicity_sweep, sweep_generating_sets};
use boxlab::graph::LabeledMultigraph;
use boxlab::group::{group_library, FiniteGroupTable, FreeProduct, GeneratingSet, Generators};
use boxlab::metric::{
    assemble_direct_sum, coarse_union, direct_sum_families, extension_experiment, gaussian_family, glue_bound_check,
    glue_embeddings, induced_embedding, induced_report, CosetSection, MetricComponent, DEFAULT_LMAX, PSD_TOLERANCE,
    UNIT_TOLERANCE,
};
use boxlab::tower::{build_tower, cayley_multigraph, wall_embedding, wall_metric_report, wall_separation, DEFAULT_TOWER_CAP};
use boxlab::tree_partition::{
    check_decomposition, cluster_decomposition, lipschitz_report, partition_of_unity, random_tree_family,
    separated_cover_partition,
};

fn verdict(n: usize, name: &str, ok: bool, elapsed: Duration, limit: Option<Duration>, detail: String) {
    let in_time = limit.is_none_or(|l| elapsed < l);
    let status = if ok && in_time { "PASS" } else { "FAIL" };
    let line = format!("{status} criterion {n} ({name}): {detail}; {:.2}s\n", elapsed.as_secs_f64());
    let _ = std::io::stderr().write_all(line.as_bytes());
    assert!(ok, "criterion {n} failed: {detail}");
    assert!(in_time, "criterion {n} exceeded its time limit: {elapsed:?}");
}

fn z2_z3() -> FreeProduct {
    FreeProduct::new(FiniteGroupTable::cyclic(2), FiniteGroupTable::cyclic(3))
}

/// The map `i ↦ vertex reached after i label-0 steps from 0` is an
/// isomorphism from the cycle `0 → 1 → … → n−1 → 0`.
fn is_cycle_by_walk(g: &LabeledMultigraph) -> bool {
    let n = g.vertex_count();
    if g.edge_count() != n {
        return false;
    }
    let mut next = vec![usize::MAX; n];
    for &(u, v, label) in g.edges() {
        if label != 0 || next[u] != usize::MAX {
            return false;
        }
        next[u] = v;
    }
    let mut phi = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    let mut v = 0;
    for _ in 0..n {
        if seen[v] {
            return false;
        }
        seen[v] = true;
        phi.push(v);
        v = next[v];
    }
    if v != 0 {
        return false;
    }
    let key = |a: usize, b: usize| (a.min(b), a.max(b));
    let mut image: Vec<(usize, usize)> = (0..n).map(|i| key(phi[i], phi[(i + 1) % n])).collect();
    let mut actual: Vec<(usize, usize)> = g.edges().iter().map(|&(u, v, _)| key(u, v)).collect();
    image.sort_unstable();
    actual.sort_unstable();
    image == actual
}

#[test]
fn criterion_01_tower_girth() {
    let start = Instant::now();
    let rank1 = build_tower(1, 10, DEFAULT_TOWER_CAP).unwrap();
    let mut ok = rank1.levels.len() == 10 && rank1.truncated.is_none();
    for (i, level) in rank1.levels.iter().enumerate() {
        ok &= level.graph().vertex_count() == 1 << (i + 1) && is_cycle_by_walk(level.graph());
    }
    let rank2 = build_tower(2, 2, DEFAULT_TOWER_CAP).unwrap();
    let sizes: Vec<usize> = rank2.levels.iter().map(|l| l.graph().vertex_count()).collect();
    let girths: Vec<Option<usize>> = rank2.levels.iter().map(|l| l.girth()).collect();
    ok &= sizes == [4, 128] && girths == [Some(4), Some(4)];
    for level in &rank2.levels {
        let g = level.graph();
        let s = g.regular_degree().unwrap();
        ok &= g.edge_count() + 1 == g.vertex_count() + 1 + g.vertex_count() * (s / 2 - 1);
    }
    verdict(
        1,
        "tower girth",
        ok,
        start.elapsed(),
        Some(Duration::from_secs(5)),
        format!("rank-1 levels 1..10 are cycles; rank-2 sizes {sizes:?}, girths {girths:?}"),
    );
}

#[test]
fn criterion_02_wall_metric() {
    let start = Instant::now();
    let mut levels = build_tower(2, 2, DEFAULT_TOWER_CAP).unwrap().levels;
    levels.extend(build_tower(1, 8, DEFAULT_TOWER_CAP).unwrap().levels);
    let mut ok = true;
    let mut checked = 0;
    let mut pairs = 0;
    for level in levels.iter().filter(|l| l.has_walls()) {
        let rep = wall_metric_report(level).unwrap();
        let seps = wall_separation(level).unwrap();
        ok &= rep.upper_violations == 0 && rep.below_half_girth_mismatches == 0 && seps.iter().all(|&c| c == 2);
        checked += 1;
        pairs += rep.pairs;
    }
    ok &= checked == 8;
    verdict(
        2,
        "wall metric",
        ok,
        start.elapsed(),
        Some(Duration::from_secs(60)),
        format!("{checked} levels with walls, {pairs} pairs, d_W ≤ d and d_W = d below girth/2, walls split in 2"),
    );
}

#[test]
fn criterion_03_qi_inequality() {
    let start = Instant::now();
    let rep = qi_report(&z2_z3(), 5, DEFAULT_TREE_CAP).unwrap();
    let ok = rep.violations.is_empty() && rep.basis_displacement_failures.is_empty() && rep.rewrite_failures.is_empty();
    verdict(
        3,
        "QI inequality",
        ok,
        start.elapsed(),
        Some(Duration::from_secs(30)),
        format!(
            "{} elements of the radius-5 ball, {} violations, max d_T/ℓ = {}, max ℓ − d_T = {}",
            rep.elements,
            rep.violations.len(),
            rep.max_dt_over_length,
            rep.max_length_minus_dt
        ),
    );
}

#[test]
fn criterion_04_non_expansion() {
    let start = Instant::now();
    let g = z2_z3();
    let series = folner_series(&g, 2..=8, DEFAULT_WORD_CAP).unwrap();
    let mut ok = true;
    let mut ratios = Vec::new();
    for (a, b) in &series {
        ok &= a.boundary <= a.degree && b.boundary <= b.degree;
        ok &= a.set.len() + b.set.len() == a.words + 1;
        ratios.push(a.ratio);
    }
    ok &= ratios.windows(2).all(|w| w[1] < w[0]);
    let last = ratios.last().unwrap();
    ok &= *last < Ratio::new(1, 20);
    let gens = GeneratingSet::all_non_identity(&g);
    let mut cheeger_checked = Vec::new();
    for (a, _) in &series {
        if a.words <= 24 {
            let words = TruncatedWordSet::build(&g, a.k, DEFAULT_WORD_CAP).unwrap();
            let graph = schreier_graph(&sigma(&g, &words).unwrap(), &g, &gens);
            let h = cheeger_exact(&graph).unwrap().exact().unwrap();
            ok &= h <= a.ratio;
            cheeger_checked.push(format!("k={}: h={h}", a.k));
        }
    }
    ok &= !cheeger_checked.is_empty();
    let shown: Vec<String> = ratios.iter().map(|r| r.to_string()).collect();
    verdict(
        4,
        "non-expansion",
        ok,
        start.elapsed(),
        Some(Duration::from_secs(120)),
        format!("ratios {shown:?}, exact h {cheeger_checked:?}"),
    );
}

#[test]
fn criterion_05_cheeger() {
    let start = Instant::now();
    let h = |g: &LabeledMultigraph| cheeger_exact(g).unwrap().exact().unwrap();
    let mut ok = h(&LabeledMultigraph::cycle(4)) == Ratio::from_integer(1)
        && h(&LabeledMultigraph::cycle(8)) == Ratio::new(1, 2)
        && h(&LabeledMultigraph::complete(2)) == Ratio::from_integer(1);

    // Spectral intervals on every connected regular graph of the suite.
    let mut suite: Vec<LabeledMultigraph> = vec![
        LabeledMultigraph::cycle(4),
        LabeledMultigraph::cycle(8),
        LabeledMultigraph::complete(2),
        LabeledMultigraph::complete(5),
    ];
    for (_, grp) in group_library(16) {
        if grp.order() >= 2 {
            for gens in sweep_generating_sets(&grp) {
                suite.push(cayley_multigraph(&grp, &gens));
            }
        }
    }
    let g = z2_z3();
    let gens = GeneratingSet::all_non_identity(&g);
    for k in 1..=3 {
        let words = TruncatedWordSet::build(&g, k, DEFAULT_WORD_CAP).unwrap();
        suite.push(schreier_graph(&sigma(&g, &words).unwrap(), &g, &gens));
    }
    let mut intervals = 0;
    for graph in suite.iter().filter(|g| g.vertex_count() <= 24) {
        let exact = h(graph);
        let value = *exact.numer() as f64 / *exact.denom() as f64;
        let (lo, hi) = cheeger_spectral(graph).unwrap().interval().unwrap();
        ok &= lo <= value + 1e-9 && value <= hi + 1e-9;
        intervals += 1;
    }
    let sweep = monotonicity_sweep(&group_library(16)).unwrap();
    ok &= sweep.failures.is_empty() && sweep.groups >= 25;
    verdict(
        5,
        "Cheeger machinery",
        ok,
        start.elapsed(),
        None,
        format!(
            "h(C4)=1, h(C8)=1/2, h(K2)=1; {intervals} spectral intervals; quotient sweep {} groups, {} checks, {} failures",
            sweep.groups,
            sweep.checks,
            sweep.failures.len()
        ),
    );
}

#[test]
fn criterion_06_extension() {
    let start = Instant::now();
    let r1 = extension_experiment(FiniteGroupTable::cyclic(2), FiniteGroupTable::cyclic(3), 1, 1_000_000, 1).unwrap();
    let r2 = extension_experiment(FiniteGroupTable::cyclic(2), FiniteGroupTable::cyclic(3), 2, 1_000_000, 2).unwrap();
    let ok = r1.order == 24 && r2.order == 768 && r1.passed() && r2.passed();
    verdict(
        6,
        "extension experiment",
        ok,
        start.elapsed(),
        Some(Duration::from_secs(120)),
        format!(
            "|G/M1| = {}, |G/M2| = {}, violations (lower, upper) = ({}, {}) and ({}, {}), max ℓ̄/ℓ_Comb = {}",
            r1.order,
            r2.order,
            r1.lower_violations,
            r1.upper_violations,
            r2.lower_violations,
            r2.upper_violations,
            r2.max_bar_over_comb
        ),
    );
}

#[test]
fn criterion_07_embedding_assembly() {
    let start = Instant::now();
    let mut ok = true;
    let mut levels = build_tower(1, 6, DEFAULT_TOWER_CAP).unwrap().levels;
    levels.extend(build_tower(2, 2, DEFAULT_TOWER_CAP).unwrap().levels);
    let mut min_eig = f64::INFINITY;
    let mut families = 0;
    for level in levels.iter().filter(|l| l.has_walls()) {
        let emb = wall_embedding(level).unwrap();
        for t in [0.01, 0.1, 1.0] {
            let fam = gaussian_family(emb.points(0), t).unwrap();
            ok &= fam.is_psd() && fam.max_diagonal_error() <= UNIT_TOLERANCE;
            min_eig = min_eig.min(fam.min_eigenvalue());
            families += 1;
        }
    }

    // Direct sum over the 128-vertex level with its wall embedding.
    let x2 = &levels.last().unwrap();
    let space = MetricComponent::from_graph("X2", x2.graph(), 0).unwrap();
    let base = wall_embedding(x2).unwrap();
    let fams = direct_sum_families(&space, base.points(0), DEFAULT_LMAX).unwrap();
    ok &= fams.iter().all(|f| f.is_psd());
    let ds = assemble_direct_sum(&space, &fams, 0).unwrap();
    ok &= ds.report.upper_violations == 0 && ds.report.lower_violations == 0;

    // Induced embedding from A4 to S4.
    let q = FiniteGroupTable::symmetric(4);
    let h = q.subgroups().into_iter().find(|s| s.len() == 12).unwrap();
    let sub_points: Vec<Vec<f64>> = (0..h.len()).map(|i| vec![i as f64 / 3.0, (i % 3) as f64]).collect();
    let phi = gaussian_family(&sub_points, 0.2).unwrap().coordinates();
    let gens = Generators::all(&q);
    let section = CosetSection::minimal(&q, &h, &gens).unwrap();
    let induced = induced_embedding(&q, &h, &phi, &section).unwrap();
    let ind = induced_report(&q, &h, &phi, &section, &induced);
    ok &= ind.passed(1e-12) && ind.cross_coset_pairs > 0;

    // Gluing on the 64-cycle level: a ball and its complement.
    let c64 = &levels[5];
    let space = MetricComponent::from_graph("X6", c64.graph(), 0).unwrap();
    let core: Vec<usize> = (0..64).filter(|&v| space.d(0, v) <= 10).collect();
    let rest: Vec<usize> = (0..64).filter(|&v| space.d(0, v) > 10).collect();
    let pou = separated_cover_partition(&space, &core, &[rest], 16).unwrap();
    let weights = pou.dense_weights();
    let xi = gaussian_family(wall_embedding(c64).unwrap().points(0), 0.0005).unwrap().coordinates();
    let locals: Vec<Vec<Option<Vec<f64>>>> = (0..pou.piece_count()).map(|_| xi.iter().cloned().map(Some).collect()).collect();
    let glued = glue_embeddings(&weights, &locals).unwrap();
    let probe = glue_bound_check(&space, &weights, &locals, &glued, 1, 1.0);
    let eps = probe.partition_eps.max(probe.local_eps);
    let glue = glue_bound_check(&space, &weights, &locals, &glued, 1, eps);
    ok &= glue.passed() && glue.pairs > 0;

    verdict(
        7,
        "embedding assembly",
        ok,
        start.elapsed(),
        None,
        format!(
            "{families} Gaussian families, min eigenvalue {min_eig:e} ≥ −{PSD_TOLERANCE:e}; direct sum {} pairs, max ‖ΔF‖ − d = {:.4}; \
             induced cross-coset |‖Δ‖² − 2| ≤ {:e}; glue ε = {eps:.4}, max distance {:.4} ≤ {:.4}, norm error {:e}",
            ds.report.pairs,
            ds.report.max_upper_excess,
            ind.cross_coset_max_error,
            glue.max_distance,
            eps + eps.sqrt(),
            glue.max_norm_error
        ),
    );
}

#[test]
fn criterion_08_tree_partitions() {
    let start = Instant::now();
    let trees = random_tree_family(50, 2, 2000, 5, 0x7ee5).unwrap();
    let mut ok = trees.iter().all(|t| t.max_degree() <= 5 && t.len() <= 2000);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = Vec::new();
    for l in [2u32, 4, 8] {
        let mut max_ratio = 0.0f64;
        for tree in &trees {
            let dec = cluster_decomposition(tree, l).unwrap();
            let rep = check_decomposition(tree, &dec);
            ok &= rep.passed();
            let pou = partition_of_unity(tree, &dec).unwrap();
            let lip = lipschitz_report(tree, &pou, 500, &mut rng);
            ok &= lip.violations == 0;
            max_ratio = max_ratio.max(lip.max_ratio);
        }
        worst.push(format!("L={l}: max ratio {max_ratio:.4} vs 40/L = {}", 40.0 / l as f64));
    }
    verdict(
        8,
        "tree partitions",
        ok,
        start.elapsed(),
        Some(Duration::from_secs(120)),
        format!("50 trees; {}", worst.join(", ")),
    );
}

#[test]
fn criterion_09_coarse_union() {
    let start = Instant::now();
    let tower = build_tower(1, 10, DEFAULT_TOWER_CAP).unwrap();
    let comps: Vec<MetricComponent> = tower
        .levels
        .iter()
        .map(|l| MetricComponent::from_graph(format!("X{}", l.level()), l.graph(), 0).unwrap())
        .collect();
    let union = coarse_union(comps).unwrap();
    let axiom = union.check_scale_axiom();
    let mut ok = axiom.violations == 0 && union.components().len() == 10;
    let mut sets = Vec::new();
    for r in [1, 10, 100] {
        let b = union.neighbourhood_sets(r);
        ok &= b.unexpected == 0;
        let max_diam = b.sets.iter().map(|s| s.diameter).max().unwrap_or(0);
        sets.push(format!("R={r}: {} non-empty, max diameter {max_diam}", b.sets.len()));
    }
    verdict(
        9,
        "coarse union axioms",
        ok,
        start.elapsed(),
        None,
        format!("{} cross pairs, min slack {}; {}", axiom.pairs, axiom.min_slack, sets.join(", ")),
    );
}

#[test]
fn criterion_10_faithfulness() {
    let start = Instant::now();
    let g = z2_z3();
    let mut ok = true;
    let mut checked = 0;
    for k in 1..=6 {
        let rep = faithfulness_report(&g, k, k, DEFAULT_WORD_CAP).unwrap();
        ok &= rep.passed();
        checked += rep.checked;
    }
    verdict(
        10,
        "Baumslag faithfulness",
        ok,
        start.elapsed(),
        None,
        format!("σ(k)(g)(e) = g on {checked} words for k = 1..6, injective on the ⌊k/2⌋ balls"),
    );
}
