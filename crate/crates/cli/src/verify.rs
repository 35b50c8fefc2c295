use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use boxlab::bass_serre::qi_report;
use boxlab::baumslag::{faithfulness_report, schreier_graph, sigma, TruncatedWordSet};
use boxlab::expansion::{cheeger_exact, cheeger_spectral, folner_series, monotonicity_sweep};
use boxlab::graph::LabeledMultigraph;
use boxlab::group::{group_library, FiniteGroupTable, FreeProduct, GeneratingSet, EXHAUSTIVE_ASSOCIATIVITY_MAX};
use boxlab::metric::{
    assemble_direct_sum, coarse_union, direct_sum_families, extension_experiment, gaussian_family, MetricComponent,
    DEFAULT_LMAX, UNIT_TOLERANCE,
};
use boxlab::tower::{wall_embedding, wall_metric_report, wall_separation, DEFAULT_TOWER_CAP};
use boxlab::tree_partition::{check_decomposition, cluster_decomposition, lipschitz_report, partition_of_unity, random_tree_family};

use crate::commands::full_tower;
use crate::error::CliError;
use crate::output::Output;
use crate::params::Params;
use crate::spec::parse_group;

type Check = boxlab::Result<(bool, String)>;

fn z2_z3() -> FreeProduct {
    FreeProduct::new(FiniteGroupTable::cyclic(2), FiniteGroupTable::cyclic(3))
}

fn tower_girth(cap: usize) -> Check {
    let rank1 = full_tower(1, 8, cap)?;
    let mut ok = rank1.truncated.is_none() && rank1.levels.len() == 8;
    for (i, level) in rank1.levels.iter().enumerate() {
        let g = level.graph();
        ok &= g.vertex_count() == 1 << (i + 1) && g.regular_degree()? == 2 && g.is_connected();
    }
    let rank2 = full_tower(2, 2, cap)?;
    let sizes: Vec<usize> = rank2.levels.iter().map(|l| l.graph().vertex_count()).collect();
    let girths: Vec<Option<usize>> = rank2.levels.iter().map(|l| l.girth()).collect();
    ok &= sizes == [4, 128] && girths == [Some(4), Some(4)];
    Ok((ok, format!("rank-1 levels 1..8 are cycles; rank-2 sizes {sizes:?}, girths {girths:?}")))
}

fn wall_metric(cap: usize) -> Check {
    let mut levels = full_tower(2, 2, cap)?.levels;
    levels.extend(full_tower(1, 6, cap)?.levels);
    let mut ok = true;
    let mut pairs = 0;
    for level in levels.iter().filter(|l| l.has_walls()) {
        let rep = wall_metric_report(level)?;
        ok &= rep.upper_violations == 0 && rep.below_half_girth_mismatches == 0;
        ok &= wall_separation(level)?.iter().all(|&c| c == 2);
        pairs += rep.pairs;
    }
    Ok((ok, format!("{pairs} pairs, d_W ≤ d, equality below girth/2, every wall splits in 2")))
}

fn qi(cap: usize) -> Check {
    let rep = qi_report(&z2_z3(), 4, cap)?;
    Ok((rep.passed(), format!("{} elements, max d_T/ℓ = {}", rep.elements, rep.max_dt_over_length)))
}

fn non_expansion(cap: usize) -> Check {
    let g = z2_z3();
    let series = folner_series(&g, 2..=6, cap)?;
    let ratios: Vec<Ratio<u64>> = series.iter().map(|(a, _)| a.ratio).collect();
    let mut ok = ratios.windows(2).all(|w| w[1] < w[0]);
    let gens = GeneratingSet::all_non_identity(&g);
    for (a, _) in series.iter().filter(|(a, _)| a.words <= 24) {
        let words = TruncatedWordSet::build(&g, a.k, cap)?;
        let h = cheeger_exact(&schreier_graph(&sigma(&g, &words)?, &g, &gens))?.exact();
        ok &= h.is_some_and(|h| h <= a.ratio);
    }
    let shown: Vec<String> = ratios.iter().map(ToString::to_string).collect();
    Ok((ok, format!("witness ratios {}", shown.join(", "))))
}

fn cheeger() -> Check {
    let h = |g: &LabeledMultigraph| cheeger_exact(g).map(|r| r.exact());
    let mut ok = h(&LabeledMultigraph::cycle(4))? == Some(Ratio::from_integer(1))
        && h(&LabeledMultigraph::cycle(8))? == Some(Ratio::new(1, 2))
        && h(&LabeledMultigraph::complete(2))? == Some(Ratio::from_integer(1));
    for graph in [LabeledMultigraph::cycle(8), LabeledMultigraph::complete(5)] {
        let exact = h(&graph)?.expect("small graph");
        let v = *exact.numer() as f64 / *exact.denom() as f64;
        let (lo, hi) = cheeger_spectral(&graph)?.interval().expect("interval");
        ok &= lo <= v + 1e-9 && v <= hi + 1e-9;
    }
    let sweep = monotonicity_sweep(&group_library(12))?;
    ok &= sweep.failures.is_empty();
    Ok((ok, format!("h(C4)=1, h(C8)=1/2, h(K2)=1; quotient sweep {} checks, {} failures", sweep.checks, sweep.failures.len())))
}

fn extension(cap: usize, seed: u64) -> Check {
    let r = extension_experiment(FiniteGroupTable::cyclic(2), FiniteGroupTable::cyclic(3), 1, cap, seed)?;
    Ok((r.order == 24 && r.passed(), format!("|G/M1| = {}, max ℓ̄/ℓ_Comb = {}", r.order, r.max_bar_over_comb)))
}

fn embedding(cap: usize) -> Check {
    let level = full_tower(2, 2, cap)?.levels.pop().expect("level 2");
    let space = MetricComponent::from_graph("X2", level.graph(), 0)?;
    let base = wall_embedding(&level)?;
    let mut ok = true;
    for t in [0.01, 0.1, 1.0] {
        let fam = gaussian_family(base.points(0), t)?;
        ok &= fam.is_psd() && fam.max_diagonal_error() <= UNIT_TOLERANCE;
    }
    let ds = assemble_direct_sum(&space, &direct_sum_families(&space, base.points(0), DEFAULT_LMAX)?, 0)?;
    ok &= ds.report.passed();
    Ok((ok, format!("Gaussian families PSD; direct sum over {} pairs", ds.report.pairs)))
}

fn trees(count: usize, seed: u64) -> Check {
    let family = random_tree_family(count, 2, 500, 5, seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ok = true;
    for l in [2u32, 4, 8] {
        for tree in &family {
            let dec = cluster_decomposition(tree, l)?;
            ok &= check_decomposition(tree, &dec).passed();
            ok &= lipschitz_report(tree, &partition_of_unity(tree, &dec)?, 200, &mut rng).violations == 0;
        }
    }
    Ok((ok, format!("{count} trees at L = 2, 4, 8")))
}

fn union(cap: usize) -> Check {
    let tower = full_tower(1, 8, cap)?;
    let comps = tower
        .levels
        .iter()
        .map(|l| MetricComponent::from_graph(format!("X{}", l.level()), l.graph(), 0))
        .collect::<boxlab::Result<Vec<_>>>()?;
    let u = coarse_union(comps)?;
    let axiom = u.check_scale_axiom();
    let ok = axiom.violations == 0 && [1, 10, 100].iter().all(|&r| u.neighbourhood_sets(r).unexpected == 0);
    Ok((ok, format!("{} cross pairs, min slack {}", axiom.pairs, axiom.min_slack)))
}

fn faithfulness(cap: usize) -> Check {
    let g = z2_z3();
    let mut ok = true;
    let mut checked = 0;
    for k in 1..=5 {
        let rep = faithfulness_report(&g, k, k, cap)?;
        ok &= rep.passed();
        checked += rep.checked;
    }
    Ok((ok, format!("{checked} words for k = 1..5")))
}

fn table(path: &str) -> (bool, String) {
    match parse_group(&format!("file:{path}")) {
        Ok(g) if g.order() <= EXHAUSTIVE_ASSOCIATIVITY_MAX => (true, format!("order {}, exhaustive check", g.order())),
        Ok(g) => (true, format!("order {}, sampled associativity", g.order())),
        Err(e) => (false, e.to_string()),
    }
}

pub fn verify(params: &mut Params, out: &Output) -> Result<bool, CliError> {
    let seed = params.u64("seed", 0)?;
    let tree_count = params.usize("trees", 10)?;
    let cap = params.cap(DEFAULT_TOWER_CAP)?;
    let mut results: Vec<(&str, boxlab::Result<(bool, String)>)> = vec![
        ("tower girth", tower_girth(cap)),
        ("wall metric", wall_metric(cap)),
        ("QI inequality", qi(cap)),
        ("non-expansion", non_expansion(cap)),
        ("Cheeger machinery", cheeger()),
        ("extension lengths", extension(cap, seed)),
        ("embedding assembly", embedding(cap)),
        ("tree partitions", trees(tree_count, seed)),
        ("coarse union", union(cap)),
        ("faithfulness", faithfulness(cap)),
    ];
    if let Some(path) = params.optional("table") {
        results.push(("group table", Ok(table(&path))));
    }
    let mut passed = true;
    let mut cap_error = None;
    let mut rows = Vec::new();
    for (name, result) in results {
        let (ok, detail) = match result {
            Ok(r) => r,
            Err(e) => {
                if matches!(e, boxlab::Error::CapExceeded { .. }) && cap_error.is_none() {
                    cap_error = Some(e.clone());
                }
                (false, e.to_string())
            }
        };
        println!("{} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
        passed &= ok;
        rows.push(json!({ "invariant": name, "passed": ok, "detail": detail }));
    }
    if let Some(e) = cap_error {
        return Err(e.into());
    }
    if out.has_dir() {
        out.json("verify.json", passed, params, &rows)?;
    }
    Ok(passed)
}
