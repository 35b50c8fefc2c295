use std::fmt::Write as _;

use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use boxlab::bass_serre::{qi_report, tree_ball, DEFAULT_TREE_CAP};
use boxlab::baumslag::{
    faithfulness_report, quotient_order, schreier_graph, sigma, TruncatedWordSet, DEFAULT_ORDER_DEGREE_CAP,
    DEFAULT_WORD_CAP,
};
use boxlab::embedding::EmbeddingTable;
use boxlab::expansion::{
    cheeger_exact, cheeger_spectral, folner_series, folner_witness, monotonicity_sweep, quotient_monotonicity_check,
    smaller_side, CheegerResult, MAX_EXACT_VERTICES,
};
use boxlab::graph::LabeledMultigraph;
use boxlab::group::{group_library, Factor, FreeProduct, GeneratingSet, Generators};
use boxlab::metric::{
    assemble_direct_sum, coarse_union, direct_sum_families, extension_experiment, gaussian_family, hilbert_union,
    profile, FiniteMetric, MetricComponent, DEFAULT_LMAX,
};
use boxlab::tower::{
    build_tower, wall_embedding, wall_metric_report, wall_separation, Tower, TowerLevel, DEFAULT_TOWER_CAP,
};
use boxlab::tree_partition::{
    check_decomposition, cluster_decomposition, equi_exact_certificate, lipschitz_report, partition_of_unity,
    random_tree_family,
};

use crate::error::CliError;
use crate::output::Output;
use crate::params::Params;
use crate::spec::parse_group;

/// Largest level on which the all-pairs checks run.
pub const ALL_PAIRS_MAX_VERTICES: usize = 4096;
/// Largest space handed to the Gaussian-family eigensolver.
pub const EMBED_MAX_VERTICES: usize = 2048;
/// Largest order for which `group` lists all subgroups.
pub const SUBGROUP_LIST_MAX_ORDER: usize = 64;

fn free_product(params: &mut Params) -> Result<FreeProduct, CliError> {
    let a = parse_group(&params.string("a", "cyclic:2")?)?;
    let b = parse_group(&params.string("b", "cyclic:3")?)?;
    Ok(FreeProduct::new(a, b))
}

fn ratio_str(r: Ratio<u64>) -> String {
    r.to_string()
}

fn ratio_f64(r: Ratio<u64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

pub fn group(params: &mut Params, out: &Output) -> Result<bool, CliError> {
    let spec = params.required("spec")?;
    let g = parse_group(&spec)?;
    let mut orders = std::collections::BTreeMap::<usize, usize>::new();
    for x in 0..g.order() {
        *orders.entry(g.element_order(x)).or_default() += 1;
    }
    let subgroups = (g.order() <= SUBGROUP_LIST_MAX_ORDER).then(|| g.subgroups().len());
    if let Some(path) = params.optional("out") {
        let path = std::path::PathBuf::from(path);
        std::fs::write(&path, g.to_text()).map_err(|e| CliError::io(&path, e))?;
        println!("wrote {}", path.display());
    }
    let mut csv = String::from("element,order\n");
    for x in 0..g.order() {
        let _ = writeln!(csv, "{x},{}", g.element_order(x));
    }
    out.csv("group_elements.csv", &csv, params)?;
    let report = json!({
        "order": g.order(),
        "identity": g.identity(),
        "element_orders": orders,
        "subgroups": subgroups,
    });
    out.json("group.json", true, params, &report)?;
    Ok(true)
}

pub fn baumslag(params: &mut Params, out: &Output) -> Result<bool, CliError> {
    let g = free_product(params)?;
    let k = params.usize("k", 6)?;
    let radius = params.usize("radius", k)?;
    let mode = params.string("cheeger", "witness")?;
    let side = params.string("side", "auto")?;
    let cap = params.cap(DEFAULT_WORD_CAP)?;
    if !matches!(mode.as_str(), "witness" | "exact" | "none") {
        return Err(CliError::Config(format!("cheeger must be witness, exact or none, got {mode:?}")));
    }
    let side = match side.as_str() {
        "auto" => None,
        "A" | "a" => Some(Factor::A),
        "B" | "b" => Some(Factor::B),
        other => return Err(CliError::Config(format!("side must be A, B or auto, got {other:?}"))),
    };

    let faith = faithfulness_report(&g, k, radius, cap)?;
    let mut passed = faith.passed();
    let words = TruncatedWordSet::build(&g, k, cap)?;
    let rep = sigma(&g, &words)?;
    let order = quotient_order(&rep, DEFAULT_ORDER_DEGREE_CAP);

    let mut witnesses = Vec::new();
    let mut csv = String::from("k,words,side,set_size,boundary,ratio,h_upper,h_exact\n");
    if mode != "none" && k >= 2 {
        let chosen = match side {
            None => folner_series(&g, 2..=k, cap)?.iter().map(|p| smaller_side(p).clone()).collect::<Vec<_>>(),
            Some(f) => (2..=k).map(|j| folner_witness(&g, j, f, cap)).collect::<boxlab::Result<Vec<_>>>()?,
        };
        let gens = GeneratingSet::all_non_identity(&g);
        for w in chosen {
            let h_exact = if mode == "exact" && w.words <= MAX_EXACT_VERTICES {
                let wk = TruncatedWordSet::build(&g, w.k, cap)?;
                let graph = schreier_graph(&sigma(&g, &wk)?, &g, &gens);
                cheeger_exact(&graph)?.exact()
            } else {
                None
            };
            if let (Some(h), Some(u)) = (h_exact, w.h_upper) {
                passed &= h <= u;
            }
            passed &= w.boundary <= w.degree * w.set.len() && w.size_lower_bound_holds;
            let _ = writeln!(
                csv,
                "{},{},{},{},{},{},{},{}",
                w.k,
                w.words,
                w.side,
                w.set.len(),
                w.boundary,
                ratio_f64(w.ratio),
                w.h_upper.map(ratio_f64).map(|x| x.to_string()).unwrap_or_default(),
                h_exact.map(ratio_f64).map(|x| x.to_string()).unwrap_or_default(),
            );
            witnesses.push(json!({
                "k": w.k,
                "words": w.words,
                "side": w.side,
                "set_size": w.set.len(),
                "boundary": w.boundary,
                "ratio": ratio_str(w.ratio),
                "h_upper": w.h_upper.map(ratio_str),
                "h_exact": h_exact.map(ratio_str),
                "size_lower_bound_holds": w.size_lower_bound_holds,
            }));
        }
    }
    out.csv("baumslag_folner.csv", &csv, params)?;
    let report = json!({
        "k": k,
        "words": words.len(),
        "faithfulness": faith,
        "quotient_order": order,
        "folner": witnesses,
    });
    out.json("baumslag.json", passed, params, &report)?;
    Ok(passed)
}

fn expected_vertices(tower: &Tower, i: usize) -> Option<u128> {
    if i == 0 {
        return Some(1u128 << tower.rank);
    }
    let base = tower.levels[i - 1].graph();
    boxlab::tower::cover_size(base)
}

fn level_profile_csv(level: &TowerLevel) -> Result<String, CliError> {
    let space = MetricComponent::from_graph(format!("X{}", level.level()), level.graph(), 0)?;
    let emb = wall_embedding(level)?;
    Ok(profile(&space, emb.points(0))?.to_csv())
}

pub fn tower(params: &mut Params, out: &Output) -> Result<bool, CliError> {
    let rank = params.usize("rank", 2)?;
    let depth = params.usize("depth", 2)?;
    let signatures = params.flag("signatures")?;
    let cap = params.cap(DEFAULT_TOWER_CAP)?;
    let tower = build_tower(rank, depth, cap)?;
    let mut passed = tower.truncated.is_none();

    let mut girth_csv = String::from("level,vertices,edges,girth,cycle_rank,expected_vertices\n");
    let mut walls_csv = String::from("level,wall,components_after_removal\n");
    let mut metric_csv = String::from(
        "level,vertices,pairs,upper_violations,below_half_girth_mismatches,girth_scale_failures,exact_radius,diameter\n",
    );
    let mut levels = Vec::new();
    for (i, level) in tower.levels.iter().enumerate() {
        let g = level.graph();
        let expected = expected_vertices(&tower, i);
        passed &= expected == Some(g.vertex_count() as u128);
        let _ = writeln!(
            girth_csv,
            "{},{},{},{},{},{}",
            level.level(),
            g.vertex_count(),
            g.edge_count(),
            level.girth().map(|x| x.to_string()).unwrap_or_default(),
            g.cycle_rank(),
            expected.map(|x| x.to_string()).unwrap_or_default()
        );
        let mut entry = json!({
            "level": level.level(),
            "vertices": g.vertex_count(),
            "edges": g.edge_count(),
            "girth": level.girth(),
            "cycle_rank": g.cycle_rank(),
        });
        if level.has_walls() {
            let seps = wall_separation(level)?;
            passed &= seps.iter().all(|&c| c == 2);
            for (w, c) in seps.iter().enumerate() {
                let _ = writeln!(walls_csv, "{},{w},{c}", level.level());
            }
            entry["walls"] = json!(seps.len());
            if g.vertex_count() <= ALL_PAIRS_MAX_VERTICES {
                let rep = wall_metric_report(level)?;
                passed &= rep.upper_violations == 0 && rep.below_half_girth_mismatches == 0;
                let _ = writeln!(
                    metric_csv,
                    "{},{},{},{},{},{},{},{}",
                    rep.level,
                    rep.vertices,
                    rep.pairs,
                    rep.upper_violations,
                    rep.below_half_girth_mismatches,
                    rep.girth_scale_failures,
                    rep.exact_radius,
                    rep.diameter
                );
                entry["wall_metric"] = json!(rep);
                out.csv(&format!("tower_profile_level{}.csv", level.level()), &level_profile_csv(level)?, params)?;
            } else {
                entry["wall_metric"] = json!(format!("skipped: more than {ALL_PAIRS_MAX_VERTICES} vertices"));
            }
            if signatures {
                if let Some(sig) = level.signatures() {
                    out.csv(&format!("tower_signatures_level{}.csv", level.level()), &sig.to_csv(), params)?;
                }
            }
        }
        levels.push(entry);
    }
    out.csv("tower_girth.csv", &girth_csv, params)?;
    out.csv("tower_walls.csv", &walls_csv, params)?;
    out.csv("tower_wall_metric.csv", &metric_csv, params)?;
    let truncated = tower.truncated.as_ref().map(|t| json!({ "truncation": t, "needed": t.needed() }));
    if let Some(t) = &tower.truncated {
        eprintln!("tower truncated at level {}: needs {} vertices, cap {}", t.level, t.needed(), t.cap);
    }
    let report = json!({ "rank": rank, "depth": depth, "levels": levels, "truncated": truncated });
    out.json("tower.json", passed, params, &report)?;
    Ok(passed)
}

pub fn bassserre(params: &mut Params, out: &Output) -> Result<bool, CliError> {
    let g = free_product(params)?;
    let radius = params.usize("radius", 4)?;
    let qi_radius = params.usize("qi_radius", 4)?;
    let cap = params.cap(DEFAULT_TREE_CAP)?;
    let ball = tree_ball(&g, radius, cap)?;
    let graph = &ball.graph;
    let is_tree = graph.is_connected() && graph.edge_count() + 1 == graph.vertex_count();
    let bipartite = graph.edges().iter().all(|&(u, v, _)| ball.vertices[u].side != ball.vertices[v].side);
    out.csv("bassserre_vertices.csv", &ball.sidecar_csv(), params)?;
    let mut edges = String::from("source,target,edge_word\n");
    for &(u, v, label) in graph.edges() {
        let _ = writeln!(edges, "{u},{v},{}", ball.edge_words[label as usize]);
    }
    out.csv("bassserre_edges.csv", &edges, params)?;
    let qi = qi_report(&g, qi_radius, cap)?;
    let passed = is_tree && bipartite && qi.passed();
    let report = json!({
        "radius": radius,
        "vertices": graph.vertex_count(),
        "edges": graph.edge_count(),
        "is_tree": is_tree,
        "bipartite": bipartite,
        "qi": qi,
    });
    out.json("bassserre.json", passed, params, &report)?;
    Ok(passed)
}

fn index_list(raw: &str, key: &str) -> Result<Vec<usize>, CliError> {
    raw.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse().map_err(|_| CliError::Config(format!("parameter {key} has invalid entry {s:?}"))))
        .collect()
}

fn cheeger_json(graph: &LabeledMultigraph) -> Result<(Value, bool), CliError> {
    let exact: Option<CheegerResult> = if graph.vertex_count() <= MAX_EXACT_VERTICES {
        Some(cheeger_exact(graph)?)
    } else {
        None
    };
    let spectral = cheeger_spectral(graph)?;
    let (lo, hi) = spectral.interval().expect("spectral estimator returns an interval");
    let h = exact.as_ref().and_then(CheegerResult::exact);
    let consistent = h.is_none_or(|h| {
        let v = ratio_f64(h);
        lo <= v + 1e-9 && v <= hi + 1e-9
    });
    let value = json!({
        "vertices": graph.vertex_count(),
        "exact": h.map(ratio_str),
        "witness": exact.and_then(|e| e.witness),
        "spectral_lower": lo,
        "spectral_upper": hi,
        "consistent": consistent,
    });
    Ok((value, consistent))
}

pub fn cheeger(params: &mut Params, out: &Output) -> Result<bool, CliError> {
    let mut report = serde_json::Map::new();
    let mut passed = true;
    let graph_file = params.optional("graph");
    let cycle = params.optional("cycle");
    let group_spec = params.optional("group");
    let sweep = params.optional("sweep");
    if graph_file.is_none() && cycle.is_none() && group_spec.is_none() && sweep.is_none() {
        return Err(CliError::Config("cheeger needs one of graph, cycle, group or sweep".into()));
    }
    if let Some(path) = graph_file {
        let path = std::path::PathBuf::from(path);
        let text = std::fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
        let (v, ok) = cheeger_json(&LabeledMultigraph::parse(&text)?)?;
        passed &= ok;
        report.insert("graph".into(), v);
    }
    if cycle.is_some() {
        let n = params.usize("cycle", 0)?;
        if n < 3 {
            return Err(CliError::Config(format!("cycle length must be at least 3, got {n}")));
        }
        let (v, ok) = cheeger_json(&LabeledMultigraph::cycle(n))?;
        passed &= ok;
        report.insert("cycle".into(), v);
    }
    if let Some(spec) = group_spec {
        let g = parse_group(&spec)?;
        let gens = match params.optional("gens") {
            Some(raw) => Generators::new(&g, &index_list(&raw, "gens")?)?,
            None => Generators::all(&g),
        };
        let graph = boxlab::tower::cayley_multigraph(&g, &gens);
        let (v, ok) = cheeger_json(&graph)?;
        passed &= ok;
        report.insert("cayley".into(), v);
        if let Some(raw) = params.optional("subgroup") {
            let h = index_list(&raw, "subgroup")?;
            let m = quotient_monotonicity_check(&g, &h, &gens)?;
            passed &= m.holds;
            report.insert(
                "quotient".into(),
                json!({
                    "group_order": m.group_order,
                    "subgroup_order": m.subgroup_order,
                    "h_group": ratio_str(m.h_group),
                    "h_quotient": m.h_quotient.map(ratio_str),
                    "holds": m.holds,
                }),
            );
        }
    }
    if sweep.is_some() {
        let max_order = params.usize("sweep", 16)?;
        let s = monotonicity_sweep(&group_library(max_order))?;
        passed &= s.failures.is_empty();
        report.insert("sweep".into(), json!(s));
    }
    out.json("cheeger.json", passed, params, &Value::Object(report))?;
    Ok(passed)
}

/// Levels `1..=depth`, failing with a cap error instead of truncating.
pub fn full_tower(rank: usize, depth: usize, cap: usize) -> boxlab::Result<Tower> {
    let tower = build_tower(rank, depth, cap)?;
    if let Some(t) = &tower.truncated {
        let needed = (t.base_vertices as u128).saturating_mul(1u128.checked_shl(t.cycle_rank as u32).unwrap_or(u128::MAX));
        return Err(boxlab::Error::CapExceeded { what: "tower level vertices", needed, cap: t.cap as u128 });
    }
    Ok(tower)
}

fn tower_level(rank: usize, level: usize, cap: usize) -> Result<TowerLevel, CliError> {
    Ok(full_tower(rank, level, cap)?.levels.pop().expect("depth is at least 1"))
}

pub fn embed(params: &mut Params, out: &Output) -> Result<bool, CliError> {
    let rank = params.usize("rank", 2)?;
    let level_no = params.usize("level", 2)?;
    let ts: Vec<f64> = params.list("t", "0.01,0.1,1")?;
    let lmax = params.usize("lmax", DEFAULT_LMAX)?;
    let cap = params.cap(EMBED_MAX_VERTICES)?;
    if level_no < 2 {
        return Err(CliError::Config("embed needs level ≥ 2 (level 1 has no walls)".into()));
    }
    let level = tower_level(rank, level_no, cap)?;
    let space = MetricComponent::from_graph(format!("X{level_no}"), level.graph(), 0)?;
    let base = wall_embedding(&level)?;
    out.csv("embed_wall.csv", &base.to_csv(), params)?;
    let mut passed = true;
    let mut families = Vec::new();
    for &t in &ts {
        let fam = gaussian_family(base.points(0), t)?;
        passed &= fam.is_psd();
        families.push(json!({
            "t": t,
            "min_eigenvalue": fam.min_eigenvalue(),
            "max_diagonal_error": fam.max_diagonal_error(),
            "psd": fam.is_psd(),
        }));
    }
    let fams = direct_sum_families(&space, base.points(0), lmax)?;
    let ds = assemble_direct_sum(&space, &fams, 0)?;
    passed &= ds.report.passed();
    let table = EmbeddingTable::single(ds.embedding.clone());
    out.csv("embed_direct_sum.csv", &table.to_csv(), params)?;
    let prof = profile(&space, &ds.embedding)?;
    out.csv("embed_profile.csv", &prof.to_csv(), params)?;
    let report = json!({
        "rank": rank,
        "level": level_no,
        "vertices": space.len(),
        "families": families,
        "direct_sum": ds.report,
        "profile_monotone": prof.is_monotone(),
    });
    out.json("embed.json", passed, params, &report)?;
    Ok(passed)
}

/// Level 1 is the hypercube `Cay((Z/2)^r)`, embedded by its bit vectors.
fn level_embedding(level: &TowerLevel, rank: usize) -> Result<Vec<Vec<f64>>, CliError> {
    if level.has_walls() {
        return Ok(wall_embedding(level)?.into_components().remove(0));
    }
    Ok((0..level.graph().vertex_count())
        .map(|v| (0..rank).map(|i| f64::from(((v >> i) & 1) as u8)).collect())
        .collect())
}

pub fn union(params: &mut Params, out: &Output) -> Result<bool, CliError> {
    let rank = params.usize("rank", 1)?;
    let depth = params.usize("depth", 10)?;
    let radii: Vec<u64> = params.list("radii", "1,10,100")?;
    let seed = params.u64("seed", 0)?;
    let cap = params.cap(DEFAULT_TOWER_CAP)?;
    let tower = full_tower(rank, depth, cap)?;
    let total: usize = tower.levels.iter().map(|l| l.graph().vertex_count()).sum();
    if total > ALL_PAIRS_MAX_VERTICES {
        return Err(boxlab::Error::CapExceeded {
            what: "union points",
            needed: total as u128,
            cap: ALL_PAIRS_MAX_VERTICES as u128,
        }
        .into());
    }
    let comps = tower
        .levels
        .iter()
        .map(|l| MetricComponent::from_graph(format!("X{}", l.level()), l.graph(), 0))
        .collect::<boxlab::Result<Vec<_>>>()?;
    let union = coarse_union(comps)?;
    let axiom = union.check_scale_axiom();
    let mut passed = axiom.violations == 0;
    let mut sets = Vec::new();
    for r in radii {
        let b = union.neighbourhood_sets(r);
        passed &= b.unexpected == 0;
        sets.push(json!(b));
    }
    let triangle_failures = union.spot_check_triangle(10_000, seed);
    passed &= triangle_failures == 0;
    let embeddings = tower.levels.iter().map(|l| level_embedding(l, rank)).collect::<Result<Vec<_>, _>>()?;
    let points = hilbert_union(&union, &EmbeddingTable::new(embeddings))?;
    let prof = profile(&union, &points)?;
    out.csv("union_profile.csv", &prof.to_csv(), params)?;
    let components: Vec<Value> = union
        .components()
        .iter()
        .map(|c| json!({ "label": c.label(), "points": c.len(), "diameter": c.diameter() }))
        .collect();
    let report = json!({
        "components": components,
        "scale_axiom": axiom,
        "boundedness": sets,
        "triangle_samples": 10_000,
        "triangle_failures": triangle_failures,
        "profile_rows": prof.rows.len(),
    });
    out.json("union.json", passed, params, &report)?;
    Ok(passed)
}

pub fn treepartition(params: &mut Params, out: &Output) -> Result<bool, CliError> {
    let count = params.usize("trees", 50)?;
    let min_size = params.usize("min_size", 2)?;
    let max_size = params.usize("max_size", 2000)?;
    let max_degree = params.usize("max_degree", 5)?;
    let scales: Vec<u32> = params.list("scales", "2,4,8")?;
    let r = params.u64("R", 1)?;
    let eps = params.f64("eps", 0.5)?;
    let weights = params.flag("weights")?;
    let seed = params.u64("seed", 0)?;
    let cap = params.cap(100_000)?;
    if max_size > cap {
        return Err(boxlab::Error::CapExceeded { what: "tree size", needed: max_size as u128, cap: cap as u128 }.into());
    }
    let r = u32::try_from(r).map_err(|_| CliError::Config(format!("R = {r} is too large")))?;
    let trees = random_tree_family(count, min_size, max_size, max_degree, seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut passed = true;
    let mut csv = String::from("tree,vertices,L,clusters,max_cluster_diameter,max_multiplicity,lipschitz_pairs,max_ratio\n");
    let mut per_scale = Vec::new();
    for &l in &scales {
        let mut max_ratio = 0.0f64;
        let mut failures = 0usize;
        for (t, tree) in trees.iter().enumerate() {
            let dec = cluster_decomposition(tree, l)?;
            let rep = check_decomposition(tree, &dec);
            let pou = partition_of_unity(tree, &dec)?;
            let lip = lipschitz_report(tree, &pou, 500, &mut rng);
            if !rep.passed() || lip.violations > 0 {
                failures += 1;
            }
            max_ratio = max_ratio.max(lip.max_ratio);
            let _ = writeln!(
                csv,
                "{t},{},{l},{},{},{},{},{}",
                tree.len(),
                rep.clusters,
                rep.max_cluster_diameter,
                rep.max_multiplicity,
                lip.pairs,
                lip.max_ratio
            );
            if weights && t == 0 && l == scales[0] {
                let mut w = String::from("vertex,piece,weight\n");
                for x in 0..tree.len() {
                    for i in 0..pou.piece_count() {
                        let v = pou.weight(x, i);
                        if *v.numer() != 0 {
                            let _ = writeln!(w, "{x},{i},{}", ratio_f64(v));
                        }
                    }
                }
                out.csv("treepartition_weights.csv", &w, params)?;
            }
        }
        passed &= failures == 0;
        per_scale.push(json!({ "L": l, "failures": failures, "max_ratio": max_ratio, "bound": 40.0 / f64::from(l) }));
    }
    out.csv("treepartition.csv", &csv, params)?;
    let certificates = match equi_exact_certificate(&trees, r, eps) {
        Ok(c) => json!(c),
        Err(boxlab::Error::Contract(msg)) => {
            passed = false;
            json!({ "failure": msg })
        }
        Err(e) => return Err(e.into()),
    };
    let report = json!({
        "trees": trees.len(),
        "scales": per_scale,
        "R": r,
        "eps": eps,
        "certificates": certificates,
    });
    out.json("treepartition.json", passed, params, &report)?;
    Ok(passed)
}

pub fn extension(params: &mut Params, out: &Output) -> Result<bool, CliError> {
    let a = parse_group(&params.string("a", "cyclic:2")?)?;
    let b = parse_group(&params.string("b", "cyclic:3")?)?;
    let k = params.usize("k", 1)?;
    let seed = params.u64("seed", 0)?;
    let cap = params.cap(1_000_000)?;
    let rep = extension_experiment(a, b, k, cap, seed)?;
    let mut fiber = String::from("vertex,comb_length,bar_length\n");
    for row in &rep.fiber {
        let _ = writeln!(fiber, "{},{},{}", row.vertex, row.comb, row.bar);
    }
    out.csv("extension_fiber.csv", &fiber, params)?;
    let mut lengths = String::from("t,rho_minus,rho_plus\n");
    for row in &rep.lengths.rows {
        let _ = writeln!(lengths, "{},{},{}", row.t, row.rho_minus, row.rho_plus);
    }
    out.csv("extension_lengths.csv", &lengths, params)?;
    let passed = rep.passed();
    out.json("extension.json", passed, params, &rep)?;
    Ok(passed)
}
