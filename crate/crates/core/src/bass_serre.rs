//! The Bass–Serre tree of `A ⋆ B`, the free basis of the commutator
//! subgroup `D = ker(A ⋆ B → A × B)`, and the comparison between the word
//! length in that basis and displacement in the tree.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::LabeledMultigraph;
use crate::group::{Factor, FreeProduct, Generators, NormalFormWord};

/// Default cap on the number of tree vertices or group elements enumerated.
pub const DEFAULT_TREE_CAP: usize = 1_000_000;

/// A coset `g·A` or `g·B`, stored by its canonical representative: the
/// normal form of `g` with a trailing syllable from the coset's own factor
/// removed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coset {
    pub rep: NormalFormWord,
    pub side: Factor,
}

impl Coset {
    pub fn new(g: &NormalFormWord, side: Factor) -> Self {
        let syl = g.syllables();
        let rep = match syl.last() {
            Some(s) if s.factor == side => NormalFormWord::from_reduced(syl[..syl.len() - 1].to_vec()),
            _ => g.clone(),
        };
        Coset { rep, side }
    }

    pub fn base(side: Factor) -> Self {
        Coset { rep: NormalFormWord::identity(), side }
    }
}

impl std::fmt::Display for Coset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}{}", self.rep, self.side)
    }
}

/// The ball of radius `R` around the coset `A` in the Bass–Serre tree.
#[derive(Debug, Clone)]
pub struct TreeBall {
    pub radius: usize,
    pub vertices: Vec<Coset>,
    /// Edge labels index into `edge_words`: the edge between `gA` and `gB`
    /// is the element `g`.
    pub graph: LabeledMultigraph,
    pub edge_words: Vec<NormalFormWord>,
    /// Tree distance from the root (vertex 0, the coset `A`).
    pub depth: Vec<usize>,
}

impl TreeBall {
    pub fn root(&self) -> usize {
        0
    }

    /// Sidecar CSV `vertex,coset_word,side`.
    pub fn sidecar_csv(&self) -> String {
        let mut out = String::from("vertex,coset_word,side\n");
        for (i, c) in self.vertices.iter().enumerate() {
            let _ = writeln!(out, "{i},{},{}", c.rep, c.side);
        }
        out
    }
}

/// Neighbours of a coset `rX`: the cosets `r·x·Y` for `x ∈ X` (with `Y`
/// the other factor), paired with the edge element `r·x`.
fn coset_neighbors(group: &FreeProduct, c: &Coset) -> Vec<(Coset, NormalFormWord)> {
    let x_side = c.side;
    let y_side = x_side.other();
    (0..group.factor(x_side).order())
        .map(|x| {
            let edge = group.right_mul_letter(&c.rep, x_side, x);
            (Coset::new(&edge, y_side), edge)
        })
        .collect()
}

pub fn tree_ball(group: &FreeProduct, radius: usize, cap: usize) -> Result<TreeBall> {
    let root = Coset::base(Factor::A);
    let mut vertices = vec![root.clone()];
    let mut depth = vec![0usize];
    let mut index: HashMap<Coset, usize> = HashMap::from([(root, 0)]);
    let mut edges = Vec::new();
    let mut edge_words = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(u) = queue.pop_front() {
        if depth[u] == radius {
            continue;
        }
        for (nb, edge) in coset_neighbors(group, &vertices[u]) {
            if index.contains_key(&nb) {
                continue;
            }
            if vertices.len() >= cap {
                return Err(Error::CapExceeded { what: "tree ball vertices", needed: vertices.len() as u128 + 1, cap: cap as u128 });
            }
            let v = vertices.len();
            index.insert(nb.clone(), v);
            vertices.push(nb);
            depth.push(depth[u] + 1);
            edges.push((u, v, edge_words.len() as u32));
            edge_words.push(edge);
            queue.push_back(v);
        }
    }
    let graph = LabeledMultigraph::new(vertices.len(), edges)?;
    Ok(TreeBall { radius, vertices, graph, edge_words, depth })
}

/// The tree geodesic from the base coset `e·X0` to `r·Y`, as the list of
/// cosets visited (both ends included).
pub fn geodesic_from_base(x0: Factor, target: &Coset) -> Vec<Coset> {
    let syl = target.rep.syllables();
    let mut path = Vec::with_capacity(syl.len() + 2);
    match syl.first() {
        None => {
            path.push(Coset::base(x0));
            if x0 != target.side {
                path.push(Coset::base(target.side));
            }
            return path;
        }
        Some(first) => {
            if first.factor != x0 {
                path.push(Coset::base(x0));
            }
        }
    }
    for (i, s) in syl.iter().enumerate() {
        path.push(Coset { rep: NormalFormWord::from_reduced(syl[..i].to_vec()), side: s.factor });
    }
    path.push(target.clone());
    path
}

/// Distance from the base coset `e·X0` to `target`.
pub fn distance_from_base(x0: Factor, target: &Coset) -> usize {
    let m = target.rep.len();
    match target.rep.leftmost() {
        None => usize::from(x0 != target.side),
        Some(first) if first.factor == x0 => m,
        Some(_) => m + 1,
    }
}

/// Tree distance between the cosets `g·X` and `h·Y`.
pub fn tree_distance(group: &FreeProduct, g: &NormalFormWord, x: Factor, h: &NormalFormWord, y: Factor) -> usize {
    let rel = group.mul(&group.inverse(g), h);
    distance_from_base(x, &Coset::new(&rel, y))
}

/// A basis element `[a, b] = a·b·a⁻¹·b⁻¹` of `D`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BasisElement {
    pub a: usize,
    pub b: usize,
    #[serde(serialize_with = "serialize_display")]
    pub word: NormalFormWord,
}

fn serialize_display<S: serde::Serializer>(w: &NormalFormWord, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&w.to_string())
}

/// All `[a, b]` with `a ∈ A ∖ {e}`, `b ∈ B ∖ {e}`, ordered by `(a, b)`.
pub fn commutator_basis(group: &FreeProduct) -> Vec<BasisElement> {
    let mut out = Vec::new();
    for a in group.a().non_identity() {
        for b in group.b().non_identity() {
            let (wa, wb) = (
                group.letter(Factor::A, a).expect("valid element"),
                group.letter(Factor::B, b).expect("valid element"),
            );
            out.push(BasisElement { a, b, word: group.commutator(&wa, &wb) });
        }
    }
    out
}

/// The basis elements `[a, b]` with `ℓ(a), ℓ(b) ≤ tau` for the given
/// generating sets of the factors.
pub fn truncated_commutator_basis(
    group: &FreeProduct,
    gens_a: &Generators,
    gens_b: &Generators,
    tau: u32,
) -> Result<Vec<BasisElement>> {
    let la = gens_a.word_lengths(group.a())?;
    let lb = gens_b.word_lengths(group.b())?;
    Ok(commutator_basis(group).into_iter().filter(|e| la[e.a] <= tau && lb[e.b] <= tau).collect())
}

pub fn kernel_membership(group: &FreeProduct, w: &NormalFormWord) -> bool {
    group.in_kernel(w)
}

/// A letter of a word over `𝔅 ∪ 𝔅⁻¹`: basis index and inversion flag.
pub type BasisLetter = (usize, bool);

/// Evaluates a word over `𝔅 ∪ 𝔅⁻¹`.
pub fn evaluate_basis_word(group: &FreeProduct, basis: &[BasisElement], word: &[BasisLetter]) -> NormalFormWord {
    word.iter().fold(NormalFormWord::identity(), |acc, &(i, inv)| {
        let w = &basis[i].word;
        if inv {
            group.mul(&acc, &group.inverse(w))
        } else {
            group.mul(&acc, w)
        }
    })
}

fn free_reduce(word: Vec<BasisLetter>) -> Vec<BasisLetter> {
    let mut out: Vec<BasisLetter> = Vec::with_capacity(word.len());
    for l in word {
        match out.last() {
            Some(&(i, inv)) if i == l.0 && inv != l.1 => {
                out.pop();
            }
            _ => out.push(l),
        }
    }
    out
}

/// Rewrites `w ∈ D` over the basis by following the tree geodesic from
/// `A` to `w·A` through translates of the fundamental domain
/// `{bA : b ∈ B} ∪ {aB : a ∈ A}`.
pub fn express_in_basis(group: &FreeProduct, basis: &[BasisElement], w: &NormalFormWord) -> Result<Vec<BasisLetter>> {
    if !group.in_kernel(w) {
        return Err(Error::NotInKernel);
    }
    let lookup: HashMap<NormalFormWord, BasisLetter> = basis
        .iter()
        .enumerate()
        .flat_map(|(i, e)| [(e.word.clone(), (i, false)), (group.inverse(&e.word), (i, true))])
        .collect();
    let path = geodesic_from_base(Factor::A, &Coset::new(w, Factor::A));
    // Translate carrying each coset into the fundamental domain.
    let translate = |c: &Coset| -> NormalFormWord {
        let (pa, pb) = group.project(&c.rep);
        let (first, second) = match c.side {
            Factor::A => ((Factor::A, group.a().inv(pa)), (Factor::B, group.b().inv(pb))),
            Factor::B => ((Factor::B, group.b().inv(pb)), (Factor::A, group.a().inv(pa))),
        };
        let g = group.right_mul_letter(&c.rep, first.0, first.1);
        group.right_mul_letter(&g, second.0, second.1)
    };
    let translates: Vec<NormalFormWord> = path.iter().map(translate).collect();
    let mut word = Vec::new();
    for pair in translates.windows(2) {
        let step = group.mul(&group.inverse(&pair[0]), &pair[1]);
        if step.is_identity() {
            continue;
        }
        match lookup.get(&step) {
            Some(&l) => word.push(l),
            None => return Err(Error::Rewriting(format!("step {step} is not a basis letter"))),
        }
    }
    let word = free_reduce(word);
    if translates.last() != Some(w) && !w.is_identity() {
        return Err(Error::Rewriting(format!("geodesic translates do not end at {w}")));
    }
    Ok(word)
}

/// Word length in `𝔅 ∪ 𝔅⁻¹` for every element of the ball of that radius.
pub fn basis_ball(group: &FreeProduct, basis: &[BasisElement], radius: usize, cap: usize) -> Result<Vec<(NormalFormWord, usize)>> {
    let mut letters: Vec<NormalFormWord> = basis.iter().map(|e| e.word.clone()).collect();
    letters.extend(basis.iter().map(|e| group.inverse(&e.word)));
    let mut dist: HashMap<NormalFormWord, usize> = HashMap::from([(NormalFormWord::identity(), 0)]);
    let mut order = vec![NormalFormWord::identity()];
    let mut frontier = 0;
    for r in 1..=radius {
        let end = order.len();
        for i in frontier..end {
            for s in &letters {
                let y = group.mul(&order[i], s);
                if !dist.contains_key(&y) {
                    if order.len() >= cap {
                        return Err(Error::CapExceeded { what: "basis ball", needed: order.len() as u128 + 1, cap: cap as u128 });
                    }
                    dist.insert(y.clone(), r);
                    order.push(y);
                }
            }
        }
        frontier = end;
    }
    Ok(order.into_iter().map(|w| {
        let d = dist[&w];
        (w, d)
    }).collect())
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct QiReport {
    pub radius: usize,
    pub elements: usize,
    /// Elements violating `d_T/4 ≤ ℓ ≤ d_T + 1`.
    pub violations: Vec<String>,
    /// Basis elements whose displacement `d_T(sA, A)` is not 4.
    pub basis_displacement_failures: Vec<String>,
    /// Smallest `C` with `d_T ≤ C·ℓ` over non-identity elements.
    pub max_dt_over_length: f64,
    /// Smallest `c` with `ℓ ≤ d_T + c`.
    pub max_length_minus_dt: i64,
    /// Elements whose rewritten word is longer than `ℓ`.
    pub non_geodesic_rewrites: usize,
    /// Elements whose rewritten word is shorter than `ℓ` or fails to
    /// evaluate back to the element.
    pub rewrite_failures: Vec<String>,
}

impl QiReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.basis_displacement_failures.is_empty() && self.rewrite_failures.is_empty()
    }
}

/// Checks `d_T(gA, A)/4 ≤ ℓ_𝔅(g) ≤ d_T(gA, A) + 1` on the `𝔅`-ball of
/// radius `radius`, and cross-checks `express_in_basis` on the same ball.
pub fn qi_report(group: &FreeProduct, radius: usize, cap: usize) -> Result<QiReport> {
    let basis = commutator_basis(group);
    let ball = basis_ball(group, &basis, radius, cap)?;
    let mut report = QiReport { radius, elements: ball.len(), ..Default::default() };
    for (g, len) in &ball {
        let dt = distance_from_base(Factor::A, &Coset::new(g, Factor::A));
        if 4 * len < dt || *len > dt + 1 {
            report.violations.push(format!("{g}: length {len}, tree distance {dt}"));
        }
        if *len > 0 {
            report.max_dt_over_length = report.max_dt_over_length.max(dt as f64 / *len as f64);
        }
        report.max_length_minus_dt = report.max_length_minus_dt.max(*len as i64 - dt as i64);
        let rewritten = express_in_basis(group, &basis, g)?;
        if rewritten.len() < *len || evaluate_basis_word(group, &basis, &rewritten) != *g {
            report.rewrite_failures.push(g.to_string());
        } else if rewritten.len() > *len {
            report.non_geodesic_rewrites += 1;
        }
    }
    for e in &basis {
        let dt = distance_from_base(Factor::A, &Coset::new(&e.word, Factor::A));
        if dt != 4 {
            report.basis_displacement_failures.push(format!("{}: {dt}", e.word));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroupTable;
    use rand::{Rng, SeedableRng};

    fn fp(a: usize, b: usize) -> FreeProduct {
        FreeProduct::new(FiniteGroupTable::cyclic(a), FiniteGroupTable::cyclic(b))
    }

    #[test]
    fn ball_examples() {
        let g = fp(2, 3);
        let b0 = tree_ball(&g, 0, 100).unwrap();
        assert_eq!(b0.vertices.len(), 1);
        let b1 = tree_ball(&g, 1, 100).unwrap();
        let names: Vec<String> = b1.vertices.iter().map(|c| c.to_string()).collect();
        assert_eq!(names, ["eA", "eB", "A1B"]);
        let b2 = tree_ball(&g, 2, 100).unwrap();
        assert_eq!(b2.vertices.len(), 1 + 2 + 4);
        for (v, c) in b2.vertices.iter().enumerate() {
            if b2.depth[v] < 2 {
                let expected = g.factor(c.side).order();
                assert_eq!(b2.graph.degree(v), expected);
            }
        }
        assert_eq!(b2.graph.cycle_rank(), 0);
        assert!(b2.graph.edges().iter().all(|&(u, v, _)| b2.vertices[u].side != b2.vertices[v].side));
    }

    #[test]
    fn distance_examples() {
        let g = fp(2, 3);
        let e = NormalFormWord::identity();
        let a = g.letter(Factor::A, 1).unwrap();
        let b = g.letter(Factor::B, 1).unwrap();
        assert_eq!(tree_distance(&g, &e, Factor::A, &e, Factor::A), 0);
        assert_eq!(tree_distance(&g, &g.commutator(&a, &b), Factor::A, &e, Factor::A), 4);
        assert_eq!(tree_distance(&g, &b, Factor::A, &e, Factor::A), 2);
        let ball = tree_ball(&g, 2, 100).unwrap();
        let d = ball.graph.distances_from(0);
        let bv = ball.vertices.iter().position(|c| *c == Coset::new(&b, Factor::A)).unwrap();
        assert_eq!(d[bv], 2);
    }

    #[test]
    fn distance_matches_ball_bfs() {
        for (p, q, r) in [(2, 3, 8), (3, 3, 6), (2, 2, 8), (2, 4, 6)] {
            let g = fp(p, q);
            let ball = tree_ball(&g, r, DEFAULT_TREE_CAP).unwrap();
            for u in 0..ball.vertices.len() {
                let dist = ball.graph.distances_from(u);
                let cu = &ball.vertices[u];
                for v in 0..ball.vertices.len() {
                    let cv = &ball.vertices[v];
                    assert_eq!(tree_distance(&g, &cu.rep, cu.side, &cv.rep, cv.side), dist[v] as usize);
                }
            }
        }
    }

    #[test]
    fn geodesic_has_the_right_length() {
        let g = fp(3, 3);
        for w in g.words_up_to(4) {
            for side in [Factor::A, Factor::B] {
                for x0 in [Factor::A, Factor::B] {
                    let target = Coset::new(&w, side);
                    let path = geodesic_from_base(x0, &target);
                    assert_eq!(path.len(), distance_from_base(x0, &target) + 1);
                    for pair in path.windows(2) {
                        assert_eq!(tree_distance(&g, &pair[0].rep, pair[0].side, &pair[1].rep, pair[1].side), 1);
                    }
                }
            }
        }
    }

    #[test]
    fn basis_examples() {
        assert_eq!(commutator_basis(&fp(2, 2)).len(), 1);
        let basis = commutator_basis(&fp(2, 3));
        assert_eq!(basis.len(), 2);
        assert!(basis.iter().all(|e| e.word.len() == 4));
        let g = fp(2, 3);
        let z2 = FiniteGroupTable::cyclic(2);
        let z3 = FiniteGroupTable::cyclic(3);
        let (ga, gb) = (Generators::all(&z2), Generators::all(&z3));
        assert!(truncated_commutator_basis(&g, &ga, &gb, 0).unwrap().is_empty());
        assert_eq!(truncated_commutator_basis(&g, &ga, &gb, 1).unwrap().len(), 2);
        let z4 = FiniteGroupTable::cyclic(4);
        let g = FreeProduct::new(z4.clone(), z3);
        let ga = Generators::new(&z4, &[1]).unwrap();
        assert_eq!(truncated_commutator_basis(&g, &ga, &gb, 1).unwrap().len(), 4);
    }

    #[test]
    fn kernel_examples() {
        let g = fp(2, 3);
        let a = g.letter(Factor::A, 1).unwrap();
        let b = g.letter(Factor::B, 1).unwrap();
        assert!(kernel_membership(&g, &NormalFormWord::identity()));
        assert!(kernel_membership(&g, &g.commutator(&a, &b)));
        assert!(!kernel_membership(&g, &a));
    }

    #[test]
    fn express_examples() {
        let g = fp(2, 3);
        let basis = commutator_basis(&g);
        assert!(express_in_basis(&g, &basis, &NormalFormWord::identity()).unwrap().is_empty());
        assert_eq!(express_in_basis(&g, &basis, &basis[0].word).unwrap(), vec![(0, false)]);
        let prod = g.mul(&basis[0].word, &basis[1].word);
        assert_eq!(express_in_basis(&g, &basis, &prod).unwrap(), vec![(0, false), (1, false)]);
        let a = g.letter(Factor::A, 1).unwrap();
        assert_eq!(express_in_basis(&g, &basis, &a), Err(Error::NotInKernel));
    }

    #[test]
    fn express_round_trips_on_random_kernel_words() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for (p, q) in [(2, 3), (3, 4), (2, 2)] {
            let g = fp(p, q);
            let basis = commutator_basis(&g);
            for _ in 0..1000 {
                let len = rng.gen_range(0..10);
                let word: Vec<BasisLetter> = (0..len).map(|_| (rng.gen_range(0..basis.len()), rng.gen_bool(0.5))).collect();
                let w = evaluate_basis_word(&g, &basis, &word);
                let rewritten = express_in_basis(&g, &basis, &w).unwrap();
                assert_eq!(evaluate_basis_word(&g, &basis, &rewritten), w);
                // free basis: the rewrite is the free reduction of the input word
                assert_eq!(rewritten, free_reduce(word));
                let dt = distance_from_base(Factor::A, &Coset::new(&w, Factor::A));
                assert!(rewritten.len() <= dt);
            }
        }
    }

    #[test]
    fn basis_is_free_to_length_six() {
        let g = fp(2, 3);
        let basis = commutator_basis(&g);
        // Distinct elements in the ball of radius 6 equal the number of
        // reduced words in a free group of rank 2: 1 + 4·(3^6 − 1)/2.
        let ball = basis_ball(&g, &basis, 6, DEFAULT_TREE_CAP).unwrap();
        assert_eq!(ball.len(), 1 + 4 * (729 - 1) / 2);
    }

    #[test]
    fn qi_inequality_holds() {
        let r0 = qi_report(&fp(2, 3), 0, DEFAULT_TREE_CAP).unwrap();
        assert!(r0.passed());
        assert_eq!(r0.elements, 1);
        let r = qi_report(&fp(2, 3), 4, DEFAULT_TREE_CAP).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.non_geodesic_rewrites, 0);
        assert!(r.max_dt_over_length <= 4.0);
    }
}
