use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bass_serre::{commutator_basis, express_in_basis, BasisElement, BasisLetter};
use crate::error::{Error, Result};
use crate::graph::UNREACHABLE;
use crate::group::{Factor, FiniteGroupTable, FreeProduct, GeneratingSet, NormalFormWord};
use crate::tower::build_tower;

/// Number of random words used to cross-check the action.
pub const RANDOM_WORD_CHECKS: usize = 200;

/// The finite quotient `G/M_k` of `G = A⋆B` by the level-`k` tower subgroup
/// `M_k` of the commutator subgroup `D`. Elements are pairs `(q, v)` with
/// `q ∈ A×B` and `v` a vertex of the level-`k` graph `X_k = Cay(D/M_k)`,
/// standing for `v·s(q)` with section `s(a, b) = a·b`.
#[derive(Debug, Clone)]
pub struct ExtensionQuotient {
    group: FreeProduct,
    basis: Vec<BasisElement>,
    fiber: usize,
    /// `forward[v·r + j]`: endpoint of the `j`-labelled edge leaving `v`.
    forward: Vec<usize>,
    backward: Vec<usize>,
    /// Level-graph distances from the base vertex.
    comb: Vec<u32>,
}

impl ExtensionQuotient {
    pub fn new(a: FiniteGroupTable, b: FiniteGroupTable, k: usize, cap: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Input("tower depth must be at least 1".into()));
        }
        let group = FreeProduct::new(a, b);
        let basis = commutator_basis(&group);
        let rank = basis.len();
        if rank == 0 {
            return Err(Error::Input("both factors must be non-trivial".into()));
        }
        let q = group.a().order() * group.b().order();
        let tower = build_tower(rank, k, cap / q)?;
        let Some(level) = tower.levels.get(k - 1) else {
            let needed = tower
                .truncated
                .as_ref()
                .map(|t| (t.base_vertices as u128).saturating_mul(1u128.checked_shl(t.cycle_rank as u32).unwrap_or(u128::MAX)))
                .unwrap_or(u128::MAX)
                .saturating_mul(q as u128);
            return Err(Error::CapExceeded { what: "extension quotient elements", needed, cap: cap as u128 });
        };
        let graph = level.graph();
        let fiber = graph.vertex_count();
        let mut forward = vec![usize::MAX; fiber * rank];
        let mut backward = vec![usize::MAX; fiber * rank];
        for &(u, v, label) in graph.edges() {
            forward[u * rank + label as usize] = v;
            backward[v * rank + label as usize] = u;
        }
        if forward.contains(&usize::MAX) || backward.contains(&usize::MAX) {
            return Err(Error::Rewriting("tower level is not a Cayley graph of its basis".into()));
        }
        let comb = graph.distances_from(0);
        Ok(Self { group, basis, fiber, forward, backward, comb })
    }

    pub fn group(&self) -> &FreeProduct {
        &self.group
    }

    pub fn fiber_size(&self) -> usize {
        self.fiber
    }

    pub fn order(&self) -> usize {
        self.quotient_count() * self.fiber
    }

    fn quotient_count(&self) -> usize {
        self.group.a().order() * self.group.b().order()
    }

    fn q_index(&self, (a, b): (usize, usize)) -> usize {
        a * self.group.b().order() + b
    }

    fn q_pair(&self, q: usize) -> (usize, usize) {
        (q / self.group.b().order(), q % self.group.b().order())
    }

    pub fn identity(&self) -> usize {
        self.q_index((self.group.a().identity(), self.group.b().identity())) * self.fiber
    }

    /// Index of the fiber element over the identity at level vertex `v`.
    pub fn fiber_element(&self, v: usize) -> usize {
        self.identity() + v
    }

    fn section(&self, q: usize) -> NormalFormWord {
        let (a, b) = self.q_pair(q);
        let wa = self.group.letter(Factor::A, a).expect("valid element");
        let wb = self.group.letter(Factor::B, b).expect("valid element");
        self.group.mul(&wa, &wb)
    }

    fn walk(&self, mut v: usize, word: &[BasisLetter]) -> usize {
        let r = self.basis.len();
        for &(j, inv) in word {
            v = if inv { self.backward[v * r + j] } else { self.forward[v * r + j] };
        }
        v
    }

    /// Precomputes right multiplication by each word in `gens`.
    pub fn action(&self, gens: &[NormalFormWord]) -> Result<Action> {
        let nq = self.quotient_count();
        let mut q_next = Vec::with_capacity(nq * gens.len());
        let mut cocycle = Vec::with_capacity(nq * gens.len());
        for q in 0..nq {
            let sq = self.section(q);
            for x in gens {
                let (pa, pb) = self.group.project(x);
                let (a, b) = self.q_pair(q);
                let q2 = self.q_index((self.group.a().mul(a, pa), self.group.b().mul(b, pb)));
                let c = self.group.mul(&self.group.mul(&sq, x), &self.group.inverse(&self.section(q2)));
                q_next.push(q2);
                cocycle.push(express_in_basis(&self.group, &self.basis, &c)?);
            }
        }
        Ok(Action { gens: gens.len(), q_next, cocycle })
    }

    /// The element represented by a word of `G`, computed without the action.
    pub fn element_of(&self, w: &NormalFormWord) -> Result<usize> {
        let q = self.q_index(self.group.project(w));
        let delta = self.group.mul(w, &self.group.inverse(&self.section(q)));
        let word = express_in_basis(&self.group, &self.basis, &delta)?;
        Ok(q * self.fiber + self.walk(0, &word))
    }

    pub fn act(&self, action: &Action, g: usize, gen: usize) -> usize {
        let (q, v) = (g / self.fiber, g % self.fiber);
        let i = q * action.gens + gen;
        action.q_next[i] * self.fiber + self.walk(v, &action.cocycle[i])
    }

    /// Word lengths from the identity under the given action.
    pub fn lengths(&self, action: &Action) -> Vec<u32> {
        let mut dist = vec![UNREACHABLE; self.order()];
        let start = self.identity();
        dist[start] = 0;
        let mut queue = VecDeque::from([start]);
        while let Some(g) = queue.pop_front() {
            for s in 0..action.gens {
                let h = self.act(action, g, s);
                if dist[h] == UNREACHABLE {
                    dist[h] = dist[g] + 1;
                    queue.push_back(h);
                }
            }
        }
        dist
    }

    /// `ℓ_Comb` of the level vertex `v`.
    pub fn comb_length(&self, v: usize) -> u32 {
        self.comb[v]
    }
}

/// Right multiplication by a fixed list of generators.
#[derive(Debug, Clone)]
pub struct Action {
    gens: usize,
    q_next: Vec<usize>,
    cocycle: Vec<Vec<BasisLetter>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FiberRow {
    pub vertex: usize,
    pub comb: u32,
    pub bar: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LengthProfileRow {
    pub t: u32,
    pub rho_minus: u32,
    pub rho_plus: u32,
}

/// Comparison of the word lengths of two generating sets on the quotient.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LengthComparison {
    pub second_generators: usize,
    /// Largest first-set length of a second-set generator.
    pub stretch: u32,
    pub rows: Vec<LengthProfileRow>,
    /// `ρ'₋(t) ≥ ⌈t/stretch⌉` and `ρ'₊(t) ≤ t` at every realised `t`.
    pub proper: bool,
    /// `ρ'₋(ℓ) ≤ ℓ' ≤ ρ'₊(ℓ)` on every element.
    pub sandwiched: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtensionReport {
    pub k: usize,
    pub a_order: usize,
    pub b_order: usize,
    pub rank: usize,
    pub fiber_size: usize,
    pub order: usize,
    pub tau: u32,
    pub connected: bool,
    pub relation_failures: usize,
    pub random_words: usize,
    pub random_word_failures: usize,
    pub lower_violations: usize,
    pub upper_violations: usize,
    /// Largest `ℓ_Comb − ℓ̄` on the fiber.
    pub max_comb_minus_bar: i64,
    /// Largest `ℓ̄ / ℓ_Comb` on the fiber.
    pub max_bar_over_comb: f64,
    pub fiber: Vec<FiberRow>,
    pub lengths: LengthComparison,
}

impl ExtensionReport {
    pub fn cross_checks_passed(&self) -> bool {
        self.connected
            && self.relation_failures == 0
            && self.random_word_failures == 0
            && self.order == self.a_order * self.b_order * self.fiber_size
            && self.lengths.proper
            && self.lengths.sandwiched
    }

    pub fn passed(&self) -> bool {
        self.cross_checks_passed() && self.lower_violations == 0 && self.upper_violations == 0
    }
}

fn letters(group: &FreeProduct) -> Vec<NormalFormWord> {
    GeneratingSet::all_non_identity(group)
        .generators()
        .iter()
        .map(|&(f, x)| group.letter(f, x).expect("valid element"))
        .collect()
}

fn compare_lengths(first: &[u32], second: &[u32], stretch: u32, second_generators: usize) -> LengthComparison {
    let max_t = first.iter().copied().max().unwrap_or(0) as usize;
    let mut lo = vec![u32::MAX; max_t + 1];
    let mut hi = vec![0u32; max_t + 1];
    let mut seen = vec![false; max_t + 1];
    for (&l, &l2) in first.iter().zip(second) {
        let t = l as usize;
        seen[t] = true;
        lo[t] = lo[t].min(l2);
        hi[t] = hi[t].max(l2);
    }
    for t in (0..max_t).rev() {
        lo[t] = lo[t].min(lo[t + 1]);
    }
    for t in 1..=max_t {
        hi[t] = hi[t].max(hi[t - 1]);
    }
    let rows: Vec<LengthProfileRow> = (0..=max_t)
        .filter(|&t| seen[t])
        .map(|t| LengthProfileRow { t: t as u32, rho_minus: lo[t], rho_plus: hi[t] })
        .collect();
    let proper = rows.iter().all(|r| r.rho_minus >= r.t.div_ceil(stretch) && r.rho_plus <= r.t);
    let sandwiched = first.iter().zip(second).all(|(&l, &l2)| lo[l as usize] <= l2 && l2 <= hi[l as usize]);
    LengthComparison { second_generators, stretch, rows, proper, sandwiched }
}

/// Builds `G/M_k` for `G = A⋆B` and compares, on the fiber `D/M_k`, the
/// quotient length `ℓ̄` with the level-graph length `ℓ_Comb`:
/// `ℓ_Comb − 1 ≤ ℓ̄ ≤ 4τ·ℓ_Comb`, with `S` all non-identity factor elements.
pub fn extension_experiment(a: FiniteGroupTable, b: FiniteGroupTable, k: usize, cap: usize, seed: u64) -> Result<ExtensionReport> {
    let quotient = ExtensionQuotient::new(a, b, k, cap)?;
    let group = quotient.group().clone();
    let gens = letters(&group);
    let tau = gens.iter().map(|w| w.len() as u32).max().unwrap_or(0);
    let action = quotient.action(&gens)?;
    let bar = quotient.lengths(&action);
    let connected = !bar.contains(&UNREACHABLE);

    // Factor relations: acting by x then y equals acting by xy.
    let mut relation_failures = 0;
    for f in [Factor::A, Factor::B] {
        let table = group.factor(f);
        let words: Vec<NormalFormWord> = (0..table.order()).map(|x| group.letter(f, x).expect("valid element")).collect();
        let act = quotient.action(&words)?;
        for g in 0..quotient.order() {
            if quotient.act(&act, g, table.identity()) != g {
                relation_failures += 1;
            }
            for x in 0..table.order() {
                let gx = quotient.act(&act, g, x);
                for y in 0..table.order() {
                    if quotient.act(&act, gx, y) != quotient.act(&act, g, table.mul(x, y)) {
                        relation_failures += 1;
                    }
                }
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut random_word_failures = 0;
    for _ in 0..RANDOM_WORD_CHECKS {
        let len = rng.gen_range(0..=12);
        let mut g = quotient.identity();
        let mut w = NormalFormWord::identity();
        for _ in 0..len {
            let s = rng.gen_range(0..gens.len());
            g = quotient.act(&action, g, s);
            w = group.mul(&w, &gens[s]);
        }
        if quotient.element_of(&w)? != g {
            random_word_failures += 1;
        }
    }

    let mut fiber = Vec::with_capacity(quotient.fiber_size());
    let (mut lower_violations, mut upper_violations) = (0, 0);
    let mut max_comb_minus_bar = i64::MIN;
    let mut max_bar_over_comb = 0.0f64;
    for v in 0..quotient.fiber_size() {
        let comb = quotient.comb_length(v);
        let l = bar[quotient.fiber_element(v)];
        if (comb as i64) - 1 > l as i64 {
            lower_violations += 1;
        }
        if l as u64 > 4 * tau as u64 * comb as u64 {
            upper_violations += 1;
        }
        max_comb_minus_bar = max_comb_minus_bar.max(comb as i64 - l as i64);
        if comb > 0 {
            max_bar_over_comb = max_bar_over_comb.max(l as f64 / comb as f64);
        }
        fiber.push(FiberRow { vertex: v, comb, bar: l });
    }

    // Second generating set: S together with every section word and its inverse.
    let mut second = gens.clone();
    for x in group.a().non_identity() {
        for y in group.b().non_identity() {
            let w = group.mul(&group.letter(Factor::A, x)?, &group.letter(Factor::B, y)?);
            second.push(group.inverse(&w));
            second.push(w);
        }
    }
    let bar2 = quotient.lengths(&quotient.action(&second)?);
    let stretch = second.iter().map(|w| w.len() as u32).max().unwrap_or(1);
    let lengths = compare_lengths(&bar, &bar2, stretch, second.len());

    Ok(ExtensionReport {
        k,
        a_order: group.a().order(),
        b_order: group.b().order(),
        rank: commutator_basis(&group).len(),
        fiber_size: quotient.fiber_size(),
        order: quotient.order(),
        tau,
        connected,
        relation_failures,
        random_words: RANDOM_WORD_CHECKS,
        random_word_failures,
        lower_violations,
        upper_violations,
        max_comb_minus_bar,
        max_bar_over_comb,
        fiber,
        lengths,
    })
}
