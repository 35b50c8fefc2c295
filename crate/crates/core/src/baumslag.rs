//! Finite quotients of `A ⋆ B` from the action of each factor on the set
//! `U(k)` of reduced words of syllable length at most `k`.
//!
//! A factor element `g` sends a word `w` to the normal form of `g·w` when
//! that has syllable length at most `k`, and fixes `w` otherwise. These
//! permutations define a homomorphism from `A ⋆ B` to `Sym(U(k))`.

use std::collections::HashMap;

use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::LabeledMultigraph;
use crate::group::{check_injective_on, Factor, FreeProduct, GeneratingSet, NormalFormWord};
use crate::perm::{self, Perm};

/// Default cap on `|U(k)|`.
pub const DEFAULT_WORD_CAP: usize = 1_000_000;
/// Default largest degree for which exact quotient orders are computed.
pub const DEFAULT_ORDER_DEGREE_CAP: usize = 256;

/// The reduced words of syllable length at most `k`, indexed; index 0 is `e`.
#[derive(Debug, Clone)]
pub struct TruncatedWordSet {
    k: usize,
    words: Vec<NormalFormWord>,
    index: HashMap<NormalFormWord, usize>,
}

impl TruncatedWordSet {
    pub fn build(group: &FreeProduct, k: usize, cap: usize) -> Result<Self> {
        let needed = group.count_words_up_to(k);
        if needed > cap as u128 {
            return Err(Error::CapExceeded { what: "truncated word set", needed, cap: cap as u128 });
        }
        let words = group.words_up_to(k);
        let index = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        Ok(TruncatedWordSet { k, words, index })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[NormalFormWord] {
        &self.words
    }

    pub fn word(&self, i: usize) -> &NormalFormWord {
        &self.words[i]
    }

    pub fn index_of(&self, w: &NormalFormWord) -> Option<usize> {
        self.index.get(w).copied()
    }

    /// Checks `U(k) = U(k−1) ⊔ (V(k) ∩ A·U(k−1)) ⊔ (V(k) ∩ B·U(k−1))`, where
    /// `V(k)` is the set of words of length exactly `k`. Returns the three
    /// part sizes.
    pub fn check_partition(&self) -> Result<(usize, usize, usize)> {
        let k = self.k;
        let (mut shorter, mut a_part, mut b_part) = (0, 0, 0);
        for w in &self.words {
            if w.len() < k || k == 0 {
                shorter += 1;
                continue;
            }
            let tail = NormalFormWord::from_reduced(w.syllables()[1..].to_vec());
            if self.index_of(&tail).is_none() || tail.len() != k - 1 {
                return Err(Error::Contract(format!("word {w} has no tail in U(k-1)")));
            }
            match w.leftmost().expect("non-empty").factor {
                Factor::A => a_part += 1,
                Factor::B => b_part += 1,
            }
        }
        Ok((shorter, a_part, b_part))
    }
}

/// Permutations of word indices for every element of both factors.
#[derive(Debug, Clone)]
pub struct PermutationRep {
    k: usize,
    degree: usize,
    perms_a: Vec<Perm>,
    perms_b: Vec<Perm>,
}

impl PermutationRep {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn perm(&self, f: Factor, element: usize) -> &Perm {
        match f {
            Factor::A => &self.perms_a[element],
            Factor::B => &self.perms_b[element],
        }
    }

    /// Image of word index `i` under the element `w` of `A ⋆ B`.
    pub fn act(&self, w: &NormalFormWord, mut i: usize) -> usize {
        for s in w.syllables().iter().rev() {
            i = self.perm(s.factor, s.element)[i] as usize;
        }
        i
    }

    /// The permutation representing `w`.
    pub fn element_perm(&self, w: &NormalFormWord) -> Perm {
        let mut p = perm::identity(self.degree);
        for s in w.syllables().iter().rev() {
            p = perm::compose(self.perm(s.factor, s.element), &p);
        }
        p
    }

    /// Permutations of all non-identity factor elements.
    pub fn generators(&self) -> Vec<Perm> {
        self.perms_a.iter().chain(&self.perms_b).filter(|p| !perm::is_identity(p)).cloned().collect()
    }
}

/// The truncated action `σ(k)` of both factors on `U(k)`.
pub fn sigma(group: &FreeProduct, words: &TruncatedWordSet) -> Result<PermutationRep> {
    let k = words.k();
    let rep_of = |f: Factor| -> Result<Vec<Perm>> {
        (0..group.factor(f).order())
            .map(|g| {
                let p: Perm = words
                    .words()
                    .iter()
                    .enumerate()
                    .map(|(i, w)| {
                        let gw = group.left_mul_letter(f, g, w);
                        if gw.len() <= k {
                            words.index_of(&gw).expect("short words are enumerated") as u32
                        } else {
                            i as u32
                        }
                    })
                    .collect();
                if perm::is_bijection(&p) {
                    Ok(p)
                } else {
                    Err(Error::Contract(format!("truncated action of {f}{g} is not a bijection")))
                }
            })
            .collect()
    };
    Ok(PermutationRep { k, degree: words.len(), perms_a: rep_of(Factor::A)?, perms_b: rep_of(Factor::B)? })
}

/// Order of the image of `σ(k)`, or the degree if it is above the cap.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum QuotientOrder {
    Exact(#[serde(serialize_with = "serialize_biguint")] BigUint),
    NotComputed { degree: usize, cap: usize },
}

fn serialize_biguint<S: serde::Serializer>(n: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&n.to_string())
}

pub fn quotient_order(rep: &PermutationRep, degree_cap: usize) -> QuotientOrder {
    if rep.degree() > degree_cap {
        return QuotientOrder::NotComputed { degree: rep.degree(), cap: degree_cap };
    }
    QuotientOrder::Exact(perm::group_order(rep.degree(), &rep.generators()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FaithfulnessReport {
    pub k: usize,
    pub radius: usize,
    pub checked: usize,
    /// Words `g` with `σ(k)(g)(e) ≠ g`, in display form.
    pub failures: Vec<String>,
    /// First pair of distinct words of length at most `⌊k/2⌋` with the same
    /// image permutation, if any.
    pub half_ball_collision: Option<(String, String)>,
}

impl FaithfulnessReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.half_ball_collision.is_none()
    }
}

/// Checks `σ(k)(g)(e) = g` for every reduced word `g` of syllable length at
/// most `radius`, and that `σ(k)` is injective on the ball of radius `⌊k/2⌋`.
pub fn faithfulness_report(group: &FreeProduct, k: usize, radius: usize, cap: usize) -> Result<FaithfulnessReport> {
    let words = TruncatedWordSet::build(group, k, cap)?;
    let rep = sigma(group, &words)?;
    let ball = group.words_up_to(radius);
    let mut failures = Vec::new();
    for g in &ball {
        let image = rep.act(g, 0);
        if words.index_of(g) != Some(image) {
            failures.push(g.to_string());
        }
    }
    let half = group.words_up_to(k / 2);
    let half_ball_collision = check_injective_on(&half, |g| rep.element_perm(g))
        .map(|(i, j)| (half[i].to_string(), half[j].to_string()));
    Ok(FaithfulnessReport { k, radius, checked: ball.len(), failures, half_ball_collision })
}

/// Schreier graph of the action on `U(k)`: for every free generator `s` of
/// `S` and every word `w`, an edge `w → s·w` labelled by the generator's
/// position. Fixed points give loops.
pub fn schreier_graph(rep: &PermutationRep, group: &FreeProduct, gens: &GeneratingSet) -> LabeledMultigraph {
    let free = gens.free_generators(group);
    let mut edges = Vec::with_capacity(rep.degree() * free.len());
    for (label, &(f, x)) in free.iter().enumerate() {
        let p = rep.perm(f, x);
        for w in 0..rep.degree() {
            edges.push((w, p[w] as usize, label as u32));
        }
    }
    LabeledMultigraph::new(rep.degree(), edges).expect("Schreier edges in range")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{FiniteGroupTable, Syllable};

    fn fp(a: usize, b: usize) -> FreeProduct {
        FreeProduct::new(FiniteGroupTable::cyclic(a), FiniteGroupTable::cyclic(b))
    }

    fn word(g: &FreeProduct, syl: &[(Factor, usize)]) -> NormalFormWord {
        let raw: Vec<Syllable> = syl.iter().map(|&(f, x)| Syllable::new(f, x)).collect();
        g.reduce(&raw).unwrap()
    }

    #[test]
    fn word_set_sizes() {
        let g = fp(2, 2);
        assert_eq!(TruncatedWordSet::build(&g, 0, 100).unwrap().len(), 1);
        assert_eq!(TruncatedWordSet::build(&g, 2, 100).unwrap().len(), 5);
        assert_eq!(TruncatedWordSet::build(&fp(2, 3), 1, 100).unwrap().len(), 4);
        assert!(matches!(TruncatedWordSet::build(&fp(2, 3), 8, 100), Err(Error::CapExceeded { .. })));
        for k in 2..7 {
            let u = TruncatedWordSet::build(&fp(2, 3), k, 1000).unwrap();
            let (s, a, b) = u.check_partition().unwrap();
            assert_eq!(s, TruncatedWordSet::build(&fp(2, 3), k - 1, 1000).unwrap().len());
            assert_eq!(s + a + b, u.len());
        }
    }

    #[test]
    fn sigma_examples() {
        let g = fp(2, 2);
        let u = TruncatedWordSet::build(&g, 1, 100).unwrap();
        let rep = sigma(&g, &u).unwrap();
        let (e, a, b) = (0, u.index_of(&word(&g, &[(Factor::A, 1)])).unwrap(), u.index_of(&word(&g, &[(Factor::B, 1)])).unwrap());
        let pa = rep.perm(Factor::A, 1);
        assert_eq!((pa[e] as usize, pa[a] as usize, pa[b] as usize), (a, e, b));

        let g = fp(2, 3);
        let u = TruncatedWordSet::build(&g, 1, 100).unwrap();
        let rep = sigma(&g, &u).unwrap();
        let idx = |x: usize| u.index_of(&word(&g, &[(Factor::B, x)])).unwrap();
        let a = u.index_of(&word(&g, &[(Factor::A, 1)])).unwrap();
        let pb = rep.perm(Factor::B, 1);
        assert_eq!(pb[0] as usize, idx(1));
        assert_eq!(pb[idx(1)] as usize, idx(2));
        assert_eq!(pb[idx(2)] as usize, 0);
        assert_eq!(pb[a] as usize, a);
        assert!(perm::is_identity(rep.perm(Factor::A, 0)));
        assert!(perm::is_identity(rep.perm(Factor::B, 0)));
    }

    #[test]
    fn action_property() {
        for (a, b) in [(2, 3), (3, 3), (2, 4)] {
            let g = fp(a, b);
            for k in 0..=5 {
                let u = TruncatedWordSet::build(&g, k, 10_000).unwrap();
                let rep = sigma(&g, &u).unwrap();
                for f in [Factor::A, Factor::B] {
                    let t = g.factor(f);
                    for x in 0..t.order() {
                        for y in 0..t.order() {
                            assert_eq!(&perm::compose(rep.perm(f, x), rep.perm(f, y)), rep.perm(f, t.mul(x, y)));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn quotient_orders_match_closure() {
        let cases = [(2, 2, 1, 6), (2, 3, 1, 0), (2, 2, 2, 0), (2, 3, 2, 0)];
        for (a, b, k, expected) in cases {
            let g = fp(a, b);
            let u = TruncatedWordSet::build(&g, k, 100).unwrap();
            let rep = sigma(&g, &u).unwrap();
            let brute = perm::brute_force_order(rep.degree(), &rep.generators(), 10_000_000).unwrap();
            if expected > 0 {
                assert_eq!(brute, expected);
            }
            assert_eq!(quotient_order(&rep, 256), QuotientOrder::Exact(BigUint::from(brute)));
        }
        let g = fp(2, 3);
        let rep = sigma(&g, &TruncatedWordSet::build(&g, 0, 10).unwrap()).unwrap();
        assert_eq!(quotient_order(&rep, 256), QuotientOrder::Exact(BigUint::from(1u32)));
        assert!(matches!(quotient_order(&rep, 0), QuotientOrder::NotComputed { .. }));
    }

    #[test]
    fn faithfulness() {
        assert!(faithfulness_report(&fp(2, 2), 3, 0, 1000).unwrap().passed());
        let r = faithfulness_report(&fp(2, 2), 3, 3, 1000).unwrap();
        assert!(r.failures.is_empty());
        assert_eq!(r.checked, 7);
        let r = faithfulness_report(&fp(2, 3), 2, 3, 1000).unwrap();
        assert_eq!(r.failures.len(), 14 - 8);
        assert!(r.failures.iter().all(|w| w.matches('.').count() == 2));
    }

    #[test]
    fn injective_on_half_ball() {
        let g = fp(2, 3);
        let u = TruncatedWordSet::build(&g, 3, 1000).unwrap();
        let rep = sigma(&g, &u).unwrap();
        let ball = g.words_up_to(2);
        assert_eq!(check_injective_on(&ball, |w| rep.element_perm(w)), None);
    }

    #[test]
    fn schreier_graph_shape() {
        let g = fp(2, 2);
        let u = TruncatedWordSet::build(&g, 1, 100).unwrap();
        let rep = sigma(&g, &u).unwrap();
        let s = GeneratingSet::all_non_identity(&g);
        let x = schreier_graph(&rep, &g, &s);
        assert_eq!(x.vertex_count(), 3);
        assert_eq!(x.regular_degree().unwrap(), 4);
        let b = u.index_of(&word(&g, &[(Factor::B, 1)])).unwrap();
        assert!(x.edges().iter().any(|&(p, q, l)| p == b && q == b && l == 0));

        let g = fp(2, 3);
        let u = TruncatedWordSet::build(&g, 4, 1000).unwrap();
        let rep = sigma(&g, &u).unwrap();
        let x = schreier_graph(&rep, &g, &GeneratingSet::all_non_identity(&g));
        assert_eq!(x.vertex_count(), 22);
        assert!(x.is_connected());
        assert_eq!(x.regular_degree().unwrap(), 4);
    }
}
