//! Permutations on `0..n` and exact group orders by Schreier–Sims.

use std::collections::{HashSet, VecDeque};

use num_bigint::BigUint;
use num_traits::One;

/// A permutation stored as its image array: `p[x]` is the image of `x`.
pub type Perm = Vec<u32>;

pub fn identity(n: usize) -> Perm {
    (0..n as u32).collect()
}

pub fn is_identity(p: &[u32]) -> bool {
    p.iter().enumerate().all(|(i, &x)| i as u32 == x)
}

/// `p ∘ q`: apply `q` first, then `p`.
pub fn compose(p: &[u32], q: &[u32]) -> Perm {
    q.iter().map(|&x| p[x as usize]).collect()
}

pub fn inverse(p: &[u32]) -> Perm {
    let mut inv = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        inv[x as usize] = i as u32;
    }
    inv
}

pub fn is_bijection(p: &[u32]) -> bool {
    let mut seen = vec![false; p.len()];
    for &x in p {
        match seen.get_mut(x as usize) {
            Some(s) if !*s => *s = true,
            _ => return false,
        }
    }
    true
}

/// Base and strong generating set with base points `0..n`, built by the
/// deterministic Schreier–Sims procedure (Knuth's algorithms A and B).
pub struct StabilizerChain {
    degree: usize,
    /// Strong generators per level.
    gens: Vec<Vec<Perm>>,
    /// `reps[k][j]` maps `k` to `j` and fixes `0..k`.
    reps: Vec<Vec<Option<Perm>>>,
}

impl StabilizerChain {
    pub fn new(degree: usize, generators: &[Perm]) -> Self {
        let mut chain = StabilizerChain {
            degree,
            gens: vec![Vec::new(); degree],
            reps: (0..degree)
                .map(|k| {
                    let mut row = vec![None; degree];
                    row[k] = Some(identity(degree));
                    row
                })
                .collect(),
        };
        for g in generators {
            assert_eq!(g.len(), degree, "generator of wrong degree");
            if !is_identity(g) {
                chain.add(0, g.clone());
            }
        }
        chain
    }

    /// Sifts `p` from level `k`; returns the residue (identity iff member).
    fn sift(&self, k: usize, mut p: Perm) -> Option<Perm> {
        for level in k..self.degree {
            let j = p[level] as usize;
            let rep = self.reps[level][j].as_ref()?;
            p = compose(&inverse(rep), &p);
        }
        Some(p)
    }

    pub fn contains(&self, p: &[u32]) -> bool {
        p.len() == self.degree && self.sift(0, p.to_vec()).is_some_and(|r| is_identity(&r))
    }

    /// Algorithm A: adjoin `p` (which fixes `0..k`) to level `k`.
    fn add(&mut self, k: usize, p: Perm) {
        if self.sift(k, p.clone()).is_some_and(|r| is_identity(&r)) {
            return;
        }
        self.gens[k].push(p.clone());
        let reps: Vec<Perm> = self.reps[k].iter().flatten().cloned().collect();
        for sigma in reps {
            self.close(k, compose(&p, &sigma));
        }
    }

    /// Algorithm B: record `p` as a coset representative at level `k`, or
    /// push its residue one level down.
    fn close(&mut self, k: usize, p: Perm) {
        let j = p[k] as usize;
        match &self.reps[k][j] {
            None => {
                self.reps[k][j] = Some(p.clone());
                let gens = self.gens[k].clone();
                for tau in gens {
                    self.close(k, compose(&tau, &p));
                }
            }
            Some(rep) => {
                let residue = compose(&inverse(rep), &p);
                if !is_identity(&residue) {
                    self.add(k + 1, residue);
                }
            }
        }
    }

    /// Product of the level orbit sizes.
    pub fn order(&self) -> BigUint {
        let mut order = BigUint::one();
        for row in &self.reps {
            order *= BigUint::from(row.iter().flatten().count());
        }
        order
    }
}

/// Order of the group generated by `generators`, all of degree `degree`.
pub fn group_order(degree: usize, generators: &[Perm]) -> BigUint {
    StabilizerChain::new(degree, generators).order()
}

/// Order by explicit closure, stopping with `None` once `cap` elements are found.
pub fn brute_force_order(degree: usize, generators: &[Perm], cap: usize) -> Option<usize> {
    let id = identity(degree);
    let mut seen: HashSet<Perm> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in generators {
            let y = compose(g, &x);
            if seen.insert(y.clone()) {
                if seen.len() > cap {
                    return None;
                }
                queue.push_back(y);
            }
        }
    }
    Some(seen.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cycle(n: usize) -> Perm {
        (0..n as u32).map(|i| (i + 1) % n as u32).collect()
    }

    fn transposition(n: usize, a: usize, b: usize) -> Perm {
        let mut p = identity(n);
        p.swap(a, b);
        p
    }

    #[test]
    fn known_orders() {
        assert_eq!(group_order(5, &[]), BigUint::from(1u32));
        assert_eq!(group_order(5, &[cycle(5)]), BigUint::from(5u32));
        assert_eq!(group_order(5, &[cycle(5), transposition(5, 0, 1)]), BigUint::from(120u32));
        assert_eq!(group_order(10, &[cycle(10), transposition(10, 0, 1)]), BigUint::from(3_628_800u32));
        // A_5 via 3-cycles
        let c1: Perm = vec![1, 2, 0, 3, 4];
        let c2: Perm = vec![0, 1, 3, 4, 2];
        assert_eq!(group_order(5, &[c1, c2]), BigUint::from(60u32));
        // dihedral group of the 8-gon
        let refl: Perm = (0..8u32).map(|i| (8 - i) % 8).collect();
        assert_eq!(group_order(8, &[cycle(8), refl]), BigUint::from(16u32));
    }

    #[test]
    fn large_symmetric_group() {
        let n = 40;
        let order = group_order(n, &[cycle(n), transposition(n, 0, 1)]);
        let expected: BigUint = (1..=n as u32).map(BigUint::from).product();
        assert_eq!(order, expected);
    }

    #[test]
    fn membership() {
        let chain = StabilizerChain::new(4, &[vec![1, 0, 2, 3], vec![0, 1, 3, 2]]);
        assert!(chain.contains(&[1, 0, 3, 2]));
        assert!(!chain.contains(&[2, 1, 0, 3]));
    }

    fn perm_strategy(n: usize) -> impl Strategy<Value = Perm> {
        Just((0..n as u32).collect::<Vec<u32>>()).prop_shuffle()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn agrees_with_closure(gens in prop::collection::vec(perm_strategy(7), 1..4)) {
            let exact = group_order(7, &gens);
            let brute = brute_force_order(7, &gens, 10_000).unwrap();
            prop_assert_eq!(exact, BigUint::from(brute));
        }
    }
}
