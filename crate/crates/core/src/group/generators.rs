use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::free_product::{Factor, FreeProduct};
use super::table::FiniteGroupTable;
use crate::error::{Error, Result};

/// Generators of a free product `A ⋆ B`, each tagged with its factor.
///
/// With the symmetric flag set the list is closed under factor-wise
/// inversion. Identity elements are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratingSet {
    generators: Vec<(Factor, usize)>,
    symmetric: bool,
}

impl GeneratingSet {
    /// Builds a generating set; with `symmetric` the inverses are added.
    /// Duplicates and identities are dropped; order is canonical (sorted).
    pub fn new(group: &FreeProduct, generators: &[(Factor, usize)], symmetric: bool) -> Result<Self> {
        let mut out = Vec::new();
        for &(f, x) in generators {
            let t = group.factor(f);
            if !t.contains(x) {
                return Err(Error::Input(format!("generator {x} out of range for factor {f}")));
            }
            if x == t.identity() {
                continue;
            }
            out.push((f, x));
            if symmetric {
                out.push((f, t.inv(x)));
            }
        }
        out.sort_unstable();
        out.dedup();
        Ok(GeneratingSet { generators: out, symmetric })
    }

    /// `S_A ∪ S_B` with `S_A = A ∖ {e}` and `S_B = B ∖ {e}`.
    pub fn all_non_identity(group: &FreeProduct) -> Self {
        let mut generators: Vec<(Factor, usize)> = group.a().non_identity().map(|x| (Factor::A, x)).collect();
        generators.extend(group.b().non_identity().map(|x| (Factor::B, x)));
        GeneratingSet { generators, symmetric: true }
    }

    pub fn generators(&self) -> &[(Factor, usize)] {
        &self.generators
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Elements of one factor.
    pub fn in_factor(&self, f: Factor) -> Vec<usize> {
        self.generators.iter().filter(|g| g.0 == f).map(|g| g.1).collect()
    }

    /// Checks that each factor part generates its factor (so the whole set
    /// generates the free product).
    pub fn check_generates(&self, group: &FreeProduct) -> Result<()> {
        for f in [Factor::A, Factor::B] {
            Generators::new(group.factor(f), &self.in_factor(f))?.word_lengths(group.factor(f))?;
        }
        Ok(())
    }

    /// One representative per `{s, s⁻¹}` class, in the order of the list.
    pub fn free_generators(&self, group: &FreeProduct) -> Vec<(Factor, usize)> {
        let mut out: Vec<(Factor, usize)> = Vec::new();
        for &(f, x) in &self.generators {
            let xi = group.factor(f).inv(x);
            if !out.contains(&(f, x)) && !out.contains(&(f, xi)) {
                out.push((f, x));
            }
        }
        out
    }
}

/// A symmetric generating set of a single finite group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generators {
    elements: Vec<usize>,
}

impl Generators {
    /// Symmetric closure of `elements` (identities dropped, sorted).
    pub fn new(group: &FiniteGroupTable, elements: &[usize]) -> Result<Self> {
        let mut out = Vec::new();
        for &x in elements {
            if !group.contains(x) {
                return Err(Error::Input(format!("generator {x} out of range for order {}", group.order())));
            }
            if x != group.identity() {
                out.push(x);
                out.push(group.inv(x));
            }
        }
        out.sort_unstable();
        out.dedup();
        Ok(Generators { elements: out })
    }

    /// Uses `elements` as given, rejecting lists that are not closed under
    /// inversion.
    pub fn from_symmetric(group: &FiniteGroupTable, elements: &[usize]) -> Result<Self> {
        for &x in elements {
            if !group.contains(x) {
                return Err(Error::Input(format!("generator {x} out of range for order {}", group.order())));
            }
            if !elements.contains(&group.inv(x)) {
                return Err(Error::Input(format!(
                    "generating set is not symmetric: inverse of {x} is missing"
                )));
            }
        }
        Self::new(group, elements)
    }

    /// Every non-identity element.
    pub fn all(group: &FiniteGroupTable) -> Self {
        Generators { elements: group.non_identity().collect() }
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// One representative per `{s, s⁻¹}` class (the smaller index).
    /// Each class contributes one edge per vertex to Cayley and Schreier graphs.
    pub fn free_generators(&self, group: &FiniteGroupTable) -> Vec<usize> {
        self.elements.iter().copied().filter(|&x| x <= group.inv(x)).collect()
    }

    /// Word length of every element (BFS from the identity under right
    /// multiplication), or the unreached elements if these do not generate.
    pub fn word_lengths(&self, group: &FiniteGroupTable) -> Result<Vec<u32>> {
        let n = group.order();
        let mut dist = vec![u32::MAX; n];
        dist[group.identity()] = 0;
        let mut queue = VecDeque::from([group.identity()]);
        while let Some(x) = queue.pop_front() {
            for &s in &self.elements {
                let y = group.mul(x, s);
                if dist[y] == u32::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        let unreached: Vec<usize> = (0..n).filter(|&x| dist[x] == u32::MAX).collect();
        if unreached.is_empty() {
            Ok(dist)
        } else {
            Err(Error::NotGenerating { unreached })
        }
    }
}

/// Word length of `x` in `group` with respect to `gens`.
pub fn cayley_word_length(group: &FiniteGroupTable, gens: &Generators, x: usize) -> Result<u32> {
    if !group.contains(x) {
        return Err(Error::Input(format!("element {x} out of range")));
    }
    Ok(gens.word_lengths(group)?[x])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v4() -> FiniteGroupTable {
        FiniteGroupTable::direct_product(&FiniteGroupTable::cyclic(2), &FiniteGroupTable::cyclic(2))
    }

    #[test]
    fn word_length_examples() {
        let z4 = FiniteGroupTable::cyclic(4);
        let gens = Generators::new(&z4, &[1]).unwrap();
        assert_eq!(gens.elements(), &[1, 3]);
        assert_eq!(cayley_word_length(&z4, &gens, 0).unwrap(), 0);
        assert_eq!(cayley_word_length(&z4, &gens, 2).unwrap(), 2);
        let g = v4();
        // (1,0) = index 2, (0,1) = index 1, (1,1) = index 3
        let gens = Generators::new(&g, &[2, 1]).unwrap();
        assert_eq!(cayley_word_length(&g, &gens, 3).unwrap(), 2);
    }

    #[test]
    fn from_symmetric_rejects_one_sided_sets() {
        let z4 = FiniteGroupTable::cyclic(4);
        assert!(Generators::from_symmetric(&z4, &[1]).is_err());
        assert_eq!(Generators::from_symmetric(&z4, &[1, 3]).unwrap().elements(), &[1, 3]);
    }

    #[test]
    fn not_generating_lists_unreached() {
        let z4 = FiniteGroupTable::cyclic(4);
        let gens = Generators::new(&z4, &[2]).unwrap();
        match cayley_word_length(&z4, &gens, 1) {
            Err(Error::NotGenerating { unreached }) => assert_eq!(unreached, vec![1, 3]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn free_generator_classes() {
        let z4 = FiniteGroupTable::cyclic(4);
        assert_eq!(Generators::new(&z4, &[1]).unwrap().free_generators(&z4), vec![1]);
        assert_eq!(Generators::all(&z4).free_generators(&z4), vec![1, 2]);
        let fp = FreeProduct::new(FiniteGroupTable::cyclic(2), FiniteGroupTable::cyclic(3));
        let s = GeneratingSet::all_non_identity(&fp);
        assert_eq!(s.len(), 3);
        assert_eq!(s.free_generators(&fp), vec![(Factor::A, 1), (Factor::B, 1)]);
        s.check_generates(&fp).unwrap();
        let partial = GeneratingSet::new(&fp, &[(Factor::A, 1)], true).unwrap();
        assert!(partial.check_generates(&fp).is_err());
    }

    /// Subadditivity and symmetry of word length on every pair, for a few
    /// small groups and generating sets.
    #[test]
    fn length_is_subadditive_and_symmetric() {
        let cases: Vec<(FiniteGroupTable, Vec<usize>)> = vec![
            (FiniteGroupTable::cyclic(7), vec![1]),
            (FiniteGroupTable::cyclic(12), vec![3, 4]),
            (FiniteGroupTable::dihedral(5), vec![1, 5]),
            (FiniteGroupTable::quaternion(), vec![1, 2]),
            (FiniteGroupTable::symmetric(4), vec![1, 2]),
            (FiniteGroupTable::alternating(4), vec![1, 2]),
            (v4(), vec![1, 2]),
        ];
        for (g, s) in cases {
            let gens = Generators::new(&g, &s).unwrap();
            let len = gens.word_lengths(&g).unwrap();
            for x in 0..g.order() {
                assert_eq!(len[x], len[g.inv(x)]);
                for y in 0..g.order() {
                    assert!(len[g.mul(x, y)] <= len[x] + len[y]);
                }
            }
        }
    }
}
