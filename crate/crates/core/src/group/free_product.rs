use std::fmt;

use serde::{Deserialize, Serialize};

use super::table::FiniteGroupTable;
use crate::error::{Error, Result};

/// Which free factor a syllable belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Factor {
    A,
    B,
}

impl Factor {
    pub fn other(self) -> Factor {
        match self {
            Factor::A => Factor::B,
            Factor::B => Factor::A,
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Factor::A => "A",
            Factor::B => "B",
        })
    }
}

/// A non-identity element of one factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Syllable {
    pub factor: Factor,
    pub element: usize,
}

impl Syllable {
    pub fn new(factor: Factor, element: usize) -> Self {
        Syllable { factor, element }
    }
}

/// Reduced word in `A ⋆ B`: syllables alternate factors and none is the
/// identity. Syllables are stored in reading order, so `syllables[0]` is the
/// leftmost letter and the last entry is the letter applied first.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NormalFormWord {
    syllables: Vec<Syllable>,
}

impl NormalFormWord {
    pub fn identity() -> Self {
        Self::default()
    }

    /// Wraps a syllable list that is already known to be reduced.
    pub(crate) fn from_reduced(syllables: Vec<Syllable>) -> Self {
        debug_assert!(syllables.windows(2).all(|w| w[0].factor != w[1].factor));
        NormalFormWord { syllables }
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    /// Syllable length.
    pub fn len(&self) -> usize {
        self.syllables.len()
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Leftmost syllable.
    pub fn leftmost(&self) -> Option<Syllable> {
        self.syllables.first().copied()
    }

    /// Rightmost syllable (the one applied first).
    pub fn rightmost(&self) -> Option<Syllable> {
        self.syllables.last().copied()
    }
}

impl fmt::Display for NormalFormWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return f.write_str("e");
        }
        for (i, s) in self.syllables.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{}{}", s.factor, s.element)?;
        }
        Ok(())
    }
}

/// The free product of two finite groups, with normal-form arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeProduct {
    a: FiniteGroupTable,
    b: FiniteGroupTable,
}

impl FreeProduct {
    pub fn new(a: FiniteGroupTable, b: FiniteGroupTable) -> Self {
        FreeProduct { a, b }
    }

    pub fn factor(&self, f: Factor) -> &FiniteGroupTable {
        match f {
            Factor::A => &self.a,
            Factor::B => &self.b,
        }
    }

    pub fn a(&self) -> &FiniteGroupTable {
        &self.a
    }

    pub fn b(&self) -> &FiniteGroupTable {
        &self.b
    }

    /// The one-letter word for `element` of factor `f` (identity if trivial).
    pub fn letter(&self, f: Factor, element: usize) -> Result<NormalFormWord> {
        self.check_element(f, element)?;
        if element == self.factor(f).identity() {
            Ok(NormalFormWord::identity())
        } else {
            Ok(NormalFormWord::from_reduced(vec![Syllable::new(f, element)]))
        }
    }

    fn check_element(&self, f: Factor, element: usize) -> Result<()> {
        if self.factor(f).contains(element) {
            Ok(())
        } else {
            Err(Error::Input(format!(
                "element {element} out of range for factor {f} of order {}",
                self.factor(f).order()
            )))
        }
    }

    /// Reduces an arbitrary syllable list (identity syllables and adjacent
    /// same-factor syllables allowed) to normal form.
    pub fn reduce(&self, raw: &[Syllable]) -> Result<NormalFormWord> {
        let mut out: Vec<Syllable> = Vec::with_capacity(raw.len());
        for &s in raw {
            self.check_element(s.factor, s.element)?;
            self.push_reduced(&mut out, s);
        }
        Ok(NormalFormWord::from_reduced(out))
    }

    /// Appends `s` on the right of a reduced stack, merging and cancelling.
    fn push_reduced(&self, out: &mut Vec<Syllable>, s: Syllable) {
        let g = self.factor(s.factor);
        if s.element == g.identity() {
            return;
        }
        match out.last_mut() {
            Some(top) if top.factor == s.factor => {
                let z = g.mul(top.element, s.element);
                if z == g.identity() {
                    out.pop();
                } else {
                    top.element = z;
                }
            }
            _ => out.push(s),
        }
    }

    fn check_word(&self, w: &NormalFormWord) -> Result<()> {
        for (i, s) in w.syllables.iter().enumerate() {
            self.check_element(s.factor, s.element)?;
            if s.element == self.factor(s.factor).identity() {
                return Err(Error::Input(format!("identity syllable at position {i} in {w}")));
            }
        }
        if w.syllables.windows(2).any(|p| p[0].factor == p[1].factor) {
            return Err(Error::Input(format!("word {w} does not alternate factors")));
        }
        Ok(())
    }

    /// Product `w1 · w2`, validating both words against this free product.
    pub fn multiply(&self, w1: &NormalFormWord, w2: &NormalFormWord) -> Result<NormalFormWord> {
        self.check_word(w1)?;
        self.check_word(w2)?;
        Ok(self.mul(w1, w2))
    }

    /// Product of words already known to belong to this free product.
    pub fn mul(&self, w1: &NormalFormWord, w2: &NormalFormWord) -> NormalFormWord {
        let mut out = w1.syllables.clone();
        out.reserve(w2.len());
        let mut rest = w2.syllables.iter();
        // Cancellation only happens at the junction; once a syllable survives
        // without cancelling, the remainder is appended verbatim.
        for &s in rest.by_ref() {
            let before = out.len();
            let merged_into_top = matches!(out.last(), Some(t) if t.factor == s.factor);
            self.push_reduced(&mut out, s);
            if !(merged_into_top && out.len() < before) {
                break;
            }
        }
        out.extend(rest.copied());
        NormalFormWord::from_reduced(out)
    }

    /// Left multiplication by a single factor element.
    pub fn left_mul_letter(&self, f: Factor, element: usize, w: &NormalFormWord) -> NormalFormWord {
        let g = self.factor(f);
        if element == g.identity() {
            return w.clone();
        }
        match w.syllables.first() {
            Some(first) if first.factor == f => {
                let z = g.mul(element, first.element);
                let mut out = Vec::with_capacity(w.len());
                if z != g.identity() {
                    out.push(Syllable::new(f, z));
                }
                out.extend_from_slice(&w.syllables[1..]);
                NormalFormWord::from_reduced(out)
            }
            _ => {
                let mut out = Vec::with_capacity(w.len() + 1);
                out.push(Syllable::new(f, element));
                out.extend_from_slice(&w.syllables);
                NormalFormWord::from_reduced(out)
            }
        }
    }

    /// Right multiplication by a single factor element.
    pub fn right_mul_letter(&self, w: &NormalFormWord, f: Factor, element: usize) -> NormalFormWord {
        let mut out = w.syllables.clone();
        self.push_reduced(&mut out, Syllable::new(f, element));
        NormalFormWord::from_reduced(out)
    }

    pub fn inverse(&self, w: &NormalFormWord) -> NormalFormWord {
        let syl = w
            .syllables
            .iter()
            .rev()
            .map(|s| Syllable::new(s.factor, self.factor(s.factor).inv(s.element)))
            .collect();
        NormalFormWord::from_reduced(syl)
    }

    /// Commutator `x y x⁻¹ y⁻¹`.
    pub fn commutator(&self, x: &NormalFormWord, y: &NormalFormWord) -> NormalFormWord {
        let xy = self.mul(x, y);
        let xyxi = self.mul(&xy, &self.inverse(x));
        self.mul(&xyxi, &self.inverse(y))
    }

    /// Image in `A × B`: ordered product of the A-syllables and of the B-syllables.
    pub fn project(&self, w: &NormalFormWord) -> (usize, usize) {
        let (mut x, mut y) = (self.a.identity(), self.b.identity());
        for s in &w.syllables {
            match s.factor {
                Factor::A => x = self.a.mul(x, s.element),
                Factor::B => y = self.b.mul(y, s.element),
            }
        }
        (x, y)
    }

    /// Whether `w` lies in the kernel of the projection to `A × B`.
    pub fn in_kernel(&self, w: &NormalFormWord) -> bool {
        self.project(w) == (self.a.identity(), self.b.identity())
    }

    /// All reduced words of syllable length at most `k`, shortlex ordered
    /// (by length, then by syllables), identity first.
    pub fn words_up_to(&self, k: usize) -> Vec<NormalFormWord> {
        let mut all = vec![NormalFormWord::identity()];
        let mut layer = vec![NormalFormWord::identity()];
        for _ in 0..k {
            let mut next = Vec::new();
            for w in &layer {
                for f in [Factor::A, Factor::B] {
                    if w.leftmost().is_some_and(|s| s.factor == f) {
                        continue;
                    }
                    for x in self.factor(f).non_identity() {
                        let mut syl = Vec::with_capacity(w.len() + 1);
                        syl.push(Syllable::new(f, x));
                        syl.extend_from_slice(&w.syllables);
                        next.push(NormalFormWord::from_reduced(syl));
                    }
                }
            }
            next.sort();
            all.extend(next.iter().cloned());
            layer = next;
        }
        all
    }

    /// Number of reduced words of syllable length at most `k`.
    pub fn count_words_up_to(&self, k: usize) -> u128 {
        let (p, q) = ((self.a.order() - 1) as u128, (self.b.order() - 1) as u128);
        // ending (leftmost) in A / in B, per length
        let (mut ea, mut eb) = (p, q);
        let mut total = 1u128;
        for len in 1..=k {
            if len > 1 {
                let (na, nb) = (eb.saturating_mul(p), ea.saturating_mul(q));
                ea = na;
                eb = nb;
            }
            total = total.saturating_add(ea).saturating_add(eb);
        }
        total
    }
}

/// Returns the first pair of positions whose images coincide, or `None` if
/// `quotient_map` is injective on `items`.
pub fn check_injective_on<T, K, F>(items: &[T], quotient_map: F) -> Option<(usize, usize)>
where
    K: std::hash::Hash + Eq,
    F: Fn(&T) -> K,
{
    let mut seen = std::collections::HashMap::with_capacity(items.len());
    for (i, item) in items.iter().enumerate() {
        if let Some(&j) = seen.get(&quotient_map(item)) {
            return Some((j, i));
        }
        seen.insert(quotient_map(item), i);
    }
    None
}
