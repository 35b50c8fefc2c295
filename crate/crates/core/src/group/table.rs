use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Groups up to this order get an exhaustive associativity check; larger
/// tables are checked on a seeded random sample of triples.
pub const EXHAUSTIVE_ASSOCIATIVITY_MAX: usize = 64;
const SAMPLED_TRIPLES: usize = 200_000;

/// A finite group given by its full multiplication table.
///
/// Elements are indices `0..order`. The table is validated on construction
/// and immutable afterwards.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroupTable {
    order: usize,
    mul: Vec<usize>,
    identity: usize,
    inv: Vec<usize>,
    names: Vec<String>,
}

impl FiniteGroupTable {
    /// Builds a group from rows of the multiplication table (`rows[x][y] = x·y`).
    pub fn from_rows(rows: Vec<Vec<usize>>, identity: usize, names: Option<Vec<String>>) -> Result<Self> {
        let order = rows.len();
        if order == 0 {
            return Err(Error::NotAGroup("empty table".into()));
        }
        let mut mul = Vec::with_capacity(order * order);
        for (x, row) in rows.iter().enumerate() {
            if row.len() != order {
                return Err(Error::NotAGroup(format!(
                    "row {x} has {} entries, expected {order}",
                    row.len()
                )));
            }
            mul.extend_from_slice(row);
        }
        Self::from_flat(order, mul, identity, names)
    }

    fn from_flat(order: usize, mul: Vec<usize>, identity: usize, names: Option<Vec<String>>) -> Result<Self> {
        if let Some(bad) = mul.iter().find(|&&z| z >= order) {
            return Err(Error::NotAGroup(format!("entry {bad} out of range for order {order}")));
        }
        if identity >= order {
            return Err(Error::NotAGroup(format!("identity {identity} out of range")));
        }
        let names = match names {
            Some(n) if n.len() == order => n,
            Some(n) => {
                return Err(Error::NotAGroup(format!(
                    "{} names supplied for {order} elements",
                    n.len()
                )))
            }
            None => (0..order).map(|i| i.to_string()).collect(),
        };
        let mut group = FiniteGroupTable {
            order,
            mul,
            identity,
            inv: vec![usize::MAX; order],
            names,
        };
        group.validate()?;
        Ok(group)
    }

    /// Identity, inverses and associativity. Fills in the inverse table.
    fn validate(&mut self) -> Result<()> {
        let n = self.order;
        let e = self.identity;
        for x in 0..n {
            if self.mul(e, x) != x || self.mul(x, e) != x {
                return Err(Error::NotAGroup(format!("{e} is not a two-sided identity at {x}")));
            }
        }
        for x in 0..n {
            let inv = (0..n).find(|&y| self.mul(x, y) == e);
            match inv {
                Some(y) if self.mul(y, x) == e => self.inv[x] = y,
                _ => return Err(Error::NotAGroup(format!("element {x} has no inverse"))),
            }
        }
        let assoc = |g: &Self, x: usize, y: usize, z: usize| g.mul(g.mul(x, y), z) == g.mul(x, g.mul(y, z));
        if n <= EXHAUSTIVE_ASSOCIATIVITY_MAX {
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        if !assoc(self, x, y, z) {
                            return Err(Error::NotAGroup(format!("associativity fails at ({x}, {y}, {z})")));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
            for _ in 0..SAMPLED_TRIPLES {
                let (x, y, z) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                if !assoc(self, x, y, z) {
                    return Err(Error::NotAGroup(format!("associativity fails at ({x}, {y}, {z})")));
                }
            }
        }
        Ok(())
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// Z/n with elements `0..n` and addition mod n.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1, "cyclic group of order 0");
        let mul = (0..n * n).map(|i| (i / n + i % n) % n).collect();
        Self::from_flat(n, mul, 0, None).expect("cyclic table is a group")
    }

    /// Dihedral group of order 2n: `r^i` is index `i`, `s r^i` is index `n + i`.
    pub fn dihedral(n: usize) -> Self {
        assert!(n >= 1);
        let decode = |x: usize| (x / n, x % n); // (reflection bit, rotation)
        let order = 2 * n;
        let mut mul = Vec::with_capacity(order * order);
        for x in 0..order {
            for y in 0..order {
                let ((f1, r1), (f2, r2)) = (decode(x), decode(y));
                // (s^f1 r^r1)(s^f2 r^r2) = s^(f1+f2) r^(±r1 + r2)
                let r = if f2 == 0 { (r1 + r2) % n } else { (n - r1 + r2) % n };
                mul.push(((f1 + f2) % 2) * n + r);
            }
        }
        let names = (0..order)
            .map(|x| {
                let (f, r) = decode(x);
                match (f, r) {
                    (0, 0) => "e".to_string(),
                    (0, r) => format!("r{r}"),
                    (_, 0) => "s".to_string(),
                    (_, r) => format!("sr{r}"),
                }
            })
            .collect();
        Self::from_flat(order, mul, 0, Some(names)).expect("dihedral table is a group")
    }

    /// Quaternion group Q8.
    pub fn quaternion() -> Self {
        // Elements ±1, ±i, ±j, ±k encoded as (sign, unit) with unit in {1,i,j,k}.
        const UNIT: [[(bool, usize); 4]; 4] = [
            [(false, 0), (false, 1), (false, 2), (false, 3)],
            [(false, 1), (true, 0), (false, 3), (true, 2)],
            [(false, 2), (true, 3), (true, 0), (false, 1)],
            [(false, 3), (false, 2), (true, 1), (true, 0)],
        ];
        let mut mul = Vec::with_capacity(64);
        for x in 0..8 {
            for y in 0..8 {
                let (sx, ux) = (x / 4 == 1, x % 4);
                let (sy, uy) = (y / 4 == 1, y % 4);
                let (s, u) = UNIT[ux][uy];
                let sign = sx ^ sy ^ s;
                mul.push(usize::from(sign) * 4 + u);
            }
        }
        let names = ["1", "i", "j", "k", "-1", "-i", "-j", "-k"].iter().map(|s| s.to_string()).collect();
        Self::from_flat(8, mul, 0, Some(names)).expect("Q8 table is a group")
    }

    /// Symmetric group on `n` points via permutation closure.
    pub fn symmetric(n: usize) -> Self {
        assert!(n >= 1);
        if n == 1 {
            return Self::trivial();
        }
        let transposition: Vec<usize> = (0..n).map(|i| match i { 0 => 1, 1 => 0, i => i }).collect();
        let cycle: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        Self::from_permutations(&[transposition, cycle], usize::MAX).expect("symmetric group")
    }

    /// Alternating group on `n ≥ 3` points.
    pub fn alternating(n: usize) -> Self {
        assert!(n >= 3);
        let gens: Vec<Vec<usize>> = (2..n)
            .map(|k| (0..n).map(|i| if i == 0 { 1 } else if i == 1 { k } else if i == k { 0 } else { i }).collect())
            .collect();
        Self::from_permutations(&gens, usize::MAX).expect("alternating group")
    }

    /// `(Z/2)^rank` with elements as bit masks and product XOR; the standard
    /// basis vectors are `1 << i`.
    pub fn elementary_abelian_2(rank: usize) -> Self {
        assert!(rank < 16, "rank too large for a multiplication table");
        let order = 1usize << rank;
        let mul = (0..order * order).map(|i| (i / order) ^ (i % order)).collect();
        let names = (0..order).map(|x| format!("{x:0width$b}", width = rank.max(1))).collect();
        Self::from_flat(order, mul, 0, Some(names)).expect("elementary abelian table is a group")
    }

    pub fn direct_product(g: &Self, h: &Self) -> Self {
        let (n, m) = (g.order, h.order);
        let order = n * m;
        let mut mul = Vec::with_capacity(order * order);
        for x in 0..order {
            for y in 0..order {
                mul.push(g.mul(x / m, y / m) * m + h.mul(x % m, y % m));
            }
        }
        let names = (0..order).map(|x| format!("({},{})", g.names[x / m], h.names[x % m])).collect();
        Self::from_flat(order, mul, g.identity * m + h.identity, Some(names)).expect("product of groups")
    }

    /// The permutation group generated by `gens` (all of the same degree),
    /// as a table. Elements are listed in breadth-first order from the
    /// identity, so index 0 is the identity.
    pub fn from_permutations(gens: &[Vec<usize>], cap: usize) -> Result<Self> {
        let degree = gens.first().map_or(0, Vec::len);
        if gens.iter().any(|g| g.len() != degree) {
            return Err(Error::Input("permutations of different degrees".into()));
        }
        let identity: Vec<usize> = (0..degree).collect();
        let mut elements = vec![identity.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(identity, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in gens {
                // right multiplication: (x·g)(p) = g(x(p)) acting on the left of points
                let prod: Vec<usize> = elements[i].iter().map(|&p| g[p]).collect();
                if !index.contains_key(&prod) {
                    if elements.len() >= cap {
                        return Err(Error::CapExceeded {
                            what: "permutation group closure",
                            needed: elements.len() as u128 + 1,
                            cap: cap as u128,
                        });
                    }
                    index.insert(prod.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(prod);
                }
            }
        }
        let order = elements.len();
        let mut mul = Vec::with_capacity(order * order);
        for x in &elements {
            for y in &elements {
                let prod: Vec<usize> = x.iter().map(|&p| y[p]).collect();
                mul.push(index[&prod]);
            }
        }
        let names = elements.iter().map(|p| format!("{p:?}")).collect();
        Self::from_flat(order, mul, 0, Some(names))
    }

    /// Parses the plain-text table format: `order N`, N rows of N indices,
    /// then `identity i`. Blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (ln, header) = lines.next().ok_or(Error::Parse { line: 1, message: "empty table file".into() })?;
        let order: usize = header
            .strip_prefix("order")
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| Error::Parse { line: ln, message: format!("expected `order N`, got `{header}`") })?;
        let mut rows = Vec::with_capacity(order);
        for _ in 0..order {
            let (ln, line) = lines.next().ok_or(Error::Parse { line: ln, message: "table truncated".into() })?;
            let row = line
                .split_whitespace()
                .map(|t| t.parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Parse { line: ln, message: e.to_string() })?;
            rows.push(row);
        }
        let (ln, footer) = lines.next().ok_or(Error::Parse { line: ln, message: "missing `identity i` line".into() })?;
        let identity: usize = footer
            .strip_prefix("identity")
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| Error::Parse { line: ln, message: format!("expected `identity i`, got `{footer}`") })?;
        if let Some((ln, extra)) = lines.next() {
            return Err(Error::Parse { line: ln, message: format!("unexpected trailing content `{extra}`") });
        }
        Self::from_rows(rows, identity, None)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("order {}\n", self.order);
        for x in 0..self.order {
            let row: Vec<String> = (0..self.order).map(|y| self.mul(x, y).to_string()).collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
        let _ = writeln!(out, "identity {}", self.identity);
        out
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.mul[x * self.order + y]
    }

    #[inline]
    pub fn inv(&self, x: usize) -> usize {
        self.inv[x]
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    pub fn contains(&self, x: usize) -> bool {
        x < self.order
    }

    pub fn non_identity(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.order).filter(move |&x| x != self.identity)
    }

    pub fn element_order(&self, x: usize) -> usize {
        let mut y = x;
        let mut k = 1;
        while y != self.identity {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    /// Checks that `elements` is a subgroup (contains the identity, closed
    /// under products and inverses).
    pub fn check_subgroup(&self, elements: &[usize]) -> Result<()> {
        let mut member = vec![false; self.order];
        for &x in elements {
            if x >= self.order {
                return Err(Error::NotSubgroup(format!("element {x} out of range")));
            }
            member[x] = true;
        }
        if !member[self.identity] {
            return Err(Error::NotSubgroup("identity missing".into()));
        }
        for &x in elements {
            if !member[self.inv(x)] {
                return Err(Error::NotSubgroup(format!("inverse of {x} missing")));
            }
            for &y in elements {
                if !member[self.mul(x, y)] {
                    return Err(Error::NotSubgroup(format!("{x}·{y} = {} missing", self.mul(x, y))));
                }
            }
        }
        Ok(())
    }

    /// Smallest subgroup containing `seed`, as a sorted element list.
    pub fn subgroup_closure(&self, seed: &[usize]) -> Vec<usize> {
        let mut member = vec![false; self.order];
        member[self.identity] = true;
        let mut elems = vec![self.identity];
        let mut i = 0;
        for &s in seed {
            if !member[s] {
                member[s] = true;
                elems.push(s);
            }
        }
        while i < elems.len() {
            let x = elems[i];
            i += 1;
            for j in 0..elems.len() {
                for z in [self.mul(x, elems[j]), self.mul(elems[j], x)] {
                    if !member[z] {
                        member[z] = true;
                        elems.push(z);
                    }
                }
            }
        }
        elems.sort_unstable();
        elems
    }

    /// Every subgroup, each as a sorted element list, in discovery order.
    pub fn subgroups(&self) -> Vec<Vec<usize>> {
        let mut found = vec![vec![self.identity]];
        let mut seen = std::collections::HashSet::from([vec![self.identity]]);
        let mut i = 0;
        while i < found.len() {
            let h = found[i].clone();
            i += 1;
            for g in 0..self.order {
                if h.binary_search(&g).is_ok() {
                    continue;
                }
                let mut seed = h.clone();
                seed.push(g);
                let k = self.subgroup_closure(&seed);
                if seen.insert(k.clone()) {
                    found.push(k);
                }
            }
        }
        found
    }
}
