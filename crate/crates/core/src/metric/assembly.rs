use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use super::space::FiniteMetric;
use crate::embedding::{euclidean, inner, norm, squared_distance};
use crate::error::{Error, Result};
use crate::group::{FiniteGroupTable, Generators};

/// Smallest Gram eigenvalue accepted as positive semidefinite.
pub const PSD_TOLERANCE: f64 = 1e-9;
/// Tolerance on unit norms and weight sums.
pub const UNIT_TOLERANCE: f64 = 1e-12;
/// Default number of summands in the direct sum.
pub const DEFAULT_LMAX: usize = 16;

/// The unit vectors `φ^t(x)` with `⟨φ^t(x), φ^t(y)⟩ = exp(−t‖F(x)−F(y)‖²)`,
/// represented by their Gram matrix.
#[derive(Debug, Clone)]
pub struct GaussianFamily {
    t: f64,
    gram: DMatrix<f64>,
    eigen: SymmetricEigen<f64, nalgebra::Dyn>,
    min_eigenvalue: f64,
    max_diagonal_error: f64,
}

pub fn gaussian_family(points: &[Vec<f64>], t: f64) -> Result<GaussianFamily> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Input(format!("Gaussian parameter must be positive, got {t}")));
    }
    let n = points.len();
    let gram = DMatrix::from_fn(n, n, |x, y| (-t * squared_distance(&points[x], &points[y])).exp());
    let max_diagonal_error = (0..n).map(|x| (gram[(x, x)] - 1.0).abs()).fold(0.0, f64::max);
    let eigen = SymmetricEigen::new(gram.clone());
    let min_eigenvalue = eigen.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(GaussianFamily { t, gram, eigen, min_eigenvalue, max_diagonal_error })
}

impl GaussianFamily {
    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn len(&self) -> usize {
        self.gram.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.min_eigenvalue
    }

    pub fn max_diagonal_error(&self) -> f64 {
        self.max_diagonal_error
    }

    pub fn is_psd(&self) -> bool {
        self.min_eigenvalue >= -PSD_TOLERANCE
    }

    /// `‖φ(x) − φ(y)‖ = √(2 − 2G_xy)`.
    pub fn distance(&self, x: usize, y: usize) -> f64 {
        (2.0 - 2.0 * self.gram[(x, y)]).max(0.0).sqrt()
    }

    /// Explicit vectors realising the Gram matrix, from its eigendecomposition.
    pub fn coordinates(&self) -> Vec<Vec<f64>> {
        let keep: Vec<usize> = (0..self.len()).filter(|&i| self.eigen.eigenvalues[i] > 1e-14).collect();
        (0..self.len())
            .map(|x| keep.iter().map(|&i| self.eigen.eigenvectors[(x, i)] * self.eigen.eigenvalues[i].sqrt()).collect())
            .collect()
    }
}

/// `max ‖F(x)−F(y)‖` over pairs with `d(x, y)² ≤ r2`.
fn dilatation_at(space: &impl FiniteMetric, points: &[Vec<f64>], r2: u64) -> f64 {
    let mut best = 0.0f64;
    for x in 0..space.len() {
        for y in x + 1..space.len() {
            let d = space.dist(x, y);
            if d * d <= r2 {
                best = best.max(euclidean(&points[x], &points[y]));
            }
        }
    }
    best
}

/// Families `φ_l = φ^{t_l}` of a base embedding, `l = 1..=lmax`, with
/// `t_l = ε_l² / (2ρ₊(R_l)²)`, `ε_l = 1/l` and `R_l = √l`.
pub fn direct_sum_families(space: &impl FiniteMetric, base: &[Vec<f64>], lmax: usize) -> Result<Vec<GaussianFamily>> {
    if base.len() != space.len() {
        return Err(Error::Input(format!("embedding has {} points, space has {}", base.len(), space.len())));
    }
    (1..=lmax)
        .map(|l| {
            let rho = dilatation_at(space, base, l as u64);
            let eps = 1.0 / l as f64;
            let t = if rho > 0.0 { eps * eps / (2.0 * rho * rho) } else { 1.0 };
            gaussian_family(base, t)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirectSumReport {
    pub lmax: usize,
    pub t: Vec<f64>,
    /// Monotone thresholds with `‖φ_l(x)−φ_l(y)‖ ≥ 1` once `d ≥ M_l`.
    pub m: Vec<u64>,
    /// Distances below `M_lmax` are where the truncated staircase is sharp.
    pub validity: u64,
    pub pairs: u64,
    pub upper_violations: u64,
    pub lower_violations: u64,
    /// Largest `‖F(x)−F(y)‖ − d(x, y)`.
    pub max_upper_excess: f64,
    /// Largest discrepancy between coordinate and Gram-derived distances.
    pub max_coordinate_error: f64,
}

impl DirectSumReport {
    pub fn passed(&self) -> bool {
        self.upper_violations == 0 && self.lower_violations == 0
    }

    /// The staircase `½·√#{l : M_l ≤ d}`.
    pub fn staircase(&self, d: u64) -> f64 {
        0.5 * (self.m.iter().filter(|&&m| m <= d).count() as f64).sqrt()
    }
}

#[derive(Debug, Clone)]
pub struct DirectSum {
    pub embedding: Vec<Vec<f64>>,
    pub report: DirectSumReport,
}

/// `F = ½·⊕_l (φ_l − φ_l(x₀))` over the given families, after verifying
/// each family's `(R_l, ε_l)` contract.
pub fn assemble_direct_sum(space: &impl FiniteMetric, families: &[GaussianFamily], basepoint: usize) -> Result<DirectSum> {
    let n = space.len();
    if basepoint >= n {
        return Err(Error::Input(format!("basepoint {basepoint} out of range")));
    }
    let mut m = Vec::with_capacity(families.len());
    for (idx, fam) in families.iter().enumerate() {
        let l = idx + 1;
        if fam.len() != n {
            return Err(Error::Input(format!("family {l} has {} points, space has {n}", fam.len())));
        }
        if fam.max_diagonal_error() > UNIT_TOLERANCE || !fam.is_psd() {
            return Err(Error::Contract(format!("family l={l} is not a unit-vector family")));
        }
        let eps = 1.0 / l as f64;
        let mut far = 0u64;
        for x in 0..n {
            for y in x + 1..n {
                let d = space.dist(x, y);
                let diff = fam.distance(x, y);
                if d * d <= l as u64 && diff > eps + UNIT_TOLERANCE {
                    return Err(Error::Contract(format!(
                        "family l={l} at pair ({x},{y}): distance {d} within R_l but ‖Δφ‖ = {diff} > {eps}"
                    )));
                }
                if diff < 1.0 {
                    far = far.max(d);
                }
            }
        }
        let raw = far + 1;
        m.push(raw.max(m.last().copied().unwrap_or(0)));
    }
    let coords: Vec<Vec<Vec<f64>>> = families.iter().map(GaussianFamily::coordinates).collect();
    let embedding: Vec<Vec<f64>> = (0..n)
        .map(|x| {
            coords
                .iter()
                .flat_map(|c| c[x].iter().zip(&c[basepoint]).map(|(a, b)| 0.5 * (a - b)))
                .collect()
        })
        .collect();
    let mut report = DirectSumReport {
        lmax: families.len(),
        t: families.iter().map(GaussianFamily::t).collect(),
        validity: m.last().copied().unwrap_or(0),
        m,
        pairs: 0,
        upper_violations: 0,
        lower_violations: 0,
        max_upper_excess: f64::NEG_INFINITY,
        max_coordinate_error: 0.0,
    };
    for x in 0..n {
        for y in x + 1..n {
            let d = space.dist(x, y);
            let sq: f64 = families.iter().map(|f| 0.25 * (2.0 - 2.0 * f.gram()[(x, y)])).sum();
            let value = sq.max(0.0).sqrt();
            report.pairs += 1;
            report.max_upper_excess = report.max_upper_excess.max(value - d as f64);
            if value > d as f64 + 1.0 + UNIT_TOLERANCE {
                report.upper_violations += 1;
            }
            if value + UNIT_TOLERANCE < report.staircase(d) {
                report.lower_violations += 1;
            }
            let coord = euclidean(&embedding[x], &embedding[y]);
            report.max_coordinate_error = report.max_coordinate_error.max((coord - value).abs());
        }
    }
    Ok(DirectSum { embedding, report })
}

/// A choice of representative for every left coset `xH`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CosetSection {
    coset_of: Vec<usize>,
    reps: Vec<usize>,
}

fn left_cosets(q: &FiniteGroupTable, h: &[usize]) -> Result<Vec<usize>> {
    q.check_subgroup(h)?;
    let mut coset_of = vec![usize::MAX; q.order()];
    let mut count = 0;
    for x in 0..q.order() {
        if coset_of[x] == usize::MAX {
            for &k in h {
                coset_of[q.mul(x, k)] = count;
            }
            count += 1;
        }
    }
    Ok(coset_of)
}

impl CosetSection {
    /// Validates that `reps[c]` lies in the `c`-th left coset, cosets being
    /// numbered by their smallest element.
    pub fn new(q: &FiniteGroupTable, h: &[usize], reps: Vec<usize>) -> Result<Self> {
        let coset_of = left_cosets(q, h)?;
        let count = q.order() / h.len();
        if reps.len() != count {
            return Err(Error::Input(format!("section has {} representatives for {count} cosets", reps.len())));
        }
        for (c, &r) in reps.iter().enumerate() {
            if r >= q.order() || coset_of[r] != c {
                return Err(Error::Input(format!("representative {r} does not lie in coset {c}")));
            }
        }
        Ok(Self { coset_of, reps })
    }

    /// Minimal word length representative, smallest index on ties.
    pub fn minimal(q: &FiniteGroupTable, h: &[usize], gens: &Generators) -> Result<Self> {
        let coset_of = left_cosets(q, h)?;
        let lengths = gens.word_lengths(q)?;
        let count = q.order() / h.len();
        let mut reps = vec![usize::MAX; count];
        for x in 0..q.order() {
            let c = coset_of[x];
            if reps[c] == usize::MAX || lengths[x] < lengths[reps[c]] {
                reps[c] = x;
            }
        }
        Ok(Self { coset_of, reps })
    }

    pub fn coset_count(&self) -> usize {
        self.reps.len()
    }

    pub fn coset_of(&self, x: usize) -> usize {
        self.coset_of[x]
    }

    pub fn rep(&self, c: usize) -> usize {
        self.reps[c]
    }
}

/// `φ̂(x) = φ(σ(x̄)⁻¹x) ⊗ e_x̄`: the block of coset `x̄` carries `φ` of the
/// subgroup element `σ(x̄)⁻¹x`. `phi[i]` belongs to the `i`-th element of `h`.
pub fn induced_embedding(q: &FiniteGroupTable, h: &[usize], phi: &[Vec<f64>], section: &CosetSection) -> Result<Vec<Vec<f64>>> {
    if phi.len() != h.len() {
        return Err(Error::Input(format!("{} vectors for a subgroup of order {}", phi.len(), h.len())));
    }
    let dim = phi.first().map_or(0, Vec::len);
    if let Some(i) = phi.iter().position(|v| v.len() != dim || (norm(v) - 1.0).abs() > 1e-9) {
        return Err(Error::Input(format!("vector {i} is not a unit vector of dimension {dim}")));
    }
    let cosets = q.order() / h.len();
    let mut out = Vec::with_capacity(q.order());
    for x in 0..q.order() {
        let c = section.coset_of(x);
        let inner_elem = q.mul(q.inv(section.rep(c)), x);
        let pos = h.binary_search(&inner_elem).map_err(|_| Error::Input(format!("section sends {x} outside the subgroup")))?;
        let mut v = vec![0.0; dim * cosets];
        v[c * dim..(c + 1) * dim].copy_from_slice(&phi[pos]);
        out.push(v);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InducedReport {
    pub same_coset_pairs: u64,
    pub cross_coset_pairs: u64,
    /// Largest `|‖φ̂(x)−φ̂(y)‖ − ‖φ(x′)−φ(y′)‖|` within a coset.
    pub same_coset_max_error: f64,
    /// Largest `|‖φ̂(x)−φ̂(y)‖² − 2|` across cosets.
    pub cross_coset_max_error: f64,
    pub cross_inner_max: f64,
}

impl InducedReport {
    pub fn passed(&self, tol: f64) -> bool {
        self.same_coset_max_error <= tol && self.cross_coset_max_error <= tol && self.cross_inner_max <= tol
    }
}

pub fn induced_report(
    q: &FiniteGroupTable,
    h: &[usize],
    phi: &[Vec<f64>],
    section: &CosetSection,
    induced: &[Vec<f64>],
) -> InducedReport {
    let mut r = InducedReport {
        same_coset_pairs: 0,
        cross_coset_pairs: 0,
        same_coset_max_error: 0.0,
        cross_coset_max_error: 0.0,
        cross_inner_max: 0.0,
    };
    let local = |x: usize| {
        let e = q.mul(q.inv(section.rep(section.coset_of(x))), x);
        &phi[h.binary_search(&e).expect("validated section")]
    };
    for x in 0..q.order() {
        for y in x + 1..q.order() {
            if section.coset_of(x) == section.coset_of(y) {
                r.same_coset_pairs += 1;
                let err = (euclidean(&induced[x], &induced[y]) - euclidean(local(x), local(y))).abs();
                r.same_coset_max_error = r.same_coset_max_error.max(err);
            } else {
                r.cross_coset_pairs += 1;
                let err = (squared_distance(&induced[x], &induced[y]) - 2.0).abs();
                r.cross_coset_max_error = r.cross_coset_max_error.max(err);
                r.cross_inner_max = r.cross_inner_max.max(inner(&induced[x], &induced[y]).abs());
            }
        }
    }
    r
}

fn local_dimensions(locals: &[Vec<Option<Vec<f64>>>]) -> Result<Vec<usize>> {
    locals
        .iter()
        .enumerate()
        .map(|(i, piece)| {
            let dim = piece.iter().flatten().map(Vec::len).next().unwrap_or(0);
            match piece.iter().flatten().position(|v| v.len() != dim) {
                Some(_) => Err(Error::Input(format!("local vectors of piece {i} have mixed dimensions"))),
                None => Ok(dim),
            }
        })
        .collect()
}

/// `x ↦ (φ_i(x)^{1/2}·ξ_i(x))_i`. `weights[x][i]` is the weight of piece `i`
/// at `x`; `locals[i][x]` is `ξ_i(x)`, required wherever the weight is positive.
pub fn glue_embeddings(weights: &[Vec<f64>], locals: &[Vec<Option<Vec<f64>>>]) -> Result<Vec<Vec<f64>>> {
    let dims = local_dimensions(locals)?;
    let total: usize = dims.iter().sum();
    let mut out = Vec::with_capacity(weights.len());
    for (x, w) in weights.iter().enumerate() {
        if w.len() != locals.len() {
            return Err(Error::Input(format!("point {x} has {} weights for {} pieces", w.len(), locals.len())));
        }
        if w.iter().any(|&v| v < 0.0 || !v.is_finite()) {
            return Err(Error::Input(format!("negative weight at point {x}")));
        }
        let sum: f64 = w.iter().sum();
        if (sum - 1.0).abs() > UNIT_TOLERANCE {
            return Err(Error::Input(format!("weights at point {x} sum to {sum}")));
        }
        let mut v = Vec::with_capacity(total);
        for (i, &wi) in w.iter().enumerate() {
            match locals[i].get(x).and_then(Option::as_ref) {
                Some(xi) => v.extend(xi.iter().map(|c| wi.sqrt() * c)),
                None if wi == 0.0 => v.extend(std::iter::repeat_n(0.0, dims[i])),
                None => return Err(Error::Input(format!("piece {i} has positive weight but no local vector at {x}"))),
            }
        }
        out.push(v);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GlueReport {
    pub r: u64,
    pub eps: f64,
    pub pairs: u64,
    /// Pairs within `R` where the partition or the locals exceed `ε`.
    pub hypothesis_failures: u64,
    pub violations: u64,
    pub max_distance: f64,
    pub max_norm_error: f64,
    /// Measured `max Σ_i |φ_i(x) − φ_i(y)|` over pairs within `R`.
    pub partition_eps: f64,
    /// Measured `max ‖ξ_i(x) − ξ_i(y)‖` over pairs within `R` and active pieces.
    pub local_eps: f64,
}

impl GlueReport {
    pub fn passed(&self) -> bool {
        self.violations == 0 && self.hypothesis_failures == 0 && self.max_norm_error <= UNIT_TOLERANCE
    }
}

/// Checks unit norms and `‖glued(x) − glued(y)‖ ≤ ε + √ε` on pairs with
/// `d ≤ R` that satisfy the `ε` hypotheses.
pub fn glue_bound_check(
    space: &impl FiniteMetric,
    weights: &[Vec<f64>],
    locals: &[Vec<Option<Vec<f64>>>],
    glued: &[Vec<f64>],
    r: u64,
    eps: f64,
) -> GlueReport {
    let mut rep = GlueReport {
        r,
        eps,
        pairs: 0,
        hypothesis_failures: 0,
        violations: 0,
        max_distance: 0.0,
        max_norm_error: glued.iter().map(|v| (norm(v) - 1.0).abs()).fold(0.0, f64::max),
        partition_eps: 0.0,
        local_eps: 0.0,
    };
    let bound = eps + eps.sqrt();
    for x in 0..space.len() {
        for y in x + 1..space.len() {
            if space.dist(x, y) > r {
                continue;
            }
            rep.pairs += 1;
            let l1: f64 = weights[x].iter().zip(&weights[y]).map(|(a, b)| (a - b).abs()).sum();
            rep.partition_eps = rep.partition_eps.max(l1);
            let mut ok = l1 <= eps + UNIT_TOLERANCE;
            for (i, piece) in locals.iter().enumerate() {
                if weights[x][i] == 0.0 && weights[y][i] == 0.0 {
                    continue;
                }
                match (&piece[x], &piece[y]) {
                    (Some(a), Some(b)) => {
                        let e = euclidean(a, b);
                        rep.local_eps = rep.local_eps.max(e);
                        ok &= e <= eps + UNIT_TOLERANCE;
                    }
                    _ => ok = false,
                }
            }
            let dist = euclidean(&glued[x], &glued[y]);
            rep.max_distance = rep.max_distance.max(dist);
            if !ok {
                rep.hypothesis_failures += 1;
            } else if dist > bound + UNIT_TOLERANCE {
                rep.violations += 1;
            }
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::MetricComponent;
    use crate::tower::{build_tower, wall_embedding};

    fn cycle_component(n: usize) -> MetricComponent {
        MetricComponent::from_graph("C", &crate::graph::LabeledMultigraph::cycle(n), 0).unwrap()
    }

    #[test]
    fn gaussian_basics() {
        let pts = vec![vec![0.0], vec![0.0], vec![3.0]];
        let g = gaussian_family(&pts, 0.5).unwrap();
        assert_eq!(g.gram()[(0, 1)], 1.0);
        assert_eq!(g.distance(0, 1), 0.0);
        assert!(g.is_psd());
        let tiny = gaussian_family(&pts, 1e-15).unwrap();
        assert!(tiny.gram().iter().all(|&v| (v - 1.0).abs() < 1e-12));
        assert!(tiny.is_psd());
        assert!(gaussian_family(&pts, 0.0).is_err());
        let coords = g.coordinates();
        for x in 0..3 {
            for y in 0..3 {
                assert!((inner(&coords[x], &coords[y]) - g.gram()[(x, y)]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn gaussian_of_wall_embedding_is_psd() {
        let tower = build_tower(1, 3, 1000).unwrap();
        let emb = wall_embedding(&tower.levels[2]).unwrap();
        let g = gaussian_family(emb.points(0), 0.1).unwrap();
        assert_eq!(g.len(), 8);
        assert!(g.min_eigenvalue() >= -PSD_TOLERANCE);
        assert!(g.max_diagonal_error() <= UNIT_TOLERANCE);
    }

    #[test]
    fn direct_sum_bounds_on_cycle() {
        let space = cycle_component(16);
        let base: Vec<Vec<f64>> = (0..16)
            .map(|i| {
                let a = i as f64 * std::f64::consts::TAU / 16.0;
                vec![a.cos() * 16.0 / std::f64::consts::TAU, a.sin() * 16.0 / std::f64::consts::TAU]
            })
            .collect();
        let fams = direct_sum_families(&space, &base, 8).unwrap();
        let ds = assemble_direct_sum(&space, &fams, 0).unwrap();
        assert!(ds.report.passed(), "{:?}", ds.report);
        assert!(ds.report.m.windows(2).all(|w| w[0] <= w[1]));
        assert!(ds.report.max_coordinate_error < 1e-6);
        assert_eq!(ds.embedding.len(), 16);
        assert!(ds.embedding[0].iter().all(|&c| c == 0.0));
    }

    #[test]
    fn direct_sum_contract_violation_names_family() {
        let space = cycle_component(6);
        let base: Vec<Vec<f64>> = (0..6).map(|i| vec![i as f64]).collect();
        let fams = vec![gaussian_family(&base, 5.0).unwrap()];
        match assemble_direct_sum(&space, &fams, 0) {
            Err(Error::Contract(msg)) => assert!(msg.contains("l=1")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn single_family_far_pairs() {
        let space = cycle_component(12);
        let base: Vec<Vec<f64>> = (0..12)
            .map(|i| {
                let a = i as f64 * std::f64::consts::TAU / 12.0;
                vec![a.cos() * 2.0, a.sin() * 2.0]
            })
            .collect();
        let fams = direct_sum_families(&space, &base, 1).unwrap();
        let ds = assemble_direct_sum(&space, &fams, 0).unwrap();
        let m1 = ds.report.m[0];
        for x in 0..12 {
            for y in 0..12 {
                if space.dist(x, y) >= m1 {
                    assert!(euclidean(&ds.embedding[x], &ds.embedding[y]) >= 0.5 - 1e-9);
                }
            }
            assert_eq!(euclidean(&ds.embedding[x], &ds.embedding[x]), 0.0);
        }
    }

    #[test]
    fn induced_from_dihedral_subgroup() {
        let q = FiniteGroupTable::dihedral(4);
        let h = q.subgroup_closure(&[1]);
        assert_eq!(h.len(), 4);
        let phi: Vec<Vec<f64>> = (0..4)
            .map(|i| {
                let a = i as f64 * 0.3;
                vec![a.cos(), a.sin()]
            })
            .collect();
        let gens = Generators::new(&q, &[1, 4]).unwrap();
        let sec = CosetSection::minimal(&q, &h, &gens).unwrap();
        assert_eq!(sec.coset_count(), 2);
        let emb = induced_embedding(&q, &h, &phi, &sec).unwrap();
        let rep = induced_report(&q, &h, &phi, &sec, &emb);
        assert!(rep.passed(1e-12), "{rep:?}");
        assert!(rep.cross_coset_pairs > 0 && rep.same_coset_pairs > 0);
        assert!(CosetSection::new(&q, &h, vec![0, 1]).is_err());
        assert!(CosetSection::new(&q, &h, vec![0, 5]).is_ok());
    }

    #[test]
    fn glue_one_piece_and_errors() {
        let locals = vec![vec![Some(vec![1.0, 0.0]), Some(vec![0.0, 1.0])]];
        let glued = glue_embeddings(&[vec![1.0], vec![1.0]], &locals).unwrap();
        assert_eq!(glued, vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        assert!(glue_embeddings(&[vec![0.5], vec![1.0]], &locals).is_err());
        let two = vec![locals[0].clone(), vec![None, Some(vec![1.0])]];
        assert!(glue_embeddings(&[vec![0.5, 0.5], vec![1.0, 0.0]], &two).is_err());
        let g = glue_embeddings(&[vec![1.0, 0.0], vec![0.5, 0.5]], &two).unwrap();
        assert!(g.iter().all(|v| (norm(v) - 1.0).abs() < 1e-12));
    }
}
