//! Hochschild cochains and chains from the (restricted) bimodule bar
//! resolution: dimension tables per (total degree, weight), cup products
//! up to truncation, and matrix-algebra inflations.
//!
//! Cochains of weight n live in `Hom((sĀ)^{⊗n}, A)`; the differential
//! raises both the weight and the total degree by one, so for algebras
//! with zero differential the table splits into independent diagonal
//! complexes and every reported (degree, weight) entry is exact. For
//! algebras with a differential the table aggregates weights per degree.

use std::collections::{BTreeMap, HashMap};

use crate::dga::DGAlgebra;
use crate::error::CoreError;
use crate::field::{FieldSpec, Scalar};
use crate::graded::{tensor_of_maps, GradedLinearMap, GradedVectorSpace, MultiTensor, SlotOp};
use crate::matrix::{homology_at, SparseMatrix};
use crate::resolution::{
    reduced_space, restricted_bar_images, BarCoefficients, Normalization, SafeWindow,
    TruncationPolicy,
};

/// Hochschild dimension table. `entries` hold the nonzero dimensions; in
/// the weight-graded case they are exact per (degree, weight) inside the
/// safe window, otherwise only the per-degree aggregates over weights up
/// to the cutoff are reported.
#[derive(Clone, Debug)]
pub struct HHTable {
    pub entries: HHEntries,
    pub window: SafeWindow,
    /// Per-degree: true when no new classes appeared at the top two
    /// weights, i.e. the degree stopped changing as the cutoff grew.
    pub stabilization: BTreeMap<i64, bool>,
}

#[derive(Clone, Debug)]
pub enum HHEntries {
    /// (total degree, weight) -> dimension.
    WeightGraded(BTreeMap<(i64, usize), usize>),
    /// total degree -> dimension aggregated over weights <= cutoff.
    Aggregated(BTreeMap<i64, usize>),
}

impl HHTable {
    pub fn dim_at(&self, degree: i64, weight: usize) -> usize {
        match &self.entries {
            HHEntries::WeightGraded(m) => m.get(&(degree, weight)).copied().unwrap_or(0),
            HHEntries::Aggregated(_) => 0,
        }
    }

    pub fn degree_total(&self, degree: i64) -> usize {
        match &self.entries {
            HHEntries::WeightGraded(m) => m
                .iter()
                .filter(|((d, _), _)| *d == degree)
                .map(|(_, v)| v)
                .sum(),
            HHEntries::Aggregated(m) => m.get(&degree).copied().unwrap_or(0),
        }
    }
}

/// Flat model of `Hom(V, A)`: basis pairs `(v, α)` of degree `|α| - |v|`.
pub(crate) struct HomSpace {
    pub space: GradedVectorSpace,
    pub pairs: Vec<(usize, usize)>,
    pub index: HashMap<(usize, usize), usize>,
}

impl HomSpace {
    fn build(
        interior: &MultiTensor,
        coefficients: &GradedVectorSpace,
        lo: i64,
        hi: i64,
    ) -> HomSpace {
        let mut pairs = Vec::new();
        let mut degrees = Vec::new();
        for v in 0..interior.dim() {
            for a in 0..coefficients.dim() {
                let d = coefficients.degree(a) - interior.space.degree(v);
                if d >= lo && d <= hi {
                    pairs.push((v, a));
                    degrees.push(d);
                }
            }
        }
        let index = pairs
            .iter()
            .enumerate()
            .map(|(i, p)| (*p, i))
            .collect();
        HomSpace {
            space: GradedVectorSpace::new(degrees, None).expect("unnamed basis"),
            pairs,
            index,
        }
    }
}

/// The truncated Hochschild cochain complex: interiors `V_n` for
/// `n = 0..=max_weight+1` and both differential components.
pub struct CochainComplex {
    pub algebra: DGAlgebra,
    pub interiors: Vec<MultiTensor>,
    pub(crate) homs: Vec<HomSpace>,
    /// Hochschild component: homs[n] -> homs[n+1], degree +1, weight +1.
    pub delta: Vec<GradedLinearMap>,
    /// Internal component: homs[n] -> homs[n], degree +1.
    pub d_int: Vec<GradedLinearMap>,
    pub policy: TruncationPolicy,
}

/// Interior degree window wide enough that every hom-space block in the
/// reported window sees complete differentials.
fn interior_window(algebra: &DGAlgebra, policy: &TruncationPolicy) -> (i64, i64) {
    let (a_lo, a_hi) = algebra.space().support().expect("algebras are nonzero");
    let margin = 3;
    (
        a_lo - policy.degree_hi - margin,
        a_hi - policy.degree_lo + margin,
    )
}

pub(crate) fn build_interiors(
    algebra: &DGAlgebra,
    max_weight: usize,
    lo: i64,
    hi: i64,
    normalization: Normalization,
) -> Vec<MultiTensor> {
    let reduced = reduced_space(algebra, normalization);
    let s_red = reduced.space.shifted(1, true);
    (0..=max_weight)
        .map(|n| MultiTensor::enumerate(vec![s_red.clone(); n], lo, hi))
        .collect()
}

/// Internal differential of an interior tensor (sum of slot
/// differentials of sĀ).
pub(crate) fn interior_differential(
    algebra: &DGAlgebra,
    interior: &MultiTensor,
    normalization: Normalization,
    field: &FieldSpec,
) -> GradedLinearMap {
    let reduced = reduced_space(algebra, normalization);
    let table = |idx: &[u32]| -> Vec<(u32, Scalar)> {
        let ai = reduced.to_algebra[idx[0] as usize];
        algebra
            .basis_diff(ai)
            .iter()
            .filter_map(|(k, c)| reduced.from_algebra[*k].map(|rk| (rk as u32, field.neg(c))))
            .collect()
    };
    let n = interior.slots.len();
    let mut total = GradedLinearMap::zero(&interior.space, &interior.space, 1);
    for slot in 0..n {
        let mut ops: Vec<SlotOp> = Vec::new();
        for _ in 0..slot {
            ops.push(SlotOp::Id);
        }
        ops.push(SlotOp::Local {
            span: 1,
            degree: 1,
            table: &table,
        });
        for _ in slot + 1..n {
            ops.push(SlotOp::Id);
        }
        total = total.add(&tensor_of_maps(interior, interior, &ops, 1, field), field);
    }
    total
}

impl CochainComplex {
    pub fn build(algebra: &DGAlgebra, policy: &TruncationPolicy) -> Result<CochainComplex, CoreError> {
        let f = algebra.field;
        let w = policy.max_weight;
        let (ilo, ihi) = interior_window(algebra, policy);
        let interiors = build_interiors(algebra, w + 1, ilo, ihi, Normalization::Reduced);

        let hom_lo = policy.degree_lo - 2;
        let hom_hi = policy.degree_hi + 2;
        let homs: Vec<HomSpace> = interiors
            .iter()
            .map(|v| HomSpace::build(v, algebra.space(), hom_lo, hom_hi))
            .collect();

        // Hochschild component from the restricted bar images.
        let mut delta = Vec::with_capacity(w + 1);
        for n in 0..=w {
            let images = restricted_bar_images(
                algebra,
                &BarCoefficients::Diagonal,
                &interiors[n + 1],
                &interiors[n],
                &[algebra.unit_index()],
                Normalization::Reduced,
            );
            let src = &homs[n];
            let tgt = &homs[n + 1];
            // Index the image terms by their interior target position so
            // each cochain only visits the terms that hit it.
            let mut by_interior: Vec<Vec<(usize, &crate::resolution::RestrictedTerm)>> =
                vec![Vec::new(); interiors[n].dim().max(1)];
            for (v, per_right) in images.iter().enumerate() {
                for term in &per_right[0] {
                    by_interior[term.interior].push((v, term));
                }
            }
            let mut triplets: Vec<(usize, usize, Scalar)> = Vec::new();
            for (col, &(v_prime, alpha)) in src.pairs.iter().enumerate() {
                let g_degree = src.space.degree(col);
                let g_odd = g_degree.rem_euclid(2) == 1;
                for (v, term) in &by_interior[v_prime] {
                    // δg(v) ∋ -(-1)^{|g|} c (-1)^{|g||a|} a·α·b
                    let mut coeff = term.coeff.clone();
                    if g_odd {
                        coeff = f.neg(&coeff);
                    }
                    if g_odd && algebra.degree(term.left).rem_euclid(2) == 1 {
                        coeff = f.neg(&coeff);
                    }
                    coeff = f.neg(&coeff);
                    for (mid, c1) in algebra.basis_product(term.left, alpha) {
                        for (gamma, c2) in algebra.basis_product(*mid, term.right) {
                            if let Some(&row) = tgt.index.get(&(*v, *gamma)) {
                                let value = f.mul(&coeff, &f.mul(c1, c2));
                                triplets.push((row, col, value));
                            }
                        }
                    }
                }
            }
            let matrix =
                SparseMatrix::from_accumulated(tgt.space.dim(), src.space.dim(), triplets, &f);
            delta.push(GradedLinearMap { degree: 1, matrix });
        }

        // Internal component: g ↦ d_A ∘ g - (-1)^{|g|} g ∘ d_V.
        let mut d_int = Vec::with_capacity(w + 2);
        for n in 0..=w + 1 {
            let hom = &homs[n];
            let dv = interior_differential(algebra, &interiors[n], Normalization::Reduced, &f);
            let mut triplets: Vec<(usize, usize, Scalar)> = Vec::new();
            for (col, &(v, alpha)) in hom.pairs.iter().enumerate() {
                let g_odd = hom.space.degree(col).rem_euclid(2) == 1;
                for (gamma, c) in algebra.basis_diff(alpha) {
                    if let Some(&row) = hom.index.get(&(v, *gamma)) {
                        triplets.push((row, col, c.clone()));
                    }
                }
                // (g ∘ d_V)(u) = Σ_u dv[v, u] g(v): matrix entries from
                // rows of dv landing on v.
                for (vv, u, c) in dv.matrix.triplets() {
                    if vv != v {
                        continue;
                    }
                    if let Some(&row) = hom.index.get(&(u, alpha)) {
                        let mut value = f.neg(c);
                        if g_odd {
                            value = f.neg(&value);
                        }
                        triplets.push((row, col, value));
                    }
                }
            }
            let matrix =
                SparseMatrix::from_accumulated(hom.space.dim(), hom.space.dim(), triplets, &f);
            d_int.push(GradedLinearMap { degree: 1, matrix });
        }

        let complex = CochainComplex {
            algebra: algebra.clone(),
            interiors,
            homs,
            delta,
            d_int,
            policy: *policy,
        };
        complex.verify()?;
        Ok(complex)
    }

    fn verify(&self) -> Result<(), CoreError> {
        let f = &self.algebra.field;
        let w = self.policy.max_weight;
        for n in 0..w {
            if !self.delta[n + 1].compose(&self.delta[n], f).is_zero() {
                return Err(CoreError::internal(format!(
                    "Hochschild differential does not square to zero at weight {n}"
                )));
            }
        }
        for n in 0..=w + 1 {
            if !self.d_int[n].compose(&self.d_int[n], f).is_zero() {
                return Err(CoreError::internal(format!(
                    "internal cochain differential does not square to zero at weight {n}"
                )));
            }
        }
        for n in 0..=w {
            let mixed = self.d_int[n + 1]
                .compose(&self.delta[n], f)
                .add(&self.delta[n].compose(&self.d_int[n], f), f);
            if !mixed.is_zero() {
                return Err(CoreError::internal(format!(
                    "cochain differential components fail to anticommute at weight {n}"
                )));
            }
        }
        Ok(())
    }

    pub fn weight_graded(&self) -> bool {
        self.d_int.iter().all(|d| d.is_zero())
    }

    /// Exact homology at one (degree, weight) cell of a weight-graded
    /// complex.
    pub fn cell_dim(&self, degree: i64, weight: usize) -> Result<usize, CoreError> {
        let f = &self.algebra.field;
        let mid = &self.homs[weight].space;
        let d_out = self.delta[weight].block(mid, &self.homs[weight + 1].space, degree, f);
        let d_in = if weight > 0 {
            self.delta[weight - 1].block(&self.homs[weight - 1].space, mid, degree - 1, f)
        } else {
            SparseMatrix::zero(mid.indices_in_degree(degree).len(), 0)
        };
        homology_at(&d_in, &d_out, f)
    }
}

fn cochain_safe_window(
    algebra: &DGAlgebra,
    policy: &TruncationPolicy,
    content_cap: Option<i64>,
) -> SafeWindow {
    let reduced = reduced_space(algebra, Normalization::Reduced);
    let (a_lo, a_hi) = algebra.space().support().expect("nonzero algebra");
    let step = reduced
        .space
        .support()
        .map(|(u_lo, u_hi)| (-(u_hi - 1), -(u_lo - 1)));
    let aggregate = SafeWindow::aggregate_interval(
        policy,
        policy.max_weight,
        Some((a_lo, a_hi)),
        step,
    );
    SafeWindow {
        degree_lo: policy.degree_lo,
        degree_hi: policy.degree_hi,
        max_exact_weight: policy.max_weight,
        aggregate,
        content_cap,
    }
}

fn chain_safe_window(
    algebra: &DGAlgebra,
    policy: &TruncationPolicy,
    content_cap: Option<i64>,
) -> SafeWindow {
    let reduced = reduced_space(algebra, Normalization::Reduced);
    let (a_lo, a_hi) = algebra.space().support().expect("nonzero algebra");
    let step = reduced
        .space
        .support()
        .map(|(u_lo, u_hi)| (u_lo - 1, u_hi - 1));
    let aggregate =
        SafeWindow::aggregate_interval(policy, policy.max_weight, Some((a_lo, a_hi)), step);
    SafeWindow {
        degree_lo: policy.degree_lo,
        degree_hi: policy.degree_hi,
        max_exact_weight: policy.max_weight,
        aggregate,
        content_cap,
    }
}

/// Hochschild cohomology dimension table.
pub fn hh_cohomology(algebra: &DGAlgebra, policy: &TruncationPolicy) -> Result<HHTable, CoreError> {
    hh_cohomology_with_cap(algebra, policy, None)
}

pub fn hh_cohomology_with_cap(
    algebra: &DGAlgebra,
    policy: &TruncationPolicy,
    content_cap: Option<i64>,
) -> Result<HHTable, CoreError> {
    let complex = CochainComplex::build(algebra, policy)?;
    let f = &algebra.field;
    let mut window = cochain_safe_window(algebra, policy, content_cap);
    if content_cap.is_some() {
        // Truncated presentations: cochain tables are systematically
        // approximate (source contents are unbounded for the intended
        // algebra), so nothing is marked exact beyond the table itself.
        window.content_cap = Some(i64::MIN / 2);
    }

    if complex.weight_graded() {
        let mut entries = BTreeMap::new();
        for n in 0..=policy.max_weight {
            for m in policy.degrees() {
                if complex.homs[n].space.indices_in_degree(m).is_empty() {
                    continue;
                }
                let h = complex.cell_dim(m, n)?;
                if h > 0 {
                    entries.insert((m, n), h);
                }
            }
        }
        let mut stabilization = BTreeMap::new();
        for m in policy.degrees() {
            let w = policy.max_weight;
            let top = entries.get(&(m, w)).copied().unwrap_or(0)
                + if w > 0 {
                    entries.get(&(m, w - 1)).copied().unwrap_or(0)
                } else {
                    0
                };
            stabilization.insert(m, top == 0);
        }
        Ok(HHTable {
            entries: HHEntries::WeightGraded(entries),
            window,
            stabilization,
        })
    } else {
        let (totals, totals_minus) = aggregate_dims(
            &complex.homs.iter().map(|h| &h.space).collect::<Vec<_>>(),
            &complex.delta,
            &complex.d_int,
            policy,
            f,
        )?;
        let mut entries = BTreeMap::new();
        let mut stabilization = BTreeMap::new();
        for m in policy.degrees() {
            let d = totals.get(&m).copied().unwrap_or(0);
            if d > 0 {
                entries.insert(m, d);
            }
            stabilization.insert(m, totals_minus.get(&m) == totals.get(&m));
        }
        Ok(HHTable {
            entries: HHEntries::Aggregated(entries),
            window,
            stabilization,
        })
    }
}

/// Totalised per-degree homology with all weights <= cutoff, and the same
/// with the top weight dropped (for stabilization flags). `delta` may run
/// either with the weight grading (cochains) or against it (chains);
/// orientation is inferred from the map shapes.
fn aggregate_dims(
    spaces: &[&GradedVectorSpace],
    delta: &[GradedLinearMap],
    d_int: &[GradedLinearMap],
    policy: &TruncationPolicy,
    field: &FieldSpec,
) -> Result<(BTreeMap<i64, usize>, BTreeMap<i64, usize>), CoreError> {
    let totalize = |count: usize| -> (GradedVectorSpace, GradedLinearMap) {
        let mut space = GradedVectorSpace::empty();
        let mut offsets = Vec::new();
        for s in &spaces[..count] {
            offsets.push(space.dim());
            space = space.direct_sum(s);
        }
        let mut triplets: Vec<(usize, usize, Scalar)> = Vec::new();
        for (n, d) in d_int.iter().enumerate().take(count) {
            for (r, c, v) in d.matrix.triplets() {
                triplets.push((offsets[n] + r, offsets[n] + c, v.clone()));
            }
        }
        for (n, d) in delta.iter().enumerate() {
            // cochains: delta[n]: n -> n+1; chains: delta[n]: n+1 -> n.
            let (src, tgt) = if d.matrix.cols() == spaces[n].dim() {
                (n, n + 1)
            } else {
                (n + 1, n)
            };
            if src >= count || tgt >= count {
                continue;
            }
            for (r, c, v) in d.matrix.triplets() {
                triplets.push((offsets[tgt] + r, offsets[src] + c, v.clone()));
            }
        }
        let matrix = SparseMatrix::from_accumulated(space.dim(), space.dim(), triplets, field);
        (space, GradedLinearMap { degree: 1, matrix })
    };

    let full_count = spaces.len();
    let mut out_full = BTreeMap::new();
    let mut out_minus = BTreeMap::new();
    for (count, out) in [(full_count, &mut out_full), (full_count - 1, &mut out_minus)] {
        let (space, d) = totalize(count);
        for m in policy.degrees() {
            let d_in = d.block(&space, &space, m - 1, field);
            let d_out = d.block(&space, &space, m, field);
            out.insert(m, homology_at(&d_in, &d_out, field)?);
        }
    }
    Ok((out_full, out_minus))
}

/// The truncated Hochschild chain complex `A ⊗ (sĀ)^{⊗n}`.
pub struct ChainComplex {
    pub algebra: DGAlgebra,
    pub interiors: Vec<MultiTensor>,
    pub chains: Vec<MultiTensor>,
    /// Bar component: chains[n+1] -> chains[n], degree +1.
    pub d_bar: Vec<GradedLinearMap>,
    /// Internal component.
    pub d_int: Vec<GradedLinearMap>,
    pub policy: TruncationPolicy,
}

impl ChainComplex {
    pub fn build(algebra: &DGAlgebra, policy: &TruncationPolicy) -> Result<ChainComplex, CoreError> {
        let f = algebra.field;
        let w = policy.max_weight;
        let margin = 3;
        let (a_lo, a_hi) = algebra.space().support().expect("nonzero algebra");
        let ilo = policy.degree_lo - a_hi - margin;
        let ihi = policy.degree_hi - a_lo + margin;
        let interiors = build_interiors(algebra, w + 1, ilo, ihi, Normalization::Reduced);

        let chains: Vec<MultiTensor> = interiors
            .iter()
            .map(|v| {
                MultiTensor::enumerate(
                    vec![algebra.space().clone(), v.space.clone()],
                    policy.degree_lo - margin,
                    policy.degree_hi + margin,
                )
            })
            .collect();

        let mut d_bar = Vec::with_capacity(w + 1);
        for n in 0..=w {
            let images = restricted_bar_images(
                algebra,
                &BarCoefficients::Diagonal,
                &interiors[n + 1],
                &interiors[n],
                &[algebra.unit_index()],
                Normalization::Reduced,
            );
            let src = &chains[n + 1];
            let tgt = &chains[n];
            let mut triplets: Vec<(usize, usize, Scalar)> = Vec::new();
            for col in 0..src.dim() {
                let tuple = src.tuple(col);
                let (x, v) = (tuple[0] as usize, tuple[1] as usize);
                let x_deg = algebra.degree(x);
                for term in &images[v][0] {
                    // d(x ⊗ v) = (-1)^{|x|} Σ c · (rotate b around) (b·x·a) ⊗ v':
                    // the odd bar differential crosses x, and b picks up
                    // the cyclic Koszul sign (-1)^{|b|(|x|+|a|+|v'|)}.
                    let b_deg = algebra.degree(term.right);
                    let inner = x_deg
                        + algebra.degree(term.left)
                        + interiors[n].space.degree(term.interior);
                    let mut coeff = term.coeff.clone();
                    if (x_deg + b_deg * inner).rem_euclid(2) == 1 {
                        coeff = f.neg(&coeff);
                    }
                    for (mid, c1) in algebra.basis_product(term.right, x) {
                        for (y, c2) in algebra.basis_product(*mid, term.left) {
                            if let Some(row) =
                                tgt.position(&[*y as u32, term.interior as u32])
                            {
                                triplets.push((row, col, f.mul(&coeff, &f.mul(c1, c2))));
                            }
                        }
                    }
                }
            }
            let matrix =
                SparseMatrix::from_accumulated(tgt.dim(), src.dim(), triplets, &f);
            d_bar.push(GradedLinearMap { degree: 1, matrix });
        }

        // Internal differential via slot ops: d_A on the A slot and the
        // interior differential on the packed interior slot.
        let mut d_int = Vec::with_capacity(w + 2);
        for n in 0..=w + 1 {
            let chain = &chains[n];
            let dv = interior_differential(algebra, &interiors[n], Normalization::Reduced, &f);
            let mut dv_cols: Vec<Vec<(u32, Scalar)>> = vec![Vec::new(); interiors[n].dim().max(1)];
            for (r, c, v) in dv.matrix.triplets() {
                dv_cols[c].push((r as u32, v.clone()));
            }
            let d_a_table = |idx: &[u32]| -> Vec<(u32, Scalar)> {
                algebra
                    .basis_diff(idx[0] as usize)
                    .iter()
                    .map(|(k, c)| (*k as u32, c.clone()))
                    .collect()
            };
            let dv_table = |idx: &[u32]| -> Vec<(u32, Scalar)> { dv_cols[idx[0] as usize].clone() };
            let part_a = tensor_of_maps(
                chain,
                chain,
                &[
                    SlotOp::Local {
                        span: 1,
                        degree: 1,
                        table: &d_a_table,
                    },
                    SlotOp::Id,
                ],
                1,
                &f,
            );
            let part_v = tensor_of_maps(
                chain,
                chain,
                &[
                    SlotOp::Id,
                    SlotOp::Local {
                        span: 1,
                        degree: 1,
                        table: &dv_table,
                    },
                ],
                1,
                &f,
            );
            d_int.push(part_a.add(&part_v, &f));
        }

        let complex = ChainComplex {
            algebra: algebra.clone(),
            interiors,
            chains,
            d_bar,
            d_int,
            policy: *policy,
        };
        complex.verify()?;
        Ok(complex)
    }

    fn verify(&self) -> Result<(), CoreError> {
        let f = &self.algebra.field;
        let w = self.policy.max_weight;
        for n in 0..w {
            if !self.d_bar[n].compose(&self.d_bar[n + 1], f).is_zero() {
                return Err(CoreError::internal(format!(
                    "chain differential does not square to zero at weight {n}"
                )));
            }
        }
        for n in 0..=w + 1 {
            if !self.d_int[n].compose(&self.d_int[n], f).is_zero() {
                return Err(CoreError::internal(format!(
                    "internal chain differential does not square to zero at weight {n}"
                )));
            }
        }
        for n in 0..=w {
            let mixed = self.d_int[n]
                .compose(&self.d_bar[n], f)
                .add(&self.d_bar[n].compose(&self.d_int[n + 1], f), f);
            if !mixed.is_zero() {
                return Err(CoreError::internal(format!(
                    "chain differential components fail to anticommute at weight {n}"
                )));
            }
        }
        Ok(())
    }

    pub fn weight_graded(&self) -> bool {
        self.d_int.iter().all(|d| d.is_zero())
    }

    pub fn cell_dim(&self, degree: i64, weight: usize) -> Result<usize, CoreError> {
        let f = &self.algebra.field;
        let mid = &self.chains[weight].space;
        let d_in = self.d_bar[weight].block(&self.chains[weight + 1].space, mid, degree - 1, f);
        let d_out = if weight > 0 {
            self.d_bar[weight - 1].block(mid, &self.chains[weight - 1].space, degree, f)
        } else {
            SparseMatrix::zero(0, mid.indices_in_degree(degree).len())
        };
        homology_at(&d_in, &d_out, f)
    }
}

/// Hochschild homology dimension table.
pub fn hh_homology(algebra: &DGAlgebra, policy: &TruncationPolicy) -> Result<HHTable, CoreError> {
    hh_homology_with_cap(algebra, policy, None)
}

pub fn hh_homology_with_cap(
    algebra: &DGAlgebra,
    policy: &TruncationPolicy,
    content_cap: Option<i64>,
) -> Result<HHTable, CoreError> {
    let complex = ChainComplex::build(algebra, policy)?;
    let f = &algebra.field;
    let window = chain_safe_window(algebra, policy, content_cap);

    if complex.weight_graded() {
        let mut entries = BTreeMap::new();
        for n in 0..=policy.max_weight {
            for m in policy.degrees() {
                if complex.chains[n].space.indices_in_degree(m).is_empty() {
                    continue;
                }
                let h = complex.cell_dim(m, n)?;
                if h > 0 {
                    entries.insert((m, n), h);
                }
            }
        }
        let mut stabilization = BTreeMap::new();
        for m in policy.degrees() {
            let w = policy.max_weight;
            let top = entries.get(&(m, w)).copied().unwrap_or(0)
                + if w > 0 {
                    entries.get(&(m, w - 1)).copied().unwrap_or(0)
                } else {
                    0
                };
            stabilization.insert(m, top == 0);
        }
        Ok(HHTable {
            entries: HHEntries::WeightGraded(entries),
            window,
            stabilization,
        })
    } else {
        let (totals, totals_minus) = aggregate_dims(
            &complex.chains.iter().map(|c| &c.space).collect::<Vec<_>>(),
            &complex.d_bar,
            &complex.d_int,
            policy,
            f,
        )?;
        let mut entries = BTreeMap::new();
        let mut stabilization = BTreeMap::new();
        for m in policy.degrees() {
            let d = totals.get(&m).copied().unwrap_or(0);
            if d > 0 {
                entries.insert(m, d);
            }
            stabilization.insert(m, totals_minus.get(&m) == totals.get(&m));
        }
        Ok(HHTable {
            entries: HHEntries::Aggregated(entries),
            window,
            stabilization,
        })
    }
}

/// The matrix algebra M_size(a) with entrywise differential, presented on
/// a basis containing its unit.
pub fn matrix_algebra_inflation(
    algebra: &DGAlgebra,
    size: usize,
) -> Result<DGAlgebra, CoreError> {
    if size == 0 {
        return Err(CoreError::precondition("matrix size must be positive"));
    }
    let f = &algebra.field;
    let d = algebra.dim();
    let dim = size * size * d;
    let flat = |i: usize, j: usize, l: usize| -> usize { (i * size + j) * d + l };
    let mut basis = Vec::with_capacity(dim);
    for i in 0..size {
        for j in 0..size {
            for l in 0..d {
                basis.push((
                    format!("E{}{}*{}", i + 1, j + 1, algebra.name(l)),
                    algebra.degree(l),
                ));
            }
        }
    }
    let mut mult_entries = Vec::new();
    for i in 0..size {
        for j in 0..size {
            for l in 0..d {
                for j2 in 0..size {
                    for k2 in 0..size {
                        for l2 in 0..d {
                            let combo = if j == j2 {
                                algebra
                                    .basis_product(l, l2)
                                    .iter()
                                    .map(|(m, c)| (flat(i, k2, *m), c.clone()))
                                    .collect()
                            } else {
                                Vec::new()
                            };
                            mult_entries.push(((flat(i, j, l), flat(j2, k2, l2)), combo));
                        }
                    }
                }
            }
        }
    }
    let mut diff_entries = Vec::new();
    for i in 0..size {
        for j in 0..size {
            for l in 0..d {
                let combo = algebra
                    .basis_diff(l)
                    .iter()
                    .map(|(m, c)| (flat(i, j, *m), c.clone()))
                    .collect();
                diff_entries.push((flat(i, j, l), combo));
            }
        }
    }
    let unit_l = algebra.unit_index();
    let raw = DGAlgebra::new(
        *f,
        basis,
        &format!("E11*{}", algebra.name(unit_l)),
        mult_entries,
        diff_entries,
    )?;
    if size == 1 {
        return Ok(raw);
    }
    // Swap E11*1 for the true unit Σ_i Eii*1.
    let mut triplets: Vec<(usize, usize, Scalar)> = (0..dim)
        .map(|i| (i, i, f.one()))
        .collect();
    for i in 1..size {
        triplets.push((flat(i, i, unit_l), flat(0, 0, unit_l), f.one()));
    }
    let cob = SparseMatrix::from_accumulated(dim, dim, triplets, f);
    let names: Vec<String> = (0..dim)
        .map(|k| {
            if k == flat(0, 0, unit_l) {
                "1".to_string()
            } else {
                raw.name(k)
            }
        })
        .collect();
    let degrees: Vec<i64> = (0..dim).map(|k| raw.degree(k)).collect();
    raw.change_of_basis(&cob, names, degrees, "1")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalogue;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    fn policy(w: usize, lo: i64, hi: i64) -> TruncationPolicy {
        TruncationPolicy::new(w, lo, hi).unwrap()
    }

    fn trivial_algebra() -> DGAlgebra {
        DGAlgebra::new(
            q(),
            vec![("1".into(), 0)],
            "1",
            vec![((0, 0), vec![(0, q().one())])],
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn hh_of_ground_field_is_one_dimensional() {
        let a = trivial_algebra();
        let t = hh_cohomology(&a, &policy(4, -2, 4)).unwrap();
        assert_eq!(t.dim_at(0, 0), 1);
        let HHEntries::WeightGraded(entries) = &t.entries else {
            panic!("expected weight-graded table")
        };
        assert_eq!(entries.len(), 1);
    }

    #[test]
    fn hh_of_graded_dual_numbers_shows_power_series_pattern() {
        let a = catalogue::dual_numbers(q(), 1);
        let t = hh_cohomology(&a, &policy(8, -2, 4)).unwrap();
        for n in 0..=8 {
            assert_eq!(t.dim_at(0, n), 1, "degree 0 weight {n}");
            assert_eq!(t.dim_at(1, n), 1, "degree 1 weight {n}");
        }
        let HHEntries::WeightGraded(entries) = &t.entries else {
            panic!("expected weight-graded table")
        };
        assert_eq!(entries.len(), 18, "no classes outside degrees 0 and 1");
        assert!(t.window.entry_exact(0, 8));
        // The aggregate per-degree totals keep growing with the cutoff.
        assert_eq!(t.stabilization[&0], false);
        assert_eq!(t.stabilization[&1], false);
        assert_eq!(t.stabilization[&3], true);
    }

    #[test]
    fn hh_of_ungraded_dual_numbers_matches_classical_dimensions() {
        let a = catalogue::dual_numbers(q(), 0);
        let t = hh_cohomology(&a, &policy(6, 0, 5)).unwrap();
        assert_eq!(t.dim_at(0, 0), 2);
        for m in 1..=5i64 {
            assert_eq!(t.dim_at(m, m as usize), 1, "degree {m}");
            assert_eq!(t.degree_total(m), 1, "degree {m} total");
        }
    }

    #[test]
    fn hh_of_k_times_k_is_concentrated_in_degree_zero() {
        let a = catalogue::k_times_k(q());
        let t = hh_cohomology(&a, &policy(5, 0, 4)).unwrap();
        assert_eq!(t.dim_at(0, 0), 2);
        let HHEntries::WeightGraded(entries) = &t.entries else {
            panic!("expected weight-graded table")
        };
        assert_eq!(entries.len(), 1, "separable algebra has no higher HH");
    }

    #[test]
    fn hh_of_contractible_algebra_vanishes() {
        let a = catalogue::contractible(q());
        let t = hh_cohomology(&a, &policy(4, -3, 3)).unwrap();
        let HHEntries::Aggregated(entries) = &t.entries else {
            panic!("expected aggregated table for d ≠ 0")
        };
        assert!(entries.is_empty(), "{entries:?}");
    }

    #[test]
    fn hh_homology_of_ground_field() {
        let a = trivial_algebra();
        let t = hh_homology(&a, &policy(4, -4, 2)).unwrap();
        assert_eq!(t.dim_at(0, 0), 1);
        let HHEntries::WeightGraded(entries) = &t.entries else {
            panic!()
        };
        assert_eq!(entries.len(), 1);
    }

    #[test]
    fn hh_homology_of_ungraded_dual_numbers() {
        let a = catalogue::dual_numbers(q(), 0);
        let t = hh_homology(&a, &policy(6, -5, 0)).unwrap();
        assert_eq!(t.dim_at(0, 0), 2);
        for n in 1..=5usize {
            assert_eq!(t.dim_at(-(n as i64), n), 1, "weight {n}");
        }
    }

    #[test]
    fn hh_homology_of_truncated_polynomial_hits_positive_degrees() {
        // Cohomological degree >= 1 is homological degree <= -1.
        let a = catalogue::truncated_poly(q(), 6, 1);
        let t = hh_homology_with_cap(&a, &policy(6, -2, 6), Some(6)).unwrap();
        let HHEntries::WeightGraded(entries) = &t.entries else {
            panic!()
        };
        let witness = entries
            .iter()
            .find(|((m, n), dim)| *m >= 1 && **dim > 0 && t.window.entry_exact(*m, *n));
        assert!(
            witness.is_some(),
            "expected a class in negative homological degree; table: {entries:?}"
        );
    }

    #[test]
    fn inflation_by_one_is_the_identity() {
        let a = catalogue::dual_numbers(q(), 1);
        let m1 = matrix_algebra_inflation(&a, 1).unwrap();
        assert_eq!(m1.dim(), a.dim());
        assert!(m1.validate().ok());
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                assert_eq!(m1.basis_product(i, j), a.basis_product(i, j));
            }
        }
    }

    #[test]
    fn inflated_matrix_algebra_is_valid_and_morita_trivial() {
        let m2 = matrix_algebra_inflation(&trivial_algebra(), 2).unwrap();
        assert_eq!(m2.dim(), 4);
        assert!(m2.validate().ok(), "{:?}", m2.validate().violations);
        let t = hh_cohomology(&m2, &policy(5, 0, 4)).unwrap();
        let base = hh_cohomology(&trivial_algebra(), &policy(5, 0, 4)).unwrap();
        for m in 0..=4i64 {
            for n in 0..=5usize {
                assert_eq!(t.dim_at(m, n), base.dim_at(m, n), "({m}, {n})");
            }
        }
    }

    #[test]
    fn morita_smoke_for_dual_numbers_over_prime_field() {
        let f = FieldSpec::prime(101).unwrap();
        let a = catalogue::dual_numbers(f, 0);
        let m2 = matrix_algebra_inflation(&a, 2).unwrap();
        let ta = hh_cohomology(&a, &policy(3, 0, 3)).unwrap();
        let tm = hh_cohomology(&m2, &policy(3, 0, 3)).unwrap();
        for m in 0..=2i64 {
            assert_eq!(
                ta.degree_total(m),
                tm.degree_total(m),
                "degree {m}: {:?} vs {:?}",
                ta.entries,
                tm.entries
            );
        }
    }

    #[test]
    fn opposite_algebra_has_the_same_hh_table() {
        for a in catalogue::all_small(q()) {
            if a.field.characteristic() != 0 && a.field.characteristic() <= a.dim() as u64 {
                continue;
            }
            let t = hh_cohomology(&a, &policy(4, -3, 4)).unwrap();
            let t_op = hh_cohomology(&a.opposite(), &policy(4, -3, 4)).unwrap();
            for m in -3..=4i64 {
                for n in 0..=4usize {
                    assert_eq!(t.dim_at(m, n), t_op.dim_at(m, n), "({m}, {n})");
                }
                assert_eq!(t.degree_total(m), t_op.degree_total(m));
            }
        }
    }

    #[test]
    fn euler_characteristic_is_preserved_per_diagonal() {
        // For weight-graded algebras each diagonal (degree - weight =
        // const) is a finite complex: alternating sums of cochain dims and
        // homology dims agree.
        let a = catalogue::dual_numbers(q(), 0);
        let pol = policy(5, 0, 4);
        let complex = CochainComplex::build(&a, &pol).unwrap();
        let t = hh_cohomology(&a, &pol).unwrap();
        // Ungraded algebra: cochains of weight n live in degree n, so the
        // diagonal through (m, n) = (0, 0) is the whole table.
        let mut chain_sum = 0i64;
        let mut hh_sum = 0i64;
        for n in 0..=4usize {
            let sign = if n % 2 == 0 { 1 } else { -1 };
            chain_sum += sign
                * complex.homs[n]
                    .space
                    .indices_in_degree(n as i64)
                    .len() as i64;
            hh_sum += sign * t.dim_at(n as i64, n) as i64;
        }
        assert_eq!(chain_sum, hh_sum);
    }
}
