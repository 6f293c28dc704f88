//! Graded vector spaces, homogeneous maps and tensor products with the
//! Koszul sign rule.
//!
//! Sign conventions used throughout the crate:
//!
//! * suspension: `(ΣV)^n = V^{n+1}`, so a shifted element `s·v` has degree
//!   `|v| - 1`; the shift symbol `s` counts as an odd (degree -1) operator;
//! * tensor products of maps are evaluated in one shot:
//!   `(f_0 ⊗ … ⊗ f_k)(x_0 ⊗ … ⊗ x_k)` picks up `(-1)^{|f_j|·(|x_0|+…+|x_{j-1}|)}`
//!   for every factor `f_j`;
//! * the differential of a shifted complex is `d_{ΣV} = -s ∘ d_V ∘ s⁻¹`.
//!
//! None of the sign dialects are trusted: every complex assembled from
//! these pieces re-checks `d² = 0` (and anticommutation of its two
//! differentials) at construction time.

use std::collections::HashMap;

use crate::error::CoreError;
use crate::field::{FieldSpec, Scalar};
use crate::matrix::{homology_at, SparseMatrix};

/// Finite-dimensional graded vector space with a flat, deterministically
/// ordered basis. Basis element `i` has degree `degrees[i]`.
#[derive(Clone, Debug)]
pub struct GradedVectorSpace {
    degrees: Vec<i64>,
    names: Option<Vec<String>>,
}

impl GradedVectorSpace {
    pub fn new(degrees: Vec<i64>, names: Option<Vec<String>>) -> Result<Self, CoreError> {
        if let Some(ns) = &names {
            assert_eq!(ns.len(), degrees.len());
            let mut seen: HashMap<(&str, i64), usize> = HashMap::new();
            for (i, n) in ns.iter().enumerate() {
                if seen.insert((n.as_str(), degrees[i]), i).is_some() {
                    return Err(CoreError::precondition(format!(
                        "duplicate basis name `{n}` within a degree"
                    )));
                }
            }
        }
        Ok(GradedVectorSpace { degrees, names })
    }

    pub fn empty() -> Self {
        GradedVectorSpace {
            degrees: Vec::new(),
            names: None,
        }
    }

    /// One-dimensional space concentrated in the given degree.
    pub fn line(degree: i64, name: &str) -> Self {
        GradedVectorSpace {
            degrees: vec![degree],
            names: Some(vec![name.to_string()]),
        }
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.degrees[i]
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn name(&self, i: usize) -> String {
        match &self.names {
            Some(ns) => ns[i].clone(),
            None => format!("e{i}"),
        }
    }

    /// Dimensions per degree, sparsely.
    pub fn dims_by_degree(&self) -> std::collections::BTreeMap<i64, usize> {
        let mut out = std::collections::BTreeMap::new();
        for d in &self.degrees {
            *out.entry(*d).or_insert(0) += 1;
        }
        out
    }

    /// Flat indices of the basis elements in the given degree, ascending.
    pub fn indices_in_degree(&self, d: i64) -> Vec<usize> {
        self.degrees
            .iter()
            .enumerate()
            .filter(|(_, deg)| **deg == d)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn support(&self) -> Option<(i64, i64)> {
        let lo = self.degrees.iter().min()?;
        let hi = self.degrees.iter().max()?;
        Some((*lo, *hi))
    }

    /// The shifted space ΣᵏV with `(Σᵏ v)` in degree `|v| - k`.
    pub fn shifted(&self, k: i64, tag: bool) -> GradedVectorSpace {
        let degrees = self.degrees.iter().map(|d| d - k).collect();
        let names = if tag {
            self.names.as_ref().map(|ns| {
                ns.iter()
                    .map(|n| {
                        if k == 1 {
                            format!("s({n})")
                        } else {
                            format!("s{k}({n})")
                        }
                    })
                    .collect()
            })
        } else {
            self.names.clone()
        };
        GradedVectorSpace { degrees, names }
    }

    pub fn direct_sum(&self, other: &GradedVectorSpace) -> GradedVectorSpace {
        let mut degrees = self.degrees.clone();
        degrees.extend_from_slice(&other.degrees);
        let names = match (&self.names, &other.names) {
            (Some(a), Some(b)) => {
                let mut ns = a.clone();
                ns.extend_from_slice(b);
                Some(ns)
            }
            _ => None,
        };
        GradedVectorSpace { degrees, names }
    }
}

/// A degree-homogeneous linear map between graded spaces, stored as one
/// sparse matrix on the flat bases.
#[derive(Clone, Debug)]
pub struct GradedLinearMap {
    pub degree: i64,
    pub matrix: SparseMatrix,
}

impl GradedLinearMap {
    pub fn zero(source: &GradedVectorSpace, target: &GradedVectorSpace, degree: i64) -> Self {
        GradedLinearMap {
            degree,
            matrix: SparseMatrix::zero(target.dim(), source.dim()),
        }
    }

    pub fn identity(space: &GradedVectorSpace, field: &FieldSpec) -> Self {
        GradedLinearMap {
            degree: 0,
            matrix: SparseMatrix::identity(space.dim(), field),
        }
    }

    pub fn from_matrix(
        source: &GradedVectorSpace,
        target: &GradedVectorSpace,
        degree: i64,
        matrix: SparseMatrix,
        field: &FieldSpec,
    ) -> Result<Self, CoreError> {
        assert_eq!(matrix.cols(), source.dim());
        assert_eq!(matrix.rows(), target.dim());
        let _ = field;
        for (r, c, _) in matrix.triplets() {
            if target.degree(r) != source.degree(c) + degree {
                return Err(CoreError::internal(format!(
                    "map is not homogeneous of degree {degree}: entry ({r}, {c}) connects degrees {} -> {}",
                    source.degree(c),
                    target.degree(r)
                )));
            }
        }
        Ok(GradedLinearMap { degree, matrix })
    }

    pub fn compose(&self, inner: &GradedLinearMap, field: &FieldSpec) -> GradedLinearMap {
        GradedLinearMap {
            degree: self.degree + inner.degree,
            matrix: self.matrix.mul(&inner.matrix, field),
        }
    }

    pub fn add(&self, other: &GradedLinearMap, field: &FieldSpec) -> GradedLinearMap {
        assert_eq!(self.degree, other.degree);
        GradedLinearMap {
            degree: self.degree,
            matrix: self.matrix.add(&other.matrix, field),
        }
    }

    pub fn scale(&self, s: &Scalar, field: &FieldSpec) -> GradedLinearMap {
        GradedLinearMap {
            degree: self.degree,
            matrix: self.matrix.scale(s, field),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    /// Restriction to one source degree: the block `V^d -> W^{d+degree}`.
    pub fn block(
        &self,
        source: &GradedVectorSpace,
        target: &GradedVectorSpace,
        d: i64,
        field: &FieldSpec,
    ) -> SparseMatrix {
        let src_idx = source.indices_in_degree(d);
        let tgt_idx = target.indices_in_degree(d + self.degree);
        let src_pos: HashMap<usize, usize> =
            src_idx.iter().enumerate().map(|(p, i)| (*i, p)).collect();
        let tgt_pos: HashMap<usize, usize> =
            tgt_idx.iter().enumerate().map(|(p, i)| (*i, p)).collect();
        let mut triplets = Vec::new();
        for (r, c, v) in self.matrix.triplets() {
            if let (Some(rp), Some(cp)) = (tgt_pos.get(&r), src_pos.get(&c)) {
                triplets.push((*rp, *cp, v.clone()));
            }
        }
        SparseMatrix::from_accumulated(tgt_idx.len(), src_idx.len(), triplets, field)
    }
}

/// Per-degree homology dimensions of `prev --d_in--> mid --d_out--> next`
/// (both maps of degree +1), reported for the listed degrees.
pub fn graded_homology_dims(
    prev: &GradedVectorSpace,
    mid: &GradedVectorSpace,
    next: &GradedVectorSpace,
    d_in: &GradedLinearMap,
    d_out: &GradedLinearMap,
    degrees: impl IntoIterator<Item = i64>,
    field: &FieldSpec,
) -> Result<std::collections::BTreeMap<i64, usize>, CoreError> {
    let mut out = std::collections::BTreeMap::new();
    for d in degrees {
        let din = d_in.block(prev, mid, d - 1, field);
        let dout = d_out.block(mid, next, d, field);
        out.insert(d, homology_at(&din, &dout, field)?);
    }
    Ok(out)
}

/// A tensor product of graded slots, materialised as the flat list of
/// basis tuples whose total degree lies inside a window. Degrees outside
/// the window are deliberately not represented; maps built against the
/// tensor silently drop images that leave it, so callers must reserve
/// enough margin around the degrees they report (the resolution layer
/// does).
#[derive(Clone, Debug)]
pub struct MultiTensor {
    pub slots: Vec<GradedVectorSpace>,
    pub space: GradedVectorSpace,
    tuples: Vec<Vec<u32>>,
    lookup: HashMap<Vec<u32>, usize>,
}

impl MultiTensor {
    /// Enumerates all tuples with total degree in `[lo, hi]`, in
    /// lexicographic slot order.
    pub fn enumerate(slots: Vec<GradedVectorSpace>, lo: i64, hi: i64) -> MultiTensor {
        // Suffix degree ranges for pruning.
        let n = slots.len();
        let mut min_suffix = vec![0i64; n + 1];
        let mut max_suffix = vec![0i64; n + 1];
        for i in (0..n).rev() {
            let (mn, mx) = slots[i].support().unwrap_or((0, 0));
            let empty = slots[i].dim() == 0;
            if empty {
                // An empty slot empties the whole product.
                min_suffix[i] = i64::MAX / 4;
                max_suffix[i] = i64::MIN / 4;
            } else {
                min_suffix[i] = mn + min_suffix[i + 1];
                max_suffix[i] = mx + max_suffix[i + 1];
            }
        }

        let mut tuples: Vec<Vec<u32>> = Vec::new();
        let mut degrees: Vec<i64> = Vec::new();
        let any_empty = slots.iter().any(|s| s.dim() == 0);
        if !any_empty {
            let mut current: Vec<u32> = Vec::with_capacity(n);
            fn rec(
                slots: &[GradedVectorSpace],
                min_suffix: &[i64],
                max_suffix: &[i64],
                lo: i64,
                hi: i64,
                acc: i64,
                current: &mut Vec<u32>,
                tuples: &mut Vec<Vec<u32>>,
                degrees: &mut Vec<i64>,
            ) {
                let i = current.len();
                if i == slots.len() {
                    if acc >= lo && acc <= hi {
                        tuples.push(current.clone());
                        degrees.push(acc);
                    }
                    return;
                }
                if acc + min_suffix[i] > hi || acc + max_suffix[i] < lo {
                    return;
                }
                for j in 0..slots[i].dim() {
                    current.push(j as u32);
                    rec(
                        slots,
                        min_suffix,
                        max_suffix,
                        lo,
                        hi,
                        acc + slots[i].degree(j),
                        current,
                        tuples,
                        degrees,
                    );
                    current.pop();
                }
            }
            rec(
                &slots,
                &min_suffix,
                &max_suffix,
                lo,
                hi,
                0,
                &mut current,
                &mut tuples,
                &mut degrees,
            );
        }

        let lookup = tuples
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        let space = GradedVectorSpace {
            degrees,
            names: None,
        };
        MultiTensor {
            slots,
            space,
            tuples,
            lookup,
        }
    }

    pub fn dim(&self) -> usize {
        self.tuples.len()
    }

    pub fn tuple(&self, i: usize) -> &[u32] {
        &self.tuples[i]
    }

    pub fn position(&self, tuple: &[u32]) -> Option<usize> {
        self.lookup.get(tuple).copied()
    }

    pub fn name_of(&self, i: usize) -> String {
        let parts: Vec<String> = self
            .tuples[i]
            .iter()
            .enumerate()
            .map(|(s, j)| self.slots[s].name(*j as usize))
            .collect();
        parts.join("|")
    }
}

/// One factor of a tensor product of maps: either the identity on a slot
/// or a homogeneous local map consuming `span` adjacent slots (1 or 2) and
/// producing one slot of the target tensor.
pub enum SlotOp<'a> {
    Id,
    /// `degree` is the degree of the local map; `table` sends the tuple of
    /// local indices to a combination in the output slot.
    Local {
        span: usize,
        degree: i64,
        table: &'a dyn Fn(&[u32]) -> Vec<(u32, Scalar)>,
    },
}

/// Evaluates a one-shot tensor of maps on a single basis tuple, returning
/// the image as `(coefficient, target tuple)` pairs. Signs follow the
/// Koszul rule: each local factor of odd degree contributes
/// `(-1)^{degrees of all source elements strictly to its left}`.
pub fn apply_ops_to_tuple(
    slots: &[GradedVectorSpace],
    ops: &[SlotOp],
    tuple: &[u32],
    field: &FieldSpec,
) -> Vec<(Scalar, Vec<u32>)> {
    // Check op shape: spans must cover the slots exactly.
    let mut results: Vec<(Scalar, Vec<u32>)> = vec![(field.one(), Vec::new())];
    let mut slot = 0usize;
    let mut prefix_degree = 0i64;
    for op in ops {
        match op {
            SlotOp::Id => {
                for (_, t) in results.iter_mut() {
                    t.push(tuple[slot]);
                }
                prefix_degree += slots[slot].degree(tuple[slot] as usize);
                slot += 1;
            }
            SlotOp::Local {
                span,
                degree,
                table,
            } => {
                let local: Vec<u32> = tuple[slot..slot + span].to_vec();
                let sign_flip = degree.rem_euclid(2) == 1 && prefix_degree.rem_euclid(2) == 1;
                let images = table(&local);
                let mut next: Vec<(Scalar, Vec<u32>)> =
                    Vec::with_capacity(results.len() * images.len().max(1));
                for (coeff, t) in &results {
                    for (out_idx, c) in &images {
                        let mut v = field.mul(coeff, c);
                        if sign_flip {
                            v = field.neg(&v);
                        }
                        if field.is_zero(&v) {
                            continue;
                        }
                        let mut t2 = t.clone();
                        t2.push(*out_idx);
                        next.push((v, t2));
                    }
                }
                results = next;
                for s in 0..*span {
                    prefix_degree += slots[slot + s].degree(tuple[slot + s] as usize);
                }
                slot += span;
            }
        }
    }
    assert_eq!(slot, slots.len(), "ops do not cover all slots");
    results
}

/// Materialises a one-shot tensor-of-maps as a matrix between two
/// tensors. Images falling outside the target's degree window are
/// dropped (see [`MultiTensor`] for the margin discipline).
pub fn tensor_of_maps(
    source: &MultiTensor,
    target: &MultiTensor,
    ops: &[SlotOp],
    degree: i64,
    field: &FieldSpec,
) -> GradedLinearMap {
    let mut triplets: Vec<(usize, usize, Scalar)> = Vec::new();
    for col in 0..source.dim() {
        for (coeff, t) in apply_ops_to_tuple(&source.slots, ops, source.tuple(col), field) {
            if let Some(row) = target.position(&t) {
                triplets.push((row, col, coeff));
            }
        }
    }
    let matrix = SparseMatrix::from_accumulated(target.dim(), source.dim(), triplets, field);
    GradedLinearMap { degree, matrix }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    fn two_line_space() -> GradedVectorSpace {
        GradedVectorSpace::new(vec![0, 1], Some(vec!["u".into(), "v".into()])).unwrap()
    }

    #[test]
    fn enumerate_respects_window() {
        let v = two_line_space();
        let t = MultiTensor::enumerate(vec![v.clone(), v.clone()], 0, 1);
        // degrees: 0 (u,u), 1 (u,v), 1 (v,u); (v,v) has degree 2 and is cut.
        assert_eq!(t.dim(), 3);
        assert_eq!(t.space.dims_by_degree()[&0], 1);
        assert_eq!(t.space.dims_by_degree()[&1], 2);
    }

    #[test]
    fn koszul_sign_of_odd_map_past_odd_element() {
        // f = identity relabel of degree 0 on slot 0; g = degree -1 shift
        // on slot 1. Applying (1 ⊗ g) to (v ⊗ x) must pick up (-1)^{|v|}.
        let v = two_line_space();
        let sv = v.shifted(1, false);
        let src = MultiTensor::enumerate(vec![v.clone(), v.clone()], -10, 10);
        let tgt = MultiTensor::enumerate(vec![v.clone(), sv.clone()], -10, 10);
        let shift_table = |idx: &[u32]| vec![(idx[0], q().one())];
        let ops = [
            SlotOp::Id,
            SlotOp::Local {
                span: 1,
                degree: -1,
                table: &shift_table,
            },
        ];
        let m = tensor_of_maps(&src, &tgt, &ops, -1, &q());
        // (u ⊗ x) -> +(u ⊗ sx); (v ⊗ x) -> -(v ⊗ sx).
        let col_uu = src.position(&[0, 0]).unwrap();
        let col_vu = src.position(&[1, 0]).unwrap();
        let row_uu = tgt.position(&[0, 0]).unwrap();
        let row_vu = tgt.position(&[1, 0]).unwrap();
        assert!(q().is_one(&m.matrix.get(row_uu, col_uu, &q())));
        assert_eq!(m.matrix.get(row_vu, col_vu, &q()), q().from_i64(-1));
    }

    #[test]
    fn interchange_of_disjoint_odd_maps_anticommutes() {
        // (d ⊗ 1) ∘ (1 ⊗ d) = -(1 ⊗ d) ∘ (d ⊗ 1) for odd d: the Koszul
        // rule must make disjoint odd operators anticommute.
        let v = two_line_space();
        let sv = v.shifted(1, false);
        let shift = |idx: &[u32]| vec![(idx[0], q().one())];

        let vv = MultiTensor::enumerate(vec![v.clone(), v.clone()], -10, 10);
        let sv_v = MultiTensor::enumerate(vec![sv.clone(), v.clone()], -10, 10);
        let v_sv = MultiTensor::enumerate(vec![v.clone(), sv.clone()], -10, 10);
        let sv_sv = MultiTensor::enumerate(vec![sv.clone(), sv.clone()], -10, 10);

        let d_left_first = tensor_of_maps(
            &vv,
            &sv_v,
            &[
                SlotOp::Local {
                    span: 1,
                    degree: -1,
                    table: &shift,
                },
                SlotOp::Id,
            ],
            -1,
            &q(),
        );
        let d_right_then = tensor_of_maps(
            &sv_v,
            &sv_sv,
            &[
                SlotOp::Id,
                SlotOp::Local {
                    span: 1,
                    degree: -1,
                    table: &shift,
                },
            ],
            -1,
            &q(),
        );
        let d_right_first = tensor_of_maps(
            &vv,
            &v_sv,
            &[
                SlotOp::Id,
                SlotOp::Local {
                    span: 1,
                    degree: -1,
                    table: &shift,
                },
            ],
            -1,
            &q(),
        );
        let d_left_then = tensor_of_maps(
            &v_sv,
            &sv_sv,
            &[
                SlotOp::Local {
                    span: 1,
                    degree: -1,
                    table: &shift,
                },
                SlotOp::Id,
            ],
            -1,
            &q(),
        );
        let one_way = d_right_then.compose(&d_left_first, &q());
        let other_way = d_left_then.compose(&d_right_first, &q());
        let sum = one_way.add(&other_way, &q());
        assert!(sum.is_zero());
    }

    #[test]
    fn homogeneity_is_enforced() {
        let v = two_line_space();
        let w = two_line_space();
        let m = SparseMatrix::from_dense(&[vec![0, 1], vec![0, 0]], &q());
        assert!(GradedLinearMap::from_matrix(&v, &w, 0, m, &q()).is_err());
    }
}
