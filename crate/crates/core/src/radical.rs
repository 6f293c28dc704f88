//! Jacobson radical of the underlying algebra, the DG-ideal J + d(J), and
//! the semisimple quotient A/J₊.
//!
//! The radical is computed from the trace bilinear form
//! `(x, y) ↦ trace(left-mult(x·y))`, which identifies it exactly in
//! characteristic 0 and in characteristic p > dim A; other characteristics
//! are rejected explicitly. The kernel computation is iterated on the
//! quotient until it is zero, and the returned ideal is verified to be
//! nilpotent with semisimple quotient.

use crate::dga::DGAlgebra;
use crate::error::CoreError;
use crate::field::{FieldSpec, Scalar};
use crate::matrix::SparseMatrix;

/// A two-sided ideal inside an algebra's total space, stored as canonical
/// RREF rows. Closure under multiplication by every basis element is
/// verified at construction.
#[derive(Clone, Debug)]
pub struct IdealDescription {
    basis: Vec<Vec<Scalar>>,
    pub is_dg_ideal: bool,
}

impl IdealDescription {
    pub fn from_spanning(
        algebra: &DGAlgebra,
        spanning: Vec<Vec<Scalar>>,
        require_dg: bool,
    ) -> Result<IdealDescription, CoreError> {
        let f = &algebra.field;
        let basis = rref_rows(spanning, algebra.dim(), f);
        // Two-sided closure.
        for v in &basis {
            for i in 0..algebra.dim() {
                let left = algebra.mul_vec(&algebra.basis_vec(i), v);
                let right = algebra.mul_vec(v, &algebra.basis_vec(i));
                if !in_span(&left, &basis, f) || !in_span(&right, &basis, f) {
                    return Err(CoreError::internal(format!(
                        "span is not a two-sided ideal: fails at basis element {}",
                        algebra.name(i)
                    )));
                }
            }
        }
        let mut is_dg_ideal = true;
        for v in &basis {
            if !in_span(&algebra.diff_vec(v), &basis, f) {
                is_dg_ideal = false;
            }
        }
        if require_dg && !is_dg_ideal {
            return Err(CoreError::internal(
                "expected a DG ideal but span is not closed under d".to_string(),
            ));
        }
        Ok(IdealDescription { basis, is_dg_ideal })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    pub fn contains(&self, v: &[Scalar], field: &FieldSpec) -> bool {
        in_span(v, &self.basis, field)
    }
}

/// Reduces `v` against RREF rows, returning the residual.
pub fn reduce_mod_span(v: &[Scalar], rows: &[Vec<Scalar>], field: &FieldSpec) -> Vec<Scalar> {
    let mut r = v.to_vec();
    for row in rows {
        let lead = row
            .iter()
            .position(|x| !field.is_zero(x))
            .expect("RREF rows are nonzero");
        if field.is_zero(&r[lead]) {
            continue;
        }
        let c = r[lead].clone();
        for (ri, wi) in r.iter_mut().zip(row.iter()) {
            *ri = field.sub(ri, &field.mul(&c, wi));
        }
    }
    r
}

pub fn in_span(v: &[Scalar], rows: &[Vec<Scalar>], field: &FieldSpec) -> bool {
    reduce_mod_span(v, rows, field)
        .iter()
        .all(|x| field.is_zero(x))
}

fn rref_rows(vectors: Vec<Vec<Scalar>>, dim: usize, field: &FieldSpec) -> Vec<Vec<Scalar>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let m = SparseMatrix::from_accumulated(
        vectors.len(),
        dim,
        vectors.iter().enumerate().flat_map(|(r, v)| {
            v.iter()
                .enumerate()
                .filter(|(_, x)| !field.is_zero(x))
                .map(move |(c, x)| (r, c, x.clone()))
                .collect::<Vec<_>>()
        }),
        field,
    );
    m.row_space_rref(field)
        .into_iter()
        .map(|sparse| {
            let mut dense = vec![field.zero(); dim];
            for (c, x) in sparse {
                dense[c] = x;
            }
            dense
        })
        .collect()
}

fn guard_characteristic(algebra: &DGAlgebra) -> Result<(), CoreError> {
    let p = algebra.field.characteristic();
    if p != 0 && p <= algebra.dim() as u64 {
        return Err(CoreError::precondition(format!(
            "radical unsupported in this characteristic: p = {p} <= dim = {}",
            algebra.dim()
        )));
    }
    Ok(())
}

/// Kernel of the trace form of the (grading-forgotten) algebra.
fn trace_form_kernel(algebra: &DGAlgebra) -> Vec<Vec<Scalar>> {
    let f = &algebra.field;
    let dim = algebra.dim();
    // trace of left multiplication by each basis element
    let tr: Vec<Scalar> = (0..dim)
        .map(|l| {
            let mut acc = f.zero();
            for j in 0..dim {
                for (k, c) in algebra.basis_product(l, j) {
                    if *k == j {
                        acc = f.add(&acc, c);
                    }
                }
            }
            acc
        })
        .collect();
    let mut triplets = Vec::new();
    for i in 0..dim {
        for j in 0..dim {
            let mut t = f.zero();
            for (k, c) in algebra.basis_product(i, j) {
                t = f.add(&t, &f.mul(c, &tr[*k]));
            }
            if !f.is_zero(&t) {
                triplets.push((i, j, t));
            }
        }
    }
    let form = SparseMatrix::from_accumulated(dim, dim, triplets, f);
    form.kernel_basis(f)
}

/// Quotient of the algebra by an ideal span: the quotient algebra on the
/// deterministic complement basis (standard basis elements away from the
/// RREF pivots), with projection and complement bookkeeping. `None` when
/// the ideal is everything.
pub struct QuotientAlgebra {
    pub algebra: Option<DGAlgebra>,
    /// Rows = quotient dim, cols = ambient dim: coordinates of the images
    /// of the ambient standard basis.
    pub projection: SparseMatrix,
    /// Cols = quotient dim, rows = ambient dim: a lift of each quotient
    /// basis vector.
    pub section: SparseMatrix,
    /// Ambient indices forming the deterministic complement, ascending.
    pub complement: Vec<usize>,
}

impl QuotientAlgebra {
    pub fn project(&self, ambient: &DGAlgebra, v: &[Scalar]) -> Vec<Scalar> {
        let f = &ambient.field;
        self_apply(&self.projection, v, f)
    }

    /// The quotient as a left module over the ambient algebra: the action
    /// is lift, multiply, project. `None` for the zero quotient.
    pub fn as_module(&self, ambient: &DGAlgebra) -> Option<crate::dga::DGModule> {
        let q = self.algebra.as_ref()?;
        let f = &ambient.field;
        let qdim = q.dim();
        let basis: Vec<(String, i64)> = (0..qdim).map(|i| (q.name(i), q.degree(i))).collect();
        let mut action_entries = Vec::new();
        for i in 0..ambient.dim() {
            for j in 0..qdim {
                let lifted: Vec<Scalar> =
                    (0..ambient.dim()).map(|r| self.section.get(r, j, f)).collect();
                let product = ambient.mul_vec(&ambient.basis_vec(i), &lifted);
                let projected = self_apply(&self.projection, &product, f);
                let combo = projected
                    .into_iter()
                    .enumerate()
                    .filter(|(_, c)| !f.is_zero(c))
                    .collect();
                action_entries.push(((i, j), combo));
            }
        }
        let mut diff_entries = Vec::new();
        for j in 0..qdim {
            diff_entries.push((j, q.basis_diff(j).clone()));
        }
        let module = crate::dga::DGModule::new(ambient, basis, action_entries, diff_entries)
            .expect("quotient module tables are well-formed");
        debug_assert!(module.validate(ambient).ok(), "quotient module axioms");
        Some(module)
    }
}

fn self_apply(m: &SparseMatrix, v: &[Scalar], f: &FieldSpec) -> Vec<Scalar> {
    m.apply(v, f)
}

pub fn quotient_by_span(
    algebra: &DGAlgebra,
    span: &[Vec<Scalar>],
) -> Result<QuotientAlgebra, CoreError> {
    let f = &algebra.field;
    let dim = algebra.dim();
    if span.len() == dim {
        return Ok(QuotientAlgebra {
            algebra: None,
            projection: SparseMatrix::zero(0, dim),
            section: SparseMatrix::zero(dim, 0),
            complement: Vec::new(),
        });
    }
    let pivots: Vec<usize> = span
        .iter()
        .map(|row| row.iter().position(|x| !f.is_zero(x)).unwrap())
        .collect();
    let complement: Vec<usize> = (0..dim).filter(|i| !pivots.contains(i)).collect();
    let qdim = complement.len();
    let project = |v: &[Scalar]| -> Vec<Scalar> {
        let residual = reduce_mod_span(v, span, f);
        complement.iter().map(|i| residual[*i].clone()).collect()
    };
    let proj_triplets = (0..dim).flat_map(|i| {
        let coords = project(&algebra.basis_vec(i));
        coords
            .into_iter()
            .enumerate()
            .map(move |(r, c)| (r, i, c))
            .collect::<Vec<_>>()
    });
    let projection = SparseMatrix::from_accumulated(qdim, dim, proj_triplets, f);

    let mut mult_entries = Vec::new();
    for (qi, &ci) in complement.iter().enumerate() {
        for (qj, &cj) in complement.iter().enumerate() {
            let prod = project(&algebra.mul_vec(&algebra.basis_vec(ci), &algebra.basis_vec(cj)));
            let combo = prod
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !f.is_zero(c))
                .collect();
            mult_entries.push(((qi, qj), combo));
        }
    }
    let mut diff_entries = Vec::new();
    for (qi, &ci) in complement.iter().enumerate() {
        let dv = project(&algebra.diff_vec(&algebra.basis_vec(ci)));
        let combo = dv
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !f.is_zero(c))
            .collect();
        diff_entries.push((qi, combo));
    }

    let basis: Vec<(String, i64)> = complement
        .iter()
        .map(|&i| (algebra.name(i), algebra.degree(i)))
        .collect();

    // The image of 1 must be a basis element of the quotient; change basis
    // if reduction spread it over several complement elements.
    let unit_coords = project(&algebra.unit_vec());
    let unit_positions: Vec<usize> = unit_coords
        .iter()
        .enumerate()
        .filter(|(_, c)| !f.is_zero(c))
        .map(|(i, _)| i)
        .collect();
    if unit_positions.is_empty() {
        return Err(CoreError::internal(
            "unit lies in the ideal but the ideal is proper".to_string(),
        ));
    }
    // Section on the plain complement basis.
    let plain_section = SparseMatrix::from_accumulated(
        dim,
        qdim,
        complement
            .iter()
            .enumerate()
            .map(|(j, &i)| (i, j, f.one())),
        f,
    );

    let single_unit = unit_positions.len() == 1 && f.is_one(&unit_coords[unit_positions[0]]);
    let (q, projection, section) = if single_unit {
        let q = DGAlgebra::new(
            *f,
            basis,
            &algebra.name(complement[unit_positions[0]]),
            mult_entries,
            diff_entries,
        )?;
        (q, projection, plain_section)
    } else {
        let tmp_names: Vec<String> = (0..qdim).map(|i| format!("q{i}")).collect();
        let tmp = DGAlgebra::new(
            *f,
            tmp_names
                .iter()
                .cloned()
                .zip(complement.iter().map(|&i| algebra.degree(i)))
                .collect(),
            &format!("q{}", unit_positions[0]),
            mult_entries,
            diff_entries,
        )?;
        // Install the image of 1 in place of its first supporting element.
        let lead = unit_positions[0];
        let mut triplets: Vec<(usize, usize, Scalar)> = Vec::new();
        for i in 0..qdim {
            if i == lead {
                for (r, c) in unit_coords.iter().enumerate() {
                    if !f.is_zero(c) {
                        triplets.push((r, i, c.clone()));
                    }
                }
            } else {
                triplets.push((i, i, f.one()));
            }
        }
        let cob = SparseMatrix::from_accumulated(qdim, qdim, triplets, f);
        let names: Vec<String> = (0..qdim)
            .map(|i| {
                if i == lead {
                    "1".to_string()
                } else {
                    algebra.name(complement[i])
                }
            })
            .collect();
        let degrees: Vec<i64> = complement.iter().map(|&i| algebra.degree(i)).collect();
        let q = tmp.change_of_basis(&cob, names, degrees, "1")?;
        // Coordinates transform contravariantly: new = cob⁻¹ old.
        let identity_cols: Vec<Vec<Scalar>> = (0..qdim)
            .map(|i| {
                let mut e = vec![f.zero(); qdim];
                e[i] = f.one();
                e
            })
            .collect();
        let inv_cols = cob.solve_columns(&identity_cols, f);
        let cob_inv = SparseMatrix::from_accumulated(
            qdim,
            qdim,
            inv_cols.into_iter().enumerate().flat_map(|(c, col)| {
                col.expect("change of basis is invertible")
                    .into_iter()
                    .enumerate()
                    .map(move |(r, v)| (r, c, v))
                    .collect::<Vec<_>>()
            }),
            f,
        );
        let new_projection = cob_inv.mul(&projection, f);
        let new_section = plain_section.mul(&cob, f);
        (q, new_projection, new_section)
    };

    Ok(QuotientAlgebra {
        algebra: Some(q),
        projection,
        section,
        complement,
    })
}

/// Jacobson radical of the underlying (grading-forgotten) algebra.
///
/// Returns the ideal with verified nilpotency; the quotient is verified
/// to have zero trace-form kernel.
pub fn radical(algebra: &DGAlgebra) -> Result<IdealDescription, CoreError> {
    guard_characteristic(algebra)?;
    let f = &algebra.field;
    let dim = algebra.dim();

    let mut span = rref_rows(trace_form_kernel(algebra), dim, f);
    for _ in 0..=dim {
        let quotient = quotient_by_span(algebra, &span)?;
        let Some(q) = &quotient.algebra else { break };
        let extra = trace_form_kernel(q);
        if extra.is_empty() {
            break;
        }
        // Pull the quotient kernel back along the complement section.
        let mut vectors = span.clone();
        for w in extra {
            let mut lift = vec![f.zero(); dim];
            for (qi, c) in w.iter().enumerate() {
                lift[quotient.complement[qi]] = c.clone();
            }
            vectors.push(lift);
        }
        span = rref_rows(vectors, dim, f);
    }

    let ideal = IdealDescription::from_spanning(algebra, span, false)?;
    verify_nilpotent(algebra, &ideal)?;
    Ok(ideal)
}

fn verify_nilpotent(algebra: &DGAlgebra, ideal: &IdealDescription) -> Result<(), CoreError> {
    let f = &algebra.field;
    let mut power: Vec<Vec<Scalar>> = ideal.basis().to_vec();
    for _ in 0..=algebra.dim() {
        if power.is_empty() {
            return Ok(());
        }
        let mut next = Vec::new();
        for x in &power {
            for y in ideal.basis() {
                next.push(algebra.mul_vec(x, y));
            }
        }
        power = rref_rows(next, algebra.dim(), f);
    }
    Err(CoreError::internal(
        "radical candidate is not nilpotent".to_string(),
    ))
}

/// The DG-ideal J₊ = J + d(J).
pub fn j_plus(algebra: &DGAlgebra) -> Result<IdealDescription, CoreError> {
    let j = radical(algebra)?;
    let mut spanning: Vec<Vec<Scalar>> = j.basis().to_vec();
    for v in j.basis() {
        spanning.push(algebra.diff_vec(v));
    }
    IdealDescription::from_spanning(algebra, spanning, true)
}

/// The semisimple quotient A/J₊ together with the projection. The induced
/// differential is verified to vanish and the quotient is verified to have
/// zero radical.
pub fn semisimple_quotient(algebra: &DGAlgebra) -> Result<QuotientAlgebra, CoreError> {
    let jp = j_plus(algebra)?;
    let quotient = quotient_by_span(algebra, &jp.basis().to_vec())?;
    if let Some(q) = &quotient.algebra {
        for i in 0..q.dim() {
            if !q.basis_diff(i).is_empty() {
                return Err(CoreError::internal(
                    "induced differential on A/J+ is nonzero".to_string(),
                ));
            }
        }
        let residual = trace_form_kernel(q);
        if !residual.is_empty() {
            return Err(CoreError::internal(
                "semisimple quotient has nonzero radical".to_string(),
            ));
        }
    }
    Ok(quotient)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalogue;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    #[test]
    fn radical_of_dual_numbers_is_x() {
        let a = catalogue::dual_numbers(q(), 1);
        let j = radical(&a).unwrap();
        assert_eq!(j.dim(), 1);
        assert!(j.contains(&a.basis_vec(1), &q()));
    }

    #[test]
    fn radical_of_a2_is_the_arrow() {
        // Hand elimination of the trace form: e_12 spans the kernel.
        let a = catalogue::a2_path_algebra(q());
        let j = radical(&a).unwrap();
        assert_eq!(j.dim(), 1);
        let arrow = a.index_of("a").unwrap();
        assert!(j.contains(&a.basis_vec(arrow), &q()));
    }

    #[test]
    fn semisimple_algebras_have_zero_radical() {
        for a in [catalogue::k_times_k(q()), catalogue::gaussian_numbers(q())] {
            assert_eq!(radical(&a).unwrap().dim(), 0);
        }
    }

    #[test]
    fn radical_unsupported_in_small_characteristic() {
        let f2 = FieldSpec::prime(2).unwrap();
        let a = catalogue::dual_numbers(f2, 0);
        match radical(&a) {
            Err(CoreError::Precondition(msg)) => assert!(msg.contains("radical unsupported")),
            other => panic!("expected precondition error, got {other:?}"),
        }
    }

    #[test]
    fn radical_respects_direct_sums() {
        let a = catalogue::dual_numbers(q(), 0);
        let b = catalogue::a2_path_algebra(q());
        let s = a.direct_sum(&b, ("a.", "b.")).unwrap();
        assert!(s.validate().ok());
        let j = radical(&s).unwrap();
        assert_eq!(j.dim(), radical(&a).unwrap().dim() + radical(&b).unwrap().dim());
    }

    #[test]
    fn j_plus_of_contractible_is_everything() {
        let a = catalogue::contractible(q());
        let jp = j_plus(&a).unwrap();
        assert_eq!(jp.dim(), 2);
        assert!(jp.is_dg_ideal);
        let quotient = semisimple_quotient(&a).unwrap();
        assert!(quotient.algebra.is_none());
    }

    #[test]
    fn j_plus_with_zero_differential_is_the_radical() {
        let a = catalogue::dual_numbers(q(), 1);
        let jp = j_plus(&a).unwrap();
        assert_eq!(jp.dim(), 1);
        assert!(jp.is_dg_ideal);
    }

    #[test]
    fn semisimple_quotient_of_dual_numbers_is_k() {
        let a = catalogue::dual_numbers(q(), 1);
        let quotient = semisimple_quotient(&a).unwrap();
        let qa = quotient.algebra.unwrap();
        assert_eq!(qa.dim(), 1);
        assert!(qa.validate().ok());
    }

    #[test]
    fn semisimple_quotient_of_a2_is_k_times_k() {
        let a = catalogue::a2_path_algebra(q());
        let quotient = semisimple_quotient(&a).unwrap();
        let qa = quotient.algebra.unwrap();
        assert_eq!(qa.dim(), 2);
        assert!(qa.validate().ok());
        // Commutative with two orthogonal idempotents summing to 1.
        assert_eq!(radical(&qa).unwrap().dim(), 0);
    }

    #[test]
    fn quotient_handles_unit_pivot() {
        // Ideal spanned by 1 - e in k x k: the unit must be reinstalled.
        let a = catalogue::k_times_k(q());
        let f = q();
        let span = rref_rows(
            vec![vec![f.one(), f.neg(&f.one())]],
            2,
            &f,
        );
        let quotient = quotient_by_span(&a, &span).unwrap();
        let qa = quotient.algebra.unwrap();
        assert_eq!(qa.dim(), 1);
        assert!(qa.validate().ok());
    }
}
