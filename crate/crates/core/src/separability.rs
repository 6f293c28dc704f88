//! Split-separability certification for semisimple algebras.
//!
//! The check certifies the split case only: it succeeds when the algebra
//! decomposes as a product of full matrix algebras over the ground field,
//! found via primitive central idempotents and a dimension count on left
//! ideals. Non-split semisimple algebras (a center that is a proper field
//! extension, or division-algebra blocks) come back `Unknown`.

use num_traits::{Signed, Zero};

use crate::dga::DGAlgebra;
use crate::error::CoreError;
use crate::field::{FieldSpec, Scalar};
use crate::matrix::SparseMatrix;
use crate::radical;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Separability {
    /// Certified split: sizes of the matrix blocks.
    Separable { matrix_blocks: Vec<usize> },
    /// Reserved for genuinely inseparable quotients; unreachable for the
    /// representable input formats (perfect ground fields).
    Inseparable,
    Unknown { reason: String },
}

/// Decides split-separability of an algebra with zero differential and
/// zero radical (both are preconditions).
pub fn separability_check(s: &DGAlgebra) -> Result<Separability, CoreError> {
    let f = &s.field;
    for i in 0..s.dim() {
        if !s.basis_diff(i).is_empty() {
            return Err(CoreError::precondition(
                "separability check requires a zero differential".to_string(),
            ));
        }
    }
    if radical::radical(s)?.dim() != 0 {
        return Err(CoreError::precondition(
            "separability check requires a zero radical".to_string(),
        ));
    }
    if s.dim() == 0 {
        return Ok(Separability::Separable {
            matrix_blocks: vec![],
        });
    }

    let center = center_basis(s);

    // Refine the unit into primitive central idempotents using the
    // eigenvalues of each central basis element.
    let mut idempotents: Vec<Vec<Scalar>> = vec![s.unit_vec()];
    for z in &center {
        let mut refined = Vec::new();
        for e in &idempotents {
            let ze = s.mul_vec(z, e);
            let poly = match min_poly_in_subalgebra(s, &ze, e) {
                Some(p) => p,
                None => {
                    return Ok(Separability::Unknown {
                        reason: "could not compute a central minimal polynomial".into(),
                    })
                }
            };
            let roots = match distinct_linear_roots(&poly, f) {
                Some(r) => r,
                None => {
                    return Ok(Separability::Unknown {
                        reason: "a central element has a minimal polynomial that does not split \
                                 into distinct linear factors over the ground field"
                            .into(),
                    })
                }
            };
            if roots.len() <= 1 {
                refined.push(e.clone());
                continue;
            }
            for (i, ri) in roots.iter().enumerate() {
                // Lagrange idempotent for eigenvalue ri of ze inside eAe.
                let mut eps = e.clone();
                for (j, rj) in roots.iter().enumerate() {
                    if i == j {
                        continue;
                    }
                    let mut shifted = ze.clone();
                    for (si, ei) in shifted.iter_mut().zip(e.iter()) {
                        *si = f.sub(si, &f.mul(rj, ei));
                    }
                    let denom = f.sub(ri, rj);
                    let inv = f.inv(&denom)?;
                    eps = s.mul_vec(&eps, &shifted);
                    for c in eps.iter_mut() {
                        *c = f.mul(c, &inv);
                    }
                }
                refined.push(eps);
            }
        }
        idempotents = refined;
    }

    // Sanity: orthogonal idempotents summing to 1.
    let mut total = vec![f.zero(); s.dim()];
    for e in &idempotents {
        let ee = s.mul_vec(e, e);
        if &ee != e {
            return Err(CoreError::internal("central idempotent fails e² = e"));
        }
        for (t, c) in total.iter_mut().zip(e.iter()) {
            *t = f.add(t, c);
        }
    }
    if total != s.unit_vec() {
        return Err(CoreError::internal(
            "central idempotents do not sum to 1",
        ));
    }

    let mut blocks = Vec::new();
    for e in &idempotents {
        let block = block_basis(s, e);
        let dim = block.len();
        let n = (1..=dim).find(|n| n * n == dim);
        let Some(n) = n else {
            return Ok(Separability::Unknown {
                reason: format!("a simple block has dimension {dim}, not a perfect square"),
            });
        };
        if n == 1 {
            blocks.push(1);
            continue;
        }
        // A central simple algebra of dimension n² is a matrix algebra
        // over k exactly when it has a left ideal of dimension n. Search
        // ideals generated by block basis elements and their pairwise
        // products.
        let mut generators: Vec<Vec<Scalar>> = block.clone();
        for x in &block {
            for y in &block {
                generators.push(s.mul_vec(x, y));
            }
        }
        let mut found = false;
        for g in &generators {
            let ideal: Vec<Vec<Scalar>> = block.iter().map(|v| s.mul_vec(v, g)).collect();
            if span_dim(&ideal, s.dim(), f) == n {
                found = true;
                break;
            }
        }
        if !found {
            return Ok(Separability::Unknown {
                reason: format!(
                    "a simple block of dimension {dim} could not be certified as a matrix algebra"
                ),
            });
        }
        blocks.push(n);
    }
    blocks.sort_unstable();
    Ok(Separability::Separable {
        matrix_blocks: blocks,
    })
}

fn center_basis(s: &DGAlgebra) -> Vec<Vec<Scalar>> {
    let f = &s.field;
    let dim = s.dim();
    let mut stacked = SparseMatrix::zero(0, dim);
    for i in 0..dim {
        let commutator = s
            .left_mult_matrix(i)
            .sub(&s.right_mult_matrix(i), f);
        stacked = stacked.vstack(&commutator);
    }
    stacked.kernel_basis(f)
}

fn block_basis(s: &DGAlgebra, e: &[Scalar]) -> Vec<Vec<Scalar>> {
    let f = &s.field;
    let images: Vec<Vec<Scalar>> = (0..s.dim())
        .map(|i| s.mul_vec(e, &s.mul_vec(&s.basis_vec(i), e)))
        .collect();
    span_rows(&images, s.dim(), f)
}

fn span_rows(vectors: &[Vec<Scalar>], dim: usize, f: &FieldSpec) -> Vec<Vec<Scalar>> {
    let m = SparseMatrix::from_accumulated(
        vectors.len(),
        dim,
        vectors.iter().enumerate().flat_map(|(r, v)| {
            v.iter()
                .enumerate()
                .filter(|(_, x)| !f.is_zero(x))
                .map(move |(c, x)| (r, c, x.clone()))
                .collect::<Vec<_>>()
        }),
        f,
    );
    m.row_space_rref(f)
        .into_iter()
        .map(|sparse| {
            let mut dense = vec![f.zero(); dim];
            for (c, x) in sparse {
                dense[c] = x;
            }
            dense
        })
        .collect()
}

fn span_dim(vectors: &[Vec<Scalar>], dim: usize, f: &FieldSpec) -> usize {
    span_rows(vectors, dim, f).len()
}

/// Monic minimal polynomial of `z` inside the unital subalgebra with unit
/// `e` (so z⁰ = e). Coefficients ascending.
fn min_poly_in_subalgebra(
    s: &DGAlgebra,
    z: &[Scalar],
    e: &[Scalar],
) -> Option<Vec<Scalar>> {
    let f = &s.field;
    let dim = s.dim();
    let mut powers: Vec<Vec<Scalar>> = vec![e.to_vec()];
    for _ in 0..=dim {
        let last = powers.last().unwrap();
        let next = s.mul_vec(last, z);
        // Express `next` in the span of the previous powers.
        let m = SparseMatrix::from_accumulated(
            dim,
            powers.len(),
            powers.iter().enumerate().flat_map(|(c, v)| {
                v.iter()
                    .enumerate()
                    .filter(|(_, x)| !f.is_zero(x))
                    .map(move |(r, x)| (r, c, x.clone()))
                    .collect::<Vec<_>>()
            }),
            f,
        );
        if let Some(coeffs) = m.solve_columns(&[next.clone()], f).remove(0) {
            // z^k = Σ coeffs_i z^i, so the minimal polynomial is
            // x^k - Σ coeffs_i x^i.
            let mut poly: Vec<Scalar> = coeffs.into_iter().map(|c| f.neg(&c)).collect();
            poly.push(f.one());
            return Some(poly);
        }
        powers.push(next);
    }
    None
}

/// If the polynomial splits into distinct linear factors over the field,
/// returns its roots; otherwise (including "couldn't decide") `None`.
fn distinct_linear_roots(poly: &[Scalar], f: &FieldSpec) -> Option<Vec<Scalar>> {
    let deg = poly.len() - 1;
    if deg == 0 {
        return Some(vec![]);
    }
    let roots = match f {
        FieldSpec::Rationals => rational_roots(poly, f)?,
        FieldSpec::Prime(p) => prime_field_roots(poly, f, *p)?,
    };
    if roots.len() != deg {
        return None;
    }
    // Distinctness.
    for i in 0..roots.len() {
        for j in 0..i {
            if roots[i] == roots[j] {
                return None;
            }
        }
    }
    Some(roots)
}

fn eval_poly(poly: &[Scalar], x: &Scalar, f: &FieldSpec) -> Scalar {
    let mut acc = f.zero();
    for c in poly.iter().rev() {
        acc = f.add(&f.mul(&acc, x), c);
    }
    acc
}

/// Divides a monic-led polynomial by (x - r), assuming r is a root.
fn deflate(poly: &[Scalar], r: &Scalar, f: &FieldSpec) -> Vec<Scalar> {
    let mut out = vec![f.zero(); poly.len() - 1];
    let mut carry = f.zero();
    for i in (0..poly.len() - 1).rev() {
        carry = f.add(&poly[i + 1], &f.mul(&carry, r));
        out[i] = carry.clone();
    }
    out
}

fn rational_roots(poly: &[Scalar], f: &FieldSpec) -> Option<Vec<Scalar>> {
    use num_bigint::BigInt;
    let mut current = poly.to_vec();
    let mut roots = Vec::new();
    'outer: while current.len() > 1 {
        // Clear denominators, then enumerate candidates p/q with
        // p | constant term and q | leading coefficient.
        let mut denom_lcm = BigInt::from(1);
        for c in &current {
            let Scalar::Rat(r) = c else { unreachable!() };
            denom_lcm = num_integer::lcm(denom_lcm.clone(), r.denom().clone());
        }
        let ints: Vec<BigInt> = current
            .iter()
            .map(|c| {
                let Scalar::Rat(r) = c else { unreachable!() };
                (r * num_rational::BigRational::from_integer(denom_lcm.clone()))
                    .to_integer()
            })
            .collect();
        let lead = ints.last().unwrap().clone();
        let constant = ints
            .iter()
            .find(|c| !c.is_zero())
            .cloned()
            .unwrap_or_else(|| BigInt::from(0));
        if ints[0].is_zero() {
            // x divides the polynomial.
            roots.push(f.zero());
            current = deflate_monicised(&current, &f.zero(), f)?;
            continue;
        }
        let limit = BigInt::from(1_000_000u64);
        if constant.abs() > limit || lead.abs() > limit {
            return None;
        }
        let p_divs = small_divisors(constant.abs().try_into().ok()?);
        let q_divs = small_divisors(lead.abs().try_into().ok()?);
        for p in &p_divs {
            for q in &q_divs {
                for sign in [1i64, -1] {
                    let cand = f.div(&f.from_i64(sign * *p as i64), &f.from_i64(*q as i64)).ok()?;
                    if f.is_zero(&eval_poly(&current, &cand, f)) {
                        roots.push(cand.clone());
                        current = deflate_monicised(&current, &cand, f)?;
                        continue 'outer;
                    }
                }
            }
        }
        return None; // no rational root left but degree > 0
    }
    Some(roots)
}

fn deflate_monicised(poly: &[Scalar], r: &Scalar, f: &FieldSpec) -> Option<Vec<Scalar>> {
    let lead = poly.last()?;
    let inv = f.inv(lead).ok()?;
    let monic: Vec<Scalar> = poly.iter().map(|c| f.mul(c, &inv)).collect();
    Some(deflate(&monic, r, f))
}

fn small_divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            if d != n / d {
                out.push(n / d);
            }
        }
        d += 1;
    }
    if n == 0 {
        out.push(1);
    }
    out.sort_unstable();
    out
}

fn prime_field_roots(poly: &[Scalar], f: &FieldSpec, p: u64) -> Option<Vec<Scalar>> {
    if p > 65_536 {
        return None; // root enumeration capped; verdict stays unknown
    }
    let mut current = poly.to_vec();
    let mut roots = Vec::new();
    let mut x = 0u64;
    while current.len() > 1 && x < p {
        let cand = Scalar::Fp(x);
        if f.is_zero(&eval_poly(&current, &cand, f)) {
            roots.push(cand.clone());
            current = deflate_monicised(&current, &cand, f)?;
            // Stay on the same x: multiplicities should fail distinctness.
            continue;
        }
        x += 1;
    }
    if current.len() > 1 {
        return None;
    }
    Some(roots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalogue;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
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
    fn ground_field_is_separable() {
        assert_eq!(
            separability_check(&trivial_algebra()).unwrap(),
            Separability::Separable {
                matrix_blocks: vec![1]
            }
        );
    }

    #[test]
    fn split_product_is_separable() {
        let a = catalogue::k_times_k(q());
        assert_eq!(
            separability_check(&a).unwrap(),
            Separability::Separable {
                matrix_blocks: vec![1, 1]
            }
        );
    }

    #[test]
    fn gaussian_numbers_are_unknown_over_q() {
        let a = catalogue::gaussian_numbers(q());
        match separability_check(&a).unwrap() {
            Separability::Unknown { reason } => {
                assert!(reason.contains("does not split"));
            }
            other => panic!("expected unknown, got {other:?}"),
        }
    }

    #[test]
    fn nonzero_radical_is_a_precondition_error() {
        let a = catalogue::dual_numbers(q(), 0);
        assert!(matches!(
            separability_check(&a),
            Err(CoreError::Precondition(_))
        ));
    }

    #[test]
    fn gaussian_numbers_split_over_f5() {
        // x² + 1 = (x-2)(x+2) over F_5.
        let f5 = FieldSpec::prime(5).unwrap();
        let a = catalogue::gaussian_numbers(f5);
        assert_eq!(
            separability_check(&a).unwrap(),
            Separability::Separable {
                matrix_blocks: vec![1, 1]
            }
        );
    }

    #[test]
    fn gaussian_numbers_stay_unknown_over_f7() {
        // x² + 1 is irreducible over F_7.
        let f7 = FieldSpec::prime(7).unwrap();
        let a = catalogue::gaussian_numbers(f7);
        assert!(matches!(
            separability_check(&a).unwrap(),
            Separability::Unknown { .. }
        ));
    }
}
