//! Finite-dimensional DG algebras and DG modules given by structure
//! constants, with axiom validation and underlying-complex cohomology.

use std::collections::BTreeMap;

use crate::error::CoreError;
use crate::field::{FieldSpec, Scalar};
use crate::graded::{GradedLinearMap, GradedVectorSpace};
use crate::matrix::{homology_at, SparseMatrix};

/// Linear combination of basis elements, sparse and sorted by index.
pub type Combination = Vec<(usize, Scalar)>;

/// A finite-dimensional DGA: graded basis, unit basis element,
/// multiplication and differential tables. Tables are total; omitted
/// products at construction mean zero.
#[derive(Clone, Debug)]
pub struct DGAlgebra {
    pub field: FieldSpec,
    space: GradedVectorSpace,
    unit: usize,
    mult: Vec<Vec<Combination>>,
    diff: Vec<Combination>,
}

/// One violated identity, with the basis elements that witness it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub identity: String,
    pub witness: String,
}

/// Outcome of [`DGAlgebra::validate`]: all checked identities with their
/// witnesses. Violations are data, not errors.
#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl DGAlgebra {
    /// Builds the algebra from raw tables. Structural well-formedness
    /// (index ranges, known unit) is enforced here; the graded-algebra
    /// axioms are checked separately by [`DGAlgebra::validate`].
    pub fn new(
        field: FieldSpec,
        basis: Vec<(String, i64)>,
        unit_name: &str,
        mult_entries: Vec<((usize, usize), Combination)>,
        diff_entries: Vec<(usize, Combination)>,
    ) -> Result<DGAlgebra, CoreError> {
        let dim = basis.len();
        let names: Vec<String> = basis.iter().map(|(n, _)| n.clone()).collect();
        let degrees: Vec<i64> = basis.iter().map(|(_, d)| *d).collect();
        let mut seen = std::collections::BTreeSet::new();
        for n in &names {
            if !seen.insert(n.clone()) {
                return Err(CoreError::precondition(format!(
                    "duplicate basis name `{n}`"
                )));
            }
        }
        let unit = names
            .iter()
            .position(|n| n == unit_name)
            .ok_or_else(|| CoreError::precondition(format!("unit `{unit_name}` is not a basis element")))?;
        let space = GradedVectorSpace::new(degrees, Some(names))?;
        let mut mult = vec![vec![Vec::new(); dim]; dim];
        for ((i, j), combo) in mult_entries {
            if i >= dim || j >= dim || combo.iter().any(|(k, _)| *k >= dim) {
                return Err(CoreError::precondition("product entry out of range".to_string()));
            }
            mult[i][j] = normalize(combo, &field);
        }
        let mut diff = vec![Vec::new(); dim];
        for (i, combo) in diff_entries {
            if i >= dim || combo.iter().any(|(k, _)| *k >= dim) {
                return Err(CoreError::precondition("differential entry out of range".to_string()));
            }
            diff[i] = normalize(combo, &field);
        }
        Ok(DGAlgebra {
            field,
            space,
            unit,
            mult,
            diff,
        })
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn space(&self) -> &GradedVectorSpace {
        &self.space
    }

    pub fn unit_index(&self) -> usize {
        self.unit
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.space.degree(i)
    }

    pub fn name(&self, i: usize) -> String {
        self.space.name(i)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        (0..self.dim()).find(|i| self.space.name(*i) == name)
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &Combination {
        &self.mult[i][j]
    }

    pub fn basis_diff(&self, i: usize) -> &Combination {
        &self.diff[i]
    }

    /// Product of two coefficient vectors (dense, length = dim).
    pub fn mul_vec(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let f = &self.field;
        let mut out = vec![f.zero(); self.dim()];
        for (i, ai) in a.iter().enumerate() {
            if f.is_zero(ai) {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if f.is_zero(bj) {
                    continue;
                }
                let c = f.mul(ai, bj);
                for (k, coeff) in &self.mult[i][j] {
                    out[*k] = f.add(&out[*k], &f.mul(&c, coeff));
                }
            }
        }
        out
    }

    pub fn diff_vec(&self, a: &[Scalar]) -> Vec<Scalar> {
        let f = &self.field;
        let mut out = vec![f.zero(); self.dim()];
        for (i, ai) in a.iter().enumerate() {
            if f.is_zero(ai) {
                continue;
            }
            for (k, coeff) in &self.diff[i] {
                out[*k] = f.add(&out[*k], &f.mul(ai, coeff));
            }
        }
        out
    }

    pub fn unit_vec(&self) -> Vec<Scalar> {
        let mut v = vec![self.field.zero(); self.dim()];
        v[self.unit] = self.field.one();
        v
    }

    pub fn basis_vec(&self, i: usize) -> Vec<Scalar> {
        let mut v = vec![self.field.zero(); self.dim()];
        v[i] = self.field.one();
        v
    }

    /// Matrix of left multiplication by basis element `i` on the flat basis.
    pub fn left_mult_matrix(&self, i: usize) -> SparseMatrix {
        let triplets = (0..self.dim()).flat_map(|j| {
            self.mult[i][j]
                .iter()
                .map(move |(k, c)| (*k, j, c.clone()))
                .collect::<Vec<_>>()
        });
        SparseMatrix::from_accumulated(self.dim(), self.dim(), triplets, &self.field)
    }

    pub fn right_mult_matrix(&self, i: usize) -> SparseMatrix {
        let triplets = (0..self.dim()).flat_map(|j| {
            self.mult[j][i]
                .iter()
                .map(move |(k, c)| (*k, j, c.clone()))
                .collect::<Vec<_>>()
        });
        SparseMatrix::from_accumulated(self.dim(), self.dim(), triplets, &self.field)
    }

    pub fn diff_map(&self) -> GradedLinearMap {
        let triplets = (0..self.dim()).flat_map(|j| {
            self.diff[j]
                .iter()
                .map(move |(k, c)| (*k, j, c.clone()))
                .collect::<Vec<_>>()
        });
        let matrix = SparseMatrix::from_accumulated(self.dim(), self.dim(), triplets, &self.field);
        GradedLinearMap { degree: 1, matrix }
    }

    /// Checks every graded-algebra axiom on all basis tuples and returns
    /// the violations found (empty list = valid DGA).
    pub fn validate(&self) -> ValidationReport {
        let f = &self.field;
        let dim = self.dim();
        let mut violations = Vec::new();

        // Multiplication respects degrees.
        for i in 0..dim {
            for j in 0..dim {
                for (k, c) in &self.mult[i][j] {
                    if !f.is_zero(c) && self.degree(*k) != self.degree(i) + self.degree(j) {
                        violations.push(Violation {
                            identity: "product not degree-additive".into(),
                            witness: format!(
                                "{}·{} hits {} of degree {}",
                                self.name(i),
                                self.name(j),
                                self.name(*k),
                                self.degree(*k)
                            ),
                        });
                    }
                }
            }
        }

        // Differential has degree +1.
        for i in 0..dim {
            for (k, c) in &self.diff[i] {
                if !f.is_zero(c) && self.degree(*k) != self.degree(i) + 1 {
                    violations.push(Violation {
                        identity: "differential not degree +1".into(),
                        witness: format!(
                            "d({}) hits {} of degree {}",
                            self.name(i),
                            self.name(*k),
                            self.degree(*k)
                        ),
                    });
                }
            }
        }

        // Unit has degree 0, acts as identity on both sides, and is closed.
        if self.degree(self.unit) != 0 {
            violations.push(Violation {
                identity: "unit not in degree 0".into(),
                witness: self.name(self.unit),
            });
        }
        for i in 0..dim {
            let left = self.mul_vec(&self.unit_vec(), &self.basis_vec(i));
            let right = self.mul_vec(&self.basis_vec(i), &self.unit_vec());
            if left != self.basis_vec(i) {
                violations.push(Violation {
                    identity: "left unit law fails".into(),
                    witness: self.name(i),
                });
            }
            if right != self.basis_vec(i) {
                violations.push(Violation {
                    identity: "right unit law fails".into(),
                    witness: self.name(i),
                });
            }
        }
        if self.diff_vec(&self.unit_vec()).iter().any(|x| !f.is_zero(x)) {
            violations.push(Violation {
                identity: "d(1) nonzero".into(),
                witness: self.name(self.unit),
            });
        }

        // d² = 0.
        for i in 0..dim {
            let dd = self.diff_vec(&self.diff_vec(&self.basis_vec(i)));
            if dd.iter().any(|x| !f.is_zero(x)) {
                violations.push(Violation {
                    identity: "d² nonzero".into(),
                    witness: self.name(i),
                });
            }
        }

        // Leibniz rule on all basis pairs.
        for i in 0..dim {
            for j in 0..dim {
                let lhs = self.diff_vec(&self.mul_vec(&self.basis_vec(i), &self.basis_vec(j)));
                let mut rhs = self.mul_vec(&self.diff_vec(&self.basis_vec(i)), &self.basis_vec(j));
                let sign = if self.degree(i).rem_euclid(2) == 1 {
                    f.neg(&f.one())
                } else {
                    f.one()
                };
                let second = self.mul_vec(&self.basis_vec(i), &self.diff_vec(&self.basis_vec(j)));
                for (r, s) in rhs.iter_mut().zip(second.iter()) {
                    *r = f.add(r, &f.mul(&sign, s));
                }
                if lhs != rhs {
                    violations.push(Violation {
                        identity: "Leibniz rule fails".into(),
                        witness: format!("({}, {})", self.name(i), self.name(j)),
                    });
                }
            }
        }

        // Associativity on all basis triples.
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    let ab_c = self.mul_vec(
                        &self.mul_vec(&self.basis_vec(i), &self.basis_vec(j)),
                        &self.basis_vec(k),
                    );
                    let a_bc = self.mul_vec(
                        &self.basis_vec(i),
                        &self.mul_vec(&self.basis_vec(j), &self.basis_vec(k)),
                    );
                    if ab_c != a_bc {
                        violations.push(Violation {
                            identity: "associativity fails".into(),
                            witness: format!(
                                "({}, {}, {})",
                                self.name(i),
                                self.name(j),
                                self.name(k)
                            ),
                        });
                    }
                }
            }
        }

        ValidationReport { violations }
    }

    /// Exact cohomology dimensions of the underlying complex (A, d).
    pub fn cohomology_dims(&self) -> Result<BTreeMap<i64, usize>, CoreError> {
        let d = self.diff_map();
        let mut out = BTreeMap::new();
        let degrees: std::collections::BTreeSet<i64> =
            self.space.degrees().iter().copied().collect();
        for m in degrees {
            let din = d.block(&self.space, &self.space, m - 1, &self.field);
            let dout = d.block(&self.space, &self.space, m, &self.field);
            let h = homology_at(&din, &dout, &self.field)?;
            if h > 0 {
                out.insert(m, h);
            }
        }
        Ok(out)
    }

    /// The opposite algebra, with Koszul signs: `a ·op b = (-1)^{|a||b|} b·a`.
    pub fn opposite(&self) -> DGAlgebra {
        let f = &self.field;
        let dim = self.dim();
        let mut mult = vec![vec![Vec::new(); dim]; dim];
        for i in 0..dim {
            for j in 0..dim {
                let mut combo = self.mult[j][i].clone();
                if (self.degree(i) * self.degree(j)).rem_euclid(2) == 1 {
                    for (_, c) in combo.iter_mut() {
                        *c = f.neg(c);
                    }
                }
                mult[i][j] = combo;
            }
        }
        DGAlgebra {
            field: self.field,
            space: self.space.clone(),
            unit: self.unit,
            mult,
            diff: self.diff.clone(),
        }
    }

    /// Rewrites the algebra in a new basis. `new_in_old` has the new basis
    /// vectors as columns (in old coordinates); degrees must be preserved.
    pub fn change_of_basis(
        &self,
        new_in_old: &SparseMatrix,
        new_names: Vec<String>,
        new_degrees: Vec<i64>,
        unit_name: &str,
    ) -> Result<DGAlgebra, CoreError> {
        let f = &self.field;
        let dim = self.dim();
        assert_eq!(new_in_old.rows(), dim);
        assert_eq!(new_in_old.cols(), dim);
        // old coordinates -> new coordinates
        let cols: Vec<Vec<Scalar>> = (0..dim)
            .map(|i| {
                let mut e = vec![f.zero(); dim];
                e[i] = f.one();
                e
            })
            .collect();
        let to_new = {
            let sols = new_in_old.solve_columns(&cols, f);
            if sols.iter().any(|s| s.is_none()) {
                return Err(CoreError::precondition(
                    "change of basis matrix is singular".to_string(),
                ));
            }
            sols.into_iter().map(|s| s.unwrap()).collect::<Vec<_>>()
        };
        let express = |v: &[Scalar]| -> Combination {
            let mut out = vec![f.zero(); dim];
            for (j, c) in v.iter().enumerate() {
                if f.is_zero(c) {
                    continue;
                }
                for (k, t) in to_new[j].iter().enumerate() {
                    out[k] = f.add(&out[k], &f.mul(c, t));
                }
            }
            out.into_iter()
                .enumerate()
                .filter(|(_, c)| !f.is_zero(c))
                .map(|(k, c)| (k, c))
                .collect()
        };
        let new_vec = |i: usize| -> Vec<Scalar> {
            (0..dim).map(|r| new_in_old.get(r, i, f)).collect()
        };
        let mut mult_entries = Vec::new();
        for i in 0..dim {
            for j in 0..dim {
                let prod = self.mul_vec(&new_vec(i), &new_vec(j));
                mult_entries.push(((i, j), express(&prod)));
            }
        }
        let mut diff_entries = Vec::new();
        for i in 0..dim {
            diff_entries.push((i, express(&self.diff_vec(&new_vec(i)))));
        }
        DGAlgebra::new(
            self.field,
            new_names.into_iter().zip(new_degrees).collect(),
            unit_name,
            mult_entries,
            diff_entries,
        )
    }

    /// Direct sum of algebras. The unit of the sum is `1_a + 1_b`, so the
    /// basis is adjusted to contain it as an element (the second unit
    /// survives as a separate idempotent).
    pub fn direct_sum(&self, other: &DGAlgebra, prefix: (&str, &str)) -> Result<DGAlgebra, CoreError> {
        assert_eq!(self.field, other.field);
        let f = &self.field;
        let da = self.dim();
        let dim = da + other.dim();
        let name_of = |k: usize| -> String {
            if k < da {
                format!("{}{}", prefix.0, self.name(k))
            } else {
                format!("{}{}", prefix.1, other.name(k - da))
            }
        };
        let deg_of = |k: usize| -> i64 {
            if k < da {
                self.degree(k)
            } else {
                other.degree(k - da)
            }
        };
        let combo_of = |k: usize, l: usize| -> Combination {
            if k < da && l < da {
                self.mult[k][l].clone()
            } else if k >= da && l >= da {
                other.mult[k - da][l - da]
                    .iter()
                    .map(|(m, c)| (m + da, c.clone()))
                    .collect()
            } else {
                Vec::new()
            }
        };
        let mut mult_entries = Vec::new();
        for k in 0..dim {
            for l in 0..dim {
                mult_entries.push(((k, l), combo_of(k, l)));
            }
        }
        let mut diff_entries = Vec::new();
        for k in 0..dim {
            let combo = if k < da {
                self.diff[k].clone()
            } else {
                other.diff[k - da]
                    .iter()
                    .map(|(m, c)| (m + da, c.clone()))
                    .collect()
            };
            diff_entries.push((k, combo));
        }
        let block = DGAlgebra::new(
            self.field,
            (0..dim).map(|k| (name_of(k), deg_of(k))).collect(),
            &name_of(self.unit),
            mult_entries,
            diff_entries,
        )?;
        // Swap 1_a for 1_a + 1_b in the basis.
        let mut cob = SparseMatrix::identity(dim, f);
        let one = f.one();
        cob = {
            let mut triplets: Vec<(usize, usize, Scalar)> =
                cob.triplets().map(|(r, c, v)| (r, c, v.clone())).collect();
            triplets.push((da + other.unit, self.unit, one));
            SparseMatrix::from_accumulated(dim, dim, triplets, f)
        };
        let names: Vec<String> = (0..dim)
            .map(|k| if k == self.unit { "1".to_string() } else { name_of(k) })
            .collect();
        let degrees: Vec<i64> = (0..dim).map(deg_of).collect();
        block.change_of_basis(&cob, names, degrees, "1")
    }
}

fn normalize(combo: Combination, field: &FieldSpec) -> Combination {
    let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
    for (k, c) in combo {
        let slot = acc.entry(k).or_insert_with(|| field.zero());
        *slot = field.add(slot, &c);
    }
    acc.into_iter()
        .filter(|(_, c)| !field.is_zero(c))
        .collect()
}

/// A finite-dimensional DG module over a fixed algebra, by structure
/// constants for the action of each algebra basis element.
#[derive(Clone, Debug)]
pub struct DGModule {
    space: GradedVectorSpace,
    /// `action[i][j]`: algebra basis `i` applied to module basis `j`.
    action: Vec<Vec<Combination>>,
    diff: Vec<Combination>,
}

impl DGModule {
    pub fn new(
        algebra: &DGAlgebra,
        basis: Vec<(String, i64)>,
        action_entries: Vec<((usize, usize), Combination)>,
        diff_entries: Vec<(usize, Combination)>,
    ) -> Result<DGModule, CoreError> {
        let dim = basis.len();
        let names = basis.iter().map(|(n, _)| n.clone()).collect();
        let degrees = basis.iter().map(|(_, d)| *d).collect();
        let space = GradedVectorSpace::new(degrees, Some(names))?;
        let mut action = vec![vec![Vec::new(); dim]; algebra.dim()];
        for ((i, j), combo) in action_entries {
            if i >= algebra.dim() || j >= dim || combo.iter().any(|(k, _)| *k >= dim) {
                return Err(CoreError::precondition("action entry out of range".to_string()));
            }
            action[i][j] = normalize(combo, &algebra.field);
        }
        let mut diff = vec![Vec::new(); dim];
        for (i, combo) in diff_entries {
            if i >= dim || combo.iter().any(|(k, _)| *k >= dim) {
                return Err(CoreError::precondition("differential entry out of range".to_string()));
            }
            diff[i] = normalize(combo, &algebra.field);
        }
        Ok(DGModule {
            space,
            action,
            diff,
        })
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn space(&self) -> &GradedVectorSpace {
        &self.space
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.space.degree(i)
    }

    pub fn basis_action(&self, alg_i: usize, mod_j: usize) -> &Combination {
        &self.action[alg_i][mod_j]
    }

    pub fn basis_diff_combo(&self, i: usize) -> &Combination {
        &self.diff[i]
    }

    pub fn act(&self, algebra: &DGAlgebra, a: &[Scalar], m: &[Scalar]) -> Vec<Scalar> {
        let f = &algebra.field;
        let mut out = vec![f.zero(); self.dim()];
        for (i, ai) in a.iter().enumerate() {
            if f.is_zero(ai) {
                continue;
            }
            for (j, mj) in m.iter().enumerate() {
                if f.is_zero(mj) {
                    continue;
                }
                let c = f.mul(ai, mj);
                for (k, coeff) in &self.action[i][j] {
                    out[*k] = f.add(&out[*k], &f.mul(&c, coeff));
                }
            }
        }
        out
    }

    pub fn diff_vec(&self, algebra: &DGAlgebra, m: &[Scalar]) -> Vec<Scalar> {
        let f = &algebra.field;
        let mut out = vec![f.zero(); self.dim()];
        for (i, mi) in m.iter().enumerate() {
            if f.is_zero(mi) {
                continue;
            }
            for (k, coeff) in &self.diff[i] {
                out[*k] = f.add(&out[*k], &f.mul(mi, coeff));
            }
        }
        out
    }

    pub fn basis_vec(&self, i: usize, field: &FieldSpec) -> Vec<Scalar> {
        let mut v = vec![field.zero(); self.dim()];
        v[i] = field.one();
        v
    }

    pub fn diff_map(&self, field: &FieldSpec) -> GradedLinearMap {
        let triplets = (0..self.dim()).flat_map(|j| {
            self.diff[j]
                .iter()
                .map(move |(k, c)| (*k, j, c.clone()))
                .collect::<Vec<_>>()
        });
        let matrix = SparseMatrix::from_accumulated(self.dim(), self.dim(), triplets, field);
        GradedLinearMap { degree: 1, matrix }
    }

    /// Checks the DG-module axioms over the given algebra.
    pub fn validate(&self, algebra: &DGAlgebra) -> ValidationReport {
        let f = &algebra.field;
        let mut violations = Vec::new();

        for i in 0..algebra.dim() {
            for j in 0..self.dim() {
                for (k, c) in &self.action[i][j] {
                    if !f.is_zero(c) && self.degree(*k) != algebra.degree(i) + self.degree(j) {
                        violations.push(Violation {
                            identity: "action not degree-additive".into(),
                            witness: format!("{}·{}", algebra.name(i), self.space.name(j)),
                        });
                    }
                }
            }
        }

        for j in 0..self.dim() {
            let m = self.basis_vec(j, f);
            if self.act(algebra, &algebra.unit_vec(), &m) != m {
                violations.push(Violation {
                    identity: "unit does not act as identity".into(),
                    witness: self.space.name(j),
                });
            }
            let dd = self.diff_vec(algebra, &self.diff_vec(algebra, &m));
            if dd.iter().any(|x| !f.is_zero(x)) {
                violations.push(Violation {
                    identity: "d² nonzero on module".into(),
                    witness: self.space.name(j),
                });
            }
        }

        for i in 0..algebra.dim() {
            for j in 0..algebra.dim() {
                for k in 0..self.dim() {
                    let m = self.basis_vec(k, f);
                    let ab_m = self.act(
                        algebra,
                        &algebra.mul_vec(&algebra.basis_vec(i), &algebra.basis_vec(j)),
                        &m,
                    );
                    let a_bm = self.act(
                        algebra,
                        &algebra.basis_vec(i),
                        &self.act(algebra, &algebra.basis_vec(j), &m),
                    );
                    if ab_m != a_bm {
                        violations.push(Violation {
                            identity: "action not associative".into(),
                            witness: format!(
                                "({}, {}, {})",
                                algebra.name(i),
                                algebra.name(j),
                                self.space.name(k)
                            ),
                        });
                    }
                }
            }
        }

        for i in 0..algebra.dim() {
            for j in 0..self.dim() {
                let m = self.basis_vec(j, f);
                let a = algebra.basis_vec(i);
                let lhs = self.diff_vec(algebra, &self.act(algebra, &a, &m));
                let mut rhs = self.act(algebra, &algebra.diff_vec(&a), &m);
                let sign = if algebra.degree(i).rem_euclid(2) == 1 {
                    f.neg(&f.one())
                } else {
                    f.one()
                };
                let second = self.act(algebra, &a, &self.diff_vec(algebra, &m));
                for (r, s) in rhs.iter_mut().zip(second.iter()) {
                    *r = f.add(r, &f.mul(&sign, s));
                }
                if lhs != rhs {
                    violations.push(Violation {
                        identity: "module Leibniz rule fails".into(),
                        witness: format!("({}, {})", algebra.name(i), self.space.name(j)),
                    });
                }
            }
        }

        ValidationReport { violations }
    }

    /// A as a left module over itself.
    pub fn free(algebra: &DGAlgebra) -> DGModule {
        let basis = (0..algebra.dim())
            .map(|i| (algebra.name(i), algebra.degree(i)))
            .collect();
        let mut action_entries = Vec::new();
        for i in 0..algebra.dim() {
            for j in 0..algebra.dim() {
                action_entries.push(((i, j), algebra.basis_product(i, j).clone()));
            }
        }
        let diff_entries = (0..algebra.dim())
            .map(|i| (i, algebra.basis_diff(i).clone()))
            .collect();
        DGModule::new(algebra, basis, action_entries, diff_entries)
            .expect("free module construction is well-formed")
    }

    /// Exact cohomology dimensions of the underlying complex (M, d).
    pub fn cohomology_dims(
        &self,
        algebra: &DGAlgebra,
    ) -> Result<BTreeMap<i64, usize>, CoreError> {
        let f = &algebra.field;
        let d = self.diff_map(f);
        let mut out = BTreeMap::new();
        let degrees: std::collections::BTreeSet<i64> =
            self.space.degrees().iter().copied().collect();
        for m in degrees {
            let din = d.block(&self.space, &self.space, m - 1, f);
            let dout = d.block(&self.space, &self.space, m, f);
            let h = homology_at(&din, &dout, f)?;
            if h > 0 {
                out.insert(m, h);
            }
        }
        Ok(out)
    }

    /// The shifted module Σᵏ M (generator degrees drop by k). The action
    /// picks up the Koszul sign `(-1)^{k·|a|}` of moving `a` past `Σᵏ`,
    /// and the differential is conjugated by the shift.
    pub fn shifted(&self, algebra: &DGAlgebra, k: i64) -> DGModule {
        let f = &algebra.field;
        let dim = self.dim();
        let basis: Vec<(String, i64)> = (0..dim)
            .map(|i| (format!("s{k}({})", self.space.name(i)), self.degree(i) - k))
            .collect();
        let mut action_entries = Vec::new();
        for i in 0..algebra.dim() {
            let sign_flip = (k * algebra.degree(i)).rem_euclid(2) == 1;
            for j in 0..dim {
                let mut combo = self.action[i][j].clone();
                if sign_flip {
                    for (_, c) in combo.iter_mut() {
                        *c = f.neg(c);
                    }
                }
                action_entries.push(((i, j), combo));
            }
        }
        // d_{ΣM} = (-1)^k · (Σ ∘ d ∘ Σ⁻¹) with our convention d_Σ = -s d s⁻¹.
        let mut diff_entries = Vec::new();
        for i in 0..dim {
            let mut combo = self.diff[i].clone();
            if k.rem_euclid(2) == 1 {
                for (_, c) in combo.iter_mut() {
                    *c = f.neg(c);
                }
            }
            diff_entries.push((i, combo));
        }
        DGModule::new(algebra, basis, action_entries, diff_entries)
            .expect("shift preserves well-formedness")
    }

    /// Mapping cone of a degree-0 chain map of modules `f: M -> N`:
    /// underlying space `N ⊕ ΣM`.
    pub fn cone(
        algebra: &DGAlgebra,
        source: &DGModule,
        target: &DGModule,
        map: &SparseMatrix,
    ) -> Result<DGModule, CoreError> {
        let f = &algebra.field;
        let dn = target.dim();
        let dm = source.dim();
        assert_eq!(map.rows(), dn);
        assert_eq!(map.cols(), dm);
        let shifted = source.shifted(algebra, 1);
        let mut basis: Vec<(String, i64)> = (0..dn)
            .map(|i| (format!("n:{}", target.space.name(i)), target.degree(i)))
            .collect();
        basis.extend((0..dm).map(|i| (format!("m:{}", shifted.space.name(i)), shifted.degree(i))));

        let mut action_entries = Vec::new();
        for i in 0..algebra.dim() {
            for j in 0..dn {
                action_entries.push(((i, j), target.action[i][j].clone()));
            }
            for j in 0..dm {
                let combo: Combination = shifted.action[i][j]
                    .iter()
                    .map(|(k, c)| (k + dn, c.clone()))
                    .collect();
                action_entries.push(((i, j + dn), combo));
            }
        }
        // d(n, s m) = (d_N n + f(m), d_{ΣM} s m): the connecting component
        // applies f after un-shifting.
        let mut diff_entries = Vec::new();
        for j in 0..dn {
            diff_entries.push((j, target.diff[j].clone()));
        }
        for j in 0..dm {
            let mut combo: Combination = shifted.diff[j]
                .iter()
                .map(|(k, c)| (k + dn, c.clone()))
                .collect();
            for r in 0..dn {
                let v = map.get(r, j, f);
                if !f.is_zero(&v) {
                    combo.push((r, v));
                }
            }
            diff_entries.push((j + dn, normalize(combo, f)));
        }
        let cone = DGModule::new(algebra, basis, action_entries, diff_entries)?;
        let report = cone.validate(algebra);
        if !report.ok() {
            return Err(CoreError::precondition(format!(
                "cone input is not a chain map of modules: {:?}",
                report.violations.first()
            )));
        }
        Ok(cone)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalogue;

    #[test]
    fn dual_numbers_deg1_is_valid() {
        let a = catalogue::dual_numbers(FieldSpec::Rationals, 1);
        assert!(a.validate().ok());
    }

    #[test]
    fn contractible_algebra_is_valid() {
        let a = catalogue::contractible(FieldSpec::Rationals);
        assert!(a.validate().ok());
    }

    #[test]
    fn degree_violation_is_reported() {
        // d(x) = x is not a degree +1 differential.
        let f = FieldSpec::Rationals;
        let a = DGAlgebra::new(
            f,
            vec![("1".into(), 0), ("x".into(), 1)],
            "1",
            vec![
                ((0, 0), vec![(0, f.one())]),
                ((0, 1), vec![(1, f.one())]),
                ((1, 0), vec![(1, f.one())]),
            ],
            vec![(1, vec![(1, f.one())])],
        )
        .unwrap();
        let report = a.validate();
        assert!(report
            .violations
            .iter()
            .any(|v| v.identity.contains("degree +1")));
    }

    #[test]
    fn cohomology_of_catalogue_algebras() {
        let a = catalogue::dual_numbers(FieldSpec::Rationals, 1);
        let h = a.cohomology_dims().unwrap();
        assert_eq!(h, [(0, 1), (1, 1)].into_iter().collect());

        let c = catalogue::contractible(FieldSpec::Rationals);
        assert!(c.cohomology_dims().unwrap().is_empty());

        let kk = catalogue::k_times_k(FieldSpec::Rationals);
        assert_eq!(kk.cohomology_dims().unwrap(), [(0, 2)].into_iter().collect());
    }

    #[test]
    fn validation_agrees_with_opposite() {
        for a in catalogue::all_small(FieldSpec::Rationals) {
            assert_eq!(a.validate().ok(), a.opposite().validate().ok(), "{}", a.name(0));
        }
        // A broken algebra stays broken in the opposite.
        let f = FieldSpec::Rationals;
        let broken = DGAlgebra::new(
            f,
            vec![("1".into(), 0), ("x".into(), 1)],
            "1",
            vec![
                ((0, 0), vec![(0, f.one())]),
                ((0, 1), vec![(1, f.one())]),
                ((1, 0), vec![(1, f.one())]),
                ((1, 1), vec![(0, f.one())]), // x² = 1 violates degrees
            ],
            vec![],
        )
        .unwrap();
        assert!(!broken.validate().ok());
        assert!(!broken.opposite().validate().ok());
    }

    #[test]
    fn cone_of_identity_is_acyclic() {
        for a in catalogue::all_small(FieldSpec::Rationals) {
            let m = DGModule::free(&a);
            let id = SparseMatrix::identity(m.dim(), &a.field);
            let cone = DGModule::cone(&a, &m, &m, &id).unwrap();
            assert!(cone.validate(&a).ok());
            assert!(cone.cohomology_dims(&a).unwrap().is_empty());
        }
    }

    #[test]
    fn direct_sum_is_valid_and_unital() {
        let f = FieldSpec::Rationals;
        let a = catalogue::dual_numbers(f, 0);
        let b = catalogue::k_times_k(f);
        let s = a.direct_sum(&b, ("a.", "b.")).unwrap();
        assert_eq!(s.dim(), 4);
        assert!(s.validate().ok(), "{:?}", s.validate().violations);
    }
}
