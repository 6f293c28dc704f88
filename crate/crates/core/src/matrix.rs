//! Sparse matrices over an exact field, with rank, kernel and solving.
//!
//! Matrices act on column vectors: an `r x c` matrix is a linear map from a
//! `c`-dimensional space to an `r`-dimensional one. Elimination uses
//! deterministic pivoting (columns left to right, smallest remaining row
//! index among admissible pivots) so every basis and rank computation is
//! reproducible across runs.

use crate::error::CoreError;
use crate::field::{FieldSpec, Scalar};

/// Sparse matrix stored row-major; each row holds sorted `(col, value)`
/// pairs with nonzero values only.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<(usize, Scalar)>>,
}

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            data: vec![Vec::new(); rows],
        }
    }

    pub fn identity(n: usize, field: &FieldSpec) -> Self {
        let mut m = SparseMatrix::zero(n, n);
        for i in 0..n {
            m.data[i].push((i, field.one()));
        }
        m
    }

    /// Builds a matrix from `(row, col, value)` triplets.
    ///
    /// Duplicate positions are rejected, explicit zeros are dropped, and
    /// out-of-range indices are an error.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: Vec<(usize, usize, Scalar)>,
        field: &FieldSpec,
    ) -> Result<Self, CoreError> {
        let mut m = SparseMatrix::zero(rows, cols);
        for (r, c, v) in triplets {
            if r >= rows || c >= cols {
                return Err(CoreError::precondition(format!(
                    "matrix entry ({r}, {c}) out of range for {rows}x{cols}"
                )));
            }
            if field.is_zero(&v) {
                continue;
            }
            m.data[r].push((c, v));
        }
        for (r, row) in m.data.iter_mut().enumerate() {
            row.sort_by_key(|(c, _)| *c);
            for w in row.windows(2) {
                if w[0].0 == w[1].0 {
                    return Err(CoreError::precondition(format!(
                        "duplicate matrix entry at ({r}, {})",
                        w[0].0
                    )));
                }
            }
        }
        Ok(m)
    }

    /// Accumulating builder: repeated positions are summed, zeros dropped.
    pub fn from_accumulated(
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, Scalar)>,
        field: &FieldSpec,
    ) -> Self {
        let mut acc: Vec<std::collections::BTreeMap<usize, Scalar>> = vec![Default::default(); rows];
        for (r, c, v) in triplets {
            assert!(r < rows && c < cols, "entry ({r},{c}) out of {rows}x{cols}");
            let slot = acc[r].entry(c).or_insert_with(|| field.zero());
            *slot = field.add(slot, &v);
        }
        let data = acc
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .filter(|(_, v)| !field.is_zero(v))
                    .collect::<Vec<_>>()
            })
            .collect();
        SparseMatrix { rows, cols, data }
    }

    pub fn from_dense(rows: &[Vec<i64>], field: &FieldSpec) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        SparseMatrix::from_accumulated(
            r,
            c,
            rows.iter().enumerate().flat_map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(move |(j, &v)| (i, j, v))
                    .collect::<Vec<_>>()
            })
            .map(|(i, j, v)| (i, j, field.from_i64(v))),
            field,
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.is_empty())
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.len()).sum()
    }

    pub fn get(&self, r: usize, c: usize, field: &FieldSpec) -> Scalar {
        match self.data[r].binary_search_by_key(&c, |(j, _)| *j) {
            Ok(k) => self.data[r][k].1.clone(),
            Err(_) => field.zero(),
        }
    }

    pub fn row_entries(&self, r: usize) -> &[(usize, Scalar)] {
        &self.data[r]
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, *c, v)))
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut data = vec![Vec::new(); self.cols];
        for (r, row) in self.data.iter().enumerate() {
            for (c, v) in row {
                data[*c].push((r, v.clone()));
            }
        }
        SparseMatrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn add(&self, other: &SparseMatrix, field: &FieldSpec) -> SparseMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut data = Vec::with_capacity(self.rows);
        for (a, b) in self.data.iter().zip(&other.data) {
            data.push(merge_rows(a, b, &field.one(), field));
        }
        SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, s: &Scalar, field: &FieldSpec) -> SparseMatrix {
        if field.is_zero(s) {
            return SparseMatrix::zero(self.rows, self.cols);
        }
        let data = self
            .data
            .iter()
            .map(|row| row.iter().map(|(c, v)| (*c, field.mul(v, s))).collect())
            .collect();
        SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, other: &SparseMatrix, field: &FieldSpec) -> SparseMatrix {
        self.add(&other.scale(&field.neg(&field.one()), field), field)
    }

    pub fn mul(&self, other: &SparseMatrix, field: &FieldSpec) -> SparseMatrix {
        assert_eq!(
            self.cols, other.rows,
            "dimension mismatch in matrix product"
        );
        let mut data = Vec::with_capacity(self.rows);
        for row in &self.data {
            let mut acc: Vec<(usize, Scalar)> = Vec::new();
            for (k, v) in row {
                acc = merge_rows(&acc, &other.data[*k], v, field);
            }
            data.push(acc);
        }
        SparseMatrix {
            rows: self.rows,
            cols: other.cols,
            data,
        }
    }

    /// Applies the matrix to a dense column vector.
    pub fn apply(&self, v: &[Scalar], field: &FieldSpec) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols);
        self.data
            .iter()
            .map(|row| {
                let mut acc = field.zero();
                for (c, a) in row {
                    if !field.is_zero(&v[*c]) {
                        acc = field.add(&acc, &field.mul(a, &v[*c]));
                    }
                }
                acc
            })
            .collect()
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        SparseMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Places `other` to the right of `self`.
    pub fn hstack(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.rows, other.rows);
        let mut data = Vec::with_capacity(self.rows);
        for (a, b) in self.data.iter().zip(&other.data) {
            let mut row = a.clone();
            row.extend(b.iter().map(|(c, v)| (c + self.cols, v.clone())));
            data.push(row);
        }
        SparseMatrix {
            rows: self.rows,
            cols: self.cols + other.cols,
            data,
        }
    }

    pub fn rank(&self, field: &FieldSpec) -> usize {
        Echelon::reduce(self, field).pivots.len()
    }

    /// Basis of the null space, as column vectors of length `cols`.
    ///
    /// The count always equals `cols - rank`, and every vector is checked
    /// against the matrix before being returned.
    pub fn kernel_basis(&self, field: &FieldSpec) -> Vec<Vec<Scalar>> {
        let ech = Echelon::reduce(self, field);
        let basis = ech.kernel_basis_full(self.cols, field);
        for v in &basis {
            let image = self.apply(v, field);
            if image.iter().any(|x| !field.is_zero(x)) {
                panic!("internal invariant violated: kernel vector not annihilated");
            }
        }
        basis
    }

    /// Solves `self * x = rhs` for each dense column in `rhs`, with free
    /// variables set to zero. Returns `None` for inconsistent columns.
    pub fn solve_columns(
        &self,
        rhs: &[Vec<Scalar>],
        field: &FieldSpec,
    ) -> Vec<Option<Vec<Scalar>>> {
        let k = rhs.len();
        let mut aug = self.clone();
        for (j, col) in rhs.iter().enumerate() {
            assert_eq!(col.len(), self.rows, "rhs length mismatch");
            for (r, v) in col.iter().enumerate() {
                if !field.is_zero(v) {
                    aug.data[r].push((self.cols + j, v.clone()));
                }
            }
        }
        aug.cols += k;
        for row in aug.data.iter_mut() {
            row.sort_by_key(|(c, _)| *c);
        }
        let ech = Echelon::reduce_up_to(&aug, field, self.cols);
        (0..k)
            .map(|j| ech.read_solution(self.cols, self.cols + j, field))
            .collect()
    }

    /// Row-reduced echelon form of the row space; canonical for span
    /// comparisons and deterministic complement choices.
    pub fn row_space_rref(&self, field: &FieldSpec) -> Vec<Vec<(usize, Scalar)>> {
        Echelon::reduce(self, field).rows
    }
}

/// Middle homology dimension of `prev --d_in--> mid --d_out--> next`.
///
/// Fails with [`CoreError::NotAComplex`] (reporting one offending entry)
/// when the composite is nonzero.
pub fn homology_at(
    d_in: &SparseMatrix,
    d_out: &SparseMatrix,
    field: &FieldSpec,
) -> Result<usize, CoreError> {
    assert_eq!(
        d_out.cols(),
        d_in.rows(),
        "differentials do not share the middle space"
    );
    let composite = d_out.mul(d_in, field);
    if let Some((r, c, _)) = composite.triplets().next() {
        return Err(CoreError::NotAComplex { row: r, col: c });
    }
    let kernel = d_out.cols() - d_out.rank(field);
    Ok(kernel - d_in.rank(field))
}

fn merge_rows(
    a: &[(usize, Scalar)],
    b: &[(usize, Scalar)],
    b_scale: &Scalar,
    field: &FieldSpec,
) -> Vec<(usize, Scalar)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some((ca, va)), Some((cb, vb))) if ca == cb => {
                let v = field.add(va, &field.mul(vb, b_scale));
                if !field.is_zero(&v) {
                    out.push((*ca, v));
                }
                i += 1;
                j += 1;
            }
            (Some((ca, va)), Some((cb, _))) if ca < cb => {
                out.push((*ca, va.clone()));
                i += 1;
            }
            (Some(_), Some((cb, vb))) => {
                let v = field.mul(vb, b_scale);
                if !field.is_zero(&v) {
                    out.push((*cb, v));
                }
                j += 1;
            }
            (Some((ca, va)), None) => {
                out.push((*ca, va.clone()));
                i += 1;
            }
            (None, Some((cb, vb))) => {
                let v = field.mul(vb, b_scale);
                if !field.is_zero(&v) {
                    out.push((*cb, v));
                }
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

/// Row-reduced echelon data. Pivot rows are normalized to a leading 1 and
/// fully reduced above and below; pivot columns strictly increase.
struct Echelon {
    rows: Vec<Vec<(usize, Scalar)>>,
    pivots: Vec<usize>,
}

impl Echelon {
    fn reduce(m: &SparseMatrix, field: &FieldSpec) -> Echelon {
        Echelon::reduce_up_to(m, field, m.cols)
    }

    /// Eliminates choosing pivots only among the first `pivot_limit`
    /// columns; later columns ride along (used for augmented systems).
    fn reduce_up_to(m: &SparseMatrix, field: &FieldSpec, pivot_limit: usize) -> Echelon {
        type Bucket = std::collections::VecDeque<Vec<(usize, Scalar)>>;
        // Rows bucketed by leading column; columns are processed in
        // ascending order and within a column the earliest surviving row
        // becomes the pivot. Insertion order keeps this deterministic.
        let mut buckets: std::collections::BTreeMap<usize, Bucket> = Default::default();
        for row in m.data.iter().filter(|r| !r.is_empty()) {
            buckets.entry(row[0].0).or_default().push_back(row.clone());
        }

        let mut done: Vec<Vec<(usize, Scalar)>> = Vec::new();
        let mut pivots: Vec<usize> = Vec::new();
        while let Some((&col, _)) = buckets.iter().next() {
            let mut queue = buckets.remove(&col).unwrap();
            if col >= pivot_limit {
                // No pivoting past the limit; these rows are inconsistency
                // witnesses for augmented solves.
                done.extend(queue.drain(..));
                continue;
            }
            let mut pivot = queue.pop_front().unwrap();
            let lead = pivot[0].1.clone();
            if !field.is_one(&lead) {
                let inv = field.inv(&lead).expect("nonzero leading entry");
                for (_, v) in pivot.iter_mut() {
                    *v = field.mul(v, &inv);
                }
            }
            while let Some(row) = queue.pop_front() {
                let factor = field.neg(&row[0].1);
                let reduced = merge_rows(&row, &pivot, &factor, field);
                if let Some((c, _)) = reduced.first() {
                    buckets.entry(*c).or_default().push_back(reduced);
                }
            }
            pivots.push(col);
            done.push(pivot);
        }

        // Back-substitution above each pivot gives a canonical RREF; pivot
        // rows come first in `done` because non-pivot rows lead beyond
        // `pivot_limit`.
        done.sort_by_key(|r| r[0].0);
        for idx in (0..pivots.len()).rev() {
            let (col, pivot_row) = (done[idx][0].0, done[idx].clone());
            for upper in 0..idx {
                if let Ok(k) = done[upper].binary_search_by_key(&col, |(c, _)| *c) {
                    let factor = field.neg(&done[upper][k].1);
                    done[upper] = merge_rows(&done[upper], &pivot_row, &factor, field);
                }
            }
        }

        Echelon { rows: done, pivots }
    }

    fn read_solution(
        &self,
        unknowns: usize,
        rhs_col: usize,
        field: &FieldSpec,
    ) -> Option<Vec<Scalar>> {
        let mut x = vec![field.zero(); unknowns];
        for row in &self.rows {
            let (lead, _) = row[0];
            if lead >= unknowns {
                // Pure-rhs row: inconsistent if it touches this rhs column.
                if row.binary_search_by_key(&rhs_col, |(c, _)| *c).is_ok() {
                    return None;
                }
                continue;
            }
            if let Ok(k) = row.binary_search_by_key(&rhs_col, |(c, _)| *c) {
                x[lead] = row[k].1.clone();
            }
        }
        Some(x)
    }
}

impl Echelon {
    /// Kernel basis computed from the RREF: one vector per free column.
    fn kernel_basis_full(&self, cols: usize, field: &FieldSpec) -> Vec<Vec<Scalar>> {
        let pivot_set: std::collections::BTreeSet<usize> = self.pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for free in 0..cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![field.zero(); cols];
            v[free] = field.one();
            for row in &self.rows {
                let (lead, _) = row[0];
                if let Ok(k) = row.binary_search_by_key(&free, |(c, _)| *c) {
                    v[lead] = field.neg(&row[k].1);
                }
            }
            basis.push(v);
        }
        basis
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    #[test]
    fn rank_of_empty_matrix_is_zero() {
        let m = SparseMatrix::zero(0, 0);
        assert_eq!(m.rank(&q()), 0);
    }

    #[test]
    fn rank_of_identity() {
        let m = SparseMatrix::identity(3, &q());
        assert_eq!(m.rank(&q()), 3);
    }

    #[test]
    fn rank_one_matrix_over_q_and_f2() {
        // [[1,2],[2,4]]: second row is twice the first.
        let mq = SparseMatrix::from_dense(&[vec![1, 2], vec![2, 4]], &q());
        assert_eq!(mq.rank(&q()), 1);
        let f2 = FieldSpec::prime(2).unwrap();
        let m2 = SparseMatrix::from_dense(&[vec![1, 2], vec![2, 4]], &f2);
        assert_eq!(m2.rank(&f2), 1);
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        let m = SparseMatrix::identity(2, &q());
        assert!(m.kernel_basis(&q()).is_empty());
    }

    #[test]
    fn kernel_of_zero_matrix_is_everything() {
        let m = SparseMatrix::zero(2, 3);
        assert_eq!(m.kernel_basis(&q()).len(), 3);
    }

    #[test]
    fn kernel_over_f2_matches_enumeration() {
        // Independent oracle: enumerate all of F_2^3 and count solutions.
        let f2 = FieldSpec::prime(2).unwrap();
        let m = SparseMatrix::from_dense(&[vec![1, 1, 0]], &f2);
        let mut solutions = 0;
        for mask in 0..8u8 {
            let v: Vec<Scalar> = (0..3).map(|i| f2.from_i64(((mask >> i) & 1) as i64)).collect();
            let img = m.apply(&v, &f2);
            if img.iter().all(|x| f2.is_zero(x)) {
                solutions += 1;
            }
        }
        assert_eq!(solutions, 4); // 2^dim(kernel)
        let basis = m.kernel_basis(&f2);
        assert_eq!(basis.len(), 2);
    }

    #[test]
    fn homology_of_zero_differentials() {
        let d_in = SparseMatrix::zero(2, 0);
        let d_out = SparseMatrix::zero(0, 2);
        assert_eq!(homology_at(&d_in, &d_out, &q()).unwrap(), 2);
    }

    #[test]
    fn homology_of_identity_cone_vanishes() {
        // 0 -> k --1--> k -> 0: both middle spots have zero homology.
        let one = SparseMatrix::identity(1, &q());
        let into = SparseMatrix::zero(1, 0);
        let outof = SparseMatrix::zero(0, 1);
        assert_eq!(homology_at(&into, &one, &q()).unwrap(), 0);
        assert_eq!(homology_at(&one, &outof, &q()).unwrap(), 0);
    }

    #[test]
    fn non_complex_is_reported() {
        let d_in = SparseMatrix::identity(2, &q());
        let d_out = SparseMatrix::identity(2, &q());
        match homology_at(&d_in, &d_out, &q()) {
            Err(CoreError::NotAComplex { row: 0, col: 0 }) => {}
            other => panic!("expected NotAComplex, got {other:?}"),
        }
    }

    #[test]
    fn solve_simple_system() {
        let m = SparseMatrix::from_dense(&[vec![1, 2], vec![0, 1]], &q());
        let rhs = vec![vec![q().from_i64(3), q().from_i64(1)]];
        let sols = m.solve_columns(&rhs, &q());
        let x = sols[0].as_ref().unwrap();
        assert_eq!(m.apply(x, &q()), rhs[0]);
    }

    #[test]
    fn solve_detects_inconsistency() {
        let m = SparseMatrix::from_dense(&[vec![1], vec![1]], &q());
        let rhs = vec![vec![q().from_i64(1), q().from_i64(2)]];
        assert!(m.solve_columns(&rhs, &q())[0].is_none());
    }
}
