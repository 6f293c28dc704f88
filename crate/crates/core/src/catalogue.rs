//! Built-in example algebras. These are the inputs the shipped fixture
//! files are generated from, and the ones the test suite leans on.

use crate::dga::DGAlgebra;
use crate::field::FieldSpec;

/// k[x]/x² with `|x| = deg` and zero differential.
pub fn dual_numbers(field: FieldSpec, deg: i64) -> DGAlgebra {
    let one = field.one();
    DGAlgebra::new(
        field,
        vec![("1".into(), 0), ("x".into(), deg)],
        "1",
        vec![
            ((0, 0), vec![(0, one.clone())]),
            ((0, 1), vec![(1, one.clone())]),
            ((1, 0), vec![(1, one)]),
            ((1, 1), vec![]),
        ],
        vec![],
    )
    .expect("dual numbers are well-formed")
}

/// Basis {1, u} with |u| = -1, u² = 0 and d(u) = 1; quasi-isomorphic to 0.
pub fn contractible(field: FieldSpec) -> DGAlgebra {
    let one = field.one();
    DGAlgebra::new(
        field,
        vec![("1".into(), 0), ("u".into(), -1)],
        "1",
        vec![
            ((0, 0), vec![(0, one.clone())]),
            ((0, 1), vec![(1, one.clone())]),
            ((1, 0), vec![(1, one.clone())]),
            ((1, 1), vec![]),
        ],
        vec![(1, vec![(0, one)])],
    )
    .expect("contractible algebra is well-formed")
}

/// k × k presented with basis {1, e}, e² = e.
pub fn k_times_k(field: FieldSpec) -> DGAlgebra {
    let one = field.one();
    DGAlgebra::new(
        field,
        vec![("1".into(), 0), ("e".into(), 0)],
        "1",
        vec![
            ((0, 0), vec![(0, one.clone())]),
            ((0, 1), vec![(1, one.clone())]),
            ((1, 0), vec![(1, one.clone())]),
            ((1, 1), vec![(1, one)]),
        ],
        vec![],
    )
    .expect("k x k is well-formed")
}

/// Path algebra of the A₂ quiver (upper-triangular 2x2 matrices), basis
/// {1, e, a} with e² = e, e·a = a, a·e = 0.
pub fn a2_path_algebra(field: FieldSpec) -> DGAlgebra {
    let one = field.one();
    DGAlgebra::new(
        field,
        vec![("1".into(), 0), ("e".into(), 0), ("a".into(), 0)],
        "1",
        vec![
            ((0, 0), vec![(0, one.clone())]),
            ((0, 1), vec![(1, one.clone())]),
            ((0, 2), vec![(2, one.clone())]),
            ((1, 0), vec![(1, one.clone())]),
            ((2, 0), vec![(2, one.clone())]),
            ((1, 1), vec![(1, one.clone())]),
            ((1, 2), vec![(2, one)]),
            ((2, 1), vec![]),
            ((2, 2), vec![]),
        ],
        vec![],
    )
    .expect("A2 path algebra is well-formed")
}

/// k[t]/t^{top+1} with |t| = deg: the truncated presentation standing in
/// for the polynomial algebra on one generator.
pub fn truncated_poly(field: FieldSpec, top: usize, deg: i64) -> DGAlgebra {
    let one = field.one();
    let basis: Vec<(String, i64)> = (0..=top)
        .map(|i| {
            let name = match i {
                0 => "1".to_string(),
                1 => "t".to_string(),
                _ => format!("t{i}"),
            };
            (name, i as i64 * deg)
        })
        .collect();
    let mut mult = Vec::new();
    for i in 0..=top {
        for j in 0..=top {
            let combo = if i + j <= top {
                vec![(i + j, one.clone())]
            } else {
                vec![]
            };
            mult.push(((i, j), combo));
        }
    }
    DGAlgebra::new(field, basis, "1", mult, vec![]).expect("truncated polynomial algebra is well-formed")
}

/// ℚ[x]/(x²+1): semisimple with a non-split center, used to exercise the
/// `unknown` separability verdict.
pub fn gaussian_numbers(field: FieldSpec) -> DGAlgebra {
    let one = field.one();
    let minus_one = field.neg(&one);
    DGAlgebra::new(
        field,
        vec![("1".into(), 0), ("i".into(), 0)],
        "1",
        vec![
            ((0, 0), vec![(0, one.clone())]),
            ((0, 1), vec![(1, one.clone())]),
            ((1, 0), vec![(1, one)]),
            ((1, 1), vec![(0, minus_one)]),
        ],
        vec![],
    )
    .expect("Gaussian numbers are well-formed")
}

/// The small catalogue algebras (everything except matrix inflations).
pub fn all_small(field: FieldSpec) -> Vec<DGAlgebra> {
    vec![
        dual_numbers(field, 0),
        dual_numbers(field, 1),
        contractible(field),
        k_times_k(field),
        a2_path_algebra(field),
        truncated_poly(field, 4, 1),
    ]
}
