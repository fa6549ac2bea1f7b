//! Reference data for the verification suites: a worked quartic example
//! (its Hessian-variety ideal, the associated Veronese ideal, the tail of
//! the graded resolution, a chart map, the pushed-forward quartic, and the
//! recovered group element) plus binary-form fiber examples.
//!
//! The source data lists the `z` coordinates in graded-reverse-lex pair
//! order (`(0,0),(0,1),(1,1),(0,2),(1,2),(2,2)` for `n = 2`); the crate's
//! canonical order is lexicographic on pairs. The `ext_*` helpers apply the
//! permutation between the two orders, so everything returned from this
//! module is already in canonical coordinates.

use crate::linalg::{ExactMatrix, FieldKind, FieldScalar};
use crate::poly::{HomogPoly, Monomial, VarSet};
use crate::symsq::SymCoords;

const Q: FieldKind = FieldKind::Rational;

/// Pairs `(i,j)` in the external graded-reverse-lex order: grouped by the
/// larger index, ascending.
pub fn ext_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for j in 0..=n {
        for i in 0..=j {
            out.push((i, j));
        }
    }
    out
}

/// `perm[k]` = canonical index of the k-th external coordinate.
pub fn ext_to_canonical_perm(n: usize) -> Vec<usize> {
    let sc = SymCoords::new(n);
    ext_pairs(n)
        .iter()
        .map(|&(i, j)| sc.index_of(i, j))
        .collect()
}

/// Parse a polynomial written in external `z`-coordinates and permute the
/// variables into canonical order.
pub fn parse_ext_zpoly(s: &str, n: usize) -> HomogPoly {
    let sc = SymCoords::new(n);
    let zv = sc.zvars();
    let perm = ext_to_canonical_perm(n);
    let raw = HomogPoly::parse(s, zv, Q).expect("fixture polynomial must parse");
    let mut out = HomogPoly::zero(zv, raw.degree, Q);
    for (m, c) in raw.terms() {
        let mut e = vec![0u32; zv.count];
        for (k, &exp) in m.0.iter().enumerate() {
            e[perm[k]] += exp;
        }
        out.add_term(Monomial(e), c.clone());
    }
    out
}

/// Permute a matrix acting on external `z`-coordinate vectors into one
/// acting on canonical vectors (conjugation by the permutation).
pub fn ext_matrix_to_canonical(rows: &[&[i64]], n: usize) -> ExactMatrix {
    let perm = ext_to_canonical_perm(n);
    let m = perm.len();
    let mut out = ExactMatrix::zero(m, m, Q);
    for (i, row) in rows.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            out.set(perm[i], perm[j], Q.from_i64(v));
        }
    }
    out
}

/// The quartic plane curve of the worked example.
pub fn example_quartic() -> HomogPoly {
    HomogPoly::parse(
        "x0^3*x1 + x1^3*x2 + x2^3*x0 + 3*x0^2*x1*x2",
        VarSet::x(3),
        Q,
    )
    .unwrap()
}

/// The same curve as rescaled by the inverse group action in the worked
/// example.
pub fn example_quartic_scaled() -> HomogPoly {
    HomogPoly::parse(
        "-256*x0^3*x1 - 768*x0^2*x1*x2 - 256*x1^3*x2 - 256*x0*x2^3",
        VarSet::x(3),
        Q,
    )
    .unwrap()
}

/// The seven quadric generators of the Hessian-variety ideal of
/// [`example_quartic`], in canonical coordinates.
pub fn example_ideal_quadrics() -> Vec<HomogPoly> {
    [
        "z0^2 - z0*z3 + z2*z3 + 4*z0*z4 - 4*z2*z4 - 4*z3*z4 + 4*z1*z5 + 1/2*z2*z5 - 4*z4*z5 - 3*z5^2",
        "z0*z1 + z2*z4 - 3/2*z0*z5 + 1/2*z2*z5 + z3*z5",
        "z0*z2 + 4*z0*z4 - 4*z2*z4 - 4*z3*z4 + 2*z1*z5 - 2*z4*z5 - z5^2",
        "z1^2 + 1/4*z0*z3 - 1/4*z2*z3 - z1*z4 - 2*z1*z5 - 1/8*z2*z5 + z4*z5 + z5^2",
        "z1*z2 - 1/2*z0*z5 - 1/2*z2*z5",
        "z2^2 + 4*z0*z4 - 4*z2*z4 - 4*z3*z4 + z5^2",
        "z1*z3 + z2*z4 - 1/4*z5^2",
    ]
    .iter()
    .map(|s| parse_ext_zpoly(s, 2))
    .collect()
}

/// The six quadric generators of the Veronese surface containing the
/// example Hessian variety, in canonical coordinates.
pub fn example_veronese_quadrics() -> Vec<HomogPoly> {
    [
        "z0^2 - z0*z3 + z2*z3 + 4*z0*z4 - 4*z2*z4 - 4*z3*z4 + 4*z1*z5 + 1/2*z2*z5 - 4*z4*z5 - 3*z5^2",
        "z0*z1 - z1*z3 - 3/2*z0*z5 + 1/2*z2*z5 + z3*z5 + 1/4*z5^2",
        "z1^2 + 1/4*z0*z3 - 1/4*z2*z3 - z1*z4 - 2*z1*z5 - 1/8*z2*z5 + z4*z5 + z5^2",
        "z0*z2 + 4*z0*z4 - 4*z2*z4 - 4*z3*z4 + 2*z1*z5 - 2*z4*z5 - z5^2",
        "z1*z2 - 1/2*z0*z5 - 1/2*z2*z5",
        "z2^2 + 4*z0*z4 - 4*z2*z4 - 4*z3*z4 + z5^2",
    ]
    .iter()
    .map(|s| parse_ext_zpoly(s, 2))
    .collect()
}

/// The 8×3 tail differential of the minimal resolution of the example
/// Veronese ideal (rows are relations among the three module generators),
/// in canonical coordinates.
pub fn example_resolution_tail() -> Vec<Vec<HomogPoly>> {
    let rows: [[&str; 3]; 8] = [
        ["z2 + 4*z4", "-1/2*z5", "4*z4"],
        ["2*z5", "z2", "0*z0"],
        ["-z1 + 3/2*z5", "-1/4*z3", "1/2*z5"],
        ["z0 + 4*z4", "-z1 + z4 + 1/2*z5", "4*z4"],
        ["z3 - 4*z4", "-z1 + z4 + 3/2*z5", "z2 - 4*z4"],
        ["4*z5", "z0 - z3", "2*z5"],
        ["-1/2*z5", "1/4*z3 + 1/8*z5", "-z1 + 1/2*z5"],
        ["z3 - 4*z4 + 1/2*z5", "1/2*z5", "z0 - 4*z4"],
    ];
    rows.iter()
        .map(|r| {
            r.iter()
                .map(|s| {
                    let f = parse_ext_zpoly(s, 2);
                    if f.is_zero() {
                        // pin the zero entry to the linear degree
                        HomogPoly::zero(f.vars, 1, Q)
                    } else {
                        f
                    }
                })
                .collect()
        })
        .collect()
}

/// The chart map of the worked example, components in canonical
/// coordinates (externally `[-4(z0+z2) : 8 z1 : -2 z0 + 6 z2 + 4 z3 + z5]`).
pub fn example_chart_map() -> Vec<HomogPoly> {
    ["-4*z0 - 4*z2", "8*z1", "-2*z0 + 6*z2 + 4*z3 + z5"]
        .iter()
        .map(|s| parse_ext_zpoly(s, 2))
        .collect()
}

/// The quartic image of the example Hessian variety under the chart map.
pub fn example_image_quartic() -> HomogPoly {
    HomogPoly::parse(
        "2*x0^4 - 8*x0^3*x1 + 6*x0^2*x1^2 + x0*x1^3 + 4*x0^3*x2 - 48*x0^2*x1*x2 \
         + 12*x0*x1^2*x2 - 96*x0*x1*x2^2 - 64*x1*x2^3",
        VarSet::x(3),
        Q,
    )
    .unwrap()
}

/// The matrix of the composed map `h_G ∘ φ` on the example Veronese
/// surface, in canonical coordinates.
pub fn example_composed_matrix() -> ExactMatrix {
    ext_matrix_to_canonical(
        &[
            &[0, 0, 1, 0, -4, 4],
            &[0, -1, 0, 2, 0, 0],
            &[1, 0, 0, 0, 0, 0],
            &[0, 0, 0, 0, -4, 8],
            &[0, 0, 0, 4, 0, 0],
            &[0, 0, 0, 0, 0, 16],
        ],
        2,
    )
}

/// The group element recovered in the worked example.
pub fn example_group_element() -> ExactMatrix {
    ExactMatrix::from_i64(&[&[0, 1, -2], &[-1, 0, 0], &[0, 0, -4]], Q)
}

/// The three-point Hessian configuration of the binary-cubic fiber example.
pub fn binary_cubic_points() -> [Vec<FieldScalar>; 3] {
    let mk = |a: i64, b: i64, c: i64| vec![Q.from_i64(a), Q.from_i64(b), Q.from_i64(c)];
    [mk(1, -1, 0), mk(0, -1, 1), mk(1, 0, -1)]
}

/// The two binary cubics with that Hessian configuration:
/// `x0·x1·(x0-x1)` and `(x0-2x1)(2x0-x1)(x0+x1)`.
pub fn binary_cubic_fiber() -> [HomogPoly; 2] {
    let vx = VarSet::x(2);
    [
        HomogPoly::parse("x0^2*x1 - x0*x1^2", vx, Q).unwrap(),
        HomogPoly::parse("2*x0^3 - 3*x0^2*x1 - 3*x0*x1^2 + 2*x1^3", vx, Q).unwrap(),
    ]
}
