//! Forward direction of the Hessian correspondence: graded pieces of the
//! ideal of a Hessian variety, linear spans, Hilbert-function probes, ideal
//! membership, and point sampling over prime fields.
//!
//! The defining characterization used throughout is: a form `Q` in the
//! `z`-coordinates vanishes on the Hessian variety of a squarefree `F` if
//! and only if `F` divides `Q ∘ h_F`. Squarefreeness is certified
//! probabilistically by sampling points of `V(F)` over a prime field and
//! requiring a nonzero gradient there.

use crate::linalg::{ExactMatrix, FieldKind, FieldScalar};
use crate::poly::{macaulay_mult_matrix, monomial_basis, HomogPoly, VarSet};
use crate::symsq::{hessian_map_forms, SymCoords};
use crate::{Error, Result};
use std::collections::BTreeMap;

/// Default prime for probabilistic checks and `F_p` runs: `2^61 - 1`.
pub const DEFAULT_PRIME: u64 = (1u64 << 61) - 1;

/// A finite-dimensional space of homogeneous forms of one degree, stored as
/// a reduced coefficient matrix over the canonical monomial basis (one row
/// per basis form).
#[derive(Clone, Debug)]
pub struct GradedSubspace {
    pub vars: VarSet,
    pub degree: u32,
    pub kind: FieldKind,
    basis: ExactMatrix,
    pivots: Vec<usize>,
}

impl GradedSubspace {
    pub fn from_forms(
        vars: VarSet,
        degree: u32,
        kind: FieldKind,
        forms: impl IntoIterator<Item = HomogPoly>,
    ) -> GradedSubspace {
        let rows: Vec<Vec<FieldScalar>> = forms
            .into_iter()
            .map(|f| {
                assert_eq!(f.vars, vars, "form outside the ambient varset");
                assert!(
                    f.is_zero() || f.degree == degree,
                    "form of the wrong degree"
                );
                let mut v = f.coeff_vector();
                let want = monomial_basis(vars, degree).len();
                if v.len() != want {
                    // zero polynomial constructed at a different degree
                    v = vec![kind.zero(); want];
                }
                v
            })
            .collect();
        Self::from_rows(vars, degree, kind, rows)
    }

    pub fn from_rows(
        vars: VarSet,
        degree: u32,
        kind: FieldKind,
        rows: Vec<Vec<FieldScalar>>,
    ) -> GradedSubspace {
        let width = monomial_basis(vars, degree).len();
        let mat = if rows.is_empty() {
            ExactMatrix::zero(0, width, kind)
        } else {
            ExactMatrix::from_rows(rows, kind)
        };
        assert_eq!(mat.cols, width, "coefficient row width mismatch");
        let (r, pivots) = mat.rref();
        let kept: Vec<Vec<FieldScalar>> = (0..pivots.len()).map(|i| r.row(i)).collect();
        let basis = if kept.is_empty() {
            ExactMatrix::zero(0, width, kind)
        } else {
            ExactMatrix::from_rows(kept, kind)
        };
        GradedSubspace {
            vars,
            degree,
            kind,
            basis,
            pivots,
        }
    }

    pub fn zero_space(vars: VarSet, degree: u32, kind: FieldKind) -> GradedSubspace {
        Self::from_rows(vars, degree, kind, Vec::new())
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn basis_forms(&self) -> Vec<HomogPoly> {
        (0..self.basis.rows)
            .map(|i| {
                HomogPoly::from_coeff_vector(self.vars, self.degree, self.kind, &self.basis.row(i))
            })
            .collect()
    }

    /// Residue of a coefficient vector after reduction against the basis.
    fn reduce_vec(&self, v: &[FieldScalar]) -> Vec<FieldScalar> {
        let mut v = v.to_vec();
        for (bi, &pc) in self.pivots.iter().enumerate() {
            if !v[pc].is_zero() {
                let f = v[pc].clone();
                for j in 0..v.len() {
                    let t = v[j].sub(&f.mul(self.basis.at(bi, j)));
                    v[j] = t;
                }
            }
        }
        v
    }

    /// Residue of a form modulo this subspace.
    pub fn reduce(&self, f: &HomogPoly) -> HomogPoly {
        assert_eq!(f.vars, self.vars);
        assert!(f.is_zero() || f.degree == self.degree);
        let v = if f.is_zero() {
            vec![self.kind.zero(); self.basis.cols]
        } else {
            f.coeff_vector()
        };
        HomogPoly::from_coeff_vector(self.vars, self.degree, self.kind, &self.reduce_vec(&v))
    }

    pub fn contains(&self, f: &HomogPoly) -> bool {
        self.reduce(f).is_zero()
    }

    pub fn contains_subspace(&self, other: &GradedSubspace) -> bool {
        other.basis_forms().iter().all(|f| self.contains(f))
    }

    /// Exact subspace equality (identical reduced echelon bases).
    pub fn equals(&self, other: &GradedSubspace) -> bool {
        self.vars == other.vars
            && self.degree == other.degree
            && self.pivots == other.pivots
            && self.basis == other.basis
    }

    /// Sum of two subspaces of the same degree.
    pub fn sum(&self, other: &GradedSubspace) -> GradedSubspace {
        let mut forms = self.basis_forms();
        forms.extend(other.basis_forms());
        GradedSubspace::from_forms(self.vars, self.degree, self.kind, forms)
    }
}

/// Graded data attached to one Hessian variety: the source polynomial (when
/// known) and ideal pieces by degree.
#[derive(Clone, Debug)]
pub struct HessianVarietyModel {
    pub f: Option<HomogPoly>,
    pub n: usize,
    pub d: u32,
    pub pieces: BTreeMap<u32, GradedSubspace>,
}

impl HessianVarietyModel {
    pub fn piece(&self, e: u32) -> Option<&GradedSubspace> {
        self.pieces.get(&e)
    }

    /// `S_1 · piece_e ⊆ piece_{e+1}` for all consecutive stored degrees.
    pub fn is_monotone(&self) -> bool {
        let degrees: Vec<u32> = self.pieces.keys().cloned().collect();
        for w in degrees.windows(2) {
            let (e, e1) = (w[0], w[1]);
            if e1 != e + 1 {
                continue;
            }
            let lower = &self.pieces[&e];
            let upper = &self.pieces[&e1];
            let zv = lower.vars;
            for f in lower.basis_forms() {
                for v in 0..zv.count {
                    let lifted = f.multiply(&HomogPoly::var(zv, v, lower.kind));
                    if !upper.contains(&lifted) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Certify squarefreeness. Binary forms (`n = 1`) cut out finitely many
/// points, which need not be `F_p`-rational, so they get an exact
/// discriminant test: `F` is squarefree iff the resultant of its two
/// partials is nonzero. For `n ≥ 2` the check is probabilistic: sample 20
/// points on `V(F)` over a prime field and require a nonzero gradient at
/// each.
pub fn certify_squarefree(f: &HomogPoly, rng: &mut impl rand::Rng) -> Result<()> {
    if f.is_zero() {
        return Err(Error::NotSquarefree("zero polynomial".into()));
    }
    if f.vars.count == 2 {
        let fx = f.partial_derivative(0);
        let fy = f.partial_derivative(1);
        return if binary_resultant_nonzero(&fx, &fy) {
            Ok(())
        } else {
            Err(Error::NotSquarefree("vanishing discriminant".into()))
        };
    }
    let fp = match f.kind {
        FieldKind::Prime(_) => f.clone(),
        FieldKind::Rational => f.to_fp(DEFAULT_PRIME).map_err(Error::NotSquarefree)?,
    };
    if fp.is_zero() {
        return Err(Error::NotSquarefree("zero polynomial".into()));
    }
    let grads: Vec<HomogPoly> = (0..fp.vars.count)
        .map(|i| fp.partial_derivative(i))
        .collect();
    for _ in 0..20 {
        let q = sample_point_on_hypersurface(&fp, rng)
            .map_err(|_| Error::NotSquarefree("no points found on the hypersurface".into()))?;
        if grads.iter().all(|g| g.evaluate(&q).is_zero()) {
            return Err(Error::NotSquarefree(
                "vanishing gradient at a sampled point".into(),
            ));
        }
    }
    Ok(())
}

/// Nonvanishing of the resultant of two binary forms of equal degree,
/// decided by the rank of the Sylvester matrix.
fn binary_resultant_nonzero(a: &HomogPoly, b: &HomogPoly) -> bool {
    assert_eq!(a.vars.count, 2);
    if a.is_zero() || b.is_zero() {
        return false;
    }
    let e = a.degree as usize;
    assert_eq!(b.degree as usize, e);
    let kind = a.kind;
    // coefficient lists: index = exponent of x1
    let coef =
        |f: &HomogPoly, i: usize| f.coeff(&crate::poly::Monomial(vec![(e - i) as u32, i as u32]));
    let size = 2 * e;
    let mut syl = ExactMatrix::zero(size, size, kind);
    for r in 0..e {
        for i in 0..=e {
            syl.set(r, r + i, coef(a, i));
            syl.set(e + r, r + i, coef(b, i));
        }
    }
    syl.rank() == size
}

/// The degree-`e` piece of the ideal of the Hessian variety of `F`: the
/// kernel of `Q ↦ (Q ∘ h_F mod ⟨F⟩)` on degree-`e` forms in the
/// `z`-coordinates.
pub fn ideal_graded_piece(
    f: &HomogPoly,
    e: u32,
    rng: &mut impl rand::Rng,
) -> Result<GradedSubspace> {
    if f.degree < 3 {
        return Err(Error::InvalidInput(
            "ideal pieces need degree at least 3".into(),
        ));
    }
    certify_squarefree(f, rng)?;
    Ok(ideal_graded_piece_unchecked(f, e))
}

/// Same kernel computation without the squarefreeness certificate.
pub fn ideal_graded_piece_unchecked(f: &HomogPoly, e: u32) -> GradedSubspace {
    let n = f.vars.count - 1;
    let d = f.degree;
    let sc = SymCoords::new(n);
    let zv = sc.zvars();
    let kind = f.kind;
    let h = hessian_map_forms(f);

    let zmons = monomial_basis(zv, e);
    let target_deg = e * (d - 2);
    let xmons = monomial_basis(f.vars, target_deg);

    // columns: composed z-monomials, then -F * (cofactor monomials)
    let mut cols: Vec<Vec<FieldScalar>> = Vec::new();
    for m in &zmons {
        let q = HomogPoly::monomial(zv, m.clone(), kind.one());
        let composed = q
            .substitute(&h.forms)
            .expect("hessian components share a degree");
        cols.push(composed.coeff_vector());
    }
    if target_deg >= d {
        for m in monomial_basis(f.vars, target_deg - d) {
            let prod = f.multiply(&HomogPoly::monomial(f.vars, m, kind.one()));
            cols.push(prod.coeff_vector().iter().map(|c| c.neg()).collect());
        }
    }

    let mut mat = ExactMatrix::zero(xmons.len(), cols.len(), kind);
    for (ci, col) in cols.iter().enumerate() {
        for (ri, v) in col.iter().enumerate() {
            mat.set(ri, ci, v.clone());
        }
    }
    let ker = mat.kernel();
    let rows: Vec<Vec<FieldScalar>> = (0..ker.cols)
        .map(|c| (0..zmons.len()).map(|r| ker.at(r, c).clone()).collect())
        .collect();
    GradedSubspace::from_rows(zv, e, kind, rows)
}

/// Build the model with ideal pieces for the requested degrees.
pub fn hessian_variety_model(
    f: &HomogPoly,
    degrees: &[u32],
    rng: &mut impl rand::Rng,
) -> Result<HessianVarietyModel> {
    let n = f.vars.count - 1;
    let mut pieces = BTreeMap::new();
    for &e in degrees {
        pieces.insert(e, ideal_graded_piece(f, e, rng)?);
    }
    Ok(HessianVarietyModel {
        f: Some(f.clone()),
        n,
        d: f.degree,
        pieces,
    })
}

/// The space of linear `z`-forms vanishing on the variety cut out by the
/// given generators: the span of the degree-one generators. `P(E)` is its
/// zero locus. (No saturation is performed; for degree-3 Hessian varieties
/// the linear forms already generate the degree-one piece.)
pub fn linear_span(gens: &[HomogPoly]) -> GradedSubspace {
    assert!(!gens.is_empty(), "no generators");
    let vars = gens[0].vars;
    let kind = gens[0].kind;
    let linear: Vec<HomogPoly> = gens.iter().filter(|g| g.degree == 1).cloned().collect();
    GradedSubspace::from_forms(vars, 1, kind, linear)
}

/// For each requested degree, the dimension of that graded piece of the
/// ideal generated by `gens`.
pub fn hilbert_probe(gens: &[HomogPoly], degrees: &[u32]) -> Vec<usize> {
    degrees
        .iter()
        .map(|&e| {
            let usable: Vec<HomogPoly> = gens
                .iter()
                .filter(|g| g.degree <= e && !g.is_zero())
                .cloned()
                .collect();
            if usable.is_empty() {
                return 0;
            }
            let (mat, _) = macaulay_mult_matrix(&usable, e);
            mat.rank()
        })
        .collect()
}

/// A point of `V(F)` over `F_p`, found by fixing random values of all but
/// one variable and solving the remaining univariate equation.
pub fn sample_point_on_hypersurface(
    f: &HomogPoly,
    rng: &mut impl rand::Rng,
) -> Result<Vec<FieldScalar>> {
    let FieldKind::Prime(p) = f.kind else {
        panic!("sampling needs a prime field polynomial");
    };
    if f.is_zero() {
        return Err(Error::NoPointFound);
    }
    let nv = f.vars.count;
    for attempt in 0..200 {
        let var = attempt % nv;
        let mut values: Vec<FieldScalar> = (0..nv)
            .map(|_| FieldScalar::Fp {
                v: rng.gen_range(0..p),
                p,
            })
            .collect();
        let coeffs = f.specialize_to_univariate(var, &values);
        let dense: Vec<u64> = coeffs
            .iter()
            .map(|c| match c {
                FieldScalar::Fp { v, .. } => *v,
                _ => unreachable!(),
            })
            .collect();
        let poly = crate::poly::FpPoly::new(dense, p);
        if poly.is_zero() {
            // every value of the free variable works
            values[var] = FieldScalar::Fp {
                v: rng.gen_range(0..p),
                p,
            };
        } else if poly.deg() == 0 {
            continue;
        } else {
            let roots = crate::poly::fp_univariate_roots(&poly, rng);
            if roots.is_empty() {
                continue;
            }
            let r = roots[rng.gen_range(0..roots.len())];
            values[var] = FieldScalar::Fp { v: r, p };
        }
        if values.iter().all(|v| v.is_zero()) {
            continue;
        }
        debug_assert!(f.evaluate(&values).is_zero());
        return Ok(values);
    }
    Err(Error::NoPointFound)
}

/// True iff `Q ∘ h_F ∈ ⟨F⟩`, via a linear solve for the cofactor.
pub fn membership_test(q: &HomogPoly, f: &HomogPoly) -> bool {
    let h = hessian_map_forms(f);
    let composed = match q.substitute(&h.forms) {
        Ok(c) => c,
        Err(_) => return false,
    };
    if composed.is_zero() {
        return true;
    }
    composed.divide_by(f).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symsq::{act, rho_of, GroupElement};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const Q: FieldKind = FieldKind::Rational;

    fn random_poly(vars: VarSet, degree: u32, rng: &mut ChaCha8Rng) -> HomogPoly {
        let mut p = HomogPoly::zero(vars, degree, Q);
        for m in monomial_basis(vars, degree) {
            p.add_term(m, Q.from_i64(rng.gen_range(-9..=9)));
        }
        p
    }

    #[test]
    fn fermat_cubic_linear_piece() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let vx = VarSet::x(3);
        let f = HomogPoly::parse("x0^3+x1^3+x2^3", vx, Q).unwrap();
        let piece = ideal_graded_piece(&f, 1, &mut rng).unwrap();
        assert_eq!(piece.dim(), 3);
        let zv = VarSet::z(6);
        // z01, z02, z12 at canonical indices 1, 2, 4
        for idx in [1usize, 2, 4] {
            assert!(piece.contains(&HomogPoly::var(zv, idx, Q)));
        }
        for idx in [0usize, 3, 5] {
            assert!(!piece.contains(&HomogPoly::var(zv, idx, Q)));
        }
    }

    #[test]
    fn fermat_cubic_degree_three_piece_contains_diagonal_cubic() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let vx = VarSet::x(3);
        let f = HomogPoly::parse("x0^3+x1^3+x2^3", vx, Q).unwrap();
        let piece = ideal_graded_piece(&f, 3, &mut rng).unwrap();
        // z00^3 + z11^3 + z22^3 in canonical coordinates z0, z3, z5
        let zv = VarSet::z(6);
        let cubic = HomogPoly::parse("z0^3 + z3^3 + z5^3", zv, Q).unwrap();
        assert!(piece.contains(&cubic));
    }

    // Oracle for the binary-quartic case: h = (12x0², 0, 12x1²); a quadric
    // c0 z0² + c1 z0z1 + c2 z1² + c3 z0z2 + c4 z1z2 + c5 z2² composes to
    // 144(c0 x0⁴ + c3 x0²x1² + c5 x1⁴), and divisibility by x0⁴ + x1⁴ forces
    // c3 = 0, c0 = c5, leaving a four-dimensional space.
    #[test]
    fn binary_quartic_degree_two_piece() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let vx = VarSet::x(2);
        let f = HomogPoly::parse("x0^4+x1^4", vx, Q).unwrap();
        let piece = ideal_graded_piece(&f, 2, &mut rng).unwrap();
        assert_eq!(piece.dim(), 4);
        let zv = VarSet::z(3);
        assert!(piece.contains(&HomogPoly::parse("z0^2 + z2^2", zv, Q).unwrap()));
        assert!(piece.contains(&HomogPoly::parse("z1^2", zv, Q).unwrap()));
        assert!(piece.contains(&HomogPoly::parse("z0*z1", zv, Q).unwrap()));
        assert!(piece.contains(&HomogPoly::parse("z1*z2", zv, Q).unwrap()));
        assert!(!piece.contains(&HomogPoly::parse("z0*z2", zv, Q).unwrap()));
    }

    #[test]
    fn generic_binary_quartic_gives_a_pencil() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let vx = VarSet::x(2);
        let f = HomogPoly::parse("x0^4 + x0^3*x1 + 3*x0*x1^3 - x1^4", vx, Q).unwrap();
        let piece = ideal_graded_piece(&f, 2, &mut rng).unwrap();
        assert_eq!(piece.dim(), 2);
    }

    #[test]
    fn linear_span_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let vx = VarSet::x(3);
        let zv = VarSet::z(6);

        let fermat = HomogPoly::parse("x0^3+x1^3+x2^3", vx, Q).unwrap();
        let piece = ideal_graded_piece(&fermat, 1, &mut rng).unwrap();
        let span = linear_span(&piece.basis_forms());
        assert_eq!(span.dim(), 3);

        // generators already linear
        let gens = vec![
            HomogPoly::var(zv, 0, Q),
            HomogPoly::var(zv, 3, Q),
            HomogPoly::var(zv, 5, Q),
        ];
        let span = linear_span(&gens);
        assert_eq!(span.dim(), 3);
        assert!(span.contains(&HomogPoly::var(zv, 0, Q)));

        // H_{3,2}(3·x0x1x2) has ideal generated by z00, z11, z22 in degree 1
        let f = HomogPoly::parse("3*x0*x1*x2", vx, Q).unwrap();
        let piece = ideal_graded_piece(&f, 1, &mut rng).unwrap();
        let span = linear_span(&piece.basis_forms());
        assert_eq!(span.dim(), 3);
        for idx in [0usize, 3, 5] {
            assert!(span.contains(&HomogPoly::var(zv, idx, Q)));
        }
    }

    #[test]
    fn hilbert_probe_examples() {
        let zv = VarSet::z(6);
        // multiples of one linear form in degree 3: C(7,2) = 21
        let gens = vec![HomogPoly::var(zv, 0, Q)];
        assert_eq!(hilbert_probe(&gens, &[3]), vec![21]);
    }

    #[test]
    fn sample_point_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let kind = FieldKind::Prime(7);
        let vx = VarSet::x(2);
        let f = HomogPoly::parse("x0^2 - x1^2", vx, kind).unwrap();
        let q = sample_point_on_hypersurface(&f, &mut rng).unwrap();
        assert!(f.evaluate(&q).is_zero());

        let lin = HomogPoly::parse("x0", vx, kind).unwrap();
        let q = sample_point_on_hypersurface(&lin, &mut rng).unwrap();
        assert!(q[0].is_zero());
        assert!(!q[1].is_zero());
    }

    #[test]
    fn sampled_points_satisfy_the_equation() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let kind = FieldKind::Prime(DEFAULT_PRIME);
        let vx = VarSet::x(3);
        let mut f = HomogPoly::zero(vx, 3, kind);
        for m in monomial_basis(vx, 3) {
            f.add_term(m, kind.from_i64(rng.gen_range(-9..=9)));
        }
        for _ in 0..500 {
            let q = sample_point_on_hypersurface(&f, &mut rng).unwrap();
            assert!(f.evaluate(&q).is_zero());
        }
    }

    #[test]
    fn membership_examples() {
        let vx = VarSet::x(3);
        let zv = VarSet::z(6);
        let f = HomogPoly::parse("x0^3+x1^3+x2^3", vx, Q).unwrap();
        assert!(membership_test(&HomogPoly::var(zv, 1, Q), &f)); // z01
        assert!(!membership_test(&HomogPoly::var(zv, 0, Q), &f)); // z00 -> 6x0
        assert!(membership_test(&HomogPoly::zero(zv, 1, Q), &f));
    }

    #[test]
    fn ideal_piece_vanishes_at_sampled_images() {
        // over F_p: basis forms of the degree-e piece vanish at h_F(q) for
        // sampled points q of V(F)
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let kind = FieldKind::Prime(DEFAULT_PRIME);
        let vx = VarSet::x(3);
        let mut f = HomogPoly::zero(vx, 3, kind);
        for m in monomial_basis(vx, 3) {
            f.add_term(m, kind.from_i64(rng.gen_range(-9..=9)));
        }
        let piece = ideal_graded_piece(&f, 1, &mut rng).unwrap();
        let h = hessian_map_forms(&f);
        for _ in 0..100 {
            let q = sample_point_on_hypersurface(&f, &mut rng).unwrap();
            let img = h.apply(&q);
            for b in piece.basis_forms() {
                assert!(b.evaluate(&img).is_zero());
            }
        }
    }

    #[test]
    fn pieces_are_monotone() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let vx = VarSet::x(3);
        let f = HomogPoly::parse("x0^3+x1^3+x2^3 - 3*x0*x1*x2 + x0^2*x1", vx, Q).unwrap();
        let model = hessian_variety_model(&f, &[1, 2, 3], &mut rng).unwrap();
        assert!(model.is_monotone());
    }

    #[test]
    fn quadratic_hessian_is_the_gram_point() {
        // 2F = x · H_F · xᵗ for quadratic F, as an exact identity.
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let vx = VarSet::x(3);
        for _ in 0..10 {
            let f = random_poly(vx, 2, &mut rng);
            let h = crate::symsq::hessian_matrix(&f);
            let mut acc = HomogPoly::zero(vx, 2, Q);
            for i in 0..3 {
                for j in 0..3 {
                    let xi = HomogPoly::var(vx, i, Q);
                    let xj = HomogPoly::var(vx, j, Q);
                    acc = acc.add(
                        &xi.multiply(&xj)
                            .scale(&h.at(i, j).coeff(&crate::poly::Monomial(vec![0, 0, 0]))),
                    );
                }
            }
            assert_eq!(acc, f.scale(&Q.from_i64(2)));
        }
    }

    #[test]
    fn ideal_pieces_are_equivariant() {
        // the piece of g·F is the piece of F composed with rho_of(g)^{-1}
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let vx = VarSet::x(3);
        let zv = VarSet::z(6);
        for _ in 0..5 {
            let f = random_poly(vx, 3, &mut rng);
            let g = GroupElement::random(2, Q, &mut rng);
            let piece_f = ideal_graded_piece(&f, 1, &mut rng).unwrap();
            let piece_gf = ideal_graded_piece(&act(&g, &f), 1, &mut rng).unwrap();
            let rinv = rho_of(&g).inverse().unwrap();
            // substitution z ↦ rinv·z applied to each basis form of piece_f
            let subst: Vec<HomogPoly> = (0..6)
                .map(|i| {
                    let mut l = HomogPoly::zero(zv, 1, Q);
                    for j in 0..6 {
                        l = l.add(&HomogPoly::var(zv, j, Q).scale(rinv.at(i, j)));
                    }
                    l
                })
                .collect();
            let transformed: Vec<HomogPoly> = piece_f
                .basis_forms()
                .iter()
                .map(|b| b.substitute(&subst).unwrap())
                .collect();
            let transformed = GradedSubspace::from_forms(zv, 1, Q, transformed);
            assert!(transformed.equals(&piece_gf));
        }
    }
}
