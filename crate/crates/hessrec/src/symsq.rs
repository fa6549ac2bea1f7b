//! The geometry of `P(S²V)`: coordinate conventions, the Hessian matrix and
//! map, gradient spans, the induced action on symmetric matrices, and its
//! inverse.
//!
//! Conventions, fixed once for the whole crate:
//!
//! * `SymCoords` pairs `(i,j)`, `i ≤ j`, are ordered lexicographically:
//!   `(0,0),(0,1),…,(0,n),(1,1),…,(n,n)`.
//! * A coordinate vector `[z_ij]` is the symmetric matrix with entries
//!   `z_ij`; as a quadratic form it is `Σ z_ii x_i² + Σ_{i<j} 2 z_ij x_i x_j`.
//! * The group acts by `act(g, F) = F ∘ gᵗ`.
//! * `rho_of(g)` is the matrix of `Z ↦ g Z gᵗ` on coordinate vectors, so
//!   that the Hessian matrix of `act(g, F)` is `g · (H_F ∘ gᵗ) · gᵗ` and
//!   the tuple identity
//!   `hessian_map_forms(act(g,F)) = rho_of(g) · (hessian_map_forms(F) ∘ gᵗ)`
//!   holds exactly, with no scalar.

use crate::forward::GradedSubspace;
use crate::linalg::{ExactMatrix, FieldKind, FieldScalar};
use crate::poly::{HomogPoly, PolyMatrix, VarSet};
use crate::{Error, Result};

/// Index bookkeeping for the coordinates `z_{ij}` of `P(S²V)`.
#[derive(Clone, Debug)]
pub struct SymCoords {
    pub n: usize,
    pairs: Vec<(usize, usize)>,
}

impl SymCoords {
    pub fn new(n: usize) -> SymCoords {
        let mut pairs = Vec::new();
        for i in 0..=n {
            for j in i..=n {
                pairs.push((i, j));
            }
        }
        SymCoords { n, pairs }
    }

    /// `N = C(n+2,2) - 1`, the dimension of `P(S²V)`.
    pub fn big_n(&self) -> usize {
        self.pairs.len() - 1
    }

    pub fn num_coords(&self) -> usize {
        self.pairs.len()
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn index_of(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        self.pairs
            .iter()
            .position(|&p| p == (i, j))
            .expect("pair out of range")
    }

    pub fn zvars(&self) -> VarSet {
        VarSet::z(self.num_coords())
    }

    pub fn xvars(&self) -> VarSet {
        VarSet::x(self.n + 1)
    }

    /// Coordinate vector to symmetric matrix.
    pub fn vec_to_matrix(&self, v: &[FieldScalar]) -> ExactMatrix {
        assert_eq!(
            v.len(),
            self.num_coords(),
            "coordinate vector length mismatch"
        );
        let kind = v[0].kind();
        let mut m = ExactMatrix::zero(self.n + 1, self.n + 1, kind);
        for (k, &(i, j)) in self.pairs.iter().enumerate() {
            m.set(i, j, v[k].clone());
            m.set(j, i, v[k].clone());
        }
        m
    }

    pub fn matrix_to_vec(&self, m: &ExactMatrix) -> Vec<FieldScalar> {
        assert_eq!(m.rows, self.n + 1);
        assert_eq!(m.cols, self.n + 1);
        self.pairs
            .iter()
            .map(|&(i, j)| m.at(i, j).clone())
            .collect()
    }

    /// Coordinate vector to quadratic form `Σ z_ii x_i² + Σ_{i<j} 2 z_ij x_i x_j`.
    pub fn vec_to_form(&self, v: &[FieldScalar]) -> HomogPoly {
        assert_eq!(v.len(), self.num_coords());
        let kind = v[0].kind();
        let vx = self.xvars();
        let mut f = HomogPoly::zero(vx, 2, kind);
        for (k, &(i, j)) in self.pairs.iter().enumerate() {
            if v[k].is_zero() {
                continue;
            }
            let mut e = vec![0u32; self.n + 1];
            e[i] += 1;
            e[j] += 1;
            let c = if i == j {
                v[k].clone()
            } else {
                v[k].add(&v[k])
            };
            f.add_term(crate::poly::Monomial(e), c);
        }
        f
    }

    /// Quadratic form to coordinate vector (inverse of [`Self::vec_to_form`]).
    pub fn form_to_vec(&self, f: &HomogPoly) -> Vec<FieldScalar> {
        assert_eq!(f.vars, self.xvars(), "form lives in the wrong varset");
        assert!(f.degree == 2, "not a quadratic form");
        let kind = f.kind;
        let two_inv = kind.from_i64(2).inv();
        self.pairs
            .iter()
            .map(|&(i, j)| {
                let mut e = vec![0u32; self.n + 1];
                e[i] += 1;
                e[j] += 1;
                let c = f.coeff(&crate::poly::Monomial(e));
                if i == j {
                    c
                } else {
                    c.mul(&two_inv)
                }
            })
            .collect()
    }
}

/// An element of `PGL(n+1)`: an invertible matrix considered up to scalar.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElement(pub ExactMatrix);

impl GroupElement {
    pub fn new(m: ExactMatrix) -> Result<GroupElement> {
        assert_eq!(m.rows, m.cols, "group element must be square");
        if m.rank() < m.rows {
            return Err(Error::InvalidInput(
                "singular matrix is not a group element".into(),
            ));
        }
        Ok(GroupElement(m))
    }

    pub fn from_i64(rows: &[&[i64]], kind: FieldKind) -> Result<GroupElement> {
        GroupElement::new(ExactMatrix::from_i64(rows, kind))
    }

    pub fn n(&self) -> usize {
        self.0.rows - 1
    }

    pub fn inverse(&self) -> GroupElement {
        GroupElement(self.0.inverse().expect("group elements are invertible"))
    }

    pub fn transpose(&self) -> GroupElement {
        GroupElement(self.0.transpose())
    }

    /// Random invertible matrix with small integer entries.
    pub fn random(n: usize, kind: FieldKind, rng: &mut impl rand::Rng) -> GroupElement {
        loop {
            let m = ExactMatrix::from_rows(
                (0..=n)
                    .map(|_| {
                        (0..=n)
                            .map(|_| kind.from_i64(rng.gen_range(-5..=5)))
                            .collect()
                    })
                    .collect(),
                kind,
            );
            if m.rank() == n + 1 {
                return GroupElement(m);
            }
        }
    }

    /// Projective equality: proportional matrices.
    pub fn proportional(&self, other: &GroupElement) -> bool {
        matrices_proportional(&self.0, &other.0)
    }
}

pub(crate) fn matrices_proportional(a: &ExactMatrix, b: &ExactMatrix) -> bool {
    if a.rows != b.rows || a.cols != b.cols {
        return false;
    }
    let mut scale: Option<FieldScalar> = None;
    for i in 0..a.rows {
        for j in 0..a.cols {
            let (x, y) = (a.at(i, j), b.at(i, j));
            match (x.is_zero(), y.is_zero()) {
                (true, true) => {}
                (true, false) | (false, true) => return false,
                (false, false) => {
                    let r = y.div(x);
                    match &scale {
                        None => scale = Some(r),
                        Some(s) => {
                            if *s != r {
                                return false;
                            }
                        }
                    }
                }
            }
        }
    }
    scale.is_some()
}

/// A rational map between projective spaces, given by equal-degree forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjMap {
    pub forms: Vec<HomogPoly>,
}

impl ProjMap {
    pub fn new(forms: Vec<HomogPoly>) -> ProjMap {
        assert!(!forms.is_empty());
        let vars = forms[0].vars;
        let deg = forms[0].degree;
        for f in &forms {
            assert_eq!(f.vars, vars, "components live in different varsets");
            assert_eq!(f.degree, deg, "components have different degrees");
        }
        ProjMap { forms }
    }

    pub fn degree(&self) -> u32 {
        self.forms[0].degree
    }

    pub fn apply(&self, point: &[FieldScalar]) -> Vec<FieldScalar> {
        self.forms.iter().map(|f| f.evaluate(point)).collect()
    }
}

/// The symmetric matrix of second partials of `F`; entries are homogeneous
/// of degree `d - 2`.
pub fn hessian_matrix(f: &HomogPoly) -> PolyMatrix {
    assert!(f.degree >= 2, "hessian needs degree >= 2");
    let n1 = f.vars.count;
    let d = f.degree as i64;
    let entries: Vec<Vec<HomogPoly>> = (0..n1)
        .map(|i| {
            (0..n1)
                .map(|j| f.partial_derivative(i).partial_derivative(j))
                .collect()
        })
        .collect();
    PolyMatrix::new(entries, vec![0; n1], vec![d - 2; n1])
}

/// The Hessian map `h_F` as a tuple of `N+1` forms of degree `d - 2`: the
/// `(i ≤ j)` Hessian entries in `SymCoords` order.
pub fn hessian_map_forms(f: &HomogPoly) -> ProjMap {
    let n = f.vars.count - 1;
    let sc = SymCoords::new(n);
    let h = hessian_matrix(f);
    ProjMap::new(
        sc.pairs()
            .iter()
            .map(|&(i, j)| h.at(i, j).clone())
            .collect(),
    )
}

/// The span of the first partial derivatives of `F`, as a reduced space of
/// degree-`(d-1)` forms.
pub fn gradient_span(f: &HomogPoly) -> GradedSubspace {
    assert!(f.degree >= 1);
    let grads: Vec<HomogPoly> = (0..f.vars.count).map(|i| f.partial_derivative(i)).collect();
    GradedSubspace::from_forms(f.vars, f.degree - 1, f.kind, grads)
}

/// The composed form `F ∘ gᵗ`.
pub fn act(g: &GroupElement, f: &HomogPoly) -> HomogPoly {
    let n1 = f.vars.count;
    assert_eq!(g.0.rows, n1, "group element size does not match the form");
    // (gᵗ x)_i = Σ_j g[j][i] x_j
    let forms: Vec<HomogPoly> = (0..n1)
        .map(|i| {
            let mut l = HomogPoly::zero(f.vars, 1, f.kind);
            for j in 0..n1 {
                l = l.add(&HomogPoly::var(f.vars, j, f.kind).scale(g.0.at(j, i)));
            }
            l
        })
        .collect();
    f.substitute(&forms)
        .expect("linear substitution cannot mismatch")
}

/// Matrix of the induced action `Z ↦ g Z gᵗ` on `SymCoords` coordinate
/// vectors. Satisfies `rho_of(g1·g2) = rho_of(g1)·rho_of(g2)` and
/// `rho_of(s·g) = s²·rho_of(g)`.
pub fn rho_of(g: &GroupElement) -> ExactMatrix {
    let n = g.n();
    let sc = SymCoords::new(n);
    let m = sc.num_coords();
    let kind = g.0.kind();
    let mut out = ExactMatrix::zero(m, m, kind);
    for (col, &(k, l)) in sc.pairs().iter().enumerate() {
        for (row, &(i, j)) in sc.pairs().iter().enumerate() {
            // (g E_kl^sym gᵗ)_{ij}
            let v = if k == l {
                g.0.at(i, k).mul(g.0.at(j, k))
            } else {
                g.0.at(i, k)
                    .mul(g.0.at(j, l))
                    .add(&g.0.at(i, l).mul(g.0.at(j, k)))
            };
            out.set(row, col, v);
        }
    }
    out
}

/// Invert [`rho_of`] up to scalar: find `g` with `rho_of(g) ∝ a`.
///
/// The column of `a` indexed by `z_kk` reshapes to a symmetric matrix that
/// must have rank one, factoring as `c_k · u_k u_kᵗ` with `u_k` proportional
/// to column `k` of `g`. The relative column scales are fixed against the
/// mixed columns `(0,l)`, and the candidate is accepted only after an exact
/// `rho_of(g) ∝ a` check. No square roots are taken.
pub fn rho_inverse(a: &ExactMatrix) -> Result<GroupElement> {
    assert_eq!(a.rows, a.cols, "rho_inverse needs a square matrix");
    let kind = a.kind();
    // recover n from N+1 = (n+1)(n+2)/2
    let m = a.rows;
    let n = (0..m)
        .find(|&n: &usize| (n + 1) * (n + 2) / 2 >= m)
        .filter(|&n| (n + 1) * (n + 2) / 2 == m)
        .ok_or_else(|| Error::InvalidInput(format!("{m} is not a symmetric-square dimension")))?;
    let sc = SymCoords::new(n);

    let mut units: Vec<Vec<FieldScalar>> = Vec::new();
    let mut leads: Vec<FieldScalar> = Vec::new();
    for k in 0..=n {
        let col = a.col(sc.index_of(k, k));
        let mk = sc.vec_to_matrix(&col);
        let u = mk.rank1_sym_factor().map_err(|_| {
            Error::NotInRhoImage(format!("column z_{k}{k} does not reshape to rank one"))
        })?;
        let i0 = (0..=n).find(|&i| !u[i].is_zero()).unwrap();
        let c = mk.at(i0, i0).div(&u[i0].mul(&u[i0]));
        units.push(u);
        leads.push(c);
    }

    // g columns are t_k·u_k with t_0 = 1; each t_l is read off the mixed
    // column (0, l): nu*C_{0l} = t_0 t_l (u_0 u_lᵗ + u_l u_0ᵗ).
    let nu = leads[0].inv();
    let mut scales = vec![kind.one()];
    for l in 1..=n {
        let col = a.col(sc.index_of(0, l));
        let c0l = sc.vec_to_matrix(&col);
        let mut t: Option<FieldScalar> = None;
        'outer: for i in 0..=n {
            for j in 0..=n {
                let outer = units[0][i]
                    .mul(&units[l][j])
                    .add(&units[l][i].mul(&units[0][j]));
                if !outer.is_zero() {
                    t = Some(nu.mul(c0l.at(i, j)).div(&outer));
                    break 'outer;
                }
            }
        }
        let t =
            t.ok_or_else(|| Error::NotInRhoImage(format!("mixed column (0,{l}) is inconsistent")))?;
        scales.push(t);
    }

    let mut gm = ExactMatrix::zero(n + 1, n + 1, kind);
    for k in 0..=n {
        for i in 0..=n {
            gm.set(i, k, scales[k].mul(&units[k][i]));
        }
    }
    let g = GroupElement::new(gm)
        .map_err(|_| Error::NotInRhoImage("candidate matrix is singular".into()))?;
    if !matrices_proportional(&rho_of(&g), a) {
        return Err(Error::NotInRhoImage("final verification failed".into()));
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::monomial_basis;
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
    fn sym_coords_order() {
        let sc = SymCoords::new(2);
        assert_eq!(
            sc.pairs(),
            &[(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)]
        );
        assert_eq!(sc.big_n(), 5);
        assert_eq!(sc.index_of(2, 1), sc.index_of(1, 2));
    }

    #[test]
    fn form_vec_round_trip() {
        let sc = SymCoords::new(2);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10 {
            let v: Vec<FieldScalar> = (0..6).map(|_| Q.from_i64(rng.gen_range(-9..=9))).collect();
            let f = sc.vec_to_form(&v);
            assert_eq!(sc.form_to_vec(&f), v);
            let m = sc.vec_to_matrix(&v);
            assert_eq!(sc.matrix_to_vec(&m), v);
        }
    }

    #[test]
    fn hessian_matrix_examples() {
        let vx = VarSet::x(3);
        let fermat = HomogPoly::parse("x0^3+x1^3+x2^3", vx, Q).unwrap();
        let h = hessian_matrix(&fermat);
        for i in 0..3 {
            for j in 0..3 {
                if i == j {
                    assert_eq!(h.at(i, j).to_string(), format!("6*x{i}"));
                } else {
                    assert!(h.at(i, j).is_zero());
                }
            }
        }

        let v2 = VarSet::x(2);
        let f = HomogPoly::parse("x0*x1", v2, Q).unwrap();
        let h = hessian_matrix(&f);
        assert!(h.at(0, 0).is_zero());
        assert_eq!(h.at(0, 1).to_string(), "1");
        assert_eq!(h.at(1, 0).to_string(), "1");
        assert!(h.at(1, 1).is_zero());

        let f = HomogPoly::parse("x0^4+x1^4", v2, Q).unwrap();
        let h = hessian_matrix(&f);
        assert_eq!(h.at(0, 0).to_string(), "12*x0^2");
        assert!(h.at(0, 1).is_zero());
        assert_eq!(h.at(1, 1).to_string(), "12*x1^2");
    }

    #[test]
    fn hessian_map_forms_examples() {
        let v2 = VarSet::x(2);
        let f = HomogPoly::parse("x0^3+x1^3", v2, Q).unwrap();
        let h = hessian_map_forms(&f);
        assert_eq!(h.forms[0].to_string(), "6*x0");
        assert!(h.forms[1].is_zero());
        assert_eq!(h.forms[2].to_string(), "6*x1");

        let vx = VarSet::x(3);
        let fermat = HomogPoly::parse("x0^3+x1^3+x2^3", vx, Q).unwrap();
        let h = hessian_map_forms(&fermat);
        let sc = SymCoords::new(2);
        for (k, &(i, j)) in sc.pairs().iter().enumerate() {
            assert_eq!(h.forms[k].is_zero(), i != j);
        }

        // quadratic F: the constant tuple is the Gram matrix
        let q = HomogPoly::parse("x0^2 + 4*x0*x1 + x1^2", v2, Q).unwrap();
        let h = hessian_map_forms(&q);
        assert_eq!(h.degree(), 0);
        let consts: Vec<String> = h.forms.iter().map(|f| f.to_string()).collect();
        assert_eq!(consts, vec!["2", "4", "2"]);
    }

    #[test]
    fn gradient_span_examples() {
        let vx = VarSet::x(3);
        let f = HomogPoly::parse("x0*x1*x2", vx, Q).unwrap();
        let s = gradient_span(&f);
        assert_eq!(s.dim(), 3);
        assert!(s.contains(&HomogPoly::parse("x1*x2", vx, Q).unwrap()));
        assert!(s.contains(&HomogPoly::parse("x0*x2", vx, Q).unwrap()));
        assert!(s.contains(&HomogPoly::parse("x0*x1", vx, Q).unwrap()));
        assert!(!s.contains(&HomogPoly::parse("x0^2", vx, Q).unwrap()));

        let g = HomogPoly::parse("x0^3", vx, Q).unwrap();
        assert_eq!(gradient_span(&g).dim(), 1);

        let fermat = HomogPoly::parse("x0^3+x1^3+x2^3", vx, Q).unwrap();
        assert_eq!(gradient_span(&fermat).dim(), 3);
    }

    #[test]
    fn act_examples() {
        let vx = VarSet::x(3);
        let f = HomogPoly::parse("x0^3", vx, Q).unwrap();
        let id = GroupElement::from_i64(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]], Q).unwrap();
        assert_eq!(act(&id, &f), f);

        let swap = GroupElement::from_i64(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]], Q).unwrap();
        assert_eq!(act(&swap, &f).to_string(), "x1^3");
    }

    #[test]
    fn act_is_group_action() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let vx = VarSet::x(3);
        for _ in 0..10 {
            let f = random_poly(vx, 3, &mut rng);
            let g1 = GroupElement::random(2, Q, &mut rng);
            let g2 = GroupElement::random(2, Q, &mut rng);
            let prod = GroupElement::new(g1.0.mat_mul(&g2.0)).unwrap();
            assert_eq!(act(&prod, &f), act(&g1, &act(&g2, &f)));
            assert_eq!(act(&g1.inverse(), &act(&g1, &f)), f);
        }
    }

    #[test]
    fn rho_of_examples() {
        let id = GroupElement::from_i64(&[&[1, 0], &[0, 1]], Q).unwrap();
        assert_eq!(rho_of(&id), ExactMatrix::identity(3, Q));

        // diag(1,2) acts on (z00, z01, z11) as diag(1,2,4)
        let g = GroupElement::from_i64(&[&[1, 0], &[0, 2]], Q).unwrap();
        let r = rho_of(&g);
        let expect = ExactMatrix::from_i64(&[&[1, 0, 0], &[0, 2, 0], &[0, 0, 4]], Q);
        assert_eq!(r, expect);
    }

    #[test]
    fn rho_of_is_action_on_reshaped_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for n in 1..=3usize {
            let sc = SymCoords::new(n);
            for _ in 0..10 {
                let g = GroupElement::random(n, Q, &mut rng);
                let v: Vec<FieldScalar> = (0..sc.num_coords())
                    .map(|_| Q.from_i64(rng.gen_range(-9..=9)))
                    .collect();
                let z = sc.vec_to_matrix(&v);
                let gz = g.0.mat_mul(&z).mat_mul(&g.0.transpose());
                assert_eq!(sc.matrix_to_vec(&gz), rho_of(&g).mul_vec(&v));
            }
        }
    }

    #[test]
    fn rho_respects_composition_and_scaling() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let g1 = GroupElement::random(2, Q, &mut rng);
            let g2 = GroupElement::random(2, Q, &mut rng);
            let prod = GroupElement::new(g1.0.mat_mul(&g2.0)).unwrap();
            assert_eq!(rho_of(&prod), rho_of(&g1).mat_mul(&rho_of(&g2)));

            let s = Q.from_i64(3);
            let scaled = GroupElement::new(g1.0.scale(&s)).unwrap();
            assert_eq!(rho_of(&scaled), rho_of(&g1).scale(&s.mul(&s)));
        }
    }

    /// The 6x6 substitution pattern on raw monomial coefficients (first
    /// column a0², 2a0a1, a1², 2a0a2, 2a1a2, a2² for the first row of the
    /// input, in grevlex pair order) is `D · rho_of(Mᵗ) · D⁻¹` up to the
    /// coordinate permutation, where D doubles the mixed coordinates.
    #[test]
    fn rho_matches_monomial_substitution_pattern() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let sc = SymCoords::new(2);
        // grevlex pair order used by the reference data
        let ext_pairs = [(0, 0), (0, 1), (1, 1), (0, 2), (1, 2), (2, 2)];
        for _ in 0..10 {
            let m = GroupElement::random(2, Q, &mut rng);
            // pattern column for pair (k,l): coefficients of (row_k · x)(row_l · x)
            let vx = VarSet::x(3);
            let rows: Vec<HomogPoly> = (0..3)
                .map(|i| {
                    let mut l = HomogPoly::zero(vx, 1, Q);
                    for j in 0..3 {
                        l = l.add(&HomogPoly::var(vx, j, Q).scale(m.0.at(i, j)));
                    }
                    l
                })
                .collect();
            let mut pattern = ExactMatrix::zero(6, 6, Q);
            for (col, &(k, l)) in ext_pairs.iter().enumerate() {
                let prod = rows[k].multiply(&rows[l]);
                for (row, &(i, j)) in ext_pairs.iter().enumerate() {
                    let mut e = vec![0u32; 3];
                    e[i] += 1;
                    e[j] += 1;
                    pattern.set(row, col, prod.coeff(&crate::poly::Monomial(e)));
                }
            }
            // bridge: D * rho_of(Mᵗ) * D⁻¹, permuted into grevlex order
            let r = rho_of(&m.transpose());
            let mut bridged = ExactMatrix::zero(6, 6, Q);
            for (row, &(i, j)) in ext_pairs.iter().enumerate() {
                for (col, &(k, l)) in ext_pairs.iter().enumerate() {
                    let mut v = r.at(sc.index_of(i, j), sc.index_of(k, l)).clone();
                    if i != j {
                        v = v.add(&v);
                    }
                    if k != l {
                        v = v.mul(&Q.from_i64(2).inv());
                    }
                    bridged.set(row, col, v);
                }
            }
            assert_eq!(pattern, bridged);
        }
    }

    #[test]
    fn rho_inverse_identity_and_round_trip() {
        let id3 = ExactMatrix::identity(3, Q);
        let g = rho_inverse(&id3).unwrap();
        assert!(g.proportional(&GroupElement::from_i64(&[&[1, 0], &[0, 1]], Q).unwrap()));

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 1..=3usize {
            for _ in 0..34 {
                let g = GroupElement::random(n, Q, &mut rng);
                let back = rho_inverse(&rho_of(&g)).unwrap();
                assert!(back.proportional(&g), "round trip failed for n={n}");
            }
        }
    }

    #[test]
    fn rho_inverse_rejects_non_image() {
        let mut a = ExactMatrix::identity(3, Q);
        a.set(0, 2, Q.from_i64(1)); // z11-column reshapes to rank 2
        assert!(rho_inverse(&a).is_err());
    }

    #[test]
    fn hessian_of_act_is_conjugated_hessian() {
        // H_{g·F}(x) = g · H_F(gᵗx) · gᵗ, entrywise and exactly.
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let vx = VarSet::x(3);
        for _ in 0..10 {
            let f = random_poly(vx, 3, &mut rng);
            let g = GroupElement::random(2, Q, &mut rng);
            let hf = hessian_matrix(&f);
            let hgf = hessian_matrix(&act(&g, &f));
            let subst: Vec<HomogPoly> = (0..3)
                .map(|i| {
                    let mut l = HomogPoly::zero(vx, 1, Q);
                    for j in 0..3 {
                        l = l.add(&HomogPoly::var(vx, j, Q).scale(g.0.at(j, i)));
                    }
                    l
                })
                .collect();
            for i in 0..3 {
                for j in 0..3 {
                    let mut acc = HomogPoly::zero(vx, 1, Q);
                    for k in 0..3 {
                        for l in 0..3 {
                            let scaled = hf
                                .at(k, l)
                                .substitute(&subst)
                                .unwrap()
                                .scale(&g.0.at(i, k).mul(g.0.at(j, l)));
                            acc = acc.add(&scaled);
                        }
                    }
                    assert_eq!(acc, *hgf.at(i, j));
                }
            }
        }
    }

    #[test]
    fn equivariance_of_hessian_map() {
        // hessian_map_forms(act(g,F)) = rho_of(g) · (hessian_map_forms(F) ∘ gᵗ)
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (n, d) in [(1usize, 3u32), (2, 3), (2, 4), (3, 3)] {
            let vx = VarSet::x(n + 1);
            for _ in 0..5 {
                let f = random_poly(vx, d, &mut rng);
                let g = GroupElement::random(n, Q, &mut rng);
                let lhs = hessian_map_forms(&act(&g, &f));
                let hf = hessian_map_forms(&f);
                let composed: Vec<HomogPoly> = hf.forms.iter().map(|q| act(&g, q)).collect();
                let r = rho_of(&g);
                for (row, lf) in lhs.forms.iter().enumerate() {
                    let mut acc = HomogPoly::zero(vx, d - 2, Q);
                    for (col, cf) in composed.iter().enumerate() {
                        acc = acc.add(&cf.scale(r.at(row, col)));
                    }
                    assert_eq!(&acc, lf);
                }
            }
        }
    }

    #[test]
    fn gradient_span_equals_hessian_image_of_basis_points() {
        // 2·∂F/∂x_i, as a symmetric matrix, is h_F evaluated at e_i.
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let vx = VarSet::x(3);
        let sc = SymCoords::new(2);
        for _ in 0..10 {
            let f = random_poly(vx, 3, &mut rng);
            let h = hessian_map_forms(&f);
            let mut forms = Vec::new();
            for i in 0..3 {
                let mut e = vec![Q.zero(); 3];
                e[i] = Q.one();
                forms.push(sc.vec_to_form(&h.apply(&e)));
            }
            let span = GradedSubspace::from_forms(vx, 2, Q, forms);
            assert!(span.equals(&gradient_span(&f)));
        }
    }
}
