//! Diagonal forms `F_λ = Σ λ_i x_i^d` and their Hessian data.
//!
//! The Hessian matrix of a diagonal form is diagonal, so its Hessian map
//! factors through the monomial map `h_λ : x ↦ [λ_0 x_0^(d-2), …]` into the
//! diagonal coordinates. The image of `V(F_λ)` is a hypersurface there, cut
//! by a single form `F̃_λ` of degree `d(d-2)^(k-2)` for odd `d` and
//! `d(d-2)^(k-2)/2^(k-1)` for even `d` (`k` = number of variables). For odd
//! `d` the `2^(k-1)` sign classes of `λ` share one image hypersurface and
//! exhaust its preimages; for even `d` the form itself is the only one.

use crate::forward::sample_point_on_hypersurface;
use crate::linalg::{ExactMatrix, FieldKind, FieldScalar};
use crate::poly::{monomial_basis, HomogPoly, Monomial, VarSet};
use crate::symsq::ProjMap;
use crate::{Error, Result};

/// `F_λ = Σ λ_i x_i^d` in `k` variables, `λ_i ≠ 0`, considered
/// projectively.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalForm {
    pub d: u32,
    pub lambda: Vec<FieldScalar>,
}

impl DiagonalForm {
    pub fn new(d: u32, lambda: Vec<FieldScalar>) -> Result<DiagonalForm> {
        if d < 3 {
            return Err(Error::InvalidInput(
                "diagonal forms need degree at least 3".into(),
            ));
        }
        if lambda.len() < 2 {
            return Err(Error::InvalidInput("need at least two variables".into()));
        }
        if lambda.iter().any(|v| v.is_zero()) {
            return Err(Error::InvalidInput(
                "diagonal coefficients must be nonzero".into(),
            ));
        }
        Ok(DiagonalForm { d, lambda })
    }

    pub fn k(&self) -> usize {
        self.lambda.len()
    }

    pub fn kind(&self) -> FieldKind {
        self.lambda[0].kind()
    }

    /// The polynomial `Σ λ_i x_i^d`.
    pub fn as_poly(&self) -> HomogPoly {
        let k = self.k();
        let vx = VarSet::x(k);
        let mut f = HomogPoly::zero(vx, self.d, self.kind());
        for (i, c) in self.lambda.iter().enumerate() {
            let mut e = vec![0u32; k];
            e[i] = self.d;
            f.add_term(Monomial(e), c.clone());
        }
        f
    }

    /// Projective equality of coefficient vectors.
    pub fn proportional(&self, other: &DiagonalForm) -> bool {
        self.d == other.d && self.k() == other.k() && {
            let r = other.lambda[0].div(&self.lambda[0]);
            self.lambda
                .iter()
                .zip(&other.lambda)
                .all(|(a, b)| a.mul(&r) == *b)
        }
    }
}

/// The monomial map `h_λ : [x_0, …, x_{k-1}] ↦ [λ_0 x_0^(d-2), …]` into the
/// diagonal coordinates of the symmetric square. The Hessian map of `F_λ`
/// is this map up to the global scalar `d(d-1)`.
pub fn h_lambda(f: &DiagonalForm) -> ProjMap {
    let k = f.k();
    let vx = VarSet::x(k);
    let forms = f
        .lambda
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let mut e = vec![0u32; k];
            e[i] = f.d - 2;
            HomogPoly::monomial(vx, Monomial(e), c.clone())
        })
        .collect();
    ProjMap::new(forms)
}

/// Degree of the image hypersurface `F̃_λ`: `d(d-2)^(k-2)` for odd `d`,
/// `d(d-2)^(k-2)/2^(k-1)` for even `d`.
pub fn image_degree(d: u32, k: usize) -> u32 {
    let power = (d - 2).pow(k as u32 - 2);
    if d % 2 == 1 {
        d * power
    } else {
        let num = d as u64 * power as u64;
        let den = 1u64 << (k - 1);
        debug_assert_eq!(
            num % den,
            0,
            "even-degree image formula must divide exactly"
        );
        (num / den) as u32
    }
}

/// Default cap on the image degree.
pub const DEFAULT_IMAGE_DEGREE_BUDGET: u32 = 20;

/// The unique (up to scalar) form `Q` of degree [`image_degree`] in the `k`
/// diagonal coordinates with `Q ∘ h_λ ∈ ⟨F_λ⟩`, computed as a kernel that
/// is required to be one-dimensional.
pub fn image_polynomial(f: &DiagonalForm, budget: u32) -> Result<HomogPoly> {
    let k = f.k();
    let kind = f.kind();
    let dt = image_degree(f.d, k);
    if dt > budget {
        return Err(Error::DegreeBudget { needed: dt, budget });
    }
    let zv = VarSet::z(k);
    let h = h_lambda(f);
    let fp = f.as_poly();
    let vx = VarSet::x(k);

    let zmons = monomial_basis(zv, dt);
    let target = dt * (f.d - 2);
    let xmons = monomial_basis(vx, target);
    let mut cols: Vec<Vec<FieldScalar>> = Vec::new();
    for m in &zmons {
        let q = HomogPoly::monomial(zv, m.clone(), kind.one());
        cols.push(
            q.substitute(&h.forms)
                .expect("diagonal map components share a degree")
                .coeff_vector(),
        );
    }
    if target >= f.d {
        for m in monomial_basis(vx, target - f.d) {
            let prod = fp.multiply(&HomogPoly::monomial(vx, m, kind.one()));
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
    // project the kernel onto the Q-coordinates
    let rows: Vec<Vec<FieldScalar>> = (0..ker.cols)
        .map(|c| (0..zmons.len()).map(|r| ker.at(r, c).clone()).collect())
        .collect();
    let proj = crate::forward::GradedSubspace::from_rows(zv, dt, kind, rows);
    if proj.dim() != 1 {
        return Err(Error::KernelNotUnique(proj.dim()));
    }
    Ok(proj.basis_forms().remove(0).normalized())
}

/// The full fiber of the Hessian correspondence over the image data of
/// `F_λ`: for odd `d` the `2^(k-1)` sign classes (each verified to share
/// the image polynomial), for even `d` the form itself. A random non-sign
/// perturbation is checked to fail the image equality as a negative
/// control.
pub fn fiber_enumerate(
    f: &DiagonalForm,
    budget: u32,
    rng: &mut impl rand::Rng,
) -> Result<Vec<DiagonalForm>> {
    let k = f.k();
    let kind = f.kind();
    let reference = image_polynomial(f, budget)?;
    let mut fiber = Vec::new();
    if f.d % 2 == 1 {
        for mask in 0..(1u32 << (k - 1)) {
            // sign vectors normalized so the first entry is +1
            let lambda: Vec<FieldScalar> = f
                .lambda
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    if i > 0 && (mask >> (i - 1)) & 1 == 1 {
                        c.neg()
                    } else {
                        c.clone()
                    }
                })
                .collect();
            let cand = DiagonalForm { d: f.d, lambda };
            let img = image_polynomial(&cand, budget)?;
            if !img.proportional(&reference) {
                return Err(Error::VerificationFailed(format!(
                    "sign class {mask:b} does not share the image hypersurface"
                )));
            }
            fiber.push(cand);
        }
    } else {
        fiber.push(f.clone());
    }

    // negative control: scale one coefficient by a random non-unit factor
    let idx = rng.gen_range(0..k);
    let factor = kind.from_i64(rng.gen_range(2..=5));
    let mut lambda = f.lambda.clone();
    lambda[idx] = lambda[idx].mul(&factor);
    let perturbed = DiagonalForm { d: f.d, lambda };
    match image_polynomial(&perturbed, budget) {
        Ok(img) => {
            if img.proportional(&reference) {
                return Err(Error::VerificationFailed(
                    "a non-sign perturbation shares the image hypersurface".into(),
                ));
            }
        }
        Err(Error::KernelNotUnique(_)) => {}
        Err(e) => return Err(e),
    }
    Ok(fiber)
}

/// Sampled consistency over a prime field: points of `V(F_λ)` map under
/// `h_λ` to zeros of the image polynomial.
pub fn check_image_on_samples(
    f: &DiagonalForm,
    budget: u32,
    samples: usize,
    rng: &mut impl rand::Rng,
) -> Result<()> {
    let img = image_polynomial(f, budget)?;
    let fp = f.as_poly();
    let h = h_lambda(f);
    for _ in 0..samples {
        let q = sample_point_on_hypersurface(&fp, rng)?;
        let z = h.apply(&q);
        if !img.evaluate(&z).is_zero() {
            return Err(Error::VerificationFailed(
                "a sampled image point misses the image hypersurface".into(),
            ));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const Q: FieldKind = FieldKind::Rational;

    fn ones(d: u32, k: usize) -> DiagonalForm {
        DiagonalForm::new(d, vec![Q.one(); k]).unwrap()
    }

    #[test]
    fn h_lambda_examples() {
        let f = ones(3, 3);
        let h = h_lambda(&f);
        assert_eq!(h.degree(), 1);
        assert_eq!(h.forms[0].to_string(), "x0");
        assert_eq!(h.forms[2].to_string(), "x2");

        let g = DiagonalForm::new(5, vec![Q.one(), Q.from_i64(-1)]).unwrap();
        let h = h_lambda(&g);
        assert_eq!(h.forms[0].to_string(), "x0^3");
        assert_eq!(h.forms[1].to_string(), "-x1^3");
    }

    #[test]
    fn h_lambda_is_the_diagonal_of_the_hessian_map() {
        // for λ = 1 the Hessian map of Σ x_i^d restricted to the diagonal
        // coordinates is proportional to h_λ, and the mixed entries vanish
        let f = ones(4, 3);
        let h = h_lambda(&f);
        let full = crate::symsq::hessian_map_forms(&f.as_poly());
        let sc = crate::symsq::SymCoords::new(2);
        for (idx, &(i, j)) in sc.pairs().iter().enumerate() {
            if i == j {
                assert!(full.forms[idx].proportional(&h.forms[i]));
            } else {
                assert!(full.forms[idx].is_zero());
            }
        }
    }

    #[test]
    fn image_degree_formula() {
        assert_eq!(image_degree(3, 2), 3);
        assert_eq!(image_degree(3, 3), 3);
        assert_eq!(image_degree(4, 2), 2);
        assert_eq!(image_degree(4, 3), 2);
        assert_eq!(image_degree(5, 2), 5);
    }

    #[test]
    fn image_polynomial_fermat_cubic() {
        let f = ones(3, 3);
        let img = image_polynomial(&f, 20).unwrap();
        let zv = VarSet::z(3);
        let expect = HomogPoly::parse("z0^3 + z1^3 + z2^3", zv, Q).unwrap();
        assert!(img.proportional(&expect));
    }

    #[test]
    fn image_polynomial_even_quartic() {
        let f = ones(4, 2);
        let img = image_polynomial(&f, 20).unwrap();
        assert_eq!(img.degree, 2);
        let zv = VarSet::z(2);
        let expect = HomogPoly::parse("z0^2 + z1^2", zv, Q).unwrap();
        assert!(img.proportional(&expect));
    }

    #[test]
    fn image_polynomial_quintic_binary() {
        let f = ones(5, 2);
        let img = image_polynomial(&f, 20).unwrap();
        assert_eq!(img.degree, 5);
        // the image form has the cubes of the original roots: z0^5 + z1^5
        let zv = VarSet::z(2);
        let expect = HomogPoly::parse("z0^5 + z1^5", zv, Q).unwrap();
        assert!(img.proportional(&expect));
    }

    #[test]
    fn degree_budget_is_enforced() {
        let f = ones(5, 2);
        assert!(matches!(
            image_polynomial(&f, 4),
            Err(Error::DegreeBudget {
                needed: 5,
                budget: 4
            })
        ));
    }

    #[test]
    fn degrees_match_the_formula_for_the_named_cases() {
        for (d, k) in [(3u32, 2usize), (3, 3), (4, 2), (4, 3), (5, 2)] {
            let f = ones(d, k);
            let img = image_polynomial(&f, 20).unwrap();
            assert_eq!(img.degree, image_degree(d, k), "(d,k) = ({d},{k})");
        }
    }

    #[test]
    fn sign_classes_share_the_image() {
        let f = DiagonalForm::new(3, vec![Q.from_i64(2), Q.from_i64(-3), Q.from_i64(5)]).unwrap();
        let reference = image_polynomial(&f, 20).unwrap();
        for mask in 0..4u32 {
            let lambda: Vec<FieldScalar> = f
                .lambda
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    if i > 0 && (mask >> (i - 1)) & 1 == 1 {
                        c.neg()
                    } else {
                        c.clone()
                    }
                })
                .collect();
            let g = DiagonalForm { d: 3, lambda };
            assert!(image_polynomial(&g, 20).unwrap().proportional(&reference));
        }
    }

    #[test]
    fn fiber_cardinalities() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(fiber_enumerate(&ones(3, 3), 20, &mut rng).unwrap().len(), 4);
        assert_eq!(fiber_enumerate(&ones(5, 2), 20, &mut rng).unwrap().len(), 2);
        assert_eq!(fiber_enumerate(&ones(4, 2), 20, &mut rng).unwrap().len(), 1);
        assert_eq!(fiber_enumerate(&ones(4, 3), 20, &mut rng).unwrap().len(), 1);
    }

    #[test]
    fn quintic_fiber_contains_the_sign_twin() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let f = ones(5, 2);
        let fiber = fiber_enumerate(&f, 20, &mut rng).unwrap();
        let twin = DiagonalForm::new(5, vec![Q.one(), Q.from_i64(-1)]).unwrap();
        assert!(fiber.iter().any(|g| g.proportional(&f)));
        assert!(fiber.iter().any(|g| g.proportional(&twin)));
    }

    #[test]
    fn separation_of_non_sign_scalings() {
        let f = ones(3, 3);
        let reference = image_polynomial(&f, 20).unwrap();
        let mu = DiagonalForm::new(3, vec![Q.from_i64(2), Q.one(), Q.one()]).unwrap();
        let other = image_polynomial(&mu, 20).unwrap();
        assert!(!other.proportional(&reference));
    }

    #[test]
    fn sampled_points_map_into_the_image_hypersurface() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = crate::forward::DEFAULT_PRIME;
        let kind = FieldKind::Prime(p);
        let f = DiagonalForm::new(
            3,
            vec![kind.from_i64(1), kind.from_i64(2), kind.from_i64(-5)],
        )
        .unwrap();
        check_image_on_samples(&f, 20, 200, &mut rng).unwrap();
    }
}
