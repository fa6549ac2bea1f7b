//! Degree-3 recovery.
//!
//! For `n ≥ 2` a cubic is recovered from the linear span of its Hessian
//! variety: the span `P(E)` is intersected with the space `W` of gradient
//! tuples inside `(S²V)^{n+1}`, the intersection is required to be a single
//! projective point, and the cubic is reassembled by the Euler relation.
//!
//! For `n = 1` the fiber over a three-point configuration is computed from
//! rank-one conditions on the induced symmetric-square action, with roots
//! taken in an explicit quadratic (or biquadratic) extension; the companion
//! closed forms are the rational involution `iota` and its 2×2 matrix `psi`.

use crate::forward::{ideal_graded_piece_unchecked, linear_span, HessianVarietyModel};
use crate::linalg::{ExactMatrix, FieldKind, FieldScalar};
use crate::poly::{HomogPoly, Monomial, VarSet};
use crate::symsq::SymCoords;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

// ---------------------------------------------------------------------------
// The space W of gradient tuples
// ---------------------------------------------------------------------------

/// The linear subspace `W ⊂ (S²V)^{n+1}` of gradient tuples, stored through
/// its defining equations on the coordinates `u_{i,j}^l` (`l` = summand,
/// `(i,j)` = symmetric pair). `W` is isomorphic to the space of cubics via
/// `F ↦ (∂F/∂x_0, …, ∂F/∂x_n)`.
pub struct WSpace {
    pub n: usize,
    sc: SymCoords,
    /// each equation says `u[a] = u[b]` in flat coordinates
    equalities: Vec<(usize, usize)>,
}

impl WSpace {
    pub fn new(n: usize) -> WSpace {
        let sc = SymCoords::new(n);
        let m = sc.num_coords();
        let flat = |l: usize, i: usize, j: usize| l * m + sc.index_of(i, j);
        let mut equalities = Vec::new();
        for i in 0..=n {
            for j in i + 1..=n {
                // u_{i,j}^i = u_{i,i}^j  and  u_{i,j}^j = u_{j,j}^i
                equalities.push((flat(i, i, j), flat(j, i, i)));
                equalities.push((flat(j, i, j), flat(i, j, j)));
            }
        }
        for i in 0..=n {
            for j in i + 1..=n {
                for l in j + 1..=n {
                    // u_{i,j}^l = u_{i,l}^j = u_{j,l}^i
                    equalities.push((flat(l, i, j), flat(j, i, l)));
                    equalities.push((flat(j, i, l), flat(i, j, l)));
                }
            }
        }
        WSpace { n, sc, equalities }
    }

    /// Number of flat coordinates `(n+1)·(N+1)`.
    pub fn num_coords(&self) -> usize {
        (self.n + 1) * self.sc.num_coords()
    }

    pub fn equalities(&self) -> &[(usize, usize)] {
        &self.equalities
    }

    /// Basis of `W` as kernel columns in the flat coordinates.
    pub fn basis(&self, kind: FieldKind) -> ExactMatrix {
        let cols = self.num_coords();
        let mut rows = Vec::new();
        for &(a, b) in &self.equalities {
            let mut r = vec![kind.zero(); cols];
            r[a] = kind.one();
            r[b] = kind.from_i64(-1);
            rows.push(r);
        }
        ExactMatrix::from_rows(rows, kind).kernel()
    }

    /// Flat coordinate vector of the gradient tuple of a cubic.
    pub fn embed_cubic(&self, f: &HomogPoly) -> Vec<FieldScalar> {
        assert_eq!(f.degree, 3);
        assert_eq!(f.vars.count, self.n + 1);
        let mut out = Vec::new();
        for l in 0..=self.n {
            out.extend(self.sc.form_to_vec(&f.partial_derivative(l)));
        }
        out
    }

    /// Intersect `W` with the `(n+1)`-fold direct sum of the space cut out
    /// by the given linear conditions on `S²V` (each condition is a
    /// coefficient vector over the `N+1` symmetric coordinates).
    /// Returns the kernel basis, columns = intersection basis.
    pub fn intersect_summandwise(
        &self,
        conditions: &[Vec<FieldScalar>],
        kind: FieldKind,
    ) -> ExactMatrix {
        let m = self.sc.num_coords();
        let cols = self.num_coords();
        let mut rows = Vec::new();
        for &(a, b) in &self.equalities {
            let mut r = vec![kind.zero(); cols];
            r[a] = kind.one();
            r[b] = kind.from_i64(-1);
            rows.push(r);
        }
        for l in 0..=self.n {
            for cond in conditions {
                assert_eq!(cond.len(), m);
                let mut r = vec![kind.zero(); cols];
                for (k, c) in cond.iter().enumerate() {
                    r[l * m + k] = c.clone();
                }
                rows.push(r);
            }
        }
        ExactMatrix::from_rows(rows, kind).kernel()
    }

    /// Reassemble `Σ x_l · F_l` from a flat coordinate vector.
    pub fn euler_assemble(&self, flat: &[FieldScalar], kind: FieldKind) -> HomogPoly {
        let m = self.sc.num_coords();
        let vx = self.sc.xvars();
        let mut f = HomogPoly::zero(vx, 3, kind);
        for l in 0..=self.n {
            let block = &flat[l * m..(l + 1) * m];
            let quad = self.sc.vec_to_form(block);
            f = f.add(&HomogPoly::var(vx, l, kind).multiply(&quad));
        }
        f
    }
}

// ---------------------------------------------------------------------------
// Algorithm for n >= 2
// ---------------------------------------------------------------------------

/// Recover the unique cubic whose Hessian variety has the given ideal
/// generators. The degree-one generators determine the span `P(E)`; the
/// intersection `W ∩ P(E^{⊕(n+1)})` must be a single point, which is
/// reassembled by the Euler relation and then verified against the input.
pub fn recover_cubic(gens: &[HomogPoly], n: usize) -> Result<HomogPoly> {
    assert!(n >= 2, "the linear-span recovery needs n >= 2");
    if gens.is_empty() {
        return Err(Error::InvalidInput("no generators".into()));
    }
    let kind = gens[0].kind;
    let sc = SymCoords::new(n);
    let zv = sc.zvars();
    for g in gens {
        assert_eq!(g.vars, zv, "generators must live in the z-coordinates");
    }

    let span = linear_span(gens);
    let conditions: Vec<Vec<FieldScalar>> = span
        .basis_forms()
        .iter()
        .map(|f| f.coeff_vector())
        .collect();
    let w = WSpace::new(n);
    let ker = w.intersect_summandwise(&conditions, kind);
    match ker.cols {
        0 => return Err(Error::EmptyFiber),
        1 => {}
        k => return Err(Error::NotUnique(k)),
    }
    let flat = ker.col(0);
    let f = w.euler_assemble(&flat, kind).normalized();
    if f.is_zero() {
        return Err(Error::EmptyFiber);
    }

    // Round-trip verification: the recovered cubic must reproduce the
    // degree-one piece and every generator must vanish on its Hessian
    // variety.
    let piece1 = ideal_graded_piece_unchecked(&f, 1);
    if !piece1.equals(&span) {
        return Err(Error::VerificationFailed(
            "degree-one piece of the recovered cubic differs from the input span".into(),
        ));
    }
    for g in gens {
        if !crate::forward::membership_test(g, &f) {
            return Err(Error::VerificationFailed(format!(
                "generator `{g}` does not vanish on the recovered Hessian variety"
            )));
        }
    }
    Ok(f)
}

/// Convenience wrapper taking a graded model: the generators are the basis
/// forms of all stored pieces.
pub fn recover_cubic_from_model(model: &HessianVarietyModel) -> Result<HomogPoly> {
    let gens: Vec<HomogPoly> = model
        .pieces
        .values()
        .flat_map(|p| p.basis_forms())
        .collect();
    recover_cubic(&gens, model.n)
}

/// Uniqueness probe for the extended spaces `Γ_{l,k}`: returns whether
/// `W ∩ P(Γ_{l,k}^{⊕(n+1)})` is a single projective point.
///
/// For `l ≥ 3` the space is cut out by `Z_{i,i} = Z_{i+1,i+2}` (`i ≤ l-2`),
/// `Z_{l-1,l-1} = Z_{0,l}`, `Z_{l,l} = Z_{0,1}`, and the vanishing of every
/// coordinate outside the allowed support. For `l = 2` it is the span of
/// `{x1x2, x0x2, x0x1, x0x3, …, x0xk}`.
pub fn gamma_lk_uniqueness(l: usize, k: usize, n: usize) -> bool {
    assert!((2..=k).contains(&l) && k <= n, "need 2 <= l <= k <= n");
    let kind = FieldKind::Rational;
    let sc = SymCoords::new(n);
    let m = sc.num_coords();
    let mut conditions: Vec<Vec<FieldScalar>> = Vec::new();
    let eq = |a: usize, b: Option<usize>, conds: &mut Vec<Vec<FieldScalar>>| {
        let mut r = vec![kind.zero(); m];
        r[a] = kind.one();
        if let Some(b) = b {
            r[b] = kind.from_i64(-1);
        }
        conds.push(r);
    };

    let mut allowed: Vec<(usize, usize)> = Vec::new();
    if l == 2 {
        allowed.extend([(0, 1), (0, 2), (1, 2)]);
        allowed.extend((3..=k).map(|j| (0, j)));
    } else {
        allowed.extend((0..=l).map(|i| (i, i)));
        allowed.extend((0..l).map(|i| (i, i + 1)));
        allowed.push((0, l));
        allowed.extend((l + 1..=k).map(|j| (0, j)));
        // Z_{i,i} = Z_{i+1,i+2} for i <= l-2
        for i in 0..=l - 2 {
            eq(
                sc.index_of(i, i),
                Some(sc.index_of(i + 1, i + 2)),
                &mut conditions,
            );
        }
        // Z_{l-1,l-1} = Z_{0,l} and Z_{l,l} = Z_{0,1}
        eq(
            sc.index_of(l - 1, l - 1),
            Some(sc.index_of(0, l)),
            &mut conditions,
        );
        eq(sc.index_of(l, l), Some(sc.index_of(0, 1)), &mut conditions);
    }
    for &(i, j) in sc.pairs() {
        if !allowed.contains(&(i, j)) {
            eq(sc.index_of(i, j), None, &mut conditions);
        }
    }

    let w = WSpace::new(n);
    w.intersect_summandwise(&conditions, kind).cols == 1
}

// ---------------------------------------------------------------------------
// Quadratic-extension scalars
// ---------------------------------------------------------------------------

/// The radicals adjoined to the rationals in one fiber computation: up to
/// two square roots of non-square rationals. When both are present their
/// product is also not a square, so the algebra is a field.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct QuadExtCtx {
    pub d1: Option<BigRational>,
    pub d2: Option<BigRational>,
}

/// An element `a + b√d1 + c√d2 + e√(d1·d2)` with rational components.
/// Components attached to an absent radical are zero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuadExtScalar {
    pub c: [BigRational; 4],
    pub ctx: QuadExtCtx,
}

fn rational_sqrt(d: &BigRational) -> Option<BigRational> {
    if d.is_zero() {
        return Some(BigRational::zero());
    }
    if d.numer().is_negative() {
        return None;
    }
    let ns = d.numer().sqrt();
    let ds = d.denom().sqrt();
    if &(&ns * &ns) == d.numer() && &(&ds * &ds) == d.denom() {
        Some(BigRational::new(ns, ds))
    } else {
        None
    }
}

impl std::fmt::Display for QuadExtScalar {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        let names = ["", "r1", "r2", "r1*r2"];
        for (i, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if i == 0 {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{}", names[i])?;
            } else {
                write!(f, "({c})*{}", names[i])?;
            }
        }
        Ok(())
    }
}

impl QuadExtScalar {
    pub fn zero(ctx: &QuadExtCtx) -> QuadExtScalar {
        QuadExtScalar {
            c: std::array::from_fn(|_| BigRational::zero()),
            ctx: ctx.clone(),
        }
    }

    pub fn from_rational(r: BigRational, ctx: &QuadExtCtx) -> QuadExtScalar {
        let mut s = Self::zero(ctx);
        s.c[0] = r;
        s
    }

    pub fn from_scalar(v: &FieldScalar, ctx: &QuadExtCtx) -> QuadExtScalar {
        match v {
            FieldScalar::Rat(r) => Self::from_rational(r.clone(), ctx),
            _ => panic!("quadratic extensions are built over the rationals"),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|v| v.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        self.c[1].is_zero() && self.c[2].is_zero() && self.c[3].is_zero()
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.c[0]
    }

    fn same_ctx(&self, other: &QuadExtScalar) {
        assert_eq!(self.ctx, other.ctx, "mixed extension contexts");
    }

    pub fn add(&self, other: &QuadExtScalar) -> QuadExtScalar {
        self.same_ctx(other);
        let mut out = self.clone();
        for i in 0..4 {
            out.c[i] = &out.c[i] + &other.c[i];
        }
        out
    }

    pub fn sub(&self, other: &QuadExtScalar) -> QuadExtScalar {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> QuadExtScalar {
        let mut out = self.clone();
        for v in out.c.iter_mut() {
            *v = -v.clone();
        }
        out
    }

    pub fn mul(&self, other: &QuadExtScalar) -> QuadExtScalar {
        self.same_ctx(other);
        let zero = BigRational::zero();
        let d1 = self.ctx.d1.clone().unwrap_or_else(|| zero.clone());
        let d2 = self.ctx.d2.clone().unwrap_or_else(|| zero.clone());
        let [a, b, c, e] = &self.c;
        let [a2, b2, c2, e2] = &other.c;
        let w = a * a2 + &d1 * (b * b2) + &d2 * (c * c2) + &d1 * &d2 * (e * e2);
        let x = a * b2 + b * a2 + &d2 * (c * e2) + &d2 * (e * c2);
        let y = a * c2 + c * a2 + &d1 * (b * e2) + &d1 * (e * b2);
        let z = a * e2 + e * a2 + b * c2 + c * b2;
        QuadExtScalar {
            c: [w, x, y, z],
            ctx: self.ctx.clone(),
        }
    }

    /// Conjugate flipping the sign of `√d2` (and of `√(d1·d2)`).
    fn conj2(&self) -> QuadExtScalar {
        let mut out = self.clone();
        out.c[2] = -out.c[2].clone();
        out.c[3] = -out.c[3].clone();
        out
    }

    /// Conjugate flipping the sign of `√d1` (and of `√(d1·d2)`).
    fn conj1(&self) -> QuadExtScalar {
        let mut out = self.clone();
        out.c[1] = -out.c[1].clone();
        out.c[3] = -out.c[3].clone();
        out
    }

    pub fn inv(&self) -> QuadExtScalar {
        assert!(!self.is_zero(), "division by zero in the extension field");
        // clear √d2 first, then √d1
        let a = self.mul(&self.conj2()); // lies in Q(√d1)
        let b = a.mul(&a.conj1()); // rational
        debug_assert!(b.is_rational());
        let norm = b.rational_part().clone();
        assert!(!norm.is_zero(), "norm vanished; context is not a field");
        let mut out = self.conj2().mul(&a.conj1());
        for v in out.c.iter_mut() {
            *v = v.clone() / &norm;
        }
        out
    }

    pub fn div(&self, other: &QuadExtScalar) -> QuadExtScalar {
        self.mul(&other.inv())
    }
}

/// Square roots of arbitrary rationals, sharing one extension context.
/// The first irrational radical becomes `√d1`; a second one becomes `√d2`
/// unless it is a rational multiple of `√d1`.
pub struct ExtBuilder {
    ctx: QuadExtCtx,
}

impl ExtBuilder {
    pub fn new() -> ExtBuilder {
        ExtBuilder {
            ctx: QuadExtCtx::default(),
        }
    }

    pub fn sqrt(&mut self, d: &BigRational) -> PendingSqrt {
        if let Some(r) = rational_sqrt(d) {
            return PendingSqrt::Rational(r);
        }
        if let Some(d1) = &self.ctx.d1 {
            // maybe √d = t·√d1 with t rational
            if let Some(t) = rational_sqrt(&(d / d1)) {
                return PendingSqrt::Radical1(t);
            }
            if self.ctx.d2.is_none() {
                self.ctx.d2 = Some(d.clone());
                return PendingSqrt::Radical2(BigRational::one());
            }
            let d2 = self.ctx.d2.clone().unwrap();
            if let Some(t) = rational_sqrt(&(d / &d2)) {
                return PendingSqrt::Radical2(t);
            }
            panic!("more than two independent radicals requested");
        }
        self.ctx.d1 = Some(d.clone());
        PendingSqrt::Radical1(BigRational::one())
    }

    /// Freeze the context and realize the pending square roots.
    pub fn finish(self) -> QuadExtCtx {
        self.ctx
    }
}

/// A square root expressed against a not-yet-frozen context.
pub enum PendingSqrt {
    Rational(BigRational),
    /// `t · √d1`
    Radical1(BigRational),
    /// `t · √d2`
    Radical2(BigRational),
}

impl PendingSqrt {
    pub fn realize(&self, ctx: &QuadExtCtx) -> QuadExtScalar {
        let mut s = QuadExtScalar::zero(ctx);
        match self {
            PendingSqrt::Rational(r) => s.c[0] = r.clone(),
            PendingSqrt::Radical1(t) => s.c[1] = t.clone(),
            PendingSqrt::Radical2(t) => s.c[2] = t.clone(),
        }
        s
    }
}

// ---------------------------------------------------------------------------
// The fiber over three plane points (n = 1)
// ---------------------------------------------------------------------------

/// A binary cubic with coefficients in a quadratic extension,
/// `c[i]` = coefficient of `x0^(3-i) x1^i`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExtBinaryCubic {
    pub c: [QuadExtScalar; 4],
}

impl ExtBinaryCubic {
    pub fn normalized(&self) -> ExtBinaryCubic {
        let lead = self.c.iter().find(|v| !v.is_zero()).expect("zero cubic");
        let inv = lead.inv();
        ExtBinaryCubic {
            c: std::array::from_fn(|i| self.c[i].mul(&inv)),
        }
    }

    pub fn is_rational(&self) -> bool {
        self.c.iter().all(|v| v.is_rational())
    }

    /// The rational cubic, when all components are rational.
    pub fn to_poly(&self) -> Option<HomogPoly> {
        if !self.is_rational() {
            return None;
        }
        let vx = VarSet::x(2);
        let mut f = HomogPoly::zero(vx, 3, FieldKind::Rational);
        for (i, v) in self.c.iter().enumerate() {
            f.add_term(
                Monomial(vec![3 - i as u32, i as u32]),
                FieldScalar::Rat(v.rational_part().clone()),
            );
        }
        Some(f)
    }

    pub fn proportional(&self, other: &ExtBinaryCubic) -> bool {
        self.normalized() == other.normalized()
    }
}

fn as_rational(v: &FieldScalar) -> BigRational {
    match v {
        FieldScalar::Rat(r) => r.clone(),
        _ => panic!("fiber computation runs over the rationals"),
    }
}

/// Homogeneous quadratic `α t² + 2β t s + γ s²`: the projective roots
/// `(t : s)`, with the discriminant `β² - αγ` expressed through the
/// extension builder. Returns `None` when the quadratic vanishes
/// identically.
fn quadratic_roots(
    alpha: &BigRational,
    beta: &BigRational,
    gamma: &BigRational,
    builder: &mut ExtBuilder,
) -> Option<Vec<(PendingRoot, PendingRoot)>> {
    if alpha.is_zero() && beta.is_zero() && gamma.is_zero() {
        return None;
    }
    if alpha.is_zero() {
        if beta.is_zero() {
            // γ s² = 0: the double root (1 : 0)
            return Some(vec![(
                PendingRoot::rational(BigRational::one()),
                PendingRoot::rational(BigRational::zero()),
            )]);
        }
        // s·(2β t + γ s) = 0
        return Some(vec![
            (
                PendingRoot::rational(BigRational::one()),
                PendingRoot::rational(BigRational::zero()),
            ),
            (
                PendingRoot::rational(gamma.clone()),
                PendingRoot::rational(-(beta + beta)),
            ),
        ]);
    }
    let disc = beta * beta - alpha * gamma;
    if disc.is_zero() {
        return Some(vec![(
            PendingRoot::rational(-beta.clone()),
            PendingRoot::rational(alpha.clone()),
        )]);
    }
    let s = builder.sqrt(&disc);
    let (minus_beta, alpha) = (-beta.clone(), alpha.clone());
    Some(vec![
        (
            PendingRoot::plus(minus_beta.clone(), s_clone(&s)),
            PendingRoot::rational(alpha.clone()),
        ),
        (
            PendingRoot::minus(minus_beta, s_clone(&s)),
            PendingRoot::rational(alpha),
        ),
    ])
}

fn s_clone(p: &PendingSqrt) -> PendingSqrt {
    match p {
        PendingSqrt::Rational(r) => PendingSqrt::Rational(r.clone()),
        PendingSqrt::Radical1(t) => PendingSqrt::Radical1(t.clone()),
        PendingSqrt::Radical2(t) => PendingSqrt::Radical2(t.clone()),
    }
}

/// `base ± radical`, realized once the context is frozen.
struct PendingRoot {
    base: BigRational,
    radical: Option<(PendingSqrt, bool)>,
}

impl PendingRoot {
    fn rational(r: BigRational) -> PendingRoot {
        PendingRoot {
            base: r,
            radical: None,
        }
    }
    fn plus(base: BigRational, s: PendingSqrt) -> PendingRoot {
        PendingRoot {
            base,
            radical: Some((s, false)),
        }
    }
    fn minus(base: BigRational, s: PendingSqrt) -> PendingRoot {
        PendingRoot {
            base,
            radical: Some((s, true)),
        }
    }
    fn realize(&self, ctx: &QuadExtCtx) -> QuadExtScalar {
        let mut v = QuadExtScalar::from_rational(self.base.clone(), ctx);
        if let Some((s, negate)) = &self.radical {
            let r = s.realize(ctx);
            v = if *negate { v.sub(&r) } else { v.add(&r) };
        }
        v
    }
}

/// The fiber of the degree-3 Hessian correspondence over three distinct
/// plane points: the (at most two) binary cubics whose Hessian
/// configuration is `{p1, p2, p3}`.
///
/// A candidate group element `[[a,b],[c,d]]` must send the reference
/// configuration to `(p1, p2, p3)` under the induced symmetric-square
/// action, which is three rank-one conditions. The points are collinear for
/// configurations in the image, and the kernel vector of the collinearity
/// relation fixes the three row scales up to one global factor; crossing
/// the first-column entries yields one quadratic in `(a, c)`, whose roots
/// live in a quadratic extension, and for each root `(b, d)` solves a
/// linear system. Candidates failing any exact rank-one condition are
/// discarded; point assignments are permuted when the construction
/// degenerates, and a lone surviving cubic is completed with its involution
/// partner.
pub fn fiber_h31(points: &[Vec<FieldScalar>; 3]) -> Result<(ExtBinaryCubic, ExtBinaryCubic)> {
    for p in points {
        assert_eq!(
            p.len(),
            3,
            "points live in the plane of binary symmetric matrices"
        );
        assert!(
            !p.iter().all(|v| v.is_zero()),
            "zero vector is not a projective point"
        );
    }
    // distinctness, projectively
    let prop = |a: &[FieldScalar], b: &[FieldScalar]| {
        let mut ratio: Option<BigRational> = None;
        for (x, y) in a.iter().zip(b) {
            match (x.is_zero(), y.is_zero()) {
                (true, true) => {}
                (true, false) | (false, true) => return false,
                _ => {
                    let r = as_rational(y) / as_rational(x);
                    match &ratio {
                        None => ratio = Some(r),
                        Some(s) => {
                            if *s != r {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        true
    };
    if prop(&points[0], &points[1]) || prop(&points[0], &points[2]) || prop(&points[1], &points[2])
    {
        return Err(Error::DegenerateConfiguration(
            "points are not distinct".into(),
        ));
    }

    // collinearity kernel: kappa with kappa1·p1 + kappa2·p2 + kappa3·p3 = 0
    let col_kernel = |p1: &[BigRational], p2: &[BigRational], p3: &[BigRational]| {
        let rows: Vec<Vec<FieldScalar>> = (0..3)
            .map(|i| {
                vec![
                    FieldScalar::Rat(p1[i].clone()),
                    FieldScalar::Rat(p2[i].clone()),
                    FieldScalar::Rat(p3[i].clone()),
                ]
            })
            .collect();
        let k = ExactMatrix::from_rows(rows, FieldKind::Rational).kernel();
        if k.cols != 1 {
            return None;
        }
        Some(vec![
            as_rational(k.at(0, 0)),
            as_rational(k.at(1, 0)),
            as_rational(k.at(2, 0)),
        ])
    };

    let orders: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let mut found: Vec<ExtBinaryCubic> = Vec::new();
    let push_unique = |cubic: ExtBinaryCubic, found: &mut Vec<ExtBinaryCubic>| {
        if !found.iter().any(|f| f.proportional(&cubic)) {
            found.push(cubic);
        }
    };

    for order in &orders {
        let p1: Vec<BigRational> = points[order[0]].iter().map(as_rational).collect();
        let p2: Vec<BigRational> = points[order[1]].iter().map(as_rational).collect();
        let p3: Vec<BigRational> = points[order[2]].iter().map(as_rational).collect();

        let Some(kappa) = col_kernel(&p1, &p2, &p3) else {
            // non-collinear points are never in the image
            return Err(Error::DegenerateConfiguration(
                "points are not collinear".into(),
            ));
        };
        // row scales: t1 = λ·κ1, t2 = -λ·κ2, t3 = -λ·κ3 for a global λ.
        // First-column entries: a(a-2c) = t1·p10, c(c-2a) = t2·p20,
        // a² - c² = t3·p30. Cross the first two that are usable into one
        // quadratic in (a, c):  α a² + 2β ac + γ c².
        let e1 = &kappa[0] * &p1[0]; // multiplies a(a-2c)
        let e2 = &kappa[1] * &p2[0]; // multiplies c(c-2a)
        let e3 = &kappa[2] * &p3[0]; // multiplies a² - c²
        let two = BigRational::from(BigInt::from(2));
        // candidates for (α, 2β, γ), first nonzero wins:
        //   e2·a(a-2c) + e1·c(c-2a)        = e2 a² - 2(e1+e2) ac + e1 c²
        //   e3·a(a-2c) + e1·(a²-c²)        = (e1+e3) a² - 2 e3 ac - e1 c²
        //   e3·c(c-2a) - e2·(a²-c²)        = -e2 a² - 2 e3 ac + (e2+e3) c²
        let crossings = [
            (e2.clone(), -((&e1 + &e2) * &two), e1.clone()),
            (&e1 + &e3, -(&e3 * &two), -e1.clone()),
            (-e2.clone(), -(&e3 * &two), &e2 + &e3),
        ];
        let usable = crossings
            .iter()
            .find(|(x, y, z)| !(x.is_zero() && y.is_zero() && z.is_zero()));
        let Some((alpha, two_beta, gamma)) = usable else {
            continue;
        };
        let beta = two_beta / &two;

        let mut builder = ExtBuilder::new();
        let Some(ac_roots) = quadratic_roots(alpha, &beta, gamma, &mut builder) else {
            continue;
        };
        let ctx = builder.finish();
        let rat = |r: &BigRational| QuadExtScalar::from_rational(r.clone(), &ctx);

        for (ar, cr) in &ac_roots {
            let a = ar.realize(&ctx);
            let c = cr.realize(&ctx);
            if a.is_zero() && c.is_zero() {
                continue;
            }
            // global scale λ from the first nonzero first-column datum
            let two_e = rat(&two);
            let a_a2c = a.mul(&a.sub(&two_e.mul(&c)));
            let c_c2a = c.mul(&c.sub(&two_e.mul(&a)));
            let aa_cc = a.mul(&a).sub(&c.mul(&c));
            let lambda = if !e1.is_zero() {
                a_a2c.div(&rat(&e1))
            } else if !e2.is_zero() {
                c_c2a.div(&rat(&e2)).neg()
            } else if !e3.is_zero() {
                aa_cc.div(&rat(&e3)).neg()
            } else {
                continue;
            };
            if lambda.is_zero() {
                continue;
            }
            let t1 = lambda.mul(&rat(&kappa[0]));
            let t2 = lambda.mul(&rat(&kappa[1])).neg();
            let t3 = lambda.mul(&rat(&kappa[2])).neg();

            // middle-column entries are linear in (b, d):
            //   (a-c)·b - a·d       = t1·p11
            //   (-c)·b + (c-a)·d    = t2·p21
            //   a·b    - c·d        = t3·p31
            let eqs = [
                (a.sub(&c), a.neg(), t1.mul(&rat(&p1[1]))),
                (c.neg(), c.sub(&a), t2.mul(&rat(&p2[1]))),
                (a.clone(), c.neg(), t3.mul(&rat(&p3[1]))),
            ];
            let mut solution: Option<(QuadExtScalar, QuadExtScalar)> = None;
            'pairs: for i in 0..3 {
                for j in i + 1..3 {
                    let det = eqs[i].0.mul(&eqs[j].1).sub(&eqs[i].1.mul(&eqs[j].0));
                    if det.is_zero() {
                        continue;
                    }
                    let b = eqs[i]
                        .2
                        .mul(&eqs[j].1)
                        .sub(&eqs[i].1.mul(&eqs[j].2))
                        .div(&det);
                    let d = eqs[i]
                        .0
                        .mul(&eqs[j].2)
                        .sub(&eqs[i].2.mul(&eqs[j].0))
                        .div(&det);
                    solution = Some((b, d));
                    break 'pairs;
                }
            }
            let Some((b, d)) = solution else { continue };
            let det = a.mul(&d).sub(&b.mul(&c));
            if det.is_zero() {
                continue;
            }
            if !minors_vanish(&a, &b, &c, &d, &p1, &p2, &p3, &ctx) {
                continue;
            }
            push_unique(candidate_cubic(&a, &b, &c, &d), &mut found);
        }
        if found.len() >= 2 {
            break;
        }
    }

    match found.len() {
        0 => Err(Error::DegenerateConfiguration(
            "no candidate satisfying the rank-one conditions".into(),
        )),
        1 => {
            let first = found[0].normalized();
            let partner = involution_iota_ext(&first.c)
                .map_err(|_| Error::DegenerateConfiguration("involution degenerates".into()))?;
            let partner = ExtBinaryCubic { c: partner }.normalized();
            if partner.proportional(&first) {
                return Err(Error::DegenerateConfiguration(
                    "fiber collapsed to one cubic".into(),
                ));
            }
            Ok((first, partner))
        }
        2 => Ok((found[0].normalized(), found[1].normalized())),
        k => Err(Error::DegenerateConfiguration(format!(
            "{k} distinct candidates survived; configuration is not in the image"
        ))),
    }
}

/// The three rank-one conditions: each row below must be proportional to
/// the corresponding point.
#[allow(clippy::too_many_arguments)]
fn minors_vanish(
    a: &QuadExtScalar,
    b: &QuadExtScalar,
    c: &QuadExtScalar,
    d: &QuadExtScalar,
    p1: &[BigRational],
    p2: &[BigRational],
    p3: &[BigRational],
    ctx: &QuadExtCtx,
) -> bool {
    let two = QuadExtScalar::from_rational(BigRational::from(BigInt::from(2)), ctx);
    // row 1: (a(a-2c), ab-ad-bc, b(b-2d))
    let r1 = [
        a.mul(&a.sub(&two.mul(c))),
        a.mul(b).sub(&a.mul(d)).sub(&b.mul(c)),
        b.mul(&b.sub(&two.mul(d))),
    ];
    // row 2: (c(c-2a), cd-ad-bc, d(d-2b))
    let r2 = [
        c.mul(&c.sub(&two.mul(a))),
        c.mul(d).sub(&a.mul(d)).sub(&b.mul(c)),
        d.mul(&d.sub(&two.mul(b))),
    ];
    // row 3: (a²-c², ab-cd, b²-d²)
    let r3 = [
        a.mul(a).sub(&c.mul(c)),
        a.mul(b).sub(&c.mul(d)),
        b.mul(b).sub(&d.mul(d)),
    ];
    for (row, p) in [(r1, p1), (r2, p2), (r3, p3)] {
        let pv: Vec<QuadExtScalar> = p
            .iter()
            .map(|r| QuadExtScalar::from_rational(r.clone(), ctx))
            .collect();
        for i in 0..3 {
            for j in i + 1..3 {
                if !row[i].mul(&pv[j]).sub(&row[j].mul(&pv[i])).is_zero() {
                    return false;
                }
            }
        }
    }
    true
}

/// `x0·x1·(x0-x1)` composed with `x0 ↦ a·x0 + b·x1, x1 ↦ c·x0 + d·x1`.
fn candidate_cubic(
    a: &QuadExtScalar,
    b: &QuadExtScalar,
    c: &QuadExtScalar,
    d: &QuadExtScalar,
) -> ExtBinaryCubic {
    let ac = a.mul(c);
    let bd = b.mul(d);
    let ad_bc = a.mul(d).add(&b.mul(c));
    let amc = a.sub(c);
    let bmd = b.sub(d);
    ExtBinaryCubic {
        c: [
            ac.mul(&amc),
            ac.mul(&bmd).add(&ad_bc.mul(&amc)),
            ad_bc.mul(&bmd).add(&bd.mul(&amc)),
            bd.mul(&bmd),
        ],
    }
}

// ---------------------------------------------------------------------------
// The involution and its matrix
// ---------------------------------------------------------------------------

/// The four quartics of the fiber involution, over any scalars with ring
/// operations. `a` is the coefficient vector of `Σ a_i x0^(3-i) x1^i`.
macro_rules! iota_formulas {
    ($a:expr, $mul:expr, $add:expr, $int:expr) => {{
        let a = $a;
        let mul = $mul;
        let add = $add;
        let int = $int;
        let t = |k: i64, parts: &[&_]| {
            let mut acc = int(k);
            for p in parts {
                acc = mul(&acc, p);
            }
            acc
        };
        [
            // -2a1³ + 9a0a1a2 - 27a0²a3
            add(
                &add(
                    &t(-2, &[&a[1], &a[1], &a[1]]),
                    &t(9, &[&a[0], &a[1], &a[2]]),
                ),
                &t(-27, &[&a[0], &a[0], &a[3]]),
            ),
            // 3(-a1²a2 + 6a0a2² - 9a0a1a3)
            add(
                &add(
                    &t(-3, &[&a[1], &a[1], &a[2]]),
                    &t(18, &[&a[0], &a[2], &a[2]]),
                ),
                &t(-27, &[&a[0], &a[1], &a[3]]),
            ),
            // 3(a1a2² - 6a1²a3 + 9a0a2a3)
            add(
                &add(
                    &t(3, &[&a[1], &a[2], &a[2]]),
                    &t(-18, &[&a[1], &a[1], &a[3]]),
                ),
                &t(27, &[&a[0], &a[2], &a[3]]),
            ),
            // 2a2³ - 9a1a2a3 + 27a0a3²
            add(
                &add(
                    &t(2, &[&a[2], &a[2], &a[2]]),
                    &t(-9, &[&a[1], &a[2], &a[3]]),
                ),
                &t(27, &[&a[0], &a[3], &a[3]]),
            ),
        ]
    }};
}

/// The coefficient vector of the fiber partner of a binary cubic: four
/// degree-4 forms in the coefficients. Fails with `OnTwistedCubic` when all
/// four vanish (the input is a cube of a linear form).
pub fn involution_iota(a: &[FieldScalar; 4]) -> Result<[FieldScalar; 4]> {
    let kind = a[0].kind();
    let out = iota_formulas!(
        a,
        |x: &FieldScalar, y: &FieldScalar| x.mul(y),
        |x: &FieldScalar, y: &FieldScalar| x.add(y),
        |k: i64| kind.from_i64(k)
    );
    if out.iter().all(|v| v.is_zero()) {
        return Err(Error::OnTwistedCubic);
    }
    Ok(out)
}

/// [`involution_iota`] over a quadratic extension.
pub fn involution_iota_ext(a: &[QuadExtScalar; 4]) -> Result<[QuadExtScalar; 4]> {
    let ctx = a[0].ctx.clone();
    let out = iota_formulas!(
        a,
        |x: &QuadExtScalar, y: &QuadExtScalar| x.mul(y),
        |x: &QuadExtScalar, y: &QuadExtScalar| x.add(y),
        |k: i64| QuadExtScalar::from_rational(BigRational::from(BigInt::from(k)), &ctx)
    );
    if out.iter().all(|v| v.is_zero()) {
        return Err(Error::OnTwistedCubic);
    }
    Ok(out)
}

/// The four involution quartics as symbolic forms in the coefficient
/// variables (a 4-variable varset). They vanish simultaneously exactly on
/// the locus of cubes of linear forms.
pub fn iota_quartics_symbolic(vars: VarSet) -> [HomogPoly; 4] {
    assert_eq!(vars.count, 4);
    let kind = FieldKind::Rational;
    let a: [HomogPoly; 4] = std::array::from_fn(|i| HomogPoly::var(vars, i, kind));
    iota_formulas!(
        &a,
        |x: &HomogPoly, y: &HomogPoly| x.multiply(y),
        |x: &HomogPoly, y: &HomogPoly| x.add(y),
        |k: i64| {
            let mut c = HomogPoly::zero(vars, 0, kind);
            c.add_term(Monomial(vec![0, 0, 0, 0]), kind.from_i64(k));
            c
        }
    )
}

/// The 2×2 matrix whose action carries a binary cubic to its fiber
/// partner. Its determinant is (three times) the discriminant of the cubic.
pub fn involution_matrix_psi(a: &[FieldScalar; 4]) -> ExactMatrix {
    let kind = a[0].kind();
    let k = |v: i64| kind.from_i64(v);
    let m00 = k(9).mul(&a[3]).mul(&a[0]).sub(&a[1].mul(&a[2]));
    let m01 = k(2).mul(&a[1]).mul(&a[1]).sub(&k(6).mul(&a[2]).mul(&a[0]));
    let m10 = k(6).mul(&a[3]).mul(&a[1]).sub(&k(2).mul(&a[2]).mul(&a[2]));
    let m11 = a[2].mul(&a[1]).sub(&k(9).mul(&a[3]).mul(&a[0]));
    ExactMatrix::from_rows(vec![vec![m00, m01], vec![m10, m11]], kind)
}

/// Coefficient vector of a binary cubic in the `a_i x0^(3-i) x1^i`
/// convention.
pub fn binary_cubic_coeffs(f: &HomogPoly) -> [FieldScalar; 4] {
    assert_eq!(f.vars.count, 2);
    assert_eq!(f.degree, 3);
    std::array::from_fn(|i| f.coeff(&Monomial(vec![3 - i as u32, i as u32])))
}

pub fn binary_cubic_from_coeffs(a: &[FieldScalar; 4], kind: FieldKind) -> HomogPoly {
    let vx = VarSet::x(2);
    let mut f = HomogPoly::zero(vx, 3, kind);
    for (i, v) in a.iter().enumerate() {
        f.add_term(Monomial(vec![3 - i as u32, i as u32]), v.clone());
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forward::ideal_graded_piece;
    use crate::poly::monomial_basis;
    use crate::symsq::{act, GroupElement};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const Q: FieldKind = FieldKind::Rational;

    fn binom(n: usize, k: usize) -> usize {
        let mut num = 1usize;
        let mut den = 1usize;
        for i in 0..k {
            num *= n - i;
            den *= i + 1;
        }
        num / den
    }

    #[test]
    fn w_dimension_matches_the_space_of_cubics() {
        for n in 1..=6 {
            let w = WSpace::new(n);
            let dim = w.basis(Q).cols;
            assert_eq!(dim, binom(n + 3, 3), "n = {n}");
        }
    }

    #[test]
    fn w_contains_exactly_the_gradient_tuples() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 1..=3usize {
            let w = WSpace::new(n);
            let vx = VarSet::x(n + 1);
            // every gradient tuple satisfies the equations
            for _ in 0..5 {
                let mut f = HomogPoly::zero(vx, 3, Q);
                for m in monomial_basis(vx, 3) {
                    f.add_term(m, Q.from_i64(rng.gen_range(-9..=9)));
                }
                let flat = w.embed_cubic(&f);
                for &(x, y) in w.equalities() {
                    assert_eq!(flat[x], flat[y]);
                }
            }
            // and the dimensions agree, so W is exactly the image
            assert_eq!(w.basis(Q).cols, binom(n + 3, 3));
        }
    }

    #[test]
    fn recover_cubic_three_coordinate_planes() {
        // V(z00, z11, z22, z01·z02·z12): the triangle cubic
        let zv = VarSet::z(6);
        let linear = vec![
            HomogPoly::var(zv, 0, Q),
            HomogPoly::var(zv, 3, Q),
            HomogPoly::var(zv, 5, Q),
        ];
        let mut gens = linear;
        let cubic = HomogPoly::var(zv, 1, Q)
            .multiply(&HomogPoly::var(zv, 2, Q))
            .multiply(&HomogPoly::var(zv, 4, Q));
        gens.push(cubic);
        let f = recover_cubic(&gens, 2).unwrap();
        let expect = HomogPoly::parse("x0*x1*x2", VarSet::x(3), Q).unwrap();
        assert!(f.proportional(&expect));
    }

    #[test]
    fn recover_cubic_round_trip_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let vx = VarSet::x(3);
        for _ in 0..5 {
            let mut f = HomogPoly::zero(vx, 3, Q);
            for m in monomial_basis(vx, 3) {
                f.add_term(m, Q.from_i64(rng.gen_range(-9..=9)));
            }
            let piece1 = ideal_graded_piece(&f, 1, &mut rng).unwrap();
            let rec = recover_cubic(&piece1.basis_forms(), 2).unwrap();
            assert!(rec.proportional(&f));
        }
    }

    // The diagonal cubic has border rank n+1, so its fiber has 2^n elements
    // and the span intersection is the whole diagonal family: recovery must
    // refuse rather than pick one.
    #[test]
    fn recover_cubic_diagonal_is_not_unique() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let vx = VarSet::x(3);
        let f = HomogPoly::parse("x0^3+x1^3+x2^3", vx, Q).unwrap();
        let piece1 = ideal_graded_piece(&f, 1, &mut rng).unwrap();
        match recover_cubic(&piece1.basis_forms(), 2) {
            Err(Error::NotUnique(k)) => assert_eq!(k, 3),
            other => panic!("expected NotUnique, got {other:?}"),
        }
    }

    #[test]
    fn recover_cubic_low_rank_is_not_unique() {
        // x0³ + x1³ in three variables: the gradient span has dimension 2
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let vx = VarSet::x(3);
        let f = HomogPoly::parse("x0^3+x1^3", vx, Q).unwrap();
        let piece1 = ideal_graded_piece(&f, 1, &mut rng).unwrap();
        match recover_cubic(&piece1.basis_forms(), 2) {
            Err(Error::NotUnique(k)) => assert!(k >= 2),
            other => panic!("expected NotUnique, got {other:?}"),
        }
    }

    #[test]
    fn gamma_uniqueness_cases() {
        assert!(gamma_lk_uniqueness(3, 3, 3));
        assert!(gamma_lk_uniqueness(2, 4, 4));
        assert!(gamma_lk_uniqueness(3, 5, 5));
    }

    #[test]
    fn cyclic_cubics_have_zero_dimensional_intersections() {
        // l = k = n: the intersection for Σ x_i²x_{i+1} + x_k²x_0
        for n in 3..=6 {
            assert!(gamma_lk_uniqueness(n, n, n), "n = {n}");
        }
    }

    #[test]
    fn fiber_example_configuration() {
        let points = crate::fixtures::binary_cubic_points();
        let (f1, f2) = fiber_h31(&points).unwrap();
        let expected = crate::fixtures::binary_cubic_fiber();
        let got: Vec<HomogPoly> = [&f1, &f2]
            .iter()
            .map(|c| c.to_poly().expect("example fiber is rational").normalized())
            .collect();
        assert!(got.iter().any(|f| f.proportional(&expected[0])));
        assert!(got.iter().any(|f| f.proportional(&expected[1])));
    }

    #[test]
    fn fiber_round_trip_on_split_cubics() {
        // cubics with three rational roots: the Hessian images of the roots
        // are rational points, and the fiber must contain the cubic
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let vx = VarSet::x(2);
        let mut done = 0;
        while done < 10 {
            // three distinct projective roots with small coordinates
            let roots: Vec<(i64, i64)> = (0..3)
                .map(|_| (rng.gen_range(-4..=4i64), rng.gen_range(1..=4i64)))
                .collect();
            let distinct = roots[0].0 * roots[1].1 != roots[1].0 * roots[0].1
                && roots[0].0 * roots[2].1 != roots[2].0 * roots[0].1
                && roots[1].0 * roots[2].1 != roots[2].0 * roots[1].1;
            if !distinct {
                continue;
            }
            let mut f = HomogPoly::parse("1", vx, Q).unwrap();
            for (a, b) in &roots {
                // root (a : b) gives the factor b·x0 - a·x1
                let lin = HomogPoly::parse(&format!("{b}*x0 - {a}*x1"), vx, Q)
                    .unwrap_or_else(|_| HomogPoly::zero(vx, 1, Q));
                f = f.multiply(&lin);
            }
            let h = crate::symsq::hessian_map_forms(&f);
            let pts: [Vec<FieldScalar>; 3] = std::array::from_fn(|i| {
                let (a, b) = roots[i];
                h.apply(&[Q.from_i64(a), Q.from_i64(b)])
            });
            let (f1, f2) = fiber_h31(&pts).unwrap();
            let target = f.normalized();
            let matches = [&f1, &f2]
                .iter()
                .filter_map(|c| c.to_poly())
                .any(|p| p.proportional(&target));
            assert!(matches, "fiber misses the original cubic {f}");
            // the two fiber elements are exchanged by the involution
            let partner = involution_iota_ext(&f1.c).unwrap();
            assert!(ExtBinaryCubic { c: partner }.proportional(&f2));
            done += 1;
        }
    }

    #[test]
    fn iota_example_values() {
        let a = [Q.from_i64(0), Q.from_i64(1), Q.from_i64(-1), Q.from_i64(0)];
        let out = involution_iota(&a).unwrap();
        // proportional to (2, -3, -3, 2)
        let expect = [Q.from_i64(2), Q.from_i64(-3), Q.from_i64(-3), Q.from_i64(2)];
        let ratio = out[0].div(&expect[0]);
        for i in 0..4 {
            assert_eq!(out[i], ratio.mul(&expect[i]));
        }

        let cube = [Q.from_i64(1), Q.from_i64(0), Q.from_i64(0), Q.from_i64(0)];
        assert!(matches!(involution_iota(&cube), Err(Error::OnTwistedCubic)));
    }

    #[test]
    fn iota_is_an_involution() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut done = 0;
        while done < 100 {
            let a: [FieldScalar; 4] = std::array::from_fn(|_| Q.from_i64(rng.gen_range(-9..=9)));
            let Ok(out) = involution_iota(&a) else {
                continue;
            };
            let Ok(back) = involution_iota(&out) else {
                continue;
            };
            // back ∝ a
            let i0 = (0..4).find(|&i| !a[i].is_zero()).unwrap();
            if back[i0].is_zero() {
                continue;
            }
            let ratio = back[i0].div(&a[i0]);
            for i in 0..4 {
                assert_eq!(back[i], ratio.mul(&a[i]));
            }
            done += 1;
        }
    }

    #[test]
    fn iota_vanishes_on_cubes() {
        // substitute the parametrized cube (s³, 3s²t, 3st², t³) into the four
        // quartics: identically zero in (s, t)
        let va = VarSet::x(4);
        let quartics = iota_quartics_symbolic(va);
        let vs = VarSet::x(2);
        let cube_param = vec![
            HomogPoly::parse("x0^3", vs, Q).unwrap(),
            HomogPoly::parse("3*x0^2*x1", vs, Q).unwrap(),
            HomogPoly::parse("3*x0*x1^2", vs, Q).unwrap(),
            HomogPoly::parse("x1^3", vs, Q).unwrap(),
        ];
        for q in &quartics {
            assert!(q.substitute(&cube_param).unwrap().is_zero());
        }
    }

    #[test]
    fn iota_degenerates_on_the_double_root_stratum() {
        // x0²x1 maps to a cube; the fiber there is a single point
        let a = [Q.from_i64(0), Q.from_i64(1), Q.from_i64(0), Q.from_i64(0)];
        let out = involution_iota(&a).unwrap();
        assert!(!out[0].is_zero());
        assert!(out[1].is_zero() && out[2].is_zero() && out[3].is_zero());
        let again = involution_iota(&out);
        assert!(matches!(again, Err(Error::OnTwistedCubic)));
    }

    #[test]
    fn psi_example_matrix() {
        let a = [Q.from_i64(0), Q.from_i64(1), Q.from_i64(-1), Q.from_i64(0)];
        let m = involution_matrix_psi(&a);
        assert_eq!(m, ExactMatrix::from_i64(&[&[1, 2], &[-2, -1]], Q));
    }

    #[test]
    fn psi_squares_to_a_scalar_and_carries_f_to_iota_f() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let mut done = 0;
        while done < 100 {
            let a: [FieldScalar; 4] = std::array::from_fn(|_| Q.from_i64(rng.gen_range(-9..=9)));
            let m = involution_matrix_psi(&a);
            if m.rank() < 2 {
                continue;
            }
            // involution: m² is a scalar matrix
            let m2 = m.mat_mul(&m);
            assert_eq!(m2.at(0, 1), &Q.zero());
            assert_eq!(m2.at(1, 0), &Q.zero());
            assert_eq!(m2.at(0, 0), m2.at(1, 1));

            // act(ψ(F), F) ∝ ι(F)
            let f = binary_cubic_from_coeffs(&a, Q);
            let g = GroupElement::new(m).unwrap();
            let moved = act(&g, &f);
            let Ok(iota) = involution_iota(&a) else {
                continue;
            };
            let expect = binary_cubic_from_coeffs(&iota, Q);
            assert!(moved.proportional(&expect), "a = {a:?}");
            done += 1;
        }
    }

    #[test]
    fn psi_determinant_is_three_times_the_discriminant() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let a: [FieldScalar; 4] = std::array::from_fn(|_| Q.from_i64(rng.gen_range(-9..=9)));
            let m = involution_matrix_psi(&a);
            let det = m.at(0, 0).mul(m.at(1, 1)).sub(&m.at(0, 1).mul(m.at(1, 0)));
            // disc(a0 X³ + a1 X² + a2 X + a3)
            let k = |v: i64| Q.from_i64(v);
            let disc = k(18)
                .mul(&a[0])
                .mul(&a[1])
                .mul(&a[2])
                .mul(&a[3])
                .sub(&k(4).mul(&a[1]).mul(&a[1]).mul(&a[1]).mul(&a[3]))
                .add(&a[1].mul(&a[1]).mul(&a[2]).mul(&a[2]))
                .sub(&k(4).mul(&a[0]).mul(&a[2]).mul(&a[2]).mul(&a[2]))
                .sub(&k(27).mul(&a[0]).mul(&a[0]).mul(&a[3]).mul(&a[3]));
            assert_eq!(det, k(3).mul(&disc));
        }
    }

    #[test]
    fn quad_ext_field_arithmetic() {
        // Q(√2, √3): check multiplication and inversion
        let mut b = ExtBuilder::new();
        let two = BigRational::from(BigInt::from(2));
        let three = BigRational::from(BigInt::from(3));
        let r2 = b.sqrt(&two);
        let r3 = b.sqrt(&three);
        // √8 reuses √2
        let eight = BigRational::from(BigInt::from(8));
        let r8 = b.sqrt(&eight);
        let ctx = b.finish();
        let s2 = r2.realize(&ctx);
        let s3 = r3.realize(&ctx);
        let s8 = r8.realize(&ctx);
        assert_eq!(s2.mul(&s2), QuadExtScalar::from_rational(two.clone(), &ctx));
        assert_eq!(s3.mul(&s3), QuadExtScalar::from_rational(three, &ctx));
        assert_eq!(s8, s2.mul(&QuadExtScalar::from_rational(two, &ctx)));
        let x = s2.add(&s3); // √2 + √3
        let xinv = x.inv();
        let one = QuadExtScalar::from_rational(BigRational::one(), &ctx);
        assert_eq!(x.mul(&xinv), one);
        // perfect squares stay rational
        let mut b2 = ExtBuilder::new();
        match b2.sqrt(&BigRational::new(BigInt::from(9), BigInt::from(4))) {
            PendingSqrt::Rational(r) => {
                assert_eq!(r, BigRational::new(BigInt::from(3), BigInt::from(2)))
            }
            _ => panic!("9/4 is a perfect square"),
        }
    }
}
