//! Homogeneous multivariate polynomials over an exact field.
//!
//! Sparse representation keyed by exponent vectors. One global monomial
//! order is fixed for every coefficient-matrix construction: monomials of a
//! given degree are listed by lexicographically decreasing exponent vector,
//! so `x0^d` comes first and the last variable's pure power comes last. The
//! text format round-trips bit-exactly through [`HomogPoly::parse`] /
//! `Display`.

use crate::linalg::{ExactMatrix, FieldKind, FieldScalar};
use std::collections::BTreeMap;
use std::fmt;

/// A named set of variables: `x0..x{n}` or `z0..z{n}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct VarSet {
    pub letter: char,
    pub count: usize,
}

impl VarSet {
    pub fn x(count: usize) -> VarSet {
        VarSet { letter: 'x', count }
    }

    pub fn z(count: usize) -> VarSet {
        VarSet { letter: 'z', count }
    }

    pub fn name(&self, i: usize) -> String {
        format!("{}{}", self.letter, i)
    }
}

/// Exponent vector of one monomial. Ordered so that ascending map iteration
/// yields the canonical (lexicographically decreasing) basis order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// All degree-`d` monomials in the canonical order.
pub fn monomial_basis(vars: VarSet, d: u32) -> Vec<Monomial> {
    fn rec(nvars: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if nvars == 1 {
            prefix.push(d);
            out.push(Monomial(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=d).rev() {
            prefix.push(e);
            rec(nvars - 1, d - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(vars.count, d, &mut Vec::new(), &mut out);
    out
}

/// A homogeneous polynomial: all stored coefficients are nonzero and share
/// one total degree. The zero polynomial is an empty map with a declared
/// degree.
#[derive(Clone, PartialEq, Eq)]
pub struct HomogPoly {
    pub vars: VarSet,
    pub degree: u32,
    pub kind: FieldKind,
    terms: BTreeMap<Monomial, FieldScalar>,
}

/// Composition was attempted with substitution forms of unequal degrees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeMismatch;

impl HomogPoly {
    pub fn zero(vars: VarSet, degree: u32, kind: FieldKind) -> HomogPoly {
        HomogPoly {
            vars,
            degree,
            kind,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(
        vars: VarSet,
        degree: u32,
        kind: FieldKind,
        terms: impl IntoIterator<Item = (Monomial, FieldScalar)>,
    ) -> HomogPoly {
        let mut p = HomogPoly::zero(vars, degree, kind);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    /// Single monomial with coefficient.
    pub fn monomial(vars: VarSet, m: Monomial, c: FieldScalar) -> HomogPoly {
        let degree = m.degree();
        HomogPoly::from_terms(vars, degree, c.kind(), [(m, c)])
    }

    /// The variable `x_i` as a linear form.
    pub fn var(vars: VarSet, i: usize, kind: FieldKind) -> HomogPoly {
        let mut e = vec![0u32; vars.count];
        e[i] = 1;
        HomogPoly::monomial(vars, Monomial(e), kind.one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: FieldScalar) {
        assert_eq!(m.0.len(), self.vars.count, "monomial arity mismatch");
        assert_eq!(m.degree(), self.degree, "monomial degree mismatch");
        if c.is_zero() {
            return;
        }
        match self.terms.get(&m) {
            Some(old) => {
                let s = old.add(&c);
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    self.terms.insert(m, s);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn coeff(&self, m: &Monomial) -> FieldScalar {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| self.kind.zero())
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &FieldScalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add(&self, other: &HomogPoly) -> HomogPoly {
        assert_eq!(self.vars, other.vars, "varset mismatch");
        assert!(
            self.is_zero() || other.is_zero() || self.degree == other.degree,
            "degree mismatch in add"
        );
        let degree = if self.is_zero() {
            other.degree
        } else {
            self.degree
        };
        let mut out = HomogPoly::zero(self.vars, degree, self.kind);
        for (m, c) in self.terms() {
            out.add_term(m.clone(), c.clone());
        }
        for (m, c) in other.terms() {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &HomogPoly) -> HomogPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> HomogPoly {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.neg();
        }
        out
    }

    pub fn scale(&self, s: &FieldScalar) -> HomogPoly {
        if s.is_zero() {
            return HomogPoly::zero(self.vars, self.degree, self.kind);
        }
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.mul(s);
        }
        out
    }

    pub fn multiply(&self, other: &HomogPoly) -> HomogPoly {
        assert_eq!(self.vars, other.vars, "varset mismatch");
        let mut out = HomogPoly::zero(self.vars, self.degree + other.degree, self.kind);
        for (m1, c1) in self.terms() {
            for (m2, c2) in other.terms() {
                let e: Vec<u32> = m1.0.iter().zip(&m2.0).map(|(a, b)| a + b).collect();
                out.add_term(Monomial(e), c1.mul(c2));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> HomogPoly {
        let mut acc = HomogPoly::monomial(
            self.vars,
            Monomial(vec![0; self.vars.count]),
            self.kind.one(),
        );
        for _ in 0..e {
            acc = acc.multiply(self);
        }
        acc
    }

    /// `∂self/∂x_i`; the Euler identity `Σ x_i ∂f/∂x_i = d·f` holds.
    pub fn partial_derivative(&self, i: usize) -> HomogPoly {
        assert!(self.degree >= 1, "cannot differentiate a constant form");
        let mut out = HomogPoly::zero(self.vars, self.degree - 1, self.kind);
        for (m, c) in self.terms() {
            if m.0[i] == 0 {
                continue;
            }
            let mut e = m.0.clone();
            e[i] -= 1;
            out.add_term(Monomial(e), c.mul(&self.kind.from_i64(m.0[i] as i64)));
        }
        out
    }

    /// Compose with one form per variable. All forms must share a varset and
    /// a common degree `e`; the result is homogeneous of degree `d·e`.
    pub fn substitute(&self, forms: &[HomogPoly]) -> Result<HomogPoly, DegreeMismatch> {
        assert_eq!(
            forms.len(),
            self.vars.count,
            "one form per variable required"
        );
        let tvars = forms[0].vars;
        let e = forms[0].degree;
        for f in forms {
            if f.degree != e || f.vars != tvars {
                return Err(DegreeMismatch);
            }
        }
        let mut out = HomogPoly::zero(tvars, self.degree * e, self.kind);
        for (m, c) in self.terms() {
            let mut term = HomogPoly::monomial(tvars, Monomial(vec![0; tvars.count]), c.clone());
            for (i, &exp) in m.0.iter().enumerate() {
                if exp > 0 {
                    term = term.multiply(&forms[i].pow(exp));
                }
            }
            out = out.add(&term);
        }
        Ok(out)
    }

    pub fn evaluate(&self, point: &[FieldScalar]) -> FieldScalar {
        assert_eq!(point.len(), self.vars.count, "point arity mismatch");
        let mut acc = self.kind.zero();
        for (m, c) in self.terms() {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t = t.mul(&point[i]);
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Coefficient vector over the degree-`d` canonical monomial basis.
    pub fn coeff_vector(&self) -> Vec<FieldScalar> {
        monomial_basis(self.vars, self.degree)
            .iter()
            .map(|m| self.coeff(m))
            .collect()
    }

    pub fn from_coeff_vector(
        vars: VarSet,
        degree: u32,
        kind: FieldKind,
        v: &[FieldScalar],
    ) -> HomogPoly {
        let basis = monomial_basis(vars, degree);
        assert_eq!(v.len(), basis.len(), "coefficient vector length mismatch");
        HomogPoly::from_terms(vars, degree, kind, basis.into_iter().zip(v.iter().cloned()))
    }

    /// Scale so the first nonzero coefficient in canonical order is 1.
    pub fn normalized(&self) -> HomogPoly {
        match self.terms().next() {
            None => self.clone(),
            Some((_, lead)) => self.scale(&lead.inv()),
        }
    }

    /// Projective equality: equal up to one nonzero scalar.
    pub fn proportional(&self, other: &HomogPoly) -> bool {
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        self.vars == other.vars
            && self.degree == other.degree
            && self.normalized() == other.normalized()
    }

    /// The cofactor `g` with `self = divisor * g`, found by a linear solve in
    /// the known degree, or `None` when the division fails.
    pub fn divide_by(&self, divisor: &HomogPoly) -> Option<HomogPoly> {
        assert!(!divisor.is_zero(), "division by the zero form");
        if self.is_zero() {
            return Some(HomogPoly::zero(
                self.vars,
                self.degree.saturating_sub(divisor.degree),
                self.kind,
            ));
        }
        if self.degree < divisor.degree {
            return None;
        }
        let (mat, cols) = macaulay_mult_matrix(std::slice::from_ref(divisor), self.degree);
        let x = mat.solve(&self.coeff_vector()).ok()?;
        let mut g = HomogPoly::zero(self.vars, self.degree - divisor.degree, self.kind);
        for ((_, m), c) in cols.iter().zip(x) {
            g.add_term(m.clone(), c);
        }
        Some(g)
    }

    /// Map rational coefficients into `F_p`.
    pub fn to_fp(&self, p: u64) -> Result<HomogPoly, String> {
        let mut out = HomogPoly::zero(self.vars, self.degree, FieldKind::Prime(p));
        for (m, c) in self.terms() {
            out.add_term(m.clone(), c.to_fp(p)?);
        }
        Ok(out)
    }

    /// Restrict to a univariate polynomial in variable `var` by fixing every
    /// other variable to the given values. Returns dense coefficients, index
    /// = exponent of `var`.
    pub fn specialize_to_univariate(&self, var: usize, values: &[FieldScalar]) -> Vec<FieldScalar> {
        assert_eq!(values.len(), self.vars.count, "values arity mismatch");
        let mut coeffs = vec![self.kind.zero(); self.degree as usize + 1];
        for (m, c) in self.terms() {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if i == var {
                    continue;
                }
                for _ in 0..e {
                    t = t.mul(&values[i]);
                }
            }
            let e = m.0[var] as usize;
            coeffs[e] = coeffs[e].add(&t);
        }
        coeffs
    }
}

/// Matrix of the map `(c_1,…,c_k) ↦ Σ c_i·g_i` from tuples of forms of
/// degree `target − deg(g_i)` into forms of degree `target`, in canonical
/// monomial bases. Also returns the column labels `(generator index,
/// cofactor monomial)`.
pub fn macaulay_mult_matrix(
    gens: &[HomogPoly],
    target_deg: u32,
) -> (ExactMatrix, Vec<(usize, Monomial)>) {
    assert!(!gens.is_empty(), "no generators");
    let vars = gens[0].vars;
    let kind = gens[0].kind;
    for g in gens {
        assert_eq!(g.vars, vars, "generators live in different varsets");
        assert!(
            g.degree <= target_deg,
            "target degree below a generator degree"
        );
    }
    let target_basis = monomial_basis(vars, target_deg);
    let index: BTreeMap<&Monomial, usize> = target_basis
        .iter()
        .enumerate()
        .map(|(i, m)| (m, i))
        .collect();
    let mut cols: Vec<(usize, Monomial)> = Vec::new();
    for (gi, g) in gens.iter().enumerate() {
        for m in monomial_basis(vars, target_deg - g.degree) {
            cols.push((gi, m));
        }
    }
    let mut mat = ExactMatrix::zero(target_basis.len(), cols.len(), kind);
    for (ci, (gi, cm)) in cols.iter().enumerate() {
        for (gm, c) in gens[*gi].terms() {
            let e: Vec<u32> = gm.0.iter().zip(&cm.0).map(|(a, b)| a + b).collect();
            let ri = index[&Monomial(e)];
            let v = mat.at(ri, ci).add(c);
            mat.set(ri, ci, v);
        }
    }
    (mat, cols)
}

/// Grid of homogeneous polynomials with recorded twists: entry `(r, c)` is
/// zero or homogeneous of degree `col_twist[c] - row_twist[r]`.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    pub rows: usize,
    pub cols: usize,
    pub row_twists: Vec<i64>,
    pub col_twists: Vec<i64>,
    entries: Vec<HomogPoly>,
}

impl PolyMatrix {
    pub fn new(
        entries: Vec<Vec<HomogPoly>>,
        row_twists: Vec<i64>,
        col_twists: Vec<i64>,
    ) -> PolyMatrix {
        let rows = entries.len();
        let cols = entries.first().map_or(0, |r| r.len());
        assert_eq!(row_twists.len(), rows);
        assert_eq!(col_twists.len(), cols);
        for (ri, row) in entries.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged rows");
            for (ci, e) in row.iter().enumerate() {
                let want = col_twists[ci] - row_twists[ri];
                assert!(
                    e.is_zero() || e.degree as i64 == want,
                    "entry ({ri},{ci}) has degree {} but twists demand {want}",
                    e.degree
                );
            }
        }
        PolyMatrix {
            rows,
            cols,
            row_twists,
            col_twists,
            entries: entries.into_iter().flatten().collect(),
        }
    }

    pub fn at(&self, r: usize, c: usize) -> &HomogPoly {
        &self.entries[r * self.cols + c]
    }

    pub fn mat_mul(&self, other: &PolyMatrix) -> Vec<Vec<HomogPoly>> {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                (0..other.cols)
                    .map(|j| {
                        let mut acc: Option<HomogPoly> = None;
                        for k in 0..self.cols {
                            let prod = self.at(i, k).multiply(other.at(k, j));
                            acc = Some(match acc {
                                None => prod,
                                Some(a) => {
                                    if a.is_zero() {
                                        prod
                                    } else if prod.is_zero() {
                                        a
                                    } else {
                                        a.add(&prod)
                                    }
                                }
                            });
                        }
                        acc.unwrap()
                    })
                    .collect()
            })
            .collect()
    }

    pub fn is_zero_product(&self, other: &PolyMatrix) -> bool {
        self.mat_mul(other).iter().flatten().all(|p| p.is_zero())
    }

    /// True when no entry is a nonzero constant (degree-0) form.
    pub fn has_no_constant_entry(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero() || e.degree > 0)
    }
}

// ---------------------------------------------------------------------------
// Text format
// ---------------------------------------------------------------------------

impl fmt::Display for HomogPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms().enumerate() {
            let (sign, mag) = match c {
                FieldScalar::Rat(r) if r.numer().sign() == num_bigint::Sign::Minus => {
                    ("-", FieldScalar::Rat(-r))
                }
                other => ("+", other.clone()),
            };
            if i == 0 {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", sign)?;
            }
            let is_const_mon = m.0.iter().all(|&e| e == 0);
            if mag.is_one() && !is_const_mon {
                // coefficient 1 omitted
            } else {
                write!(f, "{}", mag)?;
                if !is_const_mon {
                    write!(f, "*")?;
                }
            }
            let mut first_var = true;
            for (vi, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first_var {
                    write!(f, "*")?;
                }
                first_var = false;
                write!(f, "{}", self.vars.name(vi))?;
                if e > 1 {
                    write!(f, "^{}", e)?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for HomogPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl HomogPoly {
    /// Parse the text grammar: terms `coef*x0^e0*x1^e1*...` joined by `+`/`-`;
    /// coefficients are integers or `p/q` and may be omitted when 1.
    pub fn parse(s: &str, vars: VarSet, kind: FieldKind) -> Result<HomogPoly, String> {
        let s = s.trim();
        if s.is_empty() {
            return Err("empty polynomial text".into());
        }
        // Split into signed terms at top level.
        let mut terms: Vec<(i32, String)> = Vec::new();
        let mut cur = String::new();
        let mut sign = 1;
        let mut started = false;
        for ch in s.chars() {
            match ch {
                '+' | '-' if started && !cur.trim().is_empty() => {
                    terms.push((sign, std::mem::take(&mut cur)));
                    sign = if ch == '-' { -1 } else { 1 };
                }
                '+' if !started || cur.trim().is_empty() => {}
                '-' if !started || cur.trim().is_empty() => {
                    sign = -sign;
                }
                _ => {
                    if !ch.is_whitespace() {
                        started = true;
                    }
                    cur.push(ch);
                }
            }
        }
        if !cur.trim().is_empty() {
            terms.push((sign, cur));
        }
        if terms.is_empty() {
            return Err("no terms".into());
        }

        let mut degree: Option<u32> = None;
        let mut parsed: Vec<(Monomial, FieldScalar)> = Vec::new();
        for (sgn, t) in terms {
            let mut coeff = kind.one();
            let mut expo = vec![0u32; vars.count];
            let mut is_zero_term = false;
            for factor in t.split('*') {
                let factor = factor.trim();
                if factor.is_empty() {
                    return Err(format!("empty factor in term `{t}`"));
                }
                if factor.starts_with(vars.letter) {
                    let (base, exp) = match factor.split_once('^') {
                        Some((b, e)) => (
                            b.trim(),
                            e.trim()
                                .parse::<u32>()
                                .map_err(|_| format!("bad exponent in `{factor}`"))?,
                        ),
                        None => (factor, 1),
                    };
                    let idx: usize = base[1..]
                        .parse()
                        .map_err(|_| format!("bad variable `{base}`"))?;
                    if idx >= vars.count {
                        return Err(format!("variable `{base}` out of range (< {})", vars.count));
                    }
                    expo[idx] += exp;
                } else {
                    let c = FieldScalar::parse(factor, kind)?;
                    if c.is_zero() {
                        is_zero_term = true;
                    }
                    coeff = coeff.mul(&c);
                }
            }
            if sgn < 0 {
                coeff = coeff.neg();
            }
            let mono = Monomial(expo);
            if is_zero_term || coeff.is_zero() {
                // A zero term still pins the degree when it is the only
                // information, e.g. the canonical "0".
                if degree.is_none() && t.trim() == "0" {
                    degree = Some(0);
                }
                continue;
            }
            match degree {
                None => degree = Some(mono.degree()),
                Some(d) if d == mono.degree() => {}
                Some(d) => {
                    return Err(format!(
                        "not homogeneous: saw degrees {d} and {}",
                        mono.degree()
                    ))
                }
            }
            parsed.push((mono, coeff));
        }
        let degree = degree.unwrap_or(0);
        Ok(HomogPoly::from_terms(vars, degree, kind, parsed))
    }
}

// ---------------------------------------------------------------------------
// Univariate root finding over F_p
// ---------------------------------------------------------------------------

/// Dense univariate polynomial over `F_p` (index = exponent).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FpPoly {
    pub coeffs: Vec<u64>,
    pub p: u64,
}

impl FpPoly {
    pub fn new(mut coeffs: Vec<u64>, p: u64) -> FpPoly {
        for c in coeffs.iter_mut() {
            *c %= p;
        }
        while coeffs.len() > 1 && *coeffs.last().unwrap() == 0 {
            coeffs.pop();
        }
        FpPoly { coeffs, p }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn deg(&self) -> usize {
        self.coeffs.len() - 1
    }

    fn mulmod(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    pub fn mul(&self, other: &FpPoly) -> FpPoly {
        if self.is_zero() || other.is_zero() {
            return FpPoly::new(vec![0], self.p);
        }
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + self.mulmod(a, b) as u64) % self.p;
            }
        }
        FpPoly::new(out, self.p)
    }

    pub fn rem(&self, modulus: &FpPoly) -> FpPoly {
        assert!(!modulus.is_zero(), "remainder by zero");
        let p = self.p;
        let mut r = self.coeffs.clone();
        let dm = modulus.deg();
        let lead_inv = crate::linalg::fp_inv(*modulus.coeffs.last().unwrap(), p);
        while r.len() > dm && !(r.len() == 1 && r[0] == 0) {
            let k = r.len() - 1;
            let c = self.mulmod(r[k], lead_inv);
            if c != 0 {
                for (j, &mc) in modulus.coeffs.iter().enumerate() {
                    let idx = k - dm + j;
                    let sub = self.mulmod(c, mc);
                    r[idx] = (r[idx] + p - sub) % p;
                }
            }
            r.pop();
            while r.len() > 1 && *r.last().unwrap() == 0 {
                r.pop();
            }
            if r.iter().all(|&v| v == 0) {
                return FpPoly::new(vec![0], p);
            }
        }
        FpPoly::new(r, p)
    }

    pub fn gcd(&self, other: &FpPoly) -> FpPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        // monic
        let inv = crate::linalg::fp_inv(*a.coeffs.last().unwrap(), a.p);
        let coeffs = a.coeffs.iter().map(|&c| a.mulmod(c, inv)).collect();
        FpPoly::new(coeffs, a.p)
    }

    /// `base^e mod modulus` by square-and-multiply.
    pub fn powmod(&self, mut e: u64, modulus: &FpPoly) -> FpPoly {
        let mut base = self.rem(modulus);
        let mut acc = FpPoly::new(vec![1], self.p);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(modulus);
            }
            base = base.mul(&base).rem(modulus);
            e >>= 1;
        }
        acc
    }

    pub fn evaluate(&self, x: u64) -> u64 {
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = (self.mulmod(acc, x) + c) % self.p;
        }
        acc
    }
}

/// All distinct roots of a nonzero `f` in `F_p`, via `gcd(X^p − X, f)` and
/// randomized equal-degree splitting. Deterministic given the RNG state;
/// the result is sorted.
pub fn fp_univariate_roots(f: &FpPoly, rng: &mut impl rand::Rng) -> Vec<u64> {
    assert!(!f.is_zero(), "root finding on the zero polynomial");
    let p = f.p;
    if f.deg() == 0 {
        return Vec::new();
    }
    // Product of (X - r) over distinct roots r.
    let x = FpPoly::new(vec![0, 1], p);
    let xp = x.powmod(p, f);
    let mut xp_minus_x = xp.coeffs.clone();
    if xp_minus_x.len() < 2 {
        xp_minus_x.resize(2, 0);
    }
    xp_minus_x[1] = (xp_minus_x[1] + p - 1) % p;
    let lin = FpPoly::new(xp_minus_x, p).gcd(f);
    let mut roots = Vec::new();
    let mut stack = vec![lin];
    while let Some(g) = stack.pop() {
        if g.deg() == 0 {
            continue;
        }
        if g.deg() == 1 {
            // g = X + c (monic): root = -c
            let c = g.coeffs[0];
            roots.push((p - c) % p);
            continue;
        }
        // Split: gcd((X + delta)^((p-1)/2) - 1, g)
        loop {
            let delta = rng.gen_range(0..p);
            let shifted = FpPoly::new(vec![delta, 1], p);
            let mut h = shifted.powmod((p - 1) / 2, &g);
            h.coeffs[0] = (h.coeffs[0] + p - 1) % p;
            let h = FpPoly::new(h.coeffs, p);
            let d = h.gcd(&g);
            if d.deg() > 0 && d.deg() < g.deg() {
                let q = divide_exact(&g, &d);
                stack.push(d);
                stack.push(q);
                break;
            }
        }
    }
    roots.sort_unstable();
    roots
}

fn divide_exact(num: &FpPoly, den: &FpPoly) -> FpPoly {
    let p = num.p;
    let mut r = num.coeffs.clone();
    let dm = den.deg();
    let lead_inv = crate::linalg::fp_inv(*den.coeffs.last().unwrap(), p);
    let mut q = vec![0u64; num.deg() - dm + 1];
    for k in (dm..=num.deg()).rev() {
        let c = ((r[k] as u128 * lead_inv as u128) % p as u128) as u64;
        q[k - dm] = c;
        if c != 0 {
            for (j, &dc) in den.coeffs.iter().enumerate() {
                let sub = ((c as u128 * dc as u128) % p as u128) as u64;
                r[k - dm + j] = (r[k - dm + j] + p - sub) % p;
            }
        }
    }
    FpPoly::new(q, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const Q: FieldKind = FieldKind::Rational;

    pub(crate) fn random_poly(
        vars: VarSet,
        degree: u32,
        kind: FieldKind,
        rng: &mut ChaCha8Rng,
    ) -> HomogPoly {
        let mut p = HomogPoly::zero(vars, degree, kind);
        for m in monomial_basis(vars, degree) {
            p.add_term(m, kind.from_i64(rng.gen_range(-9..=9)));
        }
        p
    }

    #[test]
    fn monomial_basis_examples() {
        let b = monomial_basis(VarSet::x(2), 2);
        let strs: Vec<String> = b
            .iter()
            .map(|m| HomogPoly::monomial(VarSet::x(2), m.clone(), Q.one()).to_string())
            .collect();
        assert_eq!(strs, vec!["x0^2", "x0*x1", "x1^2"]);

        assert_eq!(monomial_basis(VarSet::x(2), 0).len(), 1);
        assert_eq!(monomial_basis(VarSet::x(3), 3).len(), 10);
    }

    #[test]
    fn multiply_examples() {
        let vx = VarSet::x(2);
        let x0 = HomogPoly::var(vx, 0, Q);
        let x1 = HomogPoly::var(vx, 1, Q);
        let prod = x0.multiply(&x1);
        assert_eq!(prod.to_string(), "x0*x1");

        let zero = HomogPoly::zero(vx, 3, Q);
        let fz = prod.multiply(&zero);
        assert!(fz.is_zero());
        assert_eq!(fz.degree, 5);

        let sum = x0.add(&x1);
        let diff = x0.sub(&x1);
        let expect = x0.multiply(&x0).sub(&x1.multiply(&x1));
        assert_eq!(sum.multiply(&diff), expect);
    }

    #[test]
    fn derivative_examples() {
        let vx = VarSet::x(2);
        let x0 = HomogPoly::var(vx, 0, Q);
        let c = x0.pow(3);
        assert_eq!(c.partial_derivative(0).to_string(), "3*x0^2");
        assert!(c.partial_derivative(1).is_zero());
    }

    #[test]
    fn euler_identity_random_cubics() {
        let vx = VarSet::x(3);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let f = random_poly(vx, 3, Q, &mut rng);
            let mut acc = HomogPoly::zero(vx, 3, Q);
            for i in 0..3 {
                acc = acc.add(&HomogPoly::var(vx, i, Q).multiply(&f.partial_derivative(i)));
            }
            assert_eq!(acc, f.scale(&Q.from_i64(3)));
        }
    }

    #[test]
    fn substitute_examples() {
        let vz = VarSet::z(3);
        let vx = VarSet::x(2);
        // z0^2 composed with (x0*x1, ...) gives x0^2*x1^2
        let z0sq = HomogPoly::var(vz, 0, Q).pow(2);
        let x0x1 = HomogPoly::var(vx, 0, Q).multiply(&HomogPoly::var(vx, 1, Q));
        let forms = vec![x0x1.clone(), x0x1.clone(), x0x1.clone()];
        assert_eq!(z0sq.substitute(&forms).unwrap().to_string(), "x0^2*x1^2");

        // identity substitution
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let f = random_poly(vz, 2, Q, &mut rng);
        let id: Vec<HomogPoly> = (0..3).map(|i| HomogPoly::var(vz, i, Q)).collect();
        assert_eq!(f.substitute(&id).unwrap(), f);

        // degree mismatch
        let bad = vec![x0x1.clone(), x0x1.clone(), HomogPoly::var(vx, 0, Q)];
        assert_eq!(z0sq.substitute(&bad), Err(DegreeMismatch));
    }

    #[test]
    fn substitute_hessian_pencil_composition() {
        // Q = z0*z2 - z1^2 composed with the Hessian entries (6x0, 0, 6x1)
        // of x0^3 + x1^3 expands to 36*x0*x1 - 0.
        let vz = VarSet::z(3);
        let vx = VarSet::x(2);
        let q = HomogPoly::parse("z0*z2 - z1^2", vz, Q).unwrap();
        let h = vec![
            HomogPoly::parse("6*x0", vx, Q).unwrap(),
            HomogPoly::zero(vx, 1, Q),
            HomogPoly::parse("6*x1", vx, Q).unwrap(),
        ];
        assert_eq!(q.substitute(&h).unwrap().to_string(), "36*x0*x1");
    }

    #[test]
    fn substitute_is_ring_morphism() {
        let vz = VarSet::z(3);
        let vx = VarSet::x(2);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10 {
            let f = random_poly(vz, 2, Q, &mut rng);
            let g = random_poly(vz, 2, Q, &mut rng);
            let phi: Vec<HomogPoly> = (0..3).map(|_| random_poly(vx, 2, Q, &mut rng)).collect();
            assert_eq!(
                f.add(&g).substitute(&phi).unwrap(),
                f.substitute(&phi)
                    .unwrap()
                    .add(&g.substitute(&phi).unwrap())
            );
            assert_eq!(
                f.multiply(&g).substitute(&phi).unwrap(),
                f.substitute(&phi)
                    .unwrap()
                    .multiply(&g.substitute(&phi).unwrap())
            );
        }
    }

    #[test]
    fn leibniz_rule() {
        let vx = VarSet::x(3);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..100 {
            let f = random_poly(vx, rng.gen_range(1..4), Q, &mut rng);
            let g = random_poly(vx, rng.gen_range(1..4), Q, &mut rng);
            let i = rng.gen_range(0..3);
            let lhs = f.multiply(&g).partial_derivative(i);
            let rhs = f
                .partial_derivative(i)
                .multiply(&g)
                .add(&f.multiply(&g.partial_derivative(i)));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn mixed_partials_commute() {
        let vx = VarSet::x(4);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let f = random_poly(vx, 4, Q, &mut rng);
            let i = rng.gen_range(0..4);
            let j = rng.gen_range(0..4);
            assert_eq!(
                f.partial_derivative(i).partial_derivative(j),
                f.partial_derivative(j).partial_derivative(i)
            );
        }
    }

    #[test]
    fn macaulay_matrix_examples() {
        let vx = VarSet::x(2);
        let x0 = HomogPoly::var(vx, 0, Q);
        let (m, cols) = macaulay_mult_matrix(std::slice::from_ref(&x0), 1);
        // multiplication by x0 from scalars into degree-1 forms: selects x0
        assert_eq!((m.rows, m.cols), (2, 1));
        assert_eq!(m.at(0, 0), &Q.one());
        assert_eq!(m.at(1, 0), &Q.zero());
        assert_eq!(cols.len(), 1);

        // one generator at its own degree: the single column is the
        // coefficient vector
        let f = HomogPoly::parse("2*x0^2 - 3*x0*x1 + x1^2", vx, Q).unwrap();
        let (m, _) = macaulay_mult_matrix(std::slice::from_ref(&f), 2);
        assert_eq!((m.rows, m.cols), (3, 1));
        assert_eq!(m.col(0), f.coeff_vector());
    }

    #[test]
    fn macaulay_matches_direct_expansion() {
        let vx = VarSet::x(3);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..10 {
            let gens: Vec<HomogPoly> = (0..3).map(|_| random_poly(vx, 2, Q, &mut rng)).collect();
            let (mat, cols) = macaulay_mult_matrix(&gens, 3);
            // random coefficient tuple
            let coefs: Vec<FieldScalar> = (0..cols.len())
                .map(|_| Q.from_i64(rng.gen_range(-4..=4)))
                .collect();
            let image = mat.mul_vec(&coefs);
            let mut direct = HomogPoly::zero(vx, 3, Q);
            for ((gi, m), c) in cols.iter().zip(&coefs) {
                let cof = HomogPoly::monomial(vx, m.clone(), c.clone());
                direct = direct.add(&cof.multiply(&gens[*gi]));
            }
            assert_eq!(direct.coeff_vector(), image);
        }
    }

    #[test]
    fn divide_by_cofactor() {
        let vx = VarSet::x(3);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let f = random_poly(vx, 3, Q, &mut rng);
        let g = random_poly(vx, 2, Q, &mut rng);
        let prod = f.multiply(&g);
        let back = prod.divide_by(&f).unwrap();
        assert_eq!(back, g);
        // a generic cubic does not divide a generic quintic
        let other = random_poly(vx, 5, Q, &mut rng);
        assert!(other.divide_by(&f).is_none());
    }

    #[test]
    fn fp_roots_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        // X^2 - 1 over F_7
        let f = FpPoly::new(vec![6, 0, 1], 7);
        assert_eq!(fp_univariate_roots(&f, &mut rng), vec![1, 6]);
        // X^2 + 1 over F_7: -1 is a non-residue mod 7 (oracle: exhaustion)
        let f = FpPoly::new(vec![1, 0, 1], 7);
        let brute: Vec<u64> = (0..7).filter(|&x| f.evaluate(x) == 0).collect();
        assert!(brute.is_empty());
        assert_eq!(fp_univariate_roots(&f, &mut rng), brute);
        // X^3 - X over F_p
        for p in [5u64, 13, 101] {
            let f = FpPoly::new(vec![0, p - 1, 0, 1], p);
            assert_eq!(fp_univariate_roots(&f, &mut rng), vec![0, 1, p - 1]);
        }
    }

    #[test]
    fn fp_roots_match_exhaustion_small_p() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for p in [3u64, 7, 31, 101] {
            for _ in 0..20 {
                let deg = rng.gen_range(1..6);
                let mut coeffs: Vec<u64> = (0..=deg).map(|_| rng.gen_range(0..p)).collect();
                if coeffs.iter().all(|&c| c == 0) {
                    coeffs[deg] = 1;
                }
                let f = FpPoly::new(coeffs, p);
                if f.is_zero() || f.deg() == 0 {
                    continue;
                }
                let brute: Vec<u64> = (0..p).filter(|&x| f.evaluate(x) == 0).collect();
                assert_eq!(fp_univariate_roots(&f, &mut rng), brute, "p={p} f={:?}", f);
            }
        }
    }

    #[test]
    fn text_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..100 {
            let nv = rng.gen_range(1..4);
            let vars = if rng.gen_bool(0.5) {
                VarSet::x(nv)
            } else {
                VarSet::z(nv)
            };
            let d = rng.gen_range(0..5);
            let mut f = HomogPoly::zero(vars, d, Q);
            for m in monomial_basis(vars, d) {
                if rng.gen_bool(0.6) {
                    let num = rng.gen_range(-20..=20);
                    let den = rng.gen_range(1..=12);
                    f.add_term(
                        m,
                        FieldScalar::Rat(num_rational::BigRational::new(num.into(), den.into())),
                    );
                }
            }
            let printed = f.to_string();
            let back = HomogPoly::parse(&printed, vars, Q).unwrap_or_else(|e| {
                panic!("failed to parse `{printed}`: {e}");
            });
            // bit-exact round trip (degree of the zero polynomial excepted)
            if f.is_zero() {
                assert!(back.is_zero());
            } else {
                assert_eq!(back, f, "round trip failed for `{printed}`");
            }
        }
    }

    #[test]
    fn parse_specific_strings() {
        let vx = VarSet::x(3);
        let f = HomogPoly::parse("x0^3+x1^3+x2^3", vx, Q).unwrap();
        assert_eq!(f.num_terms(), 3);
        assert_eq!(f.degree, 3);
        let g = HomogPoly::parse("3*x0*x1*x2", vx, Q).unwrap();
        assert_eq!(g.to_string(), "3*x0*x1*x2");
        let h = HomogPoly::parse("-1/2*x0^2*x1 + x1^3", vx, Q).unwrap();
        assert_eq!(h.to_string(), "-1/2*x0^2*x1 + x1^3");
    }
}
