//! Exact scalars and dense exact linear algebra.
//!
//! Two coefficient fields are supported: arbitrary-precision rationals and
//! prime fields `F_p` for an odd prime `p` (chosen once per run). All matrix
//! routines are exact; over the rationals the forward elimination is
//! fraction-free (Bareiss) to keep intermediate entries at minor size.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;

/// A scalar in the active coefficient field: a reduced rational or a residue
/// in `F_p`. The two kinds never mix inside one computation.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum FieldScalar {
    Rat(BigRational),
    Fp { v: u64, p: u64 },
}

/// Which field a computation runs over.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FieldKind {
    Rational,
    Prime(u64),
}

impl FieldKind {
    pub fn zero(&self) -> FieldScalar {
        match self {
            FieldKind::Rational => FieldScalar::Rat(BigRational::zero()),
            FieldKind::Prime(p) => FieldScalar::Fp { v: 0, p: *p },
        }
    }

    pub fn one(&self) -> FieldScalar {
        match self {
            FieldKind::Rational => FieldScalar::Rat(BigRational::one()),
            FieldKind::Prime(p) => FieldScalar::Fp { v: 1, p: *p },
        }
    }

    pub fn from_i64(&self, n: i64) -> FieldScalar {
        match self {
            FieldKind::Rational => FieldScalar::Rat(BigRational::from(BigInt::from(n))),
            FieldKind::Prime(p) => {
                let r = n.rem_euclid(*p as i64) as u64;
                FieldScalar::Fp { v: r, p: *p }
            }
        }
    }
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn powmod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, p);
        }
        b = mulmod(b, b, p);
        e >>= 1;
    }
    acc
}

/// Multiplicative inverse in `F_p`; panics on zero.
pub fn fp_inv(v: u64, p: u64) -> u64 {
    assert!(v % p != 0, "division by zero in F_p");
    powmod(v, p - 2, p)
}

impl FieldScalar {
    pub fn kind(&self) -> FieldKind {
        match self {
            FieldScalar::Rat(_) => FieldKind::Rational,
            FieldScalar::Fp { p, .. } => FieldKind::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldScalar::Rat(r) => r.is_zero(),
            FieldScalar::Fp { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldScalar::Rat(r) => r.is_one(),
            FieldScalar::Fp { v, .. } => *v == 1,
        }
    }

    fn same_field(&self, other: &FieldScalar) {
        match (self, other) {
            (FieldScalar::Rat(_), FieldScalar::Rat(_)) => {}
            (FieldScalar::Fp { p: a, .. }, FieldScalar::Fp { p: b, .. }) if a == b => {}
            _ => panic!("mixed coefficient fields in one computation"),
        }
    }

    pub fn add(&self, other: &FieldScalar) -> FieldScalar {
        self.same_field(other);
        match (self, other) {
            (FieldScalar::Rat(a), FieldScalar::Rat(b)) => FieldScalar::Rat(a + b),
            (FieldScalar::Fp { v: a, p }, FieldScalar::Fp { v: b, .. }) => {
                let s = a + b;
                FieldScalar::Fp {
                    v: if s >= *p { s - p } else { s },
                    p: *p,
                }
            }
            _ => unreachable!(),
        }
    }

    pub fn sub(&self, other: &FieldScalar) -> FieldScalar {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> FieldScalar {
        match self {
            FieldScalar::Rat(a) => FieldScalar::Rat(-a),
            FieldScalar::Fp { v, p } => FieldScalar::Fp {
                v: if *v == 0 { 0 } else { p - v },
                p: *p,
            },
        }
    }

    pub fn mul(&self, other: &FieldScalar) -> FieldScalar {
        self.same_field(other);
        match (self, other) {
            (FieldScalar::Rat(a), FieldScalar::Rat(b)) => FieldScalar::Rat(a * b),
            (FieldScalar::Fp { v: a, p }, FieldScalar::Fp { v: b, .. }) => FieldScalar::Fp {
                v: mulmod(*a, *b, *p),
                p: *p,
            },
            _ => unreachable!(),
        }
    }

    pub fn inv(&self) -> FieldScalar {
        match self {
            FieldScalar::Rat(a) => {
                assert!(!a.is_zero(), "division by zero");
                FieldScalar::Rat(a.recip())
            }
            FieldScalar::Fp { v, p } => FieldScalar::Fp {
                v: fp_inv(*v, *p),
                p: *p,
            },
        }
    }

    pub fn div(&self, other: &FieldScalar) -> FieldScalar {
        self.mul(&other.inv())
    }

    /// Parse either `n` or `n/d`; in `F_p` the quotient is taken mod `p`.
    pub fn parse(s: &str, kind: FieldKind) -> Result<FieldScalar, String> {
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), Some(d.trim())),
            None => (s, None),
        };
        let n: BigInt = num.parse().map_err(|_| format!("bad integer `{num}`"))?;
        let d: BigInt = match den {
            Some(d) => d.parse().map_err(|_| format!("bad integer `{d}`"))?,
            None => BigInt::one(),
        };
        if d.is_zero() {
            return Err("zero denominator".into());
        }
        match kind {
            FieldKind::Rational => Ok(FieldScalar::Rat(BigRational::new(n, d))),
            FieldKind::Prime(p) => {
                let pm = BigInt::from(p);
                let nm = ((n % &pm) + &pm) % &pm;
                let dm = ((d % &pm) + &pm) % &pm;
                let nv: u64 = nm.try_into().unwrap();
                let dv: u64 = dm.try_into().unwrap();
                if dv == 0 {
                    return Err(format!("denominator divisible by p={p}"));
                }
                Ok(FieldScalar::Fp {
                    v: mulmod(nv, fp_inv(dv, p), p),
                    p,
                })
            }
        }
    }

    /// Reduce a rational scalar mod `p`; fails when the denominator is
    /// divisible by `p`.
    pub fn to_fp(&self, p: u64) -> Result<FieldScalar, String> {
        match self {
            FieldScalar::Fp { p: q, .. } if *q == p => Ok(self.clone()),
            FieldScalar::Fp { .. } => Err("scalar lives in a different prime field".into()),
            FieldScalar::Rat(r) => {
                let pm = BigInt::from(p);
                let nm = ((r.numer() % &pm) + &pm) % &pm;
                let dm = ((r.denom() % &pm) + &pm) % &pm;
                let nv: u64 = nm.try_into().unwrap();
                let dv: u64 = dm.try_into().unwrap();
                if dv == 0 {
                    return Err(format!("denominator divisible by p={p}"));
                }
                Ok(FieldScalar::Fp {
                    v: mulmod(nv, fp_inv(dv, p), p),
                    p,
                })
            }
        }
    }
}

impl fmt::Display for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldScalar::Rat(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            FieldScalar::Fp { v, .. } => write!(f, "{v}"),
        }
    }
}

impl fmt::Debug for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Dense matrix over one coefficient field.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    pub rows: usize,
    pub cols: usize,
    entries: Vec<FieldScalar>,
    kind: FieldKind,
}

/// `solve` found the right-hand side outside the column space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NoSolution;

/// `rank1_sym_factor` was handed a matrix whose rank is not one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NotRankOne;

impl ExactMatrix {
    pub fn zero(rows: usize, cols: usize, kind: FieldKind) -> Self {
        ExactMatrix {
            rows,
            cols,
            entries: vec![kind.zero(); rows * cols],
            kind,
        }
    }

    pub fn identity(n: usize, kind: FieldKind) -> Self {
        let mut m = Self::zero(n, n, kind);
        for i in 0..n {
            m.set(i, i, kind.one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<FieldScalar>>, kind: FieldKind) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        for row in &rows {
            assert_eq!(row.len(), c, "ragged rows");
        }
        let entries: Vec<FieldScalar> = rows.into_iter().flatten().collect();
        for e in &entries {
            assert!(e.kind() == kind, "entry field does not match matrix field");
        }
        ExactMatrix {
            rows: r,
            cols: c,
            entries,
            kind,
        }
    }

    pub fn from_i64(rows: &[&[i64]], kind: FieldKind) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| kind.from_i64(v)).collect())
                .collect(),
            kind,
        )
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    pub fn at(&self, r: usize, c: usize) -> &FieldScalar {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: FieldScalar) {
        assert!(
            v.kind() == self.kind,
            "entry field does not match matrix field"
        );
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> Vec<FieldScalar> {
        (0..self.cols).map(|c| self.at(r, c).clone()).collect()
    }

    pub fn col(&self, c: usize) -> Vec<FieldScalar> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> ExactMatrix {
        let mut t = ExactMatrix::zero(self.cols, self.rows, self.kind);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.at(r, c).clone());
            }
        }
        t
    }

    pub fn mat_mul(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mat_mul");
        let mut out = ExactMatrix::zero(self.rows, other.cols, self.kind);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.at(i, j).add(&a.mul(b));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[FieldScalar]) -> Vec<FieldScalar> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in mul_vec");
        (0..self.rows)
            .map(|i| {
                let mut acc = self.kind.zero();
                for j in 0..self.cols {
                    if !self.at(i, j).is_zero() && !v[j].is_zero() {
                        acc = acc.add(&self.at(i, j).mul(&v[j]));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn scale(&self, s: &FieldScalar) -> ExactMatrix {
        let mut out = self.clone();
        for e in out.entries.iter_mut() {
            *e = e.mul(s);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// Matrix inverse; panics when not square, returns `None` when singular.
    pub fn inverse(&self) -> Option<ExactMatrix> {
        assert_eq!(self.rows, self.cols, "inverse needs a square matrix");
        let n = self.rows;
        let mut aug = ExactMatrix::zero(n, 2 * n, self.kind);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.at(i, j).clone());
            }
            aug.set(i, n + i, self.kind.one());
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots.iter().enumerate().any(|(i, &c)| i != c) {
            return None;
        }
        let mut inv = ExactMatrix::zero(n, n, self.kind);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.at(i, n + j).clone());
            }
        }
        Some(inv)
    }

    /// Reduced row-echelon form together with the pivot columns. Pivots are
    /// chosen leftmost-column, first nonzero row; no magnitude pivoting.
    pub fn rref(&self) -> (ExactMatrix, Vec<usize>) {
        match self.kind {
            FieldKind::Prime(_) => self.rref_generic(),
            FieldKind::Rational => self.rref_rational(),
        }
    }

    fn rref_generic(&self) -> (ExactMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !m.at(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = m.at(r, c).inv();
            for j in c..m.cols {
                let v = m.at(r, j).mul(&inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i != r && !m.at(i, c).is_zero() {
                    let f = m.at(i, c).clone();
                    for j in c..m.cols {
                        let v = m.at(i, j).sub(&f.mul(m.at(r, j)));
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    /// Rational path: clear denominators per row, run fraction-free (Bareiss)
    /// forward elimination over the integers, then normalize and back-reduce.
    fn rref_rational(&self) -> (ExactMatrix, Vec<usize>) {
        let mut m: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|i| {
                let mut lcm = BigInt::one();
                for j in 0..self.cols {
                    if let FieldScalar::Rat(r) = self.at(i, j) {
                        if !r.is_zero() {
                            lcm = lcm.lcm(r.denom());
                        }
                    }
                }
                (0..self.cols)
                    .map(|j| match self.at(i, j) {
                        FieldScalar::Rat(r) => r.numer() * (&lcm / r.denom()),
                        _ => unreachable!(),
                    })
                    .collect()
            })
            .collect();

        let (rows, cols) = (self.rows, self.cols);
        let mut pivots: Vec<usize> = Vec::new();
        let mut prev = BigInt::one();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(r, pr);
            for i in r + 1..rows {
                for j in 0..cols {
                    if j == c {
                        continue;
                    }
                    let v = (&m[i][j] * &m[r][c] - &m[i][c] * &m[r][j]) / &prev;
                    m[i][j] = v;
                }
                m[i][c] = BigInt::zero();
            }
            prev = m[r][c].clone();
            pivots.push(c);
            r += 1;
        }

        // Normalize pivot rows to leading 1 and eliminate above the pivots.
        let mut out: Vec<Vec<BigRational>> = m
            .into_iter()
            .map(|row| row.into_iter().map(BigRational::from).collect())
            .collect();
        for (pi, &pc) in pivots.iter().enumerate() {
            let lead = out[pi][pc].clone();
            for v in out[pi].iter_mut() {
                *v /= &lead;
            }
        }
        for (pi, &pc) in pivots.iter().enumerate().rev() {
            for i in 0..pi {
                let f = out[i][pc].clone();
                if f.is_zero() {
                    continue;
                }
                for j in 0..cols {
                    let v = &out[i][j] - &f * &out[pi][j];
                    out[i][j] = v;
                }
            }
        }
        let rmat = ExactMatrix::from_rows(
            out.into_iter()
                .map(|row| row.into_iter().map(FieldScalar::Rat).collect())
                .collect(),
            FieldKind::Rational,
        );
        (rmat, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space, returned as matrix columns.
    /// `self * kernel(self) = 0` exactly; the column count is `cols - rank`.
    pub fn kernel(&self) -> ExactMatrix {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = ExactMatrix::zero(self.cols, free.len(), self.kind);
        for (kc, &fc) in free.iter().enumerate() {
            k.set(fc, kc, self.kind.one());
            for (pi, &pc) in pivots.iter().enumerate() {
                k.set(pc, kc, r.at(pi, fc).neg());
            }
        }
        k
    }

    /// Any particular solution of `self * x = b`.
    pub fn solve(&self, b: &[FieldScalar]) -> Result<Vec<FieldScalar>, NoSolution> {
        assert_eq!(b.len(), self.rows, "rhs length mismatch");
        let mut aug = ExactMatrix::zero(self.rows, self.cols + 1, self.kind);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.at(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (r, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return Err(NoSolution);
        }
        let mut x = vec![self.kind.zero(); self.cols];
        for (pi, &pc) in pivots.iter().enumerate() {
            x[pc] = r.at(pi, self.cols).clone();
        }
        Ok(x)
    }

    /// For a square symmetric matrix of rank one, return `w` with
    /// `self = c * w * w^t` (first nonzero entry of `w` normalized to 1; the
    /// scalar `c` stays implicit). No square roots are taken.
    pub fn rank1_sym_factor(&self) -> Result<Vec<FieldScalar>, NotRankOne> {
        assert_eq!(
            self.rows, self.cols,
            "rank1_sym_factor needs a square matrix"
        );
        let n = self.rows;
        let Some(pr) = (0..n).find(|&i| (0..n).any(|j| !self.at(i, j).is_zero())) else {
            return Err(NotRankOne);
        };
        let pc = (0..n).find(|&j| !self.at(pr, j).is_zero()).unwrap();
        // Any nonzero row of c*w*w^t is proportional to w.
        let mut w: Vec<FieldScalar> = self.row(pr);
        let lead_idx = (0..n).find(|&j| !w[j].is_zero()).unwrap();
        let lead = w[lead_idx].clone();
        for v in w.iter_mut() {
            *v = v.div(&lead);
        }
        if w[pr].is_zero() {
            // Row pr of c*w*w^t is c*w[pr]*w, nonzero only when w[pr] != 0.
            return Err(NotRankOne);
        }
        let c = self.at(pr, pc).div(&w[pr].mul(&w[pc]));
        for i in 0..n {
            for j in 0..n {
                if self.at(i, j) != &c.mul(&w[i].mul(&w[j])) {
                    return Err(NotRankOne);
                }
            }
        }
        Ok(w)
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.at(i, j))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}
