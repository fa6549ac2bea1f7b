//! Degree-4 recovery.
//!
//! For even `n` the Hessian variety of a generic quartic lies on a unique
//! quadratic Veronese variety, recovered through linear syzygies; a minimal
//! graded free resolution of the Veronese ideal is computed degree by
//! degree; the tail differential presents the twisted canonical module,
//! whose degree-0 sections give a chart isomorphism onto `P^n`; inverting
//! the chart parametrizes the Veronese; pulling the leftover quadric back
//! gives a quartic `G`, and a linear solve against the Hessian map of `G`
//! produces the group element that carries `G` back to the answer.
//!
//! For `n = 1` the recovery is a closed-form pattern read off the pencil of
//! conics through the four Hessian points.

use crate::forward::{ideal_graded_piece_unchecked, GradedSubspace};
use crate::linalg::{ExactMatrix, FieldKind, FieldScalar};
use crate::poly::{macaulay_mult_matrix, monomial_basis, HomogPoly, Monomial, PolyMatrix, VarSet};
use crate::symsq::{act, hessian_map_forms, rho_inverse, GroupElement};
use crate::{Error, Result};

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut num = 1usize;
    let mut den = 1usize;
    for i in 0..k {
        num *= n - i;
        den *= i + 1;
    }
    num / den
}

/// Expected dimension of the space of quadrics through a quadratic Veronese
/// re-embedding of `P^n`.
pub fn expected_veronese_quadrics(n: usize) -> usize {
    let nn = binom(n + 2, 2); // N + 1 ambient coordinates
    binom(nn + 1, 2) - binom(n + 4, 4)
}

fn sym_n_from_zvars(vars: VarSet) -> Result<usize> {
    let m = vars.count;
    (0..m)
        .find(|&n| (n + 1) * (n + 2) / 2 == m)
        .ok_or_else(|| Error::InvalidInput(format!("{m} is not a symmetric-square dimension")))
}

// ---------------------------------------------------------------------------
// Step 1: the Veronese ideal inside I_2
// ---------------------------------------------------------------------------

/// Extract the quadrics of the unique Veronese variety containing the
/// Hessian variety with quadric space `i2`.
///
/// The linear syzygies `Z` of a basis of `i2` form a Macaulay kernel;
/// `J_2` is the smallest subspace `W ⊆ I_2` with `Z ⊆ S_1 ⊗ W` (the span
/// of all syzygy components) and must have codimension one. Returns
/// `(J_2, dim Z)`.
pub fn veronese_from_quadrics(i2: &GradedSubspace) -> Result<(GradedSubspace, usize)> {
    let n = sym_n_from_zvars(i2.vars)?;
    let a1 = expected_veronese_quadrics(n) + 1;
    if i2.degree != 2 {
        return Err(Error::InvalidInput(
            "the quadric space must live in degree 2".into(),
        ));
    }
    if i2.dim() != a1 {
        return Err(Error::SyzygyRankMismatch(format!(
            "expected {a1} quadrics for a quartic Hessian variety in this ambient space, got {}",
            i2.dim()
        )));
    }
    let gens = i2.basis_forms();
    let (mat, cols) = macaulay_mult_matrix(&gens, 3);
    let ker = mat.kernel();
    let zdim = ker.cols;
    if zdim == 0 {
        return Err(Error::SyzygyRankMismatch(
            "the quadrics have no linear syzygies".into(),
        ));
    }
    // Syzygy components: for each kernel column and each variable, the
    // vector of generator coefficients.
    let kind = i2.kind;
    let nvars = i2.vars.count;
    let mut rows: Vec<Vec<FieldScalar>> = Vec::new();
    for kc in 0..ker.cols {
        for v in 0..nvars {
            let mut row = vec![kind.zero(); gens.len()];
            for (ci, (gi, m)) in cols.iter().enumerate() {
                if m.0[v] == 1 {
                    row[*gi] = row[*gi].add(ker.at(ci, kc));
                }
            }
            rows.push(row);
        }
    }
    let comb = ExactMatrix::from_rows(rows, kind);
    let (r, pivots) = comb.rref();
    if pivots.len() != a1 - 1 {
        return Err(Error::SyzygyRankMismatch(format!(
            "syzygy components span dimension {}, expected codimension one ({})",
            pivots.len(),
            a1 - 1
        )));
    }
    let mut j2_forms = Vec::new();
    for i in 0..pivots.len() {
        let mut f = HomogPoly::zero(i2.vars, 2, kind);
        for (gi, g) in gens.iter().enumerate() {
            f = f.add(&g.scale(r.at(i, gi)));
        }
        j2_forms.push(f);
    }
    Ok((GradedSubspace::from_forms(i2.vars, 2, kind, j2_forms), zdim))
}

// ---------------------------------------------------------------------------
// Step 2a: graded minimal free resolution
// ---------------------------------------------------------------------------

/// A truncated minimal free resolution `R ← P_1 ← … ← P_r ← 0` of `R/J`,
/// stored as differentials with twist labels.
pub struct GradedResolution {
    /// `A_1` is the row of ideal generators; `A_i`, `i ≥ 2`, are syzygy
    /// matrices. `A_i · A_{i+1} = 0` exactly.
    pub differentials: Vec<PolyMatrix>,
    /// Ranks of `R, P_1, …, P_r`.
    pub ranks: Vec<usize>,
    /// Per-module generator twists (`R` has twist 0).
    pub twists: Vec<Vec<i64>>,
    pub base: GradedSubspace,
}

impl GradedResolution {
    pub fn rank_signature(&self) -> Vec<usize> {
        self.ranks.clone()
    }

    /// One representative twist per module; panics if a module mixes twists
    /// (the certified cases do not).
    pub fn twist_signature(&self) -> Vec<i64> {
        self.twists
            .iter()
            .map(|t| {
                assert!(t.iter().all(|&x| x == t[0]), "mixed twists in one module");
                t[0]
            })
            .collect()
    }

    pub fn last(&self) -> &PolyMatrix {
        self.differentials
            .last()
            .expect("resolutions have at least one differential")
    }

    pub fn is_complex(&self) -> bool {
        self.differentials
            .windows(2)
            .all(|w| w[0].is_zero_product(&w[1]))
    }

    pub fn is_minimal(&self) -> bool {
        self.differentials.iter().all(|d| d.has_no_constant_entry())
    }
}

/// Syzygies in one degree: the kernel of the stacked Macaulay map sending
/// cofactor tuples `(h_j)` of degree `deg - ct_j` to `Σ_j h_j · col_j`.
/// Returns the matrix together with the column labels
/// `(column index, cofactor monomial)`.
fn syzygies_in_degree(
    cols: &[Vec<HomogPoly>],
    col_twists: &[i64],
    row_twists: &[i64],
    vars: VarSet,
    kind: FieldKind,
    deg: i64,
) -> (ExactMatrix, Vec<(usize, Monomial)>) {
    let mut col_labels: Vec<(usize, Monomial)> = Vec::new();
    for (j, &ct) in col_twists.iter().enumerate() {
        if deg < ct {
            continue;
        }
        for m in monomial_basis(vars, (deg - ct) as u32) {
            col_labels.push((j, m));
        }
    }
    let mut row_offsets = Vec::new();
    let mut total_rows = 0usize;
    let mut row_index: Vec<std::collections::BTreeMap<Monomial, usize>> = Vec::new();
    for &rt in row_twists {
        row_offsets.push(total_rows);
        if deg >= rt {
            let block = monomial_basis(vars, (deg - rt) as u32);
            total_rows += block.len();
            row_index.push(block.into_iter().enumerate().map(|(i, m)| (m, i)).collect());
        } else {
            row_index.push(Default::default());
        }
    }
    let mut mat = ExactMatrix::zero(total_rows, col_labels.len(), kind);
    for (ci, (j, cof)) in col_labels.iter().enumerate() {
        for (r, entry) in cols[*j].iter().enumerate() {
            if entry.is_zero() {
                continue;
            }
            for (em, ec) in entry.terms() {
                let e: Vec<u32> = em.0.iter().zip(&cof.0).map(|(a, b)| a + b).collect();
                let ri = row_offsets[r] + row_index[r][&Monomial(e)];
                let v = mat.at(ri, ci).add(ec);
                mat.set(ri, ci, v);
            }
        }
    }
    (mat, col_labels)
}

fn kernel_to_tuples(
    ker: &ExactMatrix,
    labels: &[(usize, Monomial)],
    vars: VarSet,
    kind: FieldKind,
    col_twists: &[i64],
    deg: i64,
) -> Vec<Vec<HomogPoly>> {
    (0..ker.cols)
        .map(|kc| {
            let mut tuple: Vec<HomogPoly> = col_twists
                .iter()
                .map(|&ct| HomogPoly::zero(vars, (deg - ct).max(0) as u32, kind))
                .collect();
            for (ri, (j, m)) in labels.iter().enumerate() {
                if !ker.at(ri, kc).is_zero() {
                    tuple[*j].add_term(m.clone(), ker.at(ri, kc).clone());
                }
            }
            tuple
        })
        .collect()
}

/// Clear denominators and content across a whole tuple: one common scalar
/// turning every coefficient into an integer with trivial joint content.
fn integer_normalized_tuple(tuple: &[HomogPoly]) -> Vec<HomogPoly> {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::{One, Zero};
    let mut lcm = BigInt::one();
    for f in tuple {
        for (_, c) in f.terms() {
            match c {
                FieldScalar::Rat(r) => lcm = lcm.lcm(r.denom()),
                _ => return tuple.to_vec(),
            }
        }
    }
    let mut gcd = BigInt::zero();
    for f in tuple {
        for (_, c) in f.terms() {
            if let FieldScalar::Rat(r) = c {
                gcd = gcd.gcd(&(r.numer() * (&lcm / r.denom())));
            }
        }
    }
    if gcd.is_zero() {
        return tuple.to_vec();
    }
    let scale = FieldScalar::Rat(num_rational::BigRational::new(lcm, gcd));
    tuple.iter().map(|f| f.scale(&scale)).collect()
}

fn integer_normalized(f: &HomogPoly) -> HomogPoly {
    integer_normalized_tuple(std::slice::from_ref(f))
        .pop()
        .unwrap()
}

/// Reduce a polynomial tuple into `F_p`; fails when a denominator is
/// divisible by `p`.
fn tuple_to_fp(tuple: &[HomogPoly], p: u64) -> Option<Vec<HomogPoly>> {
    tuple.iter().map(|f| f.to_fp(p).ok()).collect()
}

fn tuple_cols_to_fp(cols: &[Vec<HomogPoly>], p: u64) -> Option<Vec<Vec<HomogPoly>>> {
    cols.iter().map(|t| tuple_to_fp(t, p)).collect()
}

/// Certificate that no new minimal generators appear at this degree: the
/// lift of the previous degree spans the whole kernel. Over the rationals
/// the sandwich `rank_p(lift) ≤ rank_Q(lift) ≤ dim_Q(ker) ≤ dim_p(ker)`
/// turns equality of the two outer `F_p` numbers into an exact proof.
/// Returns `None` when the certificate does not apply (so the caller must
/// do the exact computation).
fn no_new_generators_mod_p(
    cols: &[Vec<HomogPoly>],
    col_twists: &[i64],
    row_twists: &[i64],
    vars: VarSet,
    deg: i64,
    prev_tuples: &[Vec<HomogPoly>],
    p: u64,
) -> Option<bool> {
    let kind_p = FieldKind::Prime(p);
    let cols_p: Option<Vec<Vec<HomogPoly>>> = cols.iter().map(|t| tuple_to_fp(t, p)).collect();
    let cols_p = cols_p?;
    let (mat, labels) = syzygies_in_degree(&cols_p, col_twists, row_twists, vars, kind_p, deg);
    let kdim = labels.len() - mat.rank();
    let lifted: Option<Vec<Vec<FieldScalar>>> = prev_tuples
        .iter()
        .flat_map(|t| {
            (0..vars.count).map(move |v| {
                tuple_to_fp(t, p).map(|tp| {
                    tp.iter()
                        .flat_map(|f| f.multiply(&HomogPoly::var(vars, v, kind_p)).coeff_vector())
                        .collect::<Vec<_>>()
                })
            })
        })
        .collect();
    let lifted = lifted?;
    let ldim = if lifted.is_empty() {
        0
    } else {
        ExactMatrix::from_rows(lifted, kind_p).rank()
    };
    assert!(ldim <= kdim, "lift escaped the kernel; arithmetic bug");
    Some(ldim == kdim)
}

/// Incremental row reducer for flat coefficient vectors.
struct SpanReducer {
    rows: Vec<Vec<FieldScalar>>,
    pivots: Vec<usize>,
}

impl SpanReducer {
    fn new() -> SpanReducer {
        SpanReducer {
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    /// Reduce `v` against the span; if a nonzero residue remains, absorb it
    /// and return true.
    fn insert(&mut self, mut v: Vec<FieldScalar>) -> bool {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !v[p].is_zero() {
                let f = v[p].clone();
                for (x, y) in v.iter_mut().zip(row) {
                    *x = x.sub(&f.mul(y));
                }
            }
        }
        match v.iter().position(|x| !x.is_zero()) {
            None => false,
            Some(p) => {
                let lead = v[p].inv();
                for x in v.iter_mut() {
                    *x = x.mul(&lead);
                }
                self.rows.push(v);
                self.pivots.push(p);
                true
            }
        }
    }
}

/// Minimal graded free resolution of `R/J` for a space of quadrics `J_2`
/// expected to cut a quadratic Veronese re-embedding of `P^n` (`n = 2k`).
///
/// Differentials are computed degree by degree as Macaulay kernels; minimal
/// generators are the complement of the lift of the previous degree. The
/// coordinate ring is 2-regular, so generators are searched in twists
/// `t+1` and `t+2` only. The shape is certified a posteriori: `N - n`
/// steps, final rank `n+1` in twist `N - k`, injective tail, zero
/// compositions, no constant entries, and a Hilbert-function identity.
pub fn graded_resolution(j2: &GradedSubspace, n: usize) -> Result<GradedResolution> {
    let kind = j2.kind;
    let vars = j2.vars;
    let big_n = vars.count - 1;
    assert!(
        n >= 2 && n % 2 == 0,
        "the canonical-module chart needs even n >= 2"
    );
    let k = n / 2;
    let codim = big_n - n;
    let final_twist = (big_n - k) as i64;
    let expected_rank = n + 1;
    let cert_prime = crate::forward::DEFAULT_PRIME;

    // work with a denominator-free generator basis of the same span
    let base_forms: Vec<HomogPoly> = j2.basis_forms().iter().map(integer_normalized).collect();

    let mut differentials: Vec<PolyMatrix> = Vec::new();
    let mut ranks = vec![1usize, j2.dim()];
    let mut twists: Vec<Vec<i64>> = vec![vec![0], vec![2; j2.dim()]];
    differentials.push(PolyMatrix::new(
        vec![base_forms.clone()],
        vec![0],
        vec![2; j2.dim()],
    ));

    let mut cur_cols: Vec<Vec<HomogPoly>> = base_forms.into_iter().map(|f| vec![f]).collect();
    let mut cur_col_twists: Vec<i64> = vec![2; j2.dim()];
    let mut cur_row_twists: Vec<i64> = vec![0];

    for _step in 2..=codim {
        let t_min = *cur_col_twists.iter().min().unwrap();
        let mut gens: Vec<(Vec<HomogPoly>, i64)> = Vec::new();
        let mut prev_kernel_tuples: Vec<Vec<HomogPoly>> = Vec::new();
        for deg in t_min + 1..=t_min + 2 {
            // Fast path: a prime-field sandwich certifies that the lift of
            // the previous degree already spans every syzygy here.
            if !prev_kernel_tuples.is_empty() {
                if let Some(true) = no_new_generators_mod_p(
                    &cur_cols,
                    &cur_col_twists,
                    &cur_row_twists,
                    vars,
                    deg,
                    &prev_kernel_tuples,
                    cert_prime,
                ) {
                    continue;
                }
            }
            let (mat, labels) =
                syzygies_in_degree(&cur_cols, &cur_col_twists, &cur_row_twists, vars, kind, deg);
            let ker = mat.kernel();
            let tuples = kernel_to_tuples(&ker, &labels, vars, kind, &cur_col_twists, deg);
            // the lift of the previous degree spans the non-minimal part
            let flat = |tuple: &[HomogPoly]| -> Vec<FieldScalar> {
                tuple.iter().flat_map(|f| f.coeff_vector()).collect()
            };
            let mut reducer = SpanReducer::new();
            for t in &prev_kernel_tuples {
                for v in 0..vars.count {
                    let lifted: Vec<HomogPoly> = t
                        .iter()
                        .map(|f| f.multiply(&HomogPoly::var(vars, v, kind)))
                        .collect();
                    reducer.insert(flat(&lifted));
                }
            }
            for t in &tuples {
                if reducer.insert(flat(t)) {
                    gens.push((integer_normalized_tuple(t), deg));
                }
            }
            prev_kernel_tuples = tuples;
        }
        if gens.is_empty() {
            return Err(Error::ResolutionShapeMismatch(format!(
                "no syzygy generators at homological step {} (degrees {}, {})",
                differentials.len() + 1,
                t_min + 1,
                t_min + 2
            )));
        }
        let new_twists: Vec<i64> = gens.iter().map(|(_, d)| *d).collect();
        let entries: Vec<Vec<HomogPoly>> = (0..cur_cols.len())
            .map(|r| gens.iter().map(|(t, _)| t[r].clone()).collect())
            .collect();
        differentials.push(PolyMatrix::new(
            entries,
            cur_col_twists.clone(),
            new_twists.clone(),
        ));
        ranks.push(gens.len());
        twists.push(new_twists.clone());

        cur_row_twists = cur_col_twists;
        cur_col_twists = new_twists;
        cur_cols = gens.into_iter().map(|(t, _)| t).collect();
    }

    if *ranks.last().unwrap() != expected_rank {
        return Err(Error::ResolutionShapeMismatch(format!(
            "final module has rank {}, expected {expected_rank}",
            ranks.last().unwrap()
        )));
    }
    if twists.last().unwrap().iter().any(|&t| t != final_twist) {
        return Err(Error::ResolutionShapeMismatch(format!(
            "final twists {:?}, expected {final_twist}",
            twists.last().unwrap()
        )));
    }
    // injective tail: no syzygies just above the final twist. A vanishing
    // kernel mod p certifies a vanishing kernel over the rationals.
    for deg in final_twist + 1..=final_twist + 2 {
        let certified = match tuple_cols_to_fp(&cur_cols, cert_prime) {
            Some(cols_p) => {
                let (mat, labels) = syzygies_in_degree(
                    &cols_p,
                    &cur_col_twists,
                    &cur_row_twists,
                    vars,
                    FieldKind::Prime(cert_prime),
                    deg,
                );
                labels.len() == mat.rank()
            }
            None => false,
        };
        if certified {
            continue;
        }
        let (mat, _) =
            syzygies_in_degree(&cur_cols, &cur_col_twists, &cur_row_twists, vars, kind, deg);
        if mat.kernel().cols != 0 {
            return Err(Error::ResolutionShapeMismatch(
                "the final differential has syzygies; the chain does not terminate".into(),
            ));
        }
    }

    let res = GradedResolution {
        differentials,
        ranks,
        twists,
        base: j2.clone(),
    };
    if !res.is_complex() {
        return Err(Error::ResolutionShapeMismatch(
            "differentials do not compose to zero".into(),
        ));
    }
    if !res.is_minimal() {
        return Err(Error::ResolutionShapeMismatch(
            "a differential has a constant entry".into(),
        ));
    }
    // Hilbert bookkeeping: Σ (-1)^i dim (P_i)_D equals the dimension of
    // degree-2D forms on P^n.
    let nvars = vars.count;
    for dd in 0..=(final_twist + 2) {
        let mut acc: i64 = 0;
        for (i, tw) in res.twists.iter().enumerate() {
            let sign = if i % 2 == 0 { 1 } else { -1 };
            for &t in tw {
                if dd >= t {
                    acc += sign * binom((dd - t) as usize + nvars - 1, nvars - 1) as i64;
                }
            }
        }
        let expect = binom(2 * dd as usize + n, n) as i64;
        if acc != expect {
            return Err(Error::ResolutionShapeMismatch(format!(
                "Hilbert mismatch in degree {dd}: complex gives {acc}, the Veronese needs {expect}"
            )));
        }
    }
    Ok(res)
}

// ---------------------------------------------------------------------------
// Step 2b: chart isomorphism from the canonical module
// ---------------------------------------------------------------------------

/// A chart of the inverse Veronese isomorphism: `n+1` linear forms with
/// `φ = [c_0 : … : c_n]` on `D(z_s) ∩ V`, where `c_pivot = z_s`.
#[derive(Clone, Debug)]
pub struct ChartIso {
    pub s: usize,
    pub pivot: usize,
    pub forms: Vec<HomogPoly>,
}

/// Chart solve at a fixed chart `z_s` and pivot `p`: for each `i ≠ p` the
/// unique relation `λ·z_s·e_i + c'·e_p` in the degree-1 span of the tail
/// rows is found, normalized to `λ = 1`, and `c_i := -c'`.
pub fn chart_iso_at(res: &GradedResolution, s: usize, pivot: usize) -> Result<ChartIso> {
    let tail = res.last();
    let rows: Vec<Vec<HomogPoly>> = (0..tail.rows)
        .map(|r| (0..tail.cols).map(|c| tail.at(r, c).clone()).collect())
        .collect();
    chart_iso_from_rows(&rows, res.base.vars, res.base.kind, s, pivot)
}

/// Chart solve on the chart `z_s`, searching pivots. Pivot relations exist
/// only for favorable module bases; [`chart_iso_sections`] is the
/// basis-independent solve the recovery pipeline uses.
pub fn chart_iso(res: &GradedResolution, s: usize) -> Result<ChartIso> {
    let ncomp = res.last().cols;
    let mut last = Error::ChartNotGeneric("no pivot attempted".into());
    for p in 0..ncomp {
        match chart_iso_at(res, s, p) {
            Ok(c) => return Ok(c),
            Err(e) => last = e,
        }
    }
    Err(last)
}

/// Basis-independent chart solve: linear tuples `(u_0, …, u_n)` with
/// `Σ_j r_j·u_j ≡ 0 (mod J_2)` for every relation row `r` of the tail
/// differential. The solutions are the twisted sections of the module; the
/// space has dimension `n + 1` and every nonzero solution induces the same
/// projective map `[u_0 : … : u_n]`, so the first kernel vector is taken.
///
/// This covers arbitrary module bases; the pivot solve below additionally
/// reproduces the normalization `c_pivot = z_s` when the basis admits it.
pub fn chart_iso_sections(res: &GradedResolution, n: usize) -> Result<ChartIso> {
    let vars = res.base.vars;
    let kind = res.base.kind;
    let tail = res.last();
    let ncomp = tail.cols;
    assert_eq!(
        ncomp,
        n + 1,
        "tail rank does not match the target dimension"
    );
    let rows: Vec<Vec<HomogPoly>> = (0..tail.rows)
        .map(|r| (0..tail.cols).map(|c| tail.at(r, c).clone()).collect())
        .collect();
    let lin_rows: Vec<&Vec<HomogPoly>> = rows
        .iter()
        .filter(|r| r.iter().all(|f| f.is_zero() || f.degree == 1))
        .collect();
    if lin_rows.is_empty() {
        return Err(Error::ChartNotGeneric(
            "no linear relations available".into(),
        ));
    }
    let nmon = vars.count;
    let q2len = monomial_basis(vars, 2).len();
    let unknowns = ncomp * nmon;
    let mut sys_rows: Vec<Vec<FieldScalar>> = Vec::new();
    for rel in &lin_rows {
        // Σ_j rel_j · u_j reduced mod J_2 must vanish; contributions are
        // linear in the unknown coefficients of the u_j
        let mut block: Vec<Vec<FieldScalar>> = vec![vec![kind.zero(); unknowns]; q2len];
        for (j, rj) in rel.iter().enumerate() {
            if rj.is_zero() {
                continue;
            }
            for v in 0..nmon {
                let prod = res
                    .base
                    .reduce(&rj.multiply(&HomogPoly::var(vars, v, kind)));
                for (ri, c) in prod.coeff_vector().into_iter().enumerate() {
                    block[ri][j * nmon + v] = block[ri][j * nmon + v].add(&c);
                }
            }
        }
        sys_rows.extend(block.into_iter().filter(|r| r.iter().any(|v| !v.is_zero())));
    }
    let ker = ExactMatrix::from_rows(sys_rows, kind).kernel();
    if ker.cols != n + 1 {
        return Err(Error::ChartNotGeneric(format!(
            "section space has dimension {}, expected {}",
            ker.cols,
            n + 1
        )));
    }
    let forms: Vec<HomogPoly> = (0..ncomp)
        .map(|j| {
            let mut f = HomogPoly::zero(vars, 1, kind);
            for v in 0..nmon {
                f.add_term(
                    Monomial({
                        let mut e = vec![0u32; nmon];
                        e[v] = 1;
                        e
                    }),
                    ker.at(j * nmon + v, 0).clone(),
                );
            }
            f
        })
        .collect();
    if forms.iter().all(|f| f.is_zero()) {
        return Err(Error::ChartNotGeneric("section solve returned zero".into()));
    }
    // the map is projective; a common integer scaling keeps later
    // arithmetic small
    Ok(ChartIso {
        s: 0,
        pivot: 0,
        forms: integer_normalized_tuple(&forms),
    })
}

/// The same solve on an explicit relation matrix (rows are relations among
/// the module generators `e_0, …, e_n`).
pub fn chart_iso_from_rows(
    rows: &[Vec<HomogPoly>],
    vars: VarSet,
    kind: FieldKind,
    s: usize,
    pivot: usize,
) -> Result<ChartIso> {
    let ncomp = rows.first().map(|r| r.len()).unwrap_or(0);
    assert!(pivot < ncomp, "pivot out of range");
    assert!(s < vars.count, "chart variable out of range");
    let lin_rows: Vec<&Vec<HomogPoly>> = rows
        .iter()
        .filter(|r| r.iter().all(|f| f.is_zero() || f.degree == 1))
        .collect();
    if lin_rows.is_empty() {
        return Err(Error::ChartNotGeneric(
            "no linear relations available".into(),
        ));
    }
    let nmon = vars.count;
    let mut forms: Vec<HomogPoly> = vec![HomogPoly::zero(vars, 1, kind); ncomp];
    forms[pivot] = HomogPoly::var(vars, s, kind);
    for i in 0..ncomp {
        if i == pivot {
            continue;
        }
        // unknowns: μ_k per linear row, then λ; equations: components
        // j ∉ {i, pivot} vanish, component i equals λ·z_s
        let comp_offset = |j: usize| if j < pivot { j } else { j - 1 };
        let nrows = (ncomp - 1) * nmon;
        let ncols = lin_rows.len() + 1;
        let mut mat = ExactMatrix::zero(nrows, ncols, kind);
        for (k, row) in lin_rows.iter().enumerate() {
            for (j, entry) in row.iter().enumerate() {
                if j == pivot {
                    continue;
                }
                for (mi, v) in entry.coeff_vector().into_iter().enumerate() {
                    mat.set(comp_offset(j) * nmon + mi, k, v);
                }
            }
        }
        mat.set(comp_offset(i) * nmon + s, ncols - 1, kind.from_i64(-1));
        let ker = mat.kernel();
        if ker.cols != 1 {
            return Err(Error::ChartNotGeneric(format!(
                "relation space for component {i} on chart z{s} has dimension {}",
                ker.cols
            )));
        }
        let lambda = ker.at(ncols - 1, 0).clone();
        if lambda.is_zero() {
            return Err(Error::ChartNotGeneric(format!(
                "component {i} admits no multiple of z{s} relation"
            )));
        }
        let mut cprime = HomogPoly::zero(vars, 1, kind);
        for (k, row) in lin_rows.iter().enumerate() {
            let mu = ker.at(k, 0).div(&lambda);
            cprime = cprime.add(&row[pivot].scale(&mu));
        }
        forms[i] = cprime.neg();
    }
    Ok(ChartIso { s, pivot, forms })
}

// ---------------------------------------------------------------------------
// Step 2c: parametrization of the Veronese
// ---------------------------------------------------------------------------

/// Invert the chart: quadrics `(F_0, …, F_N)` on `P^n` with
/// `F_i(φ(z))·z_j ≡ F_j(φ(z))·z_i (mod J_3)` for all `i < j`. The solution
/// space is one-dimensional, spanned by the genuine parametrization; the
/// result is verified exactly (`J_2` vanishes on it, components are
/// independent, `φ ∘ v = id`).
pub fn parametrize_veronese(phi: &ChartIso, j2: &GradedSubspace) -> Result<Vec<HomogPoly>> {
    let kind = j2.kind;
    let zv = j2.vars;
    let big_n1 = zv.count;
    let n = sym_n_from_zvars(zv)?;
    let vx = VarSet::x(n + 1);
    assert_eq!(phi.forms.len(), n + 1, "chart arity mismatch");

    // degree-3 piece of J: columns of the degree-3 Macaulay matrix
    let (mac3, _) = macaulay_mult_matrix(&j2.basis_forms(), 3);
    let j3_rows: Vec<Vec<FieldScalar>> = (0..mac3.cols).map(|c| mac3.col(c)).collect();
    let j3 = GradedSubspace::from_rows(zv, 3, kind, j3_rows);

    let xmons = monomial_basis(vx, 2);
    let num_unknowns = big_n1 * xmons.len();
    let composed: Vec<HomogPoly> = xmons
        .iter()
        .map(|m| {
            HomogPoly::monomial(vx, m.clone(), kind.one())
                .substitute(&phi.forms)
                .expect("chart components are linear")
        })
        .collect();

    let z3len = monomial_basis(zv, 3).len();
    let pair_rows = |i: usize, j: usize| -> Vec<Vec<FieldScalar>> {
        let mut block: Vec<Vec<FieldScalar>> = vec![vec![kind.zero(); num_unknowns]; z3len];
        for (mi, comp) in composed.iter().enumerate() {
            let plus = j3.reduce(&comp.multiply(&HomogPoly::var(zv, j, kind)));
            let minus = j3.reduce(&comp.multiply(&HomogPoly::var(zv, i, kind)));
            for (ri, v) in plus.coeff_vector().into_iter().enumerate() {
                block[ri][i * xmons.len() + mi] = block[ri][i * xmons.len() + mi].add(&v);
            }
            for (ri, v) in minus.coeff_vector().into_iter().enumerate() {
                block[ri][j * xmons.len() + mi] = block[ri][j * xmons.len() + mi].sub(&v);
            }
        }
        block
            .into_iter()
            .filter(|r| r.iter().any(|v| !v.is_zero()))
            .collect()
    };
    // the pairs through index 0 usually suffice; more are appended until the
    // solution space is a line
    let mut pairs: Vec<(usize, usize)> = (1..big_n1).map(|j| (0, j)).collect();
    for i in 1..big_n1 {
        for j in i + 1..big_n1 {
            pairs.push((i, j));
        }
    }
    let mut rows: Vec<Vec<FieldScalar>> = Vec::new();
    let mut consumed = 0;
    let ker = loop {
        let batch_end = if consumed == 0 {
            big_n1 - 1
        } else {
            consumed + 3
        };
        while consumed < pairs.len().min(batch_end) {
            let (i, j) = pairs[consumed];
            rows.extend(pair_rows(i, j));
            consumed += 1;
        }
        let ker = ExactMatrix::from_rows(rows.clone(), kind).kernel();
        if ker.cols <= 1 || consumed == pairs.len() {
            break ker;
        }
    };
    if ker.cols != 1 {
        return Err(Error::ParametrizationFailed(format!(
            "inversion system has solution dimension {}, expected 1",
            ker.cols
        )));
    }
    let v: Vec<HomogPoly> = (0..big_n1)
        .map(|zi| {
            let mut f = HomogPoly::zero(vx, 2, kind);
            for (mi, m) in xmons.iter().enumerate() {
                f.add_term(m.clone(), ker.at(zi * xmons.len() + mi, 0).clone());
            }
            f
        })
        .collect();
    let v = integer_normalized_tuple(&v);

    for q in j2.basis_forms() {
        if !q.substitute(&v).unwrap().is_zero() {
            return Err(Error::ParametrizationFailed(format!(
                "quadric `{q}` does not vanish on the parametrization"
            )));
        }
    }
    let coeff_rows: Vec<Vec<FieldScalar>> = v.iter().map(|f| f.coeff_vector()).collect();
    if ExactMatrix::from_rows(coeff_rows, kind).rank() != big_n1 {
        return Err(Error::ParametrizationFailed(
            "parametrization components are linearly dependent".into(),
        ));
    }
    let phi_of_v: Vec<HomogPoly> = phi
        .forms
        .iter()
        .map(|c| c.substitute(&v).expect("linear into quadrics"))
        .collect();
    for i in 0..=n {
        for j in i + 1..=n {
            let xi = HomogPoly::var(vx, i, kind);
            let xj = HomogPoly::var(vx, j, kind);
            if !phi_of_v[i]
                .multiply(&xj)
                .sub(&phi_of_v[j].multiply(&xi))
                .is_zero()
            {
                return Err(Error::ParametrizationFailed(
                    "chart does not invert the parametrization".into(),
                ));
            }
        }
    }
    Ok(v)
}

// ---------------------------------------------------------------------------
// Steps 3 and 4: the quartic G and the group element
// ---------------------------------------------------------------------------

/// Intermediate artifacts of one quartic recovery, for tracing.
pub struct QuarticTrace {
    pub j2: Vec<HomogPoly>,
    pub syzygy_dim: usize,
    pub ranks: Vec<usize>,
    pub twists: Vec<i64>,
    pub chart: ChartIso,
    pub parametrization: Vec<HomogPoly>,
    pub q_extra: HomogPoly,
    pub image_quartic: HomogPoly,
    pub composed_matrix: ExactMatrix,
    pub group_element: GroupElement,
}

/// Recover the quartic whose Hessian variety has quadric space `i2`
/// (`n` even).
pub fn recover_quartic(i2: &GradedSubspace, n: usize) -> Result<HomogPoly> {
    recover_quartic_traced(i2, n).map(|(f, _)| f)
}

pub fn recover_quartic_traced(i2: &GradedSubspace, n: usize) -> Result<(HomogPoly, QuarticTrace)> {
    if n % 2 != 0 || n < 2 {
        return Err(Error::InvalidInput(
            "quartic recovery needs even n >= 2".into(),
        ));
    }
    let kind = i2.kind;
    let (j2, zdim) = veronese_from_quadrics(i2)?;
    let res = graded_resolution(&j2, n)?;

    let big_n1 = i2.vars.count;
    let chart = chart_iso_sections(&res, n)?;
    let v = parametrize_veronese(&chart, &j2)?;

    // the leftover quadric: first basis element of I_2 outside J_2
    let q_extra = i2
        .basis_forms()
        .into_iter()
        .find(|q| !j2.contains(q))
        .ok_or_else(|| Error::SyzygyRankMismatch("I_2 equals J_2".into()))?;
    let g_quartic = integer_normalized(&q_extra.substitute(&v).expect("quadric into quadrics"));
    if g_quartic.is_zero() {
        return Err(Error::VerificationFailed(
            "pulled-back quartic is zero".into(),
        ));
    }

    // solve A·v(y) = μ·h_G(y) coefficientwise
    let hg = hessian_map_forms(&g_quartic);
    let vx = VarSet::x(n + 1);
    let ymons = monomial_basis(vx, 2);
    let unknowns = big_n1 * big_n1 + 1;
    let mut rows: Vec<Vec<FieldScalar>> = Vec::new();
    for i in 0..big_n1 {
        for m in &ymons {
            let mut row = vec![kind.zero(); unknowns];
            for j in 0..big_n1 {
                row[i * big_n1 + j] = v[j].coeff(m);
            }
            row[unknowns - 1] = hg.forms[i].coeff(m).neg();
            rows.push(row);
        }
    }
    let ker = ExactMatrix::from_rows(rows, kind).kernel();
    if ker.cols != 1 {
        return Err(Error::RhoSolveAmbiguous(ker.cols));
    }
    if ker.at(unknowns - 1, 0).is_zero() {
        return Err(Error::RhoSolveAmbiguous(0));
    }
    let mut a = ExactMatrix::zero(big_n1, big_n1, kind);
    for i in 0..big_n1 {
        for j in 0..big_n1 {
            a.set(i, j, ker.at(i * big_n1 + j, 0).clone());
        }
    }
    let g = rho_inverse(&a)?;
    let f = act(&g.inverse(), &g_quartic).normalized();

    let piece = ideal_graded_piece_unchecked(&f, 2);
    if !piece.equals(i2) {
        return Err(Error::VerificationFailed(
            "recovered quartic does not reproduce the input quadric space".into(),
        ));
    }
    let trace = QuarticTrace {
        j2: j2.basis_forms(),
        syzygy_dim: zdim,
        ranks: res.rank_signature(),
        twists: res.twist_signature(),
        chart,
        parametrization: v,
        q_extra,
        image_quartic: g_quartic,
        composed_matrix: a,
        group_element: g,
    };
    Ok((f, trace))
}

// ---------------------------------------------------------------------------
// n = 1: the pencil pattern
// ---------------------------------------------------------------------------

fn conic_coeff(q: &HomogPoly, e0: u32, e1: u32, e2: u32) -> FieldScalar {
    q.coeff(&Monomial(vec![e0, e1, e2]))
}

/// The first pattern conic of a binary quartic `Σ a_i x0^(4-i) x1^i`:
/// `3a4 z00² - 3a3 z00z01 + 2a2 z01² + a2 z00z11 - 3a1 z01z11 + 3a0 z11²`.
pub fn h41_first_conic(a: &[FieldScalar; 5]) -> HomogPoly {
    let kind = a[0].kind();
    let zv = VarSet::z(3);
    let k = |v: i64| kind.from_i64(v);
    HomogPoly::from_terms(
        zv,
        2,
        kind,
        [
            (Monomial(vec![2, 0, 0]), k(3).mul(&a[4])),
            (Monomial(vec![1, 1, 0]), k(-3).mul(&a[3])),
            (Monomial(vec![0, 2, 0]), k(2).mul(&a[2])),
            (Monomial(vec![1, 0, 1]), a[2].clone()),
            (Monomial(vec![0, 1, 1]), k(-3).mul(&a[1])),
            (Monomial(vec![0, 0, 2]), k(3).mul(&a[0])),
        ],
    )
}

/// The second pattern conic of a binary quartic.
pub fn h41_second_conic(a: &[FieldScalar; 5]) -> HomogPoly {
    let kind = a[0].kind();
    let zv = VarSet::z(3);
    let k = |v: i64| kind.from_i64(v);
    HomogPoly::from_terms(
        zv,
        2,
        kind,
        [
            (Monomial(vec![2, 0, 0]), k(9).mul(&a[3]).mul(&a[3])),
            (
                Monomial(vec![1, 1, 0]),
                k(-36)
                    .mul(&a[2])
                    .mul(&a[3])
                    .add(&k(72).mul(&a[1]).mul(&a[4])),
            ),
            (
                Monomial(vec![0, 2, 0]),
                k(20)
                    .mul(&a[2])
                    .mul(&a[2])
                    .sub(&k(144).mul(&a[0]).mul(&a[4])),
            ),
            (
                Monomial(vec![1, 0, 1]),
                k(16)
                    .mul(&a[2])
                    .mul(&a[2])
                    .sub(&k(18).mul(&a[1]).mul(&a[3])),
            ),
            (
                Monomial(vec![0, 1, 1]),
                k(-36)
                    .mul(&a[1])
                    .mul(&a[2])
                    .add(&k(72).mul(&a[0]).mul(&a[3])),
            ),
            (Monomial(vec![0, 0, 2]), k(9).mul(&a[1]).mul(&a[1])),
        ],
    )
}

/// Recover a binary quartic from the pencil of conics through its four
/// Hessian points: intersect the pencil with the hyperplane
/// `coef(z01²) = 2·coef(z00·z11)`, read the five coefficients off the
/// first pattern, and check the second pattern up to pencil mixing.
pub fn recover_h41(pencil: &GradedSubspace) -> Result<[FieldScalar; 5]> {
    let kind = pencil.kind;
    if pencil.vars != VarSet::z(3) || pencil.degree != 2 {
        return Err(Error::InvalidInput(
            "the pencil must consist of conics in the three binary symmetric coordinates".into(),
        ));
    }
    if pencil.dim() != 2 {
        return Err(Error::InconsistentPencil(format!(
            "expected a pencil (dimension 2), got dimension {}",
            pencil.dim()
        )));
    }
    let basis = pencil.basis_forms();
    let hyper = |q: &HomogPoly| {
        let b3 = conic_coeff(q, 1, 0, 1);
        conic_coeff(q, 0, 2, 0).sub(&b3.add(&b3))
    };
    let la = hyper(&basis[0]);
    let lb = hyper(&basis[1]);
    if la.is_zero() && lb.is_zero() {
        return Err(Error::InconsistentPencil(
            "the pencil lies inside the pattern hyperplane".into(),
        ));
    }
    let q1 = basis[0].scale(&lb).sub(&basis[1].scale(&la));
    if q1.is_zero() {
        return Err(Error::InconsistentPencil(
            "hyperplane intersection is empty".into(),
        ));
    }

    let third = kind.from_i64(3).inv();
    let a4 = conic_coeff(&q1, 2, 0, 0).mul(&third);
    let a3 = conic_coeff(&q1, 1, 1, 0).mul(&third).neg();
    let a2 = conic_coeff(&q1, 1, 0, 1);
    let a1 = conic_coeff(&q1, 0, 1, 1).mul(&third).neg();
    let a0 = conic_coeff(&q1, 0, 0, 2).mul(&third);
    // the z01² coefficient reads a2 a second time
    if conic_coeff(&q1, 0, 2, 0) != a2.add(&a2) {
        return Err(Error::InconsistentPencil(
            "pattern reads of the middle coefficient disagree".into(),
        ));
    }
    let a = [a0, a1, a2, a3, a4];
    if !h41_first_conic(&a).proportional(&q1) {
        return Err(Error::InconsistentPencil(
            "first-pattern reconstruction failed".into(),
        ));
    }
    if !pencil.contains(&h41_second_conic(&a)) {
        return Err(Error::InconsistentPencil(
            "second-pattern conic is outside the pencil".into(),
        ));
    }
    Ok(a)
}

/// Binary quartic coefficients `a_i` of `Σ a_i x0^(4-i) x1^i`.
pub fn binary_quartic_coeffs(f: &HomogPoly) -> [FieldScalar; 5] {
    assert_eq!(f.vars.count, 2);
    assert_eq!(f.degree, 4);
    std::array::from_fn(|i| f.coeff(&Monomial(vec![4 - i as u32, i as u32])))
}

pub fn binary_quartic_from_coeffs(a: &[FieldScalar; 5], kind: FieldKind) -> HomogPoly {
    let vx = VarSet::x(2);
    let mut f = HomogPoly::zero(vx, 4, kind);
    for (i, v) in a.iter().enumerate() {
        f.add_term(Monomial(vec![4 - i as u32, i as u32]), v.clone());
    }
    f
}
