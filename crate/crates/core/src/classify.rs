//! Polynomial invariants and the classifier for plane automorphisms by the
//! transcendence degree `n(F)` of their field of invariants.

use crate::budget::Budget;
use crate::endo::PolyMap;
use crate::error::{Error, Result};
use crate::ideal::{fixpoint_locus, FixpointLocus};
use crate::linalg::{RowEchelon, SquareMatrix};
use crate::poly::{Monomial, MultiPoly};
use crate::scalar::modular::{inv_mod, mul_mod, rational_reconstruct, sub_mod};
use crate::scalar::{Field, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;

pub const DEFAULT_ORDER_BOUND: u32 = 64;
pub const DEFAULT_INVARIANT_DEGREE_BOUND: u32 = 8;
const PATIENCE: usize = 10;
const FORM_EXPONENT_BOUND: i64 = 12;

/// Monomials of total degree `<= d`, by decreasing degree and then
/// decreasing lex order.
fn monomials_up_to(n: usize, d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i == cur.len() {
            out.push(Monomial::from_exps(cur));
            return;
        }
        for e in 0..=left {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, d, &mut cur, &mut out);
    out.sort_by(|a, b| b.degree().cmp(&a.degree()).then_with(|| b.cmp(a)));
    out
}

fn powers<T: Clone>(v: &[T], d: u32, one: T, mul: impl Fn(&T, &T) -> T) -> Vec<Vec<T>> {
    v.iter()
        .map(|x| {
            let mut p = vec![one.clone()];
            for k in 1..=d as usize {
                let next = mul(&p[k - 1], x);
                p.push(next);
            }
            p
        })
        .collect()
}

/// Incremental reduced row echelon form over `F_p`.
struct ModEchelon {
    p: u64,
    ncols: usize,
    pivots: Vec<(usize, Vec<u64>)>,
}

impl ModEchelon {
    fn add_row(&mut self, mut row: Vec<u64>) -> bool {
        let p = self.p;
        for (c, pr) in &self.pivots {
            let f = row[*c];
            if f != 0 {
                for (x, y) in row.iter_mut().zip(pr) {
                    *x = sub_mod(*x, mul_mod(f, *y, p), p);
                }
            }
        }
        let Some(col) = row.iter().position(|&v| v != 0) else {
            return false;
        };
        let inv = inv_mod(row[col], p).expect("nonzero pivot");
        for x in row.iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        for (_, pr) in self.pivots.iter_mut() {
            let f = pr[col];
            if f != 0 {
                for (x, y) in pr.iter_mut().zip(&row) {
                    *x = sub_mod(*x, mul_mod(f, *y, p), p);
                }
            }
        }
        self.pivots.push((col, row));
        true
    }

    fn nullspace(&self) -> Vec<Vec<u64>> {
        let p = self.p;
        let pivot_cols: Vec<usize> = self.pivots.iter().map(|(c, _)| *c).collect();
        (0..self.ncols)
            .filter(|c| !pivot_cols.contains(c))
            .map(|free| {
                let mut v = vec![0; self.ncols];
                v[free] = 1;
                for (pc, pr) in &self.pivots {
                    v[*pc] = sub_mod(0, pr[free], p);
                }
                v
            })
            .collect()
    }
}

/// Evaluation matrix of `f o F - f` at random points mod `p`, until its rank
/// is stable. Reduction can only lower the rank, so the nullspace dimension
/// bounds the dimension of the exact invariant space from above.
fn modular_kernel(map: &PolyMap, monos: &[Monomial], d: u32) -> Option<ModEchelon> {
    let (red, mods) = map.reduced(0..4)?;
    let p = red.prime();
    let n = map.nvars();
    let mut rng = ChaCha8Rng::seed_from_u64(0x1a7);
    let mut ech = ModEchelon { p, ncols: monos.len(), pivots: Vec::new() };
    let mut stale = 0;
    while stale < PATIENCE && ech.pivots.len() + 1 < monos.len() {
        let q: Vec<u64> = (0..n).map(|_| rng.gen_range(0..p)).collect();
        let fq: Vec<u64> = mods.iter().map(|m| m.eval(&q)).collect();
        let pq = powers(&q, d, 1, |a, b| mul_mod(*a, *b, p));
        let pf = powers(&fq, d, 1, |a, b| mul_mod(*a, *b, p));
        let row = monos
            .iter()
            .map(|m| {
                let (mut a, mut b) = (1, 1);
                for (i, &e) in m.exps().iter().enumerate() {
                    a = mul_mod(a, pf[i][e as usize], p);
                    b = mul_mod(b, pq[i][e as usize], p);
                }
                sub_mod(a, b, p)
            })
            .collect();
        if ech.add_row(row) {
            stale = 0;
        } else {
            stale += 1;
        }
    }
    Some(ech)
}

/// Lifts the modular nullspace to `Q` by rational reconstruction.
fn lift_kernel(map: &PolyMap, monos: &[Monomial], ech: &ModEchelon) -> Option<Vec<MultiPoly>> {
    if map.field() != &Field::Rationals {
        return None;
    }
    ech.nullspace()
        .into_iter()
        .map(|v| {
            let coeffs = v
                .into_iter()
                .map(|c| rational_reconstruct(c, ech.p).map(Scalar::rational))
                .collect::<Option<Vec<_>>>()?;
            Some(MultiPoly::from_terms(map.ring(), monos.iter().cloned().zip(coeffs)))
        })
        .collect()
}

fn all_invariant(map: &PolyMap, fs: &[MultiPoly]) -> Result<bool> {
    for f in fs {
        if &map.pullback(f)? != f {
            return Ok(false);
        }
    }
    Ok(true)
}

fn exact_row(map: &PolyMap, monos: &[Monomial], d: u32, q: &[Scalar]) -> Result<Vec<Scalar>> {
    let field = map.field();
    let fq = map.apply_point(q)?;
    let mul = |a: &Scalar, b: &Scalar| a * b;
    let pq = powers(q, d, field.one(), mul);
    let pf = powers(&fq, d, field.one(), mul);
    Ok(monos
        .iter()
        .map(|m| {
            let (mut a, mut b) = (field.one(), field.one());
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    a = &a * &pf[i][e as usize];
                    b = &b * &pq[i][e as usize];
                }
            }
            &a - &b
        })
        .collect())
}

fn kernel_polys(map: &PolyMap, monos: &[Monomial], kernel: Vec<Vec<Scalar>>) -> Vec<MultiPoly> {
    kernel.into_iter().map(|v| MultiPoly::from_terms(map.ring(), monos.iter().cloned().zip(v))).collect()
}

fn sort_basis(mut basis: Vec<MultiPoly>) -> Vec<MultiPoly> {
    let lead = |f: &MultiPoly| f.sorted_terms().first().map(|t| t.0.clone());
    basis.sort_by(|a, b| a.total_degree().cmp(&b.total_degree()).then_with(|| lead(b).cmp(&lead(a))));
    basis
}

/// Basis of the invariant polynomials of total degree `<= d`.
///
/// A rank computation mod `p` bounds the dimension from above. Over `Q` the
/// modular nullspace is lifted by rational reconstruction; otherwise (or if
/// lifting fails) candidates come from the exact nullspace of the evaluation
/// matrix at random integer points. Every candidate is verified by
/// composition. The basis is the reduced echelon basis for the column order
/// (degree, lex) descending, listed by increasing degree and then decreasing
/// leading monomial, so `1` comes first.
pub fn invariant_basis(map: &PolyMap, d: u32, budget: &Budget) -> Result<Vec<MultiPoly>> {
    let ring = map.ring();
    let monos = monomials_up_to(ring.nvars(), d);
    budget.check_terms(monos.len(), "invariant search space")?;
    let modular = modular_kernel(map, &monos, d);
    let bound = modular.as_ref().map(|e| monos.len() - e.pivots.len());
    if bound == Some(1) {
        return Ok(vec![MultiPoly::one(ring)]);
    }
    if let Some(lifted) = modular.as_ref().and_then(|e| lift_kernel(map, &monos, e)) {
        if all_invariant(map, &lifted)? {
            return Ok(sort_basis(lifted));
        }
    }
    let field = map.field();
    let mut rng = ChaCha8Rng::seed_from_u64(0x1b7);
    let mut ech = RowEchelon::new(field, monos.len());
    let n = ring.nvars();
    let mut target = bound.map_or(monos.len(), |k| monos.len() - k);
    let max_points = 8 * monos.len() + 64;
    let mut used = 0;
    let mut radius: i64 = 2 * (d as i64 + 2);
    loop {
        let mut stale = 0;
        while ech.rank() < target && stale < PATIENCE * 4 && used < max_points {
            let q: Vec<Scalar> = (0..n).map(|_| field.from_i64(rng.gen_range(-radius..=radius))).collect();
            used += 1;
            if ech.add_row(exact_row(map, &monos, d, &q)?) {
                stale = 0;
            } else {
                stale += 1;
            }
        }
        let candidates = kernel_polys(map, &monos, ech.nullspace());
        if all_invariant(map, &candidates)? {
            return Ok(sort_basis(candidates));
        }
        if used >= max_points {
            return Err(Error::Internal("invariant solver did not converge".into()));
        }
        target = target.max(ech.rank() + 1);
        radius *= 4;
    }
}

/// Reference solver: composes every monomial with the map and solves the
/// resulting coefficient system. Exponentially more expensive; kept as an
/// oracle for [`invariant_basis`].
pub fn invariant_basis_symbolic(map: &PolyMap, d: u32, budget: &Budget) -> Result<Vec<MultiPoly>> {
    let ring = map.ring();
    let monos = monomials_up_to(ring.nvars(), d);
    let images = monos
        .iter()
        .map(|m| {
            let f = MultiPoly::monomial(ring, m.clone(), map.field().one());
            let g = map.pullback(&f)?;
            budget.check_terms(g.num_terms(), "composed monomial")?;
            Ok(&g - &f)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut rows: std::collections::BTreeMap<Monomial, Vec<Scalar>> = std::collections::BTreeMap::new();
    for (j, img) in images.iter().enumerate() {
        for (m, c) in img.terms() {
            rows.entry(m.clone()).or_insert_with(|| vec![map.field().zero(); monos.len()])[j] = c.clone();
        }
    }
    let mut ech = RowEchelon::new(map.field(), monos.len());
    for row in rows.into_values() {
        ech.add_row(row);
    }
    Ok(sort_basis(kernel_polys(map, &monos, ech.nullspace())))
}

/// Exponents `(p, q)` with `|p|, |q| <= bound` such that `x^p y^q` is
/// invariant under `(a^n x, a^m b y)`: `np + mq = 0` and `ord(b) | q`.
pub fn diag_invariant_monomials(n: i64, m: i64, a: &Scalar, b: &Scalar, bound: i64) -> Result<Vec<(i64, i64)>> {
    if n == 0 && m == 0 {
        return Err(Error::InvalidFormParameters("(n, m) = (0, 0)".into()));
    }
    if a.is_zero() || a.is_root_of_unity()? {
        return Err(Error::InvalidFormParameters(format!("a = {a} has finite order")));
    }
    let Some(ord) = b.root_of_unity_order()? else {
        return Err(Error::InvalidFormParameters(format!("b = {b} is not a root of unity")));
    };
    let ord = ord as i64;
    let mut out = Vec::new();
    for p in -bound..=bound {
        for q in -bound..=bound {
            if (p, q) != (0, 0) && n * p + m * q == 0 && q % ord == 0 {
                out.push((p, q));
            }
        }
    }
    out.sort_by_key(|&(p, q)| (p.abs() + q.abs(), !(p >= 0 && q >= 0), -p, -q));
    Ok(out)
}

/// The two normal forms of plane automorphisms with `n(F) = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NormalForm {
    /// `(a^n x, a^m b y)` with `b` a root of unity and `a` not.
    Phi1 { n: i64, m: i64, a: Scalar, b: Scalar },
    /// `(a x, b y + P(x))` with `a`, `b` roots of unity and `P != 0`.
    Phi2 { a: Scalar, b: Scalar, p: MultiPoly },
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormalForm::Phi1 { n, m, a, b } => write!(f, "Phi1(n={n}, m={m}, a={a}, b={b})"),
            NormalForm::Phi2 { a, b, p } => write!(f, "Phi2(a={a}, b={b}, P={p})"),
        }
    }
}

fn single_linear(c: &MultiPoly, var: usize) -> Option<Scalar> {
    if c.num_terms() != 1 {
        return None;
    }
    let (m, s) = c.terms().next()?;
    (m.degree() == 1 && m.exps()[var] == 1).then(|| s.clone())
}

fn match_phi1(c1: &Scalar, c2: &Scalar) -> Result<Option<NormalForm>> {
    if c1.is_one() {
        if !c2.is_root_of_unity()? {
            return Ok(Some(NormalForm::Phi1 { n: 0, m: 1, a: c2.clone(), b: c2.field().one() }));
        }
        return Ok(None);
    }
    if c1.is_root_of_unity()? {
        return Ok(None);
    }
    for s in 1..=FORM_EXPONENT_BOUND {
        for n in 1..=s {
            let Some(a) = c1.nth_root(n as u32) else { continue };
            let k = s - n;
            let ms: &[i64] = if k == 0 { &[0] } else { &[k, -k] };
            for &m in ms {
                let b = c2 / &a.pow(m)?;
                if b.is_root_of_unity()? {
                    return Ok(Some(NormalForm::Phi1 { n, m, a, b }));
                }
            }
        }
    }
    Ok(None)
}

/// Literal pattern match of the coordinates against the normal forms.
pub fn recognize_normal_form(map: &PolyMap) -> Result<Option<NormalForm>> {
    if map.nvars() != 2 {
        return Err(Error::InvalidInput("normal forms are defined for the plane".into()));
    }
    let (f1, f2) = (&map.coords()[0], &map.coords()[1]);
    let Some(a) = single_linear(f1, 0) else {
        return Ok(None);
    };
    if let Some(c2) = single_linear(f2, 1) {
        if let Some(form) = match_phi1(&a, &c2)? {
            return Ok(Some(form));
        }
    }
    let y = Monomial::var(2, 1, 1);
    let b = f2.coeff(&y);
    let rest: MultiPoly = f2 - &MultiPoly::monomial(map.ring(), y, b.clone());
    if b.is_zero() || rest.is_zero() || rest.involves(1) {
        return Ok(None);
    }
    if a.is_root_of_unity()? && b.is_root_of_unity()? {
        return Ok(Some(NormalForm::Phi2 { a, b, p: rest }));
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassifyOptions {
    pub order_bound: u32,
    pub invariant_degree_bound: u32,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions { order_bound: DEFAULT_ORDER_BOUND, invariant_degree_bound: DEFAULT_INVARIANT_DEGREE_BOUND }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    NEquals(u32),
    NAtMost(u32),
    Inconclusive,
}

impl Verdict {
    pub fn n(&self) -> Option<u32> {
        match self {
            Verdict::NEquals(k) => Some(*k),
            _ => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::NEquals(k) => write!(f, "n = {k}"),
            Verdict::NAtMost(k) => write!(f, "n <= {k}"),
            Verdict::Inconclusive => write!(f, "inconclusive"),
        }
    }
}

/// Everything the classifier looked at, in cascade order.
#[derive(Clone, Debug, Default)]
pub struct Evidence {
    pub order_bound: u32,
    pub order: Option<u32>,
    pub invariant_degree_searched: Option<u32>,
    pub fixpoint_locus: Option<FixpointLocus>,
    pub fixpoint: Option<Vec<Scalar>>,
    pub jacobian: Option<SquareMatrix>,
    pub unipotent: Option<bool>,
    pub identity: bool,
    pub budget_exhausted: Option<String>,
    pub steps: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct ClassificationReport {
    pub verdict: Verdict,
    pub matched_form: Option<NormalForm>,
    pub witnesses: Vec<MultiPoly>,
    pub evidence: Evidence,
}

/// Runs the cascade: finite order gives `n = 2`; a recognized normal form or
/// a nonconstant polynomial invariant gives `n = 1`; a unique fixpoint with
/// unipotent, nonidentity differential gives `n = 0`.
pub fn classify_plane(map: &PolyMap, opts: &ClassifyOptions, budget: &Budget) -> Result<ClassificationReport> {
    if map.nvars() != 2 {
        return Err(Error::InvalidInput("the classifier handles automorphisms of the plane".into()));
    }
    let mut report = ClassificationReport {
        verdict: Verdict::Inconclusive,
        matched_form: None,
        witnesses: Vec::new(),
        evidence: Evidence { order_bound: opts.order_bound, identity: map.is_identity(), ..Evidence::default() },
    };
    match cascade(map, opts, budget, &mut report) {
        Err(Error::BudgetExceeded(msg)) => {
            report.verdict = Verdict::Inconclusive;
            report.evidence.budget_exhausted = Some(msg);
            Ok(report)
        }
        other => other.map(|_| report),
    }
}

fn cascade(map: &PolyMap, opts: &ClassifyOptions, budget: &Budget, report: &mut ClassificationReport) -> Result<()> {
    let ev = &mut report.evidence;
    ev.order = map.order_up_to(opts.order_bound, budget)?;
    if let Some(d) = ev.order {
        ev.steps.push(format!("F^{d} = Id, so the invariant field has finite index"));
        report.verdict = Verdict::NEquals(2);
        return Ok(());
    }
    ev.steps.push(format!("no period up to {}", opts.order_bound));
    report.matched_form = recognize_normal_form(map)?;
    if let Some(form) = &report.matched_form {
        ev.steps.push(format!("coordinates match {form}"));
    }
    for d in 1..=opts.invariant_degree_bound {
        ev.invariant_degree_searched = Some(d);
        let basis = invariant_basis(map, d, budget)?;
        let nonconstant: Vec<MultiPoly> = basis.into_iter().filter(|f| !f.is_constant()).collect();
        if !nonconstant.is_empty() {
            for w in &nonconstant {
                if &map.pullback(w)? != w {
                    return Err(Error::Internal(format!("witness {w} is not invariant")));
                }
            }
            ev.steps.push(format!("nonconstant invariants of degree <= {d}, verified by composition"));
            report.witnesses = nonconstant;
            break;
        }
    }
    if report.matched_form.is_some() || !report.witnesses.is_empty() {
        ev.steps.push("infinite order and a nonconstant invariant leave n = 1".into());
        report.verdict = Verdict::NEquals(1);
        return Ok(());
    }
    ev.steps.push(format!("no nonconstant invariant of degree <= {}", opts.invariant_degree_bound));
    let (locus, point) = fixpoint_locus(map, budget)?;
    ev.fixpoint_locus = Some(locus);
    let Some(p) = point else {
        ev.steps.push("fixpoint set is not a single rational point".into());
        return Ok(());
    };
    let jac = map.jacobian_at(&p)?;
    let unipotent = jac.is_unipotent();
    ev.fixpoint = Some(p);
    ev.unipotent = Some(unipotent);
    ev.jacobian = Some(jac);
    if unipotent && !ev.identity {
        ev.steps.push("unique fixpoint with unipotent differential and F != Id".into());
        report.verdict = Verdict::NEquals(0);
    } else {
        ev.steps.push("unique fixpoint but the differential is not unipotent".into());
    }
    Ok(())
}
