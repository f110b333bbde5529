//! Ideals, reduced Gröbner bases (Buchberger) and fixpoint loci.

use crate::budget::Budget;
use crate::endo::PolyMap;
use crate::error::{Error, Result};
use crate::poly::{same_ring, Monomial, MonomialOrder, MultiPoly, PolyRing, Ring};
use crate::scalar::Scalar;
use serde::Serialize;
use std::cmp::Ordering;
use std::collections::BTreeSet;

/// A finitely generated ideal; zero generators are dropped, so the zero
/// ideal has no generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ideal {
    ring: Ring,
    generators: Vec<MultiPoly>,
}

impl Ideal {
    pub fn new(ring: &Ring, generators: Vec<MultiPoly>) -> Result<Self> {
        if generators.iter().any(|g| !same_ring(g.ring(), ring)) {
            return Err(Error::RingMismatch);
        }
        Ok(Ideal { ring: ring.clone(), generators: generators.into_iter().filter(|g| !g.is_zero()).collect() })
    }

    pub fn parse<S: AsRef<str>>(ring: &Ring, generators: &[S]) -> Result<Self> {
        let gs = generators.iter().map(|s| MultiPoly::parse(ring, s.as_ref())).collect::<Result<Vec<_>>>()?;
        Self::new(ring, gs)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn generators(&self) -> &[MultiPoly] {
        &self.generators
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }
}

/// Terms sorted ascending in the monomial order, so the leading term is last.
type Terms = Vec<(Monomial, Scalar)>;

fn to_terms(p: &MultiPoly) -> Terms {
    let mut v: Terms = p.sorted_terms().into_iter().map(|(m, c)| (m.clone(), c.clone())).collect();
    v.reverse();
    v
}

fn from_terms(ring: &Ring, t: Terms) -> MultiPoly {
    MultiPoly::from_terms(ring, t)
}

fn monic(mut t: Terms) -> Terms {
    if let Some((_, lc)) = t.last() {
        if !lc.is_one() {
            let inv = lc.inv().expect("nonzero leading coefficient");
            for (_, c) in t.iter_mut() {
                *c = &*c * &inv;
            }
        }
    }
    t
}

/// `p - c * m * g`, merging two ascending term lists.
fn sub_mul(order: MonomialOrder, p: &[(Monomial, Scalar)], c: &Scalar, m: &Monomial, g: &[(Monomial, Scalar)]) -> Terms {
    let mut out = Vec::with_capacity(p.len() + g.len());
    let (mut i, mut j) = (0, 0);
    let shifted = |j: usize| g[j].0.mul(m);
    let mut gj: Option<Monomial> = g.first().map(|_| shifted(0));
    while i < p.len() || j < g.len() {
        let take = match (p.get(i), &gj) {
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (Some((pm, _)), Some(gm)) => order.cmp(pm, gm),
            (None, None) => unreachable!(),
        };
        match take {
            Ordering::Less => {
                out.push(p[i].clone());
                i += 1;
            }
            Ordering::Greater => {
                out.push((gj.take().unwrap(), -&(c * &g[j].1)));
                j += 1;
                gj = if j < g.len() { Some(shifted(j)) } else { None };
            }
            Ordering::Equal => {
                let v = &p[i].1 - &(c * &g[j].1);
                if !v.is_zero() {
                    out.push((p[i].0.clone(), v));
                }
                i += 1;
                j += 1;
                gj = if j < g.len() { Some(shifted(j)) } else { None };
            }
        }
    }
    out
}

/// Full normal form of `p` modulo monic polynomials `basis`.
fn normal_form(order: MonomialOrder, mut p: Terms, basis: &[Terms], budget: &Budget) -> Result<Terms> {
    let mut rem: Terms = Vec::new();
    while let Some((lm, lc)) = p.last() {
        match basis.iter().find(|g| g.last().unwrap().0.divides(lm)) {
            Some(g) => {
                let q = g.last().unwrap().0.quotient_of(lm);
                let lc = lc.clone();
                p = sub_mul(order, &p, &lc, &q, g);
                budget.check_terms(p.len(), "reduction")?;
            }
            None => rem.push(p.pop().unwrap()),
        }
    }
    rem.reverse();
    Ok(rem)
}

fn s_poly_terms(order: MonomialOrder, f: &Terms, g: &Terms) -> Terms {
    let (lf, lg) = (&f.last().unwrap().0, &g.last().unwrap().0);
    let l = lf.lcm(lg);
    let one = f.last().unwrap().1.field().one();
    let qf = lf.quotient_of(&l);
    let lcf = &f.last().unwrap().1;
    let fa: Terms = f.iter().map(|(m, c)| (m.mul(&qf), c / lcf)).collect();
    sub_mul(order, &fa, &(&one / &g.last().unwrap().1), &lg.quotient_of(&l), g)
}

/// The S-polynomial `lcm/LT(f) * f - lcm/LT(g) * g` in the ring's order.
pub fn s_polynomial(f: &MultiPoly, g: &MultiPoly) -> Result<MultiPoly> {
    if !same_ring(f.ring(), g.ring()) {
        return Err(Error::RingMismatch);
    }
    if f.is_zero() || g.is_zero() {
        return Ok(MultiPoly::zero(f.ring()));
    }
    let order = f.ring().order();
    Ok(from_terms(f.ring(), s_poly_terms(order, &to_terms(f), &to_terms(g))))
}

/// A reduced Gröbner basis, monic and sorted by decreasing leading monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    ring: Ring,
    basis: Vec<MultiPoly>,
}

impl GroebnerBasis {
    /// The ring (with the order the basis was computed in).
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn basis(&self) -> &[MultiPoly] {
        &self.basis
    }

    pub fn is_unit(&self) -> bool {
        self.basis.len() == 1 && self.basis[0].is_one()
    }

    fn terms(&self) -> Vec<Terms> {
        self.basis.iter().map(to_terms).collect()
    }

    /// Normal form of `f`; `f` may be given in any ring with the same
    /// variables and field.
    pub fn reduce(&self, f: &MultiPoly) -> Result<MultiPoly> {
        self.reduce_with_budget(f, &Budget::default())
    }

    pub fn reduce_with_budget(&self, f: &MultiPoly, budget: &Budget) -> Result<MultiPoly> {
        let f = f.with_ring(&self.ring)?;
        let r = normal_form(self.ring.order(), to_terms(&f), &self.terms(), budget)?;
        Ok(from_terms(&self.ring, r))
    }

    pub fn contains(&self, f: &MultiPoly) -> Result<bool> {
        Ok(self.reduce(f)?.is_zero())
    }
}

/// Normal form of `f` modulo `g`.
pub fn reduce(f: &MultiPoly, g: &GroebnerBasis) -> Result<MultiPoly> {
    g.reduce(f)
}

/// Buchberger's algorithm with the normal selection strategy (smallest lcm
/// by degree, then order, then pair index) and the product and chain criteria.
pub fn buchberger(ideal: &Ideal, order: MonomialOrder, budget: &Budget) -> Result<GroebnerBasis> {
    let ring = ideal.ring.with_order(order);
    let unit = |ring: &Ring| GroebnerBasis { ring: ring.clone(), basis: vec![MultiPoly::one(ring)] };
    let mut g: Vec<Terms> = Vec::new();
    for p in &ideal.generators {
        let t = monic(to_terms(&p.with_ring(&ring)?));
        if t.last().unwrap().0.is_one() {
            return Ok(unit(&ring));
        }
        g.push(t);
    }
    let mut pending: BTreeSet<(usize, usize)> = BTreeSet::new();
    for j in 0..g.len() {
        for i in 0..j {
            pending.insert((i, j));
        }
    }
    let lm = |g: &[Terms], i: usize| g[i].last().unwrap().0.clone();
    let mut treated = 0usize;
    while !pending.is_empty() {
        let &(i, j) = pending
            .iter()
            .min_by(|a, b| {
                let la = lm(&g, a.0).lcm(&lm(&g, a.1));
                let lb = lm(&g, b.0).lcm(&lm(&g, b.1));
                la.degree().cmp(&lb.degree()).then_with(|| order.cmp(&la, &lb)).then_with(|| a.cmp(b))
            })
            .unwrap();
        pending.remove(&(i, j));
        treated += 1;
        if treated > budget.max_pairs {
            return Err(Error::BudgetExceeded(format!("more than {} critical pairs", budget.max_pairs)));
        }
        let (li, lj) = (lm(&g, i), lm(&g, j));
        if li.coprime(&lj) {
            continue;
        }
        let l = li.lcm(&lj);
        let key = |a: usize, b: usize| (a.min(b), a.max(b));
        let chain = (0..g.len()).any(|k| {
            k != i
                && k != j
                && lm(&g, k).divides(&l)
                && !pending.contains(&key(i, k))
                && !pending.contains(&key(j, k))
        });
        if chain {
            continue;
        }
        let s = s_poly_terms(order, &g[i], &g[j]);
        let h = normal_form(order, s, &g, budget)?;
        if h.is_empty() {
            continue;
        }
        let h = monic(h);
        if h.last().unwrap().0.is_one() {
            return Ok(unit(&ring));
        }
        budget.check_terms(h.len(), "basis element")?;
        let k = g.len();
        g.push(h);
        for a in 0..k {
            pending.insert((a, k));
        }
    }
    // Minimalize, then inter-reduce.
    let mut keep: Vec<usize> = Vec::new();
    for i in 0..g.len() {
        let li = lm(&g, i);
        let redundant = (0..g.len()).any(|j| {
            j != i && {
                let lj = lm(&g, j);
                lj.divides(&li) && (lj != li || j < i)
            }
        });
        if !redundant {
            keep.push(i);
        }
    }
    let minimal: Vec<Terms> = keep.iter().map(|&i| g[i].clone()).collect();
    let mut reduced = Vec::with_capacity(minimal.len());
    for (idx, p) in minimal.iter().enumerate() {
        let others: Vec<Terms> = minimal.iter().enumerate().filter(|(j, _)| *j != idx).map(|(_, t)| t.clone()).collect();
        let lead = p.last().unwrap().clone();
        let tail: Terms = p[..p.len() - 1].to_vec();
        let mut r = normal_form(order, tail, &others, budget)?;
        r.push(lead);
        reduced.push(monic(r));
    }
    reduced.sort_by(|a, b| order.cmp(&b.last().unwrap().0, &a.last().unwrap().0));
    Ok(GroebnerBasis { ring: ring.clone(), basis: reduced.into_iter().map(|t| from_terms(&ring, t)).collect() })
}

/// The ideal generated by `F_i - x_i`.
pub fn fixpoint_ideal(map: &PolyMap) -> Ideal {
    let ring = map.ring();
    let gens = map.coords().iter().enumerate().map(|(i, c)| c - &MultiPoly::var(ring, i)).collect();
    Ideal::new(ring, gens).expect("coordinates share the map's ring")
}

/// Ideal equality, certified by reducing each generating set modulo a
/// Gröbner basis of the other.
pub fn ideals_equal(a: &Ideal, b: &Ideal, budget: &Budget) -> Result<bool> {
    if !same_ring(&a.ring, &b.ring) {
        return Err(Error::RingMismatch);
    }
    let ga = buchberger(a, a.ring.order(), budget)?;
    let gb = buchberger(b, b.ring.order(), budget)?;
    for g in &b.generators {
        if !ga.reduce_with_budget(g, budget)?.is_zero() {
            return Ok(false);
        }
    }
    for g in &a.generators {
        if !gb.reduce_with_budget(g, budget)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `f` lies in the radical of `I` iff `1` lies in `I + (1 - w f)` over the
/// ring extended by a fresh variable `w` (computed in degrevlex).
pub fn radical_member(f: &MultiPoly, ideal: &Ideal, budget: &Budget) -> Result<bool> {
    if !same_ring(f.ring(), &ideal.ring) {
        return Err(Error::RingMismatch);
    }
    if f.is_zero() {
        return Ok(true);
    }
    let ring = &ideal.ring;
    let w = ring.fresh_var("w");
    let ext = ring.extended(&[w.as_str()])?.with_order(MonomialOrder::Degrevlex);
    let n = ring.nvars();
    let var_map: Vec<usize> = (0..n).collect();
    let mut gens = ideal.generators.iter().map(|g| g.embed(&ext, &var_map)).collect::<Result<Vec<_>>>()?;
    let fw = &f.embed(&ext, &var_map)? * &MultiPoly::var(&ext, n);
    gens.push(&MultiPoly::one(&ext) - &fw);
    let gb = buchberger(&Ideal::new(&ext, gens)?, MonomialOrder::Degrevlex, budget)?;
    Ok(gb.is_unit())
}

/// True iff the fixpoint set of `F` over the algebraic closure is exactly
/// `{p}`: the fixpoint ideal vanishes at `p` and every `x_i - p_i` lies in
/// its radical.
pub fn unique_fixpoint(map: &PolyMap, p: &[Scalar], budget: &Budget) -> Result<bool> {
    let ring = map.ring();
    if p.len() != ring.nvars() {
        return Err(Error::ArityMismatch { expected: ring.nvars(), got: p.len() });
    }
    let ideal = fixpoint_ideal(map);
    for g in ideal.generators() {
        if !g.evaluate(p)?.is_zero() {
            return Ok(false);
        }
    }
    for (i, pi) in p.iter().enumerate() {
        let lin = &MultiPoly::var(ring, i) - &MultiPoly::constant(ring, pi.clone());
        if !radical_member(&lin, &ideal, budget)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Shape of the fixpoint set over the algebraic closure of the field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum FixpointLocus {
    Empty,
    /// A single point with coordinates in the declared field.
    Point { point: Vec<String> },
    /// Finitely many points, more than one (or not all rational).
    Finite,
    /// Contains a curve but is not the whole space.
    PositiveDimensional,
    Everything,
}

/// Determines the shape of the fixpoint set, locating the point when the set
/// is a single rational point (via the univariate eliminants).
pub fn fixpoint_locus(map: &PolyMap, budget: &Budget) -> Result<(FixpointLocus, Option<Vec<Scalar>>)> {
    let ideal = fixpoint_ideal(map);
    if ideal.is_zero() {
        return Ok((FixpointLocus::Everything, None));
    }
    let gb = buchberger(&ideal, MonomialOrder::Lex, budget)?;
    if gb.is_unit() {
        return Ok((FixpointLocus::Empty, None));
    }
    let ring = map.ring();
    let n = ring.nvars();
    let zero_dim = (0..n).all(|i| {
        gb.basis().iter().any(|g| {
            let m = g.leading_monomial().unwrap();
            m.exps()[i] > 0 && m.degree() == m.exps()[i]
        })
    });
    if !zero_dim {
        return Ok((FixpointLocus::PositiveDimensional, None));
    }
    let mut point = Vec::with_capacity(n);
    for i in 0..n {
        match eliminant_root(&ideal, i, budget)? {
            Some(r) => point.push(r),
            None => return Ok((FixpointLocus::Finite, None)),
        }
    }
    if unique_fixpoint(map, &point, budget)? {
        let shown = point.iter().map(|s| s.to_string()).collect();
        Ok((FixpointLocus::Point { point: shown }, Some(point)))
    } else {
        Ok((FixpointLocus::Finite, None))
    }
}

/// The unique root of the generator of `I ∩ k[x_i]` if that polynomial is a
/// power of a linear form.
fn eliminant_root(ideal: &Ideal, i: usize, budget: &Budget) -> Result<Option<Scalar>> {
    let ring = ideal.ring();
    let n = ring.nvars();
    let mut perm: Vec<usize> = (0..n).filter(|&j| j != i).collect();
    perm.push(i);
    let names: Vec<&str> = perm.iter().map(|&j| ring.vars()[j].as_str()).collect();
    let moved = PolyRing::new(ring.field().clone(), &names, MonomialOrder::Lex)?;
    let mut var_map = vec![0; n];
    for (pos, &j) in perm.iter().enumerate() {
        var_map[j] = pos;
    }
    let gens = ideal.generators().iter().map(|g| g.embed(&moved, &var_map)).collect::<Result<Vec<_>>>()?;
    let gb = buchberger(&Ideal::new(&moved, gens)?, MonomialOrder::Lex, budget)?;
    let Some(e) = gb.basis().iter().find(|g| (0..n - 1).all(|j| !g.involves(j))) else {
        return Ok(None);
    };
    let k = e.degree_in(n - 1).unwrap_or(0);
    if k == 0 {
        return Ok(None);
    }
    let ek = e.coeff(&Monomial::var(n, n - 1, k));
    let ek1 = e.coeff(&Monomial::var(n, n - 1, k - 1));
    let root = -(&ek1 / &(&ek * &ring.field().from_i64(k as i64)));
    let lin = &MultiPoly::var(&moved, n - 1) - &MultiPoly::constant(&moved, root.clone());
    if lin.pow(k).make_monic() == e.make_monic() {
        Ok(Some(root))
    } else {
        Ok(None)
    }
}
