//! Multiplicative flows: weight decompositions, reconstruction of a flow
//! through a semisimple map, and splitting off a finite part.

use crate::budget::Budget;
use crate::endo::PolyMap;
use crate::error::{Error, Result};
use crate::linalg::{express_in_span, solve_with_poly_rhs};
use crate::lnd::{FlowLaw, ParametricMap};
use crate::poly::{same_ring, MultiPoly};
use crate::scalar::Scalar;
use std::collections::BTreeMap;

/// `f = sum_i f_i` with `F*(f_i) = a^i f_i`; only nonzero components are kept.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightDecomposition {
    pub base: MultiPoly,
    pub components: BTreeMap<i64, MultiPoly>,
}

/// An element of the additive or multiplicative group of the field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupElementSpec {
    Additive(Scalar),
    Multiplicative(Scalar),
}

impl GroupElementSpec {
    pub fn value(&self) -> &Scalar {
        match self {
            GroupElementSpec::Additive(h) | GroupElementSpec::Multiplicative(h) => h,
        }
    }

    pub fn law(&self) -> FlowLaw {
        match self {
            GroupElementSpec::Additive(_) => FlowLaw::Additive,
            GroupElementSpec::Multiplicative(_) => FlowLaw::Multiplicative,
        }
    }

    /// `b` with `r b = h` or `b^r = h`, inside the declared field.
    pub fn root(&self, r: u32) -> Result<Scalar> {
        if r == 0 {
            return Err(Error::InvalidInput("r must be positive".into()));
        }
        match self {
            GroupElementSpec::Additive(h) => h.try_div(&h.field().from_i64(r as i64)),
            GroupElementSpec::Multiplicative(h) => {
                if h.is_zero() {
                    return Err(Error::ZeroInput);
                }
                h.nth_root(r).ok_or_else(|| Error::NoRootInField(h.to_string(), r))
            }
        }
    }

    /// The group inverse of `b`.
    pub fn inverse_of(&self, b: &Scalar) -> Result<Scalar> {
        match self {
            GroupElementSpec::Additive(_) => Ok(-b),
            GroupElementSpec::Multiplicative(_) => b.inv(),
        }
    }
}

fn check_infinite_order(a: &Scalar) -> Result<()> {
    if a.is_zero() {
        return Err(Error::ZeroInput);
    }
    if a.is_root_of_unity()? {
        return Err(Error::RootOfUnityScalar(a.to_string()));
    }
    Ok(())
}

/// Splits `f` into eigencomponents of `F*` with eigenvalues `a^i`,
/// `i in [r, s]`, by solving the Vandermonde system
/// `(F^j)*(f) = sum_i a^{ji} f_i`, `j = 0..=s-r`.
pub fn weight_split(map: &PolyMap, a: &Scalar, f: &MultiPoly, r: i64, s: i64) -> Result<WeightDecomposition> {
    if !same_ring(f.ring(), map.ring()) {
        return Err(Error::RingMismatch);
    }
    if a.field() != *map.field() {
        return Err(Error::FieldMismatch(map.field().describe(), a.field().describe()));
    }
    check_infinite_order(a)?;
    if r > s {
        return Err(Error::InvalidInput(format!("empty weight range [{r}, {s}]")));
    }
    let k = (s - r + 1) as usize;
    let mut rhs = Vec::with_capacity(k);
    let mut cur = f.clone();
    for j in 0..k {
        if j > 0 {
            cur = map.pullback(&cur)?;
        }
        rhs.push(cur.clone());
    }
    let matrix = (0..k as i64)
        .map(|j| (r..=s).map(|i| a.pow(j * i)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let comps = solve_with_poly_rhs(&matrix, &rhs).map_err(|e| match e {
        Error::SingularSystem => Error::Internal("Vandermonde system with distinct nodes is singular".into()),
        e => e,
    })?;
    let mut components = BTreeMap::new();
    for (i, c) in (r..=s).zip(comps) {
        if c.is_zero() {
            continue;
        }
        if map.pullback(&c)? != c.scale(&a.pow(i)?) {
            return Err(Error::RangeTooSmall);
        }
        components.insert(i, c);
    }
    Ok(WeightDecomposition { base: f.clone(), components })
}

/// Doublings of the initial weight bound tried by [`build_gm_flow`].
pub const WEIGHT_RANGE_DOUBLINGS: u32 = 4;

/// Longest orbit `f, F*f, (F*)^2 f, ...` explored before giving up on a
/// finite-dimensional invariant span.
pub const MAX_ORBIT_SPAN: usize = 64;

/// Weights of `f` under `F*`: the exponents `w` such that `a^w` is a root of
/// the minimal polynomial of `F*` on the span of the orbit of `f`. Fails with
/// `NotSemisimple` unless that polynomial splits into distinct factors
/// `T - a^w` with `|w| <= max_weight`.
fn orbit_weights(map: &PolyMap, a: &Scalar, f: &MultiPoly, max_weight: i64, budget: &Budget) -> Result<Vec<i64>> {
    let field = map.field().clone();
    let mut orbit = vec![f.clone()];
    let relation = loop {
        let next = map.pullback(orbit.last().unwrap())?;
        budget.check_terms(next.num_terms(), "orbit element")?;
        if let Some(c) = express_in_span(&orbit, &next) {
            break c;
        }
        if orbit.len() == MAX_ORBIT_SPAN {
            return Err(Error::NotSemisimple);
        }
        orbit.push(next);
    };
    let mu = |t: &Scalar| -> Scalar {
        relation.iter().rev().fold(field.one(), |acc, c| &(&acc * t) - c)
    };
    let mut weights = Vec::new();
    for w in -max_weight..=max_weight {
        if mu(&a.pow(w)?).is_zero() {
            weights.push(w);
        }
    }
    if weights.len() != relation.len() {
        return Err(Error::NotSemisimple);
    }
    Ok(weights)
}

/// The multiplicative flow `psi_v` with `psi_a = F`, from the weight
/// decompositions of the coordinate functions.
///
/// Weights are bounded by `16 deg F` in absolute value; the range passed to
/// [`weight_split`] is the exact span of weights present in each coordinate.
pub fn build_gm_flow(map: &PolyMap, a: &Scalar, budget: &Budget) -> Result<ParametricMap> {
    check_infinite_order(a)?;
    let ring = map.ring();
    let n = ring.nvars();
    let max_weight = (map.degree().max(1) as i64) << WEIGHT_RANGE_DOUBLINGS;
    let mut splits = Vec::with_capacity(n);
    for i in 0..n {
        let x = MultiPoly::var(ring, i);
        let ws = orbit_weights(map, a, &x, max_weight, budget)?;
        let w = weight_split(map, a, &x, ws[0], *ws.last().unwrap()).map_err(|e| match e {
            Error::RangeTooSmall => Error::NotSemisimple,
            e => e,
        })?;
        for c in w.components.values() {
            budget.check_terms(c.num_terms(), "weight component")?;
        }
        splits.push(w);
    }
    let min_w = splits.iter().filter_map(|w| w.components.keys().next().copied()).min().unwrap_or(0);
    let shift = (-min_w).max(0);
    let param = ring.fresh_var("v");
    let ext = ring.extended(&[param.as_str()])?;
    let v = MultiPoly::var(&ext, n);
    let base_map: Vec<usize> = (0..n).collect();
    let coords = splits
        .iter()
        .map(|w| {
            let mut c = MultiPoly::zero(&ext);
            for (i, comp) in &w.components {
                c = &c + &(&comp.embed(&ext, &base_map)? * &v.pow((i + shift) as u32));
            }
            Ok(c)
        })
        .collect::<Result<Vec<_>>>()?;
    let psi = ParametricMap::new(ring, &param, FlowLaw::Multiplicative, coords, shift as u32)?;
    if psi.specialize(a)? != *map || !psi.satisfies_flow_law()? {
        return Err(Error::Internal("reconstructed flow does not reproduce the map".into()));
    }
    Ok(psi)
}

/// `F o psi_u = psi_u o F` as an identity in the parameter.
pub fn commutes_with_flow(map: &PolyMap, psi: &ParametricMap) -> Result<bool> {
    psi.commutes_with(map)
}

/// `F = delta o psi_b` with `delta^r = Id`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitePart {
    pub delta: PolyMap,
    pub b: Scalar,
    /// The exact order of `delta`, a divisor of `r`.
    pub delta_order: u32,
}

/// Given `F^r = psi_h` for a flow commuting with `F`, returns the finite part
/// `delta = F o psi_b^{-1}` where `b` is an `r`-th root (or `r`-th part) of `h`.
pub fn finite_part_decompose(
    map: &PolyMap,
    psi: &ParametricMap,
    r: u32,
    h: &GroupElementSpec,
    budget: &Budget,
) -> Result<FinitePart> {
    if !same_ring(map.ring(), psi.base_ring()) {
        return Err(Error::RingMismatch);
    }
    if h.law() != psi.law() {
        return Err(Error::InvalidInput("group element kind does not match the flow law".into()));
    }
    if r == 0 {
        return Err(Error::InvalidInput("r must be positive".into()));
    }
    if map.pow(r, budget)? != psi.specialize(h.value())? {
        return Err(Error::PowerMismatch);
    }
    if !psi.commutes_with(map)? {
        return Err(Error::InvalidInput("the map does not commute with the flow".into()));
    }
    let b = h.root(r)?;
    let delta = map.compose(&psi.specialize(&h.inverse_of(&b)?)?)?;
    if !delta.pow(r, budget)?.is_identity() {
        return Err(Error::FinitePartNotOrder(r));
    }
    if !psi.commutes_with(&delta)? || delta.compose(&psi.specialize(&b)?)? != *map {
        return Err(Error::Internal("finite part fails its defining identities".into()));
    }
    let delta_order = (1..=r).find(|d| r % d == 0 && delta.pow(*d, budget).is_ok_and(|p| p.is_identity())).unwrap_or(r);
    Ok(FinitePart { delta, b, delta_order })
}
