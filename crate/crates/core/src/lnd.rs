//! Derivations, their exponential flows and the logarithm of unipotent maps.

use crate::endo::PolyMap;
use crate::error::{Error, Result};
use crate::linalg::solve_with_poly_rhs;
use crate::poly::{same_ring, MultiPoly, Ring};
use crate::scalar::Scalar;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Iteration cap used where an operation needs local nilpotence as a precondition.
pub const DEFAULT_NILPOTENCY_BOUND: usize = 64;

/// A derivation of `k[x_1..x_n]`, determined by the images of the variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    ring: Ring,
    images: Vec<MultiPoly>,
}

/// Outcome of the local nilpotence test on generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum Nilpotence {
    /// `D^k(x_i) = 0` for all `i` with `k <= max_index`.
    Yes { max_index: usize },
    /// Bound exhausted in non-strict mode; `witness_var` did not vanish.
    No { witness_var: String },
    Unknown,
}

impl Derivation {
    pub fn new(ring: &Ring, images: Vec<MultiPoly>) -> Result<Self> {
        if images.len() != ring.nvars() {
            return Err(Error::ArityMismatch { expected: ring.nvars(), got: images.len() });
        }
        if images.iter().any(|p| !same_ring(p.ring(), ring)) {
            return Err(Error::RingMismatch);
        }
        Ok(Derivation { ring: ring.clone(), images })
    }

    pub fn parse<S: AsRef<str>>(ring: &Ring, images: &[S]) -> Result<Self> {
        let ims = images.iter().map(|s| MultiPoly::parse(ring, s.as_ref())).collect::<Result<Vec<_>>>()?;
        Self::new(ring, ims)
    }

    pub fn zero(ring: &Ring) -> Self {
        Derivation { ring: ring.clone(), images: vec![MultiPoly::zero(ring); ring.nvars()] }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn images(&self) -> &[MultiPoly] {
        &self.images
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(|p| p.is_zero())
    }

    /// `D(f) = sum_i df/dx_i * D(x_i)`.
    pub fn apply(&self, f: &MultiPoly) -> Result<MultiPoly> {
        if !same_ring(f.ring(), &self.ring) {
            return Err(Error::RingMismatch);
        }
        Ok(self.apply_unchecked(f))
    }

    fn apply_unchecked(&self, f: &MultiPoly) -> MultiPoly {
        let mut acc = MultiPoly::zero(&self.ring);
        for (i, im) in self.images.iter().enumerate() {
            if im.is_zero() || !f.involves(i) {
                continue;
            }
            acc = &acc + &(&f.partial_derivative(i) * im);
        }
        acc
    }

    /// `[f, D f, D^2 f, ...]` up to the last nonzero term, or `None` if
    /// more than `bound` applications do not reach zero.
    pub fn orbit(&self, f: &MultiPoly, bound: usize) -> Result<Option<Vec<MultiPoly>>> {
        if !same_ring(f.ring(), &self.ring) {
            return Err(Error::RingMismatch);
        }
        let mut out = Vec::new();
        let mut cur = f.clone();
        while !cur.is_zero() {
            if out.len() > bound {
                return Ok(None);
            }
            let next = self.apply_unchecked(&cur);
            out.push(cur);
            cur = next;
        }
        Ok(Some(out))
    }

    /// Local nilpotence checked on the variables. With `strict` the result on
    /// exhaustion is `Unknown`, otherwise `No` naming the first offender.
    pub fn is_locally_nilpotent(&self, bound: usize, strict: bool) -> Nilpotence {
        let mut max_index = 0;
        for i in 0..self.ring.nvars() {
            let mut cur = MultiPoly::var(&self.ring, i);
            let mut k = 0;
            while !cur.is_zero() {
                if k == bound {
                    return if strict {
                        Nilpotence::Unknown
                    } else {
                        Nilpotence::No { witness_var: self.ring.vars()[i].clone() }
                    };
                }
                cur = self.apply_unchecked(&cur);
                k += 1;
            }
            max_index = max_index.max(k);
        }
        Nilpotence::Yes { max_index }
    }

    fn require_nilpotent(&self) -> Result<()> {
        match self.is_locally_nilpotent(DEFAULT_NILPOTENCY_BOUND, true) {
            Nilpotence::Yes { .. } => Ok(()),
            _ => Err(Error::NotLocallyNilpotent),
        }
    }

    /// `exp(uD)`: coordinates `sum_j D^j(x_i) u^j / j!`.
    pub fn exp_flow(&self) -> Result<ParametricMap> {
        self.require_nilpotent()?;
        let param = self.ring.fresh_var("u");
        let ext = self.ring.extended(&[param.as_str()])?;
        let base_map: Vec<usize> = (0..self.ring.nvars()).collect();
        let u = MultiPoly::var(&ext, self.ring.nvars());
        let field = self.ring.field();
        let mut coords = Vec::with_capacity(self.ring.nvars());
        for i in 0..self.ring.nvars() {
            let orbit = self
                .orbit(&MultiPoly::var(&self.ring, i), DEFAULT_NILPOTENCY_BOUND)?
                .ok_or(Error::NotLocallyNilpotent)?;
            let mut c = MultiPoly::zero(&ext);
            let mut fact = field.one();
            for (j, t) in orbit.iter().enumerate() {
                if j > 0 {
                    fact = &fact * &field.from_i64(j as i64);
                }
                let term = &t.embed(&ext, &base_map)? * &u.pow(j as u32);
                c = &c + &term.scale(&fact.inv()?);
            }
            coords.push(c);
        }
        ParametricMap::from_parts(&self.ring, &ext, param, FlowLaw::Additive, coords, 0)
    }

    /// Largest `j` with `D^j(f) != 0`, i.e. the `u`-degree of `exp(uD)(f)`;
    /// `None` for `f = 0`.
    pub fn psi_degree(&self, f: &MultiPoly) -> Result<Option<u32>> {
        self.require_nilpotent()?;
        let orbit = self.orbit(f, 100_000)?.ok_or_else(|| Error::BudgetExceeded("psi-degree orbit".into()))?;
        Ok(orbit.len().checked_sub(1).map(|d| d as u32))
    }

    /// Recovers `D^j(f)` from the values `exp(iD)(f)`, `i = 0..r`, by solving
    /// with the matrix `(i^j / j!)`, and compares with direct application.
    pub fn interpolation_check(&self, f: &MultiPoly) -> Result<bool> {
        let Some(r) = self.psi_degree(f)? else {
            return Ok(true);
        };
        let r = r as usize;
        let field = self.ring.field();
        let one = self.exp_flow()?.specialize(&field.one())?;
        let mut values = Vec::with_capacity(r + 1);
        let mut cur = f.clone();
        for i in 0..=r {
            if i > 0 {
                cur = one.pullback(&cur)?;
            }
            values.push(cur.clone());
        }
        let mut matrix = vec![vec![field.zero(); r + 1]; r + 1];
        for (i, row) in matrix.iter_mut().enumerate() {
            let mut fact = field.one();
            for (j, e) in row.iter_mut().enumerate() {
                if j > 0 {
                    fact = &fact * &field.from_i64(j as i64);
                }
                *e = &field.from_i64(i as i64).pow(j as i64)? / &fact;
            }
        }
        let solved = solve_with_poly_rhs(&matrix, &values)?;
        let direct = self.orbit(f, r + 1)?.ok_or(Error::NotLocallyNilpotent)?;
        Ok(solved == direct)
    }
}

/// `log F* = sum_{k>=1} (-1)^{k+1} (F* - Id)^k / k`, evaluated on each
/// variable; fails unless `(F* - Id)^k` kills every variable for some `k <= bound`.
pub fn log_unipotent(f: &PolyMap, bound: usize) -> Result<Derivation> {
    let ring = f.ring();
    let field = ring.field();
    let mut images = Vec::with_capacity(ring.nvars());
    for i in 0..ring.nvars() {
        let mut cur = MultiPoly::var(ring, i);
        let mut acc = MultiPoly::zero(ring);
        let mut k = 0usize;
        loop {
            let next = &f.pullback(&cur)? - &cur;
            if next.is_zero() {
                break;
            }
            k += 1;
            if k > bound {
                return Err(Error::NotUnipotentWithinBound(bound));
            }
            let c = field.from_ratio(if k % 2 == 1 { 1 } else { -1 }, k as i64);
            acc = &acc + &next.scale(&c);
            cur = next;
        }
        images.push(acc);
    }
    let d = Derivation::new(ring, images)?;
    if d.exp_flow()?.specialize(&field.one())? != *f {
        return Err(Error::Internal("exp(log F) differs from F".into()));
    }
    Ok(d)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FlowLaw {
    /// `psi_u o psi_v = psi_{u+v}`, neutral element 0.
    Additive,
    /// `psi_u o psi_v = psi_{uv}`, neutral element 1.
    Multiplicative,
}

/// A one-parameter family of maps. The stored coordinates live in the base
/// ring extended by the parameter and are the true coordinates multiplied by
/// `param^denom_power`, which represents negative parameter powers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParametricMap {
    base: Ring,
    ext: Ring,
    param: String,
    law: FlowLaw,
    coords: Vec<MultiPoly>,
    denom_power: u32,
}

impl ParametricMap {
    pub fn new(base: &Ring, param: &str, law: FlowLaw, coords: Vec<MultiPoly>, denom_power: u32) -> Result<Self> {
        let ext = base.extended(&[param])?;
        let coords = coords
            .into_iter()
            .map(|c| if same_ring(c.ring(), &ext) { Ok(c) } else { Err(Error::RingMismatch) })
            .collect::<Result<Vec<_>>>()?;
        Self::from_parts(base, &ext, param.to_string(), law, coords, denom_power)
    }

    /// Parses coordinate strings in the extended ring.
    pub fn parse<S: AsRef<str>>(base: &Ring, param: &str, law: FlowLaw, coords: &[S], denom_power: u32) -> Result<Self> {
        let ext = base.extended(&[param])?;
        let cs = coords.iter().map(|s| MultiPoly::parse(&ext, s.as_ref())).collect::<Result<Vec<_>>>()?;
        Self::from_parts(base, &ext, param.to_string(), law, cs, denom_power)
    }

    fn from_parts(base: &Ring, ext: &Ring, param: String, law: FlowLaw, coords: Vec<MultiPoly>, denom_power: u32) -> Result<Self> {
        if coords.len() != base.nvars() {
            return Err(Error::ArityMismatch { expected: base.nvars(), got: coords.len() });
        }
        if law == FlowLaw::Additive && denom_power != 0 {
            return Err(Error::InvalidInput("additive flows cannot carry a parameter denominator".into()));
        }
        Ok(ParametricMap { base: base.clone(), ext: ext.clone(), param, law, coords, denom_power })
    }

    pub fn base_ring(&self) -> &Ring {
        &self.base
    }

    pub fn ext_ring(&self) -> &Ring {
        &self.ext
    }

    pub fn param(&self) -> &str {
        &self.param
    }

    pub fn law(&self) -> FlowLaw {
        self.law
    }

    /// Coordinates multiplied by `param^denom_power`.
    pub fn numerators(&self) -> &[MultiPoly] {
        &self.coords
    }

    pub fn denom_power(&self) -> u32 {
        self.denom_power
    }

    fn param_index(&self) -> usize {
        self.base.nvars()
    }

    /// The map at a parameter value.
    pub fn specialize(&self, s: &Scalar) -> Result<PolyMap> {
        let n = self.base.nvars();
        let mut images: Vec<MultiPoly> = (0..n).map(|i| MultiPoly::var(&self.base, i)).collect();
        images.push(MultiPoly::constant(&self.base, s.clone()));
        let scale = s.pow(-(self.denom_power as i64)).map_err(|_| Error::ZeroInput)?;
        let coords = self.coords.iter().map(|c| Ok(c.substitute(&images)?.scale(&scale))).collect::<Result<Vec<_>>>()?;
        PolyMap::new(&self.base, coords)
    }

    /// The value at which the family is the identity.
    pub fn neutral(&self) -> Scalar {
        match self.law {
            FlowLaw::Additive => self.base.field().zero(),
            FlowLaw::Multiplicative => self.base.field().one(),
        }
    }

    /// Checks `psi_s o psi_t = psi_{s+t}` (or `psi_{st}`) as an identity in
    /// two formal parameters.
    pub fn satisfies_flow_law(&self) -> Result<bool> {
        let nb = self.base.nvars();
        let p1 = self.ext.fresh_var("s");
        let two = self.ext.extended(&[p1.as_str()])?;
        let p2 = two.fresh_var("t");
        let ring2 = self.base.extended(&[p1.as_str(), p2.as_str()])?;
        let (s, t) = (MultiPoly::var(&ring2, nb), MultiPoly::var(&ring2, nb + 1));
        let mut to_t: Vec<usize> = (0..nb).collect();
        to_t.push(nb + 1);
        let nums_t = self.coords.iter().map(|c| c.embed(&ring2, &to_t)).collect::<Result<Vec<_>>>()?;
        let combined = match self.law {
            FlowLaw::Additive => &s + &t,
            FlowLaw::Multiplicative => &s * &t,
        };
        let mut rhs_images: Vec<MultiPoly> = (0..nb).map(|i| MultiPoly::var(&ring2, i)).collect();
        rhs_images.push(combined);
        let mut lhs_images = nums_t.clone();
        lhs_images.push(s.clone());
        let graded: Vec<bool> = (0..=nb).map(|i| i < nb).collect();
        let n = self.denom_power;
        for c in &self.coords {
            let (l, dmax) = subst_graded(c, &graded, &lhs_images, &t, n)?;
            let r = c.substitute(&rhs_images)?;
            let ok = if n == 0 { l == r } else { &l * &t.pow(n) == &r * &t.pow(n * dmax) };
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Checks `F o psi_u = psi_u o F` formally in the parameter.
    pub fn commutes_with(&self, f: &PolyMap) -> Result<bool> {
        if !same_ring(f.ring(), &self.base) {
            return Err(Error::RingMismatch);
        }
        let nb = self.base.nvars();
        let u = MultiPoly::var(&self.ext, self.param_index());
        let base_map: Vec<usize> = (0..nb).collect();
        let mut f_images = f.coords().iter().map(|c| c.embed(&self.ext, &base_map)).collect::<Result<Vec<_>>>()?;
        f_images.push(u.clone());
        let graded = vec![true; nb];
        let n = self.denom_power;
        for (fi, psi_i) in f.coords().iter().zip(&self.coords) {
            let (a, df) = subst_graded(fi, &graded, &self.coords, &u, n)?;
            let b = psi_i.substitute(&f_images)?;
            let ok = if n == 0 { a == b } else { &a * &u.pow(n) == &b * &u.pow(n * df) };
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// For `f` in a ring whose variables flagged in `graded` are sent to
/// `images[i] / den^n` (the others to `images[i]`), returns `(N, d)` with
/// `f(...) = N / den^(n d)`, `d` the maximal graded degree of `f`.
pub(crate) fn subst_graded(
    f: &MultiPoly,
    graded: &[bool],
    images: &[MultiPoly],
    den: &MultiPoly,
    n: u32,
) -> Result<(MultiPoly, u32)> {
    let target = den.ring();
    let gdeg = |m: &crate::poly::Monomial| -> u32 { m.exps().iter().zip(graded).filter(|(_, g)| **g).map(|(e, _)| *e).sum() };
    let dmax = f.terms().map(|(m, _)| gdeg(m)).max().unwrap_or(0);
    if n == 0 {
        return Ok((f.substitute(images)?, dmax));
    }
    let mut parts: Vec<MultiPoly> = vec![MultiPoly::zero(f.ring()); dmax as usize + 1];
    for (m, c) in f.terms() {
        parts[gdeg(m) as usize].add_term(m.clone(), c.clone());
    }
    let mut acc = MultiPoly::zero(target);
    for (k, part) in parts.iter().enumerate() {
        if part.is_zero() {
            continue;
        }
        acc = &acc + &(&part.substitute(images)? * &den.pow(n * (dmax - k as u32)));
    }
    Ok((acc, dmax))
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cs: Vec<String> = self.images.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", cs.join(", "))
    }
}

impl fmt::Display for ParametricMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pi = self.param_index();
        let cs: Vec<String> = self
            .coords
            .iter()
            .map(|c| {
                let low = c.terms().map(|(m, _)| m.exps()[pi]).min().unwrap_or(0).min(self.denom_power);
                let reduced = MultiPoly::from_terms(
                    c.ring(),
                    c.terms().map(|(m, a)| {
                        let mut m = m.clone();
                        m.0[pi] -= low;
                        (m, a.clone())
                    }),
                );
                let body = if reduced.num_terms() > 1 { format!("({reduced})") } else { reduced.to_string() };
                match self.denom_power - low {
                    0 => reduced.to_string(),
                    1 => format!("{body}/{}", self.param),
                    n => format!("{body}/{}^{n}", self.param),
                }
            })
            .collect();
        write!(f, "({})", cs.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{MonomialOrder, PolyRing};
    use crate::scalar::Field;

    fn ring(vars: &[&str]) -> Ring {
        PolyRing::new(Field::Rationals, vars, MonomialOrder::Lex).unwrap()
    }

    fn p(r: &Ring, s: &str) -> MultiPoly {
        MultiPoly::parse(r, s).unwrap()
    }

    #[test]
    fn leibniz_examples() {
        let r = ring(&["x", "y"]);
        let d = Derivation::parse(&r, &["0", "x^2"]).unwrap();
        assert_eq!(d.apply(&p(&r, "y")).unwrap(), p(&r, "x^2"));
        assert_eq!(d.apply(&p(&r, "y^2")).unwrap(), p(&r, "2*x^2*y"));
        let e = Derivation::parse(&r, &["1", "x"]).unwrap();
        assert!(e.apply(&p(&r, "y - x^2/2")).unwrap().is_zero());
    }

    #[test]
    fn nilpotence() {
        let r = ring(&["x", "y"]);
        assert_eq!(Derivation::parse(&r, &["0", "x^2"]).unwrap().is_locally_nilpotent(5, true), Nilpotence::Yes { max_index: 2 });
        let lin = Derivation::parse(&r, &["x", "0"]).unwrap();
        assert_eq!(lin.is_locally_nilpotent(10, true), Nilpotence::Unknown);
        assert_eq!(lin.is_locally_nilpotent(10, false), Nilpotence::No { witness_var: "x".into() });
        let r3 = ring(&["x", "y", "z"]);
        assert_eq!(Derivation::parse(&r3, &["y", "z", "0"]).unwrap().is_locally_nilpotent(10, true), Nilpotence::Yes { max_index: 3 });
    }

    #[test]
    fn exponentials() {
        let r = ring(&["x", "y"]);
        let e = Derivation::parse(&r, &["0", "x^3 - x"]).unwrap().exp_flow().unwrap();
        assert_eq!(e.to_string(), "(x, x^3*u - x*u + y)");
        let e = Derivation::parse(&r, &["1", "x"]).unwrap().exp_flow().unwrap();
        assert_eq!(e.to_string(), "(x + u, x*u + y + 1/2*u^2)");
        assert!(e.satisfies_flow_law().unwrap());
        let z = Derivation::zero(&r).exp_flow().unwrap();
        assert!(z.specialize(&Field::Rationals.from_i64(7)).unwrap().is_identity());
        assert_eq!(Derivation::parse(&r, &["x", "0"]).unwrap().exp_flow(), Err(Error::NotLocallyNilpotent));
    }

    #[test]
    fn logarithms() {
        let r = ring(&["x", "y"]);
        let f = PolyMap::parse(&r, &["x", "y + x^2"]).unwrap();
        assert_eq!(log_unipotent(&f, 10).unwrap(), Derivation::parse(&r, &["0", "x^2"]).unwrap());
        assert!(log_unipotent(&PolyMap::identity(&r), 10).unwrap().is_zero());
        let t = PolyMap::parse(&r, &["x + 1", "y"]).unwrap();
        assert_eq!(log_unipotent(&t, 10).unwrap(), Derivation::parse(&r, &["1", "0"]).unwrap());
        let d = PolyMap::parse(&r, &["2*x", "y"]).unwrap();
        assert_eq!(log_unipotent(&d, 10), Err(Error::NotUnipotentWithinBound(10)));
    }

    #[test]
    fn psi_degrees() {
        let r = ring(&["x", "y"]);
        let d = Derivation::parse(&r, &["0", "x^2"]).unwrap();
        assert_eq!(d.psi_degree(&p(&r, "x")).unwrap(), Some(0));
        assert_eq!(d.psi_degree(&p(&r, "y")).unwrap(), Some(1));
        assert_eq!(d.psi_degree(&p(&r, "y^2")).unwrap(), Some(2));
        assert_eq!(d.psi_degree(&MultiPoly::zero(&r)).unwrap(), None);
        assert!(d.interpolation_check(&p(&r, "y^3 + x*y")).unwrap());
    }

    #[test]
    fn commutation_with_flows() {
        let r = ring(&["x", "y"]);
        let psi = ParametricMap::parse(&r, "u", FlowLaw::Additive, &["x", "y + u*x^2"], 0).unwrap();
        assert!(psi.commutes_with(&PolyMap::parse(&r, &["x", "y + x^2"]).unwrap()).unwrap());
        assert!(!psi.commutes_with(&PolyMap::parse(&r, &["y", "x"]).unwrap()).unwrap());
        let gm = ParametricMap::parse(&r, "v", FlowLaw::Multiplicative, &["v^2*x", "y"], 1).unwrap();
        assert!(gm.satisfies_flow_law().unwrap());
        assert!(gm.commutes_with(&PolyMap::parse(&r, &["2*x", "y/2"]).unwrap()).unwrap());
        let bad = ParametricMap::parse(&r, "v", FlowLaw::Multiplicative, &["v*x + 1", "y"], 0).unwrap();
        assert!(!bad.satisfies_flow_law().unwrap());
    }
}
