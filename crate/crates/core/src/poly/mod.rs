//! Sparse multivariate polynomials over the exact fields of [`crate::scalar`].

mod modp;
mod parse;

pub use modp::ModPoly;
pub use parse::parse_scalar;

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MonomialOrder {
    /// Lexicographic with the first variable largest.
    #[default]
    Lex,
    /// Graded reverse lexicographic.
    Degrevlex,
}

impl MonomialOrder {
    pub fn cmp(self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::Degrevlex => a.degree().cmp(&b.degree()).then_with(|| {
                for (x, y) in a.0.iter().zip(b.0.iter()).rev() {
                    if x != y {
                        return y.cmp(x);
                    }
                }
                Ordering::Equal
            }),
        }
    }
}

/// Exponent vector, one entry per ring variable.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub SmallVec<[u32; 4]>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(SmallVec::from_elem(0, n))
    }

    pub fn var(n: usize, i: usize, e: u32) -> Self {
        let mut m = Self::one(n);
        m.0[i] = e;
        m
    }

    pub fn from_exps(exps: &[u32]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
                .collect(),
        )
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming divisibility.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| b - a).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }

    fn format(&self, vars: &[String]) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .zip(vars)
            .filter(|(e, _)| **e > 0)
            .map(|(e, v)| if *e == 1 { v.clone() } else { format!("{v}^{e}") })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

#[derive(Debug, PartialEq, Eq)]
pub struct PolyRing {
    field: Field,
    vars: Vec<String>,
    order: MonomialOrder,
}

pub type Ring = Arc<PolyRing>;

fn is_identifier(s: &str) -> bool {
    s.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl PolyRing {
    pub fn new<S: AsRef<str>>(field: Field, vars: &[S], order: MonomialOrder) -> Result<Ring> {
        let vars: Vec<String> = vars.iter().map(|v| v.as_ref().to_string()).collect();
        for (i, v) in vars.iter().enumerate() {
            if !is_identifier(v) {
                return Err(Error::InvalidInput(format!("invalid variable name {v:?}")));
            }
            if vars[..i].contains(v) {
                return Err(Error::InvalidInput(format!("duplicate variable {v:?}")));
            }
            if field.generator_name() == Some(v.as_str()) {
                return Err(Error::InvalidInput(format!("variable {v:?} clashes with the field generator")));
            }
        }
        Ok(Arc::new(PolyRing { field, vars, order }))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn with_order(&self, order: MonomialOrder) -> Ring {
        Arc::new(PolyRing { field: self.field.clone(), vars: self.vars.clone(), order })
    }

    /// Same field and order, with `extra` variables appended.
    pub fn extended<S: AsRef<str>>(&self, extra: &[S]) -> Result<Ring> {
        let mut vars = self.vars.clone();
        vars.extend(extra.iter().map(|s| s.as_ref().to_string()));
        PolyRing::new(self.field.clone(), &vars, self.order)
    }

    /// A variable name not used by the ring or the field.
    pub fn fresh_var(&self, base: &str) -> String {
        let mut name = base.to_string();
        let mut k = 0;
        while self.var_index(&name).is_some() || self.field.generator_name() == Some(name.as_str()) {
            k += 1;
            name = format!("{base}{k}");
        }
        name
    }
}

pub fn same_ring(a: &Ring, b: &Ring) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// A sparse polynomial; the term map never stores zero coefficients.
#[derive(Clone, Debug)]
pub struct MultiPoly {
    ring: Ring,
    terms: BTreeMap<Monomial, Scalar>,
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}
impl Eq for MultiPoly {}

impl MultiPoly {
    pub fn zero(ring: &Ring) -> Self {
        MultiPoly { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn one(ring: &Ring) -> Self {
        Self::constant(ring, ring.field().one())
    }

    pub fn constant(ring: &Ring, c: Scalar) -> Self {
        Self::monomial(ring, Monomial::one(ring.nvars()), c)
    }

    pub fn monomial(ring: &Ring, m: Monomial, c: Scalar) -> Self {
        debug_assert_eq!(m.0.len(), ring.nvars());
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MultiPoly { ring: ring.clone(), terms }
    }

    pub fn var(ring: &Ring, i: usize) -> Self {
        Self::monomial(ring, Monomial::var(ring.nvars(), i, 1), ring.field().one())
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Scalar)>>(ring: &Ring, terms: I) -> Self {
        let mut p = Self::zero(ring);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn parse(ring: &Ring, s: &str) -> Result<Self> {
        parse::parse_poly(ring, s)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn field(&self) -> &Field {
        self.ring.field()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.constant_term().is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn constant_term(&self) -> Scalar {
        self.coeff(&Monomial::one(self.ring.nvars()))
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(|| self.field().zero())
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[var]).max()
    }

    pub fn involves(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.0[var] > 0)
    }

    /// Leading term with respect to the ring's monomial order.
    pub fn leading_term(&self) -> Option<(&Monomial, &Scalar)> {
        match self.ring.order() {
            MonomialOrder::Lex => self.terms.iter().next_back(),
            order => self.terms.iter().max_by(|a, b| order.cmp(a.0, b.0)),
        }
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.leading_term().map(|t| t.0)
    }

    pub fn leading_coeff(&self) -> Option<&Scalar> {
        self.leading_term().map(|t| t.1)
    }

    /// Terms sorted descending by the ring order.
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &Scalar)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        if self.ring.order() == MonomialOrder::Lex {
            v.reverse();
        } else {
            let o = self.ring.order();
            v.sort_by(|a, b| o.cmp(b.0, a.0));
        }
        v
    }

    pub fn make_monic(&self) -> Self {
        match self.leading_coeff() {
            None => self.clone(),
            Some(c) if c.is_one() => self.clone(),
            Some(c) => self.scale(&c.inv().expect("nonzero leading coefficient")),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        MultiPoly { ring: self.ring.clone(), terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect() }
    }

    /// `c * m * self`.
    pub fn mul_term(&self, m: &Monomial, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        MultiPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), a * c)).collect(),
        }
    }

    fn check_ring(&self, other: &MultiPoly) -> Result<()> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    fn add_impl(&self, other: &MultiPoly, negate: bool) -> MultiPoly {
        assert!(same_ring(&self.ring, &other.ring), "polynomial ring mismatch");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), if negate { -c } else { c.clone() });
        }
        out
    }

    fn mul_impl(&self, other: &MultiPoly) -> MultiPoly {
        assert!(same_ring(&self.ring, &other.ring), "polynomial ring mismatch");
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.ring);
        }
        let (small, big) = if self.terms.len() <= other.terms.len() { (self, other) } else { (other, self) };
        if small.terms.len() == 1 {
            let (m, c) = small.terms.iter().next().unwrap();
            return big.mul_term(m, c);
        }
        let mut acc: HashMap<Monomial, Scalar> = HashMap::with_capacity(big.terms.len() * 2);
        for (m1, c1) in &small.terms {
            for (m2, c2) in &big.terms {
                let prod = c1 * c2;
                match acc.entry(m1.mul(m2)) {
                    std::collections::hash_map::Entry::Vacant(v) => {
                        v.insert(prod);
                    }
                    std::collections::hash_map::Entry::Occupied(mut o) => {
                        let s = o.get() + &prod;
                        *o.get_mut() = s;
                    }
                }
            }
        }
        MultiPoly { ring: self.ring.clone(), terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn try_add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_ring(other)?;
        Ok(self.add_impl(other, false))
    }

    pub fn try_sub(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_ring(other)?;
        Ok(self.add_impl(other, true))
    }

    pub fn try_mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_ring(other)?;
        Ok(self.mul_impl(other))
    }

    pub fn pow(&self, mut e: u32) -> MultiPoly {
        let mut acc = Self::one(&self.ring);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn partial_derivative(&self, var: usize) -> MultiPoly {
        let field = self.field().clone();
        let mut out = Self::zero(&self.ring);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e > 0 {
                let mut m2 = m.clone();
                m2.0[var] -= 1;
                out.add_term(m2, c * &field.from_i64(e as i64));
            }
        }
        out
    }

    pub fn evaluate(&self, point: &[Scalar]) -> Result<Scalar> {
        let n = self.ring.nvars();
        if point.len() != n {
            return Err(Error::ArityMismatch { expected: n, got: point.len() });
        }
        let field = self.field();
        if let Some(bad) = point.iter().find(|s| !s.same_field(&field.zero())) {
            return Err(Error::FieldMismatch(field.describe(), bad.field().describe()));
        }
        let mut powers: Vec<Vec<Scalar>> = vec![vec![field.one()]; n];
        let mut acc = field.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap() * &point[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][e as usize];
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Substitutes `images[i]` for the i-th variable (pullback `f o images`).
    /// All images must live in one common target ring.
    pub fn substitute(&self, images: &[MultiPoly]) -> Result<MultiPoly> {
        let n = self.ring.nvars();
        if images.len() != n {
            return Err(Error::ArityMismatch { expected: n, got: images.len() });
        }
        let target = match images.first() {
            Some(p) => p.ring.clone(),
            None => {
                return Err(Error::InvalidInput("substitution needs a target ring; use embed".into()));
            }
        };
        if images.iter().any(|p| !same_ring(&p.ring, &target)) {
            return Err(Error::RingMismatch);
        }
        if self.field() != target.field() {
            return Err(Error::FieldMismatch(self.field().describe(), target.field().describe()));
        }
        let terms: Vec<(&Monomial, &Scalar)> = self.terms.iter().collect();
        Ok(substitute_rec(&terms, 0, images, &target))
    }

    /// Re-expresses the polynomial in `target`, sending variable `i` to
    /// variable `var_map[i]` of `target`.
    pub fn embed(&self, target: &Ring, var_map: &[usize]) -> Result<MultiPoly> {
        if var_map.len() != self.ring.nvars() {
            return Err(Error::ArityMismatch { expected: self.ring.nvars(), got: var_map.len() });
        }
        if self.field() != target.field() {
            return Err(Error::FieldMismatch(self.field().describe(), target.field().describe()));
        }
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut m2 = Monomial::one(target.nvars());
            for (i, &e) in m.0.iter().enumerate() {
                m2.0[var_map[i]] += e;
            }
            out.add_term(m2, c.clone());
        }
        Ok(out)
    }

    /// Same terms viewed in a ring with identical variables but another order.
    pub fn with_ring(&self, ring: &Ring) -> Result<MultiPoly> {
        if ring.vars() != self.ring.vars() || ring.field() != self.ring.field() {
            return Err(Error::RingMismatch);
        }
        Ok(MultiPoly { ring: ring.clone(), terms: self.terms.clone() })
    }

    /// Homogeneous component of total degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> MultiPoly {
        MultiPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().filter(|(m, _)| m.degree() == d).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// Coefficients of `self` viewed as a polynomial in `var`; entry `k`
    /// holds the coefficient of `var^k` (with `var` removed).
    pub fn coefficients_in(&self, var: usize) -> Vec<MultiPoly> {
        let mut out: Vec<MultiPoly> = Vec::new();
        for (m, c) in &self.terms {
            let e = m.0[var] as usize;
            while out.len() <= e {
                out.push(Self::zero(&self.ring));
            }
            let mut m2 = m.clone();
            m2.0[var] = 0;
            out[e].add_term(m2, c.clone());
        }
        out
    }
}

fn substitute_rec(terms: &[(&Monomial, &Scalar)], var: usize, images: &[MultiPoly], target: &Ring) -> MultiPoly {
    if terms.is_empty() {
        return MultiPoly::zero(target);
    }
    if var == images.len() {
        let mut acc = MultiPoly::zero(target);
        for (_, c) in terms {
            acc.add_term(Monomial::one(target.nvars()), (*c).clone());
        }
        return acc;
    }
    let mut groups: BTreeMap<u32, Vec<(&Monomial, &Scalar)>> = BTreeMap::new();
    for t in terms {
        groups.entry(t.0 .0[var]).or_default().push(*t);
    }
    let img = &images[var];
    let mut acc: Option<MultiPoly> = None;
    let mut prev_e = 0;
    for (&e, group) in groups.iter().rev() {
        let part = substitute_rec(group, var + 1, images, target);
        acc = Some(match acc {
            None => part,
            Some(a) => {
                let gap = prev_e - e;
                let shifted = if gap == 1 { &a * img } else { &a * &img.pow(gap) };
                &shifted + &part
            }
        });
        prev_e = e;
    }
    let acc = acc.unwrap();
    if prev_e == 0 {
        acc
    } else if prev_e == 1 {
        &acc * img
    } else {
        &acc * &img.pow(prev_e)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in self.sorted_terms() {
            let (neg, body, parens) = c.print_parts();
            let mono = m.format(self.ring.vars());
            let body = if parens { format!("({body})") } else { body };
            let term = if m.is_one() {
                body
            } else if body == "1" {
                mono
            } else {
                format!("{body}*{mono}")
            };
            if first {
                if neg {
                    f.write_str("-")?;
                }
                first = false;
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            f.write_str(&term)?;
        }
        Ok(())
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.add_impl(rhs, false)
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.add_impl(rhs, true)
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.mul_impl(rhs)
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly { ring: self.ring.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

macro_rules! owned_poly_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for MultiPoly {
            type Output = MultiPoly;
            fn $m(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $m(self, rhs: &MultiPoly) -> MultiPoly {
                (&self).$m(rhs)
            }
        }
    )*};
}
owned_poly_ops!(Add add, Sub sub, Mul mul);

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
}

/// Checked ring arithmetic.
pub fn poly_arith(op: PolyOp, lhs: &MultiPoly, rhs: &MultiPoly) -> Result<MultiPoly> {
    match op {
        PolyOp::Add => lhs.try_add(rhs),
        PolyOp::Sub => lhs.try_sub(rhs),
        PolyOp::Mul => lhs.try_mul(rhs),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(vars: &[&str]) -> Ring {
        PolyRing::new(Field::Rationals, vars, MonomialOrder::Lex).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let r = ring(&["x", "y"]);
        let a = MultiPoly::parse(&r, "x + y").unwrap();
        let b = MultiPoly::parse(&r, "x - y").unwrap();
        assert_eq!((&a * &b).to_string(), "x^2 - y^2");
        assert_eq!(&MultiPoly::zero(&r) + &a, a);
    }

    #[test]
    fn q_squared_expansion() {
        // Expected value expanded independently by hand:
        // (x^2 y - z^2 - x z^3)^2
        let r = ring(&["x", "y", "z"]);
        let q = MultiPoly::parse(&r, "x^2*y - z^2 - x*z^3").unwrap();
        let expected =
            MultiPoly::parse(&r, "x^4*y^2 - 2*x^2*y*z^2 - 2*x^3*y*z^3 + z^4 + 2*x*z^5 + x^2*z^6").unwrap();
        assert_eq!(&q * &q, expected);
    }

    #[test]
    fn substitution_examples() {
        let r = ring(&["x", "y"]);
        let f = MultiPoly::parse(&r, "x*y").unwrap();
        let imgs = [MultiPoly::parse(&r, "2*x").unwrap(), MultiPoly::parse(&r, "y/2").unwrap()];
        assert_eq!(f.substitute(&imgs).unwrap(), f);
        let g = MultiPoly::parse(&r, "y").unwrap();
        let imgs = [MultiPoly::parse(&r, "x").unwrap(), MultiPoly::parse(&r, "y + x^2").unwrap()];
        assert_eq!(g.substitute(&imgs).unwrap().to_string(), "x^2 + y");
        assert!(matches!(g.substitute(&imgs[..1]), Err(Error::ArityMismatch { .. })));
    }

    #[test]
    fn derivatives_of_q() {
        let r = ring(&["x", "y", "z"]);
        let q = MultiPoly::parse(&r, "x^2*y - z^2 - x*z^3").unwrap();
        assert_eq!(q.partial_derivative(1).to_string(), "x^2");
        let dz = q.partial_derivative(2);
        assert_eq!(dz, MultiPoly::parse(&r, "-2*z - 3*x*z^2").unwrap());
        let f = Field::Rationals;
        let v = dz.evaluate(&[f.from_i64(5), f.zero(), f.zero()]).unwrap();
        assert!(v.is_zero());
        let t = MultiPoly::parse(&r, "x + (y + x^2)^2").unwrap();
        assert_eq!(t.total_degree(), Some(4));
    }

    #[test]
    fn degrevlex_leading_term() {
        let r = PolyRing::new(Field::Rationals, &["x", "y", "z"], MonomialOrder::Degrevlex).unwrap();
        let p = MultiPoly::parse(&r, "x*z^2 + y^3 + x^2").unwrap();
        // degree 3 ties: y^3 > x*z^2 in degrevlex
        assert_eq!(p.leading_monomial().unwrap().exps(), &[0, 3, 0]);
        assert_eq!(p.to_string(), "y^3 + x*z^2 + x^2");
    }

    #[test]
    fn ring_mismatch_reported() {
        let a = MultiPoly::var(&ring(&["x"]), 0);
        let b = MultiPoly::var(&ring(&["y"]), 0);
        assert_eq!(a.try_add(&b), Err(Error::RingMismatch));
        assert_eq!(poly_arith(PolyOp::Mul, &a, &b), Err(Error::RingMismatch));
    }
}
