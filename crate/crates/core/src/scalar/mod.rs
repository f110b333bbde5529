//! Exact coefficient fields: the rationals, cyclotomic fields `Q(zeta_m)` and
//! univariate rational function fields `Q(x)`.
//!
//! Every [`Scalar`] is kept in a canonical form, so equality of scalars is
//! equality of representations.

pub mod modular;
pub mod upoly;

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;
use upoly::{cyclotomic_polynomial, UPoly};

/// Serializable description of a coefficient field.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FieldSpec {
    Rationals,
    Cyclotomic { m: u32 },
    RationalFunctions { param: String },
}

#[derive(Debug)]
pub struct CyclotomicField {
    m: u32,
    modulus: UPoly,
}

impl CyclotomicField {
    pub fn order(&self) -> u32 {
        self.m
    }

    /// The cyclotomic polynomial the representatives are reduced by.
    pub fn modulus(&self) -> &UPoly {
        &self.modulus
    }
}

/// Runtime handle to a coefficient field. Cheap to clone.
#[derive(Clone, Debug)]
pub enum Field {
    Rationals,
    Cyclotomic(Arc<CyclotomicField>),
    RationalFunctions(Arc<str>),
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Field::Rationals, Field::Rationals) => true,
            (Field::Cyclotomic(a), Field::Cyclotomic(b)) => a.m == b.m,
            (Field::RationalFunctions(a), Field::RationalFunctions(b)) => a == b,
            _ => false,
        }
    }
}
impl Eq for Field {}

pub const ZETA: &str = "zeta";

impl Field {
    pub fn from_spec(spec: &FieldSpec) -> Result<Field> {
        match spec {
            FieldSpec::Rationals => Ok(Field::Rationals),
            FieldSpec::Cyclotomic { m } => Field::cyclotomic(*m),
            FieldSpec::RationalFunctions { param } => Field::rational_functions(param),
        }
    }

    pub fn cyclotomic(m: u32) -> Result<Field> {
        if m == 0 {
            return Err(Error::InvalidInput("cyclotomic order must be >= 1".into()));
        }
        if m > 512 {
            return Err(Error::InvalidInput(format!("cyclotomic order {m} is beyond desk scale")));
        }
        Ok(Field::Cyclotomic(Arc::new(CyclotomicField { m, modulus: cyclotomic_polynomial(m) })))
    }

    pub fn rational_functions(param: &str) -> Result<Field> {
        let ok = param.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && param.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !ok || param == ZETA {
            return Err(Error::InvalidInput(format!("invalid parameter name {param:?}")));
        }
        Ok(Field::RationalFunctions(param.into()))
    }

    pub fn spec(&self) -> FieldSpec {
        match self {
            Field::Rationals => FieldSpec::Rationals,
            Field::Cyclotomic(c) => FieldSpec::Cyclotomic { m: c.m },
            Field::RationalFunctions(p) => FieldSpec::RationalFunctions { param: p.to_string() },
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Field::Rationals => "Q".to_string(),
            Field::Cyclotomic(c) => format!("Q(zeta_{})", c.m),
            Field::RationalFunctions(p) => format!("Q({p})"),
        }
    }

    /// Identifier that denotes the field generator in literals, if any.
    pub fn generator_name(&self) -> Option<&str> {
        match self {
            Field::Rationals => None,
            Field::Cyclotomic(_) => Some(ZETA),
            Field::RationalFunctions(p) => Some(p),
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_rational(BigRational::zero())
    }

    pub fn one(&self) -> Scalar {
        self.from_rational(BigRational::one())
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        self.from_rational(BigRational::from_integer(n.into()))
    }

    pub fn from_ratio(&self, n: i64, d: i64) -> Scalar {
        self.from_rational(BigRational::new(n.into(), d.into()))
    }

    pub fn from_rational(&self, q: BigRational) -> Scalar {
        match self {
            Field::Rationals => Scalar(Repr::Q(q)),
            Field::Cyclotomic(c) => Scalar(Repr::Cyc(c.clone(), UPoly::constant(q))),
            Field::RationalFunctions(p) => {
                Scalar(Repr::RatFn(p.clone(), UPoly::constant(q), UPoly::one()))
            }
        }
    }

    /// `zeta` in a cyclotomic field, the parameter in `Q(x)`.
    pub fn generator(&self) -> Option<Scalar> {
        match self {
            Field::Rationals => None,
            Field::Cyclotomic(c) => {
                let t = UPoly::monomial(BigRational::one(), 1);
                Some(Scalar(Repr::Cyc(c.clone(), t.rem(&c.modulus))))
            }
            Field::RationalFunctions(p) => Some(Scalar(Repr::RatFn(
                p.clone(),
                UPoly::monomial(BigRational::one(), 1),
                UPoly::one(),
            ))),
        }
    }

    /// Builds an element of `Q(zeta_m)` from its representative polynomial.
    pub fn cyclotomic_element(&self, rep: &UPoly) -> Option<Scalar> {
        match self {
            Field::Cyclotomic(c) => Some(Scalar(Repr::Cyc(c.clone(), rep.rem(&c.modulus)))),
            _ => None,
        }
    }

    /// Builds `num/den` in `Q(x)`.
    pub fn rational_function(&self, num: UPoly, den: UPoly) -> Result<Scalar> {
        match self {
            Field::RationalFunctions(p) => {
                if den.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                Ok(Scalar(ratfn_normalize(p.clone(), num, den)))
            }
            _ => Err(Error::InvalidInput("not a rational function field".into())),
        }
    }

    /// Order of the torsion subgroup of the multiplicative group.
    pub fn torsion_order(&self) -> u64 {
        match self {
            Field::Cyclotomic(c) => (c.m as u64).lcm(&2),
            _ => 2,
        }
    }

    /// All roots of unity of the field, sorted by multiplicative order and
    /// then by printed form.
    pub fn roots_of_unity(&self) -> Vec<Scalar> {
        let mut out = vec![self.one(), -self.one()];
        if let Some(z) = self.generator().filter(|_| matches!(self, Field::Cyclotomic(_))) {
            let mut p = self.one();
            for _ in 0..self.torsion_order() {
                p = &p * &z;
                out.push(p.clone());
                out.push(-p.clone());
            }
        }
        let mut keyed: Vec<(u64, String, Scalar)> = out
            .into_iter()
            .map(|s| {
                let ord = s.root_of_unity_order().ok().flatten().unwrap_or(0);
                (ord, s.to_string(), s)
            })
            .collect();
        keyed.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
        keyed.dedup_by(|a, b| a.1 == b.1);
        keyed.into_iter().map(|k| k.2).collect()
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

#[derive(Clone, Debug)]
enum Repr {
    Q(BigRational),
    Cyc(Arc<CyclotomicField>, UPoly),
    /// numerator, monic denominator, coprime
    RatFn(Arc<str>, UPoly, UPoly),
}

/// An element of one of the supported exact fields.
#[derive(Clone, Debug)]
pub struct Scalar(Repr);

fn ratfn_normalize(p: Arc<str>, num: UPoly, den: UPoly) -> Repr {
    if num.is_zero() {
        return Repr::RatFn(p, UPoly::zero(), UPoly::one());
    }
    if den.is_constant() {
        let c = den.leading().recip();
        return Repr::RatFn(p, num.scale(&c), UPoly::one());
    }
    let g = num.gcd(&den);
    let (num, den) = if g.is_one() { (num, den) } else { (num.div_rem(&g).0, den.div_rem(&g).0) };
    let lc = den.leading().recip();
    Repr::RatFn(p, num.scale(&lc), den.scale(&lc))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Inv,
}

impl Scalar {
    pub fn rational(q: BigRational) -> Scalar {
        Scalar(Repr::Q(q))
    }

    pub fn field(&self) -> Field {
        match &self.0 {
            Repr::Q(_) => Field::Rationals,
            Repr::Cyc(c, _) => Field::Cyclotomic(c.clone()),
            Repr::RatFn(p, _, _) => Field::RationalFunctions(p.clone()),
        }
    }

    pub fn same_field(&self, other: &Scalar) -> bool {
        match (&self.0, &other.0) {
            (Repr::Q(_), Repr::Q(_)) => true,
            (Repr::Cyc(a, _), Repr::Cyc(b, _)) => a.m == b.m,
            (Repr::RatFn(a, ..), Repr::RatFn(b, ..)) => a == b,
            _ => false,
        }
    }

    fn check_field(&self, other: &Scalar) -> Result<()> {
        if self.same_field(other) {
            Ok(())
        } else {
            Err(Error::FieldMismatch(self.field().describe(), other.field().describe()))
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Q(q) => q.is_zero(),
            Repr::Cyc(_, p) => p.is_zero(),
            Repr::RatFn(_, n, _) => n.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.0 {
            Repr::Q(q) => q.is_one(),
            Repr::Cyc(_, p) => p.is_one(),
            Repr::RatFn(_, n, d) => n.is_one() && d.is_one(),
        }
    }

    /// The value as a rational number when it lies in the prime field.
    pub fn to_rational(&self) -> Option<BigRational> {
        match &self.0 {
            Repr::Q(q) => Some(q.clone()),
            Repr::Cyc(_, p) if p.is_constant() => Some(p.coeff(0)),
            Repr::RatFn(_, n, d) if n.is_constant() && d.is_one() => Some(n.coeff(0)),
            _ => None,
        }
    }

    /// Cyclotomic representative polynomial in `zeta`.
    pub fn cyclotomic_rep(&self) -> Option<&UPoly> {
        match &self.0 {
            Repr::Cyc(_, p) => Some(p),
            _ => None,
        }
    }

    /// Numerator and denominator of a `Q(x)` element.
    pub fn rational_function_parts(&self) -> Option<(&UPoly, &UPoly)> {
        match &self.0 {
            Repr::RatFn(_, n, d) => Some((n, d)),
            _ => None,
        }
    }

    fn add_impl(&self, other: &Scalar) -> Scalar {
        match (&self.0, &other.0) {
            (Repr::Q(a), Repr::Q(b)) => Scalar(Repr::Q(a + b)),
            (Repr::Cyc(c, a), Repr::Cyc(_, b)) => Scalar(Repr::Cyc(c.clone(), a.add(b))),
            (Repr::RatFn(p, an, ad), Repr::RatFn(_, bn, bd)) => {
                if ad.is_one() && bd.is_one() {
                    Scalar(Repr::RatFn(p.clone(), an.add(bn), UPoly::one()))
                } else if ad == bd {
                    Scalar(ratfn_normalize(p.clone(), an.add(bn), ad.clone()))
                } else {
                    let num = an.mul(bd).add(&bn.mul(ad));
                    Scalar(ratfn_normalize(p.clone(), num, ad.mul(bd)))
                }
            }
            _ => mismatch_panic(self, other),
        }
    }

    fn mul_impl(&self, other: &Scalar) -> Scalar {
        match (&self.0, &other.0) {
            (Repr::Q(a), Repr::Q(b)) => Scalar(Repr::Q(a * b)),
            (Repr::Cyc(c, a), Repr::Cyc(_, b)) => {
                let prod = if a.is_constant() {
                    b.scale(&a.coeff(0))
                } else if b.is_constant() {
                    a.scale(&b.coeff(0))
                } else {
                    a.mul(b).rem(&c.modulus)
                };
                Scalar(Repr::Cyc(c.clone(), prod))
            }
            (Repr::RatFn(p, an, ad), Repr::RatFn(_, bn, bd)) => {
                if ad.is_one() && bd.is_one() {
                    Scalar(Repr::RatFn(p.clone(), an.mul(bn), UPoly::one()))
                } else {
                    Scalar(ratfn_normalize(p.clone(), an.mul(bn), ad.mul(bd)))
                }
            }
            _ => mismatch_panic(self, other),
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match &self.0 {
            Repr::Q(q) => Scalar(Repr::Q(q.recip())),
            Repr::Cyc(c, a) => {
                if a.is_constant() {
                    Scalar(Repr::Cyc(c.clone(), UPoly::constant(a.coeff(0).recip())))
                } else {
                    let (g, s, _) = a.ext_gcd(&c.modulus);
                    if !g.is_one() {
                        return Err(Error::Internal("cyclotomic element not invertible".into()));
                    }
                    Scalar(Repr::Cyc(c.clone(), s.rem(&c.modulus)))
                }
            }
            Repr::RatFn(p, n, d) => Scalar(ratfn_normalize(p.clone(), d.clone(), n.clone())),
        })
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar> {
        self.check_field(other)?;
        Ok(self.add_impl(other))
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar> {
        self.check_field(other)?;
        Ok(self.add_impl(&-other))
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar> {
        self.check_field(other)?;
        Ok(self.mul_impl(other))
    }

    pub fn try_div(&self, other: &Scalar) -> Result<Scalar> {
        self.check_field(other)?;
        Ok(self.mul_impl(&other.inv()?))
    }

    /// Checked field arithmetic. `rhs` is ignored by the unary operations.
    pub fn arith(op: ArithOp, lhs: &Scalar, rhs: Option<&Scalar>) -> Result<Scalar> {
        let need = || rhs.ok_or_else(|| Error::InvalidInput("binary operation needs rhs".into()));
        match op {
            ArithOp::Add => lhs.try_add(need()?),
            ArithOp::Sub => lhs.try_sub(need()?),
            ArithOp::Mul => lhs.try_mul(need()?),
            ArithOp::Div => lhs.try_div(need()?),
            ArithOp::Neg => Ok(-lhs),
            ArithOp::Inv => lhs.inv(),
        }
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, e: i64) -> Result<Scalar> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = self.field().one();
        let mut sq = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &sq;
            }
            k >>= 1;
            if k > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// Exact multiplicative order if `self` is a root of unity.
    ///
    /// In `Q` and `Q(x)` the torsion is `{1, -1}`; in `Q(zeta_m)` it is
    /// cyclic of order `lcm(2, m)`, so the test `a^L = 1` decides torsion
    /// and the order is found by stripping prime factors of `L`.
    pub fn root_of_unity_order(&self) -> Result<Option<u64>> {
        if self.is_zero() {
            return Err(Error::ZeroInput);
        }
        if let Some(q) = self.to_rational() {
            return Ok(if q.is_one() {
                Some(1)
            } else if q == -BigRational::one() {
                Some(2)
            } else {
                None
            });
        }
        if !matches!(self.0, Repr::Cyc(..)) {
            return Ok(None);
        }
        let l = self.field().torsion_order();
        if !self.pow(l as i64)?.is_one() {
            return Ok(None);
        }
        let mut d = l;
        for p in prime_factors(l) {
            while d % p == 0 && self.pow((d / p) as i64)?.is_one() {
                d /= p;
            }
        }
        Ok(Some(d))
    }

    pub fn is_root_of_unity(&self) -> Result<bool> {
        Ok(self.root_of_unity_order()?.is_some())
    }

    /// An `r`-th root inside the declared field, if one is found.
    ///
    /// Rational values use exact integer roots (times roots of unity of the
    /// field); other cyclotomic values are only matched against the torsion.
    /// No field extension is ever made.
    pub fn nth_root(&self, r: u32) -> Option<Scalar> {
        if r == 0 {
            return None;
        }
        if r == 1 || self.is_zero() {
            return Some(self.clone());
        }
        let field = self.field();
        if let Some(q) = self.to_rational() {
            let abs_root = rational_nth_root(&q.abs(), r);
            if let Some(root) = abs_root {
                let root = field.from_rational(root);
                for w in field.roots_of_unity() {
                    let cand = &w * &root;
                    if cand.pow(r as i64).ok().as_ref() == Some(self) {
                        return Some(cand);
                    }
                }
            }
            return None;
        }
        field.roots_of_unity().into_iter().find(|w| w.pow(r as i64).ok().as_ref() == Some(self))
    }

    /// Sign/body decomposition used by the polynomial printer: returns
    /// `(negative, body, needs_parentheses)`.
    pub fn print_parts(&self) -> (bool, String, bool) {
        if let Some(q) = self.to_rational() {
            return (q.is_negative(), q.abs().to_string(), false);
        }
        let single = match &self.0 {
            Repr::Cyc(_, p) => p.coeffs().iter().filter(|c| !c.is_zero()).count() == 1,
            Repr::RatFn(_, n, d) => d.is_one() && n.coeffs().iter().filter(|c| !c.is_zero()).count() == 1,
            Repr::Q(_) => unreachable!(),
        };
        if single {
            let lead_neg = match &self.0 {
                Repr::Cyc(_, p) => p.leading().is_negative(),
                Repr::RatFn(_, n, _) => n.leading().is_negative(),
                Repr::Q(_) => unreachable!(),
            };
            if lead_neg {
                return (true, (-self).to_string(), false);
            }
            return (false, self.to_string(), false);
        }
        (false, self.to_string(), true)
    }
}

fn mismatch_panic(a: &Scalar, b: &Scalar) -> ! {
    panic!("scalar field mismatch: {} vs {}", a.field(), b.field())
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn integer_nth_root(n: &BigInt, r: u32) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let root = n.nth_root(r);
    if num_traits::pow(root.clone(), r as usize) == *n {
        Some(root)
    } else {
        None
    }
}

fn rational_nth_root(q: &BigRational, r: u32) -> Option<BigRational> {
    let n = integer_nth_root(q.numer(), r)?;
    let d = integer_nth_root(q.denom(), r)?;
    Some(BigRational::new(n, d))
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (&self.0, &other.0) {
            (Repr::Q(a), Repr::Q(b)) => a == b,
            (Repr::Cyc(f, a), Repr::Cyc(g, b)) => f.m == g.m && a == b,
            (Repr::RatFn(p, an, ad), Repr::RatFn(q, bn, bd)) => p == q && an == bn && ad == bd,
            _ => false,
        }
    }
}
impl Eq for Scalar {}

impl Hash for Scalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match &self.0 {
            Repr::Q(q) => {
                0u8.hash(state);
                q.hash(state);
            }
            Repr::Cyc(c, p) => {
                1u8.hash(state);
                c.m.hash(state);
                p.hash(state);
            }
            Repr::RatFn(name, n, d) => {
                2u8.hash(state);
                name.hash(state);
                n.hash(state);
                d.hash(state);
            }
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Q(q) => write!(f, "{q}"),
            Repr::Cyc(_, p) => f.write_str(&p.format_with(ZETA)),
            Repr::RatFn(name, n, d) => {
                let num = n.format_with(name);
                if d.is_one() {
                    return f.write_str(&num);
                }
                let multi = |p: &UPoly| p.coeffs().iter().filter(|c| !c.is_zero()).count() > 1;
                let num = if multi(n) { format!("({num})") } else { num };
                let den = d.format_with(name);
                let den = if multi(d) { format!("({den})") } else { den };
                write!(f, "{num}/{den}")
            }
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match &self.0 {
            Repr::Q(q) => Scalar(Repr::Q(-q)),
            Repr::Cyc(c, p) => Scalar(Repr::Cyc(c.clone(), p.neg())),
            Repr::RatFn(name, n, d) => Scalar(Repr::RatFn(name.clone(), n.neg(), d.clone())),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.add_impl(rhs)
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.add_impl(&-rhs)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.mul_impl(rhs)
    }
}

/// Panics on division by zero; use [`Scalar::try_div`] for the checked form.
impl Div for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        self.mul_impl(&rhs.inv().expect("scalar division by zero"))
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul, Div div);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_add() {
        let f = Field::Rationals;
        assert_eq!(&f.from_ratio(1, 2) + &f.from_ratio(1, 3), f.from_ratio(5, 6));
    }

    #[test]
    fn zeta_powers_in_q_zeta4() {
        // zeta^2 = -1 modulo zeta^2 + 1, hence zeta * zeta^3 = (zeta^2)^2 = 1
        let f = Field::cyclotomic(4).unwrap();
        let z = f.generator().unwrap();
        let z3 = z.pow(3).unwrap();
        assert_eq!(&z * &z, -f.one());
        assert_eq!(z3.to_string(), "-zeta");
        assert_eq!(&z * &z3, f.one());
    }

    #[test]
    fn ratfn_inverse_and_normal_form() {
        let f = Field::rational_functions("x").unwrap();
        let x = f.generator().unwrap();
        let p = &(&x * &x) + &f.one();
        let inv = p.inv().unwrap();
        assert_eq!(inv.to_string(), "1/(x^2 + 1)");
        assert!((&inv * &p).is_one());
        // (x^2 - 1)/(2x - 2) = (x + 1)/2
        let num = &(&x * &x) - &f.one();
        let den = &(&x * &f.from_i64(2)) - &f.from_i64(2);
        assert_eq!((&num / &den).to_string(), "1/2*x + 1/2");
    }

    #[test]
    fn mismatch_and_zero_division() {
        let q = Field::Rationals.one();
        let c = Field::cyclotomic(3).unwrap().one();
        assert!(matches!(q.try_add(&c), Err(Error::FieldMismatch(..))));
        assert_eq!(q.try_div(&Field::Rationals.zero()), Err(Error::DivisionByZero));
        assert_eq!(Field::Rationals.zero().inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn roots_of_unity_orders() {
        let q = Field::Rationals;
        assert_eq!(q.from_i64(-1).root_of_unity_order().unwrap(), Some(2));
        assert_eq!(q.from_i64(2).root_of_unity_order().unwrap(), None);
        assert_eq!(q.zero().root_of_unity_order(), Err(Error::ZeroInput));
        let c4 = Field::cyclotomic(4).unwrap();
        assert_eq!(c4.generator().unwrap().root_of_unity_order().unwrap(), Some(4));
        let c3 = Field::cyclotomic(3).unwrap();
        let z = c3.generator().unwrap();
        assert_eq!(z.root_of_unity_order().unwrap(), Some(3));
        assert_eq!((-z.clone()).root_of_unity_order().unwrap(), Some(6));
        assert_eq!((&z + &c3.one()).root_of_unity_order().unwrap(), Some(6));
        assert_eq!((&z + &c3.from_i64(2)).root_of_unity_order().unwrap(), None);
        assert_eq!(c3.roots_of_unity().len(), 6);
        let x = Field::rational_functions("x").unwrap();
        assert_eq!(x.generator().unwrap().root_of_unity_order().unwrap(), None);
        assert_eq!(x.from_i64(-1).root_of_unity_order().unwrap(), Some(2));
    }

    #[test]
    fn nth_roots() {
        let q = Field::Rationals;
        assert_eq!(q.from_ratio(9, 4).nth_root(2), Some(q.from_ratio(3, 2)));
        assert_eq!(q.from_i64(-8).nth_root(3), Some(q.from_i64(-2)));
        assert_eq!(q.from_i64(2).nth_root(2), None);
        assert_eq!(q.from_i64(-1).nth_root(2), None);
        let c4 = Field::cyclotomic(4).unwrap();
        let r = c4.from_i64(-4).nth_root(2).unwrap();
        assert_eq!(r.pow(2).unwrap(), c4.from_i64(-4));
    }

    #[test]
    fn cyclotomic_power_reduction() {
        let f = Field::cyclotomic(5).unwrap();
        let z = f.generator().unwrap();
        for k in 0..20 {
            assert_eq!(z.pow(k).unwrap(), z.pow(k % 5).unwrap());
        }
    }
}
