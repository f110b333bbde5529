//! Polynomial self-maps of affine space.

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::linalg::SquareMatrix;
use crate::poly::{same_ring, MultiPoly, Ring};
use crate::scalar::modular::Reduction;
use crate::scalar::{Field, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;

/// A tame generator of the automorphism group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ElementaryFactor {
    /// `x -> M x + shift`.
    Affine { matrix: SquareMatrix, shift: Vec<Scalar> },
    /// `x_target -> x_target + p`, other coordinates fixed; `p` avoids `x_target`.
    Elementary { target: usize, p: MultiPoly },
    /// Coordinate `i` of the image is `x_{sigma[i]}`.
    Permutation(Vec<usize>),
}

impl ElementaryFactor {
    pub fn validate(&self, ring: &Ring) -> Result<()> {
        let n = ring.nvars();
        match self {
            ElementaryFactor::Affine { matrix, shift } => {
                if matrix.dim() != n || shift.len() != n {
                    return Err(Error::ArityMismatch { expected: n, got: matrix.dim().min(shift.len()) });
                }
                if matrix.field() != ring.field() || shift.iter().any(|s| s.field() != *ring.field()) {
                    return Err(Error::FieldMismatch(ring.field().describe(), matrix.field().describe()));
                }
                if matrix.det().is_zero() {
                    return Err(Error::InvalidInput("affine factor has a singular matrix".into()));
                }
            }
            ElementaryFactor::Elementary { target, p } => {
                if *target >= n {
                    return Err(Error::InvalidInput(format!("elementary target {target} out of range")));
                }
                if !same_ring(p.ring(), ring) {
                    return Err(Error::RingMismatch);
                }
                if p.involves(*target) {
                    return Err(Error::InvalidInput(format!(
                        "elementary factor on {} must not involve {}",
                        ring.vars()[*target],
                        ring.vars()[*target]
                    )));
                }
            }
            ElementaryFactor::Permutation(sigma) => {
                let mut seen = vec![false; n];
                if sigma.len() != n {
                    return Err(Error::ArityMismatch { expected: n, got: sigma.len() });
                }
                for &s in sigma {
                    if s >= n || seen[s] {
                        return Err(Error::InvalidInput(format!("{sigma:?} is not a permutation")));
                    }
                    seen[s] = true;
                }
            }
        }
        Ok(())
    }

    pub fn coords(&self, ring: &Ring) -> Vec<MultiPoly> {
        let n = ring.nvars();
        match self {
            ElementaryFactor::Affine { matrix, shift } => (0..n)
                .map(|i| {
                    let mut c = MultiPoly::constant(ring, shift[i].clone());
                    for j in 0..n {
                        c = &c + &MultiPoly::var(ring, j).scale(matrix.get(i, j));
                    }
                    c
                })
                .collect(),
            ElementaryFactor::Elementary { target, p } => (0..n)
                .map(|i| if i == *target { &MultiPoly::var(ring, i) + p } else { MultiPoly::var(ring, i) })
                .collect(),
            ElementaryFactor::Permutation(sigma) => sigma.iter().map(|&s| MultiPoly::var(ring, s)).collect(),
        }
    }

    pub fn inverse(&self) -> Result<ElementaryFactor> {
        Ok(match self {
            ElementaryFactor::Affine { matrix, shift } => {
                let inv = matrix.inverse()?;
                let s = inv.apply(shift).into_iter().map(|c| -c).collect();
                ElementaryFactor::Affine { matrix: inv, shift: s }
            }
            ElementaryFactor::Elementary { target, p } => ElementaryFactor::Elementary { target: *target, p: -p },
            ElementaryFactor::Permutation(sigma) => {
                let mut tau = vec![0; sigma.len()];
                for (i, &s) in sigma.iter().enumerate() {
                    tau[s] = i;
                }
                ElementaryFactor::Permutation(tau)
            }
        })
    }
}

/// A polynomial self-map `x -> (F_1(x), ..., F_n(x))`, optionally carrying a
/// factorization into tame generators (`word[0] o word[1] o ...`).
///
/// Equality compares coordinates only.
#[derive(Clone, Debug)]
pub struct PolyMap {
    ring: Ring,
    coords: Vec<MultiPoly>,
    word: Option<Vec<ElementaryFactor>>,
}

impl PartialEq for PolyMap {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.coords == other.coords
    }
}
impl Eq for PolyMap {}

impl PolyMap {
    pub fn new(ring: &Ring, coords: Vec<MultiPoly>) -> Result<Self> {
        if coords.len() != ring.nvars() {
            return Err(Error::ArityMismatch { expected: ring.nvars(), got: coords.len() });
        }
        if coords.iter().any(|c| !same_ring(c.ring(), ring)) {
            return Err(Error::RingMismatch);
        }
        Ok(PolyMap { ring: ring.clone(), coords, word: None })
    }

    pub fn parse<S: AsRef<str>>(ring: &Ring, coords: &[S]) -> Result<Self> {
        let cs = coords.iter().map(|s| MultiPoly::parse(ring, s.as_ref())).collect::<Result<Vec<_>>>()?;
        Self::new(ring, cs)
    }

    pub fn identity(ring: &Ring) -> Self {
        let coords = (0..ring.nvars()).map(|i| MultiPoly::var(ring, i)).collect();
        PolyMap { ring: ring.clone(), coords, word: Some(Vec::new()) }
    }

    /// Expands `word[0] o word[1] o ... o word[k-1]`.
    pub fn from_word(ring: &Ring, word: Vec<ElementaryFactor>) -> Result<Self> {
        for f in &word {
            f.validate(ring)?;
        }
        let mut acc: Option<Vec<MultiPoly>> = None;
        for f in word.iter().rev() {
            let fc = f.coords(ring);
            acc = Some(match acc {
                None => fc,
                Some(inner) => fc.iter().map(|c| c.substitute(&inner)).collect::<Result<Vec<_>>>()?,
            });
        }
        let coords = acc.unwrap_or_else(|| Self::identity(ring).coords);
        let map = PolyMap { ring: ring.clone(), coords, word: Some(word) };
        let det = map.jacobian_determinant();
        if !det.is_constant() || det.is_zero() {
            return Err(Error::Internal(format!("word-built map has Jacobian determinant {det}")));
        }
        Ok(map)
    }

    /// Attaches a word after checking that it expands to these coordinates.
    pub fn with_word(self, word: Vec<ElementaryFactor>) -> Result<Self> {
        let built = Self::from_word(&self.ring, word)?;
        if built.coords != self.coords {
            return Err(Error::InvalidInput("word does not expand to the given coordinates".into()));
        }
        Ok(built)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn field(&self) -> &Field {
        self.ring.field()
    }

    pub fn nvars(&self) -> usize {
        self.ring.nvars()
    }

    pub fn coords(&self) -> &[MultiPoly] {
        &self.coords
    }

    pub fn word(&self) -> Option<&[ElementaryFactor]> {
        self.word.as_deref()
    }

    pub fn is_identity(&self) -> bool {
        self.coords.iter().enumerate().all(|(i, c)| *c == MultiPoly::var(&self.ring, i))
    }

    /// Maximum total degree of the coordinates.
    pub fn degree(&self) -> u32 {
        self.coords.iter().filter_map(|c| c.total_degree()).max().unwrap_or(0)
    }

    fn num_terms(&self) -> usize {
        self.coords.iter().map(|c| c.num_terms()).max().unwrap_or(0)
    }

    /// `f o F`.
    pub fn pullback(&self, f: &MultiPoly) -> Result<MultiPoly> {
        if !same_ring(f.ring(), &self.ring) {
            return Err(Error::RingMismatch);
        }
        f.substitute(&self.coords)
    }

    /// `self o other`.
    pub fn compose(&self, other: &PolyMap) -> Result<PolyMap> {
        if !same_ring(&self.ring, &other.ring) {
            return Err(Error::RingMismatch);
        }
        let coords = self.coords.iter().map(|c| c.substitute(&other.coords)).collect::<Result<Vec<_>>>()?;
        let word = match (&self.word, &other.word) {
            (Some(a), Some(b)) => Some(a.iter().chain(b).cloned().collect()),
            _ => None,
        };
        Ok(PolyMap { ring: self.ring.clone(), coords, word })
    }

    /// Inverse through the word: reverse it and invert each factor.
    pub fn invert(&self) -> Result<PolyMap> {
        let word = self.word.as_ref().ok_or(Error::NoWordFactorization)?;
        let inv = word.iter().rev().map(|f| f.inverse()).collect::<Result<Vec<_>>>()?;
        Self::from_word(&self.ring, inv)
    }

    /// `F^k` for `k >= 0` by repeated composition, bounded by the term budget.
    pub fn pow(&self, k: u32, budget: &Budget) -> Result<PolyMap> {
        let mut acc = Self::identity(&self.ring);
        if self.word.is_none() {
            acc.word = None;
        }
        for _ in 0..k {
            acc = self.compose(&acc)?;
            budget.check_terms(acc.num_terms(), "map iterate")?;
        }
        Ok(acc)
    }

    pub fn apply_point(&self, p: &[Scalar]) -> Result<Vec<Scalar>> {
        self.coords.iter().map(|c| c.evaluate(p)).collect()
    }

    /// Entry `(i, j)` is `dF_i/dx_j`.
    pub fn jacobian_matrix(&self) -> Vec<Vec<MultiPoly>> {
        self.coords.iter().map(|c| (0..self.nvars()).map(|j| c.partial_derivative(j)).collect()).collect()
    }

    pub fn jacobian_at(&self, p: &[Scalar]) -> Result<SquareMatrix> {
        let rows = self
            .jacobian_matrix()
            .iter()
            .map(|r| r.iter().map(|e| e.evaluate(p)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        SquareMatrix::new(self.field(), rows)
    }

    pub fn jacobian_determinant(&self) -> MultiPoly {
        det_poly(&self.ring, &self.jacobian_matrix())
    }

    /// `d(k)` for `k = 1..=n`: the maximal total degree of a coordinate of `F^k`.
    ///
    /// Each value is first bracketed between a lower bound (degree of the
    /// iterate restricted to a line, computed mod `p`) and an upper bound
    /// (degree propagation through the coordinate supports). When the bounds
    /// meet the value is exact; otherwise the iterate is computed exactly.
    pub fn iterate_degrees(&self, n: usize, budget: &Budget) -> Result<Vec<u32>> {
        let mut out = Vec::with_capacity(n);
        let Some((red, mods)) = self.reduced(0..4) else {
            return self.iterate_degrees_exact(n, budget);
        };
        let p = red.prime();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let mut line: Vec<Vec<u64>> = (0..self.nvars()).map(|_| vec![rng.gen_range(1..p), rng.gen_range(1..p)]).collect();
        let mut ub: Vec<u64> = vec![1; self.nvars()];
        for k in 1..=n {
            ub = self
                .coords
                .iter()
                .map(|c| {
                    c.terms()
                        .map(|(m, _)| m.exps().iter().zip(&ub).map(|(&e, &u)| (e as u64).saturating_mul(u)).sum())
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            line = mods.iter().map(|m| m.compose_univariate(&line)).collect();
            let lb = line.iter().map(|g| g.len().saturating_sub(1) as u64).max().unwrap_or(0);
            let hi = ub.iter().copied().max().unwrap_or(0);
            if lb != hi {
                let exact = self.iterate_degrees_exact(n, budget)?;
                debug_assert_eq!(&exact[..out.len()], &out[..]);
                return Ok(exact);
            }
            debug_assert!(k == out.len() + 1);
            out.push(u32::try_from(hi).map_err(|_| Error::BudgetExceeded("degree overflow".into()))?);
        }
        Ok(out)
    }

    /// Degree sequence by explicit iteration (the reference computation).
    pub fn iterate_degrees_exact(&self, n: usize, budget: &Budget) -> Result<Vec<u32>> {
        let mut cur = self.clone();
        let mut out = Vec::with_capacity(n);
        for k in 1..=n {
            if k > 1 {
                cur = self.compose(&cur)?;
                budget.check_terms(cur.num_terms(), "map iterate")?;
            }
            out.push(cur.degree());
        }
        Ok(out)
    }

    pub(crate) fn reduced(&self, attempts: std::ops::Range<usize>) -> Option<(Reduction, Vec<crate::poly::ModPoly>)> {
        for a in attempts {
            let Some(red) = Reduction::for_field(self.field(), a) else { continue };
            if let Some(m) = self.coords.iter().map(|c| c.reduce_mod(&red)).collect::<Option<Vec<_>>>() {
                return Some((red, m));
            }
        }
        None
    }

    /// Smallest `d <= bound` with `F^d = Id`.
    ///
    /// Candidates are first filtered by following the orbit of random points
    /// mod `p` (a period of the exact map is a period of every reduction);
    /// survivors are confirmed by exact composition.
    pub fn order_up_to(&self, bound: u32, budget: &Budget) -> Result<Option<u32>> {
        let mut candidates: Vec<u32> = (1..=bound).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(0x0dd);
        let mut filtered = 0;
        for a in 0..6 {
            if filtered == 2 || candidates.is_empty() {
                break;
            }
            let Some((red, mods)) = self.reduced(a..a + 1) else { continue };
            let p = red.prime();
            let start: Vec<u64> = (0..self.nvars()).map(|_| rng.gen_range(0..p)).collect();
            let mut q = start.clone();
            let mut periods = Vec::new();
            for d in 1..=bound {
                q = mods.iter().map(|m| m.eval(&q)).collect();
                if q == start {
                    periods.push(d);
                }
            }
            candidates.retain(|d| periods.contains(d));
            filtered += 1;
        }
        let mut cur = self.clone();
        let mut reached = 1;
        for d in candidates {
            while reached < d {
                cur = self.compose(&cur)?;
                budget.check_terms(cur.num_terms(), "map iterate")?;
                reached += 1;
            }
            if cur.is_identity() {
                return Ok(Some(d));
            }
        }
        Ok(None)
    }
}

/// Checks `h o a = b o h`, i.e. `b = h a h^-1`.
pub fn verify_conjugacy(h: &PolyMap, a: &PolyMap, b: &PolyMap) -> Result<bool> {
    if h.word.is_none() {
        return Err(Error::NoWordFactorization);
    }
    Ok(h.compose(a)? == b.compose(h)?)
}

fn det_poly(ring: &Ring, m: &[Vec<MultiPoly>]) -> MultiPoly {
    let n = m.len();
    match n {
        0 => MultiPoly::one(ring),
        1 => m[0][0].clone(),
        _ => {
            let mut acc = MultiPoly::zero(ring);
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<MultiPoly>> =
                    m[1..].iter().map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, e)| e.clone()).collect()).collect();
                let t = &m[0][j] * &det_poly(ring, &minor);
                acc = if j % 2 == 0 { &acc + &t } else { &acc - &t };
            }
            acc
        }
    }
}

impl fmt::Display for PolyMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cs: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", cs.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{MonomialOrder, PolyRing};

    fn ring2() -> Ring {
        PolyRing::new(Field::Rationals, &["x", "y"], MonomialOrder::Lex).unwrap()
    }

    fn elem(r: &Ring, target: usize, p: &str) -> ElementaryFactor {
        ElementaryFactor::Elementary { target, p: MultiPoly::parse(r, p).unwrap() }
    }

    fn f_and_g(r: &Ring) -> (PolyMap, PolyMap) {
        (PolyMap::from_word(r, vec![elem(r, 0, "y^2")]).unwrap(), PolyMap::from_word(r, vec![elem(r, 1, "x^2")]).unwrap())
    }

    #[test]
    fn composition_of_intro_factors() {
        let r = ring2();
        let (f, g) = f_and_g(&r);
        let fg = f.compose(&g).unwrap();
        assert_eq!(fg, PolyMap::parse(&r, &["x + (y + x^2)^2", "y + x^2"]).unwrap());
        assert_eq!(PolyMap::identity(&r).compose(&fg).unwrap(), fg);
        let inv = fg.invert().unwrap();
        assert!(fg.compose(&inv).unwrap().is_identity());
        assert!(inv.compose(&fg).unwrap().is_identity());
    }

    #[test]
    fn affine_composition_and_inverse() {
        let r = ring2();
        let q = |n| Field::Rationals.from_i64(n);
        let m1 = SquareMatrix::new(r.field(), vec![vec![q(1), q(2)], vec![q(0), q(1)]]).unwrap();
        let m2 = SquareMatrix::new(r.field(), vec![vec![q(3), q(0)], vec![q(1), q(1)]]).unwrap();
        let a = PolyMap::from_word(&r, vec![ElementaryFactor::Affine { matrix: m1.clone(), shift: vec![q(0), q(0)] }])
            .unwrap();
        let b = PolyMap::from_word(&r, vec![ElementaryFactor::Affine { matrix: m2.clone(), shift: vec![q(0), q(0)] }])
            .unwrap();
        let prod = PolyMap::from_word(&r, vec![ElementaryFactor::Affine { matrix: m1.mul(&m2), shift: vec![q(0), q(0)] }])
            .unwrap();
        assert_eq!(a.compose(&b).unwrap(), prod);

        let shift =
            PolyMap::from_word(&r, vec![ElementaryFactor::Affine { matrix: SquareMatrix::new(r.field(), vec![vec![q(2), q(0)], vec![q(0), q(1)]]).unwrap(), shift: vec![q(1), q(0)] }])
                .unwrap();
        assert_eq!(shift.invert().unwrap(), PolyMap::parse(&r, &["(x - 1)/2", "y"]).unwrap());
    }

    #[test]
    fn elementary_inverse_and_word_checks() {
        let r = ring2();
        let g = PolyMap::from_word(&r, vec![elem(&r, 1, "x^2 + 3")]).unwrap();
        assert_eq!(g.invert().unwrap(), PolyMap::parse(&r, &["x", "y - x^2 - 3"]).unwrap());
        assert!(PolyMap::from_word(&r, vec![elem(&r, 1, "y")]).is_err());
        let raw = PolyMap::parse(&r, &["x", "y + x^2"]).unwrap();
        assert_eq!(raw.invert(), Err(Error::NoWordFactorization));
        let swap = PolyMap::from_word(&r, vec![ElementaryFactor::Permutation(vec![1, 0])]).unwrap();
        assert_eq!(swap, PolyMap::parse(&r, &["y", "x"]).unwrap());
        assert!(raw.with_word(vec![elem(&r, 1, "x^2")]).is_ok());
    }

    #[test]
    fn degree_sequences() {
        let r = ring2();
        let (f, g) = f_and_g(&r);
        let fg = f.compose(&g).unwrap();
        let b = Budget::default();
        assert_eq!(fg.iterate_degrees(3, &b).unwrap(), vec![4, 16, 64]);
        assert_eq!(fg.iterate_degrees_exact(3, &b).unwrap(), vec![4, 16, 64]);
        assert_eq!(PolyMap::identity(&r).iterate_degrees(4, &b).unwrap(), vec![1, 1, 1, 1]);
        let t = PolyMap::parse(&r, &["x", "y + x^2"]).unwrap();
        assert_eq!(t.iterate_degrees(3, &b).unwrap(), vec![2, 2, 2]);
        // The bounds disagree here (cancellation), forcing the exact path.
        let c = PolyMap::parse(&r, &["x + y^2", "y"]).unwrap().compose(&PolyMap::parse(&r, &["x - y^2", "y"]).unwrap()).unwrap();
        assert_eq!(c.iterate_degrees(2, &b).unwrap(), vec![1, 1]);
    }

    #[test]
    fn conjugacy() {
        let r = ring2();
        let h = PolyMap::from_word(&r, vec![elem(&r, 1, "x^2")]).unwrap();
        let a = PolyMap::parse(&r, &["2*x", "y"]).unwrap();
        let b = PolyMap::parse(&r, &["2*x", "y + 3*x^2"]).unwrap();
        assert!(verify_conjugacy(&h, &a, &b).unwrap());
        let id = PolyMap::identity(&r);
        assert!(verify_conjugacy(&id, &a, &a).unwrap());
        assert!(!verify_conjugacy(&id, &a, &PolyMap::parse(&r, &["x", "2*y"]).unwrap()).unwrap());
        assert_eq!(verify_conjugacy(&a, &a, &a), Err(Error::NoWordFactorization));
    }

    #[test]
    fn orders() {
        let r = ring2();
        let b = Budget::default();
        assert_eq!(PolyMap::parse(&r, &["-x", "-y"]).unwrap().order_up_to(10, &b).unwrap(), Some(2));
        assert_eq!(PolyMap::parse(&r, &["2*x", "y"]).unwrap().order_up_to(20, &b).unwrap(), None);
        let c4 = Field::cyclotomic(4).unwrap();
        let rc = PolyRing::new(c4, &["x", "y"], MonomialOrder::Lex).unwrap();
        assert_eq!(PolyMap::parse(&rc, &["zeta*x", "y"]).unwrap().order_up_to(10, &b).unwrap(), Some(4));
        assert_eq!(PolyMap::identity(&r).order_up_to(5, &b).unwrap(), Some(1));
        let conj = PolyMap::parse(&r, &["-x", "y + x^2"]).unwrap();
        assert_eq!(conj.order_up_to(10, &b).unwrap(), None);
        let inv = PolyMap::parse(&r, &["-x", "-y + x^2"]).unwrap();
        assert_eq!(inv.order_up_to(10, &b).unwrap(), Some(2));
    }

    #[test]
    fn jacobians() {
        let r = ring2();
        let q = |n, d| Field::Rationals.from_ratio(n, d);
        let d = PolyMap::parse(&r, &["2*x", "y/2"]).unwrap();
        let j = d.jacobian_at(&[q(0, 1), q(0, 1)]).unwrap();
        assert_eq!(j, SquareMatrix::new(r.field(), vec![vec![q(2, 1), q(0, 1)], vec![q(0, 1), q(1, 2)]]).unwrap());
        assert!(!j.is_unipotent());
        let id = PolyMap::identity(&r).jacobian_at(&[q(3, 1), q(-1, 2)]).unwrap();
        assert!(id.is_identity() && id.is_unipotent());
        assert!(d.jacobian_at(&[q(0, 1)]).is_err());
    }
}
