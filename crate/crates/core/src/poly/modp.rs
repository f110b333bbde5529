//! Images of polynomials under a [`Reduction`] to `F_p`.

use super::MultiPoly;
use crate::scalar::modular::{add_mod, mul_mod, Reduction};

/// A polynomial with coefficients in `F_p`, stored as a term list.
#[derive(Clone, Debug)]
pub struct ModPoly {
    p: u64,
    terms: Vec<(Vec<u32>, u64)>,
}

impl MultiPoly {
    /// Reduces every coefficient; `None` if some denominator vanishes mod `p`.
    pub fn reduce_mod(&self, red: &Reduction) -> Option<ModPoly> {
        let mut terms = Vec::with_capacity(self.num_terms());
        for (m, c) in self.terms() {
            let v = red.reduce(c)?;
            if v != 0 {
                terms.push((m.exps().to_vec(), v));
            }
        }
        Some(ModPoly { p: red.prime(), terms })
    }
}

impl ModPoly {
    pub fn eval(&self, point: &[u64]) -> u64 {
        let p = self.p;
        let mut acc = 0;
        for (exps, c) in &self.terms {
            let mut t = *c;
            for (x, &e) in point.iter().zip(exps) {
                for _ in 0..e {
                    t = mul_mod(t, *x, p);
                }
            }
            acc = add_mod(acc, t, p);
        }
        acc
    }

    /// Composes with dense univariate polynomials (coefficient lists, low
    /// degree first), truncating nothing.
    pub fn compose_univariate(&self, images: &[Vec<u64>]) -> Vec<u64> {
        let p = self.p;
        let mut powers: Vec<Vec<Vec<u64>>> = images.iter().map(|_| vec![vec![1]]).collect();
        let mut out: Vec<u64> = Vec::new();
        for (exps, c) in &self.terms {
            let mut t = vec![*c];
            for (i, &e) in exps.iter().enumerate() {
                while powers[i].len() <= e as usize {
                    let next = dense_mul(powers[i].last().unwrap(), &images[i], p);
                    powers[i].push(next);
                }
                if e > 0 {
                    t = dense_mul(&t, &powers[i][e as usize], p);
                }
            }
            if out.len() < t.len() {
                out.resize(t.len(), 0);
            }
            for (o, v) in out.iter_mut().zip(t) {
                *o = add_mod(*o, v, p);
            }
        }
        while out.last() == Some(&0) {
            out.pop();
        }
        out
    }
}

pub(crate) fn dense_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = add_mod(out[i + j], mul_mod(x, y, p), p);
        }
    }
    while out.last() == Some(&0) {
        out.pop();
    }
    out
}
