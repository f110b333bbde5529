//! Reduction of field elements into a prime field `F_p`.
//!
//! A [`Reduction`] is a ring homomorphism from the `p`-integral part of the
//! coefficient field onto `F_p` (`zeta` goes to a root of the cyclotomic
//! polynomial mod `p`, the parameter of `Q(x)` to a fixed residue). It is
//! only used for one-sided certificates: identities that hold exactly also
//! hold after reduction, so a failure mod `p` is a proof of failure.

use super::{upoly::UPoly, Field, Scalar};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

#[derive(Clone, Debug)]
pub struct Reduction {
    p: u64,
    zeta: Option<u64>,
    param: Option<u64>,
}

const BASE_PRIMES: [u64; 4] = [2_147_483_647, 2_147_483_629, 2_147_483_587, 2_147_483_579];

pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

pub fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

pub fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

/// Inverse modulo a prime; `None` for zero.
pub fn inv_mod(a: u64, p: u64) -> Option<u64> {
    if a % p == 0 {
        None
    } else {
        Some(pow_mod(a, p - 2, p))
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn bigint_mod(n: &BigInt, p: u64) -> u64 {
    let r = n % BigInt::from(p);
    let r = if r < BigInt::zero() { r + BigInt::from(p) } else { r };
    r.to_u64().expect("residue fits in u64")
}

impl Reduction {
    /// Builds the `attempt`-th reduction for a field; different attempts use
    /// different primes / parameter values.
    pub fn for_field(field: &Field, attempt: usize) -> Option<Reduction> {
        match field {
            Field::Rationals => {
                Some(Reduction { p: BASE_PRIMES[attempt % BASE_PRIMES.len()], zeta: None, param: None })
            }
            Field::RationalFunctions(_) => {
                let p = BASE_PRIMES[attempt % BASE_PRIMES.len()];
                let param = (1_000_003 + 7919 * attempt as u64) % p;
                Some(Reduction { p, zeta: None, param: Some(param) })
            }
            Field::Cyclotomic(c) => {
                let m = c.order() as u64;
                let mut k = (1u64 << 31) / m;
                let mut skipped = 0;
                let p = loop {
                    if k == 0 {
                        return None;
                    }
                    let cand = k * m + 1;
                    k -= 1;
                    if is_prime(cand) {
                        if skipped == attempt {
                            break cand;
                        }
                        skipped += 1;
                    }
                };
                let modulus = c.modulus();
                let mut red = Reduction { p, zeta: None, param: None };
                for g in 2..p {
                    let w = pow_mod(g, (p - 1) / m, p);
                    if red.reduce_upoly_at(modulus, w) == Some(0) {
                        red.zeta = Some(w);
                        return Some(red);
                    }
                }
                None
            }
        }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn reduce_rational(&self, q: &BigRational) -> Option<u64> {
        let n = bigint_mod(q.numer(), self.p);
        let d = inv_mod(bigint_mod(q.denom(), self.p), self.p)?;
        Some(mul_mod(n, d, self.p))
    }

    fn reduce_upoly_at(&self, poly: &UPoly, at: u64) -> Option<u64> {
        let mut acc = 0;
        for c in poly.coeffs().iter().rev() {
            acc = add_mod(mul_mod(acc, at, self.p), self.reduce_rational(c)?, self.p);
        }
        Some(acc)
    }

    /// Image of a scalar, `None` if a denominator vanishes mod `p`.
    pub fn reduce(&self, s: &Scalar) -> Option<u64> {
        if let Some(q) = s.to_rational() {
            return self.reduce_rational(&q);
        }
        if let Some(rep) = s.cyclotomic_rep() {
            return self.reduce_upoly_at(rep, self.zeta?);
        }
        if let Some((n, d)) = s.rational_function_parts() {
            let x0 = self.param?;
            let nv = self.reduce_upoly_at(n, x0)?;
            let dv = inv_mod(self.reduce_upoly_at(d, x0)?, self.p)?;
            return Some(mul_mod(nv, dv, self.p));
        }
        None
    }
}

/// The fraction `n/d` with `|n|, d <= sqrt(p/2)` congruent to `a` mod `p`,
/// if one exists.
pub fn rational_reconstruct(a: u64, p: u64) -> Option<BigRational> {
    let bound = ((p / 2) as f64).sqrt() as i128;
    let (mut r0, mut r1) = (p as i128, (a % p) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 > bound {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if t1 == 0 || t1.abs() > bound {
        return None;
    }
    let (n, d) = if t1 < 0 { (-r1, -t1) } else { (r1, t1) };
    Some(BigRational::new(BigInt::from(n), BigInt::from(d)))
}

/// Rank of a dense matrix over `F_p` (rows are consumed).
pub fn rank_mod_p(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = inv_mod(rows[rank][col], p).expect("nonzero pivot");
        let pivot_row: Vec<u64> = rows[rank].iter().map(|&v| mul_mod(v, inv, p)).collect();
        for r in 0..rows.len() {
            if r != rank && rows[r][col] != 0 {
                let f = rows[r][col];
                for c in col..ncols {
                    rows[r][c] = sub_mod(rows[r][c], mul_mod(f, pivot_row[c], p), p);
                }
            }
        }
        rows[rank] = pivot_row;
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_is_multiplicative() {
        for field in [Field::Rationals, Field::cyclotomic(5).unwrap(), Field::rational_functions("x").unwrap()]
        {
            let red = Reduction::for_field(&field, 0).unwrap();
            let a = match field.generator() {
                Some(g) => &g + &field.from_ratio(3, 7),
                None => field.from_ratio(3, 7),
            };
            let b = &a * &a + field.from_i64(-2);
            let prod = &a * &b;
            let p = red.prime();
            assert_eq!(red.reduce(&prod), Some(mul_mod(red.reduce(&a).unwrap(), red.reduce(&b).unwrap(), p)));
        }
    }

    #[test]
    fn small_rank() {
        let rows = vec![vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]];
        assert_eq!(rank_mod_p(rows, 101), 2);
    }

    #[test]
    fn reconstruction() {
        let p = BASE_PRIMES[0];
        for (n, d) in [(0i64, 1i64), (1, 1), (-3, 7), (12345, 2)] {
            let q = BigRational::new(BigInt::from(n), BigInt::from(d));
            let r = Reduction::for_field(&Field::Rationals, 0).unwrap();
            assert_eq!(rational_reconstruct(r.reduce_rational(&q).unwrap(), p), Some(q));
        }
    }
}
