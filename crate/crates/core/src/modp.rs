//! Reduction of cyclotomic data modulo a prime `p = 1 mod N`, used as a
//! fast lower bound for ranks and generated dimensions.
//!
//! Reduction is a ring map from the `p`-integral part of `Q(z_N)` onto
//! `F_p`, so any rank computed here is at most the exact rank.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::exactnum::Cyclotomic;

#[derive(Debug, Clone)]
pub struct ModP {
    pub p: u64,
    pub conductor: u32,
    /// `omega^k` for `k < conductor`, `omega` a primitive `conductor`-th root.
    powers: Vec<u64>,
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl ModP {
    /// The `skip`-th prime below `2^31` that is `1 mod conductor`, counting
    /// downwards.
    pub fn new(conductor: u32, skip: usize) -> Self {
        let n = u64::from(conductor.max(1));
        let mut p = ((1u64 << 31) - 1) / n * n + 1;
        let mut seen = 0;
        loop {
            if p < (1 << 31) && is_prime(p) {
                if seen == skip {
                    break;
                }
                seen += 1;
            }
            p -= n;
        }
        let fs = prime_factors(p - 1);
        let g = (2..p).find(|&g| fs.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1)).expect("primitive root");
        let omega = pow_mod(g, (p - 1) / n, p);
        let mut powers = Vec::with_capacity(n as usize);
        let mut acc = 1;
        for _ in 0..n {
            powers.push(acc);
            acc = acc * omega % p;
        }
        ModP { p, conductor: n as u32, powers }
    }

    fn int(&self, x: &BigInt) -> u64 {
        let r = x.mod_floor(&BigInt::from(self.p));
        r.to_u64().expect("reduced")
    }

    pub fn inv(&self, x: u64) -> Option<u64> {
        (x % self.p != 0).then(|| pow_mod(x, self.p - 2, self.p))
    }

    /// Image of `c`; `None` when a denominator vanishes mod `p`.
    pub fn reduce(&self, c: &Cyclotomic) -> Option<u64> {
        let n = c.conductor();
        if self.conductor % n != 0 {
            return None;
        }
        let step = (self.conductor / n) as usize;
        let mut acc = 0u64;
        for (k, q) in c.coeffs().iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            let num = self.int(q.numer());
            let den = self.inv(self.int(q.denom()))?;
            let term = num * den % self.p * self.powers[k * step % self.powers.len()] % self.p;
            acc = (acc + term) % self.p;
        }
        Some(acc)
    }

    pub fn one(&self) -> u64 {
        u64::one() % self.p
    }
}

/// Incremental row echelon form over `F_p` for dense vectors.
#[derive(Debug, Clone)]
pub struct EchelonModP {
    p: u64,
    /// Rows normalized to leading coefficient 1, with their pivot columns.
    rows: Vec<(usize, Vec<u64>)>,
}

impl EchelonModP {
    pub fn new(p: u64) -> Self {
        EchelonModP { p, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `v` and keep it if independent.
    pub fn insert(&mut self, mut v: Vec<u64>) -> bool {
        let p = self.p;
        for (piv, row) in &self.rows {
            let c = v[*piv];
            if c != 0 {
                let m = p - c;
                for (x, r) in v.iter_mut().zip(row) {
                    if *r != 0 {
                        *x = (*x + m * r) % p;
                    }
                }
            }
        }
        let Some(piv) = v.iter().position(|&x| x != 0) else { return false };
        let inv = pow_mod(v[piv], p - 2, p);
        for x in v.iter_mut() {
            *x = *x * inv % p;
        }
        self.rows.push((piv, v));
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_map_to_roots() {
        let m = ModP::new(12, 0);
        assert_eq!((m.p - 1) % 12, 0);
        let z = m.reduce(&Cyclotomic::root_of_unity(12, 1)).unwrap();
        assert_eq!(pow_mod(z, 12, m.p), 1);
        assert_ne!(pow_mod(z, 6, m.p), 1);
        assert_ne!(pow_mod(z, 4, m.p), 1);
        // z_4 = z_12^3 under either representation
        assert_eq!(m.reduce(&Cyclotomic::root_of_unity(4, 1)), Some(pow_mod(z, 3, m.p)));
        let half = Cyclotomic::from_rational(num_rational::BigRational::new(1.into(), 2.into()));
        assert_eq!(m.reduce(&half).unwrap() * 2 % m.p, 1);
    }

    #[test]
    fn echelon_rank() {
        let mut e = EchelonModP::new(7);
        assert!(e.insert(vec![1, 2, 3]));
        assert!(!e.insert(vec![2, 4, 6]));
        assert!(e.insert(vec![0, 1, 0]));
        assert!(!e.insert(vec![1, 3, 3]));
        assert_eq!(e.rank(), 2);
    }
}
