//! Exact arithmetic in cyclotomic fields `Q(z_N)`.
//!
//! A [`Cyclotomic`] stores its conductor `N` together with rational
//! coordinates in the power basis `1, z, ..., z^(phi(N)-1)` of
//! `Q[x] / Phi_N(x)`. Values of mixed conductor are promoted to the lcm
//! before combining. Rational values are always stored with conductor 1, so
//! the common case of rational structure constants never pays for the
//! polynomial representation.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NumError {
    #[error("inversion of zero")]
    InversionOfZero,
    #[error("cannot parse scalar `{0}`")]
    Parse(String),
    #[error("conductor must be positive")]
    ZeroConductor,
}

fn phi_cache() -> &'static RwLock<HashMap<u32, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Coefficients (low degree first) of the `n`-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(n: u32) -> Arc<Vec<i64>> {
    assert!(n > 0, "cyclotomic polynomial of conductor 0");
    if let Some(p) = phi_cache().read().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 = prod_{d | n} Phi_d(x)
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            let div = cyclotomic_polynomial(d);
            num = exact_monic_division(&num, &div);
        }
    }
    let p = Arc::new(num);
    phi_cache().write().unwrap().insert(n, p.clone());
    p
}

fn exact_monic_division(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qd = num.len() - 1 - dd;
    let mut quot = vec![0i64; qd + 1];
    for k in (0..=qd).rev() {
        let c = rem[k + dd];
        quot[k] = c;
        if c != 0 {
            for (i, &d) in den.iter().enumerate() {
                rem[k + i] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

/// Euler's totient, computed as the degree of `Phi_n`.
pub fn totient(n: u32) -> usize {
    cyclotomic_polynomial(n).len() - 1
}

pub fn lcm(a: u32, b: u32) -> u32 {
    a.lcm(&b)
}

pub fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n % d == 0).collect()
}

fn small_integral(v: &[Rational]) -> Option<(i128, Vec<i128>)> {
    let mut d: i128 = 1;
    for x in v {
        let q = i128::from(x.denom().to_i64()?);
        d = d.lcm(&q);
        if d > i128::from(i64::MAX) {
            return None;
        }
    }
    let nums = v
        .iter()
        .map(|x| Some(i128::from(x.numer().to_i64()?).checked_mul(d / i128::from(x.denom().to_i64()?))?))
        .collect::<Option<Vec<_>>>()?;
    Some((d, nums))
}

/// Product in machine integers; `None` on overflow.
fn mul_small(n: u32, a: &[Rational], b: &[Rational]) -> Option<Cyclotomic> {
    let (da, a) = small_integral(a)?;
    let (db, b) = small_integral(b)?;
    let mut prod = vec![0i128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            if y != 0 {
                prod[i + j] = prod[i + j].checked_add(x.checked_mul(y)?)?;
            }
        }
    }
    let phi = cyclotomic_polynomial(n);
    let deg = phi.len() - 1;
    for k in (deg..prod.len()).rev() {
        let c = std::mem::take(&mut prod[k]);
        if c == 0 {
            continue;
        }
        for (i, &p) in phi.iter().enumerate().take(deg) {
            if p != 0 {
                prod[k - deg + i] = prod[k - deg + i].checked_sub(c.checked_mul(i128::from(p))?)?;
            }
        }
    }
    prod.truncate(deg);
    let den = da.checked_mul(db)?;
    let coeffs = prod
        .into_iter()
        .map(|x| {
            let g = x.gcd(&den);
            Rational::new_raw(BigInt::from(x / g), BigInt::from(den / g))
        })
        .collect();
    Some(Cyclotomic { conductor: n, coeffs }.normalized())
}

/// Common denominator and the integer numerators over it.
fn integral(v: &[Rational]) -> (BigInt, Vec<BigInt>) {
    let mut d = BigInt::one();
    for x in v {
        if !x.denom().is_one() {
            d = d.lcm(x.denom());
        }
    }
    let nums = v.iter().map(|x| if x.denom() == &d { x.numer().clone() } else { x.numer() * (&d / x.denom()) }).collect();
    (d, nums)
}

/// Reduce a polynomial modulo `Phi_n`, returning exactly `phi(n)` coefficients.
fn reduce_mod_phi(mut poly: Vec<Rational>, n: u32) -> Vec<Rational> {
    let phi = cyclotomic_polynomial(n);
    let deg = phi.len() - 1;
    if poly.len() <= deg {
        poly.resize(deg, Rational::zero());
        return poly;
    }
    for k in (deg..poly.len()).rev() {
        if poly[k].is_zero() {
            continue;
        }
        let c = std::mem::replace(&mut poly[k], Rational::zero());
        let base = k - deg;
        for (i, &p) in phi.iter().enumerate().take(deg) {
            if p != 0 {
                poly[base + i] -= &c * Rational::from_integer(BigInt::from(p));
            }
        }
    }
    poly.truncate(deg);
    poly
}

/// An element of `Q(z_N)`.
#[derive(Clone)]
pub struct Cyclotomic {
    conductor: u32,
    coeffs: Vec<Rational>,
}

impl Cyclotomic {
    pub fn zero() -> Self {
        Cyclotomic { conductor: 1, coeffs: vec![Rational::zero()] }
    }

    pub fn one() -> Self {
        Cyclotomic { conductor: 1, coeffs: vec![Rational::one()] }
    }

    pub fn from_rational(q: Rational) -> Self {
        Cyclotomic { conductor: 1, coeffs: vec![q] }
    }

    pub fn from_int(v: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(v)))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(Rational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// Build from power-basis coordinates. Shorter vectors are padded with
    /// zeros; longer ones are reduced modulo `Phi_N`.
    pub fn from_coeffs(conductor: u32, coeffs: Vec<Rational>) -> Result<Self, NumError> {
        if conductor == 0 {
            return Err(NumError::ZeroConductor);
        }
        let coeffs = reduce_mod_phi(coeffs, conductor);
        Ok(Cyclotomic { conductor, coeffs }.normalized())
    }

    /// The primitive `n`-th root of unity `z_n = exp(2 pi i / n)`.
    pub fn primitive_root(n: u32) -> Self {
        Self::root_of_unity(n, 1)
    }

    /// `z_n^k`, for any integer `k`.
    pub fn root_of_unity(n: u32, k: i64) -> Self {
        assert!(n > 0, "root of unity of order 0");
        let e = k.rem_euclid(n as i64) as usize;
        if e == 0 {
            return Self::one();
        }
        // z_n^e = z_(n/g)^(e/g)
        let g = (e as u32).gcd(&n);
        let (n, e) = (n / g, e / g as usize);
        let mut poly = vec![Rational::zero(); e + 1];
        poly[e] = Rational::one();
        Cyclotomic { conductor: n, coeffs: reduce_mod_phi(poly, n) }.normalized()
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.conductor == 1 && self.coeffs[0].is_one()
    }

    pub fn is_rational(&self) -> bool {
        self.conductor == 1
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        (self.conductor == 1).then(|| &self.coeffs[0])
    }

    fn normalized(mut self) -> Self {
        if self.conductor != 1 && self.coeffs.iter().skip(1).all(Zero::is_zero) {
            let c0 = std::mem::replace(&mut self.coeffs[0], Rational::zero());
            return Cyclotomic { conductor: 1, coeffs: vec![c0] };
        }
        self
    }

    /// Coordinates of `self` in the power basis of `Q(z_big)`; `big` must be
    /// a multiple of the conductor.
    pub fn promoted_coeffs(&self, big: u32) -> Vec<Rational> {
        assert!(big % self.conductor == 0, "conductor {} does not divide {}", self.conductor, big);
        if big == self.conductor {
            return self.coeffs.clone();
        }
        if self.conductor == 1 {
            let mut v = vec![Rational::zero(); totient(big)];
            v[0] = self.coeffs[0].clone();
            return v;
        }
        let step = (big / self.conductor) as usize;
        let mut poly = vec![Rational::zero(); (self.coeffs.len() - 1) * step + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            poly[k * step] = c.clone();
        }
        reduce_mod_phi(poly, big)
    }

    fn aligned<'a>(&'a self, other: &'a Self) -> (u32, std::borrow::Cow<'a, [Rational]>, std::borrow::Cow<'a, [Rational]>) {
        use std::borrow::Cow;
        if self.conductor == other.conductor {
            return (self.conductor, Cow::Borrowed(&self.coeffs), Cow::Borrowed(&other.coeffs));
        }
        let n = lcm(self.conductor, other.conductor);
        let a = if self.conductor == n { Cow::Borrowed(&self.coeffs[..]) } else { Cow::Owned(self.promoted_coeffs(n)) };
        let b = if other.conductor == n { Cow::Borrowed(&other.coeffs[..]) } else { Cow::Owned(other.promoted_coeffs(n)) };
        (n, a, b)
    }

    fn add_ref(&self, other: &Self) -> Self {
        if self.conductor == 1 && other.conductor == 1 {
            return Self::from_rational(&self.coeffs[0] + &other.coeffs[0]);
        }
        if other.conductor == 1 {
            let mut out = self.clone();
            out.coeffs[0] += &other.coeffs[0];
            return out;
        }
        if self.conductor == 1 {
            let mut out = other.clone();
            out.coeffs[0] += &self.coeffs[0];
            return out;
        }
        let (n, a, b) = self.aligned(other);
        let coeffs = a.iter().zip(b.iter()).map(|(x, y)| x + y).collect();
        Cyclotomic { conductor: n, coeffs }.normalized()
    }

    fn mul_ref(&self, other: &Self) -> Self {
        if self.conductor == 1 {
            if self.coeffs[0].is_zero() {
                return Self::zero();
            }
            if self.coeffs[0].is_one() {
                return other.clone();
            }
            let c = &self.coeffs[0];
            return Cyclotomic { conductor: other.conductor, coeffs: other.coeffs.iter().map(|x| x * c).collect() }
                .normalized();
        }
        if other.conductor == 1 {
            return other.mul_ref(self);
        }
        let (n, a, b) = self.aligned(other);
        if let Some(c) = mul_small(n, &a, &b) {
            return c;
        }
        // clear denominators, multiply and reduce over Z, divide once
        let (da, a) = integral(&a);
        let (db, b) = integral(&b);
        let mut prod = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        let phi = cyclotomic_polynomial(n);
        let deg = phi.len() - 1;
        for k in (deg..prod.len()).rev() {
            if prod[k].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut prod[k]);
            for (i, &p) in phi.iter().enumerate().take(deg) {
                if p != 0 {
                    prod[k - deg + i] -= &c * p;
                }
            }
        }
        prod.resize(deg, BigInt::zero());
        let den = da * db;
        let coeffs = prod.into_iter().map(|x| Rational::new(x, den.clone())).collect();
        Cyclotomic { conductor: n, coeffs }.normalized()
    }

    /// Multiplicative inverse, by solving the linear system of the
    /// multiplication-by-`self` operator on the power basis.
    pub fn inv(&self) -> Result<Self, NumError> {
        if self.is_zero() {
            return Err(NumError::InversionOfZero);
        }
        if self.conductor == 1 {
            return Ok(Self::from_rational(self.coeffs[0].recip()));
        }
        let n = self.conductor;
        let d = self.coeffs.len();
        // Column j of the matrix is self * x^j.
        let mut cols: Vec<Vec<Rational>> = Vec::with_capacity(d);
        for j in 0..d {
            let mut poly = vec![Rational::zero(); j + d];
            for (k, c) in self.coeffs.iter().enumerate() {
                poly[j + k] = c.clone();
            }
            cols.push(reduce_mod_phi(poly, n));
        }
        // Augmented rows [M | e_0].
        let mut rows: Vec<Vec<Rational>> = (0..d)
            .map(|i| {
                let mut r: Vec<Rational> = (0..d).map(|j| cols[j][i].clone()).collect();
                r.push(if i == 0 { Rational::one() } else { Rational::zero() });
                r
            })
            .collect();
        for col in 0..d {
            let piv = (col..d).find(|&r| !rows[r][col].is_zero()).ok_or(NumError::InversionOfZero)?;
            rows.swap(col, piv);
            let inv = rows[col][col].recip();
            for x in rows[col].iter_mut() {
                *x *= &inv;
            }
            let pivot_row = rows[col].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != col && !row[col].is_zero() {
                    let f = row[col].clone();
                    for (x, p) in row.iter_mut().zip(pivot_row.iter()) {
                        *x -= &f * p;
                    }
                }
            }
        }
        let coeffs = rows.into_iter().map(|r| r[d].clone()).collect();
        Ok(Cyclotomic { conductor: n, coeffs }.normalized())
    }

    pub fn pow(&self, e: i64) -> Result<Self, NumError> {
        let mut base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(acc)
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, NumError> {
        Ok(self * &other.inv()?)
    }

    /// Complex conjugate (the Galois automorphism `z -> z^-1`).
    pub fn conj(&self) -> Self {
        if self.conductor == 1 {
            return self.clone();
        }
        let n = self.conductor;
        let mut acc = Self::zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc += &(&Self::root_of_unity(n, -(k as i64)) * &Self::from_rational(c.clone()));
            }
        }
        acc
    }

    /// The same value expressed with the smallest possible conductor.
    pub fn demoted(&self) -> Self {
        if self.conductor == 1 {
            return self.clone();
        }
        for d in divisors(self.conductor) {
            if d == 1 || d == self.conductor {
                continue;
            }
            if let Some(c) = self.try_express_in(d) {
                return c;
            }
        }
        self.clone()
    }

    fn try_express_in(&self, d: u32) -> Option<Self> {
        let n = self.conductor;
        let k = totient(d);
        let m = self.coeffs.len();
        // Solve sum_j a_j promote(z_d^j) = self over Q.
        let basis: Vec<Vec<Rational>> = (0..k)
            .map(|j| {
                let mut poly = vec![Rational::zero(); j * (n / d) as usize + 1];
                poly[j * (n / d) as usize] = Rational::one();
                reduce_mod_phi(poly, n)
            })
            .collect();
        let mut rows: Vec<Vec<Rational>> = (0..m)
            .map(|i| {
                let mut r: Vec<Rational> = (0..k).map(|j| basis[j][i].clone()).collect();
                r.push(self.coeffs[i].clone());
                r
            })
            .collect();
        let mut pivot_cols = Vec::new();
        let mut row = 0;
        for col in 0..k {
            let Some(piv) = (row..m).find(|&r| !rows[r][col].is_zero()) else { continue };
            rows.swap(row, piv);
            let inv = rows[row][col].recip();
            for x in rows[row].iter_mut() {
                *x *= &inv;
            }
            let pr = rows[row].clone();
            for (r, rr) in rows.iter_mut().enumerate() {
                if r != row && !rr[col].is_zero() {
                    let f = rr[col].clone();
                    for (x, p) in rr.iter_mut().zip(pr.iter()) {
                        *x -= &f * p;
                    }
                }
            }
            pivot_cols.push(col);
            row += 1;
        }
        if rows[row..].iter().any(|r| !r[k].is_zero()) {
            return None;
        }
        let mut coeffs = vec![Rational::zero(); k];
        for (r, &c) in pivot_cols.iter().enumerate() {
            coeffs[c] = rows[r][k].clone();
        }
        Some(Cyclotomic { conductor: d, coeffs }.normalized())
    }

    /// Serializable `{conductor, coeffs}` form, demoted to the smallest conductor.
    pub fn to_json(&self) -> CyclotomicJson {
        let d = self.demoted();
        CyclotomicJson { conductor: d.conductor, coeffs: d.coeffs.iter().map(|c| c.to_string()).collect() }
    }

    pub fn from_json(j: &CyclotomicJson) -> Result<Self, NumError> {
        let coeffs = j
            .coeffs
            .iter()
            .map(|s| parse_rational(s).ok_or_else(|| NumError::Parse(s.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_coeffs(j.conductor, coeffs)
    }
}

/// JSON shape of a scalar: conductor plus power-basis coordinates as `"p/q"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclotomicJson {
    pub conductor: u32,
    pub coeffs: Vec<String>,
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            return self.coeffs == other.coeffs;
        }
        if self.conductor == 1 || other.conductor == 1 {
            // normalized: a non-rational conductor means a non-rational value
            return false;
        }
        let (_, a, b) = self.aligned(other);
        a == b
    }
}

impl Eq for Cyclotomic {}

impl Default for Cyclotomic {
    fn default() -> Self {
        Self::zero()
    }
}

impl<'a> Add<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &'a Cyclotomic) -> Cyclotomic {
        self.add_ref(rhs)
    }
}

impl Add for Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: Cyclotomic) -> Cyclotomic {
        self.add_ref(&rhs)
    }
}

impl<'a> Sub<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &'a Cyclotomic) -> Cyclotomic {
        self.add_ref(&-rhs)
    }
}

impl Sub for Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: Cyclotomic) -> Cyclotomic {
        self.add_ref(&-rhs)
    }
}

impl<'a> Mul<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &'a Cyclotomic) -> Cyclotomic {
        self.mul_ref(rhs)
    }
}

impl Mul for Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: Cyclotomic) -> Cyclotomic {
        self.mul_ref(&rhs)
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic { conductor: self.conductor, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

impl AddAssign<&Cyclotomic> for Cyclotomic {
    fn add_assign(&mut self, rhs: &Cyclotomic) {
        if self.conductor == rhs.conductor && self.conductor == 1 {
            self.coeffs[0] += &rhs.coeffs[0];
        } else {
            *self = self.add_ref(rhs);
        }
    }
}

impl SubAssign<&Cyclotomic> for Cyclotomic {
    fn sub_assign(&mut self, rhs: &Cyclotomic) {
        if self.conductor == rhs.conductor && self.conductor == 1 {
            self.coeffs[0] -= &rhs.coeffs[0];
        } else {
            *self = self.add_ref(&-rhs);
        }
    }
}

impl From<i64> for Cyclotomic {
    fn from(v: i64) -> Self {
        Cyclotomic::from_int(v)
    }
}

fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).ok()?;
        let q = BigInt::from_str(q.trim()).ok()?;
        if q.is_zero() {
            return None;
        }
        Some(Rational::new(p, q))
    } else {
        Some(Rational::from_integer(BigInt::from_str(s).ok()?))
    }
}

fn fmt_term(out: &mut String, c: &Rational, k: usize, n: u32, first: bool) {
    let neg = c.is_negative();
    let a = c.abs();
    if first {
        if neg {
            out.push('-');
        }
    } else {
        out.push_str(if neg { " - " } else { " + " });
    }
    let root = match k {
        0 => String::new(),
        1 => format!("z{n}"),
        _ => format!("z{n}^{k}"),
    };
    if k == 0 {
        out.push_str(&a.to_string());
    } else if a.is_one() {
        out.push_str(&root);
    } else {
        out.push_str(&format!("{a}*{root}"));
    }
}

/// Text form: a sum of terms `c`, `c*zN`, `c*zN^k`, where `zN` is the
/// primitive `N`-th root of unity, e.g. `-1/2 + 3*z5^2`.
impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.demoted();
        if d.is_zero() {
            return f.write_str("0");
        }
        let mut out = String::new();
        let mut first = true;
        for (k, c) in d.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            fmt_term(&mut out, c, k, d.conductor, first);
            first = false;
        }
        f.write_str(&out)
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclotomic({self})")
    }
}

impl FromStr for Cyclotomic {
    type Err = NumError;

    fn from_str(s: &str) -> Result<Self, NumError> {
        let err = || NumError::Parse(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err());
        }
        // Split into signed terms.
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut neg = false;
        for (i, ch) in compact.chars().enumerate() {
            if (ch == '+' || ch == '-') && !(cur.is_empty() && i == 0) && !cur.ends_with('^') {
                if cur.is_empty() {
                    return Err(err());
                }
                terms.push((neg, std::mem::take(&mut cur)));
                neg = ch == '-';
            } else if (ch == '+' || ch == '-') && i == 0 {
                neg = ch == '-';
            } else {
                cur.push(ch);
            }
        }
        if cur.is_empty() {
            return Err(err());
        }
        terms.push((neg, cur));
        let mut acc = Cyclotomic::zero();
        for (neg, t) in terms {
            let (coef, root) = match t.find('z') {
                None => (t.as_str(), None),
                Some(pos) => {
                    let (c, r) = t.split_at(pos);
                    let c = c.strip_suffix('*').unwrap_or(c);
                    (c, Some(&r[1..]))
                }
            };
            let q = if coef.is_empty() { Rational::one() } else { parse_rational(coef).ok_or_else(err)? };
            let mut v = Cyclotomic::from_rational(q);
            if let Some(r) = root {
                let (n, k) = match r.split_once('^') {
                    Some((n, k)) => (n, k.parse::<i64>().map_err(|_| err())?),
                    None => (r, 1),
                };
                let n: u32 = n.parse().map_err(|_| err())?;
                if n == 0 {
                    return Err(err());
                }
                v = &v * &Cyclotomic::root_of_unity(n, k);
            }
            if neg {
                v = -v;
            }
            acc += &v;
        }
        Ok(acc)
    }
}

impl Serialize for Cyclotomic {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Cyclotomic {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
