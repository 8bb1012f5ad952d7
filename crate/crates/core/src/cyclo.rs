//! Exact arithmetic in the cyclotomic fields `Q(ζ_N)`.
//!
//! An element is stored over the power basis `1, ζ, …, ζ^{φ(N)-1}` modulo the
//! cyclotomic polynomial `Φ_N`, with a single positive denominator. Because the
//! power basis is an integral basis of `Z[ζ_N]`, an element is an algebraic
//! integer exactly when its reduced denominator is 1.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Per-level tables: `Φ_N`, the reduced powers `ζ^e` for `0 ≤ e < N`, and the
/// residues coprime to `N` (the Galois group).
#[derive(Debug)]
pub struct Level {
    n: u64,
    phi: usize,
    modulus: Vec<i64>,
    powers: Vec<Vec<i64>>,
    units: Vec<u64>,
}

impl Level {
    pub fn order(&self) -> u64 {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.phi
    }

    /// Coefficients of `Φ_N`, lowest degree first.
    pub fn cyclotomic_polynomial(&self) -> &[i64] {
        &self.modulus
    }

    pub fn galois_residues(&self) -> &[u64] {
        &self.units
    }
}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    // den is monic
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    let qlen = rem.len() - dn;
    let mut quot = vec![0i64; qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dn];
        quot[i] = c;
        if c != 0 {
            for (j, d) in den.iter().enumerate() {
                rem[i + j] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    quot
}

fn cyclotomic_poly(n: u64, memo: &mut HashMap<u64, Vec<i64>>) -> Vec<i64> {
    if let Some(p) = memo.get(&n) {
        return p.clone();
    }
    let mut p = vec![0i64; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            let q = cyclotomic_poly(d, memo);
            p = poly_div_exact(&p, &q);
        }
    }
    memo.insert(n, p.clone());
    p
}

impl Level {
    fn build(n: u64) -> Level {
        let mut memo = HashMap::new();
        let modulus = cyclotomic_poly(n, &mut memo);
        let phi = modulus.len() - 1;
        let mut powers = Vec::with_capacity(n as usize);
        let mut cur = vec![0i64; phi];
        cur[0] = 1;
        for _ in 0..n {
            powers.push(cur.clone());
            // multiply by x and reduce
            let top = cur[phi - 1];
            let mut next = vec![0i64; phi];
            next[1..phi].copy_from_slice(&cur[..phi - 1]);
            if top != 0 {
                for (j, m) in modulus.iter().take(phi).enumerate() {
                    next[j] -= top * m;
                }
            }
            cur = next;
        }
        let units = (1..=n).filter(|&u| u.gcd(&n) == 1).map(|u| u % n).collect();
        Level {
            n,
            phi,
            modulus,
            powers,
            units,
        }
    }
}

static LEVELS: OnceLock<Mutex<HashMap<u64, Arc<Level>>>> = OnceLock::new();

/// Shared tables for level `n`, built on first use.
pub fn level(n: u64) -> Result<Arc<Level>> {
    if n == 0 || n > 10_000 {
        return Err(Error::InvalidLevel(n));
    }
    let cache = LEVELS.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("level cache poisoned");
    Ok(guard
        .entry(n)
        .or_insert_with(|| Arc::new(Level::build(n)))
        .clone())
}

fn lvl(n: u64) -> Arc<Level> {
    level(n).unwrap_or_else(|e| panic!("{e}"))
}

/// An element of `Q(ζ_N)` in canonical reduced form.
#[derive(Clone)]
pub struct CycloElt {
    level: Arc<Level>,
    num: Vec<BigInt>,
    den: BigInt,
}

impl PartialEq for CycloElt {
    fn eq(&self, other: &Self) -> bool {
        self.level.n == other.level.n && self.den == other.den && self.num == other.num
    }
}

impl Eq for CycloElt {}

impl std::hash::Hash for CycloElt {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.level.n.hash(state);
        self.num.hash(state);
        self.den.hash(state);
    }
}

fn modexp(k: i64, n: u64) -> usize {
    k.rem_euclid(n as i64) as usize
}

impl CycloElt {
    fn normalized(level: Arc<Level>, mut num: Vec<BigInt>, mut den: BigInt) -> CycloElt {
        debug_assert_eq!(num.len(), level.phi);
        assert!(!den.is_zero(), "zero denominator");
        if den.is_negative() {
            den = -den;
            for c in num.iter_mut() {
                *c = -std::mem::take(c);
            }
        }
        let mut g = den.clone();
        for c in &num {
            if g.is_one() {
                break;
            }
            if !c.is_zero() {
                g = g.gcd(c);
            }
        }
        if num.iter().all(|c| c.is_zero()) {
            return CycloElt {
                level,
                num,
                den: BigInt::one(),
            };
        }
        if !g.is_one() {
            for c in num.iter_mut() {
                *c /= &g;
            }
            den /= &g;
        }
        CycloElt { level, num, den }
    }

    /// Fold an arbitrary exponent-indexed coefficient list (exponents taken mod N)
    /// into canonical form.
    fn from_exponents(level: Arc<Level>, terms: &[(usize, BigInt)], den: BigInt) -> CycloElt {
        let mut num = vec![BigInt::zero(); level.phi];
        for (e, c) in terms {
            if c.is_zero() {
                continue;
            }
            let e = e % level.n as usize;
            if e < level.phi {
                num[e] += c;
            } else {
                for (j, &p) in level.powers[e].iter().enumerate() {
                    if p != 0 {
                        num[j] += c * p;
                    }
                }
            }
        }
        CycloElt::normalized(level, num, den)
    }

    /// Build from raw parts, reducing to canonical form.
    pub fn from_parts(n: u64, num: Vec<BigInt>, den: BigInt) -> Result<CycloElt> {
        let level = level(n)?;
        if den.is_zero() {
            return Err(Error::Malformed("zero denominator".into()));
        }
        if num.len() != level.phi {
            return Err(Error::Malformed(format!(
                "expected {} coefficients at level {n}, got {}",
                level.phi,
                num.len()
            )));
        }
        Ok(CycloElt::normalized(level, num, den))
    }

    pub fn from_i64s(n: u64, num: &[i64], den: i64) -> Result<CycloElt> {
        CycloElt::from_parts(
            n,
            num.iter().map(|&c| BigInt::from(c)).collect(),
            BigInt::from(den),
        )
    }

    pub fn zero(n: u64) -> CycloElt {
        let level = lvl(n);
        let num = vec![BigInt::zero(); level.phi];
        CycloElt {
            level,
            num,
            den: BigInt::one(),
        }
    }

    pub fn one(n: u64) -> CycloElt {
        CycloElt::from_int(n, 1)
    }

    pub fn from_int(n: u64, a: i64) -> CycloElt {
        CycloElt::from_ratio(n, a, 1)
    }

    pub fn from_ratio(n: u64, a: i64, b: i64) -> CycloElt {
        CycloElt::from_bigratio(n, BigInt::from(a), BigInt::from(b))
    }

    pub fn from_bigratio(n: u64, a: BigInt, b: BigInt) -> CycloElt {
        let level = lvl(n);
        let mut num = vec![BigInt::zero(); level.phi];
        num[0] = a;
        CycloElt::normalized(level, num, b)
    }

    /// `ζ_N^k`.
    pub fn root(n: u64, k: i64) -> CycloElt {
        let level = lvl(n);
        let e = modexp(k, n);
        CycloElt::from_exponents(level, &[(e, BigInt::one())], BigInt::one())
    }

    /// `√2 = ζ_8 + ζ_8^{-1}` at any level divisible by 8.
    pub fn sqrt2(n: u64) -> CycloElt {
        assert!(n.is_multiple_of(8), "sqrt(2) needs a level divisible by 8");
        let s = (n / 8) as i64;
        &CycloElt::root(n, s) + &CycloElt::root(n, -s)
    }

    pub fn level(&self) -> u64 {
        self.level.n
    }

    pub fn level_data(&self) -> &Arc<Level> {
        &self.level
    }

    pub fn numerator(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(|c| c.is_zero())
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    /// The rational value if this element lies in `Q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.num[1..].iter().all(|c| c.is_zero()) {
            Some(BigRational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    fn terms(&self) -> impl Iterator<Item = (usize, &BigInt)> {
        self.num.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    /// Image under `ζ_m ↦ s·ζ_N^e` (a ring map whenever `s·ζ_N^e` has order dividing `m`).
    fn substitute(&self, target: &Arc<Level>, e: u64, negate_odd: bool) -> CycloElt {
        let n = target.n as usize;
        let terms: Vec<(usize, BigInt)> = self
            .terms()
            .map(|(k, c)| {
                let c = if negate_odd && k % 2 == 1 {
                    -c.clone()
                } else {
                    c.clone()
                };
                ((k * e as usize) % n, c)
            })
            .collect();
        CycloElt::from_exponents(target.clone(), &terms, self.den.clone())
    }

    /// The Galois automorphism `ζ ↦ ζ^u` (`u` coprime to `N`).
    pub fn galois(&self, u: i64) -> CycloElt {
        let n = self.level.n;
        let u = modexp(u, n) as u64;
        assert!(
            u.gcd(&n) == 1 || n <= 2,
            "galois exponent {u} not coprime to {n}"
        );
        self.substitute(&self.level.clone(), u, false)
    }

    /// Complex conjugation `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> CycloElt {
        self.galois(-1)
    }

    /// Embed into `Q(ζ_N)` via `ζ_m ↦ ζ_N^{N/m}`.
    pub fn embed(&self, n: u64) -> Result<CycloElt> {
        let m = self.level.n;
        if !n.is_multiple_of(m) {
            return Err(Error::LevelMismatch { left: m, right: n });
        }
        if n == m {
            return Ok(self.clone());
        }
        let target = level(n)?;
        Ok(self.substitute(&target, n / m, false))
    }

    fn common_level(&self, other: &CycloElt) -> Result<(CycloElt, CycloElt)> {
        let (a, b) = (self.level.n, other.level.n);
        if a == b {
            Ok((self.clone(), other.clone()))
        } else if b % a == 0 {
            Ok((self.embed(b)?, other.clone()))
        } else if a % b == 0 {
            Ok((self.clone(), other.embed(a)?))
        } else {
            Err(Error::LevelMismatch { left: a, right: b })
        }
    }

    fn add_same(&self, other: &CycloElt) -> CycloElt {
        let num = if self.den == other.den {
            self.num
                .iter()
                .zip(&other.num)
                .map(|(a, b)| a + b)
                .collect()
        } else {
            self.num
                .iter()
                .zip(&other.num)
                .map(|(a, b)| a * &other.den + b * &self.den)
                .collect()
        };
        let den = if self.den == other.den {
            self.den.clone()
        } else {
            &self.den * &other.den
        };
        CycloElt::normalized(self.level.clone(), num, den)
    }

    fn mul_same(&self, other: &CycloElt) -> CycloElt {
        let phi = self.level.phi;
        let mut conv = vec![BigInt::zero(); 2 * phi - 1];
        for (i, a) in self.terms() {
            for (j, b) in other.terms() {
                conv[i + j] += a * b;
            }
        }
        let mut num: Vec<BigInt> = conv.drain(..phi).collect();
        for (k, c) in conv.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (j, &p) in self.level.powers[(phi + k) % self.level.n as usize]
                .iter()
                .enumerate()
            {
                if p != 0 {
                    num[j] += &c * p;
                }
            }
        }
        CycloElt::normalized(self.level.clone(), num, &self.den * &other.den)
    }

    pub fn checked_add(&self, other: &CycloElt) -> Result<CycloElt> {
        let (a, b) = self.common_level(other)?;
        Ok(a.add_same(&b))
    }

    pub fn checked_sub(&self, other: &CycloElt) -> Result<CycloElt> {
        let (a, b) = self.common_level(other)?;
        Ok(a.add_same(&-&b))
    }

    pub fn checked_mul(&self, other: &CycloElt) -> Result<CycloElt> {
        let (a, b) = self.common_level(other)?;
        Ok(a.mul_same(&b))
    }

    pub fn checked_div(&self, other: &CycloElt) -> Result<CycloElt> {
        let (a, b) = self.common_level(other)?;
        Ok(a.mul_same(&b.inv()?))
    }

    pub fn scale(&self, k: i64) -> CycloElt {
        let num = self.num.iter().map(|c| c * k).collect();
        CycloElt::normalized(self.level.clone(), num, self.den.clone())
    }

    pub fn scale_ratio(&self, a: i64, b: i64) -> CycloElt {
        let num = self.num.iter().map(|c| c * a).collect();
        CycloElt::normalized(self.level.clone(), num, &self.den * b)
    }

    /// `Π_{u ≠ 1} σ_u(num)` together with `N(num)` (an integer).
    fn cofactor_and_norm(&self) -> (CycloElt, BigInt) {
        let int_part = CycloElt {
            level: self.level.clone(),
            num: self.num.clone(),
            den: BigInt::one(),
        };
        let mut cof = CycloElt::one(self.level.n);
        for &u in self.level.units.iter().filter(|&&u| u != 1) {
            cof = cof.mul_same(&int_part.substitute(&self.level.clone(), u, false));
        }
        let full = cof.mul_same(&int_part);
        let norm = full
            .as_rational()
            .expect("product of all conjugates is rational")
            .to_integer();
        (cof, norm)
    }

    /// Field norm `N_{Q(ζ_N)/Q}`.
    pub fn norm(&self) -> BigRational {
        if self.is_zero() {
            return BigRational::zero();
        }
        let (_, n) = self.cofactor_and_norm();
        BigRational::new(n, num_traits::pow(self.den.clone(), self.level.phi))
    }

    pub fn inv(&self) -> Result<CycloElt> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            let q = q.recip();
            return Ok(CycloElt::from_bigratio(
                self.level.n,
                q.numer().clone(),
                q.denom().clone(),
            ));
        }
        let (cof, n) = self.cofactor_and_norm();
        let num = cof.num.iter().map(|c| c * &self.den).collect();
        Ok(CycloElt::normalized(self.level.clone(), num, n * cof.den))
    }

    pub fn pow(&self, k: i64) -> CycloElt {
        if k < 0 {
            return self.inv().expect("negative power of zero").pow(-k);
        }
        let mut base = self.clone();
        let mut acc = CycloElt::one(self.level.n);
        let mut e = k as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_same(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_same(&base);
            }
        }
        acc
    }

    /// Integral with field norm ±1.
    pub fn is_unit(&self) -> bool {
        if !self.is_integral() || self.is_zero() {
            return false;
        }
        let n = self.norm();
        n.abs().is_one()
    }

    /// `a ∼ b`: `a/b` is a unit of `Z[ζ_N]`. Both zero counts as associate; exactly
    /// one zero does not.
    pub fn is_associate(&self, other: &CycloElt) -> bool {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return true,
            (true, false) | (false, true) => return false,
            _ => {}
        }
        match self.checked_div(other) {
            Ok(q) => q.is_unit(),
            Err(_) => false,
        }
    }

    /// If this element is `±ζ_N^e`, returns `(e, negated)`.
    pub fn as_root_of_unity(&self) -> Option<(u64, bool)> {
        if !self.is_integral() || self.is_zero() {
            return None;
        }
        let z = self.to_complex();
        if (z.norm() - 1.0).abs() > 1e-6 {
            return None;
        }
        let n = self.level.n;
        let big = 2 * n as i64;
        let k = (z.arg() * big as f64 / (2.0 * std::f64::consts::PI)).round() as i64;
        let k = k.rem_euclid(big);
        // ζ_{2N}^k is ζ_N^{k/2} for even k, and -ζ_N^{(k-N)/2} for odd k when N is odd
        let cand = if k % 2 == 0 {
            Some(((k / 2) as u64, false))
        } else if n % 2 == 1 {
            Some((((k - n as i64).rem_euclid(big) / 2) as u64 % n, true))
        } else {
            None
        };
        let (e, neg) = cand?;
        let r = CycloElt::root(n, e as i64);
        let r = if neg { -r } else { r };
        (r == *self).then_some((e, neg))
    }

    /// Multiplicative order if this is a root of unity.
    pub fn root_order(&self) -> Option<u64> {
        let (e, neg) = self.as_root_of_unity()?;
        let n = self.level.n;
        // ±ζ_N^e as a power of ζ_{2N}
        let big = 2 * n;
        let ex = (2 * e + if neg { n } else { 0 }) % big;
        Some(big / big.gcd(&ex))
    }

    /// Image under the canonical embedding `ζ_N ↦ e^{2πi/N}`, using compensated
    /// (Neumaier) summation of the real and imaginary parts.
    pub fn to_complex(&self) -> Complex64 {
        self.to_complex_at(1)
    }

    /// Image under `ζ_N ↦ e^{2πi u/N}`.
    pub fn to_complex_at(&self, u: i64) -> Complex64 {
        let n = self.level.n as f64;
        let mut re = Neumaier::default();
        let mut im = Neumaier::default();
        for (k, c) in self.terms() {
            let c = c.to_f64().unwrap_or(f64::NAN);
            let ang = 2.0
                * std::f64::consts::PI
                * ((k as i64 * u).rem_euclid(self.level.n as i64) as f64)
                / n;
            re.add(c * ang.cos());
            im.add(c * ang.sin());
        }
        let d = self.den.to_f64().unwrap_or(f64::NAN);
        Complex64::new(re.total() / d, im.total() / d)
    }
}

#[derive(Default)]
struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

/// `ζ_N^k` in canonical form.
pub fn make_root(n: u64, k: i64) -> CycloElt {
    CycloElt::root(n, k)
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&CycloElt> for &CycloElt {
            type Output = CycloElt;
            fn $method(self, rhs: &CycloElt) -> CycloElt {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<CycloElt> for CycloElt {
            type Output = CycloElt;
            fn $method(self, rhs: CycloElt) -> CycloElt {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&CycloElt> for CycloElt {
            type Output = CycloElt;
            fn $method(self, rhs: &CycloElt) -> CycloElt {
                (&self).$method(rhs)
            }
        }
        impl $tr<CycloElt> for &CycloElt {
            type Output = CycloElt;
            fn $method(self, rhs: CycloElt) -> CycloElt {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);
forward_binop!(Div, div, checked_div);

impl Neg for &CycloElt {
    type Output = CycloElt;
    fn neg(self) -> CycloElt {
        CycloElt {
            level: self.level.clone(),
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl Neg for CycloElt {
    type Output = CycloElt;
    fn neg(self) -> CycloElt {
        -&self
    }
}

impl fmt::Debug for CycloElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CycloElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (k, c) in self.terms() {
            parts.push(match k {
                0 => format!("{c}"),
                1 => format!("{c}*z"),
                _ => format!("{c}*z^{k}"),
            });
        }
        let body = if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        };
        if self.den.is_one() {
            write!(f, "[{body}]_{}", self.level.n)
        } else {
            write!(f, "[({body})/{}]_{}", self.den, self.level.n)
        }
    }
}

/// JSON integer: a plain number when it fits in `i64`, a decimal string otherwise.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum JsonInt {
    Small(i64),
    Big(String),
}

impl From<&BigInt> for JsonInt {
    fn from(b: &BigInt) -> Self {
        match b.to_i64() {
            Some(v) => JsonInt::Small(v),
            None => JsonInt::Big(b.to_string()),
        }
    }
}

impl JsonInt {
    fn to_bigint(&self) -> std::result::Result<BigInt, String> {
        match self {
            JsonInt::Small(v) => Ok(BigInt::from(*v)),
            JsonInt::Big(s) => s.parse().map_err(|_| format!("bad integer {s:?}")),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CycloJson {
    level: u64,
    num: Vec<JsonInt>,
    den: JsonInt,
}

impl Serialize for CycloElt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CycloJson {
            level: self.level.n,
            num: self.num.iter().map(JsonInt::from).collect(),
            den: JsonInt::from(&self.den),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycloElt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = CycloJson::deserialize(d)?;
        let num = raw
            .num
            .iter()
            .map(JsonInt::to_bigint)
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(D::Error::custom)?;
        let den = raw.den.to_bigint().map_err(D::Error::custom)?;
        if !den.is_positive() {
            return Err(D::Error::custom("denominator must be positive"));
        }
        CycloElt::from_parts(raw.level, num, den).map_err(D::Error::custom)
    }
}

/// A ring homomorphism `Q(ζ_m) → Q(ζ_N)` fixed by the image of `ζ_m`, which must be
/// a primitive `m`-th root of unity of the target field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisMap {
    source: u64,
    image: CycloElt,
    exponent: u64,
    negated: bool,
}

impl GaloisMap {
    pub fn new(source: u64, image: CycloElt) -> Result<GaloisMap> {
        level(source)?;
        let (exponent, negated) = image
            .as_root_of_unity()
            .ok_or_else(|| Error::NotRootOfUnity(image.to_string()))?;
        let order = image.root_order().unwrap_or(0);
        // order of a generator must match level (ζ_1 = 1, ζ_2 = -1 and for odd m the
        // field Q(ζ_m) = Q(ζ_{2m}) also admits images of order 2m)
        let ok = order == source || (source % 2 == 1 && order == 2 * source);
        if !ok {
            return Err(Error::NotRootOfUnity(format!(
                "{image} has order {order}, expected {source}"
            )));
        }
        Ok(GaloisMap {
            source,
            image,
            exponent,
            negated,
        })
    }

    /// `i_r : Q(ζ_8) → Q(ζ_{8r})`, `ζ_8 ↦ ζ_{8r}^{r²}`.
    pub fn i_r(r: u64) -> GaloisMap {
        let n = 8 * r;
        GaloisMap::new(8, CycloElt::root(n, (r * r) as i64)).expect("i_r well defined")
    }

    /// `j_r : Q(ζ_{4r}) → Q(ζ_{8r})`, `ζ_{4r} ↦ ζ_{8r}^{1+r²}`.
    pub fn j_r(r: u64) -> GaloisMap {
        let n = 8 * r;
        GaloisMap::new(4 * r, CycloElt::root(n, (1 + r * r) as i64)).expect("j_r well defined")
    }

    pub fn source_level(&self) -> u64 {
        self.source
    }

    pub fn target_level(&self) -> u64 {
        self.image.level()
    }

    pub fn image_of_generator(&self) -> &CycloElt {
        &self.image
    }

    pub fn apply(&self, x: &CycloElt) -> Result<CycloElt> {
        let x = if x.level() == self.source {
            x.clone()
        } else if self.source.is_multiple_of(x.level()) {
            x.embed(self.source)?
        } else {
            return Err(Error::LevelMismatch {
                left: x.level(),
                right: self.source,
            });
        };
        Ok(x.substitute(self.image.level_data(), self.exponent, self.negated))
    }

    /// Angle of the image of `ζ_m` as a fraction `a/b` of a full turn.
    pub fn generator_angle_fraction(&self) -> (i64, u64) {
        let n = self.image.level();
        if self.negated {
            ((2 * self.exponent + n) as i64, 2 * n)
        } else {
            (self.exponent as i64, n)
        }
    }
}

/// `i_r`'s action on an element of `Q(ζ_8)`.
pub fn apply_galois(g: &GaloisMap, x: &CycloElt) -> Result<CycloElt> {
    g.apply(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: u64, k: i64) -> CycloElt {
        CycloElt::root(n, k)
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(level(1).unwrap().cyclotomic_polynomial(), &[-1, 1]);
        assert_eq!(level(4).unwrap().cyclotomic_polynomial(), &[1, 0, 1]);
        assert_eq!(
            level(12).unwrap().cyclotomic_polynomial(),
            &[1, 0, -1, 0, 1]
        );
        assert_eq!(level(9).unwrap().degree(), 6);
        assert_eq!(level(104).unwrap().degree(), 48);
    }

    #[test]
    fn roots_and_relations() {
        assert!(r(8, 0).is_one());
        assert_eq!(r(4, 1).pow(2), CycloElt::from_int(4, -1));
        let s = &r(8, 1) + &r(8, -1);
        assert_eq!(&s * &s, CycloElt::from_int(8, 2));
        assert_eq!(s.conj(), s);
        assert_eq!(s, CycloElt::sqrt2(8));
        let a = &CycloElt::one(4) + &r(4, 1);
        let b = &CycloElt::one(4) - &r(4, 1);
        assert_eq!(&a * &b, CycloElt::from_int(4, 2));
    }

    #[test]
    fn embedding() {
        assert_eq!(r(4, 1).embed(8).unwrap(), r(8, 2));
        assert_eq!(
            CycloElt::from_ratio(1, 2, 3).embed(24).unwrap(),
            CycloElt::from_ratio(24, 2, 3)
        );
        assert!(r(4, 1).embed(6).is_err());
        let x = &r(12, 5) + &CycloElt::from_ratio(12, 3, 7);
        let y = x.embed(36).unwrap();
        assert!((x.to_complex() - y.to_complex()).norm() < 1e-12);
    }

    #[test]
    fn norms() {
        assert_eq!(
            CycloElt::from_int(8, 2).norm(),
            BigRational::from_integer(16.into())
        );
        let u = &CycloElt::one(12) - &r(12, 1);
        assert!(u.norm().abs().is_one());
        let v = &CycloElt::one(9) - &r(9, 1);
        assert_eq!(v.norm(), BigRational::from_integer(3.into()));
        // floating oracle: product over conjugates
        let mut prod = Complex64::new(1.0, 0.0);
        for &u in level(9).unwrap().galois_residues() {
            prod *= v.to_complex_at(u as i64);
        }
        assert!((prod - Complex64::new(3.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn units_and_associates() {
        assert!((&CycloElt::one(12) - &r(12, 1)).is_unit());
        assert!(!(&CycloElt::one(9) - &r(9, 1)).is_unit());
        assert!(!(&CycloElt::one(8) - &r(8, 1)).is_unit());
        let x = &CycloElt::from_int(24, 3) + &r(24, 5);
        for k in 0..24 {
            assert!(x.is_associate(&(&x * &r(24, k))));
        }
        assert!(CycloElt::zero(8).is_associate(&CycloElt::zero(8)));
        assert!(!CycloElt::zero(8).is_associate(&CycloElt::one(8)));
        assert!(!CycloElt::one(8).is_associate(&CycloElt::zero(8)));
        let one_plus_i = &CycloElt::one(8) + &r(8, 2);
        assert!(one_plus_i.is_associate(&CycloElt::sqrt2(8)));
    }

    #[test]
    fn inverse_and_division() {
        let x = &CycloElt::from_int(20, 2) + &r(20, 3);
        let y = x.inv().unwrap();
        assert!((&x * &y).is_one());
        assert_eq!(CycloElt::zero(5).inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn galois_maps() {
        let i3 = GaloisMap::i_r(3);
        assert_eq!(i3.apply(&r(8, 1)).unwrap(), r(24, 9));
        let j3 = GaloisMap::j_r(3);
        // A_3 = ζ_6 = ζ_12^2, A_6 = ζ_12 = ζ_24^2
        let a3 = r(12, 2);
        let image = j3.apply(&a3).unwrap();
        assert_eq!(image, r(24, 20));
        assert_eq!(image, r(12, 10).embed(24).unwrap());
        assert_eq!(image.root_order(), Some(6));
        let a3sq = a3.pow(2);
        assert_eq!(j3.apply(&a3sq).unwrap(), -&r(24, 4));
        for rr in [3u64, 5, 7, 11] {
            assert_eq!(
                GaloisMap::i_r(rr).image_of_generator().root_order(),
                Some(8)
            );
            assert_eq!(
                GaloisMap::j_r(rr).image_of_generator().root_order(),
                Some(4 * rr)
            );
        }
        assert!(GaloisMap::new(8, r(24, 2)).is_err());
        assert!(GaloisMap::new(8, CycloElt::from_int(24, 2)).is_err());
    }

    #[test]
    fn root_orders() {
        assert_eq!(CycloElt::one(1).root_order(), Some(1));
        assert_eq!(CycloElt::from_int(1, -1).root_order(), Some(2));
        assert_eq!(r(8, 2).root_order(), Some(4));
        assert_eq!((-&r(3, 1)).root_order(), Some(6));
        assert_eq!(CycloElt::from_int(8, 2).root_order(), None);
    }

    #[test]
    fn json_round_trip() {
        let x = (&CycloElt::from_ratio(24, 5, 6) + &r(24, 7)).pow(9);
        let s = serde_json::to_string(&x).unwrap();
        let y: CycloElt = serde_json::from_str(&s).unwrap();
        assert_eq!(x, y);
        assert_eq!(serde_json::to_string(&y).unwrap(), s);
        let bad = r#"{"level":8,"num":[1,2],"den":1}"#;
        assert!(serde_json::from_str::<CycloElt>(bad).is_err());
    }
}
