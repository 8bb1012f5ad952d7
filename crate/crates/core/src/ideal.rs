//! Integral ideals of `Z[ζ_N]` as sublattices of the power basis.
//!
//! The basis is kept in canonical row Hermite normal form: upper triangular,
//! positive pivots on the diagonal, and entries above each pivot reduced into
//! `[0, pivot)`. Two ideals are equal exactly when their matrices agree.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cyclo::{CycloElt, GaloisMap};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntegralIdeal {
    level: u64,
    degree: usize,
    /// `None` for the zero ideal.
    hnf: Option<Vec<Vec<BigInt>>>,
}

fn lattice_vector(x: &CycloElt) -> Result<Vec<BigInt>> {
    if !x.is_integral() {
        return Err(Error::NotIntegral);
    }
    Ok(x.numerator().to_vec())
}

struct Hnf {
    rows: Vec<Vec<BigInt>>,
    det: BigInt,
}

impl Hnf {
    /// Starts from `m·Z^n`, which must lie inside the lattice being built.
    fn scaled_identity(n: usize, m: &BigInt) -> Hnf {
        let rows = (0..n)
            .map(|i| {
                let mut r = vec![BigInt::zero(); n];
                r[i] = m.clone();
                r
            })
            .collect();
        Hnf {
            rows,
            det: m.pow(n as u32),
        }
    }

    fn insert(&mut self, v: &[BigInt]) {
        let n = self.rows.len();
        let mut v: Vec<BigInt> = v.iter().map(|x| x.mod_floor(&self.det)).collect();
        for c in 0..n {
            if v[c].is_zero() {
                continue;
            }
            let a = self.rows[c][c].clone();
            let b = v[c].clone();
            let e = a.extended_gcd(&b);
            let (g, x, y) = (e.gcd, e.x, e.y);
            let (ag, bg) = (&a / &g, &b / &g);
            let row = &self.rows[c];
            let new_row: Vec<BigInt> = (0..n).map(|j| &x * &row[j] + &y * &v[j]).collect();
            let rest: Vec<BigInt> = (0..n)
                .map(|j| (&bg * &row[j] - &ag * &v[j]).mod_floor(&self.det))
                .collect();
            self.rows[c] = new_row;
            v = rest;
            self.det = &self.det / &a * &g;
        }
        self.canonicalize();
    }

    fn canonicalize(&mut self) {
        let n = self.rows.len();
        for j in 0..n {
            if self.rows[j][j].is_negative() {
                for x in self.rows[j].iter_mut() {
                    *x = -&*x;
                }
            }
            let pivot = self.rows[j][j].clone();
            for i in 0..j {
                let q = self.rows[i][j].div_floor(&pivot);
                if q.is_zero() {
                    continue;
                }
                for k in j..n {
                    let t = &q * &self.rows[j][k];
                    self.rows[i][k] -= t;
                }
            }
        }
        self.det = self
            .rows
            .iter()
            .enumerate()
            .fold(BigInt::one(), |d, (i, r)| d * &r[i]);
    }
}

impl IntegralIdeal {
    pub fn zero(level: u64) -> Result<IntegralIdeal> {
        let degree = crate::cyclo::level(level)?.degree();
        Ok(IntegralIdeal {
            level,
            degree,
            hnf: None,
        })
    }

    pub fn unit(level: u64) -> Result<IntegralIdeal> {
        IntegralIdeal::from_generators(level, &[CycloElt::one(level)])
    }

    /// The ideal generated by `gens` in `Z[ζ_N]`. Generators at a level dividing `N`
    /// are embedded first.
    pub fn from_generators(level: u64, gens: &[CycloElt]) -> Result<IntegralIdeal> {
        let lv = crate::cyclo::level(level)?;
        let degree = lv.degree();
        let gens = gens
            .iter()
            .map(|g| g.embed(level))
            .collect::<Result<Vec<_>>>()?;
        if gens.iter().any(|g| !g.is_integral()) {
            return Err(Error::NotIntegral);
        }
        let nonzero: Vec<&CycloElt> = gens.iter().filter(|g| !g.is_zero()).collect();
        let Some(first) = nonzero.first() else {
            return IntegralIdeal::zero(level);
        };
        // N(g) lies in (g), so |N(g)|·Z^n sits inside the ideal
        let m = first.norm().numer().abs();
        let mut h = Hnf::scaled_identity(degree, &m);
        let zeta = CycloElt::root(level, 1);
        for g in nonzero {
            let mut x = (*g).clone();
            for _ in 0..degree {
                h.insert(&lattice_vector(&x)?);
                x = &x * &zeta;
            }
        }
        Ok(IntegralIdeal {
            level,
            degree,
            hnf: Some(h.rows),
        })
    }

    pub fn from_generator(x: &CycloElt) -> Result<IntegralIdeal> {
        IntegralIdeal::from_generators(x.level(), std::slice::from_ref(x))
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn is_zero(&self) -> bool {
        self.hnf.is_none()
    }

    pub fn hnf(&self) -> Option<&[Vec<BigInt>]> {
        self.hnf.as_deref()
    }

    /// Index of the ideal in `Z[ζ_N]`, i.e. its absolute norm; zero for the zero ideal.
    pub fn norm(&self) -> BigInt {
        match &self.hnf {
            None => BigInt::zero(),
            Some(rows) => rows
                .iter()
                .enumerate()
                .fold(BigInt::one(), |d, (i, r)| d * &r[i]),
        }
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.norm().is_one()
    }

    /// The Z-basis rows as ring elements.
    pub fn basis_elements(&self) -> Vec<CycloElt> {
        self.hnf
            .iter()
            .flatten()
            .map(|r| CycloElt::from_parts(self.level, r.clone(), BigInt::one()).expect("valid row"))
            .collect()
    }

    fn check_level(&self, other: u64) -> Result<()> {
        if self.level != other {
            Err(Error::LevelMismatch {
                left: self.level,
                right: other,
            })
        } else {
            Ok(())
        }
    }

    pub fn contains(&self, x: &CycloElt) -> Result<bool> {
        self.check_level(x.level())?;
        if !x.is_integral() {
            return Ok(false);
        }
        let Some(rows) = &self.hnf else {
            return Ok(x.is_zero());
        };
        let mut v = lattice_vector(x)?;
        for c in 0..self.degree {
            if v[c].is_zero() {
                continue;
            }
            let (q, rem) = v[c].div_rem(&rows[c][c]);
            if !rem.is_zero() {
                return Ok(false);
            }
            for k in c..self.degree {
                let t = &q * &rows[c][k];
                v[k] -= t;
            }
        }
        Ok(true)
    }

    /// `self ⊆ other`.
    pub fn is_subset_of(&self, other: &IntegralIdeal) -> Result<bool> {
        self.check_level(other.level)?;
        for b in self.basis_elements() {
            if !other.contains(&b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn product(&self, other: &IntegralIdeal) -> Result<IntegralIdeal> {
        self.check_level(other.level)?;
        if self.is_zero() || other.is_zero() {
            return IntegralIdeal::zero(self.level);
        }
        let m = self.norm() * other.norm();
        let mut h = Hnf::scaled_identity(self.degree, &m);
        let (xs, ys) = (self.basis_elements(), other.basis_elements());
        for x in &xs {
            for y in &ys {
                h.insert(&lattice_vector(&(x * y))?);
            }
        }
        Ok(IntegralIdeal {
            level: self.level,
            degree: self.degree,
            hnf: Some(h.rows),
        })
    }

    pub fn sum(&self, other: &IntegralIdeal) -> Result<IntegralIdeal> {
        self.check_level(other.level)?;
        let mut gens = self.basis_elements();
        gens.extend(other.basis_elements());
        IntegralIdeal::from_generators(self.level, &gens)
    }

    /// Extension of the image `g(self)` to the target ring.
    pub fn map(&self, g: &GaloisMap) -> Result<IntegralIdeal> {
        self.check_level(g.source_level())?;
        let images = self
            .basis_elements()
            .iter()
            .map(|x| g.apply(x))
            .collect::<Result<Vec<_>>>()?;
        IntegralIdeal::from_generators(g.target_level(), &images)
    }

    /// Checks that the row lattice is closed under multiplication by `ζ_N`.
    pub fn is_closed_under_zeta(&self) -> bool {
        let zeta = CycloElt::root(self.level, 1);
        self.basis_elements()
            .iter()
            .all(|b| self.contains(&(b * &zeta)).unwrap_or(false))
    }
}

pub fn ideal_from_generators(level: u64, gens: &[CycloElt]) -> Result<IntegralIdeal> {
    IntegralIdeal::from_generators(level, gens)
}

pub fn ideal_product(a: &IntegralIdeal, b: &IntegralIdeal) -> Result<IntegralIdeal> {
    a.product(b)
}

pub fn ideal_equal(a: &IntegralIdeal, b: &IntegralIdeal) -> Result<bool> {
    a.check_level(b.level)?;
    Ok(a == b)
}

pub fn ideal_contains(a: &IntegralIdeal, x: &CycloElt) -> Result<bool> {
    a.contains(x)
}

pub fn is_unit_ideal(a: &IntegralIdeal) -> bool {
    a.is_unit_ideal()
}

pub fn ideal_map(g: &GaloisMap, a: &IntegralIdeal) -> Result<IntegralIdeal> {
    a.map(g)
}

impl fmt::Debug for IntegralIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for IntegralIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.hnf {
            None => write!(f, "(0)_{}", self.level),
            Some(_) if self.is_unit_ideal() => write!(f, "(1)_{}", self.level),
            Some(rows) => {
                write!(f, "ideal_{} [", self.level)?;
                for (i, r) in rows.iter().enumerate() {
                    if i > 0 {
                        write!(f, "; ")?;
                    }
                    let s: Vec<String> = r.iter().map(|x| x.to_string()).collect();
                    write!(f, "{}", s.join(" "))?;
                }
                write!(f, "]")
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct IdealJson {
    level: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    hnf: Option<Vec<Vec<serde_json::Value>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    zero: Option<bool>,
}

fn json_int(x: &BigInt) -> serde_json::Value {
    match i64::try_from(x) {
        Ok(v) => serde_json::Value::from(v),
        Err(_) => serde_json::Value::from(x.to_string()),
    }
}

fn parse_json_int(v: &serde_json::Value) -> Option<BigInt> {
    match v {
        serde_json::Value::Number(n) => n.as_i64().map(BigInt::from),
        serde_json::Value::String(s) => s.parse().ok(),
        _ => None,
    }
}

impl Serialize for IntegralIdeal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let j = match &self.hnf {
            None => IdealJson {
                level: self.level,
                hnf: None,
                zero: Some(true),
            },
            Some(rows) => IdealJson {
                level: self.level,
                hnf: Some(
                    rows.iter()
                        .map(|r| r.iter().map(json_int).collect())
                        .collect(),
                ),
                zero: None,
            },
        };
        j.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntegralIdeal {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = IdealJson::deserialize(d)?;
        let degree = crate::cyclo::level(j.level)
            .map_err(D::Error::custom)?
            .degree();
        match (j.hnf, j.zero) {
            (None, Some(true)) => Ok(IntegralIdeal {
                level: j.level,
                degree,
                hnf: None,
            }),
            (Some(rows), None) => {
                let rows: Vec<Vec<BigInt>> = rows
                    .iter()
                    .map(|r| r.iter().map(parse_json_int).collect::<Option<Vec<_>>>())
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| D::Error::custom("hnf entries must be integers"))?;
                if rows.len() != degree || rows.iter().any(|r| r.len() != degree) {
                    return Err(D::Error::custom(format!("hnf must be {degree}x{degree}")));
                }
                let gens: Vec<CycloElt> = rows
                    .iter()
                    .map(|r| CycloElt::from_parts(j.level, r.clone(), BigInt::one()))
                    .collect::<Result<_>>()
                    .map_err(D::Error::custom)?;
                let ideal =
                    IntegralIdeal::from_generators(j.level, &gens).map_err(D::Error::custom)?;
                if ideal.hnf.as_ref() != Some(&rows) {
                    return Err(D::Error::custom(
                        "hnf is not the canonical basis of an ideal",
                    ));
                }
                Ok(ideal)
            }
            _ => Err(D::Error::custom(
                "expected exactly one of \"hnf\" or \"zero\": true",
            )),
        }
    }
}
