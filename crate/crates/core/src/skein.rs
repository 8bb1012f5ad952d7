//! Theory constants and solid-torus skein data for `p ∈ {1, 2, r, 2r}`.
//!
//! The Kauffman variable of theory `p` is `A_p = ζ_{2p}` (so `A_1 = -1` and
//! `A_2 = ζ_4`). Quantum integers are evaluated as the Laurent polynomials
//! `[n] = Σ_k A^{2(n-1-2k)}`, which stay meaningful where `A² = A^{-2}`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

use crate::cyclo::{CycloElt, GaloisMap};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoryKind {
    One,
    Two,
    /// SO(3) theory at an odd prime `r`.
    OddPrime(u32),
    /// SU(2) theory at `2r`.
    TwiceOddPrime(u32),
}

fn is_odd_prime(n: u32) -> bool {
    n >= 3
        && n % 2 == 1
        && (3..)
            .step_by(2)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

impl TheoryKind {
    pub fn classify(p: u32) -> Result<TheoryKind> {
        match p {
            1 => Ok(TheoryKind::One),
            2 => Ok(TheoryKind::Two),
            p if is_odd_prime(p) => Ok(TheoryKind::OddPrime(p)),
            p if p % 2 == 0 && is_odd_prime(p / 2) => Ok(TheoryKind::TwiceOddPrime(p / 2)),
            p => Err(Error::UnsupportedTheory(p)),
        }
    }
}

/// Up-to-units class of `μ_i − μ_j` in the `2r` theory.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum MuClass {
    Unit,
    Sqrt2,
    OnePlusAlpha4,
}

/// All constants of one theory. Built once, immutable afterwards.
#[derive(Debug)]
pub struct TheoryParams {
    p: u32,
    kind: TheoryKind,
    level: u64,
    rank: usize,
    max_color: u32,
    loops: Vec<CycloElt>,
    twists: Vec<CycloElt>,
    /// `λ^{(a)}_b` for `a, b ≤ max_color`.
    meridians: Vec<Vec<CycloElt>>,
    d: CycloElt,
    kappa: CycloElt,
    omega: Vec<CycloElt>,
}

impl TheoryParams {
    pub fn new(p: u32) -> Result<TheoryParams> {
        let kind = TheoryKind::classify(p)?;
        let (level, rank, max_color) = match kind {
            TheoryKind::One => (1, 1, 1),
            TheoryKind::Two => (8, 2, 1),
            TheoryKind::OddPrime(r) => (4 * r as u64, ((r - 1) / 2) as usize, r - 2),
            TheoryKind::TwiceOddPrime(r) => (8 * r as u64, (r - 1) as usize, r - 2),
        };
        let mut t = TheoryParams {
            p,
            kind,
            level,
            rank,
            max_color,
            loops: Vec::new(),
            twists: Vec::new(),
            meridians: Vec::new(),
            d: CycloElt::one(level),
            kappa: CycloElt::one(level),
            omega: Vec::new(),
        };
        let table = 2 * max_color as usize + 2;
        t.loops = (0..table as u32).map(|i| t.raw_loop(i)).collect();
        t.twists = (0..table as u32).map(|i| t.raw_twist(i)).collect();
        t.meridians = (0..=max_color)
            .map(|a| {
                (0..=max_color)
                    .map(|b| t.hopf_coefficient(a, b).checked_div(&t.loops[b as usize]))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        t.d = t.compute_d()?;
        t.omega = match kind {
            TheoryKind::One => vec![CycloElt::one(1)],
            TheoryKind::Two => {
                let s = CycloElt::sqrt2(8);
                let inv = s.inv()?;
                vec![inv.clone(), inv.scale_ratio(1, 2)]
            }
            _ => {
                let inv = t.d.inv()?;
                (0..rank as u32)
                    .map(|i| &inv * &t.loops[i as usize])
                    .collect()
            }
        };
        t.kappa = (0..rank)
            .map(|i| &(&t.omega[i] * &t.twists[i]) * &t.loops[i])
            .fold(CycloElt::zero(level), |s, x| &s + &x);
        if t.kappa.root_order().is_none() {
            return Err(Error::Inconsistent(format!(
                "kappa_{p} = {} is not a root of unity",
                t.kappa
            )));
        }
        Ok(t)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn kind(&self) -> TheoryKind {
        self.kind
    }

    /// The cyclotomic level `N` hosting every constant of the theory.
    pub fn level(&self) -> u64 {
        self.level
    }

    /// `d_p`, the rank of the torus module.
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Largest color whose loop value is invertible (colors usable on banded components).
    pub fn max_color(&self) -> u32 {
        self.max_color
    }

    /// `A^k`.
    pub fn a_pow(&self, k: i64) -> CycloElt {
        if self.p == 1 {
            CycloElt::from_int(1, if k.rem_euclid(2) == 0 { 1 } else { -1 })
        } else {
            CycloElt::root(self.level, 2 * k)
        }
    }

    pub fn a(&self) -> CycloElt {
        self.a_pow(1)
    }

    /// `[n] = (A^{2n} − A^{-2n})/(A² − A^{-2})`, as a Laurent sum.
    pub fn quantum_int(&self, n: i64) -> CycloElt {
        let m = n.abs();
        let s = (0..m)
            .map(|k| self.a_pow(2 * (m - 1 - 2 * k)))
            .fold(CycloElt::zero(self.level), |acc, x| &acc + &x);
        if n < 0 {
            -s
        } else {
            s
        }
    }

    fn raw_loop(&self, i: u32) -> CycloElt {
        let q = self.quantum_int(i as i64 + 1);
        if i.is_multiple_of(2) {
            q
        } else {
            -q
        }
    }

    fn raw_twist(&self, i: u32) -> CycloElt {
        let i = i as i64;
        let x = self.a_pow(i * (i + 2));
        if i % 2 == 0 {
            x
        } else {
            -x
        }
    }

    fn check_color(&self, i: u32, max: u32) -> Result<()> {
        if i > max {
            Err(Error::ColorOutOfRange { color: i, max })
        } else {
            Ok(())
        }
    }

    /// `δ_i = (−1)^i [i+1]`, the unknot colored `i`.
    pub fn loop_value(&self, i: u32) -> Result<CycloElt> {
        self.check_color(i, self.loops.len() as u32 - 1)?;
        Ok(self.loops[i as usize].clone())
    }

    /// `μ_i = (−1)^i A^{i(i+2)}`.
    pub fn twist_mu(&self, i: u32) -> CycloElt {
        self.twists
            .get(i as usize)
            .cloned()
            .unwrap_or_else(|| self.raw_twist(i))
    }

    /// Hopf link colored `a, b`: `H_{ab} = (−1)^{a+b} [(a+1)(b+1)]`.
    pub fn hopf_coefficient(&self, a: u32, b: u32) -> CycloElt {
        let q = self.quantum_int((a as i64 + 1) * (b as i64 + 1));
        if (a + b).is_multiple_of(2) {
            q
        } else {
            -q
        }
    }

    /// Scalar by which a meridian colored `a` acts on a strand colored `b`.
    pub fn meridian_eigenvalue(&self, a: u32, b: u32) -> Result<CycloElt> {
        self.check_color(b, self.max_color)?;
        if let Some(x) = self.meridians.get(a as usize) {
            return Ok(x[b as usize].clone());
        }
        self.hopf_coefficient(a, b)
            .checked_div(&self.loops[b as usize])
    }

    /// `μ_i^k` without repeated multiplication.
    pub fn twist_mu_pow(&self, i: u32, k: i64) -> CycloElt {
        let i = i as i64;
        let x = self.a_pow(k * i * (i + 2));
        if i % 2 == 1 && k.rem_euclid(2) == 1 {
            -x
        } else {
            x
        }
    }

    /// Colors `|a−b|, |a−b|+2, …, a+b`.
    pub fn fusion(&self, a: u32, b: u32) -> impl Iterator<Item = u32> {
        (a.abs_diff(b)..=a + b).step_by(2)
    }

    pub fn d(&self) -> &CycloElt {
        &self.d
    }

    pub fn kappa(&self) -> &CycloElt {
        &self.kappa
    }

    /// Coefficients of `ω_p` on `e_0, …, e_{d_p − 1}`.
    pub fn omega_coefficients(&self) -> &[CycloElt] {
        &self.omega
    }

    pub fn omega(&self) -> SkeinVector {
        SkeinVector {
            p: self.p,
            level: self.level,
            coeffs: self.omega.clone(),
        }
    }

    /// `√2` at this theory's level (`p = 2` or `2r`).
    pub fn sqrt2(&self) -> CycloElt {
        CycloElt::sqrt2(self.level)
    }

    /// `α_p = ζ_{4p}` for `p ≥ 2`.
    pub fn alpha_pow(&self, k: i64) -> CycloElt {
        assert!(self.p >= 2);
        CycloElt::root(self.level, k * (self.level / (4 * self.p as u64)) as i64)
    }

    fn compute_d(&self) -> Result<CycloElt> {
        match self.kind {
            TheoryKind::One => Ok(CycloElt::one(1)),
            TheoryKind::Two => Ok(CycloElt::sqrt2(8)),
            TheoryKind::TwiceOddPrime(r) => {
                // pinned by the tensor decomposition rather than by positivity:
                // the product is the negative real square root
                let d2 = theory(2)?.d().clone();
                let dr = theory(r)?.d().clone();
                let d =
                    &GaloisMap::i_r(r as u64).apply(&d2)? * &GaloisMap::j_r(r as u64).apply(&dr)?;
                let expected = self.sum_of_loop_squares();
                if &d * &d != expected {
                    return Err(Error::NoSquareRoot {
                        p: self.p,
                        level: self.level,
                    });
                }
                Ok(d)
            }
            TheoryKind::OddPrime(_) => {
                let sum_sq = self.sum_of_loop_squares();
                let gauss = (0..self.rank)
                    .map(|i| &(&self.loops[i] * &self.loops[i]) * &self.twists[i])
                    .fold(CycloElt::zero(self.level), |s, x| &s + &x);
                square_root_via_gauss_sum(&sum_sq, &gauss).ok_or(Error::NoSquareRoot {
                    p: self.p,
                    level: self.level,
                })
            }
        }
    }

    fn sum_of_loop_squares(&self) -> CycloElt {
        (0..self.rank)
            .map(|i| &self.loops[i] * &self.loops[i])
            .fold(CycloElt::zero(self.level), |s, x| &s + &x)
    }

    /// Class of `μ_i − μ_j` in the `2r` theory, found by exact associate tests.
    pub fn mu_difference_class(&self, i: u32, j: u32) -> Result<MuClass> {
        let TheoryKind::TwiceOddPrime(_) = self.kind else {
            return Err(Error::UnsupportedTheory(self.p));
        };
        if i >= j || j as usize >= self.rank {
            return Err(Error::ColorOutOfRange {
                color: j,
                max: self.rank as u32 - 1,
            });
        }
        let diff = &self.twists[i as usize] - &self.twists[j as usize];
        let one = CycloElt::one(self.level);
        let candidates = [
            (MuClass::Unit, one.clone()),
            (MuClass::Sqrt2, self.sqrt2()),
            (MuClass::OnePlusAlpha4, &one + &self.alpha_pow(4)),
        ];
        candidates
            .into_iter()
            .find(|(_, c)| diff.is_associate(c))
            .map(|(class, _)| class)
            .ok_or_else(|| Error::Inconsistent(format!("mu_{i} - mu_{j} fits no class")))
    }
}

/// Predicted class of `μ_i − μ_j` from parity and the congruence `(j−i)(i+j+2) ≡ 0 (mod r)`.
pub fn predicted_mu_class(r: u32, i: u32, j: u32) -> MuClass {
    if (i + j).is_multiple_of(2) {
        MuClass::OnePlusAlpha4
    } else if ((j - i) * (i + j + 2)).is_multiple_of(r) {
        MuClass::Sqrt2
    } else {
        MuClass::Unit
    }
}

/// Given `X = Σ δ_i²` and `G = Σ δ_i² μ_i` with `G·Ḡ = X`, the ratio `G²/X` is a root
/// of unity `κ²`; any square root `κ` in the field gives `D = G/κ` with `D² = X`.
/// The sign is fixed by requiring a positive real embedding.
fn square_root_via_gauss_sum(x: &CycloElt, g: &CycloElt) -> Option<CycloElt> {
    let n = x.level();
    let rho = (g * g).checked_div(x).ok()?;
    let (e, neg) = rho.as_root_of_unity()?;
    // ρ = ±ζ_N^e; square roots ±ζ_{2N}^{k/2} must live in Q(ζ_N)
    let twice = if neg { (2 * e + n) % (2 * n) } else { 2 * e };
    if twice % 4 != 0 && n.is_multiple_of(2) {
        return None;
    }
    let half = twice / 2; // ρ = ζ_{2N}^{twice}, κ = ζ_{2N}^{half}
    let kappa = if half % 2 == 0 {
        CycloElt::root(n, (half / 2) as i64)
    } else {
        // odd N only: ζ_{2N}^{half} = -ζ_N^{(half+N)/2}
        -CycloElt::root(n, ((half + n) / 2) as i64)
    };
    let mut d = g.checked_div(&kappa).ok()?;
    let z = d.to_complex();
    if z.im.abs() > 1e-9 * (1.0 + z.re.abs()) {
        return None;
    }
    if z.re < 0.0 {
        d = -d;
    }
    (&d * &d == *x).then_some(d)
}

static THEORIES: OnceLock<Mutex<HashMap<u32, Arc<TheoryParams>>>> = OnceLock::new();

/// Shared, lazily built theory constants.
pub fn theory(p: u32) -> Result<Arc<TheoryParams>> {
    let cache = THEORIES.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().expect("theory cache poisoned").get(&p) {
        return Ok(t.clone());
    }
    let t = Arc::new(TheoryParams::new(p)?);
    Ok(cache
        .lock()
        .expect("theory cache poisoned")
        .entry(p)
        .or_insert(t)
        .clone())
}

/// A combination `Σ c_i e_i` of solid-torus colors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SkeinVector {
    p: u32,
    level: u64,
    coeffs: Vec<CycloElt>,
}

impl SkeinVector {
    pub fn new(theory: &TheoryParams, coeffs: Vec<CycloElt>) -> Result<SkeinVector> {
        if coeffs.len() > theory.max_color as usize + 1 {
            return Err(Error::ColorOutOfRange {
                color: coeffs.len() as u32 - 1,
                max: theory.max_color,
            });
        }
        let coeffs = coeffs
            .into_iter()
            .map(|c| c.embed(theory.level))
            .collect::<Result<Vec<_>>>()?;
        Ok(SkeinVector {
            p: theory.p,
            level: theory.level,
            coeffs,
        })
    }

    /// The color `e_i`.
    pub fn basis(theory: &TheoryParams, i: u32) -> Result<SkeinVector> {
        theory.check_color(i, theory.max_color)?;
        let mut coeffs = vec![CycloElt::zero(theory.level); i as usize + 1];
        coeffs[i as usize] = CycloElt::one(theory.level);
        Ok(SkeinVector {
            p: theory.p,
            level: theory.level,
            coeffs,
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn coeffs(&self) -> &[CycloElt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> CycloElt {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| CycloElt::zero(self.level))
    }

    /// Nonzero `(color, coefficient)` pairs.
    pub fn terms(&self) -> impl Iterator<Item = (u32, &CycloElt)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i as u32, c))
    }

    /// `t^k(v)`: coefficient `i` multiplied by `μ_i^k`.
    pub fn twist_power(&self, theory: &TheoryParams, k: i64) -> SkeinVector {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * &theory.twist_mu_pow(i as u32, k))
            .collect();
        SkeinVector {
            p: self.p,
            level: self.level,
            coeffs,
        }
    }

    pub fn conj(&self) -> SkeinVector {
        SkeinVector {
            p: self.p,
            level: self.level,
            coeffs: self.coeffs.iter().map(CycloElt::conj).collect(),
        }
    }

    pub fn scale(&self, c: &CycloElt) -> SkeinVector {
        SkeinVector {
            p: self.p,
            level: self.level,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn add(&self, other: &SkeinVector) -> SkeinVector {
        let n = self.coeffs.len().max(other.coeffs.len());
        SkeinVector {
            p: self.p,
            level: self.level,
            coeffs: (0..n).map(|i| &self.coeff(i) + &other.coeff(i)).collect(),
        }
    }
}

/// Free-function form of [`SkeinVector::twist_power`].
pub fn twist_power(theory: &TheoryParams, v: &SkeinVector, k: i64) -> SkeinVector {
    v.twist_power(theory, k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(p: u32) -> Arc<TheoryParams> {
        theory(p).unwrap()
    }

    #[test]
    fn classify() {
        assert_eq!(
            TheoryKind::classify(6).unwrap(),
            TheoryKind::TwiceOddPrime(3)
        );
        assert_eq!(TheoryKind::classify(13).unwrap(), TheoryKind::OddPrime(13));
        assert!(TheoryKind::classify(9).is_err());
        assert!(TheoryKind::classify(4).is_err());
        assert!(TheoryKind::classify(0).is_err());
    }

    #[test]
    fn quantum_integers() {
        for p in [1, 2, 3, 6, 10] {
            assert!(t(p).quantum_int(1).is_one());
            assert!(t(p).quantum_int(0).is_zero());
        }
        let q = t(10).quantum_int(2);
        let expected = &CycloElt::root(40, 4) + &CycloElt::root(40, -4);
        assert_eq!(q, expected);
        assert!((q.to_complex().re - 1.618_033_988_749_895).abs() < 1e-12);
        // at A = ζ_4 the Laurent sum gives [n] = n (−1)^{n−1}
        assert_eq!(t(2).quantum_int(4), CycloElt::from_int(8, -4));
        assert_eq!(t(1).quantum_int(5), CycloElt::from_int(1, 5));
        assert_eq!(t(7).quantum_int(-3), -t(7).quantum_int(3));
    }

    #[test]
    fn quantum_integer_zeros() {
        // [n] vanishes iff p | 2n
        for p in [3u32, 5, 6, 7, 10, 14] {
            let th = t(p);
            for n in 1..=(3 * p as i64) {
                assert_eq!(
                    th.quantum_int(n).is_zero(),
                    (2 * n) % p as i64 == 0,
                    "p={p} n={n}"
                );
            }
        }
    }

    #[test]
    fn loops_twists_hopf() {
        for p in [1, 2, 5, 6] {
            assert!(t(p).loop_value(0).unwrap().is_one());
            assert!(t(p).twist_mu(0).is_one());
            assert!(t(p).hopf_coefficient(0, 0).is_one());
        }
        assert_eq!(t(2).loop_value(1).unwrap(), CycloElt::from_int(8, 2));
        assert_eq!(t(1).loop_value(1).unwrap(), CycloElt::from_int(1, -2));
        let expect = -(&CycloElt::root(24, 4) + &CycloElt::root(24, -4));
        assert_eq!(t(6).loop_value(1).unwrap(), expect);
        assert_eq!(t(2).twist_mu(1), CycloElt::root(8, 2));
        let m = t(6).twist_mu(1);
        assert!((&m * &m.conj()).is_one());
        assert_eq!(t(2).hopf_coefficient(1, 1), CycloElt::from_int(8, -4));
        assert_eq!(
            t(2).meridian_eigenvalue(1, 1).unwrap(),
            CycloElt::from_int(8, -2)
        );
        for p in [2, 3, 5, 6, 10] {
            let th = t(p);
            for a in 0..=th.max_color() {
                for b in 0..=th.max_color() {
                    assert_eq!(th.hopf_coefficient(a, b), th.hopf_coefficient(b, a));
                    let lam = th.meridian_eigenvalue(a, b).unwrap();
                    assert_eq!(&lam * &th.loop_value(b).unwrap(), th.hopf_coefficient(a, b));
                }
            }
        }
    }

    #[test]
    fn twist_orders() {
        for p in [3u32, 5, 6, 10] {
            let th = t(p);
            for i in 0..=th.max_color() {
                assert!(th.twist_mu(i).pow(2 * p as i64).is_one());
            }
        }
        for i in 0..2 {
            assert!(t(2).twist_mu(i).pow(4).is_one());
        }
        for p in [1u32, 2, 5, 6] {
            let th = t(p);
            for i in 0..=th.max_color() {
                for k in -5..5 {
                    assert_eq!(th.twist_mu_pow(i, k), th.twist_mu(i).pow(k));
                }
            }
        }
    }

    #[test]
    fn omega_and_constants() {
        assert_eq!(t(1).omega_coefficients(), &[CycloElt::one(1)]);
        let s = CycloElt::sqrt2(8);
        let w = t(2).omega_coefficients().to_vec();
        assert_eq!(w[0], s.inv().unwrap());
        assert_eq!(w[1], (&s * &CycloElt::from_int(8, 2)).inv().unwrap());
        assert_eq!(t(2).d(), &s);
        assert!(t(1).d().is_one());
        assert!(t(1).kappa().is_one());
        let k2 = t(2).kappa().clone();
        assert_eq!(
            k2,
            (&CycloElt::one(8) + &CycloElt::root(8, 2))
                .checked_div(&s)
                .unwrap()
        );
        assert_eq!(k2.root_order(), Some(8));
        let th = t(6);
        let dinv = th.d().inv().unwrap();
        assert_eq!(th.omega_coefficients()[0], dinv);
        assert_eq!(th.omega_coefficients()[1], -&(&dinv * &th.quantum_int(2)));
    }

    #[test]
    fn d_squares_and_positivity() {
        for p in [3u32, 5, 6, 7, 10, 11, 13, 14] {
            let th = t(p);
            let sum: CycloElt = (1..=th.rank() as i64)
                .map(|i| th.quantum_int(i).pow(2))
                .fold(CycloElt::zero(th.level()), |s, x| &s + &x);
            assert_eq!(th.d().pow(2), sum, "p={p}");
            let z = th.d().to_complex();
            assert!(z.im.abs() < 1e-9);
            assert_eq!(z.re > 0.0, p % 2 == 1, "p={p}");
            assert!(th.kappa().root_order().is_some());
        }
    }

    #[test]
    fn twist_power_periods() {
        let two = t(2);
        let w = two.omega();
        assert_eq!(w.twist_power(&two, 0), w);
        assert_eq!(w.twist_power(&two, 4), w);
        assert_ne!(w.twist_power(&two, 1), w);
        let three = t(3);
        assert_eq!(three.omega().twist_power(&three, 3), three.omega());
        let six = t(6);
        let v = six.omega();
        assert_eq!(v.twist_power(&six, 5).twist_power(&six, -5), v);
    }

    #[test]
    fn mu_classes() {
        assert_eq!(t(6).mu_difference_class(0, 1).unwrap(), MuClass::Sqrt2);
        assert_eq!(
            t(10).mu_difference_class(0, 2).unwrap(),
            MuClass::OnePlusAlpha4
        );
        assert_eq!(t(10).mu_difference_class(0, 1).unwrap(), MuClass::Unit);
        assert!(t(5).mu_difference_class(0, 1).is_err());
        assert!(t(6).mu_difference_class(1, 1).is_err());
        let diff = &t(6).twist_mu(0) - &t(6).twist_mu(1);
        assert!(diff.is_associate(&CycloElt::sqrt2(24)));
    }
}
