//! Frohman–Kania-Bartoszynska ideals from finite generator sets.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cyclo::{CycloElt, GaloisMap};
use crate::error::{Error, Result};
use crate::ideal::IntegralIdeal;
use crate::invariant::closed_invariant;
use crate::lattice::parity_shift;
use crate::presentation::{Role, SurgeryPresentation};
use crate::skein::{theory, TheoryKind, TheoryParams};

/// A 3-manifold with boundary, described by the link whose partial surgery produces it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoundaryManifold {
    /// Surgery on `K` (framing `k`) in the complement of an unknot `J` with `lk(K, J) = l`.
    TorusComplement { l: i64, k: i64 },
    /// Surgery on `K` (framing `k`) in the complement of an eyeglass whose loops link
    /// `K` with `l1`, `l2` and each other with `m`.
    EyeglassComplement { l1: i64, l2: i64, m: i64, k: i64 },
}

impl fmt::Display for BoundaryManifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryManifold::TorusComplement { l, k } => write!(f, "torus(l={l}, k={k})"),
            BoundaryManifold::EyeglassComplement { l1, l2, m, k } => {
                write!(f, "eyeglass(l1={l1}, l2={l2}, m={m}, k={k})")
            }
        }
    }
}

/// Which cabling of the boundary is used to close the manifold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorFamily {
    First,
    Second,
}

impl BoundaryManifold {
    /// Closed manifolds whose invariants generate the ideal.
    pub fn closures(
        &self,
        t: &TheoryParams,
        family: GeneratorFamily,
    ) -> Result<Vec<SurgeryPresentation>> {
        match *self {
            BoundaryManifold::TorusComplement { l, k } => {
                let d = t.rank() as i64;
                let p = t.p() as i64;
                let framings: Vec<i64> = match (t.kind(), family) {
                    (TheoryKind::OddPrime(_), GeneratorFamily::First) => {
                        (0..d).map(|i| 2 * i).collect()
                    }
                    (TheoryKind::TwiceOddPrime(_), GeneratorFamily::Second) => {
                        (0..d).map(|i| i + parity_shift(i, p) * p).collect()
                    }
                    (_, GeneratorFamily::First) => (0..d).collect(),
                    _ => return Err(Error::UnsupportedTheory(t.p())),
                };
                Ok(framings
                    .into_iter()
                    .map(|c| SurgeryPresentation::twisted_pair(l, [k, c], [Role::Surgery; 2]))
                    .collect())
            }
            BoundaryManifold::EyeglassComplement { l1, l2, m, k } => {
                if t.p() > 2 || family != GeneratorFamily::First {
                    return Err(Error::IncompatibleBoundary {
                        boundary: self.to_string(),
                        p: t.p(),
                    });
                }
                let mut out = Vec::new();
                for i in 0..2 {
                    for j in 0..2 {
                        out.push(SurgeryPresentation::LinkingMatrix {
                            matrix: vec![vec![k, l1, l2], vec![l1, i, m], vec![l2, m, j]],
                            roles: vec![Role::Surgery; 3],
                        });
                    }
                }
                Ok(out)
            }
        }
    }
}

/// `[I_p(M_c)]` over the closures of the boundary; every value must be integral.
pub fn fkb_generators(
    t: &TheoryParams,
    boundary: &BoundaryManifold,
    family: GeneratorFamily,
) -> Result<Vec<CycloElt>> {
    let gens = boundary
        .closures(t, family)?
        .iter()
        .map(|m| closed_invariant(t, m).map(|r| r.i))
        .collect::<Result<Vec<_>>>()?;
    if let Some(g) = gens.iter().find(|g| !g.is_integral()) {
        return Err(Error::Inconsistent(format!(
            "I_{} of a closure of {boundary} is not integral: {g}",
            t.p()
        )));
    }
    Ok(gens)
}

pub fn fkb_ideal(t: &TheoryParams, boundary: &BoundaryManifold) -> Result<IntegralIdeal> {
    fkb_ideal_with(t, boundary, GeneratorFamily::First)
}

pub fn fkb_ideal_with(
    t: &TheoryParams,
    boundary: &BoundaryManifold,
    family: GeneratorFamily,
) -> Result<IntegralIdeal> {
    IntegralIdeal::from_generators(t.level(), &fkb_generators(t, boundary, family)?)
}

pub fn fkb_eyeglass_ideal(l1: i64, l2: i64, m: i64, k: i64) -> Result<IntegralIdeal> {
    fkb_ideal(
        &*theory(2)?,
        &BoundaryManifold::EyeglassComplement { l1, l2, m, k },
    )
}

/// Recognized shapes of a 2-theory ideal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum IdealClass {
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "O")]
    Unit,
    #[serde(rename = "(sqrt2)")]
    Sqrt2,
    #[serde(rename = "other")]
    Other,
}

impl fmt::Display for IdealClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IdealClass::Zero => "0",
            IdealClass::Unit => "O",
            IdealClass::Sqrt2 => "(sqrt2)",
            IdealClass::Other => "other",
        })
    }
}

pub fn classify_ideal(a: &IntegralIdeal) -> IdealClass {
    if a.is_zero() {
        return IdealClass::Zero;
    }
    if a.is_unit_ideal() {
        return IdealClass::Unit;
    }
    if a.level().is_multiple_of(8) {
        if let Ok(s) = IntegralIdeal::from_generator(&CycloElt::sqrt2(a.level())) {
            if s == *a {
                return IdealClass::Sqrt2;
            }
        }
    }
    IdealClass::Other
}

/// The 2-theory table: `l` odd gives `O`; otherwise `(√2)`, `0`, `O` by `k mod 4`.
pub fn expected_torus_class(l: i64, k: i64) -> IdealClass {
    if l.rem_euclid(2) == 1 {
        return IdealClass::Unit;
    }
    match k.rem_euclid(4) {
        0 => IdealClass::Sqrt2,
        2 => IdealClass::Zero,
        _ => IdealClass::Unit,
    }
}

pub fn expected_eyeglass_class(l1: i64, l2: i64, k: i64) -> IdealClass {
    if l1.rem_euclid(2) == 1 || l2.rem_euclid(2) == 1 || k.rem_euclid(2) == 1 {
        return IdealClass::Unit;
    }
    if k.rem_euclid(4) == 0 {
        IdealClass::Sqrt2
    } else {
        IdealClass::Zero
    }
}

fn i_pow(k: i64) -> CycloElt {
    CycloElt::root(8, 2 * k)
}

/// The generator formulas as printed for the 2-theory boundaries, at level 8.
pub fn printed_generators(boundary: &BoundaryManifold) -> Vec<CycloElt> {
    let sum = |terms: &[(i64, i64)]| {
        terms
            .iter()
            .fold(CycloElt::zero(8), |s, &(c, e)| &s + &i_pow(e).scale(c))
    };
    match *boundary {
        BoundaryManifold::TorusComplement { l, k } => {
            let half = CycloElt::from_ratio(8, 1, 2);
            vec![
                &half * &sum(&[(1, k + 2 * l), (1, k), (2, 0)]),
                &half * &sum(&[(1, k + 2 * l + 2), (1, 1), (1, k), (1, 0)]),
            ]
        }
        BoundaryManifold::EyeglassComplement { l1, l2, m, k } => {
            let c = (&CycloElt::sqrt2(8) * &CycloElt::from_int(8, 2))
                .inv()
                .expect("nonzero");
            let a = k + 2 * l1 + 2 * l2 + 2 * m;
            [
                vec![
                    (3, 0),
                    (1, k),
                    (1, 2 * m),
                    (1, k + 2 * l1),
                    (1, k + 2 * l2),
                    (1, a),
                ],
                vec![
                    (2, 0),
                    (1, 1),
                    (1, k),
                    (1, 2 * m + 1),
                    (1, k + 2 * l1),
                    (1, k + 2 * l2 + 1),
                    (1, a + 1),
                ],
                vec![
                    (2, 0),
                    (1, 1),
                    (1, k),
                    (1, 2 * m + 1),
                    (1, k + 2 * l1 + 1),
                    (1, k + 2 * l2),
                    (1, a + 1),
                ],
                vec![
                    (1, 0),
                    (2, 1),
                    (1, k),
                    (1, 2 * m + 2),
                    (1, k + 2 * l1 + 1),
                    (1, k + 2 * l2 + 1),
                    (1, a + 2),
                ],
            ]
            .iter()
            .map(|t| &c * &sum(t))
            .collect()
        }
    }
}

/// Per generator: whether the computed value is an associate of the printed formula.
pub fn printed_generator_agreement(boundary: &BoundaryManifold) -> Result<Vec<bool>> {
    let computed = fkb_generators(&*theory(2)?, boundary, GeneratorFamily::First)?;
    Ok(computed
        .iter()
        .zip(printed_generators(boundary))
        .map(|(a, b)| a.is_associate(&b))
        .collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct IdealFactorization {
    pub r: u32,
    pub boundary: BoundaryManifold,
    pub j_p: IntegralIdeal,
    pub product: IntegralIdeal,
    pub containment_holds: bool,
    pub equality_holds: bool,
}

/// Compares `J_{2r}` with `i_r(J_2) · j_r(J_r)` inside `Z[ζ_{8r}]`.
pub fn ideal_factorization_check(
    r: u32,
    boundary: &BoundaryManifold,
) -> Result<IdealFactorization> {
    let TheoryKind::OddPrime(_) = TheoryKind::classify(r)? else {
        return Err(Error::UnsupportedTheory(r));
    };
    if !matches!(boundary, BoundaryManifold::TorusComplement { .. }) {
        return Err(Error::IncompatibleBoundary {
            boundary: boundary.to_string(),
            p: 2 * r,
        });
    }
    let j_p = fkb_ideal(&*theory(2 * r)?, boundary)?;
    let j_2 = fkb_ideal(&*theory(2)?, boundary)?;
    let j_r = fkb_ideal(&*theory(r)?, boundary)?;
    let product = j_2
        .map(&GaloisMap::i_r(r as u64))?
        .product(&j_r.map(&GaloisMap::j_r(r as u64))?)?;
    Ok(IdealFactorization {
        r,
        boundary: *boundary,
        containment_holds: j_p.is_subset_of(&product)?,
        equality_holds: j_p == product,
        j_p,
        product,
    })
}
