//! Evaluation of colored brackets and closed invariants.

use serde::Serialize;

use crate::cyclo::{CycloElt, GaloisMap};
use crate::error::{Error, Result};
use crate::linalg;
use crate::presentation::{Role, SurgeryPresentation};
use crate::skein::{theory, SkeinVector, TheoryKind, TheoryParams};

/// Closed invariants of a surgery presentation, all at weight zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosedInvariantResult {
    /// `⟨M⟩_p`.
    pub bracket: CycloElt,
    /// `I_p(M) = D_p ⟨M⟩_p`.
    #[serde(rename = "I")]
    pub i: CycloElt,
    /// `θ_p(M) = D_p^{β₁} ⟨M⟩_p`.
    pub theta: CycloElt,
    pub signature: i64,
    pub beta1: usize,
}

fn check_colors(
    t: &TheoryParams,
    pres: &SurgeryPresentation,
    colors: &[SkeinVector],
) -> Result<()> {
    pres.validate()?;
    if colors.len() != pres.component_count() {
        return Err(Error::InvalidPresentation(format!(
            "{} colors for {} components",
            colors.len(),
            pres.component_count()
        )));
    }
    if let Some(v) = colors.iter().find(|v| v.p() != t.p()) {
        return Err(Error::InvalidPresentation(format!(
            "color from theory {} used in theory {}",
            v.p(),
            t.p()
        )));
    }
    Ok(())
}

fn weights(v: &SkeinVector) -> Vec<(u32, CycloElt)> {
    v.terms().map(|(c, x)| (c, x.clone())).collect()
}

/// The bracket of the framed link with component `j` colored `colors[j]`.
pub fn colored_bracket(
    t: &TheoryParams,
    pres: &SurgeryPresentation,
    colors: &[SkeinVector],
) -> Result<CycloElt> {
    check_colors(t, pres, colors)?;
    bracket_unchecked(t, pres, colors)
}

/// [`colored_bracket`] with each component colored by a single basis color.
pub fn colored_bracket_indices(
    t: &TheoryParams,
    pres: &SurgeryPresentation,
    colors: &[u32],
) -> Result<CycloElt> {
    let vs = colors
        .iter()
        .map(|&c| SkeinVector::basis(t, c))
        .collect::<Result<Vec<_>>>()?;
    colored_bracket(t, pres, &vs)
}

fn bracket_unchecked(
    t: &TheoryParams,
    pres: &SurgeryPresentation,
    colors: &[SkeinVector],
) -> Result<CycloElt> {
    match pres {
        SurgeryPresentation::ChainForest {
            framings, edges, ..
        } => forest_bracket(t, framings, edges, colors),
        SurgeryPresentation::TwistedPair {
            linking, framings, ..
        } => {
            let mut total = CycloElt::zero(t.level());
            for (a, xa) in weights(&colors[0]) {
                for (b, yb) in weights(&colors[1]) {
                    let framed = &t.twist_mu_pow(a, framings[0]) * &t.twist_mu_pow(b, framings[1]);
                    let pair = pair_bracket(t, a, b, *linking)?;
                    total = &total + &(&(&xa * &yb) * &(&framed * &pair));
                }
            }
            Ok(total)
        }
        SurgeryPresentation::LinkingMatrix { matrix, .. } => matrix_bracket(t, matrix, colors),
        SurgeryPresentation::DisjointUnion { parts } => {
            let mut total = CycloElt::one(t.level());
            let mut off = 0;
            for part in parts {
                let n = part.component_count();
                total = &total * &bracket_unchecked(t, part, &colors[off..off + n])?;
                off += n;
            }
            Ok(total)
        }
    }
}

/// `⟨pair(a, b; l)⟩ = μ_a^{−l} μ_b^{−l} Σ_c μ_c^l δ_c` over the fusion colors `c`.
pub fn pair_bracket(t: &TheoryParams, a: u32, b: u32, l: i64) -> Result<CycloElt> {
    let mut s = CycloElt::zero(t.level());
    for c in t.fusion(a, b) {
        s = &s + &(&t.twist_mu_pow(c, l) * &t.loop_value(c)?);
    }
    Ok(&s * &(&t.twist_mu_pow(a, -l) * &t.twist_mu_pow(b, -l)))
}

fn forest_bracket(
    t: &TheoryParams,
    framings: &[i64],
    edges: &[(usize, usize, i64)],
    colors: &[SkeinVector],
) -> Result<CycloElt> {
    let n = framings.len();
    let mut adj = vec![Vec::new(); n];
    for &(i, j, _) in edges {
        adj[i].push(j);
        adj[j].push(i);
    }
    let mut seen = vec![false; n];
    let mut total = CycloElt::one(t.level());
    for root in 0..n {
        if seen[root] {
            continue;
        }
        // depth-first order; children are processed before parents by walking it backwards
        let mut order = vec![(root, usize::MAX)];
        seen[root] = true;
        let mut k = 0;
        while k < order.len() {
            let (v, _) = order[k];
            for &u in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    order.push((u, v));
                }
            }
            k += 1;
        }
        // g[v] = list of (color, value of the subtree hanging from v with v colored so)
        let mut g: Vec<Vec<(u32, CycloElt)>> = vec![Vec::new(); n];
        for &(v, _) in &order {
            g[v] = weights(&colors[v])
                .into_iter()
                .map(|(c, x)| (c, &x * &t.twist_mu_pow(c, framings[v])))
                .collect();
        }
        for &(v, parent) in order.iter().rev() {
            if parent == usize::MAX {
                let s = g[v]
                    .iter()
                    .try_fold(CycloElt::zero(t.level()), |s, (c, x)| {
                        Ok::<_, Error>(&s + &(x * &t.loop_value(*c)?))
                    })?;
                total = &total * &s;
                continue;
            }
            let child = std::mem::take(&mut g[v]);
            for (cp, xp) in g[parent].iter_mut() {
                let mut m = CycloElt::zero(t.level());
                for (c, x) in &child {
                    m = &m + &(x * &t.meridian_eigenvalue(*c, *cp)?);
                }
                *xp = &*xp * &m;
            }
        }
    }
    Ok(total)
}

/// Closed forms valid at `A = −1` and `A = ζ_4`, where the bracket of a
/// `{0,1}`-colored link is determined by its linking matrix.
fn matrix_bracket(
    t: &TheoryParams,
    matrix: &[Vec<i64>],
    colors: &[SkeinVector],
) -> Result<CycloElt> {
    if t.p() > 2 {
        return Err(Error::InvalidPresentation(format!(
            "linking-matrix patterns are only evaluable for p = 1, 2 (got p = {})",
            t.p()
        )));
    }
    let n = matrix.len();
    if n > 24 {
        return Err(Error::InvalidPresentation(
            "linking matrix too large".into(),
        ));
    }
    let ws: Vec<Vec<(u32, CycloElt)>> = colors.iter().map(weights).collect();
    let mut total = CycloElt::zero(t.level());
    let mut idx = vec![0usize; n];
    if ws.iter().any(|w| w.is_empty()) {
        return Ok(total);
    }
    loop {
        let cs: Vec<u32> = (0..n).map(|j| ws[j][idx[j]].0).collect();
        let coeff = (0..n).fold(CycloElt::one(t.level()), |s, j| &s * &ws[j][idx[j]].1);
        let n1 = cs.iter().filter(|&&c| c == 1).count() as i64;
        let value = if t.p() == 1 {
            CycloElt::from_int(1, (-2i64).pow(n1 as u32))
        } else {
            let twist: i64 = (0..n).map(|j| cs[j] as i64 * matrix[j][j]).sum();
            let cross: i64 = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .map(|(i, j)| (cs[i] * cs[j]) as i64 * matrix[i][j])
                .sum();
            let sign = if cross.rem_euclid(2) == 0 { 1 } else { -1 };
            &CycloElt::root(8, 2 * twist) * &CycloElt::from_int(8, sign * (1i64 << n1))
        };
        total = &total + &(&coeff * &value);
        let mut j = 0;
        loop {
            if j == n {
                return Ok(total);
            }
            idx[j] += 1;
            if idx[j] < ws[j].len() {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}

/// Colors for the closed invariant: `ω_p` on surgery components, `e_c` on banded ones.
pub fn role_colors(t: &TheoryParams, pres: &SurgeryPresentation) -> Result<Vec<SkeinVector>> {
    pres.roles()
        .into_iter()
        .map(|r| match r {
            Role::Surgery => Ok(t.omega()),
            Role::Banded(c) => SkeinVector::basis(t, c),
        })
        .collect()
}

/// `⟨M⟩ = D^{−1} κ^{−σ} ⟨L(ω)⟩`, with `I` and `θ` derived from it.
pub fn closed_invariant(
    t: &TheoryParams,
    pres: &SurgeryPresentation,
) -> Result<ClosedInvariantResult> {
    let colors = role_colors(t, pres)?;
    let link = colored_bracket(t, pres, &colors)?;
    let b = pres.surgery_matrix();
    let signature = linalg::signature(&b);
    let beta1 = linalg::nullity(&b);
    let d = t.d();
    let bracket = &(&link * &t.kappa().pow(-signature)) * &d.inv()?;
    let i = d * &bracket;
    let theta = &d.pow(beta1 as i64) * &bracket;
    Ok(ClosedInvariantResult {
        bracket,
        i,
        theta,
        signature,
        beta1,
    })
}

/// `(x, y)`: the 3-chain `x – ω – ȳ`, equal to `D·⟨(S¹×S², x ⊔ −ȳ)⟩`.
pub fn torus_pairing(t: &TheoryParams, x: &SkeinVector, y: &SkeinVector) -> Result<CycloElt> {
    let chain = SurgeryPresentation::chain(
        vec![0, 0, 0],
        vec![Role::Banded(0), Role::Surgery, Role::Banded(0)],
    );
    colored_bracket(t, &chain, &[x.clone(), t.omega(), y.conj()])
}

/// `⟨x, y⟩ = (x, y)/D`, the bracket of `(S¹×S², x ⊔ −ȳ)`.
pub fn torus_bracket_pairing(
    t: &TheoryParams,
    x: &SkeinVector,
    y: &SkeinVector,
) -> Result<CycloElt> {
    torus_pairing(t, x, y)?.checked_div(t.d())
}

/// `⟨M₁ ♯ M₂⟩ = D ⟨M₁⟩ ⟨M₂⟩` (for `p = 2`, `D = √2`).
pub fn connected_sum_check(
    t: &TheoryParams,
    m1: &SurgeryPresentation,
    m2: &SurgeryPresentation,
) -> Result<bool> {
    let sum = SurgeryPresentation::disjoint_union(vec![m1.clone(), m2.clone()]);
    let lhs = closed_invariant(t, &sum)?.bracket;
    let rhs = &(t.d() * &closed_invariant(t, m1)?.bracket) * &closed_invariant(t, m2)?.bracket;
    Ok(lhs == rhs)
}

/// Both sides of `I_1(M) I_{2r}(M) = i_r(I_2(M)) j_r(I_r(M))` in `Q(ζ_{8r})`.
#[derive(Clone, Debug, Serialize)]
pub struct FactorizationReport {
    pub r: u32,
    pub lhs: CycloElt,
    pub rhs: CycloElt,
    pub holds: bool,
}

pub fn factorization_report(r: u32, pres: &SurgeryPresentation) -> Result<FactorizationReport> {
    let TheoryKind::OddPrime(_) = TheoryKind::classify(r)? else {
        return Err(Error::UnsupportedTheory(r));
    };
    if pres.uses_linking_matrix() {
        return Err(Error::InvalidPresentation(
            "linking-matrix patterns cannot be evaluated in the odd theories".into(),
        ));
    }
    let i1 = closed_invariant(&*theory(1)?, pres)?.i;
    let i2 = closed_invariant(&*theory(2)?, pres)?.i;
    let ir = closed_invariant(&*theory(r)?, pres)?.i;
    let ip = closed_invariant(&*theory(2 * r)?, pres)?.i;
    let lhs = i1.checked_mul(&ip)?;
    let rhs = GaloisMap::i_r(r as u64)
        .apply(&i2)?
        .checked_mul(&GaloisMap::j_r(r as u64).apply(&ir)?)?;
    Ok(FactorizationReport {
        r,
        holds: lhs == rhs,
        lhs,
        rhs,
    })
}

pub fn factorization_check(r: u32, pres: &SurgeryPresentation) -> Result<bool> {
    Ok(factorization_report(r, pres)?.holds)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(p: u32) -> std::sync::Arc<TheoryParams> {
        theory(p).unwrap()
    }

    #[test]
    fn empty_and_hopf() {
        let six = t(6);
        assert!(colored_bracket(&six, &SurgeryPresentation::empty(), &[])
            .unwrap()
            .is_one());
        let hopf = SurgeryPresentation::twisted_pair(1, [0, 0], [Role::Banded(1), Role::Banded(1)]);
        let v = colored_bracket_indices(&six, &hopf, &[1, 1]).unwrap();
        let expect = [6, 2, -2, -6]
            .iter()
            .fold(CycloElt::zero(24), |s, &k| &s + &six.a_pow(k));
        assert_eq!(v, expect);
        assert_eq!(v, six.hopf_coefficient(1, 1));
        let clasp = SurgeryPresentation::chain(vec![0, 0], vec![Role::Banded(1); 2]);
        assert_eq!(colored_bracket_indices(&six, &clasp, &[1, 1]).unwrap(), v);
    }

    #[test]
    fn two_theory_values() {
        let two = t(2);
        let chain = SurgeryPresentation::chain(
            vec![0, 0, 0],
            vec![Role::Banded(1), Role::Surgery, Role::Banded(1)],
        );
        let link = colored_bracket(&two, &chain, &role_colors(&two, &chain).unwrap()).unwrap();
        assert_eq!(
            link,
            CycloElt::from_int(8, 8)
                .checked_div(&CycloElt::sqrt2(8))
                .unwrap()
        );
        assert_eq!(
            closed_invariant(&two, &chain).unwrap().bracket,
            CycloElt::from_int(8, 4)
        );
        assert!(closed_invariant(&two, &SurgeryPresentation::lens(0))
            .unwrap()
            .bracket
            .is_one());
        let s3 = closed_invariant(&two, &SurgeryPresentation::empty()).unwrap();
        assert_eq!(s3.bracket, CycloElt::sqrt2(8).inv().unwrap());
        assert!(s3.i.is_one());
    }

    #[test]
    fn circle_times_sphere_theta() {
        for p in [2, 5, 6] {
            let th = t(p);
            let r = closed_invariant(&th, &SurgeryPresentation::lens(0)).unwrap();
            assert_eq!(r.beta1, 1);
            assert!(r.bracket.is_one(), "p={p}");
            assert_eq!(r.theta, r.i);
        }
    }

    #[test]
    fn slam_dunk_and_blow_down() {
        // Hopf link with framings (k, 0) is S³; with (k, ±1) it is the (k ∓ 1)-framed unknot
        for p in [2u32, 3, 5, 6, 10] {
            let th = t(p);
            let s3 = closed_invariant(&th, &SurgeryPresentation::empty())
                .unwrap()
                .bracket;
            for k in -3..=3 {
                let hopf = SurgeryPresentation::twisted_pair(1, [k, 0], [Role::Surgery; 2]);
                assert_eq!(
                    closed_invariant(&th, &hopf).unwrap().bracket,
                    s3,
                    "p={p} k={k}"
                );
                for e in [-1, 1] {
                    let pair = SurgeryPresentation::twisted_pair(1, [k, e], [Role::Surgery; 2]);
                    let lens = SurgeryPresentation::lens(k - e);
                    assert_eq!(
                        closed_invariant(&th, &pair).unwrap().bracket,
                        closed_invariant(&th, &lens).unwrap().bracket,
                        "p={p} k={k} e={e}"
                    );
                }
            }
        }
    }

    #[test]
    fn pairing_values() {
        let two = t(2);
        let one = SkeinVector::basis(&two, 0).unwrap();
        let z = SkeinVector::basis(&two, 1).unwrap();
        assert!(torus_bracket_pairing(&two, &one, &one).unwrap().is_one());
        assert!(torus_bracket_pairing(&two, &one, &z).unwrap().is_zero());
        assert_eq!(
            torus_bracket_pairing(&two, &z, &z).unwrap(),
            CycloElt::from_int(8, 4)
        );
        let six = t(6);
        for i in 0..six.rank() as u32 {
            let ei = SkeinVector::basis(&six, i).unwrap();
            for j in 0..six.rank() as u32 {
                let ej = SkeinVector::basis(&six, j).unwrap();
                let v = torus_pairing(&six, &ei, &ej).unwrap();
                if i == j {
                    assert!(v.is_associate(six.d()));
                } else {
                    assert!(v.is_zero());
                }
            }
        }
    }

    #[test]
    fn linking_matrix_restrictions() {
        let lm = SurgeryPresentation::LinkingMatrix {
            matrix: vec![vec![1]],
            roles: vec![Role::Surgery],
        };
        assert!(matches!(
            closed_invariant(&t(5), &lm),
            Err(Error::InvalidPresentation(_))
        ));
        let two = t(2);
        assert_eq!(
            closed_invariant(&two, &lm).unwrap(),
            closed_invariant(&two, &SurgeryPresentation::lens(1)).unwrap()
        );
        assert!(factorization_check(3, &lm).is_err());
    }

    #[test]
    fn connected_sums() {
        let two = t(2);
        let s3 = SurgeryPresentation::empty();
        let s1s2 = SurgeryPresentation::lens(0);
        let l1 = SurgeryPresentation::lens(1);
        assert!(connected_sum_check(&two, &s3, &s3).unwrap());
        assert!(connected_sum_check(&two, &s1s2, &s3).unwrap());
        assert!(connected_sum_check(&two, &l1, &l1).unwrap());
    }

    #[test]
    fn factorization_small() {
        assert!(factorization_check(3, &SurgeryPresentation::empty()).unwrap());
        for k in 1..=8 {
            assert!(
                factorization_check(3, &SurgeryPresentation::lens(k)).unwrap(),
                "k={k}"
            );
        }
        let tp = SurgeryPresentation::twisted_pair(2, [0, 3], [Role::Surgery; 2]);
        assert!(factorization_check(5, &tp).unwrap());
    }
}
