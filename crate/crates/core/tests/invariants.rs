use skein_core::invariant::{
    closed_invariant, colored_bracket, colored_bracket_indices, connected_sum_check,
    factorization_check, torus_bracket_pairing, torus_pairing,
};
use skein_core::{theory, CycloElt, Role, SkeinVector, SurgeryPresentation};

#[test]
fn link_brackets() {
    let six = theory(6).unwrap();
    assert!(colored_bracket(&six, &SurgeryPresentation::empty(), &[])
        .unwrap()
        .is_one());
    let hopf = SurgeryPresentation::twisted_pair(1, [0, 0], [Role::Surgery; 2]);
    let a = six.a();
    let want = [6, 2, -2, -6]
        .iter()
        .fold(CycloElt::zero(six.level()), |s, &k| &s + &a.pow(k));
    assert_eq!(colored_bracket_indices(&six, &hopf, &[1, 1]).unwrap(), want);
    assert_eq!(want, six.hopf_coefficient(1, 1));

    let two = theory(2).unwrap();
    let chain = SurgeryPresentation::chain(vec![0, 0, 0], vec![Role::Surgery; 3]);
    let z = SkeinVector::basis(&two, 1).unwrap();
    let got = colored_bracket(&two, &chain, &[z.clone(), two.omega(), z]).unwrap();
    assert_eq!(
        got,
        CycloElt::from_int(8, 8)
            .checked_div(&CycloElt::sqrt2(8))
            .unwrap()
    );
}

#[test]
fn closed_manifolds() {
    for p in [1, 2, 3, 5, 6, 7, 10] {
        let t = theory(p).unwrap();
        let s3 = closed_invariant(&t, &SurgeryPresentation::empty()).unwrap();
        assert_eq!(s3.bracket, t.d().inv().unwrap(), "p={p}");
        assert!(s3.i.is_one());
    }
    let two = theory(2).unwrap();
    assert!(closed_invariant(&two, &SurgeryPresentation::lens(0))
        .unwrap()
        .bracket
        .is_one());
    let zz = SurgeryPresentation::chain(
        vec![0, 0, 0],
        vec![Role::Banded(1), Role::Surgery, Role::Banded(1)],
    );
    let r = closed_invariant(&two, &zz).unwrap();
    assert_eq!(r.bracket, CycloElt::from_int(8, 4));
    assert_eq!(r.beta1, 1);
}

#[test]
fn torus_pairings() {
    let two = theory(2).unwrap();
    let one = SkeinVector::basis(&two, 0).unwrap();
    let z = SkeinVector::basis(&two, 1).unwrap();
    assert!(torus_bracket_pairing(&two, &one, &z).unwrap().is_zero());
    assert!(torus_bracket_pairing(&two, &z, &one).unwrap().is_zero());
    assert_eq!(
        torus_bracket_pairing(&two, &z, &z).unwrap(),
        CycloElt::from_int(8, 4)
    );
    let six = theory(6).unwrap();
    for i in 0..2 {
        for j in 0..2 {
            let v = torus_pairing(
                &six,
                &SkeinVector::basis(&six, i).unwrap(),
                &SkeinVector::basis(&six, j).unwrap(),
            )
            .unwrap();
            if i == j {
                assert!(v.is_associate(six.d()));
            } else {
                assert!(v.is_zero());
            }
        }
    }
}

#[test]
fn connected_sums() {
    let s3 = SurgeryPresentation::empty();
    let s1s2 = SurgeryPresentation::lens(0);
    let l1 = SurgeryPresentation::lens(1);
    for p in [2, 3, 6] {
        let t = theory(p).unwrap();
        assert!(connected_sum_check(&t, &s3, &s3).unwrap());
        assert!(connected_sum_check(&t, &s1s2, &s3).unwrap());
        assert!(connected_sum_check(&t, &l1, &l1).unwrap());
    }
}

#[test]
fn prime_factorization_of_invariants() {
    assert!(factorization_check(3, &SurgeryPresentation::empty()).unwrap());
    for k in 1..=8 {
        assert!(
            factorization_check(3, &SurgeryPresentation::lens(k)).unwrap(),
            "L({k})"
        );
    }
    let pair = SurgeryPresentation::twisted_pair(2, [0, 3], [Role::Surgery; 2]);
    assert!(factorization_check(5, &pair).unwrap());
}

#[test]
fn rejected_inputs() {
    let five = theory(5).unwrap();
    let matrix = SurgeryPresentation::LinkingMatrix {
        matrix: vec![vec![0, 1], vec![1, 0]],
        roles: vec![Role::Surgery; 2],
    };
    assert!(closed_invariant(&five, &matrix).is_err());
    let cyclic = SurgeryPresentation::ChainForest {
        framings: vec![0, 0, 0],
        edges: vec![(0, 1, 1), (1, 2, 1), (2, 0, 1)],
        roles: vec![Role::Surgery; 3],
    };
    assert!(closed_invariant(&five, &cyclic).is_err());
    let over = SurgeryPresentation::unknot(0, Role::Banded(9));
    assert!(closed_invariant(&five, &over).is_err());
}

#[test]
fn presentation_json() {
    let text = r#"{"pattern":"twisted_pair","linking":2,"framings":[0,3],"roles":["surgery",{"banded":1}]}"#;
    let p: SurgeryPresentation = serde_json::from_str(text).unwrap();
    assert_eq!(
        p,
        SurgeryPresentation::twisted_pair(2, [0, 3], [Role::Surgery, Role::Banded(1)])
    );
    let back: SurgeryPresentation =
        serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
    assert_eq!(back, p);
}
