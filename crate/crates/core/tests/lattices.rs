use skein_core::lattice::{self, parity_shift, BasisFamily, FamilyKind};
use skein_core::{theory, CycloElt};

#[test]
fn parity_shifts() {
    assert_eq!(parity_shift(0, 6), 0);
    assert_eq!(parity_shift(1, 6), 0);
    assert_eq!(parity_shift(2, 10), 1);
    for p in [6, 10, 14, 22] {
        for i in 0..2 * p {
            let e = i + parity_shift(i, p) * p;
            if e % 2 == 0 {
                assert_eq!(e % 4, 0);
            }
        }
    }
}

#[test]
fn basis_matrices() {
    let two = theory(2).unwrap();
    let s = CycloElt::sqrt2(8);
    let inv = s.inv().unwrap();
    let half = (&s * &CycloElt::from_int(8, 2)).inv().unwrap();
    let m = lattice::basis_matrix(&two, &BasisFamily::torus(FamilyKind::TwoTheoryTorus)).unwrap();
    assert_eq!(
        m,
        vec![
            vec![inv.clone(), half.clone()],
            vec![inv, &half * &CycloElt::root(8, 2)]
        ]
    );

    let six = theory(6).unwrap();
    let m = lattice::basis_matrix(&six, &BasisFamily::torus(FamilyKind::FirstSu2)).unwrap();
    let dinv = six.d().inv().unwrap();
    for j in 0..2 {
        for i in 0..2u32 {
            let want = &(&dinv * &six.loop_value(i).unwrap()) * &six.twist_mu(i).pow(j as i64);
            assert_eq!(m[j][i as usize], want);
        }
    }

    let three = theory(3).unwrap();
    let m = lattice::basis_matrix(&three, &BasisFamily::torus(FamilyKind::So3Even)).unwrap();
    assert_eq!(m.len(), 1);
    assert_eq!(m[0][0], three.omega_coefficients()[0]);
}

#[test]
fn gram_reports() {
    let two = theory(2).unwrap();
    let g1 = lattice::gram_and_unimodularity(&two, &BasisFamily::torus(FamilyKind::TwoTheoryTorus))
        .unwrap();
    assert!(g1.hermitian && g1.det_is_unit);
    let g2 = lattice::gram_and_unimodularity(&two, &BasisFamily::genus(2)).unwrap();
    assert_eq!(g2.gram, lattice::kron_power(&g1.gram, 2, 8));
    let six = theory(6).unwrap();
    assert!(
        lattice::gram_and_unimodularity(&six, &BasisFamily::torus(FamilyKind::FirstSu2))
            .unwrap()
            .det_is_unit
    );
    assert!(
        lattice::gram_and_unimodularity(&six, &BasisFamily::torus(FamilyKind::So3Even)).is_err()
    );
}

#[test]
fn det_w_classes() {
    let six = theory(6).unwrap();
    let r3 = lattice::det_w_report(&six).unwrap();
    assert!(r3.det_w.is_associate(&six.sqrt2().inv().unwrap()));
    let ten = theory(10).unwrap();
    let r5 = lattice::det_w_report(&ten).unwrap();
    let one = CycloElt::one(ten.level());
    let want = &ten.sqrt2().pow(-2) * &(&one + &ten.alpha_pow(4)).pow(-2);
    assert!(r5.det_w.is_associate(&want));
    let unit = &r3.det_w * &six.sqrt2();
    for &u in unit.level_data().galois_residues() {
        assert!((unit.to_complex_at(u as i64).norm() - 1.0).abs() < 1e-9);
    }
}

#[test]
fn so3_checks() {
    for r in [3, 5, 7] {
        let t = theory(r).unwrap();
        for odd in [false, true] {
            let rep = lattice::so3_basis_check(&t, odd).unwrap();
            assert!(rep.passes(), "r={r}: {rep:?}");
        }
    }
    let three = theory(3).unwrap();
    let w = lattice::basis_matrix(&three, &BasisFamily::torus(FamilyKind::So3Odd)).unwrap();
    assert!(w[0][0].is_associate(&three.d().inv().unwrap()));
}

#[test]
fn family_names() {
    assert_eq!(
        "first_su2".parse::<FamilyKind>().unwrap(),
        FamilyKind::FirstSu2
    );
    assert_eq!("SO3_ODD".parse::<FamilyKind>().unwrap(), FamilyKind::So3Odd);
    assert!("third".parse::<FamilyKind>().is_err());
    assert_eq!(FamilyKind::SecondSu2.to_string(), "SECOND_SU2");
}
