use modcurve::arith::primes_in;
use modcurve::chartab::*;
use modcurve::cyclo::Cyclo;
use modcurve::group::{build_group, Variant};

fn table(p: u64, v: Variant) -> CharacterTable {
    character_table(&build_group(p, v).unwrap()).unwrap()
}

#[test]
fn orthogonality_all_primes() {
    for p in primes_in(5, 97) {
        for v in [Variant::SL2, Variant::PSL2] {
            let t = table(p, v);
            let r = verify_orthogonality(&t);
            assert!(r.holds(), "p={p} {v:?}: {r:?}");
        }
    }
}

#[test]
fn sl27_degrees_and_names() {
    let t = table(7, Variant::SL2);
    let mut d = t.degrees();
    d.sort();
    assert_eq!(d, vec![1, 3, 3, 4, 4, 6, 6, 6, 7, 8, 8]);
    let mut names: Vec<&str> = t.irreps.iter().map(|r| r.name.as_str()).collect();
    names.sort();
    assert_eq!(names, vec!["V1", "V3", "V3*", "V4", "V4*", "V6", "V6'", "V6'*", "V7", "V8", "V8'"]);
    assert_eq!(t.irreps[t.role_index(HalfRole::Minus)].name, "V3");
    assert_eq!(t.irreps[t.role_index(HalfRole::Plus)].name, "V4");
    let v3 = t.index_of("V3").unwrap();
    assert_eq!(t.irreps[t.irreps[v3].dual_index].name, "V3*");
    // V6' and V6'* are real, hence self-dual
    let v6p = t.index_of("V6'").unwrap();
    assert_eq!(t.irreps[v6p].dual_index, v6p);
}

#[test]
fn psl11_has_10_and_11() {
    let t = table(11, Variant::PSL2);
    let d = t.degrees();
    assert!(d.contains(&10) && d.contains(&11));
    assert!(t.index_of("V10").is_ok() && t.index_of("V11").is_ok());
}

#[test]
fn central_character_and_inverse_classes() {
    for p in primes_in(5, 41) {
        let t = table(p, Variant::SL2);
        let f = &t.field;
        for (i, r) in t.irreps.iter().enumerate() {
            let central = t.values[i][1].as_integer().unwrap();
            assert_eq!(central.abs() as u64, r.dimension);
            assert_eq!(central < 0, !r.factors_through_psl);
            for c in 0..t.num_classes() {
                assert_eq!(t.values[i][t.inverse_class[c]], f.conj(&t.values[i][c]));
            }
        }
    }
}

#[test]
fn regular_representation_oracle() {
    for p in [5u64, 7, 11, 13] {
        for v in [Variant::SL2, Variant::PSL2] {
            let t = table(p, v);
            let m = t.regular_multiplicities_brute();
            for (i, r) in t.irreps.iter().enumerate() {
                assert_eq!(m[i], Some(r.dimension as i128), "p={p} {v:?} {}", r.name);
            }
        }
    }
}

#[test]
fn perturbed_table_is_flagged() {
    let mut t = table(7, Variant::SL2);
    t.values[2][3] = t.field.add(&t.values[2][3], &Cyclo::one());
    let r = verify_orthogonality(&t);
    assert!(!r.holds());
    assert!(r.row_violations.contains(&(2, 2)));
}

#[test]
fn psl13_orthogonal() {
    assert!(verify_orthogonality(&table(13, Variant::PSL2)).holds());
}

#[test]
fn schur() {
    assert_eq!(schur_constant(7), Ok(2));
    assert_eq!(schur_constant(11), Ok(2));
    assert_eq!(schur_constant(13), Ok(2));
    assert!(schur_constant(3).is_err());
}
