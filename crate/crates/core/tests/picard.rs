use modcurve::arith::primes_in;
use modcurve::chartab::HalfRole;
use modcurve::picard::*;
use modcurve::repring::{character, sum, sym_power, virtual_multiplicities, ClassFunction};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;


#[test]
fn triangle_examples() {
    let s = picard_structure(&DyckSignature::triangle(2, 3, 7).unwrap()).unwrap();
    assert!(s.torsion.is_empty());
    assert_eq!((s.n, s.canonical_exponent), (42, 1));
    let s = picard_structure(&DyckSignature::triangle(2, 3, 11).unwrap()).unwrap();
    assert_eq!(s.canonical_exponent, 5);
    let s = picard_structure(&DyckSignature::new(vec![2, 2, 2, 3]).unwrap()).unwrap();
    assert_eq!((s.torsion.clone(), s.n), (vec![2, 2], 6));
    assert!(DyckSignature::triangle(2, 3, 6).is_err());
    assert!(DyckSignature::triangle(2, 3, 5).is_err());
}

#[test]
fn smith_normal_form_oracle_on_random_signatures() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    while checked < 200 {
        let n = rng.gen_range(3..=5);
        let e: Vec<u64> = (0..n).map(|_| rng.gen_range(2..=12)).collect();
        let Ok(sig) = DyckSignature::new(e.clone()) else { continue };
        let s = picard_structure(&sig).unwrap();
        assert_eq!(s.torsion, presentation_torsion(&e), "{e:?}");
        let mut lhs = s.torsion.clone();
        lhs.push(s.n);
        assert_eq!(primary_parts(&lhs), primary_parts(&e), "{e:?}");
        checked += 1;
    }
}

#[test]
fn coprime_signatures_have_no_torsion() {
    for e in [vec![2, 3, 7], vec![2, 5, 7, 11], vec![3, 4, 5], vec![2, 3, 5, 7, 11]] {
        assert!(picard_structure(&DyckSignature::new(e).unwrap()).unwrap().torsion.is_empty());
    }
}

#[test]
fn modular_curves() {
    for p in primes_in(7, 97) {
        let s = picard_structure(&DyckSignature::triangle(2, 3, p).unwrap()).unwrap();
        assert_eq!(s.canonical_exponent, p as i64 - 6);
        let m = modular_data(p).unwrap();
        assert_eq!(m.deg_lambda, (p * p - 1) / 24);
        assert_eq!(m.canonical_exponent_2p_minus_12 * m.deg_lambda as i64, m.deg_canonical);
        // generator gamma of degree (p^2-1)/12 times p-6 is K
        assert_eq!(s.canonical_exponent * ((p * p - 1) / 12) as i64, m.deg_canonical);
        let g = genus(&DyckSignature::triangle(2, 3, p).unwrap(), m.group_order).unwrap();
        assert_eq!(g, m.genus);
    }
    let m7 = modular_data(7).unwrap();
    assert_eq!((m7.genus, m7.deg_lambda, m7.embedding_degrees), (3, 2, Some((4, 6))));
    let m11 = modular_data(11).unwrap();
    assert_eq!((m11.genus, m11.deg_lambda, m11.embedding_degrees), (26, 5, Some((20, 25))));
    assert_eq!(embedding_degrees(13), (35, 42));
    assert_eq!(genus(&DyckSignature::triangle(2, 3, 13).unwrap(), 1092).unwrap(), 50);
    let m5 = modular_data(5).unwrap();
    assert!(m5.degenerate);
    assert_eq!((m5.genus, m5.deg_lambda), (0, 1));
    assert!(modular_data(9).is_err());
    assert!(!modular_data(7).unwrap().invariant_divisor.agrees);
    assert_eq!(modular_data(7).unwrap().invariant_divisor.representative_degree, -5 * 7 * 48 / 12);
}

#[test]
fn riemann_roch_examples() {
    assert_eq!(rr_dimension(7, 7).unwrap(), 12);
    assert_eq!(rr_dimension(7, 5).unwrap(), 8);
    assert_eq!(rr_dimension(7, 2).unwrap(), 3);
    assert!(rr_dimension(7, 1).is_err());
}

#[test]
fn sections_of_lambda_powers() {
    let c = SectionCalculator::new(7).unwrap();
    let vm = c.sl.irreps[c.sl.role_index(HalfRole::Minus)].name.clone();
    let vp = c.sl.irreps[c.sl.role_index(HalfRole::Plus)].name.clone();
    assert_eq!(c.section(5).unwrap().decomposition.to_string(), "V8'");
    assert_eq!(c.section(2).unwrap().decomposition.to_string(), vm);
    let s7 = c.section(7).unwrap().decomposition.as_map();
    assert_eq!(s7.len(), 2);
    assert_eq!((s7[&vp], s7["V8'"]), (1, 1));
    let s9 = c.section(9).unwrap().decomposition.as_map();
    assert_eq!((s9[&vp], s9["V6'"], s9["V6'*"], s9.len()), (1, 1, 1, 3));
    let c11 = SectionCalculator::new(11).unwrap();
    let s = c11.section(10).unwrap().decomposition.as_map();
    let vm11 = c11.sl.irreps[c11.sl.role_index(HalfRole::Minus)].name.clone();
    assert_eq!((s[&vm11], s["V10"], s["V11"], s.len()), (1, 1, 1, 3));
}

#[test]
fn section_dimensions_match_riemann_roch() {
    for p in primes_in(7, 31) {
        let c = SectionCalculator::new(p).unwrap();
        for a in 0..=20 {
            let Ok(rr) = rr_dimension(p, a) else {
                assert!(c.section(a).is_err());
                continue;
            };
            assert_eq!(c.section(a).unwrap().dimension as i64, rr, "p={p} a={a}");
        }
    }
}

#[test]
fn even_powers_follow_symmetric_algebra_of_canonical_sections() {
    // H^0(lambda^{2n}) = S^n W - S^{n-4} W with W = H^0(lambda^2) at p = 7
    let c = SectionCalculator::new(7).unwrap();
    let t = &c.psl;
    let w_parts = c.section(2).unwrap().decomposition;
    assert_eq!(w_parts.parts.len(), 1);
    let w = character(t, w_parts.parts[0].0);
    for n in 2..=15usize {
        let mut expected: ClassFunction = sym_power(t, &w, n);
        if n >= 4 {
            expected = sum(t, &expected, &sym_power(t, &w, n - 4), -1).unwrap();
        }
        let got = c.section(2 * n as i64).unwrap();
        let mults = virtual_multiplicities(t, &expected).unwrap();
        let got_mults: Vec<i128> =
            (0..t.irreps.len()).map(|i| got.decomposition.parts.iter().find(|x| x.0 == i).map_or(0, |x| x.2 as i128)).collect();
        assert_eq!(mults, got_mults, "n={n}");
        let binom = |m: i64| if m < 0 { 0 } else { (m + 1) * (m + 2) / 2 };
        assert_eq!(got.dimension as i64, binom(n as i64) - binom(n as i64 - 4));
    }
}
