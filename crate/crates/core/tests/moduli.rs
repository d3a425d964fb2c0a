use modcurve::arith::{primes_in, six_n_eps};
use modcurve::moduli::*;
use modcurve::picard::DyckSignature;
use num_rational::Ratio;
use std::collections::BTreeSet;

const NO_EXPONENT: [u64; 10] = [13, 17, 29, 37, 41, 53, 61, 73, 89, 97];

#[test]
fn central_extension_examples() {
    let c = central_extension(&DyckSignature::triangle(2, 3, 7).unwrap()).unwrap();
    assert_eq!((c.s, c.b_i.clone(), c.b), (1, vec![1, 1, 1], 1));
    let c = central_extension(&DyckSignature::triangle(2, 3, 11).unwrap()).unwrap();
    assert_eq!((c.s, c.b_i.clone(), c.b), (5, vec![1, 2, 9], 2));
    for p in primes_in(7, 97) {
        let c = central_extension(&DyckSignature::triangle(2, 3, p).unwrap()).unwrap();
        assert_eq!(c.s, p as i64 - 6);
    }
    assert!(central_extension(&DyckSignature::new(vec![2, 4, 5]).unwrap()).is_err());
}

#[test]
fn admissibility_examples() {
    let r = |a, b| Ratio::new(a, b);
    assert!(su2_admissible([r(1, 2), r(1, 3), r(3, 7)]).unwrap());
    assert!(!su2_admissible([r(1, 2), r(1, 3), r(5, 6)]).unwrap());
    assert!(su2_admissible([r(1, 2), r(1, 2), r(999_999_999, 1_000_000_000)]).unwrap());
    assert!(!su2_admissible([r(1, 3), r(1, 3), r(2, 3)]).unwrap());
    assert!(!su2_admissible([r(1, 2), r(1, 3), r(1, 42)]).unwrap());
    assert!(su2_admissible([r(1, 2), r(0, 1), r(1, 3)]).is_err());
}

#[test]
fn census_matches_closed_form_for_all_primes() {
    for p in primes_in(7, 97) {
        let c = su2_census(p).unwrap();
        let (n, eps) = six_n_eps(p).unwrap();
        assert_eq!(c.count, 2 * n, "p={p}");
        let ks: BTreeSet<u64> = c.items.iter().map(|t| t.k).collect();
        for &k in &ks {
            if eps == 1 {
                assert!(k % 2 == 1 && n + 1 <= k && k <= 5 * n);
            } else {
                assert!(k % 2 == 0 && n <= k && k <= 5 * n - 1);
            }
        }
        assert!(c.items.iter().all(|t| t.traces.0 == 0 && t.traces.1 == eps && t.central_sign == -1));
    }
    let ks = |p| su2_census(p).unwrap().items.iter().map(|t| t.k).collect::<Vec<_>>();
    assert_eq!(ks(7), vec![3, 5]);
    assert_eq!(ks(11), vec![2, 4, 6, 8]);
    assert_eq!(ks(13), vec![3, 5, 7, 9]);
}

#[test]
fn exponents() {
    assert_eq!(exponent_of(7, 5).unwrap().a, -5);
    assert_eq!(exponent_of(7, 3).unwrap().a, -11);
    let a11: Vec<i64> = [2, 4, 6, 8].iter().map(|&k| exponent_of(11, k).unwrap().a).collect();
    assert_eq!(a11, vec![-23, -35, -41, -29]);
    for p in primes_in(7, 97) {
        let (n, eps) = six_n_eps(p).unwrap();
        let c = su2_census(p).unwrap();
        let mut seen = BTreeSet::new();
        for t in &c.items {
            match exponent_of(p, t.k) {
                Ok(s) => {
                    assert!(s.a < 0 && s.a % 2 != 0 && s.a.rem_euclid(3) == 1);
                    assert_eq!((s.a + (-s.a)) % 2, 0);
                    let r = (s.a * n as i64).rem_euclid(2 * p as i64);
                    let k = t.k as i64;
                    let m = 2 * p as i64;
                    assert!(r == (eps * k).rem_euclid(m) || r == (eps * (m - k)).rem_euclid(m));
                    // exhaustive search below |a|
                    for b in (1..-s.a).step_by(2) {
                        let rb = (-b * n as i64).rem_euclid(m);
                        assert!(
                            (-b).rem_euclid(3) != 1
                                || (rb != (eps * k).rem_euclid(m) && rb != (eps * (m - k)).rem_euclid(m))
                        );
                    }
                    assert!(seen.insert(s.a), "exponent repeated at p={p}");
                }
                Err(_) => assert!(NO_EXPONENT.contains(&p), "p={p} k={}", t.k),
            }
        }
        if NO_EXPONENT.contains(&p) {
            assert!(c.items.iter().any(|t| t.exponent_a.is_none()));
        }
    }
}

#[test]
fn isotropy_and_rank_three() {
    assert_eq!(lambda_isotropy(7).unwrap(), (1, 1, 1));
    assert_eq!(lambda_isotropy(11).unwrap(), (1, 2, 9));
    assert_eq!(lambda_isotropy(13).unwrap(), (1, 1, 2));
    for p in primes_in(7, 97) {
        let (s1, s2, s3) = lambda_isotropy(p).unwrap();
        let c = central_extension(&DyckSignature::triangle(2, 3, p).unwrap()).unwrap();
        assert_eq!(vec![s1, s2, s3], c.b_i);
        let (n, eps) = six_n_eps(p).unwrap();
        let want = if eps == 1 { 3 * n * n + n } else { 3 * n * n - n };
        assert_eq!(su3_count(p).unwrap(), want);
    }
    assert_eq!(su3_count(7).unwrap(), 4);
    assert_eq!(su3_count(11).unwrap(), 10);
    assert_eq!(su3_count(13).unwrap(), 14);
    let t = su3_exponents_p7();
    assert_eq!(t.len(), 4);
    assert!(t.iter().all(|r| r.exponents.iter().sum::<i64>() == 0));
    for (row, a) in t.iter().take(2).zip([-5i64, -11]) {
        let mut sq = [2 * a, 0, -2 * a];
        sq.sort();
        let mut ex = row.exponents;
        ex.sort();
        assert_eq!(ex, sq);
    }
}
