use modcurve::poly::*;
use proptest::prelude::*;

fn constant_matrix(m: &[Vec<i64>]) -> PolyMatrix {
    PolyMatrix { entries: m.iter().map(|r| r.iter().map(|&c| SparsePoly::constant(&["t"], c)).collect()).collect() }
}

/// Leibniz formula, independent of the expansion code.
fn det_permutations(m: &[Vec<i128>]) -> i128 {
    fn perms(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in perms(n - 1) {
            for i in 0..n {
                let mut q = p.clone();
                q.insert(i, n - 1);
                out.push(q);
            }
        }
        out
    }
    perms(m.len())
        .into_iter()
        .map(|p| {
            let inversions = (0..p.len()).flat_map(|i| (i + 1..p.len()).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
            let s = if inversions % 2 == 0 { 1 } else { -1 };
            s * (0..p.len()).map(|i| m[i][p[i]]).product::<i128>()
        })
        .sum()
}

#[test]
fn small_determinants_and_pfaffians() {
    let vars = ["x0", "x1", "x2", "x3"];
    let one = PolyMatrix::from_names(&vars, &[&["x0"]]).unwrap();
    assert_eq!(det_expand(&one).unwrap().to_string(), "x0");
    let d = PolyMatrix::from_names(
        &vars,
        &[&["x0", "0", "0", "0"], &["0", "x1", "0", "0"], &["0", "0", "x2", "0"], &["0", "0", "0", "x3"]],
    )
    .unwrap();
    assert_eq!(det_expand(&d).unwrap().to_string(), "x0*x1*x2*x3");
    let j = PolyMatrix::from_names(&["t"], &[&["0", "1"], &["-1", "0"]]).unwrap();
    assert_eq!(pfaffian_expand(&j).unwrap().to_string(), "1");
    let jj = constant_matrix(&[vec![0, 1, 0, 0], vec![-1, 0, 0, 0], vec![0, 0, 0, 1], vec![0, 0, -1, 0]]);
    assert_eq!(pfaffian_expand(&jj).unwrap().to_string(), "1");
    assert!(matches!(pfaffian_expand(&constant_matrix(&[vec![0, 1, 2], vec![-1, 0, 3], vec![-2, -3, 0]])), Err(_)));
    assert!(pfaffian_expand(&constant_matrix(&[vec![0, 1], vec![1, 0]])).is_err());
    assert!(det_expand(&PolyMatrix { entries: vec![vec![SparsePoly::constant(&["t"], 1); 2]] }).is_err());
}

#[test]
fn hessians() {
    let x2 = SparsePoly::var(&["x"], "x").unwrap();
    let h = hessian(&x2.mul(&x2), &["x"]).unwrap();
    assert_eq!(h.entries[0][0].to_string(), "2");
    let vars = ["x", "y"];
    let xy = SparsePoly::var(&vars, "x").unwrap().mul(&SparsePoly::var(&vars, "y").unwrap());
    let h = hessian(&xy, &vars).unwrap();
    let s: Vec<String> = h.entries.iter().flatten().map(|p| p.to_string()).collect();
    assert_eq!(s, ["0", "1", "1", "0"]);
    assert!(hessian(&xy, &["q"]).is_err());
    let h = hessian(&klein_cubic(), &["v", "w", "x", "y", "z"]).unwrap();
    for i in 0..5 {
        for j in 0..5 {
            assert_eq!(h.entries[i][j], h.entries[j][i]);
        }
    }
}

#[test]
fn identity_reports() {
    let r = run_identity_checks().unwrap();
    assert_eq!(r.len(), 3);
    let det = &r[0];
    assert!(det.support_match && det.unit_coefficients && det.specializations_agree);
    assert_eq!(det.computed, "x0^3*x1 + x0*x2^3 - x1^3*x2");
    let pf = &r[1];
    assert!(pf.support_match && pf.unit_coefficients && pf.match_up_to_sign && pf.specializations_agree);
    assert!(pf.sign_pattern.iter().all(|(_, c)| *c == -1));
    let h = &r[2];
    assert!(h.exact_match && h.normalization == 2 && h.specializations_agree);
    assert_eq!(h.difference, "0");
}

#[test]
fn quartic_determinant_matches_leibniz() {
    let m = quartic_matrix();
    let d = det_expand(&m).unwrap();
    for x in [[1, 2, 3], [-4, 7, 0], [5, -1, -2]] {
        assert_eq!(d.eval(&x), det_permutations(&m.eval(&x)));
    }
    let pm = cubic_pfaffian_matrix();
    let det6 = det_expand(&pm).unwrap();
    let pf = pfaffian_expand(&pm).unwrap();
    assert_eq!(det6, pf.mul(&pf));
    assert_eq!(det6, klein_cubic().mul(&klein_cubic()));
}

fn antisymmetric(n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    proptest::collection::vec(-5i64..=5, n * (n - 1) / 2).prop_map(move |v| {
        let mut m = vec![vec![0; n]; n];
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                m[i][j] = v[k];
                m[j][i] = -v[k];
                k += 1;
            }
        }
        m
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]
    #[test]
    fn pfaffian_squares_to_determinant(m in (1usize..=4).prop_flat_map(|h| antisymmetric(2 * h))) {
        let pm = constant_matrix(&m);
        let pf = pfaffian_expand(&pm).unwrap();
        let wide: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
        let d = det_integer(&wide);
        prop_assert_eq!(pf.eval(&[0]) * pf.eval(&[0]), d);
        prop_assert_eq!(det_expand(&pm).unwrap().eval(&[0]), d);
    }

    #[test]
    fn bareiss_matches_leibniz(v in proptest::collection::vec(-20i64..=20, 25)) {
        let m: Vec<Vec<i128>> = v.chunks(5).map(|r| r.iter().map(|&x| x as i128).collect()).collect();
        prop_assert_eq!(det_integer(&m), det_permutations(&m));
    }
}
