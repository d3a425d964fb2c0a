//! Sparse integer polynomials, symbolic determinants and Pfaffians, and the
//! three determinantal identities for the Klein quartic and cubic.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsePoly {
    pub vars: Vec<String>,
    /// exponent vector -> nonzero coefficient
    pub terms: BTreeMap<Vec<u32>, i64>,
}

impl SparsePoly {
    pub fn zero(vars: &[&str]) -> SparsePoly {
        SparsePoly { vars: vars.iter().map(|s| s.to_string()).collect(), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &[&str], c: i64) -> SparsePoly {
        let mut p = SparsePoly::zero(vars);
        if c != 0 {
            p.terms.insert(vec![0; vars.len()], c);
        }
        p
    }

    pub fn var(vars: &[&str], name: &str) -> Result<SparsePoly> {
        let i = vars.iter().position(|v| *v == name).ok_or_else(|| Error::UnknownVariable(name.into()))?;
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        let mut p = SparsePoly::zero(vars);
        p.terms.insert(e, 1);
        Ok(p)
    }

    fn empty_like(&self) -> SparsePoly {
        SparsePoly { vars: self.vars.clone(), terms: BTreeMap::new() }
    }

    fn add_term(&mut self, e: Vec<u32>, c: i64) {
        if c == 0 {
            return;
        }
        let slot = self.terms.entry(e.clone()).or_insert(0);
        *slot += c;
        if *slot == 0 {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &SparsePoly) -> SparsePoly {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), *c);
        }
        r
    }

    pub fn scale(&self, s: i64) -> SparsePoly {
        let mut r = self.empty_like();
        for (e, c) in &self.terms {
            r.add_term(e.clone(), c * s);
        }
        r
    }

    pub fn neg(&self) -> SparsePoly {
        self.scale(-1)
    }

    pub fn sub(&self, o: &SparsePoly) -> SparsePoly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &SparsePoly) -> SparsePoly {
        let mut r = self.empty_like();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                r.add_term(e, c1 * c2);
            }
        }
        r
    }

    pub fn derivative(&self, name: &str) -> Result<SparsePoly> {
        let i = self.vars.iter().position(|v| v == name).ok_or_else(|| Error::UnknownVariable(name.into()))?;
        let mut r = self.empty_like();
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut e2 = e.clone();
                e2[i] -= 1;
                r.add_term(e2, c * e[i] as i64);
            }
        }
        Ok(r)
    }

    pub fn eval(&self, point: &[i64]) -> i128 {
        self.terms
            .iter()
            .map(|(e, c)| e.iter().zip(point).fold(*c as i128, |acc, (k, x)| acc * (*x as i128).pow(*k)))
            .sum()
    }

    /// Monomials as display strings with their coefficients.
    pub fn monomials(&self) -> Vec<(String, i64)> {
        self.terms.iter().map(|(e, c)| (self.monomial_name(e), *c)).collect()
    }

    fn monomial_name(&self, e: &[u32]) -> String {
        let parts: Vec<String> = e
            .iter()
            .zip(&self.vars)
            .filter(|(k, _)| **k > 0)
            .map(|(k, v)| if *k == 1 { v.clone() } else { format!("{v}^{k}") })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // highest total degree first, then lexicographic by variable order
        let mut terms: Vec<(&Vec<u32>, &i64)> = self.terms.iter().collect();
        terms.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            db.cmp(&da).then(b.0.cmp(a.0))
        });
        for (i, (e, c)) in terms.iter().enumerate() {
            let m = self.monomial_name(e);
            let mag = c.abs();
            let sign = if **c < 0 { "-" } else if i > 0 { "+" } else { "" };
            let sep = if i > 0 { " " } else { "" };
            let sp = if i > 0 { " " } else { "" };
            let body = match (mag, m.as_str()) {
                (_, "1") => mag.to_string(),
                (1, _) => m,
                _ => format!("{mag}*{m}"),
            };
            write!(f, "{sep}{sign}{sp}{body}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    pub entries: Vec<Vec<SparsePoly>>,
}

impl PolyMatrix {
    /// Entries given as signed variable names ("x", "-x") or integer literals.
    pub fn from_names(vars: &[&str], rows: &[&[&str]]) -> Result<PolyMatrix> {
        let entries = rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|s| {
                        let (sign, name) = match s.strip_prefix('-') {
                            Some(rest) => (-1, rest),
                            None => (1, *s),
                        };
                        match name.parse::<i64>() {
                            Ok(c) => Ok(SparsePoly::constant(vars, sign * c)),
                            Err(_) => Ok(SparsePoly::var(vars, name)?.scale(sign)),
                        }
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PolyMatrix { entries })
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    fn check_square(&self) -> Result<usize> {
        let n = self.size();
        if self.entries.iter().any(|r| r.len() != n) {
            return Err(Error::NotSquare);
        }
        Ok(n)
    }

    pub fn is_antisymmetric(&self) -> bool {
        let n = self.size();
        (0..n).all(|i| (0..n).all(|j| self.entries[i][j].add(&self.entries[j][i]).is_zero()))
    }

    pub fn eval(&self, point: &[i64]) -> Vec<Vec<i128>> {
        self.entries.iter().map(|r| r.iter().map(|p| p.eval(point)).collect()).collect()
    }

    pub fn scale(&self, s: i64) -> PolyMatrix {
        PolyMatrix { entries: self.entries.iter().map(|r| r.iter().map(|p| p.scale(s)).collect()).collect() }
    }
}

/// Laplace expansion along rows, memoized on the set of remaining columns.
pub fn det_expand(m: &PolyMatrix) -> Result<SparsePoly> {
    let n = m.check_square()?;
    if n == 0 {
        return Err(Error::NotSquare);
    }
    let vars: Vec<&str> = m.entries[0][0].vars.iter().map(|s| s.as_str()).collect();
    let mut memo: HashMap<u32, SparsePoly> = HashMap::new();
    fn go(m: &PolyMatrix, cols: u32, n: usize, vars: &[&str], memo: &mut HashMap<u32, SparsePoly>) -> SparsePoly {
        if cols == 0 {
            return SparsePoly::constant(vars, 1);
        }
        if let Some(v) = memo.get(&cols) {
            return v.clone();
        }
        let row = n - cols.count_ones() as usize;
        let mut acc = SparsePoly::zero(vars);
        let mut pos = 0;
        for j in 0..n {
            if cols & (1 << j) == 0 {
                continue;
            }
            let a = &m.entries[row][j];
            if !a.is_zero() {
                let minor = go(m, cols & !(1 << j), n, vars, memo);
                let term = a.mul(&minor);
                acc = if pos % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
            }
            pos += 1;
        }
        memo.insert(cols, acc.clone());
        acc
    }
    Ok(go(m, (1u32 << n) - 1, n, &vars, &mut memo))
}

/// Pfaffian by first-row expansion, normalized so Pf([[0,1],[-1,0]]) = 1.
/// Panics if Pf^2 != det, which would be an internal error.
pub fn pfaffian_expand(m: &PolyMatrix) -> Result<SparsePoly> {
    let n = m.check_square()?;
    if n % 2 == 1 {
        return Err(Error::OddDimension);
    }
    if !m.is_antisymmetric() {
        return Err(Error::NotAntisymmetric);
    }
    let vars: Vec<&str> = m.entries.first().map_or(vec![], |r| r[0].vars.iter().map(|s| s.as_str()).collect());
    fn go(m: &PolyMatrix, idx: &[usize], vars: &[&str]) -> SparsePoly {
        if idx.is_empty() {
            return SparsePoly::constant(vars, 1);
        }
        let mut acc = SparsePoly::zero(vars);
        for k in 1..idx.len() {
            let a = &m.entries[idx[0]][idx[k]];
            if a.is_zero() {
                continue;
            }
            let rest: Vec<usize> = idx.iter().enumerate().filter(|(i, _)| *i != 0 && *i != k).map(|(_, &v)| v).collect();
            let term = a.mul(&go(m, &rest, vars));
            acc = if k % 2 == 1 { acc.add(&term) } else { acc.sub(&term) };
        }
        acc
    }
    if n == 0 {
        return Err(Error::NotSquare);
    }
    let idx: Vec<usize> = (0..n).collect();
    let pf = go(m, &idx, &vars);
    let det = det_expand(m)?;
    assert_eq!(pf.mul(&pf), det, "Pf^2 != det");
    Ok(pf)
}

pub fn hessian(f: &SparsePoly, vars: &[&str]) -> Result<PolyMatrix> {
    let first: Vec<SparsePoly> = vars.iter().map(|v| f.derivative(v)).collect::<Result<_>>()?;
    let entries = first
        .iter()
        .map(|d| vars.iter().map(|v| d.derivative(v)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(PolyMatrix { entries })
}

/// Fraction-free (Bareiss) determinant of an integer matrix.
pub fn det_integer(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a = m.to_vec();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

fn sum_of_cubes_form(vars: &[&str], mons: &[(usize, u32, usize, u32)]) -> SparsePoly {
    let mut p = SparsePoly::zero(vars);
    for &(i, a, j, b) in mons {
        let mut e = vec![0; vars.len()];
        e[i] += a;
        e[j] += b;
        p.add_term(e, 1);
    }
    p
}

pub fn klein_quartic() -> SparsePoly {
    sum_of_cubes_form(&["x0", "x1", "x2"], &[(0, 3, 1, 1), (1, 3, 2, 1), (2, 3, 0, 1)])
}

pub fn klein_cubic() -> SparsePoly {
    let v = ["v", "w", "x", "y", "z"];
    sum_of_cubes_form(&v, &[(0, 2, 1, 1), (1, 2, 2, 1), (2, 2, 3, 1), (3, 2, 4, 1), (4, 2, 0, 1)])
}

pub fn quartic_matrix() -> PolyMatrix {
    PolyMatrix::from_names(
        &["x0", "x1", "x2"],
        &[&["-x0", "0", "0", "-x1"], &["0", "x1", "0", "-x2"], &["0", "0", "x2", "-x0"], &["-x1", "-x2", "-x0", "0"]],
    )
    .expect("fixed matrix")
}

pub fn cubic_pfaffian_matrix() -> PolyMatrix {
    PolyMatrix::from_names(
        &["v", "w", "x", "y", "z"],
        &[
            &["0", "v", "w", "x", "y", "z"],
            &["-v", "0", "0", "z", "-x", "0"],
            &["-w", "0", "0", "0", "v", "-y"],
            &["-x", "-z", "0", "0", "0", "w"],
            &["-y", "x", "-v", "0", "0", "0"],
            &["-z", "0", "y", "-w", "0", "0"],
        ],
    )
    .expect("fixed matrix")
}

pub fn cubic_hessian_display() -> PolyMatrix {
    PolyMatrix::from_names(
        &["v", "w", "x", "y", "z"],
        &[
            &["w", "v", "0", "0", "z"],
            &["v", "x", "w", "0", "0"],
            &["0", "w", "y", "x", "0"],
            &["0", "0", "x", "z", "y"],
            &["z", "0", "0", "y", "v"],
        ],
    )
    .expect("fixed matrix")
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    pub name: &'static str,
    pub claimed: String,
    pub computed: String,
    /// computed - normalization * claimed
    pub difference: String,
    pub normalization: i64,
    pub exact_match: bool,
    pub match_up_to_sign: bool,
    pub support_match: bool,
    pub unit_coefficients: bool,
    /// coefficient of each claimed monomial in the computed polynomial
    pub sign_pattern: Vec<(String, i64)>,
    pub specializations: usize,
    pub specializations_agree: bool,
}

fn compare(name: &'static str, claimed: &SparsePoly, computed: &SparsePoly, spec_ok: (usize, bool)) -> IdentityReport {
    let claimed_support: Vec<&Vec<u32>> = claimed.terms.keys().collect();
    let computed_support: Vec<&Vec<u32>> = computed.terms.keys().collect();
    let sign_pattern = claimed
        .terms
        .keys()
        .map(|e| (claimed.monomial_name(e), computed.terms.get(e).copied().unwrap_or(0)))
        .collect();
    IdentityReport {
        name,
        claimed: claimed.to_string(),
        computed: computed.to_string(),
        difference: computed.sub(claimed).to_string(),
        normalization: 1,
        exact_match: computed == claimed,
        match_up_to_sign: computed == claimed || *computed == claimed.neg(),
        support_match: claimed_support == computed_support,
        unit_coefficients: computed.terms.values().all(|c| c.abs() == 1),
        sign_pattern,
        specializations: spec_ok.0,
        specializations_agree: spec_ok.1,
    }
}

fn random_points(nvars: usize, count: usize, seed: u64) -> Vec<Vec<i64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| (0..nvars).map(|_| rng.gen_range(-9..=9)).collect()).collect()
}

/// Pfaffian of an integer antisymmetric matrix by first-row expansion.
pub fn pfaffian_integer(m: &[Vec<i128>]) -> i128 {
    pf_integer(m, &(0..m.len()).collect::<Vec<_>>())
}

fn pf_integer(m: &[Vec<i128>], idx: &[usize]) -> i128 {
    if idx.is_empty() {
        return 1;
    }
    (1..idx.len())
        .map(|k| {
            let rest: Vec<usize> = idx.iter().enumerate().filter(|(i, _)| *i != 0 && *i != k).map(|(_, &v)| v).collect();
            let s = if k % 2 == 1 { 1 } else { -1 };
            s * m[idx[0]][idx[k]] * pf_integer(m, &rest)
        })
        .sum()
}

pub fn run_identity_checks() -> Result<Vec<IdentityReport>> {
    const POINTS: usize = 24;
    let mut out = Vec::new();

    let qm = quartic_matrix();
    let det = det_expand(&qm)?;
    let pts = random_points(3, POINTS, 1);
    let ok = pts.iter().all(|x| det.eval(x) == det_integer(&qm.eval(x)));
    out.push(compare("quartic-determinant", &klein_quartic(), &det, (POINTS, ok)));

    let pm = cubic_pfaffian_matrix();
    let pf = pfaffian_expand(&pm)?;
    let pts = random_points(5, POINTS, 2);
    let ok = pts.iter().all(|x| {
        let e = pm.eval(x);
        let v = pf_integer(&e, &(0..6).collect::<Vec<_>>());
        pf.eval(x) == v && v * v == det_integer(&e)
    });
    out.push(compare("cubic-pfaffian", &klein_cubic(), &pf, (POINTS, ok)));

    let vars = ["v", "w", "x", "y", "z"];
    let h = hessian(&klein_cubic(), &vars)?;
    let shown = cubic_hessian_display();
    let scaled = shown.scale(2);
    let mut diff = Vec::new();
    for i in 0..5 {
        for j in 0..5 {
            let d = h.entries[i][j].sub(&scaled.entries[i][j]);
            if !d.is_zero() {
                diff.push(format!("({i},{j}): {d}"));
            }
        }
    }
    let render = |m: &PolyMatrix| {
        m.entries
            .iter()
            .map(|r| r.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", "))
            .collect::<Vec<_>>()
            .join("; ")
    };
    let pts = random_points(5, POINTS, 3);
    let ok = pts.iter().all(|x| {
        let a = h.eval(x);
        let b = shown.eval(x);
        (0..5).all(|i| (0..5).all(|j| a[i][j] == 2 * b[i][j]))
    });
    let exact = diff.is_empty();
    out.push(IdentityReport {
        name: "cubic-hessian",
        claimed: render(&shown),
        computed: render(&h),
        difference: if exact { "0".into() } else { diff.join("; ") },
        normalization: 2,
        exact_match: exact,
        match_up_to_sign: exact || h == shown.scale(-2),
        support_match: (0..5).all(|i| (0..5).all(|j| h.entries[i][j].terms.keys().eq(shown.entries[i][j].terms.keys()))),
        unit_coefficients: shown.entries.iter().flatten().all(|p| p.terms.values().all(|c| c.abs() == 1)),
        sign_pattern: Vec::new(),
        specializations: POINTS,
        specializations_agree: ok,
    });
    Ok(out)
}
