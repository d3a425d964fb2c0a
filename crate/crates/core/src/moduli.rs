//! Flat unitary data on the Brieskorn sphere Sigma(2,3,p): central-extension
//! constants, the SU(2) census with trace triples, exponent sequences and the
//! rank-3 count.

use num_integer::Integer;
use num_rational::Ratio;
use serde::Serialize;
use std::collections::BTreeSet;

use crate::arith;
use crate::error::{Error, Result};
use crate::picard::DyckSignature;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CentralExtensionData {
    pub signature: Vec<u64>,
    pub s: i64,
    pub b: i64,
    pub b_i: Vec<u64>,
}

pub fn central_extension(sig: &DyckSignature) -> Result<CentralExtensionData> {
    let e = &sig.e;
    for i in 0..e.len() {
        for j in i + 1..e.len() {
            if e[i].gcd(&e[j]) != 1 {
                return Err(Error::NotPerfect(e.clone()));
            }
        }
    }
    let prod: i64 = e.iter().map(|&x| x as i64).product();
    let s = sig.euler_defect() * Ratio::from_integer(prod);
    debug_assert!(s.is_integer());
    let s = s.to_integer();
    let b_i: Vec<u64> = e
        .iter()
        .map(|&ei| arith::inv_mod(s, ei as i64).map(|v| v as u64).ok_or_else(|| Error::NotPerfect(e.clone())))
        .collect::<Result<_>>()?;
    let b = e
        .iter()
        .zip(&b_i)
        .fold(Ratio::new(1, prod), |acc, (&ei, &bi)| acc + Ratio::new(bi as i64, ei as i64));
    if !b.is_integer() {
        return Err(Error::NonIntegralB);
    }
    Ok(CentralExtensionData { signature: e.clone(), s, b: b.to_integer(), b_i })
}

fn parity_sign(x: u64) -> i64 {
    if x % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Angles as rational multiples of pi. True iff A, B, C in SU(2) with these
/// eigen-angles and ABC = I exist irreducibly.
pub fn su2_admissible(angles: [Ratio<i64>; 3]) -> Result<bool> {
    let zero = Ratio::from_integer(0);
    let one = Ratio::from_integer(1);
    if angles.iter().any(|a| *a <= zero || *a >= one) {
        return Err(Error::AngleOutOfRange(format!("{angles:?}")));
    }
    let [t1, t2, t3] = angles;
    let lower = if t1 > t2 { t1 - t2 } else { t2 - t1 };
    let upper = std::cmp::min(t1 + t2, Ratio::from_integer(2) - t1 - t2);
    Ok(lower < t3 && t3 < upper)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceTriple {
    pub p: u64,
    pub epsilon: i64,
    pub n: u64,
    pub k: u64,
    /// Traces of g1, g2 (integers) and the third as 2cos(pi k / p).
    pub traces: (i64, i64, (u64, u64)),
    pub trace_third: String,
    pub central_sign: i64,
    /// Eigen-angles of g1, g2, g3 in units of pi, as in the enumeration.
    #[serde(serialize_with = "angles_as_fractions")]
    pub angles: [Ratio<i64>; 3],
    /// Whether the third generator was renormalized by the central element.
    pub renormalized: bool,
    pub exponent_a: Option<i64>,
}

fn angles_as_fractions<S: serde::Serializer>(a: &[Ratio<i64>; 3], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(3))?;
    for x in a {
        seq.serialize_element(&format!("{}/{}", x.numer(), x.denom()))?;
    }
    seq.end()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModuliCensus {
    pub p: u64,
    pub n: u64,
    pub epsilon: i64,
    pub rank: u32,
    pub count: u64,
    pub items: Vec<TraceTriple>,
}

/// The k-range rule: odd n+1..=5n for eps = 1, even n..=5n-1 for eps = -1.
pub fn closed_form_rotations(p: u64) -> Result<Vec<u64>> {
    let (n, eps) = arith::six_n_eps(p).ok_or(Error::PrimeNotSixNPlusMinusOne(p))?;
    Ok(if eps == 1 {
        (n + 1..=5 * n).filter(|k| k % 2 == 1).collect()
    } else {
        (n..=5 * n - 1).filter(|k| k % 2 == 0).collect()
    })
}

/// Raw enumeration of rotation data (l1, l2, l3, central sign) for Sigma(2,3,p).
pub fn enumerate_rotations(p: u64) -> Result<Vec<(u64, u64, u64, i64)>> {
    let sig = DyckSignature::triangle(2, 3, p)?;
    let ce = central_extension(&sig)?;
    let e = [2u64, 3, p];
    let mut out = Vec::new();
    for sign in [1i64, -1] {
        let pow = |b: u64| if sign == 1 { 1 } else { parity_sign(b) };
        for l1 in 1..e[0] {
            for l2 in 1..e[1] {
                for l3 in 1..e[2] {
                    let l = [l1, l2, l3];
                    // g_i^{e_i} = t^{b_i} forces (-1)^{l_i} = sign^{b_i}
                    if (0..3).any(|i| parity_sign(l[i]) != pow(ce.b_i[i])) {
                        continue;
                    }
                    let mut t3 = Ratio::new(l3 as i64, p as i64);
                    if pow(ce.b.rem_euclid(2) as u64) == -1 {
                        t3 = Ratio::from_integer(1) - t3;
                    }
                    let angles = [Ratio::new(l1 as i64, 2), Ratio::new(l2 as i64, 3), t3];
                    if su2_admissible(angles)? {
                        out.push((l1, l2, l3, sign));
                    }
                }
            }
        }
    }
    Ok(out)
}

pub fn su2_census(p: u64) -> Result<ModuliCensus> {
    if p < 7 {
        return Err(Error::PrimeTooSmall(p));
    }
    let (n, eps) = arith::six_n_eps(p).ok_or(Error::PrimeNotSixNPlusMinusOne(p))?;
    let ce = central_extension(&DyckSignature::triangle(2, 3, p)?)?;
    // g3 in the enumeration differs from the trace-triple normalization by t
    // exactly when b3 and b2 have different parity
    let renormalize = ce.b_i[2] % 2 != ce.b_i[1] % 2;
    let mut items = Vec::new();
    for (l1, l2, l3, sign) in enumerate_rotations(p)? {
        let k = if renormalize { p - l3 } else { l3 };
        let tr2 = if l2 == 1 { 1 } else { -1 };
        if tr2 != eps || l1 != 1 {
            return Err(Error::CensusMismatch { p, detail: format!("trace data ({l1}, {l2}) is not [0, {eps}]") });
        }
        items.push(TraceTriple {
            p,
            epsilon: eps,
            n,
            k,
            traces: (0, tr2, (k, p)),
            trace_third: format!("2cos(pi*{k}/{p})"),
            central_sign: sign,
            angles: [Ratio::new(l1 as i64, 2), Ratio::new(l2 as i64, 3), Ratio::new(l3 as i64, p as i64)],
            renormalized: renormalize,
            exponent_a: exponent_of(p, k).ok().map(|s| s.a),
        });
    }
    items.sort_by_key(|t| t.k);
    let got: BTreeSet<u64> = items.iter().map(|t| t.k).collect();
    let want: BTreeSet<u64> = closed_form_rotations(p)?.into_iter().collect();
    if got != want || items.len() != want.len() {
        return Err(Error::CensusMismatch { p, detail: format!("enumerated {got:?}, closed form {want:?}") });
    }
    if items.len() as u64 != 2 * n {
        return Err(Error::CensusMismatch { p, detail: format!("count {} != 2n = {}", items.len(), 2 * n) });
    }
    Ok(ModuliCensus { p, n, epsilon: eps, rank: 2, count: items.len() as u64, items })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExponentSolution {
    pub p: u64,
    pub k: u64,
    pub a: i64,
}

/// Smallest |a| with a < 0 odd, a = 1 mod 3 and a n = eps k or eps (2p - k) mod 2p.
pub fn exponent_of(p: u64, k: u64) -> Result<ExponentSolution> {
    let (n, eps) = arith::six_n_eps(p).ok_or(Error::PrimeNotSixNPlusMinusOne(p))?;
    let m = 2 * p as i64;
    let targets = [arith::modp(eps * k as i64, m), arith::modp(eps * (m - k as i64), m)];
    // solutions, if any, repeat with period 6p
    for abs in (1..=6 * p as i64).step_by(2) {
        let a = -abs;
        if a.rem_euclid(3) == 1 && targets.contains(&arith::modp(a * n as i64, m)) {
            return Ok(ExponentSolution { p, k, a });
        }
    }
    Err(Error::NoSolution { p, k })
}

/// Isotropy exponents of lambda at the points with stabilizers of order 2, 3, p.
pub fn lambda_isotropy(p: u64) -> Result<(u64, u64, u64)> {
    let (n, eps) = arith::six_n_eps(p).ok_or(Error::PrimeNotSixNPlusMinusOne(p))?;
    let s = (1, if eps == 1 { 1 } else { 2 }, if eps == 1 { n } else { p - n });
    let c = p as i64 - 6;
    for (si, ei) in [(s.0, 2), (s.1, 3), (s.2, p)] {
        assert_eq!(arith::modp(c * si as i64, ei as i64), 1, "isotropy congruence at e = {ei}");
    }
    Ok(s)
}

pub fn su3_count(p: u64) -> Result<u64> {
    let (n, eps) = arith::six_n_eps(p).ok_or(Error::PrimeNotSixNPlusMinusOne(p))?;
    Ok(if eps == 1 { 3 * n * n + n } else { 3 * n * n - n })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankThreeExponents {
    pub label: &'static str,
    pub exponents: [i64; 3],
}

pub fn su3_exponents_p7() -> Vec<RankThreeExponents> {
    vec![
        RankThreeExponents { label: "S2E(-5,5)", exponents: [-10, 0, 10] },
        RankThreeExponents { label: "S2E(-11,11)", exponents: [-22, 0, 22] },
        RankThreeExponents { label: "V-xO", exponents: [-2, -4, 6] },
        RankThreeExponents { label: "V-*xO", exponents: [-6, 4, 2] },
    ]
}
