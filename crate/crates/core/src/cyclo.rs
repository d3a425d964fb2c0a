//! Exact arithmetic in the cyclotomic field Q(zeta_m).
//!
//! Elements are stored sparsely in the integral basis obtained by tensoring
//! the power bases of Q(zeta_q) over the prime-power parts q of m: a basis
//! monomial zeta_m^k has every CRT component (k mod q) below phi(q). This keeps
//! values that only involve a small root of unity short even when m is large
//! (m = 456288 for SL(2,97)), and equality is structural.

use num_complex::Complex64;
use num_rational::Ratio;
use std::f64::consts::PI;

use crate::arith;

#[derive(Debug, Clone)]
struct Part {
    q: u32,
    phi: u32,
    /// zeta_m^idem is a primitive q-th root of unity, and k = sum c_i * idem_i mod m.
    idem: u64,
    /// For each c in 0..q, the expansion of omega^c in the basis omega^j, j < phi.
    expand: Vec<Vec<(u32, i64)>>,
}

/// The field Q(zeta_m) together with its reduction tables.
#[derive(Debug, Clone)]
pub struct Field {
    m: u32,
    parts: Vec<Part>,
}

/// An element of Q(zeta_m) with integer coordinates in the tensor basis.
///
/// Character values are algebraic integers, so integer coordinates suffice;
/// rational results (inner products and the like) are extracted by exact
/// division at the end.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Cyclo {
    terms: Vec<(u32, i128)>,
}

impl Field {
    pub fn new(m: u32) -> Field {
        assert!(m >= 1);
        let mut parts = Vec::new();
        for (p, q) in arith::prime_power_parts(m as u64) {
            let (p, q) = (p as u32, q as u32);
            let phi = q / p * (p - 1);
            let rest = (m / q) as i64;
            // idem = 1 mod q, 0 mod m/q
            let idem = if rest == 1 {
                1
            } else {
                let inv = arith::inv_mod(rest % q as i64, q as i64).unwrap();
                (rest * inv) as u64 % m as u64
            };
            let mut expand: Vec<Vec<(u32, i64)>> = Vec::with_capacity(q as usize);
            for c in 0..q {
                if c < phi {
                    expand.push(vec![(c, 1)]);
                    continue;
                }
                let mut acc: Vec<(u32, i64)> = Vec::new();
                if p == 2 {
                    for &(j, v) in &expand[(c - q / 2) as usize] {
                        acc.push((j, -v));
                    }
                } else {
                    let step = q / p;
                    for b in 0..(p - 1) {
                        let lower = c - (p - 1 - b) * step;
                        for &(j, v) in &expand[lower as usize] {
                            acc.push((j, -v));
                        }
                    }
                }
                expand.push(merge_small(acc));
            }
            parts.push(Part { q, phi, idem, expand });
        }
        Field { m, parts }
    }

    pub fn conductor(&self) -> u32 {
        self.m
    }

    pub fn dimension(&self) -> u64 {
        self.parts.iter().map(|p| p.phi as u64).product()
    }

    fn combine(&self, comps: &[u32]) -> u32 {
        let m = self.m as u64;
        let mut k = 0u64;
        for (part, &c) in self.parts.iter().zip(comps) {
            k = (k + part.idem * c as u64) % m;
        }
        k as u32
    }

    /// Push the basis expansion of coeff * zeta_m^k onto `out`.
    fn expand_monomial(&self, k: u32, coeff: i128, out: &mut Vec<(u32, i128)>) {
        let mut single = true;
        for part in &self.parts {
            if k % part.q >= part.phi {
                single = false;
                break;
            }
        }
        if single {
            out.push((k, coeff));
            return;
        }
        // cartesian product over parts
        let mut partial: Vec<(Vec<u32>, i128)> = vec![(Vec::with_capacity(self.parts.len()), coeff)];
        for part in &self.parts {
            let c = (k % part.q) as usize;
            let exp = &part.expand[c];
            let mut next = Vec::with_capacity(partial.len() * exp.len());
            for (comps, v) in &partial {
                for &(j, w) in exp {
                    let mut cs = comps.clone();
                    cs.push(j);
                    next.push((cs, v * w as i128));
                }
            }
            partial = next;
        }
        for (comps, v) in partial {
            out.push((self.combine(&comps), v));
        }
    }

    /// Reduce an arbitrary list of (exponent mod m, coefficient) monomials.
    pub fn reduce(&self, raw: impl IntoIterator<Item = (u64, i128)>) -> Cyclo {
        let m = self.m as u64;
        let mut out = Vec::new();
        for (k, v) in raw {
            if v != 0 {
                self.expand_monomial((k % m) as u32, v, &mut out);
            }
        }
        Cyclo { terms: merge(out) }
    }

    /// zeta_m^k.
    pub fn root(&self, k: i64) -> Cyclo {
        let k = arith::modp(k, self.m as i64) as u64;
        self.reduce([(k, 1)])
    }

    /// zeta_n^k for n dividing m.
    pub fn root_of(&self, n: u32, k: i64) -> Cyclo {
        assert!(self.m % n == 0, "{n} does not divide conductor {}", self.m);
        self.root(k * (self.m / n) as i64)
    }

    pub fn int(&self, v: i128) -> Cyclo {
        Cyclo::from_int(v)
    }

    pub fn add(&self, a: &Cyclo, b: &Cyclo) -> Cyclo {
        let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
        out.extend_from_slice(&a.terms);
        out.extend_from_slice(&b.terms);
        Cyclo { terms: merge(out) }
    }

    pub fn sub(&self, a: &Cyclo, b: &Cyclo) -> Cyclo {
        self.add(a, &b.neg())
    }

    pub fn mul(&self, a: &Cyclo, b: &Cyclo) -> Cyclo {
        if a.is_zero() || b.is_zero() {
            return Cyclo::zero();
        }
        if let Some(s) = a.as_integer() {
            return b.scale(s);
        }
        if let Some(s) = b.as_integer() {
            return a.scale(s);
        }
        let m = self.m as u64;
        let mut out = Vec::with_capacity(a.terms.len() * b.terms.len());
        for &(i, x) in &a.terms {
            for &(j, y) in &b.terms {
                let k = (i as u64 + j as u64) % m;
                self.expand_monomial(k as u32, x * y, &mut out);
            }
        }
        Cyclo { terms: merge(out) }
    }

    pub fn pow(&self, a: &Cyclo, mut e: u32) -> Cyclo {
        let mut base = a.clone();
        let mut acc = Cyclo::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Complex conjugation, zeta -> zeta^{-1}.
    pub fn conj(&self, a: &Cyclo) -> Cyclo {
        let m = self.m as u64;
        self.reduce(a.terms.iter().map(|&(k, v)| ((m - k as u64) % m, v)))
    }

    /// Galois action zeta -> zeta^g for g coprime to m.
    pub fn galois(&self, a: &Cyclo, g: u64) -> Cyclo {
        let m = self.m as u64;
        self.reduce(a.terms.iter().map(|&(k, v)| (k as u64 * g % m, v)))
    }

    pub fn to_complex(&self, a: &Cyclo) -> Complex64 {
        let m = self.m as f64;
        a.terms
            .iter()
            .map(|&(k, v)| Complex64::from_polar(v as f64, 2.0 * PI * k as f64 / m))
            .sum()
    }

    pub fn accumulator(&self) -> Accumulator<'_> {
        Accumulator { field: self, dense: vec![0; self.m as usize], touched: Vec::new() }
    }
}

impl Cyclo {
    pub fn zero() -> Cyclo {
        Cyclo { terms: Vec::new() }
    }

    pub fn one() -> Cyclo {
        Cyclo::from_int(1)
    }

    pub fn from_int(v: i128) -> Cyclo {
        if v == 0 {
            Cyclo::zero()
        } else {
            Cyclo { terms: vec![(0, v)] }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Some(v) when the element is the rational integer v.
    pub fn as_integer(&self) -> Option<i128> {
        match self.terms.as_slice() {
            [] => Some(0),
            [(0, v)] => Some(*v),
            _ => None,
        }
    }

    /// Some(v / d) when the element is rational.
    pub fn as_rational(&self, d: i128) -> Option<Ratio<i128>> {
        self.as_integer().map(|v| Ratio::new(v, d))
    }

    pub fn neg(&self) -> Cyclo {
        Cyclo { terms: self.terms.iter().map(|&(k, v)| (k, -v)).collect() }
    }

    pub fn scale(&self, s: i128) -> Cyclo {
        if s == 0 {
            return Cyclo::zero();
        }
        Cyclo { terms: self.terms.iter().map(|&(k, v)| (k, v * s)).collect() }
    }

    /// Exact division by an integer; None if some coordinate is not divisible.
    pub fn div_int(&self, d: i128) -> Option<Cyclo> {
        assert!(d != 0);
        let mut terms = Vec::with_capacity(self.terms.len());
        for &(k, v) in &self.terms {
            if v % d != 0 {
                return None;
            }
            terms.push((k, v / d));
        }
        Some(Cyclo { terms })
    }

    /// (basis exponent, coefficient) pairs in increasing exponent order.
    pub fn terms(&self) -> &[(u32, i128)] {
        &self.terms
    }
}

/// Dense scratch space for long sums of products. Monomials zeta_m^k are
/// collected unreduced and expanded into the basis once, in `take`.
pub struct Accumulator<'a> {
    field: &'a Field,
    dense: Vec<i128>,
    touched: Vec<u32>,
}

impl Accumulator<'_> {
    fn push_raw(&mut self, k: u32, v: i128) {
        if self.dense[k as usize] == 0 {
            self.touched.push(k);
        }
        self.dense[k as usize] += v;
    }

    pub fn add(&mut self, a: &Cyclo, scale: i128) {
        for &(k, v) in &a.terms {
            self.push_raw(k, v * scale);
        }
    }

    /// Adds scale * a * b.
    pub fn add_product(&mut self, a: &Cyclo, b: &Cyclo, scale: i128) {
        let m = self.field.m;
        for &(i, x) in &a.terms {
            let xs = x * scale;
            for &(j, y) in &b.terms {
                let k = i + j;
                self.push_raw(if k >= m { k - m } else { k }, xs * y);
            }
        }
    }

    /// Returns the accumulated value and resets the scratch space.
    pub fn take(&mut self) -> Cyclo {
        let mut terms = Vec::with_capacity(self.touched.len());
        for &k in &self.touched {
            let v = std::mem::take(&mut self.dense[k as usize]);
            if v != 0 {
                self.field.expand_monomial(k, v, &mut terms);
            }
        }
        self.touched.clear();
        Cyclo { terms: merge(terms) }
    }
}

fn merge_small(mut v: Vec<(u32, i64)>) -> Vec<(u32, i64)> {
    v.sort_unstable_by_key(|t| t.0);
    let mut out: Vec<(u32, i64)> = Vec::with_capacity(v.len());
    for (k, c) in v {
        match out.last_mut() {
            Some(last) if last.0 == k => last.1 += c,
            _ => out.push((k, c)),
        }
    }
    out.retain(|t| t.1 != 0);
    out
}

fn merge(mut v: Vec<(u32, i128)>) -> Vec<(u32, i128)> {
    v.sort_unstable_by_key(|t| t.0);
    let mut out: Vec<(u32, i128)> = Vec::with_capacity(v.len());
    for (k, c) in v {
        match out.last_mut() {
            Some(last) if last.0 == k => last.1 += c,
            _ => out.push((k, c)),
        }
    }
    out.retain(|t| t.1 != 0);
    out
}
