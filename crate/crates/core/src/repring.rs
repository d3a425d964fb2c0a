//! Representation-ring computations on top of an exact character table.

use num_rational::Ratio;
use serde::Serialize;
use std::fmt;

use crate::chartab::CharacterTable;
use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::group::Variant;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassFunction {
    pub p: u64,
    pub variant: Variant,
    pub values: Vec<Cyclo>,
}

impl ClassFunction {
    fn check(&self, t: &CharacterTable) -> Result<()> {
        if self.p != t.p() || self.variant != t.group.variant || self.values.len() != t.num_classes() {
            return Err(Error::TableMismatch);
        }
        Ok(())
    }

    pub fn degree(&self) -> Option<i128> {
        self.values[0].as_integer()
    }
}

pub fn character(t: &CharacterTable, i: usize) -> ClassFunction {
    ClassFunction { p: t.p(), variant: t.group.variant, values: t.values[i].clone() }
}

pub fn trivial(t: &CharacterTable) -> ClassFunction {
    ClassFunction { p: t.p(), variant: t.group.variant, values: vec![Cyclo::one(); t.num_classes()] }
}

pub fn product(t: &CharacterTable, a: &ClassFunction, b: &ClassFunction) -> Result<ClassFunction> {
    a.check(t)?;
    b.check(t)?;
    let f = &t.field;
    let values = a.values.iter().zip(&b.values).map(|(x, y)| f.mul(x, y)).collect();
    Ok(ClassFunction { p: a.p, variant: a.variant, values })
}

pub fn sum(t: &CharacterTable, a: &ClassFunction, b: &ClassFunction, sign: i128) -> Result<ClassFunction> {
    a.check(t)?;
    b.check(t)?;
    let f = &t.field;
    let values = a.values.iter().zip(&b.values).map(|(x, y)| f.add(x, &y.scale(sign))).collect();
    Ok(ClassFunction { p: a.p, variant: a.variant, values })
}

/// Dual class function, g -> f(g^{-1}).
pub fn dual(t: &CharacterTable, a: &ClassFunction) -> ClassFunction {
    let values = t.inverse_class.iter().map(|&c| a.values[c].clone()).collect();
    ClassFunction { p: a.p, variant: a.variant, values }
}

/// (1/|G|) sum_c |c| f(c) conj(g(c)).
pub fn inner_product(t: &CharacterTable, f: &ClassFunction, g: &ClassFunction) -> Result<Ratio<i128>> {
    f.check(t)?;
    g.check(t)?;
    let field = &t.field;
    let mut acc = field.accumulator();
    for (c, cls) in t.classes.iter().enumerate() {
        // conj(g(c)) = g(c^{-1}) for characters; use conjugation to stay general
        let gc = field.conj(&g.values[c]);
        acc.add_product(&f.values[c], &gc, cls.size as i128);
    }
    let total = acc.take();
    total
        .as_rational(t.group.order as i128)
        .ok_or_else(|| Error::NotACharacter("inner product is not rational".into()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    /// (irrep index, irrep name, multiplicity) with nonzero multiplicities, in table order.
    pub parts: Vec<(usize, String, u64)>,
}

impl Decomposition {
    pub fn multiplicity(&self, name: &str) -> u64 {
        self.parts.iter().find(|x| x.1 == name).map_or(0, |x| x.2)
    }

    pub fn dimension(&self, t: &CharacterTable) -> u64 {
        self.parts.iter().map(|(i, _, m)| m * t.irreps[*i].dimension).sum()
    }

    /// Multiset as (name, multiplicity), sorted by name.
    pub fn as_map(&self) -> std::collections::BTreeMap<String, u64> {
        self.parts.iter().map(|(_, n, m)| (n.clone(), *m)).collect()
    }
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "0");
        }
        let s: Vec<String> = self
            .parts
            .iter()
            .map(|(_, n, m)| if *m == 1 { n.clone() } else { format!("{m}.{n}") })
            .collect();
        write!(f, "{}", s.join(" + "))
    }
}

/// Multiplicities of every irrep, allowing negative values (virtual characters).
pub fn virtual_multiplicities(t: &CharacterTable, f: &ClassFunction) -> Result<Vec<i128>> {
    (0..t.irreps.len())
        .map(|i| {
            let m = inner_product(t, f, &character(t, i))?;
            if !m.is_integer() {
                return Err(Error::NotACharacter(format!("multiplicity {m} of {}", t.irreps[i].name)));
            }
            Ok(m.to_integer())
        })
        .collect()
}

pub fn decompose(t: &CharacterTable, f: &ClassFunction) -> Result<Decomposition> {
    let mults = virtual_multiplicities(t, f)?;
    let mut parts = Vec::new();
    for (i, m) in mults.into_iter().enumerate() {
        if m < 0 {
            return Err(Error::NotACharacter(format!("negative multiplicity {m} of {}", t.irreps[i].name)));
        }
        if m > 0 {
            parts.push((i, t.irreps[i].name.clone(), m as u64));
        }
    }
    Ok(Decomposition { parts })
}

pub fn tensor(t: &CharacterTable, i: usize, j: usize) -> Result<Decomposition> {
    decompose(t, &product(t, &character(t, i), &character(t, j))?)
}

/// Power sums p_k(c) = f(c^k).
fn adams(t: &CharacterTable, f: &ClassFunction, k: u64) -> Vec<Cyclo> {
    t.classes
        .iter()
        .map(|c| f.values[c.power_map[(k % c.element_order) as usize]].clone())
        .collect()
}

/// Characters of S^0 f, ..., S^n f (sign = 1) or Λ^0 f, ..., Λ^n f (sign = -1),
/// by the Newton recursion n h_n = sum_k (sign)^{k-1} p_k h_{n-k}.
fn newton_powers(t: &CharacterTable, f: &ClassFunction, n: usize, sign: i128) -> Vec<ClassFunction> {
    let field = &t.field;
    let nc = t.num_classes();
    let ps: Vec<Vec<Cyclo>> = (1..=n as u64).map(|k| adams(t, f, k)).collect();
    let mut out: Vec<Vec<Cyclo>> = vec![vec![Cyclo::one(); nc]];
    let mut acc = field.accumulator();
    for m in 1..=n {
        let mut row = Vec::with_capacity(nc);
        for c in 0..nc {
            for k in 1..=m {
                let s = if k % 2 == 1 { 1 } else { sign };
                acc.add_product(&ps[k - 1][c], &out[m - k][c], s);
            }
            let v = acc.take();
            row.push(v.div_int(m as i128).expect("Newton recursion divides exactly"));
        }
        out.push(row);
    }
    out.into_iter().map(|values| ClassFunction { p: f.p, variant: f.variant, values }).collect()
}

pub fn sym_powers(t: &CharacterTable, f: &ClassFunction, n: usize) -> Vec<ClassFunction> {
    newton_powers(t, f, n, 1)
}

pub fn sym_power(t: &CharacterTable, f: &ClassFunction, n: usize) -> ClassFunction {
    newton_powers(t, f, n, 1).pop().unwrap()
}

pub fn ext_power(t: &CharacterTable, f: &ClassFunction, n: usize) -> ClassFunction {
    newton_powers(t, f, n, -1).pop().unwrap()
}

/// Eigenvalues of irrep i on class c as (r, multiplicity) meaning zeta_o^r,
/// o the element order, by discrete Fourier inversion of chi(c^j).
pub fn eigenvalue_multiset(t: &CharacterTable, i: usize, c: usize) -> Result<Vec<(u64, u64)>> {
    eigenvalues_of(t, &character(t, i), c).map_err(|_| Error::NonIntegralMultiplicity { irrep: i, class: c })
}

pub fn eigenvalues_of(t: &CharacterTable, f: &ClassFunction, c: usize) -> Result<Vec<(u64, u64)>> {
    let field = &t.field;
    let cls = &t.classes[c];
    let o = cls.element_order;
    let mut out = Vec::new();
    let mut acc = field.accumulator();
    for r in 0..o {
        for j in 0..o {
            let chi = &f.values[cls.power_map[j as usize]];
            let w = field.root_of(o as u32, -((r * j % o) as i64));
            acc.add_product(chi, &w, 1);
        }
        let total = acc.take();
        let m = total.as_integer().filter(|v| v % o as i128 == 0 && *v >= 0);
        match m {
            Some(v) if v > 0 => out.push((r, (v / o as i128) as u64)),
            Some(_) => {}
            None => return Err(Error::NonIntegralMultiplicity { irrep: usize::MAX, class: c }),
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PowerSeries {
    pub coeffs: Vec<i128>,
}

impl PowerSeries {
    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }
}

/// Coefficient n of the series is the multiplicity of `target` in S^n(source),
/// computed from eigenvalue data: sum over classes of conj(chi_V) / det(1 - t rho_W).
pub fn molien_eigen(t: &CharacterTable, target: usize, source: usize, n: usize) -> Result<PowerSeries> {
    let field = &t.field;
    let order = t.group.order as i128;
    let mut acc: Vec<Cyclo> = vec![Cyclo::zero(); n + 1];
    for (c, cls) in t.classes.iter().enumerate() {
        let eig = eigenvalue_multiset(t, source, c)?;
        let o = cls.element_order as u32;
        // expand prod 1/(1 - lambda t) to degree n
        let mut s = vec![Cyclo::zero(); n + 1];
        s[0] = Cyclo::one();
        for (r, mult) in eig {
            let lambda = field.root_of(o, r as i64);
            for _ in 0..mult {
                for k in 1..=n {
                    let prev = field.mul(&lambda, &s[k - 1]);
                    s[k] = field.add(&s[k], &prev);
                }
            }
        }
        let weight = field.conj(&t.values[target][c]).scale(cls.size as i128);
        for k in 0..=n {
            acc[k] = field.add(&acc[k], &field.mul(&weight, &s[k]));
        }
    }
    let coeffs = acc
        .iter()
        .enumerate()
        .map(|(k, v)| {
            v.as_integer().filter(|x| x % order == 0).map(|x| x / order).ok_or(Error::NonIntegralCoefficient(k))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PowerSeries { coeffs })
}

/// Same series by inner products with Newton-recursion symmetric powers.
pub fn molien_sym(t: &CharacterTable, target: usize, source: usize, n: usize) -> Result<PowerSeries> {
    let powers = sym_powers(t, &character(t, source), n);
    let v = character(t, target);
    let coeffs = powers
        .iter()
        .enumerate()
        .map(|(k, s)| {
            let m = inner_product(t, s, &v)?;
            if m.is_integer() {
                Ok(m.to_integer())
            } else {
                Err(Error::NonIntegralCoefficient(k))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PowerSeries { coeffs })
}

/// Molien series with the mandatory agreement check between both routes.
pub fn molien(t: &CharacterTable, target: usize, source: usize, n: usize) -> Result<PowerSeries> {
    let a = molien_eigen(t, target, source, n)?;
    let b = molien_sym(t, target, source, n)?;
    if a != b {
        return Err(Error::RouteDisagreement(format!(
            "Molien series for ({}, {})",
            t.irreps[target].name, t.irreps[source].name
        )));
    }
    Ok(a)
}

/// numerator / denominator with integer coefficients (index = degree).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RationalGF {
    pub numerator: Vec<i128>,
    pub denominator: Vec<i128>,
}

impl RationalGF {
    /// numerator / prod (1 - t^e)
    pub fn with_cyclotomic_denominator(numerator: Vec<i128>, exps: &[usize]) -> RationalGF {
        let mut den = vec![1i128];
        for &e in exps {
            let mut next = vec![0i128; den.len() + e];
            for (i, &c) in den.iter().enumerate() {
                next[i] += c;
                next[i + e] -= c;
            }
            den = next;
        }
        RationalGF { numerator, denominator: den }
    }

    /// Numerator polynomial of this series' expansion over a given denominator.
    pub fn numerator_over(series: &PowerSeries, exps: &[usize]) -> Vec<i128> {
        let den = RationalGF::with_cyclotomic_denominator(vec![], exps).denominator;
        let n = series.coeffs.len();
        let mut num = vec![0i128; n];
        for (i, slot) in num.iter_mut().enumerate() {
            for (j, &d) in den.iter().enumerate().take(i + 1) {
                *slot += d * series.coeffs[i - j];
            }
        }
        while num.last() == Some(&0) {
            num.pop();
        }
        num
    }
}

pub fn expand_rational_gf(f: &RationalGF, n: usize) -> Result<PowerSeries> {
    let d0 = *f.denominator.first().ok_or(Error::NotExpandable)?;
    if d0 != 1 && d0 != -1 {
        return Err(Error::NotExpandable);
    }
    let mut c = vec![0i128; n + 1];
    for k in 0..=n {
        let mut v = f.numerator.get(k).copied().unwrap_or(0);
        for j in 1..=k.min(f.denominator.len().saturating_sub(1)) {
            v -= f.denominator[j] * c[k - j];
        }
        c[k] = v * d0;
    }
    Ok(PowerSeries { coeffs: c })
}
