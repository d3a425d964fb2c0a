//! Picard groups of G-curves over P^1 from their branching data, and the
//! G-module structure of sections of powers of lambda on X(p).

use num_integer::Integer;
use num_rational::Ratio;
use serde::Serialize;

use crate::arith;
use crate::chartab::{character_table, CharacterTable};
use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::group::{build_group, sl_class_index, sl_negate, ClassKind, Variant};
use crate::repring::{virtual_multiplicities, ClassFunction, Decomposition};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DyckSignature {
    pub e: Vec<u64>,
}

impl DyckSignature {
    pub fn new(e: Vec<u64>) -> Result<DyckSignature> {
        if e.len() < 3 || e.iter().any(|&x| x < 2) {
            return Err(Error::NotHyperbolic(e));
        }
        let s = DyckSignature { e };
        if s.euler_defect() <= Ratio::from_integer(0) {
            return Err(Error::NotHyperbolic(s.e));
        }
        Ok(s)
    }

    pub fn triangle(a: u64, b: u64, c: u64) -> Result<DyckSignature> {
        DyckSignature::new(vec![a, b, c])
    }

    /// n - 2 - sum 1/e_i.
    pub fn euler_defect(&self) -> Ratio<i64> {
        let n = self.e.len() as i64;
        self.e.iter().fold(Ratio::from_integer(n - 2), |acc, &x| acc - Ratio::new(1, x as i64))
    }

    pub fn lcm(&self) -> u64 {
        arith::lcm_all(&self.e)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PicardStructure {
    pub signature: Vec<u64>,
    pub free_rank: u32,
    /// Invariant factors greater than one.
    pub torsion: Vec<u64>,
    #[serde(rename = "N")]
    pub n: u64,
    pub canonical_exponent: i64,
    /// d_k = gcd of all products of k distinct e_i, k = 1..n-1.
    pub d_k: Vec<u64>,
}

fn products_of_k(e: &[u64], k: usize) -> Vec<u64> {
    fn go(e: &[u64], k: usize, start: usize, acc: u64, out: &mut Vec<u64>) {
        if k == 0 {
            out.push(acc);
            return;
        }
        for i in start..e.len() {
            go(e, k - 1, i + 1, acc * e[i], out);
        }
    }
    let mut out = Vec::new();
    go(e, k, 0, 1, &mut out);
    out
}

pub fn picard_structure(sig: &DyckSignature) -> Result<PicardStructure> {
    let sig = DyckSignature::new(sig.e.clone())?;
    let n = sig.e.len();
    let d_k: Vec<u64> = (1..n).map(|k| arith::gcd_all(&products_of_k(&sig.e, k))).collect();
    let mut torsion = Vec::new();
    let mut prev = 1;
    for &d in &d_k {
        if d / prev > 1 {
            torsion.push(d / prev);
        }
        prev = d;
    }
    let lcm = sig.lcm();
    let k = sig.euler_defect() * Ratio::from_integer(lcm as i64);
    if !k.is_integer() {
        return Err(Error::NonIntegralCanonicalExponent(sig.e.clone()));
    }
    Ok(PicardStructure {
        signature: sig.e.clone(),
        free_rank: 1,
        torsion,
        n: lcm,
        canonical_exponent: k.to_integer(),
        d_k,
    })
}

/// Invariant factors of the integer matrix by Smith normal form.
pub fn smith_invariants(mut m: Vec<Vec<i64>>) -> Vec<i64> {
    let rows = m.len();
    let cols = m[0].len();
    let mut out = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: smallest nonzero absolute value in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if m[i][j] != 0 && best.map_or(true, |(a, b)| m[i][j].abs() < m[a][b].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        let mut clean = true;
        for i in t + 1..rows {
            let q = m[i][t] / m[t][t];
            for j in t..cols {
                m[i][j] -= q * m[t][j];
            }
            clean &= m[i][t] == 0;
        }
        for j in t + 1..cols {
            let q = m[t][j] / m[t][t];
            for i in t..rows {
                m[i][j] -= q * m[i][t];
            }
            clean &= m[t][j] == 0;
        }
        if !clean {
            continue;
        }
        let d = m[t][t];
        let mut divides = true;
        'outer: for i in t + 1..rows {
            for j in t + 1..cols {
                if m[i][j] % d != 0 {
                    for k in t..cols {
                        m[t][k] += m[i][k];
                    }
                    divides = false;
                    break 'outer;
                }
            }
        }
        if divides {
            out.push(d.abs());
            t += 1;
        }
    }
    out
}

/// Torsion of <x_1..x_n | e_1 x_1 = ... = e_n x_n> read off the Smith form,
/// independent of the gcd-of-products formula.
pub fn presentation_torsion(e: &[u64]) -> Vec<u64> {
    let n = e.len();
    let rel: Vec<Vec<i64>> = (1..n)
        .map(|i| {
            let mut r = vec![0i64; n];
            r[0] = e[0] as i64;
            r[i] = -(e[i] as i64);
            r
        })
        .collect();
    smith_invariants(rel).into_iter().filter(|&d| d > 1).map(|d| d as u64).collect()
}

/// Primary decomposition of a finite abelian group given by cyclic orders.
pub fn primary_parts(orders: &[u64]) -> Vec<u64> {
    let mut out: Vec<u64> = orders
        .iter()
        .flat_map(|&o| arith::prime_power_parts(o).into_iter().map(|(q, k)| q.pow(k as u32)))
        .collect();
    out.sort_unstable();
    out
}

pub fn genus(sig: &DyckSignature, group_order: u64) -> Result<u64> {
    let two_g_minus_2 = sig.euler_defect() * Ratio::from_integer(group_order as i64);
    if !two_g_minus_2.is_integer() || two_g_minus_2.to_integer().is_odd() {
        return Err(Error::NonIntegralGenus);
    }
    Ok((two_g_minus_2.to_integer() / 2 + 1) as u64)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModularData {
    pub p: u64,
    pub n: u64,
    pub epsilon: i64,
    pub genus: u64,
    pub deg_lambda: u64,
    pub group_order: u64,
    pub deg_canonical: i64,
    /// lambda^(2p-12) = K.
    pub canonical_exponent_2p_minus_12: i64,
    pub linearizable_index: u64,
    pub schur_d: u64,
    pub degenerate: bool,
    pub embedding_degrees: Option<(u64, u64)>,
    pub invariant_divisor: DivisorDegrees,
}

/// Degree of the generator of invariant divisor classes against the degree of
/// eps(D2 - D3 - p Dp) computed from orbit sizes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DivisorDegrees {
    pub generator_degree: u64,
    pub orbit_degrees: [u64; 3],
    pub representative_degree: i64,
    pub agrees: bool,
}

pub fn divisor_degrees(p: u64) -> Result<DivisorDegrees> {
    let (_, eps) = arith::six_n_eps(p).ok_or(Error::PrimeNotSixNPlusMinusOne(p))?;
    let order = p * (p * p - 1) / 2;
    let orbits = [order / 2, order / 3, order / p];
    let rep = eps * (orbits[0] as i64 - orbits[1] as i64 - (p * orbits[2]) as i64);
    let gen = (p * p - 1) / 12;
    Ok(DivisorDegrees { generator_degree: gen, orbit_degrees: orbits, representative_degree: rep, agrees: rep == gen as i64 })
}

pub fn modular_data(p: u64) -> Result<ModularData> {
    let (n, eps) = arith::six_n_eps(p).ok_or(Error::PrimeNotSixNPlusMinusOne(p))?;
    let order = p * (p * p - 1) / 2;
    let deg_lambda = (p * p - 1) / 24;
    let deg_canonical = (p as i64 - 6) * (p * p - 1) as i64 / 12;
    let genus = (deg_canonical / 2 + 1) as u64;
    Ok(ModularData {
        p,
        n,
        epsilon: eps,
        genus,
        deg_lambda,
        group_order: order,
        deg_canonical,
        canonical_exponent_2p_minus_12: 2 * p as i64 - 12,
        linearizable_index: 2,
        schur_d: 2,
        degenerate: p < 7,
        embedding_degrees: (p >= 7).then(|| embedding_degrees(p)),
        invariant_divisor: divisor_degrees(p)?,
    })
}

/// Degrees of the images of X(p) in P(V-) and P(V+).
pub fn embedding_degrees(p: u64) -> (u64, u64) {
    ((p - 3) * (p * p - 1) / 48, (p - 1) * (p * p - 1) / 48)
}

pub fn rr_dimension(p: u64, a: i64) -> Result<i64> {
    let m = modular_data(p)?;
    let deg = a * m.deg_lambda as i64;
    let g = m.genus as i64;
    if deg > m.deg_canonical {
        Ok(deg - g + 1)
    } else if deg == m.deg_canonical {
        Ok(g)
    } else {
        Err(Error::BelowCanonicalRange { deg, canonical: m.deg_canonical })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivariantSection {
    pub p: u64,
    pub a: i64,
    pub dimension: u64,
    pub variant: Variant,
    pub decomposition: Decomposition,
}

/// Equivariant Riemann-Roch for powers of lambda on X(p), with both
/// character tables built once.
pub struct SectionCalculator {
    pub sl: CharacterTable,
    pub psl: CharacterTable,
    data: ModularData,
}

impl SectionCalculator {
    pub fn new(p: u64) -> Result<SectionCalculator> {
        if p < 7 {
            return Err(Error::PrimeTooSmall(p));
        }
        let data = modular_data(p)?;
        let sl = character_table(&build_group(p, Variant::SL2)?)?;
        let psl = character_table(&build_group(p, Variant::PSL2)?)?;
        Ok(SectionCalculator { sl, psl, data })
    }

    fn torus_class(&self, order: u64) -> usize {
        self.sl
            .classes
            .iter()
            .position(|c| matches!(c.kind, ClassKind::Split(_) | ClassKind::Nonsplit(_)) && c.element_order == order)
            .expect("torus class of the requested order")
    }

    /// D times the character of H^0(lambda^a) on the SL classes, D = lcm(8, 18, 2p^2).
    pub fn scaled_character(&self, a: i64) -> Result<(Vec<Cyclo>, i128)> {
        let p = self.data.p;
        let deg = a * self.data.deg_lambda as i64;
        if a < 0 || deg < self.data.deg_canonical {
            return Err(Error::BelowCanonicalRange { deg, canonical: self.data.deg_canonical });
        }
        let t = &self.sl;
        let f = &t.field;
        let scale = arith::lcm_all(&[8, 18, 2 * p * p]) as i128;
        let order = t.group.order as i128;
        let base = (deg - self.data.genus as i64 + 1) as i128;
        let sign_a: i128 = if a % 2 == 0 { 1 } else { -1 };

        let mut acc: Vec<Cyclo> = vec![Cyclo::zero(); t.num_classes()];
        acc[0] = Cyclo::from_int(scale * base);
        acc[1] = Cyclo::from_int(scale * sign_a * base);

        // (class, rho^a as zeta_{rho_n}^{rho_k} times sign, kappa = zeta_e^k, e)
        let mut contributions: Vec<(usize, u32, i64, i128, u64, i64)> = Vec::new();
        let c4 = self.torus_class(4);
        contributions.push((c4, 4, a, 1, 2, 1));
        contributions.push((c4, 4, -a, 1, 2, 1));
        let t3 = (0..3).find(|x| arith::modp((2 * p as i64 - 12) * x, 3) == 1).unwrap();
        let (c3, c6) = (self.torus_class(3), self.torus_class(6));
        for k in 1..3 {
            contributions.push((c3, 3, t3 * k * a, 1, 3, k));
            contributions.push((c6, 3, t3 * k * a, sign_a, 3, k));
        }
        let tp = (0..p as i64).find(|x| arith::modp((2 * p as i64 - 12) * x, p as i64) == 1).unwrap();
        for k in 1..p as i64 {
            let residue = arith::legendre(k, p) == 1;
            let cu = sl_class_index(p, ClassKind::Unipotent { negative: false, residue });
            let cm = sl_class_index(p, ClassKind::Unipotent { negative: true, residue });
            contributions.push((cu, p as u32, tp * k * a, 1, p, k));
            contributions.push((cm, p as u32, tp * k * a, sign_a, p, k));
        }

        let mut work = f.accumulator();
        for (c, rn, rk, rsign, e, k) in contributions {
            let cent = order / t.classes[c].size as i128;
            let e2 = (e * e) as i128;
            let weight = -cent * scale / (2 * e2) * rsign;
            let rho = f.root_of(rn, rk);
            // 1/(1 - w) = -(1/e) sum_j j w^j for w a primitive e-th root
            for j in 1..e as i64 {
                let kappa = f.root_of(e as u32, k * j);
                work.add_product(&rho, &kappa, weight * j as i128);
            }
            let v = work.take();
            acc[c] = f.add(&acc[c], &v);
        }
        if deg == self.data.deg_canonical {
            for v in acc.iter_mut() {
                *v = f.add(v, &Cyclo::from_int(scale));
            }
        }
        Ok((acc, scale))
    }

    pub fn section(&self, a: i64) -> Result<EquivariantSection> {
        let (values, scale) = self.scaled_character(a)?;
        let p = self.data.p;
        let (table, values) = if a % 2 == 0 {
            for (c, cls) in self.sl.classes.iter().enumerate() {
                if values[sl_class_index(p, sl_negate(p, cls.kind))] != values[c] {
                    return Err(Error::NotACharacter("even power is not trivial on -I".into()));
                }
            }
            let pv = self.psl.classes.iter().map(|c| values[c.lifts[0]].clone()).collect();
            (&self.psl, pv)
        } else {
            (&self.sl, values)
        };
        let f = ClassFunction { p, variant: table.group.variant, values };
        let mults = virtual_multiplicities(table, &f)?;
        let mut parts = Vec::new();
        for (i, m) in mults.into_iter().enumerate() {
            if m % scale != 0 || m < 0 {
                return Err(Error::NotACharacter(format!(
                    "multiplicity {} of {}",
                    Ratio::new(m, scale),
                    table.irreps[i].name
                )));
            }
            if m > 0 {
                parts.push((i, table.irreps[i].name.clone(), (m / scale) as u64));
            }
        }
        let decomposition = Decomposition { parts };
        Ok(EquivariantSection {
            p,
            a,
            dimension: decomposition.dimension(table),
            variant: table.group.variant,
            decomposition,
        })
    }

    pub fn table_for(&self, a: i64) -> &CharacterTable {
        if a % 2 == 0 {
            &self.psl
        } else {
            &self.sl
        }
    }
}

pub fn chevalley_weil(p: u64, a: i64) -> Result<EquivariantSection> {
    SectionCalculator::new(p)?.section(a)
}
