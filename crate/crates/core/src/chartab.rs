//! Exact character tables of SL(2,p) and PSL(2,p).

use num_complex::Complex64;
use serde::Serialize;
use std::cmp::Ordering;
use std::sync::Arc;

use crate::arith;
use crate::cyclo::{Cyclo, Field};
use crate::error::{Error, Result};
use crate::group::{self, ClassKind, ConjugacyClass, GroupDescriptor, Variant};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Series {
    Trivial,
    Steinberg,
    /// Induced from the character t -> t^i of the split torus, dimension p+1.
    Principal(u64),
    /// Attached to the character h -> h^j of the nonsplit torus, dimension p-1.
    Discrete(u64),
    /// The two halves of the reducible principal series, dimension (p+1)/2.
    HalfPrincipal(i8),
    /// The two halves of the reducible discrete series, dimension (p-1)/2.
    HalfDiscrete(i8),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum HalfRole {
    /// V- : dimension (p-1)/2
    Minus,
    /// V+ : dimension (p+1)/2
    Plus,
}

#[derive(Debug, Clone, Serialize)]
pub struct IrrepLabel {
    pub name: String,
    pub dimension: u64,
    pub series: Series,
    pub factors_through_psl: bool,
    pub dual_index: usize,
    pub role: Option<HalfRole>,
}

#[derive(Debug, Clone)]
pub struct CharacterTable {
    pub group: GroupDescriptor,
    pub classes: Vec<ConjugacyClass>,
    pub irreps: Vec<IrrepLabel>,
    /// values[i][c]: irrep i at class c
    pub values: Vec<Vec<Cyclo>>,
    pub field: Arc<Field>,
    /// inverse_class[c] = class of rep^{-1}
    pub inverse_class: Vec<usize>,
}

/// Exponent of SL(2,p); every character value of SL or PSL lies in Q(zeta_m).
pub fn conductor(p: u64) -> u32 {
    arith::lcm_all(&[2 * p, p - 1, p + 1]) as u32
}

fn sl_values(p: u64, field: &Field, classes: &[ConjugacyClass]) -> Vec<(Series, Vec<Cyclo>)> {
    let pi = p as i64;
    let f = field;
    let zp = |k: i64| f.root_of(p as u32, k);
    let tau = |k: i64| f.root_of((p - 1) as u32, k);
    let sig = |k: i64| f.root_of((p + 1) as u32, k);
    let mut gauss = Cyclo::zero();
    for a in 1..pi {
        gauss = f.add(&gauss, &zp(a).scale(arith::legendre(a, p) as i128));
    }
    let int = |v: i64| Cyclo::from_int(v as i128);
    let parity = |i: u64| if i % 2 == 0 { 1i64 } else { -1 };
    let mut rows: Vec<(Series, Vec<Cyclo>)> = Vec::new();
    let row = |f: &dyn Fn(ClassKind) -> Cyclo| classes.iter().map(|c| f(c.kind)).collect::<Vec<_>>();

    rows.push((Series::Trivial, row(&|_| int(1))));
    rows.push((
        Series::Steinberg,
        row(&|k| match k {
            ClassKind::Identity | ClassKind::MinusIdentity => int(pi),
            ClassKind::Unipotent { .. } => int(0),
            ClassKind::Split(_) => int(1),
            ClassKind::Nonsplit(_) => int(-1),
        }),
    ));
    for i in 1..=(p - 3) / 2 {
        let s = parity(i);
        rows.push((
            Series::Principal(i),
            row(&|k| match k {
                ClassKind::Identity => int(pi + 1),
                ClassKind::MinusIdentity => int(s * (pi + 1)),
                ClassKind::Unipotent { negative, .. } => int(if negative { s } else { 1 }),
                ClassKind::Split(l) => {
                    let e = (i * l) as i64;
                    f.add(&tau(e), &tau(-e))
                }
                ClassKind::Nonsplit(_) => int(0),
            }),
        ));
    }
    for j in 1..=(p - 1) / 2 {
        let s = parity(j);
        rows.push((
            Series::Discrete(j),
            row(&|k| match k {
                ClassKind::Identity => int(pi - 1),
                ClassKind::MinusIdentity => int(s * (pi - 1)),
                ClassKind::Unipotent { negative, .. } => int(if negative { -s } else { -1 }),
                ClassKind::Split(_) => int(0),
                ClassKind::Nonsplit(l) => {
                    let e = (j * l) as i64;
                    f.add(&sig(e), &sig(-e)).neg()
                }
            }),
        ));
    }
    // Half series: values at unipotent classes are (+-1 +- G)/2.
    let half = |c: i64, g: i64| -> Cyclo {
        f.add(&int(c), &gauss.scale(g as i128)).div_int(2).expect("half Gauss sum is integral")
    };
    let c_plus = parity((p - 1) / 2);
    for s in [1i64, -1] {
        rows.push((
            Series::HalfPrincipal(s as i8),
            row(&|k| match k {
                ClassKind::Identity => int((pi + 1) / 2),
                ClassKind::MinusIdentity => int(c_plus * (pi + 1) / 2),
                ClassKind::Unipotent { negative, residue } => {
                    let v = half(1, if residue { s } else { -s });
                    if negative { v.scale(c_plus as i128) } else { v }
                }
                ClassKind::Split(l) => int(parity(l)),
                ClassKind::Nonsplit(_) => int(0),
            }),
        ));
    }
    let c_minus = parity((p + 1) / 2);
    for s in [1i64, -1] {
        rows.push((
            Series::HalfDiscrete(s as i8),
            row(&|k| match k {
                ClassKind::Identity => int((pi - 1) / 2),
                ClassKind::MinusIdentity => int(c_minus * (pi - 1) / 2),
                ClassKind::Unipotent { negative, residue } => {
                    let v = half(-1, if residue { s } else { -s });
                    if negative { v.scale(c_minus as i128) } else { v }
                }
                ClassKind::Split(_) => int(0),
                ClassKind::Nonsplit(l) => int(-parity(l)),
            }),
        ));
    }
    rows
}

/// Order two characters: at the first class where they differ, the value with
/// the larger imaginary part (then the larger real part) comes first.
fn label_order(field: &Field, a: &[Cyclo], b: &[Cyclo]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        if x == y {
            continue;
        }
        let (x, y) = (field.to_complex(x), field.to_complex(y));
        let key = |z: Complex64| (z.im, z.re);
        let (kx, ky) = (key(x), key(y));
        let by_im = if (kx.0 - ky.0).abs() > 1e-9 { ky.0.partial_cmp(&kx.0) } else { None };
        return by_im.unwrap_or_else(|| ky.1.partial_cmp(&kx.1).unwrap());
    }
    Ordering::Equal
}

fn assign_names(p: u64, field: &Field, rows: &[(Series, Vec<Cyclo>)]) -> Vec<(String, Option<HalfRole>)> {
    let dims: Vec<u64> = rows.iter().map(|r| r.1[0].as_integer().unwrap() as u64).collect();
    let psl: Vec<bool> = rows.iter().map(|r| r.1[1].as_integer().unwrap() > 0).collect();
    let base: Vec<String> = (0..rows.len())
        .map(|i| {
            let clash = (0..rows.len()).any(|j| dims[j] == dims[i] && psl[j]);
            let prime = !psl[i] && clash;
            format!("V{}{}", dims[i], if prime { "'" } else { "" })
        })
        .collect();
    let mut names = vec![(String::new(), None); rows.len()];
    let mut done = vec![false; rows.len()];
    for i in 0..rows.len() {
        if done[i] {
            continue;
        }
        let mut group: Vec<usize> = (i..rows.len()).filter(|&j| base[j] == base[i]).collect();
        group.sort_by(|&a, &b| label_order(field, &rows[a].1, &rows[b].1));
        for (pos, &j) in group.iter().enumerate() {
            done[j] = true;
            let name = match (group.len(), pos) {
                (1, _) => base[j].clone(),
                (2, 0) => base[j].clone(),
                (2, _) => format!("{}*", base[j]),
                (_, k) => format!("{}_{}", base[j], k + 1),
            };
            let role = match rows[j].0 {
                Series::HalfDiscrete(_) if pos == 0 => Some(HalfRole::Minus),
                Series::HalfPrincipal(_) if pos == 0 => Some(HalfRole::Plus),
                _ => None,
            };
            names[j] = (name, role);
        }
    }
    let _ = p;
    names
}

fn dual_indices(field: &Field, values: &[Vec<Cyclo>], inverse_class: &[usize]) -> Vec<usize> {
    values
        .iter()
        .map(|row| {
            let dual: Vec<&Cyclo> = inverse_class.iter().map(|&c| &row[c]).collect();
            values
                .iter()
                .position(|r| r.iter().zip(&dual).all(|(a, b)| a == *b))
                .unwrap_or_else(|| {
                    // fall back to conjugation (same thing for characters)
                    let conj: Vec<Cyclo> = row.iter().map(|v| field.conj(v)).collect();
                    values.iter().position(|r| *r == conj).expect("dual irrep exists")
                })
        })
        .collect()
}

pub fn character_table(g: &GroupDescriptor) -> Result<CharacterTable> {
    let g = group::build_group(g.p, g.variant)?;
    let p = g.p;
    let field = Arc::new(Field::new(conductor(p)));
    let sl = group::build_group(p, Variant::SL2)?;
    let sl_classes = group::conjugacy_classes(&sl);
    let rows = sl_values(p, &field, &sl_classes);
    let names = assign_names(p, &field, &rows);

    let (classes, keep): (Vec<ConjugacyClass>, Vec<usize>) = match g.variant {
        Variant::SL2 => (sl_classes, (0..rows.len()).collect()),
        Variant::PSL2 => {
            let keep = (0..rows.len()).filter(|&i| rows[i].1[1].as_integer().unwrap() > 0).collect();
            (group::conjugacy_classes(&g), keep)
        }
    };
    let values: Vec<Vec<Cyclo>> = keep
        .iter()
        .map(|&i| match g.variant {
            Variant::SL2 => rows[i].1.clone(),
            Variant::PSL2 => classes.iter().map(|c| rows[i].1[c.lifts[0]].clone()).collect(),
        })
        .collect();
    let inverse_class: Vec<usize> =
        classes.iter().map(|c| c.power_map[(c.element_order - 1) as usize]).collect();
    let duals = dual_indices(&field, &values, &inverse_class);
    let irreps = keep
        .iter()
        .enumerate()
        .map(|(pos, &i)| IrrepLabel {
            name: names[i].0.clone(),
            dimension: rows[i].1[0].as_integer().unwrap() as u64,
            series: rows[i].0,
            factors_through_psl: rows[i].1[1].as_integer().unwrap() > 0,
            dual_index: duals[pos],
            role: names[i].1,
        })
        .collect();
    Ok(CharacterTable { group: g, classes, irreps, values, field, inverse_class })
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct OrthogonalityReport {
    /// (i, j) pairs where row orthogonality fails
    pub row_violations: Vec<(usize, usize)>,
    /// (c, c') pairs where column orthogonality fails
    pub column_violations: Vec<(usize, usize)>,
    pub sum_dim_squares: u64,
    pub group_order: u64,
}

impl OrthogonalityReport {
    pub fn holds(&self) -> bool {
        self.row_violations.is_empty()
            && self.column_violations.is_empty()
            && self.sum_dim_squares == self.group_order
    }
}

pub fn verify_orthogonality(t: &CharacterTable) -> OrthogonalityReport {
    let f = &t.field;
    let order = t.group.order as i128;
    let conj: Vec<Vec<Cyclo>> = t.values.iter().map(|r| r.iter().map(|v| f.conj(v)).collect()).collect();
    let mut acc = f.accumulator();
    let mut row_violations = Vec::new();
    for i in 0..t.values.len() {
        for j in i..t.values.len() {
            for (c, cls) in t.classes.iter().enumerate() {
                acc.add_product(&t.values[i][c], &conj[j][c], cls.size as i128);
            }
            let expect = if i == j { order } else { 0 };
            if acc.take() != Cyclo::from_int(expect) {
                row_violations.push((i, j));
            }
        }
    }
    let mut column_violations = Vec::new();
    for c in 0..t.classes.len() {
        for d in c..t.classes.len() {
            for i in 0..t.values.len() {
                acc.add_product(&t.values[i][c], &conj[i][d], 1);
            }
            let expect = if c == d { order / t.classes[c].size as i128 } else { 0 };
            if acc.take() != Cyclo::from_int(expect) {
                column_violations.push((c, d));
            }
        }
    }
    let sum_dim_squares = t.irreps.iter().map(|r| r.dimension * r.dimension).sum();
    OrthogonalityReport { row_violations, column_violations, sum_dim_squares, group_order: t.group.order }
}

/// Order of the Schur multiplier of PSL(2,p) for p >= 5; a quoted constant.
pub fn schur_constant(p: u64) -> Result<u64> {
    if p < 5 {
        return Err(Error::PrimeTooSmall(p));
    }
    Ok(2)
}

impl CharacterTable {
    pub fn p(&self) -> u64 {
        self.group.p
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.irreps.iter().position(|r| r.name == name).ok_or_else(|| Error::UnknownLabel(name.into()))
    }

    pub fn role_index(&self, role: HalfRole) -> usize {
        self.irreps.iter().position(|r| r.role == Some(role)).expect("half-dimension irreps exist")
    }

    pub fn degrees(&self) -> Vec<u64> {
        self.irreps.iter().map(|r| r.dimension).collect()
    }

    pub fn value_complex(&self, i: usize, c: usize) -> Complex64 {
        self.field.to_complex(&self.values[i][c])
    }

    /// Multiplicities of each irrep in the regular representation, with the
    /// regular character counted by brute force from the element list.
    pub fn regular_multiplicities_brute(&self) -> Vec<Option<i128>> {
        let p = self.p();
        let projective = self.group.variant == Variant::PSL2;
        let elements = group::all_elements(p, projective);
        let f = &self.field;
        let mut acc = f.accumulator();
        (0..self.irreps.len())
            .map(|i| {
                for (c, cls) in self.classes.iter().enumerate() {
                    let fixed =
                        elements.iter().filter(|x| cls.representative.mul(x, p) == **x).count() as i128;
                    let chi = f.conj(&self.values[i][c]);
                    acc.add(&chi, fixed * cls.size as i128);
                }
                acc.take().as_integer().and_then(|v| {
                    let n = self.group.order as i128;
                    (v % n == 0).then_some(v / n)
                })
            })
            .collect()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExactValue {
    /// (basis exponent k of zeta_m^k, integer coefficient)
    pub terms: Vec<(u32, String)>,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassExport {
    pub name: String,
    pub size: u64,
    pub element_order: u64,
    pub representative: [u32; 4],
}

#[derive(Debug, Clone, Serialize)]
pub struct TableExport {
    pub p: u64,
    pub variant: Variant,
    pub order: u64,
    pub conductor: u32,
    pub naming_rule: &'static str,
    pub classes: Vec<ClassExport>,
    pub irreps: Vec<IrrepLabel>,
    pub values: Vec<Vec<ExactValue>>,
}

pub const NAMING_RULE: &str = "V<dim>, with ' when the irrep does not factor through PSL and a PSL irrep of the same \
     dimension exists; two irreps with the same name are V and V* ordered by (imaginary, real) part of the character \
     at the first differing class, descending; three or more get _1, _2, ... in that order";

impl CharacterTable {
    pub fn export(&self) -> TableExport {
        let f = &self.field;
        TableExport {
            p: self.p(),
            variant: self.group.variant,
            order: self.group.order,
            conductor: f.conductor(),
            naming_rule: NAMING_RULE,
            classes: self
                .classes
                .iter()
                .map(|c| ClassExport {
                    name: c.name.clone(),
                    size: c.size,
                    element_order: c.element_order,
                    representative: c.representative.entries,
                })
                .collect(),
            irreps: self.irreps.clone(),
            values: self
                .values
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|v| {
                            let z = f.to_complex(v);
                            ExactValue {
                                terms: v.terms().iter().map(|&(k, c)| (k, c.to_string())).collect(),
                                re: z.re,
                                im: z.im,
                            }
                        })
                        .collect()
                })
                .collect(),
        }
    }

    pub fn to_tsv(&self) -> String {
        let mut s = String::from("irrep");
        for c in &self.classes {
            s.push('\t');
            s.push_str(&c.name);
        }
        s.push('\n');
        for (i, r) in self.irreps.iter().enumerate() {
            s.push_str(&r.name);
            for c in 0..self.classes.len() {
                let z = self.value_complex(i, c);
                s.push('\t');
                if z.im.abs() < 1e-9 {
                    s.push_str(&format!("{:.6}", z.re));
                } else {
                    s.push_str(&format!("{:.6}{:+.6}i", z.re, z.im));
                }
            }
            s.push('\n');
        }
        s
    }
}
