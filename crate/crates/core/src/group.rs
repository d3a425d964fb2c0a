//! SL(2,p) and PSL(2,p): conjugacy classes in closed form, power maps, and a
//! brute-force enumeration used as an oracle for small p.

use num_integer::Integer;
use serde::Serialize;
use std::collections::{HashMap, VecDeque};

use crate::arith;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Variant {
    SL2,
    PSL2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GroupDescriptor {
    pub p: u64,
    pub variant: Variant,
    pub order: u64,
}

pub fn build_group(p: u64, variant: Variant) -> Result<GroupDescriptor> {
    if !arith::is_prime(p) {
        return Err(Error::NonPrime(p));
    }
    if p < 5 {
        return Err(Error::PrimeTooSmall(p));
    }
    let sl = p * (p * p - 1);
    let order = match variant {
        Variant::SL2 => sl,
        Variant::PSL2 => sl / 2,
    };
    Ok(GroupDescriptor { p, variant, order })
}

/// A 2x2 matrix of determinant 1 over F_p, entries in 0..p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct GroupElement {
    pub entries: [u32; 4],
    pub projective: bool,
}

impl GroupElement {
    pub fn new(p: u64, a: i64, b: i64, c: i64, d: i64, projective: bool) -> GroupElement {
        let r = |x: i64| arith::modp(x, p as i64) as u32;
        let e = GroupElement { entries: [r(a), r(b), r(c), r(d)], projective };
        debug_assert_eq!(e.det(p), 1);
        if projective {
            e.normalized(p)
        } else {
            e
        }
    }

    pub fn identity(projective: bool) -> GroupElement {
        GroupElement { entries: [1, 0, 0, 1], projective }
    }

    pub fn det(&self, p: u64) -> u64 {
        let [a, b, c, d] = self.entries.map(|x| x as i64);
        arith::modp(a * d - b * c, p as i64) as u64
    }

    pub fn trace(&self, p: u64) -> u64 {
        (self.entries[0] as u64 + self.entries[3] as u64) % p
    }

    pub fn neg(&self, p: u64) -> GroupElement {
        let e = self.entries.map(|x| (p as u32 - x) % p as u32);
        GroupElement { entries: e, projective: self.projective }
    }

    /// Projective normal form: first nonzero entry in 1..=(p-1)/2.
    pub fn normalized(&self, p: u64) -> GroupElement {
        let first = *self.entries.iter().find(|&&x| x != 0).unwrap();
        let mut e = if first as u64 > (p - 1) / 2 { self.neg(p) } else { *self };
        e.projective = true;
        e
    }

    pub fn mul(&self, other: &GroupElement, p: u64) -> GroupElement {
        let [a, b, c, d] = self.entries.map(|x| x as u64);
        let [e, f, g, h] = other.entries.map(|x| x as u64);
        let out = GroupElement {
            entries: [
                ((a * e + b * g) % p) as u32,
                ((a * f + b * h) % p) as u32,
                ((c * e + d * g) % p) as u32,
                ((c * f + d * h) % p) as u32,
            ],
            projective: self.projective,
        };
        if self.projective {
            out.normalized(p)
        } else {
            out
        }
    }

    pub fn inverse(&self, p: u64) -> GroupElement {
        let [a, b, c, d] = self.entries.map(|x| x as i64);
        GroupElement::new(p, d, -b, -c, a, self.projective)
    }

    pub fn pow(&self, j: u64, p: u64) -> GroupElement {
        let mut acc = GroupElement::identity(self.projective);
        let mut base = *self;
        let mut e = j;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, p);
            }
            base = base.mul(&base, p);
            e >>= 1;
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.entries == [1, 0, 0, 1]
    }

    fn key(&self, p: u64) -> u32 {
        let [a, b, c, d] = self.entries;
        let p = p as u32;
        ((a * p + b) * p + c) * p + d
    }
}

/// Closed-form type of an SL(2,p) class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ClassKind {
    Identity,
    MinusIdentity,
    /// sign * [[1, r], [0, 1]] with r = 1 (residue) or r = a fixed nonresidue.
    Unipotent { negative: bool, residue: bool },
    /// diag(g^l, g^-l), g a primitive root mod p.
    Split(u64),
    /// eigenvalues h^{+-l}, h of order p+1 in F_{p^2}.
    Nonsplit(u64),
}

#[derive(Debug, Clone, Serialize)]
pub struct ConjugacyClass {
    pub name: String,
    pub kind: ClassKind,
    pub representative: GroupElement,
    pub size: u64,
    pub element_order: u64,
    /// power_map[j] = class of representative^j, for 0 <= j < element_order.
    pub power_map: Vec<usize>,
    /// For PSL classes: indices of the SL classes fused into this one.
    pub lifts: Vec<usize>,
}

/// Field data fixed once per prime: primitive root, nonresidue, and the
/// generator of the norm-one subgroup of F_{p^2}.
#[derive(Debug, Clone, Copy)]
pub struct PrimeData {
    pub p: u64,
    pub primitive_root: u64,
    pub nonresidue: u64,
    /// F_{p^2} = F_p[x]/(x^2 - nonresidue); h = h0 + h1 x has order p+1.
    pub h: (u64, u64),
}

impl PrimeData {
    pub fn new(p: u64) -> PrimeData {
        let d = arith::smallest_nonresidue(p);
        let g = arith::primitive_root(p);
        let h = norm_one_generator(p, d);
        PrimeData { p, primitive_root: g, nonresidue: d, h }
    }

    fn fp2_mul(&self, x: (u64, u64), y: (u64, u64)) -> (u64, u64) {
        let p = self.p;
        ((x.0 * y.0 + x.1 * y.1 % p * self.nonresidue) % p, (x.0 * y.1 + x.1 * y.0) % p)
    }

    fn fp2_pow(&self, x: (u64, u64), mut e: u64) -> (u64, u64) {
        let mut acc = (1, 0);
        let mut b = x;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.fp2_mul(acc, b);
            }
            b = self.fp2_mul(b, b);
            e >>= 1;
        }
        acc
    }

    /// Trace in F_p of h^l + h^{-l}.
    pub fn nonsplit_trace(&self, l: u64) -> u64 {
        let x = self.fp2_pow(self.h, l);
        // h^{-l} is the conjugate (x0, -x1) since the norm is one
        2 * x.0 % self.p
    }
}

fn norm_one_generator(p: u64, d: u64) -> (u64, u64) {
    let pd = PrimeData { p, primitive_root: 0, nonresidue: d, h: (1, 0) };
    let order = p * p - 1;
    let factors = arith::prime_factors(order);
    for a in 0..p {
        for b in 1..p {
            let x = (a, b);
            if factors.iter().all(|&q| pd.fp2_pow(x, order / q) != (1, 0)) {
                return pd.fp2_pow(x, p - 1);
            }
        }
    }
    unreachable!("F_{{p^2}} has a primitive element")
}

/// Layout of the SL(2,p) class list: I, -I, u, u', -u, -u', split l = 1..(p-3)/2,
/// nonsplit l = 1..(p-1)/2.
pub fn sl_class_index(p: u64, kind: ClassKind) -> usize {
    match kind {
        ClassKind::Identity => 0,
        ClassKind::MinusIdentity => 1,
        ClassKind::Unipotent { negative, residue } => 2 + 2 * negative as usize + (!residue) as usize,
        ClassKind::Split(l) => 6 + (l as usize - 1),
        ClassKind::Nonsplit(l) => 6 + ((p - 3) / 2) as usize + (l as usize - 1),
    }
}

fn torus_power(l: u64, j: u64, m: u64, split: bool) -> ClassKind {
    let r = l * j % m;
    if r == 0 {
        ClassKind::Identity
    } else if 2 * r == m {
        ClassKind::MinusIdentity
    } else {
        let r = r.min(m - r);
        if split {
            ClassKind::Split(r)
        } else {
            ClassKind::Nonsplit(r)
        }
    }
}

/// Class kind of rep(kind)^j in SL(2,p).
pub fn sl_power_kind(p: u64, kind: ClassKind, j: u64) -> ClassKind {
    match kind {
        ClassKind::Identity => ClassKind::Identity,
        ClassKind::MinusIdentity => {
            if j % 2 == 0 {
                ClassKind::Identity
            } else {
                ClassKind::MinusIdentity
            }
        }
        ClassKind::Unipotent { negative, residue } => {
            let neg = negative && j % 2 == 1;
            if j % p == 0 {
                return if neg { ClassKind::MinusIdentity } else { ClassKind::Identity };
            }
            let leg = arith::legendre(j as i64, p);
            let res = (leg == 1) == residue;
            ClassKind::Unipotent { negative: neg, residue: res }
        }
        ClassKind::Split(l) => torus_power(l, j, p - 1, true),
        ClassKind::Nonsplit(l) => torus_power(l, j, p + 1, false),
    }
}

fn sl_kinds(p: u64) -> Vec<ClassKind> {
    let mut v = vec![ClassKind::Identity, ClassKind::MinusIdentity];
    for negative in [false, true] {
        for residue in [true, false] {
            v.push(ClassKind::Unipotent { negative, residue });
        }
    }
    v.extend((1..=(p - 3) / 2).map(ClassKind::Split));
    v.extend((1..=(p - 1) / 2).map(ClassKind::Nonsplit));
    v
}

fn kind_name(kind: ClassKind) -> String {
    match kind {
        ClassKind::Identity => "1".into(),
        ClassKind::MinusIdentity => "-1".into(),
        ClassKind::Unipotent { negative, residue } => {
            format!("{}u{}", if negative { "-" } else { "" }, if residue { "" } else { "'" })
        }
        ClassKind::Split(l) => format!("a{l}"),
        ClassKind::Nonsplit(l) => format!("b{l}"),
    }
}

fn sl_representative(pd: &PrimeData, kind: ClassKind) -> GroupElement {
    let p = pd.p;
    let pi = p as i64;
    match kind {
        ClassKind::Identity => GroupElement::new(p, 1, 0, 0, 1, false),
        ClassKind::MinusIdentity => GroupElement::new(p, -1, 0, 0, -1, false),
        ClassKind::Unipotent { negative, residue } => {
            let r = if residue { 1 } else { pd.nonresidue as i64 };
            let s = if negative { -1 } else { 1 };
            GroupElement::new(p, s, s * r, 0, s, false)
        }
        ClassKind::Split(l) => {
            let x = arith::pow_mod(pd.primitive_root, l, p) as i64;
            let y = arith::inv_mod(x, pi).unwrap();
            GroupElement::new(p, x, 0, 0, y, false)
        }
        ClassKind::Nonsplit(l) => {
            let t = pd.nonsplit_trace(l) as i64;
            GroupElement::new(p, 0, -1, 1, t, false)
        }
    }
}

fn sl_size_and_order(p: u64, kind: ClassKind) -> (u64, u64) {
    match kind {
        ClassKind::Identity => (1, 1),
        ClassKind::MinusIdentity => (1, 2),
        ClassKind::Unipotent { negative, .. } => ((p * p - 1) / 2, if negative { 2 * p } else { p }),
        ClassKind::Split(l) => (p * (p + 1), (p - 1) / l.gcd(&(p - 1))),
        ClassKind::Nonsplit(l) => (p * (p - 1), (p + 1) / l.gcd(&(p + 1))),
    }
}

fn sl_classes(p: u64) -> Vec<ConjugacyClass> {
    let pd = PrimeData::new(p);
    sl_kinds(p)
        .into_iter()
        .map(|kind| {
            let (size, order) = sl_size_and_order(p, kind);
            let power_map =
                (0..order).map(|j| sl_class_index(p, sl_power_kind(p, kind, j))).collect();
            ConjugacyClass {
                name: kind_name(kind),
                kind,
                representative: sl_representative(&pd, kind),
                size,
                element_order: order,
                power_map,
                lifts: vec![],
            }
        })
        .collect()
}

/// SL class index of minus the representative of an SL class.
pub fn sl_negate(p: u64, kind: ClassKind) -> ClassKind {
    match kind {
        ClassKind::Identity => ClassKind::MinusIdentity,
        ClassKind::MinusIdentity => ClassKind::Identity,
        ClassKind::Unipotent { negative, residue } => ClassKind::Unipotent { negative: !negative, residue },
        ClassKind::Split(l) => torus_power(l, 1, p - 1, true).shift(p, true),
        ClassKind::Nonsplit(l) => torus_power(l, 1, p + 1, false).shift(p, false),
    }
}

impl ClassKind {
    // multiply a torus class by -I
    fn shift(self, p: u64, split: bool) -> ClassKind {
        let m = if split { p - 1 } else { p + 1 };
        let l = match self {
            ClassKind::Split(l) | ClassKind::Nonsplit(l) => l,
            _ => unreachable!(),
        };
        torus_power(l + m / 2, 1, m, split)
    }
}

fn psl_classes(p: u64) -> Vec<ConjugacyClass> {
    let sl = sl_classes(p);
    // group SL classes into {c, -c} orbits, in SL order of first appearance
    let mut fused_of = vec![usize::MAX; sl.len()];
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, c) in sl.iter().enumerate() {
        if fused_of[i] != usize::MAX {
            continue;
        }
        let j = sl_class_index(p, sl_negate(p, c.kind));
        let g = groups.len();
        fused_of[i] = g;
        fused_of[j] = g;
        groups.push(if i == j { vec![i] } else { vec![i, j] });
    }
    groups
        .iter()
        .map(|lifts| {
            let c = &sl[lifts[0]];
            let size = if lifts.len() == 2 || c.kind == ClassKind::Identity { c.size } else { c.size / 2 };
            // order modulo the centre
            let order = (1..=c.element_order)
                .find(|&j| {
                    let k = c.power_map[j as usize % c.element_order as usize];
                    k == 0 || k == 1
                })
                .unwrap();
            let power_map = (0..order)
                .map(|j| fused_of[c.power_map[j as usize % c.element_order as usize]])
                .collect();
            ConjugacyClass {
                name: c.name.clone(),
                kind: c.kind,
                representative: c.representative.normalized(p),
                size,
                element_order: order,
                power_map,
                lifts: lifts.clone(),
            }
        })
        .collect()
}

pub fn conjugacy_classes(g: &GroupDescriptor) -> Vec<ConjugacyClass> {
    match g.variant {
        Variant::SL2 => sl_classes(g.p),
        Variant::PSL2 => psl_classes(g.p),
    }
}

pub fn power_class(classes: &[ConjugacyClass], c: usize, j: i64) -> Result<usize> {
    let cls = classes.get(c).ok_or(Error::IndexOutOfRange { index: c, len: classes.len() })?;
    let o = cls.element_order as i64;
    Ok(cls.power_map[arith::modp(j, o) as usize])
}

/// Brute-force class partition by conjugation orbits under the generators
/// S = [[0,-1],[1,0]] and T = [[1,1],[0,1]].
#[derive(Debug, Clone)]
pub struct BruteClasses {
    pub p: u64,
    pub projective: bool,
    class_of: HashMap<u32, usize>,
    pub sizes: Vec<u64>,
    pub orders: Vec<u64>,
}

impl BruteClasses {
    pub fn class_of(&self, e: &GroupElement) -> usize {
        let e = if self.projective { e.normalized(self.p) } else { *e };
        self.class_of[&e.key(self.p)]
    }

    pub fn num_classes(&self) -> usize {
        self.sizes.len()
    }

    pub fn group_order(&self) -> u64 {
        self.sizes.iter().sum()
    }
}

pub fn all_elements(p: u64, projective: bool) -> Vec<GroupElement> {
    let pi = p as i64;
    let mut out = Vec::new();
    for a in 0..pi {
        for b in 0..pi {
            for c in 0..pi {
                if a != 0 {
                    let d = (1 + b * c) * arith::inv_mod(a, pi).unwrap();
                    out.push(GroupElement::new(p, a, b, c, d, false));
                } else if b != 0 {
                    if c != arith::modp(-arith::inv_mod(b, pi).unwrap(), pi) {
                        continue;
                    }
                    for d in 0..pi {
                        out.push(GroupElement::new(p, a, b, c, d, false));
                    }
                }
            }
        }
    }
    if projective {
        let mut seen = std::collections::HashSet::new();
        out = out.into_iter().map(|e| e.normalized(p)).filter(|e| seen.insert(e.key(p))).collect();
    }
    out
}

pub fn brute_force_classes(g: &GroupDescriptor) -> BruteClasses {
    let p = g.p;
    let projective = g.variant == Variant::PSL2;
    let s = GroupElement::new(p, 0, -1, 1, 0, projective);
    let t = GroupElement::new(p, 1, 1, 0, 1, projective);
    let gens = [(s, s.inverse(p)), (t, t.inverse(p))];
    let elements = all_elements(p, projective);
    let mut class_of = HashMap::with_capacity(elements.len());
    let mut sizes = Vec::new();
    let mut orders = Vec::new();
    for e in &elements {
        if class_of.contains_key(&e.key(p)) {
            continue;
        }
        let id = sizes.len();
        let mut queue = VecDeque::from([*e]);
        class_of.insert(e.key(p), id);
        let mut size = 0;
        while let Some(x) = queue.pop_front() {
            size += 1;
            for (g, gi) in &gens {
                let y = g.mul(&x, p).mul(gi, p);
                if let std::collections::hash_map::Entry::Vacant(v) = class_of.entry(y.key(p)) {
                    v.insert(id);
                    queue.push_back(y);
                }
            }
        }
        let order = (1..).find(|&j| e.pow(j, p).is_identity()).unwrap();
        sizes.push(size);
        orders.push(order);
    }
    BruteClasses { p, projective, class_of, sizes, orders }
}

/// Compare closed-form classes with brute force. Returns a list of problems.
pub fn oracle_mismatches(g: &GroupDescriptor) -> Vec<String> {
    let classes = conjugacy_classes(g);
    let brute = brute_force_classes(g);
    let mut problems = Vec::new();
    if classes.len() != brute.num_classes() {
        problems.push(format!("class count {} vs brute {}", classes.len(), brute.num_classes()));
    }
    let mut seen = HashMap::new();
    for (i, c) in classes.iter().enumerate() {
        let b = brute.class_of(&c.representative);
        if let Some(j) = seen.insert(b, i) {
            problems.push(format!("classes {j} and {i} are conjugate"));
        }
        if brute.sizes[b] != c.size {
            problems.push(format!("class {}: size {} vs brute {}", c.name, c.size, brute.sizes[b]));
        }
        if brute.orders[b] != c.element_order {
            problems.push(format!("class {}: order {} vs brute {}", c.name, c.element_order, brute.orders[b]));
        }
        for j in 0..c.element_order {
            let x = c.representative.pow(j, g.p);
            let target = &classes[c.power_map[j as usize]].representative;
            if brute.class_of(&x) != brute.class_of(target) {
                problems.push(format!("class {}: power {j} lands in the wrong class", c.name));
            }
        }
    }
    problems
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        assert_eq!(build_group(7, Variant::PSL2).unwrap().order, 168);
        assert_eq!(build_group(7, Variant::SL2).unwrap().order, 336);
        assert_eq!(build_group(11, Variant::PSL2).unwrap().order, 660);
        assert_eq!(build_group(9, Variant::SL2), Err(Error::NonPrime(9)));
        assert_eq!(build_group(3, Variant::SL2), Err(Error::PrimeTooSmall(3)));
    }

    #[test]
    fn class_counts_small() {
        let sl7 = build_group(7, Variant::SL2).unwrap();
        assert_eq!(conjugacy_classes(&sl7).len(), 11);
        let psl7 = build_group(7, Variant::PSL2).unwrap();
        let cl = conjugacy_classes(&psl7);
        assert_eq!(cl.len(), 6);
        assert_eq!(cl[0].size, 1);
    }

    #[test]
    fn nonsplit_generator_has_order_p_plus_one() {
        for p in [5u64, 7, 11, 13, 97] {
            let pd = PrimeData::new(p);
            assert_eq!(pd.fp2_pow(pd.h, p + 1), (1, 0));
            for q in arith::prime_factors(p + 1) {
                assert_ne!(pd.fp2_pow(pd.h, (p + 1) / q), (1, 0));
            }
        }
    }
}
