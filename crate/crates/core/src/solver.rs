//! Numerical construction of unitary triples A1 A2 A3 = c I with prescribed
//! spectra, and their certification.
//!
//! Each A_i = U_i D_i U_i^* with D_i fixed, so only the product relation is
//! optimized. Descent runs on left translations U_i <- Q U_i with Q a Cayley
//! transform of a skew-Hermitian step; a damped Gauss-Newton pass polishes
//! starts that already sit in a basin.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;
use std::f64::consts::PI;

use crate::chartab::CharacterTable;
use crate::error::{Error, Result};
use crate::moduli::central_extension;
use crate::picard::DyckSignature;
use crate::repring::eigenvalue_multiset;

pub type CMat = DMatrix<Complex64>;

fn ratio_strings<S: serde::Serializer>(a: &[Vec<Ratio<i64>>], s: S) -> std::result::Result<S::Ok, S::Error> {
    let v: Vec<Vec<String>> = a.iter().map(|r| r.iter().map(|x| format!("{}/{}", x.numer(), x.denom())).collect()).collect();
    serde::Serialize::serialize(&v, s)
}

/// Spectra of three generators (eigen-angles in units of pi) and the scalar
/// the product must equal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassSpec {
    pub rank: usize,
    #[serde(serialize_with = "ratio_strings")]
    pub angles: Vec<Vec<Ratio<i64>>>,
    pub central_sign: i64,
}

impl ClassSpec {
    pub fn new(rank: usize, angles: Vec<Vec<Ratio<i64>>>, central_sign: i64) -> Result<ClassSpec> {
        if angles.len() != 3 || angles.iter().any(|a| a.len() != rank) {
            return Err(Error::DimensionMismatch(format!("need three spectra of length {rank}")));
        }
        Ok(ClassSpec { rank, angles, central_sign })
    }

    /// det A1 det A2 det A3 = c^r.
    pub fn determinant_consistent(&self) -> bool {
        let total: Ratio<i64> = self.angles.iter().flatten().sum();
        let target = if self.central_sign == -1 && self.rank % 2 == 1 { 1 } else { 0 };
        total.is_integer() && (total.to_integer() - target).rem_euclid(2) == 0
    }

    pub fn eigenvalues(&self, i: usize) -> Vec<Complex64> {
        self.angles[i].iter().map(|a| Complex64::from_polar(1.0, PI * *a.numer() as f64 / *a.denom() as f64)).collect()
    }

    /// Spectra of the symmetric square.
    pub fn sym_square(&self) -> Result<ClassSpec> {
        if self.rank != 2 {
            return Err(Error::DimensionMismatch("symmetric square needs rank 2".into()));
        }
        let angles = self.angles.iter().map(|a| vec![a[0] * 2, a[0] + a[1], a[1] * 2]).collect();
        ClassSpec::new(3, angles, 1)
    }

    /// Spectra of an irrep on three classes, read off its character.
    pub fn from_characters(t: &CharacterTable, irrep: usize, classes: [usize; 3], central_sign: i64) -> Result<ClassSpec> {
        let mut angles = Vec::new();
        for c in classes {
            let o = t.classes[c].element_order as i64;
            let mut a = Vec::new();
            for (r, m) in eigenvalue_multiset(t, irrep, c)? {
                for _ in 0..m {
                    a.push(Ratio::new(2 * r as i64, o));
                }
            }
            angles.push(a);
        }
        ClassSpec::new(t.irreps[irrep].dimension as usize, angles, central_sign)
    }
}

/// SU(2) spectra for rotation number k on Sigma(2,3,p), using the same
/// normalization as the census. Also returns the sign relating trace A3 to
/// 2cos(pi k / p).
pub fn rotation_spec(p: u64, k: u64) -> Result<(ClassSpec, i64)> {
    let ce = central_extension(&DyckSignature::triangle(2, 3, p)?)?;
    if k == 0 || k >= p {
        return Err(Error::AngleOutOfRange(format!("k = {k} for p = {p}")));
    }
    let renormalize = ce.b_i[2] % 2 != ce.b_i[1] % 2;
    let l3 = if renormalize { p - k } else { k };
    let l2 = if ce.b_i[1] % 2 == 1 { 1 } else { 2 };
    if l3 % 2 != ce.b_i[2] % 2 {
        return Err(Error::AngleOutOfRange(format!("k = {k} has the wrong parity for p = {p}")));
    }
    let pm = |a: Ratio<i64>| vec![a, -a];
    let angles = vec![pm(Ratio::new(1, 2)), pm(Ratio::new(l2, 3)), pm(Ratio::new(l3 as i64, p as i64))];
    let sign = if ce.b % 2 == 0 { 1 } else { -1 };
    Ok((ClassSpec::new(2, angles, sign)?, if renormalize { -1 } else { 1 }))
}

#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryTuple {
    pub mats: Vec<CMat>,
}

impl Serialize for UnitaryTuple {
    /// Row-major (re, im) pairs per matrix.
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<Vec<Vec<[f64; 2]>>> = self
            .mats
            .iter()
            .map(|m| (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect())
            .collect();
        v.serialize(s)
    }
}

impl UnitaryTuple {
    pub fn rank(&self) -> usize {
        self.mats[0].nrows()
    }

    pub fn identity(rank: usize) -> UnitaryTuple {
        UnitaryTuple { mats: vec![CMat::identity(rank, rank); 3] }
    }

    pub fn traces(&self) -> Vec<Complex64> {
        self.mats.iter().map(|m| m.trace()).collect()
    }

    pub fn unitarity_defect(&self) -> f64 {
        self.mats
            .iter()
            .map(|m| (m * m.adjoint() - CMat::identity(m.nrows(), m.nrows())).norm())
            .fold(0.0, f64::max)
    }

    /// Symmetric square in the orthonormal basis e1^2, sqrt2 e1 e2, e2^2.
    pub fn sym_square(&self) -> Result<UnitaryTuple> {
        if self.rank() != 2 {
            return Err(Error::DimensionMismatch("symmetric square needs rank 2".into()));
        }
        let s2 = Complex64::new(2f64.sqrt(), 0.0);
        let mats = self
            .mats
            .iter()
            .map(|m| {
                let (a, b, c, d) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
                CMat::from_row_slice(
                    3,
                    3,
                    &[a * a, s2 * a * b, b * b, s2 * a * c, a * d + b * c, s2 * b * d, c * c, s2 * c * d, d * d],
                )
            })
            .collect();
        Ok(UnitaryTuple { mats })
    }
}

fn scalar(r: usize, c: f64) -> CMat {
    CMat::identity(r, r) * Complex64::new(c, 0.0)
}

/// Frobenius norms of A_i^{e_i} - sign^{b_i} I and A1 A2 A3 - sign^b I.
pub fn verify_relations(tuple: &UnitaryTuple, sig: &DyckSignature, b_i: &[u64], b: i64, central_sign: i64) -> Result<Vec<f64>> {
    if tuple.mats.len() != sig.e.len() || b_i.len() != sig.e.len() {
        return Err(Error::DimensionMismatch("tuple length differs from signature".into()));
    }
    let r = tuple.rank();
    if tuple.mats.iter().any(|m| m.nrows() != r || m.ncols() != r) {
        return Err(Error::DimensionMismatch("matrices of different sizes".into()));
    }
    let pw = |e: u64| if central_sign == 1 || e % 2 == 0 { 1.0 } else { -1.0 };
    let mut out = Vec::new();
    for (m, (&e, &bi)) in tuple.mats.iter().zip(sig.e.iter().zip(b_i)) {
        let mut acc = CMat::identity(r, r);
        for _ in 0..e {
            acc = &acc * m;
        }
        out.push((acc - scalar(r, pw(bi))).norm());
    }
    let prod = tuple.mats.iter().fold(CMat::identity(r, r), |acc, m| acc * m);
    out.push((prod - scalar(r, pw(b.rem_euclid(2) as u64))).norm());
    Ok(out)
}

/// Largest deviation between tr(A_i^j) and the prescribed power sums, j <= r.
pub fn spectral_error(tuple: &UnitaryTuple, spec: &ClassSpec) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, m) in tuple.mats.iter().enumerate() {
        let eig = spec.eigenvalues(i);
        let mut pw = CMat::identity(spec.rank, spec.rank);
        for j in 1..=spec.rank as i32 {
            pw = &pw * m;
            let want: Complex64 = eig.iter().map(|z| z.powi(j)).sum();
            worst = worst.max((pw.trace() - want).norm());
        }
    }
    worst
}

/// Dimension of the commutant of the tuple, from the singular values of the
/// stacked linear system X A_i = A_i X.
pub fn commutant_dimension(tuple: &UnitaryTuple, threshold: f64) -> usize {
    let r = tuple.rank();
    let id = CMat::identity(r, r);
    let blocks: Vec<CMat> = tuple.mats.iter().map(|a| a.transpose().kronecker(&id) - id.kronecker(a)).collect();
    let mut k = CMat::zeros(blocks.len() * r * r, r * r);
    for (i, b) in blocks.iter().enumerate() {
        k.view_mut((i * r * r, 0), (r * r, r * r)).copy_from(b);
    }
    let sv = k.svd(false, false).singular_values;
    sv.iter().filter(|&&s| s < threshold).count()
}

pub fn irreducibility(tuple: &UnitaryTuple) -> bool {
    commutant_dimension(tuple, 1e-8) == 1
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveConfig {
    pub starts: usize,
    pub max_iterations: usize,
    pub tolerance: f64,
    pub seed: u64,
    pub require_irreducible: bool,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig { starts: 32, max_iterations: 10_000, tolerance: 1e-10, seed: 0, require_irreducible: false }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub converged: bool,
    pub tuple: Option<UnitaryTuple>,
    /// Product residual ||A1 A2 A3 - c I|| of the returned tuple (or best start).
    pub residual: f64,
    pub spectral_error: f64,
    pub irreducible: Option<bool>,
    pub starts_used: usize,
    pub iterations: usize,
    /// Best residual of each start, in start order.
    pub start_residuals: Vec<f64>,
}

struct State<'a> {
    spec: &'a ClassSpec,
    diag: Vec<CMat>,
    u: Vec<CMat>,
}

impl<'a> State<'a> {
    fn new(spec: &'a ClassSpec, rng: &mut ChaCha8Rng) -> State<'a> {
        let r = spec.rank;
        let diag = (0..3).map(|i| CMat::from_diagonal(&DVector::from_vec(spec.eigenvalues(i)))).collect();
        let u = (0..3)
            .map(|_| {
                let g = CMat::from_fn(r, r, |_, _| {
                    Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
                });
                g.qr().q()
            })
            .collect();
        State { spec, diag, u }
    }

    fn mats(&self) -> Vec<CMat> {
        self.u.iter().zip(&self.diag).map(|(u, d)| u * d * u.adjoint()).collect()
    }

    fn target(&self) -> CMat {
        scalar(self.spec.rank, self.spec.central_sign as f64)
    }

    fn residual(&self, a: &[CMat]) -> CMat {
        &a[0] * &a[1] * &a[2] - self.target()
    }

    /// (left product, right product) around each generator.
    fn sides(a: &[CMat]) -> [(CMat, CMat); 3] {
        let r = a[0].nrows();
        let id = CMat::identity(r, r);
        [(id.clone(), &a[1] * &a[2]), (a[0].clone(), a[2].clone()), (&a[0] * &a[1], id)]
    }

    /// Skew-Hermitian descent directions for each U_i.
    fn descent(&self, a: &[CMat], res: &CMat) -> Vec<CMat> {
        State::sides(a)
            .iter()
            .zip(a)
            .map(|((l, r), ai)| {
                let m = r * res.adjoint() * l;
                let g = ai * &m - &m * ai;
                (&g - g.adjoint()) * Complex64::new(0.5, 0.0)
            })
            .collect()
    }

    fn moved(&self, steps: &[CMat], t: f64) -> Vec<CMat> {
        self.u.iter().zip(steps).map(|(u, s)| cayley(&(s * Complex64::new(t, 0.0))) * u).collect()
    }
}

fn cayley(omega: &CMat) -> CMat {
    let r = omega.nrows();
    let half = omega * Complex64::new(0.5, 0.0);
    let id = CMat::identity(r, r);
    let inv = (&id - &half).try_inverse().expect("I - X/2 is invertible for skew-Hermitian X");
    inv * (id + half)
}

fn inner(a: &CMat, b: &CMat) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x.conj() * y).re).sum()
}

/// Basis of u(r) over the reals.
fn lie_basis(r: usize) -> Vec<CMat> {
    let mut out = Vec::new();
    let i = Complex64::new(0.0, 1.0);
    for j in 0..r {
        let mut m = CMat::zeros(r, r);
        m[(j, j)] = i;
        out.push(m);
        for k in j + 1..r {
            let mut m = CMat::zeros(r, r);
            m[(j, k)] = Complex64::new(1.0, 0.0);
            m[(k, j)] = Complex64::new(-1.0, 0.0);
            out.push(m);
            let mut m = CMat::zeros(r, r);
            m[(j, k)] = i;
            m[(k, j)] = i;
            out.push(m);
        }
    }
    out
}

fn loss_of(state: &State, u: &[CMat]) -> f64 {
    let a: Vec<CMat> = u.iter().zip(&state.diag).map(|(u, d)| u * d * u.adjoint()).collect();
    state.residual(&a).norm_squared()
}

/// Damped Gauss-Newton on the Lie-algebra coordinates.
fn polish(state: &mut State, iterations: usize, tol: f64) -> (f64, usize) {
    let r = state.spec.rank;
    let basis = lie_basis(r);
    let nb = basis.len();
    let mut mu = 1e-6;
    let mut loss = loss_of(state, &state.u);
    for it in 0..iterations {
        if loss.sqrt() < tol * 1e-2 {
            return (loss, it);
        }
        let a = state.mats();
        let res = state.residual(&a);
        let sides = State::sides(&a);
        let mut j = DMatrix::<f64>::zeros(2 * r * r, 3 * nb);
        for g in 0..3 {
            let (l, rr) = &sides[g];
            for (bi, b) in basis.iter().enumerate() {
                let d = l * (b * &a[g] - &a[g] * b) * rr;
                for (idx, z) in d.iter().enumerate() {
                    j[(2 * idx, g * nb + bi)] = z.re;
                    j[(2 * idx + 1, g * nb + bi)] = z.im;
                }
            }
        }
        let f = DVector::<f64>::from_iterator(2 * r * r, res.iter().flat_map(|z| [z.re, z.im]));
        let jt = j.transpose();
        let rhs = -(&jt * &f);
        let mut improved = false;
        for _ in 0..12 {
            let mut h = &jt * &j;
            for k in 0..h.nrows() {
                h[(k, k)] += mu;
            }
            let Some(delta) = h.clone().cholesky().map(|c| c.solve(&rhs)) else {
                mu *= 10.0;
                continue;
            };
            let steps: Vec<CMat> = (0..3)
                .map(|g| basis.iter().enumerate().fold(CMat::zeros(r, r), |acc, (bi, b)| acc + b * Complex64::new(delta[g * nb + bi], 0.0)))
                .collect();
            let cand = state.moved(&steps, 1.0);
            let cl = loss_of(state, &cand);
            if cl < loss {
                state.u = cand;
                loss = cl;
                mu = (mu / 3.0).max(1e-15);
                improved = true;
                break;
            }
            mu *= 4.0;
        }
        if !improved {
            return (loss, it);
        }
    }
    (loss, iterations)
}

/// One start: momentum descent with backtracking, then polishing. Returns
/// (final loss, iterations).
fn run_start(state: &mut State, config: &SolveConfig) -> (f64, usize) {
    let beta = 0.8;
    let mut t = 0.5;
    let mut velocity: Option<Vec<CMat>> = None;
    let mut a = state.mats();
    let mut res = state.residual(&a);
    let mut loss = res.norm_squared();
    let mut checkpoint = (loss, 0usize);
    let mut it = 0;
    while it < config.max_iterations {
        if loss < 1e-8 {
            break;
        }
        let d = state.descent(&a, &res);
        let mut v: Vec<CMat> = match velocity.take() {
            Some(v) => v.iter().zip(&d).map(|(v, d)| v * Complex64::new(beta, 0.0) + d).collect(),
            None => d.clone(),
        };
        // keep the search direction downhill
        let slope: f64 = v.iter().zip(&d).map(|(v, d)| inner(v, d)).sum();
        if slope <= 0.0 {
            v = d.clone();
        }
        let mut accepted = false;
        while t > 1e-14 {
            let cand = state.moved(&v, t);
            let cl = loss_of(state, &cand);
            if cl < loss {
                state.u = cand;
                loss = cl;
                accepted = true;
                t = (t * 1.5).min(4.0);
                break;
            }
            t *= 0.5;
            v = d.clone();
        }
        it += 1;
        if !accepted {
            break;
        }
        velocity = Some(v);
        if it % 64 == 0 {
            for u in state.u.iter_mut() {
                *u = u.clone().qr().q();
            }
        }
        a = state.mats();
        res = state.residual(&a);
        loss = res.norm_squared();
        // stall: no relative progress over a long window while far from a solution
        if it - checkpoint.1 >= 500 {
            if loss > 1e-6 && loss > 0.999 * checkpoint.0 {
                break;
            }
            checkpoint = (loss, it);
        }
    }
    if loss < 1e-2 {
        let (l, extra) = polish(state, 100, config.tolerance);
        return (l, it + extra);
    }
    (loss, it)
}

fn tuple_from(state: &State) -> UnitaryTuple {
    UnitaryTuple { mats: state.mats() }
}

pub fn solve_triple(spec: &ClassSpec, config: &SolveConfig) -> SolveReport {
    let mut report = SolveReport {
        converged: false,
        tuple: None,
        residual: f64::INFINITY,
        spectral_error: f64::INFINITY,
        irreducible: None,
        starts_used: 0,
        iterations: 0,
        start_residuals: Vec::new(),
    };
    if !spec.determinant_consistent() {
        return report;
    }
    for s in 0..config.starts {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(s as u64));
        let mut state = State::new(spec, &mut rng);
        let (loss, iters) = run_start(&mut state, config);
        report.starts_used += 1;
        report.iterations += iters;
        report.start_residuals.push(loss.sqrt());
        let tuple = tuple_from(&state);
        // certify from the matrices alone
        let r = spec.rank;
        let prod = tuple.mats.iter().fold(CMat::identity(r, r), |acc, m| acc * m);
        let residual = (prod - scalar(r, spec.central_sign as f64)).norm();
        let spectral = spectral_error(&tuple, spec);
        let ok = residual < config.tolerance && spectral < 1e-9 && tuple.unitarity_defect() < 1e-10;
        if residual < report.residual && !report.converged {
            report.residual = residual;
            report.spectral_error = spectral;
        }
        if !ok {
            continue;
        }
        let irreducible = irreducibility(&tuple);
        if config.require_irreducible && !irreducible {
            continue;
        }
        report.converged = true;
        report.residual = residual;
        report.spectral_error = spectral;
        report.irreducible = Some(irreducible);
        report.tuple = Some(tuple);
        break;
    }
    report
}

/// The four rank-3 spectra at p = 7, labelled as in `su3_exponents_p7`: two
/// symmetric squares of rank-2 census entries and the two three-dimensional
/// irreps evaluated on S, (ST)^-1 and S T S^-1.
pub fn rank_three_specs_p7() -> Result<Vec<(&'static str, ClassSpec)>> {
    use crate::chartab::character_table;
    use crate::group::{build_group, sl_class_index, ClassKind, GroupElement, Variant};

    let mut out = Vec::new();
    for (label, k) in [("S2E(-5,5)", 5), ("S2E(-11,11)", 3)] {
        out.push((label, rotation_spec(7, k)?.0.sym_square()?));
    }
    let t = character_table(&build_group(7, Variant::SL2)?)?;
    let s = GroupElement::new(7, 0, -1, 1, 0, false);
    let st_inv = s.mul(&GroupElement::new(7, 1, 1, 0, 1, false), 7).inverse(7);
    let find = |g: &GroupElement| -> Result<usize> {
        let o = (1..=14).find(|&j| g.pow(j, 7).is_identity()).unwrap_or(0);
        t.classes
            .iter()
            .position(|c| c.element_order == o && c.representative.trace(7) == g.trace(7))
            .ok_or_else(|| Error::DimensionMismatch("no class for generator".into()))
    };
    let classes = [find(&s)?, find(&st_inv)?, sl_class_index(7, ClassKind::Unipotent { negative: false, residue: true })];
    for (label, name) in [("V-xO", "V3"), ("V-*xO", "V3*")] {
        out.push((label, ClassSpec::from_characters(&t, t.index_of(name)?, classes, 1)?));
    }
    Ok(out)
}
