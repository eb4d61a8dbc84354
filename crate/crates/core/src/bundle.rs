//! Torus bundles over closed orientable surfaces and their classification:
//! Euler-class modules, isomorphism decisions with checkable certificates,
//! fiber sums, first Betti numbers, and symplectic existence predicates.
//!
//! A bundle is stored as a monodromy representation together with an Euler
//! vector (m,n). Genus 0 bundles are classified by gcd(m,n); genus 1
//! bundles by matching equations between normalized monodromy pairs, with
//! the conjugator quantifier eliminated exactly through the centralizer
//! structure of SL(2,Z); higher genus bundles by a three-part criterion:
//! equality of the lifted images up to one conjugation, equality of
//! lift-orbit tags, and membership of the Euler difference in a lattice
//! built from the monodromy matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::lattice::{
    member_with_witness, quotient, rank, smith_normal_form, IntMatrix, QuotientModule,
    QuotientTransform,
};
use crate::rep::{
    canonicalize_lift, contains_minus_identity, is_normal_form, lift_orbit_tag, orbit_invariant,
    project_rep, same_sl_image, SlRep,
};
use crate::sl2z::conj::sl_conjugate;
use crate::sl2z::psl::lift_word;
use crate::sl2z::Sl2Matrix;

/// An orientable torus bundle over the closed orientable surface of genus
/// g, given by monodromy images and the Euler vector (m,n).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TorusBundle {
    rep: SlRep,
    euler: [BigInt; 2],
}

impl TorusBundle {
    /// Builds a bundle, rejecting monodromy data that does not satisfy
    /// the surface relator.
    pub fn new(rep: SlRep, m: impl Into<BigInt>, n: impl Into<BigInt>) -> Result<Self, Error> {
        if !rep.validate() {
            return Err(Error::NotSurfaceRep(
                "monodromy images do not satisfy the surface relator".into(),
            ));
        }
        Ok(TorusBundle {
            rep,
            euler: [m.into(), n.into()],
        })
    }

    pub fn genus(&self) -> usize {
        self.rep.genus()
    }

    pub fn rep(&self) -> &SlRep {
        &self.rep
    }

    pub fn euler(&self) -> &[BigInt; 2] {
        &self.euler
    }
}

/// Outcome of an isomorphism decision.
#[derive(Clone, Debug)]
pub enum IsoVerdict {
    Yes(Certificate),
    No(Separation),
    /// The decision procedure could not settle the instance; the string
    /// names the obstruction.
    Indeterminate(String),
}

impl IsoVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, IsoVerdict::Yes(_))
    }
}

/// A named separating invariant behind a negative verdict.
#[derive(Clone, Debug)]
pub struct Separation {
    /// Which matching condition failed: 1 = monodromy image, 2 = lift
    /// orbit, 3 = Euler lattice.
    pub condition: u8,
    pub detail: String,
}

/// Machine-checkable isomorphism data; see [`verify_certificate`].
#[derive(Clone, Debug)]
pub enum Certificate {
    /// Genus 0: the common nonnegative divisor of both Euler vectors.
    GcdClass(BigInt),
    Genus1(Box<Genus1Certificate>),
    Main(Box<MainCertificate>),
}

/// Witness for a genus-1 isomorphism between the normalized bundles.
///
/// Writing (p, q) for the normalized pair in equation order (swapped when
/// `swapped` is set), with monodromies (±E₂, B) and (±E₂, C) and Euler
/// vectors (m,n) and (k,l), the recorded data satisfies
/// Q·C·Q⁻¹ = sign·B^exponent and (m,n) − Q·(k,l) = (B−E₂)·x [+ 2y].
#[derive(Clone, Debug)]
pub struct Genus1Certificate {
    /// Both input bundles rewritten with a central first monodromy
    /// matrix, in input order.
    pub normalized: (TorusBundle, TorusBundle),
    /// True when the matching equations run from the second normalized
    /// bundle to the first.
    pub swapped: bool,
    pub conjugator: Sl2Matrix,
    pub sign: i8,
    pub exponent: i8,
    pub x: [BigInt; 2],
    /// Present exactly when both normalized bundles carry −E₂ as first
    /// matrix, where Euler vectors are compared modulo doubled vectors.
    pub y: Option<[BigInt; 2]>,
}

/// Witness for a higher-genus isomorphism: one conjugator aligning the
/// images and the coefficients of the Euler-difference equation
/// e₁ − Q·e₂ = 2x₀ + Σ (Bᵢ−E₂)xᵢ over the first bundle's matrices.
#[derive(Clone, Debug)]
pub struct MainCertificate {
    pub conjugator: Sl2Matrix,
    /// Coefficient of the doubled-lattice part, present exactly when the
    /// images contain −E₂.
    pub x0: Option<[BigInt; 2]>,
    /// One coefficient vector per handle.
    pub xs: Vec<[BigInt; 2]>,
}

fn neg(m: &Sl2Matrix) -> Sl2Matrix {
    Sl2Matrix::minus_identity().mul(m)
}

/// The two columns of W − E₂.
fn difference_columns(w: &Sl2Matrix) -> [[BigInt; 2]; 2] {
    let [a, b, c, d] = w.entries();
    [
        [a - BigInt::one(), c.clone()],
        [b.clone(), d - BigInt::one()],
    ]
}

/// Columns of all Aᵢ−E₂ and Bᵢ−E₂, the generating set of the lattice that
/// Euler vectors are compared against.
pub fn euler_columns(r: &SlRep) -> Vec<[BigInt; 2]> {
    let mut cols = Vec::with_capacity(4 * r.genus());
    for (a, b) in r.pairs() {
        cols.extend(difference_columns(a));
        cols.extend(difference_columns(b));
    }
    cols
}

/// Isomorphism type of Z² modulo the lattice of [`euler_columns`]; the
/// group Euler classes of flat-deformable bundles live in.
pub fn euler_module(r: &SlRep) -> QuotientModule {
    quotient(&euler_columns(r))
}

/// Whether the class of the Euler vector is torsion in [`euler_module`].
pub fn euler_torsion(b: &TorusBundle) -> bool {
    QuotientTransform::new(&euler_columns(b.rep())).is_torsion(b.euler())
}

/// First Betti number 2g + 2 − rank(X) of the zero-Euler bundle with the
/// same monodromy, where X stacks the columns of all Aᵢ−E₂ and Bᵢ−E₂.
pub fn betti1_flat(r: &SlRep) -> usize {
    2 * r.genus() + 2 - rank(&IntMatrix::from_columns(&euler_columns(r)))
}

/// Fiber connected sum: concatenated monodromy pairs, summed Euler
/// vectors.
pub fn fiber_sum(b1: &TorusBundle, b2: &TorusBundle) -> TorusBundle {
    let mut pairs = b1.rep().pairs().to_vec();
    pairs.extend_from_slice(b2.rep().pairs());
    let rep = SlRep::new(pairs);
    debug_assert!(rep.validate());
    TorusBundle {
        rep,
        euler: [&b1.euler[0] + &b2.euler[0], &b1.euler[1] + &b2.euler[1]],
    }
}

/// Splits a bundle whose Aᵢ are all central into genus-1 summands: the
/// first keeps the Euler vector, the rest get (0,0). Folding the list
/// back through [`fiber_sum`] returns the input exactly.
pub fn decompose(b: &TorusBundle) -> Result<Vec<TorusBundle>, Error> {
    if b.genus() == 0 {
        return Err(Error::InvalidBundle(
            "a genus-0 bundle has no genus-1 summands".into(),
        ));
    }
    if b.rep().pairs().iter().any(|(a, _)| !a.is_central()) {
        return Err(Error::InvalidBundle(
            "decomposition needs every Aᵢ central; rewrite the bundle first".into(),
        ));
    }
    Ok(b.rep()
        .pairs()
        .iter()
        .enumerate()
        .map(|(i, pair)| TorusBundle {
            rep: SlRep::new(vec![pair.clone()]),
            euler: if i == 0 {
                b.euler.clone()
            } else {
                [BigInt::zero(), BigInt::zero()]
            },
        })
        .collect())
}

fn gcd2(v: &[BigInt; 2]) -> BigInt {
    v[0].gcd(&v[1])
}

/// Genus-0 bundles are classified by the nonnegative divisor gcd(m,n).
pub fn iso_genus0(b1: &TorusBundle, b2: &TorusBundle) -> Result<IsoVerdict, Error> {
    if b1.genus() != 0 || b2.genus() != 0 {
        return Err(Error::InvalidBundle(
            "iso_genus0 needs two genus-0 bundles".into(),
        ));
    }
    let d1 = gcd2(b1.euler());
    let d2 = gcd2(b2.euler());
    if d1 == d2 {
        Ok(IsoVerdict::Yes(Certificate::GcdClass(d1)))
    } else {
        Ok(IsoVerdict::No(Separation {
            condition: 3,
            detail: format!("Euler divisor classes differ: {d1} vs {d2}"),
        }))
    }
}

/// Elementary base mapping classes acting on a commuting monodromy pair;
/// the Euler vector is untouched by all of them.
fn genus1_moves(a: &Sl2Matrix, b: &Sl2Matrix) -> [(Sl2Matrix, Sl2Matrix); 5] {
    [
        (a.mul(b), b.clone()),
        (a.mul(&b.inverse()), b.clone()),
        (a.clone(), b.mul(a)),
        (a.clone(), b.mul(&a.inverse())),
        (b.clone(), a.inverse()),
    ]
}

const NORMALIZE_DEPTH: usize = 12;
const NORMALIZE_STATES: usize = 20_000;

/// Rewrites a genus-1 bundle so its first monodromy matrix is ±E₂, by a
/// breadth-first search over words of length at most 12 in the elementary
/// mapping classes. Returns `Ok(None)` when the bounded search exhausts
/// its budget, which callers must surface as an indeterminate outcome.
pub fn normalize_genus1(b: &TorusBundle) -> Result<Option<TorusBundle>, Error> {
    if b.genus() != 1 {
        return Err(Error::InvalidBundle(
            "normalize_genus1 needs a genus-1 bundle".into(),
        ));
    }
    let start = b.rep().pairs()[0].clone();
    let mut seen = std::collections::HashSet::new();
    seen.insert(start.clone());
    let mut frontier = vec![start];
    for _ in 0..=NORMALIZE_DEPTH {
        for (a, bb) in &frontier {
            if a.is_central() {
                let rep = SlRep::new(vec![(a.clone(), bb.clone())]);
                debug_assert!(rep.validate());
                return Ok(Some(TorusBundle {
                    rep,
                    euler: b.euler.clone(),
                }));
            }
        }
        let mut next = Vec::new();
        for (a, bb) in &frontier {
            for m in genus1_moves(a, bb) {
                if seen.len() >= NORMALIZE_STATES {
                    return Ok(None);
                }
                if seen.insert(m.clone()) {
                    next.push(m);
                }
            }
        }
        frontier = next;
    }
    Ok(None)
}

/// A unimodular V with V·v = (gcd(v), 0)ᵀ; the identity for v = 0.
fn carry_to_axis(v: &[BigInt; 2]) -> (Sl2Matrix, BigInt) {
    if v[0].is_zero() && v[1].is_zero() {
        return (Sl2Matrix::identity(), BigInt::zero());
    }
    let g =
        crate::lattice::unimodular_reduce(&[v[0].clone(), v[1].clone()]).expect("nonzero vector");
    // v·G = (d, 0) as a row identity, so Gᵀ carries the column v to (d,0)ᵀ.
    let (r0, mut r1) = (
        [g.get(0, 0).clone(), g.get(1, 0).clone()],
        [g.get(0, 1).clone(), g.get(1, 1).clone()],
    );
    let det = &r0[0] * &r1[1] - &r0[1] * &r1[0];
    if det.is_negative() {
        r1 = [-&r1[0], -&r1[1]];
    }
    let d = &r0[0] * &v[0] + &r0[1] * &v[1];
    let m = Sl2Matrix::new(r0[0].clone(), r0[1].clone(), r1[0].clone(), r1[1].clone())
        .expect("unimodular rows");
    debug_assert_eq!(m.apply(v), [d.clone(), BigInt::zero()]);
    (m, d)
}

/// Shape of the comparison lattice when both monodromy sides are central.
enum CentralLattice {
    /// L = {0}: Euler vectors must match exactly under some conjugator.
    Zero,
    /// L = 2Z²: Euler vectors must match modulo 2 under some conjugator.
    Even,
}

/// Finds Q ∈ SL(2,Z) with mn − Q·kl ∈ L for a central-monodromy lattice,
/// together with h = (mn − Q·kl)/2 (zero for the exact case). Complete:
/// SL(2,Z) acts transitively on vectors of equal gcd, and modulo 2 the
/// orbits are the zero and nonzero classes.
fn central_transport(
    mn: &[BigInt; 2],
    kl: &[BigInt; 2],
    lat: CentralLattice,
) -> Option<(Sl2Matrix, [BigInt; 2])> {
    match lat {
        CentralLattice::Zero => {
            let (v1, d1) = carry_to_axis(mn);
            let (v2, d2) = carry_to_axis(kl);
            if d1 != d2 {
                return None;
            }
            let q = v1.inverse().mul(&v2);
            debug_assert_eq!(q.apply(kl), *mn);
            Some((q, [BigInt::zero(), BigInt::zero()]))
        }
        CentralLattice::Even => {
            let d2 = gcd2(kl);
            let mn_even = mn[0].is_even() && mn[1].is_even();
            if d2.is_even() != mn_even {
                return None;
            }
            let q = if d2.is_zero() {
                Sl2Matrix::identity()
            } else if d2.is_even() {
                carry_to_axis(kl).0
            } else {
                let class = [
                    mn[0].mod_floor(&BigInt::from(2)),
                    mn[1].mod_floor(&BigInt::from(2)),
                ];
                let w = [&d2 * &class[0], &d2 * &class[1]];
                let (vw, dw) = carry_to_axis(&w);
                debug_assert_eq!(dw, d2);
                vw.inverse().mul(&carry_to_axis(kl).0)
            };
            let img = q.apply(kl);
            let diff = [&mn[0] - &img[0], &mn[1] - &img[1]];
            debug_assert!(diff[0].is_even() && diff[1].is_even());
            Some((q, [&diff[0] / 2, &diff[1] / 2]))
        }
    }
}

/// Basis column vectors of the integer kernel of m.
fn integer_kernel(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let (_, d, v) = smith_normal_form(m);
    let steps = m.rows().min(m.cols());
    (0..m.cols())
        .filter(|&j| j >= steps || d.get(j, j).is_zero())
        .map(|j| (0..m.cols()).map(|i| v.get(i, j).clone()).collect())
        .collect()
}

/// One solution x of a·x = b over the integers.
fn solve_columns(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    let (u, d, v) = smith_normal_form(a);
    let ub: Vec<BigInt> = (0..a.rows())
        .map(|i| (0..a.rows()).map(|k| u.get(i, k) * &b[k]).sum())
        .collect();
    let mut y = vec![BigInt::zero(); a.cols()];
    for i in 0..a.rows() {
        let pivot = if i < a.cols() {
            d.get(i, i).clone()
        } else {
            BigInt::zero()
        };
        if pivot.is_zero() {
            if !ub[i].is_zero() {
                return None;
            }
        } else {
            let (q, r) = ub[i].div_rem(&pivot);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        }
    }
    Some(
        (0..a.cols())
            .map(|i| (0..a.cols()).map(|k| v.get(i, k) * &y[k]).sum())
            .collect(),
    )
}

/// Raw 2×2 integer matrix helpers for commutant arithmetic.
type Raw2 = [BigInt; 4];

fn raw_apply(m: &Raw2, v: &[BigInt; 2]) -> [BigInt; 2] {
    [&m[0] * &v[0] + &m[1] * &v[1], &m[2] * &v[0] + &m[3] * &v[1]]
}

/// A matrix G with commutant(c) = Z·E₂ + Z·G, computed from the integer
/// kernel of M ↦ MC − CM.
fn commutant_complement(c: &Sl2Matrix) -> Raw2 {
    let [a, b, cc, d] = c.entries();
    let z = BigInt::zero;
    // Rows encode the entries of CM − MC as linear forms in (x₁,x₂,x₃,x₄).
    let k = IntMatrix::new(
        4,
        4,
        vec![
            z(),
            -cc.clone(),
            b.clone(),
            z(),
            -b.clone(),
            a - d,
            z(),
            b.clone(),
            cc.clone(),
            z(),
            d - a,
            -cc.clone(),
            z(),
            cc.clone(),
            -b.clone(),
            z(),
        ],
    )
    .expect("4x4 shape");
    let kernel = integer_kernel(&k);
    assert_eq!(
        kernel.len(),
        2,
        "commutant of a noncentral matrix has rank 2"
    );
    let basis = IntMatrix::new(
        4,
        2,
        (0..4)
            .flat_map(|i| [kernel[0][i].clone(), kernel[1][i].clone()])
            .collect(),
    )
    .expect("4x2 shape");
    let e2 = [BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one()];
    let coords = solve_columns(&basis, &e2).expect("E₂ commutes with everything");
    let (c1, c2) = (coords[0].clone(), coords[1].clone());
    let g = c1.gcd(&c2);
    assert!(g.is_one(), "E₂ is primitive in the commutant");
    // Complete (c1,c2) to a determinant-one basis change; the second
    // basis vector is the complement of E₂.
    let egcd = c1.extended_gcd(&c2);
    let (t1, t2) = (-egcd.y, egcd.x);
    debug_assert!((&c1 * &t2 - &c2 * &t1).is_one());
    [
        &t1 * &kernel[0][0] + &t2 * &kernel[1][0],
        &t1 * &kernel[0][1] + &t2 * &kernel[1][1],
        &t1 * &kernel[0][2] + &t2 * &kernel[1][2],
        &t1 * &kernel[0][3] + &t2 * &kernel[1][3],
    ]
}

/// Fundamental solution (x, y), y ≥ 1, of x² + t₀xy − c·y² = 1 where the
/// form is the norm of the real quadratic order of discriminant Δ,
/// t₀ = Δ mod 2, c = (Δ − t₀²)/4. Found on the continued fraction of
/// (t₀+√Δ)/2; a norm −1 hit is squared.
fn fundamental_norm_one(delta: &BigInt) -> Option<(BigInt, BigInt)> {
    let t0 = delta.mod_floor(&BigInt::from(2));
    let cterm: BigInt = (delta - &t0 * &t0) / 4;
    let s = delta.sqrt();
    let norm = |h: &BigInt, k: &BigInt| h * h + &t0 * h * k - &cterm * (k * k);
    let floor_div = |num: &BigInt, q: &BigInt| -> BigInt {
        if q.is_positive() {
            num.div_floor(q)
        } else {
            -(num.div_floor(&-q) + BigInt::one())
        }
    };
    let (mut p, mut q) = (t0.clone(), BigInt::from(2));
    let (mut h2, mut k2) = (BigInt::zero(), BigInt::one());
    let (mut h1, mut k1) = (BigInt::one(), BigInt::zero());
    for _ in 0..10_000 {
        let a = floor_div(&(&p + &s), &q);
        let h = &a * &h1 + &h2;
        let k = &a * &k1 + &k2;
        let n = norm(&h, &k);
        if n.is_one() {
            return Some((h, k));
        }
        if (-&n).is_one() {
            // Square the unit using ω² = t₀ω + c.
            let x = &h * &h + &cterm * (&k * &k);
            let y = &k * (BigInt::from(2) * &h + &t0 * &k);
            debug_assert!(norm(&x, &y).is_one());
            return Some((x, y));
        }
        let pn = &a * &q - &p;
        let (qn, r) = (delta - &pn * &pn).div_rem(&q);
        debug_assert!(r.is_zero());
        h2 = std::mem::replace(&mut h1, h);
        k2 = std::mem::replace(&mut k1, k);
        p = pn;
        q = qn;
    }
    None
}

/// Generator R of the infinite part of the centralizer of a hyperbolic
/// matrix: Cent(c) = {±Rʲ}. R is the fundamental determinant-one unit of
/// the full integer commutant, so no centralizer element is missed.
fn norm_one_root(c: &Sl2Matrix) -> Option<Sl2Matrix> {
    let g = commutant_complement(c);
    let beta = &g[0] + &g[3];
    let gamma = &g[0] * &g[3] - &g[1] * &g[2];
    let delta = &beta * &beta - BigInt::from(4) * &gamma;
    let s = delta.sqrt();
    assert!(
        delta.is_positive() && &s * &s != delta,
        "hyperbolic commutant has a nonsquare positive discriminant"
    );
    let (x, y) = fundamental_norm_one(&delta)?;
    let t0 = delta.mod_floor(&BigInt::from(2));
    let p: BigInt = (&t0 - &beta) / 2;
    let w = [&g[0] + &p, g[1].clone(), g[2].clone(), &g[3] + &p];
    let raw = [&x + &y * &w[0], &y * &w[1], &y * &w[2], &x + &y * &w[3]];
    let r = Sl2Matrix::new(
        raw[0].clone(),
        raw[1].clone(),
        raw[2].clone(),
        raw[3].clone(),
    )
    .expect("norm-one unit has determinant one");
    debug_assert_eq!(r.mul(c), c.mul(&r));
    debug_assert!(!r.is_central());
    Some(r)
}

/// Largest invariant factor of Z² modulo a full-rank lattice.
fn lattice_exponent(gens: &[[BigInt; 2]]) -> BigInt {
    let (_, d, _) = smith_normal_form(&IntMatrix::from_columns(gens));
    let e = d.get(1, 1).clone();
    assert!(!e.is_zero(), "comparison lattice must have full rank");
    e.abs()
}

/// Multiplicative order of m modulo d (order of the reduction in
/// GL(2, Z/d)); None if the capped loop does not close.
fn order_mod(m: &Sl2Matrix, d: &BigInt) -> Option<u64> {
    if d.is_one() {
        return Some(1);
    }
    let reduce = |x: &Sl2Matrix| -> [BigInt; 4] {
        let [a, b, c, dd] = x.entries();
        [
            a.mod_floor(d),
            b.mod_floor(d),
            c.mod_floor(d),
            dd.mod_floor(d),
        ]
    };
    let id = reduce(&Sl2Matrix::identity());
    let mut acc = m.clone();
    for t in 1..=200_000u64 {
        if reduce(&acc) == id {
            return Some(t);
        }
        acc = acc.mul(m);
    }
    None
}

/// One matching branch of the genus-1 decision: a conjugation target
/// sign·B^exponent together with the particular conjugator.
struct Branch {
    sign: i8,
    exponent: i8,
    q0: Sl2Matrix,
}

enum BranchResult {
    Found {
        sign: i8,
        exponent: i8,
        conjugator: Sl2Matrix,
        coeffs: Vec<BigInt>,
    },
    Exhausted,
    Blocked(String),
}

/// Sweeps Q = ±q₀·Z over the full centralizer family of c, testing
/// mn − Q·kl for membership in the lattice spanned by `gens`. Complete by
/// cases on the centralizer: finite for elliptic c; {±(E₂+jM₀)} for
/// trace ±2, absorbed as one extra lattice generator; {±Rʲ} for
/// hyperbolic c, where membership only depends on j modulo the order of
/// R mod the lattice exponent because the lattice has full rank there.
fn sweep_centralizer(
    branch: &Branch,
    c: &Sl2Matrix,
    mn: &[BigInt; 2],
    kl: &[BigInt; 2],
    gens: &[[BigInt; 2]],
) -> BranchResult {
    let trace = c.trace();
    let two = BigInt::from(2);
    let found = |conjugator: Sl2Matrix, coeffs: Vec<BigInt>| BranchResult::Found {
        sign: branch.sign,
        exponent: branch.exponent,
        conjugator,
        coeffs,
    };
    if trace.abs() < two {
        let root = if c.order() == Some(3) {
            neg(c)
        } else {
            c.clone()
        };
        let ord = root.order().expect("elliptic matrices have finite order");
        let mut z = Sl2Matrix::identity();
        for _ in 0..ord {
            let q = branch.q0.mul(&z);
            let img = q.apply(kl);
            let target = [&mn[0] - &img[0], &mn[1] - &img[1]];
            if let Some(cs) = member_with_witness(&target, gens) {
                return found(q, cs);
            }
            z = z.mul(&root);
        }
        BranchResult::Exhausted
    } else if trace.abs() == two {
        let unipotent = if trace == two { c.clone() } else { neg(c) };
        let [a, b, cc, d] = unipotent.entries();
        let m = [a - BigInt::one(), b.clone(), cc.clone(), d - BigInt::one()];
        let g = m[0].gcd(&m[1]).gcd(&m[2]).gcd(&m[3]);
        let m0 = [&m[0] / &g, &m[1] / &g, &m[2] / &g, &m[3] / &g];
        for sigma in [1i8, -1] {
            let q0s = if sigma == 1 {
                branch.q0.clone()
            } else {
                neg(&branch.q0)
            };
            let base = q0s.apply(kl);
            let target = [&mn[0] - &base[0], &mn[1] - &base[1]];
            let dir = {
                let v = raw_apply(&m0, kl);
                q0s.apply(&v)
            };
            let mut all = vec![dir];
            all.extend(gens.iter().cloned());
            if let Some(cs) = member_with_witness(&target, &all) {
                let j = cs[0].clone();
                let r = Sl2Matrix::new(
                    BigInt::one() + &j * &m0[0],
                    &j * &m0[1],
                    &j * &m0[2],
                    BigInt::one() + &j * &m0[3],
                )
                .expect("unipotent powers are unimodular");
                return found(q0s.mul(&r), cs[1..].to_vec());
            }
        }
        BranchResult::Exhausted
    } else {
        let Some(root) = norm_one_root(c) else {
            return BranchResult::Blocked(
                "centralizer root computation exceeded its budget".into(),
            );
        };
        let exponent = lattice_exponent(gens);
        let Some(period) = order_mod(&root, &exponent) else {
            return BranchResult::Blocked(
                "centralizer order modulo the lattice exceeded its budget".into(),
            );
        };
        let mut zpow = Sl2Matrix::identity();
        for _ in 0..period {
            for sigma in [1i8, -1] {
                let z = if sigma == 1 { zpow.clone() } else { neg(&zpow) };
                let q = branch.q0.mul(&z);
                let img = q.apply(kl);
                let target = [&mn[0] - &img[0], &mn[1] - &img[1]];
                if let Some(cs) = member_with_witness(&target, gens) {
                    return found(q, cs);
                }
            }
            zpow = zpow.mul(&root);
        }
        BranchResult::Exhausted
    }
}

/// Decides the matching equations between two normalized genus-1 bundles
/// (`first` on the plus side of the equations). `allowed` lists the
/// admissible (sign, exponent) pairs for the conjugation target, `plus2`
/// adds 2Z² to the comparison lattice, and `order_gate` restricts to
/// first matrices of order 2, 4 or 6.
fn genus1_match(
    first: &TorusBundle,
    second: &TorusBundle,
    allowed: &[(i8, i8)],
    plus2: bool,
    order_gate: bool,
) -> Result<(IsoVerdict, bool), Error> {
    let b = &first.rep().pairs()[0].1;
    let c = &second.rep().pairs()[0].1;
    let mn = first.euler();
    let kl = second.euler();
    if order_gate && !matches!(b.order(), Some(2) | Some(4) | Some(6)) {
        return Ok((
            IsoVerdict::No(Separation {
                condition: 1,
                detail: "mixed central signs need a monodromy of order 2, 4 or 6".into(),
            }),
            false,
        ));
    }
    if b.is_central() || c.is_central() {
        if !(b.is_central() && c.is_central()) {
            return Ok((
                IsoVerdict::No(Separation {
                    condition: 1,
                    detail: "one monodromy is central and the other is not".into(),
                }),
                false,
            ));
        }
        let Some((sign, exponent)) = allowed.iter().copied().find(|(s, _)| {
            let target = if *s == 1 { b.clone() } else { neg(b) };
            target == *c
        }) else {
            return Ok((
                IsoVerdict::No(Separation {
                    condition: 1,
                    detail: "central monodromies differ under every admissible sign".into(),
                }),
                false,
            ));
        };
        let minus_side = b.is_minus_identity();
        let lat = if plus2 || minus_side {
            CentralLattice::Even
        } else {
            CentralLattice::Zero
        };
        return Ok(match central_transport(mn, kl, lat) {
            None => (
                IsoVerdict::No(Separation {
                    condition: 3,
                    detail: "Euler vectors are inequivalent under every base change".into(),
                }),
                true,
            ),
            Some((q, h)) => {
                let (x, y) = match (minus_side, plus2) {
                    (false, false) => ([BigInt::zero(), BigInt::zero()], None),
                    (false, true) => ([BigInt::zero(), BigInt::zero()], Some(h)),
                    (true, false) => ([-&h[0], -&h[1]], None),
                    (true, true) => ([BigInt::zero(), BigInt::zero()], Some(h)),
                };
                (
                    IsoVerdict::Yes(Certificate::Genus1(Box::new(Genus1Certificate {
                        normalized: (first.clone(), second.clone()),
                        swapped: false,
                        conjugator: q,
                        sign,
                        exponent,
                        x,
                        y,
                    }))),
                    true,
                )
            }
        });
    }

    let mut gens: Vec<[BigInt; 2]> = difference_columns(b).to_vec();
    if plus2 {
        gens.push([BigInt::from(2), BigInt::zero()]);
        gens.push([BigInt::zero(), BigInt::from(2)]);
    }
    let mut seen_targets: Vec<Sl2Matrix> = Vec::new();
    let mut saw_conjugator = false;
    let mut blocked: Option<String> = None;
    for &(sign, exponent) in allowed {
        let power = if exponent == 1 {
            b.clone()
        } else {
            b.inverse()
        };
        let target = if sign == 1 { power } else { neg(&power) };
        if seen_targets.contains(&target) {
            continue;
        }
        seen_targets.push(target.clone());
        let Some(q0) = sl_conjugate(c, &target) else {
            continue;
        };
        saw_conjugator = true;
        match sweep_centralizer(&Branch { sign, exponent, q0 }, c, mn, kl, &gens) {
            BranchResult::Found {
                sign,
                exponent,
                conjugator,
                coeffs,
            } => {
                let x = [coeffs[0].clone(), coeffs[1].clone()];
                let y = plus2.then(|| [coeffs[2].clone(), coeffs[3].clone()]);
                return Ok((
                    IsoVerdict::Yes(Certificate::Genus1(Box::new(Genus1Certificate {
                        normalized: (first.clone(), second.clone()),
                        swapped: false,
                        conjugator,
                        sign,
                        exponent,
                        x,
                        y,
                    }))),
                    true,
                ));
            }
            BranchResult::Exhausted => {}
            BranchResult::Blocked(reason) => blocked = Some(reason),
        }
    }
    if let Some(reason) = blocked {
        return Ok((IsoVerdict::Indeterminate(reason), saw_conjugator));
    }
    Ok((
        IsoVerdict::No(if saw_conjugator {
            Separation {
                condition: 3,
                detail: "Euler difference misses the comparison lattice for every conjugator"
                    .into(),
            }
        } else {
            Separation {
                condition: 1,
                detail: "monodromies are not conjugate up to admissible signs and inversion".into(),
            }
        }),
        saw_conjugator,
    ))
}

/// Decides isomorphism of genus-1 bundles. Inputs are first normalized;
/// the four central-sign cases then reduce to conjugation plus lattice
/// equations whose conjugator quantifier is eliminated exactly.
pub fn iso_genus1(b1: &TorusBundle, b2: &TorusBundle) -> Result<IsoVerdict, Error> {
    if b1.genus() != 1 || b2.genus() != 1 {
        return Err(Error::InvalidBundle(
            "iso_genus1 needs two genus-1 bundles".into(),
        ));
    }
    let Some(n1) = normalize_genus1(b1)? else {
        return Ok(IsoVerdict::Indeterminate(
            "normalization search budget exhausted for the first bundle".into(),
        ));
    };
    let Some(n2) = normalize_genus1(b2)? else {
        return Ok(IsoVerdict::Indeterminate(
            "normalization search budget exhausted for the second bundle".into(),
        ));
    };
    let minus1 = n1.rep().pairs()[0].0.is_minus_identity();
    let minus2 = n2.rep().pairs()[0].0.is_minus_identity();
    let both = [(1i8, 1i8), (1, -1), (-1, 1), (-1, -1)];
    let (verdict, _) = match (minus1, minus2) {
        (false, false) => genus1_match(&n1, &n2, &[(1, 1), (1, -1)], false, false)?,
        (false, true) => genus1_match(&n1, &n2, &both, false, true)?,
        (true, false) => {
            let (v, saw) = genus1_match(&n2, &n1, &both, false, true)?;
            let v = match v {
                IsoVerdict::Yes(Certificate::Genus1(mut cert)) => {
                    cert.normalized = (n1.clone(), n2.clone());
                    cert.swapped = true;
                    IsoVerdict::Yes(Certificate::Genus1(cert))
                }
                other => other,
            };
            (v, saw)
        }
        (true, true) => genus1_match(&n1, &n2, &both, true, false)?,
    };
    if let IsoVerdict::Yes(cert) = &verdict {
        debug_assert!(verify_certificate(b1, b2, cert)?);
    }
    Ok(verdict)
}

/// Comparison-lattice generators for the higher-genus criterion: columns
/// of Bᵢ−E₂ over the first rep, plus 2e₁, 2e₂ when −E₂ is in the image.
fn main_lattice(r: &SlRep, minus: bool) -> Vec<[BigInt; 2]> {
    let mut gens: Vec<[BigInt; 2]> = r
        .pairs()
        .iter()
        .flat_map(|(_, b)| difference_columns(b))
        .collect();
    if minus {
        gens.push([BigInt::from(2), BigInt::zero()]);
        gens.push([BigInt::zero(), BigInt::from(2)]);
    }
    gens
}

fn main_certificate(q: Sl2Matrix, coeffs: &[BigInt], genus: usize, minus: bool) -> MainCertificate {
    let xs: Vec<[BigInt; 2]> = (0..genus)
        .map(|i| [coeffs[2 * i].clone(), coeffs[2 * i + 1].clone()])
        .collect();
    let x0 = minus.then(|| [coeffs[2 * genus].clone(), coeffs[2 * genus + 1].clone()]);
    MainCertificate {
        conjugator: q,
        x0,
        xs,
    }
}

/// Decides isomorphism for genus at least 2. Both projections must be in
/// normal form. The three conditions are checked over the finitely many
/// candidate conjugators produced by core-graph relocation; composing a
/// candidate with an element of the image does not change any condition,
/// so the enumeration is exhaustive, with signs tested on the Euler
/// equation. Bundles whose conjugated monodromy words do not match the
/// first bundle's verbatim are reported indeterminate, since comparing
/// lift orbits across different writings of the same image needs a base
/// mapping class outside this tool's search.
pub fn iso_main(b1: &TorusBundle, b2: &TorusBundle) -> Result<IsoVerdict, Error> {
    let g = b1.genus();
    if g < 2 || b2.genus() != g {
        return Err(Error::InvalidBundle(
            "iso_main needs two bundles of equal genus at least 2".into(),
        ));
    }
    let p1 = project_rep(b1.rep())?;
    let p2 = project_rep(b2.rep())?;
    let Some(c1) = is_normal_form(&p1) else {
        return Err(Error::NotNormalForm(
            "first bundle's projected monodromy is not in normal form".into(),
        ));
    };
    let Some(c2) = is_normal_form(&p2) else {
        return Err(Error::NotNormalForm(
            "second bundle's projected monodromy is not in normal form".into(),
        ));
    };
    let minus1 = contains_minus_identity(b1.rep());
    let minus2 = contains_minus_identity(b2.rep());

    if c1.m == 0 || c2.m == 0 {
        if (c1.m == 0) != (c2.m == 0) {
            return Ok(IsoVerdict::No(Separation {
                condition: 1,
                detail: "one image is central and the other is not".into(),
            }));
        }
        if minus1 != minus2 {
            return Ok(IsoVerdict::No(Separation {
                condition: 1,
                detail: "exactly one image contains −E₂".into(),
            }));
        }
        let lat = if minus1 {
            CentralLattice::Even
        } else {
            CentralLattice::Zero
        };
        return Ok(match central_transport(b1.euler(), b2.euler(), lat) {
            None => IsoVerdict::No(Separation {
                condition: 3,
                detail: "Euler vectors are inequivalent under every base change".into(),
            }),
            Some((q, h)) => {
                let xs = vec![[BigInt::zero(), BigInt::zero()]; g];
                let cert = MainCertificate {
                    conjugator: q,
                    x0: minus1.then_some(h),
                    xs,
                };
                debug_assert!(verify_certificate(
                    b1,
                    b2,
                    &Certificate::Main(Box::new(cert.clone()))
                )?);
                IsoVerdict::Yes(Certificate::Main(Box::new(cert)))
            }
        });
    }

    let mats1: Vec<Sl2Matrix> = b1
        .rep()
        .pairs()
        .iter()
        .flat_map(|(a, b)| [a.clone(), b.clone()])
        .collect();
    let core1 = orbit_invariant(&p1)?;
    let core2 = orbit_invariant(&p2)?;
    let candidates = crate::freeprod::conjugacy_candidates(&core1, &core2)?;
    let tag1 = lift_orbit_tag(&canonicalize_lift(b1.rep())?)?;
    let gens = main_lattice(b1.rep(), minus1);
    let mut deepest = 1u8;
    let mut blocked: Option<String> = None;
    for w in &candidates {
        let q0 = lift_word(&w.to_psl());
        let conj_pairs: Vec<(Sl2Matrix, Sl2Matrix)> = b2
            .rep()
            .pairs()
            .iter()
            .map(|(a, b)| (q0.conjugate(a), q0.conjugate(b)))
            .collect();
        let conj_mats: Vec<Sl2Matrix> = conj_pairs
            .iter()
            .flat_map(|(a, b)| [a.clone(), b.clone()])
            .collect();
        if !same_sl_image(&mats1, &conj_mats)? {
            continue;
        }
        deepest = deepest.max(2);
        let rep2q = SlRep::new(conj_pairs);
        let p2q = project_rep(&rep2q)?;
        if p2q != p1 {
            blocked = Some(
                "conjugated monodromy words differ from the first bundle's as written; \
                 aligning lift orbits would need a base mapping class outside the search"
                    .into(),
            );
            continue;
        }
        let tag2 = lift_orbit_tag(&canonicalize_lift(&rep2q)?)?;
        if tag1 != tag2 {
            continue;
        }
        deepest = deepest.max(3);
        for signed in [q0.clone(), neg(&q0)] {
            let img = signed.apply(b2.euler());
            let target = [&b1.euler()[0] - &img[0], &b1.euler()[1] - &img[1]];
            if let Some(coeffs) = member_with_witness(&target, &gens) {
                let cert = main_certificate(signed, &coeffs, g, minus1);
                debug_assert!(verify_certificate(
                    b1,
                    b2,
                    &Certificate::Main(Box::new(cert.clone()))
                )?);
                return Ok(IsoVerdict::Yes(Certificate::Main(Box::new(cert))));
            }
        }
    }
    if let Some(reason) = blocked {
        return Ok(IsoVerdict::Indeterminate(reason));
    }
    let detail = match deepest {
        1 => "no conjugation matches the lifted monodromy images",
        2 => "lift orbits differ for every image-matching conjugator",
        _ => "Euler difference misses the comparison lattice for every conjugator",
    };
    Ok(IsoVerdict::No(Separation {
        condition: deepest,
        detail: detail.into(),
    }))
}

/// Dispatches the isomorphism decision on the common genus.
pub fn iso(b1: &TorusBundle, b2: &TorusBundle) -> Result<IsoVerdict, Error> {
    if b1.genus() != b2.genus() {
        return Err(Error::InvalidBundle(
            "bundles over different surfaces are never compared".into(),
        ));
    }
    match b1.genus() {
        0 => iso_genus0(b1, b2),
        1 => iso_genus1(b1, b2),
        _ => iso_main(b1, b2),
    }
}

/// Whether the bundle admits a symplectic form on the total space that
/// restricts symplectically to every fiber.
pub fn compatible_symplectic(b: &TorusBundle) -> bool {
    euler_torsion(b)
}

/// Whether the total space admits any symplectic form. Genus 1 total
/// spaces always do; elsewhere the obstruction is exactly a non-torsion
/// Euler class.
pub fn total_space_symplectic(b: &TorusBundle) -> bool {
    b.genus() == 1 || euler_torsion(b)
}

/// Re-verifies a Yes certificate by direct substitution: conjugation
/// products and lattice equations are recomputed from scratch.
pub fn verify_certificate(
    b1: &TorusBundle,
    b2: &TorusBundle,
    cert: &Certificate,
) -> Result<bool, Error> {
    match cert {
        Certificate::GcdClass(d) => Ok(b1.genus() == 0
            && b2.genus() == 0
            && gcd2(b1.euler()) == *d
            && gcd2(b2.euler()) == *d),
        Certificate::Genus1(c) => {
            if b1.genus() != 1 || b2.genus() != 1 {
                return Ok(false);
            }
            let (n1, n2) = &c.normalized;
            if normalize_genus1(b1)?.as_ref() != Some(n1)
                || normalize_genus1(b2)?.as_ref() != Some(n2)
            {
                return Ok(false);
            }
            let (p, q) = if c.swapped { (n2, n1) } else { (n1, n2) };
            let (pa, pb) = &p.rep().pairs()[0];
            let (qa, qb) = &q.rep().pairs()[0];
            if !pa.is_central() || !qa.is_central() {
                return Ok(false);
            }
            let shape = (pa.is_minus_identity(), qa.is_minus_identity());
            match shape {
                (false, false) => {
                    if c.sign != 1 || c.y.is_some() {
                        return Ok(false);
                    }
                }
                (false, true) => {
                    if !matches!(pb.order(), Some(2) | Some(4) | Some(6)) || c.y.is_some() {
                        return Ok(false);
                    }
                }
                (true, false) => return Ok(false),
                (true, true) => {
                    if c.y.is_none() {
                        return Ok(false);
                    }
                }
            }
            let power = if c.exponent == 1 {
                pb.clone()
            } else {
                pb.inverse()
            };
            let target = if c.sign == 1 { power } else { neg(&power) };
            if c.conjugator.conjugate(qb) != target {
                return Ok(false);
            }
            let img = c.conjugator.apply(q.euler());
            let diff = [&p.euler()[0] - &img[0], &p.euler()[1] - &img[1]];
            let cols = difference_columns(pb);
            let mut rhs = [
                &cols[0][0] * &c.x[0] + &cols[1][0] * &c.x[1],
                &cols[0][1] * &c.x[0] + &cols[1][1] * &c.x[1],
            ];
            if let Some(y) = &c.y {
                rhs[0] += 2 * &y[0];
                rhs[1] += 2 * &y[1];
            }
            Ok(diff == rhs)
        }
        Certificate::Main(c) => {
            let g = b1.genus();
            if g < 2 || b2.genus() != g || c.xs.len() != g {
                return Ok(false);
            }
            let q = &c.conjugator;
            let mats1: Vec<Sl2Matrix> = b1
                .rep()
                .pairs()
                .iter()
                .flat_map(|(a, b)| [a.clone(), b.clone()])
                .collect();
            let conj_pairs: Vec<(Sl2Matrix, Sl2Matrix)> = b2
                .rep()
                .pairs()
                .iter()
                .map(|(a, b)| (q.conjugate(a), q.conjugate(b)))
                .collect();
            let conj_mats: Vec<Sl2Matrix> = conj_pairs
                .iter()
                .flat_map(|(a, b)| [a.clone(), b.clone()])
                .collect();
            if !same_sl_image(&mats1, &conj_mats)? {
                return Ok(false);
            }
            let minus = contains_minus_identity(b1.rep());
            if c.x0.is_some() != minus {
                return Ok(false);
            }
            let p1 = project_rep(b1.rep())?;
            let rep2q = SlRep::new(conj_pairs);
            let p2q = project_rep(&rep2q)?;
            // Central images need no orbit comparison: conjugation fixes
            // them, and the sign pattern is already part of image
            // equality. Everything else must align verbatim.
            let central = is_normal_form(&p1).map(|n| n.m == 0).unwrap_or(false);
            if !central {
                if p2q != p1 {
                    return Ok(false);
                }
                let tag1 = lift_orbit_tag(&canonicalize_lift(b1.rep())?)?;
                let tag2 = lift_orbit_tag(&canonicalize_lift(&rep2q)?)?;
                if tag1 != tag2 {
                    return Ok(false);
                }
            }
            let img = q.apply(b2.euler());
            let mut rhs = [BigInt::zero(), BigInt::zero()];
            for (i, (_, bmat)) in b1.rep().pairs().iter().enumerate() {
                let cols = difference_columns(bmat);
                rhs[0] += &cols[0][0] * &c.xs[i][0] + &cols[1][0] * &c.xs[i][1];
                rhs[1] += &cols[0][1] * &c.xs[i][0] + &cols[1][1] * &c.xs[i][1];
            }
            if let Some(x0) = &c.x0 {
                rhs[0] += 2 * &x0[0];
                rhs[1] += 2 * &x0[1];
            }
            let diff = [&b1.euler()[0] - &img[0], &b1.euler()[1] - &img[1]];
            Ok(diff == rhs)
        }
    }
}
