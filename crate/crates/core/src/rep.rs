//! Homomorphisms from closed orientable surface groups into SL(2,Z) and
//! PSL(2,Z).
//!
//! A genus-g surface group is presented on generator pairs (αᵢ, βᵢ) with
//! the single relator [α₁,β₁]⋯[α_g,β_g]. A homomorphism is stored through
//! its generator images, so the only structural requirement is that the
//! relator maps to the identity. On top of the raw values this module
//! certifies normal forms (trivial α-images, β-images forming a free
//! product basis of the image), folds images into core graphs, decides
//! whether a lifted image contains −E₂, and classifies the finitely many
//! sign lifts of a PSL-level homomorphism.

use crate::error::Error;
use crate::freeprod::{self, CoreGraph, FreeProductSignature, Word};
use crate::sl2z::psl::{lift_word, project, PslWord};
use crate::sl2z::Sl2Matrix;

/// A homomorphism π₁(Σ_g) → SL(2,Z), as the list of images (Aᵢ, Bᵢ) of
/// the standard generator pairs.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SlRep {
    pairs: Vec<(Sl2Matrix, Sl2Matrix)>,
}

impl SlRep {
    /// Wraps generator images without checking the relator; use
    /// [`SlRep::validate`] to test it.
    pub fn new(pairs: Vec<(Sl2Matrix, Sl2Matrix)>) -> Self {
        SlRep { pairs }
    }

    pub fn genus(&self) -> usize {
        self.pairs.len()
    }

    pub fn pairs(&self) -> &[(Sl2Matrix, Sl2Matrix)] {
        &self.pairs
    }

    /// Whether the images satisfy the surface relator
    /// [A₁,B₁]⋯[A_g,B_g] = E₂.
    pub fn validate(&self) -> bool {
        let mut acc = Sl2Matrix::identity();
        for (a, b) in &self.pairs {
            acc = acc.mul(&commutator(a, b));
        }
        acc.is_identity()
    }
}

/// A homomorphism π₁(Σ_g) → PSL(2,Z), as the list of images of the
/// standard generator pairs in free-product normal form.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PslRep {
    pairs: Vec<(PslWord, PslWord)>,
}

impl PslRep {
    /// Wraps generator images without checking the relator; use
    /// [`PslRep::validate`] to test it.
    pub fn new(pairs: Vec<(PslWord, PslWord)>) -> Self {
        PslRep { pairs }
    }

    pub fn genus(&self) -> usize {
        self.pairs.len()
    }

    pub fn pairs(&self) -> &[(PslWord, PslWord)] {
        &self.pairs
    }

    /// Whether the images satisfy the surface relator, reduced in
    /// PSL(2,Z).
    pub fn validate(&self) -> bool {
        let mut acc = PslWord::empty();
        for (a, b) in &self.pairs {
            let comm = a.concat(b).concat(&a.inverse()).concat(&b.inverse());
            acc = acc.concat(&comm);
        }
        acc.is_empty()
    }
}

fn commutator(a: &Sl2Matrix, b: &Sl2Matrix) -> Sl2Matrix {
    a.mul(b).mul(&a.inverse()).mul(&b.inverse())
}

/// Entrywise projection of an SL(2,Z) representation to PSL(2,Z).
pub fn project_rep(r: &SlRep) -> Result<PslRep, Error> {
    if !r.validate() {
        return Err(Error::NotSurfaceRep(
            "generator images violate the surface relator".into(),
        ));
    }
    Ok(PslRep::new(
        r.pairs
            .iter()
            .map(|(a, b)| (project(a), project(b)))
            .collect(),
    ))
}

/// Witness that a PSL-level representation kills every α-generator and
/// sends the β-generators to a free product basis of its image.
///
/// The breakpoints partition the β-images by order: positions up to `k`
/// have infinite order, positions in (k, l] order three, positions in
/// (l, m] order two, and the remaining β-images are trivial. The image
/// subgroup is then the free product of `k` copies of Z, `l − k` copies
/// of Z₃ and `m − l` copies of Z₂, with the recorded β-images as basis.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NormalFormCertificate {
    pub k: usize,
    pub l: usize,
    pub m: usize,
    /// The nontrivial β-images, in generator order (length `m`).
    pub beta_images: Vec<PslWord>,
}

/// Checks the normal-form shape and returns its breakpoints.
///
/// Beyond the order pattern of the β-images, the basis condition is
/// decided by folding the nontrivial β-images: the image is generated by
/// `m` elements whose orders match the claimed factors, so the canonical
/// surjection from the free product of those cyclic groups onto the
/// image is an isomorphism exactly when the folded Kurosh invariants are
/// (k, l−k copies of Z₃, m−l copies of Z₂); free products of cyclic
/// groups are Hopfian, so invariant equality forces injectivity.
pub fn is_normal_form(r: &PslRep) -> Option<NormalFormCertificate> {
    if r.pairs.iter().any(|(a, _)| !a.is_empty()) {
        return None;
    }
    let orders: Vec<Option<u32>> = r.pairs.iter().map(|(_, b)| b.order()).collect();
    let g = orders.len();
    let mut i = 0;
    while i < g && orders[i].is_none() {
        i += 1;
    }
    let k = i;
    while i < g && orders[i] == Some(3) {
        i += 1;
    }
    let l = i;
    while i < g && orders[i] == Some(2) {
        i += 1;
    }
    let m = i;
    while i < g && orders[i] == Some(1) {
        i += 1;
    }
    if i < g {
        return None;
    }
    let sig = FreeProductSignature::psl();
    let beta_images: Vec<PslWord> = r.pairs[..m].iter().map(|(_, b)| b.clone()).collect();
    let gens: Vec<Word> = beta_images.iter().map(Word::from_psl).collect();
    let core = freeprod::build(&sig, &gens).ok()?;
    let inv = freeprod::kurosh_invariants(&core);
    if inv.free_rank != k {
        return None;
    }
    let mut want = std::collections::BTreeMap::new();
    if l > k {
        want.insert(3u32, l - k);
    }
    if m > l {
        want.insert(2u32, m - l);
    }
    if inv.factor_counts != want {
        return None;
    }
    Some(NormalFormCertificate {
        k,
        l,
        m,
        beta_images,
    })
}

/// Folded core of the image subgroup of a PSL-level representation.
///
/// Two representations lie in the same mapping class group orbit exactly
/// when their image subgroups coincide, so this core (compared with
/// [`freeprod::equal`]) is a complete orbit invariant at the PSL level.
pub fn orbit_invariant(r: &PslRep) -> Result<CoreGraph, Error> {
    let sig = FreeProductSignature::psl();
    let gens: Vec<Word> = r
        .pairs
        .iter()
        .flat_map(|(a, b)| [Word::from_psl(a), Word::from_psl(b)])
        .filter(|w| !w.is_empty())
        .collect();
    freeprod::build(&sig, &gens)
}

/// Whether −E₂ lies in the subgroup of SL(2,Z) generated by the images.
///
/// For a representation whose projection is in normal form the answer is
/// read off directly: −E₂ is present exactly when some α-image is −E₂ or
/// some β-image has order 2, 4 or 6. Otherwise the general sign-section
/// test decides it.
pub fn contains_minus_identity(r: &SlRep) -> bool {
    if let Ok(proj) = project_rep(r) {
        if is_normal_form(&proj).is_some() {
            return r.pairs.iter().any(|(a, _)| a.is_minus_identity())
                || r.pairs
                    .iter()
                    .any(|(_, b)| matches!(b.order(), Some(2) | Some(4) | Some(6)));
        }
    }
    let mats: Vec<Sl2Matrix> = r
        .pairs
        .iter()
        .flat_map(|(a, b)| [a.clone(), b.clone()])
        .collect();
    section_signs(&mats).is_none()
}

/// Whether two matrix families generate the same subgroup of SL(2,Z).
///
/// The projected images are first compared as subgroups of PSL(2,Z)
/// through their folded cores. When they agree, a family containing −E₂
/// generates the full preimage of the projection, so both families do or
/// neither does; two minus-free families are equal exactly when their
/// unique section signs over the shared canonical core coincide.
pub fn same_sl_image(first: &[Sl2Matrix], second: &[Sl2Matrix]) -> Result<bool, Error> {
    let sig = FreeProductSignature::psl();
    let to_words = |mats: &[Sl2Matrix]| -> Vec<Word> {
        mats.iter()
            .map(|m| Word::from_psl(&project(m)))
            .filter(|w| !w.is_empty())
            .collect()
    };
    let c1 = freeprod::build(&sig, &to_words(first))?;
    let c2 = freeprod::build(&sig, &to_words(second))?;
    if !freeprod::equal(&c1, &c2)? {
        return Ok(false);
    }
    Ok(match (section_signs(first), section_signs(second)) {
        (None, None) => true,
        (Some((e1, x1)), Some((e2, x2))) => {
            debug_assert_eq!(e1, e2, "equal subgroups share the canonical presentation");
            x1 == x2
        }
        _ => false,
    })
}

/// Signs making the letterwise lift of the folded image into a
/// multiplicative section that reproduces every input matrix, if any.
///
/// The projections of the inputs fold to a core graph whose edge
/// generators present the image subgroup. A subgroup that misses −E₂
/// projects injectively, so each of its elements carries a well-defined
/// sign relative to the letterwise lift of its reduced word; requiring
/// the section to kill every orbit relation and to hit each input matrix
/// exactly is an affine linear system for those signs over GF(2). The
/// system is solvable precisely in the minus-free case, and its solution
/// is unique because a homogeneous solution would be a sign character of
/// the image vanishing on a generating set.
///
/// Returns the edge generator words together with their signs; `true`
/// marks an edge generator lifting to the negative of its letterwise
/// lift. Inputs equal to ±E₂ have empty projections and contribute no
/// fold data, but a literal −E₂ input makes the section impossible.
fn section_signs(mats: &[Sl2Matrix]) -> Option<(Vec<Word>, Vec<bool>)> {
    let sig = FreeProductSignature::psl();
    let mut gens: Vec<Word> = Vec::new();
    let mut kept: Vec<usize> = Vec::new();
    for (i, m) in mats.iter().enumerate() {
        let w = Word::from_psl(&project(m));
        if w.is_empty() {
            if m.is_minus_identity() {
                return None;
            }
        } else {
            kept.push(i);
            gens.push(w);
        }
    }
    let core = freeprod::build(&sig, &gens).expect("projected words fold over the psl signature");
    let pres = core.presentation();
    let ne = pres.edge_generators.len();
    assert!(ne < 127, "sign system supports at most 126 edge generators");
    let lifts: Vec<Sl2Matrix> = pres
        .edge_generators
        .iter()
        .map(|w| lift_word(&w.to_psl()))
        .collect();
    let rhs_bit = 1u128 << ne;
    let mut rows: Vec<u128> = Vec::new();
    for rel in &pres.orbit_relations {
        let mut mask = 0u128;
        let mut prod = Sl2Matrix::identity();
        for &(e, inv) in &rel.word {
            mask ^= 1 << e;
            let f = if inv {
                lifts[e].inverse()
            } else {
                lifts[e].clone()
            };
            prod = prod.mul(&f);
        }
        let total = prod.pow(i64::from(rel.power));
        debug_assert!(
            total.is_central(),
            "orbit relation must lift to a central element"
        );
        if rel.power % 2 == 0 {
            mask = 0;
        }
        if total.is_minus_identity() {
            mask |= rhs_bit;
        }
        rows.push(mask);
    }
    for (path, &i) in pres.generator_paths.iter().zip(&kept) {
        let mut mask = 0u128;
        let mut prod = Sl2Matrix::identity();
        for &(e, inv) in path {
            mask ^= 1 << e;
            let f = if inv {
                lifts[e].inverse()
            } else {
                lifts[e].clone()
            };
            prod = prod.mul(&f);
        }
        if prod != mats[i] {
            debug_assert!(
                prod.mul(&Sl2Matrix::minus_identity()) == mats[i],
                "path lift must match the input up to sign"
            );
            mask |= rhs_bit;
        }
        rows.push(mask);
    }
    let signs = solve_gf2(&rows, ne)?;
    Some((pres.edge_generators, signs))
}

/// Solves a GF(2) linear system given as rows of variable bits with the
/// right-hand side in bit `nvars`; free variables are set to zero.
fn solve_gf2(rows: &[u128], nvars: usize) -> Option<Vec<bool>> {
    let rhs_bit = 1u128 << nvars;
    let var_mask = rhs_bit - 1;
    let mut pivots: Vec<(usize, u128)> = Vec::new();
    for &original in rows {
        let mut row = original;
        for &(c, r) in &pivots {
            if row >> c & 1 == 1 {
                row ^= r;
            }
        }
        if row & var_mask == 0 {
            if row & rhs_bit != 0 {
                return None;
            }
            continue;
        }
        let c = (0..nvars)
            .find(|&c| row >> c & 1 == 1)
            .expect("nonzero row");
        pivots.push((c, row));
    }
    for i in 0..pivots.len() {
        let (c, r) = pivots[i];
        for (k, p) in pivots.iter_mut().enumerate() {
            if k != i && p.1 >> c & 1 == 1 {
                p.1 ^= r;
            }
        }
    }
    let mut x = vec![false; nvars];
    for &(c, r) in &pivots {
        x[c] = r & rhs_bit != 0;
    }
    Some(x)
}

/// Rewrites a lift of a normal-form representation into the canonical
/// shape: β-images of order 6 or 2 are negated (setting the paired
/// α-image to −E₂), α-images over order-4 β-images are set to −E₂, and
/// trailing β-images are made E₂.
///
/// Each rewrite replaces the pair (±E₂, B) by an equivalent one, so the
/// result generates an isomorphic bundle datum; pairs at positions up to
/// `k` are never touched. The projection is unchanged.
pub fn canonicalize_lift(r: &SlRep) -> Result<SlRep, Error> {
    let proj = project_rep(r)?;
    let cert = is_normal_form(&proj).ok_or_else(|| {
        Error::NotNormalForm("canonicalization needs trivial α-images and basis β-images".into())
    })?;
    let minus = Sl2Matrix::minus_identity();
    let mut pairs = r.pairs.clone();
    for (i, pair) in pairs.iter_mut().enumerate() {
        if cert.k <= i && i < cert.l {
            if pair.1.order() == Some(6) {
                *pair = (minus.clone(), pair.1.mul(&minus));
            }
        } else if cert.l <= i && i < cert.m {
            pair.0 = minus.clone();
        } else if i >= cert.m && pair.1.is_minus_identity() {
            *pair = (minus.clone(), Sl2Matrix::identity());
        }
    }
    let out = SlRep::new(pairs);
    debug_assert!(out.validate());
    Ok(out)
}

/// Orbit class of a canonicalized lift among all lifts of the same
/// normal-form projection.
///
/// Lifts whose image contains −E₂ are classified by the α-signs over the
/// infinite-order positions alone; minus-free lifts are classified by
/// the exact β-matrices there. Two canonicalized lifts of one
/// normal-form projection generate equivalent data exactly when their
/// tags are equal.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum LiftOrbitTag {
    /// −E₂ lies in the image; entries are the signs ε₁, …, ε_k ∈ {±1}.
    MinusInImage(Vec<i8>),
    /// −E₂ is not in the image; entries are the matrices B₁, …, B_k.
    MinusFree(Vec<Sl2Matrix>),
}

/// Computes the orbit tag of a canonicalized lift.
///
/// Canonicalization pins every sign outside the infinite-order block, so
/// after it −E₂ lies in the image exactly when some α-image is −E₂; the
/// tag then keeps only the data that still distinguishes orbits.
pub fn lift_orbit_tag(r: &SlRep) -> Result<LiftOrbitTag, Error> {
    let proj = project_rep(r)?;
    let cert = is_normal_form(&proj).ok_or_else(|| {
        Error::NotNormalForm(
            "orbit tags are defined for lifts of normal-form representations".into(),
        )
    })?;
    for (i, (a, b)) in r.pairs.iter().enumerate() {
        let canonical = if i < cert.k {
            true
        } else if i < cert.l {
            b.order() == Some(3)
        } else if i < cert.m {
            a.is_minus_identity()
        } else {
            b.is_identity()
        };
        if !canonical {
            return Err(Error::NotNormalForm(
                "lift is not canonical; apply canonicalize_lift first".into(),
            ));
        }
    }
    if r.pairs.iter().any(|(a, _)| a.is_minus_identity()) {
        let signs = r.pairs[..cert.k]
            .iter()
            .map(|(a, _)| if a.is_minus_identity() { -1 } else { 1 })
            .collect();
        Ok(LiftOrbitTag::MinusInImage(signs))
    } else {
        let mats = r.pairs[..cert.k].iter().map(|(_, b)| b.clone()).collect();
        Ok(LiftOrbitTag::MinusFree(mats))
    }
}

/// All 2^{2g} lifts of a PSL-level representation to SL(2,Z).
///
/// Each generator image is lifted letterwise and then decorated with an
/// independent sign. Signs are central and cancel inside commutators, so
/// the surface relator lifts to ±E₂ independently of the sign choice;
/// the plus sign is forced because the mod-2 self-intersection pairing
/// of a closed orientable surface vanishes, which rules out the twisted
/// value. Every returned representation therefore satisfies the relator.
pub fn enumerate_lifts(r: &PslRep) -> Vec<SlRep> {
    let g = r.genus();
    assert!(2 * g < 31, "lift enumeration is exponential in the genus");
    let minus = Sl2Matrix::minus_identity();
    let base: Vec<(Sl2Matrix, Sl2Matrix)> = r
        .pairs
        .iter()
        .map(|(a, b)| (lift_word(a), lift_word(b)))
        .collect();
    (0..1u32 << (2 * g))
        .map(|bits| {
            let pairs = base
                .iter()
                .enumerate()
                .map(|(i, (a, b))| {
                    let a = if bits >> (2 * i) & 1 == 1 {
                        a.mul(&minus)
                    } else {
                        a.clone()
                    };
                    let b = if bits >> (2 * i + 1) & 1 == 1 {
                        b.mul(&minus)
                    } else {
                        b.clone()
                    };
                    (a, b)
                })
                .collect();
            let lift = SlRep::new(pairs);
            debug_assert!(lift.validate(), "sign lifts keep the surface relator");
            lift
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn e2() -> Sl2Matrix {
        Sl2Matrix::identity()
    }

    fn mi() -> Sl2Matrix {
        Sl2Matrix::minus_identity()
    }

    fn s() -> Sl2Matrix {
        Sl2Matrix::gen_s()
    }

    fn t() -> Sl2Matrix {
        Sl2Matrix::gen_t()
    }

    fn c() -> Sl2Matrix {
        Sl2Matrix::shear()
    }

    fn w(text: &str) -> PslWord {
        text.parse().unwrap()
    }

    fn psl_rep(pairs: &[(&str, &str)]) -> PslRep {
        PslRep::new(pairs.iter().map(|(a, b)| (w(a), w(b))).collect())
    }

    #[test]
    fn relator_validation() {
        assert!(!SlRep::new(vec![(s(), t())]).validate());
        assert!(SlRep::new(vec![(mi(), t())]).validate());
        assert!(SlRep::new(vec![(e2(), s()), (e2(), t())]).validate());
        assert!(SlRep::new(vec![]).validate());

        assert!(!psl_rep(&[("a", "b")]).validate());
        assert!(psl_rep(&[("e", "b")]).validate());
        assert!(psl_rep(&[("ab", "ab")]).validate());
    }

    #[test]
    fn projection_of_generator_images() {
        let p = project_rep(&SlRep::new(vec![(mi(), t())])).unwrap();
        assert_eq!(p.pairs(), &[(w("e"), w("b"))]);

        let p = project_rep(&SlRep::new(vec![(s(), s())])).unwrap();
        assert_eq!(p.pairs(), &[(w("a"), w("a"))]);

        let p = project_rep(&SlRep::new(vec![(e2(), c()), (e2(), s())])).unwrap();
        assert_eq!(p.pairs(), &[(w("e"), w("b2a")), (w("e"), w("a"))]);

        assert!(project_rep(&SlRep::new(vec![(s(), t())])).is_err());
    }

    #[test]
    fn normal_form_certificates() {
        let cert = is_normal_form(&psl_rep(&[("e", "ababa"), ("e", "b")])).unwrap();
        assert_eq!((cert.k, cert.l, cert.m), (1, 2, 2));
        assert_eq!(cert.beta_images, vec![w("ababa"), w("b")]);

        // ab and b together regenerate the whole group, so they are not
        // a free product basis of rank 1 + Z3.
        assert!(is_normal_form(&psl_rep(&[("e", "ab"), ("e", "b")])).is_none());

        assert!(is_normal_form(&psl_rep(&[("a", "e")])).is_none());

        let cert = is_normal_form(&psl_rep(&[("e", "e")])).unwrap();
        assert_eq!((cert.k, cert.l, cert.m), (0, 0, 0));

        let cert = is_normal_form(&psl_rep(&[("e", "b")])).unwrap();
        assert_eq!((cert.k, cert.l, cert.m), (0, 1, 1));

        let cert = is_normal_form(&psl_rep(&[("e", "b"), ("e", "a")])).unwrap();
        assert_eq!((cert.k, cert.l, cert.m), (0, 1, 2));

        // order pattern must be infinite, then 3, then 2, then trivial
        assert!(is_normal_form(&psl_rep(&[("e", "a"), ("e", "b")])).is_none());
        assert!(is_normal_form(&psl_rep(&[("e", "e"), ("e", "b")])).is_none());
    }

    #[test]
    fn orbit_invariant_compares_image_subgroups() {
        let c1 = orbit_invariant(&psl_rep(&[("e", "b")])).unwrap();
        let c2 = orbit_invariant(&psl_rep(&[("b2", "b")])).unwrap();
        assert!(freeprod::equal(&c1, &c2).unwrap());

        let full = orbit_invariant(&psl_rep(&[("e", "b"), ("e", "a")])).unwrap();
        let inv = freeprod::kurosh_invariants(&full);
        assert_eq!(inv.free_rank, 0);
        assert_eq!(inv.factor_counts.get(&2), Some(&1));
        assert_eq!(inv.factor_counts.get(&3), Some(&1));

        let trivial = orbit_invariant(&psl_rep(&[("e", "e")])).unwrap();
        assert_eq!(trivial.state_count(), 1);
    }

    #[test]
    fn minus_identity_in_normal_form_images() {
        assert!(!contains_minus_identity(&SlRep::new(vec![
            (e2(), c()),
            (e2(), e2()),
        ])));
        assert!(contains_minus_identity(&SlRep::new(vec![(e2(), s())])));
        assert!(contains_minus_identity(&SlRep::new(vec![
            (e2(), c()),
            (mi(), e2()),
        ])));
        assert!(contains_minus_identity(&SlRep::new(vec![(e2(), t())])));
        assert!(!contains_minus_identity(&SlRep::new(vec![(
            e2(),
            t().mul(&mi()),
        )])));
    }

    #[test]
    fn minus_identity_in_general_images() {
        // projections with nontrivial first images take the general path
        assert!(contains_minus_identity(&SlRep::new(vec![(t(), t())])));
        assert!(!contains_minus_identity(&SlRep::new(vec![(
            t().mul(&mi()),
            t().mul(&mi()),
        )])));
        assert!(contains_minus_identity(&SlRep::new(vec![(s(), s())])));
        assert!(!contains_minus_identity(&SlRep::new(vec![(
            c(),
            c().pow(3)
        )])));
        assert!(contains_minus_identity(&SlRep::new(vec![
            (e2(), c()),
            (e2(), c().mul(&mi())),
        ])));
        assert!(!contains_minus_identity(&SlRep::new(vec![
            (e2(), c()),
            (e2(), c()),
        ])));
    }

    #[test]
    fn sign_paths_agree_on_normal_forms() {
        // every lift of these normal forms gets the same answer from the
        // order criterion and from the sign-section system
        for rep in [
            psl_rep(&[("e", "b2a"), ("e", "e")]),
            psl_rep(&[("e", "b"), ("e", "a")]),
            psl_rep(&[("e", "ababa"), ("e", "b")]),
        ] {
            for lift in enumerate_lifts(&rep) {
                let fast = contains_minus_identity(&lift);
                let mats: Vec<Sl2Matrix> = lift
                    .pairs()
                    .iter()
                    .flat_map(|(a, b)| [a.clone(), b.clone()])
                    .collect();
                assert_eq!(fast, section_signs(&mats).is_none());
            }
        }
    }

    #[test]
    fn image_equality_distinguishes_signs() {
        assert!(same_sl_image(&[c()], &[c()]).unwrap());
        assert!(!same_sl_image(&[c()], &[c().mul(&mi())]).unwrap());
        assert!(same_sl_image(&[t()], &[t().inverse()]).unwrap());
        assert!(!same_sl_image(&[t().mul(&mi())], &[t()]).unwrap());
        assert!(same_sl_image(&[s(), t()], &[t(), s().mul(&mi())]).unwrap());
        assert!(!same_sl_image(&[c()], &[c().pow(2)]).unwrap());
        assert!(same_sl_image(&[c().mul(&mi()), mi()], &[c(), mi()]).unwrap());
    }

    #[test]
    fn canonical_lift_rewrites() {
        let minus_t = t().mul(&mi());
        let out = canonicalize_lift(&SlRep::new(vec![(e2(), minus_t.clone())])).unwrap();
        assert_eq!(out.pairs(), &[(e2(), minus_t.clone())]);

        let out = canonicalize_lift(&SlRep::new(vec![(e2(), t())])).unwrap();
        assert_eq!(out.pairs(), &[(mi(), minus_t.clone())]);

        let out = canonicalize_lift(&SlRep::new(vec![(e2(), s())])).unwrap();
        assert_eq!(out.pairs(), &[(mi(), s())]);

        let out = canonicalize_lift(&SlRep::new(vec![(e2(), mi())])).unwrap();
        assert_eq!(out.pairs(), &[(mi(), e2())]);

        assert!(canonicalize_lift(&SlRep::new(vec![(s(), s())])).is_err());

        // the rewrites never change minus-identity membership
        let tst = t().mul(&s()).mul(&t());
        for rep in [
            SlRep::new(vec![(e2(), t())]),
            SlRep::new(vec![(e2(), mi())]),
            SlRep::new(vec![(mi(), tst), (e2(), s())]),
        ] {
            let before = contains_minus_identity(&rep);
            let after = contains_minus_identity(&canonicalize_lift(&rep).unwrap());
            assert_eq!(before, after);
        }
    }

    #[test]
    fn orbit_tags_of_canonical_lifts() {
        let tag = lift_orbit_tag(&SlRep::new(vec![(e2(), c()), (mi(), e2())])).unwrap();
        assert_eq!(tag, LiftOrbitTag::MinusInImage(vec![1]));

        let tag = lift_orbit_tag(&SlRep::new(vec![(e2(), c()), (e2(), e2())])).unwrap();
        assert_eq!(tag, LiftOrbitTag::MinusFree(vec![c()]));

        let tag = lift_orbit_tag(&SlRep::new(vec![(mi(), c()), (e2(), e2())])).unwrap();
        assert_eq!(tag, LiftOrbitTag::MinusInImage(vec![-1]));
        assert_ne!(
            LiftOrbitTag::MinusInImage(vec![-1]),
            LiftOrbitTag::MinusInImage(vec![1])
        );
        assert_ne!(
            LiftOrbitTag::MinusFree(vec![c()]),
            LiftOrbitTag::MinusFree(vec![c().mul(&mi())])
        );

        // not canonical: order-6 image
        assert!(lift_orbit_tag(&SlRep::new(vec![(e2(), t())])).is_err());
    }

    #[test]
    fn lift_census_counts() {
        assert_eq!(enumerate_lifts(&psl_rep(&[("e", "e")])).len(), 4);
        assert_eq!(
            enumerate_lifts(&psl_rep(&[("e", "b"), ("e", "a")])).len(),
            16
        );
        assert_eq!(enumerate_lifts(&PslRep::new(vec![])).len(), 1);
        for lift in enumerate_lifts(&psl_rep(&[("ab", "ab"), ("e", "b")])) {
            assert!(lift.validate());
        }
    }

    fn distinct_tags(rep: &PslRep) -> usize {
        let mut seen: BTreeSet<String> = BTreeSet::new();
        for lift in enumerate_lifts(rep) {
            let tag = lift_orbit_tag(&canonicalize_lift(&lift).unwrap()).unwrap();
            seen.insert(format!("{tag:?}"));
        }
        seen.len()
    }

    #[test]
    fn orbit_census_small() {
        // one infinite position, no torsion: 2^{k+1} classes
        assert_eq!(distinct_tags(&psl_rep(&[("e", "b2a"), ("e", "e")])), 4);
        // one infinite position and an order-2 position: 2^k classes
        assert_eq!(distinct_tags(&psl_rep(&[("e", "bab"), ("e", "a")])), 2);
        // torsion only: order-3 position keeps a minus-free lift
        assert_eq!(distinct_tags(&psl_rep(&[("e", "b"), ("e", "e")])), 2);
        // order-2 position forces the minus
        assert_eq!(distinct_tags(&psl_rep(&[("e", "a"), ("e", "e")])), 1);
    }
}
