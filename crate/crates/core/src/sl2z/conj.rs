//! Conjugacy decision in SL(2,Z) via the PSL(2,Z) free-product structure.

use crate::sl2z::psl::{centralizer_root, lift_word, project, psl_conjugate};
use crate::sl2z::Sl2Matrix;

/// Finds Q with Q·A·Q⁻¹ = B, or `None` when A and B are not conjugate.
///
/// Every conjugator projects to a PSL(2,Z) conjugator, and all PSL
/// conjugators form a coset Cent(p(B)) · g of the cyclic centralizer.
/// The candidates are therefore Zᵏ·Q₀ with Q₀ a lift of one conjugator g
/// and Z a lift of the centralizer's root; the sign of Zᵏ·Q₀·A·Q₀⁻¹·Z⁻ᵏ
/// relative to B is periodic in k with period at most 2, and ⟨Z⟩ has at
/// most 12 elements when finite, so a sweep of twelve powers is
/// exhaustive. Matrix signs of the candidates themselves are irrelevant
/// because ±Q conjugate identically. Results are verified by
/// multiplication, so a returned conjugator is always genuine.
pub fn sl_conjugate(a: &Sl2Matrix, b: &Sl2Matrix) -> Option<Sl2Matrix> {
    if a == b {
        return Some(Sl2Matrix::identity());
    }
    if a.trace() != b.trace() {
        return None;
    }
    let u = project(a);
    let v = project(b);
    if v.is_empty() {
        // B is central, so only B itself is conjugate to it; a == b was
        // already handled.
        return None;
    }
    let g = psl_conjugate(&u, &v)?;
    let q0 = lift_word(&g);
    if q0.conjugate(a) == *b {
        return Some(q0);
    }
    let root = centralizer_root(&v).expect("v is nonempty");
    let z = lift_word(&root);
    let mut q = q0;
    for _ in 0..12 {
        q = z.mul(&q);
        if q.conjugate(a) == *b {
            return Some(q);
        }
    }
    None
}
