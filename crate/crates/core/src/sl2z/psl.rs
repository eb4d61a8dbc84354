//! PSL(2,Z) as the free product Z₂ ∗ Z₃: normal-form words, conjugacy,
//! centralizers, and the projection from SL(2,Z).
//!
//! Generators: a = p(s) of order 2 and b = p(t) of order 3. Every element
//! has a unique normal form as an alternating word over {a, b, b²}, the
//! empty word being the identity.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::Error;
use crate::sl2z::{matrix_to_word, Sl2Matrix, SlGen};

/// A normal-form letter: a, b, or b².
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum PslLetter {
    A,
    B,
    B2,
}

impl PslLetter {
    /// 0 for the order-2 factor ⟨a⟩, 1 for the order-3 factor ⟨b⟩.
    pub fn factor(self) -> u8 {
        match self {
            PslLetter::A => 0,
            PslLetter::B | PslLetter::B2 => 1,
        }
    }

    /// Exponent of the factor generator: a¹, b¹, or b².
    pub fn exponent(self) -> u8 {
        match self {
            PslLetter::A | PslLetter::B => 1,
            PslLetter::B2 => 2,
        }
    }

    /// Order of the cyclic factor the letter lives in.
    fn factor_order(self) -> u8 {
        match self.factor() {
            0 => 2,
            _ => 3,
        }
    }

    fn from_factor_exponent(factor: u8, exponent: u8) -> Option<PslLetter> {
        match (factor, exponent) {
            (0, 1) => Some(PslLetter::A),
            (1, 1) => Some(PslLetter::B),
            (1, 2) => Some(PslLetter::B2),
            _ => None,
        }
    }

    pub fn inverse(self) -> PslLetter {
        match self {
            PslLetter::A => PslLetter::A,
            PslLetter::B => PslLetter::B2,
            PslLetter::B2 => PslLetter::B,
        }
    }
}

/// A PSL(2,Z) element in free-product normal form.
///
/// The letter sequence always alternates between the two factors; this
/// invariant is maintained by every constructor, so word equality is
/// group-element equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct PslWord {
    letters: Vec<PslLetter>,
}

impl PslWord {
    /// The identity element.
    pub fn empty() -> Self {
        PslWord {
            letters: Vec::new(),
        }
    }

    /// Reduces an arbitrary letter sequence to normal form.
    pub fn reduce(raw: impl IntoIterator<Item = PslLetter>) -> Self {
        let mut word = PslWord::empty();
        for letter in raw {
            word.push(letter);
        }
        word
    }

    /// Appends one letter, merging within a factor modulo its order.
    pub fn push(&mut self, letter: PslLetter) {
        if let Some(&top) = self.letters.last() {
            if top.factor() == letter.factor() {
                self.letters.pop();
                let merged = (top.exponent() + letter.exponent()) % letter.factor_order();
                if let Some(l) = PslLetter::from_factor_exponent(letter.factor(), merged) {
                    self.letters.push(l);
                }
                return;
            }
        }
        self.letters.push(letter);
    }

    /// Product of two normal-form words, in normal form.
    pub fn concat(&self, other: &PslWord) -> PslWord {
        let mut out = self.clone();
        for &l in &other.letters {
            out.push(l);
        }
        out
    }

    /// The inverse element.
    pub fn inverse(&self) -> PslWord {
        PslWord {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// The conjugate self · other · self⁻¹.
    pub fn conjugate(&self, other: &PslWord) -> PslWord {
        self.concat(other).concat(&self.inverse())
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[PslLetter] {
        &self.letters
    }

    /// Splits off a maximal conjugating prefix: returns (c, r) with
    /// self = c · r · c⁻¹ and r cyclically reduced (its first and last
    /// letters lie in different factors, or it has at most one letter).
    pub fn cyclic_reduce(&self) -> (PslWord, PslWord) {
        let mut core = self.letters.clone();
        let mut conj = Vec::new();
        while core.len() >= 2 && core[0].factor() == core[core.len() - 1].factor() {
            let first = core.remove(0);
            let last = core.pop().expect("len >= 2");
            conj.push(first);
            let merged = (last.exponent() + first.exponent()) % first.factor_order();
            if let Some(l) = PslLetter::from_factor_exponent(first.factor(), merged) {
                core.push(l);
            }
        }
        (PslWord { letters: conj }, PslWord { letters: core })
    }

    /// Order of the element: 1, 2, 3, or `None` for infinite.
    pub fn order(&self) -> Option<u32> {
        let (_, core) = self.cyclic_reduce();
        match core.letters.as_slice() {
            [] => Some(1),
            [l] => Some(l.factor_order() as u32),
            _ => None,
        }
    }
}

impl fmt::Display for PslWord {
    /// Renders as a compact string like `ab^2a`, or `e` for the identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "e");
        }
        for l in &self.letters {
            match l {
                PslLetter::A => write!(f, "a")?,
                PslLetter::B => write!(f, "b")?,
                PslLetter::B2 => write!(f, "b^2")?,
            }
        }
        Ok(())
    }
}

impl FromStr for PslWord {
    type Err = Error;

    /// Parses compact words over `a`, `b`, `b2`, `b^2` (also `b²`), with
    /// optional whitespace or dots between letters; `e` is the identity.
    fn from_str(s: &str) -> Result<Self, Error> {
        let mut letters = Vec::new();
        let chars: Vec<char> = s
            .chars()
            .filter(|c| !c.is_whitespace() && *c != '.')
            .collect();
        if chars == ['e'] {
            return Ok(PslWord::empty());
        }
        let mut i = 0;
        while i < chars.len() {
            match chars[i] {
                'a' => {
                    letters.push(PslLetter::A);
                    i += 1;
                }
                'b' => {
                    let mut j = i + 1;
                    if j < chars.len() && chars[j] == '^' {
                        j += 1;
                    }
                    if j < chars.len() && (chars[j] == '2' || chars[j] == '²') {
                        letters.push(PslLetter::B2);
                        i = j + 1;
                    } else {
                        letters.push(PslLetter::B);
                        i += 1;
                    }
                }
                other => {
                    return Err(Error::Parse(format!(
                        "unexpected character {other:?} in word {s:?}"
                    )))
                }
            }
        }
        Ok(PslWord::reduce(letters))
    }
}

/// Image of a matrix under the projection p: SL(2,Z) → PSL(2,Z), in
/// normal form. Satisfies project(A) = project(−A).
pub fn project(m: &Sl2Matrix) -> PslWord {
    let word = matrix_to_word(m);
    let mut letters = Vec::new();
    for (gen, exp) in word.runs() {
        match gen {
            SlGen::S => {
                if exp.mod_floor(&2.into()).to_u8() == Some(1) {
                    letters.push(PslLetter::A);
                }
            }
            SlGen::T => match exp.mod_floor(&3.into()).to_u8() {
                Some(1) => letters.push(PslLetter::B),
                Some(2) => letters.push(PslLetter::B2),
                _ => {}
            },
        }
    }
    PslWord::reduce(letters)
}

/// Evaluates the letterwise lift a ↦ s, b ↦ t in SL(2,Z).
///
/// This is a section of the projection as a function on normal forms, not
/// a homomorphism; the result is one of the two preimages of the word.
pub fn lift_word(w: &PslWord) -> Sl2Matrix {
    let s = Sl2Matrix::gen_s();
    let t = Sl2Matrix::gen_t();
    let mut acc = Sl2Matrix::identity();
    for l in w.letters() {
        let factor = match l {
            PslLetter::A => s.clone(),
            PslLetter::B => t.clone(),
            PslLetter::B2 => t.mul(&t),
        };
        acc = acc.mul(&factor);
    }
    acc
}

/// Finds g with g·u·g⁻¹ = v in PSL(2,Z), or `None` if u and v are not
/// conjugate.
///
/// Both words are cyclically reduced; cores of length ≥ 2 are conjugate
/// exactly when one is a rotation of the other, and cores inside a cyclic
/// factor are conjugate exactly when equal. The returned conjugator is
/// verified by reduction before being returned.
pub fn psl_conjugate(u: &PslWord, v: &PslWord) -> Option<PslWord> {
    let (cu, ru) = u.cyclic_reduce();
    let (cv, rv) = v.cyclic_reduce();
    if ru.len() != rv.len() {
        return None;
    }
    let g = if ru.len() <= 1 {
        if ru != rv {
            return None;
        }
        cv.concat(&cu.inverse())
    } else {
        let n = ru.len();
        let mut found = None;
        for i in 0..n {
            let rotated: Vec<PslLetter> = ru.letters[i..]
                .iter()
                .chain(ru.letters[..i].iter())
                .copied()
                .collect();
            if rotated == rv.letters {
                let prefix = PslWord {
                    letters: ru.letters[..i].to_vec(),
                };
                found = Some(cv.concat(&prefix.inverse()).concat(&cu.inverse()));
                break;
            }
        }
        found?
    };
    debug_assert_eq!(g.conjugate(u), *v);
    Some(g)
}

/// Generator of the centralizer of a nontrivial element.
///
/// For u conjugate into a cyclic factor this is the conjugated factor
/// generator; otherwise it is the conjugated primitive root of the
/// cyclically reduced core (the shortest word some power of which equals
/// the core).
pub fn centralizer_root(u: &PslWord) -> Result<PslWord, Error> {
    if u.is_empty() {
        return Err(Error::EmptyWord);
    }
    let (c, core) = u.cyclic_reduce();
    let root_core = if core.len() == 1 {
        let generator = PslLetter::from_factor_exponent(core.letters[0].factor(), 1)
            .expect("exponent 1 is valid in every factor");
        PslWord {
            letters: vec![generator],
        }
    } else {
        let n = core.len();
        let mut primitive = core.clone();
        for p in 1..n {
            if n % p != 0 {
                continue;
            }
            let pattern = &core.letters[..p];
            if core.letters.chunks(p).all(|chunk| chunk == pattern) {
                primitive = PslWord {
                    letters: pattern.to_vec(),
                };
                break;
            }
        }
        primitive
    };
    Ok(c.concat(&root_core).concat(&c.inverse()))
}
