//! Finitely generated subgroups of free products of finite cyclic groups
//! Z_{k₁} ∗ … ∗ Z_{kₙ}, represented by folded core graphs.
//!
//! The signature (2,3) specializes to PSL(2,Z). Elements are words over
//! letters gⱼ^e with 1 ≤ e < kⱼ; subgroups are built by folding generator
//! loops, after which membership, Kurosh invariants, equality, and
//! conjugacy are all decidable. Every membership answer carries a witness
//! expression in the original generators.

mod core_graph;

pub use core_graph::{
    build, conjugacy_candidates, conjugate_subgroups, equal, euler_characteristic_check,
    finite_index, kurosh_invariants, member, CoreGraph, KuroshInvariants, OrbitRelation,
    Presentation,
};

use std::fmt;

use crate::error::Error;
use crate::sl2z::psl::{PslLetter, PslWord};

/// Orders (k₁,…,kₙ) of the cyclic factors, each ≥ 2.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FreeProductSignature {
    orders: Vec<u32>,
}

impl FreeProductSignature {
    pub fn new(orders: Vec<u32>) -> Result<Self, Error> {
        if orders.iter().any(|&k| k < 2) {
            return Err(Error::MalformedWord(format!(
                "factor orders must be at least 2, got {orders:?}"
            )));
        }
        Ok(FreeProductSignature { orders })
    }

    /// The PSL(2,Z) signature Z₂ ∗ Z₃.
    pub fn psl() -> Self {
        FreeProductSignature { orders: vec![2, 3] }
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    pub fn factors(&self) -> usize {
        self.orders.len()
    }

    pub fn is_psl(&self) -> bool {
        self.orders == [2, 3]
    }
}

impl fmt::Display for FreeProductSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.orders.iter().map(|k| k.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// One word letter gⱼ^e with 0 ≤ factor < n and 1 ≤ exp < kⱼ.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Letter {
    pub factor: usize,
    pub exp: u32,
}

/// A free-product element in normal form: letters from distinct adjacent
/// factors, exponents reduced modulo the factor order.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn empty() -> Self {
        Word {
            letters: Vec::new(),
        }
    }

    /// Normalizes a raw letter sequence, validating factors and exponents.
    pub fn new(
        raw: impl IntoIterator<Item = Letter>,
        sig: &FreeProductSignature,
    ) -> Result<Self, Error> {
        let mut word = Word::empty();
        for letter in raw {
            if letter.factor >= sig.factors() {
                return Err(Error::MalformedWord(format!(
                    "factor index {} out of range for signature {sig}",
                    letter.factor + 1
                )));
            }
            word.push(letter.factor, letter.exp, sig);
        }
        Ok(word)
    }

    /// Appends gⱼ^e, merging within the factor modulo its order.
    pub fn push(&mut self, factor: usize, exp: u32, sig: &FreeProductSignature) {
        let k = sig.orders()[factor];
        let mut exp = exp % k;
        if let Some(top) = self.letters.last() {
            if top.factor == factor {
                exp = (top.exp + exp) % k;
                self.letters.pop();
            }
        }
        if exp != 0 {
            self.letters.push(Letter { factor, exp });
        }
    }

    pub fn concat(&self, other: &Word, sig: &FreeProductSignature) -> Word {
        let mut out = self.clone();
        for l in &other.letters {
            out.push(l.factor, l.exp, sig);
        }
        out
    }

    pub fn inverse(&self, sig: &FreeProductSignature) -> Word {
        let letters = self
            .letters
            .iter()
            .rev()
            .map(|l| Letter {
                factor: l.factor,
                exp: sig.orders()[l.factor] - l.exp,
            })
            .collect();
        Word { letters }
    }

    /// The conjugate self · other · self⁻¹.
    pub fn conjugate(&self, other: &Word, sig: &FreeProductSignature) -> Word {
        self.concat(other, sig).concat(&self.inverse(sig), sig)
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// Parses a word. For signature (2,3) the compact alphabet `a`, `b`,
    /// `b2`/`b^2` is accepted (e.g. `abab2`); in general, letters are
    /// `g<j>` or `g<j>^<e>` with 1-based factor index, separated by dots
    /// or whitespace. `e` denotes the identity.
    pub fn parse(input: &str, sig: &FreeProductSignature) -> Result<Self, Error> {
        let trimmed = input.trim();
        if trimmed == "e" {
            return Ok(Word::empty());
        }
        let mut raw = Vec::new();
        if sig.is_psl() && !trimmed.contains('g') {
            let psl: PslWord = trimmed.parse()?;
            return Ok(Word::from_psl(&psl));
        }
        for token in trimmed.split(['.', ' ']).filter(|t| !t.is_empty()) {
            let rest = token.strip_prefix('g').ok_or_else(|| {
                Error::MalformedWord(format!("expected g<j> or g<j>^<e>, got {token:?}"))
            })?;
            let (idx, exp) = match rest.split_once('^') {
                Some((i, e)) => (i, e),
                None => (rest, "1"),
            };
            let factor: usize = idx
                .parse()
                .map_err(|_| Error::MalformedWord(format!("bad factor index in {token:?}")))?;
            let exp: u32 = exp
                .parse()
                .map_err(|_| Error::MalformedWord(format!("bad exponent in {token:?}")))?;
            if factor == 0 || factor > sig.factors() {
                return Err(Error::MalformedWord(format!(
                    "factor index {factor} out of range for signature {sig}"
                )));
            }
            let k = sig.orders()[factor - 1];
            if exp == 0 || exp >= k {
                return Err(Error::MalformedWord(format!(
                    "exponent {exp} out of range 1..{k} in {token:?}"
                )));
            }
            raw.push(Letter {
                factor: factor - 1,
                exp,
            });
        }
        Word::new(raw, sig)
    }

    /// Renders the word; (2,3) words use the `a`/`b`/`b^2` alphabet.
    pub fn display(&self, sig: &FreeProductSignature) -> String {
        if self.letters.is_empty() {
            return "e".to_string();
        }
        if sig.is_psl() {
            return self.to_psl().to_string();
        }
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|l| {
                if l.exp == 1 {
                    format!("g{}", l.factor + 1)
                } else {
                    format!("g{}^{}", l.factor + 1, l.exp)
                }
            })
            .collect();
        parts.join(".")
    }

    /// Converts a PSL(2,Z) normal-form word to a (2,3)-signature word.
    pub fn from_psl(w: &PslWord) -> Word {
        let letters = w
            .letters()
            .iter()
            .map(|l| Letter {
                factor: l.factor() as usize,
                exp: l.exponent() as u32,
            })
            .collect();
        Word { letters }
    }

    /// Converts a (2,3)-signature word to a PSL(2,Z) word.
    pub fn to_psl(&self) -> PslWord {
        let letters = self.letters.iter().map(|l| match (l.factor, l.exp) {
            (0, 1) => PslLetter::A,
            (1, 1) => PslLetter::B,
            (1, 2) => PslLetter::B2,
            _ => unreachable!("letter outside the (2,3) alphabet"),
        });
        PslWord::reduce(letters)
    }
}

/// A formal product of the original generators of a subgroup: symbols
/// x₁, x₂, … and their inverses, freely reduced.
///
/// Witnesses produced by membership queries have this type; evaluating
/// one through the generator list recovers the queried element.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct GenWord {
    symbols: Vec<i32>,
}

impl GenWord {
    pub fn empty() -> Self {
        GenWord {
            symbols: Vec::new(),
        }
    }

    /// The single symbol x_{index+1} or its inverse.
    pub fn symbol(index: usize, inverted: bool) -> Self {
        let s = (index + 1) as i32;
        GenWord {
            symbols: vec![if inverted { -s } else { s }],
        }
    }

    pub fn push(&mut self, sym: i32) {
        debug_assert!(sym != 0);
        if self.symbols.last() == Some(&-sym) {
            self.symbols.pop();
        } else {
            self.symbols.push(sym);
        }
    }

    pub fn concat(&self, other: &GenWord) -> GenWord {
        let mut out = self.clone();
        for &s in &other.symbols {
            out.push(s);
        }
        out
    }

    pub fn inverse(&self) -> GenWord {
        GenWord {
            symbols: self.symbols.iter().rev().map(|s| -s).collect(),
        }
    }

    pub fn pow(&self, e: i64) -> GenWord {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut out = GenWord::empty();
        for _ in 0..e.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Generator indices with inversion flags, in product order.
    pub fn factors(&self) -> impl Iterator<Item = (usize, bool)> + '_ {
        self.symbols
            .iter()
            .map(|&s| ((s.unsigned_abs() as usize) - 1, s < 0))
    }

    /// Expands the expression through the generator list and reduces.
    pub fn evaluate(&self, generators: &[Word], sig: &FreeProductSignature) -> Word {
        let mut acc = Word::empty();
        for (idx, inv) in self.factors() {
            let g = &generators[idx];
            let g = if inv { g.inverse(sig) } else { g.clone() };
            acc = acc.concat(&g, sig);
        }
        acc
    }
}

impl fmt::Display for GenWord {
    /// Renders as `x1 x2^-1 x1`, or `e` when empty.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.symbols.is_empty() {
            return write!(f, "e");
        }
        for (i, &s) in self.symbols.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            if s > 0 {
                write!(f, "x{s}")?;
            } else {
                write!(f, "x{}^-1", -s)?;
            }
        }
        Ok(())
    }
}
