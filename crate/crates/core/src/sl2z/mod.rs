//! Exact arithmetic in SL(2,Z): matrices, generator words, orders.
//!
//! The group is generated by
//!
//! ```text
//! s = [[0,1],[-1,0]]    t = [[0,1],[-1,1]]
//! ```
//!
//! subject to s⁴ = e and s² = t³ (= −E₂). The shear C = [[1,1],[0,1]]
//! equals t⁻¹s and drives the Euclidean word algorithm.

pub mod conj;
pub mod psl;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// A 2×2 integer matrix of determinant one, with unbounded entries.
///
/// Entries are row-major: `[[a,b],[c,d]]`. The determinant is checked at
/// construction, so every value of this type is a genuine group element.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Sl2Matrix {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

impl Sl2Matrix {
    /// Builds a matrix from row-major entries, checking the determinant.
    pub fn new(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        c: impl Into<BigInt>,
        d: impl Into<BigInt>,
    ) -> Result<Self, Error> {
        let (a, b, c, d) = (a.into(), b.into(), c.into(), d.into());
        let det = &a * &d - &b * &c;
        if !det.is_one() {
            return Err(Error::NotUnimodular { det });
        }
        Ok(Sl2Matrix { a, b, c, d })
    }

    fn unchecked(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Self {
        debug_assert!((&a * &d - &b * &c).is_one());
        Sl2Matrix { a, b, c, d }
    }

    /// The identity matrix E₂.
    pub fn identity() -> Self {
        Sl2Matrix::unchecked(BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one())
    }

    /// The central element −E₂.
    pub fn minus_identity() -> Self {
        -&Sl2Matrix::identity()
    }

    /// The order-4 generator s = [[0,1],[−1,0]].
    pub fn gen_s() -> Self {
        Sl2Matrix::unchecked(
            BigInt::zero(),
            BigInt::one(),
            -BigInt::one(),
            BigInt::zero(),
        )
    }

    /// The order-6 generator t = [[0,1],[−1,1]].
    pub fn gen_t() -> Self {
        Sl2Matrix::unchecked(BigInt::zero(), BigInt::one(), -BigInt::one(), BigInt::one())
    }

    /// The shear C = [[1,1],[0,1]] = t⁻¹s.
    pub fn shear() -> Self {
        Sl2Matrix::unchecked(BigInt::one(), BigInt::one(), BigInt::zero(), BigInt::one())
    }

    /// Row-major entries `[a, b, c, d]`.
    pub fn entries(&self) -> [&BigInt; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    /// Consumes the matrix into its row-major entries.
    pub fn into_entries(self) -> [BigInt; 4] {
        [self.a, self.b, self.c, self.d]
    }

    /// The trace a + d.
    pub fn trace(&self) -> BigInt {
        &self.a + &self.d
    }

    /// Matrix product self · other.
    pub fn mul(&self, other: &Sl2Matrix) -> Sl2Matrix {
        Sl2Matrix::unchecked(
            &self.a * &other.a + &self.b * &other.c,
            &self.a * &other.b + &self.b * &other.d,
            &self.c * &other.a + &self.d * &other.c,
            &self.c * &other.b + &self.d * &other.d,
        )
    }

    /// The exact inverse [[d,−b],[−c,a]].
    pub fn inverse(&self) -> Sl2Matrix {
        Sl2Matrix::unchecked(self.d.clone(), -&self.b, -&self.c, self.a.clone())
    }

    /// The conjugate self · x · self⁻¹.
    pub fn conjugate(&self, x: &Sl2Matrix) -> Sl2Matrix {
        self.mul(x).mul(&self.inverse())
    }

    /// The image of a column vector.
    pub fn apply(&self, v: &[BigInt; 2]) -> [BigInt; 2] {
        [
            &self.a * &v[0] + &self.b * &v[1],
            &self.c * &v[0] + &self.d * &v[1],
        ]
    }

    /// Integer power, with negative exponents via the inverse.
    pub fn pow(&self, e: i64) -> Sl2Matrix {
        self.pow_big(&BigInt::from(e))
    }

    /// Integer power with an unbounded exponent.
    pub fn pow_big(&self, e: &BigInt) -> Sl2Matrix {
        let (mut base, mut e) = if e.is_negative() {
            (self.inverse(), -e)
        } else {
            (self.clone(), e.clone())
        };
        let mut acc = Sl2Matrix::identity();
        while !e.is_zero() {
            if e.is_odd() {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if !e.is_zero() {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_one() && self.b.is_zero() && self.c.is_zero() && self.d.is_one()
    }

    pub fn is_minus_identity(&self) -> bool {
        self == &Sl2Matrix::minus_identity()
    }

    /// Whether the matrix is ±E₂ (the center of the group).
    pub fn is_central(&self) -> bool {
        self.is_identity() || self.is_minus_identity()
    }

    /// Multiplicative order: `Some(n)` for n ∈ {1,2,3,4,6}, `None` for
    /// infinite order.
    ///
    /// The order is read off the trace: elements of trace 0, 1, −1 have
    /// characteristic polynomial x²+1, x²−x+1, x²+x+1 and hence order
    /// 4, 6, 3; trace ±2 is ±E₂ or a nontrivial unipotent (infinite
    /// order); |trace| ≥ 3 is hyperbolic.
    pub fn order(&self) -> Option<u32> {
        let tr = self.trace();
        if tr.is_zero() {
            Some(4)
        } else if tr.is_one() {
            Some(6)
        } else if tr == BigInt::from(-1) {
            Some(3)
        } else if tr == BigInt::from(2) {
            if self.is_identity() {
                Some(1)
            } else {
                None
            }
        } else if tr == BigInt::from(-2) {
            if self.is_minus_identity() {
                Some(2)
            } else {
                None
            }
        } else {
            None
        }
    }
}

impl std::ops::Neg for &Sl2Matrix {
    type Output = Sl2Matrix;
    fn neg(self) -> Sl2Matrix {
        Sl2Matrix::unchecked(-&self.a, -&self.b, -&self.c, -&self.d)
    }
}

impl std::ops::Mul for &Sl2Matrix {
    type Output = Sl2Matrix;
    fn mul(self, rhs: &Sl2Matrix) -> Sl2Matrix {
        Sl2Matrix::mul(self, rhs)
    }
}

impl fmt::Display for Sl2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

impl fmt::Debug for Sl2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Sl2Matrix {
    type Err = Error;

    /// Parses `[[a,b],[c,d]]`, ignoring interior whitespace.
    fn from_str(s: &str) -> Result<Self, Error> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = compact
            .strip_prefix("[[")
            .and_then(|r| r.strip_suffix("]]"))
            .ok_or_else(|| Error::Parse(format!("expected [[a,b],[c,d]], got {s:?}")))?;
        let parts: Vec<&str> = inner.split("],[").collect();
        if parts.len() != 2 {
            return Err(Error::Parse(format!("expected two rows in {s:?}")));
        }
        let mut entries = Vec::with_capacity(4);
        for row in parts {
            for entry in row.split(',') {
                let value = BigInt::from_str(entry)
                    .map_err(|e| Error::Parse(format!("bad integer {entry:?}: {e}")))?;
                entries.push(value);
            }
        }
        if entries.len() != 4 {
            return Err(Error::Parse(format!("expected four entries in {s:?}")));
        }
        let d = entries.pop().unwrap();
        let c = entries.pop().unwrap();
        let b = entries.pop().unwrap();
        let a = entries.pop().unwrap();
        Sl2Matrix::new(a, b, c, d)
    }
}

/// A generator of SL(2,Z) as a word letter.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SlGen {
    S,
    T,
}

/// A word in the generators s and t, stored as a run-length sequence of
/// generator powers.
///
/// The word is a formal product; no group relations are applied. Runs with
/// zero exponent are dropped and adjacent runs of the same generator are
/// merged, which never changes the element the word evaluates to.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct SlWord {
    runs: Vec<(SlGen, BigInt)>,
}

impl SlWord {
    /// The empty word, evaluating to E₂.
    pub fn empty() -> Self {
        SlWord { runs: Vec::new() }
    }

    /// Builds a word from generator powers, merging and dropping as needed.
    pub fn from_runs(runs: impl IntoIterator<Item = (SlGen, BigInt)>) -> Self {
        let mut word = SlWord::empty();
        for (g, e) in runs {
            word.push(g, e);
        }
        word
    }

    /// Appends one generator power to the word.
    pub fn push(&mut self, gen: SlGen, exp: impl Into<BigInt>) {
        let exp = exp.into();
        if exp.is_zero() {
            return;
        }
        if let Some((last_gen, last_exp)) = self.runs.last_mut() {
            if *last_gen == gen {
                *last_exp += exp;
                if last_exp.is_zero() {
                    self.runs.pop();
                }
                return;
            }
        }
        self.runs.push((gen, exp));
    }

    /// Appends another word.
    pub fn extend(&mut self, other: &SlWord) {
        for (g, e) in &other.runs {
            self.push(*g, e.clone());
        }
    }

    /// The formal inverse (reversed runs with negated exponents).
    pub fn inverse(&self) -> SlWord {
        let mut word = SlWord::empty();
        for (g, e) in self.runs.iter().rev() {
            word.push(*g, -e);
        }
        word
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    /// The generator powers making up the word.
    pub fn runs(&self) -> &[(SlGen, BigInt)] {
        &self.runs
    }

    /// Number of single-generator letters the word expands to.
    pub fn letter_len(&self) -> BigInt {
        self.runs.iter().map(|(_, e)| e.abs()).sum()
    }

    /// Evaluates the word to a matrix.
    pub fn evaluate(&self) -> Sl2Matrix {
        let s = Sl2Matrix::gen_s();
        let t = Sl2Matrix::gen_t();
        let mut acc = Sl2Matrix::identity();
        for (g, e) in &self.runs {
            let base = match g {
                SlGen::S => &s,
                SlGen::T => &t,
            };
            acc = acc.mul(&base.pow_big(e));
        }
        acc
    }
}

impl fmt::Display for SlWord {
    /// Renders as space-separated powers, e.g. `t^-1 s`, or `e` when empty.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.runs.is_empty() {
            return write!(f, "e");
        }
        for (i, (g, e)) in self.runs.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            let name = match g {
                SlGen::S => "s",
                SlGen::T => "t",
            };
            if e.is_one() {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Evaluates a generator word to its matrix.
pub fn word_to_matrix(word: &SlWord) -> Sl2Matrix {
    word.evaluate()
}

/// Expresses a matrix as a word in s and t.
///
/// Euclidean reduction on the first column: while the lower-left entry is
/// nonzero, a power of the shear C = t⁻¹s clears the upper entry below the
/// current remainder and a left multiplication by s swaps the rows. The
/// terminal matrix is C^k or s²C^(−k), and each undone left factor
/// contributes C^q or s⁻¹ to the output. Any word evaluating back to the
/// input is acceptable; this one has length proportional to the sum of the
/// continued-fraction quotients of the first column.
pub fn matrix_to_word(m: &Sl2Matrix) -> SlWord {
    let s = Sl2Matrix::gen_s();
    let mut word = SlWord::empty();
    let mut n = m.clone();
    while !n.c.is_zero() {
        let q = n.a.div_floor(&n.c);
        if !q.is_zero() {
            // n := C^{-q} · n, i.e. row1 -= q · row2.
            n.a -= &q * &n.c;
            n.b -= &q * &n.d;
            push_shear_power(&mut word, &q);
        }
        n = s.mul(&n);
        word.push(SlGen::S, -1);
    }
    // Terminal form: c = 0 and ad = 1, so a = d = ±1.
    if n.a.is_one() {
        push_shear_power(&mut word, &n.b);
    } else {
        word.push(SlGen::S, 2);
        push_shear_power(&mut word, &(-&n.b));
    }
    word
}

/// Appends C^q = (t⁻¹s)^q to the word.
///
/// The shear is not a power of either generator, so its q-th power expands
/// to 2|q| letters; this is the inherent word length of a unipotent element
/// in these generators. Inputs whose continued-fraction quotients exceed
/// memory are rejected rather than silently truncated.
fn push_shear_power(word: &mut SlWord, q: &BigInt) {
    let reps = q.abs().to_u64_digits().1;
    let reps = match (reps.len(), q.is_zero()) {
        (_, true) => return,
        (1, _) => reps[0],
        _ => panic!("shear exponent {q} too large to expand into generator letters"),
    };
    let one = BigInt::one();
    for _ in 0..reps {
        if q.is_positive() {
            word.push(SlGen::T, -&one);
            word.push(SlGen::S, one.clone());
        } else {
            word.push(SlGen::S, -&one);
            word.push(SlGen::T, one.clone());
        }
    }
}
