//! Integer lattice algorithms: Smith normal form with transform matrices,
//! membership with witness coefficients, and quotient modules of Z².

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// A dense integer matrix with unbounded entries, row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self, Error> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                entries.len()
            )));
        }
        Ok(IntMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            *m.get_mut(i, i) = BigInt::one();
        }
        m
    }

    /// Builds a 2×n matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[[BigInt; 2]]) -> Self {
        let n = columns.len();
        let mut m = IntMatrix::zero(2, n);
        for (j, col) in columns.iter().enumerate() {
            *m.get_mut(0, j) = col[0].clone();
            *m.get_mut(1, j) = col[1].clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut BigInt {
        &mut self.entries[i * self.cols + j]
    }

    /// Matrix product self · other.
    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let lhs = self.get(i, k);
                if lhs.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = lhs * other.get(k, j);
                    *out.get_mut(i, j) += add;
                }
            }
        }
        out
    }

    /// Matrix-vector product for a 2-column matrix acting on a 2-vector.
    pub fn mul_vec2(&self, v: &[BigInt; 2]) -> [BigInt; 2] {
        assert_eq!((self.rows, self.cols), (2, 2));
        [
            self.get(0, 0) * &v[0] + self.get(0, 1) * &v[1],
            self.get(1, 0) * &v[0] + self.get(1, 1) * &v[1],
        ]
    }

    /// Exact determinant by fraction-free Gaussian elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant needs a square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.entries.clone();
        let at = |m: &Vec<BigInt>, i: usize, j: usize| m[i * n + j].clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if at(&m, k, k).is_zero() {
                let swap = (k + 1..n).find(|&i| !at(&m, i, k).is_zero());
                match swap {
                    Some(i) => {
                        for j in 0..n {
                            m.swap(i * n + j, k * n + j);
                        }
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let val = (at(&m, i, j) * at(&m, k, k) - at(&m, i, k) * at(&m, k, j)) / &prev;
                    m[i * n + j] = val;
                }
                m[i * n + k] = BigInt::zero();
            }
            prev = at(&m, k, k);
        }
        sign * at(&m, n - 1, n - 1)
    }

    fn swap_rows(&mut self, i1: usize, i2: usize) {
        if i1 == i2 {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(i1 * self.cols + j, i2 * self.cols + j);
        }
    }

    fn swap_cols(&mut self, j1: usize, j2: usize) {
        if j1 == j2 {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + j1, i * self.cols + j2);
        }
    }

    /// row[target] += q · row[source]
    fn add_row(&mut self, target: usize, source: usize, q: &BigInt) {
        for j in 0..self.cols {
            let add = q * self.get(source, j);
            *self.get_mut(target, j) += add;
        }
    }

    /// col[target] += q · col[source]
    fn add_col(&mut self, target: usize, source: usize, q: &BigInt) {
        for i in 0..self.rows {
            let add = q * self.get(i, source);
            *self.get_mut(i, target) += add;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j);
            *self.get_mut(i, j) = v;
        }
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Smith normal form: returns (U, D, V) with U·M·V = D, where U and V are
/// unimodular and D is diagonal with d₁ | d₂ | … ≥ 0.
///
/// Pivots are chosen with smallest nonzero absolute value, which keeps
/// intermediate entries small at the scales this crate handles.
pub fn smith_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let rows = m.rows();
    let cols = m.cols();
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let steps = rows.min(cols);
    let mut k = 0;
    while k < steps {
        // Pivot: smallest nonzero absolute value in the trailing block.
        let mut pivot: Option<(usize, usize)> = None;
        for i in k..rows {
            for j in k..cols {
                if d.get(i, j).is_zero() {
                    continue;
                }
                let better = match pivot {
                    None => true,
                    Some((pi, pj)) => d.get(i, j).abs() < d.get(pi, pj).abs(),
                };
                if better {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        d.swap_rows(k, pi);
        u.swap_rows(k, pi);
        d.swap_cols(k, pj);
        v.swap_cols(k, pj);

        // Clear column k below the pivot and row k to its right. A nonzero
        // remainder becomes the new, strictly smaller pivot on the next
        // pass, so the loop terminates.
        let mut dirty = false;
        for i in k + 1..rows {
            if !d.get(i, k).is_zero() {
                let q = -(d.get(i, k) / d.get(k, k));
                d.add_row(i, k, &q);
                u.add_row(i, k, &q);
                if !d.get(i, k).is_zero() {
                    dirty = true;
                }
            }
        }
        for j in k + 1..cols {
            if !d.get(k, j).is_zero() {
                let q = -(d.get(k, j) / d.get(k, k));
                d.add_col(j, k, &q);
                v.add_col(j, k, &q);
                if !d.get(k, j).is_zero() {
                    dirty = true;
                }
            }
        }
        if dirty {
            continue;
        }

        // Enforce divisibility: fold any non-multiple into row k and redo.
        let mut fixed = true;
        'scan: for i in k + 1..rows {
            for j in k + 1..cols {
                if !(d.get(i, j) % d.get(k, k)).is_zero() {
                    let one = BigInt::one();
                    d.add_row(k, i, &one);
                    u.add_row(k, i, &one);
                    fixed = false;
                    break 'scan;
                }
            }
        }
        if !fixed {
            continue;
        }

        if d.get(k, k).is_negative() {
            d.negate_row(k);
            u.negate_row(k);
        }
        k += 1;
    }
    (u, d, v)
}

/// Rank over the rationals.
pub fn rank(m: &IntMatrix) -> usize {
    let (_, d, _) = smith_normal_form(m);
    let steps = m.rows().min(m.cols());
    (0..steps).filter(|&i| !d.get(i, i).is_zero()).count()
}

/// Isomorphism type of Z²/L for a sublattice L of Z².
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuotientModule {
    /// Free rank of the quotient.
    pub rank: usize,
    /// Invariant factors > 1, forming a divisibility chain.
    pub torsion: Vec<BigInt>,
}

impl fmt::Display for QuotientModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = (0..self.rank).map(|_| "Z".to_string()).collect();
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Structure of Z² modulo the lattice spanned by the given vectors.
pub fn quotient(generators: &[[BigInt; 2]]) -> QuotientModule {
    let m = IntMatrix::from_columns(generators);
    let (_, d, _) = smith_normal_form(&m);
    let steps = m.rows().min(m.cols());
    let mut torsion = Vec::new();
    let mut rank = 2;
    for i in 0..steps {
        let di = d.get(i, i);
        if di.is_zero() {
            continue;
        }
        rank -= 1;
        if !di.is_one() {
            torsion.push(di.clone());
        }
    }
    QuotientModule { rank, torsion }
}

/// Precomputed data for repeated queries against one lattice L ⊆ Z².
///
/// From U·M·V = D, a target t lies in L exactly when y = U·t is divisible
/// rowwise by the pivots of D (a zero pivot demands a zero coordinate),
/// and t has finite order in Z²/L when the zero-pivot rows of y vanish.
pub struct QuotientTransform {
    u: IntMatrix,
    v: IntMatrix,
    pivots: [Option<BigInt>; 2],
    ncols: usize,
}

impl QuotientTransform {
    pub fn new(generators: &[[BigInt; 2]]) -> Self {
        let m = IntMatrix::from_columns(generators);
        let (u, d, v) = smith_normal_form(&m);
        let mut pivots = [None, None];
        for (i, pivot) in pivots.iter_mut().enumerate() {
            if i < m.cols() && !d.get(i, i).is_zero() {
                *pivot = Some(d.get(i, i).clone());
            }
        }
        QuotientTransform {
            u,
            v,
            pivots,
            ncols: generators.len(),
        }
    }

    /// Whether the class of t has finite order in Z²/L.
    pub fn is_torsion(&self, t: &[BigInt; 2]) -> bool {
        let y = self.u.mul_vec2(t);
        self.pivots
            .iter()
            .zip(y.iter())
            .all(|(p, yi)| p.is_some() || yi.is_zero())
    }

    /// Coefficients c with Σ cⱼ·genⱼ = t, if t lies in the lattice.
    pub fn member(&self, t: &[BigInt; 2]) -> Option<Vec<BigInt>> {
        let y = self.u.mul_vec2(t);
        let mut x = vec![BigInt::zero(); self.ncols];
        for i in 0..2 {
            match &self.pivots[i] {
                Some(d) => {
                    if !(&y[i] % d).is_zero() {
                        return None;
                    }
                    x[i] = &y[i] / d;
                }
                None => {
                    if !y[i].is_zero() {
                        return None;
                    }
                }
            }
        }
        let xm = IntMatrix::new(self.ncols, 1, x).expect("column vector");
        let c = self.v.mul(&xm);
        Some((0..self.ncols).map(|j| c.get(j, 0).clone()).collect())
    }
}

/// Coefficients expressing a 2-vector in a list of generating 2-vectors,
/// or `None` when the target is outside the generated lattice.
///
/// A returned coefficient vector always satisfies Σ cⱼ·genⱼ = target.
pub fn member_with_witness(
    target: &[BigInt; 2],
    generators: &[[BigInt; 2]],
) -> Option<Vec<BigInt>> {
    let c = QuotientTransform::new(generators).member(target)?;
    let mut check = [BigInt::zero(), BigInt::zero()];
    for (cj, g) in c.iter().zip(generators) {
        check[0] += cj * &g[0];
        check[1] += cj * &g[1];
    }
    debug_assert_eq!(&check, target);
    Some(c)
}

/// A unimodular G with v·G = (gcd(v), 0, …, 0), for a nonzero row vector v.
pub fn unimodular_reduce(v: &[BigInt]) -> Result<IntMatrix, Error> {
    if v.is_empty() || v.iter().all(|x| x.is_zero()) {
        return Err(Error::ZeroVector);
    }
    let n = v.len();
    let m = IntMatrix::new(1, n, v.to_vec()).expect("row vector");
    let (u, d, v_right) = smith_normal_form(&m);
    // u is 1×1 = [±1]; v·V = ±D, so fold the sign into the first column.
    let mut g = v_right;
    if u.get(0, 0).is_negative() {
        for i in 0..n {
            let neg = -g.get(i, 0);
            *g.get_mut(i, 0) = neg;
        }
    }
    debug_assert_eq!(*d.get(0, 0), {
        let mut acc = BigInt::zero();
        for (vi, i) in v.iter().zip(0..n) {
            acc += vi * g.get(i, 0);
        }
        acc
    });
    Ok(g)
}
