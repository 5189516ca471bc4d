//! Sparse multivariate polynomials with exact rational coefficients,
//! polynomial matrices, minors and classical adjoints.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::Rat;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("variable index {index} out of range for ring with {nvars} variables")]
    IndexOutOfRange { index: usize, nvars: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("minor selection leaves a non-square {rows}x{cols} submatrix")]
    NonSquareMinor { rows: usize, cols: usize },
    #[error("more equations than ambient variables ({r} > {n})")]
    TooManyEquations { r: usize, n: usize },
    #[error("invalid index pattern: need i < k and j < l")]
    InvalidIndexPattern,
    #[error("polynomial has {got} variables, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("empty generator list")]
    EmptyGenerators,
}

/// An ordered list of variable names. Shared by reference between all
/// polynomials of the same ring.
#[derive(Debug, PartialEq, Eq)]
pub struct PolyRing {
    vars: Vec<String>,
}

impl PolyRing {
    pub fn new<S: Into<String>>(vars: Vec<S>) -> Arc<Self> {
        let vars: Vec<String> = vars.into_iter().map(Into::into).collect();
        for (i, v) in vars.iter().enumerate() {
            assert!(!v.is_empty(), "empty variable name");
            assert!(
                !vars[..i].contains(v),
                "duplicate variable name {v:?} in ring"
            );
        }
        Arc::new(PolyRing { vars })
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_names(&self) -> &[String] {
        &self.vars
    }

    pub fn var_name(&self, i: usize) -> &str {
        &self.vars[i]
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }
}

pub fn same_ring(a: &Arc<PolyRing>, b: &Arc<PolyRing>) -> bool {
    Arc::ptr_eq(a, b) || a.vars == b.vars
}

/// Exponent tuple; its length always equals the ring's variable count.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// other / self, when it divides.
    pub fn div_into(&self, other: &Monomial) -> Option<Monomial> {
        if self.divides(other) {
            Some(Monomial(
                self.0.iter().zip(&other.0).map(|(a, b)| b - a).collect(),
            ))
        } else {
            None
        }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Bitmask of variables with positive exponent. Requires nvars <= 64.
    pub fn support_mask(&self) -> u64 {
        let mut m = 0u64;
        for (i, &e) in self.0.iter().enumerate() {
            if e > 0 {
                m |= 1u64 << i;
            }
        }
        m
    }
}

/// Graded reverse lexicographic comparison in the ring's variable order.
pub fn grevlex_cmp(a: &Monomial, b: &Monomial) -> Ordering {
    match a.degree().cmp(&b.degree()) {
        Ordering::Equal => {}
        o => return o,
    }
    for i in (0..a.0.len()).rev() {
        match a.0[i].cmp(&b.0[i]) {
            Ordering::Equal => continue,
            // larger exponent in the rightmost differing variable => smaller
            Ordering::Less => return Ordering::Greater,
            Ordering::Greater => return Ordering::Less,
        }
    }
    Ordering::Equal
}

/// Sparse polynomial over the rationals. Stored coefficients are never zero
/// and the term map is canonical, so equality is syntactic.
#[derive(Debug, Clone)]
pub struct Polynomial {
    ring: Arc<PolyRing>,
    terms: BTreeMap<Monomial, Rat>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl Polynomial {
    pub fn zero(ring: &Arc<PolyRing>) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &Arc<PolyRing>) -> Self {
        Self::constant(ring, Rat::one())
    }

    pub fn constant(ring: &Arc<PolyRing>, c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(ring.nvars()), c);
        }
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn var(ring: &Arc<PolyRing>, i: usize) -> Self {
        assert!(i < ring.nvars(), "variable index out of range");
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(ring.nvars(), i), Rat::one());
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn from_terms(ring: &Arc<PolyRing>, it: impl IntoIterator<Item = (Monomial, Rat)>) -> Self {
        let mut p = Self::zero(ring);
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn nvars(&self) -> usize {
        self.ring.nvars()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn constant_value(&self) -> Option<Rat> {
        if self.is_zero() {
            Some(Rat::zero())
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn add_term(&mut self, m: Monomial, c: Rat) {
        assert_eq!(m.0.len(), self.ring.nvars(), "exponent tuple length mismatch");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &Rat) -> Polynomial {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut acc = Self::one(&self.ring);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Partial derivative with respect to the i-th ring variable.
    pub fn partial_derivative(&self, i: usize) -> Result<Polynomial, PolyError> {
        if i >= self.ring.nvars() {
            return Err(PolyError::IndexOutOfRange {
                index: i,
                nvars: self.ring.nvars(),
            });
        }
        let mut out = Self::zero(&self.ring);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[i] = e - 1;
            out.add_term(m2, c * Rat::from_integer(e.into()));
        }
        Ok(out)
    }

    /// Evaluate at a rational point.
    pub fn eval_rat(&self, point: &[Rat]) -> Rat {
        assert_eq!(point.len(), self.ring.nvars(), "point length mismatch");
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t *= &point[i];
                }
            }
            acc += t;
        }
        acc
    }

    /// Substitute each ring variable by the given polynomial (all images in
    /// one common ring).
    pub fn substitute(&self, target: &Arc<PolyRing>, images: &[Polynomial]) -> Polynomial {
        assert_eq!(images.len(), self.ring.nvars(), "image count mismatch");
        let mut acc = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = &t * &images[i].pow(e);
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Set the i-th variable to zero.
    pub fn substitute_zero(&self, i: usize) -> Polynomial {
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.0[i] == 0)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Reinterpret in a larger ring; `offset[i]` is the index of the i-th old
    /// variable in the new ring.
    pub fn embed(&self, target: &Arc<PolyRing>, offset: &[usize]) -> Polynomial {
        assert_eq!(offset.len(), self.ring.nvars());
        let n2 = target.nvars();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = vec![0u32; n2];
                for (i, &x) in m.0.iter().enumerate() {
                    e[offset[i]] = x;
                }
                (Monomial(e), c.clone())
            })
            .collect();
        Polynomial {
            ring: target.clone(),
            terms,
        }
    }

    /// Leading term under the given comparison, if nonzero.
    pub fn leading_term_by(
        &self,
        cmp: impl Fn(&Monomial, &Monomial) -> Ordering,
    ) -> Option<(&Monomial, &Rat)> {
        self.terms
            .iter()
            .max_by(|a, b| cmp(a.0, b.0))
            .map(|(m, c)| (m, c))
    }

    /// Terms sorted grevlex-descending; the canonical rendering order.
    fn sorted_terms(&self) -> Vec<(&Monomial, &Rat)> {
        let mut ts: Vec<_> = self.terms.iter().collect();
        ts.sort_by(|a, b| grevlex_cmp(b.0, a.0));
        ts
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.sorted_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mono = render_monomial(&self.ring, m);
            if mono.is_empty() {
                write!(f, "{}", rat_str(&abs))?;
            } else if abs.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{}*{mono}", rat_str(&abs))?;
            }
        }
        Ok(())
    }
}

fn render_monomial(ring: &PolyRing, m: &Monomial) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.0.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(ring.var_name(i).to_string()),
            _ => parts.push(format!("{}^{}", ring.var_name(i), e)),
        }
    }
    parts.join("*")
}

pub fn rat_str(r: &Rat) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert!(same_ring(&self.ring, &rhs.ring), "ring mismatch in +");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        assert!(same_ring(&self.ring, &rhs.ring), "ring mismatch in -");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert!(same_ring(&self.ring, &rhs.ring), "ring mismatch in *");
        let mut out = Polynomial::zero(&self.ring);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

/// Row-major matrix of polynomials sharing one ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    ring: Arc<PolyRing>,
    rows: usize,
    cols: usize,
    entries: Vec<Polynomial>,
}

impl PolyMatrix {
    pub fn new(ring: &Arc<PolyRing>, rows: usize, cols: usize, entries: Vec<Polynomial>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count mismatch");
        assert!(entries.iter().all(|p| same_ring(p.ring(), ring)));
        PolyMatrix {
            ring: ring.clone(),
            rows,
            cols,
            entries,
        }
    }

    pub fn from_fn(
        ring: &Arc<PolyRing>,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Polynomial,
    ) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        Self::new(ring, rows, cols, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn get(&self, r: usize, c: usize) -> &Polynomial {
        &self.entries[r * self.cols + c]
    }

    pub fn submatrix(&self, keep_rows: &[usize], keep_cols: &[usize]) -> PolyMatrix {
        let entries = keep_rows
            .iter()
            .flat_map(|&r| keep_cols.iter().map(move |&c| self.get(r, c).clone()))
            .collect();
        PolyMatrix::new(&self.ring, keep_rows.len(), keep_cols.len(), entries)
    }

    pub fn mul(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.cols, other.rows, "matrix shape mismatch");
        PolyMatrix::from_fn(&self.ring, self.rows, other.cols, |r, c| {
            let mut acc = Polynomial::zero(&self.ring);
            for k in 0..self.cols {
                acc = &acc + &(self.get(r, k) * other.get(k, c));
            }
            acc
        })
    }

    /// Determinant by dynamic programming over column subsets. The empty
    /// matrix has determinant 1.
    pub fn determinant(&self) -> Result<Polynomial, PolyError> {
        if self.rows != self.cols {
            return Err(PolyError::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        assert!(n <= 16, "determinant size out of supported range");
        if n == 0 {
            return Ok(Polynomial::one(&self.ring));
        }
        // dp[mask] = det of rows 0..popcount(mask) on the columns of mask
        let mut dp: Vec<Option<Polynomial>> = vec![None; 1 << n];
        dp[0] = Some(Polynomial::one(&self.ring));
        for mask in 1usize..(1 << n) {
            let k = mask.count_ones() as usize; // next row index is k-1
            let mut acc = Polynomial::zero(&self.ring);
            let mut pos = 0usize;
            for c in 0..n {
                if mask & (1 << c) == 0 {
                    continue;
                }
                let sub = dp[mask ^ (1 << c)]
                    .as_ref()
                    .expect("dp table filled in mask order")
                    .clone();
                let term = self.get(k - 1, c) * &sub;
                if (k - 1 + pos) % 2 == 0 {
                    acc = &acc + &term;
                } else {
                    acc = &acc - &term;
                }
                pos += 1;
            }
            dp[mask] = Some(acc);
        }
        Ok(dp[(1 << n) - 1].take().expect("full mask computed"))
    }

    /// Sign-free minor: determinant after deleting the named rows/columns.
    pub fn minor(&self, del_rows: &[usize], del_cols: &[usize]) -> Result<Polynomial, PolyError> {
        let keep_rows: Vec<usize> = (0..self.rows).filter(|r| !del_rows.contains(r)).collect();
        let keep_cols: Vec<usize> = (0..self.cols).filter(|c| !del_cols.contains(c)).collect();
        if keep_rows.len() != keep_cols.len() {
            return Err(PolyError::NonSquareMinor {
                rows: keep_rows.len(),
                cols: keep_cols.len(),
            });
        }
        self.submatrix(&keep_rows, &keep_cols).determinant()
    }

    /// Classical adjoint M with m_ij = (-1)^(i+j) * minor(del row j, del col i),
    /// so that M*A = A*M = det(A)*I.
    pub fn classical_adjoint(&self) -> Result<PolyMatrix, PolyError> {
        if self.rows != self.cols {
            return Err(PolyError::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let d = self.minor(&[j], &[i])?;
                entries.push(if (i + j) % 2 == 0 { d } else { -&d });
            }
        }
        Ok(PolyMatrix::new(&self.ring, n, n, entries))
    }

    pub fn scalar_identity(ring: &Arc<PolyRing>, n: usize, s: &Polynomial) -> PolyMatrix {
        PolyMatrix::from_fn(ring, n, n, |r, c| {
            if r == c {
                s.clone()
            } else {
                Polynomial::zero(ring)
            }
        })
    }
}

/// Jacobian matrix (dF_k / dT_l) of r equations in n variables, r <= n.
pub fn jacobian_matrix(f: &[Polynomial], ring: &Arc<PolyRing>) -> Result<PolyMatrix, PolyError> {
    let r = f.len();
    let n = ring.nvars();
    if r > n {
        return Err(PolyError::TooManyEquations { r, n });
    }
    let mut entries = Vec::with_capacity(r * n);
    for fk in f {
        assert!(same_ring(fk.ring(), ring), "equation ring mismatch");
        for l in 0..n {
            entries.push(fk.partial_derivative(l)?);
        }
    }
    Ok(PolyMatrix::new(ring, r, n, entries))
}

/// Residual of the minor identity
/// d_{i,j} d_{k,l} - d_{i,l} d_{k,j} - det(A) d_{ik,jl}; identically zero.
pub fn jacobi_minor_identity_residual(
    a: &PolyMatrix,
    i: usize,
    k: usize,
    j: usize,
    l: usize,
) -> Result<Polynomial, PolyError> {
    if a.rows() != a.cols() {
        return Err(PolyError::NonSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if a.rows() < 2 || i >= k || j >= l || k >= a.rows() || l >= a.cols() {
        return Err(PolyError::InvalidIndexPattern);
    }
    let d_ij = a.minor(&[i], &[j])?;
    let d_kl = a.minor(&[k], &[l])?;
    let d_il = a.minor(&[i], &[l])?;
    let d_kj = a.minor(&[k], &[j])?;
    let det = a.determinant()?;
    let d_ikjl = a.minor(&[i, k], &[j, l])?;
    Ok(&(&(&d_ij * &d_kl) - &(&d_il * &d_kj)) - &(&det * &d_ikjl))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::FromPrimitive;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rat(n: i64) -> Rat {
        Rat::from_i64(n).unwrap()
    }

    fn ring_xy() -> Arc<PolyRing> {
        PolyRing::new(vec!["x", "y"])
    }

    /// Independent determinant oracle: first-row cofactor expansion.
    fn cofactor_det(a: &PolyMatrix) -> Polynomial {
        let n = a.rows();
        if n == 0 {
            return Polynomial::one(a.ring());
        }
        let mut acc = Polynomial::zero(a.ring());
        for c in 0..n {
            let keep_rows: Vec<usize> = (1..n).collect();
            let keep_cols: Vec<usize> = (0..n).filter(|&x| x != c).collect();
            let sub = cofactor_det(&a.submatrix(&keep_rows, &keep_cols));
            let term = &sub * a.get(0, c);
            acc = if c % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        acc
    }

    fn random_int_matrix(ring: &Arc<PolyRing>, n: usize, rng: &mut ChaCha8Rng) -> PolyMatrix {
        PolyMatrix::from_fn(ring, n, n, |_, _| {
            Polynomial::constant(ring, rat(rng.gen_range(-9..=9)))
        })
    }

    fn symbolic_matrix(n: usize) -> (Arc<PolyRing>, PolyMatrix) {
        let names: Vec<String> = (0..n)
            .flat_map(|i| (0..n).map(move |j| format!("a{}{}", i + 1, j + 1)))
            .collect();
        let ring = PolyRing::new(names);
        let m = PolyMatrix::from_fn(&ring, n, n, |r, c| Polynomial::var(&ring, r * n + c));
        (ring, m)
    }

    #[test]
    fn partial_derivative_power_rule() {
        let ring = ring_xy();
        let x = Polynomial::var(&ring, 0);
        let y = Polynomial::var(&ring, 1);
        // x^2 y -> 2 x y
        let p = &x.pow(2) * &y;
        assert_eq!(
            p.partial_derivative(0).unwrap(),
            (&x * &y).scale(&rat(2))
        );
        // constant -> 0
        let c = Polynomial::constant(&ring, rat(7));
        assert!(c.partial_derivative(0).unwrap().is_zero());
        assert!(c.partial_derivative(1).unwrap().is_zero());
        // d/dy (x^2 - y^3) = -3 y^2
        let p = &x.pow(2) - &y.pow(3);
        assert_eq!(
            p.partial_derivative(1).unwrap(),
            y.pow(2).scale(&rat(-3))
        );
    }

    #[test]
    fn partial_derivative_index_error() {
        let ring = ring_xy();
        let x = Polynomial::var(&ring, 0);
        assert_eq!(
            x.partial_derivative(5),
            Err(PolyError::IndexOutOfRange { index: 5, nvars: 2 })
        );
    }

    #[test]
    fn jacobian_examples() {
        let ring = ring_xy();
        let x = Polynomial::var(&ring, 0);
        let y = Polynomial::var(&ring, 1);
        let j = jacobian_matrix(&[&x.pow(2) - &y.pow(3)], &ring).unwrap();
        assert_eq!(j.get(0, 0), &x.scale(&rat(2)));
        assert_eq!(j.get(0, 1), &y.pow(2).scale(&rat(-3)));

        let r3 = PolyRing::new(vec!["x", "y", "z"]);
        let (x, y, z) = (
            Polynomial::var(&r3, 0),
            Polynomial::var(&r3, 1),
            Polynomial::var(&r3, 2),
        );
        let j = jacobian_matrix(&[&(&x * &y) - &z.pow(2)], &r3).unwrap();
        assert_eq!(j.get(0, 0), &y);
        assert_eq!(j.get(0, 1), &x);
        assert_eq!(j.get(0, 2), &z.scale(&rat(-2)));

        let r4 = PolyRing::new(vec!["x1", "x2", "x3", "x4"]);
        let j = jacobian_matrix(&[Polynomial::var(&r4, 0)], &r4).unwrap();
        assert_eq!(j.get(0, 0), &Polynomial::one(&r4));
        for c in 1..4 {
            assert!(j.get(0, c).is_zero());
        }

        assert!(matches!(
            jacobian_matrix(&[x.clone(), y.clone(), z.clone(), x], &r3),
            Err(PolyError::TooManyEquations { r: 4, n: 3 })
        ));
    }

    #[test]
    fn minor_examples() {
        let ring = ring_xy();
        let one = Polynomial::one(&ring);
        let zero = Polynomial::zero(&ring);
        let id2 = PolyMatrix::new(
            &ring,
            2,
            2,
            vec![one.clone(), zero.clone(), zero.clone(), one.clone()],
        );
        assert_eq!(id2.minor(&[0], &[0]).unwrap(), one);

        let (ring_s, a) = symbolic_matrix(2);
        let det = a.minor(&[], &[]).unwrap();
        let v = |i: usize| Polynomial::var(&ring_s, i);
        // a11*a22 - a12*a21
        assert_eq!(det, &(&v(0) * &v(3)) - &(&v(1) * &v(2)));

        assert!(id2.minor(&[0], &[]).is_err());
    }

    #[test]
    fn minor_matches_cofactor_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let ring = PolyRing::new(vec!["t"]);
        for _ in 0..20 {
            let a = random_int_matrix(&ring, 4, &mut rng);
            // delete row 0, col 1 (the paper's delta_{1,2})
            let keep_r: Vec<usize> = (1..4).collect();
            let keep_c: Vec<usize> = vec![0, 2, 3];
            assert_eq!(
                a.minor(&[0], &[1]).unwrap(),
                cofactor_det(&a.submatrix(&keep_r, &keep_c))
            );
            assert_eq!(a.determinant().unwrap(), cofactor_det(&a));
        }
    }

    #[test]
    fn adjoint_examples() {
        let ring = ring_xy();
        let f = &Polynomial::var(&ring, 0) * &Polynomial::var(&ring, 1);
        let m1 = PolyMatrix::new(&ring, 1, 1, vec![f]);
        let adj = m1.classical_adjoint().unwrap();
        assert_eq!(adj.get(0, 0), &Polynomial::one(&ring));

        let (ring_s, a) = symbolic_matrix(2);
        let adj = a.classical_adjoint().unwrap();
        let v = |i: usize| Polynomial::var(&ring_s, i);
        assert_eq!(adj.get(0, 0), &v(3));
        assert_eq!(adj.get(0, 1), &-&v(1));
        assert_eq!(adj.get(1, 0), &-&v(2));
        assert_eq!(adj.get(1, 1), &v(0));
    }

    #[test]
    fn adjoint_identity_symbolic_and_numeric() {
        for n in 2..=3 {
            let (ring_s, a) = symbolic_matrix(n);
            let adj = a.classical_adjoint().unwrap();
            let det = a.determinant().unwrap();
            let expect = PolyMatrix::scalar_identity(&ring_s, n, &det);
            assert_eq!(adj.mul(&a), expect);
            assert_eq!(a.mul(&adj), expect);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let ring = PolyRing::new(vec!["t"]);
        for n in 4..=5 {
            let a = random_int_matrix(&ring, n, &mut rng);
            let adj = a.classical_adjoint().unwrap();
            let det = a.determinant().unwrap();
            assert_eq!(adj.mul(&a), PolyMatrix::scalar_identity(&ring, n, &det));
        }
    }

    #[test]
    fn jacobi_identity_on_identity_matrix() {
        let ring = ring_xy();
        let id4 = PolyMatrix::from_fn(&ring, 4, 4, |r, c| {
            if r == c {
                Polynomial::one(&ring)
            } else {
                Polynomial::zero(&ring)
            }
        });
        let res = jacobi_minor_identity_residual(&id4, 0, 1, 0, 1).unwrap();
        assert!(res.is_zero());
    }

    #[test]
    fn jacobi_identity_symbolic() {
        // fully symbolic sizes 2..4, all valid index patterns
        for n in 2..=4usize {
            let (_, a) = symbolic_matrix(n);
            for i in 0..n {
                for k in (i + 1)..n {
                    for j in 0..n {
                        for l in (j + 1)..n {
                            let res = jacobi_minor_identity_residual(&a, i, k, j, l).unwrap();
                            assert!(res.is_zero(), "residual nonzero at n={n} ({i},{k},{j},{l})");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn jacobi_identity_special_structure() {
        // a_{ij} = a_{kl} = 1, zeros elsewhere on those rows and columns;
        // then delta_{i,j}(A) = (-1)^(k+l) delta_{ik,jl}(A) (1-based signs).
        let n = 4;
        let (i, k, j, l) = (0usize, 2usize, 1usize, 3usize);
        let names: Vec<String> = (0..n * n).map(|t| format!("b{t}")).collect();
        let ring = PolyRing::new(names);
        let a = PolyMatrix::from_fn(&ring, n, n, |r, c| {
            if (r == i && c == j) || (r == k && c == l) {
                Polynomial::one(&ring)
            } else if r == i || r == k || c == j || c == l {
                Polynomial::zero(&ring)
            } else {
                Polynomial::var(&ring, r * n + c)
            }
        });
        let res = jacobi_minor_identity_residual(&a, i, k, j, l).unwrap();
        assert!(res.is_zero());
        let d_ij = a.minor(&[i], &[j]).unwrap();
        let d_ikjl = a.minor(&[i, k], &[j, l]).unwrap();
        // 1-based: (-1)^{(k+1)+(l+1)} = (-1)^{k+l} in 0-based indices
        let sign = if (k + l) % 2 == 0 { 1 } else { -1 };
        assert_eq!(d_ij, d_ikjl.scale(&rat(sign)));
        assert!(a.minor(&[i], &[l]).unwrap().is_zero());
        assert!(a.minor(&[k], &[j]).unwrap().is_zero());
    }

    #[test]
    fn jacobi_identity_random_sample() {
        let ring = PolyRing::new(vec!["t"]);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..60 {
            let n = rng.gen_range(3..=6);
            let a = random_int_matrix(&ring, n, &mut rng);
            let i = rng.gen_range(0..n - 1);
            let k = rng.gen_range(i + 1..n);
            let j = rng.gen_range(0..n - 1);
            let l = rng.gen_range(j + 1..n);
            let res = jacobi_minor_identity_residual(&a, i, k, j, l).unwrap();
            assert!(res.is_zero());
        }
    }

    #[test]
    fn jacobi_identity_bad_pattern() {
        let (_, a) = symbolic_matrix(3);
        assert_eq!(
            jacobi_minor_identity_residual(&a, 1, 1, 0, 2),
            Err(PolyError::InvalidIndexPattern)
        );
        assert_eq!(
            jacobi_minor_identity_residual(&a, 1, 0, 0, 2),
            Err(PolyError::InvalidIndexPattern)
        );
    }

    #[test]
    fn ring_axioms_random() {
        let ring = PolyRing::new(vec!["x", "y", "z"]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let random_poly = |rng: &mut ChaCha8Rng| {
            let mut p = Polynomial::zero(&ring);
            for _ in 0..rng.gen_range(1..6) {
                let m = Monomial(vec![
                    rng.gen_range(0..4),
                    rng.gen_range(0..4),
                    rng.gen_range(0..4),
                ]);
                p.add_term(m, rat(rng.gen_range(-5..=5)));
            }
            p
        };
        for _ in 0..40 {
            let p = random_poly(&mut rng);
            let q = random_poly(&mut rng);
            let r = random_poly(&mut rng);
            assert_eq!(&(&p + &q) * &r, &(&p * &r) + &(&q * &r));
            assert_eq!(&p * &q, &q * &p);
            // Leibniz rule
            for i in 0..3 {
                let lhs = (&p * &q).partial_derivative(i).unwrap();
                let rhs = &(&p.partial_derivative(i).unwrap() * &q)
                    + &(&p * &q.partial_derivative(i).unwrap());
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn display_canonical() {
        let ring = ring_xy();
        let x = Polynomial::var(&ring, 0);
        let y = Polynomial::var(&ring, 1);
        let p = &(&(&x.pow(2) * &y) - &y.pow(2).scale(&rat(3)))
            + &Polynomial::constant(&ring, Rat::new(1.into(), 2.into()));
        assert_eq!(p.to_string(), "x^2*y - 3*y^2 + 1/2");
        assert_eq!(Polynomial::zero(&ring).to_string(), "0");
        assert_eq!((-&x).to_string(), "-x");
    }
}
