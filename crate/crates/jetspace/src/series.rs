//! Truncated power series in one parameter t, jet points, and order
//! functions along ideals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use crate::poly::{PolyError, Polynomial};
use crate::Rat;

/// Order of vanishing; either a natural number or infinity. For a series at
/// cap m any computed order is <= m or infinite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtOrder {
    Finite(usize),
    Infinity,
}

impl ExtOrder {
    pub fn is_finite(&self) -> bool {
        matches!(self, ExtOrder::Finite(_))
    }

    pub fn at_least(&self, k: usize) -> bool {
        match self {
            ExtOrder::Finite(v) => *v >= k,
            ExtOrder::Infinity => true,
        }
    }
}

impl fmt::Display for ExtOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtOrder::Finite(v) => write!(f, "{v}"),
            ExtOrder::Infinity => write!(f, "infinity"),
        }
    }
}

/// Exact arithmetic modulo t^(cap+1). Mixed-cap arithmetic truncates to the
/// smaller cap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncSeries {
    coeffs: Vec<Rat>, // index 0..=cap
}

impl TruncSeries {
    pub fn zero(cap: usize) -> Self {
        TruncSeries {
            coeffs: vec![Rat::zero(); cap + 1],
        }
    }

    pub fn constant(cap: usize, c: Rat) -> Self {
        let mut s = Self::zero(cap);
        s.coeffs[0] = c;
        s
    }

    pub fn from_coeffs(coeffs: Vec<Rat>) -> Self {
        assert!(!coeffs.is_empty(), "series needs at least the t^0 slot");
        TruncSeries { coeffs }
    }

    /// c * t^k, truncated if k exceeds the cap.
    pub fn t_power(cap: usize, k: usize, c: Rat) -> Self {
        let mut s = Self::zero(cap);
        if k <= cap {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn cap(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> &Rat {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rat::is_zero)
    }

    /// Truncate or zero-pad to a new cap. Padding is the canonical-lift
    /// semantics: the data is reinterpreted as a polynomial of degree <= cap.
    pub fn with_cap(&self, cap: usize) -> TruncSeries {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(cap + 1, Rat::zero());
        coeffs.truncate(cap + 1);
        TruncSeries { coeffs }
    }

    /// Index of the first nonzero coefficient, or infinity if none up to cap.
    pub fn ord(&self) -> ExtOrder {
        match self.coeffs.iter().position(|c| !c.is_zero()) {
            Some(i) => ExtOrder::Finite(i),
            None => ExtOrder::Infinity,
        }
    }

    pub fn scale(&self, c: &Rat) -> TruncSeries {
        TruncSeries {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{i}"),
            };
            let piece = if mono.is_empty() {
                crate::poly::rat_str(c)
            } else if c == &Rat::from_integer(1.into()) {
                mono
            } else if c == &Rat::from_integer((-1).into()) {
                format!("-{mono}")
            } else {
                format!("{}*{mono}", crate::poly::rat_str(c))
            };
            if first {
                write!(f, "{piece}")?;
                first = false;
            } else if let Some(rest) = piece.strip_prefix('-') {
                write!(f, " - {rest}")?;
            } else {
                write!(f, " + {piece}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

fn common_cap(a: &TruncSeries, b: &TruncSeries) -> usize {
    a.cap().min(b.cap())
}

impl Add for &TruncSeries {
    type Output = TruncSeries;
    fn add(self, rhs: &TruncSeries) -> TruncSeries {
        let cap = common_cap(self, rhs);
        TruncSeries {
            coeffs: (0..=cap).map(|i| self.coeff(i) + rhs.coeff(i)).collect(),
        }
    }
}

impl Sub for &TruncSeries {
    type Output = TruncSeries;
    fn sub(self, rhs: &TruncSeries) -> TruncSeries {
        let cap = common_cap(self, rhs);
        TruncSeries {
            coeffs: (0..=cap).map(|i| self.coeff(i) - rhs.coeff(i)).collect(),
        }
    }
}

impl Neg for &TruncSeries {
    type Output = TruncSeries;
    fn neg(self) -> TruncSeries {
        TruncSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &TruncSeries {
    type Output = TruncSeries;
    fn mul(self, rhs: &TruncSeries) -> TruncSeries {
        let cap = common_cap(self, rhs);
        let mut coeffs = vec![Rat::zero(); cap + 1];
        for i in 0..=cap {
            if self.coeff(i).is_zero() {
                continue;
            }
            for j in 0..=(cap - i) {
                if rhs.coeff(j).is_zero() {
                    continue;
                }
                let prod = self.coeff(i) * rhs.coeff(j);
                coeffs[i + j] += prod;
            }
        }
        TruncSeries { coeffs }
    }
}

/// A tuple of n truncated series sharing one cap; a point of the jet space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JetPoint {
    components: Vec<TruncSeries>,
}

impl JetPoint {
    pub fn new(components: Vec<TruncSeries>) -> Self {
        assert!(
            !components.is_empty(),
            "jet point needs at least one component"
        );
        let cap = components[0].cap();
        assert!(
            components.iter().all(|c| c.cap() == cap),
            "all components must share one cap"
        );
        JetPoint { components }
    }

    pub fn n(&self) -> usize {
        self.components.len()
    }

    pub fn cap(&self) -> usize {
        self.components[0].cap()
    }

    pub fn component(&self, j: usize) -> &TruncSeries {
        &self.components[j]
    }

    pub fn components(&self) -> &[TruncSeries] {
        &self.components
    }

    /// The canonical lift: the same data viewed at a higher cap, padded with
    /// zeros (the components are honest polynomials of degree <= cap).
    pub fn with_cap(&self, cap: usize) -> JetPoint {
        JetPoint {
            components: self.components.iter().map(|c| c.with_cap(cap)).collect(),
        }
    }

    /// Coefficients flattened in jet-coordinate order: component-major,
    /// t-power minor. Matches the jet-ring variable order.
    pub fn coefficient_vector(&self) -> Vec<Rat> {
        self.components
            .iter()
            .flat_map(|c| c.coeffs().iter().cloned())
            .collect()
    }
}

impl fmt::Display for JetPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.components.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// Substitute the jet's components for the ring variables, truncated at the
/// jet's cap. A ring homomorphism in the polynomial argument.
pub fn evaluate(p: &Polynomial, u: &JetPoint) -> Result<TruncSeries, PolyError> {
    if p.nvars() != u.n() {
        return Err(PolyError::DimensionMismatch {
            expected: u.n(),
            got: p.nvars(),
        });
    }
    let cap = u.cap();
    // power cache per component
    let mut powers: Vec<Vec<TruncSeries>> = (0..u.n())
        .map(|_| vec![TruncSeries::constant(cap, Rat::from_integer(1.into()))])
        .collect();
    let mut acc = TruncSeries::zero(cap);
    for (m, c) in p.terms() {
        let mut term = TruncSeries::constant(cap, c.clone());
        for (j, &e) in m.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            while powers[j].len() <= e as usize {
                let next = &powers[j][powers[j].len() - 1] * u.component(j);
                powers[j].push(next);
            }
            term = &term * &powers[j][e as usize];
        }
        acc = &acc + &term;
    }
    Ok(acc)
}

/// Minimum order of the generators evaluated along the jet. Equals the order
/// along the whole ideal: orders of combinations only increase.
pub fn ord_along_ideal(gens: &[Polynomial], u: &JetPoint) -> Result<ExtOrder, PolyError> {
    if gens.is_empty() {
        return Err(PolyError::EmptyGenerators);
    }
    let mut best = ExtOrder::Infinity;
    for g in gens {
        let o = evaluate(g, u)?.ord();
        if o < best {
            best = o;
        }
    }
    Ok(best)
}

/// Parse the textual jet syntax: per component a polynomial in `t`,
/// components separated by `;`, e.g. `t^3; t^2`.
pub fn parse_jet(text: &str, cap: usize) -> Result<JetPoint, String> {
    let t_ring = crate::poly::PolyRing::new(vec!["t"]);
    let mut components = Vec::new();
    for part in text.split(';') {
        let p = crate::problem::parse_polynomial(&t_ring, part)
            .map_err(|e| format!("bad jet component {part:?}: {e}"))?;
        let mut coeffs = vec![Rat::zero(); cap + 1];
        for (m, c) in p.terms() {
            let e = m.0[0] as usize;
            if e > cap {
                return Err(format!(
                    "jet component {part:?} has degree {e} above cap {cap}"
                ));
            }
            coeffs[e] = c.clone();
        }
        components.push(TruncSeries::from_coeffs(coeffs));
    }
    Ok(JetPoint::new(components))
}
