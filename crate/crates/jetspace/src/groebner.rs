//! Buchberger engine over the rationals: reduced Groebner bases, ideal
//! dimension by independent sets of the leading-term ideal, and saturation.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::poly::{grevlex_cmp, Monomial, PolyRing, Polynomial};
use crate::Rat;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroebnerError {
    #[error("computation budget exhausted after {pairs} pairs / {steps} reduction steps")]
    Timeout { pairs: usize, steps: usize },
    #[error("too many variables for dimension computation ({n} > 64)")]
    TooManyVariables { n: usize },
}

/// Monomial order: graded reverse lex, lex, or a block order eliminating the
/// first k variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonomialOrder {
    GrevLex,
    Lex,
    Elim(usize),
}

fn grevlex_slice(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    match da.cmp(&db) {
        Ordering::Equal => {}
        o => return o,
    }
    for i in (0..a.len()).rev() {
        match a[i].cmp(&b[i]) {
            Ordering::Equal => continue,
            Ordering::Less => return Ordering::Greater,
            Ordering::Greater => return Ordering::Less,
        }
    }
    Ordering::Equal
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::GrevLex => grevlex_cmp(a, b),
            MonomialOrder::Lex => a.0.cmp(&b.0),
            MonomialOrder::Elim(k) => grevlex_slice(&a.0[..*k], &b.0[..*k])
                .then_with(|| grevlex_slice(&a.0[*k..], &b.0[*k..])),
        }
    }
}

/// Pair-limit guardrail; timeouts are reported, never silently wrong.
#[derive(Debug, Clone, Copy)]
pub struct Budget {
    pub max_pairs: usize,
    pub max_steps: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_pairs: 1_000_000,
            max_steps: 40_000_000,
        }
    }
}

struct Counters {
    pairs: usize,
    steps: usize,
}

impl Counters {
    fn step(&mut self, budget: &Budget) -> Result<(), GroebnerError> {
        self.steps += 1;
        if self.steps > budget.max_steps {
            return Err(GroebnerError::Timeout {
                pairs: self.pairs,
                steps: self.steps,
            });
        }
        Ok(())
    }

    fn pair(&mut self, budget: &Budget) -> Result<(), GroebnerError> {
        self.pairs += 1;
        if self.pairs > budget.max_pairs {
            return Err(GroebnerError::Timeout {
                pairs: self.pairs,
                steps: self.steps,
            });
        }
        Ok(())
    }
}

/// Working representation: terms sorted descending under the active order,
/// coefficients kept as primitive integers (content removed, positive lead).
#[derive(Debug, Clone)]
struct GPoly {
    terms: Vec<(Monomial, Rat)>,
}

impl GPoly {
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }

    fn lc(&self) -> &Rat {
        &self.terms[0].1
    }
}

fn to_gpoly(p: &Polynomial, ord: MonomialOrder) -> GPoly {
    let mut terms: Vec<(Monomial, Rat)> =
        p.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
    terms.sort_by(|a, b| ord.cmp(&b.0, &a.0));
    GPoly { terms }
}

fn from_gpoly(g: &GPoly, ring: &Arc<PolyRing>) -> Polynomial {
    Polynomial::from_terms(ring, g.terms.iter().cloned())
}

/// Clear denominators, divide by integer content, make the lead positive.
fn primitivize(g: &mut GPoly) {
    if g.terms.is_empty() {
        return;
    }
    let mut denom_lcm = BigInt::one();
    for (_, c) in &g.terms {
        let d = c.denom();
        let gcd = num_integer_gcd(&denom_lcm, d);
        denom_lcm = &denom_lcm / &gcd * d;
    }
    let mut content = BigInt::zero();
    for (_, c) in &g.terms {
        let scaled = c.numer() * (&denom_lcm / c.denom());
        content = num_integer_gcd(&content, &scaled);
    }
    if content.is_zero() {
        return;
    }
    let lead_neg = g.terms[0].1.is_negative();
    if lead_neg {
        content = -content;
    }
    let factor = Rat::new(denom_lcm, content);
    for (_, c) in &mut g.terms {
        *c = &*c * &factor;
    }
}

fn num_integer_gcd(a: &BigInt, b: &BigInt) -> BigInt {
    let mut a = a.abs();
    let mut b = b.abs();
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}

/// result = f - c * x^shift * g, merging the sorted term lists.
fn sub_scaled(f: &GPoly, g: &GPoly, shift: &Monomial, c: &Rat, ord: MonomialOrder) -> GPoly {
    let mut out = Vec::with_capacity(f.terms.len() + g.terms.len());
    let mut i = 0;
    let mut j = 0;
    while i < f.terms.len() && j < g.terms.len() {
        let gm = g.terms[j].0.mul(shift);
        match ord.cmp(&f.terms[i].0, &gm) {
            Ordering::Greater => {
                out.push(f.terms[i].clone());
                i += 1;
            }
            Ordering::Less => {
                out.push((gm, -(&g.terms[j].1 * c)));
                j += 1;
            }
            Ordering::Equal => {
                let coeff = &f.terms[i].1 - &(&g.terms[j].1 * c);
                if !coeff.is_zero() {
                    out.push((gm, coeff));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&f.terms[i..]);
    for (m, a) in &g.terms[j..] {
        out.push((m.mul(shift), -(a * c)));
    }
    GPoly { terms: out }
}

/// Full normal form: reduce the leading term while possible, then commit it
/// and continue with the tail.
fn normal_form(
    mut f: GPoly,
    basis: &[GPoly],
    skip: Option<usize>,
    ord: MonomialOrder,
    budget: &Budget,
    counters: &mut Counters,
) -> Result<GPoly, GroebnerError> {
    let mut done: Vec<(Monomial, Rat)> = Vec::new();
    'outer: while !f.is_zero() {
        for (k, g) in basis.iter().enumerate() {
            if Some(k) == skip || g.is_zero() {
                continue;
            }
            if let Some(shift) = g.lm().div_into(f.lm()) {
                counters.step(budget)?;
                let c = f.lc() / g.lc();
                f = sub_scaled(&f, g, &shift, &c, ord);
                continue 'outer;
            }
        }
        // leading term irreducible
        done.push(f.terms.remove(0));
    }
    Ok(GPoly { terms: done })
}

fn spoly(f: &GPoly, g: &GPoly, ord: MonomialOrder) -> GPoly {
    let lcm = f.lm().lcm(g.lm());
    let sf = f.lm().div_into(&lcm).expect("lcm divisible");
    let sg = g.lm().div_into(&lcm).expect("lcm divisible");
    // g.lc * x^sf * f - f.lc * x^sg * g
    let scaled_f = GPoly {
        terms: f
            .terms
            .iter()
            .map(|(m, c)| (m.mul(&sf), c * g.lc()))
            .collect(),
    };
    sub_scaled(&scaled_f, g, &sg, f.lc(), ord)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroebnerBasis {
    pub generators: Vec<Polynomial>,
    pub order: MonomialOrder,
    ring: Arc<PolyRing>,
}

impl GroebnerBasis {
    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.generators
            .iter()
            .filter_map(|p| p.leading_term_by(|a, b| self.order.cmp(a, b)).map(|(m, _)| m.clone()))
            .collect()
    }

    /// Remainder of p on division by the basis; zero iff p is in the ideal.
    pub fn normal_form(&self, p: &Polynomial) -> Polynomial {
        let basis: Vec<GPoly> = self
            .generators
            .iter()
            .map(|g| to_gpoly(g, self.order))
            .collect();
        let mut counters = Counters { pairs: 0, steps: 0 };
        let budget = Budget {
            max_pairs: usize::MAX,
            max_steps: usize::MAX,
        };
        let nf = normal_form(
            to_gpoly(p, self.order),
            &basis,
            None,
            self.order,
            &budget,
            &mut counters,
        )
        .expect("unlimited budget");
        from_gpoly(&nf, &self.ring)
    }

    pub fn contains(&self, p: &Polynomial) -> bool {
        self.normal_form(p).is_zero()
    }

    pub fn contains_one(&self) -> bool {
        self.generators
            .iter()
            .any(|p| !p.is_zero() && p.is_constant())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct PairKey {
    deg: u64,
    i: usize,
    j: usize,
}

/// Buchberger's algorithm with the normal selection strategy (degree, then
/// lex on the lcm, then input index) and the coprime and chain criteria.
/// Returns the unique reduced basis, tail-reduced with monic leads.
pub fn buchberger(
    gens: &[Polynomial],
    ord: MonomialOrder,
    budget: &Budget,
) -> Result<GroebnerBasis, GroebnerError> {
    let ring = match gens.first() {
        Some(g) => g.ring().clone(),
        None => {
            return Ok(GroebnerBasis {
                generators: Vec::new(),
                order: ord,
                ring: PolyRing::new(vec!["_"]),
            })
        }
    };
    let mut counters = Counters { pairs: 0, steps: 0 };
    let mut basis: Vec<GPoly> = Vec::new();
    for g in gens {
        let mut gp = to_gpoly(g, ord);
        if !gp.is_zero() {
            primitivize(&mut gp);
            basis.push(gp);
        }
    }

    // pending pairs keyed by (deg(lcm), lcm, i, j)
    let mut pending: BTreeSet<(u64, Vec<u32>, usize, usize)> = BTreeSet::new();
    let mut in_pending: HashSet<(usize, usize)> = HashSet::new();
    let mut add_pair = |pending: &mut BTreeSet<(u64, Vec<u32>, usize, usize)>,
                        in_pending: &mut HashSet<(usize, usize)>,
                        basis: &[GPoly],
                        i: usize,
                        j: usize| {
        let lcm = basis[i].lm().lcm(basis[j].lm());
        pending.insert((lcm.degree(), lcm.0.clone(), i, j));
        in_pending.insert((i, j));
    };
    for i in 0..basis.len() {
        for j in (i + 1)..basis.len() {
            add_pair(&mut pending, &mut in_pending, &basis, i, j);
        }
    }

    while let Some(key) = pending.iter().next().cloned() {
        pending.remove(&key);
        let (_, lcm_exp, i, j) = key;
        in_pending.remove(&(i, j));
        counters.pair(budget)?;

        // coprime leading monomials: S-polynomial reduces to zero
        if basis[i].lm().coprime(basis[j].lm()) {
            continue;
        }
        // chain criterion: some k with lm_k | lcm(i,j) and both (i,k), (j,k)
        // already treated
        let lcm = Monomial(lcm_exp);
        let mut skip = false;
        for k in 0..basis.len() {
            if k == i || k == j {
                continue;
            }
            if basis[k].lm().divides(&lcm) {
                let a = (i.min(k), i.max(k));
                let b = (j.min(k), j.max(k));
                if !in_pending.contains(&a) && !in_pending.contains(&b) {
                    skip = true;
                    break;
                }
            }
        }
        if skip {
            continue;
        }

        let s = spoly(&basis[i], &basis[j], ord);
        let mut h = normal_form(s, &basis, None, ord, budget, &mut counters)?;
        if h.is_zero() {
            continue;
        }
        primitivize(&mut h);
        let new_idx = basis.len();
        basis.push(h);
        for k in 0..new_idx {
            add_pair(&mut pending, &mut in_pending, &basis, k, new_idx);
        }
    }

    // minimize: drop elements whose lead is divisible by another survivor's
    let mut alive: Vec<bool> = vec![true; basis.len()];
    for i in 0..basis.len() {
        if !alive[i] {
            continue;
        }
        for j in 0..basis.len() {
            if i == j || !alive[j] {
                continue;
            }
            if basis[j].lm().divides(basis[i].lm()) {
                // prefer dropping the later / larger one; ties by index
                if basis[i].lm() == basis[j].lm() && i < j {
                    continue;
                }
                alive[i] = false;
                break;
            }
        }
    }
    let survivors: Vec<GPoly> = basis
        .into_iter()
        .zip(&alive)
        .filter(|(_, &a)| a)
        .map(|(g, _)| g)
        .collect();

    // inter-reduce tails and normalize to monic
    let mut reduced = Vec::with_capacity(survivors.len());
    for idx in 0..survivors.len() {
        let nf = normal_form(
            survivors[idx].clone(),
            &survivors,
            Some(idx),
            ord,
            budget,
            &mut counters,
        )?;
        let mut p = nf;
        if !p.is_zero() {
            let lc = p.lc().clone();
            for (_, c) in &mut p.terms {
                *c = &*c / &lc;
            }
        }
        reduced.push(p);
    }
    reduced.retain(|g| !g.is_zero());
    reduced.sort_by(|a, b| ord.cmp(a.lm(), b.lm()));
    reduced.dedup_by(|a, b| a.terms == b.terms);

    Ok(GroebnerBasis {
        generators: reduced.iter().map(|g| from_gpoly(g, &ring)).collect(),
        order: ord,
        ring,
    })
}

/// Krull dimension of the vanishing locus, or EMPTY when 1 is in the ideal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dim {
    Empty,
    Finite(usize),
}

impl Dim {
    pub fn finite(&self) -> Option<usize> {
        match self {
            Dim::Finite(d) => Some(*d),
            Dim::Empty => None,
        }
    }
}

/// Dimension of V(gens) in the full affine space of the generators' ring.
pub fn ideal_dimension(gens: &[Polynomial], budget: &Budget) -> Result<Dim, GroebnerError> {
    match gens.first() {
        Some(g) => dimension_in_ring(g.ring(), gens.to_vec(), budget),
        None => Err(GroebnerError::TooManyVariables { n: 0 }),
    }
}

/// Dimension of the locally closed set V(gens) minus the union of V(h) for h
/// in `nonzero`, computed on the graph: adjoin one variable w per h together
/// with the generator w*h - 1. The graph is isomorphic to the set itself, so
/// the dimension is unchanged.
pub fn dimension_with_nonvanishing(
    ring: &Arc<PolyRing>,
    gens: &[Polynomial],
    nonzero: &[Polynomial],
    budget: &Budget,
) -> Result<Dim, GroebnerError> {
    if nonzero.is_empty() {
        return dimension_in_ring(ring, gens.to_vec(), budget);
    }
    let n = ring.nvars();
    let mut names: Vec<String> = ring.var_names().to_vec();
    for i in 0..nonzero.len() {
        names.push(format!("~w{i}"));
    }
    let ext = PolyRing::new(names);
    let offset: Vec<usize> = (0..n).collect();
    let mut all: Vec<Polynomial> = gens.iter().map(|g| g.embed(&ext, &offset)).collect();
    for (i, h) in nonzero.iter().enumerate() {
        let he = h.embed(&ext, &offset);
        let wi = Polynomial::var(&ext, n + i);
        all.push(&(&wi * &he) - &Polynomial::one(&ext));
    }
    dimension_in_ring(&ext, all, budget)
}

fn dimension_in_ring(
    ring: &Arc<PolyRing>,
    mut gens: Vec<Polynomial>,
    budget: &Budget,
) -> Result<Dim, GroebnerError> {
    let n = ring.nvars();
    if n > 64 {
        return Err(GroebnerError::TooManyVariables { n });
    }
    // prepass: a generator c*x_i^k forces x_i = 0 on the whole locus
    // (dimension only sees the underlying set, so the exponent is irrelevant)
    let mut forced: u64 = 0;
    loop {
        gens.retain(|g| !g.is_zero());
        if gens.iter().any(|g| g.is_constant() && !g.is_zero()) {
            return Ok(Dim::Empty);
        }
        let mut found = None;
        for g in &gens {
            if g.num_terms() == 1 {
                let (m, _) = g.terms().next().expect("single term");
                let support: Vec<usize> =
                    (0..n).filter(|&i| m.0[i] > 0).collect();
                if support.len() == 1 {
                    found = Some(support[0]);
                    break;
                }
            }
        }
        match found {
            Some(i) => {
                forced |= 1 << i;
                gens = gens.iter().map(|g| g.substitute_zero(i)).collect();
            }
            None => break,
        }
    }
    if gens.is_empty() {
        return Ok(Dim::Finite(n - forced.count_ones() as usize));
    }

    let gb = buchberger(&gens, MonomialOrder::GrevLex, budget)?;
    if gb.contains_one() {
        return Ok(Dim::Empty);
    }
    let mut supports: Vec<u64> = gb
        .leading_monomials()
        .iter()
        .map(Monomial::support_mask)
        .collect();
    supports.sort();
    supports.dedup();
    // keep only minimal supports
    let minimal: Vec<u64> = supports
        .iter()
        .filter(|&&s| !supports.iter().any(|&t| t != s && t & s == t))
        .cloned()
        .collect();
    let involved: u64 = minimal.iter().fold(0, |a, b| a | b);
    debug_assert_eq!(involved & forced, 0);
    let free = n - forced.count_ones() as usize - involved.count_ones() as usize;

    let mut memo: HashMap<u64, usize> = HashMap::new();
    let max_ind = max_independent(&minimal, involved, &mut memo);
    Ok(Dim::Finite(free + max_ind))
}

/// Largest subset of the involved variables that contains no leading-term
/// support; its size plus the free variables is the Krull dimension.
fn max_independent(supports: &[u64], s: u64, memo: &mut HashMap<u64, usize>) -> usize {
    if let Some(&v) = memo.get(&s) {
        return v;
    }
    let hit = supports.iter().find(|&&sup| sup & !s == 0);
    let result = match hit {
        None => s.count_ones() as usize,
        Some(&sup) => {
            let mut best = 0;
            let mut bits = sup;
            while bits != 0 {
                let b = bits & bits.wrapping_neg();
                bits ^= b;
                best = best.max(max_independent(supports, s & !b, memo));
            }
            best
        }
    };
    memo.insert(s, result);
    result
}

/// Generators of I : h^infinity via the auxiliary-variable elimination:
/// adjoin w and 1 - w*h, then eliminate w with a block order.
pub fn saturation(
    gens: &[Polynomial],
    h: &Polynomial,
    budget: &Budget,
) -> Result<Vec<Polynomial>, GroebnerError> {
    assert!(!h.is_zero(), "saturation by zero");
    let ring = h.ring().clone();
    let n = ring.nvars();
    let mut names = vec!["~w".to_string()];
    names.extend(ring.var_names().iter().cloned());
    let ext = PolyRing::new(names);
    let offset: Vec<usize> = (1..=n).collect();
    let mut all: Vec<Polynomial> = gens.iter().map(|g| g.embed(&ext, &offset)).collect();
    let w = Polynomial::var(&ext, 0);
    all.push(&Polynomial::one(&ext) - &(&w * &h.embed(&ext, &offset)));
    let gb = buchberger(&all, MonomialOrder::Elim(1), budget)?;
    let mut out = Vec::new();
    for g in &gb.generators {
        if g.terms().all(|(m, _)| m.0[0] == 0) {
            // restrict back to the original ring
            let restricted = Polynomial::from_terms(
                &ring,
                g.terms()
                    .map(|(m, c)| (Monomial(m.0[1..].to_vec()), c.clone())),
            );
            out.push(restricted);
        }
    }
    Ok(out)
}
