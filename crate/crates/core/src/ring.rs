//! The bigraded polynomial ring `k[x_1..x_s; y_0..y_e]`.
//!
//! Base variables `x_i` have bidegree `(1, 0)` and carry the grading of the
//! base ring `A = k[x]`; fiber variables `y_j` have bidegree `(0, 1)`. The
//! fiber degree is the grading of the algebra `G = A[y]` whose `Proj` is the
//! space the multiplicities live on.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::ops::Add;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

/// `(base degree, fiber degree)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bidegree {
    pub base: u32,
    pub fiber: u32,
}

impl Bidegree {
    pub const ZERO: Bidegree = Bidegree { base: 0, fiber: 0 };

    pub fn new(base: u32, fiber: u32) -> Self {
        Bidegree { base, fiber }
    }

    pub fn checked_sub(self, other: Bidegree) -> Option<Bidegree> {
        Some(Bidegree {
            base: self.base.checked_sub(other.base)?,
            fiber: self.fiber.checked_sub(other.fiber)?,
        })
    }
}

impl Add for Bidegree {
    type Output = Bidegree;
    fn add(self, o: Bidegree) -> Bidegree {
        Bidegree {
            base: self.base + o.base,
            fiber: self.fiber + o.fiber,
        }
    }
}

impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.base, self.fiber)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingSpec {
    field: Field,
    base: Vec<String>,
    fiber: Vec<String>,
}

/// Shared handle; polynomials keep one so ring mismatches are detectable.
pub type Ring = Arc<RingSpec>;

impl RingSpec {
    pub fn new<S: Into<String>>(
        field: Field,
        base: impl IntoIterator<Item = S>,
        fiber: impl IntoIterator<Item = S>,
    ) -> Result<Ring> {
        let base: Vec<String> = base.into_iter().map(Into::into).collect();
        let fiber: Vec<String> = fiber.into_iter().map(Into::into).collect();
        if base.is_empty() && fiber.is_empty() {
            return Err(Error::InvalidRing("no variables".into()));
        }
        let mut seen = HashSet::new();
        for name in base.iter().chain(&fiber) {
            if !seen.insert(name.as_str()) {
                return Err(Error::InvalidRing(format!("duplicate variable {name}")));
            }
        }
        Ok(Arc::new(RingSpec { field, base, fiber }))
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn num_base(&self) -> usize {
        self.base.len()
    }

    pub fn num_fiber(&self) -> usize {
        self.fiber.len()
    }

    pub fn num_vars(&self) -> usize {
        self.base.len() + self.fiber.len()
    }

    pub fn base_names(&self) -> &[String] {
        &self.base
    }

    pub fn fiber_names(&self) -> &[String] {
        &self.fiber
    }

    pub fn var_name(&self, i: usize) -> &str {
        if i < self.base.len() {
            &self.base[i]
        } else {
            &self.fiber[i - self.base.len()]
        }
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.base.iter().chain(&self.fiber).position(|v| v == name)
    }

    /// The same variables over another field.
    pub fn with_field(&self, field: Field) -> Ring {
        Arc::new(RingSpec {
            field,
            base: self.base.clone(),
            fiber: self.fiber.clone(),
        })
    }
}

pub(crate) fn same_ring(a: &Ring, b: &Ring) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// Exponent vector over all variables, base block first.
///
/// Ordered graded-lexicographically: total degree first, then
/// lexicographically with earlier variables heavier.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn bidegree(&self, num_base: usize) -> Bidegree {
        Bidegree {
            base: self.0[..num_base].iter().sum(),
            fiber: self.0[num_base..].iter().sum(),
        }
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Exponent vectors of `parts` variables summing to `total`, lexicographically
/// descending (`x^2, xy, y^2`).
pub fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    fn go(total: u32, parts: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 1 {
            prefix.push(total);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in (0..=total).rev() {
            prefix.push(first);
            go(total - first, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    if parts == 0 {
        return if total == 0 {
            vec![Vec::new()]
        } else {
            Vec::new()
        };
    }
    let mut out = Vec::new();
    go(total, parts, &mut Vec::with_capacity(parts), &mut out);
    out
}

/// The monomial basis of the piece of bidegree `deg`, in descending
/// graded-lex order with the base block compared first.
pub fn monomial_basis(ring: &RingSpec, deg: Bidegree) -> Vec<Monomial> {
    let base = compositions(deg.base, ring.num_base());
    let fiber = compositions(deg.fiber, ring.num_fiber());
    let mut out = Vec::with_capacity(base.len() * fiber.len());
    for b in &base {
        for f in &fiber {
            let mut e = b.clone();
            e.extend_from_slice(f);
            out.push(Monomial(e));
        }
    }
    out
}

/// A polynomial with no zero coefficients, terms keyed by monomial.
#[derive(Clone, Debug)]
pub struct Polynomial {
    ring: Ring,
    terms: BTreeMap<Monomial, Scalar>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl Polynomial {
    pub fn zero(ring: &Ring) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &Ring) -> Self {
        Polynomial::monomial(ring, Monomial::one(ring.num_vars()), ring.field().one())
    }

    pub fn var(ring: &Ring, i: usize) -> Self {
        Polynomial::monomial(ring, Monomial::var(ring.num_vars(), i), ring.field().one())
    }

    pub fn constant(ring: &Ring, c: Scalar) -> Self {
        Polynomial::monomial(ring, Monomial::one(ring.num_vars()), c)
    }

    pub fn monomial(ring: &Ring, m: Monomial, c: Scalar) -> Self {
        assert_eq!(m.0.len(), ring.num_vars(), "monomial arity");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    /// Builds from `(exponents, integer coefficient)` pairs; like terms combine.
    pub fn from_terms(ring: &Ring, terms: &[(&[u32], i64)]) -> Self {
        let mut p = Polynomial::zero(ring);
        for (e, c) in terms {
            p.add_term(Monomial(e.to_vec()), &ring.field().from_i64(*c));
        }
        p
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in descending monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter().rev()
    }

    fn add_term(&mut self, m: Monomial, c: &Scalar) {
        let v = match self.terms.get(&m) {
            Some(old) => old.add(c),
            None => c.clone(),
        };
        if v.is_zero() {
            self.terms.remove(&m);
        } else {
            self.terms.insert(m, v);
        }
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        if !same_ring(&self.ring, &other.ring) {
            return Err(Error::RingMismatch);
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v.mul(c)))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(t, c)| (t.mul(m), c.clone()))
                .collect(),
        }
    }

    /// Exact product.
    pub fn multiply(&self, other: &Polynomial) -> Result<Polynomial> {
        if !same_ring(&self.ring, &other.ring) {
            return Err(Error::RingMismatch);
        }
        let mut out = Polynomial::zero(&self.ring);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), &ca.mul(cb));
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one(&self.ring);
        for _ in 0..e {
            acc = acc.multiply(self).expect("same ring");
        }
        acc
    }

    /// The common bidegree of all terms, or `None` if the polynomial is zero
    /// or not bihomogeneous.
    pub fn bidegree(&self) -> Option<Bidegree> {
        let nb = self.ring.num_base();
        let mut it = self.terms.keys().map(|m| m.bidegree(nb));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn is_bihomogeneous(&self) -> bool {
        self.bidegree().is_some()
    }

    /// Scaled so the leading coefficient is one.
    pub fn monic(&self) -> Polynomial {
        match self.terms.iter().next_back() {
            Some((_, lc)) if !lc.is_one() => self.scale(&lc.inv().expect("nonzero")),
            _ => self.clone(),
        }
    }

    /// Re-expresses the polynomial over `ring`, which must have the same
    /// variables; integer coefficients are reduced into the new field.
    pub fn change_ring(&self, ring: &Ring) -> Result<Polynomial> {
        if ring.base != self.ring.base || ring.fiber != self.ring.fiber {
            return Err(Error::RingMismatch);
        }
        let field = ring.field();
        let mut out = Polynomial::zero(ring);
        for (m, c) in &self.terms {
            let v = match c {
                Scalar::Rational(q) => {
                    let num = field.from_bigint(q.numer());
                    let den = field.from_bigint(q.denom());
                    num.mul(&den.inv().ok_or_else(|| {
                        Error::Precondition(format!("coefficient {q} not defined in {field}"))
                    })?)
                }
                Scalar::Mod { value, .. } => field.from_i64(*value as i64),
            };
            out.add_term(m.clone(), &v);
        }
        Ok(out)
    }

    pub(crate) fn term_map(&self) -> &BTreeMap<Monomial, Scalar> {
        &self.terms
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms().enumerate() {
            let mut coef = c.to_string();
            let negative = coef.starts_with('-');
            if negative {
                coef.remove(0);
            }
            if k == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { "-" } else { "+" })?;
            }
            let vars: Vec<String> = m
                .exponents()
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    let name = self.ring.var_name(i);
                    if e == 1 {
                        name.to_string()
                    } else {
                        format!("{name}^{e}")
                    }
                })
                .collect();
            match (coef.as_str(), vars.is_empty()) {
                (_, true) => write!(f, "{coef}")?,
                ("1", false) => write!(f, "{}", vars.join("*"))?,
                (_, false) => write!(f, "{coef}*{}", vars.join("*"))?,
            }
        }
        Ok(())
    }
}

/// An `A`-submodule `H` of the fiber-degree-`d` piece of `G`, given by
/// bihomogeneous generators of fiber degree `d`. With `d = 0` it is a
/// homogeneous ideal of the base ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubmoduleSpec {
    ring: Ring,
    fiber_degree: u32,
    gens: Vec<Polynomial>,
}

impl SubmoduleSpec {
    /// Validates the generators; zero polynomials are dropped.
    pub fn new(ring: &Ring, fiber_degree: u32, gens: Vec<Polynomial>) -> Result<Self> {
        let mut kept = Vec::with_capacity(gens.len());
        for g in gens {
            if !same_ring(ring, g.ring()) {
                return Err(Error::RingMismatch);
            }
            if g.is_zero() {
                continue;
            }
            check_fiber_degree(&g, fiber_degree)?;
            kept.push(g);
        }
        Ok(SubmoduleSpec {
            ring: ring.clone(),
            fiber_degree,
            gens: kept,
        })
    }

    /// The unit submodule `<1>` with `d = 0`.
    pub fn unit(ring: &Ring) -> Self {
        SubmoduleSpec {
            ring: ring.clone(),
            fiber_degree: 0,
            gens: vec![Polynomial::one(ring)],
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn fiber_degree(&self) -> u32 {
        self.fiber_degree
    }

    pub fn gens(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    /// Generators of `H^p`: every product of `p` generators, with duplicates
    /// and scalar multiples removed. `p = 0` gives `<1>`.
    pub fn power(&self, p: u32) -> SubmoduleSpec {
        let mut acc = SubmoduleSpec::unit(&self.ring);
        for _ in 0..p {
            acc = acc.product(self).expect("same ring");
        }
        acc
    }

    /// Generators of `H_1 H_2`: all pairwise products, deduplicated up to
    /// scalars. Not minimalized.
    pub fn product(&self, other: &SubmoduleSpec) -> Result<SubmoduleSpec> {
        if !same_ring(&self.ring, &other.ring) {
            return Err(Error::RingMismatch);
        }
        let mut gens = Vec::new();
        for a in &self.gens {
            for b in &other.gens {
                gens.push(a.multiply(b)?);
            }
        }
        Ok(SubmoduleSpec {
            ring: self.ring.clone(),
            fiber_degree: self.fiber_degree + other.fiber_degree,
            gens: dedup_generators(gens),
        })
    }
}

/// Drops zeros and polynomials proportional to an earlier one, keeping order.
pub fn dedup_generators(gens: Vec<Polynomial>) -> Vec<Polynomial> {
    let mut seen: HashSet<Vec<(Monomial, Scalar)>> = HashSet::new();
    let mut out = Vec::new();
    for g in gens {
        if g.is_zero() {
            continue;
        }
        let key: Vec<(Monomial, Scalar)> = g.monic().terms.into_iter().collect();
        if seen.insert(key) {
            out.push(g);
        }
    }
    out
}

fn check_fiber_degree(g: &Polynomial, d: u32) -> Result<()> {
    let nb = g.ring().num_base();
    let mut base_deg = None;
    for (m, _) in g.terms() {
        let bd = m.bidegree(nb);
        let term = Polynomial::monomial(g.ring(), m.clone(), g.ring().field().one());
        if bd.fiber != d {
            return Err(Error::NotBihomogeneous(format!(
                "mixed fiber degrees in {g}: term {term} has fiber degree {}, expected {d}",
                bd.fiber
            )));
        }
        match base_deg {
            None => base_deg = Some(bd.base),
            Some(b) if b != bd.base => {
                return Err(Error::NotBihomogeneous(format!(
                    "mixed base degrees in {g}: term {term} has base degree {}, expected {b}",
                    bd.base
                )))
            }
            _ => {}
        }
    }
    Ok(())
}

/// Convenience: `power` as a free function.
pub fn power_generators(h: &SubmoduleSpec, p: u32) -> SubmoduleSpec {
    h.power(p)
}

/// Convenience: `product` as a free function.
pub fn product_generators(h1: &SubmoduleSpec, h2: &SubmoduleSpec) -> Result<SubmoduleSpec> {
    h1.product(h2)
}

/// Generators of `H_1^i H_2^j` for every `i ≤ max_i`, `j ≤ max_j`.
#[derive(Clone, Debug)]
pub struct ProductTable {
    max_j: u32,
    entries: Vec<SubmoduleSpec>,
}

impl ProductTable {
    pub fn new(h1: &SubmoduleSpec, h2: &SubmoduleSpec, max_i: u32, max_j: u32) -> Result<Self> {
        if !same_ring(&h1.ring, &h2.ring) {
            return Err(Error::RingMismatch);
        }
        let powers = |h: &SubmoduleSpec, top: u32| {
            let mut out = vec![SubmoduleSpec::unit(&h.ring)];
            for k in 1..=top {
                let next = out[k as usize - 1].product(h).expect("same ring");
                out.push(next);
            }
            out
        };
        let p1 = powers(h1, max_i);
        let p2 = powers(h2, max_j);
        let mut entries = Vec::with_capacity(p1.len() * p2.len());
        for a in &p1 {
            for b in &p2 {
                entries.push(a.product(b)?);
            }
        }
        Ok(ProductTable { max_j, entries })
    }

    /// Powers of one submodule, `H^0 ..= H^max`.
    pub fn powers(h: &SubmoduleSpec, max: u32) -> Self {
        let unit = SubmoduleSpec::unit(&h.ring);
        ProductTable::new(h, &unit, max, 0).expect("same ring")
    }

    pub fn get(&self, i: u32, j: u32) -> &SubmoduleSpec {
        &self.entries[(i * (self.max_j + 1) + j) as usize]
    }
}
