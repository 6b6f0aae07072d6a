//! Finitely presented bigraded modules `M = F/K` and the lengths of their
//! fiber-degree slices.
//!
//! Every length in this crate is the `k`-dimension of a quotient of two
//! base-stable subspaces of one fiber slice `F_N = ⊕_a F_(a,N)`, summed over
//! base degrees `a`. The sum is cut off by a certificate: the numerator is an
//! `A`-module generated in base degrees `≤ D`, so once a summand vanishes at
//! some `a ≥ D` every later summand vanishes too.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::linalg::{Echelon, SparseVec};
use crate::polyfit::{total_degree_estimate, LengthTable};
use crate::ring::{monomial_basis, Bidegree, Monomial, Polynomial, Ring, RingSpec};

/// Default number of base degrees scanned before a length is declared not
/// certifiably finite.
pub const DEFAULT_CUTOFF: u32 = 64;

/// A free module `⊕ G(-shift_i)` given by its generator bidegrees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeModuleSpec {
    ring: Ring,
    shifts: Vec<Bidegree>,
}

impl FreeModuleSpec {
    pub fn new(ring: &Ring, shifts: Vec<Bidegree>) -> Result<Self> {
        if shifts.is_empty() {
            return Err(Error::InvalidModule("free module of rank 0".into()));
        }
        Ok(FreeModuleSpec {
            ring: ring.clone(),
            shifts,
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn shifts(&self) -> &[Bidegree] {
        &self.shifts
    }

    pub fn rank(&self) -> usize {
        self.shifts.len()
    }
}

/// A relation: one polynomial per free generator, bihomogeneous as a vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    entries: Vec<Polynomial>,
    degree: Bidegree,
}

impl Relation {
    pub fn entries(&self) -> &[Polynomial] {
        &self.entries
    }

    pub fn degree(&self) -> Bidegree {
        self.degree
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModulePresentation {
    free: FreeModuleSpec,
    relations: Vec<Relation>,
}

impl ModulePresentation {
    /// Validates bihomogeneity of every relation vector. Zero relations are
    /// dropped.
    pub fn new(free: FreeModuleSpec, relations: Vec<Vec<Polynomial>>) -> Result<Self> {
        let mut rels = Vec::with_capacity(relations.len());
        for (k, entries) in relations.into_iter().enumerate() {
            if entries.len() != free.rank() {
                return Err(Error::InvalidModule(format!(
                    "relation {k} has {} entries, free module has rank {}",
                    entries.len(),
                    free.rank()
                )));
            }
            let mut degree: Option<Bidegree> = None;
            for (i, e) in entries.iter().enumerate() {
                if e.ring() != free.ring() {
                    return Err(Error::RingMismatch);
                }
                if e.is_zero() {
                    continue;
                }
                let d = e.bidegree().ok_or_else(|| {
                    Error::NotBihomogeneous(format!("relation {k}, entry {i}: {e}"))
                })? + free.shifts[i];
                match degree {
                    None => degree = Some(d),
                    Some(prev) if prev != d => {
                        return Err(Error::NotBihomogeneous(format!(
                            "relation {k}: entry {i} ({e}) lands in bidegree {d}, earlier entries in {prev}"
                        )))
                    }
                    _ => {}
                }
            }
            if let Some(degree) = degree {
                rels.push(Relation { entries, degree });
            }
        }
        Ok(ModulePresentation {
            free,
            relations: rels,
        })
    }

    /// `G` as a module over itself.
    pub fn free_ring(ring: &Ring) -> Self {
        ModulePresentation {
            free: FreeModuleSpec {
                ring: ring.clone(),
                shifts: vec![Bidegree::ZERO],
            },
            relations: Vec::new(),
        }
    }

    /// `G/(f_1, ..., f_k)` for bihomogeneous `f_i`.
    pub fn cyclic_quotient(ring: &Ring, ideal: Vec<Polynomial>) -> Result<Self> {
        ModulePresentation::new(
            FreeModuleSpec::new(ring, vec![Bidegree::ZERO])?,
            ideal.into_iter().map(|f| vec![f]).collect(),
        )
    }

    pub fn ring(&self) -> &Ring {
        &self.free.ring
    }

    pub fn free(&self) -> &FreeModuleSpec {
        &self.free
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    /// Largest base shift among generators living in fiber degree `≤ fiber`.
    fn max_base_shift(&self, fiber: u32) -> u32 {
        self.free
            .shifts
            .iter()
            .filter(|s| s.fiber <= fiber)
            .map(|s| s.base)
            .max()
            .unwrap_or(0)
    }

    /// The same module over another field (integer data is reduced).
    pub fn change_ring(&self, ring: &Ring) -> Result<Self> {
        let free = FreeModuleSpec::new(ring, self.free.shifts.clone())?;
        let rels = self
            .relations
            .iter()
            .map(|r| r.entries.iter().map(|e| e.change_ring(ring)).collect())
            .collect::<Result<Vec<_>>>()?;
        ModulePresentation::new(free, rels)
    }
}

/// The monomial basis `{μ e_i}` of `F` in one bidegree.
#[derive(Clone, Debug)]
pub struct PieceBasis {
    degree: Bidegree,
    elems: Vec<(usize, Monomial)>,
    index: HashMap<(usize, Monomial), usize>,
}

impl PieceBasis {
    pub fn new(free: &FreeModuleSpec, degree: Bidegree) -> Self {
        let mut elems = Vec::new();
        for (i, s) in free.shifts.iter().enumerate() {
            if let Some(rest) = degree.checked_sub(*s) {
                for m in monomial_basis(&free.ring, rest) {
                    elems.push((i, m));
                }
            }
        }
        let index = elems
            .iter()
            .cloned()
            .enumerate()
            .map(|(k, e)| (e, k))
            .collect();
        PieceBasis {
            degree,
            elems,
            index,
        }
    }

    pub fn degree(&self) -> Bidegree {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.elems.len()
    }

    pub fn elements(&self) -> &[(usize, Monomial)] {
        &self.elems
    }

    /// Coordinates of `Σ_i entries[i]·μ·e_i`.
    fn vector(&self, entries: &[(usize, &Polynomial)], mu: &Monomial) -> SparseVec {
        let mut v = SparseVec::new();
        for (i, poly) in entries {
            for (m, c) in poly.term_map() {
                let key = (*i, m.mul(mu));
                let col = *self
                    .index
                    .get(&key)
                    .expect("product lands in the piece basis");
                v.push((col, c.clone()));
            }
        }
        v.sort_by_key(|(c, _)| *c);
        merge_sorted(v)
    }
}

fn merge_sorted(v: SparseVec) -> SparseVec {
    let mut out: SparseVec = Vec::with_capacity(v.len());
    for (c, s) in v {
        match out.last_mut() {
            Some((lc, ls)) if *lc == c => *ls = ls.add(&s),
            _ => out.push((c, s)),
        }
    }
    out.retain(|(_, s)| !s.is_zero());
    out
}

fn monic_key(v: &SparseVec) -> SparseVec {
    match v.first() {
        Some((_, lc)) if !lc.is_one() => {
            let inv = lc.inv().expect("nonzero");
            v.iter().map(|(c, s)| (*c, s.mul(&inv))).collect()
        }
        _ => v.clone(),
    }
}

/// Spanning vectors of `K` in the piece.
fn relation_vectors(m: &ModulePresentation, basis: &PieceBasis) -> Vec<SparseVec> {
    let ring = m.ring();
    let mut out = Vec::new();
    for rel in &m.relations {
        let Some(rest) = basis.degree.checked_sub(rel.degree) else {
            continue;
        };
        let entries: Vec<(usize, &Polynomial)> = rel
            .entries
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .collect();
        for mu in monomial_basis(ring, rest) {
            let v = basis.vector(&entries, &mu);
            if !v.is_empty() {
                out.push(v);
            }
        }
    }
    out
}

/// Spanning vectors of `Σ_h h·F` in the piece, deduplicated up to scalars.
/// The span is closed under multiplication by base variables because every
/// multiplier monomial of the right bidegree is used.
fn generated_vectors(
    m: &ModulePresentation,
    basis: &PieceBasis,
    gens: &[Polynomial],
) -> Vec<SparseVec> {
    let ring = m.ring();
    let mut seen: HashSet<SparseVec> = HashSet::new();
    let mut out = Vec::new();
    for h in gens {
        let Some(hd) = h.bidegree() else { continue };
        for (i, s) in m.free.shifts.iter().enumerate() {
            let Some(rest) = basis.degree.checked_sub(hd + *s) else {
                continue;
            };
            for mu in monomial_basis(ring, rest) {
                let v = basis.vector(&[(i, h)], &mu);
                if !v.is_empty() && seen.insert(monic_key(&v)) {
                    out.push(v);
                }
            }
        }
    }
    out
}

/// `dim_k (F/K)_(a,n)`.
pub fn piece_dimension(m: &ModulePresentation, deg: Bidegree) -> usize {
    let basis = PieceBasis::new(&m.free, deg);
    if basis.dim() == 0 {
        return 0;
    }
    let mut ech = Echelon::new(m.ring().field());
    for v in relation_vectors(m, &basis) {
        ech.insert(v);
    }
    basis.dim() - ech.rank()
}

/// Which of `elements` (each a single polynomial in the `e_0` slot of a
/// rank-one free module, all of bidegree `deg`) fail to lie in
/// `K + Σ_h h·F` at that bidegree. Returns their indices.
pub fn outside_span(
    m: &ModulePresentation,
    deg: Bidegree,
    gens: &[Polynomial],
    elements: &[&Polynomial],
) -> Vec<usize> {
    let basis = PieceBasis::new(&m.free, deg);
    let mut ech = Echelon::new(m.ring().field());
    for v in relation_vectors(m, &basis) {
        ech.insert(v);
    }
    for v in generated_vectors(m, &basis, gens) {
        ech.insert(v);
    }
    let one = Monomial::one(m.ring().num_vars());
    elements
        .iter()
        .enumerate()
        .filter(|(_, e)| !ech.contains(basis.vector(&[(0, e)], &one)))
        .map(|(k, _)| k)
        .collect()
}

/// The numerator of a subquotient of a fiber slice.
#[derive(Clone, Copy, Debug)]
pub enum Span<'a> {
    /// The whole slice `M_N`.
    Whole,
    /// `Σ_h h·M_(N - deg h)` over the listed bihomogeneous generators.
    Generated(&'a [Polynomial]),
}

/// A length together with the evidence that the base-degree sum terminated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceLength {
    pub fiber_degree: u32,
    pub length: u64,
    /// Summand per base degree, from 0 up to and including `vanishes_from`.
    pub per_base_degree: Vec<u64>,
    /// The numerator is generated in base degrees `≤ generated_up_to`.
    pub generated_up_to: u32,
    /// First base degree `≥ generated_up_to` whose summand is zero.
    pub vanishes_from: u32,
}

fn generated_bound(m: &ModulePresentation, fiber: u32, num: Span<'_>) -> u32 {
    match num {
        Span::Whole => m.max_base_shift(fiber),
        Span::Generated(gens) => gens
            .iter()
            .filter_map(Polynomial::bidegree)
            .filter(|d| d.fiber <= fiber)
            .map(|d| d.base + m.max_base_shift(fiber - d.fiber))
            .max()
            .unwrap_or(0),
    }
}

/// `dim_k` of `(K + num + den)/(K + den)` in one bidegree.
pub fn subquotient_piece(
    m: &ModulePresentation,
    deg: Bidegree,
    num: Span<'_>,
    den: &[Polynomial],
) -> u64 {
    let basis = PieceBasis::new(&m.free, deg);
    if basis.dim() == 0 {
        return 0;
    }
    let mut ech = Echelon::new(m.ring().field());
    for v in relation_vectors(m, &basis) {
        ech.insert(v);
    }
    for v in generated_vectors(m, &basis, den) {
        ech.insert(v);
    }
    match num {
        Span::Whole => (basis.dim() - ech.rank()) as u64,
        Span::Generated(gens) => generated_vectors(m, &basis, gens)
            .into_iter()
            .filter(|v| ech.insert(v.clone()))
            .count() as u64,
    }
}

/// Length over the base ring of `(K + num + den)/(K + den)` inside the fiber
/// slice `F_fiber`, with a termination certificate.
///
/// Scans base degrees up to `max(cutoff, D)` where `D` bounds the generator
/// degrees of the numerator.
pub fn subquotient_length(
    m: &ModulePresentation,
    fiber: u32,
    num: Span<'_>,
    den: &[Polynomial],
    cutoff: u32,
) -> Result<SliceLength> {
    let bound = generated_bound(m, fiber, num);
    let limit = cutoff.max(bound);
    let mut per = Vec::new();
    for a in 0..=limit {
        let s = subquotient_piece(m, Bidegree::new(a, fiber), num, den);
        per.push(s);
        if s == 0 && a >= bound {
            return Ok(SliceLength {
                fiber_degree: fiber,
                length: per.iter().sum(),
                per_base_degree: per,
                generated_up_to: bound,
                vanishes_from: a,
            });
        }
    }
    Err(Error::InfiniteOrCutoff {
        fiber_degree: fiber,
        cutoff: limit,
    })
}

/// Length of `M_n / S` where `S` is spanned by `extra·M` (each generator's
/// fiber degree tells which slice it multiplies). Errors with
/// [`Error::InfiniteOrCutoff`] when no vanishing base degree is found.
pub fn quotient_fiber_length(
    m: &ModulePresentation,
    extra: &[Polynomial],
    fiber_deg: u32,
    cutoff: u32,
) -> Result<SliceLength> {
    subquotient_length(m, fiber_deg, Span::Whole, extra, cutoff)
}

/// `n ↦ Σ_{a+b=n} dim M_(a,b)` for `n ≤ horizon`.
pub fn total_hilbert_function(m: &ModulePresentation, horizon: u32) -> Vec<u64> {
    (0..=horizon)
        .map(|t| {
            (0..=t)
                .map(|a| piece_dimension(m, Bidegree::new(a, t - a)) as u64)
                .sum()
        })
        .collect()
}

fn default_horizon(m: &ModulePresentation) -> u32 {
    let ring: &RingSpec = m.ring();
    let max_deg = m
        .free
        .shifts
        .iter()
        .map(|s| s.base + s.fiber)
        .chain(m.relations.iter().map(|r| r.degree.base + r.degree.fiber))
        .max()
        .unwrap_or(0);
    max_deg + 2 * ring.num_vars() as u32 + 6
}

/// Krull dimension of `M` over the totally graded ring: one plus the degree
/// of the eventual polynomial of the total Hilbert function, 0 if that
/// function is eventually zero.
pub fn krull_dimension(m: &ModulePresentation) -> Result<u32> {
    krull_dimension_with_horizon(m, default_horizon(m))
}

pub fn krull_dimension_with_horizon(m: &ModulePresentation, horizon: u32) -> Result<u32> {
    let h = total_hilbert_function(m, horizon);
    if h.iter().all(|&v| v == 0) {
        return Err(Error::ZeroModule);
    }
    let table = LengthTable::from_u64(vec!["t".into()], vec![h.len()], &h)?;
    let tail = h[h.len().saturating_sub(3)..].iter().all(|&v| v == 0);
    if tail {
        return Ok(0);
    }
    Ok(total_degree_estimate(&table, 2)? + 1)
}
