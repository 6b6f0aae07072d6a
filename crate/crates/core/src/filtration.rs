//! The mixed filtration `I^{p,q}_ν` and the filtration factors whose lengths
//! sum to the quotient lengths of the Buchsbaum-Rim pipelines.
//!
//! Level `ν` of the `(p, q)` filtration is the sum of the products
//! `I_1^i I_2^j` over `i ≤ p`, `j ≤ q`, `i + j ≥ p + q - ν`; it increases
//! from `I_1^p I_2^q` at `ν = 0` to the unit at `ν = p + q`.
//!
//! With twists, the term `H_1^i H_2^j` of a level lives in fiber degree
//! `d_1 i + d_2 j` and multiplies the slice `M_(N - d_1 i - d_2 j)`, so all
//! terms land in the same slice `M_N`. Membership is decided by linear span
//! in each bidegree.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graded_module::{
    outside_span, subquotient_length, ModulePresentation, SliceLength, Span,
};
use crate::ring::{
    dedup_generators, monomial_basis, Bidegree, Polynomial, ProductTable, SubmoduleSpec,
};

/// One level `I^{p,q}_ν`, as a plain generator list (fiber degrees may vary
/// between terms when `d_1 ≠ d_2`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedFiltrationLevel {
    pub p: u32,
    pub q: u32,
    pub nu: u32,
    pub gens: Vec<Polynomial>,
}

/// The index set `{(i, j) : i ≤ p, j ≤ q, i + j ≥ p + q - ν}`.
pub fn level_index_set(p: u32, q: u32, nu: u32) -> Vec<(u32, u32)> {
    let floor = (p + q).saturating_sub(nu);
    let mut out = Vec::new();
    for i in (0..=p).rev() {
        for j in (0..=q).rev() {
            if i + j >= floor {
                out.push((i, j));
            }
        }
    }
    out
}

fn level_from_table(table: &ProductTable, p: u32, q: u32, nu: u32) -> Vec<Polynomial> {
    if nu >= p + q {
        return SubmoduleSpec::unit(table.get(0, 0).ring()).gens().to_vec();
    }
    let gens = level_index_set(p, q, nu)
        .into_iter()
        .flat_map(|(i, j)| table.get(i, j).gens().to_vec())
        .collect();
    dedup_generators(gens)
}

pub fn mixed_level(
    i1: &SubmoduleSpec,
    i2: &SubmoduleSpec,
    p: u32,
    q: u32,
    nu: u32,
) -> Result<MixedFiltrationLevel> {
    let table = ProductTable::new(i1, i2, p, q)?;
    Ok(MixedFiltrationLevel {
        p,
        q,
        nu,
        gens: level_from_table(&table, p, q, nu),
    })
}

/// A generator that should lie in an ideal but does not.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InclusionWitness {
    /// `'a'` for `I_1 I_2 I^{p,q}_ν ⊆ I^{p,q}_{ν-1}`, `'b'` for
    /// `I^{p,q}_ν ⊆ I^{p-1,q-1}_{ν-1}`.
    pub inclusion: char,
    pub nu: u32,
    pub bidegree: Bidegree,
    pub generator: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NuInclusion {
    pub nu: u32,
    pub first_holds: bool,
    pub second_holds: bool,
    /// Generators skipped because their bidegree exceeds the bound.
    pub skipped: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InclusionReport {
    pub p: u32,
    pub q: u32,
    pub per_nu: Vec<NuInclusion>,
    /// The first failing generator for each failing `(ν, inclusion)` pair.
    pub witnesses: Vec<InclusionWitness>,
}

impl InclusionReport {
    pub fn passed(&self) -> bool {
        self.per_nu.iter().all(|r| r.first_holds && r.second_holds)
    }
}

/// Checks both inclusions for every `1 ≤ ν ≤ p + q`, generator by generator,
/// in the ring itself. Generators of bidegree beyond `bound` (either
/// component) are skipped and counted.
pub fn check_filtration_inclusions(
    i1: &SubmoduleSpec,
    i2: &SubmoduleSpec,
    p: u32,
    q: u32,
    bound: Bidegree,
) -> Result<InclusionReport> {
    let table = ProductTable::new(i1, i2, p, q)?;
    check_inclusions_with(i1, i2, p, q, bound, |a, b, nu| {
        level_from_table(&table, a, b, nu)
    })
}

/// [`check_filtration_inclusions`] with a caller-supplied level builder.
pub fn check_inclusions_with(
    i1: &SubmoduleSpec,
    i2: &SubmoduleSpec,
    p: u32,
    q: u32,
    bound: Bidegree,
    level: impl Fn(u32, u32, u32) -> Vec<Polynomial>,
) -> Result<InclusionReport> {
    if p == 0 || q == 0 {
        return Err(Error::Precondition(format!(
            "inclusions need p, q ≥ 1, got ({p}, {q})"
        )));
    }
    let ring = ModulePresentation::free_ring(i1.ring());
    let i12 = i1.product(i2)?;
    let mut per_nu = Vec::new();
    let mut witnesses = Vec::new();
    for nu in 1..=p + q {
        let current = level(p, q, nu);
        let mut lhs_a = Vec::new();
        for a in i12.gens() {
            for b in &current {
                lhs_a.push(a.multiply(b)?);
            }
        }
        let lhs_a = dedup_generators(lhs_a);
        let (first_holds, skipped_a, wa) =
            generators_in_span(&ring, &lhs_a, &level(p, q, nu - 1), bound, 'a', nu);
        let (second_holds, skipped_b, wb) = generators_in_span(
            &ring,
            &current,
            &level(p - 1, q - 1, nu - 1),
            bound,
            'b',
            nu,
        );
        witnesses.extend(wa);
        witnesses.extend(wb);
        per_nu.push(NuInclusion {
            nu,
            first_holds,
            second_holds,
            skipped: skipped_a + skipped_b,
        });
    }
    Ok(InclusionReport {
        p,
        q,
        per_nu,
        witnesses,
    })
}

fn generators_in_span(
    ring: &ModulePresentation,
    lhs: &[Polynomial],
    rhs: &[Polynomial],
    bound: Bidegree,
    inclusion: char,
    nu: u32,
) -> (bool, usize, Option<InclusionWitness>) {
    let mut by_degree: BTreeMap<Bidegree, Vec<&Polynomial>> = BTreeMap::new();
    let mut skipped = 0;
    for g in lhs {
        match g.bidegree() {
            Some(d) if d.base <= bound.base && d.fiber <= bound.fiber => {
                by_degree.entry(d).or_default().push(g)
            }
            _ => skipped += 1,
        }
    }
    for (deg, gens) in by_degree {
        if let Some(&k) = outside_span(ring, deg, rhs, &gens).first() {
            return (
                false,
                skipped,
                Some(InclusionWitness {
                    inclusion,
                    nu,
                    bidegree: deg,
                    generator: gens[k].to_string(),
                }),
            );
        }
    }
    (true, skipped, None)
}

/// `I + m^{k+1}`, the ideal of the `k`-th infinitesimal neighborhood of the
/// closed point inside the subscheme cut out by the base ideal `I`.
pub fn neighborhood_modulus(i: &SubmoduleSpec, k: u32) -> Result<SubmoduleSpec> {
    if i.fiber_degree() != 0 {
        return Err(Error::Precondition(
            "neighborhood of a non-ideal submodule".into(),
        ));
    }
    let ring = i.ring();
    let mut gens = i.gens().to_vec();
    for m in monomial_basis(ring, Bidegree::new(k + 1, 0)) {
        gens.push(Polynomial::monomial(ring, m, ring.field().one()));
    }
    SubmoduleSpec::new(ring, 0, dedup_generators(gens))
}

/// Length of `I^i M / (I^{i+1} M + modulus·I^i M)` in fiber slice `fiber`,
/// with its per-base-degree dimensions.
pub fn assoc_graded_piece_dims(
    i: &SubmoduleSpec,
    m: &ModulePresentation,
    modulus: &SubmoduleSpec,
    index: u32,
    fiber: u32,
    cutoff: u32,
) -> Result<SliceLength> {
    if i.fiber_degree() != 0 || modulus.fiber_degree() != 0 {
        return Err(Error::Precondition(
            "associated graded pieces need base ideals (fiber degree 0)".into(),
        ));
    }
    let powers = ProductTable::powers(i, index + 1);
    assoc_graded_from_powers(&powers, m, modulus, index, fiber, cutoff)
}

pub(crate) fn assoc_graded_from_powers(
    powers: &ProductTable,
    m: &ModulePresentation,
    modulus: &SubmoduleSpec,
    index: u32,
    fiber: u32,
    cutoff: u32,
) -> Result<SliceLength> {
    let num = powers.get(index, 0);
    let mut den = powers.get(index + 1, 0).gens().to_vec();
    den.extend_from_slice(modulus.product(num)?.gens());
    subquotient_length(m, fiber, Span::Generated(num.gens()), &den, cutoff)
}

/// Lengths of the `p + 1` factors
/// `H^ν M_(d(p-ν)+n) / H^{ν+1} M_(d(p-ν-1)+n)`, `ν = 0..=p`, of the
/// filtration of `M_(dp+n) / H^{p+1} M_(n-d)`. Slices of negative degree are
/// zero.
pub fn telescoping_factor_dims(
    m: &ModulePresentation,
    h: &SubmoduleSpec,
    p: u32,
    n: u32,
    cutoff: u32,
) -> Result<Vec<SliceLength>> {
    let powers = ProductTable::powers(h, p + 1);
    factor_dims_from_powers(&powers, m, h.fiber_degree(), p, n, cutoff)
}

pub(crate) fn factor_dims_from_powers(
    powers: &ProductTable,
    m: &ModulePresentation,
    d: u32,
    p: u32,
    n: u32,
    cutoff: u32,
) -> Result<Vec<SliceLength>> {
    let slice = d * p + n;
    (0..=p)
        .map(|nu| {
            subquotient_length(
                m,
                slice,
                Span::Generated(powers.get(nu, 0).gens()),
                powers.get(nu + 1, 0).gens(),
                cutoff,
            )
        })
        .collect()
}

/// Lengths of the `p + q + 1` factors of the mixed filtration of
/// `M_(d_1 p + d_2 q + n) / H_1^{p+1} H_2^{q+1} M_(n - d_1 - d_2)`: first
/// `I^{p,q}_0 M` over the bottom, then `I^{p,q}_ν M / I^{p,q}_{ν-1} M`.
/// `table` must hold products up to `(p + 1, q + 1)`.
#[allow(clippy::too_many_arguments)]
pub fn mixed_factor_dims(
    table: &ProductTable,
    m: &ModulePresentation,
    d1: u32,
    d2: u32,
    p: u32,
    q: u32,
    n: u32,
    cutoff: u32,
) -> Result<Vec<SliceLength>> {
    let slice = d1 * p + d2 * q + n;
    let mut out = Vec::with_capacity((p + q + 1) as usize);
    let bottom = table.get(p + 1, q + 1).gens();
    let level0 = level_from_table(table, p, q, 0);
    out.push(subquotient_length(
        m,
        slice,
        Span::Generated(&level0),
        bottom,
        cutoff,
    )?);
    let mut prev = level0;
    for nu in 1..=p + q {
        let cur = level_from_table(table, p, q, nu);
        out.push(subquotient_length(
            m,
            slice,
            Span::Generated(&cur),
            &prev,
            cutoff,
        )?);
        prev = cur;
    }
    Ok(out)
}
