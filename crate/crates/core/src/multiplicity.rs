//! End-to-end pipelines: length tables `λ(p,n)`, `λ(p,q,n)` and `λ(n)`, and
//! the multiplicities read off their leading forms.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::filtration::{assoc_graded_from_powers, neighborhood_modulus};
use crate::graded_module::{
    krull_dimension, subquotient_length, ModulePresentation, SliceLength, Span, DEFAULT_CUTOFF,
};
use crate::polyfit::{
    grid_points, leading_form, total_degree_estimate, LeadingForm, LengthTable, DEFAULT_WINDOW,
};
use crate::ring::{same_ring, ProductTable, SubmoduleSpec};

/// Evaluation knobs shared by every query.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Settings {
    pub cutoff: u32,
    pub window: usize,
    /// Points per axis; `None` means `r + 5`.
    pub grid: Option<usize>,
    pub parallel: bool,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            cutoff: DEFAULT_CUTOFF,
            window: DEFAULT_WINDOW,
            grid: None,
            parallel: true,
        }
    }
}

/// Where the `r` of a report came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RSource {
    Explicit,
    /// Krull dimension of `M` minus one, for rings with fiber variables.
    KrullMinusOne,
    Krull,
}

impl RSource {
    pub fn as_str(self) -> &'static str {
        match self {
            RSource::Explicit => "explicit",
            RSource::KrullMinusOne => "krull-dimension-minus-one",
            RSource::Krull => "krull-dimension",
        }
    }
}

#[derive(Clone, Debug)]
pub struct PureQuery {
    pub module: ModulePresentation,
    pub h: SubmoduleSpec,
    pub r: Option<u32>,
    pub settings: Settings,
}

#[derive(Clone, Debug)]
pub struct MixedQuery {
    pub module: ModulePresentation,
    pub h1: SubmoduleSpec,
    pub h2: SubmoduleSpec,
    pub r: Option<u32>,
    pub settings: Settings,
}

/// A base ideal `I` on a module over a ring without fiber variables.
#[derive(Clone, Debug)]
pub struct LocalQuery {
    pub module: ModulePresentation,
    pub ideal: SubmoduleSpec,
    /// Neighborhood order; `None` means `r + 2`.
    pub k: Option<u32>,
    pub r: Option<u32>,
    pub settings: Settings,
}

impl PureQuery {
    pub fn new(module: ModulePresentation, h: SubmoduleSpec) -> Self {
        PureQuery {
            module,
            h,
            r: None,
            settings: Settings::default(),
        }
    }
}

impl MixedQuery {
    pub fn new(module: ModulePresentation, h1: SubmoduleSpec, h2: SubmoduleSpec) -> Self {
        MixedQuery {
            module,
            h1,
            h2,
            r: None,
            settings: Settings::default(),
        }
    }
}

impl LocalQuery {
    pub fn new(module: ModulePresentation, ideal: SubmoduleSpec) -> Self {
        LocalQuery {
            module,
            ideal,
            k: None,
            r: None,
            settings: Settings::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct MultiplicityReport {
    pub table: LengthTable,
    pub leading_form: LeadingForm,
    pub r: u32,
    pub r_source: RSource,
    /// Smallest total degree consistent with the table; at most `r`.
    pub degree_estimate: u32,
    /// Window base from which the leading form is stable.
    pub stabilization_base: usize,
    /// Per table cell, the base degree at which its length sum stopped.
    pub finiteness_stops: Vec<u32>,
    pub grid_enlarged: bool,
    pub wall_time: Duration,
}

/// A generalized Samuel multiplicity with the table it came from.
#[derive(Clone, Debug)]
pub struct SamuelReport {
    pub e: BigInt,
    pub k: u32,
    /// The table and leading form at `k`.
    pub report: MultiplicityReport,
    /// The same coefficient at `k + 1`.
    pub e_at_k_plus_one: BigInt,
}

/// The `r` to use: `explicit`, else the Krull dimension of `M`, minus one
/// when the ring has fiber variables.
pub fn resolve_r(module: &ModulePresentation, explicit: Option<u32>) -> Result<(u32, RSource)> {
    if let Some(r) = explicit {
        return Ok((r, RSource::Explicit));
    }
    let dim = krull_dimension(module)?;
    if module.ring().num_fiber() > 0 {
        Ok((dim.saturating_sub(1), RSource::KrullMinusOne))
    } else {
        Ok((dim, RSource::Krull))
    }
}

fn is_zero_module(m: &ModulePresentation) -> bool {
    matches!(krull_dimension(m), Err(Error::ZeroModule))
}

fn check_submodule(m: &ModulePresentation, h: &SubmoduleSpec, name: &str) -> Result<()> {
    if !same_ring(m.ring(), h.ring()) {
        return Err(Error::RingMismatch);
    }
    if h.is_zero() && !is_zero_module(m) {
        return Err(Error::SupportCondition(format!(
            "{name} has no generators while M is nonzero, so its zero locus meets Supp M outside the closed fiber"
        )));
    }
    Ok(())
}

fn support_diagnostic(err: Error, cell: &[u32]) -> Error {
    match err {
        Error::InfiniteOrCutoff {
            fiber_degree,
            cutoff,
        } => Error::SupportCondition(format!(
            "length at {cell:?} (fiber degree {fiber_degree}) not finite by base degree {cutoff}; \
             the support condition likely fails (or raise --cutoff)"
        )),
        e => e,
    }
}

fn map_cells<T: Send>(
    points: &[Vec<usize>],
    parallel: bool,
    f: impl Fn(&[usize]) -> Result<T> + Sync + Send,
) -> Result<Vec<T>> {
    let results: Vec<Result<T>> = if parallel {
        points.par_iter().map(|p| f(p)).collect()
    } else {
        points.iter().map(|p| f(p)).collect()
    };
    results.into_iter().collect()
}

fn assemble(
    axes: &[&str],
    extents: Vec<usize>,
    cells: Vec<SliceLength>,
) -> Result<(LengthTable, Vec<u32>)> {
    let stops = cells.iter().map(|c| c.vanishes_from).collect();
    let values = cells.iter().map(|c| BigInt::from(c.length)).collect();
    let table = LengthTable::new(
        axes.iter().map(|s| s.to_string()).collect(),
        extents,
        values,
    )?;
    Ok((table, stops))
}

/// Runs `build` on the default (or configured) extent, then once more two
/// points larger per axis if the leading form is not yet readable.
fn fit_with_retry(
    r: u32,
    settings: &Settings,
    build: impl Fn(usize) -> Result<(LengthTable, Vec<u32>)>,
) -> Result<(LengthTable, Vec<u32>, LeadingForm, bool)> {
    let extent = settings.grid.unwrap_or(r as usize + 5);
    let (table, stops) = build(extent)?;
    match leading_form(&table, r, settings.window) {
        Ok(lf) => Ok((table, stops, lf, false)),
        Err(Error::DegreeExceeds { .. } | Error::GridTooSmall(_)) => {
            let (table, stops) = build(extent + 2)?;
            let lf = leading_form(&table, r, settings.window)?;
            Ok((table, stops, lf, true))
        }
        Err(e) => Err(e),
    }
}

fn finish(
    started: Instant,
    r: u32,
    r_source: RSource,
    settings: &Settings,
    (table, finiteness_stops, leading_form, grid_enlarged): (
        LengthTable,
        Vec<u32>,
        LeadingForm,
        bool,
    ),
) -> Result<MultiplicityReport> {
    let degree_estimate = total_degree_estimate(&table, settings.window)?;
    if degree_estimate > r {
        return Err(Error::DegreeExceeds {
            r,
            order: vec![degree_estimate],
            point: vec![],
            value: "nonzero".into(),
        });
    }
    Ok(MultiplicityReport {
        stabilization_base: leading_form.base_point,
        table,
        leading_form,
        r,
        r_source,
        degree_estimate,
        finiteness_stops,
        grid_enlarged,
        wall_time: started.elapsed(),
    })
}

pub(crate) fn pure_cell(
    m: &ModulePresentation,
    powers: &ProductTable,
    d: u32,
    p: u32,
    n: u32,
    cutoff: u32,
) -> Result<SliceLength> {
    subquotient_length(m, d * p + n, Span::Whole, powers.get(p, 0).gens(), cutoff)
}

pub(crate) fn mixed_cell(
    m: &ModulePresentation,
    table: &ProductTable,
    (d1, d2): (u32, u32),
    p: u32,
    q: u32,
    n: u32,
    cutoff: u32,
) -> Result<SliceLength> {
    let slice = d1 * p + d2 * q + n;
    subquotient_length(m, slice, Span::Whole, table.get(p, q).gens(), cutoff)
}

/// `λ(p,n) = len(M_(pd+n) / H^p M_n)` with its finiteness certificate.
pub fn lambda_pure(q: &PureQuery, p: u32, n: u32) -> Result<SliceLength> {
    check_submodule(&q.module, &q.h, "H")?;
    let powers = ProductTable::powers(&q.h, p);
    pure_cell(
        &q.module,
        &powers,
        q.h.fiber_degree(),
        p,
        n,
        q.settings.cutoff,
    )
    .map_err(|e| support_diagnostic(e, &[p, n]))
}

/// `λ(p,n)` on `[0, extent)²` with the per-cell finiteness stops.
pub fn lambda_pure_table(q: &PureQuery, extent: usize) -> Result<(LengthTable, Vec<u32>)> {
    check_submodule(&q.module, &q.h, "H")?;
    let powers = ProductTable::powers(&q.h, extent as u32);
    let d = q.h.fiber_degree();
    let points = grid_points(&[extent, extent]);
    let cells = map_cells(&points, q.settings.parallel, |pt| {
        let (p, n) = (pt[0] as u32, pt[1] as u32);
        pure_cell(&q.module, &powers, d, p, n, q.settings.cutoff)
            .map_err(|e| support_diagnostic(e, &[p, n]))
    })?;
    assemble(&["p", "n"], vec![extent, extent], cells)
}

/// The e-values `e^{i,k}`, `i + k = r`, of `λ(p,n)`.
pub fn br_multiplicities(q: &PureQuery) -> Result<MultiplicityReport> {
    let started = Instant::now();
    check_submodule(&q.module, &q.h, "H")?;
    let (r, src) = resolve_r(&q.module, q.r)?;
    let fitted = fit_with_retry(r, &q.settings, |ext| lambda_pure_table(q, ext))?;
    finish(started, r, src, &q.settings, fitted)
}

fn check_mixed(q: &MixedQuery) -> Result<()> {
    check_submodule(&q.module, &q.h1, "H1")?;
    check_submodule(&q.module, &q.h2, "H2")
}

/// `λ(p,q,n) = len(M_(d_1 p + d_2 q + n) / H_1^p H_2^q M_n)`.
pub fn lambda_mixed(q: &MixedQuery, p: u32, q2: u32, n: u32) -> Result<SliceLength> {
    check_mixed(q)?;
    let table = ProductTable::new(&q.h1, &q.h2, p, q2)?;
    let d = (q.h1.fiber_degree(), q.h2.fiber_degree());
    mixed_cell(&q.module, &table, d, p, q2, n, q.settings.cutoff)
        .map_err(|e| support_diagnostic(e, &[p, q2, n]))
}

/// `λ(p,q,n)` on `[0, extent)³` with the per-cell finiteness stops.
pub fn lambda_mixed_table(q: &MixedQuery, extent: usize) -> Result<(LengthTable, Vec<u32>)> {
    check_mixed(q)?;
    let top = extent as u32;
    let products = ProductTable::new(&q.h1, &q.h2, top, top)?;
    let d = (q.h1.fiber_degree(), q.h2.fiber_degree());
    let points = grid_points(&[extent, extent, extent]);
    let cells = map_cells(&points, q.settings.parallel, |pt| {
        let (p, q2, n) = (pt[0] as u32, pt[1] as u32, pt[2] as u32);
        mixed_cell(&q.module, &products, d, p, q2, n, q.settings.cutoff)
            .map_err(|e| support_diagnostic(e, &[p, q2, n]))
    })?;
    assemble(&["p", "q", "n"], vec![extent, extent, extent], cells)
}

/// The e-values `e^{i,j,k}`, `i + j + k = r`, of `λ(p,q,n)`.
pub fn mixed_br_multiplicities(q: &MixedQuery) -> Result<MultiplicityReport> {
    let started = Instant::now();
    check_mixed(q)?;
    let (r, src) = resolve_r(&q.module, q.r)?;
    let fitted = fit_with_retry(r, &q.settings, |ext| lambda_mixed_table(q, ext))?;
    finish(started, r, src, &q.settings, fitted)
}

fn check_local(q: &LocalQuery) -> Result<()> {
    if !same_ring(q.module.ring(), q.ideal.ring()) {
        return Err(Error::RingMismatch);
    }
    if q.module.ring().num_fiber() > 0 {
        return Err(Error::Precondition(
            "local queries need a ring without fiber variables".into(),
        ));
    }
    if q.ideal.fiber_degree() != 0 {
        return Err(Error::Precondition(
            "the local ideal must have fiber degree 0".into(),
        ));
    }
    Ok(())
}

/// Lengths of the associated graded pieces `i = 0..extent` modulo
/// `I + m^{k+1}`, prefix-summed into `λ(0), λ(1), ...`.
pub fn lambda_local_table(
    q: &LocalQuery,
    k: u32,
    extent: usize,
) -> Result<(LengthTable, Vec<u32>)> {
    check_local(q)?;
    let powers = ProductTable::powers(&q.ideal, extent as u32);
    let modulus = neighborhood_modulus(&q.ideal, k)?;
    let idx: Vec<Vec<usize>> = (0..extent).map(|i| vec![i]).collect();
    let pieces = map_cells(&idx, q.settings.parallel, |i| {
        assoc_graded_from_powers(
            &powers,
            &q.module,
            &modulus,
            i[0] as u32,
            0,
            q.settings.cutoff,
        )
    })?;
    let mut acc = 0u64;
    let mut values = Vec::with_capacity(extent);
    let mut stops = Vec::with_capacity(extent);
    for piece in &pieces {
        acc += piece.length;
        values.push(BigInt::from(acc));
        stops.push(piece.vanishes_from);
    }
    Ok((
        LengthTable::new(vec!["n".into()], vec![extent], values)?,
        stops,
    ))
}

/// `λ(n) = Σ_{i≤n} len(I^i M / (I^{i+1} M + (I + m^{k+1}) I^i M))`.
pub fn lambda_local(q: &LocalQuery, k: u32, n: u32) -> Result<u64> {
    check_local(q)?;
    let (table, _) = lambda_local_table(q, k, n as usize + 1)?;
    let v = table.values().last().expect("nonempty");
    Ok(v.try_into().expect("fits u64"))
}

fn local_report(q: &LocalQuery, r: u32, src: RSource, k: u32) -> Result<MultiplicityReport> {
    let started = Instant::now();
    let fitted = fit_with_retry(r, &q.settings, |ext| lambda_local_table(q, k, ext))?;
    finish(started, r, src, &q.settings, fitted)
}

/// `e(I, M)`: `r!` times the coefficient of `n^r` in `λ(n)`, required to
/// agree between `k` and `k + 1`.
pub fn generalized_samuel(q: &LocalQuery) -> Result<SamuelReport> {
    check_local(q)?;
    let (r, src) = resolve_r(&q.module, q.r)?;
    let k = q.k.unwrap_or(r + 2);
    let (at_k, at_k1) = if q.settings.parallel {
        rayon::join(
            || local_report(q, r, src, k),
            || local_report(q, r, src, k + 1),
        )
    } else {
        (local_report(q, r, src, k), local_report(q, r, src, k + 1))
    };
    let (at_k, at_k1) = (at_k?, at_k1?);
    let alpha = [r];
    let e = at_k.leading_form.e(&alpha).cloned().unwrap_or_default();
    let e1 = at_k1.leading_form.e(&alpha).cloned().unwrap_or_default();
    if e != e1 {
        return Err(Error::KInstability {
            k,
            at_k: e.to_string(),
            at_k_plus_one: e1.to_string(),
        });
    }
    Ok(SamuelReport {
        e,
        k,
        report: at_k,
        e_at_k_plus_one: e1,
    })
}

/// Whether `e(I, M) > 0`.
pub fn has_maximal_analytic_spread(q: &LocalQuery) -> Result<bool> {
    Ok(generalized_samuel(q)?.e.is_positive())
}

/// `len(M / I^{n+1} M)`.
pub fn samuel_function(
    m: &ModulePresentation,
    i: &SubmoduleSpec,
    n: u32,
    cutoff: u32,
) -> Result<u64> {
    let q = LocalQuery::new(m.clone(), i.clone());
    check_local(&q)?;
    let power = i.power(n + 1);
    Ok(subquotient_length(m, 0, Span::Whole, power.gens(), cutoff)?.length)
}

/// `n ↦ len(M / I^{n+1} M)` on `[0, extent)`.
pub fn samuel_table(q: &LocalQuery, extent: usize) -> Result<(LengthTable, Vec<u32>)> {
    check_local(q)?;
    let powers = ProductTable::powers(&q.ideal, extent as u32);
    let idx: Vec<Vec<usize>> = (0..extent).map(|i| vec![i]).collect();
    let cells = map_cells(&idx, q.settings.parallel, |n| {
        subquotient_length(
            &q.module,
            0,
            Span::Whole,
            powers.get(n[0] as u32 + 1, 0).gens(),
            q.settings.cutoff,
        )
    })?;
    assemble(&["n"], vec![extent], cells)
}

/// The classical Samuel multiplicity, read off `n ↦ len(M / I^{n+1} M)`.
/// Errors unless `I` is primary to the irrelevant ideal on `M`.
pub fn samuel_multiplicity(q: &LocalQuery) -> Result<MultiplicityReport> {
    let started = Instant::now();
    check_local(q)?;
    let (r, src) = resolve_r(&q.module, q.r)?;
    let fitted = fit_with_retry(r, &q.settings, |ext| samuel_table(q, ext))?;
    finish(started, r, src, &q.settings, fitted)
}

impl MultiplicityReport {
    /// `e_α`, zero when `α` is not of total degree `r`.
    pub fn e(&self, alpha: &[u32]) -> BigInt {
        self.leading_form
            .e(alpha)
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{Polynomial, Ring, RingSpec};
    use crate::scalar::Field;

    fn ring(base: &[&str], fiber: &[&str]) -> Ring {
        RingSpec::new(Field::Rational, base.to_vec(), fiber.to_vec()).unwrap()
    }

    fn mono(r: &Ring, d: u32, exps: &[&[u32]]) -> SubmoduleSpec {
        let gens = exps
            .iter()
            .map(|e| Polynomial::from_terms(r, &[(e, 1)]))
            .collect();
        SubmoduleSpec::new(r, d, gens).unwrap()
    }

    fn mf() -> PureQuery {
        let r = ring(&["x", "y"], &["u", "v"]);
        let h = mono(
            &r,
            1,
            &[&[1, 0, 1, 0], &[1, 0, 0, 1], &[0, 1, 1, 0], &[0, 1, 0, 1]],
        );
        PureQuery::new(ModulePresentation::free_ring(&r), h)
    }

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn lambda_of_mf() {
        let q = mf();
        assert_eq!(lambda_pure(&q, 2, 3).unwrap().length, 18);
        assert_eq!(lambda_pure(&q, 0, 5).unwrap().length, 0);
    }

    #[test]
    fn br_of_mf() {
        let rep = br_multiplicities(&mf()).unwrap();
        assert_eq!((rep.r, rep.r_source), (3, RSource::KrullMinusOne));
        assert_eq!(rep.e(&[3, 0]), big(3));
        assert_eq!(rep.e(&[2, 1]), big(1));
        assert_eq!(rep.e(&[1, 2]), big(0));
        assert_eq!(rep.e(&[0, 3]), big(0));
        assert!(rep.degree_estimate <= 3);
        assert!(!rep.grid_enlarged);
    }

    #[test]
    fn br_of_square_of_maximal_ideal() {
        let r = ring(&["x", "y"], &["T"]);
        let m2 = mono(&r, 0, &[&[2, 0, 0], &[1, 1, 0], &[0, 2, 0]]);
        let rep =
            br_multiplicities(&PureQuery::new(ModulePresentation::free_ring(&r), m2)).unwrap();
        assert_eq!(rep.r, 2);
        assert_eq!(rep.e(&[2, 0]), big(4));
        assert_eq!(rep.e(&[1, 1]), big(0));
        assert_eq!(rep.e(&[0, 2]), big(0));
    }

    #[test]
    fn empty_h_is_support_error() {
        let r = ring(&["x", "y"], &["T"]);
        let h = SubmoduleSpec::new(&r, 0, vec![]).unwrap();
        let q = PureQuery::new(ModulePresentation::free_ring(&r), h);
        assert_eq!(
            lambda_pure(&q, 1, 1).unwrap_err().kind(),
            "support-condition"
        );
        assert_eq!(
            br_multiplicities(&q).unwrap_err().kind(),
            "support-condition"
        );
    }

    #[test]
    fn non_primary_ideal_fails_support() {
        let r = ring(&["x", "y"], &["T"]);
        let h = mono(&r, 0, &[&[1, 0, 0]]);
        let mut q = PureQuery::new(ModulePresentation::free_ring(&r), h);
        q.settings.cutoff = 8;
        assert_eq!(
            lambda_pure(&q, 1, 0).unwrap_err().kind(),
            "support-condition"
        );
    }

    #[test]
    fn mixed_of_newton_pair() {
        let r = ring(&["x", "y"], &["T"]);
        let i1 = mono(&r, 0, &[&[1, 0, 0], &[0, 2, 0]]);
        let i2 = mono(&r, 0, &[&[2, 0, 0], &[0, 1, 0]]);
        let rep =
            mixed_br_multiplicities(&MixedQuery::new(ModulePresentation::free_ring(&r), i1, i2))
                .unwrap();
        assert_eq!(rep.e(&[2, 0, 0]), big(2));
        assert_eq!(rep.e(&[1, 1, 0]), big(1));
        assert_eq!(rep.e(&[0, 2, 0]), big(2));
        for alpha in [[1, 0, 1], [0, 1, 1], [0, 0, 2]] {
            assert_eq!(rep.e(&alpha), big(0));
        }
    }

    #[test]
    fn serial_and_parallel_agree() {
        let mut q = mf();
        q.settings.parallel = false;
        let a = br_multiplicities(&q).unwrap();
        q.settings.parallel = true;
        let b = br_multiplicities(&q).unwrap();
        assert_eq!(a.table, b.table);
        assert_eq!(a.leading_form, b.leading_form);
        assert_eq!(a.finiteness_stops, b.finiteness_stops);
    }

    #[test]
    fn understated_r_is_enlarged_then_rejected() {
        let mut q = mf();
        q.r = Some(2);
        assert_eq!(
            br_multiplicities(&q).unwrap_err().kind(),
            "degree-exceeds-r"
        );
    }

    fn local(exps: &[&[u32]]) -> LocalQuery {
        let r = ring(&["x", "y"], &[]);
        LocalQuery::new(ModulePresentation::free_ring(&r), mono(&r, 0, exps))
    }

    #[test]
    fn local_lambda_values() {
        let q = local(&[&[1, 0], &[0, 1]]);
        for n in 0..4 {
            assert_eq!(
                lambda_local(&q, 1, n).unwrap(),
                ((n + 1) * (n + 2) / 2) as u64
            );
        }
        let q = local(&[&[1, 0]]);
        for n in 0..4 {
            assert_eq!(lambda_local(&q, 2, n).unwrap(), 3 * (n as u64 + 1));
        }
        let r = ring(&["x", "y"], &[]);
        let unit = LocalQuery::new(ModulePresentation::free_ring(&r), SubmoduleSpec::unit(&r));
        assert_eq!(lambda_local(&unit, 3, 3).unwrap(), 0);
    }

    #[test]
    fn generalized_samuel_values() {
        let cases: [(&[&[u32]], i64, bool); 3] = [
            (&[&[1, 0], &[0, 1]], 1, true),
            (&[&[1, 0]], 0, false),
            (&[&[2, 0], &[0, 2]], 4, true),
        ];
        for (gens, e, spread) in cases {
            let q = local(gens);
            let rep = generalized_samuel(&q).unwrap();
            assert_eq!(rep.e, big(e));
            assert_eq!(rep.report.r_source, RSource::Krull);
            assert_eq!(has_maximal_analytic_spread(&q).unwrap(), spread);
        }
    }

    #[test]
    fn samuel_function_values() {
        let r = ring(&["x", "y"], &[]);
        let a = ModulePresentation::free_ring(&r);
        let m = mono(&r, 0, &[&[1, 0], &[0, 1]]);
        for n in 0..4 {
            assert_eq!(
                samuel_function(&a, &m, n, 64).unwrap(),
                ((n + 1) * (n + 2) / 2) as u64
            );
        }
        let sq = mono(&r, 0, &[&[2, 0], &[0, 2]]);
        assert_eq!(samuel_function(&a, &sq, 0, 64).unwrap(), 4);
        let x = mono(&r, 0, &[&[1, 0]]);
        assert_eq!(
            samuel_function(&a, &x, 1, 16).unwrap_err().kind(),
            "infinite-or-cutoff"
        );
        let rep = samuel_multiplicity(&LocalQuery::new(a, sq)).unwrap();
        assert_eq!(rep.e(&[2]), big(4));
    }
}
