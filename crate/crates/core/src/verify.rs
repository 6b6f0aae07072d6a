//! Checks that compute both sides of an identity by independent routes and
//! compare them exactly.

use std::fmt;

use num_bigint::BigInt;
use num_integer::binomial;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::filtration::{check_filtration_inclusions, factor_dims_from_powers, mixed_factor_dims};
use crate::graded_module::{subquotient_length, ModulePresentation, SliceLength, Span};
use crate::multiplicity::{
    br_multiplicities, mixed_br_multiplicities, resolve_r, MixedQuery, MultiplicityReport,
    PureQuery, Settings,
};
use crate::polyfit::{degree_bound_witness, grid_points, total_degree_estimate, LengthTable};
use crate::ring::{
    compositions, Bidegree, Polynomial, ProductTable, Ring, RingSpec, SubmoduleSpec,
};
use crate::scalar::Field;

/// One compared quantity. Lengths that are not certified finite compare
/// equal to each other and to nothing else.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Int(BigInt),
    NotFinite,
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(v) => write!(f, "{v}"),
            Value::NotFinite => f.write_str("not-finite"),
        }
    }
}

impl From<BigInt> for Value {
    fn from(v: BigInt) -> Self {
        Value::Int(v)
    }
}

/// The first disagreement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub at: String,
    pub lhs: Value,
    pub rhs: Value,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub theorem: &'static str,
    pub instance: String,
    /// `(label, left value, right value)` for every compared quantity.
    pub compared: Vec<(String, Value, Value)>,
    pub passed: bool,
    pub witness: Option<Witness>,
}

impl VerificationReport {
    fn from_pairs(
        theorem: &'static str,
        instance: String,
        compared: Vec<(String, Value, Value)>,
    ) -> Self {
        let witness = compared
            .iter()
            .find(|(_, l, r)| l != r)
            .map(|(at, l, r)| Witness {
                at: at.clone(),
                lhs: l.clone(),
                rhs: r.clone(),
            });
        VerificationReport {
            theorem,
            instance,
            passed: witness.is_none(),
            compared,
            witness,
        }
    }
}

pub fn describe_ring(ring: &RingSpec) -> String {
    let field = match ring.field() {
        Field::Rational => "Q".to_string(),
        Field::Prime(p) => format!("F{p}"),
    };
    format!(
        "{field}[{};{}]",
        ring.base_names().join(","),
        ring.fiber_names().join(",")
    )
}

pub fn describe_submodule(h: &SubmoduleSpec) -> String {
    let gens: Vec<String> = h.gens().iter().map(Polynomial::to_string).collect();
    format!("<{}> (d={})", gens.join(", "), h.fiber_degree())
}

fn describe_module(m: &ModulePresentation) -> String {
    let shifts: Vec<String> = m.free().shifts().iter().map(Bidegree::to_string).collect();
    format!(
        "M over {} free {} shifts {} with {} relations",
        describe_ring(m.ring()),
        m.free().rank(),
        shifts.join(" "),
        m.relations().len()
    )
}

fn describe_pair(m: &ModulePresentation, h1: &SubmoduleSpec, h2: &SubmoduleSpec) -> String {
    format!(
        "{}; H1 = {}; H2 = {}",
        describe_module(m),
        describe_submodule(h1),
        describe_submodule(h2)
    )
}

fn length_value(r: Result<SliceLength>) -> Result<Value> {
    match r {
        Ok(l) => Ok(Value::Int(BigInt::from(l.length))),
        Err(Error::InfiniteOrCutoff { .. }) => Ok(Value::NotFinite),
        Err(e) => Err(e),
    }
}

fn sum_value(parts: Result<Vec<SliceLength>>) -> Result<Value> {
    match parts {
        Ok(ls) => Ok(Value::Int(ls.iter().map(|l| BigInt::from(l.length)).sum())),
        Err(Error::InfiniteOrCutoff { .. }) => Ok(Value::NotFinite),
        Err(e) => Err(e),
    }
}

fn resolve_shared_r(m: &ModulePresentation, r: Option<u32>) -> Result<Option<u32>> {
    Ok(Some(resolve_r(m, r)?.0))
}

/// `e^{n,k}(H_1 H_2) = Σ_{i+j=n} C(n,i) e^{i,j,k}(H_1, H_2)` for all
/// `n + k = r`.
pub fn check_mixed_operator_formula(
    m: &ModulePresentation,
    h1: &SubmoduleSpec,
    h2: &SubmoduleSpec,
    r: Option<u32>,
    settings: Settings,
) -> Result<VerificationReport> {
    let product = h1.product(h2)?;
    check_mixed_operator_formula_with(m, h1, h2, &product, r, settings)
}

/// As [`check_mixed_operator_formula`] with the product submodule supplied by
/// the caller; its fiber degree must be `d_1 + d_2`.
pub fn check_mixed_operator_formula_with(
    m: &ModulePresentation,
    h1: &SubmoduleSpec,
    h2: &SubmoduleSpec,
    product: &SubmoduleSpec,
    r: Option<u32>,
    settings: Settings,
) -> Result<VerificationReport> {
    let d = h1.fiber_degree() + h2.fiber_degree();
    if product.fiber_degree() != d {
        return Err(Error::Precondition(format!(
            "product submodule has fiber degree {}, expected d1 + d2 = {d}",
            product.fiber_degree()
        )));
    }
    let r = resolve_shared_r(m, r)?;
    let pure = br_multiplicities(&PureQuery {
        module: m.clone(),
        h: product.clone(),
        r,
        settings,
    })?;
    let mixed = mixed_br_multiplicities(&MixedQuery {
        module: m.clone(),
        h1: h1.clone(),
        h2: h2.clone(),
        r,
        settings,
    })?;
    let r = pure.r;
    let mut compared = Vec::new();
    for n in (0..=r).rev() {
        let k = r - n;
        let lhs = pure.e(&[n, k]);
        let rhs: BigInt = (0..=n)
            .map(|i| BigInt::from(binomial(n as u64, i as u64)) * mixed.e(&[i, n - i, k]))
            .sum();
        compared.push((format!("e[{n},{k}]"), lhs.into(), rhs.into()));
    }
    Ok(VerificationReport::from_pairs(
        "mixed-operator-formula",
        describe_pair(m, h1, h2),
        compared,
    ))
}

/// `Σ_ν len(H^ν M_(d(p-ν)+n) / H^{ν+1} M_(d(p-ν-1)+n)) = λ(p+1, n-d)` on
/// `[0, extent)²`, slices of negative degree being zero.
pub fn check_telescoping(
    m: &ModulePresentation,
    h: &SubmoduleSpec,
    extent: usize,
    settings: Settings,
) -> Result<VerificationReport> {
    let powers = ProductTable::powers(h, extent as u32 + 1);
    let d = h.fiber_degree();
    let points = grid_points(&[extent, extent]);
    let cell = |pt: &Vec<usize>| -> Result<(String, Value, Value)> {
        let (p, n) = (pt[0] as u32, pt[1] as u32);
        let lhs = sum_value(factor_dims_from_powers(
            &powers,
            m,
            d,
            p,
            n,
            settings.cutoff,
        ))?;
        let direct = subquotient_length(
            m,
            d * p + n,
            Span::Whole,
            powers.get(p + 1, 0).gens(),
            settings.cutoff,
        );
        Ok((format!("(p,n)=({p},{n})"), lhs, length_value(direct)?))
    };
    let compared = collect(&points, settings.parallel, cell)?;
    Ok(VerificationReport::from_pairs(
        "telescoping",
        format!("{}; H = {}", describe_module(m), describe_submodule(h)),
        compared,
    ))
}

/// Sum of the mixed filtration factors against the direct quotient
/// `len(M_(d_1 p + d_2 q + n) / H_1^{p+1} H_2^{q+1} M_(n - d_1 - d_2))` on
/// `[0, extent)³`.
pub fn check_mixed_factor_sum(
    m: &ModulePresentation,
    h1: &SubmoduleSpec,
    h2: &SubmoduleSpec,
    extent: usize,
    settings: Settings,
) -> Result<VerificationReport> {
    let top = extent as u32 + 1;
    let table = ProductTable::new(h1, h2, top, top)?;
    let (d1, d2) = (h1.fiber_degree(), h2.fiber_degree());
    let points = grid_points(&[extent, extent, extent]);
    let cell = |pt: &Vec<usize>| -> Result<(String, Value, Value)> {
        let (p, q, n) = (pt[0] as u32, pt[1] as u32, pt[2] as u32);
        let lhs = sum_value(mixed_factor_dims(
            &table,
            m,
            d1,
            d2,
            p,
            q,
            n,
            settings.cutoff,
        ))?;
        let direct = subquotient_length(
            m,
            d1 * p + d2 * q + n,
            Span::Whole,
            table.get(p + 1, q + 1).gens(),
            settings.cutoff,
        );
        Ok((format!("(p,q,n)=({p},{q},{n})"), lhs, length_value(direct)?))
    };
    let compared = collect(&points, settings.parallel, cell)?;
    Ok(VerificationReport::from_pairs(
        "mixed-factor-sum",
        describe_pair(m, h1, h2),
        compared,
    ))
}

fn collect<F>(points: &[Vec<usize>], parallel: bool, f: F) -> Result<Vec<(String, Value, Value)>>
where
    F: Fn(&Vec<usize>) -> Result<(String, Value, Value)> + Sync + Send,
{
    let out: Vec<Result<_>> = if parallel {
        points.par_iter().map(&f).collect()
    } else {
        points.iter().map(&f).collect()
    };
    out.into_iter().collect()
}

/// Every difference of total order `r + 1` vanishes on the last admissible
/// window of `table`.
pub fn check_degree_bound(
    table: &LengthTable,
    r: u32,
    window: usize,
    instance: String,
) -> Result<VerificationReport> {
    let estimate = total_degree_estimate(table, window)?;
    let witness = degree_bound_witness(table, r, window)?;
    let mut report = VerificationReport {
        theorem: "degree-bound",
        instance,
        compared: vec![(
            "total-degree-estimate <= r".into(),
            Value::Int(BigInt::from(estimate.min(r))),
            Value::Int(BigInt::from(estimate)),
        )],
        passed: witness.is_none(),
        witness: None,
    };
    if let Some(w) = witness {
        report.witness = Some(Witness {
            at: format!("difference {:?} at {:?}", w.order, w.point),
            lhs: Value::Int(w.value),
            rhs: Value::Int(BigInt::from(0)),
        });
    }
    Ok(report)
}

pub fn check_report_degree_bound(
    report: &MultiplicityReport,
    window: usize,
    instance: String,
) -> Result<VerificationReport> {
    check_degree_bound(&report.table, report.r, window, instance)
}

/// `e^{i,j,k}(H_1, H_2) = e^{j,i,k}(H_2, H_1)` for all `i + j + k = r`.
pub fn check_symmetry(
    m: &ModulePresentation,
    h1: &SubmoduleSpec,
    h2: &SubmoduleSpec,
    r: Option<u32>,
    settings: Settings,
) -> Result<VerificationReport> {
    let r = resolve_shared_r(m, r)?;
    let query = |a: &SubmoduleSpec, b: &SubmoduleSpec| MixedQuery {
        module: m.clone(),
        h1: a.clone(),
        h2: b.clone(),
        r,
        settings,
    };
    let forward = mixed_br_multiplicities(&query(h1, h2))?;
    let backward = mixed_br_multiplicities(&query(h2, h1))?;
    let compared = compositions(forward.r, 3)
        .into_iter()
        .map(|a| {
            let (i, j, k) = (a[0], a[1], a[2]);
            (
                format!("e[{i},{j},{k}]"),
                forward.e(&[i, j, k]).into(),
                backward.e(&[j, i, k]).into(),
            )
        })
        .collect();
    Ok(VerificationReport::from_pairs(
        "symmetry",
        describe_pair(m, h1, h2),
        compared,
    ))
}

/// Both filtration inclusions for every `ν`, as a report: `1` means the
/// inclusion holds.
pub fn check_inclusions(
    h1: &SubmoduleSpec,
    h2: &SubmoduleSpec,
    p: u32,
    q: u32,
    bound: Bidegree,
) -> Result<VerificationReport> {
    let rep = check_filtration_inclusions(h1, h2, p, q, bound)?;
    let flag = |b: bool| Value::Int(BigInt::from(b as u8));
    let mut compared = Vec::new();
    for nu in &rep.per_nu {
        compared.push((
            format!("(p,q)=({p},{q}) nu={} I1*I2*level", nu.nu),
            flag(nu.first_holds),
            flag(true),
        ));
        compared.push((
            format!("(p,q)=({p},{q}) nu={} level", nu.nu),
            flag(nu.second_holds),
            flag(true),
        ));
    }
    let mut report = VerificationReport::from_pairs(
        "inclusions",
        format!(
            "H1 = {}; H2 = {}",
            describe_submodule(h1),
            describe_submodule(h2)
        ),
        compared,
    );
    if let Some(w) = rep.witnesses.first() {
        report.witness = Some(Witness {
            at: format!(
                "inclusion {} at nu={} in bidegree {}: generator {}",
                w.inclusion, w.nu, w.bidegree, w.generator
            ),
            lhs: Value::Int(BigInt::from(0)),
            rhs: Value::Int(BigInt::from(1)),
        });
    }
    Ok(report)
}

/// A named instance of the curated corpus.
#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub module: ModulePresentation,
    pub h1: SubmoduleSpec,
    pub h2: Option<SubmoduleSpec>,
}

fn monomials(r: &Ring, d: u32, exps: &[&[u32]]) -> SubmoduleSpec {
    let gens = exps
        .iter()
        .map(|e| Polynomial::from_terms(r, &[(e, 1)]))
        .collect();
    SubmoduleSpec::new(r, d, gens).expect("valid corpus generators")
}

/// The curated instances behind `verify all`.
pub fn corpus(field: Field) -> Vec<CorpusEntry> {
    let g4 = RingSpec::new(field, vec!["x", "y"], vec!["u", "v"]).expect("ring");
    let g3 = RingSpec::new(field, vec!["x", "y"], vec!["T"]).expect("ring");
    let free4 = ModulePresentation::free_ring(&g4);
    let free3 = ModulePresentation::free_ring(&g3);
    let mf = monomials(
        &g4,
        1,
        &[&[1, 0, 1, 0], &[1, 0, 0, 1], &[0, 1, 1, 0], &[0, 1, 0, 1]],
    );
    let m4 = monomials(&g4, 0, &[&[1, 0, 0, 0], &[0, 1, 0, 0]]);
    let m = monomials(&g3, 0, &[&[1, 0, 0], &[0, 1, 0]]);
    let m2 = monomials(&g3, 0, &[&[2, 0, 0], &[1, 1, 0], &[0, 2, 0]]);
    let a = monomials(&g3, 0, &[&[1, 0, 0], &[0, 2, 0]]);
    let b = monomials(&g3, 0, &[&[2, 0, 0], &[0, 1, 0]]);
    let sq = monomials(&g3, 0, &[&[2, 0, 0], &[0, 2, 0]]);
    vec![
        CorpusEntry {
            name: "mF".into(),
            module: free4.clone(),
            h1: mf.clone(),
            h2: None,
        },
        CorpusEntry {
            name: "m-squared".into(),
            module: free3.clone(),
            h1: m2,
            h2: None,
        },
        CorpusEntry {
            name: "m-m".into(),
            module: free3.clone(),
            h1: m.clone(),
            h2: Some(m.clone()),
        },
        CorpusEntry {
            name: "newton-pair".into(),
            module: free3.clone(),
            h1: a,
            h2: Some(b),
        },
        CorpusEntry {
            name: "squares-m".into(),
            module: free3.clone(),
            h1: sq,
            h2: Some(m.clone()),
        },
        CorpusEntry {
            name: "unit-m".into(),
            module: free3.clone(),
            h1: SubmoduleSpec::unit(&g3),
            h2: Some(m),
        },
        CorpusEntry {
            name: "mF-m".into(),
            module: free4,
            h1: mf,
            h2: Some(m4),
        },
    ]
}

/// Grid extent used by the filtration checks.
pub const FILTRATION_EXTENT: usize = 4;

/// Names of the checks run by [`run_checks`].
pub const CHECKS: [&str; 6] = [
    "mixed-operator-formula",
    "symmetry",
    "mixed-factor-sum",
    "telescoping",
    "degree-bound",
    "inclusions",
];

/// Every check that applies to `entry`.
pub fn run_entry(entry: &CorpusEntry, settings: Settings) -> Result<Vec<VerificationReport>> {
    run_checks(entry, settings, |_| true)
}

/// The checks named by `wanted` that apply to `entry`: the pure ones when it
/// has a single submodule, the pair ones otherwise. `degree-bound` applies
/// to both.
pub fn run_checks(
    entry: &CorpusEntry,
    settings: Settings,
    wanted: impl Fn(&str) -> bool,
) -> Result<Vec<VerificationReport>> {
    let m = &entry.module;
    let h1 = &entry.h1;
    let mut out = Vec::new();
    match &entry.h2 {
        None => {
            if wanted("degree-bound") {
                let rep = br_multiplicities(&PureQuery {
                    module: m.clone(),
                    h: h1.clone(),
                    r: None,
                    settings,
                })?;
                let desc = format!("{}; H = {}", describe_module(m), describe_submodule(h1));
                out.push(check_report_degree_bound(&rep, settings.window, desc)?);
            }
            if wanted("telescoping") {
                out.push(check_telescoping(m, h1, FILTRATION_EXTENT, settings)?);
            }
        }
        Some(h2) => {
            if wanted("mixed-operator-formula") {
                out.push(check_mixed_operator_formula(m, h1, h2, None, settings)?);
            }
            if wanted("symmetry") {
                out.push(check_symmetry(m, h1, h2, None, settings)?);
            }
            if wanted("mixed-factor-sum") {
                out.push(check_mixed_factor_sum(
                    m,
                    h1,
                    h2,
                    FILTRATION_EXTENT,
                    settings,
                )?);
            }
            if wanted("degree-bound") {
                let rep = mixed_br_multiplicities(&MixedQuery {
                    module: m.clone(),
                    h1: h1.clone(),
                    h2: h2.clone(),
                    r: None,
                    settings,
                })?;
                out.push(check_report_degree_bound(
                    &rep,
                    settings.window,
                    describe_pair(m, h1, h2),
                )?);
            }
            if wanted("inclusions") {
                for p in 1..=3 {
                    for q in 1..=3 {
                        out.push(check_inclusions(h1, h2, p, q, Bidegree::new(16, 16))?);
                    }
                }
            }
        }
    }
    for r in &mut out {
        r.instance = format!("{}: {}", entry.name, r.instance);
    }
    Ok(out)
}
