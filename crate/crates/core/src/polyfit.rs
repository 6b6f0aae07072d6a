//! Exact finite differences on integer grids and extraction of the leading
//! form of an eventually polynomial function.
//!
//! For a polynomial `P` of total degree `r`, the mixed difference
//! `Δ^α P` with `|α| = r` is the constant `α!·[p^α]P`. Writing the
//! degree-`r` part as `Σ e_α p^α/α!`, that constant is exactly `e_α`, so the
//! e-values of a table are read off as iterated differences: integers by
//! construction, no division anywhere.

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ring::compositions;

/// Default number of consecutive lattice points per axis that must agree.
pub const DEFAULT_WINDOW: usize = 2;

/// Exact integer values on a full rectangular grid, row-major with the last
/// axis fastest. Length tables hold nonnegative values; their finite
/// differences may be negative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LengthTable {
    axes: Vec<String>,
    origin: Vec<i64>,
    extents: Vec<usize>,
    values: Vec<BigInt>,
}

impl LengthTable {
    pub fn new(axes: Vec<String>, extents: Vec<usize>, values: Vec<BigInt>) -> Result<Self> {
        if axes.len() != extents.len() || axes.is_empty() {
            return Err(Error::DimensionMismatch(format!(
                "{} axis names for {} extents",
                axes.len(),
                extents.len()
            )));
        }
        let n: usize = extents.iter().product();
        if values.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "{} values for a grid of {n} points",
                values.len()
            )));
        }
        Ok(LengthTable {
            origin: vec![0; axes.len()],
            axes,
            extents,
            values,
        })
    }

    pub fn from_u64(axes: Vec<String>, extents: Vec<usize>, values: &[u64]) -> Result<Self> {
        LengthTable::new(
            axes,
            extents,
            values.iter().map(|&v| BigInt::from(v)).collect(),
        )
    }

    /// Tabulates `f` over `[0, extent)` on each axis.
    pub fn from_fn(
        axes: Vec<String>,
        extents: Vec<usize>,
        f: impl Fn(&[usize]) -> BigInt,
    ) -> Result<Self> {
        let values = grid_points(&extents).iter().map(|p| f(p)).collect();
        LengthTable::new(axes, extents, values)
    }

    pub fn arity(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[String] {
        &self.axes
    }

    pub fn origin(&self) -> &[i64] {
        &self.origin
    }

    pub fn extents(&self) -> &[usize] {
        &self.extents
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    fn offset(&self, point: &[usize]) -> Option<usize> {
        let mut off = 0;
        for (&x, &e) in point.iter().zip(&self.extents) {
            if x >= e {
                return None;
            }
            off = off * e + x;
        }
        Some(off)
    }

    pub fn get(&self, point: &[usize]) -> Option<&BigInt> {
        if point.len() != self.arity() {
            return None;
        }
        self.offset(point).map(|o| &self.values[o])
    }

    /// Grid points in storage order.
    pub fn points(&self) -> Vec<Vec<usize>> {
        grid_points(&self.extents)
    }
}

/// All points of `[0, e_1) × ... × [0, e_k)`, last axis fastest.
pub fn grid_points(extents: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &e in extents {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..e).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

/// `Δ_axis t(v) = t(v + e_axis) - t(v)`; the extent along `axis` shrinks by one.
pub fn finite_difference(t: &LengthTable, axis: usize) -> Result<LengthTable> {
    if axis >= t.arity() {
        return Err(Error::DimensionMismatch(format!(
            "axis {axis} of a {}-axis table",
            t.arity()
        )));
    }
    if t.extents[axis] < 2 {
        return Err(Error::GridTooSmall(format!(
            "extent {} along axis {} admits no difference",
            t.extents[axis], t.axes[axis]
        )));
    }
    let mut extents = t.extents.clone();
    extents[axis] -= 1;
    LengthTable::from_fn(t.axes.clone(), extents, |p| {
        let mut q = p.to_vec();
        q[axis] += 1;
        t.get(&q).unwrap() - t.get(p).unwrap()
    })
}

/// The mixed difference `Δ^order t` at `point`, or `None` when the stencil
/// leaves the grid.
pub fn difference_at(t: &LengthTable, point: &[usize], order: &[u32]) -> Option<BigInt> {
    let reach: Vec<usize> = point
        .iter()
        .zip(order)
        .map(|(&p, &o)| p + o as usize)
        .collect();
    t.get(&reach)?;
    let total: u32 = order.iter().sum();
    let stencil: Vec<usize> = order.iter().map(|&o| o as usize + 1).collect();
    let mut acc = BigInt::zero();
    for gamma in grid_points(&stencil) {
        let mut weight = BigInt::one();
        let mut shifted = point.to_vec();
        let mut g_total = 0u32;
        for (k, &g) in gamma.iter().enumerate() {
            weight *= binomial(BigInt::from(order[k]), BigInt::from(g));
            shifted[k] += g;
            g_total += g as u32;
        }
        let term = weight * t.get(&shifted)?;
        if (total - g_total).is_multiple_of(2) {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Some(acc)
}

/// A nonzero difference found where a degree bound says it should vanish.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferenceWitness {
    pub order: Vec<u32>,
    pub point: Vec<usize>,
    pub value: BigInt,
}

fn min_extent(t: &LengthTable) -> usize {
    t.extents.iter().copied().min().unwrap_or(0)
}

/// Largest window base `b` such that the box `[b, b+w)^k` shifted by any
/// difference of total order `order` stays on the grid.
fn last_base(t: &LengthTable, order: u32, window: usize) -> Option<usize> {
    min_extent(t).checked_sub(order as usize + window)
}

fn window_points(arity: usize, base: usize, window: usize) -> Vec<Vec<usize>> {
    grid_points(&vec![window; arity])
        .into_iter()
        .map(|o| o.into_iter().map(|x| x + base).collect())
        .collect()
}

/// First nonzero difference of total order `order` on the window box at `base`.
fn nonvanishing(
    t: &LengthTable,
    order: u32,
    base: usize,
    window: usize,
) -> Option<DifferenceWitness> {
    for alpha in compositions(order, t.arity()) {
        for p in window_points(t.arity(), base, window) {
            let v = difference_at(t, &p, &alpha).expect("window inside grid");
            if !v.is_zero() {
                return Some(DifferenceWitness {
                    order: alpha,
                    point: p,
                    value: v,
                });
            }
        }
    }
    None
}

/// Checks that every difference of total order `r + 1` vanishes on the
/// last admissible window; the witness otherwise.
pub fn degree_bound_witness(
    t: &LengthTable,
    r: u32,
    window: usize,
) -> Result<Option<DifferenceWitness>> {
    let window = window.max(1);
    let base = last_base(t, r + 1, window).ok_or_else(|| too_small(t, r, window))?;
    Ok(nonvanishing(t, r + 1, base, window))
}

fn too_small(t: &LengthTable, r: u32, window: usize) -> Error {
    Error::GridTooSmall(format!(
        "extents {:?} cannot hold differences of order {} over a window of {window}",
        t.extents,
        r + 1
    ))
}

/// The degree-`r` form `Σ_{|α|=r} e_α p^α/α!` of an eventually polynomial
/// table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeadingForm {
    pub r: u32,
    pub axes: Vec<String>,
    /// `(α, e_α)` for every `|α| = r`, `α` in descending lexicographic order.
    pub coefficients: Vec<(Vec<u32>, BigInt)>,
    /// Window base from which all checked windows are stable.
    pub base_point: usize,
    pub window: usize,
}

impl LeadingForm {
    pub fn e(&self, alpha: &[u32]) -> Option<&BigInt> {
        self.coefficients
            .iter()
            .find(|(a, _)| a == alpha)
            .map(|(_, e)| e)
    }

    /// `e[3,0]`-style key.
    pub fn label(alpha: &[u32]) -> String {
        let parts: Vec<String> = alpha.iter().map(u32::to_string).collect();
        format!("e[{}]", parts.join(","))
    }

    /// The monomial coefficient `e_α / α!`.
    pub fn coefficient(&self, alpha: &[u32]) -> Option<BigRational> {
        let e = self.e(alpha)?;
        let fact: BigInt = alpha
            .iter()
            .map(|&a| (1..=a).map(BigInt::from).product::<BigInt>())
            .product();
        Some(BigRational::new(e.clone(), fact))
    }

    /// `Λ(point)` evaluated exactly.
    pub fn evaluate(&self, point: &[i64]) -> BigRational {
        let mut acc = BigRational::zero();
        for (alpha, _) in &self.coefficients {
            let mut term = self.coefficient(alpha).unwrap();
            for (&x, &a) in point.iter().zip(alpha) {
                term *= BigRational::from_integer(BigInt::from(x).pow(a));
            }
            acc += term;
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(|(_, e)| e.is_zero())
    }
}

/// Extracts the e-values of total degree `r`.
///
/// The table must admit differences of order `r + 1` over a box of `window`
/// points per axis. Those differences must vanish on the last admissible
/// window (else [`Error::DegreeExceeds`]); the reported base point is the
/// earliest window base from which every later window passes the same test.
/// Since the order-`r + 1` differences vanish there, the order-`r`
/// differences are constant across each window and the e-values are read at
/// the base point.
pub fn leading_form(t: &LengthTable, r: u32, window: usize) -> Result<LeadingForm> {
    let window = window.max(1);
    let last = last_base(t, r + 1, window).ok_or_else(|| too_small(t, r, window))?;
    if let Some(w) = nonvanishing(t, r + 1, last, window) {
        return Err(Error::DegreeExceeds {
            r,
            order: w.order,
            point: w.point,
            value: w.value.to_string(),
        });
    }
    let mut base = last;
    while base > 0 && nonvanishing(t, r + 1, base - 1, window).is_none() {
        base -= 1;
    }
    let at = vec![base; t.arity()];
    let coefficients = compositions(r, t.arity())
        .into_iter()
        .map(|alpha| {
            let e = difference_at(t, &at, &alpha).expect("inside grid");
            (alpha, e)
        })
        .collect();
    Ok(LeadingForm {
        r,
        axes: t.axes.clone(),
        coefficients,
        base_point: base,
        window,
    })
}

/// Smallest `D` whose order-`D + 1` differences vanish on the last admissible
/// window. Diagnostic only: a bound check, never the source of `r`.
pub fn total_degree_estimate(t: &LengthTable, window: usize) -> Result<u32> {
    let window = window.max(1);
    for d in 0.. {
        let Some(base) = last_base(t, d + 1, window) else {
            return Err(Error::GridTooSmall(format!(
                "no vanishing order of differences within extents {:?}",
                t.extents
            )));
        };
        if nonvanishing(t, d + 1, base, window).is_none() {
            return Ok(d);
        }
    }
    unreachable!()
}
