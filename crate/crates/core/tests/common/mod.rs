#![allow(dead_code)]

use mixmult::{Field, ModulePresentation, Polynomial, Ring, RingSpec, SubmoduleSpec};

pub fn ring(base: &[&str], fiber: &[&str]) -> Ring {
    RingSpec::new(Field::Rational, base.to_vec(), fiber.to_vec()).unwrap()
}

pub fn monomial_submodule(r: &Ring, d: u32, exps: &[Vec<u32>]) -> SubmoduleSpec {
    let gens = exps
        .iter()
        .map(|e| Polynomial::from_terms(r, &[(e.as_slice(), 1)]))
        .collect();
    SubmoduleSpec::new(r, d, gens).unwrap()
}

pub fn free(r: &Ring) -> ModulePresentation {
    ModulePresentation::free_ring(r)
}

/// All exponent vectors of `parts` entries summing to `total`.
pub fn exponent_vectors(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in exponent_vectors(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Exponents of every product of `p` generators (with repetition).
pub fn power_exponents(gens: &[Vec<u32>], p: u32, nvars: usize) -> Vec<Vec<u32>> {
    let mut acc = vec![vec![0; nvars]];
    for _ in 0..p {
        let mut next = Vec::new();
        for a in &acc {
            for g in gens {
                let v: Vec<u32> = a.iter().zip(g).map(|(x, y)| x + y).collect();
                if !next.contains(&v) {
                    next.push(v);
                }
            }
        }
        acc = next;
    }
    acc
}

fn divides(g: &[u32], m: &[u32]) -> bool {
    g.iter().zip(m).all(|(a, b)| a <= b)
}

/// Number of monomials with `nb` base and `nf` fiber variables, fiber
/// degree `fiber` and base degree `≤ base_bound`, outside the monomial
/// ideal generated by `gens`.
pub fn standard_monomials(
    nb: usize,
    nf: usize,
    gens: &[Vec<u32>],
    fiber: u32,
    base_bound: u32,
) -> u64 {
    let mut count = 0;
    for a in 0..=base_bound {
        for b in exponent_vectors(a, nb) {
            for f in exponent_vectors(fiber, nf) {
                let m: Vec<u32> = b.iter().chain(&f).copied().collect();
                if !gens.iter().any(|g| divides(g, &m)) {
                    count += 1;
                }
            }
        }
    }
    count
}

/// Twice the area between the axes and the Newton polygon of a monomial
/// ideal of `k[x,y]` that contains pure powers of both variables: the
/// Samuel multiplicity of the ideal.
pub fn newton_covolume(points: &[(u32, u32)]) -> u64 {
    let mut pts: Vec<(i64, i64)> = points.iter().map(|&(a, b)| (a as i64, b as i64)).collect();
    pts.sort();
    pts.dedup();
    // Lower hull from the point on the y-axis to the point on the x-axis.
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for p in pts {
        while hull.len() >= 2 {
            let (o, a) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (a.0 - o.0) * (p.1 - o.1) - (a.1 - o.1) * (p.0 - o.0);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    // Keep the decreasing part: from min-x point down to min-y point.
    let ymin = hull.iter().map(|p| p.1).min().unwrap();
    let end = hull.iter().position(|p| p.1 == ymin).unwrap();
    let chain = &hull[..=end];
    assert_eq!(chain[0].0, 0, "needs a pure power of y");
    assert_eq!(chain[end].1, 0, "needs a pure power of x");
    let twice_area: i64 = chain
        .windows(2)
        .map(|w| (w[1].0 - w[0].0) * (w[0].1 + w[1].1))
        .sum();
    twice_area as u64
}

pub fn minkowski(a: &[(u32, u32)], b: &[(u32, u32)]) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for x in a {
        for y in b {
            out.push((x.0 + y.0, x.1 + y.1));
        }
    }
    out
}
