//! The eight acceptance criteria. Each prints one `PASS`/`FAIL` line with its
//! wall time; the process exits non-zero if any fails or exceeds 60 s.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use mixmult::multiplicity::{lambda_local_table, samuel_multiplicity};
use mixmult::polyfit::{leading_form, total_degree_estimate};
use mixmult::verify::{
    check_inclusions, check_mixed_operator_formula, check_report_degree_bound, check_symmetry,
    corpus, run_checks,
};
use mixmult::{
    br_multiplicities, generalized_samuel, has_maximal_analytic_spread, mixed_br_multiplicities,
    samuel_function, Bidegree, Field, FreeModuleSpec, LocalQuery, MixedQuery, ModulePresentation,
    Polynomial, PureQuery, Ring, RingSpec, Settings, SubmoduleSpec,
};
use mixmult_cli::run_args;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value as Json;

const LIMIT: Duration = Duration::from_secs(60);
const MERSENNE_31: u64 = 2_147_483_647;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);
/// Name, generators, expected `e`, whether primary, expected spread.
type SamuelCase = (&'static str, Vec<Vec<u32>>, i64, bool, bool);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ring(field: Field, base: &[&str], fiber: &[&str]) -> Ring {
    RingSpec::new(field, base.to_vec(), fiber.to_vec()).unwrap()
}

fn monomials(r: &Ring, d: u32, exps: &[Vec<u32>]) -> SubmoduleSpec {
    let gens = exps
        .iter()
        .map(|e| Polynomial::from_terms(r, &[(e.as_slice(), 1)]))
        .collect();
    SubmoduleSpec::new(r, d, gens).unwrap()
}

fn exponent_vectors(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    (0..=total)
        .flat_map(|first| {
            exponent_vectors(total - first, parts - 1)
                .into_iter()
                .map(move |mut rest| {
                    rest.insert(0, first);
                    rest
                })
        })
        .collect()
}

/// Monomials of fiber degree `fiber` outside the monomial ideal `gens`, by
/// enumeration up to base degree `base_bound`.
fn standard_monomials(nb: usize, nf: usize, gens: &[Vec<u32>], fiber: u32, base_bound: u32) -> u64 {
    let mut count = 0;
    for a in 0..=base_bound {
        for b in exponent_vectors(a, nb) {
            for f in exponent_vectors(fiber, nf) {
                let m: Vec<u32> = b.iter().chain(&f).copied().collect();
                if !gens.iter().any(|g| g.iter().zip(&m).all(|(x, y)| x <= y)) {
                    count += 1;
                }
            }
        }
    }
    count
}

fn power_exponents(gens: &[Vec<u32>], p: u32, nvars: usize) -> Vec<Vec<u32>> {
    let mut acc = vec![vec![0; nvars]];
    for _ in 0..p {
        let mut next: Vec<Vec<u32>> = Vec::new();
        for a in &acc {
            for g in gens {
                let v = a.iter().zip(g).map(|(x, y)| x + y).collect();
                if !next.contains(&v) {
                    next.push(v);
                }
            }
        }
        acc = next;
    }
    acc
}

fn instances_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../instances")
}

// 1 ---------------------------------------------------------------------------

fn mf_oracle() -> Outcome {
    let g = ring(Field::Rational, &["x", "y"], &["u", "v"]);
    let exps = vec![
        vec![1, 0, 1, 0],
        vec![1, 0, 0, 1],
        vec![0, 1, 1, 0],
        vec![0, 1, 0, 1],
    ];
    let mut q = PureQuery::new(ModulePresentation::free_ring(&g), monomials(&g, 1, &exps));
    q.settings.grid = Some(8);
    let rep = br_multiplicities(&q).map_err(|e| e.to_string())?;
    ensure(rep.table.extents() == [8, 8], || {
        format!("grid {:?}", rep.table.extents())
    })?;
    for (pt, v) in rep.table.points().iter().zip(rep.table.values()) {
        let (p, n) = (pt[0] as u32, pt[1] as u32);
        let closed = (p as u64 + n as u64 + 1) * p as u64 * (p as u64 + 1) / 2;
        let counted =
            standard_monomials(2, 2, &power_exponents(&exps, p, 4), p + n, 3 * (p + n) + 4);
        ensure(*v == BigInt::from(closed) && closed == counted, || {
            format!("λ({p},{n}) = {v}, closed form {closed}, count {counted}")
        })?;
    }
    for (alpha, want) in [([3, 0], 3), ([2, 1], 1), ([1, 2], 0), ([0, 3], 0)] {
        let got = rep.e(&alpha);
        ensure(got == BigInt::from(want), || {
            format!("e{alpha:?} = {got}, want {want}")
        })?;
    }
    Ok("e[3,0]=3 e[2,1]=1 e[1,2]=0 e[0,3]=0; λ matches oracle on [0,7]²".into())
}

// 2 ---------------------------------------------------------------------------

fn mixed_operator_identity() -> Outcome {
    let g = ring(Field::Rational, &["x", "y"], &["T"]);
    let m = ModulePresentation::free_ring(&g);
    let ideal = |pts: &[(u32, u32)]| {
        monomials(
            &g,
            0,
            &pts.iter().map(|&(a, b)| vec![a, b, 0]).collect::<Vec<_>>(),
        )
    };
    let cases = [
        ("(m,m)", ideal(&[(1, 0), (0, 1)]), ideal(&[(1, 0), (0, 1)])),
        (
            "((x,y²),(x²,y))",
            ideal(&[(1, 0), (0, 2)]),
            ideal(&[(2, 0), (0, 1)]),
        ),
        (
            "((x²,y²),(x,y))",
            ideal(&[(2, 0), (0, 2)]),
            ideal(&[(1, 0), (0, 1)]),
        ),
    ];
    let mut checked = 0;
    for (name, h1, h2) in &cases {
        let rep = check_mixed_operator_formula(&m, h1, h2, None, Settings::default())
            .map_err(|e| format!("{name}: {e}"))?;
        ensure(rep.passed, || format!("{name}: {:?}", rep.witness))?;
        ensure(rep.compared.len() == 3, || {
            format!("{name}: {} comparisons", rep.compared.len())
        })?;
        checked += rep.compared.len();
    }
    Ok(format!(
        "{} instances, {checked} exact equalities",
        cases.len()
    ))
}

// 3 ---------------------------------------------------------------------------

fn samuel_suite() -> Outcome {
    let a = ring(Field::Rational, &["x", "y"], &[]);
    let m = ModulePresentation::free_ring(&a);
    let cases: [SamuelCase; 3] = [
        ("(x,y)", vec![vec![1, 0], vec![0, 1]], 1, true, true),
        ("(x)", vec![vec![1, 0]], 0, false, false),
        ("(x²,y²)", vec![vec![2, 0], vec![0, 2]], 4, true, true),
    ];
    for (name, exps, want, primary, spread) in cases {
        let i = monomials(&a, 0, &exps);
        let q = LocalQuery::new(m.clone(), i.clone());
        let e = generalized_samuel(&q)
            .map_err(|e| format!("{name}: {e}"))?
            .e;
        ensure(e == BigInt::from(want), || {
            format!("e({name}) = {e}, want {want}")
        })?;
        let s = has_maximal_analytic_spread(&q).map_err(|e| e.to_string())?;
        ensure(s == spread, || {
            format!("{name}: maximal analytic spread {s}")
        })?;
        if primary {
            for n in 0..6 {
                let f = samuel_function(&m, &i, n, 64).map_err(|e| e.to_string())?;
                let bound = 2 * (n + 1) + 2;
                let oracle = standard_monomials(2, 0, &power_exponents(&exps, n + 1, 2), 0, bound);
                ensure(f == oracle, || {
                    format!("{name}: len(A/I^{}) = {f}, count {oracle}", n + 1)
                })?;
            }
            let classical = samuel_multiplicity(&q).map_err(|e| e.to_string())?.e(&[2]);
            ensure(classical == e, || {
                format!("{name}: Samuel function gives {classical}, pipeline {e}")
            })?;
        }
    }
    Ok("e = 1, 0, 4; spread = true, false, true".into())
}

// 4 ---------------------------------------------------------------------------

/// A random monomial ideal of the base ring, primary to the irrelevant
/// ideal, with generators of degree ≤ 4.
fn random_primary(rng: &mut ChaCha8Rng, nb: usize, nvars: usize) -> Vec<Vec<u32>> {
    let mut gens = Vec::new();
    for i in 0..nb {
        let mut e = vec![0; nvars];
        e[i] = rng.gen_range(1..=4);
        gens.push(e);
    }
    for _ in 0..rng.gen_range(0..=2) {
        let deg = rng.gen_range(1..=4);
        let mut e = vec![0; nvars];
        for _ in 0..deg {
            e[rng.gen_range(0..nb)] += 1;
        }
        gens.push(e);
    }
    gens
}

fn degree_bound() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let shapes = [(2usize, 1usize), (2, 2), (3, 1)];
    let mut count = 0;
    let mut max_seen = 0;
    for case in 0..24 {
        let (nb, nf) = shapes[case % shapes.len()];
        let base: Vec<String> = (0..nb).map(|i| format!("x{i}")).collect();
        let fiber: Vec<String> = (0..nf).map(|i| format!("y{i}")).collect();
        let g = RingSpec::new(Field::Rational, base, fiber).unwrap();
        let m = ModulePresentation::free_ring(&g);
        let nvars = nb + nf;
        let mixed = nb == 2 && nf == 1 && case % 2 == 0;
        let rep = if mixed {
            let h1 = monomials(&g, 0, &random_primary(&mut rng, nb, nvars));
            let h2 = monomials(&g, 0, &random_primary(&mut rng, nb, nvars));
            mixed_br_multiplicities(&MixedQuery::new(m, h1, h2))
        } else if rng.gen_bool(0.5) {
            let h = monomials(&g, 0, &random_primary(&mut rng, nb, nvars));
            br_multiplicities(&PureQuery::new(m, h))
        } else {
            // H = Σ J_k y_k with every J_k primary.
            let mut gens = Vec::new();
            for k in 0..nf {
                for mut e in random_primary(&mut rng, nb, nvars) {
                    e[nb + k] += 1;
                    gens.push(e);
                }
            }
            br_multiplicities(&PureQuery::new(m, monomials(&g, 1, &gens)))
        }
        .map_err(|e| format!("instance {case}: {e}"))?;
        let est = total_degree_estimate(&rep.table, 2).map_err(|e| e.to_string())?;
        ensure(est <= rep.r, || {
            format!("instance {case}: estimate {est} > r = {}", rep.r)
        })?;
        let check = check_report_degree_bound(&rep, 2, format!("instance {case}"))
            .map_err(|e| e.to_string())?;
        ensure(check.passed, || {
            format!("instance {case}: {:?}", check.witness)
        })?;
        max_seen = max_seen.max(est);
        count += 1;
    }
    Ok(format!(
        "{count} random instances, largest estimate {max_seen}"
    ))
}

// 5 ---------------------------------------------------------------------------

fn filtration_identities() -> Outcome {
    let wanted = |n: &str| matches!(n, "inclusions" | "mixed-factor-sum" | "telescoping");
    let mut reports = 0;
    for entry in corpus(Field::Rational) {
        for rep in run_checks(&entry, Settings::default(), wanted).map_err(|e| e.to_string())? {
            ensure(rep.passed, || {
                format!("{} {}: {:?}", rep.theorem, rep.instance, rep.witness)
            })?;
            reports += 1;
        }
    }
    let g = ring(Field::Rational, &["x", "y"], &["T"]);
    let (x, y) = (
        monomials(&g, 0, &[vec![1, 0, 0]]),
        monomials(&g, 0, &[vec![0, 1, 0]]),
    );
    for p in 1..=3 {
        for q in 1..=3 {
            let rep =
                check_inclusions(&x, &y, p, q, Bidegree::new(8, 8)).map_err(|e| e.to_string())?;
            ensure(rep.passed, || {
                format!("(x),(y) p={p} q={q}: {:?}", rep.witness)
            })?;
            reports += 1;
        }
    }
    Ok(format!("{reports} reports"))
}

// 6 ---------------------------------------------------------------------------

fn symmetry() -> Outcome {
    let mut pairs = 0;
    for entry in corpus(Field::Rational) {
        let Some(h2) = &entry.h2 else { continue };
        let rep = check_symmetry(&entry.module, &entry.h1, h2, None, Settings::default())
            .map_err(|e| format!("{}: {e}", entry.name))?;
        ensure(rep.passed, || format!("{}: {:?}", entry.name, rep.witness))?;
        pairs += 1;
    }
    Ok(format!("{pairs} corpus pairs"))
}

// 7 ---------------------------------------------------------------------------

fn cli(args: &[&str]) -> Result<String, String> {
    let out = run_args(std::iter::once("mixmult").chain(args.iter().copied()));
    ensure(out.code == 0, || {
        format!("{args:?} exited {}: {}", out.code, out.stdout)
    })?;
    Ok(out.stdout)
}

fn leading_values(doc: &Json) -> Vec<(String, String)> {
    doc["leading_form"]
        .as_object()
        .map(|m| {
            m.iter()
                .map(|(k, v)| (k.clone(), v.as_str().unwrap_or("").to_string()))
                .collect()
        })
        .unwrap_or_default()
}

fn determinism_and_integrality() -> Outcome {
    let dir = instances_dir();
    let jobs: [(&str, &str); 7] = [
        ("br", "mF.inst"),
        ("br", "m-squared.inst"),
        ("br", "cokernel.inst"),
        ("mixed", "newton-pair.inst"),
        ("mixed", "squares-m.inst"),
        ("mixed", "mF-m.inst"),
        ("samuel", "samuel-squares.inst"),
    ];
    let mut evalues = 0;
    for (cmd, file) in jobs {
        let path = dir.join(file);
        let path = path.to_str().unwrap();
        let serial = cli(&[cmd, path, "--threads", "1"])?;
        let parallel = cli(&[cmd, path, "--threads", "4"])?;
        let again = cli(&[cmd, path, "--threads", "4"])?;
        ensure(serial == parallel && parallel == again, || {
            format!("{cmd} {file}: JSON differs between runs")
        })?;
        let q: Json = serde_json::from_str(&serial).map_err(|e| e.to_string())?;
        let p: Json = serde_json::from_str(&cli(&[cmd, path, "--modp", &MERSENNE_31.to_string()])?)
            .map_err(|e| e.to_string())?;
        let lf = leading_values(&q);
        ensure(!lf.is_empty(), || format!("{cmd} {file}: no leading form"))?;
        for (k, v) in &lf {
            ensure(v.parse::<BigInt>().is_ok(), || {
                format!("{cmd} {file}: {k} = {v:?} is not an integer")
            })?;
        }
        ensure(lf == leading_values(&p) && q["table"] == p["table"], || {
            format!("{cmd} {file}: Q and F_p disagree")
        })?;
        evalues += lf.len();
    }
    for (a, b) in corpus(Field::Rational)
        .iter()
        .zip(corpus(Field::Prime(MERSENNE_31)))
    {
        let ra = run_checks(a, Settings::default(), |_| true).map_err(|e| e.to_string())?;
        let rb = run_checks(&b, Settings::default(), |_| true).map_err(|e| e.to_string())?;
        let strip = |v: Vec<mixmult::VerificationReport>| {
            v.into_iter()
                .map(|r| (r.theorem, r.compared))
                .collect::<Vec<_>>()
        };
        ensure(strip(ra) == strip(rb), || {
            format!("{}: Q and F_p reports differ", a.name)
        })?;
    }
    Ok(format!(
        "{} CLI jobs byte-identical, {evalues} integral e-values, Q = F_p on corpus",
        jobs.len()
    ))
}

// 8 ---------------------------------------------------------------------------

fn local_corpus() -> Vec<(String, LocalQuery)> {
    let a = ring(Field::Rational, &["x", "y"], &[]);
    let free = ModulePresentation::free_ring(&a);
    let free2 = ModulePresentation::new(
        FreeModuleSpec::new(&a, vec![Bidegree::ZERO, Bidegree::ZERO]).unwrap(),
        vec![],
    )
    .unwrap();
    let xy = Polynomial::from_terms(&a, &[(&[1, 1], 1)]);
    let node = ModulePresentation::cyclic_quotient(&a, vec![xy]).unwrap();
    let ideal = |e: &[Vec<u32>]| monomials(&a, 0, e);
    let m = ideal(&[vec![1, 0], vec![0, 1]]);
    vec![
        ("A, (x,y)", free.clone(), m.clone()),
        ("A, (x)", free.clone(), ideal(&[vec![1, 0]])),
        ("A, (x²,y²)", free.clone(), ideal(&[vec![2, 0], vec![0, 2]])),
        (
            "A, (x³,xy,y³)",
            free,
            ideal(&[vec![3, 0], vec![1, 1], vec![0, 3]]),
        ),
        ("A², (x,y)", free2, m.clone()),
        ("A/(xy), (x,y)", node.clone(), m),
        ("A/(xy), (x)", node, ideal(&[vec![1, 0]])),
    ]
    .into_iter()
    .map(|(n, module, i)| (n.to_string(), LocalQuery::new(module, i)))
    .collect()
}

fn lambda_consistency() -> Outcome {
    let mut summary = Vec::new();
    for (name, q) in local_corpus() {
        let rep = generalized_samuel(&q).map_err(|e| format!("{name}: {e}"))?;
        let r = rep.report.r;
        ensure(rep.k == r + 2, || format!("{name}: k = {}, r = {r}", rep.k))?;
        let extent = r as usize + 5;
        let mut leads = Vec::new();
        for k in [rep.k, rep.k + 1] {
            let (t, _) = lambda_local_table(&q, k, extent).map_err(|e| e.to_string())?;
            let lf = leading_form(&t, r, 2).map_err(|e| format!("{name} k={k}: {e}"))?;
            leads.push(lf.e(&[r]).cloned().unwrap_or_default());
        }
        ensure(leads[0] == leads[1] && leads[0] == rep.e, || {
            format!(
                "{name}: k gives {}, k+1 gives {}, pipeline {}",
                leads[0], leads[1], rep.e
            )
        })?;
        summary.push(format!("{name}: {}", rep.e));
    }
    Ok(summary.join("; "))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 mF against the monomial-count oracle", mf_oracle),
        ("2 mixed-operator identity", mixed_operator_identity),
        ("3 generalized Samuel suite", samuel_suite),
        ("4 degree bound on random instances", degree_bound),
        ("5 filtration identities", filtration_identities),
        ("6 symmetry", symmetry),
        (
            "7 determinism, integrality, Q vs F_p",
            determinism_and_integrality,
        ),
        ("8 k vs k+1 consistency", lambda_consistency),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let start = Instant::now();
        let outcome =
            catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".to_string()));
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(_) if took > LIMIT => Err(format!("took {took:.1?}, limit {LIMIT:?}")),
            o => o,
        };
        match outcome {
            Ok(detail) => println!("PASS criterion {name} ({took:.2?}): {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name} ({took:.2?}): {why}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} of 8 criteria failed");
        std::process::exit(1);
    }
    println!("all 8 criteria passed");
}
