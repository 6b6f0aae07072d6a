use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use mixmult::graded_module::piece_dimension;
use mixmult::multiplicity::{
    br_multiplicities, generalized_samuel, lambda_mixed_table, lambda_pure_table,
    mixed_br_multiplicities, resolve_r, LocalQuery, MixedQuery, MultiplicityReport, PureQuery,
    SamuelReport, Settings,
};
use mixmult::polyfit::{LeadingForm, LengthTable};
use mixmult::verify::{corpus, describe_ring, run_checks, CorpusEntry, VerificationReport};
use mixmult::{Bidegree, Error as CoreError, Field, SubmoduleSpec};
use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use crate::instance::{parse_instance, InstanceFile, ParseError};

#[derive(Parser, Debug, Clone)]
#[command(
    name = "mixmult",
    version,
    about = "Exact Buchsbaum-Rim and mixed multiplicities"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Grid points per axis.
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    /// Base degrees scanned before a length is declared not finite.
    #[arg(long, global = true)]
    pub cutoff: Option<u32>,
    /// Consecutive points per axis that must agree.
    #[arg(long, global = true)]
    pub window: Option<usize>,
    /// Override the dimension r.
    #[arg(long, global = true)]
    pub r: Option<u32>,
    /// Reduce the instance modulo the prime P.
    #[arg(long, global = true, value_name = "P")]
    pub modp: Option<u64>,
    /// Emit the length table alone as CSV.
    #[arg(long, global = true, conflicts_with = "json")]
    pub csv: bool,
    /// Emit JSON (the default).
    #[arg(long, global = true)]
    pub json: bool,
    /// Worker threads; 1 evaluates serially.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Dimensions of the bigraded pieces M_(a,n).
    Dims { file: PathBuf },
    /// The length table λ(p,n), or λ(p,q,n) with --h2.
    Lambda {
        file: PathBuf,
        #[arg(long)]
        h: Option<String>,
        #[arg(long)]
        h2: Option<String>,
    },
    /// Buchsbaum-Rim multiplicities e^{i,k}.
    Br {
        file: PathBuf,
        #[arg(long)]
        h: Option<String>,
    },
    /// Mixed Buchsbaum-Rim multiplicities e^{i,j,k}.
    Mixed {
        file: PathBuf,
        #[arg(long)]
        h1: Option<String>,
        #[arg(long)]
        h2: Option<String>,
    },
    /// Generalized Samuel multiplicity e(I, M).
    Samuel {
        file: PathBuf,
        #[arg(long)]
        ideal: Option<String>,
        /// Neighborhood order (default r + 2).
        #[arg(long)]
        k: Option<u32>,
    },
    /// Whether I has maximal analytic spread on M.
    Spread {
        file: PathBuf,
        #[arg(long)]
        ideal: Option<String>,
        #[arg(long)]
        k: Option<u32>,
    },
    /// Run identity checks on an instance, or on the built-in corpus.
    Verify { check: Check, file: Option<PathBuf> },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Check {
    All,
    MixedOperatorFormula,
    Symmetry,
    MixedFactorSum,
    Telescoping,
    DegreeBound,
    Inclusions,
}

impl Check {
    fn matches(self, name: &str) -> bool {
        match self {
            Check::All => true,
            Check::MixedOperatorFormula => name == "mixed-operator-formula",
            Check::Symmetry => name == "symmetry",
            Check::MixedFactorSum => name == "mixed-factor-sum",
            Check::Telescoping => name == "telescoping",
            Check::DegreeBound => name == "degree-bound",
            Check::Inclusions => name == "inclusions",
        }
    }
}

/// What the process prints and its exit status.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub code: i32,
}

#[derive(Debug)]
enum Failure {
    Parse(ParseError),
    Core(CoreError),
    Usage(String),
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        Failure::Core(e)
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::Parse(e)
    }
}

impl Failure {
    fn to_json(&self) -> Value {
        let body = match self {
            Failure::Parse(e) => json!({
                "kind": e.kind,
                "message": e.message,
                "line": e.line.to_string(),
                "column": e.column.to_string(),
            }),
            Failure::Core(e) => json!({ "kind": e.kind(), "message": e.to_string() }),
            Failure::Usage(m) => json!({ "kind": "usage", "message": m }),
        };
        json!({ "error": body })
    }
}

enum Rendered {
    Json(Value, i32),
    Csv(String),
}

/// Parses `args` (program name first) and runs the command.
pub fn run_args<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            Output {
                stdout: e.render().to_string(),
                code,
            }
        }
    }
}

pub fn run(cli: &Cli) -> Output {
    let exec = || match execute(cli) {
        Ok(Rendered::Json(v, code)) => Output {
            stdout: pretty(&v),
            code,
        },
        Ok(Rendered::Csv(s)) => Output { stdout: s, code: 0 },
        Err(f) => Output {
            stdout: pretty(&f.to_json()),
            code: 1,
        },
    };
    match cli.threads {
        Some(n) if n > 1 => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(exec),
            Err(e) => Output {
                stdout: pretty(&Failure::Usage(e.to_string()).to_json()),
                code: 1,
            },
        },
        _ => exec(),
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn load(cli: &Cli, path: &Path) -> Result<InstanceFile, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    let inst = parse_instance(&text)?;
    match cli.modp {
        Some(p) => Ok(inst.with_field(prime_field(p)?)?),
        None => Ok(inst),
    }
}

fn prime_field(p: u64) -> Result<Field, Failure> {
    if !mixmult::scalar::is_prime(p) {
        return Err(Failure::Usage(format!("--modp {p}: not prime")));
    }
    Ok(Field::Prime(p))
}

fn settings(cli: &Cli, inst: Option<&InstanceFile>) -> Settings {
    let file = inst.map(|i| i.settings.clone()).unwrap_or_default();
    let d = Settings::default();
    Settings {
        cutoff: cli.cutoff.or(file.cutoff).unwrap_or(d.cutoff),
        window: cli.window.or(file.window).unwrap_or(d.window),
        grid: cli.grid.or(file.grid),
        parallel: cli.threads != Some(1),
    }
}

fn r_override(cli: &Cli, inst: &InstanceFile) -> Option<u32> {
    cli.r.or(inst.settings.r)
}

fn pick<'a>(
    inst: &'a InstanceFile,
    name: Option<&str>,
    position: usize,
) -> Result<&'a SubmoduleSpec, Failure> {
    match name {
        Some(n) => inst
            .submodule(n)
            .ok_or_else(|| Failure::Usage(format!("no submodule named `{n}`"))),
        None => inst
            .submodules
            .get(position)
            .map(|(_, h)| h)
            .ok_or_else(|| {
                Failure::Usage(format!(
                    "instance declares {} submodules, need {}",
                    inst.submodules.len(),
                    position + 1
                ))
            }),
    }
}

fn execute(cli: &Cli) -> Result<Rendered, Failure> {
    match &cli.command {
        Command::Dims { file } => {
            let inst = load(cli, file)?;
            let ext = cli.grid.or(inst.settings.grid).unwrap_or(8);
            let table = LengthTable::from_fn(vec!["a".into(), "n".into()], vec![ext, ext], |pt| {
                BigInt::from(piece_dimension(
                    &inst.module,
                    Bidegree::new(pt[0] as u32, pt[1] as u32),
                ))
            })?;
            emit(cli, &table, || {
                let mut doc = Map::new();
                doc.insert(
                    "query".into(),
                    query_json("dims", &inst, &settings(cli, Some(&inst)), &[]),
                );
                doc.insert("table".into(), table_json(&table));
                Ok((Value::Object(doc), 0))
            })
        }
        Command::Lambda { file, h, h2 } => {
            let inst = load(cli, file)?;
            let s = settings(cli, Some(&inst));
            let h1 = pick(&inst, h.as_deref(), 0)?;
            let (r, src) = resolve_r(&inst.module, r_override(cli, &inst))?;
            let extent = s.grid.unwrap_or(r as usize + 5);
            let (table, stops, used) = match h2 {
                Some(n2) => {
                    let h2 = pick(&inst, Some(n2), 1)?;
                    let q = MixedQuery {
                        module: inst.module.clone(),
                        h1: h1.clone(),
                        h2: h2.clone(),
                        r: Some(r),
                        settings: s,
                    };
                    let (t, st) = lambda_mixed_table(&q, extent)?;
                    (t, st, vec![h1, h2])
                }
                None => {
                    let q = PureQuery {
                        module: inst.module.clone(),
                        h: h1.clone(),
                        r: Some(r),
                        settings: s,
                    };
                    let (t, st) = lambda_pure_table(&q, extent)?;
                    (t, st, vec![h1])
                }
            };
            emit(cli, &table, || {
                let mut doc = Map::new();
                doc.insert("query".into(), query_json("lambda", &inst, &s, &used));
                doc.insert("table".into(), table_json(&table));
                doc.insert(
                    "r".into(),
                    json!({ "value": r.to_string(), "source": src.as_str() }),
                );
                doc.insert(
                    "certificates".into(),
                    json!({ "finiteness_stops": strings(&stops) }),
                );
                Ok((Value::Object(doc), 0))
            })
        }
        Command::Br { file, h } => {
            let inst = load(cli, file)?;
            let s = settings(cli, Some(&inst));
            let h = pick(&inst, h.as_deref(), 0)?;
            let rep = br_multiplicities(&PureQuery {
                module: inst.module.clone(),
                h: h.clone(),
                r: r_override(cli, &inst),
                settings: s,
            })?;
            emit(cli, &rep.table, || {
                Ok((report_json("br", &inst, &s, &[h], &rep), 0))
            })
        }
        Command::Mixed { file, h1, h2 } => {
            let inst = load(cli, file)?;
            let s = settings(cli, Some(&inst));
            let a = pick(&inst, h1.as_deref(), 0)?;
            let b = pick(&inst, h2.as_deref(), 1)?;
            let rep = mixed_br_multiplicities(&MixedQuery {
                module: inst.module.clone(),
                h1: a.clone(),
                h2: b.clone(),
                r: r_override(cli, &inst),
                settings: s,
            })?;
            emit(cli, &rep.table, || {
                Ok((report_json("mixed", &inst, &s, &[a, b], &rep), 0))
            })
        }
        Command::Samuel { file, ideal, k } | Command::Spread { file, ideal, k } => {
            let spread = matches!(cli.command, Command::Spread { .. });
            let inst = load(cli, file)?;
            let s = settings(cli, Some(&inst));
            let i = pick(&inst, ideal.as_deref(), 0)?;
            let rep = generalized_samuel(&LocalQuery {
                module: inst.module.clone(),
                ideal: i.clone(),
                k: *k,
                r: r_override(cli, &inst),
                settings: s,
            })?;
            let name = if spread { "spread" } else { "samuel" };
            emit(cli, &rep.report.table, || {
                Ok((samuel_json(name, &inst, &s, i, &rep, spread), 0))
            })
        }
        Command::Verify { check, file } => {
            if cli.csv {
                return Err(Failure::Usage("verify has no table to emit as CSV".into()));
            }
            let (entries, s, query) = match file {
                Some(f) => {
                    let inst = load(cli, f)?;
                    let s = settings(cli, Some(&inst));
                    let h1 = pick(&inst, None, 0)?.clone();
                    let h2 = inst.submodules.get(1).map(|(_, h)| h.clone());
                    let used: Vec<&SubmoduleSpec> =
                        inst.submodules.iter().take(2).map(|(_, h)| h).collect();
                    let q = query_json("verify", &inst, &s, &used);
                    let entry = CorpusEntry {
                        name: f
                            .file_stem()
                            .map_or("instance".into(), |n| n.to_string_lossy().into_owned()),
                        module: inst.module.clone(),
                        h1,
                        h2,
                    };
                    (vec![entry], s, q)
                }
                None => {
                    let field = match cli.modp {
                        Some(p) => prime_field(p)?,
                        None => Field::Rational,
                    };
                    let s = settings(cli, None);
                    let names: Vec<Value> = corpus(field).iter().map(|e| json!(e.name)).collect();
                    let q = json!({
                        "command": "verify",
                        "corpus": names,
                        "field": field_name(field),
                        "settings": settings_json(&s),
                    });
                    (corpus(field), s, q)
                }
            };
            let mut reports = Vec::new();
            for e in &entries {
                reports.extend(run_checks(e, s, |name| check.matches(name))?);
            }
            if reports.is_empty() {
                return Err(Failure::Usage(format!(
                    "check {check:?} does not apply to the instance (pair checks need two submodules)"
                )));
            }
            let passed = reports.iter().filter(|r| r.passed).count();
            let code = if passed == reports.len() { 0 } else { 2 };
            let doc = json!({
                "query": query,
                "verification": {
                    "checks": reports.len().to_string(),
                    "passed": passed.to_string(),
                    "reports": reports.iter().map(verification_json).collect::<Vec<_>>(),
                },
            });
            Ok(Rendered::Json(doc, code))
        }
    }
}

fn emit(
    cli: &Cli,
    table: &LengthTable,
    doc: impl FnOnce() -> Result<(Value, i32), Failure>,
) -> Result<Rendered, Failure> {
    if cli.csv {
        return Ok(Rendered::Csv(table_csv(table)));
    }
    let (v, code) = doc()?;
    Ok(Rendered::Json(v, code))
}

fn field_name(f: Field) -> String {
    match f {
        Field::Rational => "Q".into(),
        Field::Prime(p) => format!("Fp {p}"),
    }
}

fn strings<T: ToString>(xs: &[T]) -> Vec<String> {
    xs.iter().map(ToString::to_string).collect()
}

fn settings_json(s: &Settings) -> Value {
    json!({
        "grid": s.grid.map(|g| g.to_string()),
        "cutoff": s.cutoff.to_string(),
        "window": s.window.to_string(),
    })
}

fn query_json(command: &str, inst: &InstanceFile, s: &Settings, used: &[&SubmoduleSpec]) -> Value {
    let m = &inst.module;
    let subs: Vec<Value> = inst
        .submodules
        .iter()
        .filter(|(_, h)| used.iter().any(|u| std::ptr::eq(*u, h)))
        .map(|(name, h)| {
            json!({
                "name": name,
                "fiber_degree": h.fiber_degree().to_string(),
                "gens": strings(h.gens()),
            })
        })
        .collect();
    json!({
        "command": command,
        "field": field_name(inst.field),
        "ring": describe_ring(&inst.ring),
        "module": {
            "rank": m.free().rank().to_string(),
            "shifts": strings(m.free().shifts()),
            "relations": m.relations().iter().map(|r| strings(r.entries())).collect::<Vec<_>>(),
        },
        "submodules": subs,
        "settings": settings_json(s),
    })
}

fn table_json(t: &LengthTable) -> Value {
    json!({
        "axes": t.axes(),
        "extents": strings(t.extents()),
        "values": strings(t.values()),
    })
}

fn table_csv(t: &LengthTable) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{},value", t.axes().join(","));
    for (p, v) in t.points().iter().zip(t.values()) {
        let _ = writeln!(out, "{},{v}", strings(p).join(","));
    }
    out
}

fn leading_form_json(lf: &LeadingForm) -> Value {
    let mut map = Map::new();
    for (alpha, e) in &lf.coefficients {
        map.insert(LeadingForm::label(alpha), json!(e.to_string()));
    }
    Value::Object(map)
}

fn report_json(
    command: &str,
    inst: &InstanceFile,
    s: &Settings,
    used: &[&SubmoduleSpec],
    rep: &MultiplicityReport,
) -> Value {
    json!({
        "query": query_json(command, inst, s, used),
        "table": table_json(&rep.table),
        "r": { "value": rep.r.to_string(), "source": rep.r_source.as_str() },
        "leading_form": leading_form_json(&rep.leading_form),
        "certificates": certificates_json(rep),
    })
}

fn certificates_json(rep: &MultiplicityReport) -> Value {
    json!({
        "stabilization_base": rep.stabilization_base.to_string(),
        "window": rep.leading_form.window.to_string(),
        "degree_estimate": rep.degree_estimate.to_string(),
        "grid_enlarged": rep.grid_enlarged,
        "finiteness_stops": strings(&rep.finiteness_stops),
    })
}

fn samuel_json(
    command: &str,
    inst: &InstanceFile,
    s: &Settings,
    ideal: &SubmoduleSpec,
    rep: &SamuelReport,
    spread: bool,
) -> Value {
    let mut certs = certificates_json(&rep.report);
    if let Value::Object(m) = &mut certs {
        m.insert("k".into(), json!(rep.k.to_string()));
        m.insert(
            "e_at_k_plus_one".into(),
            json!(rep.e_at_k_plus_one.to_string()),
        );
    }
    let mut doc = Map::new();
    doc.insert("query".into(), query_json(command, inst, s, &[ideal]));
    doc.insert("table".into(), table_json(&rep.report.table));
    doc.insert(
        "r".into(),
        json!({ "value": rep.report.r.to_string(), "source": rep.report.r_source.as_str() }),
    );
    doc.insert(
        "leading_form".into(),
        leading_form_json(&rep.report.leading_form),
    );
    doc.insert("multiplicity".into(), json!(rep.e.to_string()));
    if spread {
        doc.insert(
            "maximal_analytic_spread".into(),
            json!(rep.e > BigInt::from(0)),
        );
    }
    doc.insert("certificates".into(), certs);
    Value::Object(doc)
}

fn verification_json(r: &VerificationReport) -> Value {
    json!({
        "theorem": r.theorem,
        "instance": r.instance,
        "passed": r.passed,
        "compared": r.compared.iter().map(|(at, l, rv)| json!({
            "at": at,
            "lhs": l.to_string(),
            "rhs": rv.to_string(),
        })).collect::<Vec<_>>(),
        "witness": r.witness.as_ref().map(|w| json!({
            "at": w.at,
            "lhs": w.lhs.to_string(),
            "rhs": w.rhs.to_string(),
        })),
    })
}
