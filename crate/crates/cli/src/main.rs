mod render;

use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use uff_core::algebra::{antimatter_split, is_primitive, ma_add, ma_content, ma_deg, ma_mul, ma_ord, AlgebraElement, CoefficientField};
use uff_core::catalog::{list_fixtures, run_fixture};
use uff_core::dplusm::{
    componentwise_associated, coset_count, product, same_factorization, sqrt2_twist_family, twist_family, CosetSpace,
    FiniteField, DEFAULT_PRECISION,
};
use uff_core::*;

const SCHEMA_ID: &str = "uff/v1";

const EXIT_YES: u8 = 0;
const EXIT_NO: u8 = 1;
const EXIT_UNKNOWN: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "uff", version, about = "Factorization invariants of Puiseux monoids, monoid algebras and D+M rings")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Output::Json, global = true)]
    output: Output,

    /// Number of family generators to materialize.
    #[arg(long = "truncate", global = true, default_value_t = 8)]
    truncate: usize,

    /// Number of witnesses to collect.
    #[arg(long = "limit", global = true, default_value_t = 5)]
    limit: usize,

    /// Search nodes per enumeration.
    #[arg(long = "cap", global = true, default_value_t = 1_000_000)]
    cap: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Json,
    Text,
}

#[derive(Args)]
struct MonoidArg {
    /// Presentation as inline JSON or a path to a JSON file.
    #[arg(long)]
    monoid: String,
}

#[derive(Subcommand)]
enum Command {
    /// Membership of an element.
    Member {
        #[command(flatten)]
        m: MonoidArg,
        #[arg(long)]
        element: String,
    },
    /// Whether `--divisor` divides `--element`.
    Divides {
        #[command(flatten)]
        m: MonoidArg,
        #[arg(long)]
        divisor: String,
        #[arg(long)]
        element: String,
    },
    /// Atoms, optionally up to a cutoff.
    Atoms {
        #[command(flatten)]
        m: MonoidArg,
        #[arg(long)]
        cutoff: Option<String>,
    },
    /// Factorizations of an element.
    Factor {
        #[command(flatten)]
        m: MonoidArg,
        #[arg(long)]
        element: String,
    },
    /// Length set of an element.
    Lengths {
        #[command(flatten)]
        m: MonoidArg,
        #[arg(long)]
        element: String,
    },
    /// Maximal common divisors of a finite set.
    Mcd {
        #[command(flatten)]
        m: MonoidArg,
        /// Comma separated elements; may be repeated.
        #[arg(long, required = true)]
        set: Vec<String>,
    },
    /// Finiteness property probe.
    Probe {
        #[command(flatten)]
        m: MonoidArg,
        /// Atomic, BF, IDF, MCDFinite, FF, UFF or Antimatter.
        #[arg(long)]
        property: String,
        /// Comma separated elements to restrict the probe to; may be repeated.
        #[arg(long)]
        sample: Vec<String>,
    },
    /// Cosets of k^x in K^x.
    DplusmCosets {
        /// `GF(p^m)`.
        #[arg(long)]
        field: String,
        /// `GF(p^d)` with d | m.
        #[arg(long)]
        subfield: String,
    },
    /// Twisted factorizations of t^e in k + tK[[t]].
    DplusmTwist {
        /// `GF(p^m)`, or `Q(sqrt2)` for the infinite family over Q.
        #[arg(long)]
        field: String,
        #[arg(long, default_value = "GF(2)")]
        subfield: String,
        #[arg(long, default_value_t = 2)]
        exponent: usize,
        #[arg(long, default_value_t = DEFAULT_PRECISION)]
        precision: usize,
        /// Family size for `Q(sqrt2)`.
        #[arg(long, default_value_t = 5)]
        count: usize,
    },
    /// Arithmetic in the monoid algebra F[M].
    Algebra {
        #[command(flatten)]
        m: MonoidArg,
        /// `Q` or `GF(p)`.
        #[arg(long, default_value = "Q")]
        field: String,
        #[arg(long, value_enum)]
        op: AlgebraOp,
        /// e.g. `1 + 2*x^(1/2)`.
        #[arg(long, allow_hyphen_values = true)]
        left: String,
        #[arg(long, allow_hyphen_values = true)]
        right: Option<String>,
    },
    /// Run the canned fixtures.
    VerifyPaper {
        /// Fixture id; all fixtures when absent.
        #[arg(long)]
        fixture: Option<String>,
        /// Only list the fixture ids.
        #[arg(long)]
        list: bool,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AlgebraOp {
    Add,
    Mul,
    Deg,
    Ord,
    Content,
    Primitive,
    Split,
}

/// What a subcommand produced.
struct Outcome {
    code: u8,
    json: Value,
    text: String,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_YES };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let name = command_name(&cli.command);
    match run(&cli) {
        Ok(out) => {
            match cli.output {
                Output::Json => println!("{}", serde_json::to_string_pretty(&out.json).expect("json")),
                Output::Text => print!("{}", out.text),
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            if cli.output == Output::Json {
                let doc = json!({"schema": SCHEMA_ID, "command": name, "error": {"kind": error_kind(&e), "message": e.to_string()}});
                println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
            }
            eprintln!("uff {name}: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Member { .. } => "member",
        Command::Divides { .. } => "divides",
        Command::Atoms { .. } => "atoms",
        Command::Factor { .. } => "factor",
        Command::Lengths { .. } => "lengths",
        Command::Mcd { .. } => "mcd",
        Command::Probe { .. } => "probe",
        Command::DplusmCosets { .. } => "dplusm-cosets",
        Command::DplusmTwist { .. } => "dplusm-twist",
        Command::Algebra { .. } => "algebra",
        Command::VerifyPaper { .. } => "verify-paper",
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::InvalidArgument(_) => "invalid-argument",
        Error::Domain(_) => "domain",
        Error::Precondition(_) => "precondition",
        Error::TooLarge(_) => "too-large",
        Error::Parse(_) => "parse",
    }
}

fn load_monoid(src: &str) -> Result<MonoidPresentation> {
    let text = if src.trim_start().starts_with('{') {
        src.to_string()
    } else {
        std::fs::read_to_string(Path::new(src)).map_err(|e| Error::InvalidArgument(format!("cannot read {src:?}: {e}")))?
    };
    let v: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("monoid JSON: {e}")))?;
    MonoidPresentation::from_json(&v)
}

/// Splits comma separated lists, keeping commas inside parentheses.
fn parse_list(items: &[String]) -> Result<Vec<Element>> {
    let mut out = Vec::new();
    for item in items {
        let mut depth = 0i32;
        let mut cur = String::new();
        for ch in item.chars().chain(std::iter::once(',')) {
            match ch {
                '(' => depth += 1,
                ')' => depth -= 1,
                _ => {}
            }
            if ch == ',' && depth == 0 {
                let s = cur.trim();
                if !s.is_empty() {
                    out.push(s.parse()?);
                }
                cur.clear();
            } else {
                cur.push(ch);
            }
        }
    }
    Ok(out)
}

fn verdict_code(v: Verdict) -> u8 {
    match v {
        Verdict::Yes => EXIT_YES,
        Verdict::No => EXIT_NO,
        Verdict::UnknownAtBudget => EXIT_UNKNOWN,
    }
}

fn run(cli: &Cli) -> Result<Outcome> {
    let budget = Budget::new(cli.truncate, cli.limit, cli.cap)?;
    let name = command_name(&cli.command);
    let doc = |fields: Value| {
        let mut d = json!({"schema": SCHEMA_ID, "command": name});
        d.as_object_mut().unwrap().extend(fields.as_object().unwrap().clone());
        d
    };
    Ok(match &cli.command {
        Command::Member { m, element } => {
            let m = load_monoid(&m.monoid)?;
            let q: Element = element.parse()?;
            let r = is_member(&m, &q, budget)?;
            Outcome {
                code: verdict_code(r.verdict),
                text: render::report(&format!("{q} in {m}"), &r),
                json: doc(json!({"monoid": m, "element": q, "report": r})),
            }
        }
        Command::Divides { m, divisor, element } => {
            let m = load_monoid(&m.monoid)?;
            let d: Element = divisor.parse()?;
            let q: Element = element.parse()?;
            let r = divides(&m, &d, &q, budget)?;
            Outcome {
                code: verdict_code(r.verdict),
                text: render::report(&format!("{d} divides {q} in {m}"), &r),
                json: doc(json!({"monoid": m, "divisor": d, "element": q, "report": r})),
            }
        }
        Command::Atoms { m, cutoff } => {
            let m = load_monoid(&m.monoid)?;
            let cutoff: Option<Element> = cutoff.as_deref().map(str::parse).transpose()?;
            let l = atoms_up_to(&m, cutoff.as_ref(), budget)?;
            let head = match &cutoff {
                Some(c) => format!("atoms of {m} up to {c}"),
                None => format!("atoms of {m}"),
            };
            Outcome {
                code: EXIT_YES,
                text: render::listing(&head, &l),
                json: doc(json!({"monoid": m, "cutoff": cutoff, "listing": l})),
            }
        }
        Command::Factor { m, element } => {
            let m = load_monoid(&m.monoid)?;
            let q: Element = element.parse()?;
            let l = factorizations(&m, &q, budget)?;
            Outcome {
                code: EXIT_YES,
                text: render::listing(&format!("factorizations of {q} in {m}"), &l),
                json: doc(json!({"monoid": m, "element": q, "listing": l})),
            }
        }
        Command::Lengths { m, element } => {
            let m = load_monoid(&m.monoid)?;
            let q: Element = element.parse()?;
            let l = length_set(&m, &q, budget)?;
            Outcome {
                code: EXIT_YES,
                text: render::listing(&format!("lengths of {q} in {m}"), &l),
                json: doc(json!({"monoid": m, "element": q, "listing": l})),
            }
        }
        Command::Mcd { m, set } => {
            let m = load_monoid(&m.monoid)?;
            let set = parse_list(set)?;
            let l = mcds(&m, &set, budget)?;
            let shown: Vec<String> = set.iter().map(ToString::to_string).collect();
            Outcome {
                code: EXIT_YES,
                text: render::listing(&format!("MCDs of {{{}}} in {m}", shown.join(", ")), &l),
                json: doc(json!({"monoid": m, "set": set, "listing": l})),
            }
        }
        Command::Probe { m, property, sample } => {
            let m = load_monoid(&m.monoid)?;
            let p: Property = property.parse()?;
            let sample = parse_list(sample)?;
            let r = probe(&m, p, &sample, budget)?;
            // a probe that settles the property either way has succeeded
            let code = if r.verdict == Verdict::UnknownAtBudget { EXIT_UNKNOWN } else { EXIT_YES };
            Outcome {
                code,
                text: render::report(&format!("{p} for {m}"), &r),
                json: doc(json!({"monoid": m, "property": p, "sample": sample, "report": r})),
            }
        }
        Command::DplusmCosets { field, subfield } => {
            let (k, d) = field_pair(field, subfield)?;
            let space = CosetSpace::new(&k, d)?;
            let n = coset_count(&k, d)?;
            let mut cosets: Vec<(String, Vec<String>)> =
                space.transversal().iter().map(|r| (r.to_string(), Vec::new())).collect();
            for u in k.units() {
                let rep = space.representative(&u)?.to_string();
                let slot = cosets.iter_mut().find(|(r, _)| *r == rep).expect("transversal covers every unit");
                slot.1.push(u.to_string());
            }
            let mut text = format!("{k} over GF({}^{d}): {n} cosets\n", k.characteristic());
            for (rep, members) in &cosets {
                text.push_str(&format!("  {rep}: {}\n", members.join(" ")));
            }
            Outcome {
                code: EXIT_YES,
                text,
                json: doc(json!({
                    "field": k.to_string(),
                    "subfield_degree": d,
                    "modulus": k.modulus(),
                    "count": n,
                    "cosets": cosets.iter().map(|(r, m)| json!({"representative": r, "members": m})).collect::<Vec<_>>(),
                })),
            }
        }
        Command::DplusmTwist { field, subfield, exponent, precision, count } => {
            if field.replace(' ', "").eq_ignore_ascii_case("Q(sqrt2)") {
                sqrt2_twists(*count, doc)?
            } else {
                finite_twists(field, subfield, *exponent, *precision, doc)?
            }
        }
        Command::Algebra { m, field, op, left, right } => {
            let m = load_monoid(&m.monoid)?;
            let field: CoefficientField = field.parse()?;
            let f = AlgebraElement::parse(field, m.clone(), left)?;
            let g = || -> Result<AlgebraElement> {
                let r = right.as_deref().ok_or_else(|| Error::InvalidArgument("this op needs --right".into()))?;
                AlgebraElement::parse(field, m.clone(), r)
            };
            let (code, result, text): (u8, Value, String) = match op {
                AlgebraOp::Add => {
                    let h = ma_add(&f, &g()?)?;
                    (EXIT_YES, h.to_json(), h.to_string())
                }
                AlgebraOp::Mul => {
                    let h = ma_mul(&f, &g()?)?;
                    (EXIT_YES, h.to_json(), h.to_string())
                }
                AlgebraOp::Deg => {
                    let d = ma_deg(&f)?;
                    (EXIT_YES, json!(d), d.to_string())
                }
                AlgebraOp::Ord => {
                    let d = ma_ord(&f)?;
                    (EXIT_YES, json!(d), d.to_string())
                }
                AlgebraOp::Content => {
                    let c = ma_content(&f)?;
                    (EXIT_YES, json!(c.to_string()), c.to_string())
                }
                AlgebraOp::Primitive => {
                    let p = is_primitive(&f)?;
                    (verdict_code(Verdict::from_bool(p)), json!(Verdict::from_bool(p)), Verdict::from_bool(p).to_string())
                }
                AlgebraOp::Split => {
                    let (a, b) = antimatter_split(&f)?;
                    let text = format!("({a}) * ({b})");
                    (EXIT_YES, json!({"left": a.to_json(), "right": b.to_json()}), text)
                }
            };
            let op_name = op.to_possible_value().expect("named").get_name().to_string();
            Outcome {
                code,
                text: format!("{op_name}({f}) over {field}[{m}] = {text}\n"),
                json: doc(json!({"field": field, "monoid": m, "op": op_name, "left": f.to_json(), "result": result})),
            }
        }
        Command::VerifyPaper { fixture, list } => {
            if *list {
                let ids = list_fixtures();
                return Ok(Outcome {
                    code: EXIT_YES,
                    text: ids.iter().map(|id| format!("{id}\n")).collect(),
                    json: doc(json!({"fixtures": ids})),
                });
            }
            let ids: Vec<String> = match fixture {
                Some(id) => vec![id.clone()],
                None => list_fixtures().into_iter().map(String::from).collect(),
            };
            let reports = ids.iter().map(|id| run_fixture(id)).collect::<Result<Vec<_>>>()?;
            let passed = reports.iter().all(|r| r.passed);
            Outcome {
                code: if passed { EXIT_YES } else { EXIT_NO },
                text: reports.iter().map(ToString::to_string).collect(),
                json: doc(json!({"passed": passed, "fixtures": reports})),
            }
        }
    })
}

fn field_pair(field: &str, subfield: &str) -> Result<(FiniteField, usize)> {
    let k: FiniteField = field.parse()?;
    let (p, d) = uff_core::dplusm::parse_field_spec(subfield)?;
    if p != k.characteristic() {
        return Err(Error::InvalidArgument(format!("{subfield} is not a subfield of {k}")));
    }
    Ok((k, d))
}

fn finite_twists(field: &str, subfield: &str, e: usize, precision: usize, doc: impl Fn(Value) -> Value) -> Result<Outcome> {
    let (k, d) = field_pair(field, subfield)?;
    let reps = CosetSpace::new(&k, d)?.transversal();
    let fams = twist_family(&k, e, &reps, precision)?;
    let target = uff_core::dplusm::SeriesElement::monomial(&k, k.one(), e, precision)?;
    let mut products_ok = true;
    let mut componentwise_distinct = true;
    let mut classes: Vec<usize> = Vec::new();
    for (i, f) in fams.iter().enumerate() {
        products_ok &= product(f)? == target;
        for g in &fams[i + 1..] {
            componentwise_distinct &= !componentwise_associated(f, g, d)?;
        }
        let mut class = i;
        for j in 0..i {
            if same_factorization(f, &fams[j], d)? {
                class = classes[j];
                break;
            }
        }
        classes.push(class);
    }
    let distinct_classes = classes.iter().enumerate().filter(|(i, c)| i == *c).count();
    let rendered: Vec<Vec<String>> = fams.iter().map(|f| f.iter().map(ToString::to_string).collect()).collect();
    let mut text = format!("twists of t^{e} in GF({}^{d}) + t {k}[[t]]\n", k.characteristic());
    for (r, f) in reps.iter().zip(&rendered) {
        text.push_str(&format!("  u = {r}: ({})\n", f.join(") * (")));
    }
    text.push_str(&format!(
        "products equal t^{e}: {products_ok}\ncomponentwise non-associate: {componentwise_distinct}\ndistinct up to reordering: {distinct_classes}\n"
    ));
    Ok(Outcome {
        code: if products_ok && componentwise_distinct { EXIT_YES } else { EXIT_NO },
        text,
        json: doc(json!({
            "field": k.to_string(),
            "subfield_degree": d,
            "exponent": e,
            "precision": precision,
            "representatives": reps.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "factorizations": rendered,
            "products_ok": products_ok,
            "componentwise_distinct": componentwise_distinct,
            "distinct_up_to_reordering": distinct_classes,
        })),
    })
}

fn sqrt2_twists(count: usize, doc: impl Fn(Value) -> Value) -> Result<Outcome> {
    let fam = sqrt2_twist_family(count)?;
    let mut distinct = true;
    for (i, (u, _)) in fam.iter().enumerate() {
        for (v, _) in &fam[i + 1..] {
            distinct &= !uff_core::dplusm::sqrt2_same_coset(u, v)?;
        }
    }
    let pairs: Vec<Value> = fam.iter().map(|(u, w)| json!({"unit": u.to_string(), "inverse": w.to_string()})).collect();
    let mut text = String::from("twists (u t)(u^-1 t) of t^2 in Q + t Q(sqrt2)[[t]]\n");
    for (u, w) in &fam {
        text.push_str(&format!("  u = {u}, u^-1 = {w}\n"));
    }
    text.push_str(&format!("pairwise distinct cosets: {distinct}\n"));
    Ok(Outcome {
        code: if distinct { EXIT_YES } else { EXIT_NO },
        text,
        json: doc(json!({"field": "Q(sqrt2)", "exponent": 2, "twists": pairs, "componentwise_distinct": distinct})),
    })
}
