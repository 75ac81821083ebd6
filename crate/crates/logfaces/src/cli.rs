//! Argument handling and verb dispatch. [`run`] never prints; `main` does.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::Parser;
use logfaces_core::extcone::{extend, extend_map, extended_fiber_product};
use logfaces_core::intsat::{integralize, saturate, SaturationResult};
use logfaces_core::pipeline::{fine_faces, fine_faces_of_diagram, Diagram, DiagramReport, FaceRecord};
use logfaces_core::presentation::{eliminate_redundant_generators, pushout};
use logfaces_core::rewriting::{buchberger_traced, reduce_basis, GroebnerBasis};
use logfaces_core::structure::{enumerate_primes, face_presentation, is_integral, units};
use logfaces_core::{Error, Exponent, Limits, MonomialOrder, Presentation};
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::json::*;

pub const VERBS: [&str; 12] = [
    "groebner",
    "nf",
    "units",
    "primes",
    "faces",
    "integralize",
    "saturate",
    "fine-faces",
    "pushout",
    "extend",
    "fiber-product",
    "check-theorem-c",
];

#[derive(Debug, Parser)]
#[command(
    name = "logfaces",
    version,
    about = "Gröbner bases, faces, integralization and saturation of presented monoids",
    after_help = "Verbs: groebner, nf, units, primes, faces, integralize, saturate, fine-faces,\n       pushout, extend, fiber-product, check-theorem-c\n\nExit codes: 0 success, 2 invalid input, 3 size cap exceeded."
)]
pub struct Args {
    /// What to compute.
    pub verb: String,
    /// Input JSON file, or `-` for standard input.
    pub input: PathBuf,
    /// Monomial order, e.g. `lex:x,y,z`, `grlex:y,x`, `weighted:x=2,y=1`.
    #[arg(long)]
    pub order: Option<String>,
    /// Exponent for `nf` in the form `2u+3v1`.
    #[arg(long)]
    pub exp: Option<String>,
    /// Print each adjoined or applied rule on standard error.
    #[arg(long)]
    pub trace: bool,
    /// Print a table instead of JSON.
    #[arg(long)]
    pub summary: bool,
    /// Leave the empty prime out of prime and face reports.
    #[arg(long)]
    pub exclude_empty_prime: bool,
    #[arg(long, default_value_t = Limits::default().max_prime_generators)]
    pub max_prime_generators: usize,
    #[arg(long, default_value_t = Limits::default().oracle_cells)]
    pub oracle_cells: u64,
    #[arg(long, default_value_t = Limits::default().parallelepiped_volume)]
    pub parallelepiped_volume: u64,
    #[arg(long, default_value_t = Limits::default().max_ambient_rank)]
    pub max_ambient_rank: usize,
}

impl Args {
    fn limits(&self) -> Limits {
        Limits {
            max_prime_generators: self.max_prime_generators,
            oracle_cells: self.oracle_cells,
            parallelepiped_volume: self.parallelepiped_volume,
            max_ambient_rank: self.max_ambient_rank,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, Serialize)]
struct ErrorBody {
    code: &'static str,
    message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    column: Option<usize>,
}

#[derive(Debug)]
struct Failure {
    exit: i32,
    body: ErrorBody,
}

impl Failure {
    fn invalid(code: &'static str, message: impl Into<String>) -> Self {
        Failure { exit: 2, body: ErrorBody { code, message: message.into(), line: None, column: None } }
    }
}

fn core_code(e: &Error) -> &'static str {
    match e {
        Error::DimensionMismatch { .. } => "dimension-mismatch",
        Error::InvalidGenerators(_) => "invalid-generators",
        Error::InvalidOrder(_) => "invalid-order",
        Error::Parse(_) => "invalid-exponent",
        Error::InvalidMap { .. } => "invalid-map",
        Error::SourceMismatch => "source-mismatch",
        Error::InvalidPrime { .. } => "invalid-prime",
        Error::NotIntegral => "not-integral",
        Error::NotPointed => "not-pointed",
        Error::ConeContainment { .. } => "cone-containment",
        Error::Matrix(_) => "matrix",
        Error::TargetMismatch => "target-mismatch",
        Error::TooManyGenerators { .. } => "too-many-generators",
        Error::OracleTooLarge { .. } => "oracle-too-large",
        Error::VolumeCap { .. } => "volume-cap",
        Error::RankCap { .. } => "rank-cap",
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let exit = if e.is_budget() { 3 } else { 2 };
        Failure { exit, body: ErrorBody { code: core_code(&e), message: e.to_string(), line: None, column: None } }
    }
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        match e {
            InputError::Schema(m) => Failure::invalid("schema", m),
            InputError::Core(e) => e.into(),
        }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        let code = match e.classify() {
            serde_json::error::Category::Data => "schema",
            serde_json::error::Category::Io => "io",
            _ => "malformed-json",
        };
        Failure { exit: 2, body: ErrorBody { code, message: e.to_string(), line: Some(e.line()), column: Some(e.column()) } }
    }
}

type Run<T> = Result<T, Failure>;

#[derive(Serialize)]
struct Doc<T: Serialize> {
    format: u32,
    #[serde(flatten)]
    body: T,
}

fn render<T: Serialize>(body: T) -> String {
    let v = serde_json::to_value(Doc { format: FORMAT, body }).expect("serializable");
    let mut s = String::new();
    write_value(&mut s, &v, 0);
    s.push('\n');
    s
}

/// Pretty printing, except that arrays of scalars stay on one line.
fn write_value(out: &mut String, v: &serde_json::Value, depth: usize) {
    use serde_json::Value;
    let pad = |out: &mut String, d: usize| out.extend(std::iter::repeat_n("  ", d));
    match v {
        Value::Array(xs) if xs.iter().all(|x| !x.is_array() && !x.is_object()) => {
            let items: Vec<String> = xs.iter().map(|x| serde_json::to_string(x).expect("scalar")).collect();
            out.push('[');
            out.push_str(&items.join(", "));
            out.push(']');
        }
        Value::Array(xs) => {
            out.push_str("[\n");
            for (i, x) in xs.iter().enumerate() {
                pad(out, depth + 1);
                write_value(out, x, depth + 1);
                out.push_str(if i + 1 < xs.len() { ",\n" } else { "\n" });
            }
            pad(out, depth);
            out.push(']');
        }
        Value::Object(m) if m.is_empty() => out.push_str("{}"),
        Value::Object(m) => {
            out.push_str("{\n");
            for (i, (k, x)) in m.iter().enumerate() {
                pad(out, depth + 1);
                out.push_str(&serde_json::to_string(k).expect("key"));
                out.push_str(": ");
                write_value(out, x, depth + 1);
                out.push_str(if i + 1 < m.len() { ",\n" } else { "\n" });
            }
            pad(out, depth);
            out.push('}');
        }
        _ => out.push_str(&serde_json::to_string(v).expect("scalar")),
    }
}

fn error_doc(body: ErrorBody) -> String {
    #[derive(Serialize)]
    struct E {
        error: ErrorBody,
    }
    render(E { error: body })
}

/// Runs one command. `args` excludes the program name.
pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let argv = std::iter::once(std::ffi::OsString::from("logfaces")).chain(args.into_iter().map(Into::into));
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome { code: 0, stdout: e.to_string(), stderr: String::new() },
                _ => fail(Failure::invalid("usage", e.to_string().trim_end())),
            };
        }
    };
    let mut stderr = String::new();
    match dispatch(&args, &mut stderr) {
        Ok(stdout) => Outcome { code: 0, stdout, stderr },
        Err(f) => {
            let mut out = fail(f);
            out.stderr.insert_str(0, &stderr);
            out
        }
    }
}

fn fail(f: Failure) -> Outcome {
    Outcome { code: f.exit, stdout: String::new(), stderr: error_doc(f.body) }
}

fn read_input(args: &Args) -> Run<String> {
    let res = if args.input.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin())
    } else {
        std::fs::read_to_string(&args.input)
    };
    res.map_err(|e| Failure::invalid("io", format!("{}: {e}", args.input.display())))
}

fn parse<T: DeserializeOwned>(text: &str) -> Run<T> {
    Ok(serde_json::from_str(text)?)
}

/// Syntax check first so that malformed input reports its position.
fn is_diagram(text: &str) -> Run<bool> {
    let v: serde_json::Value = serde_json::from_str(text)?;
    Ok(v.get("P").is_some())
}

fn dispatch(args: &Args, trace: &mut String) -> Run<String> {
    if !VERBS.contains(&args.verb.as_str()) {
        return Err(Failure::invalid("unknown-verb", format!("unknown verb {:?}; expected one of {}", args.verb, VERBS.join(", "))));
    }
    let summarized = ["fine-faces", "check-theorem-c", "saturate"];
    if args.summary && !summarized.contains(&args.verb.as_str()) {
        return Err(Failure::invalid("usage", format!("--summary is available for {}", summarized.join(", "))));
    }
    if args.exp.is_some() && args.verb != "nf" {
        return Err(Failure::invalid("usage", "--exp only applies to nf"));
    }
    let text = read_input(args)?;
    let limits = args.limits();
    match args.verb.as_str() {
        "groebner" => {
            let pres = parse::<PresentationJson>(&text)?.to_core()?;
            let gb = basis(&pres, &order(args, &pres)?, args.trace.then_some(trace));
            Ok(render(BasisJson::new(pres.generators(), &gb)))
        }
        "nf" => nf(args, &text, trace),
        "units" => {
            let pres = parse::<PresentationJson>(&text)?.to_core()?;
            let u = units(&pres);
            #[derive(Serialize)]
            #[serde(rename_all = "camelCase")]
            struct Units {
                units: Vec<String>,
                normal_form_zero: Vec<String>,
                diverges: bool,
            }
            Ok(render(Units {
                units: names(&pres, &u.units),
                normal_form_zero: names(&pres, &u.normal_form_zero),
                diverges: u.diverges(),
            }))
        }
        "primes" => {
            let pres = parse::<PresentationJson>(&text)?.to_core()?;
            let primes: Vec<Vec<String>> = enumerate_primes(&pres, &limits)?
                .iter()
                .filter(|p| !(args.exclude_empty_prime && p.is_empty()))
                .map(|p| names(&pres, p.indices()))
                .collect();
            #[derive(Serialize)]
            struct Primes {
                generators: Vec<String>,
                primes: Vec<Vec<String>>,
            }
            Ok(render(Primes { generators: pres.generators().names().to_vec(), primes }))
        }
        "faces" => {
            let pres = parse::<PresentationJson>(&text)?.to_core()?;
            let mut faces = Vec::new();
            for p in enumerate_primes(&pres, &limits)? {
                if args.exclude_empty_prime && p.is_empty() {
                    continue;
                }
                let face = face_presentation(&pres, &p)?;
                faces.push(PrimeFaceJson { prime: names(&pres, p.indices()), face: PresentationJson::from_core(&face) });
            }
            #[derive(Serialize)]
            struct Faces {
                faces: Vec<PrimeFaceJson>,
            }
            Ok(render(Faces { faces }))
        }
        "integralize" => {
            let pres = parse::<PresentationJson>(&text)?.to_core()?;
            #[derive(Serialize)]
            struct Int {
                integral: bool,
                presentation: PresentationJson,
            }
            Ok(render(Int { integral: is_integral(&pres), presentation: PresentationJson::from_core(&integralize(&pres)) }))
        }
        "saturate" => {
            let pres = parse::<PresentationJson>(&text)?.to_core()?;
            let s = saturate(&pres, &limits)?;
            if args.summary {
                return Ok(face_table(&[("-".to_string(), &s)]));
            }
            Ok(render(SaturationJson::new(&s)))
        }
        "fine-faces" if is_diagram(&text)? => diagram_report(args, &text, &limits),
        "fine-faces" => {
            let chart = parse::<PresentationJson>(&text)?.to_core()?;
            let mut records = fine_faces(&chart, &limits)?;
            if args.exclude_empty_prime {
                records.retain(|r| !r.prime.is_empty());
            }
            if args.summary {
                return Ok(records_table(&chart, &records));
            }
            #[derive(Serialize)]
            struct Report {
                chart: PresentationJson,
                faces: Vec<FaceRecordJson>,
            }
            let faces = records.iter().map(|r| FaceRecordJson::new(&chart, r)).collect();
            Ok(render(Report { chart: PresentationJson::from_core(&chart), faces }))
        }
        "check-theorem-c" => diagram_report(args, &text, &limits),
        "pushout" => {
            let (f, g) = parse::<DiagramJson>(&text)?.maps()?;
            let d = Diagram::new(f, g)?;
            let raw = pushout(&d.f, &d.g)?;
            let (chart, map) = eliminate_redundant_generators(&raw)?;
            #[derive(Serialize)]
            struct Pushout {
                pushout: PresentationJson,
                chart: PresentationJson,
                /// Image of each pushout generator in the simplified chart.
                simplification: Vec<Vec<JsonInt>>,
            }
            Ok(render(Pushout {
                pushout: PresentationJson::from_core(&raw),
                chart: PresentationJson::from_core(&chart),
                simplification: MapJson::new(&map).images,
            }))
        }
        "extend" => {
            let v: serde_json::Value = serde_json::from_str(&text)?;
            if v.get("matrix").is_some() {
                let (s, t, m) = parse::<ExtendMapInput>(&text)?.to_core()?;
                let map = extend_map(&m, &extend(&s), &extend(&t))?;
                Ok(render(ExtendedMapJson::new(&map)))
            } else {
                let cone = parse::<ConeInput>(&text)?.to_core()?;
                Ok(render(ExtendedConeJson::new(&extend(&cone))))
            }
        }
        "fiber-product" => {
            let (f, g) = if is_diagram(&text)? {
                let (f, g) = parse::<DiagramJson>(&text)?.maps()?;
                let d = Diagram::new(f, g)?;
                let r = diagram_cone_maps(&d)?;
                (r.0, r.1)
            } else {
                let input = parse::<FiberProductInput>(&text)?;
                let target = input.target.to_core()?;
                let (fs, fm) = input.f.to_core(target.rank())?;
                let (gs, gm) = input.g.to_core(target.rank())?;
                let base = extend(&target);
                (extend_map(&fm, &extend(&fs), &base)?, extend_map(&gm, &extend(&gs), &base)?)
            };
            let strata = extended_fiber_product(&f, &g)?;
            #[derive(Serialize)]
            struct Strata {
                strata: Vec<FiberStratumJson>,
            }
            Ok(render(Strata { strata: fiber_strata(&f, &g, &strata) }))
        }
        _ => unreachable!("verb list checked above"),
    }
}

fn diagram_cone_maps(
    d: &Diagram,
) -> Run<(logfaces_core::extcone::ExtendedConeMap, logfaces_core::extcone::ExtendedConeMap)> {
    use logfaces_core::pipeline::{dual_cone, dual_map};
    let base = extend(&dual_cone(d.f.source())?);
    let f = extend_map(&dual_map(&d.f)?, &extend(&dual_cone(d.f.target())?), &base)?;
    let g = extend_map(&dual_map(&d.g)?, &extend(&dual_cone(d.g.target())?), &base)?;
    Ok((f, g))
}

fn diagram_report(args: &Args, text: &str, limits: &Limits) -> Run<String> {
    let (f, g) = parse::<DiagramJson>(text)?.maps()?;
    let report: DiagramReport = fine_faces_of_diagram(&Diagram::new(f, g)?, limits)?;
    let mut doc = DiagramReportJson::new(&report);
    if args.exclude_empty_prime {
        let keep: Vec<bool> = report.faces.iter().map(|r| !r.prime.is_empty()).collect();
        let mut k = keep.iter();
        doc.faces.retain(|_| *k.next().unwrap());
        let mut k = keep.iter();
        doc.theorem_c.faces.retain(|_| *k.next().unwrap());
    }
    if args.summary {
        let mut s = records_table(&report.chart, &report.faces);
        let t = &doc.theorem_c;
        let faces = t.faces.iter().filter(|f| !f.strata.is_empty()).count();
        let strata = t.strata_matched.iter().filter(|&&m| m).count();
        let _ = writeln!(
            s,
            "\ntheorem C: {} ({faces}/{} faces, {strata}/{} strata matched)\n{}",
            if t.matched { "matched" } else { "NOT matched" },
            t.faces.len(),
            t.strata_matched.len(),
            t.note
        );
        return Ok(s);
    }
    Ok(render(doc))
}

fn order(args: &Args, pres: &Presentation) -> Run<MonomialOrder> {
    Ok(match &args.order {
        Some(desc) => MonomialOrder::parse(desc, pres.generators())?,
        None => pres.default_order(),
    })
}

fn rule_text(pres: &Presentation, head: &Exponent, body: &Exponent) -> String {
    format!("{} -> {}", head.display(pres.generators()), body.display(pres.generators()))
}

fn basis(pres: &Presentation, order: &MonomialOrder, trace: Option<&mut String>) -> GroebnerBasis {
    let mut lines = String::new();
    let raw = buchberger_traced(pres, order, &mut |r| {
        let _ = writeln!(lines, "{}", rule_text(pres, &r.head, &r.body));
    });
    if let Some(t) = trace {
        t.push_str(&lines);
    }
    reduce_basis(&raw)
}

fn nf(args: &Args, text: &str, trace: &mut String) -> Run<String> {
    let pres = parse::<PresentationJson>(text)?.to_core()?;
    let exp = args.exp.as_deref().ok_or_else(|| Failure::invalid("usage", "nf needs --exp"))?;
    let a = Exponent::parse(exp, pres.generators())?;
    let gb = basis(&pres, &order(args, &pres)?, None);
    let mut applied = Vec::new();
    let b = gb.normal_form_traced(&a, &mut applied);
    if args.trace {
        for i in applied {
            let r = &gb.rules()[i];
            let _ = writeln!(trace, "{}", rule_text(&pres, &r.head, &r.body));
        }
    }
    #[derive(Serialize)]
    #[serde(rename_all = "camelCase")]
    struct Nf {
        generators: Vec<String>,
        order: String,
        input: Vec<JsonInt>,
        normal_form: Vec<JsonInt>,
        text: String,
    }
    Ok(render(Nf {
        generators: pres.generators().names().to_vec(),
        order: gb.order().describe(pres.generators()),
        input: exponent(&a),
        normal_form: exponent(&b),
        text: b.display(pres.generators()),
    }))
}

fn prime_label(p: &[String]) -> String {
    if p.is_empty() {
        "{}".to_string()
    } else {
        format!("{{{}}}", p.join(","))
    }
}

fn records_table(chart: &Presentation, records: &[FaceRecord]) -> String {
    let rows: Vec<(String, &SaturationResult)> =
        records.iter().map(|r| (prime_label(&names(chart, r.prime.indices())), &r.fs)).collect();
    face_table(&rows)
}

fn face_table(rows: &[(String, &SaturationResult)]) -> String {
    let width = rows.iter().map(|(p, _)| p.chars().count()).max().unwrap_or(0).max(5);
    let mut s = format!("{:<width$}  rank  torsion  hilbert\n", "prime");
    for (p, fs) in rows {
        let torsion = if fs.torsion.is_empty() {
            "-".to_string()
        } else {
            fs.torsion.iter().map(|d| format!("Z/{d}")).collect::<Vec<_>>().join("+")
        };
        let pad = width - p.chars().count();
        let _ = writeln!(s, "{p}{:pad$}  {:<4}  {:<7}  {}", "", fs.rank, torsion, fs.hilbert.len());
    }
    s
}
