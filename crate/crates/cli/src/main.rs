use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use mbs_homology::chain::homology_at;
use mbs_homology::corpus::{corpus, independence_of, run_entry};
use mbs_homology::error::Error;
use mbs_homology::exactalg::IntMatrix;
use mbs_homology::file::{parse_input, to_canonical_json, ExpectedGroup, InputFile};
use mbs_homology::flowdata::{assemble_multicomplex, FlowPresentation};
use mbs_homology::morse::{morse_complex, morse_to_flow, verify_morse_mb, MorseData};
use mbs_homology::multicomplex::{homology_table, validate_multicomplex, ValidationReport};
use mbs_homology::HomologyGroup;

/// Exact Morse-Bott-Smale homology from flow presentations.
#[derive(Parser)]
#[command(name = "mbh", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the anticommutation identity of a presentation.
    Validate {
        path: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Print the homology table.
    Homology {
        path: PathBuf,
        /// Inclusive range such as `0..5`; defaults to `0..dim`.
        #[arg(long)]
        degrees: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Compare Morse homology with the multicomplex through the embedding.
    Morse {
        path: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Compare homology of two presentations degree by degree.
    Compare {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Run the built-in corpus and the independence check.
    Corpus {
        #[arg(long)]
        json: bool,
    },
    /// Rewrite a file in canonical form on standard output.
    Fmt { path: PathBuf },
}

/// 1 for semantic failures, 2 for bad input.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }

    fn semantic(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InconsistentFlowData(_) | Error::InvalidMulticomplex(_) => Failure::semantic(e.to_string()),
            _ => Failure::input(e.to_string()),
        }
    }
}

type CmdResult = Result<u8, Failure>;

/// `println!` that treats a closed stdout as a normal end of output.
macro_rules! out {
    ($($arg:tt)*) => {
        emit(format_args!($($arg)*))
    };
}

fn emit(args: std::fmt::Arguments) {
    use std::io::Write;
    if let Err(e) = writeln!(std::io::stdout().lock(), "{args}") {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: cannot write output: {e}");
        std::process::exit(2);
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Validate { path, json } => cmd_validate(&path, json),
        Command::Homology {
            path,
            degrees,
            json,
        } => cmd_homology(&path, degrees.as_deref(), json),
        Command::Morse { path, json } => cmd_morse(&path, json),
        Command::Compare { a, b, json } => cmd_compare(&a, &b, json),
        Command::Corpus { json } => cmd_corpus(json),
        Command::Fmt { path } => cmd_fmt(&path),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

struct Loaded {
    presentation: FlowPresentation,
    morse: Option<MorseData>,
    expected: Option<Vec<ExpectedGroup>>,
}

fn load(path: &Path) -> Result<Loaded, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let located = |e: Error| Failure::input(format!("{}: {e}", path.display()));
    match parse_input(&text).map_err(located)? {
        InputFile::Flow(f) => Ok(Loaded {
            presentation: f.to_presentation().map_err(located)?,
            morse: None,
            expected: f.expected,
        }),
        InputFile::Morse(f) => {
            let md = f.to_morse_data().map_err(located)?;
            Ok(Loaded {
                presentation: morse_to_flow(&md, None).map_err(located)?,
                morse: Some(md),
                expected: f.expected,
            })
        }
    }
}

fn int_value(v: &num_bigint::BigInt) -> Value {
    match v.to_i64() {
        Some(n) => json!(n),
        None => json!(v.to_string()),
    }
}

fn matrix_value(m: &IntMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|r| Value::Array(m.row(r).iter().map(int_value).collect()))
            .collect(),
    )
}

fn group_value(degree: usize, g: &HomologyGroup) -> Value {
    json!({
        "betti": g.betti,
        "degree": degree,
        "torsion": g.torsion.iter().map(int_value).collect::<Vec<_>>(),
    })
}

fn report_value(report: &ValidationReport) -> Value {
    json!({
        "identity_failures": report.identity_failures.iter().map(|f| json!({
            "i": f.i, "j": f.j, "p": f.p, "residual": matrix_value(&f.residual),
        })).collect::<Vec<_>>(),
        "structural_failures": report.structural_failures.iter().map(|s| json!(s.to_string())).collect::<Vec<_>>(),
    })
}

fn document(valid: bool, report: Option<&ValidationReport>, homology: Vec<Value>, comparisons: Vec<Value>) -> Value {
    let (identity, structural) = match report.map(report_value) {
        Some(Value::Object(mut o)) => (
            o.remove("identity_failures").unwrap_or(json!([])),
            o.remove("structural_failures").unwrap_or(json!([])),
        ),
        _ => (json!([]), json!([])),
    };
    json!({
        "comparisons": comparisons,
        "homology": homology,
        "identity_failures": identity,
        "structural_failures": structural,
        "valid": valid,
    })
}

fn print_json(v: &Value) {
    out!("{}", serde_json::to_string_pretty(v).expect("json values serialize"));
}

fn render_table(prefix: &str, rows: &[(usize, HomologyGroup)]) -> String {
    rows.iter()
        .map(|(k, g)| format!("{prefix}_{k}={g}"))
        .collect::<Vec<_>>()
        .join(", ")
}

fn cmd_validate(path: &Path, json_out: bool) -> CmdResult {
    let loaded = load(path)?;
    let mc = assemble_multicomplex(&loaded.presentation)?;
    let report = validate_multicomplex(&mc);
    let valid = report.is_valid();
    if json_out {
        print_json(&document(valid, Some(&report), vec![], vec![]));
    } else if valid {
        out!("valid: multicomplex identity holds at every (j, p, i)");
    } else {
        out!("invalid: {} identity failure(s)", report.identity_failures.len());
        for f in &report.identity_failures {
            out!("  identity fails at j={}, p={}, i={}: residual {}", f.j, f.p, f.i, f.residual);
        }
        for s in &report.structural_failures {
            out!("  structural: {s}");
        }
    }
    Ok(if valid { 0 } else { 1 })
}

fn parse_degrees(spec: &str) -> Result<(usize, usize), Failure> {
    let bad = || Failure::input(format!("--degrees expects a range like 0..5, got {spec:?}"));
    let (a, b) = spec.split_once("..").ok_or_else(bad)?;
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

fn cmd_homology(path: &Path, degrees: Option<&str>, json_out: bool) -> CmdResult {
    let loaded = load(path)?;
    let dim = loaded.presentation.dim;
    let (lo, hi) = match degrees {
        Some(s) => parse_degrees(s)?,
        None => (0, dim),
    };
    // the table covers degrees below the cap, so raise it to see `hi`
    let cap = loaded.presentation.effective_cap().max((hi + 2) & !1);
    let fp = loaded.presentation.with_cap(cap);
    let mc = assemble_multicomplex(&fp)?;
    let report = validate_multicomplex(&mc);
    if !report.is_valid() {
        if json_out {
            print_json(&document(false, Some(&report), vec![], vec![]));
        }
        return Err(Failure::semantic(format!(
            "invalid multicomplex, first failure at {}",
            report.first_failure_location()
        )));
    }
    let table = homology_table(&mc)?;
    let rows: Vec<(usize, HomologyGroup)> = table
        .into_iter()
        .filter(|e| e.degree >= lo && e.degree <= hi)
        .map(|e| (e.degree, e.group))
        .collect();

    let mut comparisons = Vec::new();
    let mut mismatch = false;
    for x in loaded.expected.iter().flatten() {
        if let Some((_, g)) = rows.iter().find(|(k, _)| *k == x.degree) {
            let ok = g.is_isomorphic(&x.group());
            mismatch |= !ok;
            comparisons.push(json!({
                "degree": x.degree,
                "expected": group_value(x.degree, &x.group()),
                "match": ok,
            }));
        }
    }
    if json_out {
        let homology = rows.iter().map(|(k, g)| group_value(*k, g)).collect();
        print_json(&document(true, Some(&report), homology, comparisons));
    } else {
        out!("{}", render_table("HB", &rows));
    }
    if mismatch {
        eprintln!("homology differs from the expected table");
        return Ok(1);
    }
    Ok(0)
}

fn cmd_morse(path: &Path, json_out: bool) -> CmdResult {
    let loaded = load(path)?;
    let md = loaded
        .morse
        .ok_or_else(|| Failure::input(format!("{}: not a Morse data file", path.display())))?;
    let cm = morse_complex(&md).map_err(|e| Failure::semantic(e.to_string()))?;
    let morse_rows: Vec<(usize, HomologyGroup)> = (0..=md.dim)
        .map(|k| Ok((k, homology_at(&cm, k as i64)?)))
        .collect::<Result<_, Error>>()?;
    let mc = mbs_homology::build_multicomplex(&loaded.presentation)?;
    let v = verify_morse_mb(&md, &mc)?;
    let exact = if v.chain_map_exact() { "exact" } else { "NOT exact" };
    let qi = if v.quasi_isomorphism { "yes" } else { "no" };
    if json_out {
        let doc = json!({
            "chain_map_exact": v.chain_map_exact(),
            "homology": morse_rows.iter().map(|(k, g)| group_value(*k, g)).collect::<Vec<_>>(),
            "induced_maps": v.induced.iter().map(|r| json!({
                "degree": r.degree, "isomorphism": r.is_isomorphism, "matrix": matrix_value(&r.matrix),
            })).collect::<Vec<_>>(),
            "multicomplex_homology": v.multicomplex_homology.iter().enumerate()
                .map(|(k, g)| group_value(k, g)).collect::<Vec<_>>(),
            "odd_components_zero": v.odd_components_zero,
            "quasi_isomorphism": v.quasi_isomorphism,
            "residuals": v.residuals.iter().map(|(k, r)| json!({"degree": k, "matrix": matrix_value(r)})).collect::<Vec<_>>(),
        });
        print_json(&doc);
    } else {
        out!("Morse homology: {}", render_table("HM", &morse_rows));
        let mb: Vec<(usize, HomologyGroup)> = v.multicomplex_homology.iter().cloned().enumerate().collect();
        out!("multicomplex:   {}", render_table("HB", &mb));
        for (k, r) in &v.residuals {
            out!("residual in degree {k}: {r}");
        }
        out!("chain map: {exact}; quasi-isomorphism: {qi}");
    }
    Ok(if v.passed() { 0 } else { 1 })
}

fn table_through(loaded: &Loaded, top: usize) -> Result<Vec<HomologyGroup>, Failure> {
    let mc = mbs_homology::build_multicomplex(&loaded.presentation)?;
    Ok(homology_table(&mc)?
        .into_iter()
        .take(top + 1)
        .map(|e| e.group)
        .collect())
}

fn cmd_compare(a: &Path, b: &Path, json_out: bool) -> CmdResult {
    let la = load(a)?;
    let lb = load(b)?;
    let top = la.presentation.dim.min(lb.presentation.dim);
    let ta = table_through(&la, top)?;
    let tb = table_through(&lb, top)?;
    let mut all = true;
    let mut comparisons = Vec::new();
    for k in 0..=top {
        let ok = ta[k].is_isomorphic(&tb[k]);
        all &= ok;
        comparisons.push(json!({
            "a": group_value(k, &ta[k]),
            "b": group_value(k, &tb[k]),
            "degree": k,
            "match": ok,
        }));
        if !json_out {
            let verdict = if ok { "match" } else { "differ" };
            out!("HB_{k}: {} vs {} ({verdict})", ta[k], tb[k]);
        }
    }
    if json_out {
        print_json(&document(true, None, vec![], comparisons));
    } else {
        out!("isomorphic: {}", if all { "yes" } else { "no" });
    }
    Ok(if all { 0 } else { 1 })
}

fn cmd_corpus(json_out: bool) -> CmdResult {
    let entries = corpus();
    let mut all = true;
    let mut rows = Vec::new();
    for e in &entries {
        let r = run_entry(e);
        all &= r.passed();
        if !json_out {
            let status = if r.passed() { "PASS" } else { "FAIL" };
            let table: Vec<(usize, HomologyGroup)> = r.homology.iter().cloned().enumerate().collect();
            let detail = r.error.clone().unwrap_or_else(|| render_table("HB", &table));
            out!("{status} {:<14} {detail}", r.name);
        }
        rows.push(json!({
            "error": r.error,
            "homology": r.homology.iter().enumerate().map(|(k, g)| group_value(k, g)).collect::<Vec<_>>(),
            "name": r.name,
            "passed": r.passed(),
        }));
    }
    let ind = independence_of(&entries);
    all &= ind.passed();
    if json_out {
        let groups: Vec<Value> = ind
            .groups
            .iter()
            .map(|g| json!({"manifold": g.manifold, "members": g.members, "passed": g.passed()}))
            .collect();
        print_json(&json!({"entries": rows, "independence": groups, "passed": all}));
    } else {
        for g in &ind.groups {
            let status = if g.passed() { "PASS" } else { "FAIL" };
            out!("{status} independence {}: {}", g.manifold, g.members.join(", "));
        }
    }
    Ok(if all { 0 } else { 1 })
}

fn cmd_fmt(path: &Path) -> CmdResult {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let out = match parse_input(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))? {
        InputFile::Flow(f) => to_canonical_json(&f),
        InputFile::Morse(f) => to_canonical_json(&f),
    };
    print!("{out}");
    Ok(0)
}
