//! Command-line front-end: every library operation as a subcommand with
//! deterministic text or JSON output, plus a one-shot `verify-paper` runner
//! for the full verification suite.

use charclass::error::Error;
use charclass::fixtures::load_model;
use charclass::genus::{
    genus_product, genus_series, multiplicative_sequence, scaling_relation_report, GenusKind,
};
use charclass::invariants::{
    adams_m, builtin_manifold, kappa_report, parse_descriptor, pi0_report, splitting_value,
    vanishing_primes, wu_vanishing_degrees, BordismTable, ManifoldDescriptor,
};
use charclass::poly::{parse_poly, GradedPoly, RingPresentation};
use charclass::scalar::Fp;
use charclass::steenrod::{
    compare_tables, derived_table, load_table, splitting_obstruction_for, wu_coefficient,
};
use charclass::thom::{mmm_class, signature_via_l, ThomElement};
use charclass::verify;
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::json;
use std::process::ExitCode;

/// One finished command invocation, ready to print as text or JSON.
#[derive(Debug, Serialize, Deserialize)]
struct Report {
    command: String,
    inputs: serde_json::Value,
    results: Vec<serde_json::Value>,
    warnings: Vec<String>,
    /// Text rendering; omitted from the JSON document.
    #[serde(skip)]
    text: String,
}

impl Report {
    fn new(command: &str, inputs: serde_json::Value) -> Report {
        Report {
            command: command.to_string(),
            inputs,
            results: Vec::new(),
            warnings: Vec::new(),
            text: String::new(),
        }
    }

    fn push(&mut self, result: serde_json::Value, line: String) {
        self.results.push(result);
        self.text.push_str(&line);
        self.text.push('\n');
    }

    fn warn(&mut self, msg: String) {
        self.warnings.push(msg);
    }
}

#[derive(Parser)]
#[command(
    name = "charclass",
    version,
    about = "Exact-arithmetic engine for characteristic classes of manifold bundles"
)]
struct Cli {
    /// Emit a JSON report instead of plain text
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Hirzebruch L-polynomials in Pontrjagin classes
    Lclass(LclassArgs),
    /// Expand a multiplicative sequence or rank-m genus product
    Genus(GenusArgs),
    /// Fibre-integrated characteristic classes of a bundle model
    Mmm(MmmArgs),
    /// Signature of the total space of a bundle model
    Signature(SignatureArgs),
    /// Mod-p reduced-power computations on tabulated actions
    Steenrod(SteenrodArgs),
    /// Coefficients of the Thom-class power series mod p
    Wu(WuArgs),
    /// Odd primes at which the degree-4k obstruction class vanishes
    Primes(PrimesArgs),
    /// Component group of the Thom spectrum in negative dimension -n
    Pi0(Pi0Args),
    /// Manifold invariants and integrality constants
    Invariants(InvariantsArgs),
    /// Run the full verification suite and print one line per check
    #[command(name = "verify-paper")]
    VerifyPaper,
}

#[derive(Args)]
struct LclassArgs {
    /// Truncation degree; components L_4, ..., L_{4*floor(d/4)} are printed
    #[arg(long, default_value_t = 16)]
    max_degree: u32,
    /// Number of Pontrjagin generators (default: one per component)
    #[arg(long)]
    num_p: Option<u32>,
}

#[derive(Args)]
struct GenusArgs {
    /// Defining series: l, ltilde, inv-linear, or total-p
    #[arg(long, default_value = "l")]
    series: String,
    /// Number of Pontrjagin generators; for --product, also the number of roots
    #[arg(long, default_value_t = 2)]
    rank: u32,
    #[arg(long, default_value_t = 16)]
    max_degree: u32,
    /// Expand the finite rank-m product instead of the stable sequence
    #[arg(long)]
    product: bool,
    /// Compare the unnormalized product against the stable sequence in
    /// degree 4k and report the power-of-two ratio
    #[arg(long)]
    scaling: bool,
    /// Component index k for --scaling
    #[arg(long)]
    k: Option<u32>,
}

#[derive(Args)]
struct MmmArgs {
    /// Bundle model fixture (built-in name or path)
    #[arg(long, default_value = "sphere-s3")]
    model: String,
    /// Explicit class in p_i to integrate along the fibre
    #[arg(long)]
    class: Option<String>,
    /// Number of Pontrjagin generators for parsing --class
    #[arg(long, default_value_t = 2)]
    num_p: u32,
    /// Without --class: integrate every component of this sequence
    #[arg(long, default_value = "l")]
    series: String,
    #[arg(long, default_value_t = 12)]
    max_degree: u32,
}

#[derive(Args)]
struct SignatureArgs {
    /// Bundle model fixture (built-in name or path)
    #[arg(long, default_value = "sphere-s3")]
    model: String,
}

#[derive(Args)]
struct SteenrodArgs {
    /// Action table fixture (built-in name or path)
    #[arg(long, default_value = "paper-verbatim-p3")]
    table: String,
    /// Report the secondary-operation splitting obstruction on the bottom
    /// Thom class
    #[arg(long, alias = "obstruction")]
    prop63: bool,
    /// Apply the i-th reduced power to --element (or to the Thom class)
    #[arg(long)]
    power: Option<u32>,
    /// Polynomial argument for --power
    #[arg(long)]
    element: Option<String>,
    /// Compare against a second table and list every disagreement
    #[arg(long)]
    compare: Option<String>,
    /// Print a table derived from the splitting principle instead of
    /// loading a fixture (needs --rank and --prime)
    #[arg(long)]
    derive: bool,
    #[arg(long, default_value_t = 4)]
    rank: u32,
    #[arg(long, default_value_t = 3)]
    prime: u64,
    #[arg(long, default_value_t = 12)]
    max_degree: u32,
}

#[derive(Args)]
struct WuArgs {
    #[arg(long, default_value_t = 3)]
    prime: u64,
    /// Largest component index i to print
    #[arg(long, default_value_t = 20)]
    max_i: u32,
    /// Print the degrees 4k at which the obstruction class is forced to
    /// vanish instead of the series coefficients
    #[arg(long)]
    vanishing: bool,
    /// Largest k for --vanishing
    #[arg(long, default_value_t = 10)]
    kmax: u32,
}

#[derive(Args)]
struct PrimesArgs {
    /// Component index k (ignored when --kmax is given)
    #[arg(long, default_value_t = 1)]
    k: u32,
    #[arg(long, default_value_t = 100)]
    bound: u64,
    /// Print a TSV table for k = 1..kmax instead of a single row
    #[arg(long)]
    kmax: Option<u32>,
}

#[derive(Args)]
struct Pi0Args {
    /// Dimension parameter n >= 1
    #[arg(long)]
    n: u32,
    /// Bordism-group fixture ("default", or a path/name)
    #[arg(long, default_value = "default")]
    table: String,
}

#[derive(Args)]
struct InvariantsArgs {
    /// Built-in manifold name (S1, S2, S4, S5, T2, T5, CP2, K3) or a
    /// descriptor "name:dim:b0,b1,...:signature"
    #[arg(long)]
    manifold: Option<String>,
    /// Report the k-th Bernoulli-quotient integrality constant
    #[arg(long)]
    kappa: Option<u32>,
    /// Prime for the --kappa valuation check
    #[arg(long, default_value_t = 3)]
    prime: u64,
    /// Report the Adams number m(r)
    #[arg(long)]
    adams: Option<u32>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let json = cli.json;
    let outcome = match &cli.cmd {
        Cmd::Lclass(a) => run_lclass(a),
        Cmd::Genus(a) => run_genus(a),
        Cmd::Mmm(a) => run_mmm(a),
        Cmd::Signature(a) => run_signature(a),
        Cmd::Steenrod(a) => run_steenrod(a),
        Cmd::Wu(a) => run_wu(a),
        Cmd::Primes(a) => run_primes(a),
        Cmd::Pi0(a) => run_pi0(a),
        Cmd::Invariants(a) => run_invariants(a),
        Cmd::VerifyPaper => return run_verify(json),
    };
    match outcome {
        Ok(report) => {
            if json {
                println!("{}", serde_json::to_string_pretty(&report).unwrap());
            } else {
                print!("{}", report.text);
                for w in &report.warnings {
                    println!("WARN: {}", w);
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            let code = match &e {
                Error::Parse(_) => 64u8,
                Error::FixtureNotFound(_) | Error::Io(_) => 66,
                _ => 2,
            };
            eprintln!("{}", json!({ "error": e.to_string(), "exit": code }));
            ExitCode::from(code)
        }
    }
}

fn run_lclass(a: &LclassArgs) -> Result<Report, Error> {
    let kmax = (a.max_degree / 4).max(1);
    let m = a.num_p.unwrap_or(kmax);
    let mut report = Report::new(
        "lclass",
        json!({ "max_degree": a.max_degree, "num_p": m }),
    );
    let series = genus_series(GenusKind::L, kmax as usize);
    let l = multiplicative_sequence(&series, m, a.max_degree)?;
    for k in 1..=kmax {
        let poly = l.component(k).to_string();
        report.push(
            json!({ "k": k, "degree": 4 * k, "class": poly }),
            format!("L_{} = {}", 4 * k, poly),
        );
    }
    Ok(report)
}

fn run_genus(a: &GenusArgs) -> Result<Report, Error> {
    let kind = GenusKind::parse(&a.series)?;
    if a.scaling {
        let k = a
            .k
            .ok_or_else(|| Error::Parse("--scaling needs --k".into()))?;
        let mut report = Report::new(
            "genus",
            json!({ "mode": "scaling", "rank": a.rank, "k": k }),
        );
        let r = scaling_relation_report(a.rank, k)?;
        report.push(
            json!({
                "ratio": r.ratio.to_string(),
                "is_power_of_two": r.is_power_of_two,
                "computed_exponent": r.exponent,
                "printed_exponent": r.printed_exponent,
            }),
            format!(
                "ratio of degree-{} parts = {} (power of two: {}, exponent {})\nprinted exponent m - k = {}",
                4 * k,
                r.ratio,
                r.is_power_of_two,
                r.exponent,
                r.printed_exponent
            ),
        );
        if !r.matches_printed() {
            report.warn(format!(
                "computed exponent {} differs from printed exponent {}",
                r.exponent, r.printed_exponent
            ));
        }
        return Ok(report);
    }
    let mut report = Report::new(
        "genus",
        json!({
            "series": a.series,
            "rank": a.rank,
            "max_degree": a.max_degree,
            "product": a.product,
        }),
    );
    let kmax = a.max_degree / 4;
    let q = genus_series(kind, (kmax as usize).max(1));
    let seq = if a.product || matches!(kind, GenusKind::Ltilde) {
        genus_product(&q, a.rank, a.max_degree)
    } else {
        multiplicative_sequence(&q, a.rank, a.max_degree)?
    };
    for k in 0..=kmax {
        let poly = seq.component(k).to_string();
        report.push(
            json!({ "k": k, "degree": 4 * k, "class": poly }),
            format!("K_{} = {}", 4 * k, poly),
        );
    }
    Ok(report)
}

fn run_mmm(a: &MmmArgs) -> Result<Report, Error> {
    let model = load_model(&a.model)?;
    let mut report = Report::new(
        "mmm",
        json!({
            "model": a.model,
            "class": a.class,
            "series": a.series,
            "max_degree": a.max_degree,
        }),
    );
    if let Some(class) = &a.class {
        let pres = RingPresentation::pontrjagin(a.num_p, a.max_degree + model.fibre_dim);
        let c = parse_poly(&pres, class, &charclass::scalar::rat_int(1))?;
        let kappa = mmm_class(&model, &c)?;
        report.push(
            json!({ "class": class.clone(), "kappa": kappa.to_string() }),
            format!("kappa = {}", kappa),
        );
        return Ok(report);
    }
    let kind = GenusKind::parse(&a.series)?;
    let kmax = (a.max_degree / 4).max(1);
    let num_p = model.fibre_dim / 2 + 1;
    let seq = multiplicative_sequence(
        &genus_series(kind, kmax as usize),
        num_p,
        a.max_degree,
    )?;
    for k in 1..=kmax {
        let kappa = mmm_class(&model, &seq.component(k))?;
        report.push(
            json!({ "k": k, "degree": 4 * k, "kappa": kappa.to_string() }),
            format!("kappa(K_{}) = {}", 4 * k, kappa),
        );
    }
    Ok(report)
}

fn run_signature(a: &SignatureArgs) -> Result<Report, Error> {
    let model = load_model(&a.model)?;
    let mut report = Report::new("signature", json!({ "model": a.model }));
    let s = signature_via_l(&model)?;
    report.push(
        json!({ "signature": s.to_string() }),
        format!("signature = {}", s),
    );
    Ok(report)
}

fn run_steenrod(a: &SteenrodArgs) -> Result<Report, Error> {
    let table = if a.derive {
        derived_table(a.rank, a.prime, a.max_degree)?
    } else {
        load_table(&a.table)?
    };
    let mut report = Report::new(
        "steenrod",
        json!({
            "table": if a.derive { "derived".to_string() } else { a.table.clone() },
            "prime": table.prime,
        }),
    );
    if a.prop63 {
        let r = splitting_obstruction_for(&table)?;
        report.push(
            json!({
                "prime": r.prime,
                "q_value": r.q_value.to_string(),
                "restriction": r.restriction.to_string(),
                "splits": r.splits,
            }),
            format!(
                "secondary operation Q = P^3 - P^2 P^1 at p = {}\nQ(u_{}) = {}; restriction = {}; splits: {}",
                r.prime, table.wu_shift, r.q_value, r.restriction, r.splits
            ),
        );
        return Ok(report);
    }
    if let Some(other) = &a.compare {
        let b = load_table(other)?;
        let diffs = compare_tables(&table, &b)?;
        if diffs.is_empty() {
            report.push(json!({ "discrepancies": 0 }), "tables agree".to_string());
        }
        for d in &diffs {
            report.push(
                json!({ "item": d.item, "left": d.left, "right": d.right }),
                format!("{}: {} vs {}", d.item, d.left, d.right),
            );
        }
        return Ok(report);
    }
    if let Some(i) = a.power {
        let one = Fp::new(table.prime, 1)?;
        if let Some(elem) = &a.element {
            let x = parse_poly(&table.pres, elem, &one)?;
            let y = table.power_poly(&x, i)?;
            report.push(
                json!({ "i": i, "element": elem.clone(), "value": y.to_string() }),
                format!("P^{}({}) = {}", i, elem, y),
            );
        } else {
            let u = ThomElement::new(
                table.wu_shift,
                GradedPoly::constant(&table.pres, one),
            );
            let y = table.power_thom(&u, i)?;
            report.push(
                json!({ "i": i, "element": format!("u_{}", table.wu_shift), "value": y.to_string() }),
                format!("P^{}(u_{}) = {}", i, table.wu_shift, y),
            );
        }
        return Ok(report);
    }
    // Default: print the tabulated actions and the Wu class.
    for g in table.pres.generators() {
        let cap = table.pres.truncation() / (2 * (table.prime as u32 - 1));
        for i in 1..=cap {
            let img = table.action(&g.name, i)?;
            if !img.is_zero() {
                report.push(
                    json!({ "generator": g.name, "i": i, "value": img.to_string() }),
                    format!("P^{}({}) = {}", i, g.name, img),
                );
            }
        }
    }
    let wu: Vec<String> = (0..=table.wu_order())
        .map(|k| table.wu_component(k).to_string())
        .collect();
    report.push(
        json!({ "wu_components": wu }),
        format!("wu = {}", wu.join(" + ")),
    );
    Ok(report)
}

fn run_wu(a: &WuArgs) -> Result<Report, Error> {
    if a.vanishing {
        let mut report = Report::new(
            "wu",
            json!({ "mode": "vanishing", "prime": a.prime, "kmax": a.kmax }),
        );
        let degs = wu_vanishing_degrees(a.prime, a.kmax)?;
        let joined = degs
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        report.push(json!({ "degrees": degs }), joined);
        return Ok(report);
    }
    let mut report = Report::new("wu", json!({ "prime": a.prime, "max_i": a.max_i }));
    for i in 0..=a.max_i {
        let c = wu_coefficient(a.prime, i)?;
        report.push(
            json!({ "i": i, "coefficient": c }),
            format!("wu[{}] = {}", i, c),
        );
    }
    Ok(report)
}

fn run_primes(a: &PrimesArgs) -> Result<Report, Error> {
    let mut report = Report::new(
        "primes",
        json!({ "k": a.k, "bound": a.bound, "kmax": a.kmax }),
    );
    let rows: Vec<u32> = match a.kmax {
        Some(kmax) => (1..=kmax).collect(),
        None => vec![a.k],
    };
    for k in &rows {
        let ps = vanishing_primes(*k, a.bound)?;
        let joined = ps
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        let line = if a.kmax.is_some() {
            format!("{}\t{}", k, joined)
        } else {
            joined.clone()
        };
        report.push(json!({ "k": k, "primes": ps }), line);
    }
    Ok(report)
}

fn run_pi0(a: &Pi0Args) -> Result<Report, Error> {
    let table = BordismTable::load(&a.table)?;
    let mut report = Report::new("pi0", json!({ "n": a.n, "table": a.table }));
    let r = pi0_report(a.n, &table)?;
    report.push(
        json!({
            "n": r.n,
            "euler_part": r.euler_part,
            "bordism_part": r.bordism_part,
            "group": r.group,
            "splitting": r.splitting,
        }),
        format!(
            "pi0(MTSO({})) = {}\nsplitting: {}",
            r.n,
            r.group,
            r.splitting.as_deref().unwrap_or("none")
        ),
    );
    Ok(report)
}

fn manifold_lines(report: &mut Report, m: &ManifoldDescriptor) -> Result<(), Error> {
    let chi = m.euler_characteristic();
    let mut entry = json!({
        "name": m.name,
        "dim": m.dim,
        "betti": m.betti,
        "euler_characteristic": chi,
        "signature": m.signature,
    });
    let mut lines = format!(
        "{}: dim {}\neuler characteristic = {}\nsignature = {}",
        m.name, m.dim, chi, m.signature
    );
    if m.dim % 4 == 1 {
        let kerv = m.kervaire_semicharacteristic()?;
        entry["kervaire"] = json!(kerv);
        lines.push_str(&format!("\nkervaire semicharacteristic = {}", kerv));
    }
    if m.dim % 4 != 3 {
        let s = splitting_value(m)?;
        entry["splitting_value"] = json!(s);
        lines.push_str(&format!("\nsplitting value = {}", s));
    }
    report.push(entry, lines);
    Ok(())
}

fn run_invariants(a: &InvariantsArgs) -> Result<Report, Error> {
    let mut report = Report::new(
        "invariants",
        json!({ "manifold": a.manifold, "kappa": a.kappa, "prime": a.prime, "adams": a.adams }),
    );
    let mut did_something = false;
    if let Some(spec) = &a.manifold {
        let m = builtin_manifold(spec).or_else(|_| parse_descriptor(spec))?;
        manifold_lines(&mut report, &m)?;
        did_something = true;
    }
    if let Some(k) = a.kappa {
        let r = kappa_report(k, a.prime)?;
        report.push(
            json!({
                "k": r.k,
                "abs_value": r.abs_value.to_string(),
                "sign_unknown": r.sign_unknown,
                "prime": r.prime,
                "valuation": r.valuation,
                "is_p_integral": r.is_p_integral,
                "is_p_unit": r.is_p_unit,
            }),
            format!(
                "|kappa_{}| = {} (sign undetermined)\nvaluation at {} = {}; integral: {}; unit: {}",
                r.k, r.abs_value, r.prime, r.valuation, r.is_p_integral, r.is_p_unit
            ),
        );
        did_something = true;
    }
    if let Some(r) = a.adams {
        let m = adams_m(r);
        report.push(json!({ "r": r, "m": m.to_string() }), format!("m({}) = {}", r, m));
        did_something = true;
    }
    if !did_something {
        return Err(Error::Parse(
            "invariants needs at least one of --manifold, --kappa, --adams".into(),
        ));
    }
    Ok(report)
}

fn run_verify(json_mode: bool) -> ExitCode {
    let results = verify::run_all();
    let failed = verify::any_failed(&results);
    if json_mode {
        let report = Report {
            command: "verify-paper".to_string(),
            inputs: json!({}),
            results: results
                .iter()
                .map(|r| {
                    json!({
                        "name": r.name,
                        "status": r.status.to_string(),
                        "detail": r.detail,
                    })
                })
                .collect(),
            warnings: results
                .iter()
                .filter(|r| matches!(r.status, verify::Status::Warn))
                .map(|r| format!("{}: {}", r.name, r.detail))
                .collect(),
            text: String::new(),
        };
        println!("{}", serde_json::to_string_pretty(&report).unwrap());
    } else {
        print!("{}", verify::render(&results));
    }
    if failed {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
