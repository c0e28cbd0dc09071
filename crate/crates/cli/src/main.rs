//! `manypts`: class groups, subgroup scans and cover witnesses for genus-2 curves.

use std::fs;
use std::io::{self, BufRead, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use manypts::fixtures;
use manypts::reproduce::run_checks;
use manypts::search::{covers_with_group, CoverOptions, SearchOptions};
use manypts::{
    all_subgroups, enumerate_class_group, enumerate_curves, verify_witness, witness_from_places,
    BoundsTable, CoverWitness, CurveFamilySpec, CurveModel, FamilyMode, Field,
};

#[derive(Parser)]
#[command(
    name = "manypts",
    version,
    about = "Unramified abelian covers of genus-2 curves over small finite fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Point counts, L-polynomial, class number and group structure.
    Analyze(CurveArgs),
    /// Rational places with their labels.
    Places(CurveArgs),
    /// Class group structure and generators.
    Classgroup(CurveArgs),
    /// Every subgroup of the class group.
    Subgroups(CurveArgs),
    /// Cover witnesses of one curve, as JSON lines.
    Covers(CoversArgs),
    /// Record search over a curve family; prints the ledger as TSV.
    Search(SearchArgs),
    /// Re-derives every witness in a JSON-lines file.
    Verify(VerifyArgs),
    /// Runs the reproduction checks for the worked examples and records.
    #[command(name = "verify-paper")]
    VerifyRecords(VerifyRecordsArgs),
}

#[derive(Args)]
struct FieldArgs {
    /// Field order.
    #[arg(long)]
    q: u32,
    /// Field modulus in the generator `a`, e.g. `a^4+a+1`.
    #[arg(long = "mod")]
    modulus: Option<String>,
}

impl FieldArgs {
    fn field(&self) -> anyhow::Result<Field> {
        Ok(Field::from_order_and_modulus(
            self.q,
            self.modulus.as_deref(),
        )?)
    }
}

#[derive(Args)]
struct CurveArgs {
    #[command(flatten)]
    field: FieldArgs,
    /// `h` in `y^2 + h y = f`.
    #[arg(long)]
    h: Option<String>,
    #[arg(long)]
    f: String,
}

impl CurveArgs {
    fn model(&self) -> anyhow::Result<CurveModel> {
        Ok(CurveModel::from_parts(
            self.field.field()?,
            self.h.as_deref(),
            &self.f,
        )?)
    }
}

#[derive(Args)]
struct WindowArgs {
    #[arg(long, default_value_t = 3)]
    genus_min: u64,
    #[arg(long, default_value_t = 50)]
    genus_max: u64,
    /// Minimum number of split rational places.
    #[arg(long, default_value_t = 2)]
    min_split: usize,
    /// Minimum number of rational points of the cover.
    #[arg(long, default_value_t = 0)]
    min_points: u64,
}

impl WindowArgs {
    fn options(&self) -> anyhow::Result<CoverOptions> {
        if self.genus_min > self.genus_max {
            bail!("--genus-min exceeds --genus-max");
        }
        Ok(CoverOptions {
            genus_min: self.genus_min,
            genus_max: self.genus_max,
            min_split: self.min_split,
            min_points: self.min_points,
        })
    }
}

#[derive(Args)]
struct CoversArgs {
    #[command(flatten)]
    curve: CurveArgs,
    /// Base place `O`.
    #[arg(long)]
    place: Option<String>,
    /// Places whose differences with `O` generate `G` (repeatable or comma separated).
    #[arg(long, num_args = 1..)]
    gen_places: Vec<String>,
    #[command(flatten)]
    window: WindowArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SearchArgs {
    #[command(flatten)]
    field: FieldArgs,
    /// Curve family: odd_char_deg5, odd_char_deg6, odd_char_all, char2_full, explicit_list.
    #[arg(long)]
    family: Option<String>,
    /// Curve list for explicit_list (one curve text per line).
    #[arg(long)]
    list: Option<PathBuf>,
    /// Bounds CSV; defaults to the shipped table.
    #[arg(long)]
    bounds: Option<PathBuf>,
    #[command(flatten)]
    window: WindowArgs,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Keep each curve with this probability.
    #[arg(long)]
    sample: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Skip curves whose invariants repeat.
    #[arg(long)]
    dedup: bool,
    /// Writes the best witness per genus as JSON lines.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Writes the family normalization manifest.
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Witness file (JSON lines); `-` for stdin.
    file: PathBuf,
}

#[derive(Args)]
struct VerifyRecordsArgs {
    /// Run only checks whose name contains this text, e.g. `q5`.
    #[arg(long)]
    only: Option<String>,
    /// Record witness file to check instead of the shipped one.
    #[arg(long)]
    witnesses: Option<PathBuf>,
    #[arg(long)]
    bounds: Option<PathBuf>,
}

/// Splits `P_inf,P_{4,1}` on commas outside braces.
fn split_labels(args: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    for a in args {
        let (mut depth, mut cur) = (0i32, String::new());
        for ch in a.chars() {
            match ch {
                '{' => depth += 1,
                '}' => depth -= 1,
                _ => {}
            }
            if (ch == ',' || ch.is_whitespace()) && depth == 0 {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
            } else {
                cur.push(ch);
            }
        }
        if !cur.is_empty() {
            out.push(cur);
        }
    }
    out
}

fn write_lines(out: &Option<PathBuf>, lines: &[String]) -> anyhow::Result<()> {
    let mut text = lines.join("\n");
    if !lines.is_empty() {
        text.push('\n');
    }
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => Ok(io::stdout().write_all(text.as_bytes())?),
    }
}

fn load_bounds(path: &Option<PathBuf>) -> anyhow::Result<BoundsTable> {
    Ok(match path {
        Some(p) => BoundsTable::from_path(p).with_context(|| format!("reading {}", p.display()))?,
        None => fixtures::bounds(),
    })
}

fn analyze(a: &CurveArgs) -> anyhow::Result<()> {
    let c = a.model()?;
    let (a1, a2) = c.l_polynomial()?;
    let cg = enumerate_class_group(&c)?;
    println!(
        "N1={}\tN2={}\tdeg2={}\ta1={a1}\ta2={a2}\th={}\tstructure={}",
        c.count_points_ext(1)?,
        c.count_points_ext(2)?,
        c.places_of_degree(2)?,
        cg.order(),
        cg.structure()
    );
    Ok(())
}

fn places(a: &CurveArgs) -> anyhow::Result<()> {
    let c = a.model()?;
    println!("infinity\t{:?}", c.infinity_type());
    for p in c.rational_places() {
        println!("{}", p.label(c.field()));
    }
    Ok(())
}

fn classgroup(a: &CurveArgs) -> anyhow::Result<()> {
    let c = a.model()?;
    let cg = enumerate_class_group(&c)?;
    println!("{}", cg.summary());
    let balanced = cg.jacobian().infinity_type() == manypts::InfinityType::Split;
    if !cg.normalized().map.is_identity() {
        println!("model\t{}", cg.normalized().model);
    }
    for (i, g) in cg.generators().iter().enumerate() {
        println!(
            "gen{}\t{}\torder={}",
            i + 1,
            g.text(c.field(), balanced),
            cg.invariant_factors()[i]
        );
    }
    Ok(())
}

fn subgroups(a: &CurveArgs) -> anyhow::Result<()> {
    let c = a.model()?;
    let cg = enumerate_class_group(&c)?;
    println!("{}", cg.summary());
    for g in all_subgroups(cg.structure())? {
        println!("{}", g.text());
    }
    Ok(())
}

fn covers(a: &CoversArgs) -> anyhow::Result<()> {
    let c = a.curve.model()?;
    let gens = split_labels(&a.gen_places);
    let lines: Vec<String> = match (&a.place, gens.is_empty()) {
        (Some(o), false) => {
            let refs: Vec<&str> = gens.iter().map(String::as_str).collect();
            vec![witness_from_places(&c, o, &refs)?.to_json_line()]
        }
        (None, false) => bail!("--gen-places needs --place"),
        (o, true) => {
            let opts = a.window.options()?;
            let cg = enumerate_class_group(&c)?;
            let base = match o {
                Some(l) => Some(c.place_by_label(l)?.label(c.field())),
                None => None,
            };
            covers_with_group(&cg, &opts)?
                .into_iter()
                .filter(|w| base.as_ref().map_or(true, |b| &w.o == b))
                .map(|w| w.to_json_line())
                .collect()
        }
    };
    write_lines(&a.out, &lines)
}

fn search(a: &SearchArgs) -> anyhow::Result<()> {
    let k = a.field.field()?;
    let mode = match &a.family {
        Some(f) => f.parse::<FamilyMode>()?,
        None if a.list.is_some() => FamilyMode::ExplicitList,
        None => FamilyMode::default_for(&k),
    };
    let mut spec = match (mode, &a.list) {
        (FamilyMode::ExplicitList, Some(p)) => {
            CurveFamilySpec::explicit_list(k, &fs::read_to_string(p)?)?
        }
        (FamilyMode::ExplicitList, None) => bail!("explicit_list needs --list"),
        (_, Some(_)) => bail!("--list only applies to explicit_list"),
        (m, None) => CurveFamilySpec::new(k, m),
    };
    if let Some(r) = a.sample {
        spec = spec.sampled(r, a.seed);
    }
    spec.validate()?;
    let bounds = load_bounds(&a.bounds)?;
    if let Some(p) = &a.manifest {
        fs::write(p, spec.manifest())?;
    }
    let opts = SearchOptions {
        covers: a.window.options()?,
        workers: a.workers,
        dedup: a.dedup,
        ..Default::default()
    };
    let ledger = manypts::run_search(enumerate_curves(&spec)?, &opts)?;
    if let Some(p) = &a.out {
        let lines: Vec<String> = ledger.witnesses().map(CoverWitness::to_json_line).collect();
        write_lines(&Some(p.clone()), &lines)?;
    }
    print!("{}", ledger.report_tsv(&bounds));
    Ok(())
}

/// Returns whether every witness verified.
fn verify(a: &VerifyArgs) -> anyhow::Result<bool> {
    let reader: Box<dyn BufRead> = if a.file.as_os_str() == "-" {
        Box::new(io::stdin().lock())
    } else {
        Box::new(io::BufReader::new(
            fs::File::open(&a.file).with_context(|| format!("opening {}", a.file.display()))?,
        ))
    };
    let mut all_ok = true;
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let (ok, detail, reference) = match CoverWitness::from_json_line(&line) {
            Err(e) => (false, format!("parse error: {e}"), String::new()),
            Ok(w) => match verify_witness(&w) {
                Ok(r) => (r.ok(), r.to_string(), w.reference()),
                Err(e) => (false, e.to_string(), w.reference()),
            },
        };
        all_ok &= ok;
        println!(
            "{}\t{}\t{reference}\t{detail}",
            i + 1,
            if ok { "PASS" } else { "FAIL" }
        );
    }
    Ok(all_ok)
}

fn verify_records(a: &VerifyRecordsArgs) -> anyhow::Result<bool> {
    let records = match &a.witnesses {
        Some(p) => fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?,
        None => fixtures::RECORD_WITNESSES.to_string(),
    };
    let bounds = load_bounds(&a.bounds)?;
    let results = run_checks(a.only.as_deref(), &records, &bounds)?;
    if results.is_empty() {
        bail!("no check matches the filter");
    }
    for r in &results {
        println!("{}", r.line());
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    eprintln!("{} checks, {failed} failed", results.len());
    Ok(failed == 0)
}

fn run(cli: &Cli) -> anyhow::Result<bool> {
    match &cli.command {
        Command::Analyze(a) => analyze(a)?,
        Command::Places(a) => places(a)?,
        Command::Classgroup(a) => classgroup(a)?,
        Command::Subgroups(a) => subgroups(a)?,
        Command::Covers(a) => covers(a)?,
        Command::Search(a) => search(a)?,
        Command::Verify(a) => return verify(a),
        Command::VerifyRecords(a) => return verify_records(a),
    }
    Ok(true)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
