use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use polytc_core::bounds::{tc_bounds_with_ring, BoundOptions, TCBoundReport, Verification};
use polytc_core::genetics::Template;
use polytc_core::{build_ring, BasisTable, Certificate, Classifier, Error as CoreError, LengthVector, Monomial};
use serde::Serialize;

use polytc::batch::bound_reports;
use polytc::cache::Cache;
use polytc::formats::{parse_code, CertificateDto, CodeDto, ReportDto};
use polytc::table1;

#[derive(Parser)]
#[command(
    name = "polytc",
    version,
    about = "Cohomology and higher topological complexity bounds for planar polygon spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Where enumerations are cached (overrides POLYTC_CACHE_DIR).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Genericity, genetic code, ring, category and TC_k bounds of a length vector.
    Analyze {
        #[arg(required = true, num_args = 1..)]
        lengths: Vec<u64>,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// The genetic code of a length vector.
    Code {
        #[arg(required = true, num_args = 1..)]
        lengths: Vec<u64>,
    },
    /// Every realizable genetic code for the given n.
    Enumerate {
        #[arg(long, value_parser = parse_range)]
        n: Range,
    },
    /// Occurrence counts of code shapes against the published table.
    Table1 {
        #[arg(long, value_parser = parse_range, default_value = "5..8")]
        n: Range,
    },
    /// TC_k bound reports for one code or for every code of some n.
    Bounds {
        #[arg(long, value_parser = parse_range, conflicts_with = "code", required_unless_present = "code")]
        n: Option<Range>,
        /// A code such as "<{2,4,7},{5,7}>".
        #[arg(long)]
        code: Option<String>,
        #[command(flatten)]
        bounds: BoundArgs,
        /// Directory receiving one certificate file per verified bound.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-evaluate stored certificates.
    Certify {
        #[arg(required = true, num_args = 1..)]
        files: Vec<PathBuf>,
        /// Reject certificates written for any other code.
        #[arg(long)]
        code: Option<String>,
        /// Largest intermediate product, in tensor terms.
        #[arg(long, default_value_t = 5_000_000, value_parser = clap::value_parser!(u64).range(1..))]
        budget: u64,
    },
}

#[derive(clap::Args)]
struct BoundArgs {
    #[arg(long, value_parser = parse_range, default_value = "2")]
    k: Range,
    /// Evaluate the certificate behind every template bound.
    #[arg(long)]
    certify: bool,
    /// Largest intermediate product, in tensor terms.
    #[arg(long, default_value_t = 5_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
}

impl BoundArgs {
    fn options(&self) -> BoundOptions {
        BoundOptions { certify: self.certify, max_terms: self.budget as usize }
    }
}

#[derive(Clone, Debug)]
struct Range(Vec<usize>);

/// `3`, `2..5`, `2..=5` or `2,3,5`; `a..b` includes `b`.
fn parse_range(s: &str) -> Result<Range, String> {
    let num = |x: &str| x.trim().parse::<usize>().map_err(|_| format!("not a number: {x:?}"));
    let v: Vec<usize> = if let Some((a, b)) = s.split_once("..") {
        let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
        if a > b {
            return Err(format!("empty range {s}"));
        }
        (a..=b).collect()
    } else {
        s.split(',').map(num).collect::<Result<_, _>>()?
    };
    Ok(Range(v))
}

/// Input problems exit with 2, failed verification with 1.
enum Failure {
    Input(anyhow::Error),
    Verification(String),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.into())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let cache = Cache::new(cli.cache_dir.clone());
    let mut out = io::stdout().lock();
    match &cli.command {
        Command::Analyze { lengths, bounds } => analyze(&mut out, cli.format, lengths, bounds)?,
        Command::Code { lengths } => {
            let v = generic_vector(lengths)?;
            let code = v.genetic_code().map_err(|e| anyhow!("{e}"))?;
            match cli.format {
                Format::Json => json_line(&mut out, &CodeDto::from(&code))?,
                _ => writeln!(out, "{code}")?,
            }
        }
        Command::Enumerate { n } => {
            for &n in &n.0 {
                let codes = cache.codes(n)?;
                match cli.format {
                    Format::Json => json_line(&mut out, &polytc::formats::EnumerationFile::new(n, &codes))?,
                    Format::Csv => {
                        let mut w = csv::Writer::from_writer(&mut out);
                        w.write_record(["n", "code", "sizes", "witness"])?;
                        for e in &codes {
                            w.write_record([
                                n.to_string(),
                                e.code.to_string(),
                                join(&e.code.gene_sizes()),
                                join(e.witness.entries()),
                            ])?;
                        }
                        w.flush()?;
                    }
                    Format::Text => {
                        for e in &codes {
                            writeln!(out, "{}  {}", e.code, e.witness)?;
                        }
                        writeln!(out, "n = {n}: {} codes", codes.len())?;
                    }
                }
            }
        }
        Command::Table1 { n } => table(&mut out, cli.format, &cache, &n.0)?,
        Command::Bounds { n, code, bounds, out: dir } => {
            let codes = match (n, code) {
                (_, Some(c)) => vec![parse_code(c)?],
                (Some(n), None) => {
                    let mut v = Vec::new();
                    for &n in &n.0 {
                        v.extend(cache.codes(n)?.into_iter().map(|e| e.code));
                    }
                    v
                }
                (None, None) => unreachable!("clap requires one of --n and --code"),
            };
            let ks = checked_ks(&bounds.k)?;
            let classifier = Classifier::new();
            let reports = bound_reports(&codes, &ks, &classifier, bounds.options())?;
            if let Some(dir) = dir {
                write_certificates(dir, &reports)?;
            }
            print_reports(&mut out, cli.format, &reports)?;
        }
        Command::Certify { files, code, budget } => certify(&mut out, cli.format, files, code.as_deref(), *budget)?,
    }
    Ok(())
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn json_line<T: Serialize>(out: &mut impl Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn generic_vector(lengths: &[u64]) -> Result<LengthVector> {
    LengthVector::generic(lengths.to_vec()).map_err(|e| match e {
        CoreError::NotGeneric { witness } => {
            let v = LengthVector::new(lengths.to_vec()).expect("validated above");
            let sum: u64 = witness.iter().map(|i| v.get(i)).sum();
            anyhow!(
                "not generic: the sides {witness} of the sorted vector {v} sum to {sum}, half the perimeter {}, \
                 so this signed sum vanishes",
                v.perimeter()
            )
        }
        e => anyhow!("{e}"),
    })
}

fn checked_ks(k: &Range) -> Result<Vec<usize>> {
    if k.0.iter().any(|&k| k < 2) {
        bail!("bound commands need k >= 2 (TC_1 is always 1)");
    }
    Ok(k.0.clone())
}

#[derive(Serialize)]
struct AnalyzeDto {
    lengths: Vec<u64>,
    generic: bool,
    code: CodeDto,
    sizes: Vec<usize>,
    templates: Vec<String>,
    dims: Vec<usize>,
    truncated_algebra: bool,
    m: usize,
    cup_length: usize,
    cat: usize,
    reports: Vec<ReportDto>,
}

fn analyze(out: &mut impl Write, format: Format, lengths: &[u64], args: &BoundArgs) -> Result<()> {
    let v = generic_vector(lengths)?;
    let code = v.genetic_code().map_err(|e| anyhow!("{e}"))?;
    let ring = build_ring(&code).map_err(|e| anyhow!("{code}: {e}"))?;
    let classifier = Classifier::new();
    let sig = classifier.classify(&code);
    let ks = checked_ks(&args.k)?;
    let reports = ks
        .iter()
        .map(|&k| tc_bounds_with_ring(&ring, k, &classifier, args.options()).map_err(|e| anyhow!("k = {k}: {e}")))
        .collect::<Result<Vec<_>>>()?;
    let cup = ring.cup_length();
    let truncated = sig.templates.contains(&Template::Point);
    let dto = AnalyzeDto {
        lengths: v.entries().to_vec(),
        generic: true,
        code: CodeDto::from(&code),
        sizes: sig.sizes.clone(),
        templates: sig.templates.iter().map(|t| format!("{t:?}")).collect(),
        dims: ring.dims(),
        truncated_algebra: truncated,
        m: ring.m(),
        cup_length: cup.length,
        cat: ring.ls_category(),
        reports: reports.iter().map(ReportDto::from).collect(),
    };
    match format {
        Format::Json => json_line(out, &dto)?,
        Format::Csv => print_reports(out, format, &reports)?,
        Format::Text => {
            writeln!(out, "lengths      {v} (generic)")?;
            writeln!(out, "genetic code {code}")?;
            writeln!(out, "gene sizes   {}", join(&sig.sizes))?;
            if !dto.templates.is_empty() {
                writeln!(out, "shape        {}", dto.templates.join(", "))?;
            }
            if sig.type1 {
                writeln!(out, "type         1")?;
            } else if sig.type2 {
                writeln!(out, "type         2")?;
            }
            writeln!(out, "dimension    m = {}", ring.m())?;
            writeln!(out, "betti (mod 2) {}", join(&ring.dims()))?;
            if truncated {
                writeln!(out, "ring         truncated polynomial algebra Z/2[R]/(R^{})", ring.m() + 1)?;
            }
            writeln!(out, "cup length   {} ({})", cup.length, Monomial { r: cup.r, support: cup.support })?;
            writeln!(out, "cat          {}", ring.ls_category())?;
            for r in &reports {
                write_report_text(out, r)?;
            }
        }
    }
    Ok(())
}

fn write_report_text(out: &mut impl Write, r: &TCBoundReport) -> Result<()> {
    writeln!(
        out,
        "TC_{} in [{}, {}]  {}  ({})",
        r.k,
        r.lower,
        r.upper,
        r.method.tag(),
        polytc::formats::verification_tag(r.verification)
    )?;
    for h in &r.hypotheses {
        writeln!(out, "    given: {h}")?;
    }
    if let Some(c) = &r.certificate {
        writeln!(out, "    product: {c}")?;
    }
    for c in &r.caveats {
        writeln!(out, "    note: {c}")?;
    }
    Ok(())
}

#[derive(Serialize)]
struct ReportRow {
    code: String,
    k: usize,
    m: usize,
    lower: usize,
    upper: usize,
    method: &'static str,
    verification: &'static str,
    length: Option<usize>,
}

fn print_reports(out: &mut impl Write, format: Format, reports: &[TCBoundReport]) -> Result<()> {
    match format {
        Format::Json => json_line(out, &reports.iter().map(ReportDto::from).collect::<Vec<_>>())?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for r in reports {
                w.serialize(ReportRow {
                    code: r.code.to_string(),
                    k: r.k,
                    m: r.m,
                    lower: r.lower,
                    upper: r.upper,
                    method: r.method.tag(),
                    verification: polytc::formats::verification_tag(r.verification),
                    length: r.certificate.as_ref().map(Certificate::length),
                })?;
            }
            w.flush()?;
        }
        Format::Text => {
            for r in reports {
                writeln!(out, "{}", r.code)?;
                write_report_text(out, r)?;
            }
        }
    }
    Ok(())
}

fn certificate_file_name(r: &TCBoundReport) -> String {
    let genes: Vec<String> =
        r.code.genes().iter().map(|g| g.iter().map(|i| i.to_string()).collect::<Vec<_>>().join("-")).collect();
    format!("n{}_{}_k{}.json", r.code.n(), genes.join("_"), r.k)
}

fn write_certificates(dir: &PathBuf, reports: &[TCBoundReport]) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    for r in reports {
        if let (Some(c), Verification::Verified) = (&r.certificate, r.verification) {
            let path = dir.join(certificate_file_name(r));
            fs::write(&path, serde_json::to_string_pretty(&CertificateDto::from(c))?)
                .with_context(|| format!("writing {}", path.display()))?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct Verdict {
    file: String,
    code: String,
    k: usize,
    length: usize,
    /// `None` when the budget ran out.
    nonzero: Option<bool>,
    zero_divisors: bool,
}

fn certify(
    out: &mut impl Write,
    format: Format,
    files: &[PathBuf],
    code: Option<&str>,
    budget: u64,
) -> Result<(), Failure> {
    let expected = code.map(parse_code).transpose()?;
    let mut verdicts = Vec::new();
    for path in files {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let dto: CertificateDto = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        let cert = Certificate::try_from(&dto).with_context(|| format!("reading {}", path.display()))?;
        if let Some(e) = &expected {
            if *e != cert.code {
                return Err(anyhow!("{} is a certificate for {}, not {e}", path.display(), cert.code).into());
            }
        }
        let ring = build_ring(&cert.code).map_err(|e| anyhow!("{}: {e}", cert.code))?;
        let table = BasisTable::new(&ring);
        let eval = table.evaluate_within(&cert, budget as usize).map_err(|e| anyhow!("{}: {e}", path.display()))?;
        verdicts.push(Verdict {
            file: path.display().to_string(),
            code: cert.code.to_string(),
            k: cert.k,
            length: cert.length(),
            nonzero: eval.map(|e| e.nonzero),
            zero_divisors: cert.is_zero_divisor_product(),
        });
    }
    match format {
        Format::Json => json_line(out, &verdicts)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            for v in &verdicts {
                w.serialize(v)?;
            }
            w.flush()?;
        }
        Format::Text => {
            for v in &verdicts {
                let word = match v.nonzero {
                    Some(true) => "nonzero",
                    Some(false) => "zero",
                    None => "undecided (budget exhausted)",
                };
                writeln!(out, "{}: {} k={} length {}: {word}", v.file, v.code, v.k, v.length)?;
            }
        }
    }
    let failed: Vec<&str> = verdicts.iter().filter(|v| v.nonzero != Some(true)).map(|v| v.file.as_str()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification(format!("not shown nonzero: {}", failed.join(", "))))
    }
}

fn table(out: &mut impl Write, format: Format, cache: &Cache, ns: &[usize]) -> Result<(), Failure> {
    if let Some(&bad) = ns.iter().find(|&&n| !(5..=8).contains(&n)) {
        return Err(anyhow!("the table covers 5 <= n <= 8, not n = {bad}").into());
    }
    let classifier = Classifier::new();
    let mut all = Vec::new();
    for &n in ns {
        let codes = cache.codes(n)?;
        all.extend(table1::cells(n, &table1::count(&codes, &classifier)));
    }
    match format {
        Format::Json => json_line(out, &all)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            for c in &all {
                w.serialize(c)?;
            }
            w.flush()?;
        }
        Format::Text => {
            let mut header = format!("{:<16}", "gene sizes");
            for n in ns {
                header += &format!("{:>12}", format!("n={n}"));
            }
            writeln!(out, "{header}")?;
            for row in table1::Row::ALL {
                let mut line = format!("{:<16}", row.label());
                for &n in ns {
                    let c = all.iter().find(|c| c.n == n && c.row == row.label()).expect("cell exists");
                    let cell = match c.expected {
                        None if c.found == 0 => String::new(),
                        None => format!("({})", c.found),
                        Some(e) if e == c.found => c.found.to_string(),
                        Some(e) => format!("{} != {e}", c.found),
                    };
                    line += &format!("{cell:>12}");
                }
                writeln!(out, "{}", line.trim_end())?;
            }
            writeln!(out, "(parenthesized counts are blank in the published table)")?;
        }
    }
    let bad: Vec<String> = all
        .iter()
        .filter(|c| !c.matches())
        .map(|c| format!("{} at n={}: found {}, expected {}", c.row, c.n, c.found, c.expected.unwrap_or(0)))
        .collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification(bad.join("; ")))
    }
}
