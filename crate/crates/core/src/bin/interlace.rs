use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use interlacing::exact::parse_polynomial;
use interlacing::survey::verify::{run_suite, UnknownSuite, SUITES};
use interlacing::survey::{
    analyze, cache_key, read_corpus, run_survey, AnalysisRecord, AnalyzeOptions, Cache,
    OutputFormat, RecordWriter,
};

#[derive(Parser)]
#[command(
    name = "interlace",
    version,
    about = "Integer interlacing polynomials and rank bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyse one polynomial, e.g. "x^2-x-1" or "1,-1,-1".
    Analyze {
        poly: String,
        #[command(flatten)]
        common: Common,
    },
    /// Analyse every line of a corpus file ("-" for stdin).
    Survey {
        input: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Recompute every N-th cache entry and compare, instead of surveying.
        #[arg(long, value_name = "N", num_args = 0..=1, default_missing_value = "1")]
        verify_cache: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Run a named verification suite.
    Verify {
        /// One of the suite names, or "all".
        suite: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Json => OutputFormat::Json,
            Format::Csv => OutputFormat::Csv,
            Format::Text => OutputFormat::Text,
        }
    }
}

#[derive(Args)]
struct Common {
    /// Also count totally positive dual elements of this trace.
    #[arg(long)]
    trace: Option<u64>,
    #[arg(long, default_value_t = 3)]
    max_trace: u64,
    /// Maximum exact leaf tests per scan.
    #[arg(long, default_value_t = 100_000_000)]
    budget: u64,
    /// Span enclosures are reported to width 2^-precision.
    #[arg(long, default_value_t = 20)]
    precision: u32,
    /// Coefficient bound of the span search (0 disables it).
    #[arg(long, default_value_t = 1)]
    coeff_bound: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Append-only JSON-lines cache.
    #[arg(long)]
    cache: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long)]
    assert_irreducible: bool,
    /// Treat Z[a] as the ring of integers, making outputs field-level.
    #[arg(long)]
    assert_monogenic: bool,
    /// Leave out timing fields, for byte-identical comparisons.
    #[arg(long)]
    no_timing: bool,
}

impl Common {
    fn options(&self) -> AnalyzeOptions {
        AnalyzeOptions {
            trace: self.trace,
            max_trace: self.max_trace,
            budget: self.budget,
            precision_bits: self.precision,
            coeff_bound: self.coeff_bound,
            jobs: self.jobs.max(1),
            assert_irreducible: self.assert_irreducible,
            assert_monogenic: self.assert_monogenic,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Analyze { poly, common } => cmd_analyze(&poly, &common),
        Command::Survey {
            input,
            output,
            verify_cache,
            common,
        } => cmd_survey(input, output, verify_cache, &common),
        Command::Verify { suite, format } => cmd_verify(&suite, format),
    };
    ExitCode::from(code as u8)
}

fn io_fail(e: io::Error) -> i32 {
    eprintln!("error: {e}");
    1
}

fn cmd_analyze(poly: &str, common: &Common) -> i32 {
    let opts = common.options();
    let mut cache = match common.cache.as_deref().map(Cache::open).transpose() {
        Ok(c) => c,
        Err(e) => return io_fail(e),
    };
    let key = parse_polynomial(poly)
        .ok()
        .map(|f| cache_key(&f.to_canonical(), "analyze", &opts));
    let cached = match (&cache, &key) {
        (Some(c), Some(k)) => c.get(k).cloned(),
        _ => None,
    };
    let record = match cached {
        Some(r) => r,
        None => match analyze(poly, &opts) {
            Ok(r) => {
                if let (Some(c), Some(k)) = (cache.as_mut(), &key) {
                    if let Err(e) = c.put(k, &r, "analyze", &opts) {
                        return io_fail(e);
                    }
                }
                r
            }
            Err(e) => {
                eprintln!("error: {}: {}", e.name, e.message);
                let failed = AnalysisRecord::failed(poly, &e);
                let _ = emit(&[failed], common.format.into(), io::stdout().lock());
                return e.kind.exit_code();
            }
        },
    };
    let record = if common.no_timing {
        record.without_timing()
    } else {
        record
    };
    match emit(&[record], common.format.into(), io::stdout().lock()) {
        Ok(()) => 0,
        Err(e) => io_fail(e),
    }
}

fn emit<W: Write>(records: &[AnalysisRecord], format: OutputFormat, out: W) -> io::Result<()> {
    let mut w = RecordWriter::new(out, format)?;
    for r in records {
        w.write(r)?;
    }
    w.finish()
}

fn cmd_survey(
    input: Option<PathBuf>,
    output: Option<PathBuf>,
    verify_cache: Option<usize>,
    common: &Common,
) -> i32 {
    let mut cache = match common.cache.as_deref().map(Cache::open).transpose() {
        Ok(c) => c,
        Err(e) => return io_fail(e),
    };
    if let Some(stride) = verify_cache {
        let Some(c) = cache.as_ref() else {
            eprintln!("error: --verify-cache needs --cache");
            return 2;
        };
        let v = c.verify(stride);
        println!("{}", serde_json::to_string(&v).expect("serializable"));
        return if v.mismatches.is_empty() { 0 } else { 1 };
    }
    let Some(input) = input else {
        eprintln!("error: missing input corpus");
        return 2;
    };
    let lines = if input.as_os_str() == "-" {
        read_corpus(io::stdin().lock())
    } else {
        File::open(&input).and_then(|f| read_corpus(BufReader::new(f)))
    };
    let lines = match lines {
        Ok(l) => l,
        Err(e) => return io_fail(e),
    };
    let out: Box<dyn Write> = match &output {
        Some(p) => match File::create(p) {
            Ok(f) => Box::new(io::BufWriter::new(f)),
            Err(e) => return io_fail(e),
        },
        None => Box::new(io::stdout().lock()),
    };
    let result = RecordWriter::new(out, common.format.into()).and_then(|mut w| {
        let s = run_survey(
            &lines,
            &common.options(),
            cache.as_mut(),
            &mut w,
            !common.no_timing,
        )?;
        w.finish()?;
        Ok(s)
    });
    match result {
        Ok(s) => {
            eprintln!(
                "summary: rows={} ok={} errors={} cache_hits={}",
                s.rows, s.ok, s.errors, s.cache_hits
            );
            0
        }
        Err(e) => io_fail(e),
    }
}

fn cmd_verify(suite: &str, format: Format) -> i32 {
    let results = match run_suite(suite) {
        Ok(r) => r,
        Err(UnknownSuite(name)) => {
            eprintln!(
                "error: UnknownSuite: {name} (expected one of {}, all)",
                SUITES.join(", ")
            );
            return 2;
        }
    };
    let mut failed = false;
    for r in &results {
        failed |= !r.passed;
        match format {
            Format::Text => {
                println!(
                    "{} {} ({} checks) {}",
                    if r.passed { "PASS" } else { "FAIL" },
                    r.suite,
                    r.checked,
                    r.detail
                );
                for c in &r.counterexamples {
                    println!("  counterexample: {c}");
                }
            }
            _ => println!("{}", serde_json::to_string(r).expect("serializable")),
        }
    }
    if failed {
        1
    } else {
        0
    }
}
