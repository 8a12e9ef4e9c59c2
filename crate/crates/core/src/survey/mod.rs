//! Per-polynomial analysis records, batch surveys, caching and the
//! verification suites behind the `interlace` binary.

mod cache;
pub mod verify;

pub use cache::{cache_key, Cache, CacheEntry, CacheVerification};

use std::io::{BufRead, Write};
use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::{
    dobrowolski_check, rank_bounds, DobrowolskiReport, KissingTable, RankBoundReport,
};
use crate::engine::{count_trace_t_with, EngineError, SearchConfig};
use crate::exact::{
    discriminant, is_irreducible, parse_polynomial, ExactError, IntPolynomial,
    IRREDUCIBILITY_DEGREE_CAP,
};
use crate::numberfield::{
    flatness_report, min_span_search, ratio_to_f64, Irreducibility, NumberFieldError, Order,
};
use crate::polytope::{GeometryError, RealRoots};

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Coarse failure classes, mapped to process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureKind {
    Parse,
    Precondition,
    BudgetExceeded,
}

impl FailureKind {
    pub fn exit_code(self) -> i32 {
        match self {
            FailureKind::Parse => 2,
            FailureKind::Precondition => 3,
            FailureKind::BudgetExceeded => 4,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{message}")]
pub struct AnalyzeError {
    pub kind: FailureKind,
    pub name: String,
    pub message: String,
}

impl AnalyzeError {
    fn new(kind: FailureKind, name: &str, message: impl Into<String>) -> Self {
        AnalyzeError {
            kind,
            name: name.to_string(),
            message: message.into(),
        }
    }
}

impl From<ExactError> for AnalyzeError {
    fn from(e: ExactError) -> Self {
        match e {
            ExactError::Parse { .. } | ExactError::EmptyInput => {
                AnalyzeError::new(FailureKind::Parse, "ParseError", e.to_string())
            }
            other => AnalyzeError::new(
                FailureKind::Precondition,
                variant_name(&other),
                other.to_string(),
            ),
        }
    }
}

impl From<EngineError> for AnalyzeError {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::BudgetExceeded { .. } => {
                AnalyzeError::new(FailureKind::BudgetExceeded, "BudgetExceeded", e.to_string())
            }
            EngineError::NotTotallyReal => {
                AnalyzeError::new(FailureKind::Precondition, "NotTotallyReal", e.to_string())
            }
            EngineError::NotSquarefree => {
                AnalyzeError::new(FailureKind::Precondition, "NotSquarefree", e.to_string())
            }
            EngineError::NotMonic => {
                AnalyzeError::new(FailureKind::Precondition, "NotMonic", e.to_string())
            }
            other => {
                AnalyzeError::new(FailureKind::Precondition, "Precondition", other.to_string())
            }
        }
    }
}

impl From<NumberFieldError> for AnalyzeError {
    fn from(e: NumberFieldError) -> Self {
        match e {
            NumberFieldError::BudgetExceeded { .. } => {
                AnalyzeError::new(FailureKind::BudgetExceeded, "BudgetExceeded", e.to_string())
            }
            NumberFieldError::Engine(inner) => inner.into(),
            other => {
                AnalyzeError::new(FailureKind::Precondition, "Precondition", other.to_string())
            }
        }
    }
}

impl From<GeometryError> for AnalyzeError {
    fn from(e: GeometryError) -> Self {
        let name = match e {
            GeometryError::NotTotallyReal => "NotTotallyReal",
            GeometryError::NotSquarefree => "NotSquarefree",
            _ => "Precondition",
        };
        AnalyzeError::new(FailureKind::Precondition, name, e.to_string())
    }
}

fn variant_name(e: &ExactError) -> &'static str {
    match e {
        ExactError::NotSquarefree => "NotSquarefree",
        ExactError::ZeroPolynomial => "ZeroPolynomial",
        ExactError::DegreeTooSmall { .. } => "DegreeTooSmall",
        ExactError::DegreeCapExceeded { .. } => "DegreeCapExceeded",
        _ => "Precondition",
    }
}

/// Knobs for a single analysis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalyzeOptions {
    /// Additionally count totally positive elements of this trace.
    pub trace: Option<u64>,
    pub max_trace: u64,
    pub budget: u64,
    /// Width of reported span enclosures, as `1 / 2^precision_bits`.
    pub precision_bits: u32,
    pub coeff_bound: u64,
    pub jobs: usize,
    pub assert_irreducible: bool,
    pub assert_monogenic: bool,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            trace: None,
            max_trace: 3,
            budget: SearchConfig::default().budget,
            precision_bits: 20,
            coeff_bound: 1,
            jobs: 1,
            assert_irreducible: false,
            assert_monogenic: false,
        }
    }
}

impl AnalyzeOptions {
    fn search(&self) -> SearchConfig {
        SearchConfig {
            budget: self.budget,
            jobs: self.jobs,
            certificates: false,
        }
    }

    fn eps(&self) -> BigRational {
        BigRational::new(BigInt::from(1), BigInt::from(1) << self.precision_bits)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpanSummary {
    pub element: String,
    pub lo: String,
    pub hi: String,
    pub approx: f64,
    pub coeff_bound: u64,
    pub width_upper_bound: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlatnessSummary {
    pub symbolic: String,
    pub c_coefficient: f64,
}

/// One analysed polynomial. Counts appear only for completed scans.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisRecord {
    pub poly: String,
    pub degree: Option<usize>,
    pub discriminant: Option<String>,
    pub squarefree: Option<bool>,
    pub irreducible: Option<bool>,
    pub irreducible_asserted: bool,
    pub totally_real: Option<bool>,
    pub interlacer_count: Option<u64>,
    pub trace: Option<u64>,
    pub trace_count: Option<u64>,
    pub t_star: Option<u64>,
    pub m_count: Option<u64>,
    pub field_level: bool,
    pub rank_bounds: Option<RankBoundReport>,
    pub dobrowolski: Option<DobrowolskiReport>,
    pub span_best: Option<SpanSummary>,
    pub flatness: Option<FlatnessSummary>,
    pub status: String,
    pub error_kind: Option<FailureKind>,
    pub error: Option<String>,
    pub timing_ms: Option<f64>,
    pub engine_version: String,
}

impl AnalysisRecord {
    fn empty(poly: String) -> Self {
        AnalysisRecord {
            poly,
            degree: None,
            discriminant: None,
            squarefree: None,
            irreducible: None,
            irreducible_asserted: false,
            totally_real: None,
            interlacer_count: None,
            trace: None,
            trace_count: None,
            t_star: None,
            m_count: None,
            field_level: false,
            rank_bounds: None,
            dobrowolski: None,
            span_best: None,
            flatness: None,
            status: "ok".into(),
            error_kind: None,
            error: None,
            timing_ms: None,
            engine_version: ENGINE_VERSION.into(),
        }
    }

    /// Row form of a failed analysis.
    pub fn failed(poly: &str, err: &AnalyzeError) -> Self {
        let mut r = AnalysisRecord::empty(poly.to_string());
        r.status = "error".into();
        r.error_kind = Some(err.kind);
        r.error = Some(format!("{}: {}", err.name, err.message));
        r
    }

    pub fn without_timing(&self) -> Self {
        AnalysisRecord {
            timing_ms: None,
            ..self.clone()
        }
    }

    pub fn classical_rank(&self) -> Option<u64> {
        self.rank_bounds.as_ref().map(|r| r.classical.minimal_rank)
    }
}

/// Full analysis of one polynomial given as text.
pub fn analyze(text: &str, opts: &AnalyzeOptions) -> Result<AnalysisRecord, AnalyzeError> {
    let f = parse_polynomial(text)?;
    analyze_poly(&f, opts)
}

pub fn analyze_poly(
    f: &IntPolynomial,
    opts: &AnalyzeOptions,
) -> Result<AnalysisRecord, AnalyzeError> {
    let start = Instant::now();
    let mut rec = AnalysisRecord::empty(f.to_canonical());
    let d = f.degree().unwrap_or(0);
    rec.degree = f.degree();
    if d < 2 {
        return Err(AnalyzeError::new(
            FailureKind::Precondition,
            "DegreeTooSmall",
            format!("degree must be at least 2, got {d}"),
        ));
    }
    rec.discriminant = Some(discriminant(f)?.to_string());
    let roots = RealRoots::new(f)?;
    rec.squarefree = Some(true);
    rec.totally_real = Some(true);
    if !f.is_monic() {
        return Err(EngineError::NotMonic.into());
    }
    rec.irreducible_asserted = opts.assert_irreducible;
    rec.irreducible = if opts.assert_irreducible {
        Some(true)
    } else if d <= IRREDUCIBILITY_DEGREE_CAP {
        Some(is_irreducible(f)?)
    } else {
        None
    };

    let search = opts.search();
    let one = count_trace_t_with(&roots, &BigInt::from(1), &search)?;
    let count = one.count() as u64;
    rec.interlacer_count = Some(count);
    if let Some(t) = opts.trace {
        let set = count_trace_t_with(&roots, &BigInt::from(t), &search)?;
        rec.trace = Some(t);
        rec.trace_count = Some(set.count() as u64);
    }

    if rec.irreducible == Some(true) {
        let order = Order::new(f, Irreducibility::Assume)?.with_monogenic(opts.assert_monogenic);
        rec.field_level = opts.assert_monogenic;
        rec.dobrowolski = Some(dobrowolski_check(f, count > 0).map_err(|e| {
            AnalyzeError::new(FailureKind::Precondition, "Precondition", e.to_string())
        })?);
        let mts = if count > 0 {
            // the trace-one level is already enumerated
            Some((1, count))
        } else {
            match order.minimal_trace_set(opts.max_trace, &search) {
                Ok(m) => Some((m.t_star, m.count)),
                Err(NumberFieldError::NoElementUpToTMax { .. }) => None,
                Err(e) => return Err(e.into()),
            }
        };
        if let Some((t, m)) = mts {
            rec.t_star = Some(t);
            rec.m_count = Some(m);
            let table = KissingTable::load().map_err(|e| {
                AnalyzeError::new(FailureKind::Precondition, "KissingTable", e.to_string())
            })?;
            rec.rank_bounds = Some(rank_bounds(d, m, &table).map_err(|e| {
                AnalyzeError::new(FailureKind::Precondition, "Precondition", e.to_string())
            })?);
        }
    }

    if opts.coeff_bound >= 1 {
        let span = min_span_search(f, opts.coeff_bound, &opts.eps())?;
        rec.span_best = Some(SpanSummary {
            element: span.best.element.to_canonical(),
            lo: span.best.span_interval.lo.to_string(),
            hi: span.best.span_interval.hi.to_string(),
            approx: ratio_to_f64(&span.best.span_interval.midpoint()),
            coeff_bound: span.coeff_bound,
            width_upper_bound: span.width_upper_bound,
        });
    }
    let flat = flatness_report(f, count, None)?;
    rec.flatness = Some(FlatnessSummary {
        symbolic: flat.symbolic,
        c_coefficient: flat.c_coefficient,
    });
    rec.timing_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    Ok(rec)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

/// Fixed CSV column order.
pub const CSV_HEADER: [&str; 24] = [
    "poly",
    "degree",
    "discriminant",
    "squarefree",
    "irreducible",
    "totally_real",
    "interlacer_count",
    "trace",
    "trace_count",
    "t_star",
    "m_count",
    "field_level",
    "classical_rank",
    "nonclassical_rank",
    "nonclassical_branch",
    "diagonal_rank",
    "asymptotic_bound",
    "dobrowolski",
    "span_element",
    "span_approx",
    "status",
    "error",
    "timing_ms",
    "engine_version",
];

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(T::to_string).unwrap_or_default()
}

/// Flat view of a record, in [`CSV_HEADER`] order.
pub fn flat_fields(r: &AnalysisRecord) -> Vec<String> {
    let rb = r.rank_bounds.as_ref();
    vec![
        r.poly.clone(),
        opt(&r.degree),
        opt(&r.discriminant),
        opt(&r.squarefree),
        opt(&r.irreducible),
        opt(&r.totally_real),
        opt(&r.interlacer_count),
        opt(&r.trace),
        opt(&r.trace_count),
        opt(&r.t_star),
        opt(&r.m_count),
        r.field_level.to_string(),
        opt(&rb.map(|b| b.classical.minimal_rank)),
        opt(&rb.map(|b| b.nonclassical.minimal_rank)),
        opt(&rb.map(|b| {
            serde_json::to_value(b.nonclassical_branch)
                .ok()
                .and_then(|v| v.as_str().map(str::to_string))
                .unwrap_or_default()
        })),
        opt(&rb.and_then(|b| b.diagonal.as_ref().map(|v| v.minimal_rank))),
        opt(&rb.map(|b| b.asymptotic.approx)),
        opt(&r.dobrowolski.as_ref().map(|d| match d {
            DobrowolskiReport::Holds { .. } => "holds",
            DobrowolskiReport::NotApplicable => "not_applicable",
            DobrowolskiReport::Violated { .. } => "violated",
        })),
        opt(&r.span_best.as_ref().map(|s| s.element.clone())),
        opt(&r.span_best.as_ref().map(|s| s.approx)),
        r.status.clone(),
        opt(&r.error),
        opt(&r.timing_ms),
        r.engine_version.clone(),
    ]
}

pub fn to_text(r: &AnalysisRecord) -> String {
    CSV_HEADER
        .iter()
        .zip(flat_fields(r))
        .filter(|(_, v)| !v.is_empty())
        .map(|(k, v)| format!("{k}: {v}"))
        .collect::<Vec<_>>()
        .join("\n")
}

/// Streams records in one of the supported formats.
pub struct RecordWriter<W: Write> {
    format: OutputFormat,
    csv: Option<csv::Writer<W>>,
    out: Option<W>,
    first: bool,
}

impl<W: Write> RecordWriter<W> {
    pub fn new(out: W, format: OutputFormat) -> std::io::Result<Self> {
        if format == OutputFormat::Csv {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(CSV_HEADER)?;
            Ok(RecordWriter {
                format,
                csv: Some(w),
                out: None,
                first: true,
            })
        } else {
            Ok(RecordWriter {
                format,
                csv: None,
                out: Some(out),
                first: true,
            })
        }
    }

    pub fn write(&mut self, r: &AnalysisRecord) -> std::io::Result<()> {
        match self.format {
            OutputFormat::Csv => {
                self.csv.as_mut().unwrap().write_record(flat_fields(r))?;
            }
            OutputFormat::Json => {
                let out = self.out.as_mut().unwrap();
                serde_json::to_writer(&mut *out, r)?;
                out.write_all(b"\n")?;
            }
            OutputFormat::Text => {
                let out = self.out.as_mut().unwrap();
                if !self.first {
                    out.write_all(b"\n")?;
                }
                writeln!(out, "{}", to_text(r))?;
            }
        }
        self.first = false;
        Ok(())
    }

    pub fn finish(self) -> std::io::Result<()> {
        if let Some(mut w) = self.csv {
            w.flush()?;
        }
        if let Some(mut o) = self.out {
            o.flush()?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveySummary {
    pub rows: usize,
    pub ok: usize,
    pub errors: usize,
    pub cache_hits: usize,
}

/// Non-empty, non-comment lines of a corpus file.
pub fn read_corpus(input: impl BufRead) -> std::io::Result<Vec<String>> {
    let mut lines = Vec::new();
    for line in input.lines() {
        let line = line?;
        let body = line.split('#').next().unwrap_or("").trim();
        if !body.is_empty() {
            lines.push(body.to_string());
        }
    }
    Ok(lines)
}

/// Analyses every corpus line (in parallel when `opts.jobs > 1`) and writes
/// the records in input order. Failures become error rows.
pub fn run_survey<W: Write>(
    lines: &[String],
    opts: &AnalyzeOptions,
    cache: Option<&mut Cache>,
    writer: &mut RecordWriter<W>,
    with_timing: bool,
) -> std::io::Result<SurveySummary> {
    let mut summary = SurveySummary::default();
    let mut slots: Vec<Option<AnalysisRecord>> = vec![None; lines.len()];
    let keys: Vec<Option<String>> = lines
        .iter()
        .map(|l| {
            parse_polynomial(l)
                .ok()
                .map(|f| cache_key(&f.to_canonical(), "analyze", opts))
        })
        .collect();
    let mut cache = cache;
    if let Some(c) = cache.as_deref() {
        for (i, key) in keys.iter().enumerate() {
            if let Some(rec) = key.as_ref().and_then(|k| c.get(k)) {
                slots[i] = Some(rec.clone());
                summary.cache_hits += 1;
            }
        }
    }
    let pending: Vec<usize> = (0..lines.len()).filter(|&i| slots[i].is_none()).collect();
    // rows run one per worker; the engine itself stays single threaded here
    let row_opts = AnalyzeOptions {
        jobs: 1,
        ..opts.clone()
    };
    let workers = opts.jobs.max(1).min(pending.len().max(1));
    let next = AtomicUsize::new(0);
    let computed: Vec<(usize, AnalysisRecord, bool)> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|_| {
                s.spawn(|| {
                    let mut out = Vec::new();
                    loop {
                        let j = next.fetch_add(1, AtomicOrdering::Relaxed);
                        let Some(&i) = pending.get(j) else { break };
                        let (rec, ok) = match analyze(&lines[i], &row_opts) {
                            Ok(r) => (r, true),
                            Err(e) => (AnalysisRecord::failed(&lines[i], &e), false),
                        };
                        out.push((i, rec, ok));
                    }
                    out
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("survey worker panicked"))
            .collect()
    });
    for (i, rec, ok) in computed {
        if ok {
            if let (Some(c), Some(k)) = (cache.as_deref_mut(), &keys[i]) {
                c.put(k, &rec, "analyze", &row_opts)?;
            }
        }
        slots[i] = Some(rec);
    }
    for rec in slots.into_iter().flatten() {
        summary.rows += 1;
        if rec.status == "ok" {
            summary.ok += 1;
        } else {
            summary.errors += 1;
        }
        let rec = if with_timing {
            rec
        } else {
            rec.without_timing()
        };
        writer.write(&rec)?;
    }
    Ok(summary)
}
