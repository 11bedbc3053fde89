//! Census of peak and perfect state transfer over streams of graphs.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{MatrixKind, WeightedGraph};
use crate::graph6;
use crate::peak::{classify_pst, PeakAnalyzer, PeakOptions, PeakResult, TransferClass};

/// Per-order counts of graphs with peak or perfect state transfer between
/// some pair of vertices.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct CensusRow {
    pub n: usize,
    pub total: usize,
    #[serde(rename = "pst_A")]
    pub pst_a: usize,
    #[serde(rename = "peak_A")]
    pub peak_a: usize,
    #[serde(rename = "pst_L")]
    pub pst_l: usize,
    #[serde(rename = "peak_L")]
    pub peak_l: usize,
    /// Graphs the engine could not analyse.
    pub failures: usize,
    /// Peak verdicts dropped by strict re-verification.
    pub strict_rejections: usize,
}

impl CensusRow {
    fn merge(&mut self, o: &CensusRow) {
        self.total += o.total;
        self.pst_a += o.pst_a;
        self.peak_a += o.peak_a;
        self.pst_l += o.pst_l;
        self.peak_l += o.peak_l;
        self.failures += o.failures;
        self.strict_rejections += o.strict_rejections;
    }

    pub const TSV_HEADER: &'static str = "n\ttotal\tpst_A\tpeak_A\tpst_L\tpeak_L\tfailures";

    pub fn tsv(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}",
            self.n, self.total, self.pst_a, self.peak_a, self.pst_l, self.peak_l, self.failures
        )
    }
}

pub fn rows_to_tsv(rows: &[CensusRow]) -> String {
    let mut out = String::from(CensusRow::TSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(out, "{}", r.tsv());
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanOptions {
    pub peak: PeakOptions,
    pub adjacency: bool,
    pub laplacian: bool,
    /// Re-check every Peak verdict with [`PeakAnalyzer::verify_at_time`].
    pub strict: bool,
    pub strict_tol: f64,
    /// `None` uses the global rayon pool.
    pub workers: Option<usize>,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            peak: PeakOptions::default(),
            adjacency: true,
            laplacian: true,
            strict: false,
            strict_tol: 1e-8,
            workers: None,
        }
    }
}

impl ScanOptions {
    pub fn kinds(&self) -> Vec<MatrixKind> {
        let mut k = Vec::new();
        if self.adjacency {
            k.push(MatrixKind::Adjacency);
        }
        if self.laplacian {
            k.push(MatrixKind::Laplacian);
        }
        k
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GraphFlags {
    pub peak: bool,
    pub pst: bool,
    pub strict_rejections: usize,
}

/// One graph that could not be analysed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanFailure {
    /// Position in the input stream, from 0.
    pub index: usize,
    pub n: usize,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ScanReport {
    pub rows: Vec<CensusRow>,
    pub failures: Vec<ScanFailure>,
}

fn analyzer(g: &WeightedGraph, kind: MatrixKind, opts: &ScanOptions) -> Result<PeakAnalyzer> {
    if !g.is_connected() {
        return Err(Error::InvalidGraph("census input must be connected".into()));
    }
    PeakAnalyzer::for_graph(g, kind, opts.peak)
}

fn check(a: &PeakAnalyzer, kind: MatrixKind, u: usize, v: usize) -> Result<PeakResult> {
    match kind {
        MatrixKind::Adjacency => a.check(u, v),
        MatrixKind::Laplacian => a.check_laplacian(u, v),
    }
}

fn confirmed(a: &PeakAnalyzer, r: &PeakResult, opts: &ScanOptions) -> Result<bool> {
    if !opts.strict {
        return Ok(true);
    }
    let tau = r.tau0.expect("Peak verdict has tau0");
    Ok(a.verify_at_time(r.u, r.v, tau, opts.strict_tol)?.is_peak)
}

/// Whether some unordered pair `u < v` has peak (and perfect) state
/// transfer under `kind`. Stops at the first perfect pair.
pub fn classify_graph(
    g: &WeightedGraph,
    kind: MatrixKind,
    opts: &ScanOptions,
) -> Result<GraphFlags> {
    let a = analyzer(g, kind, opts)?;
    let mut flags = GraphFlags::default();
    let n = g.order();
    for u in 0..n {
        for v in u + 1..n {
            let r = check(&a, kind, u, v)?;
            if !r.is_peak() {
                continue;
            }
            if !confirmed(&a, &r, opts)? {
                flags.strict_rejections += 1;
                continue;
            }
            flags.peak = true;
            if classify_pst(&r, opts.peak.pst_tol) == TransferClass::Perfect {
                flags.pst = true;
                return Ok(flags);
            }
        }
    }
    Ok(flags)
}

fn tally(index: usize, g: &WeightedGraph, opts: &ScanOptions) -> (CensusRow, Option<ScanFailure>) {
    let mut row = CensusRow {
        n: g.order(),
        total: 1,
        ..CensusRow::default()
    };
    for kind in opts.kinds() {
        match classify_graph(g, kind, opts) {
            Ok(f) => {
                row.strict_rejections += f.strict_rejections;
                let (peak, pst) = match kind {
                    MatrixKind::Adjacency => (&mut row.peak_a, &mut row.pst_a),
                    MatrixKind::Laplacian => (&mut row.peak_l, &mut row.pst_l),
                };
                *peak += f.peak as usize;
                *pst += f.pst as usize;
            }
            Err(e) => {
                row = CensusRow {
                    n: g.order(),
                    total: 1,
                    failures: 1,
                    ..CensusRow::default()
                };
                let failure = ScanFailure {
                    index,
                    n: g.order(),
                    message: format!("{kind}: {e}"),
                };
                return (row, Some(failure));
            }
        }
    }
    (row, None)
}

fn scan_graphs(graphs: &[WeightedGraph], opts: &ScanOptions) -> ScanReport {
    let parts: Vec<(CensusRow, Option<ScanFailure>)> = graphs
        .par_iter()
        .enumerate()
        .map(|(i, g)| tally(i, g, opts))
        .collect();
    let mut rows: BTreeMap<usize, CensusRow> = BTreeMap::new();
    let mut failures = Vec::new();
    for (row, failure) in parts {
        rows.entry(row.n)
            .or_insert_with(|| CensusRow {
                n: row.n,
                ..CensusRow::default()
            })
            .merge(&row);
        failures.extend(failure);
    }
    ScanReport {
        rows: rows.into_values().collect(),
        failures,
    }
}

fn in_pool<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(f()),
        Some(0) => Err(Error::BadParam("workers must be positive".into())),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .map_err(|e| Error::BadParam(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Census of a stream of graphs, one row per order present. Parse errors
/// in the stream abort the scan; per-graph engine errors are recorded in
/// [`ScanReport::failures`] and counted in the row.
pub fn scan<I>(source: I, opts: &ScanOptions) -> Result<ScanReport>
where
    I: IntoIterator<Item = Result<WeightedGraph>>,
{
    let graphs = source.into_iter().collect::<Result<Vec<_>>>()?;
    in_pool(opts.workers, || scan_graphs(&graphs, opts))
}

/// [`scan`] over graph6 text.
pub fn scan_graph6<R: std::io::BufRead>(reader: R, opts: &ScanOptions) -> Result<ScanReport> {
    scan(graph6::read_graph6(reader), opts)
}

/// A peak pair found by [`list_witnesses`].
#[derive(Debug, Clone)]
pub struct Witness {
    pub index: usize,
    pub graph: WeightedGraph,
    pub kind: MatrixKind,
    pub result: PeakResult,
}

impl Witness {
    /// One JSON object per line: graph6, pair, kind and the peak report.
    pub fn to_json_line(&self) -> Result<String> {
        #[derive(Serialize)]
        struct Line {
            graph6: String,
            n: usize,
            u: usize,
            v: usize,
            matrix: &'static str,
            result: crate::peak::PeakReport,
        }
        Ok(serde_json::to_string(&Line {
            graph6: graph6::encode_graph6(&self.graph)?,
            n: self.graph.order(),
            u: self.result.u,
            v: self.result.v,
            matrix: self.kind.short_name(),
            result: self.result.report(),
        })?)
    }
}

/// Every `(graph, u < v)` with a Peak verdict under `kind`, in stream order.
pub fn list_witnesses<I>(source: I, kind: MatrixKind, opts: &ScanOptions) -> Result<Vec<Witness>>
where
    I: IntoIterator<Item = Result<WeightedGraph>>,
{
    let graphs = source.into_iter().collect::<Result<Vec<_>>>()?;
    let per_graph = in_pool(opts.workers, || {
        graphs
            .par_iter()
            .enumerate()
            .map(|(i, g)| -> Result<Vec<Witness>> {
                let a = analyzer(g, kind, opts)?;
                let n = g.order();
                let mut out = Vec::new();
                for u in 0..n {
                    for v in u + 1..n {
                        let r = check(&a, kind, u, v)?;
                        if r.is_peak() && confirmed(&a, &r, opts)? {
                            out.push(Witness {
                                index: i,
                                graph: g.clone(),
                                kind,
                                result: r,
                            });
                        }
                    }
                }
                Ok(out)
            })
            .collect::<Vec<_>>()
    })?;
    let mut all = Vec::new();
    for w in per_graph {
        all.extend(w?);
    }
    Ok(all)
}
