//! Packaging of analysis runs: the end-to-end pipeline driver, gap detection
//! on rank-frequency plots, hypothesis comparison tables, and rendering to
//! CSV, JSON, or a self-contained SVG bar chart.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::{normalize, CorpusDocument, DiacriticMode};
use crate::error::{Error, Result};
use crate::hypothesis::{
    group_diphthongs, merge_symbols, split_j, split_w, DiphthongScope, Hypothesis,
};
use crate::metrics::{rank_distribution, MetricsReport, RankDistribution, SdMode, Smoothness};
use crate::transducer::{apply_rules, count_symbols, PhonemeString, RuleSet};

/// A rank position n where F(n)/F(n+1) meets the gap threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gap {
    /// 1-based rank position; the gap sits between ranks n and n+1.
    pub position: usize,
    pub ratio: f64,
}

/// Everything one corpus × hypothesis evaluation produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisRun {
    pub corpus_id: String,
    pub hypothesis: String,
    pub distribution: RankDistribution,
    pub metrics: MetricsReport,
    pub gaps: Vec<Gap>,
}

/// One row per run, in input order, with values copied bit-exactly; rounding
/// happens only when the table is rendered.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonTable {
    pub rows: Vec<ComparisonRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub hypothesis: String,
    pub figure: String,
    pub n: usize,
    pub smoothness: Smoothness,
    /// Fraction in [0,1], like [`MetricsReport::redundancy`].
    pub redundancy: f64,
    pub entropy_bits: f64,
}

/// All positions n with F(n)/F(n+1) ≥ threshold, in rank order.
pub fn detect_gaps(dist: &RankDistribution, threshold: f64) -> Vec<Gap> {
    let fractions: Vec<f64> = dist.fractions().collect();
    fractions
        .windows(2)
        .enumerate()
        .filter_map(|(i, w)| {
            let ratio = w[0] / w[1];
            (ratio >= threshold).then_some(Gap {
                position: i + 1,
                ratio,
            })
        })
        .collect()
}

/// The conventional figure label for a hypothesis name as it appears in an
/// [`AnalysisRun`]; merge runs label as "benchmark".
pub fn figure_label_for(name: &str) -> String {
    match Hypothesis::from_name(name) {
        Ok(hyp) => hyp.figure_label().to_string(),
        Err(_) if name.starts_with("merge(") => "benchmark".to_string(),
        Err(_) => "custom".to_string(),
    }
}

/// Collapses runs into a comparison table, one row per run in input order.
pub fn compare(runs: &[AnalysisRun]) -> ComparisonTable {
    ComparisonTable {
        rows: runs
            .iter()
            .map(|run| ComparisonRow {
                hypothesis: run.hypothesis.clone(),
                figure: figure_label_for(&run.hypothesis),
                n: run.metrics.n,
                smoothness: run.metrics.smoothness,
                redundancy: run.metrics.redundancy,
                entropy_bits: run.metrics.entropy_bits,
            })
            .collect(),
    }
}

/// Pipeline configuration: which rulesets to transduce with, which SD divisor
/// the smoothness uses, and the gap-detection threshold.
#[derive(Debug, Clone)]
pub struct AnalysisOptions {
    pub sd_mode: SdMode,
    pub gap_threshold: f64,
    pub reference: RuleSet,
    pub diacritic: RuleSet,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            sd_mode: SdMode::Sample,
            gap_threshold: 1.3,
            reference: RuleSet::reference(),
            diacritic: RuleSet::reference_diacritic(),
        }
    }
}

impl AnalysisOptions {
    fn validate(&self) -> Result<()> {
        // NaN must fail this check too, hence no plain `<=`.
        if self.gap_threshold.is_nan() || self.gap_threshold <= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "gap threshold must be > 1, got {}",
                self.gap_threshold
            )));
        }
        Ok(())
    }

    fn ruleset_for(&self, mode: DiacriticMode) -> &RuleSet {
        match mode {
            DiacriticMode::StripAll => &self.reference,
            DiacriticMode::PreserveIAcute => &self.diacritic,
        }
    }
}

/// Runs the full pipeline for one hypothesis over one (possibly aggregated)
/// document. Returns the run plus any symbols the ruleset passed through
/// unrecognized, for the caller to surface as warnings.
pub fn run_analysis(
    doc: &CorpusDocument,
    hypothesis: &Hypothesis,
    opts: &AnalysisOptions,
) -> Result<(AnalysisRun, Vec<char>)> {
    opts.validate()?;
    let mode = hypothesis.required_mode();
    let normalized = normalize(doc, mode)?;

    let (counts, warnings) = if hypothesis.bypasses_transducer() {
        let letters = PhonemeString::from_raw(normalized.text(), mode);
        (count_symbols(&letters)?, Vec::new())
    } else {
        let transduced = apply_rules(&normalized, opts.ruleset_for(mode))?;
        let warnings = transduced.unknown_symbols().to_vec();
        let shaped = match hypothesis {
            Hypothesis::Identity | Hypothesis::RawLetters | Hypothesis::Merge(_) => transduced,
            Hypothesis::WSplit => split_w(&transduced),
            Hypothesis::WjSplit => split_j(&split_w(&transduced), false)?,
            Hypothesis::WjSplitDiacritic => split_j(&split_w(&transduced), true)?,
            Hypothesis::DiphthongsAll => group_diphthongs(&transduced, DiphthongScope::All),
            Hypothesis::DiphthongsIu => group_diphthongs(&transduced, DiphthongScope::IuOnly),
        };
        let mut counts = count_symbols(&shaped)?;
        if let Hypothesis::Merge(group) = hypothesis {
            counts = merge_symbols(&counts, group)?;
        }
        (counts, warnings)
    };

    let distribution = rank_distribution(&counts)?;
    let metrics = MetricsReport::compute(&distribution, opts.sd_mode)?;
    let gaps = detect_gaps(&distribution, opts.gap_threshold);
    Ok((
        AnalysisRun {
            corpus_id: doc.id().to_string(),
            hypothesis: hypothesis.name(),
            distribution,
            metrics,
            gaps,
        },
        warnings,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
    Svg,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<OutputFormat> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            "svg" => Ok(OutputFormat::Svg),
            other => Err(Error::InvalidParameter(format!(
                "format must be csv, json, or svg, got '{other}'"
            ))),
        }
    }
}

/// SVG canvas size in pixels.
#[derive(Debug, Clone, Copy)]
pub struct SvgOptions {
    pub width: u32,
    pub height: u32,
}

impl Default for SvgOptions {
    fn default() -> Self {
        SvgOptions {
            width: 800,
            height: 500,
        }
    }
}

pub enum RenderTarget<'a> {
    Run(&'a AnalysisRun),
    Table(&'a ComparisonTable),
}

/// Serializes a run or table. SVG applies to single runs only; a table has no
/// bar-chart form.
pub fn render(target: RenderTarget, format: OutputFormat, svg: SvgOptions) -> Result<Vec<u8>> {
    match (target, format) {
        (RenderTarget::Run(run), OutputFormat::Csv) => Ok(run_csv(run).into_bytes()),
        (RenderTarget::Table(table), OutputFormat::Csv) => Ok(table_csv(table).into_bytes()),
        (RenderTarget::Run(run), OutputFormat::Json) => json_bytes(run),
        (RenderTarget::Table(table), OutputFormat::Json) => json_bytes(table),
        (RenderTarget::Run(run), OutputFormat::Svg) => Ok(run_svg(run, svg).into_bytes()),
        (RenderTarget::Table(_), OutputFormat::Svg) => Err(Error::InvalidParameter(
            "svg renders a single run, not a comparison table".into(),
        )),
    }
}

fn json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value)
        .map_err(|e| Error::InvalidParameter(format!("json serialization failed: {e}")))?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn run_csv(run: &AnalysisRun) -> String {
    let mut out = String::from("rank,symbol,count,fraction\n");
    for (i, entry) in run.distribution.entries().iter().enumerate() {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            i + 1,
            entry.symbol,
            entry.count,
            entry.fraction
        );
    }
    out
}

fn table_csv(table: &ComparisonTable) -> String {
    let mut out = String::from("hypothesis,figure,n,smoothness,redundancy_pct,entropy_bits\n");
    for row in &table.rows {
        let smooth = match row.smoothness {
            Smoothness::Finite(v) => format!("{v:.4}"),
            Smoothness::Infinite => "inf".to_string(),
        };
        let _ = writeln!(
            out,
            "{},{},{},{},{:.2},{:.2}",
            row.hypothesis,
            row.figure,
            row.n,
            smooth,
            row.redundancy * 100.0,
            row.entropy_bits
        );
    }
    out
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Bar chart of F(n) against rank: one bar per symbol, label beneath, no
/// external assets.
fn run_svg(run: &AnalysisRun, opts: SvgOptions) -> String {
    let (left, right, top, bottom) = (52.0, 16.0, 28.0, 34.0);
    let width = opts.width.max(120) as f64;
    let height = opts.height.max(120) as f64;
    let plot_w = width - left - right;
    let plot_h = height - top - bottom;
    let entries = run.distribution.entries();
    let n = entries.len() as f64;
    let f_max = entries.first().map_or(1.0, |e| e.fraction);
    let slot = plot_w / n;
    let bar_w = slot * 0.8;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = opts.width,
        h = opts.height
    );
    let _ = writeln!(
        svg,
        "<style>.bar{{fill:#4878a8;}}text{{font-family:sans-serif;font-size:11px;fill:#222;}}.axis{{stroke:#222;stroke-width:1;}}</style>"
    );
    let _ = writeln!(
        svg,
        r##"<rect width="{w}" height="{h}" fill="#ffffff"/>"##,
        w = opts.width,
        h = opts.height
    );
    let _ = writeln!(
        svg,
        r#"<text x="{x}" y="18" text-anchor="middle">{title}</text>"#,
        x = width / 2.0,
        title = xml_escape(&format!("{} / {}", run.corpus_id, run.hypothesis))
    );
    // axes
    let _ = writeln!(
        svg,
        r#"<line class="axis" x1="{l}" y1="{t}" x2="{l}" y2="{b}"/>"#,
        l = left,
        t = top,
        b = top + plot_h
    );
    let _ = writeln!(
        svg,
        r#"<line class="axis" x1="{l}" y1="{b}" x2="{r}" y2="{b}"/>"#,
        l = left,
        b = top + plot_h,
        r = left + plot_w
    );
    let _ = writeln!(
        svg,
        r#"<text x="{x}" y="{y}" text-anchor="end">{v:.3}</text>"#,
        x = left - 6.0,
        y = top + 4.0,
        v = f_max
    );
    let _ = writeln!(
        svg,
        r#"<text x="{x}" y="{y}" text-anchor="end">0</text>"#,
        x = left - 6.0,
        y = top + plot_h + 4.0
    );
    for (i, entry) in entries.iter().enumerate() {
        let bar_h = entry.fraction / f_max * plot_h;
        let x = left + i as f64 * slot + slot * 0.1;
        let y = top + plot_h - bar_h;
        let _ = writeln!(
            svg,
            r#"<rect class="bar" x="{x:.2}" y="{y:.3}" width="{bar_w:.2}" height="{bar_h:.3}"/>"#
        );
        let _ = writeln!(
            svg,
            r#"<text x="{cx:.2}" y="{ly:.1}" text-anchor="middle">{sym}</text>"#,
            cx = x + bar_w / 2.0,
            ly = top + plot_h + 14.0,
            sym = xml_escape(&entry.symbol)
        );
    }
    svg.push_str("</svg>\n");
    svg
}
