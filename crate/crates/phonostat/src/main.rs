use std::collections::BTreeSet;
use std::fs;
use std::io::{IsTerminal, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use phonostat::{
    aggregate, apply_rules, compare, detect_gaps, load_manifest, normalize, parse_rule_file,
    render, run_analysis, zipf_baseline, AnalysisOptions, AnalysisRun, CorpusDocument,
    DiacriticMode, Error, Hypothesis, MetricsReport, OutputFormat, RenderTarget, Result,
    RewriteRule, RuleSet, SvgOptions,
};

#[derive(Parser)]
#[command(
    name = "phonostat",
    version,
    about = "Rank-frequency statistics for phoneme inventory hypotheses over Spanish text"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Transduce text to working phonemic notation
    Phonemize(PhonemizeArgs),
    /// Run the full pipeline, one analysis per hypothesis
    Analyze(AnalyzeArgs),
    /// Summarize several hypotheses side by side in one table
    Compare(AnalyzeArgs),
    /// Emit a synthetic F(n) proportional to 1/n baseline distribution
    Zipf(ZipfArgs),
    /// Parse a ruleset file and lint it for unreachable rules
    RulesCheck(RulesCheckArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Input text files (UTF-8); concatenated when several are given
    #[arg(value_name = "FILE")]
    inputs: Vec<PathBuf>,
    /// File listing one text path per line (# comments allowed)
    #[arg(long, value_name = "PATH")]
    manifest: Option<PathBuf>,
}

impl InputArgs {
    fn load(&self) -> Result<CorpusDocument> {
        let docs = match (self.inputs.as_slice(), &self.manifest) {
            ([], Some(path)) => load_manifest(path)?,
            (files, None) if !files.is_empty() => files
                .iter()
                .map(|p| CorpusDocument::from_file(p))
                .collect::<Result<Vec<_>>>()?,
            _ => {
                return Err(Error::InvalidParameter(
                    "provide either input files or --manifest, not both or neither".into(),
                ))
            }
        };
        aggregate(&docs)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Toggle {
    On,
    Off,
}

#[derive(Args)]
struct RuleArgs {
    /// Ruleset file: one "lhs -> rhs" per line, _ marks a space
    #[arg(long, value_name = "PATH", conflicts_with = "builtin")]
    rules: Option<PathBuf>,
    /// Builtin ruleset: reference or reference-diacritic
    #[arg(long, value_name = "NAME")]
    builtin: Option<String>,
    /// Whether the ruleset expects í-preserving normalization
    #[arg(long, value_name = "on|off")]
    diacritics: Option<Toggle>,
}

impl RuleArgs {
    /// The single ruleset used by phonemize; defaults follow --diacritics.
    fn resolve_single(&self) -> Result<RuleSet> {
        if let Some(path) = &self.rules {
            let src = fs::read_to_string(path).map_err(|source| Error::Io {
                path: path.display().to_string(),
                source,
            })?;
            let mode = match self.diacritics {
                Some(Toggle::On) => DiacriticMode::PreserveIAcute,
                _ => DiacriticMode::StripAll,
            };
            return Ok(parse_rule_file(&src)?
                .with_name(path.display().to_string())
                .with_mode(mode));
        }
        if let Some(name) = &self.builtin {
            let set = RuleSet::builtin(name).ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "unknown builtin ruleset '{name}' (try reference or reference-diacritic)"
                ))
            })?;
            self.check_builtin_mode(&set)?;
            return Ok(set);
        }
        Ok(match self.diacritics {
            Some(Toggle::On) => RuleSet::reference_diacritic(),
            _ => RuleSet::reference(),
        })
    }

    fn check_builtin_mode(&self, set: &RuleSet) -> Result<()> {
        let Some(flag) = self.diacritics else {
            return Ok(());
        };
        let want = match flag {
            Toggle::On => DiacriticMode::PreserveIAcute,
            Toggle::Off => DiacriticMode::StripAll,
        };
        if set.mode() != want {
            return Err(Error::InvalidParameter(format!(
                "--diacritics {} contradicts builtin '{}', which uses {} normalization",
                if flag == Toggle::On { "on" } else { "off" },
                set.name(),
                set.mode().as_str()
            )));
        }
        Ok(())
    }

    /// Analysis rulesets: a custom set replaces the slot matching its mode,
    /// the other slot keeps its builtin.
    fn resolve_pair(&self) -> Result<(RuleSet, RuleSet)> {
        let mut reference = RuleSet::reference();
        let mut diacritic = RuleSet::reference_diacritic();
        if self.rules.is_some() || self.builtin.is_some() {
            let set = self.resolve_single()?;
            match set.mode() {
                DiacriticMode::StripAll => reference = set,
                DiacriticMode::PreserveIAcute => diacritic = set,
            }
        }
        Ok((reference, diacritic))
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Output format
    #[arg(long, value_name = "csv|json|svg", default_value = "csv")]
    format: String,
    /// Output path (stdout when omitted)
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// SVG canvas width in pixels
    #[arg(long, default_value_t = 800, value_name = "PX")]
    svg_width: u32,
    /// SVG canvas height in pixels
    #[arg(long, default_value_t = 500, value_name = "PX")]
    svg_height: u32,
}

impl OutputArgs {
    fn format(&self) -> Result<OutputFormat> {
        self.format.parse()
    }

    fn svg(&self) -> SvgOptions {
        SvgOptions {
            width: self.svg_width,
            height: self.svg_height,
        }
    }
}

#[derive(Args)]
struct PhonemizeArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    rules: RuleArgs,
    /// Output path (stdout when omitted)
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    rules: RuleArgs,
    /// Hypotheses to evaluate, comma separated: identity, raw-letters,
    /// w-split, wj-split, wj-split-diacritic, diphthongs-all, diphthongs-iu,
    /// merge
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "identity",
        value_name = "NAME[,NAME...]"
    )]
    hypothesis: Vec<String>,
    /// Symbols for the merge hypothesis, comma separated
    #[arg(long, value_delimiter = ',', value_name = "SYMS")]
    merge: Option<Vec<String>>,
    /// Standard-deviation divisor for smoothness
    #[arg(long, value_name = "sample|population", default_value = "sample")]
    sd: String,
    /// Minimum F(n)/F(n+1) ratio reported as a gap
    #[arg(long, value_name = "FLOAT", default_value_t = 1.3)]
    gap_threshold: f64,
    #[command(flatten)]
    output: OutputArgs,
}

impl AnalyzeArgs {
    fn hypotheses(&self) -> Result<Vec<Hypothesis>> {
        if self.merge.is_some() && !self.hypothesis.iter().any(|h| h == "merge") {
            return Err(Error::InvalidParameter(
                "--merge given but the hypothesis list has no 'merge'".into(),
            ));
        }
        self.hypothesis
            .iter()
            .map(|name| {
                if name == "merge" {
                    let group = self.merge.clone().ok_or_else(|| {
                        Error::InvalidParameter(
                            "hypothesis 'merge' needs --merge with at least 2 symbols".into(),
                        )
                    })?;
                    Hypothesis::merge(group)
                } else {
                    Hypothesis::from_name(name)
                }
            })
            .collect()
    }

    fn options(&self) -> Result<AnalysisOptions> {
        let (reference, diacritic) = self.rules.resolve_pair()?;
        Ok(AnalysisOptions {
            sd_mode: self.sd.parse()?,
            gap_threshold: self.gap_threshold,
            reference,
            diacritic,
        })
    }

    fn runs(&self) -> Result<Vec<AnalysisRun>> {
        let doc = self.input.load()?;
        let opts = self.options()?;
        let hypotheses = self.hypotheses()?;
        let mut runs = Vec::with_capacity(hypotheses.len());
        let mut unknown: BTreeSet<char> = BTreeSet::new();
        for hypothesis in &hypotheses {
            let (run, warnings) = run_analysis(&doc, hypothesis, &opts)?;
            unknown.extend(warnings);
            runs.push(run);
        }
        if !unknown.is_empty() {
            let listed: String = unknown
                .iter()
                .map(|c| format!("'{c}'"))
                .collect::<Vec<_>>()
                .join(", ");
            warn(&format!(
                "ruleset passed {} unrecognized symbol(s) through unchanged: {listed}",
                unknown.len()
            ));
        }
        Ok(runs)
    }
}

#[derive(Args)]
struct ZipfArgs {
    /// Number of symbols in the baseline
    #[arg(long, default_value_t = 22, value_name = "INT")]
    n: usize,
    /// Standard-deviation divisor for smoothness
    #[arg(long, value_name = "sample|population", default_value = "sample")]
    sd: String,
    /// Minimum F(n)/F(n+1) ratio reported as a gap
    #[arg(long, value_name = "FLOAT", default_value_t = 1.3)]
    gap_threshold: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct RulesCheckArgs {
    /// Ruleset file to check
    #[arg(value_name = "PATH")]
    file: PathBuf,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 3,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Phonemize(args) => cmd_phonemize(args),
        Command::Analyze(args) => cmd_analyze(args),
        Command::Compare(args) => cmd_compare(args),
        Command::Zipf(args) => cmd_zipf(args),
        Command::RulesCheck(args) => cmd_rules_check(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            fail(&err);
            ExitCode::from(exit_code(&err))
        }
    }
}

fn cmd_phonemize(args: &PhonemizeArgs) -> Result<()> {
    let doc = args.input.load()?;
    let ruleset = args.rules.resolve_single()?;
    let normalized = normalize(&doc, ruleset.mode())?;
    let phonemes = apply_rules(&normalized, &ruleset)?;
    if !phonemes.unknown_symbols().is_empty() {
        let listed: String = phonemes
            .unknown_symbols()
            .iter()
            .map(|c| format!("'{c}'"))
            .collect::<Vec<_>>()
            .join(", ");
        warn(&format!(
            "ruleset passed unrecognized symbol(s) through unchanged: {listed}"
        ));
    }
    let mut text = phonemes.text().trim().to_string();
    text.push('\n');
    write_output(args.out.as_deref(), text.as_bytes())
}

fn cmd_analyze(args: &AnalyzeArgs) -> Result<()> {
    let runs = args.runs()?;
    let format = args.output.format()?;
    let svg = args.output.svg();
    match format {
        OutputFormat::Json => {
            let mut bytes = serde_json::to_vec_pretty(&runs)
                .map_err(|e| Error::InvalidParameter(format!("json serialization failed: {e}")))?;
            bytes.push(b'\n');
            write_output(args.output.out.as_deref(), &bytes)
        }
        OutputFormat::Csv => {
            let mut out = Vec::new();
            for (i, run) in runs.iter().enumerate() {
                if i > 0 {
                    out.push(b'\n');
                }
                let gaps: Vec<String> = run.gaps.iter().map(|g| g.position.to_string()).collect();
                let header = format!(
                    "# corpus: {}\n# hypothesis: {}\n# n={} smoothness={} redundancy_pct={:.2} entropy_bits={:.2} gaps=[{}]\n",
                    run.corpus_id,
                    run.hypothesis,
                    run.metrics.n,
                    run.metrics.smoothness,
                    run.metrics.redundancy * 100.0,
                    run.metrics.entropy_bits,
                    gaps.join(",")
                );
                out.extend_from_slice(header.as_bytes());
                out.extend_from_slice(&render(RenderTarget::Run(run), OutputFormat::Csv, svg)?);
            }
            write_output(args.output.out.as_deref(), &out)
        }
        OutputFormat::Svg => {
            if runs.len() == 1 {
                let bytes = render(RenderTarget::Run(&runs[0]), OutputFormat::Svg, svg)?;
                return write_output(args.output.out.as_deref(), &bytes);
            }
            let base = args.output.out.as_deref().ok_or_else(|| {
                Error::InvalidParameter(
                    "svg with several hypotheses needs --out; one file is written per run".into(),
                )
            })?;
            for run in &runs {
                let bytes = render(RenderTarget::Run(run), OutputFormat::Svg, svg)?;
                write_output(Some(&suffixed_svg_path(base, &run.hypothesis)), &bytes)?;
            }
            Ok(())
        }
    }
}

fn cmd_compare(args: &AnalyzeArgs) -> Result<()> {
    let runs = args.runs()?;
    let table = compare(&runs);
    let bytes = render(
        RenderTarget::Table(&table),
        args.output.format()?,
        args.output.svg(),
    )?;
    write_output(args.output.out.as_deref(), &bytes)
}

fn cmd_zipf(args: &ZipfArgs) -> Result<()> {
    if args.gap_threshold.is_nan() || args.gap_threshold <= 1.0 {
        return Err(Error::InvalidParameter(format!(
            "gap threshold must be > 1, got {}",
            args.gap_threshold
        )));
    }
    let distribution = zipf_baseline(args.n)?;
    let metrics = MetricsReport::compute(&distribution, args.sd.parse()?)?;
    let gaps = detect_gaps(&distribution, args.gap_threshold);
    let run = AnalysisRun {
        corpus_id: format!("zipf-{}", args.n),
        hypothesis: "zipf-baseline".into(),
        distribution,
        metrics,
        gaps,
    };
    let bytes = render(
        RenderTarget::Run(&run),
        args.output.format()?,
        args.output.svg(),
    )?;
    write_output(args.output.out.as_deref(), &bytes)
}

fn cmd_rules_check(args: &RulesCheckArgs) -> Result<()> {
    let src = fs::read_to_string(&args.file).map_err(|source| Error::Io {
        path: args.file.display().to_string(),
        source,
    })?;
    let set = parse_rule_file(&src)?;
    for warning in lint_rules(set.rules()) {
        warn(&warning);
    }
    let mut out = std::io::stdout().lock();
    writeln!(out, "ok: {} rules", set.rules().len()).map_err(|source| Error::Io {
        path: "<stdout>".into(),
        source,
    })?;
    Ok(())
}

/// Heuristic reachability lints: a later rule whose pattern embeds an earlier
/// rule's pattern can only fire if some intermediate replacement recreates the
/// rewritten text.
fn lint_rules(rules: &[RewriteRule]) -> Vec<String> {
    let mut warnings = Vec::new();
    for (j, later) in rules.iter().enumerate() {
        for earlier in &rules[..j] {
            if earlier.lhs == later.lhs {
                warnings.push(format!(
                    "rule {} '{}' repeats the left-hand side of rule {}",
                    later.index, later, earlier.index
                ));
            } else if later.pattern().contains(&earlier.pattern()) {
                warnings.push(format!(
                    "rule {} '{}' may never fire: rule {} '{}' already rewrites '{}'",
                    later.index, later, earlier.index, earlier, earlier.lhs
                ));
            }
        }
    }
    warnings
}

fn suffixed_svg_path(base: &Path, hypothesis: &str) -> PathBuf {
    let sanitized: String = hypothesis
        .chars()
        .map(|c| if c.is_alphanumeric() { c } else { '-' })
        .collect();
    let sanitized = sanitized.trim_matches('-');
    let stem = base.file_stem().and_then(|s| s.to_str()).unwrap_or("plot");
    base.with_file_name(format!("{stem}.{sanitized}.svg"))
}

fn write_output(out: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(path) => fs::write(path, bytes).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes).map_err(|source| Error::Io {
                path: "<stdout>".into(),
                source,
            })
        }
    }
}

fn use_color() -> bool {
    std::env::var_os("PHONOSTAT_NO_COLOR").is_none() && std::io::stderr().is_terminal()
}

fn warn(msg: &str) {
    if use_color() {
        eprintln!("\x1b[33mwarning:\x1b[0m {msg}");
    } else {
        eprintln!("warning: {msg}");
    }
}

fn fail(err: &Error) {
    if use_color() {
        eprintln!("\x1b[31merror:\x1b[0m {err}");
    } else {
        eprintln!("error: {err}");
    }
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Io { .. } => 2,
        Error::EmptyCorpus(_) => 4,
        _ => 3,
    }
}
