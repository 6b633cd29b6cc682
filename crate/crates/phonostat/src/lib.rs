//! Rank-frequency statistics for phoneme inventory hypotheses over Spanish
//! text: normalize a corpus, transduce it to working phonemic notation with an
//! ordered rewrite ruleset, reshape the symbol inventory under a hypothesis,
//! and measure how smooth the resulting rank-frequency distribution is.

pub mod corpus;
pub mod error;
pub mod hypothesis;
pub mod metrics;
pub mod report;
pub mod transducer;

pub use corpus::{
    aggregate, load_manifest, normalize, CorpusDocument, DiacriticMode, NormalizedText,
};
pub use error::{Error, Result};
pub use hypothesis::{
    group_diphthongs, merge_symbols, split_j, split_w, DiphthongScope, Hypothesis,
};
pub use metrics::{
    rank_distribution, redundancy, shannon_information, smoothness, zipf_baseline, MetricsReport,
    RankDistribution, RankEntry, SdMode, Smoothness,
};
pub use report::{
    compare, detect_gaps, render, run_analysis, AnalysisOptions, AnalysisRun, ComparisonRow,
    ComparisonTable, Gap, OutputFormat, RenderTarget, SvgOptions,
};
pub use transducer::{
    apply_rules, count_symbols, parse_rule_file, PhonemeString, RewriteRule, RuleSet,
};
