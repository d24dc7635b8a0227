#pragma once

#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "corefscope/data_model.hpp"
#include "corefscope/ingest.hpp"
#include "corefscope/labeling.hpp"
#include "corefscope/metrics_text.hpp"
#include "corefscope/stats.hpp"

namespace corefscope {

/// Every per-story number the tool reports.
struct MetricReport {
  std::string story_id;
  std::string source_label;
  Descriptives descriptives;
  StoryTextMetrics text;
  std::optional<double> mcc;
  std::optional<double> rec;
  std::size_t character_chains = 0;
};

/// Labels chains against the story's roster, then runs every metric.
MetricReport compute_metrics(const StoryBundle& bundle,
                             const PronounLexicon& lexicon = PronounLexicon::english());

/// Runs compute_metrics on `jobs` threads. Output is ordered by story_id
/// (then source_label, then input position) whatever the thread count.
std::vector<MetricReport> compute_corpus(std::span<const StoryBundle> bundles,
                                         const PronounLexicon& lexicon, unsigned jobs = 1);

/// Metric names in reporting order:
/// sentences, words, words_as_mentions, num_chains, character_chains,
/// chain_size, cci, char_tr, char_dr, char_ad, char_ch, char_re,
/// char_tr_count, mcc, rec.
const std::vector<std::string>& metric_names();

/// Throws InputError on an unknown name.
std::optional<double> metric_value(const MetricReport& report, std::string_view name);

/// {story_id, source_label, <metric>: number | null, ...}, sorted keys.
std::string to_jsonl(const MetricReport& report);
MetricReport parse_metric_jsonl(std::string_view line);
ReadResult<MetricReport> read_metric_reports(std::istream& in);
void write_metric_reports(std::span<const MetricReport> reports, std::ostream& out);

/// Pearson correlation of two metrics over the stories where both are defined.
stats::PairedCorrelation pairwise_metric_correlation(std::span<const MetricReport> reports,
                                                     std::string_view metric_a,
                                                     std::string_view metric_b);

struct MetricComparison {
  stats::Aggregate aggregate;
  /// Welch test of this source against the reference (t > 0 when this source
  /// is higher). Absent for the reference itself and for degenerate samples.
  std::optional<stats::TestResult> test;
};

struct CorrelationEntry {
  std::string source;
  std::string metric_a;
  std::string metric_b;
  /// Absent when fewer than three stories define both metrics or a column
  /// is constant.
  std::optional<stats::PairedCorrelation> result;
};

struct ComparisonReport {
  std::string reference;
  std::vector<std::string> sources;  // reference first, then sorted
  std::vector<std::string> metrics;
  std::map<std::string, std::map<std::string, MetricComparison>> per_source;
  std::vector<CorrelationEntry> correlations;
};

/// Default correlation pairs: (rec, words) and (char_ch, mcc).
const std::vector<std::pair<std::string, std::string>>& default_correlations();

/// Groups reports by source_label. Throws InputError when the reference
/// source has no stories.
ComparisonReport compare_corpora(
    std::span<const MetricReport> reports, std::string_view reference,
    const std::vector<std::pair<std::string, std::string>>& correlations = default_correlations());

/// Shortest decimal that reads back to the same double.
std::string format_number(double x);

/// Markdown: one aggregate table (a dagger marks means that differ from the
/// reference at p < 0.05) and one correlation table (** marks p < 0.05).
void render_markdown(const ComparisonReport& report, std::ostream& out);
/// Long format, one value per row: kind,source,metric,field,value.
void render_csv(const ComparisonReport& report, std::ostream& out);
void render_json(const ComparisonReport& report, std::ostream& out);

}  // namespace corefscope
