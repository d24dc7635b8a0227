#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace corefscope {

// Subcommand bodies. Each returns the process exit status: 0 on success,
// 2 when some records were skipped with diagnostics, 1 on a fatal error.
// Diagnostics go to `err`; "-" as an output path means `out`.

struct IngestOptions {
  std::vector<std::filesystem::path> inputs;
  std::string format = "conll";  // conll | jsonl
  std::optional<std::filesystem::path> sidecar;
  bool require_images = false;
  /// Source label for CoNLL input; for JSONL input it replaces the stored one.
  std::optional<std::string> source_label;
  std::filesystem::path out = "-";
};

int cmd_ingest(const IngestOptions& opts, std::ostream& out, std::ostream& err);

struct ComputeOptions {
  std::filesystem::path corpus;
  std::filesystem::path out = "-";
  unsigned jobs = 1;
  std::optional<std::filesystem::path> pronoun_lexicon;
};

int cmd_compute(const ComputeOptions& opts, std::ostream& out, std::ostream& err);

struct CompareOptions {
  /// Metric-record files. "label=path" relabels every record of that file.
  std::vector<std::string> corpora;
  std::string reference = "human";
  std::string format = "md";  // md | csv | json
  std::filesystem::path out = "-";
};

int cmd_compare(const CompareOptions& opts, std::ostream& out, std::ostream& err);

struct CorrelateOptions {
  std::filesystem::path corpus;
  std::string metric_a = "char_ch";
  std::string metric_b = "mcc";
  /// Restrict to one source label.
  std::optional<std::string> source;
};

/// Prints "rho=<r> p=<p> n=<pairs> n_excluded=<k>".
int cmd_correlate(const CorrelateOptions& opts, std::ostream& out, std::ostream& err);

struct SynthOptions {
  std::string kind = "story";  // story | random | calibration | switch
  std::uint64_t seed = 1;
  std::size_t n_stories = 10;
  std::size_t n_sentences = 5;
  std::size_t n_characters = 2;
  std::string presence = "dense";  // dense | alternating | block | random
  std::string realization = "constant_N";  // constant_N | constant_P | alternating
  std::string images = "dense";
  double p = 0.5;
  double switch_rate = 0.5;
  double target_rho = -0.25;
  std::string source_label = "synthetic";
  std::filesystem::path out = "-";
};

/// Canonical JSONL stories. "story" uses seeds seed, seed + 1, ...
int cmd_synth(const SynthOptions& opts, std::ostream& out, std::ostream& err);

/// Plain-text config: one "key = value" per line, '#' starts a comment line,
/// blank lines ignored. Keys are long flag names without dashes. Throws
/// IoError when unreadable and ParseError on a line without '='.
std::map<std::string, std::string> load_config(const std::filesystem::path& path);

}  // namespace corefscope
