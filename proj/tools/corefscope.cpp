#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "corefscope/commands.hpp"
#include "corefscope/errors.hpp"

namespace {

// Finds --config before parsing so its values can become option defaults,
// leaving anything given on the command line to override them.
std::optional<std::string> config_path(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--config" && i + 1 < argc) return argv[i + 1];
    if (a.rfind("--config=", 0) == 0) return a.substr(9);
  }
  return std::nullopt;
}

// "key" applies to every subcommand with that option, "sub.key" to one.
bool apply_config(const std::map<std::string, std::string>& config,
                  const std::vector<CLI::App*>& subs) {
  bool ok = true;
  for (const auto& [key, value] : config) {
    std::string scope, name = key;
    if (auto dot = key.find('.'); dot != std::string::npos) {
      scope = key.substr(0, dot);
      name = key.substr(dot + 1);
    }
    bool used = false;
    for (auto* sub : subs) {
      if (!scope.empty() && sub->get_name() != scope) continue;
      for (auto* opt : sub->get_options()) {
        if (opt->get_lnames().empty() || opt->get_lnames().front() != name) continue;
        opt->default_val(value);
        used = true;
      }
    }
    if (!used) {
      std::cerr << "error: config key '" << key << "' matches no option\n";
      ok = false;
    }
  }
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coreference-based character continuity metrics for story corpora"};
  app.require_subcommand(1);
  std::string config_file;
  app.add_option("--config", config_file, "key = value file; flags override it");

  corefscope::IngestOptions ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "Convert CoNLL or JSONL stories to canonical JSONL");
  ingest_cmd->add_option("inputs", ingest.inputs, "Input files")->required();
  ingest_cmd->add_option("--format", ingest.format, "conll or jsonl")->capture_default_str();
  ingest_cmd->add_option("--sidecar", ingest.sidecar, "Roster and image annotations (JSONL)");
  ingest_cmd->add_flag("--require-images", ingest.require_images,
                       "Fail or skip stories without image annotations");
  ingest_cmd->add_option("--source", ingest.source_label, "Source label for the stories");
  ingest_cmd->add_option("--out", ingest.out, "Output file, - for stdout")->capture_default_str();

  corefscope::ComputeOptions compute;
  auto* compute_cmd = app.add_subcommand("compute", "Per-story metric records");
  compute_cmd->add_option("corpus", compute.corpus, "Canonical JSONL corpus")->required();
  compute_cmd->add_option("--out", compute.out, "Output file, - for stdout")->capture_default_str();
  compute_cmd->add_option("--jobs", compute.jobs, "Worker threads")
      ->check(CLI::Range(1u, 1024u))
      ->capture_default_str();
  compute_cmd->add_option("--pronoun-lexicon", compute.pronoun_lexicon,
                          "Pronoun list, one per line");

  corefscope::CompareOptions compare;
  auto* compare_cmd = app.add_subcommand("compare", "Compare sources against a reference");
  compare_cmd->add_option("corpora", compare.corpora, "Metric record files (path or label=path)")
      ->required();
  compare_cmd->add_option("--reference", compare.reference, "Reference source label")
      ->capture_default_str();
  compare_cmd->add_option("--format", compare.format, "md, csv or json")->capture_default_str();
  compare_cmd->add_option("--out", compare.out, "Output file, - for stdout")->capture_default_str();

  corefscope::CorrelateOptions correlate;
  auto* correlate_cmd = app.add_subcommand("correlate", "Pearson correlation of two metrics");
  correlate_cmd->add_option("corpus", correlate.corpus, "Metric record file")->required();
  correlate_cmd->add_option("--metric-a", correlate.metric_a)->capture_default_str();
  correlate_cmd->add_option("--metric-b", correlate.metric_b)->capture_default_str();
  correlate_cmd->add_option("--source", correlate.source, "Only stories from this source");

  corefscope::SynthOptions synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate synthetic stories");
  synth_cmd->add_option("--kind", synth.kind, "story, random, calibration or switch")
      ->capture_default_str();
  synth_cmd->add_option("--seed", synth.seed)->capture_default_str();
  synth_cmd->add_option("--n-stories", synth.n_stories)->capture_default_str();
  synth_cmd->add_option("--n-sentences", synth.n_sentences)->capture_default_str();
  synth_cmd->add_option("--n-characters", synth.n_characters)->capture_default_str();
  synth_cmd->add_option("--presence", synth.presence, "dense, alternating, block or random")
      ->capture_default_str();
  synth_cmd->add_option("--realization", synth.realization,
                        "constant_N, constant_P or alternating")
      ->capture_default_str();
  synth_cmd->add_option("--images", synth.images, "Image presence pattern")->capture_default_str();
  synth_cmd->add_option("--p", synth.p, "Presence probability for random patterns")
      ->capture_default_str();
  synth_cmd->add_option("--switch-rate", synth.switch_rate)->capture_default_str();
  synth_cmd->add_option("--target-rho", synth.target_rho)->capture_default_str();
  synth_cmd->add_option("--source", synth.source_label)->capture_default_str();
  synth_cmd->add_option("--out", synth.out, "Output file, - for stdout")->capture_default_str();

  if (auto path = config_path(argc, argv)) {
    try {
      auto config = corefscope::load_config(*path);
      if (!apply_config(config, {ingest_cmd, compute_cmd, compare_cmd, correlate_cmd, synth_cmd}))
        return 1;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 1;
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (*ingest_cmd) return corefscope::cmd_ingest(ingest, std::cout, std::cerr);
  if (*compute_cmd) return corefscope::cmd_compute(compute, std::cout, std::cerr);
  if (*compare_cmd) return corefscope::cmd_compare(compare, std::cout, std::cerr);
  if (*correlate_cmd) return corefscope::cmd_correlate(correlate, std::cout, std::cerr);
  return corefscope::cmd_synth(synth, std::cout, std::cerr);
}
