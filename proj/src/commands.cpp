#include "corefscope/commands.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "corefscope/errors.hpp"
#include "corefscope/ingest.hpp"
#include "corefscope/labeling.hpp"
#include "corefscope/report.hpp"
#include "corefscope/synth.hpp"

namespace corefscope {

namespace fs = std::filesystem;

namespace {

void report_diagnostics(std::ostream& err, const std::string& file,
                        const std::vector<Diagnostic>& diags) {
  for (const auto& d : diags) {
    err << file << ':';
    if (d.line) err << d.line << ':';
    err << ' ' << d.message << '\n';
  }
}

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  return in;
}

// Builds the whole output in memory so a fatal error leaves no partial file.
void emit(const fs::path& path, const std::string& text, std::ostream& out) {
  if (path == "-") {
    out << text;
    out.flush();
    if (!out) throw IoError("failed to write standard output");
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot write " + path.string());
  file << text;
  file.close();
  if (!file) throw IoError("failed to write " + path.string());
}

template <typename Body>
int guarded(std::ostream& err, Body body) {
  try {
    return body();
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
  }
  return 1;
}

}  // namespace

int cmd_ingest(const IngestOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (opts.format != "conll" && opts.format != "jsonl")
      throw InputError("unknown input format '" + opts.format + "'");

    bool skipped = false;
    std::vector<StoryBundle> stories;
    for (const auto& path : opts.inputs) {
      auto in = open_input(path);
      ReadResult<StoryBundle> r;
      if (opts.format == "conll") {
        r = read_conll(in, opts.source_label.value_or("unlabeled"));
      } else {
        r = read_jsonl(in);
        if (opts.source_label)
          for (auto& b : r.records) b.source_label = *opts.source_label;
      }
      if (in.bad()) throw IoError("error while reading " + path.string());
      report_diagnostics(err, path.string(), r.diagnostics);
      skipped |= !r.diagnostics.empty();
      for (auto& b : r.records) stories.push_back(std::move(b));
    }

    if (opts.sidecar) {
      auto in = open_input(*opts.sidecar);
      auto r = read_sidecar(in);
      report_diagnostics(err, opts.sidecar->string(), r.diagnostics);
      skipped |= !r.diagnostics.empty();
      std::map<std::string, SidecarRecord> by_id;
      for (auto& rec : r.records) {
        std::string id = rec.story_id;
        if (!by_id.emplace(id, std::move(rec)).second) {
          err << opts.sidecar->string() << ": duplicate annotations for story '" << id
              << "', keeping the first\n";
          skipped = true;
        }
      }
      for (auto& b : stories) {
        auto it = by_id.find(b.story.story_id);
        if (it == by_id.end()) continue;
        auto roster = it->second.roster.empty() ? b.story.roster : it->second.roster;
        b = attach_image_annotations(std::move(b), it->second.images, roster);
        if (auto u = b.provenance.find("unresolved_characters"); u != b.provenance.end())
          err << opts.sidecar->string() << ": story '" << b.story.story_id
              << "': image labels outside the roster: " << u->second << '\n';
      }
    }

    if (opts.require_images) {
      std::vector<StoryBundle> kept;
      for (auto& b : stories) {
        if (b.story.images) {
          kept.push_back(std::move(b));
          continue;
        }
        if (!opts.sidecar)
          throw InputError("story '" + b.story.story_id +
                           "' has no image annotations and no --sidecar was given");
        err << "story '" << b.story.story_id << "': no image annotations, skipped\n";
        skipped = true;
      }
      stories = std::move(kept);
    }

    std::ostringstream buf;
    write_jsonl(stories, buf);
    emit(opts.out, buf.str(), out);
    return skipped ? 2 : 0;
  });
}

int cmd_compute(const ComputeOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    std::optional<PronounLexicon> custom;
    if (opts.pronoun_lexicon) custom = PronounLexicon::from_file(*opts.pronoun_lexicon);
    const PronounLexicon& lexicon = custom ? *custom : PronounLexicon::english();

    auto in = open_input(opts.corpus);
    auto r = read_jsonl(in);
    if (in.bad()) throw IoError("error while reading " + opts.corpus.string());
    report_diagnostics(err, opts.corpus.string(), r.diagnostics);

    auto reports = compute_corpus(r.records, lexicon, opts.jobs);
    std::ostringstream buf;
    write_metric_reports(reports, buf);
    emit(opts.out, buf.str(), out);
    return r.diagnostics.empty() ? 0 : 2;
  });
}

int cmd_compare(const CompareOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (opts.format != "md" && opts.format != "csv" && opts.format != "json")
      throw InputError("unknown report format '" + opts.format + "'");

    bool skipped = false;
    std::vector<MetricReport> reports;
    for (const auto& spec : opts.corpora) {
      std::optional<std::string> label;
      fs::path path = spec;
      if (auto eq = spec.find('='); eq != std::string::npos && !fs::exists(spec)) {
        label = spec.substr(0, eq);
        path = spec.substr(eq + 1);
        if (label->empty()) throw InputError("empty source label in '" + spec + "'");
      }
      auto in = open_input(path);
      auto r = read_metric_reports(in);
      report_diagnostics(err, path.string(), r.diagnostics);
      skipped |= !r.diagnostics.empty();
      for (auto& m : r.records) {
        if (label) m.source_label = *label;
        reports.push_back(std::move(m));
      }
    }

    std::set<std::string> sources;
    for (const auto& m : reports) sources.insert(m.source_label);
    if (!sources.count(opts.reference))
      throw InputError("reference source '" + opts.reference + "' not found in the input");
    if (sources.size() < 2)
      throw InputError("need at least two sources to compare, found only '" + opts.reference +
                       "'");

    ComparisonReport cmp = compare_corpora(reports, opts.reference);
    std::ostringstream buf;
    if (opts.format == "md")
      render_markdown(cmp, buf);
    else if (opts.format == "csv")
      render_csv(cmp, buf);
    else
      render_json(cmp, buf);
    emit(opts.out, buf.str(), out);
    return skipped ? 2 : 0;
  });
}

int cmd_correlate(const CorrelateOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    auto in = open_input(opts.corpus);
    auto r = read_metric_reports(in);
    report_diagnostics(err, opts.corpus.string(), r.diagnostics);
    std::vector<MetricReport> reports;
    for (auto& m : r.records)
      if (!opts.source || m.source_label == *opts.source) reports.push_back(std::move(m));

    auto c = pairwise_metric_correlation(reports, opts.metric_a, opts.metric_b);
    out << "rho=" << format_number(c.result.statistic) << " p=" << format_number(c.result.p_value)
        << " n=" << c.result.n << " n_excluded=" << c.n_excluded << '\n';
    return r.diagnostics.empty() ? 0 : 2;
  });
}

namespace {

synth::PresencePattern presence_from(const std::string& name, double p) {
  if (name == "dense") return {synth::PresenceKind::Dense, p};
  if (name == "alternating") return {synth::PresenceKind::Alternating, p};
  if (name == "block") return {synth::PresenceKind::Block, p};
  if (name == "random") return {synth::PresenceKind::Random, p};
  throw InputError("unknown presence pattern '" + name + "'");
}

synth::RealizationPattern realization_from(const std::string& name) {
  if (name == "constant_N") return synth::RealizationPattern::ConstantN;
  if (name == "constant_P") return synth::RealizationPattern::ConstantP;
  if (name == "alternating") return synth::RealizationPattern::Alternating;
  throw InputError("unknown realization pattern '" + name + "'");
}

}  // namespace

int cmd_synth(const SynthOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    std::vector<StoryBundle> stories;
    if (opts.kind == "story") {
      synth::SynthParams params;
      params.n_sentences = opts.n_sentences;
      params.n_characters = opts.n_characters;
      params.presence = presence_from(opts.presence, opts.p);
      params.realization = realization_from(opts.realization);
      params.image_pattern = presence_from(opts.images, opts.p);
      params.source_label = opts.source_label;
      for (std::size_t i = 0; i < opts.n_stories; ++i) {
        params.seed = opts.seed + i;
        stories.push_back(synth::generate(params).bundle);
      }
    } else if (opts.kind == "random") {
      synth::SplitMix64 rng(opts.seed);
      for (std::size_t i = 0; i < opts.n_stories; ++i) {
        auto b = synth::random_story(rng);
        b.source_label = opts.source_label;
        stories.push_back(std::move(b));
      }
    } else if (opts.kind == "calibration") {
      synth::CalibrationParams params;
      params.seed = opts.seed;
      params.n_stories = opts.n_stories;
      params.n_sentences = opts.n_sentences;
      params.target_rho = opts.target_rho;
      params.source_label = opts.source_label;
      stories = synth::correlated_corpus(params);
    } else if (opts.kind == "switch") {
      synth::SwitchRateParams params;
      params.seed = opts.seed;
      params.n_stories = opts.n_stories;
      params.n_sentences = opts.n_sentences;
      params.switch_rate = opts.switch_rate;
      params.source_label = opts.source_label;
      stories = synth::switch_rate_corpus(params);
    } else {
      throw InputError("unknown synth kind '" + opts.kind + "'");
    }
    std::ostringstream buf;
    write_jsonl(stories, buf);
    emit(opts.out, buf.str(), out);
    return 0;
  });
}

std::map<std::string, std::string> load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path.string());
  auto trim = [](std::string s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  std::map<std::string, std::string> values;
  std::size_t line_no = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    std::string line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected key = value", line_no);
    std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ParseError("empty key", line_no);
    values[key] = trim(line.substr(eq + 1));
  }
  return values;
}

}  // namespace corefscope
