#include "corefscope/report.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <set>
#include <thread>

#include <json.hpp>

#include "corefscope/errors.hpp"
#include "corefscope/metrics_multimodal.hpp"
#include "corefscope/metrics_rec.hpp"

namespace corefscope {

using nlohmann::json;

MetricReport compute_metrics(const StoryBundle& bundle, const PronounLexicon& lexicon) {
  const Story& story = bundle.story;
  MetricReport r;
  r.story_id = story.story_id;
  r.source_label = bundle.source_label;
  r.descriptives = story_descriptives(story);
  CharacterChainSet labels = match_character_chains(story, story.roster);
  const auto character_chains = labels.character_chains();
  r.character_chains = character_chains.size();
  r.text = text_metrics(story, sentence_chain_index(story, character_chains));
  r.mcc = mcc(story, labels, story.images, story.roster).mcc;
  r.rec = rec_story(story, labels, story.roster, lexicon).story_rec;
  return r;
}

std::vector<MetricReport> compute_corpus(std::span<const StoryBundle> bundles,
                                         const PronounLexicon& lexicon, unsigned jobs) {
  std::vector<MetricReport> out(bundles.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < bundles.size(); i = next++) {
      try {
        out[i] = compute_metrics(bundles[i], lexicon);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(bundles.size())));
  if (jobs <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::stable_sort(out.begin(), out.end(), [](const MetricReport& a, const MetricReport& b) {
    return std::tie(a.story_id, a.source_label) < std::tie(b.story_id, b.source_label);
  });
  return out;
}

const std::vector<std::string>& metric_names() {
  static const std::vector<std::string> names = {
      "sentences", "words",   "words_as_mentions", "num_chains", "character_chains",
      "chain_size", "cci",    "char_tr",           "char_dr",    "char_ad",
      "char_ch",   "char_re", "char_tr_count",     "mcc",        "rec"};
  return names;
}

namespace {

bool is_count_metric(std::string_view name) {
  return name == "sentences" || name == "words" || name == "words_as_mentions" ||
         name == "num_chains" || name == "character_chains";
}

}  // namespace

std::optional<double> metric_value(const MetricReport& r, std::string_view name) {
  auto count = [](std::size_t v) { return std::optional<double>(static_cast<double>(v)); };
  if (name == "sentences") return count(r.descriptives.sentences);
  if (name == "words") return count(r.descriptives.words);
  if (name == "words_as_mentions") return count(r.descriptives.words_as_mentions);
  if (name == "num_chains") return count(r.text.num_chains);
  if (name == "character_chains") return count(r.character_chains);
  if (name == "chain_size") return r.text.mean_chain_size;
  if (name == "cci") return r.text.cci;
  if (name == "char_tr") return r.text.char_tr;
  if (name == "char_dr") return r.text.char_dr;
  if (name == "char_ad") return r.text.char_ad;
  if (name == "char_ch") return r.text.char_ch;
  if (name == "char_re") return r.text.char_re;
  if (name == "char_tr_count") return r.text.char_tr_count;
  if (name == "mcc") return r.mcc;
  if (name == "rec") return r.rec;
  throw InputError("unknown metric '" + std::string(name) + "'");
}

namespace {

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

std::string to_jsonl(const MetricReport& r) {
  json doc = json::object();
  doc["story_id"] = r.story_id;
  doc["source_label"] = r.source_label;
  for (const auto& name : metric_names()) {
    auto v = metric_value(r, name);
    if (is_count_metric(name))
      doc[name] = static_cast<std::size_t>(*v);
    else
      doc[name] = optional_number(v);
  }
  return doc.dump(-1, ' ', false, json::error_handler_t::replace);
}

MetricReport parse_metric_jsonl(std::string_view line) {
  json doc;
  try {
    doc = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("expected a JSON object");
  auto field = [&](const std::string& key) -> const json& {
    auto it = doc.find(key);
    if (it == doc.end()) throw ParseError("field '" + key + "': missing");
    return *it;
  };
  auto text = [&](const std::string& key) {
    const json& v = field(key);
    if (!v.is_string()) throw ParseError("field '" + key + "': expected a string");
    return v.get<std::string>();
  };
  auto count = [&](const std::string& key) {
    const json& v = field(key);
    if (!v.is_number_unsigned()) throw ParseError("field '" + key + "': expected a count");
    return v.get<std::size_t>();
  };
  auto number = [&](const std::string& key) -> std::optional<double> {
    const json& v = field(key);
    if (v.is_null()) return std::nullopt;
    if (!v.is_number()) throw ParseError("field '" + key + "': expected a number or null");
    return v.get<double>();
  };

  MetricReport r;
  r.story_id = text("story_id");
  r.source_label = text("source_label");
  r.descriptives = {count("sentences"), count("words"), count("words_as_mentions")};
  r.text.num_chains = count("num_chains");
  r.character_chains = count("character_chains");
  r.text.mean_chain_size = number("chain_size");
  r.text.cci = number("cci");
  r.text.char_tr = number("char_tr");
  r.text.char_dr = number("char_dr");
  r.text.char_ad = number("char_ad");
  r.text.char_ch = number("char_ch");
  r.text.char_re = number("char_re");
  r.text.char_tr_count = number("char_tr_count");
  r.mcc = number("mcc");
  r.rec = number("rec");
  return r;
}

ReadResult<MetricReport> read_metric_reports(std::istream& in) {
  ReadResult<MetricReport> result;
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      result.records.push_back(parse_metric_jsonl(line));
    } catch (const ParseError& e) {
      result.diagnostics.push_back({line_no, e.message()});
    }
  }
  return result;
}

void write_metric_reports(std::span<const MetricReport> reports, std::ostream& out) {
  for (const auto& r : reports) out << to_jsonl(r) << '\n';
  if (!out) throw IoError("failed to write metric records");
}

stats::PairedCorrelation pairwise_metric_correlation(std::span<const MetricReport> reports,
                                                     std::string_view metric_a,
                                                     std::string_view metric_b) {
  std::vector<std::optional<double>> a, b;
  for (const auto& r : reports) {
    a.push_back(metric_value(r, metric_a));
    b.push_back(metric_value(r, metric_b));
  }
  return stats::pairwise_correlation(a, b);
}

const std::vector<std::pair<std::string, std::string>>& default_correlations() {
  static const std::vector<std::pair<std::string, std::string>> pairs = {{"rec", "words"},
                                                                          {"char_ch", "mcc"}};
  return pairs;
}

ComparisonReport compare_corpora(std::span<const MetricReport> reports, std::string_view reference,
                                 const std::vector<std::pair<std::string, std::string>>& correlations) {
  std::map<std::string, std::vector<MetricReport>> by_source;
  for (const auto& r : reports) by_source[r.source_label].push_back(r);
  auto ref_it = by_source.find(std::string(reference));
  if (ref_it == by_source.end())
    throw InputError("reference source '" + std::string(reference) + "' has no stories");
  for (const auto& [a, b] : correlations) {
    (void)metric_value(MetricReport{}, a);
    (void)metric_value(MetricReport{}, b);
  }

  ComparisonReport out;
  out.reference = std::string(reference);
  out.metrics = metric_names();
  out.sources.push_back(out.reference);
  for (const auto& [source, _] : by_source)
    if (source != out.reference) out.sources.push_back(source);

  auto column = [](const std::vector<MetricReport>& rs, const std::string& metric) {
    std::vector<std::optional<double>> col;
    for (const auto& r : rs) col.push_back(metric_value(r, metric));
    return col;
  };
  auto defined = [](const std::vector<std::optional<double>>& col) {
    std::vector<double> xs;
    for (const auto& v : col)
      if (v) xs.push_back(*v);
    return xs;
  };

  for (const auto& source : out.sources) {
    const auto& rs = by_source[source];
    for (const auto& metric : out.metrics) {
      MetricComparison mc;
      auto col = column(rs, metric);
      mc.aggregate = stats::aggregate(col);
      if (source != out.reference) {
        try {
          mc.test = stats::welch_t_test(defined(col), defined(column(ref_it->second, metric)));
        } catch (const InputError&) {
        }
      }
      out.per_source[source][metric] = mc;
    }
    for (const auto& [a, b] : correlations) {
      CorrelationEntry e{source, a, b, std::nullopt};
      try {
        e.result = pairwise_metric_correlation(rs, a, b);
      } catch (const InputError&) {
      }
      out.correlations.push_back(std::move(e));
    }
  }
  return out;
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (x == 0.0) return "0";  // folds -0
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

namespace {

std::string cell(const std::optional<double>& v) { return v ? format_number(*v) : "null"; }

std::string cell(std::size_t v) { return std::to_string(v); }

std::optional<double> test_field(const std::optional<stats::TestResult>& t, std::string_view f) {
  if (!t) return std::nullopt;
  if (f == "t") return t->statistic;
  if (f == "dof") return t->dof;
  if (f == "p_value") return t->p_value;
  if (f == "cohens_d") return t->effect_size;
  if (f == "significant_05") return t->significant_05 ? 1.0 : 0.0;
  return t->significant_001 ? 1.0 : 0.0;
}

constexpr const char* kTestFields[] = {"t", "dof", "p_value", "cohens_d", "significant_05",
                                       "significant_001"};

}  // namespace

void render_markdown(const ComparisonReport& report, std::ostream& out) {
  out << "# Corpus comparison\n\n"
      << "Reference: `" << report.reference << "`. A dagger (†) marks a mean that differs from "
      << "the reference at p < 0.05 (Welch t-test).\n\n"
      << "## Metrics\n\n"
      << "| source | metric | n | absent | mean | min | max | t | dof | p | d |\n"
      << "|---|---|---:|---:|---:|---:|---:|---:|---:|---:|---:|\n";
  for (const auto& source : report.sources) {
    for (const auto& metric : report.metrics) {
      const auto& mc = report.per_source.at(source).at(metric);
      const auto& a = mc.aggregate;
      std::string mean = cell(a.mean);
      if (mc.test && mc.test->significant_05) mean += " †";
      out << "| " << source << " | " << metric << " | " << cell(a.n) << " | " << cell(a.n_absent)
          << " | " << mean << " | " << cell(a.min) << " | " << cell(a.max) << " |";
      if (source == report.reference) {
        out << " | | | |\n";
      } else {
        for (const char* f : {"t", "dof", "p_value", "cohens_d"})
          out << ' ' << cell(test_field(mc.test, f)) << " |";
        out << '\n';
      }
    }
  }
  out << "\n## Correlations\n\n"
      << "Pearson r over stories defining both metrics; ** marks p < 0.05.\n\n"
      << "| source | metric_a | metric_b | n | excluded | r | p |\n"
      << "|---|---|---|---:|---:|---:|---:|\n";
  for (const auto& e : report.correlations) {
    out << "| " << e.source << " | " << e.metric_a << " | " << e.metric_b << " | ";
    if (!e.result) {
      out << "null | null | null | null |\n";
      continue;
    }
    const auto& r = e.result->result;
    out << r.n << " | " << e.result->n_excluded << " | " << format_number(r.statistic)
        << (r.significant_05 ? "**" : "") << " | " << format_number(r.p_value) << " |\n";
  }
}

void render_csv(const ComparisonReport& report, std::ostream& out) {
  out << "kind,source,metric,field,value\n";
  for (const auto& source : report.sources) {
    for (const auto& metric : report.metrics) {
      const auto& mc = report.per_source.at(source).at(metric);
      const auto& a = mc.aggregate;
      auto row = [&](const char* kind, std::string_view field, const std::string& value) {
        out << kind << ',' << source << ',' << metric << ',' << field << ',' << value << '\n';
      };
      row("aggregate", "n", cell(a.n));
      row("aggregate", "n_absent", cell(a.n_absent));
      row("aggregate", "mean", cell(a.mean));
      row("aggregate", "min", cell(a.min));
      row("aggregate", "max", cell(a.max));
      if (source == report.reference) continue;
      for (const char* f : kTestFields) row("test", f, cell(test_field(mc.test, f)));
    }
  }
  for (const auto& e : report.correlations) {
    std::string metric = e.metric_a + "~" + e.metric_b;
    auto row = [&](std::string_view field, const std::string& value) {
      out << "correlation," << e.source << ',' << metric << ',' << field << ',' << value << '\n';
    };
    if (e.result) {
      row("r", format_number(e.result->result.statistic));
      row("p_value", format_number(e.result->result.p_value));
      row("n", cell(e.result->result.n));
      row("n_excluded", cell(e.result->n_excluded));
    } else {
      for (const char* f : {"r", "p_value", "n", "n_excluded"}) row(f, "null");
    }
  }
}

void render_json(const ComparisonReport& report, std::ostream& out) {
  json doc = json::object();
  doc["reference"] = report.reference;
  doc["sources"] = report.sources;
  json aggregates = json::object(), tests = json::object();
  for (const auto& source : report.sources) {
    for (const auto& metric : report.metrics) {
      const auto& mc = report.per_source.at(source).at(metric);
      const auto& a = mc.aggregate;
      aggregates[source][metric] = {{"n", a.n},
                                    {"n_absent", a.n_absent},
                                    {"mean", optional_number(a.mean)},
                                    {"min", optional_number(a.min)},
                                    {"max", optional_number(a.max)}};
      if (source == report.reference) continue;
      json t = json::object();
      for (const char* f : kTestFields) {
        auto v = test_field(mc.test, f);
        if (std::string_view(f).starts_with("significant"))
          t[f] = v ? json(*v != 0.0) : json(nullptr);
        else
          t[f] = optional_number(v);
      }
      tests[source][metric] = t;
    }
  }
  doc["aggregates"] = aggregates;
  doc["tests"] = tests;
  json corr = json::array();
  for (const auto& e : report.correlations) {
    json c = {{"source", e.source}, {"metric_a", e.metric_a}, {"metric_b", e.metric_b}};
    if (e.result) {
      c["r"] = e.result->result.statistic;
      c["p_value"] = e.result->result.p_value;
      c["n"] = e.result->result.n;
      c["n_excluded"] = e.result->n_excluded;
    } else {
      c["r"] = c["p_value"] = c["n"] = c["n_excluded"] = nullptr;
    }
    corr.push_back(std::move(c));
  }
  doc["correlations"] = corr;
  out << doc.dump(2, ' ', false, json::error_handler_t::replace) << '\n';
}

}  // namespace corefscope
