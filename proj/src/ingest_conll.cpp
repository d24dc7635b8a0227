#include <algorithm>
#include <charconv>
#include <map>
#include <optional>
#include <sstream>
#include <tuple>

#include "corefscope/errors.hpp"
#include "corefscope/ingest.hpp"

namespace corefscope {

namespace {

constexpr std::string_view kBegin = "#begin document";
constexpr std::string_view kEnd = "#end document";

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_columns(std::string_view line) {
  std::vector<std::string_view> cols;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) cols.push_back(line.substr(start, i - start));
  }
  return cols;
}

std::optional<std::int64_t> to_int(std::string_view s) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

// "(name); part 003" -> ("name", 3). Anything else is taken whole as the name.
std::pair<std::string, std::int64_t> parse_header(std::string_view rest) {
  rest = trim(rest);
  std::string name(rest);
  std::int64_t part = 0;
  if (!rest.empty() && rest.front() == '(') {
    const auto close = rest.find(')');
    if (close != std::string_view::npos) {
      name = std::string(rest.substr(1, close - 1));
      auto tail = trim(rest.substr(close + 1));
      if (tail.starts_with(";")) tail = trim(tail.substr(1));
      if (tail.starts_with("part")) {
        if (auto p = to_int(trim(tail.substr(4)))) part = *p;
      }
    }
  }
  return {name, part};
}

enum class BracketKind { Open, Close, Single };

struct Bracket {
  BracketKind kind;
  std::int64_t id;
};

std::vector<Bracket> parse_coref_field(std::string_view field, std::size_t line) {
  std::vector<Bracket> out;
  if (field == "-" || field == "_") return out;
  std::size_t pos = 0;
  while (pos <= field.size()) {
    auto bar = field.find('|', pos);
    if (bar == std::string_view::npos) bar = field.size();
    std::string_view piece = field.substr(pos, bar - pos);
    const bool opens = piece.starts_with('(');
    const bool closes = piece.ends_with(')');
    std::string_view digits = piece;
    if (opens) digits.remove_prefix(1);
    if (closes && !digits.empty()) digits.remove_suffix(1);
    const auto id = to_int(digits);
    if (!id || *id < 0 || (!opens && !closes)) {
      throw ParseError("malformed coreference field '" + std::string(field) + "'", line);
    }
    out.push_back({opens && closes ? BracketKind::Single
                   : opens         ? BracketKind::Open
                                   : BracketKind::Close,
                   *id});
    pos = bar + 1;
  }
  return out;
}

// Accumulates one document.
class DocumentBuilder {
 public:
  DocumentBuilder(std::string story_id, std::size_t begin_line)
      : story_id_(std::move(story_id)), begin_line_(begin_line) {}

  void add_token(std::string word, std::string_view coref, std::size_t line) {
    const std::size_t sentence = story_.sentences.size();
    const std::size_t token = current_.size();
    current_.push_back(std::move(word));
    for (const auto& b : parse_coref_field(coref, line)) {
      switch (b.kind) {
        case BracketKind::Single:
          mentions_[b.id].push_back({sentence, token, token});
          break;
        case BracketKind::Open:
          open_[b.id].push_back({token, line});
          break;
        case BracketKind::Close: {
          auto it = open_.find(b.id);
          if (it == open_.end() || it->second.empty()) {
            throw ParseError("unbalanced coreference bracket: '" + std::to_string(b.id) +
                                 ")' closes a chain that is not open",
                             line);
          }
          const auto start = it->second.back().token;
          it->second.pop_back();
          if (it->second.empty()) open_.erase(it);
          mentions_[b.id].push_back({sentence, start, token});
          break;
        }
      }
    }
  }

  void end_sentence(std::size_t line) {
    if (current_.empty()) return;
    if (!open_.empty()) {
      const auto& [id, stack] = *open_.begin();
      throw ParseError("unbalanced coreference bracket: '(" + std::to_string(id) +
                           "' opened on line " + std::to_string(stack.back().line) +
                           " is not closed before the sentence ends",
                       line);
    }
    story_.sentences.push_back(std::move(current_));
    current_.clear();
  }

  StoryBundle finish(std::string_view source_label, std::size_t line) {
    end_sentence(line);
    if (story_.sentences.empty()) throw ParseError("empty document '" + story_id_ + "'", begin_line_);

    for (auto& [id, mentions] : mentions_) {
      std::sort(mentions.begin(), mentions.end());
      for (std::size_t i = 1; i < mentions.size(); ++i) {
        if (std::tie(mentions[i - 1].sentence, mentions[i - 1].start) ==
            std::tie(mentions[i].sentence, mentions[i].start)) {
          throw ParseError("chain " + std::to_string(id) + " has two mentions starting at sentence " +
                               std::to_string(mentions[i].sentence) + " token " +
                               std::to_string(mentions[i].start),
                           begin_line_);
        }
      }
      story_.chains.push_back({ChainId{id}, mentions});
    }
    std::map<Mention, std::int64_t> owner;
    for (const auto& chain : story_.chains) {
      for (const auto& m : chain.mentions) {
        auto [it, fresh] = owner.emplace(m, chain.id.value);
        if (!fresh) {
          throw ParseError("chains " + std::to_string(it->second) + " and " +
                               std::to_string(chain.id.value) + " share a mention",
                           begin_line_);
        }
      }
    }
    story_.story_id = story_id_;
    StoryBundle bundle{std::move(story_), std::string(source_label), {}};
    bundle.provenance["format"] = "conll";
    return bundle;
  }

 private:
  struct OpenBracket {
    std::size_t token;
    std::size_t line;
  };

  std::string story_id_;
  std::size_t begin_line_;
  Story story_;
  Sentence current_;
  std::map<std::int64_t, std::vector<OpenBracket>> open_;
  std::map<std::int64_t, std::vector<Mention>> mentions_;
};

}  // namespace

ReadResult<StoryBundle> read_conll(std::istream& in, std::string_view source_label) {
  ReadResult<StoryBundle> result;
  std::optional<DocumentBuilder> doc;
  bool skipping = false;  // inside a document that already failed
  bool stray_reported = false;
  std::size_t line_no = 0;

  auto fail = [&](const ParseError& e) {
    result.diagnostics.push_back({e.line(), e.message()});
    doc.reset();
  };

  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.starts_with(kBegin)) {
      if (doc) fail(ParseError("document not closed before the next #begin document", line_no));
      auto [name, part] = parse_header(line.substr(kBegin.size()));
      if (part != 0) name += "_part" + std::to_string(part);
      doc.emplace(std::move(name), line_no);
      skipping = false;
      stray_reported = false;
      continue;
    }
    if (line.starts_with(kEnd)) {
      if (doc) {
        try {
          result.records.push_back(doc->finish(source_label, line_no));
        } catch (const ParseError& e) {
          fail(e);
        }
        doc.reset();
      } else if (!skipping) {
        result.diagnostics.push_back({line_no, "#end document without #begin document"});
      }
      skipping = false;
      continue;
    }
    if (line.starts_with('#')) continue;
    if (skipping) continue;
    if (!doc) {
      if (!line.empty() && !stray_reported) {
        result.diagnostics.push_back({line_no, "token line outside any document"});
        stray_reported = true;
      }
      continue;
    }
    try {
      if (line.empty()) {
        doc->end_sentence(line_no);
        continue;
      }
      const auto cols = split_columns(line);
      if (cols.size() < 4) {
        throw ParseError("expected at least 4 columns (document, index, word, coreference), found " +
                             std::to_string(cols.size()),
                         line_no);
      }
      const std::string_view word = cols.size() == 4 ? cols[2] : cols[3];
      doc->add_token(std::string(word), cols.back(), line_no);
    } catch (const ParseError& e) {
      fail(e);
      skipping = true;
    }
  }
  if (doc) {
    result.diagnostics.push_back({line_no, "document not closed by #end document at end of input"});
  }
  return result;
}

std::vector<StoryBundle> parse_conll_coref(std::istream& in, std::string_view source_label) {
  auto result = read_conll(in, source_label);
  if (!result.diagnostics.empty()) {
    const auto& d = result.diagnostics.front();
    throw ParseError(d.message, d.line);
  }
  return std::move(result.records);
}

std::vector<StoryBundle> parse_conll_coref(std::string_view text, std::string_view source_label) {
  std::istringstream in{std::string(text)};
  return parse_conll_coref(in, source_label);
}

std::vector<std::vector<std::string>> conll_coref_column(const Story& story) {
  struct Span {
    std::int64_t id;
    Mention m;
  };
  std::vector<std::vector<std::vector<Span>>> closes(story.sentences.size());
  auto opens = closes;
  auto singles = closes;
  for (std::size_t s = 0; s < story.sentences.size(); ++s) {
    closes[s].resize(story.sentences[s].size());
    opens[s].resize(story.sentences[s].size());
    singles[s].resize(story.sentences[s].size());
  }

  for (const auto& chain : story.chains) {
    const auto& ms = chain.mentions;
    for (std::size_t i = 0; i < ms.size(); ++i) {
      for (std::size_t j = i + 1; j < ms.size(); ++j) {
        const auto& a = ms[i];
        const auto& b = ms[j];
        if (a.sentence == b.sentence && a.start < b.start && b.start <= a.end && a.end < b.end) {
          std::ostringstream os;
          os << "chain " << chain.id << " has interleaved mentions in sentence " << a.sentence;
          throw InputError(os.str());
        }
      }
    }
    for (const auto& m : ms) {
      const Span sp{chain.id.value, m};
      if (m.start == m.end) {
        singles.at(m.sentence).at(m.start).push_back(sp);
      } else {
        opens.at(m.sentence).at(m.start).push_back(sp);
        closes.at(m.sentence).at(m.end).push_back(sp);
      }
    }
  }

  std::vector<std::vector<std::string>> column(story.sentences.size());
  for (std::size_t s = 0; s < story.sentences.size(); ++s) {
    for (std::size_t t = 0; t < story.sentences[s].size(); ++t) {
      auto& c = closes[s][t];
      auto& o = opens[s][t];
      auto& g = singles[s][t];
      std::sort(c.begin(), c.end(), [](const Span& a, const Span& b) {
        return std::tuple(b.m.start, a.id) < std::tuple(a.m.start, b.id);
      });
      std::sort(o.begin(), o.end(), [](const Span& a, const Span& b) {
        return std::tuple(b.m.end, a.id) < std::tuple(a.m.end, b.id);
      });
      std::sort(g.begin(), g.end(), [](const Span& a, const Span& b) { return a.id < b.id; });
      std::string field;
      auto append = [&field](const std::string& piece) {
        if (!field.empty()) field += '|';
        field += piece;
      };
      for (const auto& sp : c) append(std::to_string(sp.id) + ")");
      for (const auto& sp : o) append("(" + std::to_string(sp.id));
      for (const auto& sp : g) append("(" + std::to_string(sp.id) + ")");
      column[s].push_back(field.empty() ? "-" : field);
    }
  }
  return column;
}

void write_conll(std::span<const StoryBundle> bundles, std::ostream& out) {
  for (const auto& bundle : bundles) {
    const Story& story = bundle.story;
    std::string doc_id = story.story_id.empty() ? "_" : story.story_id;
    std::replace_if(doc_id.begin(), doc_id.end(), [](char c) { return c == ' ' || c == '\t'; }, '_');
    for (const auto& sent : story.sentences) {
      for (const auto& tok : sent) {
        if (tok.empty() || tok.find_first_of(" \t\r\n") != std::string::npos) {
          throw InputError("token '" + tok + "' cannot be written as a CoNLL column");
        }
      }
    }
    const auto column = conll_coref_column(story);
    out << "#begin document (" << doc_id << "); part 000\n";
    for (std::size_t s = 0; s < story.sentences.size(); ++s) {
      for (std::size_t t = 0; t < story.sentences[s].size(); ++t) {
        out << doc_id << '\t' << 0 << '\t' << t << '\t' << story.sentences[s][t] << '\t'
            << column[s][t] << '\n';
      }
      out << '\n';
    }
    out << "#end document\n";
  }
  if (!out) throw IoError("failed writing CoNLL output");
}

}  // namespace corefscope
