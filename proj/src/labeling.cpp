#include "corefscope/labeling.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <tuple>

#include "corefscope/errors.hpp"

namespace corefscope {

namespace {

constexpr std::string_view kEnglishPronouns[] = {
    "i",    "me",     "my",    "mine",       "myself",                                 //
    "you",  "your",   "yours", "yourself",   "yourselves",                             //
    "he",   "him",    "his",   "himself",                                              //
    "she",  "her",    "hers",  "herself",                                              //
    "it",   "its",    "itself",                                                        //
    "we",   "us",     "our",   "ours",       "ourselves",                              //
    "they", "them",   "their", "theirs",     "themselves",
};

// ASCII apostrophe and U+2019 in UTF-8.
constexpr std::string_view kPossessiveSuffixes[] = {"'s", "\xE2\x80\x99s", "'", "\xE2\x80\x99"};

bool is_possessive_clitic(std::string_view folded) {
  return std::find(std::begin(kPossessiveSuffixes), std::end(kPossessiveSuffixes), folded) !=
         std::end(kPossessiveSuffixes);
}

std::string strip_possessive(std::string folded) {
  for (std::string_view suffix : {std::string_view("'s"), std::string_view("\xE2\x80\x99s")}) {
    if (folded.size() > suffix.size() && folded.ends_with(suffix)) {
      folded.resize(folded.size() - suffix.size());
      break;
    }
  }
  return folded;
}

std::vector<std::string> split_words(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream is{std::string(s)};
  for (std::string w; is >> w;) out.push_back(fold_case(w));
  return out;
}

// Folded tokens with possessive clitics removed.
std::vector<std::string> normalize_tokens(std::span<const std::string> tokens) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(fold_case(t));
  while (!out.empty() && is_possessive_clitic(out.back())) out.pop_back();
  for (auto& t : out) t = strip_possessive(std::move(t));
  return out;
}

// Position of the first occurrence of `name` as a token run, or npos.
std::size_t find_run(const std::vector<std::string>& tokens, const std::vector<std::string>& name) {
  if (name.empty() || name.size() > tokens.size()) return std::string::npos;
  auto it = std::search(tokens.begin(), tokens.end(), name.begin(), name.end());
  return it == tokens.end() ? std::string::npos : static_cast<std::size_t>(it - tokens.begin());
}

struct MentionMatch {
  std::size_t character;
  std::size_t position;
};

std::vector<MentionMatch> match_mention(std::span<const std::string> tokens,
                                        std::span<const CharacterName> roster) {
  const auto norm = normalize_tokens(tokens);
  std::vector<MentionMatch> hits;
  for (std::size_t c = 0; c < roster.size(); ++c) {
    std::size_t best = std::string::npos;
    auto consider = [&](std::string_view name) {
      best = std::min(best, find_run(norm, split_words(name)));
    };
    consider(roster[c].canonical);
    for (const auto& alias : roster[c].aliases) consider(alias);
    if (best != std::string::npos) hits.push_back({c, best});
  }
  std::stable_sort(hits.begin(), hits.end(),
                   [](const MentionMatch& a, const MentionMatch& b) { return a.position < b.position; });
  return hits;
}

}  // namespace

std::string fold_case(std::string_view s) {
  std::string out(s);
  for (auto& ch : out) {
    if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
  }
  return out;
}

const PronounLexicon& PronounLexicon::english() {
  static const PronounLexicon lexicon(
      std::set<std::string>(std::begin(kEnglishPronouns), std::end(kEnglishPronouns)));
  return lexicon;
}

PronounLexicon::PronounLexicon(std::set<std::string> words) {
  for (const auto& w : words) words_.insert(fold_case(w));
}

PronounLexicon PronounLexicon::from_stream(std::istream& in) {
  std::set<std::string> words;
  for (std::string line; std::getline(in, line);) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    auto last = line.find_last_not_of(" \t\r");
    words.insert(line.substr(first, last - first + 1));
  }
  return PronounLexicon(std::move(words));
}

PronounLexicon PronounLexicon::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read pronoun lexicon " + path.string());
  return from_stream(in);
}

bool PronounLexicon::contains(std::string_view token) const {
  return words_.contains(fold_case(token));
}

std::optional<std::size_t> resolve_character(std::string_view name,
                                             std::span<const CharacterName> roster) {
  const auto folded = fold_case(name);
  for (std::size_t c = 0; c < roster.size(); ++c) {
    if (fold_case(roster[c].canonical) == folded) return c;
    for (const auto& alias : roster[c].aliases) {
      if (fold_case(alias) == folded) return c;
    }
  }
  return std::nullopt;
}

bool is_unknown_label(std::string_view name) { return fold_case(name) == "unknown"; }

std::vector<std::size_t> characters_in_mention(std::span<const std::string> tokens,
                                               std::span<const CharacterName> roster) {
  std::vector<std::size_t> out;
  for (const auto& hit : match_mention(tokens, roster)) out.push_back(hit.character);
  return out;
}

std::set<ChainId> CharacterChainSet::character_chains() const {
  std::set<ChainId> out;
  for (const auto& [id, name] : assignments) out.insert(id);
  return out;
}

std::set<ChainId> CharacterChainSet::chains_of(std::string_view canonical) const {
  std::set<ChainId> out;
  for (const auto& [id, name] : assignments) {
    if (name.canonical == canonical) out.insert(id);
  }
  return out;
}

CharacterChainSet match_character_chains(const Story& story,
                                         std::span<const CharacterName> roster) {
  CharacterChainSet result;
  for (const auto& chain : story.chains) {
    // Per character: number of mentions naming it, and where it was first named.
    std::map<std::size_t, std::pair<std::size_t, std::tuple<std::size_t, std::size_t>>> tally;
    bool has_singular = false;
    for (std::size_t i = 0; i < chain.mentions.size(); ++i) {
      const auto hits = match_mention(mention_tokens(story, chain.mentions[i]), roster);
      if (hits.size() == 1) has_singular = true;
      for (const auto& hit : hits) {
        auto [it, fresh] = tally.try_emplace(hit.character, 0, std::tuple{i, hit.position});
        ++it->second.first;
      }
    }
    if (!has_singular) {
      result.unlabeled.insert(chain.id);
      continue;
    }
    auto best = std::min_element(tally.begin(), tally.end(), [](const auto& a, const auto& b) {
      if (a.second.first != b.second.first) return a.second.first > b.second.first;
      return a.second.second < b.second.second;
    });
    result.assignments.emplace(chain.id, roster[best->first]);
  }
  return result;
}

const char* to_string(Realization r) {
  switch (r) {
    case Realization::N: return "N";
    case Realization::P: return "P";
    case Realization::Both: return "Both";
    case Realization::Other: return "Other";
  }
  return "Other";
}

Realization classify_mention(std::span<const std::string> tokens,
                             std::span<const CharacterName> roster,
                             const PronounLexicon& lexicon) {
  const bool pronoun = std::any_of(tokens.begin(), tokens.end(),
                                   [&](const std::string& t) { return lexicon.contains(t); });
  const bool name = !match_mention(tokens, roster).empty();
  if (pronoun && name) return Realization::Both;
  if (pronoun) return Realization::P;
  if (name) return Realization::N;
  return Realization::Other;
}

Realization classify_mention(const Story& story, const Mention& mention,
                             std::span<const CharacterName> roster,
                             const PronounLexicon& lexicon) {
  return classify_mention(mention_tokens(story, mention), roster, lexicon);
}

RealizationSequence realization_sequence(const Story& story, const Chain& chain,
                                         std::span<const CharacterName> roster,
                                         const PronounLexicon& lexicon) {
  RealizationSequence seq{chain.id, {}};
  seq.sequence.reserve(chain.mentions.size());
  for (const auto& m : chain.mentions) seq.sequence.push_back(classify_mention(story, m, roster, lexicon));
  return seq;
}

}  // namespace corefscope
