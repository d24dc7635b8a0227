#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "corefscope/data_model.hpp"

namespace corefscope {

/// ASCII lower-casing; bytes outside ASCII are left untouched.
std::string fold_case(std::string_view s);

/// Closed-class pronoun list, matched case-insensitively.
class PronounLexicon {
 public:
  /// Personal, possessive and reflexive English pronouns in all cases.
  static const PronounLexicon& english();

  /// One token per line; blank lines and lines starting with '#' are skipped.
  static PronounLexicon from_stream(std::istream& in);
  static PronounLexicon from_file(const std::filesystem::path& path);

  explicit PronounLexicon(std::set<std::string> words);

  bool contains(std::string_view token) const;
  std::size_t size() const { return words_.size(); }

 private:
  std::set<std::string, std::less<>> words_;
};

/// Index of the roster entry whose canonical name or alias equals `name`
/// (case-insensitive, whole string).
std::optional<std::size_t> resolve_character(std::string_view name,
                                             std::span<const CharacterName> roster);

/// Image detections labelled "Unknown" never resolve to a character.
bool is_unknown_label(std::string_view name);

/// Roster entries named inside a mention. Names match as whole tokens after a
/// trailing possessive clitic is dropped; multi-word names must match as a
/// contiguous token run. Result is ordered by first match position.
std::vector<std::size_t> characters_in_mention(std::span<const std::string> tokens,
                                               std::span<const CharacterName> roster);

struct CharacterChainSet {
  std::map<ChainId, CharacterName> assignments;
  std::set<ChainId> unlabeled;

  std::set<ChainId> character_chains() const;
  /// Chains assigned to the character with this canonical name.
  std::set<ChainId> chains_of(std::string_view canonical) const;
};

/// Labels a chain with the roster character it names most often. Chains whose
/// name-bearing mentions all name two or more characters stay unlabeled.
CharacterChainSet match_character_chains(const Story& story,
                                         std::span<const CharacterName> roster);

enum class Realization { N, P, Both, Other };

const char* to_string(Realization r);

Realization classify_mention(std::span<const std::string> tokens,
                             std::span<const CharacterName> roster,
                             const PronounLexicon& lexicon = PronounLexicon::english());

Realization classify_mention(const Story& story, const Mention& mention,
                             std::span<const CharacterName> roster,
                             const PronounLexicon& lexicon = PronounLexicon::english());

struct RealizationSequence {
  ChainId chain_id;
  std::vector<Realization> sequence;
};

RealizationSequence realization_sequence(const Story& story, const Chain& chain,
                                         std::span<const CharacterName> roster,
                                         const PronounLexicon& lexicon = PronounLexicon::english());

}  // namespace corefscope
