#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace corefscope {

struct ChainId {
  std::int64_t value = 0;

  auto operator<=>(const ChainId&) const = default;
};

inline std::ostream& operator<<(std::ostream& os, ChainId id) { return os << id.value; }

using Sentence = std::vector<std::string>;

/// A contiguous token span inside one sentence; `end` is inclusive.
struct Mention {
  std::size_t sentence = 0;
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t width() const { return end - start + 1; }

  auto operator<=>(const Mention&) const = default;
};

/// Mentions are kept in document order, strictly increasing by (sentence, start).
struct Chain {
  ChainId id;
  std::vector<Mention> mentions;

  bool operator==(const Chain&) const = default;
};

struct CharacterName {
  std::string canonical;
  std::vector<std::string> aliases;

  bool operator==(const CharacterName&) const = default;
};

struct BoxArea {
  std::string character;
  double relative_area = 0.0;  // fraction of the image area, in [0, 1]

  bool operator==(const BoxArea&) const = default;
};

struct ImageAppearance {
  std::string image_id;
  std::vector<std::string> characters;  // kept sorted and unique
  std::optional<std::vector<BoxArea>> boxes;

  bool operator==(const ImageAppearance&) const = default;
};

struct ImageSequence {
  std::vector<ImageAppearance> images;

  bool operator==(const ImageSequence&) const = default;
};

struct Story {
  std::string story_id;
  std::vector<Sentence> sentences;
  std::vector<Chain> chains;
  std::vector<CharacterName> roster;
  std::optional<ImageSequence> images;

  std::size_t sentence_count() const { return sentences.size(); }
  const Chain* find_chain(ChainId id) const;

  bool operator==(const Story&) const = default;
};

/// Tokens covered by `m`. The mention must lie inside the story.
std::span<const std::string> mention_tokens(const Story& story, const Mention& m);

/// Space-joined surface text of `m`.
std::string mention_text(const Story& story, const Mention& m);

enum class ViolationKind {
  EmptyStory,
  EmptySentence,
  EmptyChain,
  SpanOutOfRange,
  UnorderedChain,
  SharedMention,
  DuplicateChainId,
  EmptyCharacterName,
  BoxAreaOutOfRange,
};

const char* to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string detail;
};

/// Every structural invariant the story breaks; empty means valid.
std::vector<Violation> validate_story(const Story& story);

/// C_s for each sentence s, restricted to a chosen set of chains.
struct SentenceChainIndex {
  std::vector<std::set<ChainId>> per_sentence;

  std::size_t sentence_count() const { return per_sentence.size(); }
  /// Union over all sentences.
  std::set<ChainId> chains() const;

  bool operator==(const SentenceChainIndex&) const = default;
};

/// Throws InputError when `character_chains` names a chain the story lacks.
SentenceChainIndex sentence_chain_index(const Story& story,
                                        const std::set<ChainId>& character_chains);

struct Descriptives {
  std::size_t sentences = 0;
  std::size_t words = 0;
  std::size_t words_as_mentions = 0;

  bool operator==(const Descriptives&) const = default;
};

/// Sentence count, token count (punctuation included) and the number of token
/// positions covered by at least one mention.
Descriptives story_descriptives(const Story& story);

}  // namespace corefscope
