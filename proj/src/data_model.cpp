#include "corefscope/data_model.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <tuple>

#include "corefscope/errors.hpp"

namespace corefscope {

const Chain* Story::find_chain(ChainId id) const {
  auto it = std::find_if(chains.begin(), chains.end(),
                         [id](const Chain& c) { return c.id == id; });
  return it == chains.end() ? nullptr : &*it;
}

std::span<const std::string> mention_tokens(const Story& story, const Mention& m) {
  const auto& sent = story.sentences.at(m.sentence);
  if (m.start > m.end || m.end >= sent.size()) {
    throw InputError("mention span outside its sentence");
  }
  return std::span<const std::string>(sent).subspan(m.start, m.width());
}

std::string mention_text(const Story& story, const Mention& m) {
  std::string out;
  for (const auto& tok : mention_tokens(story, m)) {
    if (!out.empty()) out += ' ';
    out += tok;
  }
  return out;
}

const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::EmptyStory: return "EmptyStory";
    case ViolationKind::EmptySentence: return "EmptySentence";
    case ViolationKind::EmptyChain: return "EmptyChain";
    case ViolationKind::SpanOutOfRange: return "SpanOutOfRange";
    case ViolationKind::UnorderedChain: return "UnorderedChain";
    case ViolationKind::SharedMention: return "SharedMention";
    case ViolationKind::DuplicateChainId: return "DuplicateChainId";
    case ViolationKind::EmptyCharacterName: return "EmptyCharacterName";
    case ViolationKind::BoxAreaOutOfRange: return "BoxAreaOutOfRange";
  }
  return "Unknown";
}

namespace {

std::string describe(ChainId id, std::size_t index, const Mention& m) {
  std::ostringstream os;
  os << "chain " << id << " mention " << index << " (sentence " << m.sentence << ", tokens "
     << m.start << ".." << m.end << ")";
  return os.str();
}

}  // namespace

std::vector<Violation> validate_story(const Story& story) {
  std::vector<Violation> out;
  auto report = [&out](ViolationKind kind, std::string detail) {
    out.push_back({kind, std::move(detail)});
  };

  if (story.sentences.empty()) report(ViolationKind::EmptyStory, "story has no sentences");
  for (std::size_t s = 0; s < story.sentences.size(); ++s) {
    if (story.sentences[s].empty()) {
      report(ViolationKind::EmptySentence, "sentence " + std::to_string(s) + " has no tokens");
    }
  }

  std::set<ChainId> seen_ids;
  std::map<Mention, ChainId> owner;
  for (const auto& chain : story.chains) {
    if (!seen_ids.insert(chain.id).second) {
      std::ostringstream os;
      os << "chain id " << chain.id << " used twice";
      report(ViolationKind::DuplicateChainId, os.str());
    }
    if (chain.mentions.empty()) {
      std::ostringstream os;
      os << "chain " << chain.id << " has no mentions";
      report(ViolationKind::EmptyChain, os.str());
    }
    for (std::size_t i = 0; i < chain.mentions.size(); ++i) {
      const Mention& m = chain.mentions[i];
      if (m.sentence >= story.sentences.size() || m.start > m.end ||
          m.end >= story.sentences[m.sentence].size()) {
        report(ViolationKind::SpanOutOfRange, describe(chain.id, i, m));
      }
      if (i > 0) {
        const Mention& prev = chain.mentions[i - 1];
        if (std::tie(prev.sentence, prev.start) >= std::tie(m.sentence, m.start)) {
          report(ViolationKind::UnorderedChain, describe(chain.id, i, m));
        }
      }
      auto [it, inserted] = owner.emplace(m, chain.id);
      if (!inserted && it->second != chain.id) {
        std::ostringstream os;
        os << describe(chain.id, i, m) << " also belongs to chain " << it->second;
        report(ViolationKind::SharedMention, os.str());
      }
    }
  }

  for (const auto& name : story.roster) {
    if (name.canonical.empty()) report(ViolationKind::EmptyCharacterName, "roster entry has no name");
  }
  if (story.images) {
    for (const auto& image : story.images->images) {
      if (!image.boxes) continue;
      for (const auto& box : *image.boxes) {
        if (!(box.relative_area >= 0.0 && box.relative_area <= 1.0)) {
          report(ViolationKind::BoxAreaOutOfRange,
                 "image " + image.image_id + " box for " + box.character);
        }
      }
    }
  }
  return out;
}

std::set<ChainId> SentenceChainIndex::chains() const {
  std::set<ChainId> all;
  for (const auto& cs : per_sentence) all.insert(cs.begin(), cs.end());
  return all;
}

SentenceChainIndex sentence_chain_index(const Story& story,
                                        const std::set<ChainId>& character_chains) {
  for (ChainId id : character_chains) {
    if (!story.find_chain(id)) {
      std::ostringstream os;
      os << "unknown chain id " << id;
      throw InputError(os.str());
    }
  }
  SentenceChainIndex index;
  index.per_sentence.resize(story.sentences.size());
  for (const auto& chain : story.chains) {
    if (!character_chains.contains(chain.id)) continue;
    for (const auto& m : chain.mentions) index.per_sentence.at(m.sentence).insert(chain.id);
  }
  return index;
}

Descriptives story_descriptives(const Story& story) {
  Descriptives d;
  d.sentences = story.sentences.size();
  std::vector<std::vector<bool>> covered;
  covered.reserve(story.sentences.size());
  for (const auto& sent : story.sentences) {
    d.words += sent.size();
    covered.emplace_back(sent.size(), false);
  }
  for (const auto& chain : story.chains) {
    for (const auto& m : chain.mentions) {
      for (std::size_t t = m.start; t <= m.end; ++t) covered.at(m.sentence).at(t) = true;
    }
  }
  for (const auto& row : covered) d.words_as_mentions += std::count(row.begin(), row.end(), true);
  return d;
}

}  // namespace corefscope
