#pragma once

#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "corefscope/data_model.hpp"
#include "corefscope/ingest.hpp"

namespace testing_helpers {

using namespace corefscope;

inline Sentence words(const std::string& text) {
  Sentence out;
  std::istringstream in(text);
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

struct ChainSpec {
  std::int64_t id;
  std::vector<Mention> mentions;
};

inline Story make_story(std::initializer_list<std::string> sentences,
                        std::initializer_list<ChainSpec> chains = {},
                        std::vector<CharacterName> roster = {}) {
  Story s;
  s.story_id = "t";
  for (const auto& text : sentences) s.sentences.push_back(words(text));
  for (const auto& c : chains) s.chains.push_back(Chain{ChainId{c.id}, c.mentions});
  s.roster = std::move(roster);
  return s;
}

// Index built directly from per-sentence chain id lists.
inline SentenceChainIndex index_of(std::initializer_list<std::initializer_list<std::int64_t>> sets) {
  SentenceChainIndex idx;
  for (const auto& set : sets) {
    std::set<ChainId> ids;
    for (auto v : set) ids.insert(ChainId{v});
    idx.per_sentence.push_back(ids);
  }
  return idx;
}

inline ImageSequence images_of(std::initializer_list<std::initializer_list<std::string>> per_image) {
  ImageSequence seq;
  std::size_t j = 0;
  for (const auto& chars : per_image) {
    ImageAppearance img;
    img.image_id = "i" + std::to_string(j++);
    img.characters.assign(chars.begin(), chars.end());
    std::sort(img.characters.begin(), img.characters.end());
    seq.images.push_back(img);
  }
  return seq;
}

inline StoryBundle bundle_of(Story s, std::string source = "human") {
  return StoryBundle{std::move(s), std::move(source), {}};
}

}  // namespace testing_helpers
