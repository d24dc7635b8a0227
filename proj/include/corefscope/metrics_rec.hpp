#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>

#include "corefscope/data_model.hpp"
#include "corefscope/labeling.hpp"

namespace corefscope {

/// 0 when every mention has the same realization, 1 otherwise.
/// Throws InputError on an empty sequence.
int rec_chain(const RealizationSequence& seq);

struct RecReport {
  std::map<ChainId, int> per_chain;
  std::optional<double> story_rec;
  std::size_t word_count = 0;
};

/// REC over the labeled character chains; `word_count` is the story's token
/// count, carried along for length correlations.
RecReport rec_story(const Story& story, const CharacterChainSet& assignments,
                    std::span<const CharacterName> roster,
                    const PronounLexicon& lexicon = PronounLexicon::english());

}  // namespace corefscope
