#include "corefscope/metrics_rec.hpp"

#include <algorithm>

#include "corefscope/errors.hpp"

namespace corefscope {

int rec_chain(const RealizationSequence& seq) {
  if (seq.sequence.empty()) throw InputError("REC of an empty mention sequence");
  const Realization first = seq.sequence.front();
  const bool constant = std::all_of(seq.sequence.begin(), seq.sequence.end(),
                                    [first](Realization r) { return r == first; });
  return constant ? 0 : 1;
}

RecReport rec_story(const Story& story, const CharacterChainSet& assignments,
                    std::span<const CharacterName> roster, const PronounLexicon& lexicon) {
  RecReport report;
  for (const auto& sent : story.sentences) report.word_count += sent.size();
  std::size_t changed = 0;
  for (ChainId id : assignments.character_chains()) {
    const Chain* chain = story.find_chain(id);
    if (!chain) throw InputError("assignment names a chain the story lacks");
    const int rec = rec_chain(realization_sequence(story, *chain, roster, lexicon));
    report.per_chain.emplace(id, rec);
    changed += static_cast<std::size_t>(rec);
  }
  if (!report.per_chain.empty()) {
    report.story_rec = static_cast<double>(changed) / static_cast<double>(report.per_chain.size());
  }
  return report;
}

}  // namespace corefscope
