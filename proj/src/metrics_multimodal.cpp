#include "corefscope/metrics_multimodal.hpp"

#include <algorithm>
#include <cmath>

namespace corefscope {

namespace {

bool names_character(std::string_view label, const CharacterName& character) {
  const auto folded = fold_case(label);
  if (fold_case(character.canonical) == folded) return true;
  return std::any_of(character.aliases.begin(), character.aliases.end(),
                     [&](const std::string& a) { return fold_case(a) == folded; });
}

}  // namespace

std::optional<double> span_continuity(const std::vector<bool>& presence) {
  auto first = std::find(presence.begin(), presence.end(), true);
  if (first == presence.end()) return std::nullopt;
  auto last = std::find(presence.rbegin(), presence.rend(), true).base();
  const auto span = static_cast<double>(last - first);
  return static_cast<double>(std::count(first, last, true)) / span;
}

std::optional<double> text_continuity(const Story& story, const CharacterChainSet& assignments,
                                      const CharacterName& character) {
  std::vector<bool> presence(story.sentences.size(), false);
  for (ChainId id : assignments.chains_of(character.canonical)) {
    if (const Chain* chain = story.find_chain(id)) {
      for (const auto& m : chain->mentions) presence.at(m.sentence) = true;
    }
  }
  return span_continuity(presence);
}

std::optional<double> image_continuity(const ImageSequence& images, const CharacterName& character) {
  std::vector<bool> presence;
  presence.reserve(images.images.size());
  for (const auto& image : images.images) {
    presence.push_back(std::any_of(image.characters.begin(), image.characters.end(),
                                   [&](const std::string& c) { return names_character(c, character); }));
  }
  return span_continuity(presence);
}

StoryMccReport mcc(const Story& story, const CharacterChainSet& assignments,
                   const std::optional<ImageSequence>& images,
                   std::span<const CharacterName> roster) {
  StoryMccReport report;
  const bool has_images = images && !images->images.empty();
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& character : roster) {
    ContinuityRecord rec{character, text_continuity(story, assignments, character),
                         has_images ? image_continuity(*images, character) : std::nullopt,
                         std::nullopt};
    if (has_images && (rec.text || rec.image)) {
      rec.consistency = 1.0 - std::abs(rec.text.value_or(0.0) - rec.image.value_or(0.0));
      sum += *rec.consistency;
      ++count;
    }
    report.records.push_back(std::move(rec));
  }
  if (count > 0) report.mcc = sum / static_cast<double>(count);
  return report;
}

}  // namespace corefscope
