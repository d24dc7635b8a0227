#pragma once

#include <optional>
#include <span>
#include <vector>

#include "corefscope/data_model.hpp"
#include "corefscope/labeling.hpp"

namespace corefscope {

/// Fraction of positions between the first and last presence that are
/// present. Absent when nothing is present; 1 for a single presence.
std::optional<double> span_continuity(const std::vector<bool>& presence);

/// T_C over sentences mentioned by any chain assigned to `character`.
std::optional<double> text_continuity(const Story& story, const CharacterChainSet& assignments,
                                      const CharacterName& character);

/// I_C over images listing `character` (canonical name or alias, any case).
std::optional<double> image_continuity(const ImageSequence& images, const CharacterName& character);

struct ContinuityRecord {
  CharacterName character;
  std::optional<double> text;   // T_C
  std::optional<double> image;  // I_C
  std::optional<double> consistency;
};

struct StoryMccReport {
  std::vector<ContinuityRecord> records;
  std::optional<double> mcc;
};

/// Per-character 1 - |T_C - I_C| and its mean over characters.
///
/// A character seen in only one modality scores the missing side as 0; a
/// character seen in neither is left out of the mean. Without image
/// annotations (or with an empty sequence) there is no second modality and
/// the score is absent.
StoryMccReport mcc(const Story& story, const CharacterChainSet& assignments,
                   const std::optional<ImageSequence>& images,
                   std::span<const CharacterName> roster);

}  // namespace corefscope
