#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "corefscope/data_model.hpp"
#include "corefscope/ingest.hpp"
#include "corefscope/metrics_multimodal.hpp"
#include "corefscope/metrics_rec.hpp"
#include "corefscope/metrics_text.hpp"

namespace corefscope::synth {

/// SplitMix64 (Steele, Lea & Flood). State advances by 0x9E3779B97F4A7C15;
/// output mixes with 0xBF58476D1CE4E5B9 and 0x94D049BB133111EB, shifts
/// 30/27/31. Every draw below is derived from next() so fixtures reproduce
/// in any language.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  /// Top 53 bits scaled into [0, 1).
  double uniform();
  /// next() % n; n must be positive.
  std::uint64_t below(std::uint64_t n);
  /// Box-Muller on two uniform() draws, 1 - u1 to stay off log(0).
  double normal();

 private:
  std::uint64_t state_;
};

enum class PresenceKind { Dense, Alternating, Block, Random };

/// dense: everyone everywhere. alternating: character c at positions with
/// index % k == c. block: k contiguous runs [c*n/k, (c+1)*n/k). random: each
/// (character, position) independently with probability p.
struct PresencePattern {
  PresenceKind kind = PresenceKind::Dense;
  double p = 0.5;
};

/// Realization of a character's i-th mention. constant_p keeps the first
/// mention a name so the chain can still be labeled by name matching.
enum class RealizationPattern { ConstantN, ConstantP, Alternating };

struct SynthParams {
  std::uint64_t seed = 0;
  std::size_t n_sentences = 5;
  std::size_t n_characters = 2;
  PresencePattern presence;
  RealizationPattern realization = RealizationPattern::ConstantN;
  PresencePattern image_pattern;
  std::string source_label = "synthetic";
};

struct Expected {
  Descriptives descriptives;
  StoryTextMetrics text;
  StoryMccReport mcc;
  RecReport rec;
};

struct Generated {
  StoryBundle bundle;
  Expected expected;
};

/// Name used for the c-th synthetic character.
std::string character_name(std::size_t c);

/// Story with one image per sentence. Throws InputError on invalid params.
Generated generate(const SynthParams& params);

enum class Perturbation { ShuffleSentences, SplitChain, MergeChains, PronominalizeAll };

/// shuffle_sentences: seeded permutation of sentences.
/// split_chain: the longest chain (first on ties) loses its second half to a
///   new chain.
/// merge_chains: the first two chains become one.
/// pronominalize_all: every token of a non-first mention becomes "they",
///   except tokens inside some chain's first mention.
/// Throws InputError when the operation does not apply.
StoryBundle perturb(const StoryBundle& bundle, Perturbation op, std::uint64_t seed = 0);

struct RandomStoryLimits {
  std::size_t max_sentences = 12;
  std::size_t max_tokens = 8;
  std::size_t max_chains = 8;
  std::size_t max_mentions = 5;
  std::size_t max_images = 10;
  std::size_t max_characters = 5;
};

/// Unstructured random story for oracle checks: random tokens drawn from
/// names, pronouns and filler; overlapping and nested spans; optional images.
StoryBundle random_story(SplitMix64& rng, const RandomStoryLimits& limits = {});

/// Two characters, one per sentence, `n_sentences` images. CharCh is k/(N-1)
/// for k uniform in 0..N-1 switches; images are then laid out so MCC tracks
/// mean_mcc + slope * (CharCh - 0.5) + noise_sd * z, with slope chosen so the
/// population correlation is target_rho.
struct CalibrationParams {
  std::uint64_t seed = 1;
  std::size_t n_stories = 1000;
  std::size_t n_sentences = 21;
  double target_rho = -0.25;
  double noise_sd = 0.08;
  double mean_mcc = 0.75;
  std::string source_label = "calibration";
};

std::vector<StoryBundle> correlated_corpus(const CalibrationParams& params);

/// Two characters, one per sentence, switching with probability
/// `switch_rate` at each sentence boundary. Images are dense: every
/// character named in the text appears in every image.
struct SwitchRateParams {
  std::uint64_t seed = 1;
  std::size_t n_stories = 1000;
  std::size_t n_sentences = 10;
  double switch_rate = 0.5;
  std::string source_label = "switch";
};

std::vector<StoryBundle> switch_rate_corpus(const SwitchRateParams& params);

}  // namespace corefscope::synth
