#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "corefscope/data_model.hpp"

namespace corefscope {

/// Comparison of C_s with C_{s+1}. Ratios are absent when their denominator
/// set is empty; `change` needs both sets non-empty.
struct TransitionRecord {
  std::size_t pair = 0;
  bool shared = false;  // T_s
  std::optional<double> drop_ratio;
  std::optional<double> add_ratio;
  std::optional<bool> change;
};

/// One record per consecutive sentence pair (N - 1 records).
std::vector<TransitionRecord> transitions(const SentenceChainIndex& index);

/// Mean of T_s over all pairs; absent for single-sentence stories.
std::optional<double> char_transition(const SentenceChainIndex& index);

/// Mean of |C_s \ C_{s+1}| / |C_s| over pairs with non-empty C_s.
std::optional<double> char_drop(const SentenceChainIndex& index);

/// Mean of |C_{s+1} \ C_s| / |C_{s+1}| over pairs with non-empty C_{s+1}.
std::optional<double> char_add(const SentenceChainIndex& index);

/// Fraction of pairs, among those with both sets non-empty, sharing no chain.
std::optional<double> char_change(const SentenceChainIndex& index);

/// Mean over chains of (s_max - s_min) / (N - 1).
std::optional<double> char_reappearance(const SentenceChainIndex& index);

/// Mean number of shared chains per pair, sum |C_s ∩ C_{s+1}| / (N - 1).
/// Can exceed 1; kept apart from char_transition.
std::optional<double> char_transition_count(const SentenceChainIndex& index);

/// Pairs of chains whose document-order extents interleave (neither nested
/// nor disjoint), divided by the number of chains. Absent below two chains.
///
/// Mentions are numbered by one pass over the document ordered by
/// (sentence, start, longer span first); a chain's extent runs from its first
/// to its last mention number.
std::optional<double> chain_crossing_index(const Story& story);

struct ChainSizeStats {
  std::size_t num_chains = 0;
  std::optional<double> mean_chain_size;
};

/// Counts every chain, character or not.
ChainSizeStats chain_size_stats(const Story& story);

struct StoryTextMetrics {
  std::optional<double> char_tr;
  std::optional<double> char_dr;
  std::optional<double> char_ad;
  std::optional<double> char_ch;
  std::optional<double> char_re;
  std::optional<double> char_tr_count;
  std::optional<double> cci;
  std::size_t num_chains = 0;
  std::optional<double> mean_chain_size;
};

/// All text metrics; transition metrics use `index` (character chains only),
/// CCI and chain sizes use every chain of `story`.
StoryTextMetrics text_metrics(const Story& story, const SentenceChainIndex& index);

}  // namespace corefscope
