#include "corefscope/metrics_text.hpp"

#include <algorithm>
#include <map>
#include <tuple>

namespace corefscope {

namespace {

std::size_t intersection_size(const std::set<ChainId>& a, const std::set<ChainId>& b) {
  std::size_t n = 0;
  for (ChainId id : a) n += b.contains(id);
  return n;
}

class MeanAccumulator {
 public:
  void add(double v) {
    sum_ += v;
    ++count_;
  }
  std::optional<double> mean() const {
    if (count_ == 0) return std::nullopt;
    return sum_ / static_cast<double>(count_);
  }

 private:
  double sum_ = 0.0;
  std::size_t count_ = 0;
};

}  // namespace

std::vector<TransitionRecord> transitions(const SentenceChainIndex& index) {
  std::vector<TransitionRecord> out;
  const auto& cs = index.per_sentence;
  for (std::size_t s = 0; s + 1 < cs.size(); ++s) {
    const auto& cur = cs[s];
    const auto& next = cs[s + 1];
    const std::size_t shared = intersection_size(cur, next);
    TransitionRecord rec;
    rec.pair = s;
    rec.shared = shared > 0;
    if (!cur.empty()) {
      rec.drop_ratio = static_cast<double>(cur.size() - shared) / static_cast<double>(cur.size());
    }
    if (!next.empty()) {
      rec.add_ratio = static_cast<double>(next.size() - shared) / static_cast<double>(next.size());
    }
    if (!cur.empty() && !next.empty()) rec.change = shared == 0;
    out.push_back(rec);
  }
  return out;
}

std::optional<double> char_transition(const SentenceChainIndex& index) {
  MeanAccumulator acc;
  for (const auto& t : transitions(index)) acc.add(t.shared ? 1.0 : 0.0);
  return acc.mean();
}

std::optional<double> char_drop(const SentenceChainIndex& index) {
  MeanAccumulator acc;
  for (const auto& t : transitions(index)) {
    if (t.drop_ratio) acc.add(*t.drop_ratio);
  }
  return acc.mean();
}

std::optional<double> char_add(const SentenceChainIndex& index) {
  MeanAccumulator acc;
  for (const auto& t : transitions(index)) {
    if (t.add_ratio) acc.add(*t.add_ratio);
  }
  return acc.mean();
}

std::optional<double> char_change(const SentenceChainIndex& index) {
  MeanAccumulator acc;
  for (const auto& t : transitions(index)) {
    if (t.change) acc.add(*t.change ? 1.0 : 0.0);
  }
  return acc.mean();
}

std::optional<double> char_reappearance(const SentenceChainIndex& index) {
  const std::size_t n = index.sentence_count();
  if (n < 2) return std::nullopt;
  std::map<ChainId, std::pair<std::size_t, std::size_t>> spread;
  for (std::size_t s = 0; s < n; ++s) {
    for (ChainId id : index.per_sentence[s]) {
      auto [it, fresh] = spread.try_emplace(id, s, s);
      it->second.second = s;
    }
  }
  if (spread.empty()) return std::nullopt;
  // Integer total first so the result does not depend on chain order.
  std::size_t total = 0;
  for (const auto& [id, range] : spread) total += range.second - range.first;
  return static_cast<double>(total) / static_cast<double>((n - 1) * spread.size());
}

std::optional<double> char_transition_count(const SentenceChainIndex& index) {
  const auto& cs = index.per_sentence;
  if (cs.size() < 2) return std::nullopt;
  std::size_t shared = 0;
  for (std::size_t s = 0; s + 1 < cs.size(); ++s) shared += intersection_size(cs[s], cs[s + 1]);
  return static_cast<double>(shared) / static_cast<double>(cs.size() - 1);
}

std::optional<double> chain_crossing_index(const Story& story) {
  const std::size_t k = story.chains.size();
  if (k < 2) return std::nullopt;

  struct Placed {
    std::size_t sentence, start, end, chain;
  };
  std::vector<Placed> all;
  for (std::size_t c = 0; c < k; ++c) {
    for (const auto& m : story.chains[c].mentions) all.push_back({m.sentence, m.start, m.end, c});
  }
  std::sort(all.begin(), all.end(), [](const Placed& a, const Placed& b) {
    return std::tuple(a.sentence, a.start, b.end) < std::tuple(b.sentence, b.start, a.end);
  });

  constexpr auto kUnset = static_cast<std::size_t>(-1);
  std::vector<std::pair<std::size_t, std::size_t>> extent(k, {kUnset, 0});
  for (std::size_t pos = 0; pos < all.size(); ++pos) {
    auto& e = extent[all[pos].chain];
    if (e.first == kUnset) e.first = pos;
    e.second = pos;
  }

  std::size_t crossings = 0;
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) {
      const auto [a1, a2] = extent[a];
      const auto [b1, b2] = extent[b];
      if (a1 == kUnset || b1 == kUnset) continue;
      if ((a1 < b1 && b1 < a2 && a2 < b2) || (b1 < a1 && a1 < b2 && b2 < a2)) ++crossings;
    }
  }
  return static_cast<double>(crossings) / static_cast<double>(k);
}

ChainSizeStats chain_size_stats(const Story& story) {
  ChainSizeStats stats;
  stats.num_chains = story.chains.size();
  if (stats.num_chains > 0) {
    std::size_t mentions = 0;
    for (const auto& c : story.chains) mentions += c.mentions.size();
    stats.mean_chain_size = static_cast<double>(mentions) / static_cast<double>(stats.num_chains);
  }
  return stats;
}

StoryTextMetrics text_metrics(const Story& story, const SentenceChainIndex& index) {
  StoryTextMetrics m;
  m.char_tr = char_transition(index);
  m.char_dr = char_drop(index);
  m.char_ad = char_add(index);
  m.char_ch = char_change(index);
  m.char_re = char_reappearance(index);
  m.char_tr_count = char_transition_count(index);
  m.cci = chain_crossing_index(story);
  const auto sizes = chain_size_stats(story);
  m.num_chains = sizes.num_chains;
  m.mean_chain_size = sizes.mean_chain_size;
  return m;
}

}  // namespace corefscope
