#include "corefscope/synth.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>
#include <utility>

#include "corefscope/errors.hpp"

namespace corefscope::synth {

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::uint64_t SplitMix64::below(std::uint64_t n) {
  if (n == 0) throw InputError("below(0)");
  return next() % n;
}

double SplitMix64::normal() {
  double u1 = 1.0 - uniform();
  double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

namespace {

constexpr const char* kNames[] = {"Avery",  "Blake", "Casey",   "Devon", "Emery",  "Finley",
                                  "Harper", "Jordan", "Kendall", "Logan", "Morgan", "Parker",
                                  "Quinn",  "Riley",  "Sawyer",  "Taylor"};
constexpr std::size_t kNameCount = std::size(kNames);

using Matrix = std::vector<std::vector<bool>>;  // [character][position]

Matrix presence_matrix(const PresencePattern& pattern, std::size_t k, std::size_t n,
                       SplitMix64& rng) {
  Matrix m(k, std::vector<bool>(n, false));
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t s = 0; s < n; ++s) {
      switch (pattern.kind) {
        case PresenceKind::Dense: m[c][s] = true; break;
        case PresenceKind::Alternating: m[c][s] = s % k == c; break;
        case PresenceKind::Block: m[c][s] = c * n / k <= s && s < (c + 1) * n / k; break;
        case PresenceKind::Random: m[c][s] = rng.uniform() < pattern.p; break;
      }
    }
  }
  return m;
}

// Continuity of one row, from the pattern's closed form where it has one.
std::optional<double> row_continuity(const PresencePattern& pattern, std::size_t c, std::size_t k,
                                     std::size_t n, const std::vector<bool>& row) {
  switch (pattern.kind) {
    case PresenceKind::Dense: return n > 0 ? std::optional<double>(1.0) : std::nullopt;
    case PresenceKind::Alternating: {
      if (c >= n) return std::nullopt;
      std::size_t count = (n - 1 - c) / k + 1;
      return static_cast<double>(count) / static_cast<double>((count - 1) * k + 1);
    }
    case PresenceKind::Block:
      return c * n / k < (c + 1) * n / k ? std::optional<double>(1.0) : std::nullopt;
    case PresenceKind::Random: break;
  }
  std::size_t first = row.size(), last = 0, count = 0;
  for (std::size_t s = 0; s < row.size(); ++s) {
    if (!row[s]) continue;
    first = std::min(first, s);
    last = s;
    ++count;
  }
  if (count == 0) return std::nullopt;
  return static_cast<double>(count) / static_cast<double>(last - first + 1);
}

// Owner of sentence s when every sentence holds exactly one character.
std::size_t single_owner(const PresencePattern& pattern, std::size_t s, std::size_t k,
                         std::size_t n) {
  if (pattern.kind == PresenceKind::Alternating) return s % k;
  for (std::size_t c = 0; c < k; ++c)
    if (c * n / k <= s && s < (c + 1) * n / k) return c;
  return k;
}

StoryTextMetrics expected_transitions(const PresencePattern& pattern, std::size_t k,
                                      std::size_t n, const Matrix& text) {
  StoryTextMetrics t;
  if (n < 2) return t;
  const double pairs = static_cast<double>(n - 1);

  if (k == 0) {
    t.char_tr = 0.0;
    t.char_tr_count = 0.0;
    return t;
  }

  if (pattern.kind == PresenceKind::Dense) {
    t.char_tr = 1.0;
    t.char_dr = 0.0;
    t.char_ad = 0.0;
    t.char_ch = 0.0;
    t.char_re = 1.0;
    t.char_tr_count = static_cast<double>(k);
    return t;
  }

  if (pattern.kind != PresenceKind::Random) {
    // one character per sentence: every boundary either keeps or swaps it
    std::size_t swaps = 0;
    for (std::size_t s = 0; s + 1 < n; ++s)
      if (single_owner(pattern, s, k, n) != single_owner(pattern, s + 1, k, n)) ++swaps;
    double kept = static_cast<double>(n - 1 - swaps) / pairs;
    double swapped = static_cast<double>(swaps) / pairs;
    t.char_tr = kept;
    t.char_tr_count = kept;
    t.char_dr = swapped;
    t.char_ad = swapped;
    t.char_ch = swapped;
    double spread = 0.0;
    std::size_t chars = 0;
    for (std::size_t c = 0; c < k; ++c) {
      if (pattern.kind == PresenceKind::Alternating) {
        if (c >= n) continue;
        spread += static_cast<double>(k * ((n - 1 - c) / k)) / pairs;
      } else {
        std::size_t lo = c * n / k, hi = (c + 1) * n / k;
        if (lo == hi) continue;
        spread += static_cast<double>(hi - 1 - lo) / pairs;
      }
      ++chars;
    }
    t.char_re = spread / static_cast<double>(chars);
    return t;
  }

  // random presence: count straight off the matrix
  auto present = [&](std::size_t c, std::size_t s) { return static_cast<bool>(text[c][s]); };
  std::size_t shared_pairs = 0, shared_total = 0, change_pairs = 0, change_count = 0;
  double drop_sum = 0.0, add_sum = 0.0;
  std::size_t drop_n = 0, add_n = 0;
  for (std::size_t s = 0; s + 1 < n; ++s) {
    std::size_t here = 0, next = 0, both = 0;
    for (std::size_t c = 0; c < k; ++c) {
      here += present(c, s);
      next += present(c, s + 1);
      both += present(c, s) && present(c, s + 1);
    }
    shared_total += both;
    if (both > 0) ++shared_pairs;
    if (here > 0) {
      drop_sum += static_cast<double>(here - both) / static_cast<double>(here);
      ++drop_n;
    }
    if (next > 0) {
      add_sum += static_cast<double>(next - both) / static_cast<double>(next);
      ++add_n;
    }
    if (here > 0 && next > 0) {
      ++change_pairs;
      if (both == 0) ++change_count;
    }
  }
  t.char_tr = static_cast<double>(shared_pairs) / pairs;
  t.char_tr_count = static_cast<double>(shared_total) / pairs;
  if (drop_n) t.char_dr = drop_sum / static_cast<double>(drop_n);
  if (add_n) t.char_ad = add_sum / static_cast<double>(add_n);
  if (change_pairs) t.char_ch = static_cast<double>(change_count) / static_cast<double>(change_pairs);
  double spread = 0.0;
  std::size_t chars = 0;
  for (std::size_t c = 0; c < k; ++c) {
    std::optional<std::size_t> first, last;
    for (std::size_t s = 0; s < n; ++s) {
      if (!present(c, s)) continue;
      if (!first) first = s;
      last = s;
    }
    if (!first) continue;
    spread += static_cast<double>(*last - *first) / pairs;
    ++chars;
  }
  if (chars) t.char_re = spread / static_cast<double>(chars);
  return t;
}

std::string pattern_name(PresenceKind k) {
  switch (k) {
    case PresenceKind::Dense: return "dense";
    case PresenceKind::Alternating: return "alternating";
    case PresenceKind::Block: return "block";
    case PresenceKind::Random: return "random";
  }
  return "?";
}

std::vector<ImageAppearance> images_from(const std::vector<std::vector<std::string>>& per_image) {
  std::vector<ImageAppearance> out;
  for (std::size_t j = 0; j < per_image.size(); ++j) {
    ImageAppearance img;
    img.image_id = "img" + std::to_string(j);
    img.characters = per_image[j];
    std::sort(img.characters.begin(), img.characters.end());
    img.characters.erase(std::unique(img.characters.begin(), img.characters.end()),
                         img.characters.end());
    if (!img.characters.empty()) {
      std::vector<BoxArea> boxes;
      for (const auto& name : img.characters)
        boxes.push_back({name, 1.0 / static_cast<double>(img.characters.size() + 1)});
      img.boxes = std::move(boxes);
    }
    out.push_back(std::move(img));
  }
  return out;
}

}  // namespace

std::string character_name(std::size_t c) {
  if (c < kNameCount) return kNames[c];
  return "Person" + std::to_string(c);
}

Generated generate(const SynthParams& params) {
  const std::size_t n = params.n_sentences;
  const std::size_t k = params.n_characters;
  if (n == 0) throw InputError("n_sentences must be positive");
  for (const auto* pat : {&params.presence, &params.image_pattern})
    if (pat->kind == PresenceKind::Random && !(pat->p >= 0.0 && pat->p <= 1.0))
      throw InputError("presence probability must lie in [0, 1]");
  if (params.source_label.empty()) throw InputError("source_label must not be empty");

  SplitMix64 rng(params.seed);
  Matrix text = presence_matrix(params.presence, k, n, rng);
  Matrix image = presence_matrix(params.image_pattern, k, n, rng);

  Generated g;
  Story& story = g.bundle.story;
  story.story_id = "synth-" + std::to_string(params.seed);
  g.bundle.source_label = params.source_label;
  g.bundle.provenance["generator"] = "synth";
  g.bundle.provenance["presence"] = pattern_name(params.presence.kind);
  g.bundle.provenance["image_pattern"] = pattern_name(params.image_pattern.kind);
  for (std::size_t c = 0; c < k; ++c) story.roster.push_back({character_name(c), {}});

  // mention list in generation order, which is document order
  std::vector<std::pair<std::size_t, Mention>> order;
  std::vector<std::size_t> occurrences(k, 0);
  std::size_t words = 0;
  for (std::size_t s = 0; s < n; ++s) {
    Sentence sent;
    for (std::size_t c = 0; c < k; ++c) {
      if (!text[c][s]) continue;
      if (!sent.empty()) sent.push_back("and");
      std::size_t i = occurrences[c]++;
      bool name = params.realization == RealizationPattern::ConstantN ||
                  (params.realization == RealizationPattern::ConstantP && i == 0) ||
                  (params.realization == RealizationPattern::Alternating && i % 2 == 0);
      order.push_back({c, Mention{s, sent.size(), sent.size()}});
      sent.push_back(name ? character_name(c) : "they");
    }
    if (sent.empty()) {
      sent = {"Nothing", "happened", "."};
    } else {
      sent.push_back("walked");
      sent.push_back(".");
    }
    words += sent.size();
    story.sentences.push_back(std::move(sent));
  }

  std::map<std::size_t, Chain> chains;
  for (const auto& [c, m] : order) {
    auto& chain = chains[c];
    chain.id = ChainId{static_cast<std::int64_t>(c)};
    chain.mentions.push_back(m);
  }
  for (auto& [c, chain] : chains) story.chains.push_back(std::move(chain));

  std::vector<std::vector<std::string>> per_image(n);
  for (std::size_t c = 0; c < k; ++c)
    for (std::size_t j = 0; j < n; ++j)
      if (image[c][j]) per_image[j].push_back(character_name(c));
  story.images = ImageSequence{images_from(per_image)};

  Expected& e = g.expected;
  e.descriptives = {n, words, order.size()};

  e.text = expected_transitions(params.presence, k, n, text);
  const std::size_t n_chains = chains.size();
  e.text.num_chains = n_chains;
  if (n_chains > 0)
    e.text.mean_chain_size = static_cast<double>(order.size()) / static_cast<double>(n_chains);
  if (n_chains >= 2) {
    std::map<std::size_t, std::pair<std::size_t, std::size_t>> extent;
    for (std::size_t i = 0; i < order.size(); ++i) {
      auto [it, fresh] = extent.try_emplace(order[i].first, i, i);
      if (!fresh) it->second.second = i;
    }
    std::size_t crossings = 0;
    for (const auto& [a, ea] : extent)
      for (const auto& [b, eb] : extent)
        if (ea.first < eb.first && eb.first < ea.second && ea.second < eb.second) ++crossings;
    e.text.cci = static_cast<double>(crossings) / static_cast<double>(n_chains);
  }

  double consistency_sum = 0.0;
  std::size_t scored = 0;
  for (std::size_t c = 0; c < k; ++c) {
    ContinuityRecord r;
    r.character = story.roster[c];
    r.text = row_continuity(params.presence, c, k, n, text[c]);
    r.image = row_continuity(params.image_pattern, c, k, n, image[c]);
    if (r.text || r.image) {
      r.consistency = 1.0 - std::abs(r.text.value_or(0.0) - r.image.value_or(0.0));
      consistency_sum += *r.consistency;
      ++scored;
    }
    e.mcc.records.push_back(std::move(r));
  }
  if (scored) e.mcc.mcc = consistency_sum / static_cast<double>(scored);

  e.rec.word_count = words;
  double rec_sum = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    if (occurrences[c] == 0) continue;
    int v = params.realization != RealizationPattern::ConstantN && occurrences[c] >= 2 ? 1 : 0;
    e.rec.per_chain[ChainId{static_cast<std::int64_t>(c)}] = v;
    rec_sum += v;
  }
  if (!e.rec.per_chain.empty())
    e.rec.story_rec = rec_sum / static_cast<double>(e.rec.per_chain.size());
  return g;
}

StoryBundle perturb(const StoryBundle& bundle, Perturbation op, std::uint64_t seed) {
  StoryBundle out = bundle;
  Story& story = out.story;
  auto sort_mentions = [](Chain& ch) { std::sort(ch.mentions.begin(), ch.mentions.end()); };

  switch (op) {
    case Perturbation::ShuffleSentences: {
      const std::size_t n = story.sentences.size();
      if (n < 2) throw InputError("shuffle_sentences needs at least two sentences");
      std::vector<std::size_t> perm(n);  // perm[old] = new
      std::iota(perm.begin(), perm.end(), 0);
      SplitMix64 rng(seed);
      for (std::size_t i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
      std::vector<Sentence> sentences(n);
      for (std::size_t s = 0; s < n; ++s) sentences[perm[s]] = std::move(story.sentences[s]);
      story.sentences = std::move(sentences);
      for (auto& ch : story.chains) {
        for (auto& m : ch.mentions) m.sentence = perm[m.sentence];
        sort_mentions(ch);
      }
      break;
    }
    case Perturbation::SplitChain: {
      auto longest = story.chains.end();
      for (auto it = story.chains.begin(); it != story.chains.end(); ++it)
        if (it->mentions.size() >= 2 &&
            (longest == story.chains.end() || it->mentions.size() > longest->mentions.size()))
          longest = it;
      if (longest == story.chains.end())
        throw InputError("split_chain needs a chain with at least two mentions");
      std::int64_t next_id = 0;
      for (const auto& ch : story.chains) next_id = std::max(next_id, ch.id.value + 1);
      Chain tail{ChainId{next_id}, {}};
      std::size_t keep = (longest->mentions.size() + 1) / 2;
      tail.mentions.assign(longest->mentions.begin() + static_cast<std::ptrdiff_t>(keep),
                           longest->mentions.end());
      longest->mentions.resize(keep);
      story.chains.push_back(std::move(tail));
      break;
    }
    case Perturbation::MergeChains: {
      if (story.chains.size() < 2) throw InputError("merge_chains needs at least two chains");
      Chain merged = story.chains[0];
      merged.mentions.insert(merged.mentions.end(), story.chains[1].mentions.begin(),
                             story.chains[1].mentions.end());
      sort_mentions(merged);
      for (std::size_t i = 1; i < merged.mentions.size(); ++i) {
        const auto& a = merged.mentions[i - 1];
        const auto& b = merged.mentions[i];
        if (a.sentence == b.sentence && a.start == b.start)
          throw InputError("merge_chains: both chains have a mention starting at sentence " +
                           std::to_string(a.sentence) + ", token " + std::to_string(a.start));
      }
      story.chains[0] = std::move(merged);
      story.chains.erase(story.chains.begin() + 1);
      break;
    }
    case Perturbation::PronominalizeAll: {
      bool any = std::any_of(story.chains.begin(), story.chains.end(),
                             [](const Chain& ch) { return ch.mentions.size() >= 2; });
      if (!any) throw InputError("pronominalize_all needs a chain with at least two mentions");
      std::set<std::pair<std::size_t, std::size_t>> protected_tokens;
      for (const auto& ch : story.chains) {
        const Mention& m = ch.mentions.front();
        for (std::size_t t = m.start; t <= m.end; ++t) protected_tokens.insert({m.sentence, t});
      }
      for (const auto& ch : story.chains)
        for (std::size_t i = 1; i < ch.mentions.size(); ++i) {
          const Mention& m = ch.mentions[i];
          for (std::size_t t = m.start; t <= m.end; ++t)
            if (!protected_tokens.count({m.sentence, t})) story.sentences[m.sentence][t] = "they";
        }
      break;
    }
  }
  return out;
}

StoryBundle random_story(SplitMix64& rng, const RandomStoryLimits& limits) {
  if (limits.max_sentences == 0 || limits.max_tokens == 0)
    throw InputError("random_story needs room for one token");
  static constexpr const char* kPronouns[] = {"he", "she", "they", "him", "her", "his", "them",
                                              "He", "She"};
  static constexpr const char* kFiller[] = {"the", "officer", "and", "walked", "'s",
                                            ".",   "city",    "a",   "Unknown", "dog"};

  StoryBundle b;
  b.source_label = "random";
  Story& story = b.story;
  std::ostringstream id;
  id << "rand-" << std::hex << rng.next();
  story.story_id = id.str();

  // roster: distinct names, some multi-word, some with aliases
  std::vector<std::size_t> pool(kNameCount);
  std::iota(pool.begin(), pool.end(), 0);
  std::size_t n_chars = rng.below(std::min(limits.max_characters, kNameCount) + 1);
  for (std::size_t i = 0; i < n_chars; ++i) {
    std::swap(pool[i], pool[i + rng.below(kNameCount - i)]);
    CharacterName cn{kNames[pool[i]], {}};
    if (rng.below(5) == 0) cn.canonical += " Stone";
    if (rng.below(2) == 0) cn.aliases.push_back(std::string(kNames[pool[i]]).substr(0, 3));
    story.roster.push_back(std::move(cn));
  }

  auto split_words = [](const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string w; in >> w;) out.push_back(w);
    return out;
  };

  std::size_t n = 1 + rng.below(limits.max_sentences);
  for (std::size_t s = 0; s < n; ++s) {
    Sentence sent;
    std::size_t len = 1 + rng.below(limits.max_tokens);
    while (sent.size() < len) {
      std::uint64_t roll = rng.below(100);
      if (roll < 35 && !story.roster.empty()) {
        const auto& cn = story.roster[rng.below(story.roster.size())];
        std::string pick = cn.canonical;
        if (!cn.aliases.empty() && rng.below(3) == 0) pick = cn.aliases.front();
        auto words = split_words(pick);
        if (rng.below(4) == 0) words.front() = fold_case(words.front());
        if (rng.below(6) == 0) words.back() += "'s";
        sent.insert(sent.end(), words.begin(), words.end());
      } else if (roll < 60) {
        sent.push_back(kPronouns[rng.below(std::size(kPronouns))]);
      } else {
        sent.push_back(kFiller[rng.below(std::size(kFiller))]);
      }
    }
    story.sentences.push_back(std::move(sent));
  }

  std::set<Mention> used;
  std::size_t n_chains = rng.below(limits.max_chains + 1);
  std::int64_t step = 1 + static_cast<std::int64_t>(rng.below(3));
  for (std::size_t i = 0; i < n_chains; ++i) {
    Chain ch{ChainId{static_cast<std::int64_t>(i) * step}, {}};
    std::size_t m_count = 1 + rng.below(std::max<std::size_t>(limits.max_mentions, 1));
    std::set<std::pair<std::size_t, std::size_t>> starts;
    for (std::size_t j = 0; j < m_count; ++j) {
      Mention m;
      m.sentence = rng.below(n);
      std::size_t len = story.sentences[m.sentence].size();
      m.start = rng.below(len);
      m.end = m.start + rng.below(std::min<std::size_t>(3, len - m.start));
      if (used.count(m) || starts.count({m.sentence, m.start})) continue;
      used.insert(m);
      starts.insert({m.sentence, m.start});
      ch.mentions.push_back(m);
    }
    if (ch.mentions.empty()) continue;
    std::sort(ch.mentions.begin(), ch.mentions.end());
    story.chains.push_back(std::move(ch));
  }

  if (rng.below(5) != 0) {
    std::size_t k = rng.below(limits.max_images + 1);
    std::vector<std::vector<std::string>> per_image(k);
    for (auto& labels : per_image) {
      for (const auto& cn : story.roster) {
        if (rng.below(2) == 0) continue;
        switch (rng.below(4)) {
          case 0: labels.push_back(fold_case(cn.canonical)); break;
          case 1:
            labels.push_back(cn.aliases.empty() ? cn.canonical : cn.aliases.front());
            break;
          default: labels.push_back(cn.canonical);
        }
      }
      if (rng.below(6) == 0) labels.push_back("Unknown");
      if (rng.below(8) == 0) labels.push_back("Stranger");
    }
    story.images = ImageSequence{images_from(per_image)};
  }
  return b;
}

namespace {

Story two_character_story(const std::string& id, const std::vector<std::size_t>& owner) {
  Story story;
  story.story_id = id;
  story.roster = {{character_name(0), {}}, {character_name(1), {}}};
  std::map<std::size_t, Chain> chains;
  for (std::size_t s = 0; s < owner.size(); ++s) {
    story.sentences.push_back({character_name(owner[s]), "walked", "."});
    auto& ch = chains[owner[s]];
    ch.id = ChainId{static_cast<std::int64_t>(owner[s])};
    ch.mentions.push_back({s, 0, 0});
  }
  for (auto& [c, ch] : chains) story.chains.push_back(std::move(ch));
  return story;
}

double owner_continuity(const std::vector<std::size_t>& owner, std::size_t c) {
  std::size_t first = owner.size(), last = 0, count = 0;
  for (std::size_t s = 0; s < owner.size(); ++s) {
    if (owner[s] != c) continue;
    first = std::min(first, s);
    last = s;
    ++count;
  }
  return static_cast<double>(count) / static_cast<double>(last - first + 1);
}

std::string padded(std::size_t i) {
  std::string s = std::to_string(i);
  return std::string(s.size() < 5 ? 5 - s.size() : 0, '0') + s;
}

}  // namespace

std::vector<StoryBundle> correlated_corpus(const CalibrationParams& params) {
  const std::size_t n = params.n_sentences;
  if (n < 3) throw InputError("calibration stories need at least three sentences");
  if (!(params.target_rho > -1.0 && params.target_rho < 1.0))
    throw InputError("target_rho must lie strictly inside (-1, 1)");
  if (params.noise_sd < 0.0) throw InputError("noise_sd must be non-negative");

  const double nd = static_cast<double>(n);
  const double sd_x = std::sqrt((nd * nd - 1.0) / 12.0) / (nd - 1.0);
  const double rho = params.target_rho;
  const double slope = rho * params.noise_sd / (sd_x * std::sqrt(1.0 - rho * rho));

  SplitMix64 rng(params.seed);
  std::vector<StoryBundle> out;
  for (std::size_t i = 0; i < params.n_stories; ++i) {
    std::size_t switches = rng.below(n);
    std::vector<std::size_t> boundaries(n - 1);
    std::iota(boundaries.begin(), boundaries.end(), 0);
    for (std::size_t j = 0; j < switches; ++j)
      std::swap(boundaries[j], boundaries[j + rng.below(n - 1 - j)]);
    std::vector<bool> flip(n - 1, false);
    for (std::size_t j = 0; j < switches; ++j) flip[boundaries[j]] = true;
    std::vector<std::size_t> owner(n, 0);
    for (std::size_t s = 1; s < n; ++s) owner[s] = flip[s - 1] ? 1 - owner[s - 1] : owner[s - 1];

    double x = static_cast<double>(switches) / (nd - 1.0);
    double y = params.mean_mcc + slope * (x - 0.5) + params.noise_sd * rng.normal();
    double gap = 1.0 - std::clamp(y, 0.5, 1.0);

    // each character's images span the whole sequence, with enough holes
    // that image continuity sits `gap` away from text continuity
    std::vector<std::vector<std::string>> per_image(n);
    for (std::size_t c = 0; c < 2; ++c) {
      if (std::find(owner.begin(), owner.end(), c) == owner.end()) continue;
      double t = owner_continuity(owner, c);
      double target = t + gap <= 1.0 ? t + gap : t - gap;
      auto present = static_cast<std::size_t>(std::lround(target * nd));
      present = std::clamp<std::size_t>(present, 2, n);
      std::vector<std::size_t> interior(n - 2);
      std::iota(interior.begin(), interior.end(), 1);
      for (std::size_t j = 0; j < present - 2; ++j)
        std::swap(interior[j], interior[j + rng.below(interior.size() - j)]);
      per_image[0].push_back(character_name(c));
      per_image[n - 1].push_back(character_name(c));
      for (std::size_t j = 0; j < present - 2; ++j) per_image[interior[j]].push_back(character_name(c));
    }

    StoryBundle b;
    b.story = two_character_story(params.source_label + "-" + padded(i), owner);
    b.story.images = ImageSequence{images_from(per_image)};
    b.source_label = params.source_label;
    b.provenance["generator"] = "calibration";
    out.push_back(std::move(b));
  }
  return out;
}

std::vector<StoryBundle> switch_rate_corpus(const SwitchRateParams& params) {
  const std::size_t n = params.n_sentences;
  if (n < 2) throw InputError("switch-rate stories need at least two sentences");
  if (!(params.switch_rate >= 0.0 && params.switch_rate <= 1.0))
    throw InputError("switch_rate must lie in [0, 1]");

  SplitMix64 rng(params.seed);
  std::vector<StoryBundle> out;
  for (std::size_t i = 0; i < params.n_stories; ++i) {
    std::vector<std::size_t> owner(n, 0);
    for (std::size_t s = 1; s < n; ++s)
      owner[s] = rng.uniform() < params.switch_rate ? 1 - owner[s - 1] : owner[s - 1];
    std::vector<std::string> cast;
    for (std::size_t c = 0; c < 2; ++c)
      if (std::find(owner.begin(), owner.end(), c) != owner.end())
        cast.push_back(character_name(c));

    StoryBundle b;
    b.story = two_character_story(params.source_label + "-" + padded(i), owner);
    b.story.images = ImageSequence{images_from(std::vector<std::vector<std::string>>(n, cast))};
    b.source_label = params.source_label;
    b.provenance["generator"] = "switch_rate";
    out.push_back(std::move(b));
  }
  return out;
}

}  // namespace corefscope::synth
