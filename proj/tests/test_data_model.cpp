#include <gtest/gtest.h>

#include "corefscope/data_model.hpp"
#include "corefscope/errors.hpp"
#include "corefscope/synth.hpp"
#include "helpers.hpp"

using namespace corefscope;
using namespace testing_helpers;

namespace {

std::vector<ViolationKind> kinds(const Story& s) {
  std::vector<ViolationKind> out;
  for (const auto& v : validate_story(s)) out.push_back(v.kind);
  return out;
}

}  // namespace

TEST(ValidateStory, WellFormedTwoSentenceStory) {
  auto s = make_story({"Bruce runs .", "He stops ."}, {{0, {{0, 0, 0}, {1, 0, 0}}}});
  EXPECT_TRUE(validate_story(s).empty());
}

TEST(ValidateStory, SpanPastSentenceEnd) {
  auto s = make_story({"Bruce runs ."}, {{0, {{0, 1, 3}}}});
  EXPECT_EQ(kinds(s), std::vector{ViolationKind::SpanOutOfRange});
}

TEST(ValidateStory, StartAfterEnd) {
  auto s = make_story({"Bruce runs ."}, {{0, {{0, 2, 1}}}});
  EXPECT_EQ(kinds(s), std::vector{ViolationKind::SpanOutOfRange});
}

TEST(ValidateStory, SentenceIndexOutOfRange) {
  auto s = make_story({"Bruce runs ."}, {{0, {{1, 0, 0}}}});
  EXPECT_EQ(kinds(s), std::vector{ViolationKind::SpanOutOfRange});
}

TEST(ValidateStory, SwappedMentionsAreUnordered) {
  auto s = make_story({"Bruce runs .", "He stops ."}, {{0, {{0, 0, 0}, {1, 0, 0}}}});
  std::swap(s.chains[0].mentions[0], s.chains[0].mentions[1]);
  EXPECT_EQ(kinds(s), std::vector{ViolationKind::UnorderedChain});
}

TEST(ValidateStory, SameStartTwiceIsUnordered) {
  auto s = make_story({"Bruce Wayne runs ."}, {{0, {{0, 0, 0}, {0, 0, 1}}}});
  EXPECT_EQ(kinds(s), std::vector{ViolationKind::UnorderedChain});
}

TEST(ValidateStory, StructuralViolations) {
  Story empty;
  EXPECT_EQ(kinds(empty), std::vector{ViolationKind::EmptyStory});

  auto s = make_story({"a"});
  s.sentences.push_back({});
  EXPECT_EQ(kinds(s), std::vector{ViolationKind::EmptySentence});

  auto c = make_story({"a b"}, {{0, {}}});
  EXPECT_EQ(kinds(c), std::vector{ViolationKind::EmptyChain});

  auto shared = make_story({"a b"}, {{0, {{0, 0, 0}}}, {1, {{0, 0, 0}}}});
  EXPECT_EQ(kinds(shared), std::vector{ViolationKind::SharedMention});

  auto dup = make_story({"a b"}, {{0, {{0, 0, 0}}}, {0, {{0, 1, 1}}}});
  EXPECT_EQ(kinds(dup), std::vector{ViolationKind::DuplicateChainId});

  auto roster = make_story({"a"}, {}, {{"", {}}});
  EXPECT_EQ(kinds(roster), std::vector{ViolationKind::EmptyCharacterName});

  auto boxes = make_story({"a"});
  ImageAppearance img{"i0", {"A"}, std::vector<BoxArea>{{"A", 1.5}}};
  boxes.images = ImageSequence{{img}};
  EXPECT_EQ(kinds(boxes), std::vector{ViolationKind::BoxAreaOutOfRange});
}

TEST(ValidateStory, NestedSpansAcrossChainsAllowed) {
  auto s = make_story({"Ashley and Val left ."}, {{0, {{0, 0, 2}}}, {1, {{0, 0, 0}}}, {2, {{0, 2, 2}}}});
  EXPECT_TRUE(validate_story(s).empty());
}

TEST(ValidateStory, ReportsEveryViolation) {
  auto s = make_story({"a b"}, {{0, {{0, 0, 5}}}, {0, {{0, 1, 1}}}});
  EXPECT_EQ(validate_story(s).size(), 2u);
}

TEST(ValidateStory, IdempotentAndPure) {
  synth::SplitMix64 rng(5);
  for (int i = 0; i < 200; ++i) {
    auto b = synth::random_story(rng);
    auto copy = b.story;
    auto first = validate_story(b.story);
    auto second = validate_story(b.story);
    ASSERT_EQ(first.size(), second.size());
    EXPECT_TRUE(first.empty());
    EXPECT_EQ(copy, b.story);
  }
}

TEST(MentionTokens, SliceAndText) {
  auto s = make_story({"the tall officer smiled"});
  EXPECT_EQ(mention_text(s, {0, 1, 2}), "tall officer");
  EXPECT_EQ(mention_tokens(s, {0, 3, 3}).size(), 1u);
  EXPECT_THROW(mention_tokens(s, {0, 2, 4}), InputError);
  EXPECT_EQ(Mention({0, 1, 2}).width(), 2u);
}

TEST(SentenceChainIndex, ScanOfMentions) {
  auto s = make_story({"a b", "c d", "e f"}, {{1, {{0, 0, 0}, {2, 1, 1}}}, {2, {{1, 0, 0}}}});
  auto idx = sentence_chain_index(s, {ChainId{1}, ChainId{2}});
  EXPECT_EQ(idx, index_of({{1}, {2}, {1}}));
}

TEST(SentenceChainIndex, NoCharacterChains) {
  auto s = make_story({"a b", "c d"}, {{1, {{0, 0, 0}}}});
  auto idx = sentence_chain_index(s, {});
  EXPECT_EQ(idx, index_of({{}, {}}));
}

TEST(SentenceChainIndex, TwoMentionsInOneSentenceCountOnce) {
  auto s = make_story({"he saw himself"}, {{7, {{0, 0, 0}, {0, 2, 2}}}});
  auto idx = sentence_chain_index(s, {ChainId{7}});
  ASSERT_EQ(idx.per_sentence.size(), 1u);
  EXPECT_EQ(idx.per_sentence[0].size(), 1u);
}

TEST(SentenceChainIndex, UnknownChainRejected) {
  auto s = make_story({"a"}, {{1, {{0, 0, 0}}}});
  EXPECT_THROW(sentence_chain_index(s, {ChainId{2}}), InputError);
}

TEST(SentenceChainIndex, UnionIsExactlyMentionedChains) {
  synth::SplitMix64 rng(11);
  for (int i = 0; i < 300; ++i) {
    auto b = synth::random_story(rng);
    std::set<ChainId> all;
    for (const auto& c : b.story.chains) all.insert(c.id);
    auto idx = sentence_chain_index(b.story, all);
    EXPECT_EQ(idx.chains(), all);
    for (const auto& cs : idx.per_sentence) EXPECT_LE(cs.size(), all.size());
  }
}

TEST(Descriptives, NoChains) {
  auto s = make_story({"one two three four five"});
  EXPECT_EQ(story_descriptives(s), (Descriptives{1, 5, 0}));
}

TEST(Descriptives, CoveredPositions) {
  auto s = make_story({"a b c d", "e f g h"}, {{0, {{0, 0, 1}, {1, 0, 1}}}});
  EXPECT_EQ(story_descriptives(s), (Descriptives{2, 8, 4}));
}

TEST(Descriptives, OverlapCountsOnce) {
  auto s = make_story({"Ashley and Val left ."}, {{0, {{0, 0, 2}}}, {1, {{0, 0, 0}}}, {2, {{0, 2, 2}}}});
  EXPECT_EQ(story_descriptives(s).words_as_mentions, 3u);
}

TEST(Descriptives, PunctuationCounts) {
  auto s = make_story({". , !"});
  EXPECT_EQ(story_descriptives(s).words, 3u);
}

TEST(Descriptives, BoundedByWordsAndRelabelingInvariant) {
  synth::SplitMix64 rng(12);
  for (int i = 0; i < 300; ++i) {
    auto b = synth::random_story(rng);
    auto d = story_descriptives(b.story);
    EXPECT_LE(d.words_as_mentions, d.words);

    Story relabeled = b.story;
    std::set<ChainId> old_ids, new_ids;
    for (auto& c : relabeled.chains) {
      old_ids.insert(c.id);
      c.id = ChainId{1000 - c.id.value};
      new_ids.insert(c.id);
    }
    EXPECT_EQ(story_descriptives(relabeled), d);
    auto a = sentence_chain_index(b.story, old_ids);
    auto r = sentence_chain_index(relabeled, new_ids);
    ASSERT_EQ(a.per_sentence.size(), r.per_sentence.size());
    for (std::size_t s = 0; s < a.per_sentence.size(); ++s) {
      std::set<ChainId> mapped;
      for (auto id : a.per_sentence[s]) mapped.insert(ChainId{1000 - id.value});
      EXPECT_EQ(mapped, r.per_sentence[s]);
    }
  }
}

TEST(ViolationKind, Names) {
  EXPECT_STREQ(to_string(ViolationKind::SpanOutOfRange), "SpanOutOfRange");
  EXPECT_STREQ(to_string(ViolationKind::UnorderedChain), "UnorderedChain");
}
