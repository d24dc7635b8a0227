#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "brute_force.hpp"
#include "corefscope/errors.hpp"
#include "corefscope/labeling.hpp"
#include "corefscope/synth.hpp"
#include "helpers.hpp"

using namespace corefscope;
using namespace testing_helpers;

namespace {

std::vector<Realization> kinds_of(const Story& s, const Chain& c) {
  return realization_sequence(s, c, s.roster).sequence;
}

Realization classify(const std::string& text, std::vector<CharacterName> roster) {
  auto toks = words(text);
  return classify_mention(toks, roster);
}

}  // namespace

TEST(FoldCase, AsciiOnly) {
  EXPECT_EQ(fold_case("KeAnu"), "keanu");
  EXPECT_EQ(fold_case("\xC3\x89mile"), "\xC3\x89mile");
}

TEST(PronounLexicon, EnglishClosedList) {
  const auto& lex = PronounLexicon::english();
  for (const char* w : {"I", "me", "my", "mine", "myself", "you", "your", "yours", "yourself",
                        "yourselves", "he", "him", "his", "himself", "she", "her", "hers",
                        "herself", "it", "its", "itself", "we", "us", "our", "ours", "ourselves",
                        "they", "them", "their", "theirs", "themselves"})
    EXPECT_TRUE(lex.contains(w)) << w;
  EXPECT_TRUE(lex.contains("SHE"));
  EXPECT_FALSE(lex.contains("officer"));
  EXPECT_FALSE(lex.contains("who"));
  EXPECT_EQ(lex.size(), 31u);
}

TEST(PronounLexicon, FromStreamSkipsCommentsAndBlanks) {
  std::istringstream in("# comment\nelle\n\n  il  \nHe\n");
  auto lex = PronounLexicon::from_stream(in);
  EXPECT_EQ(lex.size(), 3u);
  EXPECT_TRUE(lex.contains("Elle"));
  EXPECT_TRUE(lex.contains("il"));
  EXPECT_TRUE(lex.contains("he"));
  EXPECT_FALSE(lex.contains("she"));
}

TEST(PronounLexicon, FromFile) {
  auto path = std::filesystem::temp_directory_path() / "corefscope_lexicon_test.txt";
  {
    std::ofstream out(path);
    out << "ella\n";
  }
  auto lex = PronounLexicon::from_file(path);
  EXPECT_TRUE(lex.contains("ella"));
  std::filesystem::remove(path);
  EXPECT_THROW(PronounLexicon::from_file(path), IoError);
}

TEST(ResolveCharacter, CanonicalAliasAndCase) {
  std::vector<CharacterName> roster = {{"Russell", {"Rusty"}}, {"Amy", {}}};
  EXPECT_EQ(resolve_character("russell", roster), 0u);
  EXPECT_EQ(resolve_character("RUSTY", roster), 0u);
  EXPECT_EQ(resolve_character("amy", roster), 1u);
  EXPECT_FALSE(resolve_character("Unknown", roster));
  EXPECT_TRUE(is_unknown_label("unknown"));
  EXPECT_FALSE(is_unknown_label("Amy"));
}

TEST(MatchCharacterChains, NameAndPronouns) {
  auto s = make_story({"Bruce smiled .", "he waved at him ."}, {{0, {{0, 0, 0}, {1, 0, 0}, {1, 3, 3}}}},
                      {{"Bruce", {}}});
  auto set = match_character_chains(s, s.roster);
  ASSERT_EQ(set.assignments.size(), 1u);
  EXPECT_EQ(set.assignments.at(ChainId{0}).canonical, "Bruce");
  EXPECT_TRUE(set.unlabeled.empty());
}

TEST(MatchCharacterChains, CommonNounChainUnlabeled) {
  auto s = make_story({"the officer smiled .", "he waved ."}, {{0, {{0, 0, 1}, {1, 0, 0}}}},
                      {{"Bruce", {}}});
  auto set = match_character_chains(s, s.roster);
  EXPECT_TRUE(set.assignments.empty());
  EXPECT_EQ(set.unlabeled, std::set<ChainId>{ChainId{0}});
}

TEST(MatchCharacterChains, PossessiveStripped) {
  auto s = make_story({"Ashley 's dog barked ."}, {{0, {{0, 0, 1}}}}, {{"Ashley", {}}});
  EXPECT_EQ(match_character_chains(s, s.roster).assignments.size(), 1u);

  auto glued = make_story({"Ashley's dog barked ."}, {{0, {{0, 0, 0}}}}, {{"Ashley", {}}});
  EXPECT_EQ(match_character_chains(glued, glued.roster).assignments.size(), 1u);

  auto curly = make_story({"Ashley \xE2\x80\x99s dog"}, {{0, {{0, 0, 1}}}}, {{"Ashley", {}}});
  EXPECT_EQ(match_character_chains(curly, curly.roster).assignments.size(), 1u);
}

TEST(MatchCharacterChains, TokenLevelNotSubstring) {
  auto s = make_story({"Tomorrow came ."}, {{0, {{0, 0, 0}}}}, {{"Tom", {}}});
  EXPECT_TRUE(match_character_chains(s, s.roster).assignments.empty());
}

TEST(MatchCharacterChains, CaseInsensitiveAlias) {
  auto s = make_story({"russell left ."}, {{0, {{0, 0, 0}}}}, {{"Russell Crowe", {"Russell"}}});
  auto set = match_character_chains(s, s.roster);
  ASSERT_EQ(set.assignments.size(), 1u);
  EXPECT_EQ(set.assignments.at(ChainId{0}).canonical, "Russell Crowe");
}

TEST(MatchCharacterChains, MultiWordNameNeedsContiguousRun) {
  std::vector<CharacterName> roster = {{"Mary Jane", {}}};
  auto run = make_story({"Mary Jane left ."}, {{0, {{0, 0, 1}}}}, roster);
  EXPECT_EQ(match_character_chains(run, roster).assignments.size(), 1u);
  auto split = make_story({"Mary and Jane left ."}, {{0, {{0, 0, 2}}}}, roster);
  EXPECT_TRUE(match_character_chains(split, roster).assignments.empty());
}

TEST(MatchCharacterChains, GroupChainOnlyPluralIsUnlabeled) {
  std::vector<CharacterName> roster = {{"Ashley", {}}, {"Val", {}}};
  auto s = make_story({"Ashley and Val left .", "they cried ."}, {{3, {{0, 0, 2}, {1, 0, 0}}}}, roster);
  auto set = match_character_chains(s, roster);
  EXPECT_TRUE(set.assignments.empty());
  EXPECT_EQ(set.unlabeled.size(), 1u);
}

TEST(MatchCharacterChains, MostFrequentCharacterWins) {
  std::vector<CharacterName> roster = {{"Ashley", {}}, {"Val", {}}};
  auto s = make_story({"Ashley and Val left .", "Val cried ."}, {{3, {{0, 0, 2}, {1, 0, 0}}}}, roster);
  auto set = match_character_chains(s, roster);
  ASSERT_EQ(set.assignments.size(), 1u);
  EXPECT_EQ(set.assignments.at(ChainId{3}).canonical, "Val");
}

TEST(MatchCharacterChains, TieGoesToEarliestFirstMatch) {
  std::vector<CharacterName> roster = {{"Ashley", {}}, {"Val", {}}};
  auto s = make_story({"Val left .", "Ashley cried ."}, {{3, {{0, 0, 0}, {1, 0, 0}}}}, roster);
  EXPECT_EQ(match_character_chains(s, roster).assignments.at(ChainId{3}).canonical, "Val");
}

TEST(ClassifyMention, Kinds) {
  EXPECT_EQ(classify("she", {}), Realization::P);
  EXPECT_EQ(classify("Ashley", {{"Ashley", {}}}), Realization::N);
  EXPECT_EQ(classify("Val and Ashley 's", {{"Val", {}}, {"Ashley", {}}}), Realization::N);
  EXPECT_EQ(classify("Ashley herself", {{"Ashley", {}}}), Realization::Both);
  EXPECT_EQ(classify("the officer", {{"Ashley", {}}}), Realization::Other);
  EXPECT_EQ(classify("Ashley", {}), Realization::Other);
}

TEST(ClassifyMention, CustomLexicon) {
  std::istringstream in("elle\n");
  auto lex = PronounLexicon::from_stream(in);
  auto toks = words("elle");
  EXPECT_EQ(classify_mention(toks, {}, lex), Realization::P);
  auto she = words("she");
  EXPECT_EQ(classify_mention(she, {}, lex), Realization::Other);
}

TEST(RealizationSequence, Examples) {
  auto s = make_story({"Keanu smiled .", "he raised his glass ."},
                      {{1, {{0, 0, 0}, {1, 0, 0}, {1, 2, 2}}}}, {{"Keanu", {}}});
  EXPECT_EQ(kinds_of(s, s.chains[0]), (std::vector{Realization::N, Realization::P, Realization::P}));

  auto single = make_story({"Bruce ."}, {{0, {{0, 0, 0}}}}, {{"Bruce", {}}});
  EXPECT_EQ(kinds_of(single, single.chains[0]), std::vector{Realization::N});

  auto pro = make_story({"she she she"}, {{0, {{0, 0, 0}, {0, 1, 1}, {0, 2, 2}}}});
  EXPECT_EQ(kinds_of(pro, pro.chains[0]),
            (std::vector{Realization::P, Realization::P, Realization::P}));
  EXPECT_EQ(realization_sequence(pro, pro.chains[0], {}).chain_id, ChainId{0});
}

TEST(CharacterChainSet, Accessors) {
  CharacterChainSet set;
  set.assignments[ChainId{1}] = {"A", {}};
  set.assignments[ChainId{4}] = {"A", {}};
  set.assignments[ChainId{2}] = {"B", {}};
  EXPECT_EQ(set.character_chains(), (std::set<ChainId>{ChainId{1}, ChainId{2}, ChainId{4}}));
  EXPECT_EQ(set.chains_of("A"), (std::set<ChainId>{ChainId{1}, ChainId{4}}));
  EXPECT_TRUE(set.chains_of("C").empty());
}

// Properties over random stories.

TEST(LabelingProperties, PartitionAndOracleAgreement) {
  synth::SplitMix64 rng(21);
  for (int i = 0; i < 1000; ++i) {
    auto b = synth::random_story(rng);
    auto set = match_character_chains(b.story, b.story.roster);
    EXPECT_EQ(set.assignments.size() + set.unlabeled.size(), b.story.chains.size());
    for (const auto& c : b.story.chains)
      EXPECT_NE(set.assignments.count(c.id), set.unlabeled.count(c.id));
    auto o = oracle::evaluate(b.story);
    ASSERT_EQ(o.labels.size(), set.assignments.size());
    for (const auto& [id, idx] : o.labels)
      EXPECT_EQ(set.assignments.at(ChainId{id}), b.story.roster[idx]);
  }
}

TEST(LabelingProperties, CaseInvariance) {
  synth::SplitMix64 rng(22);
  for (int i = 0; i < 1000; ++i) {
    auto b = synth::random_story(rng);
    Story upper = b.story;
    for (auto& sent : upper.sentences)
      for (auto& t : sent)
        for (auto& ch : t)
          if (ch >= 'a' && ch <= 'z') ch = static_cast<char>(ch - 32);
    auto a = match_character_chains(b.story, b.story.roster);
    auto u = match_character_chains(upper, upper.roster);
    EXPECT_EQ(a.assignments, u.assignments);
    for (const auto& c : b.story.chains)
      EXPECT_EQ(kinds_of(b.story, c), kinds_of(upper, c));
  }
}

// Adding a roster entry keeps every chain assigned, except a chain whose
// single-name mentions all also name the new character (they become plural).
TEST(LabelingProperties, MonotoneUnderRosterGrowth) {
  synth::SplitMix64 rng(23);
  std::size_t checked = 0;
  for (int i = 0; i < 1000; ++i) {
    auto b = synth::random_story(rng);
    if (b.story.roster.empty()) continue;
    std::vector<CharacterName> small(b.story.roster.begin(), b.story.roster.end() - 1);
    const auto& added = b.story.roster.back();
    auto before = match_character_chains(b.story, small);
    auto after = match_character_chains(b.story, b.story.roster);
    for (const auto& c : b.story.chains) {
      if (!before.assignments.count(c.id)) continue;
      ++checked;
      if (after.assignments.count(c.id)) continue;
      for (const auto& m : c.mentions) {
        auto toks = mention_tokens(b.story, m);
        if (characters_in_mention(toks, small).size() != 1) continue;
        std::vector<CharacterName> just_added = {added};
        EXPECT_EQ(characters_in_mention(toks, just_added).size(), 1u)
            << "chain lost its label without becoming plural";
      }
    }
  }
  EXPECT_GT(checked, 100u);
}

TEST(LabelingProperties, ClassifyIsPure) {
  std::vector<CharacterName> roster = {{"Ashley", {}}};
  auto toks = words("Ashley herself");
  auto copy = toks;
  EXPECT_EQ(classify_mention(toks, roster), classify_mention(toks, roster));
  EXPECT_EQ(toks, copy);
}
