#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "corefscope/errors.hpp"
#include "corefscope/ingest.hpp"
#include "corefscope/synth.hpp"
#include "helpers.hpp"

using namespace corefscope;
using namespace testing_helpers;

namespace {

std::string doc(const std::string& name, std::initializer_list<std::pair<std::string, std::string>> tokens) {
  std::string out = "#begin document (" + name + "); part 000\n";
  std::size_t i = 0;
  for (const auto& [w, c] : tokens) {
    if (w.empty()) {
      out += "\n";
      i = 0;
      continue;
    }
    out += name + " 0 " + std::to_string(i++) + " " + w + " " + c + "\n";
  }
  out += "\n#end document\n";
  return out;
}

// Story content that survives CoNLL: sentences and chains only.
void expect_same_structure(const Story& a, const Story& b) {
  EXPECT_EQ(a.sentences, b.sentences);
  EXPECT_EQ(a.chains, b.chains);
}

}  // namespace

TEST(Conll, OpenThenCloseIsOneMention) {
  auto out = parse_conll_coref(doc("d", {{"Bruce", "(0"}, {"Wayne", "0)"}}));
  ASSERT_EQ(out.size(), 1u);
  const auto& s = out[0].story;
  ASSERT_EQ(s.chains.size(), 1u);
  EXPECT_EQ(s.chains[0].id, ChainId{0});
  EXPECT_EQ(s.chains[0].mentions, (std::vector<Mention>{{0, 0, 1}}));
  EXPECT_EQ(s.story_id, "d");
}

TEST(Conll, SingleTokenMention) {
  auto out = parse_conll_coref(doc("d", {{"Bruce", "(0)"}, {"runs", "-"}}));
  EXPECT_EQ(out[0].story.chains[0].mentions, (std::vector<Mention>{{0, 0, 0}}));
}

TEST(Conll, UnclosedBracketReportsLine) {
  try {
    parse_conll_coref(doc("d", {{"Bruce", "(0"}, {"runs", "-"}}));
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_GT(e.line(), 0u);
    EXPECT_NE(e.message().find("unbalanced"), std::string::npos);
  }
}

TEST(Conll, StrayCloseIsParseError) {
  EXPECT_THROW(parse_conll_coref(doc("d", {{"Bruce", "0)"}})), ParseError);
}

TEST(Conll, MissingColumnsAndEmptyDocument) {
  EXPECT_THROW(parse_conll_coref("#begin document (d); part 000\nd 0 Bruce\n#end document\n"), ParseError);
  EXPECT_THROW(parse_conll_coref("#begin document (d); part 000\n\n#end document\n"), ParseError);
  EXPECT_THROW(parse_conll_coref(doc("d", {{"Bruce", "(x)"}})), ParseError);
}

TEST(Conll, NestedAndMultiplePieces) {
  auto out = parse_conll_coref(doc("d", {{"Ashley", "(0|(1)"}, {"and", "-"}, {"Val", "(2)|0)"}, {"left", "-"}}));
  const auto& s = out[0].story;
  ASSERT_EQ(s.chains.size(), 3u);
  EXPECT_EQ(s.chains[0].mentions, (std::vector<Mention>{{0, 0, 2}}));
  EXPECT_EQ(s.chains[1].mentions, (std::vector<Mention>{{0, 0, 0}}));
  EXPECT_EQ(s.chains[2].mentions, (std::vector<Mention>{{0, 2, 2}}));
}

TEST(Conll, SentencesAndColumnLayouts) {
  std::string text =
      "#begin document (x); part 002\n"
      "x 0 0 Bruce NNP * (5)\n"
      "x 0 1 runs VBZ * -\n"
      "\n"
      "x 0 0 He PRP * (5)\n"
      "#end document\n";
  auto out = parse_conll_coref(text, "human");
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].story.story_id, "x_part2");
  EXPECT_EQ(out[0].source_label, "human");
  EXPECT_EQ(out[0].story.sentences, (std::vector<Sentence>{{"Bruce", "runs"}, {"He"}}));
  EXPECT_EQ(out[0].story.chains[0].mentions, (std::vector<Mention>{{0, 0, 0}, {1, 0, 0}}));
}

TEST(Conll, LenientReaderSkipsMalformedDocument) {
  std::string text;
  for (int i = 0; i < 10; ++i) {
    const std::string name = "doc" + std::to_string(i);
    if (i == 4) {
      text += doc(name, {{"Bruce", "(0"}, {"runs", "-"}});
    } else {
      text += doc(name, {{"Bruce", "(0)"}, {"runs", "-"}});
    }
  }
  std::istringstream in(text);
  auto r = read_conll(in, "human");
  EXPECT_EQ(r.records.size(), 9u);
  ASSERT_EQ(r.diagnostics.size(), 1u);
  EXPECT_GT(r.diagnostics[0].line, 0u);
  for (const auto& b : r.records) EXPECT_NE(b.story.story_id, "doc4");
}

TEST(Conll, WriterEmitsCanonicalBrackets) {
  auto s = make_story({"Ashley and Val left ."}, {{0, {{0, 0, 2}}}, {1, {{0, 0, 0}}}, {2, {{0, 2, 2}}}});
  auto col = conll_coref_column(s);
  EXPECT_EQ(col[0], (std::vector<std::string>{"(0|(1)", "-", "0)|(2)", "-", "-"}));
}

TEST(Conll, WriterRejectsInterleavedSameChainMentions) {
  auto s = make_story({"a b c d"}, {{0, {{0, 0, 2}, {0, 1, 3}}}});
  EXPECT_THROW(conll_coref_column(s), InputError);
}

TEST(Conll, RoundTripPreservesStructureAndBrackets) {
  synth::SplitMix64 rng(21);
  int checked = 0;
  for (int i = 0; i < 500; ++i) {
    auto b = synth::random_story(rng);
    std::vector<std::vector<std::string>> column;
    try {
      column = conll_coref_column(b.story);
    } catch (const InputError&) {
      continue;
    }
    std::ostringstream os;
    write_conll(std::span(&b, 1), os);
    auto back = parse_conll_coref(os.str(), b.source_label);
    ASSERT_EQ(back.size(), 1u);
    expect_same_structure(back[0].story, b.story);
    EXPECT_EQ(conll_coref_column(back[0].story), column);

    // Distinct ids in the column are exactly the chains.
    std::set<std::int64_t> ids;
    for (const auto& sent : column) {
      for (const auto& field : sent) {
        if (field == "-") continue;
        std::string digits;
        for (char c : field + "|") {
          if (c >= '0' && c <= '9') {
            digits += c;
          } else if (!digits.empty() && (c == '|' || c == ')')) {
            ids.insert(std::stoll(digits));
            digits.clear();
          }
        }
      }
    }
    EXPECT_EQ(ids.size(), b.story.chains.size());
    ++checked;
  }
  EXPECT_GT(checked, 400);
}

TEST(Jsonl, ParsesMinimalRecord) {
  auto b = parse_story_jsonl(
      R"({"story_id":"s1","source_label":"human","sentences":[["Bruce","runs","."]],)"
      R"("chains":[[{"sentence":0,"start":0,"end":0}]],"roster":[{"canonical":"Bruce","aliases":[]}]})");
  EXPECT_EQ(b.story.story_id, "s1");
  EXPECT_EQ(b.source_label, "human");
  EXPECT_EQ(b.story.chains[0].id, ChainId{0});
  EXPECT_EQ(b.story.roster[0].canonical, "Bruce");
  EXPECT_FALSE(b.story.images.has_value());
}

TEST(Jsonl, SpanOutOfRangeIsParseError) {
  EXPECT_THROW(parse_story_jsonl(R"({"story_id":"s","source_label":"h","sentences":[["a"]],)"
                                 R"("chains":[[{"sentence":0,"start":0,"end":3}]]})"),
               ParseError);
}

TEST(Jsonl, ErrorNamesField) {
  try {
    parse_story_jsonl(R"({"story_id":"s","source_label":"h","sentences":[["a"]],"chains":[[{"sentence":0,"start":"x","end":0}]]})");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(e.message().find("start"), std::string::npos) << e.message();
  }
  EXPECT_THROW(parse_story_jsonl("not json"), ParseError);
  EXPECT_THROW(parse_story_jsonl("[1,2]"), ParseError);
}

TEST(Jsonl, ImagesOmittedWhenAbsentAndNonDefaultIdsKept) {
  auto s = make_story({"Bruce runs ."}, {{7, {{0, 0, 0}}}});
  auto line = to_jsonl(bundle_of(s));
  EXPECT_EQ(line.find("\"images\""), std::string::npos);
  EXPECT_NE(line.find("\"chain_ids\":[7]"), std::string::npos);
  EXPECT_EQ(line.find('\n'), std::string::npos);
  EXPECT_EQ(parse_story_jsonl(line).story, s);
}

TEST(Jsonl, RoundTripIdentity) {
  synth::SplitMix64 rng(22);
  std::vector<StoryBundle> bundles;
  for (int i = 0; i < 500; ++i) bundles.push_back(synth::random_story(rng));
  bundles[0].provenance["origin"] = "a \"quoted\" value";
  std::ostringstream os;
  write_jsonl(bundles, os);
  std::istringstream in(os.str());
  auto back = read_jsonl(in);
  EXPECT_TRUE(back.diagnostics.empty());
  ASSERT_EQ(back.records.size(), bundles.size());
  for (std::size_t i = 0; i < bundles.size(); ++i) EXPECT_EQ(back.records[i], bundles[i]);
}

TEST(Jsonl, EmptyInputAndBlankLines) {
  std::ostringstream os;
  write_jsonl(std::vector<StoryBundle>{}, os);
  EXPECT_EQ(os.str(), "");
  std::istringstream in("\n\n");
  auto r = read_jsonl(in);
  EXPECT_TRUE(r.records.empty());
  EXPECT_TRUE(r.diagnostics.empty());
}

TEST(Jsonl, LenientReaderReportsLine) {
  auto good = to_jsonl(bundle_of(make_story({"a"})));
  std::istringstream in(good + "\n{broken\n" + good + "\n");
  auto r = read_jsonl(in);
  EXPECT_EQ(r.records.size(), 2u);
  ASSERT_EQ(r.diagnostics.size(), 1u);
  EXPECT_EQ(r.diagnostics[0].line, 2u);
}

TEST(Jsonl, FailingSinkIsIoError) {
  std::ostringstream os;
  os.setstate(std::ios::badbit);
  std::vector<StoryBundle> one{bundle_of(make_story({"a"}))};
  EXPECT_THROW(write_jsonl(one, os), IoError);
  EXPECT_THROW(write_conll(one, os), IoError);
}

TEST(Sidecar, ParseAndAttach) {
  auto rec = parse_sidecar_line(
      R"({"story_id":"k","roster":[{"canonical":"Keanu","aliases":[]},{"canonical":"Charlize","aliases":[]}],)"
      R"("images":[{"image_id":"0","characters":["Keanu","Charlize"]},{"image_id":"1","characters":["Keanu","Charlize"]},)"
      R"({"image_id":"2","characters":["Keanu","Charlize"]},{"image_id":"3","characters":["Keanu","Charlize"]},)"
      R"({"image_id":"4","characters":["Keanu","Charlize"]}]})");
  EXPECT_EQ(rec.story_id, "k");
  ASSERT_EQ(rec.images.images.size(), 5u);
  auto b = attach_image_annotations(bundle_of(make_story({"Keanu smiles ."})), rec.images, rec.roster);
  ASSERT_TRUE(b.story.images.has_value());
  for (const auto& img : b.story.images->images) {
    EXPECT_EQ(img.characters, (std::vector<std::string>{"Charlize", "Keanu"}));
  }
  EXPECT_EQ(b.story.roster.size(), 2u);
  EXPECT_EQ(b.provenance.count("unresolved_characters"), 0u);
}

TEST(Sidecar, AliasUnknownAndUnresolvedLabels) {
  std::vector<CharacterName> roster{{"Russell Crowe", {"russell"}}};
  ImageSequence imgs = images_of({{"RUSSELL"}, {"Unknown"}, {"Stranger", "russell"}});
  auto b = attach_image_annotations(bundle_of(make_story({"a"})), imgs, roster);
  const auto& got = b.story.images->images;
  EXPECT_EQ(got[0].characters, (std::vector<std::string>{"Russell Crowe"}));
  EXPECT_EQ(got[1].characters, (std::vector<std::string>{"Unknown"}));
  EXPECT_EQ(got[2].characters, (std::vector<std::string>{"Russell Crowe", "Stranger"}));
  EXPECT_EQ(b.provenance.at("unresolved_characters"), "Stranger");
}

TEST(Sidecar, MissingStoryIdIsParseError) {
  EXPECT_THROW(parse_sidecar_line(R"({"images":[]})"), ParseError);
  std::istringstream in("{\"story_id\":\"a\"}\nnope\n");
  auto r = read_sidecar(in);
  EXPECT_EQ(r.records.size(), 1u);
  EXPECT_EQ(r.diagnostics.size(), 1u);
}
