#pragma once

#include <cstddef>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "corefscope/data_model.hpp"

namespace corefscope {

/// One story together with the corpus it belongs to ("human", a model name, ...).
struct StoryBundle {
  Story story;
  std::string source_label;
  std::map<std::string, std::string> provenance;

  bool operator==(const StoryBundle&) const = default;
};

/// A problem found while reading; the offending record was skipped.
struct Diagnostic {
  std::size_t line = 0;  // 1-based, 0 when unknown
  std::string message;
};

template <typename T>
struct ReadResult {
  std::vector<T> records;
  std::vector<Diagnostic> diagnostics;
};

// ---------------------------------------------------------------------------
// CoNLL-2012 coreference
//
// One token per line, whitespace-separated columns. Column 0 is the document
// id and the last column holds coreference brackets ("(3", "3)", "(3)",
// joined by '|', "-" for none). With exactly four columns the layout is
// doc/index/word/coref; with five or more the word is column 3 as in
// CoNLL-2012 (doc/part/index/word/.../coref). Blank lines end sentences and
// "#begin document" / "#end document" delimit stories.
// ---------------------------------------------------------------------------

/// Reads every document, skipping malformed ones with a diagnostic.
ReadResult<StoryBundle> read_conll(std::istream& in, std::string_view source_label);

/// Strict variant: throws the first ParseError encountered.
std::vector<StoryBundle> parse_conll_coref(std::istream& in,
                                           std::string_view source_label = "unlabeled");
std::vector<StoryBundle> parse_conll_coref(std::string_view text,
                                           std::string_view source_label = "unlabeled");

/// Coreference column for every token of `story`, in sentence order. Brackets
/// on one token are emitted closes first (innermost first), then opens
/// (outermost first), then single-token spans. Throws InputError when two
/// mentions of one chain interleave, which the bracket notation cannot express.
std::vector<std::vector<std::string>> conll_coref_column(const Story& story);

void write_conll(std::span<const StoryBundle> bundles, std::ostream& out);

// ---------------------------------------------------------------------------
// Canonical JSONL: one story per line.
//
//   story_id      string
//   source_label  non-empty string
//   sentences     [[token, ...], ...]
//   chains        [[{sentence, start, end}, ...], ...]   (end inclusive)
//   chain_ids     [int, ...]          only when ids are not 0, 1, 2, ...
//   roster        [{canonical, aliases}, ...]
//   images        [{image_id, characters, boxes?}, ...]   optional
//   provenance    {string: string}    optional
// ---------------------------------------------------------------------------

/// Throws ParseError naming the offending field, or the first invariant the
/// decoded story breaks.
StoryBundle parse_story_jsonl(std::string_view line);

/// Single-line record with sorted keys.
std::string to_jsonl(const StoryBundle& bundle);

/// One record per line. Throws IoError if the sink fails.
void write_jsonl(std::span<const StoryBundle> bundles, std::ostream& out);

ReadResult<StoryBundle> read_jsonl(std::istream& in);

// ---------------------------------------------------------------------------
// Sidecar annotations: JSONL keyed by story_id, {story_id, roster, images}.
// ---------------------------------------------------------------------------

struct SidecarRecord {
  std::string story_id;
  std::vector<CharacterName> roster;
  ImageSequence images;
};

SidecarRecord parse_sidecar_line(std::string_view line);
ReadResult<SidecarRecord> read_sidecar(std::istream& in);

/// Sets roster and images. Image labels resolving to a roster entry (name or
/// alias, any case) are rewritten to its canonical name; "Unknown" labels are
/// kept as is; any other label is kept verbatim and listed under the
/// "unresolved_characters" provenance key.
StoryBundle attach_image_annotations(StoryBundle bundle, const ImageSequence& annotations,
                                     std::span<const CharacterName> roster);

}  // namespace corefscope
