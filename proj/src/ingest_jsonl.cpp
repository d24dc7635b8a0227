#include <algorithm>
#include <set>
#include <sstream>

#include <json.hpp>

#include "corefscope/errors.hpp"
#include "corefscope/ingest.hpp"
#include "corefscope/labeling.hpp"

namespace corefscope {

using nlohmann::json;

namespace {

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
  throw ParseError("field '" + field + "': " + what);
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) field_error(path + key, "missing");
  return *it;
}

std::string as_string(const json& v, const std::string& field) {
  if (!v.is_string()) field_error(field, "expected a string");
  return v.get<std::string>();
}

std::size_t as_index(const json& v, const std::string& field) {
  if (!v.is_number_unsigned()) field_error(field, "expected a non-negative integer");
  return v.get<std::size_t>();
}

const json& as_array(const json& v, const std::string& field) {
  if (!v.is_array()) field_error(field, "expected an array");
  return v;
}

std::vector<CharacterName> decode_roster(const json& v, const std::string& field) {
  std::vector<CharacterName> roster;
  for (std::size_t i = 0; i < as_array(v, field).size(); ++i) {
    const std::string f = field + "[" + std::to_string(i) + "]";
    const json& entry = v[i];
    if (!entry.is_object()) field_error(f, "expected an object");
    CharacterName name;
    name.canonical = as_string(require(entry, "canonical", f + "."), f + ".canonical");
    if (name.canonical.empty()) field_error(f + ".canonical", "empty name");
    if (auto it = entry.find("aliases"); it != entry.end()) {
      for (std::size_t j = 0; j < as_array(*it, f + ".aliases").size(); ++j) {
        name.aliases.push_back(as_string((*it)[j], f + ".aliases[" + std::to_string(j) + "]"));
      }
    }
    roster.push_back(std::move(name));
  }
  return roster;
}

ImageSequence decode_images(const json& v, const std::string& field) {
  ImageSequence seq;
  for (std::size_t i = 0; i < as_array(v, field).size(); ++i) {
    const std::string f = field + "[" + std::to_string(i) + "]";
    const json& entry = v[i];
    if (!entry.is_object()) field_error(f, "expected an object");
    ImageAppearance image;
    image.image_id = as_string(require(entry, "image_id", f + "."), f + ".image_id");
    const json& chars = as_array(require(entry, "characters", f + "."), f + ".characters");
    for (std::size_t j = 0; j < chars.size(); ++j) {
      image.characters.push_back(as_string(chars[j], f + ".characters[" + std::to_string(j) + "]"));
    }
    std::sort(image.characters.begin(), image.characters.end());
    image.characters.erase(std::unique(image.characters.begin(), image.characters.end()),
                           image.characters.end());
    if (auto it = entry.find("boxes"); it != entry.end()) {
      image.boxes.emplace();
      for (std::size_t j = 0; j < as_array(*it, f + ".boxes").size(); ++j) {
        const std::string bf = f + ".boxes[" + std::to_string(j) + "]";
        const json& box = (*it)[j];
        if (!box.is_object()) field_error(bf, "expected an object");
        BoxArea area;
        area.character = as_string(require(box, "character", bf + "."), bf + ".character");
        const json& rel = require(box, "relative_area", bf + ".");
        if (!rel.is_number()) field_error(bf + ".relative_area", "expected a number");
        area.relative_area = rel.get<double>();
        if (!(area.relative_area >= 0.0 && area.relative_area <= 1.0)) {
          field_error(bf + ".relative_area", "outside [0, 1]");
        }
        image.boxes->push_back(std::move(area));
      }
    }
    seq.images.push_back(std::move(image));
  }
  return seq;
}

json encode_roster(const std::vector<CharacterName>& roster) {
  json out = json::array();
  for (const auto& name : roster) {
    out.push_back({{"canonical", name.canonical}, {"aliases", name.aliases}});
  }
  return out;
}

json encode_images(const ImageSequence& images) {
  json out = json::array();
  for (const auto& image : images.images) {
    json entry = {{"image_id", image.image_id}, {"characters", image.characters}};
    if (image.boxes) {
      json boxes = json::array();
      for (const auto& b : *image.boxes) {
        boxes.push_back({{"character", b.character}, {"relative_area", b.relative_area}});
      }
      entry["boxes"] = std::move(boxes);
    }
    out.push_back(std::move(entry));
  }
  return out;
}

json parse_object(std::string_view line) {
  json doc;
  try {
    doc = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("record is not a JSON object");
  return doc;
}

template <typename T, typename Parse>
ReadResult<T> read_lines(std::istream& in, Parse parse) {
  ReadResult<T> result;
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      result.records.push_back(parse(line));
    } catch (const ParseError& e) {
      result.diagnostics.push_back({line_no, e.message()});
    }
  }
  return result;
}

}  // namespace

StoryBundle parse_story_jsonl(std::string_view line) {
  const json doc = parse_object(line);
  StoryBundle bundle;
  Story& story = bundle.story;

  story.story_id = as_string(require(doc, "story_id", ""), "story_id");
  bundle.source_label = as_string(require(doc, "source_label", ""), "source_label");
  if (bundle.source_label.empty()) field_error("source_label", "empty");

  const json& sentences = as_array(require(doc, "sentences", ""), "sentences");
  if (sentences.empty()) field_error("sentences", "story has no sentences");
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    const std::string f = "sentences[" + std::to_string(s) + "]";
    const json& toks = as_array(sentences[s], f);
    if (toks.empty()) field_error(f, "empty sentence");
    Sentence sent;
    for (std::size_t t = 0; t < toks.size(); ++t) {
      sent.push_back(as_string(toks[t], f + "[" + std::to_string(t) + "]"));
    }
    story.sentences.push_back(std::move(sent));
  }

  const json& chains = as_array(require(doc, "chains", ""), "chains");
  std::vector<std::int64_t> ids;
  if (auto it = doc.find("chain_ids"); it != doc.end()) {
    const json& arr = as_array(*it, "chain_ids");
    if (arr.size() != chains.size()) field_error("chain_ids", "length differs from chains");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      if (!arr[i].is_number_integer()) field_error("chain_ids[" + std::to_string(i) + "]", "expected an integer");
      ids.push_back(arr[i].get<std::int64_t>());
    }
  } else {
    for (std::size_t i = 0; i < chains.size(); ++i) ids.push_back(static_cast<std::int64_t>(i));
  }
  for (std::size_t c = 0; c < chains.size(); ++c) {
    const std::string f = "chains[" + std::to_string(c) + "]";
    const json& mentions = as_array(chains[c], f);
    Chain chain{ChainId{ids[c]}, {}};
    for (std::size_t i = 0; i < mentions.size(); ++i) {
      const std::string mf = f + "[" + std::to_string(i) + "]";
      const json& m = mentions[i];
      if (!m.is_object()) field_error(mf, "expected an object");
      Mention mention{as_index(require(m, "sentence", mf + "."), mf + ".sentence"),
                      as_index(require(m, "start", mf + "."), mf + ".start"),
                      as_index(require(m, "end", mf + "."), mf + ".end")};
      if (mention.sentence >= story.sentences.size() || mention.start > mention.end ||
          mention.end >= story.sentences[mention.sentence].size()) {
        field_error(mf, "span out of range");
      }
      chain.mentions.push_back(mention);
    }
    story.chains.push_back(std::move(chain));
  }

  if (auto it = doc.find("roster"); it != doc.end()) story.roster = decode_roster(*it, "roster");
  if (auto it = doc.find("images"); it != doc.end() && !it->is_null()) {
    story.images = decode_images(*it, "images");
  }
  if (auto it = doc.find("provenance"); it != doc.end()) {
    if (!it->is_object()) field_error("provenance", "expected an object");
    for (const auto& [key, value] : it->items()) {
      bundle.provenance[key] = value.is_string() ? value.get<std::string>() : value.dump();
    }
  }

  if (const auto violations = validate_story(story); !violations.empty()) {
    throw ParseError(std::string("invalid story: ") + to_string(violations.front().kind) + ": " +
                     violations.front().detail);
  }
  return bundle;
}

std::string to_jsonl(const StoryBundle& bundle) {
  const Story& story = bundle.story;
  json doc;
  doc["story_id"] = story.story_id;
  doc["source_label"] = bundle.source_label;
  doc["sentences"] = story.sentences;
  json chains = json::array();
  bool sequential_ids = true;
  for (std::size_t c = 0; c < story.chains.size(); ++c) {
    const Chain& chain = story.chains[c];
    sequential_ids = sequential_ids && chain.id.value == static_cast<std::int64_t>(c);
    json mentions = json::array();
    for (const auto& m : chain.mentions) {
      mentions.push_back({{"sentence", m.sentence}, {"start", m.start}, {"end", m.end}});
    }
    chains.push_back(std::move(mentions));
  }
  doc["chains"] = std::move(chains);
  if (!sequential_ids) {
    json ids = json::array();
    for (const auto& chain : story.chains) ids.push_back(chain.id.value);
    doc["chain_ids"] = std::move(ids);
  }
  doc["roster"] = encode_roster(story.roster);
  if (story.images) doc["images"] = encode_images(*story.images);
  if (!bundle.provenance.empty()) doc["provenance"] = bundle.provenance;
  return doc.dump(-1, ' ', false, json::error_handler_t::replace);
}

void write_jsonl(std::span<const StoryBundle> bundles, std::ostream& out) {
  for (const auto& bundle : bundles) out << to_jsonl(bundle) << '\n';
  out.flush();
  if (!out) throw IoError("failed writing JSONL output");
}

ReadResult<StoryBundle> read_jsonl(std::istream& in) {
  return read_lines<StoryBundle>(in, [](const std::string& line) { return parse_story_jsonl(line); });
}

SidecarRecord parse_sidecar_line(std::string_view line) {
  const json doc = parse_object(line);
  SidecarRecord rec;
  rec.story_id = as_string(require(doc, "story_id", ""), "story_id");
  if (auto it = doc.find("roster"); it != doc.end()) rec.roster = decode_roster(*it, "roster");
  if (auto it = doc.find("images"); it != doc.end()) rec.images = decode_images(*it, "images");
  return rec;
}

ReadResult<SidecarRecord> read_sidecar(std::istream& in) {
  return read_lines<SidecarRecord>(in, [](const std::string& line) { return parse_sidecar_line(line); });
}

StoryBundle attach_image_annotations(StoryBundle bundle, const ImageSequence& annotations,
                                     std::span<const CharacterName> roster) {
  std::set<std::string> unresolved;
  auto resolve = [&](const std::string& label) -> std::string {
    if (is_unknown_label(label)) return label;
    if (auto idx = resolve_character(label, roster)) return roster[*idx].canonical;
    unresolved.insert(label);
    return label;
  };

  ImageSequence images;
  for (const auto& src : annotations.images) {
    ImageAppearance image;
    image.image_id = src.image_id;
    for (const auto& c : src.characters) image.characters.push_back(resolve(c));
    std::sort(image.characters.begin(), image.characters.end());
    image.characters.erase(std::unique(image.characters.begin(), image.characters.end()),
                           image.characters.end());
    if (src.boxes) {
      image.boxes.emplace();
      for (const auto& b : *src.boxes) image.boxes->push_back({resolve(b.character), b.relative_area});
    }
    images.images.push_back(std::move(image));
  }

  bundle.story.roster.assign(roster.begin(), roster.end());
  bundle.story.images = std::move(images);
  if (!unresolved.empty()) {
    std::string joined;
    for (const auto& name : unresolved) {
      if (!joined.empty()) joined += ',';
      joined += name;
    }
    bundle.provenance["unresolved_characters"] = joined;
  } else {
    bundle.provenance.erase("unresolved_characters");
  }
  return bundle;
}

}  // namespace corefscope
