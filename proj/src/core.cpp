// Copyright 2026 The Chalset Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "chalset/core.hpp"

#include <algorithm>
#include <regex>
#include <set>
#include <sstream>

#include "chalset/tokenize.hpp"
#include "chalset/utf8.hpp"
#include "json.hpp"

namespace chalset {

using json = nlohmann::ordered_json;

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformed: return "malformed";
    case ErrorCode::kMissingField: return "missing_field";
    case ErrorCode::kInvalidValue: return "invalid_value";
    case ErrorCode::kDuplicateId: return "duplicate_id";
    case ErrorCode::kInvalidId: return "invalid_id";
    case ErrorCode::kBadSpan: return "bad_span";
    case ErrorCode::kMissingLocus: return "missing_locus";
    case ErrorCode::kEmptySet: return "empty_set";
    case ErrorCode::kInconsistentCategory: return "inconsistent_category";
    case ErrorCode::kUnknownItem: return "unknown_item";
    case ErrorCode::kDuplicateOutput: return "duplicate_output";
    case ErrorCode::kIncompleteMatrix: return "incomplete_matrix";
    case ErrorCode::kIncompletePanel: return "incomplete_panel";
    case ErrorCode::kConflictingRevision: return "conflicting_revision";
    case ErrorCode::kUnknownTriple: return "unknown_triple";
    case ErrorCode::kDuplicateTriple: return "duplicate_triple";
    case ErrorCode::kDuplicateAnnotator: return "duplicate_annotator";
    case ErrorCode::kNoSystems: return "no_systems";
    case ErrorCode::kUnknownSystem: return "unknown_system";
    case ErrorCode::kUnknownFormat: return "unknown_format";
    case ErrorCode::kNothingToRender: return "nothing_to_render";
    case ErrorCode::kInvalidVerdict: return "invalid_verdict";
    case ErrorCode::kUnknownSlot: return "unknown_slot";
    case ErrorCode::kNotFound: return "not_found";
    case ErrorCode::kUnauthorized: return "unauthorized";
    case ErrorCode::kForbidden: return "forbidden";
    case ErrorCode::kConflict: return "conflict";
    case ErrorCode::kStorage: return "storage";
  }
  return "unknown";
}

std::string_view category_key(DivergenceCategory category) {
  switch (category) {
    case DivergenceCategory::kMorphoSyntactic: return "morpho-syntactic";
    case DivergenceCategory::kLexicoSyntactic: return "lexico-syntactic";
    case DivergenceCategory::kSyntactic: return "syntactic";
  }
  return "";
}

std::string_view category_label(DivergenceCategory category) {
  switch (category) {
    case DivergenceCategory::kMorphoSyntactic: return "Morpho-syntactic";
    case DivergenceCategory::kLexicoSyntactic: return "Lexico-syntactic";
    case DivergenceCategory::kSyntactic: return "Syntactic";
  }
  return "";
}

std::optional<DivergenceCategory> parse_category(std::string_view key) {
  for (const auto c : kAllCategories) {
    if (category_key(c) == key) return c;
  }
  return std::nullopt;
}

const ChallengeItem* ChallengeSet::find(std::string_view item_id) const {
  for (const auto& item : items) {
    if (item.id == item_id) return &item;
  }
  return nullptr;
}

std::vector<std::string> ChallengeSet::subcategories() const {
  std::vector<std::string> out;
  for (const auto& item : items) {
    if (std::find(out.begin(), out.end(), item.subcategory) == out.end()) {
      out.push_back(item.subcategory);
    }
  }
  return out;
}

bool is_valid_item_id(std::string_view id) {
  static const std::regex kIdPattern("S[0-9]+[a-z][0-9]?");
  return std::regex_match(id.begin(), id.end(), kIdPattern);
}

std::strong_ordering compare_item_ids(std::string_view a, std::string_view b) {
  std::size_t i = 0;
  std::size_t j = 0;
  const auto is_digit = [](char c) { return c >= '0' && c <= '9'; };
  while (i < a.size() && j < b.size()) {
    if (is_digit(a[i]) && is_digit(b[j])) {
      std::size_t ie = i;
      std::size_t je = j;
      while (ie < a.size() && is_digit(a[ie])) ++ie;
      while (je < b.size() && is_digit(b[je])) ++je;
      std::string_view na = a.substr(i, ie - i);
      std::string_view nb = b.substr(j, je - j);
      while (na.size() > 1 && na.front() == '0') na.remove_prefix(1);
      while (nb.size() > 1 && nb.front() == '0') nb.remove_prefix(1);
      if (na.size() != nb.size()) return na.size() <=> nb.size();
      if (const auto c = na.compare(nb); c != 0) {
        return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
      }
      i = ie;
      j = je;
    } else {
      if (a[i] != b[j]) return a[i] <=> b[j];
      ++i;
      ++j;
    }
  }
  return (a.size() - i) <=> (b.size() - j);
}

namespace {

std::string item_path(std::size_t index) {
  return "items[" + std::to_string(index) + "]";
}

void check_spans(const std::string& item_id, const std::string& field,
                 const std::string& host,
                 const std::vector<HighlightSpan>& spans,
                 std::vector<Finding>& errors) {
  const auto host_len = utf8::length(host);
  if (!host_len) return;  // reported by the text check
  const HighlightSpan* prev = nullptr;
  for (std::size_t k = 0; k < spans.size(); ++k) {
    const auto& span = spans[k];
    const std::string path = field + "[" + std::to_string(k) + "]";
    if (span.start >= span.end || span.end > *host_len) {
      errors.push_back({ErrorCode::kBadSpan, item_id, path,
                        "highlight span [" + std::to_string(span.start) + ", " +
                            std::to_string(span.end) +
                            ") is empty or out of bounds for a host of length " +
                            std::to_string(*host_len)});
    } else if (prev != nullptr && span.start < prev->end) {
      errors.push_back({ErrorCode::kBadSpan, item_id, path,
                        "highlight spans must be sorted and non-overlapping"});
    }
    prev = &span;
  }
}

void check_text(const std::string& item_id, const std::string& field,
                const std::string& text, std::vector<Finding>& errors) {
  if (text.empty()) {
    errors.push_back({ErrorCode::kMissingField, item_id, field,
                      field.substr(field.rfind('.') + 1) + " must be non-empty"});
  } else if (!utf8::length(text)) {
    errors.push_back({ErrorCode::kMalformed, item_id, field, "invalid UTF-8"});
  }
}

}  // namespace

ValidationReport validate_challenge_set(const ChallengeSet& set,
                                        const ValidationOptions& options) {
  ValidationReport report;
  if (set.items.empty()) {
    report.errors.push_back(
        {ErrorCode::kEmptySet, "", "items", "empty challenge set"});
    return report;
  }

  std::set<std::string, std::less<>> seen_ids;
  std::map<std::string, DivergenceCategory, std::less<>> subcategory_category;
  std::map<std::string, std::size_t, std::less<>> subcategory_size;

  for (std::size_t i = 0; i < set.items.size(); ++i) {
    const auto& item = set.items[i];
    const std::string base = item_path(i);
    if (!is_valid_item_id(item.id)) {
      report.errors.push_back({ErrorCode::kInvalidId, item.id, base + ".id",
                               "malformed item id '" + item.id + "'"});
    }
    if (!seen_ids.insert(item.id).second) {
      report.errors.push_back({ErrorCode::kDuplicateId, item.id, base + ".id",
                               "duplicate item id " + item.id});
    }
    if (item.subcategory.empty()) {
      report.errors.push_back({ErrorCode::kMissingField, item.id,
                               base + ".subcategory",
                               "subcategory must be non-empty"});
    }
    check_text(item.id, base + ".question", item.question, report.errors);
    check_text(item.id, base + ".source", item.source, report.errors);
    check_text(item.id, base + ".reference", item.reference, report.errors);
    check_spans(item.id, base + ".source_highlights", item.source,
                item.source_highlights, report.errors);
    check_spans(item.id, base + ".reference_highlights", item.reference,
                item.reference_highlights, report.errors);
    if (item.reference_highlights.empty()) {
      report.errors.push_back({ErrorCode::kMissingLocus, item.id,
                               base + ".reference_highlights",
                               "missing divergence locus"});
    }

    const auto [it, inserted] =
        subcategory_category.try_emplace(item.subcategory, item.category);
    if (!inserted && it->second != item.category) {
      report.errors.push_back(
          {ErrorCode::kInconsistentCategory, item.id, base + ".category",
           "subcategory '" + item.subcategory + "' is declared both " +
               std::string(category_key(it->second)) + " and " +
               std::string(category_key(item.category))});
    }
    ++subcategory_size[item.subcategory];

    const std::size_t tokens = tokenize(item.source).size();
    if (tokens > options.max_source_tokens) {
      report.warnings.push_back(
          {ErrorCode::kInvalidValue, item.id, base + ".source",
           "source has " + std::to_string(tokens) + " tokens (limit " +
               std::to_string(options.max_source_tokens) + ")"});
    }
  }

  for (const auto& name : set.subcategories()) {
    const std::size_t n = subcategory_size[name];
    if (n < options.min_items_per_subcategory) {
      report.warnings.push_back(
          {ErrorCode::kInvalidValue, "", "subcategory:" + name,
           "subcategory '" + name + "' has " + std::to_string(n) +
               " item(s); at least " +
               std::to_string(options.min_items_per_subcategory) +
               " expected"});
    }
  }
  return report;
}

namespace {

[[noreturn]] void fail(ErrorCode code, const std::string& item_id,
                       const std::string& path, const std::string& message) {
  std::string detail = item_id.empty() ? path : item_id + ": " + path;
  throw Error(code, message + " (" + detail + ")", detail);
}

json parse_document(std::string_view document) {
  try {
    return json::parse(document);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kMalformed,
                std::string("malformed document: ") + e.what(), "");
  }
}

const json& require(const json& obj, const char* key, const std::string& item_id,
                    const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) {
    fail(ErrorCode::kMissingField, item_id, path + "." + key,
         std::string("missing required field '") + key + "'");
  }
  return obj.at(key);
}

std::string require_string(const json& obj, const char* key,
                           const std::string& item_id, const std::string& path) {
  const json& v = require(obj, key, item_id, path);
  if (!v.is_string()) {
    fail(ErrorCode::kMalformed, item_id, path + "." + key,
         std::string("field '") + key + "' must be a string");
  }
  return v.get<std::string>();
}

std::vector<HighlightSpan> parse_spans(const json& obj, const char* key,
                                       const std::string& item_id,
                                       const std::string& path) {
  const json& arr = require(obj, key, item_id, path);
  const std::string field = path + "." + key;
  if (!arr.is_array()) {
    fail(ErrorCode::kMalformed, item_id, field, "highlights must be an array");
  }
  std::vector<HighlightSpan> spans;
  for (std::size_t k = 0; k < arr.size(); ++k) {
    const std::string span_path = field + "[" + std::to_string(k) + "]";
    const json& s = arr[k];
    const json& start = require(s, "start", item_id, span_path);
    const json& end = require(s, "end", item_id, span_path);
    if (!start.is_number_unsigned() || !end.is_number_unsigned()) {
      fail(ErrorCode::kBadSpan, item_id, span_path,
           "span offsets must be non-negative integers");
    }
    spans.push_back({start.get<std::size_t>(), end.get<std::size_t>()});
  }
  return spans;
}

json spans_to_json(const std::vector<HighlightSpan>& spans) {
  json arr = json::array();
  for (const auto& s : spans) arr.push_back({{"start", s.start}, {"end", s.end}});
  return arr;
}

void check_format(const json& doc, std::string_view expected) {
  if (!doc.is_object()) {
    throw Error(ErrorCode::kMalformed, "document must be an object", "");
  }
  if (doc.contains("format") &&
      (!doc["format"].is_string() || doc["format"].get<std::string>() != expected)) {
    throw Error(ErrorCode::kMalformed,
                "expected a '" + std::string(expected) + "' document", "format");
  }
}

}  // namespace

ChallengeSet parse_challenge_set(std::string_view document) {
  const json doc = parse_document(document);
  check_format(doc, "challenge-set");
  ChallengeSet set;
  set.name = require_string(doc, "name", "", "$");
  set.version = require_string(doc, "version", "", "$");
  set.source_language = require_string(doc, "source_language", "", "$");
  set.target_language = require_string(doc, "target_language", "", "$");
  const json& items = require(doc, "items", "", "$");
  if (!items.is_array()) fail(ErrorCode::kMalformed, "", "items", "items must be an array");

  for (std::size_t i = 0; i < items.size(); ++i) {
    const json& obj = items[i];
    const std::string path = item_path(i);
    if (!obj.is_object()) fail(ErrorCode::kMalformed, "", path, "item must be an object");
    ChallengeItem item;
    item.id = require_string(obj, "id", "", path);
    const std::string category = require_string(obj, "category", item.id, path);
    const auto parsed_category = parse_category(category);
    if (!parsed_category) {
      fail(ErrorCode::kInvalidValue, item.id, path + ".category",
           "unknown category '" + category + "'");
    }
    item.category = *parsed_category;
    item.subcategory = require_string(obj, "subcategory", item.id, path);
    item.question = require_string(obj, "question", item.id, path);
    item.source = require_string(obj, "source", item.id, path);
    item.source_highlights = parse_spans(obj, "source_highlights", item.id, path);
    item.reference = require_string(obj, "reference", item.id, path);
    item.reference_highlights =
        parse_spans(obj, "reference_highlights", item.id, path);
    if (obj.contains("notes") && !obj["notes"].is_null()) {
      item.notes = require_string(obj, "notes", item.id, path);
    }
    set.items.push_back(std::move(item));
  }

  const ValidationReport report = validate_challenge_set(set);
  if (!report.ok()) {
    const Finding& first = report.errors.front();
    std::string detail = first.item_id.empty() ? first.field
                                               : first.item_id + ": " + first.field;
    std::string message = first.message + " (" + detail + ")";
    if (report.errors.size() > 1) {
      message += " and " + std::to_string(report.errors.size() - 1) +
                 " more error(s)";
    }
    throw Error(first.code, message, detail);
  }
  return set;
}

std::string serialize_challenge_set(const ChallengeSet& set) {
  json doc;
  doc["format"] = "challenge-set";
  doc["schema_version"] = 1;
  doc["name"] = set.name;
  doc["version"] = set.version;
  doc["source_language"] = set.source_language;
  doc["target_language"] = set.target_language;
  json items = json::array();
  for (const auto& item : set.items) {
    json obj;
    obj["id"] = item.id;
    obj["category"] = category_key(item.category);
    obj["subcategory"] = item.subcategory;
    obj["question"] = item.question;
    obj["source"] = item.source;
    obj["source_highlights"] = spans_to_json(item.source_highlights);
    obj["reference"] = item.reference;
    obj["reference_highlights"] = spans_to_json(item.reference_highlights);
    if (item.notes) obj["notes"] = *item.notes;
    items.push_back(std::move(obj));
  }
  doc["items"] = std::move(items);
  return doc.dump(2) + "\n";
}

void SystemOutputSet::add(SystemOutput output) {
  SystemItemPair key{output.system_id, output.item_id};
  if (index_.contains(key)) {
    throw Error(ErrorCode::kDuplicateOutput,
                "duplicate output for (" + key.first + ", " + key.second + ")",
                key.first + "/" + key.second);
  }
  if (std::find(systems_.begin(), systems_.end(), output.system_id) ==
      systems_.end()) {
    systems_.push_back(output.system_id);
  }
  index_.emplace(std::move(key), outputs_.size());
  outputs_.push_back(std::move(output));
}

const SystemOutput* SystemOutputSet::find(std::string_view system_id,
                                          std::string_view item_id) const {
  const auto it =
      index_.find(SystemItemPair{std::string(system_id), std::string(item_id)});
  return it == index_.end() ? nullptr : &outputs_[it->second];
}

std::vector<SystemItemPair> SystemOutputSet::missing_pairs(
    const ChallengeSet& set) const {
  std::vector<SystemItemPair> missing;
  for (const auto& item : set.items) {
    for (const auto& system : systems_) {
      if (find(system, item.id) == nullptr) missing.emplace_back(system, item.id);
    }
  }
  return missing;
}

void SystemOutputSet::require_complete(const ChallengeSet& set) const {
  if (systems_.empty()) {
    throw Error(ErrorCode::kNoSystems, "output set contains no systems", "");
  }
  const auto missing = missing_pairs(set);
  if (missing.empty()) return;
  std::string list;
  for (const auto& [system, item] : missing) {
    if (!list.empty()) list += ", ";
    list += "(" + system + ", " + item + ")";
  }
  throw Error(ErrorCode::kIncompleteMatrix,
              "incomplete output matrix; missing " + list, list);
}

ParsedOutputs parse_outputs(std::string_view document, const ChallengeSet& set) {
  const json doc = parse_document(document);
  check_format(doc, "system-outputs");
  const json& arr = require(doc, "outputs", "", "$");
  if (!arr.is_array()) fail(ErrorCode::kMalformed, "", "outputs", "outputs must be an array");
  ParsedOutputs result;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string path = "outputs[" + std::to_string(i) + "]";
    SystemOutput out;
    out.system_id = require_string(arr[i], "system_id", "", path);
    out.item_id = require_string(arr[i], "item_id", "", path);
    out.translation = require_string(arr[i], "translation", out.item_id, path);
    if (out.system_id.empty()) {
      fail(ErrorCode::kInvalidValue, out.item_id, path + ".system_id",
           "system_id must be non-empty");
    }
    if (set.find(out.item_id) == nullptr) {
      fail(ErrorCode::kUnknownItem, out.item_id, path + ".item_id",
           "unknown item id '" + out.item_id + "'");
    }
    result.outputs.add(std::move(out));
  }
  for (const auto& [system, item] : result.outputs.missing_pairs(set)) {
    result.warnings.push_back("missing output for (" + system + ", " + item + ")");
  }
  return result;
}

std::string serialize_outputs(const SystemOutputSet& outputs) {
  json doc;
  doc["format"] = "system-outputs";
  doc["schema_version"] = 1;
  json arr = json::array();
  for (const auto& o : outputs.outputs()) {
    arr.push_back({{"system_id", o.system_id},
                   {"item_id", o.item_id},
                   {"translation", o.translation}});
  }
  doc["outputs"] = std::move(arr);
  return doc.dump(2) + "\n";
}

std::vector<MajorityVerdict> parse_majority_verdicts(std::string_view document,
                                                     const ChallengeSet& set) {
  const json doc = parse_document(document);
  check_format(doc, "majority-verdicts");
  const json& arr = require(doc, "verdicts", "", "$");
  if (!arr.is_array()) fail(ErrorCode::kMalformed, "", "verdicts", "verdicts must be an array");
  std::vector<MajorityVerdict> out;
  std::set<SystemItemPair> seen;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string path = "verdicts[" + std::to_string(i) + "]";
    MajorityVerdict v;
    v.system_id = require_string(arr[i], "system_id", "", path);
    v.item_id = require_string(arr[i], "item_id", "", path);
    const json& bridged = require(arr[i], "bridged", v.item_id, path);
    if (!bridged.is_boolean()) {
      fail(ErrorCode::kMalformed, v.item_id, path + ".bridged", "bridged must be a boolean");
    }
    v.bridged = bridged.get<bool>();
    if (set.find(v.item_id) == nullptr) {
      fail(ErrorCode::kUnknownItem, v.item_id, path + ".item_id",
           "unknown item id '" + v.item_id + "'");
    }
    if (!seen.emplace(v.system_id, v.item_id).second) {
      fail(ErrorCode::kDuplicateOutput, v.item_id, path,
           "duplicate verdict for (" + v.system_id + ", " + v.item_id + ")");
    }
    out.push_back(std::move(v));
  }
  return out;
}

std::string serialize_majority_verdicts(const std::vector<MajorityVerdict>& verdicts) {
  json doc;
  doc["format"] = "majority-verdicts";
  doc["schema_version"] = 1;
  json arr = json::array();
  for (const auto& v : verdicts) {
    arr.push_back({{"system_id", v.system_id},
                   {"item_id", v.item_id},
                   {"bridged", v.bridged}});
  }
  doc["verdicts"] = std::move(arr);
  return doc.dump(2) + "\n";
}

std::string apply_highlights(std::string_view text,
                             const std::vector<HighlightSpan>& spans) {
  const auto b = utf8::boundaries(text);
  if (!b) return std::string(text);
  std::string out;
  std::size_t cursor = 0;  // code point offset already emitted
  for (const auto& span : spans) {
    if (span.start < cursor || span.end >= b->size() || span.start >= span.end) {
      continue;
    }
    out.append(text.substr((*b)[cursor], (*b)[span.start] - (*b)[cursor]));
    out += "**";
    out.append(text.substr((*b)[span.start], (*b)[span.end] - (*b)[span.start]));
    out += "**";
    cursor = span.end;
  }
  out.append(text.substr((*b)[cursor]));
  return out;
}

std::string render_formatted(const ChallengeSet& set,
                             const SystemOutputSet* outputs,
                             const std::vector<MajorityVerdict>* verdicts) {
  std::map<SystemItemPair, bool> marks;
  if (verdicts != nullptr) {
    if (outputs == nullptr) {
      throw Error(ErrorCode::kInvalidValue, "verdicts require system outputs", "");
    }
    for (const auto& v : *verdicts) {
      if (outputs->find(v.system_id, v.item_id) == nullptr) {
        throw Error(ErrorCode::kUnknownItem,
                    "verdict for unknown pair (" + v.system_id + ", " +
                        v.item_id + ")",
                    v.system_id + "/" + v.item_id);
      }
      marks[{v.system_id, v.item_id}] = v.bridged;
    }
    for (const auto& o : outputs->outputs()) {
      if (!marks.contains({o.system_id, o.item_id})) {
        throw Error(ErrorCode::kInvalidValue,
                    "no verdict for (" + o.system_id + ", " + o.item_id + ")",
                    o.system_id + "/" + o.item_id);
      }
    }
  }

  std::ostringstream out;
  out << "# " << set.name;
  if (!set.version.empty()) out << " (version " << set.version << ")";
  out << "\n";

  std::optional<DivergenceCategory> current_category;
  for (const auto& subcategory : set.subcategories()) {
    std::vector<const ChallengeItem*> members;
    for (const auto& item : set.items) {
      if (item.subcategory == subcategory) members.push_back(&item);
    }
    const DivergenceCategory category = members.front()->category;
    if (current_category != category) {
      out << "\n## " << category_label(category) << "\n";
      current_category = category;
    }
    out << "\n### " << subcategory << "\n";
    const std::string* last_question = nullptr;
    for (const ChallengeItem* item : members) {
      if (last_question == nullptr || *last_question != item->question) {
        out << "\n> " << item->question << "\n";
        last_question = &item->question;
      }
      out << "\n**" << item->id << "**";
      if (item->notes) out << " _(" << *item->notes << ")_";
      out << "\n\n";
      out << "- Source: " << apply_highlights(item->source, item->source_highlights)
          << "\n";
      out << "- Ref: "
          << apply_highlights(item->reference, item->reference_highlights) << "\n";
      if (outputs == nullptr) continue;
      for (const auto& system : outputs->systems()) {
        const SystemOutput* o = outputs->find(system, item->id);
        if (o == nullptr) continue;
        out << "- " << system << ": " << o->translation;
        if (verdicts != nullptr) {
          out << (marks.at({system, item->id}) ? " ✓" : " ✗");
        }
        out << "\n";
      }
    }
  }
  return out.str();
}

}  // namespace chalset
