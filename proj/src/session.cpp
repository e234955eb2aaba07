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

#include "chalset/session.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "chalset/random.hpp"
#include "json.hpp"

namespace chalset {

using json = nlohmann::ordered_json;

const SessionItem* AnnotationSession::find(std::string_view item_id) const {
  for (const auto& item : items) {
    if (item.item_id == item_id) return &item;
  }
  return nullptr;
}

void BlindingKey::add(std::string annotator_id, std::string item_id,
                      std::string blind_label, std::string system_id) {
  entries_.insert_or_assign(
      Slot{std::move(annotator_id), std::move(item_id), std::move(blind_label)},
      std::move(system_id));
}

const std::string* BlindingKey::lookup(std::string_view annotator_id,
                                       std::string_view item_id,
                                       std::string_view blind_label) const {
  const auto it = entries_.find(Slot{std::string(annotator_id),
                                     std::string(item_id),
                                     std::string(blind_label)});
  return it == entries_.end() ? nullptr : &it->second;
}

std::string blind_label(std::size_t index) {
  std::string label;
  std::size_t n = index + 1;
  while (n > 0) {
    --n;
    label.insert(label.begin(), static_cast<char>('A' + n % 26));
    n /= 26;
  }
  return label;
}

SessionPlan build_sessions(const ChallengeSet& set, const SystemOutputSet& outputs,
                           const std::vector<std::string>& annotators,
                           std::uint64_t master_seed) {
  if (outputs.systems().empty()) {
    throw Error(ErrorCode::kNoSystems, "cannot build sessions without systems", "");
  }
  outputs.require_complete(set);
  std::set<std::string, std::less<>> unique;
  for (const auto& a : annotators) {
    if (a.empty()) {
      throw Error(ErrorCode::kInvalidValue, "annotator id must be non-empty", "");
    }
    if (!unique.insert(a).second) {
      throw Error(ErrorCode::kDuplicateAnnotator, "duplicate annotator id " + a, a);
    }
  }

  std::vector<std::string> systems = outputs.systems();
  std::sort(systems.begin(), systems.end());

  SessionPlan plan;
  for (const auto& annotator : annotators) {
    SplitMix64 rng(derive_seed(master_seed, annotator));
    std::vector<std::size_t> item_order(set.items.size());
    std::iota(item_order.begin(), item_order.end(), std::size_t{0});
    shuffle(std::span<std::size_t>(item_order), rng);

    AnnotationSession session;
    session.annotator_id = annotator;
    session.master_seed = master_seed;
    for (const std::size_t index : item_order) {
      const ChallengeItem& item = set.items[index];
      std::vector<std::string> order = systems;
      shuffle(std::span<std::string>(order), rng);
      SessionItem entry;
      entry.item_id = item.id;
      for (std::size_t k = 0; k < order.size(); ++k) {
        std::string label = blind_label(k);
        entry.blinded_outputs.push_back(
            {label, outputs.find(order[k], item.id)->translation});
        plan.key.add(annotator, item.id, std::move(label), order[k]);
      }
      session.items.push_back(std::move(entry));
    }
    plan.sessions.push_back(std::move(session));
  }
  return plan;
}

std::vector<Judgment> unblind(const std::vector<BlindJudgment>& blind_judgments,
                              const BlindingKey& key) {
  std::set<BlindingKey::Slot> seen;
  std::vector<Judgment> out;
  out.reserve(blind_judgments.size());
  for (const auto& b : blind_judgments) {
    const std::string slot =
        "(" + b.annotator_id + ", " + b.item_id + ", " + b.blind_label + ")";
    const std::string* system = key.lookup(b.annotator_id, b.item_id, b.blind_label);
    if (system == nullptr) {
      throw Error(ErrorCode::kUnknownTriple, "unknown blinded slot " + slot, slot);
    }
    if (!seen.emplace(b.annotator_id, b.item_id, b.blind_label).second) {
      throw Error(ErrorCode::kDuplicateTriple, "duplicate judgment for " + slot, slot);
    }
    out.push_back({b.annotator_id, b.item_id, *system, b.verdict, b.revision,
                   b.timestamp});
  }
  return out;
}

namespace {

json parse_json(std::string_view document, std::string_view format) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kMalformed, std::string("malformed document: ") + e.what());
  }
  if (!doc.is_object() || doc.value("format", "") != format) {
    throw Error(ErrorCode::kMalformed,
                "expected a '" + std::string(format) + "' document", "format");
  }
  return doc;
}

template <typename T>
T field(const json& obj, const char* key) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::kMissingField,
                std::string("missing or mistyped field '") + key + "'", key);
  }
}

}  // namespace

std::string serialize_session(const AnnotationSession& session) {
  json doc;
  doc["format"] = "annotation-session";
  doc["schema_version"] = 1;
  doc["annotator_id"] = session.annotator_id;
  doc["master_seed"] = session.master_seed;
  json items = json::array();
  for (const auto& item : session.items) {
    json outs = json::array();
    for (const auto& o : item.blinded_outputs) {
      outs.push_back({{"blind_label", o.blind_label}, {"translation", o.translation}});
    }
    items.push_back({{"item_id", item.item_id}, {"outputs", std::move(outs)}});
  }
  doc["items"] = std::move(items);
  return doc.dump(2) + "\n";
}

AnnotationSession parse_session(std::string_view document) {
  const json doc = parse_json(document, "annotation-session");
  AnnotationSession session;
  session.annotator_id = field<std::string>(doc, "annotator_id");
  session.master_seed = field<std::uint64_t>(doc, "master_seed");
  for (const auto& item : field<json>(doc, "items")) {
    SessionItem entry;
    entry.item_id = field<std::string>(item, "item_id");
    for (const auto& o : field<json>(item, "outputs")) {
      entry.blinded_outputs.push_back({field<std::string>(o, "blind_label"),
                                       field<std::string>(o, "translation")});
    }
    session.items.push_back(std::move(entry));
  }
  return session;
}

std::string serialize_blinding_key(const BlindingKey& key) {
  json doc;
  doc["format"] = "blinding-key";
  doc["schema_version"] = 1;
  doc["sensitive"] = true;
  json entries = json::array();
  for (const auto& [slot, system] : key.entries()) {
    const auto& [annotator, item, label] = slot;
    entries.push_back({{"annotator_id", annotator},
                       {"item_id", item},
                       {"blind_label", label},
                       {"system_id", system}});
  }
  doc["entries"] = std::move(entries);
  return doc.dump(2) + "\n";
}

BlindingKey parse_blinding_key(std::string_view document) {
  const json doc = parse_json(document, "blinding-key");
  BlindingKey key;
  for (const auto& e : field<json>(doc, "entries")) {
    key.add(field<std::string>(e, "annotator_id"), field<std::string>(e, "item_id"),
            field<std::string>(e, "blind_label"), field<std::string>(e, "system_id"));
  }
  return key;
}

std::string serialize_blind_judgments(const std::vector<BlindJudgment>& judgments) {
  json doc;
  doc["format"] = "blind-judgments";
  doc["schema_version"] = 1;
  json rows = json::array();
  for (const auto& j : judgments) {
    rows.push_back({{"annotator_id", j.annotator_id},
                    {"item_id", j.item_id},
                    {"blind_label", j.blind_label},
                    {"verdict", verdict_name(j.verdict)},
                    {"revision", j.revision},
                    {"timestamp", j.timestamp}});
  }
  doc["judgments"] = std::move(rows);
  return doc.dump(2) + "\n";
}

std::vector<BlindJudgment> parse_blind_judgments(std::string_view document) {
  const json doc = parse_json(document, "blind-judgments");
  std::vector<BlindJudgment> out;
  for (const auto& j : field<json>(doc, "judgments")) {
    BlindJudgment b;
    b.annotator_id = field<std::string>(j, "annotator_id");
    b.item_id = field<std::string>(j, "item_id");
    b.blind_label = field<std::string>(j, "blind_label");
    const std::string verdict = field<std::string>(j, "verdict");
    const auto parsed = parse_verdict(verdict);
    if (!parsed) {
      throw Error(ErrorCode::kInvalidVerdict,
                  "invalid verdict '" + verdict + "'; allowed values: yes, no, not-applicable",
                  verdict);
    }
    b.verdict = *parsed;
    if (j.contains("revision")) b.revision = field<std::uint64_t>(j, "revision");
    if (j.contains("timestamp")) b.timestamp = field<std::string>(j, "timestamp");
    out.push_back(std::move(b));
  }
  return out;
}

}  // namespace chalset
