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

#ifndef CHALSET_SESSION_HPP_
#define CHALSET_SESSION_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "chalset/core.hpp"
#include "chalset/judgment.hpp"

namespace chalset {

struct BlindedOutput {
  std::string blind_label;
  std::string translation;

  friend bool operator==(const BlindedOutput&, const BlindedOutput&) = default;
};

struct SessionItem {
  std::string item_id;
  std::vector<BlindedOutput> blinded_outputs;

  friend bool operator==(const SessionItem&, const SessionItem&) = default;
};

struct AnnotationSession {
  std::string annotator_id;
  std::uint64_t master_seed = 0;
  std::vector<SessionItem> items;

  const SessionItem* find(std::string_view item_id) const;

  friend bool operator==(const AnnotationSession&, const AnnotationSession&) = default;
};

// (annotator, item, blind label) -> system. Kept apart from sessions; it is
// the only place system identities live after blinding.
class BlindingKey {
 public:
  using Slot = std::tuple<std::string, std::string, std::string>;

  void add(std::string annotator_id, std::string item_id, std::string blind_label,
           std::string system_id);
  const std::string* lookup(std::string_view annotator_id, std::string_view item_id,
                            std::string_view blind_label) const;

  const std::map<Slot, std::string>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  friend bool operator==(const BlindingKey&, const BlindingKey&) = default;

 private:
  std::map<Slot, std::string> entries_;
};

struct SessionPlan {
  std::vector<AnnotationSession> sessions;
  BlindingKey key;
};

// "A".."Z", then "AA", "AB", ...
std::string blind_label(std::size_t index);

// For each annotator, items are shuffled with a generator seeded by
// derive_seed(master_seed, annotator_id); then, in presentation order, each
// item's outputs (systems in sorted id order) are shuffled from the same
// stream and labelled A, B, C... in presented order.
SessionPlan build_sessions(const ChallengeSet& set, const SystemOutputSet& outputs,
                           const std::vector<std::string>& annotators,
                           std::uint64_t master_seed);

struct BlindJudgment {
  std::string annotator_id;
  std::string item_id;
  std::string blind_label;
  Verdict verdict = Verdict::kNo;
  std::uint64_t revision = 0;
  std::string timestamp;
};

// Throws kUnknownTriple for a slot absent from the key and kDuplicateTriple
// when the same slot appears twice.
std::vector<Judgment> unblind(const std::vector<BlindJudgment>& blind_judgments,
                              const BlindingKey& key);

std::string serialize_session(const AnnotationSession& session);
AnnotationSession parse_session(std::string_view document);
std::string serialize_blinding_key(const BlindingKey& key);
BlindingKey parse_blinding_key(std::string_view document);

// Format "blind-judgments": judgments keyed by blind label, as collected
// outside the service. "revision" and "timestamp" are optional on input.
std::string serialize_blind_judgments(const std::vector<BlindJudgment>& judgments);
std::vector<BlindJudgment> parse_blind_judgments(std::string_view document);

}  // namespace chalset

#endif  // CHALSET_SESSION_HPP_
