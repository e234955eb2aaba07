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

#ifndef CHALSET_SERVICE_HPP_
#define CHALSET_SERVICE_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chalset/core.hpp"
#include "chalset/scoring.hpp"
#include "chalset/session.hpp"
#include "chalset/store.hpp"

namespace chalset {

struct CreateProjectRequest {
  std::string project_id;
  ChallengeSet set;
  SystemOutputSet outputs;
  std::vector<RosterEntry> roster;
  std::string admin_token;
  std::uint64_t master_seed = 0;
};

struct PendingOutput {
  std::string blind_label;
  std::string translation;
  std::optional<Verdict> current;  // effective verdict, if already judged
};

// Everything an annotator needs to judge one item. Carries no system ids.
struct PendingItem {
  std::size_t position = 0;  // index in the annotator's session order
  std::string item_id;
  std::string question;
  std::string source;
  std::vector<HighlightSpan> source_highlights;
  std::string reference;
  std::vector<HighlightSpan> reference_highlights;
  std::vector<PendingOutput> outputs;
};

struct NextPending {
  bool done = false;
  std::optional<PendingItem> item;
  std::size_t judged = 0;
  std::size_t total = 0;
};

struct Acknowledgment {
  std::uint64_t revision = 0;
  std::string timestamp;
};

struct AnnotatorProgress {
  std::string annotator_id;
  std::size_t judged = 0;
  std::size_t total = 0;
};

struct Progress {
  std::vector<AnnotatorProgress> annotators;
  std::size_t yes = 0;
  std::size_t no = 0;
  std::size_t not_applicable = 0;
};

struct PairCompleteness {
  std::string item_id;
  std::string system_id;
  std::size_t judged = 0;  // annotators with an effective judgment
  bool complete = false;
};

struct ExportResult {
  std::vector<Judgment> judgments;
  std::vector<PairCompleteness> completeness;
  bool complete = false;
};

// File-backed annotation service. Thread-safe: reads of a project run
// concurrently; appends to its judgment log are mutually exclusive and are
// durable before an acknowledgment is returned.
class Service {
 public:
  struct Options {
    std::filesystem::path data_dir;
    // Timestamp source; defaults to UTC ISO-8601 wall clock.
    std::function<std::string()> clock;
  };

  explicit Service(Options options);
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  // Validates inputs, builds sessions and persists the project.
  std::string create_project(const CreateProjectRequest& request);

  // Token-scoped: the caller's own session.
  AnnotationSession session(std::string_view project_id, std::string_view token) const;

  NextPending next_pending(std::string_view project_id, std::string_view token) const;

  Acknowledgment submit_judgment(std::string_view project_id, std::string_view token,
                                 std::string_view item_id, std::string_view blind_label,
                                 std::string_view verdict);

  // Any roster or admin token.
  Progress progress(std::string_view project_id, std::string_view token) const;

  ExportResult export_judgments(std::string_view project_id,
                                std::string_view admin_token) const;

  // Appends externally collected blind judgments (admin only). Each record
  // receives the next revision for its slot. Returns the number appended.
  std::size_t ingest(std::string_view project_id, std::string_view admin_token,
                     const std::vector<BlindJudgment>& judgments);

  const std::filesystem::path& data_dir() const { return options_.data_dir; }

 private:
  struct Project;

  std::shared_ptr<Project> open(std::string_view project_id) const;
  Acknowledgment append_locked(Project& project, const std::string& annotator_id,
                               std::string_view item_id, std::string_view blind_label,
                               Verdict verdict, std::optional<std::string> timestamp);

  Options options_;
  mutable std::mutex projects_mutex_;
  mutable std::map<std::string, std::shared_ptr<Project>, std::less<>> projects_;
};

// Current UTC time as "YYYY-MM-DDTHH:MM:SS.mmmZ".
std::string utc_timestamp();

}  // namespace chalset

#endif  // CHALSET_SERVICE_HPP_
