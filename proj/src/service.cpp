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

#include "chalset/service.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <set>
#include <shared_mutex>

namespace chalset {

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t secs = std::chrono::system_clock::to_time_t(now);
  const auto millis = std::chrono::duration_cast<std::chrono::milliseconds>(
                          now.time_since_epoch())
                          .count() %
                      1000;
  std::tm tm{};
  ::gmtime_r(&secs, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%S", &tm);
  char out[40];
  std::snprintf(out, sizeof(out), "%s.%03dZ", buf, static_cast<int>(millis));
  return out;
}

struct Service::Project {
  ProjectData data;
  std::unique_ptr<JudgmentLog> log;
  mutable std::shared_mutex mutex;
  std::map<std::string, std::string, std::less<>> annotator_by_token;
  std::map<std::string, const AnnotationSession*, std::less<>> session_by_annotator;
  // (annotator, item, label) -> index of the effective record in log->records().
  std::map<BlindingKey::Slot, std::size_t> effective;

  std::size_t slots_per_annotator() const {
    return data.set.items.size() * data.config.systems.size();
  }

  void apply(std::size_t index) {
    const JudgmentRecord& r = log->records()[index];
    BlindingKey::Slot slot{r.annotator_id, r.item_id, r.blind_label};
    const auto it = effective.find(slot);
    if (it == effective.end() || log->records()[it->second].revision <= r.revision) {
      effective[std::move(slot)] = index;
    }
  }

  const std::string& annotator_for(std::string_view token) const {
    const auto it = annotator_by_token.find(token);
    if (token.empty() || it == annotator_by_token.end()) {
      throw Error(ErrorCode::kUnauthorized, "invalid or missing token");
    }
    return it->second;
  }

  void require_admin(std::string_view token) const {
    if (!token.empty() && token == data.config.admin_token) return;
    if (!token.empty() && annotator_by_token.contains(token)) {
      throw Error(ErrorCode::kForbidden, "admin token required");
    }
    throw Error(ErrorCode::kUnauthorized, "invalid or missing token");
  }

  const AnnotationSession& session_of(std::string_view annotator_id) const {
    return *session_by_annotator.find(annotator_id)->second;
  }

  std::size_t judged_by(std::string_view annotator_id) const {
    std::size_t n = 0;
    for (const auto& [slot, index] : effective) {
      if (std::get<0>(slot) == annotator_id) ++n;
    }
    return n;
  }
};

Service::Service(Options options) : options_(std::move(options)) {
  if (!options_.clock) options_.clock = utc_timestamp;
}

Service::~Service() = default;

namespace {

void validate_request(const CreateProjectRequest& request) {
  if (!is_safe_name(request.project_id)) {
    throw Error(ErrorCode::kInvalidValue,
                "project id must match [A-Za-z0-9_.-]{1,64}", request.project_id);
  }
  const ValidationReport report = validate_challenge_set(request.set);
  if (!report.ok()) {
    std::string list;
    for (const auto& f : report.errors) {
      if (!list.empty()) list += "; ";
      list += (f.item_id.empty() ? f.field : f.item_id + " " + f.field) + ": " + f.message;
    }
    throw Error(ErrorCode::kInvalidValue, "challenge set is invalid: " + list, list);
  }
  for (const auto& o : request.outputs.outputs()) {
    if (request.set.find(o.item_id) == nullptr) {
      throw Error(ErrorCode::kUnknownItem, "output for unknown item " + o.item_id,
                  o.item_id);
    }
  }
  request.outputs.require_complete(request.set);

  if (request.roster.empty()) {
    throw Error(ErrorCode::kInvalidValue, "roster must list at least one annotator");
  }
  if (request.admin_token.empty()) {
    throw Error(ErrorCode::kInvalidValue, "admin token must be non-empty");
  }
  std::set<std::string, std::less<>> ids;
  std::set<std::string, std::less<>> tokens{request.admin_token};
  for (const auto& r : request.roster) {
    if (!is_safe_name(r.annotator_id)) {
      throw Error(ErrorCode::kInvalidValue,
                  "annotator id must match [A-Za-z0-9_.-]{1,64}", r.annotator_id);
    }
    if (!ids.insert(r.annotator_id).second) {
      throw Error(ErrorCode::kDuplicateAnnotator, "duplicate annotator " + r.annotator_id,
                  r.annotator_id);
    }
    if (r.token.empty() || !tokens.insert(r.token).second) {
      throw Error(ErrorCode::kInvalidValue,
                  "annotator tokens must be non-empty and distinct from every other token",
                  r.annotator_id);
    }
  }
}

}  // namespace

std::string Service::create_project(const CreateProjectRequest& request) {
  validate_request(request);
  std::vector<std::string> annotators;
  for (const auto& r : request.roster) annotators.push_back(r.annotator_id);
  SessionPlan plan =
      build_sessions(request.set, request.outputs, annotators, request.master_seed);

  ProjectData data;
  data.config.project_id = request.project_id;
  data.config.roster = request.roster;
  data.config.admin_token = request.admin_token;
  data.config.master_seed = request.master_seed;
  data.config.systems = request.outputs.systems();
  data.set = request.set;
  data.outputs = request.outputs;
  data.sessions = std::move(plan.sessions);
  data.key = std::move(plan.key);

  std::lock_guard lock(projects_mutex_);
  if (projects_.contains(request.project_id)) {
    throw Error(ErrorCode::kConflict, "project '" + request.project_id + "' already exists",
                request.project_id);
  }
  write_project(options_.data_dir, data);
  return request.project_id;
}

std::shared_ptr<Service::Project> Service::open(std::string_view project_id) const {
  if (!is_safe_name(project_id)) {
    throw Error(ErrorCode::kNotFound, "unknown project '" + std::string(project_id) + "'",
                std::string(project_id));
  }
  std::lock_guard lock(projects_mutex_);
  if (const auto it = projects_.find(project_id); it != projects_.end()) return it->second;

  const auto dir = options_.data_dir / std::string(project_id);
  if (!std::filesystem::is_directory(dir)) {
    throw Error(ErrorCode::kNotFound, "unknown project '" + std::string(project_id) + "'",
                std::string(project_id));
  }
  auto project = std::make_shared<Project>();
  project->data = load_project(dir);
  project->log = std::make_unique<JudgmentLog>(dir / "judgments.log");
  for (const auto& r : project->data.config.roster) {
    project->annotator_by_token.emplace(r.token, r.annotator_id);
  }
  for (const auto& s : project->data.sessions) {
    project->session_by_annotator.emplace(s.annotator_id, &s);
  }
  for (std::size_t i = 0; i < project->log->records().size(); ++i) project->apply(i);
  projects_.emplace(std::string(project_id), project);
  return project;
}

AnnotationSession Service::session(std::string_view project_id,
                                   std::string_view token) const {
  const auto project = open(project_id);
  std::shared_lock lock(project->mutex);
  return project->session_of(project->annotator_for(token));
}

NextPending Service::next_pending(std::string_view project_id,
                                  std::string_view token) const {
  const auto project = open(project_id);
  std::shared_lock lock(project->mutex);
  const std::string& annotator = project->annotator_for(token);
  const AnnotationSession& session = project->session_of(annotator);

  NextPending result;
  result.total = project->slots_per_annotator();
  result.judged = project->judged_by(annotator);

  for (std::size_t pos = 0; pos < session.items.size(); ++pos) {
    const SessionItem& entry = session.items[pos];
    PendingItem pending;
    bool open_slot = false;
    for (const auto& o : entry.blinded_outputs) {
      PendingOutput out{o.blind_label, o.translation, std::nullopt};
      const auto it =
          project->effective.find({annotator, entry.item_id, o.blind_label});
      if (it == project->effective.end()) {
        open_slot = true;
      } else {
        out.current = project->log->records()[it->second].verdict;
      }
      pending.outputs.push_back(std::move(out));
    }
    if (!open_slot) continue;
    const ChallengeItem& item = *project->data.set.find(entry.item_id);
    pending.position = pos;
    pending.item_id = item.id;
    pending.question = item.question;
    pending.source = item.source;
    pending.source_highlights = item.source_highlights;
    pending.reference = item.reference;
    pending.reference_highlights = item.reference_highlights;
    result.item = std::move(pending);
    return result;
  }
  result.done = true;
  return result;
}

Acknowledgment Service::append_locked(Project& project, const std::string& annotator_id,
                                      std::string_view item_id,
                                      std::string_view blind_label, Verdict verdict,
                                      std::optional<std::string> timestamp) {
  const SessionItem* entry = project.session_of(annotator_id).find(item_id);
  const bool known =
      entry != nullptr &&
      std::any_of(entry->blinded_outputs.begin(), entry->blinded_outputs.end(),
                  [&](const BlindedOutput& o) { return o.blind_label == blind_label; });
  if (!known) {
    const std::string slot = "(" + std::string(item_id) + ", " + std::string(blind_label) + ")";
    throw Error(ErrorCode::kUnknownSlot,
                "slot " + slot + " is not in the session of " + annotator_id, slot);
  }
  JudgmentRecord record;
  record.annotator_id = annotator_id;
  record.item_id = std::string(item_id);
  record.blind_label = std::string(blind_label);
  record.verdict = verdict;
  const auto it = project.effective.find({record.annotator_id, record.item_id,
                                          record.blind_label});
  record.revision =
      it == project.effective.end() ? 0 : project.log->records()[it->second].revision + 1;
  record.timestamp = timestamp && !timestamp->empty() ? std::move(*timestamp)
                                                      : options_.clock();
  project.log->append(record);
  project.apply(project.log->records().size() - 1);
  return {record.revision, record.timestamp};
}

Acknowledgment Service::submit_judgment(std::string_view project_id,
                                        std::string_view token, std::string_view item_id,
                                        std::string_view blind_label,
                                        std::string_view verdict) {
  const auto project = open(project_id);
  const auto parsed = parse_verdict(verdict);
  std::unique_lock lock(project->mutex);
  const std::string annotator = project->annotator_for(token);
  if (!parsed) {
    throw Error(ErrorCode::kInvalidVerdict,
                "invalid verdict '" + std::string(verdict) +
                    "'; allowed values: yes, no, not-applicable",
                std::string(verdict));
  }
  return append_locked(*project, annotator, item_id, blind_label, *parsed, std::nullopt);
}

Progress Service::progress(std::string_view project_id, std::string_view token) const {
  const auto project = open(project_id);
  std::shared_lock lock(project->mutex);
  if (token != project->data.config.admin_token) project->annotator_for(token);
  Progress result;
  for (const auto& r : project->data.config.roster) {
    result.annotators.push_back(
        {r.annotator_id, project->judged_by(r.annotator_id), project->slots_per_annotator()});
  }
  for (const auto& [slot, index] : project->effective) {
    switch (project->log->records()[index].verdict) {
      case Verdict::kYes: ++result.yes; break;
      case Verdict::kNo: ++result.no; break;
      case Verdict::kNotApplicable: ++result.not_applicable; break;
    }
  }
  return result;
}

ExportResult Service::export_judgments(std::string_view project_id,
                                       std::string_view admin_token) const {
  const auto project = open(project_id);
  std::shared_lock lock(project->mutex);
  project->require_admin(admin_token);

  std::vector<BlindJudgment> blind;
  for (const auto& [slot, index] : project->effective) {
    const JudgmentRecord& r = project->log->records()[index];
    blind.push_back({r.annotator_id, r.item_id, r.blind_label, r.verdict, r.revision,
                     r.timestamp});
  }
  ExportResult result;
  result.judgments = unblind(blind, project->data.key);

  std::map<SystemItemPair, std::size_t> counts;
  for (const auto& j : result.judgments) ++counts[{j.system_id, j.item_id}];
  const std::size_t panel = project->data.config.roster.size();
  result.complete = true;
  for (const auto& item : project->data.set.items) {
    for (const auto& system : project->data.config.systems) {
      const auto it = counts.find({system, item.id});
      const std::size_t n = it == counts.end() ? 0 : it->second;
      result.completeness.push_back({item.id, system, n, n == panel});
      result.complete = result.complete && n == panel;
    }
  }
  return result;
}

std::size_t Service::ingest(std::string_view project_id, std::string_view admin_token,
                            const std::vector<BlindJudgment>& judgments) {
  const auto project = open(project_id);
  std::unique_lock lock(project->mutex);
  project->require_admin(admin_token);
  for (const auto& j : judgments) {
    if (!project->session_by_annotator.contains(j.annotator_id)) {
      throw Error(ErrorCode::kUnknownTriple, "unknown annotator " + j.annotator_id,
                  j.annotator_id);
    }
  }
  std::size_t appended = 0;
  for (const auto& j : judgments) {
    append_locked(*project, j.annotator_id, j.item_id, j.blind_label, j.verdict,
                  j.timestamp);
    ++appended;
  }
  return appended;
}

}  // namespace chalset
