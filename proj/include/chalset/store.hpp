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

#ifndef CHALSET_STORE_HPP_
#define CHALSET_STORE_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chalset/core.hpp"
#include "chalset/judgment.hpp"
#include "chalset/session.hpp"

// On-disk layout of one project:
//
//   <data_dir>/<project_id>/
//     project.json          roster, tokens, seed, system ids
//     challenge_set.json
//     outputs.json
//     blinding_key.json     sensitive; never served to annotators
//     sessions/<annotator_id>.json
//     judgments.log         append-only, one JSON record per line
namespace chalset {

struct RosterEntry {
  std::string annotator_id;
  std::string token;

  friend bool operator==(const RosterEntry&, const RosterEntry&) = default;
};

struct ProjectConfig {
  std::string project_id;
  std::vector<RosterEntry> roster;
  std::string admin_token;
  std::uint64_t master_seed = 0;
  std::vector<std::string> systems;

  friend bool operator==(const ProjectConfig&, const ProjectConfig&) = default;
};

struct ProjectData {
  ProjectConfig config;
  ChallengeSet set;
  SystemOutputSet outputs;
  std::vector<AnnotationSession> sessions;
  BlindingKey key;
};

// Names used as path components: [A-Za-z0-9_.-], 1..64 chars, not "." or "..".
bool is_safe_name(std::string_view name);

std::string serialize_project_config(const ProjectConfig& config);
ProjectConfig parse_project_config(std::string_view document);

// Writes every immutable file into a staging directory and renames it into
// place, so a project directory is either complete or absent. Throws
// kConflict if the project exists and kStorage on I/O failure.
void write_project(const std::filesystem::path& data_dir, const ProjectData& data);
ProjectData load_project(const std::filesystem::path& project_dir);

struct JudgmentRecord {
  std::string annotator_id;
  std::string item_id;
  std::string blind_label;
  Verdict verdict = Verdict::kNo;
  std::uint64_t revision = 0;
  std::string timestamp;

  friend bool operator==(const JudgmentRecord&, const JudgmentRecord&) = default;
};

// Single line, no trailing newline.
std::string serialize_record(const JudgmentRecord& record);
std::optional<JudgmentRecord> parse_record(std::string_view line);

struct LogReplay {
  std::vector<JudgmentRecord> records;
  std::uintmax_t valid_bytes = 0;  // length of the intact, newline-terminated prefix
};

// Reads records up to the first torn or unparsable line.
LogReplay replay_log(const std::filesystem::path& path);

// Append-only judgment log. Not internally synchronized; callers serialize
// appends. A torn tail left by a crash is cut off when the log is opened.
class JudgmentLog {
 public:
  explicit JudgmentLog(std::filesystem::path path);
  ~JudgmentLog();

  JudgmentLog(const JudgmentLog&) = delete;
  JudgmentLog& operator=(const JudgmentLog&) = delete;

  const std::vector<JudgmentRecord>& records() const { return records_; }
  const std::filesystem::path& path() const { return path_; }

  // Returns once the line is written and fsync'ed. Throws kStorage, in which
  // case the record must be treated as absent.
  void append(const JudgmentRecord& record);

 private:
  std::filesystem::path path_;
  int fd_ = -1;
  std::uintmax_t size_ = 0;
  std::vector<JudgmentRecord> records_;
};

}  // namespace chalset

#endif  // CHALSET_STORE_HPP_
