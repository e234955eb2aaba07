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

#include "chalset/store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <regex>
#include <sstream>

#include "json.hpp"

namespace chalset {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void storage_error(const std::string& what, const fs::path& path) {
  throw Error(ErrorCode::kStorage, what + " '" + path.string() + "'", path.string());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) storage_error("cannot read", path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) storage_error("cannot write", path);
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  out.flush();
  if (!out) storage_error("write failed for", path);
}

void sync_path(const fs::path& path) {
  const int fd = ::open(path.c_str(), O_RDONLY);
  if (fd < 0) return;
  ::fsync(fd);
  ::close(fd);
}

}  // namespace

bool is_safe_name(std::string_view name) {
  static const std::regex kPattern("[A-Za-z0-9_.-]{1,64}");
  return name != "." && name != ".." &&
         std::regex_match(name.begin(), name.end(), kPattern);
}

std::string serialize_project_config(const ProjectConfig& config) {
  json doc;
  doc["format"] = "project-config";
  doc["schema_version"] = 1;
  doc["project_id"] = config.project_id;
  doc["master_seed"] = config.master_seed;
  doc["systems"] = config.systems;
  doc["admin_token"] = config.admin_token;
  json roster = json::array();
  for (const auto& r : config.roster) {
    roster.push_back({{"annotator_id", r.annotator_id}, {"token", r.token}});
  }
  doc["roster"] = std::move(roster);
  return doc.dump(2) + "\n";
}

ProjectConfig parse_project_config(std::string_view document) {
  try {
    const json doc = json::parse(document);
    ProjectConfig config;
    config.project_id = doc.at("project_id").get<std::string>();
    config.master_seed = doc.at("master_seed").get<std::uint64_t>();
    config.systems = doc.at("systems").get<std::vector<std::string>>();
    config.admin_token = doc.at("admin_token").get<std::string>();
    for (const auto& r : doc.at("roster")) {
      config.roster.push_back(
          {r.at("annotator_id").get<std::string>(), r.at("token").get<std::string>()});
    }
    return config;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformed, std::string("malformed project config: ") + e.what());
  }
}

void write_project(const fs::path& data_dir, const ProjectData& data) {
  const std::string& id = data.config.project_id;
  if (!is_safe_name(id)) {
    throw Error(ErrorCode::kInvalidValue, "invalid project id '" + id + "'", id);
  }
  std::error_code ec;
  fs::create_directories(data_dir, ec);
  if (ec) storage_error("cannot create data directory", data_dir);

  const fs::path final_dir = data_dir / id;
  if (fs::exists(final_dir)) {
    throw Error(ErrorCode::kConflict, "project '" + id + "' already exists", id);
  }
  static std::atomic<std::uint64_t> staging_counter{0};
  const fs::path staging = data_dir / (".staging-" + id + "-" + std::to_string(::getpid()) +
                                       "-" + std::to_string(staging_counter++));
  fs::create_directories(staging / "sessions", ec);
  if (ec) storage_error("cannot create staging directory", staging);

  try {
    write_file(staging / "project.json", serialize_project_config(data.config));
    write_file(staging / "challenge_set.json", serialize_challenge_set(data.set));
    write_file(staging / "outputs.json", serialize_outputs(data.outputs));
    write_file(staging / "blinding_key.json", serialize_blinding_key(data.key));
    for (const auto& s : data.sessions) {
      write_file(staging / "sessions" / (s.annotator_id + ".json"), serialize_session(s));
    }
    write_file(staging / "judgments.log", "");
    sync_path(staging);
    fs::rename(staging, final_dir, ec);
    if (ec) {
      if (fs::exists(final_dir)) {
        throw Error(ErrorCode::kConflict, "project '" + id + "' already exists", id);
      }
      storage_error("cannot publish project", final_dir);
    }
    sync_path(data_dir);
  } catch (...) {
    fs::remove_all(staging, ec);
    throw;
  }
}

ProjectData load_project(const fs::path& project_dir) {
  if (!fs::is_directory(project_dir)) {
    throw Error(ErrorCode::kNotFound, "no project at '" + project_dir.string() + "'",
                project_dir.string());
  }
  ProjectData data;
  data.config = parse_project_config(read_file(project_dir / "project.json"));
  data.set = parse_challenge_set(read_file(project_dir / "challenge_set.json"));
  data.outputs = parse_outputs(read_file(project_dir / "outputs.json"), data.set).outputs;
  data.key = parse_blinding_key(read_file(project_dir / "blinding_key.json"));
  for (const auto& r : data.config.roster) {
    data.sessions.push_back(
        parse_session(read_file(project_dir / "sessions" / (r.annotator_id + ".json"))));
  }
  return data;
}

std::string serialize_record(const JudgmentRecord& record) {
  json obj;
  obj["annotator_id"] = record.annotator_id;
  obj["item_id"] = record.item_id;
  obj["blind_label"] = record.blind_label;
  obj["verdict"] = verdict_name(record.verdict);
  obj["revision"] = record.revision;
  obj["timestamp"] = record.timestamp;
  return obj.dump();
}

std::optional<JudgmentRecord> parse_record(std::string_view line) {
  try {
    const json obj = json::parse(line);
    JudgmentRecord r;
    r.annotator_id = obj.at("annotator_id").get<std::string>();
    r.item_id = obj.at("item_id").get<std::string>();
    r.blind_label = obj.at("blind_label").get<std::string>();
    const auto verdict = parse_verdict(obj.at("verdict").get<std::string>());
    if (!verdict) return std::nullopt;
    r.verdict = *verdict;
    r.revision = obj.at("revision").get<std::uint64_t>();
    r.timestamp = obj.at("timestamp").get<std::string>();
    return r;
  } catch (const json::exception&) {
    return std::nullopt;
  }
}

LogReplay replay_log(const fs::path& path) {
  LogReplay replay;
  if (!fs::exists(path)) return replay;
  const std::string contents = read_file(path);
  std::size_t pos = 0;
  while (pos < contents.size()) {
    const auto nl = contents.find('\n', pos);
    if (nl == std::string::npos) break;  // torn final line: never acknowledged
    auto record = parse_record(std::string_view(contents).substr(pos, nl - pos));
    if (!record) break;
    replay.records.push_back(std::move(*record));
    pos = nl + 1;
    replay.valid_bytes = pos;
  }
  return replay;
}

JudgmentLog::JudgmentLog(fs::path path) : path_(std::move(path)) {
  LogReplay replay = replay_log(path_);
  fd_ = ::open(path_.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd_ < 0) storage_error("cannot open judgment log", path_);
  if (::ftruncate(fd_, static_cast<off_t>(replay.valid_bytes)) != 0) {
    ::close(fd_);
    fd_ = -1;
    storage_error("cannot trim judgment log", path_);
  }
  records_ = std::move(replay.records);
  size_ = replay.valid_bytes;
}

JudgmentLog::~JudgmentLog() {
  if (fd_ >= 0) ::close(fd_);
}

void JudgmentLog::append(const JudgmentRecord& record) {
  const std::string line = serialize_record(record) + "\n";
  std::size_t written = 0;
  while (written < line.size()) {
    const ssize_t n = ::write(fd_, line.data() + written, line.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      const std::string reason = std::strerror(errno);
      // Drop the partial line so the next append starts on a record boundary.
      [[maybe_unused]] const int rc = ::ftruncate(fd_, static_cast<off_t>(size_));
      storage_error("append failed (" + reason + ") for", path_);
    }
    written += static_cast<std::size_t>(n);
  }
  if (::fsync(fd_) != 0) {
    const std::string reason = std::strerror(errno);
    [[maybe_unused]] const int rc = ::ftruncate(fd_, static_cast<off_t>(size_));
    storage_error("fsync failed (" + reason + ") for", path_);
  }
  size_ += line.size();
  records_.push_back(record);
}

}  // namespace chalset
