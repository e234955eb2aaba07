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

#include "chalset/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "chalset/core.hpp"
#include "chalset/error.hpp"
#include "chalset/fixture.hpp"
#include "chalset/http_api.hpp"
#include "chalset/lint.hpp"
#include "chalset/report.hpp"
#include "chalset/scoring.hpp"
#include "chalset/service.hpp"
#include "chalset/session.hpp"
#include "chalset/store.hpp"
#include "httplib.h"
#include "json.hpp"

namespace chalset {

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kNotFound, "cannot read " + path.string(), path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const fs::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << bytes;
  if (!out) throw Error(ErrorCode::kStorage, "cannot write " + path.string(), path.string());
}

ChallengeSet load_set(const std::string& path) {
  return path.empty() ? fixture::challenge_set() : parse_challenge_set(read_file(path));
}

SystemOutputSet load_outputs(const std::string& path, const ChallengeSet& set,
                             std::ostream& err) {
  if (path.empty()) return fixture::outputs();
  ParsedOutputs parsed = parse_outputs(read_file(path), set);
  for (const auto& w : parsed.warnings) err << "warning: " << w << "\n";
  return std::move(parsed.outputs);
}

void emit(std::ostream& out, const std::string& path, std::string_view bytes) {
  if (path.empty()) {
    out << bytes;
  } else {
    write_file(path, bytes);
  }
}

fs::path resolve_data_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("CHALSET_DATA_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  throw Error(ErrorCode::kInvalidValue,
              "no data directory: pass --data-dir or set CHALSET_DATA_DIR");
}

// ---- validate ----

struct ValidateArgs {
  std::string set;
  std::string outputs;
};

int cmd_validate(const ValidateArgs& a, std::ostream& out, std::ostream& err) {
  const ChallengeSet set = load_set(a.set);
  const ValidationReport report = validate_challenge_set(set);
  for (const auto& f : report.errors) {
    out << "error\t" << f.item_id << "\t" << f.field << "\t" << f.message << "\n";
  }
  for (const auto& f : report.warnings) {
    out << "warning\t" << f.item_id << "\t" << f.field << "\t" << f.message << "\n";
  }
  std::size_t output_warnings = 0;
  if (!a.outputs.empty()) {
    const ParsedOutputs parsed = parse_outputs(read_file(a.outputs), set);
    for (const auto& w : parsed.warnings) out << "warning\toutputs\t\t" << w << "\n";
    output_warnings = parsed.warnings.size();
  }
  (void)err;
  out << set.items.size() << " items, " << set.subcategories().size() << " subcategories, "
      << report.errors.size() << " errors, " << report.warnings.size() + output_warnings
      << " warnings\n";
  return report.ok() ? kExitOk : kExitFindings;
}

// ---- lint ----

struct LintArgs {
  std::string set;
  std::string freq;
  std::string corpus;
  std::uint64_t min_count = kDefaultMinCount;
  std::size_t max_tokens = kDefaultMaxTokens;
  std::vector<std::string> exceptions;
  std::string format = "text";
};

int cmd_lint(const LintArgs& a, std::ostream& out) {
  if (a.format != "text" && a.format != "json") {
    throw Error(ErrorCode::kUnknownFormat, "unknown lint format '" + a.format + "'", a.format);
  }
  const ChallengeSet set = load_set(a.set);
  LintReport report = lint_length(set, a.max_tokens);
  if (!a.freq.empty() || !a.corpus.empty()) {
    const FrequencyTable table =
        a.freq.empty() ? load_frequency_table(read_file(a.corpus), FrequencyInput::kCorpus)
                       : load_frequency_table(read_file(a.freq), FrequencyInput::kTable);
    report = merge(std::move(report), lint_vocabulary(set, table, a.min_count, a.exceptions));
  }
  out << (a.format == "json" ? format_lint_json(report) : format_lint_text(report));
  return report.empty() ? kExitOk : kExitFindings;
}

// ---- sessions ----

struct SessionsArgs {
  std::string set;
  std::string outputs;
  std::vector<std::string> annotators;
  std::uint64_t seed = 0;
  std::string out_dir;
};

int cmd_sessions(const SessionsArgs& a, std::ostream& out, std::ostream& err) {
  const ChallengeSet set = load_set(a.set);
  const SystemOutputSet outputs = load_outputs(a.outputs, set, err);
  const SessionPlan plan = build_sessions(set, outputs, a.annotators, a.seed);
  const fs::path dir(a.out_dir);
  fs::create_directories(dir / "sessions");
  for (const auto& s : plan.sessions) {
    write_file(dir / "sessions" / (s.annotator_id + ".json"), serialize_session(s));
  }
  write_file(dir / "blinding_key.json", serialize_blinding_key(plan.key));
  out << "wrote " << plan.sessions.size() << " sessions and a blinding key with "
      << plan.key.size() << " entries to " << dir.string() << "\n";
  return kExitOk;
}

// ---- serve ----

struct ServeArgs {
  std::string bind = "127.0.0.1:8080";
  std::string data_dir;
  std::string config;
};

// Server config: {"creator_token": "...", "projects": [{"project_id",
// "challenge_set" (path), "outputs" (path), "roster", "admin_token",
// "master_seed"}]}. Listed projects are created on start unless present.
HttpOptions apply_server_config(Service& service, const fs::path& path, std::ostream& out) {
  const Json config = Json::parse(read_file(path));
  HttpOptions options;
  options.creator_token = config.value("creator_token", "");
  const fs::path base = path.parent_path();
  for (const auto& p : config.value("projects", Json::array())) {
    CreateProjectRequest request;
    request.project_id = p.at("project_id").get<std::string>();
    if (fs::exists(service.data_dir() / request.project_id)) continue;
    const auto resolve = [&](const char* key) -> std::string {
      if (!p.contains(key)) return {};
      const fs::path rel = p.at(key).get<std::string>();
      return (rel.is_absolute() ? rel : base / rel).string();
    };
    request.set = load_set(resolve("challenge_set"));
    request.outputs = load_outputs(resolve("outputs"), request.set, out);
    request.admin_token = p.at("admin_token").get<std::string>();
    request.master_seed = p.value("master_seed", std::uint64_t{0});
    for (const auto& r : p.at("roster")) {
      request.roster.push_back(
          {r.at("annotator_id").get<std::string>(), r.at("token").get<std::string>()});
    }
    service.create_project(request);
    out << "created project " << request.project_id << "\n";
  }
  return options;
}

int cmd_serve(const ServeArgs& a, std::ostream& out) {
  const auto colon = a.bind.rfind(':');
  if (colon == std::string::npos) {
    throw Error(ErrorCode::kInvalidValue, "--bind must be HOST:PORT", a.bind);
  }
  const std::string host = a.bind.substr(0, colon);
  const int port = std::stoi(a.bind.substr(colon + 1));
  const fs::path data_dir = resolve_data_dir(a.data_dir);
  fs::create_directories(data_dir);

  Service service({data_dir, nullptr});
  HttpOptions options;
  if (!a.config.empty()) options = apply_server_config(service, a.config, out);
  httplib::Server server;
  install_routes(server, service, options);
  out << "listening on " << host << ":" << port << " (data dir " << data_dir.string()
      << ")\n"
      << std::flush;
  if (!server.listen(host, port)) {
    throw Error(ErrorCode::kStorage, "cannot listen on " + a.bind, a.bind);
  }
  return kExitOk;
}

// ---- ingest ----

struct IngestArgs {
  std::string data_dir;
  std::string project;
  std::string judgments;
};

int cmd_ingest(const IngestArgs& a, std::ostream& out) {
  const fs::path data_dir = resolve_data_dir(a.data_dir);
  const ProjectConfig config =
      parse_project_config(read_file(data_dir / a.project / "project.json"));
  Service service({data_dir, nullptr});
  const std::size_t n = service.ingest(a.project, config.admin_token,
                                       parse_blind_judgments(read_file(a.judgments)));
  out << "appended " << n << " judgments to " << a.project << "\n";
  return kExitOk;
}

// ---- score ----

struct ScoreArgs {
  std::string data_dir;
  std::string project;
  std::string judgments;
  std::string verdicts;
  std::string set;
  std::size_t panel_size = 3;
  std::string item_na = "non-positive";
  std::string judgment_na = "exclude";
  std::string out;
};

int score_from_judgments(const std::vector<Judgment>& judgments, const ChallengeSet& set,
                         const std::vector<std::string>& systems,
                         const std::vector<std::string>& annotators, const ScoreArgs& a,
                         std::ostream& out, std::ostream& err) {
  const auto missing = missing_judgments(judgments, set, systems, annotators);
  if (!missing.empty()) {
    for (const auto& [annotator, item, system] : missing) {
      err << "missing judgment: annotator " << annotator << ", item " << item << ", system "
          << system << "\n";
    }
    err << missing.size() << " judgments missing; nothing scored\n";
    return kExitFindings;
  }
  ScoringOptions options;
  options.panel_size = a.panel_size;
  if (a.item_na == "non-positive") {
    options.item_level_na = ItemLevelNa::kNonPositive;
  } else if (a.item_na == "exclude") {
    options.item_level_na = ItemLevelNa::kExcludeFromPanel;
  } else {
    throw Error(ErrorCode::kInvalidValue, "--item-na must be non-positive or exclude",
                a.item_na);
  }
  if (a.judgment_na == "exclude") {
    options.judgment_level_na = JudgmentLevelNa::kExclude;
  } else if (a.judgment_na == "no") {
    options.judgment_level_na = JudgmentLevelNa::kCountAsNo;
  } else {
    throw Error(ErrorCode::kInvalidValue, "--judgment-na must be exclude or no",
                a.judgment_na);
  }
  emit(out, a.out, serialize_score_report(score_judgments(judgments, set, options)));
  return kExitOk;
}

std::vector<std::string> distinct(const std::vector<Judgment>& judgments,
                                  std::string Judgment::*member) {
  std::set<std::string> seen;
  for (const auto& j : judgments) seen.insert(j.*member);
  return {seen.begin(), seen.end()};
}

int cmd_score(const ScoreArgs& a, std::ostream& out, std::ostream& err) {
  if (!a.project.empty()) {
    const fs::path data_dir = resolve_data_dir(a.data_dir);
    const ProjectData data = load_project(data_dir / a.project);
    std::vector<std::string> annotators;
    for (const auto& r : data.config.roster) annotators.push_back(r.annotator_id);
    Service service({data_dir, nullptr});
    const ExportResult exported = service.export_judgments(a.project, data.config.admin_token);
    return score_from_judgments(exported.judgments, data.set, data.config.systems,
                                annotators, a, out, err);
  }
  const ChallengeSet set = load_set(a.set);
  if (!a.judgments.empty()) {
    const std::vector<Judgment> judgments = parse_judgments(read_file(a.judgments));
    return score_from_judgments(judgments, set, distinct(judgments, &Judgment::system_id),
                                distinct(judgments, &Judgment::annotator_id), a, out, err);
  }
  const std::vector<MajorityVerdict> verdicts =
      a.verdicts.empty() ? fixture::verdicts()
                         : parse_majority_verdicts(read_file(a.verdicts), set);
  emit(out, a.out, serialize_score_report(score_verdicts(verdicts, set)));
  return kExitOk;
}

// ---- report ----

struct ReportArgs {
  std::string score;
  std::string table = "summary";
  std::string format = "markdown";
  std::vector<std::string> metrics;
  std::string metric_label = "Corpus metric";
  std::string set;
  std::string outputs;
  std::string verdicts;
  std::string out;
};

int cmd_report(const ReportArgs& a, std::ostream& out, std::ostream& err) {
  if (a.table == "listing") {
    const ChallengeSet set = load_set(a.set);
    const SystemOutputSet outputs = load_outputs(a.outputs, set, err);
    const std::vector<MajorityVerdict> verdicts =
        a.verdicts.empty() ? fixture::verdicts()
                           : parse_majority_verdicts(read_file(a.verdicts), set);
    emit(out, a.out, render_formatted(set, &outputs, &verdicts));
    return kExitOk;
  }
  const ExportFormat format = parse_export_format(a.format);
  const ScoreReport report =
      a.score.empty() ? score_verdicts(fixture::verdicts(), fixture::challenge_set())
                      : parse_score_report(read_file(a.score));
  if (a.table == "fine") {
    emit(out, a.out, export_table(fine_grained_table(report), format));
    return kExitOk;
  }
  if (a.table != "summary") {
    throw Error(ErrorCode::kUnknownFormat,
                "unknown table '" + a.table + "'; expected summary, fine or listing", a.table);
  }
  std::optional<MetricValues> metrics;
  if (!a.metrics.empty()) {
    metrics.emplace();
    metrics->label = a.metric_label;
    for (const auto& m : a.metrics) {
      const auto eq = m.find('=');
      if (eq == std::string::npos || eq == 0) {
        throw Error(ErrorCode::kInvalidValue, "--metric expects SYSTEM=VALUE", m);
      }
      metrics->values.emplace_back(m.substr(0, eq), m.substr(eq + 1));
    }
  }
  emit(out, a.out, export_table(summary_table(report, metrics), format));
  return kExitOk;
}

// ---- reproduce ----

int cmd_reproduce(std::ostream& out) {
  const fixture::Reproduction r = fixture::reproduce_fine_grained();
  for (const auto& row : r.rows) {
    out << (row.match ? "ok   " : "DIFF ") << row.subcategory << ": " << row.actual;
    if (!row.match) out << " (expected " << row.expected << ")";
    out << "\n";
  }
  out << r.matched << "/" << r.rows.size() << " subcategory rows match\n";
  return r.ok() ? kExitOk : kExitFindings;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Challenge-set evaluation harness for machine translation", "chalset"};
  app.require_subcommand(1, 1);

  ValidateArgs validate;
  auto* validate_cmd = app.add_subcommand("validate", "Validate a challenge set");
  validate_cmd->add_option("set", validate.set, "Challenge-set JSON (default: bundled set)");
  validate_cmd->add_option("--outputs", validate.outputs, "Also check a system-outputs file");

  LintArgs lint;
  auto* lint_cmd = app.add_subcommand("lint", "Check source sentences for rare words and length");
  lint_cmd->add_option("set", lint.set, "Challenge-set JSON (default: bundled set)");
  auto* freq_opt = lint_cmd->add_option("--freq", lint.freq, "token<TAB>count frequency table");
  lint_cmd->add_option("--corpus", lint.corpus, "Raw corpus text to count")->excludes(freq_opt);
  lint_cmd->add_option("--min-count", lint.min_count, "Rare-token threshold")
      ->capture_default_str();
  lint_cmd->add_option("--max-tokens", lint.max_tokens, "Longest allowed source")
      ->capture_default_str();
  lint_cmd->add_option("--exception", lint.exceptions, "Token exempt from the rare check");
  lint_cmd->add_option("--format", lint.format, "text or json")->capture_default_str();

  SessionsArgs sessions;
  auto* sessions_cmd = app.add_subcommand("sessions", "Build blinded annotator sessions");
  sessions_cmd->add_option("--set", sessions.set, "Challenge-set JSON (default: bundled set)");
  sessions_cmd->add_option("--outputs", sessions.outputs,
                           "System-outputs JSON (default: bundled outputs)");
  sessions_cmd->add_option("--annotators", sessions.annotators, "Annotator ids")
      ->required()
      ->delimiter(',');
  sessions_cmd->add_option("--seed", sessions.seed, "Master seed")->capture_default_str();
  sessions_cmd->add_option("--out", sessions.out_dir, "Output directory")->required();

  ServeArgs serve;
  auto* serve_cmd = app.add_subcommand("serve", "Run the annotation HTTP service");
  serve_cmd->add_option("--bind", serve.bind, "HOST:PORT")->capture_default_str();
  serve_cmd->add_option("--data-dir", serve.data_dir,
                        "Project directory (default: $CHALSET_DATA_DIR)");
  serve_cmd->add_option("--config", serve.config, "Server config with projects and tokens");

  IngestArgs ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "Append blind judgments to a project log");
  ingest_cmd->add_option("--data-dir", ingest.data_dir,
                         "Project directory (default: $CHALSET_DATA_DIR)");
  ingest_cmd->add_option("--project", ingest.project, "Project id")->required();
  ingest_cmd->add_option("--judgments", ingest.judgments, "blind-judgments JSON")->required();

  ScoreArgs score;
  auto* score_cmd = app.add_subcommand("score", "Score verdicts or judgments");
  score_cmd->add_option("--data-dir", score.data_dir,
                        "Project directory (default: $CHALSET_DATA_DIR)");
  auto* project_opt = score_cmd->add_option("--project", score.project, "Score a project");
  auto* judgments_opt =
      score_cmd->add_option("--judgments", score.judgments, "judgments JSON")
          ->excludes(project_opt);
  score_cmd->add_option("--verdicts", score.verdicts, "majority-verdicts JSON")
      ->excludes(project_opt)
      ->excludes(judgments_opt);
  score_cmd->add_option("--set", score.set, "Challenge-set JSON (default: bundled set)");
  score_cmd->add_option("--panel-size", score.panel_size, "Annotators per output")
      ->capture_default_str();
  score_cmd->add_option("--item-na", score.item_na, "non-positive or exclude")
      ->capture_default_str();
  score_cmd->add_option("--judgment-na", score.judgment_na, "exclude or no")
      ->capture_default_str();
  score_cmd->add_option("--out", score.out, "Write the score report here");

  ReportArgs report;
  auto* report_cmd = app.add_subcommand("report", "Render score tables");
  report_cmd->add_option("--score", report.score,
                         "score-report JSON (default: bundled verdicts)");
  report_cmd->add_option("--table", report.table, "summary, fine or listing")
      ->capture_default_str();
  report_cmd->add_option("--format", report.format, "markdown, csv or json")
      ->capture_default_str();
  report_cmd->add_option("--metric", report.metrics, "SYSTEM=VALUE footer entry");
  report_cmd->add_option("--metric-label", report.metric_label, "Footer row label")
      ->capture_default_str();
  report_cmd->add_option("--set", report.set, "Listing: challenge-set JSON");
  report_cmd->add_option("--outputs", report.outputs, "Listing: system-outputs JSON");
  report_cmd->add_option("--verdicts", report.verdicts, "Listing: majority-verdicts JSON");
  report_cmd->add_option("--out", report.out, "Write the table here");

  auto* reproduce_cmd =
      app.add_subcommand("reproduce", "Score bundled verdicts against the expected table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (validate_cmd->parsed()) return cmd_validate(validate, out, err);
    if (lint_cmd->parsed()) return cmd_lint(lint, out);
    if (sessions_cmd->parsed()) return cmd_sessions(sessions, out, err);
    if (serve_cmd->parsed()) return cmd_serve(serve, out);
    if (ingest_cmd->parsed()) return cmd_ingest(ingest, out);
    if (score_cmd->parsed()) return cmd_score(score, out, err);
    if (report_cmd->parsed()) return cmd_report(report, out, err);
    if (reproduce_cmd->parsed()) return cmd_reproduce(out);
  } catch (const Error& e) {
    err << "error: " << e.what();
    if (!e.detail().empty()) err << " [" << e.detail() << "]";
    err << "\n";
    return e.code() == ErrorCode::kUnknownFormat ? kExitUsage : kExitFindings;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFindings;
  }
  return kExitUsage;
}

}  // namespace chalset
