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

#include "chalset/lint.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include "chalset/tokenize.hpp"
#include "json.hpp"

namespace chalset {

std::uint64_t FrequencyTable::lookup(std::string_view token) const {
  const auto lowered = tokenize(token);
  if (lowered.size() != 1) return 0;
  const auto it = counts_.find(lowered.front());
  return it == counts_.end() ? 0 : it->second;
}

void FrequencyTable::add(std::string_view token, std::uint64_t count) {
  const auto lowered = tokenize(token);
  if (lowered.size() != 1) return;
  counts_[lowered.front()] += count;
  total_ += count;
}

FrequencyTable load_frequency_table(std::string_view bytes, FrequencyInput mode) {
  FrequencyTable table;
  if (mode == FrequencyInput::kCorpus) {
    for (const auto& token : tokenize(bytes)) table.add(token, 1);
    if (table.total() == 0) {
      throw Error(ErrorCode::kInvalidValue, "empty corpus", "");
    }
    return table;
  }

  std::size_t line_no = 0;
  std::size_t entries = 0;
  while (!bytes.empty()) {
    const auto nl = bytes.find('\n');
    std::string_view line = bytes.substr(0, nl);
    bytes = nl == std::string_view::npos ? std::string_view{} : bytes.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    const auto tab = line.rfind('\t');
    const std::string where = "line " + std::to_string(line_no);
    if (tab == std::string_view::npos || tab == 0) {
      throw Error(ErrorCode::kMalformed,
                  "expected token<TAB>count at " + where, where);
    }
    const std::string_view count_text = line.substr(tab + 1);
    std::uint64_t count = 0;
    const auto [ptr, ec] = std::from_chars(
        count_text.data(), count_text.data() + count_text.size(), count);
    if (ec != std::errc() || ptr != count_text.data() + count_text.size() ||
        count_text.empty()) {
      throw Error(ErrorCode::kMalformed,
                  "malformed count '" + std::string(count_text) + "' at " + where,
                  where);
    }
    table.add(line.substr(0, tab), count);
    ++entries;
  }
  if (entries == 0) {
    throw Error(ErrorCode::kInvalidValue, "empty frequency table", "");
  }
  return table;
}

std::string_view lint_kind_name(LintKind kind) {
  switch (kind) {
    case LintKind::kRareToken: return "rare-token";
    case LintKind::kNonceToken: return "nonce-token";
    case LintKind::kLongSentence: return "long-sentence";
  }
  return "";
}

namespace {

void sort_findings(std::vector<LintFinding>& findings) {
  std::stable_sort(findings.begin(), findings.end(),
                   [](const LintFinding& a, const LintFinding& b) {
                     const auto c = compare_item_ids(a.item_id, b.item_id);
                     if (c != 0) return c < 0;
                     return a.position < b.position;
                   });
}

}  // namespace

LintReport lint_vocabulary(const ChallengeSet& set, const FrequencyTable& freq,
                           std::uint64_t min_count,
                           const std::vector<std::string>& exceptions) {
  std::set<std::string, std::less<>> exempt;
  for (const auto& e : exceptions) {
    for (auto& t : tokenize(e)) exempt.insert(std::move(t));
  }
  LintReport report;
  for (const auto& item : set.items) {
    const auto tokens = tokenize(item.source);
    for (std::size_t pos = 0; pos < tokens.size(); ++pos) {
      const std::string& token = tokens[pos];
      const std::uint64_t count = freq.lookup(token);
      if (exempt.contains(token)) continue;
      if (count == 0) {
        report.findings.push_back({item.id, LintKind::kNonceToken, token, pos, 0,
                                   "token '" + token + "' never occurs in the corpus"});
      } else if (count < min_count) {
        report.findings.push_back(
            {item.id, LintKind::kRareToken, token, pos, count,
             "token '" + token + "' occurs " + std::to_string(count) +
                 " times (minimum " + std::to_string(min_count) + ")"});
      }
    }
  }
  sort_findings(report.findings);
  return report;
}

LintReport lint_length(const ChallengeSet& set, std::size_t max_tokens) {
  LintReport report;
  for (const auto& item : set.items) {
    const std::size_t n = tokenize(item.source).size();
    if (n > max_tokens) {
      report.findings.push_back({item.id, LintKind::kLongSentence, "", 0, n,
                                 "source has " + std::to_string(n) +
                                     " tokens (maximum " +
                                     std::to_string(max_tokens) + ")"});
    }
  }
  sort_findings(report.findings);
  return report;
}

LintReport merge(LintReport a, const LintReport& b) {
  a.findings.insert(a.findings.end(), b.findings.begin(), b.findings.end());
  sort_findings(a.findings);
  return a;
}

std::string format_lint_text(const LintReport& report) {
  std::string out;
  for (const auto& f : report.findings) {
    out += f.item_id;
    out += '\t';
    out += lint_kind_name(f.kind);
    out += '\t';
    out += f.token.empty() ? "-" : f.token;
    out += '\t';
    out += std::to_string(f.value);
    out += '\t';
    out += f.detail;
    out += '\n';
  }
  return out;
}

std::string format_lint_json(const LintReport& report) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& f : report.findings) {
    nlohmann::ordered_json obj;
    obj["item_id"] = f.item_id;
    obj["kind"] = lint_kind_name(f.kind);
    if (f.kind == LintKind::kLongSentence) {
      obj["length"] = f.value;
    } else {
      obj["token"] = f.token;
      obj["position"] = f.position;
      obj["count"] = f.value;
    }
    obj["detail"] = f.detail;
    arr.push_back(std::move(obj));
  }
  return nlohmann::ordered_json{{"findings", arr}}.dump(2) + "\n";
}

}  // namespace chalset
