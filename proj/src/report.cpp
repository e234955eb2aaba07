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

#include "chalset/report.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"

namespace chalset {

using json = nlohmann::ordered_json;

namespace {

std::optional<int> percent_of(const SystemRates& rates, const std::string& system) {
  const auto it = rates.find(system);
  if (it == rates.end()) return std::nullopt;
  return it->second.percent();
}

std::vector<std::optional<int>> row_cells(const SystemRates& rates,
                                          const std::vector<std::string>& systems) {
  std::vector<std::optional<int>> cells;
  cells.reserve(systems.size());
  for (const auto& s : systems) cells.push_back(percent_of(rates, s));
  return cells;
}

void require_non_empty(const ScoreReport& report) {
  if (report.empty()) throw Error(ErrorCode::kNothingToRender, "nothing to render");
}

std::string percent_text(const std::optional<int>& p) {
  return p ? std::to_string(*p) + "%" : std::string(kUnavailable);
}

std::string csv_number(const std::optional<int>& p) {
  return p ? std::to_string(*p) : std::string();
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string csv_line(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) line += ',';
    line += csv_field(fields[i]);
  }
  return line + "\n";
}

std::string md_escape(std::string_view s) {
  std::string out;
  for (const char c : s) {
    if (c == '|') out += '\\';
    out += c;
  }
  return out;
}

std::string md_line(const std::vector<std::string>& cells) {
  std::string line = "|";
  for (const auto& c : cells) line += " " + md_escape(c) + " |";
  return line + "\n";
}

std::string md_separator(std::size_t left_columns, std::size_t right_columns) {
  std::string line = "|";
  for (std::size_t i = 0; i < left_columns; ++i) line += " --- |";
  for (std::size_t i = 0; i < right_columns; ++i) line += " ---: |";
  return line + "\n";
}

json percent_json(const std::optional<int>& p) { return p ? json(*p) : json(nullptr); }

}  // namespace

SummaryTable summary_table(const ScoreReport& report,
                           const std::optional<MetricValues>& metrics) {
  require_non_empty(report);
  SummaryTable table;
  table.systems = report.systems;
  table.basis = report.has_judgments ? RateBasis::kJudgmentLevel : RateBasis::kItemLevel;
  table.agreement_available = report.has_judgments && report.overall.agreement.has_value();

  const auto pick = [&](const SystemRates& item_level,
                        const std::optional<SystemRates>& judgment_level) {
    return table.basis == RateBasis::kJudgmentLevel && judgment_level
               ? row_cells(*judgment_level, table.systems)
               : row_cells(item_level, table.systems);
  };
  const auto agreement_cell = [&](const std::optional<Ratio>& r) -> std::optional<int> {
    if (!table.agreement_available || !r) return std::nullopt;
    return r->percent();
  };

  for (const auto& c : report.categories) {
    table.rows.push_back({std::string(category_label(c.category)),
                          pick(c.item_level, c.judgment_level),
                          agreement_cell(c.agreement)});
  }
  table.rows.push_back({"Overall",
                        pick(report.overall.item_level, report.overall.judgment_level),
                        agreement_cell(report.overall.agreement)});

  if (table.basis == RateBasis::kJudgmentLevel) {
    table.note = "Judgment-level success rates (yes / " +
                 std::string(report.options.judgment_level_na == JudgmentLevelNa::kExclude
                                 ? "(yes + no); not-applicable excluded"
                                 : "all judgments; not-applicable counted as no") +
                 "). Agreement: outputs on which all " +
                 std::to_string(report.options.panel_size) + " annotators agreed.";
  } else {
    table.note =
        "Item-level success rates (bridged items / items; strict panel majority). "
        "Agreement unavailable without individual judgments.";
  }

  if (metrics) {
    MetricFooter footer;
    footer.label = metrics->label;
    footer.values.assign(table.systems.size(), std::nullopt);
    for (const auto& [system, value] : metrics->values) {
      const auto it = std::find(table.systems.begin(), table.systems.end(), system);
      if (it == table.systems.end()) {
        throw Error(ErrorCode::kUnknownSystem,
                    "metric value for unknown system '" + system + "'", system);
      }
      footer.values[static_cast<std::size_t>(it - table.systems.begin())] = value;
    }
    table.footer = std::move(footer);
  }
  return table;
}

FineGrainedTable fine_grained_table(const ScoreReport& report) {
  require_non_empty(report);
  FineGrainedTable table;
  table.systems = report.systems;
  for (const auto& s : report.subcategories) {
    table.rows.push_back(
        {s.category, s.subcategory, s.item_count, row_cells(s.rates, table.systems)});
  }
  return table;
}

FineGrainedTable fine_grained_table(const ScoreReport& report, const ChallengeSet& set) {
  FineGrainedTable table = fine_grained_table(report);
  const auto names = set.subcategories();
  if (names.size() != table.rows.size()) {
    throw Error(ErrorCode::kInvalidValue,
                "report has " + std::to_string(table.rows.size()) +
                    " subcategories; challenge set has " + std::to_string(names.size()));
  }
  for (std::size_t i = 0; i < names.size(); ++i) {
    const auto& row = table.rows[i];
    const auto count = static_cast<std::size_t>(
        std::count_if(set.items.begin(), set.items.end(),
                      [&](const ChallengeItem& it) { return it.subcategory == names[i]; }));
    if (row.subcategory != names[i] || row.item_count != count) {
      throw Error(ErrorCode::kInvalidValue,
                  "report row '" + row.subcategory + "' does not match the challenge set",
                  row.subcategory);
    }
  }
  return table;
}

ExportFormat parse_export_format(std::string_view name) {
  if (name == "markdown" || name == "md") return ExportFormat::kMarkdown;
  if (name == "csv") return ExportFormat::kCsv;
  if (name == "json") return ExportFormat::kJson;
  throw Error(ErrorCode::kUnknownFormat,
              "unknown format '" + std::string(name) + "'; expected markdown, csv or json",
              std::string(name));
}

std::string export_table(const SummaryTable& table, ExportFormat format) {
  if (table.rows.empty()) throw Error(ErrorCode::kNothingToRender, "nothing to render");
  std::ostringstream out;
  switch (format) {
    case ExportFormat::kMarkdown: {
      out << "_" << table.note << "_\n\n";
      std::vector<std::string> header{"Divergence type"};
      header.insert(header.end(), table.systems.begin(), table.systems.end());
      header.push_back("Agreement");
      out << md_line(header) << md_separator(1, table.systems.size() + 1);
      for (const auto& row : table.rows) {
        std::vector<std::string> cells{row.label};
        for (const auto& c : row.cells) cells.push_back(percent_text(c));
        cells.push_back(percent_text(row.agreement));
        out << md_line(cells);
      }
      if (table.footer) {
        std::vector<std::string> cells{table.footer->label};
        for (const auto& v : table.footer->values) {
          cells.push_back(v ? *v : std::string(kUnavailable));
        }
        cells.emplace_back(kUnavailable);
        out << md_line(cells);
      }
      break;
    }
    case ExportFormat::kCsv: {
      std::vector<std::string> header{"row"};
      header.insert(header.end(), table.systems.begin(), table.systems.end());
      header.push_back("agreement");
      out << csv_line(header);
      for (const auto& row : table.rows) {
        std::vector<std::string> fields{row.label};
        for (const auto& c : row.cells) fields.push_back(csv_number(c));
        fields.push_back(csv_number(row.agreement));
        out << csv_line(fields);
      }
      if (table.footer) {
        std::vector<std::string> fields{table.footer->label};
        for (const auto& v : table.footer->values) fields.push_back(v.value_or(""));
        fields.emplace_back();
        out << csv_line(fields);
      }
      break;
    }
    case ExportFormat::kJson: {
      json doc;
      doc["format"] = "summary-table";
      doc["systems"] = table.systems;
      doc["basis"] = table.basis == RateBasis::kItemLevel ? "item-level" : "judgment-level";
      doc["agreement_available"] = table.agreement_available;
      doc["note"] = table.note;
      json rows = json::array();
      for (const auto& row : table.rows) {
        json cells = json::array();
        for (const auto& c : row.cells) cells.push_back(percent_json(c));
        rows.push_back({{"label", row.label},
                        {"percent", std::move(cells)},
                        {"agreement", percent_json(row.agreement)}});
      }
      doc["rows"] = std::move(rows);
      if (table.footer) {
        json values = json::array();
        for (const auto& v : table.footer->values) values.push_back(v ? json(*v) : json(nullptr));
        doc["footer"] = {{"label", table.footer->label}, {"values", std::move(values)}};
      } else {
        doc["footer"] = nullptr;
      }
      out << doc.dump(2) << "\n";
      break;
    }
  }
  return out.str();
}

std::string export_table(const FineGrainedTable& table, ExportFormat format) {
  if (table.rows.empty()) throw Error(ErrorCode::kNothingToRender, "nothing to render");
  std::ostringstream out;
  switch (format) {
    case ExportFormat::kMarkdown: {
      std::vector<std::string> header{"Category", "Subcategory", "#"};
      header.insert(header.end(), table.systems.begin(), table.systems.end());
      out << md_line(header) << md_separator(2, table.systems.size() + 1);
      for (const auto& row : table.rows) {
        std::vector<std::string> cells{std::string(category_label(row.category)),
                                       row.subcategory, std::to_string(row.item_count)};
        for (const auto& c : row.cells) cells.push_back(percent_text(c));
        out << md_line(cells);
      }
      break;
    }
    case ExportFormat::kCsv: {
      std::vector<std::string> header{"category", "subcategory", "items"};
      header.insert(header.end(), table.systems.begin(), table.systems.end());
      out << csv_line(header);
      for (const auto& row : table.rows) {
        std::vector<std::string> fields{std::string(category_key(row.category)),
                                        row.subcategory, std::to_string(row.item_count)};
        for (const auto& c : row.cells) fields.push_back(csv_number(c));
        out << csv_line(fields);
      }
      break;
    }
    case ExportFormat::kJson: {
      json doc;
      doc["format"] = "fine-grained-table";
      doc["systems"] = table.systems;
      json rows = json::array();
      for (const auto& row : table.rows) {
        json cells = json::array();
        for (const auto& c : row.cells) cells.push_back(percent_json(c));
        rows.push_back({{"category", category_key(row.category)},
                        {"subcategory", row.subcategory},
                        {"item_count", row.item_count},
                        {"percent", std::move(cells)}});
      }
      doc["rows"] = std::move(rows);
      out << doc.dump(2) << "\n";
      break;
    }
  }
  return out.str();
}

std::vector<std::vector<std::string>> parse_markdown_table(std::string_view markdown) {
  std::vector<std::vector<std::string>> rows;
  bool in_body = false;
  std::istringstream in{std::string(markdown)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() != '|') {
      in_body = false;
      continue;
    }
    std::vector<std::string> cells;
    std::string cell;
    for (std::size_t i = 1; i < line.size(); ++i) {
      const char c = line[i];
      if (c == '\\' && i + 1 < line.size() && line[i + 1] == '|') {
        cell += '|';
        ++i;
      } else if (c == '|') {
        const auto first = cell.find_first_not_of(' ');
        const auto last = cell.find_last_not_of(' ');
        cells.push_back(first == std::string::npos ? std::string()
                                                   : cell.substr(first, last - first + 1));
        cell.clear();
      } else {
        cell += c;
      }
    }
    const bool separator = std::all_of(cells.begin(), cells.end(), [](const std::string& c) {
      return !c.empty() && c.find_first_not_of("-:") == std::string::npos;
    });
    if (separator) {
      in_body = true;
    } else if (in_body) {
      rows.push_back(std::move(cells));
    }
  }
  return rows;
}

std::vector<std::vector<std::string>> parse_csv(std::string_view csv) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < csv.size(); ++i) {
    const char c = csv[i];
    any = true;
    if (quoted) {
      if (c == '"' && i + 1 < csv.size() && csv[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      row.push_back(std::move(field));
      field.clear();
      rows.push_back(std::move(row));
      row.clear();
      any = false;
    } else if (c != '\r') {
      field += c;
    }
  }
  if (any) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace chalset
