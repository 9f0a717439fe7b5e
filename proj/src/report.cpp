// Copyright 2026 The sqlharness Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sqlharness/report.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "sqlharness/digest.hpp"

namespace sqlharness {

namespace fs = std::filesystem;

std::string render_value(const Rational& r, CellKind kind) {
  switch (kind) {
    case CellKind::kPercent: return round_half_even(r * 100, 2);
    case CellKind::kPlain: return round_half_even(r, 2);
    case CellKind::kCost: return round_half_even(r, 4);
  }
  return "";
}

Json make_cell(const MaybeRational& value, CellKind kind) {
  Json cell = Json::object();
  if (value) {
    cell["exact"] = to_string(*value);
    cell["rendered"] = render_value(*value, kind);
  } else {
    cell["exact"] = nullptr;
    cell["rendered"] = "n/a";
  }
  return cell;
}

bool is_cell(const Json& j) { return j.is_object() && j.contains("exact") && j.contains("rendered"); }

MaybeRational cell_value(const Json& cell) {
  if (!is_cell(cell)) throw ValidationError("not a metric cell: " + cell.dump());
  const Json& e = cell.at("exact");
  if (e.is_null()) return std::nullopt;
  if (!e.is_string()) throw ValidationError("metric cell exact value must be a string");
  try {
    return parse_rational(e.get<std::string>());
  } catch (const std::exception& ex) {
    throw ValidationError(std::string("bad exact value: ") + ex.what());
  }
}

std::string_view to_string(ReportFormat f) {
  switch (f) {
    case ReportFormat::kMachine: return "machine";
    case ReportFormat::kCsv: return "csv";
    case ReportFormat::kMarkdown: return "markdown";
    case ReportFormat::kPlotData: return "plotdata";
  }
  return "";
}

ReportFormat parse_report_format(std::string_view text) {
  for (auto f : all_report_formats()) {
    if (to_string(f) == text) return f;
  }
  throw ValidationError("unknown report format '" + std::string(text) + "'");
}

std::set<ReportFormat> all_report_formats() {
  return {ReportFormat::kMachine, ReportFormat::kCsv, ReportFormat::kMarkdown, ReportFormat::kPlotData};
}

namespace {

const Json& null_json() {
  static const Json kNull;
  return kNull;
}

const Json& at(const Json& j, std::initializer_list<std::string_view> path) {
  const Json* cur = &j;
  for (auto key : path) {
    if (!cur->is_object()) return null_json();
    auto it = cur->find(std::string(key));
    if (it == cur->end()) return null_json();
    cur = &*it;
  }
  return *cur;
}

std::string text_of(const Json& v) {
  if (is_cell(v)) return v.at("rendered").get<std::string>();
  if (v.is_null()) return "n/a";
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

MaybeRational value_of(const Json& v) {
  if (is_cell(v)) return cell_value(v);
  if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
  return std::nullopt;
}

std::vector<std::int64_t> k_list(const Json& metrics) {
  std::vector<std::int64_t> ks;
  for (const auto& k : at(metrics, {"header", "k_list"})) ks.push_back(k.get<std::int64_t>());
  return ks;
}

void add_efficiency_columns(ReportTable& t) {
  t.columns.push_back({"Tokens", Better::kLower});
  t.columns.push_back({"Calls", Better::kLower});
  t.columns.push_back({"Cost", Better::kLower});
}

void add_efficiency_cells(std::vector<Json>& row, const Json& stage) {
  row.push_back(at(stage, {"efficiency", "mean_tokens"}));
  row.push_back(at(stage, {"efficiency", "mean_llm_calls"}));
  row.push_back(at(stage, {"cost", "mean_per_question"}));
}

ReportTable selection_table(const Json& metrics, const char* averaging) {
  ReportTable t;
  const std::string avg = averaging;
  t.family = avg == "macro" ? "schema_selection" : "schema_selection_micro";
  t.title = "Schema selection (" + avg + " average)";
  t.annotate = true;
  t.columns = {{"Method", Better::kNone}, {"Q", Better::kNone}};
  for (const char* level : {"Table", "Column"}) {
    for (const char* m : {"P", "R", "F1"}) t.columns.push_back({std::string(level) + " " + m, Better::kHigher});
  }
  if (avg == "macro") add_efficiency_columns(t);
  for (const auto& [method, body] : at(metrics, {"methods"}).items()) {
    const Json& stage = at(body, {"stages", "schema_selection"});
    if (stage.is_null()) continue;
    const Json& all = at(stage, {"strata", "all"});
    std::vector<Json> row{method, at(all, {"questions"})};
    for (const char* level : {"table", "column"}) {
      for (const char* m : {"precision", "recall", "f1"}) row.push_back(at(all, {level, averaging, m}));
    }
    if (avg == "macro") add_efficiency_cells(row, stage);
    t.rows.push_back(std::move(row));
  }
  return t;
}

ReportTable candidate_table(const Json& metrics) {
  ReportTable t;
  t.family = "candidate_generation";
  t.title = "Candidate generation";
  t.annotate = true;
  t.columns = {{"Method", Better::kNone}, {"Q", Better::kNone}, {"CR", Better::kHigher}, {"IR", Better::kLower},
               {"ER", Better::kLower}};
  for (auto c : kAllErrorCategories) t.columns.push_back({"Err " + std::string(to_string(c)), Better::kLower});
  const auto ks = k_list(metrics);
  for (auto k : ks) t.columns.push_back({"Pass@" + std::to_string(k), Better::kHigher});
  add_efficiency_columns(t);
  for (const auto& [method, body] : at(metrics, {"methods"}).items()) {
    const Json& stage = at(body, {"stages", "candidate_generation"});
    if (stage.is_null()) continue;
    const Json& all = at(stage, {"strata", "all"});
    std::vector<Json> row{method, at(all, {"questions"}), at(all, {"correct_rate"}), at(all, {"incorrect_rate"}),
                          at(all, {"error_rate"})};
    for (auto c : kAllErrorCategories) row.push_back(at(all, {"error_breakdown", to_string(c)}));
    for (auto k : ks) row.push_back(at(all, {"pass_at_k", std::to_string(k)}));
    add_efficiency_cells(row, stage);
    t.rows.push_back(std::move(row));
  }
  return t;
}

ReportTable revision_table(const Json& metrics) {
  ReportTable t;
  t.family = "query_revision";
  t.title = "Query revision";
  t.annotate = true;
  t.columns = {{"Method", Better::kNone}, {"Q", Better::kNone}, {"CR", Better::kHigher}, {"IR", Better::kLower},
               {"ER", Better::kLower},    {"CI", Better::kHigher}, {"I2C", Better::kHigher}, {"E2C", Better::kHigher},
               {"C2I", Better::kLower},   {"C2E", Better::kLower}};
  add_efficiency_columns(t);
  for (const auto& [method, body] : at(metrics, {"methods"}).items()) {
    const Json& stage = at(body, {"stages", "query_revision"});
    if (stage.is_null()) continue;
    const Json& all = at(stage, {"strata", "all"});
    const Json& rev = at(body, {"revision"});
    std::vector<Json> row{method, at(all, {"questions"}), at(all, {"correct_rate"}), at(all, {"incorrect_rate"}),
                          at(all, {"error_rate"})};
    for (const char* m : {"ci", "i2c", "e2c", "c2i", "c2e"}) row.push_back(at(rev, {m}));
    add_efficiency_cells(row, stage);
    t.rows.push_back(std::move(row));
  }
  return t;
}

ReportTable strata_table(const Json& metrics) {
  ReportTable t;
  t.family = "strata";
  t.title = "Outcome rates by stratum";
  t.plot = true;
  t.columns = {{"Method", Better::kNone}, {"Stage", Better::kNone}, {"Stratum", Better::kNone},
               {"Q", Better::kNone},      {"CR", Better::kNone},    {"IR", Better::kNone},
               {"ER", Better::kNone}};
  for (const auto& [method, body] : at(metrics, {"methods"}).items()) {
    for (const char* stage : {"candidate_generation", "query_revision"}) {
      for (const auto& [key, s] : at(body, {"stages", stage, "strata"}).items()) {
        t.rows.push_back({method, stage, key, at(s, {"questions"}), at(s, {"correct_rate"}),
                          at(s, {"incorrect_rate"}), at(s, {"error_rate"})});
      }
    }
  }
  return t;
}

ReportTable recall_table(const Json& metrics) {
  ReportTable t;
  t.family = "recall_conditioned";
  t.title = "Correct rate conditioned on schema recall";
  t.columns = {{"Method", Better::kNone},
               {"Band", Better::kNone},
               {"Q", Better::kNone},
               {"CG CR", Better::kNone},
               {"QR CR", Better::kNone}};
  const auto ks = k_list(metrics);
  for (auto k : ks) t.columns.push_back({"CG Pass@" + std::to_string(k), Better::kNone});
  for (const auto& [method, body] : at(metrics, {"methods"}).items()) {
    for (const auto& [band, b] : at(body, {"recall_conditioned", "bands"}).items()) {
      std::vector<Json> row{method, band, at(b, {"questions"}), at(b, {"candidate_generation"}),
                            at(b, {"query_revision"})};
      for (auto k : ks) row.push_back(at(b, {"pass_at_k", std::to_string(k)}));
      t.rows.push_back(std::move(row));
    }
  }
  return t;
}

ReportTable conditioned_recall_table(const Json& metrics) {
  ReportTable t;
  t.family = "outcome_conditioned_recall";
  t.title = "Mean schema recall by outcome";
  t.columns = {{"Method", Better::kNone},     {"Level", Better::kNone},    {"CG Correct", Better::kNone},
               {"CG Wrong", Better::kNone},   {"QR Correct", Better::kNone}, {"QR Wrong", Better::kNone}};
  for (const auto& [method, body] : at(metrics, {"methods"}).items()) {
    for (const auto& [level, r] : at(body, {"outcome_conditioned_recall"}).items()) {
      t.rows.push_back({method, level, at(r, {"candidate_correct"}), at(r, {"candidate_wrong"}),
                        at(r, {"revision_correct"}), at(r, {"revision_wrong"})});
    }
  }
  return t;
}

std::vector<ReportTable> overlap_tables(const Json& metrics) {
  std::vector<ReportTable> out;
  for (const auto& [stage, m] : at(metrics, {"cross_method", "incorrect_overlap"}).items()) {
    ReportTable t;
    t.family = "incorrect_overlap_" + stage;
    t.title = "Incorrect-set " + text_of(at(m, {"kind"})) + " coefficients (" + stage + ")";
    t.plot = true;
    t.columns = {{"Method", Better::kNone}};
    const Json& methods = at(m, {"methods"});
    for (const auto& name : methods) t.columns.push_back({name.get<std::string>(), Better::kNone});
    const Json& matrix = at(m, {"matrix"});
    for (std::size_t i = 0; i < methods.size(); ++i) {
      std::vector<Json> row{methods[i]};
      for (const auto& c : matrix[i]) row.push_back(c);
      t.rows.push_back(std::move(row));
    }
    out.push_back(std::move(t));
  }
  return out;
}

std::optional<ReportTable> solvability_table(const Json& metrics) {
  const Json& s = at(metrics, {"cross_method", "solvability"});
  if (s.is_null()) return std::nullopt;
  ReportTable t;
  t.family = "solvability";
  t.title = "Questions by number of methods producing Correct";
  t.plot = true;
  t.columns = {{"Difficulty", Better::kNone}};
  const std::size_t m = at(s, {"methods"}).size();
  for (std::size_t b = 0; b <= m; ++b) t.columns.push_back({std::to_string(b), Better::kNone});
  t.columns.push_back({"Q", Better::kNone});
  for (const auto& [difficulty, bins] : at(s, {"bins"}).items()) {
    std::vector<Json> row{difficulty};
    std::int64_t total = 0;
    for (const auto& b : bins) {
      row.push_back(b);
      total += b.get<std::int64_t>();
    }
    row.push_back(total);
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::string header_lines(const Json& header, const std::string& prefix) {
  std::string out;
  for (const auto& [key, value] : header.items()) {
    out += prefix + key + ": " + (value.is_string() ? value.get<std::string>() : value.dump()) + "\n";
  }
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string render_delimited(const ReportTable& t, const Json& header, char sep) {
  std::string out = header_lines(header, "# ");
  out += "# table: " + t.title + "\n";
  auto field = [&](const std::string& s) { return sep == ',' ? csv_field(s) : s; };
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? std::string(1, sep) : "") + field(t.columns[i].name);
  out += "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? std::string(1, sep) : "") + field(text_of(row[i]));
    out += "\n";
  }
  return out;
}

std::string markdown_header(const Json& header, const std::string& title) {
  std::string out = "# " + title + "\n\n";
  out += header_lines(header, "- ");
  return out + "\n";
}

std::string render_markdown(const ReportTable& t, const Json& header, const Json& annotations) {
  std::string out = markdown_header(header, t.title);
  out += "|";
  for (const auto& c : t.columns) out += " " + c.name + " |";
  out += "\n|";
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += i == 0 ? " --- |" : " ---: |";
  out += "\n";
  const Json& marks = at(annotations, {t.family});
  for (const auto& row : t.rows) {
    out += "|";
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::string s = text_of(row[i]);
      if (t.annotate && i > 0) {
        const Json& col = at(marks, {t.columns[i].name});
        const std::string method = row[0].get<std::string>();
        auto has = [&](const char* which) {
          const Json& list = at(col, {which});
          return list.is_array() && std::find(list.begin(), list.end(), Json(method)) != list.end();
        };
        if (has("best")) {
          s = "**" + s + "**";
        } else if (has("second")) {
          s = "_" + s + "_";
        }
      }
      out += " " + s + " |";
    }
    out += "\n";
  }
  return out;
}

}  // namespace

std::vector<ReportTable> build_tables(const Json& metrics) {
  std::vector<ReportTable> tables;
  auto keep = [&](ReportTable t) {
    if (!t.rows.empty()) tables.push_back(std::move(t));
  };
  keep(selection_table(metrics, "macro"));
  keep(selection_table(metrics, "micro"));
  keep(candidate_table(metrics));
  keep(revision_table(metrics));
  keep(strata_table(metrics));
  keep(recall_table(metrics));
  keep(conditioned_recall_table(metrics));
  for (auto& t : overlap_tables(metrics)) keep(std::move(t));
  if (auto s = solvability_table(metrics)) keep(std::move(*s));
  return tables;
}

Json compute_annotations(const std::vector<ReportTable>& tables) {
  Json out = Json::object();
  for (const auto& t : tables) {
    if (!t.annotate || t.rows.size() < 2) continue;
    for (std::size_t c = 1; c < t.columns.size(); ++c) {
      const Better better = t.columns[c].better;
      if (better == Better::kNone) continue;
      std::vector<std::pair<Rational, std::string>> values;
      for (const auto& row : t.rows) {
        if (auto v = value_of(row[c])) values.emplace_back(*v, row[0].get<std::string>());
      }
      std::set<Rational> distinct;
      for (const auto& [v, _] : values) distinct.insert(v);
      if (distinct.empty()) continue;
      std::vector<Rational> ordered(distinct.begin(), distinct.end());
      if (better == Better::kHigher) std::reverse(ordered.begin(), ordered.end());
      Json best = Json::array(), second = Json::array();
      for (const auto& [v, name] : values) {
        if (v == ordered[0]) best.push_back(name);
        if (ordered.size() > 1 && v == ordered[1]) second.push_back(name);
      }
      out[t.family][t.columns[c].name] = {{"best", best}, {"second", second}};
    }
  }
  return out;
}

Json Manifest::to_json() const {
  Json files_json = Json::array();
  for (const auto& f : files) {
    files_json.push_back({{"path", f.path}, {"format", f.format}, {"family", f.family}, {"sha256", f.sha256}});
  }
  return {{"header", header}, {"files", files_json}};
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ReportError("cannot write " + path.string());
  out << text;
  out.close();
  if (!out) throw ReportError("cannot write " + path.string());
}

Manifest emit(const Json& metrics, const std::set<ReportFormat>& formats, const fs::path& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir)) throw ReportError("cannot create output directory " + out_dir.string());

  Manifest manifest;
  manifest.header = at(metrics, {"header"});
  if (manifest.header.is_null()) manifest.header = Json::object();
  const auto tables = build_tables(metrics);
  const Json annotations = compute_annotations(tables);

  auto put = [&](const std::string& rel, const std::string& text, ReportFormat format, const std::string& family) {
    write_text_file(out_dir / rel, text);
    manifest.files.push_back({rel, std::string(to_string(format)), family, sha256_hex(text)});
  };

  std::string sections;
  for (const auto& t : tables) sections += "- " + t.family + ": " + t.title + "\n";

  for (auto format : formats) {
    switch (format) {
      case ReportFormat::kMachine: {
        Json doc = metrics;
        if (!doc.is_object()) doc = Json::object();
        doc["annotations"] = annotations;
        doc["header"] = manifest.header;
        put("report.json", doc.dump(2) + "\n", format, "all");
        break;
      }
      case ReportFormat::kCsv: {
        std::string summary = header_lines(manifest.header, "# ") + "section,title\n";
        for (const auto& t : tables) summary += csv_field(t.family) + "," + csv_field(t.title) + "\n";
        put("csv/summary.csv", summary, format, "summary");
        for (const auto& t : tables) {
          put("csv/" + t.family + ".csv", render_delimited(t, manifest.header, ','), format, t.family);
        }
        break;
      }
      case ReportFormat::kMarkdown:
        put("markdown/summary.md", markdown_header(manifest.header, "Summary") + sections, format, "summary");
        for (const auto& t : tables) {
          put("markdown/" + t.family + ".md", render_markdown(t, manifest.header, annotations), format, t.family);
        }
        break;
      case ReportFormat::kPlotData:
        for (const auto& t : tables) {
          if (t.plot) put("plotdata/" + t.family + ".tsv", render_delimited(t, manifest.header, '\t'), format, t.family);
        }
        break;
    }
  }
  std::sort(manifest.files.begin(), manifest.files.end(),
            [](const ManifestEntry& a, const ManifestEntry& b) { return a.path < b.path; });
  write_text_file(out_dir / "manifest.json", manifest.to_json().dump(2) + "\n");
  return manifest;
}

}  // namespace sqlharness
