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

// Rendering of metric documents: exact/rendered cells, csv, markdown and
// plot-data tables, best/second annotations and a digest manifest.

#ifndef SQLHARNESS_REPORT_HPP_
#define SQLHARNESS_REPORT_HPP_

#include <filesystem>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "sqlharness/model.hpp"
#include "sqlharness/rational.hpp"

namespace sqlharness {

inline constexpr int kMetricsSchemaVersion = 1;

enum class CellKind { kPercent, kPlain, kCost };

// Percent: 2 places of r·100. Plain: 2 places. Cost: 4 places. Half-to-even.
std::string render_value(const Rational& r, CellKind kind);

// {"exact": "3/5", "rendered": "60.00"}; not-applicable is
// {"exact": null, "rendered": "n/a"}.
Json make_cell(const MaybeRational& value, CellKind kind);
bool is_cell(const Json& j);
// Throws ValidationError on a malformed cell.
MaybeRational cell_value(const Json& cell);

enum class ReportFormat { kMachine, kCsv, kMarkdown, kPlotData };
std::string_view to_string(ReportFormat f);
// Throws ValidationError on an unknown name.
ReportFormat parse_report_format(std::string_view text);
std::set<ReportFormat> all_report_formats();

class ReportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Better { kNone, kHigher, kLower };

struct ReportColumn {
  std::string name;
  Better better = Better::kNone;
};

struct ReportTable {
  std::string family;
  std::string title;
  std::vector<ReportColumn> columns;
  // Cells are metric cells, integers, strings or null.
  std::vector<std::vector<Json>> rows;
  bool annotate = false;  // column 0 names the method
  bool plot = false;      // also emitted as plot data
};

std::vector<ReportTable> build_tables(const Json& metrics);

// {family: {column: {"best": [...], "second": [...]}}}. Exact ties share a
// mark; not-applicable cells are never marked.
Json compute_annotations(const std::vector<ReportTable>& tables);

struct ManifestEntry {
  std::string path;  // relative to the output directory
  std::string format;
  std::string family;
  std::string sha256;
};

struct Manifest {
  Json header;
  std::vector<ManifestEntry> files;

  Json to_json() const;
};

// Writes one file per (format, family) plus manifest.json. Byte-identical
// for identical `metrics`.
Manifest emit(const Json& metrics, const std::set<ReportFormat>& formats, const std::filesystem::path& out_dir);

// Writes `text` exactly; throws ReportError when the file cannot be written.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace sqlharness

#endif  // SQLHARNESS_REPORT_HPP_
