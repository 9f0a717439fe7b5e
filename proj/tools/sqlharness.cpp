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

// sqlharness command-line entry point.

#include <cstdlib>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "sqlharness/catalog.hpp"
#include "sqlharness/mockgen.hpp"
#include "sqlharness/pipeline.hpp"

namespace {

using namespace sqlharness;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitEnvironment = 3;

struct Flags {
  std::string config;
  std::string dataset;
  std::string runs;
  std::string out;
  std::optional<double> timeout_seconds;
  std::optional<std::size_t> workers;
  std::string k;
  std::string pricing;
  std::string comparison;
  std::string overlap;
  std::optional<std::uint64_t> seed;
  std::string model;
  std::optional<double> tolerance;
  bool timings = false;
  bool overlap_include_errors = false;
  std::string profile;
  std::vector<std::string> formats;
};

std::vector<std::size_t> parse_k_list(const std::string& text) {
  std::vector<std::size_t> ks;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(item, &used);
      if (used != item.size() || v <= 0) throw std::invalid_argument(item);
      ks.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      throw ValidationError("--k expects positive integers separated by commas, got '" + text + "'");
    }
  }
  return ks;
}

RunConfig build_config(const Flags& f) {
  RunConfig c;
  if (!f.config.empty()) c = load_config(f.config);
  if (!f.dataset.empty()) c.dataset = f.dataset;
  if (!f.runs.empty()) c.runs = f.runs;
  if (!f.out.empty()) c.out = f.out;
  if (f.timeout_seconds) {
    c.timeout = std::chrono::milliseconds(static_cast<std::int64_t>(*f.timeout_seconds * 1000.0 + 0.5));
  }
  if (f.workers) c.workers = *f.workers;
  if (!f.k.empty()) c.k_list = parse_k_list(f.k);
  if (!f.pricing.empty()) c.pricing = f.pricing;
  if (!f.comparison.empty()) c.multiset = f.comparison == "multiset";
  if (!f.overlap.empty()) c.overlap = parse_coefficient_kind(f.overlap);
  if (f.seed) c.seed = *f.seed;
  if (!f.model.empty()) c.model = f.model;
  if (f.tolerance) c.relative_tolerance = *f.tolerance;
  if (f.timings) c.timings = true;
  if (f.overlap_include_errors) c.overlap_include_errors = true;
  if (c.out.empty()) c.out = "sqlharness-out";
  c.validate();
  return c;
}

void require(bool present, const char* flag) {
  if (!present) throw ValidationError(std::string("missing required setting ") + flag);
}

int cmd_validate(const RunConfig& c) {
  require(!c.dataset.empty(), "--dataset");
  require(!c.runs.empty(), "--runs");
  const auto report = run_validate(c);
  for (const auto& m : report.methods) {
    std::cout << m.method << ": " << m.records << " valid records, " << m.issues.size() << " invalid, "
              << m.unmatched.size() << " unmatched\n";
    for (const auto& issue : m.issues) std::cout << "  error: " << issue.describe() << "\n";
    for (const auto& u : m.unmatched) {
      std::cout << "  warning: record " << u.record_index << " (" << u.question << "): " << u.reason << "\n";
    }
  }
  for (const auto& c2 : report.collisions) std::cout << "warning: ambiguous question text: " << c2 << "\n";
  std::cout << "warnings: " << report.warning_count() << "\n";
  return report.ok() ? kExitOk : kExitValidation;
}

int cmd_postprocess(const RunConfig& c) {
  require(!c.dataset.empty(), "--dataset");
  require(!c.runs.empty(), "--runs");
  const auto s = run_postprocess(c);
  for (const auto& w : s.warnings) std::cerr << "warning: " << w << "\n";
  for (const auto& e : s.excluded) std::cout << "excluded question " << e.question_id << ": " << e.engine_message << "\n";
  std::cout << "methods: " << s.methods << ", judgments: " << s.judgments << ", excluded: " << s.excluded.size()
            << "\n";
  return kExitOk;
}

int cmd_bench(const RunConfig& c) {
  require(!c.dataset.empty(), "--dataset");
  require(!c.runs.empty(), "--runs");
  std::vector<std::string> warnings;
  const Json doc = run_bench(c, &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  std::cout << "wrote " << (c.out / "bench" / "metrics.json").string() << " (" << doc.at("methods").size()
            << " methods)\n";
  return kExitOk;
}

int cmd_report(const RunConfig& c, const std::vector<std::string>& names) {
  std::set<ReportFormat> formats;
  for (const auto& n : names) formats.insert(parse_report_format(n));
  if (formats.empty()) formats = all_report_formats();
  const auto manifest = run_report(c, formats);
  for (const auto& f : manifest.files) std::cout << f.sha256 << "  " << f.path << "\n";
  return kExitOk;
}

int cmd_selftest(const RunConfig& c) {
  require(!c.dataset.empty(), "--dataset");
  const auto r = run_selftest(c);
  std::cout << "questions: " << r.questions << ", judged: " << r.judgments.size()
            << ", excluded: " << r.excluded.size() << "\n";
  for (const auto& e : r.excluded) std::cout << "excluded question " << e.question_id << ": " << e.engine_message << "\n";
  if (r.rates) {
    std::cout << "CR " << render_value(r.rates->correct_rate, CellKind::kPercent) << "%, IR "
              << render_value(r.rates->incorrect_rate, CellKind::kPercent) << "%, ER "
              << render_value(r.rates->error_rate, CellKind::kPercent) << "%\n";
  }
  for (auto q : r.not_correct) std::cout << "not correct: question " << q << "\n";
  std::cout << "databases unchanged: " << (r.databases_unchanged ? "yes" : "no") << "\n";
  if (!r.databases_unchanged) return kExitEnvironment;
  return r.passed() ? kExitOk : kExitValidation;
}

int cmd_mock(const RunConfig& c, const Flags& f) {
  require(!c.dataset.empty(), "--dataset");
  require(!f.profile.empty(), "--profile");
  MockProfile profile = load_profile(f.profile);
  if (f.seed) profile.seed = *f.seed;
  MockOptions options;
  options.k_list = c.k_list;
  const auto output = generate(profile, load_manifest(c.dataset), options);
  write_mock(output, c.out);
  std::cout << "wrote " << output.run_file.size() << " records for " << output.method << " to " << c.out.string()
            << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Modular NL2SQL benchmarking harness"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(sqlharness::kHarnessVersion));
  Flags f;
  app.add_option("--config", f.config, "Run configuration file");
  app.add_option("--dataset", f.dataset, "Dataset manifest");
  app.add_option("--runs", f.runs, "Directory with one run file per method");
  app.add_option("--out", f.out, "Output directory");
  app.add_option("--timeout", f.timeout_seconds, "Per-query timeout in seconds");
  app.add_option("--workers", f.workers, "Executor worker threads")->check(CLI::PositiveNumber);
  app.add_option("--k", f.k, "Pass@k list, e.g. 1,5,10");
  app.add_option("--pricing", f.pricing, "Pricing file");
  app.add_option("--model", f.model, "Pricing model label");
  app.add_option("--comparison", f.comparison, "Result comparison")->check(CLI::IsMember({"set", "multiset"}));
  app.add_option("--tolerance", f.tolerance, "Relative tolerance for REAL values");
  app.add_option("--overlap", f.overlap, "Overlap coefficient")->check(CLI::IsMember({"jaccard", "overlap"}));
  app.add_flag("--overlap-include-errors", f.overlap_include_errors, "Count Error outcomes in overlap sets");
  app.add_option("--seed", f.seed, "Mock generation seed");
  app.add_flag("--timings", f.timings, "Record elapsed times in judgment logs");

  auto* validate = app.add_subcommand("validate", "Check run files and their alignment");
  auto* postprocess = app.add_subcommand("postprocess", "Execute and judge every run record");
  auto* bench = app.add_subcommand("bench", "Compute metric documents");
  auto* report = app.add_subcommand("report", "Render reports");
  report->add_option("--format", f.formats, "machine, csv, markdown or plotdata (repeatable)");
  auto* selftest = app.add_subcommand("selftest", "Judge every gold query against itself");
  auto* mock = app.add_subcommand("mock", "Generate synthetic run files");
  mock->add_option("--profile", f.profile, "Mock profile file");
  for (auto* sub : {validate, postprocess, bench, report, selftest, mock}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const RunConfig config = build_config(f);
    if (*validate) return cmd_validate(config);
    if (*postprocess) return cmd_postprocess(config);
    if (*bench) return cmd_bench(config);
    if (*report) return cmd_report(config, f.formats);
    if (*selftest) return cmd_selftest(config);
    if (*mock) return cmd_mock(config, f);
  } catch (const EnvironmentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitEnvironment;
  } catch (const DatabaseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitEnvironment;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitUsage;
}
