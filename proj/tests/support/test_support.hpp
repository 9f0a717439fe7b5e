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

// Shared helpers for the unit and acceptance suites.

#ifndef SQLHARNESS_TESTS_SUPPORT_TEST_SUPPORT_HPP_
#define SQLHARNESS_TESTS_SUPPORT_TEST_SUPPORT_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "sqlharness/catalog.hpp"
#include "sqlharness/executor.hpp"
#include "sqlharness/model.hpp"
#include "sqlharness/pipeline.hpp"

namespace sqlharness::testing {

namespace fs = std::filesystem;

fs::path source_dir();
fs::path mini_manifest();
fs::path cli_path();

// Removed (recursively) on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  fs::path path_;
};

void write_file(const fs::path& path, const std::string& text);
std::string read_file(const fs::path& path);
// Relative path -> content for every regular file under `root`.
std::map<std::string, std::string> snapshot_tree(const fs::path& root);

// Runs the CLI; returns its exit status and captures stdout+stderr.
int run_cli(const std::string& args, std::string* output = nullptr);

// Config for the pipeline with a short timeout.
RunConfig make_config(const fs::path& dataset, const fs::path& runs, const fs::path& out, std::size_t workers = 1);

// Copies the mini dataset (questions and databases) into `dir` and returns
// the new manifest; `edit` may rewrite the question array first.
fs::path copy_mini_dataset(const fs::path& dir, const std::function<void(Json&)>& edit = {});

// ---------------------------------------------------------------------------
// Brute-force metric oracles. They use plain integers and vectors, never the
// library's metric code.

struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;
};

Rational to_rational(const Fraction& f);

struct OracleScore {
  Fraction precision, recall;
  // F1 = 2·|R∩S| / (|R| + |S|) when |S| > 0, computed independently of the library.
  Fraction f1;
};

OracleScore oracle_selection(const std::vector<std::string>& selected, const std::vector<std::string>& gold);

struct OracleRates {
  std::int64_t c = 0, i = 0, e = 0, q = 0;
  std::int64_t breakdown[5] = {0, 0, 0, 0, 0};
};

OracleRates oracle_rates(const std::vector<OutcomeLabel>& labels);

Fraction oracle_pass_at_k(const std::vector<std::vector<OutcomeLabel>>& rows, std::size_t k);

struct OracleRevision {
  std::optional<Fraction> ci, i2c, e2c, c2i, c2e;
};

OracleRevision oracle_revision(const std::vector<OutcomeLabel>& pre, const std::vector<OutcomeLabel>& post);

OutcomeLabel random_label(std::mt19937_64& rng);

// ---------------------------------------------------------------------------
// Templated SELECT generator with ground-truth schemas.

struct GeneratedQuery {
  std::string sql;
  SchemaSet expected;
  std::string shape;
};

Catalog generator_catalog();
GeneratedQuery generate_query(std::mt19937_64& rng);

// ---------------------------------------------------------------------------
// Mock profile matrix used by the loop-closure checks.
std::vector<Json> mock_profile_matrix();

}  // namespace sqlharness::testing

#endif  // SQLHARNESS_TESTS_SUPPORT_TEST_SUPPORT_HPP_
