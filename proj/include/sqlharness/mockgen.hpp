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

// Deterministic synthetic run files with count-exact outcome profiles and
// the metric values they must reproduce.

#ifndef SQLHARNESS_MOCKGEN_HPP_
#define SQLHARNESS_MOCKGEN_HPP_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iterator>
#include <optional>
#include <string>
#include <vector>

#include "sqlharness/ingest.hpp"
#include "sqlharness/model.hpp"
#include "sqlharness/rational.hpp"

namespace sqlharness {

struct RateTriple {
  Rational correct;
  Rational incorrect;
  Rational error;
};

struct TransitionRates {
  Rational i2c;
  Rational e2c;
  Rational c2i;
  Rational c2e;
};

struct SchemaNoise {
  Rational drop_column;   // share of questions losing one gold column
  Rational add_spurious;  // share of questions gaining one unrelated table
};

struct MockProfile {
  std::string name = "mock";
  std::uint64_t seed = 0;
  std::optional<std::size_t> questions;  // default: every dataset question
  RateTriple candidate;
  std::vector<ErrorCategory> error_categories{std::begin(kAllErrorCategories), std::end(kAllErrorCategories)};
  std::size_t candidates = 1;
  // Share of questions whose first candidate is not Correct but a later one is.
  Rational rescue;
  std::optional<TransitionRates> revision;
  std::optional<SchemaNoise> schema;
  std::uint64_t min_tokens = 100;
  std::uint64_t max_tokens = 2000;

  // Throws ValidationError.
  void validate() const;
};

// Rates accept decimal strings ("0.6", "3/5") or numbers. Throws
// ValidationError.
MockProfile parse_profile(const Json& doc);
MockProfile load_profile(const std::filesystem::path& path);

struct MockOptions {
  std::vector<std::size_t> k_list{1, 5, 10, 15, 20};
  // Used while checking that mutants execute as intended.
  std::chrono::milliseconds validation_timeout{5000};
};

struct MockOutput {
  std::string method;
  Json run_file;   // array of records
  Json expected;   // metric document subset
  Json questions;  // dataset subset, BIRD layout
  DatasetManifest source;
  std::vector<QuestionRecord> chosen;
};

// True when every count the profile implies is an integer over `n`.
bool profile_feasible(const MockProfile& profile, std::size_t n);
// Smallest feasible question count, or nullopt below `limit`.
std::optional<std::size_t> smallest_feasible(const MockProfile& profile, std::size_t limit = 100000);

// Throws ValidationError for an infeasible profile (naming the smallest
// feasible question count) or a dataset whose gold SQL fails.
MockOutput generate(const MockProfile& profile, const DatasetManifest& dataset, const MockOptions& options = {});

// Writes runs/<method>.json, expected.json and dataset/{manifest,questions}.json.
void write_mock(const MockOutput& output, const std::filesystem::path& out_dir);

// Every value in `expected` must appear in `actual` with the same content;
// metric cells compare exact rationals. Returns mismatch descriptions.
std::vector<std::string> compare_expected(const Json& expected, const Json& actual);

}  // namespace sqlharness

#endif  // SQLHARNESS_MOCKGEN_HPP_
