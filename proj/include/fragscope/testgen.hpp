// Copyright 2026 The Fragscope Authors
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

#ifndef FRAGSCOPE_TESTGEN_HPP_
#define FRAGSCOPE_TESTGEN_HPP_

#include <optional>
#include <string>
#include <vector>

#include "fragscope/crawl.hpp"

namespace fragscope {

enum class Verdict { kSuccess = 0, kWarn1 = 1, kWarn2 = 2, kWarn3 = 3, kError = 4 };

std::string to_string(Verdict v);
Verdict parse_verdict(const std::string& s);

enum class StepKind { kLoad, kAction, kAssert };

struct TestStep {
  StepKind kind = StepKind::kLoad;
  std::string state;     // asserted model state
  std::string locator;   // action target
  std::string label;
  int transition = -1;
};

struct TestCase {
  std::string id;
  std::string base_url;
  std::vector<TestStep> steps;
};

// One test per exploration path. Throws EmptyModel.
std::vector<TestCase> generate_tests(const AppModel& model);
Json tests_to_json(const std::vector<TestCase>& tests);
std::vector<TestCase> tests_from_json(const Json& j);
// Readable script of one test in the style of a WebDriver test.
std::string test_script(const TestCase& t);

struct OraclePolicy {
  Verdict fail_at = Verdict::kWarn2;
  bool use_memo = true;
};

struct ChangedFragment {
  int model_frag = -1;
  int live_frag = -1;
  bool fluid = false;
};

struct StepVerdict {
  int step = 0;
  StepKind kind = StepKind::kAssert;
  Verdict level = Verdict::kSuccess;
  std::string state;
  std::optional<ClassLabel> label;
  std::vector<ChangedFragment> changed;
  std::string message;
  HierarchyPtr live;
};

struct TestResult {
  std::string id;
  std::vector<StepVerdict> verdicts;
  Verdict worst = Verdict::kSuccess;
  bool failed = false;
  int actions_fired = 0;
  int actions_ok = 0;
};

// Assert verdict of a live page against a model state.
StepVerdict assess(const ModelState& expected, const HierarchyPtr& live, const FragmentMemo& memo,
                   const OraclePolicy& policy, Classifier& clf);

TestResult execute_test(const TestCase& t, const SimApp& app, const AppModel& model,
                        const OraclePolicy& policy, Classifier& clf,
                        std::optional<std::uint64_t> data_seed = std::nullopt);

Json result_to_json(const TestResult& r);
// Self-contained HTML; identical results give identical bytes.
std::string emit_report(const std::vector<TestResult>& results, const AppModel& model);

}  // namespace fragscope

#endif  // FRAGSCOPE_TESTGEN_HPP_
