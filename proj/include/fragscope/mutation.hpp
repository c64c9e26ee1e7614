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

#ifndef FRAGSCOPE_MUTATION_HPP_
#define FRAGSCOPE_MUTATION_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fragscope/testgen.hpp"

namespace fragscope {

enum class MutationOp { kAttribute, kTag, kSubtree, kText, kNone };

std::string to_string(MutationOp op);
MutationOp parse_mutation_op(const std::string& s);

struct Mutation {
  MutationOp op = MutationOp::kNone;
  int target = -1;
  std::string before;
  std::string after;
  bool visible = false;
};

// Applies one operator to one random eligible node. Throws NoEligibleNode.
std::pair<Snapshot, Mutation> mutate(const Snapshot& s, MutationOp op, std::uint64_t seed);
bool eligible_for(const DomNode& n, MutationOp op);
std::string similar_tag(const std::string& tag);

enum class EquivalentKind { kNone, kAttribute, kInvisible };

enum class OracleKind { kFragmentNoMem = 0, kFragmentWithMem = 1, kStructural = 2, kVisual = 3 };
inline constexpr int kOracleCount = 4;
std::string to_string(OracleKind k);

struct MutationConfig {
  int mutants = 400;
  std::uint64_t seed = 1;
  Verdict fail_at = Verdict::kWarn2;
  WholePageSAF structural{SafKind::kStructural, 0.0, 0.0};
  WholePageSAF visual{SafKind::kVisual, 0.0, 0.0};
};

struct MutantRecord {
  int index = 0;
  int state = 0;
  std::uint64_t seed = 0;  // mutate(state snapshot, op, seed) rebuilds the mutant
  Mutation mutation;
  std::array<Verdict, kOracleCount> verdicts{};

  bool equivalent() const { return mutation.op == MutationOp::kNone || !mutation.visible; }
  EquivalentKind kind() const;
};

struct OracleScore {
  OracleKind oracle = OracleKind::kFragmentNoMem;
  int visible = 0;
  int detected = 0;
  std::array<int, 3> equivalents{};  // indexed by EquivalentKind
  std::array<int, 3> tolerated{};

  double effectiveness() const;
  double robustness() const;
  double robustness(EquivalentKind k) const;
};

struct MutationReport {
  std::vector<MutantRecord> mutants;
  std::array<OracleScore, kOracleCount> scores;

  Json to_json() const;
  std::string to_csv() const;
};

// Live snapshot of every model state, taken at its first assert when the
// generated tests are replayed. data_seed regenerates the initial data.
std::vector<SnapshotPtr> record_trace(const AppModel& model, const SimApp& app,
                                      std::optional<std::uint64_t> data_seed = std::nullopt);

// trace: aligned with the model states, compared against operator mutants.
// none_trace: aligned trace with regenerated data, compared against the
// unmutated states for None mutants. Throws MisalignedTrace.
MutationReport run_mutation_experiment(const AppModel& model, const std::vector<SnapshotPtr>& trace,
                                       const std::vector<SnapshotPtr>& none_trace, const MutationConfig& cfg,
                                       bool parallel = true);

}  // namespace fragscope

#endif  // FRAGSCOPE_MUTATION_HPP_
