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

#ifndef FRAGSCOPE_METRICS_HPP_
#define FRAGSCOPE_METRICS_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fragscope/crawl.hpp"

namespace fragscope {

// Three-way label used for scoring; Nd2 and Nd3 collapse to Nd.
enum class Coarse { kCl = 0, kNd = 1, kDi = 2 };

std::string to_string(Coarse c);
Coarse parse_coarse(const std::string& s);  // accepts Cl/Clone, Nd/Nd2/Nd3, Di/Distinct
Coarse coarse(ClassLabel c);
Coarse coarse(Gamma g);

// Macro F1 over the classes present in truth or predictions; a present
// class with no true positive contributes 0. Throws LengthMismatch.
double multiclass_f1(const std::vector<Coarse>& predictions, const std::vector<Coarse>& truth);

struct LabeledPair {
  std::string first;
  std::string second;
  Coarse label = Coarse::kCl;
};

// CSV with header first,second,label; paths are resolved against the
// directory of the CSV file.
std::vector<LabeledPair> load_pairs(const std::string& csv_path);

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  int covered = 0;
};

// mapper returns the ground-truth index for a model state, or nullopt.
using StateMapper = std::function<std::optional<int>(int model_state)>;

PrecisionRecall model_precision_recall(int model_states, int gt_states, const StateMapper& mapper);
// Maps each model state to the first ground-truth page it classifies as
// Clone, then Nd2, then Nd3. overrides (model id -> gt index) win.
StateMapper classify_mapper(const AppModel& model, const std::vector<HierarchyPtr>& gt, Classifier& clf,
                            const std::map<std::string, int>& overrides = {});

struct TuneResult {
  double t_c = 0.0;
  double t_n = 0.0;
  double best_f1 = 0.0;
  std::vector<double> trace;        // F1 per trial
  std::vector<double> best_so_far;  // running maximum
};

// Seeded random search followed by grid refinement around the best pair.
TuneResult tune_thresholds(const std::vector<double>& distances, const std::vector<Coarse>& truth, int budget,
                           std::uint64_t seed);
// Maximum of each consecutive block of `interval` trials.
std::vector<double> interval_max(const std::vector<double>& trace, int interval);
double gamma_f1(const std::vector<double>& distances, const std::vector<Coarse>& truth, double t_c, double t_n);

}  // namespace fragscope

#endif  // FRAGSCOPE_METRICS_HPP_
