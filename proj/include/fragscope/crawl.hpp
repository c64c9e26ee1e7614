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

#ifndef FRAGSCOPE_CRAWL_HPP_
#define FRAGSCOPE_CRAWL_HPP_

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fragscope/app.hpp"
#include "fragscope/compare.hpp"
#include "fragscope/memo.hpp"

namespace fragscope {

struct StopCriteria {
  std::optional<double> max_duration_sec;
  std::optional<int> max_states;
  std::optional<int> max_actions;
};

enum class DedupMode { kFragment, kWholePage };

struct CrawlConfig {
  double c0 = 1.0;
  StopCriteria stopping;
  bool explore_skipped_duplicates = false;
  std::vector<std::string> tag_set = default_tag_set();
  FragConfig frag;
  CompareConfig compare;
  DedupMode mode = DedupMode::kFragment;
  WholePageSAF saf;  // used in whole-page mode

  void validate() const;
  Json to_json() const;
  static CrawlConfig from_json(const Json& j);
};

struct ModelState {
  std::string id;
  HierarchyPtr page;
  std::vector<Actionable> actionables;
  std::vector<bool> explored;
  bool unreachable = false;
};

struct Transition {
  int src = 0;
  int actionable = 0;  // index into the source state's actionables
  int tgt = 0;
};

struct ActRef {
  int state = 0;
  int index = 0;
  auto operator<=>(const ActRef&) const = default;
};

struct AuditEntry {
  int step = 0;
  std::string kind;     // load, explore, replay, stale, backtrack-failed
  int src = -1;
  int actionable = -1;
  std::string locator;
  int tgt = -1;
  int transition = -1;
  std::string outcome;  // new, Clone, Nd2, Nd (whole page), or empty
  std::vector<ActRef> equivalence_class;
};

struct AppModel {
  std::vector<ModelState> states;
  std::vector<Transition> transitions;
  std::vector<std::vector<int>> paths;
  FragmentMemo memo;
  std::vector<AuditEntry> audit;
  CrawlConfig config;
  bool terminated = false;
  std::string stop_reason;
  int actions = 0;
  int loads = 0;
  double seconds = 0.0;

  int find_state(const std::string& id) const;
};

class Crawler;
using StepObserver = std::function<void(const Crawler&, const AuditEntry&)>;

class Crawler {
 public:
  Crawler(const SimApp& app, CrawlConfig cfg);

  AppModel run(const StepObserver& observer = {});

  // Scoring over the model under construction; valid inside observers.
  bool equivalent(ActRef x, ActRef y) const;
  std::vector<ActRef> equivalence_class(ActRef a) const;
  double score_actionable(ActRef a) const;
  double score_state(int state) const;
  const AppModel& model() const { return model_; }
  Classifier& classifier() const { return clf_; }

 private:
  struct Located {
    int frag = 0;
    std::string rel;
  };

  int add_state(const SnapshotPtr& snap);
  int match_state(const Hierarchy& page, std::string* outcome);
  int record_transition(int src, int act, int tgt);
  std::optional<int> pick_actionable(int state) const;
  std::optional<int> pick_state() const;
  std::vector<int> shortest_path(int target) const;
  bool eligible(ActRef a) const;
  bool should_stop();
  void begin_path();
  void log(AuditEntry e, const StepObserver& observer);

  const SimApp& app_;
  AppModel model_;
  mutable Classifier clf_;
  mutable std::map<std::pair<ActRef, ActRef>, bool> equiv_cache_;
  std::vector<std::vector<Located>> located_;
  std::vector<PageSignature> signatures_;
  std::map<std::tuple<int, int, int>, int> transition_ids_;
  double started_ = 0.0;
  int step_ = 0;
};

AppModel crawl(const SimApp& app, const CrawlConfig& cfg, const StepObserver& observer = {});

// Writes model.json plus one snapshot file per state under dir.
void save_model(const AppModel& m, const std::string& dir);
AppModel load_model(const std::string& dir_or_file);
Json model_to_json(const AppModel& m);

}  // namespace fragscope

#endif  // FRAGSCOPE_CRAWL_HPP_
