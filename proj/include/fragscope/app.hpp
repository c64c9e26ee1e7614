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

#ifndef FRAGSCOPE_APP_HPP_
#define FRAGSCOPE_APP_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "fragscope/histogram.hpp"
#include "fragscope/snapshot.hpp"
#include "fragscope/tree.hpp"

namespace fragscope {

struct Entry {
  std::string first;
  std::string last;
  std::string phone;
  bool operator==(const Entry&) const = default;
};

struct Generator {
  std::vector<std::string> first;
  std::vector<std::string> last;
  std::string phone_prefix = "555-";
};

enum class EffectKind { kGoto, kAddRow, kMutateData, kNoop };

struct Effect {
  EffectKind kind = EffectKind::kNoop;
  std::string target;  // page for goto, generator for mutateData
};

// Rows rendered from the session data under one node of a page template.
struct RowBlock {
  int parent = -1;            // template node id receiving the rows
  std::string row_template;   // key into SimApp::row_templates
  int origin_x = 0;
  int origin_y = 0;
  int pitch = 0;
  bool grow = true;           // parent height follows the row count
};

struct RowTemplate {
  std::vector<DomNode> nodes;  // bboxes relative to the row origin
  int root = 0;
};

struct PageTemplate {
  std::vector<DomNode> nodes;
  int root = 0;
  std::optional<RowBlock> rows;
};

struct SimApp {
  std::string name;
  std::string base_url;
  std::uint64_t seed = 0;
  int viewport_w = kDefaultViewportW;
  int viewport_h = kDefaultViewportH;
  std::string start;
  std::vector<Entry> entries;  // initial data of every page load
  std::map<std::string, Generator> generators;
  std::map<std::string, RowTemplate> row_templates;
  std::map<std::string, PageTemplate> pages;
  std::map<std::pair<std::string, std::string>, Effect> transitions;  // (page, locator)

  // Throws InvalidConfig when a transition locator does not resolve.
  void validate() const;
};

SimApp app_from_json(const Json& j);
SimApp load_app(const std::string& path);

class Session {
 public:
  // data_seed replaces the declared initial data by generated entries of
  // the same count, drawn from the first generator.
  explicit Session(const SimApp& app, std::optional<std::uint64_t> data_seed = std::nullopt);

  SnapshotPtr load_url();
  // Throws StaleActionable when the locator does not resolve.
  SnapshotPtr fire(const Actionable& a);
  SnapshotPtr fire(const std::string& locator);

  const SnapshotPtr& current() const { return current_; }
  const std::string& page() const { return page_; }
  int actions() const { return actions_; }
  int loads() const { return loads_; }

 private:
  std::vector<Entry> initial_entries() const;
  Entry draw(const Generator& g);
  SnapshotPtr render();

  const SimApp& app_;
  std::optional<std::uint64_t> data_seed_;
  std::mt19937_64 rng_;
  std::string page_;
  std::vector<Entry> entries_;
  SnapshotPtr current_;
  int actions_ = 0;
  int loads_ = 0;
};

Snapshot render_page(const SimApp& app, const std::string& page, const std::vector<Entry>& entries);

enum class SafKind { kStructural, kVisual };
enum class Gamma { kClone, kNd, kDistinct };

std::string to_string(SafKind k);
std::string to_string(Gamma g);
SafKind parse_saf_kind(const std::string& s);

struct WholePageSAF {
  SafKind kind = SafKind::kStructural;
  double t_c = 0.0;
  double t_n = 0.0;

  void validate() const;
};

// Structural: tree edit distance over the whole pruned page normalised by
// the larger node count. Visual: whole-page histogram distance.
double whole_page_distance(SafKind kind, const Snapshot& a, const Snapshot& b);
Gamma gamma_of(const WholePageSAF& saf, double distance);
Gamma gamma_classify(const WholePageSAF& saf, const Snapshot& a, const Snapshot& b);

// Precomputed whole-page inputs for repeated comparisons.
struct PageSignature {
  LabeledTree tree;
  std::string canonical;
  Histogram hist;
};

PageSignature page_signature(const Snapshot& s);
double whole_page_distance(SafKind kind, const PageSignature& a, const PageSignature& b);
// Skips the edit distance when the node-count bound already exceeds t_n.
Gamma gamma_classify(const WholePageSAF& saf, const PageSignature& a, const PageSignature& b);

struct SnapshotPair {
  SnapshotPtr a;
  SnapshotPtr b;
};

// Serial reference and OpenMP kernel; identical results.
std::vector<double> pair_distances(SafKind kind, const std::vector<SnapshotPair>& pairs);
std::vector<double> pair_distances_parallel(SafKind kind, const std::vector<SnapshotPair>& pairs);

}  // namespace fragscope

#endif  // FRAGSCOPE_APP_HPP_
