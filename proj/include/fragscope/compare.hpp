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

#ifndef FRAGSCOPE_COMPARE_HPP_
#define FRAGSCOPE_COMPARE_HPP_

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "fragscope/fragment.hpp"

namespace fragscope {

// Ordered by severity of difference.
enum class ClassLabel { kClone = 0, kNd2 = 1, kNd3 = 2, kDistinct = 3 };

std::string to_string(ClassLabel c);
ClassLabel parse_class_label(const std::string& s);

struct CompareConfig {
  double visual_epsilon = 0.0;
  int max_depth = 32;
};

// Changed DOM ids on each side of a fragment pair.
struct NodeDiff {
  std::vector<int> first;
  std::vector<int> second;
  int distance = 0;
  bool empty() const { return first.empty() && second.empty(); }
  std::size_t size() const { return first.size() + second.size(); }
};

NodeDiff treediff(const Fragment& a, const Fragment& b);
double imagediff(const Fragment& a, const Fragment& b);

struct FragmentPair {
  int first = -1;   // frag id on the first side, -1 if none
  int second = -1;  // frag id on the second side, -1 if none
};

struct Explanation {
  ClassLabel label = ClassLabel::kClone;
  // Fragments carrying the difference; for Nd2 these are the deepest
  // visually differing pairs, otherwise the closest fragments of the
  // changed nodes (with their mapped partner where one exists).
  std::vector<FragmentPair> changed;
};

// Fragment classifier with a per-pair result cache keyed by
// (snapshot uid, fragId). Not thread safe; use one instance per thread.
class Classifier {
 public:
  explicit Classifier(CompareConfig cfg = {}) : cfg_(cfg) {}

  ClassLabel classify(const Fragment& a, const Fragment& b);
  ClassLabel classify(const Hierarchy& a, const Hierarchy& b) { return classify(a.root(), b.root()); }
  Explanation explain(const Fragment& a, const Fragment& b);

  void set_tracing(bool on) { tracing_ = on; }
  const Json& trace() const { return trace_; }
  std::size_t cache_size() const { return cache_.size(); }
  std::uint64_t evaluations() const { return evaluations_; }
  const CompareConfig& config() const { return cfg_; }

 private:
  struct Key {
    std::uint64_t ua;
    int fa;
    std::uint64_t ub;
    int fb;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const;
  };

  ClassLabel classify_rec(const Fragment& a, const Fragment& b, int depth);
  ClassLabel map_child_fragments(const NodeDiff& diff, const Fragment& a, const Fragment& b,
                                 int depth, Json* event);
  void visual_changes(const Fragment& a, const Fragment& b, std::vector<FragmentPair>& out) const;

  CompareConfig cfg_;
  std::unordered_map<Key, ClassLabel, KeyHash> cache_;
  bool tracing_ = false;
  Json trace_ = Json::array();
  std::uint64_t evaluations_ = 0;
};

}  // namespace fragscope

#endif  // FRAGSCOPE_COMPARE_HPP_
