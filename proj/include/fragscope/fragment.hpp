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

#ifndef FRAGSCOPE_FRAGMENT_HPP_
#define FRAGSCOPE_FRAGMENT_HPP_

#include <memory>
#include <vector>

#include "fragscope/histogram.hpp"
#include "fragscope/snapshot.hpp"
#include "fragscope/tree.hpp"

namespace fragscope {

struct FragConfig {
  int min_nodes = 3;
  long long min_area = 2500;
  int min_separator_px = 10;
  int max_split_depth = 64;
};

class Hierarchy;

struct Fragment {
  int frag_id = 0;
  std::vector<int> nodes;  // ascending DOM ids
  Rect bbox;
  Raster crop;
  std::vector<int> children;
  int parent = -1;
  bool useful = false;
  int depth = 0;
  int anchor = -1;  // lowest common DOM ancestor of the members
  LabeledTree pruned;
  Histogram hist;
  const Hierarchy* owner = nullptr;

  bool contains(int node) const;
  bool is_root() const { return parent < 0; }
};

// Fragment hierarchy of one snapshot. Fragments are stored in preorder,
// index == fragId, so fragment 0 is the root.
class Hierarchy {
 public:
  Hierarchy(SnapshotPtr snap, const FragConfig& cfg);
  Hierarchy(const Hierarchy&) = delete;
  Hierarchy& operator=(const Hierarchy&) = delete;

  const Snapshot& snapshot() const { return *snap_; }
  const SnapshotPtr& snapshot_ptr() const { return snap_; }
  std::uint64_t uid() const { return snap_->uid(); }
  const Fragment& root() const { return frags_.front(); }
  const Fragment& at(int frag_id) const { return frags_.at(frag_id); }
  const std::vector<Fragment>& fragments() const { return frags_; }
  const FragConfig& config() const { return cfg_; }

  // Deepest useful fragment whose node set contains the node.
  const Fragment& closest(int node) const;
  std::vector<const Fragment*> useful_fragments() const;
  std::vector<const Fragment*> useful_descendants(const Fragment& f) const;
  Json to_json() const;

 private:
  int build(int parent, std::vector<int> nodes, const Rect& bbox, int depth);

  SnapshotPtr snap_;
  FragConfig cfg_;
  std::vector<Fragment> frags_;
  std::vector<int> closest_;
};

using HierarchyPtr = std::shared_ptr<const Hierarchy>;

HierarchyPtr fragment(SnapshotPtr snap, const FragConfig& cfg = {});
bool is_useful(const Fragment& f, const FragConfig& cfg);
LabeledTree prune_dom(const Snapshot& s, const std::vector<int>& nodes);

}  // namespace fragscope

#endif  // FRAGSCOPE_FRAGMENT_HPP_
