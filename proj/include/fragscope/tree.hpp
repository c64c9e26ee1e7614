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

#ifndef FRAGSCOPE_TREE_HPP_
#define FRAGSCOPE_TREE_HPP_

#include <string>
#include <utility>
#include <vector>

namespace fragscope {

// Ordered labelled tree in preorder; node 0 is the root.
struct LabeledTree {
  std::vector<std::string> labels;
  std::vector<std::vector<int>> children;
  std::vector<int> source;  // originating DOM id, -1 for synthetic nodes

  int size() const { return static_cast<int>(labels.size()); }
  int add(std::string label, int parent, int src = -1);
  std::string canonical() const;
};

struct EditMapping {
  int distance = 0;
  std::vector<std::pair<int, int>> pairs;  // (node in t1, node in t2), matched or renamed
  std::vector<int> deleted;                // nodes of t1 without partner
  std::vector<int> inserted;               // nodes of t2 without partner
  std::vector<std::pair<int, int>> renamed;
};

// Exact ordered tree edit distance with unit costs.
int tree_edit_distance(const LabeledTree& a, const LabeledTree& b);
EditMapping tree_edit_mapping(const LabeledTree& a, const LabeledTree& b);

bool isomorphic(const LabeledTree& a, const LabeledTree& b);

}  // namespace fragscope

#endif  // FRAGSCOPE_TREE_HPP_
