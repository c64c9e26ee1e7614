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

// Brute-force reference implementations and random generators shared by the
// unit, property and acceptance tests. Deliberately slow and simple.

#ifndef FRAGSCOPE_TESTS_SUPPORT_ORACLES_HPP_
#define FRAGSCOPE_TESTS_SUPPORT_ORACLES_HPP_

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "fragscope/fragment.hpp"
#include "fragscope/snapshot.hpp"
#include "fragscope/tree.hpp"

namespace fragscope::oracle {

// Edit distance over ordered forests by the textbook recursion on the
// rightmost roots, memoised on the forest contents.
class ForestDistance {
 public:
  ForestDistance(const LabeledTree& a, const LabeledTree& b) : a_(a), b_(b) {}

  int run() {
    std::vector<int> fa, fb;
    if (a_.size()) fa.push_back(0);
    if (b_.size()) fb.push_back(0);
    return dist(fa, fb);
  }

 private:
  static std::string key(const std::vector<int>& f) {
    std::string k;
    for (int v : f) k += std::to_string(v) + ",";
    return k;
  }
  int subtree_size(const LabeledTree& t, int v) {
    int n = 1;
    for (int c : t.children[v]) n += subtree_size(t, c);
    return n;
  }
  int forest_size(const LabeledTree& t, const std::vector<int>& f) {
    int n = 0;
    for (int v : f) n += subtree_size(t, v);
    return n;
  }
  int dist(const std::vector<int>& f, const std::vector<int>& g) {
    if (f.empty()) return forest_size(b_, g);
    if (g.empty()) return forest_size(a_, f);
    std::string k = key(f) + "|" + key(g);
    if (auto it = memo_.find(k); it != memo_.end()) return it->second;
    int v = f.back(), w = g.back();
    std::vector<int> f_minus_v(f.begin(), f.end() - 1);
    f_minus_v.insert(f_minus_v.end(), a_.children[v].begin(), a_.children[v].end());
    std::vector<int> g_minus_w(g.begin(), g.end() - 1);
    g_minus_w.insert(g_minus_w.end(), b_.children[w].begin(), b_.children[w].end());
    std::vector<int> f_rest(f.begin(), f.end() - 1), g_rest(g.begin(), g.end() - 1);
    int best = dist(f_minus_v, g) + 1;
    best = std::min(best, dist(f, g_minus_w) + 1);
    best = std::min(best, dist(f_rest, g_rest) + dist(a_.children[v], b_.children[w]) +
                              (a_.labels[v] == b_.labels[w] ? 0 : 1));
    memo_.emplace(std::move(k), best);
    return best;
  }

  const LabeledTree& a_;
  const LabeledTree& b_;
  std::map<std::string, int> memo_;
};

inline int forest_distance(const LabeledTree& a, const LabeledTree& b) { return ForestDistance(a, b).run(); }

struct Order {
  std::vector<int> pre;               // node -> preorder rank
  std::vector<std::vector<bool>> anc;  // anc[x][y]: x is a proper ancestor of y
};

inline Order order_of(const LabeledTree& t) {
  Order o;
  int n = t.size();
  o.pre.assign(n, 0);
  o.anc.assign(n, std::vector<bool>(n, false));
  int rank = 0;
  std::vector<int> path;
  std::function<void(int)> rec = [&](int v) {
    o.pre[v] = rank++;
    for (int p : path) o.anc[p][v] = true;
    path.push_back(v);
    for (int c : t.children[v]) rec(c);
    path.pop_back();
  };
  if (n) rec(0);
  return o;
}

// True when the node pairs form a valid ordered edit mapping.
inline bool valid_mapping(const LabeledTree& a, const LabeledTree& b, const std::vector<std::pair<int, int>>& m) {
  Order oa = order_of(a), ob = order_of(b);
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) {
      if (i == j) continue;
      auto [x1, y1] = m[i];
      auto [x2, y2] = m[j];
      if (x1 == x2 || y1 == y2) return false;
      if (oa.anc[x1][x2] != ob.anc[y1][y2]) return false;
      if ((oa.pre[x1] < oa.pre[x2]) != (ob.pre[y1] < ob.pre[y2])) return false;
    }
  }
  return true;
}

inline int mapping_cost(const LabeledTree& a, const LabeledTree& b, const std::vector<std::pair<int, int>>& m) {
  int cost = a.size() + b.size() - 2 * static_cast<int>(m.size());
  for (auto [x, y] : m) cost += a.labels[x] == b.labels[y] ? 0 : 1;
  return cost;
}

// Minimum cost over every valid mapping. Only for very small trees.
inline int exhaustive_distance(const LabeledTree& a, const LabeledTree& b) {
  Order oa = order_of(a), ob = order_of(b);
  int best = a.size() + b.size();
  std::vector<std::pair<int, int>> m;
  std::vector<bool> used(b.size(), false);
  auto compatible = [&](int x, int y) {
    for (auto [x2, y2] : m) {
      if (oa.anc[x][x2] != ob.anc[y][y2] || oa.anc[x2][x] != ob.anc[y2][y]) return false;
      if ((oa.pre[x] < oa.pre[x2]) != (ob.pre[y] < ob.pre[y2])) return false;
    }
    return true;
  };
  std::function<void(int)> rec = [&](int x) {
    if (x == a.size()) {
      best = std::min(best, mapping_cost(a, b, m));
      return;
    }
    rec(x + 1);
    for (int y = 0; y < b.size(); ++y) {
      if (used[y] || !compatible(x, y)) continue;
      used[y] = true;
      m.emplace_back(x, y);
      rec(x + 1);
      m.pop_back();
      used[y] = false;
    }
  };
  rec(0);
  return best;
}

// Ordered, labelled isomorphism by direct simultaneous descent over the DOM.
inline bool dom_isomorphic(const Snapshot& a, int na, const Snapshot& b, int nb) {
  const DomNode& x = a.node(na);
  const DomNode& y = b.node(nb);
  if (x.tag != y.tag || x.children.size() != y.children.size()) return false;
  for (std::size_t i = 0; i < x.children.size(); ++i) {
    if (!dom_isomorphic(a, x.children[i], b, y.children[i])) return false;
  }
  return true;
}

inline bool tree_isomorphic(const LabeledTree& a, int x, const LabeledTree& b, int y) {
  if (a.labels[x] != b.labels[y] || a.children[x].size() != b.children[y].size()) return false;
  for (std::size_t i = 0; i < a.children[x].size(); ++i) {
    if (!tree_isomorphic(a, a.children[x][i], b, b.children[y][i])) return false;
  }
  return true;
}

inline LabeledTree random_tree(std::mt19937_64& rng, int n, int alphabet) {
  LabeledTree t;
  for (int i = 0; i < n; ++i) {
    int parent = i == 0 ? -1 : static_cast<int>(rng() % static_cast<unsigned>(i));
    t.add(std::string(1, static_cast<char>('a' + rng() % static_cast<unsigned>(alphabet))), parent);
  }
  return t;
}

inline const std::vector<std::string>& random_tags() {
  static const std::vector<std::string> tags = {"div", "span", "p", "a", "ul", "li", "table"};
  return tags;
}

// Random DOM under html/body with stacked bboxes; ids are assigned later by
// finalize().
inline Snapshot random_snapshot(std::mt19937_64& rng, int n) {
  Snapshot s;
  s.viewport_w = 400;
  s.viewport_h = 1200;
  auto push = [&](const std::string& tag, int parent) {
    DomNode d;
    d.id = static_cast<int>(s.nodes.size());
    d.tag = tag;
    s.nodes.push_back(d);
    if (parent >= 0) s.nodes[parent].children.push_back(d.id);
    return d.id;
  };
  push("html", -1);
  push("body", 0);
  const auto& tags = random_tags();
  for (int i = 2; i < n; ++i) {
    int parent = 1 + static_cast<int>(rng() % static_cast<unsigned>(i - 1));
    push(tags[rng() % tags.size()], parent);
  }
  s.root = 0;
  s.finalize();
  return s;
}

// Copy of s with k random structural edits: relabel, drop a leaf, or add a leaf.
inline Snapshot edit_snapshot(std::mt19937_64& rng, const Snapshot& s, int k) {
  Snapshot t;
  t.viewport_w = s.viewport_w;
  t.viewport_h = s.viewport_h;
  t.nodes = s.nodes;
  t.root = s.root;
  const auto& tags = random_tags();
  for (int e = 0; e < k; ++e) {
    int n = static_cast<int>(t.nodes.size());
    int kind = static_cast<int>(rng() % 3);
    int v = 2 + static_cast<int>(rng() % static_cast<unsigned>(std::max(1, n - 2)));
    if (v >= n) kind = 2;
    if (kind == 0) {
      t.nodes[v].tag = tags[rng() % tags.size()];
    } else if (kind == 1 && t.nodes[v].children.empty()) {
      for (DomNode& d : t.nodes) {
        d.children.erase(std::remove(d.children.begin(), d.children.end(), t.nodes[v].id), d.children.end());
      }
      t.nodes.erase(t.nodes.begin() + v);
    } else if (n < 30) {
      DomNode d;
      int max_id = 0;
      for (const DomNode& x : t.nodes) max_id = std::max(max_id, x.id);
      d.id = max_id + 1;
      d.tag = tags[rng() % tags.size()];
      int parent = 1 + static_cast<int>(rng() % static_cast<unsigned>(n - 1));
      auto& ch = t.nodes[parent].children;
      ch.insert(ch.begin() + static_cast<long>(rng() % (ch.size() + 1)), d.id);
      t.nodes.push_back(d);
    }
  }
  t.finalize();
  return t;
}

// Deepest useful fragment containing the node, by scanning every fragment.
inline int closest_by_scan(const Hierarchy& h, int node) {
  int best = h.root().frag_id;
  int best_depth = -1;
  for (const Fragment& f : h.fragments()) {
    if (!f.useful && !f.is_root()) continue;
    if (!std::binary_search(f.nodes.begin(), f.nodes.end(), node)) continue;
    if (f.depth > best_depth) {
      best = f.frag_id;
      best_depth = f.depth;
    }
  }
  return best;
}

}  // namespace fragscope::oracle

#endif  // FRAGSCOPE_TESTS_SUPPORT_ORACLES_HPP_
