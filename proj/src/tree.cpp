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

#include "fragscope/tree.hpp"

#include <algorithm>
#include <functional>

namespace fragscope {

int LabeledTree::add(std::string label, int parent, int src) {
  int id = size();
  labels.push_back(std::move(label));
  children.emplace_back();
  source.push_back(src);
  if (parent >= 0) children[parent].push_back(id);
  return id;
}

std::string LabeledTree::canonical() const {
  if (labels.empty()) return "";
  std::string out;
  std::function<void(int)> rec = [&](int n) {
    out += labels[n];
    out += '(';
    for (int c : children[n]) rec(c);
    out += ')';
  };
  rec(0);
  return out;
}

namespace {

// Postorder view, 1-indexed as in the classic formulation.
struct Post {
  std::vector<int> pre;  // post index -> preorder id
  std::vector<int> lml;  // leftmost leaf descendant (post index)
  std::vector<int> keyroots;
  const LabeledTree* t = nullptr;

  explicit Post(const LabeledTree& tree) : t(&tree) {
    int n = tree.size();
    pre.assign(n + 1, 0);
    lml.assign(n + 1, 0);
    if (n == 0) return;
    int counter = 0;
    std::function<int(int)> rec = [&](int v) -> int {
      int first = -1;
      for (int c : tree.children[v]) {
        int l = rec(c);
        if (first < 0) first = l;
      }
      ++counter;
      pre[counter] = v;
      lml[counter] = first < 0 ? counter : first;
      return lml[counter];
    };
    rec(0);
    std::vector<int> last_for(n + 2, 0);
    for (int i = 1; i <= n; ++i) last_for[lml[i]] = i;
    for (int i = 1; i <= n; ++i) {
      if (last_for[lml[i]] == i) keyroots.push_back(i);
    }
  }
  const std::string& label(int i) const { return t->labels[pre[i]]; }
};

struct Zs {
  const Post& a;
  const Post& b;
  std::vector<std::vector<int>> td;

  Zs(const Post& pa, const Post& pb) : a(pa), b(pb) {
    int n = static_cast<int>(a.pre.size()) - 1;
    int m = static_cast<int>(b.pre.size()) - 1;
    td.assign(n + 1, std::vector<int>(m + 1, 0));
    for (int i : a.keyroots) {
      for (int j : b.keyroots) forest(i, j, nullptr);
    }
  }

  int cost(int x, int y) const { return a.label(x) == b.label(y) ? 0 : 1; }

  // Fills the forest table for subtrees rooted at i and j. The table is
  // offset so that row li-1 and column lj-1 are index 0.
  void forest(int i, int j, std::vector<std::vector<int>>* keep) {
    int li = a.lml[i];
    int lj = b.lml[j];
    int rows = i - li + 2;
    int cols = j - lj + 2;
    std::vector<std::vector<int>> fd(rows, std::vector<int>(cols, 0));
    for (int x = 1; x < rows; ++x) fd[x][0] = fd[x - 1][0] + 1;
    for (int y = 1; y < cols; ++y) fd[0][y] = fd[0][y - 1] + 1;
    for (int x = li; x <= i; ++x) {
      for (int y = lj; y <= j; ++y) {
        int fx = x - li + 1;
        int fy = y - lj + 1;
        int del = fd[fx - 1][fy] + 1;
        int ins = fd[fx][fy - 1] + 1;
        if (a.lml[x] == li && b.lml[y] == lj) {
          int sub = fd[fx - 1][fy - 1] + cost(x, y);
          fd[fx][fy] = std::min({del, ins, sub});
          if (!keep) td[x][y] = fd[fx][fy];
        } else {
          int px = a.lml[x] - li;
          int py = b.lml[y] - lj;
          fd[fx][fy] = std::min({del, ins, fd[px][py] + td[x][y]});
        }
      }
    }
    if (keep) *keep = std::move(fd);
  }

  void trace(int i, int j, EditMapping& out) {
    std::vector<std::vector<int>> fd;
    forest(i, j, &fd);
    int li = a.lml[i];
    int lj = b.lml[j];
    int x = i;
    int y = j;
    while (x >= li || y >= lj) {
      int fx = x - li + 1;
      int fy = y - lj + 1;
      if (x < li) {
        out.inserted.push_back(b.pre[y]);
        --y;
        continue;
      }
      if (y < lj) {
        out.deleted.push_back(a.pre[x]);
        --x;
        continue;
      }
      int v = fd[fx][fy];
      if (a.lml[x] == li && b.lml[y] == lj) {
        if (v == fd[fx - 1][fy - 1] + cost(x, y)) {
          out.pairs.emplace_back(a.pre[x], b.pre[y]);
          if (cost(x, y)) out.renamed.emplace_back(a.pre[x], b.pre[y]);
          --x;
          --y;
          continue;
        }
      } else {
        int px = a.lml[x] - li;
        int py = b.lml[y] - lj;
        if (v == fd[px][py] + td[x][y]) {
          trace(x, y, out);
          x = a.lml[x] - 1;
          y = b.lml[y] - 1;
          continue;
        }
      }
      if (v == fd[fx - 1][fy] + 1) {
        out.deleted.push_back(a.pre[x]);
        --x;
      } else {
        out.inserted.push_back(b.pre[y]);
        --y;
      }
    }
  }
};

}  // namespace

int tree_edit_distance(const LabeledTree& a, const LabeledTree& b) {
  if (a.size() == 0) return b.size();
  if (b.size() == 0) return a.size();
  Post pa(a);
  Post pb(b);
  Zs zs(pa, pb);
  return zs.td[a.size()][b.size()];
}

EditMapping tree_edit_mapping(const LabeledTree& a, const LabeledTree& b) {
  EditMapping out;
  if (a.size() == 0 || b.size() == 0) {
    for (int i = 0; i < a.size(); ++i) out.deleted.push_back(i);
    for (int j = 0; j < b.size(); ++j) out.inserted.push_back(j);
    out.distance = a.size() + b.size();
    return out;
  }
  Post pa(a);
  Post pb(b);
  Zs zs(pa, pb);
  out.distance = zs.td[a.size()][b.size()];
  zs.trace(a.size(), b.size(), out);
  std::sort(out.pairs.begin(), out.pairs.end());
  std::sort(out.deleted.begin(), out.deleted.end());
  std::sort(out.inserted.begin(), out.inserted.end());
  std::sort(out.renamed.begin(), out.renamed.end());
  return out;
}

bool isomorphic(const LabeledTree& a, const LabeledTree& b) { return a.canonical() == b.canonical(); }

}  // namespace fragscope
