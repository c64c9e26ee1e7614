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

#include "fragscope/fragment.hpp"

#include <algorithm>
#include <functional>

#include "fragscope/errors.hpp"

namespace fragscope {

namespace {

struct Interval {
  int lo;
  int hi;
};

// Groups blocks along one axis; returns the bands separated by gaps wider
// than min_gap. A single band means no separator.
std::vector<Interval> bands(std::vector<Interval> spans, int min_gap) {
  std::sort(spans.begin(), spans.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi); });
  std::vector<Interval> out;
  for (const Interval& s : spans) {
    if (!out.empty() && s.lo - out.back().hi <= min_gap) {
      out.back().hi = std::max(out.back().hi, s.hi);
    } else {
      out.push_back(s);
    }
  }
  return out;
}

int lca(const Snapshot& s, int a, int b) {
  std::vector<int> chain;
  for (int c = a; c >= 0; c = s.node(c).parent) chain.push_back(c);
  for (int c = b; c >= 0; c = s.node(c).parent) {
    if (std::find(chain.begin(), chain.end(), c) != chain.end()) return c;
  }
  return s.root;
}

}  // namespace

bool Fragment::contains(int node) const { return std::binary_search(nodes.begin(), nodes.end(), node); }

bool is_useful(const Fragment& f, const FragConfig& cfg) {
  if (f.is_root()) return true;
  return static_cast<int>(f.nodes.size()) >= cfg.min_nodes && f.bbox.area() >= cfg.min_area;
}

LabeledTree prune_dom(const Snapshot& s, const std::vector<int>& nodes) {
  std::vector<int> sorted = nodes;
  std::sort(sorted.begin(), sorted.end());
  auto in_set = [&](int id) { return std::binary_search(sorted.begin(), sorted.end(), id); };
  std::vector<int> induced_parent(sorted.size(), -1);
  int roots = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    int p = s.node(sorted[i]).parent;
    while (p >= 0 && !in_set(p)) p = s.node(p).parent;
    induced_parent[i] = p;
    if (p < 0) ++roots;
  }
  LabeledTree t;
  std::vector<int> tree_id_of(s.size(), -1);
  int top = -1;
  if (roots != 1) top = t.add("#fragment", -1);
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    int parent = induced_parent[i] < 0 ? top : tree_id_of[induced_parent[i]];
    tree_id_of[sorted[i]] = t.add(s.node(sorted[i]).tag, parent, sorted[i]);
  }
  return t;
}

Hierarchy::Hierarchy(SnapshotPtr snap, const FragConfig& cfg) : snap_(std::move(snap)), cfg_(cfg) {
  if (cfg_.min_nodes < 0 || cfg_.min_area < 0 || cfg_.min_separator_px < 0) {
    throw InvalidConfig("fragmentation thresholds must be non-negative");
  }
  std::vector<int> all(snap_->size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  build(-1, std::move(all), Rect{0, 0, snap_->viewport_w, snap_->viewport_h}, 0);
  closest_.assign(snap_->size(), 0);
  for (const Fragment& f : frags_) {
    if (!f.useful) continue;
    for (int n : f.nodes) closest_[n] = f.frag_id;
  }
}

int Hierarchy::build(int parent, std::vector<int> nodes, const Rect& bbox, int depth) {
  const Snapshot& s = *snap_;
  int id = static_cast<int>(frags_.size());
  {
    Fragment f;
    f.frag_id = id;
    f.nodes = std::move(nodes);
    f.bbox = bbox;
    f.parent = parent;
    f.depth = depth;
    f.owner = this;
    f.useful = is_useful(f, cfg_);
    f.crop = s.raster().crop(bbox);
    f.hist = histogram(f.crop);
    f.pruned = prune_dom(s, f.nodes);
    int a = f.nodes.front();
    for (int n : f.nodes) a = lca(s, a, n);
    f.anchor = a;
    frags_.push_back(std::move(f));
  }
  if (!frags_[id].useful || depth >= cfg_.max_split_depth) return id;

  const std::vector<int>& members = frags_[id].nodes;
  const Rect region = frags_[id].bbox;
  std::vector<int> placeable;
  std::vector<Interval> ys;
  std::vector<Interval> xs;
  for (int n : members) {
    const DomNode& d = s.node(n);
    if (!d.bbox) continue;
    if (d.bbox->contains(region)) continue;  // container of this fragment
    placeable.push_back(n);
    if (!d.visible) continue;
    ys.push_back({d.bbox->y, d.bbox->bottom()});
    xs.push_back({d.bbox->x, d.bbox->right()});
  }
  if (ys.empty()) return id;
  std::vector<Rect> child_rects;
  auto yb = bands(ys, cfg_.min_separator_px);
  if (yb.size() > 1) {
    for (const Interval& b : yb) child_rects.push_back(Rect{region.x, b.lo, region.w, b.hi - b.lo});
  } else {
    auto xb = bands(xs, cfg_.min_separator_px);
    if (xb.size() > 1) {
      for (const Interval& b : xb) child_rects.push_back(Rect{b.lo, region.y, b.hi - b.lo, region.h});
    }
  }
  if (child_rects.empty()) return id;
  for (const Rect& cr : child_rects) {
    std::vector<int> mine;
    Rect box;
    for (int n : placeable) {
      const DomNode& d = s.node(n);
      if (!cr.contains_center_of(*d.bbox)) continue;
      mine.push_back(n);
      if (d.visible) box = box.united(*d.bbox);
    }
    if (mine.empty()) continue;
    if (box.empty()) box = cr;
    box = box.intersected(Rect{0, 0, s.viewport_w, s.viewport_h});
    int child = build(id, std::move(mine), box, depth + 1);
    frags_[id].children.push_back(child);
  }
  return id;
}

const Fragment& Hierarchy::closest(int node) const {
  if (node < 0 || node >= static_cast<int>(closest_.size())) {
    throw NodeNotInFragment("node " + std::to_string(node) + " is not in the root fragment");
  }
  return frags_[closest_[node]];
}

std::vector<const Fragment*> Hierarchy::useful_fragments() const {
  std::vector<const Fragment*> out;
  for (const Fragment& f : frags_) {
    if (f.useful) out.push_back(&f);
  }
  return out;
}

std::vector<const Fragment*> Hierarchy::useful_descendants(const Fragment& f) const {
  std::vector<const Fragment*> out;
  std::vector<int> stack(f.children.rbegin(), f.children.rend());
  while (!stack.empty()) {
    const Fragment& c = frags_[stack.back()];
    stack.pop_back();
    if (c.useful) out.push_back(&c);
    for (auto it = c.children.rbegin(); it != c.children.rend(); ++it) stack.push_back(*it);
  }
  return out;
}

Json Hierarchy::to_json() const {
  std::function<Json(int)> rec = [&](int id) {
    const Fragment& f = frags_[id];
    Json j;
    j["fragId"] = f.frag_id;
    j["nodes"] = f.nodes;
    j["bbox"] = {f.bbox.x, f.bbox.y, f.bbox.w, f.bbox.h};
    j["useful"] = f.useful;
    Json ch = Json::array();
    for (int c : f.children) ch.push_back(rec(c));
    j["children"] = std::move(ch);
    return j;
  };
  return rec(0);
}

HierarchyPtr fragment(SnapshotPtr snap, const FragConfig& cfg) {
  return std::make_shared<const Hierarchy>(std::move(snap), cfg);
}

}  // namespace fragscope
