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

#include "fragscope/compare.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "fragscope/errors.hpp"

namespace fragscope {

std::string to_string(ClassLabel c) {
  switch (c) {
    case ClassLabel::kClone: return "Clone";
    case ClassLabel::kNd2: return "Nd2";
    case ClassLabel::kNd3: return "Nd3";
    case ClassLabel::kDistinct: return "Distinct";
  }
  return "?";
}

ClassLabel parse_class_label(const std::string& s) {
  std::string l;
  for (char c : s) l.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (l == "clone" || l == "cl") return ClassLabel::kClone;
  if (l == "nd2" || l == "nd-2" || l == "nd2-data") return ClassLabel::kNd2;
  if (l == "nd3" || l == "nd-3" || l == "nd3-struct") return ClassLabel::kNd3;
  if (l == "distinct" || l == "di") return ClassLabel::kDistinct;
  throw ParseError("unknown class label: " + s);
}

NodeDiff treediff(const Fragment& a, const Fragment& b) {
  EditMapping m = tree_edit_mapping(a.pruned, b.pruned);
  NodeDiff d;
  d.distance = m.distance;
  auto src = [](const LabeledTree& t, int i) { return t.source[i]; };
  for (int i : m.deleted) {
    if (src(a.pruned, i) >= 0) d.first.push_back(src(a.pruned, i));
  }
  for (int j : m.inserted) {
    if (src(b.pruned, j) >= 0) d.second.push_back(src(b.pruned, j));
  }
  for (auto [i, j] : m.renamed) {
    if (src(a.pruned, i) >= 0) d.first.push_back(src(a.pruned, i));
    if (src(b.pruned, j) >= 0) d.second.push_back(src(b.pruned, j));
  }
  std::sort(d.first.begin(), d.first.end());
  std::sort(d.second.begin(), d.second.end());
  // A renamed synthetic root still counts as a structural change.
  if (d.empty() && m.distance > 0) {
    d.first.push_back(a.anchor);
    d.second.push_back(b.anchor);
  }
  return d;
}

double imagediff(const Fragment& a, const Fragment& b) { return imagediff(a.hist, b.hist); }

std::size_t Classifier::KeyHash::operator()(const Key& k) const {
  std::uint64_t h = k.ua * 0x9E3779B97F4A7C15ull;
  h ^= static_cast<std::uint64_t>(k.fa) + 0x7F4A7C15ull + (h << 6) + (h >> 2);
  h ^= k.ub * 0xC2B2AE3D27D4EB4Full + (h << 6) + (h >> 2);
  h ^= static_cast<std::uint64_t>(k.fb) + 0x165667B1ull + (h << 6) + (h >> 2);
  return static_cast<std::size_t>(h);
}

namespace {

// Closest fragment of the node, clamped to the compared subtree.
const Fragment& closest_within(const Fragment& own, int node) {
  const Fragment& clo = own.owner->closest(node);
  for (const Fragment* f = &clo;; f = &own.owner->at(f->parent)) {
    if (f->frag_id == own.frag_id) return clo;
    if (f->is_root()) return own;
  }
}

bool before(const Fragment& a, const Fragment& b) {
  if (a.owner->uid() != b.owner->uid()) return a.owner->uid() < b.owner->uid();
  return a.frag_id < b.frag_id;
}

}  // namespace

ClassLabel Classifier::classify(const Fragment& a, const Fragment& b) {
  if (!a.owner || !b.owner) throw InvariantError("fragment without hierarchy");
  if (tracing_) trace_ = Json::array();
  return classify_rec(a, b, 0);
}

ClassLabel Classifier::classify_rec(const Fragment& a0, const Fragment& b0, int depth) {
  if (depth > cfg_.max_depth) {
    throw RecursionDepthExceeded("classification recursion exceeded depth " + std::to_string(cfg_.max_depth));
  }
  const bool swap = before(b0, a0);
  const Fragment& a = swap ? b0 : a0;
  const Fragment& b = swap ? a0 : b0;
  Key key{a.owner->uid(), a.frag_id, b.owner->uid(), b.frag_id};
  if (auto it = cache_.find(key); it != cache_.end()) {
    if (tracing_) {
      trace_.push_back({{"depth", depth},
                        {"first", {a.owner->snapshot().state_id, a.frag_id}},
                        {"second", {b.owner->snapshot().state_id, b.frag_id}},
                        {"cached", true},
                        {"result", to_string(it->second)}});
    }
    return it->second;
  }
  ++evaluations_;
  Json event;
  Json* ev = nullptr;
  std::size_t slot = 0;
  if (tracing_) {
    event = {{"depth", depth},
             {"first", {a.owner->snapshot().state_id, a.frag_id}},
             {"second", {b.owner->snapshot().state_id, b.frag_id}}};
    slot = trace_.size();
    trace_.push_back(event);
    ev = &event;
  }
  ClassLabel out;
  NodeDiff diff = treediff(a, b);
  if (ev) (*ev)["ndiff"] = diff.size();
  if (diff.empty()) {
    double v = imagediff(a, b);
    if (ev) (*ev)["visual"] = v;
    out = v <= cfg_.visual_epsilon ? ClassLabel::kClone : ClassLabel::kNd2;
  } else {
    out = map_child_fragments(diff, a, b, depth, ev);
  }
  if (ev) {
    event["result"] = to_string(out);
    trace_[slot] = std::move(event);
  }
  cache_.emplace(key, out);
  return out;
}

ClassLabel Classifier::map_child_fragments(const NodeDiff& diff, const Fragment& a, const Fragment& b,
                                           int depth, Json* event) {
  std::set<std::pair<int, int>> done;  // (side, closest fragment)
  Json mapping = Json::array();
  ClassLabel out = ClassLabel::kNd3;
  auto visit = [&](int node, int side) {
    const Fragment& own = side == 0 ? a : b;
    const Fragment& other = side == 0 ? b : a;
    const Fragment* clo = &closest_within(own, node);
    if (!done.insert({side, clo->frag_id}).second) return true;
    Json m;
    if (event) m = {{"node", node}, {"side", side + 1}, {"closest", clo->frag_id}};
    if (clo->is_root()) {
      if (event) {
        m["mappedTo"] = nullptr;
        mapping.push_back(std::move(m));
      }
      return false;
    }
    bool found = false;
    for (const Fragment* cand : other.owner->useful_descendants(other)) {
      if (classify_rec(*clo, *cand, depth + 1) != ClassLabel::kDistinct) {
        found = true;
        if (event) m["mappedTo"] = cand->frag_id;
        break;
      }
    }
    if (event) {
      if (!found) m["mappedTo"] = nullptr;
      mapping.push_back(std::move(m));
    }
    return found;
  };
  bool all = true;
  for (int n : diff.first) {
    if (!visit(n, 0)) {
      all = false;
      break;
    }
  }
  if (all) {
    for (int n : diff.second) {
      if (!visit(n, 1)) {
        all = false;
        break;
      }
    }
  }
  if (!all) out = ClassLabel::kDistinct;
  if (event) (*event)["mapping"] = std::move(mapping);
  return out;
}

void Classifier::visual_changes(const Fragment& a, const Fragment& b, std::vector<FragmentPair>& out) const {
  if (imagediff(a, b) <= cfg_.visual_epsilon) return;
  auto useful_children = [](const Fragment& f) {
    std::vector<const Fragment*> c;
    for (int id : f.children) {
      const Fragment& x = f.owner->at(id);
      if (x.useful) c.push_back(&x);
    }
    return c;
  };
  auto ca = useful_children(a);
  auto cb = useful_children(b);
  if (!ca.empty() && ca.size() == cb.size()) {
    bool any = false;
    for (std::size_t i = 0; i < ca.size(); ++i) {
      if (imagediff(*ca[i], *cb[i]) > cfg_.visual_epsilon) {
        visual_changes(*ca[i], *cb[i], out);
        any = true;
      }
    }
    if (any) return;
  }
  out.push_back({a.frag_id, b.frag_id});
}

Explanation Classifier::explain(const Fragment& a, const Fragment& b) {
  Explanation e;
  e.label = classify(a, b);
  if (e.label == ClassLabel::kClone) return e;
  if (e.label == ClassLabel::kNd2) {
    visual_changes(a, b, e.changed);
    return e;
  }
  NodeDiff diff = treediff(a, b);
  std::set<int> seen_a;
  std::set<int> seen_b;
  auto clamp = [](const Fragment& own, int node) { return closest_within(own, node).frag_id; };
  for (int n : diff.first) {
    int f = clamp(a, n);
    if (seen_a.insert(f).second) e.changed.push_back({f, -1});
  }
  for (int n : diff.second) {
    int f = clamp(b, n);
    if (seen_b.insert(f).second) e.changed.push_back({-1, f});
  }
  return e;
}

}  // namespace fragscope
