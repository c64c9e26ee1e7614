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

#include "fragscope/memo.hpp"

#include "fragscope/errors.hpp"

namespace fragscope {

int FragmentMemo::match(const Fragment& f, Classifier& clf, ClassLabel* rel) const {
  int nd2 = -1;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    ClassLabel c = clf.classify(entries_[i].rep.get(), f);
    if (c == ClassLabel::kClone) {
      *rel = c;
      return static_cast<int>(i);
    }
    if (c == ClassLabel::kNd2 && nd2 < 0) nd2 = static_cast<int>(i);
  }
  *rel = ClassLabel::kNd2;
  return nd2;
}

RegistrationReport FragmentMemo::register_state(const HierarchyPtr& page, Classifier& clf) {
  RegistrationReport r;
  for (const Fragment* f : page->useful_fragments()) {
    FragRef ref{page, f->frag_id};
    if (group_of_.count(ref.key())) {
      ++r.skipped;
      continue;
    }
    ClassLabel rel;
    int g = match(*f, clf, &rel);
    if (g < 0) {
      entries_.push_back(MemoEntry{ref, {}, false});
      group_of_[ref.key()] = static_cast<int>(entries_.size()) - 1;
      ++r.new_uniques;
      continue;
    }
    MemoEntry& e = entries_[g];
    e.duplicates.emplace_back(ref, rel);
    group_of_[ref.key()] = g;
    ++r.new_duplicates;
    if (rel == ClassLabel::kNd2 && !e.fluid) {
      e.fluid = true;
      ++r.newly_fluid;
    }
  }
  return r;
}

bool FragmentMemo::is_registered(const Fragment& f) const {
  return group_of_.count({f.owner->uid(), f.frag_id}) > 0;
}

bool FragmentMemo::is_data_fluid(const Fragment& f) const {
  auto it = group_of_.find({f.owner->uid(), f.frag_id});
  if (it == group_of_.end()) {
    throw UnregisteredFragment("fragment " + std::to_string(f.frag_id) + " of state '" +
                               f.owner->snapshot().state_id + "' is not registered");
  }
  return entries_[it->second].fluid;
}

bool FragmentMemo::resolve_fluid(const Fragment& f, Classifier& clf) const {
  if (is_registered(f)) return is_data_fluid(f);
  ClassLabel rel;
  int g = match(f, clf, &rel);
  return g >= 0 && entries_[g].fluid;
}

std::size_t FragmentMemo::duplicate_count() const {
  std::size_t n = 0;
  for (const MemoEntry& e : entries_) n += e.duplicates.size();
  return n;
}

std::size_t FragmentMemo::fluid_count() const {
  std::size_t n = 0;
  for (const MemoEntry& e : entries_) n += e.fluid ? 1 : 0;
  return n;
}

Json FragmentMemo::to_json() const {
  Json out = Json::array();
  for (const MemoEntry& e : entries_) {
    Json d = Json::array();
    for (const auto& [ref, rel] : e.duplicates) {
      d.push_back({ref.page->snapshot().state_id, ref.frag_id, to_string(rel)});
    }
    out.push_back({{"rep", {e.rep.page->snapshot().state_id, e.rep.frag_id}},
                   {"fluid", e.fluid},
                   {"duplicates", std::move(d)}});
  }
  return out;
}

FragmentMemo FragmentMemo::from_json(const Json& j, const std::map<std::string, HierarchyPtr>& pages) {
  FragmentMemo m;
  auto ref_of = [&](const Json& state, const Json& frag) {
    auto it = pages.find(state.get<std::string>());
    if (it == pages.end()) throw ParseError("memo refers to unknown state " + state.dump());
    int id = frag.get<int>();
    if (id < 0 || id >= static_cast<int>(it->second->fragments().size())) {
      throw ParseError("memo refers to unknown fragment " + std::to_string(id));
    }
    return FragRef{it->second, id};
  };
  try {
    for (const Json& e : j) {
      MemoEntry me{ref_of(e.at("rep").at(0), e.at("rep").at(1)), {}, e.at("fluid").get<bool>()};
      int g = static_cast<int>(m.entries_.size());
      m.group_of_[me.rep.key()] = g;
      for (const Json& d : e.at("duplicates")) {
        FragRef r = ref_of(d.at(0), d.at(1));
        m.group_of_[r.key()] = g;
        me.duplicates.emplace_back(r, parse_class_label(d.at(2).get<std::string>()));
      }
      m.entries_.push_back(std::move(me));
    }
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("malformed memo: ") + ex.what());
  }
  return m;
}

}  // namespace fragscope
