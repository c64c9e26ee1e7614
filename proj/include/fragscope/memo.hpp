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

#ifndef FRAGSCOPE_MEMO_HPP_
#define FRAGSCOPE_MEMO_HPP_

#include <map>
#include <utility>
#include <vector>

#include "fragscope/compare.hpp"

namespace fragscope {

struct FragRef {
  HierarchyPtr page;
  int frag_id = 0;

  const Fragment& get() const { return page->at(frag_id); }
  std::pair<std::uint64_t, int> key() const { return {page->uid(), frag_id}; }
};

struct MemoEntry {
  FragRef rep;
  std::vector<std::pair<FragRef, ClassLabel>> duplicates;
  bool fluid = false;
};

struct RegistrationReport {
  int new_uniques = 0;
  int new_duplicates = 0;
  int newly_fluid = 0;
  int skipped = 0;  // fragments of an already registered page
};

// Unique-fragment map across the model; the source of data-fluid flags.
class FragmentMemo {
 public:
  RegistrationReport register_state(const HierarchyPtr& page, Classifier& clf);

  bool is_registered(const Fragment& f) const;
  bool is_data_fluid(const Fragment& f) const;
  // Registered fragments answer directly; others are matched against the
  // uniques like a registration would, without mutating the memo.
  bool resolve_fluid(const Fragment& f, Classifier& clf) const;

  const std::vector<MemoEntry>& entries() const { return entries_; }
  std::size_t unique_count() const { return entries_.size(); }
  std::size_t duplicate_count() const;
  std::size_t fluid_count() const;

  // State ids are taken from the snapshots of the registered pages.
  Json to_json() const;
  // Rebuilds the memo from its serialised form over pages keyed by state id.
  static FragmentMemo from_json(const Json& j, const std::map<std::string, HierarchyPtr>& pages);

 private:
  int match(const Fragment& f, Classifier& clf, ClassLabel* rel) const;

  std::vector<MemoEntry> entries_;
  std::map<std::pair<std::uint64_t, int>, int> group_of_;
};

}  // namespace fragscope

#endif  // FRAGSCOPE_MEMO_HPP_
