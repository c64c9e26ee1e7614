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

#include <gtest/gtest.h>

#include "fragscope/crawl.hpp"
#include "fragscope/errors.hpp"
#include "fragscope/mutation.hpp"

namespace fragscope {
namespace {

const std::string kDir = std::string(FIXTURE_DIR) + "/addressbook-mini/";

Snapshot parse(const char* text) { return snapshot_from_json(Json::parse(text)); }

TEST(Mutate, AttributeAppendsSuffix) {
  Snapshot s = parse(R"({"viewport":[100,100],"nodes":[
    {"id":0,"tag":"html","bbox":[0,0,100,100],"children":[1]},
    {"id":1,"tag":"div","bbox":[0,0,50,50],"attrs":{"id":"a"}}]})");
  auto [m, info] = mutate(s, MutationOp::kAttribute, 3);
  EXPECT_EQ(*m.node(1).attr("id"), "aMut");
  EXPECT_FALSE(info.visible);
}

TEST(Mutate, TagMovesToNeighbouringHeading) {
  Snapshot s = parse(R"({"viewport":[100,100],"nodes":[
    {"id":0,"tag":"html","bbox":[0,0,100,100],"children":[1]},
    {"id":1,"tag":"h1","bbox":[0,0,50,20],"text":"xyz"}]})");
  auto [m, info] = mutate(s, MutationOp::kTag, 3);
  EXPECT_EQ(m.node(1).tag, "h2");
  EXPECT_EQ(*m.node(1).text, "xyz");
  EXPECT_EQ(similar_tag("h6"), "h1");
  EXPECT_EQ(similar_tag("span"), "p");
  EXPECT_EQ(similar_tag("p"), "span");
}

TEST(Mutate, SubtreeDropsDescendants) {
  Snapshot s = parse(R"({"viewport":[100,100],"nodes":[
    {"id":0,"tag":"html","bbox":[0,0,100,100],"children":[1]},
    {"id":1,"tag":"table","bbox":[0,0,100,40],"children":[2]},
    {"id":2,"tag":"tr","bbox":[0,0,100,20],"fill":[10,200,10],"children":[3]},
    {"id":3,"tag":"td","bbox":[0,0,50,20],"fill":[200,10,10],"text":"xyz"}]})");
  Snapshot only_tr = s;
  only_tr.nodes[1].tag = "div";
  only_tr.finalize();
  auto [m, info] = mutate(only_tr, MutationOp::kSubtree, 3);
  EXPECT_EQ(m.size(), 3u);
  EXPECT_EQ(m.node(2).tag, "tr");
  EXPECT_TRUE(m.node(2).children.empty());
  EXPECT_TRUE(info.visible);
}

TEST(Mutate, NothingEligible) {
  Snapshot s = parse(R"({"nodes":[{"id":0,"tag":"html"}]})");
  EXPECT_THROW(mutate(s, MutationOp::kAttribute, 1), NoEligibleNode);
  EXPECT_THROW(mutate(s, MutationOp::kNone, 1), NoEligibleNode);
}

TEST(Mutate, VisibilityIsExactPixelDifference) {
  Snapshot s = load_snapshot(kDir + "snapshots/s5.json");
  for (MutationOp op : {MutationOp::kAttribute, MutationOp::kTag, MutationOp::kSubtree, MutationOp::kText}) {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
      auto [m, info] = mutate(s, op, seed);
      EXPECT_EQ(info.visible, !(m.raster() == s.raster()));
      EXPECT_FALSE(m.screenshot.has_value());
    }
  }
}

TEST(Mutate, SeedDeterminesMutant) {
  Snapshot s = load_snapshot(kDir + "snapshots/s5.json");
  auto a = mutate(s, MutationOp::kText, 42);
  auto b = mutate(s, MutationOp::kText, 42);
  EXPECT_EQ(snapshot_to_json(a.first), snapshot_to_json(b.first));
  EXPECT_EQ(a.second.target, b.second.target);
}

struct Experiment {
  SimApp app = load_app(kDir + "app.json");
  AppModel model = crawl(app, CrawlConfig{});
  std::vector<SnapshotPtr> trace = record_trace(model, app);
  std::vector<SnapshotPtr> none = record_trace(model, app, 77);
};

const Experiment& ex() {
  static const Experiment e;
  return e;
}

MutationConfig small() {
  MutationConfig cfg;
  cfg.mutants = 40;
  cfg.seed = 5;
  cfg.structural = {SafKind::kStructural, 0.001, 0.05};
  cfg.visual = {SafKind::kVisual, 0.0001, 0.01};
  return cfg;
}

TEST(Experiment, TraceAlignsWithModel) {
  EXPECT_EQ(ex().trace.size(), ex().model.states.size());
  AppModel broken = ex().model;
  // Drop the path that reaches the last state.
  broken.paths = {{broken.paths.back()}};
  EXPECT_THROW(record_trace(broken, ex().app), MisalignedTrace);
}

TEST(Experiment, ParallelMatchesSerial) {
  MutationReport par = run_mutation_experiment(ex().model, ex().trace, ex().none, small(), true);
  MutationReport ser = run_mutation_experiment(ex().model, ex().trace, ex().none, small(), false);
  EXPECT_EQ(par.to_json(), ser.to_json());
}

TEST(Experiment, FragmentOraclesDetectVisibleMutants) {
  MutationReport r = run_mutation_experiment(ex().model, ex().trace, ex().none, small(), true);
  for (OracleKind k : {OracleKind::kFragmentNoMem, OracleKind::kFragmentWithMem}) {
    const OracleScore& s = r.scores[static_cast<int>(k)];
    EXPECT_GT(s.visible, 0);
    EXPECT_EQ(s.detected, s.visible);
    EXPECT_DOUBLE_EQ(s.robustness(EquivalentKind::kAttribute), 1.0);
  }
  EXPECT_GE(r.scores[1].robustness(), r.scores[0].robustness());
  EXPECT_GT(r.scores[1].robustness(EquivalentKind::kNone), r.scores[0].robustness(EquivalentKind::kNone));
}

TEST(Experiment, CategoriesCycle) {
  MutationReport r = run_mutation_experiment(ex().model, ex().trace, ex().none, small(), true);
  int none = 0;
  for (const MutantRecord& m : r.mutants) {
    none += m.mutation.op == MutationOp::kNone;
    if (m.mutation.op == MutationOp::kNone) EXPECT_EQ(m.kind(), EquivalentKind::kNone);
    if (m.mutation.op == MutationOp::kAttribute) EXPECT_EQ(m.kind(), EquivalentKind::kAttribute);
  }
  EXPECT_EQ(none, 8);
  EXPECT_FALSE(r.to_csv().empty());
}

}  // namespace
}  // namespace fragscope
