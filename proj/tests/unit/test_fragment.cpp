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

#include <filesystem>
#include <random>

#include "../support/oracles.hpp"
#include "fragscope/errors.hpp"
#include "fragscope/fragment.hpp"
#include "fragscope/histogram.hpp"
#include "fragscope/snapshot.hpp"

namespace fragscope {
namespace {

const std::string kSnaps = std::string(FIXTURE_DIR) + "/addressbook-mini/snapshots/";

SnapshotPtr fixture(const std::string& name) {
  return std::make_shared<const Snapshot>(load_snapshot(kSnaps + name + ".json"));
}

Snapshot from(const char* text) { return snapshot_from_json(Json::parse(text)); }

TEST(Snapshot, SingleNode) {
  Snapshot s = from(R"({"nodes":[{"id":0,"tag":"html"}]})");
  EXPECT_EQ(s.size(), 1u);
}

TEST(Snapshot, TwoRootsRejected) {
  EXPECT_THROW(from(R"({"root":0,"nodes":[{"id":0,"tag":"html"},{"id":1,"tag":"div"}]})"), InvariantError);
}

TEST(Snapshot, RoundTrip) {
  auto s = fixture("s5");
  Snapshot t = snapshot_from_json(snapshot_to_json(*s));
  EXPECT_EQ(snapshot_to_json(t), snapshot_to_json(*s));
  EXPECT_EQ(t.raster(), s->raster());
}

TEST(Snapshot, RasterIsDeterministic) {
  auto a = fixture("s1");
  auto b = fixture("s1");
  EXPECT_EQ(a->raster(), b->raster());
  EXPECT_NE(a->uid(), b->uid());
}

TEST(Snapshot, TextEditChangesPixelsInsideTheLeaf) {
  auto a = fixture("s3");
  Snapshot b = *a;
  int leaf = -1;
  for (const DomNode& n : b.nodes) {
    if (n.text && n.tag == "td") {
      leaf = n.id;
      break;
    }
  }
  ASSERT_GE(leaf, 0);
  b.nodes[leaf].text = "Zzzzzz Qqqqqq";
  b.finalize();
  Rect box = *b.node(leaf).bbox;
  int diff = 0, outside = 0;
  for (int y = 0; y < b.raster().height; ++y) {
    for (int x = 0; x < b.raster().width; ++x) {
      if (a->raster().at(x, y) == b.raster().at(x, y)) continue;
      ++diff;
      if (!box.contains(Rect{x, y, 1, 1})) ++outside;
    }
  }
  EXPECT_GT(diff, 0);
  EXPECT_EQ(outside, 0);
}

TEST(Actionables, VisibleOnly) {
  Snapshot s = from(R"({"viewport":[200,200],"nodes":[
    {"id":0,"tag":"html","bbox":[0,0,200,200],"children":[1]},
    {"id":1,"tag":"body","bbox":[0,0,200,200],"children":[2,3,4,5]},
    {"id":2,"tag":"a","bbox":[0,0,50,20],"text":"x"},
    {"id":3,"tag":"a","bbox":[0,30,50,20],"text":"y"},
    {"id":4,"tag":"a","bbox":[0,60,50,20],"text":"z"},
    {"id":5,"tag":"a","bbox":[0,90,0,0],"text":"hidden"}]})");
  EXPECT_EQ(extract_actionables(s, default_tag_set()).size(), 3u);
  EXPECT_THROW(extract_actionables(s, {}), InvalidConfig);
}

TEST(Actionables, AddressBookNavigation) {
  auto s = fixture("s1");
  std::vector<std::string> labels;
  for (const Actionable& a : extract_actionables(*s, default_tag_set())) labels.push_back(a.label);
  EXPECT_NE(std::find(labels.begin(), labels.end(), "New"), labels.end());
  EXPECT_NE(std::find(labels.begin(), labels.end(), "List"), labels.end());
}

TEST(Histogram, ParallelMatchesSerial) {
  auto s = fixture("s5");
  EXPECT_EQ(histogram(s->raster()), histogram_parallel(s->raster()));
}

TEST(Histogram, DisjointColorsAreMaximallyDistant) {
  Raster red(10, 10, {255, 0, 0}), blue(20, 5, {0, 0, 255});
  EXPECT_DOUBLE_EQ(imagediff(red, red), 0.0);
  EXPECT_DOUBLE_EQ(imagediff(red, blue), 1.0);
}

TEST(Fragmentation, SingleParagraphHasNoChildren) {
  Snapshot s = from(R"({"viewport":[300,300],"nodes":[
    {"id":0,"tag":"html","bbox":[0,0,300,300],"children":[1]},
    {"id":1,"tag":"body","bbox":[0,0,300,300],"children":[2]},
    {"id":2,"tag":"p","bbox":[10,10,200,40],"text":"hello"}]})");
  auto h = fragment(std::make_shared<const Snapshot>(s));
  EXPECT_TRUE(h->root().children.empty());
  EXPECT_TRUE(h->root().useful);
}

TEST(Fragmentation, GapSplitsStackedBoxes) {
  Snapshot s = from(R"({"viewport":[300,300],"nodes":[
    {"id":0,"tag":"html","bbox":[0,0,300,300],"children":[1]},
    {"id":1,"tag":"body","bbox":[0,0,300,300],"children":[2,5]},
    {"id":2,"tag":"div","bbox":[0,0,300,100],"fill":[200,0,0],"children":[3,4]},
    {"id":3,"tag":"p","bbox":[10,10,100,30],"text":"a"},
    {"id":4,"tag":"p","bbox":[10,50,100,30],"text":"b"},
    {"id":5,"tag":"div","bbox":[0,140,300,100],"fill":[0,0,200],"children":[6,7]},
    {"id":6,"tag":"p","bbox":[10,150,100,30],"text":"c"},
    {"id":7,"tag":"p","bbox":[10,190,100,30],"text":"d"}]})");
  FragConfig cfg;
  cfg.min_separator_px = 20;
  auto h = fragment(std::make_shared<const Snapshot>(s), cfg);
  EXPECT_EQ(h->root().children.size(), 2u);
}

TEST(Fragmentation, Usefulness) {
  FragConfig cfg;
  Fragment f;
  f.parent = 0;
  f.nodes = {0};
  f.bbox = {0, 0, 10, 10};
  EXPECT_FALSE(is_useful(f, cfg));
  f.nodes = {0, 1, 2, 3, 4};
  f.bbox = {0, 0, 100, 100};
  EXPECT_TRUE(is_useful(f, cfg));
  Fragment root;
  root.nodes = {0};
  EXPECT_TRUE(is_useful(root, cfg));
}

TEST(Fragmentation, TableFixtureShape) {
  auto h = fragment(fixture("s3"));
  const Fragment& root = h->root();
  EXPECT_GE(root.children.size(), 3u);
  int with_rows = 0;
  for (const Fragment* f : h->useful_fragments()) {
    if (f->is_root()) continue;
    bool has_tr = false;
    for (int n : f->nodes) has_tr |= h->snapshot().node(n).tag == "tr";
    if (has_tr && f->children.size() >= 2) ++with_rows;
  }
  EXPECT_GE(with_rows, 1);
}

TEST(Fragmentation, Deterministic) {
  auto s = fixture("s5");
  EXPECT_EQ(fragment(s)->to_json(), fragment(s)->to_json());
}

TEST(Fragmentation, ChildrenPartitionWithinParent) {
  for (const char* name : {"s1", "s2", "s3", "s5", "s6", "s7"}) {
    auto h = fragment(fixture(name));
    for (const Fragment& f : h->fragments()) {
      std::vector<int> seen;
      for (int c : f.children) {
        const Fragment& ch = h->at(c);
        EXPECT_EQ(ch.parent, f.frag_id);
        EXPECT_TRUE(std::includes(f.nodes.begin(), f.nodes.end(), ch.nodes.begin(), ch.nodes.end()));
        for (int n : ch.nodes) {
          EXPECT_EQ(std::find(seen.begin(), seen.end(), n), seen.end());
          seen.push_back(n);
        }
      }
    }
  }
}

TEST(Closest, RootNodeMapsToRoot) {
  auto h = fragment(fixture("s5"));
  EXPECT_EQ(h->closest(h->snapshot().root).frag_id, h->root().frag_id);
  EXPECT_THROW(h->closest(100000), NodeNotInFragment);
}

TEST(Closest, CellMapsToItsRow) {
  auto h = fragment(fixture("s5"));
  for (const DomNode& n : h->snapshot().nodes) {
    if (n.tag != "td") continue;
    const Fragment& f = h->closest(n.id);
    bool has_tr = false;
    for (int m : f.nodes) has_tr |= h->snapshot().node(m).tag == "tr";
    EXPECT_TRUE(has_tr);
    int trs = 0;
    for (int m : f.nodes) trs += h->snapshot().node(m).tag == "tr";
    EXPECT_EQ(trs, 1);
  }
}

TEST(Closest, MatchesLinearScanOnCorpus) {
  for (const auto& e : std::filesystem::directory_iterator(kSnaps)) {
    auto h = fragment(std::make_shared<const Snapshot>(load_snapshot(e.path().string())));
    for (std::size_t n = 0; n < h->snapshot().size(); ++n) {
      EXPECT_EQ(h->closest(static_cast<int>(n)).frag_id, oracle::closest_by_scan(*h, static_cast<int>(n)));
    }
  }
}

TEST(Pruning, IgnoresTextAndAttributes) {
  auto a = fixture("s3");
  Snapshot b = *a;
  for (DomNode& n : b.nodes) {
    if (n.text) n.text = *n.text + "!";
    n.set_attr("class", "x");
  }
  b.finalize();
  std::vector<int> all(a->size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  EXPECT_EQ(prune_dom(*a, all).canonical(), prune_dom(b, all).canonical());
}

TEST(Pruning, ExtraRowChangesTree) {
  auto a = fragment(fixture("s3"));
  auto b = fragment(fixture("s5"));
  EXPECT_NE(a->root().pruned.canonical(), b->root().pruned.canonical());
}

}  // namespace
}  // namespace fragscope
