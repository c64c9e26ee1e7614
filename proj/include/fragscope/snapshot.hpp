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

#ifndef FRAGSCOPE_SNAPSHOT_HPP_
#define FRAGSCOPE_SNAPSHOT_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace fragscope {

using Json = nlohmann::ordered_json;

struct Rect {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  int right() const { return x + w; }
  int bottom() const { return y + h; }
  long long area() const { return static_cast<long long>(w) * h; }
  bool empty() const { return w <= 0 || h <= 0; }
  bool contains(const Rect& o) const {
    return o.x >= x && o.y >= y && o.right() <= right() && o.bottom() <= bottom();
  }
  // Center in doubled coordinates to stay integral.
  bool contains_center_of(const Rect& o) const {
    int cx2 = 2 * o.x + o.w;
    int cy2 = 2 * o.y + o.h;
    return cx2 >= 2 * x && cx2 < 2 * right() && cy2 >= 2 * y && cy2 < 2 * bottom();
  }
  Rect united(const Rect& o) const;
  Rect intersected(const Rect& o) const;
  bool operator==(const Rect&) const = default;
};

struct Rgb {
  std::uint8_t r = 255;
  std::uint8_t g = 255;
  std::uint8_t b = 255;
  bool operator==(const Rgb&) const = default;
};

struct DomNode {
  int id = 0;
  std::string tag;
  std::vector<std::pair<std::string, std::string>> attrs;
  std::optional<std::string> text;
  std::vector<int> children;
  int parent = -1;
  std::optional<Rect> bbox;
  std::optional<Rgb> fill;
  bool visible = false;

  const std::string* attr(const std::string& name) const;
  void set_attr(const std::string& name, const std::string& value);
};

struct Raster {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // row-major RGB

  Raster() = default;
  Raster(int w, int h, Rgb bg = {});
  Rgb at(int x, int y) const;
  void set(int x, int y, Rgb c);
  void fill_rect(const Rect& r, Rgb c);
  Raster crop(const Rect& r) const;
  bool operator==(const Raster&) const = default;
};

inline constexpr int kDefaultViewportW = 1024;
inline constexpr int kDefaultViewportH = 768;

class Snapshot {
 public:
  std::string state_id;
  std::string url;
  int viewport_w = kDefaultViewportW;
  int viewport_h = kDefaultViewportH;
  std::vector<DomNode> nodes;  // index == id, preorder
  int root = 0;
  std::optional<std::string> screenshot;

  // Validates, renumbers in preorder, computes visibility and the raster,
  // and assigns a fresh uid. Must be called after any structural edit.
  void finalize(const std::string& base_dir = "");

  std::uint64_t uid() const { return uid_; }
  const Raster& raster() const { return raster_; }
  const DomNode& node(int id) const { return nodes.at(id); }
  std::size_t size() const { return nodes.size(); }
  bool is_ancestor(int anc, int n) const;
  std::string xpath(int id) const;
  std::string relative_xpath(int from, int id) const;
  std::optional<int> resolve_xpath(const std::string& xp) const;
  std::vector<int> preorder() const;

 private:
  std::uint64_t uid_ = 0;
  Raster raster_;
};

using SnapshotPtr = std::shared_ptr<const Snapshot>;

// Throws ParseError or a json exception on malformed input.
DomNode node_from_json(const Json& j);
Snapshot snapshot_from_json(const Json& j, const std::string& base_dir = "");
Json snapshot_to_json(const Snapshot& s);
Snapshot load_snapshot(const std::string& path);
void save_snapshot(const Snapshot& s, const std::string& path);

Raster rasterize(const std::vector<DomNode>& nodes, int root, int width, int height);
Rgb default_fill(const std::string& tag);
Rgb ink_for(Rgb fill);
Rgb effective_fill(const DomNode& n);

enum class ActionKind { kClick, kSubmit };

struct Actionable {
  int node_id = 0;
  ActionKind kind = ActionKind::kClick;
  std::string locator;
  std::string label;  // visible text, for reports
};

struct TagSelector {
  std::string tag;
  std::string attr;   // empty when unconstrained
  std::string value;
};

std::vector<TagSelector> parse_tag_set(const std::vector<std::string>& specs);
std::vector<std::string> default_tag_set();
std::vector<Actionable> extract_actionables(const Snapshot& s,
                                            const std::vector<std::string>& tag_set);

}  // namespace fragscope

#endif  // FRAGSCOPE_SNAPSHOT_HPP_
