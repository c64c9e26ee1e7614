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

#include "fragscope/snapshot.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <unordered_map>

#include "fragscope/errors.hpp"
#include "fragscope/png_io.hpp"

namespace fragscope {

namespace {

std::atomic<std::uint64_t> next_uid{1};

std::uint32_t fnv1a(const std::string& s) {
  std::uint32_t h = 2166136261u;
  for (unsigned char c : s) {
    h ^= c;
    h *= 16777619u;
  }
  return h;
}

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

constexpr int kCellW = 8;
constexpr int kCellH = 12;
constexpr int kGlyphW = 6;
constexpr int kGlyphH = 10;
constexpr int kTextPad = 2;

bool hides_subtree(const DomNode& n) {
  if (n.attr("hidden")) return true;
  if (const std::string* st = n.attr("style")) {
    std::string s;
    for (char c : *st) {
      if (c != ' ') s.push_back(c);
    }
    if (s.find("display:none") != std::string::npos) return true;
    if (s.find("visibility:hidden") != std::string::npos) return true;
  }
  return n.bbox && n.bbox->empty();
}

void paint_text(Raster& r, const Rect& box, const std::string& text, Rgb ink) {
  Rect clip = box.intersected(Rect{0, 0, r.width, r.height});
  int x0 = box.x + kTextPad;
  int y0 = box.y + kTextPad;
  for (std::size_t i = 0; i < text.size(); ++i) {
    int cx = x0 + static_cast<int>(i) * kCellW;
    if (cx >= box.right() - kTextPad) break;
    unsigned char ch = static_cast<unsigned char>(text[i]);
    if (ch == ' ') continue;
    std::uint64_t bits = splitmix(0x51ed27u + ch);
    for (int gy = 0; gy < kGlyphH; ++gy) {
      for (int gx = 0; gx < kGlyphW; ++gx) {
        if (!((bits >> (gy * kGlyphW + gx)) & 1u)) continue;
        int px = cx + 1 + gx;
        int py = y0 + 1 + gy;
        if (px < clip.x || px >= clip.right() || py < clip.y || py >= clip.bottom()) continue;
        r.set(px, py, ink);
      }
    }
  }
}

}  // namespace

Rect Rect::united(const Rect& o) const {
  if (empty()) return o;
  if (o.empty()) return *this;
  int nx = std::min(x, o.x);
  int ny = std::min(y, o.y);
  return Rect{nx, ny, std::max(right(), o.right()) - nx, std::max(bottom(), o.bottom()) - ny};
}

Rect Rect::intersected(const Rect& o) const {
  int nx = std::max(x, o.x);
  int ny = std::max(y, o.y);
  int r = std::min(right(), o.right());
  int b = std::min(bottom(), o.bottom());
  if (r <= nx || b <= ny) return Rect{nx, ny, 0, 0};
  return Rect{nx, ny, r - nx, b - ny};
}

const std::string* DomNode::attr(const std::string& name) const {
  for (const auto& [k, v] : attrs) {
    if (k == name) return &v;
  }
  return nullptr;
}

void DomNode::set_attr(const std::string& name, const std::string& value) {
  for (auto& [k, v] : attrs) {
    if (k == name) {
      v = value;
      return;
    }
  }
  attrs.emplace_back(name, value);
}

Raster::Raster(int w, int h, Rgb bg) : width(w), height(h) {
  pixels.resize(static_cast<std::size_t>(w) * h * 3);
  for (std::size_t i = 0; i < pixels.size(); i += 3) {
    pixels[i] = bg.r;
    pixels[i + 1] = bg.g;
    pixels[i + 2] = bg.b;
  }
}

Rgb Raster::at(int x, int y) const {
  std::size_t i = (static_cast<std::size_t>(y) * width + x) * 3;
  return Rgb{pixels[i], pixels[i + 1], pixels[i + 2]};
}

void Raster::set(int x, int y, Rgb c) {
  std::size_t i = (static_cast<std::size_t>(y) * width + x) * 3;
  pixels[i] = c.r;
  pixels[i + 1] = c.g;
  pixels[i + 2] = c.b;
}

void Raster::fill_rect(const Rect& r, Rgb c) {
  Rect c2 = r.intersected(Rect{0, 0, width, height});
  for (int y = c2.y; y < c2.bottom(); ++y) {
    for (int x = c2.x; x < c2.right(); ++x) set(x, y, c);
  }
}

Raster Raster::crop(const Rect& r) const {
  Rect c = r.intersected(Rect{0, 0, width, height});
  Raster out(c.w, c.h);
  for (int y = 0; y < c.h; ++y) {
    const std::uint8_t* src = &pixels[(static_cast<std::size_t>(c.y + y) * width + c.x) * 3];
    std::copy(src, src + static_cast<std::size_t>(c.w) * 3,
              &out.pixels[static_cast<std::size_t>(y) * c.w * 3]);
  }
  return out;
}

Rgb default_fill(const std::string& tag) {
  // No entry lies entirely in the brightest or darkest histogram bin, so
  // neither a fill nor its ink collides with a white background.
  static const Rgb kPalette[] = {
      {70, 130, 180}, {205, 92, 92},  {60, 179, 113},  {218, 165, 32},
      {147, 112, 219}, {100, 149, 237}, {233, 150, 122}, {128, 128, 0},
  };
  return kPalette[fnv1a(tag) % 8];
}

Rgb ink_for(Rgb fill) {
  return Rgb{static_cast<std::uint8_t>(255 - fill.r), static_cast<std::uint8_t>(255 - fill.g),
             static_cast<std::uint8_t>(255 - fill.b)};
}

Rgb effective_fill(const DomNode& n) { return n.fill ? *n.fill : default_fill(n.tag); }

Raster rasterize(const std::vector<DomNode>& nodes, int root, int width, int height) {
  Raster r(width, height);
  if (nodes.empty()) return r;
  std::vector<int> stack{root};
  while (!stack.empty()) {
    int id = stack.back();
    stack.pop_back();
    const DomNode& n = nodes[id];
    if (!n.visible) continue;
    Rgb f = effective_fill(n);
    r.fill_rect(*n.bbox, f);
    if (n.text && !n.text->empty()) paint_text(r, *n.bbox, *n.text, ink_for(f));
    for (auto it = n.children.rbegin(); it != n.children.rend(); ++it) stack.push_back(*it);
  }
  return r;
}

bool Snapshot::is_ancestor(int anc, int n) const {
  for (int p = nodes[n].parent; p >= 0; p = nodes[p].parent) {
    if (p == anc) return true;
  }
  return false;
}

std::vector<int> Snapshot::preorder() const {
  std::vector<int> out;
  if (nodes.empty()) return out;
  std::vector<int> stack{root};
  while (!stack.empty()) {
    int id = stack.back();
    stack.pop_back();
    out.push_back(id);
    const auto& ch = nodes[id].children;
    for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(*it);
  }
  return out;
}

namespace {

std::string step_of(const Snapshot& s, int id) {
  const DomNode& n = s.node(id);
  int index = 1;
  if (n.parent >= 0) {
    for (int sib : s.node(n.parent).children) {
      if (sib == id) break;
      if (s.node(sib).tag == n.tag) ++index;
    }
  }
  return n.tag + "[" + std::to_string(index) + "]";
}

}  // namespace

std::string Snapshot::xpath(int id) const {
  std::vector<std::string> steps;
  for (int c = id; c >= 0; c = nodes[c].parent) steps.push_back(step_of(*this, c));
  std::string out;
  for (auto it = steps.rbegin(); it != steps.rend(); ++it) out += "/" + *it;
  return out;
}

std::string Snapshot::relative_xpath(int from, int id) const {
  if (from == id) return ".";
  std::vector<std::string> steps;
  int c = id;
  for (; c >= 0 && c != from; c = nodes[c].parent) steps.push_back(step_of(*this, c));
  if (c != from) return xpath(id);
  std::string out = ".";
  for (auto it = steps.rbegin(); it != steps.rend(); ++it) out += "/" + *it;
  return out;
}

std::optional<int> Snapshot::resolve_xpath(const std::string& xp) const {
  if (nodes.empty() || xp.empty() || xp[0] != '/') return std::nullopt;
  std::vector<std::pair<std::string, int>> steps;
  std::size_t pos = 1;
  while (pos <= xp.size()) {
    std::size_t next = xp.find('/', pos);
    std::string step = xp.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    std::size_t br = step.find('[');
    std::string tag = step.substr(0, br);
    int index = 1;
    if (br != std::string::npos) {
      try {
        index = std::stoi(step.substr(br + 1));
      } catch (...) {
        return std::nullopt;
      }
    }
    steps.emplace_back(tag, index);
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  if (steps.empty() || steps[0].first != nodes[root].tag || steps[0].second != 1) return std::nullopt;
  int cur = root;
  for (std::size_t i = 1; i < steps.size(); ++i) {
    int seen = 0;
    int found = -1;
    for (int c : nodes[cur].children) {
      if (nodes[c].tag == steps[i].first && ++seen == steps[i].second) {
        found = c;
        break;
      }
    }
    if (found < 0) return std::nullopt;
    cur = found;
  }
  return cur;
}

void Snapshot::finalize(const std::string& base_dir) {
  if (viewport_w <= 0 || viewport_h <= 0) throw InvariantError("viewport must be positive");
  if (nodes.empty()) throw InvariantError("snapshot has no nodes");
  std::unordered_map<int, std::size_t> index;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!index.emplace(nodes[i].id, i).second) {
      throw InvariantError("duplicate node id " + std::to_string(nodes[i].id));
    }
  }
  if (!index.count(root)) throw InvariantError("root id not found");
  std::vector<int> parent_of(nodes.size(), -1);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (int c : nodes[i].children) {
      auto it = index.find(c);
      if (it == index.end()) throw InvariantError("unknown child id " + std::to_string(c));
      if (parent_of[it->second] >= 0) {
        throw InvariantError("node " + std::to_string(c) + " has more than one parent");
      }
      parent_of[it->second] = static_cast<int>(i);
    }
    if (nodes[i].bbox && (nodes[i].bbox->w < 0 || nodes[i].bbox->h < 0)) {
      throw InvariantError("negative bbox on node " + std::to_string(nodes[i].id));
    }
  }
  std::size_t root_idx = index[root];
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (i != root_idx && parent_of[i] < 0) {
      throw InvariantError("node " + std::to_string(nodes[i].id) + " is a second root");
    }
  }
  if (parent_of[root_idx] >= 0) throw InvariantError("root has a parent");
  // Preorder renumbering; also detects cycles and unreachable nodes.
  std::vector<int> new_id(nodes.size(), -1);
  std::vector<std::size_t> order;
  std::vector<std::size_t> stack{root_idx};
  while (!stack.empty()) {
    std::size_t i = stack.back();
    stack.pop_back();
    if (new_id[i] >= 0) throw InvariantError("cycle in node tree");
    new_id[i] = static_cast<int>(order.size());
    order.push_back(i);
    const auto& ch = nodes[i].children;
    for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(index[*it]);
  }
  if (order.size() != nodes.size()) throw InvariantError("unreachable nodes (cycle)");
  std::vector<DomNode> renum(nodes.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    DomNode n = std::move(nodes[order[k]]);
    n.id = static_cast<int>(k);
    for (int& c : n.children) c = new_id[index[c]];
    n.parent = parent_of[order[k]] < 0 ? -1 : new_id[parent_of[order[k]]];
    renum[k] = std::move(n);
  }
  nodes = std::move(renum);
  root = 0;
  for (DomNode& n : nodes) {
    bool hidden_above = false;
    for (int p = n.parent; p >= 0; p = nodes[p].parent) {
      if (hides_subtree(nodes[p])) {
        hidden_above = true;
        break;
      }
    }
    n.visible = n.bbox && !n.bbox->empty() && !hidden_above && !hides_subtree(n);
  }
  if (screenshot) {
    std::filesystem::path p(*screenshot);
    if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
    raster_ = read_png(p.string());
  } else {
    raster_ = rasterize(nodes, root, viewport_w, viewport_h);
  }
  uid_ = next_uid.fetch_add(1);
}

DomNode node_from_json(const Json& jn) {
  DomNode n;
  n.id = jn.at("id").get<int>();
  n.tag = jn.at("tag").get<std::string>();
  std::transform(n.tag.begin(), n.tag.end(), n.tag.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (jn.contains("attrs")) {
    for (auto it = jn["attrs"].begin(); it != jn["attrs"].end(); ++it) {
      n.attrs.emplace_back(it.key(), it.value().get<std::string>());
    }
  }
  if (jn.contains("text") && !jn["text"].is_null()) n.text = jn["text"].get<std::string>();
  if (jn.contains("children")) n.children = jn["children"].get<std::vector<int>>();
  if (jn.contains("bbox") && !jn["bbox"].is_null()) {
    auto b = jn["bbox"].get<std::vector<int>>();
    if (b.size() != 4) throw ParseError("bbox needs 4 numbers");
    n.bbox = Rect{b[0], b[1], b[2], b[3]};
  }
  if (jn.contains("fill") && !jn["fill"].is_null()) {
    auto f = jn["fill"].get<std::vector<int>>();
    if (f.size() != 3) throw ParseError("fill needs 3 numbers");
    for (int c : f) {
      if (c < 0 || c > 255) throw ParseError("fill channel out of range");
    }
    n.fill = Rgb{static_cast<std::uint8_t>(f[0]), static_cast<std::uint8_t>(f[1]),
                 static_cast<std::uint8_t>(f[2])};
  }
  return n;
}

Snapshot snapshot_from_json(const Json& j, const std::string& base_dir) {
  Snapshot s;
  try {
    s.state_id = j.value("stateId", std::string());
    s.url = j.value("url", std::string());
    if (j.contains("viewport")) {
      const Json& v = j["viewport"];
      if (v.is_array()) {
        s.viewport_w = v.at(0).get<int>();
        s.viewport_h = v.at(1).get<int>();
      } else {
        s.viewport_w = v.value("w", kDefaultViewportW);
        s.viewport_h = v.value("h", kDefaultViewportH);
      }
    }
    for (const auto& jn : j.at("nodes")) s.nodes.push_back(node_from_json(jn));
    if (s.nodes.empty()) throw InvariantError("snapshot has no nodes");
    // Without an explicit root the first listed node is taken.
    s.root = j.contains("root") ? j["root"].get<int>() : s.nodes.front().id;
    if (j.contains("screenshot") && !j["screenshot"].is_null()) {
      s.screenshot = j["screenshot"].get<std::string>();
    }
  } catch (const Json::exception& e) {
    throw ParseError(std::string("malformed snapshot: ") + e.what());
  }
  s.finalize(base_dir);
  return s;
}

Json snapshot_to_json(const Snapshot& s) {
  Json j;
  j["stateId"] = s.state_id;
  j["url"] = s.url;
  j["viewport"] = {{"w", s.viewport_w}, {"h", s.viewport_h}};
  Json arr = Json::array();
  for (const DomNode& n : s.nodes) {
    Json jn;
    jn["id"] = n.id;
    jn["tag"] = n.tag;
    Json attrs = Json::object();
    for (const auto& [k, v] : n.attrs) attrs[k] = v;
    jn["attrs"] = attrs;
    if (n.text) jn["text"] = *n.text;
    if (n.bbox) jn["bbox"] = {n.bbox->x, n.bbox->y, n.bbox->w, n.bbox->h};
    if (n.fill) jn["fill"] = {n.fill->r, n.fill->g, n.fill->b};
    jn["children"] = n.children;
    arr.push_back(std::move(jn));
  }
  j["nodes"] = std::move(arr);
  j["root"] = s.root;
  if (s.screenshot) j["screenshot"] = *s.screenshot;
  return j;
}

Snapshot load_snapshot(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open snapshot file: " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception& e) {
    throw ParseError("invalid JSON in " + path + ": " + e.what());
  }
  return snapshot_from_json(j, std::filesystem::path(path).parent_path().string());
}

void save_snapshot(const Snapshot& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << snapshot_to_json(s).dump(1) << "\n";
}

std::vector<std::string> default_tag_set() { return {"a", "button", "input[type=submit]"}; }

std::vector<TagSelector> parse_tag_set(const std::vector<std::string>& specs) {
  if (specs.empty()) throw InvalidConfig("actionable tag set is empty");
  std::vector<TagSelector> out;
  for (const std::string& sp : specs) {
    TagSelector sel;
    std::size_t br = sp.find('[');
    sel.tag = sp.substr(0, br);
    if (br != std::string::npos) {
      std::size_t eq = sp.find('=', br);
      std::size_t end = sp.find(']', br);
      if (eq == std::string::npos || end == std::string::npos || eq > end) {
        throw InvalidConfig("bad actionable selector: " + sp);
      }
      sel.attr = sp.substr(br + 1, eq - br - 1);
      sel.value = sp.substr(eq + 1, end - eq - 1);
    }
    if (sel.tag.empty()) throw InvalidConfig("bad actionable selector: " + sp);
    out.push_back(sel);
  }
  return out;
}

std::vector<Actionable> extract_actionables(const Snapshot& s,
                                            const std::vector<std::string>& tag_set) {
  auto sels = parse_tag_set(tag_set);
  std::vector<Actionable> out;
  for (int id : s.preorder()) {
    const DomNode& n = s.node(id);
    if (!n.visible) continue;
    for (const TagSelector& sel : sels) {
      if (n.tag != sel.tag) continue;
      if (!sel.attr.empty()) {
        const std::string* v = n.attr(sel.attr);
        if (!v || *v != sel.value) continue;
      }
      Actionable a;
      a.node_id = id;
      const std::string* type = n.attr("type");
      a.kind = (type && *type == "submit") ? ActionKind::kSubmit : ActionKind::kClick;
      a.locator = s.xpath(id);
      a.label = n.text.value_or("");
      out.push_back(std::move(a));
      break;
    }
  }
  return out;
}

}  // namespace fragscope
