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

#include "fragscope/app.hpp"

#include <algorithm>
#include <cstdlib>
#include <cstdio>
#include <fstream>

#include "fragscope/errors.hpp"
#include "fragscope/fragment.hpp"
#include "fragscope/histogram.hpp"
#include "fragscope/tree.hpp"

namespace fragscope {

namespace {

std::vector<DomNode> nodes_from_json(const Json& arr) {
  std::vector<DomNode> out;
  for (const Json& jn : arr) out.push_back(node_from_json(jn));
  return out;
}

Effect effect_from_json(const Json& j) {
  Effect e;
  if (j.contains("goto")) {
    e.kind = EffectKind::kGoto;
    e.target = j["goto"].get<std::string>();
  } else if (j.contains("addRow")) {
    e.kind = EffectKind::kAddRow;
  } else if (j.contains("mutateData")) {
    e.kind = EffectKind::kMutateData;
    e.target = j["mutateData"].get<std::string>();
  } else if (j.contains("noop")) {
    e.kind = EffectKind::kNoop;
  } else {
    throw ParseError("unknown effect: " + j.dump());
  }
  return e;
}

std::string substitute(std::string s, const Entry* e, int index, int count) {
  auto rep = [&](const std::string& key, const std::string& val) {
    for (std::size_t p = s.find(key); p != std::string::npos; p = s.find(key, p + val.size())) {
      s.replace(p, key.size(), val);
    }
  };
  if (e) {
    rep("{first}", e->first);
    rep("{last}", e->last);
    rep("{phone}", e->phone);
    rep("{index}", std::to_string(index + 1));
  }
  rep("{count}", std::to_string(count));
  return s;
}

}  // namespace

SimApp app_from_json(const Json& j) {
  SimApp app;
  try {
    app.name = j.value("name", std::string("app"));
    app.base_url = j.value("baseUrl", std::string("http://app.local/"));
    app.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("viewport")) {
      app.viewport_w = j["viewport"].value("w", kDefaultViewportW);
      app.viewport_h = j["viewport"].value("h", kDefaultViewportH);
    }
    app.start = j.at("start").get<std::string>();
    for (const Json& e : j.value("entries", Json::array())) {
      app.entries.push_back({e.at("first").get<std::string>(), e.at("last").get<std::string>(),
                             e.at("phone").get<std::string>()});
    }
    Json gens = j.value("generators", Json::object());
    for (auto it = gens.begin(); it != gens.end(); ++it) {
      Generator g;
      g.first = it.value().at("first").get<std::vector<std::string>>();
      g.last = it.value().at("last").get<std::vector<std::string>>();
      g.phone_prefix = it.value().value("phonePrefix", std::string("555-"));
      if (g.first.empty() || g.last.empty()) throw ParseError("generator " + it.key() + " has no names");
      app.generators[it.key()] = std::move(g);
    }
    Json rts = j.value("rowTemplates", Json::object());
    for (auto it = rts.begin(); it != rts.end(); ++it) {
      app.row_templates[it.key()] = {nodes_from_json(it.value().at("nodes")), it.value().at("root").get<int>()};
    }
    for (auto it = j.at("pages").begin(); it != j.at("pages").end(); ++it) {
      PageTemplate p;
      p.nodes = nodes_from_json(it.value().at("nodes"));
      p.root = it.value().at("root").get<int>();
      if (it.value().contains("rows")) {
        const Json& r = it.value()["rows"];
        RowBlock b;
        b.parent = r.at("parent").get<int>();
        b.row_template = r.at("template").get<std::string>();
        b.origin_x = r.at("origin").at(0).get<int>();
        b.origin_y = r.at("origin").at(1).get<int>();
        b.pitch = r.at("pitch").get<int>();
        b.grow = r.value("grow", true);
        if (!app.row_templates.count(b.row_template)) {
          throw ParseError("unknown row template " + b.row_template);
        }
        p.rows = b;
      }
      app.pages[it.key()] = std::move(p);
    }
    for (const Json& t : j.value("transitions", Json::array())) {
      app.transitions[{t.at("from").get<std::string>(), t.at("locator").get<std::string>()}] =
          effect_from_json(t.at("effect"));
    }
  } catch (const Json::exception& e) {
    throw ParseError(std::string("malformed app definition: ") + e.what());
  }
  app.validate();
  return app;
}

SimApp load_app(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open app file: " + path);
  try {
    return app_from_json(Json::parse(in));
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("malformed app definition: ") + e.what());
  }
}

void SimApp::validate() const {
  if (!pages.count(start)) throw InvalidConfig("start page '" + start + "' is not defined");
  std::map<std::string, Snapshot> rendered;
  for (const auto& [name, _] : pages) rendered.emplace(name, render_page(*this, name, entries));
  for (const auto& [key, eff] : transitions) {
    auto it = rendered.find(key.first);
    if (it == rendered.end()) throw InvalidConfig("transition from unknown page '" + key.first + "'");
    if (!it->second.resolve_xpath(key.second)) {
      throw InvalidConfig("transition locator " + key.second + " does not resolve in '" + key.first + "'");
    }
    if (eff.kind == EffectKind::kGoto && !pages.count(eff.target)) {
      throw InvalidConfig("transition to unknown page '" + eff.target + "'");
    }
    if (eff.kind == EffectKind::kMutateData && !generators.count(eff.target)) {
      throw InvalidConfig("unknown generator '" + eff.target + "'");
    }
  }
}

Snapshot render_page(const SimApp& app, const std::string& page, const std::vector<Entry>& entries) {
  auto pit = app.pages.find(page);
  if (pit == app.pages.end()) throw InvalidConfig("unknown page '" + page + "'");
  const PageTemplate& tpl = pit->second;
  const int count = static_cast<int>(entries.size());
  Snapshot s;
  s.state_id = page;
  s.url = app.base_url + "#/" + page;
  s.viewport_w = app.viewport_w;
  s.viewport_h = app.viewport_h;
  s.nodes = tpl.nodes;
  s.root = tpl.root;
  int next_id = 0;
  for (DomNode& n : s.nodes) {
    next_id = std::max(next_id, n.id + 1);
    if (n.text) n.text = substitute(*n.text, nullptr, 0, count);
  }
  if (tpl.rows) {
    const RowBlock& rb = *tpl.rows;
    const RowTemplate& rt = app.row_templates.at(rb.row_template);
    auto parent = std::find_if(s.nodes.begin(), s.nodes.end(), [&](const DomNode& n) { return n.id == rb.parent; });
    if (parent == s.nodes.end()) throw InvalidConfig("row parent missing in page '" + page + "'");
    const int parent_index = static_cast<int>(parent - s.nodes.begin());
    if (rb.grow && s.nodes[parent_index].bbox) s.nodes[parent_index].bbox->h = rb.pitch * count;
    for (int i = 0; i < count; ++i) {
      std::map<int, int> remap;
      for (const DomNode& n : rt.nodes) remap[n.id] = next_id++;
      for (const DomNode& n : rt.nodes) {
        DomNode c = n;
        c.id = remap.at(n.id);
        for (int& ch : c.children) ch = remap.at(ch);
        if (c.bbox) {
          c.bbox->x += rb.origin_x;
          c.bbox->y += rb.origin_y + i * rb.pitch;
        }
        if (c.text) c.text = substitute(*c.text, &entries[i], i, count);
        s.nodes.push_back(std::move(c));
      }
      s.nodes[parent_index].children.push_back(remap.at(rt.root));
    }
  }
  s.finalize();
  return s;
}

Session::Session(const SimApp& app, std::optional<std::uint64_t> data_seed)
    : app_(app), data_seed_(data_seed), rng_(app.seed ^ 0xD1B54A32D192ED03ull) {}

Entry Session::draw(const Generator& g) {
  auto pick = [&](const std::vector<std::string>& v) { return v[rng_() % v.size()]; };
  Entry e;
  e.first = pick(g.first);
  e.last = pick(g.last);
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04u", static_cast<unsigned>(rng_() % 10000));
  e.phone = g.phone_prefix + buf;
  return e;
}

std::vector<Entry> Session::initial_entries() const {
  if (!data_seed_ || app_.generators.empty()) return app_.entries;
  std::mt19937_64 rng(*data_seed_);
  const Generator& g = app_.generators.begin()->second;
  std::vector<Entry> out;
  for (std::size_t i = 0; i < app_.entries.size(); ++i) {
    Entry e;
    e.first = g.first[rng() % g.first.size()];
    e.last = g.last[rng() % g.last.size()];
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04u", static_cast<unsigned>(rng() % 10000));
    e.phone = g.phone_prefix + buf;
    out.push_back(std::move(e));
  }
  // Keep declared duplicates duplicated.
  for (std::size_t i = 1; i < app_.entries.size(); ++i) {
    if (app_.entries[i] == app_.entries[i - 1]) out[i] = out[i - 1];
  }
  return out;
}

SnapshotPtr Session::render() {
  current_ = std::make_shared<const Snapshot>(render_page(app_, page_, entries_));
  return current_;
}

SnapshotPtr Session::load_url() {
  page_ = app_.start;
  entries_ = initial_entries();
  ++loads_;
  return render();
}

SnapshotPtr Session::fire(const Actionable& a) { return fire(a.locator); }

SnapshotPtr Session::fire(const std::string& locator) {
  if (!current_) throw StaleActionable("no page loaded");
  if (!current_->resolve_xpath(locator)) {
    throw StaleActionable("locator " + locator + " does not resolve on page '" + page_ + "'");
  }
  ++actions_;
  auto it = app_.transitions.find({page_, locator});
  if (it != app_.transitions.end()) {
    const Effect& e = it->second;
    switch (e.kind) {
      case EffectKind::kGoto:
        page_ = e.target;
        break;
      case EffectKind::kAddRow:
        if (!entries_.empty()) entries_.push_back(entries_.back());
        break;
      case EffectKind::kMutateData: {
        const Generator& g = app_.generators.at(e.target);
        for (Entry& en : entries_) en = draw(g);
        break;
      }
      case EffectKind::kNoop:
        break;
    }
  }
  return render();
}

std::string to_string(SafKind k) { return k == SafKind::kStructural ? "structural" : "visual"; }

std::string to_string(Gamma g) {
  switch (g) {
    case Gamma::kClone: return "Clone";
    case Gamma::kNd: return "Nd";
    case Gamma::kDistinct: return "Distinct";
  }
  return "?";
}

SafKind parse_saf_kind(const std::string& s) {
  if (s == "structural") return SafKind::kStructural;
  if (s == "visual") return SafKind::kVisual;
  throw InvalidConfig("unknown whole-page kind: " + s);
}

void WholePageSAF::validate() const {
  if (!(t_c >= 0.0 && t_c <= t_n)) throw InvalidConfig("thresholds must satisfy 0 <= t_c <= t_n");
}

PageSignature page_signature(const Snapshot& s) {
  std::vector<int> all(s.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  PageSignature sig{prune_dom(s, all), {}, histogram(s.raster())};
  sig.canonical = sig.tree.canonical();
  return sig;
}

double whole_page_distance(SafKind kind, const PageSignature& a, const PageSignature& b) {
  if (kind == SafKind::kVisual) return imagediff(a.hist, b.hist);
  int n = std::max(a.tree.size(), b.tree.size());
  if (n == 0 || a.canonical == b.canonical) return 0.0;
  return static_cast<double>(tree_edit_distance(a.tree, b.tree)) / n;
}

double whole_page_distance(SafKind kind, const Snapshot& a, const Snapshot& b) {
  if (kind == SafKind::kVisual) return imagediff(histogram(a.raster()), histogram(b.raster()));
  return whole_page_distance(kind, page_signature(a), page_signature(b));
}

Gamma gamma_of(const WholePageSAF& saf, double d) {
  if (d < saf.t_c) return Gamma::kClone;
  if (d > saf.t_n) return Gamma::kDistinct;
  return Gamma::kNd;
}

Gamma gamma_classify(const WholePageSAF& saf, const Snapshot& a, const Snapshot& b) {
  saf.validate();
  return gamma_of(saf, whole_page_distance(saf.kind, a, b));
}

Gamma gamma_classify(const WholePageSAF& saf, const PageSignature& a, const PageSignature& b) {
  saf.validate();
  if (saf.kind == SafKind::kStructural) {
    int n = std::max(a.tree.size(), b.tree.size());
    if (n > 0) {
      double bound = static_cast<double>(std::abs(a.tree.size() - b.tree.size())) / n;
      if (bound > saf.t_n) return Gamma::kDistinct;
    }
    // Non-isomorphic trees are at distance >= 1/n.
    if (a.canonical != b.canonical && n > 0 && 1.0 / n > saf.t_n) return Gamma::kDistinct;
  }
  return gamma_of(saf, whole_page_distance(saf.kind, a, b));
}

std::vector<double> pair_distances(SafKind kind, const std::vector<SnapshotPair>& pairs) {
  std::vector<double> out(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) out[i] = whole_page_distance(kind, *pairs[i].a, *pairs[i].b);
  return out;
}

std::vector<double> pair_distances_parallel(SafKind kind, const std::vector<SnapshotPair>& pairs) {
  std::vector<double> out(pairs.size());
  const long n = static_cast<long>(pairs.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) out[i] = whole_page_distance(kind, *pairs[i].a, *pairs[i].b);
  return out;
}

}  // namespace fragscope
