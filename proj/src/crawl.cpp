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

#include "fragscope/crawl.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <filesystem>
#include <fstream>

#include "fragscope/errors.hpp"

namespace fragscope {

namespace fs = std::filesystem;

namespace {

double now_seconds() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}

std::string kind_name(ActionKind k) { return k == ActionKind::kSubmit ? "submit" : "click"; }

}  // namespace

void CrawlConfig::validate() const {
  if (!(c0 > 0.0 && c0 <= 1.0)) throw InvalidConfig("c0 must be in (0,1]");
  if (stopping.max_actions && *stopping.max_actions < 0) throw InvalidConfig("maxActions must be >= 0");
  if (stopping.max_states && *stopping.max_states < 1) throw InvalidConfig("maxStates must be >= 1");
  if (stopping.max_duration_sec && *stopping.max_duration_sec < 0) throw InvalidConfig("maxDurationSec must be >= 0");
  parse_tag_set(tag_set);
  if (mode == DedupMode::kWholePage) saf.validate();
}

Json CrawlConfig::to_json() const {
  Json j;
  j["c0"] = c0;
  Json st = Json::object();
  if (stopping.max_duration_sec) st["maxDurationSec"] = *stopping.max_duration_sec;
  if (stopping.max_states) st["maxStates"] = *stopping.max_states;
  if (stopping.max_actions) st["maxActions"] = *stopping.max_actions;
  j["stopping"] = st;
  j["exploreSkippedDuplicates"] = explore_skipped_duplicates;
  j["tagSet"] = tag_set;
  j["frag"] = {{"minNodes", frag.min_nodes},
               {"minArea", frag.min_area},
               {"minSeparatorPx", frag.min_separator_px},
               {"maxSplitDepth", frag.max_split_depth}};
  j["compare"] = {{"visualEpsilon", compare.visual_epsilon}, {"maxDepth", compare.max_depth}};
  j["mode"] = mode == DedupMode::kFragment ? "fragment" : to_string(saf.kind);
  j["tc"] = saf.t_c;
  j["tn"] = saf.t_n;
  return j;
}

CrawlConfig CrawlConfig::from_json(const Json& j) {
  CrawlConfig c;
  try {
    c.c0 = j.value("c0", 1.0);
    if (j.contains("stopping")) {
      const Json& st = j["stopping"];
      if (st.contains("maxDurationSec")) c.stopping.max_duration_sec = st["maxDurationSec"].get<double>();
      if (st.contains("maxStates")) c.stopping.max_states = st["maxStates"].get<int>();
      if (st.contains("maxActions")) c.stopping.max_actions = st["maxActions"].get<int>();
    }
    c.explore_skipped_duplicates = j.value("exploreSkippedDuplicates", false);
    if (j.contains("tagSet")) c.tag_set = j["tagSet"].get<std::vector<std::string>>();
    if (j.contains("frag")) {
      const Json& f = j["frag"];
      c.frag.min_nodes = f.value("minNodes", c.frag.min_nodes);
      c.frag.min_area = f.value("minArea", c.frag.min_area);
      c.frag.min_separator_px = f.value("minSeparatorPx", c.frag.min_separator_px);
      c.frag.max_split_depth = f.value("maxSplitDepth", c.frag.max_split_depth);
    }
    if (j.contains("compare")) {
      c.compare.visual_epsilon = j["compare"].value("visualEpsilon", 0.0);
      c.compare.max_depth = j["compare"].value("maxDepth", 32);
    }
    std::string mode = j.value("mode", std::string("fragment"));
    if (mode == "fragment") {
      c.mode = DedupMode::kFragment;
    } else {
      c.mode = DedupMode::kWholePage;
      c.saf.kind = parse_saf_kind(mode);
    }
    c.saf.t_c = j.value("tc", 0.0);
    c.saf.t_n = j.value("tn", 0.0);
  } catch (const Json::exception& e) {
    throw ParseError(std::string("malformed crawl config: ") + e.what());
  }
  return c;
}

int AppModel::find_state(const std::string& id) const {
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i].id == id) return static_cast<int>(i);
  }
  return -1;
}

Crawler::Crawler(const SimApp& app, CrawlConfig cfg) : app_(app), clf_(cfg.compare) {
  cfg.validate();
  model_.config = std::move(cfg);
}

bool Crawler::equivalent(ActRef x, ActRef y) const {
  if (x == y) return true;
  if (model_.config.mode == DedupMode::kWholePage) return false;
  if (y < x) std::swap(x, y);
  auto key = std::make_pair(x, y);
  if (auto it = equiv_cache_.find(key); it != equiv_cache_.end()) return it->second;
  const Located& lx = located_.at(x.state).at(x.index);
  const Located& ly = located_.at(y.state).at(y.index);
  bool eq = false;
  if (lx.rel == ly.rel) {
    ClassLabel c = clf_.classify(model_.states[x.state].page->at(lx.frag), model_.states[y.state].page->at(ly.frag));
    eq = c == ClassLabel::kClone || c == ClassLabel::kNd2;
  }
  equiv_cache_.emplace(key, eq);
  return eq;
}

std::vector<ActRef> Crawler::equivalence_class(ActRef a) const {
  std::vector<ActRef> out;
  for (std::size_t s = 0; s < model_.states.size(); ++s) {
    for (std::size_t i = 0; i < model_.states[s].actionables.size(); ++i) {
      ActRef b{static_cast<int>(s), static_cast<int>(i)};
      if (equivalent(a, b)) out.push_back(b);
    }
  }
  return out;
}

double Crawler::score_actionable(ActRef a) const {
  if (model_.states.at(a.state).explored.at(a.index)) return -1.0;
  std::vector<ActRef> cls = equivalence_class(a);
  for (const ActRef& b : cls) {
    if (model_.states[b.state].explored[b.index]) return 0.0;
  }
  return model_.config.c0 * static_cast<double>(cls.size());
}

double Crawler::score_state(int state) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < model_.states.at(state).actionables.size(); ++i) {
    sum += score_actionable({state, static_cast<int>(i)});
  }
  return sum;
}

bool Crawler::eligible(ActRef a) const {
  if (model_.states[a.state].explored[a.index]) return false;
  double s = score_actionable(a);
  return s > 0.0 || (model_.config.explore_skipped_duplicates && s == 0.0);
}

std::optional<int> Crawler::pick_actionable(int state) const {
  std::optional<int> best;
  double best_score = 0.0;
  const ModelState& st = model_.states[state];
  for (std::size_t i = 0; i < st.actionables.size(); ++i) {
    ActRef a{state, static_cast<int>(i)};
    if (!eligible(a)) continue;
    double s = score_actionable(a);
    if (!best || s > best_score) {
      best = static_cast<int>(i);
      best_score = s;
    }
  }
  return best;
}

std::optional<int> Crawler::pick_state() const {
  std::optional<int> best;
  double best_score = 0.0;
  for (std::size_t s = 0; s < model_.states.size(); ++s) {
    const ModelState& st = model_.states[s];
    if (st.unreachable) continue;
    bool any = false;
    for (std::size_t i = 0; i < st.actionables.size() && !any; ++i) any = eligible({static_cast<int>(s), static_cast<int>(i)});
    if (!any) continue;
    double sc = score_state(static_cast<int>(s));
    if (!best || sc > best_score) {
      best = static_cast<int>(s);
      best_score = sc;
    }
  }
  return best;
}

std::vector<int> Crawler::shortest_path(int target) const {
  std::vector<int> via(model_.states.size(), -2);
  via[0] = -1;
  std::deque<int> q{0};
  while (!q.empty()) {
    int s = q.front();
    q.pop_front();
    if (s == target) break;
    for (std::size_t t = 0; t < model_.transitions.size(); ++t) {
      const Transition& tr = model_.transitions[t];
      if (tr.src != s || via[tr.tgt] != -2) continue;
      via[tr.tgt] = static_cast<int>(t);
      q.push_back(tr.tgt);
    }
  }
  if (via[target] == -2) throw BacktrackFailed("no recorded path to state " + model_.states[target].id);
  std::vector<int> path;
  for (int s = target; via[s] >= 0; s = model_.transitions[via[s]].src) path.push_back(via[s]);
  std::reverse(path.begin(), path.end());
  return path;
}

int Crawler::add_state(const SnapshotPtr& snap) {
  ModelState st;
  st.id = "s" + std::to_string(model_.states.size() + 1);
  auto renamed = std::make_shared<Snapshot>(*snap);
  renamed->state_id = st.id;
  renamed->finalize();
  st.page = fragment(renamed, model_.config.frag);
  st.actionables = extract_actionables(*renamed, model_.config.tag_set);
  st.explored.assign(st.actionables.size(), false);
  std::vector<Located> loc;
  for (const Actionable& a : st.actionables) {
    const Fragment& f = st.page->closest(a.node_id);
    loc.push_back({f.frag_id, renamed->relative_xpath(f.anchor, a.node_id)});
  }
  located_.push_back(std::move(loc));
  if (model_.config.mode == DedupMode::kWholePage) signatures_.push_back(page_signature(*renamed));
  model_.states.push_back(std::move(st));
  // Fluidity only feeds fragment oracles; whole-page crawls skip the memo.
  if (model_.config.mode == DedupMode::kFragment) model_.memo.register_state(model_.states.back().page, clf_);
  return static_cast<int>(model_.states.size()) - 1;
}

int Crawler::match_state(const Hierarchy& page, std::string* outcome) {
  int near = -1;
  PageSignature sig;
  if (model_.config.mode == DedupMode::kWholePage) sig = page_signature(page.snapshot());
  for (std::size_t s = 0; s < model_.states.size(); ++s) {
    const Hierarchy& other = *model_.states[s].page;
    if (model_.config.mode == DedupMode::kFragment) {
      ClassLabel c = clf_.classify(page.root(), other.root());
      if (c == ClassLabel::kClone) {
        *outcome = "Clone";
        return static_cast<int>(s);
      }
      if (c == ClassLabel::kNd2 && near < 0) near = static_cast<int>(s);
    } else {
      Gamma g = gamma_classify(model_.config.saf, sig, signatures_[s]);
      if (g == Gamma::kClone) {
        *outcome = "Clone";
        return static_cast<int>(s);
      }
      if (g == Gamma::kNd && near < 0) near = static_cast<int>(s);
    }
  }
  if (near >= 0) *outcome = model_.config.mode == DedupMode::kFragment ? "Nd2" : "Nd";
  return near;
}

int Crawler::record_transition(int src, int act, int tgt) {
  auto key = std::make_tuple(src, act, tgt);
  auto it = transition_ids_.find(key);
  if (it != transition_ids_.end()) return it->second;
  model_.transitions.push_back({src, act, tgt});
  int id = static_cast<int>(model_.transitions.size()) - 1;
  transition_ids_[key] = id;
  return id;
}

bool Crawler::should_stop() {
  const StopCriteria& st = model_.config.stopping;
  if (st.max_actions && model_.actions >= *st.max_actions) {
    model_.stop_reason = "maxActions";
    return true;
  }
  if (st.max_states && static_cast<int>(model_.states.size()) >= *st.max_states) {
    model_.stop_reason = "maxStates";
    return true;
  }
  if (st.max_duration_sec && now_seconds() - started_ >= *st.max_duration_sec) {
    model_.stop_reason = "maxDuration";
    return true;
  }
  return false;
}

void Crawler::begin_path() { model_.paths.emplace_back(); }

void Crawler::log(AuditEntry e, const StepObserver& observer) {
  e.step = step_++;
  model_.audit.push_back(std::move(e));
  if (observer) observer(*this, model_.audit.back());
}

AppModel Crawler::run(const StepObserver& observer) {
  started_ = now_seconds();
  Session sess(app_);
  SnapshotPtr snap = sess.load_url();
  ++model_.loads;
  begin_path();
  int current = add_state(snap);
  log({.kind = "load", .tgt = current, .outcome = "new"}, observer);

  auto fire_from = [&](int src, int act, const char* kind) -> std::optional<SnapshotPtr> {
    const Actionable& a = model_.states[src].actionables[act];
    try {
      SnapshotPtr s = sess.fire(a);
      ++model_.actions;
      return s;
    } catch (const StaleActionable&) {
      log({.kind = kind == std::string("replay") ? "backtrack-failed" : "stale",
           .src = src, .actionable = act, .locator = a.locator},
          observer);
      return std::nullopt;
    }
  };

  while (true) {
    if (should_stop()) break;
    std::optional<int> act = current >= 0 ? pick_actionable(current) : std::nullopt;
    if (!act) {
      std::optional<int> target = pick_state();
      if (!target) {
        model_.terminated = true;
        model_.stop_reason = "exhausted";
        break;
      }
      std::vector<int> route;
      try {
        route = shortest_path(*target);
      } catch (const BacktrackFailed&) {
        model_.states[*target].unreachable = true;
        log({.kind = "backtrack-failed", .tgt = *target}, observer);
        current = -1;
        continue;
      }
      sess.load_url();
      ++model_.loads;
      begin_path();
      current = 0;
      log({.kind = "load", .tgt = 0}, observer);
      bool ok = true;
      for (int t : route) {
        if (should_stop()) {
          ok = false;
          break;
        }
        const Transition tr = model_.transitions[t];
        if (!fire_from(tr.src, tr.actionable, "replay")) {
          model_.states[*target].unreachable = true;
          ok = false;
          current = -1;
          break;
        }
        model_.paths.back().push_back(t);
        current = tr.tgt;
        log({.kind = "replay", .src = tr.src, .actionable = tr.actionable,
             .locator = model_.states[tr.src].actionables[tr.actionable].locator, .tgt = tr.tgt,
             .transition = t},
            observer);
      }
      if (!ok && !model_.stop_reason.empty()) break;
      continue;
    }
    const int src = current;
    model_.states[src].explored[*act] = true;
    std::optional<SnapshotPtr> out = fire_from(src, *act, "explore");
    if (!out) {
      current = -1;
      continue;
    }
    HierarchyPtr page = fragment(*out, model_.config.frag);
    std::string outcome;
    int tgt = match_state(*page, &outcome);
    if (tgt < 0) {
      tgt = add_state(*out);
      outcome = "new";
    }
    int t = record_transition(src, *act, tgt);
    model_.paths.back().push_back(t);
    current = tgt;
    log({.kind = "explore", .src = src, .actionable = *act,
         .locator = model_.states[src].actionables[*act].locator, .tgt = tgt, .transition = t,
         .outcome = outcome, .equivalence_class = equivalence_class({src, *act})},
        observer);
  }
  // Drop empty paths left by reloads that fired nothing.
  std::vector<std::vector<int>> paths;
  for (auto& p : model_.paths) {
    if (!p.empty()) paths.push_back(std::move(p));
  }
  if (paths.empty()) paths.emplace_back();
  model_.paths = std::move(paths);
  model_.seconds = now_seconds() - started_;
  return std::move(model_);
}

AppModel crawl(const SimApp& app, const CrawlConfig& cfg, const StepObserver& observer) {
  Crawler c(app, cfg);
  return c.run(observer);
}

Json model_to_json(const AppModel& m) {
  Json j;
  j["config"] = m.config.to_json();
  Json states = Json::array();
  for (const ModelState& s : m.states) {
    Json acts = Json::array();
    for (std::size_t i = 0; i < s.actionables.size(); ++i) {
      const Actionable& a = s.actionables[i];
      acts.push_back({{"nodeId", a.node_id},
                      {"kind", kind_name(a.kind)},
                      {"locator", a.locator},
                      {"label", a.label},
                      {"explored", static_cast<bool>(s.explored[i])}});
    }
    states.push_back({{"id", s.id},
                      {"snapshot", "states/" + s.id + ".json"},
                      {"unreachable", s.unreachable},
                      {"actionables", std::move(acts)}});
  }
  j["states"] = std::move(states);
  Json tr = Json::array();
  for (const Transition& t : m.transitions) {
    tr.push_back({{"src", m.states[t.src].id},
                  {"actionable", t.actionable},
                  {"locator", m.states[t.src].actionables[t.actionable].locator},
                  {"tgt", m.states[t.tgt].id}});
  }
  j["transitions"] = std::move(tr);
  j["paths"] = m.paths;
  j["memo"] = m.memo.to_json();
  Json audit = Json::array();
  for (const AuditEntry& e : m.audit) {
    Json a = {{"step", e.step}, {"kind", e.kind}};
    if (e.src >= 0) a["src"] = m.states[e.src].id;
    if (e.actionable >= 0) a["actionable"] = e.actionable;
    if (!e.locator.empty()) a["locator"] = e.locator;
    if (e.tgt >= 0) a["tgt"] = m.states[e.tgt].id;
    if (e.transition >= 0) a["transition"] = e.transition;
    if (!e.outcome.empty()) a["outcome"] = e.outcome;
    if (!e.equivalence_class.empty()) {
      Json cls = Json::array();
      for (const ActRef& r : e.equivalence_class) cls.push_back({m.states[r.state].id, r.index});
      a["class"] = std::move(cls);
    }
    audit.push_back(std::move(a));
  }
  j["audit"] = std::move(audit);
  j["stats"] = {{"states", m.states.size()},
                {"transitions", m.transitions.size()},
                {"paths", m.paths.size()},
                {"actions", m.actions},
                {"loads", m.loads},
                {"terminated", m.terminated},
                {"stopReason", m.stop_reason},
                {"seconds", m.seconds}};
  return j;
}

void save_model(const AppModel& m, const std::string& dir) {
  fs::create_directories(fs::path(dir) / "states");
  for (const ModelState& s : m.states) {
    save_snapshot(s.page->snapshot(), (fs::path(dir) / "states" / (s.id + ".json")).string());
  }
  std::ofstream out(fs::path(dir) / "model.json");
  if (!out) throw IoError("cannot write model to " + dir);
  out << model_to_json(m).dump(1) << "\n";
}

AppModel load_model(const std::string& dir_or_file) {
  fs::path file = dir_or_file;
  if (fs::is_directory(file)) file /= "model.json";
  std::ifstream in(file);
  if (!in) throw ParseError("cannot open model file: " + file.string());
  AppModel m;
  try {
    Json j = Json::parse(in);
    m.config = CrawlConfig::from_json(j.at("config"));
    std::map<std::string, HierarchyPtr> pages;
    for (const Json& js : j.at("states")) {
      ModelState s;
      s.id = js.at("id").get<std::string>();
      auto snap = std::make_shared<Snapshot>(load_snapshot((file.parent_path() / js.at("snapshot").get<std::string>()).string()));
      snap->state_id = s.id;
      s.page = fragment(snap, m.config.frag);
      for (const Json& ja : js.at("actionables")) {
        Actionable a;
        a.node_id = ja.at("nodeId").get<int>();
        a.kind = ja.value("kind", std::string("click")) == "submit" ? ActionKind::kSubmit : ActionKind::kClick;
        a.locator = ja.at("locator").get<std::string>();
        a.label = ja.value("label", std::string());
        s.actionables.push_back(std::move(a));
        s.explored.push_back(ja.value("explored", false));
      }
      s.unreachable = js.value("unreachable", false);
      pages[s.id] = s.page;
      m.states.push_back(std::move(s));
    }
    for (const Json& jt : j.at("transitions")) {
      int src = m.find_state(jt.at("src").get<std::string>());
      int tgt = m.find_state(jt.at("tgt").get<std::string>());
      int act = jt.at("actionable").get<int>();
      if (src < 0 || tgt < 0 || act < 0 || act >= static_cast<int>(m.states[src].actionables.size())) {
        throw ParseError("transition refers to unknown state or actionable");
      }
      m.transitions.push_back({src, act, tgt});
    }
    m.paths = j.at("paths").get<std::vector<std::vector<int>>>();
    for (const auto& p : m.paths) {
      for (int t : p) {
        if (t < 0 || t >= static_cast<int>(m.transitions.size())) throw ParseError("path refers to unknown transition");
      }
    }
    m.memo = FragmentMemo::from_json(j.at("memo"), pages);
    auto state_ref = [&](const Json& v) {
      int id = m.find_state(v.get<std::string>());
      if (id < 0) throw ParseError("audit refers to unknown state");
      return id;
    };
    for (const Json& ja : j.value("audit", Json::array())) {
      AuditEntry e;
      e.step = ja.at("step").get<int>();
      e.kind = ja.at("kind").get<std::string>();
      if (ja.contains("src")) e.src = state_ref(ja["src"]);
      e.actionable = ja.value("actionable", -1);
      e.locator = ja.value("locator", std::string());
      if (ja.contains("tgt")) e.tgt = state_ref(ja["tgt"]);
      e.transition = ja.value("transition", -1);
      e.outcome = ja.value("outcome", std::string());
      for (const Json& r : ja.value("class", Json::array())) e.equivalence_class.push_back({state_ref(r.at(0)), r.at(1).get<int>()});
      m.audit.push_back(std::move(e));
    }
    if (j.contains("stats")) {
      m.actions = j["stats"].value("actions", 0);
      m.loads = j["stats"].value("loads", 0);
      m.terminated = j["stats"].value("terminated", false);
      m.stop_reason = j["stats"].value("stopReason", std::string());
      m.seconds = j["stats"].value("seconds", 0.0);
    }
  } catch (const Json::exception& e) {
    throw ParseError(std::string("malformed model: ") + e.what());
  }
  if (m.states.empty()) throw EmptyModel("model has no states");
  return m;
}

}  // namespace fragscope
