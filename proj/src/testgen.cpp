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

#include "fragscope/testgen.hpp"

#include <algorithm>
#include <sstream>

#include "fragscope/errors.hpp"
#include "fragscope/png_io.hpp"

namespace fragscope {

namespace {

std::string step_kind_name(StepKind k) {
  switch (k) {
    case StepKind::kLoad: return "load";
    case StepKind::kAction: return "action";
    case StepKind::kAssert: return "assert";
  }
  return "?";
}

StepKind parse_step_kind(const std::string& s) {
  if (s == "load") return StepKind::kLoad;
  if (s == "action") return StepKind::kAction;
  if (s == "assert") return StepKind::kAssert;
  throw ParseError("unknown step kind: " + s);
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string img(const Raster& r) {
  if (r.width == 0 || r.height == 0) return "<span class=\"none\">(empty)</span>";
  return "<img alt=\"crop\" src=\"data:image/png;base64," + base64_encode(encode_png(r)) + "\">";
}

std::string bbox_text(const Rect& b) {
  return std::to_string(b.x) + "," + std::to_string(b.y) + " " + std::to_string(b.w) + "x" + std::to_string(b.h);
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::kSuccess: return "Success";
    case Verdict::kWarn1: return "Warn1";
    case Verdict::kWarn2: return "Warn2";
    case Verdict::kWarn3: return "Warn3";
    case Verdict::kError: return "Error";
  }
  return "?";
}

Verdict parse_verdict(const std::string& s) {
  std::string l;
  for (char c : s) l.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (l == "success") return Verdict::kSuccess;
  if (l == "warn1") return Verdict::kWarn1;
  if (l == "warn2") return Verdict::kWarn2;
  if (l == "warn3") return Verdict::kWarn3;
  if (l == "error") return Verdict::kError;
  throw InvalidConfig("unknown verdict level: " + s);
}

std::vector<TestCase> generate_tests(const AppModel& model) {
  if (model.states.empty()) throw EmptyModel("model has no states");
  std::vector<TestCase> out;
  const std::string base = model.states[0].page->snapshot().url;
  // A model without transitions still yields one load-and-assert test.
  std::vector<std::vector<int>> paths = model.paths;
  if (paths.empty()) paths.emplace_back();
  for (std::size_t p = 0; p < paths.size(); ++p) {
    const std::vector<int>& path = paths[p];
    TestCase t;
    t.id = "test" + std::to_string(p + 1);
    t.base_url = base;
    t.steps.push_back({.kind = StepKind::kLoad});
    int first = path.empty() ? 0 : model.transitions.at(path.front()).src;
    t.steps.push_back({.kind = StepKind::kAssert, .state = model.states[first].id});
    for (int id : path) {
      const Transition& tr = model.transitions.at(id);
      const Actionable& a = model.states[tr.src].actionables.at(tr.actionable);
      t.steps.push_back({.kind = StepKind::kAction, .locator = a.locator, .label = a.label, .transition = id});
      t.steps.push_back({.kind = StepKind::kAssert, .state = model.states[tr.tgt].id});
    }
    out.push_back(std::move(t));
  }
  return out;
}

Json tests_to_json(const std::vector<TestCase>& tests) {
  Json arr = Json::array();
  for (const TestCase& t : tests) {
    Json steps = Json::array();
    for (const TestStep& s : t.steps) {
      Json js = {{"kind", step_kind_name(s.kind)}};
      if (!s.state.empty()) js["state"] = s.state;
      if (!s.locator.empty()) js["locator"] = s.locator;
      if (!s.label.empty()) js["label"] = s.label;
      if (s.transition >= 0) js["transition"] = s.transition;
      steps.push_back(std::move(js));
    }
    arr.push_back({{"id", t.id}, {"baseUrl", t.base_url}, {"steps", std::move(steps)}});
  }
  return {{"tests", std::move(arr)}};
}

std::vector<TestCase> tests_from_json(const Json& j) {
  std::vector<TestCase> out;
  try {
    for (const Json& jt : j.at("tests")) {
      TestCase t;
      t.id = jt.at("id").get<std::string>();
      t.base_url = jt.value("baseUrl", std::string());
      for (const Json& js : jt.at("steps")) {
        TestStep s;
        s.kind = parse_step_kind(js.at("kind").get<std::string>());
        s.state = js.value("state", std::string());
        s.locator = js.value("locator", std::string());
        s.label = js.value("label", std::string());
        s.transition = js.value("transition", -1);
        if (s.kind == StepKind::kAssert && s.state.empty()) throw ParseError("assert step without state");
        if (s.kind == StepKind::kAction && s.locator.empty()) throw ParseError("action step without locator");
        t.steps.push_back(std::move(s));
      }
      out.push_back(std::move(t));
    }
  } catch (const Json::exception& e) {
    throw ParseError(std::string("malformed test plan: ") + e.what());
  }
  return out;
}

std::string test_script(const TestCase& t) {
  std::ostringstream os;
  os << "def " << t.id << "(driver):\n";
  for (const TestStep& s : t.steps) {
    switch (s.kind) {
      case StepKind::kLoad:
        os << "    driver.loadURL(\"" << t.base_url << "\")\n";
        break;
      case StepKind::kAction:
        os << "    driver.findElement(\"" << s.locator << "\").click()  # " << s.label << "\n";
        break;
      case StepKind::kAssert:
        os << "    assert isEqual(driver.currentState, " << s.state << ")\n";
        break;
    }
  }
  return os.str();
}

StepVerdict assess(const ModelState& expected, const HierarchyPtr& live, const FragmentMemo& memo,
                   const OraclePolicy& policy, Classifier& clf) {
  StepVerdict v;
  v.kind = StepKind::kAssert;
  v.state = expected.id;
  v.live = live;
  Explanation e = clf.explain(expected.page->root(), live->root());
  v.label = e.label;
  for (const FragmentPair& p : e.changed) v.changed.push_back({p.first, p.second, false});
  switch (e.label) {
    case ClassLabel::kClone:
      v.level = Verdict::kSuccess;
      break;
    case ClassLabel::kNd2: {
      bool all = !v.changed.empty();
      for (ChangedFragment& c : v.changed) {
        c.fluid = policy.use_memo && c.model_frag >= 0 && memo.resolve_fluid(expected.page->at(c.model_frag), clf);
        all = all && c.fluid;
      }
      v.level = all ? Verdict::kWarn1 : Verdict::kWarn2;
      break;
    }
    case ClassLabel::kNd3:
      v.level = Verdict::kWarn3;
      break;
    case ClassLabel::kDistinct:
      v.level = Verdict::kError;
      break;
  }
  v.message = to_string(e.label);
  return v;
}

TestResult execute_test(const TestCase& t, const SimApp& app, const AppModel& model,
                        const OraclePolicy& policy, Classifier& clf, std::optional<std::uint64_t> data_seed) {
  TestResult r;
  r.id = t.id;
  Session sess(app, data_seed);
  SnapshotPtr live;
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const TestStep& s = t.steps[i];
    if (s.kind == StepKind::kLoad) {
      live = sess.load_url();
      continue;
    }
    if (s.kind == StepKind::kAction) {
      ++r.actions_fired;
      try {
        if (!live) throw StaleActionable("no page loaded");
        live = sess.fire(s.locator);
        ++r.actions_ok;
      } catch (const StaleActionable& ex) {
        StepVerdict v;
        v.step = static_cast<int>(i);
        v.kind = StepKind::kAction;
        v.level = Verdict::kError;
        v.message = ex.what();
        r.verdicts.push_back(std::move(v));
        break;
      }
      continue;
    }
    int st = model.find_state(s.state);
    if (st < 0) throw ParseError("test " + t.id + " asserts unknown state " + s.state);
    if (!live) throw ParseError("test " + t.id + " asserts before loading");
    StepVerdict v = assess(model.states[st], fragment(live, model.config.frag), model.memo, policy, clf);
    v.step = static_cast<int>(i);
    bool stop = v.level == Verdict::kError;
    r.verdicts.push_back(std::move(v));
    if (stop) break;
  }
  for (const StepVerdict& v : r.verdicts) r.worst = std::max(r.worst, v.level);
  r.failed = !r.verdicts.empty() && r.worst >= policy.fail_at;
  return r;
}

Json result_to_json(const TestResult& r) {
  Json vs = Json::array();
  for (const StepVerdict& v : r.verdicts) {
    Json jv = {{"step", v.step}, {"kind", step_kind_name(v.kind)}, {"level", to_string(v.level)}};
    if (!v.state.empty()) jv["state"] = v.state;
    if (v.label) jv["label"] = to_string(*v.label);
    Json ch = Json::array();
    for (const ChangedFragment& c : v.changed) {
      ch.push_back({{"modelFragment", c.model_frag}, {"liveFragment", c.live_frag}, {"fluid", c.fluid}});
    }
    jv["changed"] = std::move(ch);
    if (!v.message.empty()) jv["message"] = v.message;
    vs.push_back(std::move(jv));
  }
  return {{"id", r.id},
          {"worst", to_string(r.worst)},
          {"failed", r.failed},
          {"actionsFired", r.actions_fired},
          {"actionsOk", r.actions_ok},
          {"verdicts", std::move(vs)}};
}

std::string emit_report(const std::vector<TestResult>& results, const AppModel& model) {
  std::ostringstream os;
  os << "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\"><title>Test report</title>\n"
     << "<style>body{font-family:sans-serif}table{border-collapse:collapse}td,th{border:1px solid #999;"
     << "padding:4px}.Success{background:#cfc}.Warn1{background:#eef}.Warn2{background:#ffd}"
     << ".Warn3{background:#fc9}.Error{background:#f99}img{max-width:480px;border:1px solid #333}</style>\n"
     << "</head><body>\n<h1>Test report</h1>\n";
  int failed = 0;
  for (const TestResult& r : results) failed += r.failed ? 1 : 0;
  os << "<p>" << results.size() << " tests, " << failed << " failed</p>\n";
  os << "<table id=\"summary\"><tr><th>test</th><th>worst</th><th>result</th><th>actions</th></tr>\n";
  for (const TestResult& r : results) {
    os << "<tr><td><a href=\"#" << escape(r.id) << "\">" << escape(r.id) << "</a></td><td class=\""
       << to_string(r.worst) << "\">" << to_string(r.worst) << "</td><td>" << (r.failed ? "FAIL" : "pass")
       << "</td><td>" << r.actions_ok << "/" << r.actions_fired << "</td></tr>\n";
  }
  os << "</table>\n";
  for (const TestResult& r : results) {
    os << "<h2 id=\"" << escape(r.id) << "\">" << escape(r.id) << "</h2>\n";
    os << "<table><tr><th>step</th><th>kind</th><th>state</th><th>verdict</th><th>changed fragments</th></tr>\n";
    for (const StepVerdict& v : r.verdicts) {
      os << "<tr><td>" << v.step << "</td><td>" << step_kind_name(v.kind) << "</td><td>" << escape(v.state)
         << "</td><td class=\"" << to_string(v.level) << "\">" << to_string(v.level);
      if (v.label) os << " (" << to_string(*v.label) << ")";
      if (v.kind == StepKind::kAction) os << "<br>" << escape(v.message);
      os << "</td><td>";
      int st = v.state.empty() ? -1 : model.find_state(v.state);
      for (const ChangedFragment& c : v.changed) {
        os << "<div class=\"fragment\">";
        if (c.model_frag >= 0 && st >= 0) {
          const Fragment& f = model.states[st].page->at(c.model_frag);
          os << "model " << escape(v.state) << " F" << c.model_frag << " [" << bbox_text(f.bbox) << "]"
             << (c.fluid ? " data-fluid" : "") << "<br>" << img(f.crop) << "<br>";
        }
        if (c.live_frag >= 0 && v.live) {
          const Fragment& f = v.live->at(c.live_frag);
          os << "live F" << c.live_frag << " [" << bbox_text(f.bbox) << "]<br>" << img(f.crop);
        }
        os << "</div>";
      }
      os << "</td></tr>\n";
    }
    os << "</table>\n";
  }
  os << "</body></html>\n";
  return os.str();
}

}  // namespace fragscope
