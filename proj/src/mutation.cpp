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

#include "fragscope/mutation.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "fragscope/errors.hpp"

namespace fragscope {

namespace {

const std::set<std::string> kSubtreeTags = {"div", "table", "tr", "td", "ul", "li", "p"};
const std::set<std::string> kTextTags = {"h1", "h2", "h3", "h4", "h5", "h6", "p", "b", "i"};
const char* kAttrs[] = {"id", "class", "title"};

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

bool is_heading(const std::string& t) { return t.size() == 2 && t[0] == 'h' && t[1] >= '1' && t[1] <= '6'; }

Verdict gamma_verdict(Gamma g) {
  switch (g) {
    case Gamma::kClone: return Verdict::kSuccess;
    case Gamma::kNd: return Verdict::kWarn2;
    case Gamma::kDistinct: return Verdict::kError;
  }
  return Verdict::kError;
}

double ratio(int a, int b) { return b == 0 ? 1.0 : static_cast<double>(a) / b; }

}  // namespace

std::string to_string(MutationOp op) {
  switch (op) {
    case MutationOp::kAttribute: return "Attribute";
    case MutationOp::kTag: return "Tag";
    case MutationOp::kSubtree: return "Subtree";
    case MutationOp::kText: return "Text";
    case MutationOp::kNone: return "None";
  }
  return "?";
}

MutationOp parse_mutation_op(const std::string& s) {
  for (MutationOp op : {MutationOp::kAttribute, MutationOp::kTag, MutationOp::kSubtree, MutationOp::kText,
                        MutationOp::kNone}) {
    std::string n = to_string(op);
    std::string a = s;
    std::transform(n.begin(), n.end(), n.begin(), ::tolower);
    std::transform(a.begin(), a.end(), a.begin(), ::tolower);
    if (a == n) return op;
  }
  throw InvalidConfig("unknown mutation operator: " + s);
}

std::string to_string(OracleKind k) {
  switch (k) {
    case OracleKind::kFragmentNoMem: return "fragment-no-mem";
    case OracleKind::kFragmentWithMem: return "fragment-with-mem";
    case OracleKind::kStructural: return "structural";
    case OracleKind::kVisual: return "visual";
  }
  return "?";
}

std::string similar_tag(const std::string& tag) {
  if (is_heading(tag)) return std::string("h") + static_cast<char>('1' + (tag[1] - '1' + 1) % 6);
  if (tag == "span") return "p";
  if (tag == "p") return "span";
  return tag;
}

bool eligible_for(const DomNode& n, MutationOp op) {
  switch (op) {
    case MutationOp::kAttribute:
      for (const char* a : kAttrs) {
        if (n.attr(a)) return true;
      }
      return false;
    case MutationOp::kTag:
      return is_heading(n.tag) || n.tag == "span" || n.tag == "p";
    case MutationOp::kSubtree:
      return kSubtreeTags.count(n.tag) && !n.children.empty();
    case MutationOp::kText:
      return kTextTags.count(n.tag) && n.children.empty() && n.text.has_value();
    case MutationOp::kNone:
      return false;
  }
  return false;
}

std::pair<Snapshot, Mutation> mutate(const Snapshot& s, MutationOp op, std::uint64_t seed) {
  std::vector<int> pool;
  for (const DomNode& n : s.nodes) {
    if (eligible_for(n, op)) pool.push_back(n.id);
  }
  if (pool.empty()) {
    throw NoEligibleNode("no node of state '" + s.state_id + "' is eligible for " + to_string(op));
  }
  std::mt19937_64 rng(seed);
  Mutation m;
  m.op = op;
  m.target = pool[rng() % pool.size()];
  Snapshot out = s;
  out.screenshot.reset();
  DomNode& n = out.nodes[m.target];
  switch (op) {
    case MutationOp::kAttribute: {
      std::vector<std::string> present;
      for (const char* a : kAttrs) {
        if (n.attr(a)) present.push_back(a);
      }
      const std::string& name = present[rng() % present.size()];
      m.before = name + "=" + *n.attr(name);
      n.set_attr(name, *n.attr(name) + "Mut");
      m.after = name + "=" + *n.attr(name);
      break;
    }
    case MutationOp::kTag:
      m.before = n.tag;
      n.tag = similar_tag(n.tag);
      m.after = n.tag;
      break;
    case MutationOp::kSubtree: {
      std::set<int> drop;
      std::vector<int> stack(n.children.begin(), n.children.end());
      while (!stack.empty()) {
        int c = stack.back();
        stack.pop_back();
        drop.insert(c);
        for (int g : s.nodes[c].children) stack.push_back(g);
      }
      m.before = std::to_string(drop.size()) + " descendants";
      m.after = "0 descendants";
      n.children.clear();
      std::vector<DomNode> kept;
      for (DomNode& d : out.nodes) {
        if (!drop.count(d.id)) kept.push_back(std::move(d));
      }
      out.nodes = std::move(kept);
      break;
    }
    case MutationOp::kText:
      m.before = *n.text;
      n.text = *n.text + "Mut";
      m.after = *n.text;
      break;
    case MutationOp::kNone:
      break;
  }
  out.finalize();
  m.visible = !(out.raster() == s.raster());
  return {std::move(out), m};
}

EquivalentKind MutantRecord::kind() const {
  if (mutation.op == MutationOp::kNone) return EquivalentKind::kNone;
  if (mutation.op == MutationOp::kAttribute) return EquivalentKind::kAttribute;
  return EquivalentKind::kInvisible;
}

double OracleScore::effectiveness() const { return ratio(detected, visible); }

double OracleScore::robustness() const {
  int e = 0;
  int t = 0;
  for (int k = 0; k < 3; ++k) {
    e += equivalents[k];
    t += tolerated[k];
  }
  return ratio(t, e);
}

double OracleScore::robustness(EquivalentKind k) const {
  return ratio(tolerated[static_cast<int>(k)], equivalents[static_cast<int>(k)]);
}

Json MutationReport::to_json() const {
  Json j;
  Json sc = Json::array();
  for (const OracleScore& s : scores) {
    sc.push_back({{"oracle", to_string(s.oracle)},
                  {"visible", s.visible},
                  {"detected", s.detected},
                  {"effectiveness", s.effectiveness()},
                  {"none", {s.tolerated[0], s.equivalents[0]}},
                  {"attribute", {s.tolerated[1], s.equivalents[1]}},
                  {"invisible", {s.tolerated[2], s.equivalents[2]}},
                  {"robustness", s.robustness()}});
  }
  j["scores"] = std::move(sc);
  Json ms = Json::array();
  for (const MutantRecord& r : mutants) {
    Json v = Json::array();
    for (Verdict x : r.verdicts) v.push_back(to_string(x));
    ms.push_back({{"index", r.index},
                  {"state", r.state},
                  {"seed", r.seed},
                  {"operator", to_string(r.mutation.op)},
                  {"target", r.mutation.target},
                  {"before", r.mutation.before},
                  {"after", r.mutation.after},
                  {"visible", r.mutation.visible},
                  {"verdicts", std::move(v)}});
  }
  j["mutants"] = std::move(ms);
  return j;
}

std::string MutationReport::to_csv() const {
  std::ostringstream os;
  os << "oracle,visible,detected,effectiveness,none_tolerated,none_total,attribute_tolerated,attribute_total,"
        "invisible_tolerated,invisible_total,robustness\n";
  for (const OracleScore& s : scores) {
    os << to_string(s.oracle) << "," << s.visible << "," << s.detected << "," << s.effectiveness() << ","
       << s.tolerated[0] << "," << s.equivalents[0] << "," << s.tolerated[1] << "," << s.equivalents[1] << ","
       << s.tolerated[2] << "," << s.equivalents[2] << "," << s.robustness() << "\n";
  }
  return os.str();
}

std::vector<SnapshotPtr> record_trace(const AppModel& model, const SimApp& app,
                                      std::optional<std::uint64_t> data_seed) {
  std::vector<SnapshotPtr> trace(model.states.size());
  Classifier clf(model.config.compare);
  OraclePolicy policy;
  policy.use_memo = false;
  for (const TestCase& t : generate_tests(model)) {
    TestResult r = execute_test(t, app, model, policy, clf, data_seed);
    for (const StepVerdict& v : r.verdicts) {
      if (v.kind != StepKind::kAssert || !v.live) continue;
      int s = model.find_state(v.state);
      if (s >= 0 && !trace[s]) trace[s] = v.live->snapshot_ptr();
    }
  }
  for (std::size_t s = 0; s < trace.size(); ++s) {
    if (!trace[s]) throw MisalignedTrace("no trace snapshot for state " + model.states[s].id);
  }
  return trace;
}

MutationReport run_mutation_experiment(const AppModel& model, const std::vector<SnapshotPtr>& trace,
                                       const std::vector<SnapshotPtr>& none_trace, const MutationConfig& cfg,
                                       bool parallel) {
  const int S = static_cast<int>(model.states.size());
  if (S == 0) throw EmptyModel("model has no states");
  if (static_cast<int>(trace.size()) != S || static_cast<int>(none_trace.size()) != S) {
    throw MisalignedTrace("trace length differs from the number of model states");
  }
  for (int s = 0; s < S; ++s) {
    if (!trace[s] || !none_trace[s]) throw MisalignedTrace("missing trace snapshot");
  }
  if (cfg.mutants < 0) throw InvalidConfig("mutant count must be non-negative");
  cfg.structural.validate();
  cfg.visual.validate();

  std::vector<HierarchyPtr> live(S);
  std::vector<HierarchyPtr> none_live(S);
  std::vector<PageSignature> live_sig(S);
  std::vector<PageSignature> none_sig(S);
  std::vector<PageSignature> model_sig(S);
  for (int s = 0; s < S; ++s) {
    live[s] = fragment(trace[s], model.config.frag);
    none_live[s] = fragment(none_trace[s], model.config.frag);
    live_sig[s] = page_signature(*trace[s]);
    none_sig[s] = page_signature(*none_trace[s]);
    model_sig[s] = page_signature(model.states[s].page->snapshot());
  }

  // Plan: operators cycle, states drawn from a per-mutant seed.
  const MutationOp cycle[] = {MutationOp::kAttribute, MutationOp::kTag, MutationOp::kSubtree, MutationOp::kText,
                              MutationOp::kNone};
  struct Plan {
    int state;
    MutationOp op;
    std::uint64_t seed;
  };
  std::vector<Plan> plan;
  for (int i = 0; i < cfg.mutants; ++i) {
    std::uint64_t seed = splitmix(cfg.seed ^ splitmix(static_cast<std::uint64_t>(i)));
    int first = static_cast<int>(seed % static_cast<std::uint64_t>(S));
    bool placed = false;
    for (int k = 0; k < 5 && !placed; ++k) {
      MutationOp op = cycle[(i + k) % 5];
      for (int d = 0; d < S && !placed; ++d) {
        int s = (first + d) % S;
        bool ok = op == MutationOp::kNone;
        for (const DomNode& n : model.states[s].page->snapshot().nodes) ok = ok || eligible_for(n, op);
        if (ok) {
          plan.push_back({s, op, seed});
          placed = true;
        }
      }
    }
  }

  std::vector<MutantRecord> records(plan.size());
  auto run_one = [&](std::size_t i, Classifier& clf) {
    const Plan& p = plan[i];
    MutantRecord& r = records[i];
    r.index = static_cast<int>(i);
    r.state = p.state;
    r.seed = p.seed;
    const ModelState& base = model.states[p.state];
    ModelState subject;
    subject.id = base.id;
    const HierarchyPtr* against = &live[p.state];
    const PageSignature* against_sig = &live_sig[p.state];
    PageSignature subject_sig;
    if (p.op == MutationOp::kNone) {
      subject.page = base.page;
      against = &none_live[p.state];
      against_sig = &none_sig[p.state];
      subject_sig = model_sig[p.state];
      r.mutation.op = MutationOp::kNone;
    } else {
      auto [snap, m] = mutate(base.page->snapshot(), p.op, p.seed);
      r.mutation = m;
      auto ptr = std::make_shared<const Snapshot>(std::move(snap));
      subject.page = fragment(ptr, model.config.frag);
      subject_sig = page_signature(*ptr);
    }
    OraclePolicy nomem{cfg.fail_at, false};
    OraclePolicy withmem{cfg.fail_at, true};
    r.verdicts[0] = assess(subject, *against, model.memo, nomem, clf).level;
    r.verdicts[1] = assess(subject, *against, model.memo, withmem, clf).level;
    r.verdicts[2] = gamma_verdict(gamma_classify(cfg.structural, subject_sig, *against_sig));
    r.verdicts[3] = gamma_verdict(gamma_classify(cfg.visual, subject_sig, *against_sig));
  };

  const long n = static_cast<long>(plan.size());
  if (parallel) {
#pragma omp parallel
    {
      Classifier clf(model.config.compare);
#pragma omp for schedule(dynamic)
      for (long i = 0; i < n; ++i) run_one(static_cast<std::size_t>(i), clf);
    }
  } else {
    Classifier clf(model.config.compare);
    for (long i = 0; i < n; ++i) run_one(static_cast<std::size_t>(i), clf);
  }

  MutationReport rep;
  rep.mutants = std::move(records);
  for (int o = 0; o < kOracleCount; ++o) rep.scores[o].oracle = static_cast<OracleKind>(o);
  for (const MutantRecord& r : rep.mutants) {
    for (int o = 0; o < kOracleCount; ++o) {
      OracleScore& sc = rep.scores[o];
      bool detected = r.verdicts[o] >= cfg.fail_at;
      if (r.equivalent()) {
        int k = static_cast<int>(r.kind());
        ++sc.equivalents[k];
        if (!detected) ++sc.tolerated[k];
      } else {
        ++sc.visible;
        if (detected) ++sc.detected;
      }
    }
  }
  return rep;
}

}  // namespace fragscope
