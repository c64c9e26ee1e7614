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

// Command-line front end: fragment, classify, crawl, gentest, runtest,
// mutate, eval, tune. Exit codes: 0 ok, 1 domain error, 2 usage error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fragscope/app.hpp"
#include "fragscope/compare.hpp"
#include "fragscope/crawl.hpp"
#include "fragscope/errors.hpp"
#include "fragscope/fragment.hpp"
#include "fragscope/metrics.hpp"
#include "fragscope/mutation.hpp"
#include "fragscope/png_io.hpp"
#include "fragscope/seed.hpp"
#include "fragscope/testgen.hpp"

namespace fs = std::filesystem;
using namespace fragscope;

namespace {

struct Globals {
  std::uint64_t seed = 1;
  std::string log_level = "info";
  std::string manifest;
  std::vector<std::string> argv;
};

struct FragOpts {
  FragConfig frag;
  CompareConfig compare;

  void add(CLI::App* sub, bool with_compare) {
    sub->add_option("--min-nodes", frag.min_nodes, "Smallest useful fragment (nodes)")->capture_default_str();
    sub->add_option("--min-area", frag.min_area, "Smallest useful fragment (px^2)")->capture_default_str();
    sub->add_option("--min-separator-px", frag.min_separator_px, "Gap that separates blocks")->capture_default_str();
    sub->add_option("--max-split-depth", frag.max_split_depth)->capture_default_str();
    if (with_compare) {
      sub->add_option("--epsilon", compare.visual_epsilon, "Visual Clone tolerance")->capture_default_str();
      sub->add_option("--max-depth", compare.max_depth, "Classification recursion limit")->capture_default_str();
    }
  }
  Json to_json() const {
    return {{"minNodes", frag.min_nodes},
            {"minArea", frag.min_area},
            {"minSeparatorPx", frag.min_separator_px},
            {"maxSplitDepth", frag.max_split_depth},
            {"visualEpsilon", compare.visual_epsilon},
            {"maxDepth", compare.max_depth}};
  }
};

void info(const Globals& g, const std::string& msg) {
  if (g.log_level != "quiet") std::cerr << msg << "\n";
}

void write_text(const std::string& path, const std::string& text) {
  fs::path p = path;
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << text;
}

// Manifest beside the primary output, or in the working directory.
void write_manifest(const Globals& g, const std::string& sub, const Json& config, const std::string& output,
                    bool output_is_dir) {
  std::string path = g.manifest;
  if (path.empty()) {
    if (output.empty()) {
      path = "fragscope-manifest.json";
    } else if (output_is_dir) {
      path = (fs::path(output) / "manifest.json").string();
    } else {
      path = output + ".manifest.json";
    }
  }
  Json m = {{"tool", "fragscope"},
            {"version", FRAGSCOPE_VERSION},
            {"subcommand", sub},
            {"argv", g.argv},
            {"seed", g.seed},
            {"config", config}};
  write_text(path, m.dump(1) + "\n");
}

SnapshotPtr read_snapshot(const std::string& path) { return std::make_shared<const Snapshot>(load_snapshot(path)); }

}  // namespace

int main(int argc, char** argv) {
  Globals g;
  for (int i = 0; i < argc; ++i) g.argv.emplace_back(argv[i]);

  CLI::App app{"fragscope: fragment-based state comparison, crawling and test generation"};
  app.require_subcommand(1);
  app.add_option("--seed", g.seed, "Global seed")->capture_default_str();
  app.add_option("--log-level", g.log_level, "quiet|info|debug")
      ->check(CLI::IsMember({"quiet", "info", "debug"}))
      ->capture_default_str();
  app.add_option("--manifest", g.manifest, "Manifest path (default: beside outputs)");

  // fragment
  auto* sub_frag = app.add_subcommand("fragment", "Fragment one snapshot");
  std::string frag_in, frag_out, frag_crops;
  FragOpts frag_opts;
  sub_frag->add_option("snapshot", frag_in, "Snapshot JSON")->required()->check(CLI::ExistingFile);
  sub_frag->add_option("--out", frag_out, "Hierarchy JSON (default: stdout)");
  sub_frag->add_option("--crops", frag_crops, "Directory for PNG crops of useful fragments");
  frag_opts.add(sub_frag, false);

  // classify
  auto* sub_cls = app.add_subcommand("classify", "Classify a snapshot pair");
  std::string cls_a, cls_b, cls_format = "text";
  FragOpts cls_opts;
  sub_cls->add_option("first", cls_a)->required()->check(CLI::ExistingFile);
  sub_cls->add_option("second", cls_b)->required()->check(CLI::ExistingFile);
  sub_cls->add_option("--format", cls_format)->check(CLI::IsMember({"text", "json"}))->capture_default_str();
  cls_opts.add(sub_cls, true);

  // crawl
  auto* sub_crawl = app.add_subcommand("crawl", "Crawl a simulated app");
  std::string crawl_app, crawl_out = "model", crawl_mode = "fragment";
  CrawlConfig ccfg;
  FragOpts crawl_opts;
  std::optional<int> max_actions, max_states;
  std::optional<double> max_duration;
  std::vector<std::string> tags;
  sub_crawl->add_option("app", crawl_app, "App definition JSON")->required()->check(CLI::ExistingFile);
  sub_crawl->add_option("--out", crawl_out, "Model directory")->capture_default_str();
  sub_crawl->add_option("--max-actions", max_actions);
  sub_crawl->add_option("--max-states", max_states);
  sub_crawl->add_option("--max-duration", max_duration, "Seconds");
  sub_crawl->add_option("--c0", ccfg.c0)->capture_default_str();
  sub_crawl->add_flag("--explore-skipped-duplicates", ccfg.explore_skipped_duplicates);
  sub_crawl->add_option("--tag", tags, "Actionable selector, e.g. a or input[type=submit]");
  sub_crawl->add_option("--mode", crawl_mode)->check(CLI::IsMember({"fragment", "structural", "visual"}))->capture_default_str();
  sub_crawl->add_option("--tc", ccfg.saf.t_c, "Whole-page clone threshold")->capture_default_str();
  sub_crawl->add_option("--tn", ccfg.saf.t_n, "Whole-page near-duplicate threshold")->capture_default_str();
  crawl_opts.add(sub_crawl, true);

  // gentest
  auto* sub_gen = app.add_subcommand("gentest", "Generate tests from a model");
  std::string gen_model, gen_out = "tests.json", gen_scripts;
  sub_gen->add_option("model", gen_model, "Model directory or model.json")->required()->check(CLI::ExistingPath);
  sub_gen->add_option("--out", gen_out, "Test plan JSON")->capture_default_str();
  sub_gen->add_option("--scripts", gen_scripts, "Readable scripts file");

  // runtest
  auto* sub_run = app.add_subcommand("runtest", "Run generated tests against an app");
  std::string run_tests, run_model, run_app, run_fail_at = "warn2", run_report, run_results;
  bool run_no_memo = false, run_fail_on = false;
  std::optional<std::uint64_t> run_data_seed;
  sub_run->add_option("tests", run_tests)->required()->check(CLI::ExistingFile);
  sub_run->add_option("model", run_model)->required()->check(CLI::ExistingPath);
  sub_run->add_option("app", run_app)->required()->check(CLI::ExistingFile);
  sub_run->add_option("--fail-at", run_fail_at)->check(CLI::IsMember({"warn1", "warn2", "warn3", "error"}))->capture_default_str();
  sub_run->add_flag("--no-memo", run_no_memo, "Disable the data-fluid downgrade");
  sub_run->add_option("--report", run_report, "HTML report path");
  sub_run->add_option("--results", run_results, "Results JSON path");
  sub_run->add_option("--data-seed", run_data_seed, "Regenerate initial data with this seed");
  sub_run->add_flag("--fail-on-test-failure", run_fail_on);

  // mutate
  auto* sub_mut = app.add_subcommand("mutate", "Mutation analysis of oracles");
  std::string mut_model, mut_app, mut_out = "mutation", mut_format = "json", mut_fail_at = "warn2";
  MutationConfig mcfg;
  bool mut_serial = false;
  std::optional<std::uint64_t> mut_none_seed;
  sub_mut->add_option("model", mut_model)->required()->check(CLI::ExistingPath);
  sub_mut->add_option("app", mut_app)->required()->check(CLI::ExistingFile);
  sub_mut->add_option("--mutants", mcfg.mutants)->capture_default_str();
  sub_mut->add_option("--out", mut_out, "Output directory")->capture_default_str();
  sub_mut->add_option("--format", mut_format)->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  sub_mut->add_option("--fail-at", mut_fail_at)->check(CLI::IsMember({"warn1", "warn2", "warn3", "error"}))->capture_default_str();
  sub_mut->add_option("--structural-tc", mcfg.structural.t_c)->capture_default_str();
  sub_mut->add_option("--structural-tn", mcfg.structural.t_n)->capture_default_str();
  sub_mut->add_option("--visual-tc", mcfg.visual.t_c)->capture_default_str();
  sub_mut->add_option("--visual-tn", mcfg.visual.t_n)->capture_default_str();
  sub_mut->add_option("--none-data-seed", mut_none_seed, "Data seed of the None trace");
  sub_mut->add_flag("--serial", mut_serial, "Use the serial reference loop");

  // eval
  auto* sub_eval = app.add_subcommand("eval", "Classification F1 or model precision/recall");
  std::string eval_pairs, eval_classifier = "fragment", eval_model, eval_gt, eval_overrides, eval_out;
  double eval_tc = 0.0, eval_tn = 0.0;
  FragOpts eval_opts;
  sub_eval->add_option("--pairs", eval_pairs, "Labeled pairs CSV")->check(CLI::ExistingFile);
  sub_eval->add_option("--classifier", eval_classifier)->check(CLI::IsMember({"fragment", "structural", "visual"}))->capture_default_str();
  sub_eval->add_option("--tc", eval_tc)->capture_default_str();
  sub_eval->add_option("--tn", eval_tn)->capture_default_str();
  sub_eval->add_option("--model", eval_model, "Model directory")->check(CLI::ExistingPath);
  sub_eval->add_option("--gt", eval_gt, "Directory of ground-truth snapshots")->check(CLI::ExistingDirectory);
  sub_eval->add_option("--overrides", eval_overrides, "CSV modelStateId,gtFile")->check(CLI::ExistingFile);
  sub_eval->add_option("--out", eval_out, "Result JSON path (default: stdout)");
  eval_opts.add(sub_eval, true);

  // tune
  auto* sub_tune = app.add_subcommand("tune", "Tune whole-page thresholds");
  std::string tune_pairs, tune_kind = "structural", tune_out;
  int tune_budget = 200;
  sub_tune->add_option("pairs", tune_pairs, "Labeled pairs CSV")->required()->check(CLI::ExistingFile);
  sub_tune->add_option("--kind", tune_kind)->check(CLI::IsMember({"structural", "visual"}))->capture_default_str();
  sub_tune->add_option("--budget", tune_budget)->capture_default_str();
  sub_tune->add_option("--out", tune_out, "Result JSON path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*sub_frag) {
      auto page = fragment(read_snapshot(frag_in), frag_opts.frag);
      Json j = page->to_json();
      if (frag_out.empty()) {
        std::cout << j.dump(1) << "\n";
      } else {
        write_text(frag_out, j.dump(1) + "\n");
      }
      if (!frag_crops.empty()) {
        fs::create_directories(frag_crops);
        for (const Fragment* f : page->useful_fragments()) {
          if (f->crop.width == 0 || f->crop.height == 0) continue;
          write_png(f->crop, (fs::path(frag_crops) / ("F" + std::to_string(f->frag_id) + ".png")).string());
        }
      }
      write_manifest(g, "fragment", {{"input", frag_in}, {"frag", frag_opts.to_json()}}, frag_out, false);
      return 0;
    }

    if (*sub_cls) {
      auto a = fragment(read_snapshot(cls_a), cls_opts.frag);
      auto b = fragment(read_snapshot(cls_b), cls_opts.frag);
      Classifier clf(cls_opts.compare);
      clf.set_tracing(true);
      ClassLabel c = clf.classify(*a, *b);
      if (cls_format == "json") {
        std::cout << Json{{"label", to_string(c)}, {"trace", clf.trace()}}.dump(1) << "\n";
      } else {
        std::cout << to_string(c) << "\n" << clf.trace().dump(1) << "\n";
      }
      write_manifest(g, "classify", {{"first", cls_a}, {"second", cls_b}, {"options", cls_opts.to_json()}}, "",
                     false);
      return 0;
    }

    if (*sub_crawl) {
      SimApp sim = load_app(crawl_app);
      ccfg.frag = crawl_opts.frag;
      ccfg.compare = crawl_opts.compare;
      if (!tags.empty()) ccfg.tag_set = tags;
      ccfg.stopping.max_actions = max_actions;
      ccfg.stopping.max_states = max_states;
      ccfg.stopping.max_duration_sec = max_duration;
      if (crawl_mode == "fragment") {
        ccfg.mode = DedupMode::kFragment;
      } else {
        ccfg.mode = DedupMode::kWholePage;
        ccfg.saf.kind = parse_saf_kind(crawl_mode);
      }
      AppModel m = crawl(sim, ccfg);
      save_model(m, crawl_out);
      Json audit = model_to_json(m)["audit"];
      std::string lines;
      for (const Json& e : audit) lines += e.dump() + "\n";
      write_text((fs::path(crawl_out) / "audit.jsonl").string(), lines);
      info(g, "states=" + std::to_string(m.states.size()) + " transitions=" + std::to_string(m.transitions.size()) +
                  " paths=" + std::to_string(m.paths.size()) + " actions=" + std::to_string(m.actions) +
                  " stop=" + m.stop_reason);
      write_manifest(g, "crawl", {{"app", crawl_app}, {"crawl", ccfg.to_json()}}, crawl_out, true);
      return 0;
    }

    if (*sub_gen) {
      AppModel m = load_model(gen_model);
      auto tests = generate_tests(m);
      write_text(gen_out, tests_to_json(tests).dump(1) + "\n");
      if (!gen_scripts.empty()) {
        std::string s;
        for (const TestCase& t : tests) s += test_script(t) + "\n";
        write_text(gen_scripts, s);
      }
      info(g, std::to_string(tests.size()) + " tests");
      write_manifest(g, "gentest", {{"model", gen_model}}, gen_out, false);
      return 0;
    }

    if (*sub_run) {
      AppModel m = load_model(run_model);
      SimApp sim = load_app(run_app);
      std::ifstream in(run_tests);
      Json jt;
      try {
        jt = Json::parse(in);
      } catch (const Json::parse_error& e) {
        throw ParseError(std::string("malformed test plan: ") + e.what());
      }
      auto tests = tests_from_json(jt);
      OraclePolicy policy{parse_verdict(run_fail_at), !run_no_memo};
      Classifier clf(m.config.compare);
      std::vector<TestResult> results;
      int failed = 0;
      Json out = Json::array();
      for (const TestCase& t : tests) {
        results.push_back(execute_test(t, sim, m, policy, clf, run_data_seed));
        failed += results.back().failed ? 1 : 0;
        out.push_back(result_to_json(results.back()));
        std::cout << t.id << " " << to_string(results.back().worst) << " " << (results.back().failed ? "FAIL" : "pass")
                  << "\n";
      }
      if (!run_report.empty()) write_text(run_report, emit_report(results, m));
      if (!run_results.empty()) write_text(run_results, Json{{"results", out}}.dump(1) + "\n");
      std::string primary = !run_results.empty() ? run_results : run_report;
      Json cfg = {{"tests", run_tests}, {"model", run_model}, {"app", run_app}, {"failAt", run_fail_at},
                  {"memo", !run_no_memo}};
      if (run_data_seed) cfg["dataSeed"] = *run_data_seed;
      write_manifest(g, "runtest", cfg, primary, false);
      info(g, std::to_string(failed) + " of " + std::to_string(tests.size()) + " tests failed");
      return run_fail_on && failed > 0 ? 1 : 0;
    }

    if (*sub_mut) {
      AppModel m = load_model(mut_model);
      SimApp sim = load_app(mut_app);
      mcfg.seed = derive_seed(g.seed, "mutation");
      mcfg.fail_at = parse_verdict(mut_fail_at);
      std::uint64_t none_seed = mut_none_seed ? *mut_none_seed : derive_seed(g.seed, "none-data");
      auto trace = record_trace(m, sim);
      auto none_trace = record_trace(m, sim, none_seed);
      MutationReport rep = run_mutation_experiment(m, trace, none_trace, mcfg, !mut_serial);
      fs::create_directories(mut_out);
      write_text((fs::path(mut_out) / "scores.csv").string(), rep.to_csv());
      if (mut_format == "json") write_text((fs::path(mut_out) / "mutation.json").string(), rep.to_json().dump(1) + "\n");
      std::cout << rep.to_csv();
      write_manifest(g, "mutate",
                     {{"model", mut_model},
                      {"app", mut_app},
                      {"mutants", mcfg.mutants},
                      {"mutationSeed", mcfg.seed},
                      {"noneDataSeed", none_seed},
                      {"failAt", mut_fail_at},
                      {"structural", {mcfg.structural.t_c, mcfg.structural.t_n}},
                      {"visual", {mcfg.visual.t_c, mcfg.visual.t_n}}},
                     mut_out, true);
      return 0;
    }

    if (*sub_eval) {
      Json result;
      Json cfg = {{"options", eval_opts.to_json()}};
      if (!eval_pairs.empty()) {
        auto pairs = load_pairs(eval_pairs);
        std::map<std::string, HierarchyPtr> cache;
        auto get = [&](const std::string& p) {
          auto it = cache.find(p);
          if (it == cache.end()) it = cache.emplace(p, fragment(read_snapshot(p), eval_opts.frag)).first;
          return it->second;
        };
        Classifier clf(eval_opts.compare);
        std::vector<Coarse> pred, truth;
        Json rows = Json::array();
        for (const LabeledPair& lp : pairs) {
          auto a = get(lp.first);
          auto b = get(lp.second);
          Coarse p;
          if (eval_classifier == "fragment") {
            p = coarse(clf.classify(*a, *b));
          } else {
            WholePageSAF saf{parse_saf_kind(eval_classifier), eval_tc, eval_tn};
            p = coarse(gamma_classify(saf, a->snapshot(), b->snapshot()));
          }
          pred.push_back(p);
          truth.push_back(lp.label);
          rows.push_back({{"first", lp.first}, {"second", lp.second}, {"truth", to_string(lp.label)},
                          {"predicted", to_string(p)}});
        }
        result = {{"classifier", eval_classifier}, {"f1", multiclass_f1(pred, truth)}, {"pairs", rows}};
        cfg["pairs"] = eval_pairs;
        cfg["classifier"] = eval_classifier;
        cfg["tc"] = eval_tc;
        cfg["tn"] = eval_tn;
      } else if (!eval_model.empty() && !eval_gt.empty()) {
        AppModel m = load_model(eval_model);
        std::vector<HierarchyPtr> gt;
        std::vector<std::string> names;
        std::vector<fs::path> files;
        for (const auto& e : fs::directory_iterator(eval_gt)) {
          if (e.path().extension() == ".json") files.push_back(e.path());
        }
        std::sort(files.begin(), files.end());
        for (const fs::path& f : files) {
          gt.push_back(fragment(read_snapshot(f.string()), m.config.frag));
          names.push_back(f.filename().string());
        }
        std::map<std::string, int> overrides;
        if (!eval_overrides.empty()) {
          std::ifstream in(eval_overrides);
          std::string line;
          while (std::getline(in, line)) {
            auto comma = line.find(',');
            if (comma == std::string::npos) continue;
            std::string id = line.substr(0, comma), file = line.substr(comma + 1);
            auto it = std::find(names.begin(), names.end(), file);
            overrides[id] = it == names.end() ? -1 : static_cast<int>(it - names.begin());
          }
        }
        Classifier clf(m.config.compare);
        auto mapper = classify_mapper(m, gt, clf, overrides);
        PrecisionRecall pr = model_precision_recall(static_cast<int>(m.states.size()), static_cast<int>(gt.size()), mapper);
        Json mapping = Json::object();
        for (std::size_t s = 0; s < m.states.size(); ++s) {
          auto gidx = mapper(static_cast<int>(s));
          mapping[m.states[s].id] = gidx ? Json(names[*gidx]) : Json(nullptr);
        }
        result = {{"precision", pr.precision}, {"recall", pr.recall}, {"f1", pr.f1}, {"covered", pr.covered},
                  {"mapping", mapping}};
        cfg["model"] = eval_model;
        cfg["gt"] = eval_gt;
      } else {
        std::cerr << "eval needs --pairs, or --model with --gt\n" << sub_eval->help();
        return 2;
      }
      if (eval_out.empty()) {
        std::cout << result.dump(1) << "\n";
      } else {
        write_text(eval_out, result.dump(1) + "\n");
      }
      write_manifest(g, "eval", cfg, eval_out, false);
      return 0;
    }

    if (*sub_tune) {
      auto pairs = load_pairs(tune_pairs);
      SafKind kind = parse_saf_kind(tune_kind);
      std::vector<SnapshotPair> sp;
      std::vector<Coarse> truth;
      std::map<std::string, SnapshotPtr> cache;
      auto get = [&](const std::string& p) {
        auto it = cache.find(p);
        if (it == cache.end()) it = cache.emplace(p, read_snapshot(p)).first;
        return it->second;
      };
      for (const LabeledPair& lp : pairs) {
        sp.push_back({get(lp.first), get(lp.second)});
        truth.push_back(lp.label);
      }
      std::vector<double> d = pair_distances_parallel(kind, sp);
      std::uint64_t seed = derive_seed(g.seed, "tune");
      TuneResult r = tune_thresholds(d, truth, tune_budget, seed);
      Json result = {{"kind", tune_kind}, {"tc", r.t_c}, {"tn", r.t_n}, {"f1", r.best_f1},
                     {"trace", r.trace}, {"bestSoFar", r.best_so_far}, {"distances", d}};
      if (tune_out.empty()) {
        std::cout << result.dump(1) << "\n";
      } else {
        write_text(tune_out, result.dump(1) + "\n");
      }
      write_manifest(g, "tune", {{"pairs", tune_pairs}, {"kind", tune_kind}, {"budget", tune_budget}, {"tuneSeed", seed}},
                     tune_out, false);
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
