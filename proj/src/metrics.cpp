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

#include "fragscope/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "fragscope/errors.hpp"

namespace fragscope {

std::string to_string(Coarse c) {
  switch (c) {
    case Coarse::kCl: return "Cl";
    case Coarse::kNd: return "Nd";
    case Coarse::kDi: return "Di";
  }
  return "?";
}

Coarse parse_coarse(const std::string& s) {
  std::string l;
  for (char c : s) l.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (l == "cl" || l == "clone") return Coarse::kCl;
  if (l == "nd" || l == "nd2" || l == "nd3" || l == "nd2-data" || l == "nd3-struct") return Coarse::kNd;
  if (l == "di" || l == "distinct") return Coarse::kDi;
  throw ParseError("unknown label: " + s);
}

Coarse coarse(ClassLabel c) {
  switch (c) {
    case ClassLabel::kClone: return Coarse::kCl;
    case ClassLabel::kNd2:
    case ClassLabel::kNd3: return Coarse::kNd;
    case ClassLabel::kDistinct: return Coarse::kDi;
  }
  return Coarse::kDi;
}

Coarse coarse(Gamma g) {
  switch (g) {
    case Gamma::kClone: return Coarse::kCl;
    case Gamma::kNd: return Coarse::kNd;
    case Gamma::kDistinct: return Coarse::kDi;
  }
  return Coarse::kDi;
}

double multiclass_f1(const std::vector<Coarse>& predictions, const std::vector<Coarse>& truth) {
  if (predictions.size() != truth.size()) {
    throw LengthMismatch("predictions and truth differ in length");
  }
  std::array<int, 3> tp{}, fp{}, fn{};
  std::array<bool, 3> present{};
  for (std::size_t i = 0; i < truth.size(); ++i) {
    int p = static_cast<int>(predictions[i]);
    int t = static_cast<int>(truth[i]);
    present[p] = present[t] = true;
    if (p == t) {
      ++tp[t];
    } else {
      ++fp[p];
      ++fn[t];
    }
  }
  double sum = 0.0;
  int classes = 0;
  for (int c = 0; c < 3; ++c) {
    if (!present[c]) continue;
    ++classes;
    sum += 2.0 * tp[c] / (2.0 * tp[c] + fp[c] + fn[c]);
  }
  return classes ? sum / classes : 0.0;
}

std::vector<LabeledPair> load_pairs(const std::string& csv_path) {
  std::ifstream in(csv_path);
  if (!in) throw ParseError("cannot open pair file: " + csv_path);
  std::filesystem::path dir = std::filesystem::path(csv_path).parent_path();
  std::vector<LabeledPair> out;
  std::string line;
  bool header = true;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string col;
    while (std::getline(ss, col, ',')) cols.push_back(col);
    if (cols.size() != 3) throw ParseError(csv_path + ":" + std::to_string(lineno) + ": expected 3 columns");
    auto resolve = [&](const std::string& p) {
      std::filesystem::path q = p;
      return q.is_absolute() ? q.string() : (dir / q).string();
    };
    out.push_back({resolve(cols[0]), resolve(cols[1]), parse_coarse(cols[2])});
  }
  return out;
}

PrecisionRecall model_precision_recall(int model_states, int gt_states, const StateMapper& mapper) {
  if (model_states <= 0) throw EmptyModel("model has no states");
  if (gt_states <= 0) throw EmptyGroundTruth("ground truth has no states");
  std::set<int> covered;
  for (int s = 0; s < model_states; ++s) {
    std::optional<int> g = mapper(s);
    if (g) {
      if (*g < 0 || *g >= gt_states) throw InvalidConfig("mapper returned an unknown ground-truth state");
      covered.insert(*g);
    }
  }
  PrecisionRecall r;
  r.covered = static_cast<int>(covered.size());
  r.precision = static_cast<double>(r.covered) / model_states;
  r.recall = static_cast<double>(r.covered) / gt_states;
  r.f1 = r.precision + r.recall > 0 ? 2 * r.precision * r.recall / (r.precision + r.recall) : 0.0;
  return r;
}

StateMapper classify_mapper(const AppModel& model, const std::vector<HierarchyPtr>& gt, Classifier& clf,
                            const std::map<std::string, int>& overrides) {
  return [&model, &gt, &clf, overrides](int s) -> std::optional<int> {
    const std::string& id = model.states.at(s).id;
    if (auto it = overrides.find(id); it != overrides.end()) {
      if (it->second < 0) return std::nullopt;
      return it->second;
    }
    std::optional<int> best;
    ClassLabel best_label = ClassLabel::kDistinct;
    for (std::size_t g = 0; g < gt.size(); ++g) {
      ClassLabel c = clf.classify(model.states[s].page->root(), gt[g]->root());
      if (c < best_label) {
        best_label = c;
        best = static_cast<int>(g);
      }
    }
    return best;
  };
}

double gamma_f1(const std::vector<double>& distances, const std::vector<Coarse>& truth, double t_c, double t_n) {
  std::vector<Coarse> pred(distances.size());
  WholePageSAF saf{SafKind::kStructural, t_c, t_n};
  for (std::size_t i = 0; i < distances.size(); ++i) pred[i] = coarse(gamma_of(saf, distances[i]));
  return multiclass_f1(pred, truth);
}

TuneResult tune_thresholds(const std::vector<double>& distances, const std::vector<Coarse>& truth, int budget,
                           std::uint64_t seed) {
  if (budget < 1) throw InvalidConfig("budget must be >= 1");
  if (distances.size() != truth.size()) throw LengthMismatch("distances and truth differ in length");
  double lo = 0.0;
  double hi = 1.0;
  if (!distances.empty()) {
    lo = *std::min_element(distances.begin(), distances.end());
    hi = *std::max_element(distances.begin(), distances.end());
  }
  double span = hi > lo ? hi - lo : 1.0;
  lo = std::max(0.0, lo - 0.05 * span);
  hi = hi + 0.05 * span;

  TuneResult res;
  bool have = false;
  auto trial = [&](double a, double b) {
    double tc = std::min(a, b);
    double tn = std::max(a, b);
    double f = gamma_f1(distances, truth, tc, tn);
    res.trace.push_back(f);
    if (!have || f > res.best_f1) {
      have = true;
      res.best_f1 = f;
      res.t_c = tc;
      res.t_n = tn;
    }
    res.best_so_far.push_back(res.best_f1);
  };

  std::mt19937_64 rng(seed);
  auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  const int random_trials = budget == 1 ? 1 : std::max(1, budget / 2);
  for (int i = 0; i < random_trials; ++i) {
    double a = lo + unit() * (hi - lo);
    double b = lo + unit() * (hi - lo);
    trial(a, b);
  }

  // Cut points where the classification can change.
  std::vector<double> sorted = distances;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<double> cuts{lo};
  for (std::size_t i = 1; i < sorted.size(); ++i) cuts.push_back(0.5 * (sorted[i - 1] + sorted[i]));
  cuts.push_back(hi);
  int remaining = budget - random_trials;
  if (remaining > 0) {
    const int k = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(remaining))));
    auto nearest = [&](double x) {
      std::vector<double> c = cuts;
      std::stable_sort(c.begin(), c.end(), [&](double p, double q) { return std::abs(p - x) < std::abs(q - x); });
      c.resize(std::min<std::size_t>(c.size(), static_cast<std::size_t>(k)));
      std::sort(c.begin(), c.end());
      return c;
    };
    std::vector<double> ca = nearest(res.t_c);
    std::vector<double> cb = nearest(res.t_n);
    for (double a : ca) {
      for (double b : cb) {
        if (remaining == 0) break;
        if (a > b) continue;
        trial(a, b);
        --remaining;
      }
    }
  }
  return res;
}

std::vector<double> interval_max(const std::vector<double>& trace, int interval) {
  if (interval < 1) throw InvalidConfig("interval must be >= 1");
  std::vector<double> out;
  for (std::size_t i = 0; i < trace.size(); i += static_cast<std::size_t>(interval)) {
    std::size_t end = std::min(trace.size(), i + static_cast<std::size_t>(interval));
    out.push_back(*std::max_element(trace.begin() + static_cast<long>(i), trace.begin() + static_cast<long>(end)));
  }
  return out;
}

}  // namespace fragscope
