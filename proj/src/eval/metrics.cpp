// Copyright 2026 The Lanewatch Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lanewatch/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

#include "lanewatch/common/error.hpp"
#include "lanewatch/common/io.hpp"

namespace lanewatch::eval {

void EvalConfig::validate() const {
  require(!ttf_list.empty(), ErrorKind::kConfig, "ttf list is empty");
  for (int k : ttf_list) require(k > 0, ErrorKind::kConfig, "ttf values must be positive integers");
  require(beta > 0.0, ErrorKind::kConfig, "beta must be positive");
  require(window_seconds > 0.0, ErrorKind::kConfig, "window length must be positive");
  for (double c : confidences) {
    require(c > 0.0 && c < 1.0, ErrorKind::kConfig, "confidence levels must lie in (0, 1)");
  }
}

std::vector<double> DetectionWindowSet::positive_scores(int ttf) const {
  std::vector<double> out;
  for (const auto& p : positives) {
    if (p.ttf == ttf) out.push_back(p.window.max_score);
  }
  return out;
}

std::vector<double> DetectionWindowSet::negative_scores() const {
  std::vector<double> out;
  out.reserve(negatives.size());
  for (const auto& n : negatives) out.push_back(n.max_score);
  return out;
}

std::size_t DetectionWindowSet::positive_count(int ttf) const {
  return static_cast<std::size_t>(
      std::count_if(positives.begin(), positives.end(), [ttf](const PositiveWindow& p) { return p.ttf == ttf; }));
}

void DetectionWindowSet::append(const DetectionWindowSet& other) {
  if (window_len == 0) window_len = other.window_len;
  positives.insert(positives.end(), other.positives.begin(), other.positives.end());
  negatives.insert(negatives.end(), other.negatives.begin(), other.negatives.end());
  warnings.insert(warnings.end(), other.warnings.begin(), other.warnings.end());
}

DetectionWindowSet label_windows(const sim::SimTrace& trace, const EvalConfig& cfg) {
  cfg.validate();
  const auto& rec = trace.records;
  DetectionWindowSet out;
  const std::size_t w = sim::window_len_frames(sim::frame_rate(trace), cfg.window_seconds);
  out.window_len = w;

  // unusable[i]: off-track, or within w frames after a reset.
  std::vector<std::size_t> unusable_prefix(rec.size() + 1, 0);
  std::size_t excluded_until = 0;
  for (std::size_t i = 0; i < rec.size(); ++i) {
    const bool bad = rec[i].off_track || i < excluded_until;
    if (rec[i].off_track) excluded_until = i + 1 + w;
    unusable_prefix[i + 1] = unusable_prefix[i] + (bad ? 1 : 0);
  }
  const auto usable = [&](std::size_t b, std::size_t e) { return unusable_prefix[e] == unusable_prefix[b]; };
  const auto window_max = [&](std::size_t b, std::size_t e) {
    double m = rec[b].score;
    for (std::size_t i = b + 1; i < e; ++i) m = std::max(m, rec[i].score);
    return m;
  };

  if (trace.is_nominal()) {
    std::size_t dropped = 0;
    for (std::size_t b = 0; b + w <= rec.size(); b += w) {
      if (usable(b, b + w)) {
        out.negatives.push_back({b, b + w, window_max(b, b + w)});
      } else {
        ++dropped;
      }
    }
    if (dropped > 0) {
      out.warnings.push_back("nominal trace " + trace.meta.model_id + ": " + std::to_string(dropped) +
                             " window(s) with off-track frames dropped");
    }
    return out;
  }

  for (std::size_t f : trace.failure_onsets()) {
    std::vector<int> missing;
    for (int k : cfg.ttf_list) {
      const std::size_t back = static_cast<std::size_t>(k) * w;
      if (f < back) {
        missing.push_back(k);
        continue;
      }
      const std::size_t b = f - back;
      if (!usable(b, b + w)) continue;
      out.positives.push_back({f, k, {b, b + w, window_max(b, b + w)}});
    }
    if (!missing.empty()) {
      std::string list;
      for (int k : missing) list += (list.empty() ? "" : ",") + std::to_string(k);
      out.warnings.push_back("failure at frame " + std::to_string(f) +
                             " has too little history for TTF " + list);
    }
  }
  return out;
}

double Confusion::precision() const {
  if (tp + fp > 0) return static_cast<double>(tp) / static_cast<double>(tp + fp);
  return tp + fn == 0 ? 1.0 : 0.0;
}

double Confusion::recall() const {
  if (tp + fn == 0) return 1.0;
  return static_cast<double>(tp) / static_cast<double>(tp + fn);
}

double Confusion::false_alarm_rate() const {
  if (fp + tn == 0) return 0.0;
  return static_cast<double>(fp) / static_cast<double>(fp + tn);
}

Confusion& Confusion::operator+=(const Confusion& o) {
  tp += o.tp;
  fp += o.fp;
  fn += o.fn;
  tn += o.tn;
  return *this;
}

Confusion confusion(const DetectionWindowSet& windows, double tau, int ttf) {
  require(tau >= 0.0, ErrorKind::kDomain, "threshold must be non-negative");
  Confusion c;
  for (const auto& p : windows.positives) {
    if (p.ttf != ttf) continue;
    (p.window.max_score > tau ? c.tp : c.fn) += 1;
  }
  for (const auto& n : windows.negatives) (n.max_score > tau ? c.fp : c.tn) += 1;
  return c;
}

double f_beta(double precision, double recall, double beta) {
  require(beta > 0.0, ErrorKind::kDomain, "beta must be positive");
  require(precision >= 0.0 && precision <= 1.0 && recall >= 0.0 && recall <= 1.0, ErrorKind::kDomain,
          "precision and recall must lie in [0, 1]");
  if (precision == 0.0 && recall == 0.0) return 0.0;
  const double b2 = beta * beta;
  return (1.0 + b2) * precision * recall / (b2 * precision + recall);
}

namespace {

struct Ranked {
  std::vector<long long> doubled_ranks;  // 2 * midrank, per input element (a then b)
  std::vector<std::size_t> tie_sizes;
};

Ranked doubled_midranks(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size() + b.size();
  std::vector<double> v(a.begin(), a.end());
  v.insert(v.end(), b.begin(), b.end());
  for (double x : v) require(!std::isnan(x), ErrorKind::kInput, "sample contains NaN");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return v[i] < v[j]; });
  Ranked r;
  r.doubled_ranks.assign(n, 0);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
    // ranks i+1 .. j+1, doubled midrank = i + j + 2
    for (std::size_t k = i; k <= j; ++k) r.doubled_ranks[order[k]] = static_cast<long long>(i + j + 2);
    r.tie_sizes.push_back(j - i + 1);
    i = j + 1;
  }
  return r;
}

/// 2U for the first sample.
long long doubled_u(const Ranked& r, std::size_t n1) {
  long long sum = 0;
  for (std::size_t i = 0; i < n1; ++i) sum += r.doubled_ranks[i];
  return sum - static_cast<long long>(n1 * (n1 + 1));
}

double exact_p(const Ranked& r, std::size_t n1, std::size_t n2, long long u2) {
  const std::size_t n = n1 + n2;
  long long total = 0;
  for (long long x : r.doubled_ranks) total += x;
  // ways[k][s]: subsets of size k with doubled rank sum s.
  std::vector<std::vector<double>> ways(n1 + 1, std::vector<double>(static_cast<std::size_t>(total) + 1, 0.0));
  ways[0][0] = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = static_cast<std::size_t>(r.doubled_ranks[i]);
    for (std::size_t k = std::min(i + 1, n1); k >= 1; --k) {
      auto& dst = ways[k];
      const auto& src = ways[k - 1];
      for (std::size_t s = static_cast<std::size_t>(total); s >= x; --s) {
        if (src[s - x] != 0.0) dst[s] += src[s - x];
        if (s == x) break;
      }
    }
  }
  const long long centre = static_cast<long long>(n1 * n2);
  const long long observed = std::llabs(u2 - centre);
  const long long offset = static_cast<long long>(n1 * (n1 + 1));
  double hit = 0.0;
  double all = 0.0;
  for (std::size_t s = 0; s <= static_cast<std::size_t>(total); ++s) {
    const double c = ways[n1][s];
    if (c == 0.0) continue;
    all += c;
    if (std::llabs(static_cast<long long>(s) - offset - centre) >= observed) hit += c;
  }
  return std::min(1.0, hit / all);
}

double normal_p(const Ranked& r, std::size_t n1, std::size_t n2, long long u2) {
  const double n = static_cast<double>(n1 + n2);
  double ties = 0.0;
  for (std::size_t t : r.tie_sizes) {
    const double td = static_cast<double>(t);
    ties += td * td * td - td;
  }
  const double var = static_cast<double>(n1 * n2) / 12.0 * ((n + 1.0) - ties / (n * (n - 1.0)));
  if (var <= 0.0) return 1.0;
  const double dev = std::abs(0.5 * static_cast<double>(u2) - 0.5 * static_cast<double>(n1 * n2));
  const double z = std::max(0.0, dev - 0.5) / std::sqrt(var);
  return std::min(1.0, std::erfc(z / std::sqrt(2.0)));
}

}  // namespace

double auc_roc(std::span<const double> pos, std::span<const double> neg) {
  require(!pos.empty() && !neg.empty(), ErrorKind::kInsufficientData,
          "AUC needs at least one positive and one negative score");
  const Ranked r = doubled_midranks(pos, neg);
  return 0.5 * static_cast<double>(doubled_u(r, pos.size())) /
         (static_cast<double>(pos.size()) * static_cast<double>(neg.size()));
}

StatTestResult mann_whitney_u(std::span<const double> a, std::span<const double> b) {
  require(a.size() >= 2 && b.size() >= 2, ErrorKind::kInsufficientData,
          "Mann-Whitney U needs at least two values per sample");
  const Ranked r = doubled_midranks(a, b);
  const long long u2 = doubled_u(r, a.size());
  StatTestResult out;
  out.u = 0.5 * static_cast<double>(u2);
  out.exact = a.size() * b.size() <= kExactPairLimit;
  out.p_value = out.exact ? exact_p(r, a.size(), b.size(), u2) : normal_p(r, a.size(), b.size(), u2);
  out.significant = out.p_value < kAlpha;
  try {
    out.cohens_d = cohens_d(a, b);
  } catch (const Error&) {
    out.cohens_d.reset();
  }
  return out;
}

double cohens_d(std::span<const double> a, std::span<const double> b) {
  require(a.size() >= 2 && b.size() >= 2, ErrorKind::kInsufficientData,
          "Cohen's d needs at least two values per sample");
  const auto moments = [](std::span<const double> x) {
    const double m = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
    double ss = 0.0;
    for (double v : x) ss += (v - m) * (v - m);
    return std::pair{m, ss};
  };
  const auto [ma, ssa] = moments(a);
  const auto [mb, ssb] = moments(b);
  const double pooled = (ssa + ssb) / static_cast<double>(a.size() + b.size() - 2);
  require(pooled > 0.0, ErrorKind::kDomain, "Cohen's d is undefined for zero pooled standard deviation");
  return (ma - mb) / std::sqrt(pooled);
}

}  // namespace lanewatch::eval
