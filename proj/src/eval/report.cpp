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

#include "lanewatch/eval/report.hpp"

#include <algorithm>
#include <limits>

#include <json.hpp>

#include "lanewatch/common/error.hpp"
#include "lanewatch/common/io.hpp"

namespace lanewatch::eval {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool same_confidence(double a, double b) { return std::abs(a - b) <= 1e-12; }

double mean_defined(const std::vector<double>& xs) {
  double sum = 0.0;
  std::size_t n = 0;
  for (double x : xs) {
    if (std::isnan(x)) continue;
    sum += x;
    ++n;
  }
  return n == 0 ? kNaN : sum / static_cast<double>(n);
}

/// Mean of the rows with failures; counts summed over all rows.
MetricRow average(const std::vector<MetricRow>& rows, MetricRow out) {
  std::vector<double> pr, re, f3, auc;
  for (const auto& r : rows) {
    out.counts += r.counts;
    if (!r.has_failures()) continue;
    pr.push_back(r.precision);
    re.push_back(r.recall);
    f3.push_back(r.f3);
    auc.push_back(r.auc);
  }
  out.precision = mean_defined(pr);
  out.recall = mean_defined(re);
  out.f3 = mean_defined(f3);
  out.auc = mean_defined(auc);
  return out;
}

std::string ttf_label(int ttf) { return ttf == kAverageTtf ? "avg" : std::to_string(ttf); }

nlohmann::ordered_json number_or_null(double x) {
  return std::isnan(x) ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(x);
}

double number_or_nan(const nlohmann::json& j) { return j.is_null() ? kNaN : j.get<double>(); }

}  // namespace

const MetricRow* EvalReport::find(std::string_view estimator, std::string_view benchmark, int ttf,
                                  double confidence) const {
  for (const auto& r : rows) {
    if (r.estimator == estimator && r.benchmark == benchmark && r.ttf == ttf &&
        same_confidence(r.confidence, confidence)) {
      return &r;
    }
  }
  return nullptr;
}

std::vector<double> EvalReport::f3_cells(std::string_view estimator, double confidence) const {
  std::vector<double> out;
  for (const auto& r : rows) {
    if (r.estimator == estimator && same_confidence(r.confidence, confidence) &&
        r.benchmark != kAllBenchmarks && r.ttf != kAverageTtf && r.has_failures()) {
      out.push_back(r.f3);
    }
  }
  return out;
}

std::vector<std::string> EvalReport::estimators() const {
  std::vector<std::string> out;
  for (const auto& r : rows) {
    if (std::find(out.begin(), out.end(), r.estimator) == out.end()) out.push_back(r.estimator);
  }
  return out;
}

void EvalReport::merge(const EvalReport& other) {
  rows.insert(rows.end(), other.rows.begin(), other.rows.end());
  sources.insert(sources.end(), other.sources.begin(), other.sources.end());
  warnings.insert(warnings.end(), other.warnings.begin(), other.warnings.end());
}

EvalReport evaluate(const std::string& estimator, std::span<const BenchmarkWindows> benchmarks,
                    const EvalConfig& cfg) {
  cfg.validate();
  require(!benchmarks.empty(), ErrorKind::kInsufficientData, "no benchmarks to evaluate");
  EvalReport report;
  for (const auto& b : benchmarks) {
    report.warnings.insert(report.warnings.end(), b.positives.warnings.begin(), b.positives.warnings.end());
    report.warnings.insert(report.warnings.end(), b.negatives.warnings.begin(), b.negatives.warnings.end());
    if (b.negatives.negatives.empty()) {
      report.warnings.push_back(estimator + "/" + b.benchmark + ": no nominal windows");
    }
  }

  for (double c : cfg.confidences) {
    std::vector<std::vector<MetricRow>> per_ttf(cfg.ttf_list.size());
    for (const auto& b : benchmarks) {
      const auto entry = std::find_if(b.thresholds.begin(), b.thresholds.end(),
                                      [c](const monitor::ThresholdEntry& t) { return same_confidence(t.confidence, c); });
      require(entry != b.thresholds.end(), ErrorKind::kConfig,
              "calibration of " + estimator + "/" + b.benchmark + " has no threshold for confidence " +
                  format_short(c));
      DetectionWindowSet windows = b.positives;
      windows.negatives = b.negatives.negatives;
      const auto negatives = windows.negative_scores();

      std::vector<MetricRow> rows;
      for (std::size_t i = 0; i < cfg.ttf_list.size(); ++i) {
        const int k = cfg.ttf_list[i];
        MetricRow row{estimator, b.benchmark, k, c, entry->threshold, {}};
        row.counts = confusion(windows, entry->threshold, k);
        if (row.counts.tp + row.counts.fn == 0) {
          row.precision = row.recall = row.f3 = row.auc = kNaN;
        } else {
          row.precision = row.counts.precision();
          row.recall = row.counts.recall();
          row.f3 = f_beta(row.precision, row.recall, cfg.beta);
          const auto positives = windows.positive_scores(k);
          row.auc = negatives.empty() ? kNaN : auc_roc(positives, negatives);
        }
        rows.push_back(row);
        per_ttf[i].push_back(row);
      }
      report.rows.insert(report.rows.end(), rows.begin(), rows.end());
      report.rows.push_back(average(rows, MetricRow{estimator, b.benchmark, kAverageTtf, c, entry->threshold, {}}));
    }

    std::vector<MetricRow> all_rows;
    for (std::size_t i = 0; i < cfg.ttf_list.size(); ++i) {
      all_rows.push_back(average(per_ttf[i], MetricRow{estimator, kAllBenchmarks, cfg.ttf_list[i], c, kNaN, {}}));
    }
    report.rows.insert(report.rows.end(), all_rows.begin(), all_rows.end());
    report.rows.push_back(average(all_rows, MetricRow{estimator, kAllBenchmarks, kAverageTtf, c, kNaN, {}}));
  }
  return report;
}

std::string to_csv(const EvalReport& report) {
  std::string out = "estimator,confidence,benchmark,ttf,threshold,tp,fp,fn,tn,precision,recall,f3,auc\n";
  for (const auto& r : report.rows) {
    out += r.estimator + "," + format_short(r.confidence) + "," + r.benchmark + "," + ttf_label(r.ttf) + "," +
           (std::isnan(r.threshold) ? "NA" : format_double(r.threshold)) + "," + std::to_string(r.counts.tp) +
           "," + std::to_string(r.counts.fp) + "," + std::to_string(r.counts.fn) + "," +
           std::to_string(r.counts.tn) + "," + format_fixed(r.precision, 4) + "," + format_fixed(r.recall, 4) +
           "," + format_fixed(r.f3, 4) + "," + format_fixed(r.auc, 4) + "\n";
  }
  return out;
}

std::string to_table(const EvalReport& report, std::span<const std::pair<std::string, double>> methods) {
  std::vector<std::string> benchmarks;
  std::vector<int> ttfs;
  for (const auto& r : report.rows) {
    if (std::find(benchmarks.begin(), benchmarks.end(), r.benchmark) == benchmarks.end()) {
      benchmarks.push_back(r.benchmark);
    }
    if (std::find(ttfs.begin(), ttfs.end(), r.ttf) == ttfs.end()) ttfs.push_back(r.ttf);
  }
  std::stable_partition(benchmarks.begin(), benchmarks.end(), [](const std::string& b) { return b != kAllBenchmarks; });
  std::stable_partition(ttfs.begin(), ttfs.end(), [](int k) { return k != kAverageTtf; });

  std::string out = "benchmark,ttf";
  for (const auto& [est, c] : methods) {
    const std::string name = est + "@" + format_short(c);
    out += "," + name + " Pr," + name + " Re," + name + " F3";
  }
  out += "\n";
  const auto pct = [](double x) { return format_fixed(100.0 * x, 1); };
  for (const auto& b : benchmarks) {
    for (int k : ttfs) {
      out += b + "," + ttf_label(k);
      for (const auto& [est, c] : methods) {
        const MetricRow* r = report.find(est, b, k, c);
        if (r == nullptr) {
          out += ",NA,NA,NA";
        } else {
          out += "," + pct(r->precision) + "," + pct(r->recall) + "," + pct(r->f3);
        }
      }
      out += "\n";
    }
  }
  return out;
}

std::string serialize_report(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["format"] = "lanewatch-report";
  j["version"] = 1;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : report.rows) {
    nlohmann::ordered_json row;
    row["estimator"] = r.estimator;
    row["benchmark"] = r.benchmark;
    row["ttf"] = ttf_label(r.ttf);
    row["confidence"] = r.confidence;
    row["threshold"] = number_or_null(r.threshold);
    row["tp"] = r.counts.tp;
    row["fp"] = r.counts.fp;
    row["fn"] = r.counts.fn;
    row["tn"] = r.counts.tn;
    row["precision"] = number_or_null(r.precision);
    row["recall"] = number_or_null(r.recall);
    row["f3"] = number_or_null(r.f3);
    row["auc"] = number_or_null(r.auc);
    j["rows"].push_back(row);
  }
  j["sources"] = nlohmann::ordered_json::array();
  for (const auto& src : report.sources) {
    nlohmann::ordered_json sj;
    sj["estimator"] = src.estimator;
    sj["benchmark"] = src.benchmark;
    sj["models"] = src.models;
    sj["calibration"] = src.calibration;
    sj["traces"] = src.traces;
    j["sources"].push_back(sj);
  }
  j["warnings"] = report.warnings;
  return j.dump(2) + "\n";
}

EvalReport parse_report(std::string_view text) {
  EvalReport report;
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.value("format", "") != "lanewatch-report" || j.value("version", 0) != 1) {
      fail(ErrorKind::kParse, "not a version-1 report");
    }
    for (const auto& row : j.at("rows")) {
      MetricRow r;
      r.estimator = row.at("estimator").get<std::string>();
      r.benchmark = row.at("benchmark").get<std::string>();
      const auto ttf = row.at("ttf").get<std::string>();
      r.ttf = ttf == "avg" ? kAverageTtf : std::stoi(ttf);
      r.confidence = row.at("confidence").get<double>();
      r.threshold = number_or_nan(row.at("threshold"));
      r.counts = {row.at("tp").get<std::size_t>(), row.at("fp").get<std::size_t>(),
                  row.at("fn").get<std::size_t>(), row.at("tn").get<std::size_t>()};
      r.precision = number_or_nan(row.at("precision"));
      r.recall = number_or_nan(row.at("recall"));
      r.f3 = number_or_nan(row.at("f3"));
      r.auc = number_or_nan(row.at("auc"));
      report.rows.push_back(std::move(r));
    }
    if (j.contains("sources")) {
      for (const auto& sj : j.at("sources")) {
        report.sources.push_back({sj.at("estimator").get<std::string>(), sj.at("benchmark").get<std::string>(),
                                  sj.at("models").get<std::vector<std::string>>(),
                                  sj.at("calibration").get<std::string>(),
                                  sj.at("traces").get<std::vector<std::string>>()});
      }
    }
    report.warnings = j.value("warnings", std::vector<std::string>{});
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kParse, std::string("report: ") + e.what());
  } catch (const std::invalid_argument&) {
    fail(ErrorKind::kParse, "report: malformed ttf label");
  }
  return report;
}

void save_report(const EvalReport& report, const std::filesystem::path& path) {
  write_file_atomic(path, serialize_report(report));
}

EvalReport load_report(const std::filesystem::path& path) { return parse_report(read_file(path)); }

}  // namespace lanewatch::eval
